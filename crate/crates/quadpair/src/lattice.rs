//! Sparse integer vectors keyed by an ordered index type, and incremental
//! integer echelon forms ("online HNF") used for the relation lattices of
//! presented nil-2 groups. Coefficients are arbitrary-precision.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type SparseVec<K> = BTreeMap<K, BigInt>;

pub fn sv_add_assign<K: Ord + Clone>(a: &mut SparseVec<K>, b: &SparseVec<K>) {
    for (k, v) in b {
        let e = a.entry(k.clone()).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            a.remove(k);
        }
    }
}

pub fn sv_add_scaled<K: Ord + Clone>(a: &mut SparseVec<K>, b: &SparseVec<K>, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for (key, v) in b {
        let e = a.entry(key.clone()).or_insert_with(BigInt::zero);
        *e += v * k;
        if e.is_zero() {
            a.remove(key);
        }
    }
}

pub fn sv_neg<K: Ord + Clone>(a: &SparseVec<K>) -> SparseVec<K> {
    a.iter().map(|(k, v)| (k.clone(), -v)).collect()
}

pub fn sv_scale<K: Ord + Clone>(a: &SparseVec<K>, k: &BigInt) -> SparseVec<K> {
    if k.is_zero() {
        return SparseVec::new();
    }
    a.iter().map(|(key, v)| (key.clone(), v * k)).collect()
}

/// Incremental column echelon over Z for sparse vectors. Pivots are kept with
/// positive leading entries; vectors reduce canonically by floor division in
/// ascending key order, so `reduce` returns a canonical coset representative.
#[derive(Clone, Debug, Default)]
pub struct SparseLattice<K: Ord + Clone> {
    pivots: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> SparseLattice<K> {
    pub fn new() -> Self {
        SparseLattice { pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &K> {
        self.pivots.keys()
    }

    pub fn columns(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.pivots.values()
    }

    pub fn insert(&mut self, col: SparseVec<K>) {
        let mut stack = vec![col];
        while let Some(mut col) = stack.pop() {
            loop {
                let Some((row, val)) = col.iter().next().map(|(k, v)| (k.clone(), v.clone()))
                else {
                    break;
                };
                match self.pivots.get(&row) {
                    None => {
                        if val.is_negative() {
                            col = sv_neg(&col);
                        }
                        self.pivots.insert(row, col);
                        break;
                    }
                    Some(p) => {
                        let pv = p[&row].clone();
                        let (q, r) = val.div_rem(&pv);
                        if r.is_zero() {
                            let p = p.clone();
                            sv_add_scaled(&mut col, &p, &-q);
                        } else {
                            // gcd update
                            let e = pv.extended_gcd(&val);
                            let (d, s, t) = (e.gcd, e.x, e.y);
                            let p = p.clone();
                            let mut w = sv_scale(&p, &s);
                            sv_add_scaled(&mut w, &col, &t);
                            let mut old_red = p;
                            sv_add_scaled(&mut old_red, &w, &-(&pv / &d));
                            sv_add_scaled(&mut col, &w, &-(&val / &d));
                            self.pivots.insert(row.clone(), w);
                            stack.push(old_red);
                        }
                    }
                }
            }
        }
    }

    /// Canonical representative of col + lattice (floor reduction at pivots in
    /// ascending order). Walks only the keys present in the vector: reducing
    /// at a pivot row introduces entries at strictly larger rows only.
    pub fn reduce(&self, col: &SparseVec<K>) -> SparseVec<K> {
        let mut col = col.clone();
        let mut cursor: Option<K> = col.keys().next().cloned();
        while let Some(row) = cursor {
            if let Some(p) = self.pivots.get(&row) {
                if let Some(v) = col.get(&row) {
                    let q = v.div_floor(&p[&row]);
                    if !q.is_zero() {
                        sv_add_scaled(&mut col, p, &-q);
                    }
                }
            }
            cursor = col
                .range((std::ops::Bound::Excluded(row), std::ops::Bound::Unbounded))
                .next()
                .map(|(k, _)| k.clone());
        }
        col
    }

    pub fn contains(&self, col: &SparseVec<K>) -> bool {
        self.reduce(col).is_empty()
    }

    /// Inter-reduce pivot columns so that entries at other pivot rows are
    /// floor-reduced. Makes stored columns canonical (useful for lattice
    /// comparison); coset reduction is canonical either way.
    pub fn normalize(&mut self) {
        let keys: Vec<K> = self.pivots.keys().cloned().collect();
        for k in &keys {
            let mut col = self.pivots.remove(k).unwrap();
            // reduce entries of col at the other pivot rows (strictly larger keys)
            for other in keys.iter().filter(|o| *o > k) {
                let Some(v) = col.get(other) else { continue };
                let Some(p) = self.pivots.get(other) else { continue };
                let q = v.div_floor(&p[other]);
                if !q.is_zero() {
                    let p = p.clone();
                    sv_add_scaled(&mut col, &p, &-q);
                }
            }
            self.pivots.insert(k.clone(), col);
        }
    }

    pub fn is_sublattice_of(&self, other: &SparseLattice<K>) -> bool {
        self.pivots.values().all(|c| other.contains(c))
    }

    pub fn lattice_eq(&self, other: &SparseLattice<K>) -> bool {
        self.is_sublattice_of(other) && other.is_sublattice_of(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn v(entries: &[(usize, i64)]) -> SparseVec<usize> {
        entries.iter().map(|&(k, c)| (k, BigInt::from(c))).collect()
    }

    #[test]
    fn echelon_gcd() {
        let mut lat = SparseLattice::new();
        lat.insert(v(&[(0, 4)]));
        lat.insert(v(&[(0, 6)]));
        // gcd 2 at row 0
        assert!(lat.contains(&v(&[(0, 2)])));
        assert!(!lat.contains(&v(&[(0, 1)])));
    }

    #[test]
    fn echelon_two_rows() {
        let mut lat = SparseLattice::new();
        lat.insert(v(&[(0, 2), (1, 1)]));
        lat.insert(v(&[(1, 3)]));
        assert!(lat.contains(&v(&[(0, 2), (1, 4)])));
        assert!(lat.contains(&v(&[(0, 4), (1, 2)])));
        assert!(!lat.contains(&v(&[(0, 1)])));
        // canonical reduction idempotent
        let r1 = lat.reduce(&v(&[(0, 5), (1, 7)]));
        let r2 = lat.reduce(&r1);
        assert_eq!(r1, r2);
    }

    #[test]
    fn lattice_equality() {
        let mut a = SparseLattice::new();
        a.insert(v(&[(0, 2)]));
        a.insert(v(&[(1, 3)]));
        let mut b = SparseLattice::new();
        b.insert(v(&[(0, 2), (1, 3)]));
        b.insert(v(&[(0, 2), (1, -3)]));
        b.insert(v(&[(0, 4), (1, 3)]));
        assert!(b.is_sublattice_of(&a));
        assert!(a.lattice_eq(&b) == b.is_sublattice_of(&a) && a.is_sublattice_of(&b));
    }

    #[test]
    fn negative_pivot_normalized() {
        let mut lat = SparseLattice::new();
        lat.insert(v(&[(2, -5)]));
        let p = lat.columns().next().unwrap();
        assert!(p[&2].is_positive() || p[&2].is_one());
    }
}
