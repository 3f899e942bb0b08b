//! Exact integer-lattice algebra: finitely generated abelian groups presented
//! by integer relation matrices, Smith and Hermite normal forms, and the
//! tensor / reduced-tensor / exterior square constructions.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::QpError;

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Dense matrix over the integers. Relators are stored as columns.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = big(*v);
            }
        }
        m
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<BigInt>>) -> Self {
        let c = cols.len();
        let mut m = Self::zero(rows, c);
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "bad column length");
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    if !add.is_zero() {
                        m[(i, j)] += add;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_a += k * row_b
    fn add_row(&mut self, a: usize, b: usize, k: &BigInt) {
        for j in 0..self.cols {
            let add = k * &self[(b, j)];
            self[(a, j)] += add;
        }
    }

    /// col_a += k * col_b
    fn add_col(&mut self, a: usize, b: usize, k: &BigInt) {
        for i in 0..self.rows {
            let add = k * &self[(i, b)];
            self[(i, a)] += add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self[(i, a)].clone();
            self[(i, a)] = v;
        }
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = &num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

/// Smith normal form: returns (U, S, V) with U*M*V = S, U and V unimodular,
/// S diagonal with d1 | d2 | ... and nonnegative diagonal entries.
///
/// Pivot selection is deterministic: smallest nonzero magnitude, ties broken
/// by row-major position, so the output is reproducible for a given input.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);

    let mut t = 0;
    while t < n {
        // deterministic pivot: smallest |entry| != 0 in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if s[(i, j)].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if s[(i, j)].abs() < s[(pi, pj)].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            // clear column t
            for i in t + 1..m.rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = div_round(&s[(i, t)], &s[(t, t)]);
                if !q.is_zero() {
                    s.add_row(i, t, &-&q);
                    u.add_row(i, t, &-&q);
                }
                if !s[(i, t)].is_zero() {
                    s.swap_rows(t, i);
                    u.swap_rows(t, i);
                    clean = false;
                }
            }
            // clear row t
            for j in t + 1..m.cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = div_round(&s[(t, j)], &s[(t, t)]);
                if !q.is_zero() {
                    s.add_col(j, t, &-&q);
                    v.add_col(j, t, &-&q);
                }
                if !s[(t, j)].is_zero() {
                    s.swap_cols(t, j);
                    v.swap_cols(t, j);
                    clean = false;
                }
            }
            if clean {
                let col_ok = (t + 1..m.rows).all(|i| s[(i, t)].is_zero());
                let row_ok = (t + 1..m.cols).all(|j| s[(t, j)].is_zero());
                if col_ok && row_ok {
                    break;
                }
            }
        }
        t += 1;
    }

    // normalize signs
    for i in 0..n {
        if s[(i, i)].is_negative() {
            s.negate_row(i);
            u.negate_row(i);
        }
    }
    // enforce divisibility chain
    loop {
        let mut fixed = true;
        for i in 0..n.saturating_sub(1) {
            let a = s[(i, i)].clone();
            let b = s[(i + 1, i + 1)].clone();
            if b.is_zero() || (!a.is_zero() && (&b % &a).is_zero()) {
                continue;
            }
            if a.is_zero() {
                // move the nonzero entry up
                s.swap_rows(i, i + 1);
                u.swap_rows(i, i + 1);
                s.swap_cols(i, i + 1);
                v.swap_cols(i, i + 1);
                fixed = false;
                continue;
            }
            // replace (a, b) by (gcd, lcm):
            // col_i += col_{i+1}; then clear with row/col ops
            s.add_col(i, i + 1, &BigInt::one());
            v.add_col(i, i + 1, &BigInt::one());
            loop {
                let q = div_round(&s[(i + 1, i)], &s[(i, i)]);
                if !q.is_zero() {
                    s.add_row(i + 1, i, &-&q);
                    u.add_row(i + 1, i, &-&q);
                }
                if s[(i + 1, i)].is_zero() {
                    break;
                }
                s.swap_rows(i, i + 1);
                u.swap_rows(i, i + 1);
            }
            let q = div_exact(&s[(i, i + 1)], &s[(i, i)]);
            if !q.is_zero() {
                s.add_col(i + 1, i, &-&q);
                v.add_col(i + 1, i, &-&q);
            }
            if s[(i, i)].is_negative() {
                s.negate_row(i);
                u.negate_row(i);
            }
            if s[(i + 1, i + 1)].is_negative() {
                s.negate_row(i + 1);
                u.negate_row(i + 1);
            }
            fixed = false;
        }
        if fixed {
            break;
        }
    }
    (u, s, v)
}

/// Rounded division: quotient q minimizing |a - q*b|.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    assert!(!b.is_zero());
    let (q, r) = a.div_rem(b);
    let two_r: BigInt = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn div_exact(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    assert!(r.is_zero(), "non-exact division");
    q
}

/// Column-style Hermite normal form of the lattice spanned by the columns of M.
///
/// Returns (H, T) where H = M*T, T unimodular, H in column echelon form with
/// positive pivots and entries to the right of each pivot reduced into [0, pivot).
/// Zero columns of H are trimmed to the right.
#[derive(Clone)]
pub struct Hnf {
    pub h: IntMatrix,
    /// T with M*T = [H | 0]
    pub t: IntMatrix,
    /// (pivot_row, col) pairs for the nonzero columns of H, in column order
    pub pivots: Vec<(usize, usize)>,
}

pub fn hermite_normal_form(m: &IntMatrix) -> Hnf {
    let mut h = m.clone();
    let mut t = IntMatrix::identity(m.cols);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut col = 0;
    for row in 0..m.rows {
        if col >= h.cols {
            break;
        }
        // gcd-reduce all columns >= col at this row into column `col`
        loop {
            let mut best: Option<usize> = None;
            for j in col..h.cols {
                if h[(row, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(b) => {
                        if h[(row, j)].abs() < h[(row, b)].abs() {
                            best = Some(j);
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(col, b);
            t.swap_cols(col, b);
            let mut again = false;
            for j in col + 1..h.cols {
                if h[(row, j)].is_zero() {
                    continue;
                }
                let q = div_round(&h[(row, j)], &h[(row, col)]);
                if !q.is_zero() {
                    h.add_col(j, col, &-&q);
                    t.add_col(j, col, &-&q);
                }
                if !h[(row, j)].is_zero() {
                    again = true;
                }
            }
            if !again {
                break;
            }
        }
        if h[(row, col)].is_zero() {
            continue;
        }
        if h[(row, col)].is_negative() {
            h.negate_col(col);
            t.negate_col(col);
        }
        // reduce earlier columns at this row into [0, pivot)
        for j in 0..col {
            let q = h[(row, j)].div_floor(&h[(row, col)]);
            if !q.is_zero() {
                h.add_col(j, col, &-&q);
                t.add_col(j, col, &-&q);
            }
        }
        pivots.push((row, col));
        col += 1;
    }
    Hnf { h, t, pivots }
}

impl Hnf {
    /// Reduce v to the canonical representative of v + lattice. The second
    /// component returns the coefficients (in terms of HNF columns) used.
    pub fn reduce(&self, v: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut r = v.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.h.cols];
        for &(row, col) in &self.pivots {
            let q = r[row].div_floor(&self.h[(row, col)]);
            if !q.is_zero() {
                for i in 0..self.h.rows {
                    let sub = &q * &self.h[(i, col)];
                    r[i] -= sub;
                }
                coeffs[col] = q;
            }
        }
        (r, coeffs)
    }

    /// Does v lie in the lattice?
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).0.iter().all(|x| x.is_zero())
    }

    /// Solve M*x = v for x integral (M the original matrix). Returns None if
    /// no integral solution exists.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let (r, y) = self.reduce(v);
        if !r.iter().all(|x| x.is_zero()) {
            return None;
        }
        // v = sum_j y_j * H_col_j ; x = T * y
        Some(self.t.mul_vec(&y))
    }
}

/// Integer kernel basis of M (columns x with M*x = 0), via HNF transform.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let hnf = hermite_normal_form(m);
    let rank = hnf.pivots.len();
    (rank..m.cols).map(|j| hnf.t.column(j)).collect()
}

/// A finitely generated abelian group: ngens generators, relations given by
/// the columns of `relations`.
#[derive(Clone)]
pub struct AbGroupPresentation {
    pub ngens: usize,
    pub relations: IntMatrix,
    hnf: OnceLock<Hnf>,
    snf: OnceLock<(IntMatrix, IntMatrix, IntMatrix)>,
}

impl fmt::Debug for AbGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbGroup(ngens={}, nrels={})", self.ngens, self.relations.cols)
    }
}

impl PartialEq for AbGroupPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.ngens == other.ngens && self.relations == other.relations
    }
}

impl AbGroupPresentation {
    pub fn new(ngens: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows, ngens, "relation rows must match ngens");
        AbGroupPresentation { ngens, relations, hnf: OnceLock::new(), snf: OnceLock::new() }
    }

    pub fn free(ngens: usize) -> Self {
        Self::new(ngens, IntMatrix::zero(ngens, 0))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// Z^n / (d1, ..., dk diag relations); zero entries mean free factors.
    pub fn diagonal(orders: &[i64]) -> Self {
        let n = orders.len();
        let cols: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| {
                let mut c = vec![BigInt::zero(); n];
                c[i] = big(d);
                c
            })
            .collect();
        Self::new(n, IntMatrix::from_columns(n, cols))
    }

    pub fn hnf(&self) -> &Hnf {
        self.hnf.get_or_init(|| hermite_normal_form(&self.relations))
    }

    pub fn snf(&self) -> &(IntMatrix, IntMatrix, IntMatrix) {
        self.snf.get_or_init(|| smith_normal_form(&self.relations))
    }

    pub fn normal_form(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.ngens);
        self.hnf().reduce(coords).0
    }

    pub fn is_zero_vec(&self, coords: &[BigInt]) -> bool {
        self.hnf().contains(coords)
    }

    pub fn eq_vecs(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        let d: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_zero_vec(&d)
    }

    pub fn element(&self, coords: Vec<BigInt>) -> AbElement<'_> {
        assert_eq!(coords.len(), self.ngens);
        AbElement { group: self, coords }
    }

    pub fn gen(&self, i: usize) -> AbElement<'_> {
        let mut coords = vec![BigInt::zero(); self.ngens];
        coords[i] = BigInt::one();
        AbElement { group: self, coords }
    }

    pub fn zero_el(&self) -> AbElement<'_> {
        AbElement { group: self, coords: vec![BigInt::zero(); self.ngens] }
    }

    /// Invariant factors (d1 | d2 | ...) with 0 for free summands, as
    /// (torsion coefficients > 1, free rank).
    pub fn invariants(&self) -> (Vec<BigInt>, usize) {
        let (_, s, _) = self.snf();
        let n = self.ngens.min(self.relations.cols);
        let mut torsion = Vec::new();
        let mut rank = self.ngens;
        for i in 0..n {
            let d = s[(i, i)].clone();
            if d.is_zero() {
                continue;
            }
            rank -= 1;
            if !d.is_one() {
                torsion.push(d);
            }
        }
        (torsion, rank)
    }

    /// Group order; None when infinite.
    pub fn order(&self) -> Option<BigInt> {
        let (torsion, rank) = self.invariants();
        if rank > 0 {
            return None;
        }
        Some(torsion.into_iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.order().map_or(false, |o| o.is_one())
    }
}

/// Element of a finitely generated abelian group, by generator coordinates.
#[derive(Clone, Debug)]
pub struct AbElement<'a> {
    pub group: &'a AbGroupPresentation,
    pub coords: Vec<BigInt>,
}

impl<'a> AbElement<'a> {
    pub fn add(&self, other: &AbElement<'a>) -> AbElement<'a> {
        assert!(std::ptr::eq(self.group, other.group) || self.group == other.group);
        AbElement {
            group: self.group,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> AbElement<'a> {
        AbElement { group: self.group, coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> AbElement<'a> {
        AbElement { group: self.group, coords: self.coords.iter().map(|a| a * k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_zero_vec(&self.coords)
    }

    pub fn normal_form(&self) -> Vec<BigInt> {
        self.group.normal_form(&self.coords)
    }
}

impl PartialEq for AbElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.group.eq_vecs(&self.coords, &other.coords)
    }
}

/// Homomorphism of presented abelian groups, by a matrix on generators.
/// Well-definedness (relations map into the target relation lattice) is
/// checked at construction.
#[derive(Clone, Debug)]
pub struct AbHom {
    pub source: AbGroupPresentation,
    pub target: AbGroupPresentation,
    pub matrix: IntMatrix,
}

impl AbHom {
    pub fn new(
        source: AbGroupPresentation,
        target: AbGroupPresentation,
        matrix: IntMatrix,
    ) -> Result<Self, QpError> {
        assert_eq!(matrix.rows, target.ngens);
        assert_eq!(matrix.cols, source.ngens);
        for j in 0..source.relations.cols {
            let img = matrix.mul_vec(&source.relations.column(j));
            if !target.is_zero_vec(&img) {
                return Err(QpError::IllFormed(format!(
                    "abelian hom does not kill source relation {j}"
                )));
            }
        }
        Ok(AbHom { source, target, matrix })
    }

    pub fn identity(g: &AbGroupPresentation) -> Self {
        AbHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ngens),
        }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, first: &AbHom) -> AbHom {
        // self o first
        AbHom {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
        }
    }

    /// Is this map an isomorphism of the presented groups?
    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    pub fn is_surjective(&self) -> bool {
        // columns of matrix + target relations must span Z^target.ngens
        let n = self.target.ngens;
        let mut cols = Vec::new();
        for j in 0..self.matrix.cols {
            cols.push(self.matrix.column(j));
        }
        for j in 0..self.target.relations.cols {
            cols.push(self.target.relations.column(j));
        }
        let m = IntMatrix::from_columns(n, cols);
        let hnf = hermite_normal_form(&m);
        hnf.pivots.len() == n && hnf.pivots.iter().all(|&(r, c)| hnf.h[(r, c)].is_one())
    }

    pub fn is_injective(&self) -> bool {
        // preimage of the target lattice must equal the source lattice:
        // solve {v : M v in L_target} = projection of ker [M | -R_target]
        let n = self.target.ngens;
        let s = self.source.ngens;
        let total = s + self.target.relations.cols;
        let mut stacked = IntMatrix::zero(n, total);
        for i in 0..n {
            for j in 0..s {
                stacked[(i, j)] = self.matrix[(i, j)].clone();
            }
            for j in 0..self.target.relations.cols {
                stacked[(i, s + j)] = -self.target.relations[(i, j)].clone();
            }
        }
        let kernel = kernel_basis(&stacked);
        // preimage lattice generated by the first s coordinates of the kernel
        for k in kernel {
            let v: Vec<BigInt> = k[..s].to_vec();
            if !self.source.is_zero_vec(&v) {
                return false;
            }
        }
        true
    }
}

/// Tensor square of a presented abelian group, with its bilinear pairing.
///
/// Generators are ordered pairs (i, j) (row-major); relations are induced
/// from the relations of A in each slot.
pub fn tensor_square(a: &AbGroupPresentation) -> AbGroupPresentation {
    tensor_product(a, a)
}

pub fn tensor_product(
    a: &AbGroupPresentation,
    b: &AbGroupPresentation,
) -> AbGroupPresentation {
    let n = a.ngens;
    let m = b.ngens;
    let mut cols = Vec::new();
    for j in 0..a.relations.cols {
        let rel = a.relations.column(j);
        for l in 0..m {
            let mut c = vec![BigInt::zero(); n * m];
            for (i, ri) in rel.iter().enumerate() {
                c[i * m + l] = ri.clone();
            }
            cols.push(c);
        }
    }
    for j in 0..b.relations.cols {
        let rel = b.relations.column(j);
        for i in 0..n {
            let mut c = vec![BigInt::zero(); n * m];
            for (l, rl) in rel.iter().enumerate() {
                c[i * m + l] = rl.clone();
            }
            cols.push(c);
        }
    }
    AbGroupPresentation::new(n * m, IntMatrix::from_columns(n * m, cols))
}

/// The bilinear pairing A x A -> tensor_square(A) on coordinates.
pub fn tensor_pairing(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); a.len() * b.len()];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            v[i * b.len() + j] = ai * bj;
        }
    }
    v
}

/// Reduced tensor square  ⊗̂²A = A⊗A / (a⊗b + b⊗a ~ 0)  together with the
/// projection coordinates (identity on pair coordinates).
pub fn reduced_tensor_square(a: &AbGroupPresentation) -> AbGroupPresentation {
    let t = tensor_square(a);
    let n = a.ngens;
    let mut cols: Vec<Vec<BigInt>> = (0..t.relations.cols).map(|j| t.relations.column(j)).collect();
    for i in 0..n {
        for j in i..n {
            let mut c = vec![BigInt::zero(); n * n];
            c[i * n + j] += BigInt::one();
            c[j * n + i] += BigInt::one();
            cols.push(c);
        }
    }
    AbGroupPresentation::new(n * n, IntMatrix::from_columns(n * n, cols))
}

/// Exterior square Λ²A presented on the same pair coordinates as ⊗̂²A
/// (quotient by the diagonal a⊗a), so the projection q is the identity map
/// on coordinates.
pub fn exterior_square(a: &AbGroupPresentation) -> AbGroupPresentation {
    let r = reduced_tensor_square(a);
    let n = a.ngens;
    let mut cols: Vec<Vec<BigInt>> = (0..r.relations.cols).map(|j| r.relations.column(j)).collect();
    for i in 0..n {
        let mut c = vec![BigInt::zero(); n * n];
        c[i * n + i] = BigInt::one();
        cols.push(c);
    }
    AbGroupPresentation::new(n * n, IntMatrix::from_columns(n * n, cols))
}

/// A ⊗ Z/2 on the generators of A.
pub fn tensor_z2(a: &AbGroupPresentation) -> AbGroupPresentation {
    let n = a.ngens;
    let mut cols: Vec<Vec<BigInt>> = (0..a.relations.cols).map(|j| a.relations.column(j)).collect();
    for i in 0..n {
        let mut c = vec![BigInt::zero(); n];
        c[i] = big(2);
        cols.push(c);
    }
    AbGroupPresentation::new(n, IntMatrix::from_columns(n, cols))
}

/// τ̄ : A⊗Z/2 -> ⊗̂²A,  a ↦ σ̄(a⊗a) on generators (a homomorphism).
pub fn tau_bar_matrix(a: &AbGroupPresentation) -> IntMatrix {
    let n = a.ngens;
    let mut m = IntMatrix::zero(n * n, n);
    for i in 0..n {
        m[(i * n + i, i)] = BigInt::one();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) {
        let (u, s, v) = smith_normal_form(m);
        assert_eq!(u.mul(m).mul(&v), s, "U*M*V != S");
        assert_eq!(u.det().abs(), BigInt::one(), "U not unimodular");
        assert_eq!(v.det().abs(), BigInt::one(), "V not unimodular");
        let n = m.rows.min(m.cols);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    assert!(s[(i, j)].is_zero());
                }
            }
            assert!(!s[(i, i)].is_negative());
        }
        for i in 0..n.saturating_sub(1) {
            let a = &s[(i, i)];
            let b = &s[(i + 1, i + 1)];
            if !a.is_zero() {
                assert!((b % a).is_zero(), "divisibility broken: {} !| {}", a, b);
            } else {
                assert!(b.is_zero(), "zero before nonzero on diagonal");
            }
        }
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntMatrix::identity(2);
        let (u, s, v) = smith_normal_form(&id);
        assert_eq!(s, id);
        assert_eq!(u, IntMatrix::identity(2));
        assert_eq!(v, IntMatrix::identity(2));

        let z = IntMatrix::zero(2, 2);
        let (u, s, v) = smith_normal_form(&z);
        assert_eq!(s, z);
        assert_eq!(u, IntMatrix::identity(2));
        assert_eq!(v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_2x2_example() {
        // oracle: d1 = gcd of entries = 2, d1*d2 = |det| = |2*8-4*6| = 8
        let m = IntMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let (_, s, _) = smith_normal_form(&m);
        assert_eq!(s[(0, 0)], big(2));
        assert_eq!(s[(1, 1)], big(4));
        check_snf(&m);
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        check_snf(&m);
        let m2 = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]);
        check_snf(&m2);
    }

    #[test]
    fn snf_determinism() {
        let m = IntMatrix::from_rows(vec![vec![6, 4], vec![2, 8]]);
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        assert_eq!(a.1, b.1);
        assert_eq!(a.0, b.0);
        assert_eq!(a.2, b.2);
    }

    #[test]
    fn hnf_membership_and_solve() {
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let h = hermite_normal_form(&m);
        assert!(h.contains(&[big(4), big(3)]));
        assert!(!h.contains(&[big(1), big(0)]));
        let x = h.solve(&[big(4), big(-3)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![big(4), big(-3)]);
        assert!(h.solve(&[big(1), big(1)]).is_none());
    }

    #[test]
    fn normal_form_idempotent() {
        let g = AbGroupPresentation::diagonal(&[4, 0, 6]);
        let v = vec![big(7), big(-2), big(23)];
        let n1 = g.normal_form(&v);
        let n2 = g.normal_form(&n1);
        assert_eq!(n1, n2);
        assert!(g.eq_vecs(&v, &n1));
    }

    #[test]
    fn kernel_basis_works() {
        let m = IntMatrix::from_rows(vec![vec![1, 2, 3]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn tensor_square_examples() {
        // Z tensor Z = Z
        let z = AbGroupPresentation::free(1);
        let (t, r) = tensor_square(&z).invariants();
        assert!(t.is_empty());
        assert_eq!(r, 1);
        // Z/2 tensor Z/2 = Z/2
        let z2 = AbGroupPresentation::diagonal(&[2]);
        let (t, r) = tensor_square(&z2).invariants();
        assert_eq!(t, vec![big(2)]);
        assert_eq!(r, 0);
        // Z^2 tensor Z^2 = Z^4
        let zz = AbGroupPresentation::free(2);
        let (t, r) = tensor_square(&zz).invariants();
        assert!(t.is_empty());
        assert_eq!(r, 4);
    }

    #[test]
    fn reduced_tensor_square_examples() {
        // ⊗̂²Z = Z/2
        let z = AbGroupPresentation::free(1);
        let (t, r) = reduced_tensor_square(&z).invariants();
        assert_eq!(t, vec![big(2)]);
        assert_eq!(r, 0);
        // ⊗̂²0 = 0
        let zero = AbGroupPresentation::trivial();
        assert!(reduced_tensor_square(&zero).is_trivial());
        // ⊗̂²Z² = Z/2 ⊕ Z/2 ⊕ Z
        let zz = AbGroupPresentation::free(2);
        let (t, r) = reduced_tensor_square(&zz).invariants();
        assert_eq!(t, vec![big(2), big(2)]);
        assert_eq!(r, 1);
        // σ̄(a⊗b) = -σ̄(b⊗a)
        let red = reduced_tensor_square(&zz);
        let ab = tensor_pairing(&[big(1), big(0)], &[big(0), big(1)]);
        let ba = tensor_pairing(&[big(0), big(1)], &[big(1), big(0)]);
        let neg_ba: Vec<BigInt> = ba.iter().map(|x| -x).collect();
        assert!(red.eq_vecs(&ab, &neg_ba));
    }

    #[test]
    fn exterior_square_examples() {
        let z = AbGroupPresentation::free(1);
        assert!(exterior_square(&z).is_trivial());
        let zz = AbGroupPresentation::free(2);
        let (t, r) = exterior_square(&zz).invariants();
        assert!(t.is_empty());
        assert_eq!(r, 1);
    }

    #[test]
    fn exact_sequence_for_z() {
        // Z/2 ↪ ⊗̂²Z ↠ Λ²Z = 0 is exact
        let z = AbGroupPresentation::free(1);
        let z2 = tensor_z2(&z);
        let red = reduced_tensor_square(&z);
        let tau = AbHom::new(z2.clone(), red.clone(), tau_bar_matrix(&z)).unwrap();
        assert!(tau.is_injective());
        assert!(exterior_square(&z).is_trivial());
        assert!(tau.is_surjective()); // onto ⊗̂²Z = Z/2 since Λ² = 0
    }

    #[test]
    fn hom_checks_relations() {
        let z2 = AbGroupPresentation::diagonal(&[2]);
        let z = AbGroupPresentation::free(1);
        // Z/2 -> Z, 1 ↦ 1 is not well defined
        assert!(AbHom::new(z2.clone(), z.clone(), IntMatrix::identity(1)).is_err());
        // Z -> Z/2 is fine
        assert!(AbHom::new(z.clone(), z2.clone(), IntMatrix::identity(1)).is_ok());
    }

    #[test]
    fn det_bareiss() {
        let m = IntMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]);
        assert_eq!(m.det(), big(-8));
        let m3 = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(m3.det(), big(-3));
    }
}
