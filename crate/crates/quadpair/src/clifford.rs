//! Exact positive Clifford algebra C₊(n) over Q(√2), pin-group elements with
//! their orthogonal matrices, the group Õ(2) ≅ {±1}⋉R at rational angles,
//! suspensions, shuffle lifts, and the replay of the two Hopf-invariant
//! computations for tracks between orthogonal transformations.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::QpError;

pub const MAX_CLIFFORD_DIM: usize = 12;

/// Element a + b√2 of Q(√2).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sqrt2Rational {
    pub a: BigRational,
    pub b: BigRational,
}

impl fmt::Debug for Sqrt2Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl Sqrt2Rational {
    pub fn zero() -> Self {
        Sqrt2Rational { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one() -> Self {
        Sqrt2Rational { a: BigRational::one(), b: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Sqrt2Rational { a: BigRational::from(BigInt::from(n)), b: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Sqrt2Rational {
            a: BigRational::new(BigInt::from(num), BigInt::from(den)),
            b: BigRational::zero(),
        }
    }

    pub fn sqrt2() -> Self {
        Sqrt2Rational { a: BigRational::zero(), b: BigRational::one() }
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        Sqrt2Rational {
            a: BigRational::zero(),
            b: BigRational::new(BigInt::one(), BigInt::from(2)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Sqrt2Rational { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Sqrt2Rational { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn neg(&self) -> Self {
        Sqrt2Rational { a: -self.a.clone(), b: -self.b.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        // (a + b√2)(c + d√2) = ac + 2bd + (ad + bc)√2
        Sqrt2Rational {
            a: &self.a * &o.a + BigRational::from(BigInt::from(2)) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        // 1/(a+b√2) = (a - b√2)/(a² - 2b²)
        let norm = &self.a * &self.a - BigRational::from(BigInt::from(2)) * &self.b * &self.b;
        if norm.is_zero() {
            return None;
        }
        Some(Sqrt2Rational { a: &self.a / &norm, b: -&self.b / &norm })
    }

    pub fn display(&self) -> String {
        if self.b.is_zero() {
            format!("{}", self.a)
        } else if self.a.is_zero() {
            format!("{}√2", self.b)
        } else if self.b.is_negative() {
            format!("{}{}√2", self.a, self.b)
        } else {
            format!("{}+{}√2", self.a, self.b)
        }
    }
}

/// Element of the positive Clifford algebra C₊(n): e_i² = 1 and
/// e_i e_j = -e_j e_i. Basis monomials are subsets of {1..n} as bitmasks.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CliffordElement {
    pub n: usize,
    pub coeffs: BTreeMap<u32, Sqrt2Rational>,
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl CliffordElement {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_CLIFFORD_DIM);
        CliffordElement { n, coeffs: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: Sqrt2Rational) -> Self {
        let mut el = Self::zero(n);
        if !c.is_zero() {
            el.coeffs.insert(0, c);
        }
        el
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Sqrt2Rational::one())
    }

    /// The generator e_i, 1-indexed.
    pub fn e(n: usize, i: usize) -> Self {
        assert!(1 <= i && i <= n, "generator index out of range");
        let mut el = Self::zero(n);
        el.coeffs.insert(1 << (i - 1), Sqrt2Rational::one());
        el
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut out = self.clone();
        for (m, c) in &o.coeffs {
            let e = out.coeffs.entry(*m).or_insert_with(Sqrt2Rational::zero);
            *e = e.add(c);
            if e.is_zero() {
                out.coeffs.remove(m);
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        CliffordElement {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &Sqrt2Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.n);
        }
        CliffordElement {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.mul(k))).collect(),
        }
    }

    /// Sign of the basis product e_S · e_T with e_i² = +1: count the
    /// transpositions needed to interleave, then cancel equal indices.
    fn basis_mul(s: u32, t: u32) -> (u32, i32) {
        let mut sign = 1i32;
        // for each bit in t, count bits of s strictly greater than it
        let mut tt = t;
        while tt != 0 {
            let low = tt.trailing_zeros();
            let above = s >> (low + 1);
            if above.count_ones() % 2 == 1 {
                sign = -sign;
            }
            tt &= tt - 1;
        }
        (s ^ t, sign)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let mut out = Self::zero(self.n);
        for (s, cs) in &self.coeffs {
            for (t, ct) in &o.coeffs {
                let (m, sign) = Self::basis_mul(*s, *t);
                let mut c = cs.mul(ct);
                if sign < 0 {
                    c = c.neg();
                }
                let e = out.coeffs.entry(m).or_insert_with(Sqrt2Rational::zero);
                *e = e.add(&c);
                if e.is_zero() {
                    out.coeffs.remove(&m);
                }
            }
        }
        out
    }

    /// Reversal anti-automorphism: e_{i1}...e_{ik} ↦ e_{ik}...e_{i1},
    /// i.e. sign (-1)^{k(k-1)/2} on a grade-k monomial.
    pub fn reverse(&self) -> Self {
        CliffordElement {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| {
                    let k = m.count_ones() as u64;
                    if k >= 2 && (k * (k - 1) / 2) % 2 == 1 {
                        (*m, c.neg())
                    } else {
                        (*m, c.clone())
                    }
                })
                .collect(),
        }
    }

    /// Grade involution: -1 on odd monomials.
    pub fn grade_involution(&self) -> Self {
        CliffordElement {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| {
                    if m.count_ones() % 2 == 1 {
                        (*m, c.neg())
                    } else {
                        (*m, c.clone())
                    }
                })
                .collect(),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        // for pin-type elements u, u · rev(u) is a nonzero scalar
        let prod = self.mul(&self.reverse());
        if prod.coeffs.len() != 1 {
            return None;
        }
        let c = prod.coeffs.get(&0)?;
        let cinv = c.inv()?;
        Some(self.reverse().scale(&cinv))
    }

    /// Re-embed into C₊(n+k) with e_j ↦ e_{j+k} (suspension applied k times).
    pub fn suspend_into(&self, n_new: usize, shift: usize) -> Self {
        assert!(self.n + shift <= n_new);
        CliffordElement {
            n: n_new,
            coeffs: self.coeffs.iter().map(|(m, c)| (m << shift, c.clone())).collect(),
        }
    }

    /// Suspension C₊(n) -> C₊(n+1), e_j ↦ e_{j+1}.
    pub fn suspend_pin(&self) -> CliffordElement {
        self.suspend_into(self.n + 1, 1)
    }

    /// Is this a grade-1 element (a vector)?
    pub fn vector_part_only(&self) -> bool {
        self.coeffs.keys().all(|m| m.count_ones() == 1)
    }

    pub fn display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.coeffs {
            let mut mono = String::new();
            for i in 0..self.n {
                if m & (1 << i) != 0 {
                    mono.push_str(&format!("e{}", i + 1));
                }
            }
            if mono.is_empty() {
                parts.push(c.display());
            } else {
                parts.push(format!("({}){}", c.display(), mono));
            }
        }
        parts.join(" + ")
    }
}

/// A square matrix over Q(√2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    pub n: usize,
    pub entries: Vec<Sqrt2Rational>,
}

impl QMat {
    pub fn zero(n: usize) -> Self {
        QMat { n, entries: vec![Sqrt2Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = Sqrt2Rational::one();
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Sqrt2Rational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Sqrt2Rational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &QMat) -> QMat {
        assert_eq!(self.n, o.n);
        let mut m = QMat::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k).is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let add = self.get(i, k).mul(o.get(k, j));
                    if !add.is_zero() {
                        let cur = m.get(i, j).add(&add);
                        m.set(i, j, cur);
                    }
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> QMat {
        let mut m = QMat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_orthogonal(&self) -> bool {
        self.mul(&self.transpose()) == QMat::identity(self.n)
    }

    pub fn det(&self) -> Sqrt2Rational {
        // Gaussian elimination over the field Q(√2)
        let n = self.n;
        let mut m = self.clone();
        let mut det = Sqrt2Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Sqrt2Rational::zero();
            };
            if p != col {
                for j in 0..n {
                    let a = m.get(col, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(col, j, b);
                    m.set(p, j, a);
                }
                det = det.neg();
            }
            let pivot = m.get(col, col).clone();
            det = det.mul(&pivot);
            let pinv = pivot.inv().unwrap();
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).mul(&pinv);
                for j in col..n {
                    let sub = factor.mul(m.get(col, j));
                    let cur = m.get(r, j).sub(&sub);
                    m.set(r, j, cur);
                }
            }
        }
        det
    }

    /// The permutation matrix of σ with P e_i = e_{σ(i)} (columns are images).
    pub fn permutation(perm: &[usize]) -> QMat {
        let n = perm.len();
        let mut m = QMat::zero(n);
        for (i, &si) in perm.iter().enumerate() {
            m.set(si, i, Sqrt2Rational::one());
        }
        m
    }

    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let mut perm = vec![0; self.n];
        for j in 0..self.n {
            let mut hit = None;
            for i in 0..self.n {
                let v = self.get(i, j);
                if v.is_zero() {
                    continue;
                }
                if *v != Sqrt2Rational::one() || hit.is_some() {
                    return None;
                }
                hit = Some(i);
            }
            perm[j] = hit?;
        }
        Some(perm)
    }
}

/// Pin-group element: a unit of C₊(n) which is a product of unit vectors,
/// with its orthogonal matrix and determinant cached.
#[derive(Clone, Debug)]
pub struct PinElement {
    pub value: CliffordElement,
    pub q_matrix: QMat,
    pub det: i32,
}

impl PinElement {
    pub fn new(value: CliffordElement) -> Result<PinElement, QpError> {
        let q = q_of_clifford(&value)?;
        if !q.is_orthogonal() {
            return Err(QpError::IllFormed("q(u) is not orthogonal".into()));
        }
        let d = q.det();
        let det = if d == Sqrt2Rational::one() {
            1
        } else if d == Sqrt2Rational::from_int(-1) {
            -1
        } else {
            return Err(QpError::IllFormed("det not ±1".into()));
        };
        Ok(PinElement { value, q_matrix: q, det })
    }

    pub fn from_unit_vectors(n: usize, vectors: &[CliffordElement]) -> Result<PinElement, QpError> {
        let mut u = CliffordElement::one(n);
        for v in vectors {
            if !v.vector_part_only() {
                return Err(QpError::IllFormed("factor is not a vector".into()));
            }
            let sq = v.mul(v);
            if sq != CliffordElement::one(n) {
                return Err(QpError::IllFormed("factor is not a unit vector".into()));
            }
            u = u.mul(v);
        }
        PinElement::new(u)
    }

    pub fn mul(&self, o: &PinElement) -> Result<PinElement, QpError> {
        PinElement::new(self.value.mul(&o.value))
    }
}

/// q(u): the orthogonal transformation x ↦ α(u) x u⁻¹ on the vector part.
pub fn q_of_clifford(u: &CliffordElement) -> Result<QMat, QpError> {
    let n = u.n;
    let uinv = u
        .inv()
        .ok_or_else(|| QpError::IllFormed("element is not invertible".into()))?;
    let alpha = u.grade_involution();
    let mut m = QMat::zero(n);
    for j in 1..=n {
        let img = alpha.mul(&CliffordElement::e(n, j)).mul(&uinv);
        if !img.vector_part_only() {
            return Err(QpError::IllFormed(
                "twisted conjugation does not preserve vectors".into(),
            ));
        }
        for (mask, c) in &img.coeffs {
            let i = mask.trailing_zeros() as usize;
            m.set(i, j - 1, c.clone());
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Õ(2) = {±1} ⋉ R at rational angles
// ---------------------------------------------------------------------------

/// Element (x, y) of Õ(2) ≅ {±1} ⋉ R with multiplication
/// (x,y)(x',y') = (xx', x'y + y').
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OTilde2Element {
    pub x: i32,
    pub y: BigRational,
}

impl OTilde2Element {
    pub fn new(x: i32, num: i64, den: i64) -> Self {
        assert!(x == 1 || x == -1);
        OTilde2Element { x, y: BigRational::new(BigInt::from(num), BigInt::from(den)) }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 1)
    }

    pub fn mul(&self, o: &OTilde2Element) -> OTilde2Element {
        OTilde2Element {
            x: self.x * o.x,
            y: BigRational::from(BigInt::from(o.x)) * &self.y + &o.y,
        }
    }

    pub fn inv(&self) -> OTilde2Element {
        // (x,y)(x, -xy)  = (1, x·y·... ) solve: (x,y)(x',y') = (1,0)
        OTilde2Element {
            x: self.x,
            y: -(BigRational::from(BigInt::from(self.x)) * &self.y),
        }
    }

    pub fn display(&self) -> String {
        format!("({}, {})", self.x, self.y)
    }
}

/// cos(2πy) and sin(2πy) for y with denominator dividing 8, in Q(√2).
fn cos_sin_eighths(y: &BigRational) -> Result<(Sqrt2Rational, Sqrt2Rational), QpError> {
    let eight = BigRational::from(BigInt::from(8));
    let k8 = y * &eight;
    if !k8.is_integer() {
        return Err(QpError::UnrepresentableAngle(format!(
            "angle {y} not a multiple of 1/8"
        )));
    }
    let k = k8.to_integer();
    let k: BigInt = ((k % 8) + 8) % 8; // in 0..8; angle 2πk/8 = πk/4
    let h = Sqrt2Rational::inv_sqrt2();
    let table: [(Sqrt2Rational, Sqrt2Rational); 8] = [
        (Sqrt2Rational::one(), Sqrt2Rational::zero()),
        (h.clone(), h.clone()),
        (Sqrt2Rational::zero(), Sqrt2Rational::one()),
        (h.neg(), h.clone()),
        (Sqrt2Rational::from_int(-1), Sqrt2Rational::zero()),
        (h.neg(), h.neg()),
        (Sqrt2Rational::zero(), Sqrt2Rational::from_int(-1)),
        (h.clone(), h.neg()),
    ];
    let idx: usize = k.try_into().unwrap();
    Ok(table[idx].clone())
}

/// q(x, y) = [[cos 2πy, -sin 2πy], [x sin 2πy, x cos 2πy]].
pub fn q_of_otilde2(el: &OTilde2Element) -> Result<QMat, QpError> {
    let (c, s) = cos_sin_eighths(&el.y)?;
    let mut m = QMat::zero(2);
    m.set(0, 0, c.clone());
    m.set(0, 1, s.neg());
    let xf = Sqrt2Rational::from_int(el.x as i64);
    m.set(1, 0, xf.mul(&s));
    m.set(1, 1, xf.mul(&c));
    Ok(m)
}

/// Suspension Õ(2) -> Õ(3) ⊂ C₊(3):
/// (x,y) ↦ e₃^{binom(x+1,2)} ((sin πy) e₂ + (cos πy) e₃); needs y ∈ ¼Z.
pub fn suspend_otilde2(el: &OTilde2Element) -> Result<CliffordElement, QpError> {
    let four = BigRational::from(BigInt::from(4));
    let k4 = &el.y * &four;
    if !k4.is_integer() {
        return Err(QpError::UnrepresentableAngle(format!(
            "angle {} not a multiple of 1/4",
            el.y
        )));
    }
    // sin(πk/4), cos(πk/4) table over k mod 8
    let k: BigInt = ((k4.to_integer() % 8) + 8) % 8;
    let h = Sqrt2Rational::inv_sqrt2();
    let sin_t: [Sqrt2Rational; 8] = [
        Sqrt2Rational::zero(),
        h.clone(),
        Sqrt2Rational::one(),
        h.clone(),
        Sqrt2Rational::zero(),
        h.neg(),
        Sqrt2Rational::from_int(-1),
        h.neg(),
    ];
    let cos_t: [Sqrt2Rational; 8] = [
        Sqrt2Rational::one(),
        h.clone(),
        Sqrt2Rational::zero(),
        h.neg(),
        Sqrt2Rational::from_int(-1),
        h.neg(),
        Sqrt2Rational::zero(),
        h.clone(),
    ];
    let idx: usize = k.try_into().unwrap();
    let vec = CliffordElement::e(3, 2)
        .scale(&sin_t[idx])
        .add(&CliffordElement::e(3, 3).scale(&cos_t[idx]));
    // binom(x+1, 2) = 1 for x = 1, 0 for x = -1
    if el.x == 1 {
        Ok(CliffordElement::e(3, 3).mul(&vec))
    } else {
        Ok(vec)
    }
}

/// Σ^k(x, y) in C₊(k+2).
pub fn suspend_otilde2_k(el: &OTilde2Element, k: usize) -> Result<CliffordElement, QpError> {
    let base = suspend_otilde2(el)?;
    Ok(base.suspend_into(k + 2, k - 1))
}

// ---------------------------------------------------------------------------
// Shuffle lifts
// ---------------------------------------------------------------------------

/// τ̂_{1,k-1} in C₊(p+k+q), the lift
/// (1/2^{(k-1)/2}) (e_{p+k} - e_{p+k-1}) ⋯ (e_{p+2} - e_{p+1}).
pub fn shuffle_lift_1k(p: usize, k: usize, q: usize) -> CliffordElement {
    let n = p + k + q;
    assert!(n >= 3, "Clifford shuffle lift needs dimension >= 3");
    let mut u = CliffordElement::one(n);
    for i in (p + 2..=p + k).rev() {
        let factor = CliffordElement::e(n, i)
            .sub(&CliffordElement::e(n, i - 1))
            .scale(&Sqrt2Rational::inv_sqrt2());
        u = u.mul(&factor);
    }
    u
}

/// τ̂_{n,m} = (τ̂_{1,n+m-1})ⁿ in C₊(n+m).
pub fn shuffle_lift(n: usize, m: usize) -> CliffordElement {
    let base = shuffle_lift_1k(0, n + m, 0);
    let mut u = CliffordElement::one(n + m);
    for _ in 0..n {
        u = u.mul(&base);
    }
    u
}

/// The block-shuffle permutation of n+m letters: {1..n} moves past {n+1..n+m},
/// i.e. σ(i) = i + m for i ≤ n and σ(n+j) = j (0-indexed here).
pub fn shuffle_permutation(n: usize, m: usize) -> Vec<usize> {
    let mut perm = vec![0; n + m];
    for i in 0..n {
        perm[i] = i + m;
    }
    for j in 0..m {
        perm[n + j] = j;
    }
    perm
}

// ---------------------------------------------------------------------------
// Lemma replays
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn line(name: &str, pass: bool, detail: String) -> CheckLine {
    CheckLine { name: name.into(), pass, detail }
}

/// Replay of the K-computation: the two Õ(2) chains built from the constants
/// (1,1/4), (1,-1/4), (-1,0) evaluate to (1,-1/2) and (1,1/2), and the two
/// exterior tracks differ by the Hopf-1 loop (1,-1).
pub fn verify_lemma_k() -> Vec<CheckLine> {
    let mut out = Vec::new();
    let aleph = OTilde2Element::new(1, 1, 4);
    let aleph_inv = OTilde2Element::new(1, -1, 4);
    let triv = OTilde2Element::new(-1, 0, 1);

    let hash = triv.mul(&aleph).mul(&triv).mul(&aleph_inv);
    out.push(line(
        "hash-chain",
        hash == OTilde2Element::new(1, -1, 2),
        format!("(-1,0)(1,1/4)(-1,0)(1,-1/4) = {}", hash.display()),
    ));
    let under = aleph.mul(&triv).mul(&aleph_inv).mul(&triv);
    out.push(line(
        "underhash-chain",
        under == OTilde2Element::new(1, 1, 2),
        format!("(1,1/4)(-1,0)(1,-1/4)(-1,0) = {}", under.display()),
    ));
    let beta = OTilde2Element::new(1, -1, 1);
    let composed = under.mul(&beta);
    out.push(line(
        "hopf-loop",
        composed == hash,
        format!(
            "(1,1/2)(1,-1) = {} matches the hash chain; Hopf(β) = 1 so K(ν,ν) = 1",
            composed.display()
        ),
    ));
    out
}

/// Replay of the L-computation for one pair (n, m): the suspended and
/// shuffle-conjugated exterior tracks X and Y satisfy τ̂ X = Y τ̂ exactly.
/// Also records the recomputed monomials next to the ones stated in the
/// source derivation (whose index base disagrees with the suspension formula
/// at k = 1; the recomputation is what enters the final equation).
pub fn verify_lemma_l(n: usize, m: usize) -> Result<Vec<CheckLine>, QpError> {
    let mut out = Vec::new();
    if n + m == 2 {
        // Õ(2) branch
        let tau = OTilde2Element::new(-1, -1, 4);
        let x = OTilde2Element::new(1, -1, 2);
        let y = OTilde2Element::new(1, 1, 2);
        let lhs = tau.mul(&x);
        let rhs = y.mul(&tau);
        out.push(line(
            "L(1,1)",
            lhs == rhs && lhs == OTilde2Element::new(-1, -3, 4),
            format!("τ̂X = {} and Yτ̂ = {}", lhs.display(), rhs.display()),
        ));
        return Ok(out);
    }
    let dim = n + m;
    if dim > MAX_CLIFFORD_DIM {
        return Err(QpError::SizeGuard(format!("n+m = {dim} too large")));
    }
    // X = (ℵ^#_{n,ν,m,ν})^⊣ = τ̂_{m-1,1} Σ^{m+n-2}(1,-1/2) τ̂_{1,m-1}  (p = n-1, q = 1)
    let sus_hash = suspend_otilde2_k(&OTilde2Element::new(1, -1, 2), dim - 2)?;
    let sus_under = suspend_otilde2_k(&OTilde2Element::new(1, 1, 2), dim - 2)?;
    let t_right = shuffle_lift_1k(n - 1, m, 1);
    let t_left = reverse_product(&t_right);
    let x = t_left.mul(&sus_hash).mul(&t_right);
    let t_right2 = shuffle_lift_1k(m - 1, n, 1);
    let t_left2 = reverse_product(&t_right2);
    let y = t_left2.mul(&sus_under).mul(&t_right2);

    // recomputed monomial checks
    let expect_x = CliffordElement::e(dim, n).mul(&CliffordElement::e(dim, dim));
    let expect_y = CliffordElement::e(dim, dim).mul(&CliffordElement::e(dim, m));
    out.push(line(
        &format!("X({n},{m})-monomial"),
        x == expect_x,
        format!("X = {} (recomputed; expected e{}e{})", x.display(), n, dim),
    ));
    out.push(line(
        &format!("Y({n},{m})-monomial"),
        y == expect_y,
        format!("Y = {} (recomputed; expected e{}e{})", y.display(), dim, m),
    ));
    // the suspension-formula monomial for Σ^k(ℵ^#)^⊣ is e_{k+1}e_{k+2}; the
    // source derivation names e_{k-1}e_k, which is inconsistent at k = 1
    let k = dim - 2;
    out.push(line(
        &format!("sigma^{k}-monomial"),
        sus_hash == CliffordElement::e(dim, k + 1).mul(&CliffordElement::e(dim, k + 2)),
        format!(
            "Σ^{k}(ℵ^#)^⊣ recomputed = e{}e{} (stated index base would be e{}e{})",
            k + 1,
            k + 2,
            k.wrapping_sub(1),
            k
        ),
    ));

    let tau = shuffle_lift(n, m);
    let lhs = tau.mul(&x);
    let rhs = y.mul(&tau);
    let detail = if lhs == rhs {
        format!(
            "τ̂X = Yτ̂ exactly in C₊({dim}) ({} basis terms)",
            lhs.coeffs.len()
        )
    } else {
        format!("τ̂X = {} but Yτ̂ = {}", lhs.display(), rhs.display())
    };
    out.push(line(&format!("L({n},{m})-commutation"), lhs == rhs, detail));
    Ok(out)
}

/// Reverse the order of the (e_j - e_i)/√2 factors: for these self-inverse
/// factors this is the inverse product, computed via the reversal
/// anti-automorphism.
fn reverse_product(u: &CliffordElement) -> CliffordElement {
    u.reverse()
}

/// The identities (a), (b), (c) used to simplify the conjugated monomials:
/// e_j(e_j - e_i) = -(e_j - e_i) e_i,  e_i(e_j - e_i) = -(e_j - e_i) e_j,
/// (e_j - e_i)² = 2, for i < j.
pub fn verify_identities_abc(max_dim: usize) -> Vec<CheckLine> {
    let mut out = Vec::new();
    let n = max_dim;
    let mut pass_a = true;
    let mut pass_b = true;
    let mut pass_c = true;
    for i in 1..=n {
        for j in i + 1..=n {
            let ei = CliffordElement::e(n, i);
            let ej = CliffordElement::e(n, j);
            let d = ej.sub(&ei);
            if ej.mul(&d) != d.mul(&ei).neg() {
                pass_a = false;
            }
            if ei.mul(&d) != d.mul(&ej).neg() {
                pass_b = false;
            }
            if d.mul(&d) != CliffordElement::scalar(n, Sqrt2Rational::from_int(2)) {
                pass_c = false;
            }
        }
    }
    out.push(line("identity-a", pass_a, format!("e_j(e_j-e_i) = -(e_j-e_i)e_i for i<j<={n}")));
    out.push(line("identity-b", pass_b, format!("e_i(e_j-e_i) = -(e_j-e_i)e_j for i<j<={n}")));
    out.push(line("identity-c", pass_c, format!("(e_j-e_i)² = 2 for i<j<={n}")));
    out
}

// ---------------------------------------------------------------------------
// The symmetric track group inside the pin group
// ---------------------------------------------------------------------------

/// Enumerated subgroup of the pin group generated by the adjacent
/// transposition lifts (e_i - e_{i+1})/√2; order 2·n! with kernel {±1} over
/// the symmetric group.
pub struct SymTrackGroup {
    pub n: usize,
    pub elements: Vec<CliffordElement>,
    /// permutation of each element (as images, 0-indexed)
    pub perms: Vec<Vec<usize>>,
    /// index of -1
    pub omega: usize,
    /// index of 1
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
}

pub fn sym_track_group(n: usize) -> Result<SymTrackGroup, QpError> {
    if !(3..=6).contains(&n) {
        return Err(QpError::SizeGuard(format!("sym_track_group needs 3 <= n <= 6, got {n}")));
    }
    // the full preimage of Σ_n under q: the transposition lifts together
    // with -1 (for n = 3 the lifts alone generate a split copy of Σ_3, so
    // -1 has to be adjoined; for n >= 4 disjoint lifts anticommute and -1
    // is already a commutator)
    let mut gens: Vec<CliffordElement> = (1..n)
        .map(|i| {
            CliffordElement::e(n, i)
                .sub(&CliffordElement::e(n, i + 1))
                .scale(&Sqrt2Rational::inv_sqrt2())
        })
        .collect();
    gens.push(CliffordElement::one(n).neg());
    let mut elements = vec![CliffordElement::one(n)];
    let mut frontier = vec![0usize];
    while let Some(idx) = frontier.pop() {
        let cur = elements[idx].clone();
        for g in &gens {
            let next = cur.mul(g);
            if !elements.contains(&next) {
                elements.push(next);
                frontier.push(elements.len() - 1);
            }
        }
        if elements.len() > 2 * factorial(n) {
            return Err(QpError::IllFormed("closure exceeded 2·n!".into()));
        }
    }
    elements.sort();
    let identity = elements.iter().position(|e| *e == CliffordElement::one(n)).unwrap();
    let omega = elements
        .iter()
        .position(|e| *e == CliffordElement::one(n).neg())
        .ok_or_else(|| QpError::IllFormed("-1 not in the closure".into()))?;
    let mut perms = Vec::with_capacity(elements.len());
    for e in &elements {
        let q = q_of_clifford(e)?;
        let p = q
            .as_permutation()
            .ok_or_else(|| QpError::IllFormed("q image is not a permutation".into()))?;
        perms.push(p);
    }
    let mut table = vec![vec![0; elements.len()]; elements.len()];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let ab = a.mul(b);
            table[i][j] = elements
                .iter()
                .position(|e| *e == ab)
                .ok_or_else(|| QpError::IllFormed("closure not closed".into()))?;
        }
    }
    Ok(SymTrackGroup { n, elements, perms, omega, identity, table })
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn perm_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_relations() {
        let e1 = CliffordElement::e(3, 1);
        let e2 = CliffordElement::e(3, 2);
        assert_eq!(e1.mul(&e1), CliffordElement::one(3));
        assert_eq!(e1.mul(&e2), e2.mul(&e1).neg());
        // e1e2·e1e2 = -1
        let u = e1.mul(&e2);
        assert_eq!(u.mul(&u), CliffordElement::one(3).neg());
        // associativity spot check
        let e3 = CliffordElement::e(3, 3);
        let a = e1.add(&e2.scale(&Sqrt2Rational::sqrt2()));
        let b = e2.sub(&e3);
        let c = e3.mul(&e1).add(&CliffordElement::one(3));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn q_is_reflection_on_vectors() {
        // q((e1-e2)/√2) swaps the first two coordinates
        let v = CliffordElement::e(3, 1)
            .sub(&CliffordElement::e(3, 2))
            .scale(&Sqrt2Rational::inv_sqrt2());
        let q = q_of_clifford(&v).unwrap();
        assert!(q.is_orthogonal());
        let p = q.as_permutation().unwrap();
        assert_eq!(p, vec![1, 0, 2]);
        assert_eq!(q.det(), Sqrt2Rational::from_int(-1));
    }

    #[test]
    fn q_multiplicative() {
        let u = CliffordElement::e(4, 1)
            .sub(&CliffordElement::e(4, 3))
            .scale(&Sqrt2Rational::inv_sqrt2());
        let v = CliffordElement::e(4, 2)
            .sub(&CliffordElement::e(4, 4))
            .scale(&Sqrt2Rational::inv_sqrt2());
        let qu = q_of_clifford(&u).unwrap();
        let qv = q_of_clifford(&v).unwrap();
        let quv = q_of_clifford(&u.mul(&v)).unwrap();
        assert_eq!(qu.mul(&qv), quv);
    }

    #[test]
    fn otilde2_law_and_q_homomorphism() {
        // q((x,y)(x',y')) = q(x,y)·q(x',y') at eighth angles
        let samples = [
            OTilde2Element::new(1, 1, 4),
            OTilde2Element::new(-1, 3, 8),
            OTilde2Element::new(1, -1, 2),
            OTilde2Element::new(-1, 0, 1),
            OTilde2Element::new(1, 5, 8),
        ];
        for a in &samples {
            for b in &samples {
                let lhs = q_of_otilde2(&a.mul(b)).unwrap();
                let rhs = q_of_otilde2(a).unwrap().mul(&q_of_otilde2(b).unwrap());
                assert_eq!(lhs, rhs, "q not multiplicative at {a:?}, {b:?}");
            }
            assert!(q_of_otilde2(a).unwrap().is_orthogonal());
            let inv = a.inv();
            assert_eq!(a.mul(&inv), OTilde2Element::identity());
        }
        // quarter rotation and transposition examples
        let q = q_of_otilde2(&OTilde2Element::new(1, 1, 4)).unwrap();
        let mut expect = QMat::zero(2);
        expect.set(0, 1, Sqrt2Rational::from_int(-1));
        expect.set(1, 0, Sqrt2Rational::one());
        assert_eq!(q, expect);
        let q = q_of_otilde2(&OTilde2Element::new(-1, 3, 4)).unwrap();
        let mut expect = QMat::zero(2);
        expect.set(0, 1, Sqrt2Rational::one());
        expect.set(1, 0, Sqrt2Rational::one());
        assert_eq!(q, expect);
    }

    #[test]
    fn suspension_basics() {
        // suspend(1, 0) = e3·e3 = 1
        let s = suspend_otilde2(&OTilde2Element::new(1, 0, 1)).unwrap();
        assert_eq!(s, CliffordElement::one(3));
        // suspend(1, -1/2) = e3·(-e2) = e2e3
        let s = suspend_otilde2(&OTilde2Element::new(1, -1, 2)).unwrap();
        assert_eq!(
            s,
            CliffordElement::e(3, 2).mul(&CliffordElement::e(3, 3))
        );
        // the algebra suspension shifts indices and commutes with the two
        // routes Õ(2) -> C₊(3) -> C₊(4)
        let s4 = s.suspend_pin();
        assert_eq!(
            s4,
            CliffordElement::e(4, 3).mul(&CliffordElement::e(4, 4))
        );
        assert_eq!(s4, suspend_otilde2_k(&OTilde2Element::new(1, -1, 2), 2).unwrap());
        // q(suspend(x,y)) = diag(1, q(x,y)) on representable angles
        for el in [
            OTilde2Element::new(1, 1, 4),
            OTilde2Element::new(-1, 1, 2),
            OTilde2Element::new(-1, -1, 4),
            OTilde2Element::new(1, 3, 4),
        ] {
            let sus = suspend_otilde2(&el).unwrap();
            let q3 = q_of_clifford(&sus).unwrap();
            let q2 = q_of_otilde2(&el).unwrap();
            let mut expect = QMat::identity(3);
            for i in 0..2 {
                for j in 0..2 {
                    expect.set(i + 1, j + 1, q2.get(i, j).clone());
                }
            }
            expect.set(0, 0, Sqrt2Rational::one());
            assert_eq!(q3, expect, "suspension incompatible with q at {el:?}");
        }
        // suspension is multiplicative on representable products
        let a = OTilde2Element::new(-1, 1, 4);
        let b = OTilde2Element::new(1, 1, 2);
        let lhs = suspend_otilde2(&a.mul(&b)).unwrap();
        let rhs = suspend_otilde2(&a).unwrap().mul(&suspend_otilde2(&b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn shuffle_lift_projects_to_shuffle() {
        for (n, m) in [(1, 2), (2, 1), (2, 2), (1, 3)] {
            let tau = shuffle_lift(n, m);
            // a pin element: orthogonal q with determinant ±1
            let pin = PinElement::new(tau.clone()).unwrap();
            assert_eq!(pin.det, if (n * m) % 2 == 0 { 1 } else { -1 });
            let q = q_of_clifford(&tau).unwrap();
            let p = q.as_permutation().unwrap();
            assert_eq!(p, shuffle_permutation(n, m), "shuffle ({n},{m})");
            let det = q.det();
            let expect = if (n * m) % 2 == 0 {
                Sqrt2Rational::one()
            } else {
                Sqrt2Rational::from_int(-1)
            };
            assert_eq!(det, expect);
        }
        // τ̂_{1,k-1} τ̂_{k-1,1} = 1
        let a = shuffle_lift_1k(0, 3, 0);
        let b = a.reverse();
        assert_eq!(a.mul(&b), CliffordElement::one(3));
    }

    #[test]
    fn lemma_k_replay() {
        let report = verify_lemma_k();
        for l in &report {
            assert!(l.pass, "{}: {}", l.name, l.detail);
        }
    }

    #[test]
    fn lemma_l_replay_small() {
        for (n, m) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)] {
            let report = verify_lemma_l(n, m).unwrap();
            for l in &report {
                assert!(l.pass, "({n},{m}) {}: {}", l.name, l.detail);
            }
        }
        for l in verify_identities_abc(8) {
            assert!(l.pass, "{}", l.name);
        }
    }

    #[test]
    fn sym_track_group_small() {
        let g = sym_track_group(3).unwrap();
        assert_eq!(g.elements.len(), 12); // 2·3!
        // kernel of q is {1, ω}
        let kernel: Vec<usize> = (0..g.elements.len())
            .filter(|&i| g.perms[i] == vec![0, 1, 2])
            .collect();
        assert_eq!(kernel.len(), 2);
        assert!(kernel.contains(&g.identity));
        assert!(kernel.contains(&g.omega));
        // sign of a transposition lift is -1
        let t = g
            .elements
            .iter()
            .position(|e| {
                *e == CliffordElement::e(3, 1)
                    .sub(&CliffordElement::e(3, 2))
                    .scale(&Sqrt2Rational::inv_sqrt2())
            })
            .unwrap();
        assert_eq!(perm_sign(&g.perms[t]), -1);
    }
}

// ---------------------------------------------------------------------------
// Expression parser for the element calculator
// ---------------------------------------------------------------------------

struct ExprScanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ExprScanner<'a> {
    fn err(&self, msg: &str) -> QpError {
        QpError::Syntax { line: 1, col: self.pos + 1, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).map(|&b| b as char)
    }

    fn parse_uint(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn parse_expr(&mut self, n: usize) -> Result<CliffordElement, QpError> {
        let mut acc = self.parse_term(n)?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_term(n)?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.parse_term(n)?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self, n: usize) -> Result<CliffordElement, QpError> {
        let mut acc = self.parse_factor(n)?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.parse_factor(n)?);
                }
                // juxtaposition: e1e2, 2e1, (..)(..)
                Some(c) if c == 'e' || c == 'r' || c == '(' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.parse_factor(n)?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self, n: usize) -> Result<CliffordElement, QpError> {
        let base = self.parse_atom(n)?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let neg = if self.peek() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let Some(k) = self.parse_uint() else {
                return Err(self.err("expected exponent"));
            };
            let mut acc = CliffordElement::one(n);
            for _ in 0..k {
                acc = acc.mul(&base);
            }
            if neg {
                return acc.inv().ok_or_else(|| self.err("element not invertible"));
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn parse_atom(&mut self, n: usize) -> Result<CliffordElement, QpError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.parse_expr(n)?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.parse_atom(n)?.neg())
            }
            Some('e') => {
                self.pos += 1;
                let Some(i) = self.parse_uint() else {
                    return Err(self.err("expected generator index after 'e'"));
                };
                if i < 1 || i as usize > n {
                    return Err(QpError::Semantic(format!(
                        "generator e{i} out of range 1..{n}"
                    )));
                }
                Ok(CliffordElement::e(n, i as usize))
            }
            Some('r') => {
                // r2 = √2
                self.pos += 1;
                if self.parse_uint() != Some(2) {
                    return Err(self.err("expected 'r2'"));
                }
                Ok(CliffordElement::scalar(n, Sqrt2Rational::sqrt2()))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_uint().unwrap();
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let Some(den) = self.parse_uint() else {
                        return Err(self.err("expected denominator"));
                    };
                    if den == 0 {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(CliffordElement::scalar(n, Sqrt2Rational::from_ratio(num, den)))
                } else {
                    Ok(CliffordElement::scalar(n, Sqrt2Rational::from_int(num)))
                }
            }
            _ => Err(self.err("expected atom: eN, r2, rational, or '('")),
        }
    }
}

/// Parse an element expression like "(1/2)(e2-e1)(e3-e2) + r2 e1".
/// The dimension is inferred from the largest generator index unless given.
pub fn parse_clifford_expr(src: &str, dim: Option<usize>) -> Result<CliffordElement, QpError> {
    let n = match dim {
        Some(n) => n,
        None => {
            let mut max = 1usize;
            let bytes = src.as_bytes();
            let mut i = 0;
            while i < bytes.len() {
                if bytes[i] == b'e' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    let mut j = i + 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if let Ok(k) = std::str::from_utf8(&bytes[i + 1..j]).unwrap().parse::<usize>() {
                        max = max.max(k);
                    }
                    i = j;
                } else {
                    i += 1;
                }
            }
            max
        }
    };
    if n > MAX_CLIFFORD_DIM {
        return Err(QpError::SizeGuard(format!("dimension {n} exceeds {MAX_CLIFFORD_DIM}")));
    }
    let mut sc = ExprScanner { src: src.as_bytes(), pos: 0 };
    let out = sc.parse_expr(n)?;
    sc.skip_ws();
    if sc.pos != src.len() {
        return Err(sc.err("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod expr_tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        let a = parse_clifford_expr("e1e2 * e1 e2", None).unwrap();
        assert_eq!(a, CliffordElement::one(2).neg());
        let b = parse_clifford_expr("(1/2)(e2-e1)(e2-e1)", None).unwrap();
        assert_eq!(b, CliffordElement::one(2));
        let c = parse_clifford_expr("r2 r2", None).unwrap();
        assert_eq!(c, CliffordElement::scalar(1, Sqrt2Rational::from_int(2)));
        let d = parse_clifford_expr("(e1 e2)^-1", None).unwrap();
        assert_eq!(d, CliffordElement::e(2, 2).mul(&CliffordElement::e(2, 1)));
        assert!(parse_clifford_expr("e1 +", None).is_err());
        assert!(parse_clifford_expr("q9", None).is_err());
    }
}
