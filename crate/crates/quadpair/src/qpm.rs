//! Quadratic pair modules: a boundary ∂ : C₁ -> C₀ between square groups
//! sharing their ee-group, with ∂_ee the identity. Provides the reflection
//! functor Φ, the interval object, the tensor product via the square-group
//! pushout, tracks and their calculus, and the cylinder correspondence.


use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abelian::{AbGroupPresentation, IntMatrix};
use crate::error::QpError;
use crate::nil2::{reindex_monotone, Nil2Element, Nil2Hom, PointedSet, PresentedNil2};
use crate::sqgroup::{QuadraticMap, SgTensor, SquareGroup};

#[derive(Clone, Debug)]
pub struct QuadraticPairModule {
    pub c0: PresentedNil2,
    pub c1: PresentedNil2,
    pub cee: AbGroupPresentation,
    /// P : C_ee -> C₁ on the ee-generators
    pub p: Vec<Nil2Element>,
    /// H : C₀ -> C_ee
    pub h0: QuadraticMap,
    /// ∂ : C₁ -> C₀
    pub boundary: Nil2Hom,
}

impl QuadraticPairModule {
    pub fn p_eval(&self, v: &[BigInt]) -> Nil2Element {
        let mut out = self.c1.zero();
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.mul(&self.p[k].pow(c));
            }
        }
        out
    }

    pub fn boundary_apply(&self, z: &Nil2Element) -> Nil2Element {
        self.boundary.apply(z)
    }

    /// The 0-level square group C_(0) = (C₀ ⇄ C_ee via ∂P, H).
    pub fn sg0(&self) -> SquareGroup {
        let p0 = self.p.iter().map(|pk| self.boundary.apply(pk)).collect();
        SquareGroup { e: self.c0.clone(), ee: self.cee.clone(), p: p0, h: self.h0.clone() }
    }

    /// The 1-level square group C_(1) = (C₁ ⇄ C_ee via P, H∂).
    pub fn sg1(&self) -> SquareGroup {
        let n1 = self.c1.ngens();
        let mut h1 = QuadraticMap::zero_map(n1, self.cee.ngens);
        for z in 0..n1 {
            h1.gen_values[z] = self.h0.eval(&self.boundary.images[z]);
        }
        for z in 0..n1 {
            for w in 0..n1 {
                h1.cross[z][w] =
                    self.h0.cross_el(&self.boundary.images[z], &self.boundary.images[w]);
            }
        }
        SquareGroup {
            e: self.c1.clone(),
            ee: self.cee.clone(),
            p: self.p.clone(),
            h: h1,
        }
    }

    /// The action of C₀ on C₁: x^y = x + P(∂x|y)_H.
    pub fn action(&self, x: &Nil2Element, y: &Nil2Element) -> Nil2Element {
        let cr = self.h0.cross_el(&self.boundary.apply(x), y);
        x.mul(&self.p_eval(&cr))
    }

    /// Axioms: both constituent square groups pass their axioms, and ∂ is a crossed module
    /// for the action above (checked on generators).
    pub fn check_axioms(&self) -> Result<(), QpError> {
        self.sg0().check_axioms()?;
        self.sg1().check_axioms()?;
        // ∂ must kill c1-relators (it is a hom into the presented c0)
        if !self.boundary.respects(&self.c1, &self.c0) {
            return Err(QpError::IllFormed("boundary does not kill C1 relators".into()));
        }
        // crossed module: ∂(x^y) = -y + ∂x + y on generators
        for zi in 0..self.c1.ngens() {
            for yi in 0..self.c0.ngens() {
                let x = self.c1.gen(zi);
                let y = self.c0.gen(yi);
                let lhs = self.boundary.apply(&self.action(&x, &y));
                let rhs = y.inv().mul(&self.boundary.apply(&x)).mul(&y);
                if !self.c0.equal(&lhs, &rhs) {
                    return Err(QpError::AxiomFailure(format!(
                        "crossed module law fails at C1 gen {zi}, C0 gen {yi}"
                    )));
                }
            }
        }
        // Peiffer: x^{∂x'} = -x' + x + x' on generator pairs
        for zi in 0..self.c1.ngens() {
            for zj in 0..self.c1.ngens() {
                let x = self.c1.gen(zi);
                let xp = self.c1.gen(zj);
                let lhs = self.action(&x, &self.boundary.apply(&xp));
                let rhs = xp.inv().mul(&x).mul(&xp);
                if !self.c1.equal(&lhs, &rhs) {
                    return Err(QpError::AxiomFailure(format!(
                        "Peiffer law fails at C1 gens {zi},{zj}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_0good(&self) -> bool {
        self.sg0().is_good()
    }

    /// h₀C = Coker ∂ as a presented abelian group.
    pub fn h0_group(&self) -> AbGroupPresentation {
        let n = self.c0.ngens();
        let mut cols: Vec<Vec<BigInt>> =
            self.c0.relators.iter().map(|r| r.abelianization()).collect();
        for im in &self.boundary.images {
            cols.push(im.abelianization());
        }
        // commutators of C0 die in h0 by axiom (2): they are ∂P-images,
        // which have trivial abelianization already
        AbGroupPresentation::new(n, IntMatrix::from_columns(n, cols))
    }

    /// h₁C = ker ∂ as a presented abelian group. Kernel elements are central
    /// in C₁ (their cross effects vanish), so the kernel is presented by a
    /// two-stage integer-lattice computation.
    pub fn h1_group(&self) -> AbGroupPresentation {
        let n1 = self.c1.ngens();
        let c0ab = self.c0.abelianization();

        // Λ² index bookkeeping for both groups
        let comm_keys_c0 = comm_keys(self.c0.ngens());
        let comm_keys_c1 = comm_keys(n1);

        // B: ∂ of the Λ²-basis of C1, as Λ²(C0) coordinates
        let mut b_cols: Vec<Vec<BigInt>> = Vec::new();
        for &(j, i) in &comm_keys_c1 {
            let img = self
                .boundary
                .apply(&self.c1.gen(j).commutator(&self.c1.gen(i)));
            let nf = self.c0.normal_form(&img);
            b_cols.push(comm_coords(&nf, &comm_keys_c0));
        }
        // Λ(C0) closure lattice columns
        let mut l0_cols: Vec<Vec<BigInt>> = Vec::new();
        for col in self.c0.lambda_columns() {
            let mut v = vec![BigInt::zero(); comm_keys_c0.len()];
            for (k, c) in &col {
                v[comm_keys_c0.binary_search(k).unwrap()] = c.clone();
            }
            l0_cols.push(v);
        }

        // K̄ = {v : ∂_ab(v) ∈ L1(C0)}
        let m_d = self.boundary.abelianized();
        let mut stacked_cols: Vec<Vec<BigInt>> = (0..n1).map(|j| m_d.column(j)).collect();
        for c in 0..c0ab.relations.cols {
            stacked_cols.push(c0ab.relations.column(c));
        }
        let stacked = IntMatrix::from_columns(self.c0.ngens(), stacked_cols);
        let kbar: Vec<Vec<BigInt>> = crate::abelian::kernel_basis(&stacked)
            .into_iter()
            .map(|v| v[..n1].to_vec())
            .collect();

        // residual class map ψ: K̄ -> Λ²(C0) / (L0 + B-image); its kernel K'
        let target_dim = comm_keys_c0.len();
        let mut quot_cols = l0_cols.clone();
        quot_cols.extend(b_cols.iter().cloned());
        let mut psi_cols: Vec<Vec<BigInt>> = Vec::new();
        for kv in &kbar {
            let z = word_from_coords(&self.c1, kv);
            let mut img = self.c0.normal_form(&self.boundary.apply(&z));
            img.linear.clear(); // linear part reduces to a lattice member
            psi_cols.push(comm_coords(&self.c0.normal_form(&img), &comm_keys_c0));
        }
        // kernel of ψ modulo quot_cols: {y : Σ y_i ψ_i ∈ span(quot)}
        let mut all_cols = psi_cols.clone();
        all_cols.extend(quot_cols.iter().cloned());
        let big_m = IntMatrix::from_columns(target_dim, all_cols);
        let kprime_raw: Vec<Vec<BigInt>> = crate::abelian::kernel_basis(&big_m)
            .into_iter()
            .map(|v| v[..kbar.len()].to_vec())
            .collect();

        // lift each K'-basis vector to an actual kernel element of C1
        let quot_m = IntMatrix::from_columns(
            target_dim,
            {
                let mut q = b_cols.clone();
                q.extend(l0_cols.iter().cloned());
                q
            },
        );
        let quot_hnf = crate::abelian::hermite_normal_form(&quot_m);
        let mut gens: Vec<Nil2Element> = Vec::new();
        for y in &kprime_raw {
            // κ' = Σ y_i κ_i
            let mut kappa = vec![BigInt::zero(); n1];
            for (yi, kv) in y.iter().zip(&kbar) {
                for t in 0..n1 {
                    kappa[t] += yi * &kv[t];
                }
            }
            let z = word_from_coords(&self.c1, &kappa);
            let img = self.c0.normal_form(&self.boundary.apply(&z));
            let r = comm_coords(&img, &comm_keys_c0);
            let neg_r: Vec<BigInt> = r.iter().map(|x| -x).collect();
            let sol = quot_hnf
                .solve(&neg_r)
                .expect("residual class vanished but lift failed");
            // correction in Λ²(C1): first b_cols.len() coefficients
            let mut zc = z;
            for (t, &(j, i)) in comm_keys_c1.iter().enumerate() {
                if !sol[t].is_zero() {
                    zc = zc.mul(
                        &self.c1.gen(j).commutator(&self.c1.gen(i)).pow(&sol[t]),
                    );
                }
            }
            debug_assert!(self
                .c0
                .is_identity(&self.boundary.apply(&zc)));
            gens.push(zc);
        }
        // pure-Λ² kernel generators: {λ : B λ ∈ L0}
        let mut lk_cols: Vec<Vec<BigInt>> = b_cols.clone();
        lk_cols.extend(l0_cols.iter().cloned());
        let lk_m = IntMatrix::from_columns(target_dim, lk_cols);
        for v in crate::abelian::kernel_basis(&lk_m) {
            let lam = &v[..comm_keys_c1.len()];
            let mut z = self.c1.zero();
            for (t, &(j, i)) in comm_keys_c1.iter().enumerate() {
                if !lam[t].is_zero() {
                    z = z.mul(&self.c1.gen(j).commutator(&self.c1.gen(i)).pow(&lam[t]));
                }
            }
            if !self.c1.is_identity(&z) {
                gens.push(z);
            }
        }

        // relations among the (central) kernel generators
        let ng = gens.len();
        // stage 1: linear-part relations
        let c1ab = self.c1.abelianization();
        let mut lin_cols: Vec<Vec<BigInt>> =
            gens.iter().map(|g| g.abelianization()).collect();
        let nrel1 = c1ab.relations.cols;
        for c in 0..nrel1 {
            lin_cols.push(c1ab.relations.column(c));
        }
        let lin_m = IntMatrix::from_columns(n1, lin_cols);
        let rho: Vec<Vec<BigInt>> = crate::abelian::kernel_basis(&lin_m)
            .into_iter()
            .map(|v| v[..ng].to_vec())
            .collect();
        // stage 2: Λ-part residuals of the ρ-combinations
        let mut e_cols = Vec::new();
        for r in &rho {
            let mut z = self.c1.zero();
            for (c, g) in r.iter().zip(&gens) {
                if !c.is_zero() {
                    z = z.mul(&g.pow(c));
                }
            }
            let nf = self.c1.normal_form(&z);
            e_cols.push(comm_coords(&nf, &comm_keys_c1));
        }
        let mut l1_cols: Vec<Vec<BigInt>> = Vec::new();
        for col in self.c1.lambda_columns() {
            let mut v = vec![BigInt::zero(); comm_keys_c1.len()];
            for (k, c) in &col {
                v[comm_keys_c1.binary_search(k).unwrap()] = c.clone();
            }
            l1_cols.push(v);
        }
        let mut stage2 = e_cols.clone();
        stage2.extend(l1_cols);
        let stage2_m = IntMatrix::from_columns(comm_keys_c1.len(), stage2);
        let rel_combos: Vec<Vec<BigInt>> = crate::abelian::kernel_basis(&stage2_m)
            .into_iter()
            .map(|v| v[..rho.len()].to_vec())
            .collect();
        let mut rel_cols: Vec<Vec<BigInt>> = Vec::new();
        for y in &rel_combos {
            let mut col = vec![BigInt::zero(); ng];
            for (yi, r) in y.iter().zip(&rho) {
                for t in 0..ng {
                    col[t] += yi * &r[t];
                }
            }
            rel_cols.push(col);
        }
        AbGroupPresentation::new(ng, IntMatrix::from_columns(ng, rel_cols))
    }
}

fn comm_keys(n: usize) -> Vec<(usize, usize)> {
    let mut keys = Vec::new();
    for j in 0..n {
        for i in j + 1..n {
            keys.push((j, i));
        }
    }
    keys
}

fn comm_coords(x: &Nil2Element, keys: &[(usize, usize)]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); keys.len()];
    for (k, c) in &x.comm {
        v[keys.binary_search(k).unwrap()] = c.clone();
    }
    v
}

fn word_from_coords(g: &PresentedNil2, v: &[BigInt]) -> Nil2Element {
    let mut z = g.zero();
    for (i, c) in v.iter().enumerate() {
        if !c.is_zero() {
            z = z.mul(&g.gen(i).pow(c));
        }
    }
    z
}

/// Morphism of quadratic pair modules.
#[derive(Clone, Debug)]
pub struct QpmMorphism {
    pub f0: Nil2Hom,
    pub f1: Nil2Hom,
    pub fee: IntMatrix,
}

impl QpmMorphism {
    pub fn identity(c: &QuadraticPairModule) -> Self {
        QpmMorphism {
            f0: Nil2Hom::identity(&c.c0.basis),
            f1: Nil2Hom::identity(&c.c1.basis),
            fee: IntMatrix::identity(c.cee.ngens),
        }
    }

    pub fn compose(&self, first: &QpmMorphism) -> QpmMorphism {
        QpmMorphism {
            f0: self.f0.compose(&first.f0),
            f1: self.f1.compose(&first.f1),
            fee: self.fee.mul(&first.fee),
        }
    }

    pub fn check(
        &self,
        c: &QuadraticPairModule,
        d: &QuadraticPairModule,
    ) -> Result<(), QpError> {
        if !self.f0.respects(&c.c0, &d.c0) {
            return Err(QpError::IllFormed("f0 does not kill C0 relators".into()));
        }
        if !self.f1.respects(&c.c1, &d.c1) {
            return Err(QpError::IllFormed("f1 does not kill C1 relators".into()));
        }
        for col in 0..c.cee.relations.cols {
            if !d.cee.is_zero_vec(&self.fee.mul_vec(&c.cee.relations.column(col))) {
                return Err(QpError::IllFormed("fee does not kill ee relations".into()));
            }
        }
        // ∂ f1 = f0 ∂ on C1 generators
        for z in 0..c.c1.ngens() {
            let lhs = d.boundary.apply(&self.f1.images[z]);
            let rhs = self.f0.apply(&c.boundary.images[z]);
            if !d.c0.equal(&lhs, &rhs) {
                return Err(QpError::AxiomFailure(format!("∂ f1 != f0 ∂ at C1 gen {z}")));
            }
        }
        // f1 P = P fee on ee-generators
        for k in 0..c.cee.ngens {
            let mut unit = vec![BigInt::zero(); c.cee.ngens];
            unit[k] = BigInt::one();
            let lhs = self.f1.apply(&c.p[k]);
            let rhs = d.p_eval(&self.fee.mul_vec(&unit));
            if !d.c1.equal(&lhs, &rhs) {
                return Err(QpError::AxiomFailure(format!("f1 P != P fee at ee gen {k}")));
            }
        }
        // fee H = H f0 on C0 generators, and cross effects are preserved
        for i in 0..c.c0.ngens() {
            let lhs = self.fee.mul_vec(&c.h0.gen_values[i]);
            let rhs = d.h0.eval(&self.f0.images[i]);
            if !d.cee.eq_vecs(&lhs, &rhs) {
                return Err(QpError::AxiomFailure(format!("fee H != H f0 at C0 gen {i}")));
            }
            for j in 0..c.c0.ngens() {
                let lhs = self.fee.mul_vec(&c.h0.cross[i][j]);
                let rhs = d.h0.cross_el(&self.f0.images[i], &self.f0.images[j]);
                if !d.cee.eq_vecs(&lhs, &rhs) {
                    return Err(QpError::AxiomFailure(format!(
                        "cross effect not preserved at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn eq_on_gens(&self, other: &QpmMorphism, c: &QuadraticPairModule, d: &QuadraticPairModule) -> bool {
        for i in 0..c.c0.ngens() {
            if !d.c0.equal(&self.f0.images[i], &other.f0.images[i]) {
                return false;
            }
        }
        for z in 0..c.c1.ngens() {
            if !d.c1.equal(&self.f1.images[z], &other.f1.images[z]) {
                return false;
            }
        }
        for k in 0..c.cee.ngens {
            let a = self.fee.column(k);
            let b = other.fee.column(k);
            if !d.cee.eq_vecs(&a, &b) {
                return false;
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// The reflection functor Φ
// ---------------------------------------------------------------------------

/// Input pair f : D -> C in the category of square groups, with D given by
/// presentation data (it need not carry a full quadratic map).
pub struct PairInput<'a> {
    pub d_e: &'a PresentedNil2,
    pub d_ee: &'a AbGroupPresentation,
    /// P_D on the D_ee generators
    pub d_p: &'a [Nil2Element],
    pub f_e: &'a Nil2Hom,
    pub f_ee: &'a IntMatrix,
}

/// Index bookkeeping for Φ(f)₁: the D_e generators come first, then one
/// generator (0, c) per C_ee generator.
pub struct PhiIndex {
    pub nd: usize,
    pub nee: usize,
}

impl PhiIndex {
    pub fn d_gen(&self, i: usize) -> usize {
        i
    }
    pub fn ee_gen(&self, k: usize) -> usize {
        self.nd + k
    }
}

/// Φ(f : D -> C): the quadratic pair module with 0-level C and 1-level
/// D_e × C_ee / ((0, f_ee d) ~ (P d, 0), (0, HP c) ~ (0, 2c)).
pub fn phi(input: &PairInput, c: &SquareGroup) -> (QuadraticPairModule, PhiIndex) {
    let nd = input.d_e.ngens();
    let nee = c.ee.ngens;
    let idx = PhiIndex { nd, nee };

    let mut names: Vec<String> = Vec::with_capacity(nd + nee);
    for i in 0..nd {
        names.push(format!("d{i}"));
    }
    for k in 0..nee {
        names.push(format!("c{k}"));
    }
    let basis = PointedSet::new(names);
    let dmap: Vec<usize> = (0..nd).collect();

    let ee_word = |v: &[BigInt]| -> Nil2Element {
        let mut z = Nil2Element::zero(&basis);
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                z = z.mul(&Nil2Element::gen(&basis, idx.ee_gen(k)).pow(c));
            }
        }
        z
    };

    let mut relators: Vec<Nil2Element> = Vec::new();
    // relators of D_e
    for r in &input.d_e.relators {
        relators.push(reindex_monotone(r, &dmap, &basis));
    }
    // the (0, c) generators are central
    for k in 0..nee {
        let g = Nil2Element::gen(&basis, idx.ee_gen(k));
        for t in 0..nd + nee {
            if t != idx.ee_gen(k) {
                relators.push(g.commutator(&Nil2Element::gen(&basis, t)));
            }
        }
    }
    // relations of C_ee
    for col in 0..c.ee.relations.cols {
        relators.push(ee_word(&c.ee.relations.column(col)));
    }
    // (P_D d, 0) ~ (0, f_ee d) for D_ee generators
    for (k, pd) in input.d_p.iter().enumerate() {
        let mut unit = vec![BigInt::zero(); input.d_ee.ngens];
        unit[k] = BigInt::one();
        let lhs = reindex_monotone(pd, &dmap, &basis);
        let rhs = ee_word(&input.f_ee.mul_vec(&unit));
        relators.push(lhs.mul(&rhs.inv()));
    }
    // (0, HP c) ~ (0, 2c) for C_ee generators
    for k in 0..nee {
        let hp = c.h.eval(&c.p[k]);
        let mut v = hp;
        v[k] -= BigInt::from(2);
        relators.push(ee_word(&v));
    }

    let c1 = PresentedNil2::new(basis.clone(), relators);

    // P(c) = (0, c)
    let p: Vec<Nil2Element> =
        (0..nee).map(|k| Nil2Element::gen(&basis, idx.ee_gen(k))).collect();
    // ∂(d, c) = f_e(d) + P(c)
    let mut bimages: Vec<Nil2Element> = Vec::with_capacity(nd + nee);
    for i in 0..nd {
        bimages.push(input.f_e.images[i].clone());
    }
    for k in 0..nee {
        let mut unit = vec![BigInt::zero(); nee];
        unit[k] = BigInt::one();
        bimages.push(c.p_eval(&unit));
    }
    let boundary = Nil2Hom::new(basis, c.e.basis.clone(), bimages);

    (
        QuadraticPairModule {
            c0: c.e.clone(),
            c1,
            cee: c.ee.clone(),
            p,
            h0: c.h.clone(),
            boundary,
        },
        idx,
    )
}

/// Φ applied to a morphism of full square groups.
pub fn phi_of_morphism(
    d: &SquareGroup,
    c: &SquareGroup,
    fe: &Nil2Hom,
    fee: &IntMatrix,
) -> (QuadraticPairModule, PhiIndex) {
    let input = PairInput { d_e: &d.e, d_ee: &d.ee, d_p: &d.p, f_e: fe, f_ee: fee };
    phi(&input, c)
}

/// Z̄_nil = Φ(0 -> Z_nil): 1-level Z/2, ∂ = 0, P the projection,
/// H(n) = binom(n,2).
pub fn zbar_nil() -> QuadraticPairModule {
    let znil = crate::sqgroup::make_znil_unit();
    let empty = PresentedNil2::free(PointedSet::new(Vec::<String>::new()));
    let d_ee = AbGroupPresentation::trivial();
    let fe = Nil2Hom::new(empty.basis.clone(), znil.e.basis.clone(), vec![]);
    let fee = IntMatrix::zero(1, 0);
    let input = PairInput { d_e: &empty, d_ee: &d_ee, d_p: &[], f_e: &fe, f_ee: &fee };
    phi(&input, &znil).0
}

/// The interval quadratic pair module 𝕀 with ∂(ī) = -i₀+i₁ and
/// 1-level Zī ⊕ Z/2 P(i₀|i₀)_H ⊕ Z P(i₀|i₁)_H.
pub fn interval() -> QuadraticPairModule {
    let basis0 = PointedSet::new(vec!["i0", "i1"]);
    let znil = crate::sqgroup::make_znil(&basis0);
    let basis1 = PointedSet::new(vec!["ib", "p00", "p01"]);
    let ib = Nil2Element::gen(&basis1, 0);
    let p00 = Nil2Element::gen(&basis1, 1);
    let p01 = Nil2Element::gen(&basis1, 2);
    let mut relators = vec![p00.pow(&BigInt::from(2))];
    relators.push(ib.commutator(&p00));
    relators.push(ib.commutator(&p01));
    relators.push(p00.commutator(&p01));
    let c1 = PresentedNil2::new(basis1.clone(), relators);
    // P on ee gens (i0⊗i0, i0⊗i1, i1⊗i0, i1⊗i1)
    let p = vec![p00.clone(), p01.clone(), p01.inv(), p00.clone()];
    let i0 = Nil2Element::gen(&basis0, 0);
    let i1 = Nil2Element::gen(&basis0, 1);
    let boundary = Nil2Hom::new(
        basis1,
        basis0.clone(),
        vec![
            i0.inv().mul(&i1),                 // ∂ ī = -i0 + i1
            Nil2Element::zero(&basis0),        // ∂ P(i0⊗i0) = [i0,i0] = 0
            i1.commutator(&i0),                // ∂ P(i0⊗i1) = [i1,i0]
        ],
    );
    QuadraticPairModule {
        c0: znil.e.clone(),
        c1,
        cee: znil.ee.clone(),
        p,
        h0: znil.h.clone(),
        boundary,
    }
}

/// The endpoint inclusions i₀, i₁ : Z̄_nil -> 𝕀 and the projection
/// p : 𝕀 -> Z̄_nil with p i₀ = p i₁ = id.
pub fn interval_maps(
    zbar: &QuadraticPairModule,
    iv: &QuadraticPairModule,
) -> (QpmMorphism, QpmMorphism, QpmMorphism) {
    let inclusion = |a: usize| -> QpmMorphism {
        let f0 = Nil2Hom::new(
            zbar.c0.basis.clone(),
            iv.c0.basis.clone(),
            vec![iv.c0.gen(a)],
        );
        // the Z/2 generator is P(1); it maps to P(i_a ⊗ i_a) = p00
        let f1 = Nil2Hom::new(
            zbar.c1.basis.clone(),
            iv.c1.basis.clone(),
            vec![iv.c1.gen(1)],
        );
        let mut fee = IntMatrix::zero(4, 1);
        fee[(a * 2 + a, 0)] = BigInt::one();
        QpmMorphism { f0, f1, fee }
    };
    let i0 = inclusion(0);
    let i1 = inclusion(1);
    let p = {
        let f0 = Nil2Hom::new(
            iv.c0.basis.clone(),
            zbar.c0.basis.clone(),
            vec![zbar.c0.gen(0), zbar.c0.gen(0)],
        );
        // p(ī) = 0, and both P-symbols map to the Z/2 generator
        let f1 = Nil2Hom::new(
            iv.c1.basis.clone(),
            zbar.c1.basis.clone(),
            vec![zbar.c1.zero(), zbar.c1.gen(0), zbar.c1.gen(0)],
        );
        let mut fee = IntMatrix::zero(1, 4);
        for k in 0..4 {
            fee[(0, k)] = BigInt::one();
        }
        QpmMorphism { f0, f1, fee }
    };
    (i0, i1, p)
}

// ---------------------------------------------------------------------------
// Tensor product of quadratic pair modules
// ---------------------------------------------------------------------------

/// C ⊙ D = Φ(∂̄ : C⊙̄D -> C_(0)⊙D_(0)), where C⊙̄D is the square-group
/// pushout of C_(1)⊙D_(0) and C_(0)⊙D_(1) under C_(1)⊙D_(1).
pub struct QpmTensor {
    pub c: QuadraticPairModule,
    pub d: QuadraticPairModule,
    pub sg00: SgTensor,
    pub sg10: SgTensor,
    pub sg01: SgTensor,
    pub result: QuadraticPairModule,
    nc1: usize,
    nd1: usize,
    nc0: usize,
    nd0: usize,
    nee: usize,
    n_push: usize,
}

impl QpmTensor {
    pub fn new(
        c: &QuadraticPairModule,
        d: &QuadraticPairModule,
    ) -> Result<QpmTensor, QpError> {
        if !c.is_0good() || !d.is_0good() {
            return Err(QpError::Goodness("tensor factors must be 0-good".into()));
        }
        let c0 = c.sg0();
        let c1 = c.sg1();
        let d0 = d.sg0();
        let d1 = d.sg1();
        let sg00 = SgTensor::new(&c0, &d0)?;
        let sg10 = SgTensor::new(&c1, &d0)?;
        let sg01 = SgTensor::new(&c0, &d1)?;

        let nc0 = c.c0.ngens();
        let nc1 = c.c1.ngens();
        let nd0 = d.c0.ngens();
        let nd1 = d.c1.ngens();
        let ncee = c.cee.ngens;
        let ndee = d.cee.ngens;
        let nee = ncee * ndee;
        let zeta_ct = nc1 * nd0;
        let xi_ct = nc0 * nd1;
        let n_push = zeta_ct + xi_ct + nee;

        // pushout basis
        let mut names: Vec<String> = Vec::with_capacity(n_push);
        for i in 0..nc1 {
            for j in 0..nd0 {
                names.push(format!("z{i}_{j}"));
            }
        }
        for i in 0..nc0 {
            for j in 0..nd1 {
                names.push(format!("x{i}_{j}"));
            }
        }
        for k in 0..nee {
            names.push(format!("w{k}"));
        }
        let push_basis = PointedSet::new(names);

        // reindex maps from the two tensor pieces into the pushout
        let map10: Vec<usize> = (0..zeta_ct)
            .chain((0..nee).map(|k| zeta_ct + xi_ct + k))
            .collect();
        let map01: Vec<usize> = (0..xi_ct)
            .map(|g| zeta_ct + g)
            .chain((0..nee).map(|k| zeta_ct + xi_ct + k))
            .collect();

        let re10 = |x: &Nil2Element| reindex_monotone(x, &map10, &push_basis);
        let re01 = |x: &Nil2Element| reindex_monotone(x, &map01, &push_basis);

        let mut push_relators: Vec<Nil2Element> = Vec::new();
        for r in &sg10.result.e.relators {
            push_relators.push(re10(r));
        }
        for r in &sg01.result.e.relators {
            push_relators.push(re01(r));
        }
        // identifications from C_(1)⊙D_(1): ζ(z ⊙̲ ∂w) = ξ(∂z ⊙̲ w)
        for zi in 0..nc1 {
            for wj in 0..nd1 {
                let lhs = re10(&sg10.expand(&c.c1.gen(zi), &d.boundary.images[wj]));
                let rhs = re01(&sg01.expand(&c.boundary.images[zi], &d.c1.gen(wj)));
                push_relators.push(lhs.mul(&rhs.inv()));
            }
        }
        // mixed square-group commutator law across the two pushout pieces:
        // [ζ(z⊙̲w̃), ξ(x⊙̲w)] = P((∂̄·|∂̄·)_H); the per-piece instances come
        // with the sg10/sg01 relators, the cross-piece ones do not
        {
            let bar_of = |gen: usize| -> Nil2Element {
                if gen < zeta_ct {
                    let (zi, j) = (gen / nd0, gen % nd0);
                    sg00.expand(&c.boundary.images[zi], &d.c0.gen(j))
                } else {
                    let g = gen - zeta_ct;
                    let (i, wj) = (g / nd1, g % nd1);
                    sg00.expand(&c.c0.gen(i), &d.boundary.images[wj])
                }
            };
            for u in 0..zeta_ct {
                let bu = bar_of(u);
                for v in zeta_ct..zeta_ct + xi_ct {
                    let bv = bar_of(v);
                    let cross = sg00.result.h.cross_el(&bu, &bv);
                    let mut pword = Nil2Element::zero(&push_basis);
                    for (k, cc) in cross.iter().enumerate() {
                        if !cc.is_zero() {
                            pword = pword.mul(
                                &Nil2Element::gen(&push_basis, zeta_ct + xi_ct + k).pow(cc),
                            );
                        }
                    }
                    let comm = Nil2Element::gen(&push_basis, u)
                        .commutator(&Nil2Element::gen(&push_basis, v));
                    push_relators.push(comm.mul(&pword.inv()));
                }
            }
        }
        let push_e = PresentedNil2::new(push_basis.clone(), push_relators);

        // ∂̄ into (C0⊙D0)_e
        let mut bar_images: Vec<Nil2Element> = Vec::with_capacity(n_push);
        for zi in 0..nc1 {
            for j in 0..nd0 {
                bar_images.push(sg00.expand(&c.boundary.images[zi], &d.c0.gen(j)));
            }
        }
        for i in 0..nc0 {
            for wj in 0..nd1 {
                bar_images.push(sg00.expand(&c.c0.gen(i), &d.boundary.images[wj]));
            }
        }
        for k in 0..nee {
            bar_images.push(Nil2Element::gen(sg00.basis(), sg00.result.ngens() - nee + k));
        }
        let bar = Nil2Hom::new(push_basis.clone(), sg00.basis().clone(), bar_images);

        // pushout P: ee-generator k ↦ shared ω gen
        let push_p: Vec<Nil2Element> = (0..nee)
            .map(|k| Nil2Element::gen(&push_basis, zeta_ct + xi_ct + k))
            .collect();

        let input = PairInput {
            d_e: &push_e,
            d_ee: &sg00.result.ee,
            d_p: &push_p,
            f_e: &bar,
            f_ee: &IntMatrix::identity(nee),
        };
        let (result, _) = phi(&input, &sg00.result);

        Ok(QpmTensor {
            c: c.clone(),
            d: d.clone(),
            sg00,
            sg10,
            sg01,
            result,
            nc1,
            nd1,
            nc0,
            nd0,
            nee,
            n_push,
        })
    }

    pub fn zeta_gen(&self, zi: usize, j: usize) -> usize {
        zi * self.nd0 + j
    }

    pub fn xi_gen(&self, i: usize, wj: usize) -> usize {
        self.nc1 * self.nd0 + i * self.nd1 + wj
    }

    pub fn omega_gen(&self, k: usize) -> usize {
        self.nc1 * self.nd0 + self.nc0 * self.nd1 + k
    }

    pub fn pee_gen(&self, k: usize) -> usize {
        self.n_push + k
    }

    /// υζ : (C_(1)⊙D_(0))_e -> (C⊙D)₁ on elements.
    pub fn upsilon_zeta(&self, x: &Nil2Element) -> Nil2Element {
        let zeta_ct = self.nc1 * self.nd0;
        let map: Vec<usize> = (0..zeta_ct)
            .chain((0..self.nee).map(|k| self.omega_gen(k)))
            .collect();
        reindex_monotone(x, &map, &self.result.c1.basis)
    }

    /// υξ : (C_(0)⊙D_(1))_e -> (C⊙D)₁ on elements.
    pub fn upsilon_xi(&self, x: &Nil2Element) -> Nil2Element {
        let zeta_ct = self.nc1 * self.nd0;
        let xi_ct = self.nc0 * self.nd1;
        let map: Vec<usize> = (0..xi_ct)
            .map(|g| zeta_ct + g)
            .chain((0..self.nee).map(|k| self.omega_gen(k)))
            .collect();
        reindex_monotone(x, &map, &self.result.c1.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::big;

    #[test]
    fn zbar_structure() {
        let z = zbar_nil();
        z.check_axioms().unwrap();
        assert!(z.is_0good());
        // 1-level has order exactly 2
        assert_eq!(z.c1.order(), Some(big(2)));
        // ∂ = 0
        assert!(z.c0.is_identity(&z.boundary.images[0]));
        // h0 = Z, h1 = Z/2
        let (t, r) = z.h0_group().invariants();
        assert!(t.is_empty());
        assert_eq!(r, 1);
        let (t, r) = z.h1_group().invariants();
        assert_eq!(t, vec![big(2)]);
        assert_eq!(r, 0);
    }

    #[test]
    fn interval_structure() {
        let iv = interval();
        iv.check_axioms().unwrap();
        assert!(iv.is_0good());
        // ∂ī = -i0+i1, p(ī-part) behaviours
        let d = iv.boundary.images[0].clone();
        let i0 = iv.c0.gen(0);
        let i1 = iv.c0.gen(1);
        assert!(iv.c0.equal(&d, &i0.inv().mul(&i1)));
        // 1-level: Z ī ⊕ Z/2 P(i0|i0)_H ⊕ Z P(i0|i1)_H
        let (tor, rank) = iv.c1.abelianization().invariants();
        assert_eq!(tor, vec![big(2)]);
        assert_eq!(rank, 2);
        let nf = iv.c1.normal_form(&iv.c1.gen(1).pow(&big(3)));
        assert_eq!(nf, iv.c1.gen(1));
        // P(i1⊗i0) = -P(i0⊗i1) and P(i1⊗i1) = P(i0⊗i0)
        assert!(iv.c1.equal(&iv.p[2], &iv.p[1].inv()));
        assert!(iv.c1.equal(&iv.p[3], &iv.p[0]));
        // h0 = Z: both endpoint generators identified
        let (t, r) = iv.h0_group().invariants();
        assert!(t.is_empty());
        assert_eq!(r, 1);
    }

    #[test]
    fn phi_of_identity_znil() {
        // Φ(id: Z_nil -> Z_nil): the identification (0, f_ee d) ~ (P d, 0)
        // with P_D = 0 kills the C_ee factor, so the 1-level is Z and
        // ∂(d) = d is an isomorphism onto the free part.
        let z = crate::sqgroup::make_znil_unit();
        let fe = Nil2Hom::identity(&z.e.basis);
        let fee = IntMatrix::identity(1);
        let (q, idx) = phi_of_morphism(&z, &z, &fe, &fee);
        q.check_axioms().unwrap();
        let cgen = q.c1.gen(idx.ee_gen(0));
        assert!(q.c1.is_identity(&cgen));
        let dgen = q.c1.gen(idx.d_gen(0));
        assert!(!q.c1.is_identity(&dgen.pow(&big(5))));
        // h0 = coker ∂ = 0 and h1 = ker ∂ = 0
        assert!(q.h0_group().is_trivial());
        assert!(q.h1_group().is_trivial());
    }

    #[test]
    fn phi_of_zero_znil_e() {
        // Φ(0 -> Z_nil[{x,y}]): 1-level is C_ee / (HP(c) ~ 2c)
        let z = crate::sqgroup::make_znil(&PointedSet::new(vec!["x", "y"]));
        let empty = PresentedNil2::free(PointedSet::new(Vec::<String>::new()));
        let d_ee = AbGroupPresentation::trivial();
        let fe = Nil2Hom::new(empty.basis.clone(), z.e.basis.clone(), vec![]);
        let fee = IntMatrix::zero(4, 0);
        let input = PairInput { d_e: &empty, d_ee: &d_ee, d_p: &[], f_e: &fe, f_ee: &fee };
        let (q, idx) = phi(&input, &z);
        q.check_axioms().unwrap();
        assert!(q.is_0good());
        // HP(a⊗b) = a⊗b - b⊗a, so (0, b⊗a + a⊗b) ~ (0, 2(a⊗b)) gives
        // c_{ab} + c_{ba} = 0 in the 1-level; diagonal gens are 2-torsion
        let cab = q.c1.gen(idx.ee_gen(1));
        let cba = q.c1.gen(idx.ee_gen(2));
        assert!(q.c1.is_identity(&cab.mul(&cba)));
        let caa = q.c1.gen(idx.ee_gen(0));
        assert!(q.c1.is_identity(&caa.pow(&big(2))));
        assert!(!q.c1.is_identity(&caa));
    }

    #[test]
    fn interval_inclusions_and_projection() {
        let zb = zbar_nil();
        let iv = interval();
        let (i0, i1, p) = interval_maps(&zb, &iv);
        i0.check(&zb, &iv).unwrap();
        i1.check(&zb, &iv).unwrap();
        p.check(&iv, &zb).unwrap();
        let id = QpmMorphism::identity(&zb);
        assert!(p.compose(&i0).eq_on_gens(&id, &zb, &zb));
        assert!(p.compose(&i1).eq_on_gens(&id, &zb, &zb));
        // p(ī) = 0
        assert!(zb.c1.is_identity(&p.f1.images[0]));
        // ∂ī = -i0 + i1 and 𝕀 is 0-good are covered by interval_structure
    }

    #[test]
    fn tensor_zbar_zbar() {
        let z = zbar_nil();
        let t = QpmTensor::new(&z, &z).unwrap();
        t.result.check_axioms().unwrap();
        // pushout identification: the two injector images of a mixed
        // generator agree, ζ(z ⊙̲ ∂w) = ξ(∂z ⊙̲ w)
        for zi in 0..z.c1.ngens() {
            for wj in 0..z.c1.ngens() {
                let lhs = t.upsilon_zeta(&t.sg10.expand(&z.c1.gen(zi), &z.boundary.images[wj]));
                let rhs = t.upsilon_xi(&t.sg01.expand(&z.boundary.images[zi], &z.c1.gen(wj)));
                assert!(t.result.c1.equal(&lhs, &rhs));
            }
        }
        // (C⊙D)_ee = C_ee ⊗ D_ee = Z
        let (tor, r) = t.result.cee.invariants();
        assert!(tor.is_empty());
        assert_eq!(r, 1);
        // (C⊙D)_(0) = C_(0)⊙D_(0) ≅ Z_nil: 0-level is Z
        let (tor, r) = t.result.sg0().coker_p().invariants();
        assert!(tor.is_empty());
        assert_eq!(r, 1);
    }
}
