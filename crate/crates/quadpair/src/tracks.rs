//! Tracks between qpm morphisms: functions α : C₀ -> D₁ with
//! α(x+y) = α(x)^{f₀(y)} + α(y), g₀ = f₀ + ∂α and g₁ = f₁ + α∂.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::QpError;
use crate::nil2::Nil2Element;
use crate::qpm::{QpmMorphism, QuadraticPairModule};

#[derive(Clone, Debug)]
pub struct QpmTrack {
    pub f: QpmMorphism,
    pub g: QpmMorphism,
    /// values on the C₀ generators, in D₁
    pub alpha: Vec<Nil2Element>,
}

impl QpmTrack {
    pub fn trivial(f: &QpmMorphism, c: &QuadraticPairModule, d: &QuadraticPairModule) -> Self {
        QpmTrack {
            f: f.clone(),
            g: f.clone(),
            alpha: vec![d.c1.zero(); c.c0.ngens()],
        }
    }

    /// Extend the generator values along the whole normal form of x by the
    /// derivation rule (1).
    pub fn apply(
        &self,
        d: &QuadraticPairModule,
        x: &Nil2Element,
    ) -> Nil2Element {
        alpha_apply(&self.alpha, &self.f.f0, d, x)
    }

    /// Track axioms: (1) on all relators of C₀ (well-definedness) and on a
    /// commutator spot-check, (2) and (3) on generators.
    pub fn check(
        &self,
        c: &QuadraticPairModule,
        d: &QuadraticPairModule,
    ) -> Result<(), QpError> {
        for (ri, r) in c.c0.relators.iter().enumerate() {
            if !d.c1.is_identity(&self.apply(d, r)) {
                return Err(QpError::AxiomFailure(format!("α(relator {ri}) != 0")));
            }
        }
        // (1) holds on reordered words: α(y + x) computed directly vs via
        // the rule, for generator pairs
        for i in 0..c.c0.ngens() {
            for j in 0..c.c0.ngens() {
                let x = c.c0.gen(i);
                let y = c.c0.gen(j);
                let lhs = self.apply(d, &y.mul(&x));
                let rhs = d
                    .action(&self.apply(d, &y), &self.f.f0.apply(&x))
                    .mul(&self.apply(d, &x));
                if !d.c1.equal(&lhs, &rhs) {
                    return Err(QpError::AxiomFailure(format!(
                        "derivation rule fails at gens {i},{j}"
                    )));
                }
            }
        }
        // (2) g0 = f0 + ∂α
        for i in 0..c.c0.ngens() {
            let lhs = self.g.f0.images[i].clone();
            let rhs = self.f.f0.images[i].mul(&d.boundary.apply(&self.alpha[i]));
            if !d.c0.equal(&lhs, &rhs) {
                return Err(QpError::AxiomFailure(format!("g0 != f0 + ∂α at gen {i}")));
            }
        }
        // (3) g1 = f1 + α∂
        for z in 0..c.c1.ngens() {
            let lhs = self.g.f1.images[z].clone();
            let rhs = self.f.f1.images[z].mul(&self.apply(d, &c.boundary.images[z]));
            if !d.c1.equal(&lhs, &rhs) {
                return Err(QpError::AxiomFailure(format!("g1 != f1 + α∂ at C1 gen {z}")));
            }
        }
        Ok(())
    }

    /// Vertical composition: self after earlier, (α□β)(x) = β(x) + α(x).
    pub fn vcomp(
        &self,
        earlier: &QpmTrack,
        c: &QuadraticPairModule,
        d: &QuadraticPairModule,
    ) -> Result<QpmTrack, QpError> {
        if !earlier.g.eq_on_gens(&self.f, c, d) {
            return Err(QpError::Composability("vcomp endpoints do not match".into()));
        }
        let alpha = earlier
            .alpha
            .iter()
            .zip(&self.alpha)
            .map(|(b, a)| b.mul(a))
            .collect();
        Ok(QpmTrack { f: earlier.f.clone(), g: self.g.clone(), alpha })
    }

    /// Vertical inverse: g ⇒ f with values -α.
    pub fn vinverse(&self) -> QpmTrack {
        QpmTrack {
            f: self.g.clone(),
            g: self.f.clone(),
            alpha: self.alpha.iter().map(|a| a.inv()).collect(),
        }
    }

    /// Horizontal composition with a morphism on the left: (mα)(x) = m₁α(x).
    pub fn hcomp_left(&self, m: &QpmMorphism) -> QpmTrack {
        QpmTrack {
            f: m.compose(&self.f),
            g: m.compose(&self.g),
            alpha: self.alpha.iter().map(|a| m.f1.apply(a)).collect(),
        }
    }

    /// Horizontal composition with a morphism on the right:
    /// (αm)(x) = α(m₀(x)).
    pub fn hcomp_right(
        &self,
        m: &QpmMorphism,
        d: &QuadraticPairModule,
    ) -> QpmTrack {
        let alpha = m
            .f0
            .images
            .iter()
            .map(|im| self.apply(d, im))
            .collect();
        QpmTrack { f: self.f.compose(m), g: self.g.compose(m), alpha }
    }
}

/// α on an arbitrary element by block peeling:
/// α(n g + rest) = α(n g)^{f₀(rest)} + α(rest) with
/// α(n g) = n α(g) + binom(n,2) P(∂α(g) | f₀(g))_H.
pub fn alpha_apply(
    alpha: &[Nil2Element],
    f0: &crate::nil2::Nil2Hom,
    d: &QuadraticPairModule,
    x: &Nil2Element,
) -> Nil2Element {
    if let Some((i, n)) = x.linear_blocks().into_iter().next() {
        let gi = Nil2Element::gen(&x.basis, i);
        let rest = gi.pow(&-&n).mul(x);
        let block = alpha_power(&alpha[i], &f0.images[i], d, &n);
        let twisted = d.action(&block, &f0.apply(&rest));
        return twisted.mul(&alpha_apply(alpha, f0, d, &rest));
    }
    if let Some((&(j, i), cc)) = x.comm.iter().next() {
        let cc = cc.clone();
        let w = Nil2Element::gen(&x.basis, j).commutator(&Nil2Element::gen(&x.basis, i));
        let rest = w.pow(&-&cc).mul(x);
        // α([g_j, g_i]) by peeling the explicit word -g_j - g_i + g_j + g_i
        let gj = Nil2Element::gen(&x.basis, j);
        let gi = Nil2Element::gen(&x.basis, i);
        let a_j = &alpha[j];
        let a_i = &alpha[i];
        let neg = |a: &Nil2Element, u: &Nil2Element| -> Nil2Element {
            // α(-g) = -α(g) + P(∂α(g) | f₀(g))_H
            let corr = d.p_eval(&d.h0.cross_el(&d.boundary.apply(a), u));
            a.inv().mul(&corr)
        };
        let u_j = f0.apply(&gj);
        let u_i = f0.apply(&gi);
        let t1 = d.action(&neg(a_j, &u_j), &f0.apply(&gi.inv().mul(&gj).mul(&gi)));
        let t2 = d.action(&neg(a_i, &u_i), &f0.apply(&gj.mul(&gi)));
        let t3 = d.action(a_j, &u_i);
        let aw = t1.mul(&t2).mul(&t3).mul(a_i);
        // α(w^c) = c α(w): the correction cross effect vanishes since f₀(w)
        // has trivial abelianization
        let block = aw.pow(&cc);
        let twisted = d.action(&block, &f0.apply(&rest));
        return twisted.mul(&alpha_apply(alpha, f0, d, &rest));
    }
    d.c1.zero()
}

fn alpha_power(
    a: &Nil2Element,
    u: &Nil2Element,
    d: &QuadraticPairModule,
    n: &BigInt,
) -> Nil2Element {
    let binom: BigInt = (n * (n - BigInt::one())) / 2;
    let mut out = a.pow(n);
    if !binom.is_zero() {
        let corr = d.p_eval(&d.h0.cross_el(&d.boundary.apply(a), u));
        out = out.mul(&corr.pow(&binom));
    }
    out
}

/// Derive the ee-component of a morphism from its 0-component, using the
/// goodness decomposition of the source 0-level.
pub fn derive_fee(
    c: &QuadraticPairModule,
    d: &QuadraticPairModule,
    g0: &crate::nil2::Nil2Hom,
) -> Result<crate::abelian::IntMatrix, QpError> {
    let sg0 = c.sg0();
    let n = c.c0.ngens();
    let mut m = crate::abelian::IntMatrix::zero(d.cee.ngens, c.cee.ngens);
    for k in 0..c.cee.ngens {
        let mut unit = vec![BigInt::zero(); c.cee.ngens];
        unit[k] = BigInt::one();
        let w = sg0.goodness_decompose(&unit)?;
        let mut col = vec![BigInt::zero(); d.cee.ngens];
        for i in 0..n {
            for j in 0..n {
                let wij = &w[i * n + j];
                if wij.is_zero() {
                    continue;
                }
                let cr = d.h0.cross_el(&g0.images[i], &g0.images[j]);
                for t in 0..d.cee.ngens {
                    col[t] += &cr[t] * wij;
                }
            }
        }
        for t in 0..d.cee.ngens {
            m[(t, k)] = col[t].clone();
        }
    }
    Ok(m)
}

/// Build the track determined by f and generator values α, deriving the
/// target morphism g from conditions (2) and (3).
pub fn track_from_alpha(
    f: &QpmMorphism,
    alpha: Vec<Nil2Element>,
    c: &QuadraticPairModule,
    d: &QuadraticPairModule,
) -> Result<QpmTrack, QpError> {
    let mut g0_images = Vec::with_capacity(c.c0.ngens());
    for i in 0..c.c0.ngens() {
        g0_images.push(f.f0.images[i].mul(&d.boundary.apply(&alpha[i])));
    }
    let g0 = crate::nil2::Nil2Hom::new(c.c0.basis.clone(), d.c0.basis.clone(), g0_images);
    let mut g1_images = Vec::with_capacity(c.c1.ngens());
    let probe = QpmTrack { f: f.clone(), g: f.clone(), alpha: alpha.clone() };
    for z in 0..c.c1.ngens() {
        g1_images.push(f.f1.images[z].mul(&probe.apply(d, &c.boundary.images[z])));
    }
    let g1 = crate::nil2::Nil2Hom::new(c.c1.basis.clone(), d.c1.basis.clone(), g1_images);
    let gee = derive_fee(c, d, &g0)?;
    let g = QpmMorphism { f0: g0, f1: g1, fee: gee };
    g.check(c, d)?;
    let track = QpmTrack { f: f.clone(), g, alpha };
    track.check(c, d)?;
    Ok(track)
}
