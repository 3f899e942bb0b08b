//! The monoidal layer on quadratic pair modules: unit isomorphisms with
//! Z̄_nil, the symmetry, tensor of morphisms and of tracks, and the cylinder
//! correspondence between tracks and morphisms out of 𝕀⊙C.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abelian::{tensor_pairing, IntMatrix};
use crate::error::QpError;
use crate::nil2::{Nil2Element, Nil2Hom};
use crate::qpm::{QpmMorphism, QpmTensor, QuadraticPairModule};
use crate::tracks::QpmTrack;

fn kron(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut m = IntMatrix::zero(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            if a[(i, j)].is_zero() {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    if !b[(k, l)].is_zero() {
                        m[(i * b.rows + k, j * b.cols + l)] = &a[(i, j)] * &b[(k, l)];
                    }
                }
            }
        }
    }
    m
}

/// Left unit law: Z̄_nil ⊙ C -> C.
pub fn unit_iso_left(t: &QpmTensor) -> Result<QpmMorphism, QpError> {
    let c = &t.d;
    let zbar = &t.c;
    if zbar.c1.ngens() != 1 || zbar.c0.ngens() != 1 {
        return Err(QpError::IllFormed("left factor is not Z̄_nil".into()));
    }
    let csg0 = c.sg0();
    // 0-level: the square-group unit iso Z_nil ⊙ C_(0) ≅ C_(0)
    let f0 = crate::sqgroup::unit_iso_left(&t.sg00)?;
    // 1-level values on the Φ generators
    let n_phi = t.result.c1.ngens();
    let mut f1_images = Vec::with_capacity(n_phi);
    // ζ-gens: zb ⊙̲ x_j with zb = P(1) maps to P_C(Δ(x_j))
    for j in 0..c.c0.ngens() {
        let _ = t.zeta_gen(0, j);
        f1_images.push(c.p_eval(&csg0.delta(&c.c0.gen(j))));
    }
    // ξ-gens: 1 ⊙̲ z ↦ z
    for z in 0..c.c1.ngens() {
        f1_images.push(c.c1.gen(z));
    }
    // ω-gens and P-part gens: ↦ P_C
    for k in 0..c.cee.ngens {
        let mut unit = vec![BigInt::zero(); c.cee.ngens];
        unit[k] = BigInt::one();
        f1_images.push(c.p_eval(&unit));
    }
    for k in 0..c.cee.ngens {
        let mut unit = vec![BigInt::zero(); c.cee.ngens];
        unit[k] = BigInt::one();
        f1_images.push(c.p_eval(&unit));
    }
    let f1 = Nil2Hom::new(t.result.c1.basis.clone(), c.c1.basis.clone(), f1_images);
    Ok(QpmMorphism { f0: f0.fe, f1, fee: IntMatrix::identity(c.cee.ngens) })
}

pub fn unit_iso_left_inv(t: &QpmTensor) -> QpmMorphism {
    let c = &t.d;
    let f0 = crate::sqgroup::unit_iso_left_inv(&t.sg00);
    let mut f1_images = Vec::with_capacity(c.c1.ngens());
    for z in 0..c.c1.ngens() {
        f1_images.push(Nil2Element::gen(&t.result.c1.basis, t.xi_gen(0, z)));
    }
    let f1 = Nil2Hom::new(c.c1.basis.clone(), t.result.c1.basis.clone(), f1_images);
    QpmMorphism { f0: f0.fe, f1, fee: IntMatrix::identity(c.cee.ngens) }
}

/// Right unit law: C ⊙ Z̄_nil -> C.
pub fn unit_iso_right(t: &QpmTensor) -> Result<QpmMorphism, QpError> {
    let c = &t.c;
    let zbar = &t.d;
    if zbar.c1.ngens() != 1 || zbar.c0.ngens() != 1 {
        return Err(QpError::IllFormed("right factor is not Z̄_nil".into()));
    }
    let csg0 = c.sg0();
    // 0-level: C_(0) ⊙ Z_nil ≅ C_(0): x⊙̲1 ↦ x, ω(k,0) ↦ ∂P(a_k)
    let mut f0_images = Vec::new();
    for i in 0..c.c0.ngens() {
        f0_images.push(c.c0.gen(i));
    }
    for k in 0..c.cee.ngens {
        let mut unit = vec![BigInt::zero(); c.cee.ngens];
        unit[k] = BigInt::one();
        f0_images.push(csg0.p_eval(&unit));
    }
    let f0 = Nil2Hom::new(t.sg00.basis().clone(), c.c0.basis.clone(), f0_images);
    // 1-level
    let mut f1_images = Vec::new();
    // ζ-gens: z ⊙̲ u ↦ z
    for z in 0..c.c1.ngens() {
        f1_images.push(c.c1.gen(z));
    }
    // ξ-gens: x ⊙̲ zb = x ⊙̲ P(1) ↦ P_C((x|x)_H)
    for i in 0..c.c0.ngens() {
        f1_images.push(c.p_eval(&c.h0.cross_el(&c.c0.gen(i), &c.c0.gen(i))));
    }
    for k in 0..c.cee.ngens {
        let mut unit = vec![BigInt::zero(); c.cee.ngens];
        unit[k] = BigInt::one();
        f1_images.push(c.p_eval(&unit));
    }
    for k in 0..c.cee.ngens {
        let mut unit = vec![BigInt::zero(); c.cee.ngens];
        unit[k] = BigInt::one();
        f1_images.push(c.p_eval(&unit));
    }
    let f1 = Nil2Hom::new(t.result.c1.basis.clone(), c.c1.basis.clone(), f1_images);
    Ok(QpmMorphism { f0, f1, fee: IntMatrix::identity(c.cee.ngens) })
}

pub fn unit_iso_right_inv(t: &QpmTensor) -> QpmMorphism {
    let c = &t.c;
    let mut f0_images = Vec::new();
    for i in 0..c.c0.ngens() {
        f0_images.push(Nil2Element::gen(t.sg00.basis(), t.sg00.odot_idx(i, 0)));
    }
    let f0 = Nil2Hom::new(c.c0.basis.clone(), t.sg00.basis().clone(), f0_images);
    let mut f1_images = Vec::new();
    for z in 0..c.c1.ngens() {
        f1_images.push(Nil2Element::gen(&t.result.c1.basis, t.zeta_gen(z, 0)));
    }
    let f1 = Nil2Hom::new(c.c1.basis.clone(), t.result.c1.basis.clone(), f1_images);
    QpmMorphism { f0, f1, fee: IntMatrix::identity(c.cee.ngens) }
}

/// The symmetry τ : C⊙D -> D⊙C.
pub fn symmetry(t_cd: &QpmTensor, t_dc: &QpmTensor) -> QpmMorphism {
    let c = &t_cd.c;
    let d = &t_cd.d;
    let f0sg = crate::sqgroup::symmetry_iso(&t_cd.sg00, &t_dc.sg00);
    let mut f1_images = Vec::new();
    // ζ-gens: z ⊙̲ w̃ ↦ w̃ ⊙ z in D_(0)⊙C_(1)
    for zi in 0..c.c1.ngens() {
        for j in 0..d.c0.ngens() {
            let img = t_dc.sg01.expand_circ(&d.c0.gen(j), &c.c1.gen(zi));
            f1_images.push(t_dc.upsilon_xi(&img));
        }
    }
    // ξ-gens: x ⊙̲ w ↦ w ⊙ x in D_(1)⊙C_(0)
    for i in 0..c.c0.ngens() {
        for wj in 0..d.c1.ngens() {
            let img = t_dc.sg10.expand_circ(&d.c1.gen(wj), &c.c0.gen(i));
            f1_images.push(t_dc.upsilon_zeta(&img));
        }
    }
    let ncee = c.cee.ngens;
    let ndee = d.cee.ngens;
    for k in 0..ncee * ndee {
        let (kc, kd) = (k / ndee, k % ndee);
        f1_images.push(Nil2Element::gen(
            &t_dc.result.c1.basis,
            t_dc.omega_gen(kd * ncee + kc),
        ));
    }
    for k in 0..ncee * ndee {
        let (kc, kd) = (k / ndee, k % ndee);
        f1_images.push(Nil2Element::gen(
            &t_dc.result.c1.basis,
            t_dc.pee_gen(kd * ncee + kc),
        ));
    }
    let f1 = Nil2Hom::new(
        t_cd.result.c1.basis.clone(),
        t_dc.result.c1.basis.clone(),
        f1_images,
    );
    QpmMorphism { f0: f0sg.fe, f1, fee: f0sg.fee }
}

/// Tensor of two qpm morphisms m1 : C -> D and m2 : X -> Y.
pub fn tensor_morphism(
    m1: &QpmMorphism,
    m2: &QpmMorphism,
    t_cx: &QpmTensor,
    t_dy: &QpmTensor,
) -> QpmMorphism {
    let c = &t_cx.c;
    let x = &t_cx.d;
    // 0-level
    let mut f0_images = Vec::new();
    for i in 0..c.c0.ngens() {
        for j in 0..x.c0.ngens() {
            f0_images.push(
                t_dy.sg00
                    .expand(&m1.f0.images[i], &m2.f0.images[j]),
            );
        }
    }
    for k in 0..c.cee.ngens {
        for l in 0..x.cee.ngens {
            f0_images.push(
                t_dy.sg00.bar_otimes_el(&m1.fee.column(k), &m2.fee.column(l)),
            );
        }
    }
    let f0 = Nil2Hom::new(t_cx.sg00.basis().clone(), t_dy.sg00.basis().clone(), f0_images);
    let fee = kron(&m1.fee, &m2.fee);
    // 1-level
    let mut f1_images = Vec::new();
    for zi in 0..c.c1.ngens() {
        for j in 0..x.c0.ngens() {
            let img = t_dy.sg10.expand(&m1.f1.images[zi], &m2.f0.images[j]);
            f1_images.push(t_dy.upsilon_zeta(&img));
        }
    }
    for i in 0..c.c0.ngens() {
        for wj in 0..x.c1.ngens() {
            let img = t_dy.sg01.expand(&m1.f0.images[i], &m2.f1.images[wj]);
            f1_images.push(t_dy.upsilon_xi(&img));
        }
    }
    let nee = c.cee.ngens * x.cee.ngens;
    for k in 0..nee {
        let mut unit = vec![BigInt::zero(); nee];
        unit[k] = BigInt::one();
        f1_images.push(t_dy.result.p_eval(&fee.mul_vec(&unit)));
    }
    for k in 0..nee {
        let mut unit = vec![BigInt::zero(); nee];
        unit[k] = BigInt::one();
        f1_images.push(t_dy.result.p_eval(&fee.mul_vec(&unit)));
    }
    let f1 = Nil2Hom::new(
        t_cx.result.c1.basis.clone(),
        t_dy.result.c1.basis.clone(),
        f1_images,
    );
    QpmMorphism { f0, f1, fee }
}

/// Tensor of tracks α : f ⇒ g (C -> D) and β : h ⇒ k (X -> Y), giving
/// α⊙β : f⊙h ⇒ g⊙k.
pub fn track_tensor(
    alpha: &QpmTrack,
    beta: &QpmTrack,
    t_cx: &QpmTensor,
    t_dy: &QpmTensor,
) -> Result<QpmTrack, QpError> {
    let c = &t_cx.c;
    let x = &t_cx.d;
    let d = &t_dy.c;
    let y = &t_dy.d;
    let fh = tensor_morphism(&alpha.f, &beta.f, t_cx, t_dy);
    let gk = tensor_morphism(&alpha.g, &beta.g, t_cx, t_dy);
    let mut values = Vec::new();
    for i in 0..c.c0.ngens() {
        for j in 0..x.c0.ngens() {
            let fc = alpha.f.f0.images[i].clone();
            let gc = alpha.g.f0.images[i].clone();
            let k0x = beta.g.f0.images[j].clone();
            let bx = beta.alpha[j].clone();
            let ac = alpha.alpha[i].clone();
            // (α⊙β)(c⊙̲x) = υξ(f₀(c)⊙̲β(x)) + υζ(α(c)⊙̲k₀(x))
            //             + (-f₀(c)+g₀(c)|f₀(c))_H ⊗̄ H(k₀(x))
            let term1 = t_dy.upsilon_xi(&t_dy.sg01.expand(&fc, &bx));
            let term2 = t_dy.upsilon_zeta(&t_dy.sg10.expand(&ac, &k0x));
            let u = d.h0.cross_el(&fc.inv().mul(&gc), &fc);
            let v = y.h0.eval(&k0x);
            let term3 = t_dy.result.p_eval(&tensor_pairing(&u, &v));
            values.push(term1.mul(&term2).mul(&term3));
        }
    }
    for k in 0..c.cee.ngens {
        for l in 0..x.cee.ngens {
            // (α⊙β)(a⊗̄b) = -f_ee(a)⊗̄h_ee(b) + g_ee(a)⊗̄k_ee(b)
            let mut u = tensor_pairing(&alpha.g.fee.column(k), &beta.g.fee.column(l));
            let sub = tensor_pairing(&alpha.f.fee.column(k), &beta.f.fee.column(l));
            for (t, s) in sub.into_iter().enumerate() {
                u[t] -= s;
            }
            values.push(t_dy.result.p_eval(&u));
        }
    }
    let track = QpmTrack { f: fh, g: gk, alpha: values };
    track.check(&t_cx.result, &t_dy.result)?;
    Ok(track)
}

/// The two displayed expansions of (α⊙β)(c⊙̲x) agree (equality (a) in the
/// track-functor proof); checked on all generator pairs.
pub fn track_tensor_expansion_agrees(
    alpha: &QpmTrack,
    beta: &QpmTrack,
    t_cx: &QpmTensor,
    t_dy: &QpmTensor,
) -> bool {
    let c = &t_cx.c;
    let x = &t_cx.d;
    let d = &t_dy.c;
    let y = &t_dy.d;
    for i in 0..c.c0.ngens() {
        for j in 0..x.c0.ngens() {
            let fc = alpha.f.f0.images[i].clone();
            let gc = alpha.g.f0.images[i].clone();
            let h0x = beta.f.f0.images[j].clone();
            let k0x = beta.g.f0.images[j].clone();
            let bx = beta.alpha[j].clone();
            let ac = alpha.alpha[i].clone();
            let route1 = t_dy
                .upsilon_xi(&t_dy.sg01.expand(&fc, &bx))
                .mul(&t_dy.upsilon_zeta(&t_dy.sg10.expand(&ac, &k0x)))
                .mul(&t_dy.result.p_eval(&tensor_pairing(
                    &d.h0.cross_el(&fc.inv().mul(&gc), &fc),
                    &y.h0.eval(&k0x),
                )));
            let route2 = t_dy
                .upsilon_zeta(&t_dy.sg10.expand(&ac, &h0x))
                .mul(&t_dy.upsilon_xi(&t_dy.sg01.expand(&gc, &bx)))
                .mul(&t_dy.result.p_eval(&tensor_pairing(
                    &d.h0.cross_el(&fc.inv().mul(&gc), &fc),
                    &y.h0.eval(&h0x),
                )));
            if !t_dy.result.c1.equal(&route1, &route2) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// The cylinder correspondence
// ---------------------------------------------------------------------------

/// The mixed ee-maps Ψ_{(p,q)} : C_ee -> D_ee sending (x|y)_H to
/// (φ_q(x) | φ_p(y))_H, where φ₀ = f₀ and φ₁ = g₀; requires C 0-good.
struct MixedEe<'a> {
    c: &'a QuadraticPairModule,
    d: &'a QuadraticPairModule,
    f0: &'a Nil2Hom,
    g0: &'a Nil2Hom,
    decomp: Vec<Vec<BigInt>>,
}

impl<'a> MixedEe<'a> {
    fn new(
        c: &'a QuadraticPairModule,
        d: &'a QuadraticPairModule,
        f0: &'a Nil2Hom,
        g0: &'a Nil2Hom,
    ) -> Result<Self, QpError> {
        let sg0 = c.sg0();
        let mut decomp = Vec::with_capacity(c.cee.ngens);
        for k in 0..c.cee.ngens {
            let mut unit = vec![BigInt::zero(); c.cee.ngens];
            unit[k] = BigInt::one();
            decomp.push(sg0.goodness_decompose(&unit)?);
        }
        Ok(MixedEe { c, d, f0, g0, decomp })
    }

    fn phi(&self, idx: usize) -> &Nil2Hom {
        if idx == 0 {
            self.f0
        } else {
            self.g0
        }
    }

    /// Ψ_{(p,q)}(u) with u given in C_ee coordinates.
    fn apply(&self, p: usize, q: usize, u: &[BigInt]) -> Vec<BigInt> {
        let n = self.c.c0.ngens();
        let mut out = vec![BigInt::zero(); self.d.cee.ngens];
        for (k, uk) in u.iter().enumerate() {
            if uk.is_zero() {
                continue;
            }
            let w = &self.decomp[k];
            for i in 0..n {
                for j in 0..n {
                    let wij = &w[i * n + j];
                    if wij.is_zero() {
                        continue;
                    }
                    let cr = self
                        .d
                        .h0
                        .cross_el(&self.phi(q).images[i], &self.phi(p).images[j]);
                    for t in 0..out.len() {
                        out[t] += &cr[t] * wij * uk;
                    }
                }
            }
        }
        out
    }
}

/// The endpoint inclusion î_a : C -> 𝕀⊙C (a = 0 or 1), through the unit iso.
pub fn interval_endpoint(t_ic: &QpmTensor, a: usize) -> QpmMorphism {
    let c = &t_ic.d;
    let iv_c0 = t_ic.c.c0.ngens(); // = 2
    assert_eq!(iv_c0, 2);
    let mut f0_images = Vec::new();
    for j in 0..c.c0.ngens() {
        f0_images.push(Nil2Element::gen(
            t_ic.sg00.basis(),
            t_ic.sg00.odot_idx(a, j),
        ));
    }
    let f0 = Nil2Hom::new(c.c0.basis.clone(), t_ic.sg00.basis().clone(), f0_images);
    let mut f1_images = Vec::new();
    for z in 0..c.c1.ngens() {
        f1_images.push(Nil2Element::gen(&t_ic.result.c1.basis, t_ic.xi_gen(a, z)));
    }
    let f1 = Nil2Hom::new(c.c1.basis.clone(), t_ic.result.c1.basis.clone(), f1_images);
    let mut fee = IntMatrix::zero(4 * c.cee.ngens, c.cee.ngens);
    for l in 0..c.cee.ngens {
        fee[((a * 2 + a) * c.cee.ngens + l, l)] = BigInt::one();
    }
    QpmMorphism { f0, f1, fee }
}

/// Cylinder: turn a track α : f ⇒ g (C -> D, C 0-good) into the morphism
/// ᾱ : 𝕀⊙C -> D with ᾱ î₀ = f and ᾱ î₁ = g.
pub fn cylinder(
    alpha: &QpmTrack,
    t_ic: &QpmTensor,
    d: &QuadraticPairModule,
) -> Result<QpmMorphism, QpError> {
    let c = &t_ic.d;
    let mixed = MixedEe::new(c, d, &alpha.f.f0, &alpha.g.f0)?;
    let ncee = c.cee.ngens;
    let csg0 = c.sg0();
    let iv = &t_ic.c;

    // fee: (i_p ⊗ i_q) ⊗ u ↦ Ψ_{(p,q)}(u)
    let mut fee = IntMatrix::zero(d.cee.ngens, 4 * ncee);
    for pq in 0..4 {
        let (p, q) = (pq / 2, pq % 2);
        for l in 0..ncee {
            let mut unit = vec![BigInt::zero(); ncee];
            unit[l] = BigInt::one();
            let col = mixed.apply(p, q, &unit);
            for t in 0..d.cee.ngens {
                fee[(t, pq * ncee + l)] = col[t].clone();
            }
        }
    }

    // 0-level: i_a ⊙̲ x ↦ φ_a(x); ω ↦ ∂P(Ψ(u))
    let mut f0_images = Vec::new();
    for a in 0..2 {
        for j in 0..c.c0.ngens() {
            f0_images.push(mixed.phi(a).images[j].clone());
        }
    }
    for k in 0..4 * ncee {
        let mut unit = vec![BigInt::zero(); 4 * ncee];
        unit[k] = BigInt::one();
        f0_images.push(d.boundary.apply(&d.p_eval(&fee.mul_vec(&unit))));
    }
    let f0 = Nil2Hom::new(t_ic.sg00.basis().clone(), d.c0.basis.clone(), f0_images);

    // 1-level on the Φ generators
    let mut f1_images = Vec::new();
    // ζ-gens: z ⊙̲ x for z ∈ {ī, p00, p01}
    for zi in 0..iv.c1.ngens() {
        for j in 0..c.c0.ngens() {
            let xj = c.c0.gen(j);
            let img = match zi {
                0 => {
                    // ī⊙̲x = ī⊙x + H(∂ī)⊗̄TH(x); ᾱ(ī⊙x) = α(x)
                    let hdi = iv.h0.eval(&iv.boundary.images[0]);
                    let thx = csg0.t_apply(&c.h0.eval(&xj));
                    // φ_ee(hdi ⊗ thx): hdi lives on the 4 interval ee-gens
                    let mut corr = vec![BigInt::zero(); d.cee.ngens];
                    for (pq, hv) in hdi.iter().enumerate() {
                        if hv.is_zero() {
                            continue;
                        }
                        let (p, q) = (pq / 2, pq % 2);
                        let part = mixed.apply(p, q, &thx);
                        for t in 0..corr.len() {
                            corr[t] += &part[t] * hv;
                        }
                    }
                    alpha.alpha[j].mul(&d.p_eval(&corr))
                }
                1 => {
                    // p00 ⊙̲ x = (i0⊗i0) ⊗̄ Δ(x) ↦ P(Ψ00 Δ(x))
                    d.p_eval(&mixed.apply(0, 0, &csg0.delta(&xj)))
                }
                2 => {
                    // p01 ⊙̲ x ↦ P(Ψ01 Δ(x))
                    d.p_eval(&mixed.apply(0, 1, &csg0.delta(&xj)))
                }
                _ => unreachable!(),
            };
            f1_images.push(img);
        }
    }
    // ξ-gens: i_a ⊙̲ z ↦ f₁(z) / g₁(z)
    for a in 0..2 {
        for z in 0..c.c1.ngens() {
            let m = if a == 0 { &alpha.f } else { &alpha.g };
            f1_images.push(m.f1.images[z].clone());
        }
    }
    // ω-gens and P-part gens ↦ P(Ψ(u))
    for _round in 0..2 {
        for k in 0..4 * ncee {
            let mut unit = vec![BigInt::zero(); 4 * ncee];
            unit[k] = BigInt::one();
            f1_images.push(d.p_eval(&fee.mul_vec(&unit)));
        }
    }
    let f1 = Nil2Hom::new(t_ic.result.c1.basis.clone(), d.c1.basis.clone(), f1_images);
    let m = QpmMorphism { f0, f1, fee };
    m.check(&t_ic.result, d)?;
    Ok(m)
}

/// Inverse of the cylinder correspondence: recover the track from
/// ᾱ : 𝕀⊙C -> D via α(c) = ᾱ(υζ(ī ⊙ c)).
pub fn track_of_cylinder(
    bar: &QpmMorphism,
    t_ic: &QpmTensor,
    d: &QuadraticPairModule,
) -> Result<QpmTrack, QpError> {
    let c = &t_ic.d;
    let i0 = interval_endpoint(t_ic, 0);
    let i1 = interval_endpoint(t_ic, 1);
    let f = bar.compose(&i0);
    let g = bar.compose(&i1);
    let mut alpha = Vec::new();
    for j in 0..c.c0.ngens() {
        let odot = t_ic.sg10.expand_circ(&t_ic.c.c1.gen(0), &c.c0.gen(j));
        alpha.push(bar.f1.apply(&t_ic.upsilon_zeta(&odot)));
    }
    let track = QpmTrack { f, g, alpha };
    track.check(c, d)?;
    Ok(track)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{big, AbGroupPresentation};
    use crate::nil2::{PointedSet, PresentedNil2};
    use crate::qpm::{interval, phi, zbar_nil, PairInput, QpmTensor};
    use crate::tracks::track_from_alpha;

    fn phi0_znil_e(names: Vec<&str>) -> QuadraticPairModule {
        let z = crate::sqgroup::make_znil(&PointedSet::new(names));
        let empty = PresentedNil2::free(PointedSet::new(Vec::<String>::new()));
        let d_ee = AbGroupPresentation::trivial();
        let fe = Nil2Hom::new(empty.basis.clone(), z.e.basis.clone(), vec![]);
        let fee = IntMatrix::zero(z.ee.ngens, 0);
        let input = PairInput { d_e: &empty, d_ee: &d_ee, d_p: &[], f_e: &fe, f_ee: &fee };
        phi(&input, &z).0
    }

    fn check_unit_laws(c: &QuadraticPairModule) {
        let zb = zbar_nil();
        let t = QpmTensor::new(&zb, c).unwrap();
        t.result.check_axioms().unwrap();
        let iso = unit_iso_left(&t).unwrap();
        iso.check(&t.result, c).unwrap();
        let inv = unit_iso_left_inv(&t);
        inv.check(c, &t.result).unwrap();
        let round = iso.compose(&inv);
        assert!(round.eq_on_gens(&QpmMorphism::identity(c), c, c));
        let round = inv.compose(&iso);
        assert!(round.eq_on_gens(&QpmMorphism::identity(&t.result), &t.result, &t.result));

        let t2 = QpmTensor::new(c, &zb).unwrap();
        let iso = unit_iso_right(&t2).unwrap();
        iso.check(&t2.result, c).unwrap();
        let inv = unit_iso_right_inv(&t2);
        inv.check(c, &t2.result).unwrap();
        let round = iso.compose(&inv);
        assert!(round.eq_on_gens(&QpmMorphism::identity(c), c, c));
        let round = inv.compose(&iso);
        assert!(round.eq_on_gens(&QpmMorphism::identity(&t2.result), &t2.result, &t2.result));
    }

    #[test]
    fn unit_laws_zbar_and_phi0() {
        check_unit_laws(&zbar_nil());
        check_unit_laws(&phi0_znil_e(vec!["x"]));
    }

    #[test]
    fn symmetry_squares_to_identity() {
        let zb = zbar_nil();
        let c = phi0_znil_e(vec!["x"]);
        let t_cd = QpmTensor::new(&zb, &c).unwrap();
        let t_dc = QpmTensor::new(&c, &zb).unwrap();
        let tau = symmetry(&t_cd, &t_dc);
        tau.check(&t_cd.result, &t_dc.result).unwrap();
        let tau_back = symmetry(&t_dc, &t_cd);
        tau_back.check(&t_dc.result, &t_cd.result).unwrap();
        let round = tau_back.compose(&tau);
        assert!(round.eq_on_gens(
            &QpmMorphism::identity(&t_cd.result),
            &t_cd.result,
            &t_cd.result
        ));
    }

    #[test]
    fn track_basics_and_interchange() {
        // C = Z̄_nil: a nontrivial self-track of the identity (∂ = 0)
        let c = zbar_nil();
        let id = QpmMorphism::identity(&c);
        let alpha = track_from_alpha(&id, vec![c.c1.gen(0)], &c, &c).unwrap();
        assert!(alpha.g.eq_on_gens(&id, &c, &c)); // ∂α = 0
        let triv = QpmTrack::trivial(&id, &c, &c);
        // α □ 0 = α and 0 □ α = α
        let v = alpha.vcomp(&triv, &c, &c).unwrap();
        assert!(c.c1.equal(&v.alpha[0], &alpha.alpha[0]));
        let v = triv.vcomp(&alpha, &c, &c).unwrap();
        assert!(c.c1.equal(&v.alpha[0], &alpha.alpha[0]));
        // α □ α⁻¹ = 0
        let v = alpha.vinverse().vcomp(&alpha, &c, &c).unwrap();
        assert!(c.c1.is_identity(&v.alpha[0]));
        // associativity of vcomp on (α, α, α)
        let a2 = alpha.vcomp(&alpha, &c, &c).unwrap();
        let left = alpha.vcomp(&a2, &c, &c).unwrap();
        let right = a2.vcomp(&alpha, &c, &c).unwrap();
        assert!(c.c1.equal(&left.alpha[0], &right.alpha[0]));
        // interchange with β = α along D = E = C
        let a = &alpha;
        let b = &alpha;
        let r1 = {
            let first = a.hcomp_left(&id);
            let second = b.hcomp_right(&a.g, &c);
            second.vcomp(&first, &c, &c).unwrap()
        };
        let r2 = {
            let first = b.hcomp_right(&a.f, &c);
            let second = a.hcomp_left(&b.g);
            second.vcomp(&first, &c, &c).unwrap()
        };
        assert!(c.c1.equal(&r1.alpha[0], &r2.alpha[0]));
    }

    #[test]
    fn cylinder_roundtrip_zbar() {
        let c = zbar_nil();
        let iv = interval();
        let t_ic = QpmTensor::new(&iv, &c).unwrap();
        let id = QpmMorphism::identity(&c);
        let alpha = track_from_alpha(&id, vec![c.c1.gen(0)], &c, &c).unwrap();
        let bar = cylinder(&alpha, &t_ic, &c).unwrap();
        // endpoints
        let i0 = interval_endpoint(&t_ic, 0);
        i0.check(&c, &t_ic.result).unwrap();
        let f = bar.compose(&i0);
        assert!(f.eq_on_gens(&alpha.f, &c, &c));
        let i1 = interval_endpoint(&t_ic, 1);
        let g = bar.compose(&i1);
        assert!(g.eq_on_gens(&alpha.g, &c, &c));
        // roundtrip track -> cylinder -> track
        let back = track_of_cylinder(&bar, &t_ic, &c).unwrap();
        assert!(c.c1.equal(&back.alpha[0], &alpha.alpha[0]));
        // trivial track roundtrip
        let triv = QpmTrack::trivial(&id, &c, &c);
        let bar0 = cylinder(&triv, &t_ic, &c).unwrap();
        let back0 = track_of_cylinder(&bar0, &t_ic, &c).unwrap();
        assert!(c.c1.is_identity(&back0.alpha[0]));
    }

    #[test]
    fn track_tensor_and_tau_commutation() {
        let c = zbar_nil();
        let id = QpmMorphism::identity(&c);
        let alpha = track_from_alpha(&id, vec![c.c1.gen(0)], &c, &c).unwrap();
        let beta = QpmTrack::trivial(&id, &c, &c);
        let t_cc = QpmTensor::new(&c, &c).unwrap();
        let ab = track_tensor(&alpha, &beta, &t_cc, &t_cc).unwrap();
        assert!(track_tensor_expansion_agrees(&alpha, &beta, &t_cc, &t_cc));
        // trivial ⊙ trivial = trivial
        let tt = track_tensor(&beta, &beta, &t_cc, &t_cc).unwrap();
        for v in &tt.alpha {
            assert!(t_cc.result.c1.is_identity(v));
        }
        // τ(α⊙β) = (β⊙α)τ
        let tau = symmetry(&t_cc, &t_cc);
        let lhs = ab.hcomp_left(&tau);
        let ba = track_tensor(&beta, &alpha, &t_cc, &t_cc).unwrap();
        let rhs = ba.hcomp_right(&tau, &t_cc.result);
        for (l, r) in lhs.alpha.iter().zip(&rhs.alpha) {
            assert!(t_cc.result.c1.equal(l, r));
        }
        let _ = big(0);
    }
}
