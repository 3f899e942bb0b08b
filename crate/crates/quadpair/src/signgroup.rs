//! Finite sign groups {±1} ↪ G⋉ ↠ G with a sign character, their twisted
//! products, the crossed-module action, the group-ring quadratic pair
//! algebra A(G⋉), and sign actions on quadratic pair modules.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abelian::{AbGroupPresentation, IntMatrix};
use crate::error::QpError;
use crate::nil2::{Nil2Element, Nil2Hom, PointedSet, PresentedNil2};
use crate::qpm::{QpmMorphism, QuadraticPairModule};
use crate::sqgroup::QuadraticMap;

/// Finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub inv: Vec<usize>,
    pub names: Vec<String>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn from_table(table: Vec<Vec<usize>>, names: Vec<String>) -> Result<Self, QpError> {
        let n = table.len();
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(QpError::IllFormed("ragged or out-of-range table".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| QpError::IllFormed("no identity element".into()))?;
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| QpError::IllFormed("missing inverse".into()))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(QpError::IllFormed("table not associative".into()));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, inv, names })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let names = (0..n).map(|k| format!("c{k}")).collect();
        FiniteGroup::from_table(table, names).unwrap()
    }

    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let na = a.order();
        let nb = b.order();
        let mut table = vec![vec![0; na * nb]; na * nb];
        let mut names = Vec::with_capacity(na * nb);
        for x in 0..na {
            for y in 0..nb {
                names.push(format!("{}.{}", a.names[x], b.names[y]));
            }
        }
        for x1 in 0..na {
            for y1 in 0..nb {
                for x2 in 0..na {
                    for y2 in 0..nb {
                        table[x1 * nb + y1][x2 * nb + y2] =
                            a.mul(x1, x2) * nb + b.mul(y1, y2);
                    }
                }
            }
        }
        FiniteGroup::from_table(table, names).unwrap()
    }
}

/// A sign group: an extension {±1} ↪ G⋉ ↠ G with sign character ε on G.
#[derive(Clone, Debug)]
pub struct SignGroup {
    pub gv: FiniteGroup,
    pub g: FiniteGroup,
    /// index of ω = ι(-1) in G⋉
    pub omega: usize,
    /// ∂ : G⋉ ↠ G
    pub partial: Vec<usize>,
    /// ε : G -> {±1}
    pub eps: Vec<i32>,
}

impl SignGroup {
    /// ε∂ on G⋉.
    pub fn eps_v(&self, t: usize) -> i32 {
        self.eps[self.partial[t]]
    }

    pub fn validate(&self) -> Result<(), QpError> {
        let gv = &self.gv;
        let g = &self.g;
        if self.partial.len() != gv.order() || self.eps.len() != g.order() {
            return Err(QpError::IllFormed("sign group data sizes".into()));
        }
        // ω central of order 2, ω ≠ 1
        if self.omega == gv.identity || gv.mul(self.omega, self.omega) != gv.identity {
            return Err(QpError::IllFormed("ω must have order exactly 2".into()));
        }
        for a in 0..gv.order() {
            if gv.mul(self.omega, a) != gv.mul(a, self.omega) {
                return Err(QpError::IllFormed("ω not central".into()));
            }
        }
        // ∂ is a surjective homomorphism with kernel {1, ω}
        for a in 0..gv.order() {
            for b in 0..gv.order() {
                if self.partial[gv.mul(a, b)] != g.mul(self.partial[a], self.partial[b]) {
                    return Err(QpError::IllFormed("∂ not a homomorphism".into()));
                }
            }
        }
        for h in 0..g.order() {
            if !self.partial.contains(&h) {
                return Err(QpError::IllFormed("∂ not surjective".into()));
            }
        }
        let kernel: Vec<usize> =
            (0..gv.order()).filter(|&a| self.partial[a] == g.identity).collect();
        if kernel.len() != 2 || !kernel.contains(&self.omega) {
            return Err(QpError::IllFormed("kernel of ∂ must be {1, ω}".into()));
        }
        // ε is a homomorphism
        for a in 0..g.order() {
            for b in 0..g.order() {
                if self.eps[g.mul(a, b)] != self.eps[a] * self.eps[b] {
                    return Err(QpError::IllFormed("ε not a homomorphism".into()));
                }
            }
        }
        Ok(())
    }

    /// A lift of h ∈ G into G⋉ (the smallest-index preimage).
    pub fn lift(&self, h: usize) -> usize {
        (0..self.gv.order()).find(|&t| self.partial[t] == h).unwrap()
    }

    /// The trivial sign group 1⋉ = ({±1} over the trivial group).
    pub fn trivial() -> SignGroup {
        let gv = FiniteGroup::cyclic(2);
        let g = FiniteGroup::cyclic(1);
        SignGroup { gv, g, omega: 1, partial: vec![0, 0], eps: vec![1] }
    }

    /// Z/4 over Z/2 (the nonsplit extension), with a choice of ε on Z/2.
    pub fn cyclic4(eps_nontrivial: bool) -> SignGroup {
        let gv = FiniteGroup::cyclic(4);
        let g = FiniteGroup::cyclic(2);
        SignGroup {
            gv,
            g,
            omega: 2,
            partial: vec![0, 1, 0, 1],
            eps: vec![1, if eps_nontrivial { -1 } else { 1 }],
        }
    }

    /// The split extension {±1} × G with a sign character on G.
    pub fn split(g: FiniteGroup, eps: Vec<i32>) -> Result<SignGroup, QpError> {
        let two = FiniteGroup::cyclic(2);
        let gv = FiniteGroup::product(&two, &g);
        let n = g.order();
        let partial = (0..2 * n).map(|i| i % n).collect();
        let sg = SignGroup { gv, g, omega: n, partial, eps };
        sg.validate()?;
        Ok(sg)
    }

    /// The symmetric track group inside the pin group, as a sign group.
    pub fn sym_track(n: usize) -> Result<SignGroup, QpError> {
        let st = crate::clifford::sym_track_group(n)?;
        // the base group: permutations, as a table group
        let mut perms: Vec<Vec<usize>> = st.perms.clone();
        perms.sort();
        perms.dedup();
        let pidx = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let compose = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> {
            // q is multiplicative on matrices, and matrix composition acts
            // as (ab)(i) = a(b(i))
            (0..a.len()).map(|i| a[b[i]]).collect()
        };
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| perms.iter().map(|b| pidx(&compose(a, b))).collect())
            .collect();
        let names = perms.iter().map(|p| format!("{p:?}")).collect();
        let g = FiniteGroup::from_table(table, names)?;
        let partial: Vec<usize> = st.perms.iter().map(|p| pidx(p)).collect();
        let eps: Vec<i32> = perms.iter().map(|p| crate::clifford::perm_sign(p)).collect();
        let names_v = (0..st.elements.len()).map(|i| format!("u{i}")).collect();
        let gv = FiniteGroup::from_table(st.table.clone(), names_v)?;
        let sg = SignGroup { gv, g, omega: st.omega, partial, eps };
        sg.validate()?;
        Ok(sg)
    }
}

// ---------------------------------------------------------------------------
// Twisted product
// ---------------------------------------------------------------------------

/// The twisted product G⋉ ×̃ L⋉: pairs (t, s) modulo (tω, sω'), with
/// (t,s)(t',s') = (t t' ω^{binom(ε(s),2) binom(ε(t'),2)}, s s').
pub struct TwistedProduct {
    pub sign: SignGroup,
    /// canonical pair representative per element
    pub reps: Vec<(usize, usize)>,
    pub left: SignGroup,
    pub right: SignGroup,
}

fn binom2(eps: i32) -> u32 {
    // binom(ε, 2) with ε ∈ {±1}: 0 for +1, 1 for -1
    if eps == -1 {
        1
    } else {
        0
    }
}

pub fn twisted_product(gs: &SignGroup, ls: &SignGroup) -> Result<TwistedProduct, QpError> {
    gs.validate()?;
    ls.validate()?;
    let ng = gs.gv.order();
    let nl = ls.gv.order();
    // canonical class representative: the lexicographically smaller of
    // (t, s) and (t ω, s ω')
    let canon = |t: usize, s: usize| -> (usize, usize) {
        let other = (gs.gv.mul(t, gs.omega), ls.gv.mul(s, ls.omega));
        (t, s).min(other)
    };
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for t in 0..ng {
        for s in 0..nl {
            let c = canon(t, s);
            if !reps.contains(&c) {
                reps.push(c);
            }
        }
    }
    reps.sort();
    let idx_of = |t: usize, s: usize| -> usize {
        let c = canon(t, s);
        reps.iter().position(|r| *r == c).unwrap()
    };
    let n = reps.len();
    let mut table = vec![vec![0; n]; n];
    for (i, &(t, s)) in reps.iter().enumerate() {
        for (j, &(t2, s2)) in reps.iter().enumerate() {
            let twist = binom2(ls.eps_v(s)) * binom2(gs.eps_v(t2));
            let mut tt = gs.gv.mul(t, t2);
            if twist % 2 == 1 {
                tt = gs.gv.mul(tt, gs.omega);
            }
            table[i][j] = idx_of(tt, ls.gv.mul(s, s2));
        }
    }
    let names = reps
        .iter()
        .map(|&(t, s)| format!("{}*{}", gs.gv.names[t], ls.gv.names[s]))
        .collect();
    let gv = FiniteGroup::from_table(table, names)?;
    let g = FiniteGroup::product(&gs.g, &ls.g);
    let partial: Vec<usize> = reps
        .iter()
        .map(|&(t, s)| gs.partial[t] * ls.g.order() + ls.partial[s])
        .collect();
    let mut eps = Vec::with_capacity(gs.g.order() * ls.g.order());
    for a in 0..gs.g.order() {
        for b in 0..ls.g.order() {
            eps.push(gs.eps[a] * ls.eps[b]);
        }
    }
    let omega = idx_of(gs.omega, ls.gv.identity);
    let sign = SignGroup { gv, g, omega, partial, eps };
    sign.validate()?;

    // universal twisted-bilinear relations spot check: t̄ s̄ = s̄ t̄ ω^{..}
    for t in 0..ng {
        for s in 0..nl {
            let tbar = idx_of(t, ls.gv.identity);
            let sbar = idx_of(gs.gv.identity, s);
            let lhs = sign.gv.mul(tbar, sbar);
            let mut rhs = sign.gv.mul(sbar, tbar);
            if binom2(gs.eps_v(t)) * binom2(ls.eps_v(s)) % 2 == 1 {
                rhs = sign.gv.mul(rhs, sign.omega);
            }
            if lhs != rhs {
                return Err(QpError::AxiomFailure("twisted relation (4) fails".into()));
            }
        }
    }
    Ok(TwistedProduct { sign, reps, left: gs.clone(), right: ls.clone() })
}

/// The crossed-module action of {±1} × G on G⋉:
/// g^{(x,h)} = h̄⁻¹ g h̄ ι(ε(g)^{binom(x,2)}), independent of the lift h̄.
pub fn crossed_action(sg: &SignGroup) -> Result<(), QpError> {
    let gv = &sg.gv;
    let g = &sg.g;
    let act = |el: usize, x: i32, _h: usize, lift: usize| -> usize {
        let mut out = gv.mul(gv.mul(gv.inv[lift], el), lift);
        if x == -1 && sg.eps_v(el) == -1 {
            out = gv.mul(out, sg.omega);
        }
        out
    };
    // independence of the lift
    for el in 0..gv.order() {
        for h in 0..g.order() {
            let lifts: Vec<usize> =
                (0..gv.order()).filter(|&t| sg.partial[t] == h).collect();
            for x in [1, -1] {
                let vals: Vec<usize> =
                    lifts.iter().map(|&l| act(el, x, h, l)).collect();
                if vals.windows(2).any(|w| w[0] != w[1]) {
                    return Err(QpError::AxiomFailure("action depends on the lift".into()));
                }
            }
        }
    }
    // action axioms: g^{(1,1)} = g and (g^a)^b = g^{ab}
    for el in 0..gv.order() {
        if act(el, 1, g.identity, gv.identity) != el {
            return Err(QpError::AxiomFailure("unit law of the action".into()));
        }
        for x1 in [1, -1] {
            for h1 in 0..g.order() {
                for x2 in [1, -1] {
                    for h2 in 0..g.order() {
                        let step = act(act(el, x1, h1, sg.lift(h1)), x2, h2, sg.lift(h2));
                        let both = act(el, x1 * x2, g.mul(h1, h2), sg.lift(g.mul(h1, h2)));
                        if step != both {
                            return Err(QpError::AxiomFailure(
                                "action not multiplicative".into(),
                            ));
                        }
                    }
                }
            }
        }
    }
    // crossed module: ∂⋉(g^a) = ∂⋉(g)^a with ∂⋉ = (ε, ∂) and conjugation,
    // and g^{∂⋉(g')} = g'⁻¹ g g'
    for el in 0..gv.order() {
        for x in [1, -1] {
            for h in 0..g.order() {
                let lhs = act(el, x, h, sg.lift(h));
                // ∂⋉(lhs) must equal (ε(el), h⁻¹ ∂(el) h)
                if sg.partial[lhs] != g.mul(g.mul(g.inv[h], sg.partial[el]), h)
                    || sg.eps_v(lhs) != sg.eps_v(el)
                {
                    return Err(QpError::AxiomFailure("∂⋉ not equivariant".into()));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// The group ring A(G⋉)
// ---------------------------------------------------------------------------

/// The quadratic pair algebra A(G⋉): A_(0) = Z_nil[G₊] and a presented
/// 1-level on generators [t] (t ∈ G⋉) and P-symbols p_{g,h}.
pub struct GroupRing {
    pub sign: SignGroup,
    pub qpm: QuadraticPairModule,
    n_gv: usize,
    n_g: usize,
}

impl GroupRing {
    pub fn new(sign: &SignGroup) -> Result<GroupRing, QpError> {
        sign.validate()?;
        let n_g = sign.g.order();
        let n_gv = sign.gv.order();

        // 0-level: Z_nil[G₊]
        let basis0 =
            PointedSet::new(sign.g.names.iter().map(|n| format!("[{n}]")).collect::<Vec<_>>());
        let c0 = PresentedNil2::free(basis0.clone());
        let cee = AbGroupPresentation::free(n_g * n_g);
        let mut h0 = QuadraticMap::zero_map(n_g, n_g * n_g);
        for i in 0..n_g {
            for j in 0..n_g {
                h0.cross[i][j][j * n_g + i] = BigInt::one();
            }
        }

        // 1-level generators: [t] then p_{g,h}
        let mut names1: Vec<String> =
            sign.gv.names.iter().map(|n| format!("[{n}]")).collect();
        for g in 0..n_g {
            for h in 0..n_g {
                names1.push(format!("p{g}_{h}"));
            }
        }
        let basis1 = PointedSet::new(names1);
        let t_gen = |t: usize| Nil2Element::gen(&basis1, t);
        let p_gen = |g: usize, h: usize| Nil2Element::gen(&basis1, n_gv + g * n_g + h);

        // boundary: ∂[t] = -[∂t] + ε(t), ∂p_{g,h} = [[h],[g]]
        let mut bimages = Vec::new();
        for t in 0..n_gv {
            let dst = sign.partial[t];
            let mut img = Nil2Element::gen(&basis0, dst).inv();
            let unit = Nil2Element::gen(&basis0, sign.g.identity);
            if sign.eps_v(t) == 1 {
                img = img.mul(&unit);
            } else {
                img = img.mul(&unit.inv());
            }
            bimages.push(img);
        }
        for g in 0..n_g {
            for h in 0..n_g {
                bimages.push(
                    Nil2Element::gen(&basis0, h).commutator(&Nil2Element::gen(&basis0, g)),
                );
            }
        }
        let boundary = Nil2Hom::new(basis1.clone(), basis0.clone(), bimages.clone());

        // P on ee-generators
        let p: Vec<Nil2Element> =
            (0..n_g * n_g).map(|k| p_gen(k / n_g, k % n_g)).collect();

        let mut ring = GroupRing {
            sign: sign.clone(),
            qpm: QuadraticPairModule {
                c0,
                c1: PresentedNil2::free(basis1.clone()),
                cee,
                p,
                h0,
                boundary,
            },
            n_gv,
            n_g,
        };

        // relators
        let mut relators: Vec<Nil2Element> = Vec::new();
        // P(b⊗a) = -P(a⊗b) (from PHP = 2P in the 1-level square group)
        for g in 0..n_g {
            for h in g..n_g {
                relators.push(p_gen(g, h).mul(&p_gen(h, g)));
            }
        }
        // p-symbols are central
        let total = n_gv + n_g * n_g;
        for g in 0..n_g {
            for h in 0..n_g {
                let pg = p_gen(g, h);
                for t in 0..total {
                    if t != n_gv + g * n_g + h {
                        relators.push(pg.commutator(&Nil2Element::gen(&basis1, t)));
                    }
                }
            }
        }
        // commutator law [z, z'] = P((∂z|∂z')_H) on 1-level generator pairs
        for a in 0..n_gv {
            for b in 0..n_gv {
                let za = t_gen(a);
                let zb = t_gen(b);
                let cr = ring.qpm.h0.cross_el(
                    &ring.qpm.boundary.images[a],
                    &ring.qpm.boundary.images[b],
                );
                let rhs = ring.p_word(&cr);
                relators.push(za.commutator(&zb).mul(&rhs.inv()));
            }
        }
        // the unit of the monoid acts trivially at the 1-level: [1] = 0
        relators.push(t_gen(sign.gv.identity));
        // [ω] = P(1|1)_H
        relators.push(
            t_gen(sign.omega)
                .mul(&p_gen(sign.g.identity, sign.g.identity).inv()),
        );
        // [st] = [∂s]·[t] + ε(t)·[s] + binom(ε s,2)binom(ε t,2) P(1|1)
        for s in 0..n_gv {
            for t in 0..n_gv {
                let lhs = t_gen(sign.gv.mul(s, t));
                let m = ring.xi_gen_element(sign.partial[s], t, &basis1);
                let x = ring.eps_scalar_mul(sign.eps_v(t), &t_gen(s));
                let mut rhs = m.mul(&x);
                if binom2(sign.eps_v(s)) * binom2(sign.eps_v(t)) % 2 == 1 {
                    rhs = rhs.mul(&p_gen(sign.g.identity, sign.g.identity));
                }
                relators.push(lhs.mul(&rhs.inv()));
            }
        }
        ring.qpm.c1 = PresentedNil2::new(basis1, relators);
        Ok(ring)
    }

    fn basis1(&self) -> &std::sync::Arc<PointedSet> {
        &self.qpm.c1.basis
    }

    pub fn t_gen(&self, t: usize) -> Nil2Element {
        Nil2Element::gen(self.basis1(), t)
    }

    pub fn p_gen(&self, g: usize, h: usize) -> Nil2Element {
        Nil2Element::gen(self.basis1(), self.n_gv + g * self.n_g + h)
    }

    /// P_A of an ee-coordinate vector, as a product of p-symbols.
    fn p_word(&self, v: &[BigInt]) -> Nil2Element {
        let mut out = Nil2Element::zero(self.basis1());
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.mul(&self.p_gen(k / self.n_g, k % self.n_g).pow(c));
            }
        }
        out
    }

    /// μ_ee: (a⊗b)⊗(c⊗d) ↦ ac⊗bd, applied to a pair of ee vectors.
    fn mu_ee(&self, u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
        let n = self.n_g;
        let mut out = vec![BigInt::zero(); n * n];
        for (k, uk) in u.iter().enumerate() {
            if uk.is_zero() {
                continue;
            }
            let (a, b) = (k / n, k % n);
            for (l, vl) in v.iter().enumerate() {
                if vl.is_zero() {
                    continue;
                }
                let (c, d) = (l / n, l % n);
                out[self.sign.g.mul(a, c) * n + self.sign.g.mul(b, d)] += uk * vl;
            }
        }
        out
    }

    /// The element m(g, t) = [g]·[t], via the [st] relation at the chosen
    /// lift: m(g,t) = [ŝ(g)t] - B p₁₁ - ε(t)·[ŝ(g)].
    fn xi_gen_element(
        &self,
        g: usize,
        t: usize,
        basis1: &std::sync::Arc<PointedSet>,
    ) -> Nil2Element {
        let s = self.sign.lift(g);
        let st = self.sign.gv.mul(s, t);
        let mut out = Nil2Element::gen(basis1, st);
        if binom2(self.sign.eps_v(s)) * binom2(self.sign.eps_v(t)) % 2 == 1 {
            let p11 =
                Nil2Element::gen(basis1, self.n_gv + self.sign.g.identity * self.n_g + self.sign.g.identity);
            out = out.mul(&p11.inv());
        }
        let x = self.eps_scalar_mul_with(self.sign.eps_v(t), &Nil2Element::gen(basis1, s), basis1);
        out.mul(&x.inv())
    }

    pub fn xi_gen(&self, g: usize, t: usize) -> Nil2Element {
        self.xi_gen_element(g, t, &self.basis1().clone())
    }

    /// ε·z for ε ∈ {±1}: z itself, or (-1)·z = -z + P(H(∂z)).
    pub fn eps_scalar_mul(&self, eps: i32, z: &Nil2Element) -> Nil2Element {
        self.eps_scalar_mul_with(eps, z, &z.basis.clone())
    }

    fn eps_scalar_mul_with(
        &self,
        eps: i32,
        z: &Nil2Element,
        _basis1: &std::sync::Arc<PointedSet>,
    ) -> Nil2Element {
        if eps == 1 {
            return z.clone();
        }
        let hdz = self.qpm.h0.eval(&self.qpm.boundary.apply(z));
        z.inv().mul(&self.p_word(&hdz))
    }

    /// The ξ-product x·[t] of a 0-level element with a 1-level generator,
    /// by the left expansion law.
    pub fn xi_product(&self, x: &Nil2Element, t: usize) -> Nil2Element {
        let h1_t = self.h1_of_tgen(t);
        let mut acc = Nil2Element::zero(self.basis1());
        let mut work = x.clone();
        loop {
            let Some((i, n)) = work.linear_blocks().into_iter().next() else { break };
            let gi = Nil2Element::gen(&x.basis, i);
            let rest = gi.pow(&-&n).mul(&work);
            acc = acc.mul(&self.xi_gen(i, t).pow(&n));
            // [binom(n,2)(g_i|g_i)_H + n (rest|g_i)_H] ⊗̄ H₁([t])
            let binom: BigInt = (&n * (&n - BigInt::one())) / 2;
            let mut u: Vec<BigInt> = self.qpm.h0.cross[i][i].iter().map(|c| c * &binom).collect();
            let mut unit = vec![BigInt::zero(); x.basis.len()];
            unit[i] = n.clone();
            let c2 = self.qpm.h0.cross_bilinear(&rest.abelianization(), &unit);
            for s in 0..u.len() {
                u[s] += &c2[s];
            }
            acc = acc.mul(&self.p_word(&self.mu_ee(&u, &h1_t)));
            work = rest;
        }
        if !work.comm.is_empty() {
            // P(ξ) ⊙̲ z = ξ ⊗̄ Δ₁(z)
            let mut xi = vec![BigInt::zero(); self.n_g * self.n_g];
            for (&(j, i), c) in &work.comm {
                for (s, v) in self.qpm.h0.cross[j][i].iter().enumerate() {
                    xi[s] += v * c;
                }
            }
            let d1 = self.delta1_of_tgen(t);
            acc = acc.mul(&self.p_word(&self.mu_ee(&xi, &d1)));
        }
        acc
    }

    fn h1_of_tgen(&self, t: usize) -> Vec<BigInt> {
        self.qpm.h0.eval(&self.qpm.boundary.images[t])
    }

    fn delta1_of_tgen(&self, t: usize) -> Vec<BigInt> {
        // Δ of the 1-level square group at [t]
        let sg1 = self.qpm.sg1();
        sg1.delta(&self.t_gen(t))
    }

    /// The ζ-product z·[g] for a 1-level element, via
    /// ∂(t)*(z) = ε(t)*(z) - ⟨∂z, t⟩ at the chosen lift of g.
    pub fn zeta_product(&self, z: &Nil2Element, g: usize) -> Nil2Element {
        let t = self.sign.lift(g);
        let a = self.eps_scalar_mul(self.sign.eps_v(t), z);
        let br = self.bracket(&self.qpm.boundary.apply(z), t);
        a.mul(&br.inv())
    }

    /// ⟨x, t⟩ = x·[t] + binom(ε(t),2) P H(x) for a 0-level element x.
    pub fn bracket(&self, x: &Nil2Element, t: usize) -> Nil2Element {
        let mut out = self.xi_product(x, t);
        if binom2(self.sign.eps_v(t)) == 1 {
            out = out.mul(&self.p_word(&self.qpm.h0.eval(x)));
        }
        out
    }

    /// The 0-level product [g]·[h] = [gh] extended to elements.
    pub fn mu0(&self, x: &Nil2Element, g: usize) -> Nil2Element {
        // right translation by g on Z_nil[G₊]: a homomorphism on generators
        let images: Vec<Nil2Element> = (0..self.n_g)
            .map(|k| Nil2Element::gen(&self.qpm.c0.basis, self.sign.g.mul(k, g)))
            .collect();
        let hom = Nil2Hom::new(self.qpm.c0.basis.clone(), self.qpm.c0.basis.clone(), images);
        hom.apply(x)
    }

    /// The right-translation qpm morphism g* : A -> A of the regular module.
    pub fn translation(&self, g: usize) -> QpmMorphism {
        let f0_images: Vec<Nil2Element> = (0..self.n_g)
            .map(|k| Nil2Element::gen(&self.qpm.c0.basis, self.sign.g.mul(k, g)))
            .collect();
        let f0 = Nil2Hom::new(self.qpm.c0.basis.clone(), self.qpm.c0.basis.clone(), f0_images);
        let f1_images: Vec<Nil2Element> = (0..self.qpm.c1.ngens())
            .map(|z| self.zeta_product(&Nil2Element::gen(self.basis1(), z), g))
            .collect();
        let f1 = Nil2Hom::new(self.basis1().clone(), self.basis1().clone(), f1_images);
        let n = self.n_g;
        let mut fee = IntMatrix::zero(n * n, n * n);
        for a in 0..n {
            for b in 0..n {
                fee[(self.sign.g.mul(a, g) * n + self.sign.g.mul(b, g), a * n + b)] =
                    BigInt::one();
            }
        }
        QpmMorphism { f0, f1, fee }
    }

    /// The defining relations of A(G⋉) hold in the presented 1-level, the
    /// qpm axioms pass, and the monoid laws hold on generator triples.
    pub fn check(&self) -> Result<(), QpError> {
        self.qpm.check_axioms()?;
        if !self.qpm.is_0good() {
            return Err(QpError::Goodness("A(G⋉) must be 0-good".into()));
        }
        let sign = &self.sign;
        // ∂[t] = -[∂t] + ε(t)
        for t in 0..self.n_gv {
            let lhs = self.qpm.boundary.apply(&self.t_gen(t));
            let mut rhs = Nil2Element::gen(&self.qpm.c0.basis, sign.partial[t]).inv();
            let unit = Nil2Element::gen(&self.qpm.c0.basis, sign.g.identity);
            rhs = rhs.mul(&if sign.eps_v(t) == 1 { unit } else { unit.inv() });
            if !self.qpm.c0.equal(&lhs, &rhs) {
                return Err(QpError::AxiomFailure(format!("∂[t] relation fails at t={t}")));
            }
        }
        // [ω] = P(1|1)_H
        let lhs = self.t_gen(sign.omega);
        let rhs = self.p_gen(sign.g.identity, sign.g.identity);
        if !self.qpm.c1.equal(&lhs, &rhs) {
            return Err(QpError::AxiomFailure("[ω] != P(1|1)_H".into()));
        }
        // [1] = 0 at the 1-level
        if !self.qpm.c1.is_identity(&self.t_gen(sign.gv.identity)) {
            return Err(QpError::AxiomFailure("[1] != 0 at 1-level".into()));
        }
        // [st] relations in normal form
        for s in 0..self.n_gv {
            for t in 0..self.n_gv {
                let lhs = self.t_gen(sign.gv.mul(s, t));
                let m = self.xi_gen(sign.partial[s], t);
                let x = self.eps_scalar_mul(sign.eps_v(t), &self.t_gen(s));
                let mut rhs = m.mul(&x);
                if binom2(sign.eps_v(s)) * binom2(sign.eps_v(t)) % 2 == 1 {
                    rhs = rhs.mul(&self.p_gen(sign.g.identity, sign.g.identity));
                }
                if !self.qpm.c1.equal(&lhs, &rhs) {
                    return Err(QpError::AxiomFailure(format!(
                        "[st] relation fails at s={s}, t={t}"
                    )));
                }
            }
        }
        // monoid laws: 0-level associativity and units are immediate from
        // the group law; mixed associativity on generator triples:
        // ([g][h])·[t] = [g]·([h]·[t]) and ([t]·[g])·[h] = [t]·[gh]
        for g in 0..self.n_g {
            for h in 0..self.n_g {
                for t in 0..self.n_gv {
                    let lhs = self.xi_gen(sign.g.mul(g, h), t);
                    let inner = self.xi_gen(h, t);
                    let rhs = self.xi_product_of_element(g, &inner);
                    if !self.qpm.c1.equal(&lhs, &rhs) {
                        return Err(QpError::AxiomFailure(format!(
                            "mixed associativity (0,0,1) fails at ({g},{h},{t})"
                        )));
                    }
                }
            }
        }
        for t in 0..self.n_gv {
            for g in 0..self.n_g {
                for h in 0..self.n_g {
                    let lhs = self.zeta_product(
                        &self.zeta_product(&self.t_gen(t), g),
                        h,
                    );
                    let rhs = self.zeta_product(&self.t_gen(t), sign.g.mul(g, h));
                    if !self.qpm.c1.equal(&lhs, &rhs) {
                        return Err(QpError::AxiomFailure(format!(
                            "action associativity (1,0,0) fails at ({t},{g},{h})"
                        )));
                    }
                }
            }
        }
        // unit laws
        for t in 0..self.n_gv {
            let lhs = self.xi_gen(sign.g.identity, t);
            if !self.qpm.c1.equal(&lhs, &self.t_gen(t)) {
                return Err(QpError::AxiomFailure("unit law [1]·[t] = [t] fails".into()));
            }
            let lhs = self.zeta_product(&self.t_gen(t), sign.g.identity);
            if !self.qpm.c1.equal(&lhs, &self.t_gen(t)) {
                return Err(QpError::AxiomFailure("unit law [t]·[1] = [t] fails".into()));
            }
        }
        // translation morphisms are valid qpm morphisms
        for g in 0..self.n_g {
            self.translation(g).check(&self.qpm, &self.qpm)?;
        }
        Ok(())
    }

    /// [g]·z for an arbitrary 1-level element z (right-linear in z).
    pub fn xi_product_of_element(&self, g: usize, z: &Nil2Element) -> Nil2Element {
        let mut out = Nil2Element::zero(self.basis1());
        for (idx, w) in z.linear_blocks() {
            let img = if idx < self.n_gv {
                self.xi_gen(g, idx)
            } else {
                let k = idx - self.n_gv;
                let (a, b) = (k / self.n_g, k % self.n_g);
                self.p_gen(self.sign.g.mul(g, a), self.sign.g.mul(g, b))
            };
            out = out.mul(&img.pow(&w));
        }
        if !z.comm.is_empty() {
            // [g]·P(ξ) = ([g]|[g])_H ⊗̄ ξ ↦ P(μ_ee((g⊗g) ⊗ ξ))
            let sg1 = self.qpm.sg1();
            let mut xi = vec![BigInt::zero(); self.n_g * self.n_g];
            for (&(j, i), c) in &z.comm {
                for (s, v) in sg1.h.cross[j][i].iter().enumerate() {
                    xi[s] += v * c;
                }
            }
            let mut gg = vec![BigInt::zero(); self.n_g * self.n_g];
            gg[g * self.n_g + g] = BigInt::one();
            out = out.mul(&self.p_word(&self.mu_ee(&gg, &xi)));
        }
        out
    }
}


// ---------------------------------------------------------------------------
// Sign actions and the module correspondence
// ---------------------------------------------------------------------------

/// (-1)* : C -> C, the canonical involution x ↦ -x + ∂PH(x), z ↦ -z + PH∂(z).
pub fn minus_one_star(c: &QuadraticPairModule) -> QpmMorphism {
    let mut f0_images = Vec::new();
    for i in 0..c.c0.ngens() {
        let x = c.c0.gen(i);
        let ph = c.p_eval(&c.h0.eval(&x));
        f0_images.push(x.inv().mul(&c.boundary.apply(&ph)));
    }
    let f0 = Nil2Hom::new(c.c0.basis.clone(), c.c0.basis.clone(), f0_images);
    let mut f1_images = Vec::new();
    for z in 0..c.c1.ngens() {
        let zz = c.c1.gen(z);
        let ph = c.p_eval(&c.h0.eval(&c.boundary.apply(&zz)));
        f1_images.push(zz.inv().mul(&ph));
    }
    let f1 = Nil2Hom::new(c.c1.basis.clone(), c.c1.basis.clone(), f1_images);
    QpmMorphism { f0, f1, fee: IntMatrix::identity(c.cee.ngens) }
}

/// A sign action of G⋉ on a quadratic pair module C: morphisms g* per g ∈ G
/// and bracket values ⟨x_i, t⟩ ∈ C₁ per C₀-generator and t ∈ G⋉.
#[derive(Clone)]
pub struct SignAction {
    pub gstar: Vec<QpmMorphism>,
    /// bracket[t][i] = ⟨x_i, t⟩
    pub bracket: Vec<Vec<Nil2Element>>,
}

impl SignAction {
    /// ⟨x, t⟩ on an arbitrary element, by the derivation rule (1); this is
    /// exactly the track extension with f₀ = ∂(t)*₀.
    pub fn bracket_apply(
        &self,
        sign: &SignGroup,
        c: &QuadraticPairModule,
        x: &Nil2Element,
        t: usize,
    ) -> Nil2Element {
        let f0 = &self.gstar[sign.partial[t]].f0;
        crate::tracks::alpha_apply(&self.bracket[t], f0, c, x)
    }

    /// The sign-action axioms plus the right-action laws on g*.
    pub fn check(&self, sign: &SignGroup, c: &QuadraticPairModule) -> Result<(), QpError> {
        let ng = sign.g.order();
        let nv = sign.gv.order();
        if self.gstar.len() != ng || self.bracket.len() != nv {
            return Err(QpError::IllFormed("action data sizes".into()));
        }
        for g in 0..ng {
            self.gstar[g].check(c, c)?;
        }
        // right action: 1* = id, (gh)* = h* ∘ g*
        let id = QpmMorphism::identity(c);
        if !self.gstar[sign.g.identity].eq_on_gens(&id, c, c) {
            return Err(QpError::AxiomFailure("1* != id".into()));
        }
        for g in 0..ng {
            for h in 0..ng {
                let lhs = self.gstar[h].compose(&self.gstar[g]);
                if !lhs.eq_on_gens(&self.gstar[sign.g.mul(g, h)], c, c) {
                    return Err(QpError::AxiomFailure("g* not a right action".into()));
                }
            }
        }
        let mstar = minus_one_star(c);
        let eps_star = |e: i32| -> QpmMorphism {
            if e == 1 {
                QpmMorphism::identity(c)
            } else {
                mstar.clone()
            }
        };
        for t in 0..nv {
            let dstar = &self.gstar[sign.partial[t]];
            let estar = eps_star(sign.eps_v(t));
            // (1): the derivation rule on relators and generator pairs
            for r in &c.c0.relators {
                if !c.c1.is_identity(&self.bracket_apply(sign, c, r, t)) {
                    return Err(QpError::AxiomFailure("⟨relator, t⟩ != 0".into()));
                }
            }
            for i in 0..c.c0.ngens() {
                for j in 0..c.c0.ngens() {
                    let x = c.c0.gen(i);
                    let y = c.c0.gen(j);
                    let lhs = self.bracket_apply(sign, c, &y.mul(&x), t);
                    let rhs = c
                        .action(&self.bracket[t][j], &dstar.f0.apply(&x))
                        .mul(&self.bracket[t][i]);
                    if !c.c1.equal(&lhs, &rhs) {
                        return Err(QpError::AxiomFailure("bracket rule (1) fails".into()));
                    }
                }
            }
            // (2): ε(t)*(x) = ∂(t)*(x) + ∂⟨x,t⟩
            for i in 0..c.c0.ngens() {
                let lhs = estar.f0.images[i].clone();
                let rhs = dstar.f0.images[i].mul(&c.boundary.apply(&self.bracket[t][i]));
                if !c.c0.equal(&lhs, &rhs) {
                    return Err(QpError::AxiomFailure("action law (2) fails".into()));
                }
            }
            // (3): ε(t)*(z) = ∂(t)*(z) + ⟨∂z, t⟩
            for z in 0..c.c1.ngens() {
                let lhs = estar.f1.images[z].clone();
                let rhs = dstar.f1.images[z]
                    .mul(&self.bracket_apply(sign, c, &c.boundary.images[z], t));
                if !c.c1.equal(&lhs, &rhs) {
                    return Err(QpError::AxiomFailure("action law (3) fails".into()));
                }
            }
        }
        // (4): ⟨x, s·t⟩ = ⟨∂(s)*(x), t⟩ + ⟨ε(t)*(x), s⟩
        for s in 0..nv {
            for t in 0..nv {
                let st = sign.gv.mul(s, t);
                for i in 0..c.c0.ngens() {
                    let x = c.c0.gen(i);
                    let lhs = self.bracket[st][i].clone();
                    let a =
                        self.bracket_apply(sign, c, &self.gstar[sign.partial[s]].f0.apply(&x), t);
                    let ex = eps_star(sign.eps_v(t)).f0.apply(&x);
                    let b = self.bracket_apply(sign, c, &ex, s);
                    if !c.c1.equal(&lhs, &a.mul(&b)) {
                        return Err(QpError::AxiomFailure("action law (4) fails".into()));
                    }
                }
            }
        }
        // (5): ⟨x, ω⟩ = P(x|x)_H
        for i in 0..c.c0.ngens() {
            let x = c.c0.gen(i);
            let rhs = c.p_eval(&c.h0.cross_el(&x, &x));
            if !c.c1.equal(&self.bracket[sign.omega][i], &rhs) {
                return Err(QpError::AxiomFailure("ω-formula fails".into()));
            }
        }
        Ok(())
    }
}

/// Right A(G⋉)-module structure data on C: the values of the structure
/// morphism C⊙A(G⋉) -> C on the tensor generators.
#[derive(Clone)]
pub struct ModuleStructure {
    /// mu0[i][g] = x_i·[g] in C₀
    pub mu0: Vec<Vec<Nil2Element>>,
    /// zeta[z][g] = z·[g] in C₁
    pub zeta: Vec<Vec<Nil2Element>>,
    /// xi[i][t] = x_i·[t] in C₁
    pub xi: Vec<Vec<Nil2Element>>,
    /// rho_ee[k][g*|G|+h] = image of u_k ⊗ (g⊗h) in C_ee
    pub rho_ee: Vec<Vec<Vec<num_bigint::BigInt>>>,
}

/// From a module structure to a sign action: g*x = x·[g] and
/// ⟨x,t⟩ = x·[t] + binom(ε(t),2) PH(x).
pub fn action_from_module(
    ms: &ModuleStructure,
    sign: &SignGroup,
    c: &QuadraticPairModule,
) -> Result<SignAction, QpError> {
    let ng = sign.g.order();
    let mut gstar = Vec::with_capacity(ng);
    for g in 0..ng {
        let f0 = Nil2Hom::new(
            c.c0.basis.clone(),
            c.c0.basis.clone(),
            (0..c.c0.ngens()).map(|i| ms.mu0[i][g].clone()).collect(),
        );
        let f1 = Nil2Hom::new(
            c.c1.basis.clone(),
            c.c1.basis.clone(),
            (0..c.c1.ngens()).map(|z| ms.zeta[z][g].clone()).collect(),
        );
        let mut fee = IntMatrix::zero(c.cee.ngens, c.cee.ngens);
        for k in 0..c.cee.ngens {
            let col = &ms.rho_ee[k][g * ng + g];
            for t in 0..c.cee.ngens {
                fee[(t, k)] = col[t].clone();
            }
        }
        gstar.push(QpmMorphism { f0, f1, fee });
    }
    let mut bracket = Vec::with_capacity(sign.gv.order());
    for t in 0..sign.gv.order() {
        let mut row = Vec::with_capacity(c.c0.ngens());
        for i in 0..c.c0.ngens() {
            let mut v = ms.xi[i][t].clone();
            if binom2(sign.eps_v(t)) == 1 {
                v = v.mul(&c.p_eval(&c.h0.eval(&c.c0.gen(i))));
            }
            row.push(v);
        }
        bracket.push(row);
    }
    let action = SignAction { gstar, bracket };
    action.check(sign, c)?;
    Ok(action)
}

/// From a sign action back to a module structure.
pub fn module_from_action(
    action: &SignAction,
    sign: &SignGroup,
    c: &QuadraticPairModule,
) -> Result<ModuleStructure, QpError> {
    let ng = sign.g.order();
    let sg0 = c.sg0();
    let mut mu0 = vec![Vec::new(); c.c0.ngens()];
    for i in 0..c.c0.ngens() {
        for g in 0..ng {
            mu0[i].push(action.gstar[g].f0.images[i].clone());
        }
    }
    let mut zeta = vec![Vec::new(); c.c1.ngens()];
    for z in 0..c.c1.ngens() {
        for g in 0..ng {
            zeta[z].push(action.gstar[g].f1.images[z].clone());
        }
    }
    let mut xi = vec![Vec::new(); c.c0.ngens()];
    for i in 0..c.c0.ngens() {
        for t in 0..sign.gv.order() {
            let mut v = action.bracket[t][i].clone();
            if binom2(sign.eps_v(t)) == 1 {
                v = v.mul(&c.p_eval(&c.h0.eval(&c.c0.gen(i))).inv());
            }
            xi[i].push(v);
        }
    }
    let n0 = c.c0.ngens();
    let mut rho_ee = Vec::with_capacity(c.cee.ngens);
    for k in 0..c.cee.ngens {
        let mut unit = vec![num_bigint::BigInt::from(0); c.cee.ngens];
        unit[k] = num_bigint::BigInt::from(1);
        let w = sg0.goodness_decompose(&unit)?;
        let mut per_gh = Vec::with_capacity(ng * ng);
        for g in 0..ng {
            for h in 0..ng {
                // (x_i|x_j)_H ⊗ (g⊗h) = (x_i⊙̲[h] | x_j⊙̲[g])_H, so the
                // structure map pairs x_i with h* and x_j with g*
                let mut col = vec![num_bigint::BigInt::from(0); c.cee.ngens];
                for i in 0..n0 {
                    for j in 0..n0 {
                        let wij = &w[i * n0 + j];
                        if wij.is_zero() {
                            continue;
                        }
                        let cr = c.h0.cross_el(
                            &action.gstar[h].f0.images[i],
                            &action.gstar[g].f0.images[j],
                        );
                        for s in 0..col.len() {
                            col[s] += &cr[s] * wij;
                        }
                    }
                }
                per_gh.push(col);
            }
        }
        rho_ee.push(per_gh);
    }
    Ok(ModuleStructure { mu0, zeta, xi, rho_ee })
}

/// The regular right module of A(G⋉) over itself.
pub fn regular_module(ring: &GroupRing) -> ModuleStructure {
    let sign = &ring.sign;
    let ng = sign.g.order();
    let c = &ring.qpm;
    let mut mu0 = vec![Vec::new(); c.c0.ngens()];
    for i in 0..c.c0.ngens() {
        for g in 0..ng {
            mu0[i].push(Nil2Element::gen(&c.c0.basis, sign.g.mul(i, g)));
        }
    }
    let mut zeta = vec![Vec::new(); c.c1.ngens()];
    for z in 0..c.c1.ngens() {
        for g in 0..ng {
            zeta[z].push(ring.zeta_product(&Nil2Element::gen(&c.c1.basis, z), g));
        }
    }
    let mut xi = vec![Vec::new(); c.c0.ngens()];
    for i in 0..c.c0.ngens() {
        for t in 0..sign.gv.order() {
            xi[i].push(ring.xi_gen(i, t));
        }
    }
    let mut rho_ee = Vec::with_capacity(c.cee.ngens);
    for k in 0..c.cee.ngens {
        let (a, b) = (k / ng, k % ng);
        let mut per_gh = Vec::with_capacity(ng * ng);
        for g in 0..ng {
            for h in 0..ng {
                let mut col = vec![num_bigint::BigInt::from(0); c.cee.ngens];
                col[sign.g.mul(a, g) * ng + sign.g.mul(b, h)] = num_bigint::BigInt::from(1);
                per_gh.push(col);
            }
        }
        rho_ee.push(per_gh);
    }
    ModuleStructure { mu0, zeta, xi, rho_ee }
}

/// Both round trips of the action↔module correspondence, on the regular
/// module of A(G⋉).
pub fn action_module_roundtrip(ring: &GroupRing) -> Result<(), QpError> {
    let sign = &ring.sign;
    let c = &ring.qpm;
    let ms = regular_module(ring);
    let action = action_from_module(&ms, sign, c)?;
    let ms2 = module_from_action(&action, sign, c)?;
    for i in 0..c.c0.ngens() {
        for g in 0..sign.g.order() {
            if !c.c0.equal(&ms.mu0[i][g], &ms2.mu0[i][g]) {
                return Err(QpError::AxiomFailure("action-module roundtrip: mu0".into()));
            }
        }
        for t in 0..sign.gv.order() {
            if !c.c1.equal(&ms.xi[i][t], &ms2.xi[i][t]) {
                return Err(QpError::AxiomFailure("action-module roundtrip: xi".into()));
            }
        }
    }
    for z in 0..c.c1.ngens() {
        for g in 0..sign.g.order() {
            if !c.c1.equal(&ms.zeta[z][g], &ms2.zeta[z][g]) {
                return Err(QpError::AxiomFailure("action-module roundtrip: zeta".into()));
            }
        }
    }
    for k in 0..c.cee.ngens {
        for gh in 0..sign.g.order() * sign.g.order() {
            if !c.cee.eq_vecs(&ms.rho_ee[k][gh], &ms2.rho_ee[k][gh]) {
                return Err(QpError::AxiomFailure("action-module roundtrip: rho_ee".into()));
            }
        }
    }
    // and action -> module -> action
    let action2 = action_from_module(&ms2, sign, c)?;
    for g in 0..sign.g.order() {
        if !action.gstar[g].eq_on_gens(&action2.gstar[g], c, c) {
            return Err(QpError::AxiomFailure("action-module roundtrip: gstar".into()));
        }
    }
    for t in 0..sign.gv.order() {
        for i in 0..c.c0.ngens() {
            if !c.c1.equal(&action.bracket[t][i], &action2.bracket[t][i]) {
                return Err(QpError::AxiomFailure("action-module roundtrip: bracket".into()));
            }
        }
    }
    Ok(())
}

/// The unique action of the trivial sign group on any qpm.
pub fn trivial_action(c: &QuadraticPairModule) -> SignAction {
    let id = QpmMorphism::identity(c);
    let mut omega_row = Vec::new();
    for i in 0..c.c0.ngens() {
        let x = c.c0.gen(i);
        omega_row.push(c.p_eval(&c.h0.cross_el(&x, &x)));
    }
    let id_row = vec![c.c1.zero(); c.c0.ngens()];
    SignAction { gstar: vec![id], bracket: vec![id_row, omega_row] }
}

// ---------------------------------------------------------------------------
// Strict monoidality of the group ring
// ---------------------------------------------------------------------------

/// Strict monoidality of the group ring: A(G⋉)⊙A(L⋉) ≅ A(G⋉ ×̃ L⋉). Builds both
/// morphisms explicitly, checks them, and verifies both round trips on
/// generators.
pub fn strict_monoidal_check(
    gs: &SignGroup,
    ls: &SignGroup,
    guard: usize,
) -> Result<(), QpError> {
    let order = 2 * gs.g.order() * ls.g.order();
    if order > guard {
        return Err(QpError::SizeGuard(format!(
            "twisted product order {order} exceeds the guard {guard}"
        )));
    }
    let ag = GroupRing::new(gs)?;
    let al = GroupRing::new(ls)?;
    let tw = twisted_product(gs, ls)?;
    let atw = GroupRing::new(&tw.sign)?;
    let tensor = crate::qpm::QpmTensor::new(&ag.qpm, &al.qpm)?;

    let ngg = gs.g.order();
    let nll = ls.g.order();
    let npair = ngg * nll;
    let gl = |g: usize, l: usize| g * nll + l; // index in G×L
    // class index in the twisted product of the pair (t, s)
    let class_of = |t: usize, s: usize| -> usize {
        let c1 = (t, s);
        let c2 = (gs.gv.mul(t, gs.omega), ls.gv.mul(s, ls.omega));
        let c = c1.min(c2);
        tw.reps.iter().position(|r| *r == c).unwrap()
    };

    // ee shuffle (a⊗b)⊗(c⊗d) ↦ (a,c)⊗(b,d) and its inverse
    let mut fee = IntMatrix::zero(npair * npair, (ngg * ngg) * (nll * nll));
    let mut gee = IntMatrix::zero((ngg * ngg) * (nll * nll), npair * npair);
    for a in 0..ngg {
        for b in 0..ngg {
            for cc in 0..nll {
                for dd in 0..nll {
                    let src = (a * ngg + b) * (nll * nll) + (cc * nll + dd);
                    let dst = gl(a, cc) * npair + gl(b, dd);
                    fee[(dst, src)] = num_bigint::BigInt::from(1);
                    gee[(src, dst)] = num_bigint::BigInt::from(1);
                }
            }
        }
    }

    // Θ : A(G)⊙A(L) -> A(TW)
    let mut f0_images = Vec::new();
    for g in 0..ngg {
        for l in 0..nll {
            f0_images.push(Nil2Element::gen(&atw.qpm.c0.basis, gl(g, l)));
        }
    }
    let atw_sg0 = atw.qpm.sg0();
    for k in 0..(ngg * ngg) * (nll * nll) {
        let mut unit = vec![num_bigint::BigInt::from(0); (ngg * ngg) * (nll * nll)];
        unit[k] = num_bigint::BigInt::from(1);
        f0_images.push(atw_sg0.p_eval(&fee.mul_vec(&unit)));
    }
    let f0 = Nil2Hom::new(
        tensor.sg00.basis().clone(),
        atw.qpm.c0.basis.clone(),
        f0_images,
    );

    // Θ₁ on the 1-level generators of A(G) and A(L), embedded via i_G, i_L
    let theta_g1 = |z: usize| -> Nil2Element {
        if z < gs.gv.order() {
            atw.t_gen(class_of(z, ls.gv.identity))
        } else {
            let k = z - gs.gv.order();
            let (a, b) = (k / ngg, k % ngg);
            atw.p_gen(gl(a, ls.g.identity), gl(b, ls.g.identity))
        }
    };
    let theta_l1 = |w: usize| -> Nil2Element {
        if w < ls.gv.order() {
            atw.t_gen(class_of(gs.gv.identity, w))
        } else {
            let k = w - ls.gv.order();
            let (cc, dd) = (k / nll, k % nll);
            atw.p_gen(gl(gs.g.identity, cc), gl(gs.g.identity, dd))
        }
    };
    let mut f1_images = Vec::new();
    for z in 0..ag.qpm.c1.ngens() {
        for l in 0..nll {
            f1_images.push(atw.zeta_product(&theta_g1(z), gl(gs.g.identity, l)));
        }
    }
    for g in 0..ngg {
        for w in 0..al.qpm.c1.ngens() {
            f1_images
                .push(atw.xi_product_of_element(gl(g, ls.g.identity), &theta_l1(w)));
        }
    }
    let nee_src = (ngg * ngg) * (nll * nll);
    for _round in 0..2 {
        for k in 0..nee_src {
            let mut unit = vec![num_bigint::BigInt::from(0); nee_src];
            unit[k] = num_bigint::BigInt::from(1);
            f1_images.push(atw.qpm.p_eval(&fee.mul_vec(&unit)));
        }
    }
    let f1 = Nil2Hom::new(
        tensor.result.c1.basis.clone(),
        atw.qpm.c1.basis.clone(),
        f1_images,
    );
    let theta = QpmMorphism { f0, f1, fee: fee.clone() };
    theta
        .check(&tensor.result, &atw.qpm)
        .map_err(|e| QpError::AxiomFailure(format!("monoidality forward map: {e}")))?;

    // Ψ : A(TW) -> A(G)⊙A(L)
    let mut g0_images = Vec::new();
    for g in 0..ngg {
        for l in 0..nll {
            g0_images.push(Nil2Element::gen(
                tensor.sg00.basis(),
                tensor.sg00.odot_idx(g, l),
            ));
        }
    }
    let g0 = Nil2Hom::new(
        atw.qpm.c0.basis.clone(),
        tensor.sg00.basis().clone(),
        g0_images,
    );
    let minus = |u: &Nil2Element| -> Nil2Element {
        let c = &tensor.result;
        u.inv().mul(&c.p_eval(&c.h0.eval(&c.boundary.apply(u))))
    };
    let mut g1_images = Vec::new();
    for k in 0..atw.qpm.c1.ngens() {
        if k < tw.sign.gv.order() {
            let (t, s) = tw.reps[k];
            // [t̄·s̄] = [∂t̄]·[s̄] + ε(s̄)·[t̄] + binom(ε t,2)binom(ε s,2) p₁₁
            let xi_part = Nil2Element::gen(
                &tensor.result.c1.basis,
                tensor.xi_gen(gs.partial[t], s),
            );
            let zeta_tbar = Nil2Element::gen(
                &tensor.result.c1.basis,
                tensor.zeta_gen(t, ls.g.identity),
            );
            let x = if ls.eps_v(s) == 1 { zeta_tbar } else { minus(&zeta_tbar) };
            let mut img = xi_part.mul(&x);
            if binom2(gs.eps_v(t)) * binom2(ls.eps_v(s)) % 2 == 1 {
                let idx = (gs.g.identity * ngg + gs.g.identity) * (nll * nll)
                    + (ls.g.identity * nll + ls.g.identity);
                let mut unit = vec![num_bigint::BigInt::from(0); nee_src];
                unit[idx] = num_bigint::BigInt::from(1);
                img = img.mul(&tensor.result.p_eval(&unit));
            }
            g1_images.push(img);
        } else {
            let k2 = k - tw.sign.gv.order();
            let (u, v) = (k2 / npair, k2 % npair);
            let mut unit = vec![num_bigint::BigInt::from(0); npair * npair];
            unit[u * npair + v] = num_bigint::BigInt::from(1);
            g1_images.push(tensor.result.p_eval(&gee.mul_vec(&unit)));
        }
    }
    let g1 = Nil2Hom::new(
        atw.qpm.c1.basis.clone(),
        tensor.result.c1.basis.clone(),
        g1_images,
    );
    let psi = QpmMorphism { f0: g0, f1: g1, fee: gee };
    psi.check(&atw.qpm, &tensor.result)
        .map_err(|e| QpError::AxiomFailure(format!("monoidality backward map: {e}")))?;

    // round trips on generators
    let rt = psi.compose(&theta);
    if !rt.eq_on_gens(&QpmMorphism::identity(&tensor.result), &tensor.result, &tensor.result) {
        return Err(QpError::AxiomFailure("Ψ∘Θ != id on A(G)⊙A(L)".into()));
    }
    let rt = theta.compose(&psi);
    if !rt.eq_on_gens(&QpmMorphism::identity(&atw.qpm), &atw.qpm, &atw.qpm) {
        return Err(QpError::AxiomFailure("Θ∘Ψ != id on A(G⋉×̃L⋉)".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_group_constructors() {
        SignGroup::trivial().validate().unwrap();
        SignGroup::cyclic4(true).validate().unwrap();
        SignGroup::cyclic4(false).validate().unwrap();
        let z2 = FiniteGroup::cyclic(2);
        SignGroup::split(z2, vec![1, -1]).unwrap();
        let st3 = SignGroup::sym_track(3).unwrap();
        assert_eq!(st3.gv.order(), 12);
        assert_eq!(st3.g.order(), 6);
    }

    #[test]
    fn twisted_products() {
        let triv = SignGroup::trivial();
        let c4 = SignGroup::cyclic4(true);
        // 1⋉ ×̃ L⋉ ≅ L⋉
        let t = twisted_product(&triv, &c4).unwrap();
        assert_eq!(t.sign.gv.order(), 4);
        // order 2|G||L|
        let t = twisted_product(&c4, &c4).unwrap();
        assert_eq!(t.sign.gv.order(), 2 * 2 * 2);
        t.sign.validate().unwrap();
        // anticommutation: t̄ s̄ = s̄ t̄ ω when ε(t) = ε(s) = -1 is spot
        // checked inside twisted_product already; associativity is verified
        // by the FiniteGroup table constructor.
        let z2 = FiniteGroup::cyclic(2);
        let sp = SignGroup::split(z2, vec![1, -1]).unwrap();
        let t = twisted_product(&sp, &sp).unwrap();
        assert_eq!(t.sign.gv.order(), 8);
    }

    #[test]
    fn crossed_action_central_twist() {
        // a central element acted on by x = -1 picks up ι(ε(g)):
        // g^{(-1,h)} = g·ι(ε(g)) since conjugation is trivial
        let sg = SignGroup::cyclic4(true);
        let gv = &sg.gv;
        for el in 0..gv.order() {
            // Z/4 is abelian, so every element is central
            let lift = sg.lift(sg.g.identity);
            let mut expect = el;
            if sg.eps_v(el) == -1 {
                expect = gv.mul(el, sg.omega);
            }
            let got = {
                let mut out = gv.mul(gv.mul(gv.inv[lift], el), lift);
                if sg.eps_v(el) == -1 {
                    out = gv.mul(out, sg.omega);
                }
                out
            };
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn crossed_actions() {
        crossed_action(&SignGroup::trivial()).unwrap();
        crossed_action(&SignGroup::cyclic4(true)).unwrap();
        crossed_action(&SignGroup::cyclic4(false)).unwrap();
        let z2 = FiniteGroup::cyclic(2);
        crossed_action(&SignGroup::split(z2, vec![1, -1]).unwrap()).unwrap();
    }

    #[test]
    fn group_ring_trivial() {
        // A(1⋉): the 1-level is generated by [ω] = P(1|1)_H of order 2
        let ring = GroupRing::new(&SignGroup::trivial()).unwrap();
        ring.check().unwrap();
        assert_eq!(ring.qpm.c1.order(), Some(BigInt::from(2)));
        let omega = ring.t_gen(ring.sign.omega);
        assert!(!ring.qpm.c1.is_identity(&omega));
        assert!(ring.qpm.c1.is_identity(&omega.pow(&BigInt::from(2))));
    }

    #[test]
    fn group_ring_cyclic4() {
        let ring = GroupRing::new(&SignGroup::cyclic4(true)).unwrap();
        ring.check().unwrap();
        // ∂[ω] = -[1] + 1 = 0
        let d = ring.qpm.boundary.apply(&ring.t_gen(ring.sign.omega));
        assert!(ring.qpm.c0.is_identity(&d));
    }

    #[test]
    fn group_ring_split_z2() {
        let z2 = FiniteGroup::cyclic(2);
        let ring = GroupRing::new(&SignGroup::split(z2, vec![1, -1]).unwrap()).unwrap();
        ring.check().unwrap();
    }
}

#[cfg(test)]
mod action_tests {
    use super::*;

    #[test]
    fn trivial_action_unique() {
        let ring = GroupRing::new(&SignGroup::trivial()).unwrap();
        let act = trivial_action(&ring.qpm);
        act.check(&SignGroup::trivial(), &ring.qpm).unwrap();
    }

    #[test]
    fn action_module_roundtrip_trivial_and_cyclic4() {
        let ring = GroupRing::new(&SignGroup::trivial()).unwrap();
        action_module_roundtrip(&ring).unwrap();
        let ring = GroupRing::new(&SignGroup::cyclic4(true)).unwrap();
        action_module_roundtrip(&ring).unwrap();
    }

    #[test]
    fn monoidality_trivial_pairs() {
        let triv = SignGroup::trivial();
        strict_monoidal_check(&triv, &triv, 48).unwrap();
    }

    #[test]
    fn monoidality_c4_with_trivial() {
        let triv = SignGroup::trivial();
        let c4 = SignGroup::cyclic4(true);
        strict_monoidal_check(&c4, &triv, 48).unwrap();
        strict_monoidal_check(&triv, &c4, 48).unwrap();
    }

    #[test]
    fn monoidality_c4_c4() {
        let c4 = SignGroup::cyclic4(true);
        strict_monoidal_check(&c4, &c4, 48).unwrap();
    }
}
