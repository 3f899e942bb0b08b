//! The line-oriented object file format and the signed-generator word
//! syntax. Parsing is total with line/column error positions, and
//! parse ∘ print is the identity on canonical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abelian::{AbGroupPresentation, IntMatrix};
use crate::error::QpError;
use crate::nil2::{Nil2Element, Nil2Hom, PointedSet, PresentedNil2};
use crate::qpm::{phi, PairInput, QuadraticPairModule};
use crate::signgroup::{FiniteGroup, SignGroup};
use crate::sqgroup::{make_znil, QuadraticMap, SquareGroup};

// ---------------------------------------------------------------------------
// Word syntax: signed generator sequences like  a + b - a + 2c + [a, b]
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum WordTerm {
    Gen { coeff: BigInt, name: String },
    Comm { coeff: BigInt, left: Word, right: Word },
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Word(pub Vec<WordTerm>);

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str, line: usize, col0: usize) -> Self {
        Scanner { src, pos: 0, line, col: col0 }
    }

    fn err(&self, msg: &str) -> QpError {
        QpError::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.src[self.pos..].chars().next()?;
        self.pos += c.len_utf8();
        self.col += 1;
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t') {
            self.bump();
        }
    }

    fn parse_uint(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return None;
        }
        Some(self.src[start..self.pos].parse().unwrap())
    }

    fn parse_ident(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_' || c == '.' || c == '^' || c == '*') {
            self.bump();
        }
        if start == self.pos {
            return None;
        }
        Some(self.src[start..self.pos].to_string())
    }

    fn parse_word(&mut self, stop: &[char]) -> Result<Word, QpError> {
        let mut terms = Vec::new();
        let mut sign = BigInt::one();
        let mut first = true;
        let mut pending_sign = false;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(_) if pending_sign && self.peek().map_or(true, |c| stop.contains(&c)) => {
                    return Err(self.err("dangling sign"));
                }
                None => break,
                Some(c) if stop.contains(&c) => break,
                Some('+') => {
                    if pending_sign {
                        return Err(self.err("doubled sign"));
                    }
                    self.bump();
                    sign = BigInt::one();
                    first = false;
                    pending_sign = true;
                    continue;
                }
                Some('-') => {
                    if pending_sign {
                        return Err(self.err("doubled sign"));
                    }
                    self.bump();
                    sign = -BigInt::one();
                    first = false;
                    pending_sign = true;
                    continue;
                }
                Some(_) => {}
            }
            pending_sign = false;
            self.skip_ws();
            let coeff = self.parse_uint();
            self.skip_ws();
            if let Some('[') = self.peek() {
                self.bump();
                let left = self.parse_word(&[','])?;
                if self.peek() != Some(',') {
                    return Err(self.err("expected ',' inside commutator"));
                }
                self.bump();
                let right = self.parse_word(&[']'])?;
                if self.peek() != Some(']') {
                    return Err(self.err("expected ']' closing commutator"));
                }
                self.bump();
                let c = coeff.unwrap_or_else(BigInt::one) * &sign;
                terms.push(WordTerm::Comm { coeff: c, left, right });
            } else if let Some(name) = self.parse_ident() {
                let c = coeff.unwrap_or_else(BigInt::one) * &sign;
                terms.push(WordTerm::Gen { coeff: c, name });
            } else if let Some(k) = coeff {
                // a bare integer: only "0" (the identity) is meaningful
                if !k.is_zero() {
                    return Err(self.err("bare nonzero integer in word"));
                }
                if !first && terms.is_empty() {
                    return Err(self.err("unexpected 0"));
                }
            } else {
                return Err(self.err("expected generator, commutator or 0"));
            }
            sign = BigInt::one();
            first = false;
        }
        Ok(Word(terms))
    }
}

/// Parse a word; `line`/`col0` locate error positions in the host file.
pub fn parse_word_at(src: &str, line: usize, col0: usize) -> Result<Word, QpError> {
    let mut sc = Scanner::new(src, line, col0);
    let w = sc.parse_word(&[])?;
    sc.skip_ws();
    if sc.peek().is_some() {
        return Err(sc.err("trailing input after word"));
    }
    Ok(w)
}

pub fn parse_word(src: &str) -> Result<Word, QpError> {
    parse_word_at(src, 1, 1)
}

impl Word {
    /// Evaluate over a pointed set, multiplying left to right.
    pub fn eval(&self, basis: &Arc<PointedSet>) -> Result<Nil2Element, QpError> {
        let mut out = Nil2Element::zero(basis);
        for t in &self.0 {
            match t {
                WordTerm::Gen { coeff, name } => {
                    let i = basis.index_of(name).ok_or_else(|| {
                        QpError::Semantic(format!("unknown generator '{name}'"))
                    })?;
                    out = out.mul(&Nil2Element::gen(basis, i).pow(coeff));
                }
                WordTerm::Comm { coeff, left, right } => {
                    let l = left.eval(basis)?;
                    let r = right.eval(basis)?;
                    out = out.mul(&l.commutator(&r).pow(coeff));
                }
            }
        }
        Ok(out)
    }

    /// Evaluate as an abelian combination over named generators.
    pub fn eval_abelian(&self, names: &[String]) -> Result<Vec<BigInt>, QpError> {
        let mut out = vec![BigInt::zero(); names.len()];
        for t in &self.0 {
            match t {
                WordTerm::Gen { coeff, name } => {
                    let i = names.iter().position(|n| n == name).ok_or_else(|| {
                        QpError::Semantic(format!("unknown ee-generator '{name}'"))
                    })?;
                    out[i] += coeff;
                }
                WordTerm::Comm { .. } => {
                    return Err(QpError::Semantic(
                        "commutators are not allowed in abelian words".into(),
                    ))
                }
            }
        }
        Ok(out)
    }
}

pub fn print_element(x: &Nil2Element) -> String {
    x.display()
}

pub fn print_abelian(v: &[BigInt], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = if c.is_one() {
            names[i].clone()
        } else if (-c).is_one() {
            format!("-{}", names[i])
        } else {
            format!("{}{}", c, names[i])
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, p) in parts.iter().enumerate() {
        if k == 0 {
            s.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(rest);
        } else {
            s.push_str(" + ");
            s.push_str(p);
        }
    }
    s
}

// ---------------------------------------------------------------------------
// Object files
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Section {
    pub kind: String,
    pub name: String,
    pub line: usize,
    /// key -> (value, line)
    pub entries: Vec<(String, String, usize)>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }

    pub fn get_line(&self, key: &str) -> usize {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, _, l)| *l)
            .unwrap_or(self.line)
    }

    pub fn values(&self, key: &str) -> Vec<(&str, usize)> {
        self.entries
            .iter()
            .filter(|(k, _, _)| k == key)
            .map(|(_, v, l)| (v.as_str(), *l))
            .collect()
    }
}

const SECTION_KINDS: &[&str] =
    &["pointedset", "squaregroup", "qpm", "signgroup", "morphism", "track"];

/// Parse the raw section structure of an object file.
pub fn parse_sections(src: &str) -> Result<Vec<Section>, QpError> {
    let mut sections: Vec<Section> = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line_no = ln + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return Err(QpError::Syntax {
                    line: line_no,
                    col: raw.len(),
                    msg: "unterminated section header".into(),
                });
            };
            let mut it = inner.split_whitespace();
            let kind = it.next().unwrap_or("").to_string();
            let name = it.next().unwrap_or("").to_string();
            if !SECTION_KINDS.contains(&kind.as_str()) {
                return Err(QpError::Syntax {
                    line: line_no,
                    col: 2,
                    msg: format!("unknown section kind '{kind}'"),
                });
            }
            if name.is_empty() || it.next().is_some() {
                return Err(QpError::Syntax {
                    line: line_no,
                    col: 2,
                    msg: "section header must be [kind name]".into(),
                });
            }
            sections.push(Section { kind, name, line: line_no, entries: Vec::new() });
        } else if let Some(colon) = t.find(':') {
            let key = t[..colon].trim().to_string();
            let value = t[colon + 1..].trim().to_string();
            let Some(sec) = sections.last_mut() else {
                return Err(QpError::Syntax {
                    line: line_no,
                    col: 1,
                    msg: "key outside of any section".into(),
                });
            };
            if key.is_empty() {
                return Err(QpError::Syntax {
                    line: line_no,
                    col: 1,
                    msg: "empty key".into(),
                });
            }
            sec.entries.push((key, value, line_no));
        } else {
            return Err(QpError::Syntax {
                line: line_no,
                col: 1,
                msg: "expected 'key: value' or '[kind name]'".into(),
            });
        }
    }
    Ok(sections)
}

/// A parsed and validated object file.
pub struct ObjectFile {
    pub pointed_sets: BTreeMap<String, Arc<PointedSet>>,
    pub square_groups: BTreeMap<String, SquareGroup>,
    pub qpms: BTreeMap<String, QuadraticPairModule>,
    pub sign_groups: BTreeMap<String, SignGroup>,
    pub sg_morphisms: BTreeMap<String, (String, String, crate::sqgroup::SquareGroupMorphism)>,
    pub tracks: BTreeMap<String, (String, crate::tracks::QpmTrack)>,
    pub order: Vec<(String, String)>, // (kind, name) in file order
}

fn known_keys(kind: &str) -> &'static [&'static str] {
    match kind {
        "pointedset" => &["elements"],
        "squaregroup" => &["kind", "base", "erels", "ee", "eerels", "P", "H", "cross"],
        "qpm" => &["kind", "base", "sign", "eps", "n"],
        "signgroup" => &["kind", "eps", "n", "group"],
        "morphism" => &["kind", "source", "target", "e", "ee"],
        "track" => &["qpm", "f", "alpha"],
        _ => &[],
    }
}

impl ObjectFile {
    pub fn parse(src: &str) -> Result<ObjectFile, QpError> {
        let sections = parse_sections(src)?;
        let mut out = ObjectFile {
            pointed_sets: BTreeMap::new(),
            square_groups: BTreeMap::new(),
            qpms: BTreeMap::new(),
            sign_groups: BTreeMap::new(),
            sg_morphisms: BTreeMap::new(),
            tracks: BTreeMap::new(),
            order: Vec::new(),
        };
        for sec in &sections {
            for (k, _, l) in &sec.entries {
                if !known_keys(&sec.kind).contains(&k.as_str()) {
                    return Err(QpError::Syntax {
                        line: *l,
                        col: 1,
                        msg: format!("unknown key '{k}' in [{}]", sec.kind),
                    });
                }
            }
            match sec.kind.as_str() {
                "pointedset" => out.parse_pointed_set(sec)?,
                "squaregroup" => out.parse_square_group(sec)?,
                "qpm" => out.parse_qpm(sec)?,
                "signgroup" => out.parse_sign_group(sec)?,
                "morphism" => out.parse_morphism(sec)?,
                "track" => out.parse_track(sec)?,
                _ => unreachable!(),
            }
            out.order.push((sec.kind.clone(), sec.name.clone()));
        }
        Ok(out)
    }

    fn parse_pointed_set(&mut self, sec: &Section) -> Result<(), QpError> {
        let elems = sec.get("elements").unwrap_or("");
        let names: Vec<String> = elems.split_whitespace().map(|s| s.to_string()).collect();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(QpError::Semantic(format!(
                    "duplicate element '{n}' in pointed set '{}'",
                    sec.name
                )));
            }
        }
        self.pointed_sets.insert(sec.name.clone(), PointedSet::new(names));
        Ok(())
    }

    fn base(&self, sec: &Section) -> Result<Arc<PointedSet>, QpError> {
        let b = sec
            .get("base")
            .ok_or_else(|| QpError::Semantic(format!("[{} {}] needs base:", sec.kind, sec.name)))?;
        self.pointed_sets
            .get(b)
            .cloned()
            .ok_or_else(|| QpError::Semantic(format!("unknown pointed set '{b}'")))
    }

    fn parse_square_group(&mut self, sec: &Section) -> Result<(), QpError> {
        let kind = sec.get("kind").unwrap_or("znil");
        let sg = match kind {
            "znil" => make_znil(&self.base(sec)?),
            "custom" => {
                let basis = self.base(sec)?;
                let mut relators = Vec::new();
                for (v, l) in sec.values("erels") {
                    for part in v.split(';') {
                        let part = part.trim();
                        if part.is_empty() {
                            continue;
                        }
                        relators.push(parse_word_at(part, l, 1)?.eval(&basis)?);
                    }
                }
                let e = PresentedNil2::new(basis.clone(), relators);
                let ee_spec = sec.get("ee").unwrap_or("free 0");
                let ee = parse_ee_spec(ee_spec, sec.get_line("ee"))?;
                let ee_names: Vec<String> =
                    (0..ee.ngens).map(|k| format!("e{k}")).collect();
                let mut p = vec![Nil2Element::zero(&basis); ee.ngens];
                for (v, l) in sec.values("P") {
                    let (lhs, rhs) = split_arrow(v, l)?;
                    let k = ee_index(&lhs, ee.ngens, l)?;
                    p[k] = parse_word_at(&rhs, l, 1)?.eval(&basis)?;
                }
                let mut h = QuadraticMap::zero_map(basis.len(), ee.ngens);
                for (v, l) in sec.values("H") {
                    let (lhs, rhs) = split_arrow(v, l)?;
                    let i = basis.index_of(lhs.trim()).ok_or_else(|| {
                        QpError::Semantic(format!("unknown generator '{lhs}'"))
                    })?;
                    h.gen_values[i] = parse_word_at(&rhs, l, 1)?.eval_abelian(&ee_names)?;
                }
                for (v, l) in sec.values("cross") {
                    let (lhs, rhs) = split_arrow(v, l)?;
                    let mut it = lhs.split_whitespace();
                    let gi = it.next().and_then(|n| basis.index_of(n));
                    let gj = it.next().and_then(|n| basis.index_of(n));
                    let (Some(i), Some(j)) = (gi, gj) else {
                        return Err(QpError::Semantic(format!(
                            "cross needs two generators, got '{lhs}'"
                        )));
                    };
                    h.cross[i][j] = parse_word_at(&rhs, l, 1)?.eval_abelian(&ee_names)?;
                }
                SquareGroup { e, ee, p, h }
            }
            other => {
                return Err(QpError::Semantic(format!("unknown squaregroup kind '{other}'")))
            }
        };
        sg.check_axioms()?;
        self.square_groups.insert(sec.name.clone(), sg);
        Ok(())
    }

    fn parse_qpm(&mut self, sec: &Section) -> Result<(), QpError> {
        let kind = sec
            .get("kind")
            .ok_or_else(|| QpError::Semantic("qpm needs kind:".into()))?;
        let q = match kind {
            "zbar" => crate::qpm::zbar_nil(),
            "interval" => crate::qpm::interval(),
            "phi0" => {
                let z = make_znil(&self.base(sec)?);
                let empty = PresentedNil2::free(PointedSet::new(Vec::<String>::new()));
                let d_ee = AbGroupPresentation::trivial();
                let fe = Nil2Hom::new(empty.basis.clone(), z.e.basis.clone(), vec![]);
                let fee = IntMatrix::zero(z.ee.ngens, 0);
                let input =
                    PairInput { d_e: &empty, d_ee: &d_ee, d_p: &[], f_e: &fe, f_ee: &fee };
                phi(&input, &z).0
            }
            "groupring" => {
                let s = sec
                    .get("sign")
                    .ok_or_else(|| QpError::Semantic("groupring needs sign:".into()))?;
                let sign = self
                    .sign_groups
                    .get(s)
                    .ok_or_else(|| QpError::Semantic(format!("unknown sign group '{s}'")))?;
                crate::signgroup::GroupRing::new(sign)?.qpm
            }
            other => return Err(QpError::Semantic(format!("unknown qpm kind '{other}'"))),
        };
        q.check_axioms()?;
        self.qpms.insert(sec.name.clone(), q);
        Ok(())
    }

    fn parse_sign_group(&mut self, sec: &Section) -> Result<(), QpError> {
        let kind = sec
            .get("kind")
            .ok_or_else(|| QpError::Semantic("signgroup needs kind:".into()))?;
        let sg = match kind {
            "trivial" => SignGroup::trivial(),
            "z4" => {
                let eps = sec.get("eps").unwrap_or("-1");
                SignGroup::cyclic4(eps.trim() == "-1")
            }
            "split" => {
                let gspec = sec.get("group").unwrap_or("cyclic 2");
                let g = parse_group_spec(gspec, sec.get_line("group"))?;
                let eps_str = sec.get("eps").unwrap_or("");
                let eps: Result<Vec<i32>, _> = eps_str
                    .split_whitespace()
                    .map(|t| match t {
                        "1" | "+1" | "+" => Ok(1),
                        "-1" | "-" => Ok(-1),
                        other => Err(QpError::Semantic(format!("bad eps value '{other}'"))),
                    })
                    .collect();
                let mut eps = eps?;
                if eps.is_empty() {
                    eps = vec![1; g.order()];
                }
                SignGroup::split(g, eps)?
            }
            "symtrack" => {
                let n: usize = sec
                    .get("n")
                    .unwrap_or("3")
                    .trim()
                    .parse()
                    .map_err(|_| QpError::Semantic("bad n".into()))?;
                SignGroup::sym_track(n)?
            }
            other => {
                return Err(QpError::Semantic(format!("unknown signgroup kind '{other}'")))
            }
        };
        sg.validate()?;
        self.sign_groups.insert(sec.name.clone(), sg);
        Ok(())
    }

    fn parse_morphism(&mut self, sec: &Section) -> Result<(), QpError> {
        let kind = sec.get("kind").unwrap_or("sg");
        if kind != "sg" {
            return Err(QpError::Semantic("only sg morphisms are supported here".into()));
        }
        let sname = sec
            .get("source")
            .ok_or_else(|| QpError::Semantic("morphism needs source:".into()))?;
        let tname = sec
            .get("target")
            .ok_or_else(|| QpError::Semantic("morphism needs target:".into()))?;
        let src = self
            .square_groups
            .get(sname)
            .ok_or_else(|| QpError::Semantic(format!("unknown square group '{sname}'")))?
            .clone();
        let dst = self
            .square_groups
            .get(tname)
            .ok_or_else(|| QpError::Semantic(format!("unknown square group '{tname}'")))?
            .clone();
        let mut images = vec![Nil2Element::zero(&dst.e.basis); src.e.basis.len()];
        for (v, l) in sec.values("e") {
            let (lhs, rhs) = split_arrow(v, l)?;
            let i = src.e.basis.index_of(lhs.trim()).ok_or_else(|| {
                QpError::Semantic(format!("unknown source generator '{lhs}'"))
            })?;
            images[i] = parse_word_at(&rhs, l, 1)?.eval(&dst.e.basis)?;
        }
        let fe = Nil2Hom::new(src.e.basis.clone(), dst.e.basis.clone(), images);
        let mut fee = IntMatrix::zero(dst.ee.ngens, src.ee.ngens);
        let tgt_names: Vec<String> = (0..dst.ee.ngens).map(|k| format!("e{k}")).collect();
        for (v, l) in sec.values("ee") {
            let (lhs, rhs) = split_arrow(v, l)?;
            let k = ee_index(&lhs, src.ee.ngens, l)?;
            let col = parse_word_at(&rhs, l, 1)?.eval_abelian(&tgt_names)?;
            for t in 0..dst.ee.ngens {
                fee[(t, k)] = col[t].clone();
            }
        }
        let m = crate::sqgroup::SquareGroupMorphism { fe, fee };
        m.check(&src, &dst)?;
        self.sg_morphisms
            .insert(sec.name.clone(), (sname.to_string(), tname.to_string(), m));
        Ok(())
    }

    fn parse_track(&mut self, sec: &Section) -> Result<(), QpError> {
        let qname = sec
            .get("qpm")
            .ok_or_else(|| QpError::Semantic("track needs qpm:".into()))?;
        let c = self
            .qpms
            .get(qname)
            .ok_or_else(|| QpError::Semantic(format!("unknown qpm '{qname}'")))?
            .clone();
        // tracks over the identity morphism of the named qpm
        let f = crate::qpm::QpmMorphism::identity(&c);
        let mut alpha = vec![c.c1.zero(); c.c0.ngens()];
        for (v, l) in sec.values("alpha") {
            let (lhs, rhs) = split_arrow(v, l)?;
            let i = c.c0.basis.index_of(lhs.trim()).ok_or_else(|| {
                QpError::Semantic(format!("unknown C0 generator '{lhs}'"))
            })?;
            alpha[i] = parse_word_at(&rhs, l, 1)?.eval(&c.c1.basis)?;
        }
        let track = crate::tracks::track_from_alpha(&f, alpha, &c, &c)?;
        self.tracks.insert(sec.name.clone(), (qname.to_string(), track));
        Ok(())
    }

    /// Canonical re-emission; parse(print(file)) = print(file).
    pub fn print(&self, src_sections: &[Section]) -> String {
        let mut out = String::new();
        for sec in src_sections {
            let _ = writeln!(out, "[{} {}]", sec.kind, sec.name);
            for (k, v, _) in &sec.entries {
                let _ = writeln!(out, "{k}: {v}");
            }
            let _ = writeln!(out);
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (kind, name) in &self.order {
            let line = match kind.as_str() {
                "pointedset" => {
                    let p = &self.pointed_sets[name];
                    format!("pointedset {name}: {} elements", p.len())
                }
                "squaregroup" => {
                    let s = &self.square_groups[name];
                    format!(
                        "squaregroup {name}: e-gens {}, ee-gens {}, axioms ok, good: {}",
                        s.ngens(),
                        s.ee.ngens,
                        s.is_good()
                    )
                }
                "qpm" => {
                    let q = &self.qpms[name];
                    format!(
                        "qpm {name}: C0 gens {}, C1 gens {}, ee gens {}, axioms ok, 0-good: {}",
                        q.c0.ngens(),
                        q.c1.ngens(),
                        q.cee.ngens,
                        q.is_0good()
                    )
                }
                "signgroup" => {
                    let s = &self.sign_groups[name];
                    format!(
                        "signgroup {name}: |G⋉| = {}, |G| = {}",
                        s.gv.order(),
                        s.g.order()
                    )
                }
                "morphism" => {
                    let (s, t, _) = &self.sg_morphisms[name];
                    format!("morphism {name}: {s} -> {t}, checks ok")
                }
                "track" => {
                    let (q, _) = &self.tracks[name];
                    format!("track {name}: over qpm {q}, axioms ok")
                }
                _ => unreachable!(),
            };
            let _ = writeln!(out, "{line}");
        }
        out
    }
}

fn split_arrow(v: &str, line: usize) -> Result<(String, String), QpError> {
    match v.find("->") {
        Some(p) => Ok((v[..p].trim().to_string(), v[p + 2..].trim().to_string())),
        None => Err(QpError::Syntax { line, col: 1, msg: "expected 'lhs -> rhs'".into() }),
    }
}

fn ee_index(name: &str, ngens: usize, line: usize) -> Result<usize, QpError> {
    let t = name.trim();
    let idx = t
        .strip_prefix('e')
        .and_then(|r| r.parse::<usize>().ok())
        .ok_or_else(|| QpError::Syntax {
            line,
            col: 1,
            msg: format!("expected ee-generator 'e<k>', got '{t}'"),
        })?;
    if idx >= ngens {
        return Err(QpError::Semantic(format!("ee-generator e{idx} out of range")));
    }
    Ok(idx)
}

fn parse_ee_spec(spec: &str, line: usize) -> Result<AbGroupPresentation, QpError> {
    let mut it = spec.split_whitespace();
    match it.next() {
        Some("free") => {
            let n: usize = it
                .next()
                .unwrap_or("0")
                .parse()
                .map_err(|_| QpError::Syntax { line, col: 1, msg: "bad rank".into() })?;
            Ok(AbGroupPresentation::free(n))
        }
        Some("diag") => {
            let ds: Result<Vec<i64>, _> = it.map(|t| t.parse::<i64>()).collect();
            let ds = ds.map_err(|_| QpError::Syntax {
                line,
                col: 1,
                msg: "bad diagonal entry".into(),
            })?;
            Ok(AbGroupPresentation::diagonal(&ds))
        }
        _ => Err(QpError::Syntax { line, col: 1, msg: "ee must be 'free n' or 'diag d...'".into() }),
    }
}

fn parse_group_spec(spec: &str, line: usize) -> Result<FiniteGroup, QpError> {
    // "cyclic n" or "cyclic n x cyclic m"
    let parts: Vec<&str> = spec.split('x').map(|s| s.trim()).collect();
    let mut groups = Vec::new();
    for p in parts {
        let mut it = p.split_whitespace();
        match it.next() {
            Some("cyclic") => {
                let n: usize = it.next().unwrap_or("1").parse().map_err(|_| {
                    QpError::Syntax { line, col: 1, msg: "bad cyclic order".into() }
                })?;
                if n == 0 || n > 12 {
                    return Err(QpError::Semantic("cyclic order out of range".into()));
                }
                groups.push(FiniteGroup::cyclic(n));
            }
            _ => {
                return Err(QpError::Syntax {
                    line,
                    col: 1,
                    msg: "group must be 'cyclic n' factors joined by 'x'".into(),
                })
            }
        }
    }
    let mut g = groups[0].clone();
    for h in &groups[1..] {
        g = FiniteGroup::product(&g, h);
    }
    Ok(g)
}

/// Print a presented square group in the object format.
pub fn print_square_group(name: &str, sg: &SquareGroup, base_name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[pointedset {base_name}]");
    let _ = writeln!(out, "elements: {}", sg.e.basis.names.join(" "));
    let _ = writeln!(out);
    let _ = writeln!(out, "[squaregroup {name}]");
    let _ = writeln!(out, "kind: custom");
    let _ = writeln!(out, "base: {base_name}");
    for r in &sg.e.relators {
        let _ = writeln!(out, "erels: {}", r.display());
    }
    let (tor, rank) = sg.ee.invariants();
    if tor.is_empty() {
        let _ = writeln!(out, "ee: free {}", sg.ee.ngens);
        let _ = writeln!(out, "# ee group: free of rank {rank}");
    } else {
        let _ = writeln!(
            out,
            "# ee group: rank {rank}, torsion {:?} (presented on {} generators)",
            tor.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            sg.ee.ngens
        );
        let _ = writeln!(out, "ee: free {}", sg.ee.ngens);
    }
    let ee_names: Vec<String> = (0..sg.ee.ngens).map(|k| format!("e{k}")).collect();
    for (k, p) in sg.p.iter().enumerate() {
        let _ = writeln!(out, "P: e{k} -> {}", p.display());
    }
    for i in 0..sg.ngens() {
        let _ = writeln!(
            out,
            "H: {} -> {}",
            sg.e.basis.names[i],
            print_abelian(&sg.h.gen_values[i], &ee_names)
        );
    }
    for i in 0..sg.ngens() {
        for j in 0..sg.ngens() {
            let _ = writeln!(
                out,
                "cross: {} {} -> {}",
                sg.e.basis.names[i],
                sg.e.basis.names[j],
                print_abelian(&sg.h.cross[i][j], &ee_names)
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_parsing() {
        let e = PointedSet::new(vec!["a", "b"]);
        let w = parse_word("a + b - a + [a,b]").unwrap();
        let x = w.eval(&e).unwrap();
        let a = Nil2Element::gen(&e, 0);
        let b = Nil2Element::gen(&e, 1);
        let expect = a.mul(&b).mul(&a.inv()).mul(&a.commutator(&b));
        assert_eq!(x, expect);
        // coefficients
        let w = parse_word("2a - 3b").unwrap();
        let x = w.eval(&e).unwrap();
        assert_eq!(x, a.pow(&BigInt::from(2)).mul(&b.pow(&BigInt::from(-3))));
        // identity
        assert!(parse_word("0").unwrap().eval(&e).unwrap().is_zero());
        // malformed
        assert!(matches!(parse_word("a + [b"), Err(QpError::Syntax { .. })));
        assert!(matches!(parse_word("a ++"), Err(QpError::Syntax { .. })));
        assert!(parse_word("a + ]").is_err());
    }

    #[test]
    fn object_file_roundtrip() {
        let src = "\
[pointedset E]
elements: x y

[squaregroup Z]
kind: znil
base: E

[qpm C]
kind: zbar
";
        let secs = parse_sections(src).unwrap();
        let obj = ObjectFile::parse(src).unwrap();
        assert!(obj.square_groups.contains_key("Z"));
        assert!(obj.qpms.contains_key("C"));
        let printed = obj.print(&secs);
        let secs2 = parse_sections(&printed).unwrap();
        let obj2 = ObjectFile::parse(&printed).unwrap();
        let printed2 = obj2.print(&secs2);
        assert_eq!(printed, printed2, "canonical print must be stable");
    }

    #[test]
    fn empty_file_is_empty_object_set() {
        let obj = ObjectFile::parse("").unwrap();
        assert!(obj.order.is_empty());
    }

    #[test]
    fn unknown_key_rejected() {
        let src = "[pointedset E]\nelements: x\nbogus: 1\n";
        assert!(matches!(ObjectFile::parse(src), Err(QpError::Syntax { line: 3, .. })));
    }

    #[test]
    fn custom_square_group_axiom_checked() {
        // Z_nil written out by hand over one generator
        let src = "\
[pointedset E]
elements: x

[squaregroup X]
kind: custom
base: E
ee: free 1
P: e0 -> 0
H: x -> 0
cross: x x -> e0
";
        let obj = ObjectFile::parse(src).unwrap();
        assert!(obj.square_groups["X"].is_good());
        // a broken one: cross effect not killing P-images
        let bad = "\
[pointedset E]
elements: x

[squaregroup X]
kind: custom
base: E
ee: free 1
P: e0 -> x
H: x -> 0
cross: x x -> e0
";
        assert!(ObjectFile::parse(bad).is_err());
    }
}
