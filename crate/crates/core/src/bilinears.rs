//! Normal-ordered bilinears: the ĝl action, its b/b̃/c/d restrictions, horizontal
//! finite generators, the 2-cocycle and the outer elements τ, g.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{
    apply_mode_unchecked, apply_to_state, enumerate_states, vacuum, Field,
    FockState, IndexSet, Mode, Neutral, PairConfig, StateVector, Statistics,
};
use crate::pairs::{DualPairKind, PairFamily};
use crate::rational::{frac, q, sign, Q};
use crate::weights::AlgebraKind;

/// coeff · :left right:
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Q,
    pub left: Mode,
    pub right: Mode,
}

/// Σ terms + scalar·id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bilinear {
    pub terms: Vec<Term>,
    pub scalar: Q,
}

impl Bilinear {
    pub fn zero() -> Self {
        Bilinear { terms: Vec::new(), scalar: Q::zero() }
    }

    pub fn push(&mut self, coeff: Q, left: Mode, right: Mode) {
        if !coeff.is_zero() {
            self.terms.push(Term { coeff, left, right });
        }
    }

    pub fn extend_scaled(&mut self, other: &Bilinear, c: &Q) {
        for t in &other.terms {
            self.push(&t.coeff * c, t.left, t.right);
        }
        self.scalar += &other.scalar * c;
    }

    pub fn apply(&self, cfg: &PairConfig, v: &StateVector) -> StateVector {
        let vac = FockState::vacuum();
        let mut buf1 = Vec::new();
        let mut buf2 = Vec::new();
        let mut expectations = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            buf1.clear();
            apply_to_state(cfg, t.right, &vac, &mut buf1);
            let mut e = Q::zero();
            for (s, c) in buf1.drain(..) {
                buf2.clear();
                apply_to_state(cfg, t.left, &s, &mut buf2);
                for (u, k) in buf2.drain(..) {
                    if u.is_vacuum() {
                        e += k * &c;
                    }
                }
            }
            expectations.push(e);
        }
        let shift: Q = self
            .terms
            .iter()
            .zip(&expectations)
            .map(|(t, e)| &t.coeff * e)
            .sum::<Q>();
        let diag = &self.scalar - shift;
        let mut out = StateVector::zero();
        for (s, c) in v.iter() {
            for t in &self.terms {
                buf1.clear();
                apply_to_state(cfg, t.right, s, &mut buf1);
                for (u, k) in buf1.drain(..) {
                    buf2.clear();
                    apply_to_state(cfg, t.left, &u, &mut buf2);
                    let f = &k * c * &t.coeff;
                    for (w, k2) in buf2.drain(..) {
                        out.add_term(w, k2 * &f);
                    }
                }
            }
            if !diag.is_zero() {
                out.add_term(s.clone(), &diag * c);
            }
        }
        out
    }
}

/// Finitely supported matrix in gl(∞).
pub type GlMatrix = BTreeMap<(i64, i64), Q>;

pub fn unit(i: i64, j: i64) -> GlMatrix {
    BTreeMap::from([((i, j), Q::one())])
}

pub fn mat_add_scaled(a: &mut GlMatrix, b: &GlMatrix, c: &Q) {
    for (k, v) in b {
        let e = a.entry(*k).or_insert_with(Q::zero);
        *e += v * c;
        if e.is_zero() {
            a.remove(k);
        }
    }
}

pub fn mat_mul(a: &GlMatrix, b: &GlMatrix) -> GlMatrix {
    let mut out = GlMatrix::new();
    for (&(i, k), x) in a {
        for (&(k2, j), y) in b.range((k, i64::MIN)..=(k, i64::MAX)) {
            debug_assert_eq!(k, k2);
            mat_add_scaled(&mut out, &unit(i, j), &(x * y));
        }
    }
    out
}

pub fn mat_bracket(a: &GlMatrix, b: &GlMatrix) -> GlMatrix {
    let mut out = mat_mul(a, b);
    mat_add_scaled(&mut out, &mat_mul(b, a), &(-Q::one()));
    out
}

/// Tr([J,A]B) with J = Σ_{j≤0} E_jj.
pub fn cocycle(a: &GlMatrix, b: &GlMatrix) -> Q {
    let j = |i: i64| if i <= 0 { 1 } else { 0 };
    let mut out = Q::zero();
    for (&(i, k), x) in a {
        let f = j(i) - j(k);
        if f == 0 {
            continue;
        }
        if let Some(y) = b.get(&(k, i)) {
            out += q(f) * x * y;
        }
    }
    out
}

/// Mode pairing of Ê_ij: ψ^+_{½−i−ε} ψ^-_{j−½+ε} (doubled indices).
fn e_modes(eps2: i64, i: i64, j: i64) -> (i64, i64) {
    (1 - 2 * i - eps2, 2 * j - 1 + eps2)
}

/// Ê_ij on the charged fields (bosonic with the leading minus).
pub fn e_hat(cfg: &PairConfig, i: i64, j: i64) -> Bilinear {
    let (a, b) = e_modes(cfg.eps2(), i, j);
    let c = match cfg.stat {
        Statistics::Fermion => Q::one(),
        Statistics::Boson => -Q::one(),
    };
    let mut out = Bilinear::zero();
    for p in 1..=cfg.l {
        out.push(c.clone(), Mode::new(Field::plus(p), a), Mode::new(Field::minus(p), b));
    }
    out
}

/// Neutral contribution attached to a single matrix unit E_ij (half of the
/// generating-function coefficient, so combined generators get the full term).
fn neutral_half(cfg: &PairConfig, i: i64, j: i64) -> Bilinear {
    let mut out = Bilinear::zero();
    if cfg.neutral == Neutral::None {
        return out;
    }
    let (a, b) = e_modes(cfg.eps2(), i, j);
    let twist = match cfg.neutral {
        Neutral::Chi | Neutral::Varphi => sign(j.rem_euclid(2) == 1),
        _ => Q::one(),
    };
    out.push(frac(1, 2) * twist, Mode::new(Field::Neutral, a), Mode::new(Field::Neutral, b));
    out
}

pub fn check_algebra(cfg: &PairConfig, alg: AlgebraKind) -> Result<()> {
    let ok = match alg {
        AlgebraKind::A => !cfg.twisted && cfg.neutral == Neutral::None,
        AlgebraKind::D => !cfg.twisted && cfg.index == IndexSet::HalfInt,
        AlgebraKind::Bt => !cfg.twisted && cfg.index == IndexSet::Int,
        AlgebraKind::C => cfg.twisted && cfg.index == IndexSet::HalfInt,
        AlgebraKind::B => cfg.twisted && cfg.index == IndexSet::Int,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Inadmissible {
            generator: format!("{} algebra", alg.name()),
            reason: format!("does not act on {cfg}"),
        })
    }
}

/// ρ(X) for X in the subalgebra of type `alg`.
pub fn rho(cfg: &PairConfig, alg: AlgebraKind, x: &GlMatrix) -> Result<Bilinear> {
    check_algebra(cfg, alg)?;
    let mut out = Bilinear::zero();
    for (&(i, j), c) in x {
        out.extend_scaled(&e_hat(cfg, i, j), c);
        if alg != AlgebraKind::A {
            out.extend_scaled(&neutral_half(cfg, i, j), c);
        }
    }
    Ok(out)
}

pub fn apply_e(cfg: &PairConfig, i: i64, j: i64, v: &StateVector) -> StateVector {
    e_hat(cfg, i, j).apply(cfg, v)
}

/// Reflected index pair and sign s with generator E_ij − s·E_{i'j'}.
pub fn partner(alg: AlgebraKind, i: i64, j: i64) -> Option<(i64, i64, i64)> {
    let par = if (i + j).rem_euclid(2) == 0 { 1 } else { -1 };
    match alg {
        AlgebraKind::A => None,
        AlgebraKind::D => Some((1 - j, 1 - i, 1)),
        AlgebraKind::Bt => Some((-j, -i, 1)),
        AlgebraKind::C => Some((1 - j, 1 - i, par)),
        AlgebraKind::B => Some((-j, -i, par)),
    }
}

/// Generator of a b/b̃/c/d/ĝl algebra indexed by a matrix position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfiniteGen {
    pub algebra: AlgebraKind,
    pub i: i64,
    pub j: i64,
}

impl InfiniteGen {
    pub fn new(algebra: AlgebraKind, i: i64, j: i64) -> Self {
        InfiniteGen { algebra, i, j }
    }

    pub fn matrix(&self) -> GlMatrix {
        let mut m = unit(self.i, self.j);
        if let Some((a, b, s)) = partner(self.algebra, self.i, self.j) {
            mat_add_scaled(&mut m, &unit(a, b), &q(-s));
        }
        m
    }

    /// Canonical representative and the factor f with self = f·rep; `None` if zero.
    pub fn canonical(&self) -> Option<(InfiniteGen, i64)> {
        match partner(self.algebra, self.i, self.j) {
            None => Some((*self, 1)),
            Some((a, b, s)) => {
                if (a, b) == (self.i, self.j) {
                    return if s == 1 { None } else { Some((*self, 1)) };
                }
                if (self.i, self.j) < (a, b) {
                    Some((*self, 1))
                } else {
                    Some((InfiniteGen::new(self.algebra, a, b), -s))
                }
            }
        }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self.canonical(), Some((g, 1)) if g == *self)
    }

    /// Degree change is i − j; raising generators have i < j.
    pub fn shift(&self) -> i64 {
        self.i - self.j
    }
}

impl fmt::Display for InfiniteGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self.algebra {
            AlgebraKind::A => "E",
            other => other.name(),
        };
        write!(f, "{}[{},{}]", n, self.i, self.j)
    }
}

impl FromStr for InfiniteGen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("bad generator {s:?}"));
        let (name, rest) = s.trim().split_once('[').ok_or_else(err)?;
        let inner = rest.strip_suffix(']').ok_or_else(err)?;
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        let alg = if name == "E" { AlgebraKind::A } else { AlgebraKind::from_name(name)? };
        Ok(InfiniteGen::new(
            alg,
            a.trim().parse().map_err(|_| err())?,
            b.trim().parse().map_err(|_| err())?,
        ))
    }
}

pub fn apply_infinite_gen(cfg: &PairConfig, g: &InfiniteGen, v: &StateVector) -> Result<StateVector> {
    Ok(rho(cfg, g.algebra, &g.matrix())?.apply(cfg, v))
}

/// All nonzero canonical generators with indices in [lo, hi].
pub fn canonical_gens(alg: AlgebraKind, lo: i64, hi: i64) -> Vec<InfiniteGen> {
    let mut out = Vec::new();
    for i in lo..=hi {
        for j in lo..=hi {
            let g = InfiniteGen::new(alg, i, j);
            if g.is_canonical() {
                out.push(g);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteFamily {
    /// e^{pq} = :X^{-,p}(z) X^{-,q}(z):
    MinusMinus,
    /// e^{pq}_* = :X^{+,p}(z) X^{-,q}(z): + δ ε
    Star,
    /// e^{pq}_{**} = :X^{+,p}(z) X^{+,q}(z):
    PlusPlus,
    /// e^p = :X^{-,p}(z) N(z):
    Odd,
    /// e^p_* = :X^{+,p}(z) N(z):
    OddStar,
    /// ẽ^{pq} = :X^{-,p}(z) X^{-,q}(−z):
    TwMinusMinus,
    /// ẽ^{pq}_{**} = :X^{+,p}(z) X^{+,q}(−z):
    TwPlusPlus,
    /// ẽ^p = :X^{-,p}(z) N(z):
    TwOdd,
    /// ẽ^p_* = :X^{+,p}(z) N(−z):
    TwOddStar,
    /// ζ = :N(z) N(−z):
    Zeta,
}

impl FiniteFamily {
    fn name(self) -> &'static str {
        match self {
            FiniteFamily::MinusMinus => "e",
            FiniteFamily::Star => "e*",
            FiniteFamily::PlusPlus => "e**",
            FiniteFamily::Odd => "e",
            FiniteFamily::OddStar => "e*",
            FiniteFamily::TwMinusMinus => "et",
            FiniteFamily::TwPlusPlus => "ett",
            FiniteFamily::TwOdd => "et",
            FiniteFamily::TwOddStar => "et*",
            FiniteFamily::Zeta => "zeta",
        }
    }

    fn arity(self) -> usize {
        match self {
            FiniteFamily::MinusMinus
            | FiniteFamily::Star
            | FiniteFamily::PlusPlus
            | FiniteFamily::TwMinusMinus
            | FiniteFamily::TwPlusPlus => 2,
            FiniteFamily::Zeta => 0,
            _ => 1,
        }
    }

    /// Odd generators of a superalgebra (fermion × boson bilinears).
    pub fn mixes_neutral(self) -> bool {
        matches!(self, FiniteFamily::Odd | FiniteFamily::OddStar | FiniteFamily::TwOdd | FiniteFamily::TwOddStar)
    }
}

/// Fourier component of a finite-algebra generating function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteGen {
    pub family: FiniteFamily,
    pub p: usize,
    pub q: usize,
    pub fourier: i64,
}

impl FiniteGen {
    pub fn pair(family: FiniteFamily, p: usize, q: usize) -> Self {
        FiniteGen { family, p, q, fourier: 0 }
    }

    pub fn single(family: FiniteFamily, p: usize) -> Self {
        FiniteGen { family, p, q: 0, fourier: 0 }
    }

    pub fn zeta() -> Self {
        FiniteGen { family: FiniteFamily::Zeta, p: 0, q: 0, fourier: 0 }
    }

    pub fn at(mut self, n: i64) -> Self {
        self.fourier = n;
        self
    }

    pub fn check(&self, cfg: &PairConfig) -> Result<()> {
        use FiniteFamily::*;
        let bad = |reason: &str| {
            Err(Error::Inadmissible { generator: self.to_string(), reason: reason.into() })
        };
        let fl = |p: usize| p >= 1 && p <= cfg.l;
        match self.family.arity() {
            2 if !(fl(self.p) && fl(self.q)) => return bad("flavor out of range"),
            1 if !fl(self.p) => return bad("flavor out of range"),
            _ => {}
        }
        let twisted_family = matches!(self.family, TwMinusMinus | TwPlusPlus | TwOdd | TwOddStar | Zeta);
        if twisted_family != cfg.twisted && self.family != Star {
            return bad(if cfg.twisted { "untwisted family on a twisted row" } else { "twisted family on an untwisted row" });
        }
        if matches!(self.family, Odd | OddStar) && cfg.neutral != Neutral::Phi {
            return bad("needs the neutral field φ");
        }
        if matches!(self.family, TwOdd | TwOddStar | Zeta) && cfg.neutral == Neutral::None {
            return bad("needs a neutral field");
        }
        Ok(())
    }

    fn fields(&self) -> (Field, Field, bool) {
        use FiniteFamily::*;
        match self.family {
            MinusMinus => (Field::minus(self.p), Field::minus(self.q), false),
            Star => (Field::plus(self.p), Field::minus(self.q), false),
            PlusPlus => (Field::plus(self.p), Field::plus(self.q), false),
            Odd => (Field::minus(self.p), Field::Neutral, false),
            OddStar => (Field::plus(self.p), Field::Neutral, false),
            TwMinusMinus => (Field::minus(self.p), Field::minus(self.q), true),
            TwPlusPlus => (Field::plus(self.p), Field::plus(self.q), true),
            TwOdd => (Field::minus(self.p), Field::Neutral, false),
            TwOddStar => (Field::plus(self.p), Field::Neutral, true),
            Zeta => (Field::Neutral, Field::Neutral, true),
        }
    }

    /// Mode sum with every term that can act on states with |modes| ≤ bound2.
    pub fn bilinear(&self, cfg: &PairConfig, bound2: i64) -> Bilinear {
        let (x, y, reflect) = self.fields();
        let eps2 = cfg.eps2();
        let n2 = 2 * self.fourier;
        let reach = bound2 + n2.abs() + 2;
        let charged_pair = self.family.arity() == 2;
        let overall = if charged_pair && cfg.stat == Statistics::Boson { -Q::one() } else { Q::one() };
        let mut out = Bilinear::zero();
        let mut a2 = -reach;
        while a2 <= reach {
            let b2 = n2 - a2;
            if cfg.index.admits(a2) && b2.abs() <= reach {
                let mut c = overall.clone();
                if reflect {
                    // (−1)^{−b−½+ε}
                    let e = (-b2 - 1 + eps2) / 2;
                    c *= sign(e.rem_euclid(2) == 1);
                }
                out.push(c, Mode::new(x, a2), Mode::new(y, b2));
            }
            a2 += 1;
        }
        if self.family == FiniteFamily::Star && self.p == self.q && self.fourier == 0 {
            out.scalar = frac(eps2, 2);
        }
        out
    }
}

impl fmt::Display for FiniteGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family.arity() {
            2 => write!(f, "{}[{},{}]@{}", self.family.name(), self.p, self.q, self.fourier),
            1 => write!(f, "{}[{}]@{}", self.family.name(), self.p, self.fourier),
            _ => write!(f, "zeta@{}", self.fourier),
        }
    }
}

impl FromStr for FiniteGen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use FiniteFamily::*;
        let err = || Error::Parse(format!("bad finite generator {s:?}"));
        let (head, n) = s.trim().rsplit_once('@').unwrap_or((s.trim(), "0"));
        let n: i64 = n.parse().map_err(|_| err())?;
        if head == "zeta" {
            return Ok(FiniteGen::zeta().at(n));
        }
        let (name, rest) = head.split_once('[').ok_or_else(err)?;
        let inner = rest.strip_suffix(']').ok_or_else(err)?;
        let idx: Vec<usize> = inner
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| err()))
            .collect::<Result<_>>()?;
        let family = match (name, idx.len()) {
            ("e", 2) => MinusMinus,
            ("e*", 2) => Star,
            ("e**", 2) => PlusPlus,
            ("et", 2) => TwMinusMinus,
            ("ett", 2) => TwPlusPlus,
            ("e", 1) => Odd,
            ("e*", 1) => OddStar,
            ("et", 1) => TwOdd,
            ("et*", 1) => TwOddStar,
            _ => return Err(err()),
        };
        Ok(if idx.len() == 2 {
            FiniteGen::pair(family, idx[0], idx[1]).at(n)
        } else {
            FiniteGen::single(family, idx[0]).at(n)
        })
    }
}

pub fn apply_finite_gen(cfg: &PairConfig, g: &FiniteGen, v: &StateVector) -> Result<StateVector> {
    g.check(cfg)?;
    Ok(g.bilinear(cfg, v.max_mode2()).apply(cfg, v))
}

/// Horizontal finite (super)algebra of a pair, split by root sign.
#[derive(Clone, Debug, Default)]
pub struct Horizontal {
    pub cartan: Vec<FiniteGen>,
    pub raising: Vec<FiniteGen>,
    pub lowering: Vec<FiniteGen>,
}

impl Horizontal {
    pub fn all(&self) -> Vec<FiniteGen> {
        let mut v = self.cartan.clone();
        v.extend(self.raising.iter().copied());
        v.extend(self.lowering.iter().copied());
        v
    }

    /// Expected dimension of the algebra they span.
    pub fn expected_dim(pair: &DualPairKind) -> usize {
        let l = pair.l;
        use PairFamily::*;
        match pair.family {
            GlFermion | GlBoson => l * l,
            OEvenD | PinBt | PinB | OEvenC => l * (2 * l - 1),
            OOddD | SpinOddBt | SpinOddB | OOddC | SpC | SpD => l * (2 * l + 1),
            OspC | OspD => l * (2 * l + 1) + 2 * l,
        }
    }
}

/// Borel-adapted generators of the horizontal algebra of `pair`.
pub fn horizontal(pair: &DualPairKind) -> Horizontal {
    use FiniteFamily::*;
    use PairFamily::*;
    let l = pair.l;
    let mut h = Horizontal::default();
    for p in 1..=l {
        h.cartan.push(FiniteGen::pair(Star, p, p));
        for q in 1..=l {
            if p < q {
                h.raising.push(FiniteGen::pair(Star, p, q));
            } else if p > q {
                h.lowering.push(FiniteGen::pair(Star, p, q));
            }
        }
    }
    // Symmetric families include p = q.
    let quad = |h: &mut Horizontal, up: FiniteFamily, down: FiniteFamily, diag: bool| {
        for p in 1..=l {
            for q in p..=l {
                if p == q && !diag {
                    continue;
                }
                h.raising.push(FiniteGen::pair(up, p, q));
                h.lowering.push(FiniteGen::pair(down, p, q));
            }
        }
    };
    let odd = |h: &mut Horizontal, up: FiniteFamily, down: FiniteFamily| {
        for p in 1..=l {
            h.raising.push(FiniteGen::single(up, p));
            h.lowering.push(FiniteGen::single(down, p));
        }
    };
    match pair.family {
        GlFermion | GlBoson => {}
        OEvenD | PinBt => quad(&mut h, PlusPlus, MinusMinus, false),
        OOddD | SpinOddBt => {
            quad(&mut h, PlusPlus, MinusMinus, false);
            odd(&mut h, OddStar, Odd);
        }
        SpC => quad(&mut h, TwPlusPlus, TwMinusMinus, true),
        OspC => {
            quad(&mut h, TwPlusPlus, TwMinusMinus, true);
            odd(&mut h, TwOddStar, TwOdd);
        }
        PinB | OEvenC => quad(&mut h, TwPlusPlus, TwMinusMinus, false),
        SpinOddB | OOddC => {
            quad(&mut h, TwPlusPlus, TwMinusMinus, false);
            odd(&mut h, TwOddStar, TwOdd);
        }
        SpD => quad(&mut h, PlusPlus, MinusMinus, true),
        OspD => {
            quad(&mut h, PlusPlus, MinusMinus, true);
            odd(&mut h, OddStar, Odd);
        }
    }
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outer {
    /// Swap of the last charged pair.
    Tau,
    /// Sign on the neutral field.
    GDiag,
}

impl FromStr for Outer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "tau" => Ok(Outer::Tau),
            "gdiag" => Ok(Outer::GDiag),
            _ => Err(Error::Parse(format!("unknown outer element {s:?}"))),
        }
    }
}

/// τ acting through flavor `p`: ψ^{±,p}_n ↦ ψ^{∓,p}_n (ghosts: γ^{±,p}_n ↦ (−1)^{n+½} γ^{∓,p}_n).
pub fn tau_on_flavor(cfg: &PairConfig, p: usize, v: &StateVector) -> Result<StateVector> {
    if p == 0 || p > cfg.l {
        return Err(Error::Flavor { flavor: p, l: cfg.l });
    }
    if cfg.stat == Statistics::Boson && !cfg.twisted {
        return Err(Error::Inadmissible { generator: "tau".into(), reason: "needs fermions or twisted ghosts".into() });
    }
    let image = |m: Mode| -> (Mode, Q) {
        match m.field {
            Field::Charged { flavor, charge } if flavor == p => {
                let c = match cfg.stat {
                    Statistics::Fermion => Q::one(),
                    Statistics::Boson => sign(((m.index.0 + 1) / 2).rem_euclid(2) == 1),
                };
                (Mode::new(Field::Charged { flavor, charge: charge.flip() }, m.index.0), c)
            }
            _ => (m, Q::one()),
        }
    };
    let tau_vac = if cfg.stat == Statistics::Fermion && cfg.index == IndexSet::Int {
        apply_mode_unchecked(cfg, Mode::new(Field::minus(p), 0), &vacuum(cfg))
    } else {
        vacuum(cfg)
    };
    let mut out = StateVector::zero();
    for (s, c) in v.iter() {
        let mut w = tau_vac.clone();
        let mut coef = c.clone();
        let modes: Vec<Mode> = s.modes().collect();
        for &m in modes.iter().rev() {
            let (m2, k) = image(m);
            w = apply_mode_unchecked(cfg, m2, &w);
            coef *= k;
        }
        out.add_scaled(&w, &coef);
    }
    Ok(out)
}

pub fn apply_outer(cfg: &PairConfig, which: Outer, v: &StateVector) -> Result<StateVector> {
    match which {
        Outer::Tau => {
            if cfg.l == 0 {
                return Err(Error::Inadmissible { generator: "tau".into(), reason: "no charged pair".into() });
            }
            tau_on_flavor(cfg, cfg.l, v)
        }
        Outer::GDiag => {
            if cfg.neutral == Neutral::None {
                return Err(Error::Inadmissible { generator: "gdiag".into(), reason: "no neutral field".into() });
            }
            Ok(v.iter().map(|(s, c)| (s.clone(), sign(s.neutral_count() % 2 == 1) * c)).collect())
        }
    }
}

/// Scalar defect of a represented bracket together with the matrix cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketDefect {
    pub scalar: Q,
    pub cocycle: Q,
}

impl BracketDefect {
    /// scalar / cocycle when the cocycle is nonzero.
    pub fn central_charge(&self) -> Option<Q> {
        (!self.cocycle.is_zero()).then(|| &self.scalar / &self.cocycle)
    }
}

fn scalar_defect(
    cfg: &PairConfig,
    x: &Bilinear,
    y: &Bilinear,
    xy: &Bilinear,
    dmax2: i64,
    what: &str,
) -> Result<Q> {
    let mut scalar: Option<Q> = None;
    for s in enumerate_states(cfg, dmax2) {
        let v = StateVector::basis(s.clone());
        let mut d = x.apply(cfg, &y.apply(cfg, &v));
        d.sub(&y.apply(cfg, &x.apply(cfg, &v)));
        d.sub(&xy.apply(cfg, &v));
        let c = d.coeff(&s);
        if d.len() > 1 || (d.len() == 1 && c.is_zero()) {
            return Err(Error::NonScalarDefect(what.into()));
        }
        match &scalar {
            None => scalar = Some(c),
            Some(prev) if *prev != c => return Err(Error::NonScalarDefect(what.into())),
            _ => {}
        }
    }
    Ok(scalar.unwrap_or_else(Q::zero))
}

/// [Ê_ij, Ê_km] − (δ_jk Ê_im − δ_mi Ê_kj) on all states of degree ≤ d_max.
pub fn bracket_defect(
    cfg: &PairConfig,
    (i, j): (i64, i64),
    (k, m): (i64, i64),
    dmax2: i64,
) -> Result<BracketDefect> {
    bracket_defect_in(cfg, AlgebraKind::A, &unit(i, j), &unit(k, m), dmax2)
}

/// Same for arbitrary matrices of a subalgebra (including neutral terms).
pub fn bracket_defect_in(
    cfg: &PairConfig,
    alg: AlgebraKind,
    a: &GlMatrix,
    b: &GlMatrix,
    dmax2: i64,
) -> Result<BracketDefect> {
    let (ra, rb) = if alg == AlgebraKind::A {
        let lin = |m: &GlMatrix| {
            let mut out = Bilinear::zero();
            for (&(i, j), c) in m {
                out.extend_scaled(&e_hat(cfg, i, j), c);
            }
            out
        };
        (lin(a), lin(b))
    } else {
        (rho(cfg, alg, a)?, rho(cfg, alg, b)?)
    };
    let ab = mat_bracket(a, b);
    let rab = if alg == AlgebraKind::A {
        let mut out = Bilinear::zero();
        for (&(i, j), c) in &ab {
            out.extend_scaled(&e_hat(cfg, i, j), c);
        }
        out
    } else {
        rho(cfg, alg, &ab)?
    };
    let scalar = scalar_defect(cfg, &ra, &rb, &rab, dmax2, "bracket")?;
    Ok(BracketDefect { scalar, cocycle: cocycle(a, b) })
}

/// Simple coroot H_k as a matrix plus its coefficient on the central element.
pub fn coroot(alg: AlgebraKind, k: i64) -> Result<(GlMatrix, Q)> {
    if k < 0 && alg != AlgebraKind::A {
        return Err(Error::CorootIndex { algebra: alg.name().into(), index: k });
    }
    let mut m = GlMatrix::new();
    let mut put = |i: i64, c: i64| mat_add_scaled(&mut m, &unit(i, i), &q(c));
    let central = match (alg, k) {
        (AlgebraKind::A, _) => {
            put(k, 1);
            put(k + 1, -1);
            if k == 0 { 1 } else { 0 }
        }
        (AlgebraKind::D, 0) => {
            put(0, 1);
            put(1, -1);
            put(-1, 1);
            put(2, -1);
            2
        }
        (AlgebraKind::B | AlgebraKind::Bt, 0) => {
            put(-1, 2);
            put(1, -2);
            2
        }
        (AlgebraKind::C, 0) => {
            put(0, 1);
            put(1, -1);
            1
        }
        (AlgebraKind::D | AlgebraKind::C, _) => {
            put(k, 1);
            put(1 - k, -1);
            put(k + 1, -1);
            put(-k, 1);
            0
        }
        (AlgebraKind::B | AlgebraKind::Bt, _) => {
            put(k, 1);
            put(-k, -1);
            put(k + 1, -1);
            put(-k - 1, 1);
            0
        }
    };
    Ok((m, q(central)))
}

/// Eigenvalue of the coroot H_k (central part included) on `v`.
pub fn coroot_value(cfg: &PairConfig, alg: AlgebraKind, k: i64, v: &StateVector) -> Result<Q> {
    let (m, central) = coroot(alg, k)?;
    let w = rho(cfg, alg, &m)?.apply(cfg, v);
    let r = w.ratio_to(v).ok_or_else(|| Error::NotEigen(format!("coroot {k} of {}", alg.name())))?;
    Ok(r + central * cfg.central_charge())
}

/// Central charge read off from represented brackets of generators with nonzero cocycle.
pub fn measured_central_charge(cfg: &PairConfig, alg: AlgebraKind, dmax2: i64) -> Result<Q> {
    let gens = canonical_gens(alg, -1, 2);
    let mut found: Option<Q> = None;
    for x in gens.iter().filter(|g| g.i < g.j) {
        for y in gens.iter().filter(|g| g.i > g.j) {
            let d = bracket_defect_in(cfg, alg, &x.matrix(), &y.matrix(), dmax2)?;
            let c = match d.central_charge() {
                Some(c) => c,
                None if d.scalar.is_zero() => continue,
                None => return Err(Error::NonScalarDefect(format!("{x}, {y}: defect without cocycle"))),
            };
            match &found {
                Some(prev) if *prev != c => {
                    return Err(Error::NonScalarDefect(format!("{x}, {y}: charge {c} differs from {prev}")))
                }
                _ => found = Some(c),
            }
        }
    }
    found.ok_or_else(|| Error::NonScalarDefect("no generator pair with nonzero cocycle".into()))
}

/// Pairs (finite, infinite) whose commutator does not vanish on states of degree ≤ d_max.
/// Infinite generators are the canonical ones with |i|, |j| ≤ `bound`.
pub fn commutation_failures(pair: &DualPairKind, bound: i64, dmax2: i64) -> Result<Vec<String>> {
    let cfg = pair.cfg();
    let states = enumerate_states(&cfg, dmax2);
    let fins = horizontal(pair).all();
    let mut bad = Vec::new();
    for g in canonical_gens(pair.infinite(), -bound, bound) {
        for f in &fins {
            for s in &states {
                let v = StateVector::basis(s.clone());
                let a = apply_finite_gen(&cfg, f, &apply_infinite_gen(&cfg, &g, &v)?)?;
                let b = apply_infinite_gen(&cfg, &g, &apply_finite_gen(&cfg, f, &v)?)?;
                if a != b {
                    bad.push(format!("[{f}, {g}] on {s}"));
                    break;
                }
            }
        }
    }
    Ok(bad)
}

type OpMatrix = BTreeMap<(FockState, FockState), Q>;

fn op_matrix(cfg: &PairConfig, f: &FiniteGen, states: &[FockState]) -> Result<OpMatrix> {
    let mut m = OpMatrix::new();
    for s in states {
        for (t, c) in apply_finite_gen(cfg, f, &StateVector::basis(s.clone()))?.iter() {
            m.insert((t.clone(), s.clone()), c.clone());
        }
    }
    Ok(m)
}

fn op_mul(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    let mut by_row: BTreeMap<&FockState, Vec<(&FockState, &Q)>> = BTreeMap::new();
    for ((r, c), x) in b {
        by_row.entry(r).or_default().push((c, x));
    }
    let mut out = OpMatrix::new();
    for ((r, k), x) in a {
        if let Some(row) = by_row.get(k) {
            for (c, y) in row {
                let e = out.entry((r.clone(), (*c).clone())).or_insert_with(Q::zero);
                *e += x * *y;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Super-bracket [a, b} = ab − (−1)^{|a||b|} ba.
fn op_bracket(a: &OpMatrix, b: &OpMatrix, both_odd: bool) -> OpMatrix {
    let mut out = op_mul(a, b);
    let sgn = if both_odd { Q::one() } else { -Q::one() };
    for (k, v) in op_mul(b, a) {
        let e = out.entry(k).or_insert_with(Q::zero);
        *e += sgn.clone() * v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Dimension of the (super)bracket closure of the horizontal generators, as operators on
/// states of degree ≤ d_max.
pub fn horizontal_span_dim(pair: &DualPairKind, dmax2: i64) -> Result<usize> {
    let cfg = pair.cfg();
    let states = enumerate_states(&cfg, dmax2);
    let super_odd = |f: &FiniteGen| f.family.mixes_neutral() && cfg.charged_odd() != cfg.neutral_odd();
    let mut basis = crate::linalg::Echelon::new();
    let mut elems: Vec<(OpMatrix, bool)> = Vec::new();
    for f in horizontal(pair).all() {
        let m = op_matrix(&cfg, &f, &states)?;
        if basis.insert(m.clone()).is_some() {
            elems.push((m, super_odd(&f)));
        }
    }
    let mut i = 0;
    while i < elems.len() {
        for j in 0..=i {
            let (a, pa) = &elems[i];
            let (b, pb) = &elems[j];
            let c = op_bracket(a, b, *pa && *pb);
            if c.is_empty() {
                continue;
            }
            let parity = pa ^ pb;
            if basis.insert(c.clone()).is_some() {
                elems.push((c, parity));
            }
        }
        i += 1;
    }
    Ok(basis.rank())
}
