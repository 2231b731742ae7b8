//! Explicit highest weight vectors and their verification.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use crate::bilinears::{
    apply_finite_gen, apply_infinite_gen, apply_outer, canonical_gens, coroot_value, horizontal,
    Outer,
};
use crate::error::{Error, Result};
use crate::fock::{
    apply_mode_unchecked, vacuum, Charge, Field, IndexSet, Mode, Neutral, PairConfig, StateVector,
    Statistics,
};
use crate::pairs::{DualPairKind, PairFamily};
use crate::rational::{frac, to_i64, Q};
use crate::weights::{
    lambda_map, validate_label, AlgebraKind, FiniteWeightLabel, GroupTag, InfiniteWeight, SpinShift,
};

/// Linear combination of mode products; each product acts right to left.
#[derive(Clone, Debug, Default)]
pub struct OpPoly(pub Vec<(Q, Vec<Mode>)>);

impl OpPoly {
    pub fn monomial(modes: Vec<Mode>) -> Self {
        OpPoly(vec![(Q::one(), modes)])
    }

    pub fn apply(&self, cfg: &PairConfig, v: &StateVector) -> StateVector {
        let mut out = StateVector::zero();
        for (c, modes) in &self.0 {
            let mut w = v.clone();
            for &m in modes.iter().rev() {
                w = apply_mode_unchecked(cfg, m, &w);
                if w.is_zero() {
                    break;
                }
            }
            out.add_scaled(&w, c);
        }
        out
    }

    pub fn apply_power(&self, cfg: &PairConfig, power: i64, v: &StateVector) -> StateVector {
        (0..power).fold(v.clone(), |w, _| self.apply(cfg, &w))
    }
}

/// Laplace expansion along the first row; entries are (sign, mode) and commute.
pub fn determinant(rows: &[Vec<(Q, Mode)>]) -> OpPoly {
    fn go(rows: &[Vec<(Q, Mode)>], cols: &[usize]) -> Vec<(Q, Vec<Mode>)> {
        if rows.is_empty() {
            return vec![(Q::one(), Vec::new())];
        }
        let mut out = Vec::new();
        for (pos, &c) in cols.iter().enumerate() {
            let (s, m) = &rows[0][c];
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sign = if pos % 2 == 0 { s.clone() } else { -s.clone() };
            for (k, mut modes) in go(&rows[1..], &rest) {
                modes.insert(0, *m);
                out.push((&sign * k, modes));
            }
        }
        out
    }
    let n = rows.len();
    OpPoly(go(rows, &(0..n).collect::<Vec<_>>()))
}

fn need(cfg: &PairConfig, stat: Statistics, index: IndexSet, what: &str) -> Result<()> {
    if cfg.stat != stat || cfg.index != index {
        return Err(Error::Config(format!("{what} needs a different Fock space than {cfg}")));
    }
    Ok(())
}

fn check_flavor(cfg: &PairConfig, p: usize) -> Result<()> {
    if p == 0 || p > cfg.l {
        return Err(Error::Flavor { flavor: p, l: cfg.l });
    }
    Ok(())
}

fn field(p: usize, c: Charge) -> Field {
    Field::Charged { flavor: p, charge: c }
}

/// Ξ^{±,m}_i = ψ^{±,i}_{−m+½} ⋯ ψ^{±,i}_{−½}.
pub fn xi_op(cfg: &PairConfig, c: Charge, i: usize, m: i64) -> Result<OpPoly> {
    need(cfg, Statistics::Fermion, IndexSet::HalfInt, "Ξ")?;
    check_flavor(cfg, i)?;
    Ok(OpPoly::monomial((1..=m).rev().map(|k| Mode::new(field(i, c), 1 - 2 * k)).collect()))
}

pub fn xi_vector(cfg: &PairConfig, c: Charge, i: usize, m: i64) -> Result<StateVector> {
    Ok(xi_op(cfg, c, i, m)?.apply(cfg, &vacuum(cfg)))
}

/// Ξ^det_i = Π_{k>i} ψ^{+,k}_{−½} ψ^{−,k}_{−½}.
pub fn xi_det_op(cfg: &PairConfig, i: usize) -> Result<OpPoly> {
    need(cfg, Statistics::Fermion, IndexSet::HalfInt, "Ξ^det")?;
    let mut modes = Vec::new();
    for k in i + 1..=cfg.l {
        modes.push(Mode::new(Field::plus(k), -1));
        modes.push(Mode::new(Field::minus(k), -1));
    }
    Ok(OpPoly::monomial(modes))
}

/// Σ^{+,m}_i = ψ^{+,i}_{−m} ⋯ ψ^{+,i}_{−1};  Σ^{−,m}_i = ψ^{−,i}_{−m} ⋯ ψ^{−,i}_0.
pub fn sigma_op(cfg: &PairConfig, c: Charge, i: usize, m: i64) -> Result<OpPoly> {
    need(cfg, Statistics::Fermion, IndexSet::Int, "Σ")?;
    check_flavor(cfg, i)?;
    let lowest = match c {
        Charge::Plus => 1,
        Charge::Minus => 0,
    };
    Ok(OpPoly::monomial((lowest..=m).rev().map(|k| Mode::new(field(i, c), -2 * k)).collect()))
}

pub fn sigma_vector(cfg: &PairConfig, c: Charge, i: usize, m: i64) -> Result<StateVector> {
    Ok(sigma_op(cfg, c, i, m)?.apply(cfg, &vacuum(cfg)))
}

/// The bosonic determinantal building blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaKind {
    /// det of the i×i matrix of γ^{+,p}_{−c+½}, p, c ≤ i, to the m-th power.
    Plus { i: usize, m: i64 },
    /// Γ^{−,m}_i: flavors l, …, i of γ^-.
    Minus { i: usize, m: i64 },
    /// Γ^det_j, size 2l − j.
    Det { j: usize },
    /// Γ̃^{+,m}_l: last row replaced by signed γ^{−,l}.
    TildePlus { m: i64 },
    /// Γ̃^det_j with the χ column, size 2l − j + 1.
    TildeDet { j: usize },
}

fn row_sign(r: usize) -> Q {
    if r % 2 == 1 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn gamma_op(cfg: &PairConfig, kind: GammaKind) -> Result<(OpPoly, i64)> {
    need(cfg, Statistics::Boson, IndexSet::HalfInt, "Γ")?;
    let l = cfg.l;
    let mode = |f: Field, r: usize| Mode::new(f, 1 - 2 * r as i64);
    let range = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("{what} index out of range for l = {l}")))
        }
    };
    Ok(match kind {
        GammaKind::Plus { i, m } => {
            range(i >= 1 && i <= l, "Γ^+")?;
            let rows = (1..=i)
                .map(|p| (1..=i).map(|c| (Q::one(), mode(Field::plus(p), c))).collect())
                .collect::<Vec<Vec<_>>>();
            (determinant(&rows), m)
        }
        GammaKind::Minus { i, m } => {
            range(i >= 1 && i <= l, "Γ^-")?;
            let size = l + 1 - i;
            let rows = (0..size)
                .map(|r| (1..=size).map(|c| (Q::one(), mode(Field::minus(l - r), c))).collect())
                .collect::<Vec<Vec<_>>>();
            (determinant(&rows), m)
        }
        GammaKind::TildePlus { m } => {
            let mut rows = (1..l)
                .map(|p| (1..=l).map(|c| (Q::one(), mode(Field::plus(p), c))).collect())
                .collect::<Vec<Vec<_>>>();
            rows.push((1..=l).map(|c| (row_sign(c), mode(Field::minus(l), c))).collect());
            (determinant(&rows), m)
        }
        GammaKind::Det { j } | GammaKind::TildeDet { j } => {
            range(j <= l, "Γ^det")?;
            let with_chi = matches!(kind, GammaKind::TildeDet { .. });
            if with_chi && cfg.neutral != Neutral::Chi {
                return Err(Error::MissingField("χ".into()));
            }
            let size = 2 * l - j + usize::from(with_chi);
            let rows = (1..=size)
                .map(|r| {
                    let mut row: Vec<(Q, Mode)> =
                        (1..=l).map(|p| (Q::one(), mode(Field::plus(p), r))).collect();
                    row.extend((j + 1..=l).map(|p| (row_sign(r), mode(Field::minus(p), r))));
                    if with_chi {
                        row.push((Q::one(), mode(Field::Neutral, r)));
                    }
                    row
                })
                .collect::<Vec<_>>();
            (determinant(&rows), 1)
        }
    })
}

pub fn gamma_vector(cfg: &PairConfig, kind: GammaKind) -> Result<StateVector> {
    let (p, m) = gamma_op(cfg, kind)?;
    Ok(p.apply_power(cfg, m, &vacuum(cfg)))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Branch {
    #[default]
    Default,
    /// Last factor with positive charge.
    H1,
    /// Last factor with negative charge (or the Γ̃ variant).
    H2,
    /// Spin(2l+1): extra neutral zero mode, odd sector.
    Odd,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Default => "default",
            Branch::H1 => "h1",
            Branch::H2 => "h2",
            Branch::Odd => "odd",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "default" | "" => Ok(Branch::Default),
            "h1" => Ok(Branch::H1),
            "h2" => Ok(Branch::H2),
            "odd" => Ok(Branch::Odd),
            _ => Err(Error::Parse(format!("unknown branch {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HwvRecipe {
    pub pair: DualPairKind,
    pub label: FiniteWeightLabel,
    pub branch: Branch,
}

impl HwvRecipe {
    pub fn new(pair: DualPairKind, label: FiniteWeightLabel, branch: Branch) -> Result<Self> {
        let bad = |reason: String| Error::LabelPair { pair: pair.to_string(), reason };
        if label.group != pair.finite() {
            return Err(bad(format!("label group {} differs", label.group)));
        }
        validate_label(&label).map_err(bad)?;
        let paired = matches!(pair.finite().tag, GroupTag::OEven | GroupTag::Pin) && label.deco.overline_last;
        match branch {
            Branch::H1 | Branch::H2 if !paired => {
                return Err(bad(format!("branch {branch} needs an overlined label")))
            }
            Branch::Odd if !pair.splits_by_parity() => {
                return Err(bad("branch odd needs a Spin(2l+1) pair".into()))
            }
            _ => {}
        }
        Ok(HwvRecipe { pair, label, branch })
    }

    /// All recipes of a label: both branches for paired labels, both sectors for Spin(2l+1).
    pub fn all_for(pair: DualPairKind, label: FiniteWeightLabel) -> Result<Vec<Self>> {
        let paired = matches!(pair.finite().tag, GroupTag::OEven | GroupTag::Pin) && label.deco.overline_last;
        let branches: &[Branch] = if paired {
            &[Branch::H1, Branch::H2]
        } else if pair.splits_by_parity() {
            &[Branch::Default, Branch::Odd]
        } else {
            &[Branch::Default]
        };
        branches.iter().map(|&b| HwvRecipe::new(pair, label.clone(), b)).collect()
    }

    pub fn to_text(&self) -> String {
        let label = self.label.to_text();
        let body = label.split_once(':').map(|(_, b)| b).unwrap_or(&label);
        format!("pair={} label={} branch={}", self.pair, body, self.branch)
    }
}

impl FromStr for HwvRecipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pair = None;
        let mut label = None;
        let mut branch = Branch::Default;
        for tok in s.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("bad recipe token {tok:?}")))?;
            match k {
                "pair" => pair = Some(v.parse::<DualPairKind>()?),
                "label" => label = Some(v.to_string()),
                "branch" => branch = v.parse()?,
                _ => return Err(Error::Parse(format!("unknown recipe key {k:?}"))),
            }
        }
        let pair = pair.ok_or_else(|| Error::Parse("recipe needs pair=".into()))?;
        let label = label.ok_or_else(|| Error::Parse("recipe needs label=".into()))?;
        let label = FiniteWeightLabel::parse_for(pair.finite(), &label)?;
        HwvRecipe::new(pair, label, branch)
    }
}

impl fmt::Display for HwvRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// m_k with m_0 = +∞ never used and m_{l+1} = 0.
fn part(p: &[i64], k: usize) -> i64 {
    if k >= 1 && k <= p.len() {
        p[k - 1]
    } else {
        0
    }
}

/// Factors of the closed-form vector, left to right.
fn factors(r: &HwvRecipe) -> Result<Vec<(OpPoly, i64)>> {
    use PairFamily::*;
    let pair = r.pair;
    let cfg = pair.cfg();
    let l = pair.l;
    let p = &r.label.parts;
    let det = r.label.deco.det_twist;
    let j = p.iter().filter(|&&m| m != 0).count();
    let mut out: Vec<(OpPoly, i64)> = Vec::new();
    let neutral = |doubled: i64| OpPoly::monomial(vec![Mode::new(Field::Neutral, doubled)]);
    let gamma = |out: &mut Vec<(OpPoly, i64)>, kind: GammaKind| -> Result<()> {
        out.push(gamma_op(&cfg, kind)?);
        Ok(())
    };
    match pair.family {
        GlFermion => {
            for (k, &m) in p.iter().enumerate() {
                let c = if m >= 0 { Charge::Plus } else { Charge::Minus };
                out.push((xi_op(&cfg, c, k + 1, m.abs())?, 1));
            }
        }
        OEvenD | OOddD | SpC | OspC => {
            for (k, &m) in p.iter().enumerate() {
                let c = if k + 1 == l && r.branch == Branch::H2 { Charge::Minus } else { Charge::Plus };
                out.push((xi_op(&cfg, c, k + 1, m)?, 1));
            }
            if det {
                out.push((xi_det_op(&cfg, j)?, 1));
                if pair.family == OOddD {
                    out.push((neutral(-1), 1));
                }
            }
        }
        PinBt | PinB | SpinOddBt | SpinOddB => {
            for (k, &m) in p.iter().enumerate() {
                let c = if k + 1 == l && r.branch == Branch::H2 { Charge::Minus } else { Charge::Plus };
                out.push((sigma_op(&cfg, c, k + 1, m)?, 1));
            }
            if r.branch == Branch::Odd {
                out.push((neutral(0), 1));
            }
        }
        GlBoson => {
            let i = p.iter().filter(|&&m| m > 0).count();
            let jz = l - p.iter().filter(|&&m| m < 0).count();
            for k in 1..=i {
                let m = if k == i { part(p, k) } else { part(p, k) - part(p, k + 1) };
                gamma(&mut out, GammaKind::Plus { i: k, m })?;
            }
            for k in jz + 1..=l {
                let m = if k == jz + 1 { -part(p, k) } else { part(p, k - 1) - part(p, k) };
                gamma(&mut out, GammaKind::Minus { i: k, m })?;
            }
        }
        SpD | OspD => {
            for k in 1..=l {
                gamma(&mut out, GammaKind::Plus { i: k, m: part(p, k) - part(p, k + 1) })?;
            }
        }
        OEvenC | OOddC => {
            let tilde = pair.family == OOddC;
            if det {
                for k in 1..j {
                    gamma(&mut out, GammaKind::Plus { i: k, m: part(p, k) - part(p, k + 1) })?;
                }
                if j >= 1 {
                    gamma(&mut out, GammaKind::Plus { i: j, m: part(p, j) - 1 })?;
                }
                gamma(&mut out, if tilde { GammaKind::TildeDet { j } } else { GammaKind::Det { j } })?;
            } else {
                for k in 1..l {
                    gamma(&mut out, GammaKind::Plus { i: k, m: part(p, k) - part(p, k + 1) })?;
                }
                let m = part(p, l);
                if r.branch == Branch::H2 {
                    gamma(&mut out, GammaKind::TildePlus { m })?;
                } else {
                    gamma(&mut out, GammaKind::Plus { i: l, m })?;
                }
            }
        }
    }
    Ok(out)
}

pub fn build_hwv(recipe: &HwvRecipe) -> Result<StateVector> {
    let cfg = recipe.pair.cfg();
    let mut v = vacuum(&cfg);
    for (op, power) in factors(recipe)?.iter().rev() {
        v = op.apply_power(&cfg, *power, &v);
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v)
}

pub fn recipe_degree(recipe: &HwvRecipe) -> Result<Q> {
    let v = build_hwv(recipe)?;
    let d2 = v.homogeneous_degree2().ok_or_else(|| Error::Config("inhomogeneous vector".into()))?;
    Ok(frac(d2, 2))
}

/// Half-width of the index window that covers every generator able to act on `v`.
pub fn window(v: &StateVector, l: usize) -> i64 {
    (v.max_mode2() + 1) / 2 + 2 * l as i64 + 2
}

/// Positive-part generators of the infinite algebra within the window.
pub fn infinite_raising(alg: AlgebraKind, w: i64) -> Vec<crate::bilinears::InfiniteGen> {
    canonical_gens(alg, -w, w).into_iter().filter(|g| g.i < g.j).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HwvReport {
    /// Eigenvalues of the diagonal Cartans e^{pp}_*.
    pub finite_weight: Vec<Q>,
    pub infinite: InfiniteWeight,
}

fn eigen(v: &StateVector, w: &StateVector, what: &str) -> Result<Q> {
    w.ratio_to(v).ok_or_else(|| Error::NotEigen(what.into()))
}

pub fn finite_weight(pair: &DualPairKind, v: &StateVector) -> Result<Vec<Q>> {
    let cfg = pair.cfg();
    horizontal(pair)
        .cartan
        .iter()
        .map(|g| eigen(v, &apply_finite_gen(&cfg, g, v)?, &g.to_string()))
        .collect()
}

pub fn infinite_weight(pair: &DualPairKind, v: &StateVector) -> Result<InfiniteWeight> {
    let cfg = pair.cfg();
    let alg = pair.infinite();
    let w = window(v, pair.l);
    let lo = if alg == AlgebraKind::A { -w } else { 0 };
    let mut out = InfiniteWeight::new(alg, cfg.central_charge());
    for k in lo..=w {
        out.add(k, coroot_value(&cfg, alg, k, v)?);
    }
    Ok(out)
}

/// First raising generator (finite or infinite) not annihilating `v`.
pub fn first_non_annihilating(pair: &DualPairKind, v: &StateVector) -> Result<Option<String>> {
    let cfg = pair.cfg();
    for g in &horizontal(pair).raising {
        if !apply_finite_gen(&cfg, g, v)?.is_zero() {
            return Ok(Some(g.to_string()));
        }
    }
    for g in infinite_raising(pair.infinite(), window(v, pair.l)) {
        if !apply_infinite_gen(&cfg, &g, v)?.is_zero() {
            return Ok(Some(g.to_string()));
        }
    }
    Ok(None)
}

pub fn verify_hwv(pair: &DualPairKind, v: &StateVector) -> Result<HwvReport> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    if let Some(g) = first_non_annihilating(pair, v)? {
        return Err(Error::NotHighest(format!("{g} does not annihilate the vector")));
    }
    Ok(HwvReport { finite_weight: finite_weight(pair, v)?, infinite: infinite_weight(pair, v)? })
}

fn outer_sign(cfg: &PairConfig, which: Outer, v: &StateVector) -> Result<i64> {
    let w = apply_outer(cfg, which, v)?;
    let r = eigen(v, &w, if which == Outer::Tau { "tau" } else { "gdiag" })?;
    to_i64(&r).filter(|s| s.abs() == 1).ok_or_else(|| Error::NotEigen("outer element".into()))
}

fn int(x: &Q) -> Result<i64> {
    to_i64(x).ok_or_else(|| Error::Label(format!("non-integral weight entry {x}")))
}

/// Finite label of a joint hwv, using τ / g to fix det and overline decorations.
pub fn resolve_label(pair: &DualPairKind, v: &StateVector, weight: &[Q]) -> Result<FiniteWeightLabel> {
    let group = pair.finite();
    let cfg = pair.cfg();
    let half = frac(1, 2);
    let label = match group.tag {
        GroupTag::GL | GroupTag::Sp | GroupTag::Osp => {
            FiniteWeightLabel::plain(group, weight.iter().map(int).collect::<Result<_>>()?)
        }
        GroupTag::OEven | GroupTag::SOEven => {
            let parts: Vec<i64> = weight.iter().map(|x| int(x).map(i64::abs)).collect::<Result<_>>()?;
            let base = FiniteWeightLabel::plain(group, parts.clone());
            if parts.last().copied().unwrap_or(0) != 0 {
                base.with_overline()
            } else if outer_sign(&cfg, Outer::Tau, v)? == -1 {
                base.with_det()
            } else {
                base
            }
        }
        GroupTag::OOdd => {
            let base = FiniteWeightLabel::plain(group, weight.iter().map(int).collect::<Result<_>>()?);
            if outer_sign(&cfg, Outer::GDiag, v)? == -1 {
                base.with_det()
            } else {
                base
            }
        }
        GroupTag::Pin | GroupTag::SpinEven => {
            let n = weight.len();
            let parts: Vec<i64> = weight
                .iter()
                .enumerate()
                .map(|(k, x)| int(&(if k + 1 == n { x.abs() } else { x.clone() } - &half)))
                .collect::<Result<_>>()?;
            FiniteWeightLabel::plain(group, parts).with_spin(SpinShift::Plus).with_overline()
        }
        GroupTag::SpinOdd => {
            let parts: Vec<i64> = weight.iter().map(|x| int(&(x - &half))).collect::<Result<_>>()?;
            FiniteWeightLabel::plain(group, parts).with_spin(SpinShift::Plus)
        }
    };
    validate_label(&label).map_err(Error::Label)?;
    Ok(label)
}

/// Builds, verifies and cross-checks one recipe against the weight maps.
pub fn check_recipe(recipe: &HwvRecipe) -> Result<(StateVector, HwvReport)> {
    let v = build_hwv(recipe)?;
    let rep = verify_hwv(&recipe.pair, &v)?;
    let label = resolve_label(&recipe.pair, &v, &rep.finite_weight)?;
    if label != recipe.label {
        return Err(Error::Label(format!("vector carries {label}, recipe says {}", recipe.label)));
    }
    let expected = lambda_map(&recipe.pair, &recipe.label)?;
    if expected != rep.infinite {
        return Err(Error::Label(format!("infinite weight {} differs from the map value {expected}", rep.infinite)));
    }
    Ok((v, rep))
}
