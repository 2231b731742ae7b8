//! Finite-group labels, infinite-algebra weights and the highest-weight maps between them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::pairs::{DualPairKind, PairFamily};
use crate::rational::{fmt_q, frac, parse_q, q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupTag {
    GL,
    /// O(2l)
    OEven,
    /// SO(2l)
    SOEven,
    /// O(2l+1)
    OOdd,
    /// Sp(2l)
    Sp,
    /// Spin(2l)
    SpinEven,
    /// Pin(2l)
    Pin,
    /// Spin(2l+1)
    SpinOdd,
    /// Osp(1,2l)
    Osp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupKind {
    pub tag: GroupTag,
    pub rank: usize,
}

/// Root system of the (super)algebra used for dimensions and characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootType {
    A,
    B,
    C,
    D,
}

impl GroupKind {
    pub fn new(tag: GroupTag, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Label("group rank must be positive".into()));
        }
        Ok(GroupKind { tag, rank })
    }

    pub fn root_type(&self) -> RootType {
        match self.tag {
            GroupTag::GL => RootType::A,
            GroupTag::OEven | GroupTag::SOEven | GroupTag::SpinEven | GroupTag::Pin => RootType::D,
            GroupTag::OOdd | GroupTag::SpinOdd | GroupTag::Osp => RootType::B,
            GroupTag::Sp => RootType::C,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.rank;
        match self.tag {
            GroupTag::GL => write!(f, "GL({l})"),
            GroupTag::OEven => write!(f, "O({})", 2 * l),
            GroupTag::SOEven => write!(f, "SO({})", 2 * l),
            GroupTag::OOdd => write!(f, "O({})", 2 * l + 1),
            GroupTag::Sp => write!(f, "Sp({})", 2 * l),
            GroupTag::SpinEven => write!(f, "Spin({})", 2 * l),
            GroupTag::Pin => write!(f, "Pin({})", 2 * l),
            GroupTag::SpinOdd => write!(f, "Spin({})", 2 * l + 1),
            GroupTag::Osp => write!(f, "Osp(1,{})", 2 * l),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("unknown group {s:?}"));
        let s = s.trim();
        let (name, rest) = s.split_once('(').ok_or_else(err)?;
        let arg = rest.strip_suffix(')').ok_or_else(err)?;
        if name == "Osp" {
            let n: usize = arg.strip_prefix("1,").ok_or_else(err)?.trim().parse().map_err(|_| err())?;
            if n % 2 != 0 {
                return Err(err());
            }
            return GroupKind::new(GroupTag::Osp, n / 2);
        }
        let n: usize = arg.trim().parse().map_err(|_| err())?;
        let even = n % 2 == 0;
        let (tag, rank) = match (name, even) {
            ("GL", _) => (GroupTag::GL, n),
            ("O", true) => (GroupTag::OEven, n / 2),
            ("O", false) => (GroupTag::OOdd, n / 2),
            ("SO", true) => (GroupTag::SOEven, n / 2),
            ("Sp", true) => (GroupTag::Sp, n / 2),
            ("Spin", true) => (GroupTag::SpinEven, n / 2),
            ("Spin", false) => (GroupTag::SpinOdd, n / 2),
            ("Pin", true) => (GroupTag::Pin, n / 2),
            _ => return Err(err()),
        };
        GroupKind::new(tag, rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    /// ĝl
    A,
    /// b∞
    B,
    /// b̃∞
    Bt,
    /// c∞
    C,
    /// d∞
    D,
}

impl AlgebraKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::A => "a",
            AlgebraKind::B => "b",
            AlgebraKind::Bt => "bt",
            AlgebraKind::C => "c",
            AlgebraKind::D => "d",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Ok(match s {
            "a" => AlgebraKind::A,
            "b" => AlgebraKind::B,
            "bt" => AlgebraKind::Bt,
            "c" => AlgebraKind::C,
            "d" => AlgebraKind::D,
            _ => return Err(Error::Parse(format!("unknown algebra {s:?}"))),
        })
    }

    /// Central charge as a functional of the coroot labels.
    pub fn level(self, h: &BTreeMap<i64, Q>) -> Q {
        let mut c = Q::zero();
        for (&i, v) in h {
            let weight = match (self, i) {
                (AlgebraKind::A, _) => Q::one(),
                (AlgebraKind::D, 0 | 1) => frac(1, 2),
                (AlgebraKind::B | AlgebraKind::Bt, 0) => frac(1, 2),
                _ => Q::one(),
            };
            c += weight * v;
        }
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpinShift {
    /// ½(1,…,1)
    Plus,
    /// ½(1,…,1,−1)
    Minus,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decorations {
    pub overline_last: bool,
    pub det_twist: bool,
    pub spin_shift: Option<SpinShift>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWeightLabel {
    pub group: GroupKind,
    pub parts: Vec<i64>,
    pub deco: Decorations,
}

impl FiniteWeightLabel {
    pub fn plain(group: GroupKind, parts: Vec<i64>) -> Self {
        FiniteWeightLabel { group, parts, deco: Decorations::default() }
    }

    pub fn with_overline(mut self) -> Self {
        self.deco.overline_last = true;
        self
    }

    pub fn with_det(mut self) -> Self {
        self.deco.det_twist = true;
        self
    }

    pub fn with_spin(mut self, s: SpinShift) -> Self {
        self.deco.spin_shift = Some(s);
        self
    }

    /// The trivial-like label of a pair's group (spin groups get the ½-shift).
    pub fn trivial(group: GroupKind) -> Self {
        let base = Self::plain(group, vec![0; group.rank]);
        match group.tag {
            GroupTag::Pin => base.with_spin(SpinShift::Plus).with_overline(),
            GroupTag::SpinOdd => base.with_spin(SpinShift::Plus),
            _ => base,
        }
    }

    /// #{parts ≥ 2}
    pub fn count_ge2(&self) -> usize {
        self.parts.iter().filter(|&&m| m >= 2).count()
    }

    /// #{parts ≥ 1}
    pub fn count_ge1(&self) -> usize {
        self.parts.iter().filter(|&&m| m >= 1).count()
    }

    /// Highest weight for the connected algebra, in the ε-basis.
    /// Overlined labels give the constituent with positive last entry.
    pub fn weight(&self) -> Vec<Q> {
        let mut w: Vec<Q> = self.parts.iter().map(|&m| q(m)).collect();
        if let Some(s) = self.deco.spin_shift {
            let n = w.len();
            for (k, x) in w.iter_mut().enumerate() {
                if s == SpinShift::Minus && k + 1 == n {
                    *x = -(x.clone()) - frac(1, 2);
                } else {
                    *x += frac(1, 2);
                }
            }
        }
        w
    }

    /// Algebra-level highest weights making up this label.
    pub fn constituent_weights(&self) -> Vec<Vec<Q>> {
        let w = self.weight();
        if self.deco.overline_last && matches!(self.group.tag, GroupTag::OEven | GroupTag::Pin) {
            let mut w2 = w.clone();
            let last = w2.last_mut().expect("rank ≥ 1");
            *last = -last.clone();
            vec![w, w2]
        } else {
            vec![w]
        }
    }

    pub fn to_text(&self) -> String {
        let mut body: Vec<String> = self.parts.iter().map(|m| m.to_string()).collect();
        if self.deco.overline_last {
            if let Some(last) = body.last_mut() {
                last.push('~');
            }
        }
        let prefix = match self.deco.spin_shift {
            None => "",
            Some(SpinShift::Plus) => "half+",
            Some(SpinShift::Minus) => "half-",
        };
        let det = if self.deco.det_twist { "*det" } else { "" };
        format!("{}:{}[{}]{}", self.group, prefix, body.join(","), det)
    }

    /// Parses the part after "Group:" for a known group.
    pub fn parse_for(group: GroupKind, s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("bad label {s:?}"));
        let mut rest = s.trim().replace('\u{2212}', "-");
        let mut deco = Decorations::default();
        if let Some(r) = rest.strip_suffix("*det") {
            deco.det_twist = true;
            rest = r.to_string();
        }
        if let Some(r) = rest.strip_prefix("half+") {
            deco.spin_shift = Some(SpinShift::Plus);
            rest = r.to_string();
        } else if let Some(r) = rest.strip_prefix("half-") {
            deco.spin_shift = Some(SpinShift::Minus);
            rest = r.to_string();
        }
        let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(err)?;
        let mut parts = Vec::new();
        if !inner.trim().is_empty() {
            let toks: Vec<&str> = inner.split(',').collect();
            for (k, tok) in toks.iter().enumerate() {
                let mut t = tok.trim();
                if let Some(r) = t.strip_suffix('~') {
                    if k + 1 != toks.len() {
                        return Err(err());
                    }
                    deco.overline_last = true;
                    t = r;
                }
                parts.push(t.parse::<i64>().map_err(|_| err())?);
            }
        }
        // Trailing zeros may be omitted.
        if parts.len() > group.rank {
            return Err(Error::Label(format!("{} parts for rank {}", parts.len(), group.rank)));
        }
        parts.resize(group.rank, 0);
        Ok(FiniteWeightLabel { group, parts, deco })
    }
}

impl fmt::Display for FiniteWeightLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for FiniteWeightLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (g, rest) = s
            .trim()
            .split_once("):")
            .ok_or_else(|| Error::Parse(format!("bad label {s:?}")))?;
        let group: GroupKind = format!("{g})").parse()?;
        Self::parse_for(group, rest)
    }
}

fn weakly_decreasing(p: &[i64]) -> bool {
    p.windows(2).all(|w| w[0] >= w[1])
}

/// Membership in the Σ-set of the label's group; `Err(reason)` otherwise.
pub fn validate_label(label: &FiniteWeightLabel) -> std::result::Result<(), String> {
    let g = label.group;
    let p = &label.parts;
    let d = label.deco;
    if p.len() != g.rank {
        return Err(format!("expected {} parts, got {}", g.rank, p.len()));
    }
    let last = *p.last().expect("rank ≥ 1");
    let nonneg_dec = || -> std::result::Result<(), String> {
        if !weakly_decreasing(p) {
            return Err("parts must be weakly decreasing".into());
        }
        if last < 0 {
            return Err("parts must be nonnegative".into());
        }
        Ok(())
    };
    let no_overline = || if d.overline_last { Err("overline not allowed for this group".to_string()) } else { Ok(()) };
    let no_det = || if d.det_twist { Err("det twist not allowed for this group".to_string()) } else { Ok(()) };
    let no_spin = || if d.spin_shift.is_some() { Err("spin shift only for Spin/Pin labels".to_string()) } else { Ok(()) };
    match g.tag {
        GroupTag::GL => {
            no_overline()?;
            no_det()?;
            no_spin()?;
            if !weakly_decreasing(p) {
                return Err("parts must be weakly decreasing".into());
            }
        }
        GroupTag::SOEven => {
            no_overline()?;
            no_det()?;
            no_spin()?;
            so_even_check(p)?;
        }
        GroupTag::OEven => {
            no_spin()?;
            nonneg_dec()?;
            if d.det_twist && last != 0 {
                return Err("det twist requires m_l = 0".into());
            }
            if d.overline_last && last == 0 {
                return Err("overline requires m_l > 0".into());
            }
            if last > 0 && !d.overline_last {
                return Err("m_l > 0 requires the overline decoration".into());
            }
        }
        GroupTag::OOdd => {
            no_spin()?;
            no_overline()?;
            nonneg_dec()?;
        }
        GroupTag::Sp | GroupTag::Osp => {
            no_spin()?;
            no_overline()?;
            no_det()?;
            nonneg_dec()?;
        }
        GroupTag::SpinEven => {
            no_overline()?;
            no_det()?;
            match d.spin_shift {
                None => so_even_check(p)?,
                Some(_) => nonneg_dec()?,
            }
        }
        GroupTag::Pin => {
            no_det()?;
            if d.spin_shift != Some(SpinShift::Plus) {
                return Err("Pin labels carry the half+ shift".into());
            }
            if !d.overline_last {
                return Err("Pin labels carry the overline decoration".into());
            }
            nonneg_dec()?;
        }
        GroupTag::SpinOdd => {
            no_overline()?;
            no_det()?;
            if d.spin_shift == Some(SpinShift::Minus) {
                return Err("Spin(2l+1) has no half- labels".into());
            }
            nonneg_dec()?;
        }
    }
    Ok(())
}

fn so_even_check(p: &[i64]) -> std::result::Result<(), String> {
    let l = p.len();
    if l >= 2 {
        if !weakly_decreasing(&p[..l - 1]) || p[l - 2] < p[l - 1].abs() {
            return Err("need m_1 ≥ … ≥ m_{l-1} ≥ |m_l|".into());
        }
    }
    Ok(())
}

/// Finitely supported combination of fundamental weights plus a central charge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InfiniteWeight {
    pub algebra: AlgebraKind,
    pub coeffs: BTreeMap<i64, Q>,
    pub charge: Q,
}

impl InfiniteWeight {
    pub fn new(algebra: AlgebraKind, charge: Q) -> Self {
        InfiniteWeight { algebra, coeffs: BTreeMap::new(), charge }
    }

    pub fn add(&mut self, i: i64, c: Q) {
        let e = self.coeffs.entry(i).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    fn with(mut self, terms: &[(i64, Q)]) -> Self {
        for (i, c) in terms {
            self.add(*i, c.clone());
        }
        self
    }

    /// Charge recomputed from the coroot labels.
    pub fn level(&self) -> Q {
        self.algebra.level(&self.coeffs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: serde_json::Map<String, serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(i, c)| {
                let v = match c.to_integer().to_i64() {
                    Some(n) if c.is_integer() => serde_json::Value::from(n),
                    _ => serde_json::Value::String(fmt_q(c)),
                };
                (i.to_string(), v)
            })
            .collect();
        serde_json::json!({
            "algebra": self.algebra.name(),
            "coeffs": coeffs,
            "charge": fmt_q(&self.charge),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let err = || Error::Parse("bad infinite weight JSON".into());
        let alg = AlgebraKind::from_name(v.get("algebra").and_then(|a| a.as_str()).ok_or_else(err)?)?;
        let charge = match v.get("charge").ok_or_else(err)? {
            serde_json::Value::String(s) => parse_q(s),
            serde_json::Value::Number(n) => parse_q(&n.to_string()),
            _ => None,
        }
        .ok_or_else(err)?;
        let mut w = InfiniteWeight::new(alg, charge);
        for (k, c) in v.get("coeffs").and_then(|c| c.as_object()).ok_or_else(err)? {
            let i: i64 = k.parse().map_err(|_| err())?;
            let c = match c {
                serde_json::Value::String(s) => parse_q(s),
                serde_json::Value::Number(n) => parse_q(&n.to_string()),
                _ => None,
            }
            .ok_or_else(err)?;
            w.add(i, c);
        }
        Ok(w)
    }
}

impl fmt::Display for InfiniteWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> =
            self.coeffs.iter().map(|(i, c)| format!("{}*L{}", fmt_q(c), i)).collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{}: {} @ {}", self.algebra.name(), body, fmt_q(&self.charge))
    }
}

/// h_k = w(H_k).
pub fn coroot_eval(w: &InfiniteWeight, k: i64) -> Result<Q> {
    if k < 0 && w.algebra != AlgebraKind::A {
        return Err(Error::CorootIndex { algebra: w.algebra.name().into(), index: k });
    }
    Ok(w.coeffs.get(&k).cloned().unwrap_or_else(Q::zero))
}

fn pair_err(pair: &DualPairKind, reason: &str) -> Error {
    Error::LabelPair { pair: pair.to_string(), reason: reason.into() }
}

/// The highest-weight map of the pair.
pub fn lambda_map(pair: &DualPairKind, label: &FiniteWeightLabel) -> Result<InfiniteWeight> {
    if label.group != pair.finite() {
        return Err(pair_err(pair, &format!("label group {} differs", label.group)));
    }
    validate_label(label).map_err(|r| pair_err(pair, &r))?;
    let l = pair.l as i64;
    let m = |k: usize| -> i64 { label.parts.get(k.wrapping_sub(1)).copied().unwrap_or(0) };
    let alg = pair.infinite();
    let charge = pair.cfg().central_charge();
    let w = InfiniteWeight::new(alg, charge);
    let i = label.count_ge2() as i64;
    let j = label.count_ge1() as i64;
    let det = label.deco.det_twist;
    // Σ_{k ≤ n} Λ_{m_k}
    let fund_sum = |n: i64| -> Vec<(i64, Q)> { (1..=n as usize).map(|k| (m(k), Q::one())).collect() };
    // Σ_{k=1}^{n} (m_k − m_{k+1}) Λ_k
    let steps = |n: usize| -> Vec<(i64, Q)> { (1..=n).map(|k| (k as i64, q(m(k) - m(k + 1)))).collect() };
    use PairFamily::*;
    let out = match pair.family {
        GlFermion => w.with(&fund_sum(l)),
        GlBoson => {
            // λ(E_kk): positive parts at k = 1..i, negative parts at k = 0, −1, … from the bottom.
            let lam = |k: i64| -> i64 {
                if k >= 1 {
                    let v = m(k as usize);
                    if k <= l && v > 0 { v } else { 0 }
                } else {
                    let t = -k;
                    if t < l {
                        let v = m((l - t) as usize);
                        if v < 0 { v } else { 0 }
                    } else {
                        0
                    }
                }
            };
            let terms: Vec<(i64, Q)> = (-l - 1..=l + 1)
                .map(|k| (k, q(lam(k) - lam(k + 1) - if k == 0 { l } else { 0 })))
                .collect();
            w.with(&terms)
        }
        OEvenD => {
            let (a0, a1) = if det { (j - i, 2 * l - i - j) } else { (2 * l - i - j, j - i) };
            w.with(&[(0, q(a0)), (1, q(a1))]).with(&fund_sum(i))
        }
        OOddD => {
            let (a0, a1) = if det { (j - i, 2 * l + 1 - i - j) } else { (2 * l + 1 - i - j, j - i) };
            w.with(&[(0, q(a0)), (1, q(a1))]).with(&fund_sum(i))
        }
        PinBt | PinB => w.with(&[(0, q(2 * l - 2 * j))]).with(&fund_sum(j)),
        SpinOddBt | SpinOddB => w.with(&[(0, q(2 * l + 1 - 2 * j))]).with(&fund_sum(j)),
        SpC => w.with(&[(0, q(l - j))]).with(&fund_sum(j)),
        OspC => w.with(&[(0, q(l - j) - frac(1, 2))]).with(&fund_sum(j)),
        SpD => w.with(&[(0, q(-2 * l - m(1) - m(2)))]).with(&steps(pair.l)),
        OspD => w.with(&[(0, q(-2 * l + 1 - m(1) - m(2)))]).with(&steps(pair.l)),
        OEvenC | OOddC => {
            let odd = pair.family == OOddC;
            let base0 = q(-l - m(1)) - if odd { frac(1, 2) } else { Q::zero() };
            let w = w.with(&[(0, base0)]);
            if !det {
                w.with(&steps(pair.l))
            } else {
                let ju = j as usize;
                let tail = 2 * l - j + if odd { 1 } else { 0 };
                let w = w.with(&steps(ju.saturating_sub(1)));
                w.with(&[(j, q(m(ju) - 1)), (tail, Q::one())])
            }
        }
    };
    debug_assert_eq!(out.level(), out.charge);
    Ok(out)
}

fn rho(rt: RootType, l: usize) -> Vec<Q> {
    (1..=l)
        .map(|i| {
            let base = q((l - i) as i64);
            match rt {
                RootType::A | RootType::D => base,
                RootType::B => base + frac(1, 2),
                RootType::C => base + Q::one(),
            }
        })
        .collect()
}

/// Positive roots in the ε-basis.
pub fn positive_roots(rt: RootType, l: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..l {
        for j in i + 1..l {
            let mut a = vec![0; l];
            a[i] = 1;
            a[j] = -1;
            out.push(a);
            if rt != RootType::A {
                let mut b = vec![0; l];
                b[i] = 1;
                b[j] = 1;
                out.push(b);
            }
        }
        match rt {
            RootType::B => {
                let mut a = vec![0; l];
                a[i] = 1;
                out.push(a);
            }
            RootType::C => {
                let mut a = vec![0; l];
                a[i] = 2;
                out.push(a);
            }
            _ => {}
        }
    }
    out
}

/// Weyl dimension of the connected (super)algebra module with highest weight `w`.
pub fn weyl_dim_weight(rt: RootType, w: &[Q]) -> Q {
    let l = w.len();
    let r = rho(rt, l);
    let mut num = Q::one();
    let mut den = Q::one();
    for a in positive_roots(rt, l) {
        let dot = |v: &[Q]| -> Q { v.iter().zip(&a).map(|(x, &c)| x * q(c)).sum() };
        let lr: Vec<Q> = w.iter().zip(&r).map(|(x, y)| x + y).collect();
        num *= dot(&lr);
        den *= dot(&r);
    }
    num / den
}

/// Dimension of the irreducible module labelled by `label`.
pub fn weyl_dim(group: GroupKind, label: &FiniteWeightLabel) -> Result<u64> {
    if label.group != group {
        return Err(Error::Label(format!("label {} is not for {}", label, group)));
    }
    validate_label(label).map_err(Error::Label)?;
    let rt = group.root_type();
    let total: Q = label.constituent_weights().iter().map(|w| weyl_dim_weight(rt, w)).sum();
    if !total.is_integer() || total.is_negative() {
        return Err(Error::Label(format!("non-integral dimension for {label}")));
    }
    total.to_integer().to_u64().ok_or_else(|| Error::Label("dimension overflow".into()))
}

/// Labels of the pair's group with all |parts| ≤ bound, in a deterministic order.
pub fn enumerate_labels(group: GroupKind, bound: i64) -> Vec<FiniteWeightLabel> {
    let l = group.rank;
    let mut tuples: Vec<Vec<i64>> = vec![vec![]];
    let lo = if group.tag == GroupTag::GL || group.tag == GroupTag::SOEven { -bound } else { 0 };
    for _ in 0..l {
        let mut next = Vec::new();
        for t in &tuples {
            for v in (lo..=bound).rev() {
                let mut u = t.clone();
                u.push(v);
                next.push(u);
            }
        }
        tuples = next;
    }
    let mut out = Vec::new();
    for p in tuples {
        let base = FiniteWeightLabel::plain(group, p.clone());
        let candidates: Vec<FiniteWeightLabel> = match group.tag {
            GroupTag::OEven => vec![base.clone(), base.clone().with_det(), base.with_overline()],
            GroupTag::OOdd => vec![base.clone(), base.with_det()],
            GroupTag::Pin => vec![base.with_spin(SpinShift::Plus).with_overline()],
            GroupTag::SpinOdd => vec![base.with_spin(SpinShift::Plus)],
            _ => vec![base],
        };
        out.extend(candidates.into_iter().filter(|c| validate_label(c).is_ok()));
    }
    out
}
