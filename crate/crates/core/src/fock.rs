//! Fock spaces of charged fermions/ghosts plus an optional neutral field.
//!
//! Mode indices are stored doubled. A basis state is a canonical product of
//! creation operators applied to the vacuum: flavor-major, `+` before `-`,
//! neutral last, modes decreasing inside each slot.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_doubled, fmt_q, frac, half, parse_q, sign, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistics {
    Fermion,
    Boson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexSet {
    /// ½+ℤ, ε = 0.
    HalfInt,
    /// ℤ, ε = ½.
    Int,
}

impl IndexSet {
    /// 2ε.
    pub fn eps2(self) -> i64 {
        match self {
            IndexSet::HalfInt => 0,
            IndexSet::Int => 1,
        }
    }

    pub fn admits(self, doubled: i64) -> bool {
        match self {
            IndexSet::HalfInt => doubled.rem_euclid(2) == 1,
            IndexSet::Int => doubled.rem_euclid(2) == 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Neutral {
    None,
    /// φ with [φ_m, φ_n]_+ = δ_{m+n,0}.
    Phi,
    /// ϕ with [ϕ_m, ϕ_n]_+ = (−1)^m δ_{m+n,0}, ℤ-indexed.
    Varphi,
    /// bosonic χ with [χ_m, χ_n] = (−1)^{m+½} δ_{m+n,0}, ½+ℤ-indexed.
    Chi,
}

impl Neutral {
    fn name(self) -> &'static str {
        match self {
            Neutral::None => "none",
            Neutral::Phi => "phi",
            Neutral::Varphi => "varphi",
            Neutral::Chi => "chi",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairConfig {
    pub l: usize,
    pub stat: Statistics,
    pub index: IndexSet,
    pub neutral: Neutral,
    pub twisted: bool,
}

impl PairConfig {
    pub fn new(
        l: usize,
        stat: Statistics,
        index: IndexSet,
        neutral: Neutral,
        twisted: bool,
    ) -> Result<Self> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if l == 0 && neutral == Neutral::None {
            return bad("empty Fock space: l = 0 without a neutral field");
        }
        if l > 16 {
            return bad("l larger than 16 is not supported");
        }
        if stat == Statistics::Boson && index == IndexSet::Int {
            return bad("bosonic ghosts are ½+ℤ-indexed");
        }
        match neutral {
            Neutral::Phi if twisted => return bad("φ only in untwisted rows"),
            Neutral::Chi if !twisted || index != IndexSet::HalfInt => {
                return bad("χ needs a twisted ½+ℤ row")
            }
            Neutral::Varphi if !twisted || index != IndexSet::Int => {
                return bad("ϕ needs a twisted ℤ row")
            }
            _ => {}
        }
        Ok(PairConfig { l, stat, index, neutral, twisted })
    }

    pub fn fermion(l: usize, index: IndexSet) -> Self {
        Self::new(l, Statistics::Fermion, index, Neutral::None, false).expect("valid row")
    }

    pub fn boson(l: usize) -> Self {
        Self::new(l, Statistics::Boson, IndexSet::HalfInt, Neutral::None, false).expect("valid row")
    }

    pub fn eps2(&self) -> i64 {
        self.index.eps2()
    }

    pub fn charged_odd(&self) -> bool {
        self.stat == Statistics::Fermion
    }

    pub fn neutral_odd(&self) -> bool {
        matches!(self.neutral, Neutral::Phi | Neutral::Varphi)
    }

    pub fn field_odd(&self, field: Field) -> bool {
        match field {
            Field::Charged { .. } => self.charged_odd(),
            Field::Neutral => self.neutral_odd(),
        }
    }

    pub fn field_admits(&self, field: Field, doubled: i64) -> bool {
        match field {
            Field::Charged { .. } => self.index.admits(doubled),
            Field::Neutral => match self.neutral {
                Neutral::None => false,
                Neutral::Phi => self.index.admits(doubled),
                Neutral::Varphi => IndexSet::Int.admits(doubled),
                Neutral::Chi => IndexSet::HalfInt.admits(doubled),
            },
        }
    }

    /// Central charge of the infinite-rank algebra acting on this space.
    pub fn central_charge(&self) -> Q {
        let charged = match self.stat {
            Statistics::Fermion => Q::from_integer((self.l as i64).into()),
            Statistics::Boson => Q::from_integer((-(self.l as i64)).into()),
        };
        let neutral = match self.neutral {
            Neutral::None => Q::zero(),
            Neutral::Phi | Neutral::Varphi => frac(1, 2),
            Neutral::Chi => frac(-1, 2),
        };
        charged + neutral
    }
}

impl fmt::Display for PairConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Fock(l={},{},{},neutral={},{})",
            self.l,
            match self.stat {
                Statistics::Fermion => "fermion",
                Statistics::Boson => "boson",
            },
            match self.index {
                IndexSet::HalfInt => "halfZ",
                IndexSet::Int => "Z",
            },
            self.neutral.name(),
            if self.twisted { "twisted" } else { "untwisted" }
        )
    }
}

impl FromStr for PairConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("bad configuration string {s:?}"));
        let body = s
            .trim()
            .strip_prefix("Fock(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(err)?;
        let mut l = None;
        let mut stat = None;
        let mut index = None;
        let mut neutral = Neutral::None;
        let mut twisted = false;
        for tok in body.split(',').map(str::trim) {
            match tok {
                "fermion" => stat = Some(Statistics::Fermion),
                "boson" => stat = Some(Statistics::Boson),
                "halfZ" => index = Some(IndexSet::HalfInt),
                "Z" => index = Some(IndexSet::Int),
                "twisted" => twisted = true,
                "untwisted" => twisted = false,
                _ => {
                    if let Some(v) = tok.strip_prefix("l=") {
                        l = Some(v.parse::<usize>().map_err(|_| err())?);
                    } else if let Some(v) = tok.strip_prefix("neutral=") {
                        neutral = match v {
                            "none" => Neutral::None,
                            "phi" => Neutral::Phi,
                            "varphi" => Neutral::Varphi,
                            "chi" => Neutral::Chi,
                            _ => return Err(err()),
                        };
                    } else {
                        return Err(err());
                    }
                }
            }
        }
        let stat = stat.ok_or_else(err)?;
        let index = index.unwrap_or(IndexSet::HalfInt);
        PairConfig::new(l.ok_or_else(err)?, stat, index, neutral, twisted)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Charge {
    Plus,
    Minus,
}

impl Charge {
    pub fn flip(self) -> Charge {
        match self {
            Charge::Plus => Charge::Minus,
            Charge::Minus => Charge::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// flavor is 1-based.
    Charged { flavor: usize, charge: Charge },
    Neutral,
}

impl Field {
    pub fn plus(flavor: usize) -> Field {
        Field::Charged { flavor, charge: Charge::Plus }
    }

    pub fn minus(flavor: usize) -> Field {
        Field::Charged { flavor, charge: Charge::Minus }
    }

    fn slot(self) -> u16 {
        match self {
            Field::Charged { flavor, charge } => {
                2 * (flavor as u16 - 1) + if charge == Charge::Plus { 0 } else { 1 }
            }
            Field::Neutral => NEUTRAL_SLOT,
        }
    }

    fn from_slot(slot: u16) -> Field {
        if slot == NEUTRAL_SLOT {
            Field::Neutral
        } else {
            let flavor = slot as usize / 2 + 1;
            let charge = if slot % 2 == 0 { Charge::Plus } else { Charge::Minus };
            Field::Charged { flavor, charge }
        }
    }
}

const NEUTRAL_SLOT: u16 = u16::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex(pub i64);

impl ModeIndex {
    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn value(self) -> Q {
        half(self.0)
    }
}

/// A single field mode, e.g. ψ^{+,1}_{−½}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub field: Field,
    pub index: ModeIndex,
}

impl Mode {
    pub fn new(field: Field, doubled: i64) -> Mode {
        Mode { field, index: ModeIndex(doubled) }
    }

    fn d(self) -> i64 {
        self.index.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Create,
    Annihilate,
    /// φ_0 or ϕ_0: squares to ½.
    SelfConjugate,
}

fn role(cfg: &PairConfig, m: Mode) -> Role {
    let d = m.d();
    match m.field {
        Field::Charged { charge, .. } => {
            if d < 0 || (d == 0 && charge == Charge::Minus) {
                Role::Create
            } else {
                Role::Annihilate
            }
        }
        Field::Neutral => {
            let _ = cfg;
            match d.cmp(&0) {
                std::cmp::Ordering::Less => Role::Create,
                std::cmp::Ordering::Greater => Role::Annihilate,
                std::cmp::Ordering::Equal => Role::SelfConjugate,
            }
        }
    }
}

/// [a, c]_± for an annihilator `a` moved past a creator `c`.
fn contraction(cfg: &PairConfig, a: Mode, c_slot: u16, c_mode: i64) -> Q {
    if a.d() + c_mode != 0 {
        return Q::zero();
    }
    let c_field = Field::from_slot(c_slot);
    match (a.field, c_field) {
        (
            Field::Charged { flavor: p, charge: s },
            Field::Charged { flavor: q, charge: t },
        ) if p == q && s != t => match cfg.stat {
            Statistics::Fermion => Q::one(),
            Statistics::Boson => sign(s == Charge::Minus),
        },
        (Field::Neutral, Field::Neutral) => match cfg.neutral {
            Neutral::Phi => Q::one(),
            Neutral::Varphi => sign((a.d() / 2).rem_euclid(2) == 1),
            Neutral::Chi => sign(((a.d() + 1) / 2).rem_euclid(2) == 1),
            Neutral::None => Q::zero(),
        },
        _ => Q::zero(),
    }
}

/// Canonical basis monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FockState {
    ops: Vec<(u16, i64)>,
}

fn precedes(a: (u16, i64), b: (u16, i64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 > b.1)
}

impl FockState {
    pub fn vacuum() -> Self {
        FockState { ops: Vec::new() }
    }

    pub fn is_vacuum(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        self.ops.iter().map(|&(s, d)| Mode::new(Field::from_slot(s), d))
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Twice the degree.
    pub fn degree2(&self) -> i64 {
        self.ops.iter().map(|&(_, d)| d.abs()).sum()
    }

    pub fn degree(&self) -> Q {
        half(self.degree2())
    }

    /// Largest |mode| (doubled) among occupied modes.
    pub fn max_mode2(&self) -> i64 {
        self.ops.iter().map(|&(_, d)| d.abs()).max().unwrap_or(0)
    }

    pub fn odd_count(&self, cfg: &PairConfig) -> usize {
        self.modes().filter(|m| cfg.field_odd(m.field)).count()
    }

    pub fn neutral_count(&self) -> usize {
        self.ops.iter().filter(|o| o.0 == NEUTRAL_SLOT).count()
    }

    /// Count of occupied ψ^{+,p} minus ψ^{-,p}.
    pub fn charge_of(&self, flavor: usize) -> i64 {
        let plus = Field::plus(flavor).slot();
        let minus = Field::minus(flavor).slot();
        self.ops
            .iter()
            .map(|o| {
                if o.0 == plus {
                    1
                } else if o.0 == minus {
                    -1
                } else {
                    0
                }
            })
            .sum()
    }

    fn odd_before(&self, cfg: &PairConfig, pos: usize) -> usize {
        self.ops[..pos]
            .iter()
            .filter(|o| cfg.field_odd(Field::from_slot(o.0)))
            .count()
    }

    fn from_sorted(ops: Vec<(u16, i64)>) -> Self {
        FockState { ops }
    }

    /// Builds a canonical state from creation modes given in canonical order.
    pub fn from_modes(cfg: &PairConfig, modes: &[Mode]) -> Result<Self> {
        let mut ops = Vec::with_capacity(modes.len());
        for &m in modes {
            check_mode(cfg, m)?;
            if role(cfg, m) == Role::Annihilate {
                return Err(Error::Parse(format!("{} is not a creation mode", mode_text(m))));
            }
            let key = (m.field.slot(), m.d());
            if let Some(&last) = ops.last() {
                let strict = cfg.field_odd(m.field);
                if !(precedes(last, key) || (!strict && last == key)) {
                    return Err(Error::Parse("modes not in canonical order".into()));
                }
            }
            ops.push(key);
        }
        Ok(FockState { ops })
    }

    pub fn to_text(&self) -> String {
        if self.ops.is_empty() {
            return "vac".into();
        }
        let mut groups: Vec<(u16, Vec<i64>)> = Vec::new();
        for &(s, d) in &self.ops {
            match groups.last_mut() {
                Some((gs, v)) if *gs == s => v.push(d),
                _ => groups.push((s, vec![d])),
            }
        }
        groups
            .iter()
            .map(|(s, v)| {
                let modes: Vec<String> = v.iter().map(|&d| fmt_doubled(d)).collect();
                format!("{}:[{}]", slot_name(*s), modes.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse(cfg: &PairConfig, s: &str) -> Result<Self> {
        let s = s.trim().replace('\u{2212}', "-");
        if s == "vac" || s.is_empty() {
            return Ok(FockState::vacuum());
        }
        let mut modes = Vec::new();
        for group in s.split_whitespace() {
            let (name, list) = group
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad group {group:?}")))?;
            let field = parse_slot_name(cfg, name)?;
            let inner = list
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("bad mode list {list:?}")))?;
            for tok in inner.split(',') {
                let v = parse_q(tok).ok_or_else(|| Error::Parse(format!("bad mode {tok:?}")))?;
                let d = crate::rational::to_doubled(&v)
                    .ok_or_else(|| Error::Parse(format!("mode {tok:?} not in ½ℤ")))?;
                modes.push(Mode::new(field, d));
            }
        }
        FockState::from_modes(cfg, &modes)
    }
}

fn slot_name(s: u16) -> String {
    match Field::from_slot(s) {
        Field::Neutral => "n".into(),
        Field::Charged { flavor, charge } => {
            format!("p{}{}", flavor, if charge == Charge::Plus { '+' } else { '-' })
        }
    }
}

fn parse_slot_name(cfg: &PairConfig, name: &str) -> Result<Field> {
    if name == "n" {
        if cfg.neutral == Neutral::None {
            return Err(Error::MissingField("neutral".into()));
        }
        return Ok(Field::Neutral);
    }
    let rest = name
        .strip_prefix('p')
        .ok_or_else(|| Error::Parse(format!("bad slot {name:?}")))?;
    let (num, ch) = rest.split_at(rest.len().saturating_sub(1));
    let flavor: usize = num.parse().map_err(|_| Error::Parse(format!("bad slot {name:?}")))?;
    if flavor == 0 || flavor > cfg.l {
        return Err(Error::Flavor { flavor, l: cfg.l });
    }
    match ch {
        "+" => Ok(Field::plus(flavor)),
        "-" => Ok(Field::minus(flavor)),
        _ => Err(Error::Parse(format!("bad slot {name:?}"))),
    }
}

pub fn mode_text(m: Mode) -> String {
    format!("{}_{}", slot_name(m.field.slot()), fmt_doubled(m.d()))
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Sparse exact linear combination of basis states.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StateVector {
    terms: BTreeMap<FockState, Q>,
}

impl StateVector {
    pub fn zero() -> Self {
        StateVector { terms: BTreeMap::new() }
    }

    pub fn basis(s: FockState) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(s, Q::one());
        StateVector { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &FockState) -> Q {
        self.terms.get(s).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, s: FockState, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &StateVector, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (s, v) in &other.terms {
            self.add_term(s.clone(), v * c);
        }
    }

    pub fn add(&mut self, other: &StateVector) {
        self.add_scaled(other, &Q::one());
    }

    pub fn sub(&mut self, other: &StateVector) {
        self.add_scaled(other, &(-Q::one()));
    }

    pub fn scaled(&self, c: &Q) -> StateVector {
        let mut out = StateVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn minus(&self, other: &StateVector) -> StateVector {
        let mut out = self.clone();
        out.sub(other);
        out
    }

    /// Leading (smallest) basis state.
    pub fn leading(&self) -> Option<(&FockState, &Q)> {
        self.terms.iter().next()
    }

    /// Common degree (doubled) of all terms, if homogeneous.
    pub fn homogeneous_degree2(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(FockState::degree2);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_mode2(&self) -> i64 {
        self.terms.keys().map(FockState::max_mode2).max().unwrap_or(0)
    }

    /// `Some(c)` when `self == c·other`.
    pub fn ratio_to(&self, other: &StateVector) -> Option<Q> {
        if other.is_zero() {
            return if self.is_zero() { Some(Q::zero()) } else { None };
        }
        let (s, c) = other.leading().expect("nonzero");
        let r = self.coeff(s) / c;
        (other.scaled(&r) == *self).then_some(r)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(s, c)| (s.to_text(), serde_json::Value::String(fmt_q(c))))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(cfg: &PairConfig, v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("state vector must be a JSON object".into()))?;
        let mut out = StateVector::zero();
        for (k, c) in obj {
            let s = FockState::parse(cfg, k)?;
            let c = match c {
                serde_json::Value::String(t) => parse_q(t),
                serde_json::Value::Number(n) => parse_q(&n.to_string()),
                _ => None,
            }
            .ok_or_else(|| Error::Parse(format!("bad coefficient for {k:?}")))?;
            out.add_term(s, c);
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(s, c)| format!("({}) {}", fmt_q(c), s))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl FromIterator<(FockState, Q)> for StateVector {
    fn from_iter<I: IntoIterator<Item = (FockState, Q)>>(iter: I) -> Self {
        let mut v = StateVector::zero();
        for (s, c) in iter {
            v.add_term(s, c);
        }
        v
    }
}

pub fn vacuum(_cfg: &PairConfig) -> StateVector {
    StateVector::basis(FockState::vacuum())
}

pub fn check_mode(cfg: &PairConfig, m: Mode) -> Result<()> {
    if let Field::Charged { flavor, .. } = m.field {
        if flavor == 0 || flavor > cfg.l {
            return Err(Error::Flavor { flavor, l: cfg.l });
        }
    } else if cfg.neutral == Neutral::None {
        return Err(Error::MissingField("neutral".into()));
    }
    if !cfg.field_admits(m.field, m.d()) {
        return Err(Error::ModeParity { doubled: m.d() });
    }
    Ok(())
}

/// One mode on one basis state; the caller guarantees admissibility.
pub(crate) fn apply_to_state(cfg: &PairConfig, m: Mode, s: &FockState, out: &mut Vec<(FockState, Q)>) {
    let odd = cfg.field_odd(m.field);
    let key = (m.field.slot(), m.d());
    let insert = |out: &mut Vec<(FockState, Q)>| {
        let pos = s.ops.partition_point(|&o| precedes(o, key) || (!odd && o == key));
        if odd && s.ops.get(pos) == Some(&key) {
            return;
        }
        let sgn = if odd { s.odd_before(cfg, pos) % 2 == 1 } else { false };
        let mut ops = Vec::with_capacity(s.ops.len() + 1);
        ops.extend_from_slice(&s.ops[..pos]);
        ops.push(key);
        ops.extend_from_slice(&s.ops[pos..]);
        out.push((FockState::from_sorted(ops), sign(sgn)));
    };
    match role(cfg, m) {
        Role::Create => insert(out),
        Role::SelfConjugate => {
            if let Some(pos) = s.ops.iter().position(|&o| o == key) {
                let sgn = s.odd_before(cfg, pos) % 2 == 1;
                let mut ops = s.ops.clone();
                ops.remove(pos);
                out.push((FockState::from_sorted(ops), sign(sgn) * frac(1, 2)));
            } else {
                insert(out);
            }
        }
        Role::Annihilate => {
            let mut odd_seen = 0usize;
            for (i, &(cs, cd)) in s.ops.iter().enumerate() {
                let c = contraction(cfg, m, cs, cd);
                if !c.is_zero() {
                    let sgn = odd && odd_seen % 2 == 1;
                    let mut ops = s.ops.clone();
                    ops.remove(i);
                    out.push((FockState::from_sorted(ops), sign(sgn) * c));
                }
                if cfg.field_odd(Field::from_slot(cs)) {
                    odd_seen += 1;
                }
            }
        }
    }
}

pub(crate) fn apply_mode_unchecked(cfg: &PairConfig, m: Mode, v: &StateVector) -> StateVector {
    let mut out = StateVector::zero();
    let mut buf = Vec::new();
    for (s, c) in &v.terms {
        buf.clear();
        apply_to_state(cfg, m, s, &mut buf);
        for (t, k) in buf.drain(..) {
            out.add_term(t, k * c);
        }
    }
    out
}

pub fn apply_mode(cfg: &PairConfig, field: Field, n: ModeIndex, v: &StateVector) -> Result<StateVector> {
    let m = Mode { field, index: n };
    check_mode(cfg, m)?;
    Ok(apply_mode_unchecked(cfg, m, v))
}

/// Applies `modes` right-to-left, i.e. the operator product as written.
pub fn apply_product(cfg: &PairConfig, modes: &[Mode], v: &StateVector) -> Result<StateVector> {
    let mut out = v.clone();
    for &m in modes.iter().rev() {
        check_mode(cfg, m)?;
        out = apply_mode_unchecked(cfg, m, &out);
    }
    Ok(out)
}

pub fn degree_of(s: &FockState) -> Q {
    s.degree()
}

/// Creation modes with |mode| ≤ d_max, in canonical order.
fn creation_modes(cfg: &PairConfig, dmax2: i64) -> Vec<Mode> {
    let mut fields: Vec<Field> = Vec::new();
    for p in 1..=cfg.l {
        fields.push(Field::plus(p));
        fields.push(Field::minus(p));
    }
    if cfg.neutral != Neutral::None {
        fields.push(Field::Neutral);
    }
    let mut out = Vec::new();
    for f in fields {
        let mut d = 0;
        while d >= -dmax2 {
            let m = Mode::new(f, d);
            if cfg.field_admits(f, d) && role(cfg, m) != Role::Annihilate {
                out.push(m);
            }
            d -= 1;
        }
    }
    out
}

/// All canonical states of degree ≤ d_max, ordered by (degree, canonical form).
pub fn enumerate_states(cfg: &PairConfig, dmax2: i64) -> Vec<FockState> {
    let modes = creation_modes(cfg, dmax2.max(0));
    let mut out = Vec::new();
    let mut cur: Vec<(u16, i64)> = Vec::new();
    fn rec(
        cfg: &PairConfig,
        modes: &[Mode],
        idx: usize,
        budget: i64,
        cur: &mut Vec<(u16, i64)>,
        out: &mut Vec<FockState>,
    ) {
        if idx == modes.len() {
            out.push(FockState::from_sorted(cur.clone()));
            return;
        }
        let m = modes[idx];
        let cost = m.d().abs();
        let max_mult = if cfg.field_odd(m.field) {
            1
        } else if cost == 0 {
            0
        } else {
            budget / cost
        };
        let mut k = 0;
        loop {
            rec(cfg, modes, idx + 1, budget - k * cost, cur, out);
            if k == max_mult || (k + 1) * cost > budget {
                break;
            }
            cur.push((m.field.slot(), m.d()));
            k += 1;
        }
        for _ in 0..k {
            cur.pop();
        }
    }
    rec(cfg, &modes, 0, dmax2.max(0), &mut cur, &mut out);
    out.sort_by(|a, b| a.degree2().cmp(&b.degree2()).then_with(|| a.cmp(b)));
    out
}

pub fn graded_dimension(cfg: &PairConfig, d2: i64) -> usize {
    if d2 < 0 {
        return 0;
    }
    enumerate_states(cfg, d2).iter().filter(|s| s.degree2() == d2).count()
}
