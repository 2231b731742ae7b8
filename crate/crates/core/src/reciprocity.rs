//! See-saw reciprocity for O(2m) × O(2n) ⊂ O(2m+2n) against the diagonal d∞.
//!
//! The group side is a pure character computation; the algebra side counts joint highest
//! weight vectors inside the Fock space. Neither side consults the other.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::bilinears::{
    apply_finite_gen, apply_infinite_gen, apply_outer, canonical_gens, horizontal, tau_on_flavor,
    FiniteFamily, FiniteGen, Outer,
};
use crate::error::{Error, Result};
use crate::fock::{enumerate_states, FockState, PairConfig, StateVector};
use crate::hwv::infinite_weight;
use crate::linalg::{kernel_of_columns, solve_columns, Span, SparseVec};
use crate::pairs::{DualPairKind, PairFamily};
use crate::rational::{fmt_doubled, frac, parse_q, q, to_doubled, Q};
use crate::weights::{
    enumerate_labels, lambda_map, validate_label, FiniteWeightLabel, GroupKind, GroupTag, InfiniteWeight,
    RootType,
};

type Poly = BTreeMap<Vec<i64>, i64>;

fn poly_add_scaled(a: &mut Poly, b: &Poly, c: i64) {
    for (e, x) in b {
        let v = a.entry(e.clone()).or_insert(0);
        *v += c * x;
        if *v == 0 {
            a.remove(e);
        }
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, xa) in a {
        for (eb, xb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let v = out.entry(e.clone()).or_insert(0);
            *v += xa * xb;
            if *v == 0 {
                out.remove(&e);
            }
        }
    }
    out
}

fn poly_one(nvars: usize) -> Poly {
    Poly::from([(vec![0; nvars], 1)])
}

/// Torus character as a Laurent polynomial. Exponents are in units of `1/scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentCharacter {
    pub rank: usize,
    pub scale: i64,
    pub terms: BTreeMap<Vec<i64>, i64>,
}

impl LaurentCharacter {
    pub fn dimension(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn coeff(&self, exps: &[i64]) -> i64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    /// Invariance under the simple reflections of the root system.
    pub fn is_weyl_invariant(&self, rt: RootType) -> bool {
        let l = self.rank;
        let mut gens: Vec<Box<dyn Fn(&[i64]) -> Vec<i64>>> = Vec::new();
        for k in 0..l.saturating_sub(1) {
            gens.push(Box::new(move |e: &[i64]| {
                let mut v = e.to_vec();
                v.swap(k, k + 1);
                v
            }));
        }
        match rt {
            RootType::A => {}
            RootType::B | RootType::C => gens.push(Box::new(move |e: &[i64]| {
                let mut v = e.to_vec();
                v[l - 1] = -v[l - 1];
                v
            })),
            RootType::D if l >= 2 => gens.push(Box::new(move |e: &[i64]| {
                let mut v = e.to_vec();
                let (a, b) = (v[l - 2], v[l - 1]);
                v[l - 2] = -b;
                v[l - 1] = -a;
                v
            })),
            RootType::D => {}
        }
        gens.iter().all(|g| self.terms.iter().all(|(e, c)| self.coeff(&g(e)) == *c))
    }
}

impl fmt::Display for LaurentCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(if *c < 0 { " - " } else { " + " })?;
            } else if *c < 0 {
                f.write_str("-")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(k, &x)| {
                    let exp = if self.scale == 2 { fmt_doubled(x) } else { x.to_string() };
                    if exp == "1" {
                        format!("x{}", k + 1)
                    } else {
                        format!("x{}^{}", k + 1, exp)
                    }
                })
                .collect();
            let a = c.abs();
            match (a, mono.is_empty()) {
                (_, true) => write!(f, "{a}")?,
                (1, false) => write!(f, "{}", mono.join(" "))?,
                _ => write!(f, "{a} {}", mono.join(" "))?,
            }
        }
        Ok(())
    }
}

fn signed_perms(l: usize, rt: RootType) -> Vec<(Vec<usize>, Vec<i64>, i64)> {
    fn perms(l: usize) -> Vec<Vec<usize>> {
        if l == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(l - 1) {
            for pos in 0..=p.len() {
                let mut v = p.clone();
                v.insert(pos, l - 1);
                out.push(v);
            }
        }
        out
    }
    let perm_sign = |p: &[usize]| -> i64 {
        let mut s = 1;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    s = -s;
                }
            }
        }
        s
    };
    let mut out = Vec::new();
    for p in perms(l) {
        let ps = perm_sign(&p);
        let masks: Vec<u32> = match rt {
            RootType::A => vec![0],
            RootType::B | RootType::C => (0..1u32 << l).collect(),
            RootType::D => (0..1u32 << l).filter(|m| m.count_ones() % 2 == 0).collect(),
        };
        for mask in masks {
            let signs: Vec<i64> = (0..l).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            let flips = if rt == RootType::D { 1 } else { if mask.count_ones() % 2 == 1 { -1 } else { 1 } };
            out.push((p.clone(), signs, ps * flips));
        }
    }
    out
}

fn alternant(v: &[i64], weyl: &[(Vec<usize>, Vec<i64>, i64)]) -> Poly {
    let mut out = Poly::new();
    for (p, s, sg) in weyl {
        let e: Vec<i64> = (0..v.len()).map(|k| s[k] * v[p[k]]).collect();
        poly_add_scaled(&mut out, &Poly::from([(e, 1)]), *sg);
    }
    out
}

fn weyl_character(rt: RootType, weight2: &[i64], scale: i64) -> Result<Poly> {
    let l = weight2.len();
    let rho2: Vec<i64> = (0..l)
        .map(|i| {
            let base = 2 * (l - 1 - i) as i64;
            match rt {
                RootType::A | RootType::D => base,
                RootType::B => base + 1,
                RootType::C => base + 2,
            }
        })
        .collect();
    // A_{λ+ρ} / A_ρ, computed in doubled units.
    let weyl = signed_perms(l, rt);
    let lr: Vec<i64> = weight2.iter().zip(&rho2).map(|(a, b)| a + b).collect();
    let mut num = alternant(&lr, &weyl);
    let den = alternant(&rho2, &weyl);
    let (lead_e, lead_c) = den.iter().next_back().map(|(e, c)| (e.clone(), *c)).expect("nonzero denominator");
    let mut quot = Poly::new();
    let mut guard = 0usize;
    while let Some((e, c)) = num.iter().next_back().map(|(e, c)| (e.clone(), *c)) {
        guard += 1;
        if guard > 1_000_000 || c % lead_c != 0 {
            return Err(Error::Oracle("Weyl division did not terminate exactly".into()));
        }
        let qe: Vec<i64> = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
        let qc = c / lead_c;
        let term = Poly::from([(qe, qc)]);
        poly_add_scaled(&mut quot, &term, 1);
        poly_add_scaled(&mut num, &poly_mul(&term, &den), -1);
    }
    if scale == 2 {
        return Ok(quot);
    }
    if quot.keys().flatten().any(|x| x % 2 != 0) {
        return Err(Error::Oracle("half-integral exponent in an integral character".into()));
    }
    Ok(quot.into_iter().map(|(e, c)| (e.into_iter().map(|x| x / 2).collect(), c)).collect())
}

/// Character of the connected group (or of the superalgebra's even-rank torus for Osp).
/// Disconnected O-groups give the sum over their SO-constituents.
pub fn character(group: GroupKind, label: &FiniteWeightLabel) -> Result<LaurentCharacter> {
    if group.rank > 3 {
        return Err(Error::Oracle(format!("rank {} above the character guard", group.rank)));
    }
    if label.group != group {
        return Err(Error::Label(format!("label {label} is not for {group}")));
    }
    validate_label(label).map_err(Error::Label)?;
    let rt = group.root_type();
    let consts = label.constituent_weights();
    let doubled: Vec<Vec<i64>> = consts
        .iter()
        .map(|w| w.iter().map(|x| to_doubled(x).expect("labels are half-integral")).collect())
        .collect();
    let scale = if doubled.iter().flatten().any(|x| x % 2 != 0) { 2 } else { 1 };
    let mut terms = Poly::new();
    for w in &doubled {
        poly_add_scaled(&mut terms, &weyl_character(rt, w, scale)?, 1);
    }
    Ok(LaurentCharacter { rank: group.rank, scale, terms })
}

/// Orthogonal-group label as a partition; det-twisted labels use the associate partition.
fn o_partition(label: &FiniteWeightLabel) -> Result<Vec<usize>> {
    let n = match label.group.tag {
        GroupTag::OEven => 2 * label.group.rank,
        GroupTag::OOdd => 2 * label.group.rank + 1,
        _ => return Err(Error::Label(format!("{label} is not an orthogonal-group label"))),
    };
    validate_label(label).map_err(Error::Label)?;
    let base: Vec<usize> = label.parts.iter().filter(|&&m| m > 0).map(|&m| m as usize).collect();
    if !label.deco.det_twist {
        return Ok(base);
    }
    let mut conj = conjugate(&base);
    let len = base.len();
    if conj.is_empty() {
        conj.push(n - len);
    } else {
        conj[0] = n - len;
    }
    conj.sort_unstable_by(|a, b| b.cmp(a));
    Ok(conjugate(&conj))
}

fn conjugate(p: &[usize]) -> Vec<usize> {
    let top = p.first().copied().unwrap_or(0);
    (1..=top).map(|k| p.iter().filter(|&&x| x >= k).count()).collect()
}

/// Eigenvalue `sign · x^exp` of a group element in the defining representation.
#[derive(Clone, Debug)]
struct Eigen {
    sign: i64,
    exp: Vec<i64>,
}

/// Koike–Terada: o_λ = det(h_{λ_i−i+j} − h_{λ_i−i−j}) in the eigenvalues.
fn kt_character(partition: &[usize], eigs: &[Eigen], nvars: usize) -> Poly {
    let len = partition.len();
    if len == 0 {
        return poly_one(nvars);
    }
    let kmax = partition[0] + len;
    let mut h: Vec<Poly> = vec![Poly::new(); kmax + 1];
    h[0] = poly_one(nvars);
    for e in eigs {
        let mut next = vec![Poly::new(); kmax + 1];
        let mono = Poly::from([(e.exp.clone(), e.sign)]);
        for k in 0..=kmax {
            let mut acc = Poly::new();
            let mut pw = poly_one(nvars);
            for i in 0..=k {
                poly_add_scaled(&mut acc, &poly_mul(&pw, &h[k - i]), 1);
                pw = poly_mul(&pw, &mono);
            }
            next[k] = acc;
        }
        h = next;
    }
    let hk = |k: i64| -> Poly { if k < 0 || k as usize > kmax { Poly::new() } else { h[k as usize].clone() } };
    let mut m: Vec<Vec<Poly>> = Vec::with_capacity(len);
    for i in 1..=len {
        let base = partition[i - 1] as i64 - i as i64;
        m.push(
            (1..=len as i64)
                .map(|j| {
                    let mut e = hk(base + j);
                    poly_add_scaled(&mut e, &hk(base - j), -1);
                    e
                })
                .collect(),
        );
    }
    det_poly(&m, nvars)
}

fn det_poly(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    if n == 0 {
        return poly_one(nvars);
    }
    let mut out = Poly::new();
    for col in 0..n {
        if m[0][col].is_empty() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = poly_mul(&m[0][col], &det_poly(&minor, nvars));
        poly_add_scaled(&mut out, &term, if col % 2 == 0 { 1 } else { -1 });
    }
    out
}

/// Connected components of an orthogonal group, each with a torus parametrisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Component {
    Identity,
    /// O(2k): a reflection times a rank k−1 torus.
    Reflection,
    /// O(2k+1): −1 times the torus.
    Negative,
}

fn components(g: GroupKind) -> [Component; 2] {
    match g.tag {
        GroupTag::OEven => [Component::Identity, Component::Reflection],
        _ => [Component::Identity, Component::Negative],
    }
}

/// Defining-representation eigenvalues of a component element; variables `offset..offset+rank`.
fn component_eigs(g: GroupKind, c: Component, offset: usize, nvars: usize) -> Vec<Eigen> {
    let k = g.rank;
    let mono = |i: usize, s: i64, sign: i64| {
        let mut exp = vec![0; nvars];
        exp[offset + i] = s;
        Eigen { sign, exp }
    };
    let unit = |sign: i64| Eigen { sign, exp: vec![0; nvars] };
    let mut out = Vec::new();
    let (torus, sign) = match c {
        Component::Identity => (k, 1),
        Component::Reflection => (k - 1, 1),
        Component::Negative => (k, -1),
    };
    for i in 0..torus {
        out.push(mono(i, 1, sign));
        out.push(mono(i, -1, sign));
    }
    match (g.tag, c) {
        (GroupTag::OOdd, Component::Identity) => out.push(unit(1)),
        (GroupTag::OOdd, _) => out.push(unit(-1)),
        (_, Component::Reflection) => {
            out.push(unit(1));
            out.push(unit(-1));
        }
        _ => {}
    }
    out
}

type ExtChar = BTreeMap<(Component, Component), Poly>;

fn restricted_ext(big: &FiniteWeightLabel, g1: GroupKind, g2: GroupKind) -> Result<ExtChar> {
    let part = o_partition(big)?;
    let nvars = g1.rank + g2.rank;
    let mut out = ExtChar::new();
    for c1 in components(g1) {
        for c2 in components(g2) {
            let mut eigs = component_eigs(g1, c1, 0, nvars);
            eigs.extend(component_eigs(g2, c2, g1.rank, nvars));
            out.insert((c1, c2), kt_character(&part, &eigs, nvars));
        }
    }
    Ok(out)
}

fn product_ext(mu: &FiniteWeightLabel, nu: &FiniteWeightLabel) -> Result<ExtChar> {
    let (g1, g2) = (mu.group, nu.group);
    let nvars = g1.rank + g2.rank;
    let (pm, pn) = (o_partition(mu)?, o_partition(nu)?);
    let mut out = ExtChar::new();
    for c1 in components(g1) {
        for c2 in components(g2) {
            let a = kt_character(&pm, &component_eigs(g1, c1, 0, nvars), nvars);
            let b = kt_character(&pn, &component_eigs(g2, c2, g1.rank, nvars), nvars);
            out.insert((c1, c2), poly_mul(&a, &b));
        }
    }
    Ok(out)
}

/// Labels of an O-group whose SO-character has dominant highest weight `w`.
fn labels_with_top(g: GroupKind, w: &[i64]) -> Result<Vec<FiniteWeightLabel>> {
    let last = *w.last().expect("rank ≥ 1");
    let base = FiniteWeightLabel::plain(g, w.to_vec());
    let out = match g.tag {
        GroupTag::OEven if last > 0 => vec![base.with_overline()],
        _ => vec![base.clone(), base.with_det()],
    };
    for l in &out {
        validate_label(l).map_err(|r| Error::Oracle(format!("non-dominant top weight {w:?}: {r}")))?;
    }
    Ok(out)
}

/// Full decomposition of `big` restricted to O(2m) × O(2n) (or O(2m) × O(2n+1)).
pub fn branch_decomposition(
    big: &FiniteWeightLabel,
    g1: GroupKind,
    g2: GroupKind,
) -> Result<Vec<(FiniteWeightLabel, FiniteWeightLabel, u64)>> {
    check_embedding(big.group, g1, g2)?;
    if g1.rank > 2 || g2.rank > 2 {
        return Err(Error::Oracle("branching supports ranks ≤ 2".into()));
    }
    let target = restricted_ext(big, g1, g2)?;
    // SO × SO classes by greedy highest-weight peeling of the identity component.
    let mut rest = target[&(Component::Identity, Component::Identity)].clone();
    let mut candidates: Vec<(FiniteWeightLabel, FiniteWeightLabel)> = Vec::new();
    while let Some((e, c)) = rest.iter().next_back().map(|(e, c)| (e.clone(), *c)) {
        if c < 0 {
            return Err(Error::Oracle(format!("negative leading coefficient at {e:?}")));
        }
        let (a, b) = e.split_at(g1.rank);
        let mus = labels_with_top(g1, a)?;
        let nus = labels_with_top(g2, b)?;
        let ext = product_ext(&mus[0], &nus[0])?;
        poly_add_scaled(&mut rest, &ext[&(Component::Identity, Component::Identity)], -c);
        for mu in &mus {
            for nu in &nus {
                candidates.push((mu.clone(), nu.clone()));
            }
        }
    }
    // Separate det twists with the other components.
    let key = |comp: &(Component, Component), e: &Vec<i64>| (*comp, e.clone());
    let flatten = |x: &ExtChar| -> SparseVec<((Component, Component), Vec<i64>)> {
        x.iter()
            .flat_map(|(comp, p)| p.iter().map(move |(e, c)| (key(comp, e), q(*c))))
            .collect()
    };
    let cols: Vec<_> = candidates
        .iter()
        .map(|(mu, nu)| product_ext(mu, nu).map(|x| flatten(&x)))
        .collect::<Result<_>>()?;
    let tgt = flatten(&target);
    if !kernel_of_columns(&cols).is_empty() {
        return Err(Error::Oracle("candidate characters are linearly dependent".into()));
    }
    let sol = solve_columns(&cols, &tgt).ok_or_else(|| Error::Oracle("restricted character not reconstructed".into()))?;
    let mut out = Vec::new();
    for ((mu, nu), x) in candidates.into_iter().zip(sol) {
        if x.is_negative() || !x.is_integer() {
            return Err(Error::Oracle(format!("non-integral multiplicity {x} at {mu} ⊗ {nu}")));
        }
        let k = x.to_integer().to_u64().expect("small multiplicity");
        if k > 0 {
            out.push((mu, nu, k));
        }
    }
    Ok(out)
}

fn check_embedding(big: GroupKind, g1: GroupKind, g2: GroupKind) -> Result<()> {
    let ok = g1.tag == GroupTag::OEven
        && g1.rank + g2.rank == big.rank
        && matches!(
            (big.tag, g2.tag),
            (GroupTag::OEven, GroupTag::OEven) | (GroupTag::OOdd, GroupTag::OOdd)
        );
    if ok {
        Ok(())
    } else {
        Err(Error::Label(format!("{g1} × {g2} is not a block subgroup of {big}")))
    }
}

/// One see-saw instance: λ for O(2m+2n) (or O(2m+2n+1)), μ for O(2m), ν for O(2n) (or O(2n+1)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeesawCase {
    pub m: usize,
    pub n: usize,
    pub lambda: FiniteWeightLabel,
    pub mu: FiniteWeightLabel,
    pub nu: FiniteWeightLabel,
    /// Doubled degree window.
    pub dmax2: i64,
}

/// O(2k) labels written without the overline get it when m_k > 0.
fn normalize_label(mut l: FiniteWeightLabel) -> FiniteWeightLabel {
    if l.group.tag == GroupTag::OEven && l.parts.last().is_some_and(|&x| x > 0) {
        l.deco.overline_last = true;
    }
    l
}

impl SeesawCase {
    pub fn new(
        m: usize,
        n: usize,
        lambda: FiniteWeightLabel,
        mu: FiniteWeightLabel,
        nu: FiniteWeightLabel,
        dmax2: i64,
    ) -> Result<Self> {
        let (lambda, mu, nu) = (normalize_label(lambda), normalize_label(mu), normalize_label(nu));
        for l in [&lambda, &mu, &nu] {
            validate_label(l).map_err(|r| Error::Label(format!("{l}: {r}")))?;
        }
        if mu.group.rank != m || nu.group.rank != n {
            return Err(Error::Label(format!("ranks of {mu}, {nu} do not match (m,n) = ({m},{n})")));
        }
        check_embedding(lambda.group, mu.group, nu.group)?;
        if dmax2 < 0 {
            return Err(Error::Config("negative d_max".into()));
        }
        Ok(SeesawCase { m, n, lambda, mu, nu, dmax2 })
    }

    pub fn odd(&self) -> bool {
        self.lambda.group.tag == GroupTag::OOdd
    }

    /// The dual pair on the full Fock space carrying both finite groups.
    pub fn big_pair(&self) -> DualPairKind {
        let fam = if self.odd() { PairFamily::OOddD } else { PairFamily::OEvenD };
        DualPairKind::new(fam, self.m + self.n).expect("ranks ≤ 8")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("seesaw case: {what}"));
        let int = |k: &str| -> Result<usize> {
            v.get(k).and_then(|x| x.as_u64()).map(|x| x as usize).ok_or_else(|| bad(&format!("missing integer {k:?}")))
        };
        let label = |k: &str| -> Result<FiniteWeightLabel> {
            v.get(k).and_then(|x| x.as_str()).ok_or_else(|| bad(&format!("missing label {k:?}")))?.parse()
        };
        let dmax = match v.get("d_max") {
            Some(serde_json::Value::Number(x)) => parse_q(&x.to_string()),
            Some(serde_json::Value::String(s)) => parse_q(s),
            _ => None,
        }
        .ok_or_else(|| bad("missing d_max"))?;
        let dmax2 = to_doubled(&dmax).ok_or_else(|| bad("d_max must be a multiple of 1/2"))?;
        SeesawCase::new(int("m")?, int("n")?, label("lambda")?, label("mu")?, label("nu")?, dmax2)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "n": self.n,
            "lambda": self.lambda.to_text(),
            "mu": self.mu.to_text(),
            "nu": self.nu.to_text(),
            "d_max": fmt_doubled(self.dmax2),
        })
    }
}

/// m(λ|_{O(2m)×O(2n)}, μ ⊗ ν) from characters.
pub fn branch_finite(case: &SeesawCase) -> Result<u64> {
    let dec = branch_decomposition(&case.lambda, case.mu.group, case.nu.group)?;
    Ok(dec.iter().find(|(a, b, _)| *a == case.mu && *b == case.nu).map_or(0, |x| x.2))
}

/// Multiplicity of λ in μ ⊙ ν; by Frobenius reciprocity this is the branching multiplicity.
pub fn tensor_product_multiplicity_via_induction(
    m: usize,
    n: usize,
    mu: &FiniteWeightLabel,
    nu: &FiniteWeightLabel,
    lambda: &FiniteWeightLabel,
) -> Result<u64> {
    branch_finite(&SeesawCase::new(m, n, lambda.clone(), mu.clone(), nu.clone(), 0)?)
}

/// Degree (doubled) of any d∞ highest weight vector of weight `w` in a Fock space:
/// with a_j = Σ_{k≥j} h_k the eigenvalue of E_jj − E_{1−j,1−j}, the degree is Σ_j (j−½) a_j = Σ_k h_k k²/2.
pub fn dinf_energy2(w: &InfiniteWeight) -> Result<i64> {
    let mut total = Q::zero();
    for (&k, h) in &w.coeffs {
        if k >= 1 {
            total += h * q(k * k);
        }
    }
    total.to_integer().to_i64().filter(|_| total.is_integer()).ok_or_else(|| Error::Oracle("non-integral energy".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorMultiplicity {
    pub multiplicity: u64,
    /// Doubled degree at which the highest weight vectors must sit.
    pub energy2: i64,
    /// Cumulative counts for windows 0, ½, 1, …, d_max.
    pub windows: Vec<u64>,
}

fn block_raising(case: &SeesawCase) -> Vec<FiniteGen> {
    let m = case.m;
    let same = |p: usize, q: usize| (p <= m) == (q <= m);
    horizontal(&case.big_pair())
        .raising
        .into_iter()
        .filter(|g| match g.family {
            FiniteFamily::Star | FiniteFamily::PlusPlus => same(g.p, g.q),
            FiniteFamily::OddStar => g.p > m,
            _ => false,
        })
        .collect()
}

fn factor_weight(l: &FiniteWeightLabel) -> Vec<Q> {
    l.parts.iter().map(|&x| q(x)).collect()
}

/// Eigenspace dimension of the outer elements fixing the det decorations of μ and ν.
fn outer_projected_dim(case: &SeesawCase, cfg: &PairConfig, ker: &[StateVector]) -> Result<usize> {
    let mut ops: Vec<(Box<dyn Fn(&StateVector) -> Result<StateVector>>, i64)> = Vec::new();
    if case.mu.parts.last() == Some(&0) {
        let p = case.m;
        let s = if case.mu.deco.det_twist { -1 } else { 1 };
        ops.push((Box::new(move |v| tau_on_flavor(cfg, p, v)), s));
    }
    if case.odd() {
        let s = if case.nu.deco.det_twist { -1 } else { 1 };
        ops.push((Box::new(move |v| apply_outer(cfg, Outer::GDiag, v)), s));
    } else if case.nu.parts.last() == Some(&0) {
        let p = case.m + case.n;
        let s = if case.nu.deco.det_twist { -1 } else { 1 };
        ops.push((Box::new(move |v| tau_on_flavor(cfg, p, v)), s));
    }
    let mut span = Span::new();
    for v in ker {
        let mut w = v.clone();
        for (op, s) in &ops {
            let img = op(&w)?;
            w = w.scaled(&frac(1, 2));
            w.add_scaled(&img, &frac(*s, 2));
        }
        span.insert(&w);
    }
    Ok(span.dim())
}

fn count_at_degree(
    case: &SeesawCase,
    states: &[&FockState],
    target_fin: &[Q],
    target_inf: &InfiniteWeight,
    d2: i64,
) -> Result<u64> {
    let pair = case.big_pair();
    let cfg = pair.cfg();
    let mut cell = Vec::new();
    for s in states.iter().filter(|s| s.degree2() == d2) {
        let fin: Vec<Q> = (1..=cfg.l).map(|p| q(s.charge_of(p))).collect();
        if fin != target_fin {
            continue;
        }
        if infinite_weight(&pair, &StateVector::basis((*s).clone()))? == *target_inf {
            cell.push((*s).clone());
        }
    }
    if cell.is_empty() {
        return Ok(0);
    }
    let fin = block_raising(case);
    let w = (d2 + 1) / 2 + 2 * cfg.l as i64 + 2;
    let inf: Vec<_> = canonical_gens(pair.infinite(), -w, w)
        .into_iter()
        .filter(|g| g.i < g.j && 2 * (g.j - g.i) <= d2)
        .collect();
    let mut cols = Vec::with_capacity(cell.len());
    for s in &cell {
        let v = StateVector::basis(s.clone());
        let mut col: SparseVec<(usize, FockState)> = SparseVec::new();
        let images = fin
            .iter()
            .map(|g| apply_finite_gen(&cfg, g, &v))
            .chain(inf.iter().map(|g| apply_infinite_gen(&cfg, g, &v)));
        for (op, img) in images.enumerate() {
            for (t, c) in img?.iter() {
                col.insert((op, t.clone()), c.clone());
            }
        }
        cols.push(col);
    }
    let ker: Vec<StateVector> = kernel_of_columns(&cols)
        .into_iter()
        .map(|coeffs| cell.iter().cloned().zip(coeffs).collect())
        .collect();
    Ok(outer_projected_dim(case, &cfg, &ker)? as u64)
}

/// m(Λ(μ) ⊗ Λ(ν), Λ(λ)) counted inside the Fock space of the big pair.
pub fn dinf_tensor_multiplicity(case: &SeesawCase) -> Result<TensorMultiplicity> {
    let pair = case.big_pair();
    let cfg = pair.cfg();
    let target_inf = lambda_map(&pair, &case.lambda)?;
    let energy2 = dinf_energy2(&target_inf)?;
    let mut target_fin = factor_weight(&case.mu);
    target_fin.extend(factor_weight(&case.nu));
    let all = enumerate_states(&cfg, case.dmax2);
    let states: Vec<&FockState> = all.iter().collect();
    let mut windows = Vec::with_capacity(case.dmax2 as usize + 1);
    let mut total = 0u64;
    for d2 in 0..=case.dmax2 {
        let c = count_at_degree(case, &states, &target_fin, &target_inf, d2)?;
        if c > 0 && d2 != energy2 {
            return Err(Error::Oracle(format!(
                "highest weight vectors of {target_inf} at degree {} instead of {}",
                fmt_doubled(d2),
                fmt_doubled(energy2)
            )));
        }
        total += c;
        windows.push(total);
    }
    if case.dmax2 < energy2 {
        return Err(Error::Unstabilized(format!(
            "{} (highest weight vectors sit at degree {})",
            fmt_doubled(case.dmax2),
            fmt_doubled(energy2)
        )));
    }
    Ok(TensorMultiplicity { multiplicity: total, energy2, windows })
}

#[derive(Clone, Debug)]
pub struct SeesawOutcome {
    pub case: SeesawCase,
    pub finite: u64,
    pub infinite: TensorMultiplicity,
}

impl SeesawOutcome {
    pub fn pass(&self) -> bool {
        self.finite == self.infinite.multiplicity
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "case": self.case.to_json(),
            "branch_multiplicity": self.finite,
            "dinf_multiplicity": self.infinite.multiplicity,
            "hwv_degree": fmt_doubled(self.infinite.energy2),
            "windows": self.infinite.windows,
            "pass": self.pass(),
        })
    }
}

pub fn check_seesaw(case: &SeesawCase) -> Result<SeesawOutcome> {
    Ok(SeesawOutcome { case: case.clone(), finite: branch_finite(case)?, infinite: dinf_tensor_multiplicity(case)? })
}

/// All cases with parts ≤ `bound` for the even see-saw of ranks (m, n).
pub fn seesaw_cases(m: usize, n: usize, bound: i64, dmax2: i64) -> Result<Vec<SeesawCase>> {
    let g = |k| GroupKind::new(GroupTag::OEven, k);
    let (big, g1, g2) = (g(m + n)?, g(m)?, g(n)?);
    let mut out = Vec::new();
    for lambda in enumerate_labels(big, bound) {
        for mu in enumerate_labels(g1, bound) {
            for nu in enumerate_labels(g2, bound) {
                out.push(SeesawCase::new(m, n, lambda.clone(), mu.clone(), nu, dmax2)?);
            }
        }
    }
    Ok(out)
}
