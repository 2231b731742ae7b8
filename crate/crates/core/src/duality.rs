//! Truncated verification of the duality decompositions.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::bilinears::{
    apply_finite_gen, apply_infinite_gen, canonical_gens, horizontal, FiniteGen, InfiniteGen,
};
use crate::error::Result;
use crate::fock::{enumerate_states, graded_dimension, FockState, PairConfig, StateVector};
use crate::hwv::{
    build_hwv, finite_weight, infinite_weight, resolve_label, verify_hwv, HwvRecipe,
};
use crate::linalg::{kernel_of_columns, Span, SparseVec};
use crate::pairs::DualPairKind;
use crate::rational::{fmt_doubled, fmt_q, Q};
use crate::weights::{
    enumerate_labels, lambda_map, validate_label, weyl_dim_weight, FiniteWeightLabel, InfiniteWeight,
};

/// Joint weight of a homogeneous vector, plus the fermion parity when it splits the space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JointKey {
    pub degree2: i64,
    pub parity: Option<u8>,
    pub finite: Vec<Q>,
    pub infinite: InfiniteWeight,
}

impl JointKey {
    fn sort_key(&self) -> (i64, Option<u8>, Vec<Q>, String) {
        (self.degree2, self.parity, self.finite.clone(), self.infinite.to_string())
    }
}

fn parity_of(pair: &DualPairKind, cfg: &PairConfig, s: &FockState) -> Option<u8> {
    pair.splits_by_parity().then(|| (s.odd_count(cfg) % 2) as u8)
}

pub fn joint_key(pair: &DualPairKind, v: &StateVector) -> Result<JointKey> {
    let cfg = pair.cfg();
    let (s, _) = v.leading().ok_or(crate::error::Error::ZeroVector)?;
    Ok(JointKey {
        degree2: s.degree2(),
        parity: parity_of(pair, &cfg, s),
        finite: finite_weight(pair, v)?,
        infinite: infinite_weight(pair, v)?,
    })
}

/// A kernel vector of all raising operators inside one joint weight space.
#[derive(Clone, Debug)]
pub struct FoundHwv {
    pub key: JointKey,
    pub mult: usize,
    pub vector: StateVector,
}

/// Raising generators that can act nontrivially on degree d2 (doubled).
fn raising_ops(pair: &DualPairKind, d2: i64, w: i64) -> (Vec<FiniteGen>, Vec<InfiniteGen>) {
    let fin = horizontal(pair).raising;
    let inf = canonical_gens(pair.infinite(), -w, w)
        .into_iter()
        .filter(|g| g.i < g.j && 2 * (g.j - g.i) <= d2)
        .collect();
    (fin, inf)
}

fn index_window(pair: &DualPairKind, dmax2: i64) -> i64 {
    (dmax2 + 1) / 2 + 2 * pair.l as i64 + 2
}

/// Exact kernel of the raising operators on each joint weight space of degree ≤ d_max.
pub fn find_joint_hwvs(pair: &DualPairKind, dmax2: i64) -> Result<Vec<FoundHwv>> {
    let cfg = pair.cfg();
    let states = enumerate_states(&cfg, dmax2);
    let keyed: Vec<(JointKey, FockState)> = states
        .par_iter()
        .map(|s| Ok((joint_key(pair, &StateVector::basis(s.clone()))?, s.clone())))
        .collect::<Result<_>>()?;
    let mut cells: HashMap<JointKey, Vec<FockState>> = HashMap::new();
    for (k, s) in keyed {
        cells.entry(k).or_default().push(s);
    }
    let mut cells: Vec<(JointKey, Vec<FockState>)> = cells.into_iter().collect();
    cells.sort_by_key(|(k, _)| k.sort_key());
    let w = index_window(pair, dmax2);
    let found: Vec<Vec<FoundHwv>> = cells
        .par_iter()
        .map(|(key, basis)| -> Result<Vec<FoundHwv>> {
            let (fin, inf) = raising_ops(pair, key.degree2, w);
            let mut cols: Vec<SparseVec<(usize, FockState)>> = Vec::with_capacity(basis.len());
            for s in basis {
                let v = StateVector::basis(s.clone());
                let mut col = SparseVec::new();
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
            let ker = kernel_of_columns(&cols);
            let mult = ker.len();
            Ok(ker
                .into_iter()
                .map(|coeffs| FoundHwv {
                    key: key.clone(),
                    mult,
                    vector: basis.iter().cloned().zip(coeffs).collect(),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

fn graded(span: &Span, dmax2: i64) -> Vec<usize> {
    let mut dims = vec![0; dmax2 as usize + 1];
    for v in span.basis() {
        if let Some(d) = v.homogeneous_degree2() {
            dims[d as usize] += 1;
        }
    }
    dims
}

/// Closure of `seed` under `step`, kept to degrees ≤ d_max.
fn close<F>(seed: &StateVector, dmax2: i64, step: F) -> Result<Span>
where
    F: Fn(&StateVector) -> Result<Vec<StateVector>>,
{
    let mut span = Span::new();
    span.insert(seed);
    let mut queue = vec![seed.clone()];
    while let Some(v) = queue.pop() {
        for w in step(&v)? {
            if w.is_zero() || w.homogeneous_degree2().map_or(true, |d| d > dmax2) {
                continue;
            }
            if span.insert(&w) {
                queue.push(w);
            }
        }
    }
    Ok(span)
}

fn finite_lowering(pair: &DualPairKind, v: &StateVector) -> Result<Vec<StateVector>> {
    let cfg = pair.cfg();
    horizontal(pair).lowering.iter().map(|g| apply_finite_gen(&cfg, g, v)).collect()
}

fn infinite_lowering(pair: &DualPairKind, v: &StateVector, dmax2: i64) -> Result<Vec<StateVector>> {
    let cfg = pair.cfg();
    let d2 = v.homogeneous_degree2().unwrap_or(0);
    let room = dmax2 - d2;
    let w = (v.max_mode2() + 1) / 2 + (dmax2 + 1) / 2 + 2;
    canonical_gens(pair.infinite(), -w, w)
        .into_iter()
        .filter(|g| g.i > g.j && 2 * (g.i - g.j) <= room)
        .map(|g| apply_infinite_gen(&cfg, &g, v))
        .collect()
}

/// Dimension of the finite-algebra module generated by a highest weight vector.
pub fn finite_closure_dim(pair: &DualPairKind, hwv: &StateVector) -> Result<usize> {
    Ok(close(hwv, i64::MAX, |v| finite_lowering(pair, v))?.dim())
}

/// Graded dimensions (index = doubled degree) of the infinite-algebra module of `hwv`.
pub fn infinite_closure_dims(pair: &DualPairKind, hwv: &StateVector, dmax2: i64) -> Result<Vec<usize>> {
    Ok(graded(&close(hwv, dmax2, |v| infinite_lowering(pair, v, dmax2))?, dmax2))
}

/// Graded dimensions of the joint module generated by `hwv` under both algebras.
pub fn generate_joint_module(pair: &DualPairKind, hwv: &StateVector, dmax2: i64) -> Result<Vec<usize>> {
    verify_hwv(pair, hwv)?;
    let span = close(hwv, dmax2, |v| {
        let mut out = finite_lowering(pair, v)?;
        out.extend(infinite_lowering(pair, v, dmax2)?);
        Ok(out)
    })?;
    Ok(graded(&span, dmax2))
}

#[derive(Clone, Debug)]
pub struct HwvEntry {
    pub label: Option<FiniteWeightLabel>,
    pub key: JointKey,
    pub mult: usize,
    pub finite_dim: usize,
    pub infinite_dims: Vec<usize>,
    pub vector: StateVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerRow {
    pub degree2: i64,
    pub fock_dim: usize,
    pub sum_dim: usize,
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub pair: DualPairKind,
    pub dmax2: i64,
    pub hwvs: Vec<HwvEntry>,
    pub ledger: Vec<LedgerRow>,
    pub issues: Vec<String>,
}

impl DecompositionReport {
    pub fn pass(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let hwvs: Vec<serde_json::Value> = self
            .hwvs
            .iter()
            .map(|h| {
                serde_json::json!({
                    "finite": h.label.as_ref().map(|l| l.to_text()),
                    "finite_weight": h.key.finite.iter().map(fmt_q).collect::<Vec<_>>(),
                    "infinite": h.key.infinite.to_json(),
                    "degree": fmt_doubled(h.key.degree2),
                    "parity": h.key.parity,
                    "mult": h.mult,
                    "finite_dim": h.finite_dim,
                    "vector": h.vector.to_text(),
                })
            })
            .collect();
        let ledger: Vec<serde_json::Value> = self
            .ledger
            .iter()
            .map(|r| {
                serde_json::json!({
                    "degree": fmt_doubled(r.degree2),
                    "fock_dim": r.fock_dim,
                    "sum_dim": r.sum_dim,
                })
            })
            .collect();
        serde_json::json!({
            "pair": self.pair.to_string(),
            "d_max": fmt_doubled(self.dmax2),
            "hwvs": hwvs,
            "ledger": ledger,
            "issues": self.issues,
            "pass": self.pass(),
        })
    }
}

/// The recipe-predicted hwvs of degree ≤ d_max, keyed by joint weight.
pub fn predicted_hwvs(pair: &DualPairKind, dmax2: i64) -> Result<Vec<(HwvRecipe, StateVector, JointKey)>> {
    let mut out = Vec::new();
    for label in enumerate_labels(pair.finite(), dmax2 + 1) {
        if validate_label(&label).is_err() {
            continue;
        }
        for recipe in HwvRecipe::all_for(*pair, label)? {
            let v = build_hwv(&recipe)?;
            if v.homogeneous_degree2().map_or(true, |d| d > dmax2) {
                continue;
            }
            let key = joint_key(pair, &v)?;
            out.push((recipe, v, key));
        }
    }
    Ok(out)
}

/// Full truncated check of one duality: multiplicity one, weight maps,
/// completeness against the explicit vectors, and the dimension ledger.
pub fn verify_decomposition(pair: &DualPairKind, dmax2: i64) -> Result<DecompositionReport> {
    let cfg = pair.cfg();
    let found = find_joint_hwvs(pair, dmax2)?;
    let mut issues = Vec::new();
    let entries: Vec<(HwvEntry, Vec<String>)> = found
        .par_iter()
        .map(|f| -> Result<(HwvEntry, Vec<String>)> {
            let mut issues = Vec::new();
            let tag = format!("hwv at degree {} with weight {:?}", fmt_doubled(f.key.degree2), f.key.finite.iter().map(fmt_q).collect::<Vec<_>>());
            if f.mult != 1 {
                issues.push(format!("{tag}: multiplicity {}", f.mult));
            }
            if let Err(e) = verify_hwv(pair, &f.vector) {
                issues.push(format!("{tag}: {e}"));
            }
            let label = match resolve_label(pair, &f.vector, &f.key.finite) {
                Ok(l) => Some(l),
                Err(e) => {
                    issues.push(format!("{tag}: {e}"));
                    None
                }
            };
            let finite_dim = finite_closure_dim(pair, &f.vector)?;
            if let Some(l) = &label {
                match lambda_map(pair, l) {
                    Ok(w) if w == f.key.infinite => {}
                    Ok(w) => issues.push(format!("{tag}: label {l} maps to {w}, found {}", f.key.infinite)),
                    Err(e) => issues.push(format!("{tag}: {e}")),
                }
                let expect = weyl_dim_weight(pair.finite().root_type(), &f.key.finite);
                if Q::from_integer((finite_dim as i64).into()) != expect {
                    issues.push(format!("{tag}: finite module has dim {finite_dim}, Weyl formula gives {}", fmt_q(&expect)));
                }
            }
            let infinite_dims = infinite_closure_dims(pair, &f.vector, dmax2)?;
            Ok((
                HwvEntry { label, key: f.key.clone(), mult: f.mult, finite_dim, infinite_dims, vector: f.vector.clone() },
                issues,
            ))
        })
        .collect::<Result<_>>()?;
    let mut hwvs = Vec::new();
    for (e, i) in entries {
        hwvs.push(e);
        issues.extend(i);
    }

    // Completeness: found joint weights against the explicit vectors.
    let predicted = predicted_hwvs(pair, dmax2)?;
    let mut by_key: BTreeMap<String, &HwvEntry> = BTreeMap::new();
    for h in &hwvs {
        by_key.insert(format!("{:?}", h.key.sort_key()), h);
    }
    let mut matched = 0;
    for (recipe, v, key) in &predicted {
        match by_key.get(&format!("{:?}", key.sort_key())) {
            None => issues.push(format!("missing hwv for {recipe}")),
            Some(h) => {
                matched += 1;
                if h.vector.ratio_to(v).is_none() && v.ratio_to(&h.vector).is_none() {
                    issues.push(format!("kernel vector for {recipe} is not proportional to the explicit one"));
                }
            }
        }
    }
    if matched != hwvs.len() {
        issues.push(format!("{} hwvs found, {} predicted", hwvs.len(), matched));
    }

    let mut ledger = Vec::new();
    for d2 in 0..=dmax2 {
        let fock_dim = graded_dimension(&cfg, d2);
        let sum_dim: usize = hwvs
            .iter()
            .filter(|h| h.key.degree2 <= d2)
            .map(|h| h.finite_dim * h.infinite_dims[d2 as usize])
            .sum();
        if fock_dim != sum_dim {
            issues.push(format!("degree {}: Fock dimension {fock_dim}, decomposition gives {sum_dim}", fmt_doubled(d2)));
        }
        ledger.push(LedgerRow { degree2: d2, fock_dim, sum_dim });
    }
    Ok(DecompositionReport { pair: *pair, dmax2, hwvs, ledger, issues })
}
