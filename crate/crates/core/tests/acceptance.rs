//! Acceptance suite. Prints one PASS/FAIL line per criterion on stdout, details of failures on
//! stderr, and exits nonzero if any criterion fails.
//!
//! Every comparison is exact rational or integer equality; there is no floating tolerance.

use std::panic;
use std::process::ExitCode;
use std::time::Instant;

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use fockdual::bilinears::{cocycle, commutation_failures, mat_bracket, measured_central_charge, GlMatrix};
use fockdual::duality::verify_decomposition;
use fockdual::fock::Statistics;
use fockdual::hwv::{check_recipe, HwvRecipe};
use fockdual::rational::{fmt_q, frac, q, Q};
use fockdual::reciprocity::{check_seesaw, seesaw_cases};
use fockdual::weights::enumerate_labels;
use fockdual::{DualPairKind, PairFamily};

#[path = "oracles.rs"]
mod oracles;

const RANKS: [usize; 2] = [1, 2];
const CENTRAL_DMAX2: i64 = 4;
const COMMUTATION_BOUND: i64 = 3;
/// Degree ≤ 3.
const COMMUTATION_DMAX2: i64 = 6;
const HWV_PART_BOUND: i64 = 3;
/// d_max = 3 on fermionic rows, 5/2 on bosonic rows.
const FERMION_DMAX2: i64 = 6;
const BOSON_DMAX2: i64 = 5;
const DECOMPOSITION_PAIRS: [&str; 12] = [
    "GL(1)/gl",
    "GL(2)/gl",
    "O(2)/dinf",
    "O(4)/dinf",
    "Sp(2)/cinf",
    "Pin(2)/btinf",
    "O(3)/dinf",
    "Sp(2)/dinf",
    "O(2)/cinf",
    "Osp(1,2)/cinf",
    "Osp(1,2)/dinf",
    "O(3)/cinf",
];
const SEESAW_PART_BOUND: i64 = 2;
/// Stabilization has to happen by d_max = 4.
const SEESAW_DMAX2: i64 = 8;
const SEESAW_MIN_CASES: usize = 10;
const COCYCLE_TRIPLES: usize = 100;
const COCYCLE_SEED: u64 = 0x5eed_c0c7;
const COCYCLE_INDEX: i64 = 4;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(details: Vec<String>, summary: String) -> Self {
        Outcome { pass: details.is_empty(), summary, details }
    }
}

fn pair(fam: PairFamily, l: usize) -> DualPairKind {
    DualPairKind::new(fam, l).expect("catalogued pair")
}

fn central_charges() -> Outcome {
    let rows: Vec<(PairFamily, fn(i64) -> Q)> = vec![
        (PairFamily::GlFermion, |l| q(l)),
        (PairFamily::GlBoson, |l| q(-l)),
        (PairFamily::OOddD, |l| q(l) + frac(1, 2)),
        (PairFamily::OspC, |l| q(l) - frac(1, 2)),
        (PairFamily::OOddC, |l| q(-l) - frac(1, 2)),
        (PairFamily::OspD, |l| q(-l) + frac(1, 2)),
    ];
    let jobs: Vec<(DualPairKind, Q)> = rows
        .iter()
        .flat_map(|(fam, want)| RANKS.iter().map(move |&l| (pair(*fam, l), want(l as i64))))
        .collect();
    let details: Vec<String> = jobs
        .par_iter()
        .filter_map(|(p, want)| match measured_central_charge(&p.cfg(), p.infinite(), CENTRAL_DMAX2) {
            Ok(c) if c == *want => None,
            Ok(c) => Some(format!("{p}: measured {} expected {}", fmt_q(&c), fmt_q(want))),
            Err(e) => Some(format!("{p}: {e}")),
        })
        .collect();
    let summary = format!("central charges exact on {}/{} rows", jobs.len() - details.len(), jobs.len());
    Outcome::new(details, summary)
}

fn commutation() -> Outcome {
    let pairs: Vec<DualPairKind> =
        PairFamily::ALL.iter().flat_map(|&f| RANKS.iter().map(move |&l| pair(f, l))).collect();
    let details: Vec<String> = pairs
        .par_iter()
        .flat_map_iter(|p| match commutation_failures(p, COMMUTATION_BOUND, COMMUTATION_DMAX2) {
            Ok(bad) => bad.into_iter().map(|b| format!("{p}: {b}")).collect::<Vec<_>>(),
            Err(e) => vec![format!("{p}: {e}")],
        })
        .collect();
    let summary = format!(
        "{} rows, |i|,|j| <= {COMMUTATION_BOUND}, degree <= 3, {} nonzero commutators",
        pairs.len(),
        details.len()
    );
    Outcome::new(details, summary)
}

fn highest_weights() -> Outcome {
    let mut recipes = Vec::new();
    let mut details = Vec::new();
    for fam in PairFamily::ALL {
        for l in RANKS {
            let p = pair(fam, l);
            for label in enumerate_labels(p.finite(), HWV_PART_BOUND) {
                match HwvRecipe::all_for(p, label.clone()) {
                    Ok(rs) => recipes.extend(rs),
                    Err(e) => details.push(format!("{p} {label}: {e}")),
                }
            }
        }
    }
    let failed: Vec<String> =
        recipes.par_iter().filter_map(|r| check_recipe(r).err().map(|e| format!("{r}: {e}"))).collect();
    let summary = format!("{}/{} explicit highest weight vectors verified", recipes.len() - failed.len(), recipes.len());
    details.extend(failed);
    Outcome::new(details, summary)
}

fn decomposition() -> Outcome {
    let results: Vec<(String, Result<Vec<String>, String>)> = DECOMPOSITION_PAIRS
        .par_iter()
        .map(|name| {
            let p: DualPairKind = name.parse().expect("pair name");
            let dmax2 = if p.cfg().stat == Statistics::Fermion { FERMION_DMAX2 } else { BOSON_DMAX2 };
            let r = verify_decomposition(&p, dmax2).map(|rep| rep.issues).map_err(|e| e.to_string());
            (name.to_string(), r)
        })
        .collect();
    let mut details = Vec::new();
    let mut failing = Vec::new();
    for (name, r) in results {
        match r {
            Ok(issues) if issues.is_empty() => {}
            Ok(issues) => {
                failing.push(name.clone());
                details.extend(issues.into_iter().map(|i| format!("{name}: {i}")));
            }
            Err(e) => {
                failing.push(name.clone());
                details.push(format!("{name}: {e}"));
            }
        }
    }
    let mut summary = format!(
        "{}/{} pairs decompose as predicted",
        DECOMPOSITION_PAIRS.len() - failing.len(),
        DECOMPOSITION_PAIRS.len()
    );
    if !failing.is_empty() {
        summary.push_str(&format!("; failing: {}", failing.join(", ")));
    }
    Outcome::new(details, summary)
}

fn seesaw() -> Outcome {
    let cases = match seesaw_cases(1, 1, SEESAW_PART_BOUND, SEESAW_DMAX2) {
        Ok(c) => c,
        Err(e) => return Outcome::new(vec![e.to_string()], "case enumeration failed".into()),
    };
    let outcomes: Vec<Result<(u64, u64), String>> = cases
        .par_iter()
        .map(|c| {
            check_seesaw(c)
                .map(|o| (o.finite, o.infinite.multiplicity))
                .map_err(|e| format!("{} {} {}: {e}", c.lambda, c.mu, c.nu))
        })
        .collect();
    let mut details = Vec::new();
    let (mut agree, mut zero, mut one) = (0, 0, 0);
    for (case, r) in cases.iter().zip(&outcomes) {
        match r {
            Ok((f, i)) if f == i => {
                agree += 1;
                zero += usize::from(*f == 0);
                one += usize::from(*f == 1);
            }
            Ok((f, i)) => details.push(format!("{} {} {}: branch {f} vs d-inf {i}", case.lambda, case.mu, case.nu)),
            Err(e) => details.push(e.clone()),
        }
    }
    if cases.len() < SEESAW_MIN_CASES || zero < 2 || one < 2 {
        details.push(format!("coverage: {} cases, {zero} with multiplicity 0, {one} with multiplicity 1", cases.len()));
    }
    let summary = format!(
        "(m,n) = (1,1), parts <= {SEESAW_PART_BOUND}: {agree}/{} cases agree ({zero} zero, {one} one, {} higher)",
        cases.len(),
        agree - zero - one
    );
    Outcome::new(details, summary)
}

fn random_matrix(rng: &mut StdRng) -> GlMatrix {
    let mut m = GlMatrix::new();
    for _ in 0..rng.gen_range(1..=5) {
        let k = (rng.gen_range(-COCYCLE_INDEX..=COCYCLE_INDEX), rng.gen_range(-COCYCLE_INDEX..=COCYCLE_INDEX));
        let c = q(rng.gen_range(-5..=5));
        *m.entry(k).or_insert_with(Q::zero) += c;
    }
    m.retain(|_, c| !c.is_zero());
    m
}

fn cocycle_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(COCYCLE_SEED);
    let mut details = Vec::new();
    for t in 0..COCYCLE_TRIPLES {
        let (a, b, d) = (random_matrix(&mut rng), random_matrix(&mut rng), random_matrix(&mut rng));
        for (x, y) in [(&a, &b), (&b, &d), (&d, &a)] {
            if cocycle(x, y) != -cocycle(y, x) {
                details.push(format!("triple {t}: not antisymmetric"));
            }
        }
        let total = cocycle(&mat_bracket(&a, &b), &d) + cocycle(&mat_bracket(&b, &d), &a) + cocycle(&mat_bracket(&d, &a), &b);
        if !total.is_zero() {
            details.push(format!("triple {t}: identity defect {}", fmt_q(&total)));
        }
    }
    let summary = format!("{COCYCLE_TRIPLES} random triples in [-{COCYCLE_INDEX},{COCYCLE_INDEX}], seed {COCYCLE_SEED:#x}");
    Outcome::new(details, summary)
}

fn oracle_fixtures() -> Outcome {
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut details = Vec::new();
    for (name, f) in oracles::ALL {
        if let Err(e) = panic::catch_unwind(f) {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            details.push(format!("{name}: {msg}"));
        }
    }
    panic::set_hook(hook);
    let summary = format!("{}/{} standalone oracle fixtures agree with the engine", oracles::ALL.len() - details.len(), oracles::ALL.len());
    Outcome::new(details, summary)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("central charges", central_charges),
        ("commutation", commutation),
        ("highest weight vectors", highest_weights),
        ("decomposition completeness", decomposition),
        ("see-saw reciprocity", seesaw),
        ("cocycle identity", cocycle_identity),
        ("oracle independence", oracle_fixtures),
    ];
    let mut all_pass = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict} {name}: {} [{:.1}s]", k + 1, out.summary, start.elapsed().as_secs_f64());
        for d in &out.details {
            eprintln!("  criterion {}: {d}", k + 1);
        }
        all_pass &= out.pass;
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
