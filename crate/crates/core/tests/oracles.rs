//! Standalone oracles for hand-derived example values. Each fixture computes the value its own way
//! (partition counting, a small Fock model, dense matrices, character restriction, span closure)
//! and only then compares against the engine.
//!
//! The fixtures are plain functions listed in `ALL` so the acceptance binary can run them too.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use fockdual::bilinears::{
    apply_e, apply_finite_gen, apply_infinite_gen, canonical_gens, cocycle, coroot_value, horizontal, unit,
    FiniteFamily, FiniteGen, InfiniteGen,
};
use fockdual::duality::{find_joint_hwvs, generate_joint_module, verify_decomposition};
use fockdual::fock::{
    apply_mode, apply_product, enumerate_states, graded_dimension, vacuum, Charge, Field, FockState, IndexSet,
    Mode, ModeIndex, Neutral, PairConfig, StateVector, Statistics,
};
use fockdual::hwv::{build_hwv, gamma_vector, infinite_weight, resolve_label, GammaKind, HwvRecipe};
use fockdual::rational::{frac, q, Q};
use fockdual::reciprocity::{
    branch_decomposition, character, check_seesaw, tensor_product_multiplicity_via_induction, SeesawCase,
};
use fockdual::weights::{lambda_map, weyl_dim, AlgebraKind, FiniteWeightLabel, GroupKind, GroupTag};
use fockdual::DualPairKind;

fn pair(s: &str) -> DualPairKind {
    s.parse().unwrap()
}

fn label(s: &str) -> FiniteWeightLabel {
    s.parse().unwrap()
}

// ---------------------------------------------------------------------------------------------
// Partition counting

/// Truncated power series in q^{1/2}; index = doubled degree.
type Series = Vec<i64>;

fn series_mul(a: &Series, b: &Series) -> Series {
    let n = a.len();
    let mut out = vec![0; n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// (1 + q^{k/2}) truncated.
fn fermion_factor(k: usize, n: usize) -> Series {
    let mut s = vec![0; n];
    s[0] = 1;
    if k < n {
        s[k] += 1;
    }
    s
}

/// 1/(1 − q^{k/2}) truncated.
fn boson_factor(k: usize, n: usize) -> Series {
    (0..n).map(|i| i64::from(i % k == 0)).collect()
}

/// Generating function of a Fock space of l charged pairs; `zero_modes` counts creation zero modes.
fn fock_series(l: usize, fermion: bool, half_int: bool, zero_modes: i64, n: usize) -> Series {
    let mut s = vec![0; n];
    s[0] = 1 << zero_modes;
    let start = if half_int { 1 } else { 2 };
    for k in (start..n).step_by(2) {
        for _ in 0..2 * l {
            let f = if fermion { fermion_factor(k, n) } else { boson_factor(k, n) };
            s = series_mul(&s, &f);
        }
    }
    s
}

pub fn graded_dimensions_are_partition_counts() {
    let n = 9;
    let f1 = fock_series(1, true, true, 0, n);
    assert_eq!((f1[1], f1[2]), (2, 1));
    let b1 = fock_series(1, false, true, 0, n);
    assert_eq!(b1[2], 3);

    for l in 1..=2 {
        let cases = [
            (PairConfig::fermion(l, IndexSet::HalfInt), fock_series(l, true, true, 0, n)),
            (PairConfig::fermion(l, IndexSet::Int), fock_series(l, true, false, l as i64, n)),
            (PairConfig::boson(l), fock_series(l, false, true, 0, n)),
        ];
        for (cfg, series) in cases {
            for (d2, want) in series.iter().enumerate() {
                assert_eq!(graded_dimension(&cfg, d2 as i64) as i64, *want, "{cfg} at doubled degree {d2}");
            }
        }
    }
}

// ---------------------------------------------------------------------------------------------
// A small Fock model: a vector is a sum of creation words applied to the vacuum, and annihilators
// are commuted through the word using the stated (anti)commutators.

#[derive(Clone, Copy)]
struct Model {
    fermion: bool,
    chi: bool,
}

type Words = Vec<(Vec<Mode>, Q)>;

impl Model {
    fn odd(&self, m: Mode) -> bool {
        match m.field {
            Field::Neutral => !self.chi,
            Field::Charged { .. } => self.fermion,
        }
    }

    fn creates(&self, m: Mode) -> bool {
        m.index.0 < 0 || (m.index.0 == 0 && m.field == Field::minus(field_flavor(m.field)))
    }

    /// [a, c]_± for the ordered pair (a, c).
    fn bracket(&self, a: Mode, c: Mode) -> Q {
        if a.index.0 + c.index.0 != 0 {
            return Q::zero();
        }
        match (a.field, c.field) {
            (Field::Charged { flavor: p, charge: s }, Field::Charged { flavor: r, charge: t })
                if p == r && s != t =>
            {
                // [ψ^+_m, ψ^-_n]_+ = δ; [γ^+_m, γ^-_n] = δ, hence [γ^-, γ^+] = −δ.
                if self.fermion || s == Charge::Plus {
                    Q::one()
                } else {
                    -Q::one()
                }
            }
            (Field::Neutral, Field::Neutral) if self.chi => {
                // [χ_m, χ_n] = (−1)^{m+½} δ_{m,−n}
                let e = (a.index.0 + 1) / 2;
                if e.rem_euclid(2) == 1 {
                    -Q::one()
                } else {
                    Q::one()
                }
            }
            (Field::Neutral, Field::Neutral) => Q::one(),
            _ => Q::zero(),
        }
    }

    fn apply(&self, m: Mode, v: &Words) -> Words {
        let mut out = Words::new();
        for (word, c) in v {
            if self.creates(m) {
                let mut w = vec![m];
                w.extend_from_slice(word);
                out.push((w, c.clone()));
                continue;
            }
            let mut odd_before = 0;
            for (k, &x) in word.iter().enumerate() {
                let b = self.bracket(m, x);
                if !b.is_zero() {
                    let sgn = if self.odd(m) && odd_before % 2 == 1 { -Q::one() } else { Q::one() };
                    let mut w = word.clone();
                    w.remove(k);
                    out.push((w, c * b * sgn));
                }
                if self.odd(x) {
                    odd_before += 1;
                }
            }
        }
        out
    }

    /// :AB: applied to v.
    fn normal_pair(&self, a: Mode, b: Mode, v: &Words) -> Words {
        if !self.creates(a) && self.creates(b) {
            let s = if self.odd(a) && self.odd(b) { -Q::one() } else { Q::one() };
            scale(&self.apply(b, &self.apply(a, v)), &s)
        } else {
            self.apply(a, &self.apply(b, v))
        }
    }
}

fn field_flavor(f: Field) -> usize {
    match f {
        Field::Charged { flavor, .. } => flavor,
        Field::Neutral => 0,
    }
}

fn scale(v: &Words, c: &Q) -> Words {
    v.iter().map(|(w, x)| (w.clone(), x * c)).collect()
}

fn vac() -> Words {
    vec![(Vec::new(), Q::one())]
}

fn to_engine(cfg: &PairConfig, v: &Words) -> StateVector {
    let mut out = StateVector::zero();
    for (w, c) in v {
        out.add_scaled(&apply_product(cfg, w, &vacuum(cfg)).unwrap(), c);
    }
    out
}

fn md(f: Field, d2: i64) -> Mode {
    Mode::new(f, d2)
}

const FERMION: Model = Model { fermion: true, chi: false };
const BOSON: Model = Model { fermion: false, chi: false };

pub fn ghost_ladder_commutator() {
    let cfg = PairConfig::boson(1);
    let g_plus = md(Field::plus(1), -1);
    let squared = BOSON.apply(g_plus, &BOSON.apply(g_plus, &vac()));
    let oracle = BOSON.apply(md(Field::minus(1), 1), &squared);
    // Two contractions of [γ^-_{½}, γ^+_{−½}] = −1.
    let single = to_engine(&cfg, &BOSON.apply(g_plus, &vac()));
    assert_eq!(to_engine(&cfg, &oracle), single.scaled(&q(-2)));

    let engine = apply_mode(&cfg, Field::minus(1), ModeIndex(1), &to_engine(&cfg, &squared)).unwrap();
    assert_eq!(engine, to_engine(&cfg, &oracle));
}

pub fn chi_relation_direct_evaluation() {
    let cfg = PairConfig::new(1, Statistics::Fermion, IndexSet::HalfInt, Neutral::Chi, true).unwrap();
    let model = Model { fermion: true, chi: true };
    let created = model.apply(md(Field::Neutral, -1), &vac());
    let oracle = model.apply(md(Field::Neutral, 1), &created);
    assert_eq!(to_engine(&cfg, &oracle), vacuum(&cfg).scaled(&q(-1)));

    let engine = apply_mode(&cfg, Field::Neutral, ModeIndex(1), &to_engine(&cfg, &created)).unwrap();
    assert_eq!(engine, to_engine(&cfg, &oracle));
}

pub fn integer_vacuum_conditions() {
    let cfg = PairConfig::fermion(1, IndexSet::Int);
    let model = FERMION;
    let mut oracle = vec![vacuum(&cfg)];
    for f in [Field::plus(1), Field::minus(1)] {
        let m = md(f, 0);
        if model.creates(m) {
            oracle.push(to_engine(&cfg, &model.apply(m, &vac())));
        }
    }
    let engine: Vec<StateVector> = enumerate_states(&cfg, 0).into_iter().map(StateVector::basis).collect();
    assert_eq!(engine, oracle);
    assert_eq!(engine[1].to_text(), "(1) p1-:[0]");
}

/// Mode indices (doubled) of z^{i−1} w^{−j} in ψ^+(z) ψ^-(w) = Σ ψ^+_m ψ^-_n z^{−m−½} w^{−n−½}.
fn matched_modes(i: i64, j: i64) -> (i64, i64) {
    // −m − ½ = i − 1 and −n − ½ = −j
    (1 - 2 * i, 2 * j - 1)
}

fn e_oracle(model: Model, i: i64, j: i64, v: &Words) -> Words {
    let (a, b) = matched_modes(i, j);
    let out = model.normal_pair(md(Field::plus(1), a), md(Field::minus(1), b), v);
    if model.fermion {
        out
    } else {
        scale(&out, &q(-1))
    }
}

pub fn e_hat_mode_matching() {
    let cfg = PairConfig::fermion(1, IndexSet::HalfInt);
    assert_eq!(matched_modes(1, 0), (-1, -1));
    let oracle = e_oracle(FERMION, 1, 0, &vac());
    let expected = apply_product(&cfg, &[md(Field::plus(1), -1), md(Field::minus(1), -1)], &vacuum(&cfg)).unwrap();
    assert_eq!(to_engine(&cfg, &oracle), expected);
    assert_eq!(apply_e(&cfg, 1, 0, &vacuum(&cfg)), expected);
}

pub fn e_hat_bracket_on_vacuum() {
    for (model, cfg, c) in [
        (FERMION, PairConfig::fermion(1, IndexSet::HalfInt), 1),
        (BOSON, PairConfig::boson(1), -1),
    ] {
        let a = e_oracle(model, 0, 1, &e_oracle(model, 1, 0, &vac()));
        let b = e_oracle(model, 1, 0, &e_oracle(model, 0, 1, &vac()));
        let mut oracle = to_engine(&cfg, &a);
        oracle.sub(&to_engine(&cfg, &b));
        assert_eq!(oracle, vacuum(&cfg).scaled(&q(c)), "{cfg}");

        let v = vacuum(&cfg);
        let mut engine = apply_e(&cfg, 0, 1, &apply_e(&cfg, 1, 0, &v));
        engine.sub(&apply_e(&cfg, 1, 0, &apply_e(&cfg, 0, 1, &v)));
        assert_eq!(engine, oracle, "{cfg}");
        assert_eq!(cfg.central_charge(), q(c));
    }
}

// ---------------------------------------------------------------------------------------------
// Dense matrices on the index window [−4, 4]

const LO: i64 = -4;
const N: usize = 9;

type Dense = [[i64; N]; N];

fn dense_unit(i: i64, j: i64) -> Dense {
    let mut m = [[0; N]; N];
    m[(i - LO) as usize][(j - LO) as usize] = 1;
    m
}

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = [[0; N]; N];
    for i in 0..N {
        for k in 0..N {
            if a[i][k] != 0 {
                for j in 0..N {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

fn dense_trace_cocycle(a: &Dense, b: &Dense) -> i64 {
    let mut jm = [[0; N]; N];
    for (k, row) in jm.iter_mut().enumerate() {
        if k as i64 + LO <= 0 {
            row[k] = 1;
        }
    }
    let ja = dense_mul(&jm, a);
    let aj = dense_mul(a, &jm);
    let mut comm = [[0; N]; N];
    for i in 0..N {
        for j in 0..N {
            comm[i][j] = ja[i][j] - aj[i][j];
        }
    }
    let p = dense_mul(&comm, b);
    (0..N).map(|i| p[i][i]).sum()
}

pub fn cocycle_trace_evaluation() {
    for ((i, j), (k, m), want) in [((0, 1), (1, 0), 1), ((1, 2), (2, 1), 0)] {
        let oracle = dense_trace_cocycle(&dense_unit(i, j), &dense_unit(k, m));
        assert_eq!(oracle, want);
        assert_eq!(cocycle(&unit(i, j), &unit(k, m)), q(oracle));
    }
}

pub fn self_paired_d_generator_vanishes() {
    // E_{10} − E_{1−0,1−1} is the zero matrix.
    let mut m = dense_unit(1, 0);
    let partner = dense_unit(1 - 0, 1 - 1);
    for i in 0..N {
        for j in 0..N {
            m[i][j] -= partner[i][j];
        }
    }
    assert!(m.iter().flatten().all(|&x| x == 0));
    let cfg = PairConfig::fermion(1, IndexSet::HalfInt);
    let g = InfiniteGen::new(AlgebraKind::D, 1, 0);
    assert!(g.canonical().is_none());
    assert!(apply_infinite_gen(&cfg, &g, &vacuum(&cfg)).unwrap().is_zero());
}

// ---------------------------------------------------------------------------------------------
// Zero modes of the finite generating functions

/// Σ_{a+b=0} :X^a Y^b: over |a| ≤ reach, plus an optional constant.
fn zero_mode(model: Model, x: Field, y: Field, int_index: bool, reach2: i64, shift: Q, v: &Words) -> Words {
    let mut out = scale(v, &shift);
    let mut a = -reach2;
    while a <= reach2 {
        if (a.rem_euclid(2) == 0) == int_index {
            out.extend(model.normal_pair(md(x, a), md(y, -a), v));
        }
        a += 1;
    }
    out
}

pub fn e_star_single_contraction() {
    let cfg = PairConfig::fermion(2, IndexSet::HalfInt);
    let seed = FERMION.apply(md(Field::plus(2), -1), &vac());
    let oracle = zero_mode(FERMION, Field::plus(1), Field::minus(2), false, 5, Q::zero(), &seed);
    let expected = apply_mode(&cfg, Field::plus(1), ModeIndex(-1), &vacuum(&cfg)).unwrap();
    assert_eq!(to_engine(&cfg, &oracle), expected);

    let g = FiniteGen::pair(FiniteFamily::Star, 1, 2);
    assert_eq!(apply_finite_gen(&cfg, &g, &to_engine(&cfg, &seed)).unwrap(), expected);
}

pub fn e_star_integer_zero_mode_shift() {
    let cfg = PairConfig::fermion(1, IndexSet::Int);
    let oracle = zero_mode(FERMION, Field::plus(1), Field::minus(1), true, 6, frac(1, 2), &vac());
    assert_eq!(to_engine(&cfg, &oracle), vacuum(&cfg).scaled(&frac(1, 2)));

    let g = FiniteGen::pair(FiniteFamily::Star, 1, 1);
    assert_eq!(apply_finite_gen(&cfg, &g, &vacuum(&cfg)).unwrap(), to_engine(&cfg, &oracle));
}

// ---------------------------------------------------------------------------------------------
// Determinant expansions

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut r = p.clone();
            r.insert(pos, n - 1);
            let sign = if (p.len() - pos) % 2 == 1 { -s } else { s };
            out.push((r, sign));
        }
    }
    out
}

/// Leibniz expansion of det[γ^{+,p}_{−c+½}]_{p,c ≤ size} applied to the vacuum.
fn gamma_plus_det(size: usize) -> Words {
    let mut out = Words::new();
    for (perm, s) in permutations(size) {
        let word: Vec<Mode> = (0..size).map(|p| md(Field::plus(p + 1), 1 - 2 * (perm[p] as i64 + 1))).collect();
        let mut v = vac();
        for &m in word.iter().rev() {
            v = BOSON.apply(m, &v);
        }
        out.extend(scale(&v, &q(s)));
    }
    out
}

pub fn gamma_plus_two_by_two() {
    let cfg = PairConfig::boson(2);
    let oracle = to_engine(&cfg, &gamma_plus_det(2));
    let by_hand = {
        let g = |p: usize, d2: i64| md(Field::plus(p), d2);
        let mut v = apply_product(&cfg, &[g(1, -1), g(2, -3)], &vacuum(&cfg)).unwrap();
        v.sub(&apply_product(&cfg, &[g(1, -3), g(2, -1)], &vacuum(&cfg)).unwrap());
        v
    };
    assert_eq!(oracle, by_hand);
    assert_eq!(gamma_vector(&cfg, GammaKind::Plus { i: 2, m: 1 }).unwrap(), oracle);
}

pub fn gamma_det_full_width_is_gamma_plus() {
    for l in 1..=2 {
        let cfg = PairConfig::boson(l);
        let oracle = to_engine(&cfg, &gamma_plus_det(l));
        assert_eq!(gamma_vector(&cfg, GammaKind::Det { j: l }).unwrap(), oracle, "l = {l}");
        assert_eq!(gamma_vector(&cfg, GammaKind::Plus { i: l, m: 1 }).unwrap(), oracle, "l = {l}");
    }
}

// ---------------------------------------------------------------------------------------------
// Coroot read-off

fn read_off(p: &DualPairKind, v: &StateVector, kmax: i64) -> BTreeMap<i64, Q> {
    let cfg = p.cfg();
    (0..=kmax)
        .map(|k| (k, coroot_value(&cfg, p.infinite(), k, v).unwrap()))
        .filter(|(_, h)| !h.is_zero())
        .collect()
}

pub fn o4_vector_infinite_weight() {
    let p = pair("O(4)/dinf");
    let cfg = p.cfg();
    let v = apply_mode(&cfg, Field::plus(1), ModeIndex(-1), &vacuum(&cfg)).unwrap();
    let h = read_off(&p, &v, 6);
    assert_eq!(h, BTreeMap::from([(0, q(3)), (1, q(1))]));
    // c = ½(h_0 + h_1) + Σ_{i≥2} h_i
    let c = frac(1, 2) * (&h[&0] + &h[&1]);
    assert_eq!(c, q(2));
    assert_eq!(AlgebraKind::D.level(&h), c);

    let mapped = lambda_map(&p, &label("O(4):[1,0]")).unwrap();
    assert_eq!(mapped.coeffs, h);
    assert_eq!(mapped.charge, c);
    assert_eq!(infinite_weight(&p, &v).unwrap(), mapped);
}

pub fn sp2_dinf_weight_read_off() {
    let p = pair("Sp(2)/dinf");
    let recipe = HwvRecipe::new(p, label("Sp(2):[2]"), Default::default()).unwrap();
    let v = build_hwv(&recipe).unwrap();
    let h = read_off(&p, &v, 6);
    let mapped = lambda_map(&p, &label("Sp(2):[2]")).unwrap();
    assert_eq!(mapped.coeffs, h);
    assert_eq!(AlgebraKind::D.level(&h), p.cfg().central_charge());
    assert_eq!(mapped.charge, q(-1));
}

// ---------------------------------------------------------------------------------------------
// Weyl group oracles for so(4)

type Laurent2 = BTreeMap<[i64; 2], i64>;

/// D2 Weyl group: coordinate permutations with an even number of sign changes; det = permutation sign.
fn d2_weyl() -> Vec<([[i64; 2]; 2], i64)> {
    let mut out = Vec::new();
    for (s0, s1) in [(1, 1), (-1, -1)] {
        out.push(([[s0, 0], [0, s1]], 1));
        out.push(([[0, s0], [s1, 0]], -1));
    }
    out
}

fn alternant(mu: [i64; 2]) -> Laurent2 {
    let mut out = Laurent2::new();
    for (w, det) in d2_weyl() {
        let e = [w[0][0] * mu[0] + w[0][1] * mu[1], w[1][0] * mu[0] + w[1][1] * mu[1]];
        *out.entry(e).or_insert(0) += det;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn laurent_mul(a: &Laurent2, b: &Laurent2) -> Laurent2 {
    let mut out = Laurent2::new();
    for (ea, x) in a {
        for (eb, y) in b {
            *out.entry([ea[0] + eb[0], ea[1] + eb[1]]).or_insert(0) += x * y;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Weyl dimension for D2 with ρ = (1, 0): positive roots e1 − e2, e1 + e2.
fn so4_dim(lam: [i64; 2]) -> i64 {
    let v = [lam[0] + 1, lam[1]];
    (v[0] - v[1]) * (v[0] + v[1])
}

/// O(4) irreps with m_2 > 0 are two SO(4) irreps (m_2 and −m_2) glued together.
fn o4_dim(lam: [i64; 2]) -> i64 {
    if lam[1] > 0 {
        so4_dim(lam) + so4_dim([lam[0], -lam[1]])
    } else {
        so4_dim(lam)
    }
}

pub fn so4_vector_character() {
    let g = GroupKind::new(GroupTag::SOEven, 2).unwrap();
    let ch = character(g, &FiniteWeightLabel::plain(g, vec![1, 0])).unwrap();
    assert_eq!(ch.scale, 1);
    let engine: Laurent2 = ch.terms.iter().map(|(e, c)| ([e[0], e[1]], *c)).collect();
    let rho = [1, 0];
    assert_eq!(laurent_mul(&engine, &alternant(rho)), alternant([2, 0]));
    let expected: Laurent2 = [[1, 0], [-1, 0], [0, 1], [0, -1]].into_iter().map(|e| (e, 1)).collect();
    assert_eq!(engine, expected);
}

pub fn o4_vector_dimension() {
    assert_eq!(so4_dim([1, 0]), 4);
    assert_eq!(o4_dim([1, 0]), 4);
    assert_eq!(weyl_dim(GroupKind::new(GroupTag::OEven, 2).unwrap(), &label("O(4):[1,0]")).unwrap(), 4);
}

// ---------------------------------------------------------------------------------------------
// Character restriction to O(2) × O(2)
//
// A class function on O(2) × O(2) is recorded on the four components (rotation or reflection in
// each factor) as a Laurent polynomial in the rotation angles x, y.

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum O2 {
    Triv,
    Det,
    Rot(i64),
}

type ClassFn = BTreeMap<(u8, [i64; 2]), i64>;

fn o2_value(r: O2, reflection: bool) -> Vec<(i64, i64)> {
    match (r, reflection) {
        (O2::Triv, _) => vec![(0, 1)],
        (O2::Det, false) => vec![(0, 1)],
        (O2::Det, true) => vec![(0, -1)],
        (O2::Rot(k), false) => vec![(k, 1), (-k, 1)],
        (O2::Rot(_), true) => vec![],
    }
}

fn product_char(a: O2, b: O2) -> ClassFn {
    let mut out = ClassFn::new();
    for comp in 0..4u8 {
        for (ex, cx) in o2_value(a, comp & 1 == 1) {
            for (ey, cy) in o2_value(b, comp & 2 == 2) {
                *out.entry((comp, [ex, ey])).or_insert(0) += cx * cy;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// tr(g) and tr(g²) of the defining representation of O(4) on each component.
fn vector_traces(power: i64) -> ClassFn {
    let mut out = ClassFn::new();
    for comp in 0..4u8 {
        for (factor, reflection) in [(0, comp & 1 == 1), (1, comp & 2 == 2)] {
            if reflection {
                if power % 2 == 0 {
                    *out.entry((comp, [0, 0])).or_insert(0) += 2;
                }
            } else {
                for s in [power, -power] {
                    let mut e = [0, 0];
                    e[factor] = s;
                    *out.entry((comp, e)).or_insert(0) += 1;
                }
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn class_mul(a: &ClassFn, b: &ClassFn) -> ClassFn {
    let mut out = ClassFn::new();
    for ((ca, ea), x) in a {
        for ((cb, eb), y) in b {
            if ca == cb {
                *out.entry((*ca, [ea[0] + eb[0], ea[1] + eb[1]])).or_insert(0) += x * y;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Traceless symmetric square: (tr(g)² + tr(g²))/2 − 1.
fn sym2_traceless() -> ClassFn {
    let t = vector_traces(1);
    let mut out = class_mul(&t, &t);
    for ((c, e), x) in vector_traces(2) {
        *out.entry((c, e)).or_insert(0) += x;
    }
    for v in out.values_mut() {
        assert_eq!(*v % 2, 0);
        *v /= 2;
    }
    for comp in 0..4u8 {
        *out.entry((comp, [0, 0])).or_insert(0) -= 1;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Multiplicities of O(2) × O(2) irreps, solved exactly against the product characters.
fn restrict(f: &ClassFn) -> BTreeMap<(O2, O2), i64> {
    let candidates: Vec<O2> = [O2::Triv, O2::Det].into_iter().chain((1..=4).map(O2::Rot)).collect();
    let pairs: Vec<(O2, O2)> = candidates.iter().flat_map(|&a| candidates.iter().map(move |&b| (a, b))).collect();
    let keys: Vec<(u8, [i64; 2])> = {
        let mut k: Vec<_> = pairs.iter().flat_map(|&(a, b)| product_char(a, b).into_keys()).collect();
        k.extend(f.keys().copied());
        k.sort();
        k.dedup();
        k
    };
    let rows = keys.len();
    let cols = pairs.len();
    let mut m: Vec<Vec<Q>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Q> = pairs.iter().map(|&(a, b)| q(*product_char(a, b).get(&keys[r]).unwrap_or(&0))).collect();
            row.push(q(*f.get(&keys[r]).unwrap_or(&0)));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    assert_eq!(pivots.len(), cols, "candidate characters are independent");
    assert!((r..rows).all(|i| m[i][cols].is_zero()), "restriction lies in the candidate span");
    let mut out = BTreeMap::new();
    for (i, &c) in pivots.iter().enumerate() {
        let x = &m[i][cols];
        assert!(x.is_integer() && !x.is_negative());
        if !x.is_zero() {
            out.insert(pairs[c], x.to_integer().try_into().unwrap());
        }
    }
    out
}

fn o2_label(r: O2) -> String {
    match r {
        O2::Triv => "O(2):[0]".into(),
        O2::Det => "O(2):[0]*det".into(),
        O2::Rot(k) => format!("O(2):[{k}~]"),
    }
}

fn engine_restriction(lambda: &str) -> BTreeMap<(String, String), i64> {
    let o2 = GroupKind::new(GroupTag::OEven, 1).unwrap();
    branch_decomposition(&label(lambda), o2, o2)
        .unwrap()
        .into_iter()
        .map(|(a, b, m)| ((a.to_text(), b.to_text()), m as i64))
        .collect()
}

fn named(r: BTreeMap<(O2, O2), i64>) -> BTreeMap<(String, String), i64> {
    r.into_iter().map(|((a, b), m)| ((o2_label(a), o2_label(b)), m)).collect()
}

pub fn o4_vector_restriction() {
    let oracle = restrict(&vector_traces(1));
    assert_eq!(oracle, BTreeMap::from([((O2::Rot(1), O2::Triv), 1), ((O2::Triv, O2::Rot(1)), 1)]));
    assert_eq!(engine_restriction("O(4):[1,0]"), named(oracle));
}

pub fn o4_symmetric_square_restriction() {
    let oracle = restrict(&sym2_traceless());
    assert_eq!(oracle.values().sum::<i64>(), 4);
    assert_eq!(oracle.get(&(O2::Rot(1), O2::Triv)), None);
    assert_eq!(engine_restriction("O(4):[2,0]"), named(oracle));
}

pub fn overline_dimension_audit() {
    for (text, lam) in [("O(4):[1,1~]", [1, 1]), ("O(4):[2,1~]", [2, 1]), ("O(4):[2,2~]", [2, 2])] {
        let o2_dim = |s: &str| if s.contains('~') { 2 } else { 1 };
        let total: i64 = engine_restriction(text).iter().map(|((a, b), m)| m * o2_dim(a) * o2_dim(b)).sum();
        assert_eq!(total, o4_dim(lam), "{text}");
        assert_eq!(weyl_dim(label(text).group, &label(text)).unwrap() as i64, o4_dim(lam), "{text}");
    }
}

pub fn seesaw_examples_match_restriction() {
    let vector = restrict(&vector_traces(1));
    let sym = restrict(&sym2_traceless());
    for (lambda, oracle) in [("O(4):[1,0]", &vector), ("O(4):[2,0]", &sym)] {
        let want = oracle.get(&(O2::Rot(1), O2::Triv)).copied().unwrap_or(0) as u64;
        let case = SeesawCase::new(1, 1, label(lambda), label("O(2):[1~]"), label("O(2):[0]"), 8).unwrap();
        let out = check_seesaw(&case).unwrap();
        assert_eq!(out.finite, want, "{lambda}");
        assert_eq!(out.infinite.multiplicity, want, "{lambda}");
        let induced = tensor_product_multiplicity_via_induction(
            1,
            1,
            &label("O(2):[1~]"),
            &label("O(2):[0]"),
            &label(lambda),
        )
        .unwrap();
        assert_eq!(induced, want, "{lambda}");
    }
}

// ---------------------------------------------------------------------------------------------
// Span closure at tiny scale

fn rank_by_degree(vectors: &[StateVector], dmax2: i64) -> Vec<usize> {
    let mut out = vec![0; dmax2 as usize + 1];
    for d2 in 0..=dmax2 {
        let mut rows: Vec<BTreeMap<FockState, Q>> = vectors
            .iter()
            .filter(|v| v.homogeneous_degree2() == Some(d2))
            .map(|v| v.iter().map(|(s, c)| (s.clone(), c.clone())).collect())
            .collect();
        let mut rank = 0;
        while let Some(pivot_row) = rows.iter().position(|r| !r.is_empty()) {
            let row = rows.swap_remove(pivot_row);
            let (key, lead) = row.iter().next().map(|(k, c)| (k.clone(), c.clone())).unwrap();
            for r in rows.iter_mut() {
                if let Some(c) = r.get(&key).cloned() {
                    let f = c / &lead;
                    for (k, x) in &row {
                        let e = r.entry(k.clone()).or_insert_with(Q::zero);
                        *e -= &f * x;
                        if e.is_zero() {
                            r.remove(k);
                        }
                    }
                }
            }
            rank += 1;
        }
        out[d2 as usize] = rank;
    }
    out
}

/// Everything reachable from `seed` by both algebras inside degrees ≤ d_max.
fn closure(p: &DualPairKind, seed: &StateVector, dmax2: i64) -> Vec<StateVector> {
    let cfg = p.cfg();
    let gens = canonical_gens(p.infinite(), -dmax2 - 2, dmax2 + 2);
    let fin = horizontal(p).all();
    let mut seen = vec![seed.clone()];
    let mut frontier = vec![seed.clone()];
    while let Some(v) = frontier.pop() {
        let mut images: Vec<StateVector> = gens.iter().map(|g| apply_infinite_gen(&cfg, g, &v).unwrap()).collect();
        images.extend(fin.iter().map(|g| apply_finite_gen(&cfg, g, &v).unwrap()));
        for w in images {
            let Some(d2) = w.homogeneous_degree2() else { continue };
            if w.is_zero() || d2 > dmax2 {
                continue;
            }
            let before = rank_by_degree(&seen, dmax2)[d2 as usize];
            seen.push(w.clone());
            if rank_by_degree(&seen, dmax2)[d2 as usize] > before {
                frontier.push(w);
            } else {
                seen.pop();
            }
        }
    }
    seen
}

pub fn vacuum_module_of_o2_dinf() {
    let p = pair("O(2)/dinf");
    let v = vacuum(&p.cfg());
    let oracle = rank_by_degree(&closure(&p, &v, 2), 2);
    // E_{10} vanishes in d∞, so ψ^+_{−½}ψ^-_{−½}|0⟩ is not reached from the vacuum.
    assert_eq!(oracle, vec![1, 0, 0]);
    assert_eq!(generate_joint_module(&p, &v, 2).unwrap(), oracle);

    // It heads its own component: τ flips its sign, so it carries the det label.
    let cfg = p.cfg();
    let w = apply_product(&cfg, &[md(Field::plus(1), -1), md(Field::minus(1), -1)], &vacuum(&cfg)).unwrap();
    let found = find_joint_hwvs(&p, 2).unwrap();
    let at_one: Vec<_> = found.iter().filter(|h| h.key.degree2 == 2).collect();
    assert_eq!(at_one.len(), 1);
    assert!(at_one[0].vector.ratio_to(&w).is_some());
    assert_eq!(resolve_label(&p, &w, &at_one[0].key.finite).unwrap(), label("O(2):[0]*det"));
}

pub fn charged_module_of_gl1() {
    let p = pair("GL(1)/gl");
    let cfg = p.cfg();
    let v = apply_mode(&cfg, Field::plus(1), ModeIndex(-1), &vacuum(&cfg)).unwrap();
    let oracle = rank_by_degree(&closure(&p, &v, 1), 1);
    assert_eq!(oracle[1], 1);
    assert_eq!(generate_joint_module(&p, &v, 1).unwrap(), oracle);
}

pub fn small_decompositions_balance() {
    for (name, fermion_l) in [("GL(1)/gl", 1), ("O(2)/dinf", 1)] {
        let p = pair(name);
        let report = verify_decomposition(&p, 4).unwrap();
        assert!(report.pass(), "{name}: {:?}", report.issues);
        let series = fock_series(fermion_l, true, true, 0, 5);
        for row in &report.ledger {
            assert_eq!(row.fock_dim as i64, series[row.degree2 as usize], "{name}");
            assert_eq!(row.sum_dim, row.fock_dim, "{name}");
        }
    }
}

macro_rules! fixtures {
    ($($name:ident),* $(,)?) => {
        pub const ALL: &[(&str, fn())] = &[$((stringify!($name), $name)),*];

        #[cfg(test)]
        mod run {
            $(
                #[test]
                fn $name() {
                    super::$name()
                }
            )*
        }
    };
}

fixtures![
    graded_dimensions_are_partition_counts,
    ghost_ladder_commutator,
    chi_relation_direct_evaluation,
    integer_vacuum_conditions,
    e_hat_mode_matching,
    e_hat_bracket_on_vacuum,
    cocycle_trace_evaluation,
    self_paired_d_generator_vanishes,
    e_star_single_contraction,
    e_star_integer_zero_mode_shift,
    gamma_plus_two_by_two,
    gamma_det_full_width_is_gamma_plus,
    o4_vector_infinite_weight,
    sp2_dinf_weight_read_off,
    so4_vector_character,
    o4_vector_dimension,
    o4_vector_restriction,
    o4_symmetric_square_restriction,
    overline_dimension_audit,
    seesaw_examples_match_restriction,
    vacuum_module_of_o2_dinf,
    charged_module_of_gl1,
    small_decompositions_balance,
];
