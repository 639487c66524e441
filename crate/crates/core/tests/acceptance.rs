//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on any failure.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{pairs, DenseState};
use davn_core::io::{pcg_json, report_json};
use davn_core::{
    brute_force_colorable, build_pcg, check_colorable, conditional_probability,
    derive_conditions, export_dot, generate, has_odd_red_loop, lhv_consistent_assignments,
    verify_davn, verify_davn_with, ColorabilityResult, ConditionSet, EdgeScope, FamilyId,
    NonstabilizerVerdict, OutcomeVector, Pcg, PcgEdge, PcgStateSpec, QubitSet, Rational, Sign,
    VerifyOptions,
};
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

type Outcome = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// `(edge, alpha, conditioning)` with 1-based qubits, conditioning sorted.
type Relation = (Vec<usize>, i64, Vec<(usize, i64)>);

fn relation(edge: &[usize], alpha: i64, cond: &[(usize, i64)]) -> Relation {
    let mut e = edge.to_vec();
    e.sort_unstable();
    let mut c = cond.to_vec();
    c.sort_unstable();
    (e, alpha, c)
}

fn relations(set: &ConditionSet) -> BTreeSet<Relation> {
    set.conditions
        .iter()
        .flat_map(|c| c.conditions())
        .map(|h| relation(&h.edge.to_one_based(), h.alpha.value(), &h.conditioning.pairs()))
        .collect()
}

/// Outcome with the listed 1-based qubits at Z = -1.
fn outcome(n: usize, minus: &[usize]) -> OutcomeVector {
    OutcomeVector::new(n, QubitSet::from_one_based(minus, n).unwrap())
}

fn others(n: usize, skip: &[usize]) -> Vec<usize> {
    (1..=n).filter(|q| !skip.contains(q)).collect()
}

fn state(id: FamilyId) -> Result<PcgStateSpec, String> {
    generate(id).map_err(|e| format!("{id}: {e}"))
}

fn expect_relations(s: &PcgStateSpec, o: &OutcomeVector, want: BTreeSet<Relation>) -> Outcome {
    let got = relations(&derive_conditions(s, o, EdgeScope::All).map_err(|e| e.to_string())?);
    ensure!(got == want, "outcome {}: derived {:?}, expected {:?}", o.to_bitstring(), got, want);
    Ok(())
}

fn expect_uniform(s: &PcgStateSpec, outcomes: usize) -> Outcome {
    let support = s.outcome_support();
    ensure!(support.len() == outcomes, "{} outcomes, expected {outcomes}", support.len());
    let each = Rational::new(1, outcomes as i64);
    for (o, p) in &support {
        ensure!(*p == each, "P({}) = {p}, expected {each}", o.to_bitstring());
    }
    Ok(())
}

fn expect_rho(s: &PcgStateSpec, d0: Rational, d1: Rational) -> Outcome {
    let dense = DenseState::new(s);
    let z = Rational::zero();
    let want = [[d0, z], [z, d1]];
    for k in 0..s.n() {
        let rho = s.reduced_density(k).entries;
        ensure!(rho == want, "rho_{} = {:?}, expected diag({d0}, {d1})", k + 1, rho);
        ensure!(dense.reduced_density(k) == want, "dense rho_{} disagrees", k + 1);
    }
    Ok(())
}

fn expect_davn(s: &PcgStateSpec, certified: bool) -> Outcome {
    let report = verify_davn(s);
    ensure!(report.davn, "davn = false");
    ensure!(report.uncolorable == report.total(), "{}/{} un-colorable", report.uncolorable, report.total());
    ensure!(report.success_probability() == Rational::one(), "success probability below 1");
    let got = matches!(report.nonstabilizer, NonstabilizerVerdict::Certified { .. });
    ensure!(got == certified, "nonstabilizer verdict {:?}", report.nonstabilizer);
    let lhv = lhv_consistent_assignments(s, None).map_err(|e| e.to_string())?;
    ensure!(lhv.count == 0, "LHV oracle found {} consistent assignments", lhv.count);
    Ok(())
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(())
}

/// Conditions the state `|0..0> - Σ_{|S|=2} |S>` should yield.
fn phi_n_expected(n: usize, minus: Option<(usize, usize)>) -> BTreeSet<Relation> {
    let mut out = BTreeSet::new();
    match minus {
        None => {
            for k in 1..=n {
                for l in k + 1..=n {
                    let cond: Vec<_> = others(n, &[k, l]).into_iter().map(|q| (q, 1)).collect();
                    out.insert(relation(&[k, l], -1, &cond));
                }
            }
        }
        Some((i1, i2)) => {
            for (a, b) in [(i1, i2), (i2, i1)] {
                // X_b X_j = 1 given Z_a = -1 and the remaining qubits at +1.
                for j in others(n, &[i1, i2]) {
                    let mut cond: Vec<_> = others(n, &[i1, i2, j]).into_iter().map(|q| (q, 1)).collect();
                    cond.push((a, -1));
                    out.insert(relation(&[b, j], 1, &cond));
                }
            }
            let cond: Vec<_> = others(n, &[i1, i2]).into_iter().map(|q| (q, 1)).collect();
            out.insert(relation(&[i1, i2], -1, &cond));
        }
    }
    out
}

/// Conditions the state `|0..0> - Σ_{|S|=n-1} |S>` should yield.
fn weight_n_minus_one_expected(n: usize, zero_at: Option<usize>) -> BTreeSet<Relation> {
    let mut out = BTreeSet::new();
    match zero_at {
        None => {
            for i in 1..=n {
                out.insert(relation(&others(n, &[i]), -1, &[(i, 1)]));
            }
        }
        Some(i) => {
            out.insert(relation(&others(n, &[i]), -1, &[(i, 1)]));
            for k in others(n, &[i]) {
                let cond: Vec<_> = others(n, &[i, k]).into_iter().map(|q| (q, -1)).collect();
                out.insert(relation(&[i, k], 1, &cond));
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s = state(FamilyId::Ghz3)?;
    expect_uniform(&s, 4)?;
    let table = [
        (vec![], [relation(&[2, 3], -1, &[(1, 1)]), relation(&[1, 3], -1, &[(2, 1)]), relation(&[1, 2], -1, &[(3, 1)])]),
        (vec![1, 2], [relation(&[2, 3], 1, &[(1, -1)]), relation(&[1, 3], 1, &[(2, -1)]), relation(&[1, 2], -1, &[(3, 1)])]),
        (vec![2, 3], [relation(&[2, 3], -1, &[(1, 1)]), relation(&[1, 3], 1, &[(2, -1)]), relation(&[1, 2], 1, &[(3, -1)])]),
        (vec![1, 3], [relation(&[2, 3], 1, &[(1, -1)]), relation(&[1, 3], -1, &[(2, 1)]), relation(&[1, 2], 1, &[(3, -1)])]),
    ];
    let mut total = 0;
    for (minus, rows) in table {
        total += rows.len();
        expect_relations(&s, &outcome(3, &minus), rows.into_iter().collect())?;
    }
    ensure!(total == 12, "table size {total}");
    expect_davn(&s, false)?;
    within(start, Duration::from_secs(1))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let s = state(FamilyId::Phi4)?;
    expect_uniform(&s, 7)?;
    expect_relations(&s, &outcome(4, &[]), phi_n_expected(4, None))?;
    for i in 1..=4 {
        for j in i + 1..=4 {
            let rel = phi_n_expected(4, Some((i, j)));
            ensure!(rel.len() == 5, "expected five relations");
            expect_relations(&s, &outcome(4, &[i, j]), rel)?;
        }
    }
    let all_plus = outcome(4, &[]);
    let pcg = build_pcg(&all_plus, &derive_conditions(&s, &all_plus, EdgeScope::All).unwrap());
    ensure!(pcg.marks().iter().all(|&m| m == Sign::Plus), "all-+1 outcome must mark every vertex filled");
    ensure!(
        pcg.edges().len() == 6 && pcg.edges().iter().all(|e| e.vertices.len() == 2 && e.weight == Sign::Minus),
        "expected K4 with every edge red, got {:?}",
        pcg.edges()
    );
    expect_rho(&s, Rational::new(4, 7), Rational::new(3, 7))?;
    expect_davn(&s, true)?;
    within(start, Duration::from_secs(1))
}

fn criterion_3() -> Outcome {
    for id in [FamilyId::Phi4Prime, FamilyId::Phi4DoublePrime] {
        let start = Instant::now();
        let s = state(id)?;
        expect_uniform(&s, 6).map_err(|e| format!("{id}: {e}"))?;
        expect_davn(&s, true).map_err(|e| format!("{id}: {e}"))?;
        within(start, Duration::from_secs(1)).map_err(|e| format!("{id}: {e}"))?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let s = state(FamilyId::Phi5)?;
    expect_uniform(&s, 6)?;
    // Every product of four X's given Z_i = +1 is -1.
    expect_relations(&s, &outcome(5, &[]), weight_n_minus_one_expected(5, None))?;
    for i in 1..=5 {
        let rel = weight_n_minus_one_expected(5, Some(i));
        ensure!(rel.len() == 5, "expected five relations");
        expect_relations(&s, &outcome(5, &others(5, &[i])), rel)?;
    }
    expect_rho(&s, Rational::new(1, 3), Rational::new(2, 3))?;
    expect_davn(&s, true)?;
    within(start, Duration::from_secs(1))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    for n in 4..=8 {
        let s = state(FamilyId::PhiN(n))?;
        let c = pairs(n) as i64;
        expect_uniform(&s, pairs(n) + 1)?;
        expect_relations(&s, &outcome(n, &[]), phi_n_expected(n, None))?;
        for i in 1..=n {
            for j in i + 1..=n {
                expect_relations(&s, &outcome(n, &[i, j]), phi_n_expected(n, Some((i, j))))?;
            }
        }
        let counted = (Rational::new(c - n as i64 + 2, c + 1), Rational::new(n as i64 - 1, c + 1));
        expect_rho(&s, counted.0, counted.1).map_err(|e| format!("phi_n({n}): {e}"))?;
        // The closed form printed with this family is off by one in both entries.
        let printed = (Rational::new(c - n as i64 + 1, c + 1), Rational::new(n as i64, c + 1));
        ensure!(printed != counted, "printed formula unexpectedly matches at n = {n}");
        expect_davn(&s, true).map_err(|e| format!("phi_n({n}): {e}"))?;
    }
    println!("    note: phi_n marginals follow diag((C-n+2)/(C+1), (n-1)/(C+1)), one off in each entry from the (C-n+1, n) closed form");
    for m in 1..=3 {
        let n = 2 * m + 3;
        let s = state(FamilyId::Phi2n3(m))?;
        expect_uniform(&s, 2 * m + 4)?;
        expect_relations(&s, &outcome(n, &[]), weight_n_minus_one_expected(n, None))?;
        for i in 1..=n {
            expect_relations(&s, &outcome(n, &others(n, &[i])), weight_n_minus_one_expected(n, Some(i)))?;
        }
        let d = m as i64 + 2;
        expect_rho(&s, Rational::new(1, d), Rational::new(d - 1, d)).map_err(|e| format!("phi_2n3({m}): {e}"))?;
        expect_davn(&s, true).map_err(|e| format!("phi_2n3({m}): {e}"))?;
    }
    within(start, Duration::from_secs(60))
}

fn edge_list(pcg: &Pcg) -> BTreeSet<(Vec<usize>, i64)> {
    pcg.edges().iter().map(|e| (e.vertices.to_one_based(), e.weight.value())).collect()
}

fn figure_pcg(id: FamilyId, minus: &[usize]) -> Result<Pcg, String> {
    let s = state(id)?;
    let o = outcome(s.n(), minus);
    Ok(build_pcg(&o, &derive_conditions(&s, &o, EdgeScope::All).map_err(|e| e.to_string())?))
}

fn criterion_6() -> Outcome {
    let a = figure_pcg(FamilyId::Fig1a, &[3])?;
    ensure!(
        edge_list(&a) == BTreeSet::from([(vec![1, 3], -1), (vec![2, 3], 1)]),
        "fig1a edges {:?}",
        edge_list(&a)
    );
    let b = figure_pcg(FamilyId::Fig1b, &[3, 4])?;
    ensure!(
        edge_list(&b) == BTreeSet::from([(vec![1, 2, 3], -1), (vec![3, 4], 1)]),
        "fig1b edges {:?}",
        edge_list(&b)
    );
    for (name, pcg) in [("fig1a", &a), ("fig1b", &b)] {
        match check_colorable(pcg) {
            ColorabilityResult::Colorable(w) => ensure!(pcg.is_satisfied_by(&w), "{name}: bad witness"),
            other => return Err(format!("{name}: expected colorable, got {other:?}")),
        }
    }
    for id in [FamilyId::Fig1a, FamilyId::Fig1b] {
        let report = verify_davn(&state(id)?);
        ensure!(report.uncolorable == 0 && !report.davn, "{id}: {} un-colorable groups", report.uncolorable);
    }
    let c = figure_pcg(FamilyId::Fig1c, &[2, 3])?;
    ensure!(
        edge_list(&c) == BTreeSet::from([(vec![1, 2], -1), (vec![1, 3], 1), (vec![2, 3], 1)]),
        "fig1c edges {:?}",
        edge_list(&c)
    );
    match check_colorable(&c) {
        ColorabilityResult::Uncolorable(davn_core::Certificate::Combination(idx)) => {
            ensure!(c.is_valid_certificate(&idx), "fig1c certificate does not cancel")
        }
        other => return Err(format!("fig1c: expected un-colorable, got {other:?}")),
    }
    let lp = has_odd_red_loop(&c).ok_or("fig1c: no odd red loop found")?;
    ensure!(lp.edges.len() == 3, "fig1c loop {:?}", lp.edges);
    let p = davn_core::success_probability(&state(FamilyId::Fig1a)?);
    ensure!(p < Rational::one(), "fig1a success probability {p}");
    Ok(())
}

fn random_pcg() -> impl Strategy<Value = Pcg> {
    (2usize..=10).prop_flat_map(|n| {
        let sign = prop_oneof![Just(Sign::Plus), Just(Sign::Minus)];
        let edge = (prop::sample::subsequence((0..n).collect::<Vec<_>>(), 2..=n), sign.clone())
            .prop_map(|(vs, w)| PcgEdge { vertices: vs.into_iter().map(QubitSet::single).fold(QubitSet::EMPTY, |a, b| a.union(b)), weight: w });
        (prop::collection::vec(sign, n), prop::collection::vec(edge, 0..=12))
            .prop_map(move |(marks, edges)| Pcg::new(n, marks, edges).unwrap())
    })
}

fn small_families() -> Vec<FamilyId> {
    let mut ids = vec![
        FamilyId::Ghz3,
        FamilyId::Phi4,
        FamilyId::Phi4Prime,
        FamilyId::Phi4DoublePrime,
        FamilyId::Phi5,
        FamilyId::Fig1a,
        FamilyId::Fig1b,
        FamilyId::Fig1c,
    ];
    ids.extend((4..=10).map(FamilyId::PhiN));
    ids.extend((1..=3).map(FamilyId::Phi2n3));
    ids
}

fn criterion_7() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = random_pcg();
    let mut disagreements = 0;
    let trials = 2000;
    for _ in 0..trials {
        let pcg = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let fast = check_colorable(&pcg);
        let slow = brute_force_colorable(&pcg).map_err(|e| e.to_string())?;
        let certified = match &fast {
            ColorabilityResult::Colorable(w) => pcg.is_satisfied_by(w),
            ColorabilityResult::Uncolorable(davn_core::Certificate::Combination(idx)) => pcg.is_valid_certificate(idx),
            ColorabilityResult::Uncolorable(_) => false,
        };
        if fast.is_colorable() != slow.is_colorable() || !certified {
            disagreements += 1;
        }
    }
    ensure!(disagreements == 0, "{disagreements} of {trials} random PCGs disagree");
    for id in small_families() {
        let s = state(id)?;
        ensure!(s.n() <= 10, "{id} has {} qubits", s.n());
        let lhv = lhv_consistent_assignments(&s, None).map_err(|e| e.to_string())?;
        ensure!(verify_davn(&s).davn == (lhv.count == 0), "{id}: davn and LHV count {} disagree", lhv.count);
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    for id in small_families() {
        let s = state(id)?;
        let dense = DenseState::new(&s);
        let each = Rational::new(1, s.len() as i64);
        for (o, p) in s.outcome_support() {
            ensure!(p == each, "{id} P({}) = {p}", o.to_bitstring());
            ensure!(dense.z_probability(&o.values()) == each, "{id}: dense probability disagrees");
            for cond in derive_conditions(&s, &o, EdgeScope::All).map_err(|e| e.to_string())?.conditions {
                for h in cond.conditions() {
                    let q = conditional_probability(&s, h.edge, h.alpha, &h.conditioning).map_err(|e| e.to_string())?;
                    ensure!(q == Rational::one(), "{id}: condition {:?} holds with {q}", h);
                    let oracle = dense.conditional_x_probability(&h.edge.to_one_based(), h.alpha.value(), &h.conditioning.pairs());
                    ensure!(oracle == Some(Rational::one()), "{id}: dense oracle gives {oracle:?}");
                }
            }
        }
    }
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src");
    for entry in fs::read_dir(&src).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        for ty in ["f32", "f64"] {
            ensure!(!text.contains(ty), "{} mentions {ty}", path.display());
        }
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    for id in small_families() {
        let s = state(id)?;
        let render = |jobs| {
            let opts = VerifyOptions { jobs, with_lhv: true, ..VerifyOptions::default() };
            verify_davn_with(&s, &opts).map(|r| report_json(&r)).map_err(|e| e.to_string())
        };
        ensure!(render(1)? == render(4)?, "{id}: report differs between 1 and 4 jobs");
    }
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (id, minus, name) in [
        (FamilyId::Fig1a, &[3][..], "fig1a"),
        (FamilyId::Fig1b, &[3, 4][..], "fig1b"),
        (FamilyId::Fig1c, &[2, 3][..], "fig1c"),
    ] {
        let pcg = figure_pcg(id, minus)?;
        let read = |ext: &str| fs::read_to_string(golden.join(format!("{name}.{ext}"))).map_err(|e| e.to_string());
        ensure!(export_dot(&pcg) == read("dot")?, "{name}.dot drifted");
        ensure!(export_dot(&pcg) == export_dot(&pcg), "{name}: unstable DOT output");
        ensure!(pcg_json(&pcg) == read("pcg.json")?, "{name}.pcg.json drifted");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("three-qubit GHZ: 4 groups, 12 conditions, davn", criterion_1),
        ("Phi4: 7 groups, K4 all red, diag(4/7, 3/7), certified", criterion_2),
        ("Phi4' and Phi4'': 6 groups each, certified", criterion_3),
        ("phi5: 6 groups, diag(1/3, 2/3), certified", criterion_4),
        ("phi_n (4..8) and phi_2n3 (1..3) scale-up", criterion_5),
        ("negative controls fig1a, fig1b, fig1c", criterion_6),
        ("oracle equivalence", criterion_7),
        ("exact arithmetic", criterion_8),
        ("determinism and DOT goldens", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(()) => println!("criterion {}: PASS  {name} ({:.2?})", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
