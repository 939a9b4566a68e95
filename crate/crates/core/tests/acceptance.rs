//! End-to-end acceptance criteria. Each test writes one `criterion N: PASS|FAIL`
//! line straight to stdout so it shows up even when the harness captures
//! output.

use std::io::Write as _;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gorbit::arith::{rat, Matrix, Rational, ToleranceProfile};
use gorbit::go::{go_verdict, natred_condition_check, verify_certificate, GoOutcome, SamplingStrategy};
use gorbit::lie::{
    ad_invariance_violation, build_classical, embed_so_partition, killing_form, so_index, Algebra, EmbeddingLayout,
    Family,
};
use gorbit::metric::{dazi_structure_check, isometry_subalgebra, layout_block_spec, metric_from_blocks, BlockSpec};
use gorbit::rep::is_weakly_regular;
use gorbit::scenario::{find_scenario, replay, run_check, ReportFormat, Report, NOT_DISPROVED};
use gorbit::subspace::{ideal_decomposition, is_regular, Subspace};

const CRITERION_1_BUDGET: Duration = Duration::from_secs(30);
const CRITERION_3_BUDGET: Duration = Duration::from_secs(10);
const CRITERION_4_BUDGET: Duration = Duration::from_secs(120);
const CRITERION_5_BUDGET: Duration = Duration::from_secs(600);
const CRITERION_8_BUDGET: Duration = Duration::from_secs(30);
/// Exact backend throughout; this is the profile the algebras are built with.
const TOLERANCE: ToleranceProfile = ToleranceProfile {
    rank_epsilon: 1e-9,
    residual_epsilon: 1e-8,
    eigen_gap_epsilon: 1e-7,
};
const SWEEPS: [&str; 3] = ["so6-222-grid", "so7-223-grid", "so8-233-grid"];
const DAZI_METRICS: usize = 50;
const DAZI_SEED: u64 = 4;

fn verdict(n: u32, title: &str, pass: bool, detail: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {n} ({title}): {} | {detail}", if pass { "PASS" } else { "FAIL" });
    let _ = out.flush();
    assert!(pass, "criterion {n} failed: {detail}");
}

fn classical(family: Family, n: usize) -> Arc<Algebra<Rational>> {
    let label = format!("{family:?}({n})").to_lowercase();
    Algebra::with_killing(label, build_classical(family, n).unwrap(), TOLERANCE).unwrap()
}

struct SweepRun {
    name: &'static str,
    report: Report,
    machine: String,
    elapsed: Duration,
}

/// The three grid scenarios, run once and shared by criteria 5 to 7 and 9.
fn sweeps() -> &'static [SweepRun] {
    static RUNS: OnceLock<Vec<SweepRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        SWEEPS
            .iter()
            .map(|&name| {
                let spec = find_scenario(name).expect("catalog scenario");
                let start = Instant::now();
                let report = run_check(&spec).expect("sweep runs");
                let elapsed = start.elapsed();
                let machine = report.emit(ReportFormat::Machine);
                SweepRun {
                    name,
                    report,
                    machine,
                    elapsed,
                }
            })
            .collect()
    })
}

#[test]
fn criterion_1_algebra_validity() {
    let start = Instant::now();
    let mut cases = Vec::new();
    cases.extend((2..=10).map(|n| (Family::So, n)));
    cases.extend((2..=5).map(|n| (Family::Su, n)));
    cases.extend((1..=4).map(|n| (Family::Sp, n)));
    let mut failures = Vec::new();
    for &(family, n) in &cases {
        let s = build_classical::<Rational>(family, n).unwrap();
        let label = format!("{family:?}({n})");
        if s.check_antisymmetry(&TOLERANCE).is_err() {
            failures.push(format!("{label} antisymmetry"));
        }
        if s.check_jacobi(&TOLERANCE).is_err() {
            failures.push(format!("{label} Jacobi"));
        }
        // Second route: brackets against matrix commutators of the realization.
        let realized = s.realization().is_some() || family != Family::So;
        if !realized || s.check_realization(&TOLERANCE).is_err() {
            failures.push(format!("{label} realization"));
        }
        let kf = killing_form(&s, &TOLERANCE);
        if ad_invariance_violation(&s, &kf.b, &TOLERANCE).is_some() {
            failures.push(format!("{label} Killing ad-invariance"));
        }
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        "algebra validity",
        failures.is_empty() && elapsed <= CRITERION_1_BUDGET,
        &format!(
            "{} algebras (so 2..10, su 2..5, sp 1..4), failures {:?}, {:.1}s of {}s",
            cases.len(),
            failures,
            elapsed.as_secs_f64(),
            CRITERION_1_BUDGET.as_secs()
        ),
    );
}

#[test]
fn criterion_2_killing_constants() {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 3..=10usize {
        let s = build_classical::<Rational>(Family::So, n).unwrap();
        let q = killing_form(&s, &TOLERANCE).q;
        let d = s.dim();
        let expected = rat(2 * (n as i64 - 2), 1);
        let mats = s.realization().expect("so(n) carries its matrix realization");
        for i in 0..n {
            for j in i + 1..n {
                let a = so_index(n, i, j);
                // Independent oracle: tr(ad_A ad_A) summed from the constants.
                let mut b = rat(0, 1);
                for x in 0..d {
                    for y in 0..d {
                        b += s.constant(a, x, y).clone() * s.constant(a, y, x).clone();
                    }
                }
                // And the trace form of the defining representation.
                let m = &mats[a];
                let trace: Rational = (0..n).map(|r| m.mul(m).unwrap().get(r, r).clone()).sum();
                let via_trace = -rat(n as i64 - 2, 1) * trace;
                let lib = q.get(a, a).clone();
                checked += 1;
                if lib != expected || -b != expected || via_trace != expected {
                    failures.push(format!("so({n}) A_{}{}", i + 1, j + 1));
                }
            }
        }
    }
    verdict(
        2,
        "Killing constants",
        failures.is_empty(),
        &format!("Q(A_ij, A_ij) = 2(n-2) on {checked} basis vectors of so(3..10), exact; failures {failures:?}"),
    );
}

#[test]
fn criterion_3_regularity_suite() {
    let start = Instant::now();
    let so6 = classical(Family::So, 6);
    let torus = embed_so_partition(&so6, 6, &[2, 2, 2]).unwrap().k();
    let r6 = is_regular(&torus, 1).unwrap();

    let so9 = classical(Family::So, 9);
    let k9 = embed_so_partition(&so9, 9, &[3, 3, 3]).unwrap().k();
    let r9 = is_regular(&k9, 1).unwrap();
    let w9 = is_weakly_regular(&k9).unwrap();

    // The same answers through the catalog scenario.
    let report = run_check(&find_scenario("so9-333-regularity").unwrap()).unwrap();
    let scenario_agrees = report.records.iter().any(|r| {
        matches!(r, gorbit::scenario::Record::Regularity(g)
            if !g.regular && g.weakly_regular && g.self_normalizing)
    });
    let elapsed = start.elapsed();

    let so6_ok = r6.regular && r6.maximal_rank;
    let so9_ok = !r9.regular && r9.self_normalizing && r9.dim_centralizer == 0 && w9.weakly_regular;
    let pass = so6_ok && so9_ok && scenario_agrees && elapsed <= CRITERION_3_BUDGET;
    verdict(
        3,
        "regularity suite",
        pass,
        &format!(
            "so(6) > so(2)^3 regular {} (rank {} of {}); so(9) > so(3)^3: \"K is not always a regular subgroup\" {} \
             (rank n_g(k) {} of {}), \"K is weakly regular in G\" {}, c_m(k) = {{0}} {}; scenario agrees {}; {:.1}s of {}s",
            r6.regular,
            r6.rank_normalizer,
            r6.rank_g,
            !r9.regular,
            r9.rank_normalizer,
            r9.rank_g,
            w9.weakly_regular,
            r9.dim_centralizer == 0,
            scenario_agrees,
            elapsed.as_secs_f64(),
            CRITERION_3_BUDGET.as_secs()
        ),
    );
}

/// A D'Atri-Ziller metric for `layout`: one scalar per simple ideal of `k`,
/// a positive definite Gram matrix on its centre and one scalar on `m`.
fn dazi_metric(layout: &EmbeddingLayout<Rational>, rng: &mut ChaCha8Rng) -> BlockSpec<Rational> {
    let k = layout.k();
    let dec = ideal_decomposition(&k, 7).unwrap();
    let mut blocks: Vec<(String, Subspace<Rational>, Rational)> = dec
        .ideals
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("k{}", i + 1), s.clone(), rat(rng.gen_range(1..=9), 1)))
        .collect();
    blocks.push(("m".into(), layout.m(), rat(rng.gen_range(1..=9), 1)));
    let spec = BlockSpec::scalars(blocks);
    let c = dec.center.dim();
    if c == 0 {
        return spec;
    }
    // Diagonally dominant, hence positive definite.
    let mut g = Matrix::<Rational>::zeros(c, c);
    for i in 0..c {
        for j in i + 1..c {
            let v = rat(rng.gen_range(-2..=2), 1);
            g.set(i, j, v.clone());
            g.set(j, i, v);
        }
        g.set(i, i, rat(rng.gen_range(3 * c as i64..=6 * c as i64), 1));
    }
    spec.with_center("z", dec.center.clone(), g)
}

#[test]
fn criterion_4_natred_implies_go() {
    let start = Instant::now();
    let shapes: [(usize, &[usize]); 3] = [(6, &[2, 2, 2]), (6, &[4, 2]), (7, &[4, 3])];
    let mut rng = ChaCha8Rng::seed_from_u64(DAZI_SEED);
    let mut failures = Vec::new();
    let mut certificates = 0usize;
    for t in 0..DAZI_METRICS {
        let (n, partition) = shapes[t % shapes.len()];
        let alg = classical(Family::So, n);
        let layout = embed_so_partition(&alg, n, partition).unwrap();
        let lambda = metric_from_blocks(&dazi_metric(&layout, &mut rng)).unwrap();
        let (k, m) = (layout.k(), layout.m());
        let natred = natred_condition_check(&lambda, &k, &m).unwrap().holds;
        let dazi = dazi_structure_check(&lambda).unwrap().verdict;
        let v = go_verdict(&lambda, &k, &SamplingStrategy::standard(DAZI_SEED + t as u64)).unwrap();
        let go_ok = match &v.outcome {
            GoOutcome::NotDisproved {
                sample_count,
                certificates: certs,
                ..
            } => {
                certificates += certs.len();
                certs.len() == *sample_count && certs.iter().all(|c| verify_certificate(&lambda, &k, c))
            }
            _ => false,
        };
        if !(natred && dazi && go_ok) {
            failures.push(format!("metric {t} on so({n}) {partition:?}: natred {natred}, dazi {dazi}, go {}", v.label()));
        }
    }
    let elapsed = start.elapsed();
    verdict(
        4,
        "naturally reductive implies g.o.",
        failures.is_empty() && elapsed <= CRITERION_4_BUDGET,
        &format!(
            "{DAZI_METRICS} metrics over so(6) (2,2,2), so(6) (4,2), so(7) (4,3); {certificates} certificates replayed; \
             failures {failures:?}; {:.1}s of {}s",
            elapsed.as_secs_f64(),
            CRITERION_4_BUDGET.as_secs()
        ),
    );
}

#[test]
fn criterion_5_equivalence_sweep() {
    let mut pass = true;
    let mut details = Vec::new();
    for run in sweeps() {
        let summary = run.report.sweep_summary().expect("summary").clone();
        let outcome = replay(&run.report).unwrap();
        let exact_ces = run
            .report
            .sweep_rows()
            .filter(|r| r.go != NOT_DISPROVED)
            .all(|r| r.counterexample.as_ref().is_some_and(|c| c.exact));
        let ok = summary.tuples == 200
            && summary.disagreements == 0
            && summary.chain_violations == 0
            && exact_ces
            && outcome.ok()
            && outcome.unconfirmed == 0
            && outcome.counterexamples_checked == summary.disproved
            && run.elapsed <= CRITERION_5_BUDGET;
        pass &= ok;
        details.push(format!(
            "{}: {} not disproved, {} disproved, {} disagreements, {}/{} counterexamples replay, {:.1}s",
            run.name,
            summary.not_disproved,
            summary.disproved,
            summary.disagreements,
            outcome.counterexamples_checked - outcome.counterexamples_failed,
            summary.disproved,
            run.elapsed.as_secs_f64()
        ));
    }
    verdict(5, "go <=> naturally reductive sweep", pass, &details.join("; "));
}

#[test]
fn criterion_6_normalizer_lemma() {
    let mut violations = 0;
    let mut checked = 0;
    for run in sweeps() {
        for row in run.report.sweep_rows().filter(|r| r.go == NOT_DISPROVED) {
            checked += 1;
            if row.normalizer_ok != Some(true) || row.layout_normalizer_ok != Some(true) {
                violations += 1;
            }
        }
    }
    verdict(
        6,
        "normalizer equivariance",
        violations == 0 && checked > 0,
        &format!("{checked} not-disproved metrics, {violations} violations over n_g(k') and n_g(k)"),
    );
}

#[test]
fn criterion_7_splitting() {
    let mut violations = 0;
    let mut form_disagreements = 0;
    let mut checked = 0;
    for run in sweeps() {
        for row in run.report.sweep_rows().filter(|r| r.go == NOT_DISPROVED) {
            checked += 1;
            violations += usize::from(row.split_ok != Some(true));
            form_disagreements += row.form_disagreements;
        }
    }
    verdict(
        7,
        "splitting",
        violations == 0 && form_disagreements == 0 && checked > 0,
        &format!("{checked} not-disproved metrics, {violations} violations, {form_disagreements} coset form disagreements"),
    );
}

fn so_block(alg: &Arc<Algebra<Rational>>, n: usize, idx: std::ops::Range<usize>) -> Subspace<Rational> {
    let coords: Vec<usize> = idx
        .clone()
        .flat_map(|i| idx.clone().filter(move |&j| j > i).map(move |j| so_index(n, i, j)))
        .collect();
    Subspace::coordinate(alg, &coords)
}

#[test]
fn criterion_8_isometry_recognition() {
    let start = Instant::now();
    let alg = classical(Family::So, 6);
    let layout = embed_so_partition(&alg, 6, &[2, 2, 2]).unwrap();
    let torus = layout.k();
    let so4_so2 = so_block(&alg, 6, 0..4).sum(&so_block(&alg, 6, 4..6));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut dims = [0usize; 3];
    for trial in 0..10 {
        // params: x1, x2, x3 on the factors, then x4 = m12, x5 = m13, x6 = m23
        let mut distinct: Vec<i64> = (1..=9).collect();
        for i in (1..distinct.len()).rev() {
            distinct.swap(i, rng.gen_range(0..=i));
        }
        let (a, b, c) = (rng.gen_range(1..=9), rng.gen_range(1..=9), rng.gen_range(1..=9));
        let all = rng.gen_range(1..=9);
        let patterns: [(&str, Vec<i64>); 3] = [
            ("all distinct", distinct[..6].to_vec()),
            ("x1 = x2 = x4, x5 = x6", vec![a, a, b, a, c, c]),
            ("all equal", vec![all; 6]),
        ];
        for (p, (label, params)) in patterns.iter().enumerate() {
            let q: Vec<Rational> = params.iter().map(|&v| rat(v, 1)).collect();
            let lambda = metric_from_blocks(&layout_block_spec(&layout, &q).unwrap()).unwrap();
            let kp = isometry_subalgebra(&lambda).unwrap();
            dims[p] = dims[p].max(kp.dim());
            let ok = match p {
                0 => kp.same_span(&torus),
                1 => kp.contains_subspace(&so4_so2),
                _ => kp.dim() == 15,
            };
            if !ok {
                failures.push(format!("trial {trial} {label} {params:?}: dim k' = {}", kp.dim()));
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        8,
        "isometry subalgebra recognition",
        failures.is_empty() && elapsed <= CRITERION_8_BUDGET,
        &format!(
            "10 seeded trials per pattern; k' = so(2)^3 (max dim {}), k' >= so(4)+so(2) (max dim {}), k' = so(6) (dim {}); \
             failures {failures:?}; {:.1}s of {}s",
            dims[0],
            dims[1],
            dims[2],
            elapsed.as_secs_f64(),
            CRITERION_8_BUDGET.as_secs()
        ),
    );
}

#[test]
fn criterion_9_determinism() {
    let mut differing = Vec::new();
    let mut scenarios = 0;
    for spec in gorbit::scenario::scenario_catalog() {
        scenarios += 1;
        let second = run_check(&spec).unwrap().emit(ReportFormat::Machine);
        let first = match sweeps().iter().find(|r| r.name == spec.name) {
            Some(run) => run.machine.clone(),
            None => run_check(&spec).unwrap().emit(ReportFormat::Machine),
        };
        if first != second {
            differing.push(spec.name.clone());
        }
    }
    verdict(
        9,
        "determinism",
        differing.is_empty(),
        &format!("{scenarios} catalog scenarios run twice; byte-different machine reports: {differing:?}"),
    );
}
