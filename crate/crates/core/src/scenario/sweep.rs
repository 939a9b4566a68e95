//! The go ⟺ naturally reductive sweep over seeded block-scalar metrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{exact_strings, Record, SweepRow, SweepSummary, NOT_DISPROVED};
use super::run::{assert_chain, decide_go, natred_record, strategy_of, Context};
use super::spec::{GridTuple, MetricSource, ScenarioSpec};
use crate::arith::{rat, Rational, Scalar};
use crate::error::{Error, Result};
use crate::go::{go_verdict_on, normalizer_equivariance_check, split_check, GoOutcome, SamplingStrategy};
use crate::lie::EmbeddingLayout;
use crate::metric::isometry_subalgebra;
use crate::subspace::Subspace;

const VALUE_RANGE: std::ops::RangeInclusive<i64> = 1..=9;

/// Shape of a layout as seen by the grid: which parameter belongs to each
/// index of the underlying partition, and the off-diagonal pairs.
struct GridShape {
    factor_param: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    /// Size of the first factor when it is abelian and may take a centre Gram.
    center_dim: Option<usize>,
    params: usize,
}

impl GridShape {
    fn of<S: Scalar>(layout: &EmbeddingLayout<S>) -> Self {
        let parts = layout.partition.len();
        let nf = layout.factor_subspaces.len();
        // One factor per part for `so`; a single torus factor for `su`.
        let factor_param = (0..parts).map(|i| if nf == parts { i } else { 0 }).collect();
        let first = &layout.factor_subspaces[0].1;
        let abelian_first = nf < parts && first.dim() > 1;
        GridShape {
            factor_param,
            pairs: layout.offdiag_blocks.iter().map(|(p, _, _)| *p).collect(),
            center_dim: abelian_first.then(|| first.dim()),
            params: nf + layout.offdiag_blocks.len(),
        }
    }

    fn pair_param(&self, i: usize, j: usize) -> usize {
        let key = (i.min(j), i.max(j));
        self.factor_param.iter().max().map_or(0, |m| m + 1) + self.pairs.iter().position(|p| *p == key).expect("pair")
    }

    fn parts(&self) -> usize {
        self.factor_param.len()
    }
}

/// Seeded tuples: the first half generic, the second half cycling through
/// the subvarieties where the metric can be naturally reductive, plus near
/// misses of them. Tuple `i` draws from its own stream.
pub fn sweep_grid<S: Scalar>(layout: &EmbeddingLayout<S>, seed: u64, count: usize) -> Vec<GridTuple> {
    let shape = GridShape::of(layout);
    let mut varieties: Vec<String> = vec!["all-equal".into(), "offdiag-equal".into()];
    for &(i, j) in &shape.pairs {
        varieties.push(format!("merge-{}{}", i + 1, j + 1));
    }
    let special = varieties.len();
    varieties.push("near-miss".into());
    let generic = count / 2;
    (0..count)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let mut p: Vec<i64> = (0..shape.params).map(|_| rng.gen_range(VALUE_RANGE)).collect();
            let mut center = None;
            let variety = if t < generic {
                center = random_center(&shape, &mut rng);
                "generic".to_string()
            } else {
                let v = (t - generic) % varieties.len();
                let name = if v == special {
                    let base = rng.gen_range(0..special);
                    apply_variety(&shape, base, &mut p, &mut rng, &mut center);
                    let i = rng.gen_range(0..shape.params);
                    p[i] += 1;
                    format!("near-{}", varieties[base])
                } else {
                    apply_variety(&shape, v, &mut p, &mut rng, &mut center);
                    varieties[v].clone()
                };
                name
            };
            GridTuple {
                variety,
                params: p.into_iter().map(|v| rat(v, 1)).collect(),
                center,
            }
        })
        .collect()
}

fn apply_variety(shape: &GridShape, v: usize, p: &mut [i64], rng: &mut ChaCha8Rng, center: &mut Option<Vec<Rational>>) {
    match v {
        0 => {
            let c = p[0];
            p.iter_mut().for_each(|x| *x = c);
        }
        1 => {
            let c = rng.gen_range(VALUE_RANGE);
            for &(i, j) in &shape.pairs {
                p[shape.pair_param(i, j)] = c;
            }
            *center = random_center(shape, rng);
        }
        _ => {
            let (i, j) = shape.pairs[v - 2];
            let a = rng.gen_range(VALUE_RANGE);
            p[shape.factor_param[i]] = a;
            p[shape.factor_param[j]] = a;
            p[shape.pair_param(i, j)] = a;
            for l in (0..shape.parts()).filter(|&l| l != i && l != j) {
                let b = rng.gen_range(VALUE_RANGE);
                p[shape.pair_param(i, l)] = b;
                p[shape.pair_param(j, l)] = b;
            }
        }
    }
}

/// Diagonally dominant integer Gram matrix, so positive definite.
fn random_center(shape: &GridShape, rng: &mut ChaCha8Rng) -> Option<Vec<Rational>> {
    let d = shape.center_dim?;
    let mut g = vec![0i64; d * d];
    for i in 0..d {
        for j in i + 1..d {
            let v = rng.gen_range(-2..=2);
            g[i * d + j] = v;
            g[j * d + i] = v;
        }
        g[i * d + i] = rng.gen_range(3 * d as i64..=6 * d as i64);
    }
    Some(g.into_iter().map(|v| rat(v, 1)).collect())
}

/// One row per tuple, in tuple order, followed by the summary.
pub fn run_sweep<S: Scalar>(spec: &ScenarioSpec, ctx: &Context<S>) -> Result<Vec<Record>> {
    let layout = ctx
        .layout
        .as_ref()
        .ok_or_else(|| Error::Precondition("the sweep needs a partition or torus layout".into()))?;
    let count = spec.metric.grid.unwrap_or(0);
    let grid = sweep_grid(layout, spec.seed, count);
    let strategy = strategy_of(spec);
    let rows: Vec<SweepRow> = grid
        .into_par_iter()
        .enumerate()
        .map(|(i, t)| sweep_row(spec, ctx, i, t, &strategy))
        .collect::<Result<_>>()?;
    let summary = SweepSummary::from_rows(&rows);
    let mut out: Vec<Record> = rows.into_iter().map(Record::SweepRow).collect();
    out.push(Record::SweepSummary(summary));
    Ok(out)
}

fn sweep_row<S: Scalar>(
    spec: &ScenarioSpec,
    ctx: &Context<S>,
    index: usize,
    tuple: GridTuple,
    strategy: &SamplingStrategy,
) -> Result<SweepRow> {
    let params = exact_strings(&tuple.params);
    let center = tuple.center.as_ref().map(|c| exact_strings(c));
    let variety = tuple.variety.clone();
    let source = MetricSource::Tuple(tuple);
    let lambda = ctx.metric(&source)?;
    let kp = isometry_subalgebra(&lambda)?;
    let label = format!("tuple {index}");
    let natred = natred_record(&lambda, &kp, &label)?;
    let (go, verdict, counterexample) = decide_go(spec, &source, &lambda, &kp, strategy)?;
    let chain_ok = assert_chain(&natred, Some(&go)).is_ok();
    let mut row = SweepRow {
        index,
        variety,
        params,
        center,
        isometry_dim: kp.dim(),
        agree: (go == NOT_DISPROVED) == natred.naturally_reductive,
        natred: natred.naturally_reductive,
        go,
        counterexample,
        pair_detected: None,
        normalizer_ok: None,
        layout_normalizer_ok: None,
        split_ok: None,
        form_disagreements: 0,
        chain_ok,
    };
    match &verdict.outcome {
        GoOutcome::NotDisproved { .. } => {
            row.normalizer_ok = Some(normalizer_equivariance_check(&lambda, &kp)?.holds);
            let k = ctx.subgroup()?;
            row.layout_normalizer_ok = Some(normalizer_equivariance_check(&lambda, k)?.holds);
            let split = split_check(&lambda, &kp, strategy)?;
            row.split_ok = Some(split.holds);
            row.form_disagreements = split.form_disagreements;
        }
        GoOutcome::Disproved { sample_index, .. } | GoOutcome::Suspected { sample_index, .. } => {
            row.pair_detected = Some(pair_detects(&lambda, &kp, strategy, *sample_index)?);
        }
    }
    Ok(row)
}

/// Whether some two-eigenspace sum alone already fails.
fn pair_detects<S: Scalar>(
    lambda: &crate::metric::MetricOperator<S>,
    kp: &Subspace<S>,
    strategy: &SamplingStrategy,
    failing_index: usize,
) -> Result<bool> {
    let whole = Subspace::whole(lambda.algebra());
    let first_pair = whole.dim();
    let pairs = SamplingStrategy {
        random_count: 0,
        basis_vectors: false,
        ..*strategy
    };
    if failing_index >= first_pair {
        let n_pairs = crate::go::sample_directions(lambda, &whole, &pairs).len();
        if failing_index < first_pair + n_pairs {
            return Ok(true);
        }
    }
    Ok(!go_verdict_on(lambda, kp, &whole, &pairs)?.is_not_disproved())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{embed_so_partition, su_torus_layout, Algebra, Family};
    use crate::testutil::so;

    #[test]
    fn grid_is_deterministic_and_covers_varieties() {
        let g = so(6);
        let l = embed_so_partition(&g, 6, &[2, 2, 2]).unwrap();
        let a = sweep_grid(&l, 7, 40);
        assert_eq!(a, sweep_grid(&l, 7, 40));
        assert_ne!(a, sweep_grid(&l, 8, 40));
        assert_eq!(a.iter().filter(|t| t.variety == "generic").count(), 20);
        let m12 = a.iter().find(|t| t.variety == "merge-12").unwrap();
        let p = &m12.params;
        // x1 = x2 = x4 and x5 = x6
        assert!(p[0] == p[1] && p[1] == p[3] && p[4] == p[5]);
        let m13 = a.iter().find(|t| t.variety == "merge-13").unwrap();
        let p = &m13.params;
        assert!(p[0] == p[2] && p[2] == p[4] && p[3] == p[5]);
        assert!(a.iter().any(|t| t.variety.starts_with("near-")));
        assert!(a.iter().all(|t| t.center.is_none()));
    }

    #[test]
    fn su_grid_has_centre_grams() {
        let g = Algebra::<Rational>::with_killing(
            "su(3)",
            crate::lie::build_classical(Family::Su, 3).unwrap(),
            Default::default(),
        )
        .unwrap();
        let l = su_torus_layout(&g, 3).unwrap();
        let grid = sweep_grid(&l, 1, 20);
        assert!(grid.iter().any(|t| t.center.is_some()));
        let m = grid.iter().find(|t| t.variety == "merge-12").unwrap();
        // torus scalar equals m12, and m13 = m23
        assert!(m.params[0] == m.params[1] && m.params[2] == m.params[3]);
    }
}
