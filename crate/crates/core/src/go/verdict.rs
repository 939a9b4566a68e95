//! Sampled geodesic-orbit verdicts.
//!
//! A negative verdict is a proof (one direction with an exact rank gap). A
//! positive verdict only says that no sampled direction failed.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::solve::{require_equivariant, Counterexample, GoCertificate, GoSolve, GoSystem};
use crate::arith::{vecops, Backend, Rational, Scalar};
use crate::error::Result;
use crate::metric::MetricOperator;
use crate::subspace::Subspace;

/// Which directions `X` are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplingStrategy {
    pub seed: u64,
    pub random_count: usize,
    /// Generic `v_i + v_j` for every pair of distinct eigenspaces.
    pub structured: bool,
    pub basis_vectors: bool,
}

impl Default for SamplingStrategy {
    fn default() -> Self {
        SamplingStrategy {
            seed: 0,
            random_count: 64,
            structured: true,
            basis_vectors: true,
        }
    }
}

impl SamplingStrategy {
    pub fn standard(seed: u64) -> Self {
        SamplingStrategy {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GoOutcome<S> {
    /// Exact rank gap at the smallest failing sample index.
    Disproved {
        sample_index: usize,
        counterexample: Counterexample<S>,
    },
    /// Float backend only: a direction failed within tolerance. Needs exact
    /// confirmation before it counts as a proof.
    Suspected {
        sample_index: usize,
        counterexample: Counterexample<S>,
    },
    /// Sampling-based; not a proof.
    NotDisproved {
        sample_count: usize,
        strategy: String,
        certificates: Vec<GoCertificate<S>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoVerdict<S> {
    pub backend: Backend,
    pub outcome: GoOutcome<S>,
}

impl<S> GoVerdict<S> {
    pub fn is_not_disproved(&self) -> bool {
        matches!(self.outcome, GoOutcome::NotDisproved { .. })
    }

    pub fn is_disproved(&self) -> bool {
        matches!(self.outcome, GoOutcome::Disproved { .. })
    }

    pub fn label(&self) -> &'static str {
        match self.outcome {
            GoOutcome::Disproved { .. } => "disproved",
            GoOutcome::Suspected { .. } => "suspected",
            GoOutcome::NotDisproved { .. } => "not-disproved",
        }
    }
}

#[derive(Clone, Debug)]
enum Sample {
    Basis(usize),
    Pair(usize, usize),
    Random,
}

/// The directions a strategy produces on `domain`, in sample-index order.
/// Sample `i` draws from its own stream so the list does not depend on
/// evaluation order.
pub fn sample_directions<S: Scalar>(
    lambda: &MetricOperator<S>,
    domain: &Subspace<S>,
    strategy: &SamplingStrategy,
) -> Vec<Vec<S>> {
    let mut plan = Vec::new();
    if strategy.basis_vectors {
        plan.extend((0..domain.dim()).map(Sample::Basis));
    }
    let spaces: Vec<Subspace<S>> = if strategy.structured {
        let whole = domain.dim() == lambda.dim();
        lambda
            .eigenspaces()
            .0
            .iter()
            .map(|e| {
                let s = Subspace::span(lambda.algebra(), &e.basis);
                if whole {
                    s
                } else {
                    s.intersection(domain)
                }
            })
            .filter(|s| !s.is_zero())
            .collect()
    } else {
        Vec::new()
    };
    for a in 0..spaces.len() {
        for b in a + 1..spaces.len() {
            plan.push(Sample::Pair(a, b));
        }
    }
    if !domain.is_zero() {
        plan.extend((0..strategy.random_count).map(|_| Sample::Random));
    }
    plan.iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(strategy.seed);
            rng.set_stream(i as u64);
            match s {
                Sample::Basis(j) => domain.basis()[*j].clone(),
                Sample::Pair(a, b) => vecops::add(&generic(&spaces[*a], &mut rng), &generic(&spaces[*b], &mut rng)),
                Sample::Random => generic(domain, &mut rng),
            }
        })
        .collect()
}

/// Nonzero small-integer combination of the basis.
fn generic<S: Scalar>(space: &Subspace<S>, rng: &mut ChaCha8Rng) -> Vec<S> {
    let mut c: Vec<i64> = (0..space.dim()).map(|_| rng.gen_range(-9..=9)).collect();
    if c.iter().all(|&v| v == 0) {
        c[0] = 1;
    }
    let coeffs: Vec<S> = c.into_iter().map(S::from_i64).collect();
    space.vector(&coeffs)
}

/// Geodesic-orbit verdict with `X` ranging over all of `g`.
pub fn go_verdict<S: Scalar>(
    lambda: &MetricOperator<S>,
    k: &Subspace<S>,
    strategy: &SamplingStrategy,
) -> Result<GoVerdict<S>> {
    go_verdict_on(lambda, k, &Subspace::whole(lambda.algebra()), strategy)
}

/// Same, with `X` restricted to `domain` (the coset form uses `domain = m`).
pub fn go_verdict_on<S: Scalar>(
    lambda: &MetricOperator<S>,
    k: &Subspace<S>,
    domain: &Subspace<S>,
    strategy: &SamplingStrategy,
) -> Result<GoVerdict<S>> {
    require_equivariant(lambda, k)?;
    let dirs = sample_directions(lambda, domain, strategy);
    let system = GoSystem::new(lambda, k);
    let first_fail = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<Result<GoSolve<S>>>> = dirs
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            if i > first_fail.load(Ordering::Relaxed) {
                return None;
            }
            let r = system.solve(x);
            if !matches!(r, Ok(GoSolve::Solved(_))) {
                first_fail.fetch_min(i, Ordering::Relaxed);
            }
            Some(r)
        })
        .collect();
    let mut certificates = Vec::with_capacity(results.len());
    for (i, r) in results.into_iter().enumerate() {
        match r {
            None => break,
            Some(Err(e)) => return Err(e),
            Some(Ok(GoSolve::Solved(c))) => certificates.push(c),
            Some(Ok(GoSolve::Unsolvable(ce))) => {
                let outcome = match S::BACKEND {
                    Backend::Exact => GoOutcome::Disproved {
                        sample_index: i,
                        counterexample: ce,
                    },
                    Backend::Float => GoOutcome::Suspected {
                        sample_index: i,
                        counterexample: ce,
                    },
                };
                return Ok(GoVerdict {
                    backend: S::BACKEND,
                    outcome,
                });
            }
        }
    }
    let n_basis = if strategy.basis_vectors { domain.dim() } else { 0 };
    let n_random = if domain.is_zero() { 0 } else { strategy.random_count };
    Ok(GoVerdict {
        backend: S::BACKEND,
        outcome: GoOutcome::NotDisproved {
            sample_count: certificates.len(),
            strategy: format!(
                "seed={} basis={} pairs={} random={}",
                strategy.seed,
                n_basis,
                certificates.len() - n_basis - n_random,
                n_random
            ),
            certificates,
        },
    })
}

/// Re-solves a float-suspected direction exactly. The direction's stored
/// binary fractions are used as exact rationals.
pub fn confirm_exact(
    lambda: &MetricOperator<Rational>,
    k: &Subspace<Rational>,
    direction: &[f64],
) -> Result<Option<Counterexample<Rational>>> {
    require_equivariant(lambda, k)?;
    let x: Vec<Rational> = direction.iter().map(|v| Rational::from_f64(*v)).collect();
    Ok(match GoSystem::new(lambda, k).solve(&x)? {
        GoSolve::Unsolvable(ce) => Some(ce),
        GoSolve::Solved(_) => None,
    })
}
