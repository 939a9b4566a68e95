use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::spec::ScenarioSpec;
use crate::arith::{format_rational_short, parse_rational, Backend, Rational, Scalar};
use crate::error::{Error, Result};
use crate::metric::EquivarianceWitness;

pub const REPORT_FORMAT: &str = "gorbit-report";
pub const REPORT_VERSION: u32 = 1;

/// Coordinates as exact `p` or `p/q` strings; floats are written as the binary
/// fraction they store.
pub fn exact_strings<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(|x| format_rational_short(&x.to_rational())).collect()
}

pub fn parse_exact(v: &[String]) -> Result<Vec<Rational>> {
    v.iter()
        .map(|s| parse_rational(s).ok_or_else(|| Error::Replay(format!("`{s}` is not a rational"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub scenario: String,
    pub spec_hash: String,
    pub backend: Backend,
    pub seed: u64,
    /// The full spec, so a report replays on its own.
    pub spec: ScenarioSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateRecord {
    pub algebra: String,
    pub dim: usize,
    pub antisymmetry: bool,
    pub jacobi: bool,
    pub killing_ad_invariant: bool,
    pub q_positive_definite: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityRecord {
    pub k_dim: usize,
    pub regular: bool,
    pub maximal_rank: bool,
    pub rank_k: usize,
    pub rank_normalizer: usize,
    pub rank_g: usize,
    pub dim_normalizer: usize,
    pub dim_centralizer: usize,
    pub self_normalizing: bool,
    pub weakly_regular: bool,
    pub dim_p: usize,
    pub intertwiner_dim: usize,
    /// `Hom_k(k, m) = 0`, the sufficient condition for weak regularity.
    pub hom_k_m_vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivarianceRecord {
    pub metric: String,
    pub holds: bool,
    pub witness: Option<EquivarianceWitness>,
    pub normalizer_dim: usize,
    pub normalizer_holds: bool,
    pub normalizer_witness: Option<EquivarianceWitness>,
    pub k_semisimple: bool,
    pub k_self_normalizing: bool,
    /// `k` lies in the isometry subalgebra of the metric.
    pub k_in_isometry: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub direction: Vec<String>,
    pub witness: Vec<String>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub sample_index: usize,
    pub direction: Vec<String>,
    pub rank_a: usize,
    pub rank_ab: usize,
    /// The rank gap was computed in exact arithmetic.
    pub exact: bool,
}

pub const NOT_DISPROVED: &str = "not-disproved";
pub const DISPROVED: &str = "disproved";
/// A float failure that exact arithmetic did not reproduce.
pub const UNCONFIRMED: &str = "unconfirmed";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoRecord {
    pub metric: String,
    /// Dimension of the isometry subalgebra `k'` that `W` ranges over.
    pub k_dim: usize,
    pub verdict: String,
    pub sample_count: usize,
    pub strategy: String,
    pub certificates: Vec<CertificateRecord>,
    pub counterexample: Option<CounterexampleRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NatredRecord {
    pub metric: String,
    /// False when the algebra is not simple.
    pub decided: bool,
    pub naturally_reductive: bool,
    /// `bi-invariant` or `dazi`.
    pub form: Option<String>,
    pub isometry_dim: usize,
    pub center_dim: usize,
    pub ideal_dims: Vec<usize>,
    pub ideal_scalars: Vec<String>,
    pub complement_scalar: Option<String>,
    pub reason: Option<String>,
    /// `<[X, Y]_m, X> = 0` on `m = k'^⊥`.
    pub condition_holds: bool,
    pub condition_witness: Option<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub metric: String,
    pub k_dim: usize,
    pub weakly_regular: bool,
    pub k_semisimple: bool,
    pub k_self_normalizing: bool,
    pub applicable: bool,
    pub preserves_k: bool,
    pub preserves_m: bool,
    pub bi_invariant_on_k: bool,
    pub coset_verdict: Option<String>,
    pub form_disagreements: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub variety: String,
    pub params: Vec<String>,
    pub center: Option<Vec<String>>,
    pub isometry_dim: usize,
    pub go: String,
    pub natred: bool,
    pub agree: bool,
    pub counterexample: Option<CounterexampleRecord>,
    /// Some two-eigenspace sum also fails (disproved tuples only).
    pub pair_detected: Option<bool>,
    /// `Λ` commutes with `ad` of the normalizer of `k'` (not-disproved only).
    pub normalizer_ok: Option<bool>,
    /// Same for the normalizer of the layout subgroup.
    pub layout_normalizer_ok: Option<bool>,
    pub split_ok: Option<bool>,
    pub form_disagreements: usize,
    /// Naturally reductive implies the trilinear condition on `k'^⊥`, which
    /// implies g.o.
    pub chain_ok: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub tuples: usize,
    pub not_disproved: usize,
    pub disproved: usize,
    pub disagreements: usize,
    pub normalizer_violations: usize,
    pub split_violations: usize,
    pub form_disagreements: usize,
    pub pair_misses: usize,
    pub chain_violations: usize,
}

impl SweepSummary {
    pub fn from_rows(rows: &[SweepRow]) -> Self {
        let mut s = SweepSummary {
            tuples: rows.len(),
            ..Default::default()
        };
        for r in rows {
            if r.go == NOT_DISPROVED {
                s.not_disproved += 1;
            } else {
                s.disproved += 1;
            }
            s.disagreements += usize::from(!r.agree);
            s.normalizer_violations +=
                usize::from(r.normalizer_ok == Some(false) || r.layout_normalizer_ok == Some(false));
            s.split_violations += usize::from(r.split_ok == Some(false));
            s.form_disagreements += r.form_disagreements;
            s.pair_misses += usize::from(r.pair_detected == Some(false));
            s.chain_violations += usize::from(!r.chain_ok);
        }
        s
    }

    pub fn clean(&self) -> bool {
        self.disagreements == 0
            && self.normalizer_violations == 0
            && self.split_violations == 0
            && self.form_disagreements == 0
            && self.chain_violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Header(Header),
    Validate(ValidateRecord),
    Regularity(RegularityRecord),
    Equivariance(EquivarianceRecord),
    Go(GoRecord),
    Natred(NatredRecord),
    Split(SplitRecord),
    SweepRow(SweepRow),
    SweepSummary(SweepSummary),
}

impl Record {
    /// A negative verdict: exit code 2 in the CLI.
    pub fn is_negative(&self) -> bool {
        match self {
            Record::Equivariance(r) => !r.holds,
            Record::Go(r) => r.verdict != NOT_DISPROVED,
            Record::Natred(r) => r.decided && !r.naturally_reductive,
            Record::Split(r) => !r.holds,
            Record::SweepSummary(s) => !s.clean(),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub header: Header,
    pub records: Vec<Record>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Machine,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "human" => Ok(ReportFormat::Human),
            "machine" => Ok(ReportFormat::Machine),
            other => Err(Error::Unsupported(format!("report format `{other}`"))),
        }
    }
}

impl Report {
    pub fn new(spec: &ScenarioSpec, records: Vec<Record>) -> Self {
        Report {
            header: Header {
                format: REPORT_FORMAT.into(),
                version: REPORT_VERSION,
                scenario: spec.name.clone(),
                spec_hash: spec.hash(),
                backend: spec.backend,
                seed: spec.seed,
                spec: spec.clone(),
            },
            records,
        }
    }

    pub fn has_negative(&self) -> bool {
        self.records.iter().any(Record::is_negative)
    }

    pub fn sweep_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.records.iter().filter_map(|r| match r {
            Record::SweepRow(row) => Some(row),
            _ => None,
        })
    }

    pub fn sweep_summary(&self) -> Option<&SweepSummary> {
        self.records.iter().find_map(|r| match r {
            Record::SweepSummary(s) => Some(s),
            _ => None,
        })
    }

    /// Parses the line-delimited machine format.
    pub fn parse_machine(text: &str) -> Result<Self> {
        let mut header = None;
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(line).map_err(|e| Error::Parse {
                line: i + 1,
                column: e.column(),
                message: e.to_string(),
            })?;
            match rec {
                Record::Header(h) => {
                    if header.is_some() {
                        return Err(Error::Parse {
                            line: i + 1,
                            column: 1,
                            message: "second header record".into(),
                        });
                    }
                    if h.format != REPORT_FORMAT || h.version != REPORT_VERSION {
                        return Err(Error::Unsupported(format!("report format {} v{}", h.format, h.version)));
                    }
                    header = Some(h);
                }
                other => {
                    if header.is_none() {
                        return Err(Error::Parse {
                            line: i + 1,
                            column: 1,
                            message: "record before the header".into(),
                        });
                    }
                    records.push(other);
                }
            }
        }
        let header = header.ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: "missing header record".into(),
        })?;
        if header.spec.hash() != header.spec_hash {
            return Err(Error::Replay("embedded spec does not match its hash".into()));
        }
        Ok(Report { header, records })
    }

    pub fn emit(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Machine => self.emit_machine(),
            ReportFormat::Human => self.emit_human(),
        }
    }

    fn emit_machine(&self) -> String {
        let mut out = String::new();
        let header = Record::Header(self.header.clone());
        for r in std::iter::once(&header).chain(&self.records) {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    fn emit_human(&self) -> String {
        let h = &self.header;
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} on {}", h.scenario, h.spec.algebra_label());
        if !h.spec.description.is_empty() {
            let _ = writeln!(out, "  {}", h.spec.description);
        }
        let _ = writeln!(out, "backend {}, seed {}, spec sha256 {}", h.backend, h.seed, h.spec_hash);
        for r in &self.records {
            human_record(&mut out, r);
        }
        let _ = writeln!(
            out,
            "overall: {}",
            if self.has_negative() { "negative verdicts present" } else { "all checks pass" }
        );
        out
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn human_record(out: &mut String, r: &Record) {
    match r {
        Record::Header(_) => {}
        Record::Validate(v) => {
            let _ = writeln!(
                out,
                "[validate] {} (dim {}): antisymmetry {}, Jacobi {}, Killing form ad-invariant {}, Q positive definite {}",
                v.algebra,
                v.dim,
                yes(v.antisymmetry),
                yes(v.jacobi),
                yes(v.killing_ad_invariant),
                yes(v.q_positive_definite)
            );
        }
        Record::Regularity(g) => {
            let _ = writeln!(
                out,
                "[regularity] regular: {} (rank of normalizer {} vs rank g {}); maximal rank: {} (rank k {})",
                yes(g.regular),
                g.rank_normalizer,
                g.rank_g,
                yes(g.maximal_rank),
                g.rank_k
            );
            let _ = writeln!(
                out,
                "[regularity] self-normalizing: {} (dim c_m(k) = {}); weakly regular: {} (dim Hom_n(k, p) = {}, dim p = {})",
                yes(g.self_normalizing),
                g.dim_centralizer,
                yes(g.weakly_regular),
                g.intertwiner_dim,
                g.dim_p
            );
        }
        Record::Equivariance(e) => {
            let _ = writeln!(
                out,
                "[equivariance] metric {}: ad_k-equivariant: {}; ad-equivariant over the normalizer (dim {}): {}; k inside the isometry algebra: {}",
                e.metric,
                yes(e.holds),
                e.normalizer_dim,
                yes(e.normalizer_holds),
                yes(e.k_in_isometry)
            );
            if let Some(w) = &e.witness {
                let _ = writeln!(out, "[equivariance]   fails at basis vector {} of k, residual {:e}", w.index, w.residual);
            }
        }
        Record::Go(g) => {
            let _ = match g.verdict.as_str() {
                NOT_DISPROVED => writeln!(
                    out,
                    "[go] geodesic orbit, W ranging over k' (dim {}): not disproved on {} sampled directions ({}); sampling-based, not a proof",
                    g.k_dim, g.sample_count, g.strategy
                ),
                DISPROVED => writeln!(
                    out,
                    "[go] geodesic orbit: disproved; no W in k' (dim {}) solves [W + X, ΛX] = 0 at sample {} (exact rank gap {} < {})",
                    g.k_dim,
                    g.counterexample.as_ref().map_or(0, |c| c.sample_index),
                    g.counterexample.as_ref().map_or(0, |c| c.rank_a),
                    g.counterexample.as_ref().map_or(0, |c| c.rank_ab)
                ),
                _ => writeln!(out, "[go] geodesic orbit: float failure not confirmed in exact arithmetic"),
            };
            if let Some(c) = &g.counterexample {
                let _ = writeln!(out, "[go]   X = ({})", c.direction.join(", "));
            }
        }
        Record::Natred(n) => {
            if !n.decided {
                let _ = writeln!(out, "[natred] naturally reductive: not decided ({})", n.reason.as_deref().unwrap_or(""));
            } else if n.naturally_reductive {
                let form = match n.form.as_deref() {
                    Some("bi-invariant") => "bi-invariant".to_string(),
                    _ => format!("D'Atri-Ziller form over k' of dim {}", n.isometry_dim),
                };
                let _ = writeln!(out, "[natred] naturally reductive: yes ({form})");
            } else {
                let _ = writeln!(
                    out,
                    "[natred] naturally reductive: no ({})",
                    n.reason.as_deref().unwrap_or("not of D'Atri-Ziller form")
                );
            }
            let _ = writeln!(
                out,
                "[natred] <[X, Y]_m, X> = 0 on m = k'^perp (dim k' = {}): {}",
                n.isometry_dim,
                yes(n.condition_holds)
            );
        }
        Record::Split(s) => {
            let status = if s.applicable { "theorem applicable" } else { "exploratory, theorem inapplicable" };
            let _ = writeln!(
                out,
                "[split] splitting theorem over k' (dim {}), {status}: Λk' ⊆ k' {}, Λm ⊆ m {}, bi-invariant on k' {}, coset g.o. {}; holds: {}",
                s.k_dim,
                yes(s.preserves_k),
                yes(s.preserves_m),
                yes(s.bi_invariant_on_k),
                s.coset_verdict.as_deref().unwrap_or("not run"),
                yes(s.holds)
            );
            if s.form_disagreements > 0 {
                let _ = writeln!(
                    out,
                    "[split]   unprojected and projected coset forms disagree on {} directions",
                    s.form_disagreements
                );
            }
        }
        Record::SweepRow(r) => {
            let _ = writeln!(
                out,
                "[sweep] #{:03} {:<14} x = ({}){} k' dim {:>2}  go {:<13} natred {:<3} {}",
                r.index,
                r.variety,
                r.params.iter().map(|p| short(p)).collect::<Vec<_>>().join(", "),
                if r.center.is_some() { " +center" } else { "" },
                r.isometry_dim,
                r.go,
                yes(r.natred),
                if r.agree { "agree" } else { "DISAGREE" }
            );
        }
        Record::SweepSummary(s) => {
            let _ = writeln!(
                out,
                "[sweep] {} tuples: {} not disproved, {} disproved; go ⟺ natred disagreements {}; normalizer violations {}; split violations {}; chain violations {}; coset form disagreements {}; pair-sum misses {}",
                s.tuples,
                s.not_disproved,
                s.disproved,
                s.disagreements,
                s.normalizer_violations,
                s.split_violations,
                s.chain_violations,
                s.form_disagreements,
                s.pair_misses
            );
        }
    }
}

fn short(p: &str) -> &str {
    p.strip_suffix("/1").unwrap_or(p)
}
