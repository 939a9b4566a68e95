use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{parse_rational, Backend, Rational, ToleranceProfile};
use crate::error::{Error, Result};

/// One scenario: algebra, subgroup, metric and the checks to run.
///
/// ```toml
/// name = "so6-demo"
/// checks = ["all"]
///
/// [algebra]
/// family = "so"
/// n = 6
///
/// [subgroup]
/// partition = [2, 2, 2]
///
/// [metric]
/// params = [1, 1, 1, 1, 1, 1]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub subgroup: SubgroupSpec,
    /// Named subspaces in the `dim`/`vec` text form.
    #[serde(default)]
    pub subspaces: BTreeMap<String, String>,
    #[serde(default)]
    pub metric: MetricSpec,
    pub checks: Vec<Check>,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default)]
    pub seed: u64,
    /// Random directions per g.o. verdict.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub tolerance: ToleranceProfile,
    /// Declared wall-clock budget in seconds.
    #[serde(default)]
    pub budget_secs: Option<u64>,
}

fn default_backend() -> Backend {
    Backend::Exact
}

fn default_samples() -> usize {
    64
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Structure table text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    /// Path to a structure table, relative to the spec file. Replaced by its
    /// contents on load.
    #[serde(default, skip_serializing)]
    pub table_file: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    /// Block-diagonal `so(k_1) ⊕ ... ⊂ so(n)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
    /// Maximal torus of `su(n)`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub torus: bool,
    /// Sum of named subspaces.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spaces: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    /// One scalar per layout block (factors, then off-diagonal blocks).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<RationalLit>>,
    /// Block-spec text over the named subspaces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<String>,
    /// Number of seeded parameter tuples for the equivalence sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

/// An integer or a rational written as a string (`"3/2"`, `"0.25"`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalLit {
    Int(i64),
    Text(String),
}

impl RationalLit {
    pub fn value(&self) -> Option<Rational> {
        match self {
            RationalLit::Int(v) => Some(crate::arith::rat(*v, 1)),
            RationalLit::Text(s) => parse_rational(s),
        }
    }
}

impl fmt::Display for RationalLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalLit::Int(v) => write!(f, "{v}"),
            RationalLit::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Validate,
    Regularity,
    Equivariance,
    Go,
    Natred,
    Split,
    Sweep,
    /// Every single-metric check.
    All,
}

impl Check {
    pub const SINGLE_METRIC: [Check; 6] = [
        Check::Validate,
        Check::Regularity,
        Check::Equivariance,
        Check::Go,
        Check::Natred,
        Check::Split,
    ];

    fn needs_metric(self) -> bool {
        matches!(self, Check::Equivariance | Check::Go | Check::Natred | Check::Split)
    }

    fn needs_subgroup(self) -> bool {
        matches!(self, Check::Regularity | Check::Equivariance | Check::Split | Check::Sweep)
    }
}

/// Where the metric of a run comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricSource {
    Params(Vec<Rational>),
    Blocks(String),
    Tuple(GridTuple),
}

/// One point of the sweep grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridTuple {
    /// Which family of parameters the tuple was drawn from.
    pub variety: String,
    /// One value per layout block.
    pub params: Vec<Rational>,
    /// Gram matrix of the inner product on the first factor, row-major,
    /// replacing its scalar. Only used when that factor is abelian.
    pub center: Option<Vec<Rational>>,
}

impl ScenarioSpec {
    /// Parses TOML. Syntax and schema errors carry line and column.
    pub fn parse(source: &str) -> Result<Self> {
        let spec: ScenarioSpec = toml::from_str(source).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_column(source, s.start));
            Error::Parse {
                line,
                column,
                message: e.message().trim().to_string(),
            }
        })?;
        if spec.algebra.table_file.is_some() {
            return Err(Error::Unsupported(
                "`table_file` needs a spec loaded from a file; use ScenarioSpec::load".into(),
            ));
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Reads a spec file, inlining a referenced structure table.
    pub fn load(path: &Path) -> Result<Self> {
        let source = std::fs::read_to_string(path)?;
        let mut spec: ScenarioSpec = toml::from_str(&source).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_column(&source, s.start));
            Error::Parse {
                line,
                column,
                message: format!("{}: {}", path.display(), e.message().trim()),
            }
        })?;
        if let Some(rel) = spec.algebra.table_file.take() {
            let full = path.parent().map_or(rel.clone(), |d| d.join(&rel));
            spec.algebra.table = Some(std::fs::read_to_string(&full)?);
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Structural consistency of the spec, independent of any algebra.
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::Precondition(format!("{}: {field}: {msg}", self.name)));
        self.tolerance.validate()?;
        let a = &self.algebra;
        match (&a.family, a.n, &a.table) {
            (Some(f), Some(n), None) => {
                let family: crate::lie::Family = f.parse()?;
                if family == crate::lie::Family::Abelian {
                    return bad("algebra.family", "an abelian algebra has no Killing metric".into());
                }
                if n == 0 {
                    return bad("algebra.n", "must be positive".into());
                }
            }
            (None, None, Some(_)) => {}
            _ => return bad("algebra", "give either `family` and `n`, or a structure table".into()),
        }
        let g = &self.subgroup;
        let kinds = usize::from(g.partition.is_some()) + usize::from(g.torus) + usize::from(!g.spaces.is_empty());
        if kinds > 1 {
            return bad("subgroup", "give exactly one of `partition`, `torus`, `spaces`".into());
        }
        if g.partition.is_some() && a.family.as_deref() != Some("so") {
            return bad("subgroup.partition", "block partitions need the `so` family".into());
        }
        if g.torus && a.family.as_deref() != Some("su") {
            return bad("subgroup.torus", "the torus layout needs the `su` family".into());
        }
        for s in &g.spaces {
            if !self.subspaces.contains_key(s) {
                return bad("subgroup.spaces", format!("unknown subspace `{s}`"));
            }
        }
        let m = &self.metric;
        let metric_kinds =
            usize::from(m.params.is_some()) + usize::from(m.blocks.is_some()) + usize::from(m.grid.is_some());
        if metric_kinds > 1 {
            return bad("metric", "give exactly one of `params`, `blocks`, `grid`".into());
        }
        if let Some(p) = &m.params {
            if let Some(v) = p.iter().find(|v| v.value().is_none()) {
                return bad("metric.params", format!("`{v}` is not a rational"));
            }
        }
        let has_layout = g.partition.is_some() || g.torus;
        if (m.params.is_some() || m.grid.is_some()) && !has_layout {
            return bad("metric", "`params` and `grid` need a partition or torus subgroup".into());
        }
        if self.checks.is_empty() {
            return bad("checks", "no checks requested".into());
        }
        let checks = self.resolved_checks();
        for c in &checks {
            if c.needs_subgroup() && kinds == 0 {
                return bad("checks", format!("`{c:?}` needs a subgroup"));
            }
            if c.needs_metric() && (m.params.is_none() && m.blocks.is_none()) {
                return bad("checks", format!("`{c:?}` needs a single metric (`params` or `blocks`)"));
            }
        }
        if checks.contains(&Check::Sweep) && m.grid.is_none() {
            return bad("checks", "`sweep` needs `metric.grid`".into());
        }
        if m.grid == Some(0) {
            return bad("metric.grid", "needs at least one tuple".into());
        }
        Ok(())
    }

    /// Requested checks in dependency order, `all` expanded.
    pub fn resolved_checks(&self) -> Vec<Check> {
        let mut out: Vec<Check> = Vec::new();
        for c in &self.checks {
            if *c == Check::All {
                out.extend(Check::SINGLE_METRIC);
            } else {
                out.push(*c);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn metric_source(&self) -> Option<MetricSource> {
        if let Some(p) = &self.metric.params {
            return Some(MetricSource::Params(p.iter().filter_map(|v| v.value()).collect()));
        }
        self.metric.blocks.clone().map(MetricSource::Blocks)
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("spec serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn algebra_label(&self) -> String {
        match (&self.algebra.family, self.algebra.n) {
            (Some(f), Some(n)) => format!("{f}({n})"),
            _ => format!("{} (table)", self.name),
        }
    }
}

fn line_column(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset.min(source.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.chars().count(), |p| before[p + 1..].chars().count()) + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIVIAL: &str = r#"
name = "trivial"
checks = ["all"]

[algebra]
family = "so"
n = 6

[subgroup]
partition = [2, 2, 2]

[metric]
params = [1, 1, 1, 1, 1, "1/1"]
"#;

    #[test]
    fn parses_and_expands_all() {
        let s = ScenarioSpec::parse(TRIVIAL).unwrap();
        assert_eq!(s.resolved_checks(), Check::SINGLE_METRIC.to_vec());
        assert_eq!(s.backend, Backend::Exact);
        assert_eq!(s.samples, 64);
        match s.metric_source().unwrap() {
            MetricSource::Params(p) => assert_eq!(p.len(), 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip_keeps_hash() {
        let s = ScenarioSpec::parse(TRIVIAL).unwrap();
        let t = ScenarioSpec::parse(&s.to_toml()).unwrap();
        assert_eq!(s, t);
        assert_eq!(s.hash(), t.hash());
        let mut u = s.clone();
        u.seed = 1;
        assert_ne!(s.hash(), u.hash());
    }

    #[test]
    fn syntax_error_has_position() {
        let src = "name = \"x\"\nchecks = [\"go\"\n[algebra]\n";
        match ScenarioSpec::parse(src) {
            Err(Error::Parse { line, .. }) => assert!(line >= 2),
            other => panic!("{other:?}"),
        }
        let src = "name = \"x\"\nchecks = [\"go\"]\nbogus = 1\n[algebra]\nfamily = \"so\"\nn = 4\n";
        match ScenarioSpec::parse(src) {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!((line, column), (3, 1), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_check_is_located() {
        let src = "name = \"x\"\nchecks = [\"go\", \"fly\"]\n[algebra]\nfamily = \"so\"\nn = 4\n";
        match ScenarioSpec::parse(src) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 17)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let no_metric = TRIVIAL.replace("params = [1, 1, 1, 1, 1, \"1/1\"]", "");
        assert!(matches!(ScenarioSpec::parse(&no_metric), Err(Error::Precondition(_))));
        let sweep_without_grid = TRIVIAL.replace("checks = [\"all\"]", "checks = [\"sweep\"]");
        assert!(ScenarioSpec::parse(&sweep_without_grid).is_err());
        let torus_on_so = TRIVIAL.replace("partition = [2, 2, 2]", "torus = true");
        assert!(ScenarioSpec::parse(&torus_on_so).is_err());
        let bad_rational = TRIVIAL.replace("\"1/1\"", "\"1/0\"");
        assert!(ScenarioSpec::parse(&bad_rational).is_err());
    }
}
