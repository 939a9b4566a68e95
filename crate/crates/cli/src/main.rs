use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gorbit::arith::{Backend, ToleranceProfile};
use gorbit::scenario::{
    find_scenario, replay, run_check, scenario_catalog, AlgebraSpec, Check, MetricSpec, RationalLit, Record, Report,
    ReportFormat, ScenarioSpec, SubgroupSpec,
};

#[derive(Parser)]
#[command(name = "gorbit", version, about = "Geodesic-orbit and naturally reductive metric verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure-constant checks on an algebra.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
    /// One criterion on one subgroup and metric.
    Check {
        criterion: Criterion,
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Seeded sweeps over block-scalar metrics.
    Sweep {
        #[command(subcommand)]
        action: SweepAction,
    },
    /// Built-in or file-based scenarios.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Re-verify every certificate and counterexample in a machine report.
    Replay { report: PathBuf },
}

#[derive(Subcommand)]
enum AlgebraAction {
    /// Antisymmetry, Jacobi and ad-invariance of the Killing form.
    Validate {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        run: RunOpts,
    },
}

#[derive(Subcommand)]
enum SweepAction {
    /// g.o. against naturally reductive over a seeded parameter grid.
    Equivalence {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        subgroup: SubgroupArgs,
        /// Number of parameter tuples.
        #[arg(long, default_value_t = 200)]
        tuples: usize,
        #[command(flatten)]
        run: RunOpts,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Names and descriptions of the built-in scenarios.
    List,
    /// Run a built-in scenario by name, or a TOML spec with `--file`.
    Run {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        file: Option<PathBuf>,
        #[command(flatten)]
        run: RunOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Criterion {
    Regular,
    WeaklyRegular,
    Equivariance,
    Go,
    Natred,
    Split,
}

#[derive(Args)]
struct AlgebraArgs {
    /// `so`, `su` or `sp`.
    #[arg(long, requires = "n", conflicts_with = "table")]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Structure table file.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct SubgroupArgs {
    /// Block partition of `n` for `so(n)`, e.g. `2,2,2`.
    #[arg(long, value_delimiter = ',')]
    partition: Option<Vec<usize>>,
    /// Maximal torus of `su(n)`.
    #[arg(long)]
    torus: bool,
    /// Subspace file spanning `k`.
    #[arg(long)]
    subgroup: Option<PathBuf>,
}

#[derive(Args)]
struct Target {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[command(flatten)]
    subgroup: SubgroupArgs,
    /// One scalar per layout block, e.g. `1,2,3/2`.
    #[arg(long, value_delimiter = ',', conflicts_with = "blocks")]
    params: Option<Vec<String>>,
    /// BlockSpec file describing the metric.
    #[arg(long)]
    blocks: Option<PathBuf>,
    /// Subspace files referenced by the BlockSpec, as `name=path`.
    #[arg(long = "space", value_parser = parse_named)]
    spaces: Vec<(String, PathBuf)>,
}

#[derive(Args)]
struct RunOpts {
    #[arg(long)]
    backend: Option<BackendArg>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random directions per g.o. verdict.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol_rank: Option<f64>,
    #[arg(long)]
    tol_residual: Option<f64>,
    #[arg(long)]
    tol_eigen: Option<f64>,
    #[arg(long, default_value = "human")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

fn parse_named(s: &str) -> std::result::Result<(String, PathBuf), String> {
    let (name, path) = s.split_once('=').ok_or_else(|| format!("expected name=path, got `{s}`"))?;
    Ok((name.to_string(), PathBuf::from(path)))
}

impl RunOpts {
    fn apply(&self, spec: &mut ScenarioSpec) {
        if let Some(b) = self.backend {
            spec.backend = match b {
                BackendArg::Exact => Backend::Exact,
                BackendArg::Float => Backend::Float,
            };
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(s) = self.samples {
            spec.samples = s;
        }
        let t = &mut spec.tolerance;
        if let Some(v) = self.tol_rank {
            t.rank_epsilon = v;
        }
        if let Some(v) = self.tol_residual {
            t.residual_epsilon = v;
        }
        if let Some(v) = self.tol_eigen {
            t.eigen_gap_epsilon = v;
        }
    }

    fn format(&self) -> ReportFormat {
        match self.format {
            FormatArg::Human => ReportFormat::Human,
            FormatArg::Machine => ReportFormat::Machine,
        }
    }
}

fn blank_spec(name: &str, algebra: AlgebraSpec, checks: Vec<Check>) -> ScenarioSpec {
    ScenarioSpec {
        name: name.into(),
        description: String::new(),
        algebra,
        subgroup: SubgroupSpec::default(),
        subspaces: Default::default(),
        metric: MetricSpec::default(),
        checks,
        backend: Backend::Exact,
        seed: 0,
        samples: 64,
        tolerance: ToleranceProfile::default(),
        budget_secs: None,
    }
}

fn algebra_spec(a: &AlgebraArgs) -> Result<AlgebraSpec> {
    match (&a.family, a.n, &a.table) {
        (Some(f), Some(n), None) => Ok(AlgebraSpec {
            family: Some(f.clone()),
            n: Some(n),
            ..Default::default()
        }),
        (None, None, Some(path)) => Ok(AlgebraSpec {
            table: Some(read(path)?),
            ..Default::default()
        }),
        _ => bail!("give either --family and --n, or --table"),
    }
}

fn apply_subgroup(spec: &mut ScenarioSpec, s: &SubgroupArgs) -> Result<()> {
    spec.subgroup.partition = s.partition.clone();
    spec.subgroup.torus = s.torus;
    if let Some(path) = &s.subgroup {
        spec.subspaces.insert("k".into(), read(path)?);
        spec.subgroup.spaces = vec!["k".into()];
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn check_spec(criterion: Criterion, target: &Target) -> Result<ScenarioSpec> {
    let check = match criterion {
        Criterion::Regular | Criterion::WeaklyRegular => Check::Regularity,
        Criterion::Equivariance => Check::Equivariance,
        Criterion::Go => Check::Go,
        Criterion::Natred => Check::Natred,
        Criterion::Split => Check::Split,
    };
    let mut spec = blank_spec("check", algebra_spec(&target.algebra)?, vec![check]);
    apply_subgroup(&mut spec, &target.subgroup)?;
    for (name, path) in &target.spaces {
        spec.subspaces.insert(name.clone(), read(path)?);
    }
    if let Some(p) = &target.params {
        spec.metric.params = Some(p.iter().map(|v| RationalLit::Text(v.trim().to_string())).collect());
    }
    if let Some(path) = &target.blocks {
        spec.metric.blocks = Some(read(path)?);
    }
    Ok(spec)
}

/// Exit code 2 when the report carries a negative verdict. The regularity
/// verbs also count a failed property as negative.
fn verdict_code(report: &Report, criterion: Option<Criterion>) -> u8 {
    let failed_regularity = report.records.iter().any(|r| match (r, criterion) {
        (Record::Regularity(g), Some(Criterion::Regular)) => !g.regular,
        (Record::Regularity(g), Some(Criterion::WeaklyRegular)) => !g.weakly_regular,
        _ => false,
    });
    if failed_regularity {
        eprintln!("verdict: the subgroup does not have the requested property");
    }
    if report.has_negative() || failed_regularity {
        2
    } else {
        0
    }
}

fn execute(mut spec: ScenarioSpec, run: &RunOpts, criterion: Option<Criterion>) -> Result<u8> {
    run.apply(&mut spec);
    spec.validate()?;
    let report = run_check(&spec)?;
    let text = report.emit(run.format());
    match &run.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(verdict_code(&report, criterion))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Algebra {
            action: AlgebraAction::Validate { algebra, run },
        } => execute(blank_spec("validate", algebra_spec(&algebra)?, vec![Check::Validate]), &run, None),
        Command::Check { criterion, target, run } => execute(check_spec(criterion, &target)?, &run, Some(criterion)),
        Command::Sweep {
            action:
                SweepAction::Equivalence {
                    algebra,
                    subgroup,
                    tuples,
                    run,
                },
        } => {
            let mut spec = blank_spec("sweep", algebra_spec(&algebra)?, vec![Check::Sweep]);
            apply_subgroup(&mut spec, &subgroup)?;
            spec.metric.grid = Some(tuples);
            execute(spec, &run, None)
        }
        Command::Scenario {
            action: ScenarioAction::List,
        } => {
            for s in scenario_catalog() {
                let budget = s.budget_secs.map_or(String::new(), |b| format!(" [budget {b}s]"));
                println!("{:<26} {}{budget}", s.name, s.description);
            }
            Ok(0)
        }
        Command::Scenario {
            action: ScenarioAction::Run { name, file, run },
        } => {
            let spec = match (name, file) {
                (Some(n), None) => find_scenario(&n).with_context(|| format!("no built-in scenario `{n}`"))?,
                (None, Some(path)) => ScenarioSpec::load(&path)?,
                _ => bail!("give a scenario name or --file"),
            };
            execute(spec, &run, None)
        }
        Command::Replay { report } => {
            let parsed = Report::parse_machine(&read(&report)?)?;
            let outcome = replay(&parsed)?;
            println!(
                "certificates {}/{} verified, counterexamples {}/{} verified, {} unconfirmed",
                outcome.certificates_checked - outcome.certificates_failed,
                outcome.certificates_checked,
                outcome.counterexamples_checked - outcome.counterexamples_failed,
                outcome.counterexamples_checked,
                outcome.unconfirmed
            );
            Ok(if outcome.ok() { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
