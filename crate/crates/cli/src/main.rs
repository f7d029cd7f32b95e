use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use uvmethod::distributions::{FamilyKind, FamilyParam};
use uvmethod::estimators::{
    in_zero_set, v_aggregate, v_star_aggregate, Direction, SampleBatch, ThresholdRule,
};
use uvmethod::experiments::{boundary_rate_table, CellFormat};
use uvmethod::risk::{
    dominance_scan, exact_report, mc_prediction_risk, mc_risk, LossSpec, RiskReport, ScanDomain,
};

/// Precision of human-readable CSV output. JSON always carries full precision.
const HUMAN: CellFormat = CellFormat::Significant(6);

/// Table cells are printed to three decimals, the precision of the published values.
const TABLE: CellFormat = CellFormat::Decimals(3);

#[derive(Parser)]
#[command(
    name = "uvmethod",
    version,
    about = "Unbiased estimation of threshold sums and the estimator that dominates it",
    after_help = "\
Exit codes:
  0  success
  1  dominance violation found
  2  input or parameter error
  3  unsupported combination"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute V and V* from a CSV file with a single `value` column
    Estimate {
        #[command(flatten)]
        rule: RuleArgs,
        /// CSV file with header `value`, one observation per row
        #[arg(long)]
        input: PathBuf,
        /// Emit JSON instead of CSV
        #[arg(long)]
        json: bool,
    },
    /// Print the Poisson improvement table (θ = A + 1, n = 1..10)
    Table1 {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Exact squared-error risks of V and V*
    Risk {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, value_enum, default_value_t = LossArg::Squared)]
        loss: LossArg,
    },
    /// Seeded Monte Carlo risks of V and V*
    Simulate {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, value_enum, default_value_t = LossArg::Squared)]
        loss: LossArg,
        /// Number of replicates (at least 2)
        #[arg(long)]
        reps: usize,
        #[arg(long)]
        seed: u64,
        /// Score against S* = Σ Y_j U(X_j), Y_j an unobserved copy of X_j
        #[arg(long)]
        predict: bool,
    },
    /// Check pointwise that V* never loses to V
    Dominance {
        #[command(flatten)]
        rule: RuleArgs,
        /// Number of observations
        #[arg(short = 'n')]
        n: usize,
        /// Enumerate every point of {0, …, M}^n (discrete families, n ≤ 3)
        #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
        xmax: Option<u64>,
        /// Draw M points instead of enumerating
        #[arg(long, requires = "seed")]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = LossArg::Squared)]
        loss: LossArg,
    },
}

#[derive(Args)]
struct RuleArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Threshold A ≥ 0
    #[arg(long)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = DirectionArg::Le)]
    direction: DirectionArg,
}

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    rule: RuleArgs,
    /// Parameters θ_1,…,θ_n (one per observation)
    #[arg(long, value_delimiter = ',', required = true)]
    theta: Vec<f64>,
    /// Repeat a single θ for n observations
    #[arg(short = 'n')]
    n: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Poisson,
    Geometric,
    Exponential,
    #[value(alias = "uniform_scale")]
    Uniform,
}

impl From<FamilyArg> for FamilyKind {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Poisson => FamilyKind::Poisson,
            FamilyArg::Geometric => FamilyKind::Geometric,
            FamilyArg::Exponential => FamilyKind::Exponential,
            FamilyArg::Uniform => FamilyKind::UniformScale,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    /// x ≤ A
    Le,
    /// x > A
    Gt,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LossArg {
    Squared,
    Absolute,
}

impl From<LossArg> for LossSpec {
    fn from(l: LossArg) -> Self {
        match l {
            LossArg::Squared => LossSpec::Squared,
            LossArg::Absolute => LossSpec::Absolute,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn unsupported(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<uvmethod::Error> for Failure {
    fn from(e: uvmethod::Error) -> Self {
        let code = match e {
            uvmethod::Error::Unsupported(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type CmdResult = Result<ExitCode, Failure>;

impl RuleArgs {
    fn kind(&self) -> FamilyKind {
        self.family.into()
    }

    fn rule(&self) -> Result<ThresholdRule, Failure> {
        let direction = match self.direction {
            DirectionArg::Le => Direction::AtMost,
            DirectionArg::Gt => Direction::GreaterThan,
        };
        Ok(ThresholdRule::new(self.threshold, direction)?)
    }
}

impl DesignArgs {
    fn families(&self) -> Result<Vec<FamilyParam>, Failure> {
        let thetas = match (self.n, self.theta.as_slice()) {
            (None, thetas) => thetas.to_vec(),
            (Some(0), _) => return Err(Failure::input("-n must be at least 1")),
            (Some(n), [t]) => vec![*t; n],
            (Some(n), thetas) if thetas.len() == n => thetas.to_vec(),
            (Some(n), thetas) => {
                return Err(Failure::input(format!("-n {n} given with {} θ values", thetas.len())))
            }
        };
        let kind = self.rule.kind();
        Ok(thetas.iter().map(|&t| FamilyParam::new(kind, t)).collect::<Result<_, _>>()?)
    }
}

/// Report plus the design it was computed for.
#[derive(Serialize)]
struct DesignReport<'a> {
    family: FamilyKind,
    #[serde(rename = "A")]
    threshold: f64,
    direction: Direction,
    thetas: Vec<f64>,
    #[serde(flatten)]
    report: &'a RiskReport,
}

fn print_report(fams: &[FamilyParam], rule: &ThresholdRule, report: &RiskReport) -> CmdResult {
    let out = DesignReport {
        family: fams[0].kind(),
        threshold: rule.threshold(),
        direction: rule.direction(),
        thetas: fams.iter().map(FamilyParam::theta).collect(),
        report,
    };
    print_json(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::input(format!("could not serialize output: {e}")))?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct EstimateOutput {
    n: usize,
    family: FamilyKind,
    #[serde(rename = "A")]
    threshold: f64,
    direction: Direction,
    v: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    v_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeroed_set_hit: Option<bool>,
}

impl EstimateOutput {
    fn to_csv(&self) -> String {
        let mut header = vec!["n", "family", "A", "direction", "v"];
        let mut row = vec![
            self.n.to_string(),
            self.family.name().to_string(),
            HUMAN.format(self.threshold),
            self.direction.name().to_string(),
            HUMAN.format(self.v),
        ];
        if let (Some(v_star), Some(hit)) = (self.v_star, self.zeroed_set_hit) {
            header.extend(["v_star", "zeroed_set_hit"]);
            row.extend([HUMAN.format(v_star), hit.to_string()]);
        }
        format!("{}\n{}\n", header.join(","), row.join(","))
    }
}

fn read_values(path: &Path) -> Result<Vec<f64>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    if headers.len() != 1 || &headers[0] != "value" {
        return Err(Failure::input(format!(
            "{}: expected a single column named `value`",
            path.display()
        )));
    }
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let field = &record[0];
        if field.is_empty() {
            continue;
        }
        let x: f64 = field
            .parse()
            .map_err(|_| Failure::input(format!("{}: not a number: {field:?}", path.display())))?;
        values.push(x);
    }
    Ok(values)
}

fn cmd_estimate(args: &RuleArgs, input: &Path, json: bool) -> CmdResult {
    let kind = args.kind();
    let rule = args.rule()?;
    if !uvmethod::estimators::supports(kind, rule.direction()) {
        return Err(Failure::unsupported(format!(
            "{kind} has no unbiased estimator for the {} direction",
            rule.direction().name()
        )));
    }
    let batch = SampleBatch::new(kind, read_values(input)?)?;
    let v = v_aggregate(kind, &rule, &batch)?;
    let (v_star, zeroed_set_hit) = match rule.direction() {
        Direction::AtMost => (
            Some(v_star_aggregate(kind, &rule, &batch)?),
            Some(in_zero_set(kind, &rule, &batch)?),
        ),
        Direction::GreaterThan => (None, None),
    };
    let out = EstimateOutput {
        n: batch.len(),
        family: kind,
        threshold: rule.threshold(),
        direction: rule.direction(),
        v,
        v_star,
        zeroed_set_hit,
    };
    if json {
        print_json(&out)?;
    } else {
        print!("{}", out.to_csv());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table1(format: Format) -> CmdResult {
    let table = boundary_rate_table();
    match format {
        Format::Csv => print!("{}", table.to_csv(TABLE)),
        Format::Json => print_json(&table.cells())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_risk(design: &DesignArgs, loss: LossArg) -> CmdResult {
    if loss != LossArg::Squared {
        return Err(Failure::unsupported(
            "exact risks exist for squared error only; use `simulate` for other losses",
        ));
    }
    let fams = design.families()?;
    let rule = design.rule.rule()?;
    print_report(&fams, &rule, &exact_report(&fams, &rule)?)
}

fn cmd_simulate(design: &DesignArgs, loss: LossArg, reps: usize, seed: u64, predict: bool) -> CmdResult {
    let fams = design.families()?;
    let rule = design.rule.rule()?;
    let loss = LossSpec::from(loss);
    let report = if predict {
        mc_prediction_risk(&loss, &fams, &rule, reps, seed)?
    } else {
        mc_risk(&loss, &fams, &rule, reps, seed)?
    };
    print_report(&fams, &rule, &report)
}

fn cmd_dominance(
    args: &RuleArgs,
    n: usize,
    xmax: Option<u64>,
    samples: Option<usize>,
    seed: Option<u64>,
    loss: LossArg,
) -> CmdResult {
    let domain = match (xmax, samples, seed) {
        (Some(xmax), None, _) => ScanDomain::Enumerate { xmax },
        (None, Some(count), Some(seed)) => ScanDomain::Sample { count, seed },
        _ => return Err(Failure::input("give either --xmax or --samples with --seed")),
    };
    let report = dominance_scan(args.kind(), n, &args.rule()?, &loss.into(), domain)?;
    print_json(&report)?;
    Ok(if report.violations > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn run(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Estimate { rule, input, json } => cmd_estimate(rule, input, *json),
        Command::Table1 { format } => cmd_table1(*format),
        Command::Risk { design, loss } => cmd_risk(design, *loss),
        Command::Simulate { design, loss, reps, seed, predict } => {
            cmd_simulate(design, *loss, *reps, *seed, *predict)
        }
        Command::Dominance { rule, n, xmax, samples, seed, loss } => {
            cmd_dominance(rule, *n, *xmax, *samples, *seed, *loss)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code)
        }
    }
}
