//! Command-line front end. `run` parses arguments, dispatches and returns the
//! exit code with everything that would go to stdout and stderr.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use curvefill::bounds::{self, BoundParams, BoundsError, StratifiedTheorem};
use curvefill::diagram::{cyclic_cover_lift, generate_pillowcase_pair, generate_torus_pair, CoverCut, CrossingDiagram, DiagramError, Family, SurfaceSignature};
use curvefill::geom::{self, GeomError, Precision};
use curvefill::slopes::oracle::{self, OracleError};
use curvefill::slopes::{self, Slope, SlopeError, SurfaceKind};
use curvefill::strat::{self, StratError};

mod report;

pub use report::big;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{message}")]
    Validation { kind: &'static str, message: String },
    /// The oracle disagreed; the report still goes to stdout.
    #[error("oracle mismatch")]
    Mismatch(Value),
}

fn invalid(kind: &'static str, e: impl std::fmt::Display) -> CliError {
    CliError::Validation { kind, message: e.to_string() }
}

impl From<SlopeError> for CliError {
    fn from(e: SlopeError) -> Self {
        invalid("slope", e)
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        invalid("diagram", e)
    }
}

impl From<StratError> for CliError {
    fn from(e: StratError) -> Self {
        invalid("strat", e)
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        invalid("geom", e)
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        invalid("bounds", e)
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        invalid("oracle", e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "curvefill", version, about = "Filling pairs of curves: distances, diagrams, lengths and volume bounds")]
struct Cli {
    /// Output format; csv is only available for tables.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Farey graph distance between two slopes.
    Distance(SlopePair),
    /// Geometric intersection number of two slopes.
    Intersect {
        #[command(flatten)]
        pair: SlopePair,
        #[arg(long, value_enum, default_value_t = Surface::T11)]
        surface: Surface,
    },
    /// A shortest Farey path between two slopes.
    Geodesic(SlopePair),
    #[command(subcommand)]
    Diagram(DiagramCommand),
    /// Rectangle-criterion report for a diagram file.
    Stratify {
        file: PathBuf,
        /// Puncture every offending face and emit the result too.
        #[arg(long)]
        puncture: bool,
    },
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Hyperbolic and flat lengths on the square torus.
    Lengths(LengthsArgs),
    #[command(subcommand)]
    Bounds(BoundsCommand),
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args)]
struct SlopePair {
    #[arg(allow_hyphen_values = true)]
    s1: String,
    #[arg(allow_hyphen_values = true)]
    s2: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Surface {
    T11,
    S04,
}

#[derive(Debug, Subcommand)]
enum DiagramCommand {
    /// Face census, signature and invariant checks.
    Analyze { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Alpha,
    Beta,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Alpha => Family::Alpha,
            FamilyArg::Beta => Family::Beta,
        }
    }
}

#[derive(Debug, Subcommand)]
enum GenerateCommand {
    /// Torus pair (0/1, u_n/u_{n+1}).
    Lame {
        #[arg(long)]
        n: u32,
    },
    /// Flat geodesic pair on the torus or the pillowcase.
    TorusPair {
        #[command(flatten)]
        pair: SlopePair,
        #[arg(long)]
        pillowcase: bool,
        /// Face ids to puncture, repeatable.
        #[arg(long = "puncture")]
        punctures: Vec<usize>,
    },
    /// Cyclic cover of a diagram cut along one of its components.
    Cover {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = FamilyArg::Beta)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long)]
        degree: u32,
    },
    /// Unstratifiable diagram with the given signature.
    Witness {
        /// `g,k`
        #[arg(long)]
        signature: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    SquareTorus,
    Flat,
}

#[derive(Debug, Args)]
struct LengthsArgs {
    #[arg(long, value_enum, default_value_t = Metric::SquareTorus)]
    metric: Metric,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "lemma_toro", conflicts_with = "lemma_toro")]
    slope: Option<String>,
    /// Length sandwich and log bracket for the pair `(a, u_n a + u_{n+1} b)`.
    #[arg(long, requires = "n")]
    lemma_toro: bool,
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 1.0)]
    k1: f64,
    #[arg(long, default_value_t = 0.0)]
    k0: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<BoundParams, CliError> {
        Ok(BoundParams::new(self.k1, self.k0)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    E,
    F,
}

#[derive(Debug, Subcommand)]
enum BoundsCommand {
    /// Interval for one filling pair at distance `d`.
    Pair {
        #[arg(long)]
        d: u64,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Interval for a cyclic collection, from distances or slopes.
    Collection {
        #[arg(long, value_delimiter = ',', required_unless_present = "slopes", conflicts_with = "slopes")]
        d: Vec<u64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        slopes: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Interval for a stratified collection.
    Stratified {
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u64>,
        #[arg(long, value_enum, default_value_t = TheoremArg::E)]
        theorem: TheoremArg,
        #[arg(long)]
        pairwise_filling: bool,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Lifted pair on a cover of the punctured torus.
    TheoremC {
        /// `g,k`
        #[arg(long)]
        signature: String,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Ratio table along the Fibonacci pairs.
    TheoremD {
        #[arg(long)]
        nmax: u32,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Replay one distance query against BFS.
    Distance(SlopePair),
    /// Every pair of slopes up to a height.
    Sweep {
        #[arg(long, default_value_t = 34)]
        height: i64,
    },
    /// The pairs (0/1, u_n/u_{n+1}) for 2 <= n <= nmax.
    Lame {
        #[arg(long, default_value_t = 16)]
        nmax: u32,
    },
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Outcome { code, stdout, stderr };
        }
    };
    outcome(dispatch(&cli))
}

fn outcome(result: Result<String, CliError>) -> Outcome {
    match result {
        Ok(out) => Outcome { code: EXIT_OK, stdout: out, stderr: String::new() },
        Err(CliError::Usage(msg)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(CliError::Validation { kind, message }) => Outcome {
            code: EXIT_VALIDATION,
            stdout: String::new(),
            stderr: render(&json!({ "error": { "kind": kind, "message": message } })),
        },
        Err(CliError::Mismatch(report)) => Outcome {
            code: EXIT_MISMATCH,
            stdout: render(&report),
            stderr: render(&json!({ "error": { "kind": "mismatch", "message": "oracle disagrees with farey_distance" } })),
        },
    }
}

fn render<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn slope(text: &str) -> Result<Slope, CliError> {
    Ok(text.parse::<Slope>()?)
}

fn signature(text: &str) -> Result<SurfaceSignature, CliError> {
    let parts: Vec<_> = text.split(',').map(str::trim).collect();
    let bad = || invalid("signature", format!("expected `g,k`, got {text:?}"));
    match parts.as_slice() {
        [g, k] => Ok(SurfaceSignature::new(g.parse().map_err(|_| bad())?, k.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn read_diagram(path: &Path) -> Result<CrossingDiagram, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid("io", format!("{}: {e}", path.display())))?;
    Ok(CrossingDiagram::from_json(&text)?)
}

fn json_only(format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage("csv output is only available for `bounds theorem-d`".into())),
    }
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    if !matches!(cli.command, Command::Bounds(BoundsCommand::TheoremD { .. })) {
        json_only(cli.format)?;
    }
    let value = match &cli.command {
        Command::Distance(p) => {
            let (s1, s2) = (slope(&p.s1)?, slope(&p.s2)?);
            json!({ "s1": s1, "s2": s2, "distance": slopes::farey_distance(&s1, &s2) })
        }
        Command::Intersect { pair, surface } => {
            let (s1, s2) = (slope(&pair.s1)?, slope(&pair.s2)?);
            let (kind, name) = match surface {
                Surface::T11 => (SurfaceKind::T11, "T11"),
                Surface::S04 => (SurfaceKind::S04, "S04"),
            };
            json!({ "s1": s1, "s2": s2, "surface": name, "intersection": big(&slopes::intersection_number(&s1, &s2, kind)) })
        }
        Command::Geodesic(p) => {
            let (s1, s2) = (slope(&p.s1)?, slope(&p.s2)?);
            let path = slopes::farey_geodesic(&s1, &s2);
            json!({ "s1": s1, "s2": s2, "distance": path.len(), "path": path.vertices })
        }
        Command::Diagram(DiagramCommand::Analyze { file }) => report::analyze(&read_diagram(file)?)?,
        Command::Stratify { file, puncture } => {
            let d = read_diagram(file)?;
            let before = strat::is_stratifiable(&d)?;
            if *puncture {
                let s = strat::stratify_by_puncturing(&d)?;
                let after = strat::is_stratifiable(&s.diagram)?;
                json!({ "report": before, "k": s.k, "after": after, "diagram": s.diagram.to_raw() })
            } else {
                serde_json::to_value(before).expect("serializes")
            }
        }
        Command::Generate(g) => generate(g)?,
        Command::Lengths(a) => lengths(a)?,
        Command::Bounds(b) => return bounds_command(b, cli.format),
        Command::Oracle(o) => oracle_command(o)?,
    };
    Ok(render(&value))
}

fn generate(cmd: &GenerateCommand) -> Result<Value, CliError> {
    let d = match cmd {
        GenerateCommand::Lame { n } => {
            let (a, b) = slopes::lame_pair(*n)?;
            generate_torus_pair(&a, &b)?
        }
        GenerateCommand::TorusPair { pair, pillowcase, punctures } => {
            let (s1, s2) = (slope(&pair.s1)?, slope(&pair.s2)?);
            let d = if *pillowcase { generate_pillowcase_pair(&s1, &s2)? } else { generate_torus_pair(&s1, &s2)? };
            d.add_punctures(punctures)?
        }
        GenerateCommand::Cover { file, family, index, degree } => {
            let d = read_diagram(file)?;
            cyclic_cover_lift(&d, &CoverCut::Component((*family).into(), *index), *degree)?
        }
        GenerateCommand::Witness { signature: sig } => strat::unstratifiable_witness(signature(sig)?)?,
    };
    Ok(serde_json::to_value(d.to_raw()).expect("serializes"))
}

fn lengths(a: &LengthsArgs) -> Result<Value, CliError> {
    let precision = Precision::from_env();
    if a.lemma_toro {
        let n = a.n.expect("clap requires --n");
        let sandwich = geom::lame_lengths(n, precision)?;
        let log = geom::log_length_vs_distance(n, precision)?;
        return Ok(json!({
            "n": n,
            "precision": precision,
            "sandwich": sandwich,
            "log_bracket": log,
            "systole": geom::compare_systole(),
        }));
    }
    let s = slope(a.slope.as_deref().expect("clap requires --slope"))?;
    let word = geom::word_for_slope(&s);
    Ok(match a.metric {
        Metric::SquareTorus => json!({
            "slope": s,
            "metric": "square-torus",
            "precision": precision,
            "word": word,
            "length": geom::square_torus_length(&word, precision)?,
            "flat_length": geom::flat_length(&s),
            "systole": geom::compare_systole(),
        }),
        Metric::Flat => json!({ "slope": s, "metric": "flat", "length": geom::flat_length(&s) }),
    })
}

fn bounds_command(cmd: &BoundsCommand, format: Format) -> Result<String, CliError> {
    if !matches!(cmd, BoundsCommand::TheoremD { .. }) {
        json_only(format)?;
    }
    let value = match cmd {
        BoundsCommand::Pair { d, params } => {
            json!({ "d": d, "params": params.params()?, "interval": bounds::pair_bound(*d, params.params()?) })
        }
        BoundsCommand::Collection { d, slopes: raw, params } => {
            let p = params.params()?;
            if raw.is_empty() {
                json!({ "distances": d, "params": p, "interval": bounds::collection_bound(d, p)? })
            } else {
                let parsed = raw.iter().map(|s| slope(s)).collect::<Result<Vec<_>, _>>()?;
                let ordered = bounds::order_by_slope(&parsed)?;
                let distances = bounds::cyclic_distances(&ordered);
                json!({
                    "slopes": ordered,
                    "distances": distances,
                    "params": p,
                    "interval": bounds::collection_bound(&distances, p)?,
                })
            }
        }
        BoundsCommand::Stratified { d, theorem, pairwise_filling, params } => {
            let p = params.params()?;
            let t = match theorem {
                TheoremArg::E => StratifiedTheorem::E,
                TheoremArg::F => StratifiedTheorem::F,
            };
            json!({ "distances": d, "params": p, "interval": bounds::stratified_bound(d, p, t, *pairwise_filling)? })
        }
        BoundsCommand::TheoremC { signature: sig, n, params } => {
            serde_json::to_value(bounds::theorem_c_family(signature(sig)?, *n, params.params()?)?).expect("serializes")
        }
        BoundsCommand::TheoremD { nmax, params } => {
            let table = bounds::theorem_d_ratios(*nmax, params.params()?, Precision::from_env())?;
            if format == Format::Csv {
                return Ok(report::theorem_d_csv(&table));
            }
            serde_json::to_value(table).expect("serializes")
        }
    };
    Ok(render(&value))
}

fn oracle_command(cmd: &OracleCommand) -> Result<Value, CliError> {
    let (value, agree) = match cmd {
        OracleCommand::Distance(p) => {
            let c = oracle::check(&slope(&p.s1)?, &slope(&p.s2)?)?;
            let agree = c.agree;
            (serde_json::to_value(c).expect("serializes"), agree)
        }
        OracleCommand::Sweep { height } => {
            if *height < 1 {
                return Err(invalid("oracle", "height must be positive"));
            }
            let r = oracle::sweep(*height)?;
            let agree = r.agree;
            (serde_json::to_value(r).expect("serializes"), agree)
        }
        OracleCommand::Lame { nmax } => {
            let mut checks = Vec::new();
            for n in 2..=*nmax {
                let (a, b) = slopes::lame_pair(n)?;
                checks.push(oracle::check(&a, &b)?);
            }
            let agree = checks.iter().all(|c| c.agree);
            (json!({ "nmax": nmax, "agree": agree, "checks": checks }), agree)
        }
    };
    if agree {
        Ok(value)
    } else {
        Err(CliError::Mismatch(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatch_keeps_report_on_stdout() {
        let out = outcome(Err(CliError::Mismatch(json!({ "agree": false }))));
        assert_eq!(out.code, EXIT_MISMATCH);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["agree"], false);
        let e: Value = serde_json::from_str(&out.stderr).unwrap();
        assert_eq!(e["error"]["kind"], "mismatch");
    }

    #[test]
    fn agreeing_oracle_exits_zero() {
        let out = run(["curvefill", "oracle", "lame", "--nmax", "8"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.ends_with("}\n"));
    }

    #[test]
    fn signature_parsing() {
        assert_eq!(signature("2,3").unwrap(), SurfaceSignature::new(2, 3));
        assert!(signature("2").is_err());
        assert!(signature("a,b").is_err());
    }
}
