//! Argument parsing and the subcommands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use shiftlab::agler::{scalar_symbol, Branch, FactorDecomposition};
use shiftlab::equiv::compare_factorizations;
use shiftlab::numrange::{
    finite_section_oracle, openness_test, sweep_closure, tau_grid, DEFAULT_ALPHA_GRID, DEFAULT_ANGLES, DEFAULT_TAU_GRID,
};
use shiftlab::rif::{exceptional_set, Rif, EXCEPTIONAL_TOL};
use shiftlab::symbol::{assemble_product_symbol, symbol_eigenvalues, MatrixSymbol, SymbolVar};

use crate::format::{self, num, Record};
use crate::report::{self, to_json};
use crate::{exit, repro, svg, CliError};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SECTION_N: usize = 128;
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "shiftlab", version, about = "Compressed shifts of rational inner functions")]
pub struct Cli {
    #[command(flatten)]
    pub config: JobConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Minusplus,
    Plusminus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Minusplus => Branch::MinusPlus,
            BranchArg::Plusminus => Branch::PlusMinus,
        }
    }
}

/// Grid, tolerance and output settings shared by all subcommands.
#[derive(Args, Clone, Debug)]
pub struct JobConfig {
    /// Boundary points for symbol sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_TAU_GRID, value_parser = clap::value_parser!(u64).range(8..).map(|v| v as usize))]
    pub tau_grid: usize,
    /// Directions in [0, pi) for the openness test.
    #[arg(long, global = true, default_value_t = DEFAULT_ALPHA_GRID, value_parser = clap::value_parser!(u64).range(4..).map(|v| v as usize))]
    pub alpha_grid: usize,
    /// Support directions per numerical range.
    #[arg(long, global = true, default_value_t = DEFAULT_ANGLES, value_parser = clap::value_parser!(u64).range(8..).map(|v| v as usize))]
    pub angles: usize,
    /// Block size of finite sections.
    #[arg(long, global = true, default_value_t = DEFAULT_SECTION_N, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub section_n: usize,
    /// Pass tolerance for similarity checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for random sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Directory for CSV, SVG and record outputs.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Which shift: 1 for z1, 2 for z2.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
    /// Decomposition branch for single-function inputs.
    #[arg(long, global = true, value_enum, default_value_t = BranchArg::Minusplus)]
    pub branch: BranchArg,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            tau_grid: DEFAULT_TAU_GRID,
            alpha_grid: DEFAULT_ALPHA_GRID,
            angles: DEFAULT_ANGLES,
            section_n: DEFAULT_SECTION_N,
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
            out: None,
            which: 1,
            branch: BranchArg::Minusplus,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a rif or product record defines a rational inner function.
    Validate { file: PathBuf },
    /// Matrix symbol of a rif, product or symbol record.
    Symbol { file: PathBuf },
    /// Closure of the numerical range of the Toeplitz operator of a symbol.
    Numrange { file: PathBuf },
    /// Transversal-line test for openness of the numerical range.
    Openness { file: PathBuf },
    /// Unitary equivalence of two factorizations.
    Equiv { first: PathBuf, second: PathBuf },
    /// Numerical range of a finite section of the Toeplitz operator.
    Oracle { file: PathBuf },
    /// Replays a named example and compares it with its golden file.
    Repro {
        id: String,
        /// Overwrite the golden file instead of comparing.
        #[arg(long)]
        bless: bool,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::VALIDATION } else { exit::OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("shiftlab: {e}");
        return e.exit_code();
    }
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("shiftlab: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SHIFTLAB_THREADS") else { return Ok(()) };
    let n: usize =
        value.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Validation(format!("SHIFTLAB_THREADS must be a positive integer, found `{value}`"))
        })?;
    // a pool configured by an earlier call in the same process stays in place
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = &cli.config;
    let (json, code) = match &cli.command {
        Command::Validate { file } => validate(read_record(file), cfg)?,
        Command::Symbol { file } => (symbol(&read_record(file)?, cfg)?, exit::OK),
        Command::Numrange { file } => (numrange(&read_record(file)?, cfg)?, exit::OK),
        Command::Openness { file } => (openness(&read_record(file)?, cfg)?, exit::OK),
        Command::Equiv { first, second } => equiv(&read_record(first)?, &read_record(second)?, cfg)?,
        Command::Oracle { file } => (oracle(&read_record(file)?, cfg)?, exit::OK),
        Command::Repro { id, bless } => repro_command(id, *bless, cfg)?,
    };
    stdout.write_all(json.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
    Ok(code)
}

pub fn read_record(path: &Path) -> Result<Record, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    format::parse(&text)
}

fn write_output(cfg: &JobConfig, name: &str, contents: &str) -> Result<(), CliError> {
    let Some(dir) = &cfg.out else { return Ok(()) };
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

/// Decompositions of the factors of a rif or product record.
pub fn load_factors(record: &Record, cfg: &JobConfig) -> Result<Vec<FactorDecomposition>, CliError> {
    match record {
        Record::Rif(r) => Ok(vec![shiftlab::agler::decompose(r, cfg.branch.into())?]),
        Record::Product(fs) => fs.iter().map(|f| f.decompose().map_err(CliError::from)).collect(),
        _ => Err(CliError::Validation("expected a rif or product record".into())),
    }
}

/// Symbol of the shift selected by `--which`.
pub fn load_symbol(record: &Record, cfg: &JobConfig) -> Result<MatrixSymbol, CliError> {
    match record {
        Record::Symbol(s) => Ok(s.clone()),
        Record::Rif(r) if cfg.which == 1 && r.m == 1 => scalar(r, SymbolVar::ConjZ2),
        Record::Rif(r) if cfg.which == 2 && r.n == 1 => scalar(&r.swap_variables(), SymbolVar::ConjZ1),
        Record::Poly(_) => Err(CliError::Validation("a poly record has no symbol".into())),
        _ => Ok(assemble_product_symbol(&load_factors(record, cfg)?, cfg.which)?),
    }
}

fn scalar(theta: &Rif, variable: SymbolVar) -> Result<MatrixSymbol, CliError> {
    Ok(MatrixSymbol::new(vec![vec![scalar_symbol(theta)?]], vec!["theta".into()], variable)?)
}

fn record_rif(record: &Record) -> Result<Rif, CliError> {
    match record {
        Record::Rif(r) => Ok(r.clone()),
        Record::Product(fs) => Ok(Rif::product(&fs.iter().map(|f| f.rif.clone()).collect::<Vec<_>>())?),
        _ => Err(CliError::Validation("expected a rif or product record".into())),
    }
}

#[derive(Serialize)]
struct ValidationReport {
    valid: bool,
    error: Option<String>,
    m: Option<usize>,
    n: Option<usize>,
    exceptional_set: Option<Vec<report::Pair>>,
}

fn validate(record: Result<Record, CliError>, cfg: &JobConfig) -> Result<(String, i32), CliError> {
    let record = match record {
        Err(CliError::Validation(msg)) => {
            let rep = ValidationReport { valid: false, error: Some(msg), m: None, n: None, exceptional_set: None };
            return Ok((to_json(&rep), exit::VALIDATION));
        }
        other => other?,
    };
    let theta = record_rif(&record)?;
    let e = exceptional_set(&theta, cfg.tau_grid.max(64), EXCEPTIONAL_TOL);
    let rep = ValidationReport {
        valid: true,
        error: None,
        m: Some(theta.m),
        n: Some(theta.n),
        exceptional_set: Some(report::pairs(&e.points)),
    };
    Ok((to_json(&rep), exit::OK))
}

fn symbol(record: &Record, cfg: &JobConfig) -> Result<String, CliError> {
    let m = load_symbol(record, cfg)?;
    let json = to_json(&report::Symbol::from(&m));
    if cfg.out.is_some() {
        write_output(cfg, "symbol.txt", &format::emit_symbol(&m))?;
        write_output(cfg, "symbol.json", &json)?;
        let mut csv = String::from("k,tau_re,tau_im");
        for k in 0..m.dim() {
            csv.push_str(&format!(",eig{k}_re,eig{k}_im"));
        }
        csv.push('\n');
        for (k, tau) in tau_grid(cfg.tau_grid).into_iter().enumerate() {
            let mut ev = symbol_eigenvalues(&m, tau);
            ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
            csv.push_str(&format!("{k},{},{}", num(tau.re), num(tau.im)));
            for z in ev {
                csv.push_str(&format!(",{},{}", num(z.re), num(z.im)));
            }
            csv.push('\n');
        }
        write_output(cfg, "eigenvalues.csv", &csv)?;
    }
    Ok(json)
}

#[derive(Serialize)]
struct NumrangeReport {
    tau_grid: usize,
    angles: usize,
    region: report::Region,
}

fn numrange(record: &Record, cfg: &JobConfig) -> Result<String, CliError> {
    let m = load_symbol(record, cfg)?;
    let region = sweep_closure(&m, cfg.tau_grid, cfg.angles);
    if cfg.out.is_some() {
        let mut csv = String::from("x,y\n");
        for z in &region.vertices {
            csv.push_str(&format!("{},{}\n", num(z.re), num(z.im)));
        }
        write_output(cfg, "region.csv", &csv)?;
        write_output(cfg, "region.svg", &svg::region_svg(&region.vertices, "numerical range closure"))?;
    }
    Ok(to_json(&NumrangeReport { tau_grid: cfg.tau_grid, angles: cfg.angles, region: (&region).into() }))
}

fn openness(record: &Record, cfg: &JobConfig) -> Result<String, CliError> {
    let m = load_symbol(record, cfg)?;
    Ok(to_json(&report::Openness::from(&openness_test(&m, cfg.alpha_grid, cfg.tau_grid))))
}

fn equiv(first: &Record, second: &Record, cfg: &JobConfig) -> Result<(String, i32), CliError> {
    let (a, b) = (load_factors(first, cfg)?, load_factors(second, cfg)?);
    let rep = compare_factorizations(&a, &b, cfg.tau_grid, cfg.tol)?;
    let code = if rep.pass() { exit::OK } else { exit::NUMERICAL };
    Ok((to_json(&report::Equivalence::from(&rep)), code))
}

fn oracle(record: &Record, cfg: &JobConfig) -> Result<String, CliError> {
    let m = load_symbol(record, cfg)?;
    let cloud = finite_section_oracle(&m, cfg.section_n, cfg.angles.min(256), 1000, cfg.seed);
    if cfg.out.is_some() {
        let mut csv = String::from("kind,x,y\n");
        for z in &cloud.boundary {
            csv.push_str(&format!("boundary,{},{}\n", num(z.re), num(z.im)));
        }
        for z in &cloud.samples {
            csv.push_str(&format!("sample,{},{}\n", num(z.re), num(z.im)));
        }
        write_output(cfg, "cloud.csv", &csv)?;
    }
    Ok(to_json(&report::Section::new(cfg.section_n, &cloud)))
}

fn repro_command(id: &str, bless: bool, cfg: &JobConfig) -> Result<(String, i32), CliError> {
    let value = repro::run(id)?;
    let json = to_json(&value);
    write_output(cfg, &format!("{id}.json"), &json)?;
    let path = repro::golden_path(id);
    if bless {
        fs::write(&path, &json).map_err(|e| CliError::io(&path, e))?;
        return Ok((json, exit::OK));
    }
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let golden: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    match repro::compare(&value, &golden, "$") {
        Ok(()) => Ok((json, exit::OK)),
        Err(diff) => Err(CliError::Numerical(format!("{id} differs from its golden file at {diff}"))),
    }
}
