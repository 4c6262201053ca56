use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use isogroup::catalog;
use isogroup::dual::enumerate_dual;
use isogroup::fourier::{
    inner_product, inverse_transform, transform, FunctionFile, TableFile,
};
use isogroup::group::{GroupSpec, GroupSpecFile};
use isogroup::quotient::QuotientGroup;
use isogroup::repr::irreps;
use isogroup::splitting::split_quotient;
use isogroup::verify::verify_spec;
use isogroup::Error;

#[derive(Parser)]
#[command(name = "isogroup", version, about = "Finite quotients, wave-vector atlases and Fourier analysis for discrete isometry groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Seed for the irrep solver and random self-tests.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the spec's float tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a spec and report m0 and quotient orders.
    Analyze {
        spec: String,
        /// Quotient moduli to count (default m0, 2m0, 3m0).
        #[arg(long = "N")]
        n: Vec<u64>,
    },
    /// Wave-label atlas of the irreps of G_N.
    Dual {
        spec: String,
        #[arg(long = "N")]
        n: u64,
    },
    /// Fourier transform of a function file, or the inverse of a table file.
    Fourier {
        spec: String,
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
        /// Run a Plancherel and round-trip self-test on the input.
        #[arg(long)]
        check: bool,
    },
    /// Semidirect splitting certificate for N = m·n.
    Split {
        spec: String,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
    /// Run every invariant check on a group.
    Verify { spec: String },
    /// List catalog groups, or print one as a spec file.
    Catalog { name: Option<String> },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } | Error::ConvergenceFailure(_) => 4,
            Error::Incompatible(_) | Error::ShapeMismatch(_) => 5,
            Error::InternalInconsistency(_) => 1,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(3, format!("{}: {e}", path.display())))
}

fn load_spec(reference: &str, tol: Option<f64>) -> CliResult<GroupSpec> {
    let mut spec = if reference.starts_with("catalog:") {
        catalog::resolve(reference)
            .ok_or_else(|| Failure::new(2, format!("unknown catalog entry {reference}")))?
            .spec
    } else {
        let text = read_text(Path::new(reference))?;
        let file: GroupSpecFile =
            serde_json::from_str(&text).map_err(|e| Failure::new(2, format!("{reference}: {e}")))?;
        file.to_spec()?
    };
    if let Some(t) = tol {
        spec.tol = t;
    }
    Ok(spec)
}

fn require_valid(spec: &GroupSpec) -> CliResult<()> {
    match spec.validate().first() {
        Some(v) => Err(Failure::new(2, format!("invalid spec: {}: {}", v.axiom, v.detail))),
        None => Ok(()),
    }
}

fn emit<T: Serialize>(value: &T, common: &Common) -> CliResult<()> {
    let Format::Json = common.format;
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::new(1, e.to_string()))?;
    match &common.out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure::new(3, format!("{}: {e}", path.display()))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::new(3, e.to_string())),
            _ => Ok(()),
        },
    }
}

fn analyze(reference: &str, moduli: &[u64], common: &Common) -> CliResult<()> {
    let spec = load_spec(reference, common.tol)?;
    let violations = spec.validate();
    if !violations.is_empty() {
        emit(&json!({ "name": spec.name, "valid": false, "violations": violations }), common)?;
        return Err(Failure::new(2, format!("invalid spec: {}", violations[0].axiom)));
    }
    let report = spec.find_m0()?;
    let moduli: Vec<u64> = if moduli.is_empty() {
        (1..=3).map(|k| k * report.m0).collect()
    } else {
        moduli.to_vec()
    };
    let mut orders = Vec::new();
    for &n in &moduli {
        if n == 0 || n % report.m0 != 0 {
            return Err(Error::BadModulus { n, m0: report.m0 }.into());
        }
        orders.push(json!({
            "N": n,
            "order": QuotientGroup::count_by_generator_closure(&spec, n)?,
            "expected": QuotientGroup::expected_order(&spec, n),
        }));
    }
    emit(
        &json!({
            "name": spec.name,
            "valid": true,
            "violations": violations,
            "m0": report.m0,
            "m0_bound": report.m0_bound,
            "aut_f_order": report.aut_f_order,
            "is_space_group": report.is_space_group,
            "f_order": report.f_order,
            "rot_order": report.rot_order,
            "quotient_orders": orders,
        }),
        common,
    )
}

fn dual(reference: &str, n: u64, common: &Common) -> CliResult<()> {
    let spec = load_spec(reference, common.tol)?;
    require_valid(&spec)?;
    let atlas = enumerate_dual(&spec, n, common.seed)?;
    emit(&atlas.report, common)?;
    if atlas.report.pass {
        Ok(())
    } else {
        Err(Failure::new(1, "atlas checks failed"))
    }
}

fn fourier(reference: &str, input: &Path, inverse: bool, check: bool, common: &Common) -> CliResult<()> {
    let spec = load_spec(reference, common.tol)?;
    require_valid(&spec)?;
    let text = read_text(input)?;
    let bad_format = |e: serde_json::Error| Failure::new(2, format!("{}: {e}", input.display()));
    if inverse {
        let file: TableFile = serde_json::from_str(&text).map_err(bad_format)?;
        if file.group != spec.name {
            return Err(Failure::new(5, format!("table is on {} but the spec is {}", file.group, spec.name)));
        }
        let table = file.to_table()?;
        let q = QuotientGroup::build(&spec, table.modulus)?;
        let irr = irreps(&q.group, table.seed)?;
        let u = inverse_transform(&table, &q, &irr)?;
        return emit(&FunctionFile::from_function(&u), common);
    }
    let file: FunctionFile = serde_json::from_str(&text).map_err(bad_format)?;
    let u = file.to_function(&spec)?;
    let q = QuotientGroup::build(&spec, u.modulus)?;
    let irr = irreps(&q.group, common.seed)?;
    let table = transform(&u, &q, &irr)?;
    let out = TableFile::from_table(&spec.name, &table);
    if !check {
        return emit(&out, common);
    }
    let plancherel = (inner_product(&u, &u)? - table.inner(&table)).norm();
    let round_trip = inverse_transform(&table, &q, &irr)?.max_diff(&u);
    let pass = plancherel <= 1e-8 && round_trip <= 1e-8;
    emit(
        &json!({
            "table": out,
            "check": { "plancherel_defect": plancherel, "round_trip_defect": round_trip, "pass": pass },
        }),
        common,
    )?;
    if pass {
        Ok(())
    } else {
        Err(Failure::new(1, "Fourier self-test failed"))
    }
}

fn split(reference: &str, m: u64, n: u64, common: &Common) -> CliResult<()> {
    let spec = load_spec(reference, common.tol)?;
    require_valid(&spec)?;
    let cert = split_quotient(&spec, m, n)?;
    emit(&cert, common)?;
    if cert.pass {
        Ok(())
    } else {
        Err(Failure::new(6, "splitting certificate failed"))
    }
}

fn verify(reference: &str, common: &Common) -> CliResult<()> {
    let spec = load_spec(reference, common.tol)?;
    let report = verify_spec(&spec, common.seed);
    emit(&report, common)?;
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(Failure::new(1, format!("failed: {}", c.name))),
    }
}

fn list_catalog(name: Option<&str>, common: &Common) -> CliResult<()> {
    match name {
        None => emit(&catalog::names(), common),
        Some(n) => {
            let entry = catalog::get(n.strip_prefix("catalog:").unwrap_or(n))
                .ok_or_else(|| Failure::new(2, format!("unknown catalog entry {n}")))?;
            emit(&GroupSpecFile::from(&entry.spec), common)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let result = match &cli.command {
        Command::Analyze { spec, n } => analyze(spec, n, c),
        Command::Dual { spec, n } => dual(spec, *n, c),
        Command::Fourier { spec, input, inverse, check } => fourier(spec, input, *inverse, *check, c),
        Command::Split { spec, m, n } => split(spec, *m, *n, c),
        Command::Verify { spec } => verify(spec, c),
        Command::Catalog { name } => list_catalog(name.as_deref(), c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("isogroup: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
