//! Command-line surface: forward construction, inverse design,
//! verification, oracle comparison, and sample emission.
//!
//! Exit codes: 0 success, 1 construction error, 2 verification failure,
//! 3 no family converged, 64 usage error, 65 malformed data, 66 missing
//! input file.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use triband::bands::{BandSystem, Interval, Moebius};
use triband::error::Error as CoreError;
use triband::oracle::{validate_against, ComparisonRecord};
use triband::solutions::{FamilyExtras, FilterFamily, FilterSolution, RecoveredParams};
use triband::verify::{self, VerificationReport};

const EXIT_CONSTRUCTION: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_NO_FAMILY: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NOINPUT: u8 = 66;

#[derive(Parser)]
#[command(
    name = "triband",
    about = "Equiripple sign-function approximation on two and three bands",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct one solution family from polygon parameters
    Forward(ForwardArgs),
    /// Recover family and parameters from a band-system file
    Design(DesignArgs),
    /// Re-verify a stored solution record
    Verify(VerifyArgs),
    /// Compare a stored solution against the grid minimax oracle
    Oracle(OracleArgs),
    /// Emit a CSV of samples for plotting
    Samples(SamplesArgs),
}

#[derive(Args)]
struct ForwardArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    t: f64,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    h1: Option<f64>,
    #[arg(long)]
    h2: Option<f64>,
    #[arg(long)]
    c_re: Option<f64>,
    #[arg(long)]
    c_im: Option<f64>,
    #[arg(long)]
    v: Option<f64>,
    #[arg(long)]
    v1: Option<f64>,
    #[arg(long)]
    v2: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 128)]
    grid_density: usize,
}

#[derive(Args)]
struct DesignArgs {
    #[arg(long)]
    bands: PathBuf,
    #[arg(long)]
    n: u32,
    /// topological class as three parities, e.g. 1,0,1
    #[arg(long)]
    sigma: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 128)]
    grid_density: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    solution: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 128)]
    grid_density: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    solution: PathBuf,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SamplesArgs {
    #[arg(long)]
    solution: PathBuf,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    out: PathBuf,
}

/// On-disk band system: three closed intervals, optionally a chart map
/// applied on load and a finite point to be sent to infinity first.
#[derive(Debug, Serialize, Deserialize)]
struct BandSystemFile {
    bands: BandsField,
    #[serde(skip_serializing_if = "Option::is_none")]
    chart: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wrap_point: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BandsField {
    e_minus: [f64; 2],
    e1_plus: [f64; 2],
    e2_plus: [f64; 2],
}

/// Full solution record: everything needed to re-evaluate R(x).
#[derive(Debug, Serialize, Deserialize)]
struct SolutionRecord {
    solution: FilterSolution,
    bands: BandsField,
    verification: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    recovered: Option<RecoveredParams>,
}

fn bands_to_field(b: &BandSystem) -> BandsField {
    BandsField {
        e_minus: [b.eminus.lo, b.eminus.hi],
        e1_plus: [b.e1plus.lo, b.e1plus.hi],
        e2_plus: [b.e2plus.lo, b.e2plus.hi],
    }
}

fn field_to_bands(f: &BandsField) -> Result<BandSystem, CoreError> {
    BandSystem::new(
        Interval::new(f.e_minus[0], f.e_minus[1]),
        Interval::new(f.e1_plus[0], f.e1_plus[1]),
        Interval::new(f.e2_plus[0], f.e2_plus[1]),
    )
}

fn load_bands(path: &Path) -> Result<BandSystem, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        EXIT_NOINPUT
    })?;
    let file: BandSystemFile = serde_json::from_str(&text).map_err(|e| {
        eprintln!("malformed band file: {e}");
        EXIT_DATA
    })?;
    let mut cur = [
        file.bands.e_minus,
        file.bands.e1_plus,
        file.bands.e2_plus,
    ];
    if cur.iter().flatten().any(|v| !v.is_finite()) {
        eprintln!("band endpoints must be finite numbers");
        return Err(EXIT_DATA);
    }
    if let Some(xi) = file.wrap_point {
        // send the marked gap point to infinity, orientation preserved
        for pair in cur.iter_mut() {
            for v in pair.iter_mut() {
                if *v == xi {
                    eprintln!("wrap point coincides with a band endpoint");
                    return Err(EXIT_DATA);
                }
                *v = -1.0 / (*v - xi);
            }
            if pair[0] > pair[1] {
                pair.swap(0, 1);
            }
        }
    }
    if let Some([a, b, c, d]) = file.chart {
        let m = Moebius { a, b, c, d };
        if m.det().abs() < 1e-300 {
            eprintln!("chart map is singular");
            return Err(EXIT_DATA);
        }
        for pair in cur.iter_mut() {
            for v in pair.iter_mut() {
                *v = m.apply(*v);
            }
            if pair[0] > pair[1] {
                pair.swap(0, 1);
            }
        }
    }
    field_to_bands(&BandsField {
        e_minus: cur[0],
        e1_plus: cur[1],
        e2_plus: cur[2],
    })
    .map_err(|e| {
        eprintln!("invalid band system: {e}");
        EXIT_DATA
    })
}

fn load_record(path: &Path) -> Result<SolutionRecord, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        EXIT_NOINPUT
    })?;
    serde_json::from_str(&text).map_err(|e| {
        eprintln!("malformed solution record: {e}");
        EXIT_DATA
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), u8> {
    let text = serde_json::to_string_pretty(value).expect("serializable record");
    std::fs::write(path, text).map_err(|e| {
        eprintln!("cannot write {}: {e}", path.display());
        EXIT_NOINPUT
    })
}

fn usage_err(msg: &str) -> u8 {
    eprintln!("usage error: {msg}");
    EXIT_USAGE
}

fn extras_from_flags(family: FilterFamily, a: &ForwardArgs) -> Result<FamilyExtras, u8> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| usage_err(&format!("family {} requires --{name}", a.family)))
    };
    Ok(match family {
        FilterFamily::Genus1Zolotarev => FamilyExtras::Genus1 {
            v1: need(a.v1, "v1")?,
            v2: need(a.v2, "v2")?,
        },
        FilterFamily::Genus2Stiefel => FamilyExtras::Genus2 {
            h: need(a.h, "h")?,
            v: a.v.unwrap_or(a.m as f64),
        },
        FilterFamily::Genus3TwoSlit => FamilyExtras::TwoSlit {
            h1: need(a.h1, "h1")?,
            h2: need(a.h2, "h2")?,
        },
        FilterFamily::Genus3Octagon => FamilyExtras::Octagon {
            c_re: need(a.c_re, "c-re")?,
            c_im: need(a.c_im, "c-im")?,
        },
        FilterFamily::Genus3DecagonPlus | FilterFamily::Genus3DecagonMinus => {
            FamilyExtras::Decagon {
                h1: need(a.h1, "h1")?,
                h2: need(a.h2, "h2")?,
            }
        }
    })
}

fn verify_record(
    sol: &FilterSolution,
    bands: &BandSystem,
    grid_density: usize,
) -> Result<VerificationReport, u8> {
    let ev = sol.evaluator().map_err(|e| {
        eprintln!("evaluator construction failed: {e}");
        EXIT_CONSTRUCTION
    })?;
    let f = |x: f64| ev.eval(x).unwrap_or(f64::INFINITY);
    verify::full_report(
        &f,
        sol.scale(),
        bands,
        sol.n as usize,
        &sol.modulus,
        grid_density,
    )
    .map_err(|e| {
        eprintln!("verification failed: {e}");
        EXIT_VERIFICATION
    })
}

fn cmd_forward(a: &ForwardArgs) -> Result<(), u8> {
    let family = FilterFamily::parse(&a.family).map_err(|e| usage_err(&e.to_string()))?;
    let extras = extras_from_flags(family, a)?;
    let (sol, bands) =
        triband::forward_construct(family, a.t, a.n, a.m, extras).map_err(|e| match e {
            CoreError::Domain(msg) => usage_err(&msg),
            other => {
                eprintln!("construction failed: {other}");
                EXIT_CONSTRUCTION
            }
        })?;
    let report = verify_record(&sol, &bands, a.grid_density)?;
    let ok = report.alternation_count == 2 * a.n as usize + 2;
    let record = SolutionRecord {
        solution: sol,
        bands: bands_to_field(&bands),
        verification: report,
        recovered: None,
    };
    write_json(&a.out, &record)?;
    if ok {
        Ok(())
    } else {
        eprintln!(
            "verification failure: {} alternation points, expected {}",
            record.verification.alternation_count,
            2 * a.n + 2
        );
        Err(EXIT_VERIFICATION)
    }
}

fn parse_sigma(s: &str) -> Result<[u8; 3], u8> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(usage_err("--sigma takes three comma-separated parities"));
    }
    let mut out = [0u8; 3];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p
            .trim()
            .parse::<u8>()
            .map_err(|_| usage_err("sigma entries must be 0 or 1"))?
            % 2;
    }
    Ok(out)
}

fn cmd_design(a: &DesignArgs) -> Result<(), u8> {
    let sigma = parse_sigma(&a.sigma)?;
    let bands = load_bands(&a.bands)?;
    let out = triband::design(&bands, a.n, sigma).map_err(|e| match e {
        CoreError::Domain(msg) => usage_err(&msg),
        CoreError::NoSolutionFound(diag) => {
            eprintln!("no family converged:");
            for (what, r) in diag {
                eprintln!("  {what}: residual {r:.3e}");
            }
            EXIT_NO_FAMILY
        }
        other => {
            eprintln!("design failed: {other}");
            EXIT_CONSTRUCTION
        }
    })?;
    let ok = out.report.alternation_count == 2 * a.n as usize + 2;
    let record = SolutionRecord {
        solution: out.solution,
        bands: bands_to_field(&bands),
        verification: out.report,
        recovered: Some(out.recovered),
    };
    write_json(&a.out, &record)?;
    if ok {
        Ok(())
    } else {
        Err(EXIT_VERIFICATION)
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), u8> {
    let record = load_record(&a.solution)?;
    let bands = field_to_bands(&record.bands).map_err(|e| {
        eprintln!("invalid bands in record: {e}");
        EXIT_DATA
    })?;
    let report = verify_record(&record.solution, &bands, a.grid_density)?;
    let ok = report.alternation_count == 2 * record.solution.n as usize + 2;
    println!(
        "mu = {:.6e}, alternations = {}, class = {:?}, extremality = {}, extension ok = {}",
        report.mu,
        report.alternation_count,
        report.sigma,
        report.extremality,
        report.theorem1_ok
    );
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    if ok {
        Ok(())
    } else {
        Err(EXIT_VERIFICATION)
    }
}

fn cmd_oracle(a: &OracleArgs) -> Result<(), u8> {
    let record = load_record(&a.solution)?;
    let bands = field_to_bands(&record.bands).map_err(|e| {
        eprintln!("invalid bands in record: {e}");
        EXIT_DATA
    })?;
    let n = a.n.unwrap_or(record.solution.n) as usize;
    let rec: ComparisonRecord =
        validate_against(&record.solution, &bands, n).map_err(|e| match e {
            CoreError::Domain(msg) => usage_err(&msg),
            other => {
                eprintln!("oracle run failed: {other}");
                EXIT_CONSTRUCTION
            }
        })?;
    println!(
        "mu_constructed = {:.6e}, mu_grid = {:.6e}, local_opt = {}",
        rec.mu_constructed, rec.mu_grid, rec.local_opt
    );
    if let Some(out) = &a.out {
        write_json(out, &rec)?;
    }
    Ok(())
}

fn cmd_samples(a: &SamplesArgs) -> Result<(), u8> {
    if a.count < 2 {
        return Err(usage_err("--count must be at least 2"));
    }
    let record = load_record(&a.solution)?;
    let bands = field_to_bands(&record.bands).map_err(|e| {
        eprintln!("invalid bands in record: {e}");
        EXIT_DATA
    })?;
    let ev = record.solution.evaluator().map_err(|e| {
        eprintln!("evaluator construction failed: {e}");
        EXIT_CONSTRUCTION
    })?;
    let scale = record.solution.scale();
    let span = bands.e2plus.hi - bands.eminus.lo;
    let lo = bands.eminus.lo - 0.2 * span;
    let hi = bands.e2plus.hi + 0.2 * span;
    let mut csv = String::from("x,R,S_E,in_band\n");
    for i in 0..a.count {
        let x = lo + (hi - lo) * i as f64 / (a.count - 1) as f64;
        let r = ev.eval(x).map(|v| scale * v);
        let r_field = match r {
            Ok(v) if v.is_finite() => format!("{v}"),
            _ => String::new(),
        };
        let (se, inb) = match bands.indicator(x) {
            Some(s) => (format!("{s}"), 1),
            None => (String::new(), 0),
        };
        csv.push_str(&format!("{x},{r_field},{se},{inb}\n"));
    }
    std::fs::write(&a.out, csv).map_err(|e| {
        eprintln!("cannot write {}: {e}", a.out.display());
        EXIT_NOINPUT
    })?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let result = match &cli.command {
        Cmd::Forward(a) => cmd_forward(a),
        Cmd::Design(a) => cmd_design(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Oracle(a) => cmd_oracle(a),
        Cmd::Samples(a) => cmd_samples(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
