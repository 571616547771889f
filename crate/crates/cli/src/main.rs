use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use holeyhex::check::{all_passed, run_checks, CheckCaps, CheckHooks};
use holeyhex::closed_form::{macmahon, InverseKasteleyn};
use holeyhex::correlation::{axis_rhombus_pair, correlation_at, correlation_sequence, fit_exponent, CorrelationPoint};
use holeyhex::counting::{count, count_oracle, CountOptions, Route};
use holeyhex::oracle::{oracle_count, oracle_enumerate, ORACLE_LIMIT};
use holeyhex::{Error, HexDims, Region, RegionSpec, TriTriple};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "holeyhex", version, about = "Exact rhombus tiling counts of hexagons with holes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the tilings of a region.
    Count {
        /// Region file, or the region JSON itself.
        #[arg(long)]
        region: String,
        /// kasteleyn, kenyon, path or oracle.
        #[arg(long)]
        route: Option<Route>,
        /// Run every applicable route and the oracle and require agreement.
        #[arg(long)]
        verify: bool,
        /// Report the signed Kasteleyn determinant for hole sets that are
        /// not admissibility inducing instead of failing.
        #[arg(long)]
        signed: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Entries of the inverse Kasteleyn matrix of a hexagon.
    Kentry {
        /// Hexagon sides as `a,b,c`.
        #[arg(long, value_parser = parse_dims)]
        dims: HexDims,
        /// Right-pointing triangle as doubled labels `2l,2l',2l''`.
        #[arg(long, required_unless_present = "all")]
        white: Option<String>,
        /// Left-pointing triangle as doubled labels `2l,2l',2l''`.
        #[arg(long, required_unless_present = "all")]
        black: Option<String>,
        /// Dump the whole matrix with row and column labels.
        #[arg(long, conflicts_with_all = ["white", "black"])]
        all: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Verify the closed forms against direct computation.
    Check {
        /// Extend every group of checks to sides up to this value.
        #[arg(long)]
        caps: Option<i64>,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
        /// Negative control: negate one determinant before calibration.
        #[arg(long, hide = true)]
        inject_sign_flip: bool,
    },
    /// Ratios M(H_n minus holes) / M(H_n) as CSV.
    Correlation {
        /// Base region; sides are scaled by n, holes keep their labels.
        #[arg(long)]
        region: String,
        /// Largest scale.
        #[arg(long)]
        n_max: i64,
        /// Smallest scale.
        #[arg(long, default_value_t = 1)]
        n_min: i64,
        /// Ignore the holes and use two horizontal rhombi on the vertical
        /// axis at each of these even distances, at scale `n_max` only.
        #[arg(long, value_delimiter = ',')]
        separations: Vec<i64>,
        /// Print a power-law fit of ratio against separation to stderr.
        #[arg(long)]
        fit: bool,
        /// Compare each ratio with the oracle where the region is small enough.
        #[arg(long)]
        verify: bool,
    },
    /// Brute-force count, or list tilings.
    Oracle {
        #[arg(long)]
        region: String,
        /// List up to this many tilings instead of counting.
        #[arg(long)]
        enumerate: Option<usize>,
    },
}

fn parse_dims(s: &str) -> Result<HexDims, String> {
    let v = parse_ints(s)?;
    match v.as_slice() {
        [a, b, c] => HexDims::new(*a, *b, *c).map_err(|e| e.to_string()),
        _ => Err(format!("expected a,b,c, got {s:?}")),
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

struct Failure {
    code: u8,
    message: String,
    /// Print `message` to stdout as regular output rather than as an error.
    report: bool,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            report: false,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidDims(..)
            | Error::OutOfBounds(_)
            | Error::Duplicate(_)
            | Error::InconsistentTriple { .. }
            | Error::VertexNotPresent(_)
            | Error::HalfIntegerArgument(_)
            | Error::ParityViolation(_)
            | Error::UnbalancedColors { .. } => 2,
            Error::RouteDisagreement(_) | Error::SignInconsistency { .. } => 3,
            Error::NotAdmissible => 4,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

type CliResult = Result<String, Failure>;

fn load_region(arg: &str) -> Result<Region, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| Failure::new(2, format!("cannot read region file {arg}: {e}")))?
    };
    let spec: RegionSpec =
        serde_json::from_str(&text).map_err(|e| Failure::new(2, format!("invalid region JSON: {e}")))?;
    Ok(Region::from_spec(&spec)?)
}

fn parse_triple(s: &str, white: bool) -> Result<TriTriple, Failure> {
    let v = parse_ints(s).map_err(|e| Failure::new(2, format!("invalid triple: {e}")))?;
    let [l, lp, lpp] = v.as_slice() else {
        return Err(Failure::new(2, format!("expected three doubled labels, got {s:?}")));
    };
    let t = if white {
        TriTriple::right(*l, *lp, *lpp)
    } else {
        TriTriple::left(*l, *lp, *lpp)
    };
    Ok(t?)
}

fn ratio_json(q: &BigRational) -> serde_json::Value {
    json!({"numerator": q.numer().to_string(), "denominator": q.denom().to_string()})
}

fn cmd_count(region: &str, route: Option<Route>, verify: bool, signed: bool, format: Format) -> CliResult {
    let r = load_region(region)?;
    let result = count(&r, &CountOptions { route, verify, signed })?;
    Ok(match format {
        Format::Plain | Format::Csv => result.count.to_string(),
        Format::Json => serde_json::to_string(&result).expect("serializable"),
    })
}

fn cmd_kentry(dims: HexDims, white: Option<String>, black: Option<String>, all: bool, format: Format) -> CliResult {
    let ik = InverseKasteleyn::new(dims);
    if all {
        let m = ik.matrix()?;
        let rows: Vec<String> = ik.whites().iter().map(|t| t.to_string()).collect();
        let cols: Vec<String> = ik.blacks().iter().map(|t| t.to_string()).collect();
        return Ok(match format {
            Format::Json => {
                let entries: Vec<Vec<String>> = (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
                    .collect();
                json!({"dims": [dims.a, dims.b, dims.c], "rows": rows, "cols": cols, "entries": entries}).to_string()
            }
            Format::Csv | Format::Plain => {
                let mut out = String::from("white,black,numerator,denominator");
                for (i, w) in rows.iter().enumerate() {
                    for (j, b) in cols.iter().enumerate() {
                        let q = m.get(i, j);
                        write!(out, "\n\"{w}\",\"{b}\",{},{}", q.numer(), q.denom()).unwrap();
                    }
                }
                out
            }
        });
    }
    let w = parse_triple(white.as_deref().expect("required by clap"), true)?;
    let b = parse_triple(black.as_deref().expect("required by clap"), false)?;
    for t in [&w, &b] {
        if !dims.contains(t) {
            return Err(Error::OutOfBounds(*t).into());
        }
    }
    let e = ik.entry(&w, &b)?;
    Ok(match format {
        Format::Plain | Format::Csv => e.value.to_string(),
        Format::Json => {
            let mut v = ratio_json(&e.value);
            v["white"] = json!(w.to_string());
            v["black"] = json!(b.to_string());
            v["sign_indices"] = json!([e.sign_indices.0, e.sign_indices.1]);
            v.to_string()
        }
    })
}

fn cmd_check(caps: Option<i64>, format: Format, flip: bool) -> CliResult {
    let caps = caps.map_or_else(CheckCaps::default, CheckCaps::extended);
    let outcomes = run_checks(&caps, &CheckHooks { flip_sign: flip });
    let text = match format {
        Format::Json => json!({"caps": caps, "outcomes": outcomes}).to_string(),
        Format::Csv | Format::Plain => outcomes
            .iter()
            .map(|o| {
                let status = if o.passed { "PASS" } else { "FAIL" };
                match &o.detail {
                    Some(d) => format!("{} {status} {} cases: {d}", o.name, o.cases),
                    None => format!("{} {status} {} cases", o.name, o.cases),
                }
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    if all_passed(&outcomes) {
        Ok(text)
    } else {
        Err(Failure {
            report: true,
            ..Failure::new(1, text)
        })
    }
}

fn verify_point(p: &CorrelationPoint, region: &Region) -> Result<(), Failure> {
    if region.dims().per_color() > ORACLE_LIMIT {
        return Ok(());
    }
    let d = region.dims();
    let tilings: BigInt = oracle_count(region)?.into();
    let want = BigRational::new(tilings, macmahon(d.a, d.b, d.c));
    if want != p.ratio {
        let diff = json!({
            "region": region.to_spec(),
            "n": p.n,
            "kenyon_minor": ratio_json(&p.ratio),
            "oracle": ratio_json(&want),
        });
        return Err(Error::RouteDisagreement(diff.to_string()).into());
    }
    Ok(())
}

fn cmd_correlation(region: &str, n_min: i64, n_max: i64, separations: &[i64], fit: bool, verify: bool) -> CliResult {
    let base = load_region(region)?;
    let dims = base.dims();
    if n_min < 1 || n_max < n_min {
        return Err(Failure::new(2, format!("invalid scale range {n_min}..={n_max}")));
    }
    let (points, regions): (Vec<CorrelationPoint>, Vec<Region>) = if separations.is_empty() {
        let holes: Vec<TriTriple> = base.holes().iter().copied().collect();
        let pts = correlation_sequence(&dims, &holes, n_min..=n_max)?;
        let regions = pts
            .iter()
            .map(|p| Region::new(dims.scaled(p.n).expect("scaled"), holes.iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        (pts, regions)
    } else {
        let d = dims.scaled(n_max)?;
        let sets = separations
            .iter()
            .map(|&s| axis_rhombus_pair(s))
            .collect::<Result<Vec<_>, _>>()?;
        let pts = correlation_at(&d, n_max, &sets)?;
        let regions = sets
            .iter()
            .map(|v| Region::new(d, v.iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        (pts, regions)
    };
    if verify {
        for (p, r) in points.iter().zip(&regions) {
            verify_point(p, r)?;
        }
    }
    if fit {
        let f = fit_exponent(&points)?;
        eprintln!("{}", serde_json::to_string(&f).expect("serializable"));
    }
    let mut out = String::from(CorrelationPoint::csv_header());
    for p in &points {
        out.push('\n');
        out.push_str(&p.csv_row());
    }
    Ok(out)
}

fn cmd_oracle(region: &str, enumerate: Option<usize>) -> CliResult {
    let r = load_region(region)?;
    match enumerate {
        None => Ok(serde_json::to_string(&count_oracle(&r)?).expect("serializable")),
        Some(limit) => {
            let tilings = oracle_enumerate(&r, limit)?;
            let v: Vec<Vec<[[i64; 3]; 2]>> = tilings
                .iter()
                .map(|t| {
                    let mut rh: Vec<[[i64; 3]; 2]> = t
                        .iter()
                        .map(|(l, w)| {
                            let (a, b, c) = l.doubled();
                            let (x, y, z) = w.doubled();
                            [[a, b, c], [x, y, z]]
                        })
                        .collect();
                    rh.sort();
                    rh
                })
                .collect();
            Ok(json!({"tilings": v}).to_string())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("HOLEYHEX_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::new(2, format!("HOLEYHEX_THREADS must be a non-negative integer, got {v:?}")))?;
    #[cfg(feature = "parallel")]
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::new(1, e.to_string()))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    configure_threads()?;
    match cli.command {
        Command::Count {
            region,
            route,
            verify,
            signed,
            format,
        } => cmd_count(&region, route, verify, signed, format),
        Command::Kentry {
            dims,
            white,
            black,
            all,
            format,
        } => cmd_kentry(dims, white, black, all, format),
        Command::Check {
            caps,
            format,
            inject_sign_flip,
        } => cmd_check(caps, format, inject_sign_flip),
        Command::Correlation {
            region,
            n_max,
            n_min,
            separations,
            fit,
            verify,
        } => cmd_correlation(&region, n_min, n_max, &separations, fit, verify),
        Command::Oracle { region, enumerate } => cmd_oracle(&region, enumerate),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if f.report {
                println!("{}", f.message);
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
