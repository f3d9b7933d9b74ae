//! Command-line front end. Every run writes a reproducibility header
//! (version, command line, seed) followed by a deterministic CSV or JSON
//! body. Coefficient lists are little-endian: constant term first.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::{json, Value};

use crate::census::{self, CensusOptions, DensityRecord, FamilyKind, FamilySpec, Mode};
use crate::error::{invalid, Error, Result};
use crate::ff::{self, CensusPredicate, FpPoly};
use crate::ffcount::{self, SystemKind};
use crate::poly::{FamilyCurve, IntPoly};
use crate::rank::rank_upper_bound;
use crate::sieve::{self, PrimeSet};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "QTRANK_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "qtrank", version, about = "Rank bounds and densities for Y^2 = A T^2 + B T + C over Q(T)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Check {
    Nu,
    Ap,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certificate, Omega over Q and rank bound of one curve.
    RankBound {
        /// Coefficients of A, constant first; empty for A = 0.
        #[arg(long = "A", default_value = "", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", default_value = "", allow_hyphen_values = true)]
        b: String,
        /// Coefficients of C = X^3 + c2 X^2 + c1 X + c0.
        #[arg(long = "C", allow_hyphen_values = true)]
        c: String,
    },
    /// Positive-bound densities over height boxes.
    Census {
        #[arg(long)]
        kind: String,
        #[arg(long = "H", value_delimiter = ',', required = true)]
        h: Vec<u32>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample size in sampled mode.
        #[arg(long = "N", default_value_t = 100_000)]
        n: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = census::DEFAULT_BUDGET)]
        budget: u128,
        /// Leave the wall_time_s field empty so output is byte-reproducible.
        #[arg(long)]
        no_wall_time: bool,
    },
    /// Solution counts of the mod-p systems and counts of irreducible certificates.
    Ffcount {
        #[arg(long)]
        kind: SystemKind,
        #[arg(long = "p", value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long, value_enum, default_value = "both")]
        check: Check,
        /// Include reducible targets in the per-target rows.
        #[arg(long)]
        all_targets: bool,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Turán sieve bound and exhaustive sieve counts.
    Sieve {
        #[arg(long)]
        kind: SystemKind,
        #[arg(long = "H")]
        h: u64,
        /// Sieve cutoff, or "auto" for ceil((H log H log log H)^(1/3)).
        #[arg(long, default_value = "auto")]
        z: String,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        /// Also count tuples reducible over Q.
        #[arg(long)]
        exact: bool,
        /// Skip enumeration; report the bound only.
        #[arg(long)]
        theoretical: bool,
        #[arg(long, default_value_t = sieve::DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Number of monic irreducible polynomials of degree n over F_p.
    IrrCount {
        #[arg(long = "p")]
        p: u64,
        #[arg(long = "n")]
        n: u32,
        /// all, even, or even:A for even with X^(n-2) coefficient A.
        #[arg(long, default_value = "all")]
        predicate: String,
    },
}

/// Parses a little-endian comma-separated coefficient list; the empty string
/// is the zero polynomial.
pub fn parse_coeffs(s: &str) -> Result<IntPoly> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(IntPoly::zero());
    }
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| invalid(format!("bad coefficient {t:?}"))))
        .collect::<Result<Vec<_>>>()
        .map(IntPoly::new)
}

/// Inverse of [`parse_coeffs`] on trimmed polynomials.
pub fn format_coeffs(p: &IntPoly) -> String {
    p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn format_fp(p: &FpPoly) -> String {
    p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_predicate(s: &str) -> Result<CensusPredicate> {
    match s {
        "all" => Ok(CensusPredicate::All),
        "even" => Ok(CensusPredicate::Even),
        _ => s
            .strip_prefix("even:")
            .and_then(|a| a.parse::<u64>().ok())
            .map(CensusPredicate::EvenWithCoeff)
            .ok_or_else(|| invalid(format!("unknown predicate {s:?}"))),
    }
}

fn default_workers() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| invalid(format!("{WORKERS_ENV}={v:?} is not a worker count"))),
        Err(_) => Ok(None),
    }
}

/// Reduced fraction `num/den`.
fn ratio(num: u128, den: u128) -> String {
    let g = num.gcd(&den).max(1);
    format!("{}/{}", num / g, den / g)
}

struct Header {
    command: String,
    seed: Option<u64>,
}

impl Header {
    fn csv(&self) -> String {
        format!(
            "# qtrank {}\n# command: {}\n# seed: {}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.seed.map_or("none".to_string(), |s| s.to_string())
        )
    }

    fn json(&self) -> Value {
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.seed,
        })
    }
}

fn json_doc(header: &Header, body: Value) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "header": header.json(), "result": body }))
        .expect("json values serialize");
    s.push('\n');
    s
}

fn record_json(r: &DensityRecord, wall: bool) -> Value {
    json!({
        "kind": r.spec.kind.to_string(),
        "H": r.spec.h,
        "mode": r.mode.to_string(),
        "total_box": r.total_box,
        "singular": r.singular,
        "isotrivial": r.isotrivial,
        "family_size": r.family_size,
        "positive_bound": r.positive_bound,
        "avg_bound_num": r.avg_bound_num,
        "avg_bound_den": r.avg_bound_den,
        "ci_halfwidth": r.ci_halfwidth,
        "wall_time_s": if wall { Some(r.wall_time_s) } else { None },
    })
}

fn csv_row(r: &DensityRecord, wall: bool) -> String {
    let row = r.csv_row();
    if wall {
        row
    } else {
        let cut = row.rfind(',').expect("csv row has fields");
        format!("{},", &row[..cut])
    }
}

fn rank_bound_cmd(a: &str, b: &str, c: &str) -> Result<Value> {
    let curve = FamilyCurve::new(parse_coeffs(a)?, parse_coeffs(b)?, parse_coeffs(c)?)?;
    let r = rank_upper_bound(&curve);
    Ok(json!({
        "A": format_coeffs(curve.a()),
        "B": format_coeffs(curve.b()),
        "C": format_coeffs(curve.c()),
        "kind": r.kind.map(|k| k.name()),
        "certificate": r.certificate.as_ref().map(|p| p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        "omega": r.omega_q,
        "bound": r.bound,
        "singular": r.singular,
        "isotrivial": r.isotrivial,
    }))
}

#[allow(clippy::too_many_arguments)]
fn census_cmd(
    header: &Header,
    kind: &str,
    hs: &[u32],
    mode: Mode,
    workers: Option<usize>,
    format: Format,
    budget: u128,
    wall: bool,
) -> Result<String> {
    let kind: FamilyKind = kind.parse()?;
    let opts = CensusOptions { budget, workers };
    let specs = hs.iter().map(|&h| FamilySpec::new(kind, h)).collect::<Result<Vec<_>>>()?;
    let records = specs.into_iter().map(|s| census::measure_density(s, mode, opts)).collect::<Result<Vec<_>>>()?;
    let fit = if records.len() >= 3 { census::fit_exponent(&records).ok() } else { None };
    Ok(match format {
        Format::Csv => {
            let mut s = header.csv();
            s.push_str(census::CSV_HEADER);
            s.push('\n');
            for r in &records {
                s.push_str(&csv_row(r, wall));
                s.push('\n');
            }
            if let Some(f) = fit {
                s.push_str(&format!("# fit_exponent: {f:.6}\n"));
            }
            s
        }
        Format::Json => json_doc(
            header,
            json!({
                "records": records.iter().map(|r| record_json(r, wall)).collect::<Vec<_>>(),
                "fit_exponent": fit,
            }),
        ),
    })
}

const FFCOUNT_HEADER: &str = "kind,p,target,brute,closed_form,derived,ratio";

fn ffcount_rows(kind: SystemKind, p: u64, check: Check, all_targets: bool) -> Result<Vec<[String; 7]>> {
    let mut rows = Vec::new();
    if matches!(check, Check::Nu | Check::Both) {
        for r in ffcount::system_counts(kind, p, !all_targets)? {
            let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
            let rat = r.closed_form.filter(|&c| c > 0).map(|c| ratio(r.n_u as u128, c as u128));
            rows.push([
                kind.to_string(),
                p.to_string(),
                format_fp(&r.u),
                r.n_u.to_string(),
                opt(r.closed_form),
                opt(r.derived),
                rat.unwrap_or_default(),
            ]);
        }
    }
    if matches!(check, Check::Ap | Check::Both) {
        let count = ffcount::count_ap(kind, p)?;
        let pn = (p as u128).pow(kind.dimension());
        let delta = kind.delta() as u128;
        rows.push([
            kind.to_string(),
            p.to_string(),
            "A_p".to_string(),
            count.to_string(),
            ratio(pn, delta),
            String::new(),
            ratio(count as u128 * delta, pn),
        ]);
    }
    Ok(rows)
}

fn ffcount_cmd(
    header: &Header,
    kind: SystemKind,
    ps: &[u64],
    check: Check,
    all_targets: bool,
    workers: Option<usize>,
    format: Format,
) -> Result<String> {
    let mut rows = Vec::new();
    for &p in ps {
        kind.check_prime(p)?;
        rows.extend(crate::par::install(workers, || ffcount_rows(kind, p, check, all_targets))??);
    }
    Ok(match format {
        Format::Csv => {
            let mut s = header.csv();
            s.push_str(FFCOUNT_HEADER);
            s.push('\n');
            for r in rows {
                s.push_str(&format!("{},{},\"{}\",{},{},{},{}\n", r[0], r[1], r[2], r[3], r[4], r[5], r[6]));
            }
            s
        }
        Format::Json => {
            let names: Vec<&str> = FFCOUNT_HEADER.split(',').collect();
            let body: Vec<Value> = rows
                .into_iter()
                .map(|r| Value::Object(names.iter().zip(r).map(|(k, v)| (k.to_string(), Value::String(v))).collect()))
                .collect();
            json_doc(header, Value::Array(body))
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn sieve_cmd(
    kind: SystemKind,
    h: u64,
    z: &str,
    c1: f64,
    c2: f64,
    exact: bool,
    theoretical: bool,
    budget: u128,
    workers: Option<usize>,
) -> Result<Value> {
    let z = if z == "auto" {
        sieve::choose_z(h)?
    } else {
        z.parse::<u64>().map_err(|_| invalid(format!("bad cutoff z = {z:?}")))?
    };
    let mut params = sieve::kind_params(kind, h, z);
    params.c1 = c1;
    params.c2 = c2;
    let mut report = if theoretical {
        sieve::theoretical_report(kind, &params)?
    } else {
        sieve::empirical_sieve_with(kind, h, z, exact, budget, workers)?
    };
    if report.theoretical_bound.is_some() {
        report.theoretical_bound = Some(sieve::turan_bound(&params)?);
    }
    Ok(json!({
        "kind": kind.to_string(),
        "H": report.h,
        "z": report.z,
        "theoretical_bound": report.theoretical_bound,
        "empirical_b_pz": report.empirical_b_pz,
        "exact_b": report.exact_b,
        "box_size": report.box_size,
        "c1": c1,
        "c2": c2,
        "primes": PrimeSet::for_kind(kind).primes_up_to(z),
    }))
}

fn irr_count_cmd(p: u64, n: u32, predicate: &str) -> Result<Value> {
    let pred = parse_predicate(predicate)?;
    let count = ff::brute_census(p, n, pred)?;
    let formula = match pred {
        CensusPredicate::All => Some(ff::count_irreducible_monic(p, n)?.to_string()),
        CensusPredicate::Even => Some(ff::count_even_irreducible_monic(p, n)?.to_string()),
        CensusPredicate::EvenWithCoeff(_) => None,
    };
    Ok(json!({ "p": p, "n": n, "predicate": predicate, "count": count, "formula": formula }))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

fn dispatch(cli: Cli, command_line: String) -> Result<(String, Option<PathBuf>)> {
    let env_workers = default_workers()?;
    let pick = |w: Option<usize>| w.or(env_workers);
    let plain = |seed| Header { command: command_line.clone(), seed };
    Ok(match cli.command {
        Command::RankBound { a, b, c } => (json_doc(&plain(None), rank_bound_cmd(&a, &b, &c)?), None),
        Command::Census { kind, h, mode, seed, n, workers, out, format, budget, no_wall_time } => {
            let (mode, seed) = match mode {
                ModeArg::Exact => (Mode::Exact, None),
                ModeArg::Sampled => (Mode::Sampled { n, seed }, Some(seed)),
            };
            let body = census_cmd(&plain(seed), &kind, &h, mode, pick(workers), format, budget, !no_wall_time)?;
            (body, out)
        }
        Command::Ffcount { kind, p, check, all_targets, workers, format } => {
            (ffcount_cmd(&plain(None), kind, &p, check, all_targets, pick(workers), format)?, None)
        }
        Command::Sieve { kind, h, z, c1, c2, exact, theoretical, budget, workers } => {
            let v = sieve_cmd(kind, h, &z, c1, c2, exact, theoretical, budget, pick(workers))?;
            (json_doc(&plain(None), v), None)
        }
        Command::IrrCount { p, n, predicate } => (json_doc(&plain(None), irr_count_cmd(p, n, &predicate)?), None),
    })
}

/// Runs the command line `args` (program name first), writing the result to
/// `out` (or the requested file) and diagnostics to `err`. Returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let command_line = args.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    match dispatch(cli, command_line) {
        Ok((text, None)) => match out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => report_io(err, e),
        },
        Ok((text, Some(path))) => match File::create(&path).and_then(|mut f| f.write_all(text.as_bytes())) {
            Ok(()) => EXIT_OK,
            Err(e) => report_io(err, e),
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn report_io(err: &mut dyn Write, e: io::Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_IO
}
