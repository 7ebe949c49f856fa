use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fracpow::cyclotomic::{cyclotomic_poly, expand_phi_power, nprime_split};
use fracpow::lattice::LatticeSpec;
use fracpow::repfn::{build_digit_set, constancy_scan, moser_set, ruzsa_set, BoundedSet, DigitSet};
use fracpow::solver::{decide, integrality_report, solve_formal, verify_solution, RhsSpec};
use fracpow::{Error, IntPolynomial, MSpec, Rational};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "fracpow",
    version,
    about = "Fractional power series and multilinear representation tools"
)]
struct Cli {
    /// Output format. Defaults to json, except for `construct`, which
    /// writes a set file.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Solve ∏ f(x^{b_i})^{e_i} = G(x) for the series f with f(0) = 1.
    Solve {
        #[arg(long, value_parser = parse_mspec)]
        m: MSpec,
        /// Coefficients of P, constant term first; G = P/(1 - x).
        #[arg(long, value_parser = parse_poly, conflicts_with = "rhs_prod")]
        rhs_poly: Option<IntPolynomial>,
        /// Exponents of G = ∏ (1 - x^d)^{m_d} as "d:m,...".
        #[arg(long, value_parser = parse_prod)]
        rhs_prod: Option<BTreeMap<u64, Rational>>,
        /// Expansion cutoff for G; the solution is exact up to cutoff/b_0.
        #[arg(long, value_parser = parse_rational, default_value = "20")]
        cutoff: Rational,
    },
    /// Classify M for G = P/(1 - x) and emit a certificate when possible.
    Decide {
        #[arg(long, value_parser = parse_mspec)]
        m: MSpec,
        #[arg(long, value_parser = parse_poly)]
        rhs_poly: Option<IntPolynomial>,
    },
    /// Count representations over a bounded set file.
    Count {
        #[arg(long, value_parser = parse_mspec)]
        m: MSpec,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        upto: u64,
    },
    /// Build a digit set.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        period: Option<u32>,
        #[arg(long)]
        bound: u64,
    },
    /// Cyclotomic polynomials and factorizations.
    Cyclo {
        #[command(subcommand)]
        action: CycloAction,
    },
    /// List the exponent lattice below a bound.
    Enumerate {
        #[arg(long)]
        b: u64,
        /// Comma-separated θ_i > 1.
        #[arg(long, value_parser = parse_rational, value_delimiter = ',', required = true)]
        thetas: Vec<Rational>,
        #[arg(long, value_parser = parse_rational)]
        below: Rational,
    },
    /// Ramanujan's τ(1), …, τ(N).
    Tau {
        #[arg(long)]
        upto: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Ruzsa,
    Moser,
    Digit,
}

#[derive(Subcommand)]
enum CycloAction {
    /// Φ_n with constant term 1.
    Phi { n: u64 },
    /// The factorization of Φ_d(x^a).
    Expand { d: u64, a: u64 },
    /// The N'-cyclotomic part of a polynomial.
    Part {
        #[arg(long, value_parser = parse_poly)]
        poly: IntPolynomial,
        #[arg(long, value_parser = parse_mspec)]
        m: MSpec,
        /// Fold in the 1/(1 - x) factor.
        #[arg(long)]
        with_inverse: bool,
    },
}

fn parse_mspec(s: &str) -> Result<MSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_poly(s: &str) -> Result<IntPolynomial, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_prod(s: &str) -> Result<BTreeMap<u64, Rational>, String> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (d, m) = item
            .split_once(':')
            .ok_or_else(|| format!("expected d:m, got {item:?}"))?;
        let d: u64 = d
            .trim()
            .parse()
            .map_err(|_| format!("bad index in {item:?}"))?;
        if d == 0 {
            return Err(format!("index must be positive in {item:?}"));
        }
        if out.insert(d, parse_rational(m.trim())?).is_some() {
            return Err(format!("index {d} given twice"));
        }
    }
    Ok(out)
}

/// A failed run: the exit code and the payload written to stderr.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_usage() { 2 } else { 1 },
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        kind: "usage".into(),
        message: message.into(),
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn to_json(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn pairs_json(items: &[(Rational, Rational)]) -> Value {
    Value::Array(
        items
            .iter()
            .map(|(e, c)| json!([e.to_string(), c.to_string()]))
            .collect(),
    )
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let text = cli.format == Some(Format::Text);
    match cli.command {
        Command::Solve {
            m,
            rhs_poly,
            rhs_prod,
            cutoff,
        } => {
            let rhs = match (rhs_poly, rhs_prod) {
                (Some(p), None) => RhsSpec::poly_over_1mx(p)?,
                (None, Some(exps)) => RhsSpec::onemx_product(exps)?,
                (None, None) => RhsSpec::poly_over_1mx(IntPolynomial::one())?,
                (Some(_), Some(_)) => {
                    return Err(usage("give at most one of --rhs-poly and --rhs-prod"))
                }
            };
            let f = solve_formal(&m, &rhs, &cutoff)?;
            let verified = verify_solution(&f, &m, &rhs)?;
            let fractional = integrality_report(&f);
            if text {
                let mut out = format!("{f}\nverified: {verified}\n");
                match fractional.first() {
                    None => out.push_str("power series: yes\n"),
                    Some((e, c)) => {
                        writeln!(out, "power series: no (coefficient {c} at exponent {e})").unwrap()
                    }
                }
                return Ok(Output::Text(out));
            }
            Ok(Output::Json(json!({
                "m": to_json(&m),
                "rhs": to_json(&rhs),
                "cutoff": cutoff.to_string(),
                "solution": to_json(&f),
                "verified": verified,
                "fractional_terms": pairs_json(&fractional),
            })))
        }
        Command::Decide { m, rhs_poly } => {
            let report = decide(&m, rhs_poly.as_ref())?;
            if text {
                let mut out = format!(
                    "verdict: {}\nreason: {}\n",
                    to_json(report.verdict).as_str().unwrap(),
                    report.reason
                );
                if let Some(c) = &report.certificate {
                    writeln!(out, "witness: p = {}, t = {}", c.witness.p, c.witness.t).unwrap();
                    writeln!(out, "H = {}", c.h).unwrap();
                    writeln!(out, "D* = {}", c.d_star).unwrap();
                    writeln!(
                        out,
                        "recurrence: a = {:?}, A = {}, gcd = {}",
                        c.recurrence.a, c.recurrence.total, c.recurrence.d_gcd
                    )
                    .unwrap();
                    writeln!(out, "contradiction: {}", c.contradiction.holds).unwrap();
                }
                return Ok(Output::Text(out));
            }
            Ok(Output::Json(to_json(&report)))
        }
        Command::Count { m, set, upto } => {
            let body = std::fs::read_to_string(&set).map_err(|e| Failure {
                code: 1,
                kind: "io".into(),
                message: format!("cannot read {}: {e}", set.display()),
            })?;
            let a = BoundedSet::parse_file(&body)?;
            let report = constancy_scan(&m, &a, upto)?;
            if text {
                let mut out = String::new();
                match (report.constant_from, report.constant_value) {
                    (Some(n0), Some(v)) => writeln!(out, "constant {v} on [{n0}, {upto}]").unwrap(),
                    _ => writeln!(out, "not constant at the end of [0, {upto}]").unwrap(),
                }
                for (n, v) in report.values.iter().enumerate() {
                    writeln!(out, "{n} {v}").unwrap();
                }
                return Ok(Output::Text(out));
            }
            Ok(Output::Json(to_json(&report)))
        }
        Command::Construct {
            kind,
            k,
            period,
            bound,
        } => {
            let set: DigitSet = match kind {
                Kind::Ruzsa => {
                    if k.is_some() || period.is_some() {
                        return Err(usage("ruzsa takes no --k or --period"));
                    }
                    ruzsa_set(bound)?
                }
                Kind::Moser => {
                    if period.is_some() {
                        return Err(usage("moser uses period 2; drop --period"));
                    }
                    moser_set(k.ok_or_else(|| usage("moser needs --k"))?, bound)?
                }
                Kind::Digit => build_digit_set(
                    k.ok_or_else(|| usage("digit needs --k"))?,
                    period.ok_or_else(|| usage("digit needs --period"))?,
                    bound,
                )?,
            };
            if cli.format == Some(Format::Json) {
                return Ok(Output::Json(to_json(&set)));
            }
            Ok(Output::Text(set.set.to_file_string()))
        }
        Command::Cyclo { action } => match action {
            CycloAction::Phi { n } => {
                if n == 0 {
                    return Err(usage("n must be positive"));
                }
                let p = cyclotomic_poly(n)?;
                if text {
                    return Ok(Output::Text(format!("{p}\n")));
                }
                Ok(Output::Json(
                    json!({ "n": n, "poly": p.to_string(), "coeffs": to_json(&p) }),
                ))
            }
            CycloAction::Expand { d, a } => {
                if d == 0 || a == 0 {
                    return Err(usage("d and a must be positive"));
                }
                let e = expand_phi_power(d, a)?;
                if text {
                    return Ok(Output::Text(format!("{e}\n")));
                }
                Ok(Output::Json(to_json(&e)))
            }
            CycloAction::Part {
                poly,
                m,
                with_inverse,
            } => {
                let split = nprime_split(&poly, &m, with_inverse)?;
                if text {
                    return Ok(Output::Text(format!(
                        "part: {}\nresidual: {}\n",
                        split.part, split.residual
                    )));
                }
                Ok(Output::Json(json!({
                    "part": to_json(&split.part),
                    "residual": to_json(&split.residual),
                })))
            }
        },
        Command::Enumerate { b, thetas, below } => {
            let spec = LatticeSpec::new(b, thetas)?;
            let points = spec.enumerate_below(&below)?;
            if text {
                let mut out = String::new();
                for p in &points {
                    writeln!(out, "{p}").unwrap();
                }
                return Ok(Output::Text(out));
            }
            Ok(Output::Json(json!({
                "b": b,
                "thetas": to_json(spec.thetas()),
                "below": below.to_string(),
                "count": points.len(),
                "points": to_json(&points),
            })))
        }
        Command::Tau { upto } => {
            let tau = fracpow::fps::ramanujan_tau(upto)?;
            if text {
                let mut out = String::new();
                for (i, t) in tau.iter().enumerate() {
                    writeln!(out, "{} {t}", i + 1).unwrap();
                }
                return Ok(Output::Text(out));
            }
            let rows: Vec<Value> = tau
                .iter()
                .enumerate()
                .map(|(i, t)| json!([i + 1, t.to_string()]))
                .collect();
            Ok(Output::Json(json!({ "upto": upto, "tau": rows })))
        }
    }
}

fn fail(f: Failure) -> ExitCode {
    let payload = json!({ "error": { "kind": f.kind, "message": f.message } });
    eprintln!("{payload}");
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            return fail(usage(first.trim_start_matches("error: ")));
        }
    };
    if let Ok(v) = std::env::var("FRACPOW_SIEVE_LIMIT") {
        if v.trim().parse::<u64>().map_or(true, |n| n < 2) {
            return fail(usage(format!(
                "FRACPOW_SIEVE_LIMIT must be an integer >= 2, got {v:?}"
            )));
        }
    }
    let out = match run(cli) {
        Ok(out) => out,
        Err(f) => return fail(f),
    };
    let body = match out {
        Output::Json(v) => {
            let mut s = serde_json::to_string_pretty(&v).expect("json values print");
            s.push('\n');
            s
        }
        Output::Text(s) => s,
    };
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(body.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
