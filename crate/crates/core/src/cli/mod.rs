//! The `sck` command line.
//!
//! Exit codes: 0 success, 1 an identity failed, 2 bad usage or parameters.

pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::charlier::CharlierBasis;
use crate::error::{Error, Result};
use crate::ratcore::{format_rational, parse_rational, Poly, Rational};
use crate::sobolev::Params;
use crate::suite::{self, SuiteConfig};
use crate::zeros::{self, geometric_grid, rational_f64, Pencil, RootSet, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Sobolev,
    Charlier,
    Limit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Sobolev,
    Charlier,
    Limit,
    Kernel,
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "sck", version, about = "Sobolev-type Charlier polynomials: exact construction, identities and zeros")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long)]
    pub n: usize,
    /// Poisson parameter, `p/q` or decimal.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub a: Rational,
    /// Mass point.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub c: Option<Rational>,
    /// Mass.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub lambda: Option<Rational>,
}

impl ParamArgs {
    fn c(&self) -> Result<Rational> {
        self.c
            .clone()
            .ok_or_else(|| Error::InvalidParameter("--c is required".into()))
    }

    fn lambda(&self) -> Result<Rational> {
        self.lambda
            .clone()
            .ok_or_else(|| Error::InvalidParameter("--lambda is required".into()))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the coefficients of Q_n, C_n or G_n.
    Gen {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "sobolev")]
        family: FamilyKind,
    },
    /// Run exact identity suites on seeded random parameters.
    Verify {
        /// `all` or a comma-separated list of suites.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Perturb one ladder coefficient so the lowering check must fail.
        #[arg(long, hide = true)]
        corrupt_coefficient: bool,
    },
    /// Roots of a single polynomial.
    Zeros {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "sobolev")]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Zeros of Q_n over a list or geometric grid of masses.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        a: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        c: Rational,
        /// Comma-separated masses.
        #[arg(long, conflicts_with = "grid")]
        lambdas: Option<String>,
        /// `lo,hi,points`, geometric.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Also report the large-mass convergence of each zero.
        #[arg(long)]
        speed: bool,
    },
    /// The mass at which the smallest zero of Q_n reaches 0.
    Lambda0 {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        a: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        c: Rational,
    },
    /// Published tables next to recomputed values.
    Table {
        #[arg(long, value_enum)]
        id: table::TableId,
    },
}

/// Output text and exit code of one invocation.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

fn ok(text: String) -> Result<Outcome> {
    Ok(Outcome { text, code: EXIT_OK })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn coeff_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

fn coeffs_csv(p: &Poly) -> String {
    let mut out = String::from("k,coeff\n");
    for (k, c) in p.coeffs().iter().enumerate() {
        out.push_str(&format!("{k},{}\n", format_rational(c)));
    }
    out
}

fn cmd_gen(params: &ParamArgs, family: FamilyKind, fmt: Format) -> Result<Outcome> {
    let p = &params;
    match family {
        FamilyKind::Sobolev => {
            let sp = crate::sobolev::q_poly_kernel(&Params::new(p.n, p.a.clone(), p.c()?, p.lambda()?))?;
            ok(match fmt {
                Format::Json => to_json(&sp),
                Format::Csv => coeffs_csv(&sp.poly),
                Format::Pretty => format!(
                    "Q_{}(x) = {}\nnorm^2 = {}\nb_n = {}\n",
                    p.n, sp.poly, sp.norm_sq, sp.b_n
                ),
            })
        }
        FamilyKind::Charlier => {
            let b = CharlierBasis::new(&p.a, p.n)?;
            let (poly, norm) = (b.poly(p.n), b.norm(p.n));
            ok(match fmt {
                Format::Json => to_json(&json!({
                    "family": "charlier",
                    "n": p.n,
                    "a": format_rational(&p.a),
                    "coeffs": coeff_strings(poly),
                    "norm_sq": format_rational(norm),
                })),
                Format::Csv => coeffs_csv(poly),
                Format::Pretty => format!("C_{}(x) = {}\nnorm^2 = {}\n", p.n, poly, norm),
            })
        }
        FamilyKind::Limit => {
            let g = zeros::limit_poly(p.n, &p.a, &p.c()?)?;
            ok(match fmt {
                Format::Json => to_json(&json!({
                    "family": "limit",
                    "n": p.n,
                    "a": format_rational(&p.a),
                    "c": format_rational(&p.c()?),
                    "coeffs": coeff_strings(&g),
                })),
                Format::Csv => coeffs_csv(&g),
                Format::Pretty => format!("G_{}(x) = {}\n", p.n, g),
            })
        }
    }
}

fn cmd_verify(cfg: &SuiteConfig, fmt: Format) -> Result<Outcome> {
    let report = suite::run(cfg)?;
    let code = if report.passed { EXIT_OK } else { EXIT_IDENTITY };
    let text = match fmt {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("suite,checks,failures\n");
            for s in &report.suites {
                out.push_str(&format!("{},{},{}\n", s.suite, s.checks, s.failures));
            }
            out
        }
        Format::Pretty => {
            let mut out = format!(
                "seed {} | {} draws | 2 <= n <= {}\n",
                report.seed, report.trials, report.n_max
            );
            for s in &report.suites {
                out.push_str(&format!("{:<16} {:>6} checks {:>4} failed\n", s.suite.name(), s.checks, s.failures));
            }
            for f in &report.failures {
                out.push_str(&format!(
                    "FAILED {} / {} at n={} a={} c={} lambda={}{}\n",
                    f.suite,
                    f.identity,
                    f.params.n,
                    f.params.a,
                    f.params.c,
                    f.params.lambda,
                    f.error.as_ref().map(|e| format!(": {e}")).unwrap_or_default()
                ));
            }
            out.push_str(if report.passed { "all identities hold\n" } else { "identity failures\n" });
            out
        }
    };
    Ok(Outcome { text, code })
}

fn roots_csv(lambda: Option<f64>, rs: &RootSet) -> String {
    let mut out = String::from("lambda,k,eta_k_re,eta_k_im,residual\n");
    let l = lambda.map(|v| format!("{v:e}")).unwrap_or_default();
    for (k, (z, r)) in rs.roots.iter().zip(&rs.residuals).enumerate() {
        out.push_str(&format!("{l},{},{:e},{:e},{:e}\n", k + 1, z.re, z.im, r));
    }
    out
}

fn roots_pretty(rs: &RootSet) -> String {
    let mut out = String::new();
    for (k, (z, r)) in rs.roots.iter().zip(&rs.residuals).enumerate() {
        let im = if z.im == 0.0 {
            String::new()
        } else {
            format!(" {} {:.12}i", if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
        };
        out.push_str(&format!("{:>3}  {:.15}{}  (residual {:.1e})\n", k + 1, z.re, im, r));
    }
    out
}

fn cmd_zeros(p: &ParamArgs, target: Target, tol: f64, fmt: Format) -> Result<Outcome> {
    let (poly, lambda) = match target {
        Target::Charlier => (CharlierBasis::new(&p.a, p.n)?.poly(p.n).clone(), None),
        Target::Limit => (zeros::limit_poly(p.n, &p.a, &p.c()?)?, None),
        Target::Kernel => (Pencil::new(p.n, &p.a, &p.c()?)?.kernel().clone(), None),
        Target::Sobolev => {
            let l = p.lambda()?;
            let v = Params::new(p.n, p.a.clone(), p.c()?, l.clone()).validate();
            if !v.algebra_ok {
                return Err(Error::InvalidParameter(v.reason.unwrap_or_default()));
            }
            (Pencil::new(p.n, &p.a, &p.c()?)?.sobolev(&l), Some(l))
        }
    };
    let rs = zeros::roots(&poly, tol)?;
    ok(match fmt {
        Format::Csv => roots_csv(lambda.as_ref().map(rational_f64), &rs),
        Format::Json => to_json(&json!({
            "target": format!("{target:?}").to_lowercase(),
            "n": p.n,
            "a": format_rational(&p.a),
            "c": p.c.as_ref().map(format_rational),
            "lambda": lambda.as_ref().map(format_rational),
            "roots": rs,
        })),
        Format::Pretty => roots_pretty(&rs),
    })
}

fn parse_lambdas(list: &str) -> Result<Vec<Rational>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_rational)
        .collect()
}

fn parse_grid(spec: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = || Error::Parse(format!("grid must be lo,hi,points, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let pts: usize = parts[2].parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi >= lo && pts >= 1) {
        return Err(bad());
    }
    Ok(geometric_grid(lo, hi, pts))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    n: usize,
    a: &Rational,
    c: &Rational,
    lambdas: Option<&str>,
    grid: Option<&str>,
    tol: f64,
    speed: bool,
    fmt: Format,
) -> Result<Outcome> {
    let lams = match (lambdas, grid) {
        (Some(l), _) => parse_lambdas(l)?,
        (None, Some(g)) => parse_grid(g)?,
        (None, None) => geometric_grid(1e-10, 1e3, 12),
    };
    let report = zeros::sweep(n, a, c, &lams, tol)?;
    let speed_report = if speed {
        Some(zeros::speed_check(n, a, c, &lams, tol)?)
    } else {
        None
    };
    ok(match fmt {
        Format::Csv => report.to_csv(),
        Format::Json => match &speed_report {
            Some(s) => to_json(&json!({ "sweep": report, "speed": s })),
            None => to_json(&report),
        },
        Format::Pretty => {
            let mut out = format!("Q_{n}^lambda zeros, a={a}, c={c}\n");
            if let Some(l0) = &report.lambda0 {
                out.push_str(&format!("lambda0 = {:.6e}\n", rational_f64(l0)));
            }
            for r in &report.rows {
                let etas: Vec<String> = r.eta.iter().map(|e| format!("{e:.8}")).collect();
                out.push_str(&format!("{:>12.4e}  {}\n", r.lambda_f64, etas.join("  ")));
            }
            out.push_str(&format!(
                "monotone in lambda: {} | chain y<eta<x: {} | lambda0 crossing: {}\n",
                report.monotone,
                report.chain_holds(),
                report.crossing_consistent
            ));
            if let Some(s) = &speed_report {
                out.push_str("lambda(eta_k - y_k) relative error against the limit\n");
                for r in &s.rows {
                    let e: Vec<String> = r.rel_err.iter().map(|v| format!("{v:.2e}")).collect();
                    out.push_str(&format!("{:>12.4e}  {}\n", r.lambda, e.join("  ")));
                }
            }
            out
        }
    })
}

fn cmd_lambda0(n: usize, a: &Rational, c: &Rational, fmt: Format) -> Result<Outcome> {
    let l0 = zeros::lambda0(n, a, c)?;
    let f = rational_f64(&l0);
    ok(match fmt {
        Format::Json => to_json(&json!({
            "n": n,
            "a": format_rational(a),
            "c": format_rational(c),
            "lambda0": format_rational(&l0),
            "lambda0_f64": f,
        })),
        Format::Csv => format!(
            "n,a,c,lambda0,lambda0_f64\n{n},{},{},{},{f:e}\n",
            format_rational(a),
            format_rational(c),
            format_rational(&l0)
        ),
        Format::Pretty => format!("lambda0 = {f:.6e}\nexact   = {}\n", format_rational(&l0)),
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Gen { params, family } => cmd_gen(params, *family, fmt(Format::Json)),
        Command::Verify {
            suite,
            n_max,
            trials,
            seed,
            corrupt_coefficient,
        } => {
            let mut cfg = SuiteConfig::new(suite::parse_suites(suite)?, *n_max, *trials, *seed);
            cfg.corrupt = *corrupt_coefficient;
            cmd_verify(&cfg, fmt(Format::Json))
        }
        Command::Zeros { params, target, tol } => cmd_zeros(params, *target, *tol, fmt(Format::Pretty)),
        Command::Sweep {
            n,
            a,
            c,
            lambdas,
            grid,
            tol,
            speed,
        } => cmd_sweep(*n, a, c, lambdas.as_deref(), grid.as_deref(), *tol, *speed, fmt(Format::Pretty)),
        Command::Lambda0 { n, a, c } => cmd_lambda0(*n, a, c, fmt(Format::Pretty)),
        Command::Table { id } => {
            let r = table::compute(*id)?;
            ok(match fmt(Format::Pretty) {
                Format::Json => to_json(&r),
                Format::Csv => r.to_csv(),
                Format::Pretty => r.to_pretty(),
            })
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::IdentityMismatch(_) | Error::NonZeroRemainder => EXIT_IDENTITY,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and writes its output.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text),
                None => stdout.write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "sck: cannot write output: {e}");
                return EXIT_USAGE;
            }
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "sck: {e}");
            error_code(&e)
        }
    }
}
