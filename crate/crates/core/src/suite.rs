//! Seeded identity suites over random parameter draws.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ladder::{self, build_ladder, IdentityReport};
use crate::ratcore::{int, rat, Poly, RatFunc, Rational};
use crate::recurrences::{five_term_coeffs, ttrr_coeffs};
use crate::sobolev::{Family, HyperForm, Params};
use crate::zeros::limit_rep_report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Orthogonality,
    Constructions,
    Lemmas,
    Ladder,
    Sode,
    Eht2,
    Fiveterm,
    Ttrr,
    Prop5,
    Hypergeometric,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Orthogonality,
        Suite::Constructions,
        Suite::Lemmas,
        Suite::Ladder,
        Suite::Sode,
        Suite::Eht2,
        Suite::Fiveterm,
        Suite::Ttrr,
        Suite::Prop5,
        Suite::Hypergeometric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orthogonality => "orthogonality",
            Suite::Constructions => "constructions",
            Suite::Lemmas => "lemmas",
            Suite::Ladder => "ladder",
            Suite::Sode => "sode",
            Suite::Eht2 => "eht2",
            Suite::Fiveterm => "fiveterm",
            Suite::Ttrr => "ttrr",
            Suite::Prop5 => "prop5",
            Suite::Hypergeometric => "hypergeometric",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

/// `"all"` or a comma-separated list of suite names.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("no suite selected".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    /// Perturb `Ξ₂` before the lowering check: a negative control.
    pub corrupt: bool,
    pub threads: usize,
}

impl SuiteConfig {
    pub fn new(suites: Vec<Suite>, n_max: usize, trials: usize, seed: u64) -> Self {
        Self {
            suites,
            n_max,
            trials,
            seed,
            corrupt: false,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub suite: Suite,
    pub identity: String,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCount {
    pub suite: Suite,
    pub checks: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub n_max: usize,
    pub draws: Vec<Params>,
    pub suites: Vec<SuiteCount>,
    pub failures: Vec<Failure>,
    pub passed: bool,
}

const C_CHOICES: [i64; 4] = [-1, -2, -5, -15];

/// `(a, c, λ)` with `a ∈ (0, 8]`, `c ∈ {-1, -2, -5, -15}`, `λ ∈ (0, 1000]`.
pub fn draw_params(seed: u64, trials: usize) -> Vec<(Rational, Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let qa: i64 = rng.gen_range(1..=12);
            let a = rat(rng.gen_range(1..=8 * qa), qa);
            let c = int(C_CHOICES[rng.gen_range(0..C_CHOICES.len())]);
            let ql: i64 = rng.gen_range(1..=12);
            let l = rat(rng.gen_range(1..=1000 * ql), ql);
            (a, c, l)
        })
        .collect()
}

/// Twenty rational evaluation points, none of them an integer.
pub fn eval_points() -> Vec<Rational> {
    (0..20).map(|k| rat(6 * k - 55, 6)).collect()
}

type Outcome = (Suite, std::result::Result<IdentityReport, (String, Error)>);

fn flag(name: &str, params: Params, ok: bool) -> IdentityReport {
    IdentityReport::new(name, params, if ok { Poly::zero() } else { Poly::one() })
}

fn run_degree(f: &Family, n: usize, suites: &[Suite], corrupt: bool, out: &mut Vec<Outcome>) {
    let params = f.params(n);
    let mut push = |s: Suite, r: Result<Vec<IdentityReport>>, what: &str| match r {
        Ok(v) => out.extend(v.into_iter().map(|rep| (s, Ok(rep)))),
        Err(e) => out.push((s, Err((what.to_string(), e)))),
    };
    let needs_ladder = suites
        .iter()
        .any(|s| matches!(s, Suite::Lemmas | Suite::Ladder | Suite::Sode | Suite::Eht2));
    let built = needs_ladder.then(|| build_ladder(f, n));
    let ladder = || built.clone().expect("ladder requested");
    let sode = suites
        .iter()
        .any(|s| matches!(s, Suite::Sode | Suite::Eht2))
        .then(|| ladder().and_then(|l| l.sode_rs()));
    let sode = || sode.clone().expect("sode requested");
    for &s in suites {
        match s {
            Suite::Orthogonality => {
                let q = f.q(n);
                let ortho = (0..n).all(|m| f.inner(f.q(m), q).is_zero());
                let norm = f.inner(q, q) == f.q_norm(n);
                push(s, Ok(vec![
                    flag("orthogonality", params.clone(), ortho),
                    flag("norm n! a^n b_n", params.clone(), norm),
                ]), "orthogonality");
            }
            Suite::Constructions => push(
                s,
                f.constructions_check(n).map(|m| {
                    vec![flag(m.unwrap_or("constructions"), params.clone(), m.is_none())]
                }),
                "constructions",
            ),
            Suite::Lemmas => push(
                s,
                ladder().map(|l| ladder::verify_lemmas(f, &l)),
                "lemmas",
            ),
            Suite::Ladder => push(
                s,
                ladder().map(|mut l| {
                    if corrupt {
                        l.xi2 = &l.xi2 + RatFunc::constant(rat(1, 1000));
                    }
                    vec![ladder::verify_lowering(f, &l), ladder::verify_raising(f, &l)]
                }),
                "ladder",
            ),
            Suite::Sode => push(
                s,
                ladder().and_then(|l| Ok(vec![ladder::verify_sode(f, &l, &sode()?)])),
                "sode",
            ),
            Suite::Eht2 => push(
                s,
                ladder().and_then(|l| {
                    Ok(vec![ladder::hypergeometric_type_sode(f, &l, &sode()?)?.report])
                }),
                "eht2",
            ),
            Suite::Fiveterm => push(s, five_term_coeffs(f, n).map(|(_, r)| r), "five-term"),
            Suite::Ttrr => push(s, ttrr_coeffs(f, n).map(|(_, r)| vec![r]), "ttrr"),
            Suite::Prop5 => push(s, limit_rep_report(f, n).map(|r| vec![r]), "prop5"),
            Suite::Hypergeometric => {
                let q = f.q(n);
                let r = eval_points().iter().try_fold(true, |ok, x| {
                    let h = f.hypergeometric_eval(n, x, HyperForm::PreNormalized)?;
                    Ok(ok && h == q.eval(x))
                });
                push(s, r.map(|ok| vec![flag("hypergeometric", params.clone(), ok)]), "hypergeometric");
            }
        }
    }
}

fn run_draw(draw: &(Rational, Rational, Rational), cfg: &SuiteConfig) -> Vec<Outcome> {
    let (a, c, l) = draw;
    let mut out = Vec::new();
    let n_lo = 2.min(cfg.n_max);
    match Family::new(a, c, l, cfg.n_max) {
        Ok(f) => {
            for n in n_lo..=cfg.n_max {
                run_degree(&f, n, &cfg.suites, cfg.corrupt, &mut out);
            }
        }
        Err(e) => out.push((cfg.suites[0], Err(("family".into(), e)))),
    }
    out
}

/// Runs every selected suite for `2 <= n <= n_max` on each draw.
pub fn run(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.n_max < 2 {
        return Err(Error::IndexTooSmall { required: 2, got: cfg.n_max });
    }
    if cfg.suites.is_empty() {
        return Err(Error::Parse("no suite selected".into()));
    }
    let draws = draw_params(cfg.seed, cfg.trials);
    let threads = cfg.threads.max(1).min(draws.len().max(1));
    let mut results: Vec<Vec<Outcome>> = vec![Vec::new(); draws.len()];
    std::thread::scope(|scope| {
        for (t, chunk) in results.chunks_mut(draws.len().div_ceil(threads).max(1)).enumerate() {
            let base = t * draws.len().div_ceil(threads).max(1);
            let draws = &draws;
            scope.spawn(move || {
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = run_draw(&draws[base + i], cfg);
                }
            });
        }
    });

    let mut counts: Vec<SuiteCount> = cfg
        .suites
        .iter()
        .map(|&s| SuiteCount { suite: s, checks: 0, failures: 0 })
        .collect();
    let mut failures = Vec::new();
    for (draw, outcomes) in draws.iter().zip(results) {
        for (s, o) in outcomes {
            let cnt = counts.iter_mut().find(|c| c.suite == s).expect("selected suite");
            cnt.checks += 1;
            match o {
                Ok(rep) if rep.passed() => {}
                Ok(rep) => {
                    cnt.failures += 1;
                    failures.push(Failure {
                        suite: s,
                        identity: rep.identity_name,
                        params: rep.params,
                        residual_degree: rep.residual_degree,
                        error: None,
                    });
                }
                Err((what, e)) => {
                    cnt.failures += 1;
                    failures.push(Failure {
                        suite: s,
                        identity: what,
                        params: Params::new(cfg.n_max, draw.0.clone(), draw.1.clone(), draw.2.clone()),
                        residual_degree: None,
                        error: Some(e.to_string()),
                    });
                }
            }
        }
    }
    Ok(SuiteReport {
        seed: cfg.seed,
        trials: cfg.trials,
        n_max: cfg.n_max,
        draws: draws
            .into_iter()
            .map(|(a, c, l)| Params::new(cfg.n_max, a, c, l))
            .collect(),
        passed: failures.is_empty(),
        suites: counts,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn draws_are_reproducible_and_in_range() {
        let d1 = draw_params(42, 10);
        assert_eq!(d1, draw_params(42, 10));
        assert_ne!(d1, draw_params(43, 10));
        for (a, c, l) in &d1 {
            assert!(a.is_positive() && a <= &int(8));
            assert!(C_CHOICES.iter().any(|v| &int(*v) == c));
            assert!(l.is_positive() && l <= &int(1000));
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(parse_suites("all").unwrap().len(), Suite::ALL.len());
        assert_eq!(parse_suites("sode,ttrr").unwrap(), vec![Suite::Sode, Suite::Ttrr]);
        assert!(parse_suites("nope").is_err());
    }

    #[test]
    fn small_run_and_negative_control() {
        let mut cfg = SuiteConfig::new(parse_suites("all").unwrap(), 3, 2, 7);
        let r = run(&cfg).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        cfg.suites = vec![Suite::Ladder];
        cfg.corrupt = true;
        let r = run(&cfg).unwrap();
        assert!(!r.passed);
        assert!(r.failures.iter().all(|f| f.identity == "lowering"));
    }
}
