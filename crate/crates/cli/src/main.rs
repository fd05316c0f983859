//! Command-line front end over the certification kernels.
//!
//! Exit codes: 0 = pass / no counterexample, 1 = certified violation or
//! failed inequality, 2 = inconclusive (vacuous sampling, desk-scale
//! limits), 3 = input error.

use cicert_core::error::Error as CoreError;
use cicert_core::io::{FibrationLiteral, PointedTupleLiteral, QuadTupleLiteral};
use cicert_core::regularity::SampledVerdict;
use cicert_core::scalar::is_prime_u64;
use cicert_core::tracer::FibrationClass;
use cicert_core::{acceptance, codim, constants, quad, regularity, singularity, slopes, tracer};
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "cicert",
    about = "Exact-arithmetic certification of genericity conditions for Fano complete intersections",
    version
)]
struct Cli {
    /// Prime for finite-field decision work.
    #[arg(long, global = true, default_value_t = regularity::DEFAULT_PRIME)]
    prime: u64,
    /// Seed for randomized subcommands; always echoed in the report.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit the full report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Refuse to run randomized subcommands without an explicit --seed.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the thresholds for a given k (and gamma when M is given).
    Params {
        #[arg(long)]
        k: usize,
        #[arg(long = "M")]
        big_m: Option<usize>,
    },
    /// Tail-product inequalities for the hypertangent slope sequence.
    Slopes {
        #[arg(long)]
        k: usize,
        #[arg(long = "M")]
        big_m: Option<usize>,
        /// Singularity type for the multi-quadratic inequality.
        #[arg(long)]
        l: Option<usize>,
        /// Scan a whole range "M1..M2" of ambient dimensions.
        #[arg(long)]
        scan: Option<String>,
        /// Additionally confirm the worst-case reduction by enumerating
        /// every admissible degree tuple (small M only).
        #[arg(long)]
        all_tuples: bool,
    },
    /// Quadratic-form tuple diagnostics.
    #[command(subcommand)]
    Quad(QuadCmd),
    /// Classify a marked point on an explicit complete intersection.
    ClassifyPoint {
        #[arg(long)]
        input: PathBuf,
    },
    /// Sampled regularity / codimension checks at a marked point.
    CheckRegularity {
        /// One of R1, R2, R3.1, R3.2.
        #[arg(long)]
        condition: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Parameter-space codimension verdicts against gamma + M.
    Codim {
        #[arg(long)]
        k: usize,
        #[arg(long = "M")]
        big_m: usize,
        /// Restrict the report to one condition.
        #[arg(long)]
        condition: Option<String>,
        /// Scan all M from rho(k) up to the given M.
        #[arg(long)]
        scan: bool,
    },
    /// Level-state descent bookkeeping.
    Trace {
        #[arg(long)]
        k: usize,
        /// JSON chain specification; without it the contraction
        /// certificate for k is printed.
        #[arg(long)]
        chain: Option<PathBuf>,
    },
    /// Classify a fibration over projective space by its bi-degrees.
    CheckFibration {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the full acceptance suite.
    Selftest,
}

#[derive(Subcommand)]
enum QuadCmd {
    /// Tuple rank and the complete-intersection-of-quadrics criteria.
    Rank {
        #[arg(long)]
        input: PathBuf,
        /// Force exact rational minor-ideal computation for 3 or more
        /// forms (default is a multi-prime monte-carlo verdict).
        #[arg(long)]
        exact: bool,
    },
}

/// Chain specification consumed by `trace --chain`.
#[derive(serde::Deserialize)]
struct ChainSpec {
    l: usize,
    c: usize,
    rank: usize,
    /// Exact rational, "num" or "num/den".
    ratio: String,
    steps: Vec<String>,
}

#[derive(Serialize)]
struct RunReport<T: Serialize> {
    command: String,
    seed: Option<u64>,
    primes: Vec<u64>,
    verdict: String,
    timing_ms: u128,
    report: T,
}

enum Outcome {
    Pass,
    Violation,
    Inconclusive,
}

impl Outcome {
    fn code(&self) -> ExitCode {
        match self {
            Outcome::Pass => ExitCode::from(0),
            Outcome::Violation => ExitCode::from(1),
            Outcome::Inconclusive => ExitCode::from(2),
        }
    }

    fn word(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Violation => "violated",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

fn emit<T: Serialize>(
    cli_json: bool,
    command: &str,
    seed: Option<u64>,
    primes: Vec<u64>,
    outcome: &Outcome,
    started: Instant,
    report: T,
    human: impl FnOnce(&T),
) {
    if cli_json {
        let wrapped = RunReport {
            command: command.to_string(),
            seed,
            primes,
            verdict: outcome.word().to_string(),
            timing_ms: started.elapsed().as_millis(),
            report,
        };
        println!("{}", serde_json::to_string_pretty(&wrapped).unwrap());
    } else {
        human(&report);
        println!("verdict: {}", outcome.word());
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        format!(
            "malformed JSON in {} at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        )
    })
}

fn input_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(3)
}

fn core_error(e: &CoreError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        CoreError::DeskScaleLimit(_) => ExitCode::from(2),
        CoreError::PrerequisiteViolated { .. } => ExitCode::from(1),
        _ => ExitCode::from(3),
    }
}

fn parse_scan(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("scan range must look like M1..M2, got {s:?}"))?;
    let lo: usize = a.trim().parse().map_err(|_| format!("bad bound {a:?}"))?;
    let hi: usize = b.trim().parse().map_err(|_| format!("bad bound {b:?}"))?;
    if lo > hi {
        return Err(format!("empty scan range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success; everything else
            // is an input error
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(3);
            }
            print!("{e}");
            return ExitCode::from(0);
        }
    };
    if !is_prime_u64(cli.prime) {
        return input_error(&format!("--prime {} is not prime", cli.prime));
    }
    let started = Instant::now();
    match run(&cli, started) {
        Ok(code) => code,
        Err(msg) => input_error(&msg),
    }
}

fn run(cli: &Cli, started: Instant) -> Result<ExitCode, String> {
    match &cli.cmd {
        Cmd::Params { k, big_m } => {
            if *k < 3 {
                return Err("params needs k >= 3".into());
            }
            let t = constants::thresholds(*k);
            let gamma = big_m.map(|m| constants::gamma(m, *k));
            let mut payload = serde_json::to_value(&t).unwrap();
            if let Some(g) = &gamma {
                payload["gamma"] = match g {
                    Ok(v) => json!(v.to_string()),
                    Err(e) => json!({ "error": e.to_string() }),
                };
            }
            payload["epsilon_remark"] =
                serde_json::to_value(constants::epsilon_remark_check(*k)).unwrap();
            let outcome = match &gamma {
                Some(Err(_)) => Outcome::Violation,
                _ => Outcome::Pass,
            };
            emit(
                cli.json,
                "params",
                None,
                vec![],
                &outcome,
                started,
                payload,
                |p| println!("{}", serde_json::to_string_pretty(p).unwrap()),
            );
            Ok(outcome.code())
        }

        Cmd::Slopes {
            k,
            big_m,
            l,
            scan,
            all_tuples,
        } => {
            if *k < 3 {
                return Err("slopes needs k >= 3".into());
            }
            let check = |m: usize| -> Result<slopes::SlopeVerdict, String> {
                match l {
                    Some(l) => slopes::check_multiquadratic_tail(*k, m, *l).map_err(|e| e.to_string()),
                    None => slopes::check_nonsingular_tail(*k, m).map_err(|e| e.to_string()),
                }
            };
            let ms: Vec<usize> = match (scan, big_m) {
                (Some(range), _) => {
                    let (lo, hi) = parse_scan(range)?;
                    (lo..=hi).collect()
                }
                (None, Some(m)) => vec![*m],
                (None, None) => return Err("slopes needs --M or --scan".into()),
            };
            let mut verdicts: Vec<(usize, Result<slopes::SlopeVerdict, String>)> =
                ms.par_iter().map(|&m| (m, check(m))).collect();
            verdicts.sort_by_key(|(m, _)| *m);
            let mut all_pass = true;
            let mut reports = Vec::new();
            for (m, v) in verdicts {
                match v {
                    Ok(v) => {
                        all_pass &= v.pass;
                        reports.push(v);
                    }
                    Err(e) => return Err(format!("M = {m}: {e}")),
                }
            }
            if *all_tuples {
                for r in &reports {
                    let ok = slopes::worst_case_is_almost_equal(r.m_ambient, *k, r.tail_length)
                        .map_err(|e| e.to_string())?;
                    if !ok {
                        return Err(format!(
                            "worst-case reduction contradicted at M = {}",
                            r.m_ambient
                        ));
                    }
                }
            }
            let outcome = if all_pass {
                Outcome::Pass
            } else {
                Outcome::Violation
            };
            emit(
                cli.json,
                "slopes",
                None,
                vec![],
                &outcome,
                started,
                reports,
                |rs| {
                    for r in rs {
                        println!(
                            "k={} M={} degrees={:?} tail({}) = {} {} {} -> {}",
                            r.k,
                            r.m_ambient,
                            r.degrees,
                            r.tail_length,
                            r.tail,
                            if r.pass { "<=" } else { ">" },
                            r.lhs,
                            if r.pass { "pass" } else { "FAIL" }
                        );
                    }
                },
            );
            Ok(outcome.code())
        }

        Cmd::Quad(QuadCmd::Rank { input, exact }) => {
            let lit: QuadTupleLiteral = read_json(input)?;
            let tuple = lit.to_tuple().map_err(|e| e.to_string())?;
            let rank = tuple.tuple_rank_detailed(*exact);
            let report = quad::quadric_ci_report_with(&tuple, *exact);
            if let Some(expected) = lit.expected_rank {
                if expected != rank.rank {
                    return Err(format!(
                        "input declares expected_rank {expected} but the computed rank is {}",
                        rank.rank
                    ));
                }
            }
            let outcome = Outcome::Pass;
            emit(
                cli.json,
                "quad rank",
                None,
                vec![],
                &outcome,
                started,
                &report,
                |r| {
                    println!(
                        "l={} ambient={} tuple_rank={} ({:?})",
                        r.l, r.ambient_vars, r.tuple_rank, r.confidence
                    );
                    println!(
                        "irreducible_factorial={} codim_sing_lower={} terminal_ok={}{}",
                        r.irreducible_factorial,
                        r.codim_sing_lower,
                        r.terminal_ok,
                        if r.ambient_limited {
                            " (threshold exceeds ambient variable count)"
                        } else {
                            ""
                        }
                    );
                },
            );
            Ok(outcome.code())
        }

        Cmd::ClassifyPoint { input } => {
            let lit: PointedTupleLiteral = read_json(input)?;
            let pt = lit.to_tuple().map_err(|e| e.to_string())?;
            let report = match singularity::classify(&pt) {
                Ok(r) => r,
                Err(e) => return Ok(core_error(&e)),
            };
            let violated = !report.mq1_pass || report.mq2_pass == Some(false);
            let outcome = if violated {
                Outcome::Violation
            } else {
                Outcome::Pass
            };
            emit(
                cli.json,
                "classify-point",
                None,
                vec![],
                &outcome,
                started,
                &report,
                |r| {
                    println!("type 2^{} (k = {})", r.l, r.k);
                    println!("permutation: {:?}", r.permutation);
                    println!(
                        "reduced-tuple rank: {:?} (threshold {:?}) -> mq1_pass = {}",
                        r.tuple_rank_def12, r.mq1_threshold, r.mq1_pass
                    );
                    println!(
                        "tangent-restricted rank: {:?} (threshold {:?}) -> mq2_pass = {:?}",
                        r.tuple_rank_tangent, r.mq2_threshold, r.mq2_pass
                    );
                },
            );
            Ok(outcome.code())
        }

        Cmd::CheckRegularity {
            condition,
            input,
            samples,
        } => {
            if cli.strict && cli.seed.is_none() {
                return Err("--strict requires an explicit --seed for randomized commands".into());
            }
            let seed = cli.seed.unwrap_or_else(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .unwrap()
                    .subsec_nanos() as u64
            });
            let lit: PointedTupleLiteral = read_json(input)?;
            let pt = lit.to_tuple().map_err(|e| e.to_string())?;
            let result = match condition.as_str() {
                "R1" => regularity::check_r1(&pt, *samples, None, seed, cli.prime),
                "R2" => regularity::check_r2(&pt, *samples, None, seed, cli.prime),
                "R3.1" => regularity::check_r3_1(&pt, *samples, seed, cli.prime),
                "R3.2" => regularity::check_r3_2(&pt, *samples, None, seed, cli.prime),
                other => {
                    return Err(format!(
                        "unknown condition {other:?}; use R1, R2, R3.1 or R3.2"
                    ))
                }
            };
            let report = match result {
                Ok(r) => r,
                Err(e) => return Ok(core_error(&e)),
            };
            let outcome = match &report.verdict {
                SampledVerdict::Violated { .. } => Outcome::Violation,
                SampledVerdict::NoCounterexample { .. } => Outcome::Pass,
                SampledVerdict::Vacuous => Outcome::Inconclusive,
            };
            emit(
                cli.json,
                "check-regularity",
                Some(seed),
                vec![cli.prime],
                &outcome,
                started,
                &report,
                |r| {
                    println!(
                        "{} at a type-2^{} point: truncation {}, subspace codim {}",
                        r.condition, r.l, r.truncation, r.subspace_codim
                    );
                    println!("seed {} prime {}", r.seed, r.prime);
                    for s in &r.samples {
                        println!(
                            "  sample {}: {}{}",
                            s.sample,
                            if s.pass { "pass" } else { "FAIL" },
                            s.first_failure
                                .map(|i| format!(" at member {i}"))
                                .unwrap_or_default()
                        );
                    }
                    for n in &r.notes {
                        println!("  note: {n}");
                    }
                    println!("samples verdict: {:?}", r.verdict);
                },
            );
            Ok(outcome.code())
        }

        Cmd::Codim {
            k,
            big_m,
            condition,
            scan,
        } => {
            let ms: Vec<usize> = if *scan {
                let lo = constants::rho(*k);
                if *big_m < lo {
                    return Err(format!("scan upper bound {big_m} is below rho({k}) = {lo}"));
                }
                (lo..=*big_m).collect()
            } else {
                vec![*big_m]
            };
            let computed: Vec<Result<codim::CodimReport, CoreError>> = ms
                .par_iter()
                .map(|&m| codim::condition_codim_verdict(*k, m))
                .collect();
            let mut reports: Vec<codim::CodimReport> = Vec::new();
            for r in computed {
                match r {
                    Ok(mut rep) => {
                        if let Some(c) = condition {
                            rep.conditions.retain(|v| &v.condition == c);
                            if rep.conditions.is_empty() {
                                return Err(format!("unknown condition {c:?}"));
                            }
                            rep.all_pass = rep.conditions.iter().all(|v| v.pass);
                        }
                        reports.push(rep);
                    }
                    Err(e) => return Ok(core_error(&e)),
                }
            }
            let all_pass = reports.iter().all(|r| r.all_pass);
            let outcome = if all_pass {
                Outcome::Pass
            } else {
                Outcome::Violation
            };
            emit(
                cli.json,
                "codim",
                None,
                vec![],
                &outcome,
                started,
                &reports,
                |rs| {
                    for r in rs.iter() {
                        println!(
                            "k={} M={} gamma={} gamma+M={}",
                            r.k, r.m, r.gamma, r.gamma_plus_m
                        );
                        for c in &r.conditions {
                            println!(
                                "  {:5} worst_l={:?} bound={} +stratum {} -family {} = {} {} {}",
                                c.condition,
                                c.worst_l,
                                c.module_bound,
                                c.stratum_correction,
                                c.family_correction,
                                c.total,
                                if c.pass { ">=" } else { "<" },
                                c.required
                            );
                        }
                    }
                },
            );
            Ok(outcome.code())
        }

        Cmd::Trace { k, chain } => {
            if *k < 3 {
                return Err("trace needs k >= 3".into());
            }
            match chain {
                None => {
                    let cert = tracer::contraction_certificate(*k);
                    let outcome = if cert.pass {
                        Outcome::Pass
                    } else {
                        Outcome::Violation
                    };
                    emit(
                        cli.json,
                        "trace",
                        None,
                        vec![],
                        &outcome,
                        started,
                        &cert,
                        |c| {
                            println!(
                                "k={} eps={} (k/(k+1))^eps = {} (<= 1/2: {})",
                                c.k, c.epsilon, c.contraction_factor, c.factor_le_half
                            );
                            println!(
                                "codim budget: {} >= {} : {}",
                                c.c_after, c.c_floor, c.c_budget_ok
                            );
                            println!(
                                "rank budget: {} >= {} : {}",
                                c.rank_after, c.rank_floor, c.rank_budget_ok
                            );
                        },
                    );
                    Ok(outcome.code())
                }
                Some(path) => {
                    let spec: ChainSpec = read_json(path)?;
                    let ratio: BigRational = {
                        let s = cicert_core::scalar::ExactScalar::parse_rational(&spec.ratio)
                            .map_err(|e| e.to_string())?;
                        s.as_rational().unwrap().clone()
                    };
                    let mut state =
                        match tracer::LevelState::new(*k, spec.l, spec.c, spec.rank, ratio) {
                            Ok(s) => s,
                            Err(e) => return Ok(core_error(&e)),
                        };
                    for step in &spec.steps {
                        let kind = match step.as_str() {
                            "transversal" => tracer::TransitionKind::Transversal,
                            "tangent" => tracer::TransitionKind::Tangent,
                            "special" => tracer::TransitionKind::Special,
                            other => return Err(format!("unknown transition {other:?}")),
                        };
                        state = match tracer::transition(&state, kind) {
                            Ok(s) => s,
                            Err(e) => return Ok(core_error(&e)),
                        };
                    }
                    let outcome = Outcome::Pass;
                    emit(
                        cli.json,
                        "trace",
                        None,
                        vec![],
                        &outcome,
                        started,
                        &state,
                        |s| {
                            println!(
                                "final state: l={} c={} rank>={} ratio>{}",
                                s.l_x, s.c_x, s.rank_lower, s.ratio
                            );
                            for r in &s.step_log {
                                println!(
                                    "  {:?}: l={} c={} rank>={} ratio>{}",
                                    r.kind, r.l_x, r.c_x, r.rank_lower, r.ratio_lower
                                );
                            }
                        },
                    );
                    Ok(outcome.code())
                }
            }
        }

        Cmd::CheckFibration { input } => {
            let lit: FibrationLiteral = read_json(input)?;
            let params = lit.to_params().map_err(|e| e.to_string())?;
            let report = tracer::check_fibration(&params);
            let outcome = match report.class {
                FibrationClass::Rigid => Outcome::Pass,
                FibrationClass::NotRigidTransversal => Outcome::Violation,
                FibrationClass::Undetermined => Outcome::Inconclusive,
            };
            emit(
                cli.json,
                "check-fibration",
                None,
                vec![],
                &outcome,
                started,
                &report,
                |r| {
                    println!("classification: {:?}", r.class);
                    println!("reason: {}", r.reason);
                    println!(
                        "slope sum {} vs m+1 = {}; sum m_i = {}",
                        r.slope_sum, r.slope_rhs, r.sum_mi
                    );
                    if let Some(d) = &r.dim_bound {
                        println!("base-dimension bound: {d}");
                    }
                },
            );
            Ok(outcome.code())
        }

        Cmd::Selftest => {
            let results = acceptance::run_all();
            let mut all = true;
            for r in &results {
                println!(
                    "[{}] criterion {:2}: {} ({} ms) - {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.name,
                    r.millis,
                    r.detail
                );
                all &= r.pass;
            }
            Ok(if all {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            })
        }
    }
}
