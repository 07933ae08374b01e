//! Command-line surface for the engine: JSON in, JSON or text out.
//!
//! Exit codes: 0 when the requested predicate holds (member / generalized
//! positive / feasible / computed), 1 when it was computed but does not
//! hold, 2 on input or numerical errors.

mod demo;
mod render;

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use posreal::cone::member;
use posreal::feedback::{
    check_conditions, find_feedback_hhat, synthesize_gain, FeedbackProblem, HhatSearch,
    HhatSearchOptions, SynthesisOptions,
};
use posreal::gpset::{classify, construct, construction_certificate, ClassifyOptions, GpClass};
use posreal::io;
use posreal::linalg::default_tol;
use posreal::prl::{
    boundary_oracle, find_certificate, NuTarget, SearchOptions, SearchOutcome, ORACLE_TOL,
};
use posreal::SystemMatrix;

#[derive(Parser)]
#[command(
    name = "posreal",
    about = "Certify, classify, construct and feedback-synthesize realizations of (generalized) positive rational functions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct InputArgs {
    /// Path to a realization JSON file ({"L": [[...]], "p": n} or
    /// {"A": ..., "B": ..., "C": ..., "D": ...})
    #[arg(long, conflicts_with = "inline")]
    input: Option<String>,
    /// The same JSON given inline
    #[arg(long)]
    inline: Option<String>,
}

#[derive(Args)]
struct CommonArgs {
    /// Residual tolerance override (default: 1e-9 scaled by the input norm)
    #[arg(long)]
    tol: Option<f64>,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the transfer function and/or emit its scalar rational form
    Tf {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Evaluation points "re,im" (repeatable)
        #[arg(long = "at")]
        at: Vec<String>,
        /// Emit numerator/denominator coefficients (single-output systems)
        #[arg(long)]
        poly: bool,
    },
    /// Boundary oracle: test the defining inequality on the imaginary axis
    #[command(name = "check-gp")]
    CheckGp {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Grid sample count
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Search for a Lyapunov certificate
    Certify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Target inertia: an integer or "any"
        #[arg(long, default_value = "any")]
        nu: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Membership of L in the cone of a user-supplied Hermitian factor
    Member {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// The factor H as a JSON matrix, e.g. "[[-1,0,0],[0,1,0],[0,0,1]]"
        #[arg(long)]
        hmat: String,
    },
    /// Report every certifiable inertia class plus the minimality split
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw a certified member of GP(r, nu, p)
    Construct {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        nu: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check/find the Hermitian factor and synthesize a feedback gain
    Feedback {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Candidate factor as a JSON matrix; searched for when omitted
        #[arg(long)]
        hmat: Option<String>,
        /// Bisection cap for the scalar gain
        #[arg(long = "k-max", default_value_t = 1e6)]
        k_max: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the built-in example systems as a regression demo
    Demo {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((value, format, predicate)) => {
            match format {
                Format::Json => println!("{}", io::to_canonical_json(&value)),
                Format::Text => print!("{}", render::render_text(&value)),
            }
            if predicate {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_input(input: &InputArgs) -> Result<SystemMatrix, posreal::Error> {
    let text = match (&input.input, &input.inline) {
        (Some(path), None) => fs::read_to_string(path)
            .map_err(|e| posreal::Error::Parse(format!("reading {path}: {e}")))?,
        (None, Some(text)) => text.clone(),
        _ => {
            return Err(posreal::Error::Parse(
                "exactly one of --input or --inline is required".into(),
            ))
        }
    };
    io::system_matrix_from_json(&text)
}

fn parse_point(text: &str) -> Result<Complex64, posreal::Error> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| posreal::Error::Parse(format!("invalid number in point '{text}'")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(posreal::Error::Parse(format!(
            "point '{text}' is not re[,im]"
        ))),
    }
}

fn parse_nu(text: &str) -> Result<NuTarget, posreal::Error> {
    if text.eq_ignore_ascii_case("any") {
        Ok(NuTarget::Any)
    } else {
        text.parse::<usize>().map(NuTarget::Exactly).map_err(|_| {
            posreal::Error::Parse(format!("--nu must be an integer or 'any', got '{text}'"))
        })
    }
}

fn certificate_value(cert: &posreal::prl::LyapunovCertificate) -> Value {
    let mut m = Map::new();
    m.insert("hhat".into(), io::matrix_to_value(&cert.hhat));
    m.insert("nu".into(), json!(cert.nu));
    m.insert("pole_bound_neg".into(), json!(cert.pole_bound_neg));
    m.insert("pole_bound_pos".into(), json!(cert.pole_bound_pos));
    m.insert("residual_min_eig".into(), json!(cert.min_eigenvalue));
    m.insert("tolerance_used".into(), json!(cert.tolerance_used));
    m.insert("proves_positive".into(), json!(cert.proves_positive()));
    Value::Object(m)
}

type Outcome = Result<(Value, Format, bool), posreal::Error>;

fn run(command: Command) -> Outcome {
    match command {
        Command::Tf {
            input,
            common,
            at,
            poly,
        } => {
            let sm = load_input(&input)?;
            let re = sm.partition();
            let mut out = Map::new();
            out.insert("command".into(), json!("tf"));
            if poly {
                let sr = re.scalar_rational()?;
                let coeffs = |p: &posreal::poly::Poly| -> Value {
                    Value::Array(
                        p.coeffs[..=p.degree(0.0)]
                            .iter()
                            .map(|z| json!([z.re, z.im]))
                            .collect(),
                    )
                };
                let reduced = sr.reduced(1e-7);
                out.insert("num".into(), coeffs(&sr.num));
                out.insert("den".into(), coeffs(&sr.den));
                out.insert("reduced_num".into(), coeffs(&reduced.num));
                out.insert("reduced_den".into(), coeffs(&reduced.den));
            }
            if !at.is_empty() {
                let mut evals = Vec::new();
                for text in &at {
                    let s = parse_point(text)?;
                    let value = re.evaluate(s)?;
                    evals.push(json!({
                        "s": [s.re, s.im],
                        "value": io::matrix_to_value(&value),
                    }));
                }
                out.insert("evaluations".into(), Value::Array(evals));
            }
            Ok((Value::Object(out), common.format, true))
        }
        Command::CheckGp {
            input,
            common,
            samples,
        } => {
            let sm = load_input(&input)?;
            let re = sm.partition();
            let tol = common.tol.unwrap_or(ORACLE_TOL);
            let rep = boundary_oracle(&re, samples, tol)?;
            let value = json!({
                "command": "check-gp",
                "options": {"samples": samples, "tol": tol},
                "is_gp": rep.is_gp,
                "vacuous": rep.vacuous,
                "min_eig": rep.min_value,
                "min_omega": rep.min_omega,
                "excluded": rep.profile.excluded,
                "profile": rep.profile.omegas.iter().zip(&rep.profile.min_eigs)
                    .map(|(&w, &e)| json!([w, e])).collect::<Vec<_>>(),
            });
            let ok = rep.is_gp;
            Ok((value, common.format, ok))
        }
        Command::Certify {
            input,
            common,
            nu,
            seed,
        } => {
            let sm = load_input(&input)?;
            let re = sm.partition();
            let target = parse_nu(&nu)?;
            let opts = SearchOptions {
                tol: common.tol,
                seed,
                ..SearchOptions::default()
            };
            let outcome = find_certificate(&re, target, &opts)?;
            let mut out = Map::new();
            out.insert("command".into(), json!("certify"));
            out.insert(
                "options".into(),
                json!({"nu": nu, "seed": seed, "tol": common.tol.unwrap_or_else(|| default_tol(sm.matrix()))}),
            );
            let found = match &outcome {
                SearchOutcome::Found(cert) => {
                    out.insert("found".into(), json!(true));
                    out.insert("certificate".into(), certificate_value(cert));
                    true
                }
                SearchOutcome::Infeasible {
                    best_min_eig,
                    best_hhat,
                } => {
                    out.insert("found".into(), json!(false));
                    out.insert("best_min_eig".into(), json!(best_min_eig));
                    out.insert("best_hhat".into(), io::matrix_to_value(best_hhat));
                    false
                }
            };
            Ok((Value::Object(out), common.format, found))
        }
        Command::Member {
            input,
            common,
            hmat,
        } => {
            let sm = load_input(&input)?;
            let hval: Value = serde_json::from_str(&hmat)
                .map_err(|e| posreal::Error::Parse(format!("--hmat: {e}")))?;
            let h = io::matrix_from_value(&hval)?;
            let tol = common.tol.unwrap_or_else(|| default_tol(sm.matrix()));
            let verdict = member(sm.matrix(), &h, tol)?;
            let status = match verdict.status {
                posreal::cone::ConeStatus::Strict => "strict",
                posreal::cone::ConeStatus::Closed => "closed",
                posreal::cone::ConeStatus::Outside => "outside",
            };
            let value = json!({
                "command": "member",
                "options": {"tol": tol},
                "status": status,
                "min_eigenvalue": verdict.min_eigenvalue,
                "residual": io::matrix_to_value(&verdict.residual),
            });
            Ok((value, common.format, verdict.is_member()))
        }
        Command::Classify {
            input,
            common,
            seed,
        } => {
            let sm = load_input(&input)?;
            let opts = ClassifyOptions {
                search: SearchOptions {
                    tol: common.tol,
                    seed,
                    ..SearchOptions::default()
                },
                rank_tol: None,
            };
            let rep = classify(&sm, &opts)?;
            let memberships: Vec<Value> = rep
                .memberships
                .iter()
                .map(|(cls, cert)| {
                    json!({
                        "r": cls.r,
                        "nu": cls.nu,
                        "p": cls.p,
                        "residual_min_eig": cert.min_eigenvalue,
                        "proves_positive": cert.proves_positive(),
                    })
                })
                .collect();
            let any = !memberships.is_empty();
            let value = json!({
                "command": "classify",
                "options": {"seed": seed},
                "memberships": memberships,
                "mcmillan": rep.mcmillan,
                "minimal": rep.minimal,
                "rank_tolerance": rep.rank_tolerance,
            });
            Ok((value, common.format, any))
        }
        Command::Construct {
            common,
            r,
            nu,
            p,
            seed,
        } => {
            let cls = GpClass::new(r, nu, p)?;
            let sm = construct(cls, seed)?;
            let cert = construction_certificate(&sm, cls)?;
            let value = json!({
                "command": "construct",
                "options": {"r": r, "nu": nu, "p": p, "seed": seed},
                "L": io::matrix_to_value(sm.matrix()),
                "p": p,
                "certificate": certificate_value(&cert),
            });
            Ok((value, common.format, true))
        }
        Command::Feedback {
            input,
            common,
            hmat,
            k_max,
            seed,
        } => {
            let sm = load_input(&input)?;
            let fp = FeedbackProblem::from_system_matrix(&sm, 1e-9)?;
            let mut out = Map::new();
            out.insert("command".into(), json!("feedback"));
            out.insert("options".into(), json!({"k_max": k_max, "seed": seed}));
            let hhat = match hmat {
                Some(text) => {
                    let hval: Value = serde_json::from_str(&text)
                        .map_err(|e| posreal::Error::Parse(format!("--hmat: {e}")))?;
                    let h = io::matrix_from_value(&hval)?;
                    let tol = common.tol.unwrap_or_else(|| default_tol(&fp.a));
                    let (a, b) = check_conditions(&fp, &h, tol)?;
                    out.insert("conditions".into(), json!({"a": a, "b": b}));
                    if !(a && b) {
                        out.insert("feasible".into(), json!(false));
                        return Ok((Value::Object(out), common.format, false));
                    }
                    h
                }
                None => {
                    let sopts = HhatSearchOptions {
                        tol: common.tol,
                        seed,
                        ..Default::default()
                    };
                    match find_feedback_hhat(&fp, &sopts)? {
                        HhatSearch::Found(h) => h,
                        HhatSearch::InfeasibleConditionA => {
                            out.insert("feasible".into(), json!(false));
                            out.insert("reason".into(), json!("condition_a"));
                            return Ok((Value::Object(out), common.format, false));
                        }
                        HhatSearch::InfeasibleConditionB {
                            best_min_eig,
                            best_hhat,
                        } => {
                            out.insert("feasible".into(), json!(false));
                            out.insert("reason".into(), json!("condition_b"));
                            out.insert("best_min_eig".into(), json!(best_min_eig));
                            out.insert("best_hhat".into(), io::matrix_to_value(&best_hhat));
                            return Ok((Value::Object(out), common.format, false));
                        }
                    }
                }
            };
            out.insert("hhat".into(), io::matrix_to_value(&hhat));
            let cert = synthesize_gain(
                &fp,
                &hhat,
                &SynthesisOptions {
                    tol: common.tol,
                    k_max,
                },
            )?;
            out.insert("feasible".into(), json!(true));
            out.insert("k_star".into(), json!(cert.k_star));
            out.insert("gain".into(), io::matrix_to_value(&cert.gain));
            out.insert(
                "closed_loop".into(),
                io::system_matrix_to_value(&cert.closed_loop.assemble()),
            );
            out.insert("certificate".into(), certificate_value(&cert.certificate));
            Ok((Value::Object(out), common.format, true))
        }
        Command::Demo { common } => {
            let report = demo::run_demo();
            let ok = report.all_passed();
            Ok((report.into_value(), common.format, ok))
        }
    }
}
