//! `dskv`: basis computation, verification suites, the ds -> krv map,
//! mould and group checks, all with JSON or text output.
//!
//! Exit status: 0 when every check passes, 1 when a check fails (the
//! witness is in the report), 2 on usage or internal errors.

mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dskv_core::dshuffle::{is_ds, poisson};
use dskv_core::group::{exp_odot, exp_tangential, group_shuffle_check, group_stuffle_check, thm42_check};
use dskv_core::kv::thm11_image;
use dskv_core::lie::{lyndon_basis, random_lie};
use dskv_core::mould::{self, Mould};
use dskv_core::rational::format_q;
use dskv_core::{Error, Poly};
use serde_json::{json, Value};
use suites::{Ctx, Suite, Verdict};

const MAX_WEIGHT: usize = 12;

#[derive(Parser)]
#[command(name = "dskv", version, about = "Double shuffle and Kashiwara-Vergne workbench")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run redundant cross-checks (f_* stuffle form, shuffle Lie criterion).
    #[arg(long, global = true)]
    strict: bool,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Truncation degree for group-level computations.
    #[arg(long, global = true, env = "DSKV_TRUNCATE", default_value_t = 12)]
    truncate: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct WeightArgs {
    /// Single weight.
    #[arg(long, conflicts_with = "weights")]
    weight: Option<usize>,
    /// Inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    weights: Option<(usize, usize)>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Basis of ds in one weight.
    Basis {
        #[arg(long)]
        weight: usize,
    },
    /// Run a named suite over a range of weights.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        range: WeightArgs,
        /// Random Lie elements per weight, for the suites that use them.
        #[arg(long, default_value_t = 20)]
        samples: u64,
    },
    /// Image of the ds basis under the map to krv.
    Map {
        #[arg(long)]
        weight: usize,
    },
    /// Poisson bracket of the ds bases in two weights.
    Bracket { w1: usize, w2: usize },
    /// Moulds of ds elements and the appendix checks.
    Mould {
        #[arg(value_enum)]
        check: MouldCheck,
        #[arg(long)]
        weight: usize,
    },
    /// exp of ds elements in both pictures, with the group checks.
    Exp {
        #[arg(long)]
        weight: usize,
    },
    /// List suite names.
    Suites,
}

#[derive(Clone, Copy, ValueEnum)]
enum MouldCheck {
    Ma,
    Vimo,
    #[value(name = "lemmaA2")]
    LemmaA2,
    Shift,
    Negation,
    #[value(name = "ecalleA8")]
    EcalleA8,
    #[value(name = "propA3")]
    PropA3,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad lower bound in {s:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad upper bound in {s:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

/// What a command hands back for rendering.
struct Outcome {
    parameters: Value,
    verdicts: Vec<Verdict>,
    payload: Value,
    text: Vec<String>,
}

enum Failure {
    Usage(String),
    Internal(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Internal(e)
    }
}

type Run = Result<Outcome, Failure>;

fn check_weight(n: usize) -> Result<usize, Failure> {
    if !(3..=MAX_WEIGHT).contains(&n) {
        return Err(Failure::Usage(format!("weight {n} outside 3..{MAX_WEIGHT}")));
    }
    Ok(n)
}

fn verdict(check: &str, weight: usize, cases: usize, pass: bool, witness: Option<Value>) -> Verdict {
    Verdict { check: check.into(), weight, cases, pass, witness }
}

fn cmd_basis(ctx: &Ctx, n: usize) -> Run {
    let r = ctx.basis(check_weight(n)?)?;
    let mut text = vec![format!("weight {n}: dimension {}", r.dimension)];
    for (i, f) in r.basis.iter().enumerate() {
        text.push(format!("  [{}] {}", i + 1, f.to_text()));
    }
    let v = verdict("certified", n, r.dimension, r.all_certified(), None);
    Ok(Outcome { parameters: json!({"weight": n}), verdicts: vec![v], payload: serde_json::to_value(&r).unwrap(), text })
}

fn cmd_verify(ctx: &Ctx, suite: Suite, range: &WeightArgs) -> Run {
    let (a, b) = match (range.weight, range.weights) {
        (Some(w), None) => (w, w),
        (None, Some(r)) => r,
        (None, None) => (3, 5),
        (Some(_), Some(_)) => unreachable!("clap rejects both"),
    };
    check_weight(a)?;
    check_weight(b)?;
    let mut verdicts = Vec::new();
    for n in a..=b {
        verdicts.push(suites::run(suite, n, ctx)?);
    }
    let text = verdicts.iter().map(|v| format!("weight {}: {} cases", v.weight, v.cases)).collect();
    Ok(Outcome {
        parameters: json!({"suite": suite.name(), "weights": [a, b], "samples": ctx.samples}),
        verdicts,
        payload: Value::Null,
        text,
    })
}

fn cmd_map(ctx: &Ctx, n: usize) -> Run {
    let r = ctx.basis(check_weight(n)?)?;
    let mut images = Vec::new();
    let mut text = Vec::new();
    let mut failure = None;
    for f in &r.basis {
        match thm11_image(f) {
            Ok(img) => {
                text.push(format!("f~ = {}", f.to_text()));
                text.push(format!("  F = {}", img.derivation.f.to_text()));
                text.push(format!("  G = {}", img.derivation.g.to_text()));
                text.push(format!("  A = {}, push constant = {}", format_q(&img.trace_a), format_q(&img.push_constant)));
                images.push(json!({
                    "input": f.to_json(),
                    "derivation": img.derivation.to_json(),
                    "traceA": format_q(&img.trace_a),
                    "pushConstant": format_q(&img.push_constant),
                }));
            }
            Err(Error::CheckFailed(why)) => failure = Some(json!({"input": f.to_json(), "detail": why})),
            Err(e) => return Err(e.into()),
        }
    }
    let v = verdict("thm11", n, r.dimension, failure.is_none(), failure);
    Ok(Outcome { parameters: json!({"weight": n}), verdicts: vec![v], payload: json!({"images": images}), text })
}

fn cmd_bracket(ctx: &Ctx, w1: usize, w2: usize) -> Run {
    check_weight(w1)?;
    check_weight(w2)?;
    if w1 + w2 > MAX_WEIGHT {
        return Err(Failure::Usage(format!("w1 + w2 = {} exceeds {MAX_WEIGHT}", w1 + w2)));
    }
    let (a, b) = (ctx.basis(w1)?, ctx.basis(w2)?);
    let n = w1 + w2;
    let mut brackets = Vec::new();
    let mut text = Vec::new();
    let (mut in_ds, mut compat) = (None, None);
    for f in &a.basis {
        for g in &b.basis {
            let p = poisson(f, g);
            text.push(format!("{{f, g}} = {}", p.to_text()));
            if !p.is_zero() {
                if in_ds.is_none() && !is_ds(&p)? {
                    in_ds = Some(p.to_json());
                }
                let (df, dg, dp) = (thm11_image(f)?.derivation, thm11_image(g)?.derivation, thm11_image(&p)?.derivation);
                let br = df.bracket(&dg);
                if compat.is_none() && (br.f != dp.f || br.g != dp.g) {
                    compat = Some(json!({"bracket": p.to_json()}));
                }
            }
            brackets.push(json!({"f": f.to_json(), "g": g.to_json(), "bracket": p.to_json()}));
        }
    }
    let cases = a.basis.len() * b.basis.len();
    let verdicts = vec![
        verdict("in_ds", n, cases, in_ds.is_none(), in_ds),
        verdict("derivation_bracket", n, cases, compat.is_none(), compat),
    ];
    Ok(Outcome { parameters: json!({"w1": w1, "w2": w2}), verdicts, payload: json!({"brackets": brackets}), text })
}

fn mould_text(m: &Mould, label: &str) -> Vec<String> {
    m.depths().map(|r| format!("  {label}^{r} = {}", m.render(r))).collect()
}

fn cmd_mould(ctx: &Ctx, check: MouldCheck, n: usize) -> Run {
    let r = ctx.basis(check_weight(n)?)?;
    let mut text = Vec::new();
    let params = json!({"weight": n});
    let list = |f: fn(&Poly) -> Mould, label: &str, text: &mut Vec<String>| -> Value {
        let out: Vec<Value> = r
            .basis
            .iter()
            .map(|p| {
                let m = f(p);
                text.push(format!("f~ = {}", p.to_text()));
                text.extend(mould_text(&m, label));
                m.to_json()
            })
            .collect();
        Value::Array(out)
    };
    let (verdicts, payload) = match check {
        MouldCheck::Ma => {
            let p = list(mould::ma_from_poly, "ma", &mut text);
            (vec![verdict("homogeneous", n, r.dimension, r.basis.iter().all(|f| mould::ma_from_poly(f).is_homogeneous(n)), None)], p)
        }
        MouldCheck::Vimo => (vec![], list(mould::vimo_from_poly, "vimo", &mut text)),
        MouldCheck::LemmaA2 => {
            let v = suites::run(Suite::LemmaA2, n, ctx)?;
            text.push(format!("{} Lyndon elements", v.cases));
            (vec![v], Value::Null)
        }
        MouldCheck::Shift | MouldCheck::Negation => {
            let mut inputs: Vec<Poly> = lyndon_basis(n).expansions().cloned().collect();
            inputs.extend((0..ctx.samples).map(|k| random_lie(n, ctx.seed.wrapping_add(k))));
            let (name, f): (&str, fn(&Poly) -> dskv_core::Result<bool>) = match check {
                MouldCheck::Shift => ("vimo_shift", mould::vimo_shift_check),
                _ => ("vimo_negation", mould::vimo_negation_check),
            };
            let mut witness = None;
            for p in &inputs {
                if !f(p)? {
                    witness = Some(p.to_json());
                    break;
                }
            }
            text.push(format!("{} elements", inputs.len()));
            (vec![verdict(name, n, inputs.len(), witness.is_none(), witness)], Value::Null)
        }
        MouldCheck::EcalleA8 => {
            let mut reports = Vec::new();
            let mut witness = None;
            for f in &r.basis {
                let rep = mould::ecalle_a8_report(f)?;
                for d in &rep.depths {
                    text.push(format!(
                        "  r={}: identity {}, swap teru = {}, other sign = {} [{}]",
                        d.r,
                        if d.identity { "holds" } else { "FAILS" },
                        d.closed,
                        d.minus_form,
                        if d.minus_form_agrees { "agrees" } else { "differs" },
                    ));
                }
                if witness.is_none() && !rep.holds() {
                    witness = Some(json!({"input": f.to_json(), "report": rep}));
                }
                reports.push(serde_json::to_value(&rep).unwrap());
            }
            if r.basis.is_empty() {
                text.push(format!("ds_{n} = 0: nothing to check"));
            }
            (vec![verdict("ecalleA8", n, r.dimension, witness.is_none(), witness)], Value::Array(reports))
        }
        MouldCheck::PropA3 => {
            let v = suites::run(Suite::PropA3, n, ctx)?;
            text.push(format!("{} elements", v.cases));
            (vec![v], Value::Null)
        }
    };
    Ok(Outcome { parameters: params, verdicts, payload, text })
}

fn cmd_exp(ctx: &Ctx, n: usize) -> Run {
    let r = ctx.basis(check_weight(n)?)?;
    let t = ctx.truncate;
    if t < n {
        return Err(Failure::Usage(format!("truncation {t} below weight {n}")));
    }
    let mut verdicts = Vec::new();
    let mut payload = Vec::new();
    let mut text = Vec::new();
    for f in &r.basis {
        let phi = exp_odot(f, t)?;
        let sh = group_shuffle_check(&phi);
        let st = group_stuffle_check(&phi);
        let rep = thm42_check(f, t)?;
        let aut = exp_tangential(&thm11_image(f)?.derivation, t)?;
        text.push(format!("f~ = {}", f.to_text()));
        for d in phi.support_degrees() {
            text.push(format!("  exp(f~) degree {d}: {} terms", phi.component(d).len()));
        }
        verdicts.push(verdict("ds_shape", n, 1, phi.has_ds_shape(), None));
        verdicts.push(verdict("group49", n, sh.pairs, sh.ok(), sh.failure.as_ref().map(|x| serde_json::to_value(x).unwrap())));
        verdicts.push(verdict("group410", n, st.pairs, st.ok(), st.failure.as_ref().map(|x| serde_json::to_value(x).unwrap())));
        verdicts.push(verdict("fixes_x_plus_y", n, 1, rep.fixes_x_plus_y, None));
        verdicts.push(verdict("thm42", n, 1, rep.commutes, None));
        payload.push(json!({"input": f.to_json(), "exp_odot": phi.to_json(), "exp_derivation": aut.to_json()}));
    }
    if r.basis.is_empty() {
        text.push(format!("ds_{n} = 0: nothing to exponentiate"));
    }
    Ok(Outcome { parameters: json!({"weight": n, "truncate": t}), verdicts, payload: Value::Array(payload), text })
}

fn cmd_suites() -> Run {
    let names = suites::names();
    Ok(Outcome {
        parameters: json!({}),
        verdicts: vec![],
        payload: json!(names),
        text: names.iter().map(|s| s.to_string()).collect(),
    })
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Basis { .. } => "basis",
        Cmd::Verify { .. } => "verify",
        Cmd::Map { .. } => "map",
        Cmd::Bracket { .. } => "bracket",
        Cmd::Mould { .. } => "mould",
        Cmd::Exp { .. } => "exp",
        Cmd::Suites => "suites",
    }
}

fn render(cli: &Cli, name: &str, out: &Outcome, millis: f64) -> String {
    let pass = out.verdicts.iter().all(|v| v.pass);
    match cli.format {
        Format::Json => {
            let mut report = json!({
                "command": name,
                "parameters": out.parameters,
                "seed": cli.seed,
                "strict": cli.strict,
                "version": env!("CARGO_PKG_VERSION"),
                "pass": pass,
                "verdicts": out.verdicts,
                "payload": out.payload,
            });
            if cli.timings {
                report["timings_ms"] = json!({"total": millis});
            }
            serde_json::to_string_pretty(&report).unwrap() + "\n"
        }
        Format::Text => {
            let mut s = format!("dskv {name} {}\n", out.parameters);
            for line in &out.text {
                s += line;
                s.push('\n');
            }
            for v in &out.verdicts {
                s += &format!("{} {} weight {} ({} cases)\n", if v.pass { "PASS" } else { "FAIL" }, v.check, v.weight, v.cases);
                if let Some(w) = &v.witness {
                    s += &format!("  witness: {w}\n");
                }
            }
            if cli.timings {
                s += &format!("time {millis:.1} ms\n");
            }
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let samples = match &cli.cmd {
        Cmd::Verify { samples, .. } => *samples,
        _ => 20,
    };
    let ctx = Ctx { seed: cli.seed, samples, truncate: cli.truncate, strict: cli.strict };
    let start = Instant::now();
    let result = match &cli.cmd {
        Cmd::Basis { weight } => cmd_basis(&ctx, *weight),
        Cmd::Verify { suite, range, .. } => cmd_verify(&ctx, *suite, range),
        Cmd::Map { weight } => cmd_map(&ctx, *weight),
        Cmd::Bracket { w1, w2 } => cmd_bracket(&ctx, *w1, *w2),
        Cmd::Mould { check, weight } => cmd_mould(&ctx, *check, *weight),
        Cmd::Exp { weight } => cmd_exp(&ctx, *weight),
        Cmd::Suites => cmd_suites(),
    };
    let out = match result {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = render(&cli, command_name(&cli.cmd), &out, start.elapsed().as_secs_f64() * 1e3);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if out.verdicts.iter().all(|v| v.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
