//! The `goursat` command line.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::abnormal::{self, cone_report, is_rigid_direction};
use crate::contact::{self, ContactMap3};
use crate::flags::{self, dual, growth_vector, FlagReport};
use crate::krforms::{self, build, explicit_form, KRWord};
use crate::sigtype::{self, STWord};
use crate::suite::{self, parse_growth, SuiteOptions};
use crate::symcore::rational::{fmt_rational, parse_rational};
use crate::symcore::{origin, PolyVF, QPoint};
use crate::trailer::{self, TrailerConfig};
use crate::vfdsl::{self, print_point, print_vector_field};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "goursat", version, about = "Exact invariants of Goursat structures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Kumpera-Ruiz normal forms.
    #[command(subcommand)]
    Kr(KrCmd),
    /// Growth vector from a word, a singularity type, or a field pair file.
    Growth(GrowthArgs),
    /// Singularity type from a word, a growth vector, or trailer angles.
    Sigtype(SigtypeArgs),
    /// Jacquard language J_n.
    Jacquard(JacquardArgs),
    /// Abnormal cone A^(i) at a point.
    Abnormal(AbnormalArgs),
    /// Rigidity of a direction, or rigid motions of a trailer.
    Rigid(RigidArgs),
    /// n-trailer charts: conversion to and from KR words.
    #[command(subcommand)]
    Trailer(TrailerCmd),
    /// Contact transformations and their prolongations.
    #[command(subcommand)]
    Contact(ContactCmd),
    /// Run a verification suite: consistency, trailer, contact, abnormal, catalog.
    Suite(SuiteArgs),
}

#[derive(Args, Debug)]
struct WordArg {
    /// KR word such as `R0.S.R1`.
    #[arg(long)]
    word: String,
}

#[derive(Subcommand, Debug)]
enum KrCmd {
    Build {
        #[command(flatten)]
        w: WordArg,
        #[arg(long)]
        json: bool,
    },
    Explicit {
        #[command(flatten)]
        w: WordArg,
        #[arg(long)]
        json: bool,
    },
    Catalog {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct GrowthArgs {
    #[arg(long, conflicts_with_all = ["sigtype", "file"])]
    word: Option<String>,
    #[arg(long, conflicts_with = "file")]
    sigtype: Option<String>,
    /// Two vector fields in DSL form, each starting with `dim n;`.
    #[arg(long)]
    file: Option<std::path::PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    point: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SigtypeArgs {
    #[arg(long, conflicts_with_all = ["growth", "angles"])]
    word: Option<String>,
    #[arg(long, conflicts_with = "angles")]
    growth: Option<String>,
    #[arg(long)]
    angles: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct JacquardArgs {
    /// Print card(J_n).
    #[arg(long, conflicts_with = "list")]
    count: Option<usize>,
    /// Print the words of J_n.
    #[arg(long)]
    list: Option<usize>,
}

#[derive(Args, Debug)]
struct AbnormalArgs {
    #[command(flatten)]
    w: WordArg,
    #[arg(long, default_value_t = 0)]
    level: usize,
    #[arg(long)]
    point: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RigidArgs {
    #[arg(long, requires = "direction", conflicts_with = "angles")]
    word: Option<String>,
    #[arg(long)]
    direction: Option<String>,
    #[arg(long)]
    point: Option<String>,
    #[arg(long)]
    angles: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum TrailerCmd {
    /// Convert a configuration `xi1 xi2 th0 .. thn` to KR coordinates.
    ToKr {
        #[arg(long)]
        angles: String,
        #[arg(long)]
        json: bool,
    },
    /// A configuration realizing a KR word at a point.
    FromKr {
        #[command(flatten)]
        w: WordArg,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Singularity type read off the angles.
    Sigtype {
        #[arg(long)]
        angles: String,
    },
    /// Check the converted frame against the trailer fields at perturbed samples.
    Verify {
        #[arg(long)]
        angles: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct MapArg {
    /// Contact map `dim 3; e1; e2; e3` (default: identity).
    #[arg(long)]
    map: Option<String>,
}

#[derive(Subcommand, Debug)]
enum ContactCmd {
    /// Solve for the contact multipliers of a first-order map.
    Certify {
        #[command(flatten)]
        m: MapArg,
        #[command(flatten)]
        w: WordArg,
        #[arg(long)]
        json: bool,
    },
    /// Prolong a map along a KR word and report the target word.
    Prolong {
        #[command(flatten)]
        m: MapArg,
        #[command(flatten)]
        w: WordArg,
        #[arg(long)]
        json: bool,
    },
    /// Invariance of the R9 modulus under a base map.
    R9 {
        #[command(flatten)]
        m: MapArg,
        #[arg(long)]
        json: bool,
    },
    /// Invariance of the R11 modulus, with the intermediate values.
    R11 {
        #[command(flatten)]
        m: MapArg,
        #[arg(long, default_value = "0")]
        c11: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct SuiteArgs {
    name: String,
    #[arg(long, default_value_t = 8)]
    max_dim: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

/// Runs with process stdout/stderr; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Exit code 0 on success, 1 on a domain error, 2 on a usage error.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(cli.cmd) {
        Ok((text, ok)) => {
            let _ = write!(out, "{text}");
            if ok {
                0
            } else {
                1
            }
        }
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}\n\nrun `goursat --help` for the grammar");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

type Outcome = Result<(String, bool), CliError>;

fn line(s: impl std::fmt::Display) -> Outcome {
    Ok((format!("{s}\n"), true))
}

fn json<T: Serialize>(v: &T) -> Outcome {
    let s = serde_json::to_string_pretty(v).map_err(domain)?;
    line(s)
}

fn parse_word(s: &str) -> Result<KRWord, CliError> {
    s.parse().map_err(domain)
}

fn parse_point_for(s: Option<&str>, n: usize) -> Result<QPoint, CliError> {
    match s {
        None => Ok(origin(n)),
        Some(t) => {
            let p = vfdsl::parse_point(t).map_err(domain)?;
            if p.len() != n {
                return Err(CliError::Domain(format!("point has {} coordinates, expected {n}", p.len())));
            }
            Ok(p)
        }
    }
}

fn parse_angles(s: &str) -> Result<TrailerConfig, CliError> {
    s.replace(',', " ").parse().map_err(domain)
}

fn parse_map(m: &MapArg) -> Result<ContactMap3, CliError> {
    match &m.map {
        None => Ok(contact::identity_base()),
        Some(t) => ContactMap3::parse(t).map_err(domain),
    }
}

/// Splits a file into vector-field documents, each beginning with `dim`.
pub fn parse_pair_file(text: &str) -> Result<[PolyVF; 2], CliError> {
    let mut docs: Vec<String> = Vec::new();
    for raw in text.lines() {
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        if l.starts_with("dim") || docs.is_empty() {
            docs.push(l.to_string());
        } else {
            let last = docs.last_mut().expect("nonempty");
            last.push(' ');
            last.push_str(l);
        }
    }
    if docs.len() != 2 {
        return Err(CliError::Domain(format!("expected 2 vector fields, found {}", docs.len())));
    }
    let mut fields = Vec::new();
    for d in &docs {
        let f = vfdsl::parse_vector_field(d).map_err(domain)?;
        fields.push(
            f.into_poly()
                .ok_or_else(|| CliError::Domain("flag computations need polynomial fields".into()))?,
        );
    }
    let g = fields.pop().expect("two");
    let f = fields.pop().expect("two");
    if f.dim() != g.dim() {
        return Err(CliError::Domain("fields have different dimensions".into()));
    }
    Ok([f, g])
}

fn dispatch(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Kr(k) => kr(k),
        Cmd::Growth(a) => growth(a),
        Cmd::Sigtype(a) => sigtype_cmd(a),
        Cmd::Jacquard(a) => jacquard(a),
        Cmd::Abnormal(a) => {
            let w = parse_word(&a.w.word)?;
            let p = parse_point_for(a.point.as_deref(), w.dim())?;
            if a.json {
                json(&cone_report(&w, a.level, &p).map_err(domain)?)
            } else {
                line(abnormal::abnormal_cone(&w, a.level, &p).map_err(domain)?.to_text())
            }
        }
        Cmd::Rigid(a) => rigid(a),
        Cmd::Trailer(t) => trailer_cmd(t),
        Cmd::Contact(c) => contact_cmd(c),
        Cmd::Suite(a) => {
            let opts = SuiteOptions {
                max_dim: a.max_dim,
                seed: a.seed,
                tol: a.tol,
            };
            let Some(r) = suite::run_suite(&a.name, &opts) else {
                return Err(CliError::Usage(format!(
                    "unknown suite `{}`; expected one of {}",
                    a.name,
                    suite::SUITES.join(", ")
                )));
            };
            let text = if a.json {
                serde_json::to_string_pretty(&r).map_err(domain)? + "\n"
            } else {
                r.to_text()
            };
            Ok((text, r.pass))
        }
    }
}

fn kr(k: KrCmd) -> Outcome {
    match k {
        KrCmd::Build { w, json: j } => {
            let sys = build(&parse_word(&w.word)?);
            if j {
                json(&sys.to_json())
            } else {
                line(format!("{}\n{}", print_vector_field(&sys.f1), print_vector_field(&sys.f2)))
            }
        }
        KrCmd::Explicit { w, json: j } => {
            let e = explicit_form(&parse_word(&w.word)?).map_err(domain)?;
            if j {
                json(&e)
            } else {
                let blocks: Vec<String> = e
                    .c
                    .iter()
                    .map(|b| b.iter().map(fmt_rational).collect::<Vec<_>>().join(","))
                    .collect();
                line(format!(
                    "n={} m={} k={:?} c=[{}]{}\n{}",
                    e.n,
                    e.m,
                    e.k,
                    blocks.join(" | "),
                    if e.normalized { " (leading S normalized)" } else { "" },
                    print_vector_field(&e.expand())
                ))
            }
        }
        KrCmd::Catalog { dim, json: j } => {
            let entries = krforms::catalog(dim).map_err(domain)?;
            #[derive(Serialize)]
            struct Entry {
                name: &'static str,
                word: String,
                growth: String,
                sigtype: String,
            }
            let rows: Vec<Entry> = entries
                .into_iter()
                .map(|(name, w)| {
                    let g = growth_vector(&build(&w).pair(), &origin(w.dim()))
                        .map(|g| g.to_string())
                        .unwrap_or_default();
                    let st = sigtype::delta_of_word(&w).map(|s| s.to_string()).unwrap_or_default();
                    Entry {
                        name,
                        word: w.to_string(),
                        growth: g,
                        sigtype: st,
                    }
                })
                .collect();
            if j {
                json(&rows)
            } else {
                let t: Vec<String> = rows
                    .iter()
                    .map(|r| format!("{:<14} {:<10} ({}) {}", r.name, r.word, r.growth, r.sigtype))
                    .collect();
                line(t.join("\n"))
            }
        }
    }
}

fn growth(a: GrowthArgs) -> Outcome {
    let (pair, label) = match (&a.word, &a.sigtype, &a.file) {
        (_, Some(st), _) => {
            let st: STWord = st.parse().map_err(domain)?;
            let n = a.dim.unwrap_or(st.len() + 3);
            let g = sigtype::growth_from_sigtype(&st, n).map_err(domain)?;
            return if a.json { json(&g) } else { line(g) };
        }
        (Some(w), _, _) => {
            let w = parse_word(w)?;
            (build(&w).pair(), w.to_string())
        }
        (_, _, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            (parse_pair_file(&text)?, path.display().to_string())
        }
        _ => return Err(CliError::Usage("growth needs --word, --sigtype or --file".into())),
    };
    let n = pair[0].dim();
    if let Some(d) = a.dim {
        if d != n {
            return Err(CliError::Domain(format!("--dim {d} but the structure lives on R^{n}")));
        }
    }
    let p = parse_point_for(a.point.as_deref(), n)?;
    let g = growth_vector(&pair, &p).map_err(domain)?;
    if a.json {
        let report = FlagReport {
            word: label,
            point: print_point(&p),
            dual: dual(&g).entries().to_vec(),
            degree: g.degree(),
            murray_regular: flags::murray_regular(&pair, &p),
            growth: g.dims().to_vec(),
        };
        json(&report)
    } else {
        line(g)
    }
}

fn sigtype_cmd(a: SigtypeArgs) -> Outcome {
    let st = match (&a.word, &a.growth, &a.angles) {
        (Some(w), _, _) => sigtype::delta_of_word(&parse_word(w)?).map_err(domain)?,
        (_, Some(g), _) => {
            let g = parse_growth(g).ok_or_else(|| CliError::Domain(format!("not a growth vector: {g}")))?;
            sigtype::sigtype_from_growth(&g).map_err(domain)?
        }
        (_, _, Some(t)) => trailer::delta_trailer(&parse_angles(t)?).map_err(domain)?,
        _ => return Err(CliError::Usage("sigtype needs --word, --growth or --angles".into())),
    };
    if a.json {
        json(&serde_json::json!({ "sigtype": st, "jacquard": st.is_jacquard() }))
    } else {
        line(st)
    }
}

fn jacquard(a: JacquardArgs) -> Outcome {
    match (a.count, a.list) {
        (Some(n), _) => line(sigtype::jacquard_count(n)),
        (_, Some(n)) => {
            let words: Vec<String> = sigtype::jacquard_enum(n).iter().map(|w| w.to_string()).collect();
            line(words.join("\n"))
        }
        _ => Err(CliError::Usage("jacquard needs --count N or --list N".into())),
    }
}

fn rigid(a: RigidArgs) -> Outcome {
    if let Some(t) = &a.angles {
        let r = abnormal::trailer_rigid_classify(&parse_angles(t)?).map_err(domain)?;
        return if a.json {
            json(&r)
        } else {
            line(format!("{} rigid motions: {}", r.sigtype, r.generators.join(", ")))
        };
    }
    let (Some(w), Some(d)) = (&a.word, &a.direction) else {
        return Err(CliError::Usage("rigid needs --word with --direction, or --angles".into()));
    };
    let w = parse_word(w)?;
    let p = parse_point_for(a.point.as_deref(), w.dim())?;
    let v = parse_point_for(Some(d), w.dim())?;
    let r = is_rigid_direction(&w, &p, &v).map_err(domain)?;
    if a.json {
        json(&r)
    } else {
        line(format!("{} ({})", if r.rigid { "rigid" } else { "not rigid" }, r.reason))
    }
}

fn trailer_cmd(t: TrailerCmd) -> Outcome {
    match t {
        TrailerCmd::ToKr { angles, json: j } => {
            let c = parse_angles(&angles)?;
            let conv = trailer::trailer_to_kr(&c).map_err(domain)?;
            let names = |i: usize| crate::trailer::trig::trailer_var_name(i);
            let comps: Vec<String> = conv.chart.phi.iter().map(|f| f.to_text_with(&names)).collect();
            let x: Vec<String> = conv.centered(&conv.x_at_p).iter().map(|v| format!("{v:.12}")).collect();
            if j {
                json(&serde_json::json!({
                    "word": conv.word.to_string(),
                    "swapped_base": conv.chart.swapped_base,
                    "phi": comps,
                    "x": x,
                }))
            } else {
                let mut s = format!("word {}\n", conv.word);
                for (k, c) in comps.iter().enumerate() {
                    s.push_str(&format!("x{} = {c}\n", k + 1));
                }
                s.push_str(&format!("at p: ({})", x.join(", ")));
                line(s)
            }
        }
        TrailerCmd::FromKr { w, point, json: j } => {
            let w = parse_word(&w.word)?;
            let target = point.as_deref().map(|p| parse_point_for(Some(p), w.dim())).transpose()?;
            let c = trailer::kr_to_trailer(&w, target.as_deref()).map_err(domain)?;
            if j {
                json(&c)
            } else {
                line(c)
            }
        }
        TrailerCmd::Sigtype { angles } => line(trailer::delta_trailer(&parse_angles(&angles)?).map_err(domain)?),
        TrailerCmd::Verify {
            angles,
            tol,
            seed,
            samples,
            json: j,
        } => {
            let c = parse_angles(&angles)?;
            let conv = trailer::trailer_to_kr(&c).map_err(domain)?;
            let r = trailer::verify_conversion(&c, &conv, samples, tol, seed);
            let text = if j {
                serde_json::to_string_pretty(&r).map_err(domain)? + "\n"
            } else {
                format!(
                    "{} word {} residual {:.3e} over {} samples\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.word,
                    r.residual_max,
                    r.samples
                )
            };
            Ok((text, r.pass))
        }
    }
}

fn contact_cmd(c: ContactCmd) -> Outcome {
    match c {
        ContactCmd::Certify { m, w, json: j } => {
            let base = parse_map(&m)?;
            let w = parse_word(&w.word)?;
            let r = contact::certify_report(&base, &w).map_err(domain)?;
            let text = if j {
                serde_json::to_string_pretty(&r).map_err(domain)? + "\n"
            } else {
                let ct: Vec<String> = r.ctilde.iter().map(|(k, v)| format!("c~{k}={v}")).collect();
                format!("{} {}\n", if r.pass { "PASS" } else { "FAIL" }, ct.join(" "))
            };
            Ok((text, r.pass))
        }
        ContactCmd::Prolong { m, w, json: j } => {
            let base = parse_map(&m)?;
            let w = parse_word(&w.word)?;
            let p = contact::prolong(&base, &w).map_err(domain)?;
            let comps: Vec<String> = p.phi.iter().map(|f| f.to_text()).collect();
            if j {
                let mult: Vec<serde_json::Value> = (3..=p.dim)
                    .map(|i| {
                        let l = p.level(i);
                        serde_json::json!({
                            "level": i,
                            "nu": l.nu.to_text(),
                            "lambda": l.lambda.to_text(),
                            "eta": l.eta.to_text(),
                            "mu": l.mu.to_text(),
                        })
                    })
                    .collect();
                json(&serde_json::json!({
                    "target": p.target.to_string(),
                    "phi": comps,
                    "multipliers": mult,
                }))
            } else {
                let mut s = format!("target {}\n", p.target);
                for (k, c) in comps.iter().enumerate() {
                    s.push_str(&format!("Phi{} = {c}\n", k + 1));
                }
                Ok((s, true))
            }
        }
        ContactCmd::R9 { m, json: j } => {
            let v = contact::check_r9(&parse_map(&m)?).map_err(domain)?;
            let s = fmt_rational(&v);
            if j {
                json(&serde_json::json!({ "ctilde": { "9": s }, "pass": v == crate::symcore::q(0) }))
            } else {
                line(s)
            }
        }
        ContactCmd::R11 { m, c11, json: j } => {
            let c = parse_rational(&c11).ok_or_else(|| CliError::Domain(format!("not a rational: {c11}")))?;
            let r = contact::check_r11(&parse_map(&m)?, &c).map_err(domain)?;
            let f = fmt_rational;
            if j {
                json(&serde_json::json!({
                    "ctilde": { "9": f(&r.c9_tilde), "10": f(&r.c10_tilde), "11": f(&r.c11_tilde) },
                    "predicted": r.predicted.iter().map(f).collect::<Vec<_>>(),
                    "pass": r.intermediates_match() && r.implication_holds(),
                }))
            } else {
                line(format!(
                    "c~9={} c~10={} c~11={}",
                    f(&r.c9_tilde),
                    f(&r.c10_tilde),
                    f(&r.c11_tilde)
                ))
            }
        }
    }
}
