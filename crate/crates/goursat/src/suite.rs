//! Named verification suites: each returns one pass/fail line per check.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::Serialize;

use crate::abnormal::abnormal_cone;
use crate::contact::{self, Degree, DEFAULT_DEGREE_CAP};
use crate::flags::{growth_vector_of, GrowthVector};
use crate::krforms::{build, KRWord};
use crate::sigtype::{delta_of_word, growth_from_sigtype, sigtype_from_growth, STWord};
use crate::symcore::{origin, q, qf, RatFn, Rational};
use crate::trailer::{self, TrailerConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
        let tag = if self.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!("{tag} suite {} ({} checks)\n", self.suite, self.checks.len()));
        out
    }
}

pub const SUITES: [&str; 5] = ["consistency", "trailer", "contact", "abnormal", "catalog"];

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub max_dim: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_dim: 8,
            seed: 1,
            tol: 1e-9,
        }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Option<SuiteReport> {
    let checks = match name {
        "consistency" => consistency(opts.max_dim),
        "catalog" => catalog(),
        "trailer" => trailer_checks(opts),
        "contact" => contact_checks(),
        "abnormal" => abnormal_checks(),
        _ => return None,
    };
    Some(SuiteReport::new(name, checks))
}

fn word(s: &str) -> KRWord {
    s.parse().expect("suite words are well formed")
}

/// Growth from brackets against growth from the singularity type.
pub fn growth_agrees(w: &KRWord) -> Result<bool, String> {
    let flag = growth_vector_of(&build(w), &origin(w.dim())).map_err(|e| e.to_string())?;
    let st = delta_of_word(w).map_err(|e| e.to_string())?;
    let pred = growth_from_sigtype(&st, w.dim()).map_err(|e| e.to_string())?;
    Ok(flag == pred)
}

pub fn consistency(max_dim: usize) -> Vec<Check> {
    (4..=max_dim.max(4))
        .map(|n| {
            let words = KRWord::enumerate(n - 3, &[q(0), q(1)]);
            let bad: Vec<String> = words
                .iter()
                .filter(|w| !growth_agrees(w).unwrap_or(false))
                .map(|w| w.to_string())
                .collect();
            let detail = if bad.is_empty() {
                format!("{} words, bracket growth = beta growth", words.len())
            } else {
                format!("mismatch on {}", bad.join(" "))
            };
            Check::new(format!("dim {n}"), bad.is_empty(), detail)
        })
        .collect()
}

/// Figure captions: growth vector, singularity type, sample word.
pub const CAPTIONS: [(&str, &str, &str); 9] = [
    ("2,3", "", ""),
    ("2,3,4", "a0", "R0"),
    ("2,3,4,5", "a0.a0", "R0.R0"),
    ("2,3,4,4,5", "a0.a1", "R0.S"),
    ("2,3,4,5,6", "a0.a0.a0", "R0.R0.R0"),
    ("2,3,4,4,5,5,6", "a0.a0.a1", "R0.R0.S"),
    ("2,3,4,5,5,6", "a0.a1.a0", "R0.S.R1"),
    ("2,3,4,5,5,5,6", "a0.a1.a2", "R0.S.R0"),
    ("2,3,4,4,5,5,5,6", "a0.a1.a1", "R0.S.S"),
];

pub fn parse_growth(s: &str) -> Option<GrowthVector> {
    let dims = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().ok())
        .collect::<Option<Vec<_>>>()?;
    GrowthVector::new(dims).ok()
}

pub fn catalog() -> Vec<Check> {
    CAPTIONS
        .iter()
        .map(|(g, st, w)| {
            let growth = parse_growth(g).expect("caption growth");
            let st: STWord = st.parse().expect("caption type");
            let w = word(w);
            let got = growth_vector_of(&build(&w), &origin(w.dim())).ok();
            let delta = if w.is_empty() {
                Some(STWord::default())
            } else {
                delta_of_word(&w).ok()
            };
            let back = sigtype_from_growth(&growth).ok();
            let pass = got.as_ref() == Some(&growth) && delta.as_ref() == Some(&st) && back.as_ref() == Some(&st);
            let got_text = got.map(|g| g.to_string()).unwrap_or_else(|| "error".into());
            Check::new(
                format!("({g}) ~ {}", if st.is_empty() { "ε".to_string() } else { st.to_string() }),
                pass,
                format!("word '{w}' gives ({got_text})"),
            )
        })
        .collect()
}

/// Configurations `(regular, singular)` for `1..=5` trailers.
pub fn trailer_configs(n: usize) -> (TrailerConfig, TrailerConfig) {
    let reg: Vec<f64> = (0..=n).map(|k| 0.15 + 0.2 * k as f64).collect();
    let mut sing = reg.clone();
    sing[n] = sing[n - 1] + FRAC_PI_2;
    (
        TrailerConfig::new(0.3, -0.2, reg),
        TrailerConfig::new(0.3, -0.2, sing),
    )
}

pub fn trailer_checks(opts: &SuiteOptions) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=5 {
        let (reg, sing) = trailer_configs(n);
        for (label, config) in [("regular", reg), ("singular", sing)] {
            let (pass, detail) = match trailer::trailer_to_kr(&config) {
                Ok(conv) => {
                    let r = trailer::verify_conversion(&config, &conv, 10, opts.tol, opts.seed);
                    (r.pass, format!("word {} residual {:.3e}", r.word, r.residual_max))
                }
                Err(e) => (false, e.to_string()),
            };
            out.push(Check::new(format!("{n}-trailer {label}"), pass, detail));
        }
        let (_, sing) = trailer_configs(n);
        let wrong = trailer::trailer_to_kr_with(&sing, false, &vec![false; n]);
        out.push(Check::new(
            format!("{n}-trailer wrong branch"),
            wrong.is_err(),
            match wrong {
                Err(e) => format!("rejected: {e}"),
                Ok(_) => "accepted".into(),
            },
        ));
    }
    let words = KRWord::enumerate_01(5);
    let bad: Vec<String> = words
        .iter()
        .filter(|w| {
            let ok = trailer::kr_to_trailer(w, None)
                .ok()
                .and_then(|c| trailer::delta_trailer(&c).ok())
                .zip(delta_of_word(w).ok())
                .is_some_and(|(a, b)| a == b);
            !ok
        })
        .map(|w| w.to_string())
        .collect();
    out.push(Check::new(
        "universal model, length <= 5",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} words", words.len())
        } else {
            bad.join(" ")
        },
    ));
    let c = TrailerConfig::new(0.0, 0.0, vec![0.1, 0.5, 0.5 + FRAC_PI_2, 0.5 + FRAC_PI_2 + FRAC_PI_4]);
    let st = trailer::delta_trailer(&c).map(|s| s.to_string()).unwrap_or_default();
    out.push(Check::new("3-trailer a0.a1.a2", st == "a0.a1.a2", st));
    out
}

pub fn degree_table(word: &KRWord, coords: &[usize]) -> Result<Vec<(usize, Degree)>, contact::ContactError> {
    let base = contact::identity_base();
    let s = contact::moduli_setup(&base, word)?;
    coords
        .iter()
        .map(|&k| Ok((k, contact::degree_of(&RatFn::var(word.dim(), k - 1), &s.g, DEFAULT_DEGREE_CAP)?)))
        .collect()
}

/// Name, word, and expected `(coordinate, degree)` pairs.
type DegreeTable = (&'static str, KRWord, Vec<(usize, u32)>);

pub fn contact_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for (name, base) in contact::base_family() {
        let (pass, detail) = match contact::check_r9(&base) {
            Ok(v) => (v == q(0), format!("c~9 = {v}")),
            Err(e) => (false, e.to_string()),
        };
        out.push(Check::new(format!("R9 {name}"), pass, detail));
    }
    let id = contact::identity_base();
    for c in [q(0), q(1), qf(3, 2), q(-2)] {
        let (pass, detail) = match contact::check_r11(&id, &c) {
            Ok(r) => (
                r.c11_tilde == c && r.printed_intermediates_match() && r.intermediates_match(),
                format!("c~9 = {}, c~10 = {}, c~11 = {}", r.c9_tilde, r.c10_tilde, r.c11_tilde),
            ),
            Err(e) => (false, e.to_string()),
        };
        out.push(Check::new(format!("R11 identity c11 = {c}"), pass, detail));
    }
    let tables: [DegreeTable; 2] = [
        ("R9 degrees", contact::r9_word(q(0)), vec![(5, 1), (6, 2), (1, 3), (4, 4)]),
        ("R11 degrees", contact::r11_word(q(0)), vec![(5, 1), (6, 3), (1, 4), (4, 5)]),
    ];
    for (name, w, want) in tables {
        let coords: Vec<usize> = want.iter().map(|(k, _)| *k).collect();
        let (pass, detail) = match degree_table(&w, &coords) {
            Ok(got) => {
                let pass = got.iter().zip(&want).all(|((_, d), (_, e))| *d == Degree::Finite(*e));
                let txt: Vec<String> = got.iter().map(|(k, d)| format!("x{k}->{d}")).collect();
                (pass, txt.join(" "))
            }
            Err(e) => (false, e.to_string()),
        };
        out.push(Check::new(name, pass, detail));
    }
    out
}

fn cone_text(w: &KRWord, i: usize, p: &[Rational]) -> String {
    abnormal_cone(w, i, p)
        .map(|c| c.to_text())
        .unwrap_or_else(|e| e.to_string())
}

pub fn abnormal_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for c7 in ["0", "1"] {
        let w = word(&format!("R0.S.S.R{c7}"));
        let z = origin(7);
        let a0 = cone_text(&w, 0, &z);
        let want0 = if c7 == "0" { "(d/dx7) ∪ (d/dx5)" } else { "(d/dx7)" };
        out.push(Check::new(format!("c7={c7} A(0) at 0"), a0 == want0, a0));
        let a1 = cone_text(&w, 1, &z);
        out.push(Check::new(
            format!("c7={c7} A(1) on L1"),
            a1 == "(d/dx7, d/dx6) ∪ (d/dx7, d/dx5)",
            a1,
        ));
        let a2 = cone_text(&w, 2, &z);
        out.push(Check::new(
            format!("c7={c7} A(2) on L2"),
            a2 == "(d/dx7, d/dx6, d/dx5) ∪ (d/dx7, d/dx6, d/dx4)",
            a2,
        ));
        let k = |i| crate::abnormal::singular_locus(&w, i).map(|l| l.equation).unwrap_or_default();
        let (k0, k2) = (k(0), k(2));
        out.push(Check::new(
            format!("c7={c7} K0, K2"),
            k0 == "x6*x5 = 0" && k2 == "x5 = 0",
            format!("{k0}; {k2}"),
        ));
        let l0 = crate::abnormal::l_locus(&w, 0).ok().flatten().map(|l| l.equation);
        let pass = if c7 == "0" {
            l0.as_deref() == Some("x7 = x6 = 0")
        } else {
            l0.is_none()
        };
        out.push(Check::new(format!("c7={c7} L0"), pass, l0.unwrap_or_else(|| "empty".into())));
    }
    let (u, v) = (word("R0.R0.R0"), word("R0.S.R1"));
    // Abnormal curves of D itself: level 0 only, at 0 and at nearby points.
    let pts = [
        origin(6),
        vec![q(1), q(-1), qf(1, 2), q(0), qf(1, 3), qf(-1, 4)],
        vec![q(0), q(2), q(0), qf(-1, 2), q(0), qf(1, 5)],
    ];
    let same = pts.iter().all(|p| {
        let a = abnormal_cone(&u, 0, p).ok();
        a.is_some() && a == abnormal_cone(&v, 0, p).ok()
    });
    let (du, dv) = (delta_of_word(&u).ok(), delta_of_word(&v).ok());
    out.push(Check::new(
        "not weakly determined (dim 6)",
        same && du.is_some() && du != dv,
        format!(
            "A(0) agrees near 0: {same}; types {} vs {}",
            du.map(|d| d.to_string()).unwrap_or_default(),
            dv.map(|d| d.to_string()).unwrap_or_default()
        ),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        for name in ["catalog", "contact", "abnormal"] {
            let r = run_suite(name, &SuiteOptions::default()).unwrap();
            assert!(r.pass, "{}", r.to_text());
        }
        assert!(run_suite("nope", &SuiteOptions::default()).is_none());
    }

    #[test]
    fn consistency_low_dims() {
        assert!(consistency(6).iter().all(|c| c.pass));
    }
}
