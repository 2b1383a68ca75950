//! The n-trailer system: its vector fields, singular angle sets, singularity
//! type, and conversion to and from Kumpera-Ruiz coordinates.
//!
//! Variables are numbered `0 = xi1`, `1 = xi2`, `2 + k = th_k`. Distances
//! between consecutive axles are 1.

pub mod trig;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::krforms::{build, KRStep, KRWord};
use crate::sigtype::STWord;
use crate::symcore::rational::{snap_f64, to_f64};
use crate::symcore::Rational;
use trig::TrigExpr;

/// Distance below which an angle counts as equal to a critical value.
pub const ANGLE_TOL: f64 = 1e-9;
/// Outside [`ANGLE_TOL`] but inside this band an angle is reported ambiguous.
pub const AMBIGUITY_BAND: f64 = 1e-6;
const SNAP_DEN: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrailerError {
    #[error("angle difference {0} is too close to a critical value to classify")]
    AmbiguousAngle(usize),
    #[error("multiplier vanishes at step {0}")]
    DegenerateMultiplier(usize),
    #[error("bad configuration text: {0}")]
    Parse(String),
    #[error("index out of range: need 0 <= j <= i <= {max}, got i = {i}, j = {j}")]
    IndexRange { i: usize, j: usize, max: i64 },
    #[error("target point has {found} coordinates, expected {expected}")]
    TargetDim { expected: usize, found: usize },
    #[error("branch list has {found} entries, expected {expected}")]
    BranchCount { expected: usize, found: usize },
}

/// Reduces an angle to `(-pi, pi]`.
pub fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Distance from `x` to `target + period * Z`.
fn dist_mod(x: f64, target: f64, period: f64) -> f64 {
    ((x - target + period / 2.0).rem_euclid(period) - period / 2.0).abs()
}

/// `Some(true)` when within tolerance, `Some(false)` when clearly away,
/// `None` inside the ambiguity band.
fn classify(dist: f64) -> Option<bool> {
    if dist <= ANGLE_TOL {
        Some(true)
    } else if dist <= AMBIGUITY_BAND {
        None
    } else {
        Some(false)
    }
}

fn is_singular_angle(d: f64) -> Option<bool> {
    classify(dist_mod(d, FRAC_PI_2, PI))
}

/// A trailer configuration: position of the last axle and the angles
/// `th_0` (last trailer) to `th_n` (the towing robot).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrailerConfig {
    pub xi1: f64,
    pub xi2: f64,
    pub theta: Vec<f64>,
}

impl TrailerConfig {
    pub fn new(xi1: f64, xi2: f64, theta: Vec<f64>) -> Self {
        TrailerConfig {
            xi1,
            xi2,
            theta: theta.into_iter().map(reduce_angle).collect(),
        }
    }

    /// Number of trailers `n`; the configuration space has dimension `n + 3`.
    pub fn trailers(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn coords(&self) -> Vec<f64> {
        let mut v = vec![self.xi1, self.xi2];
        v.extend(&self.theta);
        v
    }

    fn from_coords(v: &[f64]) -> Self {
        TrailerConfig::new(v[0], v[1], v[2..].to_vec())
    }

    /// `th_i - th_{i-1}`, reduced.
    pub fn difference(&self, i: usize) -> f64 {
        reduce_angle(self.theta[i] - self.theta[i - 1])
    }

    /// Axle centers, from the last trailer (`0`) to the robot (`n`).
    pub fn axle_centers(&self) -> Vec<(f64, f64)> {
        let mut c = vec![(self.xi1, self.xi2)];
        for m in 1..self.theta.len() {
            let (x, y) = c[m - 1];
            let t = self.theta[m - 1];
            c.push((x + t.cos(), y + t.sin()));
        }
        c
    }
}

/// Accepts decimals, `[-][k*]pi[/m]`, and sums of these such as `0.5+pi/2`.
pub fn parse_angle(s: &str) -> Option<f64> {
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    // Split at the last sign that is neither leading nor part of an exponent.
    let b = s.as_bytes();
    if let Some(i) = (1..b.len())
        .rev()
        .find(|&i| (b[i] == b'+' || b[i] == b'-') && !matches!(b[i - 1], b'e' | b'E' | b'+' | b'-' | b'*' | b'/'))
    {
        let (l, r) = (parse_angle(&s[..i])?, parse_angle(&s[i + 1..])?);
        let v = if b[i] == b'+' { l + r } else { l - r };
        return v.is_finite().then_some(v);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().ok().filter(|d| *d != 0.0)?),
        None => (body, 1.0),
    };
    let k = match num.strip_suffix("pi")? {
        "" => 1.0,
        pre => pre.strip_suffix('*')?.parse::<f64>().ok()?,
    };
    let v = k * PI / den;
    v.is_finite().then_some(if neg { -v } else { v })
}

impl FromStr for TrailerConfig {
    type Err = TrailerError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let vals = s
            .split_whitespace()
            .map(|t| parse_angle(t).ok_or_else(|| TrailerError::Parse(format!("not a number: `{t}`"))))
            .collect::<Result<Vec<f64>, _>>()?;
        if vals.len() < 3 {
            return Err(TrailerError::Parse("need xi1 xi2 th0 at least".into()));
        }
        if vals.len() > 120 {
            return Err(TrailerError::Parse("too many angles".into()));
        }
        Ok(TrailerConfig::from_coords(&vals))
    }
}

impl fmt::Display for TrailerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A vector field with trigonometric components; component `k` multiplies
/// the derivative in variable `k`.
#[derive(Debug, Clone)]
pub struct TrigVF(pub Vec<TrigExpr>);

impl TrigVF {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn lie_derivative(&self, f: &TrigExpr) -> TrigExpr {
        self.0
            .iter()
            .enumerate()
            .filter(|(k, c)| !c.is_zero() && f.depends_on(*k))
            .fold(TrigExpr::int(0), |acc, (k, c)| acc.add(&c.mul(&f.diff(k))))
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.0.iter().map(|c| c.eval(x)).collect()
    }
}

fn th(k: usize) -> TrigExpr {
    TrigExpr::var(k + 2)
}

fn diff_angle(i: usize) -> TrigExpr {
    th(i).sub(&th(i - 1))
}

fn unit(dim: usize, k: usize) -> TrigVF {
    let mut v = vec![TrigExpr::int(0); dim];
    v[k] = TrigExpr::int(1);
    TrigVF(v)
}

/// `(tau_1^i, tau_2^i)` for every `i <= n`, built inductively.
fn tau_tower(n: usize) -> Vec<(TrigVF, TrigVF)> {
    let mut out = Vec::with_capacity(n + 1);
    let t0 = th(0);
    let mut t2 = vec![t0.cos(), t0.sin(), TrigExpr::int(0)];
    out.push((unit(3, 2), TrigVF(t2.clone())));
    for i in 1..=n {
        let d = diff_angle(i);
        let (s, c) = (d.sin(), d.cos());
        let prev1 = &out[i - 1].0;
        t2 = t2.iter().zip(&prev1.0).map(|(b, a)| s.mul(a).add(&c.mul(b))).collect();
        t2.push(TrigExpr::int(0));
        out.push((unit(i + 3, i + 2), TrigVF(t2.clone())));
    }
    out
}

/// The n-trailer pair on `R^2 x (S^1)^{n+1}`.
pub fn tau(n: usize) -> (TrigVF, TrigVF) {
    tau_tower(n).pop().expect("nonempty")
}

/// The closed form with `pi_i = prod_{j > i} cos(th_j - th_{j-1})`.
pub fn tau_explicit(n: usize) -> (TrigVF, TrigVF) {
    let pi_of = |i: usize| (i + 1..=n).fold(TrigExpr::int(1), |acc, j| acc.mul(&diff_angle(j).cos()));
    let mut t2 = vec![pi_of(0).mul(&th(0).cos()), pi_of(0).mul(&th(0).sin())];
    for i in 0..n {
        t2.push(pi_of(i + 1).mul(&diff_angle(i + 1).sin()));
    }
    t2.push(TrigExpr::int(0));
    (unit(n + 3, n + 2), TrigVF(t2))
}

/// `alpha_1 = {±pi/2}`, `alpha_{i+1} = {atan sin a, atan sin a + pi}`,
/// reduced to `(-pi, pi]` and sorted.
pub fn alpha_set(i: usize) -> Vec<f64> {
    let mut set = vec![-FRAC_PI_2, FRAC_PI_2];
    for _ in 1..i.max(1) {
        let mut next = Vec::new();
        for a in &set {
            let b = a.sin().atan();
            for v in [b, b + PI] {
                let v = reduce_angle(v);
                if !next.iter().any(|w: &f64| dist_mod(*w, v, 2.0 * PI) < 1e-12) {
                    next.push(v);
                }
            }
        }
        set = next;
    }
    set.sort_by(f64::total_cmp);
    set
}

/// Singularity type of the trailer at `config`.
///
/// `w_1 = a0`; `w_i = a1` when `th_i - th_{i-1} = ±pi/2`; `w_i = a_{k+1}`
/// when `w_{i-1} = a_k`, `k >= 1`, and `th_i - th_{i-1} = atan sin(th_{i-1} -
/// th_{i-2})` mod pi (the branch of `alpha_{k+1}` reached from the previous
/// difference); otherwise `a0`.
pub fn delta_trailer(config: &TrailerConfig) -> Result<STWord, TrailerError> {
    let n = config.trailers();
    let mut letters: Vec<u32> = Vec::with_capacity(n);
    for i in 1..=n {
        let d = config.difference(i);
        let singular = is_singular_angle(d).ok_or(TrailerError::AmbiguousAngle(i))?;
        let letter = if i == 1 {
            0
        } else if singular {
            1
        } else {
            let prev = letters[i - 2];
            if prev >= 1 {
                let target = config.difference(i - 1).sin().atan();
                match classify(dist_mod(d, target, PI)) {
                    Some(true) => prev + 1,
                    Some(false) => 0,
                    None => return Err(TrailerError::AmbiguousAngle(i)),
                }
            } else {
                0
            }
        };
        letters.push(letter);
    }
    Ok(STWord::new(letters))
}

/// Symbolic chart `phi` with the multiplier towers of the conversion.
#[derive(Debug, Clone)]
pub struct TrailerChart {
    /// `phi_1, ..., phi_{n+3}` as functions of `(xi, th)`.
    pub phi: Vec<TrigExpr>,
    /// `mu_i, nu_i, eta_i` for `i = 0..=n`.
    pub mu: Vec<TrigExpr>,
    pub nu: Vec<TrigExpr>,
    pub eta: Vec<TrigExpr>,
    /// Branch taken at step `i` (index `i - 1`).
    pub singular: Vec<bool>,
    /// Base chart `(xi2, xi1, cot th0)` instead of `(xi1, xi2, tan th0)`.
    pub swapped_base: bool,
}

impl TrailerChart {
    /// Builds the chart for a prescribed base branch and step branches.
    pub fn build(swapped_base: bool, singular: &[bool]) -> TrailerChart {
        let n = singular.len();
        let tower = tau_tower(n);
        let t0 = th(0);
        let (mut phi, mu0, nu0) = if swapped_base {
            let cot = t0.cos().div(&t0.sin());
            (
                vec![TrigExpr::var(1), TrigExpr::var(0), cot],
                t0.sin(),
                TrigExpr::int(-1).div(&t0.sin().pow(2)),
            )
        } else {
            (
                vec![TrigExpr::var(0), TrigExpr::var(1), t0.tan()],
                t0.cos(),
                TrigExpr::int(1).div(&t0.cos().pow(2)),
            )
        };
        let (mut mu, mut nu, mut eta) = (vec![mu0], vec![nu0], vec![TrigExpr::int(0)]);
        for i in 1..=n {
            let d = diff_angle(i);
            let (s, c) = (d.sin(), d.cos());
            let a = s.mul(&nu[i - 1]).add(&c.mul(&eta[i - 1]));
            let b = c.mul(&mu[i - 1]);
            let (f, m) = if singular[i - 1] { (b.div(&a), a) } else { (a.div(&b), b) };
            let (t1, t2) = &tower[i];
            nu.push(t1.lie_derivative(&f));
            eta.push(t2.lie_derivative(&f));
            mu.push(m);
            phi.push(f);
        }
        TrailerChart {
            phi,
            mu,
            nu,
            eta,
            singular: singular.to_vec(),
            swapped_base,
        }
    }

    pub fn trailers(&self) -> usize {
        self.singular.len()
    }

    /// Fails with the first step whose `mu` or `nu` vanishes at `x`.
    fn check_multipliers(&self, x: &[f64]) -> Result<(), TrailerError> {
        for i in 0..=self.trailers() {
            let (m, v) = (self.mu[i].eval(x), self.nu[i].eval(x));
            if !(m.is_finite() && v.is_finite()) || m.abs() <= ANGLE_TOL || v.abs() <= ANGLE_TOL {
                return Err(TrailerError::DegenerateMultiplier(i));
            }
        }
        Ok(())
    }
}

/// Result of converting a trailer configuration.
#[derive(Debug, Clone)]
pub struct TrailerToKr {
    pub chart: TrailerChart,
    pub word: KRWord,
    /// `phi(p)`, before centering.
    pub x_at_p: Vec<f64>,
    /// Centering offsets: `c_k` at regular coordinates `k >= 4`, else 0.
    pub offsets: Vec<f64>,
}

impl TrailerToKr {
    /// `y = phi - offsets`, the coordinates in which `build(word)` applies.
    pub fn centered(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.offsets).map(|(a, b)| a - b).collect()
    }
}

/// Rational for a chart value: a small-denominator snap when one exists,
/// the exact binary value otherwise.
fn rational_constant(x: f64) -> Rational {
    snap_f64(x, SNAP_DEN, ANGLE_TOL)
        .or_else(|| BigRational::from_float(x))
        .unwrap_or_else(Rational::zero)
}

fn branches_at(config: &TrailerConfig) -> Result<(bool, Vec<bool>), TrailerError> {
    let swapped = classify(dist_mod(config.theta[0], FRAC_PI_2, PI)).ok_or(TrailerError::AmbiguousAngle(0))?;
    let singular = (1..=config.trailers())
        .map(|i| is_singular_angle(config.difference(i)).ok_or(TrailerError::AmbiguousAngle(i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((swapped, singular))
}

/// Converts with the branches the angles at `config` call for.
pub fn trailer_to_kr(config: &TrailerConfig) -> Result<TrailerToKr, TrailerError> {
    let (swapped, singular) = branches_at(config)?;
    trailer_to_kr_with(config, swapped, &singular)
}

/// Converts with prescribed branches; a wrong branch surfaces as
/// `DegenerateMultiplier`.
pub fn trailer_to_kr_with(
    config: &TrailerConfig,
    swapped_base: bool,
    singular: &[bool],
) -> Result<TrailerToKr, TrailerError> {
    if singular.len() != config.trailers() {
        return Err(TrailerError::BranchCount {
            expected: config.trailers(),
            found: singular.len(),
        });
    }
    let chart = TrailerChart::build(swapped_base, singular);
    let p = config.coords();
    chart.check_multipliers(&p)?;
    let x_at_p: Vec<f64> = chart.phi.iter().map(|f| f.eval(&p)).collect();
    let mut steps = Vec::with_capacity(singular.len());
    let mut offsets = vec![0.0; x_at_p.len()];
    for (i, &s) in singular.iter().enumerate() {
        if s {
            steps.push(KRStep::Singular);
        } else {
            let c = rational_constant(x_at_p[i + 3]);
            offsets[i + 3] = to_f64(&c);
            steps.push(KRStep::Regular(c));
        }
    }
    Ok(TrailerToKr {
        chart,
        word: KRWord::new(steps),
        x_at_p,
        offsets,
    })
}

/// A configuration at which the trailer, in the chart of the conversion,
/// sits at the point `target` of the normal form of `word` (default: its
/// center). Singular coordinates of the target are taken as 0.
pub fn kr_to_trailer(word: &KRWord, target: Option<&[Rational]>) -> Result<TrailerConfig, TrailerError> {
    let n = word.len();
    let y: Vec<f64> = match target {
        Some(t) if t.len() != n + 3 => {
            return Err(TrailerError::TargetDim {
                expected: n + 3,
                found: t.len(),
            })
        }
        Some(t) => t.iter().map(to_f64).collect(),
        None => vec![0.0; n + 3],
    };
    let singular: Vec<bool> = word.steps.iter().map(KRStep::is_singular).collect();
    let chart = TrailerChart::build(false, &singular);
    let mut p = vec![0.0; n + 3];
    p[0] = y[0];
    p[1] = y[1];
    p[2] = y[2].atan();
    for i in 1..=n {
        let prev = p[i + 1];
        p[i + 2] = match &word.steps[i - 1] {
            KRStep::Singular => prev + FRAC_PI_2,
            KRStep::Regular(c) => {
                let target = y[i + 2] + to_f64(c);
                let (m, v, e) = (chart.mu[i - 1].eval(&p), chart.nu[i - 1].eval(&p), chart.eta[i - 1].eval(&p));
                ((m * target - e) / v).atan() + prev
            }
        };
    }
    Ok(TrailerConfig::from_coords(&p))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub residual_max: f64,
    /// `(nu_n, eta_n, mu_n)` at the base configuration.
    pub multipliers_at_p: [f64; 3],
    pub word: String,
    pub samples: usize,
    pub failure: Option<String>,
}

/// Checks `phi_*(tau_1) = nu kappa_1` and `phi_*(tau_2) = eta kappa_1 + mu
/// kappa_2` at `config` and `samples - 1` random nearby points.
///
/// Multipliers are fitted by least squares and compared with the symbolic
/// ones; residuals are scaled by `1 + |largest component|`.
pub fn verify_conversion(
    config: &TrailerConfig,
    conv: &TrailerToKr,
    samples: usize,
    tol: f64,
    seed: u64,
) -> VerifyReport {
    let n = conv.chart.trailers();
    let dim = n + 3;
    let (t1, t2) = tau(n);
    let jac: Vec<Vec<TrigExpr>> = conv
        .chart
        .phi
        .iter()
        .map(|f| (0..dim).map(|j| if f.depends_on(j) { f.diff(j) } else { TrigExpr::int(0) }).collect())
        .collect();
    let kr = build(&conv.word);
    let p = config.coords();
    let (nu, eta, mu) = (&conv.chart.nu[n], &conv.chart.eta[n], &conv.chart.mu[n]);
    let at_p = [nu.eval(&p), eta.eval(&p), mu.eval(&p)];
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut residual_max: f64 = 0.0;
    let mut failure = None;
    for k in 0..samples.max(1) {
        let s: Vec<f64> = if k == 0 {
            p.clone()
        } else {
            p.iter().map(|v| v + rng.gen_range(-1e-3..1e-3)).collect()
        };
        if let Err(e) = conv.chart.check_multipliers(&s) {
            failure = Some(e.to_string());
            residual_max = f64::INFINITY;
            break;
        }
        let y = conv.centered(&conv.chart.phi.iter().map(|f| f.eval(&s)).collect::<Vec<_>>());
        let (a1, a2) = (t1.eval(&s), t2.eval(&s));
        let push = |field: &[f64]| -> Vec<f64> {
            jac.iter()
                .map(|row| row.iter().zip(field).map(|(d, f)| if *f == 0.0 { 0.0 } else { d.eval(&s) * f }).sum())
                .collect()
        };
        let (v1, v2) = (push(&a1), push(&a2));
        let k1 = kr.f1.eval_f64(&y);
        let k2 = kr.f2.eval_f64(&y);
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let a = dot(&v1, &k1) / dot(&k1, &k1);
        let (g11, g12, g22) = (dot(&k1, &k1), dot(&k1, &k2), dot(&k2, &k2));
        let (r1, r2) = (dot(&k1, &v2), dot(&k2, &v2));
        let det = g11 * g22 - g12 * g12;
        let b = (r1 * g22 - r2 * g12) / det;
        let m = (g11 * r2 - g12 * r1) / det;
        let scale = 1.0 + v1.iter().chain(&v2).fold(0.0f64, |acc, v| acc.max(v.abs()));
        let mut res: f64 = 0.0;
        for i in 0..dim {
            res = res.max((v1[i] - a * k1[i]).abs());
            res = res.max((v2[i] - b * k1[i] - m * k2[i]).abs());
        }
        res = res
            .max((a - nu.eval(&s)).abs())
            .max((b - eta.eval(&s)).abs())
            .max((m - mu.eval(&s)).abs());
        let res = res / scale;
        if !res.is_finite() {
            residual_max = f64::INFINITY;
            failure = Some("non-finite residual".into());
            break;
        }
        residual_max = residual_max.max(res);
    }
    VerifyReport {
        pass: failure.is_none() && residual_max < tol,
        residual_max,
        multipliers_at_p: at_p,
        word: conv.word.to_string(),
        samples: samples.max(1),
        failure,
    }
}

/// One condition `th_diff - th_{diff-1} ∈ alpha_level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AngleCondition {
    pub diff: usize,
    pub level: usize,
}

impl fmt::Display for AngleCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "th{} - th{} in alpha{}", self.diff, self.diff - 1, self.level)
    }
}

/// Angle conditions cutting out `S_j^(i)` on the n-trailer.
pub fn sji_trailer(n: usize, i: usize, j: usize) -> Result<Vec<AngleCondition>, TrailerError> {
    let max = n as i64 - 2;
    if j > i || i as i64 > max {
        return Err(TrailerError::IndexRange { i, j, max });
    }
    Ok((0..=j)
        .map(|t| AngleCondition {
            diff: n - i + t,
            level: t + 1,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn cfg(theta: &[f64]) -> TrailerConfig {
        TrailerConfig::new(0.3, -0.2, theta.to_vec())
    }

    #[test]
    fn angle_text_forms() {
        let close = |s: &str, v: f64| (parse_angle(s).unwrap() - v).abs() < 1e-15;
        assert!(close("0.25", 0.25));
        assert!(close("-pi/2", -FRAC_PI_2));
        assert!(close("3*pi/4", 3.0 * FRAC_PI_4));
        assert!(close("0.5+pi/2", 0.5 + FRAC_PI_2));
        assert!(close("1e-3-pi", 1e-3 - PI));
        assert!(close("-0.1+pi/4-pi/2", -0.1 + FRAC_PI_4 - FRAC_PI_2));
        for bad in ["", "pi+", "+", "0.5++pi", "x", "pi/0"] {
            assert_eq!(parse_angle(bad), None, "{bad}");
        }
    }

    #[test]
    fn tau_small_cases() {
        let (t1, t2) = tau(0);
        assert_eq!(t1.eval(&[0.0, 0.0, 0.4]), vec![0.0, 0.0, 1.0]);
        let v = t2.eval(&[0.0, 0.0, 0.4]);
        assert!((v[0] - 0.4f64.cos()).abs() < 1e-15 && (v[1] - 0.4f64.sin()).abs() < 1e-15);
        let (_, t2) = tau(1);
        let v = t2.eval(&[0.0, 0.0, 0.4, 0.4]);
        assert!((v[0] - 0.4f64.cos()).abs() < 1e-15 && v[2].abs() < 1e-15);
        let (_, t2) = tau(2);
        let v = t2.eval(&[0.0, 0.0, 0.1, 0.2, 0.2 + FRAC_PI_2]);
        assert!((v[3] - 1.0).abs() < 1e-12);
        assert!(v[0].abs() < 1e-12 && v[1].abs() < 1e-12);
    }

    #[test]
    fn inductive_matches_explicit() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in 0..=4 {
            let (a1, a2) = tau(n);
            let (b1, b2) = tau_explicit(n);
            for _ in 0..20 {
                let x: Vec<f64> = (0..n + 3).map(|_| rng.gen_range(-3.0..3.0)).collect();
                for (u, v) in a2.eval(&x).iter().zip(b2.eval(&x)) {
                    assert!((u - v).abs() < 1e-12);
                }
                assert_eq!(a1.eval(&x), b1.eval(&x));
            }
        }
    }

    #[test]
    fn alpha_sets() {
        assert_eq!(alpha_set(1), vec![-FRAC_PI_2, FRAC_PI_2]);
        let a2 = alpha_set(2);
        let want = [-3.0 * FRAC_PI_4, -FRAC_PI_4, FRAC_PI_4, 3.0 * FRAC_PI_4];
        assert_eq!(a2.len(), 4);
        for (a, b) in a2.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        for i in 2..=12 {
            assert_eq!(alpha_set(i).len(), 4);
        }
    }

    #[test]
    fn singularity_types() {
        let w = |t: &[f64]| delta_trailer(&cfg(t)).unwrap().to_string();
        assert_eq!(w(&[0.1, 0.5, 0.5 + FRAC_PI_2]), "a0.a1");
        assert_eq!(w(&[0.1, 0.5, 0.5 + FRAC_PI_2, 0.5 + FRAC_PI_2 + FRAC_PI_4]), "a0.a1.a2");
        assert_eq!(w(&[0.1, 0.5, 0.5 + FRAC_PI_2, 0.5 + FRAC_PI_2 - FRAC_PI_4]), "a0.a1.a0");
        assert_eq!(w(&[0.1, 0.5, 0.9, 1.4]), "a0.a0.a0");
        assert_eq!(w(&[0.1, 0.1 + FRAC_PI_2]), "a0");
        let bad = cfg(&[0.1, 0.5, 0.5 + FRAC_PI_2 + 1e-7]);
        assert_eq!(delta_trailer(&bad), Err(TrailerError::AmbiguousAngle(2)));
    }

    #[test]
    fn unicycle_charts() {
        let c = trailer_to_kr(&cfg(&[0.0])).unwrap();
        assert!(!c.chart.swapped_base);
        assert_eq!(c.chart.phi[2].to_string(), "tan(th0)");
        assert_eq!(c.chart.mu[0].to_string(), "cos(th0)");
        let c = trailer_to_kr(&cfg(&[FRAC_PI_2])).unwrap();
        assert!(c.chart.swapped_base);
        assert_eq!(c.chart.phi[0].to_string(), "xi2");
        assert_eq!(c.chart.mu[0].to_string(), "sin(th0)");
        assert!(c.word.is_empty());
    }

    #[test]
    fn conversion_verifies() {
        for t in [
            vec![0.2],
            vec![0.2, 0.7],
            vec![0.1, 0.5, 0.5 + FRAC_PI_2],
            vec![FRAC_PI_2, 0.3, 0.3 - FRAC_PI_2, 0.4],
            vec![0.3, 0.6, 0.6 + FRAC_PI_2, 0.6 + FRAC_PI_2 + FRAC_PI_4],
        ] {
            let config = cfg(&t);
            let conv = trailer_to_kr(&config).unwrap();
            let rep = verify_conversion(&config, &conv, 10, 1e-9, 1);
            assert!(rep.pass, "{t:?}: {rep:?}");
        }
    }

    #[test]
    fn wrong_branch_is_degenerate() {
        let config = cfg(&[0.1, 0.5, 0.5 + FRAC_PI_2]);
        assert_eq!(
            trailer_to_kr_with(&config, false, &[false, false]).unwrap_err(),
            TrailerError::DegenerateMultiplier(2)
        );
    }

    #[test]
    fn universal_model() {
        for w in ["R0.S", "R0.S.R0", "R0.S.S.R1", "R1.S.R0.R0"] {
            let word: KRWord = w.parse().unwrap();
            let config = kr_to_trailer(&word, None).unwrap();
            assert_eq!(
                delta_trailer(&config).unwrap(),
                crate::sigtype::delta_of_word(&word).unwrap(),
                "{w}"
            );
            let conv = trailer_to_kr(&config).unwrap();
            assert_eq!(conv.word, word, "{w}");
        }
        let c = kr_to_trailer(&"R0.S".parse().unwrap(), None).unwrap();
        assert!((c.difference(2) - FRAC_PI_2).abs() < 1e-12);
        let c = kr_to_trailer(&KRWord::default(), None).unwrap();
        assert_eq!(c.theta, vec![0.0]);
    }

    #[test]
    fn trailer_loci() {
        let s = |n, i, j| sji_trailer(n, i, j).unwrap().iter().map(|c| c.to_string()).collect::<Vec<_>>();
        assert_eq!(s(2, 0, 0), vec!["th2 - th1 in alpha1"]);
        assert_eq!(s(3, 1, 1), vec!["th2 - th1 in alpha1", "th3 - th2 in alpha2"]);
        assert_eq!(s(3, 0, 0), vec!["th3 - th2 in alpha1"]);
        assert!(sji_trailer(3, 2, 0).is_err());
    }

    #[test]
    fn config_text() {
        let c: TrailerConfig = "1 2 0 pi/2 -3*pi/4".parse().unwrap();
        assert_eq!(c.trailers(), 2);
        assert!((c.theta[1] - FRAC_PI_2).abs() < 1e-15);
        assert!((c.theta[2] + 3.0 * FRAC_PI_4).abs() < 1e-15);
        let back: TrailerConfig = c.to_string().parse().unwrap();
        assert_eq!(back, c);
        assert!("1 2".parse::<TrailerConfig>().is_err());
        assert!("1 2 x".parse::<TrailerConfig>().is_err());
        assert_eq!(reduce_angle(3.0 * PI), PI);
    }
}
