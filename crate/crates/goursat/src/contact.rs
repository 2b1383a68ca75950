//! Prolongation of first-order contact transformations along Kumpera-Ruiz
//! words, the degree of a function along a field, and the moduli checks
//! for the nine- and eleven-dimensional families.
//!
//! A map `Phi` carries the structure of `kappa` (source word) to the one of
//! `kappa~` (target word). In source coordinates, at every level `i`,
//!
//! ```text
//! DPhi . kappa1 = nu     (kappa~1 o Phi) + lambda (kappa~2 o Phi)
//! DPhi . kappa2 = eta    (kappa~1 o Phi) + mu     (kappa~2 o Phi)
//! ```
//!
//! and `lambda_i = 0` for `i >= 4`. Each new component is obtained by
//! solving these relations for the direction of the new fiber coordinate.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::krforms::{kappa3, prolong_regular, prolong_singular, KRStep, KRSystem, KRWord};
use crate::symcore::linalg;
use crate::symcore::rational::fmt_rational;
use crate::symcore::vf::compose_field;
use crate::symcore::{origin, q, Poly, RatFn, RatVF, Rational, SymError};
use crate::vfdsl::{self, DslError};

pub const DEFAULT_DEGREE_CAP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContactError {
    #[error("base map must have 3 components in x1, x2, x3, found {0}")]
    BaseShape(usize),
    #[error("component {0} of the map does not vanish at 0")]
    NotAtOrigin(usize),
    #[error("the Jacobian of the base map vanishes at 0")]
    NotDiffeo,
    #[error("not a contact transformation: {0}")]
    NotContact(String),
    #[error("multiplier {which}_{level} vanishes at 0")]
    Degenerate { level: usize, which: &'static str },
    #[error("denominator vanishes at 0 after {0} derivatives")]
    PoleAtOrigin(u32),
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Dsl(#[from] DslError),
}

/// Multipliers of one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multipliers {
    pub nu: RatFn,
    pub lambda: RatFn,
    pub eta: RatFn,
    pub mu: RatFn,
}

impl Multipliers {
    fn with_arity(&self, n: usize) -> Multipliers {
        Multipliers {
            nu: self.nu.with_arity(n),
            lambda: self.lambda.with_arity(n),
            eta: self.eta.with_arity(n),
            mu: self.mu.with_arity(n),
        }
    }

    fn at_origin(&self) -> Result<[Rational; 4], ContactError> {
        let o = origin(self.nu.arity());
        Ok([
            self.nu.eval(&o)?,
            self.lambda.eval(&o)?,
            self.eta.eval(&o)?,
            self.mu.eval(&o)?,
        ])
    }
}

/// A certified first-order contact transformation of `R^3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactMap3 {
    pub phi: [RatFn; 3],
    pub cert: Multipliers,
}

impl ContactMap3 {
    /// Parses `dim 3; e1; e2; e3` and certifies it.
    pub fn parse(text: &str) -> Result<ContactMap3, ContactError> {
        solve_first_order(&vfdsl::parse_contact_map(text)?)
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.phi.iter().map(RatFn::to_text).collect();
        format!("dim 3; {}", parts.join("; "))
    }
}

fn x(n: usize, i: usize) -> RatFn {
    RatFn::var(n, i)
}

fn at0(f: &RatFn) -> Result<Rational, SymError> {
    f.eval(&origin(f.arity()))
}

fn rat_pair(sys: &KRSystem, n: usize) -> Result<[RatVF; 2], SymError> {
    Ok([sys.f1.lift(n)?.to_rat(), sys.f2.lift(n)?.to_rat()])
}

/// Recovers `(nu3, lambda3, eta3, mu3)` from the two defining identities.
pub fn solve_first_order(phi: &[RatFn]) -> Result<ContactMap3, ContactError> {
    if phi.len() != 3 || phi.iter().any(|c| c.arity() != 3) {
        return Err(ContactError::BaseShape(phi.len()));
    }
    for (k, c) in phi.iter().enumerate() {
        if !at0(c)?.is_zero() {
            return Err(ContactError::NotAtOrigin(k + 1));
        }
    }
    let o = origin(3);
    let jac: Vec<Vec<Rational>> = phi
        .iter()
        .map(|c| (0..3).map(|j| c.deriv(j).eval(&o)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    if linalg::rank(&jac) < 3 {
        return Err(ContactError::NotDiffeo);
    }
    let [k1, k2] = rat_pair(&kappa3(), 3)?;
    let (l1, l2) = (k1.lie_derivative(&phi[0])?, k2.lie_derivative(&phi[0])?);
    let (t1, t2) = (k1.lie_derivative(&phi[2])?, k2.lie_derivative(&phi[2])?);
    // kappa~1 o Phi = (0, 0, 1), kappa~2 o Phi = (1, Phi3, 0).
    if k1.lie_derivative(&phi[1])? != &l1 * &phi[2] {
        return Err(ContactError::NotContact("L_kappa1 Phi2 != Phi3 L_kappa1 Phi1".into()));
    }
    if k2.lie_derivative(&phi[1])? != &l2 * &phi[2] {
        return Err(ContactError::NotContact("L_kappa2 Phi2 != Phi3 L_kappa2 Phi1".into()));
    }
    let cert = Multipliers {
        nu: t1,
        lambda: l1,
        eta: t2,
        mu: l2,
    };
    let [nu, la, et, mu] = cert.at_origin()?;
    if (&nu * &mu - &la * &et).is_zero() {
        return Err(ContactError::NotContact("nu3 mu3 - lambda3 eta3 vanishes at 0".into()));
    }
    Ok(ContactMap3 {
        phi: [phi[0].clone(), phi[1].clone(), phi[2].clone()],
        cert,
    })
}

/// The prolongation `Phi^(n)` with its multiplier chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProlongedContact {
    pub dim: usize,
    /// `Phi_1 .. Phi_n`, all of arity `n`.
    pub phi: Vec<RatFn>,
    /// Levels `3 ..= n`, index `i - 3`.
    pub levels: Vec<Multipliers>,
    /// New constants at regular target steps.
    pub ctilde: BTreeMap<usize, Rational>,
    pub target: KRWord,
}

impl ProlongedContact {
    pub fn level(&self, i: usize) -> &Multipliers {
        &self.levels[i - 3]
    }

    /// `Phi_i` involves only `x_1 .. x_i`.
    pub fn is_triangular(&self) -> bool {
        self.phi
            .iter()
            .enumerate()
            .all(|(k, c)| (k + 1..self.dim).all(|j| !c.uses_var(j)))
    }
}

/// Prolongs `base` along `source`, one level per step.
pub fn prolong(base: &ContactMap3, source: &KRWord) -> Result<ProlongedContact, ContactError> {
    let n = source.dim();
    let mut phi: Vec<RatFn> = base.phi.iter().map(|c| c.with_arity(n)).collect();
    let mut levels = vec![base.cert.with_arity(n)];
    let mut ctilde = BTreeMap::new();
    let mut target = Vec::new();
    let mut sys = kappa3();
    for (s, step) in source.steps.iter().enumerate() {
        let i = 4 + s;
        let xi = x(n, i - 1);
        let prev = levels.last().expect("level 3 present");
        let (alpha, beta) = match step {
            KRStep::Regular(c) => (&xi + &RatFn::constant(n, c.clone()), RatFn::one(n)),
            KRStep::Singular => (RatFn::one(n), xi.clone()),
        };
        let a = &(&alpha * &prev.nu) + &(&beta * &prev.eta);
        let b = &(&alpha * &prev.lambda) + &(&beta * &prev.mu);
        let (phi_i, mu_i) = if !at0(&b)?.is_zero() {
            let ratio = a.checked_div(&b)?;
            let c = at0(&ratio)?;
            let shifted = &ratio - &RatFn::constant(n, c.clone());
            ctilde.insert(i, c.clone());
            target.push(KRStep::Regular(c));
            (shifted, b)
        } else {
            if at0(&a)?.is_zero() {
                return Err(ContactError::Degenerate { level: i, which: "mu" });
            }
            target.push(KRStep::Singular);
            (b.checked_div(&a)?, a)
        };
        sys = match step {
            KRStep::Regular(c) => prolong_regular(&sys, c),
            KRStep::Singular => prolong_singular(&sys),
        };
        let [_, k2] = rat_pair(&sys, n)?;
        let nu_i = phi_i.deriv(i - 1);
        let eta_i = k2.lie_derivative(&phi_i)?;
        if at0(&nu_i)?.is_zero() {
            return Err(ContactError::Degenerate { level: i, which: "nu" });
        }
        phi.push(phi_i);
        levels.push(Multipliers {
            nu: nu_i,
            lambda: RatFn::zero(n),
            eta: eta_i,
            mu: mu_i,
        });
    }
    Ok(ProlongedContact {
        dim: n,
        phi,
        levels,
        ctilde,
        target: KRWord::new(target),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProlongationCheck {
    pub pass: bool,
    pub levels_checked: usize,
    pub first_failure: Option<usize>,
}

/// Checks the defining identities at every level `3 ..= n` symbolically.
pub fn verify_prolongation(
    p: &ProlongedContact,
    source: &KRWord,
    target: &KRWord,
) -> Result<ProlongationCheck, ContactError> {
    let n = p.dim;
    if source.dim() != n || target.dim() != n || p.phi.len() != n || p.levels.len() != n - 2 {
        return Err(ContactError::Dim(format!(
            "source dim {}, target dim {}, map dim {n}",
            source.dim(),
            target.dim()
        )));
    }
    let mut src = kappa3();
    let mut tgt = kappa3();
    for i in 3..=n {
        if i > 3 {
            src = match &source.steps[i - 4] {
                KRStep::Regular(c) => prolong_regular(&src, c),
                KRStep::Singular => prolong_singular(&src),
            };
            tgt = match &target.steps[i - 4] {
                KRStep::Regular(c) => prolong_regular(&tgt, c),
                KRStep::Singular => prolong_singular(&tgt),
            };
        }
        let [s1, s2] = rat_pair(&src, n)?;
        let t1 = compose_field(&tgt.f1, &p.phi[..i])?;
        let t2 = compose_field(&tgt.f2, &p.phi[..i])?;
        let m = p.level(i);
        let ok = (0..i).all(|k| {
            let lhs1 = s1.lie_derivative(&p.phi[k]);
            let lhs2 = s2.lie_derivative(&p.phi[k]);
            let rhs1 = &(&m.nu * t1.component(k)) + &(&m.lambda * t2.component(k));
            let rhs2 = &(&m.eta * t1.component(k)) + &(&m.mu * t2.component(k));
            lhs1.is_ok_and(|l| l == rhs1) && lhs2.is_ok_and(|l| l == rhs2)
        });
        if !ok {
            return Ok(ProlongationCheck {
                pass: false,
                levels_checked: i - 2,
                first_failure: Some(i),
            });
        }
    }
    Ok(ProlongationCheck {
        pass: true,
        levels_checked: n - 2,
        first_failure: None,
    })
}

/// Closed forms of the regular and singular steps for `i >= 5`, together with
/// the extracted constant; returns the first level where they disagree.
pub fn check_closed_forms(p: &ProlongedContact, source: &KRWord) -> Result<Option<usize>, ContactError> {
    let n = p.dim;
    for i in 5..=n {
        let prev = p.level(i - 1);
        let cur = p.level(i);
        let xi = x(n, i - 1);
        let ok = match source.step_at_coord(i) {
            KRStep::Regular(c) => {
                let (nu0, eta0, mu0) = (at0(&prev.nu)?, at0(&prev.eta)?, at0(&prev.mu)?);
                let ct = c * &nu0 / &mu0 + &eta0 / &mu0;
                let lin = &(&(&xi + &RatFn::constant(n, c.clone())) * &prev.nu) + &prev.eta;
                let expect = &lin.checked_div(&prev.mu)? - &RatFn::constant(n, ct.clone());
                p.ctilde.get(&i) == Some(&ct)
                    && p.phi[i - 1] == expect
                    && cur.mu == prev.mu
                    && cur.nu == prev.nu.checked_div(&prev.mu)?
            }
            KRStep::Singular => {
                let den = &prev.nu + &(&xi * &prev.eta);
                let expect = (&xi * &prev.mu).checked_div(&den)?;
                let nu = (&prev.mu * &prev.nu).checked_div(&(&den * &den))?;
                p.phi[i - 1] == expect && cur.mu == den && cur.nu == nu
            }
        };
        if !ok {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Finite(u32),
    /// No nonzero derivative up to the cap.
    Infinite(u32),
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degree::Finite(k) => write!(f, "{k}"),
            Degree::Infinite(c) => write!(f, ">{c}"),
        }
    }
}

/// Smallest `k <= cap` with `(L_g^k gamma)(0) != 0`.
pub fn degree_of(gamma: &RatFn, g: &RatVF, cap: u32) -> Result<Degree, ContactError> {
    let o = origin(g.dim());
    let mut cur = gamma.clone();
    for k in 0..=cap {
        let v = cur.eval(&o).map_err(|_| ContactError::PoleAtOrigin(k))?;
        if !v.is_zero() {
            return Ok(Degree::Finite(k));
        }
        if k < cap {
            cur = g.lie_derivative(&cur)?;
        }
    }
    Ok(Degree::Infinite(cap))
}

fn truncate(p: &Poly, order: u32) -> Poly {
    Poly::from_terms(
        p.arity(),
        p.terms()
            .filter(|(m, _)| m.degree() <= order)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Taylor polynomial of `f` at 0 up to total degree `order`.
fn jet(f: &RatFn, order: u32) -> Result<Poly, ContactError> {
    let d = f.den();
    let d0 = d.constant_term();
    if d0.is_zero() {
        return Err(ContactError::PoleAtOrigin(0));
    }
    // 1/d = (1/d0) sum_m (-e)^m with e = (d - d0)/d0 of order >= 1.
    let n = f.arity();
    let inv0 = d0.recip();
    let e = (d - &Poly::constant(n, d0)).scale(&-inv0.clone());
    let mut inv = Poly::one(n);
    let mut pw = Poly::one(n);
    for _ in 0..order {
        pw = truncate(&(&pw * &e), order);
        if pw.is_zero() {
            break;
        }
        inv = &inv + &pw;
    }
    Ok(truncate(&(&truncate(f.num(), order) * &inv), order).scale(&inv0))
}

/// `(L_g^k f)(0)` for `k = 0 ..= kmax`, from truncated Taylor expansions:
/// the value at 0 after `k` derivatives only sees the `k`-jets of `f` and `g`.
pub fn lie_series_at_origin(f: &RatFn, g: &RatVF, kmax: u32) -> Result<Vec<Rational>, ContactError> {
    let n = g.dim();
    if f.arity() != n {
        return Err(ContactError::Dim(format!("function arity {} vs field dim {n}", f.arity())));
    }
    let gj: Vec<Poly> = g
        .components()
        .iter()
        .map(|c| jet(c, kmax.saturating_sub(1)))
        .collect::<Result<_, _>>()?;
    let mut cur = jet(f, kmax)?;
    let mut out = vec![cur.constant_term()];
    for k in 1..=kmax {
        let order = kmax - k;
        let mut next = Poly::zero(n);
        for (i, gi) in gj.iter().enumerate() {
            let d = cur.deriv(i);
            if gi.is_zero() || d.is_zero() {
                continue;
            }
            next = &next + &truncate(&(&truncate(gi, order) * &d), order);
        }
        cur = next;
        out.push(cur.constant_term());
    }
    Ok(out)
}

/// Source word of the nine-dimensional family.
pub fn r9_word(c9: Rational) -> KRWord {
    let r = |c: i64| KRStep::Regular(q(c));
    KRWord::new(vec![r(0), r(0), KRStep::Singular, r(0), r(1), KRStep::Regular(c9)])
}

/// Source word of the eleven-dimensional family.
pub fn r11_word(c11: Rational) -> KRWord {
    let r = |c: i64| KRStep::Regular(q(c));
    KRWord::new(vec![r(0), r(0), KRStep::Singular, r(0), r(0), r(1), r(1), KRStep::Regular(c11)])
}

/// The field `g = (1/mu6) kappa2` on the full word, with `Phi6` and `mu4`.
pub struct ModuliSetup {
    pub g: RatVF,
    pub phi6: RatFn,
    pub mu4: RatFn,
    pub nu4: RatFn,
    pub mu6: RatFn,
}

pub fn moduli_setup(base: &ContactMap3, word: &KRWord) -> Result<ModuliSetup, ContactError> {
    if word.len() < 3 {
        return Err(ContactError::Dim("word shorter than 3 steps".into()));
    }
    let n = word.dim();
    let head = KRWord::new(word.steps[..3].to_vec());
    let p6 = prolong(base, &head)?;
    let mu6 = p6.level(6).mu.with_arity(n);
    let alpha = RatFn::one(n).checked_div(&mu6)?;
    let sys = crate::krforms::build(word);
    let g = sys.f2.to_rat().scale_by(&alpha)?;
    Ok(ModuliSetup {
        g,
        phi6: p6.phi[5].with_arity(n),
        mu4: p6.level(4).mu.with_arity(n),
        nu4: p6.level(4).nu.with_arity(n),
        mu6,
    })
}

/// `(L_g^3 Phi6)(0)` for the nine-dimensional word with `c9 = 0`.
pub fn check_r9(base: &ContactMap3) -> Result<Rational, ContactError> {
    let s = moduli_setup(base, &r9_word(q(0)))?;
    let v = lie_series_at_origin(&s.phi6, &s.g, 3)?;
    Ok(v[3].clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct R11Report {
    pub c11: Rational,
    pub c9_tilde: Rational,
    pub c10_tilde: Rational,
    pub c11_tilde: Rational,
    /// `mu4(0)` and `nu4(0)`.
    pub mu0: Rational,
    pub nu0: Rational,
    /// `1 / mu6(0)`.
    pub alpha0: Rational,
    /// `(dPhi6/dx6)(0)`, equal to `mu(0)^2 / nu(0)`.
    pub slope0: Rational,
    /// `slope0 alpha0^k`, `k = 3, 4`, and `slope0 alpha0^5 c11`.
    pub predicted: [Rational; 3],
    /// Same with `mu(0)` in place of the slope; agrees when `mu(0) = nu(0)`.
    pub printed: [Rational; 3],
}

impl R11Report {
    pub fn intermediates_match(&self) -> bool {
        self.predicted[0] == self.c9_tilde && self.predicted[1] == self.c10_tilde && self.predicted[2] == self.c11_tilde
    }

    pub fn printed_intermediates_match(&self) -> bool {
        self.printed[0] == self.c9_tilde && self.printed[1] == self.c10_tilde
    }

    /// `c~9 = c~10 = 1` forces `c~11 = c11`.
    pub fn implication_holds(&self) -> bool {
        !(self.c9_tilde.is_one() && self.c10_tilde.is_one()) || self.c11_tilde == self.c11
    }
}

pub fn check_r11(base: &ContactMap3, c11: &Rational) -> Result<R11Report, ContactError> {
    let s = moduli_setup(base, &r11_word(c11.clone()))?;
    let v = lie_series_at_origin(&s.phi6, &s.g, 5)?;
    let mu0 = at0(&s.mu4)?;
    let nu0 = at0(&s.nu4)?;
    let alpha0 = at0(&s.mu6)?.recip();
    let slope0 = at0(&s.phi6.deriv(5))?;
    let pw = |k: usize| (0..k).fold(q(1), |acc, _| acc * &alpha0);
    let series = |a: &Rational| [a * pw(3), a * pw(4), a * pw(5) * c11];
    Ok(R11Report {
        c11: c11.clone(),
        c9_tilde: v[3].clone(),
        c10_tilde: v[4].clone(),
        c11_tilde: v[5].clone(),
        predicted: series(&slope0),
        printed: series(&mu0),
        mu0,
        nu0,
        alpha0,
        slope0,
    })
}

pub fn identity_base() -> ContactMap3 {
    solve_first_order(&[x(3, 0), x(3, 1), x(3, 2)]).expect("identity is contact")
}

/// Named certified base maps used by the checks and the CLI suite.
pub fn base_family() -> Vec<(String, ContactMap3)> {
    let n = 3;
    let xv = |i| x(n, i);
    let c = |v: Rational| RatFn::constant(n, v);
    let mut out = vec![("identity".to_string(), vec![xv(0), xv(1), xv(2)])];
    let scales = [q(1), q(-1), q(2), crate::symcore::qf(1, 2)];
    for a in &scales {
        for b in &scales {
            if a.is_one() && b.is_one() {
                continue;
            }
            out.push((
                format!("scaling a={} b={}", fmt_rational(a), fmt_rational(b)),
                vec![&c(a.clone()) * &xv(0), &c(a * b) * &xv(1), &c(b.clone()) * &xv(2)],
            ));
        }
    }
    for s in [q(1), q(-1), q(3)] {
        let half = crate::symcore::qf(1, 2) * &s;
        out.push((
            format!("shear c={}", fmt_rational(&s)),
            vec![
                xv(0),
                &xv(1) + &(&c(half) * &(&xv(0) * &xv(0))),
                &xv(2) + &(&c(s.clone()) * &xv(0)),
            ],
        ));
    }
    let one_minus = &RatFn::one(n) - &xv(0);
    out.push((
        "moebius".to_string(),
        vec![
            xv(0).checked_div(&one_minus).expect("nonzero"),
            xv(1),
            &xv(2) * &(&one_minus * &one_minus),
        ],
    ));
    out.into_iter()
        .map(|(name, phi)| {
            let m = solve_first_order(&phi).expect("family members are contact maps");
            (name, m)
        })
        .collect()
}

/// The Legendre involution `(x3, x1 x3 - x2, x1)`; it sends `R0` to `S`.
pub fn legendre() -> ContactMap3 {
    let n = 3;
    let phi = vec![x(n, 2), &(&x(n, 0) * &x(n, 2)) - &x(n, 1), x(n, 0)];
    solve_first_order(&phi).expect("Legendre map is contact")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContactReport {
    pub ctilde: BTreeMap<String, String>,
    pub degrees: BTreeMap<String, String>,
    pub pass: bool,
}

/// Prolongs and verifies; `degrees` lists each `x_k` against `g`.
pub fn certify_report(base: &ContactMap3, source: &KRWord) -> Result<ContactReport, ContactError> {
    let p = prolong(base, source)?;
    let check = verify_prolongation(&p, source, &p.target)?;
    let closed = check_closed_forms(&p, source)?;
    let mut degrees = BTreeMap::new();
    if source.len() >= 3 {
        let s = moduli_setup(base, source)?;
        for k in 0..source.dim() {
            let d = degree_of(&x(source.dim(), k), &s.g, DEFAULT_DEGREE_CAP)?;
            degrees.insert(format!("x{}", k + 1), d.to_string());
        }
    }
    Ok(ContactReport {
        ctilde: p
            .ctilde
            .iter()
            .map(|(i, c)| (i.to_string(), fmt_rational(c)))
            .collect(),
        degrees,
        pass: check.pass && closed.is_none() && p.is_triangular(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::qf;

    fn w(s: &str) -> KRWord {
        s.parse().unwrap()
    }

    fn identity() -> ContactMap3 {
        identity_base()
    }

    #[test]
    fn map_text_round_trips() {
        for (_, m) in base_family() {
            let t = m.to_text();
            assert_eq!(t.matches("dim").count(), 1);
            assert_eq!(ContactMap3::parse(&t).unwrap().phi, m.phi);
        }
    }

    fn scaling(a: &Rational, b: &Rational) -> ContactMap3 {
        let c = |v: &Rational| RatFn::constant(3, v.clone());
        solve_first_order(&[&c(a) * &x(3, 0), &c(&(a * b)) * &x(3, 1), &c(b) * &x(3, 2)]).unwrap()
    }

    fn consts(m: &Multipliers) -> [Rational; 4] {
        [m.nu.constant_value(), m.lambda.constant_value(), m.eta.constant_value(), m.mu.constant_value()]
            .map(|v| v.expect("constant multiplier"))
    }

    #[test]
    fn first_order_certificates() {
        assert_eq!(consts(&identity().cert), [q(1), q(0), q(0), q(1)]);
        for (a, b) in [(q(2), q(3)), (qf(-1, 2), q(5))] {
            assert_eq!(consts(&scaling(&a, &b).cert), [b.clone(), q(0), q(0), a.clone()]);
        }
        let fam = base_family();
        let shear = &fam.iter().find(|(n, _)| n == "shear c=3").unwrap().1;
        assert_eq!(consts(&shear.cert), [q(1), q(0), q(3), q(1)]);
    }

    #[test]
    fn first_order_rejections() {
        let n = 3;
        let shifted = [&x(n, 0) + &RatFn::one(n), x(n, 1), x(n, 2)];
        assert_eq!(solve_first_order(&shifted), Err(ContactError::NotAtOrigin(1)));
        let flat = [x(n, 0), x(n, 0), x(n, 2)];
        assert_eq!(solve_first_order(&flat), Err(ContactError::NotDiffeo));
        let swap = [x(n, 1), x(n, 0), x(n, 2)];
        assert!(matches!(solve_first_order(&swap), Err(ContactError::NotContact(_))));
    }

    #[test]
    fn identity_prolongs_to_identity() {
        let src = w("R0.R1.S.R0");
        let p = prolong(&identity(), &src).unwrap();
        for (k, c) in p.phi.iter().enumerate() {
            assert_eq!(c, &x(src.dim(), k));
        }
        assert_eq!(p.target, src);
        assert!(verify_prolongation(&p, &src, &src).unwrap().pass);
        let p4 = prolong(&identity(), &w("R0")).unwrap();
        assert_eq!(p4.phi[3], x(4, 3));
        assert_eq!(consts(p4.level(4))[0], q(1));
        assert_eq!(consts(p4.level(4))[3], q(1));
    }

    #[test]
    fn scaling_constants_follow_regular_rule() {
        let (a, b) = (q(2), q(3));
        let src = w("R1.R1");
        let p = prolong(&scaling(&a, &b), &src).unwrap();
        // nu4 = b/a, mu4 = a; then nu5 = b/a^2.
        assert_eq!(p.ctilde[&4], b.clone() / a.clone());
        assert_eq!(p.ctilde[&5], (&b / &a) / &a);
        assert_eq!(check_closed_forms(&p, &src).unwrap(), None);
        assert!(verify_prolongation(&p, &src, &p.target).unwrap().pass);
    }

    #[test]
    fn singular_step_closed_form() {
        let fam = base_family();
        let src = w("R0.R0.S");
        for (name, base) in &fam {
            let p = prolong(base, &src).unwrap();
            assert_eq!(check_closed_forms(&p, &src).unwrap(), None, "{name}");
            assert!(p.is_triangular(), "{name}");
            assert!(verify_prolongation(&p, &src, &p.target).unwrap().pass, "{name}");
        }
    }

    #[test]
    fn legendre_changes_first_letter() {
        let src = w("R0.R0.S");
        let p = prolong(&legendre(), &src).unwrap();
        assert!(p.target.steps[0].is_singular());
        assert!(verify_prolongation(&p, &src, &p.target).unwrap().pass);
    }

    #[test]
    fn corrupted_chain_fails_at_that_level() {
        let src = w("R1.R1.R0");
        let mut p = prolong(&scaling(&q(2), &q(3)), &src).unwrap();
        p.levels[5 - 3].mu = p.levels[5 - 3].mu.scale(&q(2));
        let r = verify_prolongation(&p, &src, &p.target).unwrap();
        assert!(!r.pass);
        assert_eq!(r.first_failure, Some(5));
    }

    #[test]
    fn uniqueness_of_prolongation() {
        let fam = base_family();
        let src = w("R0.S.R1");
        for (_, base) in fam.iter().take(4) {
            assert_eq!(prolong(base, &src).unwrap(), prolong(base, &src).unwrap());
        }
    }

    #[test]
    fn r9_degrees_identity() {
        let s = moduli_setup(&identity(), &r9_word(q(0))).unwrap();
        let deg = |k: usize| degree_of(&x(9, k - 1), &s.g, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(deg(5), Degree::Finite(1));
        assert_eq!(deg(6), Degree::Finite(2));
        assert_eq!(deg(1), Degree::Finite(3));
        assert_eq!(deg(4), Degree::Finite(4));
        assert_eq!(deg(3), Degree::Finite(7));
        assert_eq!(deg(2), Degree::Finite(10));
    }

    #[test]
    fn jet_series_agrees_with_exact_iteration() {
        for (name, base) in base_family().into_iter().take(5) {
            let s = moduli_setup(&base, &r11_word(qf(3, 2))).unwrap();
            let mut cur = s.phi6.clone();
            let o = origin(11);
            let fast = lie_series_at_origin(&s.phi6, &s.g, 5).unwrap();
            for v in fast {
                assert_eq!(cur.eval(&o).unwrap(), v, "{name}");
                cur = s.g.lie_derivative(&cur).unwrap();
            }
        }
    }

    #[test]
    fn r9_vanishes_on_family() {
        for (name, base) in base_family() {
            assert_eq!(check_r9(&base).unwrap(), q(0), "{name}");
        }
    }

    #[test]
    fn r9_matches_full_prolongation() {
        for (name, base) in base_family().into_iter().take(6) {
            let p = prolong(&base, &r9_word(q(0))).unwrap();
            assert_eq!(p.ctilde.get(&9), Some(&check_r9(&base).unwrap()), "{name}");
        }
    }

    #[test]
    fn r11_identity() {
        for c in [q(0), q(1), qf(3, 2), q(-2)] {
            let r = check_r11(&identity(), &c).unwrap();
            assert_eq!((r.c9_tilde.clone(), r.c10_tilde.clone()), (q(1), q(1)));
            assert_eq!(r.c11_tilde, c);
            assert!(r.intermediates_match());
            assert!(r.printed_intermediates_match());
            assert!(r.implication_holds());
        }
    }

    #[test]
    fn r11_family_implication() {
        for (name, base) in base_family() {
            for c in [q(0), q(-2)] {
                let r = check_r11(&base, &c).unwrap();
                assert!(r.intermediates_match(), "{name}");
                assert!(r.implication_holds(), "{name}");
                if name.starts_with("shear") {
                    assert_eq!((r.c9_tilde, r.c10_tilde, r.c11_tilde), (q(1), q(1), c.clone()));
                }
            }
        }
    }

    #[test]
    fn r11_scaling_obstruction() {
        let r = check_r11(&scaling(&q(2), &q(1)), &q(1)).unwrap();
        // mu4 = 2, nu4 = 1/2, so the slope is mu^2/nu = 8 and alpha = 4.
        assert_eq!((r.mu0.clone(), r.nu0.clone(), r.alpha0.clone()), (q(2), qf(1, 2), q(4)));
        assert_eq!(r.slope0, q(8));
        assert!(r.intermediates_match());
        assert!(!r.printed_intermediates_match());
        assert_eq!(r.c9_tilde, q(512));
        let p = prolong(&scaling(&q(2), &q(1)), &r11_word(q(1))).unwrap();
        assert_eq!(p.ctilde[&9], r.c9_tilde);
        assert_eq!(p.ctilde[&11], r.c11_tilde);
    }

    #[test]
    fn report_json_shape() {
        let r = certify_report(&identity(), &r9_word(q(0))).unwrap();
        assert!(r.pass);
        assert_eq!(r.degrees["x5"], "1");
        let j = serde_json::to_value(&r).unwrap();
        assert!(j.get("ctilde").is_some() && j.get("degrees").is_some());
    }
}
