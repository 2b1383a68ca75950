//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are addressed by 0-based index internally; `x1` is index 0.
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose order is
//! graded lexicographic, so iteration and printing are canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{q, Rational};

/// Exponent vector. Ordered by total degree, then lexicographically with
/// `x1 > x2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.arity, self.to_text())
    }
}

impl Poly {
    pub fn zero(arity: usize) -> Self {
        Poly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, q(1))
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(arity), c);
        }
        p
    }

    /// The coordinate function `x_{i+1}`.
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index {i} out of range for arity {arity}");
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::term(arity, Monomial(e), q(1))
    }

    pub fn term(arity: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), arity);
        let mut p = Self::zero(arity);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(arity);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.arity))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.arity).filter(|&i| self.uses_var(i)).collect()
    }

    /// Re-embeds the polynomial with a different number of variables.
    /// Shrinking is only allowed over unused trailing variables.
    pub fn with_arity(&self, arity: usize) -> Poly {
        if arity == self.arity {
            return self.clone();
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            if arity < self.arity {
                assert!(e[arity..].iter().all(|x| *x == 0), "cannot drop a used variable");
            }
            e.resize(arity, 0);
            (Monomial(e), c.clone())
        });
        Poly::from_terms(arity, terms)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.arity);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn deriv(&self, i: usize) -> Poly {
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[i];
            e[i] -= 1;
            (Monomial(e), c * q(k as i64))
        });
        Poly::from_terms(self.arity, terms)
    }

    pub fn eval(&self, p: &[Rational]) -> Rational {
        assert_eq!(p.len(), self.arity, "point length does not match arity");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in p.iter().zip(&m.0) {
                if *e > 0 {
                    t *= num_traits::pow(x.clone(), *e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, p: &[f64]) -> f64 {
        assert_eq!(p.len(), self.arity, "point length does not match arity");
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = super::rational::to_f64(c);
                for (x, e) in p.iter().zip(&m.0) {
                    if *e > 0 {
                        t *= x.powi(*e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Coefficients of the univariate view in `x_{i+1}`: entry `k` is the
    /// coefficient of `x_{i+1}^k`, itself free of that variable.
    pub fn coeffs_in(&self, i: usize) -> Vec<Poly> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Poly::zero(self.arity); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            let mut e = m.0.clone();
            e[i] = 0;
            out[k].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Leading coefficient in the univariate view.
    pub fn lc_in(&self, i: usize) -> Poly {
        let d = self.degree_in(i);
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] == d).map(|(m, c)| {
            let mut e = m.0.clone();
            e[i] = 0;
            (Monomial(e), c.clone())
        });
        Poly::from_terms(self.arity, terms)
    }

    fn var_pow(arity: usize, i: usize, k: u32) -> Monomial {
        let mut e = vec![0; arity];
        e[i] = k;
        Monomial(e)
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut quot = Poly::zero(self.arity);
        while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&dm)?;
            let qc = c / &dc;
            r = &r - &d.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&(Rational::one() / c)),
            _ => self.clone(),
        }
    }

    fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Canonical text over variables `x1..xn`, e.g. `x1^2*x3 - 1/2*x2 + 1`.
    pub fn to_text(&self) -> String {
        self.to_text_with(&|i| format!("x{}", i + 1))
    }

    pub fn to_text_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { name(i) } else { format!("{}^{}", name(i), e) })
                .collect();
            if mono.is_empty() {
                out.push_str(&super::rational::fmt_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&super::rational::fmt_rational(&abs));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = Poly::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&q(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Greatest common divisor, normalized monic (zero only if both are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.arity, b.arity, "arity mismatch");
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.arity);
    }
    if a == b {
        return a.monic();
    }
    if let Some((m, _)) = a.single_term() {
        return monomial_gcd(m, b);
    }
    if let Some((m, _)) = b.single_term() {
        return monomial_gcd(m, a);
    }
    let va = a.vars_used();
    let vb = b.vars_used();
    // A variable present on one side only must drop out of the gcd.
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd(&content_in(a, v), b);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd(a, &content_in(b, v));
    }
    let v = *va
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), std::cmp::Reverse(v)))
        .expect("non-constant polynomial uses a variable");
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = subresultant_gcd(pa, pb, v);
    (&c * &g).monic()
}

fn monomial_gcd(m: &Monomial, p: &Poly) -> Poly {
    let mut e = m.0.clone();
    for k in p.terms.keys() {
        for (x, y) in e.iter_mut().zip(&k.0) {
            *x = (*x).min(*y);
        }
    }
    Poly::term(p.arity, Monomial(e), q(1))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x_{v+1}`.
pub fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero(p.arity);
    for c in p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one(p.arity);
        }
    }
    g
}

fn primitive_part(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` in `x_{v+1}`.
fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lcb = b.lc_in(v);
    let da = a.degree_in(v);
    if da < db {
        return a.clone();
    }
    let mut r = a.clone();
    let mut e = da - db + 1;
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = r.lc_in(v);
        let shift = Poly::var_pow(a.arity, v, dr - db);
        r = &(&lcb * &r) - &(&lcr * &b.mul_term(&shift, &q(1)));
        e -= 1;
    }
    &r * &lcb.pow(e)
}

/// Subresultant PRS for two polynomials primitive in `x_{v+1}`.
fn subresultant_gcd(mut a: Poly, mut b: Poly, v: usize) -> Poly {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    let arity = a.arity;
    let mut g = Poly::one(arity);
    let mut h = Poly::one(arity);
    loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return primitive_part(&b, v);
        }
        if r.degree_in(v) == 0 {
            return Poly::one(arity);
        }
        a = b;
        let divisor = &g * &h.pow(delta);
        b = r.div_exact(&divisor).expect("subresultant division is exact");
        g = a.lc_in(v);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact"),
        };
    }
}
