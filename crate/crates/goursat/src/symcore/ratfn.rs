//! Reduced rational functions `num/den` with a monic denominator.
//!
//! Because the fraction is reduced and the denominator monic, two equal
//! functions always have identical representations.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{gcd, Poly};
use super::rational::{q, Rational};
use super::SymError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn[{}]({})", self.arity(), self.to_text())
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        let arity = p.arity();
        RatFn {
            num: p,
            den: Poly::one(arity),
        }
    }
}

impl From<&Poly> for RatFn {
    fn from(p: &Poly) -> Self {
        RatFn::from(p.clone())
    }
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        assert_eq!(num.arity(), den.arity(), "arity mismatch");
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::zero(den.arity());
        }
        if let Some(c) = den.constant_value() {
            let arity = den.arity();
            return RatFn {
                num: num.scale(&(Rational::one() / c)),
                den: Poly::one(arity),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        Self::normalize(num, den)
    }

    /// Makes the denominator monic; assumes the fraction is already reduced.
    fn normalize(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFn { num, den }
        } else {
            let inv = Rational::one() / lc;
            RatFn {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero(arity: usize) -> Self {
        RatFn::from(Poly::zero(arity))
    }

    pub fn one(arity: usize) -> Self {
        RatFn::from(Poly::one(arity))
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        RatFn::from(Poly::constant(arity, c))
    }

    pub fn var(arity: usize, i: usize) -> Self {
        RatFn::from(Poly::var(arity, i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_poly() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.num.uses_var(i) || self.den.uses_var(i)
    }

    pub fn with_arity(&self, arity: usize) -> RatFn {
        RatFn {
            num: self.num.with_arity(arity),
            den: self.den.with_arity(arity),
        }
    }

    pub fn scale(&self, c: &Rational) -> RatFn {
        if c.is_zero() {
            return RatFn::zero(self.arity());
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<RatFn, SymError> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> RatFn {
        RatFn {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn deriv(&self, i: usize) -> RatFn {
        if self.is_poly() {
            return RatFn {
                num: self.num.deriv(i),
                den: self.den.clone(),
            };
        }
        let dn = self.num.deriv(i);
        let dd = self.den.deriv(i);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        // (n'd - nd')/d^2: cancel one factor of d against the numerator first.
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(top, &self.den * &self.den)
    }

    pub fn eval(&self, p: &[Rational]) -> Result<Rational, SymError> {
        let d = self.den.eval(p);
        if d.is_zero() {
            return Err(SymError::DenominatorVanishes(0));
        }
        Ok(self.num.eval(p) / d)
    }

    pub fn eval_f64(&self, p: &[f64]) -> f64 {
        self.num.eval_f64(p) / self.den.eval_f64(p)
    }

    /// Substitutes `subs[i]` for `x_{i+1}`.
    pub fn compose(&self, subs: &[RatFn]) -> Result<RatFn, SymError> {
        let n = compose_poly(&self.num, subs)?;
        let d = compose_poly(&self.den, subs)?;
        if d.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        n.checked_div(&d)
    }

    pub fn checked_div(&self, rhs: &RatFn) -> Result<RatFn, SymError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn to_text(&self) -> String {
        self.to_text_with(&|i| format!("x{}", i + 1))
    }

    pub fn to_text_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.is_poly() {
            self.num.to_text_with(name)
        } else {
            format!("({})/({})", self.num.to_text_with(name), self.den.to_text_with(name))
        }
    }
}

/// Substitution of rational functions into a polynomial over a common
/// denominator, followed by a single reduction.
pub fn compose_poly(p: &Poly, subs: &[RatFn]) -> Result<RatFn, SymError> {
    if subs.len() != p.arity() {
        return Err(SymError::DimensionMismatch {
            expected: p.arity(),
            found: subs.len(),
        });
    }
    let arity = subs.first().map(RatFn::arity).unwrap_or(0);
    if subs.iter().any(|s| s.arity() != arity) {
        return Err(SymError::ArityMismatch);
    }
    let maxdeg: Vec<u32> = (0..p.arity()).map(|i| p.degree_in(i)).collect();
    let mut num_pows: Vec<Vec<Poly>> = Vec::with_capacity(subs.len());
    let mut den_pows: Vec<Vec<Poly>> = Vec::with_capacity(subs.len());
    for (s, &d) in subs.iter().zip(&maxdeg) {
        let mut np = vec![Poly::one(arity)];
        let mut dp = vec![Poly::one(arity)];
        for k in 1..=d as usize {
            np.push(&np[k - 1] * &s.num);
            dp.push(&dp[k - 1] * &s.den);
        }
        num_pows.push(np);
        den_pows.push(dp);
    }
    let mut total = Poly::zero(arity);
    for (m, c) in p.terms() {
        let mut t = Poly::constant(arity, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            let e = e as usize;
            let pad = maxdeg[i] as usize - e;
            if e > 0 && !subs[i].num.is_one_poly() {
                t = &t * &num_pows[i][e];
            }
            if pad > 0 && !subs[i].den.is_one_poly() {
                t = &t * &den_pows[i][pad];
            }
        }
        total = &total + &t;
    }
    let mut den = Poly::one(arity);
    for (i, &d) in maxdeg.iter().enumerate() {
        if d > 0 && !subs[i].den.is_one_poly() {
            den = &den * &den_pows[i][d as usize];
        }
    }
    RatFn::new(total, den)
}

trait IsOnePoly {
    fn is_one_poly(&self) -> bool;
}

impl IsOnePoly for Poly {
    fn is_one_poly(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if self.is_poly() && rhs.is_poly() {
            return RatFn::from(&self.num + &rhs.num);
        }
        let g = gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RatFn::reduce(num, &self.den * &b)
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero(self.arity());
        }
        if self.is_poly() && rhs.is_poly() {
            return RatFn::from(&self.num * &rhs.num);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RatFn::normalize(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RatFn {
    type Output = RatFn;
    /// Panics on division by zero; use [`RatFn::checked_div`] otherwise.
    fn div(self, rhs: &RatFn) -> RatFn {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        self.scale(&q(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RatFn {
            type Output = RatFn;
            fn $f(self, rhs: RatFn) -> RatFn {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rational::qf;

    fn x(i: usize) -> RatFn {
        RatFn::var(3, i)
    }

    #[test]
    fn canonical_after_cancellation() {
        let a = &x(0) + &x(1);
        let f = &(&a * &x(2)) / &(&a * &a);
        let g = &x(2) / &a;
        assert_eq!(f, g);
        assert_eq!(f.den().leading_coeff(), q(1));
    }

    #[test]
    fn sum_to_zero() {
        let f = &RatFn::one(3) / &x(0);
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn quotient_rule() {
        let f = &RatFn::one(3) / &x(0);
        let expected = -(&RatFn::one(3) / &x(0).pow(2));
        assert_eq!(f.deriv(0), expected);
    }

    #[test]
    fn eval_reports_vanishing_denominator() {
        let f = &RatFn::one(3) / &x(0);
        assert!(f.eval(&[q(0), q(1), q(1)]).is_err());
        assert_eq!(f.eval(&[q(2), q(1), q(1)]).unwrap(), qf(1, 2));
    }

    #[test]
    fn compose_inverse_square() {
        let n = 1;
        let f = &RatFn::one(n) / &RatFn::var(n, 0);
        let sq = RatFn::var(n, 0).pow(2);
        let r = f.compose(std::slice::from_ref(&sq)).unwrap();
        assert_eq!(r, &RatFn::one(n) / &sq);
    }

    #[test]
    fn compose_detects_zero_denominator() {
        let f = &RatFn::one(2) / &RatFn::var(2, 0);
        assert!(f.compose(&[RatFn::zero(2), RatFn::var(2, 1)]).is_err());
    }
}
