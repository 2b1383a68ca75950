//! Vector fields with exact components and their Lie calculus.

use std::fmt;

use super::poly::Poly;
use super::ratfn::RatFn;
use super::rational::Rational;
use super::SymError;

/// Component ring of a vector field.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero(arity: usize) -> Self;
    fn arity(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn deriv(&self, i: usize) -> Self;
    fn eval(&self, p: &[Rational]) -> Result<Rational, SymError>;
    fn to_ratfn(&self) -> RatFn;
}

impl Scalar for Poly {
    fn zero(arity: usize) -> Self {
        Poly::zero(arity)
    }
    fn arity(&self) -> usize {
        Poly::arity(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn deriv(&self, i: usize) -> Self {
        Poly::deriv(self, i)
    }
    fn eval(&self, p: &[Rational]) -> Result<Rational, SymError> {
        Ok(Poly::eval(self, p))
    }
    fn to_ratfn(&self) -> RatFn {
        RatFn::from(self)
    }
}

impl Scalar for RatFn {
    fn zero(arity: usize) -> Self {
        RatFn::zero(arity)
    }
    fn arity(&self) -> usize {
        RatFn::arity(self)
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn deriv(&self, i: usize) -> Self {
        RatFn::deriv(self, i)
    }
    fn eval(&self, p: &[Rational]) -> Result<Rational, SymError> {
        RatFn::eval(self, p)
    }
    fn to_ratfn(&self) -> RatFn {
        self.clone()
    }
}

/// A vector field on `R^n`: component `i` multiplies `d/dx_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField<S> {
    comps: Vec<S>,
}

pub type PolyVF = VectorField<Poly>;
pub type RatVF = VectorField<RatFn>;

impl<S: Scalar> fmt::Debug for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.comps).finish()
    }
}

impl<S: Scalar> VectorField<S> {
    pub fn new(comps: Vec<S>) -> Result<Self, SymError> {
        let n = comps.len();
        if let Some(bad) = comps.iter().find(|c| c.arity() != n) {
            return Err(SymError::DimensionMismatch {
                expected: n,
                found: bad.arity(),
            });
        }
        Ok(VectorField { comps })
    }

    pub fn zero(dim: usize) -> Self {
        VectorField {
            comps: vec![S::zero(dim); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[S] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &S {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(S::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, SymError> {
        check_dims(self.dim(), rhs.dim())?;
        Ok(VectorField {
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn scale_by(&self, f: &S) -> Result<Self, SymError> {
        check_dims(self.dim(), f.arity())?;
        Ok(VectorField {
            comps: self.comps.iter().map(|c| c.mul(f)).collect(),
        })
    }

    /// `L_f(phi) = sum_j f_j d(phi)/dx_j`.
    pub fn lie_derivative(&self, phi: &S) -> Result<S, SymError> {
        check_dims(self.dim(), phi.arity())?;
        let mut acc = S::zero(self.dim());
        for (j, fj) in self.comps.iter().enumerate() {
            if fj.is_zero() {
                continue;
            }
            let d = phi.deriv(j);
            if !d.is_zero() {
                acc = acc.add(&fj.mul(&d));
            }
        }
        Ok(acc)
    }

    /// `[f, g]_i = L_f(g_i) - L_g(f_i)`.
    pub fn lie_bracket(&self, g: &Self) -> Result<Self, SymError> {
        check_dims(self.dim(), g.dim())?;
        let mut comps = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let a = self.lie_derivative(&g.comps[i])?;
            let b = g.lie_derivative(&self.comps[i])?;
            comps.push(a.sub(&b));
        }
        Ok(VectorField { comps })
    }

    pub fn evaluate(&self, p: &[Rational]) -> Result<Vec<Rational>, SymError> {
        check_dims(self.dim(), p.len())?;
        self.comps
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.eval(p).map_err(|e| match e {
                    SymError::DenominatorVanishes(_) => SymError::DenominatorVanishes(i),
                    other => other,
                })
            })
            .collect()
    }

    pub fn to_rat(&self) -> RatVF {
        VectorField {
            comps: self.comps.iter().map(S::to_ratfn).collect(),
        }
    }
}

impl PolyVF {
    /// The coordinate field `d/dx_{i+1}`.
    pub fn coordinate(dim: usize, i: usize) -> PolyVF {
        let mut comps = vec![Poly::zero(dim); dim];
        comps[i] = Poly::one(dim);
        VectorField { comps }
    }

    /// Embeds into `new_dim`, padding with zero components.
    pub fn lift(&self, new_dim: usize) -> Result<PolyVF, SymError> {
        if new_dim < self.dim() {
            return Err(SymError::DimensionMismatch {
                expected: self.dim(),
                found: new_dim,
            });
        }
        let mut comps: Vec<Poly> = self.comps.iter().map(|c| c.with_arity(new_dim)).collect();
        comps.resize(new_dim, Poly::zero(new_dim));
        Ok(VectorField { comps })
    }

    pub fn scale_poly(&self, f: &Poly) -> PolyVF {
        VectorField {
            comps: self.comps.iter().map(|c| c * f).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> PolyVF {
        VectorField {
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn eval_f64(&self, p: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|c| c.eval_f64(p)).collect()
    }
}

impl RatVF {
    pub fn lift(&self, new_dim: usize) -> Result<RatVF, SymError> {
        if new_dim < self.dim() {
            return Err(SymError::DimensionMismatch {
                expected: self.dim(),
                found: new_dim,
            });
        }
        let mut comps: Vec<RatFn> = self.comps.iter().map(|c| c.with_arity(new_dim)).collect();
        comps.resize(new_dim, RatFn::zero(new_dim));
        Ok(VectorField { comps })
    }
}

fn check_dims(expected: usize, found: usize) -> Result<(), SymError> {
    if expected == found {
        Ok(())
    } else {
        Err(SymError::DimensionMismatch { expected, found })
    }
}

/// Free-function form of [`VectorField::lie_bracket`].
pub fn lie_bracket<S: Scalar>(f: &VectorField<S>, g: &VectorField<S>) -> Result<VectorField<S>, SymError> {
    f.lie_bracket(g)
}

/// Free-function form of [`VectorField::lie_derivative`].
pub fn lie_derivative<S: Scalar>(f: &VectorField<S>, phi: &S) -> Result<S, SymError> {
    f.lie_derivative(phi)
}

/// `D(Phi) . f` written in source coordinates: component `i` is `L_f(Phi_i)`.
pub fn pushforward_in_source(phi: &[RatFn], f: &RatVF) -> Result<RatVF, SymError> {
    check_dims(f.dim(), phi.len())?;
    let comps = phi
        .iter()
        .map(|c| f.lie_derivative(c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorField { comps })
}

/// Evaluates the target field at `Phi`, i.e. `g ∘ Phi`, componentwise.
pub fn compose_field<S: Scalar>(g: &VectorField<S>, phi: &[RatFn]) -> Result<RatVF, SymError> {
    let comps = g
        .components()
        .iter()
        .map(|c| c.to_ratfn().compose(phi))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorField { comps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rational::q;

    fn engel() -> (PolyVF, PolyVF) {
        let n = 4;
        let x = |i: usize| Poly::var(n, i);
        let f1 = PolyVF::coordinate(n, 3);
        let f2 = VectorField::new(vec![Poly::one(n), x(2), x(3), Poly::zero(n)]).unwrap();
        (f1, f2)
    }

    #[test]
    fn engel_bracket() {
        let (f1, f2) = engel();
        assert_eq!(f1.lie_bracket(&f2).unwrap(), PolyVF::coordinate(4, 2));
        assert!(f1.lie_bracket(&f1).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_reads_component() {
        let (_, f2) = engel();
        assert_eq!(f2.lie_derivative(&Poly::var(4, 2)).unwrap(), Poly::var(4, 3));
    }

    #[test]
    fn evaluate_at_point() {
        let (_, f2) = engel();
        let p = vec![q(0), q(0), q(0), q(1)];
        assert_eq!(f2.evaluate(&p).unwrap(), vec![q(1), q(0), q(1), q(0)]);
    }

    #[test]
    fn dimension_mismatch() {
        let (f1, _) = engel();
        let g = PolyVF::coordinate(3, 0);
        assert!(matches!(f1.lie_bracket(&g), Err(SymError::DimensionMismatch { .. })));
    }

    #[test]
    fn rational_component_vanishing() {
        let one = RatFn::one(1);
        let f = RatVF::new(vec![&one / &RatFn::var(1, 0)]).unwrap();
        assert_eq!(f.evaluate(&[q(0)]), Err(SymError::DenominatorVanishes(0)));
    }

    #[test]
    fn pushforward_of_linear_map() {
        let phi = vec![RatFn::var(3, 0).scale(&q(2)), RatFn::var(3, 1), RatFn::var(3, 2)];
        let f = PolyVF::coordinate(3, 0).to_rat();
        let out = pushforward_in_source(&phi, &f).unwrap();
        assert_eq!(out.component(0), &RatFn::constant(3, q(2)));
        assert!(out.component(1).is_zero());
    }
}
