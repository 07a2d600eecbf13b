//! Rational functions in t over an exact field.

use std::fmt;

use super::upoly::UPoly;
use crate::scalar::Field;

/// `num / den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq)]
pub struct RatFn<F> {
    num: UPoly<F>,
    den: UPoly<F>,
}

impl<F: Field> RatFn<F> {
    pub fn new(num: UPoly<F>, den: UPoly<F>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) =
            if g.degree() == Some(0) { (num, den) } else { (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap()) };
        let inv = den.lc().inv().unwrap();
        RatFn { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> Self {
        RatFn { num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        RatFn { num: UPoly::constant(c), den: UPoly::one() }
    }

    pub fn from_poly(p: UPoly<F>) -> Self {
        RatFn { num: p, den: UPoly::one() }
    }

    /// The coordinate `t`.
    pub fn t() -> Self {
        Self::from_poly(UPoly::x())
    }

    /// `c / (t - a)^k`.
    pub fn pole(c: F, a: &F, k: u32) -> Self {
        Self::new(UPoly::constant(c), UPoly::linear(a).pow(k))
    }

    pub fn num(&self) -> &UPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    /// d/dt.
    pub fn derivative(&self) -> Self {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::new(n, self.den.mul(&self.den))
    }

    /// Value at `t = a`, `None` at a pole.
    pub fn eval(&self, a: &F) -> Option<F> {
        let d = self.den.eval(a);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(a) / d)
        }
    }

    /// Substitution `t = p / q` for polynomials `p, q`.
    pub fn compose_mobius(&self, p: &UPoly<F>, q: &UPoly<F>) -> Self {
        // homogenize: f(p/q) = q^{dd - dn} * N(p,q) / D(p,q)
        let hom = |f: &UPoly<F>, deg: usize| -> UPoly<F> {
            let mut acc = UPoly::zero();
            for (k, c) in f.coeffs().iter().enumerate() {
                acc = acc.add(&p.pow(k as u32).mul(&q.pow((deg - k) as u32)).scale(c));
            }
            acc
        };
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let deg = dn.max(dd);
        Self::new(hom(&self.num, deg), hom(&self.den, deg))
    }

    /// Applies `f` to every coefficient (e.g. a parameter derivative of the
    /// coefficients is not expressible this way; see callers).
    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> Self {
        Self::new(self.num.map(&f), self.den.map(&f))
    }
}

impl<F: Field> fmt::Debug for RatFn<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use num_rational::BigRational;

    type R = RatFn<BigRational>;

    #[test]
    fn partial_sum() {
        let a = R::pole(q(1), &q(0), 1);
        let b = R::pole(q(1), &q(1), 1);
        let s = a.sub(&b);
        // 1/t - 1/(t-1) = -1/(t(t-1))
        let expect = R::new(UPoly::constant(q(-1)), UPoly::new(vec![q(0), q(-1), q(1)]));
        assert_eq!(s, expect);
        assert_eq!(s.eval(&q(2)), Some(q(-1) / q(2)));
    }

    #[test]
    fn mobius_composition() {
        let f = R::pole(q(1), &q(2), 1);
        // t = 1/tau: 1/(1/tau - 2) = tau/(1 - 2 tau)
        let g = f.compose_mobius(&UPoly::one(), &UPoly::x());
        assert_eq!(g.eval(&q(3)), Some(q(3) / q(-5)));
    }
}
