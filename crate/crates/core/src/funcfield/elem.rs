//! Elements of K = Q(s_1, ..., s_k) in canonical reduced form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::Poly;
use crate::scalar::Field;

/// `num / den` with `gcd(num, den) = 1` and `den` monic in graded-lex
/// order, so equal elements are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    num: Poly,
    den: Poly,
}

impl FieldElem {
    /// Builds and normalizes `num / den`. Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let c = den.as_constant().unwrap();
            return FieldElem { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) =
            if g.is_constant() { (num, den) } else { (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap()) };
        Self::normalized(num, den)
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            FieldElem { num, den }
        } else {
            let inv = lc.recip();
            FieldElem { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        FieldElem { num: p, den: Poly::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Poly::from_int(n))
    }

    /// The parameter `s_i`.
    pub fn var(i: usize) -> Self {
        Self::from_poly(Poly::var(i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars().max(self.den.nvars())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::normalized(self.den.clone(), self.num.clone()))
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FieldElem { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.recip().expect("negative power of zero") } else { self.clone() };
        FieldElem { num: base.num.pow(e.unsigned_abs()), den: base.den.pow(e.unsigned_abs()) }
    }

    /// Partial derivative with respect to `s_i`.
    pub fn derivative(&self, i: usize) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative(i));
        }
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return Self::new(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::new(num, &self.den * &self.den)
    }

    /// Evaluates at a rational point; `None` if the denominator vanishes.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    /// Substitutes `s_i = value`; `None` if the denominator vanishes.
    pub fn substitute(&self, i: usize, value: &BigRational) -> Option<Self> {
        let d = self.den.substitute(i, value);
        if d.is_zero() {
            return None;
        }
        Some(Self::new(self.num.substitute(i, value), d))
    }

    /// Canonical rendering `num` or `num/den`, parenthesized where the
    /// expression grammar needs it.
    pub fn render(&self, names: &[String]) -> String {
        let num = self.num.render(names);
        if self.den.is_one() {
            return num;
        }
        let den = self.den.render(names);
        let num = if num.contains(' ') { format!("({num})") } else { num };
        let den = if den.contains([' ', '*', '/', '-']) { format!("({den})") } else { den };
        format!("{num}/{den}")
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.den.cmp(&other.den).then_with(|| self.num.cmp(&other.num))
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl Zero for FieldElem {
    fn zero() -> Self {
        FieldElem { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for FieldElem {
    fn one() -> Self {
        FieldElem { num: Poly::one(), den: Poly::one() }
    }
}

fn add_impl(a: &FieldElem, b: &FieldElem, negate: bool) -> FieldElem {
    let bn = if negate { -&b.num } else { b.num.clone() };
    if a.num.is_zero() {
        return FieldElem { num: bn, den: b.den.clone() };
    }
    if bn.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        if a.den.is_one() {
            return FieldElem { num: &a.num + &bn, den: Poly::one() };
        }
        return FieldElem::new(&a.num + &bn, a.den.clone());
    }
    if a.den.is_one() {
        return FieldElem { num: &(&a.num * &b.den) + &bn, den: b.den.clone() };
    }
    if b.den.is_one() {
        return FieldElem { num: &a.num + &(&bn * &a.den), den: a.den.clone() };
    }
    let g = gcd(&a.den, &b.den);
    if g.is_constant() {
        let num = &(&a.num * &b.den) + &(&bn * &a.den);
        return FieldElem::normalized(num, &a.den * &b.den);
    }
    let ad = a.den.exact_div(&g).unwrap();
    let bd = b.den.exact_div(&g).unwrap();
    let num = &(&a.num * &bd) + &(&bn * &ad);
    if num.is_zero() {
        return FieldElem::zero();
    }
    let t = gcd(&num, &g);
    let (num, g) = if t.is_constant() { (num, g) } else { (num.exact_div(&t).unwrap(), g.exact_div(&t).unwrap()) };
    FieldElem::normalized(num, &(&ad * &bd) * &g)
}

fn mul_impl(a: &FieldElem, b: &FieldElem) -> FieldElem {
    if a.num.is_zero() || b.num.is_zero() {
        return FieldElem::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return FieldElem { num: &a.num * &b.num, den: Poly::one() };
    }
    if let Some(c) = a.as_constant() {
        return b.scale(&c);
    }
    if let Some(c) = b.as_constant() {
        return a.scale(&c);
    }
    let g1 = gcd(&a.num, &b.den);
    let g2 = gcd(&b.num, &a.den);
    let an = if g1.is_constant() { a.num.clone() } else { a.num.exact_div(&g1).unwrap() };
    let bd = if g1.is_constant() { b.den.clone() } else { b.den.exact_div(&g1).unwrap() };
    let bn = if g2.is_constant() { b.num.clone() } else { b.num.exact_div(&g2).unwrap() };
    let ad = if g2.is_constant() { a.den.clone() } else { a.den.exact_div(&g2).unwrap() };
    FieldElem::normalized(&an * &bn, &ad * &bd)
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        add_impl(self, o, false)
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        add_impl(self, o, true)
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        mul_impl(self, o)
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn div(self, o: &FieldElem) -> FieldElem {
        mul_impl(self, &o.recip().expect("division by zero in K"))
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $f(self, o: FieldElem) -> FieldElem {
                $tr::$f(&self, &o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Field for FieldElem {
    fn inv(&self) -> Option<Self> {
        self.recip()
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::constant(q.clone())
    }

    fn weight(&self) -> usize {
        if self.num.is_zero() {
            0
        } else if self.is_constant() {
            1
        } else {
            1 + self.num.len() + self.den.len()
        }
    }

    fn as_rational(&self) -> Option<BigRational> {
        self.as_constant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn s(i: usize) -> FieldElem {
        FieldElem::var(i)
    }

    #[test]
    fn canonical_form() {
        let a = &s(0) / &(&s(0) + &s(1));
        let b = (&s(0) * &FieldElem::from_int(2)) / (&s(0) * &FieldElem::from_int(2) + s(1).scale(&q(2)));
        assert_eq!(a, b);
        let c = &a + &(&s(1) / &(&s(0) + &s(1)));
        assert_eq!(c, FieldElem::one());
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivative_quotient_rule() {
        let a = &FieldElem::one() / &s(0);
        assert_eq!(a.derivative(0), -(&FieldElem::one() / &(&s(0) * &s(0))));
        assert!(a.derivative(1).is_zero());
    }

    #[test]
    fn henrici_shared_denominator() {
        let d = &s(0) - &s(1);
        let a = &FieldElem::one() / &(&d * &s(0));
        let b = &FieldElem::one() / &(&d * &s(1));
        let sum = &a + &b;
        let expect = &(&s(0) + &s(1)) / &(&(&d * &s(0)) * &s(1));
        assert_eq!(sum, expect);
    }
}
