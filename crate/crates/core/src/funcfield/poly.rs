//! Sparse multivariate polynomials over Q in the declared parameters.
//!
//! Terms are kept sorted in descending graded-lexicographic order with no
//! zero coefficients, so structural equality is mathematical equality.
//! Exponent vectors are stored with trailing zeros trimmed; a polynomial
//! therefore never records how many parameters exist, and polynomials over
//! prefixes of the same parameter list mix freely.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(i: usize, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut v = vec![0; i + 1];
        v[i] = e;
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.get(i) + other.get(i)).collect();
        Monomial(v)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let v = (0..self.0.len()).map(|i| self.get(i) - other.get(i)).collect();
        Some(Monomial::new(v))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().min(other.0.len());
        Monomial::new((0..n).map(|i| self.get(i).min(other.get(i))).collect())
    }

    pub fn with(&self, i: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        Monomial::new(v)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.get(i).cmp(&other.get(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in the parameters with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, BigRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// The parameter `s_i`.
    pub fn var(i: usize) -> Self {
        Poly { terms: vec![(Monomial::var(i, 1), BigRational::one())] }
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(it: I) -> Self {
        let mut map: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in it {
            if c.is_zero() {
                continue;
            }
            let e = map.entry(m).or_insert_with(BigRational::zero);
            *e += c;
        }
        Self::from_map(map)
    }

    fn from_map(map: HashMap<Monomial, BigRational>) -> Self {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    /// Number of variable slots touched (max index + 1).
    pub fn nvars(&self) -> usize {
        self.terms.iter().map(|t| t.0.exps().len()).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|t| t.0.get(i) > 0)
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.uses_var(i)).collect()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|t| t.0.get(i)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // multiplying by a monomial preserves the order
        Poly { terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if d.is_monomial() {
            let (dm, dc) = &d.terms[0];
            let inv = dc.recip();
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((m.div(dm)?, c * &inv));
            }
            return Some(Poly { terms: out });
        }
        let (dlm, dlc) = (&d.terms[0].0, d.terms[0].1.clone());
        // quick degree rejections
        for i in 0..d.nvars() {
            if d.degree_in(i) > self.degree_in(i) {
                return None;
            }
        }
        let mut rem: std::collections::BTreeMap<Monomial, BigRational> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((lm, lc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = lm.div(dlm)?;
            let qc = &lc / &dlc;
            for (m, c) in &d.terms {
                let key = m.mul(&qm);
                let val = c * &qc;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= &val;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -val);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(Poly { terms: quot })
    }

    /// Partial derivative with respect to `s_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.get(i);
            if e == 0 {
                None
            } else {
                Some((m.with(i, e - 1), c * BigRational::from_integer(BigInt::from(e))))
            }
        });
        // derivative can collide only if exponents differ in i alone, which
        // cannot happen after lowering every exponent by one; order may shift
        let mut terms: Vec<_> = terms.collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    /// Substitutes `s_i = value`.
    pub fn substitute(&self, i: usize, value: &BigRational) -> Poly {
        let mut cache: Vec<BigRational> = vec![BigRational::one()];
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let e = m.get(i) as usize;
            while cache.len() <= e {
                let next = cache.last().unwrap() * value;
                cache.push(next);
            }
            (m.with(i, 0), c * &cache[e])
        }))
    }

    /// Substitutes `s_i = p`.
    pub fn compose(&self, i: usize, p: &Poly) -> Poly {
        let mut powers: Vec<Poly> = vec![Poly::one()];
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in &self.terms {
            let e = m.get(i) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * p;
                powers.push(next);
            }
            let rest = m.with(i, 0);
            for (pm, pc) in &powers[e].terms {
                let v = acc.entry(rest.mul(pm)).or_insert_with(BigRational::zero);
                *v += c * pc;
            }
        }
        Poly::from_map(acc)
    }

    /// Full evaluation at a rational point (missing coordinates are 0).
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(BigRational::zero);
                    t *= num_traits::pow(x, e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// View as a univariate polynomial in `s_i`: `coeffs[k]` multiplies `s_i^k`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Poly> {
        let deg = self.degree_in(i) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.get(i) as usize].push((m.with(i, 0), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut ts| {
                ts.sort_by(|a, b| b.0.cmp(&a.0));
                Poly { terms: ts }
            })
            .collect()
    }

    /// Inverse of [`Poly::coefficients_in`].
    pub fn from_coefficients_in(i: usize, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                terms.push((m.with(i, m.get(i) + k as u32), a.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    /// Leading coefficient with respect to `s_i` (a polynomial free of `s_i`).
    pub fn lc_in(&self, i: usize) -> Poly {
        let d = self.degree_in(i);
        Poly::from_terms(self.terms.iter().filter(|(m, _)| m.get(i) == d).map(|(m, c)| (m.with(i, 0), c.clone())))
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some(t) => t.0.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |g, (m, _)| g.gcd(m))
    }

    /// Rational `c` such that `self / c` has coprime integer coefficients
    /// and a positive leading coefficient.
    pub fn rational_content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let c = BigRational::new(num, den);
        if self.leading_coeff().is_negative() {
            -c
        } else {
            c
        }
    }

    /// Integer-primitive normalization with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.rational_content();
        if c.is_one() {
            return self.clone();
        }
        self.scale(&c.recip())
    }

    /// Monic normalization (leading graded-lex coefficient 1).
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading_coeff();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Largest absolute coefficient (for integer polynomials).
    pub fn max_abs_coeff(&self) -> BigRational {
        self.terms.iter().map(|(_, c)| c.abs()).max().unwrap_or_else(BigRational::zero)
    }

    /// Keeps only terms whose exponents restricted to `vars` have total degree `d`.
    pub fn homogeneous_part_in(&self, vars: &[usize], d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().map(|&v| m.get(v)).sum::<u32>() == d)
                .cloned()
                .collect(),
        }
    }

    /// Drops terms whose total degree in `vars` exceeds `d`.
    pub fn truncate_in(&self, vars: &[usize], d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().map(|&v| m.get(v)).sum::<u32>() <= d)
                .cloned()
                .collect(),
        }
    }

    /// Renders with the given parameter names; unnamed slots print as `s<i>`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(m, names);
            if mono.is_empty() {
                out.push_str(&render_rational(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&render_rational(&a));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

pub(crate) fn render_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = names.get(i).cloned().unwrap_or_else(|| format!("s{}", i));
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{}^{}", name, e));
        }
    }
    parts.join("*")
}

impl Ord for Poly {
    /// Canonical total order: compares term lists in graded-lex order.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.0.cmp(&b.0) {
                Ordering::Equal => {}
                o => return o,
            }
            match a.1.cmp(&b.1) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

fn merge(a: &Poly, b: &Poly, negate_b: bool) -> Poly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        match a.terms[i].0.cmp(&b.terms[j].0) {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (m, c) = &b.terms[j];
                out.push((m.clone(), if negate_b { -c } else { c.clone() }));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a.terms[i].1 - &b.terms[j].1 } else { &a.terms[i].1 + &b.terms[j].1 };
                if !c.is_zero() {
                    out.push((a.terms[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    for (m, c) in &b.terms[j..] {
        out.push((m.clone(), if negate_b { -c } else { c.clone() }));
    }
    Poly { terms: out }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        merge(self, o, false)
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        merge(self, o, true)
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.is_monomial() {
            return o.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        if o.is_monomial() {
            return self.mul_monomial(&o.terms[0].0, &o.terms[0].1);
        }
        let mut acc: HashMap<Monomial, BigRational> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let v = acc.entry(m1.mul(m2)).or_insert_with(BigRational::zero);
                *v += c1 * c2;
            }
        }
        Poly::from_map(acc)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl std::ops::$tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                std::ops::$tr::$f(&self, &o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn grlex_order() {
        // x^2 > x*y > y^2 > x > y > 1
        let ms = [
            Monomial::new(vec![2]),
            Monomial::new(vec![1, 1]),
            Monomial::new(vec![0, 2]),
            Monomial::new(vec![1]),
            Monomial::new(vec![0, 1]),
            Monomial::one(),
        ];
        for w in ms.windows(2) {
            assert!(w[0] > w[1], "{:?} > {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn arithmetic_and_division() {
        let a = &(&x() + &y()) * &(&x() - &y());
        assert_eq!(a, &(&x() * &x()) - &(&y() * &y()));
        let b = &x() + &y();
        assert_eq!(a.exact_div(&b).unwrap(), &x() - &y());
        assert!(a.exact_div(&(&x() + &Poly::one())).is_none());
        assert_eq!(a.derivative(0), x().scale(&q(2)));
    }

    #[test]
    fn substitution() {
        let p = &(&x() * &x()) + &y();
        assert_eq!(p.substitute(0, &q(3)), &y() + &Poly::from_int(9));
        let shifted = p.compose(0, &(&x() + &Poly::one()));
        assert_eq!(shifted, &(&(&(&x() * &x()) + &x().scale(&q(2))) + &Poly::one()) + &y());
    }

    #[test]
    fn render() {
        let p = &(&x().scale(&q(-3)) * &y()) + &Poly::constant(crate::scalar::qq(1, 2));
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(p.render(&names), "-3*x*y + 1/2");
    }
}
