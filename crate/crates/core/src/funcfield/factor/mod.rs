//! Factorization of multivariate polynomials over Q into irreducibles.

mod multivariate;
mod univariate;
pub mod zp;

use num_rational::BigRational;

use super::gcd::{content_in, gcd};
use super::poly::Poly;

/// A factorization `unit * prod f_i^{e_i}` with each `f_i` irreducible,
/// integer-primitive and with positive leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: BigRational,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(self.unit.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e);
        }
        acc
    }
}

/// Factors a nonzero polynomial.
pub fn factor(p: &Poly) -> Factorization {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    let unit = p.rational_content();
    let prim = p.primitive();
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    let mc = prim.monomial_content();
    for (i, &e) in mc.exps().iter().enumerate() {
        if e > 0 {
            factors.push((Poly::var(i), e));
        }
    }
    let rest = if mc.is_one() {
        prim
    } else {
        prim.exact_div(&Poly::monomial(mc, BigRational::from_integer(1.into()))).unwrap()
    };
    factor_rec(&rest, 1, &mut factors);
    merge(&mut factors);
    factors.sort();
    Factorization { unit, factors }
}

fn merge(fs: &mut Vec<(Poly, u32)>) {
    fs.sort();
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (f, e) in fs.drain(..) {
        match out.last_mut() {
            Some((g, k)) if *g == f => *k += e,
            _ => out.push((f, e)),
        }
    }
    *fs = out;
}

fn factor_rec(p: &Poly, mult: u32, out: &mut Vec<(Poly, u32)>) {
    if p.is_constant() {
        return;
    }
    let vars = p.vars_used();
    // split off contents with respect to each variable
    for &v in &vars {
        let c = content_in(p, v);
        if !c.is_constant() {
            let q = p.exact_div(&c).unwrap();
            factor_rec(&c, mult, out);
            factor_rec(&q, mult, out);
            return;
        }
    }
    let x = *vars.iter().min_by_key(|&&v| (p.degree_in(v), v)).unwrap();
    for (part, k) in squarefree(p, x) {
        if part.is_constant() {
            continue;
        }
        for f in multivariate::factor_squarefree_multi(&part, x) {
            out.push((f.primitive(), mult * k));
        }
    }
}

/// Yun's squarefree decomposition with respect to `x` of a polynomial
/// primitive in `x`.
pub fn squarefree(p: &Poly, x: usize) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    let dp = p.derivative(x);
    let c = gcd(p, &dp);
    let mut w = p.exact_div(&c).unwrap();
    let mut y = dp.exact_div(&c).unwrap();
    let mut z = &y - &w.derivative(x);
    let mut i = 1;
    while !w.is_constant() {
        let g = gcd(&w, &z);
        out.push((g.clone(), i));
        w = w.exact_div(&g).unwrap();
        y = z.exact_div(&g).unwrap();
        z = &y - &w.derivative(x);
        i += 1;
    }
    out
}

/// Irreducible factors without multiplicity (for denominators).
pub fn irreducible_factors(p: &Poly) -> Vec<Poly> {
    factor(p).factors.into_iter().map(|(f, _)| f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn v(i: usize) -> Poly {
        Poly::var(i)
    }
    fn c(n: i64) -> Poly {
        Poly::from_int(n)
    }

    #[test]
    fn full_factorization_roundtrip() {
        let a = &(&v(0) * &v(1)) + &c(1);
        let b = &v(0) - &v(2);
        let p = (&(&a.pow(2) * &b) * &v(1).pow(3)).scale(&q(-6));
        let f = factor(&p);
        assert_eq!(f.expand(), p);
        assert_eq!(f.factors.len(), 3);
        assert!(f.factors.iter().any(|(g, e)| *g == a && *e == 2));
    }

    #[test]
    fn univariate_over_q() {
        let p = &(&(&v(0) * &v(0)) - &c(2)) * &(&v(0).scale(&q(3)) + &c(1));
        let f = factor(&p);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.expand(), p);
    }
}
