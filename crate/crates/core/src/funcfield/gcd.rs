//! Multivariate polynomial gcd over Q.
//!
//! Recursive primitive pseudo-remainder sequences, with a cheap
//! evaluation test that detects coprime inputs (the common case when
//! normalizing field elements) before any PRS is run.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Monomial, Poly};
use crate::ratline::upoly::UPoly;

/// Greatest common divisor, normalized to be integer-primitive with a
/// positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let (m, other) = if a.is_monomial() { (a, b) } else { (b, a) };
        let g = m.leading_monomial().unwrap().gcd(&other.monomial_content());
        return Poly::monomial(g, BigRational::one());
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a1 = strip_monomial(a, &ma);
    let b1 = strip_monomial(b, &mb);
    let g = gcd_rec(&a1, &b1);
    let g = if mg.is_one() { g } else { g.mul_monomial(&mg, &BigRational::one()) };
    g.primitive()
}

fn strip_monomial(p: &Poly, m: &Monomial) -> Poly {
    if m.is_one() {
        return p.clone();
    }
    p.exact_div(&Poly::monomial(m.clone(), BigRational::one())).unwrap()
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    (a * &b.exact_div(&g).unwrap()).primitive()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Poly, v: usize) -> Poly {
    let mut cs = p.coefficients_in(v);
    cs.retain(|c| !c.is_zero());
    cs.sort_by_key(|c| c.len());
    let mut g = Poly::zero();
    for c in &cs {
        g = if g.is_zero() { c.primitive() } else { gcd(&g, c) };
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if let Some(qa) = a.exact_div(b) {
        let _ = qa;
        return b.primitive();
    }
    if let Some(qb) = b.exact_div(a) {
        let _ = qb;
        return a.primitive();
    }
    let va = a.vars_used();
    let vb = b.vars_used();
    // a variable used by only one side contributes only through its content
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd_many(&a.coefficients_in(v), b);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd_many(&b.coefficients_in(v), a);
    }
    // main variable: the one of smallest maximal degree keeps PRS short
    let v = *va.iter().min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v)).unwrap();
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let cg = if ca.is_one() || cb.is_one() { Poly::one() } else { gcd(&ca, &cb) };
    let pa = a.exact_div(&ca).unwrap();
    let pb = b.exact_div(&cb).unwrap();
    let g = if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 || coprime_by_evaluation(&pa, &pb, v) {
        Poly::one()
    } else {
        primitive_prs(&pa, &pb, v)
    };
    (&g * &cg).primitive()
}

fn gcd_many(cs: &[Poly], b: &Poly) -> Poly {
    let mut g = b.primitive();
    let mut cs: Vec<&Poly> = cs.iter().filter(|c| !c.is_zero()).collect();
    cs.sort_by_key(|c| c.len());
    for c in cs {
        g = gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

/// Sound test for `gcd = 1` of two polynomials primitive in `v`: map to
/// univariate polynomials in `v` at a point where both leading
/// coefficients survive; a constant image gcd bounds the true degree in `v`
/// by zero.
fn coprime_by_evaluation(a: &Poly, b: &Poly, v: usize) -> bool {
    let n = a.nvars().max(b.nvars());
    let la = a.lc_in(v);
    let lb = b.lc_in(v);
    for attempt in 0..3i64 {
        let point: Vec<BigRational> = (0..n)
            .map(|i| {
                let base = [3i64, 5, 7, 11, 13, 17, 19, 23][i % 8];
                BigRational::from_integer((base + 29 * attempt + i as i64).into())
            })
            .collect();
        if la.eval(&point).is_zero() || lb.eval(&point).is_zero() {
            continue;
        }
        let ua = univariate_image(a, v, &point);
        let ub = univariate_image(b, v, &point);
        return ua.gcd(&ub).degree() == Some(0);
    }
    false
}

pub(crate) fn univariate_image(p: &Poly, v: usize, point: &[BigRational]) -> UPoly<BigRational> {
    let mut pt = point.to_vec();
    UPoly::new(
        p.coefficients_in(v)
            .iter()
            .map(|c| {
                if pt.len() > v {
                    pt[v] = BigRational::zero();
                }
                c.eval(&pt)
            })
            .collect(),
    )
}

/// Pseudo-remainder of `a` by `b` in variable `v`.
pub fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lb = b.lc_in(v);
    let mut r = a.clone();
    let mut da = r.degree_in(v);
    if da < db {
        return r;
    }
    let mut steps = da - db + 1;
    while !r.is_zero() && r.degree_in(v) >= db {
        da = r.degree_in(v);
        let lr = r.lc_in(v);
        let shift = Poly::monomial(Monomial::var(v, da - db), BigRational::one());
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
        steps -= 1;
    }
    if steps > 0 {
        r = &r * &lb.pow(steps);
    }
    r
}

fn primitive_prs(a: &Poly, b: &Poly, v: usize) -> Poly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            return g.primitive();
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        let c = content_in(&r, v);
        let r = r.exact_div(&c).unwrap().primitive();
        f = g;
        g = r;
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
    fn z() -> Poly {
        Poly::var(2)
    }
    fn c(n: i64) -> Poly {
        Poly::from_int(n)
    }

    #[test]
    fn basic_gcds() {
        let f = &(&x() + &y()) * &(&x() - &c(2));
        let g = &(&x() + &y()) * &(&y() + &c(3));
        assert_eq!(gcd(&f, &g), &x() + &y());
        assert_eq!(gcd(&x(), &y()), Poly::one());
        assert_eq!(gcd(&(&x() * &y()), &(&x() * &x())), x());
        assert_eq!(gcd(&f.scale(&q(6)), &f.scale(&q(-4))), f.primitive());
    }

    #[test]
    fn trivariate() {
        let common = &(&(&x() * &y()) + &z()) + &c(1);
        let f = &common * &(&(&x() * &x()) - &z());
        let g = &common.pow(2) * &(&y() + &z());
        assert_eq!(gcd(&f, &g), common.primitive());
        let h = &(&x() - &y()).pow(3) * &(&z() + &c(1));
        let k = &(&x() - &y()).pow(2) * &(&z() - &c(1));
        assert_eq!(gcd(&h, &k), (&x() - &y()).pow(2).primitive());
    }

    #[test]
    fn content_only_gcd() {
        // common factor does not involve the main variable
        let f = &(&y() + &c(1)) * &(&x() + &c(1));
        let g = &(&y() + &c(1)) * &(&x() + &c(2));
        assert_eq!(gcd(&f, &g), &y() + &c(1));
    }
}
