//! Multivariate factorization by evaluation and Hensel lifting over Q[[y - c]].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::univariate::factor_squarefree_z;
use crate::funcfield::gcd::content_in;
use crate::funcfield::poly::{Monomial, Poly};
use crate::ratline::upoly::UPoly;

type UQ = UPoly<BigRational>;

/// Irreducible factors of `g`, which must be squarefree and primitive in `x`
/// with respect to the remaining variables.
pub fn factor_squarefree_multi(g: &Poly, x: usize) -> Vec<Poly> {
    let ys: Vec<usize> = g.vars_used().into_iter().filter(|&v| v != x).collect();
    if ys.is_empty() {
        return univariate_factors(g, x);
    }
    if g.degree_in(x) <= 1 {
        return vec![g.primitive()];
    }
    for attempt in 0..40i64 {
        let c: Vec<BigRational> = ys
            .iter()
            .enumerate()
            .map(|(k, _)| BigRational::from_integer(BigInt::from(eval_value(attempt, k))))
            .collect();
        let shifted = shift(g, &ys, &c);
        let image = at_origin(&shifted, &ys);
        if image.degree_in(x) != g.degree_in(x) {
            continue;
        }
        let uimage = to_upoly(&image, x);
        if uimage.gcd(&uimage.derivative()).degree() != Some(0) {
            continue;
        }
        let ufactors = univariate_factors(&image, x);
        if ufactors.len() == 1 {
            return vec![g.primitive()];
        }
        let factors = lift_and_recombine(&shifted, x, &ys, &ufactors);
        let neg: Vec<BigRational> = c.iter().map(|v| -v.clone()).collect();
        return factors.iter().map(|f| shift(f, &ys, &neg).primitive()).collect();
    }
    panic!("no good evaluation point found for multivariate factorization");
}

fn eval_value(attempt: i64, k: usize) -> i64 {
    if attempt == 0 {
        return 0;
    }
    let base = [1i64, -1, 2, -2, 3, -3, 5, -4, 7, -6];
    base[(attempt as usize + 3 * k) % base.len()] * (1 + attempt / 10)
}

fn shift(g: &Poly, ys: &[usize], c: &[BigRational]) -> Poly {
    let mut out = g.clone();
    for (&y, v) in ys.iter().zip(c) {
        if !v.is_zero() {
            out = out.compose(y, &(&Poly::var(y) + &Poly::constant(v.clone())));
        }
    }
    out
}

fn at_origin(g: &Poly, ys: &[usize]) -> Poly {
    let mut out = g.clone();
    for &y in ys {
        out = out.substitute(y, &BigRational::zero());
    }
    out
}

pub(crate) fn to_upoly(p: &Poly, x: usize) -> UQ {
    UPoly::new(p.coefficients_in(x).iter().map(|c| c.as_constant().expect("not univariate")).collect())
}

fn from_upoly(u: &UQ, x: usize) -> Poly {
    Poly::from_terms(u.coeffs().iter().enumerate().map(|(k, c)| (Monomial::var(x, k as u32), c.clone())))
}

/// Univariate factors over Q as primitive integer polynomials.
pub(crate) fn univariate_factors(g: &Poly, x: usize) -> Vec<Poly> {
    let p = g.primitive();
    let coeffs: Vec<BigInt> =
        p.coefficients_in(x).iter().map(|c| c.as_constant().expect("not univariate").to_integer()).collect();
    factor_squarefree_z(&coeffs)
        .into_iter()
        .map(|f| {
            Poly::from_terms(
                f.into_iter().enumerate().map(|(k, c)| (Monomial::var(x, k as u32), BigRational::from_integer(c))),
            )
            .primitive()
        })
        .collect()
}

/// Splits a polynomial in `x` with coefficients in Q[ys] into its
/// Y-monomial slices, each a univariate polynomial in `x`.
fn slices(p: &Poly, x: usize) -> Vec<(Monomial, UQ)> {
    let mut map: std::collections::BTreeMap<Monomial, Vec<(usize, BigRational)>> = Default::default();
    for (m, c) in p.terms() {
        let k = m.get(x) as usize;
        map.entry(m.with(x, 0)).or_default().push((k, c.clone()));
    }
    map.into_iter()
        .map(|(m, v)| {
            let n = v.iter().map(|t| t.0).max().unwrap() + 1;
            let mut cs = vec![BigRational::zero(); n];
            for (k, c) in v {
                cs[k] = c;
            }
            (m, UPoly::new(cs))
        })
        .collect()
}

fn unslice(parts: &[(Monomial, UQ)], x: usize) -> Poly {
    Poly::from_terms(parts.iter().flat_map(|(m, u)| {
        u.coeffs().iter().enumerate().map(move |(k, c)| (m.with(x, m.get(x) + k as u32), c.clone()))
    }))
}

/// Power series inverse of `l` (free of `x`) truncated to total Y-degree `b`.
fn series_inverse(l: &Poly, ys: &[usize], b: u32) -> Poly {
    let l0 = at_origin(l, ys).as_constant().unwrap();
    let inv0 = l0.recip();
    let mut inv = Poly::constant(inv0.clone());
    for d in 1..=b {
        let prod = (&l.truncate_in(ys, d) * &inv).homogeneous_part_in(ys, d);
        let next = prod.scale(&(-inv0.clone()));
        inv = &inv + &next;
    }
    inv
}

fn lift_and_recombine(g: &Poly, x: usize, ys: &[usize], ufactors: &[Poly]) -> Vec<Poly> {
    let lc = g.lc_in(x);
    let b = ys.iter().map(|&y| g.degree_in(y)).sum::<u32>() + lc.total_degree();
    let lcinv = series_inverse(&lc, ys, b);
    let monic_g = (&g.clone() * &lcinv).truncate_in(ys, b);
    let u: Vec<UQ> = ufactors.iter().map(|f| to_upoly(f, x).monic()).collect();
    let r = u.len();
    // Bezout cofactors: sum_i sigma_i * prod_{j != i} u_j = 1
    let sigma: Vec<UQ> = (0..r)
        .map(|i| {
            let others = (0..r).filter(|&j| j != i).fold(UQ::one(), |a, j| a.mul(&u[j]));
            let (gg, _, t) = u[i].ext_gcd(&others);
            debug_assert_eq!(gg.degree(), Some(0));
            t.rem(&u[i])
        })
        .collect();
    let mut f: Vec<Poly> = u.iter().map(|ui| from_upoly(ui, x)).collect();
    for d in 1..=b {
        let prod = f.iter().fold(Poly::one(), |a, fi| (&a * fi).truncate_in(ys, d));
        let err = (&monic_g - &prod).homogeneous_part_in(ys, d);
        if err.is_zero() {
            continue;
        }
        let parts = slices(&err, x);
        for i in 0..r {
            let delta: Vec<(Monomial, UQ)> =
                parts.iter().map(|(m, e)| (m.clone(), e.mul(&sigma[i]).rem(&u[i]))).collect();
            f[i] = &f[i] + &unslice(&delta, x);
        }
    }
    // recombination
    let mut rest = g.clone();
    let mut remaining: Vec<usize> = (0..r).collect();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= remaining.len() {
        let mut found = None;
        for subset in super::univariate::subsets(remaining.len(), s) {
            let lcr = rest.lc_in(x);
            let mut cand = lcr.clone();
            for &k in &subset {
                cand = (&cand * &f[remaining[k]]).truncate_in(ys, b);
            }
            if cand.degree_in(x) == 0 {
                continue;
            }
            let cont = content_in(&cand, x);
            let cand = cand.exact_div(&cont).unwrap().primitive();
            if let Some(q) = rest.exact_div(&cand) {
                found = Some((subset, cand, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                rest = q;
                remaining =
                    remaining.iter().enumerate().filter(|(k, _)| !subset.contains(k)).map(|(_, &v)| v).collect();
            }
            None => s += 1,
        }
    }
    if rest.degree_in(x) > 0 {
        out.push(rest.primitive());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> Poly {
        Poly::var(i)
    }
    fn c(n: i64) -> Poly {
        Poly::from_int(n)
    }

    #[test]
    fn bivariate_split() {
        let a = &(&v(0) * &v(0)) - &v(1);
        let b = &(&(&v(0) * &v(1)) + &c(1)) + &v(1).pow(2);
        let g = &a * &b;
        let mut fs = factor_squarefree_multi(&g, 0);
        fs.sort();
        let mut want = vec![a.primitive(), b.primitive()];
        want.sort();
        assert_eq!(fs, want);
    }

    #[test]
    fn irreducible_bivariate() {
        let g = &(&v(0) * &v(0)) - &(&v(1).pow(3) + &c(2));
        assert_eq!(factor_squarefree_multi(&g, 0).len(), 1);
    }

    #[test]
    fn spurious_univariate_split() {
        // x^2 - y irreducible though image at y = 1 splits
        let g = &(&v(0) * &v(0)) - &(&v(1) * &v(1)).scale(&crate::scalar::q(1));
        let fs = factor_squarefree_multi(&g, 0);
        assert_eq!(fs.len(), 2);
        let g2 = &(&v(0) * &v(0)) - &v(1);
        assert_eq!(factor_squarefree_multi(&g2, 0).len(), 1);
    }

    #[test]
    fn trivariate_split() {
        let a = &(&v(0) + &(&v(1) * &v(2))) + &c(3);
        let b = &(&(&v(0) * &v(0)) + &v(2)) - &v(1);
        let g = &a * &b;
        assert_eq!(factor_squarefree_multi(&g, 0).len(), 2);
    }
}
