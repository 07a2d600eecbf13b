//! Absolute forms `f dt + sum c_j ds_j` with coefficients in K(t), their
//! residues, and partial-fraction decomposition of explicit quotients.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::pf::{PoleSet, PF};
use super::series::MatSeries;
use super::upoly::UPoly;
use crate::error::{Error, Result};
use crate::funcfield::{FieldElem, OneFormK};
use crate::linalg::Matrix;
use crate::scalar::Field;

type UPolyK = UPoly<FieldElem>;

/// Decomposes `num / den` into a polynomial part and principal parts at the
/// given poles. Fails if `den` vanishes somewhere else.
pub fn partial_fractions(num: &UPolyK, den: &UPolyK, poles: &PoleSet) -> Result<(UPolyK, PF<FieldElem>)> {
    if den.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut rest = den.clone();
    let mut principal = PF::zero();
    let mut mults = Vec::with_capacity(poles.len());
    for i in 0..poles.len() {
        let lin = UPoly::linear(poles.point(i));
        let mut k = 0u32;
        while let Some(q) = rest.exact_div(&lin) {
            if rest.degree() == Some(0) {
                break;
            }
            rest = q;
            k += 1;
        }
        mults.push(k);
    }
    if rest.degree() != Some(0) {
        return Err(Error::UncoveredPole);
    }
    for (i, &k) in mults.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let a = poles.point(i);
        let cof = den.exact_div(&UPoly::linear(a).pow(k)).unwrap();
        let n = num.taylor_shift(a);
        let c = cof.taylor_shift(a);
        // power series quotient n / c to k terms
        let c0inv = c.coeff(0).inv().unwrap();
        let mut q: Vec<FieldElem> = Vec::with_capacity(k as usize);
        for e in 0..k as usize {
            let mut acc = n.coeff(e);
            for (l, ql) in q.iter().enumerate() {
                acc = &acc - &(ql * &c.coeff(e - l));
            }
            q.push(&acc * &c0inv);
        }
        for (e, v) in q.into_iter().enumerate() {
            principal.add_term(i, k - e as u32, v);
        }
    }
    let (poly, _) = num.divrem(den);
    Ok((poly, principal))
}

/// `dt_part dt + sum_j base_part[j] ds_j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AbsForm1 {
    pub dt_part: PF<FieldElem>,
    pub base_part: BTreeMap<usize, PF<FieldElem>>,
}

/// `sum_j mixed_part[j] dt ^ ds_j + sum_{j<l} pure_part[(j,l)] ds_j ^ ds_l`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AbsForm2 {
    pub mixed_part: BTreeMap<usize, PF<FieldElem>>,
    pub pure_part: BTreeMap<(usize, usize), PF<FieldElem>>,
}

impl AbsForm1 {
    /// Absolute differential, given `da[j][i] = d a_i / d s_j`.
    pub fn d(&self, da: &[Vec<FieldElem>]) -> AbsForm2 {
        let mut out = AbsForm2::default();
        let dft = |f: &PF<FieldElem>| f.derivative_t();
        // d(f dt) = sum_j d_j f ds_j ^ dt = -sum_j d_j f dt ^ ds_j
        for (j, da_j) in da.iter().enumerate() {
            let mut m = self.dt_part.derivative_param(j, da_j).neg();
            if let Some(c) = self.base_part.get(&j) {
                m = m.add(&dft(c));
            }
            if !m.is_zero() {
                out.mixed_part.insert(j, m);
            }
        }
        for (&j, c) in &self.base_part {
            for (l, da_l) in da.iter().enumerate() {
                if l == j {
                    continue;
                }
                // d_l c ds_l ^ ds_j
                let v = c.derivative_param(l, da_l);
                if v.is_zero() {
                    continue;
                }
                let (key, v) = if l < j { ((l, j), v) } else { ((j, l), v.neg()) };
                let e = out.pure_part.entry(key).or_default();
                *e = e.add(&v);
            }
        }
        out.pure_part.retain(|_, v| !v.is_zero());
        out
    }
}

impl AbsForm2 {
    pub fn is_mixed_zero(&self) -> bool {
        self.mixed_part.values().all(|v| v.is_zero())
    }
}

/// `res_{t = a_i}` of the mixed part, with `res(f dt ^ w) = -c_{-1}(f) w`.
pub fn residue_form2(xi: &AbsForm2, poles: &PoleSet, i: usize) -> OneFormK {
    let mut out = OneFormK::zero();
    for (&j, f) in &xi.mixed_part {
        if let Some(c) = f.laurent_coeff(poles, i, -1) {
            out.set(j, -c);
        }
    }
    out
}

/// `res_{u = oo}(f du)` where `f` is given as a series in `v = 1/u`:
/// minus the coefficient of `u^{-1}`.
pub fn residue_at_infinity(f: &MatSeries) -> Matrix<FieldElem> {
    f.coeff(1).neg()
}

/// Scalar helper: `f = sum_n c_n u^n` (finitely many `n > 0`) as a series in
/// `v = 1/u` to absolute precision `prec`.
pub fn series_at_infinity(coeffs_in_u: &BTreeMap<i64, FieldElem>, prec: i64) -> MatSeries {
    let top = coeffs_in_u.keys().next_back().copied().unwrap_or(0).max(0);
    let val = -top;
    let cs = (val..prec)
        .map(|n| {
            let c = coeffs_in_u.get(&(-n)).cloned().unwrap_or_else(FieldElem::zero);
            Matrix::from_rows(vec![vec![c]])
        })
        .collect();
    MatSeries::from_coeffs(1, val, cs, prec)
}

/// `1 / f` for a scalar rational function at infinity (leading coefficient
/// must be invertible).
pub fn invert_at_infinity(f: &MatSeries) -> Option<MatSeries> {
    let shifted = MatSeries::from_coeffs(f.dim(), 0, f.coeffs.clone(), f.prec - f.val);
    let inv = shifted.inverse()?;
    Some(MatSeries::from_coeffs(f.dim(), -f.val, inv.coeffs, inv.prec - f.val))
}

impl PF<FieldElem> {
    /// Unit-coefficient form `dt`.
    pub fn dt_form(self) -> AbsForm1 {
        AbsForm1 { dt_part: self, base_part: BTreeMap::new() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn x() -> FieldElem {
        FieldElem::var(0)
    }

    #[test]
    fn decomposition_two_points() {
        let a = x();
        let b = FieldElem::from_int(3);
        let poles = PoleSet::new(vec![a.clone(), b.clone()]);
        let den = UPoly::linear(&a).mul(&UPoly::linear(&b));
        let (poly, pf) = partial_fractions(&UPoly::one(), &den, &poles).unwrap();
        assert!(poly.is_zero());
        assert_eq!(pf.coeff(0, 1).unwrap(), &(&a - &b).recip().unwrap());
        assert_eq!(pf.coeff(1, 1).unwrap(), &(&b - &a).recip().unwrap());
        let stray = UPoly::linear(&FieldElem::from_int(7));
        assert!(matches!(partial_fractions(&UPoly::one(), &stray, &poles), Err(Error::UncoveredPole)));
    }

    #[test]
    fn decomposition_round_trip() {
        let a = x();
        let b = FieldElem::from_int(-1);
        let poles = PoleSet::new(vec![a.clone(), b.clone()]);
        let num = UPoly::new(vec![FieldElem::from_int(2), x(), FieldElem::one(), FieldElem::one()]);
        let den = UPoly::linear(&a).pow(2).mul(&UPoly::linear(&b));
        let (poly, pf) = partial_fractions(&num, &den, &poles).unwrap();
        let t0 = FieldElem::from_int(5);
        let lhs = &num.eval(&t0) / &den.eval(&t0);
        let rhs = &poly.eval(&t0) + &pf.eval_at(&poles, &t0).unwrap().unwrap_or_else(FieldElem::zero);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn residue_anchors() {
        let poles = PoleSet::new(vec![FieldElem::var(1)]);
        // dx ^ dt/(t-a) = -dt ^ dx/(t-a)  ->  dx
        let mut xi = AbsForm2::default();
        xi.mixed_part.insert(0, PF::pole(0, 1, FieldElem::from_int(-1)));
        assert_eq!(residue_form2(&xi, &poles, 0), OneFormK::ds(0));
        let mut xi2 = AbsForm2::default();
        xi2.mixed_part.insert(0, PF::pole(0, 2, FieldElem::from_int(-1)));
        assert!(residue_form2(&xi2, &poles, 0).is_zero());
    }

    #[test]
    fn residue_at_infinity_anchors() {
        let one_over_u: BTreeMap<i64, FieldElem> = [(-1, FieldElem::one())].into_iter().collect();
        let r = residue_at_infinity(&series_at_infinity(&one_over_u, 4));
        assert_eq!(r.get(0, 0), &FieldElem::from_int(-1));
        let u: BTreeMap<i64, FieldElem> = [(1, FieldElem::one())].into_iter().collect();
        assert!(residue_at_infinity(&series_at_infinity(&u, 4)).is_zero());
        // g = u^2 + a, h = u^2: dg g^{-1} h = 2u^3/(u^2+a) du, residue 2a
        let a = x();
        let g: BTreeMap<i64, FieldElem> = [(2, FieldElem::one()), (0, a.clone())].into_iter().collect();
        let gi = invert_at_infinity(&series_at_infinity(&g, 6)).unwrap();
        let num: BTreeMap<i64, FieldElem> = [(3, FieldElem::from_int(2))].into_iter().collect();
        let prod = series_at_infinity(&num, 6).mul(&gi);
        assert_eq!(residue_at_infinity(&prod).get(0, 0), &(&a * &FieldElem::from_int(2)));
    }

    #[test]
    fn exterior_derivative_of_rank_one_anchor() {
        // alpha dt/t^2 - d(alpha)/t over Q(alpha): closed
        let alpha = x();
        let mut w = PF::pole(0, 2, alpha.clone()).dt_form();
        w.base_part.insert(0, PF::pole(0, 1, FieldElem::from_int(-1)));
        let da = vec![vec![FieldElem::zero()]];
        assert!(w.d(&da).is_mixed_zero());
        w.base_part.clear();
        let dw = w.d(&da);
        // -dt ^ d(alpha) / t^2
        assert_eq!(dw.mixed_part[&0], PF::pole(0, 2, FieldElem::from_int(-1)));
    }
}
