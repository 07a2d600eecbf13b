//! The determinant of the Gauß-Manin connection from local data: a global
//! term, residues of `Tr(dG G^{-1} A)` at the singular points and a torsion
//! term.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::connection::{Connection, MatK};
use crate::error::{Error, Result};
use crate::funcfield::{d_k, dlog, dlog_class_reduce, DlogCertificate, FieldElem, OneFormK};
use crate::gaussmanin::gm_determinant_lhs;
use crate::linalg::Matrix;
use crate::ratline::pf::PF;
use crate::ratline::series::MatSeries;
use crate::ratline::upoly::UPoly;

/// `G = gamma_K prod_j (t - a_j)^{m_j} / dt` as matrix coefficients of `t^k`.
pub fn big_g(c: &Connection) -> Vec<MatK> {
    let r = c.rank();
    let n = c.npoints();
    let lin = |j: usize, e: u32| UPoly::linear(c.point(j)).pow(e);
    let mut out: Vec<MatK> = Vec::new();
    for k in 0..n {
        let mut others = UPoly::one();
        for j in 0..n {
            if j != k {
                others = others.mul(&lin(j, c.mult(j)));
            }
        }
        for rr in 1..=c.mult(k) {
            let g = c.g(k, rr);
            if g.is_zero() {
                continue;
            }
            let p = others.mul(&lin(k, c.mult(k) - rr));
            for (deg, coef) in p.coeffs().iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                while out.len() <= deg {
                    out.push(Matrix::zeros(r, r));
                }
                out[deg] = out[deg].add(&g.scale(coef));
            }
        }
    }
    while out.last().is_some_and(|m| m.is_zero()) {
        out.pop();
    }
    out
}

/// Evaluates a polynomial matrix at `t = x`.
pub fn eval_poly_matrix(p: &[MatK], x: &FieldElem, r: usize) -> MatK {
    let mut acc = Matrix::zeros(r, r);
    for m in p.iter().rev() {
        acc = acc.scale(x).add(m);
    }
    acc
}

/// A multiplier `c prod (t - p_l)^{n_l}` of the default section
/// `dt / prod (t - a_j)^{m_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionMultiplier {
    pub c: FieldElem,
    pub factors: Vec<(FieldElem, i64)>,
}

impl SectionMultiplier {
    pub fn one() -> Self {
        SectionMultiplier { c: FieldElem::one(), factors: Vec::new() }
    }

    pub fn is_one(&self) -> bool {
        self.c.is_one() && self.factors.iter().all(|(_, n)| *n == 0)
    }

    fn degree(&self) -> i64 {
        self.factors.iter().map(|(_, n)| n).sum()
    }

    fn check(&self, c: &Connection) -> Result<()> {
        if self.c.is_zero() {
            return Err(Error::BadSection("zero multiplier".into()));
        }
        for (p, _) in &self.factors {
            if (0..c.npoints()).any(|i| c.point(i) == p) {
                return Err(Error::BadSection("divisor meets a singular point".into()));
            }
        }
        Ok(())
    }
}

/// `Tr A` restricted to `t = p` (so `dt` becomes `dp`).
pub fn restrict_det(c: &Connection, p: &FieldElem) -> Result<OneFormK> {
    let mut out = c.eta0().trace();
    for j in 0..c.npoints() {
        let diff = p - c.point(j);
        let inv = diff.recip().ok_or(Error::BadSection("point lies in the divisor".into()))?;
        let dd = d_k(&diff);
        for r in 1..=c.mult(j) {
            let tr = c.g(j, r).trace();
            if !tr.is_zero() {
                out = out.add(&dd.scale(&(&tr * &inv.pow(r as i32))));
            }
        }
        for s in 1..=crate::connection::big_m(c.mult(j)) {
            let e = c.eta(j, s).trace();
            if !e.is_zero() {
                out = out.add(&e.scale(&inv.pow(s as i32)));
            }
        }
    }
    Ok(out)
}

/// `sum_p ord_p(f s) restrict_det(p)`, with the point at infinity
/// contributing `Tr(eta_0)`.
pub fn global_factor(c: &Connection, f: &SectionMultiplier) -> Result<OneFormK> {
    f.check(c)?;
    let m = c.total_mult() as i64;
    let at_inf = m - 2 - f.degree();
    let mut out = c.eta0().trace().scale(&FieldElem::from_int(at_inf));
    for (p, n) in &f.factors {
        out = out.add(&restrict_det(c, p)?.scale(&FieldElem::from_int(*n)));
    }
    Ok(out)
}

fn scalar_series(coeffs: Vec<FieldElem>, val: i64, prec: i64) -> MatSeries {
    MatSeries::from_coeffs(1, val, coeffs.into_iter().map(|x| Matrix::from_rows(vec![vec![x]])).collect(), prec)
}

/// Expansion of `1 / (t - p)` at `t = a`, `p != a`, to `prec` terms.
fn inv_linear_series(a: &FieldElem, p: &FieldElem, prec: i64) -> MatSeries {
    let d = (a - p).recip().unwrap();
    let mut cs = Vec::new();
    let mut pw = d.clone();
    for n in 0..prec.max(0) {
        let sign = if n % 2 == 0 { FieldElem::one() } else { -FieldElem::one() };
        cs.push(&sign * &pw);
        pw = &pw * &d;
    }
    scalar_series(cs, 0, prec)
}

/// How to invert `G` near a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseMethod {
    /// Matrix power-series inverse.
    Series,
    /// `adj(G) / det(G)` with a scalar series inverse.
    Adjugate,
}

/// `res_{t = a_i} Tr(dG G^{-1} A)` (with the section correction when `f`
/// is not 1).
pub fn local_residue_factor(c: &Connection, i: usize, f: &SectionMultiplier) -> Result<OneFormK> {
    local_residue_factor_with(c, i, f, InverseMethod::Series)
}

pub fn local_residue_factor_with(
    c: &Connection,
    i: usize,
    f: &SectionMultiplier,
    method: InverseMethod,
) -> Result<OneFormK> {
    let r = c.rank();
    let a = c.point(i);
    let m = c.mult(i) as i64;
    let prec = m + 1;
    let g = big_g(c);
    let gs = MatSeries::from_poly_at(&g, a, r, prec);
    let ginv = match method {
        InverseMethod::Series => gs.inverse().ok_or(Error::SingularLeadingMatrix(i))?,
        InverseMethod::Adjugate => {
            let adj: Vec<MatK> = adjugate_poly(&g, r);
            let det = det_poly(&g, r);
            let dets = scalar_series(
                UPoly::new(det).taylor_shift(a).coeffs().iter().take(prec as usize).cloned().collect(),
                0,
                prec,
            );
            let dinv = dets.inverse().ok_or(Error::SingularLeadingMatrix(i))?;
            let adjs = MatSeries::from_poly_at(&adj, a, r, prec);
            let mut out = adjs.clone();
            for (k, coeff) in out.coeffs.iter_mut().enumerate() {
                let mut acc = Matrix::zeros(r, r);
                for l in 0..=k {
                    let s = dinv.coeff(l as i64).get(0, 0).clone();
                    if !s.is_zero() {
                        acc = acc.add(&adjs.coeff((k - l) as i64).scale(&s));
                    }
                }
                *coeff = acc;
            }
            out
        }
    };
    let gt: Vec<MatK> = g.iter().enumerate().skip(1).map(|(k, m)| m.scale(&FieldElem::from_int(k as i64))).collect();
    let gts = MatSeries::from_poly_at(&gt, a, r, prec);
    let at = MatSeries::from_pf(&c.a_t(), c.poles(), i, r, 1);
    let gt_ginv = gts.mul(&ginv);
    let mut out = OneFormK::zero();
    for j in 0..c.nparams() {
        let gj: Vec<MatK> = g.iter().map(|m| m.map(|x| x.derivative(j))).collect();
        let gjs = MatSeries::from_poly_at(&gj, a, r, prec);
        let aj = MatSeries::from_pf(&c.a_dir(j), c.poles(), i, r, 1);
        let v1 = gjs.mul(&ginv).mul(&at).trace_coeff(-1);
        let v2 = gt_ginv.mul(&aj).trace_coeff(-1);
        let v = &v2 - &v1;
        if !v.is_zero() {
            out.set(j, v);
        }
    }
    if !f.is_one() {
        out = out.sub(&section_correction(c, i, f)?);
    }
    Ok(out)
}

/// `res_{t = a_i} Tr(df/f ^ A)` in the same normalization as the residue
/// factor.
fn section_correction(c: &Connection, i: usize, f: &SectionMultiplier) -> Result<OneFormK> {
    f.check(c)?;
    let a = c.point(i);
    let m = c.mult(i) as i64;
    let prec = m + 1;
    let tr = |s: &MatSeries| -> MatSeries {
        let cs = (s.val..s.prec).map(|n| s.trace_coeff(n)).collect();
        scalar_series(cs, s.val, s.prec)
    };
    let at = tr(&MatSeries::from_pf(&c.a_t(), c.poles(), i, c.rank(), 1));
    // f_t / f
    let mut ft = MatSeries::zero(1, prec);
    for (p, n) in &f.factors {
        ft = ft.add(&inv_linear_series(a, p, prec).scale(&FieldElem::from_int(*n)));
    }
    let dc = dlog(&f.c).unwrap_or_default();
    let mut out = OneFormK::zero();
    for j in 0..c.nparams() {
        // d_j f / f = d_j c / c - sum n d_j p / (t - p)
        let mut fj = scalar_series(vec![dc.coeff(j)], 0, prec);
        for (p, n) in &f.factors {
            let dp = p.derivative(j);
            if !dp.is_zero() {
                fj = fj.add(&inv_linear_series(a, p, prec).scale(&(&dp * &FieldElem::from_int(-n))));
            }
        }
        let aj = tr(&MatSeries::from_pf(&c.a_dir(j), c.poles(), i, c.rank(), 1));
        let v = &ft.mul(&aj).trace_coeff(-1) - &fj.mul(&at).trace_coeff(-1);
        if !v.is_zero() {
            out.set(j, v);
        }
    }
    Ok(out)
}

/// `1/2 sum_{m_i >= 2} m_i dlog det g_{m_i}`.
pub fn torsion_factor(c: &Connection) -> Result<OneFormK> {
    let mut out = OneFormK::zero();
    for i in 0..c.npoints() {
        let m = c.mult(i);
        if m < 2 {
            continue;
        }
        let det = c.g(i, m).det();
        let w = dlog(&det).map_err(|_| Error::SingularLeadingMatrix(i))?;
        out = out.add(&w.scale_q(&BigRational::new((m as i64).into(), 2.into())));
    }
    Ok(out)
}

/// `res_{t = a_i} Tr(dG G^{-1} eta^{(i)})`, same orientation as the local
/// factor: only the polar part of `eta` at `a_i` enters.
pub fn local_eta_residue(c: &Connection, i: usize) -> Result<OneFormK> {
    let r = c.rank();
    let a = c.point(i);
    let prec = c.mult(i) as i64 + 1;
    let g = big_g(c);
    let ginv = MatSeries::from_poly_at(&g, a, r, prec).inverse().ok_or(Error::SingularLeadingMatrix(i))?;
    let gt: Vec<MatK> = g.iter().enumerate().skip(1).map(|(k, m)| m.scale(&FieldElem::from_int(k as i64))).collect();
    let gt_ginv = MatSeries::from_poly_at(&gt, a, r, prec).mul(&ginv);
    let mut out = OneFormK::zero();
    for j in 0..c.nparams() {
        let mut eta = PF::zero();
        for s in 1..=crate::connection::big_m(c.mult(i)) {
            eta.add_term(i, s, c.eta(i, s).part(j).clone());
        }
        let v = gt_ginv.mul(&MatSeries::from_pf(&eta, c.poles(), i, r, 1)).trace_coeff(-1);
        if !v.is_zero() {
            out.set(j, v);
        }
    }
    Ok(out)
}

/// `sum_{i != j} sum_r Tr(g_r^{(i)}) m_j (a_j - a_i)^{-r} d(a_j - a_i)`.
pub fn explicit_psi_sum(c: &Connection) -> OneFormK {
    let mut out = OneFormK::zero();
    for i in 0..c.npoints() {
        for j in 0..c.npoints() {
            if i == j {
                continue;
            }
            let diff = c.point(j) - c.point(i);
            let d = d_k(&diff);
            if d.is_zero() {
                continue;
            }
            let inv = diff.recip().expect("distinct points");
            let mut coef = FieldElem::zero();
            for rr in 1..=c.mult(i) {
                coef = &coef + &(&c.g(i, rr).trace() * &inv.pow(rr as i32));
            }
            out = out.add(&d.scale(&(&coef * &FieldElem::from_int(c.mult(j) as i64))));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhsBreakdown {
    pub global: OneFormK,
    pub residues: BTreeMap<usize, OneFormK>,
    pub torsion: OneFormK,
    pub total: OneFormK,
}

pub fn gm_determinant_rhs(c: &Connection, f: &SectionMultiplier) -> Result<RhsBreakdown> {
    let global = global_factor(c, f)?;
    let mut residues = BTreeMap::new();
    let mut sum = OneFormK::zero();
    for i in 0..c.npoints() {
        let v = local_residue_factor(c, i, f)?;
        sum = sum.add(&v);
        residues.insert(i, v);
    }
    let torsion = torsion_factor(c)?;
    let total = global.neg().add(&sum).add(&torsion);
    Ok(RhsBreakdown { global, residues, torsion, total })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub lhs: OneFormK,
    pub rhs: RhsBreakdown,
    pub difference_certificate: Option<DlogCertificate>,
    pub verdict: bool,
}

pub fn verify(c: &Connection) -> Result<VerifyReport> {
    verify_with_section(c, &SectionMultiplier::one())
}

pub fn verify_with_section(c: &Connection, f: &SectionMultiplier) -> Result<VerifyReport> {
    let lhs = gm_determinant_lhs(c)?;
    let rhs = gm_determinant_rhs(c, f)?;
    let cert = dlog_class_reduce(&lhs.sub(&rhs.total), false);
    let verdict = cert.as_ref().is_some_and(|c| c.is_integral());
    Ok(VerifyReport { lhs, rhs, difference_certificate: cert, verdict })
}

/// Polynomial matrix product helpers for the adjugate route.
fn poly_mat_entry(p: &[MatK], r: usize, c: usize) -> UPoly<FieldElem> {
    UPoly::new(p.iter().map(|m| m.get(r, c).clone()).collect())
}

pub(crate) fn det_poly(p: &[MatK], r: usize) -> Vec<FieldElem> {
    let entries: Vec<Vec<UPoly<FieldElem>>> =
        (0..r).map(|a| (0..r).map(|b| poly_mat_entry(p, a, b)).collect()).collect();
    det_rec(&entries).into_coeffs()
}

fn det_rec(m: &[Vec<UPoly<FieldElem>>]) -> UPoly<FieldElem> {
    let n = m.len();
    if n == 0 {
        return UPoly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = UPoly::zero();
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<UPoly<FieldElem>>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != col).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = m[0][col].mul(&det_rec(&minor));
        acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

pub(crate) fn adjugate_poly(p: &[MatK], r: usize) -> Vec<MatK> {
    let entries: Vec<Vec<UPoly<FieldElem>>> =
        (0..r).map(|a| (0..r).map(|b| poly_mat_entry(p, a, b)).collect()).collect();
    let mut cells: Vec<Vec<UPoly<FieldElem>>> = vec![vec![UPoly::zero(); r]; r];
    for a in 0..r {
        for b in 0..r {
            let minor: Vec<Vec<UPoly<FieldElem>>> = (0..r)
                .filter(|&x| x != a)
                .map(|x| (0..r).filter(|&y| y != b).map(|y| entries[x][y].clone()).collect())
                .collect();
            let d = det_rec(&minor);
            // adj[b][a] = (-1)^{a+b} M_{ab}
            cells[b][a] = if (a + b) % 2 == 0 { d } else { d.neg() };
        }
    }
    let deg = cells.iter().flatten().filter_map(|p| p.degree()).max().unwrap_or(0);
    (0..=deg).map(|k| Matrix::from_fn(r, r, |a, b| cells[a][b].coeff(k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_g_single_point() {
        let c = crate::fixtures::single_point();
        let g = big_g(&c);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].get(0, 0), &FieldElem::var(0));
        assert!(local_residue_factor(&c, 0, &SectionMultiplier::one()).unwrap().is_zero());
        assert!(global_factor(&c, &SectionMultiplier::one()).unwrap().is_zero());
        let rep = verify(&c).unwrap();
        assert!(rep.verdict);
        assert!(rep.lhs.is_zero());
    }
}
