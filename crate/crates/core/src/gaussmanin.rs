//! The Gauß-Manin connection on H and its determinant, computed directly.

use crate::cohomology::{apply, basis_element, basis_lift_dir, eta_times, h_basis, project, Kind, WElem};
use crate::connection::{Connection, MatFormK};
use crate::error::Result;
use crate::funcfield::{d_k, FieldElem, OneFormK};

/// Gauß-Manin matrix on H split by origin: `psi_part` from the `g` terms,
/// `eta_part` from the `eta` terms. Column x holds the class of the image of
/// basis element x.
#[derive(Clone, Debug, PartialEq)]
pub struct GMMatrix {
    pub psi_part: MatFormK,
    pub eta_part: MatFormK,
}

impl GMMatrix {
    pub fn total(&self) -> MatFormK {
        self.psi_part.add(&self.eta_part)
    }
}

/// `sum_i m_i sum_{k != i} sum_s Tr(g_s^(k)) (a_i - a_k)^{-s} d(a_i - a_k)`.
pub fn psi_trace(c: &Connection) -> OneFormK {
    let mut out = OneFormK::zero();
    let n = c.npoints();
    for i in 0..n {
        for k in 0..n {
            if k == i {
                continue;
            }
            let diff = c.point(i) - c.point(k);
            let d = d_k(&diff);
            if d.is_zero() {
                continue;
            }
            let mut coef = FieldElem::from_int(0);
            for s in 1..=c.mult(k) {
                let tr = c.g(k, s).trace();
                coef = &coef + &(&tr * &c.poles().inv_diff_pow(i, k, s));
            }
            let coef = &coef * &FieldElem::from_int(c.mult(i) as i64);
            out = out.add(&d.scale(&coef));
        }
    }
    out
}

/// The g-originated part of the image of `s(x)`, coefficient of `ds_j ^ dt`:
/// `A^g_j f_x - A_t sigma_j`.
fn psi_image(c: &Connection, j: usize, f: &WElem, sigma: &WElem) -> WElem {
    let a_g = c.a_dir(j).sub(&c.eta_dir(j));
    apply(c, &a_g, f).sub(&apply(c, &c.a_t(), sigma))
}

pub fn gm_matrix(c: &Connection) -> Result<GMMatrix> {
    let basis = h_basis(c);
    let d = basis.len();
    let p = c.nparams();
    let mut rhs = Vec::with_capacity(2 * d * p);
    for j in 0..p {
        for x in &basis.labels {
            let f = basis_element(c, x);
            rhs.push(psi_image(c, j, &f, &basis_lift_dir(c, x, j)));
        }
    }
    for j in 0..p {
        for x in &basis.labels {
            rhs.push(eta_times(c, j, &basis_element(c, x)));
        }
    }
    let sol = project(c, Kind::DeRham, &rhs)?;
    let psi = (0..p).map(|j| sol.submatrix(0, j * d, d, d)).collect();
    let eta = (0..p).map(|j| sol.submatrix(0, (p + j) * d, d, d)).collect();
    Ok(GMMatrix { psi_part: MatFormK::from_parts(psi), eta_part: MatFormK::from_parts(eta) })
}

/// Same connection from the lift `f dt`: class of `d_j f + A_j f`.
pub fn gm_matrix_dt_lift(c: &Connection) -> Result<MatFormK> {
    let basis = h_basis(c);
    let d = basis.len();
    let mut rhs = Vec::new();
    for j in 0..c.nparams() {
        let da = c.da(j);
        for x in &basis.labels {
            let f = basis_element(c, x);
            rhs.push(f.derivative_param(j, &da).add(&apply(c, &c.a_dir(j), &f)));
        }
    }
    let sol = project(c, Kind::DeRham, &rhs)?;
    Ok(MatFormK::from_parts((0..c.nparams()).map(|j| sol.submatrix(0, j * d, d, d)).collect()))
}

/// The connection form on `det H_DR = (det H^1)^{-1}`: minus the trace.
pub fn gm_determinant_lhs(c: &Connection) -> Result<OneFormK> {
    Ok(gm_matrix(c)?.total().trace().neg())
}
