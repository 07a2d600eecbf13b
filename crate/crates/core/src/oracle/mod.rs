//! Independent brute-force checks of the standalone identities, and a
//! generator of random vertical connections.

pub mod companion;
pub mod random;
pub mod suites;

pub use companion::{
    commutator_identity_check, companion_matrix, companion_operator, companion_power_trace, companion_trace,
    euler_residue_trace, lemma62_sum, MatPolyU,
};
pub use random::{solve_verticality, vertical_random, Sampler, Shape};

use num_traits::Zero;

use crate::cohomology::{derham_operator, higgs_operator};
use crate::connection::{big_m, Connection, MatFormK};
use crate::error::Result;
use crate::funcfield::{dlog_class_reduce, FieldElem, OneFormK};
use crate::localformula::torsion_factor;

/// `prod (1 - d u)^e` as coefficients in `u`.
fn binomial_product(factors: &[(FieldElem, u32)]) -> Vec<FieldElem> {
    let mut out = vec![FieldElem::from_int(1)];
    for (d, e) in factors {
        for _ in 0..*e {
            let mut next = vec![FieldElem::from_int(0); out.len() + 1];
            for (k, c) in out.iter().enumerate() {
                next[k] = &next[k] + c;
                next[k + 1] = &next[k + 1] - &(c * d);
            }
            out = next;
        }
    }
    out
}

/// `g(u) = theta gamma_K` in `u = 1/(t - a_i)`, with
/// `theta = prod_{j != i} (1 - (a_j - a_i) u)^{m_j}`.
pub fn local_g(c: &Connection, i: usize) -> MatPolyU {
    let r = c.rank();
    let n = c.npoints();
    let total = c.total_mult() as usize;
    let mut coeffs = vec![crate::linalg::Matrix::zeros(r, r); total + 1];
    for j in 0..n {
        let mj = c.mult(j);
        for s in 1..=mj {
            let gs = c.g(j, s);
            if gs.is_zero() {
                continue;
            }
            let factors: Vec<(FieldElem, u32)> = (0..n)
                .filter(|&k| k != i)
                .map(|k| {
                    let e = if k == j { c.mult(k) - s } else { c.mult(k) };
                    (c.point(k) - c.point(i), e)
                })
                .collect();
            for (k, b) in binomial_product(&factors).iter().enumerate() {
                if !b.is_zero() {
                    let idx = k + s as usize;
                    coeffs[idx] = coeffs[idx].add(&gs.scale(b));
                }
            }
        }
    }
    MatPolyU::new(r, coeffs)
}

/// `h(u) = sum_s eta_s^{(i)} u^s` in direction `j`.
pub fn local_h(c: &Connection, i: usize, j: usize) -> MatPolyU {
    let r = c.rank();
    let mut coeffs = vec![crate::linalg::Matrix::zeros(r, r)];
    for s in 1..=big_m(c.mult(i)) {
        coeffs.push(c.eta(i, s).part(j).clone());
    }
    MatPolyU::new(r, coeffs)
}

/// Trace on H of the Higgs operator of `eta^{(i)}` alone.
pub fn higgs_point_trace(c: &Connection, i: usize) -> Result<OneFormK> {
    let r = c.rank();
    let p = c.nparams();
    let eta = (0..c.npoints())
        .map(|k| (1..=big_m(c.mult(k))).map(|s| if k == i { c.eta(k, s) } else { MatFormK::zero(r, p) }).collect())
        .collect();
    let only = c.with_eta(eta, MatFormK::zero(r, p))?;
    Ok(higgs_operator(&only)?.trace())
}

/// Trace of `eta^{(i)}` on `V[u]/gV[u]`, per direction.
pub fn companion_point_trace(c: &Connection, i: usize) -> Result<OneFormK> {
    let g = local_g(c, i);
    let mut out = OneFormK::zero();
    for j in 0..c.nparams() {
        let v = companion_trace(&g, &local_h(c, i, j))?.trace();
        if !v.is_zero() {
            out.set(j, v);
        }
    }
    Ok(out)
}

/// `Tr(eta_gamma - eta_nabla) - 1/2 sum m_i dlog det g_{m_i}` and whether it
/// lies in `dlog K^x`.
pub fn higgs_derham_comparison(c: &Connection) -> Result<(OneFormK, bool)> {
    let w = higgs_operator(c)?.trace().sub(&derham_operator(c)?.trace()).sub(&torsion_factor(c)?);
    let ok = dlog_class_reduce(&w, false).is_some_and(|cert| cert.is_integral());
    Ok((w, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn local_g_leading_and_low_order() {
        let c = fixtures::two_point();
        for i in 0..c.npoints() {
            let g = local_g(&c, i);
            assert_eq!(g.degree(), Some(c.total_mult() as usize));
            assert!(g.coeff(0).is_zero() && g.coeff(1).is_zero());
        }
    }

    #[test]
    fn bridge_on_fixtures() {
        for c in [fixtures::single_point(), fixtures::two_point(), fixtures::rank_two()] {
            for i in 0..c.npoints() {
                assert_eq!(higgs_point_trace(&c, i).unwrap(), companion_point_trace(&c, i).unwrap());
            }
        }
    }
}
