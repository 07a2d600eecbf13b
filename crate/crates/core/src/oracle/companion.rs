//! Matrix polynomials in `u`, the action of `h` on `V[u]/gV[u]`, and the
//! residue side of the trace identity.

use num_traits::Zero;

use crate::connection::MatK;
use crate::error::{Error, Result};
use crate::funcfield::FieldElem;
use crate::linalg::Matrix;
use crate::localformula::{adjugate_poly, det_poly};
use crate::ratline::upoly::UPoly;

/// `sum_k coeffs[k] u^k` with `r x r` coefficients over K.
#[derive(Clone, Debug, PartialEq)]
pub struct MatPolyU {
    rank: usize,
    coeffs: Vec<MatK>,
}

impl MatPolyU {
    /// Trailing zero coefficients are dropped.
    pub fn new(rank: usize, mut coeffs: Vec<MatK>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        MatPolyU { rank, coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        MatPolyU { rank, coeffs: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coeffs(&self) -> &[MatK] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> MatK {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Matrix::zeros(self.rank, self.rank))
    }

    pub fn leading(&self) -> Option<&MatK> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        MatPolyU::new(self.rank, (0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        MatPolyU::new(self.rank, (0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return MatPolyU::zero(self.rank);
        }
        let mut out = vec![Matrix::zeros(self.rank, self.rank); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        MatPolyU::new(self.rank, out)
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn derivative(&self) -> Self {
        let cs = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(&FieldElem::from_int(k as i64))).collect();
        MatPolyU::new(self.rank, cs)
    }
}

/// Leading coefficient of `g` and its inverse.
fn leading_inverse(g: &MatPolyU) -> Result<MatK> {
    g.leading().and_then(|l| l.inverse()).ok_or(Error::SingularLeading)
}

/// Representative of `p` in `V + Vu + ... + Vu^{m-1}` modulo `g V[u]`
/// (columns of `p` are vectors of `V[u]`).
fn reduce(p: &MatPolyU, g: &MatPolyU, lead_inv: &MatK) -> Vec<MatK> {
    let m = g.degree().expect("nonzero modulus");
    let r = p.rank();
    let mut cs: Vec<MatK> = p.coeffs().to_vec();
    cs.resize(cs.len().max(m), Matrix::zeros(r, r));
    for d in (m..cs.len()).rev() {
        let top = cs[d].clone();
        if top.is_zero() {
            continue;
        }
        let w = lead_inv.mul(&top);
        for (k, gk) in g.coeffs().iter().enumerate() {
            let idx = d - m + k;
            cs[idx] = cs[idx].sub(&gk.mul(&w));
        }
    }
    cs.truncate(m);
    cs
}

/// Matrix (size `r m`) of `V[u]/gV[u] -> V[u] --h--> V[u] -> V[u]/gV[u]` in
/// the basis `V, Vu, ..., Vu^{m-1}`; block `(k', k)` is the `u^{k'}`
/// component of the image of `V u^k`.
pub fn companion_operator(g: &MatPolyU, h: &MatPolyU) -> Result<MatK> {
    let lead_inv = leading_inverse(g)?;
    let m = g.degree().unwrap();
    let r = g.rank();
    let mut out = Matrix::zeros(r * m, r * m);
    for k in 0..m {
        let mut shifted = vec![Matrix::zeros(r, r); k];
        shifted.extend(h.coeffs().iter().cloned());
        let red = reduce(&MatPolyU::new(r, shifted), g, &lead_inv);
        for (kk, blk) in red.iter().enumerate() {
            out.set_block(kk * r, k * r, blk);
        }
    }
    Ok(out)
}

/// Sum of the diagonal `r x r` blocks of the operator of `h` on
/// `V[u]/gV[u]`.
pub fn companion_trace(g: &MatPolyU, h: &MatPolyU) -> Result<MatK> {
    let lead_inv = leading_inverse(g)?;
    let m = g.degree().unwrap();
    let r = g.rank();
    let mut acc = Matrix::zeros(r, r);
    for k in 0..m {
        let mut shifted = vec![Matrix::zeros(r, r); k];
        shifted.extend(h.coeffs().iter().cloned());
        let red = reduce(&MatPolyU::new(r, shifted), g, &lead_inv);
        acc = acc.add(&red[k]);
    }
    Ok(acc)
}

/// `-Tr_V res_{u = oo}(dg g^{-1} h)`, with `g^{-1} = adj(g) / det(g)`: only
/// the remainder of `Tr(dg adj(g) h)` modulo `det g` has a residue.
pub fn euler_residue_trace(g: &MatPolyU, h: &MatPolyU) -> Result<FieldElem> {
    leading_inverse(g)?;
    if h.is_zero() {
        return Ok(FieldElem::zero());
    }
    let r = g.rank();
    let det = UPoly::new(det_poly(g.coeffs(), r));
    let adj = MatPolyU::new(r, adjugate_poly(g.coeffs(), r));
    let p = g.derivative().mul(&adj).mul(h);
    let tr = UPoly::new(p.coeffs().iter().map(|c| c.trace()).collect());
    let d = det.degree().ok_or(Error::SingularLeading)?;
    if d == 0 {
        return Ok(FieldElem::zero());
    }
    Ok(&tr.rem(&det).coeff(d - 1) / &det.lc())
}

/// Block companion matrix of `u^m + a_1 u^{m-1} + ... + a_m`:
/// identity blocks below the diagonal, last column `-a_m, ..., -a_1`.
pub fn companion_matrix(a: &[MatK]) -> MatK {
    let m = a.len();
    let r = a[0].rows();
    let mut out = Matrix::zeros(r * m, r * m);
    for i in 1..m {
        out.set_block(i * r, (i - 1) * r, &Matrix::identity(r));
    }
    for i in 0..m {
        out.set_block(i * r, (m - 1) * r, &a[m - 1 - i].neg());
    }
    out
}

/// Naive block trace of `M^p`.
pub fn companion_power_trace(a: &[MatK], p: u32) -> MatK {
    let r = a[0].rows();
    let mp = companion_matrix(a).pow(p);
    let mut acc = Matrix::zeros(r, r);
    for k in 0..a.len() {
        acc = acc.add(&mp.submatrix(k * r, k * r, r, r));
    }
    acc
}

/// `sum_q (-1)^q sum a_{m_1} ... a_{m_q}` over compositions of `p` into parts
/// `1 <= m_k <= m` and indices `1 <= i <= m` with `m_1 >= m - i + 1`.
pub fn lemma62_sum(a: &[MatK], p: u32) -> MatK {
    let m = a.len() as u32;
    let r = a[0].rows();
    let mut acc = Matrix::zeros(r, r);
    // stack of (remaining, parts, product)
    let mut stack: Vec<(u32, Vec<u32>, MatK)> = vec![(p, Vec::new(), Matrix::identity(r))];
    while let Some((rem, parts, prod)) = stack.pop() {
        if rem == 0 {
            if parts.is_empty() {
                continue;
            }
            // number of admissible i for this m_1
            let weight = parts[0] as i64;
            let sign = if parts.len() % 2 == 0 { 1 } else { -1 };
            acc = acc.add(&prod.scale(&FieldElem::from_int(sign * weight)));
            continue;
        }
        for part in 1..=m.min(rem) {
            let mut ps = parts.clone();
            ps.push(part);
            stack.push((rem - part, ps, prod.mul(&a[part as usize - 1])));
        }
    }
    acc
}

/// `Tr(a_m^{-1} c_m)` where `c_m` is the `t^m` coefficient of `[a, b]`;
/// requires `a(0) = b(0) = 0` and no commutator terms above degree `m`.
pub fn commutator_identity_check(a: &MatPolyU, b: &MatPolyU) -> Result<FieldElem> {
    let bad = |s: &str| Err(Error::ConstraintViolated(s.into()));
    if !a.coeff(0).is_zero() || !b.coeff(0).is_zero() {
        return bad("constant terms must vanish");
    }
    let m = a.degree().ok_or(Error::SingularLeading)?;
    if b.degree().is_some_and(|d| d > m) {
        return bad("deg b exceeds deg a");
    }
    let lead_inv = leading_inverse(a)?;
    let c = a.commutator(b);
    if c.degree().is_some_and(|d| d > m) {
        return bad("commutator has terms above degree m");
    }
    Ok(lead_inv.mul(&c.coeff(m)).trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::FieldElem as F;

    fn s(x: F) -> MatK {
        Matrix::from_rows(vec![vec![x]])
    }

    fn scalar_poly(cs: Vec<F>) -> MatPolyU {
        MatPolyU::new(1, cs.into_iter().map(s).collect())
    }

    fn a() -> F {
        F::var(0)
    }

    #[test]
    fn quadratic_anchors() {
        let z = F::from_int(0);
        let one = F::from_int(1);
        let g = scalar_poly(vec![a(), z.clone(), one.clone()]);
        let h = scalar_poly(vec![z.clone(), one.clone()]);
        let op = companion_operator(&g, &h).unwrap();
        assert_eq!(op, Matrix::from_rows(vec![vec![z.clone(), -a()], vec![one.clone(), z.clone()]]));
        assert!(companion_trace(&g, &h).unwrap().trace().is_zero());
        let h2 = scalar_poly(vec![z.clone(), z.clone(), one.clone()]);
        let two_a = &a() * &F::from_int(-2);
        assert_eq!(companion_trace(&g, &h2).unwrap().trace(), two_a);
        assert_eq!(euler_residue_trace(&g, &h2).unwrap(), two_a);
        assert!(companion_trace(&g, &MatPolyU::zero(1)).unwrap().trace().is_zero());
        assert!(euler_residue_trace(&g, &MatPolyU::zero(1)).unwrap().is_zero());
    }

    #[test]
    fn constant_h_gives_m_trace() {
        let c = F::from_int(5);
        let g = scalar_poly(vec![F::from_int(1), a(), F::from_int(0), F::from_int(2)]);
        let h = scalar_poly(vec![c.clone()]);
        let expect = &c * &F::from_int(3);
        assert_eq!(companion_trace(&g, &h).unwrap().trace(), expect);
        assert_eq!(euler_residue_trace(&g, &h).unwrap(), expect);
    }

    #[test]
    fn singular_leading_is_rejected() {
        let g = MatPolyU::new(2, vec![Matrix::identity(2), Matrix::diag(&[F::from_int(1), F::from_int(0)])]);
        assert_eq!(companion_trace(&g, &g), Err(Error::SingularLeading));
        assert_eq!(euler_residue_trace(&g, &g), Err(Error::SingularLeading));
    }

    #[test]
    fn lemma62_anchors() {
        let a1 = s(F::var(0));
        let a2 = s(F::var(1));
        assert_eq!(lemma62_sum(std::slice::from_ref(&a1), 1), a1.neg());
        assert_eq!(lemma62_sum(&[a1.clone(), a2.clone()], 1), a1.neg());
        let expect = a1.mul(&a1).sub(&a2.scale(&F::from_int(2)));
        assert_eq!(lemma62_sum(&[a1.clone(), a2.clone()], 2), expect);
        assert_eq!(companion_power_trace(&[a1.clone(), a2.clone()], 2), expect);
        let z = s(F::from_int(0));
        assert!(lemma62_sum(&[z.clone(), z.clone(), z], 4).is_zero());
    }

    #[test]
    fn commutator_trivial_cases() {
        let one = Matrix::identity(2);
        let x = Matrix::from_rows(vec![vec![F::from_int(1), F::var(0)], vec![F::from_int(2), F::from_int(-1)]]);
        let z = Matrix::zeros(2, 2);
        let a = MatPolyU::new(2, vec![z.clone(), x.clone(), one.clone()]);
        let b = MatPolyU::new(2, a.coeffs().iter().map(|c| c.scale(&F::from_int(3))).collect());
        assert!(commutator_identity_check(&a, &b).unwrap().is_zero());
        let y = Matrix::from_rows(vec![vec![F::from_int(0), F::from_int(1)], vec![F::from_int(0), F::from_int(0)]]);
        let bad = MatPolyU::new(2, vec![z.clone(), z.clone(), y]);
        let a2 = MatPolyU::new(2, vec![z, x.clone(), x.add(&one)]);
        assert!(matches!(commutator_identity_check(&a2, &bad), Err(Error::ConstraintViolated(_))));
    }
}
