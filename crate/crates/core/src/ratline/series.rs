//! Truncated Laurent series with square-matrix coefficients over K.

use num_traits::Zero;

use crate::funcfield::FieldElem;
use crate::linalg::Matrix;
use crate::ratline::pf::{PoleSet, PF};
use crate::ratline::upoly::UPoly;

type MatK = Matrix<FieldElem>;

/// `sum_{n = val}^{prec - 1} c_n z^n`, known modulo `z^prec`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatSeries {
    pub val: i64,
    pub prec: i64,
    pub coeffs: Vec<MatK>,
    dim: usize,
}

impl MatSeries {
    pub fn zero(dim: usize, prec: i64) -> Self {
        MatSeries { val: prec, prec, coeffs: Vec::new(), dim }
    }

    pub fn from_coeffs(dim: usize, val: i64, coeffs: Vec<MatK>, prec: i64) -> Self {
        let mut s = MatSeries { val, prec, coeffs, dim };
        s.coeffs.truncate((prec - val).max(0) as usize);
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient of `z^n` (zero outside the stored range).
    pub fn coeff(&self, n: i64) -> MatK {
        assert!(n < self.prec, "coefficient beyond precision");
        if n < self.val || (n - self.val) as usize >= self.coeffs.len() {
            return Matrix::zeros(self.dim, self.dim);
        }
        self.coeffs[(n - self.val) as usize].clone()
    }

    /// Expansion at `a_i` of a partial fraction with matrix coefficients.
    pub fn from_pf(f: &PF<MatK>, poles: &PoleSet, i: usize, dim: usize, prec: i64) -> Self {
        let val = -(f.order_at(i) as i64);
        let coeffs =
            (val..prec).map(|n| f.laurent_coeff(poles, i, n).unwrap_or_else(|| Matrix::zeros(dim, dim))).collect();
        MatSeries::from_coeffs(dim, val, coeffs, prec)
    }

    /// Taylor expansion at `t = a` of a polynomial with matrix coefficients
    /// (`p[k]` multiplies `t^k`).
    pub fn from_poly_at(p: &[MatK], a: &FieldElem, dim: usize, prec: i64) -> Self {
        let mut coeffs = vec![Matrix::zeros(dim, dim); prec.max(0) as usize];
        for r in 0..dim {
            for c in 0..dim {
                let u = UPoly::new(p.iter().map(|m| m.get(r, c).clone()).collect());
                let shifted = u.taylor_shift(a);
                for (n, v) in shifted.coeffs().iter().enumerate() {
                    if (n as i64) < prec {
                        coeffs[n].set(r, c, v.clone());
                    }
                }
            }
        }
        MatSeries::from_coeffs(dim, 0, coeffs, prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let val = self.val.min(o.val);
        let coeffs = (val..prec).map(|n| self.coeff(n).add(&o.coeff(n))).collect();
        MatSeries::from_coeffs(self.dim, val, coeffs, prec)
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        MatSeries {
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|m| m.scale(c)).collect(),
            dim: self.dim,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&FieldElem::from_int(-1))
    }

    /// Product; the precision is limited by the valuations of both factors.
    pub fn mul(&self, o: &Self) -> Self {
        let prec = (self.prec + o.val).min(o.prec + self.val);
        let val = self.val + o.val;
        let mut coeffs = Vec::new();
        for n in val..prec {
            let mut acc = Matrix::zeros(self.dim, self.dim);
            for k in self.val..=(n - o.val) {
                if k >= self.prec {
                    break;
                }
                let a = self.coeff(k);
                if a.is_zero() {
                    continue;
                }
                let b = o.coeff(n - k);
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&b));
            }
            coeffs.push(acc);
        }
        MatSeries::from_coeffs(self.dim, val, coeffs, prec)
    }

    /// Inverse of a power series with invertible constant term.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.val >= 0);
        let c0 = self.coeff(0);
        let inv0 = c0.inverse()?;
        let prec = self.prec;
        let mut out: Vec<MatK> = vec![inv0.clone()];
        for n in 1..prec {
            let mut acc = Matrix::zeros(self.dim, self.dim);
            for k in 1..=n {
                let a = self.coeff(k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&out[(n - k) as usize]));
            }
            out.push(inv0.mul(&acc).neg());
        }
        Some(MatSeries::from_coeffs(self.dim, 0, out, prec))
    }

    /// Coefficientwise derivative in the parameter `s_j` (at fixed z).
    pub fn deriv_param(&self, j: usize) -> Self {
        MatSeries {
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|m| m.map(|x| x.derivative(j))).collect(),
            dim: self.dim,
        }
    }

    /// d/dz.
    pub fn derivative_z(&self) -> Self {
        let coeffs = (self.val..self.prec)
            .map(|n| self.coeff(n).scale(&FieldElem::from_int(n)))
            .skip(if self.val == 0 { 1 } else { 0 })
            .collect();
        let val = if self.val == 0 { 0 } else { self.val - 1 };
        MatSeries::from_coeffs(self.dim, val, coeffs, self.prec - 1)
    }

    pub fn trace_coeff(&self, n: i64) -> FieldElem {
        let c = self.coeff(n);
        if c.is_zero() {
            FieldElem::zero()
        } else {
            c.trace()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: i64) -> MatK {
        Matrix::from_rows(vec![vec![FieldElem::from_int(v)]])
    }

    #[test]
    fn inverse_of_geometric() {
        // (1 - z)^{-1} = 1 + z + z^2 + ...
        let s = MatSeries::from_coeffs(1, 0, vec![scalar(1), scalar(-1)], 5);
        let inv = s.inverse().unwrap();
        for n in 0..5 {
            assert_eq!(inv.coeff(n), scalar(1));
        }
        let prod = s.mul(&inv);
        assert_eq!(prod.coeff(0), scalar(1));
        assert!(prod.coeff(3).is_zero());
    }

    #[test]
    fn laurent_times_taylor() {
        // (1/z^2 + 3/z)(2 + z) = 2/z^2 + 7/z + 3
        let a = MatSeries::from_coeffs(1, -2, vec![scalar(1), scalar(3), scalar(0), scalar(0)], 2);
        let b = MatSeries::from_coeffs(1, 0, vec![scalar(2), scalar(1), scalar(0), scalar(0)], 4);
        let p = a.mul(&b);
        assert_eq!(p.coeff(-2), scalar(2));
        assert_eq!(p.coeff(-1), scalar(7));
        assert_eq!(p.coeff(0), scalar(3));
    }
}
