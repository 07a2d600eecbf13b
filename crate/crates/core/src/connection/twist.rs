//! Local basis changes `(e_1, ..., e_s, z e_{s+1}, ..., z e_r)` on
//! connection matrices written in a local coordinate z.

use super::MatK;
use crate::funcfield::FieldElem;
use crate::linalg::Matrix;
use crate::ratline::series::MatSeries;

/// `dz * dz_part + sum_j ds_j * ds_parts[j]`, all Laurent series in z.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMatForm {
    pub dz_part: MatSeries,
    pub ds_parts: Vec<MatSeries>,
}

impl LocalMatForm {
    pub fn dim(&self) -> usize {
        self.dz_part.dim()
    }

    /// Coefficients of negative powers of z in every component.
    pub fn polar_part(&self) -> Vec<(i64, MatK, Vec<MatK>)> {
        let lo = self.ds_parts.iter().map(|s| s.val).fold(self.dz_part.val, i64::min);
        (lo..0).map(|n| (n, self.dz_part.coeff(n), self.ds_parts.iter().map(|s| s.coeff(n)).collect())).collect()
    }
}

fn reblock(s: &MatSeries, split: usize, extra_dz_over_z: bool) -> MatSeries {
    let r = s.dim();
    let val = s.val - 1;
    let prec = s.prec - 1;
    let coeffs = (val..prec)
        .map(|n| {
            let cur = s.coeff(n);
            let prev = s.coeff(n - 1);
            let next = s.coeff(n + 1);
            let mut m = Matrix::zeros(r, r);
            for a in 0..r {
                for b in 0..r {
                    let v = match (a < split, b < split) {
                        (true, true) | (false, false) => cur.get(a, b).clone(),
                        (true, false) => prev.get(a, b).clone(),
                        (false, true) => next.get(a, b).clone(),
                    };
                    m.set(a, b, v);
                }
            }
            if extra_dz_over_z && n == -1 {
                for a in split..r {
                    let v = m.get(a, a) + &FieldElem::from_int(1);
                    m.set(a, a, v);
                }
            }
            m
        })
        .collect();
    MatSeries::from_coeffs(r, val, coeffs, prec)
}

/// Basis change multiplying the last `r - split` vectors by z:
/// `(A, B; C, D) -> (A, zB; C/z, D + dz/z)`. One order of precision is lost.
pub fn twist_block_step(f: &LocalMatForm, split: usize) -> LocalMatForm {
    LocalMatForm {
        dz_part: reblock(&f.dz_part, split, true),
        ds_parts: f.ds_parts.iter().map(|s| reblock(s, split, false)).collect(),
    }
}

/// Tensoring with the rank-1 connection `k dz/z`.
pub fn twist_scalar(f: &LocalMatForm, k: i64) -> LocalMatForm {
    let r = f.dim();
    let shift = MatSeries::from_coeffs(r, -1, vec![Matrix::scalar(r, FieldElem::from_int(k))], f.dz_part.prec);
    LocalMatForm { dz_part: f.dz_part.add(&shift), ds_parts: f.ds_parts.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    fn series(cs: Vec<MatK>, prec: i64) -> MatSeries {
        MatSeries::from_coeffs(2, 0, cs, prec)
    }

    #[test]
    fn block_diagonal_twist() {
        let a = Matrix::diag(&[FieldElem::var(0), fe(3)]);
        let f = LocalMatForm { dz_part: series(vec![a.clone(), a], 4), ds_parts: vec![] };
        let g = twist_block_step(&f, 1);
        let polar = g.polar_part();
        assert_eq!(polar.len(), 1);
        assert_eq!(polar[0].1, Matrix::diag(&[fe(0), fe(1)]));
    }

    #[test]
    fn generic_twist_and_twist_by_two() {
        let m0 = Matrix::from_rows(vec![vec![fe(1), fe(2)], vec![fe(5), fe(7)]]);
        let m1 = Matrix::from_rows(vec![vec![fe(0), fe(4)], vec![fe(6), fe(0)]]);
        let dsj = Matrix::from_rows(vec![vec![fe(0), fe(0)], vec![FieldElem::var(0), fe(0)]]);
        let f = LocalMatForm { dz_part: series(vec![m0, m1.clone()], 4), ds_parts: vec![series(vec![dsj.clone()], 4)] };
        let g = twist_block_step(&f, 1);
        let polar = g.polar_part();
        // (0, 0; C_0/z, dz/z)
        assert_eq!(polar[0].1, Matrix::from_rows(vec![vec![fe(0), fe(0)], vec![fe(5), fe(1)]]));
        assert_eq!(polar[0].2[0], dsj);
        // regular part: (A_0, 0; C_1, D_0)
        assert_eq!(g.dz_part.coeff(0), Matrix::from_rows(vec![vec![fe(1), fe(0)], vec![fe(6), fe(7)]]));
        let h = twist_scalar(&g, -2);
        assert_eq!(h.polar_part()[0].1, Matrix::from_rows(vec![vec![fe(-2), fe(0)], vec![fe(5), fe(-1)]]));
    }
}
