//! Local classification of singular points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Connection, MatK};
use crate::funcfield::factor::irreducible_factors;
use crate::funcfield::gcd::lcm;
use crate::funcfield::{FieldElem, Poly};

#[derive(Clone, Debug, PartialEq)]
pub enum PointClass {
    /// Multiplicity at least 2 with invertible leading matrix.
    Admissible,
    /// Simple pole whose residue has no eigenvalue in {0, 1, 2, ...}.
    LogarithmicDeligne,
    /// Simple pole with invertible residue.
    PseudoLog,
    /// Pseudo-logarithmic with block shape `(A + m dz/z, zB; C/z, D + n dz/z)`
    /// in the given basis, the first block of size `split`.
    SpecialPseudoLog {
        split: usize,
        m: BigRational,
        n: BigRational,
    },
    Invalid(String),
}

impl PointClass {
    pub fn tag(&self) -> &'static str {
        match self {
            PointClass::Admissible => "Admissible",
            PointClass::LogarithmicDeligne => "LogarithmicDeligne",
            PointClass::PseudoLog => "PseudoLog",
            PointClass::SpecialPseudoLog { .. } => "SpecialPseudoLog",
            PointClass::Invalid(_) => "Invalid",
        }
    }

    pub fn diagnostics(&self) -> String {
        match self {
            PointClass::Invalid(s) => s.clone(),
            PointClass::SpecialPseudoLog { split, m, n } => format!("split {split}, m = {m}, n = {n}"),
            _ => String::new(),
        }
    }
}

pub(super) fn classify(c: &Connection, i: usize) -> PointClass {
    let m = c.mult(i);
    if m >= 2 {
        return if c.g(i, m).det().is_zero() {
            PointClass::Invalid(format!("leading matrix g_{m} is singular"))
        } else {
            PointClass::Admissible
        };
    }
    let g1 = c.g(i, 1);
    if let Some(n) = nonnegative_integer_eigenvalue(g1) {
        if g1.det().is_zero() {
            return PointClass::Invalid(format!("residue has eigenvalue {n} and is singular"));
        }
        if let Some(s) = special_shape(c, i) {
            return s;
        }
        return PointClass::PseudoLog;
    }
    PointClass::LogarithmicDeligne
}

/// Some `n in {0, 1, 2, ...}` with `det(g - n) = 0` in K, if one exists.
///
/// Integer roots of the characteristic polynomial over Q(s) are exactly the
/// linear factors `lambda - n` of its denominator-free form in Q[s, lambda].
pub fn nonnegative_integer_eigenvalue(g: &MatK) -> Option<BigInt> {
    let chi = g.charpoly();
    let lam = chi.iter().map(|c| c.nvars()).max().unwrap_or(0);
    let mut l = Poly::one();
    for c in &chi {
        l = lcm(&l, c.den());
    }
    let lf = FieldElem::from_poly(l);
    let mut p = Poly::zero();
    for (k, c) in chi.iter().enumerate() {
        let cl = c * &lf;
        debug_assert!(cl.is_polynomial());
        p = &p + &(cl.num() * &Poly::var(lam).pow(k as u32));
    }
    let mut roots: Vec<BigInt> = Vec::new();
    for f in irreducible_factors(&p) {
        if f.vars_used() != vec![lam] || f.degree_in(lam) != 1 {
            continue;
        }
        let cs = f.coefficients_in(lam);
        let a = cs[1].as_constant().unwrap();
        let b = cs[0].as_constant().unwrap_or_else(BigRational::zero);
        let root = -b / a;
        if root.is_integer() && !root.is_negative() {
            roots.push(root.to_integer());
        }
    }
    roots.into_iter().min()
}

fn special_shape(c: &Connection, i: usize) -> Option<PointClass> {
    let r = c.rank();
    let g1 = c.g(i, 1);
    let eta1 = c.eta(i, 1);
    let poles = c.poles();
    let zero_t = c.a_t().laurent_coeff(poles, i, 0);
    let zero_dirs: Vec<Option<MatK>> = (0..c.nparams()).map(|j| c.a_dir(j).laurent_coeff(poles, i, 0)).collect();
    let block_zero = |m: &MatK, r0: usize, c0: usize, nr: usize, nc: usize| m.submatrix(r0, c0, nr, nc).is_zero();
    let scalar_block = |m: &MatK, r0: usize, n: usize| -> Option<BigRational> {
        let v = m.get(r0, r0).as_constant()?;
        let want = MatK::scalar(n, FieldElem::constant(v.clone()));
        (m.submatrix(r0, r0, n, n) == want).then_some(v)
    };
    for s in 1..=r {
        let rest = r - s;
        let Some(mm) = scalar_block(g1, 0, s) else { continue };
        let nn = if rest > 0 {
            match scalar_block(g1, s, rest) {
                Some(v) => v,
                None => continue,
            }
        } else {
            BigRational::zero()
        };
        if !block_zero(g1, 0, s, s, rest) {
            continue;
        }
        let eta_ok = eta1
            .parts()
            .iter()
            .all(|e| block_zero(e, 0, 0, s, s) && block_zero(e, 0, s, s, rest) && block_zero(e, s, s, rest, rest));
        if !eta_ok {
            continue;
        }
        let reg_ok = zero_t.iter().chain(zero_dirs.iter().flatten()).all(|m| block_zero(m, 0, s, s, rest));
        if !reg_ok {
            continue;
        }
        return Some(PointClass::SpecialPseudoLog { split: s, m: mm, n: nn });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::scalar::qq;

    fn fe(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    #[test]
    fn deligne_examples() {
        let x = FieldElem::var(0);
        let g = Matrix::diag(&[FieldElem::constant(qq(1, 2)), x.clone()]);
        assert_eq!(nonnegative_integer_eigenvalue(&g), None);
        let g2 = Matrix::from_rows(vec![vec![fe(2), x.clone()], vec![fe(0), fe(-3)]]);
        assert_eq!(nonnegative_integer_eigenvalue(&g2), Some(BigInt::from(2)));
        // eigenvalues x and x + 1: no integer specialization is forced
        let g3 = Matrix::from_rows(vec![vec![x.clone(), fe(1)], vec![fe(0), &x + &fe(1)]]);
        assert_eq!(nonnegative_integer_eigenvalue(&g3), None);
        let g4 = Matrix::from_rows(vec![vec![fe(0), fe(1)], vec![fe(-2), fe(3)]]);
        // eigenvalues 1, 2
        assert_eq!(nonnegative_integer_eigenvalue(&g4), Some(BigInt::from(1)));
    }
}
