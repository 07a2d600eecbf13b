//! Kähler differentials of K: 1-forms `sum c_j ds_j` and 2-forms.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::elem::FieldElem;
use crate::error::Error;

/// `sum_j c_j ds_j`, zero coefficients never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct OneFormK {
    coeffs: BTreeMap<usize, FieldElem>,
}

/// `sum_{j < j'} c_{jj'} ds_j ^ ds_j'`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TwoFormK {
    coeffs: BTreeMap<(usize, usize), FieldElem>,
}

impl OneFormK {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c ds_j`.
    pub fn basis(j: usize, c: FieldElem) -> Self {
        let mut out = Self::zero();
        out.set(j, c);
        out
    }

    pub fn ds(j: usize) -> Self {
        Self::basis(j, FieldElem::from_int(1))
    }

    pub fn from_map(map: BTreeMap<usize, FieldElem>) -> Self {
        OneFormK { coeffs: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, j: usize) -> FieldElem {
        self.coeffs.get(&j).cloned().unwrap_or_else(FieldElem::zero)
    }

    pub fn set(&mut self, j: usize, c: FieldElem) {
        if c.is_zero() {
            self.coeffs.remove(&j);
        } else {
            self.coeffs.insert(j, c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &FieldElem)> {
        self.coeffs.iter()
    }

    /// Indices with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn add(&self, o: &OneFormK) -> OneFormK {
        let mut out = self.clone();
        for (&j, c) in &o.coeffs {
            let v = &out.coeff(j) + c;
            out.set(j, v);
        }
        out
    }

    pub fn sub(&self, o: &OneFormK) -> OneFormK {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> OneFormK {
        OneFormK { coeffs: self.coeffs.iter().map(|(&j, c)| (j, -c)).collect() }
    }

    pub fn scale(&self, f: &FieldElem) -> OneFormK {
        if f.is_zero() {
            return Self::zero();
        }
        OneFormK { coeffs: self.coeffs.iter().map(|(&j, c)| (j, c * f)).collect() }
    }

    pub fn scale_q(&self, q: &BigRational) -> OneFormK {
        if q.is_zero() {
            return Self::zero();
        }
        OneFormK { coeffs: self.coeffs.iter().map(|(&j, c)| (j, c.scale(q))).collect() }
    }

    /// Exterior derivative.
    pub fn d(&self) -> TwoFormK {
        let mut out = TwoFormK::zero();
        for (&j, c) in &self.coeffs {
            // d(c ds_j) = sum_i dc/ds_i ds_i ^ ds_j
            for i in 0..c.nvars() {
                if i == j {
                    continue;
                }
                let dc = c.derivative(i);
                if !dc.is_zero() {
                    out.add_entry(i, j, &dc);
                }
            }
        }
        out
    }

    pub fn wedge(&self, o: &OneFormK) -> TwoFormK {
        let mut out = TwoFormK::zero();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &o.coeffs {
                if i != j {
                    out.add_entry(i, j, &(a * b));
                }
            }
        }
        out
    }

    /// Specializes parameter `i` to a rational value.
    pub fn substitute(&self, i: usize, v: &BigRational) -> Option<OneFormK> {
        let mut out = BTreeMap::new();
        for (&j, c) in &self.coeffs {
            if j == i {
                continue;
            }
            out.insert(j, c.substitute(i, v)?);
        }
        Some(Self::from_map(out))
    }

    /// Canonical rendering `c1 * d(s1) + c2 * d(s2)` in parameter order.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|(&j, c)| {
                let name = names.get(j).cloned().unwrap_or_else(|| format!("s{}", j));
                let cs = c.render(names);
                if c.is_constant() && !cs.contains(' ') {
                    format!("{} * d({})", cs, name)
                } else {
                    format!("({}) * d({})", cs, name)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for OneFormK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

/// Kähler differential of a field element.
pub fn d_k(f: &FieldElem) -> OneFormK {
    let mut out = OneFormK::zero();
    for i in 0..f.nvars() {
        out.set(i, f.derivative(i));
    }
    out
}

/// `df / f`.
pub fn dlog(f: &FieldElem) -> Result<OneFormK, Error> {
    let inv = f.recip().ok_or(Error::ZeroArgument)?;
    Ok(d_k(f).scale(&inv))
}

impl TwoFormK {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `ds_i ^ ds_j` (antisymmetric in `i, j`).
    pub fn coeff(&self, i: usize, j: usize) -> FieldElem {
        if i == j {
            return FieldElem::zero();
        }
        if i < j {
            self.coeffs.get(&(i, j)).cloned().unwrap_or_else(FieldElem::zero)
        } else {
            -self.coeffs.get(&(j, i)).cloned().unwrap_or_else(FieldElem::zero)
        }
    }

    /// Adds `c ds_i ^ ds_j`.
    pub fn add_entry(&mut self, i: usize, j: usize, c: &FieldElem) {
        if i == j || c.is_zero() {
            return;
        }
        let (key, c) = if i < j { ((i, j), c.clone()) } else { ((j, i), -c) };
        let v = &self.coeffs.get(&key).cloned().unwrap_or_else(FieldElem::zero) + &c;
        if v.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, v);
        }
    }

    pub fn add(&self, o: &TwoFormK) -> TwoFormK {
        let mut out = self.clone();
        for (&(i, j), c) in &o.coeffs {
            out.add_entry(i, j, c);
        }
        out
    }

    pub fn neg(&self) -> TwoFormK {
        TwoFormK { coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &FieldElem)> {
        self.coeffs.iter()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let name = |j: usize| names.get(j).cloned().unwrap_or_else(|| format!("s{}", j));
        self.coeffs
            .iter()
            .map(|(&(i, j), c)| format!("({}) * d({})^d({})", c.render(names), name(i), name(j)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for TwoFormK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn x() -> FieldElem {
        FieldElem::var(0)
    }
    fn y() -> FieldElem {
        FieldElem::var(1)
    }

    #[test]
    fn differentials() {
        assert_eq!(d_k(&(&x() * &x())), OneFormK::basis(0, x().scale(&q(2))));
        assert_eq!(d_k(&(&x() * &y())), OneFormK::basis(0, y()).add(&OneFormK::basis(1, x())));
        assert!(dlog(&FieldElem::from_int(7)).unwrap().is_zero());
        assert!(matches!(dlog(&FieldElem::zero()), Err(Error::ZeroArgument)));
        let f = &(&(&x() * &x()) * &y()) - &FieldElem::from_int(1);
        assert!(dlog(&f).unwrap().d().is_zero());
    }

    #[test]
    fn wedge_and_d() {
        let dx = OneFormK::ds(0);
        let dy = OneFormK::ds(1);
        assert!(dx.wedge(&dx).is_zero());
        assert_eq!(dx.wedge(&dy), dy.wedge(&dx).neg());
        assert_eq!(OneFormK::basis(1, x()).wedge(&dx).coeff(0, 1), -x());
        assert_eq!(OneFormK::basis(1, x()).d().coeff(0, 1), FieldElem::from_int(1));
        assert_eq!(OneFormK::basis(0, y()).d().coeff(0, 1), FieldElem::from_int(-1));
    }
}
