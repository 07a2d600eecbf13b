//! Partial-fraction calculus over a fixed set of finite poles.
//!
//! A [`PF`] is `konst + sum_{i,k} c_{i,k} / (t - a_i)^k` with coefficients in
//! a K-module (scalars, vectors or matrices). Sums and products stay in this
//! normal form, so equality of rational functions with poles in the set is
//! structural.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::funcfield::FieldElem;
use crate::linalg::Matrix;
use crate::scalar::binomial;

/// Coefficient types of partial fractions.
pub trait KModule: Clone + PartialEq + Debug {
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &FieldElem) -> Self;
    fn is_zero(&self) -> bool;
    /// Coefficientwise partial derivative in `s_j`.
    fn deriv(&self, j: usize) -> Self;
}

impl KModule for FieldElem {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &FieldElem) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn deriv(&self, j: usize) -> Self {
        self.derivative(j)
    }
}

impl KModule for Vec<FieldElem> {
    fn add(&self, o: &Self) -> Self {
        self.iter().zip(o).map(|(a, b)| a + b).collect()
    }
    fn neg(&self) -> Self {
        self.iter().map(|a| -a).collect()
    }
    fn scale(&self, c: &FieldElem) -> Self {
        self.iter().map(|a| a * c).collect()
    }
    fn is_zero(&self) -> bool {
        self.iter().all(Zero::is_zero)
    }
    fn deriv(&self, j: usize) -> Self {
        self.iter().map(|a| a.derivative(j)).collect()
    }
}

impl KModule for Matrix<FieldElem> {
    fn add(&self, o: &Self) -> Self {
        Matrix::add(self, o)
    }
    fn neg(&self) -> Self {
        Matrix::neg(self)
    }
    fn scale(&self, c: &FieldElem) -> Self {
        Matrix::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        Matrix::is_zero(self)
    }
    fn deriv(&self, j: usize) -> Self {
        self.map(|a| a.derivative(j))
    }
}

/// The finite poles `a_i` with cached inverse differences.
#[derive(Clone, Debug)]
pub struct PoleSet {
    points: Vec<FieldElem>,
    inv_diff: Vec<Vec<FieldElem>>,
}

impl PoleSet {
    /// Panics if two points coincide.
    pub fn new(points: Vec<FieldElem>) -> Self {
        let n = points.len();
        let inv_diff = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            FieldElem::zero()
                        } else {
                            (&points[i] - &points[j]).recip().expect("coincident poles")
                        }
                    })
                    .collect()
            })
            .collect();
        PoleSet { points, inv_diff }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &FieldElem {
        &self.points[i]
    }

    pub fn points(&self) -> &[FieldElem] {
        &self.points
    }

    /// `(a_i - a_j)^{-k}`.
    pub fn inv_diff_pow(&self, i: usize, j: usize, k: u32) -> FieldElem {
        self.inv_diff[i][j].pow(k as i32)
    }
}

/// Key of a polar term: `(point index, order >= 1)`.
pub type PoleKey = (usize, u32);

#[derive(Clone, Debug, PartialEq)]
pub struct PF<T> {
    pub konst: Option<T>,
    pub parts: BTreeMap<PoleKey, T>,
}

impl<T: KModule> Default for PF<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: KModule> PF<T> {
    pub fn zero() -> Self {
        PF { konst: None, parts: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        let mut out = Self::zero();
        if !c.is_zero() {
            out.konst = Some(c);
        }
        out
    }

    /// `c / (t - a_i)^k`.
    pub fn pole(i: usize, k: u32, c: T) -> Self {
        let mut out = Self::zero();
        out.add_term(i, k, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.konst.is_none() && self.parts.is_empty()
    }

    pub fn konst(&self) -> Option<&T> {
        self.konst.as_ref()
    }

    /// Nonzero pole terms keyed by (point, order).
    pub fn terms(&self) -> impl Iterator<Item = (&PoleKey, &T)> {
        self.parts.iter()
    }

    pub fn coeff(&self, i: usize, k: u32) -> Option<&T> {
        self.parts.get(&(i, k))
    }

    /// Highest pole order at `a_i` (0 if regular).
    pub fn order_at(&self, i: usize) -> u32 {
        self.parts.range((i, 0)..(i + 1, 0)).map(|(&(_, k), _)| k).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, i: usize, k: u32, c: T) {
        if c.is_zero() {
            return;
        }
        assert!(k >= 1, "pole order must be positive");
        match self.parts.get_mut(&(i, k)) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.parts.remove(&(i, k));
                } else {
                    *v = s;
                }
            }
            None => {
                self.parts.insert((i, k), c);
            }
        }
    }

    pub fn add_const(&mut self, c: T) {
        if c.is_zero() {
            return;
        }
        self.konst = match self.konst.take() {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    None
                } else {
                    Some(s)
                }
            }
            None => Some(c),
        };
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        if let Some(c) = &o.konst {
            out.add_const(c.clone());
        }
        for (&(i, k), c) in &o.parts {
            out.add_term(i, k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        PF {
            konst: self.konst.as_ref().map(|c| c.neg()),
            parts: self.parts.iter().map(|(&key, c)| (key, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if Zero::is_zero(c) {
            return Self::zero();
        }
        PF {
            konst: self.konst.as_ref().map(|v| v.scale(c)),
            parts: self.parts.iter().map(|(&key, v)| (key, v.scale(c))).collect(),
        }
    }

    pub fn map<U: KModule>(&self, f: impl Fn(&T) -> U) -> PF<U> {
        let mut out = PF::zero();
        if let Some(c) = &self.konst {
            out.add_const(f(c));
        }
        for (&(i, k), c) in &self.parts {
            out.add_term(i, k, f(c));
        }
        out
    }

    /// d/dt.
    pub fn derivative_t(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, k), c) in &self.parts {
            out.add_term(i, k + 1, c.scale(&FieldElem::from_int(-(k as i64))));
        }
        out
    }

    /// Partial derivative in `s_j` at fixed t, given `da[i] = d a_i / d s_j`.
    pub fn derivative_param(&self, j: usize, da: &[FieldElem]) -> Self {
        let mut out = Self::zero();
        if let Some(c) = &self.konst {
            out.add_const(c.deriv(j));
        }
        for (&(i, k), c) in &self.parts {
            out.add_term(i, k, c.deriv(j));
            if !Zero::is_zero(&da[i]) {
                out.add_term(i, k + 1, c.scale(&(&da[i] * &FieldElem::from_int(k as i64))));
            }
        }
        out
    }

    /// Sum of the order-one coefficients (minus the residue at infinity).
    pub fn residue_sum(&self) -> Option<T> {
        let mut acc: Option<T> = None;
        for (&(_, k), c) in &self.parts {
            if k == 1 {
                acc = Some(match acc {
                    Some(a) => a.add(c),
                    None => c.clone(),
                });
            }
        }
        acc.filter(|a| !a.is_zero())
    }

    /// Coefficient of `(t - a_i)^n` in the Laurent expansion at `a_i`;
    /// `None` stands for zero.
    pub fn laurent_coeff(&self, poles: &PoleSet, i: usize, n: i64) -> Option<T> {
        if n < 0 {
            return self.parts.get(&(i, (-n) as u32)).cloned();
        }
        let mut acc: Option<T> = None;
        let mut push = |v: T| {
            acc = Some(match acc.take() {
                Some(a) => a.add(&v),
                None => v,
            });
        };
        if n == 0 {
            if let Some(c) = &self.konst {
                push(c.clone());
            }
        }
        for (&(j, s), c) in &self.parts {
            if j == i {
                continue;
            }
            // (z + d)^{-s} = sum_n (-1)^n C(s+n-1, n) d^{-s-n} z^n, d = a_i - a_j
            let mut coef = FieldElem::constant(binomial(s as u64 + n as u64 - 1, n as u64));
            if n % 2 == 1 {
                coef = -coef;
            }
            let coef = &coef * &poles.inv_diff_pow(i, j, s + n as u32);
            push(c.scale(&coef));
        }
        acc.filter(|a| !a.is_zero())
    }

    /// Value at `t = t0`; `None` if `t0` is one of the poles.
    pub fn eval_at(&self, poles: &PoleSet, t0: &FieldElem) -> Option<Option<T>> {
        let mut acc: Option<T> = self.konst.clone();
        for (&(i, k), c) in &self.parts {
            let d = (t0 - poles.point(i)).recip()?;
            let v = c.scale(&d.pow(k as i32));
            acc = Some(match acc {
                Some(a) => a.add(&v),
                None => v,
            });
        }
        Some(acc.filter(|a| !a.is_zero()))
    }

    /// Product with a bilinear coefficient map.
    pub fn mul_with<U: KModule, V: KModule>(&self, o: &PF<U>, poles: &PoleSet, f: impl Fn(&T, &U) -> V) -> PF<V> {
        let mut out = PF::zero();
        if let Some(a) = &self.konst {
            if let Some(b) = &o.konst {
                out.add_const(f(a, b));
            }
            for (&(j, s), b) in &o.parts {
                out.add_term(j, s, f(a, b));
            }
        }
        if let Some(b) = &o.konst {
            for (&(i, r), a) in &self.parts {
                out.add_term(i, r, f(a, b));
            }
        }
        for (&(i, r), a) in &self.parts {
            for (&(j, s), b) in &o.parts {
                let ab = f(a, b);
                if ab.is_zero() {
                    continue;
                }
                if i == j {
                    out.add_term(i, r + s, ab);
                    continue;
                }
                for (p, c) in pole_product(poles, i, r, j, s) {
                    out.add_term(p.0, p.1, ab.scale(&c));
                }
            }
        }
        out
    }
}

/// Partial fractions of `1 / ((t - a_i)^r (t - a_j)^s)`, `i != j`.
pub fn pole_product(poles: &PoleSet, i: usize, r: u32, j: usize, s: u32) -> Vec<(PoleKey, FieldElem)> {
    let mut out = Vec::with_capacity((r + s) as usize);
    for p in 1..=r {
        out.push(((i, p), product_coeff(poles, i, r, j, s, p)));
    }
    for q in 1..=s {
        out.push(((j, q), product_coeff(poles, j, s, i, r, q)));
    }
    out
}

/// Coefficient of `(t - a_i)^{-p}` in `1 / ((t - a_i)^r (t - a_j)^s)`:
/// `(-1)^{r-p} C(s+r-p-1, r-p) (a_i - a_j)^{-(s+r-p)}`.
fn product_coeff(poles: &PoleSet, i: usize, r: u32, j: usize, s: u32, p: u32) -> FieldElem {
    let e = r - p;
    let mut c = FieldElem::constant(binomial((s + e - 1) as u64, e as u64));
    if e % 2 == 1 {
        c = -c;
    }
    &c * &poles.inv_diff_pow(i, j, s + e)
}

impl PF<FieldElem> {
    pub fn one() -> Self {
        Self::constant(FieldElem::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(f: &PF<FieldElem>, poles: &PoleSet, t0: &FieldElem) -> FieldElem {
        f.eval_at(poles, t0).unwrap().unwrap_or_else(FieldElem::zero)
    }

    fn x() -> FieldElem {
        FieldElem::var(0)
    }

    #[test]
    fn lemma_anchor() {
        // 1/((t-a)(t-b)) = (a-b)^{-1}/(t-a) + (b-a)^{-1}/(t-b)
        let poles = PoleSet::new(vec![FieldElem::zero(), x()]);
        let f = PF::pole(0, 1, FieldElem::one());
        let g = PF::pole(1, 1, FieldElem::one());
        let h = f.mul_with(&g, &poles, |a, b| a * b);
        assert_eq!(h.coeff(0, 1).unwrap(), &(FieldElem::one() / -x()));
        assert_eq!(h.coeff(1, 1).unwrap(), &(FieldElem::one() / x()));
        assert_eq!(h.laurent_coeff(&poles, 0, -1).unwrap(), -(FieldElem::one() / x()));
    }

    #[test]
    fn products_match_rational_functions() {
        let poles = PoleSet::new(vec![FieldElem::from_int(2), x(), &x() + &FieldElem::from_int(1)]);
        let mut f = PF::pole(0, 2, x());
        f.add_term(1, 1, FieldElem::from_int(3));
        f.add_const(FieldElem::from_int(5));
        let mut g = PF::pole(1, 3, FieldElem::one());
        g.add_term(2, 2, -x());
        g.add_term(0, 1, FieldElem::from_int(7));
        let h = f.mul_with(&g, &poles, |a, b| a * b);
        for t0 in [FieldElem::from_int(7), &x() * &x() - FieldElem::from_int(3), FieldElem::from_int(-1) / x()] {
            assert_eq!(value(&h, &poles, &t0), &value(&f, &poles, &t0) * &value(&g, &poles, &t0));
        }
        // d/dt of c/(t-a)^k checked against the difference quotient identity
        let df = f.derivative_t();
        assert_eq!(df.coeff(0, 3), Some(&x().scale(&crate::scalar::q(-2))));
        assert_eq!(df.coeff(1, 2), Some(&FieldElem::from_int(-3)));
    }

    #[test]
    fn laurent_expansion_of_foreign_pole() {
        // 1/(t - 1) at t = 0: -1 - t - t^2 ...
        let poles = PoleSet::new(vec![FieldElem::zero(), FieldElem::one()]);
        let f = PF::pole(1, 1, FieldElem::one());
        for n in 0..4 {
            assert_eq!(f.laurent_coeff(&poles, 0, n), Some(FieldElem::from_int(-1)));
        }
        let g = PF::pole(1, 2, FieldElem::one());
        assert_eq!(g.laurent_coeff(&poles, 0, 1), Some(FieldElem::from_int(2)));
    }
}
