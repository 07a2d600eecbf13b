//! Connections `d + A` on the trivial rank-r bundle over the projective line
//! over K, with poles at finitely many K-points.
//!
//! `A = sum_i sum_r g_r^(i) d(t - a_i) / (t - a_i)^r
//!    + sum_i sum_s eta_s^(i) / (t - a_i)^s + eta_0`.

mod classify;
mod mobius;
mod twist;

pub use classify::PointClass;
pub use mobius::{bessel_lax, LaxConnection, Mobius};
pub use twist::{twist_block_step, twist_scalar, LocalMatForm};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::funcfield::{FieldElem, OneFormK};
use crate::linalg::Matrix;
use crate::ratline::pf::{PoleSet, PF};

pub type MatK = Matrix<FieldElem>;

/// A matrix of 1-forms on the base, stored as one matrix per `ds_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatFormK {
    parts: Vec<MatK>,
}

impl MatFormK {
    pub fn zero(rank: usize, nparams: usize) -> Self {
        MatFormK { parts: vec![Matrix::zeros(rank, rank); nparams] }
    }

    pub fn from_parts(parts: Vec<MatK>) -> Self {
        MatFormK { parts }
    }

    /// `c * ds_j` for every entry-wise coefficient matrix `c`.
    pub fn from_map(rank: usize, nparams: usize, m: &BTreeMap<usize, MatK>) -> Self {
        let mut out = Self::zero(rank, nparams);
        for (&j, c) in m {
            out.parts[j] = c.clone();
        }
        out
    }

    /// `scalar * identity`.
    pub fn scalar(rank: usize, nparams: usize, w: &OneFormK) -> Self {
        let mut out = Self::zero(rank, nparams);
        for (&j, c) in w.iter() {
            out.parts[j] = Matrix::scalar(rank, c.clone());
        }
        out
    }

    pub fn part(&self, j: usize) -> &MatK {
        &self.parts[j]
    }

    pub fn parts(&self) -> &[MatK] {
        &self.parts
    }

    pub fn nparams(&self) -> usize {
        self.parts.len()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|m| m.is_zero())
    }

    pub fn map(&self, f: impl Fn(&MatK) -> MatK) -> Self {
        MatFormK { parts: self.parts.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        MatFormK { parts: self.parts.iter().zip(&o.parts).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn trace(&self) -> OneFormK {
        let mut out = OneFormK::zero();
        for (j, m) in self.parts.iter().enumerate() {
            out.set(j, m.trace());
        }
        out
    }

    /// The (r, c) entry as a 1-form.
    pub fn entry(&self, r: usize, c: usize) -> OneFormK {
        let mut out = OneFormK::zero();
        for (j, m) in self.parts.iter().enumerate() {
            out.set(j, m.get(r, c).clone());
        }
        out
    }
}

/// Local data at one singular point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointData {
    pub a: FieldElem,
    pub m: u32,
    /// `g[r-1] = g_r`, `1 <= r <= m`.
    pub g: Vec<MatK>,
    /// `eta[s-1] = eta_s`, `1 <= s <= M`.
    pub eta: Vec<MatFormK>,
}

/// `M = m - 1` for `m >= 2`, else 1.
pub fn big_m(m: u32) -> u32 {
    if m >= 2 {
        m - 1
    } else {
        1
    }
}

/// Mixed and pure parts of the curvature `dA + A ^ A`.
#[derive(Clone, Debug)]
pub struct Curvature {
    /// Coefficient of `dt ^ ds_j`.
    pub mixed: Vec<PF<MatK>>,
    /// Coefficient of `ds_j ^ ds_l`, `j < l`.
    pub pure: BTreeMap<(usize, usize), PF<MatK>>,
}

impl Curvature {
    pub fn mixed_is_zero(&self) -> bool {
        self.mixed.iter().all(|f| f.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.mixed_is_zero() && self.pure.values().all(|f| f.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    rank: usize,
    nparams: usize,
    points: Vec<PointData>,
    eta0: MatFormK,
    poles: PoleSetEq,
}

/// Pole set compared by its points.
#[derive(Clone, Debug)]
struct PoleSetEq(PoleSet);

impl PartialEq for PoleSetEq {
    fn eq(&self, o: &Self) -> bool {
        self.0.points() == o.0.points()
    }
}

impl Connection {
    /// Validates and normalizes: points are sorted by (multiplicity, point),
    /// so the last one has maximal multiplicity.
    pub fn new(rank: usize, nparams: usize, points: Vec<PointData>, eta0: MatFormK) -> Result<Self> {
        let c = Self::build(rank, nparams, points, eta0)?;
        if c.points.iter().all(|p| p.m < 2) {
            return Err(Error::InvalidConnection("all singular points are logarithmic".into()));
        }
        Ok(c)
    }

    /// As [`Connection::new`] but allows all multiplicities to be 1.
    pub fn build(rank: usize, nparams: usize, mut points: Vec<PointData>, eta0: MatFormK) -> Result<Self> {
        let bad = |s: String| Err(Error::InvalidConnection(s));
        if rank == 0 {
            return bad("rank must be positive".into());
        }
        if points.is_empty() {
            return bad("no singular points".into());
        }
        let square = |m: &MatK| m.rows() == rank && m.cols() == rank;
        let form_ok = |w: &MatFormK| w.nparams() == nparams && w.parts.iter().all(square);
        if !form_ok(&eta0) {
            return bad("eta0 has the wrong shape".into());
        }
        for (i, p) in points.iter().enumerate() {
            if p.m == 0 {
                return bad(format!("point {i} has multiplicity 0"));
            }
            if p.g.len() != p.m as usize || !p.g.iter().all(square) {
                return bad(format!("point {i} needs {} matrices g of size {rank}", p.m));
            }
            if p.eta.len() != big_m(p.m) as usize || !p.eta.iter().all(form_ok) {
                return bad(format!("point {i} needs {} matrices eta", big_m(p.m)));
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i].a == points[j].a {
                    return bad(format!("points {j} and {i} coincide"));
                }
            }
        }
        let mut sum = Matrix::zeros(rank, rank);
        for p in &points {
            sum = sum.add(&p.g[0]);
        }
        if !sum.is_zero() {
            return bad("sum of the residues g_1 is nonzero: regularity at infinity fails".into());
        }
        points.sort_by(|x, y| x.m.cmp(&y.m).then_with(|| x.a.cmp(&y.a)));
        let poles = PoleSet::new(points.iter().map(|p| p.a.clone()).collect());
        Ok(Connection { rank, nparams, points, eta0, poles: PoleSetEq(poles) })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn npoints(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[PointData] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &FieldElem {
        &self.points[i].a
    }

    pub fn mult(&self, i: usize) -> u32 {
        self.points[i].m
    }

    /// `m = sum m_i`.
    pub fn total_mult(&self) -> u32 {
        self.points.iter().map(|p| p.m).sum()
    }

    /// `g_r^(i)`, `1 <= r <= m_i`.
    pub fn g(&self, i: usize, r: u32) -> &MatK {
        &self.points[i].g[r as usize - 1]
    }

    /// `eta_s^(i)`, zero beyond `M_i`.
    pub fn eta(&self, i: usize, s: u32) -> MatFormK {
        self.points[i].eta.get(s as usize - 1).cloned().unwrap_or_else(|| MatFormK::zero(self.rank, self.nparams))
    }

    pub fn eta0(&self) -> &MatFormK {
        &self.eta0
    }

    pub fn poles(&self) -> &PoleSet {
        &self.poles.0
    }

    /// `d a_i / d s_j` for all i.
    pub fn da(&self, j: usize) -> Vec<FieldElem> {
        self.points.iter().map(|p| p.a.derivative(j)).collect()
    }

    /// The relative connection matrix `A_t = sum g_r^(i) / (t - a_i)^r`.
    pub fn a_t(&self) -> PF<MatK> {
        let mut out = PF::zero();
        for (i, p) in self.points.iter().enumerate() {
            for (r, g) in p.g.iter().enumerate() {
                out.add_term(i, r as u32 + 1, g.clone());
            }
        }
        out
    }

    /// The `ds_j` component `A_j = -sum g_r^(i) da_i/(t-a_i)^r + eta_j`.
    pub fn a_dir(&self, j: usize) -> PF<MatK> {
        let mut out = PF::constant(self.eta0.parts[j].clone());
        for (i, p) in self.points.iter().enumerate() {
            let da = p.a.derivative(j);
            if !da.is_zero() {
                let c = -da;
                for (r, g) in p.g.iter().enumerate() {
                    out.add_term(i, r as u32 + 1, g.scale(&c));
                }
            }
            for (s, e) in p.eta.iter().enumerate() {
                out.add_term(i, s as u32 + 1, e.parts[j].clone());
            }
        }
        out
    }

    /// `eta_j = eta0_j + sum eta_s^(i)_j / (t - a_i)^s`.
    pub fn eta_dir(&self, j: usize) -> PF<MatK> {
        let mut out = PF::constant(self.eta0.parts[j].clone());
        for (i, p) in self.points.iter().enumerate() {
            for (s, e) in p.eta.iter().enumerate() {
                out.add_term(i, s as u32 + 1, e.parts[j].clone());
            }
        }
        out
    }

    fn mat_mul(&self, a: &PF<MatK>, b: &PF<MatK>) -> PF<MatK> {
        a.mul_with(b, self.poles(), |x, y| x.mul(y))
    }

    /// `d_t A_j - d_j A_t + [A_t, A_j]`, coefficient of `dt ^ ds_j`.
    pub fn curvature_mixed(&self, j: usize) -> PF<MatK> {
        let at = self.a_t();
        let aj = self.a_dir(j);
        let da = self.da(j);
        aj.derivative_t().sub(&at.derivative_param(j, &da)).add(&self.mat_mul(&at, &aj)).sub(&self.mat_mul(&aj, &at))
    }

    pub fn curvature(&self) -> Curvature {
        let mixed = (0..self.nparams).map(|j| self.curvature_mixed(j)).collect();
        let dirs: Vec<PF<MatK>> = (0..self.nparams).map(|j| self.a_dir(j)).collect();
        let mut pure = BTreeMap::new();
        for j in 0..self.nparams {
            for l in j + 1..self.nparams {
                let v = dirs[l]
                    .derivative_param(j, &self.da(j))
                    .sub(&dirs[j].derivative_param(l, &self.da(l)))
                    .add(&self.mat_mul(&dirs[j], &dirs[l]))
                    .sub(&self.mat_mul(&dirs[l], &dirs[j]));
                if !v.is_zero() {
                    pure.insert((j, l), v);
                }
            }
        }
        Curvature { mixed, pure }
    }

    /// Curvature has no `dt ^ ds` component.
    pub fn is_vertical(&self) -> bool {
        (0..self.nparams).all(|j| self.curvature_mixed(j).is_zero())
    }

    pub fn classify_point(&self, i: usize) -> PointClass {
        classify::classify(self, i)
    }

    /// All points are admissible or satisfy Deligne's condition.
    pub fn is_admissible(&self) -> bool {
        (0..self.npoints())
            .all(|i| matches!(self.classify_point(i), PointClass::Admissible | PointClass::LogarithmicDeligne))
    }

    /// Admissible at higher-order poles, pseudo-logarithmic (or Deligne)
    /// at simple ones.
    pub fn is_pseudo_admissible(&self) -> bool {
        (0..self.npoints()).all(|i| !matches!(self.classify_point(i), PointClass::Invalid(_)))
    }

    /// Change of basis `e' = e phi` for a t-constant invertible `phi`:
    /// `A' = phi^{-1} A phi + phi^{-1} d_K phi`.
    pub fn gauge_transform(&self, phi: &MatK) -> Result<Connection> {
        if phi.rows() != self.rank || phi.cols() != self.rank {
            return Err(Error::Precondition("gauge matrix has the wrong size".into()));
        }
        let inv = phi.inverse().ok_or(Error::SingularGauge)?;
        let conj = |m: &MatK| inv.mul(m).mul(phi);
        let points = self
            .points
            .iter()
            .map(|p| PointData {
                a: p.a.clone(),
                m: p.m,
                g: p.g.iter().map(conj).collect(),
                eta: p.eta.iter().map(|e| e.map(conj)).collect(),
            })
            .collect();
        let mut eta0 = self.eta0.map(conj);
        for j in 0..self.nparams {
            let dphi = phi.map(|x| x.derivative(j));
            eta0.parts[j] = eta0.parts[j].add(&inv.mul(&dphi));
        }
        Self::build(self.rank, self.nparams, points, eta0)
    }

    /// The dual connection: every matrix replaced by minus its transpose.
    pub fn dual(&self) -> Connection {
        let f = |m: &MatK| m.transpose().neg();
        let points = self
            .points
            .iter()
            .map(|p| PointData {
                a: p.a.clone(),
                m: p.m,
                g: p.g.iter().map(f).collect(),
                eta: p.eta.iter().map(|e| e.map(f)).collect(),
            })
            .collect();
        Self::build(self.rank, self.nparams, points, self.eta0.map(f)).expect("dual of a valid connection")
    }

    /// Direct sum of connections with the same parameters; points are merged.
    pub fn direct_sum(&self, o: &Connection) -> Result<Connection> {
        if self.nparams != o.nparams {
            return Err(Error::Precondition("parameter counts differ".into()));
        }
        let r = self.rank + o.rank;
        let block = |x: Option<&MatK>, y: Option<&MatK>| {
            let mut m = Matrix::zeros(r, r);
            if let Some(x) = x {
                m.set_block(0, 0, x);
            }
            if let Some(y) = y {
                m.set_block(self.rank, self.rank, y);
            }
            m
        };
        let mut all: Vec<FieldElem> = self.points.iter().map(|p| p.a.clone()).collect();
        for p in &o.points {
            if !all.contains(&p.a) {
                all.push(p.a.clone());
            }
        }
        let find = |c: &Connection, a: &FieldElem| c.points.iter().position(|p| &p.a == a);
        let mut points = Vec::new();
        for a in &all {
            let (x, y) = (find(self, a), find(o, a));
            let mx = x.map_or(0, |i| self.points[i].m);
            let my = y.map_or(0, |i| o.points[i].m);
            let m = mx.max(my);
            let g = (1..=m)
                .map(|k| {
                    let gx = x.filter(|_| k <= mx).map(|i| self.g(i, k));
                    let gy = y.filter(|_| k <= my).map(|i| o.g(i, k));
                    block(gx, gy)
                })
                .collect();
            let eta = (1..=big_m(m))
                .map(|s| {
                    let ex = x.map(|i| self.eta(i, s));
                    let ey = y.map(|i| o.eta(i, s));
                    let parts = (0..self.nparams)
                        .map(|j| block(ex.as_ref().map(|e| e.part(j)), ey.as_ref().map(|e| e.part(j))))
                        .collect();
                    MatFormK::from_parts(parts)
                })
                .collect();
            points.push(PointData { a: a.clone(), m, g, eta });
        }
        let eta0 = MatFormK::from_parts(
            (0..self.nparams).map(|j| block(Some(self.eta0.part(j)), Some(o.eta0.part(j)))).collect(),
        );
        Self::build(r, self.nparams, points, eta0)
    }

    /// `Tr A` as a rank-1 connection.
    pub fn determinant(&self) -> Connection {
        let tr = |m: &MatK| Matrix::from_rows(vec![vec![m.trace()]]);
        let points = self
            .points
            .iter()
            .map(|p| PointData {
                a: p.a.clone(),
                m: p.m,
                g: p.g.iter().map(tr).collect(),
                eta: p.eta.iter().map(|e| e.map(tr)).collect(),
            })
            .collect();
        Self::build(1, self.nparams, points, self.eta0.map(tr)).expect("trace of a valid connection")
    }

    /// Replaces all eta data (used by generators and fixtures).
    pub fn with_eta(&self, eta: Vec<Vec<MatFormK>>, eta0: MatFormK) -> Result<Connection> {
        let points = self
            .points
            .iter()
            .zip(eta)
            .map(|(p, e)| PointData { a: p.a.clone(), m: p.m, g: p.g.clone(), eta: e })
            .collect();
        Self::build(self.rank, self.nparams, points, eta0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn m1(c: FieldElem) -> MatK {
        Matrix::from_rows(vec![vec![c]])
    }

    /// Rank 1, `a = 0`, `m = 2`, `g_2 = alpha`, `eta_1 = e * d(alpha)`.
    pub(crate) fn rank_one(e: i64) -> Connection {
        let alpha = FieldElem::var(0);
        let p = PointData {
            a: FieldElem::zero(),
            m: 2,
            g: vec![m1(FieldElem::zero()), m1(alpha)],
            eta: vec![MatFormK::from_parts(vec![m1(FieldElem::from_int(e))])],
        };
        Connection::new(1, 1, vec![p], MatFormK::zero(1, 1)).unwrap()
    }

    #[test]
    fn verticality_anchors() {
        assert!(rank_one(-1).is_vertical());
        let c = rank_one(0);
        assert!(!c.is_vertical());
        // -dt ^ d(alpha) / t^2
        assert_eq!(c.curvature_mixed(0), PF::pole(0, 2, m1(FieldElem::from_int(-1))));
    }

    #[test]
    fn zero_connection_is_flat() {
        let z = m1(FieldElem::zero());
        let p = PointData { a: FieldElem::one(), m: 2, g: vec![z.clone(), z], eta: vec![MatFormK::zero(1, 2)] };
        let c = Connection::new(1, 2, vec![p], MatFormK::zero(1, 2)).unwrap();
        assert!(c.curvature().is_zero());
    }

    #[test]
    fn construction_rejects_bad_input() {
        let one = m1(FieldElem::one());
        let p = PointData {
            a: FieldElem::zero(),
            m: 2,
            g: vec![one.clone(), one.clone()],
            eta: vec![MatFormK::zero(1, 1)],
        };
        assert!(Connection::new(1, 1, vec![p.clone()], MatFormK::zero(1, 1)).is_err());
        let q = PointData { a: FieldElem::zero(), m: 1, g: vec![one.neg()], eta: vec![MatFormK::zero(1, 1)] };
        // coincident points
        assert!(Connection::new(1, 1, vec![p.clone(), q.clone()], MatFormK::zero(1, 1)).is_err());
        // all logarithmic
        let q1 = PointData { a: FieldElem::one(), ..q.clone() };
        let mut p1 = q.clone();
        p1.g = vec![one.clone()];
        assert!(Connection::new(1, 1, vec![p1, q1], MatFormK::zero(1, 1)).is_err());
    }

    #[test]
    fn reordering_puts_highest_multiplicity_last() {
        let one = m1(FieldElem::one());
        let p = PointData {
            a: FieldElem::zero(),
            m: 2,
            g: vec![one.clone(), one.clone()],
            eta: vec![MatFormK::zero(1, 1)],
        };
        let q = PointData { a: FieldElem::one(), m: 1, g: vec![one.neg()], eta: vec![MatFormK::zero(1, 1)] };
        let c = Connection::new(1, 1, vec![p, q], MatFormK::zero(1, 1)).unwrap();
        assert_eq!(c.mult(1), 2);
        assert_eq!(c.point(1), &FieldElem::zero());
    }

    #[test]
    fn scalar_gauge_shifts_eta0() {
        let c = rank_one(-1);
        let x = FieldElem::var(0);
        let g = c.gauge_transform(&m1(x.clone())).unwrap();
        assert_eq!(g.eta0().part(0), &m1(x.recip().unwrap()));
        assert_eq!(g.g(0, 2), c.g(0, 2));
        assert!(g.is_vertical());
        assert_eq!(c.gauge_transform(&m1(FieldElem::one())).unwrap(), c);
        assert!(matches!(c.gauge_transform(&m1(FieldElem::zero())), Err(Error::SingularGauge)));
    }

    #[test]
    fn dual_is_involutive() {
        let c = rank_one(-1);
        let d = c.dual();
        assert_eq!(d.g(0, 2), &m1(-FieldElem::var(0)));
        assert_eq!(d.dual(), c);
        assert!(d.is_vertical());
    }
}
