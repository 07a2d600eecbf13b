//! Pullback of connections along Möbius transformations
//! `t = (p tau + q) / (r tau + w)` with rational coefficients.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{big_m, Connection, MatFormK, MatK, PointData};
use crate::error::{Error, Result};
use crate::funcfield::FieldElem;
use crate::linalg::Matrix;
use crate::ratline::forms::partial_fractions;
use crate::ratline::pf::{PoleSet, PF};
use crate::ratline::upoly::UPoly;

type UPolyK = UPoly<FieldElem>;

#[derive(Clone, Debug, PartialEq)]
pub struct Mobius {
    pub p: BigRational,
    pub q: BigRational,
    pub r: BigRational,
    pub w: BigRational,
}

impl Mobius {
    pub fn new(p: BigRational, q: BigRational, r: BigRational, w: BigRational) -> Result<Self> {
        if (&p * &w - &q * &r).is_zero() {
            return Err(Error::Precondition("degenerate Möbius transformation".into()));
        }
        Ok(Mobius { p, q, r, w })
    }

    pub fn identity() -> Self {
        Mobius { p: One::one(), q: Zero::zero(), r: Zero::zero(), w: One::one() }
    }

    /// `t = tau + c`.
    pub fn translation(c: BigRational) -> Self {
        Mobius { q: c, ..Self::identity() }
    }

    /// `t = 1 / tau`.
    pub fn inversion() -> Self {
        Mobius { p: Zero::zero(), q: One::one(), r: One::one(), w: Zero::zero() }
    }

    pub fn inverse(&self) -> Self {
        Mobius { p: self.w.clone(), q: -self.q.clone(), r: -self.r.clone(), w: self.p.clone() }
    }

    pub fn det(&self) -> BigRational {
        &self.p * &self.w - &self.q * &self.r
    }

    fn fe(x: &BigRational) -> FieldElem {
        FieldElem::constant(x.clone())
    }

    /// The tau with `t(tau) = a`, `None` if that is infinity.
    pub fn preimage(&self, a: &FieldElem) -> Option<FieldElem> {
        let den = &Self::fe(&self.p) - &(a * &Self::fe(&self.r));
        let num = &(a * &Self::fe(&self.w)) - &Self::fe(&self.q);
        Some(&num * &den.recip()?)
    }

    /// The tau mapped to `t = infinity`, if finite.
    pub fn pole(&self) -> Option<BigRational> {
        if self.r.is_zero() {
            None
        } else {
            Some(-&self.w / &self.r)
        }
    }
}

/// `pf + sum_k poly[k] t^(k+1)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaxComponent {
    pub pf: PF<MatK>,
    pub poly: Vec<MatK>,
}

impl LaxComponent {
    fn has_polynomial_part(&self) -> bool {
        self.poly.iter().any(|m| !m.is_zero())
    }
}

/// A connection matrix `A_t dt + sum_j A_j ds_j` that may also have poles at
/// `t = infinity`.
#[derive(Clone, Debug)]
pub struct LaxConnection {
    pub rank: usize,
    pub nparams: usize,
    pub poles: PoleSet,
    pub dt: LaxComponent,
    pub dirs: Vec<LaxComponent>,
}

impl LaxConnection {
    pub fn from_connection(c: &Connection) -> Self {
        LaxConnection {
            rank: c.rank(),
            nparams: c.nparams(),
            poles: c.poles().clone(),
            dt: LaxComponent { pf: c.a_t(), poly: Vec::new() },
            dirs: (0..c.nparams()).map(|j| LaxComponent { pf: c.a_dir(j), poly: Vec::new() }).collect(),
        }
    }

    /// Pullback along `m`.
    pub fn transport(&self, m: &Mobius) -> Result<LaxConnection> {
        let mut pts = Vec::with_capacity(self.poles.len() + 1);
        for a in self.poles.points() {
            pts.push(m.preimage(a).ok_or(Error::PointAtInfinity)?);
        }
        if let Some(t0) = m.pole() {
            pts.push(FieldElem::constant(t0));
        }
        let new_poles = PoleSet::new(pts);
        let dt = transport_component(&self.dt, &self.poles, &new_poles, m, true, self.rank)?;
        let dirs = self
            .dirs
            .iter()
            .map(|d| transport_component(d, &self.poles, &new_poles, m, false, self.rank))
            .collect::<Result<_>>()?;
        Ok(LaxConnection { rank: self.rank, nparams: self.nparams, poles: new_poles, dt, dirs })
    }

    /// Reads off points, `g` and `eta`; fails if a pole sits at infinity or
    /// the shape is not that of an admissible-type connection matrix.
    pub fn to_connection(&self) -> Result<Connection> {
        if self.dt.has_polynomial_part() || self.dt.pf.konst().is_some() {
            return Err(Error::PointAtInfinity);
        }
        if self.dirs.iter().any(|d| d.has_polynomial_part()) {
            return Err(Error::PointAtInfinity);
        }
        let zero = || Matrix::zeros(self.rank, self.rank);
        let mut points = Vec::new();
        for i in 0..self.poles.len() {
            let a = self.poles.point(i);
            let m = self.dt.pf.order_at(i);
            let g: Vec<MatK> = (1..=m).map(|r| self.dt.pf.coeff(i, r).cloned().unwrap_or_else(zero)).collect();
            let max_eta = self.dirs.iter().map(|d| d.pf.order_at(i)).max().unwrap_or(0);
            let bm = if m == 0 { 0 } else { big_m(m) };
            let mut eta = Vec::new();
            for s in 1..=bm.max(max_eta) {
                let parts: Vec<MatK> = (0..self.nparams)
                    .map(|j| {
                        let mut v = self.dirs[j].pf.coeff(i, s).cloned().unwrap_or_else(zero);
                        if s <= m {
                            v = v.add(&g[s as usize - 1].scale(&a.derivative(j)));
                        }
                        v
                    })
                    .collect();
                eta.push(MatFormK::from_parts(parts));
            }
            while eta.len() > bm as usize && eta.last().is_some_and(|e| e.is_zero()) {
                eta.pop();
            }
            if eta.len() > bm as usize {
                return Err(Error::InvalidConnection(format!(
                    "eta has a pole of order {} at a point of multiplicity {m}",
                    eta.len()
                )));
            }
            if m > 0 {
                points.push(PointData { a: a.clone(), m, g, eta });
            }
        }
        let eta0 = MatFormK::from_parts(self.dirs.iter().map(|d| d.pf.konst().cloned().unwrap_or_else(zero)).collect());
        Connection::build(self.rank, self.nparams, points, eta0)
    }
}

/// Numerator over the denominator `prod (t - a_i)^{ord_i}` of one entry.
fn entry_fraction(c: &LaxComponent, poles: &PoleSet, r: usize, col: usize) -> (UPolyK, UPolyK) {
    let n = poles.len();
    let mut ord = vec![0u32; n];
    for (&(i, k), v) in c.pf.terms() {
        if !v.get(r, col).is_zero() {
            ord[i] = ord[i].max(k);
        }
    }
    let lin = |i: usize, e: u32| UPoly::linear(poles.point(i)).pow(e);
    let mut den = UPoly::one();
    for (i, &e) in ord.iter().enumerate() {
        den = den.mul(&lin(i, e));
    }
    let mut num = UPoly::zero();
    if let Some(k) = c.pf.konst() {
        num = num.add(&den.scale(k.get(r, col)));
    }
    for (k, m) in c.poly.iter().enumerate() {
        num = num.add(&den.shift_up(k + 1).scale(m.get(r, col)));
    }
    for (&(i, k), v) in c.pf.terms() {
        let x = v.get(r, col);
        if x.is_zero() {
            continue;
        }
        let mut t = lin(i, ord[i] - k);
        for (j, &e) in ord.iter().enumerate() {
            if j != i {
                t = t.mul(&lin(j, e));
            }
        }
        num = num.add(&t.scale(x));
    }
    (num, den)
}

/// `P(p tau + q, r tau + w)` homogenized to degree `d`.
fn homogenize(f: &UPolyK, d: usize, m: &Mobius) -> UPolyK {
    let fe = |x: &BigRational| FieldElem::constant(x.clone());
    let top = UPoly::new(vec![fe(&m.q), fe(&m.p)]);
    let bot = UPoly::new(vec![fe(&m.w), fe(&m.r)]);
    let mut acc = UPoly::zero();
    for (k, c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&top.pow(k as u32).mul(&bot.pow((d - k) as u32)).scale(c));
    }
    acc
}

fn transport_component(
    c: &LaxComponent,
    old: &PoleSet,
    new: &PoleSet,
    m: &Mobius,
    is_dt: bool,
    rank: usize,
) -> Result<LaxComponent> {
    let fe = |x: &BigRational| FieldElem::constant(x.clone());
    let bot = UPoly::new(vec![fe(&m.w), fe(&m.r)]);
    let mut pf_terms: BTreeMap<(usize, u32), MatK> = BTreeMap::new();
    let mut konst: Option<MatK> = None;
    let mut poly: Vec<MatK> = Vec::new();
    let zero = || Matrix::zeros(rank, rank);
    for row in 0..rank {
        for col in 0..rank {
            let (num, den) = entry_fraction(c, old, row, col);
            if num.is_zero() {
                continue;
            }
            let dn = num.degree().unwrap();
            let dd = den.degree().unwrap();
            let d = dn.max(dd);
            let mut n2 = homogenize(&num, d, m);
            let mut d2 = homogenize(&den, d, m);
            if is_dt {
                // dt = det / (r tau + w)^2 dtau
                n2 = n2.scale(&fe(&m.det()));
                d2 = d2.mul(&bot.pow(2));
            }
            let (poly_part, pf) = partial_fractions(&n2, &d2, new)?;
            for (&key, v) in pf.terms() {
                let e = pf_terms.entry(key).or_insert_with(zero);
                e.set(row, col, v.clone());
            }
            for (k, v) in poly_part.coeffs().iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                if k == 0 {
                    konst.get_or_insert_with(zero).set(row, col, v.clone());
                } else {
                    while poly.len() < k {
                        poly.push(zero());
                    }
                    poly[k - 1].set(row, col, v.clone());
                }
            }
        }
    }
    let mut out = PF::zero();
    if let Some(k) = konst {
        out.add_const(k);
    }
    for ((i, k), v) in pf_terms {
        out.add_term(i, k, v);
    }
    Ok(LaxComponent { pf: out, poly })
}

/// The rank-1 connection `d + d log(u^{-n} exp((z/2)(u + 1/u)))` over Q(z)
/// (z is parameter 0), with poles of order 2 at `u = 0` and `u = infinity`.
pub fn bessel_lax(n: &BigRational) -> LaxConnection {
    let m1 = |x: FieldElem| Matrix::from_rows(vec![vec![x]]);
    let z = FieldElem::var(0);
    let half = FieldElem::constant(BigRational::new(1.into(), 2.into()));
    let mut du = PF::constant(m1(&z * &half));
    du.add_term(0, 1, m1(-FieldElem::constant(n.clone())));
    du.add_term(0, 2, m1(-(&z * &half)));
    let dz = LaxComponent { pf: PF::pole(0, 1, m1(half.clone())), poly: vec![m1(half)] };
    LaxConnection {
        rank: 1,
        nparams: 1,
        poles: PoleSet::new(vec![FieldElem::zero()]),
        dt: LaxComponent { pf: du, poly: Vec::new() },
        dirs: vec![dz],
    }
}

impl Connection {
    /// Pullback along `t = (p tau + q) / (r tau + w)`.
    pub fn transport_mobius(&self, m: &Mobius) -> Result<Connection> {
        LaxConnection::from_connection(self).transport(m)?.to_connection()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn sample() -> Connection {
        crate::connection::tests::rank_one(-1)
    }

    #[test]
    fn identity_and_translation() {
        let c = sample();
        assert_eq!(c.transport_mobius(&Mobius::identity()).unwrap(), c);
        let t = c.transport_mobius(&Mobius::translation(q(3))).unwrap();
        assert_eq!(t.point(0), &FieldElem::from_int(-3));
        assert_eq!(t.g(0, 2), c.g(0, 2));
        assert!(t.is_vertical());
    }

    #[test]
    fn inversion_sends_point_to_infinity() {
        // the pole at t = 0 is the image of tau = infinity
        assert!(matches!(sample().transport_mobius(&Mobius::inversion()), Err(Error::PointAtInfinity)));
    }

    #[test]
    fn round_trip() {
        let c = sample().transport_mobius(&Mobius::translation(q(1))).unwrap();
        let m = Mobius::new(q(2), q(1), q(1), q(3)).unwrap();
        let there = c.transport_mobius(&m).unwrap();
        assert!(there.is_vertical());
        assert_eq!(there.transport_mobius(&m.inverse()).unwrap(), c);
    }

    #[test]
    fn bessel_becomes_finite() {
        let lax = bessel_lax(&q(1));
        let m = Mobius::new(q(1), q(1), q(1), q(0)).unwrap();
        let c = lax.transport(&m).unwrap().to_connection().unwrap();
        assert_eq!(c.npoints(), 2);
        assert!(c.points().iter().all(|p| p.m == 2));
        assert!(c.is_vertical());
        assert!(c.is_admissible());
    }
}
