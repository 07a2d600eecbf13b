//! Seeded random instances: matrices, matrix polynomials, commutator
//! partners and vertical connections with solved eta data.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::connection::{big_m, Connection, MatFormK, MatK, PointData};
use crate::error::{Error, Result};
use crate::funcfield::FieldElem;
use crate::linalg::Matrix;
use crate::oracle::companion::MatPolyU;
use crate::ratline::pf::PF;

/// Draws entries from `{-3..3}` and, with probability `param_weight`, from
/// `{+-s_j}`.
pub struct Sampler {
    rng: ChaCha8Rng,
    nparams: usize,
    param_weight: f64,
}

impl Sampler {
    pub fn new(seed: u64, nparams: usize) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), nparams, param_weight: 0.25 }
    }

    pub fn with_param_weight(mut self, w: f64) -> Self {
        self.param_weight = w;
        self
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn integer(&mut self) -> FieldElem {
        FieldElem::from_int(self.int(-3, 3))
    }

    pub fn param(&mut self) -> FieldElem {
        let j = self.rng.gen_range(0..self.nparams);
        let v = FieldElem::var(j);
        if self.rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    }

    pub fn entry(&mut self) -> FieldElem {
        if self.nparams > 0 && self.rng.gen_bool(self.param_weight) {
            self.param()
        } else {
            self.integer()
        }
    }

    pub fn matrix(&mut self, r: usize) -> MatK {
        let cells: Vec<Vec<FieldElem>> = (0..r).map(|_| (0..r).map(|_| self.entry()).collect()).collect();
        Matrix::from_rows(cells)
    }

    pub fn constant_matrix(&mut self, r: usize) -> MatK {
        let cells: Vec<Vec<FieldElem>> = (0..r).map(|_| (0..r).map(|_| self.integer()).collect()).collect();
        Matrix::from_rows(cells)
    }

    pub fn invertible_matrix(&mut self, r: usize) -> MatK {
        loop {
            let m = self.matrix(r);
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    pub fn invertible_constant_matrix(&mut self, r: usize) -> MatK {
        loop {
            let m = self.constant_matrix(r);
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    /// Degree exactly `deg` with invertible leading coefficient.
    pub fn poly_with_invertible_leading(&mut self, r: usize, deg: usize) -> MatPolyU {
        let mut cs: Vec<MatK> = (0..deg).map(|_| self.matrix(r)).collect();
        cs.push(self.invertible_matrix(r));
        MatPolyU::new(r, cs)
    }

    pub fn poly(&mut self, r: usize, deg: usize) -> MatPolyU {
        MatPolyU::new(r, (0..=deg).map(|_| self.matrix(r)).collect())
    }

    /// Random element of the solution space of `[a, b]` having no terms above
    /// degree `m = deg a`, with `b(0) = 0`, `deg b <= m`.
    pub fn commutator_partner(&mut self, a: &MatPolyU) -> Result<MatPolyU> {
        let r = a.rank();
        let m = a.degree().ok_or(Error::SingularLeading)?;
        let nunk = m * r * r;
        // column k of the system: the commutator with the k-th unit b
        let unit = |k: usize| -> MatPolyU {
            let deg = k / (r * r) + 1;
            let idx = k % (r * r);
            let mut e = Matrix::zeros(r, r);
            e.set(idx / r, idx % r, FieldElem::from_int(1));
            let mut cs = vec![Matrix::zeros(r, r); deg];
            cs.push(e);
            MatPolyU::new(r, cs)
        };
        let nrows = m * r * r;
        let mut sys = Matrix::zeros(nrows, nunk);
        for k in 0..nunk {
            let c = a.commutator(&unit(k));
            for d in m + 1..=2 * m {
                let cd = c.coeff(d);
                for idx in 0..r * r {
                    sys.set((d - m - 1) * r * r + idx, k, cd.get(idx / r, idx % r).clone());
                }
            }
        }
        let kernel = sys.kernel();
        if kernel.is_empty() {
            return Err(Error::GenerationFailed("no commutator partner".into()));
        }
        loop {
            let mut x = vec![FieldElem::from_int(0); nunk];
            for v in &kernel {
                let c = self.integer();
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi = &*xi + &(vi * &c);
                }
            }
            if x.iter().all(|v| v.is_zero()) {
                continue;
            }
            let mut cs = vec![Matrix::zeros(r, r); m + 1];
            for (k, v) in x.into_iter().enumerate() {
                let deg = k / (r * r) + 1;
                let idx = k % (r * r);
                cs[deg].set(idx / r, idx % r, v);
            }
            return Ok(MatPolyU::new(r, cs));
        }
    }
}

/// Multiplicities and rank of a random connection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub rank: usize,
    pub mults: Vec<u32>,
    pub nparams: usize,
}

impl Shape {
    pub fn new(rank: usize, mults: Vec<u32>, nparams: usize) -> Self {
        Shape { rank, mults, nparams }
    }

    pub fn is_valid(&self) -> bool {
        self.rank > 0
            && !self.mults.is_empty()
            && self.mults.iter().all(|&m| m > 0)
            && self.mults.iter().any(|&m| m >= 2)
    }
}

/// `(pole term or constant, row, column)`.
type CoeffKey = (Option<(usize, u32)>, usize, usize);

/// Flattened coefficients of a matrix partial fraction.
fn flatten(f: &PF<MatK>) -> BTreeMap<CoeffKey, FieldElem> {
    let mut out = BTreeMap::new();
    let mut put = |key: Option<(usize, u32)>, m: &MatK| {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                if !v.is_zero() {
                    out.insert((key, i, j), v.clone());
                }
            }
        }
    };
    if let Some(k) = f.konst() {
        put(None, k);
    }
    for (k, m) in f.terms() {
        put(Some(*k), m);
    }
    out
}

/// Position of eta unknowns: `(point, s)` with `s = 0` meaning `eta_0`.
fn eta_slots(c: &Connection) -> Vec<(Option<usize>, u32)> {
    let mut out = vec![(None, 0)];
    for i in 0..c.npoints() {
        for s in 1..=big_m(c.mult(i)) {
            out.push((Some(i), s));
        }
    }
    out
}

/// Sets one eta matrix (in direction `j`) of an otherwise eta-free copy.
fn with_single_eta(c: &Connection, j: usize, slot: (Option<usize>, u32), m: &MatK) -> Result<Connection> {
    let r = c.rank();
    let p = c.nparams();
    let zero = MatFormK::zero(r, p);
    let mut part = BTreeMap::new();
    part.insert(j, m.clone());
    let form = MatFormK::from_map(r, p, &part);
    let eta = (0..c.npoints())
        .map(|i| {
            (1..=big_m(c.mult(i))).map(|s| if slot == (Some(i), s) { form.clone() } else { zero.clone() }).collect()
        })
        .collect();
    let eta0 = if slot.0.is_none() { form } else { zero };
    c.with_eta(eta, eta0)
}

/// Affine solution set of the verticality system in direction `j`:
/// a particular solution and a kernel basis, as eta values per slot.
pub type EtaSolution = (Vec<MatK>, Vec<Vec<MatK>>);

pub fn solve_verticality(c: &Connection, j: usize) -> Result<Option<EtaSolution>> {
    let r = c.rank();
    let slots = eta_slots(c);
    let nunk = slots.len() * r * r;
    let zero_eta = with_single_eta(c, j, slots[0], &Matrix::zeros(r, r))?;
    let base = flatten(&zero_eta.curvature_mixed(j));
    let mut cols = Vec::with_capacity(nunk);
    for &slot in &slots {
        for idx in 0..r * r {
            let mut e = Matrix::zeros(r, r);
            e.set(idx / r, idx % r, FieldElem::from_int(1));
            let cj = with_single_eta(c, j, slot, &e)?.curvature_mixed(j);
            let mut col = flatten(&cj);
            for (k, v) in &base {
                let cur = col.remove(k).unwrap_or_else(|| FieldElem::from_int(0));
                let d = &cur - v;
                if !d.is_zero() {
                    col.insert(*k, d);
                }
            }
            cols.push(col);
        }
    }
    let mut keys: Vec<_> = base.keys().cloned().collect();
    for col in &cols {
        keys.extend(col.keys().cloned());
    }
    keys.sort();
    keys.dedup();
    let row_of: BTreeMap<_, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut sys = Matrix::zeros(keys.len(), nunk);
    let mut rhs = Matrix::zeros(keys.len(), 1);
    for (k, col) in cols.iter().enumerate() {
        for (key, v) in col {
            sys.set(row_of[key], k, v.clone());
        }
    }
    for (key, v) in &base {
        rhs.set(row_of[key], 0, -v.clone());
    }
    let solved = sys.solve(&rhs);
    let Some(x) = solved.solution else { return Ok(None) };
    let unpack = |v: &dyn Fn(usize) -> FieldElem| -> Vec<MatK> {
        (0..slots.len()).map(|s| Matrix::from_fn(r, r, |a, b| v(s * r * r + a * r + b))).collect()
    };
    let particular = unpack(&|k| x.get(k, 0).clone());
    let kernel = sys.kernel().iter().map(|kv| unpack(&|k| kv[k].clone())).collect();
    Ok(Some((particular, kernel)))
}

/// A random vertical admissible connection of the given shape.
pub fn vertical_random(shape: &Shape, seed: u64) -> Result<Connection> {
    if !shape.is_valid() || shape.nparams == 0 {
        return Err(Error::GenerationFailed(format!("invalid shape {shape:?}")));
    }
    let mut smp = Sampler::new(seed, shape.nparams);
    for _ in 0..200 {
        if let Some(c) = attempt(shape, &mut smp)? {
            return Ok(c);
        }
    }
    Err(Error::GenerationFailed(format!("no admissible vertical connection for {shape:?} (seed {seed})")))
}

fn attempt(shape: &Shape, smp: &mut Sampler) -> Result<Option<Connection>> {
    let r = shape.rank;
    let p = shape.nparams;
    let n = shape.mults.len();
    let mut pts: Vec<FieldElem> = Vec::new();
    while pts.len() < n {
        let a = if smp.chance(0.5) { smp.param() } else { smp.integer() };
        if !pts.contains(&a) {
            pts.push(a);
        }
    }
    let mut points = Vec::with_capacity(n);
    let mut g1_sum = Matrix::zeros(r, r);
    for (k, (&m, a)) in shape.mults.iter().zip(&pts).enumerate() {
        let mut g = Vec::with_capacity(m as usize);
        // g_1 is a constant matrix; the last point balances the sum
        let g1 = if k + 1 == n { g1_sum.neg() } else { smp.constant_matrix(r) };
        g1_sum = g1_sum.add(&g1);
        g.push(g1);
        for rr in 2..=m {
            g.push(match (rr == m, r >= 2) {
                (true, true) => smp.invertible_constant_matrix(r),
                (true, false) => smp.invertible_matrix(r),
                (false, true) => smp.constant_matrix(r),
                (false, false) => smp.matrix(r),
            });
        }
        let eta = (0..big_m(m)).map(|_| MatFormK::zero(r, p)).collect();
        points.push(PointData { a: a.clone(), m, g, eta });
    }
    let Ok(c) = Connection::new(r, p, points, MatFormK::zero(r, p)) else { return Ok(None) };
    let slots = eta_slots(&c);
    let mut per_dir: Vec<Vec<MatK>> = Vec::with_capacity(p);
    for j in 0..p {
        let Some((part, kernel)) = solve_verticality(&c, j)? else { return Ok(None) };
        let mut sol = part;
        for v in &kernel {
            let coef = smp.integer();
            for (s, m) in sol.iter_mut().zip(v) {
                *s = s.add(&m.scale(&coef));
            }
        }
        per_dir.push(sol);
    }
    let form_at = |k: usize| -> MatFormK { MatFormK::from_parts((0..p).map(|j| per_dir[j][k].clone()).collect()) };
    let mut eta: Vec<Vec<MatFormK>> = (0..c.npoints()).map(|_| Vec::new()).collect();
    let mut eta0 = MatFormK::zero(r, p);
    for (k, slot) in slots.iter().enumerate() {
        match slot.0 {
            None => eta0 = form_at(k),
            Some(i) => eta[i].push(form_at(k)),
        }
    }
    let out = c.with_eta(eta, eta0)?;
    if !out.is_vertical() || !out.is_admissible() {
        return Ok(None);
    }
    if r >= 2 {
        // higher rank: isomonodromy is rare for random parameter-dependent g,
        // so the parameters enter through a constant gauge instead
        return out.gauge_transform(&smp.invertible_matrix(r)).map(Some);
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::d_k;

    #[test]
    fn rank_one_single_point_forces_eta() {
        // g_2 = alpha at 0 with m = 2: eta_1 = -d alpha
        let alpha = FieldElem::var(0);
        let pts = vec![PointData {
            a: FieldElem::from_int(0),
            m: 2,
            g: vec![Matrix::zeros(1, 1), Matrix::from_rows(vec![vec![alpha.clone()]])],
            eta: vec![MatFormK::zero(1, 1)],
        }];
        let c = Connection::new(1, 1, pts, MatFormK::zero(1, 1)).unwrap();
        let (part, kernel) = solve_verticality(&c, 0).unwrap().unwrap();
        // slots: eta_0, eta_1
        assert_eq!(part[1].get(0, 0), &(-d_k(&alpha).coeff(0)));
        assert_eq!(kernel.len(), 1);
        assert!(kernel[0][1].is_zero());
    }

    #[test]
    fn generated_connections_are_vertical_admissible() {
        for (seed, shape) in
            [(1, Shape::new(1, vec![1, 2], 2)), (2, Shape::new(2, vec![2, 2], 1)), (3, Shape::new(2, vec![3], 2))]
        {
            let c = vertical_random(&shape, seed).unwrap();
            assert!(c.is_vertical());
            assert!(c.is_admissible());
            assert_eq!(vertical_random(&shape, seed).unwrap(), c);
        }
    }
}
