//! The basis H of relative de Rham cohomology, the projections onto it
//! modulo `gamma_K V` and `nabla_{/K} V`, and the Higgs and de Rham operators.
//!
//! Elements of `W = Gamma(E (x) omega(*D))` are vector partial fractions `f`
//! standing for `f dt`; they have no constant term.

use num_traits::{One, Zero};

use crate::connection::{Connection, MatFormK, MatK};
use crate::error::{Error, Result};
use crate::funcfield::FieldElem;
use crate::linalg::Matrix;
use crate::ratline::pf::PF;

pub type WElem = PF<Vec<FieldElem>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HLabel {
    /// `e_mu dt / (t - a_i)^rho`.
    Pole { i: usize, rho: u32, mu: usize },
    /// `e_mu dt (1/(t - a_i) - 1/(t - a_N))`.
    Diff { i: usize, mu: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct HBasis {
    pub labels: Vec<HLabel>,
}

impl HBasis {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

pub fn h_basis(c: &Connection) -> HBasis {
    let n = c.npoints();
    let r = c.rank();
    let mut labels = Vec::new();
    for i in 0..n {
        let top = if i + 1 == n { c.mult(i).saturating_sub(1) } else { c.mult(i) };
        for rho in 2..=top {
            for mu in 0..r {
                labels.push(HLabel::Pole { i, rho, mu });
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        for mu in 0..r {
            labels.push(HLabel::Diff { i, mu });
        }
    }
    HBasis { labels }
}

fn unit(r: usize, mu: usize) -> Vec<FieldElem> {
    (0..r).map(|k| if k == mu { FieldElem::one() } else { FieldElem::zero() }).collect()
}

/// The form `sigma(x)` as an element of W.
pub fn basis_element(c: &Connection, x: &HLabel) -> WElem {
    let r = c.rank();
    match *x {
        HLabel::Pole { i, rho, mu } => PF::pole(i, rho, unit(r, mu)),
        HLabel::Diff { i, mu } => {
            let mut f = PF::pole(i, 1, unit(r, mu));
            f.add_term(c.npoints() - 1, 1, unit(r, mu).iter().map(|v| -v).collect());
            f
        }
    }
}

/// Coefficient of `ds_j` in the lift `s(x)` built from `d(t - a_i)` in place
/// of `dt`: `-e_mu da_i / (t - a_i)^rho` (and the difference for `Diff`).
pub fn basis_lift_dir(c: &Connection, x: &HLabel, j: usize) -> WElem {
    let r = c.rank();
    let term = |i: usize, rho: u32, mu: usize, sign: i64| -> WElem {
        let da = c.point(i).derivative(j);
        let k = &da * &FieldElem::from_int(-sign);
        PF::pole(i, rho, unit(r, mu).iter().map(|v| v * &k).collect())
    };
    match *x {
        HLabel::Pole { i, rho, mu } => term(i, rho, mu, 1),
        HLabel::Diff { i, mu } => term(i, 1, mu, 1).add(&term(c.npoints() - 1, 1, mu, -1)),
    }
}

/// `M f` for a matrix partial fraction `M` and a vector one `f`.
pub fn apply(c: &Connection, m: &PF<MatK>, f: &WElem) -> WElem {
    m.mul_with(f, c.poles(), |a, v| a.mul_vec(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Modulo `gamma_K V`.
    Higgs,
    /// Modulo `nabla_{/K} V`.
    DeRham,
}

/// Rows: principal-part coordinates `(i, k, mu)` with `k <= rows_per_point[i]`.
struct Coords {
    offsets: Vec<usize>,
    rows_per_point: Vec<u32>,
    r: usize,
}

impl Coords {
    fn new(r: usize, rows_per_point: Vec<u32>) -> Self {
        let mut offsets = Vec::with_capacity(rows_per_point.len());
        let mut acc = 0;
        for &k in &rows_per_point {
            offsets.push(acc);
            acc += k as usize * r;
        }
        offsets.push(acc);
        Coords { offsets, rows_per_point, r }
    }

    fn nrows(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn write(&self, m: &mut Matrix<FieldElem>, col: usize, f: &WElem) -> Result<()> {
        if f.konst().is_some() {
            return Err(Error::Precondition("element of W has a constant term".into()));
        }
        for (&(i, k), v) in f.terms() {
            if k > self.rows_per_point[i] {
                return Err(Error::ReductionFailed(format!("pole of order {k} beyond working bound")));
            }
            let base = self.offsets[i] + (k as usize - 1) * self.r;
            for (mu, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    m.set(base + mu, col, x.clone());
                }
            }
        }
        Ok(())
    }
}

/// Columns of the bounded subspace `V_P` mapped to W, grouped by blocks of
/// r (one block per monomial `1` or `1/(t - a_i)^k`).
fn image_blocks(c: &Connection, kind: Kind, bounds: &[u32]) -> Vec<PF<MatK>> {
    let r = c.rank();
    let at = c.a_t();
    let id = Matrix::identity(r);
    let mut out = vec![at.clone()];
    for (i, &p) in bounds.iter().enumerate() {
        for k in 1..=p {
            let y = PF::pole(i, k, id.clone());
            let mut img = at.mul_with(&y, c.poles(), |a, b| a.mul(b));
            if kind == Kind::DeRham {
                img = img.add(&y.derivative_t());
            }
            out.push(img);
        }
    }
    out
}

fn min_mult(m: u32) -> u32 {
    m.max(1)
}

/// Per-point bound on `V_P` for right-hand sides with the given pole orders.
fn initial_bounds(c: &Connection, maxpole: &[u32]) -> Vec<u32> {
    (0..c.npoints()).map(|i| maxpole[i].saturating_sub(min_mult(c.mult(i))) + 1).collect()
}

/// Coordinates in H of the classes of `rhs` (one column each).
pub fn project(c: &Connection, kind: Kind, rhs: &[WElem]) -> Result<Matrix<FieldElem>> {
    let basis = h_basis(c);
    let n = c.npoints();
    let mut maxpole: Vec<u32> = (0..n).map(|i| c.mult(i)).collect();
    for f in rhs {
        for (i, mp) in maxpole.iter_mut().enumerate() {
            *mp = (*mp).max(f.order_at(i));
        }
    }
    let bounds0 = initial_bounds(c, &maxpole);
    for attempt in 0..4u32 {
        let bounds: Vec<u32> = bounds0.iter().map(|b| b + 2 * attempt).collect();
        if let Some(sol) = project_with_bounds(c, kind, &basis, rhs, &maxpole, &bounds)? {
            return Ok(sol);
        }
    }
    Err(Error::ReductionFailed("no solution within the working pole bound".into()))
}

/// As [`project`] with an explicit bound `P` at every point.
pub fn project_bounded(c: &Connection, kind: Kind, rhs: &[WElem], p: u32) -> Result<Matrix<FieldElem>> {
    let basis = h_basis(c);
    let mut maxpole: Vec<u32> = (0..c.npoints()).map(|i| c.mult(i)).collect();
    for f in rhs {
        for (i, mp) in maxpole.iter_mut().enumerate() {
            *mp = (*mp).max(f.order_at(i));
        }
    }
    let bounds = vec![p; c.npoints()];
    project_with_bounds(c, kind, &basis, rhs, &maxpole, &bounds)?
        .ok_or_else(|| Error::ReductionFailed(format!("no solution with pole bound {p}")))
}

fn project_with_bounds(
    c: &Connection,
    kind: Kind,
    basis: &HBasis,
    rhs: &[WElem],
    maxpole: &[u32],
    bounds: &[u32],
) -> Result<Option<Matrix<FieldElem>>> {
    let r = c.rank();
    let rows: Vec<u32> = (0..c.npoints()).map(|i| maxpole[i].max(c.mult(i) + bounds[i])).collect();
    let coords = Coords::new(r, rows);
    let blocks = image_blocks(c, kind, bounds);
    let ny = blocks.len() * r;
    let nh = basis.len();
    let mut m = Matrix::zeros(coords.nrows(), ny + nh);
    for (b, img) in blocks.iter().enumerate() {
        for mu in 0..r {
            let col: WElem = img.map(|a| a.col(mu));
            coords.write(&mut m, b * r + mu, &col)?;
        }
    }
    for (x, label) in basis.labels.iter().enumerate() {
        coords.write(&mut m, ny + x, &basis_element(c, label))?;
    }
    let mut b = Matrix::zeros(coords.nrows(), rhs.len());
    for (k, f) in rhs.iter().enumerate() {
        coords.write(&mut b, k, f)?;
    }
    let solved = m.solve(&b);
    let h_pivots = solved.pivots.iter().filter(|&&p| p >= ny).count();
    if h_pivots < nh {
        return Err(Error::ReductionFailed("H meets the image of the bounded sections".into()));
    }
    let Some(sol) = solved.solution else { return Ok(None) };
    Ok(Some(sol.submatrix(ny, 0, nh, rhs.len())))
}

/// `true` iff `nabla_{/K}` is injective on the bounded sections used for
/// projecting the basis itself.
pub fn h0_check(c: &Connection) -> bool {
    let maxpole: Vec<u32> = (0..c.npoints()).map(|i| c.mult(i)).collect();
    let bounds = initial_bounds(c, &maxpole);
    let blocks = image_blocks(c, Kind::DeRham, &bounds);
    let r = c.rank();
    let rows: Vec<u32> = (0..c.npoints()).map(|i| maxpole[i].max(c.mult(i) + bounds[i])).collect();
    let coords = Coords::new(r, rows);
    let mut m = Matrix::zeros(coords.nrows(), blocks.len() * r);
    for (b, img) in blocks.iter().enumerate() {
        for mu in 0..r {
            if coords.write(&mut m, b * r + mu, &img.map(|a| a.col(mu))).is_err() {
                return false;
            }
        }
    }
    m.rank() == blocks.len() * r
}

/// `eta_j f` for the total eta of the connection.
pub fn eta_times(c: &Connection, j: usize, f: &WElem) -> WElem {
    apply(c, &c.eta_dir(j), f)
}

/// Operator on H (one matrix per `ds_j`, columns indexed by the basis) whose
/// column x is the projection of `eta sigma(x)`.
pub fn eta_operator(c: &Connection, kind: Kind) -> Result<MatFormK> {
    let basis = h_basis(c);
    let d = basis.len();
    let mut rhs = Vec::with_capacity(d * c.nparams());
    for j in 0..c.nparams() {
        for x in &basis.labels {
            rhs.push(eta_times(c, j, &basis_element(c, x)));
        }
    }
    let sol = project(c, kind, &rhs)?;
    let parts = (0..c.nparams()).map(|j| sol.submatrix(0, j * d, d, d)).collect();
    Ok(MatFormK::from_parts(parts))
}

pub fn higgs_operator(c: &Connection) -> Result<MatFormK> {
    eta_operator(c, Kind::Higgs)
}

pub fn derham_operator(c: &Connection) -> Result<MatFormK> {
    eta_operator(c, Kind::DeRham)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::PointData;

    fn m1(c: FieldElem) -> MatK {
        Matrix::from_rows(vec![vec![c]])
    }

    fn shape(r: usize, ms: &[u32]) -> Connection {
        let points = ms
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let g: Vec<MatK> = (1..=m)
                    .map(|k| {
                        if k == m {
                            Matrix::identity(r).scale(&FieldElem::from_int(i as i64 + 2))
                        } else {
                            Matrix::zeros(r, r)
                        }
                    })
                    .collect();
                PointData {
                    a: FieldElem::from_int(i as i64),
                    m,
                    g,
                    eta: vec![MatFormK::zero(r, 1); crate::connection::big_m(m) as usize],
                }
            })
            .collect();
        Connection::build(r, 1, points, MatFormK::zero(r, 1)).unwrap()
    }

    #[test]
    fn basis_sizes() {
        assert!(h_basis(&shape(1, &[2])).is_empty());
        assert_eq!(h_basis(&shape(1, &[2, 2])).len(), 2);
        assert_eq!(h_basis(&shape(2, &[2, 3])).len(), 6);
    }

    #[test]
    fn projection_is_identity_on_basis() {
        let c = shape(2, &[2, 3]);
        let basis = h_basis(&c);
        let rhs: Vec<WElem> = basis.labels.iter().map(|x| basis_element(&c, x)).collect();
        for kind in [Kind::Higgs, Kind::DeRham] {
            let p = project(&c, kind, &rhs).unwrap();
            assert_eq!(p, Matrix::identity(basis.len()));
        }
        assert!(h0_check(&c));
    }

    #[test]
    fn exact_forms_project_to_zero() {
        let c = shape(1, &[3, 2]);
        let y: PF<MatK> = PF::pole(0, 2, m1(FieldElem::var(0))).add(&PF::constant(m1(FieldElem::one())));
        let v: WElem = y.map(|m| m.col(0));
        let nabla_v = apply(&c, &c.a_t(), &v).add(&v.derivative_t());
        let p = project(&c, Kind::DeRham, &[nabla_v]).unwrap();
        assert!(p.is_zero());
        let gamma_v = apply(&c, &c.a_t(), &v);
        assert!(project(&c, Kind::Higgs, &[gamma_v]).unwrap().is_zero());
    }

    #[test]
    fn bound_independence() {
        let c = shape(1, &[2, 3]);
        let f: WElem = PF::pole(0, 4, vec![FieldElem::var(0)]).add(&PF::pole(1, 2, vec![FieldElem::one()]));
        let a = project_bounded(&c, Kind::DeRham, std::slice::from_ref(&f), 4).unwrap();
        let b = project_bounded(&c, Kind::DeRham, &[f], 5).unwrap();
        assert_eq!(a, b);
    }
}
