//! Named example connections used by the self-test and the test suites.
//!
//! Rank-1 examples are logarithmic differentials
//! `d log(exp(phi) prod (t - a_i)^{lambda_i})` with
//! `phi = phi_0 + sum_i sum_r c_{i,r} / (t - a_i)^r`, hence flat.

use num_rational::BigRational;
use num_traits::Zero;

use crate::connection::{bessel_lax, big_m, Connection, MatFormK, MatK, Mobius, PointData};
use crate::error::Result;
use crate::funcfield::{d_k, FieldElem};
use crate::linalg::Matrix;
use crate::scalar::{q, qq};

#[derive(Clone, Debug, PartialEq)]
pub struct RankOnePoint {
    pub a: FieldElem,
    pub lambda: BigRational,
    /// `c[r - 1]` multiplies `1 / (t - a)^r` in `phi`.
    pub c: Vec<FieldElem>,
}

impl RankOnePoint {
    pub fn new(a: FieldElem, lambda: BigRational, c: Vec<FieldElem>) -> Self {
        RankOnePoint { a, lambda, c }
    }
}

fn m1(x: FieldElem) -> MatK {
    Matrix::from_rows(vec![vec![x]])
}

/// `g_1 = lambda`, `g_{r+1} = -r c_r`, `eta_r = d c_r`, `eta_0 = d phi_0`.
pub fn rank_one_exp(nparams: usize, pts: &[RankOnePoint], phi0: &FieldElem) -> Result<Connection> {
    let points = pts
        .iter()
        .map(|p| {
            let mut c = p.c.clone();
            while c.last().is_some_and(|x| x.is_zero()) {
                c.pop();
            }
            let m = c.len() as u32 + 1;
            let mut g = vec![m1(FieldElem::constant(p.lambda.clone()))];
            for (r, cr) in c.iter().enumerate() {
                g.push(m1(cr * &FieldElem::from_int(-(r as i64 + 1))));
            }
            let eta = (0..big_m(m) as usize)
                .map(|s| {
                    let w = c.get(s).map(d_k).unwrap_or_default();
                    MatFormK::scalar(1, nparams, &w)
                })
                .collect();
            PointData { a: p.a.clone(), m, g, eta }
        })
        .collect();
    Connection::new(1, nparams, points, MatFormK::scalar(1, nparams, &d_k(phi0)))
}

/// Tensor product of two rank-1 examples: data added point by point.
pub fn rank_one_tensor(a: &[RankOnePoint], b: &[RankOnePoint]) -> Vec<RankOnePoint> {
    let mut out: Vec<RankOnePoint> = a.to_vec();
    for p in b {
        match out.iter_mut().find(|x| x.a == p.a) {
            Some(x) => {
                x.lambda = &x.lambda + &p.lambda;
                let n = x.c.len().max(p.c.len());
                x.c.resize(n, FieldElem::zero());
                for (k, v) in p.c.iter().enumerate() {
                    x.c[k] = &x.c[k] + v;
                }
            }
            None => out.push(p.clone()),
        }
    }
    out
}

pub fn x() -> FieldElem {
    FieldElem::var(0)
}

pub fn alpha() -> FieldElem {
    FieldElem::var(1)
}

fn fe(n: i64) -> FieldElem {
    FieldElem::from_int(n)
}

/// Over `Q(alpha)`: `a = 0`, `m = 2`, `g_2 = alpha`, `eta_1 = -d alpha`.
pub fn single_point() -> Connection {
    rank_one_exp(1, &[RankOnePoint::new(FieldElem::zero(), q(0), vec![-FieldElem::var(0)])], &FieldElem::zero())
        .unwrap()
}

/// Over `Q(x, alpha)`: a logarithmic point at 0 and a double pole at x.
pub fn two_point_data() -> Vec<RankOnePoint> {
    vec![
        RankOnePoint::new(FieldElem::zero(), qq(-1, 3), vec![]),
        RankOnePoint::new(x(), qq(1, 3), vec![&alpha() * &x()]),
    ]
}

pub fn two_point() -> Connection {
    rank_one_exp(2, &two_point_data(), &alpha()).unwrap()
}

/// Rank 2 over `Q(x, alpha)`: a non-diagonal constant gauge of a sum of two
/// rank-1 examples with poles of order 2 at 0 and 3 at x.
pub fn rank_two() -> Connection {
    let l = vec![
        RankOnePoint::new(FieldElem::zero(), qq(1, 2), vec![alpha()]),
        RankOnePoint::new(x(), qq(-1, 2), vec![fe(1), x()]),
    ];
    let m = vec![
        RankOnePoint::new(FieldElem::zero(), qq(-1, 3), vec![fe(2)]),
        RankOnePoint::new(x(), qq(1, 3), vec![alpha(), fe(-1)]),
    ];
    let cl = rank_one_exp(2, &l, &FieldElem::zero()).unwrap();
    let cm = rank_one_exp(2, &m, &x()).unwrap();
    let sum = cl.direct_sum(&cm).unwrap();
    let phi = Matrix::from_rows(vec![vec![fe(1), x()], vec![fe(0), fe(1)]]);
    sum.gauge_transform(&phi).unwrap()
}

/// `diag(L (x) M, L^{-1}, M^{-1})`: trivial determinant.
pub fn rank_three_data() -> (Vec<RankOnePoint>, Vec<RankOnePoint>) {
    let l =
        vec![RankOnePoint::new(FieldElem::zero(), qq(-1, 3), vec![]), RankOnePoint::new(x(), qq(1, 3), vec![alpha()])];
    let m =
        vec![RankOnePoint::new(FieldElem::zero(), qq(-1, 5), vec![]), RankOnePoint::new(x(), qq(1, 5), vec![fe(1)])];
    (l, m)
}

pub fn rank_three() -> Connection {
    let (l, m) = rank_three_data();
    let lm = rank_one_exp(2, &rank_one_tensor(&l, &m), &FieldElem::zero()).unwrap();
    let cl = rank_one_exp(2, &l, &FieldElem::zero()).unwrap().dual();
    let cm = rank_one_exp(2, &m, &FieldElem::zero()).unwrap().dual();
    lm.direct_sum(&cl).unwrap().direct_sum(&cm).unwrap()
}

/// The Bessel-type connection over `Q(z)` moved by `u = (tau + 1)/tau`, so
/// both poles are finite.
pub fn bessel(n: &BigRational) -> Connection {
    let m = Mobius::new(q(1), q(1), q(1), q(0)).unwrap();
    bessel_lax(n).transport(&m).unwrap().to_connection().unwrap()
}

/// Rank 2 over `Q(x)` with a special pseudo-logarithmic point at 0
/// (`g_1 = diag(m, n)`, `eta_1` strictly lower triangular) and a double
/// pole at 1 with lower triangular data. Only the local shape matters here;
/// the connection is not vertical.
pub fn special_pseudo_log(m: &BigRational, n: &BigRational) -> Connection {
    let x = x();
    let z = FieldElem::zero();
    let g1 = Matrix::diag(&[FieldElem::constant(m.clone()), FieldElem::constant(n.clone())]);
    let lower = |c: FieldElem| Matrix::from_rows(vec![vec![z.clone(), z.clone()], vec![c, z.clone()]]);
    let dx = |c: MatK| MatFormK::from_parts(vec![c]);
    let p0 = PointData { a: z.clone(), m: 1, g: vec![g1.clone()], eta: vec![dx(lower(x.clone()))] };
    let g2 = Matrix::from_rows(vec![vec![fe(1), z.clone()], vec![x.clone(), fe(2)]]);
    let p1 = PointData { a: fe(1), m: 2, g: vec![g1.neg(), g2], eta: vec![dx(lower(fe(3)))] };
    let eta0 = dx(Matrix::from_rows(vec![vec![x.clone(), z.clone()], vec![fe(1), z]]));
    Connection::new(2, 1, vec![p0, p1], eta0).unwrap()
}

/// A named fixture with parameter names.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub names: Vec<String>,
    pub conn: Connection,
}

pub fn main_theorem_suite() -> Vec<Fixture> {
    let xa = vec!["x".to_string(), "alpha".to_string()];
    vec![
        Fixture { name: "single-point", names: vec!["alpha".into()], conn: single_point() },
        Fixture { name: "two-point", names: xa.clone(), conn: two_point() },
        Fixture { name: "rank-two", names: xa.clone(), conn: rank_two() },
        Fixture { name: "bessel", names: vec!["z".into()], conn: bessel(&q(1)) },
        Fixture { name: "rank-three", names: xa, conn: rank_three() },
    ]
}
