//! Batches of oracle checks over seeded random instances.

use std::fmt;

use num_traits::Zero;

use crate::fixtures;
use crate::linalg::Matrix;
use crate::localformula::verify;
use crate::oracle::{
    commutator_identity_check, companion_point_trace, companion_power_trace, companion_trace, euler_residue_trace,
    higgs_derham_comparison, higgs_point_trace, lemma62_sum, vertical_random, MatPolyU, Sampler, Shape,
};

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases", self.name, self.cases)?;
        if !self.passed() {
            write!(f, ", {} failed: {}", self.failures.len(), self.failures.join("; "))?;
        }
        write!(f, ")")
    }
}

/// Companion trace against the residue at infinity, `r <= 3`, `m <= 4`,
/// entries in `{-3..3} u {+-x}`.
pub fn euler_residue_suite(seed: u64, count: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("euler residue trace");
    for k in 0..count {
        let s = seed.wrapping_add(k as u64);
        let mut smp = Sampler::new(s, 1);
        let r = 1 + k % 3;
        let m = 1 + (k / 3) % 4;
        let g = smp.poly_with_invertible_leading(r, m);
        let dh = smp.int(0, 5) as usize;
        let h = smp.poly(r, dh);
        let ok = match (companion_trace(&g, &h), euler_residue_trace(&g, &h)) {
            (Ok(a), Ok(b)) => a.trace() == b,
            _ => false,
        };
        rep.record(ok, || format!("seed {s} r={r} m={m}"));
    }
    rep
}

/// The combinatorial sum against naive powers of the companion matrix for
/// all `m <= 4`, `p <= 6`, `r <= 2`.
pub fn lemma62_suite(seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("companion power traces");
    for r in 1..=2usize {
        for m in 1..=4usize {
            let mut smp = Sampler::new(seed.wrapping_add((10 * r + m) as u64), 1);
            let a: Vec<_> = (0..m).map(|_| smp.matrix(r)).collect();
            for p in 1..=6u32 {
                rep.record(lemma62_sum(&a, p) == companion_power_trace(&a, p), || format!("r={r} m={m} p={p}"));
            }
        }
    }
    rep
}

/// `Tr(a_m^{-1} c_m) = 0` for `b` solved from the constraint system.
pub fn commutator_suite(seed: u64, count: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("commutator identity");
    for k in 0..count {
        let s = seed.wrapping_add(k as u64);
        let mut smp = Sampler::new(s, 1);
        let r = 1 + k % 3;
        let m = 1 + (k / 3) % 4;
        let full = smp.poly_with_invertible_leading(r, m);
        let mut cs = full.coeffs().to_vec();
        cs[0] = Matrix::zeros(r, r);
        let a = MatPolyU::new(r, cs);
        let ok = smp.commutator_partner(&a).and_then(|b| commutator_identity_check(&a, &b)).is_ok_and(|v| v.is_zero());
        rep.record(ok, || format!("seed {s} r={r} m={m}"));
    }
    rep
}

/// Shapes with `r <= 2`, `N <= 2`, `m_i <= 4` and up to three parameters.
pub fn random_shape(k: usize) -> Shape {
    const MULTS: [&[u32]; 8] = [&[2], &[3], &[4], &[1, 2], &[2, 2], &[1, 3], &[2, 3], &[1, 4]];
    let rank = 1 + k % 2;
    let mults = MULTS[(k / 2) % MULTS.len()].to_vec();
    let nparams = 1 + (k / 3) % 3;
    Shape::new(rank, mults, nparams)
}

/// Random vertical admissible connections: the Higgs/de Rham comparison and
/// the two sides of the main formula.
pub fn vertical_suite(seed: u64, count: usize) -> (SuiteReport, SuiteReport) {
    let mut a4 = SuiteReport::new("higgs vs de rham trace");
    let mut a5 = SuiteReport::new("main formula on random connections");
    for k in 0..count {
        let shape = random_shape(k);
        let s = seed.wrapping_add(k as u64);
        let c = match vertical_random(&shape, s) {
            Ok(c) => c,
            Err(e) => {
                a4.record(false, || format!("seed {s}: {e}"));
                continue;
            }
        };
        let ok = higgs_derham_comparison(&c).is_ok_and(|(_, ok)| ok);
        a4.record(ok, || format!("seed {s} {shape:?}"));
        let ok = verify(&c).is_ok_and(|r| r.verdict);
        a5.record(ok, || format!("seed {s} {shape:?}"));
    }
    (a4, a5)
}

/// Trace of `eta^{(i)}` on H against `V[u]/gV[u]` on the rank-1 and rank-2
/// fixtures.
pub fn bridge_suite() -> SuiteReport {
    let mut rep = SuiteReport::new("local higgs trace bridge");
    for (name, c) in [
        ("single-point", fixtures::single_point()),
        ("two-point", fixtures::two_point()),
        ("rank-two", fixtures::rank_two()),
    ] {
        for i in 0..c.npoints() {
            let ok = match (higgs_point_trace(&c, i), companion_point_trace(&c, i)) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            };
            rep.record(ok, || format!("{name} point {i}"));
        }
    }
    rep
}
