//! Checks shared by the topic test files and the acceptance run. Each
//! returns the number of cases on success.

#![allow(dead_code)]

use num_traits::Zero;

use gmdet::cohomology::{basis_element, derham_operator, h0_check, h_basis, project, project_bounded, Kind, WElem};
use gmdet::connection::{big_m, Connection, Mobius};
use gmdet::fixtures::{self, main_theorem_suite};
use gmdet::funcfield::{dlog_class_reduce, FieldElem, OneFormK};
use gmdet::gaussmanin::{gm_determinant_lhs, gm_matrix, gm_matrix_dt_lift, psi_trace};
use gmdet::linalg::Matrix;
use gmdet::localformula::{
    explicit_psi_sum, gm_determinant_rhs, local_eta_residue, local_residue_factor, verify, verify_with_section,
    SectionMultiplier,
};
use gmdet::oracle::suites::random_shape;
use gmdet::oracle::{higgs_derham_comparison, vertical_random, Sampler, Shape};
use gmdet::ratline::pf::PF;
use gmdet::scalar::{q, qq};

pub type Check = Result<usize, String>;

pub fn is_trivial(w: &OneFormK) -> bool {
    dlog_class_reduce(w, false).is_some_and(|c| c.is_integral())
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn both_sides(c: &Connection) -> Result<(OneFormK, OneFormK), String> {
    let lhs = gm_determinant_lhs(c).map_err(|e| e.to_string())?;
    let rhs = gm_determinant_rhs(c, &SectionMultiplier::one()).map_err(|e| e.to_string())?.total;
    Ok((lhs, rhs))
}

fn verifies(c: &Connection) -> bool {
    verify(c).is_ok_and(|r| r.verdict)
}

/// The fixture suite verifies; the rank-3 sum has trivial determinant but a
/// left side outside `dlog K^x`.
pub fn main_theorem() -> Check {
    let suite = main_theorem_suite();
    for f in &suite {
        ensure(verifies(&f.conn), || format!("{} does not verify", f.name))?;
    }
    let c = fixtures::rank_three();
    let mut traceless = c.eta0().trace().is_zero();
    for i in 0..c.npoints() {
        traceless &= (1..=c.mult(i)).all(|r| c.g(i, r).trace().is_zero());
        traceless &= (1..=big_m(c.mult(i))).all(|s| c.eta(i, s).trace().is_zero());
    }
    ensure(traceless, || "rank-three determinant is not trivial".into())?;
    let lhs = gm_determinant_lhs(&c).map_err(|e| e.to_string())?;
    ensure(!is_trivial(&lhs), || "rank-three left side is a dlog".into())?;
    Ok(suite.len() + 1)
}

/// `Tr GM = Tr Psi + Tr eta_nabla` and the residue split, identically.
pub fn decomposition(conns: &[(String, Connection)]) -> Check {
    for (name, c) in conns {
        let err = |e: gmdet::error::Error| format!("{name}: {e}");
        let gm = gm_matrix(c).map_err(err)?;
        let total = gm.total();
        ensure(gm_matrix_dt_lift(c).map_err(err)? == total, || format!("{name}: dt lift differs"))?;
        ensure(derham_operator(c).map_err(err)? == gm.eta_part, || format!("{name}: eta part differs"))?;
        ensure(total.trace() == psi_trace(c).add(&gm.eta_part.trace()), || format!("{name}: trace split"))?;
        let rep = verify(c).map_err(err)?;
        let sum = rep.rhs.residues.values().fold(OneFormK::zero(), |a, w| a.add(w));
        let mut split = explicit_psi_sum(c).neg();
        for i in 0..c.npoints() {
            split = split.add(&local_eta_residue(c, i).map_err(err)?);
        }
        ensure(sum == split, || format!("{name}: residue split"))?;
    }
    Ok(conns.len())
}

/// The A4 population: random vertical admissible connections.
pub fn random_population(seed: u64, count: usize) -> Result<Vec<(String, Connection)>, String> {
    (0..count)
        .map(|k| {
            let shape = random_shape(k);
            let s = seed + k as u64;
            vertical_random(&shape, s).map(|c| (format!("seed {s} {shape:?}"), c)).map_err(|e| e.to_string())
        })
        .collect()
}

pub fn higgs_vs_de_rham(conns: &[(String, Connection)]) -> Check {
    for (name, c) in conns {
        let ok = higgs_derham_comparison(c).is_ok_and(|(_, ok)| ok);
        ensure(ok, || format!("{name}: no integral certificate"))?;
    }
    Ok(conns.len())
}

pub fn suite_connections() -> Vec<(String, Connection)> {
    main_theorem_suite().into_iter().map(|f| (f.name.to_string(), f.conn)).collect()
}

pub fn constant_gauges() -> Check {
    let mut cases = 0;
    for (k, f) in main_theorem_suite().into_iter().enumerate() {
        let (lhs, rhs) = both_sides(&f.conn)?;
        let mut smp = Sampler::new(100 + k as u64, f.names.len()).with_param_weight(0.4);
        for _ in 0..4 {
            let phi = smp.invertible_matrix(f.conn.rank());
            let g = f.conn.gauge_transform(&phi).map_err(|e| e.to_string())?;
            let (lhs2, rhs2) = both_sides(&g)?;
            ensure(is_trivial(&lhs2.sub(&lhs)), || format!("{}: lhs moved", f.name))?;
            ensure(is_trivial(&rhs2.sub(&rhs)), || format!("{}: rhs moved", f.name))?;
            ensure(verifies(&g), || format!("{}: gauged copy fails", f.name))?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn random_section(c: &Connection, smp: &mut Sampler, nfactors: usize) -> SectionMultiplier {
    let lead = loop {
        let v = smp.entry();
        if !v.is_zero() {
            break v;
        }
    };
    let mut factors: Vec<(FieldElem, i64)> = Vec::new();
    while factors.len() < nfactors {
        let p = smp.entry();
        let clash = (0..c.npoints()).any(|i| c.point(i) == &p) || factors.iter().any(|(x, _)| *x == p);
        if !clash {
            factors.push((p, smp.int(-2, 2)));
        }
    }
    SectionMultiplier { c: lead, factors }
}

pub fn section_changes() -> Check {
    let suite = main_theorem_suite();
    for k in 0..10u64 {
        let f = &suite[k as usize % suite.len()];
        let mut smp = Sampler::new(200 + k, f.names.len());
        let mult = random_section(&f.conn, &mut smp, 1 + k as usize % 3);
        let base = both_sides(&f.conn)?.1;
        let rep = verify_with_section(&f.conn, &mult).map_err(|e| e.to_string())?;
        ensure(rep.verdict, || format!("{} {mult:?}: no verdict", f.name))?;
        ensure(is_trivial(&rep.rhs.total.sub(&base)), || format!("{} {mult:?}: rhs moved", f.name))?;
    }
    Ok(10)
}

pub fn translations() -> Check {
    let suite = main_theorem_suite();
    for k in 0..10i64 {
        let f = &suite[k as usize % suite.len()];
        let shift = qq(2 * k - 9, 1 + k % 3);
        let moved = f.conn.transport_mobius(&Mobius::translation(shift.clone())).map_err(|e| e.to_string())?;
        let (lhs, rhs) = both_sides(&f.conn)?;
        let (lhs2, rhs2) = both_sides(&moved)?;
        ensure(is_trivial(&lhs2.sub(&lhs)), || format!("{} by {shift}: lhs moved", f.name))?;
        ensure(is_trivial(&rhs2.sub(&rhs)), || format!("{} by {shift}: rhs moved", f.name))?;
    }
    Ok(10)
}

pub fn special_pseudo_log_zero() -> Check {
    let pairs = [(q(1), q(2)), (q(2), q(5)), (qq(1, 2), q(4)), (q(-1), q(3))];
    for (m, n) in &pairs {
        let c = fixtures::special_pseudo_log(m, n);
        ensure(c.classify_point(0).tag() == "SpecialPseudoLog", || format!("({m}, {n}) not special"))?;
        let w = local_residue_factor(&c, 0, &SectionMultiplier::one()).map_err(|e| e.to_string())?;
        ensure(w.is_zero(), || format!("({m}, {n}): factor {w:?}"))?;
    }
    Ok(pairs.len())
}

/// Random element of W: simple-pole coefficients sum to zero, so there is
/// no pole at infinity.
fn random_form(c: &Connection, smp: &mut Sampler) -> WElem {
    let r = c.rank();
    let n = c.npoints();
    let mut f = PF::zero();
    let mut res_sum = vec![FieldElem::from_int(0); r];
    for i in 0..n {
        for rho in 1..=c.mult(i) + 1 {
            let v: Vec<FieldElem> = if i + 1 == n && rho == 1 {
                res_sum.iter().map(|x| -x).collect()
            } else {
                (0..r).map(|_| smp.integer()).collect()
            };
            if rho == 1 {
                res_sum = res_sum.iter().zip(&v).map(|(a, b)| a + b).collect();
            }
            f.add_term(i, rho, v);
        }
    }
    f
}

/// `dim H = r (sum m_i - 2)`; the basis projects to the identity for both
/// operators and a random form projects the same with a larger bound.
pub fn dimension_law(count: usize) -> Check {
    for k in 0..count {
        let mut shape: Shape = random_shape(k);
        if k % 5 == 4 && shape.rank == 1 {
            shape.mults.push(1 + (k as u32 / 5) % 2);
        }
        let c = vertical_random(&shape, 3000 + k as u64).map_err(|e| e.to_string())?;
        let err = |e: gmdet::error::Error| format!("{shape:?}: {e}");
        let total: u32 = shape.mults.iter().sum();
        let d = h_basis(&c).len();
        ensure(d == shape.rank * (total as usize - 2), || format!("{shape:?}: dim {d}"))?;
        ensure(h0_check(&c), || format!("{shape:?}: bounded sections meet H"))?;
        let basis: Vec<WElem> = h_basis(&c).labels.iter().map(|x| basis_element(&c, x)).collect();
        for kind in [Kind::DeRham, Kind::Higgs] {
            ensure(project(&c, kind, &basis).map_err(err)? == Matrix::identity(d), || format!("{shape:?}: basis"))?;
        }
        let mut smp = Sampler::new(k as u64, 1);
        let f = vec![random_form(&c, &mut smp)];
        let a = project(&c, Kind::DeRham, &f).map_err(err)?;
        let b = project_bounded(&c, Kind::DeRham, &f, 5).map_err(err)?;
        ensure(a == b, || format!("{shape:?}: projection depends on the bound"))?;
    }
    Ok(count)
}
