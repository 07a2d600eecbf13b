//! A1-A8, one status line each. Exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use gmdet::linalg::Matrix;
use gmdet::oracle::suites::{bridge_suite, commutator_suite, euler_residue_suite, lemma62_suite, SuiteReport};
use gmdet::oracle::{companion_power_trace, lemma62_sum, Sampler};

use common::Check;

type Criterion<'a> = (&'static str, &'static str, Box<dyn Fn() -> Check + 'a>);

fn from_report(r: SuiteReport) -> Check {
    if r.passed() {
        Ok(r.cases)
    } else {
        Err(r.to_string())
    }
}

fn chain(checks: Vec<Check>) -> Check {
    checks.into_iter().try_fold(0, |acc, c| c.map(|n| acc + n))
}

fn a2() -> Check {
    let grid = from_report(lemma62_suite(62))?;
    let mut smp = Sampler::new(1, 1);
    for r in 1..=2 {
        let a: Vec<Matrix<_>> = (0..4).map(|_| smp.matrix(r)).collect();
        if companion_power_trace(&a, 1) != a[0].neg() || lemma62_sum(&a, 1) != a[0].neg() {
            return Err("Tr M != -a_1".into());
        }
    }
    Ok(grid + 2)
}

fn main() -> ExitCode {
    let population = common::random_population(500, 30);
    let criteria: Vec<Criterion> = vec![
        ("A1", "companion trace equals the residue at infinity", Box::new(|| from_report(euler_residue_suite(1, 200)))),
        ("A2", "composition sum equals companion power traces", Box::new(a2)),
        ("A3", "commutator top coefficient is traceless", Box::new(|| from_report(commutator_suite(3, 100)))),
        (
            "A4",
            "Higgs and de Rham traces agree modulo dlog",
            Box::new(|| common::higgs_vs_de_rham(population.as_ref().map_err(Clone::clone)?)),
        ),
        ("A5", "both sides agree on the fixture suite", Box::new(common::main_theorem)),
        (
            "A6",
            "dimension law and local trace bridge",
            Box::new(|| chain(vec![common::dimension_law(50), from_report(bridge_suite())])),
        ),
        (
            "A7",
            "invariance under gauge, section and translation",
            Box::new(|| {
                chain(vec![
                    common::constant_gauges(),
                    common::section_changes(),
                    common::translations(),
                    common::special_pseudo_log_zero(),
                ])
            }),
        ),
        (
            "A8",
            "exact trace and residue decompositions",
            Box::new(|| {
                let mut conns = common::suite_connections();
                conns.extend(population.clone()?);
                common::decomposition(&conns)
            }),
        ),
    ];
    let mut failed = 0;
    for (id, what, check) in &criteria {
        let t = Instant::now();
        let res = check();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(n) => println!("{id} PASS {what} ({n} cases, {secs:.1}s)"),
            Err(e) => {
                failed += 1;
                println!("{id} FAIL {what}: {e} ({secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
