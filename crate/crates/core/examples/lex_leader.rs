//! Lex-leader breakers as formulas, checked against semantic orbits.

use std::error::Error;

use qsym::breaker::{
    lex_leader_formula, universal_lex_leader_formula, verify_breaker, verify_universal_breaker, Selection,
};
use qsym::formula::{equivalent, Formula, Var};
use qsym::group::parse_generators;
use qsym::qdimacs::{Prefix, Quantifier};
use qsym::strategy::{qbf_truth, OrbitCaps};

pub fn run() -> Result<(), Box<dyn Error>> {
    let prefix = Prefix::from_ids(&[(Quantifier::Forall, &[1]), (Quantifier::Exists, &[2, 3])])?;
    let gens = parse_generators("(2 3)\n(-2)(-3)\n")?;

    let exists = lex_leader_formula(&prefix, &gens, Selection::Generators)?;
    for (g, part) in &exists.parts {
        println!("{g}: {part}");
    }
    let psi = exists.formula();
    let y = Formula::var(Var::new(2).unwrap());
    let vars = prefix.vars();
    println!(
        "psi equivalent to not y: {}",
        equivalent(&psi, &Formula::negate(y.clone()), &vars, 16)?
    );

    let report = verify_breaker(&prefix, &gens, &psi, OrbitCaps::default())?;
    println!("{} orbits, uncovered {:?}", report.orbits, report.uncovered);
    println!("P.psi is {}", qbf_truth(&prefix, &psi)?);

    // y & ~z needs y and z to differ on every path, which only one orbit allows
    let z = Formula::var(Var::new(3).unwrap());
    let wrong = verify_breaker(
        &prefix,
        &gens,
        &Formula::and2(y.clone(), Formula::negate(z)),
        OrbitCaps::default(),
    )?;
    println!(
        "psi = y & ~z: passed {}, uncovered {:?}",
        wrong.passed(),
        wrong.uncovered
    );

    let forall = universal_lex_leader_formula(&prefix, &gens, Selection::Generators)?;
    let psi_a = forall.formula();
    println!("universal breaker {psi_a}");
    let report = verify_universal_breaker(&prefix, &gens, &psi_a, OrbitCaps::default())?;
    println!(
        "universal: {} orbits, passed {}; P.psi is {}",
        report.orbits,
        report.passed(),
        qbf_truth(&prefix, &psi_a)?
    );

    let group = lex_leader_formula(&prefix, &gens, Selection::Group { cap: 100 })?;
    println!("one part per non-identity group element: {}", group.parts.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
