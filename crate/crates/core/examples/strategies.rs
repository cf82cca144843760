//! Strategies as labelled trees: counting, enumerating, following paths.

use std::error::Error;

use qsym::formula::{Formula, Var};
use qsym::qdimacs::{Prefix, Quantifier};
use qsym::strategy::{common_path, count_strategies, enumerate_strategies, strategy_value, Role, StrategyTree};

pub fn run() -> Result<(), Box<dyn Error>> {
    let (x1, x2) = (Var::new(1).unwrap(), Var::new(2).unwrap());
    let prefix = Prefix::from_sequence([(Quantifier::Forall, x1), (Quantifier::Exists, x2)])?;
    let phi = Formula::iff(Formula::var(x1), Formula::var(x2));

    for role in [Role::Existential, Role::Universal] {
        println!("{role:?}: {} strategies", count_strategies(&prefix, role));
        for s in enumerate_strategies(&prefix, role, 1 << 10)? {
            println!(
                "  {s}  wins: {}",
                strategy_value(&prefix, &phi, &s)? == (role == Role::Existential)
            );
        }
    }

    // the existential player copies x1
    let copy = StrategyTree::from_fn(&prefix, Role::Existential, |_, h| h.value(x1).unwrap_or(false))?;
    for path in copy.paths() {
        println!("path {path}");
    }

    // bigger prefixes grow doubly exponentially
    let deep = Prefix::from_ids(&[
        (Quantifier::Forall, &[1, 2]),
        (Quantifier::Exists, &[3]),
        (Quantifier::Forall, &[4]),
        (Quantifier::Exists, &[5, 6]),
    ])?;
    println!(
        "{deep}: {} existential strategies",
        count_strategies(&deep, Role::Existential)
    );

    let never = StrategyTree::from_fn(&prefix, Role::Universal, |_, _| true)?;
    println!("common path of {copy} and {never}: {}", common_path(&copy, &never)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
