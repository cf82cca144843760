//! Signed permutations: cycle notation, composition, closure and the
//! action on assignments and strategies.

use std::error::Error;

use qsym::formula::{Assignment, Var};
use qsym::group::{group_closure, orbit_of_assignment, parse_generators, SignedPermutation};
use qsym::qdimacs::{Prefix, Quantifier};
use qsym::strategy::{semantic_orbits, OrbitCaps, Role};

pub fn run() -> Result<(), Box<dyn Error>> {
    let gens = parse_generators("# swap y and z, negate both\n(2 3)\n(-2)(-3)\n")?;
    let (swap, neg) = (&gens[0], &gens[1]);
    println!("swap = {swap}, neg = {neg}");
    println!("swap . neg = {}", swap.compose(neg));
    println!(
        "inverse of (1 -2 3) = {}",
        SignedPermutation::parse_cycle_notation("(1 -2 3)")?.inverse()
    );

    let group = group_closure(&gens, 100)?;
    let elements: Vec<String> = group.iter().map(|g| g.to_string()).collect();
    println!("group of order {}: {}", group.len(), elements.join(" "));

    let v = |i| Var::new(i).unwrap();
    let sigma = Assignment::from_pairs([(v(1), false), (v(2), true), (v(3), false)]);
    for tau in orbit_of_assignment(&gens, &sigma, 100)? {
        println!("  orbit member {tau}");
    }

    let prefix = Prefix::from_ids(&[(Quantifier::Forall, &[1]), (Quantifier::Exists, &[2, 3])])?;
    let orbits = semantic_orbits(&prefix, Role::Existential, &gens, OrbitCaps::default())?;
    println!(
        "{} existential strategies in {} orbits",
        orbits.strategies.len(),
        orbits.len()
    );
    for k in 0..orbits.len() {
        let members: Vec<String> = orbits.members(k).map(|s| format!("[{s}]")).collect();
        println!("  {}", members.join(" "));
    }

    // block-respecting maps only
    let bad = SignedPermutation::parse_cycle_notation("(1 2)")?;
    println!("(1 2) on {prefix}: {}", bad.check_blocks(&prefix).unwrap_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
