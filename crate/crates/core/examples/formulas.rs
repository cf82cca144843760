//! Formula trees, substitution and the xor map that is a symmetry of
//! (x <-> a) & (y <-> b).

use std::error::Error;

use qsym::formula::{equivalent, Assignment, Formula, Var};
use qsym::group::AdmissibleMap;
use qsym::qdimacs::{Prefix, Quantifier};

pub fn run() -> Result<(), Box<dyn Error>> {
    let [x, y, a, b] = [1, 2, 3, 4].map(|i| Var::new(i).unwrap());
    let phi = Formula::and2(
        Formula::iff(Formula::var(x), Formula::var(a)),
        Formula::iff(Formula::var(y), Formula::var(b)),
    );
    println!("phi = {phi}");

    let sigma = Assignment::from_pairs([(x, true), (y, false), (a, true), (b, false)]);
    println!("phi under {sigma}: {}", phi.evaluate(&sigma)?);
    let partial = Assignment::from_pairs([(x, true), (a, false)]);
    println!("partial value under {partial}: {:?}", phi.partial_evaluate(&partial));

    // y -> x xor y and b -> a xor b; x and a stay put
    let g = AdmissibleMap::new([
        (y, Formula::xor(Formula::var(x), Formula::var(y))),
        (b, Formula::xor(Formula::var(a), Formula::var(b))),
    ]);
    let image = g.apply_to_formula(&phi);
    println!("g(phi) = {image}");
    let vars = [x, y, a, b];
    println!("g(phi) equivalent to phi: {}", equivalent(&image, &phi, &vars, 16)?);

    let prefix = Prefix::from_ids(&[(Quantifier::Forall, &[1, 2]), (Quantifier::Exists, &[3, 4])])?;
    let violations = g.check_admissible(&prefix, 16)?;
    println!("admissible for {prefix}: {}", violations.is_empty());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
