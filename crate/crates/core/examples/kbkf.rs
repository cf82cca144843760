//! The KBKF family: false, symmetric, and still false once broken.

use std::error::Error;

use qsym::breaker::{augment_instance, encode_existential_cnf, Augmentation, EncodeOptions};
use qsym::detect::{detect_symmetries, DetectOptions};
use qsym::generate::{gen_kbkf, kbkf_symmetry};
use qsym::group::{is_syntactic_symmetry, SymmetryCheck};
use qsym::strategy::qbf_truth;

pub fn run() -> Result<(), Box<dyn Error>> {
    for t in 1..=4 {
        let instance = gen_kbkf(t)?;
        let truth = qbf_truth(instance.prefix(), instance.matrix())?;
        let detection = detect_symmetries(&instance, DetectOptions::default());
        let gens: Vec<String> = detection.generators.iter().map(|g| g.to_string()).collect();
        let cnf = encode_existential_cnf(instance.prefix(), &detection.generators, EncodeOptions::default())?;
        let broken = augment_instance(&instance, Augmentation::ConjoinCnf(&cnf))?;
        println!(
            "t={t}: {} vars, {} clauses, truth {truth}, generators {}, with breaker {}",
            instance.num_vars(),
            instance.matrix().len(),
            gens.join(" "),
            broken.truth(64)?
        );
        for j in 1..=t {
            assert!(is_syntactic_symmetry(
                &kbkf_symmetry(j),
                &instance,
                SymmetryCheck::ClauseMultiset
            )?);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
