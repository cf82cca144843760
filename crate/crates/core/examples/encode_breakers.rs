//! Clause and cube encodings of the breakers and what they do to an
//! instance.

use std::error::Error;

use qsym::breaker::{augment_instance, encode_existential_cnf, encode_universal_dnf, Augmentation, EncodeOptions};
use qsym::detect::{detect_symmetries, DetectOptions};
use qsym::qdimacs::{parse_dnf, parse_qdimacs, serialize_qdimacs};
use qsym::strategy::qbf_truth;

pub fn run() -> Result<(), Box<dyn Error>> {
    let instance = parse_qdimacs("p cnf 3 2\na 1 0\ne 2 3 0\n-2 3 0\n2 -3 0\n")?;
    let gens = detect_symmetries(&instance, DetectOptions::default()).generators;
    let prefix = instance.prefix();

    let cnf = encode_existential_cnf(prefix, &gens, EncodeOptions::default())?;
    println!("{} clauses over {} auxiliaries", cnf.clauses.len(), cnf.aux.len());
    let loose = encode_existential_cnf(
        prefix,
        &gens,
        EncodeOptions {
            compress_identity: false,
            ..Default::default()
        },
    )?;
    println!("without skipping fixed positions: {} clauses", loose.clauses.len());

    let augmented = augment_instance(&instance, Augmentation::ConjoinCnf(&cnf))?;
    print!("{}", serialize_qdimacs(&augmented.instance));
    println!(
        "truth before {}, after {}",
        qbf_truth(prefix, instance.matrix())?,
        augmented.truth(64)?
    );

    let dnf = encode_universal_dnf(
        prefix,
        &gens,
        EncodeOptions {
            first_aux: Some(cnf.next_free_var()),
            ..Default::default()
        },
    )?;
    let both = augment_instance(
        &instance,
        Augmentation::Combined {
            exists: &cnf,
            forall: &dnf,
        },
    )?;
    let sidecar = both.dnf.as_ref().expect("combined output has cubes").to_text()?;
    print!("{sidecar}");
    assert_eq!(parse_dnf(&sidecar)?.cubes, dnf.cubes);
    println!("truth with clauses and cubes: {}", both.truth(64)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
