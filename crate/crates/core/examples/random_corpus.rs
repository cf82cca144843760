//! A small seeded corpus with planted symmetries, run through the whole
//! verification pipeline.

use std::error::Error;

use qsym::detect::{detect_symmetries, DetectOptions};
use qsym::generate::{gen_random_qbf, BlockPattern, RandomQbfParams};
use qsym::qdimacs::Quantifier;
use qsym::verify::{verify_pipeline, Status, VerifyOptions};

pub fn run() -> Result<(), Box<dyn Error>> {
    let mut passed = 0;
    for seed in 0..20 {
        let params = RandomQbfParams {
            blocks: BlockPattern::Alternating {
                first: Quantifier::Exists,
                count: 1 + seed as usize % 3,
            },
            plant_symmetry: true,
            ..RandomQbfParams::new(seed, 6, 10)
        };
        let generated = gen_random_qbf(&params)?;
        let instance = &generated.instance;
        let gens = detect_symmetries(instance, DetectOptions::default()).generators;
        let report = verify_pipeline(instance, &gens, VerifyOptions::default())?;
        let skipped = report
            .checks
            .iter()
            .filter(|c| matches!(c.status, Status::Skipped(_)))
            .count();
        println!(
            "seed {seed:2}: {} clauses, planted {}, {} generators, truth {:?}, {} checks ({skipped} skipped) {}",
            instance.matrix().len(),
            generated.planted.as_ref().map(|g| g.to_string()).unwrap_or_default(),
            gens.len(),
            report.truth,
            report.checks.len(),
            if report.passed() { "ok" } else { "FAILED" }
        );
        if !report.passed() {
            print!("{report}");
        }
        passed += usize::from(report.passed());
    }
    println!("{passed}/20 passed");
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
