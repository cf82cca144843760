//! Brute-force truth of a QBF, recursively and via strategies.

use std::error::Error;

use qsym::qdimacs::parse_qdimacs;
use qsym::strategy::{qbf_truth, qbf_truth_capped, truth_by_strategies};

pub fn run() -> Result<(), Box<dyn Error>> {
    for text in [
        "p cnf 2 2\na 1 0\ne 2 0\n1 -2 0\n-1 2 0\n",
        "p cnf 2 2\ne 2 0\na 1 0\n1 -2 0\n-1 2 0\n",
    ] {
        let i = parse_qdimacs(text)?;
        let recursive = qbf_truth(i.prefix(), i.matrix())?;
        let strategic = truth_by_strategies(i.prefix(), i.matrix(), 1 << 12)?;
        println!("{}: recursive {recursive}, strategies {strategic}", i.prefix());
    }

    let wide = qsym::generate::gen_kbkf(7)?;
    match qbf_truth_capped(wide.prefix(), wide.matrix(), 20) {
        Ok(t) => println!("KBKF 7: {t}"),
        Err(e) => println!("KBKF 7 with a cap of 20 variables: {e}"),
    }
    println!(
        "KBKF 7 uncapped: {}",
        qbf_truth_capped(wide.prefix(), wide.matrix(), 64)?
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
