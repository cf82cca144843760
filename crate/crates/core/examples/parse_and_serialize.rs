//! Parse a QDIMACS instance, look at its prefix, write it back out.

use std::error::Error;

use qsym::qdimacs::{parse_qdimacs, serialize_qdimacs};

const INPUT: &str = "c forall x exists y z. (y <-> z)
p cnf 3 2
a 1 0
e 2 3 0
-2 3 0
2 -3 0
";

pub fn run() -> Result<(), Box<dyn Error>> {
    let instance = parse_qdimacs(INPUT)?;
    println!("{} variables, {} clauses", instance.num_vars(), instance.matrix().len());
    for block in instance.prefix().blocks() {
        let vars: Vec<String> = block.vars.iter().map(|v| v.to_string()).collect();
        println!("  {:?} {}", block.quantifier, vars.join(" "));
    }

    let text = serialize_qdimacs(&instance);
    print!("{text}");
    let again = parse_qdimacs(&text)?;
    assert_eq!(again.prefix(), instance.prefix());
    assert_eq!(again.matrix(), instance.matrix());

    // recoverable oddities become warnings
    let odd = parse_qdimacs("p cnf 2 1\ne 1 0\n1 3 0\n")?;
    for w in &odd.meta.warnings {
        println!("warning: {w}");
    }
    // malformed input is an error, not a panic
    let bad = parse_qdimacs("p cnf 2 1\ne 1 0\n1 x 0\n");
    println!("bad input: {}", bad.unwrap_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run()
}
