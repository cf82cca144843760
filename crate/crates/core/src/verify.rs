//! End-to-end oracle checks for one instance and a set of generators.

use serde::Serialize;

use crate::breaker::{
    augment_instance, encode_existential_cnf, encode_universal_dnf, lex_leader_formula, universal_lex_leader_formula,
    verify_breaker, verify_universal_breaker, Augmentation, Conjunction, Disjunction, EncodeOptions,
};
use crate::error::Result;
use crate::group::{is_syntactic_symmetry, SignedPermutation, SymmetryCheck};
use crate::qdimacs::QbfInstance;
use crate::strategy::{qbf_truth_capped, OrbitCaps};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Variable cap for the truth oracle on the original instance.
    pub truth_cap: usize,
    /// Variable cap for instances extended with auxiliary variables.
    pub extended_truth_cap: usize,
    pub orbit_caps: OrbitCaps,
    pub encode: EncodeOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            truth_cap: crate::strategy::DEFAULT_TRUTH_CAP,
            extended_truth_cap: 64,
            orbit_caps: OrbitCaps {
                strategies: 1 << 16,
                group: crate::group::DEFAULT_GROUP_CAP,
            },
            encode: EncodeOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "detail")]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub status: Status,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub truth: Option<bool>,
    pub generators: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !matches!(c.status, Status::Fail(_)))
    }

    fn record(&mut self, name: impl Into<String>, outcome: Result<Status>) -> Result<()> {
        let status = match outcome {
            Ok(s) => s,
            Err(e) if e.is_cap_exceeded() => Status::Skipped(e.to_string()),
            Err(e) => return Err(e),
        };
        self.checks.push(Check {
            name: name.into(),
            status,
        });
        Ok(())
    }
}

fn expect(actual: bool, wanted: bool, what: &str) -> Status {
    if actual == wanted {
        Status::Pass
    } else {
        Status::Fail(format!("{what}: expected {wanted}, got {actual}"))
    }
}

/// Runs every oracle check that fits the caps. Checks that hit a cap are
/// reported as skipped; other errors abort.
pub fn verify_pipeline(
    instance: &QbfInstance,
    generators: &[SignedPermutation],
    options: VerifyOptions,
) -> Result<Report> {
    let prefix = instance.prefix();
    let matrix = instance.matrix();
    let mut report = Report {
        generators: generators.iter().map(|g| g.to_cycle_notation()).collect(),
        ..Report::default()
    };

    for g in generators {
        let ok = is_syntactic_symmetry(g, instance, SymmetryCheck::Exhaustive { cap: 16 });
        report.record(
            format!("symmetry {g}"),
            ok.map(|b| expect(b, true, "syntactic symmetry")),
        )?;
    }

    let exists = lex_leader_formula(prefix, generators, options.encode.selection)?;
    let forall = universal_lex_leader_formula(prefix, generators, options.encode.selection)?;
    let psi_e = exists.formula();
    let psi_a = forall.formula();

    let truth = match qbf_truth_capped(prefix, matrix, options.truth_cap) {
        Ok(t) => Some(t),
        Err(e) if e.is_cap_exceeded() => {
            report.record("truth", Err(e))?;
            None
        }
        Err(e) => return Err(e),
    };
    report.truth = truth;

    let cap = options.truth_cap;
    report.record(
        "existential breaker is true",
        qbf_truth_capped(prefix, &psi_e, cap).map(|b| expect(b, true, "P.psi")),
    )?;
    report.record(
        "universal breaker is false",
        qbf_truth_capped(prefix, &psi_a, cap).map(|b| expect(b, false, "P.psi")),
    )?;

    if let Some(t) = truth {
        report.record(
            "truth with existential breaker",
            qbf_truth_capped(prefix, &Conjunction(matrix, &psi_e), cap).map(|b| expect(b, t, "truth")),
        )?;
        report.record(
            "truth with universal breaker",
            qbf_truth_capped(prefix, &Disjunction(matrix, &psi_a), cap).map(|b| expect(b, t, "truth")),
        )?;
        report.record(
            "truth with both breakers",
            qbf_truth_capped(prefix, &Conjunction(Disjunction(matrix, &psi_a), &psi_e), cap)
                .map(|b| expect(b, t, "truth")),
        )?;

        let cnf = encode_existential_cnf(prefix, generators, options.encode)?;
        let dnf_options = EncodeOptions {
            first_aux: Some(cnf.next_free_var()),
            ..options.encode
        };
        let dnf = encode_universal_dnf(prefix, generators, dnf_options)?;
        let ext = options.extended_truth_cap;
        for (name, mode) in [
            ("truth with encoded clauses", Augmentation::ConjoinCnf(&cnf)),
            ("truth with encoded cubes", Augmentation::AttachDnf(&dnf)),
            (
                "truth with clauses and cubes",
                Augmentation::Combined {
                    exists: &cnf,
                    forall: &dnf,
                },
            ),
        ] {
            let augmented = augment_instance(instance, mode)?;
            report.record(name, augmented.truth(ext).map(|b| expect(b, t, "truth")))?;
        }
    }

    let caps = options.orbit_caps;
    report.record(
        "existential orbit coverage",
        verify_breaker(prefix, generators, &psi_e, caps).map(|r| {
            expect(
                r.passed(),
                true,
                &format!("{} of {} orbits covered", r.orbits - r.uncovered.len(), r.orbits),
            )
        }),
    )?;
    report.record(
        "universal orbit coverage",
        verify_universal_breaker(prefix, generators, &psi_a, caps).map(|r| {
            expect(
                r.passed(),
                true,
                &format!("{} of {} orbits covered", r.orbits - r.uncovered.len(), r.orbits),
            )
        }),
    )?;
    Ok(report)
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.truth {
            Some(t) => writeln!(f, "truth: {}", if t { "TRUE" } else { "FALSE" })?,
            None => writeln!(f, "truth: unknown")?,
        }
        writeln!(f, "generators: {}", self.generators.len())?;
        for c in &self.checks {
            match &c.status {
                Status::Pass => writeln!(f, "PASS {}", c.name)?,
                Status::Fail(why) => writeln!(f, "FAIL {}: {why}", c.name)?,
                Status::Skipped(why) => writeln!(f, "SKIP {}: {why}", c.name)?,
            }
        }
        Ok(())
    }
}
