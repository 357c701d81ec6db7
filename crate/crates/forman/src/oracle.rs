//! Equivalence checks between removal strategies on the explicit Hasse
//! diagram, plus agreement of the oracle with the gradient engine.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use forman_core::gradient::{forman_gradient, validate_gradient, FormanGradient};
use forman_core::hasse::{
    brute_betti_z2, coreduction_algorithm, interleaved_algorithm, interleaved_sort,
    lower_star_coreduction, reduction_algorithm, reverse_transform, validate_sequence,
    HasseComplex, Policy, RemovalSequence,
};
use forman_core::morse::{betti_z2, morse_complex, MorseOptions};
use forman_core::{IaStarComplex, Simplex};

use crate::error::AppResult;
use crate::formats::sequence_dump;

#[derive(Debug, Clone)]
pub struct Failure {
    pub message: String,
    pub sequence: Option<RemovalSequence>,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub runs: usize,
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub simplices: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }

    pub fn render(&self) -> String {
        let mut out = format!("oracle: {} simplices, seed {}\n", self.simplices, self.seed);
        for c in &self.checks {
            match &c.failure {
                None => writeln!(out, "{}: PASS ({} runs)", c.name, c.runs).unwrap(),
                Some(f) => writeln!(out, "{}: FAIL ({})", c.name, f.message).unwrap(),
            }
        }
        out
    }

    /// Sequence dumps of the counterexamples, if any.
    pub fn counterexamples(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if let Some(Failure {
                sequence: Some(seq),
                ..
            }) = &c.failure
            {
                writeln!(out, "# {}", c.name).unwrap();
                out.push_str(&sequence_dump(seq));
            }
        }
        out
    }
}

fn check(
    name: &'static str,
    runs: usize,
    mut one: impl FnMut(usize) -> Result<(), Failure>,
) -> CheckResult {
    let failure = (0..runs).find_map(|r| one(r).err());
    CheckResult {
        name,
        runs,
        failure,
    }
}

fn fail(message: String, seq: &RemovalSequence) -> Failure {
    Failure {
        message,
        sequence: Some(seq.clone()),
    }
}

/// Runs every check with seeds `seed, seed + 1, ..., seed + runs - 1`.
pub fn run_oracle(
    complex: &IaStarComplex,
    seed: u64,
    runs: usize,
    guard: usize,
) -> AppResult<OracleReport> {
    let h = HasseComplex::from_complex(complex, guard)?;
    let seed_of = |r: usize| seed.wrapping_add(r as u64);
    let policy = |r: usize| {
        if r == 0 {
            Policy::Canonical
        } else {
            Policy::Seeded(seed_of(r))
        }
    };
    let mut checks = Vec::new();

    checks.push(check(
        "reduction runs reversed into coreduction runs",
        runs,
        |r| {
            let red = reduction_algorithm(&h, policy(r));
            let cored = reverse_transform(&red).map_err(|e| fail(e.to_string(), &red))?;
            validate_sequence(&cored, &h).map_err(|v| fail(v.to_string(), &cored))?;
            if cored.pairing() != red.pairing() {
                return Err(fail("pairing changed".into(), &cored));
            }
            Ok(())
        },
    ));

    checks.push(check(
        "coreduction runs reversed into reduction runs",
        runs,
        |r| {
            let cored = coreduction_algorithm(&h, policy(r));
            let red = reverse_transform(&cored).map_err(|e| fail(e.to_string(), &cored))?;
            validate_sequence(&red, &h).map_err(|v| fail(v.to_string(), &red))?;
            if cored.pairing() != red.pairing() {
                return Err(fail("pairing changed".into(), &red));
            }
            Ok(())
        },
    ));

    checks.push(check("interleaved runs are acyclic", runs, |r| {
        let seq = interleaved_algorithm(&h, seed_of(r));
        validate_sequence(&seq, &h).map_err(|v| fail(v.to_string(), &seq))?;
        let g = FormanGradient::from_pairing(complex, &seq.pairing(), &seq.critical())
            .map_err(|e| fail(e.to_string(), &seq))?;
        let report = validate_gradient(complex, &g);
        if !(report.matching.passed() && report.acyclic.passed()) {
            return Err(fail(format!("{report:?}"), &seq));
        }
        Ok(())
    }));

    checks.push(check(
        "interleaved runs sort into coreduction runs",
        runs,
        |r| {
            let seq = interleaved_algorithm(&h, seed_of(r));
            let sorted = interleaved_sort(&seq);
            if !sorted.is_coreduction_based() {
                return Err(fail(
                    "sorted sequence is not coreduction-based".into(),
                    &sorted,
                ));
            }
            validate_sequence(&sorted, &h).map_err(|v| fail(v.to_string(), &sorted))?;
            if sorted.pairing() != seq.pairing() {
                return Err(fail("pairing changed".into(), &sorted));
            }
            Ok(())
        },
    ));

    let (g, _) = forman_gradient(complex)?;
    checks.push(check(
        "lower-star replay matches the gradient engine",
        1,
        |_| {
            let seq = lower_star_coreduction(&h, complex.f0());
            validate_sequence(&seq, &h).map_err(|v| fail(v.to_string(), &seq))?;
            let pairs: BTreeSet<(Simplex, Simplex)> = g.pairs(complex).into_iter().collect();
            let critical: BTreeSet<Simplex> = g.critical().iter().cloned().collect();
            if pairs != seq.pairing() || critical != seq.critical() {
                return Err(fail("pairings differ".into(), &seq));
            }
            Ok(())
        },
    ));

    checks.push(check(
        "morse homology matches brute-force homology",
        1,
        |_| {
            let betti = morse_complex(complex, &g, MorseOptions::default())
                .and_then(|m| betti_z2(&m))
                .map_err(|e| Failure {
                    message: e.to_string(),
                    sequence: None,
                })?;
            let brute = brute_betti_z2(&h);
            if betti.trimmed() != brute.trimmed() {
                return Err(Failure {
                    message: format!("morse {:?} vs brute force {:?}", betti.0, brute.0),
                    sequence: None,
                });
            }
            Ok(())
        },
    ));

    Ok(OracleReport {
        simplices: h.len(),
        seed,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_passes() {
        let (k, _) =
            IaStarComplex::build(3, vec![Simplex::new(vec![0, 1, 2]).unwrap()], None).unwrap();
        let report = run_oracle(&k, 42, 20, 1000).unwrap();
        assert!(report.passed(), "{}", report.render());
        assert_eq!(report.simplices, 7);
        assert!(report.counterexamples().is_empty());
    }

    #[test]
    fn guard() {
        let (k, _) =
            IaStarComplex::build(3, vec![Simplex::new(vec![0, 1, 2]).unwrap()], None).unwrap();
        let err = run_oracle(&k, 0, 1, 5).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
