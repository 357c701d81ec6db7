//! Deterministic text outputs.

use std::fmt::Write as _;

use forman_core::gradient::FormanGradient;
use forman_core::hasse::{Event, RemovalSequence};
use forman_core::{IaStarComplex, MorseComplex, Simplex};

use crate::error::{AppError, AppResult};
use crate::io::join;

/// Header `gradient pairs P critical C`, then one line `k σ -> τ` per pair
/// (`k = dim σ`) and one line `C k σ` per critical simplex, both sorted by
/// dimension and then lexicographically.
pub fn gradient_dump(complex: &IaStarComplex, gradient: &FormanGradient) -> String {
    let pairs = gradient.pairs(complex);
    let mut out = format!(
        "gradient pairs {} critical {}\n",
        pairs.len(),
        gradient.critical().len()
    );
    for (sigma, tau) in &pairs {
        writeln!(
            out,
            "{} {} -> {}",
            sigma.dim(),
            join(sigma.vertices()),
            join(tau.vertices())
        )
        .unwrap();
    }
    for c in gradient.critical() {
        writeln!(out, "C {} {}", c.dim(), join(c.vertices())).unwrap();
    }
    out
}

/// Header `cells N arcs A`, one line `id dim v0 ... vk` per cell, one line
/// `from to multiplicity` per arc.
pub fn morse_file(morse: &MorseComplex) -> String {
    let mut out = format!(
        "cells {} arcs {}\n",
        morse.cells().len(),
        morse.arcs().len()
    );
    for (id, c) in morse.cells().iter().enumerate() {
        writeln!(out, "{id} {} {}", c.dim(), join(c.vertices())).unwrap();
    }
    for ((from, to), m) in morse.arcs() {
        writeln!(out, "{from} {to} {m}").unwrap();
    }
    out
}

/// Graphviz description of the Morse complex, arcs labelled by multiplicity.
pub fn morse_dot(morse: &MorseComplex) -> String {
    let mut out = String::from("digraph morse {\n  rankdir=BT;\n");
    for (id, c) in morse.cells().iter().enumerate() {
        writeln!(out, "  c{id} [label=\"{id}: {c}\", dim={}];", c.dim()).unwrap();
    }
    for ((from, to), m) in morse.arcs() {
        writeln!(out, "  c{from} -> c{to} [label=\"{m}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}

/// One event per line: `CORED|RED|FREE|TOP σ [; τ]`.
pub fn sequence_dump(seq: &RemovalSequence) -> String {
    let mut out = String::new();
    for e in seq.events() {
        writeln!(out, "{e}").unwrap();
    }
    out
}

pub fn sequence_load(text: &str) -> AppResult<RemovalSequence> {
    let mut events = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (tag, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let simplex = |part: &str| -> AppResult<Simplex> {
            let vs = part
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| AppError::parse(line, "expected integer"))
                })
                .collect::<AppResult<Vec<u32>>>()?;
            Simplex::new(vs).map_err(|e| AppError::parse(line, e.to_string()))
        };
        let pair = || -> AppResult<(Simplex, Simplex)> {
            let (a, b) = rest
                .split_once(';')
                .ok_or_else(|| AppError::parse(line, "expected \"σ ; τ\""))?;
            Ok((simplex(a)?, simplex(b)?))
        };
        let event = match tag {
            "CORED" => {
                let (a, b) = pair()?;
                Event::Coreduction(a, b)
            }
            "RED" => {
                let (a, b) = pair()?;
                Event::Reduction(a, b)
            }
            "FREE" => Event::Free(simplex(rest)?),
            "TOP" => Event::Top(simplex(rest)?),
            other => {
                return Err(AppError::parse(
                    line,
                    format!("unknown event tag {other:?}"),
                ))
            }
        };
        events.push(event);
    }
    Ok(RemovalSequence(events))
}

#[cfg(test)]
mod tests {
    use super::*;
    use forman_core::gradient::forman_gradient;
    use forman_core::morse::{morse_complex, MorseOptions};

    fn e2() -> IaStarComplex {
        let tops = [[0, 1], [0, 2], [1, 2]]
            .iter()
            .map(|t| Simplex::new(t.to_vec()).unwrap())
            .collect();
        IaStarComplex::build(3, tops, None).unwrap().0
    }

    #[test]
    fn e2_outputs() {
        let k = e2();
        let (g, _) = forman_gradient(&k).unwrap();
        assert_eq!(
            gradient_dump(&k, &g),
            "gradient pairs 2 critical 2\n0 1 -> 0 1\n0 2 -> 0 2\nC 0 0\nC 1 1 2\n"
        );
        let m = morse_complex(&k, &g, MorseOptions::default()).unwrap();
        assert_eq!(morse_file(&m), "cells 2 arcs 1\n0 0 0\n1 1 1 2\n1 0 2\n");
        assert!(morse_dot(&m).contains("c1 -> c0 [label=\"2\"];"));
    }

    #[test]
    fn sequence_round_trip() {
        let s = |v: &[u32]| Simplex::new(v.to_vec()).unwrap();
        let seq = RemovalSequence(vec![
            Event::Free(s(&[0])),
            Event::Coreduction(s(&[1]), s(&[0, 1])),
            Event::Reduction(s(&[1, 2]), s(&[0, 1, 2])),
            Event::Top(s(&[2])),
        ]);
        let text = sequence_dump(&seq);
        assert_eq!(text, "FREE 0\nCORED 1 ; 0 1\nRED 1 2 ; 0 1 2\nTOP 2\n");
        assert_eq!(sequence_load(&text).unwrap(), seq);
        assert!(sequence_load("CORED 1 0 1\n").is_err());
        assert!(sequence_load("MOVE 1\n").is_err());
    }
}
