use std::collections::{BTreeMap, BTreeSet};

use forman_core::gradient::{forman_gradient, validate_gradient, FormanGradient};
use forman_core::hasse::{
    brute_betti_z2, coreduction_algorithm, interleaved_algorithm, reduction_algorithm,
    reverse_transform, validate_sequence, vpath_counts, Event, HasseComplex, Policy,
    DEFAULT_ORACLE_GUARD,
};
use forman_core::morse::{betti_z2, morse_complex, MorseOptions};
use forman_core::simplex::canonical_simplex;
use forman_core::{IaStarComplex, Simplex, Vertex};

fn s(v: &[Vertex]) -> Simplex {
    canonical_simplex(v).unwrap()
}

fn complex(n: usize, tops: &[&[Vertex]], f0: Option<Vec<f64>>) -> IaStarComplex {
    IaStarComplex::build(n, tops.iter().map(|t| s(t)).collect(), f0)
        .unwrap()
        .0
}

fn hasse(k: &IaStarComplex) -> HasseComplex {
    HasseComplex::from_complex(k, DEFAULT_ORACLE_GUARD).unwrap()
}

fn morse_betti(k: &IaStarComplex) -> Vec<u64> {
    let (g, _) = forman_gradient(k).unwrap();
    let m = morse_complex(k, &g, MorseOptions::default()).unwrap();
    betti_z2(&m).unwrap().trimmed().0
}

#[test]
fn known_homology() {
    let circle = complex(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]], None);
    assert_eq!(morse_betti(&circle), vec![1, 1]);
    assert_eq!(brute_betti_z2(&hasse(&circle)).0, vec![1, 1]);

    let sphere = complex(4, &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]], None);
    assert_eq!(morse_betti(&sphere), vec![1, 0, 1]);
    assert_eq!(brute_betti_z2(&hasse(&sphere)).0, vec![1, 0, 1]);

    let two = complex(6, &[&[0, 1, 2], &[3, 4], &[4, 5], &[3, 5]], None);
    assert_eq!(morse_betti(&two), vec![2, 1]);
    assert_eq!(brute_betti_z2(&hasse(&two)).0, vec![2, 1, 0]);

    let tri: Vec<Vec<Vertex>> = (0..7)
        .flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]])
        .map(|t| t.to_vec())
        .collect();
    let tri: Vec<&[Vertex]> = tri.iter().map(Vec::as_slice).collect();
    let torus_like = complex(7, &tri, None);
    assert_eq!(brute_betti_z2(&hasse(&torus_like)).0, vec![1, 2, 1]);
    assert_eq!(morse_betti(&torus_like), vec![1, 2, 1]);
}

#[test]
fn four_paths_to_one_triangle() {
    let tops: [&[Vertex]; 9] = [
        &[2, 3, 4, 5],
        &[1, 2, 3, 4],
        &[1, 2, 4, 5],
        &[0, 1, 4, 5],
        &[0, 2, 3, 4],
        &[1, 2, 3, 5],
        &[0, 1, 2, 5],
        &[1, 3, 4, 5],
        &[0, 3, 4, 5],
    ];
    let k = complex(6, &tops, Some(vec![3.0, 4.0, 1.0, 5.0, 0.0, 2.0]));
    let (g, _) = forman_gradient(&k).unwrap();
    assert!(validate_gradient(&k, &g).passed());
    assert_eq!(g.critical(), &[s(&[4]), s(&[0, 4, 5]), s(&[2, 3, 4, 5])]);

    let m = morse_complex(&k, &g, MorseOptions::default()).unwrap();
    let tet = m.cell_id(&s(&[2, 3, 4, 5])).unwrap();
    let tri = m.cell_id(&s(&[0, 4, 5])).unwrap();
    assert_eq!(
        m.arcs()
            .iter()
            .filter(|((from, _), _)| *from == tet)
            .count(),
        1
    );
    assert_eq!(m.arcs()[&(tet, tri)], 4);

    let h = hasse(&k);
    let pairing: BTreeSet<(Simplex, Simplex)> = g.pairs(&k).into_iter().collect();
    let critical: BTreeSet<Simplex> = g.critical().iter().cloned().collect();
    assert_eq!(
        vpath_counts(&h, &pairing, &critical, &s(&[2, 3, 4, 5])),
        BTreeMap::from([(s(&[0, 4, 5]), 4)])
    );
    m.check_boundary_composition().unwrap();
    assert_eq!(betti_z2(&m).unwrap().0, vec![1, 0, 1, 1]);
}

#[test]
fn reduction_and_coreduction_both_feasible() {
    let k = complex(3, &[&[0, 1, 2]], None);
    let h = hasse(&k);
    // after removing (0), (0,1,2) has (1,2) as unique live facet and (1,2) has
    // (0,1,2) as unique coface: both kinds of pair are feasible
    let coreduce = vec![
        Event::Free(s(&[0])),
        Event::Coreduction(s(&[1]), s(&[0, 1])),
        Event::Coreduction(s(&[2]), s(&[0, 2])),
        Event::Coreduction(s(&[1, 2]), s(&[0, 1, 2])),
    ];
    let reduce = vec![
        Event::Free(s(&[0])),
        Event::Reduction(s(&[1, 2]), s(&[0, 1, 2])),
        Event::Coreduction(s(&[1]), s(&[0, 1])),
        Event::Coreduction(s(&[2]), s(&[0, 2])),
    ];
    for events in [coreduce, reduce] {
        let seq = forman_core::hasse::RemovalSequence(events);
        assert_eq!(validate_sequence(&seq, &h), Ok(()));
        let g = FormanGradient::from_pairing(&k, &seq.pairing(), &seq.critical()).unwrap();
        let report = validate_gradient(&k, &g);
        assert!(report.matching.passed() && report.acyclic.passed());
    }
}

#[test]
fn interleaved_runs_on_triangle_are_acyclic() {
    let k = complex(3, &[&[0, 1, 2]], None);
    let h = hasse(&k);
    for seed in 0..100 {
        let seq = interleaved_algorithm(&h, seed);
        assert!(validate_sequence(&seq, &h).is_ok());
        let g = FormanGradient::from_pairing(&k, &seq.pairing(), &seq.critical()).unwrap();
        assert!(validate_gradient(&k, &g).acyclic.passed(), "seed {seed}");
    }
}

#[test]
fn reduction_run_reverses_into_coreduction_run() {
    // two triangles on a shared edge with a pendant edge
    let k = complex(5, &[&[0, 1, 2], &[1, 2, 3], &[3, 4]], None);
    let h = hasse(&k);
    let red = reduction_algorithm(&h, Policy::Canonical);
    assert!(red.is_reduction_based());
    assert_eq!(red.events()[0], Event::Reduction(s(&[0, 1]), s(&[0, 1, 2])));

    let cored = reverse_transform(&red).unwrap();
    assert_eq!(validate_sequence(&cored, &h), Ok(()));
    assert_eq!(cored.pairing(), red.pairing());
    assert_eq!(cored.critical(), red.critical());
    assert!(matches!(cored.events()[0], Event::Free(ref v) if v.dim() == 0));
    assert_eq!(
        cored.events().last(),
        Some(&Event::Coreduction(s(&[0, 1]), s(&[0, 1, 2])))
    );
    assert_eq!(reverse_transform(&cored).unwrap(), red);

    // coreduction runs reverse into reduction runs as well
    let forward = coreduction_algorithm(&h, Policy::Seeded(7));
    let back = reverse_transform(&forward).unwrap();
    assert_eq!(validate_sequence(&back, &h), Ok(()));
    assert_eq!(back.pairing(), forward.pairing());
}

#[test]
fn unknown_and_foreign_events_are_rejected() {
    let k = complex(3, &[&[0, 1, 2]], None);
    let h = hasse(&k);
    let seq = forman_core::hasse::RemovalSequence(vec![Event::Free(s(&[7]))]);
    assert!(validate_sequence(&seq, &h)
        .unwrap_err()
        .reason
        .contains("unknown"));
    let seq = forman_core::hasse::RemovalSequence(vec![Event::Free(s(&[0, 1]))]);
    assert!(validate_sequence(&seq, &h).is_err());
    let seq = forman_core::hasse::RemovalSequence(vec![Event::Free(s(&[0]))]);
    assert!(validate_sequence(&seq, &h)
        .unwrap_err()
        .reason
        .contains("never removed"));
}
