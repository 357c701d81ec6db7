use std::collections::BTreeSet;

use forman_core::builders::{
    maximal_cliques, vietoris_rips, Graph, PointCloud, DEFAULT_CLIQUE_CAP,
};
use forman_core::gradient::{
    count_simplices, forman_gradient, forman_gradient_by_scanning, validate_gradient,
};
use forman_core::hasse::{
    brute_betti_z2, coreduction_algorithm, interleaved_algorithm, interleaved_sort,
    lower_star_coreduction, reduction_algorithm, reverse_transform, validate_sequence,
    vpath_counts, HasseComplex, Policy, DEFAULT_ORACLE_GUARD,
};
use forman_core::layout::{bitvector_length, decode_bit, local_bit_index};
use forman_core::morse::{alternating_sum, betti_z2, morse_complex, MorseOptions};
use forman_core::{IaStarComplex, Simplex, Vertex};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Input {
    vertex_count: usize,
    tops: Vec<Vec<Vertex>>,
    f0: Option<Vec<f64>>,
}

impl Input {
    fn build(&self) -> IaStarComplex {
        let tops = self
            .tops
            .iter()
            .map(|t| Simplex::new(t.clone()).unwrap())
            .collect();
        IaStarComplex::build(self.vertex_count, tops, self.f0.clone())
            .unwrap()
            .0
    }
}

fn input() -> impl Strategy<Value = Input> {
    (1usize..=8).prop_flat_map(|n| {
        let top = prop::collection::btree_set(0..n as Vertex, 1..=4.min(n))
            .prop_map(|s| s.into_iter().collect::<Vec<_>>());
        let f0 = prop::option::of(prop::collection::vec((0u8..4).prop_map(f64::from), n));
        (prop::collection::vec(top, 1..=6), f0).prop_map(move |(tops, f0)| Input {
            vertex_count: n,
            tops,
            f0,
        })
    })
}

fn hasse(k: &IaStarComplex) -> HasseComplex {
    HasseComplex::from_complex(k, DEFAULT_ORACLE_GUARD).unwrap()
}

fn brute_maximal_cliques(g: &Graph) -> Vec<Vec<Vertex>> {
    let n = g.node_count();
    let is_clique = |mask: u32| {
        (0..n).all(|a| {
            (a + 1..n).all(|b| {
                mask & (1 << a) == 0 || mask & (1 << b) == 0 || g.has_edge(a as Vertex, b as Vertex)
            })
        })
    };
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if is_clique(mask) && (0..n).all(|v| mask & (1 << v) != 0 || !is_clique(mask | (1 << v))) {
            out.push((0..n as Vertex).filter(|&v| mask & (1 << v) != 0).collect());
        }
    }
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stars_match_brute_force(inp in input()) {
        let k = inp.build();
        for v in 0..k.vertex_count() as Vertex {
            let brute: Vec<u32> = (0..k.tops().len() as u32)
                .filter(|&t| k.top(t).contains_vertex(v))
                .collect();
            prop_assert_eq!(k.vertex_star(v), brute);
        }
    }

    #[test]
    fn rebuild_is_identity(inp in input()) {
        let k = inp.build();
        let (again, stats) = IaStarComplex::build(k.vertex_count(), k.tops().to_vec(), None).unwrap();
        prop_assert_eq!(again.tops(), k.tops());
        prop_assert_eq!(stats.dropped_non_maximal + stats.dropped_duplicates, 0);
        prop_assert_eq!(stats.isolated_vertices, 0);
    }

    #[test]
    fn tops_are_maximal_and_cover_candidates(inp in input()) {
        let k = inp.build();
        for (i, a) in k.tops().iter().enumerate() {
            for (j, b) in k.tops().iter().enumerate() {
                prop_assert!(i == j || !a.is_face_of(b));
            }
        }
        for t in &inp.tops {
            prop_assert!(k.contains(&Simplex::new(t.clone()).unwrap()));
        }
    }

    #[test]
    fn cliques_match_brute_force(n in 1usize..=10, edges in prop::collection::vec((0u32..10, 0u32..10), 0..30)) {
        let edges: Vec<(u32, u32)> = edges
            .into_iter()
            .filter(|&(a, b)| a != b && (a as usize) < n && (b as usize) < n)
            .collect();
        let g = Graph::new(n, &edges).unwrap();
        prop_assert_eq!(maximal_cliques(&g, DEFAULT_CLIQUE_CAP).unwrap(), brute_maximal_cliques(&g));
    }

    #[test]
    fn rips_grows_with_epsilon(points in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 1..12), e1 in 0.05f64..1.0, extra in 0.0f64..1.0) {
        let cloud = PointCloud::new(&points).unwrap();
        let (small, _) = vietoris_rips(&cloud, e1).unwrap();
        let (large, _) = vietoris_rips(&cloud, e1 + extra).unwrap();
        for t in small.tops() {
            prop_assert!(large.contains(t));
        }
    }

    #[test]
    fn gradient_is_valid_and_partitions(inp in input()) {
        let k = inp.build();
        let (g, stats) = forman_gradient(&k).unwrap();
        let report = validate_gradient(&k, &g);
        prop_assert!(report.passed(), "{:?}", report);
        let counts = count_simplices(&k);
        prop_assert_eq!(&stats.simplices_per_dim, &counts);
        let pairs = g.pairs(&k);
        prop_assert_eq!(2 * pairs.len() as u64 + g.critical().len() as u64, counts.iter().sum::<u64>());
        prop_assert_eq!(alternating_sum(&g.critical_per_dim(k.dim())), alternating_sum(&counts));
    }

    #[test]
    fn fast_and_scanning_gradients_agree(inp in input()) {
        let k = inp.build();
        let (fast, _) = forman_gradient(&k).unwrap();
        let slow = forman_gradient_by_scanning(&k).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn gradient_matches_hasse_lower_star_replay(inp in input()) {
        let k = inp.build();
        let h = hasse(&k);
        let (g, _) = forman_gradient(&k).unwrap();
        let seq = lower_star_coreduction(&h, k.f0());
        prop_assert!(validate_sequence(&seq, &h).is_ok());
        let pairs: BTreeSet<(Simplex, Simplex)> = g.pairs(&k).into_iter().collect();
        prop_assert_eq!(pairs, seq.pairing());
        let critical: BTreeSet<Simplex> = g.critical().iter().cloned().collect();
        prop_assert_eq!(critical, seq.critical());
    }

    #[test]
    fn morse_homology_matches_simplicial(inp in input()) {
        let k = inp.build();
        let (g, _) = forman_gradient(&k).unwrap();
        let m = morse_complex(&k, &g, MorseOptions::default()).unwrap();
        m.check_boundary_composition().unwrap();
        let h = hasse(&k);
        prop_assert_eq!(betti_z2(&m).unwrap().trimmed(), brute_betti_z2(&h).trimmed());
    }

    #[test]
    fn morse_arcs_match_path_enumeration(inp in input()) {
        let k = inp.build();
        let (g, _) = forman_gradient(&k).unwrap();
        let m = morse_complex(&k, &g, MorseOptions::default()).unwrap();
        let h = hasse(&k);
        let pairing: BTreeSet<(Simplex, Simplex)> = g.pairs(&k).into_iter().collect();
        let critical: BTreeSet<Simplex> = g.critical().iter().cloned().collect();
        for (id, c) in m.cells().iter().enumerate() {
            let from_arcs: std::collections::BTreeMap<Simplex, u64> = m
                .arcs()
                .iter()
                .filter(|((from, _), _)| *from == id)
                .map(|((_, to), &mult)| (m.cells()[*to].clone(), mult))
                .collect();
            prop_assert_eq!(from_arcs, vpath_counts(&h, &pairing, &critical, c));
        }
    }

    #[test]
    fn removal_sequences_replay(inp in input(), seed in any::<u64>()) {
        let k = inp.build();
        let h = hasse(&k);
        let betti = brute_betti_z2(&h);
        let chi = alternating_sum(&h.counts_per_dim());
        for seq in [
            coreduction_algorithm(&h, Policy::Canonical),
            coreduction_algorithm(&h, Policy::Seeded(seed)),
            reduction_algorithm(&h, Policy::Canonical),
            reduction_algorithm(&h, Policy::Seeded(seed)),
            interleaved_algorithm(&h, seed),
        ] {
            prop_assert!(validate_sequence(&seq, &h).is_ok());
            let mut crit = vec![0u64; h.dim() + 1];
            for c in seq.critical() {
                crit[c.dim()] += 1;
            }
            prop_assert_eq!(alternating_sum(&crit), chi);
            for (c, b) in crit.iter().zip(&betti.0) {
                prop_assert!(c >= b);
            }
        }
    }

    #[test]
    fn reversed_reductions_are_coreductions(inp in input(), seed in any::<u64>()) {
        let h = hasse(&inp.build());
        let red = reduction_algorithm(&h, Policy::Seeded(seed));
        let cored = reverse_transform(&red).unwrap();
        prop_assert!(cored.is_coreduction_based());
        prop_assert!(validate_sequence(&cored, &h).is_ok());
        prop_assert_eq!(cored.pairing(), red.pairing());
        prop_assert_eq!(reverse_transform(&cored).unwrap(), red);
    }

    #[test]
    fn interleaved_runs_sort_into_coreductions(inp in input(), seed in any::<u64>()) {
        let h = hasse(&inp.build());
        let mixed = interleaved_algorithm(&h, seed);
        let sorted = interleaved_sort(&mixed);
        prop_assert!(sorted.is_coreduction_based());
        prop_assert!(validate_sequence(&sorted, &h).is_ok(), "{:?}", validate_sequence(&sorted, &h));
        prop_assert_eq!(sorted.pairing(), mixed.pairing());
        prop_assert_eq!(sorted.critical(), mixed.critical());
    }
}

#[test]
fn bit_layout_is_a_bijection() {
    for k in 1..=8 {
        let len = bitvector_length(k);
        let mut seen = vec![false; len];
        for idx in 0..len {
            let (sigma, missing) = decode_bit(k, idx);
            assert!(sigma.windows(2).all(|w| w[0] < w[1]) && *sigma.last().unwrap() <= k);
            assert!(missing < sigma.len());
            let back = local_bit_index(k, &sigma, missing);
            assert!(!seen[back]);
            seen[back] = true;
        }
        assert!(seen.into_iter().all(|b| b));
        assert_eq!(len, (k + 1) * ((1 << k) - 1));
    }
}
