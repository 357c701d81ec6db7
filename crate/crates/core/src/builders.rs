//! Flag and Vietoris–Rips complexes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{BuildStats, IaStarComplex};
use crate::error::{Error, Result};
use crate::simplex::{Simplex, Vertex};

/// Default cap on the number of maximal cliques enumerated for one graph.
pub const DEFAULT_CLIQUE_CAP: usize = 1_000_000;

/// Points of uniform coordinate dimension, Euclidean metric.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidPoint {
                    index,
                    reason: format!("expected {dim} coordinates, found {}", p.len()),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidPoint {
                    index,
                    reason: "non-finite coordinate".into(),
                });
            }
            coords.extend_from_slice(p);
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Repeated edges collapse; self-loops and out-of-range endpoints are rejected.
    pub fn new(node_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); node_count];
        for &(a, b) in edges {
            if a == b || a as usize >= node_count || b as usize >= node_count {
                return Err(Error::InvalidEdge(a, b));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for (a, list) in self.adj.iter().enumerate() {
            for &b in list {
                if (a as Vertex) < b {
                    out.push((a as Vertex, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Edge `(i, j)` iff the distance between points `i` and `j` is at most `epsilon`.
pub fn neighborhood_graph(cloud: &PointCloud, epsilon: f64) -> Result<Graph> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::NonPositiveEpsilon(epsilon));
    }
    let n = cloud.len();
    let eps2 = epsilon * epsilon;
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if cloud.squared_distance(i, j) <= eps2 {
                adj[i].push(j as Vertex);
                adj[j].push(i as Vertex);
            }
        }
    }
    Ok(Graph { adj })
}

/// All maximal cliques, each sorted, listed in lexicographic order.
///
/// Bron–Kerbosch with pivoting, run per vertex along a degeneracy order.
/// Fails once more than `cap` cliques have been found.
pub fn maximal_cliques(graph: &Graph, cap: usize) -> Result<Vec<Vec<Vertex>>> {
    let n = graph.node_count();
    let order = degeneracy_order(graph);
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v as usize] = i;
    }

    let mut out = Vec::new();
    let mut clique = Vec::new();
    for &v in &order {
        let (later, earlier): (Vec<Vertex>, Vec<Vertex>) = graph
            .neighbors(v)
            .iter()
            .partition(|&&u| position[u as usize] > position[v as usize]);
        clique.push(v);
        expand(graph, &mut clique, later, earlier, &mut out, cap)?;
        clique.pop();
    }
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort_unstable();
    Ok(out)
}

fn expand(
    graph: &Graph,
    clique: &mut Vec<Vertex>,
    mut candidates: Vec<Vertex>,
    mut excluded: Vec<Vertex>,
    out: &mut Vec<Vec<Vertex>>,
    cap: usize,
) -> Result<()> {
    if candidates.is_empty() {
        if excluded.is_empty() {
            if out.len() == cap {
                return Err(Error::CliqueCapExceeded { cap });
            }
            out.push(clique.clone());
        }
        return Ok(());
    }
    // pivot maximizing |N(u) ∩ candidates|
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .copied()
        .max_by_key(|&u| {
            (
                intersection_len(graph.neighbors(u), &candidates),
                core::cmp::Reverse(u),
            )
        })
        .expect("non-empty");
    let branch: Vec<Vertex> = candidates
        .iter()
        .copied()
        .filter(|&u| !graph.has_edge(pivot, u))
        .collect();
    for u in branch {
        let nu = graph.neighbors(u);
        let next_c = intersect(&candidates, nu);
        let next_x = intersect(&excluded, nu);
        clique.push(u);
        expand(graph, clique, next_c, next_x, out, cap)?;
        clique.pop();
        let at = candidates.binary_search(&u).expect("u is a candidate");
        candidates.remove(at);
        let at = excluded.binary_search(&u).unwrap_err();
        excluded.insert(at, u);
    }
    Ok(())
}

fn intersect(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn intersection_len(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Repeatedly removes a minimum-degree vertex (smallest index on ties).
fn degeneracy_order(graph: &Graph) -> Vec<Vertex> {
    let n = graph.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.neighbors(v as Vertex).len()).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<alloc::collections::BTreeSet<Vertex>> =
        vec![alloc::collections::BTreeSet::new(); max_deg + 1];
    for v in 0..n {
        buckets[degree[v]].insert(v as Vertex);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut lowest = 0;
    for _ in 0..n {
        lowest = lowest.min(max_deg);
        while buckets[lowest].is_empty() {
            lowest += 1;
        }
        let v = buckets[lowest].pop_first().expect("bucket non-empty");
        removed[v as usize] = true;
        order.push(v);
        for &u in graph.neighbors(v) {
            let u = u as usize;
            if !removed[u] {
                buckets[degree[u]].remove(&(u as Vertex));
                degree[u] -= 1;
                buckets[degree[u]].insert(u as Vertex);
                lowest = lowest.min(degree[u]);
            }
        }
    }
    order
}

/// Flag complex: top simplices are the maximal cliques.
pub fn flag_complex(graph: &Graph) -> Result<(IaStarComplex, BuildStats)> {
    flag_complex_with_cap(graph, DEFAULT_CLIQUE_CAP)
}

pub fn flag_complex_with_cap(graph: &Graph, cap: usize) -> Result<(IaStarComplex, BuildStats)> {
    let tops = maximal_cliques(graph, cap)?
        .into_iter()
        .map(Simplex::from_sorted)
        .collect();
    IaStarComplex::build(graph.node_count(), tops, None)
}

/// Vietoris–Rips complex at scale `epsilon` (inclusive threshold).
pub fn vietoris_rips(cloud: &PointCloud, epsilon: f64) -> Result<(IaStarComplex, BuildStats)> {
    flag_complex(&neighborhood_graph(cloud, epsilon)?)
}

pub fn vietoris_rips_with_cap(
    cloud: &PointCloud,
    epsilon: f64,
    cap: usize,
) -> Result<(IaStarComplex, BuildStats)> {
    flag_complex_with_cap(&neighborhood_graph(cloud, epsilon)?, cap)
}
