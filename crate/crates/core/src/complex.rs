//! The IA* representation: vertices, top simplices, same-dimension adjacency
//! across shared facets, and one star-component representative per vertex.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::simplex::{Simplex, Vertex};

/// Index of a top simplex inside an [`IaStarComplex`].
pub type TopId = u32;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Candidates that were faces of other candidates.
    pub dropped_non_maximal: usize,
    /// Exact repeats among the candidates.
    pub dropped_duplicates: usize,
    /// Vertices not covered by any candidate, added as top vertices.
    pub isolated_vertices: usize,
}

#[derive(Debug, Clone)]
pub struct IaStarComplex {
    vertex_count: usize,
    f0: Vec<f64>,
    tops: Vec<Simplex>,
    /// `adjacency[t][i]`: other tops sharing the facet of `t` opposite its `i`-th vertex.
    adjacency: Vec<Vec<Vec<TopId>>>,
    vertex_coboundary: Vec<Vec<TopId>>,
    dim: usize,
}

impl IaStarComplex {
    /// Builds the complex from candidate simplices. Non-maximal candidates
    /// and duplicates are dropped and counted; vertices of `0..vertex_count`
    /// that no candidate covers become isolated top vertices. `f0` defaults
    /// to the vertex index.
    pub fn build(
        vertex_count: usize,
        candidates: Vec<Simplex>,
        f0: Option<Vec<f64>>,
    ) -> Result<(Self, BuildStats)> {
        let f0 = match f0 {
            Some(f) => {
                if f.len() != vertex_count {
                    return Err(Error::F0LengthMismatch {
                        expected: vertex_count,
                        found: f.len(),
                    });
                }
                if let Some(i) = f.iter().position(|x| !x.is_finite()) {
                    return Err(Error::NonFiniteF0 {
                        vertex: i as Vertex,
                    });
                }
                f
            }
            None => (0..vertex_count).map(|v| v as f64).collect(),
        };
        for s in &candidates {
            if let Some(&v) = s.vertices().iter().find(|&&v| v as usize >= vertex_count) {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    vertex_count,
                });
            }
        }

        let mut stats = BuildStats::default();
        let mut candidates = candidates;
        let before = candidates.len();
        candidates.sort_unstable();
        candidates.dedup();
        stats.dropped_duplicates = before - candidates.len();

        // largest first, so a candidate is only ever compared with kept simplices
        candidates.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
        let mut kept: Vec<Simplex> = Vec::with_capacity(candidates.len());
        let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for c in candidates {
            let covered = by_vertex[c.first() as usize]
                .iter()
                .any(|&k| c.is_face_of(&kept[k]));
            if covered {
                stats.dropped_non_maximal += 1;
                continue;
            }
            for &v in c.vertices() {
                by_vertex[v as usize].push(kept.len());
            }
            kept.push(c);
        }
        for (v, list) in by_vertex.iter().enumerate() {
            if list.is_empty() {
                kept.push(Simplex::vertex(v as Vertex));
                stats.isolated_vertices += 1;
            }
        }
        kept.sort_unstable();

        Ok((Self::from_maximal(vertex_count, f0, kept), stats))
    }

    fn from_maximal(vertex_count: usize, f0: Vec<f64>, tops: Vec<Simplex>) -> Self {
        let dim = tops.iter().map(Simplex::dim).max().unwrap_or(0);

        let mut by_facet: BTreeMap<Simplex, Vec<TopId>> = BTreeMap::new();
        for (t, top) in tops.iter().enumerate() {
            if top.dim() == 0 {
                continue;
            }
            for i in 0..top.vertices().len() {
                by_facet
                    .entry(top.without_position(i))
                    .or_default()
                    .push(t as TopId);
            }
        }
        let adjacency: Vec<Vec<Vec<TopId>>> = tops
            .iter()
            .enumerate()
            .map(|(t, top)| {
                if top.dim() == 0 {
                    return Vec::new();
                }
                (0..top.vertices().len())
                    .map(|i| {
                        by_facet[&top.without_position(i)]
                            .iter()
                            .copied()
                            .filter(|&o| o != t as TopId)
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let mut incident: Vec<Vec<TopId>> = vec![Vec::new(); vertex_count];
        for (t, top) in tops.iter().enumerate() {
            for &v in top.vertices() {
                incident[v as usize].push(t as TopId);
            }
        }

        let mut complex = IaStarComplex {
            vertex_count,
            f0,
            tops,
            adjacency,
            vertex_coboundary: Vec::new(),
            dim,
        };
        complex.vertex_coboundary = incident
            .iter()
            .enumerate()
            .map(|(v, star)| complex.component_representatives(v as Vertex, star))
            .collect();
        complex
    }

    /// Smallest top id of each adjacency component of `star`, ascending.
    fn component_representatives(&self, v: Vertex, star: &[TopId]) -> Vec<TopId> {
        let mut seen = BTreeSet::new();
        let mut reps = Vec::new();
        for &start in star {
            if !seen.insert(start) {
                continue;
            }
            reps.push(start);
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                for &n in self.adjacency[t as usize].iter().flatten() {
                    if self.tops[n as usize].contains_vertex(v) && seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
        }
        reps
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f0(&self) -> &[f64] {
        &self.f0
    }

    pub fn tops(&self) -> &[Simplex] {
        &self.tops
    }

    pub fn top(&self, t: TopId) -> &Simplex {
        &self.tops[t as usize]
    }

    /// Tops sharing the facet of `t` opposite its `i`-th vertex.
    pub fn adjacent(&self, t: TopId, i: usize) -> &[TopId] {
        &self.adjacency[t as usize][i]
    }

    pub fn adjacency(&self, t: TopId) -> &[Vec<TopId>] {
        &self.adjacency[t as usize]
    }

    pub fn vertex_coboundary(&self, v: Vertex) -> &[TopId] {
        &self.vertex_coboundary[v as usize]
    }

    /// Total order on vertices: by F0, ties broken by vertex index.
    pub fn vertex_cmp(&self, a: Vertex, b: Vertex) -> Ordering {
        self.f0[a as usize]
            .total_cmp(&self.f0[b as usize])
            .then(a.cmp(&b))
    }

    /// The vertex of `s` that is largest under [`Self::vertex_cmp`].
    pub fn max_vertex(&self, s: &Simplex) -> Vertex {
        let vs = s.vertices();
        let mut best = vs[0];
        for &v in &vs[1..] {
            if self.vertex_cmp(v, best) == Ordering::Greater {
                best = v;
            }
        }
        best
    }

    /// Vertices sorted ascending under [`Self::vertex_cmp`].
    pub fn vertices_ascending(&self) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = (0..self.vertex_count as Vertex).collect();
        vs.sort_by(|&a, &b| self.vertex_cmp(a, b));
        vs
    }

    /// Top simplices containing `v`, ascending. Found by walking adjacency
    /// arcs from each coboundary representative of `v`.
    pub fn vertex_star(&self, v: Vertex) -> Vec<TopId> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        for &r in &self.vertex_coboundary[v as usize] {
            if seen.insert(r) {
                queue.push_back(r);
            }
        }
        while let Some(t) = queue.pop_front() {
            for &n in self.adjacency[t as usize].iter().flatten() {
                if !seen.contains(&n) && self.tops[n as usize].contains_vertex(v) {
                    seen.insert(n);
                    queue.push_back(n);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Stars of every vertex, indexed by vertex.
    pub fn all_stars(&self) -> Vec<Vec<TopId>> {
        (0..self.vertex_count as Vertex)
            .map(|v| self.vertex_star(v))
            .collect()
    }

    /// Tops of `star` that have `s` as a face.
    pub fn tops_containing<'a>(
        &'a self,
        star: &'a [TopId],
        s: &'a Simplex,
    ) -> impl Iterator<Item = TopId> + 'a {
        star.iter()
            .copied()
            .filter(move |&t| s.is_face_of(&self.tops[t as usize]))
    }

    /// True when `s` is a face of some top simplex.
    pub fn contains(&self, s: &Simplex) -> bool {
        if s.vertices()
            .iter()
            .any(|&v| v as usize >= self.vertex_count)
        {
            return false;
        }
        let star = self.vertex_star(s.first());
        let found = self.tops_containing(&star, s).next().is_some();
        found
    }

    /// Immediate cofaces of `s`, in canonical order.
    pub fn immediate_coboundary(&self, s: &Simplex) -> Result<Vec<Simplex>> {
        if s.vertices()
            .iter()
            .any(|&v| v as usize >= self.vertex_count)
        {
            return Err(Error::UnknownSimplex(s.clone()));
        }
        let star = self.vertex_star(s.first());
        let mut found = false;
        let mut out = BTreeSet::new();
        for t in self.tops_containing(&star, s) {
            found = true;
            for &w in self.tops[t as usize].vertices() {
                if let Some(c) = s.with_vertex(w) {
                    out.insert(c);
                }
            }
        }
        if !found {
            return Err(Error::UnknownSimplex(s.clone()));
        }
        Ok(out.into_iter().collect())
    }

    /// Number of adjacency arcs, each unordered pair counted once.
    pub fn adjacency_arc_count(&self) -> usize {
        self.adjacency.iter().flatten().map(Vec::len).sum::<usize>() / 2
    }

    /// Top counts indexed by dimension.
    pub fn tops_per_dim(&self) -> Vec<usize> {
        let mut out = vec![0; self.dim + 1];
        for t in &self.tops {
            out[t.dim()] += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[Vertex]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    // a=0 b=1 c=2 d=3 e=4
    fn wedge() -> IaStarComplex {
        IaStarComplex::build(5, vec![s(&[0, 1, 2]), s(&[1, 2, 3]), s(&[3, 4])], None)
            .unwrap()
            .0
    }

    #[test]
    fn wedge_structure() {
        let k = wedge();
        assert_eq!(k.tops(), &[s(&[0, 1, 2]), s(&[1, 2, 3]), s(&[3, 4])]);
        assert_eq!(k.adjacency_arc_count(), 1);
        // (0,1,2) shares the facet opposite vertex 0, i.e. (1,2), with (1,2,3)
        assert_eq!(k.adjacent(0, 0), &[1]);
        assert_eq!(k.adjacent(1, 2), &[0]);
        assert_eq!(k.vertex_coboundary(3), &[1, 2]);
        assert_eq!(k.vertex_coboundary(1), &[0]);
        assert_eq!(k.vertex_star(3), vec![1, 2]);
        assert_eq!(k.vertex_star(4), vec![2]);
        assert_eq!(k.vertex_star(1), vec![0, 1]);
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn non_maximal_and_duplicates_dropped() {
        let (k, stats) =
            IaStarComplex::build(3, vec![s(&[0, 1, 2]), s(&[0, 1]), s(&[0, 1, 2])], None).unwrap();
        assert_eq!(k.tops(), &[s(&[0, 1, 2])]);
        assert_eq!(stats.dropped_non_maximal, 1);
        assert_eq!(stats.dropped_duplicates, 1);
    }

    #[test]
    fn single_vertex() {
        let (k, stats) = IaStarComplex::build(1, vec![s(&[0])], None).unwrap();
        assert_eq!(k.tops(), &[s(&[0])]);
        assert_eq!(k.adjacency_arc_count(), 0);
        assert_eq!(k.vertex_star(0), vec![0]);
        assert_eq!(stats, BuildStats::default());
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn uncovered_vertices_become_tops() {
        let (k, stats) = IaStarComplex::build(3, vec![s(&[0, 2])], None).unwrap();
        assert_eq!(k.tops(), &[s(&[0, 2]), s(&[1])]);
        assert_eq!(stats.isolated_vertices, 1);
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            IaStarComplex::build(2, vec![s(&[0, 2])], None).unwrap_err(),
            Error::VertexOutOfRange {
                vertex: 2,
                vertex_count: 2
            }
        );
        assert_eq!(
            IaStarComplex::build(2, vec![s(&[0, 1])], Some(vec![0.0])).unwrap_err(),
            Error::F0LengthMismatch {
                expected: 2,
                found: 1
            }
        );
        assert!(matches!(
            IaStarComplex::build(2, vec![s(&[0, 1])], Some(vec![0.0, f64::NAN])),
            Err(Error::NonFiniteF0 { vertex: 1 })
        ));
    }

    #[test]
    fn coboundary_queries() {
        let k = IaStarComplex::build(3, vec![s(&[0, 1, 2])], None)
            .unwrap()
            .0;
        assert_eq!(
            k.immediate_coboundary(&s(&[2])).unwrap(),
            vec![s(&[0, 2]), s(&[1, 2])]
        );
        assert!(k.immediate_coboundary(&s(&[0, 1, 2])).unwrap().is_empty());
        assert_eq!(
            k.immediate_coboundary(&s(&[0, 1])).unwrap(),
            vec![s(&[0, 1, 2])]
        );
        let w = wedge();
        assert_eq!(
            w.immediate_coboundary(&s(&[0, 3])),
            Err(Error::UnknownSimplex(s(&[0, 3])))
        );
    }

    #[test]
    fn non_manifold_facet_lists_all_neighbours() {
        // three triangles on the edge (0,1)
        let k = IaStarComplex::build(5, vec![s(&[0, 1, 2]), s(&[0, 1, 3]), s(&[0, 1, 4])], None)
            .unwrap()
            .0;
        assert_eq!(k.adjacent(0, 2), &[1, 2]);
        assert_eq!(k.adjacency_arc_count(), 3);
        assert_eq!(k.vertex_coboundary(0), &[0]);
    }

    #[test]
    fn vertex_order_breaks_ties_by_index() {
        let k = IaStarComplex::build(3, vec![s(&[0, 1, 2])], Some(vec![1.0, 1.0, 0.0]))
            .unwrap()
            .0;
        assert_eq!(k.vertices_ascending(), vec![2, 0, 1]);
        assert_eq!(k.max_vertex(&s(&[0, 1, 2])), 1);
    }
}
