use alloc::vec::Vec;
use core::fmt;

use crate::combinatorics::for_each_combination;
use crate::error::{Error, Result};

/// Vertex identifier. Vertices of a complex are dense in `0..vertex_count`.
pub type Vertex = u32;

/// A simplex as its strictly increasing vertex list.
///
/// `Ord` is lexicographic on the vertex list, so `(0) < (0,1) < (0,1,2) < (0,2) < (1)`.
/// Every set of simplices in this crate is iterated in this order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Sorts `raw` and rejects empty or repeated vertex lists.
    pub fn new(mut raw: Vec<Vertex>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySimplex);
        }
        raw.sort_unstable();
        if raw.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateSimplex);
        }
        Ok(Simplex(raw))
    }

    /// Wraps an already strictly increasing, non-empty vertex list.
    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(alloc::vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn first(&self) -> Vertex {
        self.0[0]
    }

    pub fn last(&self) -> Vertex {
        self.0[self.0.len() - 1]
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True when every vertex of `self` is a vertex of `other` (non-strict).
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    /// Positions of `self`'s vertices inside `other`, if `self` is a face of it.
    pub fn local_positions_in(&self, other: &Simplex) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &v in &self.0 {
            while j < other.0.len() && other.0[j] < v {
                j += 1;
            }
            if j == other.0.len() || other.0[j] != v {
                return None;
            }
            out.push(j);
            j += 1;
        }
        Some(out)
    }

    /// The face obtained by dropping the vertex at `pos`.
    pub fn without_position(&self, pos: usize) -> Simplex {
        let mut vs = self.0.clone();
        vs.remove(pos);
        Simplex(vs)
    }

    /// The coface obtained by adding `v`, or `None` if `v` is already present.
    pub fn with_vertex(&self, v: Vertex) -> Option<Simplex> {
        match self.0.binary_search(&v) {
            Ok(_) => None,
            Err(pos) => {
                let mut vs = Vec::with_capacity(self.0.len() + 1);
                vs.extend_from_slice(&self.0[..pos]);
                vs.push(v);
                vs.extend_from_slice(&self.0[pos..]);
                Some(Simplex(vs))
            }
        }
    }

    /// Immediate boundary in canonical order. Empty for a vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        // dropping later vertices yields lexicographically smaller faces
        (0..self.0.len())
            .rev()
            .map(|p| self.without_position(p))
            .collect()
    }

    /// All `k`-faces in canonical order, `0 <= k < dim`.
    pub fn boundary(&self, k: usize) -> Result<Vec<Simplex>> {
        let dim = self.dim();
        if k >= dim {
            return Err(Error::FaceDimensionOutOfRange { k, dim });
        }
        let mut out = Vec::new();
        for_each_combination(self.0.len(), k + 1, |c| {
            out.push(Simplex(c.iter().map(|&i| self.0[i]).collect()));
        });
        Ok(out)
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Canonical simplex from an arbitrary vertex list.
pub fn canonical_simplex(raw: &[Vertex]) -> Result<Simplex> {
    Simplex::new(raw.to_vec())
}

/// Order by dimension first, then lexicographically. Used for output listings.
pub fn dim_lex_cmp(a: &Simplex, b: &Simplex) -> core::cmp::Ordering {
    a.dim().cmp(&b.dim()).then_with(|| a.cmp(b))
}

pub(crate) fn is_sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &v in small {
        while j < big.len() && big[j] < v {
            j += 1;
        }
        if j == big.len() || big[j] != v {
            return false;
        }
        j += 1;
    }
    true
}
