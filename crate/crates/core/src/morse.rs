//! Discrete Morse complex: critical cells and the V-path counts between
//! critical cells of consecutive dimension, plus its Z/2 homology.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{IaStarComplex, TopId};
use crate::error::{Error, Result};
use crate::gradient::{count_simplices, validate_gradient, FormanGradient, Partner, Verdict};
use crate::simplex::{dim_lex_cmp, Simplex};
use crate::z2;

/// Default cap on queue pushes made while tracing paths from one critical cell.
pub const DEFAULT_QUEUE_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MorseOptions {
    /// Run [`validate_gradient`] first and refuse invalid gradients.
    pub validate: bool,
    pub queue_cap: u64,
}

impl Default for MorseOptions {
    fn default() -> Self {
        MorseOptions {
            validate: true,
            queue_cap: DEFAULT_QUEUE_CAP,
        }
    }
}

/// Boundary multiplicities of one critical cell, keyed by critical facet-dimension cell.
pub type BoundaryMap = BTreeMap<Simplex, u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseComplex {
    /// Critical cells sorted by dimension, then lexicographically. A cell's id is its index.
    cells: Vec<Simplex>,
    /// `(from, to) -> multiplicity`, with `dim(from) = dim(to) + 1`.
    arcs: BTreeMap<(usize, usize), u64>,
}

impl MorseComplex {
    /// Assembles a complex from critical cells and their boundary maps.
    pub fn from_boundaries(
        mut cells: Vec<Simplex>,
        boundaries: impl IntoIterator<Item = (Simplex, BoundaryMap)>,
    ) -> Result<Self> {
        cells.sort_by(dim_lex_cmp);
        let id = |s: &Simplex| {
            cells
                .binary_search_by(|c| dim_lex_cmp(c, s))
                .map_err(|_| Error::NotCritical(s.clone()))
        };
        let mut arcs = BTreeMap::new();
        for (from, map) in boundaries {
            let f = id(&from)?;
            for (to, m) in map {
                if m > 0 {
                    arcs.insert((f, id(&to)?), m);
                }
            }
        }
        Ok(MorseComplex { cells, arcs })
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn arcs(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.arcs
    }

    pub fn cell_id(&self, s: &Simplex) -> Option<usize> {
        self.cells.binary_search_by(|c| dim_lex_cmp(c, s)).ok()
    }

    pub fn dim(&self) -> usize {
        self.cells.last().map_or(0, Simplex::dim)
    }

    pub fn cells_per_dim(&self) -> Vec<u64> {
        let mut out = vec![0; self.dim() + 1];
        for c in &self.cells {
            out[c.dim()] += 1;
        }
        out
    }

    /// First id of each dimension block, plus a final sentinel.
    fn dim_starts(&self) -> Vec<usize> {
        let mut starts = vec![0; self.dim() + 2];
        for c in &self.cells {
            starts[c.dim() + 1] += 1;
        }
        for k in 1..starts.len() {
            starts[k] += starts[k - 1];
        }
        starts
    }

    /// Boundary matrix `k -> k-1` reduced mod 2. Columns are the `k`-cells in
    /// id order; rows are offsets into the `(k-1)`-cell block.
    pub fn boundary_matrix_z2(&self, k: usize) -> Vec<z2::Column> {
        let starts = self.dim_starts();
        if k == 0 || k >= starts.len() - 1 {
            let n = if k < starts.len() - 1 {
                starts[k + 1] - starts[k]
            } else {
                0
            };
            return vec![Vec::new(); n];
        }
        let (lo, hi) = (starts[k], starts[k + 1]);
        let mut cols = vec![Vec::new(); hi - lo];
        for (&(from, to), &m) in self.arcs.range((lo, 0)..(hi, 0)) {
            if m % 2 == 1 {
                cols[from - lo].push((to - starts[k - 1]) as u32);
            }
        }
        cols
    }

    /// Checks that consecutive mod-2 boundary matrices compose to zero.
    pub fn check_boundary_composition(&self) -> Result<()> {
        for k in 2..=self.dim() {
            let product =
                z2::multiply(&self.boundary_matrix_z2(k - 1), &self.boundary_matrix_z2(k));
            if product.iter().any(|c| !c.is_empty()) {
                return Err(Error::BoundaryComposition(k));
            }
        }
        Ok(())
    }
}

/// Betti numbers indexed by dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiVector(pub Vec<u64>);

impl BettiVector {
    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.0)
    }

    /// Drops trailing zeros.
    pub fn trimmed(&self) -> BettiVector {
        let mut v = self.0.clone();
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
        BettiVector(v)
    }
}

/// `sum (-1)^k counts[k]`.
pub fn alternating_sum(counts: &[u64]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// Partner lookups for one traversal, backed by precomputed vertex stars.
struct PartnerCache<'a> {
    complex: &'a IaStarComplex,
    gradient: &'a FormanGradient,
    stars: &'a [Vec<TopId>],
    seen: BTreeMap<Simplex, Option<Partner>>,
}

impl PartnerCache<'_> {
    fn partner(&mut self, s: &Simplex) -> Result<Option<Partner>> {
        if let Some(p) = self.seen.get(s) {
            return Ok(p.clone());
        }
        let p = self
            .gradient
            .is_paired_in(self.complex, &self.stars[s.first() as usize], s)?;
        self.seen.insert(s.clone(), p.clone());
        Ok(p)
    }
}

/// Counts the V-paths from critical `tau` to each critical facet-dimension cell.
pub fn boundary_map_from_critical(
    complex: &IaStarComplex,
    gradient: &FormanGradient,
    tau: &Simplex,
) -> Result<BoundaryMap> {
    let stars = complex.all_stars();
    trace_boundary(complex, gradient, &stars, tau, DEFAULT_QUEUE_CAP)
}

/// Breadth-first expansion of the V-paths leaving `tau`. Each dequeued
/// simplex inspects its facets: a critical facet gains one arrival, a facet
/// paired upward with another simplex sends that simplex to the queue, and
/// a facet paired downward (or with the dequeued simplex itself) ends the
/// path. No deduplication: a simplex reached along several paths is queued
/// once per path, so the counts are exact path multiplicities.
pub fn trace_boundary(
    complex: &IaStarComplex,
    gradient: &FormanGradient,
    stars: &[Vec<TopId>],
    tau: &Simplex,
    queue_cap: u64,
) -> Result<BoundaryMap> {
    if !gradient.is_critical(tau) {
        return Err(Error::NotCritical(tau.clone()));
    }
    let mut out = BoundaryMap::new();
    if tau.dim() == 0 {
        return Ok(out);
    }
    let mut cache = PartnerCache {
        complex,
        gradient,
        stars,
        seen: BTreeMap::new(),
    };
    let mut queue = VecDeque::from([tau.clone()]);
    let mut pushes = 1u64;
    while let Some(current) = queue.pop_front() {
        for facet in current.facets() {
            if gradient.is_critical(&facet) {
                *out.entry(facet).or_insert(0) += 1;
                continue;
            }
            match cache.partner(&facet)? {
                Some(Partner::Up(next)) if next != current => {
                    pushes += 1;
                    if pushes > queue_cap {
                        return Err(Error::QueueCapExceeded(tau.clone()));
                    }
                    queue.push_back(next);
                }
                Some(_) => {}
                None => {
                    return Err(Error::InvalidGradient(alloc::format!(
                        "{facet} is neither paired nor critical"
                    )))
                }
            }
        }
    }
    Ok(out)
}

/// Builds the Morse complex of `gradient`.
pub fn morse_complex(
    complex: &IaStarComplex,
    gradient: &FormanGradient,
    options: MorseOptions,
) -> Result<MorseComplex> {
    if options.validate {
        ensure_valid(complex, gradient)?;
    }
    let stars = complex.all_stars();
    let mut boundaries = Vec::new();
    for c in gradient.critical().iter().filter(|c| c.dim() >= 1) {
        boundaries.push((
            c.clone(),
            trace_boundary(complex, gradient, &stars, c, options.queue_cap)?,
        ));
    }
    MorseComplex::from_boundaries(gradient.critical().to_vec(), boundaries)
}

/// Errors unless the gradient is a matching without closed V-paths.
pub fn ensure_valid(complex: &IaStarComplex, gradient: &FormanGradient) -> Result<()> {
    let report = validate_gradient(complex, gradient);
    for v in [report.matching, report.acyclic] {
        if let Verdict::Fail(msg) = v {
            return Err(Error::InvalidGradient(msg));
        }
    }
    Ok(())
}

/// Z/2 Betti numbers of the Morse complex.
pub fn betti_z2(morse: &MorseComplex) -> Result<BettiVector> {
    morse.check_boundary_composition()?;
    let counts = morse.cells_per_dim();
    let ranks: Vec<usize> = (0..=counts.len())
        .map(|k| {
            if k == 0 || k >= counts.len() {
                0
            } else {
                z2::rank(&morse.boundary_matrix_z2(k), counts[k - 1] as usize)
            }
        })
        .collect();
    Ok(BettiVector(
        (0..counts.len())
            .map(|k| counts[k] - ranks[k] as u64 - ranks[k + 1] as u64)
            .collect(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionStats {
    pub simplices: u64,
    pub critical: u64,
    /// `simplices / critical`.
    pub ratio: f64,
}

impl CompressionStats {
    pub fn new(simplices: u64, critical: u64) -> Self {
        let ratio = if critical == 0 {
            0.0
        } else {
            simplices as f64 / critical as f64
        };
        CompressionStats {
            simplices,
            critical,
            ratio,
        }
    }
}

/// Size of the complex against the number of Morse cells.
pub fn compression_stats(complex: &IaStarComplex, morse: &MorseComplex) -> CompressionStats {
    CompressionStats::new(
        count_simplices(complex).iter().sum(),
        morse.cells().len() as u64,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradient::forman_gradient;
    use crate::simplex::Vertex;

    fn s(v: &[Vertex]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn complex(n: usize, tops: &[&[Vertex]]) -> IaStarComplex {
        IaStarComplex::build(n, tops.iter().map(|t| s(t)).collect(), None)
            .unwrap()
            .0
    }

    fn pipeline(k: &IaStarComplex) -> (FormanGradient, MorseComplex) {
        let (g, _) = forman_gradient(k).unwrap();
        let m = morse_complex(k, &g, MorseOptions::default()).unwrap();
        (g, m)
    }

    #[test]
    fn hollow_triangle() {
        let k = complex(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let (g, m) = pipeline(&k);
        let map = boundary_map_from_critical(&k, &g, &s(&[1, 2])).unwrap();
        assert_eq!(map, BoundaryMap::from([(s(&[0]), 2)]));
        assert_eq!(m.cells(), &[s(&[0]), s(&[1, 2])]);
        assert_eq!(m.arcs(), &BTreeMap::from([((1, 0), 2)]));
        assert_eq!(betti_z2(&m).unwrap(), BettiVector(vec![1, 1]));
        let c = compression_stats(&k, &m);
        assert_eq!((c.simplices, c.critical), (6, 2));
        assert_eq!(c.ratio, 3.0);
    }

    #[test]
    fn filled_triangle() {
        let k = complex(3, &[&[0, 1, 2]]);
        let (g, m) = pipeline(&k);
        assert!(boundary_map_from_critical(&k, &g, &s(&[0]))
            .unwrap()
            .is_empty());
        assert_eq!(m.cells(), &[s(&[0])]);
        assert!(m.arcs().is_empty());
        assert_eq!(betti_z2(&m).unwrap().0, vec![1]);
        let c = compression_stats(&k, &m);
        assert_eq!((c.simplices, c.critical, c.ratio), (7, 1, 7.0));
        assert_eq!(
            boundary_map_from_critical(&k, &g, &s(&[1])),
            Err(Error::NotCritical(s(&[1])))
        );
    }

    #[test]
    fn tetrahedron_boundary() {
        let k = complex(4, &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        let (_, m) = pipeline(&k);
        assert_eq!(m.cells_per_dim(), vec![1, 0, 1]);
        assert!(m.arcs().is_empty());
        assert_eq!(betti_z2(&m).unwrap(), BettiVector(vec![1, 0, 1]));
    }

    #[test]
    fn invalid_gradient_refused() {
        let k = complex(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let mut g = FormanGradient::new(&k).unwrap();
        g.set_pair(&k, &s(&[0]), &s(&[0, 1])).unwrap();
        g.set_pair(&k, &s(&[1]), &s(&[1, 2])).unwrap();
        g.set_pair(&k, &s(&[2]), &s(&[0, 2])).unwrap();
        assert!(matches!(
            morse_complex(&k, &g, MorseOptions::default()),
            Err(Error::InvalidGradient(_))
        ));
    }

    #[test]
    fn queue_cap_enforced() {
        let k = complex(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let (g, _) = forman_gradient(&k).unwrap();
        let stars = k.all_stars();
        assert_eq!(
            trace_boundary(&k, &g, &stars, &s(&[1, 2]), 2),
            Err(Error::QueueCapExceeded(s(&[1, 2])))
        );
    }

    #[test]
    fn composition_failure_detected() {
        // a 2-cell whose boundary is a single 1-cell that hits one vertex once
        let cells = vec![s(&[0]), s(&[0, 1]), s(&[0, 1, 2])];
        let m = MorseComplex::from_boundaries(
            cells,
            [
                (s(&[0, 1]), BoundaryMap::from([(s(&[0]), 1)])),
                (s(&[0, 1, 2]), BoundaryMap::from([(s(&[0, 1]), 1)])),
            ],
        )
        .unwrap();
        assert_eq!(betti_z2(&m), Err(Error::BoundaryComposition(2)));
    }

    #[test]
    fn euler_of_betti() {
        assert_eq!(BettiVector(vec![1, 0, 1]).euler_characteristic(), 2);
        assert_eq!(BettiVector(vec![1, 0, 0]).trimmed(), BettiVector(vec![1]));
    }
}
