//! Forman gradients encoded as bit-vectors on top simplices, computed by
//! coreductions inside the lower star of each vertex.
//!
//! A simplex belongs to the lower star of the vertex that is largest among
//! its own vertices under [`IaStarComplex::vertex_cmp`]. Lower stars
//! partition the complex, and every pair produced here lies in one lower
//! star, so the gradient is filtered with respect to the induced filtration.
//! Per-vertex work reads only the immutable complex and writes bits with
//! atomic `fetch_or`, so vertices may be processed in any order or
//! concurrently and yield the same encoding.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::combinatorics::for_each_combination;
use crate::complex::{IaStarComplex, TopId};
use crate::error::{Error, Result};
use crate::layout::{bitvector_length, decode_bit, local_bit_index, missing_position, MAX_TOP_DIM};
use crate::simplex::{dim_lex_cmp, Simplex, Vertex};

/// One bit-vector per top simplex, packed into shared atomic words.
#[derive(Debug)]
pub struct GradientBits {
    /// Word offset of each top's bit-vector; `offsets[t + 1] - offsets[t]` words.
    offsets: Vec<usize>,
    words: Vec<AtomicU64>,
}

impl GradientBits {
    pub fn new(complex: &IaStarComplex) -> Result<Self> {
        let mut offsets = Vec::with_capacity(complex.tops().len() + 1);
        let mut total = 0usize;
        offsets.push(0);
        for top in complex.tops() {
            if top.dim() > MAX_TOP_DIM {
                return Err(Error::DimensionCap {
                    dim: top.dim(),
                    cap: MAX_TOP_DIM,
                });
            }
            total += bitvector_length(top.dim()).div_ceil(64);
            offsets.push(total);
        }
        let words = (0..total).map(|_| AtomicU64::new(0)).collect();
        Ok(GradientBits { offsets, words })
    }

    fn word(&self, top: TopId, bit: usize) -> &AtomicU64 {
        let w = self.offsets[top as usize] + bit / 64;
        debug_assert!(w < self.offsets[top as usize + 1]);
        &self.words[w]
    }

    pub fn set(&self, top: TopId, bit: usize) {
        self.word(top, bit)
            .fetch_or(1 << (bit % 64), AtomicOrdering::Relaxed);
    }

    pub fn get(&self, top: TopId, bit: usize) -> bool {
        self.word(top, bit).load(AtomicOrdering::Relaxed) & (1 << (bit % 64)) != 0
    }

    /// Indices of the set bits of one top's vector, ascending.
    pub fn set_bits(&self, top: TopId) -> Vec<usize> {
        let range = self.offsets[top as usize]..self.offsets[top as usize + 1];
        let mut out = Vec::new();
        for (i, w) in self.words[range].iter().enumerate() {
            let mut x = w.load(AtomicOrdering::Relaxed);
            while x != 0 {
                out.push(i * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }

    /// Raw words, for byte-level comparisons between runs.
    pub fn snapshot(&self) -> Vec<u64> {
        self.words
            .iter()
            .map(|w| w.load(AtomicOrdering::Relaxed))
            .collect()
    }
}

impl Clone for GradientBits {
    fn clone(&self) -> Self {
        GradientBits {
            offsets: self.offsets.clone(),
            words: self.snapshot().into_iter().map(AtomicU64::new).collect(),
        }
    }
}

impl PartialEq for GradientBits {
    fn eq(&self, other: &Self) -> bool {
        self.offsets == other.offsets && self.snapshot() == other.snapshot()
    }
}

/// Partner of a paired simplex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Partner {
    /// Paired with this immediate coface.
    Up(Simplex),
    /// Paired with this immediate face.
    Down(Simplex),
}

impl Partner {
    pub fn simplex(&self) -> &Simplex {
        match self {
            Partner::Up(s) | Partner::Down(s) => s,
        }
    }
}

/// A discrete gradient: bit-vectors on the tops plus the critical simplices.
#[derive(Debug, Clone, PartialEq)]
pub struct FormanGradient {
    bits: GradientBits,
    /// Sorted by dimension, then lexicographically.
    critical: Vec<Simplex>,
}

impl FormanGradient {
    /// An empty gradient (no pairs, no critical simplices).
    pub fn new(complex: &IaStarComplex) -> Result<Self> {
        Ok(FormanGradient {
            bits: GradientBits::new(complex)?,
            critical: Vec::new(),
        })
    }

    pub fn from_parts(bits: GradientBits, mut critical: Vec<Simplex>) -> Self {
        critical.sort_by(dim_lex_cmp);
        FormanGradient { bits, critical }
    }

    /// Encodes an explicit pairing. Every simplex must end up either paired
    /// once or listed as critical.
    pub fn from_pairing<'a>(
        complex: &IaStarComplex,
        pairs: impl IntoIterator<Item = &'a (Simplex, Simplex)>,
        critical: impl IntoIterator<Item = &'a Simplex>,
    ) -> Result<Self> {
        let mut g = FormanGradient::new(complex)?;
        for (sigma, tau) in pairs {
            g.set_pair(complex, sigma, tau)?;
        }
        for c in critical {
            g.add_critical(complex, c.clone())?;
        }
        Ok(g)
    }

    pub fn bits(&self) -> &GradientBits {
        &self.bits
    }

    pub fn critical(&self) -> &[Simplex] {
        &self.critical
    }

    pub fn is_critical(&self, s: &Simplex) -> bool {
        self.critical
            .binary_search_by(|c| dim_lex_cmp(c, s))
            .is_ok()
    }

    /// Marks `s` critical. Fails if it is paired or already critical.
    pub fn add_critical(&mut self, complex: &IaStarComplex, s: Simplex) -> Result<()> {
        if !complex.contains(&s) {
            return Err(Error::UnknownSimplex(s));
        }
        if self.is_critical(&s) || self.is_paired(complex, &s)?.is_some() {
            return Err(Error::MatchingViolation(s));
        }
        let at = self
            .critical
            .binary_search_by(|c| dim_lex_cmp(c, &s))
            .unwrap_err();
        self.critical.insert(at, s);
        Ok(())
    }

    /// Adds the pair `(sigma, tau)`, setting its bit in every top that has
    /// `tau` as a face.
    pub fn set_pair(
        &mut self,
        complex: &IaStarComplex,
        sigma: &Simplex,
        tau: &Simplex,
    ) -> Result<()> {
        if missing_position(tau, sigma).is_none() {
            return Err(Error::NotContained(format!(
                "{sigma} is not a facet of {tau}"
            )));
        }
        if tau.last() as usize >= complex.vertex_count() {
            return Err(Error::UnknownSimplex(tau.clone()));
        }
        let star = complex.vertex_star(sigma.first());
        if complex.tops_containing(&star, tau).next().is_none() {
            return Err(Error::UnknownSimplex(tau.clone()));
        }
        for s in [sigma, tau] {
            if self.is_critical(s) || self.is_paired(complex, s)?.is_some() {
                return Err(Error::MatchingViolation(s.clone()));
            }
        }
        write_pair(complex, &star, &self.bits, sigma, tau);
        Ok(())
    }

    /// The partner of `s`, if any.
    pub fn is_paired(&self, complex: &IaStarComplex, s: &Simplex) -> Result<Option<Partner>> {
        if s.last() as usize >= complex.vertex_count() {
            return Err(Error::UnknownSimplex(s.clone()));
        }
        let star = complex.vertex_star(s.first());
        self.is_paired_in(complex, &star, s)
    }

    /// As [`Self::is_paired`], with the star of `s.first()` supplied by the caller.
    pub fn is_paired_in(
        &self,
        complex: &IaStarComplex,
        star: &[TopId],
        s: &Simplex,
    ) -> Result<Option<Partner>> {
        // candidate -> (tops with the bit set, tops having the candidate pair)
        let mut up: BTreeMap<Vertex, (usize, usize)> = BTreeMap::new();
        let mut down: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        let mut any = false;
        for t in complex.tops_containing(star, s) {
            any = true;
            let top = complex.top(t);
            let k = top.dim();
            let local = s.local_positions_in(top).expect("top contains s");
            if s.dim() >= 1 {
                for missing in 0..=s.dim() {
                    let e = down.entry(missing).or_default();
                    e.1 += 1;
                    if self.bits.get(t, local_bit_index(k, &local, missing)) {
                        e.0 += 1;
                    }
                }
            }
            let mut tau_local = Vec::with_capacity(local.len() + 1);
            for (p, &w) in top.vertices().iter().enumerate() {
                if local.binary_search(&p).is_ok() {
                    continue;
                }
                tau_local.clear();
                tau_local.extend_from_slice(&local);
                let at = tau_local.binary_search(&p).unwrap_err();
                tau_local.insert(at, p);
                let e = up.entry(w).or_default();
                e.1 += 1;
                if self.bits.get(t, local_bit_index(k, &tau_local, at)) {
                    e.0 += 1;
                }
            }
        }
        if !any {
            return Err(Error::UnknownSimplex(s.clone()));
        }

        let mut found = None;
        let mut record = |p: Partner| -> Result<()> {
            if found.replace(p).is_some() {
                return Err(Error::CorruptGradient(s.clone()));
            }
            Ok(())
        };
        for (missing, (set, total)) in down {
            match set {
                0 => {}
                _ if set == total => record(Partner::Down(s.without_position(missing)))?,
                _ => return Err(Error::CorruptGradient(s.clone())),
            }
        }
        for (w, (set, total)) in up {
            match set {
                0 => {}
                _ if set == total => record(Partner::Up(s.with_vertex(w).expect("w not in s")))?,
                _ => return Err(Error::CorruptGradient(s.clone())),
            }
        }
        Ok(found)
    }

    /// Every encoded pair `(lower, upper)`, deduplicated, sorted by the lower
    /// simplex (dimension first) and then the upper.
    pub fn pairs(&self, complex: &IaStarComplex) -> Vec<(Simplex, Simplex)> {
        let mut out: Vec<(Simplex, Simplex)> = self.pair_occurrences(complex).into_keys().collect();
        out.sort_by(|a, b| dim_lex_cmp(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));
        out
    }

    /// Decoded pairs with the number of top bit-vectors carrying each.
    fn pair_occurrences(&self, complex: &IaStarComplex) -> BTreeMap<(Simplex, Simplex), usize> {
        let mut out = BTreeMap::new();
        for (t, top) in complex.tops().iter().enumerate() {
            let k = top.dim();
            for bit in self.bits.set_bits(t as TopId) {
                let (local, missing) = decode_bit(k, bit);
                let upper =
                    Simplex::from_sorted(local.iter().map(|&p| top.vertices()[p]).collect());
                let lower = upper.without_position(missing);
                *out.entry((lower, upper)).or_insert(0) += 1;
            }
        }
        out
    }

    /// Critical simplex counts indexed by dimension (length `dim + 1`).
    pub fn critical_per_dim(&self, dim: usize) -> Vec<u64> {
        let mut out = vec![0; dim + 1];
        for c in &self.critical {
            out[c.dim()] += 1;
        }
        out
    }
}

/// Sets the bit of `(sigma, tau)` in every top of `star` having `tau` as a face.
/// `star` must contain every top with `tau` as a face.
pub(crate) fn write_pair(
    complex: &IaStarComplex,
    star: &[TopId],
    bits: &GradientBits,
    sigma: &Simplex,
    tau: &Simplex,
) {
    let missing = missing_position(tau, sigma).expect("sigma is a facet of tau");
    for t in complex.tops_containing(star, tau) {
        let top = complex.top(t);
        let local = tau.local_positions_in(top).expect("top contains tau");
        bits.set(t, local_bit_index(top.dim(), &local, missing));
    }
}

/// Top simplices scanned for the lower star of `v`: its whole star.
pub fn lower_top(complex: &IaStarComplex, v: Vertex) -> Vec<TopId> {
    complex.vertex_star(v)
}

/// Vertices of `top` strictly below `v`, ascending by id.
fn lower_vertices(complex: &IaStarComplex, v: Vertex, top: &Simplex) -> Vec<Vertex> {
    top.vertices()
        .iter()
        .copied()
        .filter(|&u| u != v && complex.vertex_cmp(u, v) == Ordering::Less)
        .collect()
}

fn join(v: Vertex, lower: &[Vertex], pick: &[usize]) -> Simplex {
    let mut vs: Vec<Vertex> = pick.iter().map(|&i| lower[i]).collect();
    let at = vs.binary_search(&v).unwrap_err();
    vs.insert(at, v);
    Simplex::from_sorted(vs)
}

/// The `k`-simplices of the lower star of `v` that are faces of tops in `lt`,
/// in canonical order.
pub fn lower_star(complex: &IaStarComplex, v: Vertex, k: usize, lt: &[TopId]) -> Vec<Simplex> {
    let mut out = Vec::new();
    for &t in lt {
        let top = complex.top(t);
        if !top.contains_vertex(v) {
            continue;
        }
        let lower = lower_vertices(complex, v, top);
        for_each_combination(lower.len(), k, |pick| out.push(join(v, &lower, pick)));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// All layers of the lower star of `v`, indexed by dimension.
pub fn lower_star_layers(complex: &IaStarComplex, v: Vertex, lt: &[TopId]) -> Vec<Vec<Simplex>> {
    let mut layers: Vec<Vec<Simplex>> = vec![Vec::new()];
    for &t in lt {
        let top = complex.top(t);
        if !top.contains_vertex(v) {
            continue;
        }
        let lower = lower_vertices(complex, v, top);
        if layers.len() < lower.len() + 1 {
            layers.resize_with(lower.len() + 1, Vec::new);
        }
        for (k, layer) in layers.iter_mut().enumerate().take(lower.len() + 1) {
            for_each_combination(lower.len(), k, |pick| layer.push(join(v, &lower, pick)));
        }
    }
    for layer in &mut layers {
        layer.sort_unstable();
        layer.dedup();
    }
    layers
}

/// Working sets of the coreduction loop for one vertex at one dimension step.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerStarWorkset {
    pub v: Vertex,
    pub lt: Vec<TopId>,
    /// Unpaired `(k+1)`-simplices of the lower star.
    pub st: BTreeSet<Simplex>,
    /// Unresolved `k`-simplices of the lower star.
    pub cr: BTreeSet<Simplex>,
    pub k: usize,
}

impl LowerStarWorkset {
    /// The first `tau` of `st` with exactly one facet through `v` in `cr`,
    /// together with that facet.
    pub fn get_next_pair(&self) -> Option<(Simplex, Simplex)> {
        for tau in &self.st {
            let mut only = None;
            let mut count = 0;
            for (p, &u) in tau.vertices().iter().enumerate() {
                if u == self.v {
                    continue;
                }
                let facet = tau.without_position(p);
                if self.cr.contains(&facet) {
                    count += 1;
                    only = Some(facet);
                }
            }
            if count == 1 {
                return Some((only.expect("count is one"), tau.clone()));
            }
        }
        None
    }
}

/// Counters produced by [`forman_gradient`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradientStats {
    /// Simplices of the complex per dimension (each counted in exactly one lower star).
    pub simplices_per_dim: Vec<u64>,
    pub critical_per_dim: Vec<u64>,
    /// Pairs indexed by the dimension of the lower member.
    pub pairs_per_dim: Vec<u64>,
}

impl GradientStats {
    pub fn total_simplices(&self) -> u64 {
        self.simplices_per_dim.iter().sum()
    }

    pub fn total_critical(&self) -> u64 {
        self.critical_per_dim.iter().sum()
    }

    pub fn total_pairs(&self) -> u64 {
        self.pairs_per_dim.iter().sum()
    }

    pub fn merge(&mut self, other: &GradientStats) {
        for (mine, theirs) in [
            (&mut self.simplices_per_dim, &other.simplices_per_dim),
            (&mut self.critical_per_dim, &other.critical_per_dim),
            (&mut self.pairs_per_dim, &other.pairs_per_dim),
        ] {
            if mine.len() < theirs.len() {
                mine.resize(theirs.len(), 0);
            }
            for (a, b) in mine.iter_mut().zip(theirs) {
                *a += b;
            }
        }
    }

    fn pad(&mut self, dim: usize) {
        self.simplices_per_dim.resize(dim + 1, 0);
        self.critical_per_dim.resize(dim + 1, 0);
        self.pairs_per_dim.resize(dim + 1, 0);
    }
}

/// Result of running the coreduction loop on one lower star.
#[derive(Debug, Clone, Default)]
pub struct VertexOutcome {
    pub critical: Vec<Simplex>,
    pub stats: GradientStats,
}

/// Runs the dimension-ascending coreduction loop on the lower star of `v`,
/// writing pairs into `bits`. `star` is the star of `v`.
///
/// At step `k` the unresolved `k`-simplices (`CR`) are paired with
/// `(k+1)`-simplices (`ST`) while some `tau` in `ST` has exactly one facet
/// through `v` left in `CR`, taking the canonically first such `tau`; when
/// none does, the first simplex of `CR` becomes critical. Unpaired members of
/// `ST` form the next `CR`.
pub fn process_vertex(
    complex: &IaStarComplex,
    v: Vertex,
    star: &[TopId],
    bits: &GradientBits,
) -> VertexOutcome {
    let layers = lower_star_layers(complex, v, star);
    let mut stats = GradientStats {
        simplices_per_dim: layers.iter().map(|l| l.len() as u64).collect(),
        critical_per_dim: vec![0; layers.len()],
        pairs_per_dim: vec![0; layers.len()],
    };
    let mut critical = Vec::new();

    // alive[i]: layer-k simplex i not yet paired or declared critical
    let mut alive = vec![true; layers[0].len()];
    for k in 0..layers.len() {
        let cr = &layers[k];
        let empty = Vec::new();
        let st = layers.get(k + 1).unwrap_or(&empty);
        let arity = k + 1; // facets of a (k+1)-simplex that contain v

        // facet indices (into cr) of each tau in st that contain v
        let mut facets = Vec::with_capacity(st.len() * arity);
        let mut cofaces: Vec<Vec<u32>> = vec![Vec::new(); cr.len()];
        for (j, tau) in st.iter().enumerate() {
            for (p, &u) in tau.vertices().iter().enumerate() {
                if u == v {
                    continue;
                }
                let i = cr
                    .binary_search(&tau.without_position(p))
                    .expect("facet in lower star");
                facets.push(i as u32);
                cofaces[i].push(j as u32);
            }
        }
        let mut count: Vec<u32> = (0..st.len())
            .map(|j| {
                facets[j * arity..(j + 1) * arity]
                    .iter()
                    .filter(|&&i| alive[i as usize])
                    .count() as u32
            })
            .collect();
        let mut st_alive = vec![true; st.len()];
        let mut ready: BTreeSet<u32> = (0..st.len() as u32)
            .filter(|&j| count[j as usize] == 1)
            .collect();

        let mut remaining = alive.iter().filter(|&&a| a).count();
        let mut cursor = 0;
        let kill = |i: usize,
                    alive: &mut Vec<bool>,
                    count: &mut Vec<u32>,
                    ready: &mut BTreeSet<u32>,
                    st_alive: &Vec<bool>| {
            alive[i] = false;
            for &j in &cofaces[i] {
                if !st_alive[j as usize] {
                    continue;
                }
                count[j as usize] -= 1;
                match count[j as usize] {
                    1 => {
                        ready.insert(j);
                    }
                    0 => {
                        ready.remove(&j);
                    }
                    _ => {}
                }
            }
        };
        while remaining > 0 {
            if let Some(j) = ready.pop_first() {
                let i = facets[j as usize * arity..(j as usize + 1) * arity]
                    .iter()
                    .copied()
                    .find(|&i| alive[i as usize])
                    .expect("one live facet") as usize;
                st_alive[j as usize] = false;
                write_pair(complex, star, bits, &cr[i], &st[j as usize]);
                stats.pairs_per_dim[k] += 1;
                kill(i, &mut alive, &mut count, &mut ready, &st_alive);
            } else {
                while !alive[cursor] {
                    cursor += 1;
                }
                critical.push(cr[cursor].clone());
                stats.critical_per_dim[k] += 1;
                kill(cursor, &mut alive, &mut count, &mut ready, &st_alive);
            }
            remaining -= 1;
        }
        alive = st_alive;
    }
    VertexOutcome { critical, stats }
}

/// Sequential gradient computation over all vertices in ascending order.
pub fn forman_gradient(complex: &IaStarComplex) -> Result<(FormanGradient, GradientStats)> {
    let bits = GradientBits::new(complex)?;
    let mut critical = Vec::new();
    let mut stats = GradientStats::default();
    for v in complex.vertices_ascending() {
        let star = lower_top(complex, v);
        let outcome = process_vertex(complex, v, &star, &bits);
        critical.extend(outcome.critical);
        stats.merge(&outcome.stats);
    }
    stats.pad(complex.dim());
    Ok((FormanGradient::from_parts(bits, critical), stats))
}

/// Assembles per-vertex outcomes computed elsewhere (e.g. on worker threads).
pub fn assemble_gradient(
    complex: &IaStarComplex,
    bits: GradientBits,
    outcomes: impl IntoIterator<Item = VertexOutcome>,
) -> (FormanGradient, GradientStats) {
    let mut critical = Vec::new();
    let mut stats = GradientStats::default();
    for o in outcomes {
        critical.extend(o.critical);
        stats.merge(&o.stats);
    }
    stats.pad(complex.dim());
    (FormanGradient::from_parts(bits, critical), stats)
}

/// Straightforward version of the per-vertex loop driven by
/// [`LowerStarWorkset::get_next_pair`] scans. Quadratic; kept as a cross-check.
pub fn forman_gradient_by_scanning(complex: &IaStarComplex) -> Result<FormanGradient> {
    let mut gradient = FormanGradient::new(complex)?;
    let mut critical = Vec::new();
    for v in complex.vertices_ascending() {
        let lt = lower_top(complex, v);
        let mut ws = LowerStarWorkset {
            v,
            st: BTreeSet::from([Simplex::vertex(v)]),
            cr: BTreeSet::new(),
            lt,
            k: 0,
        };
        for k in 0..=complex.dim() {
            ws.k = k;
            ws.cr = core::mem::take(&mut ws.st);
            ws.st = lower_star(complex, v, k + 1, &ws.lt).into_iter().collect();
            while !ws.cr.is_empty() {
                if let Some((sigma, tau)) = ws.get_next_pair() {
                    write_pair(complex, &ws.lt, &gradient.bits, &sigma, &tau);
                    ws.st.remove(&tau);
                    ws.cr.remove(&sigma);
                } else {
                    let first = ws.cr.pop_first().expect("non-empty");
                    critical.push(first);
                }
            }
        }
    }
    critical.sort_by(dim_lex_cmp);
    gradient.critical = critical;
    Ok(gradient)
}

/// Outcome of one validation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradientReport {
    pub matching: Verdict,
    pub acyclic: Verdict,
    pub filtered: Verdict,
}

impl GradientReport {
    pub fn passed(&self) -> bool {
        self.matching.passed() && self.acyclic.passed() && self.filtered.passed()
    }
}

/// Checks that `gradient` is a matching, has no closed V-path, and pairs
/// only simplices with the same maximum vertex.
pub fn validate_gradient(complex: &IaStarComplex, gradient: &FormanGradient) -> GradientReport {
    let occurrences = gradient.pair_occurrences(complex);
    let pairs: Vec<(Simplex, Simplex)> = occurrences.keys().cloned().collect();
    GradientReport {
        matching: check_matching(complex, gradient, &occurrences),
        acyclic: check_acyclic(&pairs),
        filtered: check_filtered(complex, &pairs),
    }
}

fn check_matching(
    complex: &IaStarComplex,
    gradient: &FormanGradient,
    occurrences: &BTreeMap<(Simplex, Simplex), usize>,
) -> Verdict {
    let mut stars: BTreeMap<Vertex, Vec<TopId>> = BTreeMap::new();
    let mut used: BTreeSet<&Simplex> = BTreeSet::new();
    for ((lower, upper), &n) in occurrences {
        let star = stars
            .entry(upper.first())
            .or_insert_with(|| complex.vertex_star(upper.first()));
        let expected = complex.tops_containing(star, upper).count();
        if n != expected {
            return Verdict::Fail(format!(
                "pair {lower} -> {upper} set in {n} of {expected} top simplices"
            ));
        }
        for s in [lower, upper] {
            if !used.insert(s) {
                return Verdict::Fail(format!("{s} appears in more than one pair"));
            }
            if gradient.is_critical(s) {
                return Verdict::Fail(format!("{s} is both paired and critical"));
            }
        }
    }
    if let Some(w) = gradient.critical.windows(2).find(|w| w[0] == w[1]) {
        return Verdict::Fail(format!("{} listed twice as critical", w[0]));
    }
    Verdict::Pass
}

/// Per dimension, a directed graph on the lower members of pairs with an arc
/// `sigma -> sigma'` whenever `sigma' != sigma` is a facet of `sigma`'s partner
/// and is itself a lower member. A gradient has no directed cycle here.
fn check_acyclic(pairs: &[(Simplex, Simplex)]) -> Verdict {
    let partner: BTreeMap<&Simplex, &Simplex> = pairs.iter().map(|(l, u)| (l, u)).collect();
    let nodes: Vec<&Simplex> = partner.keys().copied().collect();
    let index: BTreeMap<&Simplex, usize> = nodes.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let succ: Vec<Vec<usize>> = nodes
        .iter()
        .map(|s| {
            partner[s]
                .facets()
                .iter()
                .filter(|f| f != s)
                .filter_map(|f| index.get(f).copied())
                .collect()
        })
        .collect();

    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; nodes.len()];
    for root in 0..nodes.len() {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (n, ref mut next)) = stack.last_mut() {
            if let Some(&m) = succ[n].get(*next) {
                *next += 1;
                match state[m] {
                    0 => {
                        state[m] = 1;
                        stack.push((m, 0));
                    }
                    1 => {
                        return Verdict::Fail(format!(
                            "closed V-path through {} -> {}",
                            nodes[n], nodes[m]
                        ))
                    }
                    _ => {}
                }
            } else {
                state[n] = 2;
                stack.pop();
            }
        }
    }
    Verdict::Pass
}

fn check_filtered(complex: &IaStarComplex, pairs: &[(Simplex, Simplex)]) -> Verdict {
    for (lower, upper) in pairs {
        if complex.max_vertex(lower) != complex.max_vertex(upper) {
            return Verdict::Fail(format!(
                "pair {lower} -> {upper} spans two filtration steps"
            ));
        }
    }
    Verdict::Pass
}

/// Simplex counts per dimension, obtained by enumerating every lower star.
pub fn count_simplices(complex: &IaStarComplex) -> Vec<u64> {
    let mut out = vec![0u64; complex.dim() + 1];
    for v in 0..complex.vertex_count() as Vertex {
        let star = complex.vertex_star(v);
        for (k, layer) in lower_star_layers(complex, v, &star).iter().enumerate() {
            out[k] += layer.len() as u64;
        }
    }
    out
}
