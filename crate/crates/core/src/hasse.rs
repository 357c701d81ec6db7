//! Reference implementation on an explicit Hasse diagram.
//!
//! Every simplex is stored with its immediate boundary and coboundary. A run
//! removes simplices one event at a time, so the live part is an S-complex.
//! This module is meant for small complexes: it backs the equivalence checks
//! between reduction, coreduction and interleaved removal sequences, the
//! brute-force homology used to validate Morse complexes, and an explicit
//! replay of the lower-star coreduction order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::for_each_combination;
use crate::complex::IaStarComplex;
use crate::error::{Error, Result};
use crate::morse::BettiVector;
use crate::simplex::{Simplex, Vertex};
use crate::z2;

/// Default limit on the number of simplices the oracle will materialize.
pub const DEFAULT_ORACLE_GUARD: usize = 10_000_000;

type Id = u32;

/// All simplices of a complex with explicit incidence lists.
#[derive(Debug, Clone)]
pub struct HasseComplex {
    /// Lexicographic order; a simplex's id is its index.
    simplices: Vec<Simplex>,
    boundary: Vec<Vec<Id>>,
    coboundary: Vec<Vec<Id>>,
}

impl HasseComplex {
    /// Materializes every face of `tops`. Fails when more than `guard`
    /// simplices would be stored.
    pub fn build(tops: &[Simplex], guard: usize) -> Result<Self> {
        let mut all: Vec<Simplex> = Vec::new();
        for top in tops {
            let n = top.vertices().len();
            if n >= 64 || (1u64 << n) - 1 > guard as u64 {
                return Err(Error::OracleGuard { limit: guard });
            }
            for m in 1..=n {
                for_each_combination(n, m, |c| {
                    all.push(Simplex::from_sorted(
                        c.iter().map(|&i| top.vertices()[i]).collect(),
                    ))
                });
            }
            if all.len() > 2 * guard {
                all.sort_unstable();
                all.dedup();
                if all.len() > guard {
                    return Err(Error::OracleGuard { limit: guard });
                }
            }
        }
        all.sort_unstable();
        all.dedup();
        if all.len() > guard {
            return Err(Error::OracleGuard { limit: guard });
        }

        let boundary: Vec<Vec<Id>> = all
            .iter()
            .map(|s| {
                s.facets()
                    .iter()
                    .map(|f| all.binary_search(f).expect("faces are closed") as Id)
                    .collect()
            })
            .collect();
        let mut coboundary = vec![Vec::new(); all.len()];
        for (id, facets) in boundary.iter().enumerate() {
            for &f in facets {
                coboundary[f as usize].push(id as Id);
            }
        }
        for list in &mut coboundary {
            list.sort_unstable();
        }
        Ok(HasseComplex {
            simplices: all,
            boundary,
            coboundary,
        })
    }

    pub fn from_complex(complex: &IaStarComplex, guard: usize) -> Result<Self> {
        Self::build(complex.tops(), guard)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn id_of(&self, s: &Simplex) -> Option<Id> {
        self.simplices.binary_search(s).ok().map(|i| i as Id)
    }

    pub fn boundary(&self, id: Id) -> &[Id] {
        &self.boundary[id as usize]
    }

    pub fn coboundary(&self, id: Id) -> &[Id] {
        &self.coboundary[id as usize]
    }

    pub fn dim(&self) -> usize {
        self.simplices.iter().map(Simplex::dim).max().unwrap_or(0)
    }

    pub fn counts_per_dim(&self) -> Vec<u64> {
        let mut out = vec![0; self.dim() + 1];
        if self.is_empty() {
            return Vec::new();
        }
        for s in &self.simplices {
            out[s.dim()] += 1;
        }
        out
    }
}

/// One removal in a sequence. Pairs are `(lower, upper)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Event {
    /// `upper` has `lower` as its only live facet.
    Coreduction(Simplex, Simplex),
    /// `lower` has `upper` as its only live coface.
    Reduction(Simplex, Simplex),
    /// A simplex without live facets, declared critical.
    Free(Simplex),
    /// A simplex without live cofaces, declared critical.
    Top(Simplex),
}

impl Event {
    fn flipped(self) -> Event {
        match self {
            Event::Coreduction(a, b) => Event::Reduction(a, b),
            Event::Reduction(a, b) => Event::Coreduction(a, b),
            Event::Free(s) => Event::Top(s),
            Event::Top(s) => Event::Free(s),
        }
    }

    fn is_coreduction_side(&self) -> bool {
        matches!(self, Event::Coreduction(..) | Event::Free(_))
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs = |f: &mut fmt::Formatter<'_>, s: &Simplex| -> fmt::Result {
            for (i, v) in s.vertices().iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        };
        match self {
            Event::Coreduction(a, b) | Event::Reduction(a, b) => {
                f.write_str(if matches!(self, Event::Coreduction(..)) {
                    "CORED "
                } else {
                    "RED "
                })?;
                vs(f, a)?;
                f.write_str(" ; ")?;
                vs(f, b)
            }
            Event::Free(s) | Event::Top(s) => {
                f.write_str(if matches!(self, Event::Free(_)) {
                    "FREE "
                } else {
                    "TOP "
                })?;
                vs(f, s)
            }
        }
    }
}

/// Ordered list of removal events.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RemovalSequence(pub Vec<Event>);

impl RemovalSequence {
    pub fn events(&self) -> &[Event] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The gradient pairs `(lower, upper)` the sequence produces.
    pub fn pairing(&self) -> BTreeSet<(Simplex, Simplex)> {
        self.0
            .iter()
            .filter_map(|e| match e {
                Event::Coreduction(a, b) | Event::Reduction(a, b) => Some((a.clone(), b.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn critical(&self) -> BTreeSet<Simplex> {
        self.0
            .iter()
            .filter_map(|e| match e {
                Event::Free(s) | Event::Top(s) => Some(s.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn is_coreduction_based(&self) -> bool {
        self.0.iter().all(Event::is_coreduction_side)
    }

    pub fn is_reduction_based(&self) -> bool {
        self.0.iter().all(|e| !e.is_coreduction_side())
    }
}

/// Choice rule among feasible events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Lexicographically first event, comparing `(lower, upper)` for pairs.
    Canonical,
    /// Uniform choice driven by a ChaCha8 generator with this seed.
    Seeded(u64),
}

/// Live view of a [`HasseComplex`] with the feasible events kept up to date.
struct SComplex<'a> {
    h: &'a HasseComplex,
    live: Vec<bool>,
    live_bd: Vec<u32>,
    live_cbd: Vec<u32>,
    cored: BTreeSet<(Id, Id)>,
    red: BTreeSet<(Id, Id)>,
    free: BTreeSet<Id>,
    top: BTreeSet<Id>,
    remaining: usize,
}

impl<'a> SComplex<'a> {
    fn new(h: &'a HasseComplex) -> Self {
        let n = h.len();
        let live_bd: Vec<u32> = h.boundary.iter().map(|b| b.len() as u32).collect();
        let live_cbd: Vec<u32> = h.coboundary.iter().map(|c| c.len() as u32).collect();
        let mut sc = SComplex {
            h,
            live: vec![true; n],
            live_bd,
            live_cbd,
            cored: BTreeSet::new(),
            red: BTreeSet::new(),
            free: BTreeSet::new(),
            top: BTreeSet::new(),
            remaining: n,
        };
        for id in 0..n as Id {
            sc.index(id);
        }
        sc
    }

    fn live_facets(&self, id: Id) -> impl Iterator<Item = Id> + '_ {
        self.h
            .boundary(id)
            .iter()
            .copied()
            .filter(|&f| self.live[f as usize])
    }

    fn live_cofaces(&self, id: Id) -> impl Iterator<Item = Id> + '_ {
        self.h
            .coboundary(id)
            .iter()
            .copied()
            .filter(|&c| self.live[c as usize])
    }

    /// Inserts the events `id` currently enables.
    fn index(&mut self, id: Id) {
        match self.live_bd[id as usize] {
            0 => {
                self.free.insert(id);
            }
            1 => {
                let f = self.live_facets(id).next().expect("one live facet");
                self.cored.insert((f, id));
            }
            _ => {}
        }
        match self.live_cbd[id as usize] {
            0 => {
                self.top.insert(id);
            }
            1 => {
                let c = self.live_cofaces(id).next().expect("one live coface");
                self.red.insert((id, c));
            }
            _ => {}
        }
    }

    /// Removes the events `id` currently enables.
    fn unindex(&mut self, id: Id) {
        match self.live_bd[id as usize] {
            0 => {
                self.free.remove(&id);
            }
            1 => {
                let f = self.live_facets(id).next().expect("one live facet");
                self.cored.remove(&(f, id));
            }
            _ => {}
        }
        match self.live_cbd[id as usize] {
            0 => {
                self.top.remove(&id);
            }
            1 => {
                let c = self.live_cofaces(id).next().expect("one live coface");
                self.red.remove(&(id, c));
            }
            _ => {}
        }
    }

    fn remove(&mut self, id: Id) {
        debug_assert!(self.live[id as usize]);
        self.unindex(id);
        let cofaces: Vec<Id> = self.live_cofaces(id).collect();
        let facets: Vec<Id> = self.live_facets(id).collect();
        for &n in cofaces.iter().chain(&facets) {
            self.unindex(n);
        }
        self.live[id as usize] = false;
        self.remaining -= 1;
        for &c in &cofaces {
            self.live_bd[c as usize] -= 1;
        }
        for &f in &facets {
            self.live_cbd[f as usize] -= 1;
        }
        for &n in cofaces.iter().chain(&facets) {
            self.index(n);
        }
    }

    fn simplex(&self, id: Id) -> Simplex {
        self.h.simplices[id as usize].clone()
    }
}

fn pick<T: Copy + Ord>(set: &BTreeSet<T>, rng: &mut Option<ChaCha8Rng>) -> Option<T> {
    match rng {
        None => set.first().copied(),
        Some(r) if !set.is_empty() => set.iter().nth(r.random_range(0..set.len())).copied(),
        Some(_) => None,
    }
}

fn rng_for(policy: Policy) -> Option<ChaCha8Rng> {
    match policy {
        Policy::Canonical => None,
        Policy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    }
}

/// Greedy coreduction run: take a coreduction pair while one exists,
/// otherwise remove a free simplex as critical.
pub fn coreduction_algorithm(h: &HasseComplex, policy: Policy) -> RemovalSequence {
    let mut sc = SComplex::new(h);
    let mut rng = rng_for(policy);
    let mut out = Vec::with_capacity(h.len());
    while sc.remaining > 0 {
        if let Some((s, t)) = pick(&sc.cored, &mut rng) {
            out.push(Event::Coreduction(sc.simplex(s), sc.simplex(t)));
            sc.remove(t);
            sc.remove(s);
        } else {
            let s = pick(&sc.free, &mut rng).expect("a non-empty S-complex has a free simplex");
            out.push(Event::Free(sc.simplex(s)));
            sc.remove(s);
        }
    }
    RemovalSequence(out)
}

/// Greedy reduction run: take a reduction pair while one exists,
/// otherwise remove a top simplex as critical.
pub fn reduction_algorithm(h: &HasseComplex, policy: Policy) -> RemovalSequence {
    let mut sc = SComplex::new(h);
    let mut rng = rng_for(policy);
    let mut out = Vec::with_capacity(h.len());
    while sc.remaining > 0 {
        if let Some((s, t)) = pick(&sc.red, &mut rng) {
            out.push(Event::Reduction(sc.simplex(s), sc.simplex(t)));
            sc.remove(s);
            sc.remove(t);
        } else {
            let s = pick(&sc.top, &mut rng).expect("a non-empty complex has a top simplex");
            out.push(Event::Top(sc.simplex(s)));
            sc.remove(s);
        }
    }
    RemovalSequence(out)
}

/// Random mix of reductions and coreductions; a free or top simplex is
/// removed only when no pair of either kind is feasible.
pub fn interleaved_algorithm(h: &HasseComplex, seed: u64) -> RemovalSequence {
    let mut sc = SComplex::new(h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(h.len());
    while sc.remaining > 0 {
        let pairs = sc.cored.len() + sc.red.len();
        if pairs > 0 {
            let r = rng.random_range(0..pairs);
            if r < sc.cored.len() {
                let (s, t) = *sc.cored.iter().nth(r).expect("in range");
                out.push(Event::Coreduction(sc.simplex(s), sc.simplex(t)));
                sc.remove(t);
                sc.remove(s);
            } else {
                let (s, t) = *sc.red.iter().nth(r - sc.cored.len()).expect("in range");
                out.push(Event::Reduction(sc.simplex(s), sc.simplex(t)));
                sc.remove(s);
                sc.remove(t);
            }
        } else {
            let singles = sc.free.len() + sc.top.len();
            let r = rng.random_range(0..singles);
            if r < sc.free.len() {
                let s = *sc.free.iter().nth(r).expect("in range");
                out.push(Event::Free(sc.simplex(s)));
                sc.remove(s);
            } else {
                let s = *sc.top.iter().nth(r - sc.free.len()).expect("in range");
                out.push(Event::Top(sc.simplex(s)));
                sc.remove(s);
            }
        }
    }
    RemovalSequence(out)
}

/// Coreduction run that processes lower stars one vertex at a time in
/// ascending `(f0, index)` order, dimension by dimension, taking the
/// lexicographically first feasible coface and otherwise the first
/// remaining simplex of the current dimension as free. Feasibility is read
/// off the live Hasse incidences.
pub fn lower_star_coreduction(h: &HasseComplex, f0: &[f64]) -> RemovalSequence {
    let cmp = |a: Vertex, b: Vertex| f0[a as usize].total_cmp(&f0[b as usize]).then(a.cmp(&b));
    let owner = |s: &Simplex| {
        s.vertices()
            .iter()
            .copied()
            .max_by(|&a, &b| cmp(a, b))
            .expect("non-empty")
    };
    // owner -> dimension -> ids (ascending, hence lexicographic)
    let mut groups: BTreeMap<Vertex, Vec<Vec<Id>>> = BTreeMap::new();
    for (id, s) in h.simplices.iter().enumerate() {
        let layers = groups.entry(owner(s)).or_default();
        if layers.len() <= s.dim() {
            layers.resize_with(s.dim() + 1, Vec::new);
        }
        layers[s.dim()].push(id as Id);
    }
    let mut order: Vec<Vertex> = groups.keys().copied().collect();
    order.sort_by(|&a, &b| cmp(a, b));

    let mut sc = SComplex::new(h);
    let mut out = Vec::with_capacity(h.len());
    for v in order {
        let layers = &groups[&v];
        for k in 0..layers.len() {
            let empty = Vec::new();
            let upper = layers.get(k + 1).unwrap_or(&empty);
            while layers[k].iter().any(|&s| sc.live[s as usize]) {
                let feasible = upper
                    .iter()
                    .copied()
                    .find(|&t| sc.live[t as usize] && sc.live_bd[t as usize] == 1);
                if let Some(t) = feasible {
                    let s = sc.live_facets(t).next().expect("one live facet");
                    debug_assert!(layers[k].contains(&s));
                    out.push(Event::Coreduction(sc.simplex(s), sc.simplex(t)));
                    sc.remove(t);
                    sc.remove(s);
                } else {
                    let s = layers[k]
                        .iter()
                        .copied()
                        .find(|&s| sc.live[s as usize])
                        .expect("a live simplex remains");
                    debug_assert_eq!(sc.live_bd[s as usize], 0);
                    out.push(Event::Free(sc.simplex(s)));
                    sc.remove(s);
                }
            }
        }
    }
    RemovalSequence(out)
}

/// Reverses a pure reduction-based sequence into a coreduction-based one
/// (or the converse), swapping reduction/coreduction and top/free tags.
pub fn reverse_transform(seq: &RemovalSequence) -> Result<RemovalSequence> {
    if !seq.is_coreduction_based() && !seq.is_reduction_based() {
        return Err(Error::InvalidSequence(
            "mixes reduction-side and coreduction-side events".into(),
        ));
    }
    Ok(RemovalSequence(
        seq.0.iter().rev().cloned().map(Event::flipped).collect(),
    ))
}

/// Moves coreductions and free removals to the front (keeping their order)
/// and appends the reversed, retagged reduction and top removals.
pub fn interleaved_sort(seq: &RemovalSequence) -> RemovalSequence {
    let (head, tail): (Vec<Event>, Vec<Event>) =
        seq.0.iter().cloned().partition(Event::is_coreduction_side);
    let mut out = head;
    out.extend(tail.into_iter().rev().map(Event::flipped));
    RemovalSequence(out)
}

/// First failing step of a replay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceViolation {
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for SequenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.reason)
    }
}

/// Replays `seq` on a fully live copy of `h`, checking every event's
/// feasibility at its step, and that removals on the coreduction side never
/// shrink a surviving simplex's live coboundary (and dually for the
/// reduction side). Every simplex must be removed exactly once.
pub fn validate_sequence(
    seq: &RemovalSequence,
    h: &HasseComplex,
) -> core::result::Result<(), SequenceViolation> {
    let mut sc = SComplex::new(h);
    for (step, event) in seq.0.iter().enumerate() {
        let fail = |reason: String| SequenceViolation { step, reason };
        let lookup =
            |s: &Simplex, sc: &SComplex<'_>| -> core::result::Result<Id, SequenceViolation> {
                let id = h
                    .id_of(s)
                    .ok_or_else(|| fail(format!("unknown simplex {s}")))?;
                if !sc.live[id as usize] {
                    return Err(fail(format!("matching violation: {s} was already removed")));
                }
                Ok(id)
            };
        match event {
            Event::Coreduction(a, b) | Event::Reduction(a, b) => {
                let s = lookup(a, &sc)?;
                let t = lookup(b, &sc)?;
                if !h.boundary(t).contains(&s) {
                    return Err(fail(format!("{a} is not a facet of {b}")));
                }
                if matches!(event, Event::Coreduction(..)) {
                    if sc.live_bd[t as usize] != 1 {
                        return Err(fail(format!(
                            "{b} has {} live facets",
                            sc.live_bd[t as usize]
                        )));
                    }
                    if sc.live_bd[s as usize] != 0 {
                        return Err(fail(format!(
                            "removing {a} would shrink the live coboundary of one of its facets"
                        )));
                    }
                    sc.remove(t);
                    sc.remove(s);
                } else {
                    if sc.live_cbd[s as usize] != 1 {
                        return Err(fail(format!(
                            "{a} has {} live cofaces",
                            sc.live_cbd[s as usize]
                        )));
                    }
                    if sc.live_cbd[t as usize] != 0 {
                        return Err(fail(format!(
                            "removing {b} would shrink the live boundary of one of its cofaces"
                        )));
                    }
                    sc.remove(s);
                    sc.remove(t);
                }
            }
            Event::Free(a) => {
                let s = lookup(a, &sc)?;
                if sc.live_bd[s as usize] != 0 {
                    return Err(fail(format!("{a} is not free")));
                }
                sc.remove(s);
            }
            Event::Top(a) => {
                let s = lookup(a, &sc)?;
                if sc.live_cbd[s as usize] != 0 {
                    return Err(fail(format!("{a} is not a top simplex")));
                }
                sc.remove(s);
            }
        }
    }
    if sc.remaining > 0 {
        return Err(SequenceViolation {
            step: seq.len(),
            reason: format!("{} simplices never removed", sc.remaining),
        });
    }
    Ok(())
}

/// Z/2 Betti numbers from the full boundary matrices.
pub fn brute_betti_z2(h: &HasseComplex) -> BettiVector {
    let counts = h.counts_per_dim();
    if counts.is_empty() {
        return BettiVector(Vec::new());
    }
    // position of each simplex inside its dimension block
    let mut block_index = vec![0u32; h.len()];
    let mut seen = vec![0u32; counts.len()];
    for (id, s) in h.simplices.iter().enumerate() {
        block_index[id] = seen[s.dim()];
        seen[s.dim()] += 1;
    }
    let mut columns: Vec<Vec<z2::Column>> = vec![Vec::new(); counts.len()];
    for (id, s) in h.simplices.iter().enumerate() {
        let mut col: z2::Column = h.boundary[id]
            .iter()
            .map(|&f| block_index[f as usize])
            .collect();
        col.sort_unstable();
        columns[s.dim()].push(col);
    }
    let ranks: Vec<usize> = (0..=counts.len())
        .map(|k| {
            if k == 0 || k >= counts.len() {
                0
            } else {
                z2::rank(&columns[k], counts[k - 1] as usize)
            }
        })
        .collect();
    BettiVector(
        (0..counts.len())
            .map(|k| counts[k] - ranks[k] as u64 - ranks[k + 1] as u64)
            .collect(),
    )
}

/// Counts V-paths from critical `tau` to each critical facet-dimension simplex
/// by depth-first enumeration over the explicit incidences.
pub fn vpath_counts(
    h: &HasseComplex,
    pairing: &BTreeSet<(Simplex, Simplex)>,
    critical: &BTreeSet<Simplex>,
    tau: &Simplex,
) -> BTreeMap<Simplex, u64> {
    let up: BTreeMap<Id, Id> = pairing
        .iter()
        .filter_map(|(a, b)| Some((h.id_of(a)?, h.id_of(b)?)))
        .collect();
    let crit: BTreeSet<Id> = critical.iter().filter_map(|s| h.id_of(s)).collect();
    let mut out = BTreeMap::new();
    let Some(start) = h.id_of(tau) else {
        return out;
    };
    let mut stack = vec![start];
    while let Some(cur) = stack.pop() {
        for &f in h.boundary(cur) {
            if crit.contains(&f) {
                *out.entry(h.simplices[f as usize].clone()).or_insert(0) += 1;
            } else if let Some(&next) = up.get(&f) {
                if next != cur {
                    stack.push(next);
                }
            }
        }
    }
    out
}
