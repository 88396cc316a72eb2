//! Stream-facing graph sketch: signed incidence-vector encoding of edges,
//! the spanning-forest rounds, and the doubling stack of support-find
//! instances M_1..M_R.
//!
//! Vertex v's incidence vector has +1 at coordinate (a, b) when v = a and
//! -1 when v = b, so interior edges cancel under subset summation and the
//! support of x_S is exactly the crossing set E(S, S-bar). The forest is
//! recovered Boruvka-style from ceil(log2 n) + 2 independent
//! SupportFind(1) rounds; stack r is a SupportFind(min(2^r, k)) instance.
//! Each instance gets its own seed derived from the master seed, so any
//! permutation of a fixed update multiset yields bit-identical state.

use crate::hashing::splitmix64;
use crate::par::{par_for_each_mut, par_map};
use crate::supportfind::{
    Delta, SubSketch, SupportAnswer, SupportFindParams, SupportFindSketch, DEFAULT_C, DEFAULT_W,
};
use crate::wire::{put_u64, Cursor};
use crate::{Error, Result};

pub const CONN_MAGIC: u64 = u64::from_le_bytes(*b"CUTCONN\0");
pub const CONN_VERSION: u8 = 1;

/// One signed edge-stream event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeUpdate {
    Insert(u32, u32),
    Delete(u32, u32),
}

impl EdgeUpdate {
    pub fn endpoints(self) -> (u32, u32) {
        match self {
            EdgeUpdate::Insert(u, v) | EdgeUpdate::Delete(u, v) => (u, v),
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            EdgeUpdate::Insert(..) => 1,
            EdgeUpdate::Delete(..) => -1,
        }
    }
}

/// Number of ordered-pair coordinates, C(n, 2).
pub fn pair_count(n: u32) -> usize {
    (n as usize) * (n as usize - 1) / 2
}

/// Incidence dimension padded to the next power of two (at least 2).
/// Padding coordinates never receive updates.
pub fn padded_dim(n: u32) -> usize {
    pair_count(n).next_power_of_two().max(2)
}

/// 1-based coordinate of the ordered pair (a, b) with a < b.
pub fn edge_index(n: u32, a: u32, b: u32) -> Result<usize> {
    if a == b {
        return Err(Error::SelfLoop(a));
    }
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    if a < 1 || b > n {
        return Err(Error::IndexOutOfRange {
            index: b as usize,
            max: n as usize,
        });
    }
    let a = a as usize;
    let b = b as usize;
    let n = n as usize;
    Ok((a - 1) * (2 * n - a) / 2 + (b - a))
}

/// Inverse of [`edge_index`]; rejects padded coordinates as corruption.
pub fn edge_from_index(n: u32, idx: usize) -> Result<(u32, u32)> {
    if idx == 0 || idx > pair_count(n) {
        return Err(Error::Corrupt(format!(
            "coordinate {idx} outside the incidence range of n = {n}"
        )));
    }
    let n_us = n as usize;
    let mut offset = 0usize;
    for a in 1..n_us {
        let row = n_us - a;
        if idx <= offset + row {
            return Ok((a as u32, (a + (idx - offset)) as u32));
        }
        offset += row;
    }
    unreachable!("idx bounds checked above")
}

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<u32>,
    sets: usize,
}

impl Dsu {
    pub fn new(n: u32) -> Self {
        Dsu {
            parent: (0..n).collect(),
            sets: n as usize,
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb) as usize] = ra.min(rb);
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    /// Current components as sorted 1-based vertex lists, ordered by their
    /// smallest member.
    pub fn components_1based(&mut self) -> Vec<Vec<u32>> {
        let n = self.parent.len() as u32;
        let mut by_root: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for v in 0..n {
            let r = self.find(v);
            by_root.entry(r).or_default().push(v + 1);
        }
        by_root.into_values().collect()
    }
}

/// Derives the per-instance parameter list for a (n, k, seed) sketch:
/// the spanning-forest rounds followed by the doubling stacks.
pub fn instance_params(
    n: u32,
    k: u32,
    seed: u64,
    w: usize,
) -> Result<(Vec<SupportFindParams>, Vec<SupportFindParams>)> {
    if n < 2 {
        return Err(Error::InvalidParams("need at least two vertices".into()));
    }
    if k < 1 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    let m = padded_dim(n);
    let forest_rounds = (32 - (n - 1).leading_zeros()) as usize + 2; // ceil(log2 n) + 2
    let delta0 = Delta::inv_power(n as u64, 8)?;
    let forest = (0..forest_rounds)
        .map(|b| {
            SupportFindParams::with_tuning(
                1,
                n as usize,
                m,
                delta0,
                splitmix64(seed ^ (b as u64)),
                DEFAULT_C,
                w,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let r_max = if k == 1 {
        0
    } else {
        (32 - (k - 1).leading_zeros()) as usize // ceil(log2 k)
    };
    let delta_r = Delta::inv_power(n as u64, 10)?;
    let stacks = (1..=r_max)
        .map(|r| {
            let budget = (1usize << r).min(k as usize);
            SupportFindParams::with_tuning(
                budget,
                n as usize,
                m,
                delta_r,
                splitmix64(seed ^ (0x100 + r as u64)),
                DEFAULT_C,
                w,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((forest, stacks))
}

/// Full single-pass stream state for an n-vertex graph and target
/// connectivity k.
#[derive(Clone, Debug)]
pub struct ConnSketch {
    n: u32,
    k: u32,
    seed: u64,
    forest: Vec<SupportFindSketch>,
    stacks: Vec<SupportFindSketch>,
}

impl ConnSketch {
    pub fn new(n: u32, k: u32, seed: u64) -> Result<Self> {
        Self::with_sparsity_multiplier(n, k, seed, DEFAULT_W)
    }

    /// W below the default 32 shrinks memory for large desk runs; the
    /// acceptance defaults keep W = 32.
    pub fn with_sparsity_multiplier(n: u32, k: u32, seed: u64, w: usize) -> Result<Self> {
        if k > n - 1 {
            return Err(Error::InvalidParams(format!(
                "k = {k} exceeds n - 1 = {}",
                n - 1
            )));
        }
        let (forest_params, stack_params) = instance_params(n, k, seed, w)?;
        let forest = forest_params
            .into_iter()
            .map(SupportFindSketch::new)
            .collect::<Result<Vec<_>>>()?;
        let stacks = stack_params
            .into_iter()
            .map(SupportFindSketch::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(ConnSketch {
            n,
            k,
            seed,
            forest,
            stacks,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn forest_rounds(&self) -> usize {
        self.forest.len()
    }

    /// R, the number of doubling stacks.
    pub fn stack_count(&self) -> usize {
        self.stacks.len()
    }

    pub fn stack(&self, r: usize) -> &SupportFindSketch {
        &self.stacks[r - 1]
    }

    pub(crate) fn instances_mut(&mut self) -> Vec<&mut SupportFindSketch> {
        self.forest.iter_mut().chain(self.stacks.iter_mut()).collect()
    }

    pub fn instances(&self) -> impl Iterator<Item = &SupportFindSketch> {
        self.forest.iter().chain(self.stacks.iter())
    }

    pub fn insert(&mut self, u: u32, v: u32) -> Result<()> {
        self.apply(EdgeUpdate::Insert(u, v))
    }

    pub fn delete(&mut self, u: u32, v: u32) -> Result<()> {
        self.apply(EdgeUpdate::Delete(u, v))
    }

    /// Fans one stream event out to every instance: +sign at the lower
    /// endpoint's vector, -sign at the upper endpoint's.
    pub fn apply(&mut self, up: EdgeUpdate) -> Result<()> {
        let (u, v) = up.endpoints();
        let coord = edge_index(self.n, u, v)?;
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let sign = up.sign();
        for inst in self.forest.iter_mut().chain(self.stacks.iter_mut()) {
            inst.update(a as usize, coord, sign)?;
            inst.update(b as usize, coord, -sign)?;
        }
        Ok(())
    }

    /// Applies a batch of events, parallelized across instances.
    pub fn apply_all(&mut self, updates: &[EdgeUpdate]) -> Result<()> {
        let n = self.n;
        let mut prepared = Vec::with_capacity(updates.len());
        for &up in updates {
            let (u, v) = up.endpoints();
            let coord = edge_index(n, u, v)?;
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            prepared.push((a as usize, b as usize, coord, up.sign()));
        }
        let mut instances = self.instances_mut();
        par_for_each_mut(&mut instances, |inst| {
            for &(a, b, coord, sign) in &prepared {
                inst.update(a, coord, sign).expect("validated above");
                inst.update(b, coord, -sign).expect("validated above");
            }
        });
        Ok(())
    }

    /// Boruvka over the forest rounds: each round asks every current
    /// component for one outgoing edge and merges. Queries within a round
    /// are non-adaptive (component list fixed before any query) and each
    /// round consumes a fresh independent instance.
    pub fn spanning_forest(&self) -> Vec<(u32, u32)> {
        let mut dsu = Dsu::new(self.n);
        let mut forest = Vec::new();
        for round in &self.forest {
            if dsu.set_count() == 1 {
                break;
            }
            let comps = dsu.components_1based();
            let found = par_map(&comps, |comp| {
                let ids: Vec<usize> = comp.iter().map(|&v| v as usize).collect();
                match round.query(&ids) {
                    Ok(SupportAnswer::Indices(idx)) if !idx.is_empty() => {
                        edge_from_index(self.n, idx[0]).ok()
                    }
                    _ => None,
                }
            });
            let mut progress = false;
            for edge in found.into_iter().flatten() {
                if dsu.union(edge.0 - 1, edge.1 - 1) {
                    forest.push(edge);
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
        forest.sort_unstable();
        forest
    }

    /// Queries stack r for up to `budget` edges crossing the cut
    /// (side, complement). `Ok(None)` signals a sketch-level Fail.
    pub fn query_cut_edges(
        &self,
        r: usize,
        side: &[u32],
        budget: usize,
    ) -> Result<Option<Vec<(u32, u32)>>> {
        if r == 0 || r > self.stacks.len() {
            return Err(Error::IndexOutOfRange {
                index: r,
                max: self.stacks.len(),
            });
        }
        let ids: Vec<usize> = side.iter().map(|&v| v as usize).collect();
        match self.stacks[r - 1].query(&ids)? {
            SupportAnswer::Fail => Ok(None),
            SupportAnswer::Indices(idx) => {
                let mut edges = Vec::with_capacity(idx.len().min(budget));
                for i in idx.into_iter().take(budget) {
                    edges.push(edge_from_index(self.n, i)?);
                }
                Ok(Some(edges))
            }
        }
    }

    pub fn merge_from(&mut self, other: &ConnSketch) -> Result<()> {
        if self.n != other.n || self.k != other.k || self.seed != other.seed {
            return Err(Error::ShapeMismatch);
        }
        for (a, b) in self
            .forest
            .iter_mut()
            .chain(self.stacks.iter_mut())
            .zip(other.instances())
        {
            a.merge_from(b)?;
        }
        Ok(())
    }

    /// Merges one player's sub-sketch fragments (one per instance, forest
    /// rounds first) into vector `vertex`.
    pub(crate) fn merge_player_fragments(
        &mut self,
        vertex: u32,
        frags: &[SubSketch],
    ) -> Result<()> {
        let total = self.forest.len() + self.stacks.len();
        if frags.len() != total {
            return Err(Error::ShapeMismatch);
        }
        for (inst, frag) in self
            .forest
            .iter_mut()
            .chain(self.stacks.iter_mut())
            .zip(frags)
        {
            inst.merge_sub(vertex as usize, frag)?;
        }
        Ok(())
    }

    pub fn serialize(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        put_u64(&mut buf, CONN_MAGIC);
        buf.push(CONN_VERSION);
        put_u64(&mut buf, self.n as u64);
        put_u64(&mut buf, self.k as u64);
        put_u64(&mut buf, self.seed);
        put_u64(&mut buf, self.forest.len() as u64);
        put_u64(&mut buf, self.stacks.len() as u64);
        for inst in self.instances() {
            inst.write_to(&mut buf);
        }
        buf
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor::new(bytes);
        cur.expect_u64(CONN_MAGIC, "connectivity sketch magic")?;
        let version = cur.u8()?;
        if version != CONN_VERSION {
            return Err(Error::Corrupt(format!("unsupported version {version}")));
        }
        let n = cur.u64()? as u32;
        let k = cur.u64()? as u32;
        let seed = cur.u64()?;
        let forest_count = cur.u64()? as usize;
        let stack_count = cur.u64()? as usize;
        let forest = (0..forest_count)
            .map(|_| SupportFindSketch::read_from(&mut cur))
            .collect::<Result<Vec<_>>>()?;
        let stacks = (0..stack_count)
            .map(|_| SupportFindSketch::read_from(&mut cur))
            .collect::<Result<Vec<_>>>()?;
        if !cur.is_empty() {
            return Err(Error::Corrupt("trailing bytes".into()));
        }
        Ok(ConnSketch {
            n,
            k,
            seed,
            forest,
            stacks,
        })
    }

    pub fn stats(&self) -> SketchStats {
        SketchStats::from_instances(
            self.n,
            self.k,
            self.forest.iter().map(|i| i.params().clone()).collect(),
            self.stacks.iter().map(|i| i.params().clone()).collect(),
        )
    }
}

/// Per-stack size report. `for_params` computes the same exact byte counts
/// the serializer would produce, without materializing a sketch, so the
/// scaling harness can range over (n, k) grids that would never fit in
/// memory (or make sense as a graph).
#[derive(Clone, Debug)]
pub struct SketchStats {
    pub n: u32,
    pub k: u32,
    pub forest_instances: usize,
    pub forest_bits: u64,
    /// (r, query budget, t_r, bits) per doubling stack.
    pub stacks: Vec<(usize, usize, usize, u64)>,
    pub total_bits: u64,
    pub sum_t: u64,
}

/// Container overhead of the sketch file around the instance payloads.
const CONTAINER_HEADER_BYTES: u64 = 8 + 1 + 8 * 5;

impl SketchStats {
    fn from_instances(
        n: u32,
        k: u32,
        forest: Vec<SupportFindParams>,
        stacks: Vec<SupportFindParams>,
    ) -> SketchStats {
        let forest_instances = forest.len();
        let forest_bits: u64 = forest.iter().map(|p| p.instance_bytes() as u64 * 8).sum();
        let stack_rows: Vec<(usize, usize, usize, u64)> = stacks
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1, p.k, p.t, p.instance_bytes() as u64 * 8))
            .collect();
        let sum_t: u64 = stacks.iter().map(|p| p.t as u64).sum();
        let total_bits = CONTAINER_HEADER_BYTES * 8
            + forest_bits
            + stack_rows.iter().map(|s| s.3).sum::<u64>();
        SketchStats {
            n,
            k,
            forest_instances,
            forest_bits,
            stacks: stack_rows,
            total_bits,
            sum_t,
        }
    }

    /// Sizing-only entry point; accepts any k >= 1 (the sketch shape is
    /// well-defined even where a k-connected graph is not).
    pub fn for_params(n: u32, k: u32, w: usize) -> Result<SketchStats> {
        let (forest, stacks) = instance_params(n, k, 0, w)?;
        Ok(Self::from_instances(n, k, forest, stacks))
    }

    pub fn stack_bits(&self) -> u64 {
        self.stacks.iter().map(|s| s.3).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    const W: usize = 8;

    fn sketch(n: u32, k: u32, seed: u64) -> ConnSketch {
        ConnSketch::with_sparsity_multiplier(n, k, seed, W).unwrap()
    }

    #[test]
    fn edge_index_bijection_small() {
        for n in 2..=12u32 {
            let mut seen = BTreeSet::new();
            for a in 1..=n {
                for b in a + 1..=n {
                    let idx = edge_index(n, a, b).unwrap();
                    assert!(idx >= 1 && idx <= pair_count(n));
                    assert!(seen.insert(idx));
                    assert_eq!(edge_from_index(n, idx).unwrap(), (a, b));
                }
            }
            assert_eq!(seen.len(), pair_count(n));
        }
    }

    #[test]
    fn padded_indices_rejected() {
        assert!(edge_from_index(4, 7).is_err());
        assert!(edge_from_index(4, 0).is_err());
        assert!(matches!(edge_index(4, 2, 2), Err(Error::SelfLoop(2))));
    }

    #[test]
    fn k1_has_no_stacks() {
        let cs = sketch(6, 1, 0);
        assert_eq!(cs.stack_count(), 0);
        assert!(cs.forest_rounds() >= 3);
    }

    #[test]
    fn stack_budgets_follow_doubling() {
        let cs = sketch(16, 8, 0);
        let budgets: Vec<usize> = cs.stacks.iter().map(|s| s.params().k).collect();
        assert_eq!(budgets, vec![2, 4, 8]);
        // Non-power-of-two k clamps the last stack.
        let cs = sketch(16, 5, 0);
        let budgets: Vec<usize> = cs.stacks.iter().map(|s| s.params().k).collect();
        assert_eq!(budgets, vec![2, 4, 5]);
    }

    #[test]
    fn insert_delete_restores_fresh_bytes() {
        let mut cs = sketch(6, 2, 3);
        let fresh = cs.serialize();
        cs.insert(1, 4).unwrap();
        assert_ne!(cs.serialize(), fresh);
        cs.delete(1, 4).unwrap();
        assert_eq!(cs.serialize(), fresh);
    }

    #[test]
    fn single_edge_signed_support() {
        // One edge (1,2): querying x_{1} on a stack must surface idx(1,2).
        let mut cs = sketch(6, 2, 4);
        cs.insert(1, 2).unwrap();
        let coord = edge_index(6, 1, 2).unwrap();
        match cs.stack(1).query(&[1]).unwrap() {
            SupportAnswer::Indices(idx) => assert_eq!(idx, vec![coord]),
            SupportAnswer::Fail => panic!("query failed"),
        }
    }

    #[test]
    fn triangle_interior_edge_cancels() {
        let mut cs = sketch(6, 2, 5);
        for (u, v) in [(1, 2), (1, 3), (2, 3)] {
            cs.insert(u, v).unwrap();
        }
        // Support of x_{1,2} is the crossing set {(1,3), (2,3)}.
        let expect: BTreeSet<usize> = [edge_index(6, 1, 3).unwrap(), edge_index(6, 2, 3).unwrap()]
            .into_iter()
            .collect();
        match cs.stack(1).query(&[1, 2]).unwrap() {
            SupportAnswer::Indices(idx) => {
                assert_eq!(idx.into_iter().collect::<BTreeSet<_>>(), expect)
            }
            SupportAnswer::Fail => panic!("query failed"),
        }
    }

    #[test]
    fn spanning_forest_empty_graph() {
        let cs = sketch(5, 1, 6);
        assert!(cs.spanning_forest().is_empty());
    }

    #[test]
    fn spanning_forest_path() {
        let mut cs = sketch(4, 1, 7);
        for (u, v) in [(1, 2), (2, 3), (3, 4)] {
            cs.insert(u, v).unwrap();
        }
        let forest = cs.spanning_forest();
        assert_eq!(forest.len(), 3);
        let mut dsu = Dsu::new(4);
        for (a, b) in &forest {
            assert!(dsu.union(a - 1, b - 1), "forest must be acyclic");
        }
        assert_eq!(dsu.set_count(), 1);
    }

    #[test]
    fn spanning_forest_two_triangles() {
        let mut cs = sketch(6, 1, 8);
        for (u, v) in [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)] {
            cs.insert(u, v).unwrap();
        }
        let forest = cs.spanning_forest();
        assert_eq!(forest.len(), 4);
        let mut dsu = Dsu::new(6);
        for (a, b) in &forest {
            assert!(dsu.union(a - 1, b - 1));
        }
        assert_eq!(dsu.set_count(), 2);
    }

    #[test]
    fn cut_query_k4_singleton() {
        let mut cs = sketch(4, 3, 9);
        for a in 1..=4u32 {
            for b in a + 1..=4 {
                cs.insert(a, b).unwrap();
            }
        }
        // S = {1} in K4: exactly three crossing edges, support below budget 4.
        let edges = cs.query_cut_edges(2, &[1], 4).unwrap().unwrap();
        let got: BTreeSet<(u32, u32)> = edges.into_iter().collect();
        assert_eq!(
            got,
            [(1, 2), (1, 3), (1, 4)].into_iter().collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn cut_query_k6_budgeted() {
        let mut cs = sketch(6, 5, 10);
        for a in 1..=6u32 {
            for b in a + 1..=6 {
                cs.insert(a, b).unwrap();
            }
        }
        // S = {1,2,3} in K6 has 9 crossing edges; budget 4 returns 4 distinct.
        let edges = cs.query_cut_edges(2, &[1, 2, 3], 4).unwrap().unwrap();
        assert_eq!(edges.len(), 4);
        let distinct: BTreeSet<(u32, u32)> = edges.iter().copied().collect();
        assert_eq!(distinct.len(), 4);
        for (a, b) in edges {
            let crosses = (a <= 3) != (b <= 3);
            assert!(crosses, "edge ({a},{b}) does not cross the cut");
        }
    }

    #[test]
    fn update_order_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let updates: Vec<EdgeUpdate> = (0..30)
            .map(|_| {
                let u = (rng.next_u64() % 6 + 1) as u32;
                let mut v = (rng.next_u64() % 6 + 1) as u32;
                if v == u {
                    v = v % 6 + 1;
                }
                if rng.next_u64() % 3 == 0 {
                    EdgeUpdate::Delete(u, v)
                } else {
                    EdgeUpdate::Insert(u, v)
                }
            })
            .collect();
        let mut a = sketch(6, 3, 11);
        a.apply_all(&updates).unwrap();
        let mut shuffled = updates.clone();
        // Fisher-Yates with the same rng.
        for i in (1..shuffled.len()).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        let mut b = sketch(6, 3, 11);
        for up in shuffled {
            b.apply(up).unwrap();
        }
        assert_eq!(a.serialize(), b.serialize());
    }

    #[test]
    fn stats_match_serialized_size() {
        let cs = sketch(8, 3, 12);
        let stats = cs.stats();
        assert_eq!(stats.total_bits, cs.serialize().len() as u64 * 8);
        let sized = SketchStats::for_params(8, 3, W).unwrap();
        assert_eq!(sized.total_bits, stats.total_bits);
    }

    #[test]
    fn serialization_round_trip() {
        let mut cs = sketch(5, 2, 13);
        cs.insert(1, 5).unwrap();
        cs.insert(2, 3).unwrap();
        let bytes = cs.serialize();
        let back = ConnSketch::deserialize(&bytes).unwrap();
        assert_eq!(back.serialize(), bytes);
    }

    #[test]
    fn invalid_construction() {
        assert!(ConnSketch::new(1, 1, 0).is_err());
        assert!(ConnSketch::new(5, 5, 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn edge_index_round_trip(n in 2u32..40, pair in (1u32..40, 1u32..40)) {
            let (a, b) = pair;
            prop_assume!(a != b && a <= n && b <= n);
            let idx = edge_index(n, a, b).unwrap();
            let (lo, hi) = (a.min(b), a.max(b));
            prop_assert_eq!(edge_from_index(n, idx).unwrap(), (lo, hi));
        }
    }
}
