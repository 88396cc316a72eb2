//! Exact reference implementations used to cross-check the sketch path:
//! a multiset edge store, connectivity and min-cut computations, and the
//! certificate validator. Everything here is deterministic and runs on the
//! true edge multiset, never on sketches.

use std::collections::BTreeMap;

use crate::certify::Certificate;
use crate::graph_sketch::Dsu;
use crate::{Error, Result};

/// Exact dynamic graph: a multiplicity map over unordered vertex pairs.
/// In strict mode a delete of an absent edge is an error; otherwise
/// multiplicities may go negative transiently but must be 0/1 when a
/// simple-graph computation is requested.
#[derive(Clone, Debug)]
pub struct ExactGraph {
    n: u32,
    mult: BTreeMap<(u32, u32), i64>,
    strict: bool,
}

impl ExactGraph {
    pub fn new(n: u32) -> Self {
        ExactGraph {
            n,
            mult: BTreeMap::new(),
            strict: false,
        }
    }

    pub fn new_strict(n: u32) -> Self {
        ExactGraph {
            n,
            mult: BTreeMap::new(),
            strict: true,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn key(&self, u: u32, v: u32) -> Result<(u32, u32)> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if a < 1 || b > self.n {
            return Err(Error::IndexOutOfRange {
                index: b as usize,
                max: self.n as usize,
            });
        }
        Ok((a, b))
    }

    pub fn insert(&mut self, u: u32, v: u32) -> Result<()> {
        let key = self.key(u, v)?;
        let m = self.mult.entry(key).or_insert(0);
        if self.strict && *m >= 1 {
            return Err(Error::Parse {
                line: 0,
                msg: format!("duplicate insert of edge ({}, {})", key.0, key.1),
            });
        }
        *m += 1;
        Ok(())
    }

    pub fn delete(&mut self, u: u32, v: u32) -> Result<()> {
        let key = self.key(u, v)?;
        let m = self.mult.entry(key).or_insert(0);
        if self.strict && *m <= 0 {
            return Err(Error::Parse {
                line: 0,
                msg: format!("delete of absent edge ({}, {})", key.0, key.1),
            });
        }
        *m -= 1;
        if *m == 0 {
            self.mult.remove(&key);
        }
        Ok(())
    }

    pub fn contains(&self, u: u32, v: u32) -> bool {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.mult.get(&(a, b)).copied().unwrap_or(0) > 0
    }

    /// Surviving simple edges, sorted. Errors if any multiplicity is
    /// outside {0, 1} (the stream double-inserted or over-deleted).
    pub fn edges(&self) -> Result<Vec<(u32, u32)>> {
        let mut out = Vec::with_capacity(self.mult.len());
        for (&(a, b), &m) in &self.mult {
            match m {
                1 => out.push((a, b)),
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("edge ({a}, {b}) has net multiplicity {m}"),
                    })
                }
            }
        }
        Ok(out)
    }

    pub fn edge_count(&self) -> usize {
        self.mult.len()
    }

    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = ExactGraph::new(n);
        for &(u, v) in edges {
            g.insert(u, v)?;
        }
        Ok(g)
    }

    /// Connected components as sorted vertex lists, ordered by minimum.
    pub fn components(&self) -> Result<Vec<Vec<u32>>> {
        let mut dsu = Dsu::new(self.n);
        for (a, b) in self.edges()? {
            dsu.union(a - 1, b - 1);
        }
        Ok(dsu.components_1based())
    }

    pub fn is_connected(&self) -> Result<bool> {
        Ok(self.components()?.len() == 1)
    }

    /// Edges with exactly one endpoint in `side` (given as sorted or not).
    pub fn crossing_edges(&self, side: &[u32]) -> Result<Vec<(u32, u32)>> {
        let mut in_side = vec![false; self.n as usize + 1];
        for &v in side {
            if v < 1 || v > self.n {
                return Err(Error::IndexOutOfRange {
                    index: v as usize,
                    max: self.n as usize,
                });
            }
            in_side[v as usize] = true;
        }
        Ok(self
            .edges()?
            .into_iter()
            .filter(|&(a, b)| in_side[a as usize] != in_side[b as usize])
            .collect())
    }

    /// Net signed incidence support of the subset sum: coordinates (edges)
    /// whose aggregated coefficient over `side` is nonzero. Equals the
    /// crossing set for any simple graph; exercised by tests as the exact
    /// counterpart of the sketch query.
    pub fn exact_support(&self, side: &[u32]) -> Result<Vec<(u32, u32)>> {
        let mut in_side = vec![false; self.n as usize + 1];
        for &v in side {
            in_side[v as usize] = true;
        }
        let mut out = Vec::new();
        for (a, b) in self.edges()? {
            // Coefficient +1 from the lower endpoint, -1 from the upper.
            let coeff = (in_side[a as usize] as i64) - (in_side[b as usize] as i64);
            if coeff != 0 {
                out.push((a, b));
            }
        }
        Ok(out)
    }

    /// Global minimum edge cut via Stoer-Wagner, plus a witness side
    /// normalized to contain vertex 1. Disconnected graphs return value 0
    /// with the component of vertex 1.
    pub fn min_cut(&self) -> Result<(usize, Vec<u32>)> {
        if !self.is_connected()? {
            let comps = self.components()?;
            let side = comps
                .into_iter()
                .find(|c| c.contains(&1))
                .expect("vertex 1 exists");
            return Ok((0, side));
        }
        if self.n == 1 {
            return Ok((usize::MAX, vec![1]));
        }
        let n = self.n as usize;
        let mut w = vec![vec![0i64; n]; n];
        for (a, b) in self.edges()? {
            w[(a - 1) as usize][(b - 1) as usize] += 1;
            w[(b - 1) as usize][(a - 1) as usize] += 1;
        }
        // merged[v] = set of original vertices contracted into v.
        let mut merged: Vec<Vec<u32>> = (0..n as u32).map(|v| vec![v + 1]).collect();
        let mut active: Vec<usize> = (0..n).collect();
        let mut best = i64::MAX;
        let mut best_side: Vec<u32> = Vec::new();
        while active.len() > 1 {
            // Maximum-adjacency order on the active vertices.
            let mut order = Vec::with_capacity(active.len());
            let mut weight = vec![0i64; n];
            let mut added = vec![false; n];
            for _ in 0..active.len() {
                let &next = active
                    .iter()
                    .filter(|&&v| !added[v])
                    .max_by_key(|&&v| weight[v])
                    .expect("active vertex remains");
                added[next] = true;
                order.push(next);
                for &v in &active {
                    if !added[v] {
                        weight[v] += w[next][v];
                    }
                }
            }
            let t = *order.last().unwrap();
            let s = order[order.len() - 2];
            let cut_of_phase = weight[t];
            if cut_of_phase < best {
                best = cut_of_phase;
                best_side = merged[t].clone();
            }
            // Contract t into s.
            let tm = std::mem::take(&mut merged[t]);
            merged[s].extend(tm);
            for &v in &active {
                if v != s && v != t {
                    w[s][v] += w[t][v];
                    w[v][s] = w[s][v];
                }
            }
            active.retain(|&v| v != t);
        }
        best_side.sort_unstable();
        if !best_side.contains(&1) {
            let mut comp: Vec<u32> = (1..=self.n).filter(|v| !best_side.contains(v)).collect();
            comp.sort_unstable();
            best_side = comp;
        }
        Ok((best as usize, best_side))
    }

    /// Brute-force minimum cut over all 2^(n-1) - 1 proper sides containing
    /// vertex 1; used to cross-check Stoer-Wagner on tiny graphs.
    pub fn exhaustive_min_cut(&self) -> Result<(usize, Vec<u32>)> {
        let n = self.n;
        assert!(n <= 22, "exhaustive scan limited to small n");
        let edges = self.edges()?;
        let mut best = usize::MAX;
        let mut best_side = Vec::new();
        let full = 1u32 << n;
        // Masks with bit 0 (vertex 1) set, excluding the full vertex set.
        for mask in (1..full - 1).step_by(2) {
            let crossing = edges
                .iter()
                .filter(|&&(a, b)| (mask >> (a - 1) & 1) != (mask >> (b - 1) & 1))
                .count();
            if crossing < best {
                best = crossing;
                best_side = (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            }
        }
        Ok((best, best_side))
    }

    pub fn is_k_edge_connected(&self, k: u32) -> Result<bool> {
        if self.n == 1 {
            return Ok(true);
        }
        if !self.is_connected()? {
            return Ok(false);
        }
        Ok(self.min_cut()?.0 >= k as usize)
    }
}

/// Validation outcome for a certificate against the true graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

fn sorted_unique(edges: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut e: Vec<(u32, u32)> = edges
        .iter()
        .map(|&(a, b)| if a < b { (a, b) } else { (b, a) })
        .collect();
    e.sort_unstable();
    e.dedup();
    e
}

/// Checks a certificate against the exact final graph.
///
/// Positive: the edge set must be a subgraph of G, span all vertices, and
/// itself be k-edge-connected; additionally G must be k-edge-connected
/// (otherwise a correct run could not have produced a positive answer).
/// NegativeCut: the claimed crossing set must be exactly E(S, S-bar) and
/// have fewer than k edges. NegativeDisconnected: the claimed component
/// must have no outgoing edges and not cover all of G.
pub fn validate_certificate(g: &ExactGraph, k: u32, cert: &Certificate) -> Result<Verdict> {
    match cert {
        Certificate::Positive { edges } => {
            let edges = sorted_unique(edges);
            for &(a, b) in &edges {
                if !g.contains(a, b) {
                    return Ok(Verdict::Invalid(format!(
                        "certificate edge ({a}, {b}) is not in the graph"
                    )));
                }
            }
            let h = ExactGraph::from_edges(g.n(), &edges)?;
            if !g.is_k_edge_connected(k)? {
                return Ok(Verdict::Invalid(
                    "positive certificate for a graph that is not k-edge-connected".into(),
                ));
            }
            if !h.is_k_edge_connected(k)? {
                return Ok(Verdict::Invalid(
                    "certificate subgraph is not k-edge-connected".into(),
                ));
            }
            Ok(Verdict::Valid)
        }
        Certificate::NegativeCut { side, crossing } => {
            if side.is_empty() || side.len() == g.n() as usize {
                return Ok(Verdict::Invalid("cut side is not a proper subset".into()));
            }
            let actual = g.crossing_edges(side)?;
            let claimed = sorted_unique(crossing);
            if claimed != actual {
                return Ok(Verdict::Invalid(format!(
                    "claimed crossing set ({} edges) differs from the true one ({} edges)",
                    claimed.len(),
                    actual.len()
                )));
            }
            if claimed.len() >= k as usize {
                return Ok(Verdict::Invalid(format!(
                    "cut has {} edges, not below k = {k}",
                    claimed.len()
                )));
            }
            Ok(Verdict::Valid)
        }
        Certificate::NegativeDisconnected { component } => {
            if component.is_empty() || component.len() == g.n() as usize {
                return Ok(Verdict::Invalid(
                    "claimed component is not a proper subset".into(),
                ));
            }
            let out = g.crossing_edges(component)?;
            if !out.is_empty() {
                return Ok(Verdict::Invalid(format!(
                    "claimed component has {} outgoing edges",
                    out.len()
                )));
            }
            Ok(Verdict::Valid)
        }
    }
}
