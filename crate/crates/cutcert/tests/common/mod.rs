//! Shared generators for the integration suites.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cutcert::graph_sketch::EdgeUpdate;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    rng.next_u64() % bound
}

/// Erdos-Renyi style dynamic stream: each pair is inserted with probability
/// `p_num / 100`, and roughly `del_pct`% of the inserted edges are deleted
/// again later in the stream. Returns the update list and the surviving
/// edge set.
pub fn er_stream(
    rng: &mut ChaCha8Rng,
    n: u32,
    p_num: u64,
    del_pct: u64,
) -> (Vec<EdgeUpdate>, Vec<(u32, u32)>) {
    let mut inserted = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if below(rng, 100) < p_num {
                inserted.push((a, b));
            }
        }
    }
    // Shuffle insert order.
    for i in (1..inserted.len()).rev() {
        let j = below(rng, i as u64 + 1) as usize;
        inserted.swap(i, j);
    }
    let mut updates: Vec<EdgeUpdate> =
        inserted.iter().map(|&(a, b)| EdgeUpdate::Insert(a, b)).collect();
    let mut surviving = Vec::new();
    for &(a, b) in &inserted {
        if below(rng, 100) < del_pct {
            updates.push(EdgeUpdate::Delete(a, b));
        } else {
            surviving.push((a, b));
        }
    }
    // Interleave the deletions back into the tail half of the stream.
    for i in (inserted.len().max(1)..updates.len()).rev() {
        let lo = inserted.len() / 2;
        let j = lo + below(rng, (i - lo) as u64 + 1) as usize;
        if j < i {
            // Only swap if the deletion still follows its insertion.
            let (x, y) = match (updates[i], updates[j]) {
                (EdgeUpdate::Delete(a, b), EdgeUpdate::Insert(c, d)) => ((a, b), (c, d)),
                _ => continue,
            };
            if x != y {
                updates.swap(i, j);
            }
        }
    }
    surviving.sort_unstable();
    (updates, surviving)
}

/// A connected random graph on vertices `lo..=hi`: a random spanning tree
/// plus extra random edges.
pub fn connected_block(rng: &mut ChaCha8Rng, lo: u32, hi: u32, extra: usize) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for v in lo + 1..=hi {
        let u = lo + below(rng, (v - lo) as u64) as u32;
        edges.push((u.min(v), u.max(v)));
    }
    let size = hi - lo + 1;
    let mut attempts = 0;
    while attempts < extra * 4 && edges.len() < (extra + (size - 1) as usize) {
        attempts += 1;
        let a = lo + below(rng, size as u64) as u32;
        let b = lo + below(rng, size as u64) as u32;
        let e = (a.min(b), a.max(b));
        if a != b && !edges.contains(&e) {
            edges.push(e);
        }
    }
    edges
}
