//! Simultaneous-message simulation: each vertex acts as a player that only
//! sees its incident edges, hashes them into its own sub-sketch fragments
//! using the shared (seed-derived) layouts, and sends one message to a
//! referee. The referee merges the fragments into a zeroed sketch; by
//! linearity the result is bit-identical to ingesting the whole stream
//! centrally, so the usual decoder runs unchanged on the merged state.

use crate::graph_sketch::{edge_index, ConnSketch, EdgeUpdate};
use crate::par::par_map;
use crate::supportfind::SubSketch;
use crate::wire::Cursor;
use crate::{Error, Result};

/// One player-to-referee message: the player's vertex id and its sub-sketch
/// fragments for every instance (forest rounds first, then stacks),
/// serialized back to back.
#[derive(Clone, Debug)]
pub struct PlayerMessage {
    pub vertex: u32,
    pub payload: Vec<u8>,
}

impl PlayerMessage {
    pub fn bits(&self) -> u64 {
        self.payload.len() as u64 * 8
    }
}

#[derive(Debug)]
pub struct SimulationOutcome {
    pub sketch: ConnSketch,
    pub messages: Vec<PlayerMessage>,
}

impl SimulationOutcome {
    pub fn total_message_bits(&self) -> u64 {
        self.messages.iter().map(PlayerMessage::bits).sum()
    }

    pub fn max_message_bits(&self) -> u64 {
        self.messages.iter().map(PlayerMessage::bits).max().unwrap_or(0)
    }
}

/// Runs the one-round protocol on the net edge multiset.
pub fn simulate(n: u32, k: u32, seed: u64, updates: &[EdgeUpdate]) -> Result<SimulationOutcome> {
    simulate_with_sparsity(n, k, seed, updates, crate::supportfind::DEFAULT_W)
}

pub fn simulate_with_sparsity(
    n: u32,
    k: u32,
    seed: u64,
    updates: &[EdgeUpdate],
    w: usize,
) -> Result<SimulationOutcome> {
    // The referee's zeroed sketch doubles as the shared public-randomness
    // layout: every player derives the identical hashes from the seed.
    let mut referee = ConnSketch::with_sparsity_multiplier(n, k, seed, w)?;
    let layouts: Vec<_> = referee.instances().map(|i| i.layout().clone()).collect();

    // Validate and normalize the whole stream up front.
    let mut prepared = Vec::with_capacity(updates.len());
    for &up in updates {
        let (u, v) = up.endpoints();
        let coord = edge_index(n, u, v)?;
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        prepared.push((a, b, coord, up.sign()));
    }

    let players: Vec<u32> = (1..=n).collect();
    let messages = par_map(&players, |&vertex| -> Result<PlayerMessage> {
        let mut payload = Vec::new();
        for layout in &layouts {
            let mut frag = layout.new_sub();
            for &(a, b, coord, sign) in &prepared {
                // A player only sees its incident edges; the lower endpoint
                // contributes +sign, the upper -sign.
                if vertex == a {
                    frag.update(layout, coord, sign)?;
                } else if vertex == b {
                    frag.update(layout, coord, -sign)?;
                }
            }
            frag.write_to(&mut payload);
        }
        Ok(PlayerMessage { vertex, payload })
    });
    let messages = messages.into_iter().collect::<Result<Vec<_>>>()?;

    for msg in &messages {
        let mut cur = Cursor::new(&msg.payload);
        let frags = layouts
            .iter()
            .map(|layout| SubSketch::read_from(&mut cur, layout.params().levels()))
            .collect::<Result<Vec<_>>>()?;
        if !cur.is_empty() {
            return Err(Error::SimulationBug(format!(
                "player {} sent trailing bytes",
                msg.vertex
            )));
        }
        referee.merge_player_fragments(msg.vertex, &frags)?;
    }
    Ok(SimulationOutcome {
        sketch: referee,
        messages,
    })
}
