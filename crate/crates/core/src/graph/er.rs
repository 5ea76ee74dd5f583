use rand::Rng as _;

use super::DirectedGraph;
use crate::error::{Error, Result};
use crate::rng;

/// Directed Erdős–Rényi graph: every ordered pair (u, v), u != v, carries an
/// arc independently with probability `p`.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<DirectedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::UndefinedInput(format!("arc probability {p} outside [0, 1]")));
    }
    let mut rng = rng::from_seed(seed);
    let mut g = DirectedGraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                g.add_arc(u, v);
            }
        }
    }
    Ok(g)
}
