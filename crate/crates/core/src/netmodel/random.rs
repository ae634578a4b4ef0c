use rand::Rng;

use super::leks::seeded_rng;
use super::network::{EdgeSpec, NetworkSpec, SinkSpec, SourceSpec};
use super::transfer::path_delay_bounds;

/// Shape of a random test network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomNetParams {
    pub nodes: usize,
    pub sources: usize,
    pub sinks: usize,
    /// Probability, in percent, that a forward node pair gets a link.
    pub edge_percent: u32,
    pub max_delay: u32,
    pub max_processes: usize,
    /// Upper bound on `d_max` of the result.
    pub max_spread: usize,
}

impl Default for RandomNetParams {
    fn default() -> Self {
        RandomNetParams {
            nodes: 8,
            sources: 2,
            sinks: 2,
            edge_percent: 35,
            max_delay: 2,
            max_processes: 2,
            max_spread: 4,
        }
    }
}

/// A random DAG over `v0 .. v{nodes-1}` (links only go forward). Sources
/// sit among the first nodes and sinks among the last; each sink demands
/// nothing. Networks whose path-delay spread exceeds `max_spread` are
/// redrawn, so the result is a deterministic function of `(params, seed)`.
///
/// # Panics
/// If `sources + sinks > nodes`.
pub fn random_network(params: &RandomNetParams, seed: u64) -> NetworkSpec {
    assert!(params.sources + params.sinks <= params.nodes, "too few nodes");
    let mut rng = seeded_rng(seed, 1);
    loop {
        let nodes: Vec<String> = (0..params.nodes).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for a in 0..params.nodes {
            for b in a + 1..params.nodes {
                let mut index = 0;
                while rng.gen_range(0..100) < params.edge_percent && index < 2 {
                    let delay = rng.gen_range(1..=params.max_delay.max(1));
                    edges.push(EdgeSpec::new(&nodes[a], &nodes[b], index, delay));
                    index += 1;
                }
            }
        }
        let sources = (0..params.sources)
            .map(|i| SourceSpec {
                node: nodes[i].clone(),
                processes: rng.gen_range(1..=params.max_processes.max(1)),
            })
            .collect();
        let sinks = (0..params.sinks)
            .map(|j| SinkSpec {
                node: nodes[params.nodes - params.sinks + j].clone(),
                outputs: rng.gen_range(1..=params.max_processes.max(1)),
                demands: vec![],
            })
            .collect();
        let net = NetworkSpec {
            nodes,
            edges,
            sources,
            sinks,
        };
        let (lo, hi) = path_delay_bounds(&net);
        if hi - lo <= params.max_spread {
            return net;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let p = RandomNetParams::default();
        let a = random_network(&p, 5);
        assert_eq!(a, random_network(&p, 5));
        assert!(a.validate().is_ok());
        let (lo, hi) = path_delay_bounds(&a);
        assert!(hi - lo <= p.max_spread);
    }
}
