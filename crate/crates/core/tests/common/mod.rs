//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use tnc_core::alignment::{AlignmentInstance, Category};
use tnc_core::galois::FieldElement;
use tnc_core::netmodel::{seeded_rng, EdgeSpec, NetworkSpec, SinkSpec, SourceSpec};

/// Three unicast sessions where each connected pair `(i, j)` gets its own
/// gadget: a single link out of `S_i` that splits into a short and a long
/// branch meeting again at `D_j`. Unconnected pairs have min-cut zero and
/// every session has min-cut one.
pub fn gadget_network(connected: &[(usize, usize)]) -> NetworkSpec {
    let mut nodes: Vec<String> = ["S1", "S2", "S3", "D1", "D2", "D3"].map(String::from).to_vec();
    let mut edges = Vec::new();
    for &(i, j) in connected {
        let g = format!("g{}{}", i + 1, j + 1);
        nodes.push(g.clone());
        edges.push(EdgeSpec::new(&format!("S{}", i + 1), &g, 0, 1));
        edges.push(EdgeSpec::new(&g, &format!("D{}", j + 1), 0, 1));
        let long = 2 + (i + 2 * j) % 3;
        let mut prev = g.clone();
        for k in 0..long - 1 {
            let h = format!("h{}{}_{k}", i + 1, j + 1);
            nodes.push(h.clone());
            edges.push(EdgeSpec::new(&prev, &h, 0, 1));
            prev = h;
        }
        edges.push(EdgeSpec::new(&prev, &format!("D{}", j + 1), 0, 1));
    }
    NetworkSpec {
        nodes,
        edges,
        sources: (1..=3)
            .map(|i| SourceSpec {
                node: format!("S{i}"),
                processes: 1,
            })
            .collect(),
        sinks: (1..=3)
            .map(|j| SinkSpec {
                node: format!("D{j}"),
                outputs: 1,
                demands: vec![[j - 1, 0]],
            })
            .collect(),
    }
}

/// Gadget network whose cut cross pairs are exactly `cut`.
pub fn network_without(cut: &[(usize, usize)]) -> NetworkSpec {
    let connected: Vec<(usize, usize)> = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|p| !cut.contains(p))
        .collect();
    gadget_network(&connected)
}

pub fn category_network(cat: Category) -> NetworkSpec {
    network_without(cat.zero_pairs())
}

/// Random information symbols for each session, in the network's
/// labelling.
pub fn random_symbols(inst: &AlignmentInstance, seed: u64) -> Vec<Vec<FieldElement>> {
    let mut rng = seeded_rng(seed, 77);
    let widths = inst.widths();
    let mut x = vec![Vec::new(); 3];
    for k in 0..3 {
        x[inst.roles[k]] = (0..widths[k]).map(|_| inst.field().random(&mut rng)).collect();
    }
    x
}
