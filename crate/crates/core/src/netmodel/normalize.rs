use std::collections::BTreeMap;

use super::leks::{KernelSet, LekAssignment};
use super::network::{EdgeKey, EdgeSpec, NetworkSpec};
use crate::galois::FieldElement;

/// A unit-delay network together with the chain of unit links that
/// replaced each original link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub net: NetworkSpec,
    pub chains: BTreeMap<EdgeKey, Vec<EdgeKey>>,
}

fn dummy(e: &EdgeSpec, k: u32) -> String {
    format!("{}->{}#{}/{}", e.tail, e.head, e.index, k)
}

/// Replaces every link of delay `d > 1` by `d` unit links through `d - 1`
/// dummy nodes. Unit-delay networks come back unchanged.
pub fn normalize_delays(net: &NetworkSpec) -> Normalized {
    let mut out = net.clone();
    out.edges.clear();
    let mut chains = BTreeMap::new();
    for e in &net.edges {
        if e.delay <= 1 {
            out.edges.push(e.clone());
            chains.insert(e.key(), vec![e.key()]);
            continue;
        }
        let mut stops = vec![e.tail.clone()];
        for k in 1..e.delay {
            let name = dummy(e, k);
            out.nodes.push(name.clone());
            stops.push(name);
        }
        stops.push(e.head.clone());
        let mut chain = Vec::new();
        for (k, w) in stops.windows(2).enumerate() {
            let index = if k == 0 { e.index } else { 0 };
            let link = EdgeSpec::new(&w[0], &w[1], index, 1);
            chain.push(link.key());
            out.edges.push(link);
        }
        chains.insert(e.key(), chain);
    }
    Normalized { net: out, chains }
}

impl Normalized {
    /// Carries kernels of the original network over to the unit-delay one;
    /// links inside a chain forward with kernel one.
    pub fn map_kernels(&self, k: &KernelSet) -> KernelSet {
        let first = |e: &EdgeKey| self.chains[e].first().cloned().expect("nonempty chain");
        let last = |e: &EdgeKey| self.chains[e].last().cloned().expect("nonempty chain");
        let mut out = KernelSet::default();
        for ((i, l, e), &v) in &k.alpha {
            out.alpha.insert((*i, *l, first(e)), v);
        }
        for ((a, b), &v) in &k.beta {
            out.beta.insert((last(a), first(b)), v);
        }
        for ((e, j, o), &v) in &k.eps {
            out.eps.insert((last(e), *j, *o), v);
        }
        for chain in self.chains.values() {
            for w in chain.windows(2) {
                out.beta.insert((w[0].clone(), w[1].clone()), FieldElement::ONE);
            }
        }
        out
    }

    pub fn map_leks(&self, leks: &LekAssignment) -> LekAssignment {
        match leks {
            LekAssignment::Invariant(k) => LekAssignment::Invariant(self.map_kernels(k)),
            LekAssignment::TimeIndexed { start, sets } => LekAssignment::TimeIndexed {
                start: *start,
                sets: sets.iter().map(|k| self.map_kernels(k)).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::network::{SinkSpec, SourceSpec};

    fn edge_net(delay: u32) -> NetworkSpec {
        NetworkSpec {
            nodes: vec!["s".into(), "t".into()],
            edges: vec![EdgeSpec::new("s", "t", 0, delay)],
            sources: vec![SourceSpec {
                node: "s".into(),
                processes: 1,
            }],
            sinks: vec![SinkSpec {
                node: "t".into(),
                outputs: 1,
                demands: vec![[0, 0]],
            }],
        }
    }

    #[test]
    fn unit_network_unchanged() {
        let net = edge_net(1);
        assert_eq!(normalize_delays(&net).net, net);
    }

    #[test]
    fn delay_three_becomes_chain() {
        let n = normalize_delays(&edge_net(3));
        assert_eq!(n.net.edges.len(), 3);
        assert_eq!(n.net.nodes.len(), 4);
        assert!(n.net.is_unit_delay());
        assert!(n.net.validate().is_ok());
        assert_eq!(n.chains[&EdgeKey::new("s", "t", 0)].len(), 3);
    }
}
