use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::NetError;

/// Identifies a link `(tail, head, index)`; parallel links differ in
/// `index`. The derived order is the canonical edge order used for every
/// matrix layout.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeKey {
    pub tail: String,
    pub head: String,
    pub index: u32,
}

impl EdgeKey {
    pub fn new(tail: impl Into<String>, head: impl Into<String>, index: u32) -> EdgeKey {
        EdgeKey {
            tail: tail.into(),
            head: head.into(),
            index,
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.tail, self.head, self.index)
    }
}

fn unit_delay() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub tail: String,
    pub head: String,
    #[serde(default)]
    pub index: u32,
    #[serde(default = "unit_delay")]
    pub delay: u32,
}

impl EdgeSpec {
    pub fn new(tail: &str, head: &str, index: u32, delay: u32) -> EdgeSpec {
        EdgeSpec {
            tail: tail.into(),
            head: head.into(),
            index,
            delay,
        }
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey::new(self.tail.clone(), self.head.clone(), self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub node: String,
    pub processes: usize,
}

/// A sink node with `outputs` output processes and the source processes
/// it demands, as `[source index, process index]` pairs (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SinkSpec {
    pub node: String,
    pub outputs: usize,
    #[serde(default)]
    pub demands: Vec<[usize; 2]>,
}

/// Directed acyclic network with integer link delays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    pub sources: Vec<SourceSpec>,
    pub sinks: Vec<SinkSpec>,
}

impl NetworkSpec {
    /// Total number of source processes.
    pub fn mu(&self) -> usize {
        self.sources.iter().map(|s| s.processes).sum()
    }

    /// Total number of sink outputs.
    pub fn nu(&self) -> usize {
        self.sinks.iter().map(|s| s.outputs).sum()
    }

    /// Column offset of each source's block in `M`.
    pub fn source_offsets(&self) -> Vec<usize> {
        offsets(self.sources.iter().map(|s| s.processes))
    }

    /// Row offset of each sink's block in `M`.
    pub fn sink_offsets(&self) -> Vec<usize> {
        offsets(self.sinks.iter().map(|s| s.outputs))
    }

    /// Edges in canonical `(tail, head, index)` order.
    pub fn sorted_edges(&self) -> Vec<&EdgeSpec> {
        let mut edges: Vec<&EdgeSpec> = self.edges.iter().collect();
        edges.sort_by(|a, b| (&a.tail, &a.head, a.index).cmp(&(&b.tail, &b.head, b.index)));
        edges
    }

    pub fn edge_keys(&self) -> Vec<EdgeKey> {
        self.sorted_edges().into_iter().map(EdgeSpec::key).collect()
    }

    pub fn is_unit_delay(&self) -> bool {
        self.edges.iter().all(|e| e.delay == 1)
    }

    /// Every structural problem, in a stable order. Empty means valid.
    pub fn problems(&self) -> Vec<NetError> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for n in &self.nodes {
            if !seen.insert(n.as_str()) {
                out.push(NetError::DuplicateNode(n.clone()));
            }
        }
        let known = |n: &str| seen.contains(n);
        let mut keys = BTreeSet::new();
        for e in &self.edges {
            for end in [&e.tail, &e.head] {
                if !known(end) {
                    out.push(NetError::UnknownNode(end.clone()));
                }
            }
            if e.delay == 0 {
                out.push(NetError::ZeroDelay(e.key()));
            }
            if !keys.insert(e.key()) {
                out.push(NetError::DuplicateEdge(e.key()));
            }
        }
        for s in &self.sources {
            if !known(&s.node) {
                out.push(NetError::UnknownNode(s.node.clone()));
            }
        }
        for (j, sink) in self.sinks.iter().enumerate() {
            if !known(&sink.node) {
                out.push(NetError::UnknownNode(sink.node.clone()));
            }
            for &[i, l] in &sink.demands {
                match self.sources.get(i) {
                    Some(src) if l < src.processes => {
                        if src.node == sink.node {
                            out.push(NetError::SourceIsSink { src: i, sink: j });
                        }
                    }
                    _ => out.push(NetError::DanglingDemand {
                        sink: j,
                        src: i,
                        process: l,
                    }),
                }
            }
        }
        if out.is_empty() {
            if let Err(e) = self.topological_order() {
                out.push(e);
            }
        }
        out
    }

    /// Checks every invariant and returns a topological order of the
    /// nodes (ties broken by declaration order).
    pub fn validate(&self) -> Result<Vec<String>, NetError> {
        match self.problems().into_iter().next() {
            Some(e) => Err(e),
            None => self.topological_order(),
        }
    }

    fn topological_order(&self) -> Result<Vec<String>, NetError> {
        let pos: BTreeMap<&str, usize> = self.nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut indeg = vec![0usize; self.nodes.len()];
        let mut succ = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            let (t, h) = (pos[e.tail.as_str()], pos[e.head.as_str()]);
            succ[t].push(h);
            indeg[h] += 1;
        }
        let mut ready: BTreeSet<usize> = (0..self.nodes.len()).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(self.nodes[v].clone());
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if order.len() < self.nodes.len() {
            let stuck = (0..self.nodes.len())
                .filter(|&i| indeg[i] > 0)
                .map(|i| self.nodes[i].clone())
                .collect();
            return Err(NetError::CycleDetected(stuck));
        }
        Ok(order)
    }

    /// Shortest and longest path delays (sum of link delays) from node
    /// `from` to every node reachable from it. Assumes validity.
    pub(crate) fn path_delays(&self, from: &str) -> BTreeMap<String, (u64, u64)> {
        let order = self.topological_order().expect("validated network");
        let mut out: BTreeMap<String, (u64, u64)> = BTreeMap::new();
        out.insert(from.to_string(), (0, 0));
        let mut by_tail: BTreeMap<&str, Vec<&EdgeSpec>> = BTreeMap::new();
        for e in &self.edges {
            by_tail.entry(e.tail.as_str()).or_default().push(e);
        }
        for v in &order {
            let Some(&(lo, hi)) = out.get(v) else {
                continue;
            };
            for e in by_tail.get(v.as_str()).into_iter().flatten() {
                let d = u64::from(e.delay);
                let entry = out.entry(e.head.clone()).or_insert((lo + d, hi + d));
                entry.0 = entry.0.min(lo + d);
                entry.1 = entry.1.max(hi + d);
            }
        }
        out
    }
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .map(|s| {
            let o = acc;
            acc += s;
            o
        })
        .collect()
}
