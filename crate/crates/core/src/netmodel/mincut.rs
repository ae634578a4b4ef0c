use std::collections::{BTreeMap, VecDeque};

use super::network::NetworkSpec;

/// Maximum number of link-disjoint paths between two nodes (unit link
/// capacities, Edmonds-Karp). Identical endpoints give `usize::MAX`.
pub fn node_min_cut(net: &NetworkSpec, from: &str, to: &str) -> usize {
    if from == to {
        return usize::MAX;
    }
    let idx: BTreeMap<&str, usize> = net.nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let (Some(&s), Some(&t)) = (idx.get(from), idx.get(to)) else {
        return 0;
    };
    let n = net.nodes.len();
    // arcs: (head, capacity, reverse arc index)
    let mut adj: Vec<Vec<(usize, i64, usize)>> = vec![Vec::new(); n];
    for e in &net.edges {
        let (u, v) = (idx[e.tail.as_str()], idx[e.head.as_str()]);
        let ru = adj[v].len();
        let rv = adj[u].len();
        adj[u].push((v, 1, ru));
        adj[v].push((u, 0, rv));
    }
    let mut flow = 0;
    loop {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut queue = VecDeque::from([s]);
        let mut seen = vec![false; n];
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for (k, &(v, cap, _)) in adj[u].iter().enumerate() {
                if cap > 0 && !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, k));
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            return flow;
        }
        let mut v = t;
        while let Some((u, k)) = prev[v] {
            let rev = adj[u][k].2;
            adj[u][k].1 -= 1;
            adj[v][rev].1 += 1;
            v = u;
        }
        flow += 1;
    }
}

/// Min-cut from source `i`'s node to sink `j`'s node.
///
/// # Panics
/// If either index is out of range.
pub fn min_cut(net: &NetworkSpec, source: usize, sink: usize) -> usize {
    node_min_cut(net, &net.sources[source].node, &net.sinks[sink].node)
}
