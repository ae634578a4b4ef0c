use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::network::{EdgeKey, NetworkSpec};
use super::NetError;
use crate::galois::{Field, FieldElement};

/// `(source index, process index, out-edge)`.
pub type AlphaKey = (usize, usize, EdgeKey);
/// `(in-edge, out-edge)` with `head(in) == tail(out)`.
pub type BetaKey = (EdgeKey, EdgeKey);
/// `(in-edge, sink index, output index)`.
pub type EpsKey = (EdgeKey, usize, usize);

/// One complete set of local encoding kernels. Absent entries are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KernelSet {
    pub alpha: BTreeMap<AlphaKey, FieldElement>,
    pub beta: BTreeMap<BetaKey, FieldElement>,
    pub eps: BTreeMap<EpsKey, FieldElement>,
}

impl KernelSet {
    pub fn alpha(&self, source: usize, process: usize, edge: &EdgeKey) -> FieldElement {
        self.alpha
            .get(&(source, process, edge.clone()))
            .copied()
            .unwrap_or_default()
    }

    pub fn beta(&self, from: &EdgeKey, to: &EdgeKey) -> FieldElement {
        self.beta.get(&(from.clone(), to.clone())).copied().unwrap_or_default()
    }

    pub fn eps(&self, edge: &EdgeKey, sink: usize, output: usize) -> FieldElement {
        self.eps.get(&(edge.clone(), sink, output)).copied().unwrap_or_default()
    }

    /// Every kernel set to one at every admissible position.
    pub fn all_ones(net: &NetworkSpec) -> KernelSet {
        let mut k = KernelSet::default();
        for pos in admissible_positions(net) {
            k.set(pos, FieldElement::ONE);
        }
        k
    }

    /// Maps every kernel through `g`, e.g. into an extension field.
    pub fn map(&self, g: impl Fn(FieldElement) -> FieldElement) -> KernelSet {
        KernelSet {
            alpha: self.alpha.iter().map(|(k, &v)| (k.clone(), g(v))).collect(),
            beta: self.beta.iter().map(|(k, &v)| (k.clone(), g(v))).collect(),
            eps: self.eps.iter().map(|(k, &v)| (k.clone(), g(v))).collect(),
        }
    }

    pub fn set(&mut self, pos: KernelPos, v: FieldElement) {
        match pos {
            KernelPos::Alpha(k) => {
                self.alpha.insert(k, v);
            }
            KernelPos::Beta(k) => {
                self.beta.insert(k, v);
            }
            KernelPos::Eps(k) => {
                self.eps.insert(k, v);
            }
        }
    }

    pub fn get(&self, pos: &KernelPos) -> FieldElement {
        match pos {
            KernelPos::Alpha(k) => self.alpha.get(k),
            KernelPos::Beta(k) => self.beta.get(k),
            KernelPos::Eps(k) => self.eps.get(k),
        }
        .copied()
        .unwrap_or_default()
    }

    /// Entries whose key does not respect the network's adjacency.
    pub fn misplaced(&self, net: &NetworkSpec) -> Vec<KernelPos> {
        let allowed: std::collections::BTreeSet<KernelPos> = admissible_positions(net).into_iter().collect();
        let all = self
            .alpha
            .keys()
            .cloned()
            .map(KernelPos::Alpha)
            .chain(self.beta.keys().cloned().map(KernelPos::Beta))
            .chain(self.eps.keys().cloned().map(KernelPos::Eps));
        all.filter(|p| !allowed.contains(p)).collect()
    }
}

/// A kernel position, used to enumerate and address kernels uniformly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum KernelPos {
    Alpha(AlphaKey),
    Beta(BetaKey),
    Eps(EpsKey),
}

/// Every position where a kernel may be nonzero, in a fixed order: alphas,
/// then betas, then epsilons, each sorted by key.
pub fn admissible_positions(net: &NetworkSpec) -> Vec<KernelPos> {
    let edges = net.edge_keys();
    let mut out = Vec::new();
    for (i, src) in net.sources.iter().enumerate() {
        for l in 0..src.processes {
            for e in edges.iter().filter(|e| e.tail == src.node) {
                out.push(KernelPos::Alpha((i, l, e.clone())));
            }
        }
    }
    for a in &edges {
        for b in edges.iter().filter(|b| b.tail == a.head) {
            out.push(KernelPos::Beta((a.clone(), b.clone())));
        }
    }
    for e in &edges {
        for (j, sink) in net.sinks.iter().enumerate() {
            if e.head == sink.node {
                for o in 0..sink.outputs {
                    out.push(KernelPos::Eps((e.clone(), j, o)));
                }
            }
        }
    }
    out
}

/// Kernels fixed for all time, or a schedule `sets[k]` used at time
/// `start + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LekAssignment {
    Invariant(KernelSet),
    TimeIndexed { start: i64, sets: Vec<KernelSet> },
}

impl LekAssignment {
    /// Kernels in force at time `t`.
    pub fn at(&self, t: i64) -> Result<&KernelSet, NetError> {
        match self {
            LekAssignment::Invariant(k) => Ok(k),
            LekAssignment::TimeIndexed { start, sets } => {
                let idx = t - start;
                if idx < 0 || idx >= sets.len() as i64 {
                    return Err(NetError::WindowUnderspecified(t));
                }
                Ok(&sets[idx as usize])
            }
        }
    }

    pub fn is_invariant(&self) -> bool {
        matches!(self, LekAssignment::Invariant(_))
    }

    /// A schedule on `[from, to]` that repeats `period` with `period[k]`
    /// in force at every time `t` with `t mod len == k`.
    pub fn periodic(period: &[KernelSet], from: i64, to: i64) -> LekAssignment {
        let len = period.len() as i64;
        LekAssignment::TimeIndexed {
            start: from,
            sets: (from..=to)
                .map(|t| period[t.rem_euclid(len) as usize].clone())
                .collect(),
        }
    }

    pub fn map(&self, g: impl Fn(FieldElement) -> FieldElement + Copy) -> LekAssignment {
        match self {
            LekAssignment::Invariant(k) => LekAssignment::Invariant(k.map(g)),
            LekAssignment::TimeIndexed { start, sets } => LekAssignment::TimeIndexed {
                start: *start,
                sets: sets.iter().map(|k| k.map(g)).collect(),
            },
        }
    }
}

/// Requested shape of a random assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LekMode {
    Invariant,
    /// A fresh kernel set for each time in `[start, start + len)`.
    TimeIndexed {
        start: i64,
        len: usize,
    },
}

/// Deterministic generator for `(seed, stream)`; separate streams give
/// independent sequences for the same seed.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_set(net: &NetworkSpec, field: &Field, rng: &mut ChaCha8Rng) -> KernelSet {
    let mut k = KernelSet::default();
    for pos in admissible_positions(net) {
        k.set(pos, field.random(rng));
    }
    k
}

/// Uniformly random kernels at every admissible position, determined by
/// `seed`.
pub fn random_leks(net: &NetworkSpec, field: &Field, seed: u64, mode: LekMode) -> LekAssignment {
    let mut rng = seeded_rng(seed, 0);
    match mode {
        LekMode::Invariant => LekAssignment::Invariant(random_set(net, field, &mut rng)),
        LekMode::TimeIndexed { start, len } => LekAssignment::TimeIndexed {
            start,
            sets: (0..len).map(|_| random_set(net, field, &mut rng)).collect(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::network::{EdgeSpec, SinkSpec, SourceSpec};

    fn diamond() -> NetworkSpec {
        NetworkSpec {
            nodes: ["s", "a", "b", "t"].map(String::from).to_vec(),
            edges: vec![
                EdgeSpec::new("s", "a", 0, 1),
                EdgeSpec::new("s", "b", 0, 1),
                EdgeSpec::new("a", "t", 0, 1),
                EdgeSpec::new("b", "t", 0, 1),
            ],
            sources: vec![SourceSpec {
                node: "s".into(),
                processes: 2,
            }],
            sinks: vec![SinkSpec {
                node: "t".into(),
                outputs: 2,
                demands: vec![[0, 0], [0, 1]],
            }],
        }
    }

    #[test]
    fn admissible_counts() {
        let pos = admissible_positions(&diamond());
        let count = |f: fn(&KernelPos) -> bool| pos.iter().filter(|p| f(p)).count();
        assert_eq!(count(|p| matches!(p, KernelPos::Alpha(_))), 4);
        assert_eq!(count(|p| matches!(p, KernelPos::Beta(_))), 2);
        assert_eq!(count(|p| matches!(p, KernelPos::Eps(_))), 4);
    }

    #[test]
    fn same_seed_same_kernels() {
        let f = Field::new(2, 8, None).unwrap();
        let net = diamond();
        assert_eq!(
            random_leks(&net, &f, 7, LekMode::Invariant),
            random_leks(&net, &f, 7, LekMode::Invariant)
        );
        assert_ne!(
            random_leks(&net, &f, 7, LekMode::Invariant),
            random_leks(&net, &f, 8, LekMode::Invariant)
        );
    }

    #[test]
    fn gf2_assignment_is_complete() {
        let f = Field::new(2, 1, None).unwrap();
        let net = diamond();
        let LekAssignment::Invariant(k) = random_leks(&net, &f, 1, LekMode::Invariant) else {
            unreachable!()
        };
        assert_eq!(k.alpha.len() + k.beta.len() + k.eps.len(), 10);
        assert!(k.misplaced(&net).is_empty());
    }

    #[test]
    fn schedule_window() {
        let f = Field::new(3, 1, None).unwrap();
        let leks = random_leks(&diamond(), &f, 2, LekMode::TimeIndexed { start: -2, len: 5 });
        assert!(leks.at(-2).is_ok());
        assert!(leks.at(2).is_ok());
        assert_eq!(leks.at(3), Err(NetError::WindowUnderspecified(3)));
        let periodic = LekAssignment::periodic(&[KernelSet::default(), KernelSet::all_ones(&diamond())], -3, 3);
        assert_eq!(periodic.at(-3).unwrap(), periodic.at(1).unwrap());
        assert_ne!(periodic.at(-2).unwrap(), periodic.at(1).unwrap());
    }
}
