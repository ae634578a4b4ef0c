use super::leks::KernelSet;
use super::network::NetworkSpec;
use super::NetError;
use crate::galois::{Field, FqMatrix, PolyMatrix};

/// Network transfer matrix with its delay bookkeeping.
///
/// `raw` is the full `M(D)` including the common delay; `m` is
/// `raw / D^d_prime_min`, whose entries have degree at most `d_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferResult {
    pub raw: PolyMatrix,
    pub m: PolyMatrix,
    pub d_prime_min: usize,
    pub d_prime_max: usize,
    pub d_max: usize,
    /// `mu_i` per source.
    pub mu_sizes: Vec<usize>,
    /// `nu_j` per sink.
    pub nu_sizes: Vec<usize>,
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect()
}

impl TransferResult {
    /// Wraps a raw matrix with explicit path-delay extremes.
    pub fn with_delays(
        raw: PolyMatrix,
        d_prime_min: usize,
        d_prime_max: usize,
        mu_sizes: Vec<usize>,
        nu_sizes: Vec<usize>,
    ) -> Result<TransferResult, NetError> {
        if mu_sizes.iter().sum::<usize>() != raw.cols() || nu_sizes.iter().sum::<usize>() != raw.rows() {
            return Err(NetError::BlockSizes);
        }
        if d_prime_max < d_prime_min {
            return Err(NetError::DelayBounds {
                d_prime_min,
                d_prime_max,
            });
        }
        let m = raw.unshift(d_prime_min).ok_or(NetError::DelayBounds {
            d_prime_min,
            d_prime_max,
        })?;
        let d_max = d_prime_max - d_prime_min;
        if m.max_degree().is_some_and(|d| d > d_max) {
            return Err(NetError::DelayBounds {
                d_prime_min,
                d_prime_max,
            });
        }
        Ok(TransferResult {
            raw,
            m,
            d_prime_min,
            d_prime_max,
            d_max,
            mu_sizes,
            nu_sizes,
        })
    }

    /// Wraps a raw matrix whose delay extremes are read off its own
    /// support (lowest and highest exponent present). Used when only the
    /// matrix, not the topology, is known.
    pub fn from_raw(raw: PolyMatrix, mu_sizes: Vec<usize>, nu_sizes: Vec<usize>) -> Result<TransferResult, NetError> {
        let lo = raw.min_valuation().unwrap_or(0);
        let hi = raw.max_degree().unwrap_or(0);
        TransferResult::with_delays(raw, lo, hi, mu_sizes, nu_sizes)
    }

    pub fn field(&self) -> &Field {
        self.m.field()
    }

    pub fn sources(&self) -> usize {
        self.mu_sizes.len()
    }

    pub fn sinks(&self) -> usize {
        self.nu_sizes.len()
    }

    pub fn source_offsets(&self) -> Vec<usize> {
        offsets(&self.mu_sizes)
    }

    pub fn sink_offsets(&self) -> Vec<usize> {
        offsets(&self.nu_sizes)
    }

    /// Normalized block `M_ij(D)` from source `i` to sink `j`
    /// (`nu_j x mu_i`).
    pub fn block(&self, i: usize, j: usize) -> PolyMatrix {
        let (r, c) = (self.sink_offsets()[j], self.source_offsets()[i]);
        self.m.block(r, c, self.nu_sizes[j], self.mu_sizes[i])
    }

    /// Normalized rows `M_j(D)` of sink `j` (`nu_j x mu`).
    pub fn sink_rows(&self, j: usize) -> PolyMatrix {
        self.m.block(self.sink_offsets()[j], 0, self.nu_sizes[j], self.m.cols())
    }

    /// Raw rows of sink `j`.
    pub fn raw_sink_rows(&self, j: usize) -> PolyMatrix {
        self.raw
            .block(self.sink_offsets()[j], 0, self.nu_sizes[j], self.raw.cols())
    }

    /// Global column of process `l` of source `i`.
    pub fn column_of(&self, i: usize, l: usize) -> usize {
        self.source_offsets()[i] + l
    }
}

/// Dense per-time-step matrices of one kernel set on a unit-delay network:
/// `Z(t+1) = kt Z(t) + at X(t)` and `Y(t) = b Z(t)`.
#[derive(Debug, Clone)]
pub(crate) struct DenseKernels {
    pub kt: FqMatrix,
    pub at: FqMatrix,
    pub b: FqMatrix,
}

impl DenseKernels {
    pub fn new(net: &NetworkSpec, field: &Field, k: &KernelSet) -> DenseKernels {
        let edges = net.edge_keys();
        let ne = edges.len();
        let src_off = net.source_offsets();
        let sink_off = net.sink_offsets();
        let pos = |key: &super::network::EdgeKey| edges.binary_search(key).ok();
        let mut kt = FqMatrix::zeros(field, ne, ne);
        for ((from, to), &v) in &k.beta {
            if let (Some(a), Some(b)) = (pos(from), pos(to)) {
                if from.head == to.tail {
                    kt.set(b, a, v);
                }
            }
        }
        let mut at = FqMatrix::zeros(field, ne, net.mu());
        for ((i, l, e), &v) in &k.alpha {
            if let (Some(ei), Some(src)) = (pos(e), net.sources.get(*i)) {
                if *l < src.processes && e.tail == src.node {
                    at.set(ei, src_off[*i] + l, v);
                }
            }
        }
        let mut b = FqMatrix::zeros(field, net.nu(), ne);
        for ((e, j, o), &v) in &k.eps {
            if let (Some(ei), Some(sink)) = (pos(e), net.sinks.get(*j)) {
                if *o < sink.outputs && e.head == sink.node {
                    b.set(sink_off[*j] + o, ei, v);
                }
            }
        }
        DenseKernels { kt, at, b }
    }
}

/// Extremes of source-to-sink path delays over all connected pairs;
/// `(0, 0)` when no sink is reachable.
pub fn path_delay_bounds(net: &NetworkSpec) -> (usize, usize) {
    let mut lo = usize::MAX;
    let mut hi = 0;
    for src in &net.sources {
        let reach = net.path_delays(&src.node);
        for sink in &net.sinks {
            if sink.node == src.node {
                continue;
            }
            if let Some(&(a, b)) = reach.get(&sink.node) {
                lo = lo.min(a as usize);
                hi = hi.max(b as usize);
            }
        }
    }
    if lo == usize::MAX {
        (0, 0)
    } else {
        (lo, hi)
    }
}

/// `M(D) = sum_k D^(k+1) B (K^T)^k A^T` for time-invariant kernels on a
/// unit-delay network; the series stops once `(K^T)^k A^T` vanishes.
pub fn transfer_matrix(net: &NetworkSpec, field: &Field, kernels: &KernelSet) -> Result<TransferResult, NetError> {
    net.validate()?;
    if !net.is_unit_delay() {
        return Err(NetError::NotUnitDelay);
    }
    let dense = DenseKernels::new(net, field, kernels);
    let mut coeffs = vec![FqMatrix::zeros(field, net.nu(), net.mu())];
    let mut p = dense.at.clone();
    while !p.is_zero() {
        coeffs.push(dense.b.mul(&p));
        p = dense.kt.mul(&p);
    }
    let raw = PolyMatrix::from_coeff_matrices(field, net.nu(), net.mu(), &coeffs);
    let (lo, hi) = path_delay_bounds(net);
    TransferResult::with_delays(
        raw,
        lo,
        hi,
        net.sources.iter().map(|s| s.processes).collect(),
        net.sinks.iter().map(|s| s.outputs).collect(),
    )
}
