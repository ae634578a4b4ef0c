use super::leks::LekAssignment;
use super::network::NetworkSpec;
use super::normalize::{normalize_delays, Normalized};
use super::simulate::{simulate, TimeSeries};
use super::transfer::{transfer_matrix, TransferResult};
use super::NetError;
use crate::galois::Field;

/// A validated network with kernels, already reduced to unit delays.
///
/// Kernels are given against the original links; they are carried onto
/// the unit-delay chains on construction.
#[derive(Debug, Clone)]
pub struct Channel {
    pub original: NetworkSpec,
    pub normalized: Normalized,
    pub field: Field,
    /// Kernels on the unit-delay network.
    pub leks: LekAssignment,
}

impl Channel {
    pub fn new(net: &NetworkSpec, field: &Field, leks: &LekAssignment) -> Result<Channel, NetError> {
        net.validate()?;
        let sets: Vec<_> = match leks {
            LekAssignment::Invariant(k) => vec![k],
            LekAssignment::TimeIndexed { sets, .. } => sets.iter().collect(),
        };
        if let Some(bad) = sets.iter().flat_map(|k| k.misplaced(net)).next() {
            return Err(NetError::MisplacedKernel(format!("{bad:?}")));
        }
        let normalized = normalize_delays(net);
        let leks = normalized.map_leks(leks);
        Ok(Channel {
            original: net.clone(),
            normalized,
            field: field.clone(),
            leks,
        })
    }

    pub fn net(&self) -> &NetworkSpec {
        &self.normalized.net
    }

    /// Transfer matrix; requires time-invariant kernels.
    pub fn transfer(&self) -> Result<TransferResult, NetError> {
        match &self.leks {
            LekAssignment::Invariant(k) => transfer_matrix(self.net(), &self.field, k),
            LekAssignment::TimeIndexed { .. } => Err(NetError::TimeVaryingKernels),
        }
    }

    pub fn simulate(&self, inputs: &[TimeSeries], start: i64, len: usize) -> Result<Vec<TimeSeries>, NetError> {
        simulate(self.net(), &self.field, &self.leks, inputs, start, len)
    }

    /// Same network with other kernels (given against the original links).
    pub fn with_leks(&self, leks: &LekAssignment) -> Result<Channel, NetError> {
        Channel::new(&self.original, &self.field, leks)
    }
}
