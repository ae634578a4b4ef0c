use super::check::{check_alignment, AlignmentReport};
use super::instance::{build_with, classify, AlignmentInstance};
use super::AlignError;
use crate::galois::{Field, FieldElement};
use crate::netmodel::{admissible_positions, seeded_rng, Channel, KernelSet, LekAssignment, NetworkSpec};

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub leks: LekAssignment,
    pub instance: AlignmentInstance,
    pub report: AlignmentReport,
    /// Attempts used, including the successful one.
    pub attempts: usize,
}

/// Random search for time-invariant kernels (and random precoder entries
/// where the category uses them) that pass [`check_alignment`].
///
/// Attempt `k` draws everything from the generator keyed by
/// `(seed, k)`, so any attempt can be replayed on its own. Running out of
/// budget says nothing about infeasibility.
pub fn align_search(
    net: &NetworkSpec,
    field: &Field,
    n: usize,
    alpha: Option<FieldElement>,
    seed: u64,
    budget: usize,
) -> Result<SearchOutcome, AlignError> {
    let class = classify(net)?;
    let block = 2 * n + 1;
    let p = field.characteristic();
    if (block as u64).is_multiple_of(p) {
        return Err(AlignError::CharacteristicDividesBlock { p, block });
    }
    let positions = admissible_positions(net);
    for attempt in 0..budget {
        let mut rng = seeded_rng(seed, attempt as u64);
        let mut kernels = KernelSet::default();
        for pos in &positions {
            kernels.set(pos.clone(), field.random(&mut rng));
        }
        let leks = LekAssignment::Invariant(kernels);
        let channel = Channel::new(net, field, &leks)?;
        let instance = match build_with(&channel, &class, n, alpha, &mut rng) {
            Ok(inst) => inst,
            Err(AlignError::SingularBlock { .. }) => continue,
            Err(e) => return Err(e),
        };
        let report = check_alignment(&instance);
        if report.passes() {
            return Ok(SearchOutcome {
                leks,
                instance,
                report,
                attempts: attempt + 1,
            });
        }
    }
    Err(AlignError::NotFound { seed, attempts: budget })
}
