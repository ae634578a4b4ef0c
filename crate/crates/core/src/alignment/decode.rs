use std::fmt;

use serde::Serialize;

use super::diag;
use super::instance::AlignmentInstance;
use super::{AlignError, Category};
use crate::galois::{FieldElement, FqMatrix};
use crate::transform::{run_block, Generations};

/// `symbols` information symbols every `slots` time slots, kept as an
/// unreduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rate {
    pub symbols: usize,
    pub slots: usize,
}

impl Rate {
    pub fn new(symbols: usize, slots: usize) -> Rate {
        Rate { symbols, slots }
    }

    /// Compares as rationals.
    pub fn same_value(&self, other: &Rate) -> bool {
        self.symbols * other.slots == other.symbols * self.slots
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.symbols, self.slots)
    }
}

/// What one block delivered, indexed by session in the network's own
/// labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovery {
    pub recovered: Vec<Vec<FieldElement>>,
    /// Symbols per generation of the block.
    pub throughput: Vec<Rate>,
    /// Symbols per time slot, counting the prefix.
    pub per_channel_use: Vec<Rate>,
    /// `2n + 1 + d_max`.
    pub channel_uses: usize,
}

/// The matrix each sink role inverts; the wanted symbols are the leading
/// coordinates of the solution.
fn decode_systems(inst: &AlignmentInstance) -> [FqMatrix; 3] {
    let f = inst.field();
    let mv = |i: usize, j: usize, k: usize| diag::apply(f, &inst.mhat[i - 1][j - 1], &inst.v[k - 1]);
    match inst.category {
        Category::Full => [
            mv(1, 1, 1).hcat(&mv(2, 1, 2)),
            mv(2, 2, 2).hcat(&mv(1, 2, 1)),
            mv(3, 3, 3).hcat(&mv(1, 3, 1)),
        ],
        Category::Cat1 => [
            mv(1, 1, 1).hcat(&mv(3, 1, 3)),
            mv(2, 2, 2).hcat(&mv(1, 2, 1)),
            mv(3, 3, 3).hcat(&mv(1, 3, 1)),
        ],
        Category::Cat2 => [
            mv(1, 1, 1),
            mv(2, 2, 2).hcat(&mv(3, 2, 3)),
            mv(3, 3, 3).hcat(&mv(1, 3, 1)),
        ],
        Category::Cat3 => [
            mv(1, 1, 1).hcat(&mv(2, 1, 2)),
            mv(2, 2, 2).hcat(&mv(3, 2, 3)),
            mv(3, 3, 3).hcat(&mv(1, 3, 1)),
        ],
        Category::Cat4 => [
            mv(1, 1, 1).hcat(&mv(2, 1, 2)),
            mv(2, 2, 2).hcat(&mv(1, 2, 1)),
            mv(3, 3, 3),
        ],
        Category::TimeVarying => unreachable!("transform-domain instances are never time-varying"),
    }
}

/// Sends one block through the network and decodes every sink.
///
/// Session `i` contributes `V_i x_i`, transmitted with the transform and
/// its cyclic prefix; the network is simulated exactly. Each sink solves
/// its square (or tall, full column rank) system and keeps the leading
/// coordinates, which are its own symbols.
pub fn encode_decode(inst: &AlignmentInstance, x: &[Vec<FieldElement>]) -> Result<Recovery, AlignError> {
    let big = inst.block_len();
    let widths = inst.widths();
    if x.len() != 3 {
        return Err(AlignError::InputShape(format!(
            "{} input vectors for 3 sessions",
            x.len()
        )));
    }
    let f = inst.field();
    let mut inputs: Vec<Generations> = vec![Vec::new(); 3];
    for k in 0..3 {
        let xi = &x[inst.roles[k]];
        if xi.len() != widths[k] {
            return Err(AlignError::InputShape(format!(
                "session {} sends {} symbols per block, got {}",
                inst.roles[k],
                widths[k],
                xi.len()
            )));
        }
        let s = inst.v[k].mul(&FqMatrix::from_fn(f, xi.len(), 1, |r, _| xi[r]));
        inputs[inst.roles[k]] = (0..big).map(|t| vec![s.get(big - 1 - t, 0)]).collect();
    }
    let run = run_block(&inst.channel, &inst.plan, &inputs)?;
    let systems = decode_systems(inst);
    let mut recovered = vec![Vec::new(); 3];
    for (k, g) in systems.iter().enumerate() {
        let sink = inst.roles[k];
        let dec = &run.decoded[sink];
        let y = FqMatrix::from_fn(f, big, 1, |r, _| dec[big - 1 - r][0]);
        if g.rank() != g.cols() {
            return Err(AlignError::SingularDecodeSystem { sink });
        }
        let sol = g.solve(&y).ok_or(AlignError::SingularDecodeSystem { sink })?;
        recovered[sink] = (0..widths[k]).map(|r| sol.get(r, 0)).collect();
    }
    let uses = inst.plan.slots();
    let mut throughput = vec![Rate::new(0, big); 3];
    let mut per_channel_use = vec![Rate::new(0, uses); 3];
    for k in 0..3 {
        throughput[inst.roles[k]] = Rate::new(widths[k], big);
        per_channel_use[inst.roles[k]] = Rate::new(widths[k], uses);
    }
    Ok(Recovery {
        recovered,
        throughput,
        per_channel_use,
        channel_uses: uses,
    })
}
