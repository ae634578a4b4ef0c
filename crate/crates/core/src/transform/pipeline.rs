use super::plan::TransformPlan;
use super::TransformError;
use crate::galois::{FieldElement, FqMatrix};
use crate::netmodel::{convolve, path_delay_bounds, simulate, Channel, TimeSeries, TransferResult};

/// One source's (or sink's) symbols for a block: entry `t` is the vector
/// of generation `t`, for `t` in `0..n`.
pub type Generations = Vec<Vec<FieldElement>>;

/// Newest generation on top.
fn column_of(plan: &TransformPlan, gens: &[Vec<FieldElement>], width: usize) -> FqMatrix {
    let n = gens.len();
    FqMatrix::from_fn(plan.field(), n * width, 1, |r, _| gens[n - 1 - r / width][r % width])
}

fn unstack(v: &FqMatrix, n: usize, width: usize) -> Generations {
    (0..n)
        .map(|t| (0..width).map(|l| v.get((n - 1 - t) * width + l, 0)).collect())
        .collect()
}

fn check_gens(plan: &TransformPlan, gens: &[Vec<FieldElement>], width: usize) -> Result<(), TransformError> {
    if gens.len() != plan.n {
        return Err(TransformError::InputShape(format!(
            "{} generations for block length {}",
            gens.len(),
            plan.n
        )));
    }
    if gens.iter().any(|g| g.len() != width) {
        return Err(TransformError::InputShape(format!(
            "generation vectors must have {width} symbols"
        )));
    }
    Ok(())
}

/// Transforms a block with `Q_width` and prepends the cyclic prefix.
///
/// The result starts at time `-d_max`; time `tau` carries transformed
/// generation `tau mod n`.
pub fn cp_encode(plan: &TransformPlan, gens: &[Vec<FieldElement>], width: usize) -> Result<TimeSeries, TransformError> {
    check_gens(plan, gens, width)?;
    let x = plan.q(width).mul(&column_of(plan, gens, width));
    let xt = unstack(&x, plan.n, width);
    let n = plan.n as i64;
    let d = plan.d_max as i64;
    let frames = (-d..n).map(|tau| xt[tau.rem_euclid(n) as usize].clone()).collect();
    Ok(TimeSeries::new(-d, frames))
}

/// Drops the prefix from a received window of `n + d_max` frames and
/// undoes the transform with `Q_width^-1`.
pub fn cp_decode(plan: &TransformPlan, y: &TimeSeries, width: usize) -> Result<Generations, TransformError> {
    let expected = plan.slots();
    if y.frames.len() != expected {
        return Err(TransformError::WindowMismatch {
            expected,
            got: y.frames.len(),
        });
    }
    let body = &y.frames[plan.d_max..];
    check_gens(plan, body, width)?;
    let v = plan.q_inv(width).mul(&column_of(plan, body, width));
    Ok(unstack(&v, plan.n, width))
}

/// Everything one block produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRun {
    /// Per source, starting at `-d_max`.
    pub transmitted: Vec<TimeSeries>,
    /// Per sink, re-timed by `d'_min` so frame `k` belongs to time
    /// `k - d_max`.
    pub received: Vec<TimeSeries>,
    /// Per sink, after removing the prefix and the transform.
    pub decoded: Vec<Generations>,
}

fn encode_all(
    plan: &TransformPlan,
    inputs: &[Generations],
    widths: &[usize],
) -> Result<Vec<TimeSeries>, TransformError> {
    if inputs.len() != widths.len() {
        return Err(TransformError::InputShape(format!(
            "{} input blocks for {} sources",
            inputs.len(),
            widths.len()
        )));
    }
    inputs.iter().zip(widths).map(|(g, &w)| cp_encode(plan, g, w)).collect()
}

fn finish(
    plan: &TransformPlan,
    transmitted: Vec<TimeSeries>,
    raw_out: Vec<TimeSeries>,
    d_prime_min: usize,
    nu: &[usize],
) -> Result<BlockRun, TransformError> {
    let received: Vec<TimeSeries> = raw_out
        .into_iter()
        .map(|s| TimeSeries::new(-(plan.d_max as i64), s.frames[d_prime_min..].to_vec()))
        .collect();
    let decoded = received
        .iter()
        .zip(nu)
        .map(|(y, &w)| cp_decode(plan, y, w))
        .collect::<Result<_, _>>()?;
    Ok(BlockRun {
        transmitted,
        received,
        decoded,
    })
}

/// Sends one block through the network by exact simulation.
///
/// The simulation covers `n + d_max + d'_min` slots from `-d_max`, so the
/// last transmitted frame reaches every sink; the first `d'_min` outputs
/// (the common path delay) are dropped before decoding. Kernels are lifted
/// into the plan's field.
pub fn run_block(channel: &Channel, plan: &TransformPlan, inputs: &[Generations]) -> Result<BlockRun, TransformError> {
    if channel.field != *plan.base() {
        return Err(TransformError::FieldMismatch);
    }
    let net = channel.net();
    let (lo, hi) = path_delay_bounds(net);
    if hi - lo > plan.d_max {
        return Err(TransformError::PrefixTooShort {
            needed: hi - lo,
            have: plan.d_max,
        });
    }
    let mu: Vec<usize> = net.sources.iter().map(|s| s.processes).collect();
    let nu: Vec<usize> = net.sinks.iter().map(|s| s.outputs).collect();
    let transmitted = encode_all(plan, inputs, &mu)?;
    let leks = channel.leks.map(|c| plan.lift(c));
    let out = simulate(
        net,
        plan.field(),
        &leks,
        &transmitted,
        -(plan.d_max as i64),
        plan.slots() + lo,
    )?;
    finish(plan, transmitted, out, lo, &nu)
}

/// Same as [`run_block`] but the channel is the convolution with the raw
/// transfer matrix, so no topology is needed.
pub fn run_block_matrix(
    tr: &TransferResult,
    plan: &TransformPlan,
    inputs: &[Generations],
) -> Result<BlockRun, TransformError> {
    if tr.field() != plan.base() {
        return Err(TransformError::FieldMismatch);
    }
    if tr.d_max > plan.d_max {
        return Err(TransformError::PrefixTooShort {
            needed: tr.d_max,
            have: plan.d_max,
        });
    }
    let transmitted = encode_all(plan, inputs, &tr.mu_sizes)?;
    let raw = plan.lift_poly_matrix(&tr.raw);
    let out = convolve(
        &raw,
        &tr.mu_sizes,
        &tr.nu_sizes,
        &transmitted,
        -(plan.d_max as i64),
        plan.slots() + tr.d_prime_min,
    );
    finish(plan, transmitted, out, tr.d_prime_min, &tr.nu_sizes)
}

/// `M(alpha^(n-1-t))` over the plan's field for every generation `t`.
pub fn generation_matrices(tr: &TransferResult, plan: &TransformPlan) -> Vec<FqMatrix> {
    (0..plan.n).map(|t| plan.eval_generation(&tr.m, t)).collect()
}

/// What every sink should decode: `Y_j^(t) = M_j(alpha^(n-1-t)) X^(t)`.
pub fn predicted(
    tr: &TransferResult,
    plan: &TransformPlan,
    inputs: &[Generations],
) -> Result<Vec<Generations>, TransformError> {
    if inputs.len() != tr.mu_sizes.len() {
        return Err(TransformError::InputShape(format!(
            "{} input blocks for {} sources",
            inputs.len(),
            tr.mu_sizes.len()
        )));
    }
    for (g, &w) in inputs.iter().zip(&tr.mu_sizes) {
        check_gens(plan, g, w)?;
    }
    let field = plan.field();
    let hats = generation_matrices(tr, plan);
    let mut out: Vec<Generations> = tr.nu_sizes.iter().map(|_| Vec::with_capacity(plan.n)).collect();
    for (t, hat) in hats.iter().enumerate() {
        let x: Vec<FieldElement> = inputs.iter().flat_map(|g| g[t].iter().copied()).collect();
        let y = hat.mul(&FqMatrix::from_fn(field, x.len(), 1, |r, _| x[r]));
        let mut row = 0;
        for (j, &w) in tr.nu_sizes.iter().enumerate() {
            out[j].push((0..w).map(|o| y.get(row + o, 0)).collect());
            row += w;
        }
    }
    Ok(out)
}
