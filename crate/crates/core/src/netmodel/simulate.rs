use std::collections::BTreeMap;

use super::leks::LekAssignment;
use super::network::NetworkSpec;
use super::transfer::DenseKernels;
use super::NetError;
use crate::galois::{Field, FieldElement, FqMatrix, PolyMatrix};

/// Symbol vectors at consecutive times `start, start + 1, ...`. Times
/// outside the stored range read as zero vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeSeries {
    pub start: i64,
    pub frames: Vec<Vec<FieldElement>>,
}

impl TimeSeries {
    pub fn new(start: i64, frames: Vec<Vec<FieldElement>>) -> TimeSeries {
        TimeSeries { start, frames }
    }

    pub fn zeros(start: i64, len: usize, width: usize) -> TimeSeries {
        TimeSeries {
            start,
            frames: vec![vec![FieldElement::ZERO; width]; len],
        }
    }

    /// A single unit symbol on coordinate `l` at time `t`.
    pub fn impulse(t: i64, width: usize, l: usize) -> TimeSeries {
        let mut frame = vec![FieldElement::ZERO; width];
        frame[l] = FieldElement::ONE;
        TimeSeries {
            start: t,
            frames: vec![frame],
        }
    }

    pub fn end(&self) -> i64 {
        self.start + self.frames.len() as i64
    }

    pub fn get(&self, t: i64) -> Option<&[FieldElement]> {
        let idx = t - self.start;
        if idx < 0 {
            return None;
        }
        self.frames.get(idx as usize).map(Vec::as_slice)
    }

    /// Symbol `l` at time `t`, zero outside the stored range.
    pub fn symbol(&self, t: i64, l: usize) -> FieldElement {
        self.get(t).map_or(FieldElement::ZERO, |f| f[l])
    }
}

fn column(field: &Field, v: &[FieldElement]) -> FqMatrix {
    FqMatrix::from_fn(field, v.len(), 1, |r, _| v[r])
}

/// Runs the link recursion on a unit-delay network.
///
/// All link registers are zero at time `start`. At each `t` in
/// `[start, start + len)` the sinks read `Y(t) = eps(t) Z(t)` and the
/// links update `Z(t+1) = alpha(t) X(t) + beta(t) Z(t)`, using the kernels
/// in force at `t`. `inputs[i]` holds source `i`'s `mu_i`-vectors; missing
/// times are zero. Returns one series per sink over the same window.
pub fn simulate(
    net: &NetworkSpec,
    field: &Field,
    leks: &LekAssignment,
    inputs: &[TimeSeries],
    start: i64,
    len: usize,
) -> Result<Vec<TimeSeries>, NetError> {
    if !net.is_unit_delay() {
        return Err(NetError::NotUnitDelay);
    }
    if inputs.len() != net.sources.len() {
        return Err(NetError::InputShape(format!(
            "{} input series for {} sources",
            inputs.len(),
            net.sources.len()
        )));
    }
    for (i, (series, src)) in inputs.iter().zip(&net.sources).enumerate() {
        if series.frames.iter().any(|f| f.len() != src.processes) {
            return Err(NetError::InputShape(format!(
                "source {i} frames must have {} symbols",
                src.processes
            )));
        }
    }
    let ne = net.edges.len();
    let sink_off = net.sink_offsets();
    let src_off = net.source_offsets();
    let mut cache: BTreeMap<*const super::leks::KernelSet, DenseKernels> = BTreeMap::new();
    let mut z = FqMatrix::zeros(field, ne, 1);
    let mut outputs: Vec<TimeSeries> = net
        .sinks
        .iter()
        .map(|_| TimeSeries::new(start, Vec::with_capacity(len)))
        .collect();
    for step in 0..len {
        let t = start + step as i64;
        let k = leks.at(t)?;
        let dense = cache
            .entry(k as *const _)
            .or_insert_with(|| DenseKernels::new(net, field, k));
        let y = dense.b.mul(&z);
        for (j, sink) in net.sinks.iter().enumerate() {
            outputs[j]
                .frames
                .push((0..sink.outputs).map(|o| y.get(sink_off[j] + o, 0)).collect());
        }
        let mut x = vec![FieldElement::ZERO; net.mu()];
        for (i, src) in net.sources.iter().enumerate() {
            for l in 0..src.processes {
                x[src_off[i] + l] = inputs[i].symbol(t, l);
            }
        }
        z = dense.kt.mul(&z).add(&dense.at.mul(&column(field, &x)));
    }
    Ok(outputs)
}

/// Time-domain action of a transfer matrix: `Y(t) = sum_d M^(d) X(t - d)`
/// over `[start, start + len)`, splitting rows and columns into the given
/// sink and source blocks. This is the channel a polynomial matrix
/// describes, independent of any topology.
pub fn convolve(
    m: &PolyMatrix,
    mu_sizes: &[usize],
    nu_sizes: &[usize],
    inputs: &[TimeSeries],
    start: i64,
    len: usize,
) -> Vec<TimeSeries> {
    let field = m.field();
    let coeffs = m.coeff_matrices();
    let mu: usize = mu_sizes.iter().sum();
    let mut src_off = Vec::new();
    let mut acc = 0;
    for &s in mu_sizes {
        src_off.push(acc);
        acc += s;
    }
    let mut outputs: Vec<TimeSeries> = nu_sizes
        .iter()
        .map(|_| TimeSeries::new(start, Vec::with_capacity(len)))
        .collect();
    for step in 0..len {
        let t = start + step as i64;
        let mut y = FqMatrix::zeros(field, m.rows(), 1);
        for (d, md) in coeffs.iter().enumerate() {
            let mut x = vec![FieldElement::ZERO; mu];
            for (i, &size) in mu_sizes.iter().enumerate() {
                for l in 0..size {
                    x[src_off[i] + l] = inputs[i].symbol(t - d as i64, l);
                }
            }
            y = y.add(&md.mul(&column(field, &x)));
        }
        let mut row = 0;
        for (j, &size) in nu_sizes.iter().enumerate() {
            outputs[j].frames.push((0..size).map(|o| y.get(row + o, 0)).collect());
            row += size;
        }
    }
    outputs
}
