use serde::Serialize;

use super::FeasError;
use crate::galois::{Field, FieldElement, Poly, PolyMatrix};
use crate::netmodel::{NetworkSpec, TransferResult};

/// Per-sink demanded `[source, process]` pairs, 0-based.
pub type Demands = Vec<Vec<[usize; 2]>>;

pub fn demands_of(net: &NetworkSpec) -> Demands {
    net.sinks.iter().map(|s| s.demands.clone()).collect()
}

/// An undemanded source process that still reaches a sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub source: usize,
    pub sink: usize,
    pub process: usize,
}

/// Every `(source process, sink)` pair that is not demanded but whose
/// column of the transfer matrix is nonzero at some delay.
pub fn zero_interference(tr: &TransferResult, demands: &[Vec<[usize; 2]>]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (j, want) in demands.iter().enumerate() {
        let rows = tr.raw_sink_rows(j);
        for (i, &mu_i) in tr.mu_sizes.iter().enumerate() {
            for l in 0..mu_i {
                if want.contains(&[i, l]) {
                    continue;
                }
                let c = tr.column_of(i, l);
                if (0..rows.rows()).any(|r| !rows.get(r, c).is_zero()) {
                    out.push(Violation {
                        source: i,
                        sink: j,
                        process: l,
                    });
                }
            }
        }
    }
    out
}

/// The demanded-column submatrix at one sink and its determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinkSystem {
    pub sink: usize,
    /// Global columns of `M`, in demand order.
    pub columns: Vec<usize>,
    pub submatrix: PolyMatrix,
    pub det: Poly,
}

impl SinkSystem {
    pub fn invertible(&self) -> bool {
        !self.det.is_zero()
    }
}

/// Builds `M'_j(D)` for every sink from the raw transfer matrix (common
/// delay included) and takes its determinant over `GF(q)[D]`.
pub fn invertibility(tr: &TransferResult, demands: &[Vec<[usize; 2]>]) -> Result<Vec<SinkSystem>, FeasError> {
    if demands.len() != tr.nu_sizes.len() {
        return Err(FeasError::DemandShape {
            sinks: tr.nu_sizes.len(),
            given: demands.len(),
        });
    }
    demands
        .iter()
        .enumerate()
        .map(|(j, want)| {
            if want.len() != tr.nu_sizes[j] {
                return Err(FeasError::NonSquare {
                    sink: j,
                    outputs: tr.nu_sizes[j],
                    demanded: want.len(),
                });
            }
            for &[i, l] in want {
                if i >= tr.mu_sizes.len() || l >= tr.mu_sizes[i] {
                    return Err(FeasError::UnknownProcess {
                        sink: j,
                        src: i,
                        process: l,
                    });
                }
            }
            let columns: Vec<usize> = want.iter().map(|&[i, l]| tr.column_of(i, l)).collect();
            let rows = tr.raw_sink_rows(j);
            let all_rows: Vec<usize> = (0..rows.rows()).collect();
            let submatrix = rows.select(&all_rows, &columns);
            let det = submatrix.det();
            Ok(SinkSystem {
                sink: j,
                columns,
                submatrix,
                det,
            })
        })
        .collect()
}

/// `f(D)` together with `f(1)`; `(D - 1) | f` exactly when `f(1) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FProduct {
    pub f: Poly,
    pub f_at_one: FieldElement,
}

impl FProduct {
    pub fn divisible_by_d_minus_one(&self) -> bool {
        self.f_at_one.is_zero()
    }
}

pub fn compute_f(field: &Field, dets: &[Poly]) -> Result<FProduct, FeasError> {
    if let Some(j) = dets.iter().position(Poly::is_zero) {
        return Err(FeasError::ZeroDeterminant(j));
    }
    let f = dets.iter().fold(Poly::one(), |acc, d| acc.mul(field, d));
    let f_at_one = f.eval(field, FieldElement::ONE);
    Ok(FProduct { f, f_at_one })
}

/// Everything the non-transform conditions say about one code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
    pub sinks: Vec<SinkSystem>,
    /// `None` when some determinant vanishes.
    pub f: Option<FProduct>,
}

impl FeasibilityReport {
    pub fn zero_interference(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn invertible(&self) -> bool {
        self.sinks.iter().all(SinkSystem::invertible)
    }

    /// Feasible as a delay code (both conditions hold).
    pub fn feasible(&self) -> bool {
        self.zero_interference() && self.invertible()
    }

    /// Feasible and `f(1) != 0`, so some transform plan exists.
    pub fn transform_fixable(&self) -> bool {
        self.feasible() && self.f.as_ref().is_some_and(|f| !f.divisible_by_d_minus_one())
    }
}

pub fn analyze(tr: &TransferResult, demands: &[Vec<[usize; 2]>]) -> Result<FeasibilityReport, FeasError> {
    let violations = zero_interference(tr, demands);
    let sinks = invertibility(tr, demands)?;
    let dets: Vec<Poly> = sinks.iter().map(|s| s.det.clone()).collect();
    let f = compute_f(tr.field(), &dets).ok();
    Ok(FeasibilityReport { violations, sinks, f })
}
