use serde::Serialize;

use super::instance::{check_shape, AlignmentInstance};
use super::{AlignError, Category};
use crate::galois::{Field, FieldElement, FqMatrix};
use crate::netmodel::{path_delay_bounds, simulate, Channel, LekAssignment, NetError, TimeSeries};
use crate::transform::{TransformError, TransformPlan};

/// Block matrices of one `2n + 1` block under time-varying kernels.
///
/// `m[i][j]` maps source `i`'s stacked block to sink `j`'s: row `r` is
/// output generation `2n - r`, column `c` input generation `2n - c`, with
/// the cyclic prefix folded in.
#[derive(Debug, Clone)]
pub struct TvInstance {
    pub n: usize,
    /// Field, prefix length and `alpha` of the block.
    pub plan: TransformPlan,
    pub d_prime_min: usize,
    pub m: [[FqMatrix; 3]; 3],
}

impl TvInstance {
    pub fn block_len(&self) -> usize {
        2 * self.n + 1
    }

    pub fn field(&self) -> &Field {
        self.plan.field()
    }

    /// Whether `(r, c)` may be nonzero: input generation at most `d_max`
    /// steps (cyclically) before the output generation.
    pub fn in_band(&self, r: usize, c: usize) -> bool {
        let big = self.block_len();
        (c + big - r) % big <= self.plan.d_max
    }

    /// Nonzero entries outside the band, as `(i, j, r, c)`.
    pub fn band_violations(&self) -> Vec<(usize, usize, usize, usize)> {
        let big = self.block_len();
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                for r in 0..big {
                    for c in 0..big {
                        if !self.in_band(r, c) && !self.m[i][j].get(r, c).is_zero() {
                            out.push((i, j, r, c));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Kernels in force at time `t`, falling back to `t -+ N` outside the
/// given schedule.
fn schedule_for(leks: &LekAssignment, plan: &TransformPlan, from: i64, to: i64) -> Result<LekAssignment, NetError> {
    let lift = |k: &crate::netmodel::KernelSet| k.map(|c| plan.lift(c));
    match leks {
        LekAssignment::Invariant(k) => Ok(LekAssignment::Invariant(lift(k))),
        LekAssignment::TimeIndexed { .. } => {
            let big = plan.n as i64;
            let sets = (from..=to)
                .map(|t| {
                    leks.at(t)
                        .or_else(|e| if t >= big { leks.at(t - big) } else { Err(e) })
                        .or_else(|e| if t < 0 { leks.at(t + big) } else { Err(e) })
                        .map(lift)
                })
                .collect::<Result<_, _>>()?;
            Ok(LekAssignment::TimeIndexed { start: from, sets })
        }
    }
}

/// Builds the nine block matrices column by column from impulse
/// responses of the exact simulation.
///
/// `plan.n` is the block length `2n + 1` and `plan.d_max` the prefix.
/// Kernel sets are looked up on the unit-delay network at the times they
/// are used, from `-d_max` to `2n + d'_min`; a time missing from the
/// schedule falls back to the same time shifted by one block.
pub fn build_tv(channel: &Channel, plan: &TransformPlan) -> Result<TvInstance, AlignError> {
    check_shape(&channel.original)?;
    if plan.n.is_multiple_of(2) {
        return Err(AlignError::Shape(format!("block length {} is even", plan.n)));
    }
    if channel.field != *plan.base() {
        return Err(TransformError::FieldMismatch.into());
    }
    let net = channel.net();
    let (lo, hi) = path_delay_bounds(net);
    if hi - lo > plan.d_max {
        return Err(TransformError::PrefixTooShort {
            needed: hi - lo,
            have: plan.d_max,
        }
        .into());
    }
    let big = plan.n;
    let prefix = plan.d_max as i64;
    let len = big + plan.d_max + lo;
    let sched = schedule_for(&channel.leks, plan, -prefix, len as i64 - prefix - 1)?;
    let field = plan.field();
    let mut m: [[FqMatrix; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| FqMatrix::zeros(field, big, big)));
    for i in 0..3 {
        for c in 0..big {
            let g = (big - 1 - c) as i64;
            let frames: Vec<Vec<FieldElement>> = (-prefix..big as i64)
                .map(|t| {
                    vec![if t == g || t == g - big as i64 {
                        FieldElement::ONE
                    } else {
                        FieldElement::ZERO
                    }]
                })
                .collect();
            let inputs: Vec<TimeSeries> = (0..3)
                .map(|s| {
                    if s == i {
                        TimeSeries::new(-prefix, frames.clone())
                    } else {
                        TimeSeries::zeros(-prefix, 0, 1)
                    }
                })
                .collect();
            let out = simulate(net, field, &sched, &inputs, -prefix, len)?;
            for (j, y) in out.iter().enumerate() {
                for r in 0..big {
                    let t = (big - 1 - r + lo) as i64;
                    m[i][j].set(r, c, y.symbol(t, 0));
                }
            }
        }
    }
    Ok(TvInstance {
        n: (big - 1) / 2,
        plan: plan.clone(),
        d_prime_min: lo,
        m,
    })
}

/// Values for the free variables of the time-varying construction:
/// `V1 = theta`, `V2 = M23^-1 M13 V1 A`, `V3 = M32^-1 M12 V1 B`, and the
/// alignment target `T1 V1 A = V1 B C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TvAssignment {
    pub theta: FqMatrix,
    pub a: FqMatrix,
    pub b: FqMatrix,
    pub c: FqMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TvVerdict {
    /// Entries `(i, j)` where `T1 V1 A - V1 B C` is nonzero.
    pub violations: Vec<(usize, usize)>,
    /// `[V1 | M11^-1 M21 V2]`, `[M12^-1 M22 V2 | V1]`, `[M13^-1 M33 V3 | V1]`.
    pub ranks: [usize; 3],
    pub required: usize,
    /// `span(M21 V2) = span(M31 V3)`, `M32 V3` inside `span(M12 V1)`,
    /// `M23 V2` inside `span(M13 V1)`.
    pub spans: [bool; 3],
}

impl TvVerdict {
    pub fn aligned(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.aligned() && self.ranks.iter().all(|&r| r == self.required) && self.spans.iter().all(|&s| s)
    }
}

fn inside(a: &FqMatrix, b: &FqMatrix) -> bool {
    b.hcat(a).rank() == b.rank()
}

/// Checks the alignment equation and the rank conditions for one
/// assignment. The span relations at the sinks are tested directly.
pub fn check_tv(inst: &TvInstance, asg: &TvAssignment) -> Result<TvVerdict, AlignError> {
    let big = inst.block_len();
    let n = inst.n;
    let shapes = [
        ("theta", &asg.theta, big, n + 1),
        ("A", &asg.a, n + 1, n),
        ("B", &asg.b, n + 1, n),
        ("C", &asg.c, n, n),
    ];
    for (name, mat, rows, cols) in shapes {
        if mat.rows() != rows || mat.cols() != cols {
            return Err(AlignError::InputShape(format!("{name} must be {rows} x {cols}")));
        }
    }
    let mut inv: Vec<Vec<FqMatrix>> = Vec::with_capacity(3);
    for i in 0..3 {
        let mut row = Vec::with_capacity(3);
        for j in 0..3 {
            row.push(
                inst.m[i][j]
                    .inverse()
                    .ok_or(AlignError::SingularBlock { src: i, sink: j })?,
            );
        }
        inv.push(row);
    }
    // 1-based accessors.
    let m = |i: usize, j: usize| &inst.m[i - 1][j - 1];
    let mi = |i: usize, j: usize| &inv[i - 1][j - 1];
    let v1 = &asg.theta;
    let v2 = mi(2, 3).mul(m(1, 3)).mul(v1).mul(&asg.a);
    let v3 = mi(3, 2).mul(m(1, 2)).mul(v1).mul(&asg.b);
    let t1 = mi(1, 2)
        .mul(m(3, 2))
        .mul(mi(3, 1))
        .mul(m(2, 1))
        .mul(mi(2, 3))
        .mul(m(1, 3));
    let g = t1.mul(v1).mul(&asg.a).sub(&v1.mul(&asg.b).mul(&asg.c));
    let violations = (0..big)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| !g.get(r, c).is_zero())
        .collect();
    let ranks = [
        v1.hcat(&mi(1, 1).mul(m(2, 1)).mul(&v2)).rank(),
        mi(1, 2).mul(m(2, 2)).mul(&v2).hcat(v1).rank(),
        mi(1, 3).mul(m(3, 3)).mul(&v3).hcat(v1).rank(),
    ];
    let (s21, s31) = (m(2, 1).mul(&v2), m(3, 1).mul(&v3));
    let spans = [
        inside(&s21, &s31) && inside(&s31, &s21),
        inside(&m(3, 2).mul(&v3), &m(1, 2).mul(v1)),
        inside(&m(2, 3).mul(&v2), &m(1, 3).mul(v1)),
    ];
    Ok(TvVerdict {
        violations,
        ranks,
        required: big,
        spans,
    })
}

/// The assignment that turns the time-varying construction into the
/// time-invariant one: `theta = Q_1 V1`, `A` and `B` select the first and
/// last `n` columns, `C = I`.
///
/// Needs a full-category instance in the network's own labelling.
pub fn invariant_assignment(inst: &AlignmentInstance) -> Result<TvAssignment, AlignError> {
    if inst.category != Category::Full || inst.roles != [0, 1, 2] {
        return Err(AlignError::Shape(
            "needs a full-category instance without relabelling".into(),
        ));
    }
    let f = inst.field();
    let n = inst.n;
    let one = |hit: bool| if hit { FieldElement::ONE } else { FieldElement::ZERO };
    Ok(TvAssignment {
        theta: inst.plan.q(1).mul(&inst.v[0]),
        a: FqMatrix::from_fn(f, n + 1, n, |r, c| one(r == c)),
        b: FqMatrix::from_fn(f, n + 1, n, |r, c| one(r == c + 1)),
        c: FqMatrix::identity(f, n),
    })
}
