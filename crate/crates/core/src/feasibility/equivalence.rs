use super::conditions::{analyze, Demands};
use super::search::{find_plan, SearchLimits};
use super::FeasError;
use crate::galois::{FieldElement, FqMatrix};
use crate::netmodel::TransferResult;
use crate::transform::{generation_matrices, reassemble, TransformPlan};

/// Solvability of one sink at one generation of a transform code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationRow {
    pub sink: usize,
    pub t: usize,
    /// Determinant of the demanded columns of `M_j(alpha^(n-1-t))`.
    pub det: FieldElement,
    /// Undemanded columns vanish at this generation.
    pub zero_interference: bool,
}

impl GenerationRow {
    pub fn solvable(&self) -> bool {
        self.zero_interference && !self.det.is_zero()
    }
}

fn demanded_columns(tr: &TransferResult, demands: &Demands, j: usize) -> Vec<usize> {
    demands[j].iter().map(|&[i, l]| tr.column_of(i, l)).collect()
}

fn sink_block(tr: &TransferResult, m: &FqMatrix, j: usize) -> FqMatrix {
    let off = tr.sink_offsets()[j];
    m.block(off, 0, tr.nu_sizes[j], m.cols())
}

/// Per sink and generation: determinant and interference of the
/// instantaneous system the transform produces. Demands must be square.
pub fn generation_report(
    tr: &TransferResult,
    demands: &Demands,
    plan: &TransformPlan,
) -> Result<Vec<GenerationRow>, FeasError> {
    super::conditions::invertibility(tr, demands)?;
    let hats = generation_matrices(tr, plan);
    let mut rows = Vec::new();
    for j in 0..tr.nu_sizes.len() {
        let cols = demanded_columns(tr, demands, j);
        for (t, hat) in hats.iter().enumerate() {
            let blk = sink_block(tr, hat, j);
            let zero_interference = (0..blk.cols())
                .filter(|c| !cols.contains(c))
                .all(|c| (0..blk.rows()).all(|r| blk.get(r, c).is_zero()));
            let sub = FqMatrix::from_fn(plan.field(), blk.rows(), cols.len(), |r, c| blk.get(r, cols[c]));
            rows.push(GenerationRow {
                sink: j,
                t,
                det: sub.det(),
                zero_interference,
            });
        }
    }
    Ok(rows)
}

/// Both directions of the transform / non-transform equivalence, checked
/// on one code and one plan.
#[derive(Debug, Clone)]
pub struct Equivalence {
    pub nontransform_feasible: bool,
    pub f_at_one_nonzero: bool,
    /// Result of the plan search when the code is feasible with
    /// `f(1) != 0`.
    pub found_plan: Option<Result<TransformPlan, FeasError>>,
    /// Every generation of the given plan is solvable.
    pub transform_feasible: bool,
    /// `det M'_j(1) != 0` at every sink.
    pub dets_at_one_nonzero: bool,
    /// Columns that vanish at every generation vanish at every delay of
    /// the time-domain matrix rebuilt from the generations.
    pub zero_columns_lift: bool,
    /// The rebuilt time-domain coefficients equal those of `M(D)`.
    pub reassembly_exact: bool,
}

impl Equivalence {
    pub fn forward_holds(&self) -> bool {
        !(self.nontransform_feasible && self.f_at_one_nonzero) || matches!(self.found_plan, Some(Ok(_)))
    }

    pub fn backward_holds(&self) -> bool {
        !self.transform_feasible || (self.dets_at_one_nonzero && self.zero_columns_lift && self.reassembly_exact)
    }
}

pub fn nontransform_equivalence(
    tr: &TransferResult,
    demands: &Demands,
    plan: &TransformPlan,
) -> Result<Equivalence, FeasError> {
    let report = analyze(tr, demands)?;
    let f_at_one_nonzero = report.f.as_ref().is_some_and(|f| !f.divisible_by_d_minus_one());
    let nontransform_feasible = report.feasible();
    let found_plan = (nontransform_feasible && f_at_one_nonzero).then(|| {
        let f = &report.f.as_ref().expect("dets are nonzero").f;
        find_plan(f, tr.field(), tr.d_max + 1, SearchLimits::default())
    });

    let rows = generation_report(tr, demands, plan)?;
    let transform_feasible = rows.iter().all(GenerationRow::solvable);

    let dets_at_one_nonzero = report
        .sinks
        .iter()
        .all(|s| !s.submatrix.eval(FieldElement::ONE).det().is_zero());

    // Generation n-1 sits at alpha^0 = 1, so reassembling all generations
    // gives back the circulant whose first block row lists M^(0..n).
    let hats = generation_matrices(tr, plan);
    let realized = reassemble(&hats, plan);
    let (nu, mu) = (tr.m.rows(), tr.m.cols());
    let coeffs: Vec<FqMatrix> = (0..plan.n).map(|d| realized.block(0, d * mu, nu, mu)).collect();
    let reassembly_exact = coeffs.iter().enumerate().all(|(d, a)| {
        let want = tr.m.coeff_matrix(d);
        *a == FqMatrix::from_fn(plan.field(), nu, mu, |r, c| plan.lift(want.get(r, c)))
    });
    let col_zero = |m: &FqMatrix, rows: std::ops::Range<usize>, c: usize| rows.clone().all(|r| m.get(r, c).is_zero());
    let offs = tr.sink_offsets();
    let zero_columns_lift = (0..tr.nu_sizes.len()).all(|j| {
        let rows = offs[j]..offs[j] + tr.nu_sizes[j];
        (0..mu).all(|c| {
            !hats.iter().all(|h| col_zero(h, rows.clone(), c)) || coeffs.iter().all(|a| col_zero(a, rows.clone(), c))
        })
    });
    Ok(Equivalence {
        nontransform_feasible,
        f_at_one_nonzero,
        found_plan,
        transform_feasible,
        dets_at_one_nonzero,
        zero_columns_lift,
        reassembly_exact,
    })
}
