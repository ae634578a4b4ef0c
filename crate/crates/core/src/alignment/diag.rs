//! Entrywise algebra on diagonal matrices stored as their diagonals.

use crate::galois::{Field, FieldElement, FqMatrix};

pub(crate) type Diag = Vec<FieldElement>;

pub(crate) fn mul(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> Diag {
    a.iter().zip(b).map(|(&x, &y)| field.mul(x, y)).collect()
}

pub(crate) fn inv(field: &Field, a: &[FieldElement]) -> Option<Diag> {
    a.iter().map(|&x| field.inv(x)).collect()
}

/// `diag(d) * m`.
pub(crate) fn apply(field: &Field, d: &[FieldElement], m: &FqMatrix) -> FqMatrix {
    FqMatrix::from_fn(field, m.rows(), m.cols(), |r, c| field.mul(d[r], m.get(r, c)))
}

/// Columns `d * t^k` for `k` in `from..to`.
pub(crate) fn krylov(field: &Field, d: &[FieldElement], t: &[FieldElement], from: u64, to: u64) -> FqMatrix {
    FqMatrix::from_fn(field, d.len(), (to - from) as usize, |r, c| {
        field.mul(d[r], field.pow(t[r], from + c as u64))
    })
}

pub(crate) fn columns(m: &FqMatrix, from: usize, count: usize) -> FqMatrix {
    m.block(0, from, m.rows(), count)
}
