use super::TransformError;
use crate::galois::{FieldElement, FqMatrix};

/// Recovers the demanded symbols of one generation at one sink.
///
/// `hat` is the sink's `nu_j x mu` slice of `M(alpha^(n-1-t))` and
/// `demanded` lists the global source columns it wants, in output order.
/// The columns outside `demanded` must be zero, and the demanded
/// columns must form an invertible square matrix.
pub fn instantaneous_solve(
    hat: &FqMatrix,
    demanded: &[usize],
    y: &[FieldElement],
    t: usize,
) -> Result<Vec<FieldElement>, TransformError> {
    if demanded.len() != hat.rows() || y.len() != hat.rows() {
        return Err(TransformError::NonSquare {
            rows: hat.rows(),
            cols: demanded.len(),
        });
    }
    let leak = (0..hat.cols())
        .filter(|c| !demanded.contains(c))
        .any(|c| (0..hat.rows()).any(|r| !hat.get(r, c).is_zero()));
    if leak {
        return Err(TransformError::Interference(t));
    }
    let field = hat.field();
    let sub = FqMatrix::from_fn(field, hat.rows(), demanded.len(), |r, c| hat.get(r, demanded[c]));
    let inv = sub.inverse().ok_or(TransformError::SingularAtGeneration(t))?;
    let x = inv.mul(&FqMatrix::from_fn(field, y.len(), 1, |r, _| y[r]));
    Ok((0..x.rows()).map(|r| x.get(r, 0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;

    #[test]
    fn solves_and_rejects() {
        let f = Field::prime(7).unwrap();
        let e = |v| f.from_u64(v);
        let hat = FqMatrix::from_indices(&f, &[vec![2, 0, 1], vec![3, 0, 4]]);
        // x = (1, 4): y = (2 + 4, 3 + 16) mod 7 = (6, 5)
        let x = instantaneous_solve(&hat, &[0, 2], &[e(6), e(5)], 0).unwrap();
        assert_eq!(x, vec![e(1), e(4)]);
        assert_eq!(
            instantaneous_solve(&hat, &[0, 1], &[e(6), e(2)], 3),
            Err(TransformError::Interference(3))
        );
        let sing = FqMatrix::from_indices(&f, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(
            instantaneous_solve(&sing, &[0, 1], &[e(0), e(0)], 5),
            Err(TransformError::SingularAtGeneration(5))
        );
    }
}
