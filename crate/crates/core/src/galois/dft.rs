use thiserror::Error;

use super::field::{Field, FieldElement};
use super::matrix::FqMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DftError {
    #[error("transform size must be positive")]
    ZeroSize,
    #[error("characteristic {p} divides n = {n}, so n has no inverse")]
    CharacteristicDividesN { p: u64, n: usize },
    #[error("alpha has order {actual}, expected {expected}")]
    WrongOrder { expected: usize, actual: u64 },
}

fn check(field: &Field, alpha: FieldElement, n: usize) -> Result<(), DftError> {
    if n == 0 {
        return Err(DftError::ZeroSize);
    }
    let p = field.characteristic();
    if (n as u64).is_multiple_of(p) {
        return Err(DftError::CharacteristicDividesN { p, n });
    }
    let actual = field.order_of(alpha);
    if actual != n as u64 {
        return Err(DftError::WrongOrder { expected: n, actual });
    }
    Ok(())
}

/// `F[i][j] = alpha^(i*j)` for `alpha` of order exactly `n`.
pub fn dft_matrix(field: &Field, alpha: FieldElement, n: usize) -> Result<FqMatrix, DftError> {
    check(field, alpha, n)?;
    Ok(FqMatrix::from_fn(field, n, n, |i, j| {
        field.pow(alpha, ((i * j) % n) as u64)
    }))
}

/// `F^-1[i][j] = n^-1 * alpha^(-i*j)`.
pub fn inverse_dft_matrix(field: &Field, alpha: FieldElement, n: usize) -> Result<FqMatrix, DftError> {
    check(field, alpha, n)?;
    let n_inv = field.inv(field.from_u64(n as u64)).expect("p does not divide n");
    Ok(FqMatrix::from_fn(field, n, n, |i, j| {
        let e = (n - (i * j) % n) % n;
        field.mul(n_inv, field.pow(alpha, e as u64))
    }))
}

/// `Q_mu = F ⊗ I_mu`, acting on `n` stacked generations of `mu` symbols.
pub fn q_matrix(field: &Field, alpha: FieldElement, n: usize, mu: usize) -> Result<FqMatrix, DftError> {
    Ok(dft_matrix(field, alpha, n)?.kron(&FqMatrix::identity(field, mu)))
}

/// `Q_mu^-1 = F^-1 ⊗ I_mu`.
pub fn inverse_q_matrix(field: &Field, alpha: FieldElement, n: usize, mu: usize) -> Result<FqMatrix, DftError> {
    Ok(inverse_dft_matrix(field, alpha, n)?.kron(&FqMatrix::identity(field, mu)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_one_is_unit() {
        let f = Field::new(2, 1, None).unwrap();
        let m = dft_matrix(&f, FieldElement::ONE, 1).unwrap();
        assert_eq!(m.to_indices(), vec![vec![1]]);
    }

    #[test]
    fn gf64_order_seven_round_trip() {
        let f = Field::new(2, 6, Some(&[1, 1, 0, 0, 0, 0, 1])).unwrap();
        let alpha = f.pow(f.generator(), 9);
        let fwd = dft_matrix(&f, alpha, 7).unwrap();
        let inv = inverse_dft_matrix(&f, alpha, 7).unwrap();
        assert!(fwd.mul(&inv).is_identity());
        assert!(inv.mul(&fwd).is_identity());
    }

    #[test]
    fn errors() {
        let f = Field::new(3, 2, None).unwrap();
        let a3 = f.element_of_order(8).unwrap();
        assert_eq!(
            dft_matrix(&f, f.one(), 3),
            Err(DftError::CharacteristicDividesN { p: 3, n: 3 })
        );
        assert_eq!(
            dft_matrix(&f, a3, 4),
            Err(DftError::WrongOrder { expected: 4, actual: 8 })
        );
        assert_eq!(dft_matrix(&f, a3, 0), Err(DftError::ZeroSize));
    }

    #[test]
    fn every_admissible_size_round_trips() {
        for (p, m) in [(2u64, 4u32), (3, 3), (5, 2), (7, 1), (2, 6)] {
            let f = Field::new(p, m, None).unwrap();
            for n in super::super::primes::divisors(f.order() - 1) {
                let alpha = f.element_of_order(n).unwrap();
                let n = n as usize;
                let fwd = dft_matrix(&f, alpha, n).unwrap();
                let inv = inverse_dft_matrix(&f, alpha, n).unwrap();
                assert!(fwd.mul(&inv).is_identity(), "p={p} m={m} n={n}");
                for mu in 1..=3 {
                    let q = q_matrix(&f, alpha, n, mu).unwrap();
                    let qi = inverse_q_matrix(&f, alpha, n, mu).unwrap();
                    assert!(q.mul(&qi).is_identity());
                    assert_eq!(q.rows(), n * mu);
                }
            }
        }
    }
}
