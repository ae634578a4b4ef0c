use super::plan::TransformPlan;
use super::TransformError;
use crate::galois::{Field, FqMatrix, PolyMatrix};

/// Block circulant matrix whose first block row is
/// `[A_0, A_1, ..., A_L, 0, ..., 0]`; each later block row is the previous
/// one shifted right by one block, wrapping around.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCirculant {
    pub n: usize,
    pub blocks: Vec<FqMatrix>,
    pub realized: FqMatrix,
}

impl BlockCirculant {
    pub fn block_rows(&self) -> usize {
        self.blocks[0].rows()
    }

    pub fn block_cols(&self) -> usize {
        self.blocks[0].cols()
    }
}

/// Lays out `blocks` (`A_0 .. A_L`, all the same shape) in an
/// `n`-block circulant.
pub fn build_circulant(blocks: &[FqMatrix], n: usize) -> Result<BlockCirculant, TransformError> {
    let first = blocks.first().ok_or(TransformError::EmptyBlocks)?;
    let (r, c) = (first.rows(), first.cols());
    if blocks.iter().any(|b| b.rows() != r || b.cols() != c) {
        return Err(TransformError::InputShape("circulant blocks differ in shape".into()));
    }
    if blocks.len() > n {
        return Err(TransformError::BlockTooLong {
            d_max: blocks.len() - 1,
            n,
        });
    }
    let field = first.field();
    let mut realized = FqMatrix::zeros(field, n * r, n * c);
    for br in 0..n {
        for bc in 0..n {
            let lag = (bc + n - br) % n;
            if let Some(b) = blocks.get(lag) {
                realized.set_block(br * r, bc * c, b);
            }
        }
    }
    Ok(BlockCirculant {
        n,
        blocks: blocks.to_vec(),
        realized,
    })
}

/// Circulant of a polynomial matrix block (coefficients `M^(0) .. M^(d)`)
/// after moving its coefficients into the plan's field.
pub fn circulant_of(m: &PolyMatrix, plan: &TransformPlan) -> Result<BlockCirculant, TransformError> {
    let field = plan.field();
    let coeffs = m.coeff_matrices();
    let blocks: Vec<FqMatrix> = if coeffs.is_empty() {
        vec![FqMatrix::zeros(field, m.rows(), m.cols())]
    } else {
        coeffs.iter().map(|a| lift_matrix(a, field, plan)).collect()
    };
    build_circulant(&blocks, plan.n)
}

fn lift_matrix(a: &FqMatrix, field: &Field, plan: &TransformPlan) -> FqMatrix {
    FqMatrix::from_fn(field, a.rows(), a.cols(), |r, c| plan.lift(a.get(r, c)))
}

/// Eigen-blocks by generation: entry `t` is
/// `sum_d alpha^(d (n-1-t)) A_d`.
pub fn diagonalize(c: &BlockCirculant, plan: &TransformPlan) -> Result<Vec<FqMatrix>, TransformError> {
    if c.n != plan.n {
        return Err(TransformError::SizeMismatch {
            plan: plan.n,
            circulant: c.n,
        });
    }
    let field = plan.field();
    Ok((0..plan.n)
        .map(|t| {
            let x = plan.point(t);
            c.blocks
                .iter()
                .enumerate()
                .fold(FqMatrix::zeros(field, c.block_rows(), c.block_cols()), |acc, (d, a)| {
                    acc.add(&a.scale(field.pow(x, d as u64)))
                })
        })
        .collect())
}

/// `Q_nu blockdiag(M^(n-1), ..., M^(0)) Q_mu^-1`, the matrix the
/// generation blocks `hats[t]` describe in the time domain.
pub fn reassemble(hats: &[FqMatrix], plan: &TransformPlan) -> FqMatrix {
    let n = plan.n;
    let (r, c) = (hats[0].rows(), hats[0].cols());
    let mut diag = FqMatrix::zeros(plan.field(), n * r, n * c);
    for k in 0..n {
        diag.set_block(k * r, k * c, &hats[n - 1 - k]);
    }
    plan.q(r).mul(&diag).mul(&plan.q_inv(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_pair_n3() {
        let f = Field::new(2, 2, None).unwrap();
        let one = FqMatrix::identity(&f, 1);
        let c = build_circulant(&[one.clone(), one], 3).unwrap();
        assert_eq!(
            c.realized.to_indices(),
            vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]
        );
    }

    #[test]
    fn too_long() {
        let f = Field::new(2, 2, None).unwrap();
        let one = FqMatrix::identity(&f, 1);
        assert_eq!(
            build_circulant(&vec![one; 4], 3),
            Err(TransformError::BlockTooLong { d_max: 3, n: 3 })
        );
    }

    #[test]
    fn constant_blocks_repeat() {
        let f = Field::new(2, 3, None).unwrap();
        let plan = TransformPlan::in_field(&f, 7, 0).unwrap();
        let a = FqMatrix::from_indices(&f, &[vec![1, 2], vec![3, 4]]);
        let c = build_circulant(std::slice::from_ref(&a), 7).unwrap();
        let hats = diagonalize(&c, &plan).unwrap();
        assert!(hats.iter().all(|h| *h == a));
        assert_eq!(reassemble(&hats, &plan), c.realized);
    }
}
