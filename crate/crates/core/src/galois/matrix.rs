use std::fmt;

use super::field::{Field, FieldElement};

/// Dense matrix over a finite field, row-major.
///
/// Shape mismatches in arithmetic are programming errors and panic.
#[derive(Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FqMatrix {}x{} over {}", self.rows, self.cols, self.field.spec())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|&e| self.field.format(e)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl FqMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> FqMatrix {
        FqMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> FqMatrix {
        let mut m = FqMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn diagonal(field: &Field, diag: &[FieldElement]) -> FqMatrix {
        let mut m = FqMatrix::zeros(field, diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut g: impl FnMut(usize, usize) -> FieldElement,
    ) -> FqMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(g(r, c));
            }
        }
        FqMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Builds from rows of equal length.
    ///
    /// # Panics
    /// If the rows are ragged.
    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElement>>) -> FqMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        FqMatrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| self.get(r, c) == if r == c { FieldElement::ONE } else { FieldElement::ZERO })
            })
    }

    fn check_same_field(&self, other: &FqMatrix) {
        assert!(self.field == other.field, "matrices over different fields");
    }

    pub fn add(&self, other: &FqMatrix) -> FqMatrix {
        self.check_same_field(other);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let f = &self.field;
        FqMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> FqMatrix {
        let f = &self.field;
        FqMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn sub(&self, other: &FqMatrix) -> FqMatrix {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> FqMatrix {
        let f = &self.field;
        FqMatrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &FqMatrix) -> FqMatrix {
        self.check_same_field(other);
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let f = &self.field;
        let mut out = FqMatrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * out.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, c)));
                }
            }
        }
        out
    }

    pub fn pow(&self, mut exp: u64) -> FqMatrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = FqMatrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> FqMatrix {
        FqMatrix::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &FqMatrix) -> FqMatrix {
        self.check_same_field(other);
        let f = &self.field;
        FqMatrix::from_fn(f, self.rows * other.rows, self.cols * other.cols, |r, c| {
            f.mul(
                self.get(r / other.rows, c / other.cols),
                other.get(r % other.rows, c % other.cols),
            )
        })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &FqMatrix) -> FqMatrix {
        self.check_same_field(other);
        assert_eq!(self.rows, other.rows, "shape mismatch");
        FqMatrix::from_fn(&self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        })
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &FqMatrix) -> FqMatrix {
        self.check_same_field(other);
        assert_eq!(self.cols, other.cols, "shape mismatch");
        FqMatrix::from_fn(&self.field, self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.get(r, c)
            } else {
                other.get(r - self.rows, c)
            }
        })
    }

    /// The `h x w` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> FqMatrix {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of bounds");
        FqMatrix::from_fn(&self.field, h, w, |r, c| self.get(r0 + r, c0 + c))
    }

    /// Writes `src` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &FqMatrix) {
        self.check_same_field(src);
        for r in 0..src.rows {
            for c in 0..src.cols {
                self.set(r0 + r, c0 + c, src.get(r, c));
            }
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = f.inv(m.get(row, col)).expect("nonzero pivot");
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Determinant by elimination.
    ///
    /// # Panics
    /// If the matrix is not square.
    pub fn det(&self) -> FieldElement {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = FieldElement::ONE;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return FieldElement::ZERO;
            };
            if p != col {
                m.swap_rows(p, col);
                det = f.neg(det);
            }
            let pivot = m.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Inverse, or `None` if singular or non-square.
    pub fn inverse(&self) -> Option<FqMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hcat(&FqMatrix::identity(&self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// Some `X` with `self * X = rhs`, or `None` when the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, rhs: &FqMatrix) -> Option<FqMatrix> {
        assert_eq!(self.rows, rhs.rows, "shape mismatch");
        let n = self.cols;
        let aug = self.hcat(rhs);
        let (r, pivots) = aug.rref();
        if pivots.last().is_some_and(|&p| p >= n) {
            return None;
        }
        let mut x = FqMatrix::zeros(&self.field, n, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, r.get(row, n + c));
            }
        }
        Some(x)
    }

    /// Entries as packed field indices.
    pub fn to_indices(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|e| e.index()).collect())
            .collect()
    }

    /// Builds from packed field indices.
    ///
    /// # Panics
    /// On ragged rows or an index outside the field.
    pub fn from_indices(field: &Field, rows: &[Vec<u64>]) -> FqMatrix {
        FqMatrix::from_rows(
            field,
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&i| field.from_index(i).expect("index within field"))
                        .collect()
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64, m: u32) -> Field {
        Field::new(p, m, None).unwrap()
    }

    fn matrix_strategy(q: u64, rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
        prop::collection::vec(prop::collection::vec(0..q, cols), rows)
    }

    #[test]
    fn small_inverse_and_det() {
        let f = gf(5, 1);
        let a = FqMatrix::from_indices(&f, &[vec![1, 2], vec![3, 4]]);
        // det = 4 - 6 = -2 = 3 mod 5
        assert_eq!(a.det(), f.from_u64(3));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let singular = FqMatrix::from_indices(&f, &[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn solve_consistent_and_not() {
        let f = gf(2, 1);
        let a = FqMatrix::from_indices(&f, &[vec![1, 1], vec![1, 1]]);
        let good = FqMatrix::from_indices(&f, &[vec![1], vec![1]]);
        let bad = FqMatrix::from_indices(&f, &[vec![1], vec![0]]);
        let x = a.solve(&good).unwrap();
        assert_eq!(a.mul(&x), good);
        assert!(a.solve(&bad).is_none());
    }

    #[test]
    fn kron_shape_and_entries() {
        let f = gf(3, 1);
        let a = FqMatrix::from_indices(&f, &[vec![1, 2]]);
        let i2 = FqMatrix::identity(&f, 2);
        let k = a.kron(&i2);
        assert_eq!(k.to_indices(), vec![vec![1, 0, 2, 0], vec![0, 1, 0, 2]]);
    }

    proptest! {
        #[test]
        fn rank_of_product_is_bounded(a in matrix_strategy(9, 4, 3), b in matrix_strategy(9, 3, 5)) {
            let f = gf(3, 2);
            let (a, b) = (FqMatrix::from_indices(&f, &a), FqMatrix::from_indices(&f, &b));
            prop_assert!(a.mul(&b).rank() <= a.rank().min(b.rank()));
        }

        #[test]
        fn det_is_multiplicative(a in matrix_strategy(16, 4, 4), b in matrix_strategy(16, 4, 4)) {
            let f = gf(2, 4);
            let (a, b) = (FqMatrix::from_indices(&f, &a), FqMatrix::from_indices(&f, &b));
            prop_assert_eq!(a.mul(&b).det(), f.mul(a.det(), b.det()));
            prop_assert_eq!(a.inverse().is_some(), !a.det().is_zero());
            if let Some(inv) = a.inverse() {
                prop_assert!(inv.mul(&a).is_identity());
            }
        }
    }
}
