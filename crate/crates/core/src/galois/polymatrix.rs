use std::fmt;

use super::field::{Field, FieldElement};
use super::matrix::FqMatrix;
use super::poly::Poly;

/// Matrix of polynomials in `D` over GF(q).
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} over {}", self.rows, self.cols, self.field.spec())?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).format(&self.field)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl PolyMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut g: impl FnMut(usize, usize) -> Poly) -> PolyMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(g(r, c));
            }
        }
        PolyMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// `sum_d coeffs[d] D^d`. All coefficient matrices must share a shape;
    /// an empty list needs the shape spelled out.
    pub fn from_coeff_matrices(field: &Field, rows: usize, cols: usize, coeffs: &[FqMatrix]) -> PolyMatrix {
        assert!(
            coeffs.iter().all(|m| m.rows() == rows && m.cols() == cols),
            "coefficient shape mismatch"
        );
        PolyMatrix::from_fn(field, rows, cols, |r, c| {
            Poly::from_coeffs(coeffs.iter().map(|m| m.get(r, c)).collect())
        })
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

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Poly) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    /// Largest entry degree, `None` for the zero matrix.
    pub fn max_degree(&self) -> Option<usize> {
        self.data.iter().filter_map(Poly::degree).max()
    }

    /// Smallest exponent carrying a nonzero coefficient anywhere.
    pub fn min_valuation(&self) -> Option<usize> {
        self.data.iter().filter_map(Poly::valuation).min()
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        PolyMatrix::from_fn(&self.field, self.rows, self.cols, |r, c| {
            self.get(r, c).add(&self.field, other.get(r, c))
        })
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let f = &self.field;
        PolyMatrix::from_fn(f, self.rows, other.cols, |r, c| {
            (0..self.cols).fold(Poly::zero(), |acc, k| {
                acc.add(f, &self.get(r, k).mul(f, other.get(k, c)))
            })
        })
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Multiplies every entry by `D^k`.
    pub fn shift(&self, k: usize) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, self.rows, self.cols, |r, c| self.get(r, c).shift(k))
    }

    /// Divides every entry by `D^k`; `None` if that is not exact.
    pub fn unshift(&self, k: usize) -> Option<PolyMatrix> {
        let data = self.data.iter().map(|p| p.unshift(k)).collect::<Option<Vec<_>>>()?;
        Some(PolyMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// The `h x w` block at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> PolyMatrix {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of bounds");
        PolyMatrix::from_fn(&self.field, h, w, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    /// Rows and columns picked by index, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(&self.field, rows.len(), cols.len(), |r, c| {
            self.get(rows[r], cols[c]).clone()
        })
    }

    /// Coefficient matrix of `D^d`.
    pub fn coeff_matrix(&self, d: usize) -> FqMatrix {
        FqMatrix::from_fn(&self.field, self.rows, self.cols, |r, c| self.get(r, c).coeff(d))
    }

    /// Coefficient matrices `M^(0) .. M^(deg)`; empty for the zero matrix.
    pub fn coeff_matrices(&self) -> Vec<FqMatrix> {
        match self.max_degree() {
            Some(deg) => (0..=deg).map(|d| self.coeff_matrix(d)).collect(),
            None => Vec::new(),
        }
    }

    /// Entrywise evaluation at `x`.
    pub fn eval(&self, x: FieldElement) -> FqMatrix {
        FqMatrix::from_fn(&self.field, self.rows, self.cols, |r, c| {
            self.get(r, c).eval(&self.field, x)
        })
    }

    /// Evaluation at a point of another field, after mapping each
    /// coefficient with `embed`.
    pub fn eval_in(&self, target: &Field, embed: impl Fn(FieldElement) -> FieldElement, x: FieldElement) -> FqMatrix {
        FqMatrix::from_fn(target, self.rows, self.cols, |r, c| {
            self.get(r, c).map_coeffs(&embed).eval(target, x)
        })
    }

    /// Determinant via fraction-free (Bareiss) elimination; every division
    /// is exact in GF(q)[D].
    ///
    /// # Panics
    /// If the matrix is not square.
    pub fn det(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        if n == 0 {
            return Poly::one();
        }
        let mut m: Vec<Vec<Poly>> = (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Poly::zero();
                };
                m.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j].mul(f, &m[k][k]).sub(f, &m[i][k].mul(f, &m[k][j]));
                    m[i][j] = num.exact_div(f, &prev).expect("Bareiss division is exact");
                }
                m[i][k] = Poly::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if negate {
            det.neg(f)
        } else {
            det
        }
    }

    /// Renders each entry with [`Poly::format`].
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).format(&self.field)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn parity(perm: &[usize]) -> bool {
        let mut odd = false;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    odd = !odd;
                }
            }
        }
        odd
    }

    /// Leibniz expansion, independent of the elimination code.
    fn leibniz(m: &PolyMatrix) -> Poly {
        let f = m.field().clone();
        let n = m.rows();
        permutations(n).into_iter().fold(Poly::zero(), |acc, perm| {
            let term = (0..n).fold(Poly::one(), |t, r| t.mul(&f, m.get(r, perm[r])));
            if parity(&perm) {
                acc.sub(&f, &term)
            } else {
                acc.add(&f, &term)
            }
        })
    }

    fn build(f: &Field, n: usize, raw: &[Vec<u64>]) -> PolyMatrix {
        PolyMatrix::from_fn(f, n, n, |r, c| {
            Poly::from_coeffs(raw[r * n + c].iter().map(|&i| f.from_index(i).unwrap()).collect())
        })
    }

    #[test]
    fn table_row_u5_at_one() {
        let f = Field::new(2, 1, None).unwrap();
        let one = FieldElement::ONE;
        let m = PolyMatrix::from_fn(&f, 2, 2, |r, c| match (r, c) {
            (0, 0) => Poly::monomial(one, 3),
            (0, 1) => Poly::monomial(one, 4),
            (1, 1) => Poly::monomial(one, 1),
            _ => Poly::zero(),
        });
        let at_one = m.eval(one);
        assert_eq!(at_one.to_indices(), vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(at_one.det(), one);
        assert_eq!(m.det(), Poly::monomial(one, 4));
    }

    #[test]
    fn zero_matrix_evaluates_to_zero() {
        let f = Field::new(3, 2, None).unwrap();
        let z = PolyMatrix::zeros(&f, 3, 4);
        for x in f.elements() {
            assert!(z.eval(x).is_zero());
        }
        assert_eq!(z.max_degree(), None);
    }

    #[test]
    fn coefficient_round_trip() {
        let f = Field::new(2, 3, None).unwrap();
        let m = PolyMatrix::from_fn(&f, 2, 3, |r, c| {
            Poly::monomial(f.from_index((r + c) as u64 % 8).unwrap(), r * 2 + c)
        });
        let rebuilt = PolyMatrix::from_coeff_matrices(&f, 2, 3, &m.coeff_matrices());
        assert_eq!(rebuilt, m);
    }

    fn case() -> impl Strategy<Value = (usize, Vec<Vec<u64>>, u64)> {
        (1usize..=5).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(prop::collection::vec(0u64..16, 0..=7), n * n),
                0u64..16,
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn det_commutes_with_eval((n, raw, x) in case()) {
            let f = Field::new(2, 4, None).unwrap();
            let m = build(&f, n, &raw);
            let x = f.from_index(x).unwrap();
            let det = m.det();
            prop_assert_eq!(&det, &leibniz(&m));
            prop_assert_eq!(m.eval(x).det(), det.eval(&f, x));
        }

        #[test]
        fn det_commutes_with_eval_odd_char((n, raw, x) in case()) {
            let f = Field::new(17, 1, None).unwrap();
            let m = build(&f, n, &raw);
            let x = f.from_index(x).unwrap();
            prop_assert_eq!(m.eval(x).det(), m.det().eval(&f, x));
        }
    }
}
