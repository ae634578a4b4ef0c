use super::TransformError;
use crate::galois::{inverse_q_matrix, q_matrix, DftError, Embedding, Field, FieldElement, FqMatrix, PolyMatrix};

/// Block length `n`, an element `alpha` of order exactly `n` in the
/// operating field, and the prefix length `d_max`.
///
/// The operating field may extend the field the network code lives in;
/// `embedding` carries base-field values into it.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    pub n: usize,
    pub alpha: FieldElement,
    pub d_max: usize,
    pub embedding: Embedding,
}

impl TransformPlan {
    pub fn new(
        embedding: Embedding,
        alpha: FieldElement,
        n: usize,
        d_max: usize,
    ) -> Result<TransformPlan, TransformError> {
        let field = embedding.ext();
        if n == 0 {
            return Err(DftError::ZeroSize.into());
        }
        let p = field.characteristic();
        if (n as u64).is_multiple_of(p) {
            return Err(DftError::CharacteristicDividesN { p, n }.into());
        }
        let actual = field.order_of(alpha);
        if actual != n as u64 {
            return Err(DftError::WrongOrder { expected: n, actual }.into());
        }
        if d_max >= n {
            return Err(TransformError::BlockTooLong { d_max, n });
        }
        Ok(TransformPlan {
            n,
            alpha,
            d_max,
            embedding,
        })
    }

    /// Plan inside `field` itself with `alpha = g^((q-1)/n)`.
    pub fn in_field(field: &Field, n: usize, d_max: usize) -> Result<TransformPlan, TransformError> {
        let p = field.characteristic();
        if n > 0 && (n as u64).is_multiple_of(p) {
            return Err(DftError::CharacteristicDividesN { p, n }.into());
        }
        let alpha = field
            .element_of_order(n as u64)
            .map_err(|_| TransformError::NoRootOfUnity { n, q: field.order() })?;
        let embedding = Embedding::new(field, field).expect("a field embeds in itself");
        TransformPlan::new(embedding, alpha, n, d_max)
    }

    /// The operating field.
    pub fn field(&self) -> &Field {
        self.embedding.ext()
    }

    /// The field of the network code.
    pub fn base(&self) -> &Field {
        self.embedding.base()
    }

    pub fn lift(&self, a: FieldElement) -> FieldElement {
        self.embedding.map(a)
    }

    /// `Q_mu = F ⊗ I_mu`.
    pub fn q(&self, mu: usize) -> FqMatrix {
        q_matrix(self.field(), self.alpha, self.n, mu).expect("plan invariants hold")
    }

    pub fn q_inv(&self, mu: usize) -> FqMatrix {
        inverse_q_matrix(self.field(), self.alpha, self.n, mu).expect("plan invariants hold")
    }

    /// Evaluation point of generation `t`: `alpha^(n-1-t)`.
    pub fn point(&self, t: usize) -> FieldElement {
        self.field()
            .pow(self.alpha, ((self.n - 1 - t % self.n) % self.n) as u64)
    }

    /// Moves a base-field polynomial matrix into the operating field.
    pub fn lift_poly_matrix(&self, m: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::from_fn(self.field(), m.rows(), m.cols(), |r, c| {
            m.get(r, c).map_coeffs(|a| self.lift(a))
        })
    }

    /// `M(alpha^(n-1-t))` for a base-field polynomial matrix.
    pub fn eval_generation(&self, m: &PolyMatrix, t: usize) -> FqMatrix {
        m.eval_in(self.field(), |c| self.lift(c), self.point(t))
    }

    /// Time slots spent per block: `n + d_max`.
    pub fn slots(&self) -> usize {
        self.n + self.d_max
    }
}
