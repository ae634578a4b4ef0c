use super::FeasError;
use crate::galois::primes::{checked_pow, divisors};
use crate::galois::{Embedding, Field, FieldElement, Poly, MAX_ORDER};
use crate::transform::TransformPlan;

/// Outcome of evaluating `f` on the powers of a plan's `alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanCheck {
    /// Every `t` in `0..n` with `f(alpha^t) = 0`.
    pub roots: Vec<usize>,
}

impl PlanCheck {
    pub fn passes(&self) -> bool {
        self.roots.is_empty()
    }
}

/// Evaluates `f` (over the plan's base field) at `alpha^t` for all
/// `0 <= t < n`.
///
/// Generation `t` of the pipeline uses the point `alpha^(n-1-t)`, so a
/// root at `alpha^t` makes generation `n-1-t` singular.
pub fn check_plan(f: &Poly, plan: &TransformPlan) -> PlanCheck {
    let field = plan.field();
    let lifted = f.map_coeffs(|c| plan.lift(c));
    let mut x = FieldElement::ONE;
    let mut roots = Vec::new();
    for t in 0..plan.n {
        if lifted.eval(field, x).is_zero() {
            roots.push(t);
        }
        x = field.mul(x, plan.alpha);
    }
    PlanCheck { roots }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest extension degree `a` over the base field.
    pub max_degree: u32,
    pub max_n: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_degree: 12,
            max_n: 4096,
        }
    }
}

/// Smallest plan on which `f` has no root.
///
/// Tries extension degrees `a = 1, 2, ...`; within each, block lengths
/// `n >= n_min` dividing `p^(m a) - 1`, smallest first, with
/// `alpha = g^((q-1)/n)`. Lengths already tried at a smaller degree are
/// skipped, since the subgroup of `n`-th roots of unity does not depend
/// on the field holding it. The plan's prefix is `n_min - 1`.
pub fn find_plan(f: &Poly, base: &Field, n_min: usize, limits: SearchLimits) -> Result<TransformPlan, FeasError> {
    if f.eval(base, FieldElement::ONE).is_zero() {
        return Err(FeasError::Unfixable);
    }
    let n_min = n_min.max(1);
    let p = base.characteristic();
    let m = base.degree();
    let mut tried: Vec<u64> = Vec::new();
    for a in 1..=limits.max_degree {
        let Some(q) = m.checked_mul(a).and_then(|e| checked_pow(p, e)) else {
            break;
        };
        if q > MAX_ORDER {
            break;
        }
        let candidates: Vec<u64> = divisors(q - 1)
            .into_iter()
            .filter(|&n| n >= n_min as u64 && n <= limits.max_n as u64)
            .filter(|n| !tried.contains(n))
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let embedding = Embedding::extend(base, a)?;
        for n in candidates {
            tried.push(n);
            let alpha = embedding.ext().element_of_order(n)?;
            let plan = TransformPlan::new(embedding.clone(), alpha, n as usize, n_min - 1)?;
            if check_plan(f, &plan).passes() {
                return Ok(plan);
            }
        }
    }
    Err(FeasError::SearchExhausted {
        max_degree: limits.max_degree,
        max_n: limits.max_n,
    })
}

/// Smallest `m >= 1` with `n | p^m - 1`, if any; it exists exactly when
/// `gcd(n, p) = 1`.
pub fn root_of_unity_degree(n: u64, p: u64) -> Option<u64> {
    crate::galois::primes::multiplicative_order(p, n)
}
