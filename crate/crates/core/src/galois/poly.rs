use super::field::{Field, FieldElement};

/// Polynomial in the delay variable `D` over some GF(q). `coeffs[d]` is the
/// coefficient of `D^d`; trailing zeros are never stored.
///
/// Like [`FieldElement`], a `Poly` does not own its field; arithmetic takes
/// a `&Field`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(FieldElement::ONE)
    }

    pub fn constant(c: FieldElement) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// `c * D^d`.
    pub fn monomial(c: FieldElement, d: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![FieldElement::ZERO; d + 1];
        coeffs[d] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> FieldElement {
        self.coeffs.get(d).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest exponent with a nonzero coefficient, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn add(&self, f: &Field, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|d| f.add(self.coeff(d), other.coeff(d))).collect())
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, f: &Field, other: &Poly) -> Poly {
        self.add(f, &other.neg(f))
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, f: &Field, c: FieldElement) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplies by `D^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![FieldElement::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// Divides by `D^k`. Returns `None` when some coefficient below `D^k`
    /// is nonzero.
    pub fn unshift(&self, k: usize) -> Option<Poly> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::from_coeffs(self.coeffs.iter().skip(k).copied().collect()))
    }

    pub fn pow(&self, f: &Field, mut exp: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            exp >>= 1;
        }
        acc
    }

    /// Euclidean division. Returns `None` when `divisor` is zero.
    pub fn div_rem(&self, f: &Field, divisor: &Poly) -> Option<(Poly, Poly)> {
        let dd = divisor.degree()?;
        let lead_inv = f.inv(divisor.leading()?)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c;
            for (k, &b) in divisor.coeffs.iter().enumerate() {
                let slot = top - dd + k;
                rem[slot] = f.sub(rem[slot], f.mul(c, b));
            }
        }
        Some((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Exact quotient, `None` if `divisor` is zero or does not divide.
    pub fn exact_div(&self, f: &Field, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(f, divisor)?;
        r.is_zero().then_some(q)
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, f: &Field, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Applies `g` to every coefficient, e.g. to move into an extension
    /// field.
    pub fn map_coeffs(&self, g: impl Fn(FieldElement) -> FieldElement) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| g(c)).collect())
    }

    /// Renders as e.g. `D^5 + x*D^2 + 1`, highest degree first.
    pub fn format(&self, f: &Field) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (d, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coef = f.format(c);
            let coef = if coef.contains('+') { format!("({coef})") } else { coef };
            let term = match (d, c == FieldElement::ONE) {
                (0, _) => coef,
                (1, true) => "D".to_string(),
                (1, false) => format!("{coef}*D"),
                (d, true) => format!("D^{d}"),
                (d, false) => format!("{coef}*D^{d}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64, m: u32) -> Field {
        Field::new(p, m, None).unwrap()
    }

    fn poly_strategy(q: u64, max_len: usize) -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(0..q, 0..=max_len)
    }

    fn to_poly(f: &Field, v: &[u64]) -> Poly {
        Poly::from_coeffs(v.iter().map(|&i| f.from_index(i).unwrap()).collect())
    }

    #[test]
    fn normalization_and_degree() {
        let p = Poly::from_coeffs(vec![FieldElement::ONE, FieldElement::ZERO, FieldElement::ZERO]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::monomial(FieldElement::ONE, 3).valuation(), Some(3));
    }

    #[test]
    fn format_binary() {
        let f = gf(2, 1);
        let p = Poly::monomial(FieldElement::ONE, 5).add(&f, &Poly::one());
        assert_eq!(p.format(&f), "D^5 + 1");
        assert_eq!(Poly::zero().format(&f), "0");
    }

    #[test]
    fn div_rem_known() {
        let f = gf(3, 1);
        let e = |k| f.from_u64(k);
        // (D^2 + 2) / (D + 1) = D + 2 remainder 0 over GF(3): (D+1)(D+2) = D^2 + 2
        let a = Poly::from_coeffs(vec![e(2), e(0), e(1)]);
        let b = Poly::from_coeffs(vec![e(1), e(1)]);
        let (q, r) = a.div_rem(&f, &b).unwrap();
        assert_eq!(q, Poly::from_coeffs(vec![e(2), e(1)]));
        assert!(r.is_zero());
        assert!(a.div_rem(&f, &Poly::zero()).is_none());
    }

    proptest! {
        #[test]
        fn product_degree_and_eval(a in poly_strategy(64, 8), b in poly_strategy(64, 8), x in 0u64..64) {
            let f = gf(2, 6);
            let (pa, pb) = (to_poly(&f, &a), to_poly(&f, &b));
            let prod = pa.mul(&f, &pb);
            if !pa.is_zero() && !pb.is_zero() {
                prop_assert_eq!(prod.degree(), Some(pa.degree().unwrap() + pb.degree().unwrap()));
            }
            let x = f.from_index(x).unwrap();
            prop_assert_eq!(prod.eval(&f, x), f.mul(pa.eval(&f, x), pb.eval(&f, x)));
        }

        #[test]
        fn division_identity(a in poly_strategy(9, 10), b in poly_strategy(9, 5)) {
            let f = gf(3, 2);
            let (pa, pb) = (to_poly(&f, &a), to_poly(&f, &b));
            prop_assume!(!pb.is_zero());
            let (q, r) = pa.div_rem(&f, &pb).unwrap();
            prop_assert_eq!(q.mul(&f, &pb).add(&f, &r), pa);
            prop_assert!(r.degree() < pb.degree());
        }
    }
}
