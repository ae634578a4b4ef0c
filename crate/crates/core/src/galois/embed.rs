use thiserror::Error;

use super::field::{Field, FieldElement, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("GF({base_p}^{base_m}) is not a subfield of GF({ext_p}^{ext_m})")]
    NotSubfield {
        base_p: u64,
        base_m: u32,
        ext_p: u64,
        ext_m: u32,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Field homomorphism GF(p^m) -> GF(p^(m a)).
///
/// The polynomial-basis generator `x` of the small field is sent to a root
/// of the small field's modulus inside the large one. Among the roots, the
/// one with the smallest exponent with respect to
/// `h = g^((Q-1)/(q-1))` is used, `g` being the large field's fixed
/// generator, so the choice is deterministic.
#[derive(Debug, Clone)]
pub struct Embedding {
    base: Field,
    ext: Field,
    image_of_x: FieldElement,
}

impl Embedding {
    pub fn new(base: &Field, ext: &Field) -> Result<Embedding, EmbedError> {
        let (bp, bm) = (base.characteristic(), base.degree());
        let (ep, em) = (ext.characteristic(), ext.degree());
        if bp != ep || em % bm != 0 {
            return Err(EmbedError::NotSubfield {
                base_p: bp,
                base_m: bm,
                ext_p: ep,
                ext_m: em,
            });
        }
        let modulus: Vec<FieldElement> = base.spec().modulus.iter().map(|&c| ext.from_u64(c)).collect();
        let is_root = |z: FieldElement| {
            modulus
                .iter()
                .rev()
                .fold(FieldElement::ZERO, |acc, &c| ext.add(ext.mul(acc, z), c))
                .is_zero()
        };
        let q = base.order();
        let h = ext.pow(ext.generator(), (ext.order() - 1) / (q - 1));
        let image_of_x = std::iter::once(FieldElement::ZERO)
            .chain((0..q - 1).map(|k| ext.pow(h, k)))
            .find(|&z| is_root(z))
            .expect("an irreducible of degree m splits in every GF(p^(m a))");
        Ok(Embedding {
            base: base.clone(),
            ext: ext.clone(),
            image_of_x,
        })
    }

    /// Builds GF(p^(m a)) with its default modulus and the embedding into it.
    pub fn extend(base: &Field, a: u32) -> Result<Embedding, EmbedError> {
        let m = base.degree().checked_mul(a).ok_or(FieldError::TooLarge {
            p: base.characteristic(),
            m: u32::MAX,
        })?;
        let ext = if a == 1 {
            base.clone()
        } else {
            Field::new(base.characteristic(), m, None)?
        };
        Embedding::new(base, &ext)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn map(&self, a: FieldElement) -> FieldElement {
        if self.base == self.ext {
            return a;
        }
        self.base.coeffs(a).iter().rev().fold(FieldElement::ZERO, |acc, &c| {
            self.ext.add(self.ext.mul(acc, self.image_of_x), self.ext.from_u64(c))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_a_ring_homomorphism() {
        for (p, m, a) in [(2u64, 2u32, 3u32), (2, 3, 2), (3, 2, 2), (2, 1, 6), (5, 1, 2)] {
            let base = Field::new(p, m, None).unwrap();
            let emb = Embedding::extend(&base, a).unwrap();
            let ext = emb.ext().clone();
            assert_eq!(ext.order(), base.order().pow(a));
            for x in base.elements() {
                for y in base.elements() {
                    assert_eq!(emb.map(base.add(x, y)), ext.add(emb.map(x), emb.map(y)));
                    assert_eq!(emb.map(base.mul(x, y)), ext.mul(emb.map(x), emb.map(y)));
                }
            }
            assert_eq!(emb.map(base.one()), ext.one());
        }
    }

    #[test]
    fn injective() {
        let base = Field::new(2, 3, None).unwrap();
        let emb = Embedding::extend(&base, 2).unwrap();
        let mut images: Vec<_> = base.elements().map(|x| emb.map(x)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 8);
    }

    #[test]
    fn rejects_non_subfield() {
        let a = Field::new(2, 2, None).unwrap();
        let b = Field::new(2, 3, None).unwrap();
        assert!(matches!(Embedding::new(&a, &b), Err(EmbedError::NotSubfield { .. })));
        let c = Field::new(3, 2, None).unwrap();
        assert!(Embedding::new(&a, &c).is_err());
    }
}
