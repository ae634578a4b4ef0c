use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::primes::{checked_pow, factorize, is_prime};

/// Largest supported field order. Keeps packed elements and carry-less
/// products inside a `u64`.
pub const MAX_ORDER: u64 = 1 << 62;

/// Below this many trial divisors the irreducibility check is exhaustive;
/// above it Rabin's test is used instead.
const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus {0:?} is reducible over GF(p)")]
    ReducibleModulus(Vec<u64>),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("field order {p}^{m} exceeds the supported maximum")]
    TooLarge { p: u64, m: u32 },
    #[error("no element of order {n}: it does not divide q - 1 = {q_minus_one}")]
    NoSuchElement { n: u64, q_minus_one: u64 },
    #[error("invalid element coefficients {0:?}")]
    BadElement(Vec<u64>),
}

/// Parameters of GF(p^m) in polynomial basis.
///
/// `modulus` holds `m + 1` coefficients, lowest degree first, of a monic
/// irreducible polynomial over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.m, self.modulus)
    }
}

/// An element of some GF(p^m), packed as `sum c_i p^i` over its
/// polynomial-basis coefficients.
///
/// Elements do not carry their field; every operation goes through a
/// [`Field`] handle. The packed index doubles as the canonical
/// enumeration order of the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct Inner {
    spec: FieldSpec,
    q: u64,
    /// Modulus packed as bits, only meaningful when `p == 2`.
    modulus_bits: u64,
    /// Distinct primes dividing `q - 1`.
    group_primes: Vec<u64>,
    generator: FieldElement,
}

/// Shared handle to a finite field. Cheap to clone; equality compares the
/// underlying [`FieldSpec`].
#[derive(Debug, Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(p^m). With `modulus == None` the smallest monic
    /// irreducible of degree `m` (ordered by its packed lower coefficients)
    /// is chosen.
    pub fn new(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = match checked_pow(p, m) {
            Some(q) if q <= MAX_ORDER => q,
            _ => return Err(FieldError::TooLarge { p, m }),
        };
        let modulus = match modulus {
            Some(coeffs) => {
                if coeffs.len() != m as usize + 1 {
                    return Err(FieldError::BadModulus(format!(
                        "expected {} coefficients, got {}",
                        m + 1,
                        coeffs.len()
                    )));
                }
                if coeffs.iter().any(|&c| c >= p) {
                    return Err(FieldError::BadModulus(format!("coefficients must lie in [0, {p})")));
                }
                if coeffs[m as usize] != 1 {
                    return Err(FieldError::BadModulus("modulus must be monic".into()));
                }
                if !is_irreducible(p, coeffs) {
                    return Err(FieldError::ReducibleModulus(coeffs.to_vec()));
                }
                coeffs.to_vec()
            }
            None => smallest_irreducible(p, m),
        };
        let modulus_bits = if p == 2 {
            modulus.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        let group_primes = factorize(q - 1).into_iter().map(|(r, _)| r).collect();
        let provisional = Field(Arc::new(Inner {
            spec: FieldSpec { p, m, modulus },
            q,
            modulus_bits,
            group_primes,
            generator: FieldElement::ONE,
        }));
        let generator = (1..q)
            .map(FieldElement)
            .find(|&a| provisional.is_primitive(a))
            .expect("multiplicative group is cyclic");
        let mut inner = Arc::try_unwrap(provisional.0).expect("sole owner");
        inner.generator = generator;
        Ok(Field(Arc::new(inner)))
    }

    /// The prime field GF(p) with modulus `x`.
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        Field::new(p, 1, None)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field, FieldError> {
        Field::new(spec.p, spec.m, Some(&spec.modulus))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn characteristic(&self) -> u64 {
        self.0.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.0.spec.m
    }

    /// Number of elements `q = p^m`.
    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The fixed primitive element: smallest packed index whose
    /// multiplicative order is `q - 1`.
    pub fn generator(&self) -> FieldElement {
        self.0.generator
    }

    pub fn from_index(&self, index: u64) -> Option<FieldElement> {
        (index < self.0.q).then_some(FieldElement(index))
    }

    /// Element from polynomial-basis coefficients (lowest first). Shorter
    /// slices are zero-padded.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        let p = self.0.spec.p;
        if coeffs.len() > self.0.spec.m as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(FieldError::BadElement(coeffs.to_vec()));
        }
        Ok(FieldElement(coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c)))
    }

    /// The `m` polynomial-basis coefficients of `a`, lowest first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let m = self.0.spec.m as usize;
        let mut d = [0u64; 64];
        self.digits(a, &mut d);
        d[..m].to_vec()
    }

    /// Image of the integer `k` under `Z -> GF(p)`.
    pub fn from_u64(&self, k: u64) -> FieldElement {
        FieldElement(k % self.0.spec.p)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(1..self.0.q))
    }

    fn digits(&self, a: FieldElement, out: &mut [u64; 64]) {
        let p = self.0.spec.p;
        let mut v = a.0;
        for slot in out.iter_mut().take(self.0.spec.m as usize) {
            *slot = v % p;
            v /= p;
        }
    }

    fn pack(&self, d: &[u64]) -> FieldElement {
        let p = self.0.spec.p;
        FieldElement(d.iter().rev().fold(0u64, |acc, &c| acc * p + c))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.0.spec.p;
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.0.spec.m == 1 {
            return FieldElement((a.0 + b.0) % p);
        }
        let (mut x, mut y) = ([0u64; 64], [0u64; 64]);
        self.digits(a, &mut x);
        self.digits(b, &mut y);
        let m = self.0.spec.m as usize;
        for i in 0..m {
            x[i] = (x[i] + y[i]) % p;
        }
        self.pack(&x[..m])
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.0.spec.p;
        if p == 2 {
            return a;
        }
        let mut x = [0u64; 64];
        self.digits(a, &mut x);
        let m = self.0.spec.m as usize;
        for c in x.iter_mut().take(m) {
            *c = (p - *c) % p;
        }
        self.pack(&x[..m])
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Schoolbook product reduced by the modulus.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let p = self.0.spec.p;
        let m = self.0.spec.m as usize;
        if p == 2 {
            let top = 1u64 << m;
            let (mut x, mut y, mut acc) = (a.0, b.0, 0u64);
            while y != 0 {
                if y & 1 == 1 {
                    acc ^= x;
                }
                y >>= 1;
                x <<= 1;
                if x & top != 0 {
                    x ^= self.0.modulus_bits;
                }
            }
            return FieldElement(acc);
        }
        if m == 1 {
            return FieldElement(((a.0 as u128 * b.0 as u128) % p as u128) as u64);
        }
        let (mut x, mut y) = ([0u64; 64], [0u64; 64]);
        self.digits(a, &mut x);
        self.digits(b, &mut y);
        let mut prod = [0u64; 128];
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        let modulus = &self.0.spec.modulus;
        for deg in (m..2 * m - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            // subtract c * x^(deg-m) * modulus
            for (k, &mc) in modulus.iter().enumerate().take(m) {
                let slot = deg - m + k;
                prod[slot] = (prod[slot] + (p - c) * mc % p) % p;
            }
            prod[deg] = 0;
        }
        self.pack(&prod[..m])
    }

    pub fn pow(&self, mut base: FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Power with a signed exponent; negative exponents invert first.
    pub fn pow_signed(&self, base: FieldElement, exp: i64) -> Option<FieldElement> {
        if exp >= 0 {
            Some(self.pow(base, exp as u64))
        } else {
            self.inv(base).map(|b| self.pow(b, exp.unsigned_abs()))
        }
    }

    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            None
        } else {
            Some(self.pow(a, self.0.q - 2))
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    fn is_primitive(&self, a: FieldElement) -> bool {
        if a.0 == 0 {
            return false;
        }
        let q1 = self.0.q - 1;
        self.0
            .group_primes
            .iter()
            .all(|&r| self.pow(a, q1 / r) != FieldElement::ONE)
    }

    /// Multiplicative order of `a`; zero for the zero element.
    pub fn order_of(&self, a: FieldElement) -> u64 {
        if a.0 == 0 {
            return 0;
        }
        let mut ord = self.0.q - 1;
        for &r in &self.0.group_primes {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == FieldElement::ONE {
                ord /= r;
            }
        }
        ord
    }

    /// `g^((q-1)/n)` for the fixed generator `g`: the element of order
    /// exactly `n` with the smallest exponent.
    pub fn element_of_order(&self, n: u64) -> Result<FieldElement, FieldError> {
        let q1 = self.0.q - 1;
        if n == 0 || !q1.is_multiple_of(n) {
            return Err(FieldError::NoSuchElement { n, q_minus_one: q1 });
        }
        Ok(self.pow(self.0.generator, q1 / n))
    }

    /// Human-readable rendering: an integer for prime fields, otherwise a
    /// polynomial in `x`.
    pub fn format(&self, a: FieldElement) -> String {
        if self.0.spec.m == 1 {
            return a.0.to_string();
        }
        let coeffs = self.coeffs(a);
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

// ---- GF(p)[x] helpers used for modulus selection -------------------------

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    super::primes::pow_mod(a, p - 2, p)
}

/// Remainder of `a` modulo `b` over GF(p). `b` must be nonzero.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for (k, &bc) in b.iter().enumerate() {
            let slot = dr - db + k;
            r[slot] = (r[slot] + (p - c) * bc % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `y^p mod f`.
fn frobenius(y: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = y.to_vec();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f, p);
        }
        base = poly_mulmod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

/// Irreducibility of a monic polynomial over GF(p). Exhaustive trial
/// division when the candidate count is small, Rabin's test otherwise.
pub fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let half = (m / 2) as u32;
    let candidates = (1..=half).try_fold(0u64, |acc, d| acc.checked_add(checked_pow(p, d)?));
    match candidates {
        Some(c) if c <= EXHAUSTIVE_LIMIT => irreducible_by_trial_division(p, f),
        _ => irreducible_by_rabin(p, f),
    }
}

fn irreducible_by_trial_division(p: u64, f: &[u64]) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut v = low;
            for _ in 0..d {
                g.push(v % p);
                v /= p;
            }
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn irreducible_by_rabin(p: u64, f: &[u64]) -> bool {
    let m = f.len() - 1;
    let x = vec![0u64, 1];
    // powers[k] = x^(p^k) mod f
    let mut powers = vec![x.clone()];
    for k in 1..=m {
        let next = frobenius(&powers[k - 1], f, p);
        powers.push(next);
    }
    let minus_x = |v: &[u64]| {
        let mut w = v.to_vec();
        if w.len() < 2 {
            w.resize(2, 0);
        }
        w[1] = (w[1] + p - 1) % p;
        trim(&mut w);
        w
    };
    if !minus_x(&powers[m]).is_empty() {
        return false;
    }
    for (r, _) in factorize(m as u64) {
        let g = poly_gcd(f, &minus_x(&powers[m / r as usize]), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    let count = p.pow(m);
    for low in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut v = low;
        for _ in 0..m {
            f.push(v % p);
            v /= p;
        }
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
