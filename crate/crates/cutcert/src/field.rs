//! Arithmetic over the prime field with modulus 2^61 - 1, and the polynomial
//! routines behind syndrome decoding: Horner evaluation, Berlekamp-Massey
//! recurrence synthesis, and exhaustive root location over a candidate set.
//!
//! The modulus is a Mersenne prime, so reduction is two shift-and-add folds.
//! Evaluation points for the sparse-recovery layer are fixed at alpha_i = i
//! (1-based), which stays injective because every dimension we use is far
//! below the modulus.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

/// Field modulus, the Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1u64 << 61) - 1;

/// Canonical residue in `[0, MODULUS)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElement(u64);

#[inline]
fn fold(x: u64) -> u64 {
    let mut s = (x & MODULUS) + (x >> 61);
    if s >= MODULUS {
        s -= MODULUS;
    }
    s
}

#[inline]
fn reduce128(x: u128) -> u64 {
    let lo = (x as u64) & MODULUS;
    let hi = (x >> 61) as u64;
    fold(lo + fold(hi))
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn new(v: u64) -> Self {
        FieldElement(v % MODULUS)
    }

    /// Maps a signed integer to its residue, negatives wrapping to `p - |v|`.
    pub fn from_i64(v: i64) -> Self {
        FieldElement(v.rem_euclid(MODULUS as i64) as u64)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; zero is rejected.
    pub fn inv(self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::InversionOfZero);
        }
        Ok(self.pow(MODULUS - 2))
    }

    /// Lifts the residue to a signed integer in `(-p/2, p/2]`.
    ///
    /// Valid because every in-stream coordinate magnitude is bounded well
    /// below `p/2`.
    pub fn lift_signed(self) -> i64 {
        if self.0 > MODULUS / 2 {
            self.0 as i64 - MODULUS as i64
        } else {
            self.0 as i64
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        let mut s = self.0 + rhs.0;
        if s >= MODULUS {
            s -= MODULUS;
        }
        FieldElement(s)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn sub(self, rhs: FieldElement) -> FieldElement {
        if self.0 >= rhs.0 {
            FieldElement(self.0 - rhs.0)
        } else {
            FieldElement(self.0 + MODULUS - rhs.0)
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, rhs: FieldElement) -> FieldElement {
        FieldElement(reduce128(self.0 as u128 * rhs.0 as u128))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn neg(self) -> FieldElement {
        if self.0 == 0 {
            self
        } else {
            FieldElement(MODULUS - self.0)
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({})", self.0)
    }
}

/// Batch inversion by the product-tree trick: one inversion plus `3(n-1)`
/// multiplications. Any zero input is rejected.
pub fn batch_inverse(xs: &[FieldElement]) -> Result<Vec<FieldElement>> {
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let mut prefix = Vec::with_capacity(xs.len());
    let mut acc = FieldElement::ONE;
    for &x in xs {
        if x.is_zero() {
            return Err(Error::InversionOfZero);
        }
        prefix.push(acc);
        acc = acc * x;
    }
    let mut inv_acc = acc.inv()?;
    let mut out = vec![FieldElement::ZERO; xs.len()];
    for i in (0..xs.len()).rev() {
        out[i] = inv_acc * prefix[i];
        inv_acc = inv_acc * xs[i];
    }
    Ok(out)
}

/// Dense polynomial over the field, lowest-degree coefficient first.
/// The zero polynomial is the empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FieldPoly {
    coeffs: Vec<FieldElement>,
}

impl FieldPoly {
    pub fn zero() -> Self {
        FieldPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        FieldPoly {
            coeffs: vec![FieldElement::ONE],
        }
    }

    /// Builds from coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FieldPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree after trailing-zero trim; 0 for constants and the zero poly.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluates the formal derivative at `x`.
    pub fn eval_derivative(&self, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for (j, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * x + FieldElement::new(j as u64) * c;
        }
        acc
    }
}

/// Synthesizes the minimal linear-recurrence (locator) polynomial generating
/// the syndrome sequence, with constant term 1.
///
/// For syndromes of an `l`-sparse vector the result has degree equal to the
/// support size and roots at the inverse evaluation points of the support.
pub fn berlekamp_massey(syndromes: &[FieldElement]) -> FieldPoly {
    let mut c = vec![FieldElement::ONE];
    let mut b = vec![FieldElement::ONE];
    let mut l: usize = 0;
    let mut shift: usize = 1;
    let mut last_disc = FieldElement::ONE;
    for n in 0..syndromes.len() {
        let mut d = syndromes[n];
        for i in 1..=l.min(c.len().saturating_sub(1)) {
            d = d + c[i] * syndromes[n - i];
        }
        if d.is_zero() {
            shift += 1;
        } else {
            let coef = d * last_disc.inv().expect("nonzero discrepancy");
            let update = |c: &mut Vec<FieldElement>, b: &[FieldElement], shift: usize| {
                if c.len() < b.len() + shift {
                    c.resize(b.len() + shift, FieldElement::ZERO);
                }
                for (i, &bi) in b.iter().enumerate() {
                    c[i + shift] = c[i + shift] - coef * bi;
                }
            };
            if 2 * l <= n {
                let prev = c.clone();
                update(&mut c, &b, shift);
                l = n + 1 - l;
                b = prev;
                last_disc = d;
                shift = 1;
            } else {
                update(&mut c, &b, shift);
                shift += 1;
            }
        }
    }
    FieldPoly::from_coeffs(c)
}

/// Returns the 0-based positions of candidates that are roots of `poly`,
/// by exhaustive Horner evaluation.
pub fn find_roots_among(poly: &FieldPoly, candidates: &[FieldElement]) -> Vec<usize> {
    candidates
        .iter()
        .enumerate()
        .filter(|(_, &c)| poly.eval(c).is_zero())
        .map(|(pos, _)| pos)
        .collect()
}
