//! Deterministic l-sparse recovery from power-sum syndromes.
//!
//! The sketch of a vector x over dimension m is the 2l syndromes
//! s_j = sum_i x_i * i^j for j = 0..2l-1, i.e. a transposed-Vandermonde
//! linear map with evaluation points alpha_i = i. Any vector with at most
//! l nonzeros is recovered exactly: Berlekamp-Massey yields the locator
//! polynomial, an exhaustive scan over the inverse points locates the
//! support, Forney's formula solves for the values, and a full re-encode
//! of all 2l syndromes double-checks the answer. Anything that fails a
//! check decodes to `NotSparse`.
//!
//! The module is fully deterministic: identical inputs give identical bytes.

use crate::field::{batch_inverse, berlekamp_massey, FieldElement, FieldPoly, MODULUS};
use crate::wire::{put_u64, Cursor};
use crate::{Error, Result};

pub const SPARSE_MAGIC: u64 = u64::from_le_bytes(*b"CUTSPRS1");

/// Serialized size in bytes: 3-word header plus 2l syndromes.
pub fn serialized_len(ell: usize) -> usize {
    24 + 2 * ell * 8
}

/// Syndrome sketch of an integer vector, supporting linear updates and
/// merges. `ell` is the sparsity budget; `m` the vector dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSketch {
    ell: usize,
    m: usize,
    syndromes: Vec<FieldElement>,
}

/// Decode outcome: the exact signed sparse vector, or a refusal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecoveryResult {
    /// Strictly increasing 1-based indices, no zero values.
    Exact(Vec<(usize, i64)>),
    NotSparse,
}

impl SparseSketch {
    pub fn new(ell: usize, m: usize) -> Result<Self> {
        if ell == 0 || m == 0 {
            return Err(Error::InvalidParams("ell and m must be positive".into()));
        }
        Ok(SparseSketch {
            ell,
            m,
            syndromes: vec![FieldElement::ZERO; 2 * ell],
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.syndromes.iter().all(|s| s.is_zero())
    }

    pub fn syndromes(&self) -> &[FieldElement] {
        &self.syndromes
    }

    /// Applies `x_i += u` for a 1-based coordinate `i`.
    pub fn update(&mut self, i: usize, u: i64) -> Result<()> {
        if i == 0 || i > self.m {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.m,
            });
        }
        let delta = FieldElement::from_i64(u);
        if delta.is_zero() {
            return Ok(());
        }
        let alpha = FieldElement::new(i as u64);
        let mut pow = FieldElement::ONE;
        for s in self.syndromes.iter_mut() {
            *s = *s + delta * pow;
            pow = pow * alpha;
        }
        Ok(())
    }

    /// Elementwise field-sum; sketches must share shape.
    pub fn merge_from(&mut self, other: &SparseSketch) -> Result<()> {
        if self.ell != other.ell || self.m != other.m {
            return Err(Error::ShapeMismatch);
        }
        for (a, b) in self.syndromes.iter_mut().zip(&other.syndromes) {
            *a = *a + *b;
        }
        Ok(())
    }

    /// Decodes with freshly computed inverse evaluation points. Prefer
    /// [`decode_with`](Self::decode_with) when decoding repeatedly over the
    /// same dimension.
    pub fn decode(&self) -> RecoveryResult {
        let points: Vec<FieldElement> =
            (1..=self.m as u64).map(FieldElement::new).collect();
        let inv_points = batch_inverse(&points).expect("points are nonzero");
        self.decode_with(&inv_points)
    }

    /// Decode pipeline: Berlekamp-Massey, root scan over `inv_points`
    /// (position j holds (j+1)^-1), Forney value solve, re-encode check.
    pub fn decode_with(&self, inv_points: &[FieldElement]) -> RecoveryResult {
        assert!(inv_points.len() >= self.m, "inverse point table too short");
        if self.is_zero() {
            return RecoveryResult::Exact(Vec::new());
        }
        let lambda = berlekamp_massey(&self.syndromes);
        let d = lambda.degree();
        if d == 0 || d > self.ell {
            return RecoveryResult::NotSparse;
        }
        let mut support = Vec::with_capacity(d);
        for (pos, &cand) in inv_points.iter().take(self.m).enumerate() {
            if lambda.eval(cand).is_zero() {
                support.push(pos);
                if support.len() > d {
                    break;
                }
            }
        }
        if support.len() != d {
            return RecoveryResult::NotSparse;
        }

        // Forney: omega = S(z) * lambda(z) mod z^{2l}, truncated to degree < d;
        // value at root X^-1 is -X * omega(X^-1) / lambda'(X^-1).
        let lc = lambda.coeffs();
        let mut omega = vec![FieldElement::ZERO; d];
        for (j, w) in omega.iter_mut().enumerate() {
            let mut acc = FieldElement::ZERO;
            for (u, &l) in lc.iter().enumerate().take(j + 1) {
                acc = acc + l * self.syndromes[j - u];
            }
            *w = acc;
        }
        let omega = FieldPoly::from_coeffs(omega);

        let mut entries = Vec::with_capacity(d);
        for &pos in &support {
            let x = FieldElement::new((pos + 1) as u64);
            let xinv = inv_points[pos];
            let den = lambda.eval_derivative(xinv);
            if den.is_zero() {
                return RecoveryResult::NotSparse;
            }
            let value = -(x * omega.eval(xinv) * den.inv().expect("nonzero"));
            if value.is_zero() {
                return RecoveryResult::NotSparse;
            }
            entries.push((pos + 1, value));
        }

        // Re-encode all 2l syndromes and compare.
        let mut powers: Vec<FieldElement> = vec![FieldElement::ONE; entries.len()];
        for (j, &s) in self.syndromes.iter().enumerate() {
            let mut acc = FieldElement::ZERO;
            for (e, pw) in entries.iter().zip(powers.iter_mut()) {
                acc = acc + e.1 * *pw;
                *pw = *pw * FieldElement::new(e.0 as u64);
            }
            if acc != s {
                let _ = j;
                return RecoveryResult::NotSparse;
            }
        }

        RecoveryResult::Exact(
            entries
                .into_iter()
                .map(|(i, v)| (i, v.lift_signed()))
                .collect(),
        )
    }

    pub fn write_to(&self, buf: &mut Vec<u8>) {
        put_u64(buf, SPARSE_MAGIC);
        put_u64(buf, self.ell as u64);
        put_u64(buf, self.m as u64);
        for s in &self.syndromes {
            put_u64(buf, s.value());
        }
    }

    pub fn serialize(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(serialized_len(self.ell));
        self.write_to(&mut buf);
        buf
    }

    pub(crate) fn read_from(cur: &mut Cursor<'_>) -> Result<Self> {
        cur.expect_u64(SPARSE_MAGIC, "sparse sketch magic")?;
        let ell = cur.u64()? as usize;
        let m = cur.u64()? as usize;
        if ell == 0 || m == 0 {
            return Err(Error::Corrupt("zero ell or m".into()));
        }
        let mut syndromes = Vec::with_capacity(2 * ell);
        for _ in 0..2 * ell {
            let v = cur.u64()?;
            if v >= MODULUS {
                return Err(Error::Corrupt("non-canonical field residue".into()));
            }
            syndromes.push(FieldElement::new(v));
        }
        Ok(SparseSketch { ell, m, syndromes })
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor::new(bytes);
        Self::read_from(&mut cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn sketch_of(ell: usize, m: usize, entries: &[(usize, i64)]) -> SparseSketch {
        let mut sk = SparseSketch::new(ell, m).unwrap();
        for &(i, v) in entries {
            sk.update(i, v).unwrap();
        }
        sk
    }

    #[test]
    fn basis_vector_syndromes_all_ones() {
        // alpha_1 = 1, so the syndromes of e_1 are all ones.
        let sk = sketch_of(3, 6, &[(1, 1)]);
        assert!(sk.syndromes().iter().all(|s| *s == FieldElement::ONE));
    }

    #[test]
    fn insert_delete_cancels() {
        let mut sk = SparseSketch::new(4, 10).unwrap();
        sk.update(7, 5).unwrap();
        sk.update(7, -5).unwrap();
        assert!(sk.is_zero());
    }

    #[test]
    fn two_update_syndrome_formula() {
        // (i=2,+1), (i=5,-1): s_j = 2^j - 5^j mod p.
        let sk = sketch_of(2, 6, &[(2, 1), (5, -1)]);
        for (j, &s) in sk.syndromes().iter().enumerate() {
            let expect =
                FieldElement::new(2).pow(j as u64) - FieldElement::new(5).pow(j as u64);
            assert_eq!(s, expect);
        }
    }

    #[test]
    fn update_out_of_range() {
        let mut sk = SparseSketch::new(2, 6).unwrap();
        assert!(matches!(
            sk.update(7, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            sk.update(0, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn merge_identity_and_inverse() {
        let sk = sketch_of(3, 12, &[(2, 4), (9, -1)]);
        let mut merged = sk.clone();
        merged.merge_from(&SparseSketch::new(3, 12).unwrap()).unwrap();
        assert_eq!(merged, sk);
        let neg = sketch_of(3, 12, &[(2, -4), (9, 1)]);
        merged.merge_from(&neg).unwrap();
        assert!(merged.is_zero());
    }

    #[test]
    fn merge_shape_mismatch() {
        let mut a = SparseSketch::new(3, 12).unwrap();
        let b = SparseSketch::new(4, 12).unwrap();
        assert!(matches!(a.merge_from(&b), Err(Error::ShapeMismatch)));
    }

    #[test]
    fn merge_of_basis_sketches_decodes() {
        let mut a = sketch_of(4, 8, &[(2, 1)]);
        let b = sketch_of(4, 8, &[(5, 1)]);
        a.merge_from(&b).unwrap();
        assert_eq!(
            a.decode(),
            RecoveryResult::Exact(vec![(2, 1), (5, 1)])
        );
    }

    #[test]
    fn zero_sketch_decodes_empty() {
        let sk = SparseSketch::new(4, 16).unwrap();
        assert_eq!(sk.decode(), RecoveryResult::Exact(Vec::new()));
    }

    #[test]
    fn signed_two_sparse_decode() {
        let sk = sketch_of(4, 16, &[(3, 1), (7, -2)]);
        assert_eq!(
            sk.decode(),
            RecoveryResult::Exact(vec![(3, 1), (7, -2)])
        );
    }

    #[test]
    fn over_budget_vector_not_sparse() {
        // 2l+1 = 5 nonzeros with l = 2; re-encode or degree check must refuse.
        let sk = sketch_of(2, 16, &[(1, 1), (4, 2), (7, -1), (10, 3), (13, -2)]);
        assert_eq!(sk.decode(), RecoveryResult::NotSparse);
    }

    #[test]
    fn serialized_size_is_exact() {
        let sk = sketch_of(5, 32, &[(4, 9)]);
        let bytes = sk.serialize();
        assert_eq!(bytes.len(), serialized_len(5));
        assert_eq!(bytes.len() * 8, 2 * 5 * 64 + 24 * 8);
        let back = SparseSketch::deserialize(&bytes).unwrap();
        assert_eq!(back, sk);
    }

    #[test]
    fn exhaustive_small_exactness() {
        // All vectors with at most 2 nonzeros over m = 8, values in {-2,-1,1,2}.
        let m = 8;
        let ell = 2;
        let vals = [-2i64, -1, 1, 2];
        let mut cases = 0;
        for i in 1..=m {
            for &vi in &vals {
                let sk = sketch_of(ell, m, &[(i, vi)]);
                assert_eq!(sk.decode(), RecoveryResult::Exact(vec![(i, vi)]));
                cases += 1;
                for j in i + 1..=m {
                    for &vj in &vals {
                        let sk = sketch_of(ell, m, &[(i, vi), (j, vj)]);
                        assert_eq!(
                            sk.decode(),
                            RecoveryResult::Exact(vec![(i, vi), (j, vj)])
                        );
                        cases += 1;
                    }
                }
            }
        }
        assert!(cases > 100);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_sparse_round_trip(
            entries in proptest::collection::btree_map(1usize..=64, -1000i64..1000, 0..6)
        ) {
            let entries: BTreeMap<usize, i64> =
                entries.into_iter().filter(|&(_, v)| v != 0).collect();
            let list: Vec<(usize, i64)> = entries.into_iter().collect();
            let sk = sketch_of(6, 64, &list);
            prop_assert_eq!(sk.decode(), RecoveryResult::Exact(list));
        }

        #[test]
        fn sketch_linearity(
            a in proptest::collection::vec((1usize..=32, -50i64..50), 0..5),
            b in proptest::collection::vec((1usize..=32, -50i64..50), 0..5),
        ) {
            let mut joint = SparseSketch::new(4, 32).unwrap();
            for &(i, v) in a.iter().chain(b.iter()) {
                joint.update(i, v).unwrap();
            }
            let mut merged = sketch_of(4, 32, &a);
            merged.merge_from(&sketch_of(4, 32, &b)).unwrap();
            prop_assert_eq!(joint, merged);
        }

        #[test]
        fn injectivity_on_sparse_pairs(
            x in proptest::collection::btree_map(1usize..=24, -9i64..9, 1..4),
            y in proptest::collection::btree_map(1usize..=24, -9i64..9, 1..4),
        ) {
            let x: Vec<(usize, i64)> = x.into_iter().filter(|&(_, v)| v != 0).collect();
            let y: Vec<(usize, i64)> = y.into_iter().filter(|&(_, v)| v != 0).collect();
            prop_assume!(x != y);
            let a = sketch_of(3, 24, &x);
            let b = sketch_of(3, 24, &y);
            prop_assert_ne!(a.syndromes(), b.syndromes());
        }
    }
}
