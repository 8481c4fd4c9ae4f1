//! Exact linear algebra over prime fields.
//!
//! Everything here works with machine-word residues and double-width
//! intermediates; there is no floating point anywhere. Rank is computed by
//! sparse Gaussian elimination with Markowitz-style pivot selection (pick a
//! lightest column, then a lightest row inside it) to limit fill-in.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};

/// Trial-division primality test. Fast for the small characteristics this
/// crate works at; still exact for any machine-word input.
pub fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    for small in [2u64, 3] {
        if p == small {
            return true;
        }
        if p % small == 0 {
            return false;
        }
    }
    let mut d = 5u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= p) {
        if p % d == 0 || p % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Modular inverse via the extended Euclidean algorithm. `a` must be nonzero
/// modulo the prime `p`.
pub fn mod_inv(a: u64, p: u64) -> u64 {
    let a = a % p;
    assert!(a != 0, "zero has no inverse modulo {p}");
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quotient = old_r / r;
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
    }
    debug_assert_eq!(old_r, 1, "{a} is not invertible modulo {p}");
    old_s.rem_euclid(p as i128) as u64
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// A residue paired with its (prime) modulus. Construction checks primality;
/// arithmetic rejects mixed moduli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u64,
    modulus: u64,
}

impl FpScalar {
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        if !is_prime_u64(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(FpScalar { value: value % modulus, modulus })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FpScalar) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus, right: other.modulus });
        }
        Ok(())
    }

    pub fn add(&self, other: &FpScalar) -> Result<FpScalar> {
        self.check(other)?;
        Ok(FpScalar { value: (self.value + other.value) % self.modulus, modulus: self.modulus })
    }

    pub fn sub(&self, other: &FpScalar) -> Result<FpScalar> {
        self.check(other)?;
        Ok(FpScalar { value: sub_mod(self.value, other.value, self.modulus), modulus: self.modulus })
    }

    pub fn mul(&self, other: &FpScalar) -> Result<FpScalar> {
        self.check(other)?;
        Ok(FpScalar { value: mul_mod(self.value, other.value, self.modulus), modulus: self.modulus })
    }

    pub fn neg(&self) -> FpScalar {
        FpScalar { value: if self.value == 0 { 0 } else { self.modulus - self.value }, modulus: self.modulus }
    }

    pub fn inv(&self) -> FpScalar {
        FpScalar { value: mod_inv(self.value, self.modulus), modulus: self.modulus }
    }
}

/// Sparse matrix over a fixed prime field. Zero entries are never stored.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    nrows: u32,
    ncols: u32,
    p: u64,
    entries: BTreeMap<(u32, u32), u64>,
}

impl SparseMatrix {
    pub fn new(nrows: u32, ncols: u32, p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(SparseMatrix { nrows, ncols, p, entries: BTreeMap::new() })
    }

    pub fn nrows(&self) -> u32 {
        self.nrows
    }

    pub fn ncols(&self) -> u32 {
        self.ncols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Sets an entry from a raw residue (reduced mod p; zero clears).
    pub fn set(&mut self, row: u32, col: u32, value: u64) -> Result<()> {
        if row >= self.nrows || col >= self.ncols {
            return Err(Error::InvalidQuery(format!(
                "entry ({row}, {col}) outside {}x{} matrix",
                self.nrows, self.ncols
            )));
        }
        let v = value % self.p;
        if v == 0 {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
        Ok(())
    }

    /// Sets an entry from a typed scalar, rejecting foreign moduli.
    pub fn set_scalar(&mut self, row: u32, col: u32, value: FpScalar) -> Result<()> {
        if value.modulus() != self.p {
            return Err(Error::ModulusMismatch { left: self.p, right: value.modulus() });
        }
        self.set(row, col, value.value())
    }

    pub fn get(&self, row: u32, col: u32) -> u64 {
        *self.entries.get(&(row, col)).unwrap_or(&0)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            p: self.p,
            entries: BTreeMap::new(),
        };
        for (&(r, c), &v) in &self.entries {
            out.entries.insert((c, r), v);
        }
        out
    }

    /// Rank by sparse elimination. Pivots are chosen Markowitz-style: the
    /// lightest active column first, then the lightest row within it, so
    /// structured matrices keep their fill-in moderate. The result does not
    /// depend on pivot order.
    pub fn rank(&self) -> u32 {
        let p = self.p;
        let mut rows: Vec<HashMap<u32, u64>> = vec![HashMap::new(); self.nrows as usize];
        let mut col_rows: HashMap<u32, HashSet<u32>> = HashMap::new();
        for (&(r, c), &v) in &self.entries {
            rows[r as usize].insert(c, v);
            col_rows.entry(c).or_default().insert(r);
        }
        let mut rank = 0u32;
        loop {
            // lightest active column
            let pivot_col = match col_rows
                .iter()
                .filter(|(_, rs)| !rs.is_empty())
                .min_by_key(|(c, rs)| (rs.len(), **c))
            {
                Some((&c, _)) => c,
                None => break,
            };
            // lightest row within it
            let pivot_row = *col_rows[&pivot_col]
                .iter()
                .min_by_key(|&&r| (rows[r as usize].len(), r))
                .unwrap();
            let pivot_val = rows[pivot_row as usize][&pivot_col];
            let pivot_inv = mod_inv(pivot_val, p);

            let pivot_entries: Vec<(u32, u64)> =
                rows[pivot_row as usize].iter().map(|(&c, &v)| (c, v)).collect();
            let victims: Vec<u32> = col_rows[&pivot_col]
                .iter()
                .copied()
                .filter(|&r| r != pivot_row)
                .collect();
            for victim in victims {
                let factor = mul_mod(rows[victim as usize][&pivot_col], pivot_inv, p);
                for &(c, v) in &pivot_entries {
                    let delta = mul_mod(factor, v, p);
                    let slot = rows[victim as usize].entry(c).or_insert(0);
                    let updated = sub_mod(*slot, delta, p);
                    if updated == 0 {
                        rows[victim as usize].remove(&c);
                        col_rows.entry(c).or_default().remove(&victim);
                    } else {
                        let was_zero = *slot == 0;
                        *slot = updated;
                        if was_zero {
                            col_rows.entry(c).or_default().insert(victim);
                        }
                    }
                }
            }
            // retire the pivot row and column
            for (&c, _) in rows[pivot_row as usize].clone().iter() {
                col_rows.entry(c).or_default().remove(&pivot_row);
            }
            rows[pivot_row as usize].clear();
            col_rows.remove(&pivot_col);
            rank += 1;
        }
        rank
    }
}

/// Dimension of the span of sparse row vectors: the rank of the stacked
/// matrix. Rows are `(column, residue)` pairs.
pub fn row_span_dim(p: u64, ncols: u32, rows: &[Vec<(u32, u64)>]) -> Result<u32> {
    let nrows = u32::try_from(rows.len())
        .map_err(|_| Error::Overflow("row count exceeds u32".into()))?;
    let mut m = SparseMatrix::new(nrows, ncols, p)?;
    for (r, row) in rows.iter().enumerate() {
        for &(c, v) in row {
            let existing = m.get(r as u32, c);
            m.set(r as u32, c, (existing + v) % p)?;
        }
    }
    Ok(m.rank())
}

/// Incremental dense echelon form over F_p, used wherever a subspace is grown
/// vector by vector (ideal spans in truncated algebras, span comparisons).
/// Rows are normalized to a unit pivot; the form is not fully reduced.
#[derive(Debug, Clone)]
pub struct Echelon {
    p: u64,
    ncols: usize,
    /// pivot column -> normalized row
    rows: BTreeMap<usize, Vec<u64>>,
}

impl Echelon {
    pub fn new(p: u64, ncols: usize) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Echelon { p, ncols, rows: BTreeMap::new() })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `v` against the current rows in place.
    pub fn reduce(&self, v: &mut [u64]) {
        assert_eq!(v.len(), self.ncols);
        for (&col, row) in &self.rows {
            let coeff = v[col];
            if coeff != 0 {
                for (slot, &rv) in v.iter_mut().zip(row.iter()) {
                    if rv != 0 {
                        *slot = sub_mod(*slot, mul_mod(coeff, rv, self.p), self.p);
                    }
                }
            }
        }
    }

    /// Inserts a vector; returns its pivot column if it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<u64>) -> Option<usize> {
        self.reduce(&mut v);
        let pivot = v.iter().position(|&x| x != 0)?;
        let inv = mod_inv(v[pivot], self.p);
        for x in v.iter_mut() {
            if *x != 0 {
                *x = mul_mod(*x, inv, self.p);
            }
        }
        self.rows.insert(pivot, v);
        Some(pivot)
    }

    /// Whether `v` already lies in the span.
    pub fn contains(&self, v: &[u64]) -> bool {
        let mut copy = v.to_vec();
        self.reduce(&mut copy);
        copy.iter().all(|&x| x == 0)
    }

    /// Whether the two spans are equal (mutual containment).
    pub fn same_span(&self, other: &Echelon) -> bool {
        self.dim() == other.dim()
            && self.rows.values().all(|r| other.contains(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // ------------------------------------------------------------------
    // Oracle: dense textbook Gaussian elimination, written before the
    // sparse implementation was trusted with anything.
    // ------------------------------------------------------------------

    fn dense_rank(matrix: &[Vec<u64>], p: u64) -> u32 {
        let mut m: Vec<Vec<u64>> = matrix
            .iter()
            .map(|row| row.iter().map(|&v| v % p).collect())
            .collect();
        if m.is_empty() {
            return 0;
        }
        let ncols = m[0].len();
        let mut rank = 0usize;
        for col in 0..ncols {
            let pivot = (rank..m.len()).find(|&r| m[r][col] != 0);
            let Some(pivot) = pivot else { continue };
            m.swap(rank, pivot);
            let inv = mod_inv(m[rank][col], p);
            for c in 0..ncols {
                m[rank][c] = mul_mod(m[rank][c], inv, p);
            }
            for r in 0..m.len() {
                if r != rank && m[r][col] != 0 {
                    let f = m[r][col];
                    for c in 0..ncols {
                        m[r][c] = sub_mod(m[r][c], mul_mod(f, m[rank][c], p), p);
                    }
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank as u32
    }

    fn from_dense(matrix: &[Vec<u64>], p: u64) -> SparseMatrix {
        let nrows = matrix.len() as u32;
        let ncols = matrix.first().map_or(0, |r| r.len()) as u32;
        let mut m = SparseMatrix::new(nrows, ncols, p).unwrap();
        for (r, row) in matrix.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r as u32, c as u32, v).unwrap();
            }
        }
        m
    }

    #[test]
    fn primality_table() {
        let primes = [2u64, 3, 5, 7, 11, 13, 97, 101, 65537];
        for p in primes {
            assert!(is_prime_u64(p), "{p} is prime");
        }
        for np in [0u64, 1, 4, 6, 9, 15, 91, 65536] {
            assert!(!is_prime_u64(np), "{np} is not prime");
        }
    }

    #[test]
    fn scalar_construction_requires_prime_modulus() {
        assert!(FpScalar::new(1, 7).is_ok());
        assert_eq!(FpScalar::new(1, 4), Err(Error::NotPrime(4)));
        assert_eq!(FpScalar::new(0, 1), Err(Error::NotPrime(1)));
        let a = FpScalar::new(3, 5).unwrap();
        let b = FpScalar::new(4, 7).unwrap();
        assert_eq!(a.add(&b), Err(Error::ModulusMismatch { left: 5, right: 7 }));
    }

    #[test]
    fn scalar_field_arithmetic() {
        let p = 7;
        for v in 1..p {
            let a = FpScalar::new(v, p).unwrap();
            assert_eq!(a.mul(&a.inv()).unwrap().value(), 1);
            assert_eq!(a.add(&a.neg()).unwrap().value(), 0);
        }
        let a = FpScalar::new(12, 7).unwrap();
        assert_eq!(a.value(), 5);
        let b = FpScalar::new(3, 7).unwrap();
        assert_eq!(a.sub(&b).unwrap().value(), 2);
        assert_eq!(a.mul(&b).unwrap().value(), 1);
    }

    #[test]
    fn rank_hand_examples() {
        let id3 = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(from_dense(&id3, 5).rank(), 3);

        let proportional = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(from_dense(&proportional, 5).rank(), 1);
        // ...but modulo 2 the second row is already zero
        assert_eq!(from_dense(&proportional, 2).rank(), 1);

        let zero = vec![vec![0, 0], vec![0, 0]];
        assert_eq!(from_dense(&zero, 3).rank(), 0);

        // 2x + y = 0 and x + 2y = 0 are independent mod 5, dependent mod 3
        let m = vec![vec![2, 1], vec![1, 2]];
        assert_eq!(from_dense(&m, 5).rank(), 2);
        assert_eq!(from_dense(&m, 3).rank(), 1);
    }

    #[test]
    fn row_span_dim_accumulates_duplicate_coordinates() {
        // the same coordinate listed twice sums before ranking:
        // 1 + 2 = 0 mod 3, so the first row vanishes entirely
        let rows = vec![vec![(0u32, 1u64), (0, 2)], vec![(1, 1)]];
        assert_eq!(row_span_dim(3, 2, &rows).unwrap(), 1);
        let rows = vec![vec![(0u32, 1u64), (0, 1)]]; // 1 + 1 = 2, nonzero
        assert_eq!(row_span_dim(3, 2, &rows).unwrap(), 1);
    }

    #[test]
    fn echelon_span_tracking() {
        let mut e = Echelon::new(5, 3).unwrap();
        assert_eq!(e.insert(vec![0, 2, 1]), Some(1));
        assert_eq!(e.insert(vec![0, 4, 2]), None); // scalar multiple
        assert_eq!(e.insert(vec![3, 0, 0]), Some(0));
        assert_eq!(e.dim(), 2);
        assert!(e.contains(&[3, 2, 1]));
        assert!(!e.contains(&[0, 0, 1]));

        let mut f = Echelon::new(5, 3).unwrap();
        f.insert(vec![1, 0, 0]).unwrap();
        f.insert(vec![1, 2, 1]).unwrap();
        assert!(e.same_span(&f));
    }

    fn arb_matrix() -> impl Strategy<Value = (Vec<Vec<u64>>, u64)> {
        let p = proptest::sample::select(vec![2u64, 3, 5, 7, 101]);
        (1usize..12, 1usize..12, p).prop_flat_map(|(nr, nc, p)| {
            proptest::collection::vec(proptest::collection::vec(0u64..p, nc), nr)
                .prop_map(move |m| (m, p))
        })
    }

    proptest! {
        #[test]
        fn sparse_rank_matches_dense_oracle((m, p) in arb_matrix()) {
            prop_assert_eq!(from_dense(&m, p).rank(), dense_rank(&m, p));
        }

        #[test]
        fn rank_of_transpose_is_equal((m, p) in arb_matrix()) {
            let sm = from_dense(&m, p);
            prop_assert_eq!(sm.rank(), sm.transpose().rank());
        }

        #[test]
        fn rank_bounded_by_shape((m, p) in arb_matrix()) {
            let sm = from_dense(&m, p);
            prop_assert!(sm.rank() <= sm.nrows().min(sm.ncols()));
        }

        #[test]
        fn echelon_dim_matches_rank((m, p) in arb_matrix()) {
            let ncols = m[0].len();
            let mut e = Echelon::new(p, ncols).unwrap();
            for row in &m {
                e.insert(row.clone());
            }
            prop_assert_eq!(e.dim() as u32, dense_rank(&m, p));
        }
    }
}
