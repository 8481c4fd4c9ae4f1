//! Monomials and monomial ideals with exact staircase counting.
//!
//! A monomial is an exponent vector over a fixed ambient variable list; a
//! monomial ideal is kept as its unique minimal generating set, sorted, so
//! structural equality is semantic equality. Colengths (vector-space
//! dimensions of quotients) are computed by recursing on the first variable
//! of the staircase, never by materializing quotient bases.
//!
//! Frobenius bracket powers `I^[q]` raise each generator to the `q`-th power,
//! which generates the correct ideal because the generators are monomials.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A monomial in `n` variables, stored as its exponent vector.
///
/// The derived `Ord` is plain lexicographic on exponent vectors; canonical
/// generator lists are kept in the reverse of it so `x1`-heavy generators
/// print first, and graded contexts use [`Monomial::graded_lex_cmp`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    /// The monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    /// The variable `x_i` (0-based index) in `n` variables.
    pub fn var(i: usize, n: usize) -> Self {
        assert!(i < n, "variable index {i} out of range for {n} variables");
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn vars(&self) -> usize {
        self.exps.len()
    }

    /// Total degree as a u64 (individual exponents are u32).
    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check_vars(other)?;
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| {
                a.checked_add(b).ok_or_else(|| Error::Overflow("monomial exponent".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(Monomial { exps })
    }

    /// Whether `self` divides `other` coordinatewise.
    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    /// Exact quotient `other / self`; requires divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        assert!(self.divides(other), "monomial quotient requires divisibility");
        let exps = other.exps.iter().zip(&self.exps).map(|(&b, &a)| b - a).collect();
        Monomial { exps }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self.exps.iter().zip(&other.exps).map(|(&a, &b)| a.max(b)).collect();
        Monomial { exps }
    }

    pub fn pow(&self, k: u64) -> Result<Monomial> {
        let exps = self
            .exps
            .iter()
            .map(|&e| {
                let raised = (e as u64).checked_mul(k);
                match raised {
                    Some(v) if v <= u32::MAX as u64 => Ok(v as u32),
                    _ => Err(Error::Overflow(format!("exponent {e} * {k}"))),
                }
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(Monomial { exps })
    }

    /// Variables that appear with a positive exponent, as a bitmask.
    fn support_mask(&self) -> u64 {
        assert!(self.exps.len() <= 64, "supports beyond 64 variables are not needed here");
        let mut mask = 0u64;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// Graded-lex comparison with earlier variables dominant: total degree
    /// first, then `x1 > x2 > ...`, so the sequence starts
    /// `1, x1, x2, x1^2, x1*x2, x2^2, ...`.
    pub fn graded_lex_cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.cmp(self))
    }

    fn check_vars(&self, other: &Monomial) -> Result<()> {
        if self.exps.len() != other.exps.len() {
            return Err(Error::MismatchedVars { left: self.exps.len(), right: other.exps.len() });
        }
        Ok(())
    }

    /// Parses text like `x1^2*x3` against a variable label list. `1` denotes
    /// the empty product; repeated factors of the same variable accumulate.
    pub fn parse(text: &str, labels: &[String]) -> Result<Monomial> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(Error::parse("empty monomial"));
        }
        let mut exps = vec![0u32; labels.len()];
        for factor in trimmed.split('*') {
            let factor = factor.trim();
            if factor == "1" {
                continue;
            }
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => {
                    let power: u32 = p.trim().parse().map_err(|_| {
                        Error::parse(format!("bad exponent {p:?} in monomial {text:?}"))
                    })?;
                    (n.trim(), power)
                }
                None => (factor, 1),
            };
            let idx = labels.iter().position(|l| l == name).ok_or_else(|| {
                Error::parse(format!("unknown variable {name:?} in monomial {text:?}"))
            })?;
            exps[idx] = exps[idx]
                .checked_add(power)
                .ok_or_else(|| Error::Overflow("monomial exponent".into()))?;
        }
        Ok(Monomial { exps })
    }

    /// Canonical rendering against a label list: factors in variable order,
    /// `^` only for exponents above 1, `1` for the empty product.
    pub fn display(&self, labels: &[String]) -> String {
        assert_eq!(labels.len(), self.exps.len());
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(labels[i].clone()),
                _ => parts.push(format!("{}^{}", labels[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&default_labels(self.exps.len())))
    }
}

/// The default 1-based labels `x1, x2, ...`.
pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// A monomial ideal held as its minimal generating set, sorted.
///
/// The zero ideal has no generators; the unit ideal is generated by `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    vars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Builds an ideal from arbitrary generators, minimalizing them.
    pub fn new(vars: usize, gens: Vec<Monomial>) -> Result<Self> {
        for g in &gens {
            if g.vars() != vars {
                return Err(Error::MismatchedVars { left: vars, right: g.vars() });
            }
        }
        let mut raw: Vec<Vec<u32>> = gens.into_iter().map(|g| g.exps).collect();
        minimalize_raw(&mut raw);
        Ok(MonomialIdeal { vars, gens: raw.into_iter().map(Monomial::from_exps).collect() })
    }

    pub fn zero(vars: usize) -> Self {
        MonomialIdeal { vars, gens: Vec::new() }
    }

    pub fn unit(vars: usize) -> Self {
        MonomialIdeal { vars, gens: vec![Monomial::one(vars)] }
    }

    /// The maximal ideal `(x_1, ..., x_n)`.
    pub fn maximal(vars: usize) -> Self {
        MonomialIdeal { vars, gens: (0..vars).map(|i| Monomial::var(i, vars)).collect() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    /// Whether this is exactly the maximal ideal of the ambient ring.
    pub fn is_maximal(&self) -> bool {
        self.vars > 0
            && self.gens.len() == self.vars
            && self.gens.iter().all(|g| g.degree() == 1)
    }

    /// Membership test: some generator divides `m`.
    pub fn contains(&self, m: &Monomial) -> bool {
        debug_assert_eq!(m.vars(), self.vars);
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Frobenius bracket power: each generator raised to the `q`-th power.
    pub fn bracket_power(&self, q: u64) -> Result<MonomialIdeal> {
        let gens = self.gens.iter().map(|g| g.pow(q)).collect::<Result<Vec<_>>>()?;
        MonomialIdeal::new(self.vars, gens)
    }

    /// Pairwise product ideal `I * J`, minimalized.
    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        if self.vars != other.vars {
            return Err(Error::MismatchedVars { left: self.vars, right: other.vars });
        }
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b)?);
            }
        }
        MonomialIdeal::new(self.vars, gens)
    }

    /// Ordinary power `I^n`, minimalizing after every multiplication step so
    /// intermediate generator lists stay small. `I^0` is the unit ideal.
    pub fn ordinary_power(&self, n: u32) -> Result<MonomialIdeal> {
        if n == 0 {
            return Ok(MonomialIdeal::unit(self.vars));
        }
        if let Some(support) = self.pure_linear_support() {
            return self.power_of_linear_span(&support, n);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// When every generator is a distinct variable, returns those variable
    /// indices; powers of such ideals are written down combinatorially.
    fn pure_linear_support(&self) -> Option<Vec<usize>> {
        let mut support = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            if g.degree() != 1 {
                return None;
            }
            support.push(g.exps.iter().position(|&e| e == 1).unwrap());
        }
        Some(support)
    }

    /// All degree-`n` monomials on the given variables; this is the minimal
    /// generating set of `(x_i : i in support)^n`.
    fn power_of_linear_span(&self, support: &[usize], n: u32) -> Result<MonomialIdeal> {
        let mut gens = Vec::new();
        let mut current = vec![0u32; support.len()];
        compositions(n, support.len(), 0, &mut current, &mut |parts| {
            let mut exps = vec![0u32; self.vars];
            for (slot, &var) in support.iter().enumerate() {
                exps[var] = parts[slot];
            }
            gens.push(Monomial::from_exps(exps));
        });
        MonomialIdeal::new(self.vars, gens)
    }

    /// Ideal sum `I + J`, minimalized.
    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        if self.vars != other.vars {
            return Err(Error::MismatchedVars { left: self.vars, right: other.vars });
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        MonomialIdeal::new(self.vars, gens)
    }

    /// An ideal is artinian exactly when every variable has some pure power
    /// among the generators (equivalently, the staircase is finite).
    pub fn is_artinian(&self) -> bool {
        (0..self.vars).all(|v| {
            self.gens
                .iter()
                .any(|g| g.exps.iter().enumerate().all(|(i, &e)| i == v || e == 0))
        })
    }

    /// Colength: the number of standard monomials (monomials outside the
    /// ideal), optionally restricted to total degree below `degree_cap`.
    /// A cap plays the role of adding `m^cap` without materializing it.
    ///
    /// Without a cap the ideal must be artinian.
    pub fn colength(&self, degree_cap: Option<u32>) -> Result<u64> {
        if degree_cap.is_none() && !self.is_artinian() {
            return Err(Error::NotArtinian);
        }
        let raw: Vec<Vec<u32>> = self.gens.iter().map(|g| g.exps.clone()).collect();
        let mut memo = HashMap::new();
        Ok(count_standard(&raw, self.vars, degree_cap, &mut memo))
    }

    /// The standard monomials themselves, sorted in graded-lex order. This is
    /// the basis indexing used by every matrix built on top of a quotient.
    pub fn standard_monomials(&self, degree_cap: Option<u32>) -> Result<Vec<Monomial>> {
        if degree_cap.is_none() && !self.is_artinian() {
            return Err(Error::NotArtinian);
        }
        let raw: Vec<Vec<u32>> = self.gens.iter().map(|g| g.exps.clone()).collect();
        let mut prefix = Vec::with_capacity(self.vars);
        let mut out = Vec::new();
        collect_standard(&raw, self.vars, degree_cap, &mut prefix, &mut out);
        let mut monomials: Vec<Monomial> = out.into_iter().map(Monomial::from_exps).collect();
        monomials.sort_by(|a, b| a.graded_lex_cmp(b));
        Ok(monomials)
    }

    /// Krull dimension of the quotient by this ideal: the largest number of
    /// variables avoiding the support of every generator. `None` for the
    /// unit ideal (the zero ring).
    pub fn krull_dimension(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        assert!(self.vars <= 64, "dimension search uses 64-bit support masks");
        let supports: Vec<u64> = self.gens.iter().map(|g| g.support_mask()).collect();
        let mut best = 0usize;
        for mask in 0u64..(1u64 << self.vars) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            if supports.iter().all(|&s| s & !mask != 0) {
                best = size;
            }
        }
        Some(best)
    }

    /// Parses `(g1, g2, ...)`; `()` is the zero ideal.
    pub fn parse(text: &str, labels: &[String]) -> Result<MonomialIdeal> {
        let trimmed = text.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::parse(format!("ideal {text:?} must be parenthesized")))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(MonomialIdeal::zero(labels.len()));
        }
        let gens = inner
            .split(',')
            .map(|part| Monomial::parse(part, labels))
            .collect::<Result<Vec<_>>>()?;
        MonomialIdeal::new(labels.len(), gens)
    }

    /// Canonical rendering matching `parse`.
    pub fn display(&self, labels: &[String]) -> String {
        let parts: Vec<String> = self.gens.iter().map(|g| g.display(labels)).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&default_labels(self.vars)))
    }
}

/// Enumerates weak compositions of `total` into `slots` parts.
fn compositions(total: u32, slots: usize, at: usize, current: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if slots == 0 {
        if total == 0 {
            emit(&[]);
        }
        return;
    }
    if at == slots - 1 {
        current[at] = total;
        emit(current);
        return;
    }
    for take in 0..=total {
        current[at] = take;
        compositions(total - take, slots, at + 1, current, emit);
    }
}

/// Removes duplicate and divisible generators in place and leaves the list
/// in the canonical order: descending lex, so `x1`-heavy generators first.
fn minimalize_raw(gens: &mut Vec<Vec<u32>>) {
    gens.sort();
    gens.dedup();
    let snapshot = gens.clone();
    gens.retain(|g| {
        !snapshot
            .iter()
            .any(|h| h != g && h.iter().zip(g.iter()).all(|(&a, &b)| a <= b))
    });
    gens.reverse();
}

/// Memo key: the deflated generator set (sorted) plus the remaining cap.
type StairKey = (Vec<Vec<u32>>, Option<u32>);

/// Counts standard monomials by recursing on the first remaining variable.
///
/// For each exponent `t` of that variable, the monomials with that exact
/// exponent correspond to standard monomials of the deflated ideal generated
/// by the tails of generators whose first exponent is at most `t`. When no
/// cap is active, consecutive `t` values between generator thresholds share
/// a deflation and are counted as a block.
fn count_standard(
    gens: &[Vec<u32>],
    vars: usize,
    cap: Option<u32>,
    memo: &mut HashMap<StairKey, u64>,
) -> u64 {
    if cap == Some(0) {
        return 0;
    }
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return 0; // unit ideal
    }
    if vars == 0 {
        return 1;
    }
    let key: StairKey = (gens.to_vec(), cap);
    if let Some(&hit) = memo.get(&key) {
        return hit;
    }

    // Bound on the first-variable exponent: the least pure power present.
    let pure_bound = gens
        .iter()
        .filter(|g| g[1..].iter().all(|&e| e == 0))
        .map(|g| g[0])
        .min();
    let bound = match (pure_bound, cap) {
        (Some(b), Some(c)) => b.min(c),
        (Some(b), None) => b,
        (None, Some(c)) => c,
        (None, None) => unreachable!("artinian precondition checked by caller"),
    };

    let mut thresholds: Vec<u32> = gens.iter().map(|g| g[0]).filter(|&t| t < bound).collect();
    thresholds.push(0);
    thresholds.push(bound);
    thresholds.sort_unstable();
    thresholds.dedup();

    let mut total = 0u64;
    for window in thresholds.windows(2) {
        let (lo, hi) = (window[0], window[1]);
        let mut deflated: Vec<Vec<u32>> = gens
            .iter()
            .filter(|g| g[0] <= lo)
            .map(|g| g[1..].to_vec())
            .collect();
        minimalize_raw(&mut deflated);
        match cap {
            None => {
                let per = count_standard(&deflated, vars - 1, None, memo);
                total += per * (hi - lo) as u64;
            }
            Some(c) => {
                for t in lo..hi {
                    total += count_standard(&deflated, vars - 1, Some(c - t), memo);
                }
            }
        }
    }
    memo.insert(key, total);
    total
}

/// Same recursion as `count_standard`, collecting exponent vectors.
fn collect_standard(
    gens: &[Vec<u32>],
    vars: usize,
    cap: Option<u32>,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if cap == Some(0) {
        return;
    }
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return;
    }
    if vars == 0 {
        out.push(prefix.clone());
        return;
    }
    let pure_bound = gens
        .iter()
        .filter(|g| g[1..].iter().all(|&e| e == 0))
        .map(|g| g[0])
        .min();
    let bound = match (pure_bound, cap) {
        (Some(b), Some(c)) => b.min(c),
        (Some(b), None) => b,
        (None, Some(c)) => c,
        (None, None) => panic!("artinian precondition checked by caller"),
    };
    for t in 0..bound {
        let mut deflated: Vec<Vec<u32>> = gens
            .iter()
            .filter(|g| g[0] <= t)
            .map(|g| g[1..].to_vec())
            .collect();
        minimalize_raw(&mut deflated);
        prefix.push(t);
        collect_standard(&deflated, vars - 1, cap.map(|c| c - t), prefix, out);
        prefix.pop();
    }
}
