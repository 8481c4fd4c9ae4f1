//! Normalizers, zigzag constants, and finite-Frobenius-step estimation.
//!
//! The normalized colength of an expanded pair at `q = p^e` is
//! `length / q^d`; its limit over `e` is the h-value and dividing by the
//! normalizer turns it into the interpolated multiplicity. Nothing here
//! asserts convergence: estimates carry their raw samples, the gap between
//! the last two normalized values, and a Richardson extrapolation under a
//! `1/q` error model (exact for regular presentations, first-order in all
//! monomial examples).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;
use crate::ratio::{factorial, binomial, pow_u64, rat_pow, rat_u, Rat};
use crate::ring::{expand_pair, IdealSpec, ModuleSpec, RingPresentation};

/// Volume of the corner simplex `{x in [0,1]^d : sum x_i <= s}`, the
/// h-value of a d-dimensional regular ring, used as the normalizing factor
/// for interpolated multiplicities.
pub fn normalizer(s: &Rat, d: usize) -> Rat {
    assert!(s > &Rat::zero(), "normalizer needs s > 0");
    let d_fact = Rat::from(factorial(d));
    let floor_s = (s.floor().to_integer()).min(BigInt::from(d));
    let mut total = Rat::zero();
    let mut i = BigInt::zero();
    let mut sign = BigInt::one();
    while i <= floor_s {
        let idx = usize::try_from(u64::try_from(i.clone()).expect("small index"))
            .expect("small index");
        let choose = Rat::from(binomial(d, idx) * &sign);
        let base = s - Rat::from(i.clone());
        total += choose * rat_pow(&base, d as u32);
        i += 1;
        sign = -sign;
    }
    total / d_fact
}

/// Zigzag numbers `c_1..c_n`: the Taylor coefficients of `sec x + tan x`
/// scaled by the factorial, computed by the boustrophedon recurrence.
pub fn zigzag_constants(n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n);
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for _ in 1..=n {
        let mut next: Vec<BigInt> = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::zero());
        for prev in row.iter().rev() {
            let last = next.last().expect("next starts nonempty").clone();
            next.push(last + prev);
        }
        out.push(next.last().expect("nonempty").clone());
        row = next;
    }
    out
}

/// The conjectured lower bound `1 + c_d/d!` for the Hilbert-Kunz
/// multiplicity of a d-dimensional non-regular ring.
pub fn zigzag_bound(d: usize) -> Rat {
    assert!(d >= 1, "the bound needs d >= 1");
    let c = zigzag_constants(d).pop().expect("d >= 1");
    Rat::one() + Rat::from(c) / Rat::from(factorial(d))
}

/// One evaluation request: which ring and module, which ideal pair, which
/// interpolation parameter, and which Frobenius exponents to sample.
#[derive(Debug, Clone)]
pub struct HQuery {
    pub ring: RingPresentation,
    pub module: ModuleSpec,
    pub i: IdealSpec,
    pub j: IdealSpec,
    pub s: Rat,
    pub e_range: Vec<u32>,
    pub normalizing_dim: usize,
}

impl HQuery {
    /// A query normalized by the ring's own declared dimension.
    pub fn new(
        ring: RingPresentation,
        module: ModuleSpec,
        i: IdealSpec,
        j: IdealSpec,
        s: Rat,
        e_range: Vec<u32>,
    ) -> Result<Self> {
        let normalizing_dim = ring.declared_dim();
        HQuery { ring, module, i, j, s, e_range, normalizing_dim }.validated()
    }

    /// Overrides the normalizing dimension (needed when the module's
    /// dimension differs from the ring's, as in mixed-dimension additivity).
    pub fn with_normalizing_dim(mut self, d: usize) -> Self {
        self.normalizing_dim = d;
        self
    }

    fn validated(self) -> Result<Self> {
        if self.s <= Rat::zero() {
            return Err(Error::InvalidQuery("s must be positive".into()));
        }
        if self.e_range.is_empty() {
            return Err(Error::InvalidQuery("e_range must be nonempty".into()));
        }
        if self.e_range.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidQuery("e_range must be strictly increasing".into()));
        }
        if self.i.vars() != self.ring.vars() || self.j.vars() != self.ring.vars() {
            return Err(Error::MismatchedVars {
                left: self.ring.vars(),
                right: self.i.vars().max(self.j.vars()),
            });
        }
        Ok(self)
    }

    /// The everywhere-maximal query: I = J = m, the free module.
    pub fn principal(ring: RingPresentation, s: Rat, e_range: Vec<u32>) -> Result<Self> {
        let m = MonomialIdeal::maximal(ring.vars());
        let module = ModuleSpec::free(ring.vars());
        HQuery::new(ring, module, m.clone(), m, s, e_range)
    }
}

/// One measured point of an estimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub e: u32,
    pub q: u64,
    pub length: u64,
    pub normalized: Rat,
}

/// A finite sequence of normalized samples with its extrapolation.
///
/// `richardson` eliminates a `c/q` error term using the last two samples;
/// `gap` is the absolute difference of the last two normalized values. A
/// single-sample estimate reports itself as both extrapolation and gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HEstimate {
    pub samples: Vec<Sample>,
    pub richardson: Rat,
    pub gap: Rat,
}

impl HEstimate {
    fn from_samples(samples: Vec<Sample>) -> HEstimate {
        let last = samples.last().expect("estimates carry at least one sample");
        let (richardson, gap) = match samples.len() {
            1 => (last.normalized.clone(), last.normalized.clone()),
            _ => {
                let prev = &samples[samples.len() - 2];
                let q1 = rat_u(prev.q);
                let q2 = rat_u(last.q);
                let r = (&q2 * &last.normalized - &q1 * &prev.normalized) / (q2 - q1);
                let gap = (&last.normalized - &prev.normalized).abs();
                (r, gap)
            }
        };
        HEstimate { samples, richardson, gap }
    }

    /// The final (largest-e) normalized value.
    pub fn last_value(&self) -> &Rat {
        &self.samples.last().expect("estimates carry at least one sample").normalized
    }

    fn scaled(mut self, factor: &Rat) -> HEstimate {
        for sample in &mut self.samples {
            sample.normalized *= factor;
        }
        self.richardson *= factor;
        self.gap *= factor;
        self
    }
}

/// Samples `length(M / (I^ceil(s q) + J^[q]) M) / q^d` over the requested
/// exponents and extrapolates.
pub fn h_estimate(query: &HQuery) -> Result<HEstimate> {
    let p = query.ring.p();
    let mut samples = Vec::with_capacity(query.e_range.len());
    for &e in &query.e_range {
        let q = pow_u64(p, e)?;
        let expanded = expand_pair(&query.i, &query.j, &query.s, q)?;
        let length =
            query.ring.module_length(&query.module, &expanded.ideal, expanded.degree_cap)?;
        let normalized = rat_u(length) / rat_pow(&rat_u(q), query.normalizing_dim as u32);
        samples.push(Sample { e, q, length, normalized });
    }
    Ok(HEstimate::from_samples(samples))
}

/// The h-estimate divided by the normalizer: finite-step approximations of
/// the interpolated multiplicity.
pub fn e_estimate(query: &HQuery) -> Result<HEstimate> {
    let h = h_estimate(query)?;
    let factor = normalizer(&query.s, query.normalizing_dim).recip();
    Ok(h.scaled(&factor))
}

/// Bracket-power and ordinary-power multiplicity estimates for the same
/// ideal: the two endpoints the interpolation connects. The ordinary-power
/// samples carry the `d!` factor and use `n = p^e` as the power.
pub fn endpoint_multiplicities(
    ring: &RingPresentation,
    module: &ModuleSpec,
    i: &IdealSpec,
    e_range: &[u32],
) -> Result<(HEstimate, HEstimate)> {
    if e_range.is_empty() {
        return Err(Error::InvalidQuery("e_range must be nonempty".into()));
    }
    if e_range.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidQuery("e_range must be strictly increasing".into()));
    }
    if i.vars() != ring.vars() {
        return Err(Error::MismatchedVars { left: ring.vars(), right: i.vars() });
    }
    let d = ring.declared_dim();
    let d_fact = Rat::from(factorial(d));
    let mut bracket_samples = Vec::with_capacity(e_range.len());
    let mut ordinary_samples = Vec::with_capacity(e_range.len());
    for &e in e_range {
        let q = pow_u64(ring.p(), e)?;
        let scale = rat_pow(&rat_u(q), d as u32);

        let bracket = i.bracket_power(q)?;
        let length = ring.module_length(module, &bracket, None)?;
        let normalized = rat_u(length) / &scale;
        bracket_samples.push(Sample { e, q, length, normalized });

        let n = u32::try_from(q).map_err(|_| Error::Overflow(format!("power {q} exceeds u32")))?;
        let (ideal, cap) = if i.is_maximal() {
            (MonomialIdeal::zero(ring.vars()), Some(n))
        } else {
            (i.ordinary_power(n)?, None)
        };
        let length = ring.module_length(module, &ideal, cap)?;
        let normalized = rat_u(length) * &d_fact / &scale;
        ordinary_samples.push(Sample { e, q, length, normalized });
    }
    Ok((
        HEstimate::from_samples(bracket_samples),
        HEstimate::from_samples(ordinary_samples),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;
    use crate::ratio::rat;
    use crate::ring::PolyRelation;
    use proptest::prelude::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn ideal_of(texts: &[&str], labels: &[String]) -> MonomialIdeal {
        MonomialIdeal::new(
            labels.len(),
            texts.iter().map(|t| Monomial::parse(t, labels).unwrap()).collect(),
        )
        .unwrap()
    }

    fn node(p: u64) -> RingPresentation {
        let l = labels(&["x", "y"]);
        RingPresentation::new(p, l.clone(), ideal_of(&["x*y"], &l), Vec::new(), 1).unwrap()
    }

    #[test]
    fn normalizer_hand_values() {
        assert_eq!(normalizer(&rat(1, 1), 2), rat(1, 2));
        assert_eq!(normalizer(&rat(1, 2), 3), rat(1, 48));
        assert_eq!(normalizer(&rat(2, 1), 2), rat(1, 1));
        assert_eq!(normalizer(&rat(1, 1), 0), rat(1, 1));
        assert_eq!(normalizer(&rat(3, 2), 1), rat(1, 1));
        assert_eq!(normalizer(&rat(5, 4), 2), rat(1, 1) - rat(9, 32));
    }

    // ------------------------------------------------------------------
    // Series oracle: expand (1 + sin x)/cos x with exact rationals and
    // compare against the boustrophedon output.
    // ------------------------------------------------------------------

    fn sin_series(n: usize) -> Vec<Rat> {
        (0..=n)
            .map(|k| {
                if k % 2 == 0 {
                    Rat::zero()
                } else {
                    let sign = if k % 4 == 1 { 1 } else { -1 };
                    rat(sign, 1) / Rat::from(factorial(k))
                }
            })
            .collect()
    }

    fn cos_series(n: usize) -> Vec<Rat> {
        (0..=n)
            .map(|k| {
                if k % 2 == 1 {
                    Rat::zero()
                } else {
                    let sign = if k % 4 == 0 { 1 } else { -1 };
                    rat(sign, 1) / Rat::from(factorial(k))
                }
            })
            .collect()
    }

    fn series_divide(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
        let n = num.len();
        let mut out = vec![Rat::zero(); n];
        for k in 0..n {
            let mut acc = num[k].clone();
            for j in 0..k {
                acc -= &out[j] * &den[k - j];
            }
            out[k] = acc / &den[0];
        }
        out
    }

    fn series_multiply(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let n = a.len();
        let mut out = vec![Rat::zero(); n];
        for k in 0..n {
            for j in 0..=k {
                out[k] += &a[j] * &b[k - j];
            }
        }
        out
    }

    #[test]
    fn zigzag_constants_match_series_division() {
        let n = 10;
        let one_plus_sin: Vec<Rat> = sin_series(n)
            .into_iter()
            .enumerate()
            .map(|(k, c)| if k == 0 { c + Rat::one() } else { c })
            .collect();
        let series = series_divide(&one_plus_sin, &cos_series(n));
        // the product route must reproduce the numerator exactly
        let back = series_multiply(&series, &cos_series(n));
        assert_eq!(back, one_plus_sin, "series division is consistent");
        let constants = zigzag_constants(n);
        for d in 1..=n {
            let expected = &series[d] * Rat::from(factorial(d));
            assert_eq!(Rat::from(constants[d - 1].clone()), expected, "c_{d}");
        }
    }

    #[test]
    fn zigzag_constants_first_values() {
        let c = zigzag_constants(8);
        let want: Vec<BigInt> = [1u64, 1, 2, 5, 16, 61, 272, 1385]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(c, want);
        assert_eq!(zigzag_bound(2), rat(3, 2));
        assert_eq!(zigzag_bound(1), rat(2, 1));
        assert_eq!(zigzag_bound(3), rat(4, 3));
    }

    #[test]
    fn regular_plane_samples_and_extrapolation() {
        let r = RingPresentation::regular(3, labels(&["x", "y"])).unwrap();
        let query = HQuery::principal(r, rat(1, 1), vec![1, 2]).unwrap();
        let est = h_estimate(&query).unwrap();
        assert_eq!(est.samples[0].length, 6);
        assert_eq!(est.samples[1].length, 45);
        assert_eq!(est.samples[1].normalized, rat(5, 9));
        assert_eq!(est.richardson, rat(1, 2), "regular extrapolation is exact");
        let e = e_estimate(&query).unwrap();
        assert_eq!(e.richardson, rat(1, 1));
    }

    #[test]
    fn node_samples_and_extrapolation() {
        let query = HQuery::principal(node(3), rat(2, 1), vec![2, 3]).unwrap();
        let est = h_estimate(&query).unwrap();
        assert_eq!(est.samples[1].normalized, rat(2, 1) - rat(1, 27));
        assert_eq!(est.richardson, rat(2, 1));
        assert_eq!(est.gap, rat(1, 9) - rat(1, 27));
        let e = e_estimate(&query).unwrap();
        assert_eq!(e.richardson, rat(2, 1), "normalizer is 1 for s >= d");
    }

    #[test]
    fn single_sample_estimates_report_themselves() {
        let query = HQuery::principal(node(3), rat(1, 1), vec![2]).unwrap();
        let est = h_estimate(&query).unwrap();
        assert_eq!(est.samples.len(), 1);
        assert_eq!(est.richardson, est.samples[0].normalized);
        assert_eq!(est.gap, est.samples[0].normalized);
    }

    #[test]
    fn endpoints_on_regular_and_node() {
        let l = labels(&["x", "y"]);
        let r = RingPresentation::regular(3, l.clone()).unwrap();
        let free = ModuleSpec::free(2);
        let m = MonomialIdeal::maximal(2);
        let (hk, hs) = endpoint_multiplicities(&r, &free, &m, &[1, 2]).unwrap();
        assert_eq!(hk.richardson, rat(1, 1));
        assert_eq!(hs.richardson, rat(1, 1));

        let (hk, hs) = endpoint_multiplicities(&node(3), &free, &m, &[2, 3]).unwrap();
        assert_eq!(hk.richardson, rat(2, 1));
        assert_eq!(hs.richardson, rat(2, 1));
        // non-maximal ideal: I = (x^2, y) in the plane has colength 2,
        // multiplicity 2 at both endpoints
        let i = ideal_of(&["x^2", "y"], &l);
        let (hk, hs) = endpoint_multiplicities(&r, &free, &i, &[1, 2]).unwrap();
        assert_eq!(hk.richardson, rat(2, 1));
        assert_eq!(hs.richardson, rat(2, 1));
    }

    #[test]
    fn interpolation_tracks_endpoints_on_the_node() {
        // small s behaves like the ordinary-power endpoint, large s like
        // the bracket endpoint
        let r = node(3);
        let free = ModuleSpec::free(2);
        let m = MonomialIdeal::maximal(2);
        let (hk, hs) = endpoint_multiplicities(&r, &free, &m, &[3]).unwrap();

        let tiny = HQuery::principal(r.clone(), rat(1, 27), vec![3]).unwrap();
        let tiny_e = e_estimate(&tiny).unwrap();
        // at s = 1/q the expanded pair is m^1 + m^[q] = m, so the sample is
        // the ordinary first power; the endpoint at n = q is farther along
        // but both estimate the same Hilbert-Samuel value 2
        assert_eq!(tiny_e.samples[0].length, 1);
        assert_eq!(hs.samples[0].length as i64, 2 * 27 - 1);

        let large = HQuery::principal(r, rat(4, 1), vec![3]).unwrap();
        let large_e = e_estimate(&large).unwrap();
        // for s >= 2 the cap swallows the bracket box entirely
        assert_eq!(large_e.samples[0].length, hk.samples[0].length);
    }

    #[test]
    fn idealization_by_the_residue_field_adds_one_socle_dimension() {
        use crate::constructions::idealization_presentation;
        let r = node(3);
        let l = labels(&["x", "y"]);
        let residue = ModuleSpec::new(vec![ideal_of(&["x", "y"], &l)]).unwrap();
        let ide = idealization_presentation(&r, &residue).unwrap();
        for s in [rat(1, 2), rat(1, 1), rat(2, 1), rat(7, 3)] {
            let base = HQuery::principal(r.clone(), s.clone(), vec![1, 2, 3]).unwrap();
            let extended =
                HQuery::principal(ide.presentation().clone(), s, vec![1, 2, 3]).unwrap();
            let base_est = h_estimate(&base).unwrap();
            let ext_est = h_estimate(&extended).unwrap();
            for (a, b) in base_est.samples.iter().zip(ext_est.samples.iter()) {
                assert_eq!(b.length, a.length + 1, "socle adds one at e = {}", a.e);
                assert_eq!(&b.normalized - &a.normalized, rat(1, a.q as i64));
            }
            assert_eq!(base_est.richardson, ext_est.richardson);
        }
    }

    #[test]
    fn queries_validate_their_shape() {
        let r = node(3);
        assert!(HQuery::principal(r.clone(), rat(0, 1), vec![1]).is_err());
        assert!(HQuery::principal(r.clone(), rat(1, 1), vec![]).is_err());
        assert!(HQuery::principal(r.clone(), rat(1, 1), vec![2, 2]).is_err());
        let bad = HQuery::new(
            r,
            ModuleSpec::free(2),
            MonomialIdeal::maximal(3),
            MonomialIdeal::maximal(2),
            rat(1, 1),
            vec![1],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn mixed_dimension_normalization_uses_the_override() {
        // a module of smaller dimension normalized at the larger ring
        // dimension contributes vanishing samples
        let r = RingPresentation::regular(3, labels(&["x", "y"])).unwrap();
        let l = labels(&["x", "y"]);
        let small = ModuleSpec::new(vec![ideal_of(&["x"], &l)]).unwrap();
        let m = MonomialIdeal::maximal(2);
        let q =
            HQuery::new(r, small, m.clone(), m, rat(1, 1), vec![1, 2, 3]).unwrap();
        let est = h_estimate(&q).unwrap();
        // lengths grow like q, normalized by q^2 they shrink
        assert_eq!(est.samples[2].length, 27);
        assert_eq!(est.samples[2].normalized, rat(1, 27));
        let overridden = h_estimate(&q.clone().with_normalizing_dim(1)).unwrap();
        assert_eq!(overridden.samples[2].normalized, rat(1, 1));
    }

    #[test]
    fn quadric_e_estimate_is_finite_and_reported() {
        // hypersurface sanity: the finite sequence is produced and the
        // extrapolation sits between the last sample and the visible trend
        let l = labels(&["x", "y", "z"]);
        let f = PolyRelation::parse("1*x^2 + 1*y^2 + 1*z^2", &l, 3, true).unwrap();
        let r = RingPresentation::new(3, l, MonomialIdeal::zero(3), vec![f], 2).unwrap();
        let query = HQuery::principal(r, rat(5, 1), vec![1, 2]).unwrap();
        let est = h_estimate(&query).unwrap();
        assert_eq!(est.samples.len(), 2);
        assert!(est.samples[1].normalized > Rat::zero());
        assert!(est.gap < rat(1, 2), "successive quadric samples are close");
    }

    proptest! {
        #[test]
        fn normalizer_saturates_and_is_monotone(
            num in 1i64..12, den in 1i64..5, d in 1usize..5
        ) {
            let s = rat(num, den);
            let h = normalizer(&s, d);
            prop_assert!(h > Rat::zero());
            prop_assert!(h <= Rat::one());
            if s >= rat(d as i64, 1) {
                prop_assert_eq!(h.clone(), Rat::one());
            }
            if s <= Rat::one() {
                prop_assert_eq!(h.clone(), rat_pow(&s, d as u32) / Rat::from(factorial(d)));
            }
            let bigger = &s + rat(1, 3);
            prop_assert!(normalizer(&bigger, d) >= h);
        }

        #[test]
        fn normalized_samples_increase_with_s(num in 1i64..7, den in 1i64..4) {
            let s = rat(num, den);
            let bigger = &s + rat(1, 2);
            let q1 = HQuery::principal(node(3), s, vec![2]).unwrap();
            let q2 = HQuery::principal(node(3), bigger, vec![2]).unwrap();
            prop_assert!(
                h_estimate(&q2).unwrap().samples[0].normalized
                    >= h_estimate(&q1).unwrap().samples[0].normalized
            );
        }
    }
}
