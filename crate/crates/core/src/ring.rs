//! Ring presentations: monomial relations plus a few polynomial relations.
//!
//! A presentation is `k[x_1..x_n] / (Q + (f_1..f_k))` with `Q` a monomial
//! ideal and each `f_i` a polynomial with coefficients in F_p. Lengths of
//! artinian quotients are computed as
//!
//! ```text
//! colength(Q + A)  -  dim span{ f_i * m : m standard monomial of Q + A }
//! ```
//!
//! where multiples are reduced by dropping every term whose monomial already
//! lies in `Q + A` (or beyond the degree cap). This stays exact and needs no
//! Groebner machinery because the `f_i` multiples are reduced against a
//! monomial ideal only.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{is_prime_u64, row_span_dim};
use crate::monomial::{Monomial, MonomialIdeal};
use crate::ratio::{ceil_mul, Rat};

/// Ideals handed to queries are plain monomial ideals in the presentation's
/// ambient variables; powers and brackets are expanded on demand.
pub type IdealSpec = MonomialIdeal;

/// A polynomial relation: a sum of coefficient-monomial terms over F_p.
///
/// Terms are kept in ascending graded-lex order with coefficients reduced to
/// `1..p`, so equal relations are structurally equal. The `parameter` flag
/// asserts that the relation cuts the dimension by exactly one; it feeds the
/// declared-dimension bookkeeping and nothing else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRelation {
    terms: Vec<(Monomial, u64)>,
    p: u64,
    parameter: bool,
}

impl PolyRelation {
    pub fn new(raw_terms: Vec<(Monomial, u64)>, p: u64, parameter: bool) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if raw_terms.is_empty() {
            return Err(Error::InvalidPresentation("polynomial relation with no terms".into()));
        }
        let vars = raw_terms[0].0.vars();
        let mut combined: HashMap<Monomial, u64> = HashMap::new();
        for (m, c) in raw_terms {
            if m.vars() != vars {
                return Err(Error::MismatchedVars { left: vars, right: m.vars() });
            }
            let slot = combined.entry(m).or_insert(0);
            *slot = (*slot + c % p) % p;
        }
        let mut terms: Vec<(Monomial, u64)> =
            combined.into_iter().filter(|&(_, c)| c != 0).collect();
        if terms.is_empty() {
            return Err(Error::InvalidPresentation(
                "polynomial relation is zero after reduction".into(),
            ));
        }
        terms.sort_by(|a, b| a.0.graded_lex_cmp(&b.0));
        if terms.iter().any(|(m, _)| m.is_one()) {
            return Err(Error::InvalidPresentation(
                "polynomial relation has a constant term, quotient would be the zero ring".into(),
            ));
        }
        Ok(PolyRelation { terms, p, parameter })
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_parameter(&self) -> bool {
        self.parameter
    }

    pub fn vars(&self) -> usize {
        self.terms[0].0.vars()
    }

    /// Parses `1*x^2 + 2*y^2`; a bare monomial means coefficient 1, and a
    /// leading or separating `-` negates the following coefficient.
    pub fn parse(text: &str, labels: &[String], p: u64, parameter: bool) -> Result<Self> {
        let mut terms = Vec::new();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(Error::parse("empty polynomial relation"));
        }
        let mut negate = false;
        if let Some(stripped) = rest.strip_prefix('-') {
            negate = true;
            rest = stripped.trim_start();
        }
        loop {
            let split_at = rest.find(['+', '-']);
            let (term_text, remainder, next_negate) = match split_at {
                Some(pos) => {
                    let sign = rest.as_bytes()[pos] == b'-';
                    (&rest[..pos], rest[pos + 1..].trim_start(), sign)
                }
                None => (rest, "", false),
            };
            let term_text = term_text.trim();
            let (coeff_text, mono_text) = match term_text.split_once('*') {
                // a coefficient is a bare integer; anything else is part of
                // the monomial (e.g. "x^2*y" has no coefficient)
                Some((head, tail)) if head.trim().chars().all(|c| c.is_ascii_digit()) => {
                    (head.trim(), tail.trim())
                }
                _ => ("1", term_text),
            };
            let coeff: u64 = coeff_text
                .parse()
                .map_err(|_| Error::parse(format!("bad coefficient {coeff_text:?} in {text:?}")))?;
            let coeff = if negate { (p - coeff % p) % p } else { coeff % p };
            terms.push((Monomial::parse(mono_text, labels)?, coeff));
            if remainder.is_empty() {
                break;
            }
            rest = remainder;
            negate = next_negate;
        }
        PolyRelation::new(terms, p, parameter)
    }

    /// Canonical rendering matching `parse`: explicit coefficients, terms in
    /// ascending graded-lex order, joined by ` + `.
    pub fn display(&self, labels: &[String]) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}*{}", c, m.display(labels)))
            .collect();
        parts.join(" + ")
    }
}

/// A quotient presentation `k[x_1..x_n] / (Q + (f_1..f_k))` over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    p: u64,
    labels: Vec<String>,
    monomial_relations: MonomialIdeal,
    poly_relations: Vec<PolyRelation>,
    declared_dim: usize,
}

fn validate_label(label: &str) -> Result<()> {
    let mut chars = label.chars();
    let ok_first = chars.next().map_or(false, |c| c.is_ascii_alphabetic() || c == '_');
    let ok_rest = label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !ok_first || !ok_rest || label == "m" {
        return Err(Error::InvalidPresentation(format!(
            "bad variable label {label:?}: labels are identifiers and \"m\" is reserved"
        )));
    }
    Ok(())
}

impl RingPresentation {
    /// Builds and validates a presentation.
    ///
    /// Dimension bookkeeping: with no polynomial relations the declared
    /// dimension must equal the monomial staircase dimension; when every
    /// polynomial relation carries the parameter flag it must equal that
    /// minus the relation count; otherwise the caller's value is recorded
    /// as-is (it still may not exceed the staircase dimension).
    pub fn new(
        p: u64,
        labels: Vec<String>,
        monomial_relations: MonomialIdeal,
        poly_relations: Vec<PolyRelation>,
        declared_dim: usize,
    ) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        for label in &labels {
            validate_label(label)?;
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::InvalidPresentation(format!("duplicate variable label {a:?}")));
            }
        }
        if monomial_relations.vars() != labels.len() {
            return Err(Error::MismatchedVars {
                left: labels.len(),
                right: monomial_relations.vars(),
            });
        }
        if monomial_relations.is_unit() {
            return Err(Error::InvalidPresentation(
                "monomial relations form the unit ideal, quotient would be the zero ring".into(),
            ));
        }
        for f in &poly_relations {
            if f.vars() != labels.len() {
                return Err(Error::MismatchedVars { left: labels.len(), right: f.vars() });
            }
            if f.modulus() != p {
                return Err(Error::CharacteristicMismatch { left: p, right: f.modulus() });
            }
        }
        let staircase_dim = monomial_relations
            .krull_dimension()
            .expect("non-unit ideal has a dimension");
        if poly_relations.is_empty() {
            if declared_dim != staircase_dim {
                return Err(Error::InvalidPresentation(format!(
                    "declared dimension {declared_dim} but the monomial relations give {staircase_dim}"
                )));
            }
        } else if poly_relations.iter().all(|f| f.is_parameter()) {
            let expected = staircase_dim.checked_sub(poly_relations.len());
            if expected != Some(declared_dim) {
                return Err(Error::InvalidPresentation(format!(
                    "declared dimension {declared_dim} but {staircase_dim} minus {} parameter relations was expected",
                    poly_relations.len()
                )));
            }
        } else if declared_dim > staircase_dim {
            return Err(Error::InvalidPresentation(format!(
                "declared dimension {declared_dim} exceeds the staircase dimension {staircase_dim}"
            )));
        }
        Ok(RingPresentation { p, labels, monomial_relations, poly_relations, declared_dim })
    }

    /// The polynomial ring `k[labels]` itself.
    pub fn regular(p: u64, labels: Vec<String>) -> Result<Self> {
        let dim = labels.len();
        RingPresentation::new(p, labels, MonomialIdeal::zero(dim), Vec::new(), dim)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn vars(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn monomial_relations(&self) -> &MonomialIdeal {
        &self.monomial_relations
    }

    pub fn poly_relations(&self) -> &[PolyRelation] {
        &self.poly_relations
    }

    pub fn declared_dim(&self) -> usize {
        self.declared_dim
    }

    pub fn maximal_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::maximal(self.vars())
    }

    /// Vector-space dimension of `R / A R`, optionally with every monomial of
    /// total degree `>= cap` also killed (the cap stands in for `m^cap`).
    pub fn quotient_length(&self, a: &MonomialIdeal, cap: Option<u32>) -> Result<u64> {
        if a.vars() != self.vars() {
            return Err(Error::MismatchedVars { left: self.vars(), right: a.vars() });
        }
        let b = self.monomial_relations.sum(a)?;
        if cap.is_none() && !b.is_artinian() {
            return Err(Error::NotArtinian);
        }
        let standard = b.standard_monomials(cap)?;
        if self.poly_relations.is_empty() {
            return Ok(standard.len() as u64);
        }
        let index: HashMap<&Monomial, u32> =
            standard.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
        let mut rows: Vec<Vec<(u32, u64)>> = Vec::new();
        for f in &self.poly_relations {
            for m in &standard {
                let mut row = Vec::new();
                for (t, c) in f.terms() {
                    let product = t.mul(m)?;
                    let capped_out = cap.map_or(false, |c| product.degree() >= c as u64);
                    if !capped_out && !b.contains(&product) {
                        row.push((index[&product], *c));
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
        let rank = row_span_dim(self.p, standard.len() as u32, &rows)?;
        Ok(standard.len() as u64 - rank as u64)
    }

    /// Length of `M / A M` for a direct sum of cyclic modules.
    pub fn module_length(
        &self,
        module: &ModuleSpec,
        a: &MonomialIdeal,
        cap: Option<u32>,
    ) -> Result<u64> {
        let mut total = 0u64;
        for summand in module.summands() {
            let combined = a.sum(summand)?;
            total += self.quotient_length(&combined, cap)?;
        }
        Ok(total)
    }

    /// Canonical single-document rendering of the presentation. The format
    /// is TOML; `parse_spec` of the output reproduces the value, and printing
    /// again reproduces the bytes.
    pub fn print_spec(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("p = {}\n", self.p));
        let quoted: Vec<String> = self.labels.iter().map(|l| format!("\"{l}\"")).collect();
        out.push_str(&format!("vars = [{}]\n", quoted.join(", ")));
        out.push_str(&format!("dim = {}\n", self.declared_dim));
        let monos: Vec<String> = self
            .monomial_relations
            .gens()
            .iter()
            .map(|g| format!("\"{}\"", g.display(&self.labels)))
            .collect();
        out.push_str(&format!("monomial = [{}]\n", monos.join(", ")));
        let polys: Vec<String> = self
            .poly_relations
            .iter()
            .map(|f| {
                format!("{{ f = \"{}\", param = {} }}", f.display(&self.labels), f.is_parameter())
            })
            .collect();
        out.push_str(&format!("poly = [{}]\n", polys.join(", ")));
        out
    }

    /// Parses the `print_spec` document format.
    pub fn parse_spec(text: &str) -> Result<Self> {
        let raw: RingSpecToml = toml::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
        raw.build()
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.print_spec())
    }
}

/// Serde shape of the ring-spec document; shared with the config layer.
#[derive(Debug, Clone, serde::Deserialize)]
pub struct RingSpecToml {
    pub p: u64,
    pub vars: Vec<String>,
    pub dim: usize,
    #[serde(default)]
    pub monomial: Vec<String>,
    #[serde(default)]
    pub poly: Vec<PolySpecToml>,
}

#[derive(Debug, Clone, serde::Deserialize)]
pub struct PolySpecToml {
    pub f: String,
    #[serde(default)]
    pub param: bool,
}

impl RingSpecToml {
    pub fn build(&self) -> Result<RingPresentation> {
        let labels = self.vars.clone();
        let gens = self
            .monomial
            .iter()
            .map(|text| Monomial::parse(text, &labels))
            .collect::<Result<Vec<_>>>()?;
        let q = MonomialIdeal::new(labels.len(), gens)?;
        let polys = self
            .poly
            .iter()
            .map(|entry| PolyRelation::parse(&entry.f, &labels, self.p, entry.param))
            .collect::<Result<Vec<_>>>()?;
        RingPresentation::new(self.p, labels, q, polys, self.dim)
    }
}

/// A finitely generated module presented as a direct sum of cyclic quotients
/// `R/J_1 + ... + R/J_t`; a zero ideal summand is a free rank-one summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSpec {
    summands: Vec<MonomialIdeal>,
}

impl ModuleSpec {
    pub fn new(summands: Vec<MonomialIdeal>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::InvalidModule("a module needs at least one summand".into()));
        }
        if summands.iter().any(|j| j.is_unit()) {
            return Err(Error::InvalidModule(
                "a unit-ideal summand is the zero module; drop it instead".into(),
            ));
        }
        Ok(ModuleSpec { summands })
    }

    /// The free rank-one module over a ring with `vars` ambient variables.
    pub fn free(vars: usize) -> Self {
        ModuleSpec { summands: vec![MonomialIdeal::zero(vars)] }
    }

    pub fn summands(&self) -> &[MonomialIdeal] {
        &self.summands
    }

    /// Minimal number of generators of the direct sum.
    pub fn generator_count(&self) -> usize {
        self.summands.len()
    }

    pub fn is_free(&self) -> bool {
        self.summands.iter().all(|j| j.is_zero())
    }

    /// Largest dimension among the cyclic summands, measured against a base
    /// ring's monomial relations. Meaningful only for monomial base rings.
    pub fn staircase_dim(&self, base: &MonomialIdeal) -> Result<usize> {
        let mut best = 0usize;
        for j in &self.summands {
            let quotient = base.sum(j)?;
            match quotient.krull_dimension() {
                Some(d) => best = best.max(d),
                None => {}
            }
        }
        Ok(best)
    }
}

/// The expanded ideal `I^ceil(sq) + J^[q]`, with the ordinary power carried
/// as a degree cap instead of generators whenever `I` is the full maximal
/// ideal (then `I^a` is exactly "total degree >= a").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedIdeal {
    pub ideal: MonomialIdeal,
    pub degree_cap: Option<u32>,
}

/// Expands the pair with the ordinary power always written out as
/// generators. Needed when the expansion is carried into a larger ring,
/// where the degree-cap shortcut would count the wrong monomials.
pub fn expand_pair_materialized(
    i: &IdealSpec,
    j: &IdealSpec,
    s: &Rat,
    q: u64,
) -> Result<MonomialIdeal> {
    if i.vars() != j.vars() {
        return Err(Error::MismatchedVars { left: i.vars(), right: j.vars() });
    }
    if q == 0 {
        return Err(Error::InvalidQuery("q must be positive".into()));
    }
    let a = ceil_mul(s, q)?;
    let a32 = u32::try_from(a).map_err(|_| Error::Overflow(format!("power {a} exceeds u32")))?;
    j.bracket_power(q)?.sum(&i.ordinary_power(a32)?)
}

/// Expands the pair `(I, J)` at parameter `s` and Frobenius level `q`.
pub fn expand_pair(i: &IdealSpec, j: &IdealSpec, s: &Rat, q: u64) -> Result<ExpandedIdeal> {
    if i.vars() != j.vars() {
        return Err(Error::MismatchedVars { left: i.vars(), right: j.vars() });
    }
    if q == 0 {
        return Err(Error::InvalidQuery("q must be positive".into()));
    }
    let a = ceil_mul(s, q)?;
    let a32 = u32::try_from(a).map_err(|_| Error::Overflow(format!("power {a} exceeds u32")))?;
    let bracket = j.bracket_power(q)?;
    if i.is_maximal() {
        Ok(ExpandedIdeal { ideal: bracket, degree_cap: Some(a32) })
    } else {
        let power = i.ordinary_power(a32)?;
        Ok(ExpandedIdeal { ideal: bracket.sum(&power)?, degree_cap: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::default_labels;
    use crate::ratio::rat;
    use proptest::prelude::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn mono(text: &str, labels: &[String]) -> Monomial {
        Monomial::parse(text, labels).unwrap()
    }

    fn ideal_of(texts: &[&str], labels: &[String]) -> MonomialIdeal {
        MonomialIdeal::new(labels.len(), texts.iter().map(|t| mono(t, labels)).collect()).unwrap()
    }

    /// k[x,y]/(xy) over F_p.
    fn node(p: u64) -> RingPresentation {
        let l = labels(&["x", "y"]);
        RingPresentation::new(p, l.clone(), ideal_of(&["x*y"], &l), Vec::new(), 1).unwrap()
    }

    /// k[x,y]/(x^2 + y^2) over F_p, flagged as a hypersurface parameter.
    fn plane_quadric(p: u64) -> RingPresentation {
        let l = labels(&["x", "y"]);
        let f = PolyRelation::parse("1*x^2 + 1*y^2", &l, p, true).unwrap();
        RingPresentation::new(p, l, MonomialIdeal::zero(2), vec![f], 1).unwrap()
    }

    // ------------------------------------------------------------------
    // Oracle: a from-scratch dense computation of quotient lengths for
    // hypersurface quotients, used to freeze the expected values below.
    // It enumerates the exponent box directly and row-reduces a dense
    // multiplication matrix with its own arithmetic.
    // ------------------------------------------------------------------

    fn dense_hypersurface_length(
        p: u64,
        box_bounds: &[u32],
        a_gens: &[&str],
        f_terms: &[(&str, u64)],
        labels: &[String],
    ) -> u64 {
        let a = ideal_of(a_gens, labels);
        // enumerate the box
        let mut basis: Vec<Vec<u32>> = Vec::new();
        let mut exps = vec![0u32; box_bounds.len()];
        'outer: loop {
            if !a.contains(&Monomial::from_exps(exps.clone())) {
                basis.push(exps.clone());
            }
            let mut i = 0;
            loop {
                if i == exps.len() {
                    break 'outer;
                }
                exps[i] += 1;
                if exps[i] < box_bounds[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
        let find = |target: &[u32]| basis.iter().position(|b| b == target);
        // dense rows: f * m for every basis monomial m
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for m in &basis {
            let mut row = vec![0u64; basis.len()];
            let mut nonzero = false;
            for (t, c) in f_terms {
                let t = mono(t, labels);
                let shifted: Vec<u32> =
                    t.exps().iter().zip(m.iter()).map(|(&a, &b)| a + b).collect();
                if !a.contains(&Monomial::from_exps(shifted.clone())) {
                    if let Some(idx) = find(&shifted) {
                        row[idx] = (row[idx] + c) % p;
                        nonzero = true;
                    }
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
        // textbook elimination
        let mut rank = 0usize;
        for col in 0..basis.len() {
            let pivot = (rank..rows.len()).find(|&r| rows[r][col] != 0);
            let Some(pivot) = pivot else { continue };
            rows.swap(rank, pivot);
            let inv = crate::linalg::mod_inv(rows[rank][col], p);
            for c in 0..basis.len() {
                rows[rank][c] = rows[rank][c] * inv % p;
            }
            for r in 0..rows.len() {
                if r != rank && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for c in 0..basis.len() {
                        rows[r][c] = (rows[r][c] + (p - f) * rows[rank][c]) % p;
                    }
                }
            }
            rank += 1;
        }
        basis.len() as u64 - rank as u64
    }

    #[test]
    fn node_quotient_length() {
        // k[x,y]/(xy) modulo (x^3, y^3): basis 1, x, x^2, y, y^2
        let r = node(3);
        let l = labels(&["x", "y"]);
        assert_eq!(r.quotient_length(&ideal_of(&["x^3", "y^3"], &l), None).unwrap(), 5);
    }

    #[test]
    fn regular_line_quotient_length() {
        let r = RingPresentation::regular(5, labels(&["x"])).unwrap();
        let l = labels(&["x"]);
        assert_eq!(r.quotient_length(&ideal_of(&["x^4"], &l), None).unwrap(), 4);
    }

    #[test]
    fn plane_quadric_quotient_length_matches_dense_oracle() {
        // k[x,y]/(x^2+y^2) at p=3 modulo (x^3, y^3). The dense oracle and
        // the substitution normal form x^2 -> -y^2 both give 5: the
        // rewriting kills x^2, x*y^2 (= -x^3) and x^2*y (= -y^3), leaving
        // 1, x, y, x*y, y^2.
        let l = labels(&["x", "y"]);
        let oracle = dense_hypersurface_length(
            3,
            &[3, 3],
            &["x^3", "y^3"],
            &[("x^2", 1), ("y^2", 1)],
            &l,
        );
        assert_eq!(oracle, 5);
        let r = plane_quadric(3);
        assert_eq!(r.quotient_length(&ideal_of(&["x^3", "y^3"], &l), None).unwrap(), 5);
    }

    #[test]
    fn poly_relation_absorbed_by_monomial_part() {
        // when every term of f lies in Q + A the relation contributes nothing
        let r = plane_quadric(3);
        let l = labels(&["x", "y"]);
        let a = ideal_of(&["x^2", "y^2"], &l);
        assert_eq!(r.quotient_length(&a, None).unwrap(), 4); // 1, x, y, xy
    }

    #[test]
    fn quotient_length_requires_artinian_or_cap() {
        let r = node(3);
        let l = labels(&["x", "y"]);
        let a = ideal_of(&["x^2"], &l);
        assert_eq!(r.quotient_length(&a, None), Err(Error::NotArtinian));
        // with a cap: basis 1, x, y, y^2 below degree 3 avoiding (xy, x^2)
        assert_eq!(r.quotient_length(&a, Some(3)).unwrap(), 4);
    }

    #[test]
    fn module_length_sums_cyclic_summands() {
        let r = RingPresentation::regular(3, labels(&["x", "y"])).unwrap();
        let l = labels(&["x", "y"]);
        let m = ModuleSpec::new(vec![MonomialIdeal::zero(2), ideal_of(&["x"], &l)]).unwrap();
        let a = ideal_of(&["x^2", "y^2"], &l);
        // R gives 4, R/(x) gives 2 (1 and y)
        assert_eq!(r.module_length(&m, &a, None).unwrap(), 6);
        // free modules scale the ring length
        let free2 = ModuleSpec::new(vec![MonomialIdeal::zero(2); 2]).unwrap();
        assert_eq!(
            r.module_length(&free2, &a, None).unwrap(),
            2 * r.quotient_length(&a, None).unwrap()
        );
    }

    #[test]
    fn module_spec_rejects_degenerate_shapes() {
        assert!(ModuleSpec::new(vec![]).is_err());
        assert!(ModuleSpec::new(vec![MonomialIdeal::unit(2)]).is_err());
        assert!(ModuleSpec::free(2).is_free());
    }

    #[test]
    fn expand_pair_caps_maximal_ideal() {
        let l = labels(&["x", "y"]);
        let m = MonomialIdeal::maximal(2);
        let e = expand_pair(&m, &m, &rat(1, 1), 3).unwrap();
        assert_eq!(e.ideal, ideal_of(&["x^3", "y^3"], &l));
        assert_eq!(e.degree_cap, Some(3));

        // lattice count inside the capped box: pairs a,b < 3 with a+b < 3
        let r = RingPresentation::regular(3, l.clone()).unwrap();
        assert_eq!(r.quotient_length(&e.ideal, e.degree_cap).unwrap(), 6);
    }

    #[test]
    fn expand_pair_materializes_general_ideals() {
        let l = labels(&["x", "y"]);
        let i = ideal_of(&["x"], &l);
        let m = MonomialIdeal::maximal(2);
        // ceil(1/2 * 9) = 5
        let e = expand_pair(&i, &m, &rat(1, 2), 9).unwrap();
        assert_eq!(e.degree_cap, None);
        assert_eq!(e.ideal, ideal_of(&["x^5", "y^9"], &l));
        assert!(expand_pair(&i, &m, &rat(-1, 2), 9).is_err());
        assert!(expand_pair(&i, &m, &rat(1, 2), 0).is_err());
    }

    #[test]
    fn capped_length_equals_materialized_power_with_polys() {
        // the cap shortcut must agree with literally adding m^a, including
        // in the presence of a polynomial relation
        let r = plane_quadric(3);
        let l = labels(&["x", "y"]);
        let bracket = ideal_of(&["x^9", "y^9"], &l);
        for a in [2u32, 4, 7, 12] {
            let capped = r.quotient_length(&bracket, Some(a)).unwrap();
            let m_pow = MonomialIdeal::maximal(2).ordinary_power(a).unwrap();
            let materialized = r.quotient_length(&bracket.sum(&m_pow).unwrap(), None).unwrap();
            assert_eq!(capped, materialized, "cap {a}");
        }
    }

    #[test]
    fn regular_ring_expansion_matches_lattice_count() {
        // for k[x_1..x_d] and I = J = m the length is a cut-cube count
        for d in 1usize..=3 {
            let l = default_labels(d);
            let r = RingPresentation::regular(3, l).unwrap();
            let m = MonomialIdeal::maximal(d);
            for (s, q) in [(rat(1, 2), 9u64), (rat(1, 1), 3), (rat(2, 1), 3), (rat(1, 3), 9)] {
                let e = expand_pair(&m, &m, &s, q).unwrap();
                let got = r.quotient_length(&e.ideal, e.degree_cap).unwrap();
                let a = crate::ratio::ceil_mul(&s, q).unwrap();
                let mut count = 0u64;
                let mut exps = vec![0u64; d];
                'outer: loop {
                    if exps.iter().sum::<u64>() < a {
                        count += 1;
                    }
                    let mut i = 0;
                    loop {
                        if i == d {
                            break 'outer;
                        }
                        exps[i] += 1;
                        if exps[i] < q {
                            break;
                        }
                        exps[i] = 0;
                        i += 1;
                    }
                }
                assert_eq!(got, count, "d={d} s={s} q={q}");
            }
        }
    }

    #[test]
    fn presentation_validation_rules() {
        let l = labels(&["x", "y"]);
        // regular ring: dim must match variable count
        assert!(RingPresentation::new(3, l.clone(), MonomialIdeal::zero(2), vec![], 1).is_err());
        // non-prime characteristic
        assert!(RingPresentation::new(4, l.clone(), MonomialIdeal::zero(2), vec![], 2).is_err());
        // unit monomial ideal
        assert!(RingPresentation::new(3, l.clone(), MonomialIdeal::unit(2), vec![], 0).is_err());
        // duplicate labels
        assert!(RingPresentation::new(3, labels(&["x", "x"]), MonomialIdeal::zero(2), vec![], 2)
            .is_err());
        // reserved label
        assert!(RingPresentation::new(3, labels(&["m"]), MonomialIdeal::zero(1), vec![], 1)
            .is_err());
        // parameter bookkeeping: x^2+y^2 flagged cuts 2 -> 1
        let f = PolyRelation::parse("1*x^2 + 1*y^2", &l, 3, true).unwrap();
        assert!(RingPresentation::new(3, l.clone(), MonomialIdeal::zero(2), vec![f.clone()], 1)
            .is_ok());
        assert!(RingPresentation::new(3, l.clone(), MonomialIdeal::zero(2), vec![f], 2).is_err());
        // unflagged relations: the declared dimension is recorded as given
        let g = PolyRelation::parse("1*x^2 + 2*x*y", &l, 3, false).unwrap();
        assert!(RingPresentation::new(3, l.clone(), MonomialIdeal::zero(2), vec![g.clone()], 1)
            .is_ok());
        assert!(RingPresentation::new(3, l, MonomialIdeal::zero(2), vec![g], 3).is_err());
    }

    #[test]
    fn poly_relation_construction_rules() {
        let l = labels(&["x", "y"]);
        // terms combine and zero relations are rejected
        let f = PolyRelation::new(
            vec![(mono("x", &l), 1), (mono("x", &l), 1), (mono("y", &l), 3)],
            3,
            false,
        )
        .unwrap();
        assert_eq!(f.display(&l), "2*x");
        assert!(PolyRelation::new(vec![(mono("x", &l), 3)], 3, false).is_err());
        assert!(PolyRelation::new(vec![], 3, false).is_err());
        // constant terms are rejected
        assert!(PolyRelation::new(vec![(Monomial::one(2), 1)], 3, false).is_err());
        // parse handles signs and bare monomials
        let g = PolyRelation::parse("x^2 - y^2", &l, 3, false).unwrap();
        assert_eq!(g.display(&l), "1*x^2 + 2*y^2");
        let h = PolyRelation::parse("-x + y", &l, 3, false).unwrap();
        assert_eq!(h.display(&l), "2*x + 1*y");
    }

    #[test]
    fn ring_spec_round_trip_is_bit_exact() {
        let samples = [node(3), plane_quadric(7), RingPresentation::regular(5, labels(&["u"])).unwrap()];
        for r in samples {
            let text = r.print_spec();
            let parsed = RingPresentation::parse_spec(&text).unwrap();
            assert_eq!(parsed, r);
            assert_eq!(parsed.print_spec(), text);
        }
    }

    #[test]
    fn ring_spec_parse_accepts_omitted_fields() {
        let r = RingPresentation::parse_spec(
            "p = 3\nvars = [\"x\", \"y\"]\ndim = 2\n",
        )
        .unwrap();
        assert!(r.monomial_relations().is_zero());
        assert!(r.poly_relations().is_empty());
        // and poly entries default the parameter flag to false
        let r = RingPresentation::parse_spec(
            "p = 3\nvars = [\"x\"]\ndim = 1\npoly = [{ f = \"x^2\" }]\n",
        );
        // x^2 unflagged with declared dim 1 exceeds nothing: staircase dim is 1
        assert!(r.is_ok());
        let err = RingPresentation::parse_spec("p = 3\nvars = [\"x\"\n");
        assert!(matches!(err, Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn quotient_length_without_polys_is_colength(
            exps in proptest::collection::vec((1u32..5, 1u32..5), 1..3)
        ) {
            let l = labels(&["x", "y"]);
            let r = node(3);
            let mut gens: Vec<Monomial> = exps
                .iter()
                .map(|&(a, b)| Monomial::from_exps(vec![a, b]))
                .collect();
            gens.push(mono("x^4", &l));
            gens.push(mono("y^4", &l));
            let a = MonomialIdeal::new(2, gens).unwrap();
            let direct = r.monomial_relations().sum(&a).unwrap().colength(None).unwrap();
            prop_assert_eq!(r.quotient_length(&a, None).unwrap(), direct);
        }

        #[test]
        fn quotient_length_antitone(
            extra in proptest::collection::vec(0u32..4, 2),
            p_choice in proptest::sample::select(vec![3u64, 5])
        ) {
            let l = labels(&["x", "y"]);
            let r = plane_quadric(p_choice);
            let a = ideal_of(&["x^4", "y^4"], &l);
            let bigger = if extra.iter().any(|&e| e > 0) {
                a.sum(&MonomialIdeal::new(2, vec![Monomial::from_exps(extra)]).unwrap()).unwrap()
            } else {
                a.clone()
            };
            prop_assert!(
                r.quotient_length(&bigger, None).unwrap() <= r.quotient_length(&a, None).unwrap()
            );
        }
    }
}
