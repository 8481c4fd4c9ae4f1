//! Presentations of fiber products, idealizations, and amalgamated
//! duplications, plus an independent structure-constant oracle.
//!
//! The constructors emit ordinary `RingPresentation` values:
//!
//! * the fiber product of `R -> T <- S` (variable-matching surjections onto
//!   a monomial quotient) lives on the union of the factors' variables with
//!   the matched ones identified, and adds every cross product of an R-only
//!   variable with an S-only variable;
//! * the idealization of `R` by a direct sum of cyclic modules adjoins one
//!   square-zero variable per summand, annihilated by that summand's ideal;
//! * the duplication of `R` along a monomial ideal `I = (i_1..i_m)` adjoins
//!   `z_1..z_m` with `z_k z_l = lift(i_k i_l)`, the pairwise lcm syzygies of
//!   the generators, and the colon relations `(lcm(g, i_k)/i_k) z_k` for
//!   every monomial relation `g` of the base (without these the adjoined
//!   variables would miss the torsion the base relations impose).
//!
//! `truncation_oracle` turns a presentation into an explicit
//! finite-dimensional algebra with a full multiplication table, built by
//! independent means (row reduction over all standard monomials), so the
//! constructors can be cross-checked against direct set-theoretic models.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::linalg::{is_prime_u64, mod_inv, Echelon};
use crate::monomial::{Monomial, MonomialIdeal};
use crate::ratio::{ceil_mul, Rat};
use crate::ring::{ModuleSpec, PolyRelation, RingPresentation};

fn remap_monomial(m: &Monomial, map: &[usize], out_vars: usize) -> Monomial {
    let mut exps = vec![0u32; out_vars];
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            exps[map[i]] += e;
        }
    }
    Monomial::from_exps(exps)
}

fn remap_poly(f: &PolyRelation, map: &[usize], out_vars: usize) -> Result<PolyRelation> {
    let terms = f
        .terms()
        .iter()
        .map(|(m, c)| (remap_monomial(m, map, out_vars), *c))
        .collect();
    PolyRelation::new(terms, f.modulus(), false)
}

fn remap_ideal(i: &MonomialIdeal, map: &[usize], out_vars: usize) -> Result<MonomialIdeal> {
    let gens = i.gens().iter().map(|g| remap_monomial(g, map, out_vars)).collect();
    MonomialIdeal::new(out_vars, gens)
}

fn fresh_label(wanted: &str, taken: &mut HashSet<String>) -> String {
    let mut candidate = wanted.to_string();
    let mut k = 2usize;
    while taken.contains(&candidate) {
        candidate = format!("{wanted}_{k}");
        k += 1;
    }
    taken.insert(candidate.clone());
    candidate
}

fn adjoined_labels(count: usize, taken: &mut HashSet<String>) -> Vec<String> {
    if count == 1 {
        return vec![fresh_label("z", taken)];
    }
    (1..=count).map(|i| fresh_label(&format!("z{i}"), taken)).collect()
}

fn variable_ideal(vars: usize, indices: impl Iterator<Item = usize>) -> MonomialIdeal {
    let gens: Vec<Monomial> = indices.map(|v| Monomial::var(v, vars)).collect();
    MonomialIdeal::new(vars, gens).expect("variables form a valid generating set")
}

// ---------------------------------------------------------------------------
// Fiber products
// ---------------------------------------------------------------------------

/// A fiber product presentation together with the variable bookkeeping the
/// checks need: where each factor's variables landed.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    presentation: RingPresentation,
    left_vars: Vec<usize>,
    right_vars: Vec<usize>,
    shared_vars: Vec<usize>,
}

impl FiberProduct {
    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    /// Position of each left-factor variable in the product's variables.
    pub fn left_vars(&self) -> &[usize] {
        &self.left_vars
    }

    pub fn right_vars(&self) -> &[usize] {
        &self.right_vars
    }

    /// Positions of the shared quotient's variables (the identified pairs).
    pub fn shared_vars(&self) -> &[usize] {
        &self.shared_vars
    }

    fn killing_ideal(&self, keep: &[usize]) -> MonomialIdeal {
        let n = self.presentation.vars();
        let keep: HashSet<usize> = keep.iter().copied().collect();
        variable_ideal(n, (0..n).filter(|v| !keep.contains(v)))
    }

    /// The left factor viewed as a cyclic module over the product (the
    /// quotient by every variable the left factor does not see).
    pub fn left_factor_module(&self) -> ModuleSpec {
        ModuleSpec::new(vec![self.killing_ideal(&self.left_vars)])
            .expect("killing ideal is proper")
    }

    pub fn right_factor_module(&self) -> ModuleSpec {
        ModuleSpec::new(vec![self.killing_ideal(&self.right_vars)])
            .expect("killing ideal is proper")
    }

    /// The shared quotient viewed as a cyclic module over the product.
    pub fn shared_factor_module(&self) -> ModuleSpec {
        ModuleSpec::new(vec![self.killing_ideal(&self.shared_vars)])
            .expect("killing ideal is proper")
    }

    /// Carries an ideal of the left factor into the product's variables.
    pub fn lift_left(&self, i: &MonomialIdeal) -> Result<MonomialIdeal> {
        if i.vars() != self.left_vars.len() {
            return Err(Error::MismatchedVars { left: self.left_vars.len(), right: i.vars() });
        }
        remap_ideal(i, &self.left_vars, self.presentation.vars())
    }

    pub fn lift_right(&self, i: &MonomialIdeal) -> Result<MonomialIdeal> {
        if i.vars() != self.right_vars.len() {
            return Err(Error::MismatchedVars { left: self.right_vars.len(), right: i.vars() });
        }
        remap_ideal(i, &self.right_vars, self.presentation.vars())
    }
}

fn validate_fiber_side(
    ring: &RingPresentation,
    map: &[Option<usize>],
    t: &RingPresentation,
    side: &str,
) -> Result<()> {
    if map.len() != ring.vars() {
        return Err(Error::MismatchedVars { left: ring.vars(), right: map.len() });
    }
    let mut hit = vec![false; t.vars()];
    for target in map.iter().flatten() {
        if *target >= t.vars() {
            return Err(Error::UnsupportedSurjection(format!(
                "{side} map targets variable {target} outside the shared quotient"
            )));
        }
        if hit[*target] {
            return Err(Error::UnsupportedSurjection(format!(
                "{side} map sends two variables to the same shared variable"
            )));
        }
        hit[*target] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(Error::UnsupportedSurjection(format!(
            "{side} map misses a variable of the shared quotient"
        )));
    }
    let all_matched = |m: &Monomial| {
        m.exps().iter().enumerate().all(|(i, &e)| e == 0 || map[i].is_some())
    };
    let descend = |m: &Monomial| {
        let mut exps = vec![0u32; t.vars()];
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                exps[map[i].expect("checked matched")] += e;
            }
        }
        Monomial::from_exps(exps)
    };
    for g in ring.monomial_relations().gens() {
        if all_matched(g) && !t.monomial_relations().contains(&descend(g)) {
            return Err(Error::UnsupportedSurjection(format!(
                "{side} relation {} survives in the shared quotient",
                g.display(ring.labels())
            )));
        }
    }
    for f in ring.poly_relations() {
        for (m, _) in f.terms() {
            if all_matched(m) && !t.monomial_relations().contains(&descend(m)) {
                return Err(Error::UnsupportedSurjection(format!(
                    "{side} relation term {} survives in the shared quotient",
                    m.display(ring.labels())
                )));
            }
        }
    }
    // the shared quotient may not carry relations the factor cannot verify;
    // matching is only checked against the factor's monomial relations, so
    // a factor whose polynomial relations are needed to justify a shared
    // relation is rejected conservatively
    let mut source_of = vec![0usize; t.vars()];
    for (i, target) in map.iter().enumerate() {
        if let Some(ti) = target {
            source_of[*ti] = i;
        }
    }
    for tg in t.monomial_relations().gens() {
        let mut exps = vec![0u32; ring.vars()];
        for (ti, &e) in tg.exps().iter().enumerate() {
            if e > 0 {
                exps[source_of[ti]] += e;
            }
        }
        if !ring.monomial_relations().contains(&Monomial::from_exps(exps)) {
            return Err(Error::UnsupportedSurjection(format!(
                "shared relation {} does not hold in the {side} factor",
                tg.display(t.labels())
            )));
        }
    }
    Ok(())
}

/// Builds the fiber product of two surjections `R -> T <- S`.
///
/// The surjections must be of variable-matching form: `left_map[i]` names
/// the T-variable that the i-th R-variable maps to, or `None` when it maps
/// to zero, and every T-variable must be matched exactly once per side.
/// `T` itself must be a monomial quotient. `T = k` is the zero-variable
/// presentation with both maps all-`None`.
pub fn fiber_product_presentation(
    r: &RingPresentation,
    s: &RingPresentation,
    t: &RingPresentation,
    left_map: &[Option<usize>],
    right_map: &[Option<usize>],
) -> Result<FiberProduct> {
    if r.p() != s.p() {
        return Err(Error::CharacteristicMismatch { left: r.p(), right: s.p() });
    }
    if r.p() != t.p() {
        return Err(Error::CharacteristicMismatch { left: r.p(), right: t.p() });
    }
    if !t.poly_relations().is_empty() {
        return Err(Error::UnsupportedSurjection(
            "the shared quotient must be presented by monomial relations alone".into(),
        ));
    }
    validate_fiber_side(r, left_map, t, "left")?;
    validate_fiber_side(s, right_map, t, "right")?;

    let out_vars = r.vars() + s.vars() - t.vars();
    let left_vars: Vec<usize> = (0..r.vars()).collect();
    let mut shared_vars = vec![0usize; t.vars()];
    for (i, target) in left_map.iter().enumerate() {
        if let Some(ti) = target {
            shared_vars[*ti] = i;
        }
    }
    let mut right_vars = Vec::with_capacity(s.vars());
    let mut next = r.vars();
    for target in right_map {
        match target {
            Some(ti) => right_vars.push(shared_vars[*ti]),
            None => {
                right_vars.push(next);
                next += 1;
            }
        }
    }

    let mut taken: HashSet<String> = r.labels().iter().cloned().collect();
    let mut labels = r.labels().to_vec();
    for (j, target) in right_map.iter().enumerate() {
        if target.is_none() {
            labels.push(fresh_label(&s.labels()[j], &mut taken));
        }
    }

    let mut gens: Vec<Monomial> = Vec::new();
    for g in r.monomial_relations().gens() {
        gens.push(remap_monomial(g, &left_vars, out_vars));
    }
    for g in s.monomial_relations().gens() {
        gens.push(remap_monomial(g, &right_vars, out_vars));
    }
    for (i, lt) in left_map.iter().enumerate() {
        if lt.is_some() {
            continue;
        }
        for (j, rt) in right_map.iter().enumerate() {
            if rt.is_some() {
                continue;
            }
            let mut exps = vec![0u32; out_vars];
            exps[left_vars[i]] += 1;
            exps[right_vars[j]] += 1;
            gens.push(Monomial::from_exps(exps));
        }
    }
    let relations = MonomialIdeal::new(out_vars, gens)?;

    let mut polys = Vec::new();
    for f in r.poly_relations() {
        polys.push(remap_poly(f, &left_vars, out_vars)?);
    }
    for f in s.poly_relations() {
        polys.push(remap_poly(f, &right_vars, out_vars)?);
    }

    let dim = r.declared_dim().max(s.declared_dim());
    let presentation = RingPresentation::new(r.p(), labels, relations, polys, dim)?;
    Ok(FiberProduct { presentation, left_vars, right_vars, shared_vars })
}

// ---------------------------------------------------------------------------
// Idealizations
// ---------------------------------------------------------------------------

/// An idealization presentation; the adjoined square-zero variables sit
/// after the base ring's variables.
#[derive(Debug, Clone)]
pub struct Idealization {
    presentation: RingPresentation,
    base_vars: usize,
}

impl Idealization {
    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    pub fn base_vars(&self) -> usize {
        self.base_vars
    }

    pub fn summand_count(&self) -> usize {
        self.presentation.vars() - self.base_vars
    }

    /// The ideal generated by the base ring's variables. Expansions of this
    /// ideal realize the maximal ideal's image together with its multiples
    /// of the module part.
    pub fn base_ideal(&self) -> MonomialIdeal {
        variable_ideal(self.presentation.vars(), 0..self.base_vars)
    }

    /// The ideal generated by the adjoined variables (the module part).
    pub fn module_ideal(&self) -> MonomialIdeal {
        variable_ideal(self.presentation.vars(), self.base_vars..self.presentation.vars())
    }

    /// The base ring as a cyclic module over the idealization.
    pub fn base_module(&self) -> ModuleSpec {
        ModuleSpec::new(vec![self.module_ideal()]).expect("module variables form a proper ideal")
    }

    /// Carries an ideal of the base ring into the idealization's variables.
    pub fn lift_ideal(&self, i: &MonomialIdeal) -> Result<MonomialIdeal> {
        if i.vars() != self.base_vars {
            return Err(Error::MismatchedVars { left: self.base_vars, right: i.vars() });
        }
        let map: Vec<usize> = (0..self.base_vars).collect();
        remap_ideal(i, &map, self.presentation.vars())
    }
}

/// Builds the idealization of `R` by `M = R/J_1 + ... + R/J_t`: one new
/// variable per summand, all pairwise products of new variables zero, and
/// `J_i` annihilating the i-th new variable.
pub fn idealization_presentation(
    r: &RingPresentation,
    m: &ModuleSpec,
) -> Result<Idealization> {
    for j in m.summands() {
        if j.vars() != r.vars() {
            return Err(Error::MismatchedVars { left: r.vars(), right: j.vars() });
        }
    }
    let t = m.summands().len();
    let out_vars = r.vars() + t;
    let base_map: Vec<usize> = (0..r.vars()).collect();

    let mut taken: HashSet<String> = r.labels().iter().cloned().collect();
    let mut labels = r.labels().to_vec();
    labels.extend(adjoined_labels(t, &mut taken));

    let mut gens: Vec<Monomial> = Vec::new();
    for g in r.monomial_relations().gens() {
        gens.push(remap_monomial(g, &base_map, out_vars));
    }
    for i in 0..t {
        for j in i..t {
            let mut exps = vec![0u32; out_vars];
            exps[r.vars() + i] += 1;
            exps[r.vars() + j] += 1;
            gens.push(Monomial::from_exps(exps));
        }
        for g in m.summands()[i].gens() {
            let mut lifted = remap_monomial(g, &base_map, out_vars);
            lifted = lifted.mul(&Monomial::var(r.vars() + i, out_vars))?;
            gens.push(lifted);
        }
    }
    let relations = MonomialIdeal::new(out_vars, gens)?;

    let polys = r
        .poly_relations()
        .iter()
        .map(|f| remap_poly(f, &base_map, out_vars))
        .collect::<Result<Vec<_>>>()?;

    let presentation =
        RingPresentation::new(r.p(), labels, relations, polys, r.declared_dim())?;
    Ok(Idealization { presentation, base_vars: r.vars() })
}

// ---------------------------------------------------------------------------
// Amalgamated duplications
// ---------------------------------------------------------------------------

/// A duplication presentation; the adjoined variables (one per generator of
/// the duplicated ideal) sit after the base ring's variables.
#[derive(Debug, Clone)]
pub struct Duplication {
    presentation: RingPresentation,
    base_vars: usize,
}

impl Duplication {
    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    pub fn base_vars(&self) -> usize {
        self.base_vars
    }

    pub fn adjoined_count(&self) -> usize {
        self.presentation.vars() - self.base_vars
    }

    /// Carries an ideal of the base ring into the duplication's variables.
    pub fn lift_ideal(&self, i: &MonomialIdeal) -> Result<MonomialIdeal> {
        if i.vars() != self.base_vars {
            return Err(Error::MismatchedVars { left: self.base_vars, right: i.vars() });
        }
        let map: Vec<usize> = (0..self.base_vars).collect();
        remap_ideal(i, &map, self.presentation.vars())
    }
}

/// Builds the amalgamated duplication of `R` along the monomial ideal `I`.
pub fn duplication_presentation(
    r: &RingPresentation,
    i: &MonomialIdeal,
) -> Result<Duplication> {
    if i.vars() != r.vars() {
        return Err(Error::MismatchedVars { left: r.vars(), right: i.vars() });
    }
    if i.is_unit() {
        return Err(Error::UnsupportedIdeal(
            "duplication along the unit ideal is not a local construction".into(),
        ));
    }
    let m = i.gens().len();
    let out_vars = r.vars() + m;
    let base_map: Vec<usize> = (0..r.vars()).collect();
    let z_var = |k: usize| Monomial::var(r.vars() + k, out_vars);

    let mut taken: HashSet<String> = r.labels().iter().cloned().collect();
    let mut labels = r.labels().to_vec();
    labels.extend(adjoined_labels(m, &mut taken));

    let mut gens: Vec<Monomial> = Vec::new();
    for g in r.monomial_relations().gens() {
        gens.push(remap_monomial(g, &base_map, out_vars));
    }
    // colon relations: g kills z_k as soon as (g : i_k) does, because z_k
    // carries a copy of i_k
    for g in r.monomial_relations().gens() {
        for (k, ik) in i.gens().iter().enumerate() {
            let factor = ik.lcm(g);
            let coefficient = ik.quotient_into(&factor);
            let lifted = remap_monomial(&coefficient, &base_map, out_vars);
            gens.push(lifted.mul(&z_var(k))?);
        }
    }
    let relations = MonomialIdeal::new(out_vars, gens)?;

    let mut polys = r
        .poly_relations()
        .iter()
        .map(|f| remap_poly(f, &base_map, out_vars))
        .collect::<Result<Vec<_>>>()?;
    let p = r.p();
    // products z_k z_l = lift(i_k i_l), rewriting the product through the
    // first generator dividing it
    for k in 0..m {
        for l in k..m {
            let product = i.gens()[k].mul(&i.gens()[l])?;
            let divisor = i
                .gens()
                .iter()
                .position(|g| g.divides(&product))
                .ok_or_else(|| {
                    Error::UnsupportedIdeal(format!(
                        "no generator divides {}",
                        product.display(r.labels())
                    ))
                })?;
            let coefficient = i.gens()[divisor].quotient_into(&product);
            let lead = z_var(k).mul(&z_var(l))?;
            let trail =
                remap_monomial(&coefficient, &base_map, out_vars).mul(&z_var(divisor))?;
            polys.push(PolyRelation::new(vec![(lead, 1), (trail, p - 1)], p, false)?);
        }
    }
    // pairwise lcm syzygies of the generators
    for k in 0..m {
        for l in (k + 1)..m {
            let lcm = i.gens()[k].lcm(&i.gens()[l]);
            let uk = i.gens()[k].quotient_into(&lcm);
            let ul = i.gens()[l].quotient_into(&lcm);
            let lead = remap_monomial(&uk, &base_map, out_vars).mul(&z_var(k))?;
            let trail = remap_monomial(&ul, &base_map, out_vars).mul(&z_var(l))?;
            polys.push(PolyRelation::new(vec![(lead, 1), (trail, p - 1)], p, false)?);
        }
    }

    let presentation =
        RingPresentation::new(r.p(), labels, relations, polys, r.declared_dim())?;
    Ok(Duplication { presentation, base_vars: r.vars() })
}

// ---------------------------------------------------------------------------
// The structure-constant oracle
// ---------------------------------------------------------------------------

/// An explicit finite-dimensional commutative algebra over F_p: a basis,
/// the full multiplication table, and the images of the ambient generators.
///
/// Products are stored as sparse vectors (index, coefficient) with strictly
/// ascending indices and coefficients in `1..p`. The table is validated for
/// commutativity and the unit law in full and for associativity on sampled
/// triples at construction.
#[derive(Debug, Clone)]
pub struct ArtinAlgebra {
    p: u64,
    truncation: u32,
    labels: Vec<String>,
    degrees: Vec<u32>,
    unit: usize,
    table: Vec<Vec<(usize, u64)>>,
    generator_images: Vec<Vec<(usize, u64)>>,
}

fn validate_vector(v: &[(usize, u64)], dim: usize, p: u64) -> Result<()> {
    for (pos, &(i, c)) in v.iter().enumerate() {
        if i >= dim {
            return Err(Error::InvalidPresentation(format!(
                "vector index {i} out of range for dimension {dim}"
            )));
        }
        if c == 0 || c >= p {
            return Err(Error::InvalidPresentation(format!(
                "vector coefficient {c} out of range mod {p}"
            )));
        }
        if pos > 0 && v[pos - 1].0 >= i {
            return Err(Error::InvalidPresentation("vector indices not ascending".into()));
        }
    }
    Ok(())
}

impl ArtinAlgebra {
    /// Assembles an algebra from raw parts, validating the table: shape,
    /// reduced coefficients, symmetry, the unit law, degree bounds, and
    /// associativity on sampled triples.
    pub fn from_parts(
        p: u64,
        truncation: u32,
        labels: Vec<String>,
        degrees: Vec<u32>,
        unit: usize,
        table: Vec<Vec<(usize, u64)>>,
        generator_images: Vec<Vec<(usize, u64)>>,
    ) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let dim = labels.len();
        if dim == 0 || degrees.len() != dim || unit >= dim {
            return Err(Error::InvalidPresentation("malformed algebra basis".into()));
        }
        if truncation == 0 || degrees.iter().any(|&d| d >= truncation) || degrees[unit] != 0 {
            return Err(Error::InvalidPresentation("basis degrees exceed the truncation".into()));
        }
        if table.len() != dim * dim {
            return Err(Error::InvalidPresentation(format!(
                "multiplication table has {} entries, expected {}",
                table.len(),
                dim * dim
            )));
        }
        for v in table.iter().chain(generator_images.iter()) {
            validate_vector(v, dim, p)?;
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if table[i * dim + j] != table[j * dim + i] {
                    return Err(Error::InvalidPresentation(format!(
                        "multiplication table is not commutative at ({i}, {j})"
                    )));
                }
            }
        }
        for j in 0..dim {
            if table[unit * dim + j] != vec![(j, 1)] {
                return Err(Error::InvalidPresentation(format!(
                    "unit element does not fix basis element {j}"
                )));
            }
        }
        let algebra =
            ArtinAlgebra { p, truncation, labels, degrees, unit, table, generator_images };
        algebra.spot_check_associativity()?;
        Ok(algebra)
    }

    fn spot_check_associativity(&self) -> Result<()> {
        let dim = self.dim();
        let check = |i: usize, j: usize, k: usize| -> bool {
            let left = self.mul(&self.table[i * dim + j].clone(), &[(k, 1)]);
            let right = self.mul(&[(i, 1)], &self.table[j * dim + k].clone());
            left == right
        };
        if dim <= 12 {
            for i in 0..dim {
                for j in i..dim {
                    for k in j..dim {
                        if !check(i, j, k) {
                            return Err(Error::InvalidPresentation(format!(
                                "products are not associative on basis triple ({i}, {j}, {k})"
                            )));
                        }
                    }
                }
            }
            return Ok(());
        }
        let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as usize) % dim
        };
        for _ in 0..120 {
            let (i, j, k) = (next(), next(), next());
            if !check(i, j, k) {
                return Err(Error::InvalidPresentation(format!(
                    "products are not associative on basis triple ({i}, {j}, {k})"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn generator_images(&self) -> &[Vec<(usize, u64)>] {
        &self.generator_images
    }

    /// The product of two basis elements.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, u64)] {
        &self.table[i * self.dim() + j]
    }

    /// The product of two elements given as sparse vectors.
    pub fn mul(&self, a: &[(usize, u64)], b: &[(usize, u64)]) -> Vec<(usize, u64)> {
        let p = self.p as u128;
        let mut acc = vec![0u64; self.dim()];
        for &(i, ca) in a {
            for &(j, cb) in b {
                let c = (ca as u128 * cb as u128 % p) as u64;
                if c == 0 {
                    continue;
                }
                for &(k, v) in self.product(i, j) {
                    acc[k] = ((acc[k] as u128 + c as u128 * v as u128) % p) as u64;
                }
            }
        }
        acc.into_iter().enumerate().filter(|&(_, c)| c != 0).collect()
    }

    /// The image of a monomial in the ambient presentation variables.
    pub fn monomial_image(&self, m: &Monomial) -> Result<Vec<(usize, u64)>> {
        if m.vars() != self.generator_images.len() {
            return Err(Error::MismatchedVars {
                left: self.generator_images.len(),
                right: m.vars(),
            });
        }
        let mut acc = vec![(self.unit, 1)];
        for (v, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                acc = self.mul(&acc, &self.generator_images[v].clone());
                if acc.is_empty() {
                    return Ok(acc);
                }
            }
        }
        Ok(acc)
    }

    /// Images of an ideal's generators, for feeding the power oracle.
    pub fn ideal_images(&self, i: &MonomialIdeal) -> Result<Vec<Vec<(usize, u64)>>> {
        i.gens().iter().map(|g| self.monomial_image(g)).collect()
    }

    fn mul_dense(&self, a: &[(usize, u64)], u: &[u64]) -> Vec<u64> {
        let p = self.p as u128;
        let mut acc = vec![0u64; self.dim()];
        for &(i, ca) in a {
            for (j, &cu) in u.iter().enumerate() {
                if cu == 0 {
                    continue;
                }
                let c = (ca as u128 * cu as u128 % p) as u64;
                if c == 0 {
                    continue;
                }
                for &(k, v) in self.product(i, j) {
                    acc[k] = ((acc[k] as u128 + c as u128 * v as u128) % p) as u64;
                }
            }
        }
        acc
    }

    /// Dimensions of the successive quotients of the filtration by powers
    /// of the ideal generated by `generator_images`: entry `d` is
    /// `dim(m^d / m^(d+1))`. Stops early if the filtration stabilizes at a
    /// nonzero subspace (which cannot happen for a truncated local algebra).
    pub fn filtration_dims(&self) -> Vec<usize> {
        let dim = self.dim();
        let mut spanning: Vec<Vec<u64>> = (0..dim)
            .map(|i| {
                let mut v = vec![0u64; dim];
                v[i] = 1;
                v
            })
            .collect();
        let mut sizes = vec![dim];
        loop {
            let mut ech = Echelon::new(self.p, dim).expect("modulus is prime");
            let mut next_spanning = Vec::new();
            for g in &self.generator_images {
                for u in &spanning {
                    let v = self.mul_dense(g, u);
                    if v.iter().any(|&c| c != 0) && ech.insert(v.clone()).is_some() {
                        next_spanning.push(v);
                    }
                }
            }
            let d = ech.dim();
            let last = *sizes.last().expect("sizes is nonempty");
            sizes.push(d);
            if d == 0 || d == last {
                break;
            }
            spanning = next_spanning;
        }
        sizes.windows(2).map(|w| w[0] - w[1]).collect()
    }
}

fn rref_dense(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let p128 = p as u128;
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = mod_inv(rows[rank][col], p) as u128;
        for x in rows[rank].iter_mut() {
            *x = (*x as u128 * inv % p128) as u64;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = (p - row[col]) as u128;
            for (x, &y) in row.iter_mut().zip(pivot.iter()) {
                *x = ((*x as u128 + f * y as u128) % p128) as u64;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Builds the explicit algebra `P / m^N` with a full multiplication table.
///
/// Standard monomials of the monomial relations below degree `N` are row
/// reduced against all multiples of the polynomial relations; the non-pivot
/// monomials form the basis and pivot monomials are rewritten through the
/// reduced rows.
pub fn truncation_oracle(pres: &RingPresentation, n: u32) -> Result<ArtinAlgebra> {
    if n == 0 {
        return Err(Error::InvalidQuery("truncation level must be positive".into()));
    }
    let b = pres.monomial_relations();
    let standard = b.standard_monomials(Some(n))?;
    let col_of: HashMap<&Monomial, usize> =
        standard.iter().enumerate().map(|(c, m)| (m, c)).collect();
    let p = pres.p();

    let mut rows: Vec<Vec<u64>> = Vec::new();
    for f in pres.poly_relations() {
        for m in &standard {
            let mut row = vec![0u64; standard.len()];
            let mut nonzero = false;
            for (t, c) in f.terms() {
                let product = t.mul(m)?;
                if product.degree() < n as u64 && !b.contains(&product) {
                    let col = col_of[&product];
                    row[col] = (row[col] + c) % p;
                    nonzero = true;
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    let pivots = rref_dense(&mut rows, p);
    let pivot_row: HashMap<usize, usize> =
        pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
    let basis_cols: Vec<usize> =
        (0..standard.len()).filter(|c| !pivot_row.contains_key(c)).collect();
    let basis_pos: HashMap<usize, usize> =
        basis_cols.iter().enumerate().map(|(pos, &c)| (c, pos)).collect();

    let reduce_col = |c: usize| -> Vec<(usize, u64)> {
        match pivot_row.get(&c) {
            None => vec![(basis_pos[&c], 1)],
            Some(&r) => basis_cols
                .iter()
                .enumerate()
                .filter(|&(_, &bc)| rows[r][bc] != 0)
                .map(|(pos, &bc)| (pos, p - rows[r][bc]))
                .collect(),
        }
    };
    let reduce_monomial = |m: &Monomial| -> Vec<(usize, u64)> {
        if m.degree() >= n as u64 || b.contains(m) {
            return Vec::new();
        }
        reduce_col(col_of[m])
    };

    let dim = basis_cols.len();
    let basis: Vec<&Monomial> = basis_cols.iter().map(|&c| &standard[c]).collect();
    let labels: Vec<String> = basis.iter().map(|m| m.display(pres.labels())).collect();
    let degrees: Vec<u32> = basis
        .iter()
        .map(|m| u32::try_from(m.degree()).expect("degree below the truncation"))
        .collect();
    let unit = basis_pos[&col_of[&Monomial::one(pres.vars())]];

    let mut table = vec![Vec::new(); dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let entry = reduce_monomial(&basis[i].mul(basis[j])?);
            table[i * dim + j] = entry.clone();
            table[j * dim + i] = entry;
        }
    }
    let generator_images: Vec<Vec<(usize, u64)>> = (0..pres.vars())
        .map(|v| reduce_monomial(&Monomial::var(v, pres.vars())))
        .collect();

    ArtinAlgebra::from_parts(p, n, labels, degrees, unit, table, generator_images)
}

// ---------------------------------------------------------------------------
// The power-length oracle
// ---------------------------------------------------------------------------

/// Which power of the generated ideal to measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PowerMode {
    /// The ideal generated by the q-th powers of the generators; `q` must
    /// be a power of the characteristic.
    Bracket(u64),
    /// The ordinary n-th power.
    Ordinary(u32),
    /// The sum of the ordinary `ceil(s q)`-th power and the bracket q-th
    /// power, both of the same generator list.
    Pair { s: Rat, q: u64 },
}

fn element_power(a: &ArtinAlgebra, g: &[(usize, u64)], mut e: u64) -> Vec<(usize, u64)> {
    let mut base = g.to_vec();
    let mut acc = vec![(a.unit_index(), 1)];
    while e > 0 {
        if e & 1 == 1 {
            acc = a.mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = a.mul(&base, &base);
        }
    }
    acc
}

fn ordinary_products(
    a: &ArtinAlgebra,
    gens: &[Vec<(usize, u64)>],
    n: u32,
) -> Vec<Vec<(usize, u64)>> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u32, Vec<(usize, u64)>)> =
        vec![(0, n, vec![(a.unit_index(), 1)])];
    while let Some((start, left, cur)) = stack.pop() {
        if left == 0 {
            out.push(cur);
            continue;
        }
        for k in start..gens.len() {
            let next = a.mul(&cur, &gens[k]);
            if !next.is_empty() {
                stack.push((k, left - 1, next));
            }
        }
    }
    out
}

fn powered_generators(
    a: &ArtinAlgebra,
    gens: &[Vec<(usize, u64)>],
    mode: &PowerMode,
) -> Result<Vec<Vec<(usize, u64)>>> {
    match mode {
        PowerMode::Bracket(q) => {
            let mut t = *q;
            if t == 0 {
                return Err(Error::InvalidQuery("bracket power must be positive".into()));
            }
            while t % a.modulus() == 0 {
                t /= a.modulus();
            }
            if t != 1 {
                return Err(Error::InvalidQuery(format!(
                    "bracket power {q} is not a power of the characteristic {}",
                    a.modulus()
                )));
            }
            Ok(gens.iter().map(|g| element_power(a, g, *q)).collect())
        }
        PowerMode::Ordinary(n) => Ok(ordinary_products(a, gens, *n)),
        PowerMode::Pair { s, q } => {
            let e = ceil_mul(s, *q)?;
            let e32 = u32::try_from(e)
                .map_err(|_| Error::Overflow(format!("power {e} exceeds u32")))?;
            let mut out = ordinary_products(a, gens, e32);
            out.extend(powered_generators(a, gens, &PowerMode::Bracket(*q))?);
            Ok(out)
        }
    }
}

/// The subspace spanned by the requested power of the ideal the generators
/// generate (as a module over the whole algebra).
pub fn ideal_span(
    a: &ArtinAlgebra,
    gens: &[Vec<(usize, u64)>],
    mode: &PowerMode,
) -> Result<Echelon> {
    for g in gens {
        validate_vector(g, a.dim(), a.modulus())?;
    }
    let powered = powered_generators(a, gens, mode)?;
    let mut ech = Echelon::new(a.modulus(), a.dim())?;
    for g in &powered {
        for j in 0..a.dim() {
            let product = a.mul(g, &[(j, 1)]);
            if product.is_empty() {
                continue;
            }
            let mut dense = vec![0u64; a.dim()];
            for (k, c) in product {
                dense[k] = c;
            }
            ech.insert(dense);
        }
    }
    Ok(ech)
}

/// Codimension of the requested ideal power inside the truncated algebra;
/// errors with `TruncationTooSmall` when the power fails to swallow the top
/// filtration degree, since the codimension would then undercount the true
/// quotient length.
pub fn ideal_power_length_oracle(
    a: &ArtinAlgebra,
    gens: &[Vec<(usize, u64)>],
    mode: &PowerMode,
) -> Result<u64> {
    let span = ideal_span(a, gens, mode)?;
    for (idx, &d) in a.degrees().iter().enumerate() {
        if d + 1 != a.truncation() {
            continue;
        }
        let mut dense = vec![0u64; a.dim()];
        dense[idx] = 1;
        if !span.contains(&dense) {
            return Err(Error::TruncationTooSmall {
                needed: a.truncation() + 1,
                have: a.truncation(),
            });
        }
    }
    Ok(a.dim() as u64 - span.dim() as u64)
}
