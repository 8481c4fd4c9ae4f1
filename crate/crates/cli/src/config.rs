//! TOML suite configuration.
//!
//! A suite file declares named rings, named constructions over those rings,
//! named ideals over either, and a list of checks. Resolution happens in
//! that order, so a check stanza only ever refers to things by name. Every
//! name lives in one flat namespace: rings and constructions must not
//! collide, since check targets and ideal owners refer to both.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use smult_core::monomial::Monomial;
use smult_core::ratio::parse_rat;
use smult_core::ring::{PolySpecToml, RingSpecToml};
use smult_core::{
    duplication_presentation, fiber_product_presentation, idealization_presentation, Error,
    ModuleSpec, MonomialIdeal, Rat, Result, RingPresentation,
};

use crate::check::{
    CheckSpec, DuplicationTarget, FiberTarget, Hypotheses, IdealizationTarget, NamedIdeal,
    NamedRing, Target, TheoremId,
};

/// A resolved suite: the checks in file order plus the worker budget.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub checks: Vec<CheckSpec>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSuite {
    #[serde(default)]
    defaults: RawDefaults,
    #[serde(default)]
    ring: Vec<RawRing>,
    #[serde(default)]
    construction: Vec<RawConstruction>,
    #[serde(default)]
    ideal: Vec<RawIdeal>,
    #[serde(default)]
    check: Vec<RawCheck>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawDefaults {
    s_grid: Option<Vec<String>>,
    e_range: Option<Vec<u32>>,
    tolerance: Option<String>,
    workers: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    name: String,
    file: Option<String>,
    p: Option<u64>,
    vars: Option<Vec<String>>,
    dim: Option<usize>,
    #[serde(default)]
    monomial: Vec<String>,
    #[serde(default)]
    poly: Vec<RawPoly>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoly {
    f: String,
    #[serde(default)]
    param: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstruction {
    name: String,
    fiber_product: Option<RawFiberProduct>,
    idealization: Option<RawIdealization>,
    duplication: Option<RawDuplication>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiberProduct {
    left: String,
    right: String,
    over: String,
    #[serde(default)]
    left_map: BTreeMap<String, String>,
    #[serde(default)]
    right_map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdealization {
    base: String,
    summands: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDuplication {
    base: String,
    ideal: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdeal {
    name: String,
    ring: String,
    gens: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCheck {
    theorem: String,
    target: Option<String>,
    #[serde(default)]
    ideals: Vec<String>,
    s_grid: Option<Vec<String>>,
    e_range: Option<Vec<u32>>,
    tolerance: Option<String>,
    label: Option<String>,
    #[serde(default)]
    cohen_macaulay: bool,
    #[serde(default)]
    complete_intersection: bool,
    #[serde(default)]
    domain: bool,
    #[serde(default)]
    finite_projective_dimension: bool,
}

fn builtin_s_grid() -> Vec<Rat> {
    ["1/2", "1", "3/2", "2"]
        .iter()
        .map(|t| parse_rat(t).expect("builtin grid entries parse"))
        .collect()
}

fn parse_s_grid(texts: &[String]) -> Result<Vec<Rat>> {
    if texts.is_empty() {
        return Err(Error::InvalidQuery("s_grid must not be empty".into()));
    }
    texts.iter().map(|t| parse_rat(t)).collect()
}

fn resolve_ring(raw: &RawRing, base_dir: &Path) -> Result<RingPresentation> {
    match (&raw.file, &raw.p, &raw.vars) {
        (Some(file), None, None) if raw.dim.is_none() && raw.monomial.is_empty()
            && raw.poly.is_empty() =>
        {
            let path = base_dir.join(file);
            let text = std::fs::read_to_string(&path).map_err(|e| {
                Error::MissingInput(format!("ring file {}: {e}", path.display()))
            })?;
            RingPresentation::parse_spec(&text)
        }
        (Some(_), _, _) => Err(Error::InvalidQuery(format!(
            "ring {:?} mixes a file reference with inline fields",
            raw.name
        ))),
        (None, Some(p), Some(vars)) => {
            let dim = match raw.dim {
                Some(d) => d,
                None if raw.monomial.is_empty() && raw.poly.is_empty() => vars.len(),
                None => {
                    return Err(Error::InvalidQuery(format!(
                        "ring {:?} has relations, so dim must be given explicitly",
                        raw.name
                    )));
                }
            };
            let spec = RingSpecToml {
                p: *p,
                vars: vars.clone(),
                dim,
                monomial: raw.monomial.clone(),
                poly: raw
                    .poly
                    .iter()
                    .map(|entry| PolySpecToml { f: entry.f.clone(), param: entry.param })
                    .collect(),
            };
            spec.build()
        }
        _ => Err(Error::MissingInput(format!(
            "ring {:?} needs either file or inline p and vars",
            raw.name
        ))),
    }
}

fn variable_map(
    factor: &RingPresentation,
    over: &RingPresentation,
    raw: &BTreeMap<String, String>,
    side: &str,
) -> Result<Vec<Option<usize>>> {
    for key in raw.keys() {
        if !factor.labels().iter().any(|l| l == key) {
            return Err(Error::InvalidQuery(format!(
                "{side}_map key {key:?} is not a variable of the {side} factor"
            )));
        }
    }
    factor
        .labels()
        .iter()
        .map(|label| match raw.get(label) {
            None => Ok(None),
            Some(target) => over
                .labels()
                .iter()
                .position(|l| l == target)
                .map(Some)
                .ok_or_else(|| {
                    Error::InvalidQuery(format!(
                        "{side}_map sends {label:?} to unknown shared variable {target:?}"
                    ))
                }),
        })
        .collect()
}

fn parse_named_ideal(
    texts: &[String],
    presentation: &RingPresentation,
    what: &str,
) -> Result<MonomialIdeal> {
    let gens = texts
        .iter()
        .map(|t| Monomial::parse(t, presentation.labels()))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::InvalidQuery(format!("{what}: {e}")))?;
    MonomialIdeal::new(presentation.vars(), gens)
}

fn resolved_target(
    raw: &RawConstruction,
    rings: &BTreeMap<String, NamedRing>,
) -> Result<Target> {
    let pick = |name: &str| -> Result<NamedRing> {
        rings
            .get(name)
            .cloned()
            .ok_or_else(|| Error::MissingInput(format!("unknown ring {name:?}")))
    };
    let given = [
        raw.fiber_product.is_some(),
        raw.idealization.is_some(),
        raw.duplication.is_some(),
    ]
    .iter()
    .filter(|x| **x)
    .count();
    if given != 1 {
        return Err(Error::InvalidQuery(format!(
            "construction {:?} must declare exactly one of fiber_product, idealization, \
             duplication",
            raw.name
        )));
    }
    if let Some(fp) = &raw.fiber_product {
        let left = pick(&fp.left)?;
        let right = pick(&fp.right)?;
        let over = pick(&fp.over)?;
        let left_map = variable_map(&left.ring, &over.ring, &fp.left_map, "left")?;
        let right_map = variable_map(&right.ring, &over.ring, &fp.right_map, "right")?;
        let product = fiber_product_presentation(
            &left.ring,
            &right.ring,
            &over.ring,
            &left_map,
            &right_map,
        )?;
        return Ok(Target::Fiber(FiberTarget {
            name: raw.name.clone(),
            product,
            left,
            right,
            over,
        }));
    }
    if let Some(ide) = &raw.idealization {
        let base = pick(&ide.base)?;
        let summands = ide
            .summands
            .iter()
            .enumerate()
            .map(|(k, gens)| {
                parse_named_ideal(
                    gens,
                    &base.ring,
                    &format!("construction {:?} summand {k}", raw.name),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let module = ModuleSpec::new(summands)?;
        let built = idealization_presentation(&base.ring, &module)?;
        return Ok(Target::Idealized(IdealizationTarget {
            name: raw.name.clone(),
            built,
            base,
            module,
        }));
    }
    let dup = raw.duplication.as_ref().expect("exactly one branch is present");
    let base = pick(&dup.base)?;
    let ideal = parse_named_ideal(
        &dup.ideal,
        &base.ring,
        &format!("construction {:?} ideal", raw.name),
    )?;
    let built = duplication_presentation(&base.ring, &ideal)?;
    Ok(Target::Duplicated(DuplicationTarget { name: raw.name.clone(), built, base, ideal }))
}

/// Parses a suite document. Paths inside the document (ring files) are read
/// relative to `base_dir`.
pub fn parse_suite(text: &str, base_dir: &Path) -> Result<SuiteConfig> {
    let raw: RawSuite = toml::from_str(text).map_err(|e| Error::parse(e.to_string()))?;

    let mut rings: BTreeMap<String, NamedRing> = BTreeMap::new();
    for r in &raw.ring {
        let ring = resolve_ring(r, base_dir)?;
        let named = NamedRing { name: r.name.clone(), ring };
        if rings.insert(r.name.clone(), named).is_some() {
            return Err(Error::InvalidQuery(format!("duplicate ring name {:?}", r.name)));
        }
    }

    let mut targets: BTreeMap<String, Target> = BTreeMap::new();
    for c in &raw.construction {
        if rings.contains_key(&c.name) {
            return Err(Error::InvalidQuery(format!(
                "construction {:?} shadows a ring of the same name",
                c.name
            )));
        }
        let target = resolved_target(c, &rings)?;
        if targets.insert(c.name.clone(), target).is_some() {
            return Err(Error::InvalidQuery(format!(
                "duplicate construction name {:?}",
                c.name
            )));
        }
    }

    let owner_presentation = |name: &str| -> Result<RingPresentation> {
        if let Some(r) = rings.get(name) {
            return Ok(r.ring.clone());
        }
        match targets.get(name) {
            Some(Target::Fiber(f)) => Ok(f.product.presentation().clone()),
            Some(Target::Idealized(i)) => Ok(i.built.presentation().clone()),
            Some(Target::Duplicated(d)) => Ok(d.built.presentation().clone()),
            _ => Err(Error::MissingInput(format!("unknown ideal owner {name:?}"))),
        }
    };

    let mut ideals: BTreeMap<String, NamedIdeal> = BTreeMap::new();
    for i in &raw.ideal {
        let presentation = owner_presentation(&i.ring)?;
        let ideal = parse_named_ideal(&i.gens, &presentation, &format!("ideal {:?}", i.name))?;
        let named = NamedIdeal { name: i.name.clone(), ideal };
        if ideals.insert(i.name.clone(), named).is_some() {
            return Err(Error::InvalidQuery(format!("duplicate ideal name {:?}", i.name)));
        }
    }

    let default_s_grid = match &raw.defaults.s_grid {
        Some(texts) => parse_s_grid(texts)?,
        None => builtin_s_grid(),
    };
    let default_e_range = raw.defaults.e_range.clone().unwrap_or_else(|| vec![1, 2]);
    let default_tolerance = raw.defaults.tolerance.as_deref().map(parse_rat).transpose()?;

    let mut checks = Vec::with_capacity(raw.check.len());
    for c in &raw.check {
        let theorem = TheoremId::parse(&c.theorem)?;
        let target = match (&c.target, theorem) {
            (None, TheoremId::WyConstants) => Target::None,
            (None, _) => {
                return Err(Error::MissingInput(format!("check {theorem} needs a target")));
            }
            (Some(name), _) => {
                if let Some(r) = rings.get(name) {
                    Target::Ring(r.clone())
                } else if let Some(t) = targets.get(name) {
                    t.clone()
                } else {
                    return Err(Error::MissingInput(format!(
                        "check {theorem} refers to unknown target {name:?}"
                    )));
                }
            }
        };
        let chosen_ideals = c
            .ideals
            .iter()
            .map(|name| {
                ideals.get(name).cloned().ok_or_else(|| {
                    Error::MissingInput(format!(
                        "check {theorem} refers to unknown ideal {name:?}"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let s_grid = match &c.s_grid {
            Some(texts) => parse_s_grid(texts)?,
            None => default_s_grid.clone(),
        };
        let e_range = c.e_range.clone().unwrap_or_else(|| default_e_range.clone());
        let tolerance = match &c.tolerance {
            Some(text) => Some(parse_rat(text)?),
            None => default_tolerance.clone(),
        };
        let label =
            c.label.clone().unwrap_or_else(|| format!("{theorem} @ {}", target.describe()));
        checks.push(CheckSpec {
            theorem,
            label,
            target,
            ideals: chosen_ideals,
            s_grid,
            e_range,
            tolerance,
            hypotheses: Hypotheses {
                cohen_macaulay: c.cohen_macaulay,
                complete_intersection: c.complete_intersection,
                domain: c.domain,
                finite_projective_dimension: c.finite_projective_dimension,
            },
        });
    }

    Ok(SuiteConfig { checks, workers: raw.defaults.workers })
}

/// Reads and parses a suite file; relative paths inside it resolve against
/// its own directory.
pub fn load_suite(path: &Path) -> Result<SuiteConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MissingInput(format!("suite file {}: {e}", path.display())))?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    parse_suite(&text, base_dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use smult_core::ratio::rat;

    const SUITE: &str = r#"
[defaults]
s_grid = ["1", "2"]
e_range = [1, 2, 3]
workers = 2

[[ring]]
name = "line_x"
p = 3
vars = ["x"]

[[ring]]
name = "line_y"
p = 3
vars = ["y"]

[[ring]]
name = "point"
p = 3
vars = []

[[ring]]
name = "plane"
p = 3
vars = ["x", "y"]

[[construction]]
name = "node_fp"
[construction.fiber_product]
left = "line_x"
right = "line_y"
over = "point"

[[construction]]
name = "plane_ide"
[construction.idealization]
base = "plane"
summands = [["x"]]

[[construction]]
name = "dup_line"
[construction.duplication]
base = "line_x"
ideal = ["x"]

[[ideal]]
name = "i_m"
ring = "plane"
gens = ["x", "y"]

[[ideal]]
name = "i_sq"
ring = "plane"
gens = ["x^2", "y^2"]

[[check]]
theorem = "L3.4"
target = "node_fp"

[[check]]
theorem = "T4.2"
target = "plane_ide"
ideals = ["i_m", "i_sq"]
e_range = [1, 2]

[[check]]
theorem = "C3.6"
target = "dup_line"
tolerance = "1/9"

[[check]]
theorem = "WY-constants"
"#;

    #[test]
    fn full_suite_resolves() {
        let suite = parse_suite(SUITE, Path::new(".")).unwrap();
        assert_eq!(suite.workers, Some(2));
        assert_eq!(suite.checks.len(), 4);

        let first = &suite.checks[0];
        assert_eq!(first.theorem, TheoremId::L3_4);
        assert_eq!(first.s_grid, vec![rat(1, 1), rat(2, 1)]);
        assert_eq!(first.e_range, vec![1, 2, 3]);
        assert!(first.tolerance.is_none(), "no default tolerance was set");
        assert!(matches!(first.target, Target::Fiber(_)));

        let second = &suite.checks[1];
        assert_eq!(second.e_range, vec![1, 2], "per-check override wins");
        assert_eq!(second.ideals.len(), 2);
        assert_eq!(second.ideals[0].name, "i_m");

        let third = &suite.checks[2];
        assert_eq!(third.tolerance, Some(rat(1, 9)));
        assert!(matches!(third.target, Target::Duplicated(_)));

        let fourth = &suite.checks[3];
        assert!(matches!(fourth.target, Target::None));
    }

    #[test]
    fn resolved_suite_runs_end_to_end() {
        let suite = parse_suite(SUITE, Path::new(".")).unwrap();
        let reports = crate::check::run_all(&suite.checks, suite.workers);
        assert_eq!(reports.len(), 4);
        for report in &reports {
            assert!(
                report.error.is_none(),
                "check {} errored: {:?}",
                report.theorem,
                report.error
            );
            assert!(
                report.verdict.acceptable(),
                "check {} got {}",
                report.theorem,
                report.verdict
            );
        }
    }

    #[test]
    fn unknown_names_are_rejected_with_context() {
        let bad = r#"
[[check]]
theorem = "T4.2"
target = "nowhere"
"#;
        let err = parse_suite(bad, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("nowhere"), "error names the missing target: {err}");

        let bad_theorem = r#"
[[check]]
theorem = "T99"
"#;
        let err = parse_suite(bad_theorem, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("T99"));
    }

    #[test]
    fn ring_files_resolve_relative_to_the_config() {
        let dir = std::env::temp_dir().join("smult-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let ring = RingPresentation::regular(5, vec!["a".to_string()]).unwrap();
        std::fs::write(dir.join("a_line.toml"), ring.print_spec()).unwrap();
        let suite_text = r#"
[[ring]]
name = "from_file"
file = "a_line.toml"

[[check]]
theorem = "WY-constants"
"#;
        let suite = parse_suite(suite_text, &dir).unwrap();
        assert_eq!(suite.checks.len(), 1);
    }

    #[test]
    fn inline_rings_with_relations_need_an_explicit_dimension() {
        let bad = r#"
[[ring]]
name = "node"
p = 3
vars = ["x", "y"]
monomial = ["x*y"]
"#;
        let err = parse_suite(bad, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("dim"), "error mentions the missing dim: {err}");
    }

    #[test]
    fn name_collisions_are_rejected() {
        let bad = r#"
[[ring]]
name = "thing"
p = 3
vars = ["x"]

[[construction]]
name = "thing"
[construction.duplication]
base = "thing"
ideal = ["x"]
"#;
        let err = parse_suite(bad, Path::new(".")).unwrap_err();
        assert!(err.to_string().contains("shadows"));
    }
}
