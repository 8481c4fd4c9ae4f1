//! Checking harness for h-function and s-multiplicity statements.
//!
//! The library half of the command-line tool: `check` evaluates a statement
//! on an explicit grid of (s, e) points and issues a verdict, `config` reads
//! suites of such checks from TOML, and `report` renders grids and verdicts
//! as CSV and human-readable summaries.

pub mod check;
pub mod config;
pub mod report;

pub use check::{
    reference_quadric, run_all, run_check, CheckReport, CheckSpec, DuplicationTarget,
    FiberTarget, GridRow, Hypotheses, IdealizationTarget, NamedIdeal, NamedRing, Relation,
    Target, TheoremId, Verdict,
};
pub use config::{load_suite, parse_suite, SuiteConfig};
pub use report::{csv_report, human_summary, table_csv};
