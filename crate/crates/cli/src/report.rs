//! Report rendering.
//!
//! Two output shapes: an RFC 4180 CSV with one row per evaluated grid point
//! (rationals always as explicit numerator/denominator so downstream tools
//! never see a rounded value), and a human summary with one line per check.
//! Rendering is pure string assembly from already-computed reports, so
//! repeated runs over the same inputs produce byte-identical output.

use smult_core::ratio::{rat_decimal, rat_display};
use smult_core::{HEstimate, Rat};

use crate::check::{CheckReport, Verdict};

/// Quotes a CSV field when it contains a comma, quote, or line break.
fn csv_field(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') || text.contains('\r') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
}

/// One CSV document for a whole suite run: a fixed header, then one row per
/// grid point of every report in order. Checks that errored before
/// producing rows contribute a single row carrying the verdict and the
/// error text in the ring column.
pub fn csv_report(reports: &[CheckReport]) -> String {
    let mut out = String::from("theorem_id,ring,s,e,q,lhs,rhs,slack,verdict\r\n");
    for report in reports {
        if report.rows.is_empty() {
            let context = match &report.error {
                Some(msg) => format!("error: {msg}"),
                None => "-".to_string(),
            };
            out.push_str(&csv_line(&[
                report.theorem.token().to_string(),
                context,
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                report.verdict.token().to_string(),
            ]));
            out.push_str("\r\n");
            continue;
        }
        for row in &report.rows {
            out.push_str(&csv_line(&[
                report.theorem.token().to_string(),
                row.context.clone(),
                rat_display(&row.s),
                row.e.to_string(),
                row.q.to_string(),
                rat_display(&row.lhs),
                rat_display(&row.rhs),
                rat_display(&row.slack),
                report.verdict.token().to_string(),
            ]));
            out.push_str("\r\n");
        }
    }
    out
}

/// One line per check: verdict, token, label, runtime, then any notes and
/// the error, indented beneath.
pub fn human_summary(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for report in reports {
        out.push_str(&format!(
            "[{}] {} {} ({} rows, {} ms)\n",
            report.verdict,
            report.theorem,
            report.label,
            report.rows.len(),
            report.runtime_ms
        ));
        for note in &report.notes {
            out.push_str(&format!("    note: {note}\n"));
        }
        if let Some(err) = &report.error {
            out.push_str(&format!("    error: {err}\n"));
        }
    }
    let total = reports.len();
    let passed = reports.iter().filter(|r| r.verdict == Verdict::Pass).count();
    let in_limit = reports.iter().filter(|r| r.verdict == Verdict::PassInLimit).count();
    let failed = reports.iter().filter(|r| r.verdict == Verdict::Fail).count();
    let inconclusive = reports.iter().filter(|r| r.verdict == Verdict::Inconclusive).count();
    out.push_str(&format!(
        "{total} checks: {passed} PASS, {in_limit} PASS-IN-LIMIT, {failed} FAIL, \
         {inconclusive} INCONCLUSIVE\n"
    ));
    out
}

/// CSV table of one estimate: per-sample rows with the exact fraction and a
/// 12-digit decimal rendering, then the extrapolation and the gap.
pub fn table_csv(s: &Rat, estimate: &HEstimate) -> String {
    const DIGITS: u32 = 12;
    let mut out = String::from("s,e,q,length,value,decimal\r\n");
    for sample in &estimate.samples {
        out.push_str(&csv_line(&[
            rat_display(s),
            sample.e.to_string(),
            sample.q.to_string(),
            sample.length.to_string(),
            rat_display(&sample.normalized),
            rat_decimal(&sample.normalized, DIGITS),
        ]));
        out.push_str("\r\n");
    }
    out.push_str(&csv_line(&[
        rat_display(s),
        "richardson".to_string(),
        String::new(),
        String::new(),
        rat_display(&estimate.richardson),
        rat_decimal(&estimate.richardson, DIGITS),
    ]));
    out.push_str("\r\n");
    out.push_str(&csv_line(&[
        rat_display(s),
        "gap".to_string(),
        String::new(),
        String::new(),
        rat_display(&estimate.gap),
        rat_decimal(&estimate.gap, DIGITS),
    ]));
    out.push_str("\r\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{run_check, CheckSpec, Hypotheses, Target, TheoremId};
    use smult_core::ratio::rat;
    use smult_core::{h_estimate, HQuery, RingPresentation};

    fn zigzag_report() -> CheckReport {
        run_check(&CheckSpec {
            theorem: TheoremId::WyConstants,
            label: "table".to_string(),
            target: Target::None,
            ideals: Vec::new(),
            s_grid: vec![rat(1, 1)],
            e_range: vec![1],
            tolerance: None,
            hypotheses: Hypotheses::default(),
        })
    }

    #[test]
    fn csv_has_header_and_one_row_per_grid_point() {
        let report = zigzag_report();
        let csv = csv_report(std::slice::from_ref(&report));
        let lines: Vec<&str> = csv.trim_end().split("\r\n").collect();
        assert_eq!(lines[0], "theorem_id,ring,s,e,q,lhs,rhs,slack,verdict");
        assert_eq!(lines.len(), 1 + report.rows.len());
        assert!(lines[1].starts_with("WY-constants,"));
        assert!(lines[1].ends_with(",PASS"));
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 9);
        assert!(fields[5].contains('/'), "rationals keep the explicit denominator");
    }

    #[test]
    fn csv_output_is_deterministic() {
        let reports = vec![zigzag_report(), zigzag_report()];
        let first = csv_report(&reports);
        let second = csv_report(&reports);
        assert_eq!(first, second, "same reports, same bytes");
    }

    #[test]
    fn errored_checks_still_produce_a_row() {
        let report = run_check(&CheckSpec {
            theorem: TheoremId::T4_2,
            label: "broken".to_string(),
            target: Target::None,
            ideals: Vec::new(),
            s_grid: vec![rat(1, 1)],
            e_range: vec![1],
            tolerance: None,
            hypotheses: Hypotheses::default(),
        });
        let csv = csv_report(std::slice::from_ref(&report));
        let lines: Vec<&str> = csv.trim_end().split("\r\n").collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].contains("INCONCLUSIVE"));
        assert!(lines[1].contains("error:"));
    }

    #[test]
    fn fields_with_commas_are_quoted() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_field("plain"), "plain");
    }

    #[test]
    fn summary_counts_verdicts() {
        let summary = human_summary(&[zigzag_report()]);
        assert!(summary.contains("[PASS] WY-constants table"));
        assert!(summary.contains("1 checks: 1 PASS, 0 PASS-IN-LIMIT, 0 FAIL, 0 INCONCLUSIVE"));
    }

    #[test]
    fn table_lists_samples_then_extrapolation() {
        let ring = RingPresentation::regular(3, vec!["x".to_string(), "y".to_string()]).unwrap();
        let query = HQuery::principal(ring, rat(1, 1), vec![1, 2]).unwrap();
        let estimate = h_estimate(&query).unwrap();
        let table = table_csv(&rat(1, 1), &estimate);
        let lines: Vec<&str> = table.trim_end().split("\r\n").collect();
        assert_eq!(lines[0], "s,e,q,length,value,decimal");
        assert_eq!(lines.len(), 5, "two samples, richardson, gap");
        assert!(lines[1].starts_with("1/1,1,3,6,"));
        assert!(lines[3].contains("richardson"));
        assert!(lines[4].contains("gap"));
        assert!(lines[3].contains("1/2"), "extrapolated value is exactly one half");
    }
}
