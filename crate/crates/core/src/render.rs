//! Text rendering of analysis reports.

use std::fmt::Write as _;

use crate::analysis::{AnalysisReport, ExactSource, PsiTable, Side};
use crate::family::format_index_set;

fn or_marker(v: Option<usize>, marker: &str) -> String {
    v.map_or_else(|| marker.to_string(), |x| x.to_string())
}

/// Aligned `field value` lines followed by the per-index lattice table.
pub fn render_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let term = &report.upper_bound_term;
    let term_desc = match term.side {
        Side::CIntersection => format!("d_α·d'^α at α={}", term.alpha),
        Side::DIntersection => format!("d^α·d'_α at α={}", term.alpha),
    };
    let source = match report.exact_source {
        ExactSource::Enumeration => "enumeration",
        ExactSource::CoincidingBounds => "coinciding bounds",
        ExactSource::Skipped => "skipped",
    };
    let lines: Vec<(&str, String)> = vec![
        ("n", report.n.to_string()),
        ("n_prime", report.n_prime.to_string()),
        ("s", report.s.to_string()),
        ("length", report.length().to_string()),
        ("rank", report.rank.to_string()),
        ("kappa_formula", or_marker(report.kappa_formula, "NOT-APPLICABLE")),
        ("upper_bound", format!("{}  ({term_desc})", report.upper_bound)),
        ("lower_bound", or_marker(report.lower_bound, "NOT-APPLICABLE")),
        (
            "exact_distance",
            format!("{}  ({source})", or_marker(report.exact_distance, "SKIPPED")),
        ),
        ("c_acyclic", report.c_acyclic.to_string()),
        ("d_acyclic", report.d_acyclic.to_string()),
        ("c_embedded", report.c_embedded.to_string()),
        ("d_embedded", report.d_embedded.to_string()),
        ("theorem_b_applies", report.theorem_b_applies.to_string()),
        ("bounds_coincide", report.bounds_coincide.to_string()),
    ];
    for (key, value) in lines {
        writeln!(out, "{key:<18} {value}").expect("string write");
    }
    for note in &report.notes {
        writeln!(out, "note               {note}").expect("string write");
    }

    writeln!(out).expect("string write");
    writeln!(
        out,
        "{:<8} {:>4} {:>4} {:>9} {:>4} | {:>5} {:>5} {:>9} {:>5}",
        "α", "k_α", "k^α", "d_α", "d^α", "k'_α", "k'^α", "d'_α", "d'^α"
    )
    .expect("string write");
    for row in &report.per_alpha_table {
        writeln!(
            out,
            "{:<8} {:>4} {:>4} {:>9} {:>4} | {:>5} {:>5} {:>9} {:>5}",
            row.alpha.to_string(),
            row.c.k_intersection,
            row.c.k_sum,
            row.c.d_intersection.to_string(),
            row.c.d_sum.to_string(),
            row.d.k_intersection,
            row.d.k_sum,
            row.d.d_intersection.to_string(),
            row.d.d_sum.to_string(),
        )
        .expect("string write");
    }
    out
}

fn render_branch(out: &mut String, table: &PsiTable, basis: &str, value: &str) {
    writeln!(out, "Ψ({basis}) = {}", format_index_set(&table.tags)).expect("string write");
    let rows: Vec<[String; 4]> = table
        .rows
        .iter()
        .map(|r| {
            [
                format_index_set(&r.psi0),
                format_index_set(&r.psi0_star),
                format_index_set(&r.psi0_star_minimal),
                r.value.to_string(),
            ]
        })
        .collect();
    let header = [
        "Ψ0".to_string(),
        "Ψ0*".to_string(),
        "minimal Ψ0*".to_string(),
        value.to_string(),
    ];
    let widths: Vec<usize> = (0..4)
        .map(|c| {
            rows.iter()
                .map(|r| r[c].chars().count())
                .chain(std::iter::once(header[c].chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let write_row = |out: &mut String, cells: &[String; 4]| {
        let mut line = String::new();
        for (c, cell) in cells.iter().enumerate() {
            let pad = widths[c] - cell.chars().count();
            if c == 3 {
                line.push_str(&" ".repeat(pad));
                line.push_str(cell);
            } else {
                line.push_str(cell);
                line.push_str(&" ".repeat(pad + 2));
            }
        }
        writeln!(out, "{line}").expect("string write");
    };
    write_row(out, &header);
    for r in &rows {
        write_row(out, r);
    }
    writeln!(out, "min {value} = {}", table.value).expect("string write");
}

/// The `Ψ0 / Ψ0* / m` tables of the lower bound, one per family.
pub fn render_psi_tables(report: &AnalysisReport) -> String {
    let Some(lower) = &report.psi_tables else {
        return "lower bound not applicable: a family is not acyclic\n".to_string();
    };
    let mut out = String::new();
    render_branch(&mut out, &lower.from_c, "e", "m1");
    writeln!(out).expect("string write");
    render_branch(&mut out, &lower.from_d, "g", "m2");
    writeln!(
        out,
        "\nlower_bound = max({}, {}) = {}",
        lower.from_c.value, lower.from_d.value, lower.value
    )
    .expect("string write");
    out
}
