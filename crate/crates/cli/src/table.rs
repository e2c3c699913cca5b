//! Plain-text renderings of command outputs.

use std::fmt::Write;

use necklace_core::cobracket::{BiDerivationElem, TensorDerivElem};
use necklace_core::expansion::Expansion;
use necklace_core::homology::HomologyReport;
use necklace_core::json::word_string;
use necklace_core::matrix::SparseRationalMatrix;
use necklace_core::verify::SuiteReport;
use necklace_core::DerivationElem;

use crate::commands::DeformReport;

/// Left-aligned columns separated by two spaces.
fn grid(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn mark(b: bool) -> String {
    if b { "ok" } else { "FAIL" }.into()
}

pub fn derivation(u: &DerivationElem) -> String {
    let rows: Vec<Vec<String>> = u.terms().iter().map(|(n, c)| vec![c.to_string(), n.to_string()]).collect();
    grid(&["coeff", "necklace"], &rows)
}

pub fn pairs(d: &BiDerivationElem) -> String {
    let rows: Vec<Vec<String>> = d
        .terms
        .iter()
        .map(|((p, q), c)| vec![c.to_string(), format!("{p} ⊗ {q}")])
        .collect();
    grid(&["coeff", "term"], &rows)
}

pub fn tensor_deriv(m: &TensorDerivElem) -> String {
    let rows: Vec<Vec<String>> = m
        .terms
        .iter()
        .map(|((w, n), c)| vec![c.to_string(), format!("{} ⊗ {n}", word_string(w))])
        .collect();
    grid(&["coeff", "term"], &rows)
}

pub fn suite(r: &SuiteReport) -> String {
    let mut out = format!(
        "suite {}  g={}  max weight {}  seed {}  random samples {}\n",
        r.suite, r.g, r.max_weight, r.seed, r.random_samples
    );
    let rows: Vec<Vec<String>> = r
        .checks
        .iter()
        .map(|c| {
            let status = if c.gating { mark(c.passed()) } else { format!("{} (info)", mark(c.passed())) };
            vec![c.name.clone(), c.samples.to_string(), c.failures.to_string(), status]
        })
        .collect();
    out += &grid(&["check", "samples", "failures", "status"], &rows);
    let _ = writeln!(out, "overall: {}", mark(r.passed));
    out
}

pub fn homology(r: &HomologyReport) -> String {
    let mut out = format!("g={}\n", r.g);
    let rows: Vec<Vec<String>> = r
        .cells
        .iter()
        .map(|c| {
            vec![
                c.p.to_string(),
                c.w.to_string(),
                c.cell_dim.to_string(),
                c.nullity.to_string(),
                c.image_rank.to_string(),
                c.dim.to_string(),
            ]
        })
        .collect();
    out += &grid(&["p", "w", "dim C", "ker", "im", "dim H"], &rows);
    out.push('\n');
    let rows: Vec<Vec<String>> = r
        .euler_checks
        .iter()
        .map(|e| {
            vec![
                e.s.to_string(),
                format!("{}..{}", e.p_lo, e.p_hi),
                e.chain_euler.to_string(),
                e.homology_euler.to_string(),
                e.top_boundary_rank.to_string(),
                mark(e.holds),
            ]
        })
        .collect();
    out += &grid(&["s", "p", "chi(C)", "chi(H)", "top rank", "status"], &rows);
    out.push('\n');
    let rows: Vec<Vec<String>> = r
        .cohomology
        .iter()
        .filter(|c| c.homology_dim > 0)
        .map(|c| {
            vec![
                format!("({},{})", c.p, c.w),
                c.homology_dim.to_string(),
                c.rank_out.to_string(),
                c.rank_in.to_string(),
                c.dim.to_string(),
                if c.complete { "yes" } else { "no" }.into(),
            ]
        })
        .collect();
    out += &grid(&["cell", "dim H", "rank out", "rank in", "dim", "complete"], &rows);
    let rows: Vec<Vec<String>> = r
        .induced
        .iter()
        .filter(|m| !m.matrix.entries.is_empty())
        .map(|m| {
            let rank = SparseRationalMatrix::from_json(&m.matrix).map_or(0, |x| x.rank());
            vec![
                format!("({},{})", m.source.0, m.source.1),
                format!("({},{})", m.target.0, m.target.1),
                rank.to_string(),
            ]
        })
        .collect();
    if !rows.is_empty() {
        out += "\nnonzero induced maps\n";
        out += &grid(&["from", "to", "rank"], &rows);
    }
    for (s, t) in &r.outside {
        let _ = writeln!(out, "not computed: ({},{}) -> ({},{})", s.0, s.1, t.0, t.1);
    }
    let _ = writeln!(out, "consistent: {}", mark(r.consistent()));
    out
}

pub fn deform(r: &DeformReport) -> String {
    let mut out = format!("g={}  A in N(g): {}\n", r.g, r.in_n);
    if !r.homotopy.is_empty() {
        let rows: Vec<Vec<String>> = r.homotopy.iter().map(|h| vec![h.p.to_string(), h.w.to_string(), mark(h.holds)]).collect();
        out += "homotopy identity\n";
        out += &grid(&["p", "w", "status"], &rows);
    }
    if let Some(inv) = &r.invariance {
        let rows: Vec<Vec<String>> = inv
            .clauses
            .iter()
            .map(|c| {
                let s = mark(c.passed);
                vec![c.clause.clone(), if c.required { s } else { format!("{s} (info)") }]
            })
            .collect();
        out += "conditions\n";
        out += &grid(&["clause", "status"], &rows);
        let rows: Vec<Vec<String>> = inv
            .cells
            .iter()
            .map(|c| {
                vec![
                    c.complex.clone(),
                    c.p.to_string(),
                    c.w.to_string(),
                    c.homology_dim.to_string(),
                    mark(c.chain_identity),
                    mark(c.induced_equal),
                ]
            })
            .collect();
        out += "cells\n";
        out += &grid(&["complex", "p", "w", "dim H", "d′−d", "induced"], &rows);
    }
    if let Some(e) = &r.error {
        let _ = writeln!(out, "error: {e}");
    }
    let _ = writeln!(out, "overall: {}", mark(r.passed));
    out
}

pub fn expansion(th: &Expansion) -> String {
    let mut out = format!("g={}  D={}\n", th.genus(), th.cutoff());
    for (k, t) in th.images().iter().enumerate() {
        let _ = writeln!(out, "theta(x{})", k + 1);
        let rows: Vec<Vec<String>> = t
            .tensor()
            .terms()
            .iter()
            .map(|(w, c)| vec![c.to_string(), word_string(w)])
            .collect();
        out += &grid(&["coeff", "word"], &rows);
    }
    out
}
