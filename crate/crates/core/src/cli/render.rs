//! Plain-text tables printed after the JSON report. Not meant to be parsed.

use super::SelftestSummary;
use crate::action::ProjectiveAction;
use crate::eqsheaf::{CoverageStatus, DescentReport, PointSource};
use crate::fm::{OmegaReport, OmegaVerdict};
use std::fmt::Write;

pub(super) struct StratumLine<'a> {
    pub support: &'a [usize],
    pub order: usize,
    pub generators: &'a [Vec<u64>],
    pub scalar: String,
}

fn support(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn tuple(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// The closure of a stratum: the coordinates off the support vanish.
pub(super) fn linear_subspace(act: &ProjectiveAction, s: &[usize]) -> String {
    let zero: Vec<String> = (0..=act.dim()).filter(|i| !s.contains(i)).map(|i| format!("x{i}")).collect();
    if zero.is_empty() {
        format!("P^{}", act.dim())
    } else {
        format!("{{{} = 0}}", zero.join(" = "))
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "  {}", padded.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

pub(super) fn strata(act: &ProjectiveAction, rows: &[StratumLine<'_>], locus: &[String]) -> String {
    let mut out = format!("strata of P^{} under {:?}\n", act.dim(), act.group().orders());
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let gens: Vec<String> = r.generators.iter().map(|g| tuple(g)).collect();
            vec![
                support(r.support),
                r.order.to_string(),
                if gens.is_empty() { "-".into() } else { gens.join(" ") },
                r.scalar.clone(),
            ]
        })
        .collect();
    out.push_str(&table(&["support", "|stab|", "generators", "scalar"], &body));
    if locus.is_empty() {
        out.push_str("fixed locus: empty (free action)\n");
    } else {
        let _ = writeln!(out, "fixed locus: {}", locus.join(" u "));
    }
    out
}

pub(super) fn descent(title: &str, r: &DescentReport) -> String {
    let mut out = format!("{title}: {}\n", if r.passed() { "PASS" } else { "FAIL" });
    let mut body = Vec::new();
    for t in &r.tables {
        let source = match t.source {
            PointSource::User => "user",
            PointSource::Sample => "sample",
            PointSource::UserAndSample => "user+sample",
        };
        for e in &t.entries {
            body.push(vec![
                t.point.to_string(),
                support(&t.support),
                t.stabilizer_order.to_string(),
                source.to_string(),
                e.degree.to_string(),
                e.character.to_string(),
                if e.trivial { "yes" } else { "no" }.to_string(),
                e.dimension.to_string(),
            ]);
        }
    }
    if !body.is_empty() {
        out.push_str(&table(&["point", "support", "|stab|", "source", "H^j", "character", "trivial", "dim"], &body));
    }
    if !r.witnesses.is_empty() {
        out.push_str("witnesses:\n");
        for w in &r.witnesses {
            let _ = writeln!(out, "  {}: H^{} has character {} with multiplicity {}", w.point, w.degree, w.character, w.dimension);
        }
    }
    out.push_str("coverage:\n");
    let cov: Vec<Vec<String>> = r
        .coverage
        .iter()
        .map(|c| {
            let status = match c.status {
                CoverageStatus::Exact => "exact",
                CoverageStatus::Sampled => "sampled",
                CoverageStatus::Unchecked => "unchecked",
            };
            vec![support(&c.support), c.stabilizer_order.to_string(), status.to_string(), c.reason.clone()]
        })
        .collect();
    out.push_str(&table(&["support", "|stab|", "status", "reason"], &cov));
    for c in &r.caveats {
        let _ = writeln!(out, "caveat: {c}");
    }
    out
}

pub(super) fn omega(word: &str, r: &OmegaReport) -> String {
    let verdict = match r.verdict {
        OmegaVerdict::Certified => "CERTIFIED",
        OmegaVerdict::Disproved => "DISPROVED",
    };
    let mut out = format!(
        "omega {word} = {}: {verdict} (generators: {} -> {})\n",
        r.word, r.generator_a, r.generator_b
    );
    if !r.failing_conditions.is_empty() {
        let _ = writeln!(out, "failing conditions: {}", r.failing_conditions.join(", "));
    }
    out.push_str(&descent("condition (i)", &r.condition_i));
    out.push_str(&descent("condition (ii)", &r.condition_ii));
    for c in &r.caveats {
        let _ = writeln!(out, "caveat: {c}");
    }
    out
}

pub(super) fn selftest(s: &SelftestSummary) -> String {
    let mut out = format!(
        "selftest-oracle: {} trials, {} points compared, {} mismatches\n",
        s.trials,
        s.points_compared,
        s.mismatches.len()
    );
    for m in &s.mismatches {
        let _ = writeln!(out, "  trial {} at {}: {}", m.trial, m.point, m.detail);
    }
    out
}
