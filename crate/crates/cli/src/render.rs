//! Human-readable output. Polynomials are shown by monomial coefficients,
//! not in the stored `y^n/n!` coordinates.

use std::fmt::Write;

use polymod::l_engine::{ChainDecomposition, GammaTable, OrderReport};
use polymod::module_algebra::{Membership, VSpaceBasis};
use polymod::nonclosed::{BoundReport, RatioRow, Threshold};
use polymod::BiPoly;

pub fn bipoly(f: &BiPoly) -> String {
    format!("{f}")
}

pub fn bipoly_list(fs: &[BiPoly]) -> String {
    let mut s = format!("basis of dimension {}", fs.len());
    for f in fs {
        write!(s, "\n  {f}").unwrap();
    }
    s
}

pub fn membership(m: &Membership) -> String {
    match &m.certificate {
        None if m.contains => "contained".into(),
        None => "not contained".into(),
        Some(c) => format!("not contained: {}", serde_json::to_string(c).expect("json")),
    }
}

pub fn vspace(v: &VSpaceBasis) -> String {
    let mut s = format!("dimension {} (s = {}, deg_bound = {})", v.dim(), v.s, v.deg_bound);
    for t in &v.basis {
        let parts: Vec<String> = t.iter().map(|p| p.to_string()).collect();
        write!(s, "\n  ({})", parts.join(", ")).unwrap();
    }
    s
}

pub fn gamma(g: &GammaTable) -> String {
    let mut s = format!("order {}", g.s());
    for (i, j, a) in g.entries() {
        write!(s, "\n  a[{i},{j}] = {a}").unwrap();
    }
    s
}

pub fn order_report(r: &OrderReport) -> String {
    let mut s = format!(
        "order {} (deg_bound {}, span dimension {}, {} coordinates compared)",
        r.order, r.deg_bound, r.certificate.dim, r.certificate.compared
    );
    if let Some(w) = &r.certificate.witness {
        write!(s, "\n  first {} coordinates vanish on {w}", r.order.saturating_sub(1)).unwrap();
    }
    s
}

pub fn chains(c: &ChainDecomposition) -> String {
    let lengths: Vec<String> = c.lengths().iter().map(usize::to_string).collect();
    let mut s = format!("dimension {}, chain lengths [{}]", c.dim, lengths.join(", "));
    for ch in &c.chains {
        let g: Vec<String> = ch.generator.iter().map(|x| x.to_string()).collect();
        write!(s, "\n  length {}: [{}]", ch.length, g.join(", ")).unwrap();
    }
    s
}

pub fn demo(rows: &[BoundReport], thresholds: &[Threshold]) -> String {
    let mut s = format!("{:>4}  {:>26}  {:>26}  {:>26}  certified", "n", "log10_linear", "log10_tail", "log10_total");
    for r in rows {
        write!(
            s,
            "\n{:>4}  {:>26}  {:>26}  {:>26}  {}",
            r.n,
            r.log_linear_term.log10_mag().to_sci_string(12),
            r.log_tail_term.log10_mag().to_sci_string(12),
            r.log_total.log10_mag().to_sci_string(12),
            r.certified
        )
        .unwrap();
    }
    s.push_str("\nvalues are log10 of upper bounds; empirical thresholds:");
    for t in thresholds {
        let from = t.holds_from.map_or("never".to_string(), |n| format!("n >= {n}"));
        write!(s, "\n  {}: {from} (checked to n = {})", t.condition, t.checked_up_to).unwrap();
    }
    s
}

pub fn e14(rows: &[RatioRow]) -> String {
    let mut s = format!("{:>4}  {:>26}", "n", "ln ratio");
    for r in rows {
        write!(s, "\n{:>4}  {:>26}", r.n, r.log_ratio.to_sci_string(12)).unwrap();
    }
    s
}
