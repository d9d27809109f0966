//! Desk-scale sweep of the main statement: every family expression over
//! seg, dp(k <= 4), pdp(k <= 4) of dimension at most 8 certifies as
//! SEMISIMPLE, with the critical count matching the expected count.

use facetsym::config::Config;
use facetsym::verify::{analyze, Verdict};
use facetsym::FamilyExpr;

fn atoms() -> Vec<FamilyExpr> {
    let mut v = vec![FamilyExpr::Seg];
    for k in 1..=4 {
        v.push(FamilyExpr::Dp(k));
        v.push(FamilyExpr::Pdp(k));
    }
    v
}

fn multisets_up_to_dim(max_dim: usize) -> Vec<FamilyExpr> {
    let atoms = atoms();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize, Vec<FamilyExpr>)> = vec![(0, 0, Vec::new())];
    while let Some((start, dim, chosen)) = stack.pop() {
        if !chosen.is_empty() {
            out.push(FamilyExpr::product_of(chosen.clone()).expect("nonempty"));
        }
        for (i, atom) in atoms.iter().enumerate().skip(start) {
            let next_dim = dim + atom.dim();
            if next_dim <= max_dim {
                let mut next = chosen.clone();
                next.push(atom.clone());
                stack.push((i, next_dim, next));
            }
        }
    }
    out.sort_by_key(|e| (e.dim(), e.to_string()));
    out
}

#[test]
fn every_family_expression_up_to_dim_8_is_semisimple() {
    let config = Config::default();
    let exprs = multisets_up_to_dim(8);
    assert!(exprs.len() > 90, "sweep must cover the whole desk scale");
    let mut total_points = 0u64;
    for expr in &exprs {
        let report = analyze(expr, &config)
            .unwrap_or_else(|e| panic!("{expr}: analysis failed: {e}"));
        assert_eq!(
            report.verdict,
            Verdict::Semisimple,
            "{expr}: verdict with checks {:?}",
            report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| (&c.name, &c.detail))
                .collect::<Vec<_>>()
        );
        assert_eq!(
            report.critical_count, report.expected_count,
            "{expr}: completeness"
        );
        assert!(report.points.iter().all(|p| !p.degenerate), "{expr}");
        total_points += report.critical_count;
    }
    println!(
        "sweep: {} expressions, {} certified critical points",
        exprs.len(),
        total_points
    );
}
