//! Structural invariants of the generating families and their convex-hull
//! products: reflexivity and smoothness across the whole desk-scale range,
//! duality as an involution, and duality exchanging convex-hull products
//! with Cartesian products.

use facetsym::polytope::parse_family;
use facetsym::{FamilyExpr, LatticePolytope};

fn atoms() -> Vec<FamilyExpr> {
    let mut v = vec![FamilyExpr::Seg];
    for k in 1..=4 {
        v.push(FamilyExpr::Dp(k));
        v.push(FamilyExpr::Pdp(k));
    }
    v
}

/// Multisets of atoms with total dimension in the given range, as
/// non-decreasing index sequences.
fn products_with_dim(min_dim: usize, max_dim: usize) -> Vec<FamilyExpr> {
    let atoms = atoms();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize, Vec<FamilyExpr>)> = vec![(0, 0, Vec::new())];
    while let Some((start, dim, chosen)) = stack.pop() {
        if !chosen.is_empty() && dim >= min_dim {
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

fn assert_reflexive_and_smooth(expr: &FamilyExpr) {
    let poly = expr.realize().unwrap_or_else(|e| panic!("{expr}: {e}"));
    assert!(poly.is_reflexive(), "{expr} must be reflexive");
    assert!(
        poly.is_smooth().unwrap_or_else(|e| panic!("{expr}: {e}")),
        "{expr} must be smooth"
    );
}

#[test]
fn family_products_reflexive_and_smooth_up_to_dim_5() {
    for expr in products_with_dim(1, 5) {
        assert_reflexive_and_smooth(&expr);
    }
}

#[test]
fn family_products_reflexive_and_smooth_dim_6() {
    for expr in products_with_dim(6, 6) {
        assert_reflexive_and_smooth(&expr);
    }
}

#[test]
fn family_products_reflexive_and_smooth_dim_7() {
    for expr in products_with_dim(7, 7) {
        assert_reflexive_and_smooth(&expr);
    }
}

#[test]
fn family_products_reflexive_and_smooth_dim_8() {
    for expr in products_with_dim(8, 8) {
        assert_reflexive_and_smooth(&expr);
    }
}

#[test]
fn dual_is_an_involution() {
    let mut cases: Vec<FamilyExpr> = atoms();
    cases.push(parse_family("seg*seg").unwrap());
    cases.push(parse_family("seg*dp(1)*pdp(1)").unwrap());
    cases.push(parse_family("dp(2)*pdp(1)").unwrap());
    for expr in cases {
        let poly = expr.realize().unwrap();
        let back = poly.dual().unwrap().dual().unwrap();
        assert_eq!(
            back.vertices(),
            poly.vertices(),
            "dual involution failed for {expr}"
        );
    }
}

#[test]
fn dual_of_product_is_cartesian_product_of_duals() {
    let pairs = [
        ("seg", "seg"),
        ("seg", "dp(1)"),
        ("pdp(1)", "dp(1)"),
        ("dp(2)", "pdp(1)"),
    ];
    for (a, b) in pairs {
        let pa = parse_family(a).unwrap().realize().unwrap();
        let pb = parse_family(b).unwrap().realize().unwrap();
        let product_dual = pa.convex_hull_product(&pb).unwrap().dual().unwrap();
        let da = pa.dual().unwrap();
        let db = pb.dual().unwrap();
        let mut expect: Vec<Vec<i64>> = Vec::new();
        for u in da.vertices() {
            for v in db.vertices() {
                let mut w = u.clone();
                w.extend_from_slice(v);
                expect.push(w);
            }
        }
        expect.sort_unstable();
        assert_eq!(
            product_dual.vertices().to_vec(),
            expect,
            "product duality failed for {a} x {b}"
        );
    }
}

/// Hull-based smoothness oracle: rebuild the moment polytope from the
/// facet normals and read incidences off its computed facet list.
fn smooth_via_dual_hull(p: &LatticePolytope) -> Result<bool, String> {
    let moment = p.dual().map_err(|e| e.to_string())?;
    for v in moment.vertices() {
        let incident: Vec<Vec<i64>> = moment
            .facets()
            .iter()
            .filter(|f| {
                let d: i64 = v.iter().zip(&f.normal).map(|(&a, &b)| a * b).sum();
                d == f.offset
            })
            .map(|f| f.normal.clone())
            .collect();
        if incident.len() != p.dim() {
            return Err(format!(
                "non-simple dual vertex {v:?}: {} incident facets",
                incident.len()
            ));
        }
        let det = facetsym::polytope::exact::det(&incident);
        let one = num_bigint::BigInt::from(1);
        if det != one && det != -one {
            return Ok(false);
        }
    }
    Ok(true)
}

#[test]
fn smoothness_agrees_with_dual_hull_oracle() {
    for expr in ["seg", "dp(1)", "pdp(1)", "dp(2)", "pdp(2)", "seg*seg", "seg*dp(1)", "dp(1)*pdp(1)"] {
        let poly = parse_family(expr).unwrap().realize().unwrap();
        let fast = poly.is_smooth().unwrap();
        let oracle = smooth_via_dual_hull(&poly).unwrap();
        assert_eq!(fast, oracle, "{expr}");
        assert!(fast, "{expr} is smooth");
    }

    // both routes must reject the square (dual diamond has index-2 cones)
    let square = LatticePolytope::new(
        2,
        vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]],
    )
    .unwrap();
    assert!(!square.is_smooth().unwrap());
    assert!(!smooth_via_dual_hull(&square).unwrap());

    // both routes must flag the non-simple dual vertex of the 3-cube
    let mut cube = Vec::new();
    for i in 0..8u32 {
        cube.push((0..3).map(|b| if i >> b & 1 == 1 { 1i64 } else { -1 }).collect());
    }
    let cube = LatticePolytope::new(3, cube).unwrap();
    assert!(cube.is_smooth().is_err());
    assert!(smooth_via_dual_hull(&cube).is_err());
}

#[test]
fn product_vertex_sets_are_the_advertised_unions() {
    // the constructor re-derives vertices from the hull, so equality here
    // is a computed fact, not an assumption
    for (a, b) in [("seg", "pdp(2)"), ("dp(1)", "dp(1)")] {
        let pa = parse_family(a).unwrap().realize().unwrap();
        let pb = parse_family(b).unwrap().realize().unwrap();
        let prod = pa.convex_hull_product(&pb).unwrap();
        assert_eq!(prod.vertices().len(), pa.vertices().len() + pb.vertices().len());
    }
}
