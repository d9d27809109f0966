//! Independent solver oracle: Newton iteration from many random torus
//! starts must never land on a critical point missing from the structured
//! enumeration. Together with the volume count (which certifies the total)
//! this pins the critical set from both sides.

use facetsym::critsolve::{crit_for_family, newton_refine, point_distance, SolveOptions};
use facetsym::laurent::superpotential;
use facetsym::polytope::parse_family;
use num_complex::Complex64;

fn random_starts(n: usize, count: usize, salt: u64) -> Vec<Vec<Complex64>> {
    let mut state = 0x9e3779b97f4a7c15u64 ^ salt;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let r = 0.4 + 1.8 * next();
                    Complex64::from_polar(r, std::f64::consts::TAU * next())
                })
                .collect()
        })
        .collect()
}

#[test]
fn random_newton_runs_never_find_unlisted_points() {
    for (salt, expr_text) in [(1u64, "dp(1)"), (2, "pdp(1)"), (3, "seg*pdp(1)"), (4, "pdp(2)")] {
        let expr = parse_family(expr_text).unwrap();
        let poly = expr.realize().unwrap();
        let w = superpotential(&poly);
        let set = crit_for_family(&expr, &SolveOptions::default()).unwrap();
        let mut hits = vec![false; set.len()];
        for start in random_starts(poly.dim(), 300, salt) {
            let Ok(found) = newton_refine(&w, start, 60, 1e-10) else {
                continue;
            };
            let idx = set
                .points()
                .iter()
                .position(|p| point_distance(&p.point, &found.point) < 1e-7);
            match idx {
                Some(i) => hits[i] = true,
                None => panic!(
                    "{expr_text}: Newton found a critical point outside the structured set: {:?} (residual {:.2e})",
                    found.point, found.residual
                ),
            }
        }
        // random Newton basins thin out quickly with dimension; the check
        // above (nothing unlisted) is the substance, this only guards
        // against a vacuous run
        let found = hits.iter().filter(|&&h| h).count();
        assert!(
            found >= 3.min(set.len()),
            "{expr_text}: random search rediscovered too little ({found}/{})",
            set.len()
        );
    }
}
