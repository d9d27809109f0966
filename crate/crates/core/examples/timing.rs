use facetsym::polytope::hull;
use facetsym::LatticePolytope;
use std::time::Instant;

fn main() {
    let dp4 = LatticePolytope::del_pezzo(4).unwrap();
    let dual_pts: Vec<Vec<i64>> = dp4.facets().iter().map(|f| f.normal.clone()).collect();
    let t = Instant::now();
    let h = hull::convex_hull(&dual_pts, 8).unwrap();
    println!("dp4-dual hull: {:?}; simplices {}", t.elapsed(), h.simplices.len());
    let t = Instant::now();
    let smooth = dp4.is_smooth().unwrap();
    println!("dp4 smooth={smooth}: {:?}", t.elapsed());
}
