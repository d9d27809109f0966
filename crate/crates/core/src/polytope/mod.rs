//! Exact-arithmetic lattice polytope core: family generators, convex-hull
//! products, facet enumeration, duality, and the reflexive / smooth /
//! facet-symmetric predicates.
//!
//! Polytopes are validated at construction: vertices must be pairwise
//! distinct, full-dimensional, irredundant (every listed point really is a
//! hull vertex), and the origin must be strictly interior. Facets are
//! enumerated eagerly so every later operation is pure and total.

pub mod exact;
mod family;
pub mod hull;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use family::{parse_family, FamilyExpr};

/// A point of the integer lattice.
pub type LatticeVector = Vec<i64>;

/// A supporting halfspace `<x, normal> <= offset` with primitive integer
/// normal. For lattice polytopes the offset of a primitive facet is an
/// integer (the dot product of integer vectors).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: LatticeVector,
    pub offset: i64,
}

/// A full-dimensional lattice polytope with the origin in its interior,
/// stored as the sorted vertex list plus the eagerly computed facet
/// description and boundary triangulation.
#[derive(Debug, Clone)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<LatticeVector>,
    facets: Vec<Facet>,
    boundary: Vec<hull::Simplex>,
}

/// Wire format: `{"dim": n, "vertices": [[int,...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
}

impl LatticePolytope {
    /// Validates and builds a polytope from a candidate vertex list.
    pub fn new(dim: usize, vertices: Vec<LatticeVector>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyVertices);
        }
        if dim == 0 {
            return Err(Error::Degenerate { rank: 0, dim: 0 });
        }
        for (index, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    got: v.len(),
                    expected: dim,
                });
            }
        }
        let mut vertices = vertices;
        vertices.sort_unstable();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].clone()));
            }
        }
        let hull = hull::convex_hull(&vertices, dim)?;
        if hull.vertex_ids.len() != vertices.len() {
            let on_hull: BTreeSet<usize> = hull.vertex_ids.iter().copied().collect();
            let offender = (0..vertices.len())
                .find(|i| !on_hull.contains(i))
                .expect("some vertex is redundant");
            return Err(Error::RedundantVertex(vertices[offender].clone()));
        }
        if let Some((normal, offset)) = hull.facets.iter().find(|(_, a)| *a <= 0) {
            let _ = (normal, offset);
            return Err(Error::OriginNotInterior);
        }
        let facets = hull
            .facets
            .into_iter()
            .map(|(normal, offset)| Facet { normal, offset })
            .collect();
        Ok(Self {
            dim,
            vertices,
            facets,
            boundary: hull.simplices,
        })
    }

    /// The interval [-1, 1].
    pub fn segment() -> Self {
        Self::new(1, vec![vec![1], vec![-1]]).expect("segment is valid")
    }

    /// Dimension 2k polytope with vertices ±e_i and both signs of the
    /// all-ones vector (4k + 2 vertices).
    pub fn del_pezzo(k: u32) -> Result<Self> {
        let mut vertices = axis_vertices(k)?;
        let n = 2 * k as usize;
        vertices.push(vec![1; n]);
        vertices.push(vec![-1; n]);
        Self::new(n, vertices)
    }

    /// Dimension 2k polytope with vertices ±e_i and the all-ones vector
    /// (4k + 1 vertices).
    pub fn pseudo_del_pezzo(k: u32) -> Result<Self> {
        let mut vertices = axis_vertices(k)?;
        let n = 2 * k as usize;
        vertices.push(vec![1; n]);
        Self::new(n, vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sorted vertex list.
    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    /// Complete irredundant facet list, sorted by (normal, offset).
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// conv((self x 0) u (0 x other)). The vertex set of the result is
    /// recomputed by the hull; if some candidate failed to survive as a
    /// vertex the construction errors rather than assuming the identity.
    pub fn convex_hull_product(&self, other: &Self) -> Result<Self> {
        let dim = self.dim + other.dim;
        let mut vertices = Vec::with_capacity(self.vertices.len() + other.vertices.len());
        for v in &self.vertices {
            let mut w = v.clone();
            w.resize(self.dim + other.dim, 0);
            vertices.push(w);
        }
        for v in &other.vertices {
            let mut w = vec![0; self.dim];
            w.extend_from_slice(v);
            vertices.push(w);
        }
        Self::new(dim, vertices)
    }

    /// True iff every facet lies at lattice distance one from the origin.
    pub fn is_reflexive(&self) -> bool {
        self.facets.iter().all(|f| f.offset == 1)
    }

    /// True iff some facet has its reflection through the origin also a
    /// facet.
    pub fn is_facet_symmetric(&self) -> bool {
        let set: BTreeSet<(&[i64], i64)> = self
            .facets
            .iter()
            .map(|f| (f.normal.as_slice(), f.offset))
            .collect();
        self.facets.iter().any(|f| {
            let neg: Vec<i64> = f.normal.iter().map(|x| -x).collect();
            set.contains(&(neg.as_slice(), f.offset))
        })
    }

    /// The convex hull of n_F / a_F over all facets. Errors unless every
    /// facet offset divides its (primitive) normal, i.e. unless the
    /// polytope is reflexive.
    pub fn dual(&self) -> Result<Self> {
        if let Some(f) = self.facets.iter().find(|f| f.offset != 1) {
            return Err(Error::NotReflexive {
                normal: f.normal.clone(),
                offset: f.offset,
            });
        }
        let vertices: Vec<LatticeVector> = self.facets.iter().map(|f| f.normal.clone()).collect();
        Self::new(self.dim, vertices)
    }

    /// Delzant smoothness, checked on the moment-polytope side: at every
    /// vertex of dual(P) the incident facet normals must form a lattice
    /// basis. Errors on non-reflexive input and on non-simple vertices of
    /// the dual (a vertex with a number of incident facets other than
    /// `dim`).
    ///
    /// The vertices of dual(P) are the facet normals of P, and for a
    /// reflexive polytope the facets of dual(P) are polar to the vertices
    /// of P: dual(P) = { y : <u, y> <= 1 for u in vert(P) }. The incident
    /// facet normals at a dual vertex are therefore the vertices of P at
    /// pairing one with it, which avoids rebuilding the dual hull. The
    /// hull-based route is kept as a test oracle.
    pub fn is_smooth(&self) -> Result<bool> {
        if let Some(f) = self.facets.iter().find(|f| f.offset != 1) {
            return Err(Error::NotReflexive {
                normal: f.normal.clone(),
                offset: f.offset,
            });
        }
        for f in &self.facets {
            let v = &f.normal;
            let incident: Vec<Vec<i64>> = self
                .vertices
                .iter()
                .filter(|u| dot(u, v) == 1)
                .cloned()
                .collect();
            if incident.len() != self.dim {
                return Err(Error::NonSimpleVertex {
                    vertex: v.clone(),
                    count: incident.len(),
                    dim: self.dim,
                });
            }
            let det = exact::det(&incident);
            if det != BigInt::from(1) && det != BigInt::from(-1) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// dim! times the Euclidean volume, exact, via the boundary
    /// triangulation coned over the (interior) origin.
    pub fn normalized_volume(&self) -> BigInt {
        let hull_view = hull::HullResult {
            dim: self.dim,
            simplices: self.boundary.clone(),
            facets: Vec::new(),
            vertex_ids: Vec::new(),
        };
        hull::normalized_volume(&hull_view, &self.vertices)
    }

    /// Applies an integer change of coordinates (rows act on the left:
    /// v -> M v). The matrix must be unimodular for the result to be a
    /// lattice-isomorphic polytope; validity is re-checked from scratch.
    pub fn transformed(&self, matrix: &[Vec<i64>]) -> Result<Self> {
        let vertices: Vec<LatticeVector> = self
            .vertices
            .iter()
            .map(|v| {
                matrix
                    .iter()
                    .map(|row| {
                        let mut acc: i64 = 0;
                        for (&m, &x) in row.iter().zip(v) {
                            let term = m
                                .checked_mul(x)
                                .ok_or_else(|| Error::ExactOverflow("transform".into()))?;
                            acc = acc
                                .checked_add(term)
                                .ok_or_else(|| Error::ExactOverflow("transform".into()))?;
                        }
                        Ok(acc)
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<_>>()?;
        Self::new(self.dim, vertices)
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dim: self.dim,
            vertices: self.vertices.clone(),
        }
    }

    pub fn from_json(json: PolytopeJson) -> Result<Self> {
        Self::new(json.dim, json.vertices)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

fn axis_vertices(k: u32) -> Result<Vec<LatticeVector>> {
    if k < 1 {
        return Err(Error::BadFamilyIndex(k as i64));
    }
    Ok(axis_vertex_list(k))
}

/// The 4k vectors +-e_i in dimension 2k.
pub(crate) fn axis_vertex_list(k: u32) -> Vec<LatticeVector> {
    let n = 2 * k as usize;
    let mut vertices = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut plus = vec![0; n];
        plus[i] = 1;
        let mut minus = vec![0; n];
        minus[i] = -1;
        vertices.push(plus);
        vertices.push(minus);
    }
    vertices
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
        v.sort_unstable();
        v
    }

    #[test]
    fn segment_basics() {
        let s = LatticePolytope::segment();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.vertices(), &[vec![-1], vec![1]]);
        assert!(s.is_reflexive());
        assert_eq!(s.normalized_volume(), BigInt::from(2));
        let facets: Vec<_> = s.facets().iter().map(|f| (f.normal.clone(), f.offset)).collect();
        assert_eq!(facets, vec![(vec![-1], 1), (vec![1], 1)]);
    }

    #[test]
    fn pseudo_del_pezzo_pentagon() {
        let p = LatticePolytope::pseudo_del_pezzo(1).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(
            p.vertices().to_vec(),
            sorted(vec![
                vec![1, 0],
                vec![0, 1],
                vec![-1, 0],
                vec![0, -1],
                vec![1, 1]
            ])
        );
        assert_eq!(p.normalized_volume(), BigInt::from(5));
        assert!(p.is_reflexive());
        assert!(p.is_facet_symmetric());
        assert!(p.is_smooth().unwrap());
    }

    #[test]
    fn del_pezzo_hexagon() {
        let p = LatticePolytope::del_pezzo(1).unwrap();
        assert_eq!(
            p.vertices().to_vec(),
            sorted(vec![
                vec![1, 0],
                vec![0, 1],
                vec![-1, 0],
                vec![0, -1],
                vec![1, 1],
                vec![-1, -1]
            ])
        );
        assert_eq!(p.facets().len(), 6);
        assert!(p.facets().iter().all(|f| f.offset == 1));
        assert_eq!(p.normalized_volume(), BigInt::from(6));
        assert!(p.is_smooth().unwrap());
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(LatticePolytope::pseudo_del_pezzo(2).unwrap().vertices().len(), 9);
        assert_eq!(LatticePolytope::del_pezzo(3).unwrap().vertices().len(), 14);
        assert!(LatticePolytope::del_pezzo(0).is_err());
        assert!(LatticePolytope::pseudo_del_pezzo(0).is_err());
    }

    #[test]
    fn product_of_segments_is_cross_polytope() {
        let s = LatticePolytope::segment();
        let p = s.convex_hull_product(&s).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(
            p.vertices().to_vec(),
            sorted(vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]])
        );
        // oracle-fixed value: Ehrhart difference gives 4 for the diamond
        assert_eq!(p.normalized_volume(), BigInt::from(4));
        let facets: Vec<_> = p.facets().iter().map(|f| f.normal.clone()).collect();
        assert_eq!(
            facets,
            vec![vec![-1, -1], vec![-1, 1], vec![1, -1], vec![1, 1]]
        );
        assert!(p.facets().iter().all(|f| f.offset == 1));
    }

    #[test]
    fn product_vertex_set_is_the_exact_union() {
        let s = LatticePolytope::segment();
        let d = LatticePolytope::del_pezzo(1).unwrap();
        let p = s.convex_hull_product(&d).unwrap();
        assert_eq!(p.vertices().len(), 2 + 6);
        let mut expect: Vec<Vec<i64>> = Vec::new();
        for v in s.vertices() {
            let mut w = v.clone();
            w.extend([0, 0]);
            expect.push(w);
        }
        for v in d.vertices() {
            let mut w = vec![0];
            w.extend_from_slice(v);
            expect.push(w);
        }
        assert_eq!(p.vertices().to_vec(), sorted(expect));
    }

    #[test]
    fn dual_examples() {
        let s = LatticePolytope::segment();
        assert_eq!(s.dual().unwrap().vertices(), s.vertices());

        let diamond = s.convex_hull_product(&s).unwrap();
        let square = diamond.dual().unwrap();
        assert_eq!(
            square.vertices().to_vec(),
            sorted(vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]])
        );

        let dp2 = LatticePolytope::del_pezzo(2).unwrap();
        let back = dp2.dual().unwrap().dual().unwrap();
        assert_eq!(back.vertices(), dp2.vertices());
    }

    #[test]
    fn scaled_segment_not_reflexive() {
        let p = LatticePolytope::new(1, vec![vec![2], vec![-2]]).unwrap();
        assert!(!p.is_reflexive());
        assert!(p.dual().is_err());
        assert!(p.is_smooth().is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            LatticePolytope::new(2, vec![vec![1, 0], vec![1, 0], vec![-1, 0]]),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            LatticePolytope::new(2, vec![vec![1, 1], vec![-1, -1]]),
            Err(Error::Degenerate { .. })
        ));
        // (0,0) is interior, not a vertex
        let r = LatticePolytope::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![0, 0]],
        );
        assert!(matches!(r, Err(Error::RedundantVertex(v)) if v == vec![0, 0]));
        // triangle away from the origin
        assert!(matches!(
            LatticePolytope::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
            Err(Error::OriginNotInterior)
        ));
        assert!(matches!(
            LatticePolytope::new(2, vec![vec![1, 0], vec![0, 2], vec![-1, 0], vec![1, 3, 0]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unimodular_transform_preserves_volume() {
        let p = LatticePolytope::del_pezzo(1).unwrap();
        // shear [[1,1],[0,1]]
        let q = p.transformed(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(q.normalized_volume(), p.normalized_volume());
        assert_eq!(q.is_reflexive(), p.is_reflexive());
    }

    #[test]
    fn facet_normals_are_primitive() {
        for poly in [
            LatticePolytope::del_pezzo(2).unwrap(),
            LatticePolytope::pseudo_del_pezzo(2).unwrap(),
            LatticePolytope::new(1, vec![vec![3], vec![-3]]).unwrap(),
        ] {
            for f in poly.facets() {
                let g = f
                    .normal
                    .iter()
                    .fold(0i64, |acc, &x| gcd_i64(acc, x.abs()));
                assert_eq!(g, 1, "normal {:?} not primitive", f.normal);
            }
        }
    }

    fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            let r = a % b;
            a = b;
            b = r;
        }
        a.abs()
    }

    #[test]
    fn every_vertex_on_enough_facets() {
        for poly in [
            LatticePolytope::del_pezzo(2).unwrap(),
            LatticePolytope::pseudo_del_pezzo(2).unwrap(),
        ] {
            for v in poly.vertices() {
                let count = poly
                    .facets()
                    .iter()
                    .filter(|f| dot(v, &f.normal) == i128::from(f.offset))
                    .count();
                assert!(count >= poly.dim());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = LatticePolytope::pseudo_del_pezzo(1).unwrap();
        let text = serde_json::to_string(&p.to_json()).unwrap();
        let parsed: PolytopeJson = serde_json::from_str(&text).unwrap();
        let q = LatticePolytope::from_json(parsed).unwrap();
        assert_eq!(p.vertices(), q.vertices());
    }
}
