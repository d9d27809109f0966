//! Incremental (beneath-beyond) convex hull over exact integer arithmetic.
//!
//! The boundary is maintained as a triangulation: simplicial facets that may
//! be coplanar. Points lying on a facet hyperplane are never "visible", so
//! degenerate (non-simplicial) geometric facets come out as groups of
//! coplanar simplices and are merged afterwards by hyperplane identity.
//!
//! Unprocessed points are kept in per-facet outside sets (conflict lists);
//! the visible region of an insertion is grown by flood fill from the
//! witness facet, which keeps the work output-sensitive. Points whose
//! witness facet dies and that are not beyond any replacement facet are
//! re-scanned against the full boundary before being discarded, so tie
//! cases (points on a facet hyperplane but outside the hull) stay tracked.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::exact;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Simplex {
    /// Sorted indices into the input point list; always `dim` of them.
    pub verts: Vec<u32>,
    /// Primitive outward normal.
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Debug, Clone)]
pub struct HullResult {
    pub dim: usize,
    /// Triangulated boundary.
    pub simplices: Vec<Simplex>,
    /// Geometric facets: deduplicated (normal, offset), sorted.
    pub facets: Vec<(Vec<i64>, i64)>,
    /// Input indices that are genuine hull vertices, sorted.
    pub vertex_ids: Vec<usize>,
}

/// Sign of <p, normal> - offset without overflow.
fn side(p: &[i64], normal: &[i64], offset: i64) -> Ordering {
    let mut acc: i128 = 0;
    let mut overflow = false;
    for (&a, &b) in p.iter().zip(normal) {
        match acc.checked_add(a as i128 * b as i128) {
            Some(v) => acc = v,
            None => {
                overflow = true;
                break;
            }
        }
    }
    if !overflow {
        return acc.cmp(&(offset as i128));
    }
    let dot: BigInt = p
        .iter()
        .zip(normal)
        .map(|(&a, &b)| BigInt::from(a) * BigInt::from(b))
        .sum();
    dot.cmp(&BigInt::from(offset))
}

fn dot_i64(a: &[i64], b: &[i64]) -> Option<i128> {
    let mut acc: i128 = 0;
    for (&x, &y) in a.iter().zip(b) {
        acc = acc.checked_add(x as i128 * y as i128)?;
    }
    Some(acc)
}

/// FNV-1a; the ridge map is the hottest structure in the build.
#[derive(Default)]
struct FnvHasher(u64);

impl std::hash::Hasher for FnvHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        let mut h = if self.0 == 0 { 0xcbf29ce484222325 } else { self.0 };
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        self.0 = h;
    }
}

type RidgeMap = HashMap<Vec<u32>, (u32, u32), std::hash::BuildHasherDefault<FnvHasher>>;

fn sub_points(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            x.checked_sub(y)
                .ok_or_else(|| Error::ExactOverflow("coordinate difference".into()))
        })
        .collect()
}

const NONE: u32 = u32::MAX;

struct Builder<'a> {
    points: &'a [Vec<i64>],
    dim: usize,
    /// Sum of the initial simplex vertices; the interior reference point
    /// is ref_sum / (dim + 1).
    ref_sum: Vec<i64>,
    facets: Vec<Simplex>,
    alive: Vec<bool>,
    ridge_map: RidgeMap,
    /// Conflict lists: unprocessed points strictly beyond each facet.
    outside: Vec<Vec<u32>>,
    pending: VecDeque<u32>,
}

impl<'a> Builder<'a> {
    fn beyond(&self, pid: u32, fid: u32) -> bool {
        let f = &self.facets[fid as usize];
        side(&self.points[pid as usize], &f.normal, f.offset) == Ordering::Greater
    }

    /// Hyperplane through the `dim` points indexed by `verts`, oriented so
    /// the interior reference satisfies <ref, n> < offset.
    fn hyperplane(&self, verts: &[u32]) -> Result<(Vec<i64>, i64)> {
        let p0 = &self.points[verts[0] as usize];
        let rows: Vec<Vec<i64>> = verts[1..]
            .iter()
            .map(|&v| sub_points(&self.points[v as usize], p0))
            .collect::<Result<_>>()?;
        let mut normal = match exact::primitive_cross_i64(&rows) {
            exact::CrossOutcome::Normal(n) => n,
            exact::CrossOutcome::Dependent => {
                return Err(Error::Degenerate {
                    rank: 0,
                    dim: self.dim,
                })
            }
            exact::CrossOutcome::Overflow => {
                let normal_big = exact::cross_product(&rows);
                if normal_big.iter().all(|x| x.is_zero()) {
                    return Err(Error::Degenerate {
                        rank: 0,
                        dim: self.dim,
                    });
                }
                let normal_big = exact::primitive(&normal_big).expect("nonzero normal");
                exact::to_i64_vec(&normal_big)
                    .ok_or_else(|| Error::ExactOverflow("facet normal".into()))?
            }
        };
        let mut offset = dot_i64(p0, &normal)
            .and_then(|v| i64::try_from(v).ok())
            .ok_or_else(|| Error::ExactOverflow("facet offset".into()))?;
        let scaled_offset = offset
            .checked_mul(self.dim as i64 + 1)
            .ok_or_else(|| Error::ExactOverflow("facet orientation".into()))?;
        match side(&self.ref_sum, &normal, scaled_offset) {
            Ordering::Less => {}
            Ordering::Greater => {
                for x in &mut normal {
                    *x = -*x;
                }
                offset = -offset;
            }
            Ordering::Equal => {
                return Err(Error::Degenerate {
                    rank: self.dim - 1,
                    dim: self.dim,
                })
            }
        }
        Ok((normal, offset))
    }

    fn add_facet(&mut self, verts: Vec<u32>) -> Result<u32> {
        let (normal, offset) = self.hyperplane(&verts)?;
        let fid = self.facets.len() as u32;
        let mut buf = Vec::with_capacity(verts.len());
        for skip in 0..verts.len() {
            fill_ridge(&verts, skip, &mut buf);
            if let Some(slot) = self.ridge_map.get_mut(buf.as_slice()) {
                debug_assert_eq!(slot.1, NONE, "ridge shared by more than two facets");
                slot.1 = fid;
            } else {
                self.ridge_map.insert(buf.clone(), (fid, NONE));
            }
        }
        self.facets.push(Simplex {
            verts,
            normal,
            offset,
        });
        self.alive.push(true);
        self.outside.push(Vec::new());
        Ok(fid)
    }

    fn remove_facet(&mut self, fid: u32) {
        self.alive[fid as usize] = false;
        let verts = std::mem::take(&mut self.facets[fid as usize].verts);
        let mut buf = Vec::with_capacity(verts.len());
        for skip in 0..verts.len() {
            fill_ridge(&verts, skip, &mut buf);
            if let Some(slot) = self.ridge_map.get_mut(buf.as_slice()) {
                if slot.0 == fid {
                    slot.0 = slot.1;
                }
                slot.1 = NONE;
                if slot.0 == NONE {
                    self.ridge_map.remove(buf.as_slice());
                }
            }
        }
    }

    /// First alive facet the point is strictly beyond, scanning everything.
    fn find_witness(&self, pid: u32) -> Option<u32> {
        (0..self.facets.len() as u32)
            .find(|&f| self.alive[f as usize] && self.beyond(pid, f))
    }

    /// Flood fill of the strictly visible region from a witness facet.
    fn visible_from(&self, pid: u32, seed: u32) -> Vec<u32> {
        let mut visible = vec![seed];
        let mut seen: BTreeSet<u32> = [seed].into();
        let mut queue = VecDeque::from([seed]);
        let mut buf = Vec::with_capacity(self.dim);
        while let Some(f) = queue.pop_front() {
            let verts = &self.facets[f as usize].verts;
            for skip in 0..verts.len() {
                fill_ridge(verts, skip, &mut buf);
                let &(a, b) = self
                    .ridge_map
                    .get(buf.as_slice())
                    .expect("closed boundary");
                let other = if a == f { b } else { a };
                debug_assert_ne!(other, NONE);
                if seen.insert(other) && self.beyond(pid, other) {
                    visible.push(other);
                    queue.push_back(other);
                }
            }
        }
        visible
    }

    fn insert_point(&mut self, pid: u32, seed: u32) -> Result<()> {
        let visible = self.visible_from(pid, seed);
        let visible_set: BTreeSet<u32> = visible.iter().copied().collect();

        let mut horizon: Vec<Vec<u32>> = Vec::new();
        let mut buf = Vec::with_capacity(self.dim);
        for &f in &visible {
            let verts = &self.facets[f as usize].verts;
            for skip in 0..verts.len() {
                fill_ridge(verts, skip, &mut buf);
                let &(a, b) = self
                    .ridge_map
                    .get(buf.as_slice())
                    .expect("closed boundary");
                let other = if a == f { b } else { a };
                if !visible_set.contains(&other) {
                    horizon.push(buf.clone());
                }
            }
        }

        let mut orphans: Vec<u32> = Vec::new();
        for &f in &visible {
            orphans.append(&mut self.outside[f as usize]);
            self.remove_facet(f);
        }
        orphans.retain(|&q| q != pid);
        orphans.sort_unstable();
        orphans.dedup();

        let mut new_facets = Vec::with_capacity(horizon.len());
        for ridge in horizon {
            let mut verts = ridge;
            verts.push(pid);
            verts.sort_unstable();
            new_facets.push(self.add_facet(verts)?);
        }

        for q in orphans {
            let home = new_facets
                .iter()
                .copied()
                .find(|&f| self.beyond(q, f))
                .or_else(|| self.find_witness(q));
            if let Some(f) = home {
                self.outside[f as usize].push(q);
                self.pending.push_back(f);
            }
        }
        Ok(())
    }
}

fn fill_ridge(verts: &[u32], skip: usize, buf: &mut Vec<u32>) {
    buf.clear();
    for (i, &v) in verts.iter().enumerate() {
        if i != skip {
            buf.push(v);
        }
    }
}

/// Greedy affinely independent subset of size dim + 1.
fn initial_simplex(points: &[Vec<i64>], dim: usize) -> Result<Vec<u32>> {
    let mut chosen: Vec<u32> = vec![0];
    for cand in 1..points.len() as u32 {
        if chosen.len() == dim + 1 {
            break;
        }
        let p0 = &points[chosen[0] as usize];
        let mut rows: Vec<Vec<i64>> = chosen[1..]
            .iter()
            .map(|&c| sub_points(&points[c as usize], p0))
            .collect::<Result<_>>()?;
        rows.push(sub_points(&points[cand as usize], p0)?);
        if exact::rank(&rows) == rows.len() {
            chosen.push(cand);
        }
    }
    if chosen.len() < dim + 1 {
        return Err(Error::Degenerate {
            rank: chosen.len() - 1,
            dim,
        });
    }
    Ok(chosen)
}

/// Full convex hull of a set of distinct integer points spanning `dim`.
pub fn convex_hull(points: &[Vec<i64>], dim: usize) -> Result<HullResult> {
    if points.is_empty() {
        return Err(Error::EmptyVertices);
    }
    let simplex = initial_simplex(points, dim)?;
    let mut ref_sum = vec![0i64; dim];
    for &v in &simplex {
        for (acc, &x) in ref_sum.iter_mut().zip(&points[v as usize]) {
            *acc = acc
                .checked_add(x)
                .ok_or_else(|| Error::ExactOverflow("interior reference".into()))?;
        }
    }
    let mut builder = Builder {
        points,
        dim,
        ref_sum,
        facets: Vec::new(),
        alive: Vec::new(),
        ridge_map: RidgeMap::default(),
        outside: Vec::new(),
        pending: VecDeque::new(),
    };
    for skip in 0..=dim {
        let verts: Vec<u32> = simplex
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v)
            .collect();
        builder.add_facet(verts)?;
    }

    let in_simplex: BTreeSet<u32> = simplex.into_iter().collect();
    for pid in 0..points.len() as u32 {
        if in_simplex.contains(&pid) {
            continue;
        }
        if let Some(f) = builder.find_witness(pid) {
            builder.outside[f as usize].push(pid);
            builder.pending.push_back(f);
        }
    }

    while let Some(fid) = builder.pending.pop_front() {
        if !builder.alive[fid as usize] {
            continue;
        }
        // farthest outside point first: keeps intermediate hulls fat and
        // the total number of created facets small
        let facet = &builder.facets[fid as usize];
        let pid = builder.outside[fid as usize]
            .iter()
            .copied()
            .max_by_key(|&q| {
                dot_i64(&points[q as usize], &facet.normal)
                    .map(|v| v - facet.offset as i128)
                    .unwrap_or(i128::MAX)
            });
        let Some(pid) = pid else { continue };
        builder.insert_point(pid, fid)?;
        if builder.alive[fid as usize] && !builder.outside[fid as usize].is_empty() {
            builder.pending.push_back(fid);
        }
    }

    let simplices: Vec<Simplex> = builder
        .facets
        .into_iter()
        .zip(builder.alive)
        .filter(|(_, alive)| *alive)
        .map(|(f, _)| f)
        .collect();

    let mut facet_set: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
    for s in &simplices {
        facet_set.insert((s.normal.clone(), s.offset));
    }
    let facets: Vec<(Vec<i64>, i64)> = facet_set.into_iter().collect();

    for p in points {
        if facets.iter().any(|(n, a)| side(p, n, *a) == Ordering::Greater) {
            return Err(Error::HullInvariant(format!(
                "point {p:?} outside the computed hull"
            )));
        }
    }

    // A boundary point is a vertex iff its incident facet normals span the
    // whole space (full-dimensional normal cone).
    let mut vertex_ids = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let incident: Vec<Vec<i64>> = facets
            .iter()
            .filter(|(n, a)| side(p, n, *a) == Ordering::Equal)
            .map(|(n, _)| n.clone())
            .collect();
        if incident.len() >= dim && exact::rank(&incident) == dim {
            vertex_ids.push(i);
        }
    }

    Ok(HullResult {
        dim,
        simplices,
        facets,
        vertex_ids,
    })
}

/// dim! times the Euclidean volume, computed by coning the boundary
/// triangulation over the origin. Requires the origin strictly inside
/// (every facet offset positive), which the polytope type guarantees.
pub fn normalized_volume(hull: &HullResult, points: &[Vec<i64>]) -> BigInt {
    debug_assert!(hull.facets.iter().all(|(_, a)| *a > 0));
    let mut total = BigInt::zero();
    for s in &hull.simplices {
        let rows: Vec<Vec<i64>> = s
            .verts
            .iter()
            .map(|&v| points[v as usize].clone())
            .collect();
        total += exact::det(&rows).abs();
    }
    total
}
