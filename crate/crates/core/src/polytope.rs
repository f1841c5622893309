//! Exact convex geometry of lattice polytopes: hulls, vertices, facets,
//! cones, normalized volumes and triangulations.
//!
//! Facets are found by testing every hyperplane through `r` affinely
//! independent points of the input, where `r` is the dimension of the
//! affine span. Such a hyperplane with all points on one side supports a
//! face of dimension `r - 1`, so the resulting list is irredundant.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::{self, Row};
use crate::lattice::{IntegerLattice, LatticePoint};
use crate::sumset::{size_budget, PointSet};

/// Half-space `{x : <normal, x> >= offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: LatticePoint,
    pub offset: i64,
}

impl Facet {
    pub fn value(&self, x: &LatticePoint) -> i128 {
        x.dot(self.normal.coords())
    }

    pub fn satisfied_by(&self, x: &LatticePoint) -> bool {
        self.value(x) >= self.offset as i128
    }

    pub fn tight_at(&self, x: &LatticePoint) -> bool {
        self.value(x) == self.offset as i128
    }
}

/// Hyperplane `{x : <normal, x> = value}` cutting out the affine span.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub normal: LatticePoint,
    pub value: i64,
}

/// H-and-V description of the convex hull of a finite point set.
///
/// Normals are primitive integer vectors in the linear span of `A - A`,
/// oriented inward. Offsets of lattice polytopes are integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeDescription {
    pub vertices: PointSet,
    pub facets: Vec<Facet>,
    pub equations: Vec<Equation>,
    pub affine_dim: usize,
}

/// `C_A = {sum c_a a : c_a >= 0}` as an intersection of half-spaces through
/// the origin, together with the equations of its linear span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDescription {
    pub facets: Vec<LatticePoint>,
    pub equations: Vec<LatticePoint>,
    pub spanning_dim: usize,
}

impl ConeDescription {
    pub fn contains(&self, x: &LatticePoint) -> bool {
        self.equations.iter().all(|w| x.dot(w.coords()) == 0)
            && self.facets.iter().all(|v| x.dot(v.coords()) >= 0)
    }

    /// Sum of the facet normals. Strictly positive on the cone minus the
    /// origin whenever the origin is a vertex of the hull.
    pub fn positive_functional(&self, dim: usize) -> Vec<i64> {
        let mut phi = vec![0i64; dim];
        for v in &self.facets {
            for (p, c) in phi.iter_mut().zip(v.coords()) {
                *p += c;
            }
        }
        phi
    }
}

fn primitive(v: Row) -> Row {
    let g = intmat::content(&v);
    if g.is_zero() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Integer basis of the orthogonal complement of `span(diffs)`.
fn complement(diffs: &[Row], d: usize) -> Vec<Row> {
    intmat::integer_kernel(diffs, d).into_iter().map(primitive).collect()
}

pub fn convex_hull(a: &PointSet) -> Result<PolytopeDescription> {
    let pts = a.points();
    let p0 = pts.first().ok_or(Error::Empty("point set"))?;
    let d = a.dim();
    let diffs: Vec<Row> = pts.iter().map(|p| p.checked_sub(p0).map(|q| q.to_big())).collect::<Result<_>>()?;
    let r = intmat::rank(&diffs, d);
    let w = complement(&diffs, d);
    let equations = w
        .iter()
        .map(|n| {
            let normal = LatticePoint::from_big(n)?;
            let value = i64::try_from(p0.dot(normal.coords())).map_err(|_| Error::Overflow("equation"))?;
            Ok(Equation { normal, value })
        })
        .collect::<Result<Vec<_>>>()?;
    if r == 0 {
        return Ok(PolytopeDescription { vertices: a.clone(), facets: vec![], equations, affine_dim: 0 });
    }

    let mut facets = BTreeSet::new();
    for subset in (0..pts.len()).combinations(r) {
        let base = &pts[subset[0]];
        let mut rows: Vec<Row> = subset[1..]
            .iter()
            .map(|&i| pts[i].checked_sub(base).map(|q| q.to_big()))
            .collect::<Result<_>>()?;
        rows.extend(w.iter().cloned());
        let kernel = intmat::integer_kernel(&rows, d);
        if kernel.len() != 1 {
            continue;
        }
        let n = LatticePoint::from_big(&primitive(kernel[0].clone()))?;
        let level = base.dot(n.coords());
        let values: Vec<i128> = pts.iter().map(|p| p.dot(n.coords())).collect();
        let facet = if values.iter().all(|&v| v >= level) {
            Facet { normal: n, offset: i64::try_from(level).map_err(|_| Error::Overflow("facet offset"))? }
        } else if values.iter().all(|&v| v <= level) {
            Facet {
                normal: n.checked_neg()?,
                offset: i64::try_from(-level).map_err(|_| Error::Overflow("facet offset"))?,
            }
        } else {
            continue;
        };
        facets.insert(facet);
    }
    let facets: Vec<Facet> = facets.into_iter().collect();

    let mut vertices = Vec::new();
    for p in pts {
        let tight: Vec<Row> = facets.iter().filter(|f| f.tight_at(p)).map(|f| f.normal.to_big()).collect();
        if intmat::rank(&tight, d) == r {
            vertices.push(p.clone());
        }
    }
    Ok(PolytopeDescription { vertices: PointSet::new(d, vertices)?, facets, equations, affine_dim: r })
}

pub fn cone_of(a: &PointSet) -> Result<ConeDescription> {
    let origin = LatticePoint::zero(a.dim());
    if !a.contains(&origin) {
        return Err(Error::OriginMissing);
    }
    let hull = convex_hull(a)?;
    Ok(ConeDescription {
        facets: hull.facets.iter().filter(|f| f.offset == 0).map(|f| f.normal.clone()).collect(),
        equations: hull.equations.iter().map(|e| e.normal.clone()).collect(),
        spanning_dim: hull.affine_dim,
    })
}

/// The vertex set when the hull is a simplex of its affine dimension.
pub fn is_simplex(a: &PointSet) -> Result<Option<PointSet>> {
    let hull = convex_hull(a)?;
    Ok((hull.vertices.len() == hull.affine_dim + 1).then_some(hull.vertices))
}

/// `r! vol_r(H(A))` measured in the lattice `Z^d ∩ span(A - A)`.
pub fn normalized_volume(a: &PointSet) -> Result<BigInt> {
    let d = a.dim();
    let hull = convex_hull(a)?;
    if hull.affine_dim == 0 {
        return Ok(BigInt::from(1));
    }
    let w: Vec<Row> = hull.equations.iter().map(|e| e.normal.to_big()).collect();
    let saturated = IntegerLattice::from_rows(d, intmat::integer_kernel(&w, d));
    let mut total = BigInt::zero();
    for simplex in triangulate(&hull)? {
        let apex = &simplex[0];
        let m: Vec<Row> = simplex[1..]
            .iter()
            .map(|v| {
                let e = v.checked_sub(apex)?;
                saturated.coordinates(&e).ok_or_else(|| Error::NotInLattice(e.to_string()))
            })
            .collect::<Result<_>>()?;
        total += intmat::determinant(&m).abs();
    }
    Ok(total)
}

/// Simplices with vertices in `ex(H(A))` whose hulls cover `H(A)`.
pub fn caratheodory_cover(a: &PointSet) -> Result<Vec<PointSet>> {
    let hull = convex_hull(a)?;
    triangulate(&hull)?.into_iter().map(|s| PointSet::new(a.dim(), s)).collect()
}

// Pulling triangulation: cone from the first vertex over every facet not
// containing it, recursing into facets.
fn triangulate(hull: &PolytopeDescription) -> Result<Vec<Vec<LatticePoint>>> {
    let verts = hull.vertices.points();
    if verts.len() == hull.affine_dim + 1 {
        return Ok(vec![verts.to_vec()]);
    }
    let apex = &verts[0];
    let mut out = Vec::new();
    for f in hull.facets.iter().filter(|f| !f.tight_at(apex)) {
        let on_facet: Vec<LatticePoint> = verts.iter().filter(|v| f.tight_at(v)).cloned().collect();
        let sub = convex_hull(&PointSet::new(hull.vertices.dim(), on_facet)?)?;
        for mut s in triangulate(&sub)? {
            s.insert(0, apex.clone());
            out.push(s);
        }
    }
    Ok(out)
}

impl PolytopeDescription {
    pub fn dim(&self) -> usize {
        self.vertices.dim()
    }

    pub fn contains(&self, x: &LatticePoint) -> bool {
        x.dim() == self.dim()
            && self.equations.iter().all(|e| x.dot(e.normal.coords()) == e.value as i128)
            && self.facets.iter().all(|f| f.satisfied_by(x))
    }

    /// `x / q` lies in the polytope.
    pub fn contains_rational(&self, x: &LatticePoint, q: i64) -> Result<bool> {
        Ok(self.scaled(q)?.contains(x))
    }

    /// The dilate `N * P`.
    pub fn scaled(&self, n: i64) -> Result<Self> {
        let vertices = self
            .vertices
            .points()
            .iter()
            .map(|v| v.checked_scale(n))
            .collect::<Result<Vec<_>>>()?;
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let offset = f.offset.checked_mul(n).ok_or(Error::Overflow("scaled offset"))?;
                Ok(Facet { normal: f.normal.clone(), offset })
            })
            .collect::<Result<_>>()?;
        let equations = self
            .equations
            .iter()
            .map(|e| {
                let value = e.value.checked_mul(n).ok_or(Error::Overflow("scaled equation"))?;
                Ok(Equation { normal: e.normal.clone(), value })
            })
            .collect::<Result<_>>()?;
        let vertices = if n == 0 {
            PointSet::new(self.dim(), vec![LatticePoint::zero(self.dim())])?
        } else {
            PointSet::new(self.dim(), vertices)?
        };
        let affine_dim = if n == 0 { 0 } else { self.affine_dim };
        Ok(PolytopeDescription { vertices, facets, equations, affine_dim })
    }

    /// Facet count against `2 d l^{d/2}`, compared in squared form.
    pub fn facet_bound_holds(&self, l: usize) -> bool {
        let d = self.dim() as u32;
        let n = BigInt::from(self.facets.len());
        let bound_sq = BigInt::from(4u32) * BigInt::from(d * d) * BigInt::from(l).pow(d);
        &n * &n <= bound_sq
    }

    /// Coordinatewise bounding box of the vertices.
    pub fn bounding_box(&self) -> Result<(Vec<i64>, Vec<i64>)> {
        let pts = self.vertices.points();
        if pts.is_empty() {
            return Err(Error::UnboundedRegion);
        }
        let d = self.dim();
        let lo = (0..d).map(|i| pts.iter().map(|p| p.coords()[i]).min().unwrap()).collect();
        let hi = (0..d).map(|i| pts.iter().map(|p| p.coords()[i]).max().unwrap()).collect();
        Ok((lo, hi))
    }

    /// All points of `shift + L` inside the polytope, by a bounding-box scan.
    pub fn lattice_points(&self, lattice: &IntegerLattice, shift: &LatticePoint) -> Result<PointSet> {
        let d = self.dim();
        let (lo, hi) = self.bounding_box()?;
        let budget = size_budget();
        let mut cells: u128 = 1;
        for (l, h) in lo.iter().zip(&hi) {
            cells = cells.saturating_mul((*h as i128 - *l as i128 + 1) as u128);
        }
        if cells > budget as u128 * 16 {
            return Err(Error::BudgetExceeded { budget });
        }
        let mut out = Vec::new();
        let mut x = lo.clone();
        loop {
            let p = LatticePoint::new(x.clone());
            if self.contains(&p) && lattice.contains(&p.checked_sub(shift)?) {
                if out.len() == budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                out.push(p);
            }
            // odometer, last coordinate fastest
            let mut i = d;
            loop {
                if i == 0 {
                    return PointSet::new(d, out);
                }
                i -= 1;
                if x[i] < hi[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = lo[i];
            }
        }
    }
}

/// Points of `(shift + L) ∩ N * P`.
pub fn polytope_lattice_points(
    p: &PolytopeDescription,
    n: i64,
    lattice: &IntegerLattice,
    shift: &LatticePoint,
) -> Result<PointSet> {
    if n < 0 {
        return Err(Error::Invalid("dilation factor must be nonnegative".into()));
    }
    p.scaled(n)?.lattice_points(lattice, shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[&[i64]]) -> PointSet {
        PointSet::from_coords(v).unwrap()
    }

    #[test]
    fn triangle_with_interior_point() {
        let h = convex_hull(&ps(&[&[0, 0], &[2, 0], &[0, 3], &[1, 1]])).unwrap();
        assert_eq!(h.vertices, ps(&[&[0, 0], &[2, 0], &[0, 3]]));
        assert_eq!(h.affine_dim, 2);
        assert_eq!(h.facets.len(), 3);
        assert!(h.contains(&LatticePoint::new(vec![1, 1])));
        assert!(!h.contains(&LatticePoint::new(vec![2, 1])));
    }

    #[test]
    fn one_dimensional_and_point_hulls() {
        let h = convex_hull(&PointSet::from_ints(&[0, 2, 5])).unwrap();
        assert_eq!(h.vertices, PointSet::from_ints(&[0, 5]));
        assert_eq!(h.affine_dim, 1);
        let h = convex_hull(&ps(&[&[0, 0]])).unwrap();
        assert_eq!(h.affine_dim, 0);
        assert_eq!(h.vertices.len(), 1);
    }

    #[test]
    fn segment_in_the_plane() {
        let h = convex_hull(&ps(&[&[0, 0], &[1, 1], &[3, 3]])).unwrap();
        assert_eq!(h.affine_dim, 1);
        assert_eq!(h.vertices, ps(&[&[0, 0], &[3, 3]]));
        assert_eq!(h.equations.len(), 1);
        assert!(h.contains(&LatticePoint::new(vec![2, 2])));
        assert!(!h.contains(&LatticePoint::new(vec![2, 1])));
        assert_eq!(normalized_volume(&ps(&[&[0, 0], &[1, 1], &[3, 3]])).unwrap(), BigInt::from(3));
    }

    #[test]
    fn cones() {
        let c = cone_of(&ps(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        let mut normals = c.facets.clone();
        normals.sort();
        assert_eq!(normals, vec![LatticePoint::new(vec![0, 1]), LatticePoint::new(vec![1, 0])]);
        let c = cone_of(&ps(&[&[0, 0], &[1, 1], &[2, 0], &[0, 3]])).unwrap();
        assert_eq!(c.facets.len(), 2);
        let c = cone_of(&PointSet::from_ints(&[0, 2, 5])).unwrap();
        assert_eq!(c.facets, vec![LatticePoint::new(vec![1])]);
        assert!(matches!(cone_of(&PointSet::from_ints(&[1, 2])), Err(Error::OriginMissing)));
    }

    #[test]
    fn simplex_detection() {
        let b = is_simplex(&ps(&[&[0, 0], &[2, 0], &[0, 3], &[1, 1]])).unwrap();
        assert_eq!(b, Some(ps(&[&[0, 0], &[2, 0], &[0, 3]])));
        assert_eq!(is_simplex(&ps(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap(), None);
        assert_eq!(is_simplex(&PointSet::from_ints(&[0, 2, 5])).unwrap(), Some(PointSet::from_ints(&[0, 5])));
    }

    #[test]
    fn volumes() {
        assert_eq!(normalized_volume(&ps(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap(), BigInt::from(1));
        assert_eq!(normalized_volume(&ps(&[&[0, 0], &[2, 0], &[0, 3]])).unwrap(), BigInt::from(6));
        assert_eq!(normalized_volume(&ps(&[&[0, 0], &[1, 1], &[2, 0], &[0, 3]])).unwrap(), BigInt::from(6));
        assert_eq!(normalized_volume(&ps(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap(), BigInt::from(2));
        let cube: Vec<Vec<i64>> = (0..8).map(|i| vec![i & 1, (i >> 1) & 1, (i >> 2) & 1]).collect();
        let cube = PointSet::new(3, cube.into_iter().map(LatticePoint::new).collect()).unwrap();
        assert_eq!(normalized_volume(&cube).unwrap(), BigInt::from(6));
    }

    #[test]
    fn covers() {
        let tri = ps(&[&[0, 0], &[2, 0], &[0, 3]]);
        assert_eq!(caratheodory_cover(&tri).unwrap(), vec![tri.clone()]);
        let sq = ps(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let cover = caratheodory_cover(&sq).unwrap();
        assert_eq!(cover.len(), 2);
        let hull = convex_hull(&sq).unwrap();
        let pieces: Vec<_> = cover.iter().map(|s| convex_hull(s).unwrap()).collect();
        for x in 0..=2 {
            for y in 0..=2 {
                let p = LatticePoint::new(vec![x, y]);
                assert!(hull.contains_rational(&p, 2).unwrap());
                assert!(pieces.iter().any(|h| h.contains_rational(&p, 2).unwrap()));
            }
        }
        assert_eq!(
            caratheodory_cover(&PointSet::from_ints(&[0, 2, 5])).unwrap(),
            vec![PointSet::from_ints(&[0, 5])]
        );
    }

    #[test]
    fn lattice_point_scans() {
        let seg = convex_hull(&PointSet::from_ints(&[0, 1])).unwrap();
        let pts = polytope_lattice_points(&seg, 3, &IntegerLattice::full(1), &LatticePoint::zero(1)).unwrap();
        assert_eq!(pts, PointSet::from_ints(&[0, 1, 2, 3]));
        let tri = convex_hull(&ps(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        let pts = polytope_lattice_points(&tri, 2, &IntegerLattice::full(2), &LatticePoint::zero(2)).unwrap();
        assert_eq!(pts.len(), 6);
        let tri = convex_hull(&ps(&[&[0, 0], &[2, 0], &[0, 3]])).unwrap();
        let pts = polytope_lattice_points(&tri, 1, &IntegerLattice::full(2), &LatticePoint::zero(2)).unwrap();
        assert_eq!(pts, ps(&[&[0, 0], &[0, 1], &[0, 2], &[0, 3], &[1, 0], &[1, 1], &[2, 0]]));
        // odd integers in [0, 6]
        let even = IntegerLattice::span(1, &[LatticePoint::new(vec![2])]).unwrap();
        let pts = polytope_lattice_points(&seg, 6, &even, &LatticePoint::new(vec![1])).unwrap();
        assert_eq!(pts, PointSet::from_ints(&[1, 3, 5]));
    }

    #[test]
    fn facet_bound_on_small_hulls() {
        let sq = ps(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert!(convex_hull(&sq).unwrap().facet_bound_holds(4));
    }
}
