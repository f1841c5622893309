//! Point sets, iterated sumsets, minimal representation lengths,
//! membership in `P(A)` and exceptional sets.

use std::cell::Cell;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IntegerLattice, LatticePoint};
use crate::polytope::{cone_of, convex_hull, ConeDescription, PolytopeDescription};

pub const DEFAULT_SIZE_BUDGET: usize = 10_000_000;

static SIZE_BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_SIZE_BUDGET);

thread_local! {
    static LOCAL_BUDGET: Cell<Option<usize>> = const { Cell::new(None) };
}

/// Largest number of points any single enumeration may produce.
pub fn size_budget() -> usize {
    LOCAL_BUDGET.with(Cell::get).unwrap_or_else(|| SIZE_BUDGET.load(Ordering::Relaxed))
}

/// Sets the process-wide budget.
pub fn set_size_budget(points: usize) {
    SIZE_BUDGET.store(points.max(1), Ordering::Relaxed);
}

/// Runs `f` with a budget that applies to the current thread only.
pub fn with_size_budget<T>(points: usize, f: impl FnOnce() -> T) -> T {
    let prev = LOCAL_BUDGET.with(|b| b.replace(Some(points.max(1))));
    let out = f();
    LOCAL_BUDGET.with(|b| b.set(prev));
    out
}

/// A finite subset of `Z^d`, sorted lexicographically without duplicates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PointSetRepr", into = "PointSetRepr")]
pub struct PointSet {
    dim: usize,
    points: Vec<LatticePoint>,
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    dim: usize,
    points: Vec<LatticePoint>,
}

impl TryFrom<PointSetRepr> for PointSet {
    type Error = Error;
    fn try_from(r: PointSetRepr) -> Result<Self> {
        PointSet::new(r.dim, r.points)
    }
}

impl From<PointSet> for PointSetRepr {
    fn from(p: PointSet) -> Self {
        PointSetRepr { dim: p.dim, points: p.points }
    }
}

impl PointSet {
    pub fn new(dim: usize, mut points: Vec<LatticePoint>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet { dim, points })
    }

    pub fn empty(dim: usize) -> Self {
        PointSet { dim, points: vec![] }
    }

    /// Points given as coordinate slices; the dimension is taken from the first.
    pub fn from_coords(coords: &[&[i64]]) -> Result<Self> {
        let dim = coords.first().ok_or(Error::Empty("point set"))?.len();
        Self::new(dim, coords.iter().map(|c| LatticePoint::from(*c)).collect())
    }

    pub fn from_vecs(dim: usize, coords: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(dim, coords.into_iter().map(LatticePoint::new).collect())
    }

    /// A subset of `Z`.
    pub fn from_ints(xs: &[i64]) -> Self {
        Self::new(1, xs.iter().map(|&x| LatticePoint::new(vec![x])).collect()).expect("all points are 1-d")
    }

    fn from_sorted(dim: usize, points: Vec<LatticePoint>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        PointSet { dim, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<LatticePoint> {
        self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LatticePoint> {
        self.points.iter()
    }

    pub fn contains(&self, x: &LatticePoint) -> bool {
        self.points.binary_search(x).is_ok()
    }

    pub fn translate(&self, by: &LatticePoint) -> Result<Self> {
        let pts = self.points.iter().map(|p| p.checked_add(by)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_sorted(self.dim, pts))
    }

    /// `a - A`.
    pub fn reflect_about(&self, a: &LatticePoint) -> Result<Self> {
        Self::new(self.dim, self.points.iter().map(|p| a.checked_sub(p)).collect::<Result<_>>()?)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        Self::from_sorted(self.dim, self.points.iter().filter(|p| !other.contains(p)).cloned().collect())
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        Self::new(self.dim, pts)
    }

    pub fn symmetric_difference(&self, other: &PointSet) -> Vec<LatticePoint> {
        let mut out: Vec<_> = self.difference(other).into_points();
        out.extend(other.difference(self).into_points());
        out.sort();
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&LatticePoint) -> bool) -> PointSet {
        Self::from_sorted(self.dim, self.points.iter().filter(|p| keep(p)).cloned().collect())
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&LatticePoint::zero(self.dim))
    }

    /// Lattice generated by the points.
    pub fn lattice(&self) -> Result<IntegerLattice> {
        IntegerLattice::span(self.dim, &self.points)
    }

    /// Lattice generated by differences of points.
    pub fn difference_lattice(&self) -> Result<IntegerLattice> {
        match self.points.first() {
            None => Ok(IntegerLattice::span(self.dim, &[])?),
            Some(_) => crate::lattice::difference_lattice(&self.points),
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a LatticePoint;
    type IntoIter = std::slice::Iter<'a, LatticePoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// `S + A`, as a merge of the sorted translates `S + a`.
pub fn sumset_step(s: &PointSet, a: &PointSet) -> Result<PointSet> {
    if s.dim != a.dim {
        return Err(Error::DimensionMismatch { expected: s.dim, found: a.dim });
    }
    if s.is_empty() || a.is_empty() {
        return Ok(PointSet::empty(s.dim));
    }
    let budget = size_budget();
    let shifts = a.points();
    let mut heap = BinaryHeap::with_capacity(shifts.len());
    for (j, t) in shifts.iter().enumerate() {
        heap.push(Reverse((s.points[0].checked_add(t)?, j, 0usize)));
    }
    let mut out: Vec<LatticePoint> = Vec::new();
    while let Some(Reverse((p, j, i))) = heap.pop() {
        if i + 1 < s.points.len() {
            heap.push(Reverse((s.points[i + 1].checked_add(&shifts[j])?, j, i + 1)));
        }
        if out.last() != Some(&p) {
            if out.len() == budget {
                return Err(Error::BudgetExceeded { budget });
            }
            out.push(p);
        }
    }
    Ok(PointSet::from_sorted(s.dim, out))
}

/// The `N`-fold sumset `NA`.
pub fn sumset(a: &PointSet, n: usize) -> Result<PointSet> {
    if a.is_empty() {
        return Err(Error::Empty("point set"));
    }
    if n == 0 {
        return Err(Error::Invalid("N must be at least 1".into()));
    }
    let mut cur = a.clone();
    for _ in 1..n {
        cur = sumset_step(&cur, a)?;
    }
    Ok(cur)
}

/// Iterator over `A, 2A, 3A, ...`.
pub struct Sumsets<'a> {
    base: &'a PointSet,
    cur: Option<PointSet>,
}

pub fn sumsets(a: &PointSet) -> Sumsets<'_> {
    Sumsets { base: a, cur: None }
}

impl Iterator for Sumsets<'_> {
    type Item = Result<PointSet>;
    fn next(&mut self) -> Option<Self::Item> {
        let next = match &self.cur {
            None => Ok(self.base.clone()),
            Some(c) => sumset_step(c, self.base),
        };
        match next {
            Ok(s) => {
                self.cur = Some(s.clone());
                Some(Ok(s))
            }
            Err(e) => Some(Err(e)),
        }
    }
}

/// `|NA|` for `N = 1..=N_max`; entry `i` holds `|(i+1)A|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub instance: PointSet,
    pub sizes: Vec<usize>,
}

impl GrowthTable {
    pub fn n_max(&self) -> usize {
        self.sizes.len()
    }

    /// `|NA|` for `1 <= N <= N_max`.
    pub fn size(&self, n: usize) -> Option<usize> {
        n.checked_sub(1).and_then(|i| self.sizes.get(i)).copied()
    }
}

pub fn growth_table(a: &PointSet, n_max: usize) -> Result<GrowthTable> {
    if n_max == 0 {
        return Err(Error::Invalid("N_max must be at least 1".into()));
    }
    if a.is_empty() {
        return Err(Error::Empty("point set"));
    }
    let mut sizes = Vec::with_capacity(n_max);
    for s in sumsets(a).take(n_max) {
        match s {
            Ok(s) => sizes.push(s.len()),
            Err(Error::BudgetExceeded { budget }) => return Err(Error::PartialTable { budget, completed: sizes }),
            Err(e) => return Err(e),
        }
    }
    Ok(GrowthTable { instance: a.clone(), sizes })
}

/// Largest sup-norm distance between two points.
pub fn width(a: &PointSet) -> u64 {
    (0..a.dim())
        .map(|i| {
            let lo = a.iter().map(|p| p.coords()[i] as i128).min().unwrap_or(0);
            let hi = a.iter().map(|p| p.coords()[i] as i128).max().unwrap_or(0);
            (hi - lo) as u64
        })
        .max()
        .unwrap_or(0)
}

/// Exhaustive view of `P(A) ∩ {φ <= bound}` for a set with the origin as a
/// vertex of its hull, where `φ` is the sum of the cone's facet normals.
/// Every nonzero element of `A` has `φ >= 1`, so a representation of `x`
/// uses at most `φ(x)` nonzero summands and the search is complete.
#[derive(Clone, Debug)]
pub struct PsaRegion {
    phi: Vec<i64>,
    bound: i128,
    cone: ConeDescription,
    lattice: IntegerLattice,
    depth: HashMap<LatticePoint, u32>,
}

impl PsaRegion {
    pub fn new(a: &PointSet, bound: i128) -> Result<Self> {
        require_extremal_origin(a)?;
        let cone = cone_of(a)?;
        let phi = cone.positive_functional(a.dim());
        let steps: Vec<&LatticePoint> = a.iter().filter(|p| !p.is_zero()).collect();
        if steps.iter().any(|p| p.dot(&phi) < 1) {
            return Err(Error::OriginNotExtremal);
        }
        let budget = size_budget();
        let origin = LatticePoint::zero(a.dim());
        let mut depth = HashMap::new();
        depth.insert(origin.clone(), 0u32);
        let mut frontier = vec![origin];
        let mut level = 0u32;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for x in &frontier {
                for s in &steps {
                    let y = x.checked_add(s)?;
                    if y.dot(&phi) > bound || depth.contains_key(&y) {
                        continue;
                    }
                    if depth.len() >= budget {
                        return Err(Error::BudgetExceeded { budget });
                    }
                    depth.insert(y.clone(), level);
                    next.push(y);
                }
            }
            frontier = next;
        }
        Ok(PsaRegion { phi, bound, cone, lattice: a.lattice()?, depth })
    }

    pub fn functional(&self) -> &[i64] {
        &self.phi
    }

    pub fn bound(&self) -> i128 {
        self.bound
    }

    pub fn cone(&self) -> &ConeDescription {
        &self.cone
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.lattice
    }

    /// Whether membership of `x` is decided by this region.
    pub fn covers(&self, x: &LatticePoint) -> bool {
        x.dot(&self.phi) <= self.bound
    }

    /// `N_A(x)`, or `None` when `x` is not in `P(A)`. Only meaningful when
    /// [`Self::covers`] holds.
    pub fn min_length(&self, x: &LatticePoint) -> Option<u32> {
        self.depth.get(x).copied()
    }

    pub fn contains(&self, x: &LatticePoint) -> bool {
        self.depth.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (&LatticePoint, u32)> {
        self.depth.iter().map(|(p, d)| (p, *d))
    }

    /// `x` in `C_A ∩ Λ_A`.
    pub fn is_candidate(&self, x: &LatticePoint) -> bool {
        self.cone.contains(x) && self.lattice.contains(x)
    }
}

fn require_extremal_origin(a: &PointSet) -> Result<()> {
    if !a.contains_origin() {
        return Err(Error::OriginMissing);
    }
    if !convex_hull(a)?.vertices.contains(&LatticePoint::zero(a.dim())) {
        return Err(Error::OriginNotExtremal);
    }
    Ok(())
}

/// Minimal `N` with `v ∈ NA`, searched up to `cap`. `N_A(0) = 0`.
pub fn min_rep_length(a: &PointSet, v: &LatticePoint, cap: usize) -> Result<Option<usize>> {
    if v.is_zero() && a.contains_origin() {
        return Ok(Some(0));
    }
    if require_extremal_origin(a).is_ok() {
        let cone = cone_of(a)?;
        if !cone.contains(v) {
            return Ok(None);
        }
        let bound = v.dot(&cone.positive_functional(a.dim()));
        let region = PsaRegion::new(a, bound)?;
        return Ok(region.min_length(v).map(|n| n as usize).filter(|&n| n <= cap));
    }
    for (i, s) in sumsets(a).take(cap).enumerate() {
        if s?.contains(v) {
            return Ok(Some(i + 1));
        }
    }
    Ok(None)
}

/// Exact membership `x ∈ P(A)`. Requires the origin to be a vertex of the hull.
pub fn psa_membership(a: &PointSet, x: &LatticePoint) -> Result<bool> {
    require_extremal_origin(a)?;
    if x.is_zero() {
        return Ok(true);
    }
    let cone = cone_of(a)?;
    if !cone.contains(x) || !a.lattice()?.contains(x) {
        return Ok(false);
    }
    let bound = x.dot(&cone.positive_functional(a.dim()));
    Ok(PsaRegion::new(a, bound)?.contains(x))
}

/// Membership in `P(A)` by scanning `A, 2A, ..., cap A`. Works for any `A`
/// but can only certify membership; otherwise reports `Inconclusive`.
pub fn psa_membership_capped(a: &PointSet, x: &LatticePoint, cap: usize) -> Result<bool> {
    for s in sumsets(a).take(cap) {
        if s?.contains(x) {
            return Ok(true);
        }
    }
    Err(Error::Inconclusive { cap })
}

/// `E(A) ∩ region`, with `E(A) = (C_A ∩ Λ_A) \ P(A)`.
pub fn exceptional_set(a: &PointSet, region: &PolytopeDescription) -> Result<PointSet> {
    require_extremal_origin(a)?;
    let d = a.dim();
    let cone = cone_of(a)?;
    let lattice = a.lattice()?;
    let candidates = region
        .lattice_points(&IntegerLattice::full(d), &LatticePoint::zero(d))?
        .filter(|x| cone.contains(x) && lattice.contains(x));
    let phi = cone.positive_functional(d);
    let bound = candidates.iter().map(|x| x.dot(&phi)).max().unwrap_or(0);
    let reach = PsaRegion::new(a, bound)?;
    Ok(candidates.filter(|x| !reach.contains(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[i64]) -> LatticePoint {
        LatticePoint::from(v)
    }

    fn interval(lo: i64, hi: i64) -> PolytopeDescription {
        convex_hull(&PointSet::from_ints(&[lo, hi])).unwrap()
    }

    #[test]
    fn point_sets_are_canonical() {
        let a = PointSet::from_ints(&[5, 0, 2, 2]);
        assert_eq!(a.points(), &[pt(&[0]), pt(&[2]), pt(&[5])]);
        assert_eq!(a.to_string(), "{0, 2, 5}");
        let b = PointSet::from_coords(&[&[1, 0], &[0, 1], &[1, 0]]).unwrap();
        assert_eq!(b.len(), 2);
        assert!(PointSet::from_coords(&[&[1, 0], &[1]]).is_err());
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&PointSet::from_ints(&[0, 1]), 3).unwrap(), PointSet::from_ints(&[0, 1, 2, 3]));
        let s = sumset(&PointSet::from_ints(&[0, 2, 3]), 3).unwrap();
        assert_eq!(s, PointSet::from_ints(&[0, 2, 3, 4, 5, 6, 7, 8, 9]));
        let tri = PointSet::from_coords(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert_eq!(sumset(&tri, 2).unwrap().len(), 6);
    }

    #[test]
    fn growth_examples() {
        assert_eq!(growth_table(&PointSet::from_ints(&[0, 2, 5]), 4).unwrap().sizes, vec![3, 6, 10, 15]);
        assert_eq!(growth_table(&PointSet::from_ints(&[0, 1]), 3).unwrap().sizes, vec![2, 3, 4]);
        assert_eq!(growth_table(&PointSet::from_ints(&[0, 2, 3]), 3).unwrap().sizes, vec![3, 6, 9]);
    }

    #[test]
    fn min_rep_examples() {
        let a = PointSet::from_ints(&[0, 2, 3]);
        assert_eq!(min_rep_length(&a, &pt(&[7]), 10).unwrap(), Some(3));
        assert_eq!(min_rep_length(&a, &pt(&[0]), 10).unwrap(), Some(0));
        assert_eq!(min_rep_length(&a, &pt(&[1]), 10).unwrap(), None);
        assert_eq!(min_rep_length(&a, &pt(&[7]), 2).unwrap(), None);
    }

    #[test]
    fn membership_examples() {
        let a = PointSet::from_ints(&[0, 2, 3]);
        assert!(!psa_membership(&a, &pt(&[1])).unwrap());
        assert!(psa_membership(&a, &pt(&[5])).unwrap());
        let tri = PointSet::from_coords(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert!(psa_membership(&tri, &pt(&[4, 7])).unwrap());
        let centred = PointSet::from_ints(&[-1, 0, 1]);
        assert!(matches!(psa_membership(&centred, &pt(&[3])), Err(Error::OriginNotExtremal)));
        assert!(psa_membership_capped(&centred, &pt(&[3]), 5).unwrap());
        assert!(matches!(psa_membership_capped(&centred, &pt(&[30]), 5), Err(Error::Inconclusive { cap: 5 })));
    }

    #[test]
    fn exceptional_examples() {
        let e = exceptional_set(&PointSet::from_ints(&[0, 2, 3]), &interval(0, 20)).unwrap();
        assert_eq!(e, PointSet::from_ints(&[1]));
        let e = exceptional_set(&PointSet::from_ints(&[0, 2, 5]), &interval(0, 20)).unwrap();
        assert_eq!(e, PointSet::from_ints(&[1, 3]));
        let simplex = PointSet::from_coords(&[&[0, 0], &[2, 1], &[1, 3]]).unwrap();
        let region = convex_hull(&simplex).unwrap().scaled(4).unwrap();
        assert!(exceptional_set(&simplex, &region).unwrap().is_empty());
    }

    #[test]
    fn widths() {
        assert_eq!(width(&PointSet::from_ints(&[0, 2, 5])), 5);
        assert_eq!(width(&PointSet::from_coords(&[&[0, 0], &[1, 1], &[2, 0], &[0, 3]]).unwrap()), 3);
        assert_eq!(width(&PointSet::from_ints(&[4])), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let a = PointSet::from_coords(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert_eq!(growth_table(&a, 3).unwrap().sizes, vec![3, 6, 10]);
        let err = with_size_budget(8, || growth_table(&a, 3)).unwrap_err();
        assert_eq!(err, Error::PartialTable { budget: 8, completed: vec![3, 6] });
        assert!(matches!(with_size_budget(5, || sumset(&a, 2)), Err(Error::BudgetExceeded { budget: 5 })));
    }
}
