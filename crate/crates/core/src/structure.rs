//! The extremal-union description of `NA` and its verification.
//!
//! For every extremal point `a` of `H(A)` the set `a - A` has the origin as
//! a vertex, and `aN - NH(A) = N H(a - A)`, so only the part of
//! `E(a - A)` inside that dilate is ever needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::khovanskii::{khovanskii_thresholds, Threshold, ThresholdKind};
use crate::lattice::{IntegerLattice, LatticePoint};
use crate::polytope::{cone_of, convex_hull, polytope_lattice_points};
use crate::sumset::{exceptional_set, sumset, PointSet, PsaRegion};

/// Outcome of comparing `NA` with the extremal-union set for one `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureVerdict {
    pub n: usize,
    pub sumset_size: usize,
    pub rhs_size: usize,
    pub equal: bool,
    /// `NA ⊆ RHS`.
    pub inclusion: bool,
    /// Some point of the symmetric difference, present iff `!equal`.
    pub witness: Option<LatticePoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureOnset {
    /// Least `N0` such that every `N0 <= N <= horizon` verifies. `None`
    /// when `N = horizon` itself fails.
    pub onset: Option<usize>,
    pub horizon: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub instance: PointSet,
    pub verdicts: Vec<StructureVerdict>,
    pub empirical_onset: StructureOnset,
    pub thresholds: Vec<Threshold>,
}

/// The canonical base point: the lexicographically first vertex of `H(A)`.
pub fn base_vertex(a: &PointSet) -> Result<LatticePoint> {
    let hull = convex_hull(a)?;
    hull.vertices.points().first().cloned().ok_or(Error::Empty("point set"))
}

/// `(NH(A) ∩ (a0 N + Λ_{A-A})) \ ⋃_a (aN - E(a - A))`, with `a0` the
/// canonical base vertex.
pub fn rhs_structure_set(a: &PointSet, n: usize) -> Result<PointSet> {
    let a0 = base_vertex(a)?;
    rhs_structure_set_with_base(a, n, &a0)
}

/// As [`rhs_structure_set`] with an explicit `a0 ∈ A`.
pub fn rhs_structure_set_with_base(a: &PointSet, n: usize, a0: &LatticePoint) -> Result<PointSet> {
    if !a.contains(a0) {
        return Err(Error::Invalid(format!("base point {a0} is not in A")));
    }
    let nn = i64::try_from(n).map_err(|_| Error::Overflow("dilation factor"))?;
    let hull = convex_hull(a)?;
    let d = a.dim();
    if a.len() == 1 {
        return PointSet::new(d, vec![a0.checked_scale(nn)?]);
    }
    let diff = a.difference_lattice()?;
    let mut rhs = polytope_lattice_points(&hull, nn, &diff, &a0.checked_scale(nn)?)?;
    for v in hull.vertices.iter() {
        let shifted = a.reflect_about(v)?;
        let region = convex_hull(&shifted)?.scaled(nn)?;
        let e = exceptional_set(&shifted, &region)?;
        if e.is_empty() {
            continue;
        }
        let vn = v.checked_scale(nn)?;
        let removed = e.iter().map(|x| vn.checked_sub(x)).collect::<Result<Vec<_>>>()?;
        rhs = rhs.difference(&PointSet::new(d, removed)?);
    }
    Ok(rhs)
}

/// Compare `NA` with the extremal-union set.
pub fn verify_structure(a: &PointSet, n: usize) -> Result<StructureVerdict> {
    let lhs = sumset(a, n)?;
    let rhs = rhs_structure_set(a, n)?;
    let witness = lhs.symmetric_difference(&rhs).into_iter().next();
    Ok(StructureVerdict {
        n,
        sumset_size: lhs.len(),
        rhs_size: rhs.len(),
        equal: witness.is_none(),
        inclusion: lhs.is_subset(&rhs),
        witness,
    })
}

/// Verdicts for `N = 1..=n_max`.
pub fn verify_range(a: &PointSet, n_max: usize) -> Result<Vec<StructureVerdict>> {
    (1..=n_max).map(|n| verify_structure(a, n)).collect()
}

fn onset_of(verdicts: &[StructureVerdict], horizon: usize) -> StructureOnset {
    let mut onset = None;
    for v in verdicts.iter().rev() {
        if !v.equal {
            break;
        }
        onset = Some(v.n);
    }
    StructureOnset { onset, horizon }
}

/// Least `N0` with the identity verified on `[N0, n_max]`.
pub fn empirical_structure_onset(a: &PointSet, n_max: usize) -> Result<StructureOnset> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    Ok(onset_of(&verify_range(a, n_max)?, n_max))
}

/// Closed-form bounds relevant to the structure onset.
pub fn structure_thresholds(a: &PointSet) -> Result<Vec<Threshold>> {
    Ok(khovanskii_thresholds(a)?
        .entries
        .into_iter()
        .filter(|t| t.target != "kh" && t.kind != ThresholdKind::Speculative)
        .collect())
}

pub fn structure_report(a: &PointSet, n_max: usize) -> Result<StructureReport> {
    let verdicts = verify_range(a, n_max)?;
    let empirical_onset = onset_of(&verdicts, n_max);
    Ok(StructureReport { instance: a.clone(), verdicts, empirical_onset, thresholds: structure_thresholds(a)? })
}

/// Largest distance to the boundary of `C_A` among exceptional points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InteriorMargin {
    /// Sup-norm distance to the nearest facet hyperplane of the cone.
    #[serde(serialize_with = "ser_rat")]
    pub margin: BigRational,
    pub witness: Option<LatticePoint>,
    pub exceptional_points: usize,
    pub scan_dilation: usize,
}

fn ser_rat<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `μ(A)` over `E(A') ∩ n H(A')`, where `A' = A - a0` for the base vertex.
pub fn interior_margin(a: &PointSet, scan_dilation: usize) -> Result<InteriorMargin> {
    let a0 = base_vertex(a)?;
    let shifted = a.translate(&a0.checked_neg()?)?;
    let nn = i64::try_from(scan_dilation).map_err(|_| Error::Overflow("dilation factor"))?;
    let region = convex_hull(&shifted)?.scaled(nn)?;
    let cone = cone_of(&shifted)?;
    let e = exceptional_set(&shifted, &region)?;
    let mut margin = BigRational::from_integer(BigInt::from(0));
    let mut witness = None;
    for x in e.iter() {
        let dist = cone
            .facets
            .iter()
            .map(|f| {
                let l1: i64 = f.coords().iter().map(|c| c.abs()).sum();
                BigRational::new(BigInt::from(x.dot(f.coords())), BigInt::from(l1))
            })
            .min();
        if let Some(dist) = dist {
            if witness.is_none() || dist > margin {
                margin = dist;
                witness = Some(x.clone());
            }
        }
    }
    Ok(InteriorMargin { margin, witness, exceptional_points: e.len(), scan_dilation })
}

/// Result of checking `C_B ∩ P(A) = A⁺ + P(B ∪ {0})` on `{φ <= bound}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct APlusCheck {
    pub a_plus: PointSet,
    pub region_size: usize,
    pub holds: bool,
    pub witness: Option<LatticePoint>,
}

/// Checks the `A⁺` decomposition for `A` containing the origin as a vertex,
/// with `B` the remaining vertices of `H(A)`.
pub fn verify_a_plus(a: &PointSet, bound: i128) -> Result<APlusCheck> {
    let d = a.dim();
    let hull = convex_hull(a)?;
    let origin = LatticePoint::zero(d);
    if !hull.vertices.contains(&origin) {
        return Err(Error::OriginNotExtremal);
    }
    let b = hull.vertices.filter(|p| !p.is_zero());
    let b0 = hull.vertices.clone();
    let cone_b = cone_of(&b0)?;
    let pa = PsaRegion::new(a, bound)?;
    let pb = PsaRegion::new(&b0, bound)?;
    let lhs = PointSet::new(d, pa.points().map(|(p, _)| p.clone()).filter(|p| cone_b.contains(p)).collect())?;
    let mut plus = Vec::new();
    for x in lhs.iter() {
        let mut minimal = true;
        for v in b.iter() {
            if lhs.contains(&x.checked_sub(v)?) {
                minimal = false;
                break;
            }
        }
        if minimal {
            plus.push(x.clone());
        }
    }
    let a_plus = PointSet::new(d, plus)?;
    let phi = pa.functional().to_vec();
    let mut sums = Vec::new();
    for p in a_plus.iter() {
        for (q, _) in pb.points() {
            let s = p.checked_add(q)?;
            if s.dot(&phi) <= bound {
                sums.push(s);
            }
        }
    }
    let rhs = PointSet::new(d, sums)?;
    let witness = lhs.symmetric_difference(&rhs).into_iter().next();
    Ok(APlusCheck { a_plus, region_size: lhs.len(), holds: witness.is_none(), witness })
}

/// `aN + Λ_{A-A}` for each `a ∈ A` agree as cosets.
pub fn base_coset_independent(a: &PointSet, n: usize) -> Result<bool> {
    let diff: IntegerLattice = a.difference_lattice()?;
    let nn = i64::try_from(n).map_err(|_| Error::Overflow("dilation factor"))?;
    let first = match a.points().first() {
        Some(p) => p.checked_scale(nn)?,
        None => return Err(Error::Empty("point set")),
    };
    for p in a.iter() {
        if !diff.contains(&p.checked_scale(nn)?.checked_sub(&first)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[&[i64]]) -> PointSet {
        PointSet::from_coords(v).unwrap()
    }

    #[test]
    fn one_dim_rhs() {
        let a = PointSet::from_ints(&[0, 2, 3]);
        let rhs = rhs_structure_set(&a, 3).unwrap();
        assert_eq!(rhs.len(), 9);
        assert_eq!(rhs, sumset(&a, 3).unwrap());
        assert_eq!(rhs_structure_set(&PointSet::from_ints(&[0, 1]), 1).unwrap(), PointSet::from_ints(&[0, 1]));
        assert!(verify_structure(&PointSet::from_ints(&[0, 2, 5]), 1).unwrap().equal);
    }

    #[test]
    fn unimodular_simplex_fills_dilate() {
        let a = ps(&[&[0, 0], &[1, 0], &[0, 1]]);
        for n in [1, 4, 7] {
            let rhs = rhs_structure_set(&a, n).unwrap();
            assert_eq!(rhs.len(), (n + 1) * (n + 2) / 2);
            assert!(verify_structure(&a, n).unwrap().equal);
        }
    }

    #[test]
    fn d_plus_two_simplex_holds_from_one() {
        let a = ps(&[&[0, 0], &[1, 1], &[2, 0], &[0, 3]]);
        let onset = empirical_structure_onset(&a, 6).unwrap();
        assert_eq!(onset.onset, Some(1));
    }

    #[test]
    fn base_choice_is_irrelevant() {
        let a = ps(&[&[0, 0], &[1, 1], &[3, 0], &[0, 2]]);
        let reference = rhs_structure_set(&a, 4).unwrap();
        for p in a.iter() {
            assert_eq!(rhs_structure_set_with_base(&a, 4, p).unwrap(), reference);
        }
        assert!(base_coset_independent(&a, 5).unwrap());
    }

    #[test]
    fn failures_carry_witnesses() {
        let a = PointSet::from_ints(&[0, 1, 5, 6]);
        let v = verify_structure(&a, 1).unwrap();
        assert_eq!(v.equal, v.witness.is_none());
        assert!(v.inclusion);
    }

    #[test]
    fn margin_one_dim() {
        let m = interior_margin(&PointSet::from_ints(&[0, 2, 5]), 3).unwrap();
        assert_eq!(m.exceptional_points, 2);
        assert_eq!(m.margin, BigRational::from_integer(3.into()));
    }

    #[test]
    fn a_plus_decomposition() {
        let a = ps(&[&[0, 0], &[1, 1], &[3, 0], &[0, 3]]);
        let c = verify_a_plus(&a, 12).unwrap();
        assert!(c.holds, "{:?}", c.witness);
        assert!(c.a_plus.contains(&LatticePoint::zero(2)));
        let one = verify_a_plus(&PointSet::from_ints(&[0, 2, 3]), 20).unwrap();
        assert!(one.holds);
        assert_eq!(one.a_plus, PointSet::from_ints(&[0, 2, 4]));
    }

    #[test]
    fn thresholds_for_structure() {
        let t = structure_thresholds(&PointSet::from_ints(&[0, 2, 5])).unwrap();
        let get = |n: &str| t.iter().find(|x| x.name == n).unwrap().value.clone();
        assert_eq!(get("gw20_structure"), Some(BigInt::from(4)));
        assert_eq!(get("one_dim"), Some(BigInt::from(4)));
        assert!(t.iter().all(|x| x.name != "general"));
    }
}
