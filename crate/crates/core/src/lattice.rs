//! Lattice points, sublattices of `Z^d` in canonical form, and finite
//! quotients between them.
//!
//! Points use checked `i64` coordinates: any overflow is reported as
//! [`Error::Overflow`] rather than wrapping. Lattice bases and everything
//! derived from them (Hermite and Smith forms, projections) use `BigInt`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{self, Row};

/// A vector of `Z^d`. Ordering is lexicographic on the coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut c = vec![0; dim];
        c[i] = 1;
        LatticePoint(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("point addition")))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow("point subtraction")))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow("point scaling")))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }

    pub fn checked_neg(&self) -> Result<Self> {
        self.checked_scale(-1)
    }

    /// Sup norm. Exact: `|i64::MIN|` fits in `u64`.
    pub fn sup_norm(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn dot(&self, v: &[i64]) -> i128 {
        self.0.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()
    }

    pub fn to_big(&self) -> Row {
        intmat::to_big(&self.0)
    }

    pub(crate) fn from_big(v: &[BigInt]) -> Result<Self> {
        v.iter()
            .map(|x| x.to_i64().ok_or(Error::Overflow("coordinate conversion")))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl From<&[i64]> for LatticePoint {
    fn from(v: &[i64]) -> Self {
        LatticePoint(v.to_vec())
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A sublattice of `Z^d`, stored as the rows of its lower-triangular
/// Hermite normal form. Two equal lattices have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    ambient_dim: usize,
    basis: Vec<Row>,
}

/// Canonical basis of the integer span of `generators`. Fails on an empty
/// list because the ambient dimension is then unknown; use
/// [`IntegerLattice::span`] to give it explicitly.
pub fn hermite_normal_form(generators: &[LatticePoint]) -> Result<IntegerLattice> {
    let first = generators.first().ok_or(Error::Empty("generator list without ambient dimension"))?;
    IntegerLattice::span(first.dim(), generators)
}

pub fn lattice_contains(lattice: &IntegerLattice, x: &LatticePoint) -> bool {
    lattice.contains(x)
}

impl IntegerLattice {
    pub fn span(ambient_dim: usize, generators: &[LatticePoint]) -> Result<Self> {
        for g in generators {
            if g.dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: g.dim() });
            }
        }
        let rows = generators.iter().map(LatticePoint::to_big).collect();
        Ok(Self::from_rows(ambient_dim, rows))
    }

    pub(crate) fn from_rows(ambient_dim: usize, rows: Vec<Row>) -> Self {
        IntegerLattice { ambient_dim, basis: intmat::hnf_lower(rows, ambient_dim) }
    }

    /// `Z^d` itself.
    pub fn full(d: usize) -> Self {
        let gens: Vec<_> = (0..d).map(|i| LatticePoint::unit(d, i)).collect();
        Self::span(d, &gens).expect("unit vectors share a dimension")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Row] {
        &self.basis
    }

    pub fn basis_points(&self) -> Result<Vec<LatticePoint>> {
        self.basis.iter().map(|r| LatticePoint::from_big(r)).collect()
    }

    fn pivot(row: &[BigInt]) -> usize {
        row.iter().rposition(|x| !x.is_zero()).expect("basis rows are nonzero")
    }

    /// Integer coordinates of `x` in the canonical basis, if `x` lies in the lattice.
    pub fn coordinates_big(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        if x.len() != self.ambient_dim {
            return None;
        }
        let mut residual = x.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.basis.len()];
        for (i, row) in self.basis.iter().enumerate().rev() {
            let p = Self::pivot(row);
            let (q, r) = residual[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (t, b) in residual.iter_mut().zip(row) {
                    *t -= &q * b;
                }
            }
            coeffs[i] = q;
        }
        residual.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn coordinates(&self, x: &LatticePoint) -> Option<Vec<BigInt>> {
        self.coordinates_big(&x.to_big())
    }

    pub fn contains(&self, x: &LatticePoint) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn contains_lattice(&self, other: &IntegerLattice) -> bool {
        other.ambient_dim == self.ambient_dim && other.basis.iter().all(|r| self.coordinates_big(r).is_some())
    }

    /// Absolute determinant of the basis when the lattice has full rank.
    pub fn full_rank_determinant(&self) -> Option<BigInt> {
        (self.rank() == self.ambient_dim).then(|| intmat::determinant(&self.basis).abs())
    }
}

/// An element of a [`FiniteAbelianGroup`]: one residue per invariant factor.
pub type GroupElement = Vec<u64>;

/// The finite quotient `L_sup / L_sub`, written as `Z/d_1 x ... x Z/d_k`
/// with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
    sup: IntegerLattice,
    // Columns of the Smith right transform for the nontrivial factors,
    // indexed [basis coordinate][factor].
    projection: Vec<Row>,
}

pub fn quotient_group(sup: &IntegerLattice, sub: &IntegerLattice) -> Result<FiniteAbelianGroup> {
    if sup.ambient_dim != sub.ambient_dim {
        return Err(Error::DimensionMismatch { expected: sup.ambient_dim, found: sub.ambient_dim });
    }
    if sup.rank() != sub.rank() {
        return Err(Error::InfiniteQuotient { sup: sup.rank(), sub: sub.rank() });
    }
    let change: Vec<Row> = sub
        .basis
        .iter()
        .map(|r| sup.coordinates_big(r).ok_or(Error::NotSublattice))
        .collect::<Result<_>>()?;
    let r = sup.rank();
    let snf = intmat::smith(change, r);
    let mut factors = Vec::new();
    let mut keep = Vec::new();
    for (i, d) in snf.diag.iter().enumerate() {
        if d > &BigInt::one() {
            factors.push(d.to_u64().ok_or(Error::Overflow("invariant factor"))?);
            keep.push(i);
        }
    }
    let projection = (0..r).map(|row| keep.iter().map(|&c| snf.v[row][c].clone()).collect()).collect();
    Ok(FiniteAbelianGroup { invariant_factors: factors, sup: sup.clone(), projection })
}

impl FiniteAbelianGroup {
    /// `Z/n_1 x ... x Z/n_k` for arbitrary positive moduli, normalised to
    /// invariant factors. Elements of the product are given to
    /// [`Self::project`] as vectors of length `k`.
    pub fn product_of_cyclic(moduli: &[u64]) -> Result<Self> {
        let k = moduli.len();
        let gens: Vec<LatticePoint> = moduli
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let n = i64::try_from(n).map_err(|_| Error::Overflow("modulus"))?;
                if n < 1 {
                    return Err(Error::Invalid("moduli must be positive".into()));
                }
                LatticePoint::unit(k, i).checked_scale(n)
            })
            .collect::<Result<_>>()?;
        quotient_group(&IntegerLattice::full(k), &IntegerLattice::span(k, &gens)?)
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariant_factors: vec![], sup: IntegerLattice::full(0), projection: vec![] }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    /// Largest element order, i.e. the last invariant factor.
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn ambient(&self) -> &IntegerLattice {
        &self.sup
    }

    pub fn project(&self, v: &LatticePoint) -> Result<GroupElement> {
        let y = self.sup.coordinates(v).ok_or_else(|| Error::NotInLattice(v.to_string()))?;
        Ok(self
            .invariant_factors
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let z: BigInt = y.iter().zip(&self.projection).map(|(yi, col)| yi * &col[k]).sum();
                z.mod_floor(&BigInt::from(d)).to_u64().expect("residue below modulus")
            })
            .collect())
    }

    pub fn zero(&self) -> GroupElement {
        vec![0; self.invariant_factors.len()]
    }

    pub fn add(&self, g: &[u64], h: &[u64]) -> GroupElement {
        g.iter().zip(h).zip(&self.invariant_factors).map(|((a, b), d)| (a + b) % d).collect()
    }

    pub fn neg(&self, g: &[u64]) -> GroupElement {
        g.iter().zip(&self.invariant_factors).map(|(a, d)| (d - a) % d).collect()
    }

    /// Mixed-radix index in `0..order()`.
    pub fn index_of(&self, g: &[u64]) -> usize {
        g.iter().zip(&self.invariant_factors).fold(0usize, |acc, (a, d)| acc * *d as usize + *a as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut g = vec![0; self.invariant_factors.len()];
        for (slot, d) in g.iter_mut().zip(&self.invariant_factors).rev() {
            *slot = (idx % *d as usize) as u64;
            idx /= *d as usize;
        }
        g
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order() as usize).map(|i| self.element_at(i))
    }

    pub fn element_order(&self, g: &[u64]) -> u64 {
        g.iter().zip(&self.invariant_factors).fold(1u64, |acc, (a, d)| acc.lcm(&(d / a.gcd(d))))
    }
}

/// Lattice generated by `A - a0` for any `a0` in `A`.
pub fn difference_lattice(points: &[LatticePoint]) -> Result<IntegerLattice> {
    let first = points.first().ok_or(Error::Empty("point set"))?;
    let diffs = points.iter().map(|p| p.checked_sub(first)).collect::<Result<Vec<_>>>()?;
    IntegerLattice::span(first.dim(), &diffs)
}
