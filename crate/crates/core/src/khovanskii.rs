//! Khovanskii polynomials: an empirical fit, the inclusion-exclusion
//! formula over minimally useless vectors, the per-coset binomial formula
//! for simplices, and the closed-form thresholds.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat;
use crate::lattice::{quotient_group, FiniteAbelianGroup, GroupElement, LatticePoint};
use crate::minimal::{b_minimal_elements, BMinimalFamily, UselessFamily};
use crate::polytope::{convex_hull, normalized_volume};
use crate::sumset::{growth_table, sumset, width, GrowthTable, PointSet};

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `X - c`.
    fn linear(c: &BigRational) -> Self {
        Self::new(vec![-c.clone(), BigRational::one()])
    }

    /// `C(X - shift + k, k) = (X - shift + k) ... (X - shift + 1) / k!`.
    pub fn binomial(shift: &BigInt, k: usize) -> Self {
        let mut p = Self::constant(BigRational::one());
        let mut fact = BigInt::one();
        for i in 1..=k {
            p = p.mul(&Self::linear(&BigRational::from_integer(shift - BigInt::from(i))));
            fact *= i;
        }
        p.scale(&BigRational::new(BigInt::one(), fact))
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, n: i64) -> BigRational {
        self.eval(&BigRational::from_integer(n.into()))
    }

    /// Value at `n` when it is an integer.
    pub fn eval_integer(&self, n: i64) -> Option<BigInt> {
        let v = self.eval_int(n);
        v.is_integer().then(|| v.to_integer())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coefficient(i) + other.coefficient(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// The unique polynomial of degree below `points.len()` through the points.
    pub fn interpolate(points: &[(i64, BigInt)]) -> Self {
        let mut total = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::constant(BigRational::from_integer(yi.clone()));
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let denom = BigRational::from_integer(BigInt::from(*xi) - BigInt::from(*xj));
                    basis = basis.mul(&Self::linear(&BigRational::from_integer((*xj).into()))).scale(&denom.recip());
                }
            }
            total = total.add(&basis);
        }
        total
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one() && k > 0;
            if !unit {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "N")?,
                _ => write!(f, "N^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RationalPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            display: String,
            coefficients: Vec<String>,
        }
        Repr { display: self.to_string(), coefficients: self.coeffs.iter().map(|c| c.to_string()).collect() }
            .serialize(s)
    }
}

/// `coeff * C(X - shift + degree, degree)`, read as zero when `X < shift`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialTerm {
    #[serde(serialize_with = "ser_big")]
    pub coeff: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub shift: BigInt,
    pub degree: usize,
}

pub(crate) fn ser_big<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

fn binom(n: &BigInt, k: usize) -> BigInt {
    if n.is_negative() {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

/// A sum of truncated binomial terms. Evaluation follows the truncation
/// rule; the polynomial form agrees with it from [`Self::identity_from`] on.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct BinomialSum {
    pub terms: Vec<BinomialTerm>,
}

impl BinomialSum {
    /// Merges terms with equal shift and degree, dropping zero coefficients.
    pub fn normalized(&self) -> Self {
        let mut acc: BTreeMap<(usize, BigInt), BigInt> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry((t.degree, t.shift.clone())).or_default() += &t.coeff;
        }
        BinomialSum {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((degree, shift), coeff)| BinomialTerm { coeff, shift, degree })
                .collect(),
        }
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.terms
            .iter()
            .filter(|t| n >= &t.shift)
            .map(|t| &t.coeff * binom(&(n - &t.shift + BigInt::from(t.degree)), t.degree))
            .sum()
    }

    pub fn eval_u64(&self, n: u64) -> BigInt {
        self.eval(&BigInt::from(n))
    }

    pub fn polynomial(&self) -> RationalPolynomial {
        self.terms.iter().fold(RationalPolynomial::zero(), |acc, t| {
            acc.add(&RationalPolynomial::binomial(&t.shift, t.degree).scale(&BigRational::from_integer(t.coeff.clone())))
        })
    }

    /// Smallest `N` from which every term equals its polynomial.
    pub fn identity_from(&self) -> Option<BigInt> {
        self.normalized().terms.iter().map(|t| &t.shift - BigInt::from(t.degree)).max()
    }

    pub fn extend(&mut self, other: &BinomialSum) {
        self.terms.extend(other.terms.iter().cloned());
    }
}

/// Result of fitting a polynomial to a growth table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolynomialFit {
    pub polynomial: RationalPolynomial,
    /// Least `N_0` with `P(N) = |NA|` for every `N_0 <= N <= horizon`.
    pub onset: usize,
    /// Largest `N` checked; the onset certifies nothing beyond it.
    pub horizon: usize,
}

/// Interpolates the last `d + 1` table entries and finds the empirical onset.
pub fn fit_polynomial(table: &GrowthTable, d: usize) -> Result<PolynomialFit> {
    let len = table.sizes.len();
    if len < d + 2 {
        return Err(Error::TableTooShort { len, needed: d + 2 });
    }
    let pts: Vec<(i64, BigInt)> =
        (len - d - 1..len).map(|i| (i as i64 + 1, BigInt::from(table.sizes[i]))).collect();
    let polynomial = RationalPolynomial::interpolate(&pts);
    let mut onset = len;
    for n in (1..=len).rev() {
        if polynomial.eval_int(n as i64) != BigRational::from_integer(table.sizes[n - 1].into()) {
            break;
        }
        onset = n;
    }
    Ok(PolynomialFit { polynomial, onset, horizon: len })
}

/// Fits the table for `A` up to `n_max`, with `d` the affine dimension of `A`.
pub fn fit_instance(a: &PointSet, n_max: usize) -> Result<PolynomialFit> {
    let r = convex_hull(a)?.affine_dim;
    fit_polynomial(&growth_table(a, n_max)?, r)
}

const MAX_SUBSET_MEMBERS: usize = 22;

/// Polynomial from the inclusion-exclusion over minimally useless vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralPolynomial {
    pub binomial: BinomialSum,
    pub polynomial: RationalPolynomial,
    /// From here on the binomial sum is a polynomial identity.
    pub onset: usize,
    pub certified: bool,
}

fn useless_binomial_sum(family: &UselessFamily) -> Result<BinomialSum> {
    let members = &family.minimal_useless;
    if members.len() > MAX_SUBSET_MEMBERS {
        return Err(Error::SubsetBudget { members: members.len() });
    }
    let l = family.ell();
    if l == 0 {
        return Err(Error::Empty("point set"));
    }
    let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
    fn rec(members: &[Vec<u64>], i: usize, star: &mut Vec<u64>, sign: i64, acc: &mut BTreeMap<u64, BigInt>) {
        if i == members.len() {
            *acc.entry(star.iter().sum()).or_default() += sign;
            return;
        }
        rec(members, i + 1, star, sign, acc);
        let saved = star.clone();
        for (s, m) in star.iter_mut().zip(&members[i]) {
            *s = (*s).max(*m);
        }
        rec(members, i + 1, star, -sign, acc);
        *star = saved;
    }
    rec(members, 0, &mut vec![0; l], 1, &mut acc);
    let terms = acc
        .into_iter()
        .map(|(shift, coeff)| BinomialTerm { coeff, shift: shift.into(), degree: l - 1 })
        .collect();
    Ok(BinomialSum { terms }.normalized())
}

pub fn khovanskii_poly_general(family: &UselessFamily) -> Result<GeneralPolynomial> {
    let binomial = useless_binomial_sum(family)?;
    let onset = binomial.identity_from().map_or(1, |v| v.max(BigInt::one()).to_usize().unwrap_or(usize::MAX));
    Ok(GeneralPolynomial { polynomial: binomial.polynomial(), binomial, onset, certified: family.certified })
}

/// Checks the inclusion-exclusion count against `|NA|` for every `N` from 1
/// through `max(|u*|_1 + max(r + 2, l), l (cap + 1) + r + 2)`, with `u*` the
/// joint maximum.
///
/// The count is exact up to the least norm of a minimally useless vector
/// missing from the family, and a missing one has a coordinate above the
/// cap, so the window reaches past `l * cap`.
pub fn validate_useless_family(family: &UselessFamily) -> Result<bool> {
    let binomial = useless_binomial_sum(family)?;
    let a = &family.instance;
    let r = convex_hull(a)?.affine_dim;
    let l = family.ell();
    let start: u64 = family.joint_max().iter().sum::<u64>().max(1);
    let past_cap = (l as u64).saturating_mul(family.cap_used + 1) as usize + r + 2;
    let end = (start as usize + (r + 2).max(l)).max(past_cap);
    let table = growth_table(a, end)?;
    Ok((1..=end).all(|n| binomial.eval_u64(n as u64) == BigInt::from(table.sizes[n - 1])))
}

/// One minimal element of a coset, in coordinates of the simplex basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetElement {
    pub u: LatticePoint,
    pub rep_length: usize,
    #[serde(serialize_with = "ser_big_vec")]
    pub floor_coords: Vec<BigInt>,
    #[serde(serialize_with = "ser_big")]
    pub delta: BigInt,
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(i) => seq.serialize_element(&i)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// Minimal elements of one coset of `Λ_A / Λ_B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetData {
    pub coset: GroupElement,
    pub elements: Vec<CosetElement>,
    pub dim: usize,
}

/// Outcome of the smaller-`N` refinement for one coset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OnsetRefinement {
    pub h: usize,
    #[serde(serialize_with = "ser_big")]
    pub n_full: BigInt,
    /// `N_[k] - d - h`: the count is polynomial from here on.
    #[serde(serialize_with = "ser_big")]
    pub refined_onset: BigInt,
    /// `W(h)`; the count at `refined_onset - 1` differs from the polynomial by `(-1)^d W(h)`.
    #[serde(serialize_with = "ser_big")]
    pub w_h: BigInt,
}

impl CosetData {
    fn check_size(&self) -> Result<()> {
        if self.elements.len() > MAX_SUBSET_MEMBERS {
            return Err(Error::SubsetBudget { members: self.elements.len() });
        }
        Ok(())
    }

    /// `N_J` for the subset encoded by `mask`.
    pub fn n_j(&self, mask: u64) -> BigInt {
        let chosen: Vec<&CosetElement> =
            self.elements.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, e)| e).collect();
        let delta = chosen.iter().map(|e| &e.delta).max().cloned().unwrap_or_default();
        let coords: BigInt = (0..self.dim)
            .map(|i| chosen.iter().map(|e| &e.floor_coords[i]).max().cloned().unwrap_or_default())
            .sum();
        delta + coords
    }

    pub fn n_full(&self) -> BigInt {
        self.n_j((1u64 << self.elements.len()) - 1)
    }

    /// `sum_J (-1)^{|J|-1} C(N - N_J + d, d)`.
    pub fn binomial_sum(&self) -> Result<BinomialSum> {
        self.check_size()?;
        let k = self.elements.len();
        let terms = (1u64..1 << k)
            .map(|mask| BinomialTerm {
                coeff: if mask.count_ones() % 2 == 1 { BigInt::one() } else { -BigInt::one() },
                shift: self.n_j(mask),
                degree: self.dim,
            })
            .collect();
        Ok(BinomialSum { terms }.normalized())
    }

    /// `W(t) = sum over J with N_J = N_[k] - t of (-1)^{|J|}`.
    pub fn w(&self, t: usize) -> Result<BigInt> {
        self.check_size()?;
        let target = self.n_full() - BigInt::from(t);
        let k = self.elements.len();
        Ok((1u64..1 << k)
            .filter(|&m| self.n_j(m) == target)
            .map(|m| if m.count_ones() % 2 == 0 { BigInt::one() } else { -BigInt::one() })
            .sum())
    }

    pub fn refinement(&self) -> Result<OnsetRefinement> {
        self.check_size()?;
        let k = self.elements.len();
        let n_full = self.n_full();
        let mut by_gap: BTreeMap<BigInt, BigInt> = BTreeMap::new();
        for m in 1u64..1 << k {
            let sign = if m.count_ones() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            *by_gap.entry(&n_full - self.n_j(m)).or_default() += sign;
        }
        // W(h) summed over all h is -1, so some gap has a nonzero weight
        let (h, w_h) = by_gap.into_iter().find(|(_, w)| !w.is_zero()).expect("weights sum to -1");
        let refined_onset = &n_full - BigInt::from(self.dim) - &h;
        Ok(OnsetRefinement { h: h.to_usize().expect("gap is small"), n_full, refined_onset, w_h })
    }
}

/// Everything produced by the simplex coset formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexPolynomial {
    /// The vertex subtracted from `A` before the computation.
    pub translation: LatticePoint,
    pub invariant_factors: Vec<u64>,
    pub cosets: Vec<CosetData>,
    pub per_coset: Vec<BinomialSum>,
    pub total: BinomialSum,
    pub polynomial: RationalPolynomial,
    /// `max(1, max_g N_[k] - d)`.
    pub onset: usize,
    /// `max(1, max_g refined onset)`.
    pub refined_onset: usize,
    pub refinements: Vec<OnsetRefinement>,
    pub k_value: usize,
    #[serde(skip)]
    pub family: BMinimalFamily,
    #[serde(skip)]
    group: FiniteAbelianGroup,
    #[serde(skip)]
    basis: Vec<Vec<BigInt>>,
}

impl SimplexPolynomial {
    /// Coset of a point of the translated set `A - a_0`.
    pub fn coset_of(&self, v: &LatticePoint) -> Result<GroupElement> {
        self.group.project(v)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// Vertices other than the translation point, after translating.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// `|(NA)_g|` for every coset, by enumerating `N(A - a_0)`.
    pub fn enumerated_coset_counts(&self, a: &PointSet, n: usize) -> Result<BTreeMap<GroupElement, usize>> {
        let shifted = a.translate(&self.translation.checked_neg()?)?;
        let mut counts = BTreeMap::new();
        for c in &self.cosets {
            counts.insert(c.coset.clone(), 0usize);
        }
        for v in &sumset(&shifted, n)? {
            *counts.entry(self.coset_of(v)?).or_default() += 1;
        }
        Ok(counts)
    }
}

fn floor_rat(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// The coset formula for `A` whose hull is a simplex.
pub fn khovanskii_poly_simplex(a: &PointSet) -> Result<SimplexPolynomial> {
    let hull = convex_hull(a)?;
    if hull.vertices.len() != hull.affine_dim + 1 {
        return Err(Error::NotSimplex);
    }
    let r = hull.affine_dim;
    let a0 = hull.vertices.points()[0].clone();
    let shifted = a.translate(&a0.checked_neg()?)?;
    let b_pts: Vec<LatticePoint> =
        hull.vertices.points()[1..].iter().map(|v| v.checked_sub(&a0)).collect::<Result<_>>()?;
    let b = PointSet::new(a.dim(), b_pts.clone())?;
    let family = b_minimal_elements(&shifted, &b, 0)?;
    let k_value = family.k_value()?;
    let group = quotient_group(&shifted.lattice()?, &b.lattice()?)?;
    let basis: Vec<Vec<BigInt>> = b_pts.iter().map(LatticePoint::to_big).collect();

    let mut by_coset: BTreeMap<GroupElement, Vec<CosetElement>> = BTreeMap::new();
    for (u, len) in &family.elements {
        let coords = intmat::solve_in_span(&basis, &u.to_big())
            .ok_or_else(|| Error::NotInLattice(u.to_string()))?;
        let floor_coords: Vec<BigInt> = coords.iter().map(floor_rat).collect();
        let delta = BigInt::from(*len) - floor_coords.iter().sum::<BigInt>();
        if delta.is_negative() {
            return Err(Error::BoundViolated(format!("negative slack at {u}")));
        }
        by_coset
            .entry(group.project(u)?)
            .or_default()
            .push(CosetElement { u: u.clone(), rep_length: *len, floor_coords, delta });
    }

    let mut cosets = Vec::new();
    let mut per_coset = Vec::new();
    let mut refinements = Vec::new();
    let mut total = BinomialSum::default();
    let mut onset = BigInt::one();
    let mut refined = BigInt::one();
    for (coset, elements) in by_coset {
        let data = CosetData { coset, elements, dim: r };
        let sum = data.binomial_sum()?;
        let rf = data.refinement()?;
        onset = onset.max(data.n_full() - BigInt::from(r));
        refined = refined.max(rf.refined_onset.clone());
        total.extend(&sum);
        per_coset.push(sum);
        refinements.push(rf);
        cosets.push(data);
    }
    let total = total.normalized();
    Ok(SimplexPolynomial {
        translation: a0,
        invariant_factors: group.invariant_factors().to_vec(),
        polynomial: total.polynomial(),
        total,
        per_coset,
        cosets,
        onset: onset.to_usize().ok_or(Error::Overflow("onset"))?,
        refined_onset: refined.to_usize().ok_or(Error::Overflow("onset"))?,
        refinements,
        k_value,
        family,
        group,
        basis,
    })
}

/// `sum over nonempty J of (-1)^{|J|} max_{j in J} a_j`, by direct expansion.
pub fn alternating_max_sum(a: &[i64]) -> Result<BigInt> {
    if a.len() > MAX_SUBSET_MEMBERS {
        return Err(Error::SubsetBudget { members: a.len() });
    }
    Ok((1u64..1 << a.len())
        .map(|m| {
            let mx = (0..a.len()).filter(|j| m >> j & 1 == 1).map(|j| a[j]).max().unwrap();
            let v = BigInt::from(mx);
            if m.count_ones() % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .sum())
}

/// How a threshold relates to the true onset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    UpperBound,
    Exact,
    Constant,
    Speculative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub name: &'static str,
    pub formula: &'static str,
    /// Which onset the value concerns: `kh`, `str` or `both`.
    pub target: &'static str,
    pub kind: ThresholdKind,
    pub applicable: bool,
    /// `None` when inapplicable or too large to write out.
    #[serde(serialize_with = "ser_opt_big")]
    pub value: Option<BigInt>,
    pub note: Option<String>,
}

fn ser_opt_big<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        None => s.serialize_none(),
        Some(v) => ser_big(v, s),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub dim: usize,
    pub affine_dim: usize,
    pub ell: usize,
    pub width: u64,
    #[serde(serialize_with = "ser_big")]
    pub normalized_volume: BigInt,
    pub entries: Vec<Threshold>,
}

impl ThresholdReport {
    pub fn get(&self, name: &str) -> Option<&Threshold> {
        self.entries.iter().find(|t| t.name == name)
    }
}

/// Values beyond this many bits are reported without a value.
pub const MAX_THRESHOLD_BITS: f64 = (1u64 << 22) as f64;

fn power(base: &BigInt, exp: u64) -> Option<BigInt> {
    if base.is_zero() || base.is_one() {
        return Some(base.clone());
    }
    let bits = exp as f64 * base.bits() as f64;
    if bits > MAX_THRESHOLD_BITS {
        return None;
    }
    Some(num_traits::pow(base.clone(), exp as usize))
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// Every closed-form threshold for `A`, evaluated exactly.
pub fn khovanskii_thresholds(a: &PointSet) -> Result<ThresholdReport> {
    let hull = convex_hull(a)?;
    let d = a.dim() as u64;
    let r = hull.affine_dim as u64;
    let ell = a.len() as u64;
    let w = width(a);
    let vol = normalized_volume(a)?;
    let simplex = hull.vertices.len() as u64 == r + 1;
    let full = r == d;
    let mut entries = Vec::new();
    let mut push = |name, formula, target, kind, applicable: bool, value: Option<BigInt>, note: Option<String>| {
        entries.push(Threshold { name, formula, target, kind, applicable, value: value.filter(|_| applicable), note });
    };

    let general = power(&big(2 * ell * w), (d + 4) * ell);
    push("general", "(2 l w)^((d+4) l)", "kh", ThresholdKind::UpperBound, true, general.clone(), too_big(&general));

    let structure = power(&big(d * ell * w), 13 * d.pow(6));
    push("structure", "(d l w)^(13 d^6)", "str", ThresholdKind::UpperBound, true, structure.clone(), too_big(&structure));

    let simplex_bound = (BigInt::from(d + 1) * &vol - BigInt::from((d + 1) * ell) + BigInt::from((d + 1) * d) + BigInt::one())
        .max(BigInt::one());
    push(
        "simplex",
        "(d+1)! vol(H(A)) - (d+1)(l - d) + 1",
        "both",
        ThresholdKind::UpperBound,
        simplex && full,
        Some(simplex_bound),
        None,
    );

    let diffs_gcd = a.difference_lattice()?.full_rank_determinant();
    let unimodular = diffs_gcd.as_ref().is_some_and(|g| g.is_one());
    push(
        "one_dim",
        "w - 1",
        "both",
        ThresholdKind::UpperBound,
        d == 1 && unimodular && ell >= 3,
        Some(BigInt::from(w) - BigInt::one()),
        None,
    );
    push(
        "gw20_structure",
        "w + 2 - l",
        "str",
        ThresholdKind::UpperBound,
        d == 1 && unimodular && ell >= 2,
        Some((BigInt::from(w) + BigInt::from(2) - BigInt::from(ell)).max(BigInt::one())),
        None,
    );
    let triple = d == 1 && ell == 3 && unimodular;
    push(
        "triple_kh",
        "max(1, b - 2)",
        "kh",
        ThresholdKind::Exact,
        triple,
        Some((BigInt::from(w) - BigInt::from(2)).max(BigInt::one())),
        None,
    );
    push("triple_str", "1", "str", ThresholdKind::Exact, triple, Some(BigInt::one()), None);

    let cg = ell == d + 2 && full && unimodular;
    push(
        "cg_exact",
        "d! vol(H(A)) - d - 1",
        "kh",
        ThresholdKind::Exact,
        cg,
        Some((&vol - BigInt::from(d + 1)).max(BigInt::one())),
        Some("clamped below at 1".into()),
    );

    let mut k_note = None;
    let k_value = if simplex {
        match khovanskii_poly_simplex(a) {
            Ok(sp) => Some(sp.k_value),
            Err(e) => {
                k_note = Some(e.to_string());
                None
            }
        }
    } else {
        None
    };
    push(
        "simplex_k",
        "(d+1)(K - 1) + 1",
        "str",
        ThresholdKind::UpperBound,
        simplex && full && k_value.is_some(),
        k_value.map(|k| (BigInt::from(d + 1) * (BigInt::from(k as u64) - BigInt::one()) + BigInt::one()).max(BigInt::one())),
        k_note,
    );

    let ka = power(&big(d), d)
        .zip(power(&big(ell), 3 * d))
        .zip(power(&big(w), 3 * d))
        .map(|((x, y), z)| BigInt::from(4) * x * y * z);
    push("k_a", "4 d^d l^(3d) w^(3d)", "both", ThresholdKind::Constant, true, ka.clone(), too_big(&ka));

    let small = power(&big(d), 11 * d.pow(3))
        .zip(power(&big(ell), d))
        .zip(power(&big(w), 5 * d.pow(3)))
        .map(|((x, y), z)| BigInt::from(2) * x * y * z);
    push(
        "small_elements",
        "2 d^(11 d^3) l^d w^(5 d^3)",
        "both",
        ThresholdKind::Constant,
        true,
        small.clone(),
        too_big(&small),
    );

    push("speculation", "d! vol(H(A))", "both", ThresholdKind::Speculative, full, Some(vol.clone()), None);

    Ok(ThresholdReport { dim: d as usize, affine_dim: r as usize, ell: ell as usize, width: w, normalized_volume: vol, entries })
}

fn too_big(v: &Option<BigInt>) -> Option<String> {
    v.is_none().then(|| "value exceeds the size limit and is not written out".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimal::minimal_useless;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn polynomial_basics() {
        let p = RationalPolynomial::from_integers(&[-5, 5]);
        assert_eq!(p.to_string(), "5N - 5");
        assert_eq!(p.eval_int(4), q(15, 1));
        let c = RationalPolynomial::binomial(&BigInt::zero(), 2);
        assert_eq!(c.coefficients(), &[q(1, 1), q(3, 2), q(1, 2)]);
        assert_eq!(c.to_string(), "1/2N^2 + 3/2N + 1");
        assert_eq!(RationalPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let pts: Vec<(i64, BigInt)> = (3..6).map(|n| (n, BigInt::from(n * n - 2 * n + 7))).collect();
        assert_eq!(RationalPolynomial::interpolate(&pts), RationalPolynomial::from_integers(&[7, -2, 1]));
    }

    #[test]
    fn truncated_binomials() {
        let s = BinomialSum { terms: vec![BinomialTerm { coeff: BigInt::one(), shift: BigInt::from(3), degree: 2 }] };
        assert_eq!(s.eval_u64(2), BigInt::zero());
        assert_eq!(s.eval_u64(3), BigInt::one());
        assert_eq!(s.eval_u64(5), BigInt::from(6));
        assert_eq!(s.identity_from(), Some(BigInt::one()));
        assert_eq!(s.polynomial().eval_int(2), q(0, 1));
    }

    #[test]
    fn fit_examples() {
        let t = GrowthTable { instance: PointSet::from_ints(&[0, 2, 5]), sizes: vec![3, 6, 10, 15, 20] };
        let f = fit_polynomial(&t, 1).unwrap();
        assert_eq!(f.polynomial, RationalPolynomial::from_integers(&[-5, 5]));
        assert_eq!(f.onset, 3);
        let t = GrowthTable { instance: PointSet::from_ints(&[0, 1]), sizes: vec![2, 3, 4] };
        let f = fit_polynomial(&t, 1).unwrap();
        assert_eq!(f.polynomial, RationalPolynomial::from_integers(&[1, 1]));
        assert_eq!(f.onset, 1);
        assert!(matches!(fit_polynomial(&t, 2), Err(Error::TableTooShort { .. })));
        let cg = PointSet::from_coords(&[&[0, 0], &[1, 1], &[2, 0], &[0, 3]]).unwrap();
        assert_eq!(fit_instance(&cg, 10).unwrap().onset, 3);
    }

    #[test]
    fn general_pipeline_examples() {
        let fam = minimal_useless(&PointSet::from_ints(&[0, 1]), 3).unwrap();
        let g = khovanskii_poly_general(&fam).unwrap();
        assert_eq!(g.polynomial, RationalPolynomial::from_integers(&[1, 1]));
        let fam = minimal_useless(&PointSet::from_ints(&[0, 1, 2]), 3).unwrap();
        let g = khovanskii_poly_general(&fam).unwrap();
        assert_eq!(g.polynomial, RationalPolynomial::from_integers(&[1, 2]));
    }

    #[test]
    fn simplex_pipeline_examples() {
        let unit = PointSet::from_coords(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let sp = khovanskii_poly_simplex(&unit).unwrap();
        assert_eq!(sp.cosets.len(), 1);
        assert_eq!(sp.polynomial, RationalPolynomial::binomial(&BigInt::zero(), 2));

        let sp = khovanskii_poly_simplex(&PointSet::from_ints(&[0, 2, 3])).unwrap();
        assert_eq!(sp.polynomial, RationalPolynomial::from_integers(&[0, 3]));
        assert_eq!(sp.onset, 1);
        let mut counts: Vec<RationalPolynomial> = sp.per_coset.iter().map(BinomialSum::polynomial).collect();
        counts.sort_by_key(|p| p.coefficient(0));
        assert_eq!(
            counts,
            vec![
                RationalPolynomial::from_integers(&[-1, 1]),
                RationalPolynomial::from_integers(&[0, 1]),
                RationalPolynomial::from_integers(&[1, 1])
            ]
        );

        let sp = khovanskii_poly_simplex(&PointSet::from_ints(&[0, 2, 5])).unwrap();
        assert_eq!(sp.polynomial, RationalPolynomial::from_integers(&[-5, 5]));
        assert!(sp.onset >= 3);

        let square = PointSet::from_coords(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
        assert!(matches!(khovanskii_poly_simplex(&square), Err(Error::NotSimplex)));
    }

    #[test]
    fn refinement_single_element() {
        let c = CosetData {
            coset: vec![],
            elements: vec![CosetElement {
                u: LatticePoint::zero(1),
                rep_length: 0,
                floor_coords: vec![BigInt::zero()],
                delta: BigInt::zero(),
            }],
            dim: 1,
        };
        let rf = c.refinement().unwrap();
        assert_eq!(rf.h, 0);
        assert_eq!(rf.w_h, -BigInt::one());
    }

    #[test]
    fn min_max_identity_small() {
        assert_eq!(alternating_max_sum(&[3, 1, 2]).unwrap(), BigInt::from(-1));
        assert_eq!(alternating_max_sum(&[5]).unwrap(), BigInt::from(-5));
    }

    #[test]
    fn thresholds_examples() {
        let t = khovanskii_thresholds(&PointSet::from_ints(&[0, 2, 5])).unwrap();
        assert_eq!(t.get("one_dim").unwrap().value, Some(BigInt::from(4)));
        assert_eq!(t.get("triple_kh").unwrap().value, Some(BigInt::from(3)));
        let general = num_traits::pow(BigInt::from(30), 15);
        assert_eq!(t.get("general").unwrap().value, Some(general));
        let cg = khovanskii_thresholds(&PointSet::from_coords(&[&[0, 0], &[1, 1], &[2, 0], &[0, 3]]).unwrap()).unwrap();
        assert_eq!(cg.get("cg_exact").unwrap().value, Some(BigInt::from(3)));
        assert!(cg.get("cg_exact").unwrap().applicable);
    }
}
