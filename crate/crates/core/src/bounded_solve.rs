//! Small solutions of integer linear systems: short kernel vectors,
//! positive solutions of bounded size, minimal positive solutions and
//! short kernel bases, each checked against a closed-form bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::{self, Row};
use crate::lattice::LatticePoint;
use crate::sumset::size_budget;

/// Dense integer matrix with `m` rows and `n` columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerMatrix {
    rows: Vec<Vec<i64>>,
    ncols: usize,
}

impl IntegerMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let ncols = rows.first().map(Vec::len).ok_or(Error::Empty("matrix"))?;
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch { expected: ncols, found: r.len() });
        }
        Ok(IntegerMatrix { rows, ncols })
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Largest absolute entry.
    pub fn k(&self) -> u64 {
        self.rows.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    /// `max(1, K)`.
    pub fn k_at_least_one(&self) -> u64 {
        self.k().max(1)
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| BigInt::from(*a) * b).sum()).collect()
    }

    fn big_rows(&self) -> Vec<Row> {
        self.rows.iter().map(|r| intmat::to_big(r)).collect()
    }

    fn columns(&self, cols: &[usize]) -> Vec<Row> {
        self.rows.iter().map(|r| cols.iter().map(|&j| BigInt::from(r[j])).collect()).collect()
    }
}

fn sup(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}

fn pow(b: u64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(b), e)
}

/// `(K n)^m`.
pub fn kernel_vector_bound(k: u64, n: usize, m: usize) -> BigInt {
    pow(k.max(1) * n as u64, m)
}

/// `2 n^(m+1) m^m K1^(2m) + m^m K1^(m-1) K2`.
pub fn positive_solution_bound(n: usize, m: usize, k1: u64, k2: u64) -> BigInt {
    let (k1, k2) = (k1.max(1), k2.max(1));
    let mm = pow(m as u64, m);
    BigInt::from(2) * pow(n as u64, m + 1) * &mm * pow(k1, 2 * m)
        + mm * pow(k1, m.saturating_sub(1)) * BigInt::from(k2)
}

/// `2^(2n) m^(mn) K1^(m(n+3)) n^(m+1) + 2^n m^(mn) K1^(mn) K2`.
pub fn minimal_solution_bound(n: usize, m: usize, k1: u64, k2: u64) -> BigInt {
    let (k1, k2) = (k1.max(1), k2.max(1));
    let mmn = pow(m as u64, m * n);
    pow(2, 2 * n) * &mmn * pow(k1, m * (n + 3)) * pow(n as u64, m + 1)
        + pow(2, n) * mmn * pow(k1, m * n) * BigInt::from(k2)
}

/// Square of `(m!)^(1/2) n^(m/2) K^m`.
pub fn kernel_basis_bound_squared(m: usize, n: usize, k: u64) -> BigInt {
    let fact: BigInt = (1..=m as u64).map(BigInt::from).product();
    fact * pow(n as u64, m) * pow(k.max(1), 2 * m)
}

fn normalize_sign(mut v: Row) -> Row {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut v {
            *x = -&*x;
        }
    }
    v
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Integer `t` minimising `|u - t v|_inf`.
fn best_multiple(u: &[BigInt], v: &[BigInt]) -> BigInt {
    let mut cands = vec![BigInt::zero()];
    for k in 0..u.len() {
        for l in 0..u.len() {
            for s in [1i32, -1] {
                let num = &u[k] - BigInt::from(s) * &u[l];
                let den = &v[k] - BigInt::from(s) * &v[l];
                if !den.is_zero() {
                    let f = floor_div(&num, &den);
                    cands.push(&f + 1);
                    cands.push(f);
                }
            }
        }
    }
    let norm = |t: &BigInt| sup(&u.iter().zip(v).map(|(a, b)| a - t * b).collect::<Vec<_>>());
    cands.into_iter().min_by(|a, b| norm(a).cmp(&norm(b)).then(a.abs().cmp(&b.abs()))).unwrap()
}

/// Pairwise size reduction until no vector's sup-norm can be lowered.
fn size_reduce(mut basis: Vec<Row>) -> Vec<Row> {
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let t = best_multiple(&basis[i], &basis[j]);
                if t.is_zero() {
                    continue;
                }
                let cand: Row = basis[i].iter().zip(&basis[j]).map(|(a, b)| a - &t * b).collect();
                if sup(&cand) < sup(&basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut basis: Vec<Row> = basis.into_iter().map(normalize_sign).collect();
    basis.sort_by(|a, b| sup(a).cmp(&sup(b)).then_with(|| b.cmp(a)));
    basis
}

/// Generators of the kernel built from maximal minors, one per non-pivot
/// column. Each entry is a minor of size `rank`.
fn minor_vectors(rows: &[Row], n: usize) -> Vec<Row> {
    let mut chosen: Vec<Row> = Vec::new();
    for r in rows {
        let mut trial = chosen.clone();
        trial.push(r.clone());
        if intmat::rank(&trial, n) > chosen.len() {
            chosen = trial;
        }
    }
    let rank = chosen.len();
    let mut pivots: Vec<usize> = Vec::new();
    for j in 0..n {
        let mut trial = pivots.clone();
        trial.push(j);
        let sub: Vec<Row> = chosen.iter().map(|r| trial.iter().map(|&c| r[c].clone()).collect()).collect();
        if intmat::rank(&sub, trial.len()) == trial.len() {
            pivots = trial;
        }
        if pivots.len() == rank {
            break;
        }
    }
    let mut out = Vec::new();
    for extra in (0..n).filter(|j| !pivots.contains(j)) {
        let mut cols = pivots.clone();
        cols.push(extra);
        let sub: Vec<Row> = chosen.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        if let Some(k) = intmat::integer_kernel(&sub, cols.len()).into_iter().next() {
            let mut v = vec![BigInt::zero(); n];
            for (c, x) in cols.iter().zip(k) {
                v[*c] = x;
            }
            out.push(normalize_sign(v));
        }
    }
    out
}

fn shortest_kernel_vector(rows: &[Row], n: usize) -> Option<Row> {
    let mut cands = size_reduce(intmat::integer_kernel(rows, n));
    cands.extend(minor_vectors(rows, n));
    cands.into_iter().min_by(|a, b| sup(a).cmp(&sup(b)).then_with(|| b.cmp(a)))
}

fn to_point(v: &[BigInt]) -> Result<LatticePoint> {
    LatticePoint::from_big(v)
}

/// Nonzero `X` with `MX = 0` and `|X|_inf <= (Kn)^m`.
pub fn small_kernel_vector(mat: &IntegerMatrix) -> Result<LatticePoint> {
    let v = shortest_kernel_vector(&mat.big_rows(), mat.n())
        .ok_or_else(|| Error::Invalid("matrix has trivial kernel".into()))?;
    let bound = kernel_vector_bound(mat.k(), mat.n(), mat.m());
    if sup(&v) > bound {
        return Err(Error::BoundViolated(format!("kernel vector norm {} exceeds {bound}", sup(&v))));
    }
    to_point(&v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositiveSolution {
    pub solution: LatticePoint,
    #[serde(serialize_with = "crate::khovanskii::ser_big")]
    pub bound: BigInt,
    pub within_bound: bool,
    /// Coordinates in the order they were fixed.
    pub fixed_order: Vec<usize>,
}

/// A positive solution of `My = b` of bounded size, obtained from a
/// positive witness `x` by repeatedly sliding along a kernel vector until
/// some coordinate is small, then freezing that coordinate.
pub fn positive_solution(mat: &IntegerMatrix, b: &LatticePoint, x: &LatticePoint) -> Result<PositiveSolution> {
    let n = mat.n();
    if x.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.dim() });
    }
    if b.dim() != mat.m() {
        return Err(Error::DimensionMismatch { expected: mat.m(), found: b.dim() });
    }
    let mut y: Row = x.to_big();
    if y.iter().any(|c| !c.is_positive()) {
        return Err(Error::InvalidWitness("witness is not strictly positive".into()));
    }
    if mat.apply(&y) != b.to_big() {
        return Err(Error::InvalidWitness("witness does not solve the system".into()));
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut fixed_order = Vec::new();
    while !active.is_empty() {
        let Some(mut v) = shortest_kernel_vector(&mat.columns(&active), active.len()) else { break };
        if !v.iter().any(|c| c.is_positive()) {
            v = v.into_iter().map(|c| -c).collect();
        }
        let (pos, t) = v
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_positive())
            .map(|(i, c)| (i, floor_div(&(&y[active[i]] - 1), c)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("kernel vector has a positive entry");
        for (i, c) in v.iter().enumerate() {
            y[active[i]] -= &t * c;
        }
        fixed_order.push(active.remove(pos));
    }
    debug_assert_eq!(mat.apply(&y), b.to_big());
    let k2 = b.sup_norm();
    let bound = positive_solution_bound(n, mat.m(), mat.k(), k2);
    let within_bound = sup(&y) <= bound;
    Ok(PositiveSolution { solution: to_point(&y)?, bound, within_bound, fixed_order })
}

/// Minimal positive solutions of `M (x, y) = b` projected to the first
/// `n1` coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalSolutionFamily {
    /// Members of `S_min` with a positive partner `y`, in order of `|x|_1`.
    pub solutions: Vec<(LatticePoint, LatticePoint)>,
    pub n1: usize,
    pub n2: usize,
    pub matrix: IntegerMatrix,
    pub target: LatticePoint,
    #[serde(serialize_with = "crate::khovanskii::ser_big")]
    pub member_bound: BigInt,
    /// Side of the box actually searched.
    pub searched: u64,
    /// The searched box contains the whole member bound.
    pub certified: bool,
}

impl MinimalSolutionFamily {
    pub fn members(&self) -> Vec<LatticePoint> {
        self.solutions.iter().map(|(x, _)| x.clone()).collect()
    }

    /// Every member is within the member bound.
    pub fn within_bound(&self) -> bool {
        self.solutions.iter().all(|(x, _)| BigInt::from(x.sup_norm()) <= self.member_bound)
    }
}

/// Row-reduced form of `M2 y = c` with integer rows, reusable for every
/// right-hand side: row `i` reads
/// `scale_i y_{pivot_i} + sum_{j free} coef_ij y_j = <transform_i, c>`,
/// and `<check, c> = 0` for each consistency row.
struct ReducedSystem {
    n2: usize,
    k1: u64,
    m: usize,
    pivots: Vec<usize>,
    free: Vec<usize>,
    scale: Vec<BigInt>,
    coef: Vec<Row>,
    transform: Vec<Row>,
    checks: Vec<Row>,
}

impl ReducedSystem {
    fn new(rows: &[Row]) -> Self {
        let m = rows.len();
        let n2 = rows.first().map(Vec::len).unwrap_or(0);
        let aug: Vec<Row> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().cloned().chain((0..m).map(|j| BigInt::from((i == j) as i64))).collect())
            .collect();
        let (red, piv) = intmat::rref(&aug, n2 + m);
        let mut sys = ReducedSystem {
            n2,
            k1: rows.iter().flatten().map(|x| x.abs()).max().and_then(|x| x.to_u64()).unwrap_or(0),
            m,
            pivots: Vec::new(),
            free: Vec::new(),
            scale: Vec::new(),
            coef: Vec::new(),
            transform: Vec::new(),
            checks: Vec::new(),
        };
        for (row, p) in red.into_iter().zip(piv) {
            let den = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let ints: Row = row.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
            if p >= n2 {
                sys.checks.push(ints[n2..].to_vec());
            } else {
                sys.pivots.push(p);
                sys.scale.push(ints[p].clone());
                sys.coef.push(ints[..n2].to_vec());
                sys.transform.push(ints[n2..].to_vec());
            }
        }
        sys.free = (0..n2).filter(|j| !sys.pivots.contains(j)).collect();
        sys
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Positive integer `y` with `M2 y = c`, or `None`. Exact: if any positive
/// solution exists then one lies within the positive-solution bound. All
/// free coordinates but the last are enumerated inside that box; the last
/// one is confined by the positivity constraints to an interval and, when
/// the interval is unbounded, to one period of the divisibility conditions.
fn positive_extension(sys: &ReducedSystem, c: &[BigInt], nodes: &mut u64, budget: u64) -> Result<Option<Row>> {
    let n2 = sys.n2;
    if sys.checks.iter().any(|r| !dot(r, c).is_zero()) {
        return Ok(None);
    }
    if n2 == 0 {
        return Ok(Some(Vec::new()));
    }
    let rhs: Vec<BigInt> = sys.transform.iter().map(|t| dot(t, c)).collect();
    let solve_pivots = |bases: &[BigInt], y: &mut Row| -> bool {
        for ((base, s), &p) in bases.iter().zip(&sys.scale).zip(&sys.pivots) {
            let (q, r) = base.div_rem(s);
            if !r.is_zero() || q < BigInt::one() {
                return false;
            }
            y[p] = q;
        }
        true
    };
    let Some((&last, outer)) = sys.free.split_last() else {
        let mut y = vec![BigInt::zero(); n2];
        return Ok(solve_pivots(&rhs, &mut y).then_some(y));
    };
    let k2 = sup(c).to_u64().unwrap_or(u64::MAX);
    let cap = positive_solution_bound(n2, sys.m, sys.k1, k2);
    let outer_cap = cap.to_u64().ok_or(Error::Overflow("extension search box"))?;
    let period: BigInt = sys
        .scale
        .iter()
        .zip(&sys.coef)
        .fold(BigInt::one(), |acc, (s, row)| acc.lcm(&(s / s.gcd(&row[last]))));
    let mut assign = vec![BigInt::one(); outer.len()];
    loop {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::SearchBudget { budget });
        }
        // pivot row i: scale_i y_p = base_i - coef_i,last * t
        let bases: Vec<BigInt> = rhs
            .iter()
            .zip(&sys.coef)
            .map(|(r, row)| r - outer.iter().zip(&assign).map(|(j, a)| &row[*j] * a).sum::<BigInt>())
            .collect();
        let mut lo = BigInt::one();
        let mut hi: Option<BigInt> = None;
        let mut ok = true;
        for ((base, s), row) in bases.iter().zip(&sys.scale).zip(&sys.coef) {
            let a = &row[last];
            let slack = base - s;
            if a.is_zero() {
                ok &= !slack.is_negative();
            } else if a.is_positive() {
                let h = slack.div_floor(a);
                hi = Some(hi.map_or(h.clone(), |x: BigInt| x.min(h)));
            } else {
                lo = lo.max((-slack).div_ceil(&-a));
            }
        }
        let hi = hi.unwrap_or_else(|| &lo + &period - 1);
        if ok && lo <= hi {
            if &hi - &lo > BigInt::from(budget) {
                return Err(Error::SearchBudget { budget });
            }
            let mut t = lo;
            while t <= hi {
                *nodes += 1;
                let shifted: Vec<BigInt> = bases.iter().zip(&sys.coef).map(|(b, row)| b - &row[last] * &t).collect();
                let mut y = vec![BigInt::zero(); n2];
                if solve_pivots(&shifted, &mut y) {
                    for (j, a) in outer.iter().zip(&assign) {
                        y[*j] = a.clone();
                    }
                    y[last] = t;
                    return Ok(Some(y));
                }
                t += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == assign.len() {
                return Ok(None);
            }
            if assign[i] < BigInt::from(outer_cap) {
                assign[i] += 1;
                break;
            }
            assign[i] = BigInt::one();
            i += 1;
        }
    }
}

/// Default node budget for the extension search.
pub const DEFAULT_SOLVE_BUDGET: u64 = 20_000_000;

/// `S_min(M, b)` by exhaustive search over `x` in order of `|x|_1` within
/// `[1, min(bound, box_cap)]^n1`.
pub fn minimal_positive_solutions(
    mat: &IntegerMatrix,
    b: &LatticePoint,
    n1: usize,
    box_cap: u64,
) -> Result<MinimalSolutionFamily> {
    let n = mat.n();
    if n1 == 0 || n1 > n || n < 2 {
        return Err(Error::Invalid(format!("need 1 <= n1 <= n and n >= 2, got n1 = {n1}, n = {n}")));
    }
    if b.dim() != mat.m() {
        return Err(Error::DimensionMismatch { expected: mat.m(), found: b.dim() });
    }
    let member_bound = minimal_solution_bound(n, mat.m(), mat.k(), b.sup_norm());
    let side = member_bound.to_u64().map_or(box_cap, |v| v.min(box_cap));
    let certified = BigInt::from(side) >= member_bound;
    let boxes = (side as u128).checked_pow(n1 as u32).unwrap_or(u128::MAX);
    let budget = size_budget();
    if boxes > budget as u128 {
        return Err(Error::BudgetExceeded { budget });
    }
    let left: Vec<usize> = (0..n1).collect();
    let right: Vec<usize> = (n1..n).collect();
    let m1 = mat.columns(&left);
    let m2 = ReducedSystem::new(&mat.columns(&right));
    let target = b.to_big();
    let mut nodes = 0u64;
    let mut solutions: Vec<(Vec<u64>, Row)> = Vec::new();
    for total in n1 as u64..=side * n1 as u64 {
        for x in compositions(total, n1, side) {
            if solutions.iter().any(|(s, _)| s.iter().zip(&x).all(|(a, b)| a <= b)) {
                continue;
            }
            let xb: Row = x.iter().map(|&v| BigInt::from(v)).collect();
            let c: Row = target
                .iter()
                .zip(&m1)
                .map(|(t, r)| t - r.iter().zip(&xb).map(|(a, b)| a * b).sum::<BigInt>())
                .collect();
            if let Some(y) = positive_extension(&m2, &c, &mut nodes, DEFAULT_SOLVE_BUDGET)? {
                solutions.push((x, y));
            }
        }
    }
    let solutions = solutions
        .into_iter()
        .map(|(x, y)| Ok((LatticePoint::new(x.iter().map(|&v| v as i64).collect()), to_point(&y)?)))
        .collect::<Result<_>>()?;
    Ok(MinimalSolutionFamily {
        solutions,
        n1,
        n2: n - n1,
        matrix: mat.clone(),
        target: b.clone(),
        member_bound,
        searched: side,
        certified,
    })
}

/// Vectors in `[1, cap]^k` with coordinate sum `total`, lexicographically.
fn compositions(total: u64, k: usize, cap: u64) -> Vec<Vec<u64>> {
    fn rec(rem: u64, k: usize, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if k == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let lo = rem.saturating_sub(cap * (k as u64 - 1)).max(1);
        let hi = rem.saturating_sub(k as u64 - 1).min(cap);
        for v in lo..=hi {
            cur.push(v);
            rec(rem - v, k - 1, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, k, cap, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelBasis {
    pub basis: Vec<LatticePoint>,
    /// Product of the sup-norms.
    #[serde(serialize_with = "crate::khovanskii::ser_big")]
    pub norm_product: BigInt,
    /// Square of the comparison bound.
    #[serde(serialize_with = "crate::khovanskii::ser_big")]
    pub bound_squared: BigInt,
    pub within_bound: bool,
}

/// `n - rank(M)` independent kernel vectors, size reduced.
pub fn bounded_kernel_basis(mat: &IntegerMatrix) -> Result<KernelBasis> {
    let basis = size_reduce(intmat::integer_kernel(&mat.big_rows(), mat.n()));
    let norm_product: BigInt = basis.iter().map(|v| sup(v)).product();
    let bound_squared = kernel_basis_bound_squared(mat.m(), mat.n(), mat.k());
    let within_bound = &norm_product * &norm_product <= bound_squared;
    Ok(KernelBasis {
        basis: basis.iter().map(|v| to_point(v)).collect::<Result<_>>()?,
        norm_product,
        bound_squared,
        within_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn pt(v: &[i64]) -> LatticePoint {
        LatticePoint::from(v)
    }

    #[test]
    fn kernel_vector_examples() {
        assert_eq!(small_kernel_vector(&mat(&[&[1, 1]])).unwrap(), pt(&[1, -1]));
        assert_eq!(small_kernel_vector(&mat(&[&[2, 3]])).unwrap(), pt(&[3, -2]));
        assert_eq!(small_kernel_vector(&mat(&[&[1, 0, 1], &[0, 1, 1]])).unwrap(), pt(&[1, 1, -1]));
        assert_eq!(kernel_vector_bound(1, 3, 2), BigInt::from(9));
        assert!(small_kernel_vector(&mat(&[&[1, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn positive_solution_examples() {
        let s = positive_solution(&mat(&[&[1, -1]]), &pt(&[0]), &pt(&[7, 7])).unwrap();
        assert_eq!(s.solution, pt(&[1, 1]));
        let s = positive_solution(&mat(&[&[1, 1]]), &pt(&[4]), &pt(&[1, 3])).unwrap();
        assert_eq!(s.solution.coords().iter().sum::<i64>(), 4);
        assert!(s.solution.coords().iter().all(|&c| c > 0) && s.within_bound);
        let s = positive_solution(&mat(&[&[1, 0], &[0, 1]]), &pt(&[2, 3]), &pt(&[2, 3])).unwrap();
        assert_eq!(s.solution, pt(&[2, 3]));
        assert!(positive_solution(&mat(&[&[1, 1]]), &pt(&[4]), &pt(&[2, 3])).is_err());
        assert!(positive_solution(&mat(&[&[1, 1]]), &pt(&[4]), &pt(&[0, 4])).is_err());
    }

    #[test]
    fn minimal_solution_examples() {
        let f = minimal_positive_solutions(&mat(&[&[1, -1]]), &pt(&[0]), 1, 1000).unwrap();
        assert_eq!(f.members(), vec![pt(&[1])]);
        assert!(f.certified);
        let f = minimal_positive_solutions(&mat(&[&[2, -3]]), &pt(&[0]), 1, 10_000).unwrap();
        assert_eq!(f.members(), vec![pt(&[3])]);
        let f = minimal_positive_solutions(&mat(&[&[1, 1]]), &pt(&[5]), 1, 1000).unwrap();
        assert_eq!(f.solutions, vec![(pt(&[1]), pt(&[4]))]);
        let f = minimal_positive_solutions(&mat(&[&[1, 1]]), &pt(&[1]), 1, 1000).unwrap();
        assert!(f.solutions.is_empty());
    }

    #[test]
    fn two_dimensional_antichain() {
        // x1 + x2 = y + 2 with y >= 1 forces x1 + x2 >= 3.
        let f = minimal_positive_solutions(&mat(&[&[1, 1, -1]]), &pt(&[2]), 2, 20).unwrap();
        assert_eq!(f.members(), vec![pt(&[1, 2]), pt(&[2, 1])]);
        assert!(!f.certified);
    }

    #[test]
    fn kernel_basis_examples() {
        let k = bounded_kernel_basis(&mat(&[&[1, 1, 1]])).unwrap();
        assert_eq!(k.basis.len(), 2);
        assert_eq!(k.norm_product, BigInt::one());
        assert!(k.within_bound);
        let k = bounded_kernel_basis(&mat(&[&[1, 0, 0], &[0, 1, 0]])).unwrap();
        assert_eq!(k.basis, vec![pt(&[0, 0, 1])]);
    }

    #[test]
    fn bound_formulas() {
        assert_eq!(positive_solution_bound(2, 1, 1, 1), BigInt::from(2 * 4 + 1));
        assert_eq!(minimal_solution_bound(2, 1, 1, 1), BigInt::from(16 * 4 + 4));
        assert_eq!(kernel_basis_bound_squared(1, 3, 1), BigInt::from(3));
    }
}
