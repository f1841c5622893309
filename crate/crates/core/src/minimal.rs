//! Minimal-element systems: `B`-minimal elements and `K(A,B)`, Davenport
//! constants, the constant `k(G,H)`, and minimally useless exponent vectors.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{FiniteAbelianGroup, GroupElement, LatticePoint};
use crate::polytope::convex_hull;
use crate::sumset::{size_budget, sumset_step, PointSet};

/// `S(A,B)` together with minimal representation lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BMinimalFamily {
    /// `(u, N_A(u))`, ordered by length then lexicographically.
    pub elements: Vec<(LatticePoint, usize)>,
    pub basis_b: PointSet,
    /// An empty layer was reached, so the list is exhaustive.
    pub complete: bool,
    pub layers_searched: usize,
}

impl BMinimalFamily {
    /// `K(A,B) = max N_A(u)` over the family.
    pub fn k_value(&self) -> Result<usize> {
        if !self.complete {
            return Err(Error::IncompleteFamily { cap: self.layers_searched });
        }
        Ok(self.elements.iter().map(|(_, n)| *n).max().unwrap_or(0))
    }

    pub fn points(&self) -> Vec<LatticePoint> {
        self.elements.iter().map(|(u, _)| u.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `S(A,B)`, layer by layer.
///
/// Subsums of a minimal representation of a `B`-minimal element are again
/// `B`-minimal, so layer `k` is obtained from layer `k-1` by adding one
/// element of `A \ B*` and discarding anything in `(k-1)A + B*`. An empty
/// layer therefore ends the family. When `H(A)` is a simplex with vertex set
/// `B*` the family is finite and `cap` is raised to guarantee closure.
pub fn b_minimal_elements(a: &PointSet, b: &PointSet, cap: usize) -> Result<BMinimalFamily> {
    let d = a.dim();
    if b.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: b.dim() });
    }
    let origin = LatticePoint::zero(d);
    let b_star = b.union(&PointSet::new(d, vec![origin.clone()])?)?;
    if !b_star.is_subset(a) {
        return Err(Error::Invalid("B ∪ {0} must be a subset of A".into()));
    }
    let cap = match simplex_closure_cap(a, &b_star)? {
        Some(c) => cap.max(c),
        None => cap,
    };
    let steps: Vec<&LatticePoint> = a.iter().filter(|p| !b_star.contains(p)).collect();

    let mut elements = vec![(origin.clone(), 0usize)];
    let mut layer = vec![origin];
    // (k-1)A, starting from 0A = {0}
    let mut prev = PointSet::new(d, vec![LatticePoint::zero(d)])?;
    let mut k = 0;
    while !layer.is_empty() {
        if k == cap {
            return Ok(BMinimalFamily { elements, basis_b: b.clone(), complete: false, layers_searched: k });
        }
        k += 1;
        let blocked = sumset_step(&prev, &b_star)?;
        let mut next: Vec<LatticePoint> = Vec::new();
        for s in &layer {
            for t in &steps {
                let u = s.checked_add(t)?;
                if !blocked.contains(&u) {
                    next.push(u);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        if elements.len() + next.len() > size_budget() {
            return Err(Error::BudgetExceeded { budget: size_budget() });
        }
        elements.extend(next.iter().map(|u| (u.clone(), k)));
        layer = next;
        prev = sumset_step(&prev, a)?;
    }
    Ok(BMinimalFamily { elements, basis_b: b.clone(), complete: true, layers_searched: k })
}

// Order of Λ_A / Λ_B when H(A) is a simplex with vertex set B*: the layer
// count is then below it.
fn simplex_closure_cap(a: &PointSet, b_star: &PointSet) -> Result<Option<usize>> {
    let hull = convex_hull(a)?;
    if hull.vertices != *b_star || hull.vertices.len() != hull.affine_dim + 1 {
        return Ok(None);
    }
    let group = crate::lattice::quotient_group(&a.lattice()?, &b_star.lattice()?)?;
    Ok(Some(group.order() as usize + 1))
}

/// `K(A,B)`; fails when the family cannot be certified within `cap` layers.
pub fn k_of(a: &PointSet, b: &PointSet, cap: usize) -> Result<usize> {
    b_minimal_elements(a, b, cap)?.k_value()
}

/// `⋃_{u: N_A(u) <= N} (u + (N - N_A(u)) B*)`, which equals `NA`.
pub fn b_minimal_decomposition(family: &BMinimalFamily, n: usize) -> Result<PointSet> {
    let d = family.basis_b.dim();
    let b_star = family.basis_b.union(&PointSet::new(d, vec![LatticePoint::zero(d)])?)?;
    // multiples[m] = m B*
    let mut multiples = vec![PointSet::new(d, vec![LatticePoint::zero(d)])?];
    for m in 1..=n {
        let next = sumset_step(&multiples[m - 1], &b_star)?;
        multiples.push(next);
    }
    let mut pts = Vec::new();
    for (u, len) in &family.elements {
        if *len > n {
            continue;
        }
        for w in &multiples[n - len] {
            pts.push(u.checked_add(w)?);
        }
    }
    PointSet::new(d, pts)
}

const DEFAULT_NODE_BUDGET: u64 = 5_000_000;
const MAX_TABLE_ORDER: u64 = 4096;

/// Subsets of a finite group, as bitsets over mixed-radix indices.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b))
    }
    fn intersects(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }
}

struct SubsumSearch {
    order: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
    /// Allowed sequence terms.
    alphabet: Vec<usize>,
    /// Values no subsum of length at least two may take (besides zero).
    forbidden: Bits,
    forbidden_count: usize,
    best: usize,
    nodes: u64,
    budget: u64,
    seen: HashMap<(Bits, usize), usize>,
}

impl SubsumSearch {
    fn new(g: &FiniteAbelianGroup, alphabet: Vec<usize>, forbidden: Bits, budget: u64) -> Self {
        let order = g.order() as usize;
        let elems: Vec<GroupElement> = g.elements().collect();
        let mut add = vec![0u32; order * order];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                add[i * order + j] = g.index_of(&g.add(x, y)) as u32;
            }
        }
        let neg = elems.iter().map(|x| g.index_of(&g.neg(x)) as u32).collect();
        let forbidden_count = forbidden.count();
        SubsumSearch { order, add, neg, alphabet, forbidden, forbidden_count, best: 0, nodes: 0, budget, seen: HashMap::new() }
    }

    fn shifted(&self, sigma: &Bits, h: usize) -> Bits {
        let mut out = Bits::new(self.order);
        for s in sigma.ones() {
            out.set(self.add[s * self.order + h] as usize);
        }
        out
    }

    // Longest extension of a sequence whose nonempty subsums are `sigma`,
    // using alphabet positions >= start.
    fn dfs(&mut self, sigma: &Bits, start: usize, len: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudget { budget: self.budget });
        }
        self.best = self.best.max(len);
        if len > 0 {
            // Later partial sums avoid sigma, zero and the forbidden values.
            let mut blocked = sigma.clone();
            blocked.set(0);
            let taken = blocked.count() + self.forbidden_count - count_common(&blocked, &self.forbidden);
            let room = self.order - taken;
            if len + room <= self.best {
                return Ok(());
            }
        }
        let key = (sigma.clone(), start);
        if self.seen.get(&key).is_some_and(|&l| l >= len) {
            return Ok(());
        }
        self.seen.insert(key, len);
        for pos in start..self.alphabet.len() {
            let h = self.alphabet[pos];
            if sigma.get(self.neg[h] as usize) {
                continue;
            }
            let moved = self.shifted(sigma, h);
            if moved.intersects(&self.forbidden) {
                continue;
            }
            let mut next = sigma.clone();
            for (w, m) in next.0.iter_mut().zip(&moved.0) {
                *w |= m;
            }
            next.set(h);
            self.dfs(&next, pos, len + 1)?;
        }
        Ok(())
    }
}

fn count_common(a: &Bits, b: &Bits) -> usize {
    a.0.iter().zip(&b.0).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// `m (1 + ln(|G| / m))` with `m` the exponent.
pub fn davenport_upper_bound(g: &FiniteAbelianGroup) -> f64 {
    let m = g.exponent() as f64;
    m * (1.0 + (g.order() as f64 / m).ln())
}

/// Smallest `D` such that every sequence of `D` elements has a nonempty
/// zero subsum.
pub fn davenport_constant(g: &FiniteAbelianGroup) -> Result<u64> {
    davenport_constant_with_budget(g, DEFAULT_NODE_BUDGET)
}

pub fn davenport_constant_with_budget(g: &FiniteAbelianGroup, budget: u64) -> Result<u64> {
    let order = g.order();
    let fail = || Error::DavenportBudget { order, bound: davenport_upper_bound(g) };
    if order > MAX_TABLE_ORDER {
        return Err(fail());
    }
    let n = order as usize;
    let mut search = SubsumSearch::new(g, (1..n).collect(), Bits::new(n), budget);
    // e_i repeated d_i - 1 times is zero-sum free
    search.best = g.invariant_factors().iter().map(|&d| d as usize - 1).sum();
    match search.dfs(&Bits::new(n), 0, 0) {
        Ok(()) => Ok(search.best as u64 + 1),
        Err(_) => Err(fail()),
    }
}

/// Longest sequence over `H` with no zero subsum and no subsum of length at
/// least two lying in `H`.
pub fn k_constant(g: &FiniteAbelianGroup, h: &[GroupElement]) -> Result<u64> {
    k_constant_with_budget(g, h, DEFAULT_NODE_BUDGET)
}

pub fn k_constant_with_budget(g: &FiniteAbelianGroup, h: &[GroupElement], budget: u64) -> Result<u64> {
    if g.order() > MAX_TABLE_ORDER {
        return Err(Error::SearchBudget { budget });
    }
    let n = g.order() as usize;
    let mut forbidden = Bits::new(n);
    let mut alphabet = Vec::new();
    for x in h {
        if x.len() != g.invariant_factors().len() || x.iter().zip(g.invariant_factors()).any(|(a, d)| a >= d) {
            return Err(Error::Invalid(format!("{x:?} is not an element of the group")));
        }
        let i = g.index_of(x);
        if i == 0 {
            return Err(Error::Invalid("H must not contain zero".into()));
        }
        if !forbidden.get(i) {
            forbidden.set(i);
            alphabet.push(i);
        }
    }
    alphabet.sort_unstable();
    if alphabet.is_empty() {
        return Ok(0);
    }
    let mut search = SubsumSearch::new(g, alphabet, forbidden, budget);
    search.best = 1;
    search.dfs(&Bits::new(n), 0, 0)?;
    Ok(search.best as u64)
}

/// Minimally useless exponent vectors, indexed by the canonical order of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UselessFamily {
    pub instance: PointSet,
    pub minimal_useless: Vec<Vec<u64>>,
    /// Members were searched with every coordinate at most this value.
    pub cap_used: u64,
    /// The inclusion-exclusion count reproduced `|NA|` on the validation window.
    pub certified: bool,
}

impl UselessFamily {
    pub fn ell(&self) -> usize {
        self.instance.len()
    }

    /// Coordinatewise maximum of all members.
    pub fn joint_max(&self) -> Vec<u64> {
        let mut m = vec![0; self.ell()];
        for u in &self.minimal_useless {
            for (a, b) in m.iter_mut().zip(u) {
                *a = (*a).max(*b);
            }
        }
        m
    }
}

/// `y <_lex x`.
pub fn lex_less(y: &[u64], x: &[u64]) -> bool {
    y < x
}

/// `x <=_unif y`.
pub fn unif_le(x: &[u64], y: &[u64]) -> bool {
    x.iter().zip(y).all(|(a, b)| a <= b)
}

fn weighted_sum(points: &[LatticePoint], x: &[u64]) -> Result<Vec<i64>> {
    let d = points.first().map_or(0, LatticePoint::dim);
    let mut s = vec![0i64; d];
    for (p, &c) in points.iter().zip(x) {
        let c = i64::try_from(c).map_err(|_| Error::Overflow("exponent"))?;
        for (acc, v) in s.iter_mut().zip(p.coords()) {
            *acc = v.checked_mul(c).and_then(|t| acc.checked_add(t)).ok_or(Error::Overflow("weighted sum"))?;
        }
    }
    Ok(s)
}

// Calls `f` on every x in Z_{>=0}^l with |x|_1 = n, in increasing lex order.
fn for_each_composition(l: usize, n: u64, f: &mut impl FnMut(&[u64]) -> Result<()>) -> Result<()> {
    fn rec(x: &mut Vec<u64>, i: usize, left: u64, f: &mut impl FnMut(&[u64]) -> Result<()>) -> Result<()> {
        if i + 1 == x.len() {
            x[i] = left;
            return f(x);
        }
        for v in 0..=left {
            x[i] = v;
            rec(x, i + 1, left - v, f)?;
        }
        Ok(())
    }
    if l == 0 {
        return if n == 0 { f(&[]) } else { Ok(()) };
    }
    let mut x = vec![0; l];
    rec(&mut x, 0, n, f)
}

/// Lex-minimal exponent vector of norm `n` for every reachable sum.
fn lex_minima(points: &[LatticePoint], n: u64) -> Result<HashMap<Vec<i64>, Vec<u64>>> {
    let mut out: HashMap<Vec<i64>, Vec<u64>> = HashMap::new();
    let budget = size_budget();
    let mut visited = 0usize;
    for_each_composition(points.len(), n, &mut |x| {
        visited += 1;
        if visited > budget.saturating_mul(4) {
            return Err(Error::BudgetExceeded { budget });
        }
        out.entry(weighted_sum(points, x)?).or_insert_with(|| x.to_vec());
        Ok(())
    })?;
    Ok(out)
}

/// Whether `x` is useless, by exhaustive search over all vectors of its norm.
pub fn is_useless(a: &PointSet, x: &[u64]) -> Result<bool> {
    let n: u64 = x.iter().sum();
    let minima = lex_minima(a.points(), n)?;
    Ok(minima[&weighted_sum(a.points(), x)?] != x)
}

/// Minimally useless vectors with every coordinate at most `norm_cap`,
/// followed by validation against enumerated sumset sizes.
pub fn minimal_useless(a: &PointSet, norm_cap: u64) -> Result<UselessFamily> {
    let members = minimal_useless_members(a, norm_cap)?;
    let mut family = UselessFamily { instance: a.clone(), minimal_useless: members, cap_used: norm_cap, certified: false };
    family.certified = crate::khovanskii::validate_useless_family(&family)?;
    Ok(family)
}

/// Doubles the coordinate cap from `start` until the family validates or
/// `max_cap` is passed.
pub fn minimal_useless_auto(a: &PointSet, start: u64, max_cap: u64) -> Result<UselessFamily> {
    let mut cap = start.max(1);
    loop {
        let fam = minimal_useless(a, cap)?;
        if fam.certified || cap >= max_cap {
            return Ok(fam);
        }
        cap = (cap * 2).min(max_cap);
    }
}

fn minimal_useless_members(a: &PointSet, norm_cap: u64) -> Result<Vec<Vec<u64>>> {
    if a.is_empty() {
        return Err(Error::Empty("point set"));
    }
    let pts = a.points();
    let l = pts.len();
    let mut members = Vec::new();
    let mut below = lex_minima(pts, 0)?;
    let top = norm_cap.saturating_mul(l as u64);
    for n in 1..=top {
        let here = lex_minima(pts, n)?;
        let useful_here: HashSet<&Vec<u64>> = here.values().collect();
        let useful_below: HashSet<&Vec<u64>> = below.values().collect();
        let mut found = Vec::new();
        for_each_composition(l, n, &mut |x| {
            if x.iter().any(|&c| c > norm_cap) || useful_here.contains(&x.to_vec()) {
                return Ok(());
            }
            let mut y = x.to_vec();
            let minimal = (0..l).all(|i| {
                if x[i] == 0 {
                    return true;
                }
                y[i] -= 1;
                let ok = useful_below.contains(&y);
                y[i] += 1;
                ok
            });
            if minimal {
                found.push(x.to_vec());
            }
            Ok(())
        })?;
        members.extend(found);
        below = here;
    }
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[i64]) -> LatticePoint {
        LatticePoint::from(v)
    }

    #[test]
    fn b_minimal_one_dimensional() {
        let a = PointSet::from_ints(&[0, 2, 3]);
        let fam = b_minimal_elements(&a, &PointSet::from_ints(&[3]), 20).unwrap();
        assert!(fam.complete);
        assert_eq!(fam.elements, vec![(pt(&[0]), 0), (pt(&[2]), 1), (pt(&[4]), 2)]);
        assert_eq!(fam.k_value().unwrap(), 2);
    }

    #[test]
    fn b_minimal_trivial_simplex() {
        let a = PointSet::from_coords(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let b = PointSet::from_coords(&[&[1, 0], &[0, 1]]).unwrap();
        let fam = b_minimal_elements(&a, &b, 5).unwrap();
        assert_eq!(fam.elements, vec![(pt(&[0, 0]), 0)]);
        assert_eq!(fam.k_value().unwrap(), 0);
    }

    #[test]
    fn b_minimal_infinite_family_is_flagged() {
        let a = PointSet::from_coords(&[&[0, 0], &[-1, 1], &[0, 1], &[1, 0]]).unwrap();
        let b = PointSet::from_coords(&[&[0, 1], &[1, 0]]).unwrap();
        let fam = b_minimal_elements(&a, &b, 6).unwrap();
        assert!(!fam.complete);
        let expected: Vec<_> = (0..=6).map(|k| (pt(&[-k, k]), k as usize)).collect();
        assert_eq!(fam.elements, expected);
        assert!(matches!(fam.k_value(), Err(Error::IncompleteFamily { .. })));
    }

    #[test]
    fn b_minimal_requires_subset() {
        let a = PointSet::from_ints(&[0, 2, 3]);
        assert!(b_minimal_elements(&a, &PointSet::from_ints(&[5]), 5).is_err());
    }

    #[test]
    fn decomposition_reproduces_sumsets() {
        let a = PointSet::from_ints(&[0, 2, 3]);
        let fam = b_minimal_elements(&a, &PointSet::from_ints(&[3]), 20).unwrap();
        for n in 1..8 {
            assert_eq!(b_minimal_decomposition(&fam, n).unwrap(), crate::sumset::sumset(&a, n).unwrap());
        }
    }

    #[test]
    fn davenport_small_groups() {
        for n in 1..=12 {
            let g = FiniteAbelianGroup::product_of_cyclic(&[n]).unwrap();
            assert_eq!(davenport_constant(&g).unwrap(), n);
        }
        let v4 = FiniteAbelianGroup::product_of_cyclic(&[2, 2]).unwrap();
        assert_eq!(davenport_constant(&v4).unwrap(), 3);
        assert_eq!(davenport_constant(&FiniteAbelianGroup::trivial()).unwrap(), 1);
    }

    #[test]
    fn davenport_budget_reports_bound() {
        let g = FiniteAbelianGroup::product_of_cyclic(&[2, 2, 2, 2]).unwrap();
        match davenport_constant_with_budget(&g, 3) {
            Err(Error::DavenportBudget { order: 16, bound }) => assert!(bound > 2.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn k_constant_examples() {
        let z2 = FiniteAbelianGroup::product_of_cyclic(&[2]).unwrap();
        assert_eq!(k_constant(&z2, &[vec![1]]).unwrap(), 1);
        let z6 = FiniteAbelianGroup::product_of_cyclic(&[6]).unwrap();
        // 1+1 = 2 is outside H, ..., five ones sum to 5, six to 0
        assert_eq!(k_constant(&z6, &[vec![1]]).unwrap(), 5);
        assert!(k_constant(&z6, &[vec![0]]).is_err());
        assert_eq!(k_constant(&z6, &[]).unwrap(), 0);
    }

    #[test]
    fn useless_examples() {
        let fam = minimal_useless(&PointSet::from_ints(&[0, 1]), 4).unwrap();
        assert!(fam.minimal_useless.is_empty());
        assert!(fam.certified);
        let fam = minimal_useless(&PointSet::from_ints(&[0, 1, 2]), 3).unwrap();
        assert_eq!(fam.minimal_useless, vec![vec![1, 0, 1]]);
        assert!(fam.certified);
        assert!(is_useless(&PointSet::from_ints(&[0, 1, 2]), &[1, 0, 1]).unwrap());
        assert!(!is_useless(&PointSet::from_ints(&[0, 1, 2]), &[0, 2, 0]).unwrap());
    }

    #[test]
    fn useless_family_is_antichain() {
        let fam = minimal_useless(&PointSet::from_ints(&[0, 2, 3]), 4).unwrap();
        for (i, x) in fam.minimal_useless.iter().enumerate() {
            for (j, y) in fam.minimal_useless.iter().enumerate() {
                assert!(i == j || !unif_le(x, y));
            }
        }
    }
}
