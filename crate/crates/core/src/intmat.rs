//! Dense integer and rational matrix kernels shared by the lattice, polytope
//! and solver modules. Everything is exact; rows are `Vec<BigInt>`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) type Row = Vec<BigInt>;

pub(crate) fn to_big(v: &[i64]) -> Row {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn axpy(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // target -= q * src
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Upper row-style Hermite normal form. Pivots move strictly right, are
/// positive, and entries above a pivot lie in `[0, pivot)`. Zero rows are
/// dropped. If `pivot_cols` is given only those leading columns may carry
/// pivots; the remaining columns are carried along (used for transforms).
pub(crate) fn hnf_upper(mut a: Vec<Row>, pivot_cols: usize) -> (Vec<Row>, Vec<usize>) {
    let nrows = a.len();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..pivot_cols {
        if r == nrows {
            break;
        }
        loop {
            let best = (r..nrows)
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let Some(best) = best else { break };
            a.swap(r, best);
            let mut clean = true;
            for i in r + 1..nrows {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[r][col]);
                let (head, tail) = a.split_at_mut(i);
                axpy(&mut tail[0], &q, &head[r]);
                if !a[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r >= nrows || a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for j in 0..r {
            let q = a[j][col].div_floor(&a[r][col]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = a.split_at_mut(r);
            axpy(&mut head[j], &q, &tail[0]);
        }
        pivots.push(col);
        r += 1;
    }
    // rows r.. are zero on the pivot columns
    if pivot_cols == a.first().map_or(0, Vec::len) {
        a.truncate(r);
    }
    (a, pivots)
}

/// Lower-triangular canonical basis: each row's last nonzero entry is a
/// positive pivot, pivot columns increase down the rows and every later row
/// is reduced into `[0, pivot)` in each earlier pivot column.
pub(crate) fn hnf_lower(rows: Vec<Row>, ncols: usize) -> Vec<Row> {
    let reversed: Vec<Row> = rows
        .into_iter()
        .map(|mut r| {
            r.reverse();
            r
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let (mut h, _) = hnf_upper(reversed, ncols);
    h.retain(|r| r.iter().any(|x| !x.is_zero()));
    h.reverse();
    for r in h.iter_mut() {
        r.reverse();
    }
    h
}

/// Basis of the integer kernel lattice `{x in Z^n : M x = 0}`.
pub(crate) fn integer_kernel(m: &[Row], n: usize) -> Vec<Row> {
    // Row-reduce [M^T | I_n]; rows whose M^T part vanishes give the kernel.
    let rows = m.len();
    let aug: Vec<Row> = (0..n)
        .map(|j| {
            let mut r: Row = (0..rows).map(|i| m[i][j].clone()).collect();
            r.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let (h, pivots) = hnf_upper(aug, rows);
    h.into_iter()
        .skip(pivots.len())
        .map(|r| r[rows..].to_vec())
        .collect()
}

pub(crate) struct Smith {
    pub diag: Vec<BigInt>,
    /// Column transform: `U * A * V = D`.
    pub v: Vec<Row>,
}

fn identity(n: usize) -> Vec<Row> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Smith normal form with the right transform. Diagonal entries are
/// nonnegative and each divides the next.
pub(crate) fn smith(mut a: Vec<Row>, ncols: usize) -> Smith {
    let m = a.len();
    let n = ncols;
    let mut v = identity(n);
    let col_op = |a: &mut Vec<Row>, v: &mut Vec<Row>, dst: usize, q: &BigInt, src: usize| {
        // col_dst -= q * col_src
        for row in a.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
        for row in v.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
    };
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                let diag = (0..m.min(n)).map(|k| a[k][k].abs()).collect();
                return Smith { diag, v };
            };
            a.swap(t, bi);
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                for row in v.iter_mut() {
                    row.swap(t, bj);
                }
            }
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                let (head, tail) = a.split_at_mut(i);
                axpy(&mut tail[0], &q, &head[t]);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                col_op(&mut a, &mut v, j, &q, t);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let src = a[i].clone();
                    for (x, s) in a[t].iter_mut().zip(src) {
                        *x += s;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let diag = (0..m.min(n)).map(|k| a[k][k].abs()).collect();
    Smith { diag, v }
}

pub(crate) fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Reduced row echelon form over Q. Returns the reduced rows (nonzero only)
/// and their pivot columns.
pub(crate) fn rref(rows: &[Row], ncols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(rat).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i == r || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            let pivot_row = a[r].clone();
            for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub(crate) fn rank(rows: &[Row], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Solve `x = sum_i c_i * basis_i` over Q; `None` when `x` is outside the span.
pub(crate) fn solve_in_span(basis: &[Row], x: &[BigInt]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let d = x.len();
    // Columns of the system are the basis vectors: build the d x (k+1) matrix.
    let rows: Vec<Row> = (0..d)
        .map(|i| {
            let mut r: Row = basis.iter().map(|b| b[i].clone()).collect();
            r.push(x[i].clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) || pivots.len() < k {
        // inconsistent, or basis dependent
        return if pivots.contains(&k) { None } else { solve_dependent(&red, &pivots, k) };
    }
    Some((0..k).map(|i| red[i][k].clone()).collect())
}

fn solve_dependent(red: &[Vec<BigRational>], pivots: &[usize], k: usize) -> Option<Vec<BigRational>> {
    let mut c = vec![BigRational::zero(); k];
    for (row, &p) in red.iter().zip(pivots) {
        c[p] = row[k].clone();
    }
    Some(c)
}

/// Determinant over Z by fraction-free elimination (Bareiss).
pub(crate) fn determinant(m: &[Row]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Row> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub(crate) fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Row> {
        v.iter().map(|r| to_big(r)).collect()
    }

    #[test]
    fn kernel_of_single_row() {
        let k = integer_kernel(&rows(&[&[2, 3]]), 2);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(BigInt::from(2) * &v[0] + BigInt::from(3) * &v[1], BigInt::zero());
        assert_eq!(content(v), BigInt::one());
    }

    #[test]
    fn smith_of_diagonal() {
        let s = smith(rows(&[&[2, 0], &[0, 3]]), 2);
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(6)]);
        let s = smith(rows(&[&[2, 0], &[0, 2]]), 2);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = rows(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0 = -52 - 2 = -54
        assert_eq!(determinant(&m), BigInt::from(-54));
    }

    #[test]
    fn span_solve() {
        let b = rows(&[&[2, 0], &[0, 3]]);
        let c = solve_in_span(&b, &to_big(&[1, 1])).unwrap();
        assert_eq!(c[0], BigRational::new(1.into(), 2.into()));
        assert_eq!(c[1], BigRational::new(1.into(), 3.into()));
        let line = rows(&[&[1, 1]]);
        assert!(solve_in_span(&line, &to_big(&[1, 2])).is_none());
    }
}
