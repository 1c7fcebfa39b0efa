//! Exact matrix routines over `Z` and `Q`.
//!
//! Nothing in here touches floating point except the candidate window in
//! [`ellipsoid_points`], where every candidate is re-checked exactly.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn to_rational(m: &[Vec<i64>]) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inertia `(positive, negative, zero)` of a symmetric rational matrix,
/// computed by congruence diagonalization.
pub fn inertia(m: &RatMatrix) -> (usize, usize, usize) {
    let n = m.len();
    let mut a = m.clone();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        let pivot = (k..n).find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                // All remaining diagonal entries vanish: find an off-diagonal
                // entry and fold its column into a diagonal slot.
                let off = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero());
                match off {
                    None => {
                        zero += n - k;
                        break;
                    }
                    Some((i, j)) => {
                        for c in 0..n {
                            let v = a[j][c].clone();
                            a[i][c] += v;
                        }
                        for r in 0..n {
                            let v = a[r][j].clone();
                            a[r][i] += v;
                        }
                        i
                    }
                }
            }
        };
        a.swap(pivot, k);
        for row in a.iter_mut() {
            row.swap(pivot, k);
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        for i in k + 1..n {
            a[k][i] = BigRational::zero();
        }
        k += 1;
    }
    (pos, neg, zero)
}

/// Rank over `Q` of an integer matrix given by rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a = to_rational(rows);
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..nrows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for j in c..ncols {
                let v = &f * &a[r][j];
                a[i][j] -= v;
            }
        }
        r += 1;
        if r == nrows {
            break;
        }
    }
    r
}

/// Invariant factors of an integer matrix (Smith normal form diagonal,
/// nonzero entries only, each dividing the next).
pub fn smith_invariants(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the trailing block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(pi, t);
        for row in a.iter_mut() {
            row.swap(pj, t);
        }
        loop {
            let mut changed = false;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = floor_div(&a[i][t], &a[t][t]);
                for j in t..ncols {
                    let v = &q * &a[t][j];
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    a.swap(i, t);
                    changed = true;
                }
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = floor_div(&a[t][j], &a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(j, t);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (t + 1..nrows)
                .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..ncols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    num::Integer::div_floor(a, b)
}

/// All integer vectors `x` with `x^T P x <= bound`, for a positive definite
/// rational form `P`, optionally restricted to the box `|x_i| <= box_bound`.
///
/// Fincke-Pohst enumeration over the quadratic completion of `P`. Returns
/// `None` when `P` is not positive definite.
pub fn ellipsoid_points(
    p: &RatMatrix,
    bound: &BigRational,
    box_bound: Option<i64>,
) -> Option<Vec<Vec<i64>>> {
    let n = p.len();
    let q = quadratic_completion(p)?;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    if n == 0 {
        if !bound.is_negative() {
            out.push(Vec::new());
        }
        return Some(out);
    }
    descend(&q, n - 1, bound.clone(), &mut x, box_bound, &mut out);
    Some(out)
}

/// Cohen's quadratic completion: `x^T P x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2`.
fn quadratic_completion(p: &RatMatrix) -> Option<RatMatrix> {
    let n = p.len();
    let mut q = p.clone();
    for i in 0..n {
        if !q[i][i].is_positive() {
            return None;
        }
        for j in i + 1..n {
            q[j][i] = q[i][j].clone();
            q[i][j] = &q[i][j] / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let v = &q[k][i] * &q[i][l];
                q[k][l] -= v;
            }
        }
    }
    Some(q)
}

fn descend(
    q: &RatMatrix,
    i: usize,
    remaining: BigRational,
    x: &mut Vec<i64>,
    box_bound: Option<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let n = q.len();
    let mut shift = BigRational::zero();
    for j in i + 1..n {
        shift += &q[i][j] * BigRational::from_integer(x[j].into());
    }
    let qii = &q[i][i];
    let c = -shift.to_f64().unwrap_or(0.0);
    let r = (remaining.to_f64().unwrap_or(f64::MAX) / qii.to_f64().unwrap_or(1.0))
        .max(0.0)
        .sqrt();
    let mut lo = (c - r).floor() as i64 - 1;
    let mut hi = (c + r).ceil() as i64 + 1;
    if let Some(b) = box_bound {
        lo = lo.max(-b);
        hi = hi.min(b);
    }
    for v in lo..=hi {
        let t = BigRational::from_integer(v.into()) + &shift;
        let used = qii * &t * &t;
        if used > remaining {
            continue;
        }
        x[i] = v;
        let rest = &remaining - used;
        if i == 0 {
            out.push(x.clone());
        } else {
            descend(q, i - 1, rest, x, box_bound, out);
        }
    }
    x[i] = 0;
}
