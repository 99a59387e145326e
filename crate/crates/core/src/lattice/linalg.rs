//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn row_gcd(row: &[i128]) -> i128 {
    row.iter().fold(0i128, |g, &x| g.gcd(&x))
}

/// Rank of an integer matrix given by rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    rank_in_place(&mut m)
}

fn rank_in_place(m: &mut [Vec<i128>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[r][c], m[i][c]);
            let g = a.gcd(&b);
            let (fa, fb) = (a / g, b / g);
            for k in c..cols {
                m[i][k] = m[i][k]
                    .checked_mul(fa)
                    .and_then(|x| x.checked_sub(m[r][k].checked_mul(fb)?))
                    .expect("integer overflow in rank computation");
            }
            let g = row_gcd(&m[i]);
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Dimension of the affine hull of a point set (`-1` is not representable,
/// so the empty set reports 0 as well).
pub fn affine_rank<P: AsRef<[i64]>>(points: &[P]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let base = first.as_ref();
    let mut m: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| {
            p.as_ref()
                .iter()
                .zip(base)
                .map(|(&x, &y)| (x - y) as i128)
                .collect()
        })
        .collect();
    rank_in_place(&mut m)
}

/// Exact determinant by fraction-free elimination.
pub fn det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "determinant of a non-square matrix");
            r.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &m[n - 1][n - 1]
    }
}

/// Solve a square system `a x = b` exactly; `None` if `a` is singular.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(p, c);
        let inv = m[c][c].recip();
        for k in c..=n {
            m[c][k] = &m[c][k] * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..=n {
                    let d = &f * &m[c][k];
                    m[i][k] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Integer basis of the right kernel `{x : rows · x = 0}`, each vector
/// primitive.
pub fn kernel(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    kernel_i128(rows, cols).unwrap_or_else(|| kernel_rational(rows, cols))
}

/// Integer Gauss-Jordan elimination with rows kept primitive; `None` on
/// overflow.
fn kernel_i128(rows: &[Vec<i64>], cols: usize) -> Option<Vec<Vec<i64>>> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i == r || m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[r][c], m[i][c]);
            for k in 0..cols {
                m[i][k] = m[i][k].checked_mul(a)?.checked_sub(m[r][k].checked_mul(b)?)?;
            }
            let g = row_gcd(&m[i]);
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let scale = pivots
        .iter()
        .enumerate()
        .try_fold(1i128, |l, (row, &pc)| {
            let p = m[row][pc].abs();
            (l / l.gcd(&p)).checked_mul(p)
        })?;
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0i128; cols];
            v[f] = scale;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -(m[row][f].checked_mul(scale / m[row][pc])?);
            }
            let g = row_gcd(&v);
            v.iter().map(|&x| i64::try_from(x / g).ok()).collect()
        })
        .collect()
}

fn kernel_rational(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for k in 0..cols {
            m[r][k] = &m[r][k] * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let d = &f * &m[r][k];
                    m[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            primitive_integer(&v)
        })
        .collect()
}

/// Scale a rational vector to the primitive integer vector on its ray.
pub fn primitive_integer(v: &[BigRational]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            i64::try_from(y).expect("kernel vector entry exceeds i64")
        })
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn rational(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Absolute value of the determinant of the edge vectors `p_i - p_0`.
pub fn simplex_volume<P: AsRef<[i64]>>(vertices: &[P]) -> BigInt {
    let base = vertices[0].as_ref();
    let rows: Vec<Vec<i64>> = vertices[1..]
        .iter()
        .map(|p| p.as_ref().iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    det(&rows).abs()
}
