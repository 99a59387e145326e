//! Double description: extreme rays of a pointed cone `{x : A x >= 0}`,
//! and vertices of bounded polyhedra by homogenisation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use super::linalg::{rank, rational, solve};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DdError {
    #[error("cone is not pointed: constraint matrix has rank {rank} < {dim}")]
    NotPointed { rank: usize, dim: usize },
    #[error("polyhedron is unbounded")]
    Unbounded,
}

/// Growable bitset over constraint indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone, Debug)]
struct Ray {
    v: Vec<i128>,
    zero: Bits,
}

fn eval(a: &[i64], v: &[i128]) -> i128 {
    a.iter().zip(v).map(|(&x, &y)| x as i128 * y).sum()
}

fn normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

/// Extreme rays of `{x ∈ R^d : a_i · x >= 0}`, as primitive integer vectors.
pub fn extreme_rays(rows: &[Vec<i64>], d: usize) -> Result<Vec<Vec<i128>>, DdError> {
    let r = rank(rows);
    if r < d {
        return Err(DdError::NotPointed { rank: r, dim: d });
    }
    // greedily pick d independent rows
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<i64>> = basis.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if rank(&trial) == trial.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    // initial rays: columns of the inverse of the basis rows
    let a: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|&i| rows[i].iter().map(|&x| rational(x)).collect())
        .collect();
    let mut rays = Vec::with_capacity(d);
    for k in 0..d {
        let mut e = vec![BigRational::zero(); d];
        e[k] = rational(1);
        let col = solve(&a, &e).expect("basis rows are independent");
        let lcm = col.iter().fold(BigInt::from(1), |l, x| l.lcm(x.denom()));
        let mut v: Vec<i128> = col
            .iter()
            .map(|x| i128::try_from((x * &lcm).to_integer()).expect("ray entry overflows i128"))
            .collect();
        normalize(&mut v);
        let mut zero = Bits::new(rows.len());
        for (j, &i) in basis.iter().enumerate() {
            if j != k {
                zero.set(i);
            }
        }
        rays.push(Ray { v, zero });
    }

    let in_basis: Vec<bool> = (0..rows.len()).map(|i| basis.contains(&i)).collect();
    for (i, row) in rows.iter().enumerate() {
        if in_basis[i] {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| eval(row, &r.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (r, &s) in rays.iter().zip(&vals) {
            if s >= 0 {
                let mut r = r.clone();
                if s == 0 {
                    r.zero.set(i);
                }
                next.push(r);
            }
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < 0).collect();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zero.and(&rays[q].zero);
                if common.count() + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !common.is_subset_of(&r.zero));
                if !adjacent {
                    continue;
                }
                let (sp, sq) = (vals[p], -vals[q]);
                let mut v: Vec<i128> = rays[p]
                    .v
                    .iter()
                    .zip(&rays[q].v)
                    .map(|(&x, &y)| sq * x + sp * y)
                    .collect();
                normalize(&mut v);
                let mut zero = common;
                zero.set(i);
                next.push(Ray { v, zero });
            }
        }
        rays = next;
    }
    let mut out: Vec<Vec<i128>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    Ok(out)
}

/// Vertices of the bounded polyhedron `{x : a_i · x >= b_i}`, sorted.
pub fn polytope_vertices(a: &[Vec<i64>], b: &[i64]) -> Result<Vec<Vec<BigRational>>, DdError> {
    let d = a.first().map_or(0, Vec::len);
    // homogenise: a_i · x - b_i t >= 0, t >= 0
    let mut rows: Vec<Vec<i64>> = a
        .iter()
        .zip(b)
        .map(|(ai, &bi)| {
            let mut r = ai.clone();
            r.push(-bi);
            r
        })
        .collect();
    let mut t = vec![0; d + 1];
    t[d] = 1;
    rows.push(t);
    let rays = extreme_rays(&rows, d + 1)?;
    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let t = r[d];
        if t.is_zero() {
            return Err(DdError::Unbounded);
        }
        let t = BigInt::from(t);
        out.push(
            r[..d]
                .iter()
                .map(|&x| BigRational::new(BigInt::from(x), t.clone()))
                .collect(),
        );
    }
    out.sort();
    Ok(out)
}

/// Integer vector of a rational vector whose entries are all integral.
pub fn as_integer(v: &[BigRational]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                i64::try_from(x.to_integer()).ok()
            } else {
                None
            }
        })
        .collect()
}

/// Sign of a rational, for callers that only need comparisons.
pub fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square() {
        let a = vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
        let b = vec![0, 0, -1, -1];
        let v = polytope_vertices(&a, &b).unwrap();
        let ints: Vec<Vec<i64>> = v.iter().map(|x| as_integer(x).unwrap()).collect();
        assert_eq!(ints, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn cross_polytope_from_cube_facets() {
        // |x| + |y| + |z| <= 1 has 8 facets and 6 vertices
        let mut a = Vec::new();
        for s in 0..8 {
            a.push((0..3).map(|i| if s >> i & 1 == 1 { 1 } else { -1 }).collect());
        }
        let b = vec![-1; 8];
        let v = polytope_vertices(&a, &b).unwrap();
        assert_eq!(v.len(), 6);
    }

    #[test]
    fn unbounded_is_reported() {
        assert!(polytope_vertices(&[vec![1, 0], vec![0, 1]], &[0, 0]).is_err());
    }

    #[test]
    fn rational_vertices() {
        // 2x >= 1, -2x >= -3 on a line: vertices 1/2 and 3/2
        let v = polytope_vertices(&[vec![2], vec![-2]], &[1, -3]).unwrap();
        assert_eq!(v[0][0], BigRational::new(1.into(), 2.into()));
        assert_eq!(v[1][0], BigRational::new(3.into(), 2.into()));
        assert_eq!(sign(&v[0][0]), 1);
    }
}
