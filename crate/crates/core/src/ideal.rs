//! Quadratic binomials in the toric ideal of a tree model, written in
//! socket coordinates `x_{b1…bL}`.
//!
//! Only degree-2 relations are produced. Whether they generate the whole
//! ideal is not decided here.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::lattice::{polytope_of, PolytopeError, SubcubePolytope};
use crate::tree::Tree;

/// `Π x_{left} = Π x_{right}` for multisets of lattice points with equal
/// sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BinomialRelation {
    pub left: Vec<Vec<i64>>,
    pub right: Vec<Vec<i64>>,
}

fn sum(points: &[Vec<i64>]) -> Vec<i64> {
    let d = points.first().map_or(0, Vec::len);
    (0..d).map(|i| points.iter().map(|p| p[i]).sum()).collect()
}

impl BinomialRelation {
    pub fn degree(&self) -> usize {
        self.left.len()
    }

    /// Same degree on both sides and equal point sums.
    pub fn is_balanced(&self) -> bool {
        self.left.len() == self.right.len() && sum(&self.left) == sum(&self.right)
    }

    /// No point appears on both sides.
    pub fn is_primitive(&self) -> bool {
        self.left.iter().all(|u| !self.right.contains(u))
    }

    /// Copy with one coordinate of one left-hand point flipped between 0
    /// and 1; used as a negative control.
    pub fn with_flipped_exponent(&self, point: usize, coord: usize) -> BinomialRelation {
        let mut r = self.clone();
        r.left[point][coord] = 1 - r.left[point][coord];
        r
    }

    /// `Σ u[e]` over each side, for the coordinate `e`.
    pub fn weights(&self, e: usize) -> (i64, i64) {
        (
            self.left.iter().map(|u| u[e]).sum(),
            self.right.iter().map(|u| u[e]).sum(),
        )
    }
}

/// All relations `u1 + u2 = w1 + w2` between pairs of distinct vertices,
/// found by bucketing pairwise sums. Each bucket of `k` pairs gives
/// `k(k-1)/2` relations; output is sorted.
pub fn quadratic_relations(p: &SubcubePolytope) -> Vec<BinomialRelation> {
    let v = &p.vertices;
    let mut buckets: HashMap<Vec<i64>, Vec<(usize, usize)>> = HashMap::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            buckets.entry(sum(&[v[i].clone(), v[j].clone()])).or_default().push((i, j));
        }
    }
    let mut out = Vec::new();
    for pairs in buckets.values() {
        for a in 0..pairs.len() {
            for b in a + 1..pairs.len() {
                let left = vec![v[pairs[a].0].clone(), v[pairs[a].1].clone()];
                let right = vec![v[pairs[b].0].clone(), v[pairs[b].1].clone()];
                let (left, right) = if left <= right { (left, right) } else { (right, left) };
                out.push(BinomialRelation { left, right });
            }
        }
    }
    out.sort();
    out
}

/// A relation with each point replaced by its socket bitstring.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SocketRelation {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

impl fmt::Display for SocketRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &[String]| {
            s.iter()
                .map(|b| format!("x_{{{b}}}"))
                .collect::<Vec<_>>()
                .join("*")
        };
        write!(f, "{} = {}", side(&self.left), side(&self.right))
    }
}

/// Socket bitstring of a 0/1 vertex: bit `l` is the petiole coordinate of
/// leaf `l`.
pub fn socket_string(t: &Tree, u: &[i64]) -> String {
    (1..=t.leaf_count() as u32)
        .map(|l| if u[t.petiole(l).unwrap()] == 1 { '1' } else { '0' })
        .collect()
}

/// Quadratic relations in socket coordinates: sockets sorted within each
/// monomial, the smaller monomial on the left, relations sorted.
pub fn socket_relations(t: &Tree) -> Result<Vec<SocketRelation>, PolytopeError> {
    let p = polytope_of(t)?;
    let mut out: Vec<SocketRelation> = quadratic_relations(&p)
        .iter()
        .map(|r| {
            let side = |s: &[Vec<i64>]| {
                let mut v: Vec<String> = s.iter().map(|u| socket_string(t, u)).collect();
                v.sort();
                v
            };
            let (a, b) = (side(&r.left), side(&r.right));
            if a <= b {
                SocketRelation { left: a, right: b }
            } else {
                SocketRelation { left: b, right: a }
            }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// The relations rendered as `x_{…}*x_{…} = x_{…}*x_{…}`.
pub fn socket_equations(t: &Tree) -> Result<Vec<String>, PolytopeError> {
    Ok(socket_relations(t)?.iter().map(ToString::to_string).collect())
}

fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num: i64 = rng.random_range(1..=10_000);
    let den: i64 = rng.random_range(1..=10_000);
    BigRational::new(num.into(), den.into())
}

fn monomial(z: &[BigRational], u: &[i64]) -> BigRational {
    z.iter().zip(u).fold(BigRational::one(), |acc, (zi, &k)| {
        acc * num_traits::pow(zi.clone(), k as usize)
    })
}

/// Evaluate every relation on random nonzero rational edge parameters
/// `z_e`, with `x_u = Π z_e^{u_e}`; true iff all vanish in every trial.
pub fn vanishing_check(relations: &[BinomialRelation], trials: usize, seed: u64) -> bool {
    let Some(dim) = relations.first().and_then(|r| r.left.first()).map(Vec::len) else {
        return true;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).all(|_| {
        let z: Vec<BigRational> = (0..dim).map(|_| random_rational(&mut rng)).collect();
        relations.iter().all(|r| {
            let side = |s: &[Vec<i64>]| s.iter().fold(BigRational::one(), |a, u| a * monomial(&z, u));
            side(&r.left) == side(&r.right)
        })
    })
}

/// Whether every relation has equal weight on both sides under each
/// leaf's petiole coordinate.
pub fn leaf_weights_balanced(t: &Tree, relations: &[BinomialRelation]) -> bool {
    (1..=t.leaf_count() as u32).all(|l| {
        let e = t.petiole(l).unwrap();
        relations.iter().all(|r| {
            let (a, b) = r.weights(e);
            a == b
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{parse_tree, snowflake, star};

    #[test]
    fn four_leaf_equations() {
        let t = parse_tree("((1,2),(3,4));").unwrap();
        assert_eq!(
            socket_equations(&t).unwrap(),
            vec![
                "x_{0000}*x_{1111} = x_{0011}*x_{1100}",
                "x_{0101}*x_{1010} = x_{0110}*x_{1001}",
            ]
        );
    }

    #[test]
    fn tetrahedron_has_no_quadrics() {
        let t = star(3).unwrap();
        assert!(socket_equations(&t).unwrap().is_empty());
    }

    #[test]
    fn relations_vanish_and_corruption_is_caught() {
        let t = snowflake();
        let rels = quadratic_relations(&polytope_of(&t).unwrap());
        assert!(!rels.is_empty());
        assert!(rels.iter().all(|r| r.is_balanced() && r.is_primitive() && r.degree() == 2));
        assert!(vanishing_check(&rels, 5, 1));
        assert!(leaf_weights_balanced(&t, &rels));
        let bad = vec![rels[0].with_flipped_exponent(0, 0)];
        assert!(!vanishing_check(&bad, 5, 1));
    }
}
