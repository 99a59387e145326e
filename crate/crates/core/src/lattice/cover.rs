//! Unimodular covers of fiber products of simplices, and point location
//! in the polytope of a tree viewed as an iterated fiber product of
//! tetrahedra.
//!
//! Locating a point matches the barycentric weights of the two factors
//! with the north-west-corner rule, separately on each level of the
//! gluing form. When two partial sums coincide the matching is not
//! unique; the point is then pushed slightly towards a generic point of
//! the polytope and located again.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use super::linalg::{dot, rational};
use super::polytope::polytope_of;
use crate::tree::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("point lies outside the polytope")]
    OutsidePolytope,
    #[error("tree is not 3-valent or has no inner node")]
    NotTrivalent,
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("form takes a value outside [0, 1] on a simplex vertex")]
    FormOutOfRange,
    #[error("no perturbation separated the partial sums")]
    Degenerate,
}

/// Two partial sums coincided while matching weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Tie;

/// North-west-corner matching of two weight vectors with equal totals.
/// Returns `(i, j, c_ij)` along the staircase.
fn staircase(
    a: &[BigRational],
    b: &[BigRational],
) -> Result<Vec<(usize, usize, BigRational)>, Tie> {
    if a.is_empty() || b.is_empty() {
        return if a.iter().chain(b).all(Zero::is_zero) {
            Ok(Vec::new())
        } else {
            Err(Tie)
        };
    }
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (a[0].clone(), b[0].clone());
    let mut out = Vec::with_capacity(a.len() + b.len() - 1);
    loop {
        let c = if ra < rb { ra.clone() } else { rb.clone() };
        if c.is_zero() {
            return Err(Tie);
        }
        out.push((i, j, c));
        let (last_i, last_j) = (i + 1 == a.len(), j + 1 == b.len());
        if last_i && last_j {
            return Ok(out);
        }
        if ra == rb || (ra < rb && last_i) || (rb < ra && last_j) {
            return Err(Tie);
        }
        if ra < rb {
            rb -= &ra;
            i += 1;
            ra = a[i].clone();
        } else {
            ra -= &rb;
            j += 1;
            rb = b[j].clone();
        }
    }
}

/// Every staircase through an `m × k` grid, as lists of cells.
fn all_staircases(m: usize, k: usize) -> Vec<Vec<(usize, usize)>> {
    if m == 0 || k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut path = vec![(0, 0)];
    fn go(m: usize, k: usize, path: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let (i, j) = *path.last().unwrap();
        if i + 1 == m && j + 1 == k {
            out.push(path.clone());
            return;
        }
        if i + 1 < m {
            path.push((i + 1, j));
            go(m, k, path, out);
            path.pop();
        }
        if j + 1 < k {
            path.push((i, j + 1));
            go(m, k, path, out);
            path.pop();
        }
    }
    go(m, k, &mut path, &mut out);
    out
}

/// A simplex of a cover together with the barycentric coordinates of the
/// queried point in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Located {
    pub vertices: Vec<Vec<i64>>,
    #[serde(serialize_with = "ser_rationals")]
    pub weights: Vec<BigRational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Barycentric coordinates of `x` in a full-dimensional simplex of its
/// affine span, or `None` if `x` is off the span or the simplex is flat.
pub fn barycentric(vertices: &[Vec<i64>], x: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = vertices.len();
    let d = x.len();
    // least-squares free: pick k independent equations among d + 1
    let mut rows: Vec<Vec<BigRational>> = (0..d)
        .map(|r| vertices.iter().map(|v| rational(v[r])).collect())
        .collect();
    let mut rhs: Vec<BigRational> = x.to_vec();
    rows.push(vec![BigRational::one(); k]);
    rhs.push(BigRational::one());
    // row-reduce the augmented system to find a consistent solution
    let mut m: Vec<Vec<BigRational>> = rows
        .into_iter()
        .zip(rhs)
        .map(|(mut r, b)| {
            r.push(b);
            r
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let p = (r..m.len()).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for col in 0..=k {
                    let t = &f * &m[r][col];
                    m[i][col] -= t;
                }
            }
        }
        pivot_rows.push(r);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some(pivot_rows.iter().map(|&i| m[i][k].clone()).collect())
}

fn contains(vertices: &[Vec<i64>], x: &[BigRational]) -> Option<Vec<BigRational>> {
    barycentric(vertices, x).filter(|w| w.iter().all(|c| !c.is_negative()))
}

fn level(form: &[i64], v: &[i64]) -> Result<usize, CoverError> {
    match dot(form, v) {
        0 => Ok(0),
        1 => Ok(1),
        _ => Err(CoverError::FormOutOfRange),
    }
}

/// Weights `ε^k / Σ ε^j` for `count` items.
fn generic_weights(count: usize, eps: &BigRational) -> Vec<BigRational> {
    let mut w = Vec::with_capacity(count);
    let mut p = BigRational::one();
    for _ in 0..count {
        w.push(p.clone());
        p = &p * eps;
    }
    let total = w.iter().fold(BigRational::zero(), |a, b| a + b);
    w.iter().map(|x| x / &total).collect()
}

fn perturbed(x: &[BigRational], points: &[Vec<i64>], eps: &BigRational) -> Vec<BigRational> {
    let w = generic_weights(points.len(), eps);
    let keep = BigRational::one() - eps;
    (0..x.len())
        .map(|r| {
            let g = points
                .iter()
                .zip(&w)
                .fold(BigRational::zero(), |a, (p, wi)| a + wi * rational(p[r]));
            &x[r] * &keep + eps * g
        })
        .collect()
}

/// Locate `x` with `attempt`, perturbing towards a generic combination of
/// `points` whenever `attempt` reports a tie.
fn locate_with_perturbation(
    x: &[BigRational],
    points: &[Vec<i64>],
    attempt: impl Fn(&[BigRational]) -> Result<Result<Vec<Vec<i64>>, Tie>, CoverError>,
) -> Result<Located, CoverError> {
    let finish = |vertices: Vec<Vec<i64>>| -> Option<Located> {
        contains(&vertices, x).map(|weights| Located { vertices, weights })
    };
    if let Ok(vs) = attempt(x)? {
        if let Some(l) = finish(vs) {
            return Ok(l);
        }
    }
    for m in 1..=96u32 {
        let eps = BigRational::new(BigInt::one(), BigInt::from(2).pow(m));
        let y = perturbed(x, points, &eps);
        if let Ok(vs) = attempt(&y)? {
            if let Some(l) = finish(vs) {
                return Ok(l);
            }
        }
    }
    Err(CoverError::Degenerate)
}

/// Unimodular cover of the fiber product of two simplices glued along
/// forms with values in `{0, 1}` on their vertices. Zero forms give the
/// plain product. Coordinates of the product are concatenated.
#[derive(Clone, Debug)]
pub struct SimplexFiberProduct {
    left: Vec<Vec<i64>>,
    left_form: Vec<i64>,
    right: Vec<Vec<i64>>,
    right_form: Vec<i64>,
}

impl SimplexFiberProduct {
    pub fn new(
        left: Vec<Vec<i64>>,
        left_form: Vec<i64>,
        right: Vec<Vec<i64>>,
        right_form: Vec<i64>,
    ) -> Result<Self, CoverError> {
        for v in &left {
            level(&left_form, v)?;
        }
        for v in &right {
            level(&right_form, v)?;
        }
        Ok(SimplexFiberProduct {
            left,
            left_form,
            right,
            right_form,
        })
    }

    fn dims(&self) -> (usize, usize) {
        (self.left[0].len(), self.right[0].len())
    }

    /// Vertices of the fiber product: pairs on the same level.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for p in &self.left {
            for q in &self.right {
                if dot(&self.left_form, p) == dot(&self.right_form, q) {
                    out.push([p.as_slice(), q.as_slice()].concat());
                }
            }
        }
        out
    }

    fn classes(&self) -> [[Vec<usize>; 2]; 2] {
        let split = |vs: &[Vec<i64>], f: &[i64]| {
            let mut c = [Vec::new(), Vec::new()];
            for (i, v) in vs.iter().enumerate() {
                c[level(f, v).unwrap()].push(i);
            }
            c
        };
        [split(&self.left, &self.left_form), split(&self.right, &self.right_form)]
    }

    fn attempt(&self, x: &[BigRational]) -> Result<Result<Vec<Vec<i64>>, Tie>, CoverError> {
        let (dl, dr) = self.dims();
        let wl = contains(&self.left, &x[..dl]).ok_or(CoverError::OutsidePolytope)?;
        let wr = contains(&self.right, &x[dl..dl + dr]).ok_or(CoverError::OutsidePolytope)?;
        let [cl, cr] = self.classes();
        let mut vertices = Vec::new();
        for lvl in 0..2 {
            let a: Vec<BigRational> = cl[lvl].iter().map(|&i| wl[i].clone()).collect();
            let b: Vec<BigRational> = cr[lvl].iter().map(|&j| wr[j].clone()).collect();
            let sa = a.iter().fold(BigRational::zero(), |s, v| s + v);
            let sb = b.iter().fold(BigRational::zero(), |s, v| s + v);
            if sa != sb {
                return Err(CoverError::OutsidePolytope);
            }
            match staircase(&a, &b) {
                Ok(cells) => {
                    for (i, j, _) in cells {
                        let p = &self.left[cl[lvl][i]];
                        let q = &self.right[cr[lvl][j]];
                        vertices.push([p.as_slice(), q.as_slice()].concat());
                    }
                }
                Err(t) => return Ok(Err(t)),
            }
        }
        Ok(Ok(vertices))
    }

    pub fn locate(&self, x: &[BigRational]) -> Result<Located, CoverError> {
        let (dl, dr) = self.dims();
        if x.len() != dl + dr {
            return Err(CoverError::DimensionMismatch {
                got: x.len(),
                expected: dl + dr,
            });
        }
        locate_with_perturbation(x, &self.vertices(), |y| self.attempt(y))
    }

    /// All simplices of the staircase triangulation.
    pub fn simplices(&self) -> Vec<Vec<Vec<i64>>> {
        let [cl, cr] = self.classes();
        let per_level: Vec<Vec<Vec<Vec<i64>>>> = (0..2)
            .map(|lvl| {
                all_staircases(cl[lvl].len(), cr[lvl].len())
                    .into_iter()
                    .map(|cells| {
                        cells
                            .into_iter()
                            .map(|(i, j)| {
                                [self.left[cl[lvl][i]].as_slice(), self.right[cr[lvl][j]].as_slice()]
                                    .concat()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for a in &per_level[0] {
            for b in &per_level[1] {
                out.push([a.clone(), b.clone()].concat());
            }
        }
        out
    }
}

/// One tetrahedron of the iterated fiber product: an inner node and its
/// edges, the first being the one shared with the part built so far.
#[derive(Clone, Debug)]
struct Step {
    edges: [usize; 3],
}

/// Unimodular cover of the polytope of a 3-valent tree.
#[derive(Clone, Debug)]
pub struct TreeCover {
    edge_count: usize,
    steps: Vec<Step>,
    vertices: Vec<Vec<i64>>,
}

/// Tetrahedron weights of the point with coordinates `x` on the edges of a
/// node: vertices `0`, `e1+e2`, `e0+e2`, `e0+e1`.
fn tetra_weights(x: [&BigRational; 3]) -> [BigRational; 4] {
    let half = BigRational::new(1.into(), 2.into());
    let [a, b, c] = x;
    [
        BigRational::one() - (a + b + c) * &half,
        (b + c - a) * &half,
        (a + c - b) * &half,
        (a + b - c) * &half,
    ]
}

const TETRA: [[i64; 3]; 4] = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]];

impl TreeCover {
    pub fn new(t: &Tree) -> Result<TreeCover, CoverError> {
        if t.inner_nodes().is_empty() || !t.is_trivalent() {
            return Err(CoverError::NotTrivalent);
        }
        let root = t.edge(0).1;
        let mut steps = Vec::new();
        let re = t.incident_edges(root);
        steps.push(Step {
            edges: [re[0], re[1], re[2]],
        });
        let mut seen = vec![false; t.vertex_count()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &e in t.incident_edges(x) {
                let (a, b) = t.edge(e);
                let y = if a == x { b } else { a };
                if t.is_leaf(y) || seen[y] {
                    continue;
                }
                seen[y] = true;
                queue.push_back(y);
                let rest: Vec<usize> = t.incident_edges(y).iter().copied().filter(|&f| f != e).collect();
                steps.push(Step {
                    edges: [e, rest[0], rest[1]],
                });
            }
        }
        let vertices = polytope_of(t).map_err(|_| CoverError::NotTrivalent)?.vertices;
        Ok(TreeCover {
            edge_count: t.edge_count(),
            steps,
            vertices,
        })
    }

    /// Determinant of a unimodular simplex of the normalized lattice,
    /// measured in the full lattice: `2^n` for `n` inner nodes.
    pub fn unit_det(&self) -> BigInt {
        BigInt::from(2).pow(self.steps.len() as u32)
    }

    fn attempt(&self, x: &[BigRational]) -> Result<Result<Vec<Vec<i64>>, Tie>, CoverError> {
        let d = self.edge_count;
        let root = &self.steps[0].edges;
        let w = tetra_weights([&x[root[0]], &x[root[1]], &x[root[2]]]);
        if w.iter().any(Signed::is_negative) {
            return Err(CoverError::OutsidePolytope);
        }
        let mut simplex: Vec<(Vec<i64>, BigRational)> = TETRA
            .iter()
            .zip(w)
            .map(|(t, wi)| {
                let mut v = vec![0; d];
                for k in 0..3 {
                    v[root[k]] = t[k];
                }
                (v, wi)
            })
            .collect();
        for step in &self.steps[1..] {
            let e = &step.edges;
            let w = tetra_weights([&x[e[0]], &x[e[1]], &x[e[2]]]);
            if w.iter().any(Signed::is_negative) {
                return Err(CoverError::OutsidePolytope);
            }
            let mut next = Vec::with_capacity(simplex.len() + 1);
            for lvl in 0..2 {
                let ours: Vec<&(Vec<i64>, BigRational)> =
                    simplex.iter().filter(|(v, _)| v[e[0]] == lvl as i64).collect();
                let a: Vec<BigRational> = ours.iter().map(|(_, c)| c.clone()).collect();
                let tet = [2 * lvl, 2 * lvl + 1];
                let b = [w[tet[0]].clone(), w[tet[1]].clone()];
                let cells = match staircase(&a, &b) {
                    Ok(c) => c,
                    Err(t) => return Ok(Err(t)),
                };
                for (i, j, c) in cells {
                    let mut v = ours[i].0.clone();
                    let corner = TETRA[tet[j]];
                    v[e[1]] = corner[1];
                    v[e[2]] = corner[2];
                    next.push((v, c));
                }
            }
            simplex = next;
        }
        Ok(Ok(simplex.into_iter().map(|(v, _)| v).collect()))
    }

    /// Point query: a unimodular simplex of the cover containing `x`.
    pub fn locate(&self, x: &[BigRational]) -> Result<Located, CoverError> {
        if x.len() != self.edge_count {
            return Err(CoverError::DimensionMismatch {
                got: x.len(),
                expected: self.edge_count,
            });
        }
        locate_with_perturbation(x, &self.vertices, |y| self.attempt(y))
    }

    /// Sampling mode: locate random rational convex combinations of the
    /// vertices.
    pub fn sample<R: Rng>(&self, count: usize, rng: &mut R) -> Result<Vec<Located>, CoverError> {
        (0..count)
            .map(|_| {
                let w: Vec<i64> = self.vertices.iter().map(|_| rng.random_range(0..5)).collect();
                let total: i64 = w.iter().sum::<i64>().max(1);
                let x: Vec<BigRational> = (0..self.edge_count)
                    .map(|r| {
                        let s: i64 = self.vertices.iter().zip(&w).map(|(v, wi)| v[r] * wi).sum();
                        BigRational::new(s.into(), total.into())
                    })
                    .collect();
                self.locate(&x)
            })
            .collect()
    }

    /// Every simplex of the cover.
    pub fn simplices(&self) -> Vec<Vec<Vec<i64>>> {
        let d = self.edge_count;
        let root = &self.steps[0].edges;
        let base: Vec<Vec<i64>> = TETRA
            .iter()
            .map(|t| {
                let mut v = vec![0; d];
                for k in 0..3 {
                    v[root[k]] = t[k];
                }
                v
            })
            .collect();
        let mut current = vec![base];
        for step in &self.steps[1..] {
            let e = &step.edges;
            let mut next = Vec::new();
            for s in &current {
                let classes: Vec<Vec<&Vec<i64>>> = (0..2)
                    .map(|lvl| s.iter().filter(|v| v[e[0]] == lvl).collect())
                    .collect();
                let per_level: Vec<Vec<Vec<Vec<i64>>>> = (0..2)
                    .map(|lvl| {
                        all_staircases(classes[lvl].len(), 2)
                            .into_iter()
                            .map(|cells| {
                                cells
                                    .into_iter()
                                    .map(|(i, j)| {
                                        let mut v = classes[lvl][i].clone();
                                        let corner = TETRA[2 * lvl + j];
                                        v[e[1]] = corner[1];
                                        v[e[2]] = corner[2];
                                        v
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                for a in &per_level[0] {
                    for b in &per_level[1] {
                        next.push([a.clone(), b.clone()].concat());
                    }
                }
            }
            current = next;
        }
        current
    }
}

/// `|det(v_i - v_0)|` for a simplex given by its vertices.
pub fn simplex_det(vertices: &[Vec<i64>]) -> BigInt {
    super::linalg::simplex_volume(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{caterpillar, snowflake, star};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn unit_simplex(d: usize) -> Vec<Vec<i64>> {
        let mut v = vec![vec![0; d]];
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            v.push(e);
        }
        v
    }

    #[test]
    fn staircase_matches_masses() {
        let a = vec![q(1, 2), q(1, 3), q(1, 6)];
        let b = vec![q(1, 4), q(3, 4)];
        let cells = staircase(&a, &b).unwrap();
        assert_eq!(cells.len(), 4);
        for i in 0..3 {
            let s = cells.iter().filter(|c| c.0 == i).fold(BigRational::zero(), |s, c| s + &c.2);
            assert_eq!(s, a[i]);
        }
        assert_eq!(staircase(&[q(1, 2), q(1, 2)], &[q(1, 2), q(1, 2)]), Err(Tie));
    }

    #[test]
    fn square_centre_needs_perturbation() {
        let seg = unit_simplex(1);
        let fp = SimplexFiberProduct::new(seg.clone(), vec![0], seg, vec![0]).unwrap();
        let x = vec![q(1, 2), q(1, 2)];
        let (d, r) = (2, fp.attempt(&x).unwrap());
        assert!(r.is_err());
        let l = fp.locate(&x).unwrap();
        assert_eq!(l.vertices.len(), d + 1);
        assert_eq!(simplex_det(&l.vertices), BigInt::one());
        assert_eq!(fp.simplices().len(), 2);
    }

    #[test]
    fn product_of_tetrahedra() {
        let t = unit_simplex(3);
        let fp = SimplexFiberProduct::new(t.clone(), vec![0; 3], t, vec![0; 3]).unwrap();
        let x = vec![q(1, 7), q(2, 9), q(1, 5), q(3, 11), q(1, 13), q(2, 7)];
        let l = fp.locate(&x).unwrap();
        assert_eq!(l.vertices.len(), 7);
        assert_eq!(simplex_det(&l.vertices), BigInt::one());
        // 6 choose 3 staircases
        assert_eq!(fp.simplices().len(), 20);
    }

    #[test]
    fn outside_is_rejected() {
        let c = TreeCover::new(&star(3).unwrap()).unwrap();
        assert_eq!(c.locate(&[q(1, 1), q(1, 1), q(1, 1)]), Err(CoverError::OutsidePolytope));
    }

    #[test]
    fn tree_cover_simplex_counts_match_normalized_volume() {
        for (t, vol) in [
            (star(3).unwrap(), 1),
            (caterpillar(1).unwrap(), 4),
            (snowflake(), 496),
            (caterpillar(3).unwrap(), 496),
        ] {
            let c = TreeCover::new(&t).unwrap();
            let s = c.simplices();
            assert_eq!(s.len(), vol);
            for simplex in &s {
                assert_eq!(simplex_det(simplex), c.unit_det());
            }
        }
    }

    #[test]
    fn located_simplices_contain_the_point() {
        let t = snowflake();
        let c = TreeCover::new(&t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for l in c.sample(40, &mut rng).unwrap() {
            assert_eq!(simplex_det(&l.vertices), c.unit_det());
            assert!(l.weights.iter().all(|w| !w.is_negative()));
        }
        // a vertex of the polytope forces a tie
        let x: Vec<BigRational> = c.vertices[3].iter().map(|&v| rational(v)).collect();
        assert!(c.locate(&x).is_ok());
    }
}
