//! Unimodular divisions of vertex links of the dual polytope, and the
//! Gorenstein/terminality certificates built from them.
//!
//! For a vertex `u` of Δ, the face `u^⊥` of the dual polytope has three
//! points per inner node. Walking the inner nodes outwards from a root,
//! each new node contributes one point `Z` to every simplex and splits it
//! in two along the remaining pair `X`, `Y`, which satisfy
//! `X + Y = ±2 e_0*` for the edge `e_0` towards the root.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use super::dual::{dual_points, recentred, vertex_face};
use super::linalg::{affine_rank, det, dot, kernel, rational, solve};
use super::polytope::{polytope_of, PolytopeError};
use crate::tree::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisionError {
    #[error("{0:?} is not a vertex of the polytope")]
    NotAVertex(Vec<i64>),
    #[error("vertex {0} is not an inner node")]
    BadRoot(usize),
    #[error("tree has no inner node")]
    NoInnerNode,
    #[error("tree is not 3-valent")]
    NotTrivalent,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Simplices (each listed with the apex `0`) whose union is the pyramid
/// over `u^⊥` with apex `0`. Coordinates are doubled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexDivision {
    pub vertex: Vec<i64>,
    pub root: usize,
    pub simplices: Vec<Vec<Vec<i64>>>,
}

fn check_tree(t: &Tree) -> Result<(), DivisionError> {
    if t.inner_nodes().is_empty() {
        return Err(DivisionError::NoInnerNode);
    }
    if !t.is_trivalent() {
        return Err(DivisionError::NotTrivalent);
    }
    Ok(())
}

/// Default root: the inner node next to leaf 1.
pub fn default_root(t: &Tree) -> usize {
    t.edge(0).1
}

pub fn vertex_link_division(
    t: &Tree,
    u: &[i64],
    root: Option<usize>,
) -> Result<SimplexDivision, DivisionError> {
    check_tree(t)?;
    let p = polytope_of(t)?;
    if !p.vertices.iter().any(|v| v == u) {
        return Err(DivisionError::NotAVertex(u.to_vec()));
    }
    let root = root.unwrap_or_else(|| default_root(t));
    if root >= t.vertex_count() || t.is_leaf(root) {
        return Err(DivisionError::BadRoot(root));
    }

    let face = vertex_face(t, u);
    let points_of = |v: usize| -> Vec<Vec<i64>> {
        face.iter()
            .filter(|p| p.node == v)
            .map(|p| p.coords.clone())
            .collect()
    };

    let len = t.edge_count();
    let mut simplices: Vec<Vec<Vec<i64>>> = {
        let mut s = vec![vec![0; len]];
        s.extend(points_of(root));
        vec![s]
    };
    // breadth-first over inner nodes, remembering the edge we came from
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
            let pts = points_of(y);
            let (xi, yi, zi) = split_pair(&pts, e);
            let mut next = Vec::with_capacity(simplices.len() * 2);
            for s in simplices {
                for pick in [xi, yi] {
                    let mut grown = s.clone();
                    grown.push(pts[zi].clone());
                    grown.push(pts[pick].clone());
                    next.push(grown);
                }
            }
            simplices = next;
        }
    }
    for s in simplices.iter_mut() {
        s.sort();
    }
    simplices.sort();
    Ok(SimplexDivision {
        vertex: u.to_vec(),
        root,
        simplices,
    })
}

/// Indices `(x, y, z)` of the three points of a node such that
/// `pts[x] + pts[y]` is `±2` times the basis vector of `edge`.
fn split_pair(pts: &[Vec<i64>], edge: usize) -> (usize, usize, usize) {
    assert_eq!(pts.len(), 3, "a vertex face meets every node in three points");
    for (x, y, z) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let sum: Vec<i64> = pts[x].iter().zip(&pts[y]).map(|(a, b)| a + b).collect();
        let on_edge = sum
            .iter()
            .enumerate()
            .all(|(i, &s)| if i == edge { s.abs() == 2 } else { s == 0 });
        if on_edge {
            return (x, y, z);
        }
    }
    unreachable!("some pair of points sums to twice the parent edge")
}

/// Outcome of checking a division against an independent description of
/// the pyramid it should tile.
#[derive(Clone, Debug, Serialize)]
pub struct DivisionReport {
    pub simplices: usize,
    pub expected_simplices: usize,
    /// Every simplex has normalized volume one in the dual lattice.
    pub unimodular: bool,
    /// Every facet is on the boundary of the pyramid or shared by exactly
    /// one other simplex lying on the opposite side.
    pub pseudomanifold: bool,
    /// A generic interior point lies in exactly one simplex.
    pub degree_one: bool,
}

impl DivisionReport {
    pub fn holds(&self) -> bool {
        self.simplices == self.expected_simplices
            && self.unimodular
            && self.pseudomanifold
            && self.degree_one
    }
}

/// Determinant of a simplex of the doubled dual lattice that has volume
/// one: the index of the doubled dual lattice in `Z^E`.
pub fn unimodular_dual_det(t: &Tree) -> BigInt {
    BigInt::from(2).pow((t.edge_count() - t.inner_nodes().len()) as u32)
}

fn barycentric(simplex: &[Vec<i64>], x: &[BigRational]) -> Option<Vec<BigRational>> {
    // simplex[0] is the base vertex; solve x - v0 = sum l_i (v_i - v0)
    let d = x.len();
    let base = &simplex[0];
    let a: Vec<Vec<BigRational>> = (0..d)
        .map(|r| {
            simplex[1..]
                .iter()
                .map(|v| rational(v[r] - base[r]))
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = (0..d).map(|r| &x[r] - rational(base[r])).collect();
    let l = solve(&a, &rhs)?;
    let l0 = l.iter().fold(rational(1), |acc, v| acc - v);
    Some(std::iter::once(l0).chain(l).collect())
}

pub fn check_division(t: &Tree, div: &SimplexDivision) -> DivisionReport {
    let n = t.inner_nodes().len();
    let d = t.edge_count();
    let unit = unimodular_dual_det(t);
    let unimodular = div.simplices.iter().all(|s| {
        let rows: Vec<Vec<i64>> = s
            .iter()
            .filter(|v| v.iter().any(|&x| x != 0))
            .cloned()
            .collect();
        s.len() == d + 1 && rows.len() == d && det(&rows).abs() == unit
    });

    let mut generators: Vec<Vec<i64>> = vec![vec![0; d]];
    generators.extend(vertex_face(t, &div.vertex).into_iter().map(|p| p.coords));

    // facet key -> (simplex, opposite vertex)
    let mut shared: HashMap<Vec<Vec<i64>>, Vec<(usize, usize)>> = HashMap::new();
    for (si, s) in div.simplices.iter().enumerate() {
        for drop in 0..s.len() {
            let mut key = s.clone();
            key.remove(drop);
            shared.entry(key).or_default().push((si, drop));
        }
    }
    let pseudomanifold = unimodular
        && shared.iter().all(|(facet, owners)| {
            let diffs: Vec<Vec<i64>> = facet[1..]
                .iter()
                .map(|v| v.iter().zip(&facet[0]).map(|(a, b)| a - b).collect())
                .collect();
            let normal = &kernel(&diffs, d)[0];
            let level = dot(normal, &facet[0]);
            let side = |x: &[i64]| (dot(normal, x) - level).signum();
            let boundary = {
                let signs: Vec<i64> = generators.iter().map(|g| side(g)).collect();
                signs.iter().all(|&s| s >= 0) || signs.iter().all(|&s| s <= 0)
            };
            match owners.as_slice() {
                [_] => boundary,
                [(a, da), (b, db)] => {
                    let sa = side(&div.simplices[*a][*da]);
                    let sb = side(&div.simplices[*b][*db]);
                    !boundary && sa * sb == -1
                }
                _ => false,
            }
        });

    let degree_one = unimodular && generic_point_degree(&div.simplices) == Some(1);
    DivisionReport {
        simplices: div.simplices.len(),
        expected_simplices: 1 << (n - 1),
        unimodular,
        pseudomanifold,
        degree_one,
    }
}

/// Number of simplices containing a generic point of the first simplex,
/// or `None` if no tried point avoids all facet hyperplanes.
fn generic_point_degree(simplices: &[Vec<Vec<i64>>]) -> Option<usize> {
    let first = simplices.first()?;
    let d = first[0].len();
    for shift in 0..16i64 {
        let weights: Vec<i64> = (0..first.len() as i64).map(|i| 7 + ((i * 13 + shift) % 29)).collect();
        let total: i64 = weights.iter().sum();
        let x: Vec<BigRational> = (0..d)
            .map(|r| {
                let s: i64 = first.iter().zip(&weights).map(|(v, w)| v[r] * w).sum();
                BigRational::new(s.into(), total.into())
            })
            .collect();
        let mut count = 0;
        let mut degenerate = false;
        for s in simplices {
            let l = barycentric(s, &x)?;
            if l.iter().any(Zero::is_zero) {
                degenerate = true;
                break;
            }
            if l.iter().all(|c| c.is_positive()) {
                count += 1;
            }
        }
        if !degenerate {
            return Some(count);
        }
    }
    None
}

/// Per-vertex evidence that the toric model is Gorenstein of index four
/// with terminal singularities.
#[derive(Clone, Debug, Serialize)]
pub struct VertexCertificate {
    pub vertex: Vec<i64>,
    /// Every dual point takes value `>= -1` on `4u - 2σ`.
    pub dual_points_valid: bool,
    /// Number of dual points with value exactly `-1`.
    pub face_points: usize,
    /// Those points span a hyperplane, so they form a facet.
    pub face_is_facet: bool,
    pub division: DivisionReport,
}

impl VertexCertificate {
    pub fn holds(&self, t: &Tree) -> bool {
        self.dual_points_valid
            && self.face_points == 3 * t.inner_nodes().len()
            && self.face_is_facet
            && self.division.holds()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GorensteinReport {
    pub holds: bool,
    pub certificates: Vec<VertexCertificate>,
}

pub fn gorenstein_check(t: &Tree) -> Result<GorensteinReport, DivisionError> {
    check_tree(t)?;
    let p = polytope_of(t)?;
    let duals = dual_points(t);
    let mut certificates = Vec::with_capacity(p.vertices.len());
    for u in &p.vertices {
        let c = recentred(u);
        let values: Vec<i64> = duals.iter().map(|w| dot(&w.coords, &c)).collect();
        let face: Vec<&Vec<i64>> = duals
            .iter()
            .zip(&values)
            .filter(|(_, &v)| v == -1)
            .map(|(w, _)| &w.coords)
            .collect();
        let div = vertex_link_division(t, u, None)?;
        certificates.push(VertexCertificate {
            vertex: u.clone(),
            dual_points_valid: values.iter().all(|&v| v >= -1),
            face_points: face.len(),
            face_is_facet: affine_rank(&face) + 1 == t.edge_count(),
            division: check_division(t, &div),
        });
    }
    let holds = certificates.iter().all(|c| c.holds(t));
    Ok(GorensteinReport {
        holds,
        certificates,
    })
}
