//! The dual polytope and the polarity between it and the dilated,
//! recentred polytope `4Δ - 2σ`.
//!
//! Points of the dual lattice are half-integral; they are stored doubled,
//! so `-v/2` becomes `-v` and `v/2 - e*` becomes `v - 2e*`.

use serde::Serialize;

use super::dd::{as_integer, polytope_vertices, DdError};
use super::linalg::dot;
use super::polytope::{polytope_of, PolytopeError};
use crate::tree::Tree;

/// A doubled dual point together with the inner node it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualPoint {
    pub node: usize,
    /// `None` for `-v/2`, `Some(i)` for `v/2 - e_i*` where `e_i` is the
    /// `i`-th incident edge of the node.
    pub edge: Option<usize>,
    pub coords: Vec<i64>,
}

/// The `4n` doubled dual points, four per inner node.
pub fn dual_points(t: &Tree) -> Vec<DualPoint> {
    let len = t.edge_count();
    let mut out = Vec::new();
    for v in t.inner_nodes() {
        let edges = t.incident_edges(v);
        let mut p = vec![0; len];
        for &e in edges {
            p[e] = -1;
        }
        out.push(DualPoint {
            node: v,
            edge: None,
            coords: p,
        });
        for &ei in edges {
            let mut q = vec![0; len];
            for &e in edges {
                q[e] = if e == ei { -1 } else { 1 };
            }
            out.push(DualPoint {
                node: v,
                edge: Some(ei),
                coords: q,
            });
        }
    }
    out
}

/// Doubled coordinates of the dual points, sorted.
pub fn dual_vertices(t: &Tree) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = dual_points(t).into_iter().map(|p| p.coords).collect();
    v.sort();
    v
}

/// `2u - σ`: pairing a doubled dual point with this vector gives the value
/// of the dual point on `4u - 2σ`.
pub fn recentred(u: &[i64]) -> Vec<i64> {
    u.iter().map(|&x| 2 * x - 1).collect()
}

/// Points of the dual polytope on the face cut out by the vertex `u`.
pub fn vertex_face(t: &Tree, u: &[i64]) -> Vec<DualPoint> {
    let c = recentred(u);
    dual_points(t)
        .into_iter()
        .filter(|p| dot(&p.coords, &c) == -1)
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum DualError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Dd(#[from] DdError),
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarityReport {
    /// Vertices of `{w : w(4u - 2σ) >= -1 for all vertices u}`, doubled,
    /// or `None` if some vertex is not half-integral.
    pub polar_of_polytope: Option<Vec<Vec<i64>>>,
    /// Vertices of `{x : w(x) >= -1 for all dual points w}`.
    pub polar_of_dual: Option<Vec<Vec<i64>>>,
    pub dual_matches: bool,
    pub polytope_matches: bool,
}

impl PolarityReport {
    pub fn holds(&self) -> bool {
        self.dual_matches && self.polytope_matches
    }
}

/// Compute both polars exactly and compare them with the dual points and
/// with `4Δ - 2σ`.
pub fn polarity_check(t: &Tree) -> Result<PolarityReport, DualError> {
    let p = polytope_of(t)?;
    // doubled w: w2 · (2u - σ) >= -1
    let a: Vec<Vec<i64>> = p.vertices.iter().map(|u| recentred(u)).collect();
    let b = vec![-1; a.len()];
    let polar: Option<Vec<Vec<i64>>> = polytope_vertices(&a, &b)?
        .iter()
        .map(|v| as_integer(v))
        .collect();

    // d2 · x >= -2
    let d = dual_vertices(t);
    let b2 = vec![-2; d.len()];
    let back: Option<Vec<Vec<i64>>> = polytope_vertices(&d, &b2)?
        .iter()
        .map(|v| as_integer(v))
        .collect();
    let mut expected: Vec<Vec<i64>> = p
        .vertices
        .iter()
        .map(|u| u.iter().map(|&x| 4 * x - 2).collect())
        .collect();
    expected.sort();

    Ok(PolarityReport {
        dual_matches: polar.as_ref() == Some(&d),
        polytope_matches: back.as_ref() == Some(&expected),
        polar_of_polytope: polar,
        polar_of_dual: back,
    })
}
