//! Face lattice from vertex–facet incidences.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use super::linalg::affine_rank;
use super::polytope::SubcubePolytope;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FaceError {
    #[error("polytope has no vertices")]
    Empty,
    #[error("face enumeration supports at most 128 vertices, got {0}")]
    TooManyVertices(usize),
    #[error("no facet inequality is tight on a codimension-one face")]
    NoFacets,
}

/// A nonempty face, as a bitmask over the polytope's vertex list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub vertices: u128,
    pub dim: usize,
}

impl Face {
    pub fn vertex_indices(&self) -> Vec<usize> {
        (0..128).filter(|i| self.vertices >> i & 1 == 1).collect()
    }

    pub fn contains(&self, other: &Face) -> bool {
        other.vertices & !self.vertices == 0
    }
}

/// `entries[i][j]` counts pairs of an `i`-face contained in a `j`-face
/// (symmetrised); the diagonal holds the number of `i`-faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceMatrix {
    pub entries: Vec<Vec<u64>>,
}

impl IncidenceMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    /// Row-major flattening.
    pub fn row_major(&self) -> Vec<u64> {
        self.entries.concat()
    }
}

fn mask_of(p: &SubcubePolytope, pred: impl Fn(&[i64]) -> bool) -> u128 {
    p.vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| pred(v))
        .fold(0u128, |m, (i, _)| m | 1 << i)
}

fn dim_of(p: &SubcubePolytope, mask: u128) -> usize {
    let pts: Vec<&Vec<i64>> = (0..p.vertices.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| &p.vertices[i])
        .collect();
    affine_rank(&pts)
}

/// Vertex sets of the facets: the given inequalities that are tight on a
/// face of codimension one, deduplicated.
pub fn facet_masks(p: &SubcubePolytope) -> Result<Vec<u128>, FaceError> {
    let n = p.vertices.len();
    if n == 0 {
        return Err(FaceError::Empty);
    }
    if n > 128 {
        return Err(FaceError::TooManyVertices(n));
    }
    let dim = p.dim();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in &p.facets {
        let m = mask_of(p, |v| f.is_tight(v, 1));
        if m != 0 && dim_of(p, m) + 1 == dim && seen.insert(m) {
            out.push(m);
        }
    }
    if out.is_empty() && dim > 0 {
        return Err(FaceError::NoFacets);
    }
    Ok(out)
}

/// All nonempty proper faces, closed under intersection with facets.
pub fn faces(p: &SubcubePolytope) -> Result<Vec<Face>, FaceError> {
    let facets = facet_masks(p)?;
    let full: u128 = if p.vertices.len() == 128 {
        u128::MAX
    } else {
        (1u128 << p.vertices.len()) - 1
    };
    let mut seen: HashSet<u128> = HashSet::from([full]);
    let mut queue = VecDeque::from([full]);
    while let Some(f) = queue.pop_front() {
        for &g in &facets {
            let h = f & g;
            if h != 0 && seen.insert(h) {
                queue.push_back(h);
            }
        }
    }
    seen.remove(&full);
    let mut out: Vec<Face> = seen
        .into_iter()
        .map(|m| Face {
            vertices: m,
            dim: dim_of(p, m),
        })
        .collect();
    out.sort_by_key(|f| (f.dim, f.vertices));
    Ok(out)
}

/// Incidence matrix of the proper faces, indexed by dimensions
/// `0..dim`.
pub fn face_lattice(p: &SubcubePolytope) -> Result<IncidenceMatrix, FaceError> {
    let dim = p.dim();
    let all = faces(p)?;
    let mut by_dim: HashMap<usize, Vec<u128>> = HashMap::new();
    for f in &all {
        by_dim.entry(f.dim).or_default().push(f.vertices);
    }
    let mut entries = vec![vec![0u64; dim]; dim];
    for i in 0..dim {
        let small = by_dim.get(&i).map_or(&[][..], Vec::as_slice);
        entries[i][i] = small.len() as u64;
        for j in i + 1..dim {
            let big = by_dim.get(&j).map_or(&[][..], Vec::as_slice);
            let count = small
                .iter()
                .map(|&a| big.iter().filter(|&&b| a & !b == 0).count() as u64)
                .sum();
            entries[i][j] = count;
            entries[j][i] = count;
        }
    }
    Ok(IncidenceMatrix { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::polytope::{polytope_of, Facet};
    use crate::tree::{caterpillar, star, Tree};

    #[test]
    fn tetrahedron_incidences() {
        let m = face_lattice(&polytope_of(&star(3).unwrap()).unwrap()).unwrap();
        assert_eq!(m.entries, vec![vec![4, 12, 12], vec![12, 6, 12], vec![12, 12, 4]]);
    }

    #[test]
    fn segment_and_square() {
        let seg = polytope_of(&Tree::single_edge()).unwrap();
        assert_eq!(face_lattice(&seg).unwrap().entries, vec![vec![2]]);
        let square = SubcubePolytope {
            ambient_dim: 2,
            vertices: vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
            facets: (0..2)
                .flat_map(|i| {
                    let mut a = vec![0, 0];
                    a[i] = 1;
                    let b: Vec<i64> = a.iter().map(|x| -x).collect();
                    [Facet { normal: a, offset: 0 }, Facet { normal: b, offset: -1 }]
                })
                .collect(),
            equations: vec![],
            parity_forms: vec![],
        };
        assert_eq!(face_lattice(&square).unwrap().entries, vec![vec![4, 8], vec![8, 4]]);
    }

    #[test]
    fn four_leaf_polytope_faces_satisfy_euler() {
        let m = face_lattice(&polytope_of(&caterpillar(1).unwrap()).unwrap()).unwrap();
        // f0 - f1 + f2 - f3 + f4 = 1 - (-1)^5 = 2 for a 5-polytope
        let f: Vec<i64> = (0..5).map(|i| m.get(i, i) as i64).collect();
        assert_eq!(f[0] - f[1] + f[2] - f[3] + f[4], 2);
        assert_eq!(f[0], 8);
        assert_eq!(f[4], 8);
    }
}
