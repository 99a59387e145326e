use serde::Serialize;
use thiserror::Error;

use super::linalg::{affine_rank, dot};
use super::networks::{gf2_kernel, gf2_span, networks_of};
use crate::tree::{RawTree, Tree, TreeError, Valency};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("tree is neither 3-valent nor a star")]
    NotTrivalent,
    #[error("form takes value {value} on a vertex; fiber products need values in [0, 1]")]
    FormOutOfRange { value: i64 },
    #[error("form has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("graph has no 2-valent inner node")]
    No2ValentNode,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// The inequality `normal · x >= offset`. Normals of tree polytopes are
/// stored doubled so that half-integral forms stay integral.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    /// Whether `x` satisfies the inequality for the polytope dilated by `scale`.
    pub fn holds(&self, x: &[i64], scale: i64) -> bool {
        dot(&self.normal, x) >= self.offset * scale
    }

    pub fn is_tight(&self, x: &[i64], scale: i64) -> bool {
        dot(&self.normal, x) == self.offset * scale
    }
}

/// A polytope whose vertices are 0/1 vectors, with an inequality
/// description and the parity forms cutting out its normalized lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubcubePolytope {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<Facet>,
    /// Linear forms vanishing on the polytope.
    pub equations: Vec<Vec<i64>>,
    /// A lattice point lies in the normalized lattice iff each of these
    /// forms takes an even value on it.
    pub parity_forms: Vec<Vec<i64>>,
}

impl SubcubePolytope {
    pub fn dim(&self) -> usize {
        affine_rank(&self.vertices)
    }

    /// Whether the point lies in the polytope dilated by `scale`.
    pub fn contains(&self, x: &[i64], scale: i64) -> bool {
        self.facets.iter().all(|f| f.holds(x, scale))
            && self.equations.iter().all(|q| dot(q, x) == 0)
    }

    pub fn in_normalized_lattice(&self, x: &[i64]) -> bool {
        self.parity_forms.iter().all(|f| dot(f, x) % 2 == 0)
    }
}

fn unit(len: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; len];
    v[i] = scale;
    v
}

/// Facets of the polytope of a 3-valent node with edges `e`: `-v/2 >= -1`
/// and `v/2 - e_i* >= 0`, doubled.
fn trivalent_facets(len: usize, e: &[usize]) -> Vec<Facet> {
    let mut out = Vec::with_capacity(4);
    let mut sum = vec![0; len];
    for &i in e {
        sum[i] = -1;
    }
    out.push(Facet {
        normal: sum,
        offset: -2,
    });
    for &i in e {
        let mut n = vec![0; len];
        for &j in e {
            n[j] = if j == i { -1 } else { 1 };
        }
        out.push(Facet { normal: n, offset: 0 });
    }
    out
}

/// Facets of the even-weight vectors of the `d`-cube: cut off every odd
/// vertex, plus the cube facets once `d >= 4`.
fn demicube_facets(d: usize) -> Vec<Facet> {
    let mut out = Vec::new();
    for w in 0u64..(1u64 << d) {
        if w.count_ones() % 2 == 1 {
            // sum_{w_i=0} x_i + sum_{w_i=1} (1 - x_i) >= 1
            let normal = (0..d)
                .map(|i| if w >> i & 1 == 1 { -2 } else { 2 })
                .collect();
            out.push(Facet {
                normal,
                offset: 2 * (1 - w.count_ones() as i64),
            });
        }
    }
    if d >= 4 {
        for i in 0..d {
            out.push(Facet {
                normal: unit(d, i, 2),
                offset: 0,
            });
            out.push(Facet {
                normal: unit(d, i, -2),
                offset: -2,
            });
        }
    }
    out
}

/// The polytope model of a tree: the 0/1 edge vectors taking even values
/// on every inner-node form, with its facet inequalities.
pub fn polytope_of(t: &Tree) -> Result<SubcubePolytope, PolytopeError> {
    let len = t.edge_count();
    let inner = t.inner_nodes();
    let facets = if inner.is_empty() {
        vec![
            Facet {
                normal: vec![2],
                offset: 0,
            },
            Facet {
                normal: vec![-2],
                offset: -2,
            },
        ]
    } else if t.is_trivalent() {
        inner
            .iter()
            .flat_map(|&v| trivalent_facets(len, t.incident_edges(v)))
            .collect()
    } else if t.is_star() {
        // a star's edges are numbered in leaf order
        demicube_facets(len)
    } else {
        return Err(PolytopeError::NotTrivalent);
    };
    let vertices = networks_of(t).iter().map(|n| n.to_vertex()).collect();
    let parity_forms = inner
        .iter()
        .map(|&v| {
            let mut f = vec![0; len];
            for &e in t.incident_edges(v) {
                f[e] = 1;
            }
            f
        })
        .collect();
    Ok(SubcubePolytope {
        ambient_dim: len,
        vertices,
        facets,
        equations: Vec::new(),
        parity_forms,
    })
}

fn check_form(p: &SubcubePolytope, form: &[i64]) -> Result<(), PolytopeError> {
    if form.len() != p.ambient_dim {
        return Err(PolytopeError::DimensionMismatch {
            got: form.len(),
            expected: p.ambient_dim,
        });
    }
    for v in &p.vertices {
        let value = dot(form, v);
        if !(0..=1).contains(&value) {
            return Err(PolytopeError::FormOutOfRange { value });
        }
    }
    Ok(())
}

/// Fiber product `a ×_{la = lb} b` in the concatenated coordinates of both
/// factors. With two zero forms this is the plain product.
pub fn fiber_product(
    a: &SubcubePolytope,
    la: &[i64],
    b: &SubcubePolytope,
    lb: &[i64],
) -> Result<SubcubePolytope, PolytopeError> {
    check_form(a, la)?;
    check_form(b, lb)?;
    let (da, db) = (a.ambient_dim, b.ambient_dim);
    let left = |v: &[i64]| [v, &vec![0; db]].concat();
    let right = |v: &[i64]| [&vec![0; da], v].concat();

    let mut vertices = Vec::new();
    for u in &a.vertices {
        for w in &b.vertices {
            if dot(la, u) == dot(lb, w) {
                vertices.push([u.as_slice(), w.as_slice()].concat());
            }
        }
    }
    vertices.sort();
    let facets = a
        .facets
        .iter()
        .map(|f| Facet {
            normal: left(&f.normal),
            offset: f.offset,
        })
        .chain(b.facets.iter().map(|f| Facet {
            normal: right(&f.normal),
            offset: f.offset,
        }))
        .collect();
    let mut equations: Vec<Vec<i64>> = a
        .equations
        .iter()
        .map(|q| left(q))
        .chain(b.equations.iter().map(|q| right(q)))
        .collect();
    let glue: Vec<i64> = la.iter().copied().chain(lb.iter().map(|x| -x)).collect();
    if glue.iter().any(|&x| x != 0) {
        equations.push(glue);
    }
    let parity_forms = a
        .parity_forms
        .iter()
        .map(|q| left(q))
        .chain(b.parity_forms.iter().map(|q| right(q)))
        .collect();
    Ok(SubcubePolytope {
        ambient_dim: da + db,
        vertices,
        facets,
        equations,
        parity_forms,
    })
}

/// Result of suppressing 2-valent nodes: the reduced tree and the
/// embedding of its lattice into the lattice of the original graph.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub tree: Tree,
    /// `embedding[e]` is the image of the basis vector of reduced edge `e`,
    /// written in the original edge coordinates.
    pub embedding: Vec<Vec<i64>>,
}

impl Reduction {
    pub fn embed(&self, x: &[i64]) -> Vec<i64> {
        let len = self.embedding.first().map_or(0, Vec::len);
        let mut out = vec![0; len];
        for (c, img) in x.iter().zip(&self.embedding) {
            for (o, i) in out.iter_mut().zip(img) {
                *o += c * i;
            }
        }
        out
    }
}

/// Suppress every 2-valent node of a raw tree. Each reduced edge maps to
/// the sum of the chain of original edges it replaces.
pub fn remove_2valent(raw: &RawTree) -> Result<Reduction, PolytopeError> {
    let degree: Vec<usize> = (0..raw.vertex_count).map(|v| raw.degree(v)).collect();
    let two_valent = |v: usize| degree[v] == 2 && !raw.labels.contains_key(&v);
    if !(0..raw.vertex_count).any(two_valent) {
        return Err(PolytopeError::No2ValentNode);
    }
    let (tree, map) = Tree::from_raw_with_map(raw, Valency::Any)?;
    let mut embedding = vec![vec![0; raw.edges.len()]; tree.edge_count()];
    let other_edge = |v: usize, e: usize| {
        (0..raw.edges.len()).find(|&f| f != e && (raw.edges[f].0 == v || raw.edges[f].1 == v))
    };
    for (e, &(a, b)) in raw.edges.iter().enumerate() {
        // walk outwards from both ends through suppressed nodes
        let mut ends = [a, b];
        for end in ends.iter_mut() {
            let mut via = e;
            while two_valent(*end) {
                via = other_edge(*end, via).unwrap();
                let (x, y) = raw.edges[via];
                *end = if x == *end { y } else { x };
            }
        }
        let (ca, cb) = (map[ends[0]].unwrap(), map[ends[1]].unwrap());
        let reduced = tree.edge_between(ca, cb).unwrap();
        embedding[reduced][e] = 1;
    }
    Ok(Reduction { tree, embedding })
}

/// 0/1 vectors over the edges of a raw graph with even value on every
/// non-leaf vertex, sorted.
pub fn raw_vertices(raw: &RawTree) -> Vec<Vec<i64>> {
    let rows: Vec<Vec<usize>> = (0..raw.vertex_count)
        .filter(|v| !raw.labels.contains_key(v))
        .map(|v| {
            (0..raw.edges.len())
                .filter(|&e| raw.edges[e].0 == v || raw.edges[e].1 == v)
                .collect()
        })
        .collect();
    let cols = raw.edges.len();
    let mut out: Vec<Vec<i64>> = gf2_span(&gf2_kernel(&rows, cols), cols)
        .into_iter()
        .map(|x| x.into_iter().map(i64::from).collect())
        .collect();
    out.sort();
    out
}
