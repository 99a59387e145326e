//! Networks of leaf-to-leaf paths, their sockets, and the GF(2) solver
//! that enumerates them.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::tree::Tree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("socket {0} has an odd number of leaves")]
    OddSocket(String),
    #[error("socket has {got} bits but the tree has {expected} leaves")]
    SocketLength { got: usize, expected: usize },
    #[error("edge set is not a network: inner node {0} meets it in an odd or too large number of edges")]
    NotANetwork(usize),
}

/// Dense bit rows over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn zeros(len: usize) -> Self {
        BitRow(vec![0; len.div_ceil(64)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn xor(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
}

/// Basis of `{x ∈ GF(2)^cols : rows · x = 0}`, with rows given as lists of
/// column indices carrying a 1.
pub fn gf2_kernel(rows: &[Vec<usize>], cols: usize) -> Vec<Vec<bool>> {
    let mut m: Vec<BitRow> = rows
        .iter()
        .map(|r| {
            let mut b = BitRow::zeros(cols);
            for &c in r {
                // repeated columns cancel
                if b.get(c) {
                    b.0[c / 64] ^= 1 << (c % 64);
                } else {
                    b.set(c);
                }
            }
            b
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i].get(c)) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor(&pivot);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![false; cols];
            v[f] = true;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = m[row].get(f);
            }
            v
        })
        .collect()
}

/// All GF(2) combinations of a basis, in Gray-code order.
pub fn gf2_span(basis: &[Vec<bool>], cols: usize) -> Vec<Vec<bool>> {
    let mut cur = vec![false; cols];
    let mut out = vec![cur.clone()];
    for step in 1u64..(1u64 << basis.len()) {
        let flip = step.trailing_zeros() as usize;
        for (x, &b) in cur.iter_mut().zip(&basis[flip]) {
            *x ^= b;
        }
        out.push(cur.clone());
    }
    out
}

/// A set of edges forming vertex-disjoint leaf-to-leaf paths.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Network {
    edges: Vec<bool>,
}

impl Network {
    pub fn new(t: &Tree, edges: Vec<bool>) -> Result<Network, NetworkError> {
        assert_eq!(edges.len(), t.edge_count());
        for v in t.inner_nodes() {
            let meet = t.incident_edges(v).iter().filter(|&&e| edges[e]).count();
            if meet != 0 && meet != 2 {
                return Err(NetworkError::NotANetwork(v));
            }
        }
        Ok(Network { edges })
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges[e]
    }

    pub fn edges(&self) -> &[bool] {
        &self.edges
    }

    /// The corresponding vertex of the polytope, as a 0/1 vector over edges.
    pub fn to_vertex(&self) -> Vec<i64> {
        self.edges.iter().map(|&b| b as i64).collect()
    }

    pub fn edge_indices(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e]).collect()
    }
}

/// Set of leaves at which the paths of a network end, as bits indexed by
/// leaf label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Socket {
    bits: Vec<bool>,
}

impl Socket {
    pub fn new(bits: Vec<bool>) -> Result<Socket, NetworkError> {
        let s = Socket { bits };
        if s.bits.iter().filter(|&&b| b).count() % 2 == 1 {
            return Err(NetworkError::OddSocket(s.to_string()));
        }
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Socket, NetworkError> {
        Socket::new(text.trim().chars().map(|c| c == '1').collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Whether leaf `label` is an endpoint.
    pub fn has_leaf(&self, label: u32) -> bool {
        self.bits[label as usize - 1]
    }
}

impl fmt::Display for Socket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for Socket {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Rows of the inner-node forms: for each inner node, its incident edges.
pub fn inner_node_rows(t: &Tree) -> Vec<Vec<usize>> {
    t.inner_nodes()
        .into_iter()
        .map(|v| t.incident_edges(v).to_vec())
        .collect()
}

/// All networks of `t`, sorted by their 0/1 edge vectors.
pub fn networks_of(t: &Tree) -> Vec<Network> {
    let cols = t.edge_count();
    let basis = gf2_kernel(&inner_node_rows(t), cols);
    let mut nets: Vec<Network> = gf2_span(&basis, cols)
        .into_iter()
        .map(|edges| Network { edges })
        .collect();
    nets.sort_by_key(Network::to_vertex);
    nets
}

pub fn socket_of(t: &Tree, net: &Network) -> Socket {
    let bits = (1..=t.leaf_count() as u32)
        .map(|l| net.contains(t.petiole(l).unwrap()))
        .collect();
    Socket { bits }
}

/// The unique network ending at the leaves of `s`: an edge is used iff an
/// odd number of socket leaves lie beyond it.
pub fn network_of_socket(t: &Tree, s: &Socket) -> Result<Network, NetworkError> {
    if s.bits.len() != t.leaf_count() {
        return Err(NetworkError::SocketLength {
            got: s.bits.len(),
            expected: t.leaf_count(),
        });
    }
    if s.bits.iter().filter(|&&b| b).count() % 2 == 1 {
        return Err(NetworkError::OddSocket(s.to_string()));
    }
    // children have larger ids than parents in canonical order
    let mut below = vec![0u32; t.vertex_count()];
    for v in (0..t.vertex_count()).rev() {
        if let Some(l) = t.leaf_label(v) {
            if v != 0 {
                below[v] += s.bits[l as usize - 1] as u32;
            }
        }
        let children = if v == 0 {
            t.incident_edges(v)
        } else {
            &t.incident_edges(v)[1..]
        };
        for &e in children {
            let c = t.edge(e).1;
            below[v] += below[c];
        }
    }
    let edges = t.edges().iter().map(|&(_, c)| below[c] % 2 == 1).collect();
    Ok(Network { edges })
}
