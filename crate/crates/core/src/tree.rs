//! Unrooted leaf-labelled trees: parsing, generators, grafts and mutations.
//!
//! Every [`Tree`] is stored in canonical form. Vertices are numbered in
//! depth-first preorder starting at leaf 1, children are visited in order of
//! the smallest leaf label they can reach, and edges are numbered in the
//! order the traversal discovers them. Edge `0` is therefore always the
//! petiole of leaf 1, and every edge is stored as `(parent, child)`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("cycle detected")]
    Cycle,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("inner vertex {vertex} has valency {degree}; only 3-valent trees are accepted")]
    HighValency { vertex: String, degree: usize },
    #[error("duplicate leaf label {0}")]
    DuplicateLabel(u32),
    #[error("leaf labels must be exactly 1..={expected}, found {found:?}")]
    NonConsecutiveLabels { expected: usize, found: Vec<u32> },
    #[error("vertex {0} has degree 1 but no leaf label")]
    UnlabelledLeaf(String),
    #[error("labelled vertex {0} is not a leaf")]
    LabelOnInnerVertex(u32),
    #[error("a tree needs at least two leaves")]
    TooFewLeaves,
    #[error("leaf {0} does not exist")]
    NoSuchLeaf(u32),
    #[error("edge {0} does not exist")]
    NoSuchEdge(usize),
    #[error("edge {0} is a petiole, not an inner edge")]
    NotInnerEdge(usize),
    #[error("caterpillar length must be at least 1")]
    EmptyCaterpillar,
    #[error("tree is not 3-valent")]
    NotTrivalent,
    #[error("tree has no 2-valent inner node")]
    No2ValentNode,
}

/// Which inner valencies are accepted when a tree is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valency {
    /// Inner vertices of valency 4 or more are rejected.
    Trivalent,
    /// Any valency is kept (used for star trees `star:d`).
    Any,
}

/// An unvalidated graph with optional leaf labels.
///
/// This is the input side of [`Tree::from_raw`]; it may contain 2-valent
/// vertices, cycles or several components.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawTree {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    /// vertex -> leaf label
    pub labels: BTreeMap<usize, u32>,
    /// Optional display names for vertices, used in error messages.
    pub names: BTreeMap<usize, String>,
}

impl RawTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_leaf(&mut self, label: u32) -> usize {
        let v = self.add_vertex();
        self.labels.insert(v, label);
        v
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn name(&self, v: usize) -> String {
        self.names.get(&v).cloned().unwrap_or_else(|| format!("#{v}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    edges: Vec<(usize, usize)>,
    /// incident edge indices per vertex; the parent edge comes first
    incident: Vec<Vec<usize>>,
    leaf_vertex: Vec<usize>,
    vertex_label: Vec<Option<u32>>,
}

/// Vertex correspondence produced while canonicalising a [`RawTree`].
/// `map[raw]` is the canonical vertex, or `None` if the raw vertex was a
/// suppressed 2-valent node.
pub(crate) type VertexMap = Vec<Option<usize>>;

impl Tree {
    pub fn from_raw(raw: &RawTree, valency: Valency) -> Result<Tree, TreeError> {
        Self::from_raw_with_map(raw, valency).map(|(t, _)| t)
    }

    pub(crate) fn from_raw_with_map(
        raw: &RawTree,
        valency: Valency,
    ) -> Result<(Tree, VertexMap), TreeError> {
        let n = raw.vertex_count;
        // acyclic + connected, via union-find
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(a, b) in &raw.edges {
            if a >= n || b >= n {
                return Err(TreeError::Parse {
                    pos: 0,
                    msg: format!("edge ({a}, {b}) refers to a missing vertex"),
                });
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(TreeError::Cycle);
            }
            parent[ra] = rb;
            adj[a].insert(b);
            adj[b].insert(a);
        }
        if n == 0 {
            return Err(TreeError::TooFewLeaves);
        }
        let root = find(&mut parent, 0);
        if (1..n).any(|v| find(&mut parent, v) != root) {
            return Err(TreeError::Disconnected);
        }

        // labels
        let mut seen = BTreeSet::new();
        for &label in raw.labels.values() {
            if !seen.insert(label) {
                return Err(TreeError::DuplicateLabel(label));
            }
        }
        let leaf_count = seen.len();
        if !seen.iter().copied().eq(1..=leaf_count as u32) {
            return Err(TreeError::NonConsecutiveLabels {
                expected: leaf_count,
                found: seen.into_iter().collect(),
            });
        }

        for v in 0..n {
            let deg = adj[v].len();
            match raw.labels.get(&v) {
                Some(&label) if deg != 1 => return Err(TreeError::LabelOnInnerVertex(label)),
                None if deg == 1 => return Err(TreeError::UnlabelledLeaf(raw.name(v))),
                _ => {}
            }
        }
        if leaf_count < 2 {
            return Err(TreeError::TooFewLeaves);
        }

        // suppress 2-valent nodes
        let mut alive = vec![true; n];
        for v in 0..n {
            if adj[v].len() == 2 && !raw.labels.contains_key(&v) {
                let mut it = adj[v].iter().copied();
                let (a, b) = (it.next().unwrap(), it.next().unwrap());
                adj[a].remove(&v);
                adj[b].remove(&v);
                adj[a].insert(b);
                adj[b].insert(a);
                adj[v].clear();
                alive[v] = false;
            }
        }

        if valency == Valency::Trivalent {
            if let Some(v) = (0..n).find(|&v| alive[v] && adj[v].len() > 3) {
                return Err(TreeError::HighValency {
                    vertex: raw.name(v),
                    degree: adj[v].len(),
                });
            }
        }

        let label_of = |v: usize| raw.labels.get(&v).copied();
        let leaf1 = *raw
            .labels
            .iter()
            .find(|(_, &l)| l == 1)
            .map(|(v, _)| v)
            .expect("label 1 exists");

        // smallest reachable leaf label below each vertex, rooted at leaf 1
        let mut order = Vec::with_capacity(n);
        let mut up = vec![usize::MAX; n];
        let mut stack = vec![leaf1];
        up[leaf1] = leaf1;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in &adj[v] {
                if up[w] == usize::MAX {
                    up[w] = v;
                    stack.push(w);
                }
            }
        }
        let mut min_leaf = vec![u32::MAX; n];
        for &v in order.iter().rev() {
            if let Some(l) = label_of(v) {
                min_leaf[v] = min_leaf[v].min(l);
            }
            if v != leaf1 {
                let p = up[v];
                min_leaf[p] = min_leaf[p].min(min_leaf[v]);
            }
        }

        // canonical preorder
        let mut map: VertexMap = vec![None; n];
        let mut edges = Vec::new();
        let mut vertex_label = Vec::new();
        let mut stack = vec![(leaf1, usize::MAX)];
        while let Some((v, p)) = stack.pop() {
            let id = vertex_label.len();
            map[v] = Some(id);
            vertex_label.push(label_of(v));
            if p != usize::MAX {
                edges.push((map[p].unwrap(), id));
            }
            let mut children: Vec<usize> = adj[v].iter().copied().filter(|&w| w != p).collect();
            children.sort_by_key(|&w| min_leaf[w]);
            for &w in children.iter().rev() {
                stack.push((w, v));
            }
        }

        let vcount = vertex_label.len();
        let mut incident = vec![Vec::new(); vcount];
        for (i, &(a, b)) in edges.iter().enumerate() {
            incident[b].push(i); // parent edge of b is discovered first
            incident[a].push(i);
        }
        let mut leaf_vertex = vec![0; leaf_count];
        for (v, l) in vertex_label.iter().enumerate() {
            if let Some(l) = l {
                leaf_vertex[*l as usize - 1] = v;
            }
        }
        Ok((
            Tree {
                edges,
                incident,
                leaf_vertex,
                vertex_label,
            },
            map,
        ))
    }

    /// Copy of this tree as a raw graph with the same vertex numbering.
    pub fn to_raw(&self) -> RawTree {
        let mut raw = RawTree::new();
        raw.vertex_count = self.vertex_count();
        raw.edges = self.edges.clone();
        for (v, l) in self.vertex_label.iter().enumerate() {
            if let Some(l) = l {
                raw.labels.insert(v, *l);
            }
        }
        raw
    }

    /// The tree with two leaves joined by a single edge.
    pub fn single_edge() -> Tree {
        star(2).expect("two leaves")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_label.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_vertex.len()
    }

    /// Edges as `(parent, child)` vertex pairs in canonical order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Incident edges of `v`; for every vertex except leaf 1 the first
    /// entry is the edge towards leaf 1.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[v].iter().map(move |&e| {
            let (a, b) = self.edges[e];
            if a == v {
                b
            } else {
                a
            }
        })
    }

    pub fn leaf_label(&self, v: usize) -> Option<u32> {
        self.vertex_label[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.vertex_label[v].is_some()
    }

    pub fn leaf_vertex(&self, label: u32) -> Result<usize, TreeError> {
        label
            .checked_sub(1)
            .and_then(|i| self.leaf_vertex.get(i as usize))
            .copied()
            .ok_or(TreeError::NoSuchLeaf(label))
    }

    /// Edge index of the petiole of leaf `label`.
    pub fn petiole(&self, label: u32) -> Result<usize, TreeError> {
        Ok(self.incident[self.leaf_vertex(label)?][0])
    }

    /// Inner nodes in vertex order.
    pub fn inner_nodes(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| !self.is_leaf(v)).collect()
    }

    pub fn is_inner_edge(&self, e: usize) -> bool {
        let (a, b) = self.edges[e];
        !self.is_leaf(a) && !self.is_leaf(b)
    }

    pub fn inner_edges(&self) -> Vec<usize> {
        (0..self.edge_count()).filter(|&e| self.is_inner_edge(e)).collect()
    }

    pub fn is_trivalent(&self) -> bool {
        self.inner_nodes().iter().all(|&v| self.degree(v) == 3)
    }

    /// Star trees have exactly one inner node.
    pub fn is_star(&self) -> bool {
        self.inner_nodes().len() == 1
    }

    /// All inner nodes lie on one path.
    pub fn is_caterpillar(&self) -> bool {
        self.inner_nodes()
            .iter()
            .all(|&v| self.neighbors(v).filter(|&w| !self.is_leaf(w)).count() <= 2)
    }

    /// Smallest leaf label in the component of `to` once the edge
    /// `from`–`to` is removed.
    fn side_min_leaf(&self, from: usize, to: usize) -> u32 {
        let mut best = u32::MAX;
        let mut stack = vec![(to, from)];
        while let Some((v, p)) = stack.pop() {
            if let Some(l) = self.vertex_label[v] {
                best = best.min(l);
            }
            for w in self.neighbors(v) {
                if w != p {
                    stack.push((w, v));
                }
            }
        }
        best
    }

    /// Leaf labels in the component of `to` once the edge `from`–`to` is
    /// removed.
    pub fn side_leaves(&self, from: usize, to: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stack = vec![(to, from)];
        while let Some((v, p)) = stack.pop() {
            if let Some(l) = self.vertex_label[v] {
                out.push(l);
            }
            for w in self.neighbors(v) {
                if w != p {
                    stack.push((w, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Label-respecting canonical Newick string, rooted at the petiole of
    /// leaf 1. Two trees give equal strings iff they are isomorphic as
    /// labelled trees.
    pub fn canonical_form(&self) -> String {
        fn write(t: &Tree, v: usize, out: &mut String) {
            if let Some(l) = t.vertex_label[v] {
                out.push_str(&l.to_string());
                return;
            }
            out.push('(');
            for (i, &e) in t.incident[v][1..].iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write(t, t.edges[e].1, out);
            }
            out.push(')');
        }
        let mut out = String::from("(1,");
        write(self, self.edges[0].1, &mut out);
        out.push_str(");");
        out
    }

    /// Canonical string of the underlying unlabelled tree. Equal strings
    /// mean the trees agree up to a relabelling of leaves.
    pub fn shape_form(&self) -> String {
        let n = self.vertex_count();
        // peel leaves to find the centre
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &v in &layer {
                for w in self.neighbors(v) {
                    if deg[w] > 1 {
                        deg[w] -= 1;
                        if deg[w] == 1 {
                            next.push(w);
                        }
                    }
                }
                deg[v] = 0;
            }
            layer = next;
        }
        fn encode(t: &Tree, v: usize, p: usize) -> String {
            let mut parts: Vec<String> =
                t.neighbors(v).filter(|&w| w != p).map(|w| encode(t, w, v)).collect();
            parts.sort();
            format!("({})", parts.concat())
        }
        match layer.as_slice() {
            [c] => encode(self, *c, usize::MAX),
            [a, b] => {
                let mut parts = [encode(self, *a, *b), encode(self, *b, *a)];
                parts.sort();
                format!("[{}{}]", parts[0], parts[1])
            }
            _ => unreachable!("a tree has one or two centres"),
        }
    }

    /// Permute leaf labels: leaf `l` receives label `perm[l - 1]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Tree, TreeError> {
        let mut raw = self.to_raw();
        for l in raw.labels.values_mut() {
            *l = *perm.get(*l as usize - 1).ok_or(TreeError::NoSuchLeaf(*l))?;
        }
        Tree::from_raw(&raw, Valency::Any)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_form())
    }
}

impl FromStr for Tree {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tree(s)
    }
}

impl Serialize for Tree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.canonical_form())
    }
}

/// A tree together with a distinguished leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedTree {
    tree: Tree,
    point: u32,
}

impl PointedTree {
    pub fn new(tree: Tree, point: u32) -> Result<Self, TreeError> {
        tree.leaf_vertex(point)?;
        Ok(PointedTree { tree, point })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn point(&self) -> u32 {
        self.point
    }

    pub fn into_tree(self) -> Tree {
        self.tree
    }
}

/// Parse a tree from one of the accepted text formats:
///
/// * Newick with integer leaf names, e.g. `((1,2),(3,4));`
/// * an edge list, one `u v` pair per line (`#` starts a comment)
/// * a generator: `star:d`, `caterpillar:k` or `snowflake`
pub fn parse_tree(text: &str) -> Result<Tree, TreeError> {
    let s = text.trim();
    if let Some(d) = s.strip_prefix("star:") {
        return star(parse_count(d, 5)?);
    }
    if let Some(k) = s.strip_prefix("caterpillar:") {
        return caterpillar(parse_count(k, 12)?);
    }
    if s == "snowflake" {
        return Ok(snowflake());
    }
    if s.starts_with('(') {
        return Tree::from_raw(&parse_newick(s)?, Valency::Trivalent);
    }
    Tree::from_raw(&parse_edge_list(s)?, Valency::Trivalent)
}

fn parse_count(s: &str, pos: usize) -> Result<usize, TreeError> {
    s.trim().parse().map_err(|_| TreeError::Parse {
        pos,
        msg: format!("expected a non-negative integer, got {s:?}"),
    })
}

/// Newick subset: nested parentheses, integer leaf names, `;` terminator.
pub fn parse_newick(s: &str) -> Result<RawTree, TreeError> {
    struct P<'a> {
        b: &'a [u8],
        i: usize,
        raw: RawTree,
    }
    impl P<'_> {
        fn err(&self, msg: impl Into<String>) -> TreeError {
            TreeError::Parse {
                pos: self.i,
                msg: msg.into(),
            }
        }
        fn ws(&mut self) {
            while self.i < self.b.len() && self.b[self.i].is_ascii_whitespace() {
                self.i += 1;
            }
        }
        fn peek(&mut self) -> Option<u8> {
            self.ws();
            self.b.get(self.i).copied()
        }
        fn node(&mut self) -> Result<usize, TreeError> {
            match self.peek() {
                Some(b'(') => {
                    self.i += 1;
                    let v = self.raw.add_vertex();
                    loop {
                        let c = self.node()?;
                        self.raw.add_edge(v, c);
                        match self.peek() {
                            Some(b',') => self.i += 1,
                            Some(b')') => {
                                self.i += 1;
                                break;
                            }
                            Some(b':') => return Err(self.err("branch lengths are not supported")),
                            _ => return Err(self.err("expected ',' or ')'")),
                        }
                    }
                    Ok(v)
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = self.i;
                    while self.i < self.b.len() && self.b[self.i].is_ascii_digit() {
                        self.i += 1;
                    }
                    let text = std::str::from_utf8(&self.b[start..self.i]).unwrap();
                    let label: u32 = text.parse().map_err(|_| self.err("leaf label overflows"))?;
                    let v = self.raw.add_leaf(label);
                    self.raw.names.insert(v, text.to_string());
                    Ok(v)
                }
                _ => Err(self.err("expected '(' or an integer leaf label")),
            }
        }
    }
    let mut p = P {
        b: s.as_bytes(),
        i: 0,
        raw: RawTree::new(),
    };
    p.node()?;
    if p.peek() != Some(b';') {
        return Err(p.err("expected ';'"));
    }
    p.i += 1;
    if p.peek().is_some() {
        return Err(p.err("trailing input after ';'"));
    }
    Ok(p.raw)
}

/// Edge list: one `u v` pair of integer vertex names per line. Degree-1
/// vertices are leaves and their names are their labels.
pub fn parse_edge_list(s: &str) -> Result<RawTree, TreeError> {
    let mut ids: BTreeMap<u64, usize> = BTreeMap::new();
    let mut pairs = Vec::new();
    let mut pos = 0;
    for line in s.lines() {
        let body = line.split('#').next().unwrap_or("").trim();
        if !body.is_empty() {
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(TreeError::Parse {
                    pos,
                    msg: format!("expected 'u v', got {body:?}"),
                });
            }
            let mut ends = [0usize; 2];
            for (k, tok) in toks.iter().enumerate() {
                let name: u64 = tok.parse().map_err(|_| TreeError::Parse {
                    pos,
                    msg: format!("vertex name {tok:?} is not an integer"),
                })?;
                let next = ids.len();
                ends[k] = *ids.entry(name).or_insert(next);
            }
            if ends[0] == ends[1] {
                return Err(TreeError::Cycle);
            }
            pairs.push((ends[0], ends[1]));
        }
        pos += line.len() + 1;
    }
    let mut raw = RawTree::new();
    raw.vertex_count = ids.len();
    raw.edges = pairs;
    for (&name, &v) in &ids {
        raw.names.insert(v, name.to_string());
        if raw.degree(v) == 1 {
            let label = u32::try_from(name).map_err(|_| TreeError::Parse {
                pos: 0,
                msg: format!("leaf name {name} is too large"),
            })?;
            raw.labels.insert(v, label);
        }
    }
    Ok(raw)
}

/// Star tree with `d` leaves around one inner node (`d = 2` collapses to a
/// single edge).
pub fn star(d: usize) -> Result<Tree, TreeError> {
    if d < 2 {
        return Err(TreeError::TooFewLeaves);
    }
    let mut raw = RawTree::new();
    let c = raw.add_vertex();
    for l in 1..=d as u32 {
        let v = raw.add_leaf(l);
        raw.add_edge(c, v);
    }
    Tree::from_raw(&raw, Valency::Any)
}

/// Caterpillar with `k` inner edges: spine `p0 .. pk`, leaves 1, 2 on `p0`,
/// leaf `i + 2` on `pi` for `0 < i < k`, and leaves `k + 2`, `k + 3` on `pk`.
pub fn caterpillar(k: usize) -> Result<Tree, TreeError> {
    if k == 0 {
        return Err(TreeError::EmptyCaterpillar);
    }
    let mut raw = RawTree::new();
    let spine: Vec<usize> = (0..=k).map(|_| raw.add_vertex()).collect();
    for w in spine.windows(2) {
        raw.add_edge(w[0], w[1]);
    }
    let attach = |raw: &mut RawTree, at: usize, label: u32| {
        let v = raw.add_leaf(label);
        raw.add_edge(at, v);
    };
    attach(&mut raw, spine[0], 1);
    attach(&mut raw, spine[0], 2);
    for (i, &p) in spine.iter().enumerate().take(k).skip(1) {
        attach(&mut raw, p, i as u32 + 2);
    }
    attach(&mut raw, spine[k], k as u32 + 2);
    attach(&mut raw, spine[k], k as u32 + 3);
    Tree::from_raw(&raw, Valency::Trivalent)
}

/// Six-leaf tree with a central node joined to three cherries
/// `(1,2)`, `(3,4)`, `(5,6)`.
pub fn snowflake() -> Tree {
    let mut raw = RawTree::new();
    let c = raw.add_vertex();
    for pair in 0..3u32 {
        let x = raw.add_vertex();
        raw.add_edge(c, x);
        for l in [2 * pair + 1, 2 * pair + 2] {
            let v = raw.add_leaf(l);
            raw.add_edge(x, v);
        }
    }
    Tree::from_raw(&raw, Valency::Trivalent).expect("snowflake is valid")
}

/// Where the edges of the two grafted trees ended up.
#[derive(Debug, Clone)]
pub struct GraftMap {
    /// `left[e]` is the new index of edge `e` of the first tree.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// The fused inner edge.
    pub fused: usize,
}

/// Graft two pointed trees: drop both points and fuse their petioles into
/// one edge. Leaves of `a` are renumbered first (keeping their relative
/// order), then those of `b`.
pub fn graft(a: &PointedTree, b: &PointedTree) -> Tree {
    graft_with_map(a, b).0
}

pub fn graft_with_map(a: &PointedTree, b: &PointedTree) -> (Tree, GraftMap) {
    let (ta, tb) = (a.tree(), b.tree());
    let la = ta.leaf_vertex(a.point()).unwrap();
    let lb = tb.leaf_vertex(b.point()).unwrap();
    let xa = ta.neighbors(la).next().unwrap();
    let xb = tb.neighbors(lb).next().unwrap();

    let mut raw = RawTree::new();
    let mut next_label = 1;
    let mut copy = |raw: &mut RawTree, t: &Tree, skip: usize| -> Vec<usize> {
        let mut ids = vec![usize::MAX; t.vertex_count()];
        let mut leaves: Vec<(u32, usize)> = Vec::new();
        for v in 0..t.vertex_count() {
            if v != skip {
                ids[v] = raw.add_vertex();
                if let Some(l) = t.leaf_label(v) {
                    leaves.push((l, ids[v]));
                }
            }
        }
        leaves.sort_unstable();
        for (_, id) in leaves {
            raw.labels.insert(id, next_label);
            next_label += 1;
        }
        for &(p, c) in t.edges() {
            if p != skip && c != skip {
                raw.add_edge(ids[p], ids[c]);
            }
        }
        ids
    };
    let ida = copy(&mut raw, ta, la);
    let idb = copy(&mut raw, tb, lb);
    raw.add_edge(ida[xa], idb[xb]);
    let (tree, map) = Tree::from_raw_with_map(&raw, Valency::Any).expect("graft of trees is a tree");
    let fused = tree.edge_between(map[ida[xa]].unwrap(), map[idb[xb]].unwrap()).unwrap();
    let remap = |t: &Tree, ids: &[usize], skip: usize| -> Vec<usize> {
        t.edges()
            .iter()
            .map(|&(p, c)| {
                if p == skip || c == skip {
                    fused
                } else {
                    tree.edge_between(map[ids[p]].unwrap(), map[ids[c]].unwrap()).unwrap()
                }
            })
            .collect()
    };
    let gm = GraftMap {
        left: remap(ta, &ida, la),
        right: remap(tb, &idb, lb),
        fused,
    };
    (tree, gm)
}

impl Tree {
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.incident[a].iter().copied().find(|&e| {
            let (x, y) = self.edges[e];
            (x == a && y == b) || (x == b && y == a)
        })
    }
}

/// Pointed graft: `a` and `b` are grafted onto two leaves of a 3-leaf star
/// whose third leaf becomes the new point. The new point receives the
/// highest label; the other leaves are numbered `a` first, then `b`.
pub fn pointed_graft(a: &PointedTree, b: &PointedTree) -> PointedTree {
    let hub = star(3).unwrap();
    // hub leaves: 1 -> a, 2 -> b, 3 -> new point
    let left = graft(a, &PointedTree::new(hub, 1).unwrap());
    let la = a.tree().leaf_count() as u32 - 1;
    // in `left`, the hub's leaves 2 and 3 became la + 1 and la + 2
    let joined = graft(&PointedTree::new(left, la + 1).unwrap(), b);
    // joined leaves: a's (1..=la), point (la + 1), b's after
    let total = joined.leaf_count() as u32;
    let perm: Vec<u32> = (1..=total)
        .map(|l| match l.cmp(&(la + 1)) {
            std::cmp::Ordering::Less => l,
            std::cmp::Ordering::Equal => total,
            std::cmp::Ordering::Greater => l - 1,
        })
        .collect();
    let tree = joined.relabel(&perm).unwrap();
    PointedTree::new(tree, total).unwrap()
}

/// The two trees obtained by regrouping the four subtrees around an inner
/// edge. If the edge joins `x` (subtrees `A1`, `A2`) and `y` (subtrees `B1`,
/// `B2`), each pair ordered by smallest leaf label, the results are
/// `(A1 B1)(A2 B2)` and `(A1 B2)(A2 B1)`.
pub fn elementary_mutations(t: &Tree, inner_edge: usize) -> Result<[Tree; 2], TreeError> {
    if inner_edge >= t.edge_count() {
        return Err(TreeError::NoSuchEdge(inner_edge));
    }
    if !t.is_inner_edge(inner_edge) {
        return Err(TreeError::NotInnerEdge(inner_edge));
    }
    let (x, y) = t.edge(inner_edge);
    if t.degree(x) != 3 || t.degree(y) != 3 {
        return Err(TreeError::NotTrivalent);
    }
    let mut xs: Vec<usize> = t.neighbors(x).filter(|&w| w != y).collect();
    xs.sort_by_key(|&w| t.side_min_leaf(x, w));
    let mut ys: Vec<usize> = t.neighbors(y).filter(|&w| w != x).collect();
    ys.sort_by_key(|&w| t.side_min_leaf(y, w));

    let swap = |b: usize| -> Tree {
        let a2 = xs[1];
        let mut raw = t.to_raw();
        for e in raw.edges.iter_mut() {
            if *e == (x, a2) || *e == (a2, x) {
                *e = (y, a2);
            } else if *e == (y, b) || *e == (b, y) {
                *e = (x, b);
            }
        }
        Tree::from_raw(&raw, Valency::Trivalent).expect("mutation keeps a 3-valent tree")
    };
    Ok([swap(ys[0]), swap(ys[1])])
}

/// One step of a mutation path: apply `elementary_mutations(t, edge)[choice]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MutationStep {
    pub edge: usize,
    pub choice: usize,
}

/// Mutation steps that turn `t` into a caterpillar. Each step lengthens the
/// longest path of inner nodes by one, so the path has at most as many
/// steps as `t` has inner edges.
pub fn mutation_path_to_caterpillar(t: &Tree) -> Result<Vec<MutationStep>, TreeError> {
    if !t.is_trivalent() {
        return Err(TreeError::NotTrivalent);
    }
    let mut cur = t.clone();
    let mut steps = Vec::new();
    while !cur.is_caterpillar() {
        let spine = longest_inner_path(&cur);
        let on_spine: BTreeSet<usize> = spine.iter().copied().collect();
        let (x, y) = spine
            .iter()
            .find_map(|&x| {
                cur.neighbors(x)
                    .find(|&w| !cur.is_leaf(w) && !on_spine.contains(&w))
                    .map(|w| (x, w))
            })
            .expect("a non-caterpillar has an inner node off its longest path");
        let edge = cur.edge_between(x, y).unwrap();
        let step = MutationStep { edge, choice: 0 };
        cur = apply_mutations(&cur, &[step])?;
        steps.push(step);
    }
    Ok(steps)
}

/// Replay mutation steps.
pub fn apply_mutations(t: &Tree, steps: &[MutationStep]) -> Result<Tree, TreeError> {
    let mut cur = t.clone();
    for s in steps {
        let [a, b] = elementary_mutations(&cur, s.edge)?;
        cur = if s.choice == 0 { a } else { b };
    }
    Ok(cur)
}

fn longest_inner_path(t: &Tree) -> Vec<usize> {
    let inner = t.inner_nodes();
    let bfs = |start: usize| -> (usize, Vec<usize>) {
        let mut prev = vec![usize::MAX; t.vertex_count()];
        let mut seen = vec![false; t.vertex_count()];
        let mut q = VecDeque::from([start]);
        seen[start] = true;
        let mut last = start;
        while let Some(v) = q.pop_front() {
            last = v;
            for w in t.neighbors(v) {
                if !seen[w] && !t.is_leaf(w) {
                    seen[w] = true;
                    prev[w] = v;
                    q.push_back(w);
                }
            }
        }
        (last, prev)
    };
    let (far, _) = bfs(inner[0]);
    let (other, prev) = bfs(far);
    let mut path = vec![other];
    while *path.last().unwrap() != far {
        path.push(prev[*path.last().unwrap()]);
    }
    path
}

/// Every labelled 3-valent tree reachable from `t` by elementary mutations.
/// Exponential in the number of leaves; meant for small trees.
pub fn mutation_orbit(t: &Tree) -> Result<Vec<Tree>, TreeError> {
    let mut seen: BTreeMap<String, Tree> = BTreeMap::new();
    let mut queue = VecDeque::from([t.clone()]);
    seen.insert(t.canonical_form(), t.clone());
    while let Some(cur) = queue.pop_front() {
        for e in cur.inner_edges() {
            for next in elementary_mutations(&cur, e)? {
                if let Entry::Vacant(slot) = seen.entry(next.canonical_form()) {
                    slot.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(seen.into_values().collect())
}
