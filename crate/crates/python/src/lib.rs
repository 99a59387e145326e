//! Python bindings: trees, their polytopes, quadrics and Ehrhart data.

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use phylotoric_core::ehrhart::{self, volume_distribution as delta};
use phylotoric_core::ideal::{socket_equations, socket_string};
use phylotoric_core::lattice::{
    count_lattice_points, dual_vertices, face_lattice, gorenstein_check, polarity_check, polytope_of,
    LatticeKind, SubcubePolytope,
};
use phylotoric_core::tree::{elementary_mutations, mutation_orbit, mutation_path_to_caterpillar};
use phylotoric_core::{parse_tree, verify, PointedTree, Tree as CoreTree};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A leaf-labelled tree, parsed from Newick, an edge list, or a generator
/// such as `star:3`, `caterpillar:3` or `snowflake`.
#[pyclass(frozen, module = "phylotoric")]
struct Tree {
    inner: CoreTree,
}

impl Tree {
    fn polytope(&self) -> PyResult<SubcubePolytope> {
        polytope_of(&self.inner).map_err(value_error)
    }
}

#[pymethods]
impl Tree {
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        Ok(Tree {
            inner: parse_tree(source).map_err(value_error)?,
        })
    }

    fn __str__(&self) -> String {
        self.inner.canonical_form()
    }

    fn __repr__(&self) -> String {
        format!("Tree({:?})", self.inner.canonical_form())
    }

    fn __eq__(&self, other: &Tree) -> bool {
        self.inner.canonical_form() == other.inner.canonical_form()
    }

    #[getter]
    fn leaf_count(&self) -> usize {
        self.inner.leaf_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn inner_node_count(&self) -> usize {
        self.inner.inner_nodes().len()
    }

    fn is_caterpillar(&self) -> bool {
        self.inner.is_caterpillar()
    }

    /// Edges as (parent, child) vertex pairs, in coordinate order.
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    /// Vertices of the polytope as 0/1 lists over edges.
    fn vertices(&self) -> PyResult<Vec<Vec<i64>>> {
        Ok(self.polytope()?.vertices)
    }

    /// Socket bitstrings of the vertices, in vertex order.
    fn sockets(&self) -> PyResult<Vec<String>> {
        let p = self.polytope()?;
        Ok(p.vertices.iter().map(|u| socket_string(&self.inner, u)).collect())
    }

    /// Facet inequalities `normal . x >= offset`, normals doubled.
    fn facets(&self) -> PyResult<Vec<(Vec<i64>, i64)>> {
        Ok(self.polytope()?.facets.into_iter().map(|f| (f.normal, f.offset)).collect())
    }

    /// Dual vertices with doubled coordinates.
    fn dual_vertices(&self) -> Vec<Vec<i64>> {
        dual_vertices(&self.inner)
    }

    fn incidence_matrix(&self) -> PyResult<Vec<Vec<u64>>> {
        Ok(face_lattice(&self.polytope()?).map_err(value_error)?.entries)
    }

    fn polarity_holds(&self) -> PyResult<bool> {
        Ok(polarity_check(&self.inner).map_err(value_error)?.holds())
    }

    fn gorenstein_holds(&self) -> PyResult<bool> {
        Ok(gorenstein_check(&self.inner).map_err(value_error)?.holds)
    }

    /// Quadratic binomials in socket coordinates.
    fn quadrics(&self) -> PyResult<Vec<String>> {
        socket_equations(&self.inner).map_err(value_error)
    }

    /// Normalized lattice points of the polytope dilated by `n`, counted
    /// by enumeration.
    fn lattice_point_count(&self, n: u32) -> PyResult<u64> {
        Ok(count_lattice_points(&self.polytope()?, n, LatticeKind::Normalized))
    }

    /// Relative Ehrhart sequence of the given leaf at dilation `n`.
    #[pyo3(signature = (n, leaf = 1))]
    fn relative_ehrhart(&self, n: usize, leaf: u32) -> PyResult<Vec<BigInt>> {
        let pt = PointedTree::new(self.inner.clone(), leaf).map_err(value_error)?;
        Ok(ehrhart::relative_ehrhart(&pt, n).map_err(value_error)?.values().to_vec())
    }

    /// Coefficients of the Hilbert-Ehrhart polynomial, ascending, as
    /// fractions.
    fn hilbert_coefficients(&self) -> PyResult<Vec<BigRational>> {
        Ok(ehrhart::hilbert_ehrhart_polynomial(&self.inner)
            .map_err(value_error)?
            .coefficients()
            .to_vec())
    }

    /// The Hilbert-Ehrhart polynomial in factored display form.
    fn hilbert_polynomial(&self) -> PyResult<String> {
        Ok(ehrhart::hilbert_ehrhart_polynomial(&self.inner)
            .map_err(value_error)?
            .to_string())
    }

    fn normalized_volume(&self) -> PyResult<BigRational> {
        ehrhart::normalized_volume(&self.inner).map_err(value_error)
    }

    /// The two trees obtained by mutating at an inner edge.
    fn mutations(&self, edge: usize) -> PyResult<(Tree, Tree)> {
        let [a, b] = elementary_mutations(&self.inner, edge).map_err(value_error)?;
        Ok((Tree { inner: a }, Tree { inner: b }))
    }

    /// Mutation steps `(edge, choice)` leading to a caterpillar.
    fn path_to_caterpillar(&self) -> PyResult<Vec<(usize, usize)>> {
        Ok(mutation_path_to_caterpillar(&self.inner)
            .map_err(value_error)?
            .into_iter()
            .map(|s| (s.edge, s.choice))
            .collect())
    }

    /// All labelled trees reachable by elementary mutations.
    fn mutation_orbit(&self) -> PyResult<Vec<Tree>> {
        Ok(mutation_orbit(&self.inner)
            .map_err(value_error)?
            .into_iter()
            .map(|inner| Tree { inner })
            .collect())
    }
}

/// `(1^n)^{*r}` as a list of integers.
#[pyfunction]
fn star_power(n: usize, r: usize) -> Vec<BigInt> {
    ehrhart::star_power(n, r).values().to_vec()
}

/// Coefficients of the piece of `delta^r` on `[0, 1/2]`, ascending.
#[pyfunction]
fn volume_distribution(r: usize) -> Vec<BigRational> {
    delta(r).piece.coefficients().to_vec()
}

/// Run the numbered checks; returns `(id, title, passed, detail)` rows.
#[pyfunction]
#[pyo3(signature = (check = None, seed = None))]
fn run_checks(check: Option<u8>, seed: Option<u64>) -> PyResult<Vec<(u8, String, bool, String)>> {
    let seed = seed.unwrap_or(verify::DEFAULT_SEED);
    let results = match check {
        Some(id) => vec![verify::run_check(id, seed).ok_or_else(|| value_error(format!("no check {id}")))?],
        None => verify::run_all(seed),
    };
    Ok(results
        .into_iter()
        .map(|r| (r.id, r.title.to_string(), r.passed, r.detail))
        .collect())
}

#[pymodule]
fn phylotoric(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Tree>()?;
    m.add_function(wrap_pyfunction!(star_power, m)?)?;
    m.add_function(wrap_pyfunction!(volume_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
