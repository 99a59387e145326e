//! Lattice-point counts of dilated tree polytopes: relative Ehrhart
//! sequences, Hilbert–Ehrhart polynomials and volume distributions.

pub mod polynomial;
pub mod sequence;
pub mod volume;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use polynomial::RationalPolynomial;
pub use sequence::{star, star_by_definition, star_power, SequenceError, SymmetricSequence};
pub use volume::{discrete_deviation, gnuplot_script, volume_distribution, VolumeDistribution};

use crate::lattice::points::level_counts;
use crate::lattice::{count_lattice_points, polytope_of, LatticeKind, PolytopeError};
use crate::tree::{PointedTree, Tree, TreeError};

#[derive(Debug, Error)]
pub enum EhrhartError {
    #[error("tree is not 3-valent")]
    NotTrivalent,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn require_trivalent(t: &Tree) -> Result<(), EhrhartError> {
    if t.is_trivalent() {
        Ok(())
    } else {
        Err(EhrhartError::NotTrivalent)
    }
}

/// Number of normalized lattice points of `nΔ` on each level of the
/// petiole coordinate of the pointed leaf, as `(1^n)^{⋆(|L|-1)}`.
pub fn relative_ehrhart(t: &PointedTree, n: usize) -> Result<SymmetricSequence, EhrhartError> {
    require_trivalent(t.tree())?;
    Ok(star_power(n, t.tree().leaf_count() - 1))
}

/// The same sequence by enumerating the lattice points of `nΔ`.
pub fn relative_ehrhart_by_enumeration(
    t: &PointedTree,
    n: usize,
) -> Result<SymmetricSequence, EhrhartError> {
    require_trivalent(t.tree())?;
    let p = polytope_of(t.tree())?;
    let mut form = vec![0; t.tree().edge_count()];
    form[t.tree().petiole(t.point())?] = 1;
    let counts = level_counts(&p, n as u32, LatticeKind::Normalized, &form);
    Ok(SymmetricSequence::from_u64(&counts).expect("level counts of a symmetric polytope"))
}

/// `h(n) = |nΔ ∩ M̂|` through the ⋆-product.
pub fn ehrhart_count(t: &Tree, n: usize) -> Result<BigInt, EhrhartError> {
    require_trivalent(t)?;
    Ok(star_power(n, t.leaf_count() - 1).sum())
}

/// `h(n)` by direct enumeration.
pub fn ehrhart_count_by_enumeration(t: &Tree, n: usize) -> Result<u64, EhrhartError> {
    require_trivalent(t)?;
    let p = polytope_of(t)?;
    Ok(count_lattice_points(&p, n as u32, LatticeKind::Normalized))
}

/// The Hilbert–Ehrhart polynomial, interpolated through `h(0), …, h(|E|)`.
pub fn hilbert_ehrhart_polynomial(t: &Tree) -> Result<RationalPolynomial, EhrhartError> {
    require_trivalent(t)?;
    let r = t.leaf_count() - 1;
    let points: Vec<(BigRational, BigRational)> = (0..=t.edge_count())
        .map(|n| {
            (
                BigRational::from_integer(n.into()),
                BigRational::from_integer(star_power(n, r).sum()),
            )
        })
        .collect();
    Ok(RationalPolynomial::interpolate(&points))
}

/// `|E|!` times the leading coefficient of the Hilbert–Ehrhart polynomial.
pub fn normalized_volume(t: &Tree) -> Result<BigRational, EhrhartError> {
    let h = hilbert_ehrhart_polynomial(t)?;
    let factorial: BigInt = (1..=t.edge_count()).map(BigInt::from).product();
    Ok(h.leading() * BigRational::from_integer(factorial))
}
