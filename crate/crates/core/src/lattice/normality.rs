//! Normality witnesses: every lattice point of `nΔ` written as a sum of
//! `n` vertices.

use std::collections::HashSet;

use serde::Serialize;

use super::points::{lattice_points, LatticeKind};
use super::polytope::SubcubePolytope;

/// `sums[k]` is the set of `k`-fold sums of vertices, for `k = 0..=n`.
pub fn vertex_sums(p: &SubcubePolytope, n: u32) -> Vec<HashSet<Vec<i64>>> {
    let mut sums = vec![HashSet::from([vec![0; p.ambient_dim]])];
    for k in 1..=n as usize {
        let next: HashSet<Vec<i64>> = sums[k - 1]
            .iter()
            .flat_map(|s| {
                p.vertices
                    .iter()
                    .map(move |v| s.iter().zip(v).map(|(a, b)| a + b).collect())
            })
            .collect();
        sums.push(next);
    }
    sums
}

/// Write `x` as a sum of `sums.len() - 1` vertices, if possible.
pub fn decompose(
    p: &SubcubePolytope,
    sums: &[HashSet<Vec<i64>>],
    x: &[i64],
) -> Option<Vec<Vec<i64>>> {
    let mut rest = x.to_vec();
    let mut parts = Vec::new();
    for k in (1..sums.len()).rev() {
        if !sums[k].contains(&rest) {
            return None;
        }
        let v = p.vertices.iter().find(|v| {
            let r: Vec<i64> = rest.iter().zip(v.iter()).map(|(a, b)| a - b).collect();
            sums[k - 1].contains(&r)
        })?;
        rest.iter_mut().zip(v).for_each(|(a, b)| *a -= b);
        parts.push(v.clone());
    }
    Some(parts)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityReport {
    pub n: u32,
    pub points: usize,
    pub decomposed: usize,
    pub counterexamples: Vec<Vec<i64>>,
    /// Sums of `n` vertices that are not lattice points of `nΔ`; always
    /// empty unless the polytope data is inconsistent.
    pub stray_sums: usize,
}

impl NormalityReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty() && self.stray_sums == 0
    }
}

/// Compare the normalized lattice points of `nΔ` with the `n`-fold vertex
/// sums, decomposing each point explicitly.
pub fn normality_check(p: &SubcubePolytope, n: u32) -> NormalityReport {
    let sums = vertex_sums(p, n);
    let points = lattice_points(p, n, LatticeKind::Normalized);
    let mut counterexamples = Vec::new();
    let mut decomposed = 0;
    for x in &points {
        match decompose(p, &sums, x) {
            Some(parts) => {
                debug_assert_eq!(parts.len(), n as usize);
                decomposed += 1;
            }
            None => counterexamples.push(x.clone()),
        }
    }
    let listed: HashSet<&Vec<i64>> = points.iter().collect();
    let stray_sums = sums[n as usize].iter().filter(|s| !listed.contains(s)).count();
    NormalityReport {
        n,
        points: points.len(),
        decomposed,
        counterexamples,
        stray_sums,
    }
}
