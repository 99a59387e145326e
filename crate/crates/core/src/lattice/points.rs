//! Lattice points of dilated subcube polytopes by a pruned box scan.

use rayon::prelude::*;

use super::polytope::SubcubePolytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    /// All integer points.
    Full,
    /// Integer points on which every parity form is even.
    Normalized,
}

struct Scan<'a> {
    p: &'a SubcubePolytope,
    n: i64,
    kind: LatticeKind,
    /// Inequalities `a · x >= b`, equations split into two.
    rows: Vec<(Vec<i64>, i64)>,
    /// `slack[r][i]`: largest possible contribution of coordinates `i..`.
    slack: Vec<Vec<i64>>,
}

impl<'a> Scan<'a> {
    fn new(p: &'a SubcubePolytope, n: i64, kind: LatticeKind) -> Self {
        let mut rows: Vec<(Vec<i64>, i64)> =
            p.facets.iter().map(|f| (f.normal.clone(), f.offset * n)).collect();
        for q in &p.equations {
            rows.push((q.clone(), 0));
            rows.push((q.iter().map(|x| -x).collect(), 0));
        }
        let d = p.ambient_dim;
        let slack = rows
            .iter()
            .map(|(a, _)| {
                let mut s = vec![0; d + 1];
                for i in (0..d).rev() {
                    s[i] = s[i + 1] + a[i].max(0) * n;
                }
                s
            })
            .collect();
        Scan {
            p,
            n,
            kind,
            rows,
            slack,
        }
    }

    fn feasible(&self, partial: &[i64], depth: usize) -> bool {
        self.rows
            .iter()
            .zip(&self.slack)
            .zip(partial)
            .all(|(((_, b), s), acc)| acc + s[depth] >= *b)
    }

    /// Visit every point whose first coordinate is `first`, in
    /// lexicographic order.
    fn run(&self, first: i64, visit: &mut dyn FnMut(&[i64])) {
        let d = self.p.ambient_dim;
        if d == 0 {
            visit(&[]);
            return;
        }
        let mut x = vec![0i64; d];
        let mut partial = vec![vec![0i64; self.rows.len()]; d + 1];
        x[0] = first;
        for (r, (a, _)) in self.rows.iter().enumerate() {
            partial[1][r] = a[0] * first;
        }
        if !self.feasible(&partial[1], 1) {
            return;
        }
        self.descend(1, &mut x, &mut partial, visit);
    }

    fn descend(
        &self,
        depth: usize,
        x: &mut Vec<i64>,
        partial: &mut Vec<Vec<i64>>,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        let d = self.p.ambient_dim;
        if depth == d {
            if self.kind == LatticeKind::Full || self.p.in_normalized_lattice(x) {
                visit(x);
            }
            return;
        }
        for value in 0..=self.n {
            x[depth] = value;
            let (head, tail) = partial.split_at_mut(depth + 1);
            for (r, (a, _)) in self.rows.iter().enumerate() {
                tail[0][r] = head[depth][r] + a[depth] * value;
            }
            if self.feasible(&partial[depth + 1], depth + 1) {
                self.descend(depth + 1, x, partial, visit);
            }
        }
        x[depth] = 0;
    }
}

/// Fold over all lattice points of `n·p`, split by the first coordinate
/// across the rayon pool. The per-slab accumulators are returned in slab
/// order.
pub fn fold_lattice_points<A, I, F>(
    p: &SubcubePolytope,
    n: u32,
    kind: LatticeKind,
    init: I,
    fold: F,
) -> Vec<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, &[i64]) + Sync,
{
    let scan = Scan::new(p, n as i64, kind);
    if p.ambient_dim == 0 {
        let mut acc = init();
        scan.run(0, &mut |x| fold(&mut acc, x));
        return vec![acc];
    }
    (0..=n as i64)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            scan.run(first, &mut |x| fold(&mut acc, x));
            acc
        })
        .collect()
}

/// All lattice points of `n·p`, in lexicographic order.
pub fn lattice_points(p: &SubcubePolytope, n: u32, kind: LatticeKind) -> Vec<Vec<i64>> {
    fold_lattice_points(p, n, kind, Vec::new, |acc: &mut Vec<Vec<i64>>, x| {
        acc.push(x.to_vec())
    })
    .into_iter()
    .flatten()
    .collect()
}

pub fn count_lattice_points(p: &SubcubePolytope, n: u32, kind: LatticeKind) -> u64 {
    fold_lattice_points(p, n, kind, || 0u64, |acc, _| *acc += 1)
        .into_iter()
        .sum()
}

/// [`level_counts`] for several forms in one pass over the points.
pub fn level_counts_many(
    p: &SubcubePolytope,
    n: u32,
    kind: LatticeKind,
    forms: &[Vec<i64>],
) -> Vec<Vec<u64>> {
    let len = n as usize + 1;
    let slabs = fold_lattice_points(
        p,
        n,
        kind,
        || vec![vec![0u64; len]; forms.len()],
        |acc, x| {
            for (counts, form) in acc.iter_mut().zip(forms) {
                let k: i64 = form.iter().zip(x).map(|(a, b)| a * b).sum();
                counts[k as usize] += 1;
            }
        },
    );
    let mut out = vec![vec![0u64; len]; forms.len()];
    for s in slabs {
        for (o, c) in out.iter_mut().zip(s) {
            for (a, b) in o.iter_mut().zip(c) {
                *a += b;
            }
        }
    }
    out
}

/// Number of lattice points of `n·p` on each level set of `form`, for the
/// levels `0..=n`.
pub fn level_counts(p: &SubcubePolytope, n: u32, kind: LatticeKind, form: &[i64]) -> Vec<u64> {
    let slabs = fold_lattice_points(
        p,
        n,
        kind,
        || vec![0u64; n as usize + 1],
        |acc, x| {
            let k: i64 = form.iter().zip(x).map(|(a, b)| a * b).sum();
            acc[k as usize] += 1;
        },
    );
    let mut out = vec![0u64; n as usize + 1];
    for s in slabs {
        for (o, c) in out.iter_mut().zip(s) {
            *o += c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::polytope::polytope_of;
    use crate::tree::{caterpillar, star};

    #[test]
    fn dilation_zero_is_the_origin() {
        let p = polytope_of(&caterpillar(2).unwrap()).unwrap();
        assert_eq!(lattice_points(&p, 0, LatticeKind::Normalized), vec![vec![0; 7]]);
    }

    #[test]
    fn first_dilation_gives_the_vertices() {
        for t in [star(3).unwrap(), caterpillar(1).unwrap(), caterpillar(2).unwrap()] {
            let p = polytope_of(&t).unwrap();
            assert_eq!(lattice_points(&p, 1, LatticeKind::Normalized), p.vertices);
            assert_eq!(lattice_points(&p, 1, LatticeKind::Full), p.vertices);
        }
    }

    #[test]
    fn tetrahedron_counts_match_brute_force() {
        let p = polytope_of(&star(3).unwrap()).unwrap();
        for n in 0..6u32 {
            let n64 = n as i64;
            let mut brute = 0;
            for a in 0..=n64 {
                for b in 0..=n64 {
                    for c in 0..=n64 {
                        let ok = a + b + c <= 2 * n64
                            && a <= b + c
                            && b <= a + c
                            && c <= a + b
                            && (a + b + c) % 2 == 0;
                        brute += ok as u64;
                    }
                }
            }
            assert_eq!(count_lattice_points(&p, n, LatticeKind::Normalized), brute);
        }
    }
}
