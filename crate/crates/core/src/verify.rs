//! The numbered end-to-end checks run by `phylotoric verify`.
//!
//! Each check returns a one-line detail string on success and a
//! description of the first mismatch on failure. Reference data that is
//! too bulky to inline lives in `golden/`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::ehrhart::{
    discrete_deviation, hilbert_ehrhart_polynomial, star, star_power, volume_distribution,
    RationalPolynomial, SymmetricSequence,
};
use crate::ideal::{quadratic_relations, socket_equations, socket_string, vanishing_check};
use crate::lattice::points::level_counts_many;
use crate::lattice::{
    count_lattice_points, face_lattice, gorenstein_check, normality_check, polarity_check, polytope_of,
    LatticeKind,
};
use crate::tree::{caterpillar, mutation_orbit, parse_tree, snowflake, star as star_tree, Tree};

pub const GOLDEN_SOCKETS_4LEAF: &str = include_str!("../golden/sockets_4leaf.txt");
pub const GOLDEN_QUADRICS: [(&str, &str); 3] = [
    ("((1,2),(3,4));", include_str!("../golden/quadrics_12_34.txt")),
    ("((1,3),(2,4));", include_str!("../golden/quadrics_13_24.txt")),
    ("((1,4),(2,3));", include_str!("../golden/quadrics_14_23.txt")),
];
pub const GOLDEN_INCIDENCE_SNOWFLAKE: &str = include_str!("../golden/incidence_snowflake.txt");
pub const GOLDEN_INCIDENCE_CATERPILLAR3: &str = include_str!("../golden/incidence_caterpillar3.txt");
pub const GOLDEN_HILBERT_6LEAF: &str = include_str!("../golden/hilbert_6leaf.txt");

/// Seed used when none is given on the command line.
pub const DEFAULT_SEED: u64 = 20_240_917;

pub const CHECKS: [(u8, &str); 11] = [
    (1, "vertex counts"),
    (2, "4-leaf sockets and quadrics"),
    (3, "star-product closed forms"),
    (4, "Hilbert-Ehrhart polynomials"),
    (5, "enumeration vs star-product counts"),
    (6, "face incidence matrices"),
    (7, "polarity"),
    (8, "Gorenstein index 4 and vertex-link divisions"),
    (9, "normality"),
    (10, "mutation invariance"),
    (11, "volume distributions"),
];

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// One labelled 3-valent tree per leaf count: star:3, then caterpillars.
pub fn base_tree(leaves: usize) -> Tree {
    if leaves == 3 {
        star_tree(3).unwrap()
    } else {
        caterpillar(leaves - 3).unwrap()
    }
}

/// Every labelled 3-valent tree with the given number of leaves (at least
/// three).
pub fn labelled_trees(leaves: usize) -> Vec<Tree> {
    mutation_orbit(&base_tree(leaves)).unwrap()
}

/// One tree per unlabelled shape, taken from the labelled trees.
pub fn shape_representatives(trees: &[Tree]) -> Vec<Tree> {
    let mut by_shape: BTreeMap<String, Tree> = BTreeMap::new();
    for t in trees {
        by_shape.entry(t.shape_form()).or_insert_with(|| t.clone());
    }
    by_shape.into_values().collect()
}

fn parse_matrix(text: &str) -> Vec<Vec<u64>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn lines(text: &str) -> Vec<String> {
    text.lines().filter(|l| !l.is_empty()).map(str::to_string).collect()
}

fn check_vertex_counts() -> Outcome {
    let cases = [
        ("star:3", 4),
        ("caterpillar:1", 8),
        ("caterpillar:2", 16),
        ("snowflake", 32),
        ("caterpillar:3", 32),
    ];
    for (src, want) in cases {
        let t = parse_tree(src).map_err(|e| e.to_string())?;
        let got = polytope_of(&t).map_err(|e| e.to_string())?.vertices.len();
        ensure(got == want, || format!("{src}: {got} vertices, expected {want}"))?;
    }
    Ok("4, 8, 16, 32, 32".into())
}

fn check_four_leaf(seed: u64) -> Outcome {
    let t = parse_tree("((1,2),(3,4));").unwrap();
    let p = polytope_of(&t).map_err(|e| e.to_string())?;
    let mut sockets: Vec<String> = p.vertices.iter().map(|u| socket_string(&t, u)).collect();
    sockets.sort();
    ensure(sockets == lines(GOLDEN_SOCKETS_4LEAF), || format!("sockets {sockets:?}"))?;
    for (src, golden) in GOLDEN_QUADRICS {
        let t = parse_tree(src).unwrap();
        let eqs = socket_equations(&t).map_err(|e| e.to_string())?;
        ensure(eqs == lines(golden), || format!("{src}: {eqs:?}"))?;
        let rels = quadratic_relations(&polytope_of(&t).unwrap());
        ensure(vanishing_check(&rels, 20, seed), || format!("{src}: relation does not vanish"))?;
    }
    Ok("8 sockets, 3 x 2 quadrics byte-exact".into())
}

fn check_star_closed_forms() -> Outcome {
    for n in 0..=50usize {
        let two = star_power(n, 2);
        let three = star_power(n, 3);
        for k in 0..=n {
            let (kb, nb) = (BigInt::from(k), BigInt::from(n));
            let rect = (&kb + 1) * (&nb - &kb + 1);
            ensure(two.get(k) == &rect, || format!("(1^{n})^*2({k}) = {}", two.get(k)))?;
            let cubic = &rect * (&nb * &nb + &kb * &nb - &kb * &kb + 5 * &nb + 6);
            ensure(three.get(k) * 6 == cubic, || format!("(1^{n})^*3({k}) = {}", three.get(k)))?;
        }
    }
    Ok("n <= 50, all k".into())
}

fn poly_from_factors(scale: (i64, i64), roots: &[i64], rest: &[i64]) -> RationalPolynomial {
    let mut p = RationalPolynomial::from_integers(rest);
    for &a in roots {
        p = &p * &RationalPolynomial::from_integers(&[a, 1]);
    }
    p.scale(&BigRational::new(scale.0.into(), scale.1.into()))
}

fn check_hilbert() -> Outcome {
    let six = poly_from_factors((1, 22680), &[1, 2, 3], &[3780, 8988, 9511, 5616, 1942, 372, 31]);
    let cases = [
        ("star:3", poly_from_factors((1, 6), &[1, 2, 3], &[1])),
        ("caterpillar:1", poly_from_factors((1, 30), &[1, 2, 3], &[5, 4, 1])),
        ("snowflake", six.clone()),
        ("caterpillar:3", six),
    ];
    for (src, want) in cases {
        let t = parse_tree(src).unwrap();
        let h = hilbert_ehrhart_polynomial(&t).map_err(|e| e.to_string())?;
        ensure(h == want, || format!("{src}: {h}"))?;
    }
    let h = hilbert_ehrhart_polynomial(&snowflake()).unwrap().to_string();
    ensure(h == GOLDEN_HILBERT_6LEAF.trim(), || format!("display {h}"))?;
    Ok(h)
}

fn check_enumeration() -> Outcome {
    let h = hilbert_ehrhart_polynomial(&snowflake()).unwrap();
    let mut seen = Vec::new();
    for t in [snowflake(), caterpillar(3).unwrap()] {
        let p = polytope_of(&t).unwrap();
        for n in 0..=3usize {
            let brute = count_lattice_points(&p, n as u32, LatticeKind::Normalized);
            let starred = star_power(n, 5).sum();
            ensure(BigInt::from(brute) == starred, || format!("{t} n={n}: {brute} vs {starred}"))?;
            ensure(h.eval_int(n as i64) == BigRational::from_integer(starred.clone()), || {
                format!("polynomial at {n}")
            })?;
            if seen.len() <= n {
                seen.push(brute);
            }
        }
    }
    ensure(seen[1] == 32 && seen[2] == 396, || format!("h(1), h(2) = {}, {}", seen[1], seen[2]))?;
    Ok(format!("h(0..3) = {seen:?}"))
}

fn check_incidence() -> Outcome {
    let snow = face_lattice(&polytope_of(&snowflake()).unwrap()).map_err(|e| e.to_string())?;
    let cat = face_lattice(&polytope_of(&caterpillar(3).unwrap()).unwrap()).map_err(|e| e.to_string())?;
    ensure(snow.entries == parse_matrix(GOLDEN_INCIDENCE_SNOWFLAKE), || "snowflake matrix".into())?;
    ensure(cat.entries == parse_matrix(GOLDEN_INCIDENCE_CATERPILLAR3), || "caterpillar matrix".into())?;
    ensure(snow != cat, || "matrices coincide".into())?;
    Ok(format!("a14 = {} vs {}", snow.get(1, 4), cat.get(1, 4)))
}

fn check_polarity() -> Outcome {
    let mut count = 0;
    for leaves in 3..=6 {
        for t in labelled_trees(leaves) {
            let r = polarity_check(&t).map_err(|e| e.to_string())?;
            ensure(r.holds(), || format!("{t}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} labelled trees"))
}

fn check_gorenstein() -> Outcome {
    let trees: Vec<Tree> = (3..=6).flat_map(labelled_trees).collect();
    let mut vertices = 0;
    for t in &trees {
        let r = gorenstein_check(t).map_err(|e| e.to_string())?;
        ensure(r.holds, || format!("{t}"))?;
        vertices += r.certificates.len();
    }
    Ok(format!("{} trees, {vertices} vertex certificates", trees.len()))
}

fn check_normality() -> Outcome {
    let mut points = 0;
    for t in [snowflake(), caterpillar(3).unwrap()] {
        let p = polytope_of(&t).unwrap();
        for n in [2, 3] {
            let r = normality_check(&p, n);
            ensure(r.holds(), || format!("{t} n={n}: {} counterexamples", r.counterexamples.len()))?;
            points += r.points;
        }
    }
    Ok(format!("{points} points decomposed, 0 counterexamples"))
}

/// Relative sequences of every leaf by enumeration, for `n = 0..=max_n`.
fn enumerated_sequences(t: &Tree, max_n: u32) -> Vec<Vec<Vec<u64>>> {
    let p = polytope_of(t).unwrap();
    let forms: Vec<Vec<i64>> = (1..=t.leaf_count() as u32)
        .map(|l| {
            let mut f = vec![0; t.edge_count()];
            f[t.petiole(l).unwrap()] = 1;
            f
        })
        .collect();
    (0..=max_n)
        .map(|n| level_counts_many(&p, n, LatticeKind::Normalized, &forms))
        .collect()
}

fn check_sequences(t: &Tree, max_n: u32, h: &RationalPolynomial) -> Result<(), String> {
    for (n, per_leaf) in enumerated_sequences(t, max_n).into_iter().enumerate() {
        let want = star_power(n, t.leaf_count() - 1);
        for (l, counts) in per_leaf.iter().enumerate() {
            let got = SymmetricSequence::from_u64(counts).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("{t} leaf {} n={n}: {got}", l + 1))?;
        }
        ensure(h.eval_int(n as i64) == BigRational::from_integer(want.sum()), || {
            format!("{t}: h({n})")
        })?;
    }
    Ok(())
}

/// Labelled orbits for up to 6 leaves to `n = 4`; for 7 leaves every
/// labelled tree to `n = 2` and one tree per shape to `n = 4`.
fn check_mutations() -> Outcome {
    let mut summary = Vec::new();
    for leaves in 4..=7 {
        let orbit = labelled_trees(leaves);
        let h = hilbert_ehrhart_polynomial(&orbit[0]).unwrap();
        for t in &orbit {
            let ht = hilbert_ehrhart_polynomial(t).unwrap();
            ensure(ht == h, || format!("{t}: {ht}"))?;
        }
        let full_depth = if leaves <= 6 { 4 } else { 2 };
        for t in &orbit {
            check_sequences(t, full_depth, &h)?;
        }
        if leaves == 7 {
            for t in shape_representatives(&orbit) {
                check_sequences(&t, 4, &h)?;
            }
        }
        summary.push(orbit.len().to_string());
    }
    for n in 0..=12 {
        let one = SymmetricSequence::ones(n);
        let two = star(&one, &one).unwrap();
        for r in 1..=4 {
            let left = star(&two, &star_power(n, r)).unwrap();
            let right = star(&one, &star_power(n, r + 1)).unwrap();
            ensure(left == right, || format!("associativity n={n} r={r}"))?;
        }
    }
    Ok(format!("orbits of size {}", summary.join(", ")))
}

fn check_volume() -> Outcome {
    let d2 = volume_distribution(2);
    ensure(d2.piece == RationalPolynomial::from_integers(&[0, 6, -6]), || format!("delta^2 = {:?}", d2.piece))?;
    for r in 1..=8 {
        let d = volume_distribution(r);
        ensure(d.total_mass().is_one(), || format!("mass of delta^{r}"))?;
        ensure((0..=1000).all(|i| d.eval_f64(i as f64 / 1000.0) >= 0.0), || format!("delta^{r} negative"))?;
        let t = BigRational::new(3.into(), 10.into());
        ensure(d.eval(&t) == d.eval(&(BigRational::one() - &t)), || format!("delta^{r} asymmetric"))?;
    }
    let mut worst = 0.0f64;
    for r in 2..=6 {
        let dev = discrete_deviation(r, 200);
        ensure(dev <= 0.05, || format!("r={r}: deviation {dev}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("max deviation {worst:.4} at n = 200"))
}

fn run_one(id: u8, seed: u64) -> Option<Outcome> {
    Some(match id {
        1 => check_vertex_counts(),
        2 => check_four_leaf(seed),
        3 => check_star_closed_forms(),
        4 => check_hilbert(),
        5 => check_enumeration(),
        6 => check_incidence(),
        7 => check_polarity(),
        8 => check_gorenstein(),
        9 => check_normality(),
        10 => check_mutations(),
        11 => check_volume(),
        _ => return None,
    })
}

/// Run one numbered check; `None` for an unknown number.
pub fn run_check(id: u8, seed: u64) -> Option<CheckResult> {
    let title = CHECKS.iter().find(|c| c.0 == id)?.1;
    let start = Instant::now();
    let outcome = run_one(id, seed)?;
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CheckResult {
        id,
        title,
        passed,
        detail,
        seconds,
    })
}

pub fn run_all(seed: u64) -> Vec<CheckResult> {
    CHECKS.iter().filter_map(|&(id, _)| run_check(id, seed)).collect()
}
