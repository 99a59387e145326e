//! Property tests for the algebraic invariants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

use phylotoric::ehrhart::{star, star_by_definition, RationalPolynomial, SymmetricSequence};
use phylotoric::ideal::socket_string;
use phylotoric::lattice::{network_of_socket, polytope_of, socket_of, Network, Socket, TreeCover};
use phylotoric::verify::labelled_trees;
use phylotoric::Tree;

fn symmetric(half: Vec<u32>, odd: bool) -> SymmetricSequence {
    let mut values: Vec<u64> = half.iter().map(|&x| x.into()).collect();
    let mirror: Vec<u64> = values.iter().rev().skip(usize::from(odd)).copied().collect();
    values.extend(mirror);
    SymmetricSequence::from_u64(&values).unwrap()
}

fn pair() -> impl Strategy<Value = (SymmetricSequence, SymmetricSequence)> {
    (1usize..6, any::<bool>()).prop_flat_map(|(half, odd)| {
        (
            prop::collection::vec(0u32..1000, half),
            prop::collection::vec(0u32..1000, half),
        )
            .prop_map(move |(a, b)| (symmetric(a, odd), symmetric(b, odd)))
    })
}

/// A labelled tree with 3 to 6 leaves.
fn any_tree() -> impl Strategy<Value = Tree> {
    (3usize..=6, any::<prop::sample::Index>()).prop_map(|(leaves, i)| {
        let trees = labelled_trees(leaves);
        trees[i.index(trees.len())].clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_is_commutative((f, g) in pair()) {
        prop_assert_eq!(star(&f, &g).unwrap(), star(&g, &f).unwrap());
    }

    #[test]
    fn star_matches_its_definition((f, g) in pair()) {
        prop_assert_eq!(star(&f, &g).unwrap(), star_by_definition(&f, &g).unwrap());
    }

    #[test]
    fn star_is_associative_on_triples(((f, g), h) in pair().prop_flat_map(|(f, g)| {
        let n = f.n();
        let h = prop::collection::vec(0u32..1000, n / 2 + 1)
            .prop_map(move |half| symmetric(half, n % 2 == 0));
        (Just((f, g)), h)
    })) {
        let left = star(&star(&f, &g).unwrap(), &h).unwrap();
        let right = star(&f, &star(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn sockets_round_trip(t in any_tree(), i in any::<prop::sample::Index>()) {
        let p = polytope_of(&t).unwrap();
        let u = &p.vertices[i.index(p.vertices.len())];
        let net = Network::new(&t, u.iter().map(|&x| x == 1).collect()).unwrap();
        let socket = socket_of(&t, &net);
        prop_assert_eq!(network_of_socket(&t, &socket).unwrap().to_vertex(), u.clone());
        let text = socket_string(&t, u);
        prop_assert_eq!(Socket::parse(&text).unwrap(), socket);
    }

    #[test]
    fn cover_locates_convex_combinations(
        t in any_tree(),
        weights in prop::collection::vec(0u32..50, 32),
    ) {
        let p = polytope_of(&t).unwrap();
        let total: u32 = weights.iter().take(p.vertices.len()).sum::<u32>() + 1;
        // the extra unit of weight goes to the first vertex
        let x: Vec<BigRational> = (0..t.edge_count())
            .map(|e| {
                let s: u32 = p.vertices.iter().zip(&weights).map(|(v, w)| v[e] as u32 * w).sum::<u32>()
                    + p.vertices[0][e] as u32;
                BigRational::new(s.into(), total.into())
            })
            .collect();
        let located = TreeCover::new(&t).unwrap().locate(&x).unwrap();
        prop_assert!(located.weights.iter().all(|w| !w.is_negative()));
        prop_assert_eq!(located.weights.iter().sum::<BigRational>(), BigRational::one());
        for e in 0..t.edge_count() {
            let coord: BigRational = located
                .vertices
                .iter()
                .zip(&located.weights)
                .map(|(v, w)| w * BigRational::from_integer(v[e].into()))
                .sum();
            prop_assert_eq!(&coord, &x[e]);
        }
    }

    #[test]
    fn interpolation_recovers_polynomials(coeffs in prop::collection::vec(-50i64..50, 1..8)) {
        let p = RationalPolynomial::from_integers(&coeffs);
        let points: Vec<(BigRational, BigRational)> = (0..coeffs.len() as i64)
            .map(|x| (BigRational::from_integer(x.into()), p.eval_int(x)))
            .collect();
        prop_assert_eq!(RationalPolynomial::interpolate(&points), p);
    }

    #[test]
    fn factored_form_is_the_same_polynomial(
        roots in prop::collection::vec(-5i64..5, 0..4),
        rest in prop::collection::vec(1i64..20, 1..4),
        denominator in 1i64..100,
    ) {
        let mut p = RationalPolynomial::constant(BigRational::new(BigInt::one(), denominator.into()));
        for &a in &roots {
            p = &p * &RationalPolynomial::from_integers(&[a, 1]);
        }
        p = &p * &RationalPolynomial::from_integers(&rest);
        let (scalar, found, remainder) = p.factored().unwrap();
        let mut back = RationalPolynomial::constant(scalar);
        for a in &found {
            back = &back * &RationalPolynomial::new(vec![BigRational::from_integer(a.clone()), BigRational::one()]);
        }
        back = &back * &RationalPolynomial::new(remainder.into_iter().map(BigRational::from_integer).collect());
        prop_assert_eq!(back, p);
    }
}
