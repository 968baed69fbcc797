//! Property-based invariants: permutation algebra, perp/span laws, and
//! canonical JSON round-trips.

use std::sync::LazyLock;

use proptest::prelude::*;

use gq_core::constructions::{construct_grid, construct_w};
use gq_core::incidence::{validate_gq, Gq, IncidenceStructure};
use gq_core::perm::Permutation;

static W2: LazyLock<Gq> = LazyLock::new(|| validate_gq(&construct_w(2).unwrap()).unwrap());

fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just(()).prop_perturb(move |_, mut rng| {
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            images.swap(i, j);
        }
        Permutation::from_images(images).unwrap()
    })
}

proptest! {
    #[test]
    fn compose_with_inverse_is_identity(p in arb_perm(12), q in arb_perm(12)) {
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert!(p.inverse().compose(&p).is_identity());
        // right action: x^(pq) = (x^p)^q
        let pq = p.compose(&q);
        for x in 0..12 {
            prop_assert_eq!(pq.apply(x), q.apply(p.apply(x)));
        }
        // (pq)^-1 = q^-1 p^-1
        prop_assert_eq!(pq.inverse(), q.inverse().compose(&p.inverse()));
    }

    #[test]
    fn conjugation_preserves_cycle_type(p in arb_perm(10), a in arb_perm(10)) {
        let conj = p.conjugate_by(&a);
        let mut original: Vec<usize> = p.cycles().iter().map(|c| c.len()).collect();
        let mut conjugated: Vec<usize> = conj.cycles().iter().map(|c| c.len()).collect();
        original.sort_unstable();
        conjugated.sort_unstable();
        prop_assert_eq!(original, conjugated);
        prop_assert_eq!(p.order(), conj.order());
    }

    #[test]
    fn perp_is_antitone_and_span_is_extensive(
        subset in proptest::collection::btree_set(0usize..15, 1..5)
    ) {
        let gq = &*W2;
        let pts: Vec<usize> = subset.into_iter().collect();
        let perp_all = gq.perp(&pts).unwrap();
        // antitone against the first-point subset
        let perp_one = gq.perp(&pts[..1]).unwrap();
        prop_assert!(perp_all.iter().all(|p| perp_one.contains(p)));
        // extensive span and stable perp
        let span = gq.span(&pts).unwrap();
        prop_assert!(pts.iter().all(|p| span.contains(p)));
        prop_assert_eq!(gq.perp(&span).unwrap(), perp_all);
    }

    #[test]
    fn grid_json_round_trip_is_byte_stable(a in 1usize..5, b in 1usize..5) {
        let g = construct_grid(a, b);
        let json = g.to_json();
        let back = IncidenceStructure::from_json(&json).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_json(), json);
    }
}
