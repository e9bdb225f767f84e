//! Randomized invariants across modules.

use antiprim::*;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = CodeParams> {
    prop::sample::select(vec![(3u64, 2u32), (3, 3), (3, 4), (3, 5), (4, 2), (4, 3), (4, 5), (5, 3), (5, 4), (7, 3), (8, 3), (9, 2)])
        .prop_map(|(q, m)| CodeParams::new(q, m).unwrap())
}

fn with_delta() -> impl Strategy<Value = (CodeParams, u128)> {
    params().prop_flat_map(|p| {
        let n = p.n().unwrap();
        (Just(p), 2..=n)
    })
}

proptest! {
    #[test]
    fn leader_is_orbit_minimum(p in params(), seed in any::<u64>()) {
        let n = p.n().unwrap();
        let x = 1 + (seed as u128) % (n - 1);
        let c = orbit(&p, x).unwrap();
        let els = c.elements.unwrap();
        prop_assert_eq!(c.leader, els[0]);
        prop_assert_eq!(coset_leader_of(&p, x).unwrap(), c.leader);
        prop_assert_eq!(is_coset_leader(&p, x).unwrap(), x == c.leader);
        prop_assert!(c.leader <= n / 2);
    }

    #[test]
    fn table_rows_match_point_queries((p, delta) in with_delta(), b in 0u8..=1) {
        let spec = DefiningSetSpec::new(p.clone(), delta, b).unwrap();
        let row = dimension_table(&p, delta..=delta, b).unwrap().remove(0);
        prop_assert_eq!(row.dimension, dimension(&spec).unwrap());
        prop_assert_eq!(row.t_size, defining_set_size(&spec).unwrap());
        let narrow = DefiningSetSpec::new(p, delta, 1).unwrap();
        prop_assert_eq!(row.bose_distance, bose_distance(&narrow).unwrap());
    }

    #[test]
    fn closed_form_rows_agree_when_present((p, delta) in with_delta(), b in 0u8..=1) {
        let spec = DefiningSetSpec::new(p, delta, b).unwrap();
        let direct = dimension(&spec).unwrap();
        for (d, label) in closed_form_candidates(&spec).unwrap() {
            prop_assert_eq!(d, direct, "{}", label);
        }
    }

    #[test]
    fn bose_distance_is_next_gap((p, delta) in with_delta()) {
        let spec = DefiningSetSpec::new(p.clone(), delta, 1).unwrap();
        let bose = bose_distance(&spec).unwrap();
        let n = p.n().unwrap();
        prop_assert!(bose >= delta);
        for x in delta..bose.min(n) {
            prop_assert!(!is_coset_leader(&p, x).unwrap());
        }
        if bose < n {
            prop_assert!(is_coset_leader(&p, bose).unwrap());
        } else {
            prop_assert_eq!(bose, n + 1);
        }
    }
}
