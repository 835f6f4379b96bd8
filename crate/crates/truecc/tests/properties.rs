//! Property tests over randomly generated desk-scale structures.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use truecc::doc::{self, Document};
use truecc::enumerate::{random_event_structure, random_rooted_connected_st};
use truecc::equiv::st_isomorphic;
use truecc::related::{config_into_st_filled, event_into_st, st_into_config};
use truecc::st::StStructure;
use truecc::stc::{chu3_decode, chu3_encode, chu4_decode, chu4_encode, st_to_stc, stc_project_st};
use truecc::translate::{quotient_events, EventListing};

fn arb_st() -> impl Strategy<Value = StStructure> {
    (any::<u64>(), 2..5usize, 2..8u32).prop_map(|(seed, n, tenths)| {
        let mut rng = StdRng::seed_from_u64(seed);
        random_rooted_connected_st(n, &mut rng, f64::from(tenths) / 10.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    /// The closure constraint holds for every configuration.
    #[test]
    fn closure_constraint_holds(st in arb_st()) {
        for c in st.configs() {
            prop_assert!(st.contains(truecc::st::StConfig::new(c.started, c.started)));
        }
    }

    /// Adjacent-closure coincides with closure under single events on
    /// rooted connected structures.
    #[test]
    fn adjacency_equivalence(st in arb_st()) {
        prop_assert_eq!(
            st.is_adjacent_closed().is_ok(),
            st.closed_under_single_events().is_ok()
        );
    }

    /// Rooted paths to a configuration all have its dimension as length,
    /// and the per-configuration relations are disjoint.
    #[test]
    fn path_length_and_disjointness(st in arb_st()) {
        for c in st.configs() {
            let paths = st.enumerate_rooted_paths(c, 10_000).unwrap();
            prop_assert!(paths.iter().all(|p| p.len() == c.dim()));
            let conc = st.concurrency(c).unwrap();
            let caus = st.causality(c).unwrap();
            for &(e, f) in &conc {
                prop_assert!(!caus.contains(&(e, f)) && !caus.contains(&(f, e)));
            }
        }
    }

    /// On stable structures concurrency is exactly the complement of
    /// causality on pairs of started events.
    #[test]
    fn stable_interdefinability(st in arb_st()) {
        let rep = st.property_report();
        prop_assume!(rep.stable);
        for c in st.configs() {
            let conc = st.concurrency(c).unwrap();
            let caus = st.causality(c).unwrap();
            let members: Vec<usize> = c.started.iter().collect();
            for (i, &e) in members.iter().enumerate() {
                for &f in &members[i + 1..] {
                    let related = caus.contains(&(e, f)) || caus.contains(&(f, e));
                    prop_assert_eq!(conc.contains(&(e, f)), !related);
                }
            }
        }
    }

    /// Reachable parts are fixed points and stay valid.
    #[test]
    fn reachable_part_idempotent(st in arb_st()) {
        let r = st.reachable_part();
        prop_assert_eq!(r.reachable_part(), r.clone());
        prop_assert!(StStructure::new(r.events().to_vec(), r.configs().collect()).is_ok());
        if r.is_rooted() {
            prop_assert!(r.is_connected().is_ok());
        }
    }

    /// In-conflict sets never sit inside a started set.
    #[test]
    fn conflict_never_within_a_config(st in arb_st()) {
        let n = st.event_count();
        for mask in 0..(1u64 << n) {
            let set = truecc::event::EventSet(mask);
            if st.in_conflict(set).unwrap() {
                prop_assert!(!st.configs().any(|c| set.is_subset(c.started)));
            }
        }
    }

    /// Saving a loaded document is byte-identical.
    #[test]
    fn document_round_trip(st in arb_st()) {
        let bytes = doc::save(&Document::St(st));
        let loaded = doc::load(&bytes).unwrap();
        prop_assert_eq!(doc::save(&loaded), bytes);
    }

    /// The Chu encodings are exact inverses.
    #[test]
    fn chu_round_trips(st in arb_st()) {
        let chu = chu3_encode(&st);
        prop_assert_eq!(chu3_decode(&chu).unwrap(), st.clone());
        let stc = st_to_stc(&st);
        let chu = chu4_encode(&stc);
        prop_assert_eq!(chu4_decode(&chu).unwrap(), stc.clone());
        prop_assert_eq!(stc_project_st(&stc).unwrap(), st);
    }

    /// The filled-in translation is adjacent-closed and projects back.
    #[test]
    fn filled_translation_round_trip(st in arb_st()) {
        let c = st_into_config(&st);
        let filled = config_into_st_filled(&c);
        prop_assert!(filled.is_adjacent_closed().is_ok());
        prop_assert_eq!(st_into_config(&filled), c);
    }

    /// Event-structure translations keep rootedness and adjacency.
    #[test]
    fn event_structure_translation_properties(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let e = random_event_structure(2, &mut rng, 0.3);
        let st = event_into_st(&e);
        prop_assert!(st.is_adjacent_closed().is_ok());
        if e.is_rooted() {
            prop_assert!(st.is_rooted());
        }
        if e.is_rooted() && e.is_connected() {
            prop_assert!(st.is_connected().is_ok());
        }
        // Steps of the event structure are exactly the (Y,X) configs.
        for step in e.async_steps() {
            prop_assert!(st.contains(truecc::st::StConfig::new(step.to, step.from)));
        }
    }

    /// The identity quotient returns an isomorphic structure.
    #[test]
    fn identity_quotient_is_isomorphic(st in arb_st()) {
        let q = quotient_events(&st, &[]).unwrap();
        prop_assert!(st_isomorphic(&st, &q).is_some());
    }

    /// Translating through an automaton and back preserves the structure
    /// up to isomorphism on translatable inputs.
    #[test]
    fn hda_round_trip_on_translatable_structures(st in arb_st()) {
        prop_assume!(st.is_rooted());
        prop_assume!(st.is_adjacent_closed().is_ok());
        let listing = EventListing::default_for(&st);
        let sc = truecc::translate::st_into_sculpture(&st, &listing).unwrap();
        let back = truecc::translate::sculpture_into_st(&sc).unwrap();
        prop_assert!(st_isomorphic(&st, &back).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Causality extended with identity is a partial order on every
    /// configuration of a rooted connected structure.
    #[test]
    fn causality_is_a_partial_order(st in arb_st()) {
        for c in st.configs() {
            let caus = st.causality(c).unwrap();
            for &(a, b) in &caus {
                prop_assert!(a != b, "irreflexive");
                prop_assert!(!caus.contains(&(b, a)), "antisymmetric");
                for &(b2, d) in &caus {
                    if b2 == b {
                        prop_assert!(caus.contains(&(a, d)), "transitive");
                    }
                }
            }
        }
    }

    /// Isomorphic structures are hh-bisimilar.
    #[test]
    fn isomorphic_implies_hh_bisimilar(st in arb_st()) {
        prop_assume!(st.is_rooted());
        let renamed = StStructure::new(
            st.events()
                .iter()
                .map(|e| truecc::Event::new(format!("z{}", e.id), e.label.as_str()))
                .collect(),
            st.configs().collect(),
        )
        .unwrap();
        prop_assert!(st_isomorphic(&st, &renamed).is_some());
        prop_assert!(truecc::equiv::st_hh_bisimilar(&st, &renamed).unwrap().bisimilar);
    }
}
