//! Property tests: format round-trips, order/relabeling invariances, and a
//! light solver cross-check. Heavier seeded sweeps live in the acceptance
//! suite; these stay quick enough to run on every change.

use proptest::prelude::*;

use slater_core::formulas::{ClauseSide, Cnf, Graph};
use slater_core::io;
use slater_core::modules::ModulePartition;
use slater_core::rng::SplitMix64;
use slater_core::solver::{contiguize, is_contiguous, min_fas_bruteforce, min_fas_dp};
use slater_core::tournament::{
    aggregate_majority, fas_of_ordering, fas_size_of_ordering, LinearOrder, Profile, Tournament,
};
use slater_core::verify::{
    random_all_false_instance, random_planted_module, random_tournament, random_weighted_digraph,
};

fn random_order(rng: &mut SplitMix64, n: usize) -> LinearOrder {
    let mut seq: Vec<u32> = (0..n as u32).collect();
    rng.shuffle(&mut seq);
    LinearOrder::new(seq, n).unwrap()
}

proptest! {
    #[test]
    fn tournament_file_round_trip(seed in any::<u64>(), n in 1usize..12) {
        let mut rng = SplitMix64::new(seed);
        let t = random_tournament(&mut rng, n);
        prop_assert_eq!(io::parse_tournament(&io::serialize_tournament(&t)).unwrap(), t);
    }

    #[test]
    fn profile_file_round_trip(seed in any::<u64>(), n in 1usize..10, k in 1usize..6) {
        let mut rng = SplitMix64::new(seed);
        let voters: Vec<LinearOrder> = (0..k).map(|_| random_order(&mut rng, n)).collect();
        let p = Profile::new(n, voters).unwrap();
        prop_assert_eq!(io::parse_profile(&io::serialize_profile(&p)).unwrap(), p);
    }

    #[test]
    fn modules_file_round_trip(seed in any::<u64>(), n in 1usize..12) {
        let mut rng = SplitMix64::new(seed);
        // Random composition of 0..n into classes.
        let mut ids: Vec<u32> = (0..n as u32).collect();
        rng.shuffle(&mut ids);
        let mut classes = Vec::new();
        let mut rest = ids.as_slice();
        while !rest.is_empty() {
            let take = 1 + rng.below(rest.len() as u64) as usize;
            classes.push(rest[..take].to_vec());
            rest = &rest[take..];
        }
        let mp = ModulePartition::new(n, classes).unwrap();
        prop_assert_eq!(io::parse_modules(&io::serialize_modules(&mp)).unwrap(), mp);
    }

    #[test]
    fn graph_file_round_trip(seed in any::<u64>(), n in 1usize..10) {
        let mut rng = SplitMix64::new(seed);
        let mut edges = Vec::new();
        for a in 0..n as u32 {
            for b in (a + 1)..n as u32 {
                if rng.chance() {
                    edges.push((a, b));
                }
            }
        }
        let g = Graph::new(n, &edges).unwrap();
        prop_assert_eq!(io::parse_graph(&io::serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn dimacs_round_trip(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let inst = random_all_false_instance(&mut rng, 5, 5);
        let sides: Vec<ClauseSide> = (0..inst.cnf().num_clauses())
            .map(|_| if rng.chance() { ClauseSide::Left } else { ClauseSide::Right })
            .collect();
        // Side tags here are arbitrary bytes to round-trip, not a valid
        // restriction, so go through the raw serializer.
        let text = io::serialize_dimacs(inst.cnf(), Some(inst.dvar()), Some(&sides));
        let file = io::parse_dimacs(&text).unwrap();
        prop_assert_eq!(&file.cnf, inst.cnf());
        prop_assert_eq!(file.dvar, Some(inst.dvar()));
        prop_assert_eq!(file.sides, Some(sides));
    }

    #[test]
    fn fas_size_invariant_under_relabeling(seed in any::<u64>(), n in 2usize..9) {
        let mut rng = SplitMix64::new(seed);
        let t = random_tournament(&mut rng, n);
        let ord = random_order(&mut rng, n);
        let relabel = random_order(&mut rng, n);
        let map = relabel.as_slice();
        let t2 = t.relabel(map);
        let ord2 = LinearOrder::new(
            ord.as_slice().iter().map(|&v| map[v as usize]).collect(),
            n,
        )
        .unwrap();
        prop_assert_eq!(
            fas_size_of_ordering(&t, &ord).unwrap(),
            fas_size_of_ordering(&t2, &ord2).unwrap()
        );
    }

    #[test]
    fn reversed_fas_arcs_make_the_order_transitive(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = SplitMix64::new(seed);
        let t = random_tournament(&mut rng, n);
        let ord = random_order(&mut rng, n);
        let fas = fas_of_ordering(&t, &ord).unwrap();
        let flipped = Tournament::from_fn(n, |u, v| {
            let backward = fas.arcs.contains(&(u, v)) || fas.arcs.contains(&(v, u));
            t.arc(u, v) != backward
        });
        prop_assert_eq!(flipped.transitive_order().unwrap(), ord);
    }

    #[test]
    fn odd_profiles_aggregate_with_odd_margins(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = SplitMix64::new(seed);
        let voters: Vec<LinearOrder> = (0..7).map(|_| random_order(&mut rng, n)).collect();
        let p = Profile::new(n, voters).unwrap();
        let out = aggregate_majority(&p).unwrap();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                let margin = out.margins.margin(u, v);
                prop_assert!(margin.abs() % 2 == 1 && margin.abs() <= 7);
                prop_assert_eq!(out.tournament.arc(u, v), margin > 0);
            }
        }
    }

    #[test]
    fn dp_matches_brute_force(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = SplitMix64::new(seed);
        let g = random_weighted_digraph(&mut rng, n, 6);
        let b = min_fas_bruteforce(&g).unwrap();
        let d = min_fas_dp(&g, None).unwrap();
        prop_assert_eq!(b.value, d.value);
        prop_assert_eq!(&b.order, &d.order);
        // The reported order must actually cost the reported value.
        prop_assert_eq!(g.fas_weight_of_ordering(&d.order), d.value);
    }

    #[test]
    fn contiguous_cost_decomposes_into_quotient_plus_internal(
        seed in any::<u64>(),
        max_n in 4usize..10,
    ) {
        // For a module-contiguous ordering, the implied cost splits into
        // the weighted quotient cost of the induced class order plus the
        // internal cost of each class's induced suborder.
        let mut rng = SplitMix64::new(seed);
        let (t, mp) = slater_core::verify::random_product_tournament(&mut rng, max_n);
        let q = slater_core::modules::quotient(&t, &mp).unwrap();

        let mut class_order: Vec<u32> = (0..mp.len() as u32).collect();
        rng.shuffle(&mut class_order);
        let mut seq: Vec<u32> = Vec::with_capacity(t.n());
        let mut internal_total = 0u64;
        for &ci in &class_order {
            let mut class = mp.class(ci as usize).to_vec();
            rng.shuffle(&mut class);
            let sub = t.induced(&class); // vertex i of sub = class[i]
            internal_total +=
                fas_size_of_ordering(&sub, &LinearOrder::identity(class.len())).unwrap();
            seq.extend(&class);
        }
        let ord = LinearOrder::new(seq, t.n()).unwrap();
        let quotient_cost = q
            .digraph
            .fas_weight_of_ordering(&LinearOrder::new(class_order, mp.len()).unwrap());
        prop_assert_eq!(
            fas_size_of_ordering(&t, &ord).unwrap(),
            quotient_cost + internal_total
        );
    }

    #[test]
    fn contiguize_contract(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let (t, mp) = random_planted_module(&mut rng, 9);
        let ord = random_order(&mut rng, t.n());
        let out = contiguize(&t, &mp, &ord).unwrap();
        prop_assert!(is_contiguous(&mp, &out));
        prop_assert!(
            fas_size_of_ordering(&t, &out).unwrap() <= fas_size_of_ordering(&t, &ord).unwrap()
        );
    }
}

#[test]
fn cnf_rejects_oversized_clauses() {
    assert!(Cnf::new(4, vec![vec![1, 2, -3, 4]]).is_err());
}
