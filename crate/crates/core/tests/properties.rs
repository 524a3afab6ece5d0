mod common;

use grafrepair::condition::graph_satisfies;
use grafrepair::consistency::{is_direct_increasing, is_direct_maintaining, is_increasing, is_maintaining};
use grafrepair::fixtures;
use grafrepair::fuzz::{random_constraint, random_graph, random_rule};
use grafrepair::graph::{count_monomorphisms, find_isomorphism, monomorphisms, Morphism};
use grafrepair::repair::{apply_sequence_at, apply_stepwise, construct_repairing_set, repair_one, RepairOptions};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{naive_monos, naive_satisfies};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn monomorphism_count_matches_backtracking(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_graph(&mut r, 3, 3);
        let g = random_graph(&mut r, 5, 6);
        prop_assert_eq!(count_monomorphisms(&p, &g), naive_monos(&p, &g, &Morphism::new()).len());
        for m in monomorphisms(&p, &g) {
            prop_assert!(m.is_mono(&p, &g));
        }
    }

    #[test]
    fn satisfaction_matches_unfolding(seed in any::<u64>(), nlvl in 1usize..=4) {
        let mut r = rng(seed);
        let c = random_constraint(&mut r, nlvl, 0.3);
        let g = random_graph(&mut r, 4, 5);
        let cond = c.to_condition();
        prop_assert_eq!(graph_satisfies(&g, &cond), naive_satisfies(&g, &Morphism::new(), &cond));
        prop_assert_eq!(c.satisfied_by(&g), graph_satisfies(&g, &cond));
    }

    #[test]
    fn kmax_is_a_satisfied_layer(seed in any::<u64>(), nlvl in 1usize..=5) {
        let mut r = rng(seed);
        let c = random_constraint(&mut r, nlvl, 0.3);
        let g = random_graph(&mut r, 4, 5);
        let k = c.kmax(&g);
        prop_assert_eq!(c.satisfied_by(&g), k == nlvl as i32 - 1);
        if k >= 0 {
            prop_assert!(c.satisfied_up_to(&g, k));
        }
        if !c.satisfied_by(&g) && k + 2 < nlvl as i32 - 1 {
            prop_assert!(!c.satisfied_up_to(&g, k + 2));
        }
    }

    #[test]
    fn direct_notions_imply_plain_ones(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_constraint(&mut r, 3, 0.3);
        let g = random_graph(&mut r, 4, 4);
        let rule = random_rule(&mut r, 2);
        for m in rule.applicable_matches(&g).into_iter().take(4) {
            let t = rule.apply(&g, &m).expect("applicable");
            if is_direct_maintaining(&t, &c) {
                prop_assert!(is_maintaining(&t, &c));
            }
            if is_direct_increasing(&t, &c) {
                prop_assert!(is_increasing(&t, &c) && is_direct_maintaining(&t, &c));
            }
        }
    }

    #[test]
    fn concurrent_rule_agrees_with_stepwise_application(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_constraint(&mut r, 3, 0.3);
        let Ok(set) = construct_repairing_set(&c) else { return Ok(()) };
        let g = random_graph(&mut r, 4, 4);
        for seq in set.sequences.values() {
            for p in monomorphisms(seq.start(), &g).into_iter().take(3) {
                let whole = apply_sequence_at(seq, &p, &g);
                let steps = apply_stepwise(seq, &p, &g);
                match (whole, steps) {
                    (Ok(w), Ok(s)) => {
                        let last = s.last().map_or(&g, |t| &t.h);
                        prop_assert!(find_isomorphism(&w.h, last).is_some());
                    }
                    (Err(_), Err(_)) => {}
                    (w, s) => prop_assert!(false, "disagree: {} vs {}", w.is_ok(), s.is_ok()),
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn repair_yields_a_satisfying_graph(seed in any::<u64>(), pick in 0usize..6) {
        let cs = [
            fixtures::c_one(),
            fixtures::c_two(),
            fixtures::c_some_class(),
            fixtures::c_has_dep(),
            fixtures::c_clean_own(),
            fixtures::c_owner_deps(),
        ];
        let c = &cs[pick];
        let set = construct_repairing_set(c).expect("constructed set");
        let g = random_graph(&mut rng(seed), 4, 5);
        let opts = RepairOptions { seed, max_iterations: None };
        let (h, trace) = repair_one(&g, c, &set, opts).expect("repair");
        prop_assert!(c.satisfied_by(&h));
        if c.satisfied_by(&g) {
            prop_assert!(trace.entries.is_empty());
            prop_assert_eq!(&h, &g);
        }
        let (h2, trace2) = repair_one(&g, c, &set, opts).expect("repair");
        prop_assert_eq!(h, h2);
        prop_assert_eq!(trace.to_jsonl(), trace2.to_jsonl());
    }
}
