use grafrepair::conflicts::{conflict_graph, conflicts, is_circular_conflict_free, topological_ordering};
use grafrepair::error::Error;
use grafrepair::fixtures;
use grafrepair::repair::{construct_repairing_set, repair_one, repair_set, RepairOptions};

#[test]
fn dep_chain_has_a_cycle() {
    let c = fixtures::c_dep_chain();
    assert!(!is_circular_conflict_free(&c));
    let cycle = conflict_graph(&c).find_cycle().expect("cycle");
    assert!(cycle.len() >= 2);
    assert!(matches!(construct_repairing_set(&c), Err(Error::Cyclic(_))));
}

#[test]
fn owner_deps_conflict_is_acyclic() {
    let c = fixtures::c_owner_deps();
    let g = conflict_graph(&c);
    assert!(g.successors(2).any(|n| n == 3));
    assert!(topological_ordering(&g).is_ok());
}

#[test]
fn single_feature_constraint_has_no_conflicts() {
    assert!(conflicts(&fixtures::c_one()).is_empty());
}

#[test]
fn satisfied_graph_is_left_alone() {
    let c = fixtures::c_one();
    let set = construct_repairing_set(&c).expect("set");
    let (h, trace) = repair_one(&fixtures::g1(), &c, &set, RepairOptions::default()).expect("repair");
    assert_eq!(h, fixtures::g1());
    assert!(trace.entries.is_empty());
}

#[test]
fn repair_of_g0_reaches_a_satisfying_graph() {
    let c = fixtures::c_one();
    let set = construct_repairing_set(&c).expect("set");
    for seed in 0..8 {
        let (h, trace) = repair_one(&fixtures::g0(), &c, &set, RepairOptions { seed, max_iterations: None }).expect("repair");
        assert!(c.satisfied_by(&h));
        assert!(!trace.entries.is_empty());
    }
}

#[test]
fn cyclic_constraint_set_is_refused() {
    let cs = [fixtures::c_clean_own(), fixtures::c_at_most_one()];
    let sets: Vec<_> = cs.iter().map(|c| construct_repairing_set(c).expect("set")).collect();
    let r = repair_set(&fixtures::g_mixed(), &cs, &sets, RepairOptions::default());
    assert!(matches!(r, Err(Error::Cyclic(_))), "{r:?}");
}

#[test]
fn iteration_cap_is_reported() {
    let c = fixtures::c_one();
    let set = construct_repairing_set(&c).expect("set");
    let r = repair_one(&fixtures::g0(), &c, &set, RepairOptions { seed: 0, max_iterations: Some(0) });
    assert!(matches!(r, Err(Error::IterationLimit(0))), "{r:?}");
}
