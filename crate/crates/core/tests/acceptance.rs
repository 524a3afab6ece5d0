mod common;

use std::time::{Duration, Instant};

use grafrepair::acsynth::{basic_increasing_rule, classify_basic, increasing_ac_at_layer, increasing_targets, maintaining_ac_at_layer};
use grafrepair::condition::{satisfies, shift_over_morphism, Condition, Constraint};
use grafrepair::conflicts::{causes_conflict, causes_conflict_basic, is_circular_conflict_free};
use grafrepair::consistency::{classify_transformation, is_direct_increasing, is_direct_maintaining, Notion};
use grafrepair::fixtures::{self, DEP, FEATURE};
use grafrepair::fuzz::{all_graphs, random_constraint, random_graph, random_rule};
use grafrepair::graph::{glue, monomorphisms, Graph, Morphism};
use grafrepair::io::{parse_constraint, parse_graph, parse_morphism, parse_rule};
use grafrepair::repair::{construct_repairing_set, repair_one, repair_set, validate_repairing_set, RepairOptions};
use grafrepair::rewrite::{shift_over_rule, PlainRule, Rule, Transformation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{data_path, naive_satisfies};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: u64) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < Duration::from_secs(limit), || format!("took {:.1}s, limit {limit}s", t.as_secs_f64()))
}

fn fixture_constraints() -> Vec<(String, Constraint)> {
    fixtures::constraints().into_iter().map(|(n, c)| (n.to_string(), c)).collect()
}

fn random_constraints(seed: u64, count: usize, max_nlvl: usize) -> Vec<(String, Constraint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 1 + i % max_nlvl;
            (format!("random#{i}"), random_constraint(&mut rng, n, 0.3))
        })
        .collect()
}

fn base_rules() -> Vec<Rule> {
    vec![
        fixtures::add_f(),
        fixtures::del_dep(),
        fixtures::del_f(),
        fixtures::drop_owns(),
        fixtures::add_dep(),
        fixtures::add_class(),
    ]
}

fn c1_semantics() -> Outcome {
    let start = Instant::now();
    let mut conds: Vec<(String, Condition)> = Vec::new();
    for (name, c) in fixture_constraints().into_iter().chain(random_constraints(11, 30, 4)) {
        conds.push((name.clone(), c.to_condition()));
        for k in 0..c.nlvl() as i32 {
            conds.push((format!("{name}/cut{k}"), c.cut(k).map_err(|e| e.to_string())?));
        }
    }
    let mut hosts = all_graphs(3, 2);
    hosts.extend(fixtures::hosts());
    let mut pairs = 0;
    for (name, c) in &conds {
        for g in &hosts {
            pairs += 1;
            let fast = satisfies(g, &Morphism::new(), c);
            let slow = naive_satisfies(g, &Morphism::new(), c);
            ensure(fast == slow, || format!("{name} on {g:?}: matcher {fast}, exhaustive {slow}"))?;
        }
    }
    ensure(pairs >= 500, || format!("only {pairs} pairs"))?;
    within(start, 10)?;
    Ok(format!("{pairs} pairs agree"))
}

/// Conditions over `r` built from overlaps with constraint graphs.
fn conditions_over(r: &Graph, c: &Constraint) -> Vec<Condition> {
    let mut out = Vec::new();
    for j in 1..=c.nlvl() {
        for o in glue(r, c.graph(j), &Morphism::new(), false).into_iter().take(4) {
            let inner = shift_over_morphism(&c.scond(j), &o.right, &o.graph);
            out.push(Condition::forall(o.left.clone(), o.graph.clone(), inner.clone()));
            out.push(Condition::exists(o.left.clone(), o.graph.clone(), Condition::not(inner)));
        }
    }
    out
}

fn c2_shift() -> Outcome {
    let start = Instant::now();
    let hosts: Vec<Graph> = fixtures::hosts().into_iter().chain(all_graphs(3, 2).into_iter().step_by(3)).collect();
    let mut morphism_checks = 0;
    for (name, c) in fixture_constraints() {
        for i in 1..=c.nlvl() {
            let p = c.graph(i);
            let cond = c.scond(i);
            for x in [fixtures::c(), fixtures::f(), fixtures::ff()] {
                for o in glue(p, &x, &Morphism::new(), false) {
                    let shifted = shift_over_morphism(&cond, &o.left, &o.graph);
                    for g in &hosts {
                        for m in monomorphisms(&o.graph, g) {
                            morphism_checks += 1;
                            let lhs = satisfies(g, &m, &shifted);
                            let rhs = satisfies(g, &m.after(&o.left), &cond);
                            ensure(lhs == rhs, || format!("{name} layer {i}: shift disagrees on {g:?} at {m:?}"))?;
                        }
                    }
                }
            }
        }
    }
    let mut rules: Vec<PlainRule> = base_rules().into_iter().map(|r| r.plain).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    rules.extend((0..12).map(|_| random_rule(&mut rng, 3)));
    let mut rule_checks = 0;
    for r in &rules {
        for (name, c) in fixture_constraints().into_iter().take(6) {
            for ac in conditions_over(&r.rhs, &c) {
                let left = shift_over_rule(&ac, r);
                for g in &hosts {
                    for m in r.applicable_matches(g) {
                        let t = r.apply(g, &m).map_err(|e| e.to_string())?;
                        rule_checks += 1;
                        let a = satisfies(&t.g, &t.m, &left);
                        let b = satisfies(&t.h, &t.comatch, &ac);
                        ensure(a == b, || format!("rule shift for {name} disagrees on {g:?}"))?;
                    }
                }
            }
        }
    }
    within(start, 10)?;
    Ok(format!("{morphism_checks} morphism and {rule_checks} rule checks agree"))
}

fn brute_kmax(c: &Constraint, g: &Graph) -> i32 {
    (-1..c.nlvl() as i32)
        .filter(|k| *k == -1 || satisfies(g, &Morphism::new(), &c.cut(*k).expect("layer in range")))
        .max()
        .unwrap_or(-1)
}

fn c3_kmax() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut hosts = fixtures::hosts();
    hosts.extend((0..200).map(|_| random_graph(&mut rng, 5, 6)));
    let mut checks = 0;
    for (name, c) in fixture_constraints().into_iter().chain(random_constraints(34, 10, 4)) {
        for g in &hosts {
            checks += 1;
            let (a, b) = (c.kmax(g), brute_kmax(&c, g));
            ensure(a == b, || format!("{name}: kmax {a}, brute force {b} on {g:?}"))?;
        }
    }
    within(start, 5)?;
    Ok(format!("{checks} hosts agree"))
}

fn deep_witness_host() -> Graph {
    fixtures::cf().with_node(2, FEATURE).with_edge(1, 1, 2, DEP)
}

fn c4_layer_tables() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut instances = 0;
    for (name, c) in fixture_constraints().into_iter().chain(random_constraints(45, 40, 4)) {
        let n = c.nlvl() as i32;
        for _ in 0..25 {
            let g = random_graph(&mut rng, 5, 6);
            instances += 1;
            let sat: Vec<bool> = (0..n).map(|k| c.satisfied_up_to(&g, k)).collect();
            let full = c.satisfied_by(&g);
            for k in 0..n {
                if !sat[k as usize] {
                    continue;
                }
                for j in 0..n {
                    let provable = if k % 2 == 0 { j > k || j % 2 == 1 } else { j < k && j % 2 == 1 };
                    ensure(!provable || sat[j as usize], || format!("{name}: layer {k} holds but {j} fails on {g:?}"))?;
                }
                ensure(k % 2 == 1 || full, || format!("{name}: even layer {k} holds without the constraint"))?;
            }
            let kmax = c.kmax(&g);
            for k in 0..=kmax.min(n - 1) {
                if kmax < n - 1 {
                    let expect = k % 2 == 1;
                    ensure(sat[k as usize] == expect, || format!("{name}: layer {k} below kmax {kmax} on {g:?}"))?;
                } else if k < kmax && k % 2 == 1 {
                    ensure(sat[k as usize], || format!("{name}: odd layer {k} fails although the constraint holds"))?;
                }
            }
        }
    }
    // witnesses for the open entries
    let deep = fixtures::c_deep();
    let one = fixtures::c_one();
    let witnesses: Vec<(&str, bool)> = vec![
        ("even k, even j < k", deep.satisfied_up_to(&fixtures::cf(), 2) && !deep.satisfied_up_to(&fixtures::cf(), 0)),
        ("odd k, even j < k", deep.satisfied_up_to(&deep_witness_host(), 1) && !deep.satisfied_up_to(&deep_witness_host(), 0)),
        ("odd k, even j > k", deep.satisfied_up_to(&deep_witness_host(), 1) && !deep.satisfied_up_to(&deep_witness_host(), 2)),
        ("odd k, odd j > k", deep.satisfied_up_to(&deep_witness_host(), 1) && !deep.satisfied_up_to(&deep_witness_host(), 3)),
        ("odd k, constraint", deep.satisfied_up_to(&deep_witness_host(), 1) && !deep.satisfied_by(&deep_witness_host())),
        ("kmax = nlvl-1, even k", one.satisfied_by(&fixtures::cf()) && !one.satisfied_up_to(&fixtures::cf(), 0)),
    ];
    for (label, ok) in &witnesses {
        ensure(*ok, || format!("witness for `{label}` does not hold"))?;
    }
    within(start, 10)?;
    Ok(format!("{instances} random instances, {} open entries witnessed", witnesses.len()))
}

const SIX: [Notion; 6] = [
    Notion::Maintaining,
    Notion::Increasing,
    Notion::DirectMaintaining,
    Notion::DirectIncreasing,
    Notion::Guaranteeing,
    Notion::Preserving,
];

/// Implications between the six transformation notions, row implies column.
fn implied(row: Notion, col: Notion) -> bool {
    use Notion::*;
    row == col
        || col == Preserving
        || matches!(
            (row, col),
            (Increasing, Maintaining)
                | (DirectMaintaining, Maintaining)
                | (DirectIncreasing, Maintaining)
                | (DirectIncreasing, Increasing)
                | (DirectIncreasing, DirectMaintaining)
                | (Guaranteeing, Maintaining)
        )
}

fn fuzzed_transformations(target: usize) -> Vec<(Constraint, Transformation)> {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut cs: Vec<Constraint> = fixture_constraints().into_iter().map(|(_, c)| c).collect();
    cs.extend(random_constraints(56, 20, 3).into_iter().map(|(_, c)| c));
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < target {
        let c = &cs[i % cs.len()];
        i += 1;
        let g = random_graph(&mut rng, 4, 5);
        let r = random_rule(&mut rng, 3);
        for m in r.applicable_matches(&g).into_iter().take(2) {
            out.push((c.clone(), r.apply(&g, &m).expect("applicable")));
        }
    }
    out
}

fn c5_notion_matrix() -> Outcome {
    let start = Instant::now();
    let pool = fuzzed_transformations(2000);
    for (c, t) in &pool {
        let cl = classify_transformation(t, c);
        for row in SIX {
            for col in SIX {
                if implied(row, col) {
                    ensure(!cl.get(row) || cl.get(col), || {
                        format!("{} without {} on {:?} => {:?}", row.name(), col.name(), t.g, t.h)
                    })?;
                }
            }
        }
        if !c.satisfied_by(&t.g) && cl.guaranteeing {
            ensure(cl.increasing, || format!("guaranteeing from an inconsistent graph is not increasing on {:?}", t.g))?;
        }
    }
    let text = std::fs::read_to_string(data_path("notion_counterexamples.json")).map_err(|e| e.to_string())?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let tg = fixtures::type_graph();
    let mut witnessed = std::collections::BTreeSet::new();
    for (i, cx) in v.as_array().ok_or("counterexamples must be a list")?.iter().enumerate() {
        let ptr = format!("/{i}");
        let c = parse_constraint(&cx["constraint"], &tg, &ptr).map_err(|e| e.to_string())?;
        let g = parse_graph(&cx["host"], &tg, &ptr).map_err(|e| e.to_string())?;
        let r = parse_rule(&cx["rule"], &tg, &ptr).map_err(|e| e.to_string())?;
        let m = parse_morphism(&cx["match"], &ptr).map_err(|e| e.to_string())?;
        let row = cx["row"].as_str().and_then(Notion::parse).ok_or("bad row")?;
        let col = cx["column"].as_str().and_then(Notion::parse).ok_or("bad column")?;
        let t = r.apply(&g, &m).map_err(|e| e.to_string())?;
        let cl = classify_transformation(&t, &c);
        ensure(cl.get(row) && !cl.get(col), || format!("counterexample {i} does not separate {} from {}", row.name(), col.name()))?;
        witnessed.insert((row, col));
    }
    for row in SIX {
        for col in SIX {
            if !implied(row, col) {
                ensure(witnessed.contains(&(row, col)), || format!("no counterexample for {} => {}", row.name(), col.name()))?;
            }
        }
    }
    within(start, 30)?;
    Ok(format!("{} transformations, {} non-implications witnessed", pool.len(), witnessed.len()))
}

/// Applications of `rule` at hosts with `kmax = k`: bounded enumeration plus random hosts.
fn guarded_violations(rule: &Rule, c: &Constraint, k: i32, small: &[Graph], fuzz: usize, seed: u64, check: impl Fn(&Transformation) -> bool) -> (usize, Option<Transformation>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let random = (0..fuzz).map(|_| random_graph(&mut rng, 4, 4));
    for g in small.iter().cloned().chain(random) {
        if c.kmax(&g) != k {
            continue;
        }
        for t in rule.transformations(&g) {
            cases += 1;
            if !check(&t) {
                return (cases, Some(t));
            }
        }
    }
    (cases, None)
}

fn c6_ac_soundness() -> Outcome {
    let start = Instant::now();
    let small = all_graphs(3, 2);
    let mut synthesized = 0;
    let mut cases = 0;
    let constraints = [fixtures::c_one(), fixtures::c_no_dep(), fixtures::c_at_most_one(), fixtures::c_some_class(), fixtures::c_has_dep(), fixtures::c_clean_own()];
    for (ci, c) in constraints.iter().enumerate() {
        let mut rules = base_rules();
        if let Ok(set) = construct_repairing_set(c) {
            rules.extend(set.rules);
        }
        for (ri, rule) in rules.iter().enumerate() {
            let seed = (ci * 100 + ri) as u64;
            for k in -1..c.nlvl() as i32 {
                let guarded = maintaining_ac_at_layer(rule, c, k).map_err(|e| e.to_string())?;
                synthesized += 1;
                let (n, bad) = guarded_violations(&guarded, c, k, &small, 1000, seed, |t| is_direct_maintaining(t, c));
                cases += n;
                if let Some(t) = bad {
                    return Err(format!("Main_{k} of {} is violated on {:?}", rule.name, t.g));
                }
                let Ok(targets) = increasing_targets(c, k) else { continue };
                for cp in targets {
                    let guarded = increasing_ac_at_layer(rule, c, k, &cp).map_err(|e| e.to_string())?;
                    synthesized += 1;
                    let (n, bad) = guarded_violations(&guarded, c, k, &small, 1000, seed + 1, |t| is_direct_increasing(t, c));
                    cases += n;
                    if let Some(t) = bad {
                        return Err(format!("Incr_{k} of {} is violated on {:?}", rule.name, t.g));
                    }
                }
                if let Ok(Some(_)) = classify_basic(&rule.plain, c, k) {
                    let guarded = basic_increasing_rule(rule, c, k).map_err(|e| e.to_string())?;
                    synthesized += 1;
                    let (n, bad) = guarded_violations(&guarded, c, k, &small, 1000, seed + 2, |t| is_direct_increasing(t, c));
                    cases += n;
                    if let Some(t) = bad {
                        return Err(format!("basic increasing {} at {k} is violated on {:?}", rule.name, t.g));
                    }
                }
            }
        }
    }
    within(start, 60)?;
    Ok(format!("{synthesized} guarded rules, {cases} transformations, no violations"))
}

fn c7_conflicts() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for (name, c) in fixture_constraints().into_iter().chain(random_constraints(77, 50, 4)) {
        let n = c.nlvl();
        for a in 1..=n {
            for b in 1..=n {
                let mixed = (Constraint::is_existential(a) && Constraint::is_universal(b))
                    || (Constraint::is_universal(a) && Constraint::is_existential(b));
                if !mixed {
                    continue;
                }
                pairs += 1;
                let x = causes_conflict(&c, a, b).map_err(|e| e.to_string())?;
                let y = causes_conflict_basic(&c, a, b).map_err(|e| e.to_string())?;
                ensure(x == y, || format!("{name}: C{a} -> C{b} overlap {x}, basic {y}"))?;
            }
        }
    }
    within(start, 20)?;
    Ok(format!("{pairs} graph pairs agree"))
}

fn repairable_fixtures() -> Vec<(String, Constraint, grafrepair::repair::RepairingSet)> {
    fixture_constraints()
        .into_iter()
        .filter(|(_, c)| is_circular_conflict_free(c))
        .filter_map(|(n, c)| {
            let set = construct_repairing_set(&c).ok()?;
            validate_repairing_set(&set, &c).ok()?.is_valid().then_some((n, c, set))
        })
        .collect()
}

fn c8_single_repair() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut hosts = fixtures::hosts();
    hosts.extend((0..10).map(|_| random_graph(&mut rng, 4, 4)));
    let mut runs = 0;
    let fixtures = repairable_fixtures();
    for (name, c, set) in &fixtures {
        for g in hosts.iter().filter(|g| !c.satisfied_by(g)) {
            for seed in 0..10 {
                let (h, _) = repair_one(g, c, set, RepairOptions { seed, max_iterations: None })
                    .map_err(|e| format!("{name}, seed {seed}, host {g:?}: {e}"))?;
                ensure(c.satisfied_by(&h), || format!("{name}, seed {seed}: result violates the constraint"))?;
                runs += 1;
            }
        }
    }
    within(start, 30)?;
    Ok(format!("{runs} runs over {} constraints", fixtures.len()))
}

fn c9_set_repair() -> Outcome {
    let start = Instant::now();
    let groups: Vec<(&str, Vec<Constraint>)> = vec![
        ("c_one+c_noDep", vec![fixtures::c_one(), fixtures::c_no_dep()]),
        ("c_someClass+c_one+c_noDep", vec![fixtures::c_some_class(), fixtures::c_one(), fixtures::c_no_dep()]),
        ("c_atMostOne+c_hasDep", vec![fixtures::c_at_most_one(), fixtures::c_has_dep()]),
        ("c_noDep+c_someClass+c_cleanOwn", vec![fixtures::c_no_dep(), fixtures::c_some_class(), fixtures::c_clean_own()]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut hosts = fixtures::hosts();
    hosts.extend((0..6).map(|_| random_graph(&mut rng, 4, 4)));
    let mut runs = 0;
    for (name, cs) in &groups {
        let sets = cs.iter().map(construct_repairing_set).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        for g in &hosts {
            for seed in 0..10 {
                let (h, _) = repair_set(g, cs, &sets, RepairOptions { seed, max_iterations: None })
                    .map_err(|e| format!("{name}, seed {seed}, host {g:?}: {e}"))?;
                ensure(cs.iter().all(|c| c.satisfied_by(&h)), || format!("{name}, seed {seed}: a constraint fails"))?;
                runs += 1;
            }
        }
    }
    within(start, 30)?;
    Ok(format!("{runs} runs over {} constraint sets", groups.len()))
}

fn c10_constructed_sets() -> Outcome {
    let start = Instant::now();
    let mut checked = Vec::new();
    for (name, c) in fixture_constraints() {
        if c.nlvl() < 2 || !is_circular_conflict_free(&c) {
            continue;
        }
        let set = construct_repairing_set(&c).map_err(|e| format!("{name}: {e}"))?;
        let v = validate_repairing_set(&set, &c).map_err(|e| format!("{name}: {e}"))?;
        ensure(v.is_valid(), || format!("{name}: {}", v.reasons.join("; ")))?;
        checked.push(name);
    }
    within(start, 10)?;
    Ok(format!("valid for {}", checked.join(", ")))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        ("semantics oracle equivalence", c1_semantics),
        ("shift lemmas", c2_shift),
        ("kmax against brute force", c3_kmax),
        ("layer inference tables", c4_layer_tables),
        ("consistency notion matrix", c5_notion_matrix),
        ("application condition soundness", c6_ac_soundness),
        ("conflict characterization agreement", c7_conflicts),
        ("single constraint repair", c8_single_repair),
        ("constraint set repair", c9_set_repair),
        ("constructed repairing sets", c10_constructed_sets),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg} ({secs:.2}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
