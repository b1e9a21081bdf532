//! Acceptance suite. Runs every criterion, prints one line each and fails
//! the process when any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use poqa_core::domain::{Attribute, Region, Value};
use poqa_core::dsl::{
    parse_constraint, parse_question, render_constraint_asp, ConstraintInstance as C,
};
use poqa_core::forge::{reassemble, GenerationConfig};
use poqa_core::harness::dataset::DatasetInstance;
use poqa_core::harness::eval::{exact_accuracy, jaccard_index};
use poqa_core::harness::pipeline::{generate_dataset, write_dataset, Dataset};
use poqa_core::oracle::{brute_force_solve, naive_scene_ok, solve, Verdict, Witness};
use poqa_core::solver::{check_scene, RuleRef};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, t: Instant) -> Result<Duration, String> {
    let took = t.elapsed();
    ensure(took < limit, || format!("took {took:.1?}, limit {limit:?}"))?;
    Ok(took)
}

fn golden() -> Outcome {
    let t = Instant::now();
    let env = worked_env();
    let (partial, _) = worked_partial();
    let q = worked_question();
    let (answer, trace) = solve(&partial, &env, &q).map_err(|e| e.to_string())?;
    ensure(answer.names() == ["small", "medium"], || {
        format!("answer {answer}")
    })?;

    let lines = |v: Option<&Verdict>| -> Vec<(usize, usize)> {
        match v {
            Some(Verdict::Eliminated(Witness::Rules(rules))) => rules
                .iter()
                .filter_map(|r| match r {
                    RuleRef::Constraint(k) => env.source_lines(*k),
                    RuleRef::Generic(_) => None,
                })
                .collect(),
            _ => Vec::new(),
        }
    };
    let r = |i| Region::new(i).unwrap();
    let expected = [
        (lines(trace.region_verdict(r(1))), vec![(50, 50)]),
        (
            lines(trace.region_verdict(r(2))),
            vec![(53, 53), (54, 54), (55, 55)],
        ),
        (lines(trace.region_verdict(r(3))), vec![(58, 59)]),
        (lines(trace.value_verdict(Value::Large)), vec![(45, 45)]),
    ];
    for (got, want) in expected {
        ensure(got == want, || {
            format!("witness lines {got:?}, expected {want:?}")
        })?;
    }
    ensure(
        trace.region_verdict(r(0)) == Some(&Verdict::Admitted),
        || "region 0 eliminated".into(),
    )?;
    let took = within(Duration::from_secs(1), t)?;
    Ok(format!(
        "{{small, medium}}; witnesses 50, 53-55, 58-59, 45; {took:.1?}"
    ))
}

fn oracle_equivalence(sample: &[DatasetInstance]) -> Outcome {
    let t = Instant::now();
    for inst in sample {
        let fast = solve(&inst.partial, &inst.environment, &inst.form)
            .map_err(|e| format!("{}: {e}", inst.id))?
            .0;
        let slow = brute_force_solve(&inst.partial, &inst.environment, &inst.form)
            .map_err(|e| format!("{}: {e}", inst.id))?;
        ensure(fast == slow, || {
            format!("{}: solve {fast} vs brute force {slow}", inst.id)
        })?;
        let theirs = reference::answer(&inst.partial, &inst.environment, &inst.form);
        ensure(fast.values == theirs, || {
            format!("{}: reference oracle {theirs:?}", inst.id)
        })?;
    }
    let took = within(Duration::from_secs(60), t)?;
    Ok(format!(
        "{} instances, 100% agreement with two independent oracles; {took:.1?}",
        sample.len()
    ))
}

fn soundness(sample: &[DatasetInstance]) -> Outcome {
    let t = Instant::now();
    for inst in sample {
        let rebuilt = reassemble(&inst.partial, &inst.hidden);
        ensure(rebuilt == inst.complete, || {
            format!("{}: reassembly differs", inst.id)
        })?;
        for (what, scene) in [("complete", &inst.complete), ("reassembled", &rebuilt)] {
            ensure(
                reference::satisfies(&reference::things(scene), &inst.environment),
                || format!("{}: {what} scene fails the reference checker", inst.id),
            )?;
            ensure(naive_scene_ok(scene, &inst.environment), || {
                format!("{}: {what} scene fails the naive checker", inst.id)
            })?;
            ensure(check_scene(scene, &inst.environment).satisfied(), || {
                format!("{}: {what} scene fails check_scene", inst.id)
            })?;
        }
    }
    let took = within(Duration::from_secs(60), t)?;
    Ok(format!(
        "{} complete scenes and reassemblies pass; {took:.1?}",
        sample.len()
    ))
}

fn validity(all: &[DatasetInstance]) -> Outcome {
    for inst in all {
        let size = inst.answer.len();
        let full = inst.form.query_attribute.cardinality();
        ensure((1..full).contains(&size), || {
            format!("{}: |S| = {size}, |A| = {full}", inst.id)
        })?;
        let truth = inst.hidden.get(inst.form.query_attribute);
        ensure(
            inst.answer.contains(truth) && inst.question.ground_truth == truth,
            || format!("{}: ground truth {truth} outside {}", inst.id, inst.answer),
        )?;
    }
    Ok(format!(
        "{} questions with 1 <= |S| < |A| and truth in S",
        all.len()
    ))
}

fn distribution(ds: &Dataset) -> Outcome {
    let n = ds.instances.len() as f64;
    ensure(n >= 10_000.0, || format!("only {n} questions"))?;
    let mut mix = [0usize; 4];
    let mut usage: BTreeMap<&str, usize> = BTreeMap::new();
    let mut counts = BTreeSet::new();
    for inst in &ds.instances {
        mix[inst.form.query_attribute.index()] += 1;
        *usage.entry(inst.environment.id.as_str()).or_default() += 1;
        counts.insert(inst.complete.len());
    }
    let targets = [0.4, 0.4, 0.1, 0.1];
    for a in Attribute::ALL {
        let share = mix[a.index()] as f64 / n;
        let target = targets[a.index()];
        ensure((share - target).abs() <= 0.02, || {
            format!("{a} share {share:.3}, target {target}")
        })?;
    }
    ensure(usage.len() == 30 && ds.environments.len() == 30, || {
        format!("{} environments used", usage.len())
    })?;
    let mean = n / 30.0;
    for (id, &k) in &usage {
        let dev = (k as f64 - mean).abs() / mean;
        ensure(dev <= 0.2, || {
            format!("{id} used {k} times, mean {mean:.1}")
        })?;
    }
    ensure(counts.iter().all(|c| (5..=9).contains(c)), || {
        format!("object counts {counts:?}")
    })?;
    let shares: Vec<String> = mix
        .iter()
        .map(|&k| format!("{:.1}%", 100.0 * k as f64 / n))
        .collect();
    Ok(format!(
        "{n} questions; mix {}; env usage {}..{}; counts {:?}",
        shares.join("/"),
        usage.values().min().unwrap(),
        usage.values().max().unwrap(),
        counts
    ))
}

fn metrics() -> Outcome {
    let set = |vs: &[Value]| vs.iter().copied().collect::<BTreeSet<Value>>();
    let cases = [
        (
            set(&[Value::Small, Value::Medium]),
            set(&[Value::Small]),
            (0.0, 0.5),
        ),
        (
            set(&[Value::Small, Value::Medium]),
            set(&[Value::Small, Value::Medium]),
            (1.0, 1.0),
        ),
        (set(&[Value::Small]), set(&[Value::Large]), (0.0, 0.0)),
    ];
    for (actual, predicted, want) in &cases {
        let got = (
            exact_accuracy(actual, predicted),
            jaccard_index(actual, predicted),
        );
        ensure(got == *want, || {
            format!("{actual:?} vs {predicted:?}: {got:?}, expected {want:?}")
        })?;
    }
    Ok("partial (0, 0.5), identical (1, 1), disjoint (0, 0)".into())
}

fn structure(all: &[DatasetInstance]) -> Outcome {
    let mut scenes = 0;
    for inst in all {
        for scene in [&inst.complete, &inst.partial] {
            let v = scene.structural_violations();
            ensure(v.is_empty(), || format!("{}: {}", inst.id, v.join("; ")))?;
            scenes += 1;
        }
    }
    Ok(format!("{scenes} scenes, zero violations"))
}

fn files_under(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn determinism() -> Outcome {
    let cfg = GenerationConfig {
        master_seed: 2024,
        ..GenerationConfig::default()
    };
    let mut trees = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let ds = generate_dataset(&cfg, 300).map_err(|e| e.to_string())?;
        write_dataset(dir.path(), &ds).map_err(|e| e.to_string())?;
        trees.push(files_under(dir.path()));
    }
    ensure(trees[0] == trees[1], || {
        let differing = trees[0].iter().find(|(k, v)| trees[1].get(*k) != Some(v));
        format!("outputs differ, first at {:?}", differing.map(|d| d.0))
    })?;
    Ok(format!(
        "{} files byte-identical across two runs",
        trees[0].len()
    ))
}

/// Every instance of every scene-level template, plus the generic rules.
fn all_constraints() -> Vec<C> {
    let mut out = vec![C::Distinctness];
    out.extend((0..=4).map(|max| C::RegionCapacity { max }));
    out.extend((1..=12).map(|count| C::ObjectCount { count }));
    let filters = std::iter::once(None).chain(Value::ALL.map(Some));
    let filters: Vec<Option<Value>> = filters.collect();
    for region in Region::ALL {
        for value in Value::ALL {
            out.push(C::Negation { region, value });
            out.push(C::ValueRestriction { region, value });
            out.extend((0..=3).map(|count| C::ExactlyN {
                region,
                value,
                count,
            }));
            for other in Value::ALL {
                if other != value {
                    out.push(C::Or {
                        region,
                        values: [value, other],
                    });
                }
            }
        }
        for second in Region::ALL {
            for same in Attribute::ALL {
                for &filter in &filters {
                    let regions = (region, second);
                    out.extend((1..=4).map(|count| C::AtLeastNPairs {
                        regions,
                        same,
                        filter,
                        count,
                    }));
                    out.extend((0..=4).map(|count| C::AtMostNPairs {
                        regions,
                        same,
                        filter,
                        count,
                    }));
                }
            }
        }
    }
    out
}

fn round_trip() -> Outcome {
    let cs = all_constraints();
    for c in &cs {
        let text = render_constraint_asp(c);
        let back = parse_constraint(&text).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == *c, || format!("{text} parsed as {back:?}"))?;
    }
    let mut runner = TestRunner::deterministic();
    let strategy = strategies::question_form();
    let mut seen = BTreeSet::new();
    while seen.len() < 100 {
        let q = strategy
            .new_tree(&mut runner)
            .map_err(|e| e.to_string())?
            .current();
        let text = q.render();
        let back = parse_question(&text).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == q, || format!("{text} parsed as {back:?}"))?;
        seen.insert(text);
    }
    Ok(format!(
        "{} constraint instances and {} question forms",
        cs.len(),
        seen.len()
    ))
}

fn throughput() -> Outcome {
    let t = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let ds = generate_dataset(&GenerationConfig::default(), 2000).map_err(|e| e.to_string())?;
    write_dataset(dir.path(), &ds).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(300), t)?;
    Ok(format!(
        "2000 instances generated and written in {took:.1?}"
    ))
}

fn main() {
    let t = Instant::now();
    let corpus = generate_dataset(&GenerationConfig::default(), 10_000);
    eprintln!("corpus of 10000 questions generated in {:.1?}", t.elapsed());
    let corpus = match corpus {
        Ok(ds) => Some(ds),
        Err(e) => {
            eprintln!("corpus generation failed: {e}");
            None
        }
    };
    let need = |f: &dyn Fn(&Dataset) -> Outcome| -> Outcome {
        match &corpus {
            Some(ds) => f(ds),
            None => Err("no corpus".into()),
        }
    };

    let results: Vec<(&str, Outcome)> = vec![
        ("worked example", golden()),
        (
            "oracle equivalence",
            need(&|ds| oracle_equivalence(&ds.instances[..1000])),
        ),
        (
            "constraint soundness",
            need(&|ds| soundness(&ds.instances[..1000])),
        ),
        ("validity bound", need(&|ds| validity(&ds.instances))),
        ("distribution targets", need(&distribution)),
        ("metric formulas", metrics()),
        (
            "structural invariants",
            need(&|ds| structure(&ds.instances)),
        ),
        ("determinism", determinism()),
        ("round trip", round_trip()),
        ("throughput", throughput()),
    ];

    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name:<22} PASS  {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name:<22} FAIL  {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
