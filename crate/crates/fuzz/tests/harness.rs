use std::collections::BTreeSet;

use softtopo_fuzz::registry::{evaluate, find, ids, Gen, Outcome, TheoremCase};
use softtopo_fuzz::runner::run_case;
use softtopo_fuzz::shrink::{is_shrink_minimal, shrink};
use softtopo_fuzz::{run_theorem, FuzzError, GeneratorConfig, Verdict};

fn config(points: usize, params: usize, seed: u64, trials: usize) -> GeneratorConfig {
    GeneratorConfig { points, params, seed, trials, ..GeneratorConfig::default() }
}

#[test]
fn registry_is_exactly_the_case_list() {
    let expected: BTreeSet<&str> = [
        "thm_3_1_constructive",
        "lem_3_1",
        "hausdorff_heredity",
        "thm_4_1",
        "thm_4_2",
        "thm_4_3",
        "thm_4_4",
        "thm_4_5",
        "prop_4_1a",
        "prop_4_1b",
        "thm_4_6_vacuity",
        "thm_4_7",
        "thm_4_8",
        "prop_6_1",
        "continuity_criteria_agree",
        "thm_5_1",
        "baire_definitions_agree",
        "elementary_op_oracle",
    ]
    .into();
    let registered: Vec<&str> = ids().collect();
    assert_eq!(registered.len(), expected.len());
    assert_eq!(registered.into_iter().collect::<BTreeSet<_>>(), expected);
    assert_eq!(find("thm_4_6").unwrap().id, "thm_4_6_vacuity");
    assert!(matches!(run_theorem("thm_9_9", &config(3, 1, 0, 1)), Err(FuzzError::UnknownCase(_))));
}

#[test]
fn bad_configs_are_rejected() {
    for bad in [config(0, 1, 0, 1), config(3, 0, 0, 1), config(65, 1, 0, 1), config(8, 5, 0, 1)] {
        assert!(matches!(run_theorem("thm_4_1", &bad), Err(FuzzError::Config(_))));
    }
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let cfg = config(4, 2, 7, 60);
    let parallel = run_theorem("thm_4_4", &cfg).unwrap().to_json();
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_theorem("thm_4_4", &cfg).unwrap().to_json());
    assert_eq!(parallel, serial);
    assert_eq!(parallel, run_theorem("thm_4_4", &cfg).unwrap().to_json());
}

#[test]
fn finite_confirmations() {
    for id in ["thm_4_1", "thm_4_2"] {
        let r = run_theorem(id, &config(5, 2, 3, 100)).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed, "{id}");
        assert_eq!(r.confirmed, 100, "{id}");
    }
}

#[test]
fn infinite_hypothesis_never_fires() {
    let r = run_theorem("thm_4_6", &config(4, 2, 3, 50)).unwrap();
    assert_eq!(r.verdict, Verdict::AllSkipped);
    assert_eq!((r.hypothesis_fired, r.skipped), (0, 50));
}

fn any_space(gen: &mut Gen) -> Result<softtopo_fuzz::instance::Instance, FuzzError> {
    let u = gen.universe();
    let (space, _) = gen.space(&u)?;
    Ok(softtopo_fuzz::instance::Instance::new(space))
}

const ALWAYS_FALSE: TheoremCase = TheoremCase {
    id: "always_false",
    statement: "self-test: the conclusion never holds",
    generate: any_space,
    hypothesis: |_| true,
    conclusion: |_| false,
    retry: true,
};

const NEEDS_TWO_POINTS: TheoremCase = TheoremCase {
    id: "needs_two_points",
    statement: "self-test: fails whenever there are two points",
    generate: any_space,
    hypothesis: |_| true,
    conclusion: |ctx| ctx.inst.universe().point_count() < 2,
    retry: true,
};

#[test]
fn synthetic_counterexample_shrinks_to_one_point_one_param() {
    let r = run_case(&ALWAYS_FALSE, &config(4, 3, 11, 20)).unwrap();
    assert_eq!(r.verdict, Verdict::Counterexample);
    assert_eq!(r.counterexample_trials, 20);
    assert_eq!(r.counterexamples.len(), 5);
    for c in &r.counterexamples {
        assert_eq!(c.size, 2);
        assert!(c.verify(&ALWAYS_FALSE).unwrap());
        assert!(c.is_shrink_minimal(&ALWAYS_FALSE).unwrap());
        let sizes: Vec<usize> = c.shrink_trace.iter().map(|s| s.size_after).collect();
        assert!(sizes.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(sizes.last().copied().unwrap_or(c.original_size), 2);
        let minimal = c.instance().unwrap();
        let (again, trace) = shrink(&ALWAYS_FALSE, &minimal);
        assert!(trace.is_empty());
        assert_eq!(again, minimal);
    }
}

#[test]
fn shrinking_removes_only_what_the_failure_allows() {
    let r = run_case(&NEEDS_TWO_POINTS, &config(4, 2, 5, 30)).unwrap();
    for c in &r.counterexamples {
        let inst = c.instance().unwrap();
        assert_eq!(inst.universe().point_count(), 2);
        assert_eq!(inst.universe().param_count(), 1);
        assert!(inst.domain.subbase.is_empty());
        assert!(is_shrink_minimal(&NEEDS_TWO_POINTS, &inst));
    }
}

#[test]
fn persisted_counterexamples_reverify() {
    for id in ["prop_4_1a", "continuity_criteria_agree", "prop_6_1"] {
        let case = find(id).unwrap();
        let r = run_theorem(id, &config(4, 2, 1, 150)).unwrap();
        assert!(r.classified());
        for c in &r.counterexamples {
            let text = softtopo::io::to_canonical_string(c);
            let back: softtopo_fuzz::Counterexample = serde_json::from_str(&text).unwrap();
            assert_eq!(&back, c);
            assert!(back.verify(case).unwrap(), "{id} trial {}", c.trial);
            assert!(back.is_shrink_minimal(case).unwrap(), "{id} trial {}", c.trial);
            assert_eq!(evaluate(case, &back.instance().unwrap()), Outcome::Counterexample);
        }
    }
}
