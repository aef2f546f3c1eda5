//! Every seed loop in corpus/ must hold up three ways: the documented
//! invariants follow from the computed ideal, the whole ideal vanishes on
//! randomized concrete runs, and the runs are long enough to be meaningful.

use loopinv::groebner::Limits;
use loopinv::loopspec::parse_program;
use loopinv::polyinv::{
    invariant_ideal, run_traces, vanishes_on_traces, HarnessConfig, PipelineOptions,
};
use loopinv::exactalg::parse_polynomial;

const EXPECTED: &[(&str, &[&str])] = &[
    ("fig1.loop", &["a - b - c", "6*s - 2*a^3 - 3*a^2 - a"]),
    ("sum_squares.loop", &["6*s - 2*a^3 - 3*a^2 - a"]),
    ("petter1.loop", &["2*s - a^2 + a"]),
    ("sum_cubes.loop", &["4*s - a^4 + 2*a^3 - a^2"]),
    ("cube.loop", &["x - i^3", "y - 3*i^2 - 3*i - 1", "z - 6*i - 6"]),
    ("abc.loop", &["a - b - c"]),
    ("geometric.loop", &["x^2 - y"]),
    ("geo_pair.loop", &["x*y - w"]),
    ("geo3.loop", &["y - 3*x"]),
    ("neg_base.loop", &["x^2 - y"]),
    ("countdown.loop", &["q + r - r0"]),
    ("sum_pair.loop", &["2*x - y^2 + y"]),
    ("arr_copy.loop", &["i - j"]),
];

fn corpus_path(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn corpus_is_complete() {
    let mut found: Vec<String> = std::fs::read_dir(corpus_path(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".loop"))
        .collect();
    found.sort();
    assert!(found.len() >= 11, "need at least 11 seed loops, have {found:?}");
    for (name, _) in EXPECTED {
        assert!(found.contains(&name.to_string()), "missing {name}");
    }
}

#[test]
fn documented_invariants_are_proved() {
    let limits = Limits::default();
    for (name, invariants) in EXPECTED {
        let src = std::fs::read_to_string(corpus_path(name)).unwrap();
        let program = parse_program(&src).unwrap_or_else(|e| panic!("{name}: {e}"));
        let analysis = invariant_ideal(&program, &PipelineOptions::default())
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(analysis.stabilized, "{name}: ideal did not stabilize");
        for text in *invariants {
            let p = parse_polynomial(text, &analysis.vars)
                .unwrap_or_else(|e| panic!("{name}: {text}: {e}"));
            assert!(
                analysis.implies(&p, &limits).unwrap(),
                "{name}: documented invariant {text} not implied"
            );
        }
    }
}

#[test]
fn computed_ideals_vanish_on_long_random_runs() {
    for (name, _) in EXPECTED {
        let src = std::fs::read_to_string(corpus_path(name)).unwrap();
        let program = parse_program(&src).unwrap();
        let analysis = invariant_ideal(&program, &PipelineOptions::default()).unwrap();
        let traces = run_traces(&program, &HarnessConfig::default())
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        for t in &traces {
            assert!(t.iterations() >= 30, "{name}: run too short to exercise the loop");
            assert!(!t.step_capped, "{name}: hit the step cap");
        }
        for p in &analysis.basis {
            assert!(
                vanishes_on_traces(p, &analysis.init_symbols, &traces),
                "{name}: {} fails on a concrete run",
                p.to_text()
            );
        }
    }
}
