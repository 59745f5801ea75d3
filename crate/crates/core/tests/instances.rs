//! The three worked instances: `x - 16` (solution x = 16), `x - 7` (no
//! solution among the squares) and `(x+1)(y+2) = 12` (x = 1, y = 4).

use iswhm_core::decide::{decide, DecisionThresholds, VerdictStatus};
use iswhm_core::evolve::{run_evolution, EvolutionParams};
use iswhm_core::operators::{build_hd, DEFAULT_MAX_DIM};
use iswhm_core::poly::parse;
use iswhm_core::{BigInt, TruncationSpec};

fn params(t: f64) -> EvolutionParams {
    EvolutionParams::new(t, 1.0).unwrap()
}

#[test]
fn x_minus_16_concentrates_on_level_4() {
    let p = parse("x - 16").unwrap();
    let trace = run_evolution(&p, TruncationSpec::new(1, 6).unwrap(), &params(2000.0)).unwrap();
    let last = trace.last();
    assert!(last.probabilities[3] > 0.9, "{:?}", last.probabilities);
    assert!((last.expectations[0] - 16.0).abs() < 0.5);
    assert!(last.e0.unwrap().abs() < 1e-6);
    assert!(trace.max_step_norm_drift < 1e-10);
    assert!(trace.final_norm_drift() < 1e-7);
}

#[test]
fn product_instance_concentrates_on_1_2() {
    let p = parse("(x+1)*(y+2) - 12").unwrap();
    let spec = TruncationSpec::new(2, 2).unwrap();
    let trace = run_evolution(&p, spec, &params(1000.0)).unwrap();
    let idx = spec.indexer().index_of(&[1, 2]).unwrap();
    assert!(trace.last().probabilities[idx] > 0.9);
    let e = &trace.last().expectations;
    assert!((e[0] - 1.0).abs() < 0.5 && (e[1] - 4.0).abs() < 0.5, "{e:?}");
}

#[test]
fn verdicts() {
    let th = DecisionThresholds::default();
    let v = decide(&parse("x - 16").unwrap(), 6, DEFAULT_MAX_DIM, &params(2000.0), &th).unwrap();
    assert_eq!(v.status, VerdictStatus::HasSolution);
    assert_eq!(v.solution, Some(vec![BigInt::from(16)]));

    let v = decide(&parse("x - 7").unwrap(), 6, DEFAULT_MAX_DIM, &params(2000.0), &th).unwrap();
    assert_eq!(v.status, VerdictStatus::NoSolution);
    assert_eq!(v.dominant_state, Some(vec![3]));
    assert!((v.e0_final - 4.0).abs() < 1e-6);

    let v = decide(&parse("(x+1)*(y+2) - 12").unwrap(), 2, DEFAULT_MAX_DIM, &params(1000.0), &th).unwrap();
    assert_eq!(v.status, VerdictStatus::HasSolution);
    assert_eq!(v.dominant_state, Some(vec![1, 2]));
    assert_eq!(v.solution, Some(vec![BigInt::from(1), BigInt::from(4)]));
}

#[test]
fn verdicts_do_not_depend_on_dominance_threshold() {
    let cases = [("x - 16", 6, 2000.0), ("x - 7", 6, 2000.0), ("(x+1)*(y+2) - 12", 2, 1000.0)];
    for (eq, levels, t) in cases {
        let p = parse(eq).unwrap();
        let reference = decide(&p, levels, DEFAULT_MAX_DIM, &params(t), &DecisionThresholds::default()).unwrap();
        for dominance in [0.3, 0.5, 0.7, 0.9] {
            let th = DecisionThresholds { dominance, ..Default::default() };
            let v = decide(&p, levels, DEFAULT_MAX_DIM, &params(t), &th).unwrap();
            assert_eq!(v, reference, "{eq} at dominance {dominance}");
        }
    }
}

#[test]
fn energy_expectation_approaches_ground_energy() {
    let p = parse("x - 16").unwrap();
    let spec = TruncationSpec::new(1, 6).unwrap();
    let hd = build_hd(&p, spec).unwrap().real_diagonal();
    let min = hd.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut previous = f64::INFINITY;
    for t in [50.0, 200.0, 2000.0] {
        let trace = run_evolution(&p, spec, &params(t)).unwrap();
        let energy: f64 = trace.last().probabilities.iter().zip(&hd).map(|(p, e)| p * e).sum();
        assert!(energy >= min);
        assert!(energy < previous);
        previous = energy;
    }
}

#[test]
fn runs_are_deterministic() {
    let p = parse("(x+1)*(y+2) - 12").unwrap();
    let spec = TruncationSpec::new(2, 2).unwrap();
    let a = run_evolution(&p, spec, &params(300.0)).unwrap();
    let b = run_evolution(&p, spec, &params(300.0)).unwrap();
    assert_eq!(a, b);
}
