use harmonics_web::{growth, nu_trace, nu_weights, return_probabilities};

#[test]
fn nu_trace_vanishes_on_thirds() {
    let trace = nu_trace(3, false, 3).unwrap();
    assert_eq!(trace[0], 1.0);
    assert!(trace[1] < 1e-12 && trace[2] < 1e-12);
    assert_eq!(trace[3], 1.0);
    let w = nu_weights(3, false).unwrap();
    assert_eq!(w.len(), 6);
}

#[test]
fn line_walk_returns() {
    let p = return_probabilities("z(1)", 4).unwrap();
    assert_eq!(p, vec![1.0, 0.0, 0.5, 0.0, 0.375]);
}

#[test]
fn free_group_balls() {
    assert_eq!(growth("free(2)", 3).unwrap(), vec![1.0, 5.0, 17.0, 53.0]);
}
