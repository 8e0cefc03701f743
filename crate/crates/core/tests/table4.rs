mod common;

use common::table4::{evaluate, fixtures, METRICS};

#[test]
fn uniform_maximizes_and_tight_minimizes() {
    let scores: Vec<(&str, [f64; 6])> = fixtures()
        .into_iter()
        .map(|(name, pts)| (name, evaluate(&pts)))
        .collect();
    for (k, metric) in METRICS.iter().enumerate() {
        let (uniform, tight) = (scores[4].1[k], scores[0].1[k]);
        for (name, s) in &scores[1..4] {
            assert!(
                uniform > s[k],
                "{metric}: uniform {uniform} vs {name} {}",
                s[k]
            );
            assert!(tight < s[k], "{metric}: tight {tight} vs {name} {}", s[k]);
        }
    }
}

#[test]
fn entropy_values_are_exact() {
    let scores: Vec<[f64; 6]> = fixtures().iter().map(|(_, p)| evaluate(p)).collect();
    assert_eq!(scores[0][5], 0.0);
    assert!((scores[1][5] - 2f64.ln()).abs() < 1e-15);
    assert!((scores[4][5] - 16f64.ln()).abs() < 1e-15);
}

#[test]
fn print_fixture_table() {
    for (name, pts) in fixtures() {
        let s = evaluate(&pts);
        println!("{name:22} {}", s.map(|v| format!("{v:.4}")).join(" "));
    }
}
