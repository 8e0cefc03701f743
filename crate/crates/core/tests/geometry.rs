mod common;

use common::{angle_oracle, dot_dd, rng, unit, units};
use dispersive_core::geometry::{
    angular_distance, angular_mean, normalize, pairwise_matrix, UnitVector,
};
use dispersive_core::Error;
use proptest::prelude::*;

#[test]
fn distance_matches_high_precision_oracle() {
    let mut r = rng(1);
    for k in 0..2000 {
        let dim = 2 + k % 40;
        let a = unit(&mut r, dim);
        let b = unit(&mut r, dim);
        let d = angular_distance(&a, &b).unwrap();
        let want = angle_oracle(a.as_slice(), b.as_slice());
        // acos loses about sqrt(eps) near the ends of its range
        let tol = if (0.1..std::f64::consts::PI - 0.1).contains(&want) {
            1e-13
        } else {
            1e-7
        };
        assert!((d - want).abs() <= tol, "{d} vs {want}");
        let c = dot_dd(a.as_slice(), b.as_slice()).clamp(-1.0, 1.0).acos();
        assert!((d - c).abs() <= 1e-7);
    }
}

#[test]
fn near_and_antipodal_pairs_stay_in_range() {
    let mut r = rng(2);
    for _ in 0..500 {
        let a = unit(&mut r, 8);
        let tiny: Vec<f64> = a.as_slice().iter().map(|x| x * (1.0 + 1e-15)).collect();
        let b = normalize(&tiny).unwrap();
        let neg = normalize(&a.as_slice().iter().map(|x| -x).collect::<Vec<_>>()).unwrap();
        let d_close = angular_distance(&a, &b).unwrap();
        let d_far = angular_distance(&a, &neg).unwrap();
        assert!((0.0..=1e-6).contains(&d_close));
        assert!(d_far <= std::f64::consts::PI && d_far > std::f64::consts::PI - 1e-6);
    }
}

#[test]
fn matrix_matches_elementwise() {
    let mut r = rng(3);
    let pts = units(&mut r, 97, 33);
    let m = pairwise_matrix(&pts).unwrap();
    for i in 0..pts.len() {
        assert_eq!(m.get(i, i), 0.0);
        for j in 0..pts.len() {
            assert_eq!(m.get(i, j), m.get(j, i));
            if i != j {
                assert!((m.get(i, j) - angular_distance(&pts[i], &pts[j]).unwrap()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn mean_of_opposites_is_degenerate() {
    let a = normalize(&[1.0, 2.0, 3.0]).unwrap();
    let b = normalize(&[-1.0, -2.0, -3.0]).unwrap();
    assert!(matches!(
        angular_mean(&[a, b]),
        Err(Error::DegenerateSum { .. })
    ));
}

#[test]
fn json_round_trip_is_bit_exact() {
    let mut r = rng(4);
    for v in units(&mut r, 300, 24) {
        let text = serde_json::to_string(&v).unwrap();
        let back: UnitVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}

#[test]
fn deserializing_rejects_non_unit() {
    assert!(serde_json::from_str::<UnitVector>("[1.0, 1.0]").is_err());
    assert!(serde_json::from_str::<UnitVector>("[1.0]").is_err());
}

fn vec_strategy(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, dim)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
}

proptest! {
    #[test]
    fn distance_is_a_metric(a in vec_strategy(6), b in vec_strategy(6), c in vec_strategy(6)) {
        let (a, b, c) = (normalize(&a).unwrap(), normalize(&b).unwrap(), normalize(&c).unwrap());
        let ab = angular_distance(&a, &b).unwrap();
        let ba = angular_distance(&b, &a).unwrap();
        let bc = angular_distance(&b, &c).unwrap();
        let ac = angular_distance(&a, &c).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=std::f64::consts::PI).contains(&ab));
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert_eq!(angular_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn mean_is_unit_and_equidistant_for_pairs(a in vec_strategy(5), b in vec_strategy(5)) {
        let (a, b) = (normalize(&a).unwrap(), normalize(&b).unwrap());
        prop_assume!(angular_distance(&a, &b).unwrap() < 3.0);
        let m = angular_mean(&[a.clone(), b.clone()]).unwrap();
        prop_assert!((m.dot(&m) - 1.0).abs() < 1e-12);
        let (da, db) = (angular_distance(&m, &a).unwrap(), angular_distance(&m, &b).unwrap());
        prop_assert!((da - db).abs() < 1e-7);
    }

    #[test]
    fn normalize_scale_invariant(v in vec_strategy(7), s in 0.01f64..100.0) {
        let a = normalize(&v).unwrap();
        let b = normalize(&v.iter().map(|x| x * s).collect::<Vec<_>>()).unwrap();
        prop_assert!(angular_distance(&a, &b).unwrap() < 1e-7);
    }
}
