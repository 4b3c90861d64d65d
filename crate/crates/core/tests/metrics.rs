mod common;

use common::{oracle_metrics, relative_error};
use galstm::metrics::compute_metrics;
use galstm::numerics::Rng;
use proptest::prelude::*;

#[test]
fn agrees_with_oracle_on_random_pairs() {
    let mut rng = Rng::new(2024);
    for case in 0..100 {
        let n = 1 + rng.index(200);
        let scale = 10f64.powf(rng.uniform(-3.0, 3.0));
        let actual: Vec<f64> = (0..n).map(|_| scale * rng.uniform(0.1, 10.0)).collect();
        let predicted: Vec<f64> = actual
            .iter()
            .map(|a| a + scale * rng.normal(0.0, 0.5))
            .collect();
        let m = compute_metrics(&actual, &predicted).unwrap();
        let (mae, mse, rmse, r2, mape) = oracle_metrics(&actual, &predicted);
        for (name, got, want) in [
            ("mae", m.mae, mae),
            ("mse", m.mse, mse),
            ("rmse", m.rmse, rmse),
        ] {
            assert!(
                relative_error(got, want) <= 1e-12,
                "case {case} {name}: {got} vs {want}"
            );
        }
        assert!(
            relative_error(m.mape.unwrap(), mape) <= 1e-12,
            "case {case} mape"
        );
        if n > 1 {
            assert!(relative_error(m.r2.unwrap(), r2) <= 1e-12, "case {case} r2");
        }
        assert!(relative_error(m.rmse * m.rmse, m.mse) <= 1e-12);
    }
}

#[test]
fn hand_cases() {
    let m = compute_metrics(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap();
    assert_eq!(m.r2, Some(0.0));
    assert!((m.mae - 2.0 / 3.0).abs() < 1e-15);
    assert!((m.mse - 2.0 / 3.0).abs() < 1e-15);
    assert!((m.rmse - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    assert_eq!(compute_metrics(&[2.0], &[3.0]).unwrap().mape, Some(50.0));
}

#[test]
fn degenerate_inputs() {
    assert!(compute_metrics(&[], &[]).is_err());
    assert!(compute_metrics(&[1.0, 2.0], &[1.0]).is_err());
    assert!(compute_metrics(&[1.0, f64::NAN], &[1.0, 2.0]).is_err());
    let m = compute_metrics(&[5.0, 5.0], &[5.0, 5.0]).unwrap();
    assert_eq!((m.mae, m.r2), (0.0, None));
    assert_eq!(
        compute_metrics(&[0.0, 1.0], &[0.5, 1.0]).unwrap().mape,
        None
    );
    let json = serde_json::to_value(m).unwrap();
    assert!(json["r2"].is_null());
}

#[test]
fn r2_is_not_clamped() {
    let m = compute_metrics(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap();
    assert_eq!(m.r2, Some(-3.0));
}

#[test]
fn report_table_layout() {
    let text = compute_metrics(&[1.0, 1.0], &[2.0, 0.0])
        .unwrap()
        .to_string();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("Evaluation parameters"));
    assert_eq!(lines.len(), 6);
    assert!(lines[4].ends_with("undefined"));
}

fn pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 2..60)
        .prop_map(|v| v.into_iter().unzip())
}

proptest! {
    #[test]
    fn shift_invariance((a, p) in pairs(), shift in -1e3f64..1e3) {
        let m = compute_metrics(&a, &p).unwrap();
        let sa: Vec<f64> = a.iter().map(|x| x + shift).collect();
        let sp: Vec<f64> = p.iter().map(|x| x + shift).collect();
        let s = compute_metrics(&sa, &sp).unwrap();
        // shifting rounds each term, so compare at the scale of the shift
        let tol = 1e-9 * (1.0 + shift.abs());
        prop_assert!((m.mae - s.mae).abs() <= tol);
        prop_assert!((m.rmse - s.rmse).abs() <= tol);
        prop_assert!((m.mse - s.mse).abs() <= tol * (1.0 + m.rmse));
    }

    #[test]
    fn r2_affine_invariance((a, p) in pairs(), k in 0.01f64..100.0, shift in -50.0f64..50.0) {
        let m = compute_metrics(&a, &p).unwrap();
        prop_assume!(m.r2.is_some());
        let ta: Vec<f64> = a.iter().map(|x| k * x + shift).collect();
        let tp: Vec<f64> = p.iter().map(|x| k * x + shift).collect();
        let t = compute_metrics(&ta, &tp).unwrap();
        let (r, s) = (m.r2.unwrap(), t.r2.unwrap());
        prop_assert!((r - s).abs() <= 1e-9 * (1.0 + r.abs()), "{} vs {}", r, s);
    }

    #[test]
    fn basic_inequalities((a, p) in pairs()) {
        let m = compute_metrics(&a, &p).unwrap();
        prop_assert!(m.mae <= m.rmse * (1.0 + 1e-12));
        prop_assert!(relative_error(m.rmse * m.rmse, m.mse) <= 1e-12);
        if let Some(r2) = m.r2 {
            prop_assert!(r2 <= 1.0);
        }
    }
}
