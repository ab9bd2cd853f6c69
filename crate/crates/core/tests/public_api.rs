use approx::assert_abs_diff_eq;

use cocycle_thermo::certify::{self, QMCertificate};
use cocycle_thermo::cocycle::Cocycle;
use cocycle_thermo::equilibrium;
use cocycle_thermo::lyapunov;
use cocycle_thermo::matalg::{diag, rotation};
use cocycle_thermo::pressure;
use cocycle_thermo::symbolic::{Subshift, Word};
use cocycle_thermo::{Error, Matrix};

fn scalars(values: &[f64]) -> Cocycle {
    Cocycle::full_shift(values.iter().map(|&v| diag(&[v])).collect()).unwrap()
}

#[test]
fn identity_brackets_are_exact_at_every_depth() {
    let id = Cocycle::full_shift(vec![Matrix::identity(2, 2); 2]).unwrap();
    let cert = pressure::dimension_certificate(&id).unwrap();
    for n in 1..=10 {
        let b = pressure::pressure_bracket(&id, 1.0, n, Some(&cert)).unwrap();
        assert_abs_diff_eq!(b.upper, 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.lower.unwrap(), 2f64.ln(), epsilon = 1e-12);
    }
}

#[test]
fn scalar_pressure_curve_matches_closed_form() {
    let c = scalars(&[2.0, 3.0]);
    let cert = pressure::dimension_certificate(&c).unwrap();
    let grid = [0.0, 0.5, 1.0];
    for b in pressure::pressure_curve(&c, Some(&cert), &grid, 6).unwrap() {
        let exact = (2f64.powf(b.s) + 3f64.powf(b.s)).ln();
        assert_abs_diff_eq!(b.upper, exact, epsilon = 1e-12);
        assert_abs_diff_eq!(b.lower.unwrap(), exact, epsilon = 1e-12);
    }
}

#[test]
fn golden_mean_upper_bound_decreases_to_entropy() {
    let shift = Subshift::new(&[vec![1, 1], vec![1, 0]], 0.5).unwrap();
    let c = Cocycle::new(shift, vec![Matrix::identity(2, 2); 2], 1.0).unwrap();
    let log_golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let u12 = pressure::pressure_upper(&c, 1.0, 12).unwrap();
    assert!(u12 >= log_golden && u12 - log_golden < 5e-2);
}

#[test]
fn affinity_dimension_oracles() {
    let cantor = pressure::affinity_dimension(&[diag(&[1.0 / 3.0]), diag(&[1.0 / 3.0])]).unwrap();
    assert_abs_diff_eq!(cantor.s_star, 2f64.ln() / 3f64.ln(), epsilon = 1e-6);
    let halves = pressure::affinity_dimension(&[diag(&[0.5]), diag(&[0.5])]).unwrap();
    assert_abs_diff_eq!(halves.s_star, 1.0, epsilon = 1e-9);
    assert!(matches!(
        pressure::affinity_dimension(&[diag(&[2.0, 1.0]), rotation(1.0)]),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn equal_diagonal_contractions_have_dimension_one() {
    let c = Cocycle::full_shift(vec![diag(&[0.5, 0.25]), diag(&[0.5, 0.25])]).unwrap();
    let cert = pressure::dimension_certificate(&c).unwrap();
    let root = pressure::bowen_root(&c, &cert, 1e-6, 12).unwrap();
    // phi^s = 0.5^s on [0, 1], and 2 * 0.5^s = 1 at s = 1
    assert_abs_diff_eq!(root.s_star, 1.0, epsilon = 1e-6);
}

#[test]
fn certificate_survives_json() {
    let c = Cocycle::full_shift(vec![diag(&[2.0, 1.0]), rotation(1.0)]).unwrap();
    let cert = certify::extend_certificate_to_s(&certify::qm_search(&c, &[0, 1, 2], 3, 2).unwrap()).unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back: QMCertificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cert);
    back.check_compatible(&c).unwrap();
    let other = Cocycle::full_shift(vec![diag(&[2.0, 1.0]), rotation(0.5)]).unwrap();
    assert!(matches!(back.check_compatible(&other), Err(Error::Certificate(_))));
}

#[test]
fn weighted_pressure_scalar_oracle() {
    let c = scalars(&[2.0, 3.0]);
    let cert = pressure::dimension_certificate(&c).unwrap();
    for q in [0.5, 1.0, 2.0] {
        let b = equilibrium::weighted_pressure(&c, &[q], &[1], 8, Some(&cert)).unwrap();
        assert_abs_diff_eq!(b.midpoint(), (2f64.powf(q) + 3f64.powf(q)).ln(), epsilon = 1e-9);
    }
}

#[test]
fn periodic_and_pointwise_determinant_exponents_agree() {
    let c = Cocycle::full_shift(vec![
        Matrix::from_row_slice(2, 2, &[0.9, 0.3, -0.2, 0.4]),
        Matrix::from_row_slice(2, 2, &[0.1, 0.7, 0.5, -0.3]),
    ])
    .unwrap();
    let word = Word::parse("122").unwrap();
    let periodic = lyapunov::periodic_exponents(&c, &word).unwrap();
    let run = lyapunov::pointwise_exponents(&c, &word.periodic_prefix(600), 600, &[1, 2]).unwrap();
    assert_abs_diff_eq!(run.last()[1], periodic[1], epsilon = 1e-10);
    // the top exponent converges at rate 1/n
    assert!((run.last()[0] - periodic[0]).abs() < 1e-2);
}

#[test]
fn spectrum_hull_of_diagonal_example() {
    let c = Cocycle::full_shift(vec![diag(&[2.0, 1.0]), diag(&[1.0, 3.0])]).unwrap();
    let sample = lyapunov::spectrum_hull(&c, 3).unwrap();
    let labels: Vec<String> = sample.hull.iter().map(|&i| sample.sources[i].to_string()).collect();
    assert!(labels.contains(&"1".to_string()) && labels.contains(&"2".to_string()));
    for p in &sample.points {
        // lambda_1 + lambda_2 is the mean log-determinant, between log 2 and log 3
        assert!(p[1] >= 2f64.ln() - 1e-12 && p[1] <= 3f64.ln() + 1e-12);
    }
}
