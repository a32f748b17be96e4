use std::f64::consts::PI;

use dbo_core::evolution::*;
use dbo_core::fit::geomspace;
use dbo_core::spectral::{Grid1D, PhysicalField};
use statrs::function::gamma::gamma;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn semigroup_law_and_identity() {
    let g = Grid1D::new(256, 8.0 * PI).unwrap();
    let phi = PhysicalField::from_fn(&g, |x| (-0.5 * x * x).exp() * (1.0 + 0.3 * x)).unwrap();
    let spec = SemigroupSpec::new(0.5).unwrap();
    let same = linear_evolve(&phi, &spec, 0.0).unwrap();
    let d = phi.add_scaled(&same, -1.0).unwrap().l2_norm() / phi.l2_norm();
    assert!(d <= 1e-12, "{d}");
    let two = linear_evolve(&linear_evolve(&phi, &spec, 0.7).unwrap(), &spec, 0.3).unwrap();
    let one = linear_evolve(&phi, &spec, 1.0).unwrap();
    let d = two.add_scaled(&one, -1.0).unwrap().l2_norm() / one.l2_norm();
    assert!(d <= 1e-12, "{d}");
}

#[test]
fn linear_flow_keeps_real_fields_real_and_dissipates() {
    let g = Grid1D::new(128, 4.0 * PI).unwrap();
    let spec = SemigroupSpec::new(0.75).unwrap();
    let phi = PhysicalField::from_fn(&g, |x| (x.sin() + 0.2) * (-0.1 * x * x).exp()).unwrap();
    let u = linear_evolve_spectral(&phi.forward(), &spec, 0.4).unwrap();
    assert!(u.hermitian_defect() <= 1e-12 * u.l2_norm());
    let expected = phi
        .forward()
        .weighted_l2_norm(|xi| (-0.4 * xi.abs().powf(1.75)).exp());
    assert!(rel(u.l2_norm(), expected) <= 1e-10);
    assert!(u.l2_norm() <= phi.l2_norm());
}

#[test]
fn sup_bound_scaling_in_time() {
    for &(a, lambda) in &[(0.5, 0.5), (1.0, 2.0), (0.25, 1.0)] {
        let r = verify_sup_bound(a, lambda, &[1.0, 2.0]).unwrap();
        let ratio = r.rows[1].measured / r.rows[0].measured;
        assert!(rel(ratio, 2f64.powf(-2.0 * lambda / (a + 1.0))) <= 1e-9);
    }
}

#[test]
fn l2_constant_against_gamma_function() {
    // c² = 2Γ((2σ+1)/(1+a)) / ((1+a) 2^{(2σ+1)/(1+a)})
    for &a in &[0.25, 0.5, 1.0] {
        for &sigma in &[0.0, 0.5, 1.0] {
            let p = (2.0 * sigma + 1.0) / (1.0 + a);
            let exact = (2.0 * gamma(p) / ((1.0 + a) * 2f64.powf(p))).sqrt();
            assert!(rel(l2_constant(a, sigma), exact) <= 1e-12);
        }
    }
}

#[test]
fn l2_norm_is_invariant_under_rescaling() {
    for &(a, sigma, t) in &[(0.5, 0.5, 3.0), (0.25, 1.0, 0.2), (1.0, 0.0, 7.0)] {
        let direct = l2_kernel_norm(a, sigma, t);
        let rescaled = t.powf(-(2.0 * sigma + 1.0) / (2.0 * (1.0 + a))) * l2_kernel_norm(a, sigma, 1.0);
        assert!(rel(direct, rescaled) <= 1e-10, "{direct} {rescaled}");
    }
}

#[test]
fn kernel_sweeps() {
    let ts = [0.1, 1.0, 10.0];
    for &a in &[0.25, 0.5, 0.75, 1.0] {
        for &lambda in &[0.5, 1.0, 2.0] {
            let r = verify_sup_bound(a, lambda, &ts).unwrap();
            assert!(r.max_rel_err() <= 1e-6, "{r:?}");
        }
        for &sigma in &[0.0, 0.5, 1.0] {
            let r = verify_l2_bound(a, sigma, &geomspace(0.1, 10.0, 9)).unwrap();
            assert!(r.max_rel_err() <= 1e-6, "{r:?}");
            assert!((r.fitted_exponent.unwrap() - r.expected_exponent).abs() <= 1e-3);
        }
    }
}

#[test]
fn smoothing_rates() {
    let g = Grid1D::new(1 << 20, 20.0 * PI).unwrap();
    for &(a, lambda) in &[(0.5, 0.75), (1.0, 1.0), (0.25, 0.5)] {
        let spec = SemigroupSpec::new(a).unwrap();
        let profile = critical_profile(&g, 0.0, 0.01);
        let fit = smoothing_rate_fit(&spec, 0.0, lambda, &profile, (1e-4, 1e-3), 9).unwrap();
        println!("a={a} λ={lambda}: slope {} expected {} dev {}", fit.fitted_slope, fit.expected_slope, fit.relative_deviation());
        assert!(fit.relative_deviation() <= 0.05);
    }
}

#[test]
fn smoothing_without_derivative_gain_is_flat() {
    let g = Grid1D::new(1 << 18, 20.0 * PI).unwrap();
    let spec = SemigroupSpec::new(0.5).unwrap();
    let profile = critical_profile(&g, 0.0, 0.01);
    let fit = smoothing_rate_fit(&spec, 0.0, 0.0, &profile, (1e-3, 1e-2), 9).unwrap();
    assert!(fit.norms.windows(2).all(|w| w[1] <= w[0]));
    // No power of t, only the logarithmic residue ‖U(t)φ‖² ~ ln(1/t)/(1+a)
    // of critical data: local slope -1/(2 ln(1/t)).
    let log_slope = -1.0 / (2.0 * (1.0 / (1e-3f64 * 1e-2).sqrt()).ln());
    assert!((fit.fitted_slope - log_slope).abs() < 0.02, "{}", fit.fitted_slope);
}

#[test]
fn smooth_data_has_no_observable_rate() {
    let g = Grid1D::new(1 << 16, 20.0 * PI).unwrap();
    let spec = SemigroupSpec::new(0.5).unwrap();
    let profile = InitialData::unit_mean_gaussian().sample(&g).unwrap().forward();
    let err = smoothing_rate_fit(&spec, 0.0, 0.75, &profile, (1e-3, 1e-2), 9).unwrap_err();
    assert!(err.to_string().contains("rate unobservable"), "{err}");
}

#[test]
fn marching_is_second_order() {
    let g = Grid1D::new(1024, 32.0 * PI).unwrap();
    let spec = SemigroupSpec::new(0.5).unwrap();
    let phi = InitialData::Gaussian { amplitude: 1.0, width: 1.0, center: 0.0 }.sample(&g).unwrap().forward();
    let st = TimeStepperSpec::with_dt(0.01).unwrap();
    let sc = self_convergence(&phi, &spec, &st, 1.0).unwrap();
    println!("{sc:?}");
    assert!(sc.ratio >= 3.6 && sc.ratio <= 4.4);
}

#[test]
fn picard_agrees_with_marching() {
    let g = Grid1D::new(1024, 32.0 * PI).unwrap();
    let spec = SemigroupSpec::new(0.5).unwrap();
    let phi = InitialData::Gaussian { amplitude: 0.5, width: 1.0, center: 0.0 }.sample(&g).unwrap();
    let (_, r) = picard_crosscheck(&phi, &spec, 0.05, &PicardSpec::default()).unwrap();
    println!("{r:#?}");
    assert!(r.converged);
    assert!(r.discrepancies[1] < r.discrepancies[0]);
    assert!(r.agreement_ratio() <= 10.0);
    assert!(r.marching.order >= 1.8 && r.marching.order <= 2.2);
}

#[test]
fn picard_reports_lost_contraction() {
    let g = Grid1D::new(256, 8.0 * PI).unwrap();
    let spec = SemigroupSpec::new(0.5).unwrap();
    let phi = InitialData::Gaussian { amplitude: 60.0, width: 1.0, center: 0.0 }.sample(&g).unwrap();
    let picard = PicardSpec { iterations: 30, ..PicardSpec::default() };
    let err = picard_crosscheck(&phi, &spec, 1.0, &picard).unwrap_err();
    assert!(err.to_string().contains("outside contraction regime"), "{err}");
}

#[test]
fn zero_data_iterates_stay_zero() {
    let g = Grid1D::new(64, 8.0).unwrap();
    let spec = SemigroupSpec::new(0.5).unwrap();
    let (u, r) = picard_crosscheck(&PhysicalField::zeros(&g), &spec, 0.05, &PicardSpec::default()).unwrap();
    assert!(u.coefficients().iter().all(|c| c.norm() == 0.0));
    assert_eq!(r.discrepancy, 0.0);
}
