use std::f64::consts::PI;

use spdc_gauss::fidelity::{
    closed_form, fidelity, fidelity_cosinegaussian_closed, fidelity_gaussian_closed, fidelity_spatial_oracle,
    fidelity_spatiotemporal_oracle, fidelity_spectral_oracle, fidelity_supergaussian_closed, is_degenerate,
    norm_constants, optimize_factors, pulse_duration_grid, pump_ratio, sweep, Method, Mode, SweepAxis,
};
use spdc_gauss::numerics::{erf, OptimSpec};
use spdc_gauss::preset::typical_ppktp_like;
use spdc_gauss::{ApproxSpec, CrystalOptics, Error, Family, PumpSpec, QuadSpec};

fn preset() -> (CrystalOptics, PumpSpec) {
    let p = typical_ppktp_like();
    (p.optics().unwrap(), p.pump().unwrap())
}

fn spec() -> QuadSpec {
    QuadSpec::default()
}

#[test]
fn gaussian_closed_form_examples() {
    // the exact maximum is 0.9065; the quoted 0.900 is a rounding
    assert!((fidelity_gaussian_closed(0.718).unwrap() - 0.9065).abs() < 1e-4);
    assert!((fidelity_gaussian_closed(1.0).unwrap() - PI.sqrt() / 2.0).abs() < 1e-14);
    assert!(fidelity_gaussian_closed(1e-12).unwrap() < 1e-5);
}

#[test]
fn supergaussian_closed_form_examples() {
    assert!((fidelity_supergaussian_closed(0.255).unwrap() - 0.943).abs() < 1e-3);
    let at_one = (2.0 * PI).powf(0.25) * erf(0.5);
    assert!((fidelity_supergaussian_closed(1.0).unwrap() - at_one).abs() < 1e-14);
    assert!((at_one - 0.8240).abs() < 1e-4);
    assert!(fidelity_supergaussian_closed(1e-12).unwrap() < 1e-2);
}

#[test]
fn cosinegaussian_closed_form_examples() {
    for a in [0.05, 0.49, 1.7] {
        let d = fidelity_cosinegaussian_closed(a, 0.0).unwrap() - fidelity_gaussian_closed(a).unwrap();
        assert!(d.abs() <= 1e-12);
    }
    assert!((fidelity_cosinegaussian_closed(0.49, 0.39).unwrap() - 0.935).abs() < 1e-3);
    assert!((fidelity_cosinegaussian_closed(0.39, 0.49).unwrap() - 0.944).abs() < 1e-3);
}

#[test]
fn oracle_examples() {
    let g = fidelity_spatial_oracle(&ApproxSpec::gaussian(0.718).unwrap(), &spec()).unwrap();
    assert_eq!(g.method, Method::Oracle);
    assert!((g.fidelity - fidelity_gaussian_closed(0.718).unwrap()).abs() < 1e-6);
    let sg = fidelity_spatial_oracle(&ApproxSpec::new(Family::SuperGaussian, 0.255, 0.0).unwrap(), &spec()).unwrap();
    assert!((sg.fidelity - 0.943).abs() < 1e-3);
    let csg =
        fidelity_spatial_oracle(&ApproxSpec::new(Family::CosineSuperGaussian, 0.07, 0.5).unwrap(), &spec()).unwrap();
    assert!((csg.fidelity - 0.97).abs() < 5e-3);
}

#[test]
fn spatial_fidelity_vanishes_at_both_ends() {
    for a in [1e-8, 1e6] {
        let f = fidelity_gaussian_closed(a).unwrap();
        assert!(f > 0.0 && f < 1e-2, "alpha = {a}: {f}");
    }
}

#[test]
fn dispatcher_prefers_closed_forms_when_asked() {
    let (opt, pump) = preset();
    let approx = ApproxSpec::new(Family::CosineGaussian, 0.39, 0.49).unwrap();
    let c = fidelity(&approx, Mode::Spatial, &opt, &pump, &spec(), Method::ClosedForm).unwrap();
    let o = fidelity(&approx, Mode::Spatial, &opt, &pump, &spec(), Method::Oracle).unwrap();
    assert_eq!(c.method, Method::ClosedForm);
    assert_eq!(o.method, Method::Oracle);
    assert!((c.fidelity - o.fidelity).abs() < 1e-8);
    // no closed form: the oracle answers either way
    let csg = ApproxSpec::new(Family::CosineSuperGaussian, 0.07, 0.5).unwrap();
    let r = fidelity(&csg, Mode::Spatial, &opt, &pump, &spec(), Method::ClosedForm).unwrap();
    assert_eq!(r.method, Method::Oracle);
    assert!(closed_form(&csg).is_none());
}

#[test]
fn invalid_inputs_are_domain_errors() {
    let (opt, pump) = preset();
    assert!(matches!(ApproxSpec::gaussian(-1.0), Err(Error::Domain(_))));
    let sinc = ApproxSpec::sinc();
    assert!(matches!(fidelity(&sinc, Mode::Spatial, &opt, &pump, &spec(), Method::ClosedForm), Err(Error::Domain(_))));
    let sg = ApproxSpec::new(Family::SuperGaussian, 0.25, 0.0).unwrap();
    assert!(matches!(fidelity(&sg, Mode::Spectral, &opt, &pump, &spec(), Method::Oracle), Err(Error::Domain(_))));
}

#[test]
fn normalization_constants_are_consistent() {
    let (opt, _) = preset();
    let n = norm_constants(&ApproxSpec::gaussian(0.5).unwrap(), &opt, &spec()).unwrap();
    // N_sinc^2 = 2 L / (pi^2 k_p), N_G^2 = 2 alpha L / (pi k_p)
    let scale = opt.length / opt.pump_wavenumber;
    assert!((n.sinc.powi(2) - 2.0 * scale / (PI * PI)).abs() < 1e-12 * n.sinc.powi(2));
    assert!((n.family.powi(2) - scale / PI).abs() < 1e-12 * n.family.powi(2));
}

#[test]
fn preset_is_degenerate() {
    let (opt, pump) = preset();
    assert!(is_degenerate(&opt));
    assert!((pump_ratio(&opt, &pump) - 2.0 * pump.pulse_duration / opt.phase_matching_time()).abs() < 1e-15);
}

#[test]
fn spectral_limits() {
    let (opt, pump) = preset();
    let t = opt.phase_matching_time();
    // long pulses: the pump spectrum only samples the flat top of both shapes
    let long = PumpSpec { pulse_duration: 200.0 * t, ..pump };
    let f = fidelity_spectral_oracle(0.25, &opt, &long, &spec()).unwrap().fidelity;
    assert!(f >= 1.0 - 1e-3, "{f}");
    // short pulses: full-line sinc against exp(-alpha x^2), which is the
    // super-Gaussian closed form; the sinc^2 mass beyond x ~ 1/tau makes the
    // approach linear in tau
    for a in [0.1, 0.25, 0.8] {
        let limit = fidelity_supergaussian_closed(a).unwrap();
        let gap = |ratio: f64| {
            let p = PumpSpec { pulse_duration: ratio * t, ..pump };
            (fidelity_spectral_oracle(a, &opt, &p, &spec()).unwrap().fidelity - limit).abs()
        };
        let (coarse, fine) = (gap(1e-4), gap(1e-5));
        assert!(fine < 1e-5, "alpha = {a}: {fine}");
        assert!((coarse / fine - 10.0).abs() < 1.0, "alpha = {a}: {coarse} / {fine}");
    }
}

#[test]
fn spectral_fidelity_grows_with_pulse_duration() {
    let (opt, pump) = preset();
    let grid = pulse_duration_grid(&opt, 8, 4.0).unwrap();
    assert_eq!(grid.len(), 33);
    let base = ApproxSpec::gaussian(0.25).unwrap();
    let rows = sweep(&base, Mode::Spectral, SweepAxis::PulseDuration, &grid, &opt, &pump, &spec(), Method::Oracle).unwrap();
    let f: Vec<f64> = rows.iter().map(|r| r.report.unwrap().fidelity).collect();
    for w in f.windows(2) {
        assert!(w[1] >= w[0] - 1e-9, "{} then {}", w[0], w[1]);
    }
}

#[test]
fn spectral_optimum_in_the_sinc_dominated_regime() {
    let (opt, pump) = preset();
    let short = PumpSpec { pulse_duration: 1e-2 * opt.phase_matching_time(), ..pump };
    let r = optimize_factors(Family::Gaussian, Mode::Spectral, &opt, &short, &spec(), &OptimSpec::default()).unwrap();
    assert!((r.argmax[0] - 0.255).abs() < 0.01, "{:?}", r);
}

#[test]
fn non_degenerate_spectral_fidelity_is_pulse_independent() {
    let (opt, pump) = preset();
    let opt = CrystalOptics { u_idler: 0.9 * opt.u_signal, ..opt };
    assert!(!is_degenerate(&opt));
    let a = fidelity_spectral_oracle(0.25, &opt, &pump, &spec()).unwrap().fidelity;
    let b = fidelity_spectral_oracle(0.25, &opt, &PumpSpec { pulse_duration: 1e-15, ..pump }, &spec()).unwrap().fidelity;
    assert!((a - b).abs() < 1e-12);
    assert!((a - fidelity_supergaussian_closed(0.25).unwrap()).abs() < 1e-6);
}

#[test]
fn spatiotemporal_fidelity_depends_on_neither_pulse_nor_length() {
    // the inner half-line integrand is even in the mismatch and the pump
    // weight is symmetric, so the pump profile cancels in the ratio
    let (opt, pump) = preset();
    let reference = fidelity_supergaussian_closed(0.25).unwrap();
    let t = opt.phase_matching_time();
    for (factor, length) in [(0.01, 1.0), (0.1, 1.0), (1.0, 2.0), (10.0, 1.0)] {
        let o = CrystalOptics { length: length * opt.length, ..opt };
        let p = PumpSpec { pulse_duration: factor * t, ..pump };
        let f = fidelity_spatiotemporal_oracle(0.25, &o, &p, &spec()).unwrap().fidelity;
        assert!((f - reference).abs() < 1e-6, "t0 = {factor} T, L x {length}: {f} vs {reference}");
    }
}

#[test]
fn non_degenerate_spatiotemporal_matches_degenerate_value() {
    let (opt, pump) = preset();
    let opt = CrystalOptics { u_idler: 0.9 * opt.u_signal, ..opt };
    let f = fidelity_spatiotemporal_oracle(0.25, &opt, &pump, &spec()).unwrap().fidelity;
    assert!((f - fidelity_supergaussian_closed(0.25).unwrap()).abs() < 1e-5, "{f}");
}

#[test]
fn zero_walkoff_is_unit_spectral_fidelity() {
    let opt = CrystalOptics::new(2e-3, 3e7, 1.6e8, 1.6e8, 1.6e8).unwrap();
    let pump = PumpSpec::new(1e-4, 0, 0, 1e-13).unwrap();
    assert_eq!(fidelity_spectral_oracle(0.3, &opt, &pump, &spec()).unwrap().fidelity, 1.0);
    assert!(pulse_duration_grid(&opt, 8, 4.0).is_err());
}

#[test]
fn optimizer_examples() {
    let (opt, pump) = preset();
    let g = optimize_factors(Family::Gaussian, Mode::Spatial, &opt, &pump, &spec(), &OptimSpec::default()).unwrap();
    assert!((g.argmax[0] - 0.718).abs() < 1e-3 && g.converged);
    let sg = optimize_factors(Family::SuperGaussian, Mode::Spatial, &opt, &pump, &spec(), &OptimSpec::default()).unwrap();
    assert!((sg.argmax[0] - 0.255).abs() < 1e-3);
    assert!((sg.value - 0.943).abs() < 1e-3);
    let csg =
        optimize_factors(Family::CosineSuperGaussian, Mode::Spatial, &opt, &pump, &spec(), &OptimSpec::default()).unwrap();
    assert!((csg.argmax[0] - 0.07).abs() < 0.01 && (csg.argmax[1] - 0.5).abs() < 0.05);
    assert!((csg.value - 0.97).abs() < 0.01);
    assert!(optimize_factors(Family::SincExact, Mode::Spatial, &opt, &pump, &spec(), &OptimSpec::default()).is_err());
}

#[test]
fn sweep_examples() {
    let (opt, pump) = preset();
    let base = ApproxSpec::gaussian(1.0).unwrap();
    let one = sweep(&base, Mode::Spatial, SweepAxis::Alpha, &[0.718], &opt, &pump, &spec(), Method::ClosedForm).unwrap();
    assert_eq!(one.len(), 1);
    assert!((one[0].report.unwrap().fidelity - 0.9065).abs() < 1e-4);

    let three =
        sweep(&base, Mode::Spatial, SweepAxis::Alpha, &[0.1, 0.718, 3.0], &opt, &pump, &spec(), Method::ClosedForm).unwrap();
    let f: Vec<f64> = three.iter().map(|r| r.report.unwrap().fidelity).collect();
    assert!(f[1] > f[0] && f[1] > f[2]);

    assert!(sweep(&ApproxSpec::sinc(), Mode::Spatial, SweepAxis::Alpha, &[1.0], &opt, &pump, &spec(), Method::ClosedForm)
        .is_err());
    assert!(sweep(&base, Mode::Spatial, SweepAxis::Alpha, &[], &opt, &pump, &spec(), Method::ClosedForm).is_err());
    assert!(sweep(&base, Mode::Spatial, SweepAxis::Beta, &[0.1], &opt, &pump, &spec(), Method::ClosedForm).is_err());
}

#[test]
fn failing_sweep_points_are_recorded() {
    let (opt, pump) = preset();
    let base = ApproxSpec::gaussian(1.0).unwrap();
    let rows =
        sweep(&base, Mode::Spatial, SweepAxis::Alpha, &[0.5, -1.0, 2.0], &opt, &pump, &spec(), Method::ClosedForm).unwrap();
    assert!(rows[0].report.is_some() && rows[2].report.is_some());
    assert!(rows[1].report.is_none() && rows[1].error.is_some() && !rows[1].numerical_failure);
    assert_eq!(rows.iter().map(|r| r.coordinate).collect::<Vec<_>>(), vec![0.5, -1.0, 2.0]);
}

#[test]
fn regimes_split_at_a_decade_from_the_crossover() {
    use spdc_gauss::fidelity::{regime, Regime};
    let opt = spdc_gauss::preset::typical_ppktp_like().optics().unwrap();
    let t = opt.phase_matching_time();
    let at = |t0: f64| regime(&opt, &PumpSpec::new(1e-4, 0, 0, t0).unwrap());
    assert_eq!(at(0.1 * t), Regime::SincDominated);
    assert_eq!(at(t), Regime::Intermediate);
    assert_eq!(at(10.0 * t), Regime::PumpDominated);
}
