use num_complex::Complex64;
use std::f64::consts::PI;

use spdc_gauss::lgdecomp::{
    amplitude, amplitude_oracle, amplitude_sum, amplitude_table, coefficient_block, schmidt_number, spiral_spectrum,
    AmplitudeTable, ModeIndices, TableEntry,
};
use spdc_gauss::{ApproxSpec, CrystalOptics, Family, PumpSpec, QuadSpec};

const W: f64 = 20e-6;

fn optics() -> CrystalOptics {
    let kp = 2.0 * PI * 1.96 / 405e-9;
    CrystalOptics::new(2e-3, kp, 1.4e8, 1.6e8, 1.6e8).unwrap()
}

fn pump(p: u32, l: i32) -> PumpSpec {
    PumpSpec::new(W, p, l, 2e-13).unwrap()
}

fn modes(ps: u32, ls: i32, pi: u32, li: i32) -> ModeIndices {
    ModeIndices::new(ps, ls, pi, li, W, W).unwrap()
}

fn gaussian() -> ApproxSpec {
    ApproxSpec::gaussian(0.718).unwrap()
}

fn spec() -> QuadSpec {
    QuadSpec { rel_tol: 1e-8, ..QuadSpec::default() }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn lowest_order_amplitude_matches_oracle() {
    let (p, m) = (pump(0, 0), modes(0, 0, 0, 0));
    let a = amplitude(&p, &m, &optics(), &gaussian()).unwrap();
    let o = amplitude_oracle(&p, &m, &optics(), &gaussian(), &spec()).unwrap().value;
    assert!(rel(a, o) < 1e-6, "{a} vs {o}");
    assert!(a.norm() > 0.1 && a.norm() < 1.0, "{a}");
}

#[test]
fn selection_rule_in_both_routes() {
    for (p, m) in [(pump(0, 0), modes(0, 1, 0, 0)), (pump(0, 1), modes(1, 1, 0, 1)), (pump(1, 2), modes(0, -1, 1, 2))] {
        assert_eq!(amplitude(&p, &m, &optics(), &gaussian()).unwrap(), Complex64::new(0.0, 0.0));
        let o = amplitude_oracle(&p, &m, &optics(), &gaussian(), &spec()).unwrap().value;
        assert!(o.norm() <= 1e-10, "{o}");
    }
}

#[test]
fn exchange_of_unit_oam() {
    let a = amplitude(&pump(0, 1), &modes(0, 1, 0, 0), &optics(), &gaussian()).unwrap();
    let b = amplitude(&pump(0, 1), &modes(0, 0, 0, 1), &optics(), &gaussian()).unwrap();
    assert!(rel(a, b) < 1e-12, "{a} vs {b}");
}

#[test]
fn conjugation_for_negative_pump_oam() {
    let neg = amplitude(&pump(0, -1), &modes(0, -1, 0, 0), &optics(), &gaussian()).unwrap();
    let pos = amplitude(&pump(0, 1), &modes(0, 1, 0, 0), &optics(), &gaussian()).unwrap();
    assert!(rel(neg, pos.conj()) < 1e-14);
    let o = amplitude_oracle(&pump(0, -1), &modes(0, -1, 0, 0), &optics(), &gaussian(), &spec()).unwrap().value;
    assert!(rel(neg, o) < 1e-6, "{neg} vs {o}");
}

#[test]
fn thin_crystal_limit_is_three_gaussians() {
    let (ws, wi) = (25e-6, 31e-6);
    let m = ModeIndices::new(0, 0, 0, 0, ws, wi).unwrap();
    let s = amplitude_sum(&pump(0, 0), &m, &optics(), Complex64::from(1e-12)).unwrap();
    // plane Gaussian overlap with the phase-matching kernel set to 1
    let (h, b, d) = ((W * W + ws * ws) / 4.0, (W * W + wi * wi) / 4.0, -W * W / 4.0);
    let t = W * ws * wi / (2.0 * PI).powf(1.5);
    let expected = t * PI * PI / (h * b - d * d);
    assert!((s.re - expected).abs() < 1e-9 * expected && s.im.abs() < 1e-15 * expected, "{s} vs {expected}");
}

#[test]
fn cosine_gaussian_matches_oracle() {
    let cg = ApproxSpec::new(Family::CosineGaussian, 0.39, 0.49).unwrap();
    for (p, m) in [(pump(0, 0), modes(0, 0, 0, 0)), (pump(0, 1), modes(1, 2, 0, -1)), (pump(1, 0), modes(0, 1, 1, -1))] {
        let a = amplitude(&p, &m, &optics(), &cg).unwrap();
        let o = amplitude_oracle(&p, &m, &optics(), &cg, &spec()).unwrap().value;
        assert!(rel(a, o) < 1e-6, "{a} vs {o}");
    }
}

#[test]
fn hypergeometric_argument_stays_inside_the_disk() {
    for alpha in [Complex64::from(1e-6), Complex64::from(0.718), Complex64::new(0.39, -0.49), Complex64::from(50.0)] {
        for w in [1e-6, 20e-6, 1e-3] {
            let blk = coefficient_block(&PumpSpec::new(w, 0, 0, 1e-13).unwrap(), &modes(0, 0, 0, 0), &optics(), alpha).unwrap();
            assert!(blk.argument().norm() < 1.0);
        }
    }
}

#[test]
fn removable_point_of_d() {
    // D = 0 when w_p^2 = alpha L / k_p
    let opt = optics();
    let alpha = 0.718;
    let wp = (alpha * opt.length / opt.pump_wavenumber).sqrt();
    let p = PumpSpec::new(wp, 0, 1, 1e-13).unwrap();
    for m in [
        ModeIndices::new(0, 1, 0, 0, wp, wp).unwrap(),
        ModeIndices::new(1, 0, 0, 1, wp, wp).unwrap(),
        ModeIndices::new(0, 2, 1, -1, wp, wp).unwrap(),
    ] {
        let a = amplitude(&p, &m, &opt, &gaussian()).unwrap();
        let o = amplitude_oracle(&p, &m, &opt, &gaussian(), &spec()).unwrap().value;
        assert!((a - o).norm() <= 1e-6 * o.norm().max(1e-6), "{m:?}: {a} vs {o}");
    }
}

#[test]
fn table_rejects_families_without_amplitudes() {
    let sg = ApproxSpec::new(Family::SuperGaussian, 0.25, 0.0).unwrap();
    assert!(amplitude_table(&pump(0, 0), &optics(), &sg, W, W, 1, 1).is_err());
    let t = amplitude_table(&pump(0, 0), &optics(), &gaussian(), W, W, 1, 1).unwrap();
    assert!(t.entries.iter().all(|e| e.error.is_none()));
}

#[test]
fn unreachable_oam_gives_an_empty_table() {
    let t = amplitude_table(&pump(0, 1), &optics(), &gaussian(), W, W, 2, 0).unwrap();
    assert!(t.entries.is_empty());
    assert_eq!(t.captured_weight, 0.0);
    assert!(schmidt_number(&t).is_err());
}

#[test]
fn table_respects_selection_rule_and_is_deterministic() {
    let a = amplitude_table(&pump(0, 0), &optics(), &gaussian(), W, W, 2, 2).unwrap();
    assert!(a.entries.iter().all(|e| e.oam_signal + e.oam_idler == 0));
    assert_eq!(a.entries.len(), 5 * 9);
    let b = amplitude_table(&pump(0, 0), &optics(), &gaussian(), W, W, 2, 2).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn captured_weight_grows_towards_one() {
    let small = amplitude_table(&pump(0, 0), &optics(), &gaussian(), W, W, 1, 1).unwrap();
    let large = amplitude_table(&pump(0, 0), &optics(), &gaussian(), W, W, 6, 6).unwrap();
    assert!(small.captured_weight < large.captured_weight);
    assert!(large.captured_weight <= 1.0 + 1e-12);
}

fn entry(ps: u32, ls: i32, pi: u32, li: i32, c: Complex64) -> TableEntry {
    TableEntry { p_signal: ps, oam_signal: ls, p_idler: pi, oam_idler: li, amplitude: c, probability: c.norm_sqr(), error: None }
}

#[test]
fn schmidt_number_examples() {
    let one = AmplitudeTable {
        p_max: 1,
        l_max: 1,
        pump_oam: 0,
        entries: vec![entry(0, 0, 0, 0, Complex64::new(0.6, 0.0))],
        captured_weight: 0.36,
    };
    let k = schmidt_number(&one).unwrap();
    assert!((k.schmidt_number - 1.0).abs() < 1e-12);
    assert!(k.truncated);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let two = AmplitudeTable {
        p_max: 0,
        l_max: 1,
        pump_oam: 0,
        entries: vec![entry(0, 1, 0, -1, Complex64::new(h, 0.0)), entry(0, -1, 0, 1, Complex64::new(0.0, h))],
        captured_weight: 1.0,
    };
    let k = schmidt_number(&two).unwrap();
    assert!((k.schmidt_number - 2.0).abs() < 1e-12);
    assert!(!k.truncated);
}

#[test]
fn schmidt_number_matches_oracle_table() {
    let analytic = amplitude_table(&pump(0, 0), &optics(), &gaussian(), W, W, 1, 1).unwrap();
    let mut oracle = analytic.clone();
    for e in &mut oracle.entries {
        let m = modes(e.p_signal, e.oam_signal, e.p_idler, e.oam_idler);
        e.amplitude = amplitude_oracle(&pump(0, 0), &m, &optics(), &gaussian(), &spec()).unwrap().value;
        e.probability = e.amplitude.norm_sqr();
    }
    oracle.captured_weight = oracle.entries.iter().map(|e| e.probability).sum();
    let ka = schmidt_number(&analytic).unwrap().schmidt_number;
    let ko = schmidt_number(&oracle).unwrap().schmidt_number;
    assert!((ka - ko).abs() < 1e-6 * ko, "{ka} vs {ko}");
    assert!(ka >= 1.0);
}

#[test]
fn spiral_spectrum_symmetry_and_centre() {
    let t = amplitude_table(&pump(0, 0), &optics(), &gaussian(), W, W, 3, 3).unwrap();
    let s = spiral_spectrum(&t);
    for l in 1..=3 {
        assert!((s[&l] - s[&-l]).abs() <= 1e-12 * s[&0], "l = {l}");
    }
    let t = amplitude_table(&pump(0, 2), &optics(), &gaussian(), W, W, 3, 4).unwrap();
    let s = spiral_spectrum(&t);
    let peak = s.iter().max_by(|a, b| a.1.total_cmp(b.1)).map(|(l, _)| *l).unwrap();
    assert_eq!(peak, 1);
    // mirror symmetric about l_s = 1 for equal signal and idler waists
    for d in 1..=3 {
        assert!((s[&(1 + d)] - s[&(1 - d)]).abs() <= 1e-12 * s[&1], "d = {d}");
    }
}
