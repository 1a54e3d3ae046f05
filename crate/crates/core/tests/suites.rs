//! Integration coverage of the verification suites at desk scale with modest
//! path counts; the acceptance suite reruns the headline criteria at the
//! calibrated sizes.

use truncstable::geom::Point;
use truncstable::verify::{
    check_3g, check_boundary_harnack_report, check_decay, check_green_comparability,
    check_harnack, check_lemma_sanity, check_oscillation, default_comparability_pairs,
    dumbbell_domain, fatou_experiment, unit_ball_domain, SuiteConfig,
};

#[test]
fn harnack_suite_passes_and_flags_distant_control() {
    let domain = unit_ball_domain(2).unwrap();
    let cfg = SuiteConfig::new(1.0, 11, 4000);
    let centers = [
        Point::xy(0.0, 0.0),
        Point::xy(0.4, 0.2),
        Point::xy(-0.3, -0.45),
    ];
    let report = check_harnack(&domain, &cfg, 0.125, &centers).unwrap();
    assert!(report.pass, "notes: {:?}", report.notes);
    let c = report.constant("c").unwrap();
    assert!(c.is_finite() && c >= 1.0 && c < 50.0, "harnack constant {c}");
}

#[test]
fn comparability_suite_on_the_dumbbell() {
    let domain = dumbbell_domain(2, 0.5).unwrap();
    let cfg = SuiteConfig::new(1.0, 5, 20_000);
    let pairs = default_comparability_pairs(2);
    let report = check_green_comparability(&domain, &cfg, &pairs, true).unwrap();
    assert!(report.pass, "constants: {:?}, notes: {:?}", report.constants, report.notes);
    let c = report.constant("c").unwrap();
    assert!(c.is_finite() && c >= 1.0, "comparability constant {c}");
    // at smoke scale most pairs must already resolve
    assert!(report.constant("resolved_pairs").unwrap() >= 16.0);
}

#[test]
fn sharp_estimate_suite_on_the_ball() {
    let domain = unit_ball_domain(2).unwrap();
    let cfg = SuiteConfig::new(1.0, 7, 4000);
    let report = check_sharp_wrapper(&domain, &cfg);
    assert!(report.pass, "constants: {:?}, notes: {:?}", report.constants, report.notes);
    let slope = report.constant("boundary_slope").unwrap();
    assert!((slope - 0.5).abs() < 0.1, "slope {slope}");
}

fn check_sharp_wrapper(
    domain: &truncstable::geom::DomainSpec,
    cfg: &SuiteConfig,
) -> truncstable::verify::VerificationReport {
    truncstable::verify::check_sharp_c11(domain, cfg, 20_000).unwrap()
}

#[test]
fn threeg_suite_on_the_dumbbell() {
    let domain = dumbbell_domain(2, 0.5).unwrap();
    let cfg = SuiteConfig::new(1.0, 3, 20_000);
    let report = check_3g(&domain, &cfg, 100).unwrap();
    assert!(report.pass, "notes: {:?}", report.notes);
    let gamma = report.constant("gamma").unwrap();
    assert!(gamma > 0.0 && gamma < 1.0);
}

#[test]
fn decay_suite_near_a_boundary_point() {
    let domain = unit_ball_domain(2).unwrap();
    let cfg = SuiteConfig::new(1.0, 9, 6000);
    let report = check_decay(&domain, &cfg, &Point::xy(1.0, 0.0), 0.125).unwrap();
    assert!(report.pass, "constants: {:?}, notes: {:?}", report.constants, report.notes);
}

#[test]
fn oscillation_suite_finds_uniform_radius_fraction() {
    let domain = unit_ball_domain(2).unwrap();
    let cfg = SuiteConfig::new(1.0, 13, 3000);
    let centers: Vec<Point> = (0..4)
        .map(|k| {
            let th = 0.7 * k as f64;
            Point::xy(0.9 * th.cos(), 0.9 * th.sin())
        })
        .collect();
    let report = check_oscillation(&domain, &cfg, &centers, 0.5).unwrap();
    assert!(report.pass, "constants: {:?}", report.constants);
}

#[test]
fn fatou_suite_on_the_disc() {
    let cfg = SuiteConfig::new(1.0, 17, 12_000);
    let report = fatou_experiment(
        &cfg,
        std::f64::consts::FRAC_PI_4,
        0.1,
        &[0.62, 0.72, 0.82, 0.89, 0.942, 0.946, 0.95],
    )
    .unwrap();
    assert!(report.pass, "records: {:?}, notes: {:?}",
        report.records.iter().map(|r| (r.id.clone(), r.lhs, r.stderr)).collect::<Vec<_>>(),
        report.notes);
}

#[test]
fn report_only_suites_run() {
    let domain = unit_ball_domain(2).unwrap();
    let cfg = SuiteConfig::new(1.0, 19, 2000);
    let bhp = check_boundary_harnack_report(&domain, &cfg).unwrap();
    assert!(!bhp.required && bhp.pass);
    let sanity = check_lemma_sanity(&cfg).unwrap();
    assert!(!sanity.required && sanity.pass);
}

#[test]
fn suites_are_seed_deterministic() {
    let domain = unit_ball_domain(2).unwrap();
    let cfg = SuiteConfig::new(1.0, 23, 1500);
    let centers = [Point::xy(0.0, 0.0), Point::xy(0.3, -0.2)];
    let a = check_harnack(&domain, &cfg, 0.125, &centers).unwrap();
    let b = check_harnack(&domain, &cfg, 0.125, &centers).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}
