//! Suite registry and orchestration: maps suite names to library calls with
//! per-suite default geometry derived from the configured domain.

use anyhow::{anyhow, bail};

use truncstable::geom::{DomainSpec, Point};
use truncstable::verify::{
    check_3g, check_boundary_harnack_report, check_decay, check_green_comparability,
    check_harnack, check_lemma_sanity, check_oscillation, default_comparability_pairs,
    fatou_experiment, SuiteConfig, VerificationReport,
};


use crate::config::RunConfig;

pub const SUITE_NAMES: [&str; 9] = [
    "harnack",
    "comparability",
    "sharp-c11",
    "three-g",
    "decay",
    "oscillation",
    "fatou",
    "boundary-harnack",
    "lemma-sanity",
];

/// Interior points with boundary distance above `min_rho`, spread apart,
/// found on a deterministic grid.
fn interior_centers(domain: &DomainSpec, min_rho: f64, count: usize) -> Vec<Point> {
    let (bc, br) = domain.bounding_ball();
    let d = domain.dim();
    let step = br / 6.0;
    let half = (br / step).ceil() as i64;
    let mut candidates: Vec<(f64, Point)> = Vec::new();
    let mut idx = vec![-half; d];
    'grid: loop {
        let mut p = bc;
        for (i, &k) in idx.iter().enumerate() {
            p.set(i, bc[i] + k as f64 * step);
        }
        if domain.contains(&p) {
            let rho = domain.boundary_distance(&p);
            if rho > min_rho {
                candidates.push((rho, p));
            }
        }
        let mut i = 0;
        loop {
            if i == d {
                break 'grid;
            }
            idx[i] += 1;
            if idx[i] <= half {
                break;
            }
            idx[i] = -half;
            i += 1;
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    // greedy max-separation pick
    let mut picked: Vec<Point> = Vec::new();
    while picked.len() < count {
        let best = candidates
            .iter()
            .filter(|(_, p)| !picked.iter().any(|q| q.dist2(p) == 0.0))
            .max_by(|(ra, pa), (rb, pb)| {
                let da = picked.iter().map(|q| q.dist(pa)).fold(f64::INFINITY, f64::min);
                let db = picked.iter().map(|q| q.dist(pb)).fold(f64::INFINITY, f64::min);
                (da.min(*ra * 4.0)).total_cmp(&db.min(*rb * 4.0))
            });
        match best {
            Some((_, p)) => picked.push(*p),
            None => break,
        }
    }
    picked
}

/// Boundary-adjacent centers at a target depth, evenly spread over sampled
/// boundary points.
fn shallow_centers(domain: &DomainSpec, depth: f64, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = truncstable::rngutil::scoped_substream(seed, "shallow-centers", 0);
    let mut out = Vec::with_capacity(count);
    let mut guard = 0;
    while out.len() < count && guard < 50 * count {
        guard += 1;
        let q = domain.sample_boundary(&mut rng);
        if let Ok(a) = domain.fat_witness(&q, 2.0 * depth) {
            if out.iter().all(|p: &Point| p.dist(&a) > depth) {
                out.push(a);
            }
        }
    }
    out
}

pub struct RunOutcome {
    pub reports: Vec<VerificationReport>,
    /// True when every required suite passed.
    pub all_required_pass: bool,
}

/// Execute the selected suites sequentially and deterministically.
pub fn run_config(cfg: &RunConfig) -> anyhow::Result<RunOutcome> {
    let (_spec, domain) = cfg.validate()?;
    let suite_cfg = SuiteConfig::new(cfg.process.alpha, cfg.seed, cfg.n)
        .with_scheme(cfg.scheme.dt, cfg.scheme.eps);
    let names: Vec<String> = if cfg.suites.iter().any(|s| s == "all") {
        SUITE_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        cfg.suites.clone()
    };
    if names.is_empty() {
        bail!("no suites selected");
    }
    let mut reports = Vec::new();
    for name in &names {
        let report = run_suite(name, &domain, &suite_cfg)?;
        reports.push(report);
    }
    let all_required_pass = reports.iter().all(|r| !r.required || r.pass);
    Ok(RunOutcome {
        reports,
        all_required_pass,
    })
}

pub fn run_suite(
    name: &str,
    domain: &DomainSpec,
    cfg: &SuiteConfig,
) -> anyhow::Result<VerificationReport> {
    let map_err = |e: truncstable::Error| anyhow!("suite {name}: {e}");
    match name {
        "harnack" => {
            let r = 0.125;
            let centers = interior_centers(domain, 2.0 * r, 3);
            if centers.is_empty() {
                bail!("suite harnack: no interior centers with clearance for r = {r}");
            }
            check_harnack(domain, cfg, r, &centers).map_err(map_err)
        }
        "comparability" => {
            let graph = domain.roughly_connected();
            if !graph.connected {
                // disconnected domains run the expected-failure control only
                return truncstable::verify::check_disconnected_control(domain, cfg)
                    .map_err(map_err);
            }
            let pairs = default_comparability_pairs(domain.dim());
            // the default pairs assume the gap-0.5 dumbbell; fall back to
            // interior pairs for other domains
            let pairs = if domain.label.starts_with("dumbbell") {
                pairs
            } else {
                let centers = interior_centers(domain, 0.2, 5);
                let mut ps = Vec::new();
                for i in 0..centers.len() {
                    for j in (i + 1)..centers.len() {
                        ps.push((centers[i], centers[j]));
                    }
                }
                ps
            };
            check_green_comparability(domain, cfg, &pairs, true).map_err(map_err)
        }
        "sharp-c11" => check_sharp(domain, cfg).map_err(map_err),
        "three-g" => check_3g(domain, cfg, 100).map_err(map_err),
        "decay" => {
            let probe = {
                let (bc, br) = domain.bounding_ball();
                let mut p = bc;
                p.set(0, bc[0] + 2.0 * br);
                p
            };
            let (q, _) = domain.nearest_boundary(&probe);
            check_decay(domain, cfg, &q, 0.125).map_err(map_err)
        }
        "oscillation" => {
            let centers = shallow_centers(domain, 0.1, 10, cfg.seed);
            if centers.len() < 10 {
                bail!("suite oscillation: could not place 10 boundary-adjacent centers");
            }
            check_oscillation(domain, cfg, &centers, 0.5).map_err(map_err)
        }
        "fatou" => fatou_experiment(
            cfg,
            std::f64::consts::FRAC_PI_4,
            0.1,
            &[0.62, 0.72, 0.82, 0.89, 0.942, 0.946, 0.95],
        )
        .map_err(map_err),
        "boundary-harnack" => check_boundary_harnack_report(domain, cfg).map_err(map_err),
        "lemma-sanity" => check_lemma_sanity(cfg).map_err(map_err),
        other => bail!("unknown suite '{other}'"),
    }
}

fn check_sharp(
    domain: &DomainSpec,
    cfg: &SuiteConfig,
) -> truncstable::Result<VerificationReport> {
    let n_slope = cfg.n.max(20_000);
    truncstable::verify::check_sharp_c11(domain, cfg, n_slope)
}
