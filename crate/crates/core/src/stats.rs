//! Statistical helpers used by the verification suites: chi-square and
//! Kolmogorov–Smirnov tail probabilities, sample summaries, and least-squares
//! line fits.

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Regularized lower incomplete gamma P(a, x) by series / continued fraction.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // series
        let mut term = 1.0 / a;
        let mut sum = term;
        for k in 1..500 {
            term *= x / (a + k as f64);
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        (sum.ln() + a * x.ln() - x - libm::lgamma(a)).exp()
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x < a + 1.0 {
        1.0 - gamma_p(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn gamma_q_cf(a: f64, x: f64) -> f64 {
    // Lentz continued fraction for Q(a,x), x >= a+1
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (a * x.ln() - x - libm::lgamma(a)).exp() * h
}

/// Chi-square survival function with `k` degrees of freedom.
pub fn chi2_sf(stat: f64, k: usize) -> f64 {
    gamma_q(0.5 * k as f64, 0.5 * stat)
}

/// Chi-square statistic for observed counts against expected probabilities.
pub fn chi2_stat(observed: &[u64], expected_probs: &[f64], n_total: u64) -> f64 {
    debug_assert_eq!(observed.len(), expected_probs.len());
    let mut stat = 0.0;
    for (o, p) in observed.iter().zip(expected_probs) {
        let e = p * n_total as f64;
        let d = *o as f64 - e;
        stat += d * d / e;
    }
    stat
}

/// Asymptotic Kolmogorov distribution tail `Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov test; returns (statistic, asymptotic p-value).
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = a[i].min(b[j]);
        while i < n && a[i] <= t {
            i += 1;
        }
        while j < m && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n as f64 * m as f64) / (n as f64 + m as f64);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    (d, kolmogorov_q(lambda))
}

/// Rayleigh test of circular uniformity for 2-D directions; returns p-value.
pub fn rayleigh_p(angles: &[f64]) -> f64 {
    let n = angles.len() as f64;
    let c: f64 = angles.iter().map(|t| t.cos()).sum::<f64>() / n;
    let s: f64 = angles.iter().map(|t| t.sin()).sum::<f64>() / n;
    let r2 = c * c + s * s;
    let z = n * r2;
    // Best-known small-sample correction of the asymptotic exp(-Z)
    let p = (-z).exp() * (1.0 + (2.0 * z - z * z) / (4.0 * n)
        - (24.0 * z - 132.0 * z * z + 76.0 * z * z * z - 9.0 * z * z * z * z) / (288.0 * n * n));
    p.clamp(0.0, 1.0)
}

/// Ordinary least squares fit `y = intercept + slope * x`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

/// Fit `y_k = limit + a * x_k^g` by least squares over a grid of exponents.
/// Returns `(limit, a, g, residual_rms)`.
pub fn fit_power_offset(xs: &[f64], ys: &[f64], g_grid: &[f64]) -> (f64, f64, f64, f64) {
    let mut best = (f64::NAN, f64::NAN, f64::NAN, f64::INFINITY);
    for &g in g_grid {
        // linear LS in (limit, a) for fixed g
        let zs: Vec<f64> = xs.iter().map(|x| x.powf(g)).collect();
        let n = xs.len() as f64;
        let mz = zs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let mut szz = 0.0;
        let mut szy = 0.0;
        for (z, y) in zs.iter().zip(ys) {
            szz += (z - mz) * (z - mz);
            szy += (z - mz) * (y - my);
        }
        if szz <= 0.0 {
            continue;
        }
        let a = szy / szz;
        let limit = my - a * mz;
        let rss: f64 = zs
            .iter()
            .zip(ys)
            .map(|(z, y)| {
                let r = y - limit - a * z;
                r * r
            })
            .sum();
        let rms = (rss / n).sqrt();
        if rms < best.3 {
            best = (limit, a, g, rms);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi2_sf_frozen_values() {
        assert!((chi2_sf(30.0, 20) - 0.06985366069941).abs() < 1e-10);
        assert!((chi2_sf(50.0, 49) - 0.43343669725576).abs() < 1e-10);
        assert!((chi2_sf(74.9194743085, 49) - 0.01).abs() < 1e-8);
    }

    #[test]
    fn kolmogorov_frozen_values() {
        assert!((kolmogorov_q(0.5) - 0.963945243665).abs() < 1e-9);
        assert!((kolmogorov_q(1.0) - 0.269999671677).abs() < 1e-9);
        assert!((kolmogorov_q(1.2) - 0.112249666671).abs() < 1e-9);
        assert!((kolmogorov_q(1.6276) - 0.0100015373331).abs() < 1e-9);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 0.7 * x).collect();
        let (b, m) = fit_line(&xs, &ys);
        assert!((b - 2.0).abs() < 1e-12 && (m + 0.7).abs() < 1e-12);
    }

    #[test]
    fn power_offset_fit_recovers_exponent() {
        let xs = [0.4f64, 0.2, 0.1, 0.05];
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 + 0.8 * x.powf(0.6)).collect();
        let grid: Vec<f64> = (1..=40).map(|i| i as f64 * 0.05).collect();
        let (l, a, g, rms) = fit_power_offset(&xs, &ys, &grid);
        assert!((l - 1.5).abs() < 1e-3, "{l}");
        assert!((a - 0.8).abs() < 0.05);
        assert!((g - 0.6).abs() < 0.051);
        assert!(rms < 1e-4);
    }
}
