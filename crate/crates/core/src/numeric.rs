//! Small scalar helpers shared by several modules.

/// `ln(k!)` by direct summation; exact enough for the degrees used here (k ≲ 10⁴).
pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|j| f64::from(j).ln()).sum()
}

/// `x ln x` with the continuous extension `0 ln 0 = 0`.
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `ln Σ exp(aᵢ)` without overflow. Returns `-inf` for an empty slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Largest absolute second divided difference over consecutive triples,
/// scaled so that equally spaced samples give `(f₀ − 2f₁ + f₂)/h²`.
///
/// Samples are sorted by abscissa first. Fewer than three samples give 0.
pub fn max_second_difference(ts: &[f64], values: &[f64]) -> f64 {
    assert_eq!(ts.len(), values.len());
    let mut pts: Vec<(f64, f64)> = ts.iter().copied().zip(values.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.windows(3)
        .map(|w| {
            let (t0, f0) = w[0];
            let (t1, f1) = w[1];
            let (t2, f2) = w[2];
            let dd = f0 / ((t0 - t1) * (t0 - t2))
                + f1 / ((t1 - t0) * (t1 - t2))
                + f2 / ((t2 - t0) * (t2 - t1));
            (2.0 * dd).abs()
        })
        .fold(0.0, f64::max)
}

pub(crate) fn is_uniform(ts: &[f64]) -> bool {
    if ts.len() < 3 {
        return true;
    }
    let h = ts[1] - ts[0];
    ts.windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn lse_matches_naive_and_survives_overflow() {
        let v = [0.1, -2.0, 3.5];
        let naive = v.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&v) - naive).abs() < 1e-14);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn second_difference_of_quadratic_is_twice_leading_coefficient() {
        let ts = [0.0, 0.3, 1.0, 1.7];
        let vals: Vec<f64> = ts.iter().map(|t| 1.5 * t * t - t + 2.0).collect();
        assert!((max_second_difference(&ts, &vals) - 3.0).abs() < 1e-12);
        let lin: Vec<f64> = ts.iter().map(|t| 4.0 * t - 1.0).collect();
        assert!(max_second_difference(&ts, &lin) < 1e-13);
    }
}
