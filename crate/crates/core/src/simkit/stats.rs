//! Binomial and mean confidence intervals.

use crate::analytics::q_function;

/// Two-sided standard normal critical value for `confidence`, e.g. 1.96 for 0.95.
pub fn normal_critical_value(confidence: f64) -> f64 {
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must lie in (0, 1), got {confidence}"
    );
    let tail = (1.0 - confidence) / 2.0;
    // Q is strictly decreasing; bisect Q(z) = tail.
    let (mut lo, mut hi) = (0.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if q_function(mid) > tail {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0, "wilson interval needs at least one trial");
    assert!(
        successes <= trials,
        "successes {successes} exceed trials {trials}"
    );
    let z = normal_critical_value(confidence);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // The bounds are exactly 0 and 1 at the extremes; rounding would leave a residue.
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Normal-approximation interval for a mean from its sum and sum of squares.
pub fn mean_interval(sum: f64, sum_sq: f64, count: u64, confidence: f64) -> (f64, f64) {
    assert!(count > 0, "mean interval needs at least one sample");
    let n = count as f64;
    let mean = sum / n;
    if count == 1 {
        return (mean, mean);
    }
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    let half = normal_critical_value(confidence) * (var / n).sqrt();
    (mean - half, mean + half)
}
