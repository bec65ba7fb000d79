//! Closed-form error probabilities and block error rates.
//!
//! Every probability has a natural-log twin (`ln_*`) that stays finite where
//! the linear value underflows (roughly `Q(x)` for `x > 38`), so high-SNR
//! ratios such as the BLER gains can be evaluated at any SNR.

use std::f64::consts::{LN_2, SQRT_2};

use crate::phy::{pnc_log_term, ChannelParams};
use crate::schemes::SchemeKind;

/// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Above this argument `ln_q` switches from `ln(erfc)` to the continued fraction.
const LN_Q_SWITCH: f64 = 30.0;
const MILLS_DEPTH: u32 = 60;

/// Gaussian tail probability `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `ln Q(x)`, finite for every finite `x`.
pub fn ln_q(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    if x < 0.0 {
        (-q_function(-x)).ln_1p()
    } else if x < LN_Q_SWITCH {
        q_function(x).ln()
    } else {
        // Laplace continued fraction for the Mills ratio Q(x) / phi(x).
        let mut t = x;
        for k in (1..=MILLS_DEPTH).rev() {
            t = x + k as f64 / t;
        }
        -0.5 * x * x - LN_SQRT_2PI - t.ln()
    }
}

/// `ln(exp(a) + exp(b))`.
fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    if hi == f64::INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Arguments of the closed form: `(sqrt(2 gamma), Delta)`.
fn pnc_arguments(gamma: f64) -> (f64, f64) {
    let a = (2.0 * gamma).sqrt();
    let delta = SQRT_2 / (4.0 * gamma.sqrt()) * pnc_log_term(gamma);
    (a, delta)
}

/// Per-symbol error probability of the relay's PNC mapping:
/// `Q(a + D) + Q(a - D)/2 - Q(3a + D)/2` with `a = sqrt(2 gamma)` and
/// `D = sqrt(2) / (4 sqrt(gamma)) * ln(1 + sqrt(1 - exp(-8 gamma)))`.
pub fn p_pnc_exact(params: &ChannelParams) -> f64 {
    let gamma = params.gamma();
    if gamma.is_infinite() {
        return 0.0;
    }
    let (a, d) = pnc_arguments(gamma);
    q_function(a + d) + 0.5 * (q_function(a - d) - q_function(3.0 * a + d))
}

pub fn ln_p_pnc_exact(params: &ChannelParams) -> f64 {
    let gamma = params.gamma();
    if gamma.is_infinite() {
        return f64::NEG_INFINITY;
    }
    let (a, d) = pnc_arguments(gamma);
    let outer = ln_q(a + d);
    let inner = ln_q(a - d);
    let far = ln_q(3.0 * a + d);
    let same_bits = -LN_2 + inner + (-(far - inner).exp()).ln_1p();
    ln_add(outer, same_bits)
}

/// High-SNR approximation `1.5 Q(sqrt(2 gamma))` of the PNC symbol error.
pub fn p_pnc_approx(params: &ChannelParams) -> f64 {
    1.5 * p_bpsk(params)
}

/// Point-to-point BPSK symbol error `Q(sqrt(2 gamma))`.
pub fn p_bpsk(params: &ChannelParams) -> f64 {
    q_function((2.0 * params.gamma()).sqrt())
}

pub fn ln_p_bpsk(params: &ChannelParams) -> f64 {
    ln_q((2.0 * params.gamma()).sqrt())
}

/// `1 - (1 - p)^up * (1 - q)^down`.
fn two_hop_failure(up: usize, p: f64, down: usize, q: f64) -> f64 {
    -(up as f64 * (-p).ln_1p() + down as f64 * (-q).ln_1p()).exp_m1()
}

/// `ln(-ln(1 - p))` from `ln p`.
fn ln_neg_log1m(ln_p: f64) -> f64 {
    let p = ln_p.exp();
    if ln_p > -30.0 {
        (-(-p).ln_1p()).ln()
    } else {
        ln_p + 0.5 * p
    }
}

/// Log-domain version of [`two_hop_failure`].
fn ln_two_hop_failure(up: usize, ln_p: f64, down: usize, ln_q: f64) -> f64 {
    let mut ln_rate = f64::NEG_INFINITY;
    if up > 0 {
        ln_rate = ln_add(ln_rate, (up as f64).ln() + ln_neg_log1m(ln_p));
    }
    if down > 0 {
        ln_rate = ln_add(ln_rate, (down as f64).ln() + ln_neg_log1m(ln_q));
    }
    let rate = ln_rate.exp();
    if ln_rate < -18.0 {
        ln_rate - 0.5 * rate
    } else {
        (-(-rate).exp_m1()).ln()
    }
}

fn check_code(n: usize, k: usize) {
    assert!(0 < k && k < n, "need 0 < k < n, got n={n}, k={k}");
}

/// Uplink and downlink symbol counts that must all arrive intact.
fn exposed_symbols(scheme: SchemeKind, n: usize, k: usize) -> (usize, usize) {
    scheme.symbol_budget(n, k)
}

/// Coefficient `c` of the asymptote `c * Q(sqrt(2 gamma))`.
pub fn asymptotic_coefficient(scheme: SchemeKind, n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    match scheme {
        SchemeKind::Scpnc => 5.0 * (n - k) / 2.0,
        SchemeKind::Rcpnc => (5.0 * n - 2.0 * k) / 2.0,
        SchemeKind::Conventional => 5.0 * n / 2.0,
    }
}

pub fn bler_exact(scheme: SchemeKind, params: &ChannelParams, n: usize, k: usize) -> f64 {
    check_code(n, k);
    let (up, down) = exposed_symbols(scheme, n, k);
    two_hop_failure(up, p_pnc_exact(params), down, p_bpsk(params))
}

pub fn ln_bler_exact(scheme: SchemeKind, params: &ChannelParams, n: usize, k: usize) -> f64 {
    check_code(n, k);
    let (up, down) = exposed_symbols(scheme, n, k);
    ln_two_hop_failure(up, ln_p_pnc_exact(params), down, ln_p_bpsk(params))
}

pub fn bler_asymptotic(scheme: SchemeKind, params: &ChannelParams, n: usize, k: usize) -> f64 {
    check_code(n, k);
    asymptotic_coefficient(scheme, n, k) * p_bpsk(params)
}

pub fn ln_bler_asymptotic(scheme: SchemeKind, params: &ChannelParams, n: usize, k: usize) -> f64 {
    check_code(n, k);
    asymptotic_coefficient(scheme, n, k).ln() + ln_p_bpsk(params)
}

/// Relay-phase failure over the `n - k` syndrome symbols.
pub fn p_relay_scpnc(params: &ChannelParams, n: usize, k: usize) -> f64 {
    check_code(n, k);
    two_hop_failure(n - k, p_pnc_exact(params), 0, 0.0)
}

/// Broadcast-phase failure of the `n - k` syndrome symbols at one destination.
pub fn p_broadcast_scpnc(params: &ChannelParams, n: usize, k: usize) -> f64 {
    check_code(n, k);
    two_hop_failure(0, 0.0, n - k, p_bpsk(params))
}

pub fn bler_scpnc_exact(params: &ChannelParams, n: usize, k: usize) -> f64 {
    bler_exact(SchemeKind::Scpnc, params, n, k)
}

pub fn bler_scpnc_asym(params: &ChannelParams, n: usize, k: usize) -> f64 {
    bler_asymptotic(SchemeKind::Scpnc, params, n, k)
}

pub fn bler_rcpnc_exact(params: &ChannelParams, n: usize, k: usize) -> f64 {
    bler_exact(SchemeKind::Rcpnc, params, n, k)
}

pub fn bler_rcpnc_asym(params: &ChannelParams, n: usize, k: usize) -> f64 {
    bler_asymptotic(SchemeKind::Rcpnc, params, n, k)
}

/// The conventional scheme exposes `n` symbols on each hop; `k` plays no role.
pub fn bler_conv_exact(params: &ChannelParams, n: usize) -> f64 {
    two_hop_failure(n, p_pnc_exact(params), n, p_bpsk(params))
}

pub fn bler_conv_asym(params: &ChannelParams, n: usize) -> f64 {
    2.5 * n as f64 * p_bpsk(params)
}

/// High-SNR BLER ratio conventional / SCPNC, `n / (n - k)`.
pub fn gain_scpnc(n: usize, k: usize) -> f64 {
    check_code(n, k);
    n as f64 / (n - k) as f64
}

/// High-SNR BLER ratio conventional / RCPNC, `5n / (5n - 2k)`.
pub fn gain_rcpnc(n: usize, k: usize) -> f64 {
    check_code(n, k);
    5.0 * n as f64 / (5 * n - 2 * k) as f64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlerPrediction {
    pub scheme: SchemeKind,
    pub gamma: f64,
    pub exact: f64,
    pub asymptotic: f64,
    pub ln_exact: f64,
    pub ln_asymptotic: f64,
}

pub fn predict(scheme: SchemeKind, params: &ChannelParams, n: usize, k: usize) -> BlerPrediction {
    BlerPrediction {
        scheme,
        gamma: params.gamma(),
        exact: bler_exact(scheme, params, n, k),
        asymptotic: bler_asymptotic(scheme, params, n, k),
        ln_exact: ln_bler_exact(scheme, params, n, k),
        ln_asymptotic: ln_bler_asymptotic(scheme, params, n, k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at_db(db: f64) -> ChannelParams {
        ChannelParams::from_snr_db(db).unwrap()
    }

    fn grid() -> impl Iterator<Item = f64> {
        (0..=28).map(|i| i as f64 * 0.5)
    }

    #[test]
    fn q_basics() {
        assert_eq!(q_function(0.0), 0.5);
        assert!(q_function(40.0) < 1e-300);
        for x in [0.1, 1.0, 2.5, 6.0] {
            assert!((q_function(-x) - (1.0 - q_function(x))).abs() < 1e-15);
        }
        let mut prev = 1.0;
        for i in -40..=80 {
            let q = q_function(i as f64 * 0.1);
            assert!(q <= prev);
            prev = q;
        }
    }

    #[test]
    fn ln_q_is_continuous_across_switch() {
        for x in [29.0, 29.99, 30.0, 30.01, 33.0, 37.0] {
            let direct = q_function(x).ln();
            let cf = {
                let mut t = x;
                for k in (1..=MILLS_DEPTH).rev() {
                    t = x + k as f64 / t;
                }
                -0.5 * x * x - LN_SQRT_2PI - t.ln()
            };
            assert!((direct - cf).abs() < 1e-10 * direct.abs(), "x={x}");
            assert!((ln_q(x) - direct).abs() < 1e-10 * direct.abs());
        }
        assert!(ln_q(1e3).is_finite());
        assert_eq!(ln_q(f64::INFINITY), f64::NEG_INFINITY);
        assert!((ln_q(-3.0) - (1.0 - q_function(3.0)).ln()).abs() < 1e-16);
    }

    #[test]
    fn pnc_probability_matches_log_form() {
        for db in grid() {
            let p = at_db(db);
            let lin = p_pnc_exact(&p);
            assert!((ln_p_pnc_exact(&p) - lin.ln()).abs() < 1e-12, "{db} dB");
        }
        assert_eq!(p_pnc_exact(&ChannelParams::noiseless()), 0.0);
    }

    #[test]
    fn pnc_probability_extreme_gammas() {
        for gamma in [1e-3, 1e-2, 1.0, 1e2, 1e4] {
            let p = ChannelParams::new(gamma, 1.0).unwrap();
            let v = p_pnc_exact(&p);
            assert!((0.0..=1.0).contains(&v), "gamma {gamma}: {v}");
            assert!(ln_p_pnc_exact(&p).is_finite());
        }
        // Low SNR: the detector is close to a coin flip.
        let v = p_pnc_exact(&ChannelParams::new(1e-3, 1.0).unwrap());
        assert!(v > 0.4 && v < 0.5);
    }

    #[test]
    fn pnc_high_snr_ratio() {
        // a * Delta -> ln(2)/2, so Q(a +- Delta) ~ Q(a) * 2^(-+1/2) and the
        // closed form tends to sqrt(2) Q(a), i.e. (2 sqrt 2 / 3) * 1.5 Q(a).
        let limit = 2.0 * SQRT_2 / 3.0;
        let p = ChannelParams::new(1e3, 1.0).unwrap();
        let ratio = (ln_p_pnc_exact(&p) - (1.5f64).ln() - ln_p_bpsk(&p)).exp();
        assert!((ratio - limit).abs() < 2e-3, "ratio {ratio}");
        let p = ChannelParams::new(1e5, 1.0).unwrap();
        let ratio = (ln_p_pnc_exact(&p) - (1.5f64).ln() - ln_p_bpsk(&p)).exp();
        assert!((ratio - limit).abs() < 2e-5, "ratio {ratio}");
    }

    #[test]
    fn asymptote_instances() {
        let p = at_db(10.0);
        let expected = 25.0 * q_function(20f64.sqrt());
        assert!(
            (bler_scpnc_asym(&p, 15, 5) - expected).abs() < 1e-15 * expected.max(1e-300) * 10.0
        );
        assert_eq!(asymptotic_coefficient(SchemeKind::Rcpnc, 15, 5), 32.5);
        assert_eq!(
            asymptotic_coefficient(SchemeKind::Conventional, 15, 5),
            37.5
        );
        // linear in n - k
        let a = bler_scpnc_asym(&p, 15, 5);
        let b = bler_scpnc_asym(&p, 15, 10);
        assert!((a / b - 2.0).abs() < 1e-12);
        assert_eq!(
            bler_conv_asym(&p, 15),
            bler_asymptotic(SchemeKind::Conventional, &p, 15, 5)
        );
    }

    #[test]
    fn scpnc_decomposes_into_two_hops() {
        let p = at_db(6.0);
        let pr = p_relay_scpnc(&p, 15, 5);
        let pr2 = p_broadcast_scpnc(&p, 15, 5);
        let direct = 1.0 - (1.0 - pr) * (1.0 - pr2);
        assert!((bler_scpnc_exact(&p, 15, 5) - direct).abs() < 1e-14);
        let pr_naive = 1.0 - (1.0 - p_pnc_exact(&p)).powi(10);
        assert!((pr - pr_naive).abs() < 1e-14);
    }

    #[test]
    fn exact_expressions_bounded_monotone_and_ordered() {
        for k in [5, 7, 11] {
            let mut prev = [f64::INFINITY; 3];
            for db in grid() {
                let p = at_db(db);
                let s = bler_scpnc_exact(&p, 15, k);
                let r = bler_rcpnc_exact(&p, 15, k);
                let c = bler_conv_exact(&p, 15);
                for (v, pv) in [s, r, c].iter().zip(prev.iter()) {
                    assert!((0.0..=1.0).contains(v));
                    assert!(v < pv, "not decreasing at {db} dB");
                }
                assert!(s <= r && r <= c, "ordering at {db} dB, k={k}");
                prev = [s, r, c];
            }
        }
        assert_eq!(bler_scpnc_exact(&ChannelParams::noiseless(), 15, 5), 0.0);
        assert_eq!(bler_rcpnc_exact(&ChannelParams::noiseless(), 15, 5), 0.0);
        assert_eq!(bler_conv_exact(&ChannelParams::noiseless(), 15), 0.0);
    }

    #[test]
    fn log_bler_matches_linear() {
        for scheme in SchemeKind::ALL {
            for db in grid() {
                let p = at_db(db);
                let pred = predict(scheme, &p, 15, 7);
                assert!(
                    (pred.ln_exact - pred.exact.ln()).abs() < 1e-10,
                    "{scheme} {db}"
                );
                assert!((pred.ln_asymptotic - pred.asymptotic.ln()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn asymptote_close_at_high_snr() {
        for k in [5, 7, 11] {
            for scheme in SchemeKind::ALL {
                for db in [12.0, 14.0, 20.0, 30.0] {
                    let pred = predict(scheme, &at_db(db), 15, k);
                    let ratio = (pred.ln_asymptotic - pred.ln_exact).exp();
                    assert!(
                        (0.9..=1.1).contains(&ratio),
                        "{scheme} k={k} {db} dB: {ratio}"
                    );
                }
            }
        }
        let r = bler_scpnc_exact(&at_db(12.0), 15, 5) / bler_scpnc_asym(&at_db(12.0), 15, 5);
        assert!((r - 1.0).abs() < 0.1);
    }

    #[test]
    fn asymptote_to_exact_limit() {
        // exact ~ (sqrt(2) up + down) Q(a) at high SNR
        let p = ChannelParams::new(1e3, 1.0).unwrap();
        for scheme in SchemeKind::ALL {
            let (up, down) = scheme.symbol_budget(15, 5);
            let limit = asymptotic_coefficient(scheme, 15, 5) / (SQRT_2 * up as f64 + down as f64);
            let pred = predict(scheme, &p, 15, 5);
            let ratio = (pred.ln_asymptotic - pred.ln_exact).exp();
            assert!(
                (ratio - limit).abs() < 1e-3 * limit,
                "{scheme}: {ratio} vs {limit}"
            );
        }
    }

    #[test]
    fn gains() {
        assert_eq!(gain_scpnc(15, 5), 1.5);
        assert!((gain_rcpnc(15, 5) - 75.0 / 65.0).abs() < 1e-15);
        assert_eq!(gain_scpnc(15, 11), 3.75);
        assert!((gain_rcpnc(15, 11) - 75.0 / 53.0).abs() < 1e-15);
    }

    #[test]
    fn gains_are_limits_of_exact_ratios() {
        let p = ChannelParams::new(1e3, 1.0).unwrap();
        let ratios = |k| {
            let conv = ln_bler_exact(SchemeKind::Conventional, &p, 15, k);
            let s = (conv - ln_bler_exact(SchemeKind::Scpnc, &p, 15, k)).exp();
            let r = (conv - ln_bler_exact(SchemeKind::Rcpnc, &p, 15, k)).exp();
            (s, r)
        };
        for k in [5, 7, 11] {
            let (s, _) = ratios(k);
            assert!((s / gain_scpnc(15, k) - 1.0).abs() < 0.01, "k={k}: {s}");
        }
        for k in [5, 7] {
            let (_, r) = ratios(k);
            assert!((r / gain_rcpnc(15, k) - 1.0).abs() < 0.01, "k={k}: {r}");
        }
        // The RCPNC gain formula assumes P_PNC ~ 1.5 Q; with the true sqrt(2) Q
        // limit the ratio is n (1 + sqrt 2) / (n sqrt 2 + m), 1.5% above
        // 75/53 for the (15,11) code.
        let (_, r) = ratios(11);
        let limit = 15.0 * (1.0 + SQRT_2) / (15.0 * SQRT_2 + 4.0);
        assert!((r / limit - 1.0).abs() < 1e-3, "{r} vs {limit}");
        assert!((r / gain_rcpnc(15, 11) - 1.0).abs() < 0.02);
    }

    #[test]
    #[should_panic(expected = "0 < k < n")]
    fn rejects_degenerate_code() {
        bler_scpnc_exact(&at_db(5.0), 15, 15);
    }
}
