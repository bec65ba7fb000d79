//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code, clippy::excessive_precision)]

use spnc::block_code::LinearBlockCode;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h)
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    if err <= rel * value.abs() || value == 0.0 || depth == 0 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, rel, depth - 1) + adapt(f, mid, b, rel, depth - 1)
}

/// Adaptive Gauss-Kronrod integral of a non-negative integrand over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    adapt(&f, a, b, rel, 60)
}

/// Density of a normal with the given mean and variance `n0 / 2`.
pub fn density(t: f64, mean: f64, n0: f64) -> f64 {
    (-(t - mean) * (t - mean) / n0).exp() / (std::f64::consts::PI * n0).sqrt()
}

/// Gaussian tail by quadrature of the density from `x` outwards.
pub fn q_quadrature(x: f64) -> f64 {
    let phi = |u: f64| (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt();
    integrate(phi, x, x + 40.0, 1e-14)
}

pub fn threshold(gamma: f64, energy: f64) -> f64 {
    let n0 = energy / gamma;
    energy.sqrt()
        + n0.sqrt() / (4.0 * gamma.sqrt()) * (1.0 + (1.0 - (-8.0 * gamma).exp()).sqrt()).ln()
}

/// Per-symbol PNC error from the four-term integral, unit energy.
pub fn p_pnc_integral(gamma: f64) -> f64 {
    let n0 = 1.0 / gamma;
    let th = threshold(gamma, 1.0);
    let far = th + 60.0 * (n0 / 2.0).sqrt();
    let rel = 1e-13;
    let left = integrate(|t| density(t, 0.0, n0), -far, -th, rel);
    let right = integrate(|t| density(t, 0.0, n0), th, far, rel);
    let plus = integrate(|t| density(t + 2.0, 0.0, n0), -th, th, rel);
    let minus = integrate(|t| density(t - 2.0, 0.0, n0), -th, th, rel);
    0.5 * left + 0.5 * right + 0.25 * plus + 0.25 * minus
}

/// Relay error probabilities given the XOR bit, `(p0, p1)`, by quadrature.
pub fn pnc_conditional(gamma: f64) -> (f64, f64) {
    let n0 = 1.0 / gamma;
    let th = threshold(gamma, 1.0);
    let far = th + 60.0 * (n0 / 2.0).sqrt();
    // XOR 0: the sum sits at +-2 and is wrongly declared when |y| <= th.
    let p0 = integrate(|t| density(t, 2.0, n0), -th, th, 1e-13);
    // XOR 1: the sum sits at 0 and is wrongly declared when |y| > th.
    let p1 = 2.0 * integrate(|t| density(t, 0.0, n0), th, far, 1e-13);
    (p0, p1)
}

/// BPSK bit error with unit energy, by quadrature.
pub fn p_bpsk_integral(gamma: f64) -> f64 {
    let n0 = 1.0 / gamma;
    let sigma = (n0 / 2.0).sqrt();
    integrate(|t| density(t, 0.0, n0), 1.0, 1.0 + 60.0 * sigma, 1e-13)
}

/// SCPNC block error, T1 to T2, for difference patterns uniform on the
/// radius-t ball. A symbol survives when relay and downlink are both right
/// or both wrong; relay error depends on the syndrome XOR bit.
pub fn scpnc_bler_enumerated(code: &LinearBlockCode, gamma: f64) -> f64 {
    let (p0, p1) = pnc_conditional(gamma);
    let q = p_bpsk_integral(gamma);
    let keep = |p: f64| (1.0 - p) * (1.0 - q) + p * q;
    let (keep0, keep1) = (keep(p0), keep(p1));
    let n = code.n();
    let mut total = 0.0;
    let mut count = 0u64;
    for v in 0..1u64 << n {
        if v.count_ones() as usize > code.t() {
            continue;
        }
        let e = spnc::BitBlock::from_u64(v, n).unwrap();
        let s = code.syndrome(&e).unwrap();
        let ones = s.weight() as i32;
        let zeros = code.m() as i32 - ones;
        total += keep0.powi(zeros) * keep1.powi(ones);
        count += 1;
    }
    1.0 - total / count as f64
}

/// `1 - (1 - p)^up (1 - q)^down` with oracle symbol probabilities.
pub fn product_form(gamma: f64, up: usize, down: usize) -> f64 {
    let p = p_pnc_integral(gamma);
    let q = p_bpsk_integral(gamma);
    1.0 - (1.0 - p).powi(up as i32) * (1.0 - q).powi(down as i32)
}

pub fn db(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

/// Binomial standard error of a proportion.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Counts relay PNC symbol errors over `chunks * 64` uniformly random symbols.
pub fn pnc_symbol_errors(snr_db: f64, chunks: u64, seed: u64) -> u64 {
    use rand::{Rng, SeedableRng};
    use rayon::prelude::*;
    use spnc::phy::{bpsk_modulate, multiple_access, pnc_map};

    let params = spnc::ChannelParams::from_snr_db(snr_db).unwrap();
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let a = spnc::BitBlock::from_u64(rng.random(), 64).unwrap();
            let b = spnc::BitBlock::from_u64(rng.random(), 64).unwrap();
            let y = multiple_access(
                &bpsk_modulate(&a, 1.0),
                &bpsk_modulate(&b, 1.0),
                &params,
                &mut rng,
            )
            .unwrap();
            let decided = pnc_map(&y, &params).unwrap();
            decided.xor(&a.xor(&b).unwrap()).unwrap().weight() as u64
        })
        .sum()
}

/// Counts BPSK hard-decision errors over `chunks * 64` random bits.
pub fn bpsk_symbol_errors(snr_db: f64, chunks: u64, seed: u64) -> u64 {
    use rand::{Rng, SeedableRng};
    use rayon::prelude::*;
    use spnc::phy::{awgn, bpsk_demodulate, bpsk_modulate};

    let params = spnc::ChannelParams::from_snr_db(snr_db).unwrap();
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let a = spnc::BitBlock::from_u64(rng.random(), 64).unwrap();
            let y = awgn(&bpsk_modulate(&a, 1.0), &params, &mut rng);
            bpsk_demodulate(&y).unwrap().xor(&a).unwrap().weight() as u64
        })
        .sum()
}
