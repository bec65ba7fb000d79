//! Runtime invariant checks behind the `selftest` subcommand.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytics::{bler_exact, ln_bler_exact};
use crate::block_code::{make_bch, supported_codes, LinearBlockCode};
use crate::gf2::{hamming_distance, BitBlock};
use crate::phy::{pnc_threshold, ChannelParams};
use crate::schemes::{run_trial, SchemeKind};
use crate::sources::CorrelationModel;

use super::config::{CodeSelector, OutputFormat, SweepConfig};
use super::emit::write_points;
use super::sweep::run_sweep;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, result: Result<String, String>) -> Check {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

fn code_invariants(code: &LinearBlockCode) -> Result<String, String> {
    let ht = code.parity_check().transpose().map_err(|e| e.to_string())?;
    if !code
        .generator()
        .mul(&ht)
        .map_err(|e| e.to_string())?
        .is_zero()
    {
        return Err("G * H^T != 0".into());
    }
    let d = code.minimum_distance() as usize;
    if d < 2 * code.t() + 1 {
        return Err(format!("d_min {d} < 2t+1"));
    }
    if code.coset_leaders().len() != 1 << code.m() {
        return Err("coset table incomplete".into());
    }
    let mut checked = 0;
    for v in 0..1u64 << code.n() {
        if v.count_ones() as usize > code.t() {
            continue;
        }
        let e = BitBlock::from_u64(v, code.n()).map_err(|e| e.to_string())?;
        let s = code.syndrome(&e).map_err(|e| e.to_string())?;
        if code.decode_error_pattern(&s).map_err(|e| e.to_string())? != e {
            return Err(format!("pattern {e} does not decode to itself"));
        }
        checked += 1;
    }
    Ok(format!("d_min={d}, {checked} patterns round-trip"))
}

fn correlation_bound(t: usize) -> Result<String, String> {
    let model = CorrelationModel::new(15, t).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(t as u64);
    for _ in 0..100_000 {
        let (a, b) = model.generate_pair(&mut rng);
        let d = hamming_distance(&a, &b).map_err(|e| e.to_string())?;
        if d as usize > t {
            return Err(format!("distance {d} > {t}"));
        }
    }
    Ok(format!(
        "100000 pairs, rho = {:.4}",
        model.correlation_factor()
    ))
}

fn noiseless_exchanges() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let params = ChannelParams::noiseless();
    for (n, k) in supported_codes() {
        let code = make_bch(n, k).map_err(|e| e.to_string())?;
        let model = CorrelationModel::new(n, code.t()).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let (c1, c2) = model.generate_pair(&mut rng);
            for kind in SchemeKind::ALL {
                let out = run_trial(kind, &code, &params, (&c1, &c2), &mut rng)
                    .map_err(|e| e.to_string())?;
                if !(out.ok_1to2 && out.ok_2to1) {
                    return Err(format!("{kind} ({n},{k}) failed without noise"));
                }
            }
        }
    }
    Ok("all schemes decode exactly".into())
}

fn threshold_consistency() -> Result<String, String> {
    for gamma in [0.01, 1.0, 10.0, 1000.0] {
        let p = ChannelParams::new(gamma, 1.0).map_err(|e| e.to_string())?;
        let normalized = (2.0 * gamma).sqrt()
            + std::f64::consts::SQRT_2 / (4.0 * gamma.sqrt())
                * (1.0 + (1.0 - (-8.0 * gamma).exp()).sqrt()).ln();
        let got = pnc_threshold(&p) / p.noise_sigma();
        if (got - normalized).abs() > 1e-9 * normalized {
            return Err(format!("gamma {gamma}: {got} vs {normalized}"));
        }
    }
    Ok("amplitude and noise-unit forms agree".into())
}

fn analytic_ordering() -> Result<String, String> {
    for (n, k) in supported_codes() {
        let mut prev = [f64::INFINITY; 3];
        for i in 0..=28 {
            let p = ChannelParams::from_snr_db(i as f64 * 0.5).map_err(|e| e.to_string())?;
            let v = SchemeKind::ALL.map(|s| bler_exact(s, &p, n, k));
            if !(v[0] <= v[1] && v[1] <= v[2]) {
                return Err(format!(
                    "ordering broken at ({n},{k}), {} dB",
                    i as f64 * 0.5
                ));
            }
            if v.iter()
                .zip(prev.iter())
                .any(|(a, b)| a >= b || !(0.0..=1.0).contains(a))
            {
                return Err(format!("not a decreasing probability at ({n},{k})"));
            }
            for (s, lin) in SchemeKind::ALL.iter().zip(v) {
                if (ln_bler_exact(*s, &p, n, k) - lin.ln()).abs() > 1e-9 {
                    return Err(format!("log form disagrees for {s}"));
                }
            }
            prev = v;
        }
    }
    Ok("SCPNC <= RCPNC <= conventional, decreasing in SNR".into())
}

fn determinism() -> Result<String, String> {
    let render = |workers| -> Result<Vec<u8>, String> {
        let config = SweepConfig {
            scheme: SchemeKind::Rcpnc,
            code: CodeSelector { n: 15, k: 7 },
            snr_db_grid: vec![2.0, 5.0],
            min_trials: 5_000,
            max_trials: 20_000,
            workers: Some(workers),
            ..SweepConfig::default()
        };
        let points = run_sweep(&config).map_err(|e| e.to_string())?;
        let mut out = Vec::new();
        write_points(
            &points,
            OutputFormat::Csv,
            &mut out,
            std::path::Path::new("<memory>"),
        )
        .map_err(|e| e.to_string())?;
        Ok(out)
    };
    if render(1)? != render(3)? {
        return Err("output depends on worker count".into());
    }
    Ok("1 and 3 workers give identical CSV".into())
}

pub fn run_all() -> Vec<Check> {
    let mut checks = Vec::new();
    for (n, k) in supported_codes() {
        let result = make_bch(n, k)
            .map_err(|e| e.to_string())
            .and_then(|code| code_invariants(&code));
        checks.push(check(format!("code ({n},{k})"), result));
    }
    for t in [1, 2, 3] {
        checks.push(check(format!("correlation t={t}"), correlation_bound(t)));
    }
    checks.push(check("noiseless exchanges", noiseless_exchanges()));
    checks.push(check("pnc threshold", threshold_consistency()));
    checks.push(check("analytic curves", analytic_ordering()));
    checks.push(check("determinism", determinism()));
    checks
}
