//! Monte-Carlo checks of the analytic bounds.
//!
//! Sensing: RS observations of a single target in complex white noise,
//! estimated with a zero-padded 2D periodogram. Channel: a multipath grid
//! sampled at the RS positions, estimated by least squares and separable
//! linear interpolation.
//!
//! Each trial draws from its own ChaCha stream `(seed, trial)`, so results do
//! not depend on thread scheduling.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::comm::ChannelProfile;
use crate::config::{RsPattern, SystemConfig};
use crate::error::{Error, Result};
use crate::sensing::{self, TargetState};

/// Minimum zero-padding factor of the periodogram on each axis.
pub const PAD_FACTOR: usize = 8;
pub const MIN_SENSING_TRIALS: usize = 50;
pub const MIN_CHANNEL_TRIALS: usize = 100;

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// CN(0, var) sample.
fn complex_normal<R: Rng>(rng: &mut R, var: f64) -> Complex64 {
    let s = (0.5 * var).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Noisy RS observations z[n, m], stored n-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingGrid {
    pub samples: Vec<Complex64>,
    pub pattern: RsPattern,
    pub target: TargetState,
    /// Per-sample noise variance 1/γ.
    pub noise_var: f64,
    pub seed: u64,
    pub stream: u64,
}

impl SensingGrid {
    pub fn rows(&self) -> usize {
        self.pattern.n_rs_freq
    }

    pub fn cols(&self) -> usize {
        self.pattern.m_rs_time
    }

    pub fn at(&self, n: usize, m: usize) -> Complex64 {
        self.samples[n * self.cols() + m]
    }
}

pub fn synth_sensing_grid(
    cfg: &SystemConfig,
    pattern: &RsPattern,
    target: &TargetState,
    snr: f64,
    seed: u64,
) -> Result<SensingGrid> {
    synth_sensing_stream(cfg, pattern, target, snr, seed, 0)
}

fn synth_sensing_stream(
    cfg: &SystemConfig,
    pattern: &RsPattern,
    target: &TargetState,
    snr: f64,
    seed: u64,
    stream: u64,
) -> Result<SensingGrid> {
    if !(snr > 0.0) {
        return Err(Error::InvalidArgument(format!("snr must be > 0, got {snr}")));
    }
    target.check_unambiguous(cfg, pattern)?;
    let noise_var = 1.0 / snr;
    let mut rng = trial_rng(seed, stream);
    let (rows, cols) = (pattern.n_rs_freq, pattern.m_rs_time);
    let mut samples = Vec::with_capacity(rows * cols);
    for n in 0..rows {
        for m in 0..cols {
            let clean = sensing::rs_symbol(cfg, pattern, target, n, m);
            let noise = if noise_var.is_finite() && noise_var > 0.0 {
                complex_normal(&mut rng, noise_var)
            } else {
                Complex64::new(0.0, 0.0)
            };
            samples.push(clean + noise);
        }
    }
    Ok(SensingGrid {
        samples,
        pattern: *pattern,
        target: *target,
        noise_var,
        seed,
        stream,
    })
}

/// Phase-rate pair (ω_R, ω_v): z[n, m] ∝ exp(−jω_R n + jω_v m).
fn periodogram_peak(grid: &SensingGrid) -> Result<(f64, f64)> {
    let (rows, cols) = (grid.rows(), grid.cols());
    if rows < 2 || cols < 2 {
        return Err(Error::Identifiability { n: rows, m: cols });
    }
    let kn = (rows * PAD_FACTOR).next_power_of_two();
    let km = (cols * PAD_FACTOR).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();

    // Forward transform along m (peaks at +ω_v), inverse along n (peaks at +ω_R).
    let mut spectrum = vec![Complex64::new(0.0, 0.0); kn * km];
    let fwd = planner.plan_fft_forward(km);
    for n in 0..rows {
        let row = &mut spectrum[n * km..(n + 1) * km];
        row[..cols].copy_from_slice(&grid.samples[n * cols..(n + 1) * cols]);
        fwd.process(row);
    }
    let inv = planner.plan_fft_inverse(kn);
    let mut column = vec![Complex64::new(0.0, 0.0); kn];
    let mut power = vec![0.0; kn * km];
    for k in 0..km {
        for n in 0..kn {
            column[n] = spectrum[n * km + k];
        }
        inv.process(&mut column);
        for n in 0..kn {
            power[n * km + k] = column[n].norm_sqr();
        }
    }
    let peak = power
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty");
    let (pn, pm) = (peak / km, peak % km);
    let refine = |prev: f64, at: f64, next: f64| {
        let den = prev - 2.0 * at + next;
        if den.abs() > 0.0 {
            (0.5 * (prev - next) / den).clamp(-0.5, 0.5)
        } else {
            0.0
        }
    };
    let dn = refine(
        power[((pn + kn - 1) % kn) * km + pm],
        power[peak],
        power[((pn + 1) % kn) * km + pm],
    );
    let dm = refine(
        power[pn * km + (pm + km - 1) % km],
        power[peak],
        power[pn * km + (pm + 1) % km],
    );
    let w_r = 2.0 * PI * (pn as f64 + dn) / kn as f64;
    let w_v = 2.0 * PI * (pm as f64 + dm) / km as f64;
    Ok(newton_polish(grid, w_r, w_v))
}

/// Newton ascent on the continuous periodogram |S(ω_R, ω_v)|² with
/// S = Σ z[n, m] exp(jω_R n − jω_v m).
fn newton_polish(grid: &SensingGrid, w_r: f64, w_v: f64) -> (f64, f64) {
    let (rows, cols) = (grid.rows(), grid.cols());
    let eval = |wr: f64, wv: f64| {
        // S and its first and second partial derivatives.
        let mut s = [Complex64::new(0.0, 0.0); 6];
        for n in 0..rows {
            for m in 0..cols {
                let (nf, mf) = (n as f64, m as f64);
                let e = grid.samples[n * cols + m] * Complex64::from_polar(1.0, wr * nf - wv * mf);
                let j = Complex64::i();
                s[0] += e;
                s[1] += j * nf * e;
                s[2] += -j * mf * e;
                s[3] += -nf * nf * e;
                s[4] += -mf * mf * e;
                s[5] += nf * mf * e;
            }
        }
        let p = s[0].norm_sqr();
        let g = [2.0 * (s[0].conj() * s[1]).re, 2.0 * (s[0].conj() * s[2]).re];
        let h = [
            [
                2.0 * (s[1].norm_sqr() + (s[0].conj() * s[3]).re),
                2.0 * ((s[1].conj() * s[2]).re + (s[0].conj() * s[5]).re),
            ],
            [
                2.0 * ((s[1].conj() * s[2]).re + (s[0].conj() * s[5]).re),
                2.0 * (s[2].norm_sqr() + (s[0].conj() * s[4]).re),
            ],
        ];
        (p, g, h)
    };
    let (mut wr, mut wv) = (w_r, w_v);
    let (mut p, mut g, mut h) = eval(wr, wv);
    for _ in 0..20 {
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        // Only take Newton steps where the surface is locally concave.
        if !(h[0][0] < 0.0 && det > 0.0) {
            break;
        }
        let step_r = -(h[1][1] * g[0] - h[0][1] * g[1]) / det;
        let step_v = -(h[0][0] * g[1] - h[1][0] * g[0]) / det;
        let (nr, nv) = (wr + step_r, wv + step_v);
        let (np, ng, nh) = eval(nr, nv);
        if np < p {
            break;
        }
        let done = step_r.abs().max(step_v.abs()) < 1e-13;
        (wr, wv, p, g, h) = (nr, nv, np, ng, nh);
        if done {
            break;
        }
    }
    (wr, wv)
}

/// Periodogram range/velocity estimate.
pub fn estimate_range_velocity(grid: &SensingGrid, cfg: &SystemConfig) -> Result<TargetState> {
    let (w_r, w_v) = periodogram_peak(grid)?;
    let w_r = w_r.rem_euclid(2.0 * PI);
    let mut w_v = w_v.rem_euclid(2.0 * PI);
    if w_v > PI {
        w_v -= 2.0 * PI;
    }
    let c = cfg.light_speed();
    let pc = grid.pattern.pc as f64;
    let ps = grid.pattern.ps as f64;
    Ok(TargetState {
        range_m: w_r * c / (2.0 * PI * pc * cfg.subcarrier_spacing_hz * 2.0),
        velocity_mps: w_v * c / (2.0 * PI * ps * cfg.symbol_duration_s * 2.0 * cfg.carrier_freq_hz),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trials: usize,
    pub mean_range_m: f64,
    pub mean_velocity_mps: f64,
    pub rmse_range_m: f64,
    pub rmse_velocity_mps: f64,
    /// √CRB from the closed forms.
    pub crb_rmse_range_m: f64,
    pub crb_rmse_velocity_mps: f64,
    /// Empirical RMSE over closed-form √CRB.
    pub ratio_range: f64,
    pub ratio_velocity: f64,
    /// √CRB from the inverted Fisher matrix.
    pub fim_crb_rmse_range_m: f64,
    pub fim_crb_rmse_velocity_mps: f64,
    pub fim_ratio_range: f64,
    pub fim_ratio_velocity: f64,
}

pub fn run_sensing_mc(
    cfg: &SystemConfig,
    pattern: &RsPattern,
    target: &TargetState,
    snr: f64,
    trials: usize,
    seed: u64,
) -> Result<TrialReport> {
    if trials < MIN_SENSING_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SENSING_TRIALS} sensing trials, got {trials}"
        )));
    }
    let cfg = cfg.clone().with_snr(snr);
    let estimates: Vec<TargetState> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let grid = synth_sensing_stream(&cfg, pattern, target, snr, seed, t)?;
            estimate_range_velocity(&grid, &cfg)
        })
        .collect::<Result<_>>()?;
    let count = trials as f64;
    let mean_r = estimates.iter().map(|e| e.range_m).sum::<f64>() / count;
    let mean_v = estimates.iter().map(|e| e.velocity_mps).sum::<f64>() / count;
    let rmse_r = (estimates.iter().map(|e| (e.range_m - target.range_m).powi(2)).sum::<f64>() / count).sqrt();
    let rmse_v = (estimates
        .iter()
        .map(|e| (e.velocity_mps - target.velocity_mps).powi(2))
        .sum::<f64>()
        / count)
        .sqrt();
    let closed = sensing::crb_closed_report(&cfg, pattern.pc as f64, pattern.ps as f64)?;
    let fim = sensing::crb_from_fim(&sensing::fim_assemble(&cfg, pattern)?, cfg.weight_eta)?;
    Ok(TrialReport {
        trials,
        mean_range_m: mean_r,
        mean_velocity_mps: mean_v,
        rmse_range_m: rmse_r,
        rmse_velocity_mps: rmse_v,
        crb_rmse_range_m: closed.crb_r.sqrt(),
        crb_rmse_velocity_mps: closed.crb_v.sqrt(),
        ratio_range: rmse_r / closed.crb_r.sqrt(),
        ratio_velocity: rmse_v / closed.crb_v.sqrt(),
        fim_crb_rmse_range_m: fim.crb_r.sqrt(),
        fim_crb_rmse_velocity_mps: fim.crb_v.sqrt(),
        fim_ratio_range: rmse_r / fim.crb_r.sqrt(),
        fim_ratio_velocity: rmse_v / fim.crb_v.sqrt(),
    })
}

/// One multipath channel draw over the full grid, with its RS samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// H[r, u], subcarrier-major, N_c × N_t.
    pub h_grid: Vec<Complex64>,
    /// LS observations at RS positions, N × M, subcarrier-major.
    pub rs_observations: Vec<Complex64>,
    pub num_subcarriers: usize,
    pub num_symbols: usize,
    pub pattern: RsPattern,
    pub seed: u64,
    pub stream: u64,
}

impl ChannelRealization {
    pub fn h(&self, r: usize, u: usize) -> Complex64 {
        self.h_grid[r * self.num_symbols + u]
    }
}

/// Draws path gains CN(0, σ_l²) and per-path Doppler phase rates uniform on
/// [−a_m, a_m], builds H[r, u] = Σ_l h_l e^{jω_l u} e^{−j2π r Δf τ_l}, and
/// samples it at the RS positions with noise variance σ²·D.
pub fn synth_channel(cfg: &SystemConfig, profile: &ChannelProfile, pattern: &RsPattern, seed: u64) -> Result<ChannelRealization> {
    synth_channel_stream(cfg, profile, pattern, seed, 0)
}

fn synth_channel_stream(
    cfg: &SystemConfig,
    profile: &ChannelProfile,
    pattern: &RsPattern,
    seed: u64,
    stream: u64,
) -> Result<ChannelRealization> {
    profile.validate(cfg)?;
    let mut rng = trial_rng(seed, stream);
    let (nc, nt) = (cfg.num_subcarriers, cfg.num_symbols);
    let gains: Vec<Complex64> = profile.path_gains.iter().map(|&v| complex_normal(&mut rng, v)).collect();
    let doppler: Vec<f64> = (0..profile.num_paths())
        .map(|_| rng.random_range(-profile.doppler_spread_norm..=profile.doppler_spread_norm))
        .collect();

    // H = F·T with F[r, l] = e^{−j2πrΔfτ_l} and T[l, u] = h_l e^{jω_l u}.
    let paths = profile.num_paths();
    let time: Vec<Complex64> = (0..paths)
        .flat_map(|l| (0..nt).map(move |u| (l, u)))
        .map(|(l, u)| gains[l] * Complex64::from_polar(1.0, doppler[l] * u as f64))
        .collect();
    let mut h_grid = vec![Complex64::new(0.0, 0.0); nc * nt];
    for (r, row) in h_grid.chunks_mut(nt).enumerate() {
        for (l, &tau) in profile.path_delays_s.iter().enumerate() {
            let f = Complex64::from_polar(1.0, -2.0 * PI * r as f64 * cfg.subcarrier_spacing_hz * tau);
            for (h, t) in row.iter_mut().zip(&time[l * nt..(l + 1) * nt]) {
                *h += f * t;
            }
        }
    }

    let rs_noise = profile.noise_var * pattern.density();
    let mut rs_observations = Vec::with_capacity(pattern.rs_count());
    for r in pattern.freq_positions() {
        for u in pattern.time_positions() {
            let noise = if rs_noise > 0.0 {
                complex_normal(&mut rng, rs_noise)
            } else {
                Complex64::new(0.0, 0.0)
            };
            rs_observations.push(h_grid[r * nt + u] + noise);
        }
    }
    Ok(ChannelRealization {
        h_grid,
        rs_observations,
        num_subcarriers: nc,
        num_symbols: nt,
        pattern: *pattern,
        seed,
        stream,
    })
}

/// For each output index, the left RS index and the weight on the right one.
/// Indices past the last RS repeat it.
fn linear_weights(len: usize, interval: usize, count: usize) -> Vec<(usize, f64)> {
    (0..len)
        .map(|p| {
            let k = p / interval;
            if k + 1 >= count {
                (count - 1, 0.0)
            } else {
                (k, (p - k * interval) as f64 / interval as f64)
            }
        })
        .collect()
}

/// LS estimate at the RS positions followed by separable linear
/// interpolation; the RS symbols have unit amplitude so LS is the sample.
pub fn estimate_channel(real: &ChannelRealization, pattern: &RsPattern) -> Result<Vec<Complex64>> {
    let (n, m) = (pattern.n_rs_freq, pattern.m_rs_time);
    if real.rs_observations.len() != n * m {
        return Err(Error::InvalidArgument(format!(
            "expected {} RS observations, got {}",
            n * m,
            real.rs_observations.len()
        )));
    }
    let (nc, nt) = (real.num_subcarriers, real.num_symbols);
    let along_u = linear_weights(nt, pattern.ps, m);
    let along_r = linear_weights(nc, pattern.pc, n);

    let mut rows = vec![Complex64::new(0.0, 0.0); n * nt];
    for k in 0..n {
        let obs = &real.rs_observations[k * m..(k + 1) * m];
        for (u, &(j, t)) in along_u.iter().enumerate() {
            let right = if t > 0.0 { obs[j + 1] } else { obs[j] };
            rows[k * nt + u] = obs[j] * (1.0 - t) + right * t;
        }
    }
    let mut est = vec![Complex64::new(0.0, 0.0); nc * nt];
    for (r, &(k, t)) in along_r.iter().enumerate() {
        let out = &mut est[r * nt..(r + 1) * nt];
        let lo = &rows[k * nt..(k + 1) * nt];
        if t > 0.0 {
            let hi = &rows[(k + 1) * nt..(k + 2) * nt];
            for ((o, a), b) in out.iter_mut().zip(lo).zip(hi) {
                *o = a * (1.0 - t) + b * t;
            }
        } else {
            out.copy_from_slice(lo);
        }
    }
    Ok(est)
}

/// Mean |Ĥ − H|² over the grid and over trials.
pub fn run_channel_mc(
    cfg: &SystemConfig,
    profile: &ChannelProfile,
    pattern: &RsPattern,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials < MIN_CHANNEL_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_CHANNEL_TRIALS} channel trials, got {trials}"
        )));
    }
    let per_trial: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let real = synth_channel_stream(cfg, profile, pattern, seed, t)?;
            let est = estimate_channel(&real, pattern)?;
            let sum: f64 = est.iter().zip(&real.h_grid).map(|(a, b)| (a - b).norm_sqr()).sum();
            Ok(sum / est.len() as f64)
        })
        .collect::<Result<_>>()?;
    Ok(per_trial.iter().sum::<f64>() / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::make_pattern;

    fn cfg() -> SystemConfig {
        SystemConfig::reference()
    }

    #[test]
    fn noiseless_grid_has_constant_modulus() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 8, 8).unwrap();
        let g = synth_sensing_grid(&cfg, &pat, &TargetState::new(60.0, 15.0), f64::INFINITY, 1).unwrap();
        assert!(g.samples.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn static_target_has_flat_phase() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 8, 8).unwrap();
        let g = synth_sensing_grid(&cfg, &pat, &TargetState::new(0.0, 0.0), f64::INFINITY, 1).unwrap();
        assert!(g.samples.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn range_phase_slope_matches_model() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 6, 4).unwrap();
        let r = 37.0;
        let g = synth_sensing_grid(&cfg, &pat, &TargetState::new(r, 0.0), f64::INFINITY, 1).unwrap();
        let want = -2.0 * PI * 6.0 * cfg.subcarrier_spacing_hz * 2.0 * r / cfg.light_speed();
        // unwrap along n and fit a line through the origin
        let mut phase = 0.0;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for n in 1..g.rows() {
            phase += (g.at(n, 0) * g.at(n - 1, 0).conj()).arg();
            sxy += n as f64 * phase;
            sxx += (n * n) as f64;
        }
        assert!((sxy / sxx - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn ambiguous_target_is_rejected() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 8, 8).unwrap();
        assert!(matches!(
            synth_sensing_grid(&cfg, &pat, &TargetState::new(200.0, 0.0), 100.0, 1),
            Err(Error::Ambiguity(_))
        ));
    }

    #[test]
    fn on_bin_target_is_recovered_exactly() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 8, 8).unwrap();
        // Bin 100 of 1024 in range, bin 40 of 512 in Doppler.
        let r = 100.0 / 1024.0 * cfg.light_speed() / (8.0 * cfg.subcarrier_spacing_hz * 2.0);
        let v = 40.0 / 512.0 * cfg.light_speed() / (8.0 * cfg.symbol_duration_s * 2.0 * cfg.carrier_freq_hz);
        let g = synth_sensing_grid(&cfg, &pat, &TargetState::new(r, v), f64::INFINITY, 0).unwrap();
        let est = estimate_range_velocity(&g, &cfg).unwrap();
        assert!((est.range_m - r).abs() <= 1e-6 * r);
        assert!((est.velocity_mps - v).abs() <= 1e-6 * v);
    }

    #[test]
    fn off_bin_target_is_refined_below_an_eighth_bin() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 8, 8).unwrap();
        let bin_r = cfg.light_speed() / (8.0 * cfg.subcarrier_spacing_hz * 2.0) / pat.n_rs_freq as f64;
        let bin_v = cfg.light_speed() / (8.0 * cfg.symbol_duration_s * 2.0 * cfg.carrier_freq_hz) / pat.m_rs_time as f64;
        let target = TargetState::new(60.123, -15.377);
        let g = synth_sensing_grid(&cfg, &pat, &target, f64::INFINITY, 0).unwrap();
        let est = estimate_range_velocity(&g, &cfg).unwrap();
        assert!((est.range_m - target.range_m).abs() < bin_r / 8.0);
        assert!((est.velocity_mps - target.velocity_mps).abs() < bin_v / 8.0);
        assert!((est.range_m - target.range_m).abs() < 1e-9);
    }

    #[test]
    fn zero_velocity_peaks_at_dc() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 4, 4).unwrap();
        let g = synth_sensing_grid(&cfg, &pat, &TargetState::new(80.0, 0.0), f64::INFINITY, 0).unwrap();
        assert!(estimate_range_velocity(&g, &cfg).unwrap().velocity_mps.abs() < 1e-9);
    }

    #[test]
    fn sensing_mc_is_seed_deterministic() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 8, 8).unwrap();
        let t = TargetState::new(60.0, 15.0);
        let a = run_sensing_mc(&cfg, &pat, &t, 100.0, 50, 7).unwrap();
        let b = run_sensing_mc(&cfg, &pat, &t, 100.0, 50, 7).unwrap();
        let c = run_sensing_mc(&cfg, &pat, &t, 100.0, 50, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(run_sensing_mc(&cfg, &pat, &t, 100.0, 49, 7).is_err());
    }

    /// √CRB for CN(0, 1/γ) noise with the complex amplitude unknown: the
    /// phase nuisance centres the index sums and decouples R from v.
    fn efficient_rmse(cfg: &SystemConfig, pat: &RsPattern, snr: f64) -> (f64, f64) {
        let c = cfg.light_speed();
        let k_r = 2.0 * PI * pat.pc as f64 * cfg.subcarrier_spacing_hz * 2.0 / c;
        let k_v = 2.0 * PI * pat.ps as f64 * cfg.symbol_duration_s * 2.0 * cfg.carrier_freq_hz / c;
        let centred = |count: usize| {
            let mean = (count as f64 - 1.0) / 2.0;
            (0..count).map(|i| (i as f64 - mean).powi(2)).sum::<f64>()
        };
        let (n, m) = (pat.n_rs_freq, pat.m_rs_time);
        let a2 = cfg.sensing_gain.powi(2);
        let info_r = 2.0 * snr * a2 * k_r * k_r * m as f64 * centred(n);
        let info_v = 2.0 * snr * a2 * k_v * k_v * n as f64 * centred(m);
        (info_r.recip().sqrt(), info_v.recip().sqrt())
    }

    #[test]
    fn periodogram_is_efficient_against_complex_gaussian_bound() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 8, 8).unwrap();
        let rep = run_sensing_mc(&cfg, &pat, &TargetState::new(60.0, 15.0), 100.0, 200, 11).unwrap();
        let (bound_r, bound_v) = efficient_rmse(&cfg, &pat, 100.0);
        for efficiency in [rep.rmse_range_m / bound_r, rep.rmse_velocity_mps / bound_v] {
            assert!((0.85..=1.2).contains(&efficiency), "{efficiency} {rep:?}");
        }
        assert!((rep.mean_range_m - 60.0).abs() <= 0.1 * rep.rmse_range_m * 2.0);
        assert!((rep.mean_velocity_mps - 15.0).abs() <= 0.1 * rep.rmse_velocity_mps * 2.0);
    }

    #[test]
    fn efficient_bound_is_seven_sixteenths_of_assembled_bound() {
        // The assembled matrix keeps the phase known, which couples R and v
        // with correlation 3/4 for large grids.
        let cfg = cfg();
        let pat = make_pattern(&cfg, 8, 8).unwrap();
        let fim = sensing::crb_from_fim(&sensing::fim_assemble(&cfg, &pat).unwrap(), 0.5).unwrap();
        let (r, v) = efficient_rmse(&cfg, &pat, cfg.sensing_snr);
        assert!((r * r / fim.crb_r - 7.0 / 16.0).abs() < 0.02);
        assert!((v * v / fim.crb_v - 7.0 / 16.0).abs() < 0.02);
    }

    #[test]
    fn quadrupling_snr_halves_rmse() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 8, 8).unwrap();
        let t = TargetState::new(60.0, 15.0);
        let lo = run_sensing_mc(&cfg, &pat, &t, 100.0, 200, 3).unwrap();
        let hi = run_sensing_mc(&cfg, &pat, &t, 400.0, 200, 3).unwrap();
        for (a, b) in [(lo.rmse_range_m, hi.rmse_range_m), (lo.rmse_velocity_mps, hi.rmse_velocity_mps)] {
            let r = a / b;
            assert!((1.6..=2.4).contains(&r), "ratio {r}");
        }
    }

    #[test]
    fn static_flat_channel_is_constant_in_frequency() {
        let cfg = cfg();
        let mut p = ChannelProfile::brick_wall(&cfg, 1e-9, 1e-12, 0.0, 1).unwrap();
        p.path_delays_s = vec![0.0];
        let pat = make_pattern(&cfg, 4, 4).unwrap();
        let real = synth_channel(&cfg, &p, &pat, 5).unwrap();
        let h0 = real.h(0, 0);
        assert!((0..cfg.num_subcarriers).all(|r| (real.h(r, 0) - h0).norm() < 1e-12));
        assert!(run_channel_mc(&cfg, &p, &pat, 100, 5).unwrap() <= 1e-20);
    }

    #[test]
    fn channel_power_is_normalized() {
        let cfg = SystemConfig {
            num_subcarriers: 16,
            num_symbols: 16,
            ..cfg()
        };
        let p = ChannelProfile::default_for(&cfg);
        let pat = make_pattern(&cfg, 2, 2).unwrap();
        let mean: f64 = (0..1000)
            .map(|t| synth_channel_stream(&cfg, &p, &pat, 9, t).unwrap().h(3, 5).norm_sqr())
            .sum::<f64>()
            / 1000.0;
        assert!((mean - 1.0).abs() < 0.1, "{mean}");
    }

    #[test]
    fn channel_seeds_differ() {
        let cfg = cfg();
        let p = ChannelProfile::default_for(&cfg);
        let pat = make_pattern(&cfg, 4, 4).unwrap();
        let a = synth_channel(&cfg, &p, &pat, 1).unwrap();
        let b = synth_channel(&cfg, &p, &pat, 2).unwrap();
        assert_ne!(a.h_grid, b.h_grid);
        assert_eq!(a, synth_channel(&cfg, &p, &pat, 1).unwrap());
    }

    fn handmade(cfg: &SystemConfig, pat: &RsPattern, f: impl Fn(usize, usize) -> Complex64) -> ChannelRealization {
        let (nc, nt) = (cfg.num_subcarriers, cfg.num_symbols);
        let h_grid: Vec<_> = (0..nc * nt).map(|i| f(i / nt, i % nt)).collect();
        let rs_observations = pat
            .freq_positions()
            .flat_map(|r| pat.time_positions().map(move |u| (r, u)))
            .map(|(r, u)| f(r, u))
            .collect();
        ChannelRealization {
            h_grid,
            rs_observations,
            num_subcarriers: nc,
            num_symbols: nt,
            pattern: *pat,
            seed: 0,
            stream: 0,
        }
    }

    #[test]
    fn interpolation_is_exact_for_constants() {
        let cfg = cfg();
        let pat = make_pattern(&cfg, 5, 3).unwrap();
        let real = handmade(&cfg, &pat, |_, _| Complex64::new(0.3, -0.7));
        let est = estimate_channel(&real, &pat).unwrap();
        assert!(est.iter().zip(&real.h_grid).all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn interpolation_is_exact_for_affine_frequency_response() {
        // Grid sized so the last subcarrier carries RS: no edge extension.
        let cfg = SystemConfig {
            num_subcarriers: 793,
            num_symbols: 449,
            ..cfg()
        };
        let pat = make_pattern(&cfg, 6, 4).unwrap();
        let real = handmade(&cfg, &pat, |r, u| Complex64::new(0.01 * r as f64 + 0.002 * u as f64, -0.03 * r as f64));
        let est = estimate_channel(&real, &pat).unwrap();
        assert!(est.iter().zip(&real.h_grid).all(|(a, b)| (a - b).norm() < 1e-9));
    }

    #[test]
    fn channel_mse_grows_with_frequency_interval() {
        let cfg = cfg();
        let p = ChannelProfile::default_for(&cfg);
        let mse: Vec<f64> = [2usize, 4, 8]
            .iter()
            .map(|&pc| run_channel_mc(&cfg, &p, &make_pattern(&cfg, pc, 2).unwrap(), 100, 4).unwrap())
            .collect();
        assert!(mse.windows(2).all(|w| w[1] > w[0]), "{mse:?}");
        assert!(run_channel_mc(&cfg, &p, &make_pattern(&cfg, 2, 2).unwrap(), 99, 4).is_err());
    }
}
