//! Channel-estimation MSE and communication rate as functions of the RS
//! intervals.
//!
//! The channel power spectrum is separable and brick-wall shaped: uniform on
//! [−a_n, a_n] along the subcarrier (delay) axis and on [−a_m, a_m] along the
//! symbol (Doppler) axis, normalized so (1/2π)∫S = 1 per axis. Moments are
//! keyed to axes: `w_n_*` belong to the subcarrier axis and `w_m_*` to the
//! symbol axis.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::{ReCounting, RsPattern, SystemConfig};
use crate::error::{Error, Result};
use crate::quad;

/// Absolute tolerance for every spectral quadrature.
pub const QUAD_TOL: f64 = 1e-10;

/// Statistical description of the communication channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelProfile {
    /// Average path powers σ_l², summing to one.
    pub path_gains: Vec<f64>,
    pub path_delays_s: Vec<f64>,
    /// Half-width a_m of the Doppler-axis spectrum, radians per symbol.
    pub doppler_spread_norm: f64,
    /// Half-width a_n of the delay-axis spectrum, radians per subcarrier.
    pub delay_spread_norm: f64,
    /// Data-plane noise variance σ².
    pub noise_var: f64,
    /// Frequency-domain estimator variance σ_Ĥ².
    pub estimator_var: f64,
}

impl ChannelProfile {
    pub const DEFAULT_DELAY_SPREAD: f64 = 0.1 * PI;
    pub const DEFAULT_DOPPLER_SPREAD: f64 = 0.05 * PI;
    pub const DEFAULT_NOISE_VAR: f64 = 0.01;
    pub const DEFAULT_PATHS: usize = 16;

    /// Equal-power paths with delays on the midpoints of [0, a_n/(2πΔf)].
    ///
    /// A path at delay τ sits at normalized frequency 2πΔfτ on the subcarrier
    /// axis, so these paths reproduce the even moments of the brick-wall
    /// spectrum on [−a_n, a_n] as L grows.
    pub fn brick_wall(
        cfg: &SystemConfig,
        delay_spread: f64,
        doppler_spread: f64,
        noise_var: f64,
        num_paths: usize,
    ) -> Result<Self> {
        if num_paths == 0 {
            return Err(Error::validation("num_paths", "must be >= 1"));
        }
        let max_delay = delay_spread / (2.0 * PI * cfg.subcarrier_spacing_hz);
        let profile = ChannelProfile {
            path_gains: vec![1.0 / num_paths as f64; num_paths],
            path_delays_s: (0..num_paths)
                .map(|l| (l as f64 + 0.5) / num_paths as f64 * max_delay)
                .collect(),
            doppler_spread_norm: doppler_spread,
            delay_spread_norm: delay_spread,
            noise_var,
            estimator_var: 1.0,
        };
        profile.validate(cfg)?;
        Ok(profile)
    }

    /// a_n = 0.1π, a_m = 0.05π, σ² = 0.01, σ_Ĥ² = 1, 16 paths.
    pub fn default_for(cfg: &SystemConfig) -> Self {
        Self::brick_wall(
            cfg,
            Self::DEFAULT_DELAY_SPREAD,
            Self::DEFAULT_DOPPLER_SPREAD,
            Self::DEFAULT_NOISE_VAR,
            Self::DEFAULT_PATHS,
        )
        .expect("default profile is valid")
    }

    pub fn num_paths(&self) -> usize {
        self.path_gains.len()
    }

    pub fn with_noise_var(mut self, noise_var: f64) -> Self {
        self.noise_var = noise_var;
        self
    }

    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        if self.path_gains.is_empty() || self.path_gains.len() != self.path_delays_s.len() {
            return Err(Error::validation(
                "path_gains",
                format!(
                    "need one gain per delay and at least one path ({} gains, {} delays)",
                    self.path_gains.len(),
                    self.path_delays_s.len()
                ),
            ));
        }
        if self.path_gains.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::validation("path_gains", "gains must be finite and >= 0"));
        }
        let total: f64 = self.path_gains.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::validation("path_gains", format!("must sum to 1, got {total}")));
        }
        let symbol_span = 1.0 / cfg.subcarrier_spacing_hz;
        if let Some(d) = self
            .path_delays_s
            .iter()
            .find(|d| !(d.is_finite() && **d >= 0.0 && **d < symbol_span))
        {
            return Err(Error::validation(
                "path_delays_s",
                format!("delay {d} s outside [0, 1/Δf = {symbol_span} s)"),
            ));
        }
        for (field, a) in [
            ("delay_spread_norm", self.delay_spread_norm),
            ("doppler_spread_norm", self.doppler_spread_norm),
        ] {
            if !(a > 0.0 && a <= PI) {
                return Err(Error::validation(field, format!("support must lie in (0, π], got {a}")));
            }
        }
        if !(self.noise_var.is_finite() && self.noise_var >= 0.0) {
            return Err(Error::validation("noise_var", format!("must be >= 0, got {}", self.noise_var)));
        }
        if !(self.estimator_var.is_finite() && self.estimator_var >= 0.0) {
            return Err(Error::validation(
                "estimator_var",
                format!("must be >= 0, got {}", self.estimator_var),
            ));
        }
        Ok(())
    }
}

/// Uniform spectrum on [−a, a] with (1/2π)∫S = 1.
#[derive(Debug, Clone, Copy)]
pub struct BrickWall {
    pub half_width: f64,
}

impl BrickWall {
    pub fn density(&self, w: f64) -> f64 {
        if w.abs() <= self.half_width {
            PI / self.half_width
        } else {
            0.0
        }
    }

    /// (1/2π)∫ w^z S(w) dw over [−π, π], split at the support edges.
    pub fn moment(&self, z: i32) -> Result<f64> {
        let a = self.half_width;
        let f = |w: f64| w.powi(z) * self.density(w) / (2.0 * PI);
        let mut total = quad::integrate(f, -a, a, QUAD_TOL / 3.0)?;
        if a < PI {
            total += quad::integrate(f, -PI, -a, QUAD_TOL / 3.0)?;
            total += quad::integrate(f, a, PI, QUAD_TOL / 3.0)?;
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMoments {
    pub w_n_2: f64,
    pub w_n_4: f64,
    pub w_m_2: f64,
    pub w_m_4: f64,
}

pub fn spectrum_moments(profile: &ChannelProfile) -> Result<SpectrumMoments> {
    let delay = BrickWall {
        half_width: profile.delay_spread_norm,
    };
    let doppler = BrickWall {
        half_width: profile.doppler_spread_norm,
    };
    Ok(SpectrumMoments {
        w_n_2: delay.moment(2)?,
        w_n_4: delay.moment(4)?,
        w_m_2: doppler.moment(2)?,
        w_m_4: doppler.moment(4)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MseMethod {
    NumericIntegral,
    Taylor,
}

/// Per-element channel-estimation MSE split into interpolation and noise parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MseEstimate {
    pub value: f64,
    pub interpolation: f64,
    pub noise: f64,
    pub method: MseMethod,
}

fn sinc_pi(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Ideal 2D brick-wall interpolator tap at offset (n, m).
pub fn ideal_interp_coeff(n: i64, m: i64, pc: usize, ps: usize) -> f64 {
    sinc_pi(n as f64 / pc as f64) * sinc_pi(m as f64 / ps as f64)
}

/// sin(P w/2)/sin(w/2), with the limit P at w = 0.
fn dirichlet(w: f64, p: f64) -> f64 {
    if w.abs() < 1e-5 {
        p * (1.0 - (p * p - 1.0) * w * w / 24.0)
    } else {
        (p * w / 2.0).sin() / (w / 2.0).sin()
    }
}

/// One axis of the linear interpolator, D_P(w)²/P (Fejér kernel).
fn fejer(w: f64, p: f64) -> f64 {
    let d = dirichlet(w, p);
    d * d / p
}

/// Frequency response of separable linear interpolation.
pub fn linear_interp_response(w_n: f64, w_m: f64, pc: usize, ps: usize) -> f64 {
    fejer(w_n, pc as f64) * fejer(w_m, ps as f64)
}

/// W − P_sP_c inside |w_n| ≤ π/P_c, |w_m| ≤ π/P_s.
pub fn error_filter_response(w_n: f64, w_m: f64, pc: usize, ps: usize) -> Result<f64> {
    let (pcf, psf) = (pc as f64, ps as f64);
    let slack = 1e-12;
    if w_n.abs() > PI / pcf + slack || w_m.abs() > PI / psf + slack {
        return Err(Error::ValidityRegion(format!(
            "(w_n, w_m) = ({w_n}, {w_m}) outside |w_n| <= π/{pc}, |w_m| <= π/{ps}"
        )));
    }
    Ok(linear_interp_response(w_n, w_m, pc, ps) - pcf * psf)
}

/// MSE by integrating the interpolation-error and noise spectra.
pub fn mse_numeric(profile: &ChannelProfile, pc: usize, ps: usize) -> Result<MseEstimate> {
    if pc == 0 || ps == 0 {
        return Err(Error::InvalidArgument("intervals must be >= 1".into()));
    }
    let (pcf, psf) = (pc as f64, ps as f64);
    let (a_n, a_m) = (profile.delay_spread_norm, profile.doppler_spread_norm);
    if a_n > PI / pcf || a_m > PI / psf {
        return Err(Error::ValidityRegion(format!(
            "spectral support (a_n, a_m) = ({a_n}, {a_m}) exceeds (π/{pc}, π/{ps})"
        )));
    }
    let density = PI / a_n * PI / a_m;
    let prefactor = density / (pcf * psf).powi(2) / (4.0 * PI * PI);
    // The integrand is even in both arguments.
    let quarter = quad::integrate_2d_or_grid(
        |wn, wm| {
            let e = linear_interp_response(wn, wm, pc, ps) - pcf * psf;
            e * e
        },
        (0.0, a_n),
        (0.0, a_m),
        QUAD_TOL / (8.0 * prefactor),
    )?;
    let interpolation = 4.0 * prefactor * quarter;

    let d = 1.0 / (pcf * psf);
    let noise_scale = profile.noise_var * d / (4.0 * PI * PI);
    let noise = if noise_scale == 0.0 {
        0.0
    } else {
        // ∬W² separates into a product of one-dimensional integrals.
        let tol_axis = QUAD_TOL / (4.0 * noise_scale * 8.0 * PI * psf.max(pcf));
        let along_n = quad::integrate(|w| fejer(w, pcf).powi(2), -PI, PI, tol_axis)?;
        let along_m = quad::integrate(|w| fejer(w, psf).powi(2), -PI, PI, tol_axis)?;
        noise_scale * along_n * along_m
    };
    Ok(MseEstimate {
        value: interpolation + noise,
        interpolation,
        noise,
        method: MseMethod::NumericIntegral,
    })
}

/// Second-order Taylor MSE from precomputed moments.
pub fn mse_taylor_with(moments: &SpectrumMoments, noise_var: f64, pc: f64, ps: f64) -> MseEstimate {
    let interpolation = (2.0 * ps * ps * pc * pc * moments.w_n_2 * moments.w_m_2
        + pc.powi(4) * moments.w_n_4
        + ps.powi(4) * moments.w_m_4)
        / 144.0;
    let noise = ps * pc * noise_var / (4.0 * PI * PI);
    MseEstimate {
        value: interpolation + noise,
        interpolation,
        noise,
        method: MseMethod::Taylor,
    }
}

pub fn mse_taylor(profile: &ChannelProfile, pc: f64, ps: f64) -> Result<MseEstimate> {
    Ok(mse_taylor_with(&spectrum_moments(profile)?, profile.noise_var, pc, ps))
}

/// Number of data REs for an integer pattern.
pub fn data_re_count(cfg: &SystemConfig, pattern: &RsPattern) -> usize {
    let (nc, nt) = (cfg.num_subcarriers, cfg.num_symbols);
    match cfg.re_counting {
        ReCounting::IndexSets => (nc - pattern.n_rs_freq) * (nt - pattern.m_rs_time),
        ReCounting::Complement => nc * nt - pattern.rs_count(),
    }
}

/// Fraction of the grid carrying data in the closed-form rate.
pub fn data_fraction_closed(cfg: &SystemConfig, pc: f64, ps: f64) -> f64 {
    match cfg.re_counting {
        ReCounting::IndexSets => (1.0 - 1.0 / pc) * (1.0 - 1.0 / ps),
        ReCounting::Complement => 1.0 - 1.0 / (pc * ps),
    }
}

fn data_fraction_gradient(cfg: &SystemConfig, pc: f64, ps: f64) -> [f64; 2] {
    match cfg.re_counting {
        ReCounting::IndexSets => [(1.0 - 1.0 / ps) / (pc * pc), (1.0 - 1.0 / pc) / (ps * ps)],
        ReCounting::Complement => [1.0 / (pc * pc * ps), 1.0 / (pc * ps * ps)],
    }
}

/// Rate in bit/s for an integer pattern given an MSE estimate. The path-gain
/// factor in the SINR is the total normalized gain, 1.
pub fn rate_exact(cfg: &SystemConfig, profile: &ChannelProfile, pattern: &RsPattern, mse: &MseEstimate) -> f64 {
    let sinr = profile.estimator_var / (mse.value + profile.noise_var);
    cfg.subcarrier_spacing_hz * data_re_count(cfg, pattern) as f64 * (1.0 + sinr).log2()
}

/// Denominator of the closed-form SINR.
fn closed_form_distortion(moments: &SpectrumMoments, noise_var: f64, pc: f64, ps: f64) -> f64 {
    let q = ps * ps * moments.w_m_2 + pc * pc * moments.w_n_2;
    q * q / 144.0 + (pc * ps / (4.0 * PI * PI) + 1.0) * noise_var
}

fn closed_form_distortion_gradient(moments: &SpectrumMoments, noise_var: f64, pc: f64, ps: f64) -> [f64; 2] {
    let q = ps * ps * moments.w_m_2 + pc * pc * moments.w_n_2;
    [
        2.0 * q * 2.0 * pc * moments.w_n_2 / 144.0 + ps * noise_var / (4.0 * PI * PI),
        2.0 * q * 2.0 * ps * moments.w_m_2 / 144.0 + pc * noise_var / (4.0 * PI * PI),
    ]
}

pub fn rate_closed_with(
    cfg: &SystemConfig,
    profile: &ChannelProfile,
    moments: &SpectrumMoments,
    pc: f64,
    ps: f64,
) -> f64 {
    let grid = cfg.num_subcarriers as f64 * cfg.num_symbols as f64;
    let d = closed_form_distortion(moments, profile.noise_var, pc, ps);
    cfg.subcarrier_spacing_hz * grid * data_fraction_closed(cfg, pc, ps) * (1.0 + profile.estimator_var / d).log2()
}

/// Closed-form rate with the Taylor MSE substituted.
pub fn rate_closed(cfg: &SystemConfig, profile: &ChannelProfile, pc: f64, ps: f64) -> Result<f64> {
    if !(pc * ps >= 1.0) {
        return Err(Error::InvalidArgument(format!("need pc·ps >= 1, got {}", pc * ps)));
    }
    Ok(rate_closed_with(cfg, profile, &spectrum_moments(profile)?, pc, ps))
}

/// Left-hand side of the rate constraint in standard form:
/// C_min / (Δf N_c N_t · data fraction) − log₂(1 + σ_Ĥ²/distortion) ≤ 0.
pub fn rate_constraint(cfg: &SystemConfig, profile: &ChannelProfile, moments: &SpectrumMoments, pc: f64, ps: f64) -> f64 {
    let grid = cfg.num_subcarriers as f64 * cfg.num_symbols as f64;
    let c_min = cfg.rate_floor_bps;
    let fraction = data_fraction_closed(cfg, pc, ps);
    let demand = if c_min == 0.0 {
        0.0
    } else if fraction <= 0.0 {
        f64::INFINITY
    } else {
        c_min / (cfg.subcarrier_spacing_hz * grid * fraction)
    };
    let d = closed_form_distortion(moments, profile.noise_var, pc, ps);
    demand - (1.0 + profile.estimator_var / d).log2()
}

/// Analytic gradient of [`rate_constraint`].
pub fn rate_constraint_gradient(
    cfg: &SystemConfig,
    profile: &ChannelProfile,
    moments: &SpectrumMoments,
    pc: f64,
    ps: f64,
) -> [f64; 2] {
    let grid = cfg.num_subcarriers as f64 * cfg.num_symbols as f64;
    let c_min = cfg.rate_floor_bps;
    let fraction = data_fraction_closed(cfg, pc, ps);
    let dfrac = data_fraction_gradient(cfg, pc, ps);
    let k = c_min / (cfg.subcarrier_spacing_hz * grid);
    let d = closed_form_distortion(moments, profile.noise_var, pc, ps);
    let dd = closed_form_distortion_gradient(moments, profile.noise_var, pc, ps);
    let s = profile.estimator_var;
    // d/dd of −log₂(1 + s/d) = (1/d − 1/(d + s)) / ln 2
    let dlog = (1.0 / d - 1.0 / (d + s)) / std::f64::consts::LN_2;
    let mut g = [0.0; 2];
    for i in 0..2 {
        let demand = if c_min == 0.0 { 0.0 } else { -k * dfrac[i] / (fraction * fraction) };
        g[i] = demand + dlog * dd[i];
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::make_pattern;
    use approx::assert_relative_eq;

    fn cfg() -> SystemConfig {
        SystemConfig::reference()
    }

    #[test]
    fn ideal_coefficients() {
        assert_eq!(ideal_interp_coeff(0, 0, 6, 4), 1.0);
        assert!(ideal_interp_coeff(6, 0, 6, 4).abs() < 1e-15);
        assert_relative_eq!(ideal_interp_coeff(3, 2, 6, 4), 4.0 / (PI * PI), max_relative = 1e-14);
    }

    #[test]
    fn linear_response_values() {
        assert_relative_eq!(linear_interp_response(0.0, 0.0, 6, 4), 24.0, max_relative = 1e-15);
        assert!(linear_interp_response(2.0 * PI / 6.0, 0.0, 6, 4).abs() < 1e-14);
        assert!(linear_interp_response(PI, PI, 2, 2).abs() < 1e-14);
    }

    #[test]
    fn linear_response_preserves_dc_energy() {
        for p in [2usize, 4, 8] {
            for q in [2usize, 4, 8] {
                let v = quad::integrate_2d(|a, b| linear_interp_response(a, b, p, q), (-PI, PI), (-PI, PI), 1e-9)
                    .unwrap();
                assert!((v - 4.0 * PI * PI).abs() <= 1e-6, "({p},{q}) -> {v}");
            }
        }
    }

    #[test]
    fn error_filter_values() {
        for (pc, ps) in [(1, 1), (4, 4), (6, 3)] {
            assert_eq!(error_filter_response(0.0, 0.0, pc, ps).unwrap(), 0.0);
        }
        let e = error_filter_response(PI / 4.0, 0.0, 4, 4).unwrap();
        assert_relative_eq!(e, linear_interp_response(PI / 4.0, 0.0, 4, 4) - 16.0, max_relative = 1e-15);
        for w in [1e-3, 1e-2, 0.05] {
            let e = error_filter_response(w, 0.5 * w, 4, 4).unwrap();
            assert!(e <= 0.0);
            // quadratic near DC: e/w² stays bounded
            assert!(e.abs() / (w * w) < 16.0 * (15.0 + 0.25 * 15.0) / 12.0 + 1.0);
        }
        assert!(matches!(error_filter_response(PI / 3.0, 0.0, 4, 4), Err(Error::ValidityRegion(_))));
    }

    #[test]
    fn brick_wall_moments_are_analytic() {
        let a = 0.37;
        let s = BrickWall { half_width: a };
        assert_relative_eq!(s.moment(0).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(s.moment(2).unwrap(), a * a / 3.0, max_relative = 1e-12);
        assert_relative_eq!(s.moment(4).unwrap(), a.powi(4) / 5.0, max_relative = 1e-12);
    }

    #[test]
    fn default_profile_moments() {
        let cfg = cfg();
        let m = spectrum_moments(&ChannelProfile::default_for(&cfg)).unwrap();
        assert_relative_eq!(m.w_n_2, (0.1 * PI).powi(2) / 3.0, max_relative = 1e-12);
        assert_relative_eq!(m.w_m_2, (0.05 * PI).powi(2) / 3.0, max_relative = 1e-12);
        assert!(m.w_n_4 >= m.w_n_2 * m.w_n_2);
        assert!(m.w_m_4 >= m.w_m_2 * m.w_m_2);
    }

    #[test]
    fn static_channel_has_vanishing_moments() {
        let cfg = cfg();
        let p = ChannelProfile::brick_wall(&cfg, 1e-9, 1e-9, 0.01, 1).unwrap();
        let m = spectrum_moments(&p).unwrap();
        assert!(m.w_n_2 < 1e-17 && m.w_m_4 < 1e-30);
        let t = mse_taylor(&p, 4.0, 4.0).unwrap();
        assert_relative_eq!(t.value, 16.0 * 0.01 / (4.0 * PI * PI), max_relative = 1e-9);
    }

    #[test]
    fn profile_validation() {
        let cfg = cfg();
        let base = ChannelProfile::default_for(&cfg);
        let mut p = base.clone();
        p.path_gains[0] += 1e-6;
        assert!(matches!(p.validate(&cfg), Err(Error::Validation { field: "path_gains", .. })));
        let mut p = base.clone();
        p.path_delays_s[0] = 1.0 / cfg.subcarrier_spacing_hz;
        assert!(p.validate(&cfg).is_err());
        let mut p = base.clone();
        p.doppler_spread_norm = 0.0;
        assert!(p.validate(&cfg).is_err());
        let mut p = base;
        p.delay_spread_norm = 4.0;
        assert!(p.validate(&cfg).is_err());
    }

    #[test]
    fn taylor_mse_values() {
        let zero = SpectrumMoments {
            w_n_2: 0.0,
            w_n_4: 0.0,
            w_m_2: 0.0,
            w_m_4: 0.0,
        };
        let t = mse_taylor_with(&zero, 0.3, 3.0, 5.0);
        assert_relative_eq!(t.value, 15.0 * 0.3 / (4.0 * PI * PI), max_relative = 1e-15);

        let m = SpectrumMoments {
            w_n_2: 0.02,
            w_n_4: 0.001,
            w_m_2: 0.01,
            w_m_4: 0.0004,
        };
        let t = mse_taylor_with(&m, 4.0 * PI * PI, 1.0, 1.0);
        let interp = (2.0 * 0.02 * 0.01 + 0.001 + 0.0004) / 144.0;
        assert_relative_eq!(t.value, 1.0 + interp, max_relative = 1e-15);

        // default profile at (4, 4), hand-expanded polynomial
        let cfg = cfg();
        let p = ChannelProfile::default_for(&cfg);
        let (an, am) = (0.1 * PI, 0.05 * PI);
        let want = (2.0 * 256.0 * (an * an / 3.0) * (am * am / 3.0) + 256.0 * an.powi(4) / 5.0 + 256.0 * am.powi(4) / 5.0)
            / 144.0
            + 16.0 * 0.01 / (4.0 * PI * PI);
        assert_relative_eq!(mse_taylor(&p, 4.0, 4.0).unwrap().value, want, max_relative = 1e-12);
    }

    /// Fejér identity: ∫|F_P|² over [−π, π] = 2π(2P² + 1)/(3P).
    fn noise_term_oracle(noise_var: f64, pc: f64, ps: f64) -> f64 {
        let axis = |p: f64| 2.0 * PI * (2.0 * p * p + 1.0) / (3.0 * p);
        noise_var / (pc * ps) / (4.0 * PI * PI) * axis(pc) * axis(ps)
    }

    #[test]
    fn numeric_noise_term_matches_fejer_identity() {
        let cfg = cfg();
        let p = ChannelProfile::default_for(&cfg);
        for (pc, ps) in [(2, 2), (3, 4), (4, 4), (2, 3)] {
            let m = mse_numeric(&p, pc, ps).unwrap();
            assert_relative_eq!(m.noise, noise_term_oracle(0.01, pc as f64, ps as f64), max_relative = 1e-9);
        }
    }

    #[test]
    fn numeric_interpolation_term_matches_midpoint_oracle() {
        let cfg = cfg();
        let p = ChannelProfile::default_for(&cfg);
        let (an, am) = (p.delay_spread_norm, p.doppler_spread_norm);
        for (pc, ps) in [(2usize, 2usize), (4, 3)] {
            let got = mse_numeric(&p, pc, ps).unwrap().interpolation;
            let k = 400;
            let (hn, hm) = (2.0 * an / k as f64, 2.0 * am / k as f64);
            let mut acc = 0.0;
            for i in 0..k {
                for j in 0..k {
                    let wn = -an + (i as f64 + 0.5) * hn;
                    let wm = -am + (j as f64 + 0.5) * hm;
                    let w = {
                        let f = |w: f64, p: f64| ((p * w / 2.0).sin() / (w / 2.0).sin()).powi(2) / p;
                        f(wn, pc as f64) * f(wm, ps as f64)
                    };
                    acc += (w - (pc * ps) as f64).powi(2);
                }
            }
            let want = acc * hn * hm * (PI / an) * (PI / am) / ((pc * ps) as f64).powi(2) / (4.0 * PI * PI);
            assert_relative_eq!(got, want, max_relative = 1e-4);
        }
    }

    #[test]
    fn numeric_mse_vanishes_for_static_noiseless_channel() {
        let cfg = cfg();
        let p = ChannelProfile::brick_wall(&cfg, 1e-4 * PI, 1e-4 * PI, 0.0, 1).unwrap();
        assert!(mse_numeric(&p, 3, 3).unwrap().value <= 1e-10);
    }

    #[test]
    fn numeric_noise_term_is_linear_in_noise() {
        let cfg = cfg();
        let p = ChannelProfile::default_for(&cfg);
        let a = mse_numeric(&p, 3, 2).unwrap();
        let b = mse_numeric(&p.clone().with_noise_var(0.07), 3, 2).unwrap();
        assert_relative_eq!(b.noise, 7.0 * a.noise, max_relative = 1e-9);
        assert_relative_eq!(a.interpolation, b.interpolation, max_relative = 1e-12);
    }

    #[test]
    fn numeric_mse_rejects_support_outside_validity_region() {
        let cfg = cfg();
        let p = ChannelProfile::default_for(&cfg);
        assert!(mse_numeric(&p, 10, 2).is_ok());
        assert!(matches!(mse_numeric(&p, 11, 2), Err(Error::ValidityRegion(_))));
    }

    #[test]
    fn rate_degenerate_cases() {
        let cfg = cfg();
        let p = ChannelProfile::default_for(&cfg);
        let full = make_pattern(&cfg, 1, 1).unwrap();
        let mse = mse_taylor(&p, 1.0, 1.0).unwrap();
        assert_eq!(rate_exact(&cfg, &p, &full, &mse), 0.0);
        assert_eq!(rate_closed(&cfg, &p, 1.0, 1.0).unwrap(), 0.0);

        let pat = make_pattern(&cfg, 6, 4).unwrap();
        let huge = MseEstimate {
            value: 1e12,
            interpolation: 1e12,
            noise: 0.0,
            method: MseMethod::Taylor,
        };
        let r = rate_exact(&cfg, &p, &pat, &huge);
        assert!(r > 0.0 && r < 1e-3 * rate_exact(&cfg, &p, &pat, &mse_taylor(&p, 6.0, 4.0).unwrap()));

        let mut silent = p.clone();
        silent.estimator_var = 0.0;
        assert_eq!(rate_closed(&cfg, &silent, 6.0, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn data_re_counting_modes() {
        let mut cfg = cfg();
        let pat = make_pattern(&cfg, 6, 4).unwrap();
        assert_eq!(data_re_count(&cfg, &pat), (792 - 132) * (448 - 112));
        cfg.re_counting = ReCounting::Complement;
        assert_eq!(data_re_count(&cfg, &pat), 792 * 448 - 132 * 112);
    }

    #[test]
    fn closed_rate_matches_exact_rate_for_divisible_intervals() {
        // Narrow spectra: the closed form's squared second moments and the
        // Taylor fourth moments coincide to within the tolerance.
        for counting in [ReCounting::IndexSets, ReCounting::Complement] {
            let mut cfg = cfg();
            cfg.re_counting = counting;
            let p = ChannelProfile::brick_wall(&cfg, 0.02 * PI, 0.02 * PI, 0.01, 16).unwrap();
            let m = spectrum_moments(&p).unwrap();
            for (pc, ps) in [(2usize, 2usize), (4, 4), (6, 4), (8, 7), (12, 14)] {
                let pat = make_pattern(&cfg, pc, ps).unwrap();
                let exact = rate_exact(&cfg, &p, &pat, &mse_taylor_with(&m, p.noise_var, pc as f64, ps as f64));
                let closed = rate_closed_with(&cfg, &p, &m, pc as f64, ps as f64);
                assert!(((closed - exact) / exact).abs() <= 0.02, "{counting:?} ({pc},{ps})");
            }
        }
    }

    #[test]
    fn closed_rate_rises_to_a_single_peak_along_the_diagonal() {
        let cfg = cfg();
        let p = ChannelProfile::default_for(&cfg);
        let rates: Vec<f64> = (2..=60)
            .map(|prod| {
                let side = (prod as f64).sqrt();
                rate_closed(&cfg, &p, side, side).unwrap()
            })
            .collect();
        let peak = rates
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        assert!(peak > 0, "rate must increase from pc·ps = 2");
        assert!(rates[..=peak].windows(2).all(|w| w[1] >= w[0]));
        assert!(rates[peak..].windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn constraint_gradient_matches_finite_differences() {
        for counting in [ReCounting::IndexSets, ReCounting::Complement] {
            let mut cfg = cfg().with_rate_floor(1.5e11);
            cfg.re_counting = counting;
            let p = ChannelProfile::default_for(&cfg);
            let m = spectrum_moments(&p).unwrap();
            let (pc, ps) = (4.3, 5.7);
            let g = rate_constraint_gradient(&cfg, &p, &m, pc, ps);
            let e = 1e-6;
            let f = |a: f64, b: f64| rate_constraint(&cfg, &p, &m, a, b);
            assert_relative_eq!(g[0], (f(pc + e, ps) - f(pc - e, ps)) / (2.0 * e), max_relative = 1e-6);
            assert_relative_eq!(g[1], (f(pc, ps + e) - f(pc, ps - e)) / (2.0 * e), max_relative = 1e-6);
        }
    }

    #[test]
    fn constraint_sign_tracks_closed_rate() {
        let cfg = cfg();
        let p = ChannelProfile::default_for(&cfg);
        let m = spectrum_moments(&p).unwrap();
        let r = rate_closed_with(&cfg, &p, &m, 5.0, 3.0);
        let below = cfg.clone().with_rate_floor(0.99 * r);
        let above = cfg.clone().with_rate_floor(1.01 * r);
        assert!(rate_constraint(&below, &p, &m, 5.0, 3.0) < 0.0);
        assert!(rate_constraint(&above, &p, &m, 5.0, 3.0) > 0.0);
        assert_eq!(rate_constraint(&above, &p, &m, 1.0, 3.0), f64::INFINITY);
    }
}
