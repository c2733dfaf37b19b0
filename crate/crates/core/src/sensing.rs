//! Range/velocity Cramér-Rao bounds for the RS grid.
//!
//! Two routes are provided. [`fim_assemble`] sums the Fisher information of
//! the RS observation model
//!
//! ```text
//! s[n, m] = A · exp(-j2π n P_c Δf · 2R/c) · exp(j2π m P_s T_s · 2v f_c/c)
//! ```
//!
//! term by term with the γ/2 scaling, and [`crb_from_fim`] inverts it. The
//! `*_closed` functions evaluate the published closed-form expressions with
//! real-valued intervals; they are what the relaxed optimizer uses.
//!
//! The two routes are not the same function: for P_c | N_c and P_s | N_t the
//! closed forms equal exactly P_c² and P_s² times the FIM-inverse diagonal
//! (they correspond to a phase step of Δf and T_s per RS index).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{RsPattern, SystemConfig};
use crate::error::{Error, Result};

/// Determinants at or below this are treated as singular.
pub const SINGULAR_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TargetState {
    pub range_m: f64,
    pub velocity_mps: f64,
}

impl TargetState {
    pub fn new(range_m: f64, velocity_mps: f64) -> Self {
        TargetState {
            range_m,
            velocity_mps,
        }
    }

    /// Checks R < c/(2 P_c Δf) and |v| < c/(4 f_c P_s T_s).
    pub fn check_unambiguous(&self, cfg: &SystemConfig, pattern: &RsPattern) -> Result<()> {
        let r_max = max_unambiguous_range(cfg, pattern.pc as f64);
        let v_max = max_unambiguous_velocity(cfg, pattern.ps as f64);
        if !(self.range_m >= 0.0 && self.range_m < r_max) {
            return Err(Error::Ambiguity(format!(
                "range {} m not in [0, {r_max}) m",
                self.range_m
            )));
        }
        if !(self.velocity_mps.abs() < v_max) {
            return Err(Error::Ambiguity(format!(
                "|velocity| {} m/s not below {v_max} m/s",
                self.velocity_mps.abs()
            )));
        }
        Ok(())
    }
}

pub fn max_unambiguous_range(cfg: &SystemConfig, pc: f64) -> f64 {
    cfg.light_speed() / (2.0 * pc * cfg.subcarrier_spacing_hz)
}

pub fn max_unambiguous_velocity(cfg: &SystemConfig, ps: f64) -> f64 {
    cfg.light_speed() / (4.0 * cfg.carrier_freq_hz * ps * cfg.symbol_duration_s)
}

/// 2×2 Fisher information for θ = [R, v].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherMatrix {
    pub i_rr: f64,
    pub i_rv: f64,
    pub i_vr: f64,
    pub i_vv: f64,
}

impl FisherMatrix {
    /// Determinant I_vv·I_RR − I_vR·I_Rv.
    pub fn alpha(&self) -> f64 {
        self.i_vv * self.i_rr - self.i_vr * self.i_rv
    }

    pub fn scaled(&self, k: f64) -> Self {
        FisherMatrix {
            i_rr: self.i_rr * k,
            i_rv: self.i_rv * k,
            i_vr: self.i_vr * k,
            i_vv: self.i_vv * k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrbMethod {
    ClosedForm,
    FimInverted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrbReport {
    /// m²
    pub crb_r: f64,
    /// m²/s²
    pub crb_v: f64,
    pub crb_weighted: f64,
    pub method: CrbMethod,
}

/// Phase derivative factors: ∂arg(s)/∂R per unit n and ∂arg(s)/∂v per unit m.
fn phase_rates(cfg: &SystemConfig, pc: f64, ps: f64) -> (f64, f64) {
    let c = cfg.light_speed();
    let k_r = 2.0 * std::f64::consts::PI * pc * cfg.subcarrier_spacing_hz * 2.0 / c;
    let k_v = 2.0 * std::f64::consts::PI * ps * cfg.symbol_duration_s * 2.0 * cfg.carrier_freq_hz / c;
    (k_r, k_v)
}

/// Noise-free RS observation s[n, m] for a target.
pub fn rs_symbol(cfg: &SystemConfig, pattern: &RsPattern, target: &TargetState, n: usize, m: usize) -> Complex64 {
    let (k_r, k_v) = phase_rates(cfg, pattern.pc as f64, pattern.ps as f64);
    let phase = -k_r * n as f64 * target.range_m + k_v * m as f64 * target.velocity_mps;
    Complex64::from_polar(cfg.sensing_gain, phase)
}

/// Fisher information of the pattern, evaluated at R = v = 0.
pub fn fim_assemble(cfg: &SystemConfig, pattern: &RsPattern) -> Result<FisherMatrix> {
    fim_assemble_at(cfg, pattern, &TargetState::default())
}

/// Fisher information by direct summation over all RS elements at `target`.
pub fn fim_assemble_at(cfg: &SystemConfig, pattern: &RsPattern, target: &TargetState) -> Result<FisherMatrix> {
    let (n_count, m_count) = (pattern.n_rs_freq, pattern.m_rs_time);
    if n_count < 2 || m_count < 2 {
        return Err(Error::Identifiability {
            n: n_count,
            m: m_count,
        });
    }
    let (k_r, k_v) = phase_rates(cfg, pattern.pc as f64, pattern.ps as f64);
    let (mut rr, mut rv, mut vr, mut vv) = (0.0, 0.0, 0.0, 0.0);
    for n in 0..n_count {
        for m in 0..m_count {
            let s = rs_symbol(cfg, pattern, target, n, m);
            let ds_dr = s * Complex64::new(0.0, -k_r * n as f64);
            let ds_dv = s * Complex64::new(0.0, k_v * m as f64);
            rr += (ds_dr * ds_dr.conj()).re;
            rv += (ds_dr * ds_dv.conj()).re;
            vr += (ds_dv * ds_dr.conj()).re;
            vv += (ds_dv * ds_dv.conj()).re;
        }
    }
    let scale = 0.5 * cfg.sensing_snr;
    Ok(FisherMatrix {
        i_rr: scale * rr,
        i_rv: scale * rv,
        i_vr: scale * vr,
        i_vv: scale * vv,
    })
}

/// Diagonal of the inverse FIM. `eta` weights the range bound.
pub fn crb_from_fim(fim: &FisherMatrix, eta: f64) -> Result<CrbReport> {
    let alpha = fim.alpha();
    if !(alpha > SINGULAR_FLOOR) {
        return Err(Error::SingularFim { alpha });
    }
    let crb_r = fim.i_vv / alpha;
    let crb_v = fim.i_rr / alpha;
    Ok(CrbReport {
        crb_r,
        crb_v,
        crb_weighted: eta * crb_r + (1.0 - eta) * crb_v,
        method: CrbMethod::FimInverted,
    })
}

fn check_real_intervals(cfg: &SystemConfig, pc: f64, ps: f64) -> Result<()> {
    if !(pc.is_finite() && pc >= 1.0) {
        return Err(Error::IntervalOutOfRange {
            name: "pc",
            value: pc,
            min: 1.0,
            max: cfg.max_pc() as f64,
        });
    }
    if !(ps.is_finite() && ps >= 1.0) {
        return Err(Error::IntervalOutOfRange {
            name: "ps",
            value: ps,
            min: 1.0,
            max: cfg.max_ps() as f64,
        });
    }
    if pc >= cfg.num_subcarriers as f64 {
        return Err(Error::NonPositiveDenominator("N_c - P_c"));
    }
    if ps >= cfg.num_symbols as f64 {
        return Err(Error::NonPositiveDenominator("N_t - P_s"));
    }
    Ok(())
}

/// Shared factor (N_t + P_s)(N_c + P_c) + 6(N_t N_c − P_c P_s).
fn mixing_term(nc: f64, nt: f64, pc: f64, ps: f64) -> f64 {
    (nt + ps) * (nc + pc) + 6.0 * (nt * nc - pc * ps)
}

/// Published closed-form range bound.
pub fn crb_range_closed(cfg: &SystemConfig, pc: f64, ps: f64) -> Result<f64> {
    check_real_intervals(cfg, pc, ps)?;
    let (nc, nt) = (cfg.num_subcarriers as f64, cfg.num_symbols as f64);
    let c = cfg.light_speed();
    let a_pi = cfg.sensing_gain * std::f64::consts::PI;
    let num = 3.0 * c * c * (2.0 * nt - ps) * pc.powi(3) * ps;
    let den = a_pi * a_pi
        * cfg.subcarrier_spacing_hz.powi(2)
        * cfg.sensing_snr
        * (nc - pc)
        * nc
        * nt
        * mixing_term(nc, nt, pc, ps);
    Ok(num / den)
}

/// Published closed-form velocity bound.
pub fn crb_velocity_closed(cfg: &SystemConfig, pc: f64, ps: f64) -> Result<f64> {
    check_real_intervals(cfg, pc, ps)?;
    let (nc, nt) = (cfg.num_subcarriers as f64, cfg.num_symbols as f64);
    let c = cfg.light_speed();
    let a_pi = cfg.sensing_gain * std::f64::consts::PI;
    let ts_fc = cfg.symbol_duration_s * cfg.carrier_freq_hz;
    let num = 3.0 * c * c * (2.0 * nc - pc) * ps.powi(3) * pc;
    let den = a_pi * a_pi * ts_fc * ts_fc * cfg.sensing_snr * (nt - ps) * nc * nt * mixing_term(nc, nt, pc, ps);
    Ok(num / den)
}

/// η·CRB_R + (1 − η)·CRB_v from the closed forms.
pub fn crb_weighted(cfg: &SystemConfig, pc: f64, ps: f64) -> Result<f64> {
    let eta = cfg.weight_eta;
    Ok(eta * crb_range_closed(cfg, pc, ps)? + (1.0 - eta) * crb_velocity_closed(cfg, pc, ps)?)
}

/// Closed-form report with both components.
pub fn crb_closed_report(cfg: &SystemConfig, pc: f64, ps: f64) -> Result<CrbReport> {
    let crb_r = crb_range_closed(cfg, pc, ps)?;
    let crb_v = crb_velocity_closed(cfg, pc, ps)?;
    Ok(CrbReport {
        crb_r,
        crb_v,
        crb_weighted: cfg.weight_eta * crb_r + (1.0 - cfg.weight_eta) * crb_v,
        method: CrbMethod::ClosedForm,
    })
}

/// Coefficients (k_range, k_velocity) of the large-grid approximation
/// η·k_range·P_c³P_s + (1 − η)·k_velocity·P_s³P_c.
pub fn approx_coefficients(cfg: &SystemConfig) -> (f64, f64) {
    let (nc, nt) = (cfg.num_subcarriers as f64, cfg.num_symbols as f64);
    let c = cfg.light_speed();
    let a_pi = cfg.sensing_gain * std::f64::consts::PI;
    let ts_fc = cfg.symbol_duration_s * cfg.carrier_freq_hz;
    let base = 6.0 * c * c / (7.0 * a_pi * a_pi * cfg.sensing_snr);
    let k_range = base / (cfg.subcarrier_spacing_hz.powi(2) * nc.powi(3) * nt);
    let k_velocity = base / (ts_fc * ts_fc * nt.powi(3) * nc);
    (k_range, k_velocity)
}

/// Weighted bound under N_c ≫ P_c, N_t ≫ P_s.
pub fn crb_weighted_approx(cfg: &SystemConfig, pc: f64, ps: f64) -> Result<f64> {
    check_real_intervals(cfg, pc, ps)?;
    Ok(approx_value(cfg, pc, ps))
}

pub(crate) fn approx_value(cfg: &SystemConfig, pc: f64, ps: f64) -> f64 {
    let (k_range, k_velocity) = approx_coefficients(cfg);
    let eta = cfg.weight_eta;
    eta * k_range * pc.powi(3) * ps + (1.0 - eta) * k_velocity * ps.powi(3) * pc
}

/// Gradient and Hessian of the approximation (exact polynomial derivatives).
pub(crate) fn approx_derivatives(cfg: &SystemConfig, pc: f64, ps: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let (kr, kv) = approx_coefficients(cfg);
    let a = cfg.weight_eta * kr;
    let b = (1.0 - cfg.weight_eta) * kv;
    let grad = [
        3.0 * a * pc * pc * ps + b * ps.powi(3),
        a * pc.powi(3) + 3.0 * b * ps * ps * pc,
    ];
    let cross = 3.0 * a * pc * pc + 3.0 * b * ps * ps;
    let hess = [[6.0 * a * pc * ps, cross], [cross, 6.0 * b * pc * ps]];
    (grad, hess)
}
