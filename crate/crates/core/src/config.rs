//! Scenario parameters, RS grid geometry and config-file I/O.
//!
//! A config file is flat JSON with snake_case keys in SI units. Only the
//! system keys below are required; channel and search keys are optional and
//! handled by [`crate::scenario`].

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const LIGHT_SPEED_MPS: f64 = 2.997_924_58e8;

/// How data resource elements are counted in the rate expressions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReCounting {
    /// Data REs are the index sets K × W: (N_c − N)(N_t − M), and
    /// N_c N_t (1 − 1/P_c)(1 − 1/P_s) in the closed form.
    #[default]
    IndexSets,
    /// Data REs are every non-RS element: N_c N_t − N M, and
    /// N_c N_t (1 − 1/(P_c P_s)) in the closed form.
    Complement,
}

/// OFDM numerology, sensing link budget and design weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub carrier_freq_hz: f64,
    pub subcarrier_spacing_hz: f64,
    pub symbol_duration_s: f64,
    pub num_subcarriers: usize,
    pub num_symbols: usize,
    /// Sensing channel amplitude A.
    pub sensing_gain: f64,
    /// Linear sensing SNR γ = Q²/σ_s².
    pub sensing_snr: f64,
    /// Range/velocity weight η in (0, 1).
    pub weight_eta: f64,
    /// Minimum communication rate in bit/s.
    pub rate_floor_bps: f64,
    #[serde(default)]
    pub re_counting: ReCounting,
}

impl SystemConfig {
    /// Numerology used for the reference scenario: 28 GHz carrier, 120 kHz
    /// spacing, 8.92 µs symbols and a 792 × 448 grid.
    pub fn reference() -> Self {
        SystemConfig {
            carrier_freq_hz: 28e9,
            subcarrier_spacing_hz: 120e3,
            symbol_duration_s: 8.92e-6,
            num_subcarriers: 792,
            num_symbols: 448,
            sensing_gain: 1.0,
            sensing_snr: 100.0,
            weight_eta: 0.2,
            rate_floor_bps: 0.0,
            re_counting: ReCounting::IndexSets,
        }
    }

    pub fn light_speed(&self) -> f64 {
        LIGHT_SPEED_MPS
    }

    /// Occupied bandwidth N_c·Δf.
    pub fn bandwidth_hz(&self) -> f64 {
        self.num_subcarriers as f64 * self.subcarrier_spacing_hz
    }

    /// Checks every invariant and reports the first violation.
    pub fn validate(&self) -> Result<()> {
        fn positive(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::validation(field, format!("must be finite and > 0, got {v}")))
            }
        }
        positive("carrier_freq_hz", self.carrier_freq_hz)?;
        positive("subcarrier_spacing_hz", self.subcarrier_spacing_hz)?;
        positive("symbol_duration_s", self.symbol_duration_s)?;
        if self.num_subcarriers < 2 {
            return Err(Error::validation(
                "num_subcarriers",
                format!("must be >= 2, got {}", self.num_subcarriers),
            ));
        }
        if self.num_symbols < 2 {
            return Err(Error::validation(
                "num_symbols",
                format!("must be >= 2, got {}", self.num_symbols),
            ));
        }
        if !self.sensing_gain.is_finite() || self.sensing_gain == 0.0 {
            return Err(Error::validation(
                "sensing_gain",
                format!("must be finite and nonzero, got {}", self.sensing_gain),
            ));
        }
        positive("sensing_snr", self.sensing_snr)?;
        if !(self.weight_eta > 0.0 && self.weight_eta < 1.0) {
            return Err(Error::validation(
                "weight_eta",
                format!("must lie in (0, 1), got {}", self.weight_eta),
            ));
        }
        if !(self.rate_floor_bps.is_finite() && self.rate_floor_bps >= 0.0) {
            return Err(Error::validation(
                "rate_floor_bps",
                format!("must be finite and >= 0, got {}", self.rate_floor_bps),
            ));
        }
        Ok(())
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.weight_eta = eta;
        self
    }

    pub fn with_rate_floor(mut self, c_min: f64) -> Self {
        self.rate_floor_bps = c_min;
        self
    }

    pub fn with_snr(mut self, snr: f64) -> Self {
        self.sensing_snr = snr;
        self
    }

    /// Upper bound of the frequency-domain interval, N_c − 1.
    pub fn max_pc(&self) -> usize {
        self.num_subcarriers - 1
    }

    /// Upper bound of the time-domain interval, N_t − 1.
    pub fn max_ps(&self) -> usize {
        self.num_symbols - 1
    }
}

/// Reads and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<SystemConfig> {
    let text = read_text(path.as_ref())?;
    parse_config(&text)
}

/// Parses and validates config JSON. Keys belonging to the channel or search
/// sections are accepted and ignored here.
pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let cfg: SystemConfig = serde_json::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn write_config(cfg: &SystemConfig, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(cfg)?;
    fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Rectangular RS placement with integer intervals.
///
/// RS occupy subcarriers {0, P_c, 2P_c, ...} and symbols {0, P_s, 2P_s, ...}
/// inside the grid, so N = ⌊(N_c − 1)/P_c⌋ + 1 and M = ⌊(N_t − 1)/P_s⌋ + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsPattern {
    pub pc: usize,
    pub ps: usize,
    pub n_rs_freq: usize,
    pub m_rs_time: usize,
}

impl RsPattern {
    /// RS density D = 1/(P_c P_s).
    pub fn density(&self) -> f64 {
        1.0 / (self.pc as f64 * self.ps as f64)
    }

    /// Total number of RS elements N·M.
    pub fn rs_count(&self) -> usize {
        self.n_rs_freq * self.m_rs_time
    }

    /// Subcarrier indices carrying RS.
    pub fn freq_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_rs_freq).map(move |n| n * self.pc)
    }

    /// Symbol indices carrying RS.
    pub fn time_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m_rs_time).map(move |m| m * self.ps)
    }
}

pub fn make_pattern(cfg: &SystemConfig, pc: usize, ps: usize) -> Result<RsPattern> {
    check_interval("pc", pc as f64, cfg.max_pc())?;
    check_interval("ps", ps as f64, cfg.max_ps())?;
    Ok(RsPattern {
        pc,
        ps,
        n_rs_freq: (cfg.num_subcarriers - 1) / pc + 1,
        m_rs_time: (cfg.num_symbols - 1) / ps + 1,
    })
}

fn check_interval(name: &'static str, value: f64, max: usize) -> Result<()> {
    if value.is_finite() && value >= 1.0 && value <= max as f64 {
        Ok(())
    } else {
        Err(Error::IntervalOutOfRange {
            name,
            value,
            min: 1.0,
            max: max as f64,
        })
    }
}

/// Real-valued intervals used by the relaxed problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousDesign {
    pub pc: f64,
    pub ps: f64,
}

impl ContinuousDesign {
    pub fn new(cfg: &SystemConfig, pc: f64, ps: f64) -> Result<Self> {
        check_interval("pc", pc, cfg.max_pc())?;
        check_interval("ps", ps, cfg.max_ps())?;
        Ok(ContinuousDesign { pc, ps })
    }
}
