//! RS-interval design: exhaustive integer search and the continuous
//! relaxation with rounding.
//!
//! The integer problem minimizes the weighted CRB over a search box subject
//! to `rate_exact(mse_taylor) >= C_min`. The relaxed problem minimizes the
//! large-grid approximation `η k_R P_c³P_s + (1 − η) k_v P_s³P_c` subject to
//! the closed-form rate constraint in standard form over [1, N_c − 1] ×
//! [1, N_t − 1]. Every stage is a fixed grid or a deterministic iteration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comm::{self, ChannelProfile, SpectrumMoments};
use crate::config::{make_pattern, ContinuousDesign, RsPattern, SystemConfig};
use crate::error::{Error, Result};
use crate::sensing;

/// KKT residual the polish stage must reach.
pub const KKT_TOL: f64 = 1e-8;
/// Spacing of the refinement grid around the best coarse point.
pub const FINE_STEP: f64 = 0.05;

/// Which expression of the weighted CRB scores integer designs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveRoute {
    /// The published closed forms for CRB_R and CRB_v.
    #[default]
    ClosedForm,
    /// Inverse of the assembled Fisher matrix.
    Fisher,
}

/// Inclusive integer box for the exhaustive search and for rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub pc_min: usize,
    pub pc_max: usize,
    pub ps_min: usize,
    pub ps_max: usize,
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox {
            pc_min: 2,
            pc_max: 15,
            ps_min: 2,
            ps_max: 15,
        }
    }
}

impl SearchBox {
    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        if self.pc_min < 1 || self.pc_min > self.pc_max || self.pc_max > cfg.max_pc() {
            return Err(Error::validation(
                "search_box",
                format!("pc range [{}, {}] not inside [1, {}]", self.pc_min, self.pc_max, cfg.max_pc()),
            ));
        }
        if self.ps_min < 1 || self.ps_min > self.ps_max || self.ps_max > cfg.max_ps() {
            return Err(Error::validation(
                "search_box",
                format!("ps range [{}, {}] not inside [1, {}]", self.ps_min, self.ps_max, cfg.max_ps()),
            ));
        }
        Ok(())
    }

    /// Points in pc-major, ps-minor order.
    pub fn points(&self) -> Vec<(usize, usize)> {
        (self.pc_min..=self.pc_max)
            .flat_map(|pc| (self.ps_min..=self.ps_max).map(move |ps| (pc, ps)))
            .collect()
    }

    pub fn contains(&self, pc: usize, ps: usize) -> bool {
        (self.pc_min..=self.pc_max).contains(&pc) && (self.ps_min..=self.ps_max).contains(&ps)
    }
}

/// An integer design scored by the exact objective and rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    pub pattern: RsPattern,
    pub crb_weighted: f64,
    /// bit/s, from `rate_exact` with the Taylor MSE.
    pub rate: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActiveSet {
    /// Both intervals sit on their lower bounds.
    LowerCorner,
    RateConstraint,
    RateAndBound,
    /// Polish did not converge; the refinement-grid point is returned.
    GridOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxedDesign {
    pub design: ContinuousDesign,
    /// Approximate weighted CRB at the point.
    pub objective: f64,
    /// Standard-form rate constraint value (≤ 0 when feasible).
    pub constraint: f64,
    pub kkt_residual: f64,
    pub active: ActiveSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignStatus {
    Ok,
    Infeasible,
    RelaxedOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignOutcome {
    pub c_min: f64,
    pub relaxed: Option<RelaxedDesign>,
    pub rounded: Option<DesignPoint>,
    pub exhaustive: Option<DesignPoint>,
    /// (rounded − exhaustive)/exhaustive on the exact objective.
    pub gap_rel: Option<f64>,
    pub search_box: SearchBox,
    pub route: ObjectiveRoute,
    pub status: DesignStatus,
}

/// A fully specified design problem; the rate floor comes from `cfg`.
#[derive(Debug, Clone)]
pub struct DesignProblem {
    pub cfg: SystemConfig,
    pub profile: ChannelProfile,
    pub search: SearchBox,
    pub route: ObjectiveRoute,
    moments: SpectrumMoments,
}

impl DesignProblem {
    pub fn new(cfg: SystemConfig, profile: ChannelProfile, search: SearchBox, route: ObjectiveRoute) -> Result<Self> {
        cfg.validate()?;
        profile.validate(&cfg)?;
        search.validate(&cfg)?;
        let moments = comm::spectrum_moments(&profile)?;
        Ok(DesignProblem {
            cfg,
            profile,
            search,
            route,
            moments,
        })
    }

    /// Same problem with another rate floor.
    pub fn with_rate_floor(&self, c_min: f64) -> Result<Self> {
        let mut next = self.clone();
        next.cfg.rate_floor_bps = c_min;
        next.cfg.validate()?;
        Ok(next)
    }

    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        let mut next = self.clone();
        next.cfg.weight_eta = eta;
        next.cfg.validate()?;
        Ok(next)
    }

    pub fn moments(&self) -> &SpectrumMoments {
        &self.moments
    }

    /// Exact rate of an integer design with the Taylor MSE.
    pub fn rate(&self, pattern: &RsPattern) -> f64 {
        let mse = comm::mse_taylor_with(&self.moments, self.profile.noise_var, pattern.pc as f64, pattern.ps as f64);
        comm::rate_exact(&self.cfg, &self.profile, pattern, &mse)
    }

    pub fn objective(&self, pattern: &RsPattern) -> Result<f64> {
        match self.route {
            ObjectiveRoute::ClosedForm => sensing::crb_weighted(&self.cfg, pattern.pc as f64, pattern.ps as f64),
            ObjectiveRoute::Fisher => {
                let fim = sensing::fim_assemble(&self.cfg, pattern)?;
                Ok(sensing::crb_from_fim(&fim, self.cfg.weight_eta)?.crb_weighted)
            }
        }
    }

    pub fn evaluate(&self, pc: usize, ps: usize) -> Result<DesignPoint> {
        let pattern = make_pattern(&self.cfg, pc, ps)?;
        let rate = self.rate(&pattern);
        Ok(DesignPoint {
            pattern,
            crb_weighted: self.objective(&pattern)?,
            rate,
            feasible: rate >= self.cfg.rate_floor_bps,
        })
    }

    pub fn feasibility(&self, pc: usize, ps: usize) -> Result<bool> {
        let pattern = make_pattern(&self.cfg, pc, ps)?;
        Ok(self.rate(&pattern) >= self.cfg.rate_floor_bps)
    }

    /// Largest exact rate over the search box.
    pub fn max_rate(&self) -> Result<f64> {
        let mut best = 0.0f64;
        for (pc, ps) in self.search.points() {
            best = best.max(self.rate(&make_pattern(&self.cfg, pc, ps)?));
        }
        Ok(best)
    }

    /// Scores every point of the box in parallel, in box order.
    pub fn scan(&self) -> Result<Vec<DesignPoint>> {
        self.search
            .points()
            .into_par_iter()
            .map(|(pc, ps)| self.evaluate(pc, ps))
            .collect()
    }

    /// Feasible minimizer over the box; ties go to smaller pc, then smaller ps.
    pub fn exhaustive_search(&self) -> Result<DesignPoint> {
        argmin_feasible(self.scan()?).ok_or_else(|| {
            Error::Infeasible(format!(
                "no point of the search box reaches C_min = {} bit/s",
                self.cfg.rate_floor_bps
            ))
        })
    }

    fn constraint(&self, x: [f64; 2]) -> f64 {
        comm::rate_constraint(&self.cfg, &self.profile, &self.moments, x[0], x[1])
    }

    fn constraint_gradient(&self, x: [f64; 2]) -> [f64; 2] {
        comm::rate_constraint_gradient(&self.cfg, &self.profile, &self.moments, x[0], x[1])
    }

    fn constraint_hessian(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        let mut h = [[0.0; 2]; 2];
        for j in 0..2 {
            let step = 1e-6 * x[j].max(1.0);
            let (mut up, mut down) = (x, x);
            up[j] += step;
            down[j] -= step;
            let (gu, gd) = (self.constraint_gradient(up), self.constraint_gradient(down));
            for i in 0..2 {
                h[i][j] = (gu[i] - gd[i]) / (2.0 * step);
            }
        }
        let sym = 0.5 * (h[0][1] + h[1][0]);
        h[0][1] = sym;
        h[1][0] = sym;
        h
    }

    fn upper(&self) -> [f64; 2] {
        [self.cfg.max_pc() as f64, self.cfg.max_ps() as f64]
    }

    fn in_box(&self, x: [f64; 2]) -> bool {
        let hi = self.upper();
        (0..2).all(|i| x[i] >= 1.0 && x[i] <= hi[i])
    }

    fn relaxed_at(&self, x: [f64; 2], kkt_residual: f64, active: ActiveSet) -> RelaxedDesign {
        RelaxedDesign {
            design: ContinuousDesign { pc: x[0], ps: x[1] },
            objective: sensing::approx_value(&self.cfg, x[0], x[1]),
            constraint: self.constraint(x),
            kkt_residual,
            active,
        }
    }

    /// KKT residual for multiplier `lambda`, with the gradient projected onto
    /// the free directions at active lower/upper bounds.
    pub fn kkt_residual(&self, x: [f64; 2], lambda: f64) -> f64 {
        let (gf, _) = sensing::approx_derivatives(&self.cfg, x[0], x[1]);
        let gg = self.constraint_gradient(x);
        let scale = gf[0].abs().max(gf[1].abs());
        let hi = self.upper();
        let mut stat = 0.0f64;
        for i in 0..2 {
            let r = gf[i] + lambda * gg[i];
            let blocked = (x[i] <= 1.0 && r >= 0.0) || (x[i] >= hi[i] && r <= 0.0);
            if !blocked {
                stat = stat.max(r.abs() / scale);
            }
        }
        let slack = if lambda > 0.0 { self.constraint(x).abs() } else { self.constraint(x).max(0.0) };
        stat.max(slack)
    }

    fn lagrange_estimate(&self, x: [f64; 2]) -> f64 {
        let (gf, _) = sensing::approx_derivatives(&self.cfg, x[0], x[1]);
        let gg = self.constraint_gradient(x);
        let den = gg[0] * gg[0] + gg[1] * gg[1];
        if den == 0.0 {
            0.0
        } else {
            (-(gf[0] * gg[0] + gf[1] * gg[1]) / den).max(0.0)
        }
    }

    /// Newton iteration on the KKT system with the rate constraint active.
    fn polish_on_constraint(&self, start: [f64; 2]) -> Option<([f64; 2], f64)> {
        let f0 = sensing::approx_value(&self.cfg, start[0], start[1]);
        let residual = |x: [f64; 2], lam: f64| -> [f64; 3] {
            let (gf, _) = sensing::approx_derivatives(&self.cfg, x[0], x[1]);
            let gg = self.constraint_gradient(x);
            [gf[0] / f0 + lam * gg[0], gf[1] / f0 + lam * gg[1], self.constraint(x)]
        };
        let norm = |r: [f64; 3]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut x = start;
        let mut lam = self.lagrange_estimate(x) / f0;
        for _ in 0..60 {
            let r = residual(x, lam);
            if self.kkt_residual(x, lam * f0) <= 0.1 * KKT_TOL {
                break;
            }
            let (_, hf) = sensing::approx_derivatives(&self.cfg, x[0], x[1]);
            let hg = self.constraint_hessian(x);
            let gg = self.constraint_gradient(x);
            let jac = [
                [hf[0][0] / f0 + lam * hg[0][0], hf[0][1] / f0 + lam * hg[0][1], gg[0]],
                [hf[1][0] / f0 + lam * hg[1][0], hf[1][1] / f0 + lam * hg[1][1], gg[1]],
                [gg[0], gg[1], 0.0],
            ];
            let step = solve3(jac, [-r[0], -r[1], -r[2]])?;
            let current = norm(r);
            let mut t = 1.0;
            loop {
                let trial = [x[0] + t * step[0], x[1] + t * step[1]];
                let trial_lam = lam + t * step[2];
                if self.in_box(trial) && norm(residual(trial, trial_lam)) < (1.0 - 1e-4 * t) * current {
                    x = trial;
                    lam = trial_lam;
                    break;
                }
                t *= 0.5;
                if t < 1e-6 {
                    return None;
                }
            }
        }
        let kkt = self.kkt_residual(x, lam * f0);
        (lam >= 0.0 && kkt <= KKT_TOL).then_some((x, kkt))
    }

    /// Constraint and one bound active: root of the constraint in the free
    /// coordinate, bracketed between an infeasible and a feasible value.
    fn polish_on_bound(&self, start: [f64; 2], fixed: usize) -> Option<([f64; 2], f64)> {
        let free = 1 - fixed;
        let at = |v: f64| {
            let mut x = start;
            x[free] = v;
            x
        };
        let mut feasible = start[free];
        let mut infeasible = (start[free] - FINE_STEP).max(1.0);
        if self.constraint(at(feasible)) > 0.0 || self.constraint(at(infeasible)) <= 0.0 {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (feasible + infeasible);
            if mid == feasible || mid == infeasible {
                break;
            }
            if self.constraint(at(mid)) <= 0.0 {
                feasible = mid;
            } else {
                infeasible = mid;
            }
        }
        let x = at(feasible);
        let (gf, _) = sensing::approx_derivatives(&self.cfg, x[0], x[1]);
        let gg = self.constraint_gradient(x);
        if gg[free] == 0.0 {
            return None;
        }
        let lambda = -gf[free] / gg[free];
        let kkt = self.kkt_residual(x, lambda);
        (lambda >= 0.0 && kkt <= KKT_TOL).then_some((x, kkt))
    }

    /// Continuous minimizer of the approximate objective under the closed-form
    /// rate constraint.
    pub fn solve_relaxed(&self) -> Result<RelaxedDesign> {
        let corner = [1.0, 1.0];
        if self.constraint(corner) <= 0.0 {
            return Ok(self.relaxed_at(corner, self.kkt_residual(corner, 0.0), ActiveSet::LowerCorner));
        }
        let hi = self.upper();
        let cfg = &self.cfg;
        let best_on = |xs: Vec<[f64; 2]>| -> Option<[f64; 2]> {
            xs.into_par_iter()
                .filter(|x| self.constraint(*x) <= 0.0)
                .map(|x| (sensing::approx_value(cfg, x[0], x[1]), x))
                .collect::<Vec<_>>()
                .into_iter()
                .fold(None, |best: Option<(f64, [f64; 2])>, cand| match best {
                    Some(b) if b.0 <= cand.0 => Some(b),
                    _ => Some(cand),
                })
                .map(|(_, x)| x)
        };

        let coarse: Vec<[f64; 2]> = (1..=cfg.max_pc())
            .flat_map(|a| (1..=cfg.max_ps()).map(move |b| [a as f64, b as f64]))
            .collect();
        let seed = best_on(coarse).ok_or_else(|| {
            Error::Infeasible(format!(
                "relaxed rate constraint C_min = {} bit/s unreachable on [1, {}] × [1, {}]",
                cfg.rate_floor_bps, hi[0], hi[1]
            ))
        })?;

        let steps = (2.0 / FINE_STEP).round() as i64;
        let fine: Vec<[f64; 2]> = (0..=steps)
            .flat_map(|i| (0..=steps).map(move |j| (i, j)))
            .map(|(i, j)| [seed[0] - 1.0 + i as f64 * FINE_STEP, seed[1] - 1.0 + j as f64 * FINE_STEP])
            .filter(|x| self.in_box(*x))
            .collect();
        let grid = best_on(fine).unwrap_or(seed);
        let grid_value = sensing::approx_value(cfg, grid[0], grid[1]);

        let bound_index = (0..2).find(|&i| grid[i] <= 1.0 || grid[i] >= hi[i]);
        let polished = match bound_index {
            Some(i) => self.polish_on_bound(grid, i).map(|p| (p, ActiveSet::RateAndBound)),
            None => self
                .polish_on_constraint(grid)
                .map(|p| (p, ActiveSet::RateConstraint))
                .or_else(|| {
                    // Newton may stall where the constraint curve meets a
                    // bound; try each bound through the grid point's lines.
                    (0..2).find_map(|i| self.polish_on_bound(grid, i).map(|p| (p, ActiveSet::RateAndBound)))
                }),
        };
        match polished {
            Some(((x, kkt), active)) if sensing::approx_value(cfg, x[0], x[1]) <= grid_value => {
                Ok(self.relaxed_at(x, kkt, active))
            }
            _ => {
                let lambda = self.lagrange_estimate(grid);
                Ok(self.relaxed_at(grid, self.kkt_residual(grid, lambda), ActiveSet::GridOnly))
            }
        }
    }

    /// Best feasible integer point near a continuous design. An integral,
    /// feasible design inside the box is returned unchanged.
    pub fn round_design(&self, cont: &ContinuousDesign) -> Result<DesignPoint> {
        if cont.pc.fract() == 0.0 && cont.ps.fract() == 0.0 && self.search.contains(cont.pc as usize, cont.ps as usize) {
            let point = self.evaluate(cont.pc as usize, cont.ps as usize)?;
            if point.feasible {
                return Ok(point);
            }
        }
        for radius in [1.0, 2.0] {
            let points = self
                .neighbours(cont, radius)
                .into_iter()
                .map(|(pc, ps)| self.evaluate(pc, ps))
                .collect::<Result<Vec<_>>>()?;
            if let Some(point) = argmin_feasible(points) {
                return Ok(point);
            }
        }
        Err(Error::Infeasible(format!(
            "no feasible integer design within distance 2 of ({}, {})",
            cont.pc, cont.ps
        )))
    }

    /// Integers within ∞-distance `radius` of `cont`, clipped to the box,
    /// deduplicated, in pc-major order.
    fn neighbours(&self, cont: &ContinuousDesign, radius: f64) -> Vec<(usize, usize)> {
        let axis = |v: f64, lo: usize, hi: usize| -> Vec<usize> {
            let a = (v - radius).ceil().max(lo as f64) as usize;
            let b = (v + radius).floor().min(hi as f64) as usize;
            if a <= b {
                (a..=b).collect()
            } else {
                // Entire window outside the box: clip to the nearest edge.
                vec![if v < lo as f64 { lo } else { hi }]
            }
        };
        let pcs = axis(cont.pc, self.search.pc_min, self.search.pc_max);
        let pss = axis(cont.ps, self.search.ps_min, self.search.ps_max);
        pcs.iter().flat_map(|&a| pss.iter().map(move |&b| (a, b))).collect()
    }

    /// Relaxed, rounded and exhaustive designs for the current rate floor.
    pub fn solve(&self) -> Result<DesignOutcome> {
        let exhaustive = match self.exhaustive_search() {
            Ok(p) => Some(p),
            Err(Error::Infeasible(_)) => None,
            Err(e) => return Err(e),
        };
        let relaxed = match self.solve_relaxed() {
            Ok(r) => Some(r),
            Err(Error::Infeasible(_)) => None,
            Err(e) => return Err(e),
        };
        let rounded = match relaxed {
            Some(r) => match self.round_design(&r.design) {
                Ok(p) => Some(p),
                Err(Error::Infeasible(_)) => None,
                Err(e) => return Err(e),
            },
            None => None,
        };
        let gap_rel = match (rounded, exhaustive) {
            (Some(r), Some(e)) => Some((r.crb_weighted - e.crb_weighted) / e.crb_weighted),
            _ => None,
        };
        let status = match (exhaustive, rounded, relaxed) {
            (None, _, _) => DesignStatus::Infeasible,
            (Some(_), Some(_), _) => DesignStatus::Ok,
            (Some(_), None, Some(_)) => DesignStatus::RelaxedOnly,
            (Some(_), None, None) => DesignStatus::Infeasible,
        };
        Ok(DesignOutcome {
            c_min: self.cfg.rate_floor_bps,
            relaxed,
            rounded,
            exhaustive,
            gap_rel,
            search_box: self.search,
            route: self.route,
            status,
        })
    }

    /// One outcome per rate floor. The list stops after the first infeasible
    /// floor, since larger floors only shrink the feasible set.
    pub fn tradeoff_sweep(&self, cmin_list: &[f64]) -> Result<Vec<DesignOutcome>> {
        if cmin_list.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::InvalidArgument("C_min list must be sorted ascending".into()));
        }
        let problems: Vec<DesignProblem> = cmin_list.iter().map(|&c| self.with_rate_floor(c)).collect::<Result<_>>()?;
        let outcomes: Vec<DesignOutcome> = problems.par_iter().map(DesignProblem::solve).collect::<Result<_>>()?;
        let end = outcomes
            .iter()
            .position(|o| o.status == DesignStatus::Infeasible)
            .map_or(outcomes.len(), |i| i + 1);
        Ok(outcomes.into_iter().take(end).collect())
    }
}

/// First feasible point with the smallest objective; callers pass points in
/// pc-major order so ties resolve to smaller pc, then smaller ps.
fn argmin_feasible(points: impl IntoIterator<Item = DesignPoint>) -> Option<DesignPoint> {
    points
        .into_iter()
        .filter(|p| p.feasible)
        .fold(None, |best: Option<DesignPoint>, p| match best {
            Some(b) if b.crb_weighted <= p.crb_weighted => Some(b),
            _ => Some(p),
        })
}

/// Gaussian elimination with partial pivoting for a 3×3 system.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let k = a[row][col] / a[col][col];
            let upper = a[col];
            for (dst, src) in a[row].iter_mut().zip(upper).skip(col) {
                *dst -= k * src;
            }
            b[row] -= k * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// `rate_exact(mse_taylor) >= C_min` for an integer design.
pub fn feasibility(cfg: &SystemConfig, profile: &ChannelProfile, pc: usize, ps: usize) -> Result<bool> {
    DesignProblem::new(cfg.clone(), profile.clone(), SearchBox::default(), ObjectiveRoute::default())?.feasibility(pc, ps)
}

pub fn exhaustive_search(cfg: &SystemConfig, profile: &ChannelProfile, search: SearchBox) -> Result<DesignPoint> {
    DesignProblem::new(cfg.clone(), profile.clone(), search, ObjectiveRoute::default())?.exhaustive_search()
}

pub fn solve_relaxed(cfg: &SystemConfig, profile: &ChannelProfile) -> Result<RelaxedDesign> {
    DesignProblem::new(cfg.clone(), profile.clone(), SearchBox::default(), ObjectiveRoute::default())?.solve_relaxed()
}

pub fn round_design(cfg: &SystemConfig, profile: &ChannelProfile, cont: &ContinuousDesign) -> Result<DesignPoint> {
    DesignProblem::new(cfg.clone(), profile.clone(), SearchBox::default(), ObjectiveRoute::default())?.round_design(cont)
}

pub fn tradeoff_sweep(cfg: &SystemConfig, profile: &ChannelProfile, cmin_list: &[f64]) -> Result<Vec<DesignOutcome>> {
    DesignProblem::new(cfg.clone(), profile.clone(), SearchBox::default(), ObjectiveRoute::default())?
        .tradeoff_sweep(cmin_list)
}
