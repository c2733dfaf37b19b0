//! Adaptive Gauss–Kronrod (7, 15) quadrature in one and two dimensions, with
//! a fixed midpoint-rule fallback.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

/// Max interval bisections before giving up.
const MAX_SEGMENTS: usize = 4000;

/// Midpoint-rule resolution per axis used when adaptive refinement fails.
pub const FALLBACK_POINTS: usize = 2048;

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over [a, b] to absolute tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut segments = vec![(a, b, gk15(&mut f, a, b))];
    loop {
        let (total, err): (f64, f64) = segments
            .iter()
            .fold((0.0, 0.0), |(s, e), &(_, _, (v, ev))| (s + v, e + ev));
        if !total.is_finite() {
            return Err(Error::Numeric("non-finite integrand".into()));
        }
        if err <= tol {
            return Ok(total);
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(Error::Numeric(format!(
                "quadrature did not converge: error estimate {err:e} > {tol:e}"
            )));
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        segments.push((lo, mid, gk15(&mut f, lo, mid)));
        segments.push((mid, hi, gk15(&mut f, mid, hi)));
    }
}

/// Iterated integral of `f(x, y)` over [x0, x1] × [y0, y1]. Each inner
/// integral gets a tolerance scaled to the outer width.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(f: F, x: (f64, f64), y: (f64, f64), tol: f64) -> Result<f64> {
    let inner_tol = tol / (4.0 * (x.1 - x.0).abs().max(1.0));
    let mut failure = None;
    let outer = integrate(
        |xv| match integrate(|yv| f(xv, yv), y.0, y.1, inner_tol) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        x.0,
        x.1,
        tol / 2.0,
    );
    match (failure, outer) {
        (Some(e), _) => Err(e),
        (None, r) => r,
    }
}

/// Composite midpoint rule with `points` cells per axis.
pub fn midpoint_2d<F: Fn(f64, f64) -> f64>(f: F, x: (f64, f64), y: (f64, f64), points: usize) -> f64 {
    let hx = (x.1 - x.0) / points as f64;
    let hy = (y.1 - y.0) / points as f64;
    let mut total = 0.0;
    for i in 0..points {
        let xv = x.0 + (i as f64 + 0.5) * hx;
        let mut row = 0.0;
        for j in 0..points {
            row += f(xv, y.0 + (j as f64 + 0.5) * hy);
        }
        total += row;
    }
    total * hx * hy
}

/// Adaptive 2D integration falling back to the fixed midpoint grid.
pub fn integrate_2d_or_grid<F: Fn(f64, f64) -> f64>(f: F, x: (f64, f64), y: (f64, f64), tol: f64) -> Result<f64> {
    match integrate_2d(&f, x, y, tol) {
        Ok(v) => Ok(v),
        Err(Error::Numeric(_)) => {
            let v = midpoint_2d(&f, x, y, FALLBACK_POINTS);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Numeric("fallback grid produced a non-finite value".into()))
            }
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| x.powi(4), -1.0, 2.0, 1e-14).unwrap();
        assert!((v - (32.0 + 1.0) / 5.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate(|x| (20.0 * x).sin().powi(2), 0.0, PI, 1e-12).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-11);
    }

    #[test]
    fn two_dimensional_separable() {
        let v = integrate_2d(|x, y| x.cos() * y * y, (0.0, PI / 2.0), (0.0, 3.0), 1e-11).unwrap();
        assert!((v - 9.0).abs() < 1e-10);
    }

    #[test]
    fn midpoint_rule_converges() {
        let v = midpoint_2d(|x, y| x * y, (0.0, 1.0), (0.0, 2.0), 64);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        assert!(integrate(|x| 1.0 / x, -1.0, 1.0, 1e-10).is_err());
    }
}
