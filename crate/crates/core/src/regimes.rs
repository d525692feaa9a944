//! Interference-regime classifiers.
//!
//! Each "for all input distributions" condition is discharged in closed form:
//! the worst case over jointly Gaussian inputs reduces to maximizing a scalar
//! quadratic `a x^2 + 2|b| x` over `x = |beta2|` in `[0, 1]`.
//! [`condition_oracle`] re-checks the same inequalities by brute force with
//! the log-det engine and exists for validation only.

use crate::error::{Error, Result};
use crate::gauss::{mutual_info_y, ChannelGains, InputCoeffs, LinearModel, NoiseCorr, Var};
use num_complex::Complex64;
use serde::Serialize;
use std::str::FromStr;

/// Relative tolerance of the degraded-channel ratio test.
pub const DEGRADED_RTOL: f64 = 1e-9;

/// Conditions that hold with equality up to round-off count as satisfied.
fn tie_tol(g: &ChannelGains) -> f64 {
    let s = g.h11 * g.h11
        + g.h22 * g.h22
        + g.h1c * g.h1c
        + g.h2c * g.h2c
        + g.h12.norm_sqr()
        + g.h21.norm_sqr();
    1e-12 * (1.0 + s)
}

/// Coefficients `(a, b)` of the quadratic whose maximum decides strong interference at Rx 1.
fn quad_rx1(g: &ChannelGains) -> (f64, Complex64) {
    let a = g.h2c * g.h2c - g.h1c * g.h1c;
    let b = Complex64::new(g.h22 * g.h2c, 0.0) - g.h12 * g.h1c;
    (a, b)
}

fn argmax_quad(a: f64, b_abs: f64) -> f64 {
    if a >= 0.0 {
        1.0
    } else {
        (b_abs / -a).min(1.0)
    }
}

/// Maximizer `|beta2|` of `f(x) = a x^2 + 2|b| x` on `[0, 1]`, with the phase
/// that aligns `beta2` against the cross-link term.
///
/// Under `Xc = conj(beta1) X1 + conj(beta2) X2 + ...` the linear part of the
/// objective is `2 Re(beta2 b)`, so the maximizing phase is `-arg b`.
pub fn beta2_star(g: &ChannelGains) -> Complex64 {
    let (a, b) = quad_rx1(g);
    let x = argmax_quad(a, b.norm());
    if b.norm() == 0.0 {
        return Complex64::new(x, 0.0);
    }
    Complex64::from_polar(x, -b.arg())
}

/// Input coefficients attaining the worst case of the Rx-1 strong condition.
pub fn strong_rx1_witness(g: &ChannelGains) -> InputCoeffs {
    let b2 = beta2_star(g);
    let (a, _) = quad_rx1(g);
    let b1 = if a >= 0.0 {
        0.0
    } else {
        (1.0 - b2.norm_sqr()).max(0.0).sqrt()
    };
    InputCoeffs {
        beta1: Complex64::new(b1, 0.0),
        beta2: b2,
    }
}

/// `max over inputs of [P(Y2 | X1) - P(Y1 | X1)]`, the received power of
/// `(X2, Xc)` at each destination given `X1`. Nonpositive iff strong at Rx 1.
pub fn strong_margin_rx1(g: &ChannelGains) -> f64 {
    let (a, b) = quad_rx1(g);
    let x = argmax_quad(a, b.norm());
    g.h22 * g.h22 - g.h12.norm_sqr() + a * x * x + 2.0 * b.norm() * x
}

pub fn strong_margin_rx2(g: &ChannelGains) -> f64 {
    strong_margin_rx1(&g.swap())
}

/// `max over inputs of [P(Y1) - P(Y2)]`. Nonpositive iff every input gives
/// destination 2 at least as much total received power as destination 1.
pub fn vsi_margin_rx1(g: &ChannelGains) -> f64 {
    let p1 = g.h11 * g.h11 + g.h1c * g.h1c + g.h12.norm_sqr();
    let p2 = g.h21.norm_sqr() + g.h2c * g.h2c + g.h22 * g.h22;
    let u = Complex64::new(g.h11 * g.h1c, 0.0) - g.h21 * g.h2c;
    let v = g.h12 * g.h1c - Complex64::new(g.h22 * g.h2c, 0.0);
    p1 - p2 + 2.0 * (u.norm_sqr() + v.norm_sqr()).sqrt()
}

pub fn vsi_margin_rx2(g: &ChannelGains) -> f64 {
    vsi_margin_rx1(&g.swap())
}

pub fn is_strong_at_rx1(g: &ChannelGains) -> bool {
    strong_margin_rx1(g) <= tie_tol(g)
}

pub fn is_strong_at_rx2(g: &ChannelGains) -> bool {
    is_strong_at_rx1(&g.swap())
}

pub fn is_vsi_at_rx1(g: &ChannelGains) -> bool {
    is_strong_at_rx1(g) && vsi_margin_rx1(g) <= tie_tol(g)
}

pub fn is_vsi_at_rx2(g: &ChannelGains) -> bool {
    is_vsi_at_rx1(&g.swap())
}

pub fn is_strong_both(g: &ChannelGains) -> bool {
    is_strong_at_rx1(g) && is_strong_at_rx2(g)
}

/// `rho` such that `h21 = rho h11` and `h2c = rho h1c`, with `rho` in `[0, 1]`.
///
/// Given `X2`, destination 2 then sees a scaled copy of what destination 1
/// sees plus independent noise.
pub fn degraded_rho(g: &ChannelGains) -> Option<f64> {
    degraded_rho_tol(g, DEGRADED_RTOL)
}

pub fn degraded_rho_tol(g: &ChannelGains, rtol: f64) -> Option<f64> {
    if !(g.h11 > 0.0 && g.h1c > 0.0) || g.h21.im != 0.0 || g.h21.re < 0.0 {
        return None;
    }
    let r1 = g.h21.re / g.h11;
    let r2 = g.h2c / g.h1c;
    if (r1 - r2).abs() > rtol * r1.abs().max(r2.abs()) {
        return None;
    }
    let rho = 0.5 * (r1 + r2);
    (rho <= 1.0).then_some(rho)
}

/// The twin test with the roles of the destinations exchanged.
pub fn degraded_rho_rx1(g: &ChannelGains) -> Option<f64> {
    degraded_rho(&g.swap())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub strong_rx1: bool,
    pub strong_rx2: bool,
    pub vsi_rx1: bool,
    pub vsi_rx2: bool,
    pub strong_both: bool,
    pub degraded: bool,
    pub rho: Option<f64>,
    /// Worst-case `beta2` for the Rx-1 strong condition.
    #[serde(skip)]
    pub beta2_star_rx1: Complex64,
    /// Worst-case `beta1` for the Rx-2 strong condition (the swapped twin).
    #[serde(skip)]
    pub beta2_star_rx2: Complex64,
}

pub fn classify(g: &ChannelGains) -> RegimeReport {
    let rho = degraded_rho(g);
    let strong_rx1 = is_strong_at_rx1(g);
    let strong_rx2 = is_strong_at_rx2(g);
    RegimeReport {
        strong_rx1,
        strong_rx2,
        vsi_rx1: is_vsi_at_rx1(g),
        vsi_rx2: is_vsi_at_rx2(g),
        strong_both: strong_rx1 && strong_rx2,
        degraded: rho.is_some(),
        rho,
        beta2_star_rx1: beta2_star(g),
        beta2_star_rx2: beta2_star(&g.swap()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    StrongRx1,
    StrongRx2,
    VsiRx1,
    VsiRx2,
    StrongBoth,
}

impl FromStr for Condition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "strong-rx1" => Condition::StrongRx1,
            "strong-rx2" => Condition::StrongRx2,
            "vsi-rx1" => Condition::VsiRx1,
            "vsi-rx2" => Condition::VsiRx2,
            "strong-both" => Condition::StrongBoth,
            _ => return Err(Error::Usage(format!("unknown condition '{s}'"))),
        })
    }
}

impl Condition {
    /// The closed-form classifier for this condition.
    pub fn holds(&self, g: &ChannelGains) -> bool {
        match self {
            Condition::StrongRx1 => is_strong_at_rx1(g),
            Condition::StrongRx2 => is_strong_at_rx2(g),
            Condition::VsiRx1 => is_vsi_at_rx1(g),
            Condition::VsiRx2 => is_vsi_at_rx2(g),
            Condition::StrongBoth => is_strong_both(g),
        }
    }
}

const ORACLE_SLACK: f64 = 1e-9;

/// Brute-force check of a condition's mutual-information inequalities over a
/// polar `grid_n x grid_n` grid of real `(beta1, beta2)` covering the closed
/// unit disk. With `complex` set, each grid point is also tried with an
/// 8-point phase ring on each coefficient.
pub fn condition_oracle(
    g: &ChannelGains,
    which: Condition,
    grid_n: usize,
    complex: bool,
) -> Result<bool> {
    if grid_n < 11 {
        return Err(Error::Usage(format!("grid_n must be >= 11, got {grid_n}")));
    }
    let (g1, vsi) = match which {
        Condition::StrongRx1 => (*g, false),
        Condition::StrongRx2 => (g.swap(), false),
        Condition::VsiRx1 => (*g, true),
        Condition::VsiRx2 => (g.swap(), true),
        Condition::StrongBoth => {
            return Ok(condition_oracle(g, Condition::StrongRx1, grid_n, complex)?
                && condition_oracle(g, Condition::StrongRx2, grid_n, complex)?)
        }
    };
    let model = g1.model();
    let violated = |c: &InputCoeffs| -> Result<bool> {
        let cov = LinearModel::with_inputs(&model, c, NoiseCorr::ZERO, false).covariance();
        let d = mutual_info_y(&cov, Var::Y2, &[Var::X2, Var::Xc], &[Var::X1])?
            - mutual_info_y(&cov, Var::Y1, &[Var::X2, Var::Xc], &[Var::X1])?;
        if d > ORACLE_SLACK {
            return Ok(true);
        }
        if vsi {
            let all = [Var::X1, Var::X2, Var::Xc];
            let d =
                mutual_info_y(&cov, Var::Y1, &all, &[])? - mutual_info_y(&cov, Var::Y2, &all, &[])?;
            return Ok(d > ORACLE_SLACK);
        }
        Ok(false)
    };
    let ring: Vec<Complex64> = (1..8)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 8.0))
        .collect();
    for i in 0..grid_n {
        let r = i as f64 / (grid_n - 1) as f64;
        let n_ang = if i == 0 { 1 } else { grid_n };
        for j in 0..n_ang {
            let t = std::f64::consts::TAU * j as f64 / n_ang as f64;
            let (b1, b2) = (r * t.cos(), r * t.sin());
            let c = InputCoeffs {
                beta1: Complex64::new(b1, 0.0),
                beta2: Complex64::new(b2, 0.0),
            };
            if violated(&c)? {
                return Ok(false);
            }
            if complex {
                for &w in &ring {
                    for c in [
                        InputCoeffs {
                            beta1: c.beta1 * w,
                            beta2: c.beta2,
                        },
                        InputCoeffs {
                            beta1: c.beta1,
                            beta2: c.beta2 * w,
                        },
                    ] {
                        if violated(&c)? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}
