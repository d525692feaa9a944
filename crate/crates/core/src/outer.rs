//! Outer bounds on the capacity region.
//!
//! * Sato-type: decoding at each destination may use a surrogate output whose
//!   noise is arbitrarily correlated with the other destination's noise; the
//!   bound is minimized over that correlation.
//! * Strong interference at Rx 1 / Rx 2 / both, in closed form.
//! * The weak-interference bound for degraded channels.
//!
//! Expressions are evaluable for any channel; a [`Validity`] flag records
//! whether the hypotheses under which they are outer bounds hold.

use crate::error::{Error, Result};
use crate::gauss::{
    cap0, mutual_info_y, ChannelGains, ChannelModel, InputCoeffs, InputMode, LinearModel,
    NoiseCorr, Var,
};
use crate::regimes;
use crate::regions::{
    frontier, Frontier, HalfPlane, OptimizerConfig, ParamFamily, Polygon, Support, Validity,
};
use num_complex::Complex64;
use std::str::FromStr;

const ALL: [Var; 3] = [Var::X1, Var::X2, Var::Xc];

/// Input correlation plus the two surrogate-noise couplings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SatoParams {
    pub coeffs: InputCoeffs,
    /// Couples `Z1` with the surrogate noise at destination 2.
    pub r12: NoiseCorr,
    /// Couples `Z2` with the surrogate noise at destination 1.
    pub r21: NoiseCorr,
}

fn cov(m: &ChannelModel, c: &InputCoeffs, r: NoiseCorr) -> crate::gauss::JointCovariance {
    LinearModel::with_inputs(m, c, r, true).covariance()
}

/// Coefficients of the noiseless output at `rx` on `(X1, X2, Xc_in)`.
fn signal_row(m: &ChannelModel, c: &InputCoeffs, rx: usize) -> [Complex64; 3] {
    let g = &m.gain[rx];
    [
        g[0] + g[2] * c.beta1.conj(),
        g[1] + g[2] * c.beta2.conj(),
        g[2] * c.residual().sqrt(),
    ]
}

/// Scalar outputs `Y = u.S + su N` and `Ytil = v.S + sv N'` over two free
/// sources `S`, with `E[N N'*] = corr`.
struct SurrogatePair {
    u: [Complex64; 2],
    v: [Complex64; 2],
    su: f64,
    sv: f64,
}

impl SurrogatePair {
    fn powers(&self) -> (f64, f64, Complex64) {
        let uu = self.u[0].norm_sqr() + self.u[1].norm_sqr() + self.su * self.su;
        let vv = self.v[0].norm_sqr() + self.v[1].norm_sqr() + self.sv * self.sv;
        (
            uu,
            vv,
            self.u[0] * self.v[0].conj() + self.u[1] * self.v[1].conj(),
        )
    }

    /// `I(Y; S | Ytil)`.
    fn info(&self, corr: Complex64) -> f64 {
        let (uu, vv, w) = self.powers();
        let cross = (w + corr * self.su * self.sv).norm_sqr();
        let noise = self.su * self.su * (1.0 - corr.norm_sqr());
        ((uu * vv - cross) / (vv * noise)).log2().max(0.0)
    }

    /// The coupling minimizing [`Self::info`]. Its phase aligns the noise
    /// cross term with the signal cross term `w`; its magnitude `t` is the
    /// root in `[0, 1]` of `a s t^2 - (D - a^2 - s^2) t + a s = 0` with
    /// `a = |w|`, `s = su sv`, `D = E|Y|^2 E|Ytil|^2`.
    fn worst_corr(&self) -> Complex64 {
        let (uu, vv, w) = self.powers();
        let (a, s) = (w.norm(), self.su * self.sv);
        if a * s == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let b = uu * vv - a * a - s * s;
        let disc = (b * b - 4.0 * a * a * s * s).max(0.0);
        // Smaller root, written to avoid cancellation.
        let t = (2.0 * a * s / (b + disc.sqrt())).min(R_EDGE);
        w / a * t
    }
}

fn pair_a(m: &ChannelModel, c: &InputCoeffs) -> SurrogatePair {
    let (s1, s2) = (signal_row(m, c, 0), signal_row(m, c, 1));
    SurrogatePair {
        u: [s1[0], s1[2]],
        v: [s2[0], s2[2]],
        su: m.noise_std[0],
        sv: m.noise_std[1],
    }
}

/// Pair for the second sum bound; its coupling is `conj(r21)`.
fn pair_b(m: &ChannelModel, c: &InputCoeffs) -> SurrogatePair {
    let (s1, s2) = (signal_row(m, c, 0), signal_row(m, c, 1));
    SurrogatePair {
        u: [s2[1], s2[2]],
        v: [s1[1], s1[2]],
        su: m.noise_std[1],
        sv: m.noise_std[0],
    }
}

fn total_snr(m: &ChannelModel, c: &InputCoeffs, rx: usize) -> f64 {
    let n = m.noise_std[rx];
    signal_row(m, c, rx)
        .iter()
        .map(|v| v.norm_sqr())
        .sum::<f64>()
        / (n * n)
}

/// Near `|r| = 1` the 2x2 form loses precision; the log-det engine handles it.
const CLOSED_FORM_EDGE: f64 = 1e-10;

/// `I(Y2; X1,X2,Xc) + I(Y1; X1,Xc | Ytil2, X2)`.
pub fn sato_sum_a(m: &ChannelModel, c: &InputCoeffs, r12: NoiseCorr) -> Result<f64> {
    let r = r12.value();
    if 1.0 - r.norm_sqr() < CLOSED_FORM_EDGE {
        return sato_sum_a_logdet(m, c, r12);
    }
    Ok(cap0(total_snr(m, c, 1)) + pair_a(m, c).info(r))
}

/// `I(Y1; X1,X2,Xc) + I(Y2; X2,Xc | Ytil1, X1)`.
pub fn sato_sum_b(m: &ChannelModel, c: &InputCoeffs, r21: NoiseCorr) -> Result<f64> {
    let r = r21.value();
    if 1.0 - r.norm_sqr() < CLOSED_FORM_EDGE {
        return sato_sum_b_logdet(m, c, r21);
    }
    Ok(cap0(total_snr(m, c, 0)) + pair_b(m, c).info(r.conj()))
}

fn sato_sum_a_logdet(m: &ChannelModel, c: &InputCoeffs, r12: NoiseCorr) -> Result<f64> {
    let k = cov(m, c, r12);
    Ok(mutual_info_y(&k, Var::Y2, &ALL, &[])?
        + mutual_info_y(&k, Var::Y1, &[Var::X1, Var::Xc], &[Var::Ytil2, Var::X2])?)
}

fn sato_sum_b_logdet(m: &ChannelModel, c: &InputCoeffs, r21: NoiseCorr) -> Result<f64> {
    let k = cov(m, c, r21);
    Ok(mutual_info_y(&k, Var::Y1, &ALL, &[])?
        + mutual_info_y(&k, Var::Y2, &[Var::X2, Var::Xc], &[Var::Ytil1, Var::X1])?)
}

fn single_rate_bounds(m: &ChannelModel, c: &InputCoeffs) -> Result<(f64, f64)> {
    let k = LinearModel::with_inputs(m, c, NoiseCorr::ZERO, false).covariance();
    Ok((
        mutual_info_y(&k, Var::Y1, &[Var::X1, Var::Xc], &[Var::X2])?,
        mutual_info_y(&k, Var::Y2, &[Var::X2, Var::Xc], &[Var::X1])?,
    ))
}

/// The four Sato-type bounds at fixed input and noise correlations.
pub fn sato_polytope(g: &ChannelGains, p: &SatoParams) -> Result<Polygon> {
    sato_polytope_model(&g.model(), p)
}

pub fn sato_polytope_model(m: &ChannelModel, p: &SatoParams) -> Result<Polygon> {
    let (r1, r2) = single_rate_bounds(m, &p.coeffs)?;
    Polygon::new(vec![
        HalfPlane::r1(r1),
        HalfPlane::r2(r2),
        HalfPlane::sum(sato_sum_a(m, &p.coeffs, p.r12)?),
        HalfPlane::sum(sato_sum_b(m, &p.coeffs, p.r21)?),
    ])
}

/// Largest coupling magnitude used, keeping the surrogate noise nondegenerate.
const R_EDGE: f64 = 1.0 - 1e-6;

/// The tightest Sato-type polytope at fixed input correlation, with the
/// minimizing noise couplings.
pub fn sato_worst_noise(m: &ChannelModel, c: &InputCoeffs) -> Result<(SatoParams, Polygon)> {
    let r12 = NoiseCorr::new(pair_a(m, c).worst_corr())?;
    let r21 = NoiseCorr::new(pair_b(m, c).worst_corr().conj())?;
    let p = SatoParams {
        coeffs: *c,
        r12,
        r21,
    };
    Ok((p, sato_polytope_model(m, &p)?))
}

/// Union over inputs of the noise-minimized Sato polytope.
pub fn sato_frontier(g: &ChannelGains, n_dir: usize, cfg: &OptimizerConfig) -> Result<Frontier> {
    sato_frontier_model(&g.model(), InputMode::for_gains(g), n_dir, cfg)
}

pub fn sato_frontier_model(
    m: &ChannelModel,
    mode: InputMode,
    n_dir: usize,
    cfg: &OptimizerConfig,
) -> Result<Frontier> {
    let m = *m;
    let ev = ParamFamily::new(
        mode.domain(),
        move |p: &[f64]| -> Result<Box<dyn Support>> {
            Ok(Box::new(
                sato_worst_noise(&m, &InputCoeffs::from_params(p))?.1,
            ))
        },
    );
    Ok(frontier(&ev, n_dir, cfg, "sato")?.with_validity(Validity::Valid))
}

/// `|h + conj(beta) hc|^2` style received amplitude.
fn amp2(h: Complex64, beta: Complex64, hc: f64) -> f64 {
    (h + beta.conj() * hc).norm_sqr()
}

/// Closed-form bounds under strong interference at Rx 1: the two single-rate
/// bounds and the sum rate decodable at destination 1.
pub fn strong_rx1_outer(g: &ChannelGains, c: &InputCoeffs) -> Result<Polygon> {
    let k = c.residual();
    let a11 = amp2(Complex64::new(g.h11, 0.0), c.beta1, g.h1c);
    let a12 = amp2(g.h12, c.beta2, g.h1c);
    let a22 = amp2(Complex64::new(g.h22, 0.0), c.beta2, g.h2c);
    Polygon::new(vec![
        HalfPlane::r1(cap0(a11 + g.h1c * g.h1c * k)),
        HalfPlane::r2(cap0(a22 + g.h2c * g.h2c * k)),
        HalfPlane::sum(cap0(a11 + a12 + g.h1c * g.h1c * k)),
    ])
}

fn swap_polygon(p: &Polygon) -> Result<Polygon> {
    Polygon::new(
        p.bounds()
            .iter()
            .map(|h| HalfPlane::new(h.a2, h.a1, h.b))
            .collect(),
    )
}

/// [`strong_rx1_outer`] with the roles of the users exchanged.
pub fn strong_rx2_outer(g: &ChannelGains, c: &InputCoeffs) -> Result<Polygon> {
    swap_polygon(&strong_rx1_outer(&g.swap(), &c.swap())?)
}

/// Bounds under strong interference at both destinations: both single-rate
/// bounds and the sum rate at each destination.
pub fn strong_both_region(g: &ChannelGains, c: &InputCoeffs) -> Result<Polygon> {
    let one = strong_rx1_outer(g, c)?;
    let two = strong_rx2_outer(g, c)?;
    let mut bounds = one.bounds().to_vec();
    bounds.extend(two.bounds().iter().filter(|h| h.a1 > 0.0 && h.a2 > 0.0));
    Polygon::new(bounds)
}

/// Log-det versions of the strong-interference bounds, usable on channels
/// that are not in standard form.
pub fn strong_rx1_outer_model(m: &ChannelModel, c: &InputCoeffs) -> Result<Polygon> {
    let k = LinearModel::with_inputs(m, c, NoiseCorr::ZERO, false).covariance();
    Polygon::new(vec![
        HalfPlane::r1(mutual_info_y(&k, Var::Y1, &[Var::X1, Var::Xc], &[Var::X2])?),
        HalfPlane::r2(mutual_info_y(&k, Var::Y2, &[Var::X2, Var::Xc], &[Var::X1])?),
        HalfPlane::sum(mutual_info_y(&k, Var::Y1, &ALL, &[])?),
    ])
}

pub fn strong_rx2_outer_model(m: &ChannelModel, c: &InputCoeffs) -> Result<Polygon> {
    swap_polygon(&strong_rx1_outer_model(&m.swap(), &c.swap())?)
}

pub fn strong_both_region_model(m: &ChannelModel, c: &InputCoeffs) -> Result<Polygon> {
    let k = LinearModel::with_inputs(m, c, NoiseCorr::ZERO, false).covariance();
    let mut b = strong_rx1_outer_model(m, c)?.bounds().to_vec();
    b.push(HalfPlane::sum(mutual_info_y(&k, Var::Y2, &ALL, &[])?));
    Polygon::new(b)
}

/// Parameters of the degraded weak-interference bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakParams {
    pub alpha: f64,
    pub coeffs: InputCoeffs,
}

impl WeakParams {
    pub fn new(alpha: f64, coeffs: InputCoeffs) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        let s = coeffs.beta1.norm_sqr() + coeffs.beta2.norm_sqr();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "|beta1|^2 + |beta2|^2 must equal 1, got {s}"
            )));
        }
        Ok(Self { alpha, coeffs })
    }

    /// `beta1 = cos(theta) e^{j phi1}`, `beta2 = sin(theta) e^{j phi2}`.
    pub fn from_angles(alpha: f64, theta: f64, phi1: f64, phi2: f64) -> Result<Self> {
        Self::new(
            alpha,
            InputCoeffs {
                beta1: Complex64::from_polar(theta.cos(), phi1),
                beta2: Complex64::from_polar(theta.sin(), phi2),
            },
        )
    }
}

/// Degradedness factor used by the weak-interference bound. Besides the
/// general test this admits `h11 = h21 = 0` (no direct link for user 1),
/// where only the relay gains fix the ratio.
pub fn degraded_factor(g: &ChannelGains) -> Option<f64> {
    if let Some(rho) = regimes::degraded_rho(g) {
        return Some(rho);
    }
    if g.h11 == 0.0 && g.h21 == Complex64::new(0.0, 0.0) && g.h1c > 0.0 {
        let rho = g.h2c / g.h1c;
        return (rho <= 1.0).then_some(rho);
    }
    None
}

/// The weak-interference outer bound for a degraded channel with factor `rho`.
pub fn weak_degraded_outer(g: &ChannelGains, rho: f64, p: &WeakParams) -> Result<Polygon> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!(
            "degradedness factor must lie in [0, 1], got {rho}"
        )));
    }
    let (b1, b2) = (p.coeffs.beta1, p.coeffs.beta2);
    let e = amp2(Complex64::new(g.h11, 0.0), b1, g.h1c);
    let d = amp2(Complex64::new(g.h22, 0.0), b2, rho * g.h1c);
    let r2 = rho * rho;
    Polygon::new(vec![
        HalfPlane::r1(cap0(e * p.alpha)),
        HalfPlane::r2(cap0(r2 * e + d) - cap0(r2 * e * p.alpha)),
        HalfPlane::r2(cap0(d)),
    ])
}

/// Union over `alpha` and unit-norm `(beta1, beta2)`. Parameters are
/// `(alpha, theta)` in real mode and `(alpha, theta, phi1, phi2)` in complex mode.
pub fn weak_degraded_frontier(
    g: &ChannelGains,
    mode: InputMode,
    n_dir: usize,
    cfg: &OptimizerConfig,
) -> Result<Frontier> {
    let rho = degraded_factor(g).ok_or_else(|| {
        Error::Precondition(
            "the weak-interference bound needs a degraded channel (h21/h11 = h2c/h1c in [0, 1])"
                .into(),
        )
    })?;
    let g = *g;
    let pi = std::f64::consts::PI;
    let mut domain = vec![(0.0, 1.0), (-pi, pi)];
    if mode == InputMode::Complex {
        domain.extend([(-pi, pi), (-pi, pi)]);
    }
    let ev = ParamFamily::new(domain, move |p: &[f64]| -> Result<Box<dyn Support>> {
        let (phi1, phi2) = if p.len() == 4 {
            (p[2], p[3])
        } else {
            (0.0, 0.0)
        };
        let w = WeakParams::from_angles(p[0], p[1], phi1, phi2)?;
        Ok(Box::new(weak_degraded_outer(&g, rho, &w)?))
    });
    Ok(frontier(&ev, n_dir, cfg, "weak-degraded")?.with_validity(Validity::Valid))
}

/// Outer bounds selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OuterBound {
    Sato,
    StrongRx1,
    StrongRx2,
    StrongBoth,
    WeakDegraded,
}

impl OuterBound {
    pub const ALL: [OuterBound; 5] = [
        OuterBound::Sato,
        OuterBound::StrongRx1,
        OuterBound::StrongRx2,
        OuterBound::StrongBoth,
        OuterBound::WeakDegraded,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OuterBound::Sato => "sato",
            OuterBound::StrongRx1 => "strong-rx1",
            OuterBound::StrongRx2 => "strong-rx2",
            OuterBound::StrongBoth => "strong-both",
            OuterBound::WeakDegraded => "weak-degraded",
        }
    }

    /// Whether the bound is a valid outer bound for this channel.
    pub fn valid_for(&self, g: &ChannelGains) -> bool {
        match self {
            OuterBound::Sato => true,
            OuterBound::StrongRx1 => regimes::is_strong_at_rx1(g),
            OuterBound::StrongRx2 => regimes::is_strong_at_rx2(g),
            OuterBound::StrongBoth => regimes::is_strong_both(g),
            OuterBound::WeakDegraded => degraded_factor(g).is_some(),
        }
    }
}

impl FromStr for OuterBound {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OuterBound::ALL
            .iter()
            .copied()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown bound '{s}' (expected one of sato, strong-rx1, strong-rx2, strong-both, weak-degraded)")))
    }
}

/// Frontier of a closed-form outer bound, flagged with its validity.
pub fn outer_frontier(
    g: &ChannelGains,
    bound: OuterBound,
    n_dir: usize,
    cfg: &OptimizerConfig,
) -> Result<Frontier> {
    let mode = InputMode::for_gains(g);
    let flag = if bound.valid_for(g) {
        Validity::Valid
    } else {
        Validity::Invalid
    };
    let g = *g;
    let closed = |f: fn(&ChannelGains, &InputCoeffs) -> Result<Polygon>| -> Result<Frontier> {
        let ev = ParamFamily::new(
            mode.domain(),
            move |p: &[f64]| -> Result<Box<dyn Support>> {
                Ok(Box::new(f(&g, &InputCoeffs::from_params(p))?))
            },
        );
        frontier(&ev, n_dir, cfg, bound.name())
    };
    let f = match bound {
        OuterBound::Sato => sato_frontier(&g, n_dir, cfg)?,
        OuterBound::StrongRx1 => closed(strong_rx1_outer)?,
        OuterBound::StrongRx2 => closed(strong_rx2_outer)?,
        OuterBound::StrongBoth => closed(strong_both_region)?,
        OuterBound::WeakDegraded => weak_degraded_frontier(&g, mode, n_dir, cfg)?,
    };
    Ok(f.with_validity(flag))
}

/// Frontier of a log-det bound on a channel given by its model. The
/// degraded weak-interference bound is only defined in standard form.
pub fn outer_frontier_model(
    m: &ChannelModel,
    bound: OuterBound,
    n_dir: usize,
    cfg: &OptimizerConfig,
) -> Result<Frontier> {
    let mode = InputMode::for_model(m);
    let m = *m;
    let via = |f: fn(&ChannelModel, &InputCoeffs) -> Result<Polygon>| -> Result<Frontier> {
        let ev = ParamFamily::new(
            mode.domain(),
            move |p: &[f64]| -> Result<Box<dyn Support>> {
                Ok(Box::new(f(&m, &InputCoeffs::from_params(p))?))
            },
        );
        frontier(&ev, n_dir, cfg, bound.name())
    };
    match bound {
        OuterBound::Sato => sato_frontier_model(&m, mode, n_dir, cfg),
        OuterBound::StrongRx1 => via(strong_rx1_outer_model),
        OuterBound::StrongRx2 => via(strong_rx2_outer_model),
        OuterBound::StrongBoth => via(strong_both_region_model),
        OuterBound::WeakDegraded => Err(Error::Precondition(
            "the degraded weak-interference bound is evaluated on standard-form gains only".into(),
        )),
    }
}
