//! Achievable regions.
//!
//! Four Gaussian sub-schemes of the rate-split inner bound are available
//! both in closed form and as rate-split terms for the LP projection:
//!
//! | scheme | sources send | relay sends |
//! |---|---|---|
//! | all-common | common `X1`, `X2` | common `Xc` |
//! | all-private | private `X1`, `X2` | dirty-paper codewords `U1pb`, `U2pb` |
//! | one-common-one-private | private `X1`, common `X2` | private `Xc` for user 1 |
//! | common-sources-private-relay | common `X1`, `X2` | private `Xc` for user 1 |
//!
//! The `general` scheme is the union of the four, computed through the LP.
//! `jiang` is the same union with the relay's common codeword disabled.

use crate::error::{Error, Result};
use crate::gauss::{
    axpy, mutual_info, unit, ChannelGains, ChannelModel, InputCoeffs, InputMode, JointCovariance,
    LinearModel, NoiseCorr, Source, Var,
};
use crate::lp::{jiang_mask, DecodeBound, DecodeTerms, LpRegion, MITerms, SchemeMask, SubRate};
use crate::outer::{outer_frontier, OuterBound};
use crate::regimes;
use crate::regions::{
    frontier, Frontier, HalfPlane, OptimizerConfig, ParamFamily, Polygon, Support, Validity,
    Witness,
};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

/// Gaussian realization of the all-private scheme:
/// `Xc = b1 X1 + b2 X2 + c1 V1 + c2 V2`, `U1pb = c1 V1 + lam1 X2`,
/// `U2pb = c2 V2 + lam2 X1`, with `V1`, `V2` fresh unit Gaussians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussAssign {
    pub b1: Complex64,
    pub b2: Complex64,
    pub c1: f64,
    pub c2: f64,
    pub lam1: Complex64,
    pub lam2: Complex64,
}

impl GaussAssign {
    /// Assignment with explicit precoding coefficients.
    pub fn new(
        b1: Complex64,
        b2: Complex64,
        c1: f64,
        c2: f64,
        lam1: Complex64,
        lam2: Complex64,
    ) -> Result<Self> {
        let p = b1.norm_sqr() + b2.norm_sqr() + c1 * c1 + c2 * c2;
        if c1 < 0.0
            || c2 < 0.0
            || p > 1.0 + 1e-12
            || ![p, lam1.norm(), lam2.norm()].iter().all(|v| v.is_finite())
        {
            return Err(Error::Domain(format!(
                "relay assignment needs c1, c2 >= 0 and unit total power, got power {p}"
            )));
        }
        Ok(Self {
            b1,
            b2,
            c1,
            c2,
            lam1,
            lam2,
        })
    }

    /// Assignment whose precoding coefficients are Costa's MMSE choice at
    /// each destination, treating the other codeword as noise.
    pub fn mmse(m: &ChannelModel, b1: Complex64, b2: Complex64, c1: f64, c2: f64) -> Result<Self> {
        let a = Self::new(
            b1,
            b2,
            c1,
            c2,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        )?;
        let lam = |k: usize, own: f64, other: f64, known: Complex64| -> Complex64 {
            let hc = m.gain[k][2];
            let p = hc.norm_sqr() * own * own;
            let n = hc.norm_sqr() * other * other + m.noise_std[k].powi(2);
            if hc.norm() == 0.0 || p == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            known * (p / (p + n)) / hc
        };
        // Known interference at destination 1 is X2 through the direct and relay paths.
        let s1 = m.gain[0][1] + m.gain[0][2] * b2;
        let s2 = m.gain[1][0] + m.gain[1][2] * b1;
        Ok(Self {
            lam1: lam(0, c1, c2, s1),
            lam2: lam(1, c2, c1, s2),
            ..a
        })
    }

    /// Maps a point of the all-private parameter box into an assignment:
    /// the input-correlation parameters of [`InputMode::domain`] followed by
    /// `(c1, c2)`, all scaled down together when the power exceeds one. The
    /// correlations are read as in [`InputCoeffs`], so `b_i = conj(beta_i)`.
    pub fn from_params(m: &ChannelModel, p: &[f64]) -> Result<Self> {
        if p.len() != 4 && p.len() != 6 {
            return Err(Error::Usage(format!(
                "all-private parameters must have 4 or 6 entries, got {}",
                p.len()
            )));
        }
        let (b, c) = p.split_at(p.len() - 2);
        let b = InputCoeffs::from_params(b);
        let (c1, c2) = (c[0].max(0.0), c[1].max(0.0));
        let pow = b.beta1.norm_sqr() + b.beta2.norm_sqr() + c1 * c1 + c2 * c2;
        let s = if pow > 1.0 { 1.0 / pow.sqrt() } else { 1.0 };
        Self::mmse(m, b.beta1.conj() * s, b.beta2.conj() * s, c1 * s, c2 * s)
    }

    pub fn domain(mode: InputMode) -> Vec<(f64, f64)> {
        let mut d = mode.domain();
        d.extend([(0.0, 1.0), (0.0, 1.0)]);
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Aux {
    Absent,
    Is(Var),
}

use Aux::{Absent, Is};

/// One Gaussian distribution of the rate-split scheme: the auxiliaries are
/// either absent or equal to a modelled variable.
struct Assignment {
    cov: JointCovariance,
    u1c: Aux,
    u2c: Aux,
    u0cb: Aux,
    u1pb: Aux,
    u2pb: Aux,
    mask: SchemeMask,
}

/// `I(A; B | C)` after resolving auxiliaries. Variables already in `C` are
/// removed from `A` and `B`, which leaves the value unchanged.
fn info(cov: &JointCovariance, a: &[Aux], b: &[Aux], c: &[Aux]) -> Result<f64> {
    let flat = |xs: &[Aux]| -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for x in xs {
            if let Is(v) = x {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
        }
        out
    };
    let cv = flat(c);
    let keep = |xs: Vec<Var>| -> Vec<Var> { xs.into_iter().filter(|v| !cv.contains(v)).collect() };
    mutual_info(cov, &keep(flat(a)), &keep(flat(b)), &cv)
}

/// The four Gaussian scheme families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    AllCommon(InputCoeffs),
    AllPrivate(GaussAssign),
    OneCommonOnePrivate(InputCoeffs),
    CommonSourcesPrivateRelay(InputCoeffs),
}

impl Family {
    fn assignment(&self, m: &ChannelModel) -> Result<Assignment> {
        use SubRate::*;
        let x1 = Is(Var::X1);
        let x2 = Is(Var::X2);
        let xc = Is(Var::Xc);
        let coeffs_model = |c: &InputCoeffs| -> Result<JointCovariance> {
            let c = InputCoeffs::new(c.beta1, c.beta2)?;
            Ok(LinearModel::with_inputs(m, &c, NoiseCorr::ZERO, false).covariance())
        };
        Ok(match self {
            Family::AllCommon(c) => Assignment {
                cov: coeffs_model(c)?,
                u1c: x1,
                u2c: x2,
                u0cb: xc,
                u1pb: Absent,
                u2pb: Absent,
                mask: SchemeMask::pinning(&[
                    R1p, R2p, R1cb, R2cb, R1pb, R2pb, R0cbBin, R1pbBin, R2pbBin,
                ]),
            },
            Family::AllPrivate(a) => {
                let mut xcr = unit(Source::X1).map(|v| v * a.b1);
                axpy(&mut xcr, a.b2, &unit(Source::X2));
                axpy(&mut xcr, Complex64::new(a.c1, 0.0), &unit(Source::V1));
                axpy(&mut xcr, Complex64::new(a.c2, 0.0), &unit(Source::V2));
                let mut lm = LinearModel::with_relay(m, xcr, NoiseCorr::ZERO, false);
                let mut u1 = unit(Source::V1).map(|v| v * a.c1);
                axpy(&mut u1, a.lam1, &unit(Source::X2));
                let mut u2 = unit(Source::V2).map(|v| v * a.c2);
                axpy(&mut u2, a.lam2, &unit(Source::X1));
                lm.set(Var::U1pb, u1).set(Var::U2pb, u2);
                Assignment {
                    cov: lm.covariance(),
                    u1c: Absent,
                    u2c: Absent,
                    u0cb: Absent,
                    u1pb: Is(Var::U1pb),
                    u2pb: Is(Var::U2pb),
                    mask: SchemeMask::pinning(&[R1c, R2c, R1cb, R2cb, R1pb, R2pb, R0cbBin]),
                }
            }
            Family::OneCommonOnePrivate(c) => Assignment {
                cov: coeffs_model(c)?,
                u1c: Absent,
                u2c: x2,
                u0cb: x2,
                u1pb: xc,
                u2pb: Absent,
                mask: SchemeMask::pinning(&[R1c, R2p, R1cb, R2cb, R2pb, R0cbBin, R2pbBin]),
            },
            Family::CommonSourcesPrivateRelay(c) => Assignment {
                cov: coeffs_model(c)?,
                u1c: x1,
                u2c: x2,
                u0cb: x2,
                u1pb: xc,
                u2pb: Absent,
                // Destination 2 still decodes X1 non-uniquely.
                mask: SchemeMask::pinning(&[R1p, R2p, R1cb, R2cb, R2pb, R0cbBin, R2pbBin])
                    .keeping(1, DecodeBound::PrivateCross),
            },
        })
    }
}

fn dest_terms(a: &Assignment, d: usize) -> Result<DecodeTerms> {
    let (y, x, uc, vc, upb) = if d == 0 {
        (Is(Var::Y1), Is(Var::X1), a.u1c, a.u2c, a.u1pb)
    } else {
        (Is(Var::Y2), Is(Var::X2), a.u2c, a.u1c, a.u2pb)
    };
    let u0 = a.u0cb;
    let k = &a.cov;
    let iy = |t: &[Aux], c: &[Aux]| info(k, &[y], t, c);
    let mut bounds = [0.0; 8];
    for b in DecodeBound::ALL {
        bounds[b as usize] = match b {
            DecodeBound::CommonPrivateCross => iy(&[uc, vc, x, u0, upb], &[])?,
            DecodeBound::CommonPrivate => iy(&[uc, x, u0, upb], &[vc])?,
            DecodeBound::PrivateCross => iy(&[vc, x, u0, upb], &[uc])?,
            DecodeBound::Private => iy(&[x, u0, upb], &[uc, vc])?,
            DecodeBound::Cross => iy(&[vc, u0, upb], &[uc, x])?,
            DecodeBound::RelayCommon => iy(&[u0, upb], &[uc, vc, x])?,
            DecodeBound::PrivateRelay => iy(&[x, upb], &[uc, vc, u0])?,
            DecodeBound::RelayPrivate => iy(&[upb], &[uc, vc, x, u0])?,
        };
    }
    Ok(DecodeTerms {
        offset: info(k, &[u0], &[x], &[uc, vc])?,
        bounds,
    })
}

/// Rate-split terms of a scheme family on a standard-form channel.
pub fn mi_terms_for_scheme(g: &ChannelGains, family: &Family) -> Result<MITerms> {
    mi_terms_for_model(&g.model(), family)
}

pub fn mi_terms_for_model(m: &ChannelModel, family: &Family) -> Result<MITerms> {
    let a = family.assignment(m)?;
    let (x1, x2) = (Is(Var::X1), Is(Var::X2));
    let k = &a.cov;
    let b1 = info(k, &[x2], &[a.u1pb], &[a.u1c, x1, a.u2c, a.u0cb])?;
    let b2 = info(k, &[x1], &[a.u2pb], &[a.u1c, x2, a.u2c, a.u0cb])?;
    let b12 = b1 + b2 + info(k, &[a.u1pb], &[a.u2pb], &[a.u1c, x1, a.u2c, x2, a.u0cb])?;
    Ok(MITerms {
        binning: [info(k, &[x1, x2], &[a.u0cb], &[a.u1c, a.u2c])?, b1, b2, b12],
        dest: [dest_terms(&a, 0)?, dest_terms(&a, 1)?],
        mask: a.mask,
    })
}

fn y_info(k: &JointCovariance, y: Var, a: &[Var], c: &[Var]) -> Result<f64> {
    mutual_info(k, &[y], a, c)
}

fn coeff_cov(m: &ChannelModel, c: &InputCoeffs) -> Result<JointCovariance> {
    let c = InputCoeffs::new(c.beta1, c.beta2)?;
    Ok(LinearModel::with_inputs(m, &c, NoiseCorr::ZERO, false).covariance())
}

const ALL: [Var; 3] = [Var::X1, Var::X2, Var::Xc];

/// All messages common: a compound multiple-access region.
pub fn region_all_common(g: &ChannelGains, c: &InputCoeffs) -> Result<Polygon> {
    region_all_common_model(&g.model(), c)
}

pub fn region_all_common_model(m: &ChannelModel, c: &InputCoeffs) -> Result<Polygon> {
    let k = coeff_cov(m, c)?;
    Polygon::new(vec![
        HalfPlane::r1(y_info(&k, Var::Y1, &[Var::X1, Var::Xc], &[Var::X2])?),
        HalfPlane::r2(y_info(&k, Var::Y2, &[Var::X2, Var::Xc], &[Var::X1])?),
        HalfPlane::sum(y_info(&k, Var::Y1, &ALL, &[])?),
        HalfPlane::sum(y_info(&k, Var::Y2, &ALL, &[])?),
    ])
}

/// All messages private, with the relay dirty-paper coding against the
/// interfering source at each destination.
pub fn region_all_private(g: &ChannelGains, a: &GaussAssign) -> Result<Polygon> {
    region_all_private_model(&g.model(), a)
}

pub fn region_all_private_model(m: &ChannelModel, a: &GaussAssign) -> Result<Polygon> {
    let t = Family::AllPrivate(*a).assignment(m)?;
    let k = &t.cov;
    let (x1, x2, u1, u2) = (Is(Var::X1), Is(Var::X2), Is(Var::U1pb), Is(Var::U2pb));
    let i1 = info(k, &[Is(Var::Y1)], &[x1, u1], &[])?;
    let i2 = info(k, &[Is(Var::Y2)], &[x2, u2], &[])?;
    let b1 = info(k, &[x2], &[u1], &[x1])?;
    let b2 = info(k, &[x1], &[u2], &[x2])?;
    let b12 = info(k, &[u1], &[u2], &[x1, x2])?;
    Polygon::new(vec![
        HalfPlane::r1(i1 - b1),
        HalfPlane::r2(i2 - b2),
        HalfPlane::sum(i1 + i2 - b1 - b2 - b12),
    ])
}

/// User 1 private with relay help, user 2 common.
pub fn region_one_common_one_private(g: &ChannelGains, c: &InputCoeffs) -> Result<Polygon> {
    region_one_common_one_private_model(&g.model(), c)
}

pub fn region_one_common_one_private_model(m: &ChannelModel, c: &InputCoeffs) -> Result<Polygon> {
    let k = coeff_cov(m, c)?;
    Polygon::new(vec![
        HalfPlane::r1(y_info(&k, Var::Y1, &[Var::X1, Var::Xc], &[Var::X2])?),
        HalfPlane::r2(y_info(&k, Var::Y2, &[Var::X2], &[])?),
        HalfPlane::r2(y_info(&k, Var::Y1, &[Var::Xc, Var::X2], &[Var::X1])?),
        HalfPlane::sum(y_info(&k, Var::Y1, &ALL, &[])?),
    ])
}

/// Both sources common, relay private for user 1. Eight bounds, including
/// one on `R1 + 2 R2`.
pub fn region_common_sources_private_relay(g: &ChannelGains, c: &InputCoeffs) -> Result<Polygon> {
    region_common_sources_private_relay_model(&g.model(), c)
}

pub fn region_common_sources_private_relay_model(
    m: &ChannelModel,
    c: &InputCoeffs,
) -> Result<Polygon> {
    let k = coeff_cov(m, c)?;
    let (x1, x2, xc) = (Var::X1, Var::X2, Var::Xc);
    let own = y_info(&k, Var::Y1, &[x1, xc], &[x2])?;
    let relay = y_info(&k, Var::Y1, &[xc], &[x1, x2])?;
    let cross1 = y_info(&k, Var::Y1, &[x2, xc], &[x1])?;
    let sum1 = y_info(&k, Var::Y1, &ALL, &[])?;
    let x1_at2 = y_info(&k, Var::Y2, &[x1], &[x2])?;
    let x2_at2 = y_info(&k, Var::Y2, &[x2], &[x1])?;
    let both_at2 = y_info(&k, Var::Y2, &[x1, x2], &[])?;
    Polygon::new(vec![
        HalfPlane::r1(own),
        HalfPlane::r1(relay + x1_at2),
        HalfPlane::r2(cross1),
        HalfPlane::r2(x2_at2),
        HalfPlane::sum(sum1),
        HalfPlane::sum(cross1 + x1_at2),
        HalfPlane::sum(relay + both_at2),
        HalfPlane::new(1.0, 2.0, cross1 + both_at2),
    ])
}

/// Achievable schemes selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    AllCommon,
    AllPrivate,
    OneCommonOnePrivate,
    CommonSourcesPrivateRelay,
    General,
    Jiang,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::AllCommon,
        Scheme::AllPrivate,
        Scheme::OneCommonOnePrivate,
        Scheme::CommonSourcesPrivateRelay,
        Scheme::General,
        Scheme::Jiang,
    ];

    /// The four closed-form sub-schemes.
    pub const FAMILIES: [Scheme; 4] = [
        Scheme::AllCommon,
        Scheme::AllPrivate,
        Scheme::OneCommonOnePrivate,
        Scheme::CommonSourcesPrivateRelay,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::AllCommon => "all-common",
            Scheme::AllPrivate => "all-private",
            Scheme::OneCommonOnePrivate => "one-common-one-private",
            Scheme::CommonSourcesPrivateRelay => "common-sources-private-relay",
            Scheme::General => "general",
            Scheme::Jiang => "jiang",
        }
    }

    /// Parameter box of a sub-scheme.
    fn domain(&self, mode: InputMode) -> Vec<(f64, f64)> {
        match self {
            Scheme::AllPrivate => GaussAssign::domain(mode),
            _ => mode.domain(),
        }
    }

    /// The scheme family at a parameter point. Only for the four sub-schemes.
    pub fn family(&self, m: &ChannelModel, p: &[f64]) -> Result<Family> {
        Ok(match self {
            Scheme::AllCommon => Family::AllCommon(InputCoeffs::from_params(p)),
            Scheme::AllPrivate => Family::AllPrivate(GaussAssign::from_params(m, p)?),
            Scheme::OneCommonOnePrivate => Family::OneCommonOnePrivate(InputCoeffs::from_params(p)),
            Scheme::CommonSourcesPrivateRelay => {
                Family::CommonSourcesPrivateRelay(InputCoeffs::from_params(p))
            }
            Scheme::General | Scheme::Jiang => {
                return Err(Error::Usage(format!(
                    "'{}' is a union of schemes, not a single family",
                    self.name()
                )))
            }
        })
    }

    /// The closed-form region of a sub-scheme at a parameter point.
    pub fn closed_form(&self, m: &ChannelModel, p: &[f64]) -> Result<Polygon> {
        match self.family(m, p)? {
            Family::AllCommon(c) => region_all_common_model(m, &c),
            Family::AllPrivate(a) => region_all_private_model(m, &a),
            Family::OneCommonOnePrivate(c) => region_one_common_one_private_model(m, &c),
            Family::CommonSourcesPrivateRelay(c) => {
                region_common_sources_private_relay_model(m, &c)
            }
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Scheme::ALL.iter().map(|x| x.name()).collect();
                Error::Usage(format!(
                    "unknown scheme '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Frontier of a sub-scheme computed through its closed form.
fn closed_frontier(
    m: &ChannelModel,
    mode: InputMode,
    s: Scheme,
    n: usize,
    cfg: &OptimizerConfig,
) -> Result<Frontier> {
    let m = *m;
    let ev = ParamFamily::new(
        s.domain(mode),
        move |p: &[f64]| -> Result<Box<dyn Support>> { Ok(Box::new(s.closed_form(&m, p)?)) },
    );
    frontier(&ev, n, cfg, s.name())
}

/// Frontier of a sub-scheme computed through the rate-split LP.
pub fn lp_frontier(
    m: &ChannelModel,
    mode: InputMode,
    s: Scheme,
    jiang: bool,
    n: usize,
    cfg: &OptimizerConfig,
) -> Result<Frontier> {
    let m = *m;
    let ev = ParamFamily::new(
        s.domain(mode),
        move |p: &[f64]| -> Result<Box<dyn Support>> {
            let mi = mi_terms_for_model(&m, &s.family(&m, p)?)?;
            let mi = if jiang { jiang_mask(&mi) } else { mi };
            Ok(Box::new(LpRegion::new(mi)?))
        },
    );
    frontier(&ev, n, cfg, s.name())
}

/// Per-direction maximum of frontiers sampled at the same directions. The
/// witness parameters are prefixed by the index of the winning frontier.
fn union(parts: &[Frontier], source: &str) -> Result<Frontier> {
    let first = &parts[0];
    let mut out = Frontier::new(first.directions.clone(), vec![0.0; first.len()], source)?;
    for (j, f) in parts.iter().enumerate() {
        for i in 0..f.len() {
            if j == 0 || f.values[i] > out.values[i] {
                out.values[i] = f.values[i];
                out.witnesses[i] = f.witnesses[i].as_ref().map(|w| {
                    let mut params = vec![j as f64];
                    params.extend(&w.params);
                    Witness {
                        point: w.point,
                        params,
                    }
                });
            }
        }
    }
    out.cleanup();
    Ok(out)
}

/// Frontier of an achievable scheme on a standard-form channel.
pub fn inner_frontier(
    g: &ChannelGains,
    s: Scheme,
    n: usize,
    cfg: &OptimizerConfig,
) -> Result<Frontier> {
    inner_frontier_model(&g.model(), InputMode::for_gains(g), s, n, cfg)
}

pub fn inner_frontier_model(
    m: &ChannelModel,
    mode: InputMode,
    s: Scheme,
    n: usize,
    cfg: &OptimizerConfig,
) -> Result<Frontier> {
    let f = match s {
        Scheme::General | Scheme::Jiang => {
            let jiang = s == Scheme::Jiang;
            let parts = Scheme::FAMILIES
                .iter()
                .map(|f| lp_frontier(m, mode, *f, jiang, n, cfg))
                .collect::<Result<Vec<_>>>()?;
            union(&parts, s.name())?
        }
        _ => closed_frontier(m, mode, s, n, cfg)?,
    };
    Ok(f.with_validity(Validity::Achievable))
}

/// The capacity region when a regime that pins it down applies: very strong
/// interference at either destination, or strong interference at both.
pub fn capacity_vsi(g: &ChannelGains, n: usize, cfg: &OptimizerConfig) -> Result<Option<Frontier>> {
    let bound = if regimes::is_vsi_at_rx1(g) {
        OuterBound::StrongRx1
    } else if regimes::is_vsi_at_rx2(g) {
        OuterBound::StrongRx2
    } else if regimes::is_strong_both(g) {
        OuterBound::StrongBoth
    } else {
        return Ok(None);
    };
    Ok(Some(
        outer_frontier(g, bound, n, cfg)?.with_validity(Validity::Capacity),
    ))
}
