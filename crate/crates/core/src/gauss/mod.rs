//! Gaussian channel representation and the log-determinant information engine.
//!
//! Everything here works in bits with the proper-complex convention, so the
//! capacity of a unit-noise scalar link with SNR `x` is `log2(1 + x)`.

mod covariance;
mod mi;

pub(crate) use covariance::{axpy, unit};
pub use covariance::{
    build_joint_covariance, JointCovariance, LinearModel, Row, Source, Var, N_SOURCES,
};
pub use mi::{mutual_info, mutual_info_y, EIGEN_FLOOR};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;

/// `log2(1 + x)`.
pub fn cap(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "cap: argument must be finite and >= 0, got {x}"
        )));
    }
    Ok((1.0 + x).log2())
}

/// Unchecked `log2(1 + x)` for closed forms whose argument is a sum of
/// squares; tiny negative round-off is clamped.
#[inline]
pub(crate) fn cap0(x: f64) -> f64 {
    (1.0 + x.max(0.0)).log2()
}

fn check_finite(name: &str, z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {z}")))
    }
}

/// Channel coefficients in standard form: unit powers, unit noise variances,
/// and the four direct/relay gains made real and nonnegative by phase rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelGains {
    pub h11: f64,
    pub h22: f64,
    pub h1c: f64,
    pub h2c: f64,
    pub h12: Complex64,
    pub h21: Complex64,
}

impl ChannelGains {
    pub fn new(
        h11: f64,
        h12: Complex64,
        h21: Complex64,
        h22: f64,
        h1c: f64,
        h2c: f64,
    ) -> Result<Self> {
        for (name, v) in [("h11", h11), ("h22", h22), ("h1c", h1c), ("h2c", h2c)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        check_finite("h12", h12)?;
        check_finite("h21", h21)?;
        Ok(Self {
            h11,
            h22,
            h1c,
            h2c,
            h12,
            h21,
        })
    }

    /// Real-valued channel. Argument order follows the matrix layout
    /// `(h11, h12, h21, h22, h1c, h2c)`.
    pub fn real(h11: f64, h12: f64, h21: f64, h22: f64, h1c: f64, h2c: f64) -> Result<Self> {
        Self::new(
            h11,
            Complex64::new(h12, 0.0),
            Complex64::new(h21, 0.0),
            h22,
            h1c,
            h2c,
        )
    }

    /// Exchanges the roles of the two source-destination pairs.
    pub fn swap(&self) -> Self {
        Self {
            h11: self.h22,
            h22: self.h11,
            h1c: self.h2c,
            h2c: self.h1c,
            h12: self.h21,
            h21: self.h12,
        }
    }

    pub fn is_real(&self) -> bool {
        self.h12.im == 0.0 && self.h21.im == 0.0
    }

    pub fn model(&self) -> ChannelModel {
        let r = |x: f64| Complex64::new(x, 0.0);
        ChannelModel {
            gain: [
                [r(self.h11), self.h12, r(self.h1c)],
                [self.h21, r(self.h22), r(self.h2c)],
            ],
            noise_std: [1.0, 1.0],
        }
    }

    /// Looks up a gain by its key (`h11`, `h12`, `h21`, `h22`, `h1c`, `h2c`).
    pub fn get(&self, key: &str) -> Result<Complex64> {
        let r = |x: f64| Complex64::new(x, 0.0);
        Ok(match key {
            "h11" => r(self.h11),
            "h22" => r(self.h22),
            "h1c" => r(self.h1c),
            "h2c" => r(self.h2c),
            "h12" => self.h12,
            "h21" => self.h21,
            _ => return Err(Error::Usage(format!("unknown gain key '{key}'"))),
        })
    }

    /// Returns a copy with one gain replaced; direct and relay gains must be real nonnegative.
    pub fn with(&self, key: &str, value: Complex64) -> Result<Self> {
        let mut g = *self;
        let real_nonneg = |v: Complex64| -> Result<f64> {
            if v.im != 0.0 || v.re < 0.0 {
                Err(Error::Domain(format!(
                    "{key} must be real and >= 0 in standard form, got {v}"
                )))
            } else {
                Ok(v.re)
            }
        };
        match key {
            "h11" => g.h11 = real_nonneg(value)?,
            "h22" => g.h22 = real_nonneg(value)?,
            "h1c" => g.h1c = real_nonneg(value)?,
            "h2c" => g.h2c = real_nonneg(value)?,
            "h12" => g.h12 = value,
            "h21" => g.h21 = value,
            _ => return Err(Error::Usage(format!("unknown gain key '{key}'"))),
        }
        Self::new(g.h11, g.h12, g.h21, g.h22, g.h1c, g.h2c)
    }
}

impl fmt::Display for ChannelGains {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "h11={} h12={} h21={} h22={} h1c={} h2c={}",
            self.h11, self.h12, self.h21, self.h22, self.h1c, self.h2c
        )
    }
}

/// A channel with arbitrary complex gains, transmit powers and noise variances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralChannel {
    pub g11: Complex64,
    pub g12: Complex64,
    pub g21: Complex64,
    pub g22: Complex64,
    pub g1c: Complex64,
    pub g2c: Complex64,
    pub p1: f64,
    pub p2: f64,
    pub pc: f64,
    pub s1sq: f64,
    pub s2sq: f64,
}

impl GeneralChannel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("P1", self.p1),
            ("P2", self.p2),
            ("Pc", self.pc),
            ("s1sq", self.s1sq),
            ("s2sq", self.s2sq),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        for (name, z) in [
            ("g11", self.g11),
            ("g12", self.g12),
            ("g21", self.g21),
            ("g22", self.g22),
            ("g1c", self.g1c),
            ("g2c", self.g2c),
        ] {
            check_finite(name, z)?;
        }
        Ok(())
    }

    /// The channel seen with unit-power normalised inputs.
    pub fn model(&self) -> Result<ChannelModel> {
        self.validate()?;
        let (a1, a2, ac) = (self.p1.sqrt(), self.p2.sqrt(), self.pc.sqrt());
        Ok(ChannelModel {
            gain: [
                [self.g11 * a1, self.g12 * a2, self.g1c * ac],
                [self.g21 * a1, self.g22 * a2, self.g2c * ac],
            ],
            noise_std: [self.s1sq.sqrt(), self.s2sq.sqrt()],
        })
    }
}

/// Phase rotations applied to the normalised inputs by [`to_standard_form`].
///
/// `X1 = X1n e^{j phi1}`, `X2 = X2n e^{j phi2}`, `Xc = Xcn`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardFormMap {
    pub phi1: f64,
    pub phi2: f64,
}

impl StandardFormMap {
    /// Maps input correlation coefficients from the normalised general frame
    /// to the standard frame.
    pub fn coeffs_to_standard(&self, c: &InputCoeffs) -> InputCoeffs {
        InputCoeffs {
            beta1: c.beta1 * Complex64::from_polar(1.0, self.phi1),
            beta2: c.beta2 * Complex64::from_polar(1.0, self.phi2),
        }
    }

    pub fn coeffs_from_standard(&self, c: &InputCoeffs) -> InputCoeffs {
        InputCoeffs {
            beta1: c.beta1 * Complex64::from_polar(1.0, -self.phi1),
            beta2: c.beta2 * Complex64::from_polar(1.0, -self.phi2),
        }
    }
}

/// Converts a general channel to the equivalent standard-form gains.
pub fn to_standard_form(ch: &GeneralChannel) -> Result<ChannelGains> {
    Ok(to_standard_form_with_map(ch)?.0)
}

/// [`to_standard_form`] that also returns the input rotation it applied.
pub fn to_standard_form_with_map(ch: &GeneralChannel) -> Result<(ChannelGains, StandardFormMap)> {
    ch.validate()?;
    let (s1, s2) = (ch.s1sq.sqrt(), ch.s2sq.sqrt());
    let (a1, a2, ac) = (ch.p1.sqrt(), ch.p2.sqrt(), ch.pc.sqrt());
    let (t11, t22, t1c, t2c) = (ch.g11.arg(), ch.g22.arg(), ch.g1c.arg(), ch.g2c.arg());
    // Receiver rotations cancel the relay phases; source rotations then
    // cancel the direct-link phases.
    let phi1 = t11 - t1c;
    let phi2 = t22 - t2c;
    let h12 = ch.g12 * (a2 / s1) * Complex64::from_polar(1.0, -t1c - phi2);
    let h21 = ch.g21 * (a1 / s2) * Complex64::from_polar(1.0, -t2c - phi1);
    let gains = ChannelGains::new(
        a1 * ch.g11.norm() / s1,
        h12,
        h21,
        a2 * ch.g22.norm() / s2,
        ac * ch.g1c.norm() / s1,
        ac * ch.g2c.norm() / s2,
    )?;
    Ok((gains, StandardFormMap { phi1, phi2 }))
}

/// A linear Gaussian channel over unit-power inputs `(X1, X2, Xc)`:
/// `Y_k = sum_j gain[k][j] X_j + noise_std[k] Z_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    pub gain: [[Complex64; 3]; 2],
    pub noise_std: [f64; 2],
}

impl ChannelModel {
    pub fn swap(&self) -> Self {
        let g = &self.gain;
        Self {
            gain: [[g[1][1], g[1][0], g[1][2]], [g[0][1], g[0][0], g[0][2]]],
            noise_std: [self.noise_std[1], self.noise_std[0]],
        }
    }
}

/// Correlation parameters of the jointly Gaussian input:
/// `Xc = conj(beta1) X1 + conj(beta2) X2 + sqrt(1 - |beta1|^2 - |beta2|^2) Xc_in`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputCoeffs {
    pub beta1: Complex64,
    pub beta2: Complex64,
}

impl InputCoeffs {
    pub const ZERO: InputCoeffs = InputCoeffs {
        beta1: Complex64 { re: 0.0, im: 0.0 },
        beta2: Complex64 { re: 0.0, im: 0.0 },
    };

    pub fn new(beta1: Complex64, beta2: Complex64) -> Result<Self> {
        check_finite("beta1", beta1)?;
        check_finite("beta2", beta2)?;
        let s = beta1.norm_sqr() + beta2.norm_sqr();
        if s > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "|beta1|^2 + |beta2|^2 = {s} exceeds 1"
            )));
        }
        Ok(Self { beta1, beta2 })
    }

    pub fn real(b1: f64, b2: f64) -> Result<Self> {
        Self::new(Complex64::new(b1, 0.0), Complex64::new(b2, 0.0))
    }

    /// Power of the relay's fresh component, `1 - |beta1|^2 - |beta2|^2`.
    pub fn residual(&self) -> f64 {
        (1.0 - self.beta1.norm_sqr() - self.beta2.norm_sqr()).max(0.0)
    }

    pub fn swap(&self) -> Self {
        Self {
            beta1: self.beta2,
            beta2: self.beta1,
        }
    }

    /// Maps a point of [`InputMode::domain`] into the admissible set. Real
    /// mode takes `(beta1, beta2)` in `[-1, 1]^2`, radially projected onto the
    /// unit disk. Complex mode takes polar coordinates `(rho, theta, phi1, phi2)`
    /// with `beta1 = rho cos(theta) e^{j phi1}` and `beta2 = rho sin(theta) e^{j phi2}`.
    pub fn from_params(p: &[f64]) -> Self {
        match p.len() {
            2 => {
                let (b1, b2) = (Complex64::new(p[0], 0.0), Complex64::new(p[1], 0.0));
                let norm = (b1.norm_sqr() + b2.norm_sqr()).sqrt();
                let s = if norm > 1.0 { 1.0 / norm } else { 1.0 };
                Self {
                    beta1: b1 * s,
                    beta2: b2 * s,
                }
            }
            4 => {
                let rho = p[0].clamp(0.0, 1.0);
                Self {
                    beta1: Complex64::from_polar(rho * p[1].cos(), p[2]),
                    beta2: Complex64::from_polar(rho * p[1].sin(), p[3]),
                }
            }
            n => panic!("input parameters must have 2 or 4 entries, got {n}"),
        }
    }
}

/// Whether input correlations (and noise correlations) range over real or
/// complex values during optimization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputMode {
    Real,
    Complex,
}

impl InputMode {
    /// Real inputs suffice for real channels; complex cross gains need complex inputs.
    pub fn for_gains(g: &ChannelGains) -> Self {
        if g.is_real() {
            InputMode::Real
        } else {
            InputMode::Complex
        }
    }

    pub fn for_model(m: &ChannelModel) -> Self {
        if m.gain.iter().flatten().all(|z| z.im == 0.0) {
            InputMode::Real
        } else {
            InputMode::Complex
        }
    }

    /// Number of real parameters describing `(beta1, beta2)`.
    pub fn dims(&self) -> usize {
        match self {
            InputMode::Real => 2,
            InputMode::Complex => 4,
        }
    }

    /// Parameter box matching [`InputCoeffs::from_params`].
    pub fn domain(&self) -> Vec<(f64, f64)> {
        use std::f64::consts::{FRAC_PI_2, PI};
        match self {
            InputMode::Real => vec![(-1.0, 1.0); 2],
            InputMode::Complex => vec![(0.0, 1.0), (0.0, FRAC_PI_2), (-PI, PI), (-PI, PI)],
        }
    }
}

/// Correlation coefficient between an output noise and a surrogate noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseCorr(Complex64);

impl NoiseCorr {
    pub const ZERO: NoiseCorr = NoiseCorr(Complex64 { re: 0.0, im: 0.0 });

    pub fn new(r: Complex64) -> Result<Self> {
        check_finite("r", r)?;
        if r.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "noise correlation |r| = {} exceeds 1",
                r.norm()
            )));
        }
        Ok(Self(r))
    }

    pub fn real(r: f64) -> Result<Self> {
        Self::new(Complex64::new(r, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}
