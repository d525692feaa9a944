use super::{ChannelGains, ChannelModel, InputCoeffs, NoiseCorr};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

/// Independent unit-variance proper complex Gaussian sources that every
/// modelled variable is a linear combination of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    X1 = 0,
    X2 = 1,
    /// The relay's own fresh component.
    XcIn = 2,
    /// Fresh codeword carried by the relay for destination 1.
    V1 = 3,
    /// Fresh codeword carried by the relay for destination 2.
    V2 = 4,
    Z1 = 5,
    /// Innovation of `Z2` beyond its correlation with `Z1`.
    W2 = 6,
    /// Innovation of the surrogate noise at destination 1.
    W1 = 7,
}

pub const N_SOURCES: usize = 8;

/// A row of source coefficients.
pub type Row = [Complex64; N_SOURCES];

const ZERO_ROW: Row = [Complex64 { re: 0.0, im: 0.0 }; N_SOURCES];

/// Variable labels understood by the information engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X1,
    X2,
    Xc,
    Y1,
    Y2,
    Ytil1,
    Ytil2,
    U1c,
    U2c,
    U0cb,
    U1pb,
    U2pb,
}

impl Var {
    pub const ALL: [Var; 12] = [
        Var::X1,
        Var::X2,
        Var::Xc,
        Var::Y1,
        Var::Y2,
        Var::Ytil1,
        Var::Ytil2,
        Var::U1c,
        Var::U2c,
        Var::U0cb,
        Var::U1pb,
        Var::U2pb,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Var::X1 => "X1",
            Var::X2 => "X2",
            Var::Xc => "Xc",
            Var::Y1 => "Y1",
            Var::Y2 => "Y2",
            Var::Ytil1 => "Ytil1",
            Var::Ytil2 => "Ytil2",
            Var::U1c => "U1c",
            Var::U2c => "U2c",
            Var::U0cb => "U0cb",
            Var::U1pb => "U1pb",
            Var::U2pb => "U2pb",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Var::ALL
            .iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown variable label '{s}'")))
    }
}

/// Jointly Gaussian variables written as linear maps of the independent [`Source`]s.
#[derive(Clone, Debug, Default)]
pub struct LinearModel {
    labels: Vec<Var>,
    rows: Vec<Row>,
}

pub(crate) fn unit(s: Source) -> Row {
    let mut r = ZERO_ROW;
    r[s as usize] = Complex64::new(1.0, 0.0);
    r
}

pub(crate) fn axpy(y: &mut Row, a: Complex64, x: &Row) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

impl LinearModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces a variable.
    pub fn set(&mut self, var: Var, row: Row) -> &mut Self {
        match self.labels.iter().position(|v| *v == var) {
            Some(i) => self.rows[i] = row,
            None => {
                self.labels.push(var);
                self.rows.push(row);
            }
        }
        self
    }

    pub fn row(&self, var: Var) -> Option<&Row> {
        self.labels
            .iter()
            .position(|v| *v == var)
            .map(|i| &self.rows[i])
    }

    pub fn labels(&self) -> &[Var] {
        &self.labels
    }

    /// Inputs and outputs of `ch` when the relay sends `xc` (a row over the
    /// sources) and `X1`, `X2` are the unit sources.
    ///
    /// `Z2 = conj(r) Z1 + sqrt(1-|r|^2) W2`, so `Cov[Z1, Z2] = r`. The surrogate
    /// `Ytil2` shares `Z2`; the surrogate noise at destination 1 is
    /// `r Z2 + sqrt(1-|r|^2) W1`, again correlated with `Z2` by `r`.
    pub fn with_relay(ch: &ChannelModel, xc: Row, noise: NoiseCorr, surrogates: bool) -> Self {
        let x1 = unit(Source::X1);
        let x2 = unit(Source::X2);
        let r = noise.value();
        let s = (1.0 - r.norm_sqr()).max(0.0).sqrt();
        let signal = |k: usize| {
            let mut y = ZERO_ROW;
            axpy(&mut y, ch.gain[k][0], &x1);
            axpy(&mut y, ch.gain[k][1], &x2);
            axpy(&mut y, ch.gain[k][2], &xc);
            y
        };
        let z1 = unit(Source::Z1);
        let mut z2 = ZERO_ROW;
        axpy(&mut z2, r.conj(), &z1);
        axpy(&mut z2, Complex64::new(s, 0.0), &unit(Source::W2));

        let mut y1 = signal(0);
        axpy(&mut y1, Complex64::new(ch.noise_std[0], 0.0), &z1);
        let mut y2 = signal(1);
        axpy(&mut y2, Complex64::new(ch.noise_std[1], 0.0), &z2);

        let mut m = Self::new();
        m.set(Var::X1, x1)
            .set(Var::X2, x2)
            .set(Var::Xc, xc)
            .set(Var::Y1, y1)
            .set(Var::Y2, y2);
        if surrogates {
            let mut zt1 = ZERO_ROW;
            axpy(&mut zt1, r, &z2);
            axpy(&mut zt1, Complex64::new(s, 0.0), &unit(Source::W1));
            let mut yt1 = signal(0);
            axpy(&mut yt1, Complex64::new(ch.noise_std[0], 0.0), &zt1);
            m.set(Var::Ytil1, yt1).set(Var::Ytil2, y2);
        }
        m
    }

    /// [`LinearModel::with_relay`] with the relay input built from `coeffs`.
    pub fn with_inputs(
        ch: &ChannelModel,
        coeffs: &InputCoeffs,
        noise: NoiseCorr,
        surrogates: bool,
    ) -> Self {
        Self::with_relay(ch, relay_row(coeffs), noise, surrogates)
    }

    pub fn covariance(&self) -> JointCovariance {
        let n = self.labels.len();
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let v: Complex64 = self.rows[i]
                    .iter()
                    .zip(&self.rows[j])
                    .map(|(a, b)| a * b.conj())
                    .sum();
                matrix[i * n + j] = v;
                matrix[j * n + i] = v.conj();
            }
            matrix[i * n + i].im = 0.0;
        }
        JointCovariance {
            labels: self.labels.clone(),
            matrix,
        }
    }
}

/// `Xc = conj(beta1) X1 + conj(beta2) X2 + sqrt(k) Xc_in`.
pub(crate) fn relay_row(coeffs: &InputCoeffs) -> Row {
    let mut xc = ZERO_ROW;
    xc[Source::X1 as usize] = coeffs.beta1.conj();
    xc[Source::X2 as usize] = coeffs.beta2.conj();
    xc[Source::XcIn as usize] = Complex64::new(coeffs.residual().sqrt(), 0.0);
    xc
}

/// Covariance matrix of a labelled jointly Gaussian vector, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct JointCovariance {
    pub labels: Vec<Var>,
    pub matrix: Vec<Complex64>,
}

impl JointCovariance {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self, v: Var) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| *l == v)
            .ok_or_else(|| Error::Usage(format!("variable {v} is not part of this covariance")))
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[i * self.dim() + j]
    }

    /// `Cov[a, b] = E[a conj(b)]`.
    pub fn get(&self, a: Var, b: Var) -> Result<Complex64> {
        Ok(self.at(self.index(a)?, self.index(b)?))
    }
}

/// Covariance of `(X1, X2, Xc, Y1, Y2[, Ytil1, Ytil2])` for a standard-form channel.
pub fn build_joint_covariance(
    gains: &ChannelGains,
    coeffs: &InputCoeffs,
    noise: NoiseCorr,
    include_surrogates: bool,
) -> Result<JointCovariance> {
    let coeffs = InputCoeffs::new(coeffs.beta1, coeffs.beta2)?;
    Ok(LinearModel::with_inputs(&gains.model(), &coeffs, noise, include_surrogates).covariance())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: f64) -> bool {
        (a - Complex64::new(b, 0.0)).norm() < 1e-14
    }

    #[test]
    fn independent_relay() {
        let g = ChannelGains::real(1.0, 0.5, 0.5, 1.0, 1.0, 1.0).unwrap();
        let c = build_joint_covariance(&g, &InputCoeffs::ZERO, NoiseCorr::ZERO, false).unwrap();
        assert!(close(c.get(Var::Xc, Var::Xc).unwrap(), 1.0));
        assert!(close(c.get(Var::Xc, Var::X1).unwrap(), 0.0));
        assert!(close(c.get(Var::Xc, Var::X2).unwrap(), 0.0));
    }

    #[test]
    fn fully_correlated_relay() {
        let g = ChannelGains::real(1.0, 0.5, 0.5, 1.0, 1.0, 1.0).unwrap();
        let c = build_joint_covariance(
            &g,
            &InputCoeffs::real(1.0, 0.0).unwrap(),
            NoiseCorr::ZERO,
            false,
        )
        .unwrap();
        assert!(close(c.get(Var::Xc, Var::X1).unwrap(), 1.0));
        assert!(close(c.get(Var::Xc, Var::Xc).unwrap(), 1.0));
    }

    #[test]
    fn output_noise_correlation() {
        let g = ChannelGains::real(1.0, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        let r = NoiseCorr::new(Complex64::new(0.3, -0.4)).unwrap();
        let c = build_joint_covariance(&g, &InputCoeffs::ZERO, r, true).unwrap();
        assert!(close(c.get(Var::Y1, Var::Y1).unwrap(), 2.0));
        assert!((c.get(Var::Y1, Var::Y2).unwrap() - r.value()).norm() < 1e-14);
        assert!((c.get(Var::Ytil1, Var::Y2).unwrap() - r.value()).norm() < 1e-14);
        assert!(close(c.get(Var::Ytil1, Var::Ytil1).unwrap(), 2.0));
    }

    #[test]
    fn rejects_excess_correlation() {
        let g = ChannelGains::real(1.0, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        let bad = InputCoeffs {
            beta1: Complex64::new(0.9, 0.0),
            beta2: Complex64::new(0.9, 0.0),
        };
        assert!(matches!(
            build_joint_covariance(&g, &bad, NoiseCorr::ZERO, false),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn label_parsing() {
        for v in Var::ALL {
            assert_eq!(v.name().parse::<Var>().unwrap(), v);
        }
        assert!(matches!("Y3".parse::<Var>(), Err(Error::Usage(_))));
    }
}
