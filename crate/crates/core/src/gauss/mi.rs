use super::covariance::{JointCovariance, Var};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigenvalue floor, relative to the largest variance involved in a query.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Pivots smaller than this (relative) send a query to the eigen-based path.
const CHOL_PIVOT: f64 = 1e-9;

/// Smallest accepted `det / prod(diag)` of a block. Below it the trailing
/// pivots are differences of nearly equal numbers and lose most of their
/// digits, even when each pivot alone looks large enough.
const CHOL_HADAMARD: f64 = 1e-6;

/// `I(A; B | C)` in bits.
///
/// The three sets must be pairwise disjoint. Well-conditioned queries use
/// Cholesky log-determinants; rank-deficient ones fall back to Schur
/// complements with eigenvalue-floored pseudo-inverses. An unbounded
/// information (a variable of `A` fully determined by `B` and `C` while
/// still random given `C`) is reported as [`Error::Degenerate`].
pub fn mutual_info(cov: &JointCovariance, a: &[Var], b: &[Var], c: &[Var]) -> Result<f64> {
    let ia = indices(cov, a)?;
    let ib = indices(cov, b)?;
    let ic = indices(cov, c)?;
    for (x, y) in [(&ia, &ib), (&ia, &ic), (&ib, &ic)] {
        if x.iter().any(|i| y.contains(i)) {
            return Err(Error::Usage(
                "mutual_info: variable sets must be disjoint".into(),
            ));
        }
    }
    if ia.is_empty() || ib.is_empty() {
        return Ok(0.0);
    }
    let all: Vec<usize> = ia.iter().chain(&ib).chain(&ic).copied().collect();
    let scale = all.iter().map(|&i| cov.at(i, i).re).fold(1.0, f64::max);

    let cat = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
    let fast = (|| {
        let ac = chol_logdet(cov, &cat(&ia, &ic), scale)?;
        let bc = chol_logdet(cov, &cat(&ib, &ic), scale)?;
        let cc = chol_logdet(cov, &ic, scale)?;
        let abc = chol_logdet(cov, &all, scale)?;
        Some(ac + bc - cc - abc)
    })();
    let v = match fast {
        Some(v) => v,
        None => eigen_mi(cov, &ia, &ib, &ic, scale)?,
    };
    Ok(v.max(0.0))
}

/// `I(y; A | C)` for a single output variable.
pub fn mutual_info_y(cov: &JointCovariance, y: Var, a: &[Var], c: &[Var]) -> Result<f64> {
    mutual_info(cov, &[y], a, c)
}

fn indices(cov: &JointCovariance, vars: &[Var]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(vars.len());
    for &v in vars {
        let i = cov.index(v)?;
        if !out.contains(&i) {
            out.push(i);
        }
    }
    Ok(out)
}

/// log2 det of the principal submatrix on `idx`, or `None` if a pivot is tiny.
fn chol_logdet(cov: &JointCovariance, idx: &[usize], scale: f64) -> Option<f64> {
    let n = idx.len();
    if n == 0 {
        return Some(0.0);
    }
    let mut l = [[Complex64::new(0.0, 0.0); 12]; 12];
    if n > 12 {
        return None;
    }
    let mut logdet = 0.0;
    let mut hadamard = 0.0;
    for j in 0..n {
        let a = cov.at(idx[j], idx[j]).re;
        let mut d = a;
        for k in 0..j {
            d -= l[j][k].norm_sqr();
        }
        hadamard += (d / a).log2();
        if d <= CHOL_PIVOT * scale || hadamard < CHOL_HADAMARD.log2() {
            return None;
        }
        let dj = d.sqrt();
        l[j][j] = Complex64::new(dj, 0.0);
        logdet += d.log2();
        for i in (j + 1)..n {
            let mut s = cov.at(idx[i], idx[j]);
            for k in 0..j {
                s -= l[i][k] * l[j][k].conj();
            }
            l[i][j] = s / dj;
        }
    }
    Some(logdet)
}

// The fallback works on the real embedding `[[Re, -Im], [Im, Re]]` of each
// Hermitian block: every eigenvalue appears twice, so log-determinants are
// halved at the end. Real symmetric eigensolvers are the robust ones.

fn sub(cov: &JointCovariance, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    let (n, m) = (rows.len(), cols.len());
    DMatrix::from_fn(2 * n, 2 * m, |i, j| {
        let z = cov.at(rows[i % n], cols[j % m]);
        match (i < n, j < m) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Picks the `k`-th block pair out of an embedded index range.
fn block(
    m: &DMatrix<f64>,
    r: (usize, usize),
    c: (usize, usize),
    nr: usize,
    nc: usize,
) -> DMatrix<f64> {
    let rows: Vec<usize> = (r.0..r.0 + r.1).chain(nr + r.0..nr + r.0 + r.1).collect();
    let cols: Vec<usize> = (c.0..c.0 + c.1).chain(nc + c.0..nc + c.0 + c.1).collect();
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()).scale(0.5)
}

/// Eigenvalues and orthonormal eigenvectors (columns) of a symmetric matrix.
///
/// Cyclic Jacobi rotations: slow for big matrices but accurate to round-off on
/// the small, often rank-deficient blocks seen here. nalgebra's QR-based
/// solver returned eigenpairs with O(1) residuals on such blocks.
struct Eigen {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

fn eig(m: &DMatrix<f64>) -> Eigen {
    let n = m.nrows();
    let mut a = symmetrize(m);
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].powi(2))
            .sum();
        let diag: f64 = (0..n).map(|i| a[(i, i)].powi(2)).sum();
        if off <= 1e-30 * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Eigen {
        eigenvalues: DVector::from_fn(n, |i, _| a[(i, i)]),
        eigenvectors: v,
    }
}

/// `sxx - sxc pinv(scc) sxc^T`, with eigenvalues of `scc` at or below
/// `floor` treated as zero.
///
/// The pseudo-inverse is never formed: projecting onto each eigenvector
/// before dividing by its eigenvalue keeps tiny eigenvalues from inflating
/// intermediate products.
fn schur(sxx: &DMatrix<f64>, sxc: &DMatrix<f64>, scc: &DMatrix<f64>, floor: f64) -> DMatrix<f64> {
    let mut out = sxx.clone();
    if scc.nrows() == 0 {
        return out;
    }
    let e = eig(scc);
    for (k, &l) in e.eigenvalues.iter().enumerate() {
        if l > floor {
            let w = sxc * e.eigenvectors.column(k);
            out -= (&w * w.transpose()).scale(1.0 / l);
        }
    }
    symmetrize(&out)
}

/// Covariance of the index set `x` given `c`.
fn conditional(cov: &JointCovariance, x: &[usize], c: &[usize], floor: f64) -> DMatrix<f64> {
    let sxx = sub(cov, x, x);
    if c.is_empty() {
        return sxx;
    }
    schur(&sxx, &sub(cov, x, c), &sub(cov, c, c), floor)
}

fn eigen_mi(
    cov: &JointCovariance,
    ia: &[usize],
    ib: &[usize],
    ic: &[usize],
    scale: f64,
) -> Result<f64> {
    let floor = EIGEN_FLOOR * scale;
    let ab: Vec<usize> = ia.iter().chain(ib).copied().collect();
    let m = conditional(cov, &ab, ic, floor);
    let (na, nb) = (ia.len(), ib.len());
    let n = na + nb;
    let maa = block(&m, (0, na), (0, na), n, n);
    let mab = block(&m, (0, na), (na, nb), n, n);
    let mbb = block(&m, (na, nb), (na, nb), n, n);

    // Restrict A to the directions that are still random given C.
    let ea = eig(&maa);
    let keep: Vec<usize> = (0..2 * na).filter(|&i| ea.eigenvalues[i] > floor).collect();
    if keep.is_empty() {
        return Ok(0.0);
    }
    let q = DMatrix::from_fn(2 * na, keep.len(), |i, j| ea.eigenvectors[(i, keep[j])]);
    let ld_a: f64 = keep.iter().map(|&i| ea.eigenvalues[i].log2()).sum();

    let s = q.transpose() * schur(&maa, &mab, &mbb, floor) * &q;
    let es = eig(&s);
    let mut ld_ab = 0.0;
    for &l in es.eigenvalues.iter() {
        if l <= floor {
            return Err(Error::Degenerate(format!(
                "conditional covariance is singular (eigenvalue {l:e}); mutual information is unbounded"
            )));
        }
        ld_ab += l.log2();
    }
    Ok(0.5 * (ld_a - ld_ab))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::covariance::{build_joint_covariance, unit, LinearModel, Source};
    use crate::gauss::{cap, ChannelGains, InputCoeffs, NoiseCorr};

    fn cov(g: &ChannelGains, b1: f64, b2: f64) -> JointCovariance {
        build_joint_covariance(
            g,
            &InputCoeffs::real(b1, b2).unwrap(),
            NoiseCorr::ZERO,
            false,
        )
        .unwrap()
    }

    #[test]
    fn scalar_link() {
        let g = ChannelGains::real(1.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let c = cov(&g, 0.0, 0.0);
        assert!((mutual_info_y(&c, Var::Y1, &[Var::X1], &[]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_on_interferer() {
        let g = ChannelGains::real(1.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let c = cov(&g, 0.0, 0.0);
        assert!((mutual_info_y(&c, Var::Y1, &[Var::X1], &[Var::X2]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_relay_gain() {
        // Xc = X1 so both paths add coherently: Var[Y1] = (1+1)^2 + 1.
        let g = ChannelGains::real(1.0, 0.0, 0.0, 0.0, 1.0, 0.0).unwrap();
        let c = cov(&g, 1.0, 0.0);
        let v = mutual_info_y(&c, Var::Y1, &[Var::X1, Var::Xc], &[]).unwrap();
        assert!((v - 5f64.log2()).abs() < 1e-12, "{v}");
    }

    #[test]
    fn redundant_conditioning_takes_eigen_path() {
        let g = ChannelGains::real(1.0, 0.5, 0.3, 1.0, 2.0, 0.7).unwrap();
        let c = cov(&g, 0.0, 1.0);
        // Xc = X2, so conditioning on it as well is free.
        let a = mutual_info_y(&c, Var::Y1, &[Var::X1], &[Var::X2, Var::Xc]).unwrap();
        let b = mutual_info_y(&c, Var::Y1, &[Var::X1, Var::Xc], &[Var::X2]).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} {b}");
        let direct = cap(1.0).unwrap();
        assert!((b - direct).abs() < 1e-9);
    }

    #[test]
    fn complex_collinear_relay() {
        // |beta2| at or just below 1 with a complex phase: Xc is (almost) a
        // rotated copy of X2.
        let g = ChannelGains::new(
            0.9,
            Complex64::new(-0.4, 0.7),
            Complex64::new(0.2, -1.1),
            1.3,
            1.5,
            0.6,
        )
        .unwrap();
        for res in [0.0f64, 2e-9, 1e-6] {
            let b2 = Complex64::from_polar((1.0 - res).sqrt(), -0.78);
            let coeffs = InputCoeffs::new(Complex64::new(0.0, 0.0), b2).unwrap();
            let c = build_joint_covariance(&g, &coeffs, NoiseCorr::ZERO, false).unwrap();
            let full = mutual_info_y(&c, Var::Y1, &[Var::X1, Var::X2, Var::Xc], &[]).unwrap();
            let eff = g.h12 + g.h1c * b2.conj();
            let direct =
                (1.0 + g.h11 * g.h11 + eff.norm_sqr() + g.h1c * g.h1c * coeffs.residual()).log2();
            assert!((full - direct).abs() < 1e-9, "{res}: {full} {direct}");
        }
    }

    #[test]
    fn near_singular_inputs_keep_conditional_information() {
        // |beta1|^2 + |beta2|^2 = 1 up to round-off, with a small beta2: the
        // (X1, Xc, X2) block is singular to working precision while every
        // Cholesky pivot alone stays well above the pivot threshold.
        let g = ChannelGains::real(1.39, 1.66, -3.69, 0.19, 0.4, 0.04).unwrap();
        for k in 0..200 {
            let t = 1e-5 * (1.0 + k as f64 * 0.37);
            let coeffs = InputCoeffs::from_params(&[1.0, t]);
            let c = build_joint_covariance(&g, &coeffs, NoiseCorr::ZERO, false).unwrap();
            let got = mutual_info_y(&c, Var::Y1, &[Var::X1, Var::Xc], &[Var::X2]).unwrap();
            let eff = g.h11 + g.h1c * coeffs.beta1.re;
            let want = cap(eff * eff + g.h1c * g.h1c * coeffs.residual()).unwrap();
            assert!((got - want).abs() < 1e-9, "beta2 {t}: {got} vs {want}");
        }
    }

    #[test]
    fn jacobi_eigenpairs_on_clustered_spectrum() {
        // Embedding of a rank-deficient complex block with a nearly repeated
        // tiny eigenvalue.
        let b2 = Complex64::from_polar((1.0 - 2.7e-10f64).sqrt(), -0.777);
        let g = ChannelGains::new(
            0.9,
            Complex64::new(-0.4, 0.7),
            Complex64::new(0.2, -1.1),
            1.3,
            1.5,
            0.6,
        )
        .unwrap();
        let coeffs = InputCoeffs::new(Complex64::new(0.0, 0.0), b2).unwrap();
        let c = build_joint_covariance(&g, &coeffs, NoiseCorr::ZERO, false).unwrap();
        let ib = indices(&c, &[Var::X1, Var::X2, Var::Xc]).unwrap();
        let m = sub(&c, &ib, &ib);
        let e = eig(&m);
        let r = &m * &e.eigenvectors - &e.eigenvectors * DMatrix::from_diagonal(&e.eigenvalues);
        assert!(r.norm() < 1e-13, "{}", r.norm());
        let o = e.eigenvectors.transpose() * &e.eigenvectors - DMatrix::<f64>::identity(6, 6);
        assert!(o.norm() < 1e-13);
    }

    #[test]
    fn zero_information_about_determined_variable() {
        let g = ChannelGains::real(1.0, 0.5, 0.3, 1.0, 2.0, 0.7).unwrap();
        let c = cov(&g, 1.0, 0.0);
        assert_eq!(
            mutual_info_y(&c, Var::Y1, &[Var::Xc], &[Var::X1]).unwrap(),
            0.0
        );
    }

    #[test]
    fn noiseless_observation_is_degenerate() {
        let mut m = LinearModel::new();
        m.set(Var::X1, unit(Source::X1))
            .set(Var::Y1, unit(Source::X1));
        let c = m.covariance();
        assert!(matches!(
            mutual_info(&c, &[Var::Y1], &[Var::X1], &[]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn bad_queries() {
        let g = ChannelGains::real(1.0, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        let c = cov(&g, 0.0, 0.0);
        assert!(matches!(
            mutual_info_y(&c, Var::Y1, &[Var::X1], &[Var::X1]),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            mutual_info_y(&c, Var::Ytil1, &[Var::X1], &[]),
            Err(Error::Usage(_))
        ));
    }
}
