//! Any channel with arbitrary powers, noise levels and complex gains maps to
//! the unit-power standard form without changing what the receivers can learn.

use ifccr::gauss::{
    mutual_info_y, to_standard_form_with_map, GeneralChannel, InputCoeffs, LinearModel, NoiseCorr,
    Var,
};
use num_complex::Complex64;

fn main() -> ifccr::Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let ch = GeneralChannel {
        g11: c(2.0, 1.0),
        g12: c(0.5, -0.3),
        g21: c(-0.4, 0.9),
        g22: c(1.5, 0.0),
        g1c: c(0.0, 1.2),
        g2c: c(0.7, 0.7),
        p1: 2.0,
        p2: 1.0,
        pc: 3.0,
        s1sq: 4.0,
        s2sq: 0.5,
    };
    let (g, map) = to_standard_form_with_map(&ch)?;
    println!("standard form: {g}");
    println!(
        "input rotations: phi1 = {:.4}, phi2 = {:.4}",
        map.phi1, map.phi2
    );

    let beta = InputCoeffs::new(c(0.3, 0.2), c(-0.1, 0.4))?;
    let noise = NoiseCorr::real(0.0)?;
    let raw = LinearModel::with_inputs(&ch.model()?, &beta, noise, false).covariance();
    let std = LinearModel::with_inputs(&g.model(), &map.coeffs_to_standard(&beta), noise, false)
        .covariance();
    for (y, a, cond, label) in [
        (
            Var::Y1,
            &[Var::X1, Var::X2, Var::Xc][..],
            &[][..],
            "I(Y1; X1, X2, Xc)",
        ),
        (
            Var::Y1,
            &[Var::X1, Var::Xc][..],
            &[Var::X2][..],
            "I(Y1; X1, Xc | X2)",
        ),
        (
            Var::Y2,
            &[Var::X2][..],
            &[Var::X1, Var::Xc][..],
            "I(Y2; X2 | X1, Xc)",
        ),
    ] {
        let (u, v) = (
            mutual_info_y(&raw, y, a, cond)?,
            mutual_info_y(&std, y, a, cond)?,
        );
        println!("{label:<20} general {u:.10}  standard {v:.10}");
    }
    Ok(())
}
