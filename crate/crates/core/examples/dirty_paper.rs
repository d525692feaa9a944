//! With both sources silent at the destinations the channel is a broadcast
//! channel from the relay. Writing on dirty paper against the codeword for
//! destination 2 gives destination 1 its interference-free rate.

use ifccr::gauss::{cap, ChannelGains};
use ifccr::inner::{region_all_private, GaussAssign};
use ifccr::regions::Support;
use num_complex::Complex64;

fn main() -> ifccr::Result<()> {
    let g = ChannelGains::real(0.0, 0.0, 0.0, 0.0, 1.5, 0.8)?;
    let h = g.h1c * g.h1c;
    println!(
        "{:>5} {:>5} {:>12} {:>12} {:>12}",
        "c1", "c2", "R1 (DPC)", "C(c1^2 h/..)", "lambda1"
    );
    for (c1, c2) in [(0.8, 0.3), (0.6, 0.5), (0.3, 0.8)] {
        let a = GaussAssign::mmse(
            &g.model(),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
            c1,
            c2,
        )?;
        let r1 = region_all_private(&g, &a)?.support([1.0, 0.0]).0;
        let want = cap(c1 * c1 * h / (1.0 + c2 * c2 * h))?;
        println!(
            "{c1:>5} {c2:>5} {r1:>12.8} {want:>12.8} {:>12.6}",
            a.lam1.re
        );
    }
    Ok(())
}
