//! The rate-split polytope of one Gaussian input choice, projected onto
//! (R1, R2) by the linear program, next to its closed form.

use ifccr::gauss::ChannelGains;
use ifccr::inner::{mi_terms_for_scheme, Scheme};
use ifccr::lp::{project, SubRate};
use ifccr::regions::{directions, Support};

fn main() -> ifccr::Result<()> {
    let g = ChannelGains::real(1.0, -2.0, 1.0, 1.0, 1.0, 1.0)?;
    let m = g.model();
    for s in Scheme::FAMILIES {
        let p: Vec<f64> = if s == Scheme::AllPrivate {
            vec![0.3, -0.2, 0.5, 0.4]
        } else {
            vec![0.4, -0.3]
        };
        let mi = mi_terms_for_scheme(&g, &s.family(&m, &p)?)?;
        let closed = s.closed_form(&m, &p)?;
        println!("{s}");
        for mu in directions(3) {
            let lp = project(&mi, mu)?;
            let split: Vec<String> = SubRate::ALL
                .iter()
                .filter(|r| lp.rates.get(**r) > 1e-12)
                .map(|r| format!("{}={:.3}", r.name(), lp.rates.get(*r)))
                .collect();
            println!(
                "  mu=({:.2}, {:.2}) lp {:.6} closed {:.6}  {}",
                mu[0],
                mu[1],
                lp.value,
                closed.support(mu).0,
                split.join(" ")
            );
        }
    }
    Ok(())
}
