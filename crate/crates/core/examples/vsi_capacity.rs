//! Under very strong interference the all-common scheme meets the strong
//! outer bound, so the capacity region is known.

use ifccr::gauss::ChannelGains;
use ifccr::inner::{capacity_vsi, inner_frontier, Scheme};
use ifccr::regimes::classify;
use ifccr::regions::{contains, OptimizerConfig};

fn main() -> ifccr::Result<()> {
    let g = ChannelGains::real(1.0, -2.0, -10.0, 1.0, 0.5, 0.5)?;
    let r = classify(&g);
    println!(
        "{g}\nvery strong at Rx 1: {}, at Rx 2: {}",
        r.vsi_rx1, r.vsi_rx2
    );

    let cfg = OptimizerConfig::default();
    let cap = capacity_vsi(&g, 32, &cfg)?.expect("channel is very strong");
    let ach = inner_frontier(&g, Scheme::AllCommon, 32, &cfg)?;
    let fwd = contains(&cap, &ach, 1e-6)?;
    let back = contains(&ach, &cap, 1e-6)?;
    println!(
        "all-common inside the bound:   {} (gap {:.2e})",
        fwd.contained, fwd.max_gap
    );
    println!(
        "bound inside all-common:       {} (gap {:.2e})",
        back.contained, back.max_gap
    );
    println!(
        "sum rate at mu = (1, 1)/sqrt 2: {:.4} bits",
        cap.values[cap.len() / 2] * 2f64.sqrt()
    );
    Ok(())
}
