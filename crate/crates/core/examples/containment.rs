//! Checks that every achievable family stays inside every outer bound that
//! applies to a channel, reporting the worst excess per pair.

use ifccr::cli::default_selection;
use ifccr::cli::Selection;
use ifccr::gauss::ChannelGains;
use ifccr::inner::inner_frontier;
use ifccr::outer::outer_frontier;
use ifccr::regions::{contains, OptimizerConfig};

fn main() -> ifccr::Result<()> {
    let g = ChannelGains::real(1.0, 0.5, 1.0, 1.0, 1.0, 1.0)?;
    let cfg = OptimizerConfig::default();
    let (mut inner, mut outer) = (Vec::new(), Vec::new());
    for s in default_selection(&g) {
        match s {
            Selection::Scheme(s) => inner.push(inner_frontier(&g, s, 32, &cfg)?),
            Selection::Bound(b) => outer.push(outer_frontier(&g, b, 32, &cfg)?),
        }
    }
    for o in &outer {
        for i in &inner {
            let r = contains(o, i, 1e-6)?;
            println!(
                "{:<30} in {:<15} {} (max excess {:+.2e})",
                i.source,
                o.source,
                if r.contained { "ok" } else { "VIOLATED" },
                r.max_gap
            );
        }
    }
    Ok(())
}
