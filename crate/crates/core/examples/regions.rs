//! Outer bounds and the four achievable families on one channel, printed as
//! support values at a handful of directions.
//!
//! ```text
//! cargo run --release --example regions -- fig6
//! ```

use ifccr::cli::{region_frontiers, Preset};
use ifccr::regions::OptimizerConfig;

fn main() -> ifccr::Result<()> {
    let preset: Preset = std::env::args()
        .nth(1)
        .as_deref()
        .unwrap_or("fig5")
        .parse()?;
    let g = preset.channel();
    println!("channel: {g}");
    let frontiers = region_frontiers(&g, &preset.curves(), 9, &OptimizerConfig::default())?;
    print!("{:>42}", "mu angle (deg)");
    for d in &frontiers[0].directions {
        print!("{:>7.1}", d[1].atan2(d[0]).to_degrees());
    }
    println!();
    for f in &frontiers {
        print!("{:>42}", format!("{} ({})", f.source, f.validity.as_str()));
        for v in &f.values {
            print!("{v:>7.3}");
        }
        println!();
    }
    Ok(())
}
