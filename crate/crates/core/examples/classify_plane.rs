//! Prints a coarse map of the interference regimes over the (h12, h21) plane
//! for a symmetric relay, one character per cell.
//!
//! ```text
//! cargo run --example classify_plane -- 1.0
//! ```

use ifccr::gauss::ChannelGains;
use ifccr::regimes::classify;

fn main() -> ifccr::Result<()> {
    let hc: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("relay gain"))
        .unwrap_or(1.0);
    let axis: Vec<f64> = (0..41).map(|i| -10.0 + 0.5 * i as f64).collect();
    println!("relay gain {hc}; V very strong, S strong at both, 1/2 strong at one destination, . neither");
    for &h21 in axis.iter().rev() {
        let row: String = axis
            .iter()
            .map(|&h12| {
                let r = classify(&ChannelGains::real(1.0, h12, h21, 1.0, hc, hc)?);
                Ok(match r {
                    r if r.vsi_rx1 || r.vsi_rx2 => 'V',
                    r if r.strong_both => 'S',
                    r if r.strong_rx1 => '1',
                    r if r.strong_rx2 => '2',
                    _ => '.',
                })
            })
            .collect::<ifccr::Result<_>>()?;
        println!("{h21:6.1} {row}");
    }
    println!("       h12 from -10 to 10");
    Ok(())
}
