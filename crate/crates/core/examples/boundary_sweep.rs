//! Where the strong-interference condition at destination 1 starts to hold,
//! as the relay gets stronger. Without a relay the threshold is |h12| = 1;
//! with one, h12 = 1 stays a touching point where the margin reaches zero.

use ifccr::cli::{cmd_boundary_sweep, Axis, Plane, SweepConfig};

fn main() -> ifccr::Result<()> {
    let cfg = SweepConfig {
        hc: Some(vec![0.0, 0.5, 1.0, 2.0]),
        plane: Some(Plane {
            x: Axis::new("h12", -10.0, 10.0, 201)?,
            y: Axis::new("h21", 0.0, 0.0, 1)?,
        }),
        ..Default::default()
    };
    let mut out = Vec::new();
    cmd_boundary_sweep(&cfg, &mut out)?;
    let text = String::from_utf8(out).expect("utf-8");
    println!("{:>5}  h12 on the strong_rx1 boundary", "hc");
    for hc in cfg.hc.as_ref().unwrap() {
        let pts: Vec<&str> = text
            .lines()
            .skip(1)
            .filter_map(|l| {
                let r: Vec<&str> = l.split(',').collect();
                (r[0].parse::<f64>() == Ok(*hc) && r[1] == "strong_rx1" && r[2] == "x")
                    .then_some(r[3])
            })
            .collect();
        println!("{hc:>5}  {}", pts.join(", "));
    }
    Ok(())
}
