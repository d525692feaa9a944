use ifccr::cli::{BOUNDARY_HEADER, PLANE_HEADER};
use ifccr::regions::{read_frontiers_csv, write_frontiers_csv, CSV_HEADER};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn ifccr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifccr"))
        .args(args)
        .env_remove("IFCCR_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Very strong at Rx 1: all-common reaches the strong-both bound.
const VSI: &str = "h11 = 1\nh12 = -2\nh21 = -10\nh22 = 1\nh1c = 0.5\nh2c = 0.5\n";

fn region(dir: &TempDir, channel: &Path, sel: &[&str], name: &str) -> PathBuf {
    let out = dir.path().join(name);
    let mut args = vec![
        "region",
        "--channel",
        s(channel),
        "--directions",
        "16",
        "--out",
        s(&out),
    ];
    args.extend_from_slice(sel);
    let o = ifccr(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn classify_writes_plane_rows() {
    let d = TempDir::new().unwrap();
    let ch = write(&d, "ch.txt", VSI);
    let o = ifccr(&[
        "classify",
        "--channel",
        s(&ch),
        "--plane",
        "h12=-1:1:3,h21=0:2:5",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), PLANE_HEADER.join(","));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 15);
    // x runs fastest
    assert_eq!((rows[0][0], rows[0][1]), ("-1", "0"));
    assert_eq!((rows[1][0], rows[1][1]), ("0", "0"));
    assert_eq!((rows[3][0], rows[3][1]), ("-1", "0.5"));
    for r in &rows {
        assert_eq!(r.len(), 9);
        assert!(r[2..8].iter().all(|f| *f == "0" || *f == "1"));
        // rho is filled exactly when the degraded flag is set
        assert_eq!(r[7] == "1", !r[8].is_empty());
    }
}

#[test]
fn single_point_plane_gives_one_row() {
    let o = ifccr(&[
        "classify",
        "--preset",
        "fig5",
        "--plane",
        "h12=2:2:1,h21=3:3:1",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("2,3,"));
}

#[test]
fn plane_columns_follow_axis_names() {
    let o = ifccr(&[
        "classify",
        "--preset",
        "fig5",
        "--plane",
        "h1c=0:1:2,h21=0:1:2",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("h1c,h21,strong_rx1,"));
}

#[test]
fn usage_errors_exit_2() {
    let d = TempDir::new().unwrap();
    let ch = write(&d, "ch.txt", VSI);
    let bad = write(&d, "bad.txt", "h11 = 1\nh99 = 2\n");
    for args in [
        vec!["classify", "--channel", s(&ch)],
        vec![
            "classify",
            "--channel",
            s(&ch),
            "--plane",
            "h12=1:-1:3,h21=0:1:2",
        ],
        vec!["region", "--channel", s(&bad)],
        vec!["region", "--channel", s(&ch), "--scheme", "no-such-scheme"],
        vec!["region", "--channel", s(&ch), "--directions", "1"],
        vec!["region"],
        vec!["boundary-sweep", "--preset", "fig4", "--hc", ""],
        vec!["boundary-sweep", "--preset", "fig4", "--hc", "-1"],
        vec!["no-such-command"],
    ] {
        let o = ifccr(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_ifccr"))
        .args([
            "classify",
            "--preset",
            "fig5",
            "--plane",
            "h12=0:0:1,h21=0:0:1",
        ])
        .env("IFCCR_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn region_csv_round_trips() {
    let d = TempDir::new().unwrap();
    let ch = write(&d, "ch.txt", VSI);
    let out = region(
        &d,
        &ch,
        &["--scheme", "all-common,all-private", "--bound", "sato"],
        "r.csv",
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(&header[..CSV_HEADER.len()], &CSV_HEADER[..]);
    assert!(header[CSV_HEADER.len()..]
        .iter()
        .enumerate()
        .all(|(k, h)| *h == format!("param_{k}")));

    let fs = read_frontiers_csv(text.as_bytes()).unwrap();
    let sources: Vec<&str> = fs.iter().map(|f| f.source.as_str()).collect();
    assert_eq!(sources, ["all-common", "all-private", "sato", "capacity"]);
    assert!(fs.iter().all(|f| f.len() == 16));
    let mut again = Vec::new();
    write_frontiers_csv(&fs, &mut again).unwrap();
    assert_eq!(String::from_utf8(again).unwrap(), text);
}

#[test]
fn presets_select_their_curves() {
    let d = TempDir::new().unwrap();
    for (preset, extra) in [
        ("fig5", vec![]),
        ("fig6", vec!["strong-rx2"]),
        ("fig7", vec!["strong-rx2", "weak-degraded"]),
    ] {
        let out = d.path().join(format!("{preset}.csv"));
        let o = ifccr(&[
            "region",
            "--preset",
            preset,
            "--directions",
            "4",
            "--out",
            s(&out),
        ]);
        assert_eq!(code(&o), 0);
        let fs = read_frontiers_csv(std::fs::File::open(&out).unwrap()).unwrap();
        let mut want = vec![
            "sato",
            "all-common",
            "all-private",
            "one-common-one-private",
            "common-sources-private-relay",
        ];
        want.extend(extra);
        assert_eq!(
            fs.iter().map(|f| f.source.as_str()).collect::<Vec<_>>(),
            want,
            "{preset}"
        );
    }
}

#[test]
fn output_is_deterministic() {
    let d = TempDir::new().unwrap();
    let ch = write(&d, "ch.txt", VSI);
    let sel = [
        "--scheme",
        "all-private,one-common-one-private",
        "--seed",
        "7",
    ];
    let a = std::fs::read(region(&d, &ch, &sel, "a.csv")).unwrap();
    let b = std::fs::read(region(&d, &ch, &sel, "b.csv")).unwrap();
    assert_eq!(a, b);

    let args = ["boundary-sweep", "--preset", "fig4", "--hc", "1,2"];
    let one = Command::new(env!("CARGO_BIN_EXE_ifccr"))
        .args(args)
        .env("IFCCR_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_ifccr"))
        .args(args)
        .env("IFCCR_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn compare_identical_files_is_contained() {
    let d = TempDir::new().unwrap();
    let ch = write(&d, "ch.txt", VSI);
    let f = region(&d, &ch, &["--scheme", "all-common"], "f.csv");
    let report = d.path().join("report.json");
    let o = ifccr(&[
        "compare",
        "--inner",
        s(&f),
        "--outer",
        s(&f),
        "--out",
        s(&report),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict: contained"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["contained"], true);
    assert_eq!(json["max_gap"], 0.0);
}

#[test]
fn very_strong_all_common_meets_the_strong_bound_both_ways() {
    let d = TempDir::new().unwrap();
    let ch = write(&d, "ch.txt", VSI);
    let inner = region(&d, &ch, &["--scheme", "all-common"], "in.csv");
    let outer = region(&d, &ch, &["--bound", "strong-both"], "out.csv");
    for (i, o) in [(&inner, &outer), (&outer, &inner)] {
        let r = ifccr(&["compare", "--inner", s(i), "--outer", s(o), "--tol", "1e-6"]);
        assert_eq!(code(&r), 0, "{}", stdout(&r));
    }
}

#[test]
fn scaled_inner_is_a_violation() {
    let d = TempDir::new().unwrap();
    let ch = write(&d, "ch.txt", VSI);
    let inner = region(&d, &ch, &["--scheme", "all-common"], "in.csv");
    let outer = region(&d, &ch, &["--bound", "strong-both"], "out.csv");
    let mut fs = read_frontiers_csv(std::fs::File::open(&inner).unwrap()).unwrap();
    for f in &mut fs {
        f.values.iter_mut().for_each(|v| *v *= 1.1);
        f.witnesses.iter_mut().for_each(|w| *w = None);
    }
    let scaled = d.path().join("scaled.csv");
    write_frontiers_csv(&fs, std::fs::File::create(&scaled).unwrap()).unwrap();
    let o = ifccr(&["compare", "--inner", s(&scaled), "--outer", s(&outer)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("VIOLATED"));
}

#[test]
fn compare_rejects_bad_input() {
    let d = TempDir::new().unwrap();
    let junk = write(&d, "junk.csv", "a,b,c\n1,2,3\n");
    let missing = d.path().join("missing.csv");
    assert_eq!(
        code(&ifccr(&[
            "compare",
            "--inner",
            s(&junk),
            "--outer",
            s(&junk)
        ])),
        2
    );
    assert_eq!(
        code(&ifccr(&[
            "compare",
            "--inner",
            s(&missing),
            "--outer",
            s(&junk)
        ])),
        2
    );
}

#[test]
fn boundary_sweep_points_lie_on_the_boundaries() {
    let o = ifccr(&[
        "boundary-sweep",
        "--preset",
        "fig4",
        "--hc",
        "0,1",
        "--plane",
        "h12=-10:10:41,h21=-10:10:41",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), BOUNDARY_HEADER.join(","));
    let mut n = 0;
    for l in lines {
        let r: Vec<&str> = l.split(',').collect();
        let (hc, h12, h21): (f64, f64, f64) = (
            r[0].parse().unwrap(),
            r[3].parse().unwrap(),
            r[4].parse().unwrap(),
        );
        assert!(r[2] == "x" || r[2] == "y");
        if hc == 0.0 && r[1] == "strong_rx1" {
            // Without a relay the strong condition at Rx 1 is |h12| >= 1.
            assert!((h12.abs() - 1.0).abs() < 1e-9, "{l}");
        }
        if hc == 0.0 && r[1] == "strong_rx2" {
            assert!((h21.abs() - 1.0).abs() < 1e-9, "{l}");
        }
        n += 1;
    }
    assert!(n > 0);
}
