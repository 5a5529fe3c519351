use std::path::Path;
use std::process::{Command, Output};

fn ntlab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ntlab"))
        .args(args)
        .env("NTLAB_CACHE", cache)
        .output()
        .expect("spawn ntlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn output_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify",
        "--suite",
        "moments,torsion,gk,census",
        "--pmin",
        "7",
        "--pmax",
        "61",
        "--K",
        "3",
    ];
    let runs: Vec<String> = ["1", "3"]
        .iter()
        .map(|w| {
            let mut a = args.to_vec();
            a.extend(["--workers", w]);
            stdout(&ntlab(dir.path(), &a))
        })
        .collect();
    assert!(runs[0].starts_with("# ntlab-schema v1\np,name,lhs,rhs,match,ratio,elapsed_ms\n"));
    assert_eq!(runs[0], runs[1]);
    let json: Vec<String> = ["1", "4"]
        .iter()
        .map(|w| {
            stdout(&ntlab(
                dir.path(),
                &[
                    "sweep",
                    "--claim",
                    "prop4.6",
                    "--pmin",
                    "101",
                    "--pmax",
                    "400",
                    "--out",
                    "json",
                    "--workers",
                    w,
                ],
            ))
        })
        .collect();
    assert_eq!(json[0], json[1]);
    let v: serde_json::Value = serde_json::from_str(&json[0]).unwrap();
    assert!(v
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["match"] == true && r["p"].as_u64().unwrap() % 4 == 1));
}

#[test]
fn exit_status_tracks_exact_failures() {
    let dir = tempfile::tempdir().unwrap();
    let ok = ntlab(
        dir.path(),
        &["verify", "--suite", "eichler", "--nmax", "199"],
    );
    assert_eq!(ok.status.code(), Some(0));
    let ok = ntlab(
        dir.path(),
        &[
            "verify",
            "--suite",
            "s4-triroute,ap-chain",
            "--pmin",
            "7",
            "--pmax",
            "31",
        ],
    );
    // The s4-prop3.4 route disagrees with the direct moment.
    assert_eq!(ok.status.code(), Some(1));
    assert!(stdout(&ok).contains("7,s4-prop3.4,-315,-245,false,,"));
    assert!(stdout(&ok).contains("7,s4-corrected,-315,-315,true,,"));
    let ok = ntlab(
        dir.path(),
        &["verify", "--suite", "gk", "--pmax", "50", "--K", "3"],
    );
    assert_eq!(ok.status.code(), Some(0));
    let bad = ntlab(dir.path(), &["verify", "--suite", "nope"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "suite = moments\npmin = 7\npmax = 13\nout = json\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&ntlab(dir.path(), &["--config", c, "verify"]))).unwrap();
    let ps: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["p"].as_u64().unwrap())
        .collect();
    assert_eq!((ps.first(), ps.last()), (Some(&7), Some(&13)));
    let out = stdout(&ntlab(
        dir.path(),
        &["--config", c, "verify", "--pmax", "7", "--out", "csv"],
    ));
    assert!(out.lines().skip(2).all(|l| l.starts_with("7,")));
    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(
        ntlab(dir.path(), &["--config", c, "verify"]).status.code(),
        Some(2)
    );
}

#[test]
fn cache_build_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let build = [
        "cache",
        "build",
        "--bound",
        "3000",
        "--ap-pmin",
        "7",
        "--ap-pmax",
        "23",
    ];
    assert!(ntlab(dir.path(), &build).status.success());
    let h1 = std::fs::read(dir.path().join("hurwitz.csv")).unwrap();
    let a1 = std::fs::read(dir.path().join("ap_23.csv")).unwrap();
    std::fs::remove_file(dir.path().join("hurwitz.csv")).unwrap();
    assert!(ntlab(dir.path(), &build).status.success());
    assert_eq!(std::fs::read(dir.path().join("hurwitz.csv")).unwrap(), h1);
    assert_eq!(std::fs::read(dir.path().join("ap_23.csv")).unwrap(), a1);
    assert!(a1.starts_with(b"# ntlab-schema v1\nlambda,ap\n"));
    let info = stdout(&ntlab(dir.path(), &["cache", "inspect"]));
    assert!(info.contains("bound 3000, 3001 rows"), "{info}");
    assert!(info.contains("ap tables: 6 primes in [7, 23]"), "{info}");
}

#[test]
fn gfun_and_angles() {
    let dir = tempfile::tempdir().unwrap();
    let g = stdout(&ntlab(
        dir.path(),
        &[
            "gfun", "--p", "13", "--family", "3g3", "--lambda", "5", "--K", "6",
        ],
    ));
    let row = g.lines().nth(2).unwrap();
    assert!(row.starts_with("13,3g3,5,6,6,-2,"), "{row}");
    let bad = ntlab(
        dir.path(),
        &["gfun", "--p", "13", "--family", "3g3", "--lambda", "1"],
    );
    assert_eq!(bad.status.code(), Some(2));
    let h = stdout(&ntlab(
        dir.path(),
        &["sweep", "--claim", "angles", "--p", "1009", "--bins", "20"],
    ));
    let counts: u64 = h
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(3).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(h.lines().count(), 22);
    assert_eq!(counts, 1008);
}
