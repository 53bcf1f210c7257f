//! End-to-end runs of the `miniwalls` binary on the shipped configs.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde::de::DeserializeOwned;
use serde::Serialize;

use miniwalls_cli::records::*;
use miniwalls_core::rational::{int, q};

const BIN: &str = env!("CARGO_BIN_EXE_miniwalls");

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("miniwalls-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_with(cfg: &Path, args: &[&str], threads: Option<&str>) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.arg("--config").arg(cfg).args(args);
    if let Some(n) = threads {
        cmd.env("RAYON_NUM_THREADS", n);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(cfg: &Path, args: &[&str]) -> Run {
    run_with(cfg, args, None)
}

fn ok(cfg: &Path, args: &[&str]) -> String {
    let r = run(cfg, args);
    assert_eq!(r.code, 0, "{args:?} failed: {}", r.stderr);
    r.stdout
}

/// Parses a report into its schema type and checks that re-serializing reproduces it.
fn round_trip<T: DeserializeOwned + Serialize>(text: &str) -> T {
    let report: T = serde_json::from_str(text).expect("report matches its schema");
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again, text);
    report
}

const P2_RANK2: &str = r#"
[lattice]
preset = "P2"

[stability]
beta = ["-1/2"]
omega = [1]

[type]
rank = 2
c1 = [1]
c2 = 3
"#;

#[test]
fn walls_mini_reports_the_worked_wall() {
    let out = ok(&config("p2_worked.toml"), &["walls", "mini"]);
    let r: WallsReport = round_trip(&out);
    assert_eq!(r.command, "walls mini");
    assert_eq!(r.walls.len(), 1);
    let w = &r.walls[0];
    assert_eq!(w.m_squared.value(), Some(q(5, 4)));
    assert_eq!(w.witnesses.len(), 1);
    let a = &w.witnesses[0];
    assert_eq!((a.rank, a.x.value(), a.c.value()), (1, Some(int(0)), Some(q(-1, 8))));
}

#[test]
fn heart_level_walls_are_sorted_ascending() {
    let out = ok(&config("p2_worked.toml"), &["walls", "mini", "--filter", "heart"]);
    let r: WallsReport = round_trip(&out);
    let walls: Vec<_> = r.walls.iter().map(|w| w.m_squared.value().unwrap()).collect();
    assert_eq!(walls, vec![q(5, 4), q(13, 4)]);
}

#[test]
fn classify_zero_dimensional_type_is_a_symmetric_product() {
    let out = ok(&config("points_p1xp1.toml"), &["classify"]);
    let r: ClassifyReport = round_trip(&out);
    assert_eq!(r.classification, "SymmetricProduct");
    assert_eq!(r.symmetric_power.unwrap().to_string(), "3");
}

#[test]
fn classical_walls_on_p2_are_empty_and_saturated() {
    let cfg = scratch("p2_rank2.toml", P2_RANK2);
    let r: ClassicalReport = round_trip(&ok(&cfg, &["walls", "classical"]));
    assert!(r.walls.is_empty());
    assert!(r.saturated);
    assert!(r.omega_on_wall.is_none());
}

#[test]
fn classical_walls_on_a_segment_and_on_wall_classification() {
    let cfg = config("rank2_p1xp1.toml");
    let r: ClassicalReport = round_trip(&ok(&cfg, &["walls", "classical"]));
    assert!(r.saturated);
    assert!(!r.walls.is_empty());
    assert!(r.walls.iter().all(|w| w.xi_squared.value().unwrap() < int(0)));
    let c: ClassifyReport = round_trip(&ok(&cfg, &["classify"]));
    assert_eq!(c.classification, "OnWallUndetermined");
    assert_eq!(c.wall, r.omega_on_wall);
}

#[test]
fn every_report_round_trips() {
    let worked = config("p2_worked.toml");
    round_trip::<ChargeReport>(&ok(&worked, &["charge", "eval"]));
    round_trip::<PhaseReport>(&ok(&worked, &["phase", "compare"]));
    round_trip::<ChambersReport>(&ok(&worked, &["walls", "chambers"]));
    let o: OracleReport = round_trip(&ok(&worked, &["oracle", "verify"]));
    assert!(o.clean);
    let rank2 = config("rank2_p1xp1.toml");
    round_trip::<ThresholdReport>(&ok(&rank2, &["threshold"]));
    round_trip::<StrataReport>(&ok(&rank2, &["strata"]));
    let dual = config("dual_p2.toml");
    let c: ClassifyReport = round_trip(&ok(&dual, &["classify"]));
    assert_eq!(c.classification, "Uhlenbeck");
    let s: StrataReport = round_trip(&ok(&dual, &["strata"]));
    assert_eq!(Some(&s.strata[0].type_), c.target_type.as_ref());
}

#[test]
fn output_is_byte_deterministic_across_runs_and_thread_counts() {
    let cases: [(&str, &[&str]); 4] = [
        ("p2_worked.toml", &["walls", "mini", "--filter", "heart", "--rank-bound", "3"]),
        ("p2_worked.toml", &["oracle", "verify", "--filter", "heart"]),
        ("rank2_p1xp1.toml", &["walls", "chambers"]),
        ("rank2_p1xp1.toml", &["walls", "classical"]),
    ];
    for (name, args) in cases {
        let cfg = config(name);
        let first = run_with(&cfg, args, Some("1"));
        assert_eq!(first.code, 0, "{}", first.stderr);
        for threads in [None, Some("1"), Some("4")] {
            assert_eq!(run_with(&cfg, args, threads).stdout, first.stdout, "{name} {args:?}");
        }
    }
}

#[test]
fn chambers_tile_the_interval() {
    let r: ChambersReport = round_trip(&ok(&config("rank2_p1xp1.toml"), &["walls", "chambers"]));
    let lo = r.interval.lo.value().unwrap();
    let hi = r.interval.hi.as_ref().unwrap().value().unwrap();
    let mut cursor = &lo * &lo;
    for cell in &r.cells {
        assert_eq!(cell.lo_squared.as_ref().unwrap().value().unwrap(), cursor);
        cursor = cell.hi_squared.as_ref().unwrap().value().unwrap();
    }
    assert_eq!(cursor, &hi * &hi);
}

#[test]
fn validation_errors_exit_with_2_and_name_the_field() {
    let cfg = scratch("bad_omega.toml", &P2_RANK2.replace("omega = [1]", "omega = [\"-1\"]"));
    let r = run(&cfg, &["classify"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("stability.omega"), "{}", r.stderr);
    assert!(r.stdout.is_empty());

    let r = run(&config("p2_worked.toml"), &["walls", "mini", "--interval", "3", "1"]);
    assert_eq!(r.code, 2, "{}", r.stderr);

    let r = run(&config("points_p1xp1.toml"), &["walls", "mini"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("interval"), "{}", r.stderr);

    let r = run(&config("points_p1xp1.toml"), &["walls", "bogus"]);
    assert_eq!(r.code, 2);

    let cfg = scratch("unknown_key.toml", &format!("{P2_RANK2}\n[search]\nfliter = \"heart\"\n"));
    assert_eq!(run(&cfg, &["classify"]).code, 2);
}

#[test]
fn refusals_exit_with_3() {
    let unbounded = scratch(
        "unbounded.toml",
        &format!("{P2_RANK2}\n[interval]\nlo = 1\n"),
    );
    let r = run(&unbounded, &["walls", "mini", "--filter", "aside"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.contains("refused"));
    assert_eq!(run(&config("p2_worked.toml"), &["threshold"]).code, 3);
}

#[test]
fn table_format_prints_rationals_exactly() {
    let out = ok(&config("p2_worked.toml"), &["walls", "mini", "--format", "table"]);
    assert!(out.contains("5/4"), "{out}");
    assert!(out.contains("c=-1/8"), "{out}");
    assert!(serde_json::from_str::<serde_json::Value>(&out).is_err());
}

#[test]
fn library_entry_point_matches_the_binary() {
    let cfg = config("p2_worked.toml");
    let args = ["miniwalls", "--config", cfg.to_str().unwrap(), "walls", "mini"];
    let lib = miniwalls_cli::run(args);
    let bin = run(&cfg, &args[3..]);
    assert_eq!((lib.code, lib.stdout), (bin.code, bin.stdout));
}
