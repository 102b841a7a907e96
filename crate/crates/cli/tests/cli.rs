use std::collections::HashMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use coexist::format::sig;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_coexist");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn exec(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(BIN).args(args).output().expect("spawn coexist");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn with_config(cmd: &str, text: &str, extra: &[&str]) -> Run {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.toml", text);
    let mut args = vec![cmd, "--config", cfg.to_str().unwrap()];
    args.extend_from_slice(extra);
    exec(&args)
}

/// Header plus records as field maps.
fn parse_csv(text: &str) -> (Vec<String>, Vec<HashMap<String, String>>) {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| header.iter().cloned().zip(r.unwrap().iter().map(String::from)).collect())
        .collect();
    (header, rows)
}

fn num(row: &HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap_or_else(|_| panic!("{key} = {:?}", row[key]))
}

fn sweep_header() -> Vec<String> {
    ["axis", "solver", "feasible", "R0", "R1", "CR", "SINR", "gamma_N", "epsilon"].map(String::from).to_vec()
}

#[test]
fn table1_matches_published_values() {
    let r = exec(&["table1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stderr.contains("Optimized CR"));
    let (header, rows) = parse_csv(&r.stdout);
    assert_eq!(header, ["N", "beta", "inr_db", "CR", "reference"]);
    assert_eq!(rows.len(), 20);
    for row in &rows {
        assert!((num(row, "CR") - num(row, "reference")).abs() <= 0.02, "{row:?}");
    }
    let cell = |n: &str, b: &str, i: &str| {
        rows.iter().find(|r| r["N"] == n && r["beta"] == b && r["inr_db"] == i).map(|r| num(r, "CR")).unwrap()
    };
    assert!((cell("2", "0.1", "-10") - 3.29).abs() <= 0.02);
    assert!((cell("16", "0.5", "10") - 3.36).abs() <= 0.02);
    for (b, i) in [("0.1", "-10"), ("0.5", "-10"), ("0.1", "10"), ("0.5", "10")] {
        let col: Vec<f64> = ["2", "4", "8", "16", "32"].iter().map(|n| cell(n, b, i)).collect();
        assert!(col.windows(2).all(|w| w[1] > w[0]), "{col:?}");
    }
}

#[test]
fn table1_to_file_prints_table() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t.csv");
    let r = exec(&["table1", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("INR=10 b=0.5"));
    assert_eq!(std::fs::read_to_string(out).unwrap().lines().count(), 21);
}

#[test]
fn solve_table_cell() {
    let r = with_config("solve", "[scenario]\nn = 8\nbeta = 0.5\ninr_db = 10\n", &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for key in ["gamma_N*", "epsilon*", "R0=", "R1=", "CR=", "SINR=", "rho_max=", "scenario:"] {
        assert!(r.stderr.contains(key), "missing {key}: {}", r.stderr);
    }
    let (header, rows) = parse_csv(&r.stdout);
    assert_eq!(header, sweep_header());
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["feasible"], "true");
    assert_eq!(rows[0]["axis"], "");
    assert!((num(&rows[0], "CR") - 3.27).abs() <= 0.02);
    assert!((num(&rows[0], "SINR") - 10.0).abs() < 1e-6);
}

#[test]
fn solve_without_interference_weight_is_white_capacity() {
    // Loose enough that the white codebook meets the SINR floor.
    let r = with_config("solve", "[scenario]\nn = 8\nbeta = 0\nrho_min_db = 5\n", &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, rows) = parse_csv(&r.stdout);
    assert!((num(&rows[0], "CR") - 11f64.log2()).abs() < 1e-9);
}

#[test]
fn infeasible_solve_exits_2_with_rho_max() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.toml", "[scenario]\nn = 8\nbeta = 0.5\nrho_min_db = 20\n");
    let out = dir.path().join("s.csv");
    let r = exec(&["solve", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("rho_max"), "{}", r.stderr);
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().nth(1), Some(",joint,false,,,,,,"));
}

#[test]
fn config_errors_exit_3() {
    let r = with_config("solve", "[scenario]\nn = 8\nbeta = 0.5\nsnr = 3\n", &[]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("line 4"), "{}", r.stderr);
    assert_eq!(with_config("solve", "[scenario]\nn = 1\nbeta = 0.5\n", &[]).code, 3);
    assert_eq!(with_config("solve", "[scenario]\nn = 4\nbeta = 1.5\n", &[]).code, 3);
    assert_eq!(exec(&["solve", "--config", "/nonexistent/c.toml"]).code, 3);
    assert_eq!(exec(&["solve"]).code, 3);
    let bad_sweep = "[scenario]\nn = 8\nbeta = 0.5\n[sweep]\naxis = \"beta\"\nvalues = [0.1, 0.1]\n";
    assert_eq!(with_config("sweep", bad_sweep, &[]).code, 3);
    let unsupported = "[scenario]\nn = 4\nbeta = 0.5\n[solve]\nsolver = \"papr_naif\"\n";
    assert_eq!(with_config("solve", unsupported, &[]).code, 3);
}

#[test]
fn cumulated_snr_override() {
    // The radar energy budget binds here, so the calibration matters.
    let text = "[scenario]\nn = 8\nbeta = 0.1\nrho_min_db = 12\n";
    let derived = with_config("solve", text, &[]);
    let rounded = with_config("solve", text, &["--cum-radar-snr-db", "19.4"]);
    assert_eq!(rounded.code, 0);
    let cr = |r: &Run| num(&parse_csv(&r.stdout).1[0], "CR");
    assert!((cr(&derived) - cr(&rounded)).abs() < 0.01);
    assert_ne!(derived.stdout, rounded.stdout);
}

const SINR_SWEEP: &str = "[scenario]\nn = 8\nbeta = 0.1\n[sweep]\naxis = \"rho_min_db\"\n\
values = [0, 2, 4, 6, 8, 10, 12, 14, 16, 16.6, 16.7, 18]\nsolvers = [\"joint\", \"disjoint\"]\n";

#[test]
fn sinr_sweep_is_monotone_with_onset() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.toml", SINR_SWEEP);
    let svg = dir.path().join("s.svg");
    let r = exec(&["sweep", "--config", cfg.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (header, rows) = parse_csv(&r.stdout);
    assert_eq!(header, sweep_header());
    assert_eq!(rows.len(), 24);

    let joint: Vec<_> = rows.iter().filter(|r| r["solver"] == "joint").collect();
    let feasible: Vec<f64> = joint.iter().filter(|r| r["feasible"] == "true").map(|r| num(r, "CR")).collect();
    assert_eq!(feasible.len(), 10);
    assert!(feasible.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{feasible:?}");
    // Onset between 16.6 and 16.7 dB.
    assert_eq!(joint[9]["feasible"], "true");
    assert_eq!(joint[10]["feasible"], "false");
    for r in rows.iter().filter(|r| r["feasible"] == "false") {
        for k in ["R0", "R1", "CR", "SINR", "gamma_N", "epsilon"] {
            assert_eq!(r[k], "");
        }
    }
    for (j, d) in rows.iter().step_by(2).zip(rows.iter().skip(1).step_by(2)) {
        assert_eq!(j["axis"], d["axis"]);
        if d["feasible"] == "true" {
            assert!(num(j, "CR") >= num(d, "CR") - 1e-9);
        }
    }
    let svg = std::fs::read_to_string(svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
}

#[test]
fn sweep_output_is_reproducible_across_workers() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.toml", SINR_SWEEP);
    let cfg = cfg.to_str().unwrap();
    let outputs: Vec<String> = [["--workers", "1"], ["--workers", "3"], ["--workers", "3"]]
        .iter()
        .map(|w| {
            let r = exec(&["sweep", "--config", cfg, w[0], w[1]]);
            assert_eq!(r.code, 0);
            r.stdout
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    assert_eq!(exec(&["sweep", "--config", cfg, "--workers", "0"]).code, 3);
}

#[test]
fn sweep_out_path_from_config_and_flag() {
    let dir = TempDir::new().unwrap();
    let in_cfg = dir.path().join("cfg.csv");
    let text = format!(
        "[scenario]\nn = 4\nbeta = 0.5\n[sweep]\naxis = \"inr_db\"\nvalues = [-10, 0, 10]\nout = {:?}\n",
        in_cfg.to_str().unwrap()
    );
    let cfg = write_config(&dir, "c.toml", &text);
    let r = exec(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("sweep over inr_db"));
    assert_eq!(std::fs::read_to_string(&in_cfg).unwrap().lines().count(), 4);

    let flag = dir.path().join("flag.csv");
    let r = exec(&["sweep", "--config", cfg.to_str().unwrap(), "--out", flag.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(std::fs::read(&flag).unwrap(), std::fs::read(&in_cfg).unwrap());
}

#[test]
fn csv_round_trips_at_printed_precision() {
    let r = with_config("sweep", SINR_SWEEP, &[]);
    let (_, rows) = parse_csv(&r.stdout);
    for row in &rows {
        for k in ["axis", "R0", "R1", "CR", "SINR", "gamma_N", "epsilon"] {
            if !row[k].is_empty() {
                let x: f64 = row[k].parse().unwrap();
                assert_eq!(sig(x), row[k]);
                let digits = row[k].trim_start_matches('-').replace('.', "");
                assert!(digits.trim_start_matches('0').len() <= 12, "{}", row[k]);
            }
        }
    }
}

#[test]
fn mismatched_beta_costs_little() {
    let text = "[scenario]\nn = 8\nbeta = 0.3\nalpha = 0.3\nrho_min_db = 5\ninr_db = 10\n[sweep]\naxis = \"beta\"\n\
values = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]\n";
    let r = with_config("sweep", text, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, rows) = parse_csv(&r.stdout);
    let matched = rows.iter().find(|r| r["axis"] == "0.3").map(|r| num(r, "CR")).unwrap();
    for row in &rows {
        let cr = num(row, "CR");
        assert!(cr <= matched + 1e-9, "beta = alpha is optimal: {row:?}");
        assert!((matched - cr) / matched <= 0.05, "{row:?}");
    }
    let worst = rows.iter().map(|r| num(r, "CR")).fold(f64::INFINITY, f64::min);
    assert!(worst < matched);
}

#[test]
fn papr_constraint_costs_rate() {
    let mut by_rho = Vec::new();
    for rho in [0, 5, 10, 15] {
        for beta in [0.1, 0.5] {
            let text = format!(
                "[scenario]\nn = 8\nbeta = {beta}\nmodel = \"incoherent\"\nrho_min_db = {rho}\n\
                 [sweep]\naxis = \"delta\"\nvalues = [1, 2, 4, 8]\nsolvers = [\"papr_naif\"]\n"
            );
            let r = with_config("sweep", &text, &[]);
            assert_eq!(r.code, 0, "{}", r.stderr);
            let (_, rows) = parse_csv(&r.stdout);
            let cr: Vec<f64> = rows.iter().map(|r| num(r, "CR")).collect();
            assert!(cr.windows(2).all(|w| w[1] >= w[0] - 1e-9), "rho {rho} beta {beta}: {cr:?}");
            by_rho.push(cr);
        }
    }
    // Unconstrained PAPR is the joint optimum.
    let joint = with_config("solve", "[scenario]\nn = 8\nbeta = 0.5\nmodel = \"incoherent\"\nrho_min_db = 15\n", &[]);
    let cr = num(&parse_csv(&joint.stdout).1[0], "CR");
    assert!((by_rho.last().unwrap()[3] - cr).abs() < 1e-9);
}

fn region(text: &str, extra: &[&str]) -> Vec<HashMap<String, String>> {
    let r = with_config("region", text, extra);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (header, rows) = parse_csv(&r.stdout);
    assert_eq!(header, ["model", "kind", "beta", "R0", "R1"]);
    rows
}

fn curve(rows: &[HashMap<String, String>], model: &str, kind: &str) -> Vec<(f64, f64)> {
    rows.iter().filter(|r| r["model"] == model && r["kind"] == kind).map(|r| (num(r, "R0"), num(r, "R1"))).collect()
}

#[test]
fn region_rows_and_endpoints() {
    let text = "[scenario]\nn = 2\nbeta = 0.5\nrho_min_db = 5\n[region]\nsamples = 200\nbetas = 101\n";
    let rows = region(text, &[]);
    assert_eq!(rows.len(), 2 * (101 + 200));
    for model in ["coherent", "incoherent"] {
        let b = curve(&rows, model, "boundary");
        assert_eq!(b.len(), 101);
        assert_eq!(curve(&rows, model, "sample").len(), 200);
        assert!(b.windows(2).all(|w| w[1].0 <= w[0].0 + 1e-12 && w[1].1 >= w[0].1 - 1e-12));
        for (beta, end) in [("0", b[0]), ("1", b[100])] {
            let solve = format!("[scenario]\nn = 2\nbeta = {beta}\nrho_min_db = 5\nmodel = \"{model}\"\n");
            let r = with_config("solve", &solve, &[]);
            let row = &parse_csv(&r.stdout).1[0];
            assert!((num(row, "R0") - end.0).abs() < 1e-9 && (num(row, "R1") - end.1).abs() < 1e-9);
        }
    }
    // Samples never beat the boundary of their own model at their own weight mix.
    for model in ["coherent", "incoherent"] {
        let b = curve(&rows, model, "boundary");
        for (r0, r1) in curve(&rows, model, "sample") {
            for (k, (b0, b1)) in b.iter().enumerate() {
                let beta = k as f64 / 100.0;
                assert!(beta * r1 + (1.0 - beta) * r0 <= beta * b1 + (1.0 - beta) * b0 + 1e-9);
            }
        }
    }
    // Coherent designs are achievable under incoherent interference.
    let inc = curve(&rows, "incoherent", "boundary");
    for (r0, r1) in curve(&rows, "coherent", "sample") {
        let best = (0..=100).map(|k| k as f64 / 100.0).all(|beta| {
            let (b0, b1) = inc[(beta * 100.0).round() as usize];
            beta * r1 + (1.0 - beta) * r0 <= beta * b1 + (1.0 - beta) * b0 + 1e-9
        });
        assert!(best);
    }
}

#[test]
fn region_is_reproducible_and_seeded() {
    let text = "[scenario]\nn = 2\nbeta = 0.5\nrho_min_db = 5\n[region]\nsamples = 50\nbetas = 11\n";
    let a = with_config("region", text, &["--seed", "3", "--workers", "1"]);
    let b = with_config("region", text, &["--seed", "3", "--workers", "2"]);
    let c = with_config("region", text, &["--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn infeasible_region_exits_2() {
    let r = with_config("region", "[scenario]\nn = 2\nbeta = 0.5\nrho_min_db = 25\n", &[]);
    assert_eq!(r.code, 2);
}

/// Linear interpolation of `R1` at `r0` on a curve sorted by decreasing `R0`.
fn r1_at(curve: &[(f64, f64)], r0: f64) -> Option<f64> {
    curve.windows(2).find(|w| w[1].0 <= r0 && r0 <= w[0].0).map(|w| {
        let (a, b) = (w[0], w[1]);
        if (a.0 - b.0).abs() < 1e-15 {
            a.1.max(b.1)
        } else {
            b.1 + (a.1 - b.1) * (r0 - b.0) / (a.0 - b.0)
        }
    })
}

#[test]
fn colored_noise_boundary_dominates_white() {
    let mut gaps = Vec::new();
    for inr in [-10, 10] {
        let text = format!(
            "[scenario]\nn = 8\nbeta = 0.5\nrho_min_db = 10\ninr_db = {inr}\n[noise]\nexp_corr = 0.6666666666666666\n\
             [region]\nsamples = 20\nbetas = 51\nmodels = [\"coherent\"]\n"
        );
        let svg_dir = TempDir::new().unwrap();
        let svg = svg_dir.path().join("r.svg");
        let rows = region(&text, &["--svg", svg.to_str().unwrap()]);
        assert!(std::fs::read_to_string(&svg).unwrap().contains("white noise"));
        let colored = curve(&rows, "coherent", "boundary");
        let white = curve(&rows, "coherent", "boundary_white");
        assert_eq!((colored.len(), white.len()), (51, 51));
        let mut gap = 0.0f64;
        let mut compared = 0;
        for &(r0, r1w) in &white {
            if let Some(r1c) = r1_at(&colored, r0) {
                assert!(r1c >= r1w - 1e-9, "INR {inr}: R0 {r0} colored {r1c} white {r1w}");
                gap = gap.max(r1c - r1w);
                compared += 1;
            }
        }
        assert!(compared >= 25, "{compared}");
        assert!(colored[0].0 >= white[0].0 - 1e-12 && colored[50].1 >= white[50].1 - 1e-12);
        gaps.push(gap);
    }
    // The gain from correlation shows at low INR.
    assert!(gaps[0] > 0.01 && gaps[0] > gaps[1], "{gaps:?}");
}

const VERIFY: &str = "[scenario]\nn = 8\nbeta = 0.5\ninr_db = 10\n";

#[test]
fn verify_passes_at_default_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "c.toml", VERIFY);
    let out = dir.path().join("v.csv");
    let r = exec(&["verify", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("seed 42"));
    let text = std::fs::read_to_string(&out).unwrap();
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["check", "empirical", "analytic", "tolerance", "passed"]);
    let names: Vec<&str> = rows.iter().map(|r| r["check"].as_str()).collect();
    assert_eq!(names, ["sinr_h0", "sinr_h1", "hit_rate", "interf_cov", "clean_cov", "kl_10", "kl_01"]);
    assert!(rows.iter().all(|r| r["passed"] == "true"));

    let again = dir.path().join("v2.csv");
    exec(&["verify", "--config", cfg.to_str().unwrap(), "--out", again.to_str().unwrap(), "--workers", "2"]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn verify_without_interference_passes() {
    let text = "[scenario]\nn = 4\nbeta = 0.5\nalpha = 0\n[verify]\ntrials = 20000\nseed = 7\n";
    let r = with_config("verify", text, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (_, rows) = parse_csv(&r.stdout);
    let hit = rows.iter().find(|r| r["check"] == "hit_rate").unwrap();
    assert_eq!(num(hit, "empirical"), 0.0);
}

#[test]
fn verify_rejects_tiny_trial_counts() {
    let r = with_config("verify", VERIFY, &["--trials", "10"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("trials"));
}

#[test]
fn verify_reports_a_failed_check_with_exit_4() {
    // At the minimum trial count about one seed in three thousand lands a
    // check outside 4 sigma; seed 377 is such a seed (kl_10).
    let text = "[scenario]\nn = 2\nbeta = 0.5\n";
    let r = with_config("verify", text, &["--trials", "10000", "--seed", "377"]);
    assert_eq!(r.code, 4, "{}", r.stderr);
    assert!(r.stderr.contains("check(s) kl_10 outside the 4-sigma band"), "{}", r.stderr);
    let (_, rows) = parse_csv(&r.stdout);
    assert_eq!(rows.iter().filter(|r| r["passed"] == "false").count(), 1);
    assert_eq!(with_config("verify", text, &["--trials", "10000", "--seed", "376"]).code, 0);
}

#[test]
fn help_lists_commands_and_flags() {
    let r = exec(&["--help"]);
    assert_eq!(r.code, 0);
    for w in ["solve", "sweep", "table1", "region", "verify", "--config", "--out", "--svg", "--trials", "--seed", "--workers"] {
        assert!(r.stdout.contains(w), "{w}");
    }
}
