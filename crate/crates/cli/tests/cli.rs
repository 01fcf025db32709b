use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn dyncorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyncorr")).args(args).output().unwrap()
}

fn ok(args: &[&str]) {
    let out = dyncorr(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn code(args: &[&str]) -> i32 {
    dyncorr(args).status.code().unwrap()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_owned()
    }
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let headers = rdr.headers().unwrap().iter().map(String::from).collect::<Vec<_>>();
    let mut cols = vec![Vec::new(); headers.len()];
    for rec in rdr.records() {
        for (c, cell) in rec.unwrap().iter().enumerate() {
            cols[c].push(if cell.is_empty() {
                None
            } else {
                Some(cell.parse::<f64>().unwrap())
            });
        }
    }
    (headers, cols)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn simulate(dir: &Dir, name: &str, extra: &[&str]) -> PathBuf {
    let out = dir.arg(name);
    let mut args = vec!["simulate", "--out", &out];
    args.extend_from_slice(extra);
    ok(&args);
    dir.path(name)
}

#[test]
fn simulate_d1_normal() {
    let d = Dir::new();
    let p = simulate(
        &d,
        "s.csv",
        &["--design", "d1", "--dist", "normal", "--t-len", "300", "--seed", "7"],
    );
    let (headers, cols) = read_csv(&p);
    assert_eq!(headers, ["t", "x1", "x2", "p_true"]);
    assert_eq!(cols[0].len(), 300);
    assert!(cols[3].iter().all(|v| *v == Some(0.0)));
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(!text.contains('\r'));
}

#[test]
fn simulate_d2a_profile_column() {
    let d = Dir::new();
    let p = simulate(&d, "s.csv", &["--design", "d2a", "--dist", "normal", "--t-len", "600"]);
    let (_, cols) = read_csv(&p);
    for (t, p) in cols[0].iter().zip(&cols[3]) {
        assert!((p.unwrap() - (t.unwrap() / 128.0).sin()).abs() < 1e-12);
    }
}

#[test]
fn simulate_cauchy_is_clipped() {
    let d = Dir::new();
    let p = simulate(&d, "s.csv", &["--design", "d1", "--dist", "cauchy", "--t-len", "150"]);
    let (_, cols) = read_csv(&p);
    assert!(cols[1].iter().chain(&cols[2]).all(|v| v.unwrap().abs() <= 50.0));
}

#[test]
fn simulate_is_deterministic() {
    let d = Dir::new();
    let args = ["--design", "d3b", "--dist", "cauchy", "--t-len", "120", "--seed", "3"];
    let a = simulate(&d, "a.csv", &args);
    let b = simulate(&d, "b.csv", &args);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

fn write_pair(dir: &Dir, name: &str, f: impl Fn(f64) -> f64) -> PathBuf {
    let mut text = String::from("t,a,b\n");
    for t in 1..=80 {
        let x = (t as f64 * 0.7).sin() * 2.0 + (t % 7) as f64 * 0.3;
        text.push_str(&format!("{t},{x},{}\n", f(x)));
    }
    let p = dir.path(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn estimate_identical_and_negated_columns() {
    let d = Dir::new();
    for (name, sign) in [("same.csv", 1.0), ("neg.csv", -1.0)] {
        let input = write_pair(&d, name, |x| sign * x);
        let out = d.arg("track.csv");
        ok(&[
            "estimate",
            "--input",
            input.to_str().unwrap(),
            "--method",
            "sw,wvga",
            "--out",
            &out,
        ]);
        let (headers, cols) = read_csv(&d.path("track.csv"));
        assert_eq!(headers, ["t", "rho_sw", "rho_wvga"]);
        assert_eq!(cols[0][0], Some(15.0));
        for c in &cols[1..] {
            assert!(c.iter().all(|v| (v.unwrap() - sign).abs() < 1e-12), "{name}");
        }
    }
}

#[test]
fn estimate_dcc_nonconvergence_is_an_empty_column() {
    let d = Dir::new();
    let input = write_pair(&d, "same.csv", |x| x);
    let out = d.arg("track.csv");
    ok(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--method",
        "dcc",
        "--out",
        &out,
    ]);
    let (headers, cols) = read_csv(&d.path("track.csv"));
    assert_eq!(headers, ["t", "rho_dcc"]);
    assert_eq!(cols[1].len(), 80);
    assert!(cols[1].iter().all(Option::is_none));
    let side = read_json(&d.path("track.json"));
    assert_eq!(side["dcc"]["status"], "DID_NOT_CONVERGE");
}

#[test]
fn estimate_sidecar_orders_methods_on_d1_normal() {
    let d = Dir::new();
    let sim = simulate(
        &d,
        "s.csv",
        &["--design", "d1", "--dist", "normal", "--t-len", "300", "--seed", "7"],
    );
    let out = d.arg("track.csv");
    ok(&[
        "estimate",
        "--input",
        sim.to_str().unwrap(),
        "--method",
        "all",
        "--out",
        &out,
    ]);
    let side = read_json(&d.path("track.json"));
    let m = |k: &str| side[k]["mean_abs"].as_f64().unwrap();
    assert_eq!(side["dcc"]["status"], "CONVERGED");
    assert!(m("dcc") < m("wvga") && m("wvga") < m("sw"));
    let (headers, cols) = read_csv(&d.path("track.csv"));
    assert_eq!(headers, ["t", "rho_sw", "rho_wvga", "rho_dcc"]);
    assert_eq!(cols[0].len(), 300);
    assert!(cols[1][..14].iter().all(Option::is_none) && cols[1][14].is_some());
}

#[test]
fn estimate_column_selection_and_pairs() {
    let d = Dir::new();
    let mut text = String::from("t,u,v,w\n");
    for t in 1..=40 {
        let x = t as f64;
        text.push_str(&format!("{t},{},{},{}\n", (x * 0.3).sin(), (x * 0.5).cos(), x.sqrt()));
    }
    std::fs::write(d.path("in.csv"), text).unwrap();
    let input = d.arg("in.csv");

    ok(&[
        "estimate",
        "--input",
        &input,
        "--cols",
        "w,2",
        "--method",
        "sw",
        "--out",
        &d.arg("one.csv"),
    ]);
    assert_eq!(read_json(&d.path("one.json"))["columns"], serde_json::json!(["w", "u"]));

    ok(&[
        "estimate",
        "--input",
        &input,
        "--pairs",
        "all",
        "--method",
        "sw",
        "--out",
        &d.arg("pairs"),
    ]);
    let mut names: Vec<String> = std::fs::read_dir(d.path("pairs"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    assert_eq!(names, ["u__v.csv", "u__w.csv", "v__w.csv"]);
}

#[test]
fn estimate_errors() {
    let d = Dir::new();
    let out = d.arg("o.csv");
    assert_eq!(code(&["estimate", "--input", &d.arg("missing.csv"), "--out", &out]), 2);

    std::fs::write(d.path("bad.csv"), "a,b\n1,2\n3,oops\n").unwrap();
    assert_eq!(code(&["estimate", "--input", &d.arg("bad.csv"), "--out", &out]), 2);

    let short = write_pair(&d, "short.csv", |x| x * 0.5);
    let s = short.to_str().unwrap();
    assert_eq!(code(&["estimate", "--input", s, "--window", "200", "--out", &out]), 2);
    assert_eq!(code(&["estimate", "--input", s, "--method", "pca", "--out", &out]), 1);
    assert_eq!(code(&["estimate", "--input", s, "--cols", "a", "--out", &out]), 1);
    assert_eq!(code(&["estimate", "--input", s, "--cols", "a,zz", "--out", &out]), 2);
}

#[test]
fn bench_single_rep_has_zero_sd() {
    let d = Dir::new();
    let out = d.arg("b.json");
    ok(&[
        "bench",
        "--design",
        "d2b",
        "--dist",
        "normal",
        "--t-len",
        "100",
        "--reps",
        "1",
        "--methods",
        "sw,wvga",
        "--out",
        &out,
    ]);
    let v = read_json(&d.path("b.json"));
    assert_eq!(v["meta"]["reps"], 1);
    assert!(v["meta"]["wall_time_s"].as_f64().unwrap() >= 0.0);
    for m in ["sw", "wvga"] {
        for k in ["mean_abs", "max_abs", "mse"] {
            assert_eq!(v[m][k]["sd"], 0.0, "{m}.{k}");
        }
    }
    assert!(v.get("dcc").is_none());
}

#[test]
fn bench_d3a_cauchy_wvga_beats_sw() {
    let d = Dir::new();
    let out = d.arg("b.json");
    ok(&[
        "bench",
        "--design",
        "d3a",
        "--dist",
        "cauchy",
        "--reps",
        "100",
        "--methods",
        "sw,wvga",
        "--out",
        &out,
    ]);
    let v = read_json(&d.path("b.json"));
    assert!(v["wvga"]["mse"]["median"].as_f64().unwrap() < v["sw"]["mse"]["median"].as_f64().unwrap());
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    assert_eq!(
        code(&["simulate", "--design", "d9", "--dist", "normal", "--out", "x.csv"]),
        1
    );
    assert_eq!(code(&["simulate", "--design", "d1"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["bench", "--help"]), 0);
    let d = Dir::new();
    assert_eq!(
        code(&[
            "bench",
            "--design",
            "d1",
            "--dist",
            "normal",
            "--reps",
            "0",
            "--out",
            &d.arg("b.json")
        ]),
        1
    );
}

#[test]
fn unwritable_and_invalid_simulate_exit_nonzero() {
    let out = dyncorr(&[
        "simulate",
        "--design",
        "d1",
        "--dist",
        "normal",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let d = Dir::new();
    assert_eq!(
        code(&[
            "simulate",
            "--design",
            "d1",
            "--dist",
            "normal",
            "--t-len",
            "10",
            "--out",
            &d.arg("x.csv")
        ]),
        2
    );
}

fn svg_series(path: &Path) -> Vec<(String, usize)> {
    let text = std::fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    doc.descendants()
        .filter(|n| n.has_tag_name("g") && n.attribute("class").is_some_and(|c| c.starts_with("series")))
        .map(|g| {
            let lines = g.children().filter(|c| c.has_tag_name("polyline")).count();
            (g.attribute("data-name").unwrap().to_owned(), lines)
        })
        .collect()
}

#[test]
fn plot_counts_segments() {
    let d = Dir::new();
    std::fs::write(d.path("one.csv"), "t,rho_wvga\n15,0.1\n16,0.2\n17,-0.3\n").unwrap();
    ok(&["plot", "--input", &d.arg("one.csv"), "--out", &d.arg("one.svg")]);
    assert_eq!(svg_series(&d.path("one.svg")), [("rho_wvga".to_owned(), 1)]);

    // runs: [1,2] [4] [7,8]; the second column has no gaps
    std::fs::write(
        d.path("gaps.csv"),
        "t,rho_sw,rho_dcc\n1,0.1,0\n2,0.2,0\n3,,0\n4,0.4,0\n5,,0\n6,,0\n7,0.5,0\n8,0.6,0\n9,,0\n",
    )
    .unwrap();
    ok(&["plot", "--input", &d.arg("gaps.csv"), "--out", &d.arg("gaps.svg")]);
    assert_eq!(
        svg_series(&d.path("gaps.svg")),
        [("rho_sw".to_owned(), 3), ("rho_dcc".to_owned(), 1)]
    );
}

#[test]
fn plot_with_truth_and_escaping() {
    let d = Dir::new();
    let sim = simulate(&d, "s.csv", &["--design", "d2b", "--dist", "normal", "--t-len", "100"]);
    ok(&["estimate", "--input", sim.to_str().unwrap(), "--out", &d.arg("tr.csv")]);
    ok(&[
        "plot",
        "--input",
        &d.arg("tr.csv"),
        "--truth",
        sim.to_str().unwrap(),
        "--out",
        &d.arg("p.svg"),
    ]);
    let series = svg_series(&d.path("p.svg"));
    let names: Vec<&str> = series.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["rho_sw", "rho_wvga", "rho_dcc", "p_true"]);
    assert!(series.iter().all(|(_, k)| *k == 1));
    let text = std::fs::read_to_string(d.path("p.svg")).unwrap();
    assert!(text.contains("stroke=\"#000000\""));

    std::fs::write(d.path("odd.csv"), "t,\"a<b & c\"\n1,0.5\n2,0.25\n").unwrap();
    ok(&["plot", "--input", &d.arg("odd.csv"), "--out", &d.arg("odd.svg")]);
    assert_eq!(svg_series(&d.path("odd.svg"))[0].0, "a<b & c");
}

#[test]
fn plot_rejects_malformed_tracks() {
    let d = Dir::new();
    std::fs::write(d.path("no_t.csv"), "x,rho_sw\n1,0.5\n").unwrap();
    assert_eq!(
        code(&["plot", "--input", &d.arg("no_t.csv"), "--out", &d.arg("o.svg")]),
        2
    );
    std::fs::write(d.path("text.csv"), "t,rho_sw\n1,abc\n").unwrap();
    assert_eq!(
        code(&["plot", "--input", &d.arg("text.csv"), "--out", &d.arg("o.svg")]),
        2
    );
    std::fs::write(d.path("ragged.csv"), "t,rho_sw\n1,0.5,9\n").unwrap();
    assert_eq!(
        code(&["plot", "--input", &d.arg("ragged.csv"), "--out", &d.arg("o.svg")]),
        2
    );
}
