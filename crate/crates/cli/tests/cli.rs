use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn amm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amm"))
        .args(args)
        .env_remove("AMM_QUAD_ORDER")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_matrix(path: &Path, re: Value, im: Value) {
    let n = re.as_array().unwrap().len();
    fs::write(path, json!({"n": n, "re": re, "im": im}).to_string()).unwrap();
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn entry(v: &Value, i: usize, j: usize) -> (f64, f64) {
    (v["re"][i][j].as_f64().unwrap(), v["im"][i][j].as_f64().unwrap())
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn compute_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_matrix(&d.join("a.json"), json!([[4.0]]), json!([[0.0]]));
    write_matrix(&d.join("b.json"), json!([[9.0]]), json!([[0.0]]));
    let out = amm(&["compute", "--op", "geometric", "--lambda", "0.5", "--a", &p(d, "a.json"), "--b", &p(d, "b.json"), "--out", &p(d, "g.json")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (re, im) = entry(&read_json(&d.join("g.json")), 0, 0);
    assert!((re - 6.0).abs() < 1e-12 && im.abs() < 1e-12);

    write_matrix(&d.join("d.json"), json!([[4.0, 0.0], [0.0, 9.0]]), json!([[0.0, 0.0], [0.0, 0.0]]));
    let out = amm(&["compute", "--op", "func", "--fn", "power", "--param", "0.5", "--a", &p(d, "d.json"), "--out", &p(d, "f.json")]);
    assert_eq!(code(&out), 0);
    let f = read_json(&d.join("f.json"));
    assert!((entry(&f, 0, 0).0 - 2.0).abs() < 1e-12);
    assert!((entry(&f, 1, 1).0 - 3.0).abs() < 1e-12);
    assert!(entry(&f, 0, 1).0.abs() < 1e-12);

    write_matrix(&d.join("two.json"), json!([[2.0]]), json!([[0.0]]));
    write_matrix(&d.join("eight.json"), json!([[8.0]]), json!([[0.0]]));
    let out = amm(&["compute", "--op", "harmonic", "--t", "0.5", "--a", &p(d, "two.json"), "--b", &p(d, "eight.json"), "--out", &p(d, "h.json")]);
    assert_eq!(code(&out), 0);
    assert!((entry(&read_json(&d.join("h.json")), 0, 0).0 - 3.2).abs() < 1e-14);

    for op in ["arithmetic", "geometric-neg"] {
        let out = amm(&["compute", "--op", op, "--t", "0.5", "--a", &p(d, "two.json"), "--b", &p(d, "eight.json"), "--out", &p(d, "x.json")]);
        assert_eq!(code(&out), 0, "{op}");
    }
    let out = amm(&["compute", "--op", "sigma", "--fn", "uniform", "--a", &p(d, "two.json"), "--b", &p(d, "two.json"), "--out", &p(d, "s.json")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!((entry(&read_json(&d.join("s.json")), 0, 0).0 - 2.0).abs() < 1e-12);
}

#[test]
fn compute_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_matrix(&d.join("a.json"), json!([[4.0]]), json!([[0.0]]));
    write_matrix(&d.join("i.json"), json!([[0.0]]), json!([[1.0]]));
    let out = amm(&["compute", "--op", "geometric", "--lambda", "0.5", "--a", &p(d, "i.json"), "--b", &p(d, "a.json"), "--out", &p(d, "o.json")]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("margin"));

    let out = amm(&["compute", "--op", "geometric", "--a", &p(d, "a.json"), "--b", &p(d, "a.json"), "--out", &p(d, "o.json")]);
    assert_eq!(code(&out), 2);
    let out = amm(&["compute", "--op", "harmonic", "--t", "0.5", "--a", &p(d, "a.json"), "--out", &p(d, "o.json")]);
    assert_eq!(code(&out), 2);
    let out = amm(&["compute", "--op", "bogus", "--a", &p(d, "a.json"), "--out", &p(d, "o.json")]);
    assert_eq!(code(&out), 2);
    let out = amm(&["compute", "--op", "harmonic", "--t", "1.5", "--a", &p(d, "a.json"), "--b", &p(d, "a.json"), "--out", &p(d, "o.json")]);
    assert_eq!(code(&out), 2);
    fs::write(d.join("ragged.json"), r#"{"n":2,"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#).unwrap();
    let out = amm(&["compute", "--op", "func", "--fn", "power", "--param", "0.5", "--a", &p(d, "ragged.json"), "--out", &p(d, "o.json")]);
    assert_eq!(code(&out), 2);
    assert!(!d.join("o.json").exists());
}

#[test]
fn angle_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_matrix(&d.join("id.json"), json!([[1.0, 0.0], [0.0, 1.0]]), json!([[0.0, 0.0], [0.0, 0.0]]));
    let out = amm(&["angle", "--a", &p(d, "id.json")]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, json!({"accretive": true, "alpha_radians": 0.0, "m": 1.0, "M": 1.0}));

    write_matrix(&d.join("s.json"), json!([[1.0, 0.0], [0.0, 1.0]]), json!([[1.0, 0.0], [0.0, -1.0]]));
    let v: Value = serde_json::from_slice(&amm(&["angle", "--a", &p(d, "s.json")]).stdout).unwrap();
    assert!((v["alpha_radians"].as_f64().unwrap() - 0.7853982).abs() < 1e-7);

    write_matrix(&d.join("i.json"), json!([[0.0]]), json!([[1.0]]));
    assert_eq!(code(&amm(&["angle", "--a", &p(d, "i.json")])), 3);
}

#[test]
fn gen_is_deterministic_and_certified() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let gen = |out: &str, alpha: &str| {
        amm(&["gen", "--dim", "4", "--alpha", alpha, "--m", "1", "--M", "4", "--count", "5", "--seed", "9", "--out", &p(d, out)])
    };
    assert_eq!(code(&gen("x", "0.8")), 0);
    assert_eq!(code(&gen("y", "0.8")), 0);
    for i in 0..5 {
        let name = format!("sample_{i}.json");
        assert_eq!(fs::read(d.join("x").join(&name)).unwrap(), fs::read(d.join("y").join(&name)).unwrap());
        let out = amm(&["angle", "--a", &p(&d.join("x"), &name)]);
        assert_eq!(code(&out), 0);
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(v["alpha_radians"].as_f64().unwrap() <= 0.8 + 1e-10);
        assert!(v["m"].as_f64().unwrap() >= 1.0 - 1e-10 && v["M"].as_f64().unwrap() <= 4.0 + 1e-10);
    }
    assert!(!d.join("x").join("sample_5.json").exists());

    assert_eq!(code(&gen("z", "0")), 0);
    let z = read_json(&d.join("z").join("sample_0.json"));
    for i in 0..4 {
        assert_eq!(z["im"][i][i].as_f64().unwrap(), 0.0);
        for j in 0..4 {
            assert_eq!(z["re"][i][j], z["re"][j][i]);
            assert_eq!(z["im"][i][j].as_f64().unwrap(), -z["im"][j][i].as_f64().unwrap());
        }
    }
    assert_eq!(code(&gen("w", "2.0")), 2);
    let out = amm(&["gen", "--dim", "0", "--alpha", "0.1", "--m", "1", "--M", "4", "--count", "1", "--seed", "1", "--out", &p(d, "v")]);
    assert_eq!(code(&out), 2);
}

fn config(d: &Path, name: &str, checks: Value) -> String {
    fs::write(d.join(name), json!({ "checks": checks }).to_string()).unwrap();
    p(d, name)
}

fn check(id: &str, alpha: f64) -> Value {
    json!({"id": id, "dim": 3, "alpha_max": alpha, "m": 1, "M": 4, "count": 10, "seed": 4,
           "function": {"name": "power", "param": 0.5}})
}

#[test]
fn suite_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = config(d, "c.json", json!([check("amgmhm", 0.6), check("geometric_flip", 0.6)]));
    let run = |report: &str, extra: &[&str]| {
        let mut args = vec!["suite", "--config", &cfg, "--report"];
        let r = p(d, report);
        args.push(&r);
        args.extend_from_slice(extra);
        code(&amm(&args))
    };
    assert_eq!(run("r1.json", &[]), 0);
    assert_eq!(run("r2.json", &[]), 0);
    assert_eq!(fs::read(d.join("r1.json")).unwrap(), fs::read(d.join("r2.json")).unwrap());

    let r = read_json(&d.join("r1.json"));
    let text = fs::read_to_string(d.join("r1.json")).unwrap();
    let order = ["\"id\"", "\"params\"", "\"samples\"", "\"min_margin\"", "\"worst_index\"", "\"flagged\"", "\"pass\"", "\"error\"", "\"elapsed_ms\"", "\"summary\""];
    let pos: Vec<usize> = order.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(r["checks"][0]["id"], "amgmhm");
    assert_eq!(r["checks"][0]["elapsed_ms"], Value::Null);
    assert_eq!(r["summary"]["all_pass"], true);
    assert_eq!(r["summary"]["total"], 2);

    assert_eq!(run("r3.json", &["--timings"]), 0);
    assert!(read_json(&d.join("r3.json"))["checks"][0]["elapsed_ms"].is_number());
}

#[test]
fn suite_failures_and_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let report = p(d, "r.json");

    let cfg = config(d, "fail.json", json!([check("pos_ts", 0.0), check("pos_jensen", 0.0)]));
    let out = amm(&["suite", "--config", &cfg, "--report", &report]);
    assert_eq!(code(&out), 5);
    let r = read_json(&d.join("r.json"));
    assert_eq!(r["summary"]["failing_ids"], json!(["pos_ts"]));
    assert_eq!(r["checks"][1]["pass"], true);

    let cfg = config(d, "unknown.json", json!([check("amgmhm", 0.5), check("not_a_check", 0.5)]));
    let out = amm(&["suite", "--config", &cfg, "--report", &p(d, "u.json")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not_a_check"));
    assert!(!d.join("u.json").exists());

    let mut k = check("kantorovich", 0.5);
    k["second_function"] = json!({"name": "power", "param": 0.3});
    k["map"] = json!({"variant": "pinching", "seed": 1});
    let cfg = config(d, "kant.json", json!([k]));
    assert_eq!(code(&amm(&["suite", "--config", &cfg, "--report", &report])), 2);

    let mut a = check("ando_sector", 0.5);
    a["map"] = json!({"variant": "teleport", "seed": 1});
    let cfg = config(d, "map.json", json!([a]));
    assert_eq!(code(&amm(&["suite", "--config", &cfg, "--report", &report])), 2);

    fs::write(d.join("junk.json"), "{\"checks\": [").unwrap();
    assert_eq!(code(&amm(&["suite", "--config", &p(d, "junk.json"), "--report", &report])), 2);
    let mut extra = check("amgmhm", 0.5);
    extra["colour"] = json!("blue");
    let cfg = config(d, "extra.json", json!([extra]));
    assert_eq!(code(&amm(&["suite", "--config", &cfg, "--report", &report])), 2);
    assert_eq!(code(&amm(&["suite", "--report", &report])), 2);
    let cfg = config(d, "ok.json", json!([check("amgmhm", 0.5)]));
    assert_eq!(code(&amm(&["suite", "--config", &cfg, "--report", &report, "--jobs", "0"])), 2);
}

#[test]
fn quadrature_order_override() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_matrix(&d.join("a.json"), json!([[4.0]]), json!([[0.0]]));
    let run = |order: &str| {
        Command::new(env!("CARGO_BIN_EXE_amm"))
            .args(["compute", "--op", "func", "--fn", "power", "--param", "0.5", "--a", &p(d, "a.json"), "--out", &p(d, "o.json")])
            .env("AMM_QUAD_ORDER", order)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("40")), 0);
    assert_eq!(code(&run("1")), 2);
    assert_eq!(code(&run("many")), 2);
}
