use deterministic_bridge::sample_bridge_into;
use distributions::LengthLaw;
use gaussian_core::PathRng;
use info_process::InfoModel;
use randbridge_cli::filter::filter_rows;
use randbridge_cli::Config;
use std::path::Path;
use std::process::{Command, Output};

const TWO_PIN: &str = r#"
[length]
kind = "exponential"
rate = 0.1

[pin]
kind = "discrete_pins"
points = [-4.0, 4.0]
probs = [0.3, 0.7]

[grid]
t_max = 5.0
n_steps = 500
"#;

fn randbridge(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randbridge")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    std::fs::write(dir.join(name), body).unwrap();
    name.to_string()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// `(path_id, value, absorbed)` of the last row of every path.
fn final_rows(csv: &str) -> Vec<(usize, f64, bool)> {
    let mut last: Vec<(usize, f64, bool)> = Vec::new();
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let row = (f[0].parse().unwrap(), f[2].parse().unwrap(), f[3] == "1");
        match last.last_mut() {
            Some(prev) if prev.0 == row.0 => *prev = row,
            _ => last.push(row),
        }
    }
    last
}

#[test]
fn config_round_trip() {
    let text = format!(
        "seed = 9\n{TWO_PIN}\n[simulate]\npaths = 3\nmethod = \"euler\"\n\n[density]\nkind = \"info_transition\"\nt = 1.0\nx = 0.5\nu = 2.0\ngrid = {{ lo = -1.0, hi = 1.0, n = 5 }}\n\n[verify]\nsuites = [\"drift\"]\ndrift_scale = 1.1\n"
    );
    let cfg = Config::from_toml(&text).unwrap();
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.verify.drift_scale, 1.1);
    let again = Config::from_toml(&cfg.to_toml().unwrap()).unwrap();
    assert_eq!(cfg, again);
    assert_eq!(Config::from_toml(&again.to_toml().unwrap()).unwrap(), cfg);
    assert!(Config::from_toml("[length]\nkind = \"gamma\"\nshape = 2.0\n").is_err());
    assert!(Config::from_toml("colour = 1\n").is_err());
}

#[test]
fn figures_emit_canonical_sets() {
    let dir = tempfile::tempdir().unwrap();
    let out = randbridge(dir.path(), &["figures", "--out", "figs", "--paths", "10"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["fig1_left.csv", "fig1_right.csv", "fig2.csv"] {
        let csv = std::fs::read_to_string(dir.path().join("figs").join(name)).unwrap();
        assert!(csv.starts_with("path_id,t,value,absorbed\n"));
        let last = final_rows(&csv);
        assert_eq!(last.len(), 10, "{name}");
        assert!(last.iter().all(|r| r.2), "{name}: every path ends absorbed");
        if name == "fig2.csv" {
            assert!(last.iter().all(|r| r.1 == -4.0 || r.1 == 4.0));
        }
        if name == "fig1_left.csv" {
            assert!(last.iter().all(|r| [0.0, 1.0, 2.0, 3.0].contains(&r.1)));
        }
    }
}

#[test]
fn simulate_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", TWO_PIN);
    for method in ["exact", "euler"] {
        let body = format!("{TWO_PIN}\n[simulate]\nmethod = \"{method}\"\npaths = 5\n");
        let cfg = write(dir.path(), &format!("{method}.toml"), &body);
        let a = randbridge(dir.path(), &["simulate", "--config", &cfg, "--seed", "4", "--out", "a"]);
        let b = randbridge(dir.path(), &["simulate", "--config", &cfg, "--seed", "4", "--out", "b"]);
        let c = randbridge(dir.path(), &["simulate", "--config", &cfg, "--seed", "5", "--out", "c"]);
        assert_eq!((code(&a), code(&b), code(&c)), (0, 0, 0), "{}", String::from_utf8_lossy(&a.stderr));
        let read = |d: &str| std::fs::read(dir.path().join(d).join("paths.csv")).unwrap();
        assert_eq!(read("a"), read("b"), "{method}");
        assert_ne!(read("a"), read("c"), "{method}");
        let csv = String::from_utf8(read("a")).unwrap();
        assert_eq!(csv.lines().count(), 1 + 5 * 501);
        assert!(csv.lines().nth(2).unwrap().contains("e-2,"), "scientific notation");
    }
    let out = randbridge(dir.path(), &["simulate", "--config", &cfg, "--paths", "2", "--out", "d"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn simulate_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.toml", &TWO_PIN.replace("n_steps = 500", "n_steps = 0"));
    let out = randbridge(dir.path(), &["simulate", "--config", &zero]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_steps"));
    let cfg = write(dir.path(), "c.toml", TWO_PIN);
    write(dir.path(), "blocker", "");
    assert_eq!(code(&randbridge(dir.path(), &["simulate", "--config", &cfg, "--out", "blocker/x"])), 2);
    assert_eq!(code(&randbridge(dir.path(), &["simulate", "--config", "missing.toml"])), 2);
    assert_eq!(code(&randbridge(dir.path(), &["simulate"])), 2, "no model configured");
    assert_eq!(code(&randbridge(dir.path(), &["frobnicate"])), 2);
}

#[test]
fn density_queries() {
    let dir = tempfile::tempdir().unwrap();
    let marginal =
        "[density]\nkind = \"marginal\"\nr = 1.0\nz = 0.0\nt = 0.5\ngrid = { lo = -3.0, hi = 3.0, n = 61 }\n";
    let cfg = write(dir.path(), "m.toml", marginal);
    assert_eq!(code(&randbridge(dir.path(), &["density", "--config", &cfg, "--out", "m"])), 0);
    let v = json(&dir.path().join("m/density.json"));
    let values: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let (k, peak) = values.iter().enumerate().fold((0, 0.0), |b, (i, &x)| if x > b.1 { (i, x) } else { b });
    assert_eq!(v["grid"][k].as_f64().unwrap(), 0.0);
    assert!((peak - 0.79788).abs() < 1e-5, "{peak}");

    let absorbed = format!("{TWO_PIN}\n[density]\nkind = \"info_transition\"\nt = 2.0\nx = -4.0\nu = 3.0\ngrid = {{ lo = -3.0, hi = 3.0, n = 5 }}\n");
    let cfg = write(dir.path(), "a.toml", &absorbed);
    assert_eq!(code(&randbridge(dir.path(), &["density", "--config", &cfg, "--out", "a"])), 0);
    let v = json(&dir.path().join("a/density.json"));
    assert_eq!(v["atoms"]["z1"].as_f64(), Some(1.0));
    assert_eq!(v["atoms"]["z2"].as_f64(), Some(0.0));
    assert!(v["grid"].as_array().unwrap().is_empty());

    let live = absorbed.replace("x = -4.0", "x = 1.0");
    let cfg = write(dir.path(), "l.toml", &live);
    assert_eq!(code(&randbridge(dir.path(), &["density", "--config", &cfg, "--out", "l"])), 0);
    let v = json(&dir.path().join("l/density.json"));
    assert!((v["mass"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(v["values"].as_array().unwrap().len(), 5);

    let bad = absorbed.replace("u = 3.0", "u = 1.0");
    let cfg = write(dir.path(), "b.toml", &bad);
    assert_eq!(code(&randbridge(dir.path(), &["density", "--config", &cfg, "--out", "b"])), 2);
}

#[test]
fn filter_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", TWO_PIN);
    let obs = write(dir.path(), "obs.csv", "t,value\n0.5,0.3\n1.0,1.2\n1.5,4.0\n2.0,4.0\n");
    let out = randbridge(dir.path(), &["filter", "--config", &cfg, "--observations", &obs, "--out", "f"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&dir.path().join("f/filter.json"));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["decision"], "hold");
    assert_eq!(rows[0]["absorbed"], false);
    assert!(rows[0]["drift"].as_f64().is_some());
    for row in &rows[2..] {
        assert_eq!(row["decision"], "withdraw");
        assert_eq!(row["prob_settled"].as_f64(), Some(1.0));
        assert_eq!(row["prob_z2"].as_f64(), Some(1.0));
    }

    let lower = write(dir.path(), "low.csv", "t,value\n1.0,-4.0\n2.0,0.5\n");
    assert_eq!(code(&randbridge(dir.path(), &["filter", "--config", &cfg, "--observations", &lower, "--out", "g"])), 0);
    let v = json(&dir.path().join("g/filter.json"));
    assert_eq!(v["rows"][0]["decision"], "inject");
    assert!(v["rows"][1]["error"].as_str().unwrap().contains("settling"), "{}", v["rows"][1]);

    let backwards = write(dir.path(), "back.csv", "t,value\n1.0,0.0\n1.0,0.1\n");
    assert_eq!(code(&randbridge(dir.path(), &["filter", "--config", &cfg, "--observations", &backwards])), 2);
    assert_eq!(code(&randbridge(dir.path(), &["filter", "--config", &cfg])), 2, "no observations");
}

#[test]
fn symmetric_filter_at_zero_is_even() {
    let model = InfoModel::new(LengthLaw::exponential(0.1).unwrap(), -4.0, 4.0, 0.5).unwrap();
    let rows = filter_rows(&model, &[(0.5, 0.0), (3.0, 0.0)]).unwrap();
    for row in rows {
        assert!((row.prob_z1.unwrap() - 0.5).abs() < 1e-10);
        assert!((row.prob_z2.unwrap() - 0.5).abs() < 1e-10);
    }
}

#[test]
fn filter_recovers_the_pin_before_absorption() {
    // Observe synthetic paths at 0.3, 0.6 and 0.9 of their realized length.
    let model = InfoModel::new(LengthLaw::exponential(0.1).unwrap(), -4.0, 4.0, 0.3).unwrap();
    let bridge = model.as_random_bridge();
    let mut total = 0.0;
    for i in 0..100 {
        let mut rng = PathRng::new(77, i);
        let (tau, z) = bridge.sample_hidden(&mut rng);
        let times: Vec<f64> = [0.3, 0.6, 0.9].iter().map(|f| f * tau).collect();
        let mut values = vec![0.0; 3];
        sample_bridge_into(tau, z, &times, &mut rng.noise, &mut values);
        let obs: Vec<(f64, f64)> = times.into_iter().zip(values).collect();
        let last = filter_rows(&model, &obs).unwrap().pop().unwrap();
        total += if z > 0.0 { last.prob_z2.unwrap() } else { last.prob_z1.unwrap() };
    }
    let average = total / 100.0;
    eprintln!("average posterior of the true pin at 0.9 τ: {average:.4}");
    assert!(average >= 0.5, "{average}");
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = randbridge(dir.path(), &["verify", "--suite", "drift", "--suite", "modification", "--out", "r"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("r/drift.json"));
    assert_eq!(report["suite"], "drift");
    assert_eq!(report["cases"].as_array().unwrap().len(), 25);
    assert!(dir.path().join("r/modification.json").exists());

    let mutated = write(dir.path(), "m.toml", "[verify]\ndrift_scale = 1.1\n");
    let out = randbridge(dir.path(), &["verify", "--config", &mutated, "--suite", "drift", "--out", "m"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL drift"));

    assert_eq!(code(&randbridge(dir.path(), &["verify", "--suite", "nope"])), 2);
}
