use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_collective-bath"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

struct Csv {
    columns: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let columns = r.headers().unwrap().iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| {
                rec.unwrap()
                    .iter()
                    .map(|c| (!c.is_empty()).then(|| c.parse().unwrap()))
                    .collect()
            })
            .collect();
        Csv { columns, rows }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let k = self.columns.iter().position(|c| c == name).expect(name);
        self.rows
            .iter()
            .map(|r| r[k].expect("value present"))
            .collect()
    }
}

fn meta_line<'a>(text: &'a str, key: &str) -> &'a str {
    let prefix = format!("# {key}: ");
    text.lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no meta line {key}"))
}

#[test]
fn evolve_columns_are_fixed() {
    let text = ok(&["evolve", "--set", "grid.time.times=[0.0, 1.0]"]);
    let t = Csv::parse(&text);
    assert_eq!(
        t.columns,
        [
            "time",
            "n_exact",
            "n_weak_coupling",
            "lambda",
            "D_plus",
            "D_minus"
        ]
    );
    assert_eq!(t.rows.len(), 2);
    assert!(meta_line(&text, "tool").starts_with("collective-bath "));
    assert_eq!(meta_line(&text, "command"), "evolve");
}

#[test]
fn decoupled_mode_keeps_its_occupation() {
    let text = ok(&[
        "evolve",
        "--set",
        "model.g0=0",
        "--set",
        "model.n0=1",
        "--set",
        "grid.time.spacing=linear",
        "--set",
        "grid.time.points=11",
    ]);
    let t = Csv::parse(&text);
    assert_eq!(t.rows.len(), 11);
    assert_eq!(*t.col("time").last().unwrap(), 50.0);
    for col in ["n_exact", "n_weak_coupling"] {
        for n in t.col(col) {
            assert!((n - 1.0).abs() < 1e-12, "{col}: {n}");
        }
    }
    for col in ["lambda", "D_plus", "D_minus"] {
        assert!(t.col(col).iter().all(|v| v.abs() < 1e-12), "{col}");
    }
}

#[test]
fn reruns_and_thread_counts_give_identical_bytes() {
    let args = [
        "evolve",
        "--set",
        "model.statistics=bose",
        "--set",
        "grid.time.t_max=20.0",
        "--set",
        "grid.time.spacing=linear",
        "--set",
        "grid.time.points=21",
    ];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    let mut one = vec!["--jobs", "1"];
    one.extend(args);
    let mut two = vec!["--jobs", "2"];
    two.extend(args);
    assert_eq!(ok(&one), first);
    assert_eq!(ok(&two), first);
}

#[test]
fn echoed_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&[
        "evolve",
        "--set",
        "model.g0=0.05",
        "--set",
        "model.temperature=0.3",
        "--set",
        "grid.time.times=[0.0, 2.0, 30.0]",
    ]);
    let echoed: String = text
        .lines()
        .skip_while(|l| *l != "# config:")
        .skip(1)
        .filter_map(|l| l.strip_prefix("#   ").or_else(|| l.strip_prefix("#")))
        .map(|l| format!("{l}\n"))
        .collect();
    let path = dir.path().join("echo.toml");
    fs::write(&path, echoed).unwrap();
    assert_eq!(ok(&["evolve", "-c", path.to_str().unwrap()]), text);
}

#[test]
fn two_panel_figure_config_orders_bose_above_fermi() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2a.csv");
    let mut config = format!(
        "[model]\nomega = 1.0\ngamma = 12.0\nn0 = 0.0\n\n\
         [grid.time]\nspacing = \"linear\"\npoints = 3\nt_max = 200.0\n\n\
         [output]\npath = {:?}\n",
        out.to_str().unwrap()
    );
    for t in ["0.1", "1.0"] {
        for g in ["0.05", "0.1"] {
            for s in ["fermi", "bose"] {
                config.push_str(&format!(
                    "\n[[variants]]\nname = \"{s}-T{t}-g{g}\"\ntemperature = {t}\ng0 = {g}\nstatistics = \"{s}\"\n"
                ));
            }
        }
    }
    let cfg = dir.path().join("fig2a.toml");
    fs::write(&cfg, config).unwrap();
    ok(&["evolve", "-c", cfg.to_str().unwrap()]);

    let files: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().unwrap() == "csv")
        .collect();
    assert_eq!(files.len(), 8);
    let last = |s: &str, t: &str, g: &str| {
        let path = dir.path().join(format!("fig2a-{s}-T{t}-g{g}.csv"));
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(meta_line(&text, "variant"), format!("{s}-T{t}-g{g}"));
        let n = Csv::parse(&text).col("n_exact");
        assert_eq!(n[0], 0.0);
        *n.last().unwrap()
    };
    for t in ["0.1", "1.0"] {
        for g in ["0.05", "0.1"] {
            let (f, b) = (last("fermi", t, g), last("bose", t, g));
            assert!(b > f && f > 0.0, "T={t} g0={g}: n_B={b} n_F={f}");
        }
    }
}

#[test]
fn temperature_scan_overlays_thermal_occupations() {
    let text = ok(&[
        "scan",
        "--set",
        "model.g0=0.001",
        "--set",
        "grid.scan.from=0.3",
        "--set",
        "grid.scan.to=5.0",
        "--set",
        "grid.scan.points=8",
    ]);
    let t = Csv::parse(&text);
    assert_eq!(meta_line(&text, "scan_variable"), "temperature");
    let (nf, nb) = (t.col("n_inf_fermi"), t.col("n_inf_bose"));
    let (fd, be) = (t.col("fermi_dirac"), t.col("bose_einstein"));
    for (i, temp) in t.col("value").iter().enumerate() {
        assert!((nf[i] / fd[i] - 1.0).abs() < 0.02, "T={temp}");
        assert!((nb[i] / be[i] - 1.0).abs() < 0.02, "T={temp}");
        assert!((fd[i] - 1.0 / ((1.0 / temp).exp() + 1.0)).abs() < 1e-14);
    }
    let tanh = t.col("tanh_ratio");
    assert!((tanh[0] - (0.5f64 / 0.3).tanh()).abs() < 1e-14);
}

#[test]
fn statistics_ratio_tends_to_one_half_when_cold() {
    for g0 in ["0.001", "0.1"] {
        let g = format!("model.g0={g0}");
        let text = ok(&[
            "scan",
            "--set",
            &g,
            "--set",
            "grid.scan.from=0.005",
            "--set",
            "grid.scan.to=0.01",
            "--set",
            "grid.scan.points=2",
        ]);
        let t = Csv::parse(&text);
        for r in t.col("ratio_fermi_bose") {
            assert!((r - 0.5).abs() < 0.01, "g0={g0}: {r}");
        }
        assert_eq!(t.col("low_t_fermi").len(), 2);
    }
}

#[test]
fn diffusion_grows_with_coupling() {
    for temp in ["0.1", "1.0"] {
        let set_t = format!("model.temperature={temp}");
        let text = ok(&[
            "scan",
            "--set",
            &set_t,
            "--set",
            "grid.scan.variable=g0",
            "--set",
            "grid.scan.from=0.01",
            "--set",
            "grid.scan.to=0.1",
            "--set",
            "grid.scan.points=5",
        ]);
        let t = Csv::parse(&text);
        for col in ["D_plus_inf_fermi", "D_plus_inf_bose", "lambda_inf"] {
            let d = t.col(col);
            assert!(d.windows(2).all(|w| w[1] > w[0]), "T={temp} {col}: {d:?}");
        }
    }
}

#[test]
fn json_scan_carries_meta_and_nulls() {
    let text = ok(&[
        "scan",
        "--format",
        "json",
        "--set",
        "model.g0=0.01",
        "--set",
        "grid.scan.variable=mu",
        "--set",
        "grid.scan.from=-1.0",
        "--set",
        "grid.scan.to=1.0",
        "--set",
        "grid.scan.points=3",
    ]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["meta"]["command"], "scan");
    assert_eq!(doc["meta"]["config"]["model"]["g0"], 0.01);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
    assert_eq!(keys[0], "value");
    assert_eq!(keys[1], "n_inf_fermi");
    assert!(rows[0]["n_inf_bose"].is_f64());
    assert!(rows[2]["n_inf_bose"].is_null());
    assert!(rows[2]["ratio_fermi_bose"].is_null());
    assert!(rows[2]["n_inf_fermi"].as_f64().unwrap() > rows[0]["n_inf_fermi"].as_f64().unwrap());
    assert!(rows[1]["low_t_fermi"].is_null());
}

#[test]
fn oracle_compare_reports_its_worst_gap() {
    let text = ok(&[
        "oracle-compare",
        "--format",
        "json",
        "--set",
        "model.g0=0.01",
        "--set",
        "oracle.modes=400",
    ]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    let meta = &doc["meta"];
    assert_eq!(meta["oracle_modes"], 400);
    let t_rec = meta["oracle_recurrence_time"].as_f64().unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let t_end = rows.last().unwrap()["time"].as_f64().unwrap();
    assert!((t_end - 0.5 * t_rec).abs() < 1e-12);
    let worst = rows
        .iter()
        .map(|r| r["abs_difference"].as_f64().unwrap())
        .fold(0.0, f64::max);
    assert_eq!(meta["max_abs_difference"].as_f64().unwrap(), worst);
    assert!(worst < 0.01, "{worst}");
}

#[test]
fn evolve_adds_oracle_column_on_request() {
    let text = ok(&[
        "evolve",
        "--with-oracle",
        "N=400",
        "--set",
        "model.g0=0.01",
        "--set",
        "model.n0=1",
        "--set",
        "grid.time.times=[0.0, 1.0, 2.0]",
    ]);
    let t = Csv::parse(&text);
    assert_eq!(t.columns[3], "n_oracle");
    let (e, o) = (t.col("n_exact"), t.col("n_oracle"));
    assert!((o[0] - 1.0).abs() < 1e-12);
    for k in 0..3 {
        assert!((e[k] - o[k]).abs() < 0.01);
    }
}

#[test]
fn kernel_dump_integrates_to_the_coupling() {
    let text = ok(&["kernel-dump", "--set", "model.g0=0.1"]);
    let t = Csv::parse(&text);
    assert_eq!(t.columns, ["time", "kernel", "kernel_integral"]);
    let (time, k, int) = (t.col("time"), t.col("kernel"), t.col("kernel_integral"));
    assert!((k[0] - 1.2).abs() < 1e-14);
    assert_eq!(int[0], 0.0);
    let trapezoid: f64 = (1..time.len())
        .map(|i| 0.5 * (k[i] + k[i - 1]) * (time[i] - time[i - 1]))
        .sum();
    let end = *int.last().unwrap();
    assert!((end - 0.1 * (1.0 - (-10f64).exp())).abs() < 1e-15);
    assert!((trapezoid - end).abs() < 1e-3 * end);
}

#[test]
fn kernel_dump_discrete_column_matches_continuum() {
    let text = ok(&[
        "kernel-dump",
        "--with-oracle",
        "4000",
        "--set",
        "grid.time.times=[0.08333333333333333]",
    ]);
    let t = Csv::parse(&text);
    let d = t.col("discrete_kernel")[0];
    let target = 1.2 / std::f64::consts::E;
    assert!((d / target - 1.0).abs() < 0.02, "{d}");
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[model]\ng0 = 0.1\ntemprature = 1.0\n").unwrap();
    let out = run(&["evolve", "-c", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("line 3") && err.contains("temprature"),
        "{err}"
    );

    fs::write(&bad, "[model\n").unwrap();
    let out = run(&["scan", "-c", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    for args in [
        vec!["evolve", "--set", "model.tmp=1"],
        vec!["evolve", "--with-oracle", "N=many"],
        vec!["evolve", "--set", "variants=[{name = \"a\"}]"],
        vec!["evolve", "--format", "xml"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_with_three_and_names_the_step() {
    let out = run(&[
        "evolve",
        "--set",
        "quadrature.max_panels=4",
        "--set",
        "grid.time.times=[1.0]",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("numerical failure in") && err.contains("t = 1"),
        "{err}"
    );
}

#[test]
fn missing_files_exit_with_one() {
    let out = run(&["evolve", "-c", "/nonexistent/run.toml"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["kernel-dump", "-o", "/nonexistent/dir/k.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let out = ok(&[
        "kernel-dump",
        "--format",
        "json",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 201);
    assert!(Path::new(&path).exists());
}
