use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn chevlab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chevlab"));
    cmd.args(args).env_remove("CHEVLAB_THREADS");
    if let Some(t) = threads {
        cmd.env("CHEVLAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn order_of_sl2_over_f5() {
    let v = json(&chevlab(&["order", "--group", "SL:2:5"], None));
    assert_eq!(v["order"], 120);
    assert_eq!(v["config"]["command"], "order");
}

#[test]
fn order_accepts_split_flags() {
    let a = json(&chevlab(&["order", "--group", "Sp", "--n", "2", "--q", "3"], None));
    let b = json(&chevlab(&["order", "--group", "Sp:2:3"], None));
    assert_eq!(a, b);
    assert_eq!(a["order"], 51840);
}

#[test]
fn order_over_extension_field() {
    let v = json(&chevlab(&["order", "--group", "SL:2:9"], None));
    assert_eq!(v["order"], 720);
    assert_eq!(chevlab(&["order", "--group", "SL:2:4"], None).status.code(), Some(4));
}

#[test]
fn degree_of_sp4() {
    let v = json(&chevlab(&["degree", "--group", "Sp", "--n", "2"], None));
    assert_eq!(v["exact"], 24);
    assert_eq!(v["table_bound"], 256);
}

#[test]
fn config_block_omits_thread_count() {
    let v = json(&chevlab(&["order", "--group", "SL:2:5"], Some("3")));
    let config = v["config"].as_object().unwrap();
    assert!(config.contains_key("seed"));
    assert!(config.contains_key("caps"));
    assert!(!config.keys().any(|k| k.contains("thread")));
}

#[test]
fn exit_codes() {
    assert_eq!(chevlab(&["order"], None).status.code(), Some(2));
    assert_eq!(chevlab(&["order", "--group", "SL:2:6"], None).status.code(), Some(2));
    assert_eq!(chevlab(&["order", "--group", "SL:1:5"], None).status.code(), Some(4));
    assert_eq!(
        chevlab(&["diameter", "--group", "SL:3:5", "--cap", "100"], None)
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        chevlab(&["torus-cert", "--group", "Sp:2:7", "--eta", ""], None)
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        chevlab(&["order", "--group", "SL:2:5"], Some("zero")).status.code(),
        Some(2)
    );
}

#[test]
fn growth_csv_columns() {
    let out = chevlab(
        &[
            "growth", "--group", "SL:2:5", "--tmax", "3", "--target", "nonrs", "--emit", "csv",
        ],
        None,
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,ball_size,target_count"));
    let rows: Vec<Vec<u64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for w in rows.windows(2) {
        assert!(w[0][1] <= w[1][1]);
        assert!(w[0][2] <= w[1][2]);
    }
    for r in &rows {
        assert!(r[2] <= r[1]);
    }
}

#[test]
fn diameter_from_generator_file() {
    let gens = temp_file("# upper and lower unipotents\n1,1,0,1\n\n1,0,1,1\n");
    let v = json(&chevlab(
        &["diameter", "--group", "SL:2:5", "--gens", gens.path().to_str().unwrap()],
        None,
    ));
    assert_eq!(v["group_order"], 120);
    assert_eq!(v["generators"].as_array().unwrap().len(), 5);
    assert!(v["diameter"].as_u64().unwrap() >= 1);
}

#[test]
fn escape_routes_agree() {
    let variety = temp_file("ambient=4 dim=3 deg=1\nx1\n");
    let gens = temp_file("1,1,0,1\n1,0,1,1\n");
    let k = |route: &str| {
        let v = json(&chevlab(
            &[
                "escape",
                "--group",
                "SL:2:5",
                "--variety",
                variety.path().to_str().unwrap(),
                "--gens",
                gens.path().to_str().unwrap(),
                "--point",
                "0,1,1,0",
                "--route",
                route,
            ],
            None,
        ));
        let c = &v["certificate"];
        c.get("certificate").unwrap_or(c)["k_found"].as_u64().unwrap()
    };
    assert_eq!(k("bfs"), 1);
    assert_eq!(k("shitov"), k("linearized"));
}

#[test]
fn classify_reports_class_sizes() {
    let v = json(&chevlab(
        &["classify", "--group", "SL:2:3", "--element", "1,1,0,1"],
        None,
    ));
    assert_eq!(v["group_order"], 24);
    let rec = &v["records"][0];
    assert_eq!(
        rec["class_size"].as_u64().unwrap() * rec["centralizer_size"].as_u64().unwrap(),
        24
    );
    assert_eq!(rec["regular_semisimple"], false);
}

#[test]
fn constants_suite_passes() {
    let v = json(&chevlab(&["constants", "--r", "2", "--which", "suite"], None));
    assert_eq!(v["constants"]["passed"], true);
}

#[test]
fn torus_certificate_full_rank() {
    let v = json(&chevlab(&["torus-cert", "--group", "Sp:2:7", "--eta", "1,1"], None));
    let c = &v["certificate"];
    assert_eq!(c["achieved_rank"], c["target_rank"]);
    assert_eq!(c["target_rank"], 6);
}

#[test]
fn output_independent_of_thread_count() {
    let cases: [&[&str]; 3] = [
        &[
            "growth",
            "--group",
            "SL:2:7",
            "--random-gens",
            "2",
            "--tmax",
            "5",
            "--target",
            "nonrs",
            "--check",
            "olson",
        ],
        &[
            "torus-cert",
            "--group",
            "SOodd:3:11",
            "--eta",
            "1,2,1",
            "--mode",
            "adjoint",
        ],
        &["classify", "--group", "SL:2:5", "--all"],
    ];
    for args in cases {
        let one = chevlab(args, Some("1"));
        let eight = chevlab(args, Some("8"));
        assert!(one.status.success(), "{}", String::from_utf8_lossy(&one.stderr));
        assert_eq!(one.stdout, eight.stdout, "{args:?}");
    }
}

#[test]
fn seed_changes_random_generators() {
    let run = |seed: &str| {
        json(&chevlab(
            &[
                "growth",
                "--group",
                "SL:2:7",
                "--random-gens",
                "2",
                "--tmax",
                "2",
                "--seed",
                seed,
            ],
            None,
        ))["generators"]
            .clone()
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}
