use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_diamgap"));
    c.env_remove("DIAMGAP_SIZE_BUDGET");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn record(dir: &Path, args: &[&str]) -> Value {
    let text = ok(dir, args);
    assert_eq!(text.lines().count(), 1, "expected one record, got {text}");
    serde_json::from_str(&text).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn cycle(n: usize) -> String {
    let mut s = format!("directed {n} {n}\n");
    for i in 0..n {
        s += &format!("{i} {} 1\n", (i + 1) % n);
    }
    s
}

fn complete_digraph(n: usize) -> String {
    let mut s = format!("directed {n} {}\n", n * (n - 1));
    for u in 0..n {
        for v in (0..n).filter(|&v| v != u) {
            s += &format!("{u} {v} 1\n");
        }
    }
    s
}

#[test]
fn gen_ov_all_ones_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen-ov", "-n", "4", "-d", "4", "--p-one", "1", "-o", "ones.ov",
        ],
    );
    let text = std::fs::read_to_string(d.join("ones.ov")).unwrap();
    assert_eq!(text, "4 4\n1111\n1111\n1111\n1111\n");

    let a = ok(d, &["gen-ov", "-n", "9", "-d", "7", "--seed", "5"]);
    let b = ok(d, &["gen-ov", "-n", "9", "-d", "7", "--seed", "5"]);
    assert_eq!(a, b);
    let parsed = diamgap::ov::OvInstance::parse(&a).unwrap();
    assert_eq!(parsed.to_text(), a);
    assert_eq!(parsed, diamgap::ov::gen_random(9, 7, 0.5, 5).unwrap());
}

#[test]
fn solve_ov_finds_planted_tuple() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen-ov", "-n", "6", "-d", "6", "--p-one", "0.9", "--plant", "3", "--seed", "1", "-o",
            "p.ov",
        ],
    );
    let r = record(d, &["solve-ov", "p.ov", "-k", "3"]);
    let witness: Vec<usize> = serde_json::from_value(r["solution"].clone()).unwrap();
    let inst = diamgap::ov::OvInstance::read_file(d.join("p.ov")).unwrap();
    assert!(diamgap::ov::OvWitness(witness).is_valid(&inst));

    write(d, "ones.ov", "3 2\n11\n11\n11\n");
    assert!(record(d, &["solve-ov", "ones.ov", "-k", "2"])["solution"].is_null());
}

#[test]
fn reduce_pipeline_separates_instances() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen-ov", "-n", "4", "-d", "4", "--p-one", "1", "-o", "ones.ov",
        ],
    );
    let r = record(d, &["reduce", "ones.ov", "-k", "3", "-o", "ones"]);
    assert!(d.join("ones.graph").exists() && d.join("ones.map").exists());
    let map = std::fs::read_to_string(d.join("ones.map")).unwrap();
    assert_eq!(map.lines().count() as u64, r["vertices"].as_u64().unwrap());
    let diam = record(d, &["diameter", "ones.graph"]);
    assert!(diam["diameter"].as_u64().unwrap() <= 3);

    for seed in ["0", "1", "2"] {
        ok(
            d,
            &[
                "gen-ov", "-n", "4", "-d", "4", "--p-one", "0.8", "--plant", "3", "--seed", seed,
                "-o", "p.ov",
            ],
        );
        ok(d, &["reduce", "p.ov", "-k", "3", "-o", "planted"]);
        let diam = record(d, &["diameter", "planted.graph"]);
        match diam["diameter"].as_u64() {
            Some(x) => assert!(x >= 5, "planted gadget diameter {x}"),
            None => assert_eq!(diam["connected"], false),
        }
    }
}

#[test]
fn undirected_reduce_warns_about_k() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "i.ov", "3 3\n110\n011\n101\n");
    let out = run(
        d,
        &[
            "reduce",
            "i.ov",
            "--variant",
            "undirected",
            "-k",
            "4",
            "-o",
            "u",
        ],
    );
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ignores --k"));
    let quiet = run(d, &["reduce", "i.ov", "--variant", "undirected", "-o", "u"]);
    assert!(quiet.stderr.is_empty());
    let g = diamgap::Graph::read_file(d.join("u.graph")).unwrap();
    assert!(!g.is_directed());
}

#[test]
fn diameter_modes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "p3.graph", "undirected 3 2\n0 1 1\n1 2 1\n");
    let r = record(d, &["diameter", "p3.graph"]);
    assert_eq!(r["mode"], "exact");
    assert_eq!(r["diameter"], 2);
    assert!(r["runtime_ms"].is_u64());

    write(d, "k4.graph", &complete_digraph(4));
    let r = record(d, &["diameter", "k4.graph", "--mode", "two-approx"]);
    assert_eq!(r["lower"], 1);

    let text = diamgap::graph::random_connected(false, 40, 30, 9, 3)
        .unwrap()
        .to_text();
    write(d, "r.graph", &text);
    let exact = record(d, &["diameter", "r.graph"])["diameter"]
        .as_f64()
        .unwrap();
    for probe in ["0", "17", "39"] {
        let r = record(
            d,
            &[
                "diameter",
                "r.graph",
                "--mode",
                "two-approx",
                "--probe",
                probe,
            ],
        );
        assert!(r["lower"].as_f64().unwrap() <= exact && exact <= r["upper"].as_f64().unwrap());
    }

    write(d, "split.graph", "directed 2 1\n0 1 1\n");
    let r = record(d, &["diameter", "split.graph"]);
    assert!(r["diameter"].is_null() && r["connected"] == false);
}

#[test]
fn certify_pipelines() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "k6.graph", &complete_digraph(6));
    let r = record(
        d,
        &["certify", "k6.graph", "-D", "1", "-k", "2", "-o", "k6.json"],
    );
    assert_eq!(r["status"], "ok");
    assert_eq!(ok(d, &["verify", "k6.graph", "k6.json"]).trim(), "ACCEPT");

    write(d, "c20.graph", &cycle(20));
    let r = record(
        d,
        &[
            "certify",
            "c20.graph",
            "-D",
            "19",
            "-k",
            "2",
            "-e",
            "0.5",
            "--seed",
            "4",
            "-o",
            "c20.json",
        ],
    );
    assert_eq!(r["status"], "ok");
    assert_eq!(ok(d, &["verify", "c20.graph", "c20.json"]).trim(), "ACCEPT");

    let r = record(
        d,
        &[
            "certify",
            "c20.graph",
            "-D",
            "19",
            "-k",
            "3",
            "--mode",
            "hopset",
            "-o",
            "h.json",
        ],
    );
    assert_eq!(r["status"], "ok");
    assert_eq!(ok(d, &["verify", "c20.graph", "h.json"]).trim(), "ACCEPT");

    // D' = 1.5 * 5 < 19: no certificate can pass
    let out = run(
        d,
        &[
            "certify",
            "c20.graph",
            "-D",
            "5",
            "-k",
            "2",
            "-o",
            "bad.json",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let status: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(status["status"], "failure");
    assert!(!d.join("bad.json").exists());

    let out = run(
        d,
        &["certify", "c20.graph", "-D", "5", "-k", "1", "-o", "x.json"],
    );
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}

#[test]
fn verify_pipelines() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "c12.graph", &cycle(12));
    ok(
        d,
        &[
            "certify",
            "c12.graph",
            "-D",
            "11",
            "-k",
            "2",
            "-o",
            "c.json",
        ],
    );

    // the same certificate on a graph of larger diameter
    write(d, "c30.graph", &cycle(30));
    let out = run(d, &["verify", "c30.graph", "c.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("REJECT"));

    // tampering with the claimed level
    let mut doc: Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("c.json")).unwrap()).unwrap();
    let cover = doc["certificate"]["cover"].as_object_mut().unwrap();
    let set = cover.values_mut().find(|v| v.is_object()).unwrap();
    set["level"] = Value::from(7);
    write(d, "t.json", &doc.to_string());
    let out = run(d, &["verify", "c12.graph", "t.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("level"));

    ok(
        d,
        &[
            "certify",
            "c30.graph",
            "-D",
            "20",
            "--lower-bound",
            "-o",
            "lb.json",
        ],
    );
    assert_eq!(ok(d, &["verify", "c30.graph", "lb.json"]).trim(), "ACCEPT");
    let out = run(d, &["verify", "c12.graph", "lb.json"]);
    assert_eq!(out.status.code(), Some(1));

    write(d, "junk.json", "{\"kind\": \"nonsense\"}");
    let out = run(d, &["verify", "c12.graph", "junk.json"]);
    assert!(!out.status.success());
}

#[test]
fn hopset_build_and_verify() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let text = diamgap::graph::random_connected(false, 60, 40, 10, 8)
        .unwrap()
        .to_text();
    write(d, "g.graph", &text);
    let r = record(
        d,
        &["hopset-build", "g.graph", "--seed", "3", "-o", "g.hop"],
    );
    assert!(r["beta"].as_u64().unwrap() > 0);
    let v = record(d, &["hopset-verify", "g.graph", "g.hop"]);
    assert_eq!(v["preserves_distances"], true);
    assert_eq!(v["hopbound"], true);

    // a shortcut shorter than the distance it spans
    let mut hop = std::fs::read_to_string(d.join("g.hop")).unwrap();
    let header = hop.lines().next().unwrap().to_string();
    let count: usize = header.split_whitespace().nth(1).unwrap().parse().unwrap();
    let rest: Vec<&str> = header.split_whitespace().skip(2).collect();
    hop = format!("hopset {} {}\n", count + 1, rest.join(" ")) + &hop[header.len() + 1..];
    let g = diamgap::Graph::parse(&text).unwrap();
    let far = diamgap::graph::sssp(&g, 0, diamgap::Direction::Out)
        .unwrap()
        .as_slice()
        .iter()
        .position(|x| x.ticks().is_some_and(|t| t > 1))
        .unwrap();
    hop += &format!("0 {far} 1\n");
    write(d, "bad.hop", &hop);
    let out = run(d, &["hopset-verify", "g.graph", "bad.hop"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["preserves_distances"], false);

    write(d, "dir.graph", &cycle(5));
    assert!(!run(d, &["hopset-build", "dir.graph", "-o", "x.hop"])
        .status
        .success());
    ok(
        d,
        &["hopset-build", "dir.graph", "--exhaustive", "-o", "x.hop"],
    );
    let v = record(d, &["hopset-verify", "dir.graph", "x.hop", "--beta", "1"]);
    assert_eq!(v["hopbound"], true);
}

#[test]
fn experiment_gap_csv() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let args = [
        "experiment-gap",
        "-k",
        "3",
        "-n",
        "3,5",
        "-d",
        "5",
        "--trials",
        "6",
        "--seed",
        "11",
        "-o",
        "gap.csv",
    ];
    ok(d, &args);
    let text = std::fs::read_to_string(d.join("gap.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,n,d,seed,planted,ov_solution,diameter,gap_ok");
    assert_eq!(*lines.last().unwrap(), "# summary rows=12 violations=0");
    let rows = &lines[1..lines.len() - 1];
    assert_eq!(rows.len(), 12);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 8);
        assert_eq!(cols[7], "true");
        let seed: u64 = cols[3].parse().unwrap();
        assert_eq!(cols[4] == "true", (seed - 11).is_multiple_of(2));
        if cols[4] == "true" {
            assert_eq!(cols[5], "true");
        }
    }
    let again = ok(d, &args[..args.len() - 2]);
    assert_eq!(again, text);

    let out = run(d, &["experiment-gap", "-n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(d, &["experiment-gap", "-k", "", "-n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn size_budget_flag_and_env() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["gen-ov", "-n", "5", "-d", "5", "-o", "i.ov"]);
    let out = run(d, &["--size-budget", "50", "reduce", "i.ov", "-o", "g"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let out = bin()
        .current_dir(d)
        .env("DIAMGAP_SIZE_BUDGET", "50")
        .args(["reduce", "i.ov", "-o", "g"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    ok(d, &["reduce", "i.ov", "-o", "g"]);
}

#[test]
fn experiment_cert_rows() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let text = ok(
        d,
        &[
            "experiment-cert",
            "-k",
            "2,3",
            "-n",
            "12,30",
            "--trials",
            "3",
            "--seed",
            "2",
        ],
    );
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,n,m,seed,diameter,variant,accepted");
    assert_eq!(*lines.last().unwrap(), "# summary rows=12 accepted=12");
    let undirected = ok(
        d,
        &[
            "experiment-cert",
            "-k",
            "3",
            "-n",
            "25",
            "--trials",
            "2",
            "--undirected",
            "--mode",
            "hopset",
            "--max-weight",
            "5",
        ],
    );
    assert!(
        undirected.ends_with("# summary rows=2 accepted=2\n"),
        "{undirected}"
    );
}
