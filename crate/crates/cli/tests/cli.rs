use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn obstructor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obstructor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn build(dir: &TempDir, expr: &str, name: &str) -> String {
    let path = dir.path().join(name);
    let out = obstructor(&["build", "--expr", expr, "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

#[test]
fn build_catalog_specs() {
    let dir = TempDir::new().unwrap();
    let k33 = json(Path::new(&build(&dir, "vk(2)", "k33.json")));
    assert_eq!(k33["m"], 2);
    assert_eq!(k33["sigma"].as_array().unwrap().len(), 18);
    assert_eq!(k33["provenance"], "vk(2)");
    let tripod = json(Path::new(&build(&dir, "cone(points3)", "tripod.json")));
    assert_eq!(tripod["m"], 1);
    assert_eq!(tripod["complex"]["maximal"].as_array().unwrap().len(), 3);
    let f2 = json(Path::new(&build(&dir, "flores(2)", "f2.json")));
    assert_eq!(f2["sigma"].as_array().unwrap().len(), 70);
}

#[test]
fn build_rejects_bad_expressions_and_large_flores() {
    assert_eq!(code(&obstructor(&["build", "--expr", "cone(points4)"])), 1);
    assert_eq!(code(&obstructor(&["build", "--expr", "flores(4)"])), 1);
    let out = obstructor(&["build", "--expr", "flores(1)"]);
    assert_eq!(code(&out), 0);
    let spec: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(spec["sigma"].as_array().unwrap().len(), 15);
}

#[test]
fn certify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let spec = build(&dir, "vk(2)", "k33.json");
    let cert = dir.path().join("cert.json");
    let out = obstructor(&["certify", "--spec", &spec, "-o", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verdict: obstructor"));
    assert_eq!(json(&cert)["verdict"], "obstructor");

    let mut tampered = json(Path::new(&spec));
    tampered["sigma"].as_array_mut().unwrap().pop();
    let bad = dir.path().join("tampered.json");
    fs::write(&bad, tampered.to_string()).unwrap();
    let out = obstructor(&["certify", "--spec", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["condition1"]["status"], "fail");

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"complex\": [").unwrap();
    assert_eq!(code(&obstructor(&["certify", "--spec", broken.to_str().unwrap()])), 1);
    assert_eq!(code(&obstructor(&["certify", "--spec", "/nonexistent/spec.json"])), 1);
    assert_eq!(code(&obstructor(&["certify"])), 1);
    assert_eq!(code(&obstructor(&["frobnicate"])), 1);
}

#[test]
fn parity_with_params_and_seed() {
    let dir = TempDir::new().unwrap();
    let spec = build(&dir, "vk(2)", "k33.json");
    let out = obstructor(&["parity", "--spec", &spec, "--params", "1,3,5,2,4,6"]);
    assert_eq!(code(&out), 0);
    let check: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(check["count"], 3);

    let map = dir.path().join("map.json");
    fs::write(&map, check["map"].to_string()).unwrap();
    let out = obstructor(&["parity", "--spec", &spec, "--params", map.to_str().unwrap()]);
    let again: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(again["count"], 3);

    let a = obstructor(&["parity", "--spec", &spec, "--seed", "42"]);
    let b = obstructor(&["parity", "--spec", &spec, "--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    assert_eq!(code(&obstructor(&["parity", "--spec", &spec, "--params", "1,2"])), 1);
    assert_eq!(code(&obstructor(&["parity", "--spec", &spec, "--params", "1,1,2,3,4,5"])), 1);
    assert_eq!(code(&obstructor(&["parity", "--spec", &spec, "--seed", "1", "--params", "1"])), 1);
}

#[test]
fn parity_of_an_even_system_exits_two() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("points4.json");
    fs::write(
        &spec,
        r#"{"complex": {"vertices": [0,1,2,3], "maximal": []}, "m": 0,
            "sigma": [[[0],[1]],[[0],[2]],[[0],[3]],[[1],[2]],[[1],[3]],[[2],[3]]]}"#,
    )
    .unwrap();
    let out = obstructor(&["parity", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn obstruction_verdicts() {
    let dir = TempDir::new().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let k5 = write(
        "k5.json",
        r#"{"vertices":[0,1,2,3,4],"maximal":[[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#,
    );
    let out = obstructor(&["obstruction", "--complex", &k5, "--m", "2"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["result"]["class"], "nonzero_obstruction");
    assert_eq!(report["cochain_weight"], 5);

    let path = write("path.json", r#"{"vertices":[0,1,2],"maximal":[[0,1],[1,2]]}"#);
    let witness = dir.path().join("witness.json");
    let out = obstructor(&[
        "obstruction", "--complex", &path, "--m", "1", "--params", "1,0,2", "-o", witness.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("VanishesMod2"));
    let report = json(&witness);
    assert_eq!(report["result"]["class"], "vanishes_mod2");
    assert_eq!(report["result"]["witness"].as_array().unwrap().len(), 1);

    let out = obstructor(&["obstruction", "--complex", &path, "--m", "7"]);
    assert_eq!(code(&out), 2);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["cell_count"], 0);

    let spec = build(&dir, "flores(1)", "f1.json");
    assert_eq!(code(&obstructor(&["obstruction", "--complex", &spec, "--m", "2"])), 0);
}

#[test]
fn dump_deleted_product() {
    let dir = TempDir::new().unwrap();
    let spec = build(&dir, "vk(2)", "k33.json");
    let out = obstructor(&["dump-dp", "--complex", &spec]);
    assert_eq!(code(&out), 0);
    let dump: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let top = dump["cells"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(top["dimension"], 2);
    assert_eq!(top["count"], 18);
}

#[test]
fn group_bounds() {
    let out = obstructor(&["group-bound", "--expr", "F2 x F2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("obdim(F2 x F2) >= 4"));
    assert!(stdout(&obstructor(&["group-bound", "--expr", "Z x Z"])).starts_with("obdim(Z x Z) >= 2"));

    let out = obstructor(&["group-bound", "--expr", "H[obdim>=6] >< Z"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains(">= 6\n"));
    assert!(stdout(&out).contains("semidirect rule not applicable"));

    let out = obstructor(&["group-bound", "--expr", "F2^4 >< F2", "--explain"]);
    let text = stdout(&out);
    assert!(text.contains("obdim(F2 x F2 x F2 x F2 >< F2) >= 10"));
    assert!(text.contains("\"rule\": \"semidirect\""));

    let out = obstructor(&["group-bound", "--expr", "F2^2", "--gdim", "2", "--torsion-free"]);
    assert!(stdout(&out).contains("advisory (not certified)"));
    assert_eq!(code(&obstructor(&["group-bound", "--expr", "F2 x"])), 1);
}

#[test]
fn manifest_reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let spec = build(&dir, "join(flores(1), points3)", "j.json");
    let cert = dir.path().join("cert.json");
    let manifest = dir.path().join("run.json");
    let run = || {
        obstructor(&[
            "--manifest",
            manifest.to_str().unwrap(),
            "certify",
            "--spec",
            &spec,
            "--seed",
            "9",
            "-o",
            cert.to_str().unwrap(),
        ])
    };
    assert_eq!(code(&run()), 0);
    let first = fs::read(&cert).unwrap();
    let first_manifest = fs::read(&manifest).unwrap();
    assert_eq!(code(&run()), 0);
    assert_eq!(fs::read(&cert).unwrap(), first);
    assert_eq!(fs::read(&manifest).unwrap(), first_manifest);

    let m = json(&manifest);
    assert_eq!(m["command"], "certify");
    assert_eq!(m["verdict"], "obstructor");
    assert!(m["map"]["params"].is_object());
    let out = obstructor(&["replay", manifest.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let mut edited = m.clone();
    edited["outputs"][0]["sha256"] = serde_json::Value::String("0".repeat(64));
    fs::write(&manifest, edited.to_string()).unwrap();
    assert_eq!(code(&obstructor(&["replay", manifest.to_str().unwrap()])), 1);
}
