// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use laminar_cli::{cache_path, load_map, without_timestamp, CacheStatus, LanguageReport, VerdictDocument};
use laminar_core::traintrack::fixtures::{tribonacci, TRIBONACCI};
use laminar_core::{fixed_ray, Alphabet, Letter, ReducedWord};
use serde_json::Value;

fn laminar(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laminar"))
        .args(args)
        .env("LAMINAR_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn classify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = laminar(dir.path(), &["classify", "--ray", "periodic: a"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("ConicalCertified"));

    let bad = laminar(dir.path(), &["classify", "--horizon", "50"]);
    assert_eq!(code(&bad), 3);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("100·delta"));

    let shallow = laminar(dir.path(), &["classify", "--depth", "300"]);
    assert_eq!(code(&shallow), 3);

    let unknown_map = laminar(dir.path(), &["classify", "--map", "no-such-map"]);
    assert_eq!(code(&unknown_map), 3);
}

#[test]
fn undecided_rays_exit_with_unknown() {
    // leaf material, a long non-leaf stretch, then leaf material again
    let mut leaf = fixed_ray(Arc::new(tribonacci()), Letter::generator(0)).unwrap();
    let leaf = leaf.extend(300).unwrap().into_letters();
    let mut letters = leaf.clone();
    letters.extend(std::iter::repeat_n(Letter::generator(1), 400));
    letters.extend(leaf);
    let word = ReducedWord::reduce(letters);
    let text = Alphabet::standard(3).render(&word);
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("v.json");
    let ray = format!("explicit: {text}");
    let out = laminar(
        dir.path(),
        &[
            "classify",
            "--horizon",
            "120",
            "--depth",
            &word.len().to_string(),
            "--ray",
            &ray,
            "--out",
            out_path.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stdout));
    let doc: VerdictDocument = serde_json::from_value(read_json(&out_path)).unwrap();
    assert!(doc.has_unknown());
}

#[test]
fn documents_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let run = laminar(
            dir.path(),
            &["classify", "--ray", "fixed: tribonacci seed a", "--out", out.to_str().unwrap()],
        );
        assert_eq!(code(&run), 0);
    }
    let (a, b) = (read_json(&a), read_json(&b));
    assert_eq!(a["schema"], "laminar.verdict/v1");
    assert_eq!(without_timestamp(&a).unwrap(), without_timestamp(&b).unwrap());
}

#[test]
fn cache_is_reused_and_never_trusted_blindly() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let map_path = dir.path().join("trib.map");
    fs::write(&map_path, TRIBONACCI).unwrap();
    let map_arg = map_path.to_str().unwrap();
    let report_path = dir.path().join("report.json");
    let build = |extra: &[&str]| {
        let mut args = vec!["build-language", "--map", map_arg, "--horizon", "60", "--out"];
        args.push(report_path.to_str().unwrap());
        args.extend_from_slice(extra);
        let out = laminar(&cache, &args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let report: LanguageReport = serde_json::from_value(read_json(&report_path)).unwrap();
        (report, String::from_utf8_lossy(&out.stderr).to_string())
    };
    let (first, _) = build(&[]);
    assert_eq!(first.cache_status, CacheStatus::Built);
    let (second, _) = build(&[]);
    assert_eq!(second.cache_status, CacheStatus::Hit);
    assert_eq!(first.language, second.language);

    // a corrupted artefact is rebuilt with a warning
    fs::write(&first.cache_path, "{ not json").unwrap();
    let (third, warning) = build(&[]);
    assert!(matches!(third.cache_status, CacheStatus::Rebuilt(_)));
    assert!(warning.contains("warning"));

    // an artefact recorded for different map bytes is not used
    let stale = fs::read(&first.cache_path).unwrap();
    fs::write(&map_path, format!("{TRIBONACCI}# edited\n")).unwrap();
    let edited = load_map(map_arg).unwrap();
    fs::write(cache_path(&cache, std::slice::from_ref(&edited), 60), stale).unwrap();
    let (fourth, _) = build(&[]);
    assert_eq!(
        fourth.cache_status,
        CacheStatus::Rebuilt("recorded source hash differs from the map".into())
    );
    assert_eq!(fourth.language.source_hashes, vec![edited.source_hash().to_string()]);
    assert_ne!(fourth.language.hash, first.language.hash);
}

#[test]
fn replay_accepts_exact_and_rejects_tampered_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("winf.json");
    let out = laminar(dir.path(), &["winf", "--target", "1500", "--out", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let replay = laminar(dir.path(), &["replay-certificate", "--certificate", cert.to_str().unwrap()]);
    assert_eq!(code(&replay), 0, "{}", String::from_utf8_lossy(&replay.stdout));

    let mut doc = read_json(&cert);
    assert_eq!(doc["schema"], "laminar.winf-certificate/v1");
    let kappa = doc["scheme"]["blocks"][2]["kappa"].as_u64().unwrap();
    doc["scheme"]["blocks"][2]["kappa"] = Value::from(kappa + 1);
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, doc.to_string()).unwrap();
    let replay = laminar(dir.path(), &["replay-certificate", "--certificate", tampered.to_str().unwrap()]);
    assert_eq!(code(&replay), 1);
    assert!(String::from_utf8_lossy(&replay.stdout).contains("FAILED"));

    let verdicts = dir.path().join("verdicts.json");
    let out = laminar(dir.path(), &["classify", "--ray", "periodic: a b", "--out", verdicts.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let replay = laminar(dir.path(), &["replay-certificate", "--certificate", verdicts.to_str().unwrap()]);
    assert_eq!(code(&replay), 0, "{}", String::from_utf8_lossy(&replay.stdout));
    let mut doc = read_json(&verdicts);
    doc["verdicts"][0]["payload"]["occurrences"][1]["offset"] = Value::from(3);
    fs::write(&verdicts, doc.to_string()).unwrap();
    let replay = laminar(dir.path(), &["replay-certificate", "--certificate", verdicts.to_str().unwrap()]);
    assert_eq!(code(&replay), 1);
}

#[test]
fn cayley_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cayley.json");
    let run = laminar(
        dir.path(),
        &["cayley", "--presentation", "free2", "--radii", "1,2,3", "--out", out.to_str().unwrap()],
    );
    assert_eq!(code(&run), 0);
    let report = read_json(&out);
    assert_eq!(report["schema"], "laminar.cayley-report/v1");
    let radii = report["radii"].as_array().unwrap();
    assert_eq!(radii.len(), 3);
    assert!(radii.iter().all(|r| r["delta"]["delta"] == 0));
    assert_eq!(radii[2]["vertices"], 53);
    let bad = laminar(dir.path(), &["cayley", "--presentation", "nowhere"]);
    assert_eq!(code(&bad), 3);
}

#[test]
fn cache_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env-cache");
    let out = laminar(&cache, &["build-language", "--horizon", "30"]);
    assert_eq!(code(&out), 0);
    let files: Vec<_> = fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);
}
