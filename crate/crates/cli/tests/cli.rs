//! End-to-end checks of the runner binary: registry size, strict config
//! validation, deterministic output bytes, and the CSV/metadata contract.

use std::process::Command;

fn bqsp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bqsp"))
}

#[test]
fn list_names_at_least_ten_experiments() {
    let out = bqsp().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let count = text.lines().filter(|l| l.starts_with("  ")).count();
    assert!(count >= 10, "only {count} experiments listed:\n{text}");
    for name in ["gcr_vs_bb1_scaling", "squeezing", "cat_prep", "gkp_prep", "gkp_noisy_prep", "sbs_backaction", "readout_sweep", "teleport_pieces", "two_qubit_bell", "phase_estimation"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn invalid_key_exits_two_and_names_it() {
    let dir = std::env::temp_dir().join("bqsp_cli_badkey");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "experiment = \"gkp_prep\"\nfokc_dim = 64\n").unwrap();
    let out = bqsp().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("fokc_dim"), "stderr should name the key: {err}");
}

#[test]
fn csv_bytes_are_deterministic_for_config_and_seed() {
    let dir = std::env::temp_dir().join("bqsp_cli_det");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("dr.toml");
    std::fs::write(
        &cfg,
        "experiment = \"duration_ratio\"\nseed = 11\n[parameters]\nalphas = [5.0, 8.0, 14.0]\n",
    )
    .unwrap();
    let out_a = dir.join("a.csv");
    let out_b = dir.join("b.csv");
    for (out, path) in [(&out_a, "a"), (&out_b, "b")] {
        let status = bqsp()
            .arg("run")
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .arg("--jobs")
            .arg("2")
            .status()
            .unwrap();
        assert!(status.success(), "run {path} failed");
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b, "CSV bytes differ between identical runs");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# schema=1\n"), "missing schema header");
    assert!(text.lines().nth(1).unwrap().starts_with("alpha,"), "missing column header");
}

#[test]
fn run_writes_metadata_sidecar_with_version_and_config() {
    let dir = std::env::temp_dir().join("bqsp_cli_meta");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("fock.json");
    std::fs::write(&cfg, r#"{"experiment": "fock_prep", "seed": 5}"#).unwrap();
    let out = dir.join("fock.csv");
    let status = bqsp().arg("run").arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("fock.meta.json")).unwrap())
            .unwrap();
    assert!(meta["version"].as_str().unwrap().starts_with("bqsp-v"));
    assert_eq!(meta["seed"], 5);
    assert_eq!(meta["resolved_config"]["experiment"], "fock_prep");
    // three depth rows
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 2 + 3);
}

#[test]
fn fock_dim_env_override_is_honored() {
    let dir = std::env::temp_dir().join("bqsp_cli_env");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("dr.toml");
    std::fs::write(&cfg, "experiment = \"fock_prep\"\n[parameters]\ndepth = 1\n").unwrap();
    let out = dir.join("env.csv");
    let status = bqsp()
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .env("BQSP_FOCK_DIM", "48")
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn unknown_experiment_is_rejected() {
    let dir = std::env::temp_dir().join("bqsp_cli_unknown");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("u.toml");
    std::fs::write(&cfg, "experiment = \"frobnicate\"\n").unwrap();
    let out = bqsp().arg("run").arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("frobnicate"));
}
