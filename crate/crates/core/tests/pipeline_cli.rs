// Copyright 2026 The dam-forecast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dam_forecast::outliers::LambdaMode;
use dam_forecast::pipeline::PipelineConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dam-forecast"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn written(out: &Output) -> Vec<PathBuf> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter_map(|l| l.strip_prefix("wrote "))
        .map(PathBuf::from)
        .collect()
}

fn csv_files(dir: &Path) -> Vec<PathBuf> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            files.extend(csv_files(&p));
        } else if p.extension().is_some_and(|e| e == "csv") {
            files.push(p);
        }
    }
    files.sort();
    files
}

#[test]
fn forecast_writes_every_listed_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "forecast",
        "--synth",
        "default",
        "--seed",
        "42",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let files = written(&out);
    for name in [
        "stats.csv",
        "boxplot_before.csv",
        "boxplot_before.svg",
        "boxplot_iqr.csv",
        "boxplot_iqr.svg",
        "boxplot_rpca.csv",
        "boxplot_rpca.svg",
        "outliers_iqr.csv",
        "outliers_rpca.csv",
        "decomposition/low_rank.csv",
        "decomposition/sparse.csv",
        "decomposition/decomposition.json",
        "report.csv",
        "report.txt",
        "effective_config.json",
    ] {
        assert!(files.contains(&dir.path().join(name)), "{name} not listed");
    }
    for f in &files {
        assert!(f.is_file(), "{} missing", f.display());
    }
    assert!(!dir.path().join("FAILED").exists());

    let report = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let mut lines = report.lines();
    assert_eq!(
        lines.next().unwrap(),
        "model,train_rmse,test_rmse,train_r2,test_r2,n_train,n_test,outliers_removed"
    );
    let test_rmse: Vec<f64> = lines
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(test_rmse.len(), 4);
    assert!(test_rmse[2] < test_rmse[0]);
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = run(&[
            "forecast",
            "--synth",
            "default",
            "--seed",
            "42",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let fa = csv_files(a.path());
    assert!(fa.len() >= 10);
    for f in fa {
        let rel = f.strip_prefix(a.path()).unwrap();
        assert_eq!(
            fs::read(&f).unwrap(),
            fs::read(b.path().join(rel)).unwrap(),
            "{}",
            rel.display()
        );
    }
    for svg in ["boxplot_before.svg", "boxplot_rpca.svg"] {
        let strip = |p: PathBuf| -> Vec<String> {
            fs::read_to_string(p)
                .unwrap()
                .lines()
                .filter(|l| !l.starts_with("<!-- generated by"))
                .map(String::from)
                .collect()
        };
        assert_eq!(strip(a.path().join(svg)), strip(b.path().join(svg)));
    }
}

#[test]
fn effective_config_round_trips_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("in.json");
    fs::write(&cfg_path, r#"{"iqr_k": 2.0, "pca": {"k": 3}, "seed": 9}"#).unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "synth",
        "--config",
        cfg_path.to_str().unwrap(),
        "--synth",
        "clean",
        "--iqr-k",
        "3",
        "--lambda-mode",
        "paper",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(out_dir.join("effective_config.json")).unwrap();
    let cfg = PipelineConfig::from_json_str(&text).unwrap();
    assert_eq!(cfg.iqr_k, 3.0);
    assert_eq!(cfg.pca.k, 3);
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.rpca.lambda_mode, LambdaMode::Paper);
    assert_eq!(cfg.to_json().unwrap(), text);
    for f in ["synth_observed.csv", "synth_clean.csv", "synth_spikes.csv"] {
        assert!(out_dir.join(f).is_file());
    }
}

#[test]
fn missing_input_exits_two_and_marks_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "stats",
        "--input",
        "/definitely/not/here.csv",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let marker = fs::read_to_string(dir.path().join("FAILED")).unwrap();
    assert!(marker.contains("ingest"), "{marker}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("here.csv"));
}

#[test]
fn bad_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    fs::write(
        &csv,
        "timestamp,price,load\n2020-01-01 00:00,abc,1\n2020-01-01 01:00,3,1\n",
    )
    .unwrap();
    let out = run(&[
        "stats",
        "--input",
        csv.to_str().unwrap(),
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('2'));

    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"iqr_k": 1.5, "colour": "blue"}"#).unwrap();
    let out = run(&[
        "stats",
        "--config",
        cfg.to_str().unwrap(),
        "--synth",
        "default",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["stats", "--out", dir.path().join("none").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "no data source");

    let out = run(&[
        "forecast",
        "--synth",
        "default",
        "--pca-k",
        "9",
        "--out",
        dir.path().join("k").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["bogus-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_stage_runs_standalone_on_a_csv() {
    let dir = tempfile::tempdir().unwrap();
    let synth_dir = dir.path().join("synth");
    let spec = dir.path().join("spec.json");
    fs::write(&spec, r#"{"n_days": 60, "spike_rate": 0.03}"#).unwrap();
    let out = run(&[
        "synth",
        "--synth",
        spec.to_str().unwrap(),
        "--out",
        synth_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let input = synth_dir.join("synth_observed.csv");
    assert_eq!(
        fs::read_to_string(&input).unwrap().lines().count(),
        60 * 24 + 1
    );

    let cases: [(&[&str], &[&str]); 6] = [
        (&["stats"], &["stats.csv", "correlations.csv"]),
        (
            &["boxplot", "--group-by", "year"],
            &["boxplot_before.csv", "boxplot_before.svg"],
        ),
        (&["filter-iqr"], &["outliers_iqr.csv", "filtered_iqr.csv"]),
        (
            &["filter-rpca"],
            &[
                "outliers_rpca.csv",
                "filtered_rpca.csv",
                "decomposition/sparse.csv",
            ],
        ),
        (
            &["kde-score", "--kde-quantile", "0.02"],
            &["outliers_kde.csv"],
        ),
        (
            &["pca", "--pca-k", "3"],
            &["pca_model.json", "explained_variance.csv"],
        ),
    ];
    for (i, (args, expected)) in cases.iter().enumerate() {
        let out_dir = dir.path().join(format!("stage{i}"));
        let mut full: Vec<&str> = args.to_vec();
        full.extend([
            "--input",
            input.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        let out = run(&full);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        for f in *expected {
            assert!(out_dir.join(f).is_file(), "{args:?} did not write {f}");
        }
        for f in written(&out) {
            assert!(f.is_file());
        }
    }

    let iqr = fs::read_to_string(dir.path().join("stage2/outliers_iqr.csv")).unwrap();
    let flagged = iqr.lines().count() - 1;
    let kept = fs::read_to_string(dir.path().join("stage2/filtered_iqr.csv"))
        .unwrap()
        .lines()
        .count()
        - 1;
    assert_eq!(flagged + kept, 60 * 24);
}
