//! CLI behavior: artifact layout, exit codes, error records, determinism,
//! and config-file merging.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semipartm"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semipartm-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_docs(dir: &Path) -> PathBuf {
    let path = dir.join("docs.jsonl");
    std::fs::write(
        &path,
        concat!(
            "{\"id\":\"d1\",\"text\":\"delivery was late and manager apologized\",\"covariates\":[1,5]}\n",
            "{\"id\":\"d2\",\"text\":\"great service and food quality\",\"covariates\":[0,12]}\n",
            "{\"id\":\"d3\",\"text\":\"payment failed online refund requested\",\"covariates\":[2,3]}\n",
            "{\"id\":\"d4\",\"text\":\"cashier was friendly service fast\",\"covariates\":[1,8]}\n",
            "{\"id\":\"d5\",\"text\":\"delivery delivery late refund slow\",\"covariates\":[3,2]}\n",
            "{\"id\":\"d6\",\"text\":\"service manager refund payment counter\",\"covariates\":[2,9]}\n",
        ),
    )
    .unwrap();
    path
}

fn ingest(dir: &Path, docs: &Path) -> PathBuf {
    let out = dir.join("ingested");
    let status = bin()
        .args(["ingest", "--docs"])
        .arg(docs)
        .args(["--stem", "--stop-words", "default", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    out
}

#[test]
fn ingest_fit_predict_round_trip() {
    let dir = scratch("roundtrip");
    let docs = write_docs(&dir);
    let ingested = ingest(&dir, &docs);
    assert!(ingested.join("corpus.tsv").exists());
    assert!(ingested.join("aux.tsv").exists());
    assert!(ingested.join("manifest.json").exists());

    let model = dir.join("model");
    let status = bin()
        .args(["fit", "--corpus"])
        .arg(ingested.join("corpus.tsv"))
        .args(["--aux"])
        .arg(ingested.join("aux.tsv"))
        .args(["--method", "semipartm1", "--topics", "2", "--seed", "9", "--out"])
        .arg(&model)
        .status()
        .unwrap();
    assert!(status.success());
    for artifact in ["x.tsv", "b.tsv", "metadata.json", "regressor.json", "regressor_coefs.tsv"] {
        assert!(model.join(artifact).exists(), "missing {artifact}");
    }
    let metadata = std::fs::read_to_string(model.join("metadata.json")).unwrap();
    assert!(metadata.contains("\"xi\": 1.0"), "manifest records xi: {metadata}");

    // Prediction on the training covariates reproduces the fitted values.
    let out = dir.join("pred.tsv");
    let status = bin()
        .args(["predict", "--model"])
        .arg(&model)
        .args(["--aux"])
        .arg(ingested.join("aux.tsv"))
        .args(["--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let predicted = std::fs::read_to_string(&out).unwrap();
    assert!(predicted.starts_with("topic\td1\td2"));
}

#[test]
fn predict_rejects_mismatched_inputs_with_data_exit_code() {
    let dir = scratch("mismatch");
    let docs = write_docs(&dir);
    let ingested = ingest(&dir, &docs);
    let model = dir.join("model");
    assert!(bin()
        .args(["fit", "--corpus"])
        .arg(ingested.join("corpus.tsv"))
        .args(["--aux"])
        .arg(ingested.join("aux.tsv"))
        .args(["--method", "semipartm1", "--topics", "2", "--out"])
        .arg(&model)
        .status()
        .unwrap()
        .success());

    // Wrong covariate count.
    let bad_aux = dir.join("bad_aux.tsv");
    std::fs::write(&bad_aux, "id\tz1\td1\t1.0\n").unwrap();
    let wide_aux = dir.join("wide_aux.tsv");
    std::fs::write(
        &wide_aux,
        "id\tz1\tz2\tz3\nd1\t1\t2\t3\nd2\t1\t2\t3\nd3\t1\t2\t3\nd4\t1\t2\t3\nd5\t1\t2\t3\nd6\t1\t2\t3\n",
    )
    .unwrap();
    let output = bin()
        .args(["predict", "--model"])
        .arg(&model)
        .args(["--aux"])
        .arg(&wide_aux)
        .args(["--out"])
        .arg(dir.join("nope.tsv"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("\"error\":\"data\""), "stderr: {stderr}");

    // Covariates handed to a baseline model.
    let lsa_model = dir.join("lsa");
    assert!(bin()
        .args(["fit", "--corpus"])
        .arg(ingested.join("corpus.tsv"))
        .args(["--method", "lsa", "--topics", "2", "--out"])
        .arg(&lsa_model)
        .status()
        .unwrap()
        .success());
    let output = bin()
        .args(["predict", "--model"])
        .arg(&lsa_model)
        .args(["--aux"])
        .arg(ingested.join("aux.tsv"))
        .args(["--out"])
        .arg(dir.join("nope2.tsv"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    let output = bin().args(["fit", "--bogus-flag"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));

    let dir = scratch("usage");
    let docs = write_docs(&dir);
    let ingested = ingest(&dir, &docs);
    // semipartm without --xi is a usage error.
    let output = bin()
        .args(["fit", "--corpus"])
        .arg(ingested.join("corpus.tsv"))
        .args(["--aux"])
        .arg(ingested.join("aux.tsv"))
        .args(["--method", "semipartm", "--topics", "2", "--out"])
        .arg(dir.join("m"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    // --reps 0 is a usage error.
    let output = bin()
        .args([
            "evaluate", "--docs", "10", "--words", "10", "--sparsity", "0.5", "--m", "1",
            "--reps", "0", "--methods", "lsa", "--out",
        ])
        .arg(dir.join("e"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn missing_files_exit_two() {
    let dir = scratch("missing");
    let output = bin()
        .args(["fit", "--corpus", "/nonexistent/corpus.tsv", "--method", "lsa", "--topics", "2", "--out"])
        .arg(dir.join("m"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn lda_fits_are_byte_identical_under_a_seed() {
    let dir = scratch("determinism");
    let docs = write_docs(&dir);
    let ingested = ingest(&dir, &docs);
    let fit_once = |out: &Path| {
        assert!(bin()
            .args(["fit", "--corpus"])
            .arg(ingested.join("corpus.tsv"))
            .args([
                "--method", "lda", "--topics", "2", "--seed", "7", "--sweeps", "60",
                "--burn-in", "30", "--out",
            ])
            .arg(out)
            .status()
            .unwrap()
            .success());
    };
    let a = dir.join("lda_a");
    let b = dir.join("lda_b");
    fit_once(&a);
    fit_once(&b);
    for artifact in ["x.tsv", "b.tsv", "metadata.json"] {
        assert_eq!(
            std::fs::read(a.join(artifact)).unwrap(),
            std::fs::read(b.join(artifact)).unwrap(),
            "artifact {artifact} differs"
        );
    }
}

#[test]
fn config_file_fills_unset_flags_and_flags_win() {
    let dir = scratch("config");
    let docs = write_docs(&dir);
    let ingested = ingest(&dir, &docs);
    let config = dir.join("run.conf");
    std::fs::write(&config, "topics = 2\nseed = 11\nxi = 1\n").unwrap();
    let model = dir.join("model");
    // --topics comes from the config; --xi is overridden on the command line.
    assert!(bin()
        .args(["fit", "--corpus"])
        .arg(ingested.join("corpus.tsv"))
        .args(["--aux"])
        .arg(ingested.join("aux.tsv"))
        .args(["--method", "semipartm", "--xi", "2", "--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&model)
        .status()
        .unwrap()
        .success());
    let metadata = std::fs::read_to_string(model.join("metadata.json")).unwrap();
    assert!(metadata.contains("\"topics\": 2"));
    assert!(metadata.contains("\"seed\": 11"));
    assert!(metadata.contains("\"xi\": 2.0"), "flag beats config: {metadata}");
}

#[test]
fn cv_subcommand_writes_error_table_and_choice() {
    let dir = scratch("cv");
    let docs = write_docs(&dir);
    let ingested = ingest(&dir, &docs);
    let out = dir.join("cv");
    assert!(bin()
        .args(["cv", "--corpus"])
        .arg(ingested.join("corpus.tsv"))
        .args(["--aux"])
        .arg(ingested.join("aux.tsv"))
        .args(["--topics", "2", "--grid", "0,1", "--folds", "2", "--seed", "3", "--out"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let errors = std::fs::read_to_string(out.join("cv_errors.tsv")).unwrap();
    assert!(errors.starts_with("candidate\tfold1\tfold2"));
    assert_eq!(errors.lines().count(), 3);
    let metadata = std::fs::read_to_string(out.join("metadata.json")).unwrap();
    assert!(metadata.contains("chosen_xi"));
}

#[test]
fn frozen_vocabulary_projection_counts_oov() {
    let dir = scratch("frozen");
    let docs = write_docs(&dir);
    let ingested = ingest(&dir, &docs);
    let new_docs = dir.join("new.jsonl");
    std::fs::write(
        &new_docs,
        "{\"id\":\"n1\",\"text\":\"delivery refund unicorn zebra\"}\n",
    )
    .unwrap();
    let out = dir.join("projected");
    assert!(bin()
        .args(["ingest", "--docs"])
        .arg(&new_docs)
        .args(["--stem", "--stop-words", "default", "--freeze-vocabulary"])
        .arg(ingested.join("corpus.tsv"))
        .args(["--out"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"oov_dropped\": 2"), "{manifest}");
}

#[test]
fn baseline_predict_round_trips() {
    let dir = scratch("baseline-predict");
    let docs = write_docs(&dir);
    let ingested = ingest(&dir, &docs);
    for (method, extra) in [
        ("lda", vec!["--sweeps", "60", "--burn-in", "30"]),
        ("plsa", vec![]),
    ] {
        let model = dir.join(format!("model_{method}"));
        let mut cmd = bin();
        cmd.args(["fit", "--corpus"])
            .arg(ingested.join("corpus.tsv"))
            .args(["--method", method, "--topics", "2", "--seed", "4"]);
        cmd.args(&extra);
        cmd.args(["--out"]).arg(&model);
        assert!(cmd.status().unwrap().success());

        let out = dir.join(format!("pred_{method}.tsv"));
        assert!(bin()
            .args(["predict", "--model"])
            .arg(&model)
            .args(["--corpus"])
            .arg(ingested.join("corpus.tsv"))
            .args(["--seed", "8", "--out"])
            .arg(&out)
            .status()
            .unwrap()
            .success());
        let predicted = std::fs::read_to_string(&out).unwrap();
        assert!(predicted.starts_with("topic\td1"), "{method}: {predicted}");
        // Mixture columns: finite, nonnegative values for every document.
        for line in predicted.lines().skip(1) {
            for field in line.split('\t').skip(1) {
                let v: f64 = field.parse().unwrap();
                assert!(v.is_finite() && v >= 0.0);
            }
        }
    }
}

#[test]
fn simulate_writes_dataset_with_seed_manifest() {
    let dir = scratch("simulate");
    let out = dir.join("data");
    assert!(bin()
        .args([
            "simulate", "--docs", "20", "--words", "25", "--sparsity", "0.7", "--m", "1",
            "--seed", "3", "--out",
        ])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    for artifact in [
        "y_train.tsv",
        "y_holdout.tsv",
        "z_train.tsv",
        "z_holdout.tsv",
        "b_true_train.tsv",
        "b_true_holdout.tsv",
        "x_true.tsv",
        "manifest.json",
    ] {
        assert!(out.join(artifact).exists(), "missing {artifact}");
    }
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("derived_seeds"));
    assert!(manifest.contains("clamp_rate"));
}

#[test]
fn report_regroups_rows() {
    let dir = scratch("report");
    let rows = dir.join("rows.tsv");
    std::fs::write(
        &rows,
        "method\tdocs\twords\tsparsity\tmisspec\treplicate\tb_train\tb_holdout\tx_train\txi\tdataset_seed\n\
         LSA\t150\t500\t0.7\t1\t0\t0.2\t0.1\t0.4\t\t1\n\
         LSA\t150\t500\t0.9\t1\t0\t0.3\t\t0.5\t\t2\n",
    )
    .unwrap();
    let out = dir.join("out");
    assert!(bin()
        .args(["report", "--rows"])
        .arg(&rows)
        .args(["--group-by", "docs-sparsity", "--out"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let table = std::fs::read_to_string(out.join("report_docs_sparsity.txt")).unwrap();
    assert!(table.contains("LSA"));
    let tsv = std::fs::read_to_string(out.join("report_docs_sparsity.tsv")).unwrap();
    assert!(tsv.contains("train_0.7"));
}
