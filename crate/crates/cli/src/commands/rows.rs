//! Per-replicate result rows: the TSV schema shared by `evaluate` (writer)
//! and `report` (reader).

use std::path::Path;

use semipartm_core::evaluate::EvalRow;

use crate::error::{data, CliError};

pub const HEADER: &str =
    "method\tdocs\twords\tsparsity\tmisspec\treplicate\tb_train\tb_holdout\tx_train\txi\tdataset_seed";

pub fn render_rows(rows: &[EvalRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            row.method,
            row.docs,
            row.words,
            row.sparsity,
            row.misspec,
            row.replicate,
            row.sim_b_train,
            row.sim_b_holdout.map_or(String::new(), |v| v.to_string()),
            row.sim_x_train,
            row.xi.map_or(String::new(), |v| v.to_string()),
            row.dataset_seed,
        ));
    }
    out
}

pub fn read_rows(path: &Path) -> Result<Vec<EvalRow>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| data(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| data(format!("{}: empty rows file", path.display())))?;
    if header != HEADER {
        return Err(data(format!(
            "{}: unexpected header (not a rows.tsv file?)",
            path.display()
        )));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 11 {
            return Err(data(format!(
                "{}:{}: expected 11 fields, found {}",
                path.display(),
                idx + 2,
                fields.len()
            )));
        }
        let parse_f64 = |field: &str, name: &str| -> Result<f64, CliError> {
            field.parse().map_err(|_| {
                data(format!(
                    "{}:{}: bad {name} value {field:?}",
                    path.display(),
                    idx + 2
                ))
            })
        };
        let optional = |field: &str, name: &str| -> Result<Option<f64>, CliError> {
            if field.is_empty() {
                Ok(None)
            } else {
                parse_f64(field, name).map(Some)
            }
        };
        rows.push(EvalRow {
            method: fields[0].to_string(),
            docs: parse_f64(fields[1], "docs")? as usize,
            words: parse_f64(fields[2], "words")? as usize,
            sparsity: parse_f64(fields[3], "sparsity")?,
            misspec: parse_f64(fields[4], "misspec")?,
            replicate: parse_f64(fields[5], "replicate")? as u64,
            sim_b_train: parse_f64(fields[6], "b_train")?,
            sim_b_holdout: optional(fields[7], "b_holdout")?,
            sim_x_train: parse_f64(fields[8], "x_train")?,
            xi: optional(fields[9], "xi")?,
            dataset_seed: parse_f64(fields[10], "dataset_seed")? as u64,
        });
    }
    Ok(rows)
}
