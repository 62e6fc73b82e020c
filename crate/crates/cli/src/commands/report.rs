//! `report`: re-aggregate persisted rows into a comparison table under a
//! chosen pair of grouping keys.

use std::path::PathBuf;

use clap::Args;

use semipartm_core::evaluate::{aggregate_report, render_table_text, render_table_tsv, GroupKey};
use semipartm_core::io::write_text;

use crate::commands::rows::read_rows;
use crate::error::{data, usage, CliError};

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// rows.tsv written by `evaluate`.
    #[arg(long)]
    pub rows: PathBuf,
    /// Grouping: docs-words | docs-sparsity | docs-misspec | words-misspec
    /// | sparsity-misspec.
    #[arg(long)]
    pub group_by: String,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_group(name: &str) -> Result<(GroupKey, GroupKey), CliError> {
    let (row, col) = name
        .split_once('-')
        .ok_or_else(|| usage(format!("bad --group-by {name:?}; expected row-col")))?;
    let key = |s: &str| -> Result<GroupKey, CliError> {
        match s {
            "docs" => Ok(GroupKey::Docs),
            "words" => Ok(GroupKey::Words),
            "sparsity" => Ok(GroupKey::Sparsity),
            "misspec" => Ok(GroupKey::Misspec),
            other => Err(usage(format!("unknown grouping key {other:?}"))),
        }
    };
    Ok((key(row)?, key(col)?))
}

pub fn run(args: &ReportArgs) -> Result<(), CliError> {
    let (row_key, col_key) = parse_group(&args.group_by)?;
    let rows = read_rows(&args.rows)?;
    let table = aggregate_report(&rows, row_key, col_key)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| data(format!("cannot create {}: {e}", args.out.display())))?;
    let stem = format!("report_{}", args.group_by.replace('-', "_"));
    write_text(&args.out.join(format!("{stem}.txt")), &render_table_text(&table))?;
    write_text(&args.out.join(format!("{stem}.tsv")), &render_table_tsv(&table))?;
    println!("wrote {stem}.txt and {stem}.tsv");
    Ok(())
}
