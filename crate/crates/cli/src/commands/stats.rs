//! `exprank stats`: load a dataset and print its statistics table.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;

use exprank::dataset::{compute_stats, load_dataset};

use crate::config::{resolve_required, ConfigFile};
use crate::table;

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Directory holding IDs.txt and id2exp.txt.
    #[arg(long, value_name = "DIR")]
    pub data: Option<PathBuf>,
}

pub fn run(args: StatsArgs, cfg: &ConfigFile) -> Result<()> {
    let data: PathBuf = resolve_required(args.data, cfg, "data")?;
    let dataset = load_dataset(&data)?;
    let stats = compute_stats(&dataset);
    let rows = vec![
        vec!["users".to_string(), stats.n_users.to_string()],
        vec!["items".to_string(), stats.n_items.to_string()],
        vec!["explanations".to_string(), stats.n_explanations.to_string()],
        vec!["user-item pairs".to_string(), stats.n_pairs.to_string()],
        vec!["triplets".to_string(), stats.n_triplets.to_string()],
        vec![
            "explanations per pair".to_string(),
            format!("{:.2}", stats.exps_per_pair),
        ],
        vec![
            "density (x10^-10)".to_string(),
            format!("{:.2}", stats.density_times_1e10()),
        ],
    ];
    print!("{}", table::render(&["statistic", "value"], &rows));
    Ok(())
}
