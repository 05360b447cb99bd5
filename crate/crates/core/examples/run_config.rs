//! Drives a suite from a configuration text, as the command line does.

use swnlab::cli::{moment_reports, reports_json};
use swnlab::config::RunConfig;

fn main() -> swnlab::Result<()> {
    let cfg = RunConfig::parse(
        "betas = 1, 5\n\
         grids = 2:0.25\n\
         phi.tilt = 1.0, -0.5   # two values for the two atoms\n\
         kmax = 4\n",
    )?;
    let reports = moment_reports(&cfg)?;
    println!("{} reports, all pass: {}", reports.len(), reports.iter().all(|r| r.pass));
    println!("{}", reports_json(&reports[..2]));

    println!("{}", RunConfig::parse("kmax = 4\nbeta = 1").unwrap_err());
    Ok(())
}
