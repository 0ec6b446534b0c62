// Running a campaign through the library and writing CSV and JSON reports.

use clap::Parser;
use qlab::experiment::{run, ExperimentConfig};
use qlab::report::{Format, RawTable};

fn main() -> qlab::Result<()> {
    let args = ["qlab", "verify-power", "--group", "Z^2", "--trials", "5", "--n", "2", "--radii", "2..4", "--seed", "3"];
    let config = ExperimentConfig::try_parse_from(args).expect("valid arguments");
    let out = run(&config)?;
    println!("status {}, {} rows, {} violations", out.status(), out.table.len(), out.violations);

    let csv = out.table.render(Format::Csv)?;
    print!("{}", csv.lines().take(12).map(|l| format!("{l}\n")).collect::<String>());
    let json = out.table.render(Format::Json)?;
    let same = RawTable::parse(&csv, Format::Csv)?.rows == RawTable::parse(&json, Format::Json)?.rows;
    println!("CSV and JSON carry the same rows: {same}");
    Ok(())
}
