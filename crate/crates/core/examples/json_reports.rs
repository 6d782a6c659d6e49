//! Machine-readable reports, in process and through the command line.

use leflab::cli::{filtered_report, run};
use leflab::model::builtin;
use leflab::report::Report;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let report = filtered_report(&builtin("kodaira_thurston")?, 0, 1, 20)?;
    let json = report.to_json();
    assert_eq!(Report::from_json(&json)?, report);

    let output = run(["leflab", "betti", "t4", "--json"]);
    assert_eq!(output.code, 0);
    let betti = Report::from_json(&output.stdout)?;
    Ok(format!("{}\n---\n{}", json, betti.render_text()))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
