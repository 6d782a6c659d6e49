//! Seeded law checking, and what a miscalibrated `Lambda` looks like.

use leflab::exactlinalg::int;
use leflab::fuzz::{fuzz, run_laws, OPERATOR_LAWS};
use leflab::model::builtin;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let t4 = builtin("t4")?;
    let report = fuzz(&t4, 42, 25);
    assert!(report.all_passed());
    let mut out = format!("{} laws pass on t4\n", report.verdicts.len());

    let broken = t4.with_lambda_scaled(&int(2));
    for law in run_laws(&broken, 42, 25, Some(OPERATOR_LAWS)) {
        if let Some(w) = law.witness {
            out += &format!("Lambda doubled: {} fails: {w}\n", law.name);
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
