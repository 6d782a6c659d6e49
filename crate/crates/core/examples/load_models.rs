//! The built-in catalog and custom model files.

use leflab::model::{builtin, catalog_names, parse_model};

const CUSTOM: &str = r#"{
  "name": "filiform4",
  "n": 2,
  "differential": { "3": "12", "4": "13" },
  "omega": [[1, 4, 1], [2, 3, 1]]
}"#;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let mut out = String::new();
    for name in catalog_names() {
        let m = builtin(name)?;
        out += &format!("{m}\n  fingerprint {}\n", m.fingerprint());
    }
    let custom = parse_model(CUSTOM)?;
    let report = custom.validate();
    for check in &report.checks {
        out += &format!("  {:<20} {}\n", check.name, if check.passed() { "ok" } else { "FAILED" });
    }
    assert!(report.passed());
    let reparsed = parse_model(&custom.to_json_pretty())?;
    assert_eq!(reparsed.fingerprint(), custom.fingerprint());
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
