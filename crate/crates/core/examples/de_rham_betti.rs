//! Betti numbers of invariant de Rham cohomology and the strong Lefschetz property.

use leflab::cohomology::strong_lefschetz;
use leflab::model::builtin;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let mut out = String::new();
    for name in ["t4", "kodaira_thurston", "nil6_two_step"] {
        let m = builtin(name)?;
        let summary = m.derham();
        let sl = strong_lefschetz(&m)?;
        out += &format!("{name}: betti {:?}", summary.betti);
        match sl.failure {
            None => out += ", strong Lefschetz holds\n",
            Some((k, kernel)) => {
                let kernel: Vec<String> = kernel.iter().map(|f| format!("[{f}]")).collect();
                out += &format!(", strong Lefschetz fails in degree {k}: {}\n", kernel.join(", "));
            }
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
