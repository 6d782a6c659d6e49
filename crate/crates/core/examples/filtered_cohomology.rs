//! The `p`-filtered complexes and their cohomology.

use leflab::cohomology::build_filtered_complex;
use leflab::model::builtin;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let kt = builtin("kodaira_thurston")?;
    let mut out = String::new();
    for p in 0..=kt.n() {
        let fc = build_filtered_complex(&kt, p)?;
        let dims: Vec<usize> = fc.cohomology().iter().map(|h| h.dim()).collect();
        out += &format!("p = {p}: spaces {:?}, F^pH {:?}\n", fc.space_dims(), dims);
        for h in fc.cohomology().iter().filter(|h| h.dim() > 0).take(2) {
            let reps: Vec<String> = h.representatives().iter().map(ToString::to_string).collect();
            out += &format!("  {}: {}\n", h.label(), reps.join(", "));
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
