//! The two short exact sequences through the filtered cohomology.

use leflab::cohomology::resolution_check;
use leflab::model::builtin;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let m = builtin("nil6_four_step")?;
    let mut out = String::new();
    for p in 0..=m.n() {
        for v in resolution_check(&m, p)? {
            assert!(v.passed(), "{v:?}");
            out += &format!(
                "p = {p}, {:?} sequence, k = {}: {} -> {} -> {}\n",
                v.sequence, v.degree, v.coker_dim, v.middle_dim, v.ker_dim
            );
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
