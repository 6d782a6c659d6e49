//! Duality of the filtered cohomologies: pairing matrices, the Stokes
//! identity and the graded-symmetry signs.

use leflab::cohomology::build_filtered_complex;
use leflab::duality::{frobenius_report, phi_duality_check, stokes_check};
use leflab::model::builtin;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let kt = builtin("kodaira_thurston")?;
    let fc = build_filtered_complex(&kt, 1)?;
    let phi = phi_duality_check(&fc, 7, 10)?;
    assert!(phi.passed());
    let mut out = format!("F^1H dims {:?}\n", phi.dims);
    for pr in &phi.pairings {
        out += &format!("g_1 on degree {} x {}: rank {}\n", pr.left.degree, pr.right.degree, pr.rank);
    }
    out += &format!("adjoint signs {:?}\n", phi.adjoint_signs);
    assert!(stokes_check(&fc, 7, 25)?.passed());
    for entry in frobenius_report(&fc)? {
        out += &format!("degrees {} <-> {}: sign {:?}\n", entry.degree, entry.bar, entry.sign);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
