//! The `d + d^Lambda` / `dd^Lambda` pairing, its Lefschetz blocks, the
//! compatibility diagrams and the product-support law.

use leflab::cohomology::DdLambdaCohomology;
use leflab::duality::{d_block_decomposition_with, dd_pairing_with, diagram_check_all, product_support_exhaustive};
use leflab::model::builtin;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let kt = builtin("kodaira_thurston")?;
    let all = DdLambdaCohomology::compute(&kt)?;
    let mut out = String::new();
    for k in 0..=2 * kt.n() {
        let d = dd_pairing_with(&kt, &all, k)?;
        let blocks = d_block_decomposition_with(&kt, &all, k)?;
        assert!(d.passed() && blocks.passed());
        let sizes: Vec<String> = blocks
            .blocks
            .iter()
            .map(|b| format!("r={} s={}: {}x{}", b.r, b.s, b.report.matrix.rows(), b.report.matrix.cols()))
            .collect();
        out += &format!("k = {k}: D has rank {}, blocks [{}]\n", d.rank, sizes.join("; "));
    }
    let diagrams = diagram_check_all(&kt)?;
    assert!(diagrams.iter().all(|v| v.passed()));
    out += &format!("{} diagrams commute\n", diagrams.len());
    let support = product_support_exhaustive(&builtin("t4")?)?;
    assert!(support.passed());
    out += &format!("t4 support law: {} products checked, {} forced to vanish\n", support.trials, support.forced_zero);
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
