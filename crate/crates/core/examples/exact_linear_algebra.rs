//! Kernels, images and quotients over the rationals.

use leflab::exactlinalg::{int, rational, QuotientSpace, RationalMatrix};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let m = RationalMatrix::from_rows(
        vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![rational(1, 2), int(0), int(-1)],
        ],
        3,
    )?;
    let rki = m.rank_kernel_image();
    assert_eq!(rki.rank, m.rank_naive());
    assert_eq!(rki.rank + rki.kernel.dim(), m.cols());

    // The plane `im m` modulo the line it shares with `span(e1 + 2 e2)`.
    let line = leflab::exactlinalg::SubspaceBasis::new(3, vec![vec![int(1), int(2), rational(1, 2)]])?;
    let q = QuotientSpace::new(rki.image.clone(), line.intersection(&rki.image))?;

    let mut out = format!("matrix:\n{m}\nrank {}\n", rki.rank);
    out += &format!("kernel basis {:?}\n", strings(rki.kernel.vectors()));
    out += &format!("image basis {:?}\n", strings(rki.image.vectors()));
    out += &format!("dim im / (im cap line) = {}\n", q.dim());
    Ok(out)
}

fn strings(vectors: &[Vec<leflab::exactlinalg::Rational>]) -> Vec<Vec<String>> {
    vectors.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect()
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
