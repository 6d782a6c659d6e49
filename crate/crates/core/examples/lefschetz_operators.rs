//! The sl2 triple `(L, Lambda, H)`, the Lefschetz decomposition and the
//! operators built from it.

use leflab::exterior::Form;
use leflab::model::builtin;
use leflab::sl2ops::{
    degree_operator, dual_lefschetz, is_primitive, l_inverse, lefschetz, lefschetz_decompose, pi_p, star_r,
};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let kt = builtin("kodaira_thurston")?;
    let n = kt.n();
    let a = Form::monomial(n, &[1, 4])?.scale(&leflab::exactlinalg::int(3))
        + Form::monomial(n, &[2, 3])?
        + Form::monomial(n, &[1, 3])?;
    let e1 = Form::monomial(n, &[1])?;

    let commutator = dual_lefschetz(&kt, &lefschetz(&kt, &a)?)? - lefschetz(&kt, &dual_lefschetz(&kt, &a)?)?;
    assert_eq!(commutator, degree_operator(&kt, &a)?);

    let parts = lefschetz_decompose(&kt, &a)?;
    let mut out = format!("a = {a}\n");
    for (l, b) in parts.iter() {
        assert!(is_primitive(&kt, b)?);
        out += &format!("  L^{l} B_{} with B = {b}\n", a.homogeneous_degree().unwrap_or(0) - 2 * l);
    }
    assert_eq!(parts.reconstruct(&kt)?, a);

    out += &format!("*_r a = {}\n", star_r(&kt, &a)?);
    out += &format!("*_r e^1 = {}, *_r *_r e^1 = {}\n", star_r(&kt, &e1)?, star_r(&kt, &star_r(&kt, &e1)?)?);
    out += &format!("Pi^0 a = {}\n", pi_p(&kt, &a, 0)?);
    out += &format!("L^-1 a = {}\n", l_inverse(&kt, &a, 1)?);
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
