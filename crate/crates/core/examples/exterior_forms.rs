//! Wedge products, interior products and integration of invariant forms.

use leflab::exactlinalg::int;
use leflab::exterior::{integrate, Form};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let n = 2;
    let e = |idx: &[usize]| Form::monomial(n, idx);
    let omega = e(&[1, 2])? + e(&[3, 4])?;
    let volume = omega.wedge(&omega)?;
    assert_eq!(integrate(&volume)?, int(2));

    let a = e(&[1])? + e(&[3])?.scale(&int(-2));
    let b = e(&[2, 4])?;
    let ab = a.wedge(&b)?;
    assert_eq!(ab, b.wedge(&a)?);

    let mut out = format!("omega = {omega}\nomega ^ omega = {volume}, integral {}\n", integrate(&volume)?);
    out += &format!("a = {a}, b = {b}, a ^ b = {ab}\n");
    out += &format!("iota_1 (a ^ b) = {}\n", ab.interior(1));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
