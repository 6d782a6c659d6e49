//! Seeded randomized law checking.
//!
//! Each law draws from its own sampler seeded by `(seed, law index)`, so laws
//! can run concurrently and a failure reproduces from the seed alone.

use rayon::prelude::*;

use crate::cohomology::{build_filtered_complex, d_d_lambda, d_lambda, DdLambdaCohomology};
use crate::duality::{phi_duality_check, product_support_test, stokes_check};
use crate::exactlinalg::Rational;
use crate::exterior::Form;
use crate::model::SymplecticModel;
use crate::report::Report;
use crate::sampling::Sampler;
use crate::sl2ops::{
    degree_operator, del_plus_minus, dual_lefschetz, filtered_basis, is_p_filtered, l_inverse, lefschetz,
    lefschetz_decompose, lefschetz_power, pi_p, primitive_basis, star_r,
};

type Outcome = Result<(), String>;
type Law = fn(&SymplecticModel, &mut Sampler, usize) -> Outcome;

/// The operator laws of the sl2 calculus (the core suite).
pub const OPERATOR_LAWS: &[&str] = &[
    "sl2_commutators",
    "degree_operator",
    "pi_plus_l_inverse_identity",
    "star_r_involution",
    "star_r_is_lefschetz_power",
    "lefschetz_round_trip",
    "filtered_criteria_agree",
];

const LAWS: &[(&str, Law)] = &[
    ("sl2_commutators", sl2_commutators),
    ("degree_operator", degree_operator_law),
    ("pi_plus_l_inverse_identity", pi_plus_l_inverse),
    ("star_r_involution", star_r_involution),
    ("star_r_is_lefschetz_power", star_r_is_lefschetz_power),
    ("lefschetz_round_trip", lefschetz_round_trip),
    ("filtered_criteria_agree", filtered_criteria_agree),
    ("del_plus_minus_reconstruction", del_plus_minus_reconstruction),
    ("product_support", product_support),
    ("wedge_associative", wedge_associative),
    ("wedge_graded_commutative", wedge_graded_commutative),
    ("interior_anti_derivation", interior_anti_derivation),
    ("d_anti_derivation", d_anti_derivation),
    ("d_squared_zero", d_squared_zero),
    ("d_lambda_squared_zero", d_lambda_squared_zero),
    ("ddlambda_of_exact_is_exact", ddlambda_of_exact_is_exact),
    ("d_plus_dlambda_degree_separation", degree_separation),
    ("stokes", stokes),
    ("chain_adjointness", chain_adjointness),
];

pub fn law_names() -> Vec<&'static str> {
    LAWS.iter().map(|(name, _)| *name).collect()
}

/// Outcome of one law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub witness: Option<String>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn law_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (index as u64).wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// Runs the named laws (all laws when `only` is `None`), in catalog order.
pub fn run_laws(model: &SymplecticModel, seed: u64, trials: usize, only: Option<&[&str]>) -> Vec<LawOutcome> {
    LAWS.par_iter()
        .enumerate()
        .filter(|(_, (name, _))| only.is_none_or(|names| names.contains(name)))
        .map(|(index, (name, law))| {
            let mut sampler = Sampler::new(law_seed(seed, index));
            LawOutcome {
                name,
                trials,
                witness: law(model, &mut sampler, trials).err(),
            }
        })
        .collect()
}

/// Every law as a report.
pub fn fuzz(model: &SymplecticModel, seed: u64, trials: usize) -> Report {
    let mut report = Report::new(model, "fuzz");
    report.parameter("seed", seed).parameter("trials", trials);
    for outcome in run_laws(model, seed, trials, None) {
        report.verdict(outcome.name, outcome.witness.map_or(Ok(()), Err));
    }
    report
}

fn fail<T: std::fmt::Display>(e: T) -> String {
    e.to_string()
}

fn expect_eq(lhs: &Form, rhs: &Form, what: impl FnOnce() -> String) -> Outcome {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{}: {lhs} != {rhs}", what()))
    }
}

fn random_degree(model: &SymplecticModel, s: &mut Sampler) -> usize {
    s.below(2 * model.n() + 1)
}

fn sl2_commutators(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let two = Rational::from_integer(2.into());
    for _ in 0..trials {
        let a = s.mixed_form(model.n());
        let l = |f: &Form| lefschetz(model, f).map_err(fail);
        let lam = |f: &Form| dual_lefschetz(model, f).map_err(fail);
        let h = |f: &Form| degree_operator(model, f).map_err(fail);
        expect_eq(&(h(&lam(&a)?)? - lam(&h(&a)?)?), &lam(&a)?.scale(&two), || {
            format!("[H, Lambda] a = 2 Lambda a fails for a = {a}")
        })?;
        expect_eq(&(h(&l(&a)?)? - l(&h(&a)?)?), &l(&a)?.scale(&-two.clone()), || {
            format!("[H, L] a = -2 L a fails for a = {a}")
        })?;
        expect_eq(&(lam(&l(&a)?)? - l(&lam(&a)?)?), &h(&a)?, || {
            format!("[Lambda, L] a = H a fails for a = {a}")
        })?;
    }
    Ok(())
}

fn degree_operator_law(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let n = model.n() as i64;
    for _ in 0..trials {
        let k = random_degree(model, s);
        let a = s.form(model.n(), k);
        let expected = a.scale(&Rational::from_integer((n - k as i64).into()));
        expect_eq(&degree_operator(model, &a).map_err(fail)?, &expected, || {
            format!("H a = (n - {k}) a fails for a = {a}")
        })?;
    }
    Ok(())
}

fn pi_plus_l_inverse(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    for _ in 0..trials {
        let k = random_degree(model, s);
        let a = s.form(model.n(), k);
        for p in 0..=model.n() {
            let back = pi_p(model, &a, p).map_err(fail)?
                + lefschetz_power(model, &l_inverse(model, &a, p + 1).map_err(fail)?, p + 1).map_err(fail)?;
            expect_eq(&back, &a, || format!("Pi^{p} + L^{} L^-{} != 1 on a = {a}", p + 1, p + 1))?;
        }
    }
    Ok(())
}

fn star_r_involution(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    for _ in 0..trials {
        let a = s.mixed_form(model.n());
        let twice = star_r(model, &star_r(model, &a).map_err(fail)?).map_err(fail)?;
        expect_eq(&twice, &a, || format!("*_r *_r a != a for a = {a}"))?;
    }
    Ok(())
}

fn star_r_is_lefschetz_power(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let n = model.n();
    for _ in 0..trials {
        let k = random_degree(model, s);
        let a = s.form(n, k);
        let expected = if k <= n {
            lefschetz_power(model, &a, n - k)
        } else {
            l_inverse(model, &a, k - n)
        }
        .map_err(fail)?;
        expect_eq(&star_r(model, &a).map_err(fail)?, &expected, || {
            format!("*_r a != L^(n - {k}) a for a = {a}")
        })?;
    }
    Ok(())
}

fn lefschetz_round_trip(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    for _ in 0..trials {
        let k = random_degree(model, s);
        let a = s.form(model.n(), k);
        let parts = lefschetz_decompose(model, &a).map_err(fail)?;
        for (l, b) in parts.iter() {
            if !dual_lefschetz(model, b).map_err(fail)?.is_zero() {
                return Err(format!("component B_{} (l = {l}) of {a} is not primitive: {b}", k - 2 * l));
            }
        }
        expect_eq(&parts.reconstruct(model).map_err(fail)?, &a, || {
            format!("decomposition of {a} does not reconstruct")
        })?;
    }
    Ok(())
}

/// Both criteria on random forms and on random filtered forms, so both answers occur.
fn filtered_criteria_agree(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let n = model.n();
    for _ in 0..trials {
        let p = s.below(n + 1);
        let k = s.below(n + p + 1);
        let generic = s.form(n, k);
        let basis = filtered_basis(model, p, k).map_err(fail)?;
        let filtered = s.form_in(n, k, &basis);
        is_p_filtered(model, &generic, p).map_err(fail)?;
        if !is_p_filtered(model, &filtered, p).map_err(fail)? {
            return Err(format!("{filtered} built from F^{p} is not {p}-filtered"));
        }
    }
    Ok(())
}

fn del_plus_minus_reconstruction(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let n = model.n();
    for _ in 0..trials {
        let deg = s.below(n + 1);
        let b = s.form_in(n, deg, primitive_basis(model, deg).map_err(fail)?);
        let (plus, minus) = del_plus_minus(model, &b).map_err(fail)?;
        for (name, part) in [("del_+", &plus), ("del_-", &minus)] {
            if !dual_lefschetz(model, part).map_err(fail)?.is_zero() {
                return Err(format!("{name} of {b} is not primitive: {part}"));
            }
        }
        let rebuilt = plus + lefschetz(model, &minus).map_err(fail)?;
        expect_eq(&rebuilt, &model.d(&b), || format!("d B != del_+ B + L del_- B for B = {b}"))?;
    }
    Ok(())
}

fn product_support(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let v = product_support_test(model, s.below(usize::MAX) as u64, trials).map_err(fail)?;
    match v.witness {
        None => Ok(()),
        Some(w) => Err(w),
    }
}

fn wedge_associative(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let n = model.n();
    for _ in 0..trials {
        let (a, b, c) = (s.mixed_form(n), s.mixed_form(n), s.mixed_form(n));
        let left = a.wedge(&b).and_then(|ab| ab.wedge(&c)).map_err(fail)?;
        let right = b.wedge(&c).and_then(|bc| a.wedge(&bc)).map_err(fail)?;
        expect_eq(&left, &right, || format!("(a b) c != a (b c) for a = {a}, b = {b}, c = {c}"))?;
    }
    Ok(())
}

fn wedge_graded_commutative(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let n = model.n();
    for _ in 0..trials {
        let (j, k) = (random_degree(model, s), random_degree(model, s));
        let (a, b) = (s.form(n, j), s.form(n, k));
        let ab = a.wedge(&b).map_err(fail)?;
        let ba = b.wedge(&a).map_err(fail)?;
        let expected = if j * k % 2 == 0 { ba } else { -ba };
        expect_eq(&ab, &expected, || format!("a b != (-1)^(jk) b a for a = {a}, b = {b}"))?;
    }
    Ok(())
}

fn interior_anti_derivation(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let n = model.n();
    for _ in 0..trials {
        let i = 1 + s.below(2 * n);
        let j = random_degree(model, s);
        let (a, b) = (s.form(n, j), s.mixed_form(n));
        let lhs = a.wedge(&b).map_err(fail)?.interior(i);
        let second = a.wedge(&b.interior(i)).map_err(fail)?;
        let rhs = a.interior(i).wedge(&b).map_err(fail)? + if j.is_multiple_of(2) { second } else { -second };
        expect_eq(&lhs, &rhs, || format!("iota_{i} is not an anti-derivation on a = {a}, b = {b}"))?;
    }
    Ok(())
}

fn d_anti_derivation(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let n = model.n();
    for _ in 0..trials {
        let j = random_degree(model, s);
        let (a, b) = (s.form(n, j), s.mixed_form(n));
        let lhs = model.d(&a.wedge(&b).map_err(fail)?);
        let second = a.wedge(&model.d(&b)).map_err(fail)?;
        let rhs = model.d(&a).wedge(&b).map_err(fail)? + if j.is_multiple_of(2) { second } else { -second };
        expect_eq(&lhs, &rhs, || format!("Leibniz rule fails on a = {a}, b = {b}"))?;
    }
    Ok(())
}

fn d_squared_zero(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    for _ in 0..trials {
        let a = s.mixed_form(model.n());
        let dd = model.d(&model.d(&a));
        if !dd.is_zero() {
            return Err(format!("d d a = {dd} for a = {a}"));
        }
    }
    Ok(())
}

fn d_lambda_squared_zero(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    for _ in 0..trials {
        let a = s.mixed_form(model.n());
        let twice = d_lambda(model, &d_lambda(model, &a).map_err(fail)?).map_err(fail)?;
        if !twice.is_zero() {
            return Err(format!("d^Lambda d^Lambda a = {twice} for a = {a}"));
        }
    }
    Ok(())
}

fn ddlambda_of_exact_is_exact(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let n = model.n();
    for _ in 0..trials {
        let k = s.below(2 * n);
        let a = s.form(n, k);
        let image = d_d_lambda(model, &model.d(&a)).map_err(fail)?;
        if !model.d_matrix(k).image().contains(&image.component_vector(k + 1)) {
            return Err(format!("dd^Lambda d a = {image} is not exact for a = {a}"));
        }
    }
    Ok(())
}

/// On homogeneous forms `(d + d^Lambda) a = 0` iff both parts vanish; checked
/// on random forms and on random elements of `ker d cap ker d^Lambda`.
fn degree_separation(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let n = model.n();
    let all = DdLambdaCohomology::compute(model).map_err(fail)?;
    for _ in 0..trials {
        let k = random_degree(model, s);
        for a in [s.form(n, k), s.form_in(n, k, all.plus[k].cocycles())] {
            let da = model.d(&a);
            let dla = d_lambda(model, &a).map_err(fail)?;
            let sum_zero = (&da + &dla).is_zero();
            if sum_zero != (da.is_zero() && dla.is_zero()) {
                return Err(format!("(d + d^Lambda) a = 0 does not split for a = {a}"));
            }
        }
    }
    Ok(())
}

fn stokes(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    for p in 0..=model.n() {
        let fc = build_filtered_complex(model, p).map_err(fail)?;
        let v = stokes_check(&fc, s.below(usize::MAX) as u64, trials).map_err(fail)?;
        if let Some(w) = v.witness {
            return Err(format!("p = {p}: {w}"));
        }
    }
    Ok(())
}

fn chain_adjointness(model: &SymplecticModel, s: &mut Sampler, trials: usize) -> Outcome {
    let per_degree = trials.div_ceil(10).max(1);
    for p in 0..=model.n() {
        let fc = build_filtered_complex(model, p).map_err(fail)?;
        let v = phi_duality_check(&fc, s.below(usize::MAX) as u64, per_degree).map_err(fail)?;
        if let Some(w) = v.witness {
            return Err(format!("p = {p}: {w}"));
        }
    }
    Ok(())
}
