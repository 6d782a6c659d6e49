//! The sl2 operator calculus on forms: `L`, `Lambda`, `H`, the Lefschetz
//! decomposition and the operators built from it (`*_r`, `L^{-p}`, `Pi^p`,
//! `del_+` and `del_-`).
//!
//! The decomposition is computed from a per-model table: bases of the
//! primitive subspaces `P^s = ker(Lambda) in Omega^s` and, per degree `k`, the
//! assembled map `(+)_l L^l : (+)_l P^{k-2l} -> Omega^k`. Building the table
//! checks that this map is bijective.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exactlinalg::{Rational, SubspaceBasis};
use crate::exterior::{contract, graded_dim, operator_matrix, ExteriorError, Form};
use crate::model::SymplecticModel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Sl2Error {
    #[error("dimension mismatch: model has n = {model}, form has n = {form}")]
    DimensionMismatch { model: usize, form: usize },
    #[error("model `{0}` has a degenerate symplectic form")]
    Degenerate(String),
    #[error("form is not homogeneous")]
    NotHomogeneous,
    #[error("degree {degree} out of range (at most {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("form is not primitive: {0}")]
    NotPrimitive(String),
    /// An identity that must hold by construction failed; always a bug or a
    /// miscalibrated operator, never a property of the input.
    #[error("internal consistency violation: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// One of the three sl2 generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2Generator {
    L,
    Lambda,
    H,
}

fn check_n(model: &SymplecticModel, a: &Form) -> Result<(), Sl2Error> {
    if model.n() == a.n() {
        Ok(())
    } else {
        Err(Sl2Error::DimensionMismatch {
            model: model.n(),
            form: a.n(),
        })
    }
}

pub fn sl2_apply(which: Sl2Generator, model: &SymplecticModel, a: &Form) -> Result<Form, Sl2Error> {
    match which {
        Sl2Generator::L => lefschetz(model, a),
        Sl2Generator::Lambda => dual_lefschetz(model, a),
        Sl2Generator::H => degree_operator(model, a),
    }
}

/// `L a = omega ^ a`.
pub fn lefschetz(model: &SymplecticModel, a: &Form) -> Result<Form, Sl2Error> {
    check_n(model, a)?;
    Ok(model.omega().wedge(a)?)
}

/// `L^j a`.
pub fn lefschetz_power(model: &SymplecticModel, a: &Form, j: usize) -> Result<Form, Sl2Error> {
    let mut out = a.clone();
    for _ in 0..j {
        if out.is_zero() {
            break;
        }
        out = lefschetz(model, &out)?;
    }
    check_n(model, &out)?;
    Ok(out)
}

/// `Lambda a`, contraction with the Poisson bivector.
pub fn dual_lefschetz(model: &SymplecticModel, a: &Form) -> Result<Form, Sl2Error> {
    check_n(model, a)?;
    let pi = model
        .bivector()
        .ok_or_else(|| Sl2Error::Degenerate(model.name().to_string()))?;
    Ok(contract(pi, a)?)
}

/// `Lambda^j a`.
pub fn dual_lefschetz_power(model: &SymplecticModel, a: &Form, j: usize) -> Result<Form, Sl2Error> {
    let mut out = a.clone();
    for _ in 0..j {
        out = dual_lefschetz(model, &out)?;
    }
    Ok(out)
}

/// `H a = sum_k (n - k) a_k`.
pub fn degree_operator(model: &SymplecticModel, a: &Form) -> Result<Form, Sl2Error> {
    check_n(model, a)?;
    let n = model.n() as i64;
    Ok(a.degrees().into_iter().fold(Form::zero(a.n()), |acc, k| {
        acc + a.component(k).scale(&Rational::from_integer((n - k as i64).into()))
    }))
}

#[derive(Clone, Debug)]
struct Block {
    l: usize,
    s: usize,
    offset: usize,
}

/// Primitive subspaces and the inverse of the assembled Lefschetz map, per degree.
#[derive(Clone, Debug)]
pub struct LefschetzTables {
    n: usize,
    primitive: Vec<SubspaceBasis>,
    blocks: Vec<Vec<Block>>,
    assembled: Vec<SubspaceBasis>,
}

impl LefschetzTables {
    pub(crate) fn build(model: &SymplecticModel) -> Result<Self, Sl2Error> {
        let n = model.n();
        let mut primitive = Vec::with_capacity(n + 1);
        for s in 0..=n {
            let lambda = operator_matrix(n, s, s.saturating_sub(2), |f| dual_lefschetz(model, f))?;
            primitive.push(lambda.kernel());
        }
        let mut blocks = Vec::with_capacity(2 * n + 1);
        let mut assembled = Vec::with_capacity(2 * n + 1);
        for k in 0..=2 * n {
            let mut degree_blocks = Vec::new();
            let mut vectors = Vec::new();
            for l in lefschetz_range(n, k) {
                let s = k - 2 * l;
                degree_blocks.push(Block {
                    l,
                    s,
                    offset: vectors.len(),
                });
                for b in primitive[s].vectors() {
                    let lifted = lefschetz_power(model, &Form::from_vector(n, s, b), l)?;
                    vectors.push(lifted.component_vector(k));
                }
            }
            let dim = graded_dim(n, k);
            let basis = SubspaceBasis::new(dim, vectors)
                .ok()
                .filter(|b| b.dim() == dim)
                .ok_or_else(|| {
                    Sl2Error::Inconsistent(format!("Lefschetz map is not bijective in degree {k}"))
                })?;
            blocks.push(degree_blocks);
            assembled.push(basis);
        }
        Ok(Self {
            n,
            primitive,
            blocks,
            assembled,
        })
    }

    /// Basis of `P^s`, `s <= n`.
    pub fn primitive_basis(&self, s: usize) -> &SubspaceBasis {
        &self.primitive[s]
    }

    /// `(l, B_{k-2l})` for the degree-`k` part of `a`; zero components included.
    fn decompose_degree(&self, a: &Form, k: usize) -> Vec<(usize, Form)> {
        let coords = self.assembled[k]
            .coordinates(&a.component_vector(k))
            .expect("assembled Lefschetz basis spans the whole degree");
        self.blocks[k]
            .iter()
            .map(|b| {
                let len = self.primitive[b.s].dim();
                let v = self.primitive[b.s].combination(&coords[b.offset..b.offset + len]);
                (b.l, Form::from_vector(self.n, b.s, &v))
            })
            .collect()
    }
}

/// `max(0, k - n) ..= k / 2`.
pub fn lefschetz_range(n: usize, k: usize) -> std::ops::RangeInclusive<usize> {
    k.saturating_sub(n)..=k / 2
}

/// The Lefschetz decomposition `A_k = sum_l L^l B_{k-2l}` of a homogeneous form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzComponents {
    degree: usize,
    components: BTreeMap<usize, Form>,
}

impl LefschetzComponents {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `B_{k-2l}`, or `None` if that component vanishes.
    pub fn get(&self, l: usize) -> Option<&Form> {
        self.components.get(&l)
    }

    /// Nonzero components as `(l, B_{k-2l})`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Form)> {
        self.components.iter().map(|(l, b)| (*l, b))
    }

    pub fn reconstruct(&self, model: &SymplecticModel) -> Result<Form, Sl2Error> {
        let mut out = Form::zero(model.n());
        for (l, b) in self.iter() {
            out += &lefschetz_power(model, b, l)?;
        }
        Ok(out)
    }
}

/// Decomposes a homogeneous form; the zero form decomposes trivially in degree 0.
pub fn lefschetz_decompose(model: &SymplecticModel, a: &Form) -> Result<LefschetzComponents, Sl2Error> {
    check_n(model, a)?;
    let degree = match a.degrees().as_slice() {
        [] => 0,
        [k] => *k,
        _ => return Err(Sl2Error::NotHomogeneous),
    };
    let tables = model.lefschetz_tables()?;
    let components = tables
        .decompose_degree(a, degree)
        .into_iter()
        .filter(|(_, b)| !b.is_zero())
        .collect();
    Ok(LefschetzComponents { degree, components })
}

/// Rebuilds every homogeneous component of `a` through `f(l, s, B_s)`.
fn map_components<F>(model: &SymplecticModel, a: &Form, mut f: F) -> Result<Form, Sl2Error>
where
    F: FnMut(usize, usize, &Form) -> Result<Option<Form>, Sl2Error>,
{
    check_n(model, a)?;
    let tables = model.lefschetz_tables()?;
    let mut out = Form::zero(a.n());
    for k in a.degrees() {
        for (l, b) in tables.decompose_degree(a, k) {
            if b.is_zero() {
                continue;
            }
            if let Some(image) = f(l, k - 2 * l, &b)? {
                out += &image;
            }
        }
    }
    Ok(out)
}

/// The reflection `*_r(L^r B_s) = L^{n-r-s} B_s`, extended componentwise.
pub fn star_r(model: &SymplecticModel, a: &Form) -> Result<Form, Sl2Error> {
    let n = model.n();
    map_components(model, a, |l, s, b| lefschetz_power(model, b, n - l - s).map(Some))
}

/// `L^{-p}`: strips `p` powers of `L` from each component, dropping those with `l < p`.
pub fn l_inverse(model: &SymplecticModel, a: &Form, p: usize) -> Result<Form, Sl2Error> {
    map_components(model, a, |l, _, b| {
        if l < p {
            Ok(None)
        } else {
            lefschetz_power(model, b, l - p).map(Some)
        }
    })
}

/// `Pi^p`: keeps the components with `l <= p`.
pub fn pi_p(model: &SymplecticModel, a: &Form, p: usize) -> Result<Form, Sl2Error> {
    map_components(model, a, |l, _, b| {
        if l > p {
            Ok(None)
        } else {
            lefschetz_power(model, b, l).map(Some)
        }
    })
}

/// Splits `d b = del_+ b + L del_- b` for a primitive `b`.
pub fn del_plus_minus(model: &SymplecticModel, b: &Form) -> Result<(Form, Form), Sl2Error> {
    check_n(model, b)?;
    let zero = Form::zero(b.n());
    if b.is_zero() {
        return Ok((zero.clone(), zero));
    }
    let s = b.homogeneous_degree().ok_or(Sl2Error::NotHomogeneous)?;
    if s > model.n() || !dual_lefschetz(model, b)?.is_zero() {
        return Err(Sl2Error::NotPrimitive(b.to_string()));
    }
    let db = model.d(b);
    if db.is_zero() {
        return Ok((zero.clone(), zero));
    }
    let tables = model.lefschetz_tables()?;
    let mut plus = zero.clone();
    let mut minus = zero;
    for (l, c) in tables.decompose_degree(&db, s + 1) {
        match l {
            0 => plus = c,
            1 => minus = c,
            _ if c.is_zero() => {}
            _ => {
                return Err(Sl2Error::Inconsistent(format!(
                    "d of primitive {b} has a Lefschetz component with l = {l}"
                )))
            }
        }
    }
    Ok((plus, minus))
}

fn homogeneous(a: &Form) -> Result<Option<usize>, Sl2Error> {
    match a.degrees().as_slice() {
        [] => Ok(None),
        [k] => Ok(Some(*k)),
        _ => Err(Sl2Error::NotHomogeneous),
    }
}

/// `Lambda B = 0`, cross-checked against `L^{n-k+1} B = 0`.
pub fn is_primitive(model: &SymplecticModel, a: &Form) -> Result<bool, Sl2Error> {
    is_p_filtered(model, a, 0)
}

/// `Lambda^{p+1} A = 0`, cross-checked against `L^{n-k+1+p} A = 0`.
pub fn is_p_filtered(model: &SymplecticModel, a: &Form, p: usize) -> Result<bool, Sl2Error> {
    check_n(model, a)?;
    let n = model.n();
    let Some(k) = homogeneous(a)? else {
        return Ok(true);
    };
    if k > n + p {
        return Err(Sl2Error::DegreeOutOfRange {
            degree: k,
            max: n + p,
        });
    }
    let by_lambda = dual_lefschetz_power(model, a, p + 1)?.is_zero();
    let by_lefschetz = lefschetz_power(model, a, n + p + 1 - k)?.is_zero();
    if by_lambda != by_lefschetz {
        return Err(Sl2Error::Inconsistent(format!(
            "filteredness criteria disagree for p = {p} on {a}"
        )));
    }
    Ok(by_lambda)
}

/// Basis of `F^p Omega^k = (+)_{l <= p} L^l P^{k-2l}` in monomial coordinates.
pub fn filtered_basis(model: &SymplecticModel, p: usize, k: usize) -> Result<SubspaceBasis, Sl2Error> {
    let n = model.n();
    let tables = model.lefschetz_tables()?;
    let mut vectors = Vec::new();
    for l in lefschetz_range(n, k).filter(|&l| l <= p) {
        for b in tables.primitive_basis(k - 2 * l).vectors() {
            vectors.push(lefschetz_power(model, &Form::from_vector(n, k - 2 * l, b), l)?.component_vector(k));
        }
    }
    SubspaceBasis::new(graded_dim(n, k), vectors)
        .map_err(|e| Sl2Error::Inconsistent(format!("filtered basis in degree {k}: {e}")))
}

/// Basis of the primitive subspace `P^s` (`s <= n`).
pub fn primitive_basis(model: &SymplecticModel, s: usize) -> Result<&SubspaceBasis, Sl2Error> {
    if s > model.n() {
        return Err(Sl2Error::DegreeOutOfRange {
            degree: s,
            max: model.n(),
        });
    }
    Ok(model.lefschetz_tables()?.primitive_basis(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{int, rational};
    use crate::model::builtin;

    fn e(n: usize, idx: &[usize]) -> Form {
        Form::monomial(n, idx).unwrap()
    }

    #[test]
    fn h_on_omega() {
        let t4 = builtin("t4").unwrap();
        assert!(degree_operator(&t4, t4.omega()).unwrap().is_zero());
        let t6 = builtin("t6").unwrap();
        assert_eq!(degree_operator(&t6, t6.omega()).unwrap(), t6.omega().clone());
    }

    #[test]
    fn commutator_on_constants() {
        let t4 = builtin("t4").unwrap();
        let one = Form::one(2);
        let lhs = dual_lefschetz(&t4, &lefschetz(&t4, &one).unwrap()).unwrap();
        assert_eq!(lhs, Form::constant(2, int(2)));
        assert_eq!(lhs, degree_operator(&t4, &one).unwrap());
    }

    #[test]
    fn l_of_e1() {
        let t4 = builtin("t4").unwrap();
        assert_eq!(lefschetz(&t4, &e(2, &[1])).unwrap(), e(2, &[1, 3, 4]));
    }

    #[test]
    fn decompose_omega() {
        let t4 = builtin("t4").unwrap();
        let dec = lefschetz_decompose(&t4, t4.omega()).unwrap();
        assert_eq!(dec.get(1), Some(&Form::one(2)));
        assert_eq!(dec.get(0), None);
    }

    #[test]
    fn decompose_e12() {
        let t4 = builtin("t4").unwrap();
        let dec = lefschetz_decompose(&t4, &e(2, &[1, 2])).unwrap();
        let half = rational(1, 2);
        assert_eq!(dec.get(1), Some(&Form::constant(2, half.clone())));
        assert_eq!(dec.get(0), Some(&(e(2, &[1, 2]) - e(2, &[3, 4])).scale(&half)));
        assert_eq!(dec.reconstruct(&t4).unwrap(), e(2, &[1, 2]));
    }

    #[test]
    fn decompose_primitive_is_fixed() {
        let t4 = builtin("t4").unwrap();
        let b = e(2, &[1, 2]) - e(2, &[3, 4]);
        let dec = lefschetz_decompose(&t4, &b).unwrap();
        assert_eq!(dec.iter().collect::<Vec<_>>(), vec![(0, &b)]);
    }

    #[test]
    fn decompose_rejects_mixed_degrees() {
        let t4 = builtin("t4").unwrap();
        let mixed = Form::one(2) + e(2, &[1]);
        assert_eq!(lefschetz_decompose(&t4, &mixed), Err(Sl2Error::NotHomogeneous));
    }

    #[test]
    fn primitivity_examples() {
        let t4 = builtin("t4").unwrap();
        assert!(is_primitive(&t4, &e(2, &[1])).unwrap());
        assert!(!is_primitive(&t4, t4.omega()).unwrap());
        assert!(is_p_filtered(&t4, t4.omega(), 1).unwrap());
        assert!(is_primitive(&t4, &(e(2, &[1, 2]) - e(2, &[3, 4]))).unwrap());
        assert!(matches!(
            is_primitive(&t4, &e(2, &[1, 2, 3])),
            Err(Sl2Error::DegreeOutOfRange { degree: 3, max: 2 })
        ));
        assert!(matches!(
            is_p_filtered(&t4, &e(2, &[1, 2, 3, 4]), 1),
            Err(Sl2Error::DegreeOutOfRange { degree: 4, max: 3 })
        ));
    }

    #[test]
    fn star_r_examples() {
        let t4 = builtin("t4").unwrap();
        assert_eq!(star_r(&t4, &Form::one(2)).unwrap(), e(2, &[1, 2, 3, 4]).scale(&int(2)));
        let b = e(2, &[1]);
        assert_eq!(star_r(&t4, &b).unwrap(), lefschetz(&t4, &b).unwrap());
        let b2 = e(2, &[1, 2]) - e(2, &[3, 4]);
        assert_eq!(star_r(&t4, &b2).unwrap(), b2);
    }

    #[test]
    fn l_inverse_and_pi_examples() {
        let t4 = builtin("t4").unwrap();
        let half = rational(1, 2);
        assert_eq!(l_inverse(&t4, &e(2, &[1, 2]), 1).unwrap(), Form::constant(2, half.clone()));
        assert!(l_inverse(&t4, &e(2, &[1]), 1).unwrap().is_zero());
        assert_eq!(
            pi_p(&t4, &e(2, &[1, 2]), 0).unwrap(),
            (e(2, &[1, 2]) - e(2, &[3, 4])).scale(&half)
        );
        assert_eq!(pi_p(&t4, t4.omega(), 1).unwrap(), t4.omega().clone());
    }

    #[test]
    fn del_pm_on_torus_vanishes() {
        let t4 = builtin("t4").unwrap();
        let (plus, minus) = del_plus_minus(&t4, &e(2, &[1])).unwrap();
        assert!(plus.is_zero() && minus.is_zero());
    }

    #[test]
    fn del_pm_on_kodaira_thurston() {
        let kt = builtin("kodaira_thurston").unwrap();
        let (plus, minus) = del_plus_minus(&kt, &e(2, &[4])).unwrap();
        // e^{12} is primitive for omega = e^{14} + e^{23}
        assert_eq!(plus, e(2, &[1, 2]));
        assert!(minus.is_zero());
        assert!(matches!(del_plus_minus(&kt, kt.omega()), Err(Sl2Error::NotPrimitive(_))));
    }

    #[test]
    fn filtered_dimensions_on_t4() {
        let t4 = builtin("t4").unwrap();
        let dims: Vec<usize> = (0..=2).map(|k| filtered_basis(&t4, 0, k).unwrap().dim()).collect();
        assert_eq!(dims, vec![1, 4, 5]);
        let dims: Vec<usize> = (0..=3).map(|k| filtered_basis(&t4, 1, k).unwrap().dim()).collect();
        assert_eq!(dims, vec![1, 4, 6, 4]);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let t4 = builtin("t4").unwrap();
        assert_eq!(
            lefschetz(&t4, &e(3, &[1])),
            Err(Sl2Error::DimensionMismatch { model: 2, form: 3 })
        );
    }
}
