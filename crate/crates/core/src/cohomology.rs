//! Cochain complexes of a model and their cohomologies: the `p`-filtered
//! complex, the `d + d^Lambda` and `dd^Lambda` theories with their primitive
//! variants, the Lefschetz maps on de Rham cohomology and the two exact
//! sequences resolving `L^{p+1}`.
//!
//! Every cohomology space is stored as a quotient inside the ambient form
//! space `Omega^j` in monomial coordinates, so classes of different theories
//! can be compared directly.

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exactlinalg::{LinalgError, QuotientSpace, Rational, RationalMatrix, SubspaceBasis};
use crate::exterior::{graded_dim, operator_matrix, Form};
use crate::model::SymplecticModel;
use crate::sl2ops::{
    dual_lefschetz, filtered_basis, l_inverse, lefschetz_power, lefschetz_range, pi_p, primitive_basis, star_r,
    Sl2Error,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("filtration level p = {p} exceeds n = {n}")]
    FilterOutOfRange { p: usize, n: usize },
    #[error("degree {degree} out of range (at most {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("d_{next} d_{degree} != 0: d_{next} d_{degree} {witness} is nonzero")]
    ComplexPropertyViolation { degree: usize, next: usize, witness: String },
    #[error("d_{degree} leaves the filtered subspace: d_{degree} {witness}")]
    NotFiltered { degree: usize, witness: String },
    #[error("{0} is not a cocycle")]
    NotACocycle(String),
    #[error("{space}: coboundaries are not contained in cocycles")]
    IllDefinedQuotient { space: String },
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which cohomology a [`CohomologySpace`] computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Theory {
    DeRham,
    Filtered { p: usize },
    DPlusDLambda,
    DDLambda,
    PrimitiveDPlusDLambda,
    PrimitiveDDLambda,
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DeRham => write!(f, "H"),
            Self::Filtered { p } => write!(f, "F^{p}H"),
            Self::DPlusDLambda => write!(f, "H_{{d+d^L}}"),
            Self::DDLambda => write!(f, "H_{{dd^L}}"),
            Self::PrimitiveDPlusDLambda => write!(f, "PH_{{d+d^L}}"),
            Self::PrimitiveDDLambda => write!(f, "PH_{{dd^L}}"),
        }
    }
}

/// A cohomology group in complex degree `degree`, realized inside `Omega^{form_degree}`.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    theory: Theory,
    n: usize,
    degree: usize,
    form_degree: usize,
    quotient: QuotientSpace,
}

impl CohomologySpace {
    pub fn new(theory: Theory, n: usize, degree: usize, form_degree: usize, quotient: QuotientSpace) -> Self {
        debug_assert_eq!(quotient.ambient_dim(), graded_dim(n, form_degree));
        Self {
            theory,
            n,
            degree,
            form_degree,
            quotient,
        }
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn form_degree(&self) -> usize {
        self.form_degree
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn quotient(&self) -> &QuotientSpace {
        &self.quotient
    }

    pub fn cocycles(&self) -> &SubspaceBasis {
        self.quotient.numerator()
    }

    pub fn coboundaries(&self) -> &SubspaceBasis {
        self.quotient.denominator()
    }

    /// Representative cocycles, one per basis class.
    pub fn representatives(&self) -> Vec<Form> {
        self.forms(self.quotient.representatives())
    }

    pub fn cocycle_forms(&self) -> Vec<Form> {
        self.forms(self.cocycles())
    }

    pub fn coboundary_forms(&self) -> Vec<Form> {
        self.forms(self.coboundaries())
    }

    fn forms(&self, basis: &SubspaceBasis) -> Vec<Form> {
        basis
            .vectors()
            .iter()
            .map(|v| Form::from_vector(self.n, self.form_degree, v))
            .collect()
    }

    /// Coordinates of `[a]` in the representative basis.
    pub fn class_of(&self, a: &Form) -> Result<Vec<Rational>, CohomologyError> {
        if !a.is_homogeneous_of(self.form_degree) {
            return Err(CohomologyError::NotACocycle(a.to_string()));
        }
        self.quotient
            .class_coordinates(&a.component_vector(self.form_degree))
            .map_err(|_| CohomologyError::NotACocycle(a.to_string()))
    }

    /// `a` is a cocycle whose class vanishes.
    pub fn is_trivial(&self, a: &Form) -> bool {
        a.is_homogeneous_of(self.form_degree) && self.coboundaries().contains(&a.component_vector(self.form_degree))
    }

    /// The form `sum_i c_i R_i` for class coordinates `c`.
    pub fn form_of_class(&self, coords: &[Rational]) -> Form {
        Form::from_vector(self.n, self.form_degree, &self.quotient.representatives().combination(coords))
    }

    pub fn label(&self) -> String {
        format!("{}^{}", self.theory, self.degree)
    }
}

fn check_p(model: &SymplecticModel, p: usize) -> Result<(), CohomologyError> {
    if p > model.n() {
        Err(CohomologyError::FilterOutOfRange { p, n: model.n() })
    } else {
        Ok(())
    }
}

/// Subspace spanned by homogeneous degree-`k` forms.
fn span_forms(n: usize, k: usize, forms: impl IntoIterator<Item = Form>) -> SubspaceBasis {
    let vectors = forms.into_iter().map(|f| f.component_vector(k)).collect();
    SubspaceBasis::spanning(graded_dim(n, k), vectors).expect("ambient dimensions agree")
}

// ---- the filtered complex -------------------------------------------------

/// The `p`-filtered complex `F_p^0 -> ... -> F_p^{2n+2p+1}`.
///
/// `F_p^k` is `F^p Omega^k` for `k <= n+p` and `F^p Omega^{2n+2p+1-k}` above.
#[derive(Clone, Debug)]
pub struct FilteredComplex<'m> {
    model: &'m SymplecticModel,
    p: usize,
    spaces: Vec<SubspaceBasis>,
    differentials: Vec<RationalMatrix>,
    cohomology: OnceLock<Vec<CohomologySpace>>,
}

/// `fdeg(k) = min(k, 2n+2p+1-k)`.
pub fn filtered_form_degree(n: usize, p: usize, k: usize) -> usize {
    k.min(2 * n + 2 * p + 1 - k)
}

/// The form-level differential `d_k` of the `p`-filtered complex.
pub fn filtered_differential(model: &SymplecticModel, p: usize, k: usize, a: &Form) -> Result<Form, Sl2Error> {
    let n = model.n();
    let middle = n + p;
    if k < middle {
        pi_p(model, &model.d(a), p)
    } else if k == middle {
        let lifted = l_inverse(model, &model.d(a), p + 1)?;
        star_r(model, &model.d(&lifted))
    } else {
        star_r(model, &model.d(&star_r(model, a)?))
    }
}

/// Builds `(F_p^k, d_k)` and verifies closure and `d_{k+1} d_k = 0`.
pub fn build_filtered_complex(model: &SymplecticModel, p: usize) -> Result<FilteredComplex<'_>, CohomologyError> {
    check_p(model, p)?;
    let n = model.n();
    let top = 2 * n + 2 * p + 1;
    let spaces = (0..=top)
        .map(|k| filtered_basis(model, p, filtered_form_degree(n, p, k)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut differentials = Vec::with_capacity(top);
    for k in 0..top {
        let from = filtered_form_degree(n, p, k);
        let to = filtered_form_degree(n, p, k + 1);
        let mut columns = Vec::with_capacity(spaces[k].dim());
        for v in spaces[k].vectors() {
            let a = Form::from_vector(n, from, v);
            let image = filtered_differential(model, p, k, &a)?;
            let coords = image
                .is_homogeneous_of(to)
                .then(|| spaces[k + 1].coordinates(&image.component_vector(to)))
                .flatten()
                .ok_or_else(|| CohomologyError::NotFiltered {
                    degree: k,
                    witness: format!("({a}) = {image}"),
                })?;
            columns.push(coords);
        }
        differentials.push(RationalMatrix::from_columns(spaces[k + 1].dim(), &columns)?);
    }
    let complex = FilteredComplex {
        model,
        p,
        spaces,
        differentials,
        cohomology: OnceLock::new(),
    };
    complex.verify_square_zero()?;
    Ok(complex)
}

impl<'m> FilteredComplex<'m> {
    pub fn model(&self) -> &'m SymplecticModel {
        self.model
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `2n + 2p + 1`.
    pub fn top_degree(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn middle_degree(&self) -> usize {
        self.model.n() + self.p
    }

    /// `2n + 2p + 1 - k`.
    pub fn bar(&self, k: usize) -> usize {
        self.top_degree() - k
    }

    pub fn form_degree(&self, k: usize) -> usize {
        filtered_form_degree(self.model.n(), self.p, k)
    }

    /// `F_p^k` in monomial coordinates of `Omega^{fdeg(k)}`.
    pub fn space(&self, k: usize) -> &SubspaceBasis {
        &self.spaces[k]
    }

    pub fn space_dims(&self) -> Vec<usize> {
        self.spaces.iter().map(SubspaceBasis::dim).collect()
    }

    /// `d_k` in the bases of `F_p^k` and `F_p^{k+1}`.
    pub fn differential(&self, k: usize) -> &RationalMatrix {
        &self.differentials[k]
    }

    /// `d_k a` at form level.
    pub fn apply(&self, k: usize, a: &Form) -> Result<Form, Sl2Error> {
        filtered_differential(self.model, self.p, k, a)
    }

    fn verify_square_zero(&self) -> Result<(), CohomologyError> {
        for k in 0..self.differentials.len().saturating_sub(1) {
            let product = self.differentials[k + 1].mul(&self.differentials[k])?;
            if let Some(col) = (0..product.cols()).find(|&c| product.column(c).iter().any(|x| !x.is_zero())) {
                let a = Form::from_vector(self.model.n(), self.form_degree(k), &self.spaces[k].vectors()[col]);
                return Err(CohomologyError::ComplexPropertyViolation {
                    degree: k,
                    next: k + 1,
                    witness: format!("({a})"),
                });
            }
        }
        Ok(())
    }

    /// `F^pH^k` for every `k`, in ambient coordinates; computed once.
    pub fn cohomology(&self) -> &[CohomologySpace] {
        self.cohomology.get_or_init(|| self.compute_cohomology())
    }

    fn compute_cohomology(&self) -> Vec<CohomologySpace> {
        let n = self.model.n();
        (0..=self.top_degree())
            .map(|k| {
                let j = self.form_degree(k);
                let ambient = graded_dim(n, j);
                let to_ambient =
                    |coords: &[Rational]| self.spaces[k].combination(coords);
                let cocycles = match self.differentials.get(k) {
                    Some(d) => d.kernel().vectors().iter().map(|c| to_ambient(c)).collect(),
                    None => self.spaces[k].vectors().to_vec(),
                };
                let coboundaries = match k {
                    0 => Vec::new(),
                    _ => self.differentials[k - 1].image().vectors().iter().map(|c| to_ambient(c)).collect(),
                };
                let quotient = QuotientSpace::new(
                    SubspaceBasis::new(ambient, cocycles).expect("kernel basis is independent"),
                    SubspaceBasis::new(ambient, coboundaries).expect("image basis is independent"),
                )
                .expect("d_k d_{k-1} = 0 was verified");
                CohomologySpace::new(Theory::Filtered { p: self.p }, n, k, j, quotient)
            })
            .collect()
    }
}

/// `F^pH^*` of a built complex.
pub fn complex_cohomology(c: &FilteredComplex<'_>) -> Vec<CohomologySpace> {
    c.cohomology().to_vec()
}

// ---- d^Lambda theories ----------------------------------------------------

/// `d^Lambda = d Lambda - Lambda d`.
pub fn d_lambda(model: &SymplecticModel, a: &Form) -> Result<Form, Sl2Error> {
    let lambda_a = dual_lefschetz(model, a)?;
    Ok(model.d(&lambda_a) - dual_lefschetz(model, &model.d(a))?)
}

/// `d d^Lambda`.
pub fn d_d_lambda(model: &SymplecticModel, a: &Form) -> Result<Form, Sl2Error> {
    Ok(model.d(&d_lambda(model, a)?))
}

/// Kernel and image data of `d`, `d^Lambda` and `dd^Lambda` per degree.
struct Operators {
    ker_d: Vec<SubspaceBasis>,
    im_d: Vec<SubspaceBasis>,
    ker_dl: Vec<SubspaceBasis>,
    im_dl: Vec<SubspaceBasis>,
    ker_ddl: Vec<SubspaceBasis>,
    im_ddl: Vec<SubspaceBasis>,
}

impl Operators {
    fn compute(model: &SymplecticModel) -> Result<Self, Sl2Error> {
        let n = model.n();
        let top = 2 * n;
        let mut ops = Operators {
            ker_d: Vec::new(),
            im_d: Vec::new(),
            ker_dl: Vec::new(),
            im_dl: Vec::new(),
            ker_ddl: Vec::new(),
            im_ddl: Vec::new(),
        };
        for k in 0..=top {
            let dim = graded_dim(n, k);
            ops.ker_d.push(model.d_matrix(k).kernel());
            ops.im_d.push(match k {
                0 => SubspaceBasis::empty(dim),
                _ => model.d_matrix(k - 1).image(),
            });
            ops.ker_dl.push(match k {
                0 => SubspaceBasis::full(dim),
                _ => operator_matrix(n, k, k - 1, |f| d_lambda(model, f))?.kernel(),
            });
            ops.im_dl.push(match k {
                k if k == top => SubspaceBasis::empty(dim),
                _ => operator_matrix(n, k + 1, k, |f| d_lambda(model, f))?.image(),
            });
            let ddl = operator_matrix(n, k, k, |f| d_d_lambda(model, f))?;
            let rki = ddl.rank_kernel_image();
            ops.ker_ddl.push(rki.kernel);
            ops.im_ddl.push(rki.image);
        }
        Ok(ops)
    }
}

fn quotient(
    theory: Theory,
    n: usize,
    k: usize,
    numerator: SubspaceBasis,
    denominator: SubspaceBasis,
) -> Result<CohomologySpace, CohomologyError> {
    let q = QuotientSpace::new(numerator, denominator).map_err(|_| CohomologyError::IllDefinedQuotient {
        space: format!("{theory}^{k}"),
    })?;
    Ok(CohomologySpace::new(theory, n, k, k, q))
}

/// All four `d^Lambda`-type cohomologies of a model.
#[derive(Clone, Debug)]
pub struct DdLambdaCohomology {
    /// `H^k_{d+d^Lambda}`, `k = 0..=2n`.
    pub plus: Vec<CohomologySpace>,
    /// `H^k_{dd^Lambda}`, `k = 0..=2n`.
    pub dd: Vec<CohomologySpace>,
    /// `PH^k_{d+d^Lambda}`, `k = 0..=n`.
    pub primitive_plus: Vec<CohomologySpace>,
    /// `PH^k_{dd^Lambda}`, `k = 0..=n`, with denominator `(im d + im d^Lambda) cap P^k`
    /// (equal to `del_+ P^{k-1} + del_- P^{k+1}`).
    pub primitive_dd: Vec<CohomologySpace>,
}

impl DdLambdaCohomology {
    pub fn compute(model: &SymplecticModel) -> Result<Self, CohomologyError> {
        let n = model.n();
        let ops = Operators::compute(model)?;
        let mut plus = Vec::new();
        let mut dd = Vec::new();
        for k in 0..=2 * n {
            plus.push(quotient(
                Theory::DPlusDLambda,
                n,
                k,
                ops.ker_d[k].intersection(&ops.ker_dl[k]),
                ops.im_ddl[k].clone(),
            )?);
            dd.push(quotient(
                Theory::DDLambda,
                n,
                k,
                ops.ker_ddl[k].clone(),
                ops.im_d[k].sum(&ops.im_dl[k]),
            )?);
        }
        let mut primitive_plus = Vec::new();
        let mut primitive_dd = Vec::new();
        for k in 0..=n {
            let prim = primitive_basis(model, k)?;
            primitive_plus.push(quotient(
                Theory::PrimitiveDPlusDLambda,
                n,
                k,
                ops.ker_d[k].intersection(prim),
                ops.im_ddl[k].intersection(prim),
            )?);
            primitive_dd.push(quotient(
                Theory::PrimitiveDDLambda,
                n,
                k,
                ops.ker_ddl[k].intersection(prim),
                ops.im_d[k].sum(&ops.im_dl[k]).intersection(prim),
            )?);
        }
        Ok(Self {
            plus,
            dd,
            primitive_plus,
            primitive_dd,
        })
    }

    /// `(H_{d+d^Lambda}^k, PH_{d+d^Lambda})` or the `dd^Lambda` pair.
    fn theory(&self, which: Theory) -> (&[CohomologySpace], &[CohomologySpace]) {
        match which {
            Theory::DDLambda => (&self.dd, &self.primitive_dd),
            _ => (&self.plus, &self.primitive_plus),
        }
    }
}

/// `H^k_{d+d^Lambda} = (ker d cap ker d^Lambda) / im dd^Lambda` for `k = 0..=2n`.
pub fn h_d_plus_dlambda(model: &SymplecticModel) -> Result<Vec<CohomologySpace>, CohomologyError> {
    Ok(DdLambdaCohomology::compute(model)?.plus)
}

/// `H^k_{dd^Lambda} = ker dd^Lambda / (im d + im d^Lambda)` for `k = 0..=2n`.
pub fn h_ddlambda(model: &SymplecticModel) -> Result<Vec<CohomologySpace>, CohomologyError> {
    Ok(DdLambdaCohomology::compute(model)?.dd)
}

/// `(PH_{d+d^Lambda}^k, PH_{dd^Lambda}^k)` for `k = 0..=n`.
///
/// The `dd^Lambda` denominator is `(im d + im d^Lambda) cap P^k`. The smaller
/// space `(im d cap P^k) + (im d^Lambda cap P^k)` misses `del_+ P^{n-1}` in
/// degree `n`, and the Lefschetz decomposition of `H_{dd^Lambda}` then fails.
pub fn primitive_cohomologies(
    model: &SymplecticModel,
) -> Result<(Vec<CohomologySpace>, Vec<CohomologySpace>), CohomologyError> {
    let all = DdLambdaCohomology::compute(model)?;
    Ok((all.primitive_plus, all.primitive_dd))
}

/// Outcome of `H^k = (+)_r L^r PH^{k-2r}` in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionVerdict {
    pub theory: Theory,
    pub degree: usize,
    pub dim: usize,
    /// `sum_r dim PH^{k-2r}`.
    pub primitive_sum: usize,
    /// The assembled map is a bijection onto `H^k`.
    pub bijective: bool,
    pub witness: Option<String>,
}

impl DecompositionVerdict {
    pub fn passed(&self) -> bool {
        self.dim == self.primitive_sum && self.bijective
    }
}

/// Checks the Lefschetz decomposition of both `d^Lambda` theories in every degree.
pub fn lefschetz_decomp_check(model: &SymplecticModel) -> Result<Vec<DecompositionVerdict>, CohomologyError> {
    let all = DdLambdaCohomology::compute(model)?;
    lefschetz_decomp_check_with(model, &all)
}

pub fn lefschetz_decomp_check_with(
    model: &SymplecticModel,
    all: &DdLambdaCohomology,
) -> Result<Vec<DecompositionVerdict>, CohomologyError> {
    let n = model.n();
    let mut out = Vec::new();
    for theory in [Theory::DPlusDLambda, Theory::DDLambda] {
        let (full, prim) = all.theory(theory);
        for (k, space) in full.iter().enumerate() {
            let mut columns = Vec::new();
            let mut primitive_sum = 0;
            let mut witness = None;
            for r in lefschetz_range(n, k) {
                let ph = &prim[k - 2 * r];
                primitive_sum += ph.dim();
                for b in ph.representatives() {
                    let lifted = lefschetz_power(model, &b, r)?;
                    match space.class_of(&lifted) {
                        Ok(c) => columns.push(c),
                        Err(_) => {
                            witness.get_or_insert_with(|| format!("L^{r} ({b}) is not a cocycle"));
                        }
                    }
                }
            }
            let bijective = witness.is_none() && columns.len() == space.dim() && {
                let m = RationalMatrix::from_columns(space.dim(), &columns)?;
                m.rank() == space.dim()
            };
            if !bijective && witness.is_none() {
                witness = Some(format!("assembled map onto {} has deficient rank", space.label()));
            }
            out.push(DecompositionVerdict {
                theory,
                degree: k,
                dim: space.dim(),
                primitive_sum,
                bijective,
                witness,
            });
        }
    }
    Ok(out)
}

// ---- de Rham Lefschetz maps -----------------------------------------------

/// Matrix of `L^j: H^k -> H^{k+2j}` on representative bases.
///
/// Fails if `L^j` does not send coboundaries to coboundaries.
pub fn lefschetz_map_on_derham(model: &SymplecticModel, j: usize, k: usize) -> Result<RationalMatrix, CohomologyError> {
    let n = model.n();
    if k > 2 * n {
        return Err(CohomologyError::DegreeOutOfRange { degree: k, max: 2 * n });
    }
    let derham = model.derham();
    lefschetz_map_with(model, &derham.spaces, j, k)
}

pub(crate) fn lefschetz_map_with(
    model: &SymplecticModel,
    spaces: &[CohomologySpace],
    j: usize,
    k: usize,
) -> Result<RationalMatrix, CohomologyError> {
    let source = &spaces[k];
    let Some(target) = spaces.get(k + 2 * j) else {
        return Ok(RationalMatrix::zeros(0, source.dim()));
    };
    for b in source.coboundary_forms() {
        let image = lefschetz_power(model, &b, j)?;
        if !target.is_trivial(&image) {
            return Err(CohomologyError::Sl2(Sl2Error::Inconsistent(format!(
                "L^{j} of the coboundary {b} is not exact"
            ))));
        }
    }
    let columns = source
        .representatives()
        .iter()
        .map(|a| target.class_of(&lefschetz_power(model, a, j)?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RationalMatrix::from_columns(target.dim(), &columns)?)
}

/// Strong Lefschetz: `L^{n-k}: H^k -> H^{2n-k}` bijective for all `k <= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongLefschetz {
    pub holds: bool,
    /// First degree where bijectivity fails, with representatives of kernel classes.
    pub failure: Option<(usize, Vec<Form>)>,
}

pub fn strong_lefschetz(model: &SymplecticModel) -> Result<StrongLefschetz, CohomologyError> {
    let n = model.n();
    let derham = model.derham();
    for k in 0..=n {
        let m = lefschetz_map_with(model, &derham.spaces, n - k, k)?;
        if !(m.is_square() && m.rank() == m.cols()) {
            let kernel = m
                .kernel()
                .vectors()
                .iter()
                .map(|c| derham.spaces[k].form_of_class(c))
                .collect();
            return Ok(StrongLefschetz {
                holds: false,
                failure: Some((k, kernel)),
            });
        }
    }
    Ok(StrongLefschetz {
        holds: true,
        failure: None,
    })
}

// ---- resolution sequences -------------------------------------------------

/// Which of the two short exact sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sequence {
    /// `0 -> Coker -> F^pH^k -> Ker -> 0` via `Pi^p` and `L^{-p-1} d`.
    Plus,
    /// `0 -> Coker -> F^pH^{k bar} -> Ker -> 0` via `*_r d L^{-p-1}` and `*_r`.
    Minus,
}

/// Exactness data for one sequence in one degree `k <= n + p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceVerdict {
    pub sequence: Sequence,
    pub degree: usize,
    pub coker_dim: usize,
    pub middle_dim: usize,
    pub ker_dim: usize,
    pub well_defined: bool,
    pub first_injective: bool,
    pub exact_middle: bool,
    pub last_surjective: bool,
    pub dimension_identity: bool,
    pub witness: Option<String>,
}

impl SequenceVerdict {
    pub fn passed(&self) -> bool {
        self.well_defined
            && self.first_injective
            && self.exact_middle
            && self.last_surjective
            && self.dimension_identity
    }
}

/// De Rham data needed by the sequences.
struct DeRhamData<'a> {
    model: &'a SymplecticModel,
    spaces: Vec<CohomologySpace>,
}

impl DeRhamData<'_> {
    fn ambient(&self, k: usize) -> usize {
        graded_dim(self.model.n(), k)
    }

    /// `Coker(L^{j}: H^{k-2j} -> H^k)` as `Z^k / (B^k + L^j Z^{k-2j})`.
    fn cokernel(&self, j: usize, k: usize) -> Result<QuotientSpace, CohomologyError> {
        let n = self.model.n();
        if k > 2 * n {
            return Ok(QuotientSpace::zero(0));
        }
        let space = &self.spaces[k];
        let mut denominator = space.coboundaries().clone();
        if k >= 2 * j {
            let lifted = self.spaces[k - 2 * j]
                .cocycle_forms()
                .iter()
                .map(|z| lefschetz_power(self.model, z, j))
                .collect::<Result<Vec<_>, _>>()?;
            denominator = denominator.sum(&span_forms(n, k, lifted));
        }
        Ok(QuotientSpace::new(space.cocycles().clone(), denominator)?)
    }

    /// `Ker(L^j: H^k -> H^{k+2j})` as `{z in Z^k : L^j z exact} / B^k`.
    fn kernel(&self, j: usize, k: usize) -> Result<QuotientSpace, CohomologyError> {
        let n = self.model.n();
        if k > 2 * n {
            return Ok(QuotientSpace::zero(0));
        }
        let space = &self.spaces[k];
        if k + 2 * j > 2 * n {
            return Ok(QuotientSpace::new(space.cocycles().clone(), space.coboundaries().clone())?);
        }
        let target = &self.spaces[k + 2 * j];
        let cocycles = space.cocycle_forms();
        let columns = cocycles
            .iter()
            .map(|z| target.class_of(&lefschetz_power(self.model, z, j)?))
            .collect::<Result<Vec<_>, _>>()?;
        let m = RationalMatrix::from_columns(target.dim(), &columns)?;
        let vectors = m
            .kernel()
            .vectors()
            .iter()
            .map(|c| space.cocycles().combination(c))
            .collect();
        let numerator = SubspaceBasis::new(self.ambient(k), vectors).expect("independent combinations");
        Ok(QuotientSpace::new(numerator, space.coboundaries().clone())?)
    }
}

/// Matrix of a map between quotients given by a form-level operator; checks
/// that every denominator vector of the source maps to zero in the target.
struct QuotientMap {
    matrix: RationalMatrix,
    well_defined: bool,
    witness: Option<String>,
}

fn quotient_map<F>(
    n: usize,
    source: &QuotientSpace,
    source_degree: usize,
    target: &QuotientSpace,
    target_degree: usize,
    mut f: F,
) -> Result<QuotientMap, CohomologyError>
where
    F: FnMut(&Form) -> Result<Form, Sl2Error>,
{
    let mut image_of = |v: &[Rational]| -> Result<Result<Vec<Rational>, String>, CohomologyError> {
        let a = Form::from_vector(n, source_degree, v);
        let image = f(&a)?;
        if !image.is_homogeneous_of(target_degree) {
            return Ok(Err(format!("image of {a} has the wrong degree: {image}")));
        }
        if target.ambient_dim() == 0 {
            return Ok(Ok(Vec::new()));
        }
        Ok(target
            .class_coordinates(&image.component_vector(target_degree))
            .map_err(|_| format!("image of {a} is not in the target numerator: {image}")))
    };
    let mut witness = None;
    let mut columns = Vec::new();
    for v in source.representatives().vectors() {
        match image_of(v)? {
            Ok(c) => columns.push(c),
            Err(w) => {
                witness.get_or_insert(w);
                columns.push(vec![Rational::zero(); target.dim()]);
            }
        }
    }
    for v in source.denominator().vectors() {
        match image_of(v)? {
            Ok(c) if c.iter().all(Zero::is_zero) => {}
            Ok(_) => {
                witness.get_or_insert_with(|| {
                    format!("{} is trivial but its image is not", Form::from_vector(n, source_degree, v))
                });
            }
            Err(w) => {
                witness.get_or_insert(w);
            }
        }
    }
    Ok(QuotientMap {
        matrix: RationalMatrix::from_columns(target.dim(), &columns)?,
        well_defined: witness.is_none(),
        witness,
    })
}

fn sequence_verdict(
    sequence: Sequence,
    degree: usize,
    coker: &QuotientSpace,
    middle: &CohomologySpace,
    ker: &QuotientSpace,
    first: QuotientMap,
    second: QuotientMap,
) -> Result<SequenceVerdict, CohomologyError> {
    let rank_first = first.matrix.rank();
    let rank_second = second.matrix.rank();
    let composite_zero = second.matrix.mul(&first.matrix)?.is_zero();
    let exact_middle = composite_zero && rank_first + rank_second == middle.dim();
    Ok(SequenceVerdict {
        sequence,
        degree,
        coker_dim: coker.dim(),
        middle_dim: middle.dim(),
        ker_dim: ker.dim(),
        well_defined: first.well_defined && second.well_defined,
        first_injective: rank_first == coker.dim(),
        exact_middle,
        last_surjective: rank_second == ker.dim(),
        dimension_identity: middle.dim() == coker.dim() + ker.dim(),
        witness: first.witness.or(second.witness),
    })
}

/// Verifies both sequences for every `k <= n + p`.
pub fn resolution_check(model: &SymplecticModel, p: usize) -> Result<Vec<SequenceVerdict>, CohomologyError> {
    let complex = build_filtered_complex(model, p)?;
    resolution_check_with(&complex)
}

pub fn resolution_check_with(complex: &FilteredComplex<'_>) -> Result<Vec<SequenceVerdict>, CohomologyError> {
    let filtered = complex.cohomology();
    let model = complex.model();
    let n = model.n();
    let p = complex.p();
    let derham = DeRhamData {
        model,
        spaces: model.derham().spaces,
    };
    let mut out = Vec::new();
    for k in 0..=n + p {
        // 0 -> Coker(L^{p+1}: H^{k-2p-2} -> H^k) -> F^pH^k -> Ker(L^{p+1}: H^{k-2p-1} -> H^{k+1}) -> 0
        let middle = &filtered[k];
        let coker = derham.cokernel(p + 1, k)?;
        let ker = match k.checked_sub(2 * p + 1) {
            Some(j) => derham.kernel(p + 1, j)?,
            None => QuotientSpace::zero(0),
        };
        let ker_degree = k.saturating_sub(2 * p + 1);
        let first = quotient_map(n, &coker, k, middle.quotient(), k, |a| pi_p(model, a, p))?;
        let second = quotient_map(n, middle.quotient(), k, &ker, ker_degree, |a| {
            l_inverse(model, &model.d(a), p + 1)
        })?;
        out.push(sequence_verdict(Sequence::Plus, k, &coker, middle, &ker, first, second)?);

        // 0 -> Coker(L^{p+1}: H^{2n-k-1} -> H^{kb}) -> F^pH^{kb} -> Ker(L^{p+1}: H^{2n-k} -> H^{2n-k+2p+2}) -> 0
        let kb = complex.bar(k);
        let middle = &filtered[kb];
        let coker = derham.cokernel(p + 1, kb)?;
        let ker = derham.kernel(p + 1, 2 * n - k)?;
        let coker_degree = kb;
        let first = quotient_map(n, &coker, coker_degree, middle.quotient(), k, |a| {
            star_r(model, &model.d(&l_inverse(model, a, p + 1)?))
        })?;
        let second = quotient_map(n, middle.quotient(), k, &ker, 2 * n - k, |a| star_r(model, a))?;
        out.push(sequence_verdict(Sequence::Minus, k, &coker, middle, &ker, first, second)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin;

    fn dims(spaces: &[CohomologySpace]) -> Vec<usize> {
        spaces.iter().map(CohomologySpace::dim).collect()
    }

    #[test]
    fn t4_filtered_complex() {
        let t4 = builtin("t4").unwrap();
        let c = build_filtered_complex(&t4, 0).unwrap();
        assert_eq!(c.space_dims(), [1, 4, 5, 5, 4, 1]);
        assert!((0..5).all(|k| c.differential(k).is_zero()));
        assert_eq!(dims(c.cohomology()), [1, 4, 5, 5, 4, 1]);
        let c1 = build_filtered_complex(&t4, 1).unwrap();
        assert_eq!(c1.space_dims(), [1, 4, 6, 4, 4, 6, 4, 1]);
    }

    #[test]
    fn p_out_of_range() {
        let t4 = builtin("t4").unwrap();
        assert_eq!(
            build_filtered_complex(&t4, 3).unwrap_err(),
            CohomologyError::FilterOutOfRange { p: 3, n: 2 }
        );
    }

    #[test]
    fn kodaira_thurston_has_nonzero_differential() {
        let kt = builtin("kodaira_thurston").unwrap();
        let c = build_filtered_complex(&kt, 0).unwrap();
        assert!((0..c.top_degree()).any(|k| !c.differential(k).is_zero()));
        let d = dims(c.cohomology());
        let rev: Vec<_> = d.iter().rev().copied().collect();
        assert_eq!(d, rev);
    }

    #[test]
    fn torus_ddlambda_is_everything() {
        let t4 = builtin("t4").unwrap();
        let all = DdLambdaCohomology::compute(&t4).unwrap();
        assert_eq!(dims(&all.plus), [1, 4, 6, 4, 1]);
        assert_eq!(dims(&all.dd), [1, 4, 6, 4, 1]);
        assert_eq!(dims(&all.primitive_plus), [1, 4, 5]);
        assert!(lefschetz_decomp_check_with(&t4, &all).unwrap().iter().all(DecompositionVerdict::passed));
    }

    #[test]
    fn d_lambda_squares_to_zero() {
        for name in ["kodaira_thurston", "nil6_four_step"] {
            let m = builtin(name).unwrap();
            for k in 0..=2 * m.n() {
                for mono in crate::exterior::basis_monomials(m.n(), k) {
                    let a = Form::from_terms(m.n(), [(mono, Rational::from_integer(1.into()))]).unwrap();
                    let once = d_lambda(&m, &a).unwrap();
                    assert!(d_lambda(&m, &once).unwrap().is_zero(), "{name}: {a}");
                }
            }
        }
    }

    #[test]
    fn strong_lefschetz_examples() {
        assert!(strong_lefschetz(&builtin("t4").unwrap()).unwrap().holds);
        let kt = builtin("kodaira_thurston").unwrap();
        let s = strong_lefschetz(&kt).unwrap();
        assert!(!s.holds);
        let (k, _) = s.failure.unwrap();
        assert_eq!(k, 1);
        let derham = kt.derham();
        let e1 = Form::monomial(2, &[1]).unwrap();
        let image = lefschetz_power(&kt, &e1, 1).unwrap();
        assert!(derham.space(3).is_trivial(&image));
        assert!(!derham.space(1).is_trivial(&e1));
    }

    #[test]
    fn l_zero_is_identity() {
        let kt = builtin("kodaira_thurston").unwrap();
        for k in 0..=4 {
            let m = lefschetz_map_on_derham(&kt, 0, k).unwrap();
            assert_eq!(m, RationalMatrix::identity(m.rows()));
        }
    }

    #[test]
    fn resolution_on_t4() {
        let t4 = builtin("t4").unwrap();
        let v = resolution_check(&t4, 0).unwrap();
        let plus2 = v.iter().find(|s| s.sequence == Sequence::Plus && s.degree == 2).unwrap();
        assert_eq!((plus2.middle_dim, plus2.coker_dim, plus2.ker_dim), (5, 5, 0));
        assert!(v.iter().all(SequenceVerdict::passed), "{v:#?}");
    }

    #[test]
    fn resolution_on_kodaira_thurston() {
        let kt = builtin("kodaira_thurston").unwrap();
        for p in 0..=2 {
            let v = resolution_check(&kt, p).unwrap();
            assert!(v.iter().all(SequenceVerdict::passed), "p = {p}: {v:#?}");
        }
    }

    #[test]
    fn primitive_dd_denominator_is_the_del_span() {
        use crate::sl2ops::del_plus_minus;
        for name in ["kodaira_thurston", "nil6_two_step", "nil6_four_step"] {
            let m = builtin(name).unwrap();
            let n = m.n();
            let all = DdLambdaCohomology::compute(&m).unwrap();
            for k in 0..=n {
                let mut dels = Vec::new();
                if k >= 1 {
                    for b in primitive_basis(&m, k - 1).unwrap().vectors() {
                        dels.push(del_plus_minus(&m, &Form::from_vector(n, k - 1, b)).unwrap().0);
                    }
                }
                if k < n {
                    for b in primitive_basis(&m, k + 1).unwrap().vectors() {
                        dels.push(del_plus_minus(&m, &Form::from_vector(n, k + 1, b)).unwrap().1);
                    }
                }
                let span = span_forms(n, k, dels);
                assert!(span.same_span(all.primitive_dd[k].coboundaries()), "{name}, k = {k}");
            }
        }
    }

    #[test]
    fn separate_intersections_break_the_decomposition() {
        let m = builtin("nil6_two_step").unwrap();
        let ops = Operators::compute(&m).unwrap();
        let prim = primitive_basis(&m, 3).unwrap();
        let separate = ops.im_d[3].intersection(prim).sum(&ops.im_dl[3].intersection(prim));
        let joint = ops.im_d[3].sum(&ops.im_dl[3]).intersection(prim);
        assert_eq!((separate.dim(), joint.dim()), (2, 4));
        let all = DdLambdaCohomology::compute(&m).unwrap();
        assert_eq!(all.dd[3].dim(), all.primitive_dd[3].dim() + all.primitive_dd[1].dim());
        assert_ne!(all.dd[3].dim(), ops.ker_ddl[3].intersection(prim).dim() - separate.dim() + all.primitive_dd[1].dim());
    }
}