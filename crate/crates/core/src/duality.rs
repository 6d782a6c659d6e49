//! Pairings between cohomologies and the duality checks built on them.
//!
//! The filtered pairing is evaluated at form level as `integral A ^ *_r(A')`
//! for `A` in complex degree `k <= n+p` and `A'` in complex degree
//! `2n+2p+1-k`; both have form degree `k`. The `d^Lambda` pairing is the plain
//! wedge-and-integrate of degree-complementary forms.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{
    build_filtered_complex, CohomologyError, CohomologySpace, DdLambdaCohomology, FilteredComplex, Theory,
};
use crate::exactlinalg::{LinalgError, Rational, RationalMatrix};
use crate::exterior::{integrate, ExteriorError, Form};
use crate::model::SymplecticModel;
use crate::sampling::Sampler;
use crate::sl2ops::{lefschetz_power, lefschetz_range, primitive_basis, star_r, Sl2Error};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualityError {
    #[error("theta is defined on constants; found a component of degree {0}")]
    WrongDegree(usize),
    #[error("degree {degree} out of range (at most {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("no Lefschetz block r = {r} in degree {k}")]
    NoSuchBlock { k: usize, r: usize },
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which space sits on one side of a pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceDescriptor {
    pub theory: Theory,
    pub degree: usize,
    pub form_degree: usize,
    pub dim: usize,
}

impl From<&CohomologySpace> for SpaceDescriptor {
    fn from(s: &CohomologySpace) -> Self {
        Self {
            theory: s.theory(),
            degree: s.degree(),
            form_degree: s.form_degree(),
            dim: s.dim(),
        }
    }
}

/// A pairing matrix between two representative bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingReport {
    pub left: SpaceDescriptor,
    pub right: SpaceDescriptor,
    /// `matrix[i][j] = <left_i, right_j>`.
    pub matrix: RationalMatrix,
    pub rank: usize,
    /// Square and of full rank.
    pub nondegenerate: bool,
    /// Coboundaries on either side pair to zero with all cocycles on the other.
    pub annihilates_coboundaries: bool,
}

impl PairingReport {
    fn new(left: SpaceDescriptor, right: SpaceDescriptor, matrix: RationalMatrix, annihilates: bool) -> Self {
        let rank = matrix.rank();
        let nondegenerate = left.dim == right.dim && rank == left.dim;
        Self {
            left,
            right,
            matrix,
            rank,
            nondegenerate,
            annihilates_coboundaries: annihilates,
        }
    }

    pub fn passed(&self) -> bool {
        self.nondegenerate && self.annihilates_coboundaries
    }
}

fn gram<F>(left: &[Form], right: &[Form], mut f: F) -> Result<RationalMatrix, DualityError>
where
    F: FnMut(&Form, &Form) -> Result<Rational, DualityError>,
{
    let mut m = RationalMatrix::zeros(left.len(), right.len());
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            m.set(i, j, f(a, b)?);
        }
    }
    Ok(m)
}

fn all_zero<F>(left: &[Form], right: &[Form], f: F) -> Result<bool, DualityError>
where
    F: FnMut(&Form, &Form) -> Result<Rational, DualityError>,
{
    Ok(gram(left, right, f)?.is_zero())
}

fn wedge_integral(a: &Form, b: &Form) -> Result<Rational, DualityError> {
    Ok(integrate(&a.wedge(b)?)?)
}

// ---- theta and the filtered pairing -----------------------------------------

/// `theta_p(a) = integral *_r a` on the top complex degree, where forms are constants.
pub fn theta(model: &SymplecticModel, p: usize, a: &Form) -> Result<Rational, DualityError> {
    if p > model.n() {
        return Err(CohomologyError::FilterOutOfRange { p, n: model.n() }.into());
    }
    if let Some(&k) = a.degrees().iter().find(|&&k| k != 0) {
        return Err(DualityError::WrongDegree(k));
    }
    Ok(integrate(&star_r(model, a)?)?)
}

/// `theta_p` on complex degree `k`: zero below the top degree.
pub fn theta_at(fc: &FilteredComplex<'_>, k: usize, a: &Form) -> Result<Rational, DualityError> {
    if k < fc.top_degree() {
        Ok(Rational::zero())
    } else {
        theta(fc.model(), fc.p(), a)
    }
}

/// `<u, v>` for `u` in complex degree `k` and `v` in complex degree `2n+2p+1-k`.
pub fn filtered_pair(fc: &FilteredComplex<'_>, k: usize, u: &Form, v: &Form) -> Result<Rational, DualityError> {
    let model = fc.model();
    if k <= fc.middle_degree() {
        wedge_integral(u, &star_r(model, v)?)
    } else {
        wedge_integral(v, &star_r(model, u)?)
    }
}

fn check_low_degree(fc: &FilteredComplex<'_>, k: usize) -> Result<(), DualityError> {
    if k > fc.middle_degree() {
        return Err(DualityError::DegreeOutOfRange {
            degree: k,
            max: fc.middle_degree(),
        });
    }
    Ok(())
}

/// `g_p` on `F^pH^k x F^pH^{2n+2p+1-k}`, `k <= n + p`.
pub fn g_pairing(fc: &FilteredComplex<'_>, k: usize) -> Result<PairingReport, DualityError> {
    check_low_degree(fc, k)?;
    let h = fc.cohomology();
    let (low, high) = (&h[k], &h[fc.bar(k)]);
    let f = |a: &Form, b: &Form| filtered_pair(fc, k, a, b);
    let matrix = gram(&low.representatives(), &high.representatives(), f)?;
    let annihilates = all_zero(&low.coboundary_forms(), &high.cocycle_forms(), f)?
        && all_zero(&low.cocycle_forms(), &high.coboundary_forms(), f)?;
    Ok(PairingReport::new(low.into(), high.into(), matrix, annihilates))
}

/// The swapped pairing `<A', A> = integral A' ^ *_r A` on `F^pH^{2n+2p+1-k} x F^pH^k`.
pub fn g_pairing_swapped(fc: &FilteredComplex<'_>, k: usize) -> Result<PairingReport, DualityError> {
    check_low_degree(fc, k)?;
    let model = fc.model();
    let h = fc.cohomology();
    let (low, high) = (&h[k], &h[fc.bar(k)]);
    let f = |b: &Form, a: &Form| wedge_integral(b, &star_r(model, a)?);
    let matrix = gram(&high.representatives(), &low.representatives(), f)?;
    let annihilates = all_zero(&high.coboundary_forms(), &low.cocycle_forms(), f)?
        && all_zero(&high.cocycle_forms(), &low.coboundary_forms(), f)?;
    Ok(PairingReport::new(high.into(), low.into(), matrix, annihilates))
}

/// Duality of the filtered complex at one `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiVerdict {
    pub p: usize,
    pub dims: Vec<usize>,
    /// `dim F^pH^k = dim F^pH^{2n+2p+1-k}` for all `k`.
    pub dims_symmetric: bool,
    pub pairings: Vec<PairingReport>,
    /// Per differential `d_c`, the observed sign `e` with
    /// `<d_c x, y> = e <x, d_{c'} y>`; `None` when both sides always vanished.
    pub adjoint_signs: Vec<Option<i8>>,
    pub adjoint: bool,
    pub witness: Option<String>,
}

impl PhiVerdict {
    pub fn passed(&self) -> bool {
        self.dims_symmetric && self.adjoint && self.pairings.iter().all(PairingReport::passed)
    }
}

/// Dimension symmetry, nondegeneracy of every `g_p`, and chain-level
/// adjointness of the differentials on `trials` random cochain pairs per degree.
pub fn phi_duality_check(fc: &FilteredComplex<'_>, seed: u64, trials: usize) -> Result<PhiVerdict, DualityError> {
    let n = fc.model().n();
    let top = fc.top_degree();
    let dims: Vec<usize> = fc.cohomology().iter().map(CohomologySpace::dim).collect();
    let dims_symmetric = (0..=top).all(|k| dims[k] == dims[top - k]);
    let pairings = (0..=fc.middle_degree())
        .map(|k| g_pairing(fc, k))
        .collect::<Result<Vec<_>, _>>()?;

    let mut sampler = Sampler::new(seed);
    let mut adjoint_signs = Vec::with_capacity(top);
    let mut witness = None;
    for c in 0..top {
        let c_dual = top - c - 1;
        let mut sign: Option<i8> = None;
        for _ in 0..trials {
            let x = sampler.form_in(n, fc.form_degree(c), fc.space(c));
            let y = sampler.form_in(n, fc.form_degree(c_dual), fc.space(c_dual));
            let lhs = filtered_pair(fc, c + 1, &fc.apply(c, &x)?, &y)?;
            let rhs = filtered_pair(fc, c, &x, &fc.apply(c_dual, &y)?)?;
            let observed = if lhs == rhs && lhs.is_zero() {
                continue;
            } else if lhs == rhs {
                1
            } else if lhs == -rhs.clone() {
                -1
            } else {
                0
            };
            if observed == 0 || sign.is_some_and(|s| s != observed) {
                witness.get_or_insert_with(|| {
                    format!("d_{c} not adjoint to d_{c_dual}: x = {x}, y = {y}, <d x, y> = {lhs}, <x, d y> = {rhs}")
                });
                break;
            }
            sign = Some(observed);
        }
        adjoint_signs.push(sign);
    }
    Ok(PhiVerdict {
        p: fc.p(),
        dims,
        dims_symmetric,
        pairings,
        adjoint_signs,
        adjoint: witness.is_none(),
        witness,
    })
}

/// `theta_p(d_{2n+2p} x) = 0` on random `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StokesVerdict {
    pub p: usize,
    pub trials: usize,
    pub witness: Option<String>,
}

impl StokesVerdict {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

pub fn stokes_check(fc: &FilteredComplex<'_>, seed: u64, trials: usize) -> Result<StokesVerdict, DualityError> {
    let n = fc.model().n();
    let top = fc.top_degree();
    let mut sampler = Sampler::new(seed);
    let mut witness = None;
    for _ in 0..trials {
        let x = sampler.form_in(n, fc.form_degree(top - 1), fc.space(top - 1));
        let value = theta_at(fc, top, &fc.apply(top - 1, &x)?)?;
        if !value.is_zero() {
            witness = Some(format!("theta(d_{} ({x})) = {value}", top - 1));
            break;
        }
    }
    Ok(StokesVerdict {
        p: fc.p(),
        trials,
        witness,
    })
}

/// Per degree pair `(k, 2n+2p+1-k)`: do `g_p` and its swapped version agree up to one sign?
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusEntry {
    pub degree: usize,
    pub bar: usize,
    pub dim: usize,
    /// `Some(e)` when `swapped^T = e g`; `None` when no single sign works.
    pub sign: Option<i8>,
    pub vacuous: bool,
}

pub fn frobenius_report(fc: &FilteredComplex<'_>) -> Result<Vec<FrobeniusEntry>, DualityError> {
    (0..=fc.middle_degree())
        .map(|k| {
            let g = g_pairing(fc, k)?.matrix;
            let swapped = g_pairing_swapped(fc, k)?.matrix.transpose();
            let vacuous = g.rows() == 0 || g.cols() == 0;
            let sign = if swapped == g {
                Some(1)
            } else if swapped == g.scaled(&-Rational::one()) {
                Some(-1)
            } else {
                None
            };
            Ok(FrobeniusEntry {
                degree: k,
                bar: fc.bar(k),
                dim: g.rows(),
                sign: if vacuous { Some(1) } else { sign },
                vacuous,
            })
        })
        .collect()
}

// ---- the support law --------------------------------------------------------

/// Product-support law: `L^r B_s ^ L^{r'} B_{s'} = 0` unless `s' = s` and `r' = n-r-s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportVerdict {
    pub trials: usize,
    /// Products that had to vanish.
    pub forced_zero: usize,
    pub counterexamples: usize,
    /// Every admissible `(r, s)` pairing matrix on a primitive basis is nondegenerate (exhaustive mode only).
    pub allowed_nondegenerate: bool,
    pub witness: Option<String>,
}

impl SupportVerdict {
    pub fn passed(&self) -> bool {
        self.counterexamples == 0 && self.allowed_nondegenerate
    }
}

/// `(r, s, r', s')` with `s, s' <= n`, `L^r` and `L^{r'}` nonzero on `P^s`, `P^{s'}`, and total degree `2n`.
fn support_quadruples(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for s in 0..=n {
        for r in 0..=n - s {
            for s2 in 0..=n {
                let used = 2 * r + s + s2;
                if used > 2 * n || (2 * n - used) % 2 == 1 {
                    continue;
                }
                let r2 = (2 * n - used) / 2;
                if r2 <= n - s2 {
                    out.push((r, s, r2, s2));
                }
            }
        }
    }
    out
}

fn support_case(
    model: &SymplecticModel,
    (r, s, r2, s2): (usize, usize, usize, usize),
    b: &Form,
    b2: &Form,
    verdict: &mut SupportVerdict,
) -> Result<(), DualityError> {
    let n = model.n();
    if s2 == s && r2 == n - r - s {
        return Ok(());
    }
    verdict.forced_zero += 1;
    let product = lefschetz_power(model, b, r)?.wedge(&lefschetz_power(model, b2, r2)?)?;
    let integral = integrate(&product)?;
    if !product.is_zero() || !integral.is_zero() {
        verdict.counterexamples += 1;
        verdict.witness.get_or_insert_with(|| {
            format!("L^{r} ({b}) ^ L^{r2} ({b2}) = {product} with s = {s}, s' = {s2}")
        });
    }
    Ok(())
}

/// `trials` random primitive pairs over uniformly drawn admissible exponents.
pub fn product_support_test(model: &SymplecticModel, seed: u64, trials: usize) -> Result<SupportVerdict, DualityError> {
    let n = model.n();
    let quads = support_quadruples(n);
    let mut sampler = Sampler::new(seed);
    let mut verdict = SupportVerdict {
        trials,
        forced_zero: 0,
        counterexamples: 0,
        allowed_nondegenerate: true,
        witness: None,
    };
    for _ in 0..trials {
        let q = quads[sampler.below(quads.len())];
        let b = sampler.form_in(n, q.1, primitive_basis(model, q.1)?);
        let b2 = sampler.form_in(n, q.3, primitive_basis(model, q.3)?);
        support_case(model, q, &b, &b2, &mut verdict)?;
    }
    Ok(verdict)
}

/// Every pair of primitive basis forms and every admissible exponent choice;
/// also checks that each allowed pairing `integral L^r B ^ L^{n-r-s} B'` is nondegenerate on `P^s`.
pub fn product_support_exhaustive(model: &SymplecticModel) -> Result<SupportVerdict, DualityError> {
    let n = model.n();
    let mut verdict = SupportVerdict {
        trials: 0,
        forced_zero: 0,
        counterexamples: 0,
        allowed_nondegenerate: true,
        witness: None,
    };
    let basis = |s: usize| -> Result<Vec<Form>, DualityError> {
        Ok(primitive_basis(model, s)?
            .vectors()
            .iter()
            .map(|v| Form::from_vector(n, s, v))
            .collect())
    };
    for q in support_quadruples(n) {
        let (r, s, r2, s2) = q;
        let (left, right) = (basis(s)?, basis(s2)?);
        for b in &left {
            for b2 in &right {
                verdict.trials += 1;
                support_case(model, q, b, b2, &mut verdict)?;
            }
        }
        if s2 == s && r2 == n - r - s {
            let m = gram(&left, &right, |a, b| {
                wedge_integral(&lefschetz_power(model, a, r)?, &lefschetz_power(model, b, r2)?)
            })?;
            if m.rank() != left.len() {
                verdict.allowed_nondegenerate = false;
                verdict
                    .witness
                    .get_or_insert_with(|| format!("pairing L^{r} P^{s} x L^{r2} P^{s} is degenerate"));
            }
        }
    }
    Ok(verdict)
}

// ---- the d^Lambda pairing -----------------------------------------------------

fn plain_pairing(
    left: &CohomologySpace,
    right: &CohomologySpace,
) -> Result<PairingReport, DualityError> {
    let matrix = gram(&left.representatives(), &right.representatives(), wedge_integral)?;
    let annihilates = all_zero(&left.coboundary_forms(), &right.cocycle_forms(), wedge_integral)?
        && all_zero(&left.cocycle_forms(), &right.coboundary_forms(), wedge_integral)?;
    Ok(PairingReport::new(left.into(), right.into(), matrix, annihilates))
}

fn check_top(model: &SymplecticModel, k: usize) -> Result<(), DualityError> {
    if k > 2 * model.n() {
        return Err(DualityError::DegreeOutOfRange {
            degree: k,
            max: 2 * model.n(),
        });
    }
    Ok(())
}

/// `D` on `H^k_{d+d^Lambda} x H^{2n-k}_{dd^Lambda}`.
pub fn dd_pairing(model: &SymplecticModel, k: usize) -> Result<PairingReport, DualityError> {
    dd_pairing_with(model, &DdLambdaCohomology::compute(model)?, k)
}

pub fn dd_pairing_with(model: &SymplecticModel, all: &DdLambdaCohomology, k: usize) -> Result<PairingReport, DualityError> {
    check_top(model, k)?;
    plain_pairing(&all.plus[k], &all.dd[2 * model.n() - k])
}

/// The swapped pairing on `H^k_{dd^Lambda} x H^{2n-k}_{d+d^Lambda}`.
pub fn dd_pairing_swapped(model: &SymplecticModel, k: usize) -> Result<PairingReport, DualityError> {
    dd_pairing_swapped_with(model, &DdLambdaCohomology::compute(model)?, k)
}

pub fn dd_pairing_swapped_with(
    model: &SymplecticModel,
    all: &DdLambdaCohomology,
    k: usize,
) -> Result<PairingReport, DualityError> {
    check_top(model, k)?;
    plain_pairing(&all.dd[k], &all.plus[2 * model.n() - k])
}

/// One diagonal block `D_r: L^r PH^s x L^{n-k+r} PH^s`, `s = k - 2r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DBlock {
    pub r: usize,
    pub r_prime: usize,
    pub s: usize,
    pub report: PairingReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub degree: usize,
    pub blocks: Vec<DBlock>,
    /// Entries between blocks with different `s` are exactly zero.
    pub cross_blocks_zero: bool,
    pub witness: Option<String>,
}

impl BlockDecomposition {
    pub fn passed(&self) -> bool {
        self.cross_blocks_zero && self.blocks.iter().all(|b| b.report.nondegenerate)
    }
}

/// `L^r (reps of PH^{k-2r})` for every `r`, tagged with `(r, s)`.
fn lefschetz_lifted(
    model: &SymplecticModel,
    prim: &[CohomologySpace],
    k: usize,
) -> Result<Vec<(usize, usize, Vec<Form>)>, DualityError> {
    lefschetz_range(model.n(), k)
        .map(|r| {
            let s = k - 2 * r;
            let forms = prim[s]
                .representatives()
                .iter()
                .map(|b| lefschetz_power(model, b, r))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((r, s, forms))
        })
        .collect()
}

/// `D` in Lefschetz-decomposed bases: block-diagonal with full-rank blocks.
pub fn d_block_decomposition(model: &SymplecticModel, k: usize) -> Result<BlockDecomposition, DualityError> {
    d_block_decomposition_with(model, &DdLambdaCohomology::compute(model)?, k)
}

pub fn d_block_decomposition_with(
    model: &SymplecticModel,
    all: &DdLambdaCohomology,
    k: usize,
) -> Result<BlockDecomposition, DualityError> {
    check_top(model, k)?;
    let n = model.n();
    let left = lefschetz_lifted(model, &all.primitive_plus, k)?;
    let right = lefschetz_lifted(model, &all.primitive_dd, 2 * n - k)?;
    let mut blocks = Vec::new();
    let mut witness = None;
    for (r, s, a) in &left {
        for (r2, s2, b) in &right {
            let m = gram(a, b, wedge_integral)?;
            if s == s2 {
                let descriptor = |theory, dim| SpaceDescriptor {
                    theory,
                    degree: *s,
                    form_degree: *s,
                    dim,
                };
                blocks.push(DBlock {
                    r: *r,
                    r_prime: *r2,
                    s: *s,
                    report: PairingReport::new(
                        descriptor(Theory::PrimitiveDPlusDLambda, a.len()),
                        descriptor(Theory::PrimitiveDDLambda, b.len()),
                        m,
                        true,
                    ),
                });
            } else if !m.is_zero() {
                witness.get_or_insert_with(|| format!("cross block (r = {r}, r' = {r2}) is nonzero: {m}"));
            }
        }
    }
    Ok(BlockDecomposition {
        degree: k,
        blocks,
        cross_blocks_zero: witness.is_none(),
        witness,
    })
}

/// The closing square for one `(k, r)`, with `p' = n - k + 2r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramVerdict {
    pub k: usize,
    pub r: usize,
    pub p_prime: usize,
    /// `integral L^r B ^ L^{n-k+r} B' = integral *_r(L^{p'} B) ^ L^{p'} B'` entrywise.
    pub entries_agree: bool,
    /// `B -> L^{p'} B` is a bijection `PH^s_{d+d^Lambda} -> F^{p'}H^{n+p'+1}`.
    pub left_vertical_bijective: bool,
    /// `B' -> L^{p'} B'` is a bijection `PH^s_{dd^Lambda} -> F^{p'}H^{n+p'}`.
    pub right_vertical_bijective: bool,
    pub witness: Option<String>,
}

impl DiagramVerdict {
    pub fn passed(&self) -> bool {
        self.entries_agree && self.left_vertical_bijective && self.right_vertical_bijective
    }
}

/// Admissible `(k, r)`: `s = k - 2r` in `0..=n` and `L^r` nonzero on `P^s`.
pub fn diagram_indices(n: usize) -> Vec<(usize, usize)> {
    (0..=2 * n)
        .flat_map(|k| lefschetz_range(n, k).map(move |r| (k, r)))
        .collect()
}

pub fn diagram_check(model: &SymplecticModel, k: usize, r: usize) -> Result<DiagramVerdict, DualityError> {
    let all = DdLambdaCohomology::compute(model)?;
    let n = model.n();
    if k > 2 * n || !lefschetz_range(n, k).contains(&r) {
        return Err(DualityError::NoSuchBlock { k, r });
    }
    let fc = build_filtered_complex(model, n - (k - 2 * r))?;
    diagram_check_with(model, &all, &fc, k, r)
}

/// As [`diagram_check`] with precomputed cohomologies; `fc` must have `p = n - k + 2r`.
pub fn diagram_check_with(
    model: &SymplecticModel,
    all: &DdLambdaCohomology,
    fc: &FilteredComplex<'_>,
    k: usize,
    r: usize,
) -> Result<DiagramVerdict, DualityError> {
    let n = model.n();
    if k > 2 * n || !lefschetz_range(n, k).contains(&r) {
        return Err(DualityError::NoSuchBlock { k, r });
    }
    let s = k - 2 * r;
    let p_prime = n - s;
    assert_eq!(fc.p(), p_prime, "complex level must be n - k + 2r");
    let bs = all.primitive_plus[s].representatives();
    let bps = all.primitive_dd[s].representatives();
    let r_prime = n + r - k;

    let mut witness = None;
    let mut entries_agree = true;
    for b in &bs {
        for bp in &bps {
            let lhs = wedge_integral(&lefschetz_power(model, b, r)?, &lefschetz_power(model, bp, r_prime)?)?;
            let lifted = lefschetz_power(model, b, p_prime)?;
            let rhs = wedge_integral(&star_r(model, &lifted)?, &lefschetz_power(model, bp, p_prime)?)?;
            if lhs != rhs {
                entries_agree = false;
                witness.get_or_insert_with(|| format!("B = {b}, B' = {bp}: {lhs} != {rhs}"));
            }
        }
    }

    let h = fc.cohomology();
    let mut vertical = |forms: &[Form], target: &CohomologySpace| -> Result<bool, DualityError> {
        let mut columns = Vec::new();
        for b in forms {
            let lifted = lefschetz_power(model, b, p_prime)?;
            match target.class_of(&lifted) {
                Ok(c) => columns.push(c),
                Err(_) => {
                    witness.get_or_insert_with(|| format!("L^{p_prime} ({b}) is not a cocycle of {}", target.label()));
                    return Ok(false);
                }
            }
        }
        let m = RationalMatrix::from_columns(target.dim(), &columns)?;
        Ok(m.is_square() && m.rank() == target.dim())
    };
    let left_vertical_bijective = vertical(&bs, &h[n + p_prime + 1])?;
    let right_vertical_bijective = vertical(&bps, &h[n + p_prime])?;
    if witness.is_none() && !(left_vertical_bijective && right_vertical_bijective) {
        witness = Some(format!("vertical map for (k, r) = ({k}, {r}) is not bijective"));
    }
    Ok(DiagramVerdict {
        k,
        r,
        p_prime,
        entries_agree,
        left_vertical_bijective,
        right_vertical_bijective,
        witness,
    })
}

/// Every admissible diagram of a model, sharing the cohomology computations.
pub fn diagram_check_all(model: &SymplecticModel) -> Result<Vec<DiagramVerdict>, DualityError> {
    let n = model.n();
    let all = DdLambdaCohomology::compute(model)?;
    let complexes = (0..=n)
        .map(|p| build_filtered_complex(model, p))
        .collect::<Result<Vec<_>, _>>()?;
    diagram_indices(n)
        .into_iter()
        .map(|(k, r)| diagram_check_with(model, &all, &complexes[n - (k - 2 * r)], k, r))
        .collect()
}
