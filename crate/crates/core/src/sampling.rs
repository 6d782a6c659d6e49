//! Seeded random rationals, forms and subspace elements for law checking.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlinalg::{Rational, SubspaceBasis};
use crate::exterior::{basis_monomials, Form};

/// Deterministic sampler; the same seed always yields the same stream.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    /// `a / b` with `|a| <= 5` and `1 <= b <= 3`; zero about one time in eleven.
    pub fn rational(&mut self) -> Rational {
        let num: i64 = self.rng.random_range(-5..=5);
        let den: i64 = self.rng.random_range(1..=3);
        Rational::new(num.into(), den.into())
    }

    /// Random homogeneous form of degree `k`; roughly half the monomials are used.
    pub fn form(&mut self, n: usize, k: usize) -> Form {
        let mut terms = Vec::new();
        for m in basis_monomials(n, k) {
            if self.rng.random_bool(0.5) {
                terms.push((m, self.rational()));
            }
        }
        Form::from_terms(n, terms).expect("monomials are in range")
    }

    /// Random form with a random subset of degrees.
    pub fn mixed_form(&mut self, n: usize) -> Form {
        (0..=2 * n).fold(Form::zero(n), |acc, k| {
            if self.rng.random_bool(0.5) {
                acc + self.form(n, k)
            } else {
                acc
            }
        })
    }

    /// Random element of a subspace, as an ambient coordinate vector.
    pub fn element(&mut self, basis: &SubspaceBasis) -> Vec<Rational> {
        let coeffs: Vec<Rational> = (0..basis.dim()).map(|_| self.rational()).collect();
        if coeffs.is_empty() {
            return vec![Rational::zero(); basis.ambient_dim()];
        }
        basis.combination(&coeffs)
    }

    /// Random degree-`k` form in a subspace of `Omega^k`.
    pub fn form_in(&mut self, n: usize, k: usize, basis: &SubspaceBasis) -> Form {
        Form::from_vector(n, k, &self.element(basis))
    }
}
