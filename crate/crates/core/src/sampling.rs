//! Seeded random generation of rationals, polynomials and group elements.
//!
//! Every randomized validation path (oracles, equivariance trials, corpus
//! generation) draws from a `ChaCha8Rng` built from a caller-supplied seed,
//! so identical seeds reproduce identical runs.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::rational::Rat;
use crate::weighted::{monomial_basis, GL2Element, UnipotentElement, WeightedPolynomial};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rational with numerator in `[-num_bound, num_bound]` and
/// denominator in `[1, den_bound]`.
pub fn random_rat(rng: &mut ChaCha8Rng, num_bound: i64, den_bound: u64) -> Rat {
    let num = rng.gen_range(-num_bound..=num_bound);
    let den = rng.gen_range(1..=den_bound) as i64;
    Rat::new(num.into(), den.into())
}

pub fn random_nonzero_rat(rng: &mut ChaCha8Rng, num_bound: i64, den_bound: u64) -> Rat {
    loop {
        let r = random_rat(rng, num_bound, den_bound);
        if !num_traits::Zero::is_zero(&r) {
            return r;
        }
    }
}

/// Random nonzero polynomial of grade `d`: each monomial enters with the
/// given per-mille probability, at least one term guaranteed; coefficients
/// are small nonzero rationals.
pub fn random_polynomial(rng: &mut ChaCha8Rng, d: u32, keep_per_mille: u32) -> WeightedPolynomial {
    let basis = monomial_basis(d);
    loop {
        let mut terms = Vec::new();
        for m in &basis {
            if rng.gen_range(0..1000) < keep_per_mille {
                terms.push((*m, random_nonzero_rat(rng, 4, 3)));
            }
        }
        if terms.is_empty() {
            let idx = rng.gen_range(0..basis.len());
            terms.push((basis[idx], random_nonzero_rat(rng, 4, 3)));
        }
        let p = WeightedPolynomial::from_terms(d, terms).expect("basis monomials match grade");
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_unipotent(rng: &mut ChaCha8Rng, num_bound: i64, den_bound: u64) -> UnipotentElement {
    UnipotentElement::new(
        random_rat(rng, num_bound, den_bound),
        random_rat(rng, num_bound, den_bound),
        random_rat(rng, num_bound, den_bound),
    )
}

pub fn random_gl2(rng: &mut ChaCha8Rng, num_bound: i64, den_bound: u64) -> GL2Element {
    loop {
        let entries = [
            [random_rat(rng, num_bound, den_bound), random_rat(rng, num_bound, den_bound)],
            [random_rat(rng, num_bound, den_bound), random_rat(rng, num_bound, den_bound)],
        ];
        if let Ok(g) = GL2Element::new(entries) {
            return g;
        }
    }
}
