#![allow(dead_code)]

use ncmops::jacobi::{Extension, JacobiData};
use ncmops::omega::OmegaTree;
use ncmops::rational::ratio;
use ncmops::{NCPolynomial, Rational, Word};
use ncmops::prodstate::ProductState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub const BUILTINS: [&str; 5] = ["free", "boolean", "monotone", "antimonotone", "one-branch"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive rationals p/q with 1 <= p <= 6, 1 <= q <= 4.
pub fn positive_rational(r: &mut impl Rng) -> Rational {
    ratio(r.gen_range(1..=6), r.gen_range(1..=4))
}

/// Ten positive betas and gammas, repeated past the prefix.
pub fn random_jacobi(r: &mut impl Rng) -> JacobiData {
    let beta = (0..10).map(|_| positive_rational(r)).collect();
    let gamma = (0..10).map(|_| positive_rational(r)).collect();
    JacobiData::new(beta, gamma, Extension::Repeat).unwrap()
}

pub fn random_pair(seed: u64) -> (JacobiData, JacobiData) {
    let mut r = rng(seed);
    (random_jacobi(&mut r), random_jacobi(&mut r))
}

pub fn state(name: &str, depth: usize, mu1: &JacobiData, mu2: &JacobiData) -> ProductState {
    ProductState::new(OmegaTree::builtin(name, depth).unwrap(), mu1.clone(), mu2.clone()).unwrap()
}

pub fn w(letters: &[u8]) -> Word {
    Word::from(letters)
}

/// Moments from the defining conditions alone: `phi[P_u] = 0` for nonempty
/// `u`, with `P_u = x_u + lower terms`, solved degree by degree.
pub fn centering_solve(st: &ProductState, order: usize) -> BTreeMap<Word, Rational> {
    let mut table = BTreeMap::new();
    table.insert(Word::empty(), Rational::from_integer(1.into()));
    for u in Word::all_up_to(2, order).into_iter().skip(1) {
        let p: NCPolynomial = st.basis_polynomial(&u).unwrap();
        let mut v = Rational::from_integer(0.into());
        for (x, c) in p.terms() {
            if *x != u {
                v -= c * &table[x];
            }
        }
        table.insert(u, v);
    }
    table
}
