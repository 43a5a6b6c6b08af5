mod common;

use common::{centering_solve, random_pair, state, w, BUILTINS};
use ncmops::jacobi::JacobiData;
use ncmops::omega::{OmegaKind, OmegaTree};
use ncmops::oracle::{
    antimonotone_moments, cfree_moments, gram_schmidt_mops, gram_schmidt_mops_ordered,
    monic_block_factorization, BlockFactorization, MomentFunctional, Oracle, OracleState,
};
use ncmops::prodstate::{moment_table, CoefficientMap};
use ncmops::rational::{int, ratio};
use ncmops::{NCPolynomial, Rational, Word};

#[test]
fn transfer_engine_matches_centering_solve() {
    let (mu1, mu2) = random_pair(11);
    for name in BUILTINS {
        let st = state(name, 7, &mu1, &mu2);
        assert_eq!(st.moments(7).unwrap(), centering_solve(&st, 7), "{name}");
    }
}

/// Hand-checked values with semicircle marginals.
#[test]
fn frozen_semicircle_moments() {
    let s = JacobiData::semicircle();
    let cases: [(&str, &[u8], i64); 10] = [
        ("free", &[1, 1, 2, 2], 1),
        ("free", &[1, 2, 2, 1], 1),
        ("free", &[1, 2, 1, 2], 0),
        ("free", &[1, 1, 2, 2, 1, 1], 2),
        ("boolean", &[1, 2, 2, 1], 0),
        ("boolean", &[1, 1, 2, 2, 1, 1], 1),
        ("monotone", &[1, 2, 2, 1], 1),
        ("monotone", &[2, 1, 1, 2], 0),
        ("antimonotone", &[2, 1, 1, 2], 1),
        ("one-branch", &[1, 2, 2, 1], 0),
    ];
    for (name, letters, expected) in cases {
        let st = state(name, 6, &s, &s);
        assert_eq!(st.moment(&w(letters)).unwrap(), int(expected), "{name} {letters:?}");
    }
}

/// Monotone in `(1,1,2,2,1,1)`: mu1[x^4] mu2[x^2] = 2.
#[test]
fn frozen_monotone_nested_block() {
    let s = JacobiData::semicircle();
    assert_eq!(state("monotone", 6, &s, &s).moment(&w(&[1, 1, 2, 2, 1, 1])).unwrap(), int(2));
}

#[test]
fn antimonotone_is_swapped_monotone() {
    let (mu1, mu2) = random_pair(12);
    let anti = state("antimonotone", 6, &mu1, &mu2).moments(6).unwrap();
    let mono = state("monotone", 6, &mu2, &mu1).moments(6).unwrap();
    for (u, v) in &anti {
        assert_eq!(*v, mono[&u.relabel(|l| 3 - l)], "{u}");
        assert_eq!(*v, antimonotone_moments(&mu1, &mu2, u).unwrap(), "{u}");
    }
}

#[test]
fn cfree_oracle_matches_cfree_map() {
    let (mu1, mu2) = random_pair(13);
    let (nu1, nu2) = random_pair(14);
    let table = moment_table(&CoefficientMap::cfree(&mu1, &nu1, &mu2, &nu2, 6).unwrap(), 6).unwrap();
    for (u, v) in &table {
        assert_eq!(*v, cfree_moments(&mu1, &nu1, &mu2, &nu2, u).unwrap(), "{u}");
    }
}

#[test]
fn q_counterexample_for_several_q() {
    for q in [ratio(1, 2), ratio(-1, 3), ratio(2, 3), ratio(-3, 4)] {
        let phi = OracleState::new(Oracle::QGaussian(q.clone()), JacobiData::semicircle(), JacobiData::semicircle());
        let r = gram_schmidt_mops(&phi, 3).unwrap();
        assert!(!r.is_mops);
        assert_eq!(phi.inner(&r.polys[&w(&[1, 2])], &r.polys[&w(&[2, 1])]).unwrap(), q);
        let q121 = &r.polys[&w(&[1, 2, 1])];
        let expected = &NCPolynomial::word(2, w(&[1, 2, 1])) - &NCPolynomial::monomial(2, w(&[2]), q.clone());
        assert_eq!(*q121, expected);
        assert_eq!(monic_block_factorization(q121), BlockFactorization::Impossible, "q = {q}");
    }
}

#[test]
fn q_zero_is_free_semicircle() {
    let s = JacobiData::semicircle();
    let phi = OracleState::new(Oracle::QGaussian(int(0)), s.clone(), s.clone());
    let free = state("free", 8, &s, &s);
    for u in Word::all_up_to(2, 8) {
        assert_eq!(phi.moment(&u).unwrap(), free.moment(&u).unwrap(), "{u}");
    }
    assert!(gram_schmidt_mops(&phi, 3).unwrap().is_mops);
}

#[test]
fn tensor_witness_value() {
    let s = JacobiData::semicircle();
    let r = gram_schmidt_mops(&OracleState::new(Oracle::Tensor, s.clone(), s), 3).unwrap();
    assert_eq!(r.witness, Some((w(&[1, 2]), w(&[2, 1]))));
    assert_eq!(r.witness_value, Some(int(1)));
}

#[test]
fn product_states_are_mops() {
    let (mu1, mu2) = random_pair(15);
    for name in BUILTINS {
        let st = state(name, 6, &mu1, &mu2);
        assert!(gram_schmidt_mops(&st, 3).unwrap().is_mops, "{name}");
    }
}

#[test]
fn gram_schmidt_reproduces_basis_polynomials() {
    let (mu1, mu2) = random_pair(16);
    let s = JacobiData::semicircle();
    let mut exact = vec![state("free", 6, &mu1, &mu2)];
    exact.extend(BUILTINS.iter().map(|name| state(name, 6, &s, &s)));
    for st in &exact {
        let r = gram_schmidt_mops(st, 3).unwrap();
        for (u, q) in &r.polys {
            assert_eq!(*q, st.basis_polynomial(u).unwrap(), "{} {u}", st.omega().kind());
        }
    }
}

/// Away from the free tree, zero-norm directions make `Q_u` unique only up
/// to a null vector.
#[test]
fn gram_schmidt_matches_basis_modulo_null_space() {
    let (mu1, mu2) = random_pair(17);
    for name in BUILTINS {
        let st = state(name, 6, &mu1, &mu2);
        let r = gram_schmidt_mops(&st, 3).unwrap();
        for (u, q) in &r.polys {
            let diff = q - &st.basis_polynomial(u).unwrap();
            assert_eq!(st.inner(&diff, &diff).unwrap(), int(0), "{name} {u}");
        }
    }
    let boolean = state("boolean", 6, &mu1, &mu2);
    let q121 = &gram_schmidt_mops(&boolean, 3).unwrap().polys[&w(&[1, 2, 1])];
    let p12 = boolean.basis_polynomial(&w(&[1, 2])).unwrap();
    let shifted = &boolean.basis_polynomial(&w(&[1, 2, 1])).unwrap() + &p12.scale(&mu1.beta(0).unwrap());
    assert_eq!(*q121, shifted);
}

#[test]
fn verdict_ignores_within_degree_order() {
    let (mu1, mu2) = random_pair(18);
    let s = JacobiData::semicircle();
    let functionals: Vec<Box<dyn MomentFunctional>> = vec![
        Box::new(OracleState::new(Oracle::QGaussian(ratio(1, 2)), s.clone(), s.clone())),
        Box::new(OracleState::new(Oracle::Tensor, mu1.clone(), mu2.clone())),
        Box::new(state("boolean", 6, &mu1, &mu2)),
        Box::new(state("one-branch", 6, &mu1, &mu2)),
    ];
    let mut reversed = Word::all_up_to(2, 3);
    reversed.reverse();
    for phi in &functionals {
        let a = gram_schmidt_mops(phi.as_ref(), 3).unwrap();
        let b = gram_schmidt_mops_ordered(phi.as_ref(), &reversed).unwrap();
        assert_eq!(a.is_mops, b.is_mops);
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.witness_value, b.witness_value);
    }
}

#[test]
fn factorization_found_for_product_basis() {
    let (mu1, mu2) = random_pair(19);
    let st = state("free", 6, &mu1, &mu2);
    let p = st.basis_polynomial(&w(&[1, 1, 2, 1])).unwrap();
    let BlockFactorization::Found(factors) = monic_block_factorization(&p) else {
        panic!("free basis polynomial should factor");
    };
    let expected: Vec<Vec<Rational>> = vec![
        mu1.op_coefficients(2).unwrap(),
        mu2.op_coefficients(1).unwrap(),
        mu1.op_coefficients(1).unwrap(),
    ];
    assert_eq!(factors, expected);
}

/// Smallest non-associative admissible tree of depth 3.
#[test]
fn non_associative_fixture() {
    let omega = OmegaTree::validate([w(&[2, 1]), w(&[2, 2, 1])], 3, true, OmegaKind::Custom).unwrap();
    assert!(!omega.is_associative(3).unwrap());
    let first = omega.omega_squared(3).unwrap();
    let mirror = omega.omega_squared_mirror(3).unwrap();
    let diff: Vec<_> = first.symmetric_difference(&mirror).cloned().collect();
    assert_eq!(diff, vec![w(&[3, 2, 1])]);
    assert!(mirror.contains(&w(&[3, 2, 1])));
}
