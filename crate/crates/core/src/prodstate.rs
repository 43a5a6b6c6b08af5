//! Product-type states `phi_Omega` and their basis polynomials.
//!
//! A [`CoefficientMap`] holds the diagonal recursion data `B(i, u)`, `C(u)`
//! of a family of monic polynomials `P_u`:
//!
//! ```text
//! x_i P_u = P_{(i,u)} + B(i,u) P_u + [u(1) = i] C(u) P_{tail(u)}
//! ```
//!
//! The state is the functional with `phi[P_()] = 1` and `phi[P_u] = 0`
//! otherwise. It is evaluated by expanding `x_w` in the `P` basis one
//! letter at a time.

use crate::jacobi::{JacobiData, JacobiError};
use crate::ncpoly::{NCPolynomial, Word};
use crate::omega::{OmegaKind, OmegaTree};
use crate::oracle::MomentFunctional;
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::collections::{btree_map::Entry, BTreeMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StateError {
    #[error("depth exhausted: P_{word} lies past coefficient depth {depth}")]
    DepthExhausted { word: Word, depth: usize },
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error("measure {letter} has {support} support points but Omega contains a run of length {run}")]
    SupportExceeded {
        letter: u8,
        run: usize,
        support: usize,
    },
    #[error("negative C coefficient at {0}")]
    NegativeC(Word),
    #[error("letter out of range in {0}")]
    BadLetter(Word),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapSource {
    ProductType(OmegaKind),
    CFree,
    Explicit,
}

/// Diagonal recursion data `B(i, u)`, `C(u)` for `|u| <= depth`.
/// Only nonzero entries are stored.
#[derive(Debug, Clone)]
pub struct CoefficientMap {
    alphabet: usize,
    depth: usize,
    b: BTreeMap<(u8, Word), Rational>,
    c: BTreeMap<Word, Rational>,
    source: MapSource,
}

fn insert_nonzero<K: Ord>(m: &mut BTreeMap<K, Rational>, k: K, v: Rational) {
    if !v.is_zero() {
        m.insert(k, v);
    }
}

impl CoefficientMap {
    /// `B(i, i^k v) = beta^{(i)}_k` when `i^{k+1} v` is in `Omega`;
    /// `C(i^k v) = gamma^{(i)}_k` when `i^k v` is in `Omega \ boundary`.
    pub fn product_type(
        omega: &OmegaTree,
        mu1: &JacobiData,
        mu2: &JacobiData,
    ) -> Result<Self, JacobiError> {
        let n = omega.depth();
        let mu = |i: u8| if i == 1 { mu1 } else { mu2 };
        let mut b = BTreeMap::new();
        let mut c = BTreeMap::new();
        for u in omega.members().iter().filter(|u| u.len() <= n) {
            for i in [1u8, 2] {
                if omega.contains(&u.prepend(i)) {
                    insert_nonzero(&mut b, (i, u.clone()), mu(i).beta(u.leading_run(i))?);
                }
            }
            if let Some(i) = u.first() {
                if omega.in_interior(u) {
                    insert_nonzero(&mut c, u.clone(), mu(i).gamma(u.leading_run(i))?);
                }
            }
        }
        Ok(CoefficientMap {
            alphabet: 2,
            depth: n,
            b,
            c,
            source: MapSource::ProductType(omega.kind()),
        })
    }

    /// The c-free map on the full binary tree: a node `i^k v` takes its
    /// parameters from `mu_i` when `v` is empty and from `nu_i` otherwise.
    pub fn cfree(
        mu1: &JacobiData,
        nu1: &JacobiData,
        mu2: &JacobiData,
        nu2: &JacobiData,
        depth: usize,
    ) -> Result<Self, JacobiError> {
        let pick = |i: u8, pure: bool| match (i, pure) {
            (1, true) => mu1,
            (1, false) => nu1,
            (_, true) => mu2,
            (_, false) => nu2,
        };
        let mut b = BTreeMap::new();
        let mut c = BTreeMap::new();
        for u in Word::all_up_to(2, depth) {
            for i in [1u8, 2] {
                let k = u.leading_run(i);
                let pure = k == u.len();
                insert_nonzero(&mut b, (i, u.clone()), pick(i, pure).beta(k)?);
            }
            if let Some(i) = u.first() {
                let k = u.leading_run(i);
                let pure = k == u.len();
                insert_nonzero(&mut c, u.clone(), pick(i, pure).gamma(k)?);
            }
        }
        Ok(CoefficientMap {
            alphabet: 2,
            depth,
            b,
            c,
            source: MapSource::CFree,
        })
    }

    /// Arbitrary diagonal data over `{1..alphabet}`. `C` must be non-negative.
    pub fn explicit(
        alphabet: usize,
        depth: usize,
        b: impl IntoIterator<Item = ((u8, Word), Rational)>,
        c: impl IntoIterator<Item = (Word, Rational)>,
    ) -> Result<Self, StateError> {
        let ok = |w: &Word| w.letters().iter().all(|&l| l >= 1 && l as usize <= alphabet);
        let mut bm = BTreeMap::new();
        for ((i, u), v) in b {
            if !ok(&u) || i == 0 || i as usize > alphabet {
                return Err(StateError::BadLetter(u.prepend(i)));
            }
            insert_nonzero(&mut bm, (i, u), v);
        }
        let mut cm = BTreeMap::new();
        for (u, v) in c {
            if !ok(&u) || u.is_empty() {
                return Err(StateError::BadLetter(u));
            }
            if v < Rational::zero() {
                return Err(StateError::NegativeC(u));
            }
            insert_nonzero(&mut cm, u, v);
        }
        Ok(CoefficientMap {
            alphabet,
            depth,
            b: bm,
            c: cm,
            source: MapSource::Explicit,
        })
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn source(&self) -> &MapSource {
        &self.source
    }

    pub fn b(&self, i: u8, u: &Word) -> Rational {
        self.b
            .get(&(i, u.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn c(&self, u: &Word) -> Rational {
        self.c.get(u).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn b_entries(&self) -> impl Iterator<Item = (&(u8, Word), &Rational)> {
        self.b.iter()
    }

    pub fn c_entries(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.c.iter()
    }

    /// Same coefficients, ignoring how the map was built.
    pub fn same_coefficients(&self, other: &CoefficientMap) -> bool {
        self.alphabet == other.alphabet && self.b == other.b && self.c == other.c
    }

    /// `prod_{i=1}^{n} C((u(i), ..., u(n)))`, the squared norm of `P_u`.
    pub fn norm_product(&self, u: &Word) -> Rational {
        (0..u.len())
            .map(|i| self.c(&u.suffix(u.len() - i)))
            .fold(Rational::one(), |a, b| a * b)
    }

    fn check(&self, u: &Word) -> Result<(), StateError> {
        if u.len() > self.depth {
            Err(StateError::DepthExhausted {
                word: u.clone(),
                depth: self.depth,
            })
        } else {
            Ok(())
        }
    }

    /// `P_u` rebuilt from the recursion: `P_{(i,u)} = x_i P_u - B(i,u) P_u - [u(1)=i] C(u) P_{tail u}`.
    pub fn basis_polynomial(&self, u: &Word) -> Result<NCPolynomial, StateError> {
        let d = self.alphabet;
        // P of every postfix, shortest first.
        let mut chain: Vec<NCPolynomial> = vec![NCPolynomial::one(d)];
        for len in 1..=u.len() {
            let w = u.suffix(len - 1);
            self.check(&w)?;
            let i = u.letters()[u.len() - len];
            let prev = &chain[len - 1];
            let mut p = &NCPolynomial::var(d, i) * prev;
            p = &p - &prev.scale(&self.b(i, &w));
            if w.first() == Some(i) {
                p = &p - &chain[len - 2].scale(&self.c(&w));
            }
            chain.push(p);
        }
        Ok(chain.pop().unwrap())
    }
}

/// A vector `sum a_u P_u`; zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BasisExpansion(BTreeMap<Word, Rational>);

impl BasisExpansion {
    pub fn unit() -> Self {
        Self::basis(Word::empty())
    }

    pub fn basis(u: Word) -> Self {
        BasisExpansion(BTreeMap::from([(u, Rational::one())]))
    }

    pub fn add(&mut self, u: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(u) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn coefficient(&self, u: &Word) -> Rational {
        self.0.get(u).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn prune(&mut self, max_len: usize) {
        self.0.retain(|u, _| u.len() <= max_len);
    }
}

/// `x_i` applied to an expansion.
pub fn left_multiply(
    cm: &CoefficientMap,
    i: u8,
    v: &BasisExpansion,
) -> Result<BasisExpansion, StateError> {
    let mut out = BasisExpansion::default();
    for (u, a) in v.entries() {
        cm.check(u)?;
        out.add(u.prepend(i), a.clone());
        out.add(u.clone(), a * cm.b(i, u));
        if u.first() == Some(i) {
            out.add(u.tail(), a * cm.c(u));
        }
    }
    Ok(out)
}

/// Expansion of `x_w` in the `P` basis, keeping only words of length
/// `<= keep`. Each letter lowers length by at most one, so terms that cannot
/// shrink to length `keep` before the word is used up are dropped on the way.
fn expand_word(cm: &CoefficientMap, w: &Word, keep: usize) -> Result<BasisExpansion, StateError> {
    let mut v = BasisExpansion::unit();
    let letters = w.letters();
    for (step, &i) in letters.iter().rev().enumerate() {
        let remaining = letters.len() - step - 1;
        v = left_multiply(cm, i, &v)?;
        v.prune(remaining + keep);
    }
    Ok(v)
}

/// Full expansion of a polynomial in the `P` basis.
pub fn expand(cm: &CoefficientMap, p: &NCPolynomial) -> Result<BasisExpansion, StateError> {
    let mut out = BasisExpansion::default();
    for (w, a) in p.terms() {
        for (u, c) in expand_word(cm, w, w.len())?.entries() {
            out.add(u.clone(), a * c);
        }
    }
    Ok(out)
}

pub fn word_moment(cm: &CoefficientMap, w: &Word) -> Result<Rational, StateError> {
    Ok(expand_word(cm, w, 0)?.coefficient(&Word::empty()))
}

/// `phi[p]`: the `P_()` coefficient of `p`.
pub fn state_eval(cm: &CoefficientMap, p: &NCPolynomial) -> Result<Rational, StateError> {
    let mut acc = Rational::zero();
    for (w, a) in p.terms() {
        acc += a * word_moment(cm, w)?;
    }
    Ok(acc)
}

/// `<p, q> = phi[p* q]`.
pub fn inner_product(
    cm: &CoefficientMap,
    p: &NCPolynomial,
    q: &NCPolynomial,
) -> Result<Rational, StateError> {
    state_eval(cm, &(&p.involution() * q))
}

/// Every moment `phi[x_w]`, `|w| <= order`, by one depth-first sweep that
/// reuses the expansion of each postfix.
pub fn moment_table(cm: &CoefficientMap, order: usize) -> Result<BTreeMap<Word, Rational>, StateError> {
    let mut out = BTreeMap::new();
    let d = cm.alphabet() as u8;
    let mut stack = vec![(Word::empty(), BasisExpansion::unit())];
    while let Some((w, v)) = stack.pop() {
        out.insert(w.clone(), v.coefficient(&Word::empty()));
        if w.len() == order {
            continue;
        }
        for i in 1..=d {
            let mut next = left_multiply(cm, i, &v)?;
            next.prune(order - w.len() - 1);
            stack.push((w.prepend(i), next));
        }
    }
    Ok(out)
}

/// Sparse symmetric matrix indexed by words in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    pub words: Vec<Word>,
    /// Nonzero entries `(row, col, value)`, row-major.
    pub entries: Vec<(usize, usize, Rational)>,
}

impl GramMatrix {
    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries
            .iter()
            .find(|(a, b, _)| *a == r && *b == c)
            .map(|(_, _, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.iter().all(|(r, c, _)| r == c)
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.words.len()).map(|k| self.get(k, k)).collect()
    }
}

/// `<p, q>` from a table of word moments.
pub fn table_inner(table: &BTreeMap<Word, Rational>, p: &NCPolynomial, q: &NCPolynomial) -> Rational {
    let mut acc = Rational::zero();
    for (a, x) in p.terms() {
        let ra = a.reversed();
        for (b, y) in q.terms() {
            let w = ra.concat(b);
            let m = table
                .get(&w)
                .unwrap_or_else(|| panic!("moment table lacks {w}"));
            acc += x * y * m;
        }
    }
    acc
}

/// Gram matrix of `polys` against a moment table covering twice their degree.
pub fn gram_of(
    table: &BTreeMap<Word, Rational>,
    words: Vec<Word>,
    polys: &[NCPolynomial],
    diagonal_only: bool,
) -> GramMatrix {
    let mut entries = Vec::new();
    for r in 0..polys.len() {
        for c in 0..polys.len() {
            if diagonal_only && r != c {
                continue;
            }
            let v = table_inner(table, &polys[r], &polys[c]);
            if !v.is_zero() {
                entries.push((r, c, v));
            }
        }
    }
    GramMatrix { words, entries }
}

/// Gram matrix of the recursion polynomials `P_u`, `|u| <= depth`.
pub fn gram_matrix(cm: &CoefficientMap, depth: usize) -> Result<GramMatrix, StateError> {
    let table = moment_table(cm, 2 * depth)?;
    let words = Word::all_up_to(cm.alphabet() as u8, depth);
    let polys = words
        .iter()
        .map(|u| cm.basis_polynomial(u))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(gram_of(&table, words, &polys, false))
}

/// `phi_Omega` for a pair of one-variable measures.
#[derive(Debug, Clone)]
pub struct ProductState {
    omega: OmegaTree,
    mu: [JacobiData; 2],
    map: CoefficientMap,
}

impl ProductState {
    /// Rejects `Omega` with a run of `i` longer than the support of `mu_i`.
    pub fn new(omega: OmegaTree, mu1: JacobiData, mu2: JacobiData) -> Result<Self, StateError> {
        for (letter, mu) in [(1u8, &mu1), (2u8, &mu2)] {
            if let Some(support) = mu.support_size() {
                let run = omega.max_run(letter);
                if run > support {
                    return Err(StateError::SupportExceeded {
                        letter,
                        run,
                        support,
                    });
                }
            }
        }
        let map = CoefficientMap::product_type(&omega, &mu1, &mu2)?;
        Ok(ProductState {
            omega,
            mu: [mu1, mu2],
            map,
        })
    }

    pub fn omega(&self) -> &OmegaTree {
        &self.omega
    }

    pub fn map(&self) -> &CoefficientMap {
        &self.map
    }

    pub fn mu(&self, i: u8) -> &JacobiData {
        &self.mu[i as usize - 1]
    }

    /// `P_u` from its definition: for `u` in `Omega` the product of
    /// one-variable orthogonal polynomials over the blocks of `u`; otherwise
    /// `x_v P_w` with `w` the longest postfix of `u` in `Omega`.
    pub fn basis_polynomial(&self, u: &Word) -> Result<NCPolynomial, StateError> {
        let w = self.omega.longest_postfix_in(u);
        let v = Word::from(&u.letters()[..u.len() - w.len()]);
        let mut p = NCPolynomial::word(2, v);
        for (l, n) in w.blocks() {
            p = &p * &self.mu(l).op_polynomial(2, l, n)?;
        }
        Ok(p)
    }

    pub fn eval(&self, p: &NCPolynomial) -> Result<Rational, StateError> {
        state_eval(&self.map, p)
    }

    pub fn inner_product(&self, p: &NCPolynomial, q: &NCPolynomial) -> Result<Rational, StateError> {
        inner_product(&self.map, p, q)
    }

    pub fn moments(&self, order: usize) -> Result<BTreeMap<Word, Rational>, StateError> {
        moment_table(&self.map, order)
    }

    /// Gram matrix of the definition polynomials, `|u| <= depth`.
    pub fn gram_matrix(&self, depth: usize) -> Result<GramMatrix, StateError> {
        let table = self.moments(2 * depth)?;
        let words = Word::all_up_to(2, depth);
        let polys = words
            .iter()
            .map(|u| self.basis_polynomial(u))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(gram_of(&table, words, &polys, false))
    }
}

impl MomentFunctional for CoefficientMap {
    fn alphabet(&self) -> usize {
        self.alphabet
    }

    fn moment(&self, w: &Word) -> Result<Rational, StateError> {
        word_moment(self, w)
    }
}

impl MomentFunctional for ProductState {
    fn alphabet(&self) -> usize {
        2
    }

    fn moment(&self, w: &Word) -> Result<Rational, StateError> {
        word_moment(&self.map, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn w<const N: usize>(v: [u8; N]) -> Word {
        Word::from(v)
    }

    fn semi(kind: OmegaKind, depth: usize) -> ProductState {
        ProductState::new(
            OmegaTree::builder(kind, depth).unwrap(),
            JacobiData::semicircle(),
            JacobiData::semicircle(),
        )
        .unwrap()
    }

    fn shifted() -> (JacobiData, JacobiData) {
        let a = JacobiData::new(
            vec![ratio(1, 2), int(2), ratio(-1, 3)],
            vec![ratio(3, 2), int(1), ratio(5, 4)],
            Default::default(),
        )
        .unwrap();
        let b = JacobiData::new(
            vec![ratio(-2, 3), int(1)],
            vec![int(2), ratio(1, 3)],
            Default::default(),
        )
        .unwrap();
        (a, b)
    }

    #[test]
    fn basis_polynomials_by_definition() {
        let (a, b) = shifted();
        let free = ProductState::new(OmegaTree::builder(OmegaKind::Free, 3).unwrap(), a.clone(), b.clone()).unwrap();
        let x1 = NCPolynomial::var(2, 1);
        let x2 = NCPolynomial::var(2, 2);
        let c1 = NCPolynomial::constant(2, ratio(1, 2));
        let c2 = NCPolynomial::constant(2, ratio(-2, 3));
        assert_eq!(free.basis_polynomial(&Word::empty()).unwrap(), NCPolynomial::one(2));
        assert_eq!(free.basis_polynomial(&w([1, 2])).unwrap(), &(&x1 - &c1) * &(&x2 - &c2));
        let boolean = ProductState::new(OmegaTree::builder(OmegaKind::Boolean, 3).unwrap(), a, b).unwrap();
        assert_eq!(boolean.basis_polynomial(&w([1, 2])).unwrap(), &x1 * &(&x2 - &c2));
    }

    #[test]
    fn definition_matches_recursion() {
        let (a, b) = shifted();
        for kind in OmegaKind::BUILTINS {
            let st = ProductState::new(OmegaTree::builder(kind, 4).unwrap(), a.clone(), b.clone()).unwrap();
            for u in Word::all_up_to(2, 4) {
                assert_eq!(
                    st.basis_polynomial(&u).unwrap(),
                    st.map().basis_polynomial(&u).unwrap(),
                    "{kind} {u}"
                );
            }
        }
    }

    #[test]
    fn left_multiply_rules() {
        let b = semi(OmegaKind::Boolean, 3);
        let l1 = left_multiply(b.map(), 1, &BasisExpansion::unit()).unwrap();
        assert_eq!(l1, BasisExpansion::basis(w([1])));
        let l2 = left_multiply(b.map(), 2, &BasisExpansion::basis(w([1]))).unwrap();
        assert_eq!(l2, BasisExpansion::basis(w([2, 1])));
        let f = semi(OmegaKind::Free, 3);
        let l = left_multiply(f.map(), 1, &BasisExpansion::basis(w([1]))).unwrap();
        let mut expected = BasisExpansion::basis(w([1, 1]));
        expected.add(Word::empty(), int(1));
        assert_eq!(l, expected);
    }

    #[test]
    fn small_moments() {
        let f = semi(OmegaKind::Free, 4);
        let m = |p: &ProductState, v: &[u8]| p.eval(&NCPolynomial::word(2, Word::from(v))).unwrap();
        assert_eq!(m(&f, &[1, 2, 1, 2]), int(0));
        assert_eq!(m(&f, &[1, 2, 2, 1]), int(1));
        let (a, b) = shifted();
        let st = ProductState::new(OmegaTree::builder(OmegaKind::Monotone, 4).unwrap(), a.clone(), b).unwrap();
        assert_eq!(m(&st, &[1]), ratio(1, 2));
        assert_eq!(m(&st, &[2]), ratio(-2, 3));
        assert_eq!(m(&st, &[1, 1, 2]), a.moment(2).unwrap() * ratio(-2, 3));
    }

    #[test]
    fn depth_exhausted() {
        let f = semi(OmegaKind::Free, 2);
        // Pruning keeps degree 3 feasible at depth 2.
        assert!(f.eval(&NCPolynomial::word(2, w([1, 1, 1]))).is_ok());
        let err = f.map().basis_polynomial(&w([1, 1, 1, 1])).unwrap_err();
        assert!(matches!(err, StateError::DepthExhausted { .. }));
        assert!(f.eval(&NCPolynomial::word(2, w([1, 1, 1, 1, 1, 1, 1]))).is_err());
    }

    #[test]
    fn table_matches_direct() {
        let (a, b) = shifted();
        let st = ProductState::new(OmegaTree::builder(OmegaKind::OneBranch, 5).unwrap(), a, b).unwrap();
        let t = st.moments(5).unwrap();
        assert_eq!(t.len(), 63);
        for (u, v) in &t {
            assert_eq!(&st.moment(u).unwrap(), v, "{u}");
        }
    }

    #[test]
    fn gram_examples() {
        let g = semi(OmegaKind::Boolean, 4).gram_matrix(2).unwrap();
        assert!(g.is_diagonal());
        let diag: Vec<_> = g.diagonal();
        assert_eq!(diag, vec![int(1), int(1), int(1), int(1), int(0), int(0), int(1)]);
        let g = semi(OmegaKind::Free, 4).gram_matrix(2).unwrap();
        assert!(g.diagonal().iter().all(|v| v == &int(1)));
        let ob = semi(OmegaKind::OneBranch, 4);
        let p = ob.basis_polynomial(&w([2, 1])).unwrap();
        assert_eq!(ob.inner_product(&p, &p).unwrap(), int(0));
    }

    #[test]
    fn cfree_degenerations_as_maps() {
        let (a, b) = shifted();
        let d0 = JacobiData::point_mass(int(0));
        let cf = CoefficientMap::cfree(&a, &a, &b, &b, 4).unwrap();
        let free = CoefficientMap::product_type(&OmegaTree::builder(OmegaKind::Free, 4).unwrap(), &a, &b).unwrap();
        assert!(cf.same_coefficients(&free));
        let cb = CoefficientMap::cfree(&a, &d0, &b, &d0, 4).unwrap();
        let boolean =
            CoefficientMap::product_type(&OmegaTree::builder(OmegaKind::Boolean, 4).unwrap(), &a, &b).unwrap();
        assert!(cb.same_coefficients(&boolean));
    }

    #[test]
    fn support_guard() {
        let two = JacobiData::bernoulli(&ratio(1, 3), &int(1), &int(-1)).unwrap();
        let om = OmegaTree::builder(OmegaKind::Free, 2).unwrap();
        let err = ProductState::new(om, two.clone(), JacobiData::semicircle()).unwrap_err();
        assert_eq!(
            err,
            StateError::SupportExceeded {
                letter: 1,
                run: 3,
                support: 2
            }
        );
        let om = OmegaTree::builder(OmegaKind::Free, 1).unwrap();
        assert!(ProductState::new(om, two, JacobiData::semicircle()).is_ok());
    }

    #[test]
    fn explicit_map_rejects_negative_c() {
        assert!(matches!(
            CoefficientMap::explicit(2, 2, [], [(w([1]), int(-1))]),
            Err(StateError::NegativeC(_))
        ));
    }
}
