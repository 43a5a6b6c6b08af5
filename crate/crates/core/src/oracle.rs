//! Reference moment functionals computed straight from the product
//! definitions, and a brute-force monic orthogonalizer.

use crate::jacobi::{JacobiData, JacobiError};
use crate::ncpoly::{NCPolynomial, Word};
use crate::prodstate::StateError;
use crate::rational::{pow, Rational};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

/// A unital linear functional on `R<x_1, ..., x_d>`, given on words.
pub trait MomentFunctional {
    fn alphabet(&self) -> usize;

    fn moment(&self, w: &Word) -> Result<Rational, StateError>;

    fn apply(&self, p: &NCPolynomial) -> Result<Rational, StateError> {
        let mut acc = Rational::zero();
        for (w, a) in p.terms() {
            acc += a * self.moment(w)?;
        }
        Ok(acc)
    }

    /// `<p, q> = phi[p* q]`.
    fn inner(&self, p: &NCPolynomial, q: &NCPolynomial) -> Result<Rational, StateError> {
        let mut acc = Rational::zero();
        for (a, x) in p.terms() {
            let ra = a.reversed();
            for (b, y) in q.terms() {
                acc += x * y * self.moment(&ra.concat(b))?;
            }
        }
        Ok(acc)
    }
}

impl<F: MomentFunctional + ?Sized> MomentFunctional for &F {
    fn alphabet(&self) -> usize {
        (**self).alphabet()
    }

    fn moment(&self, w: &Word) -> Result<Rational, StateError> {
        (**self).moment(w)
    }
}

/// Memoizes another functional.
pub struct Cached<F> {
    inner: F,
    cache: Mutex<HashMap<Word, Rational>>,
}

impl<F: MomentFunctional> Cached<F> {
    pub fn new(inner: F) -> Self {
        Cached {
            inner,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl<F: MomentFunctional> MomentFunctional for Cached<F> {
    fn alphabet(&self) -> usize {
        self.inner.alphabet()
    }

    fn moment(&self, w: &Word) -> Result<Rational, StateError> {
        if let Some(v) = self.cache.lock().unwrap().get(w) {
            return Ok(v.clone());
        }
        let v = self.inner.moment(w)?;
        self.cache.lock().unwrap().insert(w.clone(), v.clone());
        Ok(v)
    }
}

/// Moments given by a table; words outside the table are an error.
impl MomentFunctional for (usize, BTreeMap<Word, Rational>) {
    fn alphabet(&self) -> usize {
        self.0
    }

    fn moment(&self, w: &Word) -> Result<Rational, StateError> {
        self.1.get(w).cloned().ok_or_else(|| StateError::DepthExhausted {
            word: w.clone(),
            depth: self.1.keys().map(Word::len).max().unwrap_or(0),
        })
    }
}

fn x_pow(mu: &JacobiData, n: usize) -> Result<Rational, JacobiError> {
    mu.moment(n)
}

fn mu_of<'a>(mu1: &'a JacobiData, mu2: &'a JacobiData, l: u8) -> &'a JacobiData {
    if l == 1 {
        mu1
    } else {
        mu2
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn monomial(n: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n + 1];
    v[n] = Rational::one();
    v
}

/// One-variable factor `f(x_letter)`, coefficients lowest degree first.
type Factor = (u8, Vec<Rational>);

/// `phi[f_1 f_2 ... f_n]` for an alternating product, where `phi` is known
/// to factor as `prod mu[f_k]` once every factor at a position selected by
/// `must_center` is centered with respect to `center`.
fn centered_product<'a>(
    factors: Vec<Factor>,
    must_center: &dyn Fn(usize, usize) -> bool,
    center: &dyn Fn(u8) -> &'a JacobiData,
    outer: &dyn Fn(u8) -> &'a JacobiData,
) -> Result<Rational, JacobiError> {
    let n = factors.len();
    for k in 0..n {
        if !must_center(k, n) {
            continue;
        }
        let (l, f) = &factors[k];
        let m = center(*l).apply(f)?;
        if m.is_zero() {
            continue;
        }
        // f = (f - m) + m
        let mut centered = factors.clone();
        centered[k].1[0] -= &m;
        let a = centered_product(centered, must_center, center, outer)?;

        let mut removed: Vec<Factor> = factors[..k].to_vec();
        let rest = &factors[k + 1..];
        match (removed.last_mut(), rest.first()) {
            (Some(prev), Some(next)) => {
                prev.1 = poly_mul(&prev.1, &next.1);
                removed.extend_from_slice(&rest[1..]);
            }
            _ => removed.extend_from_slice(rest),
        }
        let b = centered_product(removed, must_center, center, outer)?;
        return Ok(a + m * b);
    }
    let mut acc = Rational::one();
    for (l, f) in &factors {
        acc *= outer(*l).apply(f)?;
    }
    Ok(acc)
}

fn word_factors(w: &Word) -> Vec<Factor> {
    w.blocks().into_iter().map(|(l, n)| (l, monomial(n))).collect()
}

/// Free product moment, by centering every block.
pub fn free_moments(mu1: &JacobiData, mu2: &JacobiData, w: &Word) -> Result<Rational, JacobiError> {
    let mu = |l: u8| mu_of(mu1, mu2, l);
    centered_product(word_factors(w), &|_, _| true, &mu, &mu)
}

/// c-free moment: interior blocks are centered with respect to `nu`, and a
/// product with centered interior factors is `prod mu[f_k]`.
pub fn cfree_moments(
    mu1: &JacobiData,
    nu1: &JacobiData,
    mu2: &JacobiData,
    nu2: &JacobiData,
    w: &Word,
) -> Result<Rational, JacobiError> {
    let mu = |l: u8| mu_of(mu1, mu2, l);
    let nu = |l: u8| mu_of(nu1, nu2, l);
    centered_product(word_factors(w), &|k, n| k > 0 && k + 1 < n, &nu, &mu)
}

/// Product of block moments.
pub fn boolean_moments(mu1: &JacobiData, mu2: &JacobiData, w: &Word) -> Result<Rational, JacobiError> {
    let mut acc = Rational::one();
    for (l, n) in w.blocks() {
        acc *= x_pow(mu_of(mu1, mu2, l), n)?;
    }
    Ok(acc)
}

/// `mu1[x^(total 1-length)] * prod over 2-blocks mu2[x^s]`.
pub fn monotone_moments(mu1: &JacobiData, mu2: &JacobiData, w: &Word) -> Result<Rational, JacobiError> {
    let mut ones = 0;
    let mut acc = Rational::one();
    for (l, n) in w.blocks() {
        if l == 1 {
            ones += n;
        } else {
            acc *= x_pow(mu2, n)?;
        }
    }
    Ok(acc * x_pow(mu1, ones)?)
}

/// Monotone with the roles of the letters exchanged.
pub fn antimonotone_moments(
    mu1: &JacobiData,
    mu2: &JacobiData,
    w: &Word,
) -> Result<Rational, JacobiError> {
    monotone_moments(mu2, mu1, &w.relabel(|l| 3 - l))
}

/// `mu1[x^(#1)] mu2[x^(#2)]`.
pub fn tensor_moments(mu1: &JacobiData, mu2: &JacobiData, w: &Word) -> Result<Rational, JacobiError> {
    let ones = w.letters().iter().filter(|&&l| l == 1).count();
    Ok(x_pow(mu1, ones)? * x_pow(mu2, w.len() - ones)?)
}

/// Sum over pair partitions of the positions of `w` matching equal letters,
/// each weighted by `q^(crossings)`.
pub fn q_gaussian_moments(q: &Rational, w: &Word) -> Rational {
    fn go(letters: &[u8], open: &mut Vec<bool>, pairs: &mut Vec<(usize, usize)>, q: &Rational) -> Rational {
        let Some(a) = open.iter().position(|&o| o) else {
            let crossings = pairs
                .iter()
                .flat_map(|p| pairs.iter().map(move |r| (p, r)))
                .filter(|((a, b), (c, d))| a < c && c < b && b < d)
                .count();
            return pow(q, crossings);
        };
        open[a] = false;
        let mut acc = Rational::zero();
        for b in a + 1..letters.len() {
            if open[b] && letters[b] == letters[a] {
                open[b] = false;
                pairs.push((a, b));
                acc += go(letters, open, pairs, q);
                pairs.pop();
                open[b] = true;
            }
        }
        open[a] = true;
        acc
    }
    if w.len() % 2 == 1 {
        return Rational::zero();
    }
    go(w.letters(), &mut vec![true; w.len()], &mut Vec::new(), q)
}

/// The reference products, by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Oracle {
    Free,
    Boolean,
    Monotone,
    Antimonotone,
    Tensor,
    CFree { nu1: JacobiData, nu2: JacobiData },
    QGaussian(Rational),
}

impl Oracle {
    pub const NAMES: [&'static str; 7] = [
        "free",
        "boolean",
        "monotone",
        "antimonotone",
        "tensor",
        "cfree",
        "q-gaussian",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Oracle::Free => "free",
            Oracle::Boolean => "boolean",
            Oracle::Monotone => "monotone",
            Oracle::Antimonotone => "antimonotone",
            Oracle::Tensor => "tensor",
            Oracle::CFree { .. } => "cfree",
            Oracle::QGaussian(_) => "q-gaussian",
        }
    }
}

/// An oracle bound to its marginals. The q-Gaussian oracle ignores them.
#[derive(Debug, Clone)]
pub struct OracleState {
    pub oracle: Oracle,
    pub mu1: JacobiData,
    pub mu2: JacobiData,
}

impl OracleState {
    pub fn new(oracle: Oracle, mu1: JacobiData, mu2: JacobiData) -> Self {
        OracleState { oracle, mu1, mu2 }
    }
}

impl MomentFunctional for OracleState {
    fn alphabet(&self) -> usize {
        2
    }

    fn moment(&self, w: &Word) -> Result<Rational, StateError> {
        let (a, b) = (&self.mu1, &self.mu2);
        Ok(match &self.oracle {
            Oracle::Free => free_moments(a, b, w)?,
            Oracle::Boolean => boolean_moments(a, b, w)?,
            Oracle::Monotone => monotone_moments(a, b, w)?,
            Oracle::Antimonotone => antimonotone_moments(a, b, w)?,
            Oracle::Tensor => tensor_moments(a, b, w)?,
            Oracle::CFree { nu1, nu2 } => cfree_moments(a, nu1, b, nu2, w)?,
            Oracle::QGaussian(q) => q_gaussian_moments(q, w),
        })
    }
}

/// Result of orthogonalizing monomials against lower degrees.
#[derive(Debug, Clone, Serialize)]
pub struct MopsReport {
    /// `Q_u`, monic with leading word `u`.
    #[serde(skip)]
    pub polys: BTreeMap<Word, NCPolynomial>,
    /// All `<Q_u, Q_v> = 0` for `u != v`.
    pub is_mops: bool,
    /// First non-orthogonal pair in graded-lex order, with its inner product.
    pub witness: Option<(Word, Word)>,
    #[serde(with = "opt_rational")]
    pub witness_value: Option<Rational>,
}

mod opt_rational {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&r.to_string()),
            None => s.serialize_none(),
        }
    }
}

/// `Q_u = x_u` minus its projection onto the span of all polynomials of
/// degree `< |u|`, for every `|u| <= depth`; zero-norm directions are left
/// out of the projection. Needs moments of length up to `2 depth`.
pub fn gram_schmidt_mops(
    phi: &dyn MomentFunctional,
    depth: usize,
) -> Result<MopsReport, StateError> {
    gram_schmidt_mops_ordered(phi, &Word::all_up_to(phi.alphabet() as u8, depth))
}

/// As [`gram_schmidt_mops`] over the given monomials, processed in the given
/// order after a stable sort by length. The witness is still the first
/// non-orthogonal pair in graded-lex order.
pub fn gram_schmidt_mops_ordered(
    phi: &dyn MomentFunctional,
    words: &[Word],
) -> Result<MopsReport, StateError> {
    let d = phi.alphabet();
    let mut words = words.to_vec();
    words.sort_by_key(Word::len);
    // Orthogonal basis of each degree filtration: (G, |G|^2), nonzero norms only.
    let mut basis: Vec<(usize, NCPolynomial, Rational)> = Vec::new();
    let project = |x: &NCPolynomial,
                   basis: &[(usize, NCPolynomial, Rational)],
                   below: usize|
     -> Result<NCPolynomial, StateError> {
        let mut r = x.clone();
        for (_, g, n) in basis.iter().filter(|(deg, _, _)| *deg < below) {
            let c = phi.inner(g, x)? / n;
            r = &r - &g.scale(&c);
        }
        Ok(r)
    };
    let mut polys = BTreeMap::new();
    for u in &words {
        let x = NCPolynomial::word(d, u.clone());
        let q = project(&x, &basis, u.len())?;
        // Sequential step, also against same-degree predecessors.
        let g = project(&x, &basis, usize::MAX)?;
        let n = phi.inner(&g, &g)?;
        if !n.is_zero() {
            basis.push((u.len(), g, n));
        }
        polys.insert(u.clone(), q);
    }
    let sorted: Vec<Word> = polys.keys().cloned().collect();
    for (i, u) in sorted.iter().enumerate() {
        for v in &sorted[i + 1..] {
            let ip = phi.inner(&polys[u], &polys[v])?;
            if !ip.is_zero() {
                return Ok(MopsReport {
                    polys,
                    is_mops: false,
                    witness: Some((u.clone(), v.clone())),
                    witness_value: Some(ip),
                });
            }
        }
    }
    Ok(MopsReport {
        polys,
        is_mops: true,
        witness: None,
        witness_value: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockFactorization {
    /// Monic one-variable factors, one per block, lowest degree first.
    Found(Vec<Vec<Rational>>),
    /// The forced coefficients do not multiply back to the polynomial.
    Impossible,
    /// Some coefficient could not be read off uniquely.
    Undetermined,
}

/// Decide whether `p = f_1(x_{l_1}) f_2(x_{l_2}) ...` with monic factors
/// whose letters and degrees follow the blocks of the leading word of `p`.
///
/// Every factor coefficient is forced by the coefficient of the word in
/// which only that block is lowered; the candidate is then multiplied out.
pub fn monic_block_factorization(p: &NCPolynomial) -> BlockFactorization {
    let Some((lead, c)) = p.leading_term() else {
        return BlockFactorization::Undetermined;
    };
    if !c.is_one() {
        return BlockFactorization::Impossible;
    }
    let pattern = lead.blocks();
    let m = pattern.len();
    let word_of = |t: &[usize]| {
        let blocks: Vec<(u8, usize)> = (0..m).map(|s| (pattern[s].0, t[s])).collect();
        Word::from_blocks(&blocks)
    };
    // All exponent tuples, grouped by the word they produce.
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for &(_, n) in &pattern {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..=n).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    let mut by_word: HashMap<Word, Vec<Vec<usize>>> = HashMap::new();
    for t in &tuples {
        by_word.entry(word_of(t)).or_default().push(t.clone());
    }
    let top: Vec<usize> = pattern.iter().map(|&(_, n)| n).collect();
    let mut known: HashMap<(usize, usize), Rational> = (0..m).map(|s| ((s, top[s]), Rational::one())).collect();
    let mut unknown: Vec<(usize, usize)> = (0..m).flat_map(|s| (0..top[s]).map(move |e| (s, e))).collect();
    // Nonconstant coefficients first, then constants.
    unknown.sort_by_key(|&(s, e)| (e == 0, std::cmp::Reverse(e), s));
    loop {
        let before = unknown.len();
        unknown.retain(|&(s, e)| {
            let mut target = top.clone();
            target[s] = e;
            let w = word_of(&target);
            let mut rest = Rational::zero();
            for t in &by_word[&w] {
                if *t == target {
                    continue;
                }
                let mut prod = Rational::one();
                for (r, &er) in t.iter().enumerate() {
                    match known.get(&(r, er)) {
                        Some(v) => prod *= v,
                        None => return true,
                    }
                }
                rest += prod;
            }
            known.insert((s, e), p.coefficient(&w) - rest);
            false
        });
        if unknown.is_empty() {
            break;
        }
        if unknown.len() == before {
            return BlockFactorization::Undetermined;
        }
    }
    let factors: Vec<Vec<Rational>> = (0..m)
        .map(|s| (0..=top[s]).map(|e| known[&(s, e)].clone()).collect())
        .collect();
    let mut prod = NCPolynomial::one(p.alphabet());
    for (s, f) in factors.iter().enumerate() {
        prod = &prod * &NCPolynomial::univariate(p.alphabet(), pattern[s].0, f);
    }
    if &prod == p {
        BlockFactorization::Found(factors)
    } else {
        BlockFactorization::Impossible
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn w<const N: usize>(v: [u8; N]) -> Word {
        Word::from(v)
    }

    fn sc() -> JacobiData {
        JacobiData::semicircle()
    }

    #[test]
    fn free_examples() {
        assert_eq!(free_moments(&sc(), &sc(), &w([1, 2, 2, 1])).unwrap(), int(1));
        assert_eq!(free_moments(&sc(), &sc(), &w([1, 2, 1, 2])).unwrap(), int(0));
        let a = JacobiData::new(vec![int(1), int(2)], vec![int(3)], Default::default()).unwrap();
        assert_eq!(free_moments(&a, &sc(), &w([1, 1, 1])).unwrap(), a.moment(3).unwrap());
        // phi[x1 x2 x1] = mu1[x^2] mu2[x] for free independence.
        let b = JacobiData::constant(int(5), int(1)).unwrap();
        assert_eq!(
            free_moments(&a, &b, &w([1, 2, 1])).unwrap(),
            a.moment(2).unwrap() * int(5)
        );
    }

    #[test]
    fn block_oracles() {
        let a = JacobiData::new(vec![int(1), int(2)], vec![int(3)], Default::default()).unwrap();
        let b = JacobiData::constant(ratio(1, 2), int(2)).unwrap();
        assert_eq!(boolean_moments(&sc(), &b, &w([1, 2, 1])).unwrap(), int(0));
        assert_eq!(
            boolean_moments(&a, &b, &w([1, 1, 2, 2])).unwrap(),
            a.moment(2).unwrap() * b.moment(2).unwrap()
        );
        assert_eq!(monotone_moments(&a, &b, &w([1, 2, 1])).unwrap(), a.moment(2).unwrap() * ratio(1, 2));
        assert_eq!(monotone_moments(&a, &b, &w([2, 1, 2])).unwrap(), int(1) * ratio(1, 4));
        assert_eq!(tensor_moments(&a, &b, &w([1, 2, 2, 1])).unwrap(), a.moment(2).unwrap() * b.moment(2).unwrap());
        assert_eq!(tensor_moments(&a, &b, &Word::empty()).unwrap(), int(1));
        assert_eq!(
            antimonotone_moments(&a, &b, &w([2, 1, 2])).unwrap(),
            b.moment(2).unwrap() * int(1)
        );
    }

    #[test]
    fn q_gaussian_examples() {
        let q = ratio(1, 2);
        assert_eq!(q_gaussian_moments(&q, &w([2, 1, 2, 1])), q);
        assert_eq!(q_gaussian_moments(&q, &w([1, 1, 1, 1])), ratio(5, 2));
        assert_eq!(q_gaussian_moments(&q, &w([1, 2])), int(0));
        let g = JacobiData::q_gaussian(&q).unwrap();
        for n in 0..=8 {
            assert_eq!(q_gaussian_moments(&q, &Word::run(1, n)), g.moment(n).unwrap(), "{n}");
        }
    }

    #[test]
    fn cfree_single_letter() {
        let a = JacobiData::new(vec![int(1), int(2)], vec![int(3)], Default::default()).unwrap();
        let z = JacobiData::point_mass(int(0));
        assert_eq!(cfree_moments(&a, &z, &sc(), &z, &w([1, 1, 1, 1])).unwrap(), a.moment(4).unwrap());
    }

    #[test]
    fn mops_on_q_gaussian() {
        let q = ratio(1, 2);
        let phi = OracleState::new(Oracle::QGaussian(q.clone()), sc(), sc());
        let r = gram_schmidt_mops(&phi, 3).unwrap();
        assert!(!r.is_mops);
        let x1 = NCPolynomial::var(2, 1);
        let x2 = NCPolynomial::var(2, 2);
        assert_eq!(r.polys[&w([1, 2, 1])], &(&(&x1 * &x2) * &x1) - &x2.scale(&q));
        assert_eq!(phi.inner(&r.polys[&w([1, 2])], &r.polys[&w([2, 1])]).unwrap(), q);
        assert_eq!(monic_block_factorization(&r.polys[&w([1, 2, 1])]), BlockFactorization::Impossible);
    }

    #[test]
    fn block_factorization_finds_products() {
        let f = NCPolynomial::univariate(2, 1, &[int(-1), int(0), int(1)]);
        let g = NCPolynomial::univariate(2, 2, &[ratio(1, 3), int(1)]);
        let h = NCPolynomial::univariate(2, 1, &[int(2), int(1)]);
        let p = &(&f * &g) * &h;
        assert_eq!(
            monic_block_factorization(&p),
            BlockFactorization::Found(vec![
                vec![int(-1), int(0), int(1)],
                vec![ratio(1, 3), int(1)],
                vec![int(2), int(1)]
            ])
        );
    }
}
