use super::{NCPolynomial, Word};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series is not invertible: constant term is {0}, expected 1")]
    ConstantTermNotOne(String),
}

/// A non-commutative power series in `z_1, ..., z_d` truncated at total
/// degree `order`. All arithmetic drops terms of length `> order`.
#[derive(Clone, PartialEq, Eq)]
pub struct NCSeries {
    alphabet: usize,
    order: usize,
    terms: BTreeMap<Word, Rational>,
}

impl NCSeries {
    pub fn zero(alphabet: usize, order: usize) -> Self {
        NCSeries {
            alphabet,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: usize, order: usize) -> Self {
        Self::constant(alphabet, order, Rational::one())
    }

    pub fn constant(alphabet: usize, order: usize, c: Rational) -> Self {
        let mut s = Self::zero(alphabet, order);
        s.add_term(Word::empty(), c);
        s
    }

    /// The indeterminate `z_i`.
    pub fn var(alphabet: usize, order: usize, i: u8) -> Self {
        let mut s = Self::zero(alphabet, order);
        s.add_term(Word::letter(i), Rational::one());
        s
    }

    pub fn from_polynomial(p: &NCPolynomial, order: usize) -> Self {
        let mut s = Self::zero(p.alphabet(), order);
        for (w, c) in p.terms() {
            s.add_term(w.clone(), c.clone());
        }
        s
    }

    pub fn from_terms(
        alphabet: usize,
        order: usize,
        terms: impl IntoIterator<Item = (Word, Rational)>,
    ) -> Self {
        let mut s = Self::zero(alphabet, order);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if w.len() > self.order || c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Word::empty())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-truncate at a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        NCSeries {
            alphabet: self.alphabet,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= order)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.alphabet, self.order);
        }
        NCSeries {
            alphabet: self.alphabet,
            order: self.order,
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    /// Homogeneous components indexed by degree `0..=order`.
    pub fn graded(&self) -> Vec<Vec<(&Word, &Rational)>> {
        let mut parts = vec![Vec::new(); self.order + 1];
        for (w, c) in &self.terms {
            parts[w.len()].push((w, c));
        }
        parts
    }

    /// Left-multiply every word by the letter `z_i`.
    pub fn left_var(&self, i: u8) -> Self {
        let mut out = Self::zero(self.alphabet, self.order);
        for (w, c) in &self.terms {
            out.add_term(w.prepend(i), c.clone());
        }
        out
    }

    /// `z_i * self * z_j`, truncated.
    pub fn sandwich(&self, i: u8, j: u8) -> Self {
        let mut out = Self::zero(self.alphabet, self.order);
        for (w, c) in &self.terms {
            if w.len() + 2 <= self.order {
                out.add_term(w.prepend(i).concat(&Word::letter(j)), c.clone());
            }
        }
        out
    }

    /// `z_i * self * z_j` as a series of order `order`; sound when
    /// `order <= self.order() + 2`.
    pub fn sandwich_to(&self, i: u8, j: u8, order: usize) -> Self {
        debug_assert!(order <= self.order + 2);
        let mut out = Self::zero(self.alphabet, order);
        for (w, c) in &self.terms {
            out.add_term(w.prepend(i).concat(&Word::letter(j)), c.clone());
        }
        out
    }

    /// The inverse `t` with `s t = t s = 1` modulo terms above the order.
    ///
    /// Built degree by degree from `t = 1 + (1 - s) t`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(SeriesError::ConstantTermNotOne(c0.to_string()));
        }
        let residual = &Self::one(self.alphabet, self.order) - self;
        let r = residual.graded();
        let mut t_parts: Vec<BTreeMap<Word, Rational>> = vec![BTreeMap::new(); self.order + 1];
        t_parts[0].insert(Word::empty(), Rational::one());
        for n in 1..=self.order {
            let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
            for m in 1..=n {
                for &(rw, rc) in &r[m] {
                    for (tw, tc) in &t_parts[n - m] {
                        *acc.entry(rw.concat(tw)).or_insert_with(Rational::zero) += rc * tc;
                    }
                }
            }
            acc.retain(|_, c| !c.is_zero());
            t_parts[n] = acc;
        }
        Ok(NCSeries {
            alphabet: self.alphabet,
            order: self.order,
            terms: t_parts.into_iter().flatten().collect(),
        })
    }
}

impl Add for &NCSeries {
    type Output = NCSeries;
    fn add(self, rhs: &NCSeries) -> NCSeries {
        assert_eq!(self.alphabet, rhs.alphabet, "alphabet mismatch");
        let mut out = NCSeries::zero(self.alphabet, self.order.min(rhs.order));
        for (w, c) in self.terms.iter().chain(rhs.terms.iter()) {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NCSeries {
    type Output = NCSeries;
    fn sub(self, rhs: &NCSeries) -> NCSeries {
        self + &(-rhs)
    }
}

impl Neg for &NCSeries {
    type Output = NCSeries;
    fn neg(self) -> NCSeries {
        self.scale(&-Rational::one())
    }
}

impl Mul for &NCSeries {
    type Output = NCSeries;
    fn mul(self, rhs: &NCSeries) -> NCSeries {
        assert_eq!(self.alphabet, rhs.alphabet, "alphabet mismatch");
        let order = self.order.min(rhs.order);
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                if u.len() + v.len() <= order {
                    *acc.entry(u.concat(v)).or_insert_with(Rational::zero) += a * b;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        NCSeries {
            alphabet: self.alphabet,
            order,
            terms: acc,
        }
    }
}

impl std::fmt::Debug for NCSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(w, c)| (w, c.to_string())))
            .finish()
    }
}
