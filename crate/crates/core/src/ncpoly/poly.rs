use super::Word;
use crate::rational::{format_rational, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element of the free algebra `Q<x_1, ..., x_d>`.
///
/// Terms are kept in graded-lex order and zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NCPolynomial {
    alphabet: usize,
    terms: BTreeMap<Word, Rational>,
}

impl NCPolynomial {
    pub fn zero(alphabet: usize) -> Self {
        NCPolynomial {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: usize) -> Self {
        Self::constant(alphabet, Rational::one())
    }

    pub fn constant(alphabet: usize, c: Rational) -> Self {
        Self::monomial(alphabet, Word::empty(), c)
    }

    /// The generator `x_i`.
    pub fn var(alphabet: usize, i: u8) -> Self {
        Self::monomial(alphabet, Word::letter(i), Rational::one())
    }

    pub fn monomial(alphabet: usize, word: Word, c: Rational) -> Self {
        debug_assert!(word.max_letter() as usize <= alphabet);
        let mut p = Self::zero(alphabet);
        p.add_term(word, c);
        p
    }

    /// The monic monomial `x_w`.
    pub fn word(alphabet: usize, word: Word) -> Self {
        Self::monomial(alphabet, word, Rational::one())
    }

    /// `sum_k coeffs[k] x_i^k`.
    pub fn univariate(alphabet: usize, i: u8, coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(alphabet);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(Word::run(i, k), c.clone());
        }
        p
    }

    pub fn from_terms(alphabet: usize, terms: impl IntoIterator<Item = (Word, Rational)>) -> Self {
        let mut p = Self::zero(alphabet);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn add_term(&mut self, word: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(word);
        match slot {
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    /// Greatest word in graded-lex order with its coefficient.
    pub fn leading_term(&self) -> Option<(&Word, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Monic with leading word `w`.
    pub fn is_monic_with_leading(&self, w: &Word) -> bool {
        matches!(self.leading_term(), Some((lw, c)) if lw == w && c.is_one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.alphabet);
        }
        NCPolynomial {
            alphabet: self.alphabet,
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a * c))
                .collect(),
        }
    }

    /// The `*`-involution with self-adjoint generators: reverse every word.
    pub fn involution(&self) -> Self {
        NCPolynomial {
            alphabet: self.alphabet,
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.reversed(), a.clone()))
                .collect(),
        }
    }

    /// Polynomial of the same terms but in a larger alphabet.
    pub fn with_alphabet(&self, alphabet: usize) -> Self {
        assert!(self.terms.keys().all(|w| w.max_letter() as usize <= alphabet));
        NCPolynomial {
            alphabet,
            terms: self.terms.clone(),
        }
    }
}

impl Add for &NCPolynomial {
    type Output = NCPolynomial;
    fn add(self, rhs: &NCPolynomial) -> NCPolynomial {
        assert_eq!(self.alphabet, rhs.alphabet, "alphabet mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NCPolynomial {
    type Output = NCPolynomial;
    fn sub(self, rhs: &NCPolynomial) -> NCPolynomial {
        assert_eq!(self.alphabet, rhs.alphabet, "alphabet mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Mul for &NCPolynomial {
    type Output = NCPolynomial;
    fn mul(self, rhs: &NCPolynomial) -> NCPolynomial {
        assert_eq!(self.alphabet, rhs.alphabet, "alphabet mismatch");
        let mut out = NCPolynomial::zero(self.alphabet);
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

impl Neg for &NCPolynomial {
    type Output = NCPolynomial;
    fn neg(self) -> NCPolynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for NCPolynomial {
            type Output = NCPolynomial;
            fn $m(self, rhs: NCPolynomial) -> NCPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_monomial(w: &Word) -> String {
    w.blocks()
        .iter()
        .map(|&(l, n)| {
            if n == 1 {
                format!("x{l}")
            } else {
                format!("x{l}^{n}")
            }
        })
        .collect()
}

impl fmt::Display for NCPolynomial {
    /// Leading term first, e.g. `x1x2x1 - 1/2 x2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", fmt_monomial(w))?;
            } else {
                write!(f, "{} {}", format_rational(&mag), fmt_monomial(w))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPolynomial[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn x(i: u8) -> NCPolynomial {
        NCPolynomial::var(2, i)
    }

    #[test]
    fn multiplication_concatenates() {
        assert_eq!(&x(1) * &x(2), NCPolynomial::word(2, Word::from([1, 2])));
        let x1x2 = &x(1) * &x(2);
        assert_eq!(
            &x1x2 * &x(1),
            NCPolynomial::word(2, Word::from([1, 2, 1]))
        );
        let one = NCPolynomial::one(2);
        let diff = &(&x(1) - &one) * &(&x(1) + &one);
        let expected = &NCPolynomial::word(2, Word::from([1, 1])) - &one;
        assert_eq!(diff, expected);
    }

    #[test]
    fn involution_reverses_words() {
        let x1x2 = &x(1) * &x(2);
        assert_eq!(x1x2.involution(), &x(2) * &x(1));
        let p = &(&x(1) * &x(1)) + &x(2).scale(&int(3));
        assert_eq!(p.involution(), p);
        let pal = NCPolynomial::word(2, Word::from([1, 2, 1]));
        assert_eq!(pal.involution(), pal);
    }

    #[test]
    fn zero_has_no_degree() {
        let z = &x(1) - &x(1);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(x(2).degree(), Some(1));
    }

    #[test]
    fn display_leading_first() {
        let p = &NCPolynomial::word(2, Word::from([1, 2, 1])) - &x(2).scale(&ratio(1, 2));
        assert_eq!(p.to_string(), "x1x2x1 - 1/2 x2");
        let q = &NCPolynomial::word(2, Word::from([1, 1, 2])) + &NCPolynomial::one(2);
        assert_eq!(q.to_string(), "x1^2x2 + 1");
    }
}
