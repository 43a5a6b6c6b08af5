use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// A word over the alphabet `{1, ..., d}`, stored leftmost letter first.
///
/// Words index monomials `x_{u(1)} x_{u(2)} ... x_{u(n)}`, nodes of the
/// `d`-ary tree and basis polynomials. The tree grows on the left: the
/// parent of `(i, u)` is `u`, and a postfix is always a right-suffix.
///
/// Ordering is graded-lexicographic: shorter words first, then
/// lexicographic with `1 < 2 < ...`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&l| l >= 1), "letters start at 1");
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u8) -> Self {
        Word(vec![i])
    }

    /// The constant word `i^n`.
    pub fn run(i: u8, n: usize) -> Self {
        Word(vec![i; n])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `u(1)`, the leftmost letter.
    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    /// `(u(2), ..., u(n))`; the parent node in the tree.
    pub fn tail(&self) -> Word {
        Word(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    /// `(i, u)`.
    pub fn prepend(&self, i: u8) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Right-suffix of length `len`.
    pub fn suffix(&self, len: usize) -> Word {
        Word(self.0[self.0.len() - len..].to_vec())
    }

    /// All right-suffixes, longest first, ending with the empty word.
    pub fn postfixes(&self) -> Vec<Word> {
        (0..=self.0.len()).rev().map(|l| self.suffix(l)).collect()
    }

    /// Length `k` of the leading run of letter `i`, so that `u = i^k v` with
    /// `v(1) != i`.
    pub fn leading_run(&self, i: u8) -> usize {
        self.0.iter().take_while(|&&l| l == i).count()
    }

    /// Maximal constant blocks as `(letter, length)`, left to right.
    pub fn blocks(&self) -> Vec<(u8, usize)> {
        let mut out: Vec<(u8, usize)> = Vec::new();
        for &l in &self.0 {
            match out.last_mut() {
                Some((last, n)) if *last == l => *n += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    pub fn from_blocks(blocks: &[(u8, usize)]) -> Word {
        let mut v = Vec::new();
        for &(l, n) in blocks {
            v.extend(std::iter::repeat_n(l, n));
        }
        Word(v)
    }

    pub fn max_letter(&self) -> u8 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Apply a letter substitution.
    pub fn relabel(&self, f: impl Fn(u8) -> u8) -> Word {
        Word(self.0.iter().map(|&l| f(l)).collect())
    }

    /// Every word of length exactly `len` over `{1..d}`, in lexicographic order.
    pub fn all_of_length(d: u8, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (1..=d).map(move |l| {
                        let mut v = w.0.clone();
                        v.push(l);
                        Word(v)
                    })
                })
                .collect();
        }
        out
    }

    /// Every word of length `<= max_len` over `{1..d}`, graded-lex.
    pub fn all_up_to(d: u8, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| Word::all_of_length(d, l)).collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word::new(v)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word::new(v.to_vec())
    }
}

impl<const N: usize> From<[u8; N]> for Word {
    fn from(v: [u8; N]) -> Self {
        Word::new(v.to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn postfixes_are_right_suffixes() {
        let w = Word::from([1, 2, 1]);
        assert_eq!(
            w.postfixes(),
            vec![
                Word::from([1, 2, 1]),
                Word::from([2, 1]),
                Word::from([1]),
                Word::empty()
            ]
        );
        assert_eq!(Word::empty().postfixes(), vec![Word::empty()]);
        assert_eq!(
            Word::from([2, 2]).postfixes(),
            vec![Word::from([2, 2]), Word::from([2]), Word::empty()]
        );
    }

    #[test]
    fn graded_lex_order() {
        let mut ws = vec![
            Word::from([2]),
            Word::from([1, 2]),
            Word::empty(),
            Word::from([1]),
            Word::from([1, 1]),
        ];
        ws.sort();
        assert_eq!(
            ws,
            vec![
                Word::empty(),
                Word::from([1]),
                Word::from([2]),
                Word::from([1, 1]),
                Word::from([1, 2])
            ]
        );
    }

    #[test]
    fn blocks_and_runs() {
        let w = Word::from([1, 1, 2, 1]);
        assert_eq!(w.blocks(), vec![(1, 2), (2, 1), (1, 1)]);
        assert_eq!(Word::from_blocks(&w.blocks()), w);
        assert_eq!(w.leading_run(1), 2);
        assert_eq!(w.leading_run(2), 0);
        assert_eq!(w.tail(), Word::from([1, 2, 1]));
        assert_eq!(w.prepend(2), Word::from([2, 1, 1, 2, 1]));
    }

    #[test]
    fn word_counts() {
        for k in 0..8 {
            assert_eq!(Word::all_of_length(2, k).len(), 1 << k);
        }
        assert_eq!(Word::all_up_to(2, 3).len(), 15);
    }
}
