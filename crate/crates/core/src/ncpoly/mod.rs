//! Free-algebra arithmetic: words, non-commutative polynomials and
//! degree-truncated non-commutative power series.

mod poly;
mod series;
mod word;

pub use poly::NCPolynomial;
pub use series::{NCSeries, SeriesError};
pub use word::Word;

/// All right-suffixes of `u`, longest first.
pub fn word_postfixes(u: &Word) -> Vec<Word> {
    u.postfixes()
}
