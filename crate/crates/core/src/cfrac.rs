//! Continued-fraction expansions of moment generating functions.
//!
//! All engines return a truncated [`NCSeries`] whose coefficient at `z_w`
//! is the moment of `x_w`.

use crate::jacobi::{JacobiData, JacobiError};
use crate::ncpoly::{NCSeries, SeriesError, Word};
use crate::prodstate::{CoefficientMap, StateError};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CfracError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("C matrix at level {level} is not diagonal non-negative")]
    BadC { level: usize },
    #[error("order {order} needs {needed} levels, only {levels} given")]
    TooFewLevels {
        order: usize,
        needed: usize,
        levels: usize,
    },
}

/// `1 / (1 - beta_0 z - gamma_1 z^2 / (1 - beta_1 z - ...))` to order `n`,
/// as a one-letter series.
pub fn classical_cf(j: &JacobiData, n: usize) -> Result<NCSeries, CfracError> {
    fn level(j: &JacobiData, k: usize, order: usize) -> Result<NCSeries, CfracError> {
        let mut d = NCSeries::one(1, order);
        if order == 0 {
            return Ok(d);
        }
        d = &d - &NCSeries::var(1, order, 1).scale(&j.beta(k)?);
        if order >= 2 {
            let g = j.gamma(k + 1)?;
            if !g.is_zero() {
                let inner = level(j, k + 1, order - 2)?;
                d = &d - &inner.sandwich_to(1, 1, order).scale(&g);
            }
        }
        Ok(d.inverse()?)
    }
    level(j, 0, n)
}

/// `F_u` of the branched fraction, to the given order.
fn branch(cm: &CoefficientMap, u: &Word, order: usize) -> Result<NCSeries, CfracError> {
    let d = cm.alphabet();
    let mut den = NCSeries::one(d, order);
    if order == 0 {
        return Ok(den);
    }
    let too_deep = |w: &Word| StateError::DepthExhausted {
        word: w.clone(),
        depth: cm.depth(),
    };
    if u.len() > cm.depth() {
        return Err(too_deep(u).into());
    }
    for i in 1..=d as u8 {
        den = &den - &NCSeries::var(d, order, i).scale(&cm.b(i, u));
    }
    if order >= 2 {
        for j in 1..=d as u8 {
            let child = u.prepend(j);
            if child.len() > cm.depth() {
                return Err(too_deep(&child).into());
            }
            let c = cm.c(&child);
            if c.is_zero() {
                continue;
            }
            let f = branch(cm, &child, order - 2)?;
            den = &den - &f.sandwich_to(j, j, order).scale(&c);
        }
    }
    Ok(den.inverse()?)
}

/// The scalar branched fraction over the tree of words: node `u` has
/// denominator `1 - sum_i B(i,u) z_i - sum_j C((j,u)) z_j F_{(j,u)} z_j`,
/// `F_u` is its inverse, and the series is `F_()`.
pub fn scalar_branched_cf(cm: &CoefficientMap, n: usize) -> Result<NCSeries, CfracError> {
    branch(cm, &Word::empty(), n)
}

/// One node of the branched fraction, for inspection and printing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchNode {
    pub word: Word,
    /// Nonzero `B(i, u)` as `(i, value)`.
    pub linear: Vec<(u8, Rational)>,
    /// Nonzero `C((j, u))` as `(j, value, subtree)`.
    pub children: Vec<(u8, Rational, BranchNode)>,
}

/// The fraction's structure down to words of length `levels`.
///
/// With semicircle marginals every `beta` vanishes and every `gamma` is 1,
/// so only the branching differs between products:
///
/// ```
/// use ncmops::cfrac::branched_structure;
/// use ncmops::jacobi::JacobiData;
/// use ncmops::omega::OmegaTree;
/// use ncmops::prodstate::CoefficientMap;
///
/// let s = JacobiData::semicircle();
/// let render = |name: &str| {
///     let omega = OmegaTree::builtin(name, 3).unwrap();
///     branched_structure(&CoefficientMap::product_type(&omega, &s, &s).unwrap(), 1).render()
/// };
/// let top = "F() = 1 / (1 - 1 z1 F(1) z1 - 1 z2 F(2) z2)\n";
/// assert_eq!(
///     render("free"),
///     format!("{top}  F(1) = 1 / (1)\n  F(2) = 1 / (1)\n")
/// );
/// let boolean = branched_structure(
///     &CoefficientMap::product_type(&OmegaTree::builtin("boolean", 3).unwrap(), &s, &s).unwrap(),
///     2,
/// );
/// assert_eq!(boolean.child(1).unwrap().2.children.len(), 1);
/// let monotone = branched_structure(
///     &CoefficientMap::product_type(&OmegaTree::builtin("monotone", 3).unwrap(), &s, &s).unwrap(),
///     2,
/// );
/// assert_eq!(monotone.child(1).unwrap().2.children.len(), 2);
/// assert_eq!(monotone.child(2).unwrap().2.children.len(), 1);
/// ```
pub fn branched_structure(cm: &CoefficientMap, levels: usize) -> BranchNode {
    fn go(cm: &CoefficientMap, u: Word, levels: usize) -> BranchNode {
        let d = cm.alphabet() as u8;
        let linear = (1..=d)
            .map(|i| (i, cm.b(i, &u)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let mut children = Vec::new();
        if u.len() < levels.min(cm.depth()) {
            for j in 1..=d {
                let w = u.prepend(j);
                let c = cm.c(&w);
                if !c.is_zero() {
                    children.push((j, c, go(cm, w, levels)));
                }
            }
        }
        BranchNode {
            word: u,
            linear,
            children,
        }
    }
    go(cm, Word::empty(), levels)
}

impl BranchNode {
    pub fn child(&self, j: u8) -> Option<&(u8, Rational, BranchNode)> {
        self.children.iter().find(|(l, _, _)| *l == j)
    }

    /// Indented text, one node per line:
    ///
    /// ```text
    /// F() = 1 / (1 - 1/2 z1 - 2 z1 F(1) z1 - 1 z2 F(2) z2)
    ///   F(1) = 1 / (1 - ...)
    /// ```
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        let mut terms = String::from("1");
        for (i, b) in &self.linear {
            let _ = write!(terms, " - {b} z{i}");
        }
        for (j, c, node) in &self.children {
            let _ = write!(terms, " - {c} z{j} F{} z{j}", node.word);
        }
        let _ = writeln!(out, "{:indent$}F{} = 1 / ({terms})", "", self.word, indent = indent);
        for (_, _, node) in &self.children {
            node.render_into(out, indent + 2);
        }
    }
}

/// Square rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub n: usize,
    pub data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(n: usize) -> Self {
        RatMatrix {
            n,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![Rational::one(); n])
    }

    pub fn diagonal(diag: Vec<Rational>) -> Self {
        let n = diag.len();
        let mut m = Self::zero(n);
        for (k, v) in diag.into_iter().enumerate() {
            m.data[k * n + k] = v;
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.n + c] = v;
    }

    fn is_diagonal_nonnegative(&self) -> bool {
        (0..self.n).all(|r| {
            (0..self.n).all(|c| {
                let v = self.get(r, c);
                if r == c {
                    *v >= Rational::zero()
                } else {
                    v.is_zero()
                }
            })
        })
    }
}

/// Square matrix of series over `d` letters, all entries of one order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    pub n: usize,
    pub entries: Vec<NCSeries>,
}

impl SeriesMatrix {
    pub fn zero(d: usize, n: usize, order: usize) -> Self {
        SeriesMatrix {
            n,
            entries: vec![NCSeries::zero(d, order); n * n],
        }
    }

    pub fn identity(d: usize, n: usize, order: usize) -> Self {
        let mut m = Self::zero(d, n, order);
        for k in 0..n {
            m.entries[k * n + k] = NCSeries::one(d, order);
        }
        m
    }

    pub fn from_rational(d: usize, order: usize, a: &RatMatrix) -> Self {
        SeriesMatrix {
            n: a.n,
            entries: a.data.iter().map(|v| NCSeries::constant(d, order, v.clone())).collect(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &NCSeries {
        &self.entries[r * self.n + c]
    }

    fn map(&self, f: impl Fn(&NCSeries) -> NCSeries) -> Self {
        SeriesMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, o: &SeriesMatrix) -> Self {
        SeriesMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &SeriesMatrix) -> Self {
        SeriesMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, o: &SeriesMatrix) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = self.get(r, 0) * o.get(0, c);
                for k in 1..n {
                    acc = &acc + &(self.get(r, k) * o.get(k, c));
                }
                entries.push(acc);
            }
        }
        SeriesMatrix { n, entries }
    }

    /// `A^{-1}` for `A = I - R`, `R` without constant term, degree by
    /// degree: `T_n = sum_{m=1}^{n} R_m T_{n-m}`.
    pub fn inverse(&self) -> Result<Self, CfracError> {
        let n = self.n;
        let Some(first) = self.entries.first() else {
            return Ok(self.clone());
        };
        let (d, order) = (first.alphabet(), first.order());
        for r in 0..n {
            for c in 0..n {
                let want = if r == c { Rational::one() } else { Rational::zero() };
                if self.get(r, c).constant_term() != want {
                    return Err(SeriesError::ConstantTermNotOne(format!("entry ({r},{c})")).into());
                }
            }
        }
        let residual = SeriesMatrix::identity(d, n, order).sub(self);
        let homogeneous = |m: &SeriesMatrix, deg: usize| {
            m.map(|s| NCSeries::from_terms(d, order, s.terms().filter(|(w, _)| w.len() == deg).map(|(w, c)| (w.clone(), c.clone()))))
        };
        let r_parts: Vec<SeriesMatrix> = (0..=order).map(|m| homogeneous(&residual, m)).collect();
        let mut t_parts = vec![SeriesMatrix::identity(d, n, order)];
        for deg in 1..=order {
            let mut acc = SeriesMatrix::zero(d, n, order);
            for m in 1..=deg {
                acc = acc.add(&r_parts[m].mul(&t_parts[deg - m]));
            }
            t_parts.push(acc);
        }
        Ok(t_parts
            .iter()
            .skip(1)
            .fold(t_parts[0].clone(), |a, b| a.add(b)))
    }
}

/// Rows and columns `(i-1) d^{k-1} .. i d^{k-1}` against `(j-1) d^{k-1} ..`:
/// the `(i, j)` block when the leading letter is the most significant index.
pub fn block_extract(a: &SeriesMatrix, d: usize, i: u8, j: u8) -> Result<SeriesMatrix, CfracError> {
    if d == 0 || !a.n.is_multiple_of(d) || a.n == 0 || i == 0 || j == 0 || i as usize > d || j as usize > d {
        return Err(CfracError::Dimension(format!("{}x{} matrix, d = {d}, block ({i},{j})", a.n, a.n)));
    }
    let m = a.n / d;
    let (r0, c0) = ((i as usize - 1) * m, (j as usize - 1) * m);
    let mut entries = Vec::with_capacity(m * m);
    for r in 0..m {
        for c in 0..m {
            entries.push(a.get(r0 + r, c0 + c).clone());
        }
    }
    Ok(SeriesMatrix { n: m, entries })
}

/// Level data `T_i^{(k)}`, `C^{(k)}` for `k = 0..=K`, matrices of size `d^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatricialData {
    d: usize,
    /// `t[k][i - 1]`.
    t: Vec<Vec<RatMatrix>>,
    c: Vec<RatMatrix>,
}

/// Index of a level-`|u|` basis vector, `u(1)` most significant.
pub fn word_index(d: usize, u: &Word) -> usize {
    u.letters().iter().fold(0, |acc, &l| acc * d + (l as usize - 1))
}

impl MatricialData {
    pub fn new(d: usize, t: Vec<Vec<RatMatrix>>, c: Vec<RatMatrix>) -> Result<Self, CfracError> {
        if t.len() != c.len() || t.is_empty() {
            return Err(CfracError::Dimension("T and C need the same nonzero number of levels".into()));
        }
        for (k, (tk, ck)) in t.iter().zip(&c).enumerate() {
            let size = d.pow(k as u32);
            if tk.len() != d || tk.iter().any(|m| m.n != size || m.data.len() != size * size) || ck.n != size {
                return Err(CfracError::Dimension(format!("level {k} must hold {d} matrices of size {size}")));
            }
            if !ck.is_diagonal_nonnegative() {
                return Err(CfracError::BadC { level: k });
            }
        }
        Ok(MatricialData { d, t, c })
    }

    /// Diagonal data of a coefficient map: `T_i^{(k)}[u,u] = B(i,u)`,
    /// `C^{(k)}[u,u] = C(u)` for `|u| = k <= levels`.
    pub fn from_map(cm: &CoefficientMap, levels: usize) -> Result<Self, CfracError> {
        if levels > cm.depth() {
            return Err(StateError::DepthExhausted {
                word: Word::run(1, levels),
                depth: cm.depth(),
            }
            .into());
        }
        let d = cm.alphabet();
        let mut t = Vec::new();
        let mut c = Vec::new();
        for k in 0..=levels {
            let words = Word::all_of_length(d as u8, k);
            t.push(
                (1..=d as u8)
                    .map(|i| RatMatrix::diagonal(words.iter().map(|u| cm.b(i, u)).collect()))
                    .collect(),
            );
            c.push(RatMatrix::diagonal(words.iter().map(|u| cm.c(u)).collect()));
        }
        Self::new(d, t, c)
    }

    /// Levels `0..=K`, so the top level index is `K`.
    pub fn levels(&self) -> usize {
        self.t.len() - 1
    }

    pub fn alphabet(&self) -> usize {
        self.d
    }
}

/// Bottom-up evaluation with `F = I` at the top level `K`. Level `k` is kept
/// to order `n - 2k`; the result is exact for `n <= 2K`.
pub fn matricial_cf(md: &MatricialData, n: usize) -> Result<NCSeries, CfracError> {
    let d = md.d;
    let top = md.levels();
    if n > 2 * top {
        return Err(CfracError::TooFewLevels {
            order: n,
            needed: n.div_ceil(2),
            levels: top,
        });
    }
    // F at level k + 1, as a matrix of order n - 2(k + 1).
    let mut above: Option<SeriesMatrix> = None;
    for k in (0..top).rev() {
        let order = n.saturating_sub(2 * k);
        let size = d.pow(k as u32);
        let mut den = SeriesMatrix::identity(d, size, order);
        for i in 1..=d as u8 {
            let zt = SeriesMatrix::from_rational(d, order, &md.t[k][i as usize - 1]).map(|s| s.left_var(i));
            den = den.sub(&zt);
        }
        if order >= 2 {
            let inner_order = order - 2;
            let f = match &above {
                Some(f) => f.clone(),
                None => SeriesMatrix::identity(d, d * size, inner_order),
            };
            let cf = SeriesMatrix::from_rational(d, inner_order, &md.c[k + 1]).mul(&f);
            for j in 1..=d as u8 {
                for l in 1..=d as u8 {
                    let blk = block_extract(&cf, d, j, l)?;
                    den = den.sub(&blk.map(|s| s.sandwich_to(j, l, order)));
                }
            }
        }
        above = Some(den.inverse()?);
    }
    match above {
        Some(f) => Ok(f.get(0, 0).clone()),
        None => Ok(NCSeries::one(d, n)),
    }
}
