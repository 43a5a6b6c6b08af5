//! One-variable states given by Jacobi parameters.
//!
//! A state `mu` on `Q[x]` is encoded by the coefficients of the three-term
//! recursion of its monic orthogonal polynomials,
//!
//! ```text
//! x P_n(x) = P_{n+1}(x) + beta_n P_n(x) + gamma_n P_{n-1}(x),   gamma_0 = 0.
//! ```
//!
//! Only a finite prefix of each sequence is stored; an [`Extension`] policy
//! answers queries past it.

use crate::ncpoly::NCPolynomial;
use crate::rational::{self, int, parse_rational, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Stored prefix length for presets whose parameters are not eventually constant.
pub const GENERATED_PREFIX: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    /// Repeat the last stored value (an empty prefix extends as zero).
    #[default]
    #[serde(alias = "repeat-last")]
    Repeat,
    Zero,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JacobiError {
    #[error("gamma_{index} is negative")]
    NegativeGamma { index: usize },
    #[error("gamma_{index} is nonzero after an earlier zero (finite support must stay finite)")]
    GammaRevived { index: usize },
    #[error("{param}_{index} is past the stored prefix")]
    OutOfRange { param: &'static str, index: usize },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("invalid preset parameter: {0}")]
    InvalidParameter(String),
}

/// Jacobi parameters `(beta_0, beta_1, ...)`, `(gamma_1, gamma_2, ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiData {
    beta: Vec<Rational>,
    gamma: Vec<Rational>,
    extend: Extension,
}

impl JacobiData {
    /// `gamma[0]` is `gamma_1`.
    pub fn new(
        beta: Vec<Rational>,
        gamma: Vec<Rational>,
        extend: Extension,
    ) -> Result<Self, JacobiError> {
        let mut seen_zero = false;
        for (k, g) in gamma.iter().enumerate() {
            if g.is_negative() {
                return Err(JacobiError::NegativeGamma { index: k + 1 });
            }
            if seen_zero && !g.is_zero() {
                return Err(JacobiError::GammaRevived { index: k + 1 });
            }
            seen_zero |= g.is_zero();
        }
        Ok(JacobiData {
            beta,
            gamma,
            extend,
        })
    }

    /// Constant parameters `beta == b`, `gamma == g`.
    pub fn constant(b: Rational, g: Rational) -> Result<Self, JacobiError> {
        Self::new(vec![b], vec![g], Extension::Repeat)
    }

    pub fn extension(&self) -> Extension {
        self.extend
    }

    pub fn stored_beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn stored_gamma(&self) -> &[Rational] {
        &self.gamma
    }

    fn lookup(
        &self,
        seq: &[Rational],
        idx: usize,
        param: &'static str,
        index: usize,
    ) -> Result<Rational, JacobiError> {
        if let Some(v) = seq.get(idx) {
            return Ok(v.clone());
        }
        match self.extend {
            Extension::Repeat => Ok(seq.last().cloned().unwrap_or_else(Rational::zero)),
            Extension::Zero => Ok(Rational::zero()),
            Extension::Error => Err(JacobiError::OutOfRange { param, index }),
        }
    }

    pub fn beta(&self, n: usize) -> Result<Rational, JacobiError> {
        self.lookup(&self.beta, n, "beta", n)
    }

    /// `gamma_0 = 0` by convention.
    pub fn gamma(&self, n: usize) -> Result<Rational, JacobiError> {
        if n == 0 {
            return Ok(Rational::zero());
        }
        self.lookup(&self.gamma, n - 1, "gamma", n)
    }

    /// Number of support points when finite: the least `n >= 1` with
    /// `gamma_n = 0`. `None` when no zero is reachable from the stored data.
    pub fn support_size(&self) -> Option<usize> {
        if let Some(k) = self.gamma.iter().position(Zero::is_zero) {
            return Some(k + 1);
        }
        match self.extend {
            Extension::Zero => Some(self.gamma.len() + 1),
            Extension::Repeat if self.gamma.is_empty() => Some(1),
            _ => None,
        }
    }

    /// `gamma_1, ..., gamma_depth` all positive.
    pub fn is_faithful_to(&self, depth: usize) -> bool {
        match self.support_size() {
            Some(s) => s > depth,
            None => true,
        }
    }

    /// Coefficients (constant first) of the monic orthogonal polynomial `P_n`.
    pub fn op_coefficients(&self, n: usize) -> Result<Vec<Rational>, JacobiError> {
        let mut prev: Vec<Rational> = Vec::new();
        let mut cur = vec![Rational::one()];
        for k in 0..n {
            let b = self.beta(k)?;
            let g = self.gamma(k)?;
            let mut next = vec![Rational::zero(); k + 2];
            for (d, c) in cur.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= &b * c;
            }
            for (d, c) in prev.iter().enumerate() {
                next[d] -= &g * c;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(cur)
    }

    /// `P_n(x_i)` inside the free algebra on `alphabet` generators.
    pub fn op_polynomial(
        &self,
        alphabet: usize,
        letter: u8,
        n: usize,
    ) -> Result<NCPolynomial, JacobiError> {
        Ok(NCPolynomial::univariate(
            alphabet,
            letter,
            &self.op_coefficients(n)?,
        ))
    }

    /// `mu[x^n]`: expand `x^n` in the orthogonal basis through the recursion
    /// and read off the `P_0` coefficient.
    pub fn moment(&self, n: usize) -> Result<Rational, JacobiError> {
        // coefficient vector over P_0..P_k; components above the remaining
        // step count can never return to P_0 and are dropped.
        let mut v = vec![Rational::one()];
        for step in 0..n {
            let remaining = n - step - 1;
            let top = (v.len() + 1).min(remaining + 1);
            let mut next = vec![Rational::zero(); top];
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if k + 1 < top {
                    next[k + 1] += c;
                }
                if k < top {
                    next[k] += &self.beta(k)? * c;
                }
                if k >= 1 && k - 1 < top {
                    next[k - 1] += &self.gamma(k)? * c;
                }
            }
            v = next;
        }
        Ok(v.into_iter().next().unwrap_or_else(Rational::zero))
    }

    /// `mu[x^0], ..., mu[x^n]`.
    pub fn moments(&self, n: usize) -> Result<Vec<Rational>, JacobiError> {
        (0..=n).map(|k| self.moment(k)).collect()
    }

    /// `mu[f]` for `f` given by coefficients, constant first.
    pub fn apply(&self, coeffs: &[Rational]) -> Result<Rational, JacobiError> {
        let mut acc = Rational::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * self.moment(k)?;
            }
        }
        Ok(acc)
    }

    // Presets.

    /// Standard semicircle: `beta == 0`, `gamma == 1`.
    pub fn semicircle() -> Self {
        Self::constant(Rational::zero(), Rational::one()).expect("valid")
    }

    /// Dirac mass at `c`: `beta == c`, `gamma == 0`.
    pub fn point_mass(c: Rational) -> Self {
        Self::constant(c, Rational::zero()).expect("valid")
    }

    /// q-Gaussian with `gamma_n = (1 - q^n) / (1 - q)`, `beta == 0`.
    /// `q = 1` is the separate [`JacobiData::gaussian`] preset.
    pub fn q_gaussian(q: &Rational) -> Result<Self, JacobiError> {
        if q.is_one() {
            return Err(JacobiError::InvalidParameter(
                "q = 1 divides by zero; use the gaussian preset".into(),
            ));
        }
        if q.abs() > Rational::one() {
            return Err(JacobiError::InvalidParameter(format!(
                "q = {q} outside [-1, 1]"
            )));
        }
        let one = Rational::one();
        let gamma = (1..=GENERATED_PREFIX)
            .map(|n| (&one - rational::pow(q, n)) / (&one - q))
            .collect();
        Self::new(vec![Rational::zero()], gamma, Extension::Error)
            .map(|j| j.with_beta_repeat(GENERATED_PREFIX))
    }

    /// Standard Gaussian, the `q -> 1` limit: `gamma_n = n`.
    pub fn gaussian() -> Self {
        let gamma = (1..=GENERATED_PREFIX as i64).map(int).collect();
        Self::new(vec![Rational::zero()], gamma, Extension::Error)
            .expect("valid")
            .with_beta_repeat(GENERATED_PREFIX)
    }

    /// Two-point law `p delta_a + (1 - p) delta_b`.
    pub fn bernoulli(p: &Rational, a: &Rational, b: &Rational) -> Result<Self, JacobiError> {
        if p.is_negative() || p > &Rational::one() {
            return Err(JacobiError::InvalidParameter(format!(
                "p = {p} outside [0, 1]"
            )));
        }
        let q = Rational::one() - p;
        let mean = p * a + &q * b;
        let diff = a - b;
        let g1 = p * &q * &diff * &diff;
        let b1 = a + b - &mean;
        Self::new(vec![mean, b1], vec![g1, Rational::zero()], Extension::Repeat)
    }

    // beta stored explicitly up to `len` so the Error policy covers it.
    fn with_beta_repeat(mut self, len: usize) -> Self {
        let b = self.beta.first().cloned().unwrap_or_else(Rational::zero);
        self.beta = vec![b; len];
        self
    }

    /// Look up a named preset. `params` are only read where relevant.
    pub fn preset(name: &str, params: &PresetParams) -> Result<Self, JacobiError> {
        let need = |v: &Option<Rational>, what: &str| {
            v.clone().ok_or_else(|| {
                JacobiError::InvalidParameter(format!("preset {name:?} needs {what:?}"))
            })
        };
        match name {
            "semicircle" => Ok(Self::semicircle()),
            "q-gaussian" => Self::q_gaussian(&need(&params.q, "q")?),
            "gaussian" => Ok(Self::gaussian()),
            "point-mass" => Ok(Self::point_mass(need(&params.c, "c")?)),
            "bernoulli" => Self::bernoulli(
                &need(&params.p, "p")?,
                &need(&params.a, "a")?,
                &need(&params.b, "b")?,
            ),
            "custom" => Self::new(
                params.beta.clone().unwrap_or_default(),
                params.gamma.clone().unwrap_or_default(),
                params.extend.unwrap_or_default(),
            ),
            other => Err(JacobiError::UnknownPreset(other.to_string())),
        }
    }
}

/// Parameters for [`JacobiData::preset`].
#[derive(Debug, Clone, Default)]
pub struct PresetParams {
    pub q: Option<Rational>,
    pub c: Option<Rational>,
    pub p: Option<Rational>,
    pub a: Option<Rational>,
    pub b: Option<Rational>,
    pub beta: Option<Vec<Rational>>,
    pub gamma: Option<Vec<Rational>>,
    pub extend: Option<Extension>,
}

/// JSON form: either explicit sequences or a preset reference.
///
/// ```json
/// {"beta": ["0", "0"], "gamma": ["1", "1"], "extend": "repeat"}
/// {"preset": "q-gaussian", "q": "1/2"}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JacobiSpec {
    Preset {
        preset: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<String>,
    },
    Explicit {
        #[serde(with = "rational::vec_as_string")]
        beta: Vec<Rational>,
        #[serde(with = "rational::vec_as_string")]
        gamma: Vec<Rational>,
        #[serde(default)]
        extend: Extension,
    },
}

impl JacobiSpec {
    pub fn build(&self) -> Result<JacobiData, JacobiError> {
        match self {
            JacobiSpec::Explicit {
                beta,
                gamma,
                extend,
            } => JacobiData::new(beta.clone(), gamma.clone(), *extend),
            JacobiSpec::Preset {
                preset,
                q,
                c,
                p,
                a,
                b,
            } => {
                let parse = |v: &Option<String>| -> Result<Option<Rational>, JacobiError> {
                    v.as_deref()
                        .map(parse_rational)
                        .transpose()
                        .map_err(|e| JacobiError::InvalidParameter(e.to_string()))
                };
                let params = PresetParams {
                    q: parse(q)?,
                    c: parse(c)?,
                    p: parse(p)?,
                    a: parse(a)?,
                    b: parse(b)?,
                    ..Default::default()
                };
                JacobiData::preset(preset, &params)
            }
        }
    }

    pub fn from_data(j: &JacobiData) -> Self {
        JacobiSpec::Explicit {
            beta: j.beta.clone(),
            gamma: j.gamma.clone(),
            extend: j.extend,
        }
    }
}
