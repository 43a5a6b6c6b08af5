//! Hereditary subtrees `Omega` of the binary tree of words.
//!
//! An admissible `Omega` is postfix-closed, contains every pure run `1^n`,
//! `2^n`, and satisfies the sibling rule: if `u` is in `Omega`, `u(1) = i`
//! and `(j, u)` is in `Omega` for some `j != i`, then `(i, u)` is in `Omega`.
//!
//! `Omega` is infinite; a tree of depth `N` keeps every member of length
//! `<= N + 1` so that boundary and coefficient queries on words of length
//! `<= N` never look past the stored frontier.

use crate::ncpoly::Word;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaKind {
    Free,
    Boolean,
    Monotone,
    #[serde(alias = "anti-monotone")]
    Antimonotone,
    OneBranch,
    Custom,
}

impl OmegaKind {
    pub const BUILTINS: [OmegaKind; 5] = [
        OmegaKind::Free,
        OmegaKind::Boolean,
        OmegaKind::Monotone,
        OmegaKind::Antimonotone,
        OmegaKind::OneBranch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OmegaKind::Free => "free",
            OmegaKind::Boolean => "boolean",
            OmegaKind::Monotone => "monotone",
            OmegaKind::Antimonotone => "antimonotone",
            OmegaKind::OneBranch => "one-branch",
            OmegaKind::Custom => "custom",
        }
    }

    pub fn from_name(name: &str) -> Option<OmegaKind> {
        match name {
            "free" => Some(OmegaKind::Free),
            "boolean" => Some(OmegaKind::Boolean),
            "monotone" => Some(OmegaKind::Monotone),
            "antimonotone" | "anti-monotone" => Some(OmegaKind::Antimonotone),
            "one-branch" => Some(OmegaKind::OneBranch),
            "custom" => Some(OmegaKind::Custom),
            _ => None,
        }
    }

    /// Membership rule of a builtin, for words over `{1, 2}`.
    fn contains(self, w: &Word) -> bool {
        let blocks = w.blocks();
        match self {
            OmegaKind::Free => true,
            OmegaKind::Boolean => blocks.len() <= 1,
            // 2^k 1^n
            OmegaKind::Monotone => matches!(blocks.as_slice(), [] | [_] | [(2, _), (1, _)]),
            // 1^k 2^n
            OmegaKind::Antimonotone => matches!(blocks.as_slice(), [] | [_] | [(1, _), (2, _)]),
            OmegaKind::OneBranch => blocks.len() <= 1 || w.letters() == [2, 1],
            OmegaKind::Custom => false,
        }
    }
}

impl fmt::Display for OmegaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// A letter outside `{1, 2}` or a word longer than `depth + 1`.
    Range,
    /// A postfix of a member is missing.
    Hereditary,
    /// A pure run `i^n` with `n <= depth + 1` is missing.
    PureRun,
    /// `(j, u)` is present, `j != u(1)`, but `(u(1), u)` is not.
    Sibling,
}

/// First violated admissibility condition, with a witness word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("{condition:?} violated at witness {witness}{}", .member.as_ref().map(|m| format!(" (from {m})")).unwrap_or_default())]
pub struct Violation {
    pub condition: Condition,
    /// The missing or offending word. For `Sibling`, the node `u`.
    pub witness: Word,
    /// The member that forced the witness, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OmegaError {
    #[error(transparent)]
    Invalid(#[from] Violation),
    #[error("unknown omega builder {0:?}")]
    UnknownBuilder(String),
    #[error("requested depth {requested} exceeds tree depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },
}

/// A depth-truncated admissible `Omega`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaTree {
    depth: usize,
    members: BTreeSet<Word>,
    kind: OmegaKind,
}

impl OmegaTree {
    /// Check the admissibility conditions in order: range, hereditary, pure
    /// runs, sibling. Words are taken at face value; pass `implicit_runs` to
    /// add every pure run first.
    pub fn validate(
        words: impl IntoIterator<Item = Word>,
        depth: usize,
        implicit_runs: bool,
        kind: OmegaKind,
    ) -> Result<OmegaTree, Violation> {
        let members = Self::collect(words, depth, implicit_runs);
        if let Some(v) = Self::diagnose_members(&members, depth)
            .into_iter()
            .find_map(|(_, v)| v)
        {
            return Err(v);
        }
        Ok(OmegaTree {
            depth,
            members,
            kind,
        })
    }

    /// Each condition checked on its own, in validation order, with the
    /// first witness found for it.
    pub fn diagnose(
        words: impl IntoIterator<Item = Word>,
        depth: usize,
        implicit_runs: bool,
    ) -> Vec<(Condition, Option<Violation>)> {
        Self::diagnose_members(&Self::collect(words, depth, implicit_runs), depth)
    }

    fn collect(words: impl IntoIterator<Item = Word>, depth: usize, implicit_runs: bool) -> BTreeSet<Word> {
        let mut members: BTreeSet<Word> = words.into_iter().collect();
        members.insert(Word::empty());
        if implicit_runs {
            for n in 1..=depth + 1 {
                members.insert(Word::run(1, n));
                members.insert(Word::run(2, n));
            }
        }
        members
    }

    fn diagnose_members(members: &BTreeSet<Word>, depth: usize) -> Vec<(Condition, Option<Violation>)> {
        let range = members
            .iter()
            .find(|w| w.len() > depth + 1 || w.letters().iter().any(|&l| l != 1 && l != 2))
            .map(|w| Violation {
                condition: Condition::Range,
                witness: w.clone(),
                member: None,
            });
        let hereditary = members.iter().find_map(|w| {
            w.postfixes()
                .into_iter()
                .find(|p| !members.contains(p))
                .map(|missing| Violation {
                    condition: Condition::Hereditary,
                    witness: missing,
                    member: Some(w.clone()),
                })
        });
        let runs = (1..=depth + 1)
            .flat_map(|n| [Word::run(1, n), Word::run(2, n)])
            .find(|r| !members.contains(r))
            .map(|r| Violation {
                condition: Condition::PureRun,
                witness: r,
                member: None,
            });
        let sibling = members
            .iter()
            .filter(|u| !u.is_empty() && u.len() <= depth)
            .find_map(|u| {
                let i = u.first().unwrap();
                let cross = u.prepend(3 - i);
                (members.contains(&cross) && !members.contains(&u.prepend(i))).then(|| Violation {
                    condition: Condition::Sibling,
                    witness: u.clone(),
                    member: Some(cross),
                })
            });
        vec![
            (Condition::Range, range),
            (Condition::Hereditary, hereditary),
            (Condition::PureRun, runs),
            (Condition::Sibling, sibling),
        ]
    }

    /// One of the builtin trees, truncated to words of length `<= depth + 1`.
    pub fn builder(kind: OmegaKind, depth: usize) -> Result<OmegaTree, OmegaError> {
        if kind == OmegaKind::Custom {
            return Err(OmegaError::UnknownBuilder(kind.name().into()));
        }
        let members = Word::all_up_to(2, depth + 1)
            .into_iter()
            .filter(|w| kind.contains(w))
            .collect();
        Ok(OmegaTree {
            depth,
            members,
            kind,
        })
    }

    pub fn builtin(name: &str, depth: usize) -> Result<OmegaTree, OmegaError> {
        match OmegaKind::from_name(name) {
            Some(k) if k != OmegaKind::Custom => Self::builder(k, depth),
            _ => Err(OmegaError::UnknownBuilder(name.into())),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn kind(&self) -> OmegaKind {
        self.kind
    }

    pub fn members(&self) -> &BTreeSet<Word> {
        &self.members
    }

    /// Membership for words of length `<= depth + 1`.
    pub fn contains(&self, w: &Word) -> bool {
        debug_assert!(w.len() <= self.depth + 1, "{w} is past the stored frontier");
        self.members.contains(w)
    }

    /// `u` in `Omega`, `u(1) = i` and `(i, u)` not in `Omega`. Needs `|u| <= depth`.
    pub fn is_boundary(&self, u: &Word) -> bool {
        match u.first() {
            Some(i) => self.contains(u) && !self.contains(&u.prepend(i)),
            None => false,
        }
    }

    /// `u` in `Omega \ boundary`.
    pub fn in_interior(&self, u: &Word) -> bool {
        self.contains(u) && !self.is_boundary(u)
    }

    /// The boundary among words of length `<= depth`.
    pub fn boundary(&self) -> BTreeSet<Word> {
        self.members
            .iter()
            .filter(|u| u.len() <= self.depth && self.is_boundary(u))
            .cloned()
            .collect()
    }

    /// Longest postfix of `u` that lies in `Omega`.
    pub fn longest_postfix_in(&self, u: &Word) -> Word {
        u.postfixes()
            .into_iter()
            .find(|p| self.contains(p))
            .unwrap_or_default()
    }

    /// Longest run of `letter` inside any stored member.
    pub fn max_run(&self, letter: u8) -> usize {
        self.members
            .iter()
            .flat_map(|w| w.blocks())
            .filter(|&(l, _)| l == letter)
            .map(|(_, n)| n)
            .max()
            .unwrap_or(0)
    }

    /// The same tree cut to a smaller depth.
    pub fn truncate(&self, depth: usize) -> Result<OmegaTree, OmegaError> {
        if depth > self.depth {
            return Err(OmegaError::DepthExceeded {
                requested: depth,
                depth: self.depth,
            });
        }
        Ok(OmegaTree {
            depth,
            members: self
                .members
                .iter()
                .filter(|w| w.len() <= depth + 1)
                .cloned()
                .collect(),
            kind: self.kind,
        })
    }

    fn check_depth(&self, depth: usize) -> Result<(), OmegaError> {
        if depth > self.depth {
            Err(OmegaError::DepthExceeded {
                requested: depth,
                depth: self.depth,
            })
        } else {
            Ok(())
        }
    }

    /// Membership test for `Omega^2` over `{1, 2, 3}`, split at runs of `sep`.
    ///
    /// Blocks between separator runs are mapped back into `{1, 2}` by
    /// `to_base` and must lie in `Omega`; the length pattern, with block
    /// lengths written in `block_letter` and separator runs in `sep_letter`,
    /// must lie in `Omega` too.
    fn squared_member(
        &self,
        u: &Word,
        sep: u8,
        to_base: impl Fn(u8) -> u8,
        block_letter: u8,
        sep_letter: u8,
    ) -> bool {
        let mut pattern: Vec<(u8, usize)> = Vec::new();
        let mut block: Vec<u8> = Vec::new();
        let flush = |block: &mut Vec<u8>, pattern: &mut Vec<(u8, usize)>| -> bool {
            let w = Word::new(block.iter().map(|&l| to_base(l)).collect());
            let ok = self.contains(&w);
            if !block.is_empty() {
                pattern.push((block_letter, block.len()));
            }
            block.clear();
            ok
        };
        for (l, n) in u.blocks() {
            if l == sep {
                if !flush(&mut block, &mut pattern) {
                    return false;
                }
                pattern.push((sep_letter, n));
            } else {
                block.extend(std::iter::repeat_n(l, n));
            }
        }
        if !flush(&mut block, &mut pattern) {
            return false;
        }
        self.contains(&Word::from_blocks(&pattern))
    }

    /// `Omega^2` among words over `{1, 2, 3}` of length `<= depth`: blocks
    /// over `{1, 2}` separated by runs of 3.
    pub fn omega_squared(&self, depth: usize) -> Result<BTreeSet<Word>, OmegaError> {
        self.check_depth(depth)?;
        Ok(Word::all_up_to(3, depth)
            .into_iter()
            .filter(|u| self.squared_member(u, 3, |l| l, 1, 2))
            .collect())
    }

    /// The mirrored construction: blocks over `{2, 3}` (tested in `Omega`
    /// after relabeling `2 -> 1`, `3 -> 2`) separated by runs of 1.
    pub fn omega_squared_mirror(&self, depth: usize) -> Result<BTreeSet<Word>, OmegaError> {
        self.check_depth(depth)?;
        Ok(Word::all_up_to(3, depth)
            .into_iter()
            .filter(|u| self.squared_member(u, 1, |l| l - 1, 2, 1))
            .collect())
    }

    /// Both constructions of `Omega^2` agree up to `depth`.
    pub fn is_associative(&self, depth: usize) -> Result<bool, OmegaError> {
        Ok(self.omega_squared(depth)? == self.omega_squared_mirror(depth)?)
    }
}

/// JSON form of an `Omega` argument.
///
/// ```json
/// {"builtin": "monotone", "depth": 5}
/// {"words": [[2, 1]], "depth": 5, "implicit_runs": true}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaSpec {
    Builtin {
        builtin: String,
        depth: usize,
    },
    Words {
        words: Vec<Word>,
        depth: usize,
        #[serde(default)]
        implicit_runs: bool,
    },
}

impl OmegaSpec {
    pub fn build(&self) -> Result<OmegaTree, OmegaError> {
        match self {
            OmegaSpec::Builtin { builtin, depth } => OmegaTree::builtin(builtin, *depth),
            OmegaSpec::Words {
                words,
                depth,
                implicit_runs,
            } => Ok(OmegaTree::validate(
                words.iter().cloned(),
                *depth,
                *implicit_runs,
                OmegaKind::Custom,
            )?),
        }
    }
}
