//! Singularity types: the Jacquard language, the type of a Kumpera-Ruiz
//! word at zero, Jean's beta recursion, and the S-loci.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::flags::{undual, DualSeq, FlagError, GrowthVector};
use crate::krforms::{KRStep, KRWord};
use crate::vfdsl;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigError {
    #[error("beta index must be at least 2, got {0}")]
    BetaIndex(usize),
    #[error("word of length {len} is too short for beta_{i}")]
    WordTooShort { i: usize, len: usize },
    #[error("word `{0}` is not in the Jacquard language")]
    NotJacquard(String),
    #[error("singularity type has length {len}, expected {expected}")]
    LengthMismatch { len: usize, expected: usize },
    #[error("beta sequence is not a valid dual sequence: {0}")]
    InvalidDual(#[from] FlagError),
    #[error("no singularity type produces this growth vector")]
    NoMatch,
    #[error("index out of range: need 0 <= j <= i <= {max}, got i = {i}, j = {j}")]
    IndexRange { i: usize, j: usize, max: i64 },
    #[error("the empty word has no singularity type")]
    EmptyWord,
}

/// A word over letters `a_0, a_1, ...`, stored by letter index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct STWord(Vec<u32>);

impl STWord {
    pub fn new(letters: Vec<u32>) -> Self {
        STWord(letters)
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn push(&self, k: u32) -> STWord {
        let mut v = self.0.clone();
        v.push(k);
        STWord(v)
    }

    fn drop_last(&self, k: usize) -> STWord {
        STWord(self.0[..self.0.len() - k].to_vec())
    }

    /// Inductive membership test: first letter `a0`, and every `a_k` with
    /// `k >= 2` directly preceded by `a_{k-1}`.
    pub fn is_jacquard(&self) -> bool {
        if self.0.is_empty() {
            return true;
        }
        self.0[0] == 0
            && self
                .0
                .windows(2)
                .all(|w| w[1] <= 1 || w[0] + 1 == w[1])
    }

    /// True when no letter beyond `a0` occurs.
    pub fn is_regular(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }
}

impl fmt::Display for STWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&vfdsl::print_st_word(self))
    }
}

impl FromStr for STWord {
    type Err = vfdsl::DslError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        vfdsl::parse_st_word(s)
    }
}

impl Serialize for STWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `J_n`, sorted and deduplicated.
///
/// `J_1 = {a0}` and `J_n = J_{n-1}a0 ∪ J_{n-1}a1 ∪ J_{n-2}a1a2 ∪ … ∪ J_1a1…a_{n-1}`.
pub fn jacquard_enum(n: usize) -> Vec<STWord> {
    let mut table: Vec<Vec<STWord>> = vec![vec![STWord::default()]];
    if n == 0 {
        return table.pop().expect("seeded");
    }
    table.push(vec![STWord(vec![0])]);
    for len in 2..=n {
        let mut words = Vec::new();
        for w in &table[len - 1] {
            words.push(w.push(0));
            words.push(w.push(1));
        }
        for k in 2..len {
            for w in &table[len - k] {
                let mut v = w.0.clone();
                v.extend(1..=k as u32);
                words.push(STWord(v));
            }
        }
        words.sort();
        words.dedup();
        table.push(words);
    }
    table.swap_remove(n)
}

pub fn jacquard_count(n: usize) -> usize {
    jacquard_enum(n).len()
}

/// Singularity type at zero of the form built from `word`.
pub fn delta_of_word(word: &KRWord) -> Result<STWord, SigError> {
    let Some((_, rest)) = word.steps.split_first() else {
        return Err(SigError::EmptyWord);
    };
    let mut letters = vec![0u32];
    for step in rest {
        let prev = *letters.last().expect("nonempty");
        let next = match step {
            KRStep::Singular => 1,
            KRStep::Regular(c) if c.is_zero() && prev >= 1 => prev + 1,
            KRStep::Regular(_) => 0,
        };
        letters.push(next);
    }
    Ok(STWord(letters))
}

/// `beta_i(w)`.
pub fn beta(i: usize, w: &STWord) -> Result<usize, SigError> {
    match i {
        0 | 1 => return Err(SigError::BetaIndex(i)),
        2..=4 => return Ok(i - 1),
        _ => {}
    }
    if w.len() < i - 3 {
        return Err(SigError::WordTooShort { i, len: w.len() });
    }
    let last = *w.0.last().expect("length checked");
    let w1 = w.drop_last(1);
    Ok(match last {
        0 => beta(i - 1, &w1)? + 1,
        1 => beta(i - 1, &w1)? + beta(i - 2, &w.drop_last(2))?,
        _ => 2 * beta(i - 1, &w1)? - beta(i - 2, &w.drop_last(2))?,
    })
}

/// `(beta_2(w), ..., beta_n(w))` for `n = |w| + 3`.
pub fn beta_sequence(w: &STWord) -> Result<Vec<usize>, SigError> {
    (2..=w.len() + 3).map(|i| beta(i, w)).collect()
}

pub fn growth_from_sigtype(w: &STWord, n: usize) -> Result<GrowthVector, SigError> {
    if w.len() + 3 != n {
        return Err(SigError::LengthMismatch {
            len: w.len(),
            expected: n.saturating_sub(3),
        });
    }
    let dual = DualSeq::new(beta_sequence(w)?)?;
    Ok(undual(&dual, n)?)
}

type GrowthIndex = HashMap<Vec<usize>, STWord>;

fn growth_index(len: usize) -> std::sync::Arc<GrowthIndex> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<GrowthIndex>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(idx) = cache.lock().expect("cache lock").get(&len) {
        return idx.clone();
    }
    let idx: GrowthIndex = jacquard_enum(len)
        .into_iter()
        .filter_map(|w| growth_from_sigtype(&w, len + 3).ok().map(|g| (g.dims().to_vec(), w)))
        .collect();
    let idx = std::sync::Arc::new(idx);
    cache.lock().expect("cache lock").insert(len, idx.clone());
    idx
}

/// The unique type in `J_{n-3}` with this growth vector.
pub fn sigtype_from_growth(d: &GrowthVector) -> Result<STWord, SigError> {
    let n = d.ambient_dim();
    if n < 3 {
        return Err(SigError::NoMatch);
    }
    growth_index(n - 3).get(d.dims()).cloned().ok_or(SigError::NoMatch)
}

/// Prefix criterion for `S_j^(i)`: `dg` is the growth vector at the point
/// of `D^(i-j)`, and must start `i-j+2, ..., i+3`, then `i+4` repeated
/// `j+2` times, then `i+5`.
pub fn growth_prefix_criterion(dg: &[usize], i: usize, j: usize) -> bool {
    if j > i {
        return false;
    }
    let mut want: Vec<usize> = (i - j + 2..=i + 3).collect();
    want.extend(std::iter::repeat_n(i + 4, j + 2));
    want.push(i + 5);
    dg.starts_with(&want)
}

fn check_range(n: usize, i: usize, j: usize) -> Result<(), SigError> {
    let max = n as i64 - 5;
    if j > i || i as i64 > max {
        return Err(SigError::IndexRange { i, j, max });
    }
    Ok(())
}

/// Whether zero lies in `S_j^(i)` for a form of type `w`: `w` must read
/// `w1 a1 a2 … a_{j+1} w2` with `|w2| = i - j`.
pub fn sji_membership(w: &STWord, i: usize, j: usize) -> Result<bool, SigError> {
    check_range(w.len() + 3, i, j)?;
    let l = w.len();
    let top = l - 1 - (i - j);
    if top < j {
        return Ok(false);
    }
    Ok((0..=j).all(|t| w.0[top - j + t] == t as u32 + 1))
}

/// Coordinates (1-based) that vanish on `S_j^(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SLocus {
    pub i: usize,
    pub j: usize,
    pub vanishing: Vec<usize>,
}

impl SLocus {
    pub fn codim(&self) -> usize {
        self.vanishing.len()
    }
}

/// `S_j^(i) = {x_{n-i} = … = x_{n-i+j} = 0}` when it passes through zero.
pub fn sji_locus(word: &KRWord, i: usize, j: usize) -> Result<Option<SLocus>, SigError> {
    let w = delta_of_word(word)?;
    if !sji_membership(&w, i, j)? {
        return Ok(None);
    }
    let n = word.dim();
    Ok(Some(SLocus {
        i,
        j,
        vanishing: (n - i..=n - i + j).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> STWord {
        s.parse().unwrap()
    }

    fn kr(s: &str) -> KRWord {
        s.parse().unwrap()
    }

    #[test]
    fn small_jacquard_languages() {
        assert_eq!(jacquard_enum(2), vec![st("a0.a0"), st("a0.a1")]);
        assert_eq!(
            jacquard_enum(3),
            vec![st("a0.a0.a0"), st("a0.a0.a1"), st("a0.a1.a0"), st("a0.a1.a1"), st("a0.a1.a2")]
        );
        assert_eq!(jacquard_count(4), 13);
        assert!(jacquard_enum(5).iter().all(STWord::is_jacquard));
        assert!(!st("a0.a2").is_jacquard());
        assert!(!st("a1").is_jacquard());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_of_word(&kr("R0.S")).unwrap(), st("a0.a1"));
        assert_eq!(delta_of_word(&kr("R0.S.R0")).unwrap(), st("a0.a1.a2"));
        assert_eq!(delta_of_word(&kr("R0.S.R1")).unwrap(), st("a0.a1.a0"));
        for c in ["0", "1", "-7/3"] {
            let w = kr(&format!("R0.R0.S.R0.R1.R{c}"));
            assert_eq!(delta_of_word(&w).unwrap(), st("a0.a0.a1.a2.a0.a0"));
        }
        assert_eq!(delta_of_word(&kr("S")).unwrap(), st("a0"));
        assert!(delta_of_word(&KRWord::default()).is_err());
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(5, &st("a0.a1.a0")).unwrap(), 4);
        assert_eq!(beta(6, &st("a0.a1.a0")).unwrap(), 6);
        assert_eq!(beta(6, &st("a0.a1.a2")).unwrap(), 7);
        assert_eq!(beta(7, &st("a0.a1.a1.a0")).unwrap(), 9);
        assert!(beta(1, &st("a0")).is_err());
        assert!(beta(6, &st("a0")).is_err());
    }

    #[test]
    fn growth_from_types() {
        let g = |w: &str, n| growth_from_sigtype(&st(w), n).unwrap().dims().to_vec();
        assert_eq!(g("a0.a1", 5), vec![2, 3, 4, 4, 5]);
        assert_eq!(g("a0.a1.a2", 6), vec![2, 3, 4, 5, 5, 5, 6]);
        assert_eq!(g("a0.a1.a1", 6), vec![2, 3, 4, 4, 5, 5, 5, 6]);
        assert!(growth_from_sigtype(&st("a0"), 5).is_err());
    }

    #[test]
    fn inversion_examples() {
        let inv = |d: &[usize]| sigtype_from_growth(&GrowthVector::new(d.to_vec()).unwrap()).unwrap();
        assert_eq!(inv(&[2, 3, 4, 5]), st("a0.a0"));
        assert_eq!(inv(&[2, 3, 4, 5, 6]), st("a0.a0.a0"));
        assert_eq!(inv(&[2, 3, 4, 4, 5, 5, 6]), st("a0.a0.a1"));
        assert_eq!(inv(&[2, 3, 4, 5, 5, 6]), st("a0.a1.a0"));
    }

    #[test]
    fn s_loci() {
        assert!(sji_membership(&st("a0.a1"), 0, 0).unwrap());
        assert_eq!(sji_locus(&kr("R0.S"), 0, 0).unwrap().unwrap().vanishing, vec![5]);
        assert!(sji_membership(&st("a0.a1.a2"), 1, 1).unwrap());
        assert_eq!(sji_locus(&kr("R0.S.R0"), 1, 1).unwrap().unwrap().vanishing, vec![5, 6]);
        assert!(!sji_membership(&st("a0.a0"), 0, 0).unwrap());
        assert_eq!(sji_locus(&kr("R0.R0"), 0, 0).unwrap(), None);
        assert!(sji_membership(&st("a0.a1"), 1, 0).is_err());
        assert!(sji_membership(&st("a0.a1.a2"), 0, 1).is_err());
    }

    #[test]
    fn prefix_criterion_agrees_with_membership() {
        use crate::flags::derived_growth;
        use crate::symcore::origin;
        for w in KRWord::enumerate_01(4) {
            let n = w.dim();
            if n < 6 {
                continue;
            }
            let pair = crate::krforms::build(&w).pair();
            let st = delta_of_word(&w).unwrap();
            for i in 1..=n - 5 {
                for j in 1..=i {
                    let dg = derived_growth(&pair, &origin(n), i - j).unwrap();
                    assert_eq!(
                        growth_prefix_criterion(&dg, i, j),
                        sji_membership(&st, i, j).unwrap(),
                        "{w} i={i} j={j} {dg:?}"
                    );
                }
            }
        }
    }
}
