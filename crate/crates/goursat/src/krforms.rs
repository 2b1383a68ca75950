//! Kumpera-Ruiz normal forms built from words of regular and singular
//! prolongations of the contact pair on `R^3`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::symcore::{q, Poly, PolyVF, Rational, SymError};
use crate::vfdsl;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KrError {
    #[error("the empty word has no explicit block form (dimension 3)")]
    EmptyWord,
    #[error("catalog is only available for dimensions 3 to 6, not {0}")]
    CatalogDim(usize),
    #[error("rank must be at least 2, got {0}")]
    WeberRank(usize),
    #[error(transparent)]
    Sym(#[from] SymError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum KRStep {
    Regular(Rational),
    Singular,
}

impl KRStep {
    pub fn is_singular(&self) -> bool {
        matches!(self, KRStep::Singular)
    }
}

/// Steps `sigma_1 ... sigma_{n-3}` in application order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct KRWord {
    pub steps: Vec<KRStep>,
}

impl KRWord {
    pub fn new(steps: Vec<KRStep>) -> Self {
        KRWord { steps }
    }

    pub fn dim(&self) -> usize {
        3 + self.steps.len()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Step producing coordinate `x_k` (`k >= 4`).
    pub fn step_at_coord(&self, k: usize) -> &KRStep {
        &self.steps[k - 4]
    }

    /// Every word of the given length with regular constants drawn from
    /// `constants`, in a deterministic order.
    pub fn enumerate(len: usize, constants: &[Rational]) -> Vec<KRWord> {
        let mut out = vec![KRWord::default()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * (constants.len() + 1));
            for w in &out {
                for c in constants {
                    let mut s = w.steps.clone();
                    s.push(KRStep::Regular(c.clone()));
                    next.push(KRWord::new(s));
                }
                let mut s = w.steps.clone();
                s.push(KRStep::Singular);
                next.push(KRWord::new(s));
            }
            out = next;
        }
        out
    }

    /// All words of length `1..=max_len` with constants in {0, 1}.
    pub fn enumerate_01(max_len: usize) -> Vec<KRWord> {
        (1..=max_len)
            .flat_map(|l| KRWord::enumerate(l, &[q(0), q(1)]))
            .collect()
    }
}

impl fmt::Display for KRWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&vfdsl::print_kr_word(self))
    }
}

impl FromStr for KRWord {
    type Err = vfdsl::DslError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        vfdsl::parse_kr_word(s)
    }
}

/// A Kumpera-Ruiz pair `(f1, f2)` on `R^dim` together with its word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRSystem {
    pub dim: usize,
    pub f1: PolyVF,
    pub f2: PolyVF,
    pub word: KRWord,
}

#[derive(Serialize)]
pub struct KRSystemJson {
    pub dim: usize,
    pub f1: Vec<String>,
    pub f2: Vec<String>,
    pub word: String,
}

impl KRSystem {
    pub fn pair(&self) -> [PolyVF; 2] {
        [self.f1.clone(), self.f2.clone()]
    }

    pub fn to_json(&self) -> KRSystemJson {
        let comps = |f: &PolyVF| f.components().iter().map(Poly::to_text).collect();
        KRSystemJson {
            dim: self.dim,
            f1: comps(&self.f1),
            f2: comps(&self.f2),
            word: self.word.to_string(),
        }
    }
}

/// The contact pair `(d/dx3, x3 d/dx2 + d/dx1)`.
pub fn kappa3() -> KRSystem {
    let n = 3;
    let f1 = PolyVF::coordinate(n, 2);
    let f2 = PolyVF::new(vec![Poly::one(n), Poly::var(n, 2), Poly::zero(n)]).expect("dims agree");
    KRSystem {
        dim: n,
        f1,
        f2,
        word: KRWord::default(),
    }
}

pub fn lift(f: &PolyVF, new_dim: usize) -> Result<PolyVF, KrError> {
    Ok(f.lift(new_dim)?)
}

fn lifted(sys: &KRSystem) -> (PolyVF, PolyVF, usize) {
    let n = sys.dim + 1;
    let f1 = sys.f1.lift(n).expect("growing dimension");
    let f2 = sys.f2.lift(n).expect("growing dimension");
    (f1, f2, n)
}

/// `f2 <- (x_n + c) f1 + f2`, `f1 <- d/dx_n`.
pub fn prolong_regular(sys: &KRSystem, c: &Rational) -> KRSystem {
    let (f1, f2, n) = lifted(sys);
    let coeff = &Poly::var(n, n - 1) + &Poly::constant(n, c.clone());
    let f2 = f1.scale_poly(&coeff).add(&f2).expect("dims agree");
    let mut word = sys.word.clone();
    word.steps.push(KRStep::Regular(c.clone()));
    KRSystem {
        dim: n,
        f1: PolyVF::coordinate(n, n - 1),
        f2,
        word,
    }
}

/// `f2 <- f1 + x_n f2`, `f1 <- d/dx_n`.
pub fn prolong_singular(sys: &KRSystem) -> KRSystem {
    let (f1, f2, n) = lifted(sys);
    let f2 = f1.add(&f2.scale_poly(&Poly::var(n, n - 1))).expect("dims agree");
    let mut word = sys.word.clone();
    word.steps.push(KRStep::Singular);
    KRSystem {
        dim: n,
        f1: PolyVF::coordinate(n, n - 1),
        f2,
        word,
    }
}

pub fn build(word: &KRWord) -> KRSystem {
    word.steps.iter().fold(kappa3(), |sys, step| match step {
        KRStep::Regular(c) => prolong_regular(&sys, c),
        KRStep::Singular => prolong_singular(&sys),
    })
}

/// Block description of a Kumpera-Ruiz form in double-indexed coordinates
/// `x^i_j`, `0 <= i <= m + 1`, `1 <= j <= k_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExplicitKR {
    pub n: usize,
    /// Number of singular prolongations.
    pub m: usize,
    pub k: Vec<usize>,
    /// `c[i][j-1]` is the constant `c^i_j`, for `1 <= j < k_i`.
    #[serde(serialize_with = "ser_constants")]
    pub c: Vec<Vec<Rational>>,
    /// Set when a leading `S` was replaced by `R0` before blocking.
    pub normalized: bool,
}

fn ser_constants<S: serde::Serializer>(c: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.len()))?;
    for block in c {
        let v: Vec<String> = block.iter().map(crate::symcore::rational::fmt_rational).collect();
        seq.serialize_element(&v)?;
    }
    seq.end()
}

impl ExplicitKR {
    /// Single index (1-based) of the coordinate `x^i_j`.
    pub fn coord(&self, i: usize, j: usize) -> usize {
        let before: usize = self.k[..i].iter().sum();
        self.n - before - j + 1
    }

    /// Expands the double-indexed display into the second field.
    pub fn expand(&self) -> PolyVF {
        let n = self.n;
        let mut f2 = PolyVF::zero(n);
        let mut prefix = Poly::one(n);
        for i in 0..=self.m {
            let mut block = PolyVF::zero(n);
            for j in 1..self.k[i] {
                let x = Poly::var(n, self.coord(i, j) - 1);
                let coeff = &x + &Poly::constant(n, self.c[i][j - 1].clone());
                let dir = PolyVF::coordinate(n, self.coord(i, j + 1) - 1);
                block = block.add(&dir.scale_poly(&coeff)).expect("dims agree");
            }
            block = block
                .add(&PolyVF::coordinate(n, self.coord(i + 1, 1) - 1))
                .expect("dims agree");
            f2 = f2.add(&block.scale_poly(&prefix)).expect("dims agree");
            prefix = &prefix * &Poly::var(n, self.coord(i, self.k[i]) - 1);
        }
        f2
    }
}

/// Replaces a leading singular step by `R0`.
///
/// The two forms are equivalent at zero: the Legendre-type contact map
/// `(x1, x2, x3) -> (x3, x1 x3 - x2, x1)` carries `S(kappa3)` to
/// `R0(kappa3)` and prolongs as the identity on the higher coordinates.
pub fn normalize_leading(word: &KRWord) -> (KRWord, bool) {
    let mut w = word.clone();
    let changed = matches!(w.steps.first(), Some(KRStep::Singular));
    if changed {
        w.steps[0] = KRStep::Regular(q(0));
    }
    (w, changed)
}

pub fn explicit_form(word: &KRWord) -> Result<ExplicitKR, KrError> {
    if word.is_empty() {
        return Err(KrError::EmptyWord);
    }
    let (w, normalized) = normalize_leading(word);
    let n = w.dim();
    let mut k = Vec::new();
    let mut c = Vec::new();
    let mut block: Vec<Rational> = Vec::new();
    let mut size = 0;
    for t in (4..=n).rev() {
        size += 1;
        match w.step_at_coord(t) {
            KRStep::Regular(ct) => block.push(ct.clone()),
            KRStep::Singular => {
                k.push(size);
                c.push(std::mem::take(&mut block));
                size = 0;
            }
        }
    }
    // The last block runs down through x3 (constant 0) to x2.
    block.push(q(0));
    k.push(size + 2);
    c.push(block);
    k.push(1);
    let m = k.len() - 2;
    Ok(ExplicitKR {
        n,
        m,
        k,
        c,
        normalized,
    })
}

/// The rank-`k` extension `(d/dx_{m+k-2}, ..., d/dx_{m+1}, kappa1^m, kappa2^m)`
/// on `R^{m+k-2}`, where `m` is the dimension of the word's form.
pub fn weber_extend(word: &KRWord, k: usize) -> Result<Vec<PolyVF>, KrError> {
    if k < 2 {
        return Err(KrError::WeberRank(k));
    }
    let sys = build(word);
    let m = sys.dim;
    let total = m + k - 2;
    let mut fields: Vec<PolyVF> = (m + 1..=total).rev().map(|i| PolyVF::coordinate(total, i - 1)).collect();
    fields.push(sys.f1.lift(total)?);
    fields.push(sys.f2.lift(total)?);
    Ok(fields)
}

/// Low-dimensional classification lists.
pub fn catalog(dim: usize) -> Result<Vec<(&'static str, KRWord)>, KrError> {
    let names: &[(&str, &str)] = match dim {
        3 => &[("pfaff-darboux", "")],
        4 => &[("engel", "R0")],
        5 => &[("R5a", "R0.R0"), ("R5b", "R0.S")],
        6 => &[
            ("R6a", "R0.R0.R0"),
            ("R6b", "R0.R0.S"),
            ("R6c", "R0.S.R0"),
            ("R6d", "R0.S.R1"),
            ("R6e", "R0.S.S"),
        ],
        _ => return Err(KrError::CatalogDim(dim)),
    };
    Ok(names
        .iter()
        .map(|(n, w)| (*n, w.parse().expect("catalog words are well formed")))
        .collect())
}
