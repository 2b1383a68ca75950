//! Derived and Lie flags of a rank-two distribution, pointwise growth
//! vectors, dual sequences, and Murray's regularity test.
//!
//! Generators are kept as an echelon basis of their R-linear span, taken
//! over (component, monomial) coordinates. Since brackets are R-bilinear, a
//! new level only needs brackets against the basis elements that the previous
//! level added; anything else already lies in the span.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::krforms::KRSystem;
use crate::symcore::{linalg, Monomial, PolyVF, Rational, SymError};

pub const DEFAULT_GENERATOR_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlagError {
    #[error("invalid growth vector {0:?}")]
    InvalidGrowth(Vec<usize>),
    #[error("invalid dual sequence {0:?}")]
    InvalidDual(Vec<usize>),
    #[error("dual sequence has {len} entries, expected {expected}")]
    DualLength { len: usize, expected: usize },
    #[error("more than {0} generators needed")]
    GeneratorCapExceeded(usize),
    #[error("rank {rank} < {dim} after {levels} Lie-flag levels")]
    NotGenerating { rank: usize, dim: usize, levels: usize },
    #[error("the two generators live in different dimensions")]
    PairMismatch,
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// `(d_0, ..., d_N)` with `d_0 = 2`, unit or zero steps, and `d_N = n`
/// reached only at the last entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GrowthVector(Vec<usize>);

impl GrowthVector {
    pub fn new(dims: Vec<usize>) -> Result<Self, FlagError> {
        let ok = dims.first() == Some(&2)
            && dims.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
            && (dims.len() == 1 || dims[dims.len() - 2] < dims[dims.len() - 1]);
        if ok {
            Ok(GrowthVector(dims))
        } else {
            Err(FlagError::InvalidGrowth(dims))
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn ambient_dim(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    /// Nonholonomy degree `N`.
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }
}

impl std::fmt::Display for GrowthVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// `(d*_2, ..., d*_n)`: strictly increasing, starting at 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DualSeq(Vec<usize>);

impl DualSeq {
    pub fn new(entries: Vec<usize>) -> Result<Self, FlagError> {
        if entries.first() == Some(&1) && entries.windows(2).all(|w| w[0] < w[1]) {
            Ok(DualSeq(entries))
        } else {
            Err(FlagError::InvalidDual(entries))
        }
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }
}

/// `d*_i = #{j : d_j < i} + 1` for `2 <= i <= n`.
pub fn dual(d: &GrowthVector) -> DualSeq {
    let n = d.ambient_dim();
    DualSeq(
        (2..=n)
            .map(|i| d.0.iter().filter(|&&dj| dj < i).count() + 1)
            .collect(),
    )
}

/// Inverse of [`dual`]: `d_j = max{i : d*_i <= j + 1}`.
pub fn undual(ds: &DualSeq, n: usize) -> Result<GrowthVector, FlagError> {
    if ds.0.len() + 1 != n {
        return Err(FlagError::DualLength {
            len: ds.0.len(),
            expected: n.saturating_sub(1),
        });
    }
    let top = *ds.0.last().expect("nonempty");
    let dims = (0..top)
        .map(|j| {
            ds.0.iter()
                .enumerate()
                .filter(|(_, &e)| e <= j + 1)
                .map(|(k, _)| k + 2)
                .max()
                .expect("d*_2 = 1")
        })
        .collect();
    GrowthVector::new(dims)
}

type Key = (usize, Monomial);
type Row = BTreeMap<Key, Rational>;

fn flatten(f: &PolyVF) -> Row {
    let mut row = Row::new();
    for (i, c) in f.components().iter().enumerate() {
        for (m, a) in c.terms() {
            row.insert((i, m.clone()), a.clone());
        }
    }
    row
}

/// Echelon basis of an R-linear span of polynomial fields.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<Key, Row>,
}

impl Echelon {
    /// Adds `f` to the span; true when it was not already there.
    fn insert(&mut self, f: &PolyVF) -> bool {
        let mut v = flatten(f);
        let mut cursor: Option<Key> = None;
        loop {
            let next = match &cursor {
                None => v.keys().next_back().cloned(),
                Some(k) => v.range(..k.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(key) = next else { break };
            if let Some(row) = self.rows.get(&key) {
                let factor = v[&key].clone();
                for (k, a) in row {
                    let entry = v.entry(k.clone()).or_insert_with(Rational::zero);
                    *entry -= &factor * a;
                    if entry.is_zero() {
                        v.remove(k);
                    }
                }
            }
            cursor = Some(key);
        }
        let Some((pivot, lead)) = v.iter().next_back().map(|(k, a)| (k.clone(), a.clone())) else {
            return false;
        };
        if !lead.is_one() {
            for a in v.values_mut() {
                *a /= &lead;
            }
        }
        self.rows.insert(pivot, v);
        true
    }
}

/// Generator bookkeeping shared by both flags.
struct FlagState {
    span: Echelon,
    gens: Vec<PolyVF>,
    values: Vec<Vec<Rational>>,
    cap: usize,
}

impl FlagState {
    fn new(cap: usize) -> Self {
        FlagState {
            span: Echelon::default(),
            gens: Vec::new(),
            values: Vec::new(),
            cap,
        }
    }

    fn offer(&mut self, f: PolyVF, p: &[Rational]) -> Result<bool, FlagError> {
        if f.is_zero() || !self.span.insert(&f) {
            return Ok(false);
        }
        if self.gens.len() >= self.cap {
            return Err(FlagError::GeneratorCapExceeded(self.cap));
        }
        self.values.push(f.evaluate(p)?);
        self.gens.push(f);
        Ok(true)
    }

    fn rank(&self) -> usize {
        linalg::rank(&self.values)
    }
}

fn check_pair(f1: &PolyVF, f2: &PolyVF, p: &[Rational]) -> Result<usize, FlagError> {
    if f1.dim() != f2.dim() {
        return Err(FlagError::PairMismatch);
    }
    if p.len() != f1.dim() {
        return Err(SymError::DimensionMismatch {
            expected: f1.dim(),
            found: p.len(),
        }
        .into());
    }
    Ok(f1.dim())
}

fn derived_flag_run(
    pair: &[PolyVF; 2],
    p: &[Rational],
    maxlevel: usize,
    cap: usize,
) -> Result<(Vec<usize>, Vec<PolyVF>), FlagError> {
    let n = check_pair(&pair[0], &pair[1], p)?;
    let mut st = FlagState::new(cap);
    let mut fresh = 0;
    for f in pair {
        st.offer(f.clone(), p)?;
    }
    let mut dims = vec![st.rank()];
    for _ in 0..maxlevel {
        let count = st.gens.len();
        if *dims.last().expect("nonempty") == n && count == fresh {
            dims.push(n);
            continue;
        }
        let mut candidates = Vec::new();
        for a in fresh..count {
            for b in 0..count {
                if b < fresh || b < a {
                    candidates.push(st.gens[a].lie_bracket(&st.gens[b])?);
                }
            }
        }
        fresh = count;
        for c in candidates {
            st.offer(c, p)?;
        }
        dims.push(st.rank());
    }
    Ok((dims, st.gens))
}

/// `dim D^(i)(p)` for `i = 0..=maxlevel`.
pub fn derived_flag_dims_with_cap(
    pair: &[PolyVF; 2],
    p: &[Rational],
    maxlevel: usize,
    cap: usize,
) -> Result<Vec<usize>, FlagError> {
    Ok(derived_flag_run(pair, p, maxlevel, cap)?.0)
}

pub fn derived_flag_dims(pair: &[PolyVF; 2], p: &[Rational], maxlevel: usize) -> Result<Vec<usize>, FlagError> {
    derived_flag_dims_with_cap(pair, p, maxlevel, DEFAULT_GENERATOR_CAP)
}

/// Lie-flag dims `dim D_i(p)` for `i = 0..=levels` of the distribution
/// spanned by `base`, stopping early at full rank when `stop_at_full` is set.
fn lie_flag(
    base: &[PolyVF],
    p: &[Rational],
    levels: usize,
    cap: usize,
    stop_at_full: bool,
) -> Result<Vec<usize>, FlagError> {
    let n = p.len();
    let mut st = FlagState::new(cap);
    for f in base {
        st.offer(f.clone(), p)?;
    }
    let base = st.gens.clone();
    let mut fresh = 0;
    let mut dims = vec![st.rank()];
    for _ in 0..levels {
        if stop_at_full && *dims.last().expect("nonempty") == n {
            break;
        }
        let count = st.gens.len();
        let mut candidates = Vec::new();
        for g in &st.gens[fresh..count] {
            for f in &base {
                candidates.push(f.lie_bracket(g)?);
            }
        }
        fresh = count;
        for c in candidates {
            st.offer(c, p)?;
        }
        dims.push(st.rank());
    }
    Ok(dims)
}

pub fn lie_flag_dims(pair: &[PolyVF; 2], p: &[Rational], levels: usize) -> Result<Vec<usize>, FlagError> {
    check_pair(&pair[0], &pair[1], p)?;
    lie_flag(pair, p, levels, DEFAULT_GENERATOR_CAP, false)
}

/// Pointwise growth vector of the derived distribution `D^(k)`: its Lie
/// flag dims at `p`, starting from `dim D^(k)(p)` and ending at `n`.
pub fn derived_growth(pair: &[PolyVF; 2], p: &[Rational], k: usize) -> Result<Vec<usize>, FlagError> {
    let n = check_pair(&pair[0], &pair[1], p)?;
    let (_, gens) = derived_flag_run(pair, p, k, DEFAULT_GENERATOR_CAP)?;
    let dims = lie_flag(&gens, p, default_level_cap(n), DEFAULT_GENERATOR_CAP, true)?;
    let last = *dims.last().expect("nonempty");
    if last != n {
        return Err(FlagError::NotGenerating {
            rank: last,
            dim: n,
            levels: dims.len() - 1,
        });
    }
    Ok(dims)
}

/// Default level cap `2^{n-3}` (at least 1).
pub fn default_level_cap(n: usize) -> usize {
    1usize << n.saturating_sub(3).min(40)
}

pub fn growth_vector_with(
    pair: &[PolyVF; 2],
    p: &[Rational],
    cap_levels: usize,
    cap_generators: usize,
) -> Result<GrowthVector, FlagError> {
    let n = check_pair(&pair[0], &pair[1], p)?;
    let dims = lie_flag(pair, p, cap_levels, cap_generators, true)?;
    let last = *dims.last().expect("nonempty");
    if last != n {
        return Err(FlagError::NotGenerating {
            rank: last,
            dim: n,
            levels: dims.len() - 1,
        });
    }
    GrowthVector::new(dims)
}

pub fn growth_vector(pair: &[PolyVF; 2], p: &[Rational]) -> Result<GrowthVector, FlagError> {
    growth_vector_with(pair, p, default_level_cap(pair[0].dim()), DEFAULT_GENERATOR_CAP)
}

pub fn growth_vector_of(sys: &KRSystem, p: &[Rational]) -> Result<GrowthVector, FlagError> {
    growth_vector(&sys.pair(), p)
}

pub fn nonholonomy_degree(pair: &[PolyVF; 2], p: &[Rational]) -> Result<usize, FlagError> {
    Ok(growth_vector(pair, p)?.degree())
}

/// Lie-flag and derived-flag dims agree at `p` for levels `0..=n-2`.
pub fn murray_regular(pair: &[PolyVF; 2], p: &[Rational]) -> bool {
    let n = pair[0].dim();
    let levels = n.saturating_sub(2);
    match (lie_flag_dims(pair, p, levels), derived_flag_dims(pair, p, levels)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoursatReport {
    pub goursat: bool,
    /// Index of the first failing sample and its derived-flag dims.
    pub failure: Option<(usize, Vec<usize>)>,
}

/// Checks `dim D^(i)(p) = i + 2` for `i <= n - 2` at every sample.
pub fn is_goursat(pair: &[PolyVF; 2], samples: &[Vec<Rational>]) -> GoursatReport {
    let n = pair[0].dim();
    let levels = n.saturating_sub(2);
    let want: Vec<usize> = (0..=levels).map(|i| i + 2).collect();
    for (k, p) in samples.iter().enumerate() {
        let got = derived_flag_dims(pair, p, levels).unwrap_or_default();
        if got != want {
            return GoursatReport {
                goursat: false,
                failure: Some((k, got)),
            };
        }
    }
    GoursatReport {
        goursat: true,
        failure: None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagReport {
    pub word: String,
    pub point: String,
    pub growth: Vec<usize>,
    pub dual: Vec<usize>,
    pub degree: usize,
    pub murray_regular: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krforms::{build, kappa3, KRWord};
    use crate::symcore::{origin, q, Poly, VectorField};

    fn pair(w: &str) -> [PolyVF; 2] {
        build(&w.parse::<KRWord>().unwrap()).pair()
    }

    fn gv(d: &[usize]) -> GrowthVector {
        GrowthVector::new(d.to_vec()).unwrap()
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual(&gv(&[2, 3, 4, 5, 6])).entries(), &[1, 2, 3, 4, 5]);
        assert_eq!(dual(&gv(&[2, 3, 4, 5, 5, 5, 6])).entries(), &[1, 2, 3, 4, 7]);
        assert_eq!(dual(&gv(&[2, 3, 4, 4, 5, 5, 5, 6])).entries(), &[1, 2, 3, 5, 8]);
        let d = DualSeq::new(vec![1, 2, 3, 5, 8]).unwrap();
        assert_eq!(undual(&d, 6).unwrap(), gv(&[2, 3, 4, 4, 5, 5, 5, 6]));
        assert!(undual(&d, 7).is_err());
        assert!(GrowthVector::new(vec![2, 4]).is_err());
        assert!(GrowthVector::new(vec![2, 3, 3]).is_err());
        assert!(DualSeq::new(vec![1, 1]).is_err());
    }

    #[test]
    fn engel_and_contact() {
        let engel = pair("R0");
        assert_eq!(derived_flag_dims(&engel, &origin(4), 2).unwrap(), vec![2, 3, 4]);
        assert_eq!(nonholonomy_degree(&engel, &origin(4)).unwrap(), 2);
        let k3 = kappa3().pair();
        assert_eq!(derived_flag_dims(&k3, &[q(3), q(-1), q(7)], 1).unwrap(), vec![2, 3]);
        assert_eq!(nonholonomy_degree(&k3, &origin(3)).unwrap(), 1);
    }

    #[test]
    fn growth_examples() {
        let g = |w: &str| growth_vector(&pair(w), &origin(w.split('.').count() + 3)).unwrap();
        assert_eq!(g("R0.R0").dims(), &[2, 3, 4, 5]);
        assert_eq!(g("R0.S").dims(), &[2, 3, 4, 4, 5]);
        assert_eq!(g("R0.S.S.R1").dims(), &[2, 3, 4, 5, 5, 6, 6, 6, 7]);
        assert_eq!(g("R0.S.S.R0").dims(), &[2, 3, 4, 5, 5, 5, 6, 6, 6, 6, 7]);
        assert_eq!(
            derived_flag_dims(&pair("R0.S"), &origin(5), 3).unwrap(),
            vec![2, 3, 4, 5]
        );
    }

    #[test]
    fn murray() {
        assert!(murray_regular(&pair("R0.R0"), &origin(5)));
        assert!(!murray_regular(&pair("R0.S"), &origin(5)));
        let p = vec![q(0), q(0), q(0), q(0), q(1)];
        assert!(murray_regular(&pair("R0.S"), &p));
    }

    #[test]
    fn goursat_checks() {
        let samples = vec![origin(6), vec![q(1), q(-2), q(3), q(1), q(0), q(5)]];
        assert!(is_goursat(&pair("R0.S.R1"), &samples).goursat);
        let inv = [PolyVF::coordinate(3, 2), PolyVF::coordinate(3, 0)];
        let rep = is_goursat(&inv, &[origin(3)]);
        assert!(!rep.goursat);
        assert_eq!(rep.failure, Some((0, vec![2, 2])));
    }

    #[test]
    fn generic_pair_jumps() {
        let n = 5;
        let x = |i| Poly::var(n, i);
        let one = Poly::one(n);
        let f1 = VectorField::new(vec![one.clone(), x(2), x(0), x(4), x(1)]).unwrap();
        let f2 = VectorField::new(vec![x(3), one.clone(), x(4), x(0), x(2)]).unwrap();
        let dims = derived_flag_dims(&[f1, f2], &origin(n), 2).unwrap();
        assert_eq!(dims[0], 2);
        assert_eq!(dims[2], 5);
    }

    #[test]
    fn cap_is_enforced() {
        let r = growth_vector_with(&pair("R0.S.S.R0"), &origin(7), 20, 5);
        assert_eq!(r, Err(FlagError::GeneratorCapExceeded(5)));
        let r = growth_vector_with(&pair("R0.S.S.R0"), &origin(7), 3, 4096);
        assert!(matches!(r, Err(FlagError::NotGenerating { .. })));
    }
}
