//! Characteristic distributions, abnormal cones, the singular loci `K_i`
//! and `L_i`, and the rigidity classifier, all in Kumpera-Ruiz coordinates.
//!
//! Answers at points other than the chart center are chart-relative: loci
//! are the coordinate subspaces read off the word, tested at `q`.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::krforms::{build, KRStep, KRWord};
use crate::sigtype::{delta_of_word, SigError};
use crate::symcore::{linalg, PolyVF, Rational, SymError};
use crate::trailer::{delta_trailer, sji_trailer, TrailerConfig, TrailerError};
use crate::vfdsl::print_point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbnormalError {
    #[error("level {level} out of range for dimension {n}")]
    Level { level: usize, n: usize },
    #[error("point has {found} coordinates, expected {expected}")]
    PointDim { expected: usize, found: usize },
    #[error("point leaves the chart: x{coord} + c = 0 at a regular step with c != 0")]
    OutsideChart { coord: usize },
    #[error("direction is zero")]
    ZeroDirection,
    #[error("direction is not in D(q)")]
    NotInDistribution,
    #[error(transparent)]
    Sig(#[from] SigError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Coordinate vectors, index `k - 1` for `d/dx_k`.
pub type Basis = Vec<Vec<Rational>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbnormalCone {
    /// No abnormal directions at all (level `n - 2`).
    Empty,
    Subspace(Basis),
    /// `C_i(q) ∪ A_j^(i)(q)`.
    UnionOfTwo { a: Basis, b: Basis, j: usize },
}

impl AbnormalCone {
    pub fn kind(&self) -> &'static str {
        match self {
            AbnormalCone::Empty => "empty",
            AbnormalCone::Subspace(_) => "subspace",
            AbnormalCone::UnionOfTwo { .. } => "union",
        }
    }

    pub fn bases(&self) -> Vec<&Basis> {
        match self {
            AbnormalCone::Empty => vec![],
            AbnormalCone::Subspace(b) => vec![b],
            AbnormalCone::UnionOfTwo { a, b, .. } => vec![a, b],
        }
    }

    /// Text form like `(d/dx7, d/dx6) ∪ (d/dx7, d/dx5)`.
    pub fn to_text(&self) -> String {
        match self {
            AbnormalCone::Empty => "empty".to_string(),
            _ => self
                .bases()
                .into_iter()
                .map(|b| format!("({})", b.iter().map(|v| direction_text(v)).collect::<Vec<_>>().join(", ")))
                .collect::<Vec<_>>()
                .join(" ∪ "),
        }
    }
}

/// `d/dx7 + 2*d/dx5` style, highest coordinate first; `0` for the zero vector.
pub fn direction_text(v: &[Rational]) -> String {
    let mut parts = Vec::new();
    for k in (0..v.len()).rev() {
        let c = &v[k];
        if c.is_zero() {
            continue;
        }
        let d = format!("d/dx{}", k + 1);
        let s = if c.is_one() {
            d
        } else if (-c).is_one() {
            format!("-{d}")
        } else {
            format!("{}*{d}", crate::symcore::rational::fmt_rational(c))
        };
        parts.push(s);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// RREF taken with `d/dx_n` as the leading column.
fn canonical(rows: &[Vec<Rational>]) -> Basis {
    let rev: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().rev().cloned().collect()).collect();
    linalg::rref(&rev)
        .into_iter()
        .map(|r| r.into_iter().rev().collect())
        .collect()
}

fn unit(n: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[k - 1] = Rational::one();
    v
}

/// `C_i = (d/dx_n, ..., d/dx_{n-i})`, as 1-based coordinate indices.
pub fn characteristic_basis(word: &KRWord, i: usize) -> Result<Vec<usize>, AbnormalError> {
    let n = word.dim();
    if i + 4 > n {
        return Err(AbnormalError::Level { level: i, n });
    }
    Ok((n - i..=n).rev().collect())
}

/// Generators `(d/dx_n, ..., d/dx_{n-i}, kappa2^{n-i})` of `D^(i)`,
/// `0 <= i <= n - 3`, with the last one lifted to `R^n`.
pub fn derived_generators(word: &KRWord, i: usize) -> Result<Vec<PolyVF>, AbnormalError> {
    let n = word.dim();
    if i + 3 > n {
        return Err(AbnormalError::Level { level: i, n });
    }
    let prefix = KRWord::new(word.steps[..n - 3 - i].to_vec());
    let k2 = build(&prefix).f2.lift(n)?;
    let mut gens: Vec<PolyVF> = (n - i..=n).rev().map(|k| PolyVF::coordinate(n, k - 1)).collect();
    gens.push(k2);
    Ok(gens)
}

fn check_point(word: &KRWord, q: &[Rational]) -> Result<(), AbnormalError> {
    let n = word.dim();
    if q.len() != n {
        return Err(AbnormalError::PointDim {
            expected: n,
            found: q.len(),
        });
    }
    for k in 4..=n {
        if let KRStep::Regular(c) = word.step_at_coord(k) {
            if !c.is_zero() && (&q[k - 1] + c).is_zero() {
                return Err(AbnormalError::OutsideChart { coord: k });
            }
        }
    }
    Ok(())
}

/// `(j, vanishing coordinates)` of the only `S_j^(i+j)` through zero, if any.
fn l_data(word: &KRWord, i: usize) -> Result<Option<(usize, Vec<usize>)>, AbnormalError> {
    let n = word.dim();
    if n < 5 || i > n - 5 {
        return Ok(None);
    }
    let w = delta_of_word(word)?;
    let letter = w.letters()[w.len() - 1 - i] as usize;
    if letter == 0 {
        return Ok(None);
    }
    let j = letter - 1;
    Ok(Some((j, (n - i - j..=n - i).rev().collect())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocusDescription {
    /// Text of the defining equation(s), e.g. `x6*x5 = 0`.
    pub equation: String,
    /// Coordinates entering the equation, highest first.
    pub coords: Vec<usize>,
}

/// `K_i = {prod x_k = 0}` over singular steps at `5 <= k <= n - i`.
pub fn singular_locus(word: &KRWord, i: usize) -> Option<LocusDescription> {
    let n = word.dim();
    if n < 5 || i > n - 5 {
        return None;
    }
    let coords: Vec<usize> = (5..=n - i).rev().filter(|&k| word.step_at_coord(k).is_singular()).collect();
    if coords.is_empty() {
        return None;
    }
    let prod = coords.iter().map(|k| format!("x{k}")).collect::<Vec<_>>().join("*");
    Some(LocusDescription {
        equation: format!("{prod} = 0"),
        coords,
    })
}

/// `L_i`: the coordinate subspace where `A^(i)` is not a linear subspace.
pub fn l_locus(word: &KRWord, i: usize) -> Result<Option<LocusDescription>, AbnormalError> {
    Ok(l_data(word, i)?.map(|(_, coords)| {
        let eq = coords.iter().map(|k| format!("x{k}")).collect::<Vec<_>>().join(" = ");
        LocusDescription {
            equation: format!("{eq} = 0"),
            coords,
        }
    }))
}

fn values_at(fields: &[PolyVF], q: &[Rational]) -> Result<Basis, AbnormalError> {
    Ok(fields.iter().map(|f| f.evaluate(q)).collect::<Result<_, _>>()?)
}

/// `A_j^(i)(q) = D^(i)(q) ∩ {v_k = 0 for k in the locus}`.
fn second_branch(word: &KRWord, i: usize, locus: &[usize], q: &[Rational]) -> Result<Basis, AbnormalError> {
    let n = word.dim();
    let d = values_at(&derived_generators(word, i)?, q)?;
    let tangent: Basis = (1..=n).filter(|k| !locus.contains(k)).map(|k| unit(n, k)).collect();
    Ok(canonical(&linalg::intersect(&d, &tangent, n)))
}

pub fn abnormal_cone(word: &KRWord, i: usize, q: &[Rational]) -> Result<AbnormalCone, AbnormalError> {
    let n = word.dim();
    check_point(word, q)?;
    if i + 2 > n {
        return Err(AbnormalError::Level { level: i, n });
    }
    let coords = |top: usize, count: usize| -> Basis { (0..count).map(|t| unit(n, top - t)).collect() };
    if i == n - 2 {
        return Ok(AbnormalCone::Empty);
    }
    if i + 4 >= n {
        // Levels n-4 and n-3 both give C_{n-4}; zero when n = 3.
        return Ok(AbnormalCone::Subspace(coords(n, n - 3)));
    }
    let c = coords(n, i + 1);
    match l_data(word, i)? {
        Some((j, locus)) if locus.iter().all(|&k| q[k - 1].is_zero()) => {
            let b = second_branch(word, i, &locus, q)?;
            Ok(AbnormalCone::UnionOfTwo { a: c, b, j })
        }
        _ => Ok(AbnormalCone::Subspace(c)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidVerdict {
    pub rigid: bool,
    /// `C0`, `A_j^(0)` or `none`.
    pub reason: String,
}

pub fn is_rigid_direction(word: &KRWord, q: &[Rational], v: &[Rational]) -> Result<RigidVerdict, AbnormalError> {
    let n = word.dim();
    check_point(word, q)?;
    if v.len() != n {
        return Err(AbnormalError::PointDim {
            expected: n,
            found: v.len(),
        });
    }
    if v.iter().all(Zero::is_zero) {
        return Err(AbnormalError::ZeroDirection);
    }
    let sys = build(word);
    let d = values_at(&sys.pair(), q)?;
    if !linalg::in_span(&d, v) {
        return Err(AbnormalError::NotInDistribution);
    }
    if v[..n - 1].iter().all(Zero::is_zero) {
        return Ok(RigidVerdict {
            rigid: true,
            reason: "C0".into(),
        });
    }
    if n >= 5 {
        if let AbnormalCone::UnionOfTwo { b, j, .. } = abnormal_cone(word, 0, q)? {
            if linalg::in_span(&b, v) {
                return Ok(RigidVerdict {
                    rigid: true,
                    reason: format!("A_{j}^(0)"),
                });
            }
        }
    }
    Ok(RigidVerdict {
        rigid: false,
        reason: "none".into(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeReport {
    pub level: usize,
    pub point: String,
    pub cone: ConeJson,
    #[serde(rename = "K_equation")]
    pub k_equation: Option<String>,
    #[serde(rename = "L_subspace")]
    pub l_subspace: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeJson {
    pub kind: &'static str,
    pub bases: Vec<Vec<String>>,
    pub j: Option<usize>,
}

pub fn cone_report(word: &KRWord, i: usize, q: &[Rational]) -> Result<ConeReport, AbnormalError> {
    let cone = abnormal_cone(word, i, q)?;
    let j = match &cone {
        AbnormalCone::UnionOfTwo { j, .. } => Some(*j),
        _ => None,
    };
    Ok(ConeReport {
        level: i,
        point: print_point(q),
        cone: ConeJson {
            kind: cone.kind(),
            bases: cone
                .bases()
                .iter()
                .map(|b| b.iter().map(|v| direction_text(v)).collect())
                .collect(),
            j,
        },
        k_equation: singular_locus(word, i).map(|l| l.equation),
        l_subspace: l_locus(word, i)?.map(|l| l.equation),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TrailerRigidReport {
    pub sigtype: String,
    /// Directions of rigid motions, e.g. `d/dth2 + d/dth1`.
    pub generators: Vec<String>,
    /// The `S_j^(j)` component the configuration lies on, if any.
    pub component: Option<Vec<String>>,
    /// Axles (0 = last trailer) whose centers stay put along the extra motion.
    pub fixed_axles: Vec<usize>,
}

/// Rigid motions of the n-trailer through `config`: `d/dth_n` always, and
/// `d/dth_n + ... + d/dth_{n-k}` when the type ends in `a_k`, `k >= 1`.
pub fn trailer_rigid_classify(config: &TrailerConfig) -> Result<TrailerRigidReport, TrailerError> {
    let n = config.trailers();
    let w = delta_trailer(config)?;
    let mut generators = vec![format!("d/dth{n}")];
    let mut component = None;
    let mut fixed_axles = Vec::new();
    if let Some(&k) = w.letters().last().filter(|&&k| k >= 1) {
        let k = k as usize;
        generators.push((n - k..=n).rev().map(|m| format!("d/dth{m}")).collect::<Vec<_>>().join(" + "));
        component = Some(sji_trailer(n, k - 1, k - 1)?.iter().map(|c| c.to_string()).collect());
        fixed_axles = (0..=n - k).collect();
    }
    Ok(TrailerRigidReport {
        sigtype: w.to_string(),
        generators,
        component,
        fixed_axles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{origin, q, rank_at};

    fn kr(s: &str) -> KRWord {
        s.parse().unwrap()
    }

    fn text(word: &str, i: usize, p: &[Rational]) -> String {
        abnormal_cone(&kr(word), i, p).unwrap().to_text()
    }

    #[test]
    fn characteristic_directions() {
        assert_eq!(characteristic_basis(&kr("R0.S.S.R0"), 0).unwrap(), vec![7]);
        assert_eq!(characteristic_basis(&kr("R0.S.S.R0"), 1).unwrap(), vec![7, 6]);
        assert_eq!(characteristic_basis(&kr("R0.S.S.R0"), 3).unwrap().len(), 4);
        assert!(characteristic_basis(&kr("R0.S.S.R0"), 4).is_err());
    }

    #[test]
    fn dimension_seven_cones() {
        let z = origin(7);
        assert_eq!(text("R0.S.S.R0", 0, &z), "(d/dx7) ∪ (d/dx5)");
        assert_eq!(text("R0.S.S.R1", 0, &z), "(d/dx7)");
        let mut p = z.clone();
        p[6] = q(3);
        p[3] = q(2);
        assert_eq!(text("R0.S.S.R0", 1, &p), "(d/dx7, d/dx6) ∪ (d/dx7, d/dx5)");
        assert_eq!(text("R0.S.S.R1", 1, &p), "(d/dx7, d/dx6) ∪ (d/dx7, d/dx5)");
        assert_eq!(text("R0.S.S.R0", 2, &z), "(d/dx7, d/dx6, d/dx5) ∪ (d/dx7, d/dx6, d/dx4)");
        // Off L_0 the cone is C_0.
        assert_eq!(text("R0.S.S.R0", 0, &p), "(d/dx7)");
    }

    #[test]
    fn degenerate_levels() {
        let w = kr("R0.S.S.R0");
        let z = origin(7);
        assert_eq!(abnormal_cone(&w, 3, &z).unwrap(), abnormal_cone(&w, 4, &z).unwrap());
        assert_eq!(abnormal_cone(&w, 5, &z).unwrap(), AbnormalCone::Empty);
        assert!(abnormal_cone(&w, 6, &z).is_err());
        assert_eq!(abnormal_cone(&KRWord::default(), 0, &origin(3)).unwrap(), AbnormalCone::Subspace(vec![]));
        assert_eq!(abnormal_cone(&KRWord::default(), 1, &origin(3)).unwrap(), AbnormalCone::Empty);
    }

    #[test]
    fn loci() {
        let eq = |w: &str, i| singular_locus(&kr(w), i).map(|l| l.equation);
        assert_eq!(eq("R0.S.S.R0", 0).as_deref(), Some("x6*x5 = 0"));
        assert_eq!(eq("R0.S.S.R0", 1).as_deref(), Some("x6*x5 = 0"));
        assert_eq!(eq("R0.S.S.R0", 2).as_deref(), Some("x5 = 0"));
        assert_eq!(eq("R0.S.S.R0", 3), None);
        let l = |w: &str, i| l_locus(&kr(w), i).unwrap().map(|l| l.equation);
        assert_eq!(l("R0.S.S.R0", 0).as_deref(), Some("x7 = x6 = 0"));
        assert_eq!(l("R0.S.S.R1", 0), None);
        assert_eq!(l("R0.S.S.R1", 1).as_deref(), Some("x6 = 0"));
        assert_eq!(l("R0.S.S.R1", 2).as_deref(), Some("x5 = 0"));
    }

    #[test]
    fn chart_guard() {
        let mut p = origin(7);
        p[6] = q(-1);
        assert_eq!(
            abnormal_cone(&kr("R0.S.S.R1"), 0, &p),
            Err(AbnormalError::OutsideChart { coord: 7 })
        );
    }

    #[test]
    fn rigidity() {
        let z = origin(5);
        let r = is_rigid_direction(&kr("R0.S"), &z, &unit(5, 5)).unwrap();
        assert_eq!((r.rigid, r.reason.as_str()), (true, "C0"));
        let r = is_rigid_direction(&kr("R0.S"), &z, &unit(5, 4)).unwrap();
        assert_eq!((r.rigid, r.reason.as_str()), (true, "A_0^(0)"));
        let f2 = build(&kr("R0.R0")).f2.evaluate(&z).unwrap();
        assert!(!is_rigid_direction(&kr("R0.R0"), &z, &f2).unwrap().rigid);
        assert_eq!(
            is_rigid_direction(&kr("R0.R0"), &z, &unit(5, 2)),
            Err(AbnormalError::NotInDistribution)
        );
    }

    #[test]
    fn characteristic_property() {
        let pts = [origin(7), vec![q(1), q(-2), q(3), q(0), q(1), q(-1), q(2)]];
        for w in ["R0.S.S.R0", "R0.R1.S.R0", "R0.S.R0.S"] {
            let w = kr(w);
            for i in 0..=3 {
                let next = derived_generators(&w, i + 1).unwrap();
                for k in characteristic_basis(&w, i).unwrap() {
                    let c = PolyVF::coordinate(7, k - 1);
                    for g in &next {
                        let mut ext = next.clone();
                        ext.push(c.lie_bracket(g).unwrap());
                        for p in &pts {
                            assert_eq!(rank_at(&next, p).unwrap(), rank_at(&ext, p).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn trailer_rigidity() {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        let c = TrailerConfig::new(0.0, 0.0, vec![0.3, 0.2, 0.2 + FRAC_PI_2]);
        let r = trailer_rigid_classify(&c).unwrap();
        assert_eq!(r.generators, vec!["d/dth2", "d/dth2 + d/dth1"]);
        assert_eq!(r.fixed_axles, vec![0, 1]);
        let centers = c.axle_centers();
        let mut moved = c.clone();
        moved.theta[1] += 0.3;
        moved.theta[2] += 0.3;
        let after = moved.axle_centers();
        for m in 0..=1 {
            assert!((centers[m].0 - after[m].0).abs() < 1e-12 && (centers[m].1 - after[m].1).abs() < 1e-12);
        }
        let r = trailer_rigid_classify(&TrailerConfig::new(0.0, 0.0, vec![0.3, 0.5, 0.9])).unwrap();
        assert_eq!(r.generators, vec!["d/dth2"]);
        let c = TrailerConfig::new(0.0, 0.0, vec![0.0, 0.1, 0.1 + FRAC_PI_2, 0.1 + FRAC_PI_2 + FRAC_PI_4]);
        let r = trailer_rigid_classify(&c).unwrap();
        assert_eq!(r.sigtype, "a0.a1.a2");
        assert_eq!(r.component.unwrap(), vec!["th2 - th1 in alpha1", "th3 - th2 in alpha2"]);
        assert_eq!(r.generators[1], "d/dth3 + d/dth2 + d/dth1");
    }

    #[test]
    fn report_json() {
        let r = cone_report(&kr("R0.S.S.R0"), 0, &origin(7)).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"kind\":\"union\""));
        assert!(s.contains("\"L_subspace\":\"x7 = x6 = 0\""));
    }
}
