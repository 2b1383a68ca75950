//! Exact pointwise linear algebra over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{denominator_lcm, Rational};

/// Rank of the matrix whose rows are `rows`, by fraction-free elimination
/// over the integers after clearing row denominators.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), width, "ragged matrix");
            let l = denominator_lcm(r);
            r.iter()
                .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .filter(|r: &Vec<BigInt>| r.iter().any(|x| !x.is_zero()))
        .collect();
    bareiss_rank(&mut m, width)
}

fn bareiss_rank(m: &mut [Vec<BigInt>], width: usize) -> usize {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..width {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in r + 1..rows {
            for j in col + 1..width {
                let v = &m[r][col] * &m[i][j] - &m[i][col] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[r][col].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon basis of the row space (zero rows dropped).
pub fn rref(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let Some(width) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut r = 0;
    for col in 0..width {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = Rational::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

/// Basis of `{v : A v = 0}` for the matrix with rows `a`, in RREF.
pub fn nullspace(a: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    let red = rref(a);
    let mut pivots = Vec::new();
    for row in &red {
        if let Some(c) = row.iter().position(|x| !x.is_zero()) {
            pivots.push(c);
        }
    }
    let mut basis = Vec::new();
    for free in (0..width).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); width];
        v[free] = Rational::one();
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    rref(&basis)
}

/// Whether `v` lies in the row span of `basis`.
pub fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut rows = basis.to_vec();
    let before = rank(&rows);
    rows.push(v.to_vec());
    rank(&rows) == before
}

/// Intersection of two row spaces, as an RREF basis.
pub fn intersect(a: &[Vec<Rational>], b: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    // Solve sum x_i a_i - sum y_j b_j = 0 and map solutions back through a.
    let (ka, kb) = (a.len(), b.len());
    if ka == 0 || kb == 0 {
        return Vec::new();
    }
    let mut eqs = vec![vec![Rational::zero(); ka + kb]; width];
    for (c, eq) in eqs.iter_mut().enumerate() {
        for i in 0..ka {
            eq[i] = a[i][c].clone();
        }
        for j in 0..kb {
            eq[ka + j] = -b[j][c].clone();
        }
    }
    let sols = nullspace(&eqs, ka + kb);
    let vecs: Vec<Vec<Rational>> = sols
        .iter()
        .map(|s| {
            (0..width)
                .map(|c| (0..ka).fold(Rational::zero(), |acc, i| acc + &s[i] * &a[i][c]))
                .collect()
        })
        .collect();
    rref(&vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rational::{q, qf};

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[row(&[0, 0, 1]), row(&[0, 0, 1])]), 1);
        assert_eq!(rank(&[row(&[1, 2]), row(&[2, 4])]), 1);
        assert_eq!(rank(&[row(&[1, 2, 3]), row(&[4, 5, 6]), row(&[7, 8, 10])]), 3);
        let frac = vec![vec![qf(1, 2), qf(1, 3)], vec![q(3), q(2)]];
        assert_eq!(rank(&frac), 1);
    }

    #[test]
    fn nullspace_of_plane() {
        let ns = nullspace(&[row(&[1, 1, 0])], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(&v[0] + &v[1], q(0));
        }
    }

    #[test]
    fn intersection_of_planes() {
        let a = vec![row(&[1, 0, 0]), row(&[0, 1, 0])];
        let b = vec![row(&[0, 1, 0]), row(&[0, 0, 1])];
        assert_eq!(intersect(&a, &b, 3), vec![row(&[0, 1, 0])]);
    }

    #[test]
    fn span_membership() {
        let b = vec![row(&[1, 1, 0])];
        assert!(in_span(&b, &row(&[2, 2, 0])));
        assert!(!in_span(&b, &row(&[1, 0, 0])));
    }
}
