//! Exact linear algebra over the rationals.
//!
//! Rank uses fraction-free (Bareiss) elimination on an integer copy of the
//! matrix; canonical forms and null spaces use rational reduced row echelon
//! form, which is unique and therefore doubles as a subspace fingerprint.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Scales a rational row by the lcm of its denominators.
pub fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    row.iter().map(|r| r.numer() * (&l / r.denom())).collect()
}

fn check_width(rows: &[Vec<Rat>], ncols: usize) -> Result<()> {
    for r in rows {
        if r.len() != ncols {
            return Err(Error::Dimension { expected: ncols, got: r.len() });
        }
    }
    Ok(())
}

/// Rank by Bareiss elimination. Every intermediate division is exact.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let nrows = m.len();
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(rows: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Result<Vec<Vec<Rat>>> {
    check_width(rows, ncols)?;
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect())
}

/// Determinant of a square rational matrix (Gaussian elimination).
pub fn det(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let v = &f * &m[c][j];
                m[i][j] -= v;
            }
        }
    }
    d
}

/// Primitive integer representative of a direction, first nonzero entry positive.
/// Returns `None` for the zero vector.
pub fn canonical_direction(v: &[Rat]) -> Option<Vec<BigInt>> {
    let ints = integer_row(v);
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let first_neg = ints.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false);
    Some(
        ints.into_iter()
            .map(|x| {
                let y = x / &g;
                if first_neg {
                    -y
                } else {
                    y
                }
            })
            .collect(),
    )
}

pub fn to_rat_vec(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// A linear subspace of `R^d`, stored by a basis and its canonical echelon form.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
    canonical: Vec<Vec<Rat>>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.canonical == other.canonical
    }
}

impl Eq for Subspace {}

impl Subspace {
    /// Span of the given vectors. Dependent vectors are rejected, since the
    /// basis is expected to be independent.
    pub fn from_basis(ambient: usize, basis: Vec<Vec<Rat>>) -> Result<Self> {
        check_width(&basis, ambient)?;
        let (canonical, _) = rref(&basis, ambient);
        if canonical.len() != basis.len() {
            return Err(Error::Invariant(format!(
                "basis of {} vectors has rank {}",
                basis.len(),
                canonical.len()
            )));
        }
        Ok(Subspace { ambient, basis, canonical })
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Result<Self> {
        check_width(vectors, ambient)?;
        let (canonical, _) = rref(vectors, ambient);
        Ok(Subspace { ambient, basis: canonical.clone(), canonical })
    }

    pub fn whole(ambient: usize) -> Self {
        let basis: Vec<Vec<Rat>> = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        Subspace { ambient, canonical: basis.clone(), basis }
    }

    pub fn dim(&self) -> usize {
        self.canonical.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn canonical_form(&self) -> &[Vec<Rat>] {
        &self.canonical
    }

    /// Text token of the canonical form: equal subspaces give equal tokens.
    pub fn token(&self) -> String {
        let rows: Vec<String> = self
            .canonical
            .iter()
            .map(|r| r.iter().map(crate::rat::format).collect::<Vec<_>>().join(","))
            .collect();
        format!("{}:[{}]", self.ambient, rows.join(";"))
    }

    pub fn orthogonal_complement(&self) -> Subspace {
        let basis = nullspace(&self.canonical, self.ambient).expect("widths checked on construction");
        let (canonical, _) = rref(&basis, self.ambient);
        Subspace { ambient: self.ambient, basis, canonical }
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut rows = self.canonical.clone();
        rows.push(v.to_vec());
        rank(&rows) == self.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(d: usize, i: usize) -> Vec<Rat> {
        (0..d).map(|j| if i == j { int(1) } else { int(0) }).collect()
    }

    // Independent oracle: plain rational elimination choosing pivots from the
    // bottom row upward and scanning columns right to left.
    fn rank_reverse(rows: &[Vec<Rat>]) -> usize {
        let mut m = rows.to_vec();
        if m.is_empty() {
            return 0;
        }
        let ncols = m[0].len();
        let mut used = vec![false; m.len()];
        let mut r = 0;
        for c in (0..ncols).rev() {
            let Some(p) = (0..m.len()).rev().find(|&i| !used[i] && !m[i][c].is_zero()) else {
                continue;
            };
            used[p] = true;
            r += 1;
            for i in 0..m.len() {
                if i != p && !m[i][c].is_zero() {
                    let f = &m[i][c] / &m[p][c];
                    for j in 0..ncols {
                        let v = &f * &m[p][j];
                        m[i][j] -= v;
                    }
                }
            }
        }
        r
    }

    #[test]
    fn identity_has_full_rank_and_trivial_nullspace() {
        let id: Vec<Vec<Rat>> = (0..4).map(|i| e(4, i)).collect();
        assert_eq!(rank(&id), 4);
        assert!(nullspace(&id, 4).unwrap().is_empty());
    }

    #[test]
    fn complement_of_axis_line() {
        let l = Subspace::from_basis(3, vec![e(3, 0)]).unwrap();
        let c = l.orthogonal_complement();
        assert_eq!(c, Subspace::from_basis(3, vec![e(3, 1), e(3, 2)]).unwrap());
        assert_eq!(c.orthogonal_complement(), l);
    }

    #[test]
    fn random_rank_nullity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m: Vec<Vec<Rat>> = (0..4)
                .map(|_| (0..6).map(|_| frac(rng.gen_range(-3..=3), rng.gen_range(1..=4))).collect())
                .collect();
            let r = rank(&m);
            assert_eq!(r, rank_reverse(&m));
            let ns = nullspace(&m, 6).unwrap();
            assert_eq!(r + ns.len(), 6);
            for v in &ns {
                for row in &m {
                    assert!(crate::rat::dot(row, v).is_zero());
                }
            }
        }
    }

    #[test]
    fn dependent_matrix_rank() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(rank(&m), 1);
        assert_eq!(rank_reverse(&m), 1);
        assert!(det(&m).is_zero());
    }

    #[test]
    fn canonical_direction_is_primitive_and_signed() {
        let d = canonical_direction(&[frac(-2, 3), frac(4, 3)]).unwrap();
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(-2)]);
        assert!(canonical_direction(&[int(0), int(0)]).is_none());
    }

    #[test]
    fn subspace_token_ignores_basis_choice() {
        let a = Subspace::from_basis(3, vec![e(3, 0), e(3, 1)]).unwrap();
        let b = Subspace::from_basis(3, vec![vec![int(1), int(1), int(0)], vec![int(1), int(-1), int(0)]]).unwrap();
        assert_eq!(a.token(), b.token());
        assert!(a.contains(&[int(3), int(-5), int(0)]));
        assert!(!a.contains(&e(3, 2)));
    }
}
