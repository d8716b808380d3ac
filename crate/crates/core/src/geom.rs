//! Exact geometric predicates: sides of hyperplanes, chessboard colors, genericity.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::FamilySpec;
use crate::combi::{blocks_of, combinations, set_partitions};
use crate::linalg::rank;
use crate::rat::{self, Rat};

pub type Point = Vec<Rat>;

/// `{x : <normal, x> = offset}`, with `h+ = {<normal,x> >= offset}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedHyperplane {
    #[serde(with = "rat::vec")]
    pub normal: Vec<Rat>,
    #[serde(with = "rat::one")]
    pub offset: Rat,
}

impl OrientedHyperplane {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        debug_assert!(normal.iter().any(|x| !x.is_zero()));
        OrientedHyperplane { normal, offset }
    }

    pub fn value(&self, x: &[Rat]) -> Rat {
        rat::dot(&self.normal, x) - &self.offset
    }

    pub fn reversed(&self) -> Self {
        OrientedHyperplane {
            normal: self.normal.iter().map(|v| -v).collect(),
            offset: -self.offset.clone(),
        }
    }
}

/// Sign of `<normal, x> - offset`.
pub fn side(h: &OrientedHyperplane, x: &[Rat]) -> i8 {
    rat::sign(&h.value(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    A,
    B,
    Boundary,
}

/// A when `x` lies in an even number of positive halfspaces, B when odd,
/// Boundary when it lies on some hyperplane.
pub fn chessboard_color(hyperplanes: &[OrientedHyperplane], x: &[Rat]) -> Color {
    let mut odd = false;
    for h in hyperplanes {
        match side(h, x) {
            0 => return Color::Boundary,
            1 => odd = !odd,
            _ => {}
        }
    }
    if odd {
        Color::B
    } else {
        Color::A
    }
}

/// Witness of a failed genericity check: a point subset, its partition into
/// classes, and the family whose rank condition it violates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityWitness {
    pub family: usize,
    pub classes: Vec<Vec<usize>>,
    pub rank: usize,
    pub expected: usize,
}

impl std::fmt::Display for GenericityWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "family {} classes {:?}: rank {} < {}", self.family, self.classes, self.rank, self.expected)
    }
}

/// Number of rank evaluations `check_generic` would perform.
pub fn generic_check_cost(npoints: usize, specs: &[FamilySpec]) -> u128 {
    let mut total: u128 = 0;
    for s in dedup_specs(specs) {
        let (l, k) = (s.l(), s.k);
        for size in 2..=(l + k).min(npoints) {
            let r = size.saturating_sub(l).max(1);
            if r > k {
                continue;
            }
            let c = crate::parity::binomial(npoints, size);
            let p = crate::parity::stirling2(size, r);
            let v: u128 = (c * p).try_into().unwrap_or(u128::MAX);
            total = total.saturating_add(v);
        }
    }
    total
}

fn dedup_specs(specs: &[FamilySpec]) -> Vec<&FamilySpec> {
    let mut seen: Vec<(String, usize)> = Vec::new();
    let mut out = Vec::new();
    for s in specs {
        let key = (s.subspace.token(), s.k);
        if !seen.contains(&key) {
            seen.push(key);
            out.push(s);
        }
    }
    out
}

/// Finite genericity test. For every family `(L, k)` and every subset `S` of at
/// most `l + k` points split into the fewest allowed classes `r = max(1, |S| - l) <= k`,
/// the within-class difference vectors together with a basis of `L^⊥` must be
/// independent. Finer partitions give subsets of these vector sets, so they
/// need no separate check.
pub fn check_generic(points: &[Point], specs: &[FamilySpec]) -> Result<(), GenericityWitness> {
    for (fi, s) in specs.iter().enumerate() {
        if specs[..fi].iter().any(|o| o.k == s.k && o.subspace == s.subspace) {
            continue;
        }
        let (l, k) = (s.l(), s.k);
        let comp = s.complement_basis();
        let fast = small_ints(points, comp);
        for size in 2..=(l + k).min(points.len()) {
            let r = size.saturating_sub(l).max(1);
            if r > k {
                continue;
            }
            for subset in combinations(points.len(), size) {
                for labels in set_partitions(size, r) {
                    let classes = blocks_of(&subset, &labels);
                    if let Some((pts, comp_rows)) = &fast {
                        let mut rows = comp_rows.clone();
                        for c in &classes {
                            for &q in &c[1..] {
                                rows.push(pts[q].iter().zip(&pts[c[0]]).map(|(a, b)| a - b).collect());
                            }
                        }
                        let expected = rows.len();
                        if let Some(got) = rank_i128(&mut rows) {
                            if got < expected {
                                return Err(GenericityWitness { family: fi, classes, rank: got, expected });
                            }
                            continue;
                        }
                    }
                    let mut rows: Vec<Vec<Rat>> = comp.to_vec();
                    for c in &classes {
                        for &q in &c[1..] {
                            rows.push(rat::sub(&points[q], &points[c[0]]));
                        }
                    }
                    let expected = rows.len();
                    let got = rank(&rows);
                    if got < expected {
                        return Err(GenericityWitness { family: fi, classes, rank: got, expected });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Points scaled to a common denominator, with the complement rows, when
/// every entry stays below `2^60` so differences fit comfortably in `i128`.
fn small_ints(points: &[Point], comp: &[Vec<Rat>]) -> Option<(Vec<Vec<i128>>, Vec<Vec<i128>>)> {
    use num_integer::Integer;
    use num_traits::{One, ToPrimitive};
    let l = points.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let bound = 1i128 << 60;
    let small = |x: BigInt| x.to_i128().filter(|v| v.abs() < bound);
    let pts = points
        .iter()
        .map(|p| p.iter().map(|x| small(x.numer() * (&l / x.denom()))).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    let comp = comp
        .iter()
        .map(|r| crate::linalg::integer_row(r).into_iter().map(small).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some((pts, comp))
}

/// Fraction-free elimination in `i128`; `None` on overflow.
fn rank_i128(m: &mut [Vec<i128>]) -> Option<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = m[r][c].checked_mul(m[i][j])?.checked_sub(m[i][c].checked_mul(m[r][j])?)?;
                m[i][j] = v / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        r += 1;
    }
    Some(r)
}

/// Moves each coordinate by an independent pseudo-random rational in
/// `[-magnitude, magnitude]` (resolution `magnitude / 2^24`). Deterministic in `seed`.
pub fn perturb(points: &[Point], magnitude: &Rat, seed: u64) -> Vec<Point> {
    if magnitude.is_zero() {
        return points.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = BigInt::from(1u64 << 24);
    points
        .iter()
        .map(|p| {
            p.iter()
                .map(|x| {
                    let u: i64 = rng.gen_range(-(1i64 << 24)..=(1i64 << 24));
                    x + magnitude * Rat::new(BigInt::from(u), scale.clone())
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;
    use crate::rat::{frac, int};

    fn pt(v: &[i64]) -> Point {
        v.iter().map(|&x| int(x)).collect()
    }

    fn whole(d: usize, k: usize) -> FamilySpec {
        FamilySpec::new(Subspace::whole(d), k).unwrap()
    }

    #[test]
    fn side_basics() {
        let h = OrientedHyperplane::new(vec![int(1), int(0)], int(0));
        assert_eq!(side(&h, &pt(&[0, 5])), 0);
        assert_eq!(side(&h, &pt(&[1, 0])), 1);
        let p = pt(&[-3, 2]);
        assert_eq!(side(&h.reversed(), &p), -side(&h, &p));
    }

    #[test]
    fn chessboard_basics() {
        assert_eq!(chessboard_color(&[], &pt(&[4, 4])), Color::A);
        let h = OrientedHyperplane::new(vec![int(1), int(0)], int(0));
        assert_eq!(chessboard_color(&[h.clone()], &pt(&[2, 0])), Color::B);
        assert_eq!(chessboard_color(&[h], &pt(&[0, 1])), Color::Boundary);
    }

    #[test]
    fn collinear_triple_is_not_generic() {
        let pts = vec![pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 2])];
        let w = check_generic(&pts, &[whole(2, 1)]).unwrap_err();
        assert_eq!(w.classes.concat().len(), 3);
    }

    #[test]
    fn coincident_points_are_not_generic() {
        let pts = vec![pt(&[1, 2]), pt(&[1, 2])];
        assert!(check_generic(&pts, &[whole(2, 1)]).is_err());
    }

    #[test]
    fn perturbed_grid_is_generic() {
        let grid: Vec<Point> = (0..3).flat_map(|i| (0..3).map(move |j| pt(&[i, j]))).collect();
        assert!(check_generic(&grid, &[whole(2, 1)]).is_err());
        let p = perturb(&grid, &frac(1, 1_000_000), 11);
        assert!(check_generic(&p, &[whole(2, 2)]).is_ok());
    }

    #[test]
    fn perturb_is_deterministic_and_bounded() {
        let pts = vec![pt(&[1, 2, 3])];
        let m = frac(1, 100);
        let a = perturb(&pts, &m, 3);
        assert_eq!(a, perturb(&pts, &m, 3));
        for (x, y) in a[0].iter().zip(&pts[0]) {
            let dlt = x - y;
            assert!(dlt <= m && dlt >= -m.clone());
        }
        assert_eq!(perturb(&pts, &int(0), 3), pts);
    }
}
