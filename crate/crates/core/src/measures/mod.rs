//! Finite measures beyond point sets: sampling odd supports, region measures of
//! chessboard colorings, the sample-and-solve limit, the paraboloid lift and
//! fixed-direction counterexamples.

pub mod converge;
pub mod counter;
pub mod lift;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::Balance;
use crate::error::{Error, Result};
use crate::filter::{approx_point, FastPlane};
use crate::geom::{chessboard_color, Color, OrientedHyperplane, Point};
use crate::rat::{self, Rat};

/// Sample coordinates are multiples of `2^-SAMPLE_BITS` in the unit parameter.
pub const SAMPLE_BITS: u32 = 53;

/// A finite measure. Segments, polygons and boxes are uniform; a segment
/// carries unit mass, a polygon its area and a box its volume.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MeasureSpec {
    Points {
        #[serde(with = "rat::mat")]
        points: Vec<Point>,
        #[serde(with = "rat::vec")]
        weights: Vec<Rat>,
    },
    Segment {
        #[serde(with = "rat::vec")]
        a: Point,
        #[serde(with = "rat::vec")]
        b: Point,
    },
    /// Convex, counterclockwise, plane only.
    Polygon {
        #[serde(with = "rat::mat")]
        vertices: Vec<Point>,
    },
    Box {
        #[serde(with = "rat::vec")]
        lo: Point,
        #[serde(with = "rat::vec")]
        hi: Point,
    },
}

fn cross2(o: &[Rat], a: &[Rat], b: &[Rat]) -> Rat {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Twice the signed area of a polygon.
fn shoelace2(v: &[Point]) -> Rat {
    let n = v.len();
    (0..n).map(|i| &v[i][0] * &v[(i + 1) % n][1] - &v[(i + 1) % n][0] * &v[i][1]).fold(Rat::zero(), |a, x| a + x)
}

impl MeasureSpec {
    /// Equal unit weights on `points`.
    pub fn uniform_points(points: Vec<Point>) -> Self {
        let weights = vec![Rat::one(); points.len()];
        MeasureSpec::Points { points, weights }
    }

    pub fn dim(&self) -> usize {
        match self {
            MeasureSpec::Points { points, .. } => points.first().map_or(0, Vec::len),
            MeasureSpec::Segment { a, .. } => a.len(),
            MeasureSpec::Polygon { .. } => 2,
            MeasureSpec::Box { lo, .. } => lo.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::Points { points, weights } => {
                if points.is_empty() || points.len() != weights.len() {
                    return Err(Error::InvalidInput("point masses need one weight per point".into()));
                }
                let d = points[0].len();
                if points.iter().any(|p| p.len() != d) {
                    return Err(Error::InvalidInput("point masses of mixed dimension".into()));
                }
                if weights.iter().any(Signed::is_negative) || weights.iter().all(Zero::is_zero) {
                    return Err(Error::InvalidInput("weights must be nonnegative with positive total".into()));
                }
            }
            MeasureSpec::Segment { a, b } => {
                if a.len() != b.len() || a.is_empty() {
                    return Err(Error::Dimension { expected: a.len(), got: b.len() });
                }
                if a == b {
                    return Err(Error::InvalidInput("segment endpoints coincide".into()));
                }
            }
            MeasureSpec::Polygon { vertices } => {
                if vertices.len() < 3 || vertices.iter().any(|v| v.len() != 2) {
                    return Err(Error::InvalidInput("polygon needs at least three planar vertices".into()));
                }
                let n = vertices.len();
                for i in 0..n {
                    if !cross2(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]).is_positive() {
                        return Err(Error::InvalidInput("polygon must be strictly convex and counterclockwise".into()));
                    }
                }
                // Local left turns everywhere still allow a polygon winding twice.
                let turns = (0..n).filter(|&i| cross2(&vertices[0], &vertices[i], &vertices[(i + 1) % n]).is_negative()).count();
                if turns > 0 {
                    return Err(Error::InvalidInput("polygon winds more than once".into()));
                }
            }
            MeasureSpec::Box { lo, hi } => {
                if lo.len() != hi.len() || lo.is_empty() {
                    return Err(Error::Dimension { expected: lo.len(), got: hi.len() });
                }
                if lo.iter().zip(hi).any(|(a, b)| a >= b) {
                    return Err(Error::InvalidInput("box needs lo < hi in every coordinate".into()));
                }
            }
        }
        Ok(())
    }

    pub fn total(&self) -> Rat {
        match self {
            MeasureSpec::Points { weights, .. } => weights.iter().fold(Rat::zero(), |a, w| a + w),
            MeasureSpec::Segment { .. } => Rat::one(),
            MeasureSpec::Polygon { vertices } => shoelace2(vertices) / rat::int(2),
            MeasureSpec::Box { lo, hi } => lo.iter().zip(hi).fold(Rat::one(), |a, (l, h)| a * (h - l)),
        }
    }

    /// Corners of the axis-parallel bounding box of the support.
    pub fn bounds(&self) -> (Point, Point) {
        let pts: Vec<&Point> = match self {
            MeasureSpec::Points { points, .. } => points.iter().collect(),
            MeasureSpec::Segment { a, b } => vec![a, b],
            MeasureSpec::Polygon { vertices } => vertices.iter().collect(),
            MeasureSpec::Box { lo, hi } => vec![lo, hi],
        };
        let d = pts[0].len();
        let lo = (0..d).map(|i| pts.iter().map(|p| p[i].clone()).min().unwrap()).collect();
        let hi = (0..d).map(|i| pts.iter().map(|p| p[i].clone()).max().unwrap()).collect();
        (lo, hi)
    }
}

fn unit_sample(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(BigInt::from(rng.gen_range(0..(1u64 << SAMPLE_BITS))), BigInt::from(1u64 << SAMPLE_BITS))
}

/// One point drawn from a non-atomic measure.
fn draw(measure: &MeasureSpec, rng: &mut ChaCha8Rng, cumulative: &[f64]) -> Point {
    match measure {
        MeasureSpec::Segment { a, b } => {
            let u = unit_sample(rng);
            a.iter().zip(b).map(|(x, y)| x + &u * (y - x)).collect()
        }
        MeasureSpec::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| l + unit_sample(rng) * (h - l)).collect(),
        MeasureSpec::Polygon { vertices } => {
            // Fan triangle chosen by area, then a uniform point in it.
            let x: f64 = rng.gen_range(0.0..*cumulative.last().unwrap());
            let i = cumulative.partition_point(|&c| c <= x).min(cumulative.len() - 1) + 1;
            let (v0, v1, v2) = (&vertices[0], &vertices[i], &vertices[i + 1]);
            let mut u = unit_sample(rng);
            let mut v = unit_sample(rng);
            if &u + &v > Rat::one() {
                u = Rat::one() - u;
                v = Rat::one() - v;
            }
            (0..2).map(|k| &v0[k] + &u * (&v1[k] - &v0[k]) + &v * (&v2[k] - &v0[k])).collect()
        }
        MeasureSpec::Points { .. } => unreachable!("rejected by caller"),
    }
}

fn fan_cumulative(measure: &MeasureSpec) -> Vec<f64> {
    let MeasureSpec::Polygon { vertices } = measure else { return Vec::new() };
    let mut acc = 0.0;
    (1..vertices.len() - 1)
        .map(|i| {
            acc += rat::to_f64(&cross2(&vertices[0], &vertices[i], &vertices[i + 1]));
            acc
        })
        .collect()
}

/// `count` independent points from a non-atomic measure, deterministic in `seed`.
pub fn sample(measure: &MeasureSpec, count: usize, seed: u64) -> Result<Vec<Point>> {
    measure.validate()?;
    if matches!(measure, MeasureSpec::Points { .. }) {
        return Err(Error::InvalidInput("cannot sample an atomic measure".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cumulative = fan_cumulative(measure);
    Ok((0..count).map(|_| draw(measure, &mut rng, &cumulative)).collect())
}

/// `2r + 1` independent points from a non-atomic measure.
pub fn sample_odd(measure: &MeasureSpec, r: usize, seed: u64) -> Result<Vec<Point>> {
    sample(measure, 2 * r + 1, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    Exact,
    MonteCarlo { seed: u64, samples: usize, confidence: f64 },
}

/// Measures of the closed chessboard regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMeasure {
    #[serde(with = "rat::one")]
    pub total: Rat,
    #[serde(with = "rat::one")]
    pub mu_a: Rat,
    #[serde(with = "rat::one")]
    pub mu_b: Rat,
    pub method: Method,
    /// Wilson intervals for `mu_a / total` and `mu_b / total` when estimated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<[(f64, f64); 2]>,
}

impl RegionMeasure {
    /// `min(mu_a, mu_b) / total`; at least one half means bisected.
    pub fn min_ratio(&self) -> f64 {
        rat::to_f64(&(self.mu_a.clone().min(self.mu_b.clone()) / &self.total))
    }

    pub fn is_bisected(&self) -> bool {
        let two = rat::int(2);
        &self.mu_a * &two >= self.total && &self.mu_b * &two >= self.total
    }
}

/// Parameters for the estimated cases.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub samples: usize,
    pub confidence: f64,
    pub seed: u64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions { samples: 20_000, confidence: 0.95, seed: 0 }
    }
}

/// Two-sided standard normal quantile for `confidence` in `(0, 1)`.
pub fn normal_quantile(confidence: f64) -> f64 {
    // Acklam's rational approximation of the inverse normal CDF.
    let p = 1.0 - (1.0 - confidence) / 2.0;
    let a = [-3.969683028665376e1, 2.209460984245205e2, -2.759285104469687e2, 1.383577518672690e2, -3.066479806614716e1, 2.506628277459239];
    let b = [-5.447609879822406e1, 1.615858368580409e2, -1.556989798598866e2, 6.680131188771972e1, -1.328068155288572e1];
    let c = [-7.784894002430293e-3, -3.223964580411365e-1, -2.400758277161838, -2.549732539343734, 4.374664141464968, 2.938163982698783];
    let d = [7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996, 3.754408661907416];
    let tail = |q: f64| {
        (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    };
    if p > 0.97575 {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    }
}

/// Wilson score interval for `hits` successes out of `n`.
pub fn wilson(hits: usize, n: usize, confidence: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = normal_quantile(confidence);
    let nf = n as f64;
    let p = hits as f64 / nf;
    let denom = 1.0 + z * z / nf;
    let center = (p + z * z / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z * z / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Splits a convex polygon by the line `h = 0` into its closed nonnegative and
/// nonpositive parts; degenerate pieces are dropped.
fn clip(poly: &[Point], h: &OrientedHyperplane) -> (Vec<Point>, Vec<Point>) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let (p, q) = (&poly[i], &poly[(i + 1) % n]);
        let (vp, vq) = (h.value(p), h.value(q));
        if !vp.is_negative() {
            pos.push(p.clone());
        }
        if !vp.is_positive() {
            neg.push(p.clone());
        }
        if (vp.is_positive() && vq.is_negative()) || (vp.is_negative() && vq.is_positive()) {
            let t = &vp / (&vp - &vq);
            let x: Point = p.iter().zip(q).map(|(a, b)| a + &t * (b - a)).collect();
            pos.push(x.clone());
            neg.push(x);
        }
    }
    let keep = |v: Vec<Point>| if v.len() >= 3 && !shoelace2(&v).is_zero() { v } else { Vec::new() };
    (keep(pos), keep(neg))
}

fn centroid(v: &[Point]) -> Point {
    let n = rat::int(v.len() as i64);
    (0..v[0].len()).map(|k| v.iter().fold(Rat::zero(), |a, p| a + &p[k]) / &n).collect()
}

/// Exact or estimated measures of the closed regions `A` and `B`.
pub fn measure_of_regions(
    measure: &MeasureSpec,
    hyperplanes: &[OrientedHyperplane],
    options: &EstimateOptions,
) -> Result<RegionMeasure> {
    measure.validate()?;
    let d = measure.dim();
    if let Some(h) = hyperplanes.iter().find(|h| h.normal.len() != d) {
        return Err(Error::Dimension { expected: d, got: h.normal.len() });
    }
    let total = measure.total();
    let exact = |mu_a: Rat, mu_b: Rat| RegionMeasure { total: total.clone(), mu_a, mu_b, method: Method::Exact, intervals: None };
    match measure {
        MeasureSpec::Points { points, weights } => {
            let mut bal = (Rat::zero(), Rat::zero());
            for (p, w) in points.iter().zip(weights) {
                match chessboard_color(hyperplanes, p) {
                    Color::A => bal.0 += w,
                    Color::B => bal.1 += w,
                    Color::Boundary => {
                        bal.0 += w;
                        bal.1 += w;
                    }
                }
            }
            Ok(exact(bal.0, bal.1))
        }
        MeasureSpec::Segment { a, b } => {
            let mut cuts = vec![Rat::zero(), Rat::one()];
            for h in hyperplanes {
                let (va, vb) = (h.value(a), h.value(b));
                if va != vb {
                    let t = &va / (&va - &vb);
                    if t.is_positive() && t < Rat::one() {
                        cuts.push(t);
                    }
                }
            }
            cuts.sort();
            cuts.dedup();
            let mut mu = (Rat::zero(), Rat::zero());
            for w in cuts.windows(2) {
                let mid = (&w[0] + &w[1]) / rat::int(2);
                let x: Point = a.iter().zip(b).map(|(p, q)| p + &mid * (q - p)).collect();
                match chessboard_color(hyperplanes, &x) {
                    Color::A => mu.0 += &w[1] - &w[0],
                    Color::B => mu.1 += &w[1] - &w[0],
                    // A hyperplane containing the whole segment: every point is on both sides.
                    Color::Boundary => {
                        mu.0 += &w[1] - &w[0];
                        mu.1 += &w[1] - &w[0];
                    }
                }
            }
            Ok(exact(mu.0, mu.1))
        }
        MeasureSpec::Polygon { vertices } => Ok(polygon_regions(vertices, hyperplanes, total.clone())),
        MeasureSpec::Box { lo, hi } if d == 1 => {
            measure_of_regions(&MeasureSpec::Segment { a: lo.clone(), b: hi.clone() }, hyperplanes, options).map(|m| {
                let scale = &hi[0] - &lo[0];
                RegionMeasure { total: total.clone(), mu_a: m.mu_a * &scale, mu_b: m.mu_b * &scale, ..m }
            })
        }
        MeasureSpec::Box { lo, hi } if d == 2 => {
            let vertices = vec![
                vec![lo[0].clone(), lo[1].clone()],
                vec![hi[0].clone(), lo[1].clone()],
                vec![hi[0].clone(), hi[1].clone()],
                vec![lo[0].clone(), hi[1].clone()],
            ];
            Ok(polygon_regions(&vertices, hyperplanes, total.clone()))
        }
        MeasureSpec::Box { .. } => Ok(monte_carlo(measure, hyperplanes, options, total)),
    }
}

/// Convex pieces of a convex polygon cut by every line, each with its color.
pub fn chessboard_cells(vertices: &[Point], hyperplanes: &[OrientedHyperplane]) -> Vec<(Vec<Point>, Color)> {
    let mut pieces = vec![vertices.to_vec()];
    for h in hyperplanes {
        let mut next = Vec::with_capacity(pieces.len() * 2);
        for p in &pieces {
            let (a, b) = clip(p, h);
            for piece in [a, b] {
                if !piece.is_empty() {
                    next.push(piece);
                }
            }
        }
        pieces = next;
    }
    pieces
        .into_iter()
        .map(|p| {
            let c = chessboard_color(hyperplanes, &centroid(&p));
            debug_assert!(c != Color::Boundary, "every piece lies strictly on one side of every line");
            (p, c)
        })
        .collect()
}

fn polygon_regions(vertices: &[Point], hyperplanes: &[OrientedHyperplane], total: Rat) -> RegionMeasure {
    let mut mu = (Rat::zero(), Rat::zero());
    for (p, color) in chessboard_cells(vertices, hyperplanes) {
        let area = shoelace2(&p) / rat::int(2);
        match color {
            Color::A => mu.0 += area,
            _ => mu.1 += area,
        }
    }
    RegionMeasure { total, mu_a: mu.0, mu_b: mu.1, method: Method::Exact, intervals: None }
}

fn monte_carlo(measure: &MeasureSpec, hyperplanes: &[OrientedHyperplane], options: &EstimateOptions, total: Rat) -> RegionMeasure {
    let planes: Vec<FastPlane> = hyperplanes.iter().cloned().map(FastPlane::new).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let cumulative = fan_cumulative(measure);
    let mut bal = Balance { a: 0, b: 0, boundary: 0 };
    for _ in 0..options.samples {
        let x = draw(measure, &mut rng, &cumulative);
        let xf = approx_point(&x);
        let mut odd = false;
        let mut on = false;
        for h in &planes {
            match h.side(&x, &xf) {
                0 => on = true,
                1 => odd = !odd,
                _ => {}
            }
        }
        if on {
            bal.boundary += 1;
        } else if odd {
            bal.b += 1;
        } else {
            bal.a += 1;
        }
    }
    let n = options.samples.max(1);
    let frac_of = |k: usize| rat::frac(k as i64, n as i64) * &total;
    RegionMeasure {
        mu_a: frac_of(bal.a + bal.boundary),
        mu_b: frac_of(bal.b + bal.boundary),
        total,
        method: Method::MonteCarlo { seed: options.seed, samples: options.samples, confidence: options.confidence },
        intervals: Some([
            wilson(bal.a + bal.boundary, n, options.confidence),
            wilson(bal.b + bal.boundary, n, options.confidence),
        ]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use proptest::prelude::*;

    fn vline(x: Rat) -> OrientedHyperplane {
        OrientedHyperplane::new(vec![int(1), int(0)], x)
    }

    fn unit_square() -> MeasureSpec {
        MeasureSpec::Polygon {
            vertices: vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(1), int(1)], vec![int(0), int(1)]],
        }
    }

    #[test]
    fn strips_of_the_unit_square() {
        let m = measure_of_regions(&unit_square(), &[vline(frac(1, 3)), vline(frac(2, 3))], &EstimateOptions::default()).unwrap();
        assert_eq!(m.mu_a, frac(2, 3));
        assert_eq!(m.mu_b, frac(1, 3));
    }

    #[test]
    fn segment_cut_through_its_middle() {
        let seg = MeasureSpec::Segment { a: vec![int(0), int(-1)], b: vec![int(2), int(3)] };
        let h = OrientedHyperplane::new(vec![int(1), int(2)], int(3));
        let m = measure_of_regions(&seg, &[h], &EstimateOptions::default()).unwrap();
        assert_eq!(m.mu_a, frac(1, 2));
        assert_eq!(m.mu_b, frac(1, 2));
    }

    #[test]
    fn boundary_mass_counts_on_both_sides() {
        let pts = MeasureSpec::uniform_points(vec![vec![int(0)], vec![int(1)], vec![int(2)]]);
        let m = measure_of_regions(&pts, &[OrientedHyperplane::new(vec![int(1)], int(1))], &EstimateOptions::default()).unwrap();
        assert_eq!((m.mu_a.clone(), m.mu_b.clone()), (int(2), int(2)));
        assert!(m.is_bisected());
    }

    #[test]
    fn rejects_bad_polygons_and_atomic_sampling() {
        let cw = MeasureSpec::Polygon { vertices: vec![vec![int(0), int(0)], vec![int(0), int(1)], vec![int(1), int(0)]] };
        assert!(cw.validate().is_err());
        assert!(sample_odd(&MeasureSpec::uniform_points(vec![vec![int(0)]]), 1, 0).is_err());
    }

    #[test]
    fn box_sample_means_are_centered() {
        let b = MeasureSpec::Box { lo: vec![int(0), int(-2), int(1)], hi: vec![int(1), int(2), int(2)] };
        let pts = sample_odd(&b, 5000, 9).unwrap();
        let n = pts.len() as f64;
        for (k, (center, width)) in [(0.5, 1.0), (0.0, 4.0), (1.5, 1.0)].into_iter().enumerate() {
            let mean = pts.iter().map(|p| rat::to_f64(&p[k])).sum::<f64>() / n;
            let sigma = width / 12f64.sqrt() / n.sqrt();
            assert!((mean - center).abs() < 5.0 * sigma, "axis {k}: {mean}");
        }
        assert_eq!(pts, sample_odd(&b, 5000, 9).unwrap());
    }

    #[test]
    fn polygon_samples_match_clipped_areas() {
        let poly = MeasureSpec::Polygon {
            vertices: vec![vec![int(2), int(6)], vec![int(5), int(5)], vec![int(7), int(9)], vec![int(3), int(10)], vec![int(1), int(8)]],
        };
        let planes = [
            OrientedHyperplane::new(vec![int(1), int(2)], int(19)),
            OrientedHyperplane::new(vec![int(-3), int(1)], frac(-1, 2)),
        ];
        let exact = measure_of_regions(&poly, &planes, &EstimateOptions::default()).unwrap();
        let p = rat::to_f64(&(&exact.mu_a / &exact.total));
        let pts = sample(&poly, 20_000, 4).unwrap();
        let hits = pts.iter().filter(|x| chessboard_color(&planes, x) == Color::A).count() as f64 / pts.len() as f64;
        let sigma = (p * (1.0 - p) / pts.len() as f64).sqrt();
        assert!((hits - p).abs() < 5.0 * sigma, "{hits} vs {p}");
    }

    #[test]
    fn monte_carlo_interval_covers_exact_value() {
        let b = MeasureSpec::Box { lo: vec![int(0), int(0), int(0)], hi: vec![int(1), int(1), int(1)] };
        let h = [OrientedHyperplane::new(vec![int(1), int(0), int(0)], frac(1, 4))];
        let m = measure_of_regions(&b, &h, &EstimateOptions { samples: 20_000, confidence: 0.99, seed: 3 }).unwrap();
        let [ia, ib] = m.intervals.unwrap();
        assert!(ia.0 <= 0.25 && 0.25 <= ia.1, "{ia:?}");
        assert!(ib.0 <= 0.75 && 0.75 <= ib.1, "{ib:?}");
    }

    #[test]
    fn normal_quantiles() {
        assert!((normal_quantile(0.95) - 1.959964).abs() < 1e-5);
        assert!((normal_quantile(0.99) - 2.575829).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn polygon_regions_partition_area(
            lines in proptest::collection::vec((-20i64..20, -20i64..20, -40i64..40), 0..4),
        ) {
            let hs: Vec<OrientedHyperplane> = lines
                .iter()
                .filter(|(a, b, _)| *a != 0 || *b != 0)
                .map(|&(a, b, c)| OrientedHyperplane::new(vec![int(a), int(b)], frac(c, 10)))
                .collect();
            let hexagon = MeasureSpec::Polygon {
                vertices: vec![
                    vec![int(2), int(0)], vec![int(1), int(2)], vec![int(-1), int(2)],
                    vec![int(-2), int(0)], vec![int(-1), int(-2)], vec![int(1), int(-2)],
                ],
            };
            let m = measure_of_regions(&hexagon, &hs, &EstimateOptions::default()).unwrap();
            prop_assert_eq!(&m.mu_a + &m.mu_b, m.total.clone());
        }

        #[test]
        fn segment_regions_partition_mass(
            lines in proptest::collection::vec((-20i64..20, -20i64..20, -40i64..40), 0..4),
        ) {
            let hs: Vec<OrientedHyperplane> = lines
                .iter()
                .filter(|(a, b, _)| *a != 0 || *b != 0)
                .map(|&(a, b, c)| OrientedHyperplane::new(vec![int(a), int(b)], frac(c, 10)))
                .collect();
            let (a, b) = (vec![int(-3), int(1)], vec![int(4), int(-2)]);
            // A line containing the whole segment puts all of it on the boundary.
            let hs: Vec<OrientedHyperplane> = hs.into_iter().filter(|h| !(h.value(&a).is_zero() && h.value(&b).is_zero())).collect();
            let seg = MeasureSpec::Segment { a, b };
            let m = measure_of_regions(&seg, &hs, &EstimateOptions::default()).unwrap();
            prop_assert_eq!(&m.mu_a + &m.mu_b, m.total.clone());
        }
    }
}
