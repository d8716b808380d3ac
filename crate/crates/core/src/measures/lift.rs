//! The paraboloid lift `(x, y) -> (x, y, x^2 + y^2)`: planes in space become
//! circles or lines in the plane, so arrangements of planes give chessboard
//! colorings bounded by circles.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arrangement::{Balance, FamilySpec};
use crate::config::ColoredPointConfig;
use crate::error::{Error, Result};
use crate::filter::{approx_point, FastPlane};
use crate::geom::{OrientedHyperplane, Point};
use crate::linalg::Subspace;
use crate::measures::{measure_of_regions, sample, sample_odd, wilson, EstimateOptions, MeasureSpec};
use crate::rat::{self, Rat};
use crate::solve::{solve, SolveOptions};

pub fn lift_point(p: &[Rat]) -> Point {
    vec![p[0].clone(), p[1].clone(), &p[0] * &p[0] + &p[1] * &p[1]]
}

pub fn veronese_lift(points: &[Point]) -> Result<Vec<Point>> {
    points
        .iter()
        .map(|p| if p.len() == 2 { Ok(lift_point(p)) } else { Err(Error::Dimension { expected: 2, got: p.len() }) })
        .collect()
}

/// Planar trace of a lifted plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Curve {
    /// `|x - center|^2 = radius_sq`.
    Circle {
        #[serde(with = "rat::vec")]
        center: Vec<Rat>,
        #[serde(with = "rat::one")]
        radius_sq: Rat,
    },
    /// `<normal, x> = offset`.
    Line {
        #[serde(with = "rat::vec")]
        normal: Vec<Rat>,
        #[serde(with = "rat::one")]
        offset: Rat,
    },
}

/// A curve together with the plane it came from, which fixes its sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedCurve {
    pub curve: Curve,
    pub plane: OrientedHyperplane,
}

impl LiftedCurve {
    /// Side of a planar point: the side of its lift with respect to the plane.
    pub fn side(&self, p: &[Rat]) -> i8 {
        rat::sign(&self.plane.value(&lift_point(p)))
    }

    pub fn is_vertical_line(&self) -> bool {
        matches!(&self.curve, Curve::Line { normal, .. } if normal[1].is_zero())
    }
}

/// Plane `a x + b y + c z = e` to the circle `x^2 + y^2 + (a/c) x + (b/c) y = e/c`
/// when `c != 0`, and to the line `a x + b y = e` otherwise.
pub fn plane_to_curve(h: &OrientedHyperplane) -> Result<LiftedCurve> {
    if h.normal.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: h.normal.len() });
    }
    let (a, b, c) = (&h.normal[0], &h.normal[1], &h.normal[2]);
    let curve = if c.is_zero() {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidInput("plane with zero normal".into()));
        }
        Curve::Line { normal: vec![a.clone(), b.clone()], offset: h.offset.clone() }
    } else {
        let two_c = c * rat::int(2);
        let center = vec![-a / &two_c, -b / &two_c];
        let radius_sq = &h.offset / c + &center[0] * &center[0] + &center[1] * &center[1];
        Curve::Circle { center, radius_sq }
    };
    Ok(LiftedCurve { curve, plane: h.clone() })
}

pub fn planes_to_circles(hyperplanes: &[OrientedHyperplane]) -> Result<Vec<LiftedCurve>> {
    hyperplanes.iter().map(plane_to_curve).collect()
}

/// Families giving two concentric circles, a line and a vertical line.
pub fn circles_specs() -> Vec<FamilySpec> {
    let e = |i: usize| (0..3).map(|j| rat::int((i == j) as i64)).collect::<Vec<Rat>>();
    vec![
        FamilySpec::new(Subspace::whole(3), 2).expect("valid"),
        FamilySpec::new(Subspace::from_basis(3, vec![e(0), e(1)]).expect("independent"), 1).expect("valid"),
        FamilySpec::new(Subspace::from_basis(3, vec![e(0)]).expect("independent"), 1).expect("valid"),
    ]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CirclesOptions {
    pub seed: u64,
    /// Each non-atomic measure is replaced by `2 sample_r + 1` samples.
    pub sample_r: usize,
    pub solve: SolveOptions,
    pub estimate: EstimateOptions,
}

impl Default for CirclesOptions {
    fn default() -> Self {
        CirclesOptions { seed: 0, sample_r: 20, solve: SolveOptions::default(), estimate: EstimateOptions::default() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureRatio {
    pub min_ratio: f64,
    /// Wilson interval for the smaller side when estimated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<(f64, f64)>,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CirclesReport {
    pub circles: Vec<LiftedCurve>,
    pub line: LiftedCurve,
    pub vertical_line: LiftedCurve,
    pub concentric: bool,
    pub ratios: Vec<MeasureRatio>,
    /// Every measure is atomic and exactly bisected.
    pub exact_bisection: bool,
    pub planes: Vec<OrientedHyperplane>,
}

/// Bisects seven planar measures by two concentric circles, a line and a
/// vertical line, via the lifted point problem in space.
pub fn circles_bisection(measures: &[MeasureSpec], options: &CirclesOptions) -> Result<CirclesReport> {
    if measures.len() != 7 {
        return Err(Error::InvalidInput(format!("need 7 measures, got {}", measures.len())));
    }
    let mut colors = Vec::with_capacity(7);
    for (i, m) in measures.iter().enumerate() {
        m.validate()?;
        if m.dim() != 2 {
            return Err(Error::Dimension { expected: 2, got: m.dim() });
        }
        let pts = match m {
            MeasureSpec::Points { points, .. } => points.clone(),
            _ => sample_odd(m, options.sample_r, options.seed.wrapping_add(i as u64))?,
        };
        colors.push(veronese_lift(&pts)?);
    }
    let config = ColoredPointConfig::new(3, colors)?;
    let specs = circles_specs();
    let solution = solve(&config, &specs, &SolveOptions { seed: options.seed, ..options.solve.clone() })?;
    let fams = &solution.arrangement.families;
    let planes: Vec<OrientedHyperplane> = solution.arrangement.hyperplanes();
    let circles = fams[0].hyperplanes().map(|h| plane_to_curve(&h)).collect::<Result<Vec<_>>>()?;
    let line = plane_to_curve(&fams[1].hyperplanes().next().expect("one plane"))?;
    let vertical_line = plane_to_curve(&fams[2].hyperplanes().next().expect("one plane"))?;
    let concentric = match (&circles[0].curve, &circles[1].curve) {
        (Curve::Circle { center: c0, .. }, Curve::Circle { center: c1, .. }) => c0 == c1,
        _ => false,
    };
    let mut ratios = Vec::with_capacity(7);
    let mut exact_bisection = true;
    for (i, m) in measures.iter().enumerate() {
        let ratio = match m {
            MeasureSpec::Points { points, weights } => {
                let lifted = MeasureSpec::Points { points: veronese_lift(points)?, weights: weights.clone() };
                let rm = measure_of_regions(&lifted, &planes, &options.estimate)?;
                exact_bisection &= rm.is_bisected();
                MeasureRatio { min_ratio: rm.min_ratio(), interval: None, exact: true }
            }
            _ => {
                exact_bisection = false;
                let est = EstimateOptions { seed: options.estimate.seed.wrapping_add(i as u64), ..options.estimate.clone() };
                estimate_lifted(m, &planes, &est)?
            }
        };
        ratios.push(ratio);
    }
    Ok(CirclesReport { circles, line, vertical_line, concentric, ratios, exact_bisection, planes })
}

/// Monte Carlo ratio of a planar measure against lifted planes.
fn estimate_lifted(m: &MeasureSpec, planes: &[OrientedHyperplane], est: &EstimateOptions) -> Result<MeasureRatio> {
    let fast: Vec<FastPlane> = planes.iter().cloned().map(FastPlane::new).collect();
    let mut bal = Balance { a: 0, b: 0, boundary: 0 };
    for p in sample(m, est.samples, est.seed)? {
        let q = lift_point(&p);
        let qf = approx_point(&q);
        let mut odd = false;
        let mut on = false;
        for h in &fast {
            match h.side(&q, &qf) {
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
    let n = est.samples.max(1);
    let small = (bal.a.min(bal.b)) + bal.boundary;
    Ok(MeasureRatio { min_ratio: small as f64 / n as f64, interval: Some(wilson(small, n, est.confidence)), exact: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn horizontal_plane_is_a_circle() {
        let c = plane_to_curve(&OrientedHyperplane::new(vec![int(0), int(0), int(1)], int(1))).unwrap();
        assert_eq!(c.curve, Curve::Circle { center: vec![int(0), int(0)], radius_sq: int(1) });
        let l = plane_to_curve(&OrientedHyperplane::new(vec![int(2), int(0), int(0)], int(4))).unwrap();
        assert!(l.is_vertical_line());
        let flat = OrientedHyperplane { normal: vec![int(0), int(0), int(0)], offset: int(1) };
        assert!(plane_to_curve(&flat).is_err());
    }

    #[test]
    fn parallel_planes_give_concentric_circles() {
        let n = vec![int(3), int(-1), int(2)];
        let a = plane_to_curve(&OrientedHyperplane::new(n.clone(), int(5))).unwrap();
        let b = plane_to_curve(&OrientedHyperplane::new(n, int(9))).unwrap();
        let (Curve::Circle { center: ca, .. }, Curve::Circle { center: cb, .. }) = (&a.curve, &b.curve) else { panic!() };
        assert_eq!(ca, cb);
        assert_eq!(ca, &vec![frac(-3, 4), frac(1, 4)]);
    }

    #[test]
    fn seven_clusters_are_bisected_by_circles_and_lines() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let measures: Vec<MeasureSpec> = (0..7)
            .map(|_| {
                let (cx, cy): (i64, i64) = (rng.gen_range(-50..50), rng.gen_range(-50..50));
                MeasureSpec::uniform_points(
                    (0..3).map(|_| vec![frac((cx << 20) + rng.gen_range(-(1 << 20)..(1 << 20)), 1 << 20), frac((cy << 20) + rng.gen_range(-(1 << 20)..(1 << 20)), 1 << 20)]).collect(),
                )
            })
            .collect();
        let options = CirclesOptions { solve: SolveOptions { oracle_budget: 0.0, ..Default::default() }, ..Default::default() };
        let report = circles_bisection(&measures, &options).unwrap();
        assert!(report.concentric);
        assert!(report.vertical_line.is_vertical_line());
        assert!(matches!(report.line.curve, Curve::Line { .. }));
        assert!(report.exact_bisection);
        assert!(report.ratios.iter().all(|r| r.min_ratio >= 0.5));
    }

    proptest! {
        #[test]
        fn circle_side_matches_lifted_side(
            n in proptest::collection::vec(-50i64..50, 3),
            e in -50i64..50,
            x in -100i64..100,
            y in -100i64..100,
        ) {
            prop_assume!(n[2] != 0);
            let h = OrientedHyperplane::new(n.iter().map(|&v| int(v)).collect(), int(e));
            let c = plane_to_curve(&h).unwrap();
            let p = vec![frac(x, 7), frac(y, 3)];
            let Curve::Circle { center, radius_sq } = &c.curve else { unreachable!() };
            let d2 = (&p[0] - &center[0]) * (&p[0] - &center[0]) + (&p[1] - &center[1]) * (&p[1] - &center[1]);
            // Inside the circle exactly when the lift lies on the side of sign -c.
            let inside = rat::sign(&(d2 - radius_sq));
            prop_assert_eq!(c.side(&p), inside * n[2].signum() as i8);
        }
    }
}
