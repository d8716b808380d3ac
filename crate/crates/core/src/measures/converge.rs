//! Bisecting general measures as a limit: sample odd supports of growing size,
//! solve the point problem, and measure the true regions.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{measure_of_regions, sample_odd, EstimateOptions, MeasureSpec};
use crate::arrangement::FamilySpec;
use crate::config::ColoredPointConfig;
use crate::error::{Error, Result};
use crate::geom::{perturb, OrientedHyperplane, Point};
use crate::rat::{self, Rat};
use crate::solve::{solve, SolveOptions};

/// Attempts at perturbing a non-generic sample before giving up.
const PERTURB_RETRIES: u64 = 4;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergeOptions {
    pub solve: SolveOptions,
    pub estimate: EstimateOptions,
    /// Size of the perturbation applied when a sample is not generic.
    #[serde(with = "rat::one")]
    pub perturb_magnitude: Rat,
    /// The escape box is the measures' bounding box grown by this multiple
    /// of its extent on every side.
    #[serde(with = "rat::one")]
    pub escape_padding: Rat,
}

impl Default for ConvergeOptions {
    fn default() -> Self {
        ConvergeOptions {
            solve: SolveOptions { oracle_budget: 0.0, ..SolveOptions::default() },
            estimate: EstimateOptions::default(),
            perturb_magnitude: Rat::new(1.into(), (1u64 << 40).into()),
            escape_padding: rat::int(10),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub r: usize,
    /// `min(mu_a, mu_b) / total` for each true measure.
    pub ratios: Vec<f64>,
    pub hyperplanes: Vec<OrientedHyperplane>,
    /// Hyperplanes missing the escape box, drifting toward infinity.
    pub escaped: Vec<usize>,
    pub perturbed: bool,
}

impl ConvergenceRow {
    pub fn min_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub seed: u64,
    pub rows: Vec<ConvergenceRow>,
}

/// Smallest box containing every measure's support.
fn joint_bounds(measures: &[MeasureSpec]) -> (Point, Point) {
    let (mut lo, mut hi) = measures[0].bounds();
    for m in &measures[1..] {
        let (l, h) = m.bounds();
        for i in 0..lo.len() {
            if l[i] < lo[i] {
                lo[i] = l[i].clone();
            }
            if h[i] > hi[i] {
                hi[i] = h[i].clone();
            }
        }
    }
    (lo, hi)
}

/// Whether the hyperplane meets the closed box.
fn meets_box(h: &OrientedHyperplane, lo: &[Rat], hi: &[Rat]) -> bool {
    let mut min = Rat::zero();
    let mut max = Rat::zero();
    for ((v, l), u) in h.normal.iter().zip(lo).zip(hi) {
        let (a, b) = (v * l, v * u);
        if a < b {
            min += a;
            max += b;
        } else {
            min += b;
            max += a;
        }
    }
    min <= h.offset && h.offset <= max
}

/// For each `r`, replaces every measure by `2r + 1` samples, solves the point
/// problem and records how evenly the arrangement splits the true measures.
pub fn convergence_run(
    measures: &[MeasureSpec],
    specs: &[FamilySpec],
    r_schedule: &[usize],
    seed: u64,
    options: &ConvergeOptions,
) -> Result<ConvergenceReport> {
    if measures.is_empty() {
        return Err(Error::InvalidInput("no measures".into()));
    }
    let d = measures[0].dim();
    if let Some(m) = measures.iter().find(|m| m.dim() != d) {
        return Err(Error::Dimension { expected: d, got: m.dim() });
    }
    let (mut lo, mut hi) = joint_bounds(measures);
    for i in 0..d {
        let pad = (&hi[i] - &lo[i]) * &options.escape_padding + Rat::from_integer(1.into());
        lo[i] -= &pad;
        hi[i] += pad;
    }
    let mut rows = Vec::with_capacity(r_schedule.len());
    for (step, &r) in r_schedule.iter().enumerate() {
        let sample_seed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(step as u64);
        let colors = measures
            .iter()
            .enumerate()
            .map(|(i, m)| match m {
                MeasureSpec::Points { points, .. } => Ok(points.clone()),
                _ => sample_odd(m, r, sample_seed.wrapping_add(1 + i as u64)),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut config = ColoredPointConfig::new(d, colors)?;
        let solve_options = SolveOptions { seed: sample_seed, ..options.solve.clone() };
        let mut perturbed = false;
        let mut attempt = 0;
        let solution = loop {
            match solve(&config, specs, &solve_options) {
                Err(Error::Genericity(_)) if attempt < PERTURB_RETRIES => {
                    attempt += 1;
                    perturbed = true;
                    let colors = config
                        .colors
                        .iter()
                        .enumerate()
                        .map(|(i, c)| perturb(c, &options.perturb_magnitude, sample_seed ^ (attempt << 32) ^ i as u64))
                        .collect();
                    config = ColoredPointConfig::new(d, colors)?;
                }
                other => break other?,
            }
        };
        let hyperplanes = solution.arrangement.hyperplanes();
        let ratios = measures
            .iter()
            .map(|m| measure_of_regions(m, &hyperplanes, &options.estimate).map(|rm| rm.min_ratio()))
            .collect::<Result<Vec<_>>>()?;
        let escaped = hyperplanes.iter().enumerate().filter(|(_, h)| !meets_box(h, &lo, &hi)).map(|(i, _)| i).collect();
        rows.push(ConvergenceRow { r, ratios, hyperplanes, escaped, perturbed });
    }
    Ok(ConvergenceReport { seed, rows })
}
