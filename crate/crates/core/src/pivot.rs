//! The moving-hyperplane walk that pairs arrangements at an exceptional time.
//!
//! At an exceptional time the dying (or newborn) arrangement `H` touches one
//! extra point `p1`, so `M + 1` points are incident and one color is doubled.
//! The walk keeps the configuration frozen, releases the other point of the
//! doubled color and moves its hyperplane (translating it, or turning its whole
//! parallel family about a codimension-two flat) toward the side that restores
//! the balance of that color, until a new point is hit. It stops once the point
//! to release lies in the core of the oversaturated family; what remains is the
//! partner arrangement.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::{build_family, construct_codim2_flats, Assignment, FamilySpec};
use crate::config::{ColoredPointConfig, PointId};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::rat::{self, Rat};

/// Hard cap on walk length; the walk never revisits a state, so this only
/// guards against a broken invariant.
pub const MAX_PIVOT_STEPS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Motion {
    /// The released hyperplane held a single point and is translated.
    Translate,
    /// The released hyperplane held several points; its family turns.
    Rotate,
    /// Translation that passed through infinity before hitting.
    TranslateWrapped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PivotStep {
    pub released: PointId,
    pub hit: PointId,
    pub family: usize,
    pub motion: Motion,
    /// Incidence pattern after the step, colors in bar notation.
    pub incidence: String,
}

impl fmt::Display for PivotStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "release {}.{} -> hit {}.{} ({:?} family {}): {}",
            self.released.color + 1,
            self.released.index,
            self.hit.color + 1,
            self.hit.index,
            self.motion,
            self.family,
            self.incidence
        )
    }
}

/// The almost valid data of one walk state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotState {
    /// `M + 1` incident points, classes per family.
    pub incidence: Assignment,
    pub oversaturated: usize,
    pub core: Vec<PointId>,
    /// Point whose hyperplane is released next.
    pub release: PointId,
}

impl PivotState {
    pub fn unbalanced_color(&self) -> usize {
        self.release.color
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotOutcome {
    pub partner: Assignment,
    pub trace: Vec<PivotStep>,
}

/// Sets up the walk for `dying`, which at the frozen configuration also touches `extra`.
pub fn initial_state(
    config: &ColoredPointConfig,
    specs: &[FamilySpec],
    dying: &Assignment,
    extra: PointId,
) -> Result<PivotState> {
    let (f, c) = incident_class(config, specs, dying, extra)?;
    let mut groups = dying.groups.clone();
    groups[f][c].push(extra);
    let incidence = Assignment::new(groups);
    let core: Vec<PointId> = incidence.groups[f].iter().filter(|c| c.len() > 1).flatten().copied().collect();
    let release = incidence
        .points()
        .into_iter()
        .find(|p| p.color == extra.color && *p != extra)
        .ok_or_else(|| Error::Inconsistent("doubled color has a single incident point".into()))?;
    Ok(PivotState { incidence, oversaturated: f, core, release })
}

/// Which hyperplane of `arr` passes through `extra`.
fn incident_class(
    config: &ColoredPointConfig,
    specs: &[FamilySpec],
    arr: &Assignment,
    extra: PointId,
) -> Result<(usize, usize)> {
    let x = config.point(extra);
    let mut found = None;
    for (f, (spec, g)) in specs.iter().zip(&arr.groups).enumerate() {
        let classes: Vec<Vec<&Point>> = g.iter().map(|c| c.iter().map(|&id| config.point(id)).collect()).collect();
        let (v, offsets) = build_family(spec, f, &classes)?;
        let val = rat::dot(&v, x);
        for (c, off) in offsets.iter().enumerate() {
            if &val == off {
                if found.is_some() {
                    return Err(Error::Genericity(format!("point {}.{} lies on two hyperplanes", extra.color + 1, extra.index)));
                }
                found = Some((f, c));
            }
        }
    }
    found.ok_or_else(|| Error::Inconsistent(format!("point {}.{} is not incident", extra.color + 1, extra.index)))
}

/// Runs the walk from `dying` with extra incidence `extra` to the partner arrangement.
pub fn pivot_moving_hyperplane(
    config: &ColoredPointConfig,
    specs: &[FamilySpec],
    dying: &Assignment,
    extra: PointId,
) -> Result<PivotOutcome> {
    let mut state = initial_state(config, specs, dying, extra)?;
    let mut trace = Vec::new();
    let mut seen: HashSet<(Assignment, PointId)> = HashSet::new();
    while !state.core.contains(&state.release) {
        if !seen.insert((state.incidence.canonical(specs), state.release)) {
            return Err(Error::CycleDetected(format!("walk revisited {} releasing {:?}", state.incidence, state.release)));
        }
        if trace.len() >= MAX_PIVOT_STEPS {
            return Err(Error::CycleDetected(format!("walk exceeded {MAX_PIVOT_STEPS} steps")));
        }
        let step = advance(config, specs, &mut state)?;
        trace.push(step);
    }
    let mut groups = state.incidence.groups.clone();
    for g in &mut groups {
        for c in g.iter_mut() {
            c.retain(|p| *p != state.release);
        }
    }
    Ok(PivotOutcome { partner: Assignment::new(groups), trace })
}

struct Geometry {
    /// Per family: normal and per-class offset.
    normals: Vec<Vec<Rat>>,
    offsets: Vec<Vec<Rat>>,
}

fn geometry(config: &ColoredPointConfig, specs: &[FamilySpec], inc: &Assignment) -> Result<Geometry> {
    let mut normals = Vec::new();
    let mut offsets = Vec::new();
    for (f, (spec, g)) in specs.iter().zip(&inc.groups).enumerate() {
        let classes: Vec<Vec<&Point>> = g.iter().map(|c| c.iter().map(|&id| config.point(id)).collect()).collect();
        let (v, o) = build_family(spec, f, &classes)?;
        normals.push(v);
        offsets.push(o);
    }
    Ok(Geometry { normals, offsets })
}

/// Number of positive sides of `x`, skipping hyperplane `skip`, and whether `x` is on any other.
fn positive_count(geo: &Geometry, x: &Point, skip: Option<(usize, usize)>) -> (usize, bool) {
    let mut pos = 0;
    let mut on = false;
    for (f, (v, offs)) in geo.normals.iter().zip(&geo.offsets).enumerate() {
        let val = rat::dot(v, x);
        for (c, o) in offs.iter().enumerate() {
            if skip == Some((f, c)) {
                continue;
            }
            match val.cmp(o) {
                std::cmp::Ordering::Greater => pos += 1,
                std::cmp::Ordering::Equal => on = true,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    (pos, on)
}

/// Parity (odd = B side) the released point must end on: the side with fewer
/// interior points of its color.
fn target_parity(config: &ColoredPointConfig, geo: &Geometry, inc: &Assignment, color: usize) -> Result<bool> {
    let (mut even, mut odd) = (0usize, 0usize);
    for (i, p) in config.colors[color].iter().enumerate() {
        let id = PointId { color, index: i };
        if inc.contains(id) {
            continue;
        }
        let (pos, on) = positive_count(geo, p, None);
        if on {
            continue;
        }
        if pos % 2 == 0 {
            even += 1;
        } else {
            odd += 1;
        }
    }
    if even.abs_diff(odd) != 1 {
        return Err(Error::Inconsistent(format!(
            "color {} is not almost balanced ({even} vs {odd} interior points)",
            color + 1
        )));
    }
    Ok(odd < even)
}

fn advance(config: &ColoredPointConfig, specs: &[FamilySpec], state: &mut PivotState) -> Result<PivotStep> {
    let w = state.release;
    let inc = &state.incidence;
    let geo = geometry(config, specs, inc)?;
    let (g, cw) = inc.locate(w).expect("released point is incident");
    let want_odd = target_parity(config, &geo, inc, w.color)?;
    let wp = config.point(w);
    let (others_pos, _) = positive_count(&geo, wp, Some((g, cw)));
    // Sign the released point's own hyperplane value must take.
    let own_positive = (others_pos % 2 == 1) != want_odd;
    let class_w = &inc.groups[g][cw];
    let incident: HashSet<PointId> = inc.points().into_iter().collect();

    let (hit, hit_class, motion) = if class_w.len() == 1 {
        // Translate: offset moves by sigma * s, so the point's value is -sigma * s.
        let v = &geo.normals[g];
        let c0 = &geo.offsets[g][cw];
        let sigma: i8 = if own_positive { -1 } else { 1 };
        let mut best: Option<(bool, Rat, PointId)> = None;
        let mut tie = false;
        for id in config.ids() {
            if incident.contains(&id) {
                continue;
            }
            let s = (rat::dot(v, config.point(id)) - c0) * Rat::from_integer(sigma.into());
            if s.is_zero() {
                return Err(Error::Genericity(format!("point {}.{} already on the released hyperplane", id.color + 1, id.index)));
            }
            // Forward hits first, then the ones reached after wrapping through infinity.
            let key = (s.is_negative(), s);
            match &best {
                Some((bw, bs, _)) if (bw, bs) == (&key.0, &key.1) => tie = true,
                Some((bw, bs, _)) if (bw, bs) < (&key.0, &key.1) => {}
                _ => {
                    best = Some((key.0, key.1, id));
                    tie = false;
                }
            }
        }
        let (wrapped, _, id) = best.ok_or_else(|| Error::Degenerate("no point left to hit".into()))?;
        if tie {
            return Err(Error::Genericity("translation hits two points at once".into()));
        }
        (id, cw, if wrapped { Motion::TranslateWrapped } else { Motion::Translate })
    } else {
        // Rotate the family about the flat through its remaining points.
        let classes: Vec<Vec<Point>> = inc.groups[g]
            .iter()
            .map(|c| c.iter().filter(|&&p| p != w).map(|&p| config.point(p).clone()).collect())
            .collect();
        let flats = construct_codim2_flats(&classes, &specs[g])?;
        let v0 = &geo.normals[g];
        let u = flats
            .normal_plane
            .iter()
            .map(|b| {
                let k = rat::dot(b, v0) / rat::dot(v0, v0);
                b.iter().zip(v0).map(|(x, y)| x - &k * y).collect::<Vec<Rat>>()
            })
            .find(|u| u.iter().any(|x| !x.is_zero()))
            .ok_or_else(|| Error::Degenerate("codimension-two flat does not leave a turning plane".into()))?;
        let reps: Vec<&Point> = classes.iter().map(|c| &c[0]).collect();
        // Direction v(theta) = cos(theta) v0 + sigma sin(theta) u; the released point's
        // value is sigma sin(theta) <u, w - r>.
        let bw = rat::dot(&u, &rat::sub(wp, reps[cw]));
        if bw.is_zero() {
            return Err(Error::Genericity("released point does not move under rotation".into()));
        }
        let sigma: i8 = if bw.is_positive() == own_positive { 1 } else { -1 };
        let sg = Rat::from_integer(sigma.into());
        let mut best: Option<(Rat, PointId, usize)> = None;
        let mut tie = false;
        for id in config.ids() {
            if incident.contains(&id) && id != w {
                continue;
            }
            let z = config.point(id);
            for (c, r) in reps.iter().enumerate() {
                if id == w && c == cw {
                    continue;
                }
                let diff = rat::sub(z, r);
                let a = rat::dot(v0, &diff);
                let b = rat::dot(&u, &diff);
                if a.is_zero() {
                    return Err(Error::Genericity(format!("point {}.{} already on a turning hyperplane", id.color + 1, id.index)));
                }
                // cot(theta) = -sigma b / a; the first hit has the largest cotangent.
                let key = &sg * b / a;
                match &best {
                    Some((k, _, _)) if *k == key => tie = true,
                    Some((k, _, _)) if *k < key => {}
                    _ => {
                        best = Some((key, id, c));
                        tie = false;
                    }
                }
            }
        }
        let (_, id, c) = best.ok_or_else(|| Error::Degenerate("no point left to hit".into()))?;
        if tie {
            return Err(Error::Genericity("rotation hits two points at once".into()));
        }
        (id, c, Motion::Rotate)
    };

    let mut groups = state.incidence.groups.clone();
    for cl in groups[g].iter_mut() {
        cl.retain(|p| *p != w);
    }
    // Class indices refer to the pre-removal order, which retain preserves.
    groups[g][hit_class].push(hit);
    let incidence = Assignment::new(groups);
    let next = incidence
        .points()
        .into_iter()
        .find(|p| p.color == hit.color && *p != hit)
        .ok_or_else(|| Error::Inconsistent("hit color has no other incident point".into()))?;
    let step = PivotStep { released: w, hit, family: g, motion, incidence: incidence.color_notation() };
    state.incidence = incidence;
    state.release = next;
    Ok(step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::unconstrained;
    use crate::rat::int;

    fn id(c: usize, i: usize) -> PointId {
        PointId { color: c, index: i }
    }

    #[test]
    fn ham_sandwich_swap_needs_no_steps() {
        // One color on a line with median 0; the point from 5 has slid onto it.
        let specs = unconstrained(1, &[1]);
        let frozen = ColoredPointConfig { dim: 1, colors: vec![vec![vec![int(0)], vec![int(-3)], vec![int(0)]]] };
        let h = Assignment::new(vec![vec![vec![id(0, 0)]]]);
        let out = pivot_moving_hyperplane(&frozen, &specs, &h, id(0, 2)).unwrap();
        assert!(out.trace.is_empty());
        assert_eq!(out.partner, Assignment::new(vec![vec![vec![id(0, 2)]]]));
    }

    #[test]
    fn necklace_translation_step() {
        // Two colors on a line, two cuts at red 10 and blue 14. Red {0, 10, 12} and
        // blue {4, 14, 11} are bisected; the red point from 12 has slid onto 14.
        let specs = unconstrained(1, &[2]);
        let p = |x: i64| vec![int(x)];
        let frozen = ColoredPointConfig {
            dim: 1,
            colors: vec![vec![p(0), p(10), p(14)], vec![p(4), p(14), p(11)]],
        };
        let h = Assignment::new(vec![vec![vec![id(0, 1)], vec![id(1, 1)]]]);
        let out = pivot_moving_hyperplane(&frozen, &specs, &h, id(0, 2)).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].released, id(0, 1));
        // The red cut leaves 10 toward the emptier side and stops at blue 4;
        // the next point to release, blue 14, is in the core.
        assert_eq!(out.trace[0].hit, id(1, 0));
        assert_eq!(out.partner, Assignment::new(vec![vec![vec![id(1, 0)], vec![id(0, 2)]]]));
    }
}
