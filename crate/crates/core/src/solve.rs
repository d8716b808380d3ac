//! Finding one bisecting arrangement of a target configuration.
//!
//! The target is joined to a symmetric start, whose bisecting arrangements
//! are known, by moving one point at a time. By default a single labelled
//! arrangement is followed along that homotopy: while it stays bisecting it is
//! carried along; when it dies, the moving-hyperplane walk yields its partner,
//! which is either born on the far side (continue) or dies on the near side
//! (turn back in time). Since the number of arrangements alive at the start is
//! odd, some start leads all the way to the target.
//!
//! The tracked engine instead carries the complete set through every event and
//! is meant for small instances.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{is_bisecting, signature, Arrangement, Assignment, FamilySpec};
use crate::config::{ColoredPointConfig, PointId};
use crate::deform::{lerp, moved, waypoint, Move, TrackedSession};
use crate::error::{Error, Result};
use crate::filter::{approx_point, approx_points, is_bisecting_fast, root_interval, FastPlane};
use crate::geom::{OrientedHyperplane, Point};
use crate::oracle::{build_symmetric_start, enumerate_bisectors, oracle_cost, precheck_generic, StartParams};
use crate::parity::compute_n;
use crate::pivot::pivot_moving_hyperplane;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    /// Follow one arrangement; scales to large configurations.
    PathFollowing,
    /// Carry every bisecting arrangement through every event.
    Tracked,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveOptions {
    pub engine: Engine,
    pub seed: u64,
    /// Largest oracle cost for which the answer is cross-checked by enumeration.
    pub oracle_budget: f64,
    /// Cap on followed events before giving up.
    pub max_events: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { engine: Engine::PathFollowing, seed: 0, oracle_budget: 2e6, max_events: 2_000_000 }
    }
}

/// One death along the followed path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FollowEvent {
    pub move_index: usize,
    #[serde(with = "rat::one")]
    pub time: Rat,
    pub died: String,
    pub partner: String,
    /// The partner dies on the same side, so time runs backward after it.
    pub reversed: bool,
    pub pivot_steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    pub assignment: Assignment,
    pub arrangement: Arrangement,
    pub engine: Engine,
    /// `N mod 2` for the instance.
    pub parity: u8,
    pub starts_tried: usize,
    pub crossings: usize,
    pub events: Vec<FollowEvent>,
    pub subdivisions: usize,
    /// Number of bisecting classes in the target when the tracked engine ran.
    pub tracked_count: Option<usize>,
    /// Whether the answer is among the oracle's, when the oracle ran.
    pub oracle_agrees: Option<bool>,
    pub oracle_count: Option<usize>,
}

/// Finds a bisecting arrangement of `target` for the families `specs`.
pub fn solve(target: &ColoredPointConfig, specs: &[FamilySpec], options: &SolveOptions) -> Result<Solution> {
    target.validate()?;
    let d = specs.first().map(FamilySpec::dim).ok_or_else(|| Error::InvalidInput("no families".into()))?;
    if d != target.dim {
        return Err(Error::Dimension { expected: d, got: target.dim });
    }
    let m: usize = specs.iter().map(FamilySpec::m).sum();
    if target.num_colors() != m {
        return Err(Error::InvalidInput(format!("families need {m} colors, configuration has {}", target.num_colors())));
    }
    precheck_generic(target, specs)?;
    let report = compute_n(&signature(specs)?)?;
    let parity = report.n_mod2;
    if parity == 0 {
        return solve_even(target, specs, options, &report.n);
    }
    let params = StartParams {
        cluster_sizes: target.colors.iter().map(Vec::len).collect(),
        separation: 1000,
        seed: options.seed,
        oracle_budget: options.oracle_budget,
    };
    let start = build_symmetric_start(specs, &params)?;
    let moves: Vec<Move> = target
        .ids()
        .filter(|&id| start.config.point(id) != target.point(id))
        .map(|id| Move { color: id.color, index: id.index, target: target.point(id).clone() })
        .collect();
    let mut solution = match options.engine {
        Engine::PathFollowing => {
            let starts: Vec<Assignment> = start.canonical.iter().map(|b| b.assignment.clone()).collect();
            follow(&start.config, &moves, specs, &starts, options)?
        }
        Engine::Tracked => {
            let tracked: BTreeSet<Assignment> = start.canonical.iter().map(|b| b.assignment.clone()).collect();
            let mut session = TrackedSession::with_tracked(start.config.clone(), specs, tracked, options.seed)?;
            for mv in &moves {
                session.apply_move(mv)?;
            }
            let assignment = session
                .tracked
                .iter()
                .next()
                .cloned()
                .ok_or_else(|| Error::Inconsistent("tracked set empty at the target".into()))?;
            Solution {
                arrangement: assignment.realize(target, specs)?,
                assignment,
                engine: Engine::Tracked,
                parity,
                starts_tried: 1,
                crossings: 0,
                events: Vec::new(),
                subdivisions: 0,
                tracked_count: Some(session.count()),
                oracle_agrees: None,
                oracle_count: None,
            }
        }
    };
    solution.parity = parity;
    if !is_bisecting(&solution.arrangement, target) {
        return Err(Error::Inconsistent(format!("arrangement {} does not bisect the target", solution.assignment)));
    }
    solution.arrangement.partition = Some(solution.assignment.color_notation());
    if oracle_cost(target, specs) <= options.oracle_budget {
        let all: BTreeSet<Assignment> = enumerate_bisectors(target, specs).into_iter().map(|b| b.assignment).collect();
        solution.oracle_agrees = Some(all.contains(&solution.assignment));
        solution.oracle_count = Some(all.len());
        if all.len() % 2 != parity as usize {
            return Err(Error::Inconsistent(format!("oracle found {} classes, parity predicts {parity}", all.len())));
        }
        if let Some(c) = solution.tracked_count {
            if c != all.len() {
                return Err(Error::Inconsistent(format!("tracked {c} classes, oracle found {}", all.len())));
            }
        }
    }
    Ok(solution)
}

/// With an even count no witness is guaranteed; the oracle may still find one.
fn solve_even(target: &ColoredPointConfig, specs: &[FamilySpec], options: &SolveOptions, n: &BigUint) -> Result<Solution> {
    if oracle_cost(target, specs) > options.oracle_budget {
        return Err(Error::ParityZeroNoWitness(format!("count {n} is even and the instance is too large to enumerate")));
    }
    let all = enumerate_bisectors(target, specs);
    let count = all.len();
    let first = all
        .into_iter()
        .next()
        .ok_or_else(|| Error::ParityZeroNoWitness(format!("count {n} is even and no bisecting arrangement exists")))?;
    let mut arrangement = first.arrangement;
    arrangement.partition = Some(first.assignment.color_notation());
    Ok(Solution {
        assignment: first.assignment,
        arrangement,
        engine: options.engine,
        parity: 0,
        starts_tried: 0,
        crossings: 0,
        events: Vec::new(),
        subdivisions: 0,
        tracked_count: None,
        oracle_agrees: Some(true),
        oracle_count: Some(count),
    })
}

/// Cap on waypoint insertions over one solve.
const MAX_SUBDIVISIONS: usize = 10_000;

/// A segment of the homotopy: `id` moves from `from` to `to`.
#[derive(Debug, Clone)]
struct Segment {
    id: PointId,
    from: Point,
    to: Point,
}

/// One hyperplane of a followed arrangement at both ends of a segment. Along
/// the segment its defining values are affine in time.
struct MovingPlane {
    at0: FastPlane,
    at1: FastPlane,
}

#[derive(Debug, Clone)]
enum When {
    Exact(Rat),
    /// Certified enclosure of the crossing time.
    Near(f64, f64),
}

struct Cross {
    point: PointId,
    plane: usize,
    when: When,
}

/// Every time in `[0, 1]` where a non-incident point meets a hyperplane of an
/// arrangement during one segment, mostly as `f64` enclosures refined on demand.
struct Crossings<'a> {
    config: &'a ColoredPointConfig,
    seg: &'a Segment,
    planes: Vec<MovingPlane>,
    items: Vec<Cross>,
}

fn exact_root(v0: &Rat, v1: &Rat, p: PointId) -> Result<Option<Rat>> {
    if v0.is_zero() && v1.is_zero() {
        return Err(Error::Genericity(format!("point {}.{} stays on a moving hyperplane", p.color + 1, p.index)));
    }
    if v0 == v1 || (v0.is_positive() && v1.is_positive()) || (v0.is_negative() && v1.is_negative()) {
        return Ok(None);
    }
    Ok(Some(v0 / (v0 - v1)))
}

impl<'a> Crossings<'a> {
    /// `config` is the state at time 0 of `seg`; `approx` its rounded copy.
    fn new(
        config: &'a ColoredPointConfig,
        approx: &[Vec<Vec<f64>>],
        seg: &'a Segment,
        specs: &[FamilySpec],
        x: &Assignment,
    ) -> Result<Self> {
        let q = seg.id;
        let mut out = Crossings { config, seg, planes: Vec::new(), items: Vec::new() };
        let Some((f, _)) = x.locate(q) else {
            // Fixed hyperplanes: only the mover can cross them.
            for h in x.realize(config, specs)?.hyperplanes() {
                let v0 = h.value(&seg.from);
                let v1 = h.value(&seg.to);
                let j = out.planes.len();
                out.planes.push(MovingPlane { at0: FastPlane::new(h.clone()), at1: FastPlane::new(h) });
                if let Some(t) = exact_root(&v0, &v1, q)? {
                    out.items.push(Cross { point: q, plane: j, when: When::Exact(t) });
                }
            }
            return Ok(out);
        };
        let spec = &specs[f];
        let d = config.dim;
        let classes = &x.groups[f];
        let rep_of = |c: &Vec<PointId>| *c.iter().find(|&&p| p != q).unwrap_or(&c[0]);
        let normal_at = |pos: &Point| -> Vec<Rat> {
            let mut rows: Vec<Vec<Rat>> = spec.complement_basis().to_vec();
            let at = |p: PointId| if p == q { pos.clone() } else { config.point(p).clone() };
            for c in classes {
                let rep = rep_of(c);
                for &p in c.iter().filter(|&&p| p != rep) {
                    rows.push(rat::sub(&at(p), &at(rep)));
                }
            }
            cofactor(&rows, d)
        };
        let n0 = normal_at(&seg.from);
        let n1 = normal_at(&seg.to);
        for c in classes {
            let rep = rep_of(c);
            let (r0, r1) = if rep == q { (&seg.from, &seg.to) } else { (config.point(rep), config.point(rep)) };
            let at0 = OrientedHyperplane::new(n0.clone(), rat::dot(&n0, r0));
            let at1 = OrientedHyperplane::new(n1.clone(), rat::dot(&n1, r1));
            out.planes.push(MovingPlane { at0: FastPlane::new(at0), at1: FastPlane::new(at1) });
        }
        let incident: BTreeSet<PointId> = x.points().into_iter().collect();
        for (j, plane) in out.planes.iter().enumerate() {
            for p in config.ids().filter(|p| !incident.contains(p)) {
                let pf = &approx[p.color][p.index];
                let (a0, a1) = (plane.at0.approx(pf), plane.at1.approx(pf));
                match (a0.sign(), a1.sign()) {
                    (Some(s0), Some(s1)) if s0 == s1 => {}
                    (Some(_), Some(_)) => {
                        let (lo, hi) = root_interval(a0, a1);
                        out.items.push(Cross { point: p, plane: j, when: When::Near(lo, hi) });
                    }
                    _ => {
                        let pp = config.point(p);
                        if let Some(t) = exact_root(&plane.at0.exact.value(pp), &plane.at1.exact.value(pp), p)? {
                            out.items.push(Cross { point: p, plane: j, when: When::Exact(t) });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn resolve(&mut self, i: usize) -> Result<()> {
        let Cross { point: p, plane: j, when: When::Near(..) } = self.items[i] else { return Ok(()) };
        let (p0, p1) = if p == self.seg.id {
            (&self.seg.from, &self.seg.to)
        } else {
            (self.config.point(p), self.config.point(p))
        };
        let plane = &self.planes[j];
        let t = exact_root(&plane.at0.exact.value(p0), &plane.at1.exact.value(p1), p)?
            .ok_or_else(|| Error::Invariant("certified sign change vanished".into()))?;
        self.items[i].when = When::Exact(t);
        Ok(())
    }

    /// Up to `count` nearest crossings strictly past `t` in the given direction,
    /// nearest first, with exact times.
    fn nearest(&mut self, t: &Rat, forward: bool, count: usize) -> Result<Vec<(Rat, PointId)>> {
        let tf = rat::to_f64(t);
        for i in 0..self.items.len() {
            if let When::Near(lo, hi) = self.items[i].when {
                if lo <= tf && tf <= hi {
                    self.resolve(i)?;
                }
            }
        }
        let key = |w: &When| -> (f64, f64) {
            let (lo, hi) = match w {
                When::Exact(s) => {
                    let v = rat::to_f64(s);
                    let e = 4.0 * f64::EPSILON * v.abs() + f64::MIN_POSITIVE;
                    (v - e, v + e)
                }
                When::Near(lo, hi) => (*lo, *hi),
            };
            if forward {
                (lo, hi)
            } else {
                (-hi, -lo)
            }
        };
        let ahead = |w: &When| match w {
            When::Exact(s) => {
                if forward {
                    s > t
                } else {
                    s < t
                }
            }
            When::Near(lo, _) => (*lo > tf) == forward,
        };
        let mut cands: Vec<usize> = (0..self.items.len()).filter(|&i| ahead(&self.items[i].when)).collect();
        let mut uppers: Vec<f64> = cands.iter().map(|&i| key(&self.items[i].when).1).collect();
        uppers.sort_by(f64::total_cmp);
        let bound = uppers.get(count.saturating_sub(1)).copied().unwrap_or(f64::INFINITY);
        cands.retain(|&i| key(&self.items[i].when).0 <= bound);
        for &i in &cands {
            self.resolve(i)?;
        }
        let mut out: Vec<(Rat, PointId)> = cands
            .iter()
            .map(|&i| match &self.items[i].when {
                When::Exact(s) => (s.clone(), self.items[i].point),
                When::Near(..) => unreachable!("resolved above"),
            })
            .collect();
        out.sort_by(|a, b| if forward { a.0.cmp(&b.0) } else { b.0.cmp(&a.0) });
        out.truncate(count);
        Ok(out)
    }
}

fn cofactor(rows: &[Vec<Rat>], d: usize) -> Vec<Rat> {
    (0..d)
        .map(|i| {
            let minor: Vec<Vec<Rat>> =
                rows.iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect()).collect();
            let m = if minor.is_empty() { Rat::one() } else { crate::linalg::det(&minor) };
            if (d - 1 + i) % 2 == 1 {
                -m
            } else {
                m
            }
        })
        .collect()
}

struct Follower<'a> {
    specs: &'a [FamilySpec],
    segments: Vec<Segment>,
    rng: ChaCha8Rng,
    crossings: usize,
    events: Vec<FollowEvent>,
    subdivisions: usize,
}

/// Walk state: segment index, time in it, direction, followed arrangement,
/// and the configuration at time 0 of the current segment with its rounded copy.
struct Cursor {
    k: usize,
    t: Rat,
    forward: bool,
    x: Assignment,
    config: ColoredPointConfig,
    approx: Vec<Vec<Vec<f64>>>,
}

impl Cursor {
    fn place(&mut self, id: PointId, p: Point) {
        self.approx[id.color][id.index] = approx_point(&p);
        self.config.colors[id.color][id.index] = p;
    }
}

impl Follower<'_> {
    fn at(&self, cur: &Cursor, t: &Rat) -> ColoredPointConfig {
        let s = &self.segments[cur.k];
        moved(&cur.config, s.id, lerp(&s.from, &s.to, t))
    }

    fn bisects(&self, cur: &mut Cursor, a: &Assignment, t: &Rat) -> Result<bool> {
        let s = &self.segments[cur.k];
        let id = s.id;
        let saved = cur.config.point(id).clone();
        cur.place(id, lerp(&s.from, &s.to, t));
        let out = a.realize(&cur.config, self.specs).map(|arr| {
            let planes: Vec<FastPlane> = arr.hyperplanes().into_iter().map(FastPlane::new).collect();
            is_bisecting_fast(&planes, &cur.config, &cur.approx)
        });
        cur.place(id, saved);
        Ok(out?)
    }

    fn crossings<'c>(&'c self, cur: &'c Cursor, a: &Assignment) -> Result<Crossings<'c>> {
        Crossings::new(&cur.config, &cur.approx, &self.segments[cur.k], self.specs, a)
    }

    /// Splits the current segment so the walk resumes at a segment boundary
    /// strictly between `cur.t` and `t1`, then detours through a random waypoint.
    fn subdivide(&mut self, cur: &mut Cursor, t1: &Rat) -> Result<()> {
        self.subdivisions += 1;
        if self.subdivisions > MAX_SUBDIVISIONS {
            return Err(Error::SimultaneousEvents("too many waypoint detours".into()));
        }
        let s = self.segments[cur.k].clone();
        let half = Rat::new(1.into(), 2.into());
        let p = lerp(&s.from, &s.to, &((&cur.t + t1) * &half));
        let w = waypoint(&mut self.rng, &s.from, &s.to);
        let seg = |from: &Point, to: &Point| Segment { id: s.id, from: from.clone(), to: to.clone() };
        if cur.forward {
            self.segments.splice(cur.k..=cur.k, [seg(&s.from, &p), seg(&p, &w), seg(&w, &s.to)]);
            cur.t = Rat::one();
        } else {
            self.segments.splice(cur.k..=cur.k, [seg(&s.from, &w), seg(&w, &p), seg(&p, &s.to)]);
            cur.k += 2;
            cur.place(s.id, p);
            cur.t = Rat::zero();
        }
        Ok(())
    }

    /// Follows `x` from the start. `Ok(Ok(a))` reached the target with `a`;
    /// `Ok(Err(a))` came back to the start on `a`.
    fn run(&mut self, start: &ColoredPointConfig, x: Assignment, max_events: usize) -> Result<std::result::Result<Assignment, Assignment>> {
        let mut cur =
            Cursor { k: 0, t: Rat::zero(), forward: true, x, config: start.clone(), approx: approx_points(start) };
        let half = Rat::new(1.into(), 2.into());
        loop {
            if self.segments.is_empty() {
                return Ok(Ok(cur.x));
            }
            if cur.forward && cur.t.is_one() {
                if cur.k + 1 == self.segments.len() {
                    return Ok(Ok(cur.x));
                }
                let s = &self.segments[cur.k];
                cur.place(s.id, s.to.clone());
                cur.k += 1;
                cur.t = Rat::zero();
                continue;
            }
            if !cur.forward && cur.t.is_zero() {
                if cur.k == 0 {
                    return Ok(Err(cur.x));
                }
                cur.k -= 1;
                let s = &self.segments[cur.k];
                cur.place(s.id, s.from.clone());
                cur.t = Rat::one();
                continue;
            }
            if self.events.len() > max_events {
                return Err(Error::CycleDetected(format!("no exit after {max_events} events")));
            }
            let end = if cur.forward { Rat::one() } else { Rat::zero() };
            let ahead = match self.crossings(&cur, &cur.x).and_then(|mut c| c.nearest(&cur.t, cur.forward, 2)) {
                Ok(v) => v,
                Err(Error::Genericity(_)) => {
                    self.subdivide(&mut cur, &end)?;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let Some((t1, p)) = ahead.first().cloned() else {
                cur.t = end;
                continue;
            };
            if t1 == end || ahead.get(1).is_some_and(|(t, _)| *t == t1) {
                self.subdivide(&mut cur, &t1)?;
                continue;
            }
            self.crossings += 1;
            let next = ahead.get(1).map_or(end.clone(), |(t, _)| t.clone());
            let eps = (&next - &t1).abs() * &half;
            let shifted = |forward: bool, e: &Rat| if forward { &t1 + e } else { &t1 - e };
            let x = cur.x.clone();
            let fwd = cur.forward;
            if self.bisects(&mut cur, &x, &shifted(fwd, &eps))? {
                cur.t = t1;
                continue;
            }
            let frozen = self.at(&cur, &t1);
            let outcome = match pivot_moving_hyperplane(&frozen, self.specs, &cur.x, p) {
                Ok(o) => o,
                Err(Error::SimultaneousEvents(_)) | Err(Error::Genericity(_)) | Err(Error::Degenerate(_)) => {
                    self.subdivide(&mut cur, &t1)?;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let partner = outcome.partner.canonical(self.specs);
            let eps_f = {
                let mut c = self.crossings(&cur, &partner)?;
                let mut e = eps.clone();
                for dir in [true, false] {
                    let bound = if dir { Rat::one() } else { Rat::zero() };
                    let near = c.nearest(&t1, dir, 1)?.first().map_or(bound, |(s, _)| s.clone());
                    e = e.min((&near - &t1).abs() * &half);
                }
                e
            };
            let died = cur.x.to_string();
            let reversed = if self.bisects(&mut cur, &partner, &shifted(fwd, &eps_f))? {
                false
            } else if self.bisects(&mut cur, &partner, &shifted(!fwd, &eps_f))? {
                true
            } else {
                return Err(Error::Inconsistent(format!("partner {partner} of {died} bisects on neither side")));
            };
            self.events.push(FollowEvent {
                move_index: cur.k,
                time: t1.clone(),
                died,
                partner: partner.to_string(),
                reversed,
                pivot_steps: outcome.trace.len(),
            });
            cur.x = partner;
            cur.t = t1;
            if reversed {
                cur.forward = !cur.forward;
            }
        }
    }
}

/// Follows arrangements from the start set until one reaches the end of `moves`.
fn follow(
    start: &ColoredPointConfig,
    moves: &[Move],
    specs: &[FamilySpec],
    starts: &[Assignment],
    options: &SolveOptions,
) -> Result<Solution> {
    let segments: Vec<Segment> =
        moves.iter().map(|m| Segment { id: m.id(), from: start.point(m.id()).clone(), to: m.target.clone() }).collect();
    let mut follower = Follower {
        specs,
        segments,
        rng: ChaCha8Rng::seed_from_u64(options.seed ^ 0x5eed),
        crossings: 0,
        events: Vec::new(),
        subdivisions: 0,
    };
    let mut used: BTreeSet<Assignment> = BTreeSet::new();
    let mut tried = 0;
    for x in starts {
        if used.contains(x) {
            continue;
        }
        used.insert(x.clone());
        tried += 1;
        match follower.run(start, x.clone(), options.max_events)? {
            Ok(found) => {
                let end = moves.iter().fold(start.clone(), |c, m| moved(&c, m.id(), m.target.clone()));
                return Ok(Solution {
                    arrangement: found.realize(&end, specs)?,
                    assignment: found,
                    engine: Engine::PathFollowing,
                    parity: 1,
                    starts_tried: tried,
                    crossings: follower.crossings,
                    events: follower.events,
                    subdivisions: follower.subdivisions,
                    tracked_count: None,
                    oracle_agrees: None,
                    oracle_count: None,
                });
            }
            Err(back) => {
                if !starts.contains(&back) {
                    return Err(Error::Inconsistent(format!("path returned to the start on unknown arrangement {back}")));
                }
                used.insert(back);
            }
        }
    }
    Err(Error::Inconsistent(format!("all {} start arrangements paired among themselves", starts.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::unconstrained;
    use rand::Rng;

    fn random_config(d: usize, sizes: &[usize], seed: u64) -> ColoredPointConfig {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let colors = sizes
                .iter()
                .map(|&n| (0..n).map(|_| (0..d).map(|_| rat::int(rng.gen_range(-100..=100))).collect()).collect())
                .collect();
            if let Ok(c) = ColoredPointConfig::new(d, colors) {
                return c;
            }
        }
    }

    #[test]
    fn both_engines_find_oracle_answers() {
        let specs = unconstrained(2, &[1]);
        for seed in 0..3 {
            let target = random_config(2, &[5, 3], seed);
            for engine in [Engine::PathFollowing, Engine::Tracked] {
                let sol = solve(&target, &specs, &SolveOptions { engine, seed, ..Default::default() }).unwrap();
                assert_eq!(sol.oracle_agrees, Some(true), "{engine:?} seed {seed}");
            }
        }
    }

    #[test]
    fn two_lines_in_the_plane() {
        let specs = unconstrained(2, &[2]);
        let target = random_config(2, &[3, 3, 5], 7);
        let sol = solve(&target, &specs, &SolveOptions::default()).unwrap();
        assert_eq!(sol.oracle_agrees, Some(true));
        let tracked = solve(&target, &specs, &SolveOptions { engine: Engine::Tracked, ..Default::default() }).unwrap();
        assert_eq!(tracked.tracked_count, tracked.oracle_count);
    }
}
