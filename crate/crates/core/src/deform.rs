//! Deformation paths and the tracked-set engine.
//!
//! A path moves one point at a time along a straight segment. Every other
//! point is frozen, so the set of bisecting arrangements can only change when
//! the moving point `q` completes a dependent structure: a set `S` of
//! `l + r` points containing `q`, split into `r` classes, whose difference
//! vectors together with a basis of `L^⊥` span only a hyperplane. Its
//! determinant is affine in `q`, hence in time, so event times are exact.
//!
//! At an event only arrangements through all but one point of that structure
//! can change status. The engine enumerates them, evaluates each just before
//! and just after the event, and applies the difference to the tracked set.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{enumerate_valid_partitions, is_bisecting, Assignment, FamilySpec, ValidPartition};
use crate::combi::{blocks_of, combinations, set_partitions};
use crate::config::{ColoredPointConfig, PointId};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::linalg::det;
use crate::oracle::{enumerate_bisectors, precheck_generic};
use crate::pivot::{pivot_moving_hyperplane, PivotStep};
use crate::poly::{Poly, Root};
use crate::rat::{self, Rat};

/// Straight-line move of one point to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub color: usize,
    pub index: usize,
    #[serde(with = "rat::vec")]
    pub target: Point,
}

impl Move {
    pub fn id(&self) -> PointId {
        PointId { color: self.color, index: self.index }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationPath {
    pub base: ColoredPointConfig,
    pub moves: Vec<Move>,
}

/// Point at time `t` on the segment from `a` to `b`.
pub fn lerp(a: &[Rat], b: &[Rat], t: &Rat) -> Point {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// `config` with `id` moved to `p`, without re-validating distinctness.
pub fn moved(config: &ColoredPointConfig, id: PointId, p: Point) -> ColoredPointConfig {
    let mut c = config.clone();
    c.colors[id.color][id.index] = p;
    c
}

/// Minimal dependent structure completed at an event.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Circuit {
    /// Index of the first family whose subspace carries the dependency.
    pub family: usize,
    pub classes: Vec<Vec<PointId>>,
}

impl Circuit {
    fn points(&self) -> Vec<PointId> {
        self.classes.iter().flatten().copied().collect()
    }

    /// Every class of `self` lies inside a class of `other`, distinct classes apart.
    fn embeds_in(&self, other: &Circuit) -> bool {
        if self.family != other.family {
            return false;
        }
        let mut used = Vec::new();
        for c in &self.classes {
            let Some(j) = other.classes.iter().position(|o| o.contains(&c[0])) else { return false };
            if !c.iter().all(|p| other.classes[j].contains(p)) || used.contains(&j) {
                return false;
            }
            used.push(j);
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventTime {
    pub t: Rat,
    pub circuit: Circuit,
}

/// Families grouped by subspace: first index and largest `k`.
fn subspace_groups(specs: &[FamilySpec]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        match out.iter_mut().find(|(j, _)| specs[*j].subspace == s.subspace) {
            Some(e) => e.1 = e.1.max(s.k),
            None => out.push((i, s.k)),
        }
    }
    out
}

/// Generalized cross product: the vector whose dot product with `x` is `det(rows; x)`.
fn cofactor(rows: &[Vec<Rat>], d: usize) -> Vec<Rat> {
    (0..d)
        .map(|i| {
            let minor: Vec<Vec<Rat>> =
                rows.iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect()).collect();
            let m = if minor.is_empty() { Rat::one() } else { det(&minor) };
            let sign_flip = (d - 1 + i) % 2 == 1;
            if sign_flip {
                -m
            } else {
                m
            }
        })
        .collect()
}

/// All exceptional times in `(0, 1)` for moving `id` from its position in
/// `config` to `target`, grouped by time and reduced to minimal structures.
pub fn detect_events(
    config: &ColoredPointConfig,
    id: PointId,
    target: &Point,
    specs: &[FamilySpec],
) -> Result<Vec<EventTime>> {
    let d = config.dim;
    let a = config.point(id).clone();
    let others: Vec<PointId> = config.ids().filter(|&p| p != id).collect();
    let zero = Rat::zero();
    let one = Rat::one();
    let width = Rat::new(1.into(), (1u64 << 40).into());
    let mut found: BTreeMap<Rat, Vec<Circuit>> = BTreeMap::new();
    for (fi, kmax) in subspace_groups(specs) {
        let spec = &specs[fi];
        let l = spec.l();
        for r in 1..=kmax {
            let size = l + r;
            if size > others.len() + 1 {
                continue;
            }
            for combo in combinations(others.len(), size - 1) {
                let mut members: Vec<PointId> = vec![id];
                members.extend(combo.iter().map(|&i| others[i]));
                for labels in set_partitions(size, r) {
                    let classes = blocks_of(&members, &labels);
                    // The mover must share its class, otherwise the determinant is constant.
                    if classes[labels[0]].len() < 2 {
                        continue;
                    }
                    let mut rows: Vec<Vec<Rat>> = spec.complement_basis().to_vec();
                    let mut mover_rep = None;
                    for c in &classes {
                        if c.contains(&id) {
                            let rep = *c.iter().find(|&&p| p != id).unwrap();
                            mover_rep = Some(rep);
                            for &p in c.iter().filter(|&&p| p != id && p != rep) {
                                rows.push(rat::sub(config.point(p), config.point(rep)));
                            }
                        } else {
                            for &p in &c[1..] {
                                rows.push(rat::sub(config.point(p), config.point(c[0])));
                            }
                        }
                    }
                    let rep = config.point(mover_rep.unwrap());
                    let cof = cofactor(&rows, d);
                    let v0 = rat::dot(&cof, &rat::sub(&a, rep));
                    let v1 = rat::dot(&cof, &rat::sub(target, rep));
                    let poly = Poly::new(vec![v0.clone(), v1 - v0]);
                    if poly.is_zero() {
                        return Err(Error::Genericity(format!(
                            "moving point stays dependent with {} other points",
                            members.len() - 1
                        )));
                    }
                    for root in poly.roots_in(&zero, &one, &width) {
                        let Root::Exact(t) = root else {
                            return Err(Error::Degenerate("non-rational event time".into()));
                        };
                        let circuit = Circuit { family: fi, classes: canonical_classes(classes.clone()) };
                        found.entry(t).or_default().push(circuit);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for (t, circuits) in found {
        let minimal: BTreeSet<Circuit> = circuits
            .iter()
            .filter(|c| !circuits.iter().any(|o| o != *c && o.points().len() < c.points().len() && o.embeds_in(c)))
            .cloned()
            .collect();
        if minimal.len() != 1 {
            return Err(Error::SimultaneousEvents(format!(
                "{} independent degeneracies at t = {}",
                minimal.len(),
                rat::format(&t)
            )));
        }
        out.push(EventTime { t, circuit: minimal.into_iter().next().unwrap() });
    }
    Ok(out)
}

fn canonical_classes(mut classes: Vec<Vec<PointId>>) -> Vec<Vec<PointId>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

/// A labelled arrangement that may change status at an event, with the
/// structure point it touches there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub assignment: Assignment,
    pub extra: PointId,
}

/// Arrangements through all points of `circuit` but one, consistent with its classes.
pub fn event_candidates(
    config: &ColoredPointConfig,
    specs: &[FamilySpec],
    partitions: &[ValidPartition],
    circuit: &Circuit,
) -> Vec<Candidate> {
    let m = config.num_colors();
    let mut out: BTreeMap<Assignment, PointId> = BTreeMap::new();
    let pts = circuit.points();
    for &x in &pts {
        let rest: Vec<Vec<PointId>> = circuit
            .classes
            .iter()
            .map(|c| c.iter().copied().filter(|&p| p != x).collect::<Vec<_>>())
            .filter(|c| !c.is_empty())
            .collect();
        let fixed: Vec<PointId> = rest.iter().flatten().copied().collect();
        let mut colors: Vec<usize> = fixed.iter().map(|p| p.color).collect();
        colors.sort_unstable();
        colors.dedup();
        if colors.len() != fixed.len() {
            continue;
        }
        for chi in partitions {
            let Some(fam) = consistent_family(chi, specs, circuit.family, &rest) else { continue };
            let _ = fam;
            let free: Vec<usize> = (0..m).filter(|c| !colors.contains(c)).collect();
            let mut pick = vec![0usize; free.len()];
            loop {
                let mut ids: Vec<PointId> = (0..m).map(|c| PointId { color: c, index: 0 }).collect();
                for p in &fixed {
                    ids[p.color] = *p;
                }
                for (&c, &i) in free.iter().zip(&pick) {
                    ids[c] = PointId { color: c, index: i };
                }
                let a = Assignment::from_partition(chi, &ids).canonical(specs);
                out.entry(a).or_insert(x);
                let mut j = 0;
                loop {
                    if j == pick.len() {
                        break;
                    }
                    pick[j] += 1;
                    if pick[j] < config.colors[free[j]].len() {
                        break;
                    }
                    pick[j] = 0;
                    j += 1;
                }
                if j == pick.len() {
                    break;
                }
            }
        }
    }
    out.into_iter().map(|(assignment, extra)| Candidate { assignment, extra }).collect()
}

/// Family of `chi` that holds the colors of `rest` with matching class structure.
fn consistent_family(
    chi: &ValidPartition,
    specs: &[FamilySpec],
    subspace_family: usize,
    rest: &[Vec<PointId>],
) -> Option<usize> {
    let first = rest.first()?.first()?.color;
    let (f, _) = chi.locate(first)?;
    if specs[f].subspace != specs[subspace_family].subspace {
        return None;
    }
    let mut used = Vec::new();
    for c in rest {
        let mut cls = None;
        for p in c {
            let (ff, cc) = chi.locate(p.color)?;
            if ff != f || cls.is_some_and(|x| x != cc) {
                return None;
            }
            cls = Some(cc);
        }
        let cc = cls?;
        if used.contains(&cc) {
            return None;
        }
        used.push(cc);
    }
    Some(f)
}

/// Bisection status of a labelled arrangement in `config`.
pub fn status(config: &ColoredPointConfig, specs: &[FamilySpec], a: &Assignment) -> Result<bool> {
    Ok(is_bisecting(&a.realize(config, specs)?, config))
}

/// One arrangement paired by the walk at an event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub arrangement: String,
    pub partner: Option<String>,
    /// Whether the walk's partner is itself among the arrangements changing status.
    pub consistent: bool,
    pub trace: Vec<PivotStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub move_index: usize,
    #[serde(with = "rat::one")]
    pub time: Rat,
    pub structure: String,
    pub dying: Vec<String>,
    pub born: Vec<String>,
    pub delta: i64,
    pub pairs: Vec<PairRecord>,
}

fn circuit_notation(c: &Circuit) -> String {
    c.classes
        .iter()
        .map(|cl| cl.iter().map(|p| format!("{}.{}", p.color + 1, p.index)).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("|")
}

/// Applies one event to the tracked set and records it.
#[allow(clippy::too_many_arguments)]
pub fn resolve_event(
    tracked: &mut BTreeSet<Assignment>,
    config: &ColoredPointConfig,
    id: PointId,
    target: &Point,
    specs: &[FamilySpec],
    partitions: &[ValidPartition],
    event: &EventTime,
    eps: &Rat,
    move_index: usize,
) -> Result<EventRecord> {
    let a = config.point(id).clone();
    let at = |t: &Rat| moved(config, id, lerp(&a, target, t));
    let before = at(&(&event.t - eps));
    let after = at(&(&event.t + eps));
    let frozen = at(&event.t);
    let mut dying = Vec::new();
    let mut born = Vec::new();
    for cand in event_candidates(config, specs, partitions, &event.circuit) {
        let s0 = status(&before, specs, &cand.assignment)?;
        let s1 = status(&after, specs, &cand.assignment)?;
        match (s0, s1) {
            (true, false) => dying.push(cand),
            (false, true) => born.push(cand),
            _ => {}
        }
    }
    for c in &dying {
        if !tracked.remove(&c.assignment) {
            return Err(Error::Inconsistent(format!("arrangement {} died but was not tracked", c.assignment)));
        }
    }
    for c in &born {
        if !tracked.insert(c.assignment.clone()) {
            return Err(Error::Inconsistent(format!("arrangement {} born but already tracked", c.assignment)));
        }
    }
    let delta = born.len() as i64 - dying.len() as i64;
    // Arrangements change status in pivot pairs, so only the parity is fixed;
    // several disjoint pairs may switch at one event.
    if delta % 2 != 0 {
        return Err(Error::Inconsistent(format!("event changed the count by {delta}")));
    }
    let changed: BTreeSet<&Assignment> = dying.iter().chain(&born).map(|c| &c.assignment).collect();
    let mut pairs = Vec::new();
    for c in dying.iter().chain(&born) {
        let rec = match pivot_moving_hyperplane(&frozen, specs, &c.assignment, c.extra) {
            Ok(out) => {
                let partner = out.partner.canonical(specs);
                PairRecord {
                    arrangement: c.assignment.to_string(),
                    consistent: partner != c.assignment && changed.contains(&partner),
                    partner: Some(partner.to_string()),
                    trace: out.trace,
                }
            }
            Err(_) => PairRecord { arrangement: c.assignment.to_string(), partner: None, consistent: false, trace: Vec::new() },
        };
        pairs.push(rec);
    }
    Ok(EventRecord {
        move_index,
        time: event.t.clone(),
        structure: circuit_notation(&event.circuit),
        dying: dying.iter().map(|c| c.assignment.to_string()).collect(),
        born: born.iter().map(|c| c.assignment.to_string()).collect(),
        delta,
        pairs,
    })
}

/// Half the smallest gap between consecutive times in `{0} ∪ times ∪ {1}`.
pub fn half_gap(times: &[Rat]) -> Rat {
    let mut all = vec![Rat::zero()];
    all.extend(times.iter().cloned());
    all.push(Rat::one());
    all.sort();
    let gap = all.windows(2).map(|w| &w[1] - &w[0]).filter(|g| g.is_positive()).min().unwrap_or_else(Rat::one);
    gap / Rat::from_integer(2.into())
}

/// Retries allowed when a move has to be split around a simultaneous degeneracy.
pub const WAYPOINT_RETRIES: u32 = 6;

/// A tracked-set session: the current configuration and every bisecting
/// arrangement, updated event by event.
#[derive(Debug, Clone)]
pub struct TrackedSession {
    pub config: ColoredPointConfig,
    pub specs: Vec<FamilySpec>,
    pub tracked: BTreeSet<Assignment>,
    pub events: Vec<EventRecord>,
    pub moves_done: usize,
    partitions: Vec<ValidPartition>,
    rng: ChaCha8Rng,
}

impl TrackedSession {
    /// Starts from a known complete set of bisecting arrangements.
    pub fn with_tracked(
        config: ColoredPointConfig,
        specs: &[FamilySpec],
        tracked: BTreeSet<Assignment>,
        seed: u64,
    ) -> Result<Self> {
        let partitions = enumerate_valid_partitions(config.num_colors(), specs)?;
        Ok(TrackedSession {
            config,
            specs: specs.to_vec(),
            tracked,
            events: Vec::new(),
            moves_done: 0,
            partitions,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// Starts from the oracle's answer on `config`.
    pub fn from_oracle(config: ColoredPointConfig, specs: &[FamilySpec], seed: u64) -> Result<Self> {
        let tracked = crate::oracle::brute_force_bisectors(&config, specs)?.into_iter().map(|b| b.assignment).collect();
        Self::with_tracked(config, specs, tracked, seed)
    }

    /// Moves one point, splitting the segment at a random waypoint when two
    /// degeneracies coincide.
    pub fn apply_move(&mut self, mv: &Move) -> Result<()> {
        let index = self.moves_done;
        self.apply_segment(mv.id(), &mv.target, index, WAYPOINT_RETRIES)?;
        self.moves_done += 1;
        Ok(())
    }

    fn apply_segment(&mut self, id: PointId, target: &Point, index: usize, retries: u32) -> Result<()> {
        match self.try_segment(id, target, index) {
            Err(Error::SimultaneousEvents(msg)) | Err(Error::Genericity(msg)) => {
                if retries == 0 {
                    return Err(Error::SimultaneousEvents(msg));
                }
                let a = self.config.point(id).clone();
                let way = waypoint(&mut self.rng, &a, target);
                self.apply_segment(id, &way, index, retries - 1)?;
                self.apply_segment(id, target, index, retries - 1)
            }
            other => other,
        }
    }

    fn try_segment(&mut self, id: PointId, target: &Point, index: usize) -> Result<()> {
        let end = moved(&self.config, id, target.clone());
        end.validate()?;
        precheck_generic(&end, &self.specs)?;
        let events = detect_events(&self.config, id, target, &self.specs)?;
        let times: Vec<Rat> = events.iter().map(|e| e.t.clone()).collect();
        let eps = half_gap(&times);
        let mut tracked = self.tracked.clone();
        let mut records = Vec::new();
        for e in &events {
            records.push(resolve_event(&mut tracked, &self.config, id, target, &self.specs, &self.partitions, e, &eps, index)?);
        }
        self.tracked = tracked;
        self.events.extend(records);
        self.config = end;
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.tracked.len()
    }
}

/// Random point near the middle of the segment, off its line.
pub fn waypoint(rng: &mut ChaCha8Rng, a: &[Rat], b: &[Rat]) -> Point {
    let half = Rat::new(1.into(), 2.into());
    let mid = lerp(a, b, &half);
    let len: Rat = a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or_else(Rat::one);
    let scale = len / Rat::from_integer((1i64 << 20).into());
    mid.iter().map(|x| x + &scale * Rat::from_integer(rng.gen_range(-(1i64 << 16)..=(1i64 << 16)).into())).collect()
}

/// Outcome of replaying a path with the tracked-set engine.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub events: Vec<EventRecord>,
    /// Tracked count after each move, starting with the base configuration.
    pub counts: Vec<usize>,
    pub parity_constant: bool,
    /// Every event changed the count by an even amount.
    pub deltas_even: bool,
    /// Every event changed the count by at most two.
    pub deltas_at_most_two: bool,
    /// Tracked set equal to the oracle at every move boundary where it ran.
    pub oracle_agrees: bool,
    pub oracle_checks: usize,
    /// Pairs whose walk partner was also among the changed arrangements.
    pub consistent_pairs: usize,
    pub total_pairs: usize,
}

/// Replays `path`, checking parity, deltas, and agreement with the oracle
/// whenever the configuration has at most `oracle_bound` points.
pub fn verify_parity_invariance(
    path: &DeformationPath,
    specs: &[FamilySpec],
    oracle_bound: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let mut session = TrackedSession::from_oracle(path.base.clone(), specs, seed)?;
    let mut counts = vec![session.count()];
    let mut oracle_agrees = true;
    let mut oracle_checks = 0;
    for mv in &path.moves {
        session.apply_move(mv)?;
        counts.push(session.count());
        if session.config.total_points() <= oracle_bound {
            let oracle: BTreeSet<Assignment> =
                enumerate_bisectors(&session.config, specs).into_iter().map(|b| b.assignment).collect();
            oracle_checks += 1;
            if oracle != session.tracked {
                oracle_agrees = false;
            }
        }
    }
    let parity_constant = counts.iter().all(|c| c % 2 == counts[0] % 2);
    let deltas_even = session.events.iter().all(|e| e.delta % 2 == 0);
    let deltas_at_most_two = session.events.iter().all(|e| e.delta.abs() <= 2);
    let total_pairs = session.events.iter().map(|e| e.pairs.len()).sum();
    let consistent_pairs = session.events.iter().flat_map(|e| &e.pairs).filter(|p| p.consistent).count();
    Ok(InvarianceReport {
        events: session.events,
        counts,
        parity_constant,
        deltas_even,
        deltas_at_most_two,
        oracle_agrees,
        oracle_checks,
        consistent_pairs,
        total_pairs,
    })
}

/// Random generic path: `moves` single-point moves to uniform integer targets
/// in `[-range, range]^d` (scaled by `1/1024`), with targets re-drawn until the
/// resulting configuration stays valid.
pub fn random_path(base: &ColoredPointConfig, moves: usize, range: i64, seed: u64) -> DeformationPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<PointId> = base.ids().collect();
    let mut config = base.clone();
    let mut out = Vec::with_capacity(moves);
    let scale = Rat::new(1.into(), 1024.into());
    while out.len() < moves {
        let id = ids[rng.gen_range(0..ids.len())];
        let target: Point = (0..base.dim).map(|_| Rat::from_integer(rng.gen_range(-range..=range).into()) * &scale).collect();
        let next = moved(&config, id, target.clone());
        if next.validate().is_err() {
            continue;
        }
        config = next;
        out.push(Move { color: id.color, index: id.index, target });
    }
    DeformationPath { base: base.clone(), moves: out }
}
