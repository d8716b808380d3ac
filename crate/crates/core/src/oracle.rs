//! Exhaustive enumeration of bisecting valid arrangements, and the
//! well-separated symmetric start configuration with a known answer.
//!
//! The enumeration is factorized per family: every family candidate (a color
//! subset, one point per color, a split into classes) is constructed once and
//! reduced to two bit masks over all points, its positive-side parity and its
//! incidences. Whole arrangements are then combined with XOR and OR.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{
    build_family, enumerate_valid_partitions, is_bisecting, signature, Arrangement, Assignment, Family, FamilySpec,
};
use crate::bitset::BitSet;
use crate::combi::{blocks_of, combinations, set_partitions};
use crate::config::{ColoredPointConfig, PointId};
use crate::error::{Error, Result};
use crate::geom::{check_generic, generic_check_cost, Point};
use crate::linalg::Subspace;
use crate::parity::compute_n;
use crate::rat::{self, Rat};

/// Largest number of rank evaluations the oracle spends on its genericity precheck.
pub const GENERIC_CHECK_BUDGET: u128 = 3_000_000;

/// A bisecting arrangement together with the labelled points it passes through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisector {
    pub assignment: Assignment,
    pub arrangement: Arrangement,
}

struct Candidate {
    parity: BitSet,
    boundary: BitSet,
    classes: Vec<Vec<PointId>>,
    family: Family,
}

/// Number of arrangements the oracle would construct and test.
pub fn oracle_cost(config: &ColoredPointConfig, specs: &[FamilySpec]) -> f64 {
    let sizes: Vec<f64> = config.colors.iter().map(|c| c.len() as f64).collect();
    let prod: f64 = sizes.iter().product();
    let parts: Vec<usize> = specs.iter().map(FamilySpec::m).collect();
    let total: usize = parts.iter().sum();
    let count = crate::parity::multinomial(total, &parts)
        .ok()
        .map(|m| specs.iter().fold(m, |acc, s| acc * crate::parity::stirling2(s.m(), s.k)))
        .unwrap_or_default();
    prod * count.to_string().parse::<f64>().unwrap_or(f64::INFINITY)
}

fn check_shape(config: &ColoredPointConfig, specs: &[FamilySpec]) -> Result<()> {
    let need: usize = specs.iter().map(FamilySpec::m).sum();
    if need != config.num_colors() {
        return Err(Error::InvalidInput(format!(
            "families need {need} colors (sum of l + k - 1), configuration has {}",
            config.num_colors()
        )));
    }
    if let Some(s) = specs.iter().find(|s| s.dim() != config.dim) {
        return Err(Error::Dimension { expected: config.dim, got: s.dim() });
    }
    Ok(())
}

/// Genericity precheck, skipped when it would exceed the budget.
pub fn precheck_generic(config: &ColoredPointConfig, specs: &[FamilySpec]) -> Result<()> {
    let pts = config.flat_points();
    if generic_check_cost(pts.len(), specs) > GENERIC_CHECK_BUDGET {
        return Ok(());
    }
    let ids: Vec<PointId> = config.ids().collect();
    check_generic(&pts, specs).map_err(|w| {
        let named: Vec<Vec<String>> = w
            .classes
            .iter()
            .map(|c| c.iter().map(|&i| format!("{}.{}", ids[i].color + 1, ids[i].index)).collect())
            .collect();
        Error::Genericity(format!("family {}: classes {:?} have rank {} < {}", w.family, named, w.rank, w.expected))
    })
}

/// Every bisecting valid arrangement of `config`, one per symmetry class,
/// sorted by label.
pub fn brute_force_bisectors(config: &ColoredPointConfig, specs: &[FamilySpec]) -> Result<Vec<Bisector>> {
    check_shape(config, specs)?;
    precheck_generic(config, specs)?;
    Ok(enumerate_bisectors(config, specs))
}

/// The enumeration itself, without prechecks.
pub fn enumerate_bisectors(config: &ColoredPointConfig, specs: &[FamilySpec]) -> Vec<Bisector> {
    let n = config.total_points();
    let ids: Vec<PointId> = config.ids().collect();
    let flat = config.flat_points();
    let mut color_masks = Vec::new();
    for c in 0..config.num_colors() {
        let mut m = BitSet::new(n);
        for (i, id) in ids.iter().enumerate() {
            if id.color == c {
                m.set(i);
            }
        }
        color_masks.push(m);
    }
    let sizes: Vec<u32> = config.colors.iter().map(|c| c.len() as u32).collect();

    // Candidates per (family type, color subset), shared by identical families.
    let blocks = crate::arrangement::symmetry_blocks(specs);
    let mut cache: BTreeMap<(usize, Vec<usize>), Vec<Candidate>> = BTreeMap::new();
    let mut out: BTreeMap<Assignment, Arrangement> = BTreeMap::new();

    let m_total = config.num_colors();
    let parts: Vec<usize> = specs.iter().map(FamilySpec::m).collect();
    for split in ordered_splits(m_total, &parts) {
        for (fi, colors) in split.iter().enumerate() {
            cache
                .entry((blocks[fi], colors.clone()))
                .or_insert_with(|| family_candidates(config, &flat, &specs[fi], colors));
        }
        let lists: Vec<&Vec<Candidate>> =
            split.iter().enumerate().map(|(fi, colors)| &cache[&(blocks[fi], colors.clone())]).collect();
        let mut parity = BitSet::new(n);
        let mut boundary = BitSet::new(n);
        let mut chosen = Vec::with_capacity(specs.len());
        combine(&lists, 0, &mut parity, &mut boundary, &mut chosen, &mut |picked: &[&Candidate], p: &BitSet, b: &BitSet| {
            for (mask, &size) in color_masks.iter().zip(&sizes) {
                let (odd, even, on) = p.interior_counts(b, mask);
                if 2 * (even + on) < size || 2 * (odd + on) < size {
                    return;
                }
            }
            let assignment = Assignment::new(picked.iter().map(|c| c.classes.clone()).collect()).canonical(specs);
            out.entry(assignment).or_insert_with(|| {
                Arrangement::new(picked.iter().map(|c| c.family.clone()).collect())
            });
        });
    }
    out.into_iter().map(|(assignment, arrangement)| Bisector { assignment, arrangement }).collect()
}

fn combine<'a, F>(
    lists: &[&'a Vec<Candidate>],
    depth: usize,
    parity: &mut BitSet,
    boundary: &mut BitSet,
    chosen: &mut Vec<&'a Candidate>,
    visit: &mut F,
) where
    F: FnMut(&[&Candidate], &BitSet, &BitSet),
{
    if depth == lists.len() {
        visit(chosen, parity, boundary);
        return;
    }
    let saved_p = parity.clone();
    let saved_b = boundary.clone();
    for cand in lists[depth].iter() {
        parity.xor_with(&cand.parity);
        boundary.or_with(&cand.boundary);
        chosen.push(cand);
        combine(lists, depth + 1, parity, boundary, chosen, visit);
        chosen.pop();
        parity.copy_from(&saved_p);
        boundary.copy_from(&saved_b);
    }
}

/// Ordered splits of `0..total` into consecutive groups of the given sizes.
fn ordered_splits(total: usize, parts: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn rec(rest: &[usize], parts: &[usize], acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&m, tail)) = parts.split_first() else {
            out.push(acc.clone());
            return;
        };
        for pick in combinations(rest.len(), m) {
            let chosen: Vec<usize> = pick.iter().map(|&i| rest[i]).collect();
            let left: Vec<usize> = rest.iter().copied().filter(|x| !chosen.contains(x)).collect();
            acc.push(chosen);
            rec(&left, tail, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(&(0..total).collect::<Vec<_>>(), parts, &mut Vec::new(), &mut out);
    out
}

fn family_candidates(config: &ColoredPointConfig, flat: &[Point], spec: &FamilySpec, colors: &[usize]) -> Vec<Candidate> {
    let n = flat.len();
    let mut out = Vec::new();
    let partitions = set_partitions(colors.len(), spec.k);
    let mut pick = vec![0usize; colors.len()];
    loop {
        let ids: Vec<PointId> = colors.iter().zip(&pick).map(|(&c, &i)| PointId { color: c, index: i }).collect();
        for labels in &partitions {
            let classes = blocks_of(&ids, labels);
            let pts: Vec<Vec<&Point>> = classes.iter().map(|c| c.iter().map(|&id| config.point(id)).collect()).collect();
            let Ok((v, mut offsets)) = build_family(spec, 0, &pts) else { continue };
            let mut parity = BitSet::new(n);
            let mut boundary = BitSet::new(n);
            for (i, p) in flat.iter().enumerate() {
                let x = rat::dot(&v, p);
                let mut odd = false;
                for c in &offsets {
                    match x.cmp(c) {
                        std::cmp::Ordering::Equal => boundary.set(i),
                        std::cmp::Ordering::Greater => odd = !odd,
                        std::cmp::Ordering::Less => {}
                    }
                }
                if odd {
                    parity.set(i);
                }
            }
            offsets.sort();
            out.push(Candidate { parity, boundary, classes, family: Family { v, offsets } });
        }
        // Odometer over one point per color.
        let mut j = 0;
        loop {
            if j == pick.len() {
                return out;
            }
            pick[j] += 1;
            if pick[j] < config.colors[colors[j]].len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
}

/// Canonical start: clusters around generic centers with a known answer.
#[derive(Debug, Clone)]
pub struct SymmetricStart {
    pub config: ColoredPointConfig,
    /// Index of the center inside each color class (always 0).
    pub centers: Vec<PointId>,
    /// One representative per symmetry class of arrangements through the centers.
    pub canonical: Vec<Bisector>,
    pub n: BigUint,
    /// Whether the oracle confirmed that these are all the bisecting arrangements.
    pub oracle_verified: bool,
}

/// Parameters of the symmetric start construction.
#[derive(Debug, Clone)]
pub struct StartParams {
    /// Odd size of each color class.
    pub cluster_sizes: Vec<usize>,
    /// Centers are drawn from the integer box `[-separation, separation]^d`.
    pub separation: i64,
    pub seed: u64,
    /// Run the brute-force count when its cost stays below this many constructions.
    pub oracle_budget: f64,
}

impl StartParams {
    pub fn uniform(specs: &[FamilySpec], cluster_size: usize, seed: u64) -> Self {
        let m: usize = specs.iter().map(FamilySpec::m).sum();
        StartParams { cluster_sizes: vec![cluster_size; m], separation: 1000, seed, oracle_budget: 2.0e6 }
    }
}

const START_RETRIES: u64 = 8;

pub fn build_symmetric_start(specs: &[FamilySpec], params: &StartParams) -> Result<SymmetricStart> {
    let m: usize = specs.iter().map(FamilySpec::m).sum();
    if params.cluster_sizes.len() != m {
        return Err(Error::InvalidInput(format!("need {m} cluster sizes, got {}", params.cluster_sizes.len())));
    }
    if let Some(s) = params.cluster_sizes.iter().find(|&&s| s % 2 == 0) {
        return Err(Error::InvalidInput(format!("cluster size {s} is even")));
    }
    let d = specs.first().map(FamilySpec::dim).ok_or_else(|| Error::InvalidInput("no families".into()))?;
    let report = compute_n(&signature(specs)?)?;
    let mut last = String::new();
    for attempt in 0..START_RETRIES {
        let seed = params.seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        match try_start(specs, params, d, m, seed, &report.n) {
            Ok(s) => return Ok(s),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::Degenerate(format!("no valid start configuration after {START_RETRIES} attempts: {last}")))
}

fn try_start(
    specs: &[FamilySpec],
    params: &StartParams,
    d: usize,
    m: usize,
    seed: u64,
    n: &BigUint,
) -> Result<SymmetricStart> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sep = params.separation;
    let centers: Vec<Point> =
        (0..m).map(|_| (0..d).map(|_| rat::int(rng.gen_range(-sep..=sep))).collect()).collect();
    check_generic(&centers, specs).map_err(|w| Error::Genericity(w.to_string()))?;
    // Arm offsets of size about 2^-10 at resolution 2^-30, pair asymmetry
    // about 2^-42. Arms are distinct up to sign so no two points coincide.
    let arm_scale = Rat::new(1.into(), (1u64 << 30).into());
    let skew_scale = Rat::new(1.into(), (1u64 << 50).into());
    let mut colors = Vec::with_capacity(m);
    for (j, c) in centers.iter().enumerate() {
        let mut class = vec![c.clone()];
        let mut used = std::collections::BTreeSet::new();
        while class.len() < params.cluster_sizes[j] {
            let raw: Vec<i64> = (0..d).map(|_| rng.gen_range(-(1i64 << 20)..=(1 << 20))).collect();
            let neg: Vec<i64> = raw.iter().map(|x| -x).collect();
            if raw.iter().all(|&x| x == 0) || used.contains(&raw) || used.contains(&neg) {
                continue;
            }
            used.insert(raw.clone());
            let e: Vec<Rat> = raw.iter().map(|&x| rat::int(x) * &arm_scale).collect();
            let skew: Vec<Rat> = (0..d).map(|_| rat::int(rng.gen_range(-256..=256)) * &skew_scale).collect();
            class.push(c.iter().zip(&e).map(|(x, y)| x + y).collect());
            class.push(c.iter().zip(e.iter().zip(&skew)).map(|(x, (y, z))| x - y + z).collect());
        }
        colors.push(class);
    }
    let config = ColoredPointConfig::new(d, colors)?;
    let center_ids: Vec<PointId> = (0..m).map(|c| PointId { color: c, index: 0 }).collect();

    let mut canonical: BTreeMap<Assignment, Arrangement> = BTreeMap::new();
    for chi in enumerate_valid_partitions(m, specs)? {
        let a = Assignment::from_partition(&chi, &center_ids).canonical(specs);
        if canonical.contains_key(&a) {
            continue;
        }
        let arr = a.realize(&config, specs)?;
        if !is_bisecting(&arr, &config) {
            return Err(Error::Degenerate(format!("arrangement {} through the centers does not bisect", a)));
        }
        canonical.insert(a, arr);
    }
    if BigUint::from(canonical.len()) != *n {
        return Err(Error::Inconsistent(format!("{} classes through the centers, expected {n}", canonical.len())));
    }
    let canonical: Vec<Bisector> =
        canonical.into_iter().map(|(assignment, arrangement)| Bisector { assignment, arrangement }).collect();
    let mut oracle_verified = false;
    if oracle_cost(&config, specs) <= params.oracle_budget {
        precheck_generic(&config, specs)?;
        let found = enumerate_bisectors(&config, specs);
        let same = found.len() == canonical.len()
            && found.iter().zip(&canonical).all(|(a, b)| a.assignment == b.assignment);
        if !same {
            return Err(Error::Degenerate(format!(
                "clusters not well separated: oracle found {} classes, expected {}",
                found.len(),
                canonical.len()
            )));
        }
        oracle_verified = true;
    }
    Ok(SymmetricStart { config, centers: center_ids, canonical, n: n.clone(), oracle_verified })
}

/// Family specs with every direction unconstrained.
pub fn unconstrained(d: usize, ks: &[usize]) -> Vec<FamilySpec> {
    ks.iter().map(|&k| FamilySpec::new(Subspace::whole(d), k).expect("k >= 1")).collect()
}
