//! Fixed-direction instances without a bisecting arrangement: a construction
//! from short parallel segment pairs, and an exact certifier that searches the
//! whole offset space.
//!
//! With every direction subspace a line, an arrangement is just a vector of
//! offsets. Along one segment the mass of the A region is piecewise linear in
//! the offsets, with breakpoints where a hyperplane crosses an endpoint or
//! another hyperplane's crossing. The certifier walks the closed cells of this
//! subdivision segment by segment and decides each linear system exactly.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{measure_of_regions, EstimateOptions, MeasureSpec};
use crate::arrangement::FamilySpec;
use crate::error::{Error, Result};
use crate::geom::{OrientedHyperplane, Point};
use crate::linalg::rank;
use crate::rat::{self, int, Rat};

/// Largest number of hyperplanes the certifier accepts.
pub const MAX_CERTIFY_HYPERPLANES: usize = 6;

/// Segments of a fixed-direction instance, grouped into parallel pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub measures: Vec<MeasureSpec>,
    /// Indices into `measures`. The last pair holds one segment when the count is odd.
    pub pairs: Vec<Vec<usize>>,
    /// Common direction of all segments.
    #[serde(with = "rat::vec")]
    pub direction: Vec<Rat>,
    /// Direction in which each segment was copied.
    #[serde(with = "rat::vec")]
    pub translation: Vec<Rat>,
}

impl Counterexample {
    /// Shrinks every segment about its own midpoint.
    pub fn scaled(&self, factor: &Rat) -> Counterexample {
        let measures = self
            .measures
            .iter()
            .map(|m| match m {
                MeasureSpec::Segment { a, b } => {
                    let mid: Point = a.iter().zip(b).map(|(x, y)| (x + y) / int(2)).collect();
                    let at = |p: &Point| mid.iter().zip(p).map(|(c, x)| c + (x - c) * factor).collect();
                    MeasureSpec::Segment { a: at(a), b: at(b) }
                }
                other => other.clone(),
            })
            .collect();
        Counterexample { measures, ..self.clone() }
    }
}

fn parallel(u: &[Rat], v: &[Rat]) -> bool {
    rank(&[u.to_vec(), v.to_vec()]) < 2
}

/// Direction vector of every family, rejecting anything but lines.
pub fn fixed_directions(specs: &[FamilySpec]) -> Result<Vec<Vec<Rat>>> {
    let d = specs.first().map_or(0, FamilySpec::dim);
    let mut dirs: Vec<Vec<Rat>> = Vec::new();
    for s in specs {
        if s.dim() != d {
            return Err(Error::Dimension { expected: d, got: s.dim() });
        }
        if s.l() != 1 {
            return Err(Error::InvalidInput(format!("fixed directions need one-dimensional direction spaces, got {}", s.l())));
        }
        let dir = s.subspace.basis()[0].clone();
        if dirs.iter().any(|e| parallel(e, &dir)) {
            return Err(Error::InvalidInput("direction lines must be pairwise distinct".into()));
        }
        dirs.push(dir);
    }
    Ok(dirs)
}

/// Normal of every hyperplane, family by family.
fn normals(specs: &[FamilySpec], dirs: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    specs.iter().zip(dirs).flat_map(|(s, d)| std::iter::repeat(d.clone()).take(s.k)).collect()
}

fn is_transverse(dirs: &[Vec<Rat>], v: &[Rat]) -> bool {
    dirs.iter().all(|l| !rat::dot(v, l).is_zero() && !parallel(v, l))
}

/// Segment direction `u` and copy direction `w`, orthogonal to each other and
/// transverse to every direction line.
///
/// A short pair resists one hyperplane orthogonal to `l1` together with one
/// orthogonal to `l2` only when `<w,l>/<u,l>` has opposite signs on them. This
/// holds for the first two odd families when `u` lies in their acute cone and
/// `w` is the part of `l1` orthogonal to `u`.
fn pair_directions(specs: &[FamilySpec], dirs: &[Vec<Rat>], d: usize) -> (Vec<Rat>, Vec<Rat>) {
    let odd: Vec<usize> = (0..specs.len()).filter(|&i| specs[i].k % 2 == 1).collect();
    let l1 = &dirs[odd[0]];
    let mut l2 = dirs[odd[1]].clone();
    if rat::dot(l1, &l2).is_negative() {
        l2 = l2.iter().map(|x| -x).collect();
    }
    let base: Vec<Rat> = l1.iter().zip(&l2).map(|(a, b)| a + b).collect();
    let ratio = |w: &[Rat], u: &[Rat], l: &[Rat]| rat::dot(w, l) / rat::dot(u, l);
    (0..)
        .map(|t: i64| {
            if t == 0 {
                base.clone()
            } else {
                base.iter().zip(moment(d, t + 1)).map(|(b, m)| b * int(1000) + m).collect()
            }
        })
        .find_map(|u| {
            let uu = rat::dot(&u, &u);
            let lu = rat::dot(l1, &u);
            let w: Vec<Rat> = l1.iter().zip(&u).map(|(a, b)| a * &uu - b * &lu).collect();
            let opposed = (ratio(&w, &u, l1) * ratio(&w, &u, &l2)).is_negative();
            (is_transverse(dirs, &u) && is_transverse(dirs, &w) && opposed).then_some((u, w))
        })
        .expect("finitely many directions exclude finitely many perturbations")
}

fn moment(d: usize, t: i64) -> Vec<Rat> {
    (0..d).map(|i| int(t.pow(i as u32))).collect()
}

fn affinely_independent(points: &[&Point]) -> bool {
    let rows: Vec<Vec<Rat>> = points[1..].iter().map(|p| rat::sub(p, points[0])).collect();
    rank(&rows) == rows.len()
}

/// Midpoints in general position whose projections on each direction are distinct.
fn pair_centers(dirs: &[Vec<Rat>], d: usize, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = 100 * count as i64 + 100;
    let mut centers: Vec<Point> = Vec::new();
    while centers.len() < count {
        let p: Point = (0..d).map(|_| int(rng.gen_range(-range..=range))).collect();
        let distinct = dirs.iter().all(|l| centers.iter().all(|c| rat::dot(l, c) != rat::dot(l, &p)));
        let general = crate::combi::combinations(centers.len(), d.min(centers.len())).iter().all(|idx| {
            let mut pts: Vec<&Point> = idx.iter().map(|&i| &centers[i]).collect();
            pts.push(&p);
            affinely_independent(&pts)
        });
        if distinct && general {
            centers.push(p);
        }
    }
    centers
}

/// Short parallel segment pairs, far apart, carrying uniform measures.
///
/// Every family must be a direction line, the lines pairwise distinct, and at
/// least two hyperplane counts odd.
pub fn counterexample_config(specs: &[FamilySpec], seed: u64) -> Result<Counterexample> {
    let dirs = fixed_directions(specs)?;
    let d = specs.first().map_or(0, FamilySpec::dim);
    if d < 2 {
        return Err(Error::InvalidInput("the construction needs dimension at least 2".into()));
    }
    if specs.iter().filter(|s| s.k % 2 == 1).count() < 2 {
        return Err(Error::InvalidInput("at least two hyperplane counts must be odd".into()));
    }
    let m: usize = specs.iter().map(|s| s.k).sum();
    let (u, w) = pair_directions(specs, &dirs, d);
    // The copy moves by a small fraction of the segment's own extent along
    // every direction, so both copies see nearly the same crossings.
    let tau = dirs.iter().map(|l| rat::dot(&u, l).abs() / (rat::dot(&w, l).abs() * int(8))).min().expect("at least one direction");
    let w: Vec<Rat> = w.iter().map(|x| x * &tau).collect();
    let count = m.div_ceil(2);
    let centers = pair_centers(&dirs, d, count, seed);
    let mut gap: Option<Rat> = None;
    for l in &dirs {
        for (i, p) in centers.iter().enumerate() {
            for q in &centers[i + 1..] {
                let g = (rat::dot(l, p) - rat::dot(l, q)).abs();
                gap = Some(gap.map_or(g.clone(), |h: Rat| h.min(g)));
            }
        }
    }
    let reach = dirs.iter().map(|l| rat::dot(&u, l).abs() + rat::dot(&w, l).abs()).max().expect("at least one direction");
    let eps = gap.unwrap_or_else(Rat::one) / (reach * int(4));
    let mut measures = Vec::new();
    let mut pairs = Vec::new();
    for (j, c) in centers.iter().enumerate() {
        let mut pair = Vec::new();
        let copies = if j + 1 == count && m % 2 == 1 { 1 } else { 2 };
        for copy in 0..copies {
            let mid: Point = c.iter().zip(&w).map(|(x, y)| x + y * &eps * int(copy)).collect();
            let a = mid.iter().zip(&u).map(|(x, y)| x - y * &eps).collect();
            let b = mid.iter().zip(&u).map(|(x, y)| x + y * &eps).collect();
            pair.push(measures.len());
            measures.push(MeasureSpec::Segment { a, b });
        }
        pairs.push(pair);
    }
    Ok(Counterexample { measures, pairs, direction: u, translation: w })
}

/// Whether no hyperplane of an allowed direction meets two distinct pairs,
/// decided by disjointness of projection intervals.
pub fn is_well_separated(specs: &[FamilySpec], ce: &Counterexample) -> Result<bool> {
    let dirs = fixed_directions(specs)?;
    for l in &dirs {
        let mut intervals: Vec<(Rat, Rat)> = Vec::new();
        for pair in &ce.pairs {
            let mut values = Vec::new();
            for &i in pair {
                let MeasureSpec::Segment { a, b } = &ce.measures[i] else {
                    return Err(Error::InvalidInput("pairs must index segments".into()));
                };
                values.push(rat::dot(l, a));
                values.push(rat::dot(l, b));
            }
            let lo = values.iter().min().cloned().unwrap_or_default();
            let hi = values.iter().max().cloned().unwrap_or_default();
            intervals.push((lo, hi));
        }
        intervals.sort();
        if intervals.windows(2).any(|w| w[0].1 >= w[1].0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `<coeffs, x> + constant`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Lin {
    coeffs: Vec<Rat>,
    constant: Rat,
}

impl Lin {
    fn constant(n: usize, c: Rat) -> Self {
        Lin { coeffs: vec![Rat::zero(); n], constant: c }
    }

    fn eval(&self, x: &[Rat]) -> Rat {
        rat::dot(&self.coeffs, x) + &self.constant
    }

    fn add(&self, other: &Lin, scale: &Rat) -> Lin {
        Lin {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b * scale).collect(),
            constant: &self.constant + &other.constant * scale,
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Positive multiple with the first nonzero coefficient of absolute value one.
    fn normalized(self) -> Lin {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) => {
                let s = c.abs().recip();
                Lin { coeffs: self.coeffs.iter().map(|x| x * &s).collect(), constant: &self.constant * &s }
            }
            None => self,
        }
    }

    /// Substitutes `x_j = e` where `e` does not involve `x_j`.
    fn substitute(&self, j: usize, e: &Lin) -> Lin {
        let c = self.coeffs[j].clone();
        let mut out = self.add(e, &c);
        out.coeffs[j] = Rat::zero();
        out
    }
}

/// A point satisfying `eqs = 0` and `ineqs >= 0`, or `None` when there is none.
/// Equalities are eliminated by substitution, inequalities by Fourier-Motzkin.
fn solve_system(n: usize, eqs: &[Lin], ineqs: &[Lin]) -> Option<Vec<Rat>> {
    if let Some((pos, j)) = eqs.iter().enumerate().find_map(|(i, e)| e.coeffs.iter().position(|c| !c.is_zero()).map(|j| (i, j))) {
        let e = &eqs[pos];
        let scale = -e.coeffs[j].recip();
        let mut value = Lin { coeffs: e.coeffs.iter().map(|c| c * &scale).collect(), constant: &e.constant * &scale };
        value.coeffs[j] = Rat::zero();
        let rest: Vec<Lin> = eqs.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, x)| x.substitute(j, &value)).collect();
        let sub: Vec<Lin> = ineqs.iter().map(|x| x.substitute(j, &value)).collect();
        let mut x = solve_system(n, &rest, &sub)?;
        x[j] = value.eval(&x);
        return Some(x);
    }
    if eqs.iter().any(|e| !e.constant.is_zero()) {
        return None;
    }
    let mut set = BTreeSet::new();
    for i in ineqs {
        if i.is_constant() {
            if i.constant.is_negative() {
                return None;
            }
        } else {
            set.insert(i.clone().normalized());
        }
    }
    let ineqs: Vec<Lin> = set.into_iter().collect();
    let Some(j) = (0..n).find(|&j| ineqs.iter().any(|i| !i.coeffs[j].is_zero())) else {
        return Some(vec![Rat::zero(); n]);
    };
    let (lower, rest): (Vec<&Lin>, Vec<&Lin>) = ineqs.iter().partition(|i| i.coeffs[j].is_positive());
    let (upper, free): (Vec<&Lin>, Vec<&Lin>) = rest.into_iter().partition(|i| i.coeffs[j].is_negative());
    let mut next: Vec<Lin> = free.into_iter().cloned().collect();
    for p in &lower {
        for q in &upper {
            let mut combined = p.add(q, &(&p.coeffs[j] / -&q.coeffs[j]));
            combined.coeffs[j] = Rat::zero();
            next.push(combined);
        }
    }
    let mut x = solve_system(n, &[], &next)?;
    // Each bound reads `x_j >= -rest / c` or `x_j <= rest / -c`.
    let bound = |i: &Lin, x: &[Rat]| {
        let mut r = i.clone();
        r.coeffs[j] = Rat::zero();
        -r.eval(x) / &i.coeffs[j]
    };
    x[j] = match (lower.iter().map(|i| bound(i, &x)).max(), upper.iter().map(|i| bound(i, &x)).min()) {
        (Some(lo), _) => lo,
        (None, Some(hi)) => hi,
        (None, None) => Rat::zero(),
    };
    Some(x)
}

/// Where the hyperplanes cross one segment's line: before its start, inside in
/// increasing order, or after its end.
#[derive(Debug, Clone)]
struct SegmentCell {
    before: Vec<usize>,
    inside: Vec<usize>,
    after: Vec<usize>,
}

/// A closed cell of offset space. Hyperplane `h` has its offset in interval
/// `intervals[h]` of its breakpoints, and `orders`, when not empty, lists per
/// measure the hyperplanes crossing it in increasing order. No offsets in the
/// cell bisect all measures in `violated`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCell {
    pub intervals: Vec<usize>,
    pub orders: Vec<Vec<usize>>,
    pub violated: Vec<usize>,
}

/// Exhaustive proof that no offset vector bisects every measure: every offset
/// vector lies in some cell, and there one of its violated measures is not
/// bisected. Interval `i` of hyperplane `h` is the closed range between
/// `breakpoints[h][i-1]` and `breakpoints[h][i]`, unbounded past either end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(with = "rat::mat")]
    pub breakpoints: Vec<Vec<Rat>>,
    pub cells: Vec<CertificateCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Certification {
    NoSolution(Certificate),
    Found {
        #[serde(with = "rat::vec")]
        offsets: Vec<Rat>,
        hyperplanes: Vec<OrientedHyperplane>,
    },
}

/// Offset-space formulation of a fixed-direction instance on segments.
#[derive(Debug, Clone)]
pub struct OffsetProblem {
    normals: Vec<Vec<Rat>>,
    /// Per hyperplane, the sorted offsets at which it passes a segment endpoint.
    breakpoints: Vec<Vec<Rat>>,
    /// Per measure and hyperplane, the crossing parameter as a function of the offsets.
    crossings: Vec<Vec<Lin>>,
    /// Per measure and hyperplane, whether the positive side lies at larger parameters.
    rising: Vec<Vec<bool>>,
    measures: Vec<MeasureSpec>,
}

impl OffsetProblem {
    pub fn new(specs: &[FamilySpec], measures: &[MeasureSpec]) -> Result<Self> {
        let dirs = fixed_directions(specs)?;
        let normals = normals(specs, &dirs);
        let n = normals.len();
        if n > MAX_CERTIFY_HYPERPLANES {
            return Err(Error::InvalidInput(format!("certifier handles at most {MAX_CERTIFY_HYPERPLANES} hyperplanes, got {n}")));
        }
        if measures.len() != n {
            return Err(Error::InvalidInput(format!("{} measures for {n} hyperplanes", measures.len())));
        }
        let mut crossings = Vec::new();
        let mut rising = Vec::new();
        let mut breakpoints = vec![BTreeSet::new(); n];
        for m in measures {
            m.validate()?;
            let MeasureSpec::Segment { a, b } = m else {
                return Err(Error::InvalidInput("the certifier handles segment measures only".into()));
            };
            if a.len() != dirs[0].len() {
                return Err(Error::Dimension { expected: dirs[0].len(), got: a.len() });
            }
            let along = rat::sub(b, a);
            let mut row = Vec::new();
            let mut up = Vec::new();
            for (h, l) in normals.iter().enumerate() {
                let alpha = rat::dot(l, a);
                let beta = rat::dot(l, &along);
                if beta.is_zero() {
                    return Err(Error::InvalidInput("a segment is parallel to an allowed hyperplane".into()));
                }
                breakpoints[h].insert(alpha.clone());
                breakpoints[h].insert(&alpha + &beta);
                let mut lin = Lin::constant(n, -alpha / &beta);
                lin.coeffs[h] = beta.recip();
                row.push(lin);
                up.push(beta.is_positive());
            }
            crossings.push(row);
            rising.push(up);
        }
        let breakpoints = breakpoints.into_iter().map(|b| b.into_iter().collect()).collect();
        Ok(OffsetProblem { normals, breakpoints, crossings, rising, measures: measures.to_vec() })
    }

    pub fn hyperplanes(&self, offsets: &[Rat]) -> Vec<OrientedHyperplane> {
        self.normals.iter().zip(offsets).map(|(l, c)| OrientedHyperplane::new(l.clone(), c.clone())).collect()
    }

    fn bounds(&self, h: usize, i: usize) -> (Option<&Rat>, Option<&Rat>) {
        let b = &self.breakpoints[h];
        (i.checked_sub(1).map(|j| &b[j]), b.get(i))
    }

    /// An offset strictly inside interval `i` of hyperplane `h`.
    fn interior(&self, h: usize, i: usize) -> Rat {
        match self.bounds(h, i) {
            (Some(lo), Some(hi)) => (lo + hi) / int(2),
            (Some(lo), None) => lo + Rat::one(),
            (None, Some(hi)) => hi - Rat::one(),
            (None, None) => Rat::zero(),
        }
    }

    /// Hyperplanes before, inside and after each segment for an interval choice.
    fn placement(&self, intervals: &[usize]) -> Vec<SegmentCell> {
        let n = self.normals.len();
        let mut probe = vec![Rat::zero(); n];
        for (h, &i) in intervals.iter().enumerate() {
            probe[h] = self.interior(h, i);
        }
        self.crossings
            .iter()
            .map(|row| {
                let mut cell = SegmentCell { before: Vec::new(), inside: Vec::new(), after: Vec::new() };
                for (h, sigma) in row.iter().enumerate() {
                    let t = sigma.eval(&probe);
                    if t.is_negative() {
                        cell.before.push(h);
                    } else if t > Rat::one() {
                        cell.after.push(h);
                    } else {
                        cell.inside.push(h);
                    }
                }
                cell
            })
            .collect()
    }

    fn interval_system(&self, intervals: &[usize]) -> Vec<Lin> {
        let n = self.normals.len();
        let mut ineqs = Vec::new();
        for (h, &i) in intervals.iter().enumerate() {
            let (lo, hi) = self.bounds(h, i);
            if let Some(lo) = lo {
                let mut l = Lin::constant(n, -lo);
                l.coeffs[h] = Rat::one();
                ineqs.push(l);
            }
            if let Some(hi) = hi {
                let mut l = Lin::constant(n, hi.clone());
                l.coeffs[h] = -Rat::one();
                ineqs.push(l);
            }
        }
        ineqs
    }

    /// Ordering inequalities of a segment cell, and its A-mass minus one half.
    fn cell_system(&self, seg: usize, cell: &SegmentCell) -> (Vec<Lin>, Lin) {
        let n = self.normals.len();
        let sigma = &self.crossings[seg];
        let neg_one = -Rat::one();
        let mut bounds = vec![Lin::constant(n, Rat::zero())];
        bounds.extend(cell.inside.iter().map(|&h| sigma[h].clone()));
        bounds.push(Lin::constant(n, Rat::one()));
        let ineqs = bounds.windows(2).map(|w| w[1].add(&w[0], &neg_one)).collect();
        // Positive sides just after the start: crossings behind it count when
        // rising, crossings ahead of it when falling.
        let up = &self.rising[seg];
        let start_odd = cell.before.iter().filter(|&&h| up[h]).count() % 2 == 1;
        let ahead = cell.inside.iter().chain(&cell.after).filter(|&&h| !up[h]).count() % 2 == 1;
        let mut parity = start_odd != ahead;
        let mut mass = Lin::constant(n, rat::frac(-1, 2));
        for w in bounds.windows(2) {
            if !parity {
                mass = mass.add(&w[1], &Rat::one()).add(&w[0], &neg_one);
            }
            parity = !parity;
        }
        (ineqs, mass)
    }

    /// Walks every cell. Returns a bisecting offset vector, verified exactly,
    /// or a certificate that none exists.
    pub fn certify(&self) -> Result<Certification> {
        let n = self.normals.len();
        let counts: Vec<usize> = self.breakpoints.iter().map(|b| b.len() + 1).collect();
        let mut intervals = vec![0; n];
        let mut cells = Vec::new();
        loop {
            if let Some(offsets) = self.check_box(&intervals, &mut cells) {
                let hyperplanes = self.hyperplanes(&offsets);
                for m in &self.measures {
                    let r = measure_of_regions(m, &hyperplanes, &EstimateOptions::default())?;
                    if r.mu_a != r.mu_b {
                        return Err(Error::Invariant("certifier solution does not bisect a segment".into()));
                    }
                }
                return Ok(Certification::Found { offsets, hyperplanes });
            }
            if !advance(&mut intervals, &counts) {
                break;
            }
        }
        Ok(Certification::NoSolution(Certificate { breakpoints: self.breakpoints.clone(), cells }))
    }

    /// Decides one box of offset intervals, recording a cell per failed ordering.
    fn check_box(&self, intervals: &[usize], cells: &mut Vec<CertificateCell>) -> Option<Vec<Rat>> {
        let n = self.normals.len();
        let placement = self.placement(intervals);
        if let Some(seg) = placement.iter().position(|c| c.inside.is_empty()) {
            cells.push(CertificateCell { intervals: intervals.to_vec(), orders: Vec::new(), violated: vec![seg] });
            return None;
        }
        let choices: Vec<Vec<Vec<usize>>> = placement.iter().map(|c| permutations(&c.inside)).collect();
        let counts: Vec<usize> = choices.iter().map(Vec::len).collect();
        let mut pick = vec![0; placement.len()];
        loop {
            let mut ineqs = self.interval_system(intervals);
            let mut eqs = Vec::new();
            let mut orders = Vec::new();
            for (seg, cell) in placement.iter().enumerate() {
                let order = choices[seg][pick[seg]].clone();
                let cell = SegmentCell { inside: order.clone(), ..cell.clone() };
                let (cons, mass) = self.cell_system(seg, &cell);
                ineqs.extend(cons);
                eqs.push(mass);
                orders.push(order);
            }
            if let Some(x) = solve_system(n, &eqs, &ineqs) {
                return Some(x);
            }
            let j = (0..eqs.len()).find(|&j| solve_system(n, &eqs[..=j], &ineqs).is_none()).expect("the full system is infeasible");
            cells.push(CertificateCell { intervals: intervals.to_vec(), orders, violated: (0..=j).collect() });
            if !advance(&mut pick, &counts) {
                return None;
            }
        }
    }

    /// Whether `offsets` lies in the closed cell.
    pub fn contains(&self, cell: &CertificateCell, offsets: &[Rat]) -> bool {
        let in_box = cell.intervals.iter().enumerate().all(|(h, &i)| {
            let (lo, hi) = self.bounds(h, i);
            lo.is_none_or(|lo| &offsets[h] >= lo) && hi.is_none_or(|hi| &offsets[h] <= hi)
        });
        in_box
            && cell.orders.iter().enumerate().all(|(seg, order)| {
                let t: Vec<Rat> = order.iter().map(|&h| self.crossings[seg][h].eval(offsets)).collect();
                t.windows(2).all(|w| w[0] <= w[1])
            })
    }

    /// A certificate cell containing `offsets`.
    pub fn locate<'a>(&self, cert: &'a Certificate, offsets: &[Rat]) -> Option<&'a CertificateCell> {
        cert.cells.iter().find(|c| self.contains(c, offsets))
    }
}

/// Odometer step over mixed radices; false after the last combination.
fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radices) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Decides whether some offsets bisect every segment, for direction-line families.
pub fn certify_no_bisection_fixed_directions(specs: &[FamilySpec], measures: &[MeasureSpec]) -> Result<Certification> {
    OffsetProblem::new(specs, measures)?.certify()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;
    use crate::rat::frac;
    use proptest::prelude::*;

    fn line_spec(dir: Vec<i64>, k: usize) -> FamilySpec {
        let d = dir.len();
        FamilySpec::new(Subspace::from_basis(d, vec![dir.into_iter().map(int).collect()]).unwrap(), k).unwrap()
    }

    fn axes() -> Vec<FamilySpec> {
        vec![line_spec(vec![1, 0], 1), line_spec(vec![0, 1], 1)]
    }

    #[test]
    fn planar_pair_has_no_bisection() {
        let ce = counterexample_config(&axes(), 0).unwrap();
        assert_eq!(ce.measures.len(), 2);
        assert_eq!(ce.pairs, vec![vec![0, 1]]);
        assert!(is_well_separated(&axes(), &ce).unwrap());
        let cert = certify_no_bisection_fixed_directions(&axes(), &ce.measures).unwrap();
        let Certification::NoSolution(c) = cert else { panic!("expected a certificate") };
        assert!(c.cells.iter().any(|e| e.violated.len() == 2));
    }

    #[test]
    fn odd_total_drops_one_segment() {
        let specs = vec![line_spec(vec![1, 0], 1), line_spec(vec![0, 1], 1), line_spec(vec![1, 1], 3)];
        let ce = counterexample_config(&specs, 3).unwrap();
        assert_eq!(ce.measures.len(), 5);
        assert_eq!(ce.pairs.last().unwrap().len(), 1);
        assert!(is_well_separated(&specs, &ce).unwrap());
        assert!(is_well_separated(&specs, &ce.scaled(&frac(1, 10))).unwrap());
    }

    #[test]
    fn more_hyperplanes_per_direction_have_no_bisection() {
        let specs = vec![line_spec(vec![1, 0], 3), line_spec(vec![0, 1], 1)];
        let ce = counterexample_config(&specs, 2).unwrap();
        assert_eq!(ce.pairs.len(), 2);
        assert!(is_well_separated(&specs, &ce).unwrap());
        assert!(matches!(certify_no_bisection_fixed_directions(&specs, &ce.measures).unwrap(), Certification::NoSolution(_)));
    }

    #[test]
    fn skew_directions_have_no_bisection() {
        let specs = vec![line_spec(vec![2, 1, 0], 1), line_spec(vec![-1, 3, 1], 1)];
        let ce = counterexample_config(&specs, 4).unwrap();
        assert!(matches!(certify_no_bisection_fixed_directions(&specs, &ce.measures).unwrap(), Certification::NoSolution(_)));
    }

    // With a third direction the pair resists only two of the three direction
    // pairs, and the certifier finds an arrangement.
    #[test]
    fn third_direction_defeats_the_pair_construction() {
        let specs = vec![line_spec(vec![1, 0], 1), line_spec(vec![0, 1], 1), line_spec(vec![1, 1], 1)];
        let ce = counterexample_config(&specs, 1).unwrap();
        assert!(matches!(certify_no_bisection_fixed_directions(&specs, &ce.measures).unwrap(), Certification::Found { .. }));
    }

    #[test]
    fn single_segment_is_cut_at_its_midpoint() {
        let specs = vec![line_spec(vec![1, 0], 1)];
        let seg = MeasureSpec::Segment { a: vec![int(1), int(0)], b: vec![int(4), int(3)] };
        let Certification::Found { offsets, .. } = certify_no_bisection_fixed_directions(&specs, &[seg]).unwrap() else {
            panic!("a median exists")
        };
        assert_eq!(offsets, vec![frac(5, 2)]);
    }

    #[test]
    fn odd_count_instance_is_solvable() {
        let specs = vec![line_spec(vec![1, 0], 1), line_spec(vec![0, 1], 2)];
        let mut measures = counterexample_config(&axes(), 0).unwrap().measures;
        measures.push(MeasureSpec::Segment { a: vec![int(5000), int(5000)], b: vec![int(5001), int(5003)] });
        assert!(matches!(certify_no_bisection_fixed_directions(&specs, &measures).unwrap(), Certification::Found { .. }));
    }

    #[test]
    fn rejects_other_direction_spaces() {
        let specs = vec![FamilySpec::new(Subspace::whole(2), 1).unwrap(), line_spec(vec![0, 1], 1)];
        assert!(counterexample_config(&specs, 0).is_err());
        assert!(counterexample_config(&[line_spec(vec![1, 0], 2), line_spec(vec![0, 1], 1)], 0).is_err());
    }

    #[test]
    fn fourier_motzkin_finds_feasible_points() {
        let lin = |c: Vec<i64>, k: i64| Lin { coeffs: c.into_iter().map(int).collect(), constant: int(k) };
        // x + y = 3, x >= 1, y >= 1, x - y >= 0
        let eqs = vec![lin(vec![1, 1], -3)];
        let ineqs = vec![lin(vec![1, 0], -1), lin(vec![0, 1], -1), lin(vec![1, -1], 0)];
        let x = solve_system(2, &eqs, &ineqs).unwrap();
        assert!(eqs.iter().all(|e| e.eval(&x).is_zero()));
        assert!(ineqs.iter().all(|i| !i.eval(&x).is_negative()));
        assert!(solve_system(2, &eqs, &[lin(vec![1, 0], -4), lin(vec![0, 1], 0)]).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn certificate_covers_every_offset(a in -4000i64..4000, b in -4000i64..4000, den in 1i64..64) {
            let ce = counterexample_config(&axes(), 0).unwrap();
            let problem = OffsetProblem::new(&axes(), &ce.measures).unwrap();
            let Certification::NoSolution(cert) = problem.certify().unwrap() else { panic!("expected a certificate") };
            // Offsets near the pair, where crossings actually happen.
            let MeasureSpec::Segment { a: p, .. } = &ce.measures[0] else { unreachable!() };
            let offsets = vec![&p[0] + frac(a, 1000 * den), &p[1] + frac(b, 1000 * den)];
            let entry = problem.locate(&cert, &offsets).expect("certificate is exhaustive");
            let hyperplanes = problem.hyperplanes(&offsets);
            let unbisected = entry.violated.iter().any(|&j| {
                let r = measure_of_regions(&ce.measures[j], &hyperplanes, &EstimateOptions::default()).unwrap();
                r.mu_a != r.mu_b
            });
            prop_assert!(unbisected);
        }
    }
}
