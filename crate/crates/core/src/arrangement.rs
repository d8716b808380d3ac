//! Valid partitions, the arrangements they determine, and the inverse map.
//!
//! A family `(L, k)` with `l = dim L` meets `m = l + k - 1` points split into
//! `k` classes. The within-class differences together with a basis of `L^⊥`
//! are `d - 1` vectors; on generic input their common orthogonal line is the
//! family's normal, and each class fixes one offset.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combi::{blocks_of, combinations, set_partitions};
use crate::config::{ColoredPointConfig, PointId};
use crate::error::{Error, Result};
use crate::geom::{chessboard_color, Color, OrientedHyperplane, Point};
use crate::linalg::{canonical_direction, nullspace, rank, to_rat_vec, Subspace};
use crate::rat::{self, Rat};

/// One direction constraint `L` together with its hyperplane count `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub subspace: Subspace,
    pub k: usize,
    complement: Vec<Vec<Rat>>,
}

impl FamilySpec {
    pub fn new(subspace: Subspace, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if subspace.dim() == 0 {
            return Err(Error::InvalidInput("direction subspace must have positive dimension".into()));
        }
        let complement = subspace.orthogonal_complement().basis().to_vec();
        Ok(FamilySpec { subspace, k, complement })
    }

    pub fn l(&self) -> usize {
        self.subspace.dim()
    }

    pub fn m(&self) -> usize {
        self.l() + self.k - 1
    }

    pub fn dim(&self) -> usize {
        self.subspace.ambient()
    }

    /// Basis of `L^⊥`.
    pub fn complement_basis(&self) -> &[Vec<Rat>] {
        &self.complement
    }

    pub fn signature_entry(&self) -> crate::parity::SignatureEntry {
        crate::parity::SignatureEntry { subspace: self.subspace.token(), l: self.l(), k: self.k }
    }
}

pub fn signature(specs: &[FamilySpec]) -> Result<crate::parity::InstanceSignature> {
    let d = specs.first().map_or(0, FamilySpec::dim);
    crate::parity::InstanceSignature::new(d, specs.iter().map(FamilySpec::signature_entry).collect())
}

/// Ordered split of `[M]` into `n` groups, each refined into unordered classes.
/// Classes are stored sorted, and ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValidPartition {
    pub groups: Vec<Vec<Vec<usize>>>,
}

impl ValidPartition {
    pub fn new(mut groups: Vec<Vec<Vec<usize>>>) -> Self {
        for g in &mut groups {
            for c in g.iter_mut() {
                c.sort_unstable();
            }
            g.sort_by_key(|c| c.first().copied().unwrap_or(usize::MAX));
        }
        ValidPartition { groups }
    }

    pub fn items(&self) -> usize {
        self.groups.iter().flatten().map(Vec::len).sum()
    }

    /// `(family, class)` holding `item`.
    pub fn locate(&self, item: usize) -> Option<(usize, usize)> {
        for (f, g) in self.groups.iter().enumerate() {
            for (c, class) in g.iter().enumerate() {
                if class.contains(&item) {
                    return Some((f, c));
                }
            }
        }
        None
    }

    pub fn conforms_to(&self, specs: &[FamilySpec]) -> bool {
        self.groups.len() == specs.len()
            && self.groups.iter().zip(specs).all(|(g, s)| {
                g.len() == s.k && g.iter().all(|c| !c.is_empty()) && g.iter().map(Vec::len).sum::<usize>() == s.m()
            })
    }

    /// Bar notation with 1-based items, e.g. `14|3|7 || 25|6`. Items are
    /// comma separated once any label needs two digits.
    pub fn bar_notation(&self) -> String {
        let wide = self.groups.iter().flatten().flatten().any(|&i| i + 1 >= 10);
        let sep = if wide { "," } else { "" };
        self.groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|c| c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(sep))
                    .collect::<Vec<_>>()
                    .join("|")
            })
            .collect::<Vec<_>>()
            .join(" || ")
    }

    pub fn parse_bar(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad partition notation {s:?}"));
        let groups = s
            .split("||")
            .map(|g| {
                g.split('|')
                    .map(|c| {
                        let c = c.trim();
                        let parts: Vec<&str> =
                            if c.contains(',') { c.split(',').collect() } else { c.split("").filter(|x| !x.is_empty()).collect() };
                        parts
                            .iter()
                            .map(|x| x.trim().parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1).ok_or_else(bad))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ValidPartition::new(groups))
    }
}

impl fmt::Display for ValidPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bar_notation())
    }
}

/// Every valid partition of `[total]` for the given families, each exactly once.
pub fn enumerate_valid_partitions(total: usize, specs: &[FamilySpec]) -> Result<Vec<ValidPartition>> {
    let need: usize = specs.iter().map(FamilySpec::m).sum();
    if need != total {
        return Err(Error::InvalidInput(format!("families need {need} items, got {total}")));
    }
    let mut out = Vec::new();
    fn rec(
        specs: &[FamilySpec],
        i: usize,
        remaining: &[usize],
        acc: &mut Vec<Vec<Vec<usize>>>,
        out: &mut Vec<ValidPartition>,
    ) {
        if i == specs.len() {
            out.push(ValidPartition::new(acc.clone()));
            return;
        }
        let m = specs[i].m();
        for pick in combinations(remaining.len(), m) {
            let chosen: Vec<usize> = pick.iter().map(|&p| remaining[p]).collect();
            let rest: Vec<usize> = remaining.iter().copied().filter(|x| !chosen.contains(x)).collect();
            for labels in set_partitions(m, specs[i].k) {
                acc.push(blocks_of(&chosen, &labels));
                rec(specs, i + 1, &rest, acc, out);
                acc.pop();
            }
        }
    }
    let all: Vec<usize> = (0..total).collect();
    rec(specs, 0, &all, &mut Vec::new(), &mut out);
    Ok(out)
}

/// One parallel family: primitive integer normal and strictly increasing offsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Family {
    #[serde(with = "rat::vec")]
    pub v: Vec<Rat>,
    #[serde(with = "rat::vec")]
    pub offsets: Vec<Rat>,
}

impl Family {
    pub fn hyperplanes(&self) -> impl Iterator<Item = OrientedHyperplane> + '_ {
        self.offsets.iter().map(|c| OrientedHyperplane::new(self.v.clone(), c.clone()))
    }

    fn encode(&self) -> String {
        let v: Vec<String> = self.v.iter().map(rat::format).collect();
        let c: Vec<String> = self.offsets.iter().map(rat::format).collect();
        format!("({})@[{}]", v.join(","), c.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    pub families: Vec<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
}

impl Arrangement {
    pub fn new(families: Vec<Family>) -> Self {
        Arrangement { families, partition: None }
    }

    pub fn empty() -> Self {
        Arrangement::new(Vec::new())
    }

    pub fn hyperplanes(&self) -> Vec<OrientedHyperplane> {
        self.families.iter().flat_map(|f| f.hyperplanes()).collect()
    }

    pub fn color(&self, x: &[Rat]) -> Color {
        chessboard_color(&self.hyperplanes(), x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degeneracy {
    /// Difference vectors plus the `L^⊥` basis do not pin down a single normal.
    Rank { family: usize, rank: usize, expected: usize },
    /// Two classes of one family landed on the same hyperplane.
    OffsetCollision { family: usize },
    /// A point outside a class lies on that hyperplane.
    ExtraIncidence { point: usize, family: usize },
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::Rank { family, rank, expected } => {
                write!(f, "family {family}: rank {rank}, expected {expected}")
            }
            Degeneracy::OffsetCollision { family } => write!(f, "family {family}: coincident hyperplanes"),
            Degeneracy::ExtraIncidence { point, family } => {
                write!(f, "point {point} lies on a hyperplane of family {family} outside its class")
            }
        }
    }
}

impl From<Degeneracy> for Error {
    fn from(d: Degeneracy) -> Self {
        Error::Degenerate(d.to_string())
    }
}

/// Normal of the family through `classes`, plus one offset per class (in class order).
pub fn build_family(
    spec: &FamilySpec,
    family: usize,
    classes: &[Vec<&Point>],
) -> std::result::Result<(Vec<Rat>, Vec<Rat>), Degeneracy> {
    let d = spec.dim();
    let mut rows: Vec<Vec<Rat>> = spec.complement_basis().to_vec();
    for c in classes {
        for q in &c[1..] {
            rows.push(rat::sub(q, c[0]));
        }
    }
    let ns = nullspace(&rows, d).map_err(|_| Degeneracy::Rank { family, rank: 0, expected: d - 1 })?;
    if ns.len() != 1 {
        return Err(Degeneracy::Rank { family, rank: d - ns.len(), expected: d - 1 });
    }
    let v = to_rat_vec(&canonical_direction(&ns[0]).expect("null space basis vector is nonzero"));
    let offsets: Vec<Rat> = classes.iter().map(|c| rat::dot(&v, c[0])).collect();
    for i in 0..offsets.len() {
        for j in i + 1..offsets.len() {
            if offsets[i] == offsets[j] {
                return Err(Degeneracy::OffsetCollision { family });
            }
        }
    }
    Ok((v, offsets))
}

/// Arrangement through `points` (item `j` is `points[j]`) realizing `chi`.
pub fn construct_arrangement(
    chi: &ValidPartition,
    points: &[Point],
    specs: &[FamilySpec],
) -> std::result::Result<Arrangement, Degeneracy> {
    let mut families = Vec::with_capacity(specs.len());
    for (fi, (spec, group)) in specs.iter().zip(&chi.groups).enumerate() {
        let classes: Vec<Vec<&Point>> = group.iter().map(|c| c.iter().map(|&i| &points[i]).collect()).collect();
        let (v, mut offsets) = build_family(spec, fi, &classes)?;
        // Extra incidences: any point of the set on one of these hyperplanes outside its class.
        for (ci, c) in offsets.iter().enumerate() {
            for (pi, p) in points.iter().enumerate() {
                if group[ci].contains(&pi) {
                    continue;
                }
                if &rat::dot(&v, p) == c {
                    return Err(Degeneracy::ExtraIncidence { point: pi, family: fi });
                }
            }
        }
        offsets.sort();
        families.push(Family { v, offsets });
    }
    let mut arr = Arrangement::new(families);
    arr.partition = Some(chi.bar_notation());
    Ok(arr)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NotValid {
    /// Hyperplane `index` of `family` contains no point.
    Empty { family: usize, index: usize },
    /// A point lies on two hyperplanes.
    Double { point: usize },
}

/// Classes `{h ∩ P}` of an arrangement, when every hyperplane is hit and no point is hit twice.
pub fn induced_partition(arr: &Arrangement, points: &[Point]) -> std::result::Result<ValidPartition, NotValid> {
    let mut owner: Vec<Option<(usize, usize)>> = vec![None; points.len()];
    let mut groups = Vec::with_capacity(arr.families.len());
    for (fi, f) in arr.families.iter().enumerate() {
        let mut classes = Vec::with_capacity(f.offsets.len());
        for (hi, c) in f.offsets.iter().enumerate() {
            let mut class = Vec::new();
            for (pi, p) in points.iter().enumerate() {
                if &rat::dot(&f.v, p) == c {
                    if owner[pi].is_some() {
                        return Err(NotValid::Double { point: pi });
                    }
                    owner[pi] = Some((fi, hi));
                    class.push(pi);
                }
            }
            if class.is_empty() {
                return Err(NotValid::Empty { family: fi, index: hi });
            }
            classes.push(class);
        }
        groups.push(classes);
    }
    Ok(ValidPartition::new(groups))
}

/// The codimension-two flat structure through `classes` when one point has been
/// released from a family: a `(d-2)`-dimensional `K` spanned by `L^⊥` and the
/// within-class differences, one base point per class, and an orthonormal-free
/// basis of the 2-plane `K^⊥` inside which the family's normal may turn.
#[derive(Debug, Clone)]
pub struct Codim2Flats {
    pub k_space: Subspace,
    pub base_points: Vec<Point>,
    pub normal_plane: Vec<Vec<Rat>>,
}

pub fn construct_codim2_flats(
    classes: &[Vec<Point>],
    spec: &FamilySpec,
) -> std::result::Result<Codim2Flats, Degeneracy> {
    let d = spec.dim();
    let count: usize = classes.iter().map(Vec::len).sum();
    let expected_count = spec.l() + spec.k - 2;
    if count != expected_count || d < 2 {
        return Err(Degeneracy::Rank { family: 0, rank: count, expected: expected_count });
    }
    let mut rows: Vec<Vec<Rat>> = spec.complement_basis().to_vec();
    for c in classes {
        if c.is_empty() {
            continue;
        }
        for q in &c[1..] {
            rows.push(rat::sub(q, &c[0]));
        }
    }
    let r = rank(&rows);
    if r != d - 2 || rows.len() != d - 2 {
        return Err(Degeneracy::Rank { family: 0, rank: r, expected: d - 2 });
    }
    let k_space = Subspace::span(d, &rows).expect("row widths match ambient dimension");
    let normal_plane = k_space.orthogonal_complement().basis().to_vec();
    let base_points = classes.iter().filter(|c| !c.is_empty()).map(|c| c[0].clone()).collect();
    Ok(Codim2Flats { k_space, base_points, normal_plane })
}

/// Closed-region bisection of every color: both `A ∪ ∂` and `B ∪ ∂` hold at least half.
pub fn is_bisecting(arr: &Arrangement, config: &ColoredPointConfig) -> bool {
    is_bisecting_with(&arr.hyperplanes(), config)
}

pub fn is_bisecting_with(hyperplanes: &[OrientedHyperplane], config: &ColoredPointConfig) -> bool {
    config.colors.iter().all(|class| color_balance(hyperplanes, class).is_bisected())
}

/// Interior and boundary counts of one color class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Balance {
    pub a: usize,
    pub b: usize,
    pub boundary: usize,
}

impl Balance {
    pub fn total(&self) -> usize {
        self.a + self.b + self.boundary
    }

    pub fn is_bisected(&self) -> bool {
        let n = self.total();
        2 * (self.a + self.boundary) >= n && 2 * (self.b + self.boundary) >= n
    }
}

pub fn color_balance(hyperplanes: &[OrientedHyperplane], class: &[Point]) -> Balance {
    let mut bal = Balance { a: 0, b: 0, boundary: 0 };
    for p in class {
        match chessboard_color(hyperplanes, p) {
            Color::A => bal.a += 1,
            Color::B => bal.b += 1,
            Color::Boundary => bal.boundary += 1,
        }
    }
    bal
}

/// Canonical key under the symmetry group: families with identical `(L, k)` are
/// interchangeable, so their encodings are sorted within each such block.
pub fn equivalence_class_key(arr: &Arrangement, specs: &[FamilySpec]) -> String {
    let mut blocks: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (i, (f, s)) in arr.families.iter().zip(specs).enumerate() {
        let rep = specs
            .iter()
            .position(|o| o.k == s.k && o.subspace == s.subspace)
            .unwrap_or(i);
        blocks.entry(rep).or_default().push(f.encode());
    }
    blocks
        .into_values()
        .map(|mut v| {
            v.sort();
            v.join("+")
        })
        .collect::<Vec<_>>()
        .join(" / ")
}

pub fn count_classes(arrs: &[Arrangement], specs: &[FamilySpec]) -> usize {
    arrs.iter()
        .map(|a| equivalence_class_key(a, specs))
        .collect::<std::collections::BTreeSet<_>>()
        .len()
}

/// True when every offset and direction entry is finite and directions are nonzero.
pub fn is_well_formed(arr: &Arrangement) -> bool {
    arr.families.iter().all(|f| {
        f.v.iter().any(|x| !x.is_zero()) && f.offsets.windows(2).all(|w| w[0] < w[1])
    })
}

/// Index of the first family with the same `(L, k)` as each family.
pub fn symmetry_blocks(specs: &[FamilySpec]) -> Vec<usize> {
    specs
        .iter()
        .enumerate()
        .map(|(i, s)| specs[..i].iter().position(|o| o.k == s.k && o.subspace == s.subspace).unwrap_or(i))
        .collect()
}

/// Combinatorial label of an arrangement: for each family, its classes of
/// incident points. Stable while the points move, so it identifies an
/// arrangement path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    pub groups: Vec<Vec<Vec<PointId>>>,
}

impl Assignment {
    pub fn new(mut groups: Vec<Vec<Vec<PointId>>>) -> Self {
        for g in &mut groups {
            for c in g.iter_mut() {
                c.sort_unstable();
            }
            g.sort();
        }
        Assignment { groups }
    }

    /// Assignment of a valid partition whose item `j` is the point `ids[j]`.
    pub fn from_partition(chi: &ValidPartition, ids: &[PointId]) -> Self {
        Assignment::new(
            chi.groups.iter().map(|g| g.iter().map(|c| c.iter().map(|&i| ids[i]).collect()).collect()).collect(),
        )
    }

    /// Representative of the symmetry class: interchangeable families sorted.
    pub fn canonical(&self, specs: &[FamilySpec]) -> Self {
        let blocks = symmetry_blocks(specs);
        let mut groups = self.groups.clone();
        for (i, &b) in blocks.iter().enumerate() {
            if b != i || !blocks[i + 1..].contains(&i) {
                continue;
            }
            let members: Vec<usize> = (i..blocks.len()).filter(|&j| blocks[j] == i).collect();
            let mut gs: Vec<_> = members.iter().map(|&j| groups[j].clone()).collect();
            gs.sort();
            for (&j, g) in members.iter().zip(gs) {
                groups[j] = g;
            }
        }
        Assignment { groups }
    }

    pub fn points(&self) -> Vec<PointId> {
        let mut v: Vec<PointId> = self.groups.iter().flatten().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.groups.iter().flatten().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, id: PointId) -> bool {
        self.locate(id).is_some()
    }

    /// `(family, class)` holding `id`.
    pub fn locate(&self, id: PointId) -> Option<(usize, usize)> {
        for (f, g) in self.groups.iter().enumerate() {
            for (c, class) in g.iter().enumerate() {
                if class.contains(&id) {
                    return Some((f, c));
                }
            }
        }
        None
    }

    /// One point per color, with every family of the right shape.
    pub fn is_valid_for(&self, specs: &[FamilySpec], num_colors: usize) -> bool {
        let mut colors: Vec<usize> = self.points().iter().map(|p| p.color).collect();
        colors.sort_unstable();
        colors == (0..num_colors).collect::<Vec<_>>()
            && self.groups.len() == specs.len()
            && self.groups.iter().zip(specs).all(|(g, s)| {
                g.len() == s.k && g.iter().all(|c| !c.is_empty()) && g.iter().map(Vec::len).sum::<usize>() == s.m()
            })
    }

    /// The arrangement through the labelled points of `config`.
    pub fn realize(&self, config: &ColoredPointConfig, specs: &[FamilySpec]) -> std::result::Result<Arrangement, Degeneracy> {
        let mut families = Vec::with_capacity(specs.len());
        for (fi, (spec, group)) in specs.iter().zip(&self.groups).enumerate() {
            let classes: Vec<Vec<&Point>> = group.iter().map(|c| c.iter().map(|&id| config.point(id)).collect()).collect();
            let (v, mut offsets) = build_family(spec, fi, &classes)?;
            offsets.sort();
            families.push(Family { v, offsets });
        }
        Ok(Arrangement::new(families))
    }

    /// Bar notation over colors (1-based); a doubled color shows up twice.
    pub fn color_notation(&self) -> String {
        let wide = self.groups.iter().flatten().flatten().any(|p| p.color + 1 >= 10);
        let sep = if wide { "," } else { "" };
        self.groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|c| c.iter().map(|p| (p.color + 1).to_string()).collect::<Vec<_>>().join(sep))
                    .collect::<Vec<_>>()
                    .join("|")
            })
            .collect::<Vec<_>>()
            .join(" || ")
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam: Vec<String> = self
            .groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|c| c.iter().map(|p| format!("{}.{}", p.color + 1, p.index)).collect::<Vec<_>>().join(","))
                    .collect::<Vec<_>>()
                    .join("|")
            })
            .collect();
        f.write_str(&fam.join(" || "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::{multinomial, stirling2};
    use crate::rat::{frac, int};
    use num_bigint::BigUint;

    fn pt(v: &[i64]) -> Point {
        v.iter().map(|&x| int(x)).collect()
    }

    fn whole(d: usize, k: usize) -> FamilySpec {
        FamilySpec::new(Subspace::whole(d), k).unwrap()
    }

    fn count_formula(specs: &[FamilySpec]) -> BigUint {
        let parts: Vec<usize> = specs.iter().map(FamilySpec::m).collect();
        let total = parts.iter().sum();
        specs.iter().fold(multinomial(total, &parts).unwrap(), |acc, s| acc * stirling2(s.m(), s.k))
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_valid_partitions(2, &[whole(2, 1)]).unwrap().len(), 1);
        let two = [whole(2, 1), whole(2, 1)];
        assert_eq!(enumerate_valid_partitions(4, &two).unwrap().len(), 6);
        let mixed = [whole(2, 3), whole(2, 2)];
        let all = enumerate_valid_partitions(7, &mixed).unwrap();
        // C(7;4,3) * S(4,3) * S(3,2) = 35 * 6 * 3
        assert_eq!(all.len(), 630);
        assert_eq!(BigUint::from(all.len()), count_formula(&mixed));
        let e = |v: &[usize]| -> Vec<Rat> { (0..3).map(|i| int(i64::from(v.contains(&i)))).collect() };
        let plane = Subspace::from_basis(3, vec![e(&[0]), e(&[1])]).unwrap();
        let axis = Subspace::from_basis(3, vec![e(&[0])]).unwrap();
        let three = [whole(3, 2), FamilySpec::new(plane, 1).unwrap(), FamilySpec::new(axis, 1).unwrap()];
        // C(7;4,2,1) * S(4,2) = 105 * 7
        assert_eq!(enumerate_valid_partitions(7, &three).unwrap().len(), 735);
        let uniq: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(uniq.len(), all.len());
        assert!(enumerate_valid_partitions(5, &mixed).is_err());
    }

    #[test]
    fn bar_notation_round_trip() {
        let p = ValidPartition::parse_bar("14|3|7 || 25|6").unwrap();
        assert_eq!(p, ValidPartition::parse_bar("3|41|7||6|52").unwrap());
        assert_ne!(p, ValidPartition::parse_bar("25|6||14|3|7").unwrap());
        assert_eq!(p.bar_notation(), "14|3|7 || 25|6");
        assert_eq!(ValidPartition::parse_bar(&p.bar_notation()).unwrap(), p);
    }

    #[test]
    fn one_dimensional_cuts() {
        let spec = FamilySpec::new(Subspace::whole(1), 2).unwrap();
        let chi = ValidPartition::new(vec![vec![vec![0], vec![1]]]);
        let pts = vec![vec![frac(3, 2)], vec![int(-1)]];
        let arr = construct_arrangement(&chi, &pts, &[spec]).unwrap();
        assert_eq!(arr.families[0].v, vec![int(1)]);
        assert_eq!(arr.families[0].offsets, vec![int(-1), frac(3, 2)]);
    }

    #[test]
    fn line_through_two_points() {
        let chi = ValidPartition::new(vec![vec![vec![0, 1]]]);
        let pts = vec![pt(&[0, 0]), pt(&[2, 1])];
        let arr = construct_arrangement(&chi, &pts, &[whole(2, 1)]).unwrap();
        let h = &arr.hyperplanes()[0];
        assert_eq!(h.value(&pts[0]), int(0));
        assert_eq!(h.value(&pts[1]), int(0));
        assert_eq!(h.value(&pt(&[4, 2])), int(0));
    }

    #[test]
    fn round_trip_on_generic_four_points() {
        let pts = vec![pt(&[0, 0]), pt(&[7, 1]), pt(&[2, 9]), pt(&[11, 5])];
        let specs = [whole(2, 1), whole(2, 1)];
        for chi in enumerate_valid_partitions(4, &specs).unwrap() {
            let arr = construct_arrangement(&chi, &pts, &specs).unwrap();
            assert_eq!(induced_partition(&arr, &pts).unwrap(), chi);
        }
    }

    #[test]
    fn induced_partition_failures() {
        let pts = vec![pt(&[0, 0]), pt(&[7, 1])];
        let chi = ValidPartition::new(vec![vec![vec![0, 1]]]);
        let mut arr = construct_arrangement(&chi, &pts, &[whole(2, 1)]).unwrap();
        arr.families[0].offsets[0] += int(1);
        assert_eq!(induced_partition(&arr, &pts), Err(NotValid::Empty { family: 0, index: 0 }));
        // Two lines through a shared point.
        let pts = vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])];
        let arr = Arrangement::new(vec![
            Family { v: vec![int(0), int(1)], offsets: vec![int(0)] },
            Family { v: vec![int(1), int(0)], offsets: vec![int(0)] },
        ]);
        assert_eq!(induced_partition(&arr, &pts), Err(NotValid::Double { point: 0 }));
    }

    #[test]
    fn bisection_examples() {
        let spec = FamilySpec::new(Subspace::whole(1), 1).unwrap();
        let arr = Arrangement::new(vec![Family { v: vec![int(1)], offsets: vec![int(0)] }]);
        let c = ColoredPointConfig::new(1, vec![vec![pt(&[-1]), pt(&[0]), pt(&[1])]]).unwrap();
        assert!(is_bisecting(&arr, &c));
        let c = ColoredPointConfig::new(1, vec![vec![pt(&[0]), pt(&[1]), pt(&[2])]]).unwrap();
        assert!(!is_bisecting(&arr, &c));
        let _ = spec;
    }

    #[test]
    fn class_key_respects_symmetry() {
        let specs = [whole(2, 1), whole(2, 1)];
        let f1 = Family { v: vec![int(1), int(0)], offsets: vec![int(3)] };
        let f2 = Family { v: vec![int(0), int(1)], offsets: vec![int(-2)] };
        let a = Arrangement::new(vec![f1.clone(), f2.clone()]);
        let b = Arrangement::new(vec![f2, f1]);
        assert_eq!(equivalence_class_key(&a, &specs), equivalence_class_key(&b, &specs));
        let distinct = [whole(2, 1), FamilySpec::new(Subspace::whole(2), 2).unwrap()];
        assert_ne!(equivalence_class_key(&a, &distinct), equivalence_class_key(&b, &distinct));
        assert_eq!(count_classes(&[a.clone(), b, a], &specs), 1);
    }

    #[test]
    fn assignment_canonical_form() {
        let id = |c, i| PointId { color: c, index: i };
        let a = Assignment::new(vec![vec![vec![id(2, 0), id(0, 1)]], vec![vec![id(1, 0), id(3, 2)]]]);
        let b = Assignment::new(vec![vec![vec![id(3, 2), id(1, 0)]], vec![vec![id(0, 1), id(2, 0)]]]);
        let same = [whole(2, 1), whole(2, 1)];
        assert_eq!(a.canonical(&same), b.canonical(&same));
        let distinct = [whole(2, 1), FamilySpec::new(Subspace::from_basis(2, vec![vec![int(1), int(0)]]).unwrap(), 2).unwrap()];
        assert_ne!(a.canonical(&distinct), b.canonical(&distinct));
        assert!(a.is_valid_for(&same, 4));
        assert_eq!(a.color_notation(), "13 || 24");
    }

    #[test]
    fn codim2_in_three_dimensions() {
        let spec = whole(3, 1);
        let classes = vec![vec![pt(&[0, 0, 0]), pt(&[1, 2, 3])]];
        let f = construct_codim2_flats(&classes, &spec).unwrap();
        assert_eq!(f.k_space.dim(), 1);
        assert!(f.k_space.contains(&pt(&[1, 2, 3])));
        assert_eq!(f.normal_plane.len(), 2);
        let spec2 = whole(2, 2);
        let classes = vec![vec![pt(&[0, 0])], vec![pt(&[5, 1])]];
        let f = construct_codim2_flats(&classes, &spec2).unwrap();
        assert_eq!(f.k_space.dim(), 0);
        assert_eq!(f.base_points.len(), 2);
    }
}
