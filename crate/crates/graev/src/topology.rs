//! Finite (Alexandroff) topological spaces as bitset families.
//!
//! A topology on up to 32 labelled points is a family of subset masks that
//! contains the empty and full sets and is closed under union and
//! intersection. Every finite topology is Alexandroff, so each point has a
//! smallest open neighbourhood and singleton closures determine the
//! specialization preorder.
//!
//! The module also builds the inverse topology on the formal point set
//! `X⁻¹`, generated by the sets `(cl x)⁻¹`, and verifies the closure
//! duality and closed-set openness statements that relate the two.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::extension::GraevExtension;
use crate::metrics::{self, MetricError, QuasiPseudometric, Rat};
use crate::par;
use crate::report::{Check, Report};
use crate::words::{invert, multiply, PointId, PointSet, ReducedWord, Word, WordError};

/// A subset of the point set, as a bitmask over point ids.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(k: usize) -> Subset {
        debug_assert!(k <= 32);
        if k == 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << k) - 1)
        }
    }

    pub fn singleton(p: PointId) -> Subset {
        Subset(1 << p.0)
    }

    pub fn contains(self, p: PointId) -> bool {
        self.0 & (1 << p.0) != 0
    }

    pub fn insert(self, p: PointId) -> Subset {
        Subset(self.0 | (1 << p.0))
    }

    pub fn remove(self, p: PointId) -> Subset {
        Subset(self.0 & !(1 << p.0))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn inter(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn complement(self, k: usize) -> Subset {
        Subset(!self.0).inter(Subset::full(k))
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = PointId> {
        (0..32u32).filter(move |i| self.0 & (1 << i) != 0).map(PointId)
    }

    pub fn render(self, points: &PointSet) -> String {
        self.iter()
            .map(|p| points.name(p))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum TopologyError {
    #[error("the empty set is missing from the open-set family")]
    MissingEmpty,
    #[error("the full point set is missing from the open-set family")]
    MissingFull,
    #[error("not closed under union: {0:?} ∪ {1:?} is missing")]
    NotClosedUnderUnion(Subset, Subset),
    #[error("not closed under intersection: {0:?} ∩ {1:?} is missing")]
    NotClosedUnderIntersection(Subset, Subset),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("subset {0:?} is not open in the topology")]
    NotOpen(Subset),
    #[error("{0} points exceed the supported maximum of {1}")]
    TooManyPoints(usize, usize),
    #[error("family of {requested} generated metrics exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A validated topology on a finite point set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteTopology {
    points: PointSet,
    opens: Vec<Subset>, // sorted ascending by mask, deduplicated
}

impl FiniteTopology {
    /// Validates the family: empty and full sets present, closed under
    /// pairwise union and intersection (which on a finite family gives
    /// closure under arbitrary unions and intersections).
    pub fn validate(points: PointSet, opens: &[Subset]) -> Result<Self, TopologyError> {
        if points.len() > 32 {
            return Err(TopologyError::TooManyPoints(points.len(), 32));
        }
        let mut family: Vec<Subset> = opens.to_vec();
        family.sort_unstable();
        family.dedup();
        let k = points.len();
        if !family.contains(&Subset::EMPTY) {
            return Err(TopologyError::MissingEmpty);
        }
        for &a in &family {
            for &b in &family {
                if family.binary_search(&a.union(b)).is_err() {
                    return Err(TopologyError::NotClosedUnderUnion(a, b));
                }
                if family.binary_search(&a.inter(b)).is_err() {
                    return Err(TopologyError::NotClosedUnderIntersection(a, b));
                }
            }
        }
        if !family.contains(&Subset::full(k)) {
            return Err(TopologyError::MissingFull);
        }
        Ok(FiniteTopology {
            points,
            opens: family,
        })
    }

    pub fn discrete(points: PointSet) -> Self {
        let k = points.len();
        let opens = (0..=Subset::full(k).0).map(Subset).collect();
        FiniteTopology { points, opens }
    }

    pub fn indiscrete(points: PointSet) -> Self {
        let k = points.len();
        FiniteTopology {
            points,
            opens: vec![Subset::EMPTY, Subset::full(k)],
        }
    }

    /// The Sierpiński space on two named points, with the first one open.
    pub fn sierpinski(open_point: &str, closed_point: &str) -> Self {
        let points = PointSet::from_names([open_point, closed_point]).unwrap();
        FiniteTopology {
            opens: vec![Subset::EMPTY, Subset(0b01), Subset(0b11)],
            points,
        }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    pub fn is_open(&self, s: Subset) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: Subset) -> bool {
        self.is_open(s.complement(self.points.len()))
    }

    pub fn closed_sets(&self) -> Vec<Subset> {
        let k = self.points.len();
        let mut closed: Vec<Subset> = self.opens.iter().map(|o| o.complement(k)).collect();
        closed.sort_unstable();
        closed
    }

    /// Smallest open set containing `x` (exists in every finite topology).
    pub fn min_neighbourhood(&self, x: PointId) -> Subset {
        let mut nbhd = Subset::full(self.points.len());
        for &open in &self.opens {
            if open.contains(x) {
                nbhd = nbhd.inter(open);
            }
        }
        nbhd
    }

    /// Closure of the singleton `{x}`: the complement of the union of the
    /// open sets avoiding `x`.
    pub fn closure_point(&self, x: PointId) -> Subset {
        let mut avoiding = Subset::EMPTY;
        for &open in &self.opens {
            if !open.contains(x) {
                avoiding = avoiding.union(open);
            }
        }
        avoiding.complement(self.points.len())
    }

    pub fn closure(&self, s: Subset) -> Subset {
        s.iter()
            .fold(Subset::EMPTY, |acc, x| acc.union(self.closure_point(x)))
    }

    /// Every singleton closed; on a finite space this forces discreteness.
    pub fn is_t1(&self) -> bool {
        self.points
            .ids()
            .all(|x| self.closure_point(x) == Subset::singleton(x))
    }

    pub fn is_discrete(&self) -> bool {
        self.points.ids().all(|x| self.is_open(Subset::singleton(x)))
    }

    /// Looks a point up by name.
    pub fn point(&self, name: &str) -> Result<PointId, TopologyError> {
        self.points
            .id(name)
            .ok_or_else(|| TopologyError::UnknownPoint(name.to_string()))
    }

    /// Canonical form under point relabelling: the lexicographically least
    /// sorted open-set family over all permutations of the ids.
    pub fn canonical_opens(&self) -> Vec<Subset> {
        let k = self.points.len();
        let ids: Vec<u32> = (0..k as u32).collect();
        let mut best: Option<Vec<Subset>> = None;
        permute(&ids, &mut |perm| {
            let mut relabeled: Vec<Subset> = self
                .opens
                .iter()
                .map(|s| {
                    let mut mask = 0u32;
                    for (from, &to) in perm.iter().enumerate() {
                        if s.0 & (1 << from) != 0 {
                            mask |= 1 << to;
                        }
                    }
                    Subset(mask)
                })
                .collect();
            relabeled.sort_unstable();
            if best.as_ref().is_none_or(|b| &relabeled < b) {
                best = Some(relabeled);
            }
        });
        best.unwrap_or_default()
    }
}

fn permute(ids: &[u32], f: &mut impl FnMut(&[u32])) {
    let mut items = ids.to_vec();
    let n = items.len();
    permute_rec(&mut items, 0, n, f);
}

fn permute_rec(items: &mut [u32], at: usize, n: usize, f: &mut impl FnMut(&[u32])) {
    if at == n {
        f(items);
        return;
    }
    for i in at..n {
        items.swap(at, i);
        permute_rec(items, at + 1, n, f);
        items.swap(at, i);
    }
}

/// The topology `T_A` on the formal point set `X⁻¹`, generated by the base
/// `{(cl x)⁻¹ : x ∈ X}`. Masks are indexed by the underlying point ids, so
/// bit `i` stands for the inverse of point `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InverseTopology {
    base: FiniteTopology,
    topology: FiniteTopology,
    minimal: Vec<Subset>,
}

impl InverseTopology {
    pub fn base_space(&self) -> &FiniteTopology {
        &self.base
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }

    /// Smallest open neighbourhood of `x⁻¹`, which is `(cl x)⁻¹`.
    pub fn min_neighbourhood(&self, x: PointId) -> Subset {
        self.minimal[x.0 as usize]
    }

    pub fn closure_point(&self, x: PointId) -> Subset {
        self.topology.closure_point(x)
    }

    pub fn is_discrete(&self) -> bool {
        self.topology.is_discrete()
    }

    pub fn is_t1(&self) -> bool {
        self.topology.is_t1()
    }
}

/// Builds the inverse topology of a finite space: all unions of the basic
/// sets `(cl x)⁻¹`.
pub fn inverse_topology(space: &FiniteTopology) -> InverseTopology {
    let k = space.points().len();
    let minimal: Vec<Subset> = space.points().ids().map(|x| space.closure_point(x)).collect();
    let mut opens = BTreeSet::new();
    for bits in 0u32..(1 << k) {
        let mut union = Subset::EMPTY;
        for (i, m) in minimal.iter().enumerate() {
            if bits & (1 << i) != 0 {
                union = union.union(*m);
            }
        }
        opens.insert(union);
    }
    let family: Vec<Subset> = opens.into_iter().collect();
    let topology = FiniteTopology::validate(space.points().clone(), &family)
        .expect("unions of minimal neighbourhoods always form a topology");
    InverseTopology {
        base: space.clone(),
        topology,
        minimal,
    }
}

/// Verifies, for every ordered pair of points, the closure duality
/// `a ∈ cl_X(b)  ⟺  b⁻¹ ∈ cl_{X⁻¹}(a⁻¹)`, with the right-hand closure
/// taken in the inverse topology.
pub fn check_closure_duality(space: &FiniteTopology) -> Report {
    let inverse = inverse_topology(space);
    let mut report = Report::new();
    for a in space.points().ids() {
        for b in space.points().ids() {
            let lhs = space.closure_point(b).contains(a);
            let rhs = inverse.closure_point(a).contains(b);
            let name = "closure-duality";
            let instance = format!(
                "a={} b={}",
                space.points().name(a),
                space.points().name(b)
            );
            if lhs == rhs {
                report.push(Check::pass(name, instance));
            } else {
                report.push(Check::fail(
                    name,
                    instance,
                    format!("lhs={lhs} rhs={rhs}"),
                ));
            }
        }
    }
    report
}

/// Verifies that `A⁻¹` is open in the inverse topology for every closed
/// `A ⊆ X`.
pub fn check_reznichenko(space: &FiniteTopology) -> Report {
    let inverse = inverse_topology(space);
    let mut report = Report::new();
    for closed in space.closed_sets() {
        let instance = format!("A=[{}]", closed.render(space.points()));
        if inverse.topology().is_open(closed) {
            report.push(Check::pass("closed-inverse-open", instance));
        } else {
            report.push(Check::fail(
                "closed-inverse-open",
                instance,
                "A^-1 not open in T_A".to_string(),
            ));
        }
    }
    report
}

/// Enumerates every topology on the given labelled points (at most 4 of
/// them), in a deterministic order.
pub fn enumerate_topologies(points: &PointSet) -> Result<Vec<FiniteTopology>, TopologyError> {
    let k = points.len();
    if k > 4 {
        return Err(TopologyError::TooManyPoints(k, 4));
    }
    let full = Subset::full(k);
    let proper: Vec<Subset> = (1..full.0).map(Subset).collect();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << proper.len()) {
        let mut opens = vec![Subset::EMPTY, full];
        for (i, &s) in proper.iter().enumerate() {
            if bits & (1 << i) != 0 {
                opens.push(s);
            }
        }
        if let Ok(t) = FiniteTopology::validate(points.clone(), &opens) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Deduplicates a list of topologies up to point relabelling.
pub fn dedup_up_to_homeomorphism(spaces: &[FiniteTopology]) -> Vec<FiniteTopology> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for space in spaces {
        if seen.insert(space.canonical_opens()) {
            out.push(space.clone());
        }
    }
    out
}

/// Outcome of comparing the ball topology of a generated metric family with
/// the inverse topology.
#[derive(Clone, Debug)]
pub struct FamilyComparison {
    /// Topology on `X⁻¹` generated by all balls of the Graev extensions of
    /// the family.
    pub family_topology: FiniteTopology,
    /// The inverse topology `T_A`.
    pub inverse_topology: FiniteTopology,
    /// Every family open is `T_A`-open. Expected to hold always.
    pub included: bool,
    /// The two topologies coincide. Reported, not asserted.
    pub equal: bool,
    /// Number of distinct metrics in the generated family.
    pub family_size: usize,
}

/// Default cap on the number of generated family metrics.
pub const DEFAULT_FAMILY_CAP: usize = 4096;

/// Builds the family of pointwise maxima over non-empty subsets of
/// `{ρ_U : U open}`, Graev-extends each member, and compares the topology
/// its balls generate on `X⁻¹` with the inverse topology.
pub fn graev_family_topology_on_inverse(
    space: &FiniteTopology,
    family_cap: usize,
) -> Result<FamilyComparison, TopologyError> {
    let k = space.points().len();
    if k > 5 {
        return Err(TopologyError::TooManyPoints(k, 5));
    }

    // Distinct ρ_U generators: the metric depends only on U, and the empty
    // and full open sets both give the zero metric.
    let mut generators: Vec<QuasiPseudometric> = Vec::new();
    let mut seen = BTreeSet::new();
    for &open in space.opens() {
        let rho = metrics::rho_from_open_set(open, space)?;
        if seen.insert(rho.table_key()) {
            generators.push(rho);
        }
    }
    let subsets: u128 = 1u128 << generators.len();
    if subsets - 1 > family_cap as u128 {
        return Err(TopologyError::CapExceeded {
            requested: subsets - 1,
            cap: family_cap,
        });
    }

    // Pointwise maxima over non-empty generator subsets, deduplicated.
    let mut family: Vec<QuasiPseudometric> = Vec::new();
    let mut seen_tables = BTreeSet::new();
    for bits in 1u64..(1u64 << generators.len()) {
        let members: Vec<QuasiPseudometric> = generators
            .iter()
            .enumerate()
            .filter(|(i, _)| bits & (1 << i) != 0)
            .map(|(_, m)| m.clone())
            .collect();
        let combined = metrics::max_combine(&members)?;
        if seen_tables.insert(combined.table_key()) {
            family.push(combined);
        }
    }

    // Balls of each extension restricted to X⁻¹, collected as a subbase.
    let ball_sets: Vec<Vec<Subset>> = par::map(&family, |metric| {
        let ext = GraevExtension::new(metric.clone()).expect("ρ maxima are bounded by 1");
        inverse_balls(&ext, space.points())
    });
    let mut subbase: Vec<Subset> = ball_sets.into_iter().flatten().collect();
    subbase.push(Subset::full(k));
    let family_topology = topology_from_subbase(space.points().clone(), &subbase);

    let inverse = inverse_topology(space);
    let included = family_topology
        .opens()
        .iter()
        .all(|&o| inverse.topology().is_open(o));
    let equal = included && family_topology.opens() == inverse.topology().opens();
    Ok(FamilyComparison {
        family_topology,
        inverse_topology: inverse.topology().clone(),
        included,
        equal,
        family_size: family.len(),
    })
}

/// All balls `{y⁻¹ : d̂(x⁻¹, y⁻¹) < ε}` for centres `x⁻¹` and thresholds at
/// the distinct distance values plus one value above the maximum.
fn inverse_balls(ext: &GraevExtension, points: &PointSet) -> Vec<Subset> {
    use num_traits::{One, Zero};
    let k = points.len();
    let inv_words: Vec<ReducedWord> = points
        .ids()
        .map(|id| ReducedWord::letter(crate::words::Letter::Inv(id)))
        .collect();
    let mut dist = vec![vec![Rat::zero(); k]; k];
    let mut values: BTreeSet<Rat> = BTreeSet::new();
    for (i, g) in inv_words.iter().enumerate() {
        for (j, h) in inv_words.iter().enumerate() {
            let d = ext.prenorm(&multiply(&invert(g), h));
            values.insert(d);
            dist[i][j] = d;
        }
    }
    let above_max = values.iter().next_back().copied().unwrap_or_else(Rat::zero) + Rat::one();
    values.insert(above_max);
    let mut balls = Vec::new();
    for i in 0..k {
        for radius in &values {
            if *radius <= Rat::zero() {
                continue;
            }
            let mut ball = Subset::EMPTY;
            for j in 0..k {
                if dist[i][j] < *radius {
                    ball = ball.insert(PointId(j as u32));
                }
            }
            balls.push(ball);
        }
    }
    balls
}

/// The topology generated by a subbase: close under pairwise intersection,
/// then under union, and add the empty set.
pub fn topology_from_subbase(points: PointSet, subbase: &[Subset]) -> FiniteTopology {
    let k = points.len();
    let mut family: BTreeSet<Subset> = subbase.iter().copied().collect();
    family.insert(Subset::full(k));
    loop {
        let snapshot: Vec<Subset> = family.iter().copied().collect();
        let before = family.len();
        for &a in &snapshot {
            for &b in &snapshot {
                family.insert(a.inter(b));
            }
        }
        if family.len() == before {
            break;
        }
    }
    loop {
        let snapshot: Vec<Subset> = family.iter().copied().collect();
        let before = family.len();
        for &a in &snapshot {
            for &b in &snapshot {
                family.insert(a.union(b));
            }
        }
        if family.len() == before {
            break;
        }
    }
    family.insert(Subset::EMPTY);
    let opens: Vec<Subset> = family.into_iter().collect();
    FiniteTopology::validate(points, &opens)
        .expect("closing under union and intersection yields a topology")
}

/// Parses the topology file format:
///
/// ```text
/// points: a b
/// open: a
/// open: a b
/// ```
///
/// The empty set is implicit. Blank lines and `#` comments are skipped.
pub fn parse_topology(text: &str, source: &str) -> Result<FiniteTopology, ParseError> {
    let mut points: Option<PointSet> = None;
    let mut opens = vec![Subset::EMPTY];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("points:") {
            if points.is_some() {
                return Err(ParseError::new(source, lineno, "duplicate `points:` line"));
            }
            let set = PointSet::from_names(rest.split_whitespace())
                .map_err(|e| ParseError::new(source, lineno, e.to_string()))?;
            if set.is_empty() {
                return Err(ParseError::new(source, lineno, "empty point list"));
            }
            points = Some(set);
        } else if let Some(rest) = line.strip_prefix("open:") {
            let set = points
                .as_ref()
                .ok_or_else(|| ParseError::new(source, lineno, "`open:` before `points:`"))?;
            let mut mask = Subset::EMPTY;
            for name in rest.split_whitespace() {
                let id = set.id(name).ok_or_else(|| {
                    ParseError::new(source, lineno, format!("unknown point `{name}`"))
                })?;
                mask = mask.insert(id);
            }
            opens.push(mask);
        } else {
            return Err(ParseError::new(
                source,
                lineno,
                format!("unrecognised line `{line}`"),
            ));
        }
    }
    let points = points.ok_or_else(|| ParseError::new(source, 0, "missing `points:` line"))?;
    FiniteTopology::validate(points, &opens)
        .map_err(|e| ParseError::new(source, 0, e.to_string()))
}

/// Renders a topology in the file format it is parsed from.
pub fn render_topology(space: &FiniteTopology) -> String {
    let mut out = format!("points: {}\n", space.points());
    for &open in space.opens() {
        if open.is_empty() {
            continue;
        }
        out.push_str(&format!("open: {}\n", open.render(space.points())));
    }
    out
}

/// A parse failure naming the source, line, and violated invariant.
#[derive(Error, Clone, PartialEq, Eq, Debug)]
#[error("{source_name}:{line}: {message}")]
pub struct ParseError {
    pub source_name: String,
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        ParseError {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_topology(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sierpinski() -> FiniteTopology {
        FiniteTopology::sierpinski("a", "b")
    }

    #[test]
    fn validation() {
        let points = PointSet::from_names(["a", "b"]).unwrap();
        let valid = FiniteTopology::validate(
            points.clone(),
            &[Subset::EMPTY, Subset(0b01), Subset(0b11)],
        );
        assert!(valid.is_ok());

        // {∅, {a}, {b}} is missing the union {a, b}.
        let err = FiniteTopology::validate(
            points.clone(),
            &[Subset::EMPTY, Subset(0b01), Subset(0b10)],
        );
        assert_eq!(
            err.unwrap_err(),
            TopologyError::NotClosedUnderUnion(Subset(0b01), Subset(0b10))
        );

        let err = FiniteTopology::validate(points, &[Subset::EMPTY, Subset(0b01)]);
        assert_eq!(err.unwrap_err(), TopologyError::MissingFull);

        let three = PointSet::from_names(["a", "b", "c"]).unwrap();
        assert!(FiniteTopology::validate(
            three.clone(),
            &FiniteTopology::discrete(three).opens().to_vec()
        )
        .is_ok());
    }

    #[test]
    fn closures_and_t1() {
        let s = sierpinski();
        let a = s.point("a").unwrap();
        let b = s.point("b").unwrap();
        assert_eq!(s.closure_point(a), Subset(0b11));
        assert_eq!(s.closure_point(b), Subset(0b10));
        assert!(!s.is_t1());

        let d = FiniteTopology::discrete(PointSet::from_names(["a", "b", "c"]).unwrap());
        for x in d.points().ids() {
            assert_eq!(d.closure_point(x), Subset::singleton(x));
        }
        assert!(d.is_t1());
        assert!(matches!(s.point("z"), Err(TopologyError::UnknownPoint(_))));
    }

    #[test]
    fn inverse_topology_examples() {
        let s = sierpinski();
        let inv = inverse_topology(&s);
        // cl(a) = X, cl(b) = {b}: opens on X⁻¹ are ∅, {b⁻¹}, X⁻¹.
        assert_eq!(
            inv.topology().opens(),
            &[Subset::EMPTY, Subset(0b10), Subset(0b11)]
        );

        let d = FiniteTopology::discrete(PointSet::from_names(["a", "b"]).unwrap());
        assert!(inverse_topology(&d).is_discrete());

        let i = FiniteTopology::indiscrete(PointSet::from_names(["a", "b"]).unwrap());
        let inv = inverse_topology(&i);
        assert_eq!(inv.topology().opens(), &[Subset::EMPTY, Subset(0b11)]);
    }

    #[test]
    fn inverse_base_is_closed_sets() {
        // The base {A⁻¹ : A closed} generates the same opens as the minimal
        // neighbourhoods (cl x)⁻¹.
        let points = PointSet::from_names(["a", "b", "c"]).unwrap();
        for space in enumerate_topologies(&points).unwrap() {
            let inv = inverse_topology(&space);
            let from_closed = topology_from_subbase(points.clone(), &space.closed_sets());
            // Closed sets are themselves closed under union/intersection, so
            // the subbase closure is exactly all unions of closed sets.
            assert_eq!(inv.topology().opens(), from_closed.opens());
        }
    }

    #[test]
    fn duality_and_reznichenko() {
        let s = sierpinski();
        assert!(check_closure_duality(&s).all_pass());
        assert!(check_reznichenko(&s).all_pass());

        let points = PointSet::from_names(["a", "b", "c"]).unwrap();
        for space in enumerate_topologies(&points).unwrap() {
            assert!(check_closure_duality(&space).all_pass());
            assert!(check_reznichenko(&space).all_pass());
        }
    }

    #[test]
    fn enumeration_counts() {
        for (k, expected) in [(1usize, 1usize), (2, 4), (3, 29), (4, 355)] {
            let names: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
            let points = PointSet::from_names(&names).unwrap();
            let all = enumerate_topologies(&points).unwrap();
            assert_eq!(all.len(), expected, "labelled topologies on {k} points");
        }
    }

    #[test]
    fn homeomorphism_dedup_count() {
        let points = PointSet::from_names(["p0", "p1", "p2", "p3"]).unwrap();
        let all = enumerate_topologies(&points).unwrap();
        assert_eq!(dedup_up_to_homeomorphism(&all).len(), 33);
    }

    #[test]
    fn family_comparison_examples() {
        let s = sierpinski();
        let cmp = graev_family_topology_on_inverse(&s, DEFAULT_FAMILY_CAP).unwrap();
        assert!(cmp.included);
        assert!(cmp.equal);
        assert_eq!(
            cmp.family_topology.opens(),
            &[Subset::EMPTY, Subset(0b10), Subset(0b11)]
        );

        let d = FiniteTopology::discrete(PointSet::from_names(["a", "b"]).unwrap());
        let cmp = graev_family_topology_on_inverse(&d, DEFAULT_FAMILY_CAP).unwrap();
        assert!(cmp.included && cmp.equal);
        assert!(cmp.family_topology.is_discrete());

        let i = FiniteTopology::indiscrete(PointSet::from_names(["a", "b"]).unwrap());
        let cmp = graev_family_topology_on_inverse(&i, DEFAULT_FAMILY_CAP).unwrap();
        assert!(cmp.included && cmp.equal);
        assert_eq!(cmp.family_topology.opens(), &[Subset::EMPTY, Subset(0b11)]);
    }

    #[test]
    fn parse_and_render() {
        let text = "points: a b\nopen: a\nopen: a b\n";
        let space = parse_topology(text, "s.txt").unwrap();
        assert_eq!(space, sierpinski());
        assert_eq!(render_topology(&space), text);

        let err = parse_topology("points: a b\nopen: q\n", "s.txt").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_topology("points: a b\nopen: a\n", "s.txt").unwrap_err();
        assert!(err.message.contains("full"));
    }
}
