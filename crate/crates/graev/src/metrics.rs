//! Quasi-pseudometrics with exact rational values.
//!
//! A quasi-pseudometric has zero diagonal and satisfies the triangle
//! inequality; symmetry is not required and zero distances between distinct
//! points are allowed. Everything here is exact `Ratio<i64>` arithmetic so
//! equality tests against independently computed values are bit-exact.
//!
//! The alphabet extension `d*` follows the two-step construction: `d_e`
//! adjoins the identity at distance 1, then `d*` covers the inverse copy by
//! `d*(x⁻¹, y⁻¹) = d_e(y, x)` and assigns 2 to the remaining mixed-sign
//! pairs.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::topology::{FiniteTopology, ParseError, Subset};
use crate::words::{Letter, PointId, PointSet};

/// Exact rational scalar used for every distance and prenorm value.
pub type Rat = Ratio<i64>;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(numer, denom)
}

/// Parses `p/q` or a plain integer.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            if q == 0 {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => text.parse::<i64>().ok().map(Rat::from_integer),
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum MetricError {
    #[error("distance table is {rows}x{cols}, expected square over {points} points")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        points: usize,
    },
    #[error("negative entry d({x}, {y}) = {value}")]
    NegativeEntry { x: String, y: String, value: Rat },
    #[error("nonzero diagonal d({x}, {x}) = {value}")]
    ZeroDiagonalViolation { x: String, value: Rat },
    #[error("triangle violated: d({x}, {y}) = {lhs} > d({x}, {z}) + d({z}, {y}) = {rhs}")]
    TriangleViolation {
        x: String,
        z: String,
        y: String,
        lhs: Rat,
        rhs: Rat,
    },
    #[error("metric is not bounded by 1: d({x}, {y}) = {value}")]
    NotBoundedByOne { x: String, y: String, value: Rat },
    #[error("subset is not open in the given topology")]
    NotOpen,
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("cannot combine an empty family of metrics")]
    EmptyFamily,
    #[error("metrics in the family live on different point sets")]
    PointSetMismatch,
    #[error("denominators too large for exact scaled arithmetic")]
    DenominatorOverflow,
}

/// Every axiom violation found while validating a raw table.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<MetricError>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A validated quasi-pseudometric on a finite point set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuasiPseudometric {
    points: PointSet,
    dist: Vec<Rat>, // row-major k×k
}

impl QuasiPseudometric {
    /// Validates a raw table, reporting every violated axiom instance.
    /// Whether the metric is bounded by 1 is not an axiom and is checked
    /// separately by consumers that need it.
    pub fn validate(points: PointSet, table: Vec<Vec<Rat>>) -> Result<Self, ValidationReport> {
        let k = points.len();
        let mut violations = Vec::new();
        if table.len() != k || table.iter().any(|row| row.len() != k) {
            violations.push(MetricError::ShapeMismatch {
                rows: table.len(),
                cols: table.first().map_or(0, |r| r.len()),
                points: k,
            });
            return Err(ValidationReport { violations });
        }
        for x in 0..k {
            for y in 0..k {
                if table[x][y].is_negative() {
                    violations.push(MetricError::NegativeEntry {
                        x: points.name(PointId(x as u32)).to_string(),
                        y: points.name(PointId(y as u32)).to_string(),
                        value: table[x][y],
                    });
                }
            }
            if !table[x][x].is_zero() {
                violations.push(MetricError::ZeroDiagonalViolation {
                    x: points.name(PointId(x as u32)).to_string(),
                    value: table[x][x],
                });
            }
        }
        for x in 0..k {
            for z in 0..k {
                for y in 0..k {
                    let rhs = table[x][z] + table[z][y];
                    if table[x][y] > rhs {
                        violations.push(MetricError::TriangleViolation {
                            x: points.name(PointId(x as u32)).to_string(),
                            z: points.name(PointId(z as u32)).to_string(),
                            y: points.name(PointId(y as u32)).to_string(),
                            lhs: table[x][y],
                            rhs,
                        });
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(ValidationReport { violations });
        }
        let dist = table.into_iter().flatten().collect();
        Ok(QuasiPseudometric { points, dist })
    }

    /// The zero quasi-pseudometric.
    pub fn zero(points: PointSet) -> Self {
        let k = points.len();
        QuasiPseudometric {
            points,
            dist: vec![Rat::zero(); k * k],
        }
    }

    /// d = 1 between all distinct points.
    pub fn discrete(points: PointSet) -> Self {
        let k = points.len();
        let mut dist = vec![Rat::one(); k * k];
        for x in 0..k {
            dist[x * k + x] = Rat::zero();
        }
        QuasiPseudometric { points, dist }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn get(&self, x: PointId, y: PointId) -> Rat {
        self.dist[x.0 as usize * self.points.len() + y.0 as usize]
    }

    pub fn is_bounded_by_one(&self) -> bool {
        self.dist.iter().all(|v| *v <= Rat::one())
    }

    /// Entrywise `min(d, 1)`; capping preserves the axioms.
    pub fn cap_at_one(&self) -> QuasiPseudometric {
        let dist = self
            .dist
            .iter()
            .map(|v| if *v > Rat::one() { Rat::one() } else { *v })
            .collect();
        QuasiPseudometric {
            points: self.points.clone(),
            dist,
        }
    }

    /// Entrywise comparison; both metrics must share the point set.
    pub fn le(&self, other: &QuasiPseudometric) -> bool {
        self.points == other.points
            && self.dist.iter().zip(&other.dist).all(|(a, b)| a <= b)
    }

    /// Distinct values of the table plus one value above the maximum:
    /// the only ball radii at which anything changes.
    pub fn thresholds(&self) -> Vec<Rat> {
        let mut values: BTreeSet<Rat> = self.dist.iter().copied().collect();
        let above = values
            .iter()
            .next_back()
            .copied()
            .unwrap_or_else(Rat::zero)
            + Rat::one();
        values.insert(above);
        values.into_iter().collect()
    }

    /// The ball `{y : d(x, y) < radius}` as a subset mask.
    pub fn ball(&self, x: PointId, radius: Rat) -> Subset {
        let mut mask = Subset::EMPTY;
        for y in self.points.ids() {
            if self.get(x, y) < radius {
                mask = mask.insert(y);
            }
        }
        mask
    }

    /// The topology on the point set generated by all balls of the metric.
    pub fn ball_topology(&self) -> FiniteTopology {
        let mut subbase = Vec::new();
        for x in self.points.ids() {
            for radius in self.thresholds() {
                if radius > Rat::zero() {
                    subbase.push(self.ball(x, radius));
                }
            }
        }
        crate::topology::topology_from_subbase(self.points.clone(), &subbase)
    }

    /// Stable identity of the table, for deduplication.
    pub fn table_key(&self) -> Vec<(i64, i64)> {
        self.dist.iter().map(|v| (*v.numer(), *v.denom())).collect()
    }
}

/// Result of an upper semi-continuity check, with a witness ball on failure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UscCheck {
    pub ok: bool,
    pub witness: Option<UscWitness>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UscWitness {
    pub center: PointId,
    pub radius: Rat,
    pub ball: Subset,
}

/// `d_x` is upper semi-continuous for every `x` iff every ball
/// `B_d(x, ε)` is open; on a finite space it is enough to test thresholds
/// at the distinct table values plus one value above the maximum.
pub fn check_usc(metric: &QuasiPseudometric, space: &FiniteTopology) -> UscCheck {
    debug_assert_eq!(metric.points(), space.points());
    for x in metric.points().ids() {
        for radius in metric.thresholds() {
            let ball = metric.ball(x, radius);
            if !space.is_open(ball) {
                return UscCheck {
                    ok: false,
                    witness: Some(UscWitness {
                        center: x,
                        radius,
                        ball,
                    }),
                };
            }
        }
    }
    UscCheck {
        ok: true,
        witness: None,
    }
}

/// `ρ_U(x, y) = 1` when `x ∈ U` and `y ∉ U`, else 0. Requires `U` open.
pub fn rho_from_open_set(
    open: Subset,
    space: &FiniteTopology,
) -> Result<QuasiPseudometric, MetricError> {
    if !space.is_open(open) {
        return Err(MetricError::NotOpen);
    }
    let points = space.points().clone();
    let k = points.len();
    let mut dist = vec![Rat::zero(); k * k];
    for x in points.ids() {
        for y in points.ids() {
            if open.contains(x) && !open.contains(y) {
                dist[x.0 as usize * k + y.0 as usize] = Rat::one();
            }
        }
    }
    Ok(QuasiPseudometric { points, dist })
}

/// The two-part metric from the neighbourhood-base construction:
/// `d(x, y) = 1` iff `x ≠ x_j ∧ y = x_j` or `x ∈ U_i ∧ y ∉ U_i`.
///
/// Requires a T₁ space, distinct points `x_i ≠ x_j`, and an open `U_i` with
/// `x_i ∈ U_i`, `x_j ∉ U_i`.
pub fn joiner_dij(
    space: &FiniteTopology,
    x_i: PointId,
    x_j: PointId,
    u_i: Subset,
) -> Result<QuasiPseudometric, MetricError> {
    if !space.is_t1() {
        return Err(MetricError::PreconditionViolation(
            "space is not T1".to_string(),
        ));
    }
    if x_i == x_j {
        return Err(MetricError::PreconditionViolation(format!(
            "points coincide: {}",
            space.points().name(x_i)
        )));
    }
    if !space.is_open(u_i) {
        return Err(MetricError::NotOpen);
    }
    if !u_i.contains(x_i) {
        return Err(MetricError::PreconditionViolation(format!(
            "{} is not in U_i",
            space.points().name(x_i)
        )));
    }
    if u_i.contains(x_j) {
        return Err(MetricError::PreconditionViolation(format!(
            "{} must not be in U_i",
            space.points().name(x_j)
        )));
    }
    Ok(point_pair_metric(space.points().clone(), x_j, Some(u_i)))
}

/// Builds the raw `d_{i,j}`-shaped table: the `y = target` disjunct plus an
/// optional `x ∈ U ∧ y ∉ U` disjunct.
pub(crate) fn point_pair_metric(
    points: PointSet,
    target: PointId,
    open: Option<Subset>,
) -> QuasiPseudometric {
    let k = points.len();
    let mut dist = vec![Rat::zero(); k * k];
    for x in points.ids() {
        for y in points.ids() {
            let first = x != target && y == target;
            let second = open.is_some_and(|u| u.contains(x) && !u.contains(y));
            if first || second {
                dist[x.0 as usize * k + y.0 as usize] = Rat::one();
            }
        }
    }
    QuasiPseudometric { points, dist }
}

/// Pointwise maximum of a non-empty family on a common point set. The
/// maximum of quasi-pseudometrics is again one, and it stays bounded by 1
/// and keeps upper semi-continuous sections when all members do.
pub fn max_combine(family: &[QuasiPseudometric]) -> Result<QuasiPseudometric, MetricError> {
    let first = family.first().ok_or(MetricError::EmptyFamily)?;
    if family.iter().any(|m| m.points != first.points) {
        return Err(MetricError::PointSetMismatch);
    }
    let mut dist = first.dist.clone();
    for metric in &family[1..] {
        for (acc, v) in dist.iter_mut().zip(&metric.dist) {
            if v > acc {
                *acc = *v;
            }
        }
    }
    Ok(QuasiPseudometric {
        points: first.points.clone(),
        dist,
    })
}

/// Index into the extended alphabet `X̃`: 0 is the identity, `1..=k` the
/// points, `k+1..=2k` their inverses.
pub(crate) fn alphabet_index(letter: Letter, k: usize) -> usize {
    match letter {
        Letter::E => 0,
        Letter::Gen(id) => 1 + id.0 as usize,
        Letter::Inv(id) => 1 + k + id.0 as usize,
    }
}

pub(crate) fn alphabet_inverse(index: usize, k: usize) -> usize {
    if index == 0 {
        0
    } else if index <= k {
        index + k
    } else {
        index - k
    }
}

pub(crate) fn alphabet_letter(index: usize, k: usize) -> Letter {
    if index == 0 {
        Letter::E
    } else if index <= k {
        Letter::Gen(PointId((index - 1) as u32))
    } else {
        Letter::Inv(PointId((index - 1 - k) as u32))
    }
}

/// The extension of a bounded quasi-pseudometric to the alphabet
/// `X̃ = X ∪ {e} ∪ X⁻¹`, carrying both `d_e` and `d*`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtendedMetric {
    base: QuasiPseudometric,
    table: Vec<Rat>, // row-major (2k+1)×(2k+1), indexed by alphabet_index
}

impl ExtendedMetric {
    /// Builds `d*` from a quasi-pseudometric bounded by 1.
    pub fn extend_dstar(base: QuasiPseudometric) -> Result<Self, MetricError> {
        let k = base.points.len();
        for x in base.points.ids() {
            for y in base.points.ids() {
                let v = base.get(x, y);
                if v > Rat::one() {
                    return Err(MetricError::NotBoundedByOne {
                        x: base.points.name(x).to_string(),
                        y: base.points.name(y).to_string(),
                        value: v,
                    });
                }
            }
        }
        let size = 2 * k + 1;
        let mut table = vec![Rat::zero(); size * size];
        for a in 0..size {
            for b in 0..size {
                table[a * size + b] = dstar_value(&base, k, a, b);
            }
        }
        Ok(ExtendedMetric { base, table })
    }

    pub fn base(&self) -> &QuasiPseudometric {
        &self.base
    }

    pub fn points(&self) -> &PointSet {
        &self.base.points
    }

    pub fn alphabet_size(&self) -> usize {
        2 * self.base.points.len() + 1
    }

    /// `d*` between two letters of the extended alphabet.
    pub fn dstar(&self, x: Letter, y: Letter) -> Rat {
        let k = self.base.points.len();
        self.table[alphabet_index(x, k) * self.alphabet_size() + alphabet_index(y, k)]
    }

    pub(crate) fn dstar_by_index(&self, a: usize, b: usize) -> Rat {
        self.table[a * self.alphabet_size() + b]
    }

    /// `d_e` on `X ∪ {e}`: 0 on the diagonal, `d` on `X × X`, 1 otherwise.
    pub fn de(&self, x: Letter, y: Letter) -> Rat {
        match (x, y) {
            _ if x == y => Rat::zero(),
            (Letter::Gen(a), Letter::Gen(b)) => self.base.get(a, b),
            (Letter::E, Letter::Gen(_)) | (Letter::Gen(_), Letter::E) => Rat::one(),
            _ => panic!("d_e is defined on X ∪ {{e}} only"),
        }
    }

    /// Validates the extension as a quasi-pseudometric on the whole
    /// alphabet.
    pub fn validate_on_alphabet(&self) -> Result<(), ValidationReport> {
        let size = self.alphabet_size();
        let k = self.base.points.len();
        let mut names = PointSet::new();
        for idx in 0..size {
            let letter = alphabet_letter(idx, k);
            let name = match letter {
                Letter::E => "id".to_string(),
                Letter::Gen(p) => self.base.points.name(p).to_string(),
                Letter::Inv(p) => format!("inv_{}", self.base.points.name(p)),
            };
            names.intern(&name).expect("synthetic names are valid");
        }
        let table: Vec<Vec<Rat>> = (0..size)
            .map(|a| (0..size).map(|b| self.table[a * size + b]).collect())
            .collect();
        QuasiPseudometric::validate(names, table).map(|_| ())
    }
}

fn dstar_value(base: &QuasiPseudometric, k: usize, a: usize, b: usize) -> Rat {
    if a == b {
        return Rat::zero();
    }
    let in_lower = |i: usize| i <= k; // X ∪ {e}
    let in_upper = |i: usize| i == 0 || i > k; // X⁻¹ ∪ {e}
    if in_lower(a) && in_lower(b) {
        return de_value(base, k, a, b);
    }
    if in_upper(a) && in_upper(b) {
        // d*(x, y) = d_e(y⁻¹, x⁻¹)
        return de_value(base, k, alphabet_inverse(b, k), alphabet_inverse(a, k));
    }
    Rat::from_integer(2)
}

fn de_value(base: &QuasiPseudometric, _k: usize, a: usize, b: usize) -> Rat {
    if a == b {
        Rat::zero()
    } else if a > 0 && b > 0 {
        base.get(PointId((a - 1) as u32), PointId((b - 1) as u32))
    } else {
        Rat::one()
    }
}

/// Integer-scaled pair costs over a common denominator, for the hot
/// minimization loops. `pair[a][b]` is the numerator of
/// `d*(a⁻¹, b) + d*(b⁻¹, a)` over `denom = 2·lcm(table denominators)`,
/// i.e. the exact cost one matched pair contributes to `Γ_d`.
#[derive(Clone, Debug)]
pub(crate) struct PairCostTable {
    pub size: usize,
    pub denom: i64,
    pub pair: Vec<i64>,
}

impl PairCostTable {
    pub fn build(ext: &ExtendedMetric) -> Result<Self, MetricError> {
        let size = ext.alphabet_size();
        let k = ext.base.points.len();
        let mut lcm: i64 = 1;
        for v in &ext.table {
            lcm = checked_lcm(lcm, *v.denom()).ok_or(MetricError::DenominatorOverflow)?;
        }
        if lcm > (1 << 32) {
            return Err(MetricError::DenominatorOverflow);
        }
        let scaled: Vec<i64> = ext
            .table
            .iter()
            .map(|v| v.numer() * (lcm / v.denom()))
            .collect();
        let mut pair = vec![0i64; size * size];
        for a in 0..size {
            for b in 0..size {
                let ia = alphabet_inverse(a, k);
                let ib = alphabet_inverse(b, k);
                pair[a * size + b] = scaled[ia * size + b] + scaled[ib * size + a];
            }
        }
        Ok(PairCostTable {
            size,
            denom: 2 * lcm,
            pair,
        })
    }

    #[inline]
    pub fn cost(&self, a: usize, b: usize) -> i64 {
        self.pair[a * self.size + b]
    }

    /// Cost of matching the letter at index `a` against an inserted
    /// identity letter.
    #[inline]
    pub fn e_cost(&self, a: usize) -> i64 {
        self.cost(a, 0)
    }

    pub fn to_rat(&self, scaled: i64) -> Rat {
        Rat::new(scaled, self.denom)
    }
}

fn checked_lcm(a: i64, b: i64) -> Option<i64> {
    let g = a.gcd(&b);
    (a / g).checked_mul(b)
}

/// Parses the metric file format:
///
/// ```text
/// points: a b c
/// a b = 1/2
/// b a = 1
/// ```
///
/// Without `sparse`, every off-diagonal ordered pair must be present;
/// diagonal entries may be given but must be 0. With `sparse`, omitted
/// pairs default to 0.
pub fn parse_metric(
    text: &str,
    source: &str,
    sparse: bool,
) -> Result<QuasiPseudometric, ParseError> {
    let mut points: Option<PointSet> = None;
    let mut entries: Vec<(PointId, PointId, Rat, usize)> = Vec::new();
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
            continue;
        }
        let set = points
            .as_ref()
            .ok_or_else(|| ParseError::new(source, lineno, "entry before `points:` line"))?;
        let (pair, value) = line
            .split_once('=')
            .ok_or_else(|| ParseError::new(source, lineno, "expected `x y = value`"))?;
        let mut names = pair.split_whitespace();
        let (x, y) = match (names.next(), names.next(), names.next()) {
            (Some(x), Some(y), None) => (x, y),
            _ => return Err(ParseError::new(source, lineno, "expected `x y = value`")),
        };
        let x = set
            .id(x)
            .ok_or_else(|| ParseError::new(source, lineno, format!("unknown point `{x}`")))?;
        let y = set
            .id(y)
            .ok_or_else(|| ParseError::new(source, lineno, format!("unknown point `{y}`")))?;
        let value = parse_rat(value)
            .ok_or_else(|| ParseError::new(source, lineno, format!("bad rational `{}`", value.trim())))?;
        if entries.iter().any(|(a, b, _, _)| (*a, *b) == (x, y)) {
            return Err(ParseError::new(
                source,
                lineno,
                format!("duplicate pair `{} {}`", set.name(x), set.name(y)),
            ));
        }
        entries.push((x, y, value, lineno));
    }
    let points = points.ok_or_else(|| ParseError::new(source, 0, "missing `points:` line"))?;
    let k = points.len();
    let mut table = vec![vec![Rat::zero(); k]; k];
    let mut present = vec![vec![false; k]; k];
    for (x, y, value, _) in &entries {
        table[x.0 as usize][y.0 as usize] = *value;
        present[x.0 as usize][y.0 as usize] = true;
    }
    if !sparse {
        for x in 0..k {
            for y in 0..k {
                if x != y && !present[x][y] {
                    return Err(ParseError::new(
                        source,
                        0,
                        format!(
                            "missing pair `{} {}` (use sparse mode for implicit zeros)",
                            points.name(PointId(x as u32)),
                            points.name(PointId(y as u32))
                        ),
                    ));
                }
            }
        }
    }
    QuasiPseudometric::validate(points, table).map_err(|report| {
        let first = report
            .violations
            .first()
            .map(|v| v.to_string())
            .unwrap_or_else(|| "invalid metric".to_string());
        ParseError::new(source, 0, first)
    })
}

/// Renders a metric in its file format, listing every nonzero entry.
pub fn render_metric(metric: &QuasiPseudometric) -> String {
    let mut out = format!("points: {}\n", metric.points());
    for x in metric.points().ids() {
        for y in metric.points().ids() {
            let v = metric.get(x, y);
            if !v.is_zero() {
                out.push_str(&format!(
                    "{} {} = {}\n",
                    metric.points().name(x),
                    metric.points().name(y),
                    v
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{enumerate_topologies, FiniteTopology};

    fn two() -> PointSet {
        PointSet::from_names(["a", "b"]).unwrap()
    }

    fn sierpinski_rho() -> QuasiPseudometric {
        let space = FiniteTopology::sierpinski("a", "b");
        rho_from_open_set(Subset(0b01), &space).unwrap()
    }

    #[test]
    fn validate_accepts_and_reports() {
        let ok = QuasiPseudometric::validate(
            two(),
            vec![
                vec![rat(0, 1), rat(1, 1)],
                vec![rat(1, 1), rat(0, 1)],
            ],
        )
        .unwrap();
        assert!(ok.is_bounded_by_one());

        let three = PointSet::from_names(["a", "b", "c"]).unwrap();
        let report = QuasiPseudometric::validate(
            three,
            vec![
                vec![rat(0, 1), rat(1, 1), rat(3, 1)],
                vec![rat(1, 1), rat(0, 1), rat(1, 1)],
                vec![rat(1, 1), rat(1, 1), rat(0, 1)],
            ],
        )
        .unwrap_err();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            MetricError::TriangleViolation { x, z, y, .. }
                if x == "a" && z == "b" && y == "c"
        )));

        // Asymmetry is allowed: the Sierpiński ρ validates.
        let rho = sierpinski_rho();
        assert_eq!(rho.get(PointId(0), PointId(1)), Rat::one());
        assert_eq!(rho.get(PointId(1), PointId(0)), Rat::zero());
    }

    #[test]
    fn dstar_cases() {
        let half = QuasiPseudometric::validate(
            two(),
            vec![
                vec![rat(0, 1), rat(1, 2)],
                vec![rat(1, 2), rat(0, 1)],
            ],
        )
        .unwrap();
        let ext = ExtendedMetric::extend_dstar(half).unwrap();
        let a = Letter::Gen(PointId(0));
        let b = Letter::Gen(PointId(1));
        assert_eq!(ext.dstar(a, b), rat(1, 2));
        assert_eq!(ext.dstar(a, b.inverse()), rat(2, 1));
        assert_eq!(ext.dstar(b.inverse(), a.inverse()), rat(1, 2));
        assert_eq!(ext.dstar(a, Letter::E), Rat::one());
        assert_eq!(ext.dstar(Letter::E, a.inverse()), Rat::one());
        assert_eq!(ext.dstar(a.inverse(), a.inverse()), Rat::zero());
    }

    #[test]
    fn dstar_requires_bounded() {
        let big = QuasiPseudometric::validate(
            two(),
            vec![
                vec![rat(0, 1), rat(3, 2)],
                vec![rat(3, 2), rat(0, 1)],
            ],
        )
        .unwrap();
        assert!(matches!(
            ExtendedMetric::extend_dstar(big.clone()),
            Err(MetricError::NotBoundedByOne { .. })
        ));
        assert!(ExtendedMetric::extend_dstar(big.cap_at_one()).is_ok());
    }

    #[test]
    fn dstar_is_a_quasi_pseudometric_and_mirrors_de() {
        let space = FiniteTopology::sierpinski("a", "b");
        for &open in space.opens() {
            let rho = rho_from_open_set(open, &space).unwrap();
            let ext = ExtendedMetric::extend_dstar(rho).unwrap();
            assert!(ext.validate_on_alphabet().is_ok());
            // d*(x⁻¹, y⁻¹) = d_e(y, x) on X ∪ {e}.
            let letters = [Letter::E, Letter::Gen(PointId(0)), Letter::Gen(PointId(1))];
            for &x in &letters {
                for &y in &letters {
                    assert_eq!(ext.dstar(x.inverse(), y.inverse()), ext.de(y, x));
                }
            }
        }
    }

    #[test]
    fn rho_cases() {
        let space = FiniteTopology::sierpinski("a", "b");
        let rho = rho_from_open_set(Subset(0b01), &space).unwrap();
        assert_eq!(rho.get(PointId(0), PointId(1)), Rat::one());
        assert_eq!(rho.get(PointId(1), PointId(0)), Rat::zero());

        let zero = rho_from_open_set(Subset(0b11), &space).unwrap();
        assert_eq!(zero, QuasiPseudometric::zero(space.points().clone()));
        let zero = rho_from_open_set(Subset::EMPTY, &space).unwrap();
        assert_eq!(zero, QuasiPseudometric::zero(space.points().clone()));

        assert!(matches!(
            rho_from_open_set(Subset(0b10), &space),
            Err(MetricError::NotOpen)
        ));
    }

    #[test]
    fn dij_clauses() {
        let space = FiniteTopology::discrete(PointSet::from_names(["a", "b", "c"]).unwrap());
        let (a, b) = (PointId(0), PointId(1));
        let u = Subset::singleton(a).insert(PointId(2));
        let d = joiner_dij(&space, a, b, u).unwrap();
        for x in space.points().ids() {
            assert_eq!(d.get(a, x).is_zero(), u.contains(x));
            assert_eq!(d.get(x, b).is_zero(), x == b);
        }
        assert_eq!(d.get(a, b), Rat::one());
        assert!(check_usc(&d, &space).ok);

        assert!(joiner_dij(&space, a, a, u).is_err());
        assert!(joiner_dij(&space, a, b, Subset::singleton(b)).is_err());
        let sier = FiniteTopology::sierpinski("a", "b");
        assert!(matches!(
            joiner_dij(&sier, PointId(0), PointId(1), Subset(0b01)),
            Err(MetricError::PreconditionViolation(_))
        ));
    }

    #[test]
    fn dij_matches_alternative_formula() {
        // The same function has a second, case-split definition; check the
        // two agree everywhere on a discrete 4-point space.
        let space = FiniteTopology::discrete(
            PointSet::from_names(["a", "b", "c", "d"]).unwrap(),
        );
        let (a, b) = (PointId(0), PointId(1));
        for u_bits in 0u32..16 {
            let u = Subset(u_bits);
            if !u.contains(a) || u.contains(b) {
                continue;
            }
            let d = joiner_dij(&space, a, b, u).unwrap();
            for x in space.points().ids() {
                for y in space.points().ids() {
                    let zero = (u.contains(x) && u.contains(y))
                        || x == b
                        || (!u.contains(x) && x != b && y != b);
                    assert_eq!(d.get(x, y).is_zero(), zero);
                }
            }
        }
    }

    #[test]
    fn max_combine_cases() {
        let space = FiniteTopology::sierpinski("a", "b");
        let rho = sierpinski_rho();
        let zero = QuasiPseudometric::zero(space.points().clone());
        assert_eq!(max_combine(&[rho.clone()]).unwrap(), rho);
        assert_eq!(max_combine(&[rho.clone(), zero]).unwrap(), rho);

        // Two d_{i,j} on a discrete 2-point space give the discrete metric.
        let discrete = FiniteTopology::discrete(two());
        let d12 = joiner_dij(&discrete, PointId(0), PointId(1), Subset(0b01)).unwrap();
        let d21 = joiner_dij(&discrete, PointId(1), PointId(0), Subset(0b10)).unwrap();
        let combined = max_combine(&[d12, d21]).unwrap();
        assert_eq!(combined, QuasiPseudometric::discrete(two()));

        assert!(matches!(max_combine(&[]), Err(MetricError::EmptyFamily)));
        let other = QuasiPseudometric::zero(PointSet::from_names(["x"]).unwrap());
        assert!(matches!(
            max_combine(&[rho, other]),
            Err(MetricError::PointSetMismatch)
        ));
    }

    #[test]
    fn max_combine_of_rho_family_stays_valid() {
        let points = PointSet::from_names(["a", "b", "c"]).unwrap();
        for space in enumerate_topologies(&points).unwrap() {
            let rhos: Vec<QuasiPseudometric> = space
                .opens()
                .iter()
                .map(|&u| rho_from_open_set(u, &space).unwrap())
                .collect();
            for x in &rhos {
                for y in &rhos {
                    let combined = max_combine(&[x.clone(), y.clone()]).unwrap();
                    let table: Vec<Vec<Rat>> = (0..3)
                        .map(|i| (0..3).map(|j| combined.get(PointId(i), PointId(j))).collect())
                        .collect();
                    assert!(QuasiPseudometric::validate(points.clone(), table).is_ok());
                    assert!(check_usc(&combined, &space).ok);
                }
            }
        }
    }

    #[test]
    fn usc_examples() {
        let space = FiniteTopology::sierpinski("a", "b");
        assert!(check_usc(&sierpinski_rho(), &space).ok);

        // The reversed metric has a non-open ball around b.
        let sigma = QuasiPseudometric::validate(
            two(),
            vec![
                vec![rat(0, 1), rat(0, 1)],
                vec![rat(1, 1), rat(0, 1)],
            ],
        )
        .unwrap();
        let check = check_usc(&sigma, &space);
        assert!(!check.ok);
        let witness = check.witness.unwrap();
        assert_eq!(witness.center, PointId(1));
        assert_eq!(witness.ball, Subset(0b10));

        let discrete = FiniteTopology::discrete(two());
        assert!(check_usc(&sigma, &discrete).ok);
    }

    #[test]
    fn metric_file_round_trip() {
        let text = "points: a b\na b = 1/2\nb a = 1\n";
        let metric = parse_metric(text, "m.txt", false).unwrap();
        assert_eq!(metric.get(PointId(0), PointId(1)), rat(1, 2));
        assert_eq!(render_metric(&metric), text);

        let err = parse_metric("points: a b\na b = 1\n", "m.txt", false).unwrap_err();
        assert!(err.message.contains("missing pair"));
        assert!(parse_metric("points: a b\na b = 1\n", "m.txt", true).is_ok());
        let err = parse_metric("points: a b\na b = x\nb a = 1\n", "m.txt", false).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn pair_cost_table_matches_rational_arithmetic() {
        let metric = QuasiPseudometric::validate(
            two(),
            vec![
                vec![rat(0, 1), rat(1, 3)],
                vec![rat(2, 3), rat(0, 1)],
            ],
        )
        .unwrap();
        let ext = ExtendedMetric::extend_dstar(metric).unwrap();
        let costs = PairCostTable::build(&ext).unwrap();
        let k = 2;
        for a in 0..costs.size {
            for b in 0..costs.size {
                let la = alphabet_letter(a, k);
                let lb = alphabet_letter(b, k);
                let expected = (ext.dstar(la.inverse(), lb) + ext.dstar(lb.inverse(), la))
                    / rat(2, 1);
                assert_eq!(costs.to_rat(costs.cost(a, b)), expected);
            }
        }
    }
}
