//! Temporal relations in endpoint normal form.
//!
//! The relation between two intervals X and Y is captured by four order
//! slots comparing their endpoints: start(X) vs start(Y), start(X) vs
//! end(Y), end(X) vs start(Y), and end(X) vs end(Y). Each slot is before
//! (`<`), after (`>`), equal (`=`), or undefined. A fully defined, mutually
//! consistent tuple names one of the 13 interval relations; tuples with
//! undefined slots express the vague relations that human annotation
//! produces ("before or overlapping", "they intersect somehow", MATRES-style
//! start-point orders, ...).
//!
//! [`TemporalRelation`] is the type the rest of the crate exchanges: a
//! tuple kept saturated (every slot that is entailed by the others is filled
//! in) plus the source label it was parsed from, if any. Two relations
//! compare equal when their tuples agree; the provenance label never
//! participates in equality.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Order between two interval endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointOrder {
    Before,
    After,
    Equal,
    Undefined,
}

impl PointOrder {
    /// The order seen from the other side: `a < b` becomes `b > a`.
    pub fn reverse(self) -> PointOrder {
        match self {
            PointOrder::Before => PointOrder::After,
            PointOrder::After => PointOrder::Before,
            PointOrder::Equal => PointOrder::Equal,
            PointOrder::Undefined => PointOrder::Undefined,
        }
    }

    pub fn is_defined(self) -> bool {
        self != PointOrder::Undefined
    }

    /// Symbol used by the interchange formats; `None` for undefined.
    pub fn symbol(self) -> Option<&'static str> {
        match self {
            PointOrder::Before => Some("<"),
            PointOrder::After => Some(">"),
            PointOrder::Equal => Some("="),
            PointOrder::Undefined => None,
        }
    }

    /// Inverse of [`PointOrder::symbol`]; accepts `None`/empty for undefined.
    pub fn from_symbol(s: Option<&str>) -> Option<PointOrder> {
        match s {
            None | Some("") => Some(PointOrder::Undefined),
            Some("<") => Some(PointOrder::Before),
            Some(">") => Some(PointOrder::After),
            Some("=") => Some(PointOrder::Equal),
            _ => None,
        }
    }
}

impl fmt::Display for PointOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol().unwrap_or("."))
    }
}

/// The four order slots between the endpoints of a source interval X and a
/// target interval Y. Field names read "x-start vs y-start" and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointRelation {
    pub xs_ys: PointOrder,
    pub xs_ye: PointOrder,
    pub xe_ys: PointOrder,
    pub xe_ye: PointOrder,
}

impl PointRelation {
    pub fn new(xs_ys: PointOrder, xs_ye: PointOrder, xe_ys: PointOrder, xe_ye: PointOrder) -> Self {
        PointRelation {
            xs_ys,
            xs_ye,
            xe_ys,
            xe_ye,
        }
    }

    /// All four slots undefined.
    pub fn vague() -> Self {
        PointRelation::new(
            PointOrder::Undefined,
            PointOrder::Undefined,
            PointOrder::Undefined,
            PointOrder::Undefined,
        )
    }

    pub fn as_array(self) -> [PointOrder; 4] {
        [self.xs_ys, self.xs_ye, self.xe_ys, self.xe_ye]
    }

    pub fn from_array(a: [PointOrder; 4]) -> Self {
        PointRelation::new(a[0], a[1], a[2], a[3])
    }

    pub fn defined_slots(self) -> usize {
        self.as_array().iter().filter(|o| o.is_defined()).count()
    }

    pub fn is_complete(self) -> bool {
        self.defined_slots() == 4
    }

    /// The tuple seen from the target's side: swap the roles of X and Y and
    /// reverse every order. The cross slots trade places.
    pub fn invert(self) -> Self {
        PointRelation::new(
            self.xs_ys.reverse(),
            self.xe_ys.reverse(),
            self.xs_ye.reverse(),
            self.xe_ye.reverse(),
        )
    }
}

impl fmt::Display for PointRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.xs_ys, self.xs_ye, self.xe_ys, self.xe_ye
        )
    }
}

/// The 13 relations between two intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntervalRelation {
    Before,
    After,
    Meets,
    MetBy,
    Overlaps,
    OverlappedBy,
    Starts,
    StartedBy,
    Finishes,
    FinishedBy,
    During,
    Contains,
    Equal,
}

impl IntervalRelation {
    pub const ALL: [IntervalRelation; 13] = [
        IntervalRelation::Before,
        IntervalRelation::After,
        IntervalRelation::Meets,
        IntervalRelation::MetBy,
        IntervalRelation::Overlaps,
        IntervalRelation::OverlappedBy,
        IntervalRelation::Starts,
        IntervalRelation::StartedBy,
        IntervalRelation::Finishes,
        IntervalRelation::FinishedBy,
        IntervalRelation::During,
        IntervalRelation::Contains,
        IntervalRelation::Equal,
    ];

    /// The same relation read from the other interval's side.
    pub fn inverse(self) -> IntervalRelation {
        match self {
            IntervalRelation::Before => IntervalRelation::After,
            IntervalRelation::After => IntervalRelation::Before,
            IntervalRelation::Meets => IntervalRelation::MetBy,
            IntervalRelation::MetBy => IntervalRelation::Meets,
            IntervalRelation::Overlaps => IntervalRelation::OverlappedBy,
            IntervalRelation::OverlappedBy => IntervalRelation::Overlaps,
            IntervalRelation::Starts => IntervalRelation::StartedBy,
            IntervalRelation::StartedBy => IntervalRelation::Starts,
            IntervalRelation::Finishes => IntervalRelation::FinishedBy,
            IntervalRelation::FinishedBy => IntervalRelation::Finishes,
            IntervalRelation::During => IntervalRelation::Contains,
            IntervalRelation::Contains => IntervalRelation::During,
            IntervalRelation::Equal => IntervalRelation::Equal,
        }
    }

    /// True for the primary family (before, meets, overlaps, starts, during,
    /// finishes, equal); false for their inverses. Canonical output
    /// orientation keeps relations in the primary family.
    pub fn is_primary(self) -> bool {
        matches!(
            self,
            IntervalRelation::Before
                | IntervalRelation::Meets
                | IntervalRelation::Overlaps
                | IntervalRelation::Starts
                | IntervalRelation::During
                | IntervalRelation::Finishes
                | IntervalRelation::Equal
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            IntervalRelation::Before => "before",
            IntervalRelation::After => "after",
            IntervalRelation::Meets => "meets",
            IntervalRelation::MetBy => "met-by",
            IntervalRelation::Overlaps => "overlaps",
            IntervalRelation::OverlappedBy => "overlapped-by",
            IntervalRelation::Starts => "starts",
            IntervalRelation::StartedBy => "started-by",
            IntervalRelation::Finishes => "finishes",
            IntervalRelation::FinishedBy => "finished-by",
            IntervalRelation::During => "during",
            IntervalRelation::Contains => "contains",
            IntervalRelation::Equal => "equal",
        }
    }
}

impl fmt::Display for IntervalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Label conventions under which corpus relation labels are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// TimeML `relType` vocabulary (BEFORE, IS_INCLUDED, IBEFORE, ...).
    TimeML,
    /// Interval relation names plus the common coarse labels
    /// (VAGUE, OVERLAP, BEFORE-OR-OVERLAP, OVERLAP-OR-AFTER).
    Interval,
    /// Explicit slot assignment as a JSON object, e.g. `{"xe_ys": "<"}`.
    PointMap,
    /// Start-point vocabulary (BEFORE, AFTER, EQUAL, VAGUE) constraining
    /// only the order of the two start points, as used by MATRES-style
    /// distributions.
    MatresStartPoint,
}

impl Convention {
    pub const ALL: [Convention; 4] = [
        Convention::TimeML,
        Convention::Interval,
        Convention::PointMap,
        Convention::MatresStartPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Convention::TimeML => "timeml",
            Convention::Interval => "interval",
            Convention::PointMap => "point_map",
            Convention::MatresStartPoint => "matres_start_point",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = RelationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match normalize_label(s).as_str() {
            "timeml" => Ok(Convention::TimeML),
            "interval" => Ok(Convention::Interval),
            "pointmap" => Ok(Convention::PointMap),
            "matresstartpoint" | "matres" => Ok(Convention::MatresStartPoint),
            _ => Err(RelationError::UnknownConvention {
                name: s.to_owned(),
            }),
        }
    }
}

/// Errors raised by relation construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    /// The tuple admits no assignment of endpoint times.
    #[error("point tuple {0} admits no endpoint assignment")]
    Inconsistent(PointRelation),
    #[error("unknown relation label {label:?} under the {convention} convention")]
    UnknownLabel {
        label: String,
        convention: Convention,
    },
    #[error("malformed point map {input:?}: {reason}")]
    MalformedPointMap { input: String, reason: String },
    #[error("unknown relation convention {name:?} (expected timeml, interval, point_map, or matres_start_point)")]
    UnknownConvention { name: String },
}

/// A temporal relation: a saturated slot tuple plus the label it was parsed
/// from, kept for provenance only. Equality and hashing look at the tuple
/// alone, so SIMULTANEOUS and IDENTITY compare equal once normalized.
#[derive(Debug, Clone)]
pub struct TemporalRelation {
    point: PointRelation,
    label: Option<String>,
}

impl TemporalRelation {
    /// Saturate `point` and wrap it. Fails when the tuple is contradictory.
    pub fn new(point: PointRelation, label: Option<String>) -> Result<Self, RelationError> {
        Ok(TemporalRelation {
            point: saturate_point(point)?,
            label,
        })
    }

    /// Wrap a tuple that is already a saturation fixed point (as produced by
    /// the timegraph). Debug builds verify the claim.
    pub(crate) fn from_saturated(point: PointRelation) -> Self {
        debug_assert_eq!(saturate_point(point), Ok(point));
        TemporalRelation { point, label: None }
    }

    pub fn from_interval(r: IntervalRelation) -> Self {
        TemporalRelation {
            point: interval_to_point(r),
            label: None,
        }
    }

    pub fn point(&self) -> PointRelation {
        self.point
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The interval relation this tuple names, when all four slots are defined.
    pub fn interval(&self) -> Option<IntervalRelation> {
        interval_of_tuple(self.point)
    }

    pub fn is_complete(&self) -> bool {
        self.point.is_complete()
    }

    pub fn is_vague(&self) -> bool {
        self.point.defined_slots() == 0
    }

    /// Stable name for reporting: the interval relation name when complete,
    /// "vague" when nothing is defined, otherwise the tuple itself, e.g.
    /// `partial(<,<,.,<)`.
    pub fn canonical_name(&self) -> String {
        if let Some(r) = self.interval() {
            r.name().to_owned()
        } else if self.is_vague() {
            "vague".to_owned()
        } else {
            format!("partial{}", self.point)
        }
    }
}

impl PartialEq for TemporalRelation {
    fn eq(&self, other: &Self) -> bool {
        self.point == other.point
    }
}

impl Eq for TemporalRelation {}

impl std::hash::Hash for TemporalRelation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.point.hash(state);
    }
}

impl From<IntervalRelation> for TemporalRelation {
    fn from(r: IntervalRelation) -> Self {
        TemporalRelation::from_interval(r)
    }
}

impl fmt::Display for TemporalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_name())
    }
}

/// The fully defined slot tuple of an interval relation.
pub fn interval_to_point(r: IntervalRelation) -> PointRelation {
    use PointOrder::{After as A, Before as B, Equal as E};
    let (a, b, c, d) = match r {
        IntervalRelation::Before => (B, B, B, B),
        IntervalRelation::After => (A, A, A, A),
        IntervalRelation::Meets => (B, B, E, B),
        IntervalRelation::MetBy => (A, E, A, A),
        IntervalRelation::Overlaps => (B, B, A, B),
        IntervalRelation::OverlappedBy => (A, B, A, A),
        IntervalRelation::Starts => (E, B, A, B),
        IntervalRelation::StartedBy => (E, B, A, A),
        IntervalRelation::Finishes => (A, B, A, E),
        IntervalRelation::FinishedBy => (B, B, A, E),
        IntervalRelation::During => (A, B, A, B),
        IntervalRelation::Contains => (B, B, A, A),
        IntervalRelation::Equal => (E, B, A, E),
    };
    PointRelation::new(a, b, c, d)
}

fn interval_of_tuple(p: PointRelation) -> Option<IntervalRelation> {
    IntervalRelation::ALL
        .into_iter()
        .find(|&r| interval_to_point(r) == p)
}

/// Resolve a tuple to the unique interval relation it saturates to, or
/// `None` when slots stay undefined (a vague relation). Contradictory input
/// is an error.
pub fn point_to_interval(p: PointRelation) -> Result<Option<IntervalRelation>, RelationError> {
    let s = saturate_point(p)?;
    if !s.is_complete() {
        return Ok(None);
    }
    Ok(interval_of_tuple(s))
}

/// All 13 (interval relation, slot tuple) pairs.
pub fn enumerate_complete_relations() -> Vec<(IntervalRelation, PointRelation)> {
    IntervalRelation::ALL
        .into_iter()
        .map(|r| (r, interval_to_point(r)))
        .collect()
}

/// The relation of (target, source): swap roles and reverse every order.
/// The provenance label is dropped, since it described the other orientation.
pub fn invert(r: &TemporalRelation) -> TemporalRelation {
    // Saturation is preserved under inversion: the entailment rules are
    // symmetric in the two intervals.
    TemporalRelation::from_saturated(r.point().invert())
}

/// Transitive composition of two endpoint orders: from a REL b and b REL c,
/// what is known of a REL c?
fn compose(a: PointOrder, b: PointOrder) -> PointOrder {
    use PointOrder::*;
    match (a, b) {
        (Equal, o) => o,
        (o, Equal) => o,
        (Before, Before) => Before,
        (After, After) => After,
        _ => Undefined,
    }
}

/// Fill in every slot entailed by the defined ones, under the implicit
/// constraints start(X) < end(X) and start(Y) < end(Y). Runs transitive
/// propagation over all six endpoint pairs to a fixed point; detects
/// contradictions (a slot forced two different ways).
pub fn saturate_point(p: PointRelation) -> Result<PointRelation, RelationError> {
    // Endpoint indices: 0 = start(X), 1 = end(X), 2 = start(Y), 3 = end(Y).
    let mut m = [[PointOrder::Undefined; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = PointOrder::Equal;
    }

    fn set(
        m: &mut [[PointOrder; 4]; 4],
        i: usize,
        j: usize,
        v: PointOrder,
        original: PointRelation,
    ) -> Result<bool, RelationError> {
        if v == PointOrder::Undefined {
            return Ok(false);
        }
        if m[i][j] == PointOrder::Undefined {
            m[i][j] = v;
            m[j][i] = v.reverse();
            Ok(true)
        } else if m[i][j] == v {
            Ok(false)
        } else {
            Err(RelationError::Inconsistent(original))
        }
    }

    set(&mut m, 0, 1, PointOrder::Before, p)?;
    set(&mut m, 2, 3, PointOrder::Before, p)?;
    set(&mut m, 0, 2, p.xs_ys, p)?;
    set(&mut m, 0, 3, p.xs_ye, p)?;
    set(&mut m, 1, 2, p.xe_ys, p)?;
    set(&mut m, 1, 3, p.xe_ye, p)?;

    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                for k in 0..4 {
                    if k == i || k == j {
                        continue;
                    }
                    let via = compose(m[i][k], m[k][j]);
                    changed |= set(&mut m, i, j, via, p)?;
                }
            }
        }
    }

    Ok(PointRelation::new(m[0][2], m[0][3], m[1][2], m[1][3]))
}

/// Strip separators and case so that `IS_INCLUDED`, `is-included`, and
/// `isIncluded` all parse alike.
fn normalize_label(label: &str) -> String {
    label
        .trim()
        .chars()
        .filter(|c| !matches!(c, '-' | '_' | ' ' | '.'))
        .flat_map(char::to_lowercase)
        .collect()
}

/// Parse a corpus relation label under the given convention into a
/// normalized (saturated) temporal relation. The original label is kept as
/// provenance. Labels are case- and separator-insensitive.
pub fn parse_relation(label: &str, convention: Convention) -> Result<TemporalRelation, RelationError> {
    use PointOrder::{After as A, Before as B, Equal as E, Undefined as U};
    let norm = normalize_label(label);
    let unknown = || RelationError::UnknownLabel {
        label: label.to_owned(),
        convention,
    };
    let keep = |r: TemporalRelation| r.with_label(label.trim());

    match convention {
        Convention::TimeML => {
            let interval = match norm.as_str() {
                "before" => IntervalRelation::Before,
                "after" => IntervalRelation::After,
                "includes" => IntervalRelation::Contains,
                "isincluded" => IntervalRelation::During,
                "during" => IntervalRelation::During,
                "duringinv" => IntervalRelation::Contains,
                "simultaneous" => IntervalRelation::Equal,
                "identity" => IntervalRelation::Equal,
                "ibefore" => IntervalRelation::Meets,
                "iafter" => IntervalRelation::MetBy,
                "begins" => IntervalRelation::Starts,
                "begunby" => IntervalRelation::StartedBy,
                "ends" => IntervalRelation::Finishes,
                "endedby" => IntervalRelation::FinishedBy,
                _ => return Err(unknown()),
            };
            Ok(keep(TemporalRelation::from_interval(interval)))
        }
        Convention::Interval => {
            if let Some(r) = IntervalRelation::ALL
                .into_iter()
                .find(|r| normalize_label(r.name()) == norm)
            {
                return Ok(keep(TemporalRelation::from_interval(r)));
            }
            let tuple = match norm.as_str() {
                "vague" | "unknown" => PointRelation::vague(),
                // The intervals intersect, nothing more: each starts before
                // the other ends.
                "overlap" => PointRelation::new(U, B, A, U),
                "beforeoroverlap" => PointRelation::new(B, B, U, B),
                "overlaporafter" => PointRelation::new(A, U, A, A),
                _ => return Err(unknown()),
            };
            Ok(keep(TemporalRelation::new(tuple, None)?))
        }
        Convention::MatresStartPoint => {
            let tuple = match norm.as_str() {
                "before" => PointRelation::new(B, U, U, U),
                "after" => PointRelation::new(A, U, U, U),
                "equal" | "simultaneous" => PointRelation::new(E, U, U, U),
                "vague" => PointRelation::vague(),
                _ => return Err(unknown()),
            };
            Ok(keep(TemporalRelation::new(tuple, None)?))
        }
        Convention::PointMap => {
            let map: BTreeMap<String, Option<String>> =
                serde_json::from_str(label).map_err(|e| RelationError::MalformedPointMap {
                    input: label.to_owned(),
                    reason: e.to_string(),
                })?;
            let mut tuple = PointRelation::vague();
            for (key, value) in &map {
                let order = PointOrder::from_symbol(value.as_deref()).ok_or_else(|| {
                    RelationError::MalformedPointMap {
                        input: label.to_owned(),
                        reason: format!("unknown order symbol {value:?} (expected <, >, or =)"),
                    }
                })?;
                let slot = match key.as_str() {
                    "xs_ys" => &mut tuple.xs_ys,
                    "xs_ye" => &mut tuple.xs_ye,
                    "xe_ys" => &mut tuple.xe_ys,
                    "xe_ye" => &mut tuple.xe_ye,
                    _ => {
                        return Err(RelationError::MalformedPointMap {
                            input: label.to_owned(),
                            reason: format!(
                                "unknown slot {key:?} (expected xs_ys, xs_ye, xe_ys, xe_ye)"
                            ),
                        })
                    }
                };
                *slot = order;
            }
            Ok(keep(TemporalRelation::new(tuple, None)?))
        }
    }
}
