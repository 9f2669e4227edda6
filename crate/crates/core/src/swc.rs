//! SWC morphology ingest.
//!
//! An SWC file is a whitespace-separated table with seven columns per data
//! line: `id type x y z radius parent`. Lines whose first non-whitespace
//! character is `#` and blank lines are skipped. The parser is total: any
//! byte slice yields either a [`SegmentForest`] or an [`SwcError`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geom::Vec3;

pub type SegmentId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwcError {
    #[error("line {line_no}: {reason}")]
    MalformedLine { line_no: usize, reason: String },
    #[error("duplicate record id {0}")]
    DuplicateId(SegmentId),
    #[error("record {id} refers to missing parent {parent_id} (line {line_no})")]
    DanglingParent {
        id: SegmentId,
        parent_id: i64,
        line_no: usize,
    },
    #[error("multiple root records: {0:?}")]
    MultipleRoots(Vec<SegmentId>),
    #[error("cycle detected through record {0}")]
    CycleDetected(SegmentId),
    #[error("record {id} has non-positive radius (line {line_no})")]
    NonPositiveRadius { id: SegmentId, line_no: usize },
    #[error("input contains no data records")]
    EmptyInput,
}

/// One data line of an SWC file.
#[derive(Debug, Clone, PartialEq)]
pub struct SwcRecord {
    pub id: SegmentId,
    /// Carried opaquely; vessel datasets leave its meaning undefined.
    pub type_code: i64,
    pub position: Vec3,
    pub radius: f64,
    /// `-1` for the root.
    pub parent_id: i64,
}

impl SwcRecord {
    pub fn parent(&self) -> Option<SegmentId> {
        (self.parent_id != -1).then_some(self.parent_id as SegmentId)
    }
}

/// A validated, single-rooted SWC tree.
///
/// Records are stored in a topological order (every parent precedes its
/// children); files that already satisfy this keep their original order.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentForest {
    records: Vec<SwcRecord>,
    index: HashMap<SegmentId, usize>,
    root_id: SegmentId,
    children: BTreeMap<SegmentId, Vec<SegmentId>>,
}

impl SegmentForest {
    /// Validates `records` and builds the child index.
    ///
    /// `line_nos`, when given, must be parallel to `records` and is only used
    /// for diagnostics.
    pub fn from_records(records: Vec<SwcRecord>) -> Result<Self, SwcError> {
        let line_nos: Vec<usize> = (1..=records.len()).collect();
        Self::build(records, &line_nos)
    }

    fn build(records: Vec<SwcRecord>, line_nos: &[usize]) -> Result<Self, SwcError> {
        if records.is_empty() {
            return Err(SwcError::EmptyInput);
        }
        let mut index = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if !(r.radius > 0.0) {
                return Err(SwcError::NonPositiveRadius {
                    id: r.id,
                    line_no: line_nos[i],
                });
            }
            if index.insert(r.id, i).is_some() {
                return Err(SwcError::DuplicateId(r.id));
            }
        }
        let roots: Vec<SegmentId> = records
            .iter()
            .filter(|r| r.parent_id == -1)
            .map(|r| r.id)
            .collect();
        for (i, r) in records.iter().enumerate() {
            if r.parent_id == -1 {
                continue;
            }
            if r.parent_id < 0 || !index.contains_key(&(r.parent_id as SegmentId)) {
                return Err(SwcError::DanglingParent {
                    id: r.id,
                    parent_id: r.parent_id,
                    line_no: line_nos[i],
                });
            }
        }
        if roots.len() > 1 {
            return Err(SwcError::MultipleRoots(roots));
        }
        let Some(&root_id) = roots.first() else {
            // Every record has a parent, so following parents must loop.
            return Err(SwcError::CycleDetected(records[0].id));
        };

        // Stable topological order: a record is emitted once its parent is,
        // earlier file positions first.
        let mut file_children: HashMap<SegmentId, Vec<usize>> = HashMap::new();
        for (i, r) in records.iter().enumerate() {
            if let Some(p) = r.parent() {
                file_children.entry(p).or_default().push(i);
            }
        }
        let mut ready: BTreeSet<usize> = BTreeSet::new();
        ready.insert(index[&root_id]);
        let mut order = Vec::with_capacity(records.len());
        while let Some(i) = ready.pop_first() {
            order.push(i);
            if let Some(kids) = file_children.get(&records[i].id) {
                ready.extend(kids.iter().copied());
            }
        }
        if order.len() != records.len() {
            let reached: BTreeSet<usize> = order.iter().copied().collect();
            let stuck = (0..records.len())
                .find(|i| !reached.contains(i))
                .unwrap_or(0);
            return Err(SwcError::CycleDetected(records[stuck].id));
        }

        let mut slots: Vec<Option<SwcRecord>> = records.into_iter().map(Some).collect();
        let records: Vec<SwcRecord> = order.iter().map(|&i| slots[i].take().unwrap()).collect();
        let index: HashMap<SegmentId, usize> =
            records.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        let mut children: BTreeMap<SegmentId, Vec<SegmentId>> = BTreeMap::new();
        for r in &records {
            children.entry(r.id).or_default();
            if let Some(p) = r.parent() {
                children.entry(p).or_default().push(r.id);
            }
        }
        Ok(Self {
            records,
            index,
            root_id,
            children,
        })
    }

    pub fn records(&self) -> &[SwcRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn root_id(&self) -> SegmentId {
        self.root_id
    }

    pub fn get(&self, id: SegmentId) -> Option<&SwcRecord> {
        self.index.get(&id).map(|&i| &self.records[i])
    }

    /// Panics if `id` is not in the forest.
    pub fn record(&self, id: SegmentId) -> &SwcRecord {
        &self.records[self.index[&id]]
    }

    pub fn position(&self, id: SegmentId) -> Vec3 {
        self.record(id).position
    }

    pub fn children(&self, id: SegmentId) -> &[SegmentId] {
        self.children.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Sum of distances between every record and its parent.
    pub fn total_length(&self) -> f64 {
        self.records
            .iter()
            .filter_map(|r| r.parent().map(|p| r.position.distance(self.position(p))))
            .sum()
    }

    /// Returns a copy with every record passed through `f`; topology must be
    /// left untouched by the caller.
    pub fn map_records(&self, mut f: impl FnMut(&SwcRecord) -> SwcRecord) -> Self {
        let records: Vec<SwcRecord> = self.records.iter().map(&mut f).collect();
        Self {
            records,
            index: self.index.clone(),
            root_id: self.root_id,
            children: self.children.clone(),
        }
    }

    /// Drops `id` and all of its descendants. Removing the root is refused.
    pub fn without_subtree(&self, id: SegmentId) -> Result<Self, SwcError> {
        if id == self.root_id {
            return Err(SwcError::EmptyInput);
        }
        let mut doomed = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            doomed.insert(n);
            stack.extend_from_slice(self.children(n));
        }
        let kept = self
            .records
            .iter()
            .filter(|r| !doomed.contains(&r.id))
            .cloned()
            .collect();
        Self::from_records(kept)
    }
}

fn parse_field<T: FromStr>(line_no: usize, name: &str, raw: &str) -> Result<T, SwcError> {
    raw.parse().map_err(|_| SwcError::MalformedLine {
        line_no,
        reason: format!("cannot parse {name} field {raw:?}"),
    })
}

fn parse_real(line_no: usize, name: &str, raw: &str) -> Result<f64, SwcError> {
    let v: f64 = parse_field(line_no, name, raw)?;
    if !v.is_finite() {
        return Err(SwcError::MalformedLine {
            line_no,
            reason: format!("{name} field {raw:?} is not finite"),
        });
    }
    Ok(v)
}

/// Parses SWC text into a validated forest.
pub fn parse_swc(input: &[u8]) -> Result<SegmentForest, SwcError> {
    let mut records = Vec::new();
    let mut line_nos = Vec::new();
    for (i, raw_line) in input.split(|&b| b == b'\n').enumerate() {
        let line_no = i + 1;
        let line = std::str::from_utf8(raw_line).map_err(|_| SwcError::MalformedLine {
            line_no,
            reason: "invalid UTF-8".into(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 7 {
            return Err(SwcError::MalformedLine {
                line_no,
                reason: format!("expected 7 fields, found {}", fields.len()),
            });
        }
        let id: SegmentId = parse_field(line_no, "id", fields[0])?;
        if id == 0 {
            return Err(SwcError::MalformedLine {
                line_no,
                reason: "id must be positive".into(),
            });
        }
        let type_code: i64 = parse_field(line_no, "type", fields[1])?;
        let x = parse_real(line_no, "x", fields[2])?;
        let y = parse_real(line_no, "y", fields[3])?;
        let z = parse_real(line_no, "z", fields[4])?;
        let radius: f64 = parse_field(line_no, "radius", fields[5])?;
        let parent_id: i64 = parse_field(line_no, "parent", fields[6])?;
        records.push(SwcRecord {
            id,
            type_code,
            position: Vec3::new(x, y, z),
            radius,
            parent_id,
        });
        line_nos.push(line_no);
    }
    SegmentForest::build(records, &line_nos)
}

/// Writes the forest back out. Floats use the shortest representation that
/// parses back to the same value, so `parse_swc(serialize_swc(f)) == f`.
pub fn serialize_swc(forest: &SegmentForest) -> String {
    let mut out = String::from("# id type x y z radius parent\n");
    for r in forest.records() {
        use std::fmt::Write;
        let _ = writeln!(
            out,
            "{} {} {:?} {:?} {:?} {:?} {}",
            r.id, r.type_code, r.position.x, r.position.y, r.position.z, r.radius, r.parent_id
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    fn from_index(i: usize) -> Self {
        [Axis::X, Axis::Y, Axis::Z][i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedAxis {
    pub axis: Axis,
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid axis convention {0:?}: expected three signed distinct axes such as \"+x+y+z\"")]
pub struct AxisConventionError(pub String);

/// Which raw dataset axis (with sign) supplies each canonical axis.
///
/// Canonical frame: lateral = +x (patient left to right), vertical = +y
/// (inferior to superior), depth = +z (posterior to anterior).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AxisConvention {
    axes: [SignedAxis; 3],
}

impl Default for AxisConvention {
    fn default() -> Self {
        Self::identity()
    }
}

impl AxisConvention {
    pub fn identity() -> Self {
        let s = |axis| SignedAxis {
            axis,
            negated: false,
        };
        Self {
            axes: [s(Axis::X), s(Axis::Y), s(Axis::Z)],
        }
    }

    pub fn new(
        lateral: SignedAxis,
        vertical: SignedAxis,
        depth: SignedAxis,
    ) -> Result<Self, AxisConventionError> {
        let conv = Self {
            axes: [lateral, vertical, depth],
        };
        let distinct: BTreeSet<usize> = conv.axes.iter().map(|a| a.axis.index()).collect();
        if distinct.len() != 3 {
            return Err(AxisConventionError(conv.to_string()));
        }
        Ok(conv)
    }

    pub fn lateral(&self) -> SignedAxis {
        self.axes[0]
    }

    pub fn vertical(&self) -> SignedAxis {
        self.axes[1]
    }

    pub fn depth(&self) -> SignedAxis {
        self.axes[2]
    }

    /// True when the signed permutation has positive determinant.
    pub fn is_right_handed(&self) -> bool {
        let perm: Vec<usize> = self.axes.iter().map(|a| a.axis.index()).collect();
        let mut inversions = 0;
        for i in 0..3 {
            for j in i + 1..3 {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let negations = self.axes.iter().filter(|a| a.negated).count();
        (inversions + negations) % 2 == 0
    }

    pub fn map(&self, raw: Vec3) -> Vec3 {
        let r = raw.to_array();
        let c = |a: SignedAxis| {
            let v = r[a.axis.index()];
            if a.negated {
                -v
            } else {
                v
            }
        };
        Vec3::new(c(self.axes[0]), c(self.axes[1]), c(self.axes[2]))
    }

    /// The convention that undoes this one.
    pub fn inverse(&self) -> Self {
        let mut axes = [SignedAxis {
            axis: Axis::X,
            negated: false,
        }; 3];
        for (canon, a) in self.axes.iter().enumerate() {
            axes[a.axis.index()] = SignedAxis {
                axis: Axis::from_index(canon),
                negated: a.negated,
            };
        }
        Self { axes }
    }
}

impl fmt::Display for AxisConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axes {
            let sign = if a.negated { '-' } else { '+' };
            let name = match a.axis {
                Axis::X => 'x',
                Axis::Y => 'y',
                Axis::Z => 'z',
            };
            write!(f, "{sign}{name}")?;
        }
        Ok(())
    }
}

impl FromStr for AxisConvention {
    type Err = AxisConventionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || AxisConventionError(s.to_string());
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 6 {
            return Err(err());
        }
        let mut axes = Vec::with_capacity(3);
        for pair in chars.chunks(2) {
            let negated = match pair[0] {
                '+' => false,
                '-' => true,
                _ => return Err(err()),
            };
            let axis = match pair[1].to_ascii_lowercase() {
                'x' => Axis::X,
                'y' => Axis::Y,
                'z' => Axis::Z,
                _ => return Err(err()),
            };
            axes.push(SignedAxis { axis, negated });
        }
        Self::new(axes[0], axes[1], axes[2]).map_err(|_| err())
    }
}

/// Remaps every position into the canonical frame. Radii and topology are
/// untouched.
pub fn apply_axis_map(forest: &SegmentForest, conv: &AxisConvention) -> SegmentForest {
    forest.map_records(|r| SwcRecord {
        position: conv.map(r.position),
        ..r.clone()
    })
}
