//! Pure Hodge structures as bigraded vector spaces, morphisms as block
//! matrices, and weight-graded (associated graded) mixed structures.
//!
//! A [`PureObject`] is an ordered basis with a `(p, q)` label per vector; a
//! [`PureMorphism`] stores one matrix per label, with rows and columns in the
//! order the label occurs in the target and source. Labels are always
//! iterated lexicographically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::qmat::{self, Matrix};

/// A Hodge type `(p, q)`.
pub type Slot = (i64, i64);

/// Model of a pure Hodge structure: a weight and one label per basis vector.
///
/// The zero object always carries weight 0 and is compatible with every
/// weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PureObject {
    weight: i64,
    slots: Vec<Slot>,
}

impl PureObject {
    pub fn new(weight: i64, slots: Vec<Slot>) -> Result<Self> {
        if let Some(&(p, q)) = slots.iter().find(|(p, q)| p + q != weight) {
            return Err(Error::SlotWeight { p, q, weight });
        }
        Ok(Self::normalized(weight, slots))
    }

    fn normalized(weight: i64, slots: Vec<Slot>) -> Self {
        let weight = if slots.is_empty() { 0 } else { weight };
        Self { weight, slots }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The Tate object `Q(m)`: one slot `(-m, -m)`, weight `-2m`.
    pub fn tate(m: i64) -> Self {
        Self { weight: -2 * m, slots: vec![(-m, -m)] }
    }

    /// `count` copies of the type `(p, q)`.
    pub fn repeated(slot: Slot, count: usize) -> Self {
        Self::normalized(slot.0 + slot.1, vec![slot; count])
    }

    /// The object with `counts[t]` basis vectors of type `t`, grouped by type
    /// in lexicographic order.
    pub fn from_counts(weight: i64, counts: &BTreeMap<Slot, usize>) -> Result<Self> {
        let slots = counts.iter().flat_map(|(&t, &n)| std::iter::repeat_n(t, n)).collect();
        Self::new(weight, slots)
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn dim(&self) -> usize {
        self.slots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.slots.is_empty()
    }

    /// Twist by `Q(m)`: weight drops by `2m`, each slot shifts by `-m`.
    pub fn tate_twist(&self, m: i64) -> Self {
        Self::normalized(
            self.weight - 2 * m,
            self.slots.iter().map(|&(p, q)| (p - m, q - m)).collect(),
        )
    }

    pub fn dual(&self) -> Self {
        Self::normalized(-self.weight, self.slots.iter().map(|&(p, q)| (-p, -q)).collect())
    }

    pub fn direct_sum(&self, other: &PureObject) -> Result<Self> {
        if !self.is_zero() && !other.is_zero() && self.weight != other.weight {
            return Err(Error::WeightMismatch(self.weight, other.weight));
        }
        let weight = if self.is_zero() { other.weight } else { self.weight };
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        Ok(Self::normalized(weight, slots))
    }

    pub fn hodge_numbers(&self) -> BTreeMap<Slot, usize> {
        let mut h = BTreeMap::new();
        for &s in &self.slots {
            *h.entry(s).or_insert(0) += 1;
        }
        h
    }

    /// Distinct types present, lexicographically.
    pub fn types(&self) -> BTreeSet<Slot> {
        self.slots.iter().copied().collect()
    }

    /// Basis positions carrying the type `t`, in order.
    pub fn positions(&self, t: Slot) -> Vec<usize> {
        self.slots.iter().enumerate().filter(|(_, &s)| s == t).map(|(i, _)| i).collect()
    }

    pub fn count(&self, t: Slot) -> usize {
        self.slots.iter().filter(|&&s| s == t).count()
    }

    /// Same Hodge numbers and weight; basis order ignored.
    pub fn isomorphic(&self, other: &PureObject) -> bool {
        self.weight == other.weight && self.hodge_numbers() == other.hodge_numbers()
    }
}

impl fmt::Display for PureObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .hodge_numbers()
            .iter()
            .map(|(&(p, q), &n)| if n == 1 { format!("({p},{q})") } else { format!("{n}({p},{q})") })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// A morphism of pure objects of equal weight, one block per Hodge type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureMorphism {
    source: PureObject,
    target: PureObject,
    blocks: BTreeMap<Slot, Matrix>,
}

impl PureMorphism {
    /// Blocks missing from `blocks` are taken to be zero; a block for type
    /// `t` must be `target.count(t) x source.count(t)`.
    pub fn new(source: PureObject, target: PureObject, mut blocks: BTreeMap<Slot, Matrix>) -> Result<Self> {
        check_weights(&source, &target)?;
        let types: BTreeSet<Slot> = source.types().union(&target.types()).copied().collect();
        if let Some(t) = blocks.keys().find(|t| !types.contains(t)) {
            let m = &blocks[t];
            if m.rows() != 0 || m.cols() != 0 {
                return Err(Error::Dimension(format!("block for absent type {t:?} is not empty")));
            }
        }
        blocks.retain(|t, _| types.contains(t));
        for &t in &types {
            let shape = (target.count(t), source.count(t));
            let block = blocks.entry(t).or_insert_with(|| Matrix::zeros(shape.0, shape.1));
            if block.shape() != shape {
                return Err(Error::Dimension(format!(
                    "block {t:?} is {}x{}, expected {}x{}",
                    block.rows(),
                    block.cols(),
                    shape.0,
                    shape.1
                )));
            }
        }
        Ok(Self { source, target, blocks })
    }

    pub fn zero(source: PureObject, target: PureObject) -> Result<Self> {
        Self::new(source, target, BTreeMap::new())
    }

    pub fn identity(obj: &PureObject) -> Self {
        let blocks = obj.types().into_iter().map(|t| (t, Matrix::identity(obj.count(t)))).collect();
        Self { source: obj.clone(), target: obj.clone(), blocks }
    }

    /// Splits a full `dim target x dim source` matrix into type blocks;
    /// fails if it mixes types.
    pub fn from_matrix(source: PureObject, target: PureObject, m: &Matrix) -> Result<Self> {
        check_weights(&source, &target)?;
        if m.shape() != (target.dim(), source.dim()) {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                target.dim(),
                source.dim()
            )));
        }
        for (i, ti) in target.slots().iter().enumerate() {
            for (j, sj) in source.slots().iter().enumerate() {
                if ti != sj && !num_traits::Zero::is_zero(m.get(i, j)) {
                    return Err(Error::HodgeTypeViolation(format!(
                        "entry ({i},{j}) maps type {sj:?} to type {ti:?}"
                    )));
                }
            }
        }
        let types: BTreeSet<Slot> = source.types().union(&target.types()).copied().collect();
        let blocks = types
            .into_iter()
            .map(|t| (t, m.submatrix(&target.positions(t), &source.positions(t))))
            .collect();
        Ok(Self { source, target, blocks })
    }

    /// The full `dim target x dim source` matrix in the objects' basis order.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.dim(), self.source.dim());
        for (&t, block) in &self.blocks {
            let rows = self.target.positions(t);
            let cols = self.source.positions(t);
            for (bi, &r) in rows.iter().enumerate() {
                for (bj, &c) in cols.iter().enumerate() {
                    m.set(r, c, block.get(bi, bj).clone());
                }
            }
        }
        m
    }

    pub fn source(&self) -> &PureObject {
        &self.source
    }

    pub fn target(&self) -> &PureObject {
        &self.target
    }

    pub fn weight(&self) -> i64 {
        if self.source.is_zero() { self.target.weight() } else { self.source.weight() }
    }

    pub fn blocks(&self) -> &BTreeMap<Slot, Matrix> {
        &self.blocks
    }

    /// The block for type `t`; zero-sized sides for types that are absent.
    pub fn block(&self, t: Slot) -> Matrix {
        self.block_or_zero(t)
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &PureMorphism) -> Result<PureMorphism> {
        if first.target != self.source {
            return Err(Error::Dimension("composition of non-matching morphisms".into()));
        }
        let mut blocks = BTreeMap::new();
        let types: BTreeSet<Slot> = first.source.types().union(&self.target.types()).copied().collect();
        for t in types {
            let a = first.block_or_zero(t);
            let b = self.block_or_zero(t);
            blocks.insert(t, b.mul(&a)?);
        }
        PureMorphism::new(first.source.clone(), self.target.clone(), blocks)
    }

    fn block_or_zero(&self, t: Slot) -> Matrix {
        self.blocks
            .get(&t)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.count(t), self.source.count(t)))
    }

    pub fn add(&self, other: &PureMorphism) -> Result<PureMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Dimension("sum of morphisms with different endpoints".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|(&t, b)| Ok((t, b.add(&other.blocks[&t])?)))
            .collect::<Result<_>>()?;
        Ok(PureMorphism { source: self.source.clone(), target: self.target.clone(), blocks })
    }

    pub fn rank(&self) -> usize {
        self.blocks.values().map(qmat::rank).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.blocks.values().all(Matrix::is_identity)
    }

    pub fn tate_twist(&self, m: i64) -> PureMorphism {
        PureMorphism {
            source: self.source.tate_twist(m),
            target: self.target.tate_twist(m),
            blocks: self.blocks.iter().map(|(&(p, q), b)| ((p - m, q - m), b.clone())).collect(),
        }
    }
}

fn check_weights(source: &PureObject, target: &PureObject) -> Result<()> {
    if !source.is_zero() && !target.is_zero() && source.weight() != target.weight() {
        return Err(Error::WeightMismatch(source.weight(), target.weight()));
    }
    Ok(())
}

/// Associated graded of a mixed structure: weight → nonzero pure piece.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MixedGraded {
    pieces: BTreeMap<i64, PureObject>,
}

impl MixedGraded {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pure(obj: PureObject) -> Self {
        let mut m = Self::new();
        m.add_piece(obj);
        m
    }

    /// Adds `obj` to the piece of its weight; zero objects are dropped.
    pub fn add_piece(&mut self, obj: PureObject) {
        if obj.is_zero() {
            return;
        }
        let w = obj.weight();
        let piece = self.pieces.remove(&w).unwrap_or_default();
        let sum = piece.direct_sum(&obj).expect("pieces share their weight");
        self.pieces.insert(w, sum);
    }

    pub fn piece(&self, w: i64) -> PureObject {
        self.pieces.get(&w).cloned().unwrap_or_default()
    }

    pub fn pieces(&self) -> &BTreeMap<i64, PureObject> {
        &self.pieces
    }

    pub fn weights(&self) -> BTreeSet<i64> {
        self.pieces.keys().copied().collect()
    }

    pub fn dim(&self) -> usize {
        self.pieces.values().map(PureObject::dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_pure_of_weight(&self, w: i64) -> bool {
        self.pieces.keys().all(|&k| k == w)
    }

    pub fn hodge_numbers(&self) -> BTreeMap<i64, BTreeMap<Slot, usize>> {
        self.pieces.iter().map(|(&w, p)| (w, p.hodge_numbers())).collect()
    }

    pub fn tate_twist(&self, m: i64) -> Self {
        let mut out = Self::new();
        for p in self.pieces.values() {
            out.add_piece(p.tate_twist(m));
        }
        out
    }

    pub fn dual(&self) -> Self {
        let mut out = Self::new();
        for p in self.pieces.values() {
            out.add_piece(p.dual());
        }
        out
    }

    pub fn direct_sum(&self, other: &MixedGraded) -> Self {
        let mut out = self.clone();
        for p in other.pieces.values() {
            out.add_piece(p.clone());
        }
        out
    }
}

impl fmt::Display for MixedGraded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.pieces.iter().map(|(w, p)| format!("W{w}:{p}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableKind {
    Plain,
    CompactSupport,
    Boundary,
    AbsoluteIc,
    OnePointIc,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::Plain => "plain",
            TableKind::CompactSupport => "compactSupport",
            TableKind::Boundary => "boundary",
            TableKind::AbsoluteIc => "absoluteIC",
            TableKind::OnePointIc => "onePointIC",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Self::Plain, Self::CompactSupport, Self::Boundary, Self::AbsoluteIc, Self::OnePointIc]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

/// Degree-indexed weight-graded data; zero degrees are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    kind: TableKind,
    degrees: BTreeMap<i64, MixedGraded>,
}

impl CohomologyTable {
    pub fn new(kind: TableKind) -> Self {
        Self { kind, degrees: BTreeMap::new() }
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn set(&mut self, n: i64, value: MixedGraded) {
        if value.is_zero() {
            self.degrees.remove(&n);
        } else {
            self.degrees.insert(n, value);
        }
    }

    pub fn get(&self, n: i64) -> MixedGraded {
        self.degrees.get(&n).cloned().unwrap_or_default()
    }

    pub fn degrees(&self) -> &BTreeMap<i64, MixedGraded> {
        &self.degrees
    }

    pub fn dim(&self, n: i64) -> usize {
        self.degrees.get(&n).map_or(0, MixedGraded::dim)
    }

    /// Hodge numbers of the weight-`w` piece in degree `n`.
    pub fn hodge(&self, n: i64, w: i64) -> BTreeMap<Slot, usize> {
        self.get(n).piece(w).hodge_numbers()
    }

    /// Per-degree, per-weight, per-type equality, ignoring the kind tag.
    pub fn same_numbers(&self, other: &CohomologyTable) -> bool {
        let keys: BTreeSet<i64> = self.degrees.keys().chain(other.degrees.keys()).copied().collect();
        keys.into_iter().all(|n| self.get(n).hodge_numbers() == other.get(n).hodge_numbers())
    }

    /// Degrees and weights where the weight range allowed by the kind is
    /// violated, for a compactification of dimension `d`.
    pub fn weight_violations(&self, d: i64) -> Vec<(i64, i64)> {
        let mut bad = Vec::new();
        for (&n, mg) in &self.degrees {
            let (lo, hi) = match self.kind {
                TableKind::Plain => (n, (2 * n).min(n + d)),
                TableKind::CompactSupport => ((2 * n - 2 * d).max(0), n),
                TableKind::AbsoluteIc => (n, n),
                TableKind::Boundary | TableKind::OnePointIc => (i64::MIN, i64::MAX),
            };
            bad.extend(mg.weights().into_iter().filter(|&w| w < lo || w > hi).map(|w| (n, w)));
        }
        bad
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|(&n, mg)| if n % 2 == 0 { mg.dim() as i64 } else { -(mg.dim() as i64) }).sum()
    }
}

/// Weights with a nonzero graded piece in degree `n`.
pub fn weight_support(t: &CohomologyTable, n: i64) -> BTreeSet<i64> {
    t.get(n).weights()
}
