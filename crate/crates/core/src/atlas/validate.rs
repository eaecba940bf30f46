use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{StratumAtlas, Subset};
use crate::hodge::Slot;
use crate::qmat::{self, Matrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FindingKind {
    MissingSubset,
    DimensionExceeded,
    DegreeOutOfRange,
    ShapeMismatch,
    PairingNotPerfect,
    PairingTypeMismatch,
    PairingAsymmetry,
    HodgeAsymmetry,
    PoincareAsymmetry,
    SlotWeightMismatch,
    MissingRestriction,
    RestrictionTypeViolation,
    SquareIncompatible,
    UnitNotPreserved,
    NonNormalCrossing,
    SelfIntersectionMismatch,
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub kind: FindingKind,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has(&self, kind: FindingKind) -> bool {
        self.findings.iter().any(|f| f.kind == kind)
    }

    fn push(&mut self, kind: FindingKind, message: String) {
        self.findings.push(Finding { kind, message });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        Ok(())
    }
}

fn counts(slots: &[Slot]) -> BTreeMap<Slot, usize> {
    let mut m = BTreeMap::new();
    for &s in slots {
        *m.entry(s).or_insert(0) += 1;
    }
    m
}

/// Checks every structural axiom the algorithms rely on; never fails.
pub fn validate_atlas(a: &StratumAtlas) -> ValidationReport {
    use FindingKind::*;
    let mut r = ValidationReport::default();
    let n = a.components.len();

    for (i, &c) in a.codimensions.iter().enumerate() {
        if c == 0 {
            r.push(NonNormalCrossing, format!("component {} has codimension 0", a.components[i]));
        }
    }
    if !a.is_declared(&[]) {
        r.push(MissingSubset, "the compactification Y (empty subset) is not declared".into());
    }
    for i in 0..n {
        if !a.is_declared(&[i]) {
            r.push(MissingSubset, format!("component {} has no stratum", a.components[i]));
        }
    }
    for s in a.strata.keys() {
        if s.iter().any(|&i| i >= n) {
            r.push(MissingSubset, format!("stratum {s:?} names an unknown component"));
            continue;
        }
        for (pos, _) in s.iter().enumerate() {
            let mut sub = s.clone();
            sub.remove(pos);
            if !sub.is_empty() && !a.is_declared(&sub) {
                r.push(
                    MissingSubset,
                    format!("{} is declared but {} is not", a.subset_label(s), a.subset_label(&sub)),
                );
            }
        }
        if s.len() >= 2 && s.iter().any(|&i| a.codimensions[i] != 1) {
            r.push(
                NonNormalCrossing,
                format!("{} meets a component of codimension > 1", a.subset_label(s)),
            );
        }
    }
    if r.has(MissingSubset) && !a.is_declared(&[]) {
        return r;
    }

    for (s, st) in &a.strata {
        if s.iter().any(|&i| i >= n) {
            continue;
        }
        check_stratum(a, s, st, &mut r);
    }
    check_restrictions(a, &mut r);
    check_self_intersections(a, &mut r);
    r
}

fn check_stratum(a: &StratumAtlas, s: &Subset, st: &super::StratumData, r: &mut ValidationReport) {
    use FindingKind::*;
    let label = a.subset_label(s);
    let dim = a.stratum_dim(s);
    if dim < 0 {
        r.push(DimensionExceeded, format!("{label} would have dimension {dim}"));
        return;
    }
    let top = 2 * dim;
    for (k, slots) in st.cohomology.iter().enumerate() {
        let k = k as i64;
        if k > top && !slots.is_empty() {
            r.push(DegreeOutOfRange, format!("{label} has cohomology in degree {k} > {top}"));
        }
        if let Some(&(p, q)) = slots.iter().find(|(p, q)| p + q != k) {
            r.push(SlotWeightMismatch, format!("{label} degree {k}: slot ({p},{q}) does not have weight {k}"));
        }
        let c = counts(slots);
        for (&(p, q), &h) in &c {
            if c.get(&(q, p)).copied().unwrap_or(0) != h {
                r.push(HodgeAsymmetry, format!("{label} degree {k}: h^{{{p},{q}}} != h^{{{q},{p}}}"));
            }
            if k <= top {
                let dual = counts(a.slots(s, top - k));
                if dual.get(&(dim - p, dim - q)).copied().unwrap_or(0) != h {
                    r.push(
                        PoincareAsymmetry,
                        format!("{label}: h^{{{p},{q}}} in degree {k} differs from h^{{{},{}}} in degree {}", dim - p, dim - q, top - k),
                    );
                }
            }
        }
    }
    for (k, q) in st.pairings.iter().enumerate() {
        let k = k as i64;
        if k > top && (q.rows() > 0 || q.cols() > 0) {
            r.push(DegreeOutOfRange, format!("{label} has a pairing in degree {k} > {top}"));
        }
    }
    let mut perfect = true;
    for k in 0..=top {
        let q = a.pairing(s, k);
        let expected = (a.dim_h(s, k), a.dim_h(s, top - k));
        if q.shape() != expected {
            r.push(
                ShapeMismatch,
                format!("{label} pairing in degree {k} is {}x{}, expected {}x{}", q.rows(), q.cols(), expected.0, expected.1),
            );
            perfect = false;
            continue;
        }
        if !q.is_square() || qmat::rank(&q) != q.rows() {
            r.push(PairingNotPerfect, format!("{label} pairing in degree {k} is degenerate"));
            perfect = false;
        }
        let (left, right) = (a.slots(s, k), a.slots(s, top - k));
        'types: for (i, &(p1, q1)) in left.iter().enumerate() {
            for (j, &(p2, q2)) in right.iter().enumerate() {
                if !q.get(i, j).is_zero() && (p1 + p2 != dim || q1 + q2 != dim) {
                    r.push(PairingTypeMismatch, format!("{label} pairing in degree {k} pairs ({p1},{q1}) with ({p2},{q2})"));
                    break 'types;
                }
            }
        }
    }
    if perfect {
        for k in 0..=dim {
            let q = a.pairing(s, k);
            let back = a.pairing(s, top - k).transpose();
            let expected = if k % 2 == 0 { back } else { back.neg() };
            if q != expected {
                r.push(PairingAsymmetry, format!("{label} pairing is not graded-symmetric in degree {k}"));
            }
        }
    }
    if let Some(units) = &st.units {
        let h0 = a.dim_h(s, 0);
        let ok = units.iter().all(|u| u.len() == h0)
            && units.len() == h0
            && Matrix::from_columns(h0, units).map(|m| qmat::rank(&m) == h0).unwrap_or(false);
        if !ok {
            r.push(ShapeMismatch, format!("{label} units do not form a basis of H^0"));
        }
    }
}

fn check_restrictions(a: &StratumAtlas, r: &mut ValidationReport) {
    use FindingKind::*;
    let n = a.components.len();
    for (from, to) in a.restrictions.keys() {
        if from.iter().chain(to).any(|&i| i >= n) || !a.is_declared(from) || !a.is_declared(to) {
            r.push(MissingSubset, format!("restriction {:?} -> {:?} between undeclared strata", from, to));
        }
    }
    let mut usable = BTreeMap::new();
    for s in a.strata.keys() {
        for i in 0..n {
            if s.contains(&i) {
                continue;
            }
            let mut t = s.clone();
            t.push(i);
            t.sort_unstable();
            if !a.is_declared(&t) {
                continue;
            }
            let (ls, lt) = (a.subset_label(s), a.subset_label(&t));
            let Some(mats) = a.restrictions.get(&(s.clone(), t.clone())) else {
                r.push(MissingRestriction, format!("no restriction from {ls} to {lt}"));
                continue;
            };
            let mut ok = true;
            for (k, m) in mats.iter().enumerate() {
                let k = k as i64;
                let expected = (a.dim_h(&t, k), a.dim_h(s, k));
                if m.shape() != expected {
                    r.push(
                        ShapeMismatch,
                        format!("restriction {ls} -> {lt} in degree {k} is {}x{}, expected {}x{}", m.rows(), m.cols(), expected.0, expected.1),
                    );
                    ok = false;
                    continue;
                }
                let (src, dst) = (a.slots(s, k), a.slots(&t, k));
                'types: for (i2, ti) in dst.iter().enumerate() {
                    for (j, sj) in src.iter().enumerate() {
                        if ti != sj && !m.get(i2, j).is_zero() {
                            r.push(RestrictionTypeViolation, format!("restriction {ls} -> {lt} in degree {k} maps {sj:?} to {ti:?}"));
                            break 'types;
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            let image = a.restriction(s, &t, 0).apply(&a.unit_class(s));
            if image.as_ref().ok() != Some(&a.unit_class(&t)) {
                r.push(UnitNotPreserved, format!("restriction {ls} -> {lt} does not send 1 to 1"));
            }
            usable.insert((s.clone(), t), ());
        }
    }
    // Both ways around every square S ⊂ S∪{i}, S∪{j} ⊂ S∪{i,j} must agree.
    for s in a.strata.keys() {
        for i in 0..n {
            for j in i + 1..n {
                if s.contains(&i) || s.contains(&j) {
                    continue;
                }
                let with = |extra: &[usize]| {
                    let mut t = s.clone();
                    t.extend_from_slice(extra);
                    t.sort_unstable();
                    t
                };
                let (si, sj, sij) = (with(&[i]), with(&[j]), with(&[i, j]));
                let edges = [(s, &si), (&si, &sij), (s, &sj), (&sj, &sij)];
                if !edges.iter().all(|(x, y)| usable.contains_key(&((*x).clone(), (*y).clone()))) {
                    continue;
                }
                let top = 2 * a.stratum_dim(s).max(0);
                for k in 0..=top {
                    let via_i = a.restriction(&si, &sij, k).mul(&a.restriction(s, &si, k));
                    let via_j = a.restriction(&sj, &sij, k).mul(&a.restriction(s, &sj, k));
                    if via_i.ok() != via_j.ok() {
                        r.push(
                            SquareIncompatible,
                            format!("restrictions {} -> {} disagree in degree {k}", a.subset_label(s), a.subset_label(&sij)),
                        );
                    }
                }
            }
        }
    }
}

/// Self-intersection of a divisor on a surface computed from the data:
/// `⟨1, r(γ(1))⟩` on the component.
pub(crate) fn derived_self_intersection(a: &StratumAtlas, i: usize) -> Option<Scalar> {
    if a.dimension != 2 || a.codimensions[i] != 1 {
        return None;
    }
    let z = [i];
    let r2 = a.restriction(&[], &z, 2);
    let gysin = qmat::adjoint_pushforward(&r2, &a.pairing(&z, 0), &a.pairing(&[], 2)).ok()?;
    let one = a.unit_class(&z);
    let class = gysin.apply(&one).ok()?;
    let restricted = r2.apply(&class).ok()?;
    let paired = a.pairing(&z, 0).apply(&restricted).ok()?;
    Some(one.iter().zip(&paired).map(|(x, y)| x * y).sum())
}

fn check_self_intersections(a: &StratumAtlas, r: &mut ValidationReport) {
    let Some(declared) = &a.self_intersections else { return };
    if r.has(FindingKind::PairingNotPerfect) || r.has(FindingKind::ShapeMismatch) {
        return;
    }
    for (i, value) in declared.iter().enumerate() {
        if let Some(derived) = derived_self_intersection(a, i) {
            if &derived != value {
                r.push(
                    FindingKind::SelfIntersectionMismatch,
                    format!(
                        "component {} declares self-intersection {} but the data gives {}",
                        a.components[i],
                        qmat::format_scalar(value),
                        qmat::format_scalar(&derived)
                    ),
                );
            }
        }
    }
}
