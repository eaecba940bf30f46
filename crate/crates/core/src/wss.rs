//! Weight complexes of the boundary stratification.
//!
//! The Gysin complex of weight `w` has spot `m = ⊕_{|S|=m} H^{w-2c_S}(D_S)(-c_S)`
//! and a differential toward smaller `m`; its homology at spot `m` is
//! `Gr^W_w H^{w-m}(X)`. The restriction complex of degree `n` has spot
//! `m = ⊕_{|S|=m} H^n(D_S)` and a differential toward larger `m`; its
//! homology at spot `m` is `Gr^W_n H^{n+m}_c(X)`. Compact supports are
//! otherwise computed by duality, and only the spot-0 kernel of the
//! restriction complex is used by the engine.
//!
//! Removing or adding component `i` to `S` carries the sign
//! `(-1)^{position of i in the larger set}`.

use std::collections::BTreeMap;

use crate::atlas::{StratumAtlas, Subset};
use crate::error::Result;
use crate::hodge::{CohomologyTable, MixedGraded, PureMorphism, PureObject, Slot, TableKind};
use crate::qmat::{self, adjoint_pushforward, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Gysin,
    Restriction,
}

#[derive(Clone, Debug)]
pub struct WeightComplex {
    /// The weight (Gysin flavor) or the cohomological degree (restriction).
    pub degree: i64,
    pub flavor: Flavor,
    pub spots: BTreeMap<usize, PureObject>,
    /// Differential out of spot `m`.
    pub differentials: BTreeMap<usize, PureMorphism>,
}

impl WeightComplex {
    pub fn spot(&self, m: usize) -> PureObject {
        self.spots.get(&m).cloned().unwrap_or_default()
    }

    fn target_of(&self, m: usize) -> Option<usize> {
        match self.flavor {
            Flavor::Gysin => m.checked_sub(1),
            Flavor::Restriction => Some(m + 1),
        }
    }

    fn incoming(&self, m: usize) -> Option<&PureMorphism> {
        match self.flavor {
            Flavor::Gysin => self.differentials.get(&(m + 1)),
            Flavor::Restriction => m.checked_sub(1).and_then(|p| self.differentials.get(&p)),
        }
    }

    /// `d ∘ d = 0` at every spot.
    pub fn is_complex(&self) -> bool {
        self.differentials.iter().all(|(&m, d)| {
            let Some(next) = self.target_of(m).and_then(|t| self.differentials.get(&t)) else {
                return true;
            };
            next.compose(d).map(|c| c.is_zero()).unwrap_or(false)
        })
    }

    /// Hodge numbers of the homology at spot `m`, grouped by type.
    pub fn homology(&self, m: usize) -> PureObject {
        let spot = self.spot(m);
        let out = self.differentials.get(&m);
        let inc = self.incoming(m);
        let mut counts = BTreeMap::new();
        for t in spot.types() {
            let r_out = out.map_or(0, |d| qmat::rank(&d.block(t)));
            let r_in = inc.map_or(0, |d| qmat::rank(&d.block(t)));
            counts.insert(t, spot.count(t) - r_out - r_in);
        }
        PureObject::from_counts(spot.weight(), &counts).expect("homology keeps the spot's weight")
    }
}

fn position_sign(i: usize, s: &[usize]) -> i64 {
    let pos = s.iter().position(|&x| x == i).expect("component in subset");
    if pos % 2 == 0 { 1 } else { -1 }
}

/// Direct sum of stratum pieces, with the offset of each summand.
fn assemble(pieces: Vec<(Subset, PureObject)>) -> (PureObject, Vec<(Subset, usize)>) {
    let mut total = PureObject::zero();
    let mut offsets = Vec::new();
    for (s, p) in pieces {
        offsets.push((s, total.dim()));
        total = total.direct_sum(&p).expect("spot pieces share their weight");
    }
    (total, offsets)
}

fn offset_of(offsets: &[(Subset, usize)], s: &[usize]) -> usize {
    offsets.iter().find(|(t, _)| t == s).map(|&(_, o)| o).expect("subset has a summand")
}

/// The Gysin complex in weight `w`. Empty for `w` outside `[0, 2d]`.
pub fn gysin_complex(a: &StratumAtlas, w: i64) -> Result<WeightComplex> {
    a.ensure_valid()?;
    gysin_complex_unchecked(a, w)
}

pub(crate) fn gysin_complex_unchecked(a: &StratumAtlas, w: i64) -> Result<WeightComplex> {
    let mut spots = BTreeMap::new();
    let mut layouts = BTreeMap::new();
    let in_range = (0..=2 * a.d()).contains(&w);
    for m in 0..=a.depth() {
        let pieces = if in_range {
            a.subsets_of_size(m)
                .into_iter()
                .map(|s| {
                    let c = a.codim(&s);
                    let p = a.cohomology(&s, w - 2 * c).tate_twist(-c);
                    (s, p)
                })
                .collect()
        } else {
            Vec::new()
        };
        let (obj, layout) = assemble(pieces);
        spots.insert(m, obj);
        layouts.insert(m, layout);
    }
    let mut differentials = BTreeMap::new();
    for m in 1..=a.depth() {
        let (src, dst) = (&spots[&m], &spots[&(m - 1)]);
        let mut full = Matrix::zeros(dst.dim(), src.dim());
        for (s, col) in &layouts[&m] {
            let k = w - 2 * a.codim(s);
            let dim_s = a.dim_h(s, k);
            if dim_s == 0 {
                continue;
            }
            for &i in s {
                let t: Subset = s.iter().copied().filter(|&x| x != i).collect();
                let ci = a.codimensions[i] as i64;
                let r = a.restriction(&t, s, 2 * a.stratum_dim(s) - k);
                let g = adjoint_pushforward(&r, &a.pairing(s, k), &a.pairing(&t, k + 2 * ci))?;
                let g = if position_sign(i, s) < 0 { g.neg() } else { g };
                let row = offset_of(&layouts[&(m - 1)], &t);
                add_block(&mut full, row, *col, &g);
            }
        }
        differentials.insert(m, PureMorphism::from_matrix(src.clone(), dst.clone(), &full)?);
    }
    Ok(WeightComplex { degree: w, flavor: Flavor::Gysin, spots, differentials })
}

fn add_block(full: &mut Matrix, r0: usize, c0: usize, block: &Matrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = full.get(r0 + i, c0 + j) + block.get(i, j);
            full.set(r0 + i, c0 + j, v);
        }
    }
}

/// The restriction complex in degree `n`. Empty for `n` outside `[0, 2d]`.
pub fn restriction_complex(a: &StratumAtlas, n: i64) -> Result<WeightComplex> {
    a.ensure_valid()?;
    restriction_complex_unchecked(a, n)
}

pub(crate) fn restriction_complex_unchecked(a: &StratumAtlas, n: i64) -> Result<WeightComplex> {
    let mut spots = BTreeMap::new();
    let mut layouts = BTreeMap::new();
    let in_range = (0..=2 * a.d()).contains(&n);
    for m in 0..=a.depth() {
        let pieces = if in_range {
            a.subsets_of_size(m).into_iter().map(|s| {
                let p = a.cohomology(&s, n);
                (s, p)
            }).collect()
        } else {
            Vec::new()
        };
        let (obj, layout) = assemble(pieces);
        spots.insert(m, obj);
        layouts.insert(m, layout);
    }
    let mut differentials = BTreeMap::new();
    for m in 0..a.depth() {
        let (src, dst) = (&spots[&m], &spots[&(m + 1)]);
        let mut full = Matrix::zeros(dst.dim(), src.dim());
        for (t, row) in &layouts[&(m + 1)] {
            for &i in t {
                let s: Subset = t.iter().copied().filter(|&x| x != i).collect();
                let r = a.restriction(&s, t, n);
                let r = if position_sign(i, t) < 0 { r.neg() } else { r };
                add_block(&mut full, *row, offset_of(&layouts[&m], &s), &r);
            }
        }
        differentials.insert(m, PureMorphism::from_matrix(src.clone(), dst.clone(), &full)?);
    }
    Ok(WeightComplex { degree: n, flavor: Flavor::Restriction, spots, differentials })
}

/// `Gr^W H^•(X)` from Gysin-complex homology.
pub fn grw(a: &StratumAtlas) -> Result<CohomologyTable> {
    a.ensure_valid()?;
    grw_unchecked(a)
}

pub(crate) fn grw_unchecked(a: &StratumAtlas) -> Result<CohomologyTable> {
    let mut degrees: BTreeMap<i64, MixedGraded> = BTreeMap::new();
    for w in 0..=2 * a.d() {
        let cx = gysin_complex_unchecked(a, w)?;
        for m in 0..=a.depth() {
            let h = cx.homology(m);
            degrees.entry(w - m as i64).or_default().add_piece(h);
        }
    }
    let mut t = CohomologyTable::new(TableKind::Plain);
    for (n, mg) in degrees {
        t.set(n, mg);
    }
    Ok(t)
}

/// `Gr^W_w H^n_c(X) = Gr^W_{2d-w} H^{2d-n}(X)^∨(-d)`.
pub fn grw_c(a: &StratumAtlas) -> Result<CohomologyTable> {
    a.ensure_valid()?;
    Ok(dualize(a, &grw_unchecked(a)?))
}

pub(crate) fn dualize(a: &StratumAtlas, plain: &CohomologyTable) -> CohomologyTable {
    let d = a.d();
    let mut t = CohomologyTable::new(TableKind::CompactSupport);
    for (&n, mg) in plain.degrees() {
        t.set(2 * d - n, mg.dual().tate_twist(-d));
    }
    t
}

/// `H^•(Y)` as a pure table.
pub fn cohomology_of_y(a: &StratumAtlas) -> CohomologyTable {
    let mut t = CohomologyTable::new(TableKind::Plain);
    for n in 0..=2 * a.d() {
        t.set(n, MixedGraded::pure(a.cohomology(&[], n)));
    }
    t
}

/// `u_n : Gr^W_n H^n_c(X) → Gr^W_n H^n(X)`, through `H^n(Y)`.
pub fn u_map(a: &StratumAtlas, n: i64) -> Result<PureMorphism> {
    a.ensure_valid()?;
    u_map_unchecked(a, n)
}

pub(crate) fn u_map_unchecked(a: &StratumAtlas, n: i64) -> Result<PureMorphism> {
    let res = restriction_complex_unchecked(a, n)?;
    let gys = gysin_complex_unchecked(a, n)?;
    let y = res.spot(0);
    let (mut src, mut dst, mut blocks) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    for t in y.types() {
        let k = match res.differentials.get(&0) {
            Some(d) => qmat::kernel_basis(&d.block(t)),
            None => Matrix::identity(y.count(t)),
        };
        let p = match gys.differentials.get(&1) {
            Some(g) => qmat::cokernel_projection(&g.block(t)),
            None => Matrix::identity(y.count(t)),
        };
        src.insert(t, k.cols());
        dst.insert(t, p.rows());
        blocks.insert(t, p.mul(&k)?);
    }
    let source = PureObject::from_counts(n, &src)?;
    let target = PureObject::from_counts(n, &dst)?;
    PureMorphism::new(source, target, blocks)
}

/// Restriction-complex homology as a compact-support table; used to
/// cross-check the duality route.
pub fn grw_c_via_restrictions(a: &StratumAtlas) -> Result<CohomologyTable> {
    a.ensure_valid()?;
    let mut degrees: BTreeMap<i64, MixedGraded> = BTreeMap::new();
    for n in 0..=2 * a.d() {
        let cx = restriction_complex_unchecked(a, n)?;
        for m in 0..=a.depth() {
            degrees.entry(n + m as i64).or_default().add_piece(cx.homology(m));
        }
    }
    let mut t = CohomologyTable::new(TableKind::CompactSupport);
    for (n, mg) in degrees {
        t.set(n, mg);
    }
    Ok(t)
}

/// Per-type counts helper shared by downstream modules.
pub(crate) fn counts_object(weight: i64, counts: &BTreeMap<Slot, usize>) -> PureObject {
    PureObject::from_counts(weight, counts).expect("counts carry the right weight")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::builtin_from_spec;
    use crate::hodge::weight_support;

    fn t(n: i64) -> MixedGraded {
        MixedGraded::pure(PureObject::tate(n))
    }

    #[test]
    fn point_gysin_in_p1() {
        let a = builtin_from_spec("a1").unwrap();
        let cx = gysin_complex(&a, 2).unwrap();
        assert_eq!(cx.spot(0).dim(), 1);
        assert_eq!(cx.spot(1), PureObject::tate(-1));
        assert_eq!(cx.differentials[&1].rank(), 1);
        assert!(cx.is_complex());
        assert!(gysin_complex(&a, -1).unwrap().spots.values().all(PureObject::is_zero));
        assert!(gysin_complex(&a, 3).unwrap().spots.values().all(PureObject::is_zero));
    }

    #[test]
    fn empty_boundary_complexes() {
        let a = builtin_from_spec("proper_curve:g=2").unwrap();
        let cx = gysin_complex(&a, 1).unwrap();
        assert_eq!(cx.spots.len(), 1);
        assert!(cx.differentials.is_empty());
        assert_eq!(restriction_complex(&a, 1).unwrap().spots.len(), 1);
        assert_eq!(grw(&a).unwrap().same_numbers(&cohomology_of_y(&a)), true);
        assert!(grw_c(&a).unwrap().same_numbers(&cohomology_of_y(&a)));
        for n in 0..=2 {
            let u = u_map(&a, n).unwrap();
            assert!(u.is_identity());
        }
    }

    #[test]
    fn restriction_examples() {
        let a = builtin_from_spec("a1").unwrap();
        let cx = restriction_complex(&a, 0).unwrap();
        assert_eq!(cx.differentials[&0].rank(), 1);
        let d = builtin_from_spec("p1p1_minus_diagonal").unwrap();
        let cx = restriction_complex(&d, 2).unwrap();
        assert_eq!(cx.differentials[&0].to_matrix(), Matrix::from_i64(&[&[1, 1]]));
    }

    #[test]
    fn affine_line() {
        let a = builtin_from_spec("a1").unwrap();
        let h = grw(&a).unwrap();
        assert_eq!(h.get(0), t(0));
        assert!(h.get(1).is_zero() && h.get(2).is_zero());
        let hc = grw_c(&a).unwrap();
        assert_eq!(hc.get(2), t(-1));
        assert!(hc.get(0).is_zero() && hc.get(1).is_zero());
        let u0 = u_map(&a, 0).unwrap();
        assert!(u0.source().is_zero());
        assert_eq!(*u0.target(), PureObject::tate(0));
    }

    #[test]
    fn affine_spaces() {
        for n in 1..=3 {
            let a = builtin_from_spec(&format!("an:n={n}")).unwrap();
            let hc = grw_c(&a).unwrap();
            assert_eq!(hc.degrees().len(), 1);
            assert_eq!(hc.get(2 * n), t(-n));
        }
    }

    #[test]
    fn punctured_line_and_gm_times_a1() {
        let gm = builtin_from_spec("points_in_proper:g=0,k=2").unwrap();
        assert_eq!(weight_support(&grw(&gm).unwrap(), 1), [2].into());
        let a = builtin_from_spec("gm_times_a1").unwrap();
        let h = grw(&a).unwrap();
        assert_eq!(h.get(0), t(0));
        assert_eq!(h.get(1), t(-1));
        assert!(h.get(2).is_zero() && h.get(3).is_zero() && h.get(4).is_zero());
    }

    #[test]
    fn diagonal_u2() {
        let a = builtin_from_spec("p1p1_minus_diagonal").unwrap();
        let u = u_map(&a, 2).unwrap();
        assert_eq!(u.source().dim(), 1);
        assert_eq!(u.target().dim(), 1);
        assert_eq!(u.rank(), 1);
    }
}
