//! Absolute intersection cohomology `H^n_{!*}(X) = CH(u_n)`, interior
//! cohomology, and the weight-graded boundary cohomology.

use std::collections::BTreeMap;

use crate::atlas::StratumAtlas;
use crate::error::Result;
use crate::factor::{ch_factorization, ChDecomposition};
use crate::hodge::{CohomologyTable, MixedGraded, PureMorphism, PureObject, Slot, TableKind};
use crate::qmat;
use crate::wss::{self, counts_object};

#[derive(Clone, Debug)]
pub struct AbsicResult {
    pub table: CohomologyTable,
    /// `u_n` for `0 ≤ n ≤ 2d`.
    pub u: BTreeMap<i64, PureMorphism>,
    /// `CH(u_n)` with `i_n = iCH`, `π_n = piCH`.
    pub factorizations: BTreeMap<i64, ChDecomposition>,
    /// Interior cohomology `H^n_! = im(u_n)`.
    pub interior: BTreeMap<i64, PureObject>,
}

impl AbsicResult {
    pub fn interior_table(&self) -> CohomologyTable {
        let mut t = CohomologyTable::new(TableKind::AbsoluteIc);
        for (&n, v) in &self.interior {
            t.set(n, MixedGraded::pure(v.clone()));
        }
        t
    }
}

pub fn absolute_ic(a: &StratumAtlas) -> Result<AbsicResult> {
    a.ensure_valid()?;
    absolute_ic_unchecked(a)
}

pub(crate) fn absolute_ic_unchecked(a: &StratumAtlas) -> Result<AbsicResult> {
    let mut table = CohomologyTable::new(TableKind::AbsoluteIc);
    let (mut u, mut factorizations, mut interior) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    for n in 0..=2 * a.d() {
        let un = wss::u_map_unchecked(a, n)?;
        let dec = ch_factorization(&un);
        table.set(n, MixedGraded::pure(dec.total.clone()));
        interior.insert(n, dec.image_part.clone());
        factorizations.insert(n, dec);
        u.insert(n, un);
    }
    Ok(AbsicResult { table, u, factorizations, interior })
}

/// Per-type kernel and cokernel dimensions of `u`.
pub(crate) fn ker_coker(u: &PureMorphism) -> (BTreeMap<Slot, usize>, BTreeMap<Slot, usize>) {
    let (mut k, mut c) = (BTreeMap::new(), BTreeMap::new());
    for t in u.source().types().union(&u.target().types()) {
        let b = u.block(*t);
        let r = qmat::rank(&b);
        k.insert(*t, b.cols() - r);
        c.insert(*t, b.rows() - r);
    }
    (k, c)
}

/// `Gr^W ∂H^•(X)`, assembled from the long exact sequence
/// `∂H^{n-1} → H^n_c → H^n → ∂H^n` weight by weight.
pub fn boundary_cohomology(a: &StratumAtlas) -> Result<CohomologyTable> {
    a.ensure_valid()?;
    let h = wss::grw_unchecked(a)?;
    let hc = wss::dualize(a, &h);
    let u: BTreeMap<i64, PureMorphism> =
        (0..=2 * a.d() + 1).map(|n| Ok((n, wss::u_map_unchecked(a, n)?))).collect::<Result<_>>()?;
    Ok(assemble_boundary(a, &h, &hc, &u))
}

pub(crate) fn assemble_boundary(
    a: &StratumAtlas,
    h: &CohomologyTable,
    hc: &CohomologyTable,
    u: &BTreeMap<i64, PureMorphism>,
) -> CohomologyTable {
    let mut t = CohomologyTable::new(TableKind::Boundary);
    for n in 0..=2 * a.d() {
        let mut mg = MixedGraded::new();
        if let Some(un) = u.get(&n) {
            mg.add_piece(counts_object(n, &ker_coker(un).1));
        }
        for (&w, p) in h.get(n).pieces() {
            if w > n {
                mg.add_piece(p.clone());
            }
        }
        for (&w, p) in hc.get(n + 1).pieces() {
            if w <= n {
                mg.add_piece(p.clone());
            }
        }
        if let Some(next) = u.get(&(n + 1)) {
            mg.add_piece(counts_object(n + 1, &ker_coker(next).0));
        }
        t.set(n, mg);
    }
    t
}

/// Hodge-number containment `h^{p,q}(sub, n) ≤ h^{p,q}(ambient, n)`.
pub fn direct_factor_check(sub: &CohomologyTable, ambient: &CohomologyTable) -> bool {
    let totals = |t: &CohomologyTable, n: i64| {
        let mut m: BTreeMap<Slot, usize> = BTreeMap::new();
        for p in t.get(n).pieces().values() {
            for (s, c) in p.hodge_numbers() {
                *m.entry(s).or_insert(0) += c;
            }
        }
        m
    };
    sub.degrees().keys().all(|&n| {
        let amb = totals(ambient, n);
        totals(sub, n).iter().all(|(s, &c)| amb.get(s).copied().unwrap_or(0) >= c)
    })
}
