//! Comparison with the one-point compactification `X^+`: its intersection
//! cohomology, the boundary-weight criteria for `X^{!*} = X^+`, the
//! dichotomy when they fail, and the candidate report.

use crate::absic::{self, ker_coker};
use crate::atlas::StratumAtlas;
use crate::error::{Error, Result};
use crate::hodge::{CohomologyTable, MixedGraded, TableKind};
use crate::qmat::{self, Matrix};
use crate::wss;

/// Weights of one boundary degree and whether they satisfy the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: i64,
    pub weights: Vec<i64>,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InjectivityMethod {
    /// Lefschetz operator `r ∘ γ` of a single smooth component.
    Lefschetz,
    /// Read off the boundary weights one degree lower.
    ViaWeights,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityCheck {
    pub degree: i64,
    pub holds: bool,
    pub method: InjectivityMethod,
    /// The weight-route answer, always computed.
    pub via_weights: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriteriaReport {
    /// `∂H^n` has weights `≤ n` for `n ≤ d - 1`.
    pub cond2: Vec<DegreeCheck>,
    /// `∂H^n` has weights `≥ n + 1` for `n ≥ d`.
    pub cond3: Vec<DegreeCheck>,
    /// `H^n` pure of weight `n` for `n ≤ d - 1`.
    pub cond6: bool,
    /// `H^n_c` pure of weight `n` for `n ≥ d + 1`.
    pub cond7: bool,
    pub injectivity_range: Vec<InjectivityCheck>,
    pub verdict: bool,
}

impl CriteriaReport {
    pub fn cond2_holds(&self) -> bool {
        self.cond2.iter().all(|c| c.holds)
    }

    pub fn cond3_holds(&self) -> bool {
        self.cond3.iter().all(|c| c.holds)
    }

    /// Degrees violating either boundary condition.
    pub fn failing_degrees(&self) -> Vec<i64> {
        self.cond2.iter().chain(&self.cond3).filter(|c| !c.holds).map(|c| c.degree).collect()
    }
}

/// Which horn of the dichotomy holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Horn {
    /// `IH^{d±1}(X^+)` is strictly bigger than `H^{d±1}_{!*}`.
    DimensionJump,
    /// Equal dimensions, but `u_d` has kernel or cokernel, so no
    /// identification respects the factorizations.
    NoCompatibleIdentification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DichotomyResult {
    /// `(degree, dim IH(X^+), dim H_{!*})` for degrees `d - 1` and `d + 1`.
    pub degrees: Vec<(i64, usize, usize)>,
    /// Degrees among `d ± 1` where the two dimensions differ.
    pub mismatch_degrees: Vec<i64>,
    pub ker_u: usize,
    pub coker_u: usize,
    /// Rank of the connecting map `H^{2c}(Z) → H^{2c+1}_c(X)` for a single
    /// component with `d = 2c`.
    pub connecting_rank: Option<usize>,
    pub horn: Horn,
}

impl DichotomyResult {
    /// Horn (i) witnessed by the dimension tables.
    pub fn dimension_jump(&self) -> bool {
        self.degrees.iter().all(|&(_, p, s)| p > s)
    }

    /// Horn (ii) witnessed by equal dimensions and a non-invertible `u_d`.
    pub fn no_compatible_identification(&self) -> bool {
        self.degrees.iter().all(|&(_, p, s)| p == s) && (self.ker_u > 0 || self.coker_u > 0)
    }
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub h_star: CohomologyTable,
    pub ih_plus: CohomologyTable,
    pub h_y: CohomologyTable,
    pub matches_plus: bool,
    pub matches_y: bool,
}

/// `IH^•(X^+)`: `H^n` below the middle, `H^d_!` in the middle, `H^n_c` above.
pub fn ih_one_point(a: &StratumAtlas) -> Result<CohomologyTable> {
    a.ensure_valid()?;
    if !a.is_connected() {
        return Err(Error::PreconditionViolated("X is not connected".into()));
    }
    let h = wss::grw_unchecked(a)?;
    let hc = wss::dualize(a, &h);
    let d = a.d();
    let mut t = CohomologyTable::new(TableKind::OnePointIc);
    for n in 0..=2 * d {
        let value = if n < d {
            h.get(n)
        } else if n == d {
            let u = wss::u_map_unchecked(a, d)?;
            MixedGraded::pure(crate::factor::ch_factorization(&u).image_part)
        } else {
            hc.get(n)
        };
        t.set(n, value);
    }
    Ok(t)
}

/// The single-component Lefschetz operator `H^{n-2c}(Z)(-c) → H^n(Z)`.
fn lefschetz(a: &StratumAtlas, n: i64) -> Result<Matrix> {
    let z = [0usize];
    let c = a.codimensions[0] as i64;
    let k = n - 2 * c;
    let r_dual = a.restriction(&[], &z, 2 * a.d() - n);
    let gysin = qmat::adjoint_pushforward(&r_dual, &a.pairing(&z, k), &a.pairing(&[], n))?;
    a.restriction(&[], &z, n).mul(&gysin)
}

pub fn weight_criteria(a: &StratumAtlas) -> Result<CriteriaReport> {
    a.ensure_valid()?;
    let d = a.d();
    let h = wss::grw_unchecked(a)?;
    let hc = wss::dualize(a, &h);
    let u = (0..=2 * d + 1).map(|n| Ok((n, wss::u_map_unchecked(a, n)?))).collect::<Result<_>>()?;
    let b = absic::assemble_boundary(a, &h, &hc, &u);
    let weights = |n: i64| b.get(n).weights().into_iter().collect::<Vec<_>>();
    let cond2: Vec<DegreeCheck> = (0..d)
        .map(|n| {
            let w = weights(n);
            DegreeCheck { degree: n, holds: w.iter().all(|&x| x <= n), weights: w }
        })
        .collect();
    let cond3: Vec<DegreeCheck> = (d..=2 * d)
        .map(|n| {
            let w = weights(n);
            DegreeCheck { degree: n, holds: w.iter().all(|&x| x > n), weights: w }
        })
        .collect();
    let cond6 = (0..d).all(|n| h.get(n).is_pure_of_weight(n));
    let cond7 = (d + 1..=2 * d).all(|n| hc.get(n).is_pure_of_weight(n));
    let mut injectivity_range = Vec::new();
    if let Some(c0) = a.min_codim() {
        let single = a.components.len() == 1;
        for n in 2 * c0..=d {
            let via_weights = weights(n - 1).iter().all(|&x| x < n);
            let (holds, method) = if single {
                let l = lefschetz(a, n)?;
                (qmat::rank(&l) == l.cols(), InjectivityMethod::Lefschetz)
            } else {
                (via_weights, InjectivityMethod::ViaWeights)
            };
            injectivity_range.push(InjectivityCheck { degree: n, holds, method, via_weights });
        }
    }
    let verdict = cond2.iter().all(|c| c.holds);
    Ok(CriteriaReport { cond2, cond3, cond6, cond7, injectivity_range, verdict })
}

pub fn plus_dichotomy(a: &StratumAtlas) -> Result<DichotomyResult> {
    let criteria = weight_criteria(a)?;
    if criteria.verdict {
        return Err(Error::PreconditionViolated(
            "the boundary-weight criteria hold, so X^+ is a valid candidate".into(),
        ));
    }
    let d = a.d();
    let plus = ih_one_point(a)?;
    let star = absic::absolute_ic_unchecked(a)?;
    let degrees: Vec<(i64, usize, usize)> =
        [d - 1, d + 1].iter().map(|&n| (n, plus.dim(n), star.table.dim(n))).collect();
    let mismatch_degrees = degrees.iter().filter(|&&(_, p, s)| p != s).map(|&(n, _, _)| n).collect::<Vec<_>>();
    let (k, c) = ker_coker(&star.u[&d]);
    let (ker_u, coker_u) = (k.values().sum::<usize>(), c.values().sum::<usize>());
    let connecting_rank = (a.components.len() == 1 && d == 2 * a.codimensions[0] as i64).then(|| {
        let top = 2 * a.stratum_dim(&[0]);
        a.dim_h(&[0], top) - qmat::rank(&a.restriction(&[], &[0], top))
    });
    let horn = match connecting_rank {
        Some(r) if r > 0 => Horn::DimensionJump,
        Some(_) => Horn::NoCompatibleIdentification,
        None if mismatch_degrees.is_empty() => Horn::NoCompatibleIdentification,
        None => Horn::DimensionJump,
    };
    Ok(DichotomyResult { degrees, mismatch_degrees, ker_u, coker_u, connecting_rank, horn })
}

pub fn compare_candidates(a: &StratumAtlas) -> Result<ComparisonReport> {
    let ih_plus = ih_one_point(a)?;
    let star = absic::absolute_ic_unchecked(a)?;
    let (k, c) = ker_coker(&star.u[&a.d()]);
    let middle_clean = k.values().all(|&x| x == 0) && c.values().all(|&x| x == 0);
    let h_y = wss::cohomology_of_y(a);
    let matches_plus = ih_plus.same_numbers(&star.table) && middle_clean;
    let matches_y = h_y.same_numbers(&star.table);
    Ok(ComparisonReport { h_star: star.table, ih_plus, h_y, matches_plus, matches_y })
}

/// Rank of the intersection matrix `(Z_i · Z_j)` of the boundary curves on a
/// surface.
pub fn intersection_matrix_rank(a: &StratumAtlas) -> Result<usize> {
    a.ensure_valid()?;
    if a.dimension != 2 || a.codimensions.iter().any(|&c| c != 1) {
        return Err(Error::PreconditionViolated("intersection matrix needs boundary curves on a surface".into()));
    }
    let selfint = a.self_intersections.as_ref().ok_or(Error::MissingSelfIntersections)?;
    let n = a.components.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, selfint[i].clone());
        for j in i + 1..n {
            let v = qmat::q(a.dim_h(&[i, j], 0) as i64);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    Ok(qmat::rank(&m))
}
