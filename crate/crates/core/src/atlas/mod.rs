//! Combinatorial input: a smooth proper `Y`, boundary components crossing
//! normally, and for every nonempty intersection `D_S` its cohomology with
//! Hodge types, Poincaré pairings, and the restriction maps
//! `H^k(D_S) → H^k(D_{S∪{i}})`.
//!
//! Pairing matrices `Q^k` have shape `dim H^k × dim H^{2a-k}` (with `a` the
//! stratum dimension) and encode `⟨x, y⟩ = xᵀ Q^k y`. Restriction matrices act
//! on column vectors. Gysin maps are never stored; they are derived as
//! adjoints of restrictions.

mod builtin;
mod io;
mod validate;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::hodge::{PureObject, Slot};
use crate::qmat::{Matrix, Scalar};

pub use builtin::{builtin, builtin_from_spec, catalogue, curve_product, CorpusEntry};
pub use io::{atlas_hash, canonical_json, emit_atlas, load_atlas, load_atlas_file, ParseError};
pub use validate::{validate_atlas, Finding, FindingKind, ValidationReport};

/// Sorted component indices; the empty subset is `Y` itself.
pub type Subset = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StratumData {
    /// Hodge types of a basis of `H^k`, per degree `k`.
    pub cohomology: Vec<Vec<Slot>>,
    /// `Q^k`, per degree `k`.
    pub pairings: Vec<Matrix>,
    /// Degree-0 classes, one per connected piece; `None` means the standard
    /// basis of `H^0`.
    pub units: Option<Vec<Vec<Scalar>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumAtlas {
    pub name: String,
    /// Complex dimension `d` of `Y`.
    pub dimension: usize,
    pub components: Vec<String>,
    /// Codimension of each component in `Y` (1 for divisors).
    pub codimensions: Vec<usize>,
    pub strata: BTreeMap<Subset, StratumData>,
    /// `(S, S ∪ {i})` → one matrix per degree.
    pub restrictions: BTreeMap<(Subset, Subset), Vec<Matrix>>,
    /// Optional self-intersection numbers of the components (surfaces).
    pub self_intersections: Option<Vec<Scalar>>,
}

impl StratumAtlas {
    pub fn d(&self) -> i64 {
        self.dimension as i64
    }

    /// Total codimension `c_S` of the stratum `D_S`.
    pub fn codim(&self, s: &[usize]) -> i64 {
        s.iter().map(|&i| self.codimensions[i] as i64).sum()
    }

    /// Complex dimension of `D_S`.
    pub fn stratum_dim(&self, s: &[usize]) -> i64 {
        self.d() - self.codim(s)
    }

    pub fn is_declared(&self, s: &[usize]) -> bool {
        self.strata.contains_key(s)
    }

    /// Hodge types of `H^k(D_S)`; empty for undeclared strata or degrees.
    pub fn slots(&self, s: &[usize], k: i64) -> &[Slot] {
        if k < 0 {
            return &[];
        }
        self.strata
            .get(s)
            .and_then(|st| st.cohomology.get(k as usize))
            .map_or(&[], Vec::as_slice)
    }

    pub fn dim_h(&self, s: &[usize], k: i64) -> usize {
        self.slots(s, k).len()
    }

    /// `H^k(D_S)` as a pure object of weight `k`.
    ///
    /// Panics on slots of the wrong weight; callers validate first.
    pub fn cohomology(&self, s: &[usize], k: i64) -> PureObject {
        PureObject::new(k, self.slots(s, k).to_vec()).expect("atlas slots have weight equal to degree")
    }

    /// `Q^k` on `D_S`, or a zero matrix of the expected shape.
    pub fn pairing(&self, s: &[usize], k: i64) -> Matrix {
        let a = self.stratum_dim(s);
        let stored = (k >= 0)
            .then(|| self.strata.get(s).and_then(|st| st.pairings.get(k as usize)))
            .flatten();
        stored
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim_h(s, k), self.dim_h(s, 2 * a - k)))
    }

    /// Restriction `H^k(D_S) → H^k(D_T)`, or zero of the expected shape.
    pub fn restriction(&self, s: &[usize], t: &[usize], k: i64) -> Matrix {
        let stored = (k >= 0)
            .then(|| self.restrictions.get(&(s.to_vec(), t.to_vec())).and_then(|m| m.get(k as usize)))
            .flatten();
        stored.cloned().unwrap_or_else(|| Matrix::zeros(self.dim_h(t, k), self.dim_h(s, k)))
    }

    /// Declared subsets of size `m`, in sorted order.
    pub fn subsets_of_size(&self, m: usize) -> Vec<Subset> {
        self.strata.keys().filter(|s| s.len() == m).cloned().collect()
    }

    /// Largest declared `|S|`.
    pub fn depth(&self) -> usize {
        self.strata.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn subset_names(&self, s: &[usize]) -> Vec<String> {
        s.iter().map(|&i| self.components[i].clone()).collect()
    }

    pub fn subset_label(&self, s: &[usize]) -> String {
        if s.is_empty() {
            "Y".to_string()
        } else {
            format!("{{{}}}", self.subset_names(s).join(","))
        }
    }

    /// The declared units of `D_S` as columns, defaulting to the standard
    /// basis of `H^0`.
    pub fn units(&self, s: &[usize]) -> Vec<Vec<Scalar>> {
        let n = self.dim_h(s, 0);
        match self.strata.get(s).and_then(|st| st.units.clone()) {
            Some(u) => u,
            None => (0..n)
                .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
                .collect(),
        }
    }

    /// The fundamental class `1 ∈ H^0(D_S)`: the sum of the units.
    pub fn unit_class(&self, s: &[usize]) -> Vec<Scalar> {
        let n = self.dim_h(s, 0);
        let mut one = vec![Scalar::zero(); n];
        for u in self.units(s) {
            for (x, y) in one.iter_mut().zip(u) {
                *x += y;
            }
        }
        one
    }

    /// `Y` (equivalently `X`, which is dense in it) is connected.
    pub fn is_connected(&self) -> bool {
        self.dim_h(&[], 0) == 1
    }

    /// Smallest component codimension, if there is a boundary.
    pub fn min_codim(&self) -> Option<i64> {
        self.codimensions.iter().map(|&c| c as i64).min()
    }

    /// `Σ_S (-1)^{|S|} χ(D_S)`, which equals `χ(X)`.
    pub fn stratified_euler_characteristic(&self) -> i64 {
        self.strata
            .iter()
            .map(|(s, st)| {
                let chi: i64 = st
                    .cohomology
                    .iter()
                    .enumerate()
                    .map(|(k, v)| if k % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) })
                    .sum();
                if s.len() % 2 == 0 { chi } else { -chi }
            })
            .sum()
    }

    /// Fails with [`crate::Error::InvalidAtlas`] unless validation is clean.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate_atlas(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(crate::Error::InvalidAtlas(report))
        }
    }
}
