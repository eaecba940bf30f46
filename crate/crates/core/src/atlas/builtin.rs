//! The built-in corpus and the curve-product atlas builder.

use std::collections::BTreeMap;

use super::{StratumAtlas, StratumData, Subset};
use crate::error::{Error, Result};
use crate::hodge::Slot;
use crate::qmat::{q, Matrix, Scalar};

/// Cohomology of a smooth proper variety with a chosen basis.
#[derive(Clone, Debug)]
struct Coh {
    dim: i64,
    slots: Vec<Vec<Slot>>,
    pairings: Vec<Matrix>,
}

impl Coh {
    fn h(&self, k: i64) -> usize {
        if k < 0 { 0 } else { self.slots.get(k as usize).map_or(0, Vec::len) }
    }

    fn into_data(self) -> StratumData {
        StratumData { cohomology: self.slots, pairings: self.pairings, units: None }
    }
}

/// `P^n` with basis `1, h, …, h^n`.
fn projective(n: i64) -> Coh {
    let len = (2 * n + 1) as usize;
    let mut slots = vec![Vec::new(); len];
    let mut pairings = vec![Matrix::zeros(0, 0); len];
    for k in 0..=n {
        slots[2 * k as usize] = vec![(k, k)];
        pairings[2 * k as usize] = Matrix::identity(1);
    }
    Coh { dim: n, slots, pairings }
}

fn point() -> Coh {
    projective(0)
}

/// A genus-`g` curve with basis `1; α_1..α_g (1,0), β_1..β_g (0,1); ω`,
/// `α_i·β_i = 1`.
fn curve(g: usize) -> Coh {
    let mut h1 = vec![(1, 0); g];
    h1.extend(vec![(0, 1); g]);
    let mut q1 = Matrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        q1.set(i, g + i, q(1));
        q1.set(g + i, i, q(-1));
    }
    Coh {
        dim: 1,
        slots: vec![vec![(0, 0)], h1, vec![(1, 1)]],
        pairings: vec![Matrix::identity(1), q1, Matrix::identity(1)],
    }
}

/// `P^1 × P^1` with `H^2` basis `a = [pt × P^1]`, `b = [P^1 × pt]`.
fn p1p1() -> Coh {
    Coh {
        dim: 2,
        slots: vec![vec![(0, 0)], vec![], vec![(1, 1), (1, 1)], vec![], vec![(2, 2)]],
        pairings: vec![
            Matrix::identity(1),
            Matrix::zeros(0, 0),
            Matrix::from_i64(&[&[0, 1], &[1, 0]]),
            Matrix::zeros(0, 0),
            Matrix::identity(1),
        ],
    }
}

/// Restriction matrices `source → target` given only the nonzero degrees;
/// other degrees are zero of the right shape.
fn restriction(source: &Coh, target: &Coh, given: &[(usize, Matrix)]) -> Vec<Matrix> {
    let len = source.slots.len().max(target.slots.len());
    let mut out: Vec<Matrix> =
        (0..len as i64).map(|k| Matrix::zeros(target.h(k), source.h(k))).collect();
    for (k, m) in given {
        assert_eq!(m.shape(), out[*k].shape(), "builtin restriction shape in degree {k}");
        out[*k] = m.clone();
    }
    out
}

/// The unit-to-unit restriction, zero elsewhere.
fn unit_restriction(source: &Coh, target: &Coh) -> Vec<Matrix> {
    restriction(source, target, &[(0, Matrix::identity(1))])
}

struct Builder {
    atlas: StratumAtlas,
    models: BTreeMap<Subset, Coh>,
}

impl Builder {
    fn new(name: &str, d: usize, components: &[&str]) -> Self {
        Self {
            atlas: StratumAtlas {
                name: name.to_string(),
                dimension: d,
                components: components.iter().map(|s| s.to_string()).collect(),
                codimensions: vec![1; components.len()],
                strata: BTreeMap::new(),
                restrictions: BTreeMap::new(),
                self_intersections: None,
            },
            models: BTreeMap::new(),
        }
    }

    fn subset(&self, names: &[&str]) -> Subset {
        let mut s: Subset = names
            .iter()
            .map(|n| self.atlas.components.iter().position(|c| c == n).expect("known component"))
            .collect();
        s.sort_unstable();
        s
    }

    fn codims(mut self, c: Vec<usize>) -> Self {
        self.atlas.codimensions = c;
        self
    }

    fn self_intersections(mut self, v: &[i64]) -> Self {
        self.atlas.self_intersections = Some(v.iter().map(|&x| q(x)).collect());
        self
    }

    fn stratum(mut self, names: &[&str], coh: Coh) -> Self {
        let s = self.subset(names);
        self.models.insert(s, coh);
        self
    }

    /// Restriction between declared strata, nonzero degrees only.
    fn restrict(mut self, from: &[&str], to: &[&str], given: &[(usize, Matrix)]) -> Self {
        let (s, t) = (self.subset(from), self.subset(to));
        let m = restriction(&self.models[&s], &self.models[&t], given);
        self.atlas.restrictions.insert((s, t), m);
        self
    }

    fn build(mut self) -> StratumAtlas {
        for (s, coh) in self.models {
            self.atlas.strata.insert(s, coh.into_data());
        }
        self.atlas
    }
}

fn row(v: &[i64]) -> Matrix {
    Matrix::from_i64(&[v])
}

/// `P^n` minus a hyperplane, i.e. affine `n`-space.
fn pn_minus_hyperplane(n: i64) -> StratumAtlas {
    let name = if n == 1 { "a1".to_string() } else { format!("pn_minus_hyperplane(n={n})") };
    let (y, h) = (projective(n), projective(n - 1));
    let given: Vec<(usize, Matrix)> = (0..n).map(|k| (2 * k as usize, Matrix::identity(1))).collect();
    let b = Builder::new(&name, n as usize, &["H"]).stratum(&[], y).stratum(&["H"], h).restrict(&[], &["H"], &given);
    let b = if n == 2 { b.self_intersections(&[1]) } else { b };
    b.build()
}

/// Finitely many points removed from a smooth proper variety: a genus-`g`
/// curve when `dim = 1`, otherwise `P^dim`.
fn points_in_proper(dim: i64, g: usize, k: usize) -> StratumAtlas {
    let names: Vec<String> = (1..=k).map(|i| format!("p{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let y = if dim == 1 { curve(g) } else { projective(dim) };
    let label = if dim == 1 {
        format!("points_in_proper(dim=1,g={g},k={k})")
    } else {
        format!("points_in_proper(dim={dim},k={k})")
    };
    let mut b = Builder::new(&label, dim as usize, &refs).codims(vec![dim as usize; k]).stratum(&[], y.clone());
    for n in &refs {
        b = b.stratum(&[n], point());
    }
    for n in &refs {
        b = b.restrict(&[], &[n], &[(0, Matrix::identity(1))]);
    }
    b.build()
}

/// `P^n` minus a linear `P^k` with `k < n - k`.
fn low_dim_z(n: i64, k: i64) -> Result<StratumAtlas> {
    if !(0 <= k && k < n - k) {
        return Err(Error::PreconditionViolated(format!("low_dim_Z needs 0 <= k < n - k, got n={n}, k={k}")));
    }
    let given: Vec<(usize, Matrix)> = (0..=k).map(|j| (2 * j as usize, Matrix::identity(1))).collect();
    Ok(Builder::new(&format!("low_dim_Z(n={n},k={k})"), n as usize, &["L"])
        .codims(vec![(n - k) as usize])
        .stratum(&[], projective(n))
        .stratum(&["L"], projective(k))
        .restrict(&[], &["L"], &given)
        .build())
}

/// `P^2` minus a smooth plane curve of degree `e`.
fn smooth_divisor_ample(e: i64) -> Result<StratumAtlas> {
    if e < 1 {
        return Err(Error::PreconditionViolated(format!("degree must be positive, got {e}")));
    }
    let g = ((e - 1) * (e - 2) / 2) as usize;
    Ok(Builder::new(&format!("smooth_divisor_ample(e={e})"), 2, &["C"])
        .stratum(&[], projective(2))
        .stratum(&["C"], curve(g))
        .restrict(&[], &["C"], &[(0, Matrix::identity(1)), (2, row(&[e]))])
        .self_intersections(&[e * e])
        .build())
}

/// `P^1 × P^1` minus the smooth rational curve of class `a + k·b`
/// (self-intersection `2k`); `k = 0` is a ruling line, `k = 1` the diagonal.
fn p1p1_minus_curve(name: &str, k: i64) -> StratumAtlas {
    Builder::new(name, 2, &["Z"])
        .stratum(&[], p1p1())
        .stratum(&["Z"], projective(1))
        .restrict(&[], &["Z"], &[(0, Matrix::identity(1)), (2, row(&[k, 1]))])
        .self_intersections(&[2 * k])
        .build()
}

/// `P^2` blown up `r + 1` times in successive infinitely near points, minus
/// the chain `E_i = f_i - f_{i+1}` of `r` rational `(-2)`-curves.
fn surface_resolution(r: usize) -> Result<StratumAtlas> {
    if r == 0 {
        return Err(Error::PreconditionViolated("chain length must be positive".into()));
    }
    let rank = r + 2;
    let mut q2 = Matrix::zeros(rank, rank);
    q2.set(0, 0, q(1));
    for i in 1..rank {
        q2.set(i, i, q(-1));
    }
    let y = Coh {
        dim: 2,
        slots: vec![vec![(0, 0)], vec![], vec![(1, 1); rank], vec![], vec![(2, 2)]],
        pairings: vec![Matrix::identity(1), Matrix::zeros(0, 0), q2, Matrix::zeros(0, 0), Matrix::identity(1)],
    };
    let names: Vec<String> = (1..=r).map(|i| format!("E{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut b = Builder::new(&format!("surface_resolution(r={r})"), 2, &refs).stratum(&[], y);
    for n in &refs {
        b = b.stratum(&[n], projective(1));
    }
    for i in 0..r.saturating_sub(1) {
        b = b.stratum(&[refs[i], refs[i + 1]], point());
    }
    for (i, n) in refs.iter().enumerate() {
        // x ↦ x·E_i with E_i = f_{i+1} - f_{i+2} in the basis h, f_1, ….
        let mut v = vec![0; rank];
        v[i + 1] = -1;
        v[i + 2] = 1;
        b = b.restrict(&[], &[n], &[(0, Matrix::identity(1)), (2, row(&v))]);
    }
    for i in 0..r.saturating_sub(1) {
        let pair = [refs[i], refs[i + 1]];
        b = b.restrict(&[refs[i]], &pair, &[(0, Matrix::identity(1))]);
        b = b.restrict(&[refs[i + 1]], &pair, &[(0, Matrix::identity(1))]);
    }
    Ok(b.self_intersections(&vec![-2; r]).build())
}

/// `G_m × A^1` inside `P^1 × P^1`: boundary `{0}×P^1`, `{∞}×P^1`, `P^1×{∞}`.
fn gm_times_a1() -> StratumAtlas {
    let (y, line, pt) = (p1p1(), projective(1), point());
    let one = Matrix::identity(1);
    Builder::new("gm_times_a1", 2, &["L1", "L2", "L3"])
        .stratum(&[], y)
        .stratum(&["L1"], line.clone())
        .stratum(&["L2"], line.clone())
        .stratum(&["L3"], line)
        .stratum(&["L1", "L3"], pt.clone())
        .stratum(&["L2", "L3"], pt)
        .restrict(&[], &["L1"], &[(0, one.clone()), (2, row(&[0, 1]))])
        .restrict(&[], &["L2"], &[(0, one.clone()), (2, row(&[0, 1]))])
        .restrict(&[], &["L3"], &[(0, one.clone()), (2, row(&[1, 0]))])
        .restrict(&["L1"], &["L1", "L3"], &[(0, one.clone())])
        .restrict(&["L3"], &["L1", "L3"], &[(0, one.clone())])
        .restrict(&["L2"], &["L2", "L3"], &[(0, one.clone())])
        .restrict(&["L3"], &["L2", "L3"], &[(0, one)])
        .self_intersections(&[0, 0, 0])
        .build()
}

fn proper_curve(g: usize) -> StratumAtlas {
    Builder::new(&format!("proper_curve(g={g})"), 1, &[]).stratum(&[], curve(g)).build()
}

fn proper_pn(n: i64) -> StratumAtlas {
    Builder::new(&format!("pn(n={n})"), n as usize, &[]).stratum(&[], projective(n)).build()
}

/// Künneth product of several models. Degree-`n` basis vectors are tuples
/// `(degree, index)` per factor, ordered lexicographically.
struct Product {
    factors: Vec<Coh>,
    basis: Vec<Vec<Vec<(i64, usize)>>>,
}

impl Product {
    fn new(factors: Vec<Coh>) -> Self {
        let dim: i64 = factors.iter().map(|f| f.dim).sum();
        let mut basis = vec![Vec::new(); (2 * dim + 1) as usize];
        let mut tuples: Vec<Vec<(i64, usize)>> = vec![Vec::new()];
        for f in &factors {
            let mut next = Vec::new();
            for t in &tuples {
                for k in 0..=2 * f.dim {
                    for i in 0..f.h(k) {
                        let mut t2 = t.clone();
                        t2.push((k, i));
                        next.push(t2);
                    }
                }
            }
            tuples = next;
        }
        for t in tuples {
            let n: i64 = t.iter().map(|&(k, _)| k).sum();
            basis[n as usize].push(t);
        }
        for b in &mut basis {
            b.sort();
        }
        Self { factors, basis }
    }

    fn dim(&self) -> i64 {
        self.factors.iter().map(|f| f.dim).sum()
    }

    fn coh(&self) -> Coh {
        let dim = self.dim();
        let slots: Vec<Vec<Slot>> = self
            .basis
            .iter()
            .map(|b| {
                b.iter()
                    .map(|t| {
                        t.iter().zip(&self.factors).fold((0, 0), |(p, q), (&(k, i), f)| {
                            let (fp, fq) = f.slots[k as usize][i];
                            (p + fp, q + fq)
                        })
                    })
                    .collect()
            })
            .collect();
        let pairings = (0..=2 * dim)
            .map(|n| {
                let (rows, cols) = (&self.basis[n as usize], &self.basis[(2 * dim - n) as usize]);
                let mut m = Matrix::zeros(rows.len(), cols.len());
                for (i, x) in rows.iter().enumerate() {
                    for (j, y) in cols.iter().enumerate() {
                        if let Some(v) = self.pair(x, y) {
                            m.set(i, j, v);
                        }
                    }
                }
                m
            })
            .collect();
        Coh { dim, slots, pairings }
    }

    /// `⟨x_1⊗…⊗x_m, y_1⊗…⊗y_m⟩ = ± Π ⟨x_i, y_i⟩` with the Koszul sign
    /// `(-1)^{Σ_{j>i} |x_j||y_i|}`.
    fn pair(&self, x: &[(i64, usize)], y: &[(i64, usize)]) -> Option<Scalar> {
        let mut value = q(1);
        for (f, (&(kx, ix), &(ky, iy))) in self.factors.iter().zip(x.iter().zip(y)) {
            if kx + ky != 2 * f.dim {
                return None;
            }
            value *= f.pairings[kx as usize].get(ix, iy).clone();
        }
        let mut sign = 0;
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                sign += x[j].0 * y[i].0;
            }
        }
        Some(if sign % 2 == 0 { value } else { -value })
    }

    /// `⊗_i maps_i`, where `maps_i[k]` is the factor map in degree `k`.
    fn tensor_map(&self, target: &Product, maps: &[Vec<Matrix>]) -> Vec<Matrix> {
        let len = self.basis.len().max(target.basis.len());
        (0..len)
            .map(|n| {
                let src = self.basis.get(n).map_or(&[][..], Vec::as_slice);
                let dst = target.basis.get(n).map_or(&[][..], Vec::as_slice);
                let mut m = Matrix::zeros(dst.len(), src.len());
                for (i, t) in dst.iter().enumerate() {
                    for (j, s) in src.iter().enumerate() {
                        let mut v = q(1);
                        for (f, (&(kt, it), &(ks, is))) in t.iter().zip(s).enumerate() {
                            if kt != ks {
                                v = q(0);
                                break;
                            }
                            v *= maps[f][kt as usize].get(it, is).clone();
                        }
                        m.set(i, j, v);
                    }
                }
                m
            })
            .collect()
    }
}

/// Product of curves `C_{g_1} × … × C_{g_m}` minus, in factor `i`, the
/// divisors `C × … × {pt_j} × … × C` for `k_i` points. The boundary is a
/// normal-crossing divisor; strata pick at most one point per factor.
pub fn curve_product(factors: &[(usize, usize)]) -> StratumAtlas {
    let mut names = Vec::new();
    for (f, &(_, k)) in factors.iter().enumerate() {
        for j in 0..k {
            names.push((f, format!("z{}_{}", f + 1, j + 1)));
        }
    }
    // A subset is a choice of at most one point index per factor.
    let mut choices: Vec<Vec<Option<usize>>> = vec![Vec::new()];
    for &(_, k) in factors {
        choices = choices
            .into_iter()
            .flat_map(|c| {
                (0..=k).map(move |j| {
                    let mut c2 = c.clone();
                    c2.push(j.checked_sub(1));
                    c2
                })
            })
            .collect();
    }
    let subset_of = |c: &[Option<usize>]| -> Subset {
        let mut s: Subset = c
            .iter()
            .enumerate()
            .filter_map(|(f, j)| j.map(|j| names.iter().position(|(g, n)| *g == f && *n == format!("z{}_{}", f + 1, j + 1)).unwrap()))
            .collect();
        s.sort_unstable();
        s
    };
    let product_of = |c: &[Option<usize>]| -> Product {
        Product::new(
            c.iter().zip(factors).map(|(j, &(g, _))| if j.is_some() { point() } else { curve(g) }).collect(),
        )
    };
    let label = factors.iter().map(|(g, k)| format!("C{g}-{k}")).collect::<Vec<_>>().join("x");
    let mut atlas = StratumAtlas {
        name: format!("curve_product({label})"),
        dimension: factors.len(),
        components: names.iter().map(|(_, n)| n.clone()).collect(),
        codimensions: vec![1; names.len()],
        strata: BTreeMap::new(),
        restrictions: BTreeMap::new(),
        self_intersections: None,
    };
    for c in &choices {
        let prod = product_of(c);
        atlas.strata.insert(subset_of(c), prod.coh().into_data());
        for f in 0..factors.len() {
            if c[f].is_some() {
                continue;
            }
            for j in 0..factors[f].1 {
                let mut c2 = c.clone();
                c2[f] = Some(j);
                let target = product_of(&c2);
                let maps: Vec<Vec<Matrix>> = prod
                    .factors
                    .iter()
                    .zip(&target.factors)
                    .enumerate()
                    .map(|(i, (s, t))| {
                        if i == f {
                            unit_restriction(s, t)
                        } else {
                            (0..=2 * s.dim).map(|k| Matrix::identity(s.h(k))).collect()
                        }
                    })
                    .collect();
                atlas.restrictions.insert((subset_of(c), subset_of(&c2)), prod.tensor_map(&target, &maps));
            }
        }
    }
    atlas
}

/// A corpus item with its parameters and defaults.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub params: &'static [(&'static str, i64)],
    pub description: &'static str,
}

const CATALOGUE: &[CorpusEntry] = &[
    CorpusEntry { name: "a1", params: &[], description: "affine line: P^1 minus a point" },
    CorpusEntry {
        name: "pn_minus_hyperplane",
        params: &[("n", 1)],
        description: "affine n-space: P^n minus a hyperplane",
    },
    CorpusEntry {
        name: "points_in_proper",
        params: &[("dim", 1), ("g", 1), ("k", 2)],
        description: "finitely many points removed from a smooth proper variety (genus-g curve if dim = 1, else P^dim)",
    },
    CorpusEntry {
        name: "low_dim_Z",
        params: &[("n", 3), ("k", 1)],
        description: "P^n minus a linear P^k whose dimension is below its codimension",
    },
    CorpusEntry {
        name: "smooth_divisor_ample",
        params: &[("e", 3)],
        description: "P^2 minus a smooth plane curve of degree e (ample restriction)",
    },
    CorpusEntry {
        name: "middle_dim_Z_selfint_zero",
        params: &[],
        description: "P^1 x P^1 minus a ruling line, Z.Z = 0",
    },
    CorpusEntry {
        name: "middle_dim_Z_selfint_nonzero",
        params: &[("k", 1)],
        description: "P^1 x P^1 minus a rational curve of class a + k b, Z.Z = 2k",
    },
    CorpusEntry {
        name: "p1p1_minus_diagonal",
        params: &[],
        description: "P^1 x P^1 minus the diagonal, Z.Z = 2",
    },
    CorpusEntry {
        name: "surface_resolution",
        params: &[("r", 2)],
        description: "complement of a chain of r (-2)-curves in an iterated blow-up of P^2",
    },
    CorpusEntry {
        name: "gm_times_a1",
        params: &[],
        description: "G_m x A^1 inside P^1 x P^1 with three boundary lines",
    },
    CorpusEntry { name: "proper_curve", params: &[("g", 1)], description: "a smooth proper curve of genus g" },
    CorpusEntry { name: "pn", params: &[("n", 2)], description: "projective n-space, no boundary" },
];

pub fn catalogue() -> &'static [CorpusEntry] {
    CATALOGUE
}

/// Builds a corpus atlas; missing parameters take their defaults.
pub fn builtin(name: &str, params: &BTreeMap<String, i64>) -> Result<StratumAtlas> {
    let entry = CATALOGUE
        .iter()
        .find(|e| e.name == name || (name == "an" && e.name == "pn_minus_hyperplane"))
        .ok_or_else(|| Error::UnknownCorpusItem(name.to_string()))?;
    for key in params.keys() {
        if !entry.params.iter().any(|(p, _)| p == key) {
            return Err(Error::UnknownCorpusItem(format!("{name} has no parameter `{key}`")));
        }
    }
    let get = |key: &str| -> i64 {
        params
            .get(key)
            .copied()
            .unwrap_or_else(|| entry.params.iter().find(|(p, _)| *p == key).map(|&(_, v)| v).unwrap_or(0))
    };
    let nonneg = |key: &str| -> Result<usize> {
        usize::try_from(get(key)).map_err(|_| Error::PreconditionViolated(format!("`{key}` must be non-negative")))
    };
    let positive = |key: &str| -> Result<i64> {
        let v = get(key);
        if v < 1 {
            return Err(Error::PreconditionViolated(format!("`{key}` must be positive")));
        }
        Ok(v)
    };
    match entry.name {
        "a1" => Ok(pn_minus_hyperplane(1)),
        "pn_minus_hyperplane" => Ok(pn_minus_hyperplane(positive("n")?)),
        "points_in_proper" => Ok(points_in_proper(positive("dim")?, nonneg("g")?, nonneg("k")?)),
        "low_dim_Z" => low_dim_z(get("n"), get("k")),
        "smooth_divisor_ample" => smooth_divisor_ample(get("e")),
        "middle_dim_Z_selfint_zero" => Ok(p1p1_minus_curve("middle_dim_Z_selfint_zero", 0)),
        "middle_dim_Z_selfint_nonzero" => {
            let k = positive("k")?;
            Ok(p1p1_minus_curve(&format!("middle_dim_Z_selfint_nonzero(k={k})"), k))
        }
        "p1p1_minus_diagonal" => Ok(p1p1_minus_curve("p1p1_minus_diagonal", 1)),
        "surface_resolution" => surface_resolution(nonneg("r")?),
        "gm_times_a1" => Ok(gm_times_a1()),
        "proper_curve" => Ok(proper_curve(nonneg("g")?)),
        "pn" => Ok(proper_pn(get("n").max(0))),
        _ => unreachable!("catalogue entries are exhaustive"),
    }
}

/// Parses `name` or `name:key=value,key=value`.
pub fn builtin_from_spec(spec: &str) -> Result<StratumAtlas> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = BTreeMap::new();
    for kv in rest.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::UnknownCorpusItem(format!("malformed parameter `{kv}`")))?;
        let v: i64 = v
            .trim()
            .parse()
            .map_err(|_| Error::UnknownCorpusItem(format!("parameter `{k}` needs an integer value")))?;
        params.insert(k.trim().to_string(), v);
    }
    builtin(name.trim(), &params)
}
