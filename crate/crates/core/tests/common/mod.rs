#![allow(dead_code)]

use std::collections::BTreeMap;

use absix_core::atlas::{builtin_from_spec, catalogue, curve_product, StratumAtlas};
use absix_core::qmat::{self, q, Matrix, Scalar};
use absix_core::{ch_factorization, PureMorphism, PureObject, Slot};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every catalogue entry with its default parameters.
pub fn corpus() -> Vec<StratumAtlas> {
    catalogue().iter().map(|e| builtin_from_spec(e.name).expect("corpus entry builds")).collect()
}

/// Corpus atlases modelling a connected, pure-dimensional `X`.
pub fn connected_corpus() -> Vec<StratumAtlas> {
    corpus().into_iter().filter(|a| a.is_connected()).collect()
}

pub fn random_int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Matrix {
    let data = (0..rows * cols).map(|_| q(rng.gen_range(-bound..=bound))).collect();
    Matrix::new(rows, cols, data).unwrap()
}

/// Product of random elementary matrices: invertible, small entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    if n < 2 {
        if n == 1 {
            m.set(0, 0, q(*[1, -1, 2, -3].choose(rng).unwrap()));
        }
        return m;
    }
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = q(rng.gen_range(-2..=2));
        let mut e = Matrix::identity(n);
        e.set(i, j, c);
        m = e.mul(&m).unwrap();
    }
    if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..n);
        let mut e = Matrix::identity(n);
        e.set(i, i, q(-2));
        m = e.mul(&m).unwrap();
    }
    m
}

/// A random type-preserving automorphism of a basis with the given slots.
pub fn random_graded_automorphism<R: Rng>(rng: &mut R, slots: &[Slot]) -> Matrix {
    let mut m = Matrix::zeros(slots.len(), slots.len());
    let obj_types: std::collections::BTreeSet<Slot> = slots.iter().copied().collect();
    for t in obj_types {
        let pos: Vec<usize> = (0..slots.len()).filter(|&i| slots[i] == t).collect();
        let b = random_invertible(rng, pos.len());
        for (a, &r) in pos.iter().enumerate() {
            for (c, &col) in pos.iter().enumerate() {
                m.set(r, col, b.get(a, c).clone());
            }
        }
    }
    m
}

/// Re-expresses every stratum's cohomology in a random graded basis:
/// `r' = P_T⁻¹ r P_S`, `Q' = P_kᵀ Q P_{2a-k}`, units `P_0⁻¹ u`.
pub fn random_basis_change<R: Rng>(rng: &mut R, a: &StratumAtlas) -> StratumAtlas {
    let mut out = a.clone();
    let mut change: BTreeMap<Vec<usize>, Vec<Matrix>> = BTreeMap::new();
    for (s, st) in &a.strata {
        change.insert(s.clone(), st.cohomology.iter().map(|slots| random_graded_automorphism(rng, slots)).collect());
    }
    for (s, st) in out.strata.iter_mut() {
        let p = &change[s];
        let top = st.pairings.len() as i64 - 1;
        let units = a.units(s);
        for (k, qk) in st.pairings.iter_mut().enumerate() {
            let dual = (top - k as i64) as usize;
            *qk = p[k].transpose().mul(qk).unwrap().mul(&p[dual]).unwrap();
        }
        if !p.is_empty() {
            let inv = qmat::inverse(&p[0]).unwrap();
            st.units = Some(units.iter().map(|u| inv.apply(u).unwrap()).collect());
        }
    }
    for ((s, t), maps) in out.restrictions.iter_mut() {
        for (k, r) in maps.iter_mut().enumerate() {
            let basis = |x: &Vec<usize>, n: usize| change[x].get(k).cloned().unwrap_or_else(|| Matrix::identity(n));
            let inv = qmat::inverse(&basis(t, r.rows())).unwrap();
            *r = inv.mul(r).unwrap().mul(&basis(s, r.cols())).unwrap();
        }
    }
    out.name = format!("{}~", a.name);
    out
}

/// Random parameters for the parametric corpus families and curve products.
pub fn random_base_atlas<R: Rng>(rng: &mut R) -> StratumAtlas {
    match rng.gen_range(0..7) {
        0 => builtin_from_spec(&format!("an:n={}", rng.gen_range(1..=3))).unwrap(),
        1 => builtin_from_spec(&format!("smooth_divisor_ample:e={}", rng.gen_range(1..=4))).unwrap(),
        2 => builtin_from_spec(&format!("surface_resolution:r={}", rng.gen_range(1..=3))).unwrap(),
        3 => builtin_from_spec(&format!("middle_dim_Z_selfint_nonzero:k={}", rng.gen_range(1..=3))).unwrap(),
        4 => builtin_from_spec(&format!("points_in_proper:dim=1,g={},k={}", rng.gen_range(0..=2), rng.gen_range(1..=3)))
            .unwrap(),
        _ => {
            let m = rng.gen_range(1..=2);
            let factors: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..=1), rng.gen_range(0..=2))).collect();
            curve_product(&factors)
        }
    }
}

pub fn random_atlas<R: Rng>(rng: &mut R) -> StratumAtlas {
    let base = random_base_atlas(rng);
    random_basis_change(rng, &base)
}

/// Hodge numbers of a smooth curve of genus `g` minus `k` points, as
/// `degree → weight → (p,q) → dim`.
pub type Numbers = BTreeMap<i64, BTreeMap<i64, BTreeMap<Slot, usize>>>;

fn add(n: &mut Numbers, deg: i64, slot: Slot, c: usize) {
    if c > 0 {
        *n.entry(deg).or_default().entry(slot.0 + slot.1).or_default().entry(slot).or_insert(0) += c;
    }
}

pub fn punctured_curve(g: usize, k: usize) -> Numbers {
    let mut n = Numbers::new();
    add(&mut n, 0, (0, 0), 1);
    add(&mut n, 1, (1, 0), g);
    add(&mut n, 1, (0, 1), g);
    if k == 0 {
        add(&mut n, 2, (1, 1), 1);
    } else {
        add(&mut n, 1, (1, 1), k - 1);
    }
    n
}

/// Künneth product of graded Hodge numbers.
pub fn kunneth(x: &Numbers, y: &Numbers) -> Numbers {
    let mut out = Numbers::new();
    for (&dx, wx) in x {
        for (&dy, wy) in y {
            for px in wx.values() {
                for py in wy.values() {
                    for (&(a, b), &cx) in px {
                        for (&(c, d), &cy) in py {
                            add(&mut out, dx + dy, (a + c, b + d), cx * cy);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn table_numbers(t: &absix_core::CohomologyTable) -> Numbers {
    t.degrees().iter().map(|(&n, mg)| (n, mg.hodge_numbers())).filter(|(_, m)| !m.is_empty()).collect()
}

/// Rank by Gauss–Jordan elimination choosing the last nonzero row as pivot.
pub fn oracle_rank(m: &Matrix) -> usize {
    let mut rows = m.to_rows();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..rows.len()).rev().find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = Scalar::one() / rows[rank][c].clone();
        for x in rows[rank].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for cc in 0..m.cols() {
                    let delta = f.clone() * rows[rank][cc].clone();
                    rows[r][cc] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A random idempotent `P E P⁻¹` of size `n`.
pub fn random_idempotent<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let p = random_invertible(rng, n);
    let mut e = Matrix::zeros(n, n);
    for i in 0..n {
        if rng.gen_bool(0.5) {
            e.set(i, i, q(1));
        }
    }
    p.mul(&e).unwrap().mul(&qmat::inverse(&p).unwrap()).unwrap()
}

/// A random `(v, h, j, p)` with `v = p ∘ j`, `j` mono, `p` epi. `h` is
/// `CH(v)` plus a random extra summand, in a random graded basis.
pub struct VersalInstance {
    pub v: PureMorphism,
    pub h: PureObject,
    pub j: PureMorphism,
    pub p: PureMorphism,
}

const WEIGHT2: [Slot; 3] = [(2, 0), (1, 1), (0, 2)];

pub fn random_object<R: Rng>(rng: &mut R, max_dim: usize) -> PureObject {
    let n = rng.gen_range(0..=max_dim);
    let mut slots: Vec<Slot> = (0..n).map(|_| *WEIGHT2.choose(rng).unwrap()).collect();
    slots.sort();
    if slots.is_empty() {
        return PureObject::new(2, vec![]).unwrap();
    }
    PureObject::new(2, slots).unwrap()
}

pub fn random_morphism<R: Rng>(rng: &mut R, s: &PureObject, t: &PureObject) -> PureMorphism {
    let mut blocks = BTreeMap::new();
    for ty in s.types().union(&t.types()) {
        let (c, r) = (s.count(*ty), t.count(*ty));
        let rank = rng.gen_range(0..=r.min(c));
        let m = random_int_matrix(rng, r, rank, 3).mul(&random_int_matrix(rng, rank, c, 3)).unwrap();
        blocks.insert(*ty, m);
    }
    PureMorphism::new(s.clone(), t.clone(), blocks).unwrap()
}

pub fn random_versal_instance<R: Rng>(rng: &mut R) -> VersalInstance {
    let s = random_object(rng, 6);
    let t = random_object(rng, 6);
    let v = random_morphism(rng, &s, &t);
    let dec = ch_factorization(&v);
    let extra = random_object(rng, 3);
    let h0 = dec.total.direct_sum(&extra).unwrap();
    let ch_dim = dec.total.dim();
    // j0 = (iCH, 0), p0 = (piCH | x) on CH(v) ⊕ extra, with x arbitrary.
    let i_full = dec.i_ch.to_matrix();
    let mut j0 = Matrix::zeros(h0.dim(), s.dim());
    j0.paste(0, 0, &i_full);
    let x = random_morphism(rng, &extra, &t).to_matrix();
    let mut p0 = Matrix::zeros(t.dim(), h0.dim());
    p0.paste(0, 0, &dec.pi_ch.to_matrix());
    p0.paste(0, ch_dim, &x);
    let j0 = PureMorphism::from_matrix(s.clone(), h0.clone(), &j0).unwrap();
    let p0 = PureMorphism::from_matrix(h0.clone(), t.clone(), &p0).unwrap();
    // Scramble h by a random graded automorphism and a random reordering
    // of its basis.
    let mut order: Vec<usize> = (0..h0.dim()).collect();
    order.shuffle(rng);
    let slots: Vec<Slot> = order.iter().map(|&i| h0.slots()[i]).collect();
    let h = PureObject::new(2, slots.clone()).unwrap();
    let perm = {
        let mut m = Matrix::zeros(h.dim(), h0.dim());
        for (new, &old) in order.iter().enumerate() {
            m.set(new, old, q(1));
        }
        m
    };
    let g = random_graded_automorphism(rng, &slots).mul(&perm).unwrap();
    let g_inv = qmat::inverse(&g).unwrap();
    let j = PureMorphism::from_matrix(s, h.clone(), &g.mul(&j0.to_matrix()).unwrap()).unwrap();
    let p = PureMorphism::from_matrix(h.clone(), t, &p0.to_matrix().mul(&g_inv).unwrap()).unwrap();
    VersalInstance { v, h, j, p }
}
