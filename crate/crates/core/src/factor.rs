//! The semisimple factorization calculus.
//!
//! For `v: S → T`, `CH(v) = ker(v) ⊕ im(v) ⊕ coker(v)` and `v` factors as
//! `S → CH(v) → T` through a monomorphism followed by an epimorphism. Any
//! other mono/epi factorization `S → H → T` contains `CH(v)` as a compatible
//! direct summand ([`versal_embed`]). All splittings are chosen in pivot
//! order so results are deterministic.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hodge::{PureMorphism, PureObject, Slot};
use crate::qmat::{self, Matrix};

/// `CH(v)` with its canonical factorization `v = piCH ∘ iCH`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChDecomposition {
    pub kernel_part: PureObject,
    pub image_part: PureObject,
    pub cokernel_part: PureObject,
    /// `kernel_part ⊕ image_part ⊕ cokernel_part`, in that order.
    pub total: PureObject,
    pub i_ch: PureMorphism,
    pub pi_ch: PureMorphism,
}

/// Per-type ingredients of the factorization.
struct BlockSplitting {
    /// Columns span `ker(v)`.
    kernel: Matrix,
    /// Left inverse of `kernel`.
    kernel_retraction: Matrix,
    /// Columns span `im(v)`.
    image: Matrix,
    /// Coordinates of `v` in the `image` basis.
    image_coords: Matrix,
    /// Right inverse of the cokernel projection.
    cokernel_section: Matrix,
}

fn split_block(v: &Matrix) -> Result<BlockSplitting> {
    let kernel = qmat::kernel_basis(v);
    let kernel_retraction = qmat::left_inverse(&kernel)?;
    let image = qmat::image_basis(v);
    let image_coords = qmat::solve(&image, v)?.expect("v lies in its own image");
    let cokernel_section = qmat::right_inverse(&qmat::cokernel_projection(v))?;
    Ok(BlockSplitting { kernel, kernel_retraction, image, image_coords, cokernel_section })
}

fn types_of(v: &PureMorphism) -> Vec<Slot> {
    let mut t: Vec<Slot> = v.source().types().union(&v.target().types()).copied().collect();
    t.sort();
    t
}

fn parts(v: &PureMorphism) -> (PureObject, PureObject, PureObject) {
    let w = v.weight();
    let (mut k, mut i, mut c) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    for t in types_of(v) {
        let b = v.block(t);
        let r = qmat::rank(&b);
        k.insert(t, b.cols() - r);
        i.insert(t, r);
        c.insert(t, b.rows() - r);
    }
    let mk = |m: &BTreeMap<Slot, usize>| PureObject::from_counts(w, m).expect("types have weight w");
    (mk(&k), mk(&i), mk(&c))
}

/// The object `CH(v)`.
pub fn ch_object(v: &PureMorphism) -> PureObject {
    let (k, i, c) = parts(v);
    k.direct_sum(&i).and_then(|x| x.direct_sum(&c)).expect("equal weights")
}

/// `CH(v)` together with `iCH = (s, q, 0)` and `piCH = 0 + ι + t`.
pub fn ch_factorization(v: &PureMorphism) -> ChDecomposition {
    let (kernel_part, image_part, cokernel_part) = parts(v);
    let total = ch_object(v);
    let mut i_blocks = BTreeMap::new();
    let mut pi_blocks = BTreeMap::new();
    for t in types_of(v) {
        let b = v.block(t);
        let sp = split_block(&b).expect("pivot-order splittings always exist");
        let (s, tt) = (b.cols(), b.rows());
        let (k, r) = (sp.kernel.cols(), sp.image.cols());
        let c = tt - r;
        let mut i = Matrix::zeros(k + r + c, s);
        i.paste(0, 0, &sp.kernel_retraction);
        i.paste(k, 0, &sp.image_coords);
        let mut p = Matrix::zeros(tt, k + r + c);
        p.paste(0, k, &sp.image);
        p.paste(0, k + r, &sp.cokernel_section);
        i_blocks.insert(t, i);
        pi_blocks.insert(t, p);
    }
    let i_ch = PureMorphism::new(v.source().clone(), total.clone(), i_blocks).expect("block shapes");
    let pi_ch = PureMorphism::new(total.clone(), v.target().clone(), pi_blocks).expect("block shapes");
    ChDecomposition { kernel_part, image_part, cokernel_part, total, i_ch, pi_ch }
}

/// Result of embedding `CH(v)` into another factorization `S → H → T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VersalEmbedding {
    /// `CH(v) → H`, with `iota ∘ iCH = j` and `p ∘ iota = piCH`.
    pub iota: PureMorphism,
    /// `H → CH(v)`, with `q ∘ j = iCH`, `piCH ∘ q = p` and `q ∘ iota = id`.
    pub q: PureMorphism,
    /// A complement: `H ≅ CH(v) ⊕ h_prime`.
    pub h_prime: PureObject,
}

fn precondition(msg: impl Into<String>) -> Error {
    Error::PreconditionViolated(msg.into())
}

/// Embeds the chosen `CH(v)` into any mono/epi factorization `v = p ∘ j`
/// through `h`, compatibly with both factorizations.
pub fn versal_embed(
    v: &PureMorphism,
    h: &PureObject,
    j: &PureMorphism,
    p: &PureMorphism,
    dec: &ChDecomposition,
) -> Result<VersalEmbedding> {
    if j.source() != v.source() || j.target() != h || p.source() != h || p.target() != v.target() {
        return Err(precondition("j and p must form a factorization S -> H -> T of v"));
    }
    if dec.i_ch.source() != v.source() || dec.pi_ch.target() != v.target() {
        return Err(precondition("decomposition belongs to a different morphism"));
    }
    if !j.is_injective() {
        return Err(precondition("j is not injective"));
    }
    if !p.is_surjective() {
        return Err(precondition("p is not surjective"));
    }
    if &p.compose(j)? != v {
        return Err(precondition("p ∘ j differs from v"));
    }
    if &dec.pi_ch.compose(&dec.i_ch)? != v {
        return Err(precondition("decomposition does not factor v"));
    }

    let ch = &dec.total;
    let mut iota_blocks = BTreeMap::new();
    let mut q_blocks = BTreeMap::new();
    let mut h_prime_counts = BTreeMap::new();
    let mut types: Vec<Slot> = h.types().union(&ch.types()).copied().collect();
    types.sort();
    for t in types {
        let (iota, q) = versal_block(&v.block(t), &j.block(t), &p.block(t), &dec.i_ch.block(t), &dec.pi_ch.block(t))?;
        h_prime_counts.insert(t, h.count(t) - ch.count(t));
        iota_blocks.insert(t, iota);
        q_blocks.insert(t, q);
    }
    let iota = PureMorphism::new(ch.clone(), h.clone(), iota_blocks)?;
    let q = PureMorphism::new(h.clone(), ch.clone(), q_blocks)?;
    let h_prime = PureObject::from_counts(h.weight(), &h_prime_counts)?;
    Ok(VersalEmbedding { iota, q, h_prime })
}

/// One type block of [`versal_embed`]. `ib` and `pib` are the blocks of the
/// caller's factorization, whose coordinates are `[ker | im | coker]`.
fn versal_block(v: &Matrix, j: &Matrix, p: &Matrix, ib: &Matrix, pib: &Matrix) -> Result<(Matrix, Matrix)> {
    let hdim = j.rows();
    let chdim = ib.rows();
    let k_v = qmat::kernel_basis(v);
    let k = k_v.cols();
    let top: Vec<usize> = (0..k).collect();
    let rest: Vec<usize> = (k..chdim).collect();
    // s: S → ker(v), the kernel component of iCH; `e` embeds the kernel
    // coordinates back into S so that iCH ∘ e is the inclusion.
    let s = ib.select_rows(&top);
    let e = k_v.mul(&qmat::inverse(&s.mul(&k_v)?).map_err(|_| precondition("iCH is not a retraction onto ker(v)"))?)?;
    let pi_rest = pib.select_cols(&rest);
    let sigma_rest = qmat::inverse(&pi_rest).map_err(|_| precondition("piCH is not an isomorphism off the kernel part"))?;

    // ker(p) = j(ker v) ⊕ H', and H = im(j) ⊕ H' ⊕ H''.
    let je = j.mul(&e)?;
    let ker_p = qmat::kernel_basis(p);
    let h1 = ker_p.select_cols(&qmat::extending_columns(&je, &ker_p)?);
    let j_h1 = j.hstack(&h1)?;
    let h2 = qmat::complement_columns(&j_h1)?;
    let basis = j_h1.hstack(&h2)?;
    // s_H = (j∘s, id_H', 0): a projection of H onto ker(p) compatible with s.
    let s_h = je
        .mul(&s)?
        .hstack(&h1)?
        .hstack(&Matrix::zeros(hdim, h2.cols()))?
        .mul(&qmat::inverse(&basis)?)?;
    // σ_H: T → ker(s_H), inverse to p there.
    let n = qmat::kernel_basis(&s_h);
    let sigma_h = n.mul(&qmat::inverse(&p.mul(&n)?)?)?;

    let mut iota = Matrix::zeros(hdim, chdim);
    iota.paste(0, 0, &je);
    iota.paste(0, k, &sigma_h.mul(&pi_rest)?);

    // q = (kernel coordinates of π'₁ ∘ s_H, σ_CH ∘ p), π'₁ killing H'.
    let coords = qmat::left_inverse(&je.hstack(&h1)?)?.mul(&s_h)?;
    let mut q = Matrix::zeros(chdim, hdim);
    q.paste(0, 0, &coords.select_rows(&top));
    q.paste(k, 0, &sigma_rest.mul(p)?);
    debug_assert_eq!(p.mul(j)?, *v);
    Ok((iota, q))
}

/// Kernel embedding of the idempotent `e = [[A, B], [0, D]]`, built as
/// `[[K_A, -B·K_D], [0, K_D]]`.
pub fn idempotent_kernel(a: &Matrix, b: &Matrix, d: &Matrix) -> Result<Matrix> {
    let (n, m) = (a.rows(), d.rows());
    if !a.is_square() || !d.is_square() || b.shape() != (n, m) {
        return Err(Error::Dimension(format!(
            "blocks {}x{}, {}x{}, {}x{} do not form a square block matrix",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            d.rows(),
            d.cols()
        )));
    }
    let idempotent = a.mul(a)? == *a && d.mul(d)? == *d && a.mul(b)?.add(&b.mul(d)?)? == *b;
    if !idempotent {
        return Err(Error::NotIdempotent);
    }
    let ka = qmat::kernel_basis(a);
    let kd = qmat::kernel_basis(d);
    let mut out = Matrix::zeros(n + m, ka.cols() + kd.cols());
    out.paste(0, 0, &ka);
    out.paste(0, ka.cols(), &b.mul(&kd)?.neg());
    out.paste(n, ka.cols(), &kd);
    Ok(out)
}
