//! End-to-end acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use absix_core::atlas::{builtin_from_spec, curve_product, StratumAtlas};
use absix_core::qmat::Matrix;
use absix_core::wss::{cohomology_of_y, grw_c_via_restrictions};
use absix_core::{
    absolute_ic, boundary_cohomology, compare_candidates, direct_factor_check, grw, grw_c, gysin_complex,
    idempotent_kernel, ih_one_point, plus_dichotomy, restriction_complex, u_map, validate_atlas, versal_embed,
    weight_criteria, ch_factorization, CohomologyTable, MixedGraded, PureMorphism, PureObject,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn atlas(spec: &str) -> StratumAtlas {
    builtin_from_spec(spec).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

fn tate(m: i64) -> MixedGraded {
    MixedGraded::pure(PureObject::tate(m))
}

fn table(kind_of: &CohomologyTable, entries: &[(i64, MixedGraded)]) -> CohomologyTable {
    let mut t = CohomologyTable::new(kind_of.kind());
    for (n, v) in entries {
        t.set(*n, v.clone());
    }
    t
}

fn criterion_1() -> Outcome {
    let a = atlas("a1");
    let h = absolute_ic(&a).map_err(|e| e.to_string())?.table;
    ensure!(h == table(&h, &[(0, tate(0)), (2, tate(-1))]), "H_!* of a1 is {h:?}");
    ensure!(h.same_numbers(&cohomology_of_y(&atlas("pn:n=1"))), "H_!* of a1 differs from H(P^1)");
    let b = boundary_cohomology(&a).map_err(|e| e.to_string())?;
    ensure!(b == table(&b, &[(0, tate(0)), (1, tate(-1))]), "boundary of a1 is {b:?}");
    Ok("H_!*(A^1) = H(P^1), boundary (Q(0), Q(-1))".into())
}

fn criterion_2() -> Outcome {
    for n in 1..=3 {
        let a = atlas(&format!("an:n={n}"));
        let h = absolute_ic(&a).map_err(|e| e.to_string())?.table;
        ensure!(h == table(&h, &[(0, tate(0)), (2 * n, tate(-n))]), "H_!*(A^{n}) = {h:?}");
        let b = boundary_cohomology(&a).map_err(|e| e.to_string())?;
        ensure!(b == table(&b, &[(0, tate(0)), (2 * n - 1, tate(-n))]), "boundary of A^{n} = {b:?}");
    }
    Ok("sphere pattern for n = 1, 2, 3".into())
}

fn criterion_3() -> Outcome {
    let specs = [
        "low_dim_Z",
        "low_dim_Z:n=2,k=0",
        "low_dim_Z:n=4,k=1",
        "low_dim_Z:n=5,k=2",
        "points_in_proper",
        "points_in_proper:dim=2,k=3",
        "points_in_proper:dim=1,g=2,k=1",
    ];
    for spec in specs {
        let a = atlas(spec);
        let h = absolute_ic(&a).map_err(|e| e.to_string())?.table;
        ensure!(h.same_numbers(&cohomology_of_y(&a)), "{spec}: H_!* differs from H(Y)");
    }
    Ok(format!("H_!* = H(Y) on {} atlases", specs.len()))
}

fn criterion_4() -> Outcome {
    let zero = atlas("middle_dim_Z_selfint_zero");
    let h = absolute_ic(&zero).map_err(|e| e.to_string())?.table;
    ensure!(h.same_numbers(&cohomology_of_y(&zero)), "ruling line: H_!* differs from H(Y)");
    let diag = atlas("p1p1_minus_diagonal");
    let h = absolute_ic(&diag).map_err(|e| e.to_string())?.table;
    let y = cohomology_of_y(&diag);
    ensure!(h.dim(2) == 1 && y.dim(2) == 2, "diagonal: dim H^2_!* = {}", h.dim(2));
    for n in [0, 1, 3, 4] {
        ensure!(h.get(n).hodge_numbers() == y.get(n).hodge_numbers(), "diagonal: degree {n} differs");
    }
    Ok("ruling line keeps H(Y); diagonal drops one class in degree 2".into())
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for a in corpus() {
        let r = absolute_ic(&a).map_err(|e| e.to_string())?;
        for (n, dec) in &r.factorizations {
            ensure!(dec.i_ch.is_injective(), "{}: i_{n} not injective", a.name);
            ensure!(dec.pi_ch.is_surjective(), "{}: pi_{n} not surjective", a.name);
            let v = dec.pi_ch.compose(&dec.i_ch).map_err(|e| e.to_string())?;
            ensure!(v == r.u[n], "{}: pi_{n} o i_{n} != u_{n}", a.name);
            checked += 1;
        }
    }
    Ok(format!("{checked} factorizations"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..200 {
        let inst = random_versal_instance(&mut rng);
        let dec = ch_factorization(&inst.v);
        let e = versal_embed(&inst.v, &inst.h, &inst.j, &inst.p, &dec).map_err(|e| format!("case {case}: {e}"))?;
        let c = |x: &PureMorphism, y: &PureMorphism| x.compose(y).map_err(|e| format!("case {case}: {e}"));
        ensure!(c(&e.iota, &dec.i_ch)? == inst.j, "case {case}: iota o iCH != j");
        ensure!(c(&inst.p, &e.iota)? == dec.pi_ch, "case {case}: p o iota != piCH");
        ensure!(c(&e.q, &inst.j)? == dec.i_ch, "case {case}: q o j != iCH");
        ensure!(c(&dec.pi_ch, &e.q)? == inst.p, "case {case}: piCH o q != p");
        ensure!(c(&e.q, &e.iota)?.is_identity(), "case {case}: q o iota != id");
        ensure!(
            dec.total.direct_sum(&e.h_prime).map_err(|e| e.to_string())?.isomorphic(&inst.h),
            "case {case}: complement has the wrong type"
        );
    }
    Ok("200 random instances commute exactly".into())
}

fn criterion_7() -> Outcome {
    for a in corpus() {
        let r = absolute_ic(&a).map_err(|e| e.to_string())?;
        for (n, u) in &r.u {
            let i = r.interior[n].dim();
            ensure!(i <= u.source().dim() && i <= u.target().dim(), "{}: H^{n}_! too big", a.name);
        }
        ensure!(direct_factor_check(&r.table, &cohomology_of_y(&a)), "{}: H_!* not a factor of H(Y)", a.name);
    }
    Ok("interior bounded by both sides; H_!* is a direct factor of H(Y)".into())
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    for a in connected_corpus() {
        let plus = ih_one_point(&a).map_err(|e| e.to_string())?;
        let h = grw(&a).map_err(|e| e.to_string())?;
        let hc = grw_c_via_restrictions(&a).map_err(|e| e.to_string())?;
        let d = a.d();
        for n in 0..=2 * d {
            let expected = match n.cmp(&d) {
                std::cmp::Ordering::Less => h.get(n).hodge_numbers(),
                std::cmp::Ordering::Greater => hc.get(n).hodge_numbers(),
                std::cmp::Ordering::Equal => {
                    let u = u_map(&a, d).map_err(|e| e.to_string())?;
                    let mut counts = BTreeMap::new();
                    for (t, b) in u.blocks() {
                        let r = oracle_rank(b);
                        if r > 0 {
                            counts.insert(*t, r);
                        }
                    }
                    if counts.is_empty() { BTreeMap::new() } else { BTreeMap::from([(d, counts)]) }
                }
            };
            ensure!(plus.get(n).hodge_numbers() == expected, "{}: degree {n} mismatch", a.name);
        }
        count += 1;
    }
    Ok(format!("{count} connected corpus atlases"))
}

fn criterion_9() -> Outcome {
    for a in connected_corpus() {
        let c = weight_criteria(&a).map_err(|e| e.to_string())?;
        let plus = ih_one_point(&a).map_err(|e| e.to_string())?;
        let star = absolute_ic(&a).map_err(|e| e.to_string())?.table;
        ensure!(c.verdict == plus.same_numbers(&star), "{}: verdict {} disagrees with tables", a.name, c.verdict);
        ensure!(c.cond2_holds() == c.cond3_holds(), "{}: cond2 and cond3 disagree", a.name);
        ensure!(!c.verdict || (c.cond6 && c.cond7), "{}: verdict without purity", a.name);
    }
    Ok("verdict matches the table comparison on every corpus atlas".into())
}

fn criterion_10() -> Outcome {
    let positive = [
        "a1",
        "points_in_proper",
        "low_dim_Z",
        "middle_dim_Z_selfint_nonzero",
        "p1p1_minus_diagonal",
        "an:n=1",
        "an:n=2",
        "an:n=3",
    ];
    for spec in positive {
        let c = weight_criteria(&atlas(spec)).map_err(|e| e.to_string())?;
        ensure!(c.verdict, "{spec}: verdict false");
    }
    let ruling = atlas("middle_dim_Z_selfint_zero");
    ensure!(!weight_criteria(&ruling).map_err(|e| e.to_string())?.verdict, "ruling line: verdict true");
    let dich = plus_dichotomy(&ruling).map_err(|e| e.to_string())?;
    ensure!(
        dich.dimension_jump() != dich.no_compatible_identification(),
        "ruling line: not exactly one horn ({dich:?})"
    );
    let gm = compare_candidates(&atlas("gm_times_a1")).map_err(|e| e.to_string())?;
    ensure!(!gm.matches_plus && !gm.matches_y, "gm_times_a1 matches a candidate");
    Ok(format!("{} positive cases; ruling line fires {:?}; gm_times_a1 matches neither", positive.len(), dich.horn))
}

fn structural(a: &StratumAtlas) -> Result<(), String> {
    let report = validate_atlas(a);
    ensure!(report.is_valid(), "{} invalid:\n{report}", a.name);
    let d = a.d();
    for k in 0..=2 * d {
        ensure!(gysin_complex(a, k).map_err(|e| e.to_string())?.is_complex(), "{}: Gysin d o d != 0 at {k}", a.name);
        ensure!(
            restriction_complex(a, k).map_err(|e| e.to_string())?.is_complex(),
            "{}: restriction d o d != 0 at {k}",
            a.name
        );
    }
    let h = grw(a).map_err(|e| e.to_string())?;
    let hc = grw_c(a).map_err(|e| e.to_string())?;
    ensure!(hc.same_numbers(&grw_c_via_restrictions(a).map_err(|e| e.to_string())?), "{}: H_c routes differ", a.name);
    for (&n, mg) in hc.degrees() {
        for (&w, piece) in mg.pieces() {
            let dual = h.get(2 * d - n).piece(2 * d - w);
            let mirrored: BTreeMap<_, _> =
                dual.hodge_numbers().into_iter().map(|((p, q), c)| ((d - p, d - q), c)).collect();
            ensure!(piece.hodge_numbers() == mirrored, "{}: duality fails in degree {n}, weight {w}", a.name);
        }
    }
    ensure!(h.degrees().keys().all(|&n| hc.get(2 * d - n).dim() == h.dim(n)), "{}: total duality fails", a.name);
    let chi = a.stratified_euler_characteristic();
    ensure!(h.euler_characteristic() == chi, "{}: chi(H) = {} vs {chi}", a.name, h.euler_characteristic());
    ensure!(hc.euler_characteristic() == chi, "{}: chi(H_c) mismatch", a.name);
    let star = absolute_ic(a).map_err(|e| e.to_string())?.table;
    for (label, t) in [("H", &h), ("H_c", &hc), ("H_!*", &star)] {
        let bad = t.weight_violations(d);
        ensure!(bad.is_empty(), "{}: {label} weights out of range at {bad:?}", a.name);
    }
    let b = boundary_cohomology(a).map_err(|e| e.to_string())?;
    ensure!(
        b.euler_characteristic() == h.euler_characteristic() - hc.euler_characteristic(),
        "{}: boundary Euler characteristic",
        a.name
    );
    Ok(())
}

fn idempotent_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let a = random_idempotent(rng, n);
    let d = random_idempotent(rng, m);
    let x = random_int_matrix(rng, n, m, 3);
    let y = random_int_matrix(rng, n, m, 3);
    let id_n = Matrix::identity(n);
    let id_m = Matrix::identity(m);
    let b = a
        .mul(&x)
        .and_then(|t| t.mul(&id_m.sub(&d).unwrap()))
        .and_then(|t| t.add(&id_n.sub(&a).unwrap().mul(&y).unwrap().mul(&d).unwrap()))
        .map_err(|e| e.to_string())?;
    let k = idempotent_kernel(&a, &b, &d).map_err(|e| e.to_string())?;
    let mut full = Matrix::zeros(n + m, n + m);
    full.paste(0, 0, &a);
    full.paste(0, n, &b);
    full.paste(n, n, &d);
    ensure!(full.mul(&k).map_err(|e| e.to_string())?.is_zero(), "idempotent kernel not killed");
    ensure!(oracle_rank(&k) == k.cols(), "idempotent kernel columns dependent");
    ensure!(k.cols() == n + m - oracle_rank(&full), "idempotent kernel has the wrong dimension");
    Ok(())
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for a in corpus() {
        structural(&a)?;
    }
    let mut kunneth_checked = 0;
    for i in 0..100 {
        let a = if i % 4 == 0 {
            let factors: Vec<(usize, usize)> =
                (0..rng.gen_range(1..=2)).map(|_| (rng.gen_range(0..=1), rng.gen_range(0..=2))).collect();
            let base = curve_product(&factors);
            let expected = factors
                .iter()
                .map(|&(g, k)| punctured_curve(g, k))
                .reduce(|x, y| kunneth(&x, &y))
                .unwrap();
            let a = random_basis_change(&mut rng, &base);
            let got = table_numbers(&grw(&a).map_err(|e| e.to_string())?);
            ensure!(got == expected, "{}: Künneth oracle disagrees", a.name);
            kunneth_checked += 1;
            a
        } else {
            random_atlas(&mut rng)
        };
        structural(&a)?;
    }
    for _ in 0..100 {
        idempotent_case(&mut rng)?;
    }
    Ok(format!("corpus + 100 random atlases ({kunneth_checked} against Künneth), 100 idempotent kernels"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("affine line", criterion_1),
        ("affine spaces", criterion_2),
        ("small boundary", criterion_3),
        ("middle-dimensional boundary", criterion_4),
        ("factorization ranks", criterion_5),
        ("versal embedding", criterion_6),
        ("interior bounds and direct factor", criterion_7),
        ("one-point compactification", criterion_8),
        ("criteria audit", criterion_9),
        ("candidate verdicts", criterion_10),
        ("structural invariants", criterion_11),
    ];
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {label}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {label}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
