//! Acceptance run: one PASS/FAIL line per criterion. Expected values are
//! written out here independently of the engine's own tables.
//!
//! A criterion whose stated counts are contradicted by the computation is
//! reported as FAIL with the computed values; the run only exits nonzero if
//! the computed values themselves drift or another criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slp_cli::tables::layer_count;
use slp_cli::theorem::verify;
use slp_core::deform::{binomial_matrix_check, deformation_scan, fibration_validate};
use slp_core::lefschetz::{
    enumerate_path_systems, middle_form_reduce, path_matrix,
    permutation_equivalent, signed_sum, strong_lefschetz_report, symmetry_check_with, uniform_sign,
    weak_lefschetz_report,
};
use slp_core::linalg::Matrix;
use slp_core::polyring::{
    bgg_apply, linear_form, monomials, weyl_elements, CoinvariantPresentation, Polynomial, SchubertDualBasis,
};
use slp_core::quotient::{inversion_count, QuotientPoset};
use slp_core::rootsystem::{designated_theta, RootSystem, Theta, Vector};
use slp_core::scalar::rationals;
use slp_core::Scalar;

struct Verdict {
    pass: bool,
    detail: String,
    /// A FAIL that matches the documented deviation exactly.
    expected_fail: bool,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into(), expected_fail: false }
    }
}

fn rs(t: &str) -> RootSystem {
    RootSystem::new(t.parse().unwrap()).unwrap()
}

fn designated(t: &str) -> (RootSystem, QuotientPoset) {
    let r = rs(t);
    let p = QuotientPoset::enumerate(&r, &designated_theta(&r.coxeter_type())).unwrap();
    (r, p)
}

fn ints(f: &slp_core::FieldRef, rows: &[&[i64]]) -> Matrix {
    Matrix::from_ints(f, rows)
}

fn criterion_1() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;

    let t = Instant::now();
    let (r, p) = designated("H4");
    let f = r.field().clone();
    let scale = Scalar::parse("11/2 + 3*g", &f).unwrap().inv().unwrap();
    let mf = middle_form_reduce(&p.rescaled(&scale), &r).unwrap();
    let two_b = Scalar::parse("-1/2 + 1/2*g", &f).unwrap();
    assert!((two_b.to_f64() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
    let (z, o, w) = (Scalar::zero(&f), Scalar::one(&f), Scalar::from_int(&f, 2));
    let expect = Matrix::from_rows(
        &f,
        vec![
            vec![w.clone(), o.clone(), z.clone(), z.clone()],
            vec![o.clone(), w.clone(), o.clone(), z.clone()],
            vec![z.clone(), o.clone(), w.clone(), two_b.clone()],
            vec![z.clone(), z.clone(), two_b, w.clone()],
        ],
    )
    .unwrap();
    let h4 = permutation_equivalent(&mf.matrix, &expect).is_some() && mf.positive_definite;
    let h4_secs = t.elapsed().as_secs_f64();
    ok &= h4 && h4_secs < 30.0;
    notes.push(format!("H4 matrix match + PD = {h4} ({h4_secs:.1}s)"));

    let t = Instant::now();
    let (r, p) = designated("E8");
    let mf = middle_form_reduce(&p.rescaled(&Scalar::from_ratio(r.field(), 2, 29)), &r).unwrap();
    let e8_expect = ints(
        r.field(),
        &[
            &[2, 0, 0, 0, 0, 0, 0, 1],
            &[0, 2, 1, 0, 1, 0, 0, 0],
            &[0, 1, 2, 0, 0, 0, 0, 1],
            &[0, 0, 0, 2, 1, 0, 0, 0],
            &[0, 1, 0, 1, 2, 1, 0, 0],
            &[0, 0, 0, 0, 1, 2, 1, 0],
            &[0, 0, 0, 0, 0, 1, 2, 0],
            &[1, 0, 1, 0, 0, 0, 0, 2],
        ],
    );
    let e8 = permutation_equivalent(&mf.matrix, &e8_expect).is_some() && mf.positive_definite;
    let e8_secs = t.elapsed().as_secs_f64();
    ok &= e8 && e8_secs < 30.0;
    notes.push(format!("E8 matrix match + PD = {e8} ({e8_secs:.1}s)"));
    Verdict::new(ok, notes.join("; "))
}

fn criterion_2() -> Verdict {
    let (_, p) = designated("E7");
    let two = Scalar::int(2);
    let e7 = p.edges().iter().all(|e| &e.weight * &two == Scalar::int(18));
    let half = p.edges()[0].weight.clone();

    let (r8, p8) = designated("E8");
    let (_, _, rho_bar) = r8.rho_vectors(&designated_theta(&r8.coxeter_type())).unwrap();
    let (idx, c) = r8.root_multiple(&rho_bar).unwrap();
    let scaled = p8.rescaled(&c.inv().unwrap());
    let weights_ok = scaled.edges().iter().all(|e| {
        let deg = scaled.nodes()[e.src].degree;
        e.weight == Scalar::int(1) || (e.weight == Scalar::int(2) && deg == 28)
    });
    let has_two = scaled.edges().iter().any(|e| e.weight == Scalar::int(2));
    let h = r8.height(idx) == Scalar::int(29) && idx == r8.highest_root();
    Verdict::new(
        e7 && weights_ok && has_two && h,
        format!(
            "E7 weights on 2 rho-bar all 18 = {e7} (half-sum weight {half}); E8 weights in {{1,2}}, 2 only out of degree 28 = {}; h(theta) = 29: {h}",
            weights_ok && has_two
        ),
    )
}

fn criterion_3() -> Verdict {
    let mut hard_ok = true;
    let mut deviations = Vec::new();
    let mut notes = Vec::new();

    let (_, f4) = designated("F4");
    let mut single: Vec<usize> = Vec::new();
    for i in 0..=3 {
        let all = enumerate_path_systems(&f4, i, false).unwrap();
        hard_ok &= uniform_sign(&all) == Some(1);
        single.push(all.len());
    }
    if single.iter().any(|&c| c != 1) {
        deviations.push(format!("F4 path systems V^i -> V^(15-i), i <= 3: {single:?} (stated 1)"));
    }
    for i in 4..=7 {
        let vd = enumerate_path_systems(&f4, i, true).unwrap();
        hard_ok &= vd.len() == 2 && vd[0].weight != vd[1].weight;
    }
    notes.push("F4 two vertex-disjoint systems with distinct weights for 4..7".to_string());

    let (_, e7) = designated("E7");
    for i in (0..=4).chain(9..=13) {
        hard_ok &= uniform_sign(&enumerate_path_systems(&e7, i, true).unwrap()).is_some();
    }
    for i in 5..=8 {
        let legs = slp_cli::tables::middle_legs(&e7, i, (12, 15)).unwrap();
        hard_ok &= legs.configurations == 9 && legs.sign_determined_by_leg && !legs.det.is_zero();
    }
    notes.push("E7 nine middle-leg configurations (25 edge-level legs)".to_string());

    let (_, e6) = designated("E6");
    for i in 0..=8 {
        hard_ok &= uniform_sign(&enumerate_path_systems(&e6, i, true).unwrap()).is_some();
    }

    // (layer, stated count, counted with all matchings of one sign)
    let h4_table: &[(usize, usize, bool)] = &[
        (22, 2, false),
        (21, 2, true),
        (20, 3, false),
        (19, 1, false),
        (18, 2, true),
        (17, 2, true),
        (16, 1, false),
        (15, 1, false),
        (14, 1, false),
        (13, 1, false),
        (12, 3, false),
        (11, 1, false),
        (10, 1, false),
        (9, 1, false),
        (8, 1, false),
        (7, 1, false),
    ];
    let e8_table: &[(usize, usize, bool)] = &[
        (28, 1, false),
        (27, 2, true),
        (26, 3, false),
        (25, 2, true),
        (24, 5, false),
        (23, 1, false),
        (22, 1, false),
        (21, 2, true),
        (20, 3, false),
        (19, 1, false),
        (18, 1, false),
        (17, 1, false),
        (16, 1, false),
        (15, 2, true),
        (14, 1, false),
        (13, 1, false),
        (12, 1, false),
        (11, 1, false),
        (10, 1, false),
        (9, 1, false),
        (8, 1, false),
        (7, 1, false),
    ];
    for (t, table) in [("H4", h4_table), ("E8", e8_table)] {
        let (_, p) = designated(t);
        for &(i, stated, same) in table {
            let c = layer_count(&p, i, stated, same).unwrap();
            hard_ok &= c.full_rank;
            if c.count != stated || (same && !c.uniform_sign) {
                deviations.push(format!("{t} layer {i}: {} matchings (stated {stated})", c.count));
            }
        }
    }
    let known = vec![
        "F4 path systems V^i -> V^(15-i), i <= 3: [49, 49, 49, 49] (stated 1)".to_string(),
        "H4 layer 15: 2 matchings (stated 1)".to_string(),
    ];
    let pass = hard_ok && deviations.is_empty();
    let detail = if deviations.is_empty() {
        notes.join("; ")
    } else {
        format!("deviations: {}; everything else reproduced ({})", deviations.join("; "), notes.join("; "))
    };
    Verdict { pass, detail, expected_fail: hard_ok && deviations == known }
}

/// prod_d (1 + t + ... + t^(d-1)).
fn poincare(degrees: &[usize]) -> Vec<u64> {
    degrees.iter().fold(vec![1u64], |acc, &d| {
        let mut out = vec![0; acc.len() + d - 1];
        for (i, a) in acc.iter().enumerate() {
            for o in &mut out[i..i + d] {
                *o += a;
            }
        }
        out
    })
}

fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn criterion_4() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for (t, n, top) in [("F4", 24, 15), ("E6", 27, 16), ("E7", 56, 27), ("E8", 240, 57), ("H4", 120, 45), ("H3", 12, 10)]
    {
        let (r, p) = designated(t);
        let ty = r.coxeter_type();
        let theta = designated_theta(&ty);
        let sub: Vec<usize> =
            theta.components(&ty).iter().flat_map(|(_, c)| c.unwrap().fundamental_degrees()).collect();
        // histogram times the Poincare polynomial of W_Theta must equal that of W
        let whole = poincare(&ty.fundamental_degrees());
        let part = poincare(&sub);
        let h: Vec<u64> = p.degree_histogram().iter().map(|&c| c as u64).collect();
        let oracle_ok = poly_mul(&h, &part) == whole;
        let sym = h.iter().eq(h.iter().rev());
        let this = p.len() == n && p.top_degree() == top && oracle_ok && sym;
        ok &= this;
        notes.push(format!("{t}: {} (r = {})", p.len(), p.top_degree()));
    }
    Verdict::new(ok, notes.join(", "))
}

fn criterion_5() -> Verdict {
    let t = Instant::now();
    let mut full = Vec::new();
    for n in 1..=7 {
        full.push(format!("A{n}"));
    }
    for n in 2..=6 {
        full.push(format!("B{n}"));
    }
    for n in 4..=6 {
        full.push(format!("D{n}"));
    }
    for m in 3..=12 {
        full.push(format!("I2({m})"));
    }
    full.extend(["H3", "F4", "E6", "E7"].map(String::from));
    let mut failed = Vec::new();
    for name in &full {
        let (_, p) = designated(name);
        if !strong_lefschetz_report(&p).pass {
            failed.push(name.clone());
        }
    }
    for name in ["H4", "E8"] {
        let (r, p) = designated(name);
        let mf = middle_form_reduce(&p, &r).unwrap();
        // weak report covers every step below the middle, including i < 7
        let weak = weak_lefschetz_report(&p);
        if !(mf.strong_verdict && weak.pass && weak.steps.len() == p.top_degree() / 2) {
            failed.push(name.to_string());
        }
    }
    let secs = t.elapsed().as_secs_f64();
    Verdict::new(
        failed.is_empty() && secs < 300.0,
        format!("{} quotients by determinants, H4 and E8 by middle form; failures {failed:?}", full.len()),
    )
}

fn criterion_6() -> Verdict {
    let mut checked = 0;
    let mut bad = Vec::new();
    for t in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "I2(5)", "I2(6)", "I2(8)", "H3", "F4"] {
        let r = rs(t);
        for mask in 0u32..(1 << r.rank()) {
            let theta = Theta::new((0..r.rank()).filter(|i| mask >> i & 1 == 1).collect());
            let p = QuotientPoset::enumerate(&r, &theta).unwrap();
            if p.len() > 30 {
                continue;
            }
            checked += 1;
            let top = p.top_degree();
            for i in 0..=top / 2 {
                let det = path_matrix(&p, i, top - i).unwrap().matrix.det();
                let all = signed_sum(&p, &enumerate_path_systems(&p, i, false).unwrap());
                let vd = signed_sum(&p, &enumerate_path_systems(&p, i, true).unwrap());
                if det != all || det != vd {
                    bad.push(format!("{t}/{:?} degree {i}", theta.indices()));
                }
            }
        }
    }
    Verdict::new(bad.is_empty(), format!("{checked} posets with <= 30 nodes, mismatches {bad:?}"))
}

fn criterion_7() -> Verdict {
    let mut ok = true;
    for t in ["A2", "A3", "B2", "B3", "I2(5)", "I2(6)", "I2(7)"] {
        let r = rs(t);
        let pres = CoinvariantPresentation::new(&r).unwrap();
        let s = SchubertDualBasis::new(&pres).unwrap();
        let (rho, _, _) = r.rho_vectors(&Theta::empty()).unwrap();
        let l = linear_form(&r, &rho);
        let p = QuotientPoset::enumerate(&r, &Theta::empty()).unwrap();
        let d = r.num_positive();
        for i in 0..=d / 2 {
            let a = s.power_matrix(&pres, &l, i, d - i).unwrap();
            let b = path_matrix(&p, i, d - i).unwrap().matrix;
            ok &= a == b && !a.det().is_zero();
        }
    }
    let r = rs("A2");
    let (rho, _, _) = r.rho_vectors(&Theta::empty()).unwrap();
    let w0 = weyl_elements(&r).pop().unwrap();
    let oracle = bgg_apply(&r, &w0.word, &linear_form(&r, &rho).pow(3)).unwrap().constant_term();
    let p = QuotientPoset::enumerate(&r, &Theta::empty()).unwrap();
    let entry = path_matrix(&p, 0, 3).unwrap().matrix.get(0, 0).clone();
    ok &= entry == oracle && oracle == Scalar::int(6);
    Verdict::new(ok, format!("Schubert route = path route on 7 types; A2 top entry {entry}, divided-difference oracle {oracle}"))
}

fn reduced_words(r: &RootSystem, v: &Vector) -> Vec<Vec<usize>> {
    if inversion_count(r, v) == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..r.rank() {
        if r.coroot(r.simple_index(i), v).sign() < 0 {
            for mut w in reduced_words(r, &r.reflect_simple(i, v)) {
                w.insert(0, i);
                out.push(w);
            }
        }
    }
    out
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ok = true;
    let mut words = 0;
    let mut nonreduced = 0;
    for (t, degree) in [("A3", 6), ("B2", 4)] {
        let r = rs(t);
        let mons = monomials(r.dim(), degree);
        let samples: Vec<Polynomial> = (0..5)
            .map(|_| {
                (0..8).fold(Polynomial::zero(r.field(), r.dim()), |acc, _| {
                    let m = &mons[rng.gen_range(0..mons.len())];
                    acc.add(&Polynomial::monomial(r.field(), m).scale(&Scalar::int(rng.gen_range(-5..=5))))
                })
            })
            .collect();
        for e in weyl_elements(&r) {
            let ws = reduced_words(&r, &e.vector);
            words += ws.len();
            for f in &samples {
                let first = bgg_apply(&r, &ws[0], f).unwrap();
                ok &= ws[1..].iter().all(|w| bgg_apply(&r, w, f).unwrap() == first);
            }
        }
        let (rho, _, _) = r.rho_vectors(&Theta::empty()).unwrap();
        let mut all: Vec<Vec<usize>> = vec![Vec::new()];
        for len in 1..=4 {
            all = all.iter().flat_map(|w| (0..r.rank()).map(move |i| [w.clone(), vec![i]].concat())).collect();
            for w in &all {
                if inversion_count(&r, &r.apply_word(w, &rho)) == len {
                    continue;
                }
                nonreduced += 1;
                ok &= samples.iter().all(|f| bgg_apply(&r, w, f).unwrap().is_zero());
            }
        }
    }
    Verdict::new(ok, format!("{words} reduced words agree on 5 seeded samples; {nonreduced} non-reduced words give zero"))
}

fn criterion_9() -> Verdict {
    let mut bad = Vec::new();
    let mut n = 0;
    for t in [
        "A4", "A6", "B3", "B5", "D4", "D6", "I2(5)", "I2(8)", "H3", "F4", "E6", "E7", "H4", "E8",
    ] {
        let (r, p) = designated(t);
        let alpha = p.antiautomorphism(&r).unwrap();
        for i in 0..=p.top_degree() / 2 {
            n += 1;
            if !symmetry_check_with(&p, &alpha, i).unwrap() {
                bad.push(format!("{t} degree {i}"));
            }
        }
    }
    Verdict::new(bad.is_empty(), format!("{n} matrices checked, asymmetric {bad:?}"))
}

fn choose(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        0
    } else {
        (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
    }
}

fn criterion_10() -> Verdict {
    let q = rationals();
    let mut ok = true;
    let mut cases = 0;
    for n in 0..=8usize {
        for m in n..=8usize {
            let d = n + m;
            for i in 0..=d / 2 {
                cases += 1;
                let c = binomial_matrix_check(n, m, i).unwrap();
                // (x + y)^(d - 2i) on the monomials x^p y^(deg - p) of Q[x,y]/(x^(n+1), y^(m+1))
                let range = |deg: usize| (deg.saturating_sub(m)..=deg.min(n)).collect::<Vec<_>>();
                let oracle: Vec<Vec<i64>> = range(d - i)
                    .iter()
                    .map(|&b| range(i).iter().map(|&a| choose((d - 2 * i) as i64, b as i64 - a as i64)).collect())
                    .collect();
                let rows: Vec<&[i64]> = oracle.iter().map(Vec::as_slice).collect();
                ok &= c.agrees && c.nonzero && c.direct == ints(&q, &rows);
            }
        }
    }
    Verdict::new(ok, format!("{cases} (n, m, i) cases with n <= m <= 8"))
}

fn criterion_11() -> Verdict {
    let t = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (ty, theta) in [("A2", vec![0]), ("A3", vec![0, 1]), ("B2", vec![0])] {
        let fd = fibration_validate(&rs(ty), &Theta::new(theta)).unwrap();
        let hyp = fd.checks.iter().all(|(_, c)| *c);
        let rep = deformation_scan(&fd).unwrap();
        let dk0 = rep.dk.iter().all(|d| !d.at0.is_zero());
        ok &= hyp && dk0 && rep.final_check && rep.t0 >= 1;
        notes.push(format!("{ty}: t0 = {}, final check {}", rep.t0, rep.final_check));
    }
    let secs = t.elapsed().as_secs_f64();
    ok &= secs < 60.0;
    Verdict::new(ok, notes.join(", "))
}

fn criterion_12() -> Verdict {
    let m4 = verify(4, false).unwrap();
    let covered: Vec<&str> = m4.steps.iter().map(|s| s.ty.as_str()).collect();
    let needed = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "I2(5)", "I2(6)", "I2(7)", "I2(8)", "H3", "F4"];
    let covers = needed.iter().all(|t| covered.contains(t));
    let scoped = m4.scope.contains("does not compute the full coinvariant ring") && m4.scope.contains("E8");
    let m8 = verify(8, false).unwrap();
    Verdict::new(
        m4.pass && covers && scoped && m8.pass,
        format!(
            "max-rank 4: {} steps + {} deformation checks pass; max-rank 8 pass = {}; scope stated",
            m4.steps.len(),
            m4.deformation.len(),
            m8.pass
        ),
    )
}

fn main() {
    let criteria: Vec<(&str, fn() -> Verdict)> = vec![
        ("middle forms", criterion_1),
        ("edge-weight structure", criterion_2),
        ("path-system counts", criterion_3),
        ("quotient sizes and histograms", criterion_4),
        ("strong Lefschetz verdicts", criterion_5),
        ("LGV identity", criterion_6),
        ("oracle equivalence", criterion_7),
        ("BGG well-definedness", criterion_8),
        ("symmetry", criterion_9),
        ("binomial tensor matrices", criterion_10),
        ("deformation end-to-end", criterion_11),
        ("inductive replay scope", criterion_12),
    ];
    let mut unexpected = 0;
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Verdict::new(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2} {name}: {} [{:.1}s]", k + 1, v.detail, t.elapsed().as_secs_f64());
        if !v.pass && !v.expected_fail {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}

