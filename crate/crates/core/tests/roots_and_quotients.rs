use slp_core::polyring::group_elements;
use slp_core::quotient::{inversion_count, QuotientPoset};
use slp_core::rootsystem::{designated_theta, RootSystem, Theta};
use slp_core::Scalar;

fn rs(t: &str) -> RootSystem {
    RootSystem::new(t.parse().unwrap()).unwrap()
}

fn q(v: i64) -> Scalar {
    Scalar::int(v)
}

/// Poincare polynomial prod_d (1 + t + ... + t^(d-1)).
fn poincare(degrees: &[usize]) -> Vec<i64> {
    degrees.iter().fold(vec![1i64], |acc, &d| {
        let mut out = vec![0; acc.len() + d - 1];
        for (i, a) in acc.iter().enumerate() {
            for o in &mut out[i..i + d] {
                *o += a;
            }
        }
        out
    })
}

fn divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let mut out = vec![0; num.len() - den.len() + 1];
    for k in (0..out.len()).rev() {
        let c = rem[k + den.len() - 1] / den[den.len() - 1];
        out[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&x| x == 0), "Poincare quotient is not exact");
    out
}

fn relative_histogram(r: &RootSystem, theta: &Theta) -> Vec<usize> {
    let ty = r.coxeter_type();
    let sub: Vec<usize> =
        theta.components(&ty).iter().flat_map(|(_, t)| t.map(|t| t.fundamental_degrees()).unwrap_or_default()).collect();
    divide(&poincare(&ty.fundamental_degrees()), &poincare(&sub)).into_iter().map(|x| x as usize).collect()
}

#[test]
fn roots_are_closed_under_reflections() {
    for t in ["A3", "B3", "D4", "F4", "H3", "I2(7)", "E6"] {
        let r = rs(t);
        for b in 0..r.roots().len() {
            for g in r.roots() {
                assert!(r.root_index(&r.reflect(b, g)).is_some(), "{t}");
            }
        }
    }
}

#[test]
fn simple_reflections_permute_other_positive_roots() {
    for t in ["B3", "H3", "F4", "I2(5)"] {
        let r = rs(t);
        for i in 0..r.rank() {
            let a = r.simple_index(i);
            for k in (0..r.num_positive()).filter(|&k| k != a) {
                let img = r.root_index(&r.reflect(a, r.root(k))).unwrap();
                assert!(img < r.num_positive() && img != a, "{t}");
            }
        }
    }
}

#[test]
fn rho_shifts_by_simple_roots() {
    let r = rs("D5");
    let (rho, _, _) = r.rho_vectors(&Theta::empty()).unwrap();
    for (i, a) in r.simple_roots().iter().enumerate() {
        let expect: Vec<Scalar> = rho.iter().zip(a).map(|(x, y)| x - y).collect();
        assert_eq!(r.reflect_simple(i, &rho), expect);
        assert_eq!(r.coroot(r.simple_index(i), &rho), q(1));
    }
    let all = r.rho_vectors(&Theta::all(5)).unwrap();
    assert!(all.2.iter().all(Scalar::is_zero));
}

#[test]
fn field_and_root_counts() {
    assert_eq!(rs("H3").num_positive(), 15);
    assert_eq!(rs("H3").field().tag(), "Q(sqrt5)");
    assert_eq!(rs("I2(7)").num_positive(), 7);
    assert_eq!(rs("I2(7)").field().degree(), 3);
    assert_eq!(rs("A2").num_positive(), 3);
}

#[test]
fn e7_rho_bar_and_weights() {
    let r = rs("E7");
    let theta = designated_theta(&r.coxeter_type());
    let (_, _, rho_bar) = r.rho_vectors(&theta).unwrap();
    // 2 rho-bar = 9 (e8 - e7 + 2 e6)
    let mut expect = vec![q(0); r.dim()];
    expect[7] = q(9);
    expect[6] = q(-9);
    expect[5] = q(18);
    let doubled: Vec<Scalar> = rho_bar.iter().map(|x| x * &q(2)).collect();
    assert_eq!(doubled, expect);
    let inside = r.theta_positive(&theta);
    for k in (0..r.num_positive()).filter(|k| !inside.contains(k)) {
        assert_eq!(r.coroot(k, &doubled), q(18));
    }
}

#[test]
fn e8_rho_bar_is_a_multiple_of_the_highest_root() {
    let r = rs("E8");
    let theta = designated_theta(&r.coxeter_type());
    let (_, _, rho_bar) = r.rho_vectors(&theta).unwrap();
    let (idx, c) = r.root_multiple(&rho_bar).unwrap();
    assert_eq!(idx, r.highest_root());
    assert_eq!(c, Scalar::from_ratio(r.field(), 29, 2));
    assert_eq!(r.height(idx), q(29));
    let inside = r.theta_positive(&theta);
    for k in (0..r.num_positive()).filter(|k| !inside.contains(k)) {
        let v = r.coroot(k, r.root(idx));
        assert_eq!(v, if k == idx { q(2) } else { q(1) });
    }
}

#[test]
fn rho_bar_is_strictly_positive_off_theta() {
    for t in ["A4", "B4", "D5", "F4", "E6", "E7", "H3", "H4", "I2(9)"] {
        let r = rs(t);
        let theta = designated_theta(&r.coxeter_type());
        let (_, _, rho_bar) = r.rho_vectors(&theta).unwrap();
        let inside = r.theta_positive(&theta);
        for k in 0..r.num_positive() {
            let s = r.coroot(k, &rho_bar).sign();
            assert_eq!(s, if inside.contains(&k) { 0 } else { 1 }, "{t}");
        }
    }
}

#[test]
fn quotient_sizes_and_histograms() {
    for (t, n, top) in [("F4", 24, 15), ("E6", 27, 16), ("E7", 56, 27), ("H4", 120, 45), ("H3", 12, 10)] {
        let r = rs(t);
        let theta = designated_theta(&r.coxeter_type());
        let p = QuotientPoset::enumerate(&r, &theta).unwrap();
        assert_eq!((p.len(), p.top_degree()), (n, top), "{t}");
        let h = p.degree_histogram();
        assert_eq!(h, relative_histogram(&r, &theta), "{t}");
        assert!(h.iter().eq(h.iter().rev()));
        assert!(p.validate(Some(&r)).passed(), "{t}");
    }
    let h3 = QuotientPoset::enumerate(&rs("H3"), &designated_theta(&rs("H3").coxeter_type())).unwrap();
    assert_eq!(h3.degree_histogram(), vec![1, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1]);
}

#[test]
fn orbit_times_parabolic_order_is_group_order() {
    for t in ["A3", "B3", "D4", "F4", "H3", "I2(8)", "B4", "A4"] {
        let r = rs(t);
        let (rho, _, _) = r.rho_vectors(&Theta::empty()).unwrap();
        let all: Vec<usize> = (0..r.rank()).collect();
        let w = group_elements(&r, &all, &rho).len();
        for removed in 0..r.rank() {
            let theta = Theta::complement_of(r.rank(), removed);
            let (_, rho_t, _) = r.rho_vectors(&theta).unwrap();
            let sub = group_elements(&r, theta.indices(), &rho_t).len();
            let p = QuotientPoset::enumerate(&r, &theta).unwrap();
            assert_eq!(p.len() * sub, w, "{t} without node {}", removed + 1);
        }
    }
}

#[test]
fn inversion_count_equals_word_length() {
    let mut cases: Vec<(RootSystem, Theta)> = Vec::new();
    for t in ["A3", "B3", "H3", "I2(6)"] {
        let r = rs(t);
        cases.push((r.clone(), Theta::empty()));
        cases.push((r.clone(), designated_theta(&r.coxeter_type())));
    }
    let e6 = rs("E6");
    cases.push((e6.clone(), designated_theta(&e6.coxeter_type())));
    for (r, theta) in cases {
        let p = QuotientPoset::enumerate(&r, &theta).unwrap();
        for n in p.nodes() {
            assert_eq!(n.word.len(), n.degree);
            assert_eq!(inversion_count(&r, &n.vector), n.degree);
        }
    }
}

#[test]
fn weights_recompute_from_lower_vectors() {
    let r = rs("F4");
    let p = QuotientPoset::enumerate(&r, &designated_theta(&r.coxeter_type())).unwrap();
    for e in p.edges() {
        assert_eq!(e.weight, r.coroot(e.root, &p.nodes()[e.src].vector));
        assert_eq!(r.reflect(e.root, &p.nodes()[e.src].vector), p.nodes()[e.dst].vector);
    }
}

#[test]
fn e8_rescaled_weights() {
    let r = rs("E8");
    let p = QuotientPoset::enumerate(&r, &designated_theta(&r.coxeter_type())).unwrap();
    assert_eq!((p.len(), p.top_degree()), (240, 57));
    assert_eq!((p.layer(28).len(), p.layer(29).len()), (8, 8));
    let scaled = p.rescaled(&Scalar::from_ratio(r.field(), 2, 29));
    for e in scaled.edges() {
        let deg = scaled.nodes()[e.src].degree;
        if e.weight == q(2) {
            assert_eq!(deg, 28);
        } else {
            assert_eq!(e.weight, q(1));
        }
    }
}

#[test]
fn antiautomorphism_maps_edges_through_w0() {
    let r = rs("H3");
    let p = QuotientPoset::enumerate(&r, &designated_theta(&r.coxeter_type())).unwrap();
    let alpha = p.antiautomorphism(&r).unwrap();
    for e in p.edges() {
        let gamma = QuotientPoset::w0_root(&r, e.root);
        let mirrored = p.edges().iter().find(|f| f.src == alpha[e.dst] && f.dst == alpha[e.src]).unwrap();
        // -w0(beta) is positive; w0_root returns the index of w0(beta) itself.
        assert_eq!(mirrored.root, r.negate_index(gamma));
    }
}
