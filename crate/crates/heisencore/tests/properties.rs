//! Cross-module invariants: algebraic axioms on random data, identity
//! verification between independent computation routes, and re-evaluation
//! of every witness the searchers emit.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use heisencore::config::{act_rho_int, BoxWindow, Configuration};
use heisencore::group::GroupElement;
use heisencore::laurent::LaurentPoly;
use heisencore::parse::parse_poly;
use heisencore::qbinom::{
    a_quotient, binomial, expand_xy_power, first_difference_norm, qbinom, qbinom_row,
    second_difference_norm, visit_dense_rows,
};
use heisencore::ring::{format_canonical, tau_swap, IntElement};
use heisencore::twisted::{project, unit_circle_point};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_element(rng: &mut ChaCha8Rng, max_terms: usize, coeff_bound: i64) -> IntElement {
    let n = rng.gen_range(1..=max_terms);
    IntElement::from_int_terms((0..n).map(|_| {
        (
            GroupElement::new(
                rng.gen_range(-3..=3),
                rng.gen_range(-3..=3),
                rng.gen_range(-3..=3),
            ),
            rng.gen_range(-coeff_bound..=coeff_bound),
        )
    }))
}

#[test]
fn group_axioms_on_random_triples() {
    let mut r = rng(1);
    for _ in 0..1000 {
        let g = GroupElement::new(r.gen_range(-50..=50), r.gen_range(-50..=50), r.gen_range(-50..=50));
        let h = GroupElement::new(r.gen_range(-50..=50), r.gen_range(-50..=50), r.gen_range(-50..=50));
        let k = GroupElement::new(r.gen_range(-50..=50), r.gen_range(-50..=50), r.gen_range(-50..=50));
        assert_eq!(g.mul(h).mul(k), g.mul(h.mul(k)));
        assert_eq!(g.mul(GroupElement::IDENTITY), g);
        assert_eq!(GroupElement::IDENTITY.mul(g), g);
        assert_eq!(g.mul(g.inv()), GroupElement::IDENTITY);
        assert_eq!(g.inv().mul(g), GroupElement::IDENTITY);
    }
}

#[test]
fn ring_axioms_on_random_elements() {
    let mut r = rng(2);
    for _ in 0..120 {
        let f = random_element(&mut r, 5, 9);
        let g = random_element(&mut r, 5, 9);
        let h = random_element(&mut r, 5, 9);
        assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
    }
}

#[test]
fn l1_norm_is_submultiplicative() {
    let mut r = rng(3);
    for _ in 0..200 {
        let f = random_element(&mut r, 5, 9);
        let g = random_element(&mut r, 5, 9);
        assert!(f.mul(&g).l1_norm_int() <= f.l1_norm_int() * g.l1_norm_int());
    }
}

#[test]
fn involution_is_an_anti_homomorphism() {
    let mut r = rng(4);
    for _ in 0..200 {
        let f = random_element(&mut r, 5, 9);
        let g = random_element(&mut r, 5, 9);
        assert_eq!(f.mul(&g).involution(), g.involution().mul(&f.involution()));
        assert_eq!(f.involution().involution(), f);
    }
}

/// Every polynomial the certificates are exercised on, plus grammar corner
/// cases; format → parse must be the identity.
#[test]
fn parser_round_trip_corpus() {
    let corpus = [
        "2 - x^-1 - y^-1",
        "2 - x - y",
        "3 + x + y + z",
        "3 + x + y - z",
        "2 + x + y + z",
        "4 + x + y + z",
        "4 + x + y + x^-1 + z",
        "5 + x + y + x^-1 + y^-1 + z",
        "3 + x^2 + y + z^2",
        "3 + x*y + y*x + z",
        "3 + x^2 + y^2 - z^4",
        "5 + z - z^-1 + z^2 - z^-2 + x^2 + x^-2 + y^2 + y^-2",
        "x*y - y*x*z",
        "x + y",
        "y - 1",
        "1 - x + y",
        "2 - x + 3*y + 2*y*z",
        "7",
        "0 + x",
        "x^-3*y^2*z^-1",
        "2x + 3y",
        "10 - 10*z^10",
        "x*x*x - x^3",
        "y^2*x^2 - x^2*y^2*z^4",
        "6 + 2*x + 2*y + z",
        "5 - 2*x - 2*y^-1 + z^2",
        "1 + x + y + z + x*y + y*x",
        "3 - x^2 - y^-2 + x*z",
        "9 + 3*x - 3*y + 2*z - z^-1",
        "4 + x*y^-1 + y*x^-1 + z^3",
    ];
    assert!(corpus.len() >= 30);
    for text in corpus {
        let f = parse_poly(text).unwrap_or_else(|e| panic!("{}: {}", text, e));
        let rendered = format_canonical(&f);
        let again = parse_poly(&rendered).unwrap_or_else(|e| panic!("{} -> {}: {}", text, rendered, e));
        assert_eq!(f, again, "round trip through {:?}", rendered);
    }
}

#[test]
fn right_action_composes() {
    let mut r = rng(5);
    let window = BoxWindow::radius(3);
    for _ in 0..40 {
        let f = random_element(&mut r, 4, 5);
        let g = random_element(&mut r, 4, 5);
        let mut v = Configuration::<BigInt>::finite();
        for _ in 0..6 {
            v.set(
                GroupElement::new(r.gen_range(-2..=2), r.gen_range(-2..=2), r.gen_range(-2..=2)),
                BigInt::from(r.gen_range(-4..=4i64)),
            );
        }
        // ρ^{fg} v = ρ^f (ρ^g v): compute the inner image on a dilated window.
        let inner_window = window.dilate_for(&f.support().copied().collect::<Vec<_>>());
        let inner = act_rho_int(&g, &v, inner_window.sites());
        let mut inner_conf = Configuration::<BigInt>::bounded(inner_window);
        for (site, val) in &inner.values {
            inner_conf.set(*site, val.clone());
        }
        let lhs = act_rho_int(&f.mul(&g), &v, window.sites());
        let rhs = act_rho_int(&f, &inner_conf, window.sites());
        for site in window.sites() {
            assert_eq!(
                lhs.values.get(&site),
                rhs.values.get(&site),
                "site {}",
                site
            );
        }
    }
}

#[test]
fn qbinomial_shape_up_to_128() {
    visit_dense_rows(128, |n, half| {
        for (k, coeffs) in half.iter().enumerate() {
            // Degree, positivity, unimodality, value at q = 1.
            assert_eq!(coeffs.len() as u64, (k as u64) * (n as u64 - k as u64) + 1);
            let mut rising = true;
            let mut sum = BigInt::zero();
            let mut prev = BigInt::zero();
            for c in coeffs {
                assert!(!c.is_negative());
                if c > &prev {
                    assert!(rising, "not unimodal at n={} k={}", n, k);
                } else if c < &prev {
                    rising = false;
                }
                sum += c;
                prev = c.clone();
            }
            assert_eq!(sum, binomial(n as u64, k as u64));
            // Symmetry of the coefficient list (the polynomial is reciprocal).
            let mut rev = coeffs.clone();
            rev.reverse();
            assert_eq!(&rev, coeffs);
        }
    });
}

#[test]
fn q_vandermonde_identity() {
    // [2k, k-j] = Σ_i q^{i(i+j)} [k, i][k, i+j], exactly, k ≤ 20.
    for k in 1..=20u32 {
        let row_k = qbinom_row(k);
        let row_2k = qbinom_row(2 * k);
        for j in 0..=k {
            let mut sum = LaurentPoly::zero();
            for i in 0..=(k - j) {
                let term = row_k[i as usize]
                    .mul(&row_k[(i + j) as usize])
                    .shift((i * (i + j)) as i64);
                sum = sum.add(&term);
            }
            assert_eq!(sum, row_2k[(k - j) as usize], "k={} j={}", k, j);
        }
    }
}

#[test]
fn q_pascal_odd_row_identity() {
    // [2k+1, j] = [2k, j] + q^{2k+1-j}[2k, j-1] for 1 ≤ j ≤ 2k, k ≤ 20.
    for k in 1..=20u32 {
        let even = qbinom_row(2 * k);
        let odd = qbinom_row(2 * k + 1);
        for j in 1..=(2 * k) {
            let rhs = even[j as usize]
                .add(&even[(j - 1) as usize].shift((2 * k + 1 - j) as i64));
            assert_eq!(odd[j as usize], rhs, "k={} j={}", k, j);
        }
    }
}

#[test]
fn quotient_norm_identity_up_to_40() {
    // ‖A_{n,k,p}‖₁ · p = C(n,k) whenever the division is exact.
    for n in 2..=40u32 {
        for k in 1..=n / 2 {
            for p in 2..=n {
                if let Ok(a) = a_quotient(n, k, p) {
                    assert!(a.all_nonnegative(), "A_{{{},{},{}}}", n, k, p);
                    assert_eq!(
                        a.l1_norm() * BigInt::from(p),
                        binomial(n as u64, k as u64),
                        "n={} k={} p={}",
                        n,
                        k,
                        p
                    );
                }
            }
        }
    }
}

#[test]
fn difference_norms_match_polynomial_route() {
    let one_minus_q = LaurentPoly::one_minus_q_pow(1);
    for n in 0..=24u32 {
        for (k, poly) in qbinom_row(n).iter().enumerate() {
            let dense = poly.dense();
            assert_eq!(
                first_difference_norm(&dense),
                poly.mul(&one_minus_q).l1_norm(),
                "n={} k={}",
                n,
                k
            );
            assert_eq!(
                second_difference_norm(&dense),
                poly.mul(&one_minus_q).mul(&one_minus_q).l1_norm(),
                "n={} k={}",
                n,
                k
            );
        }
    }
}

#[test]
fn xy_power_matches_group_ring_power_up_to_12() {
    let xy = parse_poly("x + y").unwrap();
    let mut acc = IntElement::one();
    for n in 0..=12u32 {
        assert_eq!(expand_xy_power(n), acc, "n = {}", n);
        acc = acc.mul(&xy);
    }
    // And evaluation collapses to ordinary binomials.
    let q42 = qbinom(4, 2).unwrap();
    assert_eq!(q42.poly.eval_at_one(), binomial(4, 2));
}

#[test]
fn projection_star_homomorphism_random() {
    let mut r = rng(6);
    for trial in 0..60 {
        let f = random_element(&mut r, 5, 6);
        let g = random_element(&mut r, 5, 6);
        let theta = unit_circle_point(r.gen_range(0..97), 97);
        let fg = project(&f.mul(&g), theta).unwrap();
        let ff = project(&f, theta).unwrap();
        let gg = project(&g, theta).unwrap();
        let prod = ff.mul(&gg).unwrap();
        for ((k, l), c) in fg.terms() {
            assert!(
                (c - prod.coeff(*k, *l)).norm() < 1e-9,
                "trial {} at ({}, {})",
                trial,
                k,
                l
            );
        }
        assert!(prod.l1_norm() <= ff.l1_norm() * gg.l1_norm() + 1e-9);
        // *-homomorphism.
        let adj = project(&f.involution(), theta).unwrap();
        let adj2 = ff.involution();
        for ((k, l), c) in adj.terms() {
            assert!((c - adj2.coeff(*k, *l)).norm() < 1e-9);
        }
        // Projection contracts the norm.
        let norm_f: BigRational = f.l1_norm();
        assert!(ff.l1_norm() <= heisencore::coeff::rational_to_f64(&norm_f) + 1e-9);
    }
}

#[test]
fn tau_and_linear_decomposition_random() {
    let mut r = rng(7);
    for _ in 0..100 {
        let f = random_element(&mut r, 6, 9);
        assert_eq!(tau_swap(&tau_swap(&f)), f);
    }
    // Reconstruction is exact on random y-linear elements.
    for _ in 0..60 {
        let mut f = IntElement::zero();
        for _ in 0..r.gen_range(1..=5) {
            f.add_term(
                GroupElement::new(r.gen_range(-3..=3), r.gen_range(0..=1), r.gen_range(-3..=3)),
                BigInt::from(r.gen_range(-9..=9i64)),
            );
        }
        if f.is_zero() {
            continue;
        }
        let d = heisencore::cocycle::decompose_linear_with_grid(&f, 16).unwrap();
        assert_eq!(d.reconstruct(), f);
    }
    // And on x-linear ones reached through the swap.
    for _ in 0..60 {
        let mut f = IntElement::zero();
        for _ in 0..r.gen_range(2..=5) {
            f.add_term(
                GroupElement::new(r.gen_range(0..=1), r.gen_range(-3..=3), r.gen_range(-3..=3)),
                BigInt::from(r.gen_range(-9..=9i64)),
            );
        }
        // Skip inputs the y-branch already accepts (y-exponent span ≤ 1).
        if f.is_zero() {
            continue;
        }
        let b_min = f.support().map(|g| g.b).min().unwrap();
        let b_max = f.support().map(|g| g.b).max().unwrap();
        if b_max - b_min <= 1 {
            continue;
        }
        if f.support().any(|g| !(0..=1).contains(&g.a)) {
            continue;
        }
        let d = heisencore::cocycle::decompose_linear_with_grid(&f, 16).unwrap();
        assert_eq!(
            d.orientation,
            heisencore::cocycle::Orientation::XLinear
        );
        assert_eq!(d.reconstruct(), f);
    }
}

#[test]
fn margin_moves_slower_than_lipschitz_bound() {
    let mut r = rng(8);
    for _ in 0..20 {
        let f = random_element(&mut r, 5, 5);
        if f.is_zero() {
            continue;
        }
        let l = heisencore::localize::margin_lipschitz(&f);
        let grid = 256u32;
        let h = 2.0 * (std::f64::consts::PI / grid as f64).sin();
        let mut prev = heisencore::localize::dominant_margin(&f, unit_circle_point(0, grid));
        for i in 1..=grid {
            let cur =
                heisencore::localize::dominant_margin(&f, unit_circle_point(i % grid, grid));
            assert!(
                (cur - prev).abs() <= l * h + 1e-9,
                "jump {} exceeds {}",
                (cur - prev).abs(),
                l * h
            );
            prev = cur;
        }
    }
}

#[test]
fn witness_reevaluation() {
    use heisencore::witness::{character_value, character_witness, rep_matrix, rep_witness_in, det_magnitude};
    // Characters: the returned zero re-evaluates below the acceptance tolerance.
    for text in ["2 - x^-1 - y^-1", "3 + x + y - z", "3 + x^2 + y^2 - z^4"] {
        let f = parse_poly(text).unwrap();
        let w = character_witness(&f, 32, 16).expect(text);
        let v = character_value(&f, w.zeta1.to_c64(), w.zeta2.to_c64());
        assert!(v.norm() < 1e-9, "{}: residual {}", text, v.norm());
    }
    // Representations: determinant and commutation re-evaluate.
    let f = parse_poly("3 + x^2 + y^2 - z^4").unwrap();
    let w = rep_witness_in(&f, 4, 4, 12).unwrap();
    let det = det_magnitude(rep_matrix(
        &f,
        w.p,
        w.theta.to_c64(),
        w.zeta1.to_c64(),
        w.zeta2.to_c64(),
    ));
    assert!(det < 1e-8);
    assert!(w.commutation_defect < 1e-12);
}

#[test]
fn mahler_is_multiplicative_and_unit_invariant() {
    let mut r = rng(9);
    for _ in 0..40 {
        let deg_a = r.gen_range(1..=4);
        let deg_b = r.gen_range(1..=4);
        let coeffs = |deg: usize, r: &mut ChaCha8Rng| -> Vec<Complex64> {
            let mut v: Vec<Complex64> = (0..=deg)
                .map(|_| Complex64::new(r.gen_range(-4..=4i32) as f64, 0.0))
                .collect();
            if v[deg].norm() == 0.0 {
                v[deg] = Complex64::new(1.0, 0.0);
            }
            v
        };
        let a = coeffs(deg_a, &mut r);
        let b = coeffs(deg_b, &mut r);
        // Skip degenerate zero polynomials.
        if a.iter().all(|c| c.norm() == 0.0) || b.iter().all(|c| c.norm() == 0.0) {
            continue;
        }
        let mut prod = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
        for (i, ca) in a.iter().enumerate() {
            for (j, cb) in b.iter().enumerate() {
                prod[i + j] += ca * cb;
            }
        }
        let ma = heisencore::mahler::mahler_measure(&a).unwrap();
        let mb = heisencore::mahler::mahler_measure(&b).unwrap();
        let mab = heisencore::mahler::mahler_measure(&prod).unwrap();
        assert!(
            (mab.value - ma.value - mb.value).abs() < 1e-6,
            "m(ab)={} m(a)={} m(b)={}",
            mab.value,
            ma.value,
            mb.value
        );
        // ξ ↦ c·ξ^k with |c| = 1 leaves the measure alone: shift test.
        let mut shifted = vec![Complex64::new(0.0, 0.0); 2];
        shifted.extend_from_slice(&a);
        let ms = heisencore::mahler::mahler_measure(&shifted).unwrap();
        assert!((ms.value - ma.value).abs() < 1e-9);
    }
}

#[test]
fn condition2_at_p1_matches_direct_modulus_search() {
    use heisencore::cocycle::{condition2_scan, decompose_linear_with_grid};
    for (text, expect_hit) in [("2 - x - y", true), ("3 + x + y + z", false)] {
        let f = parse_poly(text).unwrap();
        let d = decompose_linear_with_grid(&f, 64).unwrap();
        let scan = condition2_scan(&d, 1, 256);
        let has_hit = !scan.hits.is_empty();
        // Direct search: does |g₀(ξ,1)| = |g₁(ξ,1)| happen on a fine grid?
        let mut min_gap = f64::INFINITY;
        for i in 0..4096u32 {
            let xi = unit_circle_point(i, 4096);
            let theta = Complex64::new(1.0, 0.0);
            let a = d.g0.eval(xi, theta).norm();
            let b = d.g1.eval(xi, theta).norm();
            if a > 1e-12 && b > 1e-12 {
                min_gap = min_gap.min((a.ln() - b.ln()).abs());
            }
        }
        let direct_hit = min_gap < 1e-3;
        assert_eq!(has_hit, expect_hit, "{}", text);
        assert_eq!(direct_hit, expect_hit, "{} (min gap {})", text, min_gap);
    }
}

#[test]
fn kernel_blocks_match_norm_series() {
    use heisencore::homoclinic::build_kernel;
    use heisencore::qbinom::norm_series;
    // ‖w^(2N)‖₁ - ‖w^(N)‖₁ = Σ_{N<n≤2N} T(n), exactly.
    let n = 8u32;
    let w1 = build_kernel(n);
    let w2 = build_kernel(2 * n);
    let ns = norm_series(2 * n);
    let mut tail = BigRational::zero();
    for m in (n + 1)..=(2 * n) {
        tail += &ns.t[m as usize];
    }
    assert_eq!(w2.total_norm() - w1.total_norm(), tail);
}

#[test]
fn inverse_3xyz_agrees_with_generic_central_seed() {
    use heisencore::decide::{neumann_inverse, NeumannSeed};
    use heisencore::homoclinic::inverse_3xyz;
    // Two routes to the same truncated series: closed-form binomial
    // coefficients against the generic lopsided-central-seed machinery.
    let f = parse_poly("3 + x + y + z").unwrap();
    let generic = neumann_inverse(&f, 6, 24).unwrap();
    assert_eq!(generic.seed, NeumannSeed::Central);
    let explicit = inverse_3xyz(6, 24);
    assert_eq!(generic.residual, explicit.residual);
    assert_eq!(generic.inverse, explicit.inverse);
}

#[test]
fn coding_map_is_shift_equivariant() {
    use heisencore::cover::coding_map;
    use heisencore::homoclinic::build_kernel;
    let w = build_kernel(10);
    let mut r = rng(10);
    let mut v = Configuration::<i64>::finite();
    for _ in 0..12 {
        v.set(
            GroupElement::new(r.gen_range(-2..=2), r.gen_range(-2..=2), r.gen_range(-2..=2)),
            r.gen_range(0..=2),
        );
    }
    for shift in [GroupElement::x(), GroupElement::y(), GroupElement::new(0, 0, 1)] {
        // λ̃^γ v has values (λ̃^γ v)_δ = v_{γ⁻¹δ}.
        let mut shifted = Configuration::<i64>::finite();
        for (g, val) in v.iter() {
            shifted.set(shift.mul(*g), *val);
        }
        let window = BoxWindow::radius(2);
        let img_shifted = coding_map(&shifted, &w, &window);
        // α^γ ξ(v) at γ' is ξ(v)_{γ⁻¹γ'}: evaluate ξ(v) on the dilated window.
        let big_window = BoxWindow::radius(4);
        let img = coding_map(&v, &w, &big_window);
        for site in window.sites() {
            let turned = shift.inv().mul(site);
            assert_eq!(
                img_shifted.values.value(&site).unwrap(),
                img.values.value(&turned).unwrap(),
                "shift {} site {}",
                shift,
                site
            );
        }
    }
}
