use ruelle::cantor::{self, CellFunction};
use ruelle::fixedpoint;
use ruelle::numbers::{int, rat, real};
use ruelle::solenoid::{self, CircleSystem, Point, SolenoidSystem, SystemFunction};
use ruelle::{Filter, LaurentPoly};

#[test]
fn truncated_fixed_point_is_fixed_on_the_safe_range() {
    let k = 3i64.pow(6);
    let seq = fixedpoint::build_sequence(k).unwrap();
    let h = seq.to_poly();
    let image = Filter::cantor().apply(&h);
    let safe = (k - 2) / 3;
    for j in -safe..=safe {
        assert_eq!(image.coeff(j), h.coeff(j), "k = {j}");
    }
    assert_ne!(image, h);
}

#[test]
fn energy_growth_equals_composite_filter_energy() {
    let seq = fixedpoint::build_sequence(3i64.pow(5)).unwrap();
    let h = seq.to_poly();
    let cantor = Filter::cantor();
    for (n, s) in fixedpoint::energy_growth(&seq, 3).unwrap() {
        let composite = cantor.composite(n);
        let weighted = &composite.weight_poly().clone() * &(&h * &h.conj());
        assert_eq!(weighted.haar_integral(), real(s), "n = {n}");
    }
}

#[test]
fn cascade_correlation_matches_tree_walk() {
    // ‖M^{n+1}ξ − M^nξ‖² = ∫ Rⁿ h₀ dμ and the tree expectation evaluates Rⁿ h₀
    // pointwise, so its average over a fine grid reproduces the cell value.
    let seed = CellFunction::new(2, [(0, int(1)), (4, int(2)), (11, int(-1))], 0);
    let h0 = cantor::cascade_seed_correlation(&seed);
    let series = cantor::cascade_divergence(&seed, 3);
    let sys = CircleSystem::cantor();
    let h = SystemFunction::uniform(h0.clone(), 1);
    let grid = 64;
    for (n, value) in series {
        let mean: f64 = (0..grid)
            .map(|i| {
                solenoid::tree_expectation(&sys, &Point::new(0, rat(i, grid)), &h, n)
                    .unwrap()
                    .re
            })
            .sum::<f64>()
            / grid as f64;
        let exact = num_traits::ToPrimitive::to_f64(&value).unwrap();
        assert!((mean - exact).abs() < 1e-9, "n = {n}: {mean} vs {exact}");
    }
}

#[test]
fn nullspace_solutions_are_scaling_functions() {
    for level in 1..=3 {
        let basis = cantor::refinement_nullspace(level, 0, 2).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].cascade(), basis[0]);
        assert_eq!(basis[0].squared_norm(), int(1));
    }
    assert!(cantor::scaling_equation_residual().is_zero());
}

#[test]
fn detail_generators_correlate_to_zero_against_the_scaling_function() {
    let chi = CellFunction::chi_c();
    for (g, _) in cantor::detail_basis(2).unwrap() {
        let p = g.correlation(&chi).unwrap();
        assert!(p.is_zero());
    }
}

#[test]
fn filters_round_trip_through_json_and_text() {
    let f: LaurentPoly = "1/3*z^-4 + (2-1i)*z + 7*z^12".parse().unwrap();
    assert_eq!(LaurentPoly::from_json(&f.to_json()).unwrap(), f);
    assert_eq!(f.to_string().parse::<LaurentPoly>().unwrap(), f);
    let cell = CellFunction::new(3, [(-5, rat(2, 7)), (40, int(-3))], 1);
    assert_eq!(CellFunction::from_json(&cell.to_json()).unwrap(), cell);
}

#[test]
fn trivial_system_walk_matches_exact_averages() {
    let sys = CircleSystem::trivial(3).unwrap();
    let x = Point::new(0, rat(2, 5));
    let f: LaurentPoly = "z^3 + z^9 + z^-27".parse().unwrap();
    let exact = sys.filter(0).apply_n(&f, 2).evaluate(&x.angle).re;
    let est = solenoid::fixed_point_from_cocycle(
        &sys,
        &x,
        |p| f.evaluate(&p[2].angle).re,
        2,
        20_000,
        5,
    )
    .unwrap();
    assert!(est.within_three_sigma(exact), "{est:?} vs {exact}");
    assert!(sys.filter(0).apply_n(&f, 4).is_zero());
}
