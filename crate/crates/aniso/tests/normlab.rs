use aniso::normlab::*;
use aniso_core::multiply::MultInstance;
use aniso_core::{Anisotropy, Rational, SpaceDescr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn line(s: Rational, p: i64) -> SpaceDescr {
    SpaceDescr::w(s, r(1, p), Anisotropy::isotropic(1))
}

#[test]
fn half_derivative_of_gaussian_matches_closed_form() {
    // [e^{-x^2}]^2_{W^{1/2}_2} = 2 sqrt(pi/2) * 2 sqrt(pi/2) = 2 pi
    let g = Gaussian::new(vec![1.0]).grid(&[1], 32).unwrap();
    let res = seminorm_slobodeckij(&g, &line(r(1, 2), 2)).unwrap();
    let exact = (2.0 * std::f64::consts::PI).sqrt();
    assert!(res.value < exact);
    assert!((res.value + res.truncation_error_estimate - exact).abs() < 1e-3, "{:?}", res);
}

#[test]
fn homogeneity() {
    let g = Gaussian::new(vec![0.7]).grid(&[1], 16).unwrap();
    for sp in [line(r(1, 2), 2), line(r(5, 4), 3)] {
        let base = seminorm(&g, &sp).unwrap().value;
        for c in [-3.0, 0.25, 7.5] {
            let v = seminorm(&g.scaled(c), &sp).unwrap().value;
            assert!((v - c.abs() * base).abs() <= 1e-9 * c.abs() * base);
        }
    }
}

#[test]
fn translation_invariance() {
    let spacing = 1.0 / 16.0;
    let shift = 7.0 * spacing;
    let make = |a: f64| GridFunction::from_fn(&[1], &[spacing], &[7.0], 5.3, |x| (-(x[0] + a).powi(2)).exp()).unwrap();
    for sp in [line(r(1, 2), 2), line(r(3, 4), 2), line(r(5, 4), 3)] {
        let a = seminorm(&make(0.0), &sp).unwrap().value;
        let b = seminorm(&make(shift), &sp).unwrap().value;
        assert!((a - b).abs() <= 1e-6 * a, "{}: {} vs {}", sp, a, b);
    }
}

#[test]
fn halving_the_spacing_moves_the_value_by_less_than_two_percent() {
    let g = Gaussian::new(vec![1.0]);
    for sp in [line(r(1, 4), 2), line(r(1, 2), 2), line(r(5, 4), 3)] {
        let coarse = seminorm(&g.grid(&[1], 16).unwrap(), &sp).unwrap().value;
        let fine = seminorm(&g.grid(&[1], 32).unwrap(), &sp).unwrap().value;
        assert!(((fine - coarse) / fine).abs() < 0.02, "{}: {} -> {}", sp, coarse, fine);
    }
    let parabolic = SpaceDescr::w(r(1, 2), r(1, 2), Anisotropy::parabolic(1));
    let g2 = Gaussian::new(vec![1.0, 1.0]);
    let coarse = seminorm(&g2.grid(&[1, 1], 8).unwrap(), &parabolic).unwrap().value;
    let fine = seminorm(&g2.grid(&[1, 1], 16).unwrap(), &parabolic).unwrap().value;
    assert!(((fine - coarse) / fine).abs() < 0.02);
}

#[test]
fn dilation_slopes_in_low_dimensions() {
    let cases: Vec<(SpaceDescr, Vec<f64>, usize)> = vec![
        (line(r(1, 2), 2), vec![1.0], 16),
        (line(r(3, 4), 2), vec![1.0], 16),
        (line(r(5, 4), 3), vec![1.0], 16),
        (SpaceDescr::w(r(1, 2), r(1, 2), Anisotropy::parabolic(1)), vec![1.0, 0.8], 12),
        (SpaceDescr::w(r(3, 2), r(1, 3), Anisotropy::parabolic(1)), vec![1.0, 1.0], 12),
        (SpaceDescr::w(r(1, 2), r(1, 2), Anisotropy::isotropic(2)), vec![1.0], 8),
        (SpaceDescr::w(r(1, 2), r(1, 2), Anisotropy::new(vec![1, 1, 1], vec![2, 1, 1]).unwrap()), vec![1.0, 1.0, 1.0], 6),
    ];
    for (sp, widths, ppw) in cases {
        let fit = dilation_scaling(&Gaussian::new(widths), &sp, ppw, &LAMBDAS).unwrap();
        let tol = 0.1 * fit.expected.abs().max(1.0);
        assert!((fit.slope - fit.expected).abs() <= tol, "{}: slope {} vs {}", sp, fit.slope, fit.expected);
    }
}

#[test]
fn besov_and_slobodeckij_agree_up_to_constants() {
    let g = Gaussian::new(vec![1.0]);
    for s in [r(1, 2), r(5, 4), r(7, 4)] {
        let w = line(s.clone(), 2);
        let b = SpaceDescr::b(s, r(1, 2), None, Anisotropy::isotropic(1));
        for ppw in [8, 12, 16, 24, 32] {
            let grid = g.grid(&[1], ppw).unwrap();
            let ratio = seminorm_besov(&grid, &b).unwrap().value / seminorm_slobodeckij(&grid, &w).unwrap().value;
            assert!((0.1..=10.0).contains(&ratio), "s = {}, ppw = {}: {}", w.s, ppw, ratio);
        }
    }
}

#[test]
fn besov_dilation_slope() {
    let b = SpaceDescr::b(r(5, 4), r(1, 2), Some(r(1, 3)), Anisotropy::isotropic(1));
    let fit = dilation_scaling(&Gaussian::new(vec![1.0]), &b, 16, &LAMBDAS).unwrap();
    assert!((fit.slope - 0.75).abs() <= 0.075, "{}", fit.slope);
}

fn random_gaussian(rng: &mut ChaCha8Rng) -> Gaussian {
    let mut g = Gaussian::new(vec![rng.gen_range(0.5..2.0)]);
    g.amplitude = rng.gen_range(-3.0..3.0);
    g.center = vec![rng.gen_range(-1.5..1.5)];
    g
}

/// Shared grid wide enough for every member of the family.
fn sample(g: &Gaussian) -> GridFunction {
    GridFunction::from_fn(&[1], &[1.0 / 32.0], &[14.0], g.decay_radius(), |x| g.eval(&[1], x)).unwrap()
}

#[test]
fn hoelder_product_ratio() {
    let a = Anisotropy::isotropic(1);
    let inst = MultInstance::new(vec![SpaceDescr::l(r(1, 4), a.clone()), SpaceDescr::l(r(1, 4), a.clone())], SpaceDescr::l(r(1, 2), a));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let family: Vec<Vec<GridFunction>> = (0..50).map(|_| vec![sample(&random_gaussian(&mut rng)), sample(&random_gaussian(&mut rng))]).collect();
    let stats = check_product_estimate(&inst, &family).unwrap();
    assert_eq!(stats.ratios.len(), 50);
    assert!(stats.max <= 1.0 + 1e-6, "{}", stats.max);
}

#[test]
fn modulated_besov_products_stay_bounded() {
    let a = Anisotropy::isotropic(1);
    let b = SpaceDescr::b(r(3, 4), r(1, 2), None, a);
    let inst = MultInstance::new(vec![b.clone(), b.clone()], b);
    let base = Gaussian::new(vec![1.0]);
    let family: Vec<Vec<GridFunction>> = [1.0, 2.0, 4.0, 8.0, 16.0]
        .iter()
        .flat_map(|&w| {
            let re = base.clone().modulated(w, 0.0);
            let im = base.clone().modulated(w, -std::f64::consts::FRAC_PI_2);
            let grid = |g: &Gaussian| GridFunction::from_fn(&[1], &[1.0 / 256.0], &[5.3], g.decay_radius(), |x| g.eval(&[1], x)).unwrap();
            vec![vec![grid(&re), grid(&re)], vec![grid(&im), grid(&im)]]
        })
        .collect();
    let stats = check_product_estimate(&inst, &family).unwrap();
    assert!(stats.spread() <= 20.0, "{:?}", stats);
}

#[test]
fn unit_factor_in_reduced_product() {
    let a = Anisotropy::isotropic(1);
    let u = SpaceDescr::w(r(3, 4), r(1, 2), a.clone());
    let inst = MultInstance::new(vec![SpaceDescr::w(r(1, 1), r(1, 2), a), u.clone()], u);
    let g = Gaussian::new(vec![1.0]).grid(&[1], 16).unwrap();
    let stats = check_reduced_product_estimate(&inst, &[1], &[vec![g]]).unwrap();
    assert_eq!(stats.max, 1.0);
}

#[test]
fn uncovered_instances_are_refused() {
    let a = Anisotropy::isotropic(1);
    let inst = MultInstance::new(vec![SpaceDescr::l(r(1, 2), a.clone()), SpaceDescr::l(r(1, 2), a.clone())], SpaceDescr::l(r(1, 2), a));
    let g = Gaussian::new(vec![1.0]).grid(&[1], 8).unwrap();
    assert!(matches!(check_product_estimate(&inst, &[vec![g.clone(), g]]), Err(NormlabError::NotCovered(_))));
}
