//! Model, entrance-law and joint-law invariants checked through the public API.

use levysup::entrance::EntranceLaw;
use levysup::jointlaw::{gt_density, JointLaw};
use levysup::{JumpSign, ProcessModel, QuadratureConfig, Regularity, Side};
use proptest::prelude::*;

fn catalog() -> Vec<ProcessModel> {
    vec![
        ProcessModel::brownian(0.0).unwrap(),
        ProcessModel::brownian(0.7).unwrap(),
        ProcessModel::brownian(-1.3).unwrap(),
        ProcessModel::cauchy(),
        ProcessModel::stable(1.5, 0.5).unwrap(),
        ProcessModel::stable(0.7, 0.3).unwrap(),
        ProcessModel::spectrally_negative(1.5).unwrap(),
        ProcessModel::compound_poisson(1.0, 1.0, JumpSign::Positive, -1.0).unwrap(),
        ProcessModel::compound_poisson(2.0, 0.5, JumpSign::Negative, 1.0).unwrap(),
    ]
}

/// Composite Simpson rule with `n` (even) panels.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        acc += f(a + h * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn classification_is_pure_and_duality_is_an_involution() {
    for m in catalog() {
        assert_eq!(ProcessModel::new(m.params()).unwrap(), m);
        assert_eq!(m.dual().dual(), m, "{}", m.to_text());
        assert_eq!(ProcessModel::from_text(&m.to_text()).unwrap(), m);
    }
}

#[test]
fn type1_models_have_no_atoms() {
    for m in catalog().into_iter().filter(|m| m.regularity() == Regularity::Type1) {
        assert_eq!((m.ladder_drift(), m.ladder_drift_star()), (0.0, 0.0), "{}", m.to_text());
        if let Ok(law) = JointLaw::new(m.clone(), 1.0, QuadratureConfig::default()) {
            assert_eq!(law.atoms().unwrap().total_mass(), 0.0);
        }
    }
}

#[test]
fn entrance_normalization_matches_lifetime_tail() {
    let models = [
        ProcessModel::brownian(0.0).unwrap(),
        ProcessModel::brownian(0.8).unwrap(),
        ProcessModel::brownian(-0.5).unwrap(),
        ProcessModel::cauchy(),
    ];
    for m in models {
        for side in [Side::Supremum, Side::Infimum] {
            let law = EntranceLaw::new(m.clone(), side, QuadratureConfig::default()).unwrap();
            for t in [0.25, 1.0, 4.0] {
                let tail = law.lifetime_tail(t).unwrap();
                // The cumulative at a far level stands in for the full x-integral.
                let mass = law.cumulative(t, 1e9 * t).unwrap();
                assert!((mass - tail).abs() <= 1e-6 * tail, "{} {side:?} t={t}: {mass} vs {tail}", m.to_text());
            }
        }
    }
}

#[test]
fn spectrally_negative_infimum_side_integrates_to_its_tail() {
    let m = ProcessModel::spectrally_negative(1.5).unwrap();
    let law = EntranceLaw::new(m, Side::Infimum, QuadratureConfig::default()).unwrap();
    for t in [0.5f64, 1.0, 2.0] {
        // q*_t(x) = x p_t(x)/t has light tails on the positive side.
        let mass = simpson(|x| law.density(t, x).unwrap(), 0.0, 30.0 * t.powf(1.0 / 1.5), 6000);
        let want = t.powf(-(1.0 - 1.0 / 1.5)) / libm::tgamma(1.0 / 1.5);
        assert!((mass - want).abs() < 1e-6 * want, "t={t}: {mass} vs {want}");
    }
}

#[test]
fn joint_density_factorizes_over_the_drawdown() {
    // ∫ f(s, x, y) dy = n(t−s<ζ) q*_s(x).
    let m = ProcessModel::brownian(0.4).unwrap();
    let law = JointLaw::new(m, 1.0, QuadratureConfig::default()).unwrap();
    for (s, x) in [(0.2, 0.3), (0.5, 1.0), (0.85, 0.05)] {
        let inner = simpson(|y| law.density(s, x, y).unwrap(), 0.0, 14.0, 20_000);
        let want = law.supremum_law().lifetime_tail(1.0 - s).unwrap() * law.infimum_law().density(s, x).unwrap();
        assert!((inner - want).abs() < 1e-7 * want, "({s}, {x}): {inner} vs {want}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn characteristic_exponent_is_hermitian(idx in 0usize..9, lambda in -20.0f64..20.0) {
        let m = &catalog()[idx];
        let a = m.char_exponent(lambda);
        let b = m.char_exponent(-lambda);
        prop_assert!((a.re - b.re).abs() <= 1e-12 * a.norm().max(1.0));
        prop_assert!((a.im + b.im).abs() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn stable_entrance_laws_scale(t in 0.1f64..10.0, x in 0.01f64..8.0, pick in 0usize..2) {
        let m = [ProcessModel::cauchy(), ProcessModel::spectrally_negative(1.5).unwrap()][pick].clone();
        let (alpha, rho) = m.stable_params().unwrap();
        let cfg = QuadratureConfig::default();
        for (side, exp) in [(Side::Supremum, rho), (Side::Infimum, 1.0 - rho)] {
            let law = EntranceLaw::new(m.clone(), side, cfg).unwrap();
            if !law.has_density() {
                continue;
            }
            let lhs = law.density(t, x).unwrap();
            let rhs = t.powf(-exp - 1.0 / alpha) * law.density(1.0, x * t.powf(-1.0 / alpha)).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1e-300), "{side:?}: {lhs} vs {rhs}");
            prop_assert!(lhs >= 0.0);
        }
    }

    #[test]
    fn cauchy_sides_coincide(t in 0.05f64..20.0, x in 0.0f64..40.0) {
        let (up, down) = EntranceLaw::pair(&ProcessModel::cauchy(), QuadratureConfig::default()).unwrap();
        prop_assert_eq!(up.density(t, x).unwrap(), down.density(t, x).unwrap());
    }

    #[test]
    fn stable_time_marginal_is_the_generalized_arcsine(s in 0.01f64..0.99, pick in 0usize..3) {
        let m = [ProcessModel::cauchy(), ProcessModel::spectrally_negative(1.5).unwrap(), ProcessModel::stable(0.7, 0.3).unwrap()][pick].clone();
        let rho = m.positivity_param().unwrap();
        let got = gt_density(&m, 1.0, s).unwrap();
        // Independent closed form of the generalized arcsine density.
        let want = (std::f64::consts::PI * rho).sin() / std::f64::consts::PI * s.powf(rho - 1.0) * (1.0 - s).powf(-rho);
        prop_assert!((got - want).abs() <= 1e-10 * want, "{got} vs {want}");
    }
}
