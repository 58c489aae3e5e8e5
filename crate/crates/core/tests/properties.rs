use cantor::certify::{
    canonical_traps, certify_critical_points, certify_trapping, check_parabolic, limit_map_deviation, unit_circle_samples,
    LimitChart,
};
use cantor::dynamics::{classify_point, BasinTag};
use cantor::families::{explicit_rings, make_schedule, validate_degrees, DegreeVector, Family, Map, MapKind, MapSpec};
use cantor::numerics::{mp, Complex, Mp, PrecisionContext};
use cantor::symbolic::{classify_itinerary, turning_constant, winding_number, ComponentCurve, ItineraryWord, DEFAULT_PAIR_BUDGET};
use proptest::prelude::*;

fn degrees() -> impl Strategy<Value = DegreeVector> {
    prop::collection::vec(3i64..=6, 2..=4).prop_filter_map("reciprocal sum", |d| validate_degrees(&d).ok())
}

/// Degrees with strictly decreasing ring moduli in (0.02, 0.6).
fn p_map() -> impl Strategy<Value = MapSpec> {
    degrees().prop_flat_map(|d| {
        let n = d.n() - 1;
        (Just(d), prop::collection::vec(0.15f64..0.6, n), prop::collection::vec(0.0f64..6.3, n))
    })
    .prop_map(|(d, ratios, phases)| {
        let c = PrecisionContext::new(30).unwrap();
        let mut m = 1.0;
        let moduli = ratios.iter().map(|r| {
            m *= r;
            mp(m, c)
        });
        let rings = explicit_rings(Family::P, &d, moduli.collect(), Some(phases.iter().map(|&p| mp(p, c)).collect())).unwrap();
        MapSpec::parabolic_p(d, rings).unwrap()
    })
}

fn word() -> impl Strategy<Value = (usize, ItineraryWord)> {
    (2usize..=5).prop_flat_map(|n| {
        let sym = 1u8..=n as u8;
        (
            Just(n),
            prop::collection::vec(sym.clone(), 0..6),
            prop::collection::vec(sym, 1..=12),
        )
            .prop_map(|(n, pre, per)| (n, ItineraryWord::new(pre, per)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dual_derivative_matches_difference_quotient(spec in p_map(), r in 0.05f64..3.0, t in 0.0f64..6.3) {
        let c = spec.precision;
        let map = Map::<Mp>::new(&spec, c);
        let z = Complex::<Mp>::from_polar(&mp(r, c), &mp(t, c));
        let h = mp(1e-12, c);
        let dz = Complex::new(h.clone(), mp(0.0, c));
        let d = map.eval_dual_direct(&z).unwrap();
        let fp = map.eval_dual_direct(&(z.clone() + dz.clone())).unwrap().value;
        let fm = map.eval_dual_direct(&(z - dz)).unwrap().value;
        let fd = (fp - fm).scale(&(mp(0.5, c) / h));
        let err = (fd - d.derivative.clone()).abs().to_f64();
        prop_assert!(err <= 1e-12 * (1.0 + d.derivative.abs().to_f64()), "err {err}");
    }

    #[test]
    fn p_is_parabolic_at_one(spec in p_map()) {
        let report = check_parabolic(&spec).unwrap();
        prop_assert!(report.pass, "{:?}", report.checks);
    }

    #[test]
    fn classifier_is_shift_invariant((n, w) in word(), family in prop_oneof![Just(Family::P), Just(Family::R), Just(Family::HyperbolicF)]) {
        let mut shifted = w.clone();
        let v = classify_itinerary(family, n, &w).unwrap();
        for _ in 0..20 {
            shifted = shifted.shift();
            prop_assert_eq!(classify_itinerary(family, n, &shifted).unwrap(), v);
        }
    }

    #[test]
    fn word_text_round_trips((_n, w) in word()) {
        let back: ItineraryWord = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn turning_is_similarity_invariant(radii in prop::collection::vec(0.6f64..1.4, 64..160), scale_exp in -8i32..8, dx in -5.0f64..5.0) {
        let m = radii.len();
        let v: Vec<Complex<f64>> = radii
            .iter()
            .enumerate()
            .map(|(k, r)| Complex::from_polar(r, &(std::f64::consts::TAU * k as f64 / m as f64)))
            .collect();
        let curve = |v: Vec<Complex<f64>>| ComponentCurve { winding: winding_number(&v), vertices: v, depth: 0, word: vec![], closure_gap: 0.0 };
        let t0 = turning_constant(&curve(v.clone()), DEFAULT_PAIR_BUDGET).unwrap();
        prop_assert!(t0 >= 1.0);
        let k = 2f64.powi(scale_exp);
        let moved: Vec<_> = v.iter().map(|z| Complex::new(z.re * k + dx, z.im * k)).collect();
        let t1 = turning_constant(&curve(moved), DEFAULT_PAIR_BUDGET).unwrap();
        prop_assert!((t0 - t1).abs() < 1e-9 * t0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn critical_multiplicity_is_two_deg_minus_two(spec in p_map()) {
        let report = certify_critical_points(&spec).unwrap();
        prop_assert_eq!(report.total_multiplicity, 2 * spec.degree() - 2);
    }

    #[test]
    fn shrinking_rings_approach_the_limit(d in degrees(), e in 4i32..7) {
        let c = PrecisionContext::SOLVER_DEFAULT;
        let big = mp(10f64.powi(-e), c);
        let small = mp(10f64.powi(-2 * e), c);
        let dev = |s: &Mp| {
            let rings = make_schedule(Family::P, &d, s, None).unwrap();
            let spec = MapSpec::parabolic_p(d.clone(), rings).unwrap();
            limit_map_deviation(&spec, LimitChart::Direct, &unit_circle_samples(64, c)).unwrap().to_f64()
        };
        prop_assert!(dev(&small) < dev(&big));
    }

    #[test]
    fn reference_maps_trap(n in 2u32..=6, m in 2u32..=5, which in 0usize..4) {
        let kind = [MapKind::RefPolyG { n }, MapKind::RefRatH { n }, MapKind::RefPolyGmn { m, n }, MapKind::RefRatHmn { m, n }][which];
        let spec = MapSpec::reference(kind, PrecisionContext::new(30).unwrap()).unwrap();
        for trap in canonical_traps(&spec) {
            let report = certify_trapping(&spec, &trap, 96).unwrap();
            prop_assert!(report.pass, "{kind:?} {}", trap.name);
        }
    }

    #[test]
    fn decided_labels_survive_more_iterations(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let c = PrecisionContext::SOLVER_DEFAULT;
        let d = validate_degrees(&[3, 3]).unwrap();
        let spec = MapSpec::parabolic_p(d.clone(), explicit_rings(Family::P, &d, vec![mp(0.25, c)], None).unwrap()).unwrap();
        let z = Complex::new(re, im);
        let a = classify_point(&spec, &z, 500);
        let b = classify_point(&spec, &z, 1000);
        if a.tag != BasinTag::Undecided {
            prop_assert_eq!(a, b);
        }
    }
}
