mod common;

use common::{coords, expression, fd_taylor, length_scale, point};
use parsym_core::expr::parse;
use parsym_core::jet::{Analytic, Jet, JetSpace};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn jets_close(a: &Jet, b: &Jet, tol: f64) -> bool {
    a.coeffs().len() == b.coeffs().len()
        && a.coeffs()
            .iter()
            .zip(b.coeffs())
            .all(|(x, y)| close(*x, *y, tol))
}

/// `(dim, order, f, g, point)` with expressions in the first `dim` coordinates.
fn case() -> impl Strategy<Value = (usize, usize, String, String, Vec<f64>)> {
    (1usize..=3, 1usize..=5).prop_flat_map(|(dim, order)| {
        (
            Just(dim),
            Just(order),
            expression(dim),
            expression(dim),
            point(dim, 1.0),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn leibniz((dim, order, f, g, x) in case(), axis in 0usize..3) {
        let c = coords(3);
        let axis = axis % dim;
        let x = &x[..];
        let (f, g) = (parse(&f, &c[..dim]).unwrap(), parse(&g, &c[..dim]).unwrap());
        let fj = f.eval_jet(x, order).unwrap();
        let gj = g.eval_jet(x, order).unwrap();
        let lhs = (&fj * &gj).partial(axis).unwrap();
        let low = order - 1;
        let rhs = &(&fj.partial(axis).unwrap() * &gj.truncate(low)) + &(&fj.truncate(low) * &gj.partial(axis).unwrap());
        prop_assert!(jets_close(&lhs, &rhs, 1e-12), "{:?} vs {:?}", lhs.coeffs(), rhs.coeffs());
    }

    #[test]
    fn chain_rule((dim, order, f, _g, x) in case(), axis in 0usize..3) {
        let c = coords(3);
        let axis = axis % dim;
        let x = &x[..];
        let inner = parse(&f, &c[..dim]).unwrap();
        let fj = inner.eval_jet(x, order).unwrap();
        // Keep exp(f) and its Taylor coefficients finite.
        prop_assume!(fj.coeffs().iter().all(|c| c.abs() < 20.0));
        let df = fj.partial(axis).unwrap();
        let low = order - 1;
        for (outer, derivative) in [
            (Analytic::Sin, fj.compose(Analytic::Cos).unwrap()),
            (Analytic::Exp, fj.compose(Analytic::Exp).unwrap()),
            (Analytic::Atan, (&Jet::constant(fj.space(), 1.0) + &(&fj * &fj)).recip().unwrap()),
        ] {
            let lhs = fj.compose(outer).unwrap().partial(axis).unwrap();
            let rhs = &derivative.truncate(low) * &df;
            prop_assert!(jets_close(&lhs, &rhs, 1e-10), "{outer:?}: {:?} vs {:?}", lhs.coeffs(), rhs.coeffs());
        }
    }

    #[test]
    fn finite_differences((dim, _order, f, _g, x) in case()) {
        let c = coords(3);
        let x = &x[..];
        let e = parse(&f, &c[..dim]).unwrap();
        let jet = e.eval_jet(x, 3).unwrap();
        prop_assert!(close(jet.value(), e.eval(x).unwrap(), 1e-12));
        // Steps follow the local length scale so truncation stays below the
        // tolerance for rapidly varying expressions.
        // Errors are measured against each coefficient's natural magnitude
        // `max(|f|, 1) / L^|α|`.
        let length = length_scale(jet.coeffs(), jet.space().multi_indices());
        // Well-conditioned: coefficients up to third order grow no faster than `20^k`.
        prop_assume!(length >= 0.05);
        let h = 0.005 * length;
        let eval = |p: &[f64]| e.eval(p).unwrap();
        for (alpha, &exact) in jet.space().multi_indices().iter().zip(jet.coeffs()) {
            let fd = fd_taylor(&eval, x, alpha, h);
            let scale = jet.value().abs().max(1.0) / length.powi(alpha.iter().sum::<u32>() as i32);
            let err = (exact - fd).abs() / exact.abs().max(fd.abs()).max(scale);
            prop_assert!(err <= 1e-6, "{alpha:?}: {exact} vs {fd} (h = {h}, relative error {err:e})");
        }
    }

    #[test]
    fn source_round_trip((dim, _order, f, _g, x) in case()) {
        let c = coords(3);
        let x = &x[..];
        let e = parse(&f, &c[..dim]).unwrap();
        let printed = e.to_source(&c[..dim]);
        let again = parse(&printed, &c[..dim]).unwrap();
        prop_assert_eq!(again.to_source(&c[..dim]), printed);
        prop_assert!(close(again.eval(x).unwrap(), e.eval(x).unwrap(), 1e-14));
    }

    #[test]
    fn truncation_commutes_with_products((dim, _order, f, g, x) in case(), low in 0usize..4) {
        let c = coords(3);
        let x = &x[..];
        let (f, g) = (parse(&f, &c[..dim]).unwrap(), parse(&g, &c[..dim]).unwrap());
        let fj = f.eval_jet(x, 4).unwrap();
        let gj = g.eval_jet(x, 4).unwrap();
        let a = (&fj * &gj).truncate(low);
        let b = &fj.truncate(low) * &gj.truncate(low);
        prop_assert!(jets_close(&a, &b, 1e-12));
    }
}

/// A jet with coefficients in `[-1, 1]`.
fn random_jet(dim: usize, order: usize) -> impl Strategy<Value = Jet> {
    let space = JetSpace::new(dim, order);
    proptest::collection::vec(-1.0..1.0f64, space.len())
        .prop_map(move |c| Jet::from_coeffs(&space, c).unwrap())
}

fn jet_triple() -> impl Strategy<Value = (Jet, Jet, Jet)> {
    (1usize..=3, 0usize..=5).prop_flat_map(|(dim, order)| {
        (
            random_jet(dim, order),
            random_jet(dim, order),
            random_jet(dim, order),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(100) })]

    #[test]
    fn products_commute_and_associate((a, b, c) in jet_triple()) {
        prop_assert!(jets_close(&(&a * &b), &(&b * &a), 1e-13));
        prop_assert!(jets_close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-13));
    }

    #[test]
    fn log_inverts_exp(a in random_jet(2, 4)) {
        let back = a.compose(Analytic::Exp).unwrap().compose(Analytic::Log).unwrap();
        for (x, y) in back.coeffs().iter().zip(a.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn mixed_partials_commute(a in random_jet(3, 4), i in 0usize..3, j in 0usize..3) {
        let ij = a.partial(i).unwrap().partial(j).unwrap();
        let ji = a.partial(j).unwrap().partial(i).unwrap();
        prop_assert_eq!(ij.coeffs(), ji.coeffs());
    }
}

#[test]
fn coefficient_count_matches_binomial() {
    for dim in 1..=4 {
        for order in 0..=6 {
            let space = JetSpace::new(dim, order);
            let expected = (1..=dim).fold(1usize, |acc, k| acc * (order + k) / k);
            assert_eq!(space.len(), expected);
        }
    }
}
