use hyperpedal::constructions::{orthotomic, pedal, reflect_through, OrthotomicInduced, PedalInduced};
use hyperpedal::frontal::{d3, truncate3};
use hyperpedal::minkowski::jet_value;
use hyperpedal::singularity::{measure_exponents, Exponents};
use hyperpedal::{catalog, Boost, Jet, Legendre, LegendrePair, MVec3};
use proptest::prelude::*;
use std::sync::OnceLock;

fn point(rho: f64, th: f64) -> MVec3<f64> {
    MVec3::new(rho.cosh(), rho.sinh() * th.cos(), rho.sinh() * th.sin())
}

fn pairs() -> &'static [LegendrePair] {
    static PAIRS: OnceLock<Vec<LegendrePair>> = OnceLock::new();
    PAIRS.get_or_init(|| catalog::all().into_iter().map(|c| LegendrePair::new(c).unwrap()).collect())
}

fn param(p: &LegendrePair, t: f64) -> f64 {
    let (a, b) = p.curve().domain();
    a + (b - a) * t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frame_is_pseudo_orthonormal(k in 0usize..4, t in 0.0f64..1.0) {
        let p = &pairs()[k];
        let f = p.frame(param(p, t)).unwrap();
        let sc = f.r.max_abs().powi(2).max(1.0) * 1e-10;
        prop_assert!((f.r.inner(&f.r) + 1.0).abs() < sc);
        prop_assert!((f.v.inner(&f.v) - 1.0).abs() < sc);
        prop_assert!((f.mu.inner(&f.mu) - 1.0).abs() < sc);
        prop_assert!(f.r.inner(&f.v).abs() < sc);
        prop_assert!(f.r.inner(&f.mu).abs() < sc);
        prop_assert!(f.v.inner(&f.mu).abs() < sc);
    }

    #[test]
    fn frame_equations(k in 0usize..4, t in 0.0f64..1.0) {
        let p = &pairs()[k];
        let j = p.jets(param(p, t), 2).unwrap();
        let mu = truncate3(&j.mu, 1);
        let dr = d3(&j.r);
        let dv = d3(&j.v);
        let (l, m) = (j.l.value(), j.m.value());
        let mu0 = jet_value(&mu);
        let r0 = jet_value(&j.r);
        let v0 = jet_value(&j.v);
        let dmu = jet_value(&d3(&j.mu));
        let sc = mu0.max_abs().powi(2).max(1.0) * (l.abs() + m.abs()).max(1.0) * 1e-9;
        prop_assert!((jet_value(&dr) - mu0 * l).max_abs() < sc);
        prop_assert!((jet_value(&dv) - mu0 * m).max_abs() < sc);
        prop_assert!((dmu - (r0 * l - v0 * m)).max_abs() < sc);
    }

    #[test]
    fn pedal_and_orthotomic_stay_on_the_upper_sheet(
        k in 0usize..4, t in 0.0f64..1.0, rho in 0.0f64..2.0, th in 0.0f64..6.3,
    ) {
        let p = &pairs()[k];
        let q = point(rho, th);
        let s = param(p, t);
        let ped = pedal(p, &q, s).unwrap();
        let ort = orthotomic(p, &q, s).unwrap();
        prop_assert!(ped.on_upper_sheet(1e-9 * ped.max_abs().powi(2).max(1.0)));
        prop_assert!(ort.on_upper_sheet(1e-9 * ort.max_abs().powi(2).max(1.0)));
    }

    #[test]
    fn orthotomic_is_reflection_of_q_through_pedal(
        k in 0usize..4, t in 0.0f64..1.0, rho in 0.0f64..2.0, th in 0.0f64..6.3,
    ) {
        let p = &pairs()[k];
        let q = point(rho, th);
        let s = param(p, t);
        let ped = pedal(p, &q, s).unwrap();
        let ort = orthotomic(p, &q, s).unwrap();
        let back = reflect_through(&q, &ped);
        prop_assert!((ort - back).max_abs() <= 1e-9 * ort.max_abs().max(1.0));
        // the pedal is the hyperbolic midpoint of Q and its reflection
        let mid = (ort + q) * 0.5;
        let unit = mid * (-mid.inner(&mid)).sqrt().recip();
        prop_assert!((unit - ped).max_abs() <= 1e-8 * ped.max_abs().max(1.0));
    }

    #[test]
    fn induced_frames_are_legendrian(
        k in 0usize..4, t in 0.05f64..0.95, rho in 0.0f64..1.0, th in 0.0f64..6.3,
    ) {
        let p = &pairs()[k];
        let q = point(rho, th);
        let s = param(p, t);
        for f in [
            PedalInduced::new(p, q).unwrap().frame(s).unwrap(),
            OrthotomicInduced::new(p, q).unwrap().frame(s).unwrap(),
        ] {
            let sc = f.r.max_abs().powi(2).max(1.0) * 1e-9;
            prop_assert!((f.r.inner(&f.r) + 1.0).abs() < sc);
            prop_assert!((f.v.inner(&f.v) - 1.0).abs() < sc);
            prop_assert!(f.r.inner(&f.v).abs() < sc);
        }
    }

    #[test]
    fn exponents_survive_isometries(
        a in 2usize..6, gap in 1usize..4, c in -1.5f64..1.5, rho in 0.0f64..1.5, th in 0.0f64..6.3,
    ) {
        let b = a + gap;
        let t = Jet::variable(0.0, 20);
        let x = t.powi(a as i32).unwrap() + t.powi(a as i32 + 1).unwrap().scale(c);
        let y = t.powi(b as i32).unwrap() - t.powi(b as i32 + 2).unwrap().scale(c);
        let h = (x.clone() * x.clone() + y.clone() * y.clone()).add_scalar(1.0).sqrt().unwrap();
        let germ = MVec3::new(h, x, y);
        let moved = Boost::to_origin(&point(rho, th)).unwrap().inverse().apply_jets(&germ);
        prop_assert_eq!(measure_exponents(&germ, 1e-8), Exponents::Pair(a, b));
        prop_assert_eq!(measure_exponents(&moved, 1e-8), Exponents::Pair(a, b));
    }

    #[test]
    fn jet_division_inverts_multiplication(
        f in proptest::collection::vec(-3.0f64..3.0, 8),
        g in proptest::collection::vec(-3.0f64..3.0, 8),
    ) {
        let mut g = g;
        g[0] = 1.0 + g[0].abs();
        let (f, g) = (Jet::from_coeffs(0.0, f), Jet::from_coeffs(0.0, g));
        let back = (f.clone() * g.clone()).div(&g).unwrap();
        for (x, y) in back.coeffs().iter().zip(f.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
        }
    }
}

#[test]
fn single_precision_frame_tracks_double() {
    let p = LegendrePair::new(catalog::cusp()).unwrap();
    for s in [-1.5f64, -0.5, 0.25, 1.0] {
        let d = Legendre::<f64>::frame(&p, s).unwrap();
        let f = Legendre::<f32>::frame(&p, s as f32).unwrap();
        assert!((f.l as f64 - d.l).abs() < 1e-4 * d.l.abs().max(1.0));
        assert!((f.m as f64 - d.m).abs() < 1e-4 * d.m.abs().max(1.0));
    }
}
