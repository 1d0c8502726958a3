mod common;

use common::{product_integral, pure_cdf, pure_pdf, rel, single_integral, PURE_ARGS};
use twoway_fso::ber::{BerArgs, BerModel};
use twoway_fso::channel::{pointing_from_normalized, IrradianceSeries};
use twoway_fso::{Hop, HopPair, PointingParams, Regime, SeriesConfig};

#[test]
fn large_gamma_sq_recovers_pure_turbulence() {
    for regime in Regime::ALL {
        let hop = Hop::new(regime.params(), PointingParams::none());
        let s = IrradianceSeries::new(&hop, SeriesConfig::default()).unwrap();
        for ((&i, &f), &p) in PURE_ARGS
            .iter()
            .zip(&pure_cdf(regime))
            .zip(&pure_pdf(regime))
        {
            let (cdf, pdf) = (s.cdf(i).unwrap(), s.pdf(i).unwrap());
            assert!(rel(cdf, f) < 1e-6, "{regime} F({i}) = {cdf} vs {f}");
            assert!(rel(pdf, p) < 1e-6, "{regime} f({i}) = {pdf} vs {p}");
        }
    }
}

#[test]
fn doubling_truncation_on_reference_grid() {
    for regime in Regime::ALL {
        let hop = Hop::without_pointing(regime.params());
        let a = IrradianceSeries::new(&hop, SeriesConfig::new(100)).unwrap();
        let b = IrradianceSeries::new(&hop, SeriesConfig::new(200)).unwrap();
        for i in PURE_ARGS {
            let (x, y) = (a.cdf(i).unwrap(), b.cdf(i).unwrap());
            assert!(rel(x, y) < 1e-9, "{regime} {i}");
        }
    }
}

// 80-digit evaluations of the J = 100 closed forms, weak regime with
// w_z/r = 10, σ_s/r = 0.1
const POINTED_A1_1E4: f64 = 0.354_950_394_520_36;
const POINTED_A1_1E5: f64 = 0.016_054_824_339_167_1;
const POINTED_A3_1E5: f64 = 0.000_818_319_846_288_837;

#[test]
fn pointed_a_series_match_reference() {
    let p = pointing_from_normalized(10.0, 0.1).unwrap();
    let hops = HopPair::identical(Hop::new(Regime::Weak.params(), p));
    let m = BerModel::new(&hops, SeriesConfig::default()).unwrap();
    assert!(rel(m.a1(1e4).unwrap(), POINTED_A1_1E4) < 1e-10);
    assert!(rel(m.a2(1e5).unwrap(), POINTED_A1_1E5) < 1e-10);
    assert!(
        rel(
            m.a3(BerArgs::new(1e5, 1e5).unwrap()).unwrap(),
            POINTED_A3_1E5
        ) < 1e-10
    );
    // too ill-conditioned or divergent: reported, not guessed
    assert!(m
        .a3(BerArgs::new(1e4, 1e4).unwrap())
        .unwrap_err()
        .is_unreliable());
    assert!(m
        .a3(BerArgs::new(1e3, 1e3).unwrap())
        .unwrap_err()
        .is_unreliable());
}

#[test]
fn a_series_match_quadrature_in_every_regime() {
    for regime in Regime::ALL {
        let hops = HopPair::identical(Hop::without_pointing(regime.params()));
        let m = BerModel::new(&hops, SeriesConfig::default()).unwrap();
        for u in [1e4, 1e6] {
            let q = single_integral(&hops.hop2, u).unwrap();
            assert!(rel(m.a1(u).unwrap(), q) < 1e-6, "{regime} A1({u})");
            for v in [1e4, 1e6] {
                let q = product_integral(&hops.hop2, &hops.hop1, u, v).unwrap();
                let s = m.a3(BerArgs::new(u, v).unwrap()).unwrap();
                assert!(rel(s, q) < 1e-6, "{regime} A3({u}, {v}): {s} vs {q}");
            }
        }
    }
}

#[test]
fn distinct_hops_keep_their_roles() {
    // A1 integrates hop 2 and A2 hop 1
    let hops = HopPair::new(
        Hop::without_pointing(Regime::Weak.params()),
        Hop::without_pointing(Regime::Strong.params()),
    );
    let m = BerModel::new(&hops, SeriesConfig::default()).unwrap();
    let a1 = m.a1(1e4).unwrap();
    let a2 = m.a2(1e4).unwrap();
    assert!(rel(a1, single_integral(&hops.hop2, 1e4).unwrap()) < 1e-6);
    assert!(rel(a2, single_integral(&hops.hop1, 1e4).unwrap()) < 1e-6);
    let s = m.a3(BerArgs::new(1e4, 1e5).unwrap()).unwrap();
    let q = product_integral(&hops.hop2, &hops.hop1, 1e4, 1e5).unwrap();
    assert!(rel(s, q) < 1e-6, "{s} vs {q}");
}
