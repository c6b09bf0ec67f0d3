use nccoarse::coarse::{commutant_seminorm_upper, PropContext, RepresentationOverMetric};
use nccoarse::cutting::{cut, cut_sweep};
use nccoarse::linalg::Operator;
use nccoarse::metric::{grid_cover, GridBox, GridNorm};
use nccoarse::rng::CounterRng;
use nccoarse::verify::oracles::random_banded;
use nccoarse::Tolerances;

fn line(n: i64) -> (GridBox, RepresentationOverMetric) {
    let bx = GridBox::new(vec![0], vec![n - 1], GridNorm::L1).unwrap();
    let rep = RepresentationOverMetric::simple(bx.metric_space());
    (bx, rep)
}

#[test]
fn deviation_against_radius() {
    let tol = Tolerances::default();
    let (bx, rep) = line(64);
    let radii: Vec<f64> = (0..5).map(|k| 2f64.powi(k)).collect();
    for seed in 0..20 {
        let mut rng = CounterRng::new(seed);
        let t = random_banded(&mut rng, 64, 3);
        let (ub, _) = commutant_seminorm_upper(&t, &PropContext::classical(rep.clone()), &tol).unwrap();
        let rows = cut_sweep(&t, &bx, &rep, &radii, ub, &tol).unwrap();
        let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
        for w in rows.windows(2) {
            assert!(w[1].deviation <= w[0].deviation + 1e-8, "seed {seed}: {devs:?}");
        }
    }
}

#[test]
fn zero_seminorm_is_rigid() {
    let tol = Tolerances::default();
    let (bx, rep) = line(40);
    let mut rng = CounterRng::new(9);
    let d = Operator::from_diag(&(0..40).map(|_| rng.normal()).collect::<Vec<_>>());
    for r in [3.0, 5.5, 11.0] {
        let c = cut(&d, &rep, &grid_cover(&bx, r).unwrap(), r, 0.0, &tol).unwrap();
        assert!(c.deviation <= 1e-10);
    }
}

#[test]
fn two_dimensional_box_bounds() {
    let tol = Tolerances::default();
    let bx = GridBox::cube(2, 8, GridNorm::LInf).unwrap();
    let rep = RepresentationOverMetric::simple(bx.metric_space());
    let mut rng = CounterRng::new(4);
    let t = random_banded(&mut rng, 64, 9);
    let (ub, _) = commutant_seminorm_upper(&t, &PropContext::classical(rep.clone()), &tol).unwrap();
    for r in [1.0, 2.0] {
        let c = cut(&t, &rep, &grid_cover(&bx, r).unwrap(), r, ub, &tol).unwrap();
        assert!(c.prop_ok && c.deviation_ok, "{c:?}");
        assert_eq!(c.colors, 4);
    }
}
