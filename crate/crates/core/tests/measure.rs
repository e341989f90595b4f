use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use theta6::lemmas::{lemma_suite, LemmaId};
use theta6::lp::measure_instance;
use theta6::sampling::{spiral_instance, SampleSpec, SPIRAL_S, SPIRAL_T};
use theta6::{Point, PointSet, Theta6Graph};

#[test]
fn spiral_instances_satisfy_measured_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut hits = 0;
    for _ in 0..600 {
        let Some(ps) = spiral_instance(&mut rng) else { continue };
        let m = measure_instance(&Theta6Graph::build(ps), SPIRAL_S, SPIRAL_T).unwrap();
        if !m.premises_hold() {
            continue;
        }
        hits += 1;
        for row in m.check_rows() {
            assert_ne!(row.holds, Some(false), "{} fails", row.label);
        }
    }
    assert!(hits >= 10, "{hits}");
}

#[test]
fn mirrored_instance_measures_the_same() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ps = std::iter::repeat_with(|| spiral_instance(&mut rng)).flatten().next().unwrap();
    let mirror: Vec<Point> = ps.iter().map(|p| Point::new(-p.x(), p.y().clone())).collect();
    let a = measure_instance(&Theta6Graph::build(ps.clone()), SPIRAL_S, SPIRAL_T).unwrap();
    let b = measure_instance(&Theta6Graph::build(PointSet::new(mirror).unwrap()), SPIRAL_S, SPIRAL_T).unwrap();
    assert!(!a.mirrored && b.mirrored);
    assert_eq!(a.values, b.values);
    assert_eq!(a.flags, b.flags);
}

#[test]
fn outside_cone_zero_is_an_error() {
    let ps = PointSet::new(vec![Point::origin(), Point::from_ratios((1, 5), (4, 5))]).unwrap();
    assert!(measure_instance(&Theta6Graph::build(ps), 1, 0).is_err());
}

#[test]
fn lemma_suites_report_hits() {
    for lemma in LemmaId::ALL {
        let instances = if lemma.samples_triples() { 2000 } else { 20 };
        let spec = SampleSpec { instances, size: 12, seed: 2, ..SampleSpec::default() };
        let report = lemma_suite(&spec, lemma).unwrap();
        assert!(report.violations.is_empty(), "{lemma}: {:?}", report.violations.first());
        assert!(report.premise_hits > 0, "{lemma}");
    }
}
