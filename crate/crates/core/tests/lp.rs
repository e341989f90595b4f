mod common;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use theta6::lp::*;

use common::{fm_feasible, random_system};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn system(vars: &[&str], rows: &[&str]) -> LinearSystem {
    let mut s = LinearSystem::new("t", vars.iter().map(|v| Variable::nonnegative(v)).collect());
    for (i, row) in rows.iter().enumerate() {
        s.push_text(&format!("r{i}"), row, "").unwrap();
    }
    s
}

#[test]
fn agrees_with_fourier_motzkin() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut feasible, mut infeasible) = (0, 0);
    for id in 0..300 {
        let sys = random_system(&mut rng, id);
        let cert = solve_feasibility(&sys).unwrap();
        assert_eq!(cert.is_feasible(), fm_feasible(&sys), "{sys:?}");
        assert!(check_certificate(&sys, &cert).unwrap());
        if cert.is_feasible() {
            feasible += 1;
        } else {
            infeasible += 1;
        }
    }
    assert!(feasible > 30 && infeasible > 30, "{feasible} feasible, {infeasible} infeasible");
}

#[test]
fn contradictory_pair() {
    let mut s = LinearSystem::new("pair", vec![Variable::free("x")]);
    s.push_text("a", "x <= 0", "").unwrap();
    s.push_text("b", "1 <= x", "").unwrap();
    let Certificate::Infeasible(m) = solve_feasibility(&s).unwrap() else { panic!("feasible") };
    let scale = &m.inequalities[0];
    assert!(!scale.is_zero());
    assert_eq!(m.inequalities, vec![scale.clone(), scale.clone()]);
    let unit = Multipliers { inequalities: vec![r(1, 1), r(1, 1)], lower: vec![BigRational::zero()], upper: vec![BigRational::zero()] };
    assert!(check_certificate(&s, &Certificate::Infeasible(unit.clone())).unwrap());
    let mut negated = unit;
    negated.inequalities[1] = r(-1, 1);
    assert!(!check_certificate(&s, &Certificate::Infeasible(negated)).unwrap());
}

#[test]
fn strict_lower_bound_against_path_bound() {
    let s = system(&["y0", "y1"], &["2.5*y0 + 3.5*y1 < 1", "3 <= 1.5*y0 + 4*y1"]);
    assert!(!solve_feasibility(&s).unwrap().is_feasible());
    assert!(!fm_feasible(&s));
}

#[test]
fn zero_witness_for_first_assumption() {
    let s = system(&["y0", "y1"], &["2.5*y0 + 3.5*y1 < 1"]);
    let w = [("y0".to_string(), BigRational::zero()), ("y1".to_string(), BigRational::zero())].into_iter().collect();
    assert!(check_certificate(&s, &Certificate::Feasible { witness: w }).unwrap());
}

#[test]
fn certificates_round_trip_through_json() {
    let c = catalog(&CatalogOptions::default());
    for name in ["Y0·X0·NOJ", "Y1·X1·J2"] {
        let sys = find_system(&c, name).unwrap();
        let cert = solve_feasibility(sys).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert!(check_certificate(sys, &back).unwrap());
    }
}

#[test]
fn catalog_count_matches_enumeration() {
    let combined = 2 * 2 * 5;
    let augmented = 3 * 2 + 2;
    let count = combined + augmented + 3 + 2 + 1 + 2;
    let c = catalog(&CatalogOptions::default());
    assert_eq!(c.len(), count);
    let names: BTreeSet<&str> = c.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names.len(), count);
}

#[test]
fn small_catalog_systems_agree_with_fourier_motzkin() {
    let mut checked = 0;
    for sys in catalog(&CatalogOptions::default()) {
        let used: BTreeSet<&String> = sys.inequalities.iter().flat_map(|r| r.terms.keys()).collect();
        if used.len() > 6 {
            continue;
        }
        let cert = solve_feasibility(&sys).unwrap();
        assert_eq!(cert.is_feasible(), fm_feasible(&sys), "{}", sys.name);
        checked += 1;
    }
    assert!(checked >= 5, "{checked}");
}

#[test]
fn residual_cases_are_feasible_and_witnessed() {
    let c = catalog(&CatalogOptions::default());
    for name in ["Y1·X1·J2", "Y1·X1·J3", "Y1·X1·J4", "Y0·X0·J3"] {
        let sys = find_system(&c, name).unwrap();
        let Certificate::Feasible { witness } = solve_feasibility(sys).unwrap() else { panic!("{name} infeasible") };
        assert!(sys.inequalities.iter().all(|row| row.holds(&witness)), "{name}");
    }
}

#[test]
fn closed_path_rows_lose_infeasibility() {
    let c = catalog(&CatalogOptions::default());
    let sys = find_system(&c, "Y0·X0·J2").unwrap();
    assert!(!solve_feasibility(sys).unwrap().is_feasible());
    let mut closed = sys.clone();
    for row in closed.inequalities.iter_mut().filter(|r| r.label == "YPath" || r.label == "XPath") {
        row.relation = Relation::Le;
    }
    assert!(solve_feasibility(&closed).unwrap().is_feasible());
}

#[test]
fn optional_y5_row_flips_one_residual_case() {
    let with = CatalogOptions { with_y5: true, ..CatalogOptions::default() };
    let c = catalog(&with);
    assert!(!solve_feasibility(find_system(&c, "Y1·X1·J4").unwrap()).unwrap().is_feasible());
    assert!(solve_feasibility(find_system(&c, "Y1·X1·J2").unwrap()).unwrap().is_feasible());
}

#[test]
fn verification_is_deterministic() {
    let opts = CatalogOptions::default();
    let a = serde_json::to_string(&verify_all(&opts, Some("Claim6a")).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_all(&opts, Some("Claim6a")).unwrap()).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_certificate_rechecks(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_system(&mut rng, 0);
        let cert = solve_feasibility(&sys).unwrap();
        prop_assert!(check_certificate(&sys, &cert).unwrap());
        if let Certificate::Feasible { witness } = &cert {
            prop_assert!(sys.inequalities.iter().all(|row| row.holds(witness)));
        }
    }

    #[test]
    fn min_expands_to_one_row_per_argument(a in -5i64..5, b in 1i64..5, c in 1i64..5) {
        let rows = parse_relation(&format!("z <= min({a}*x, y/{b}, {c})")).unwrap();
        prop_assert_eq!(rows.len(), 3);
        prop_assert!(rows.iter().all(|(_, strict)| !strict));
    }
}
