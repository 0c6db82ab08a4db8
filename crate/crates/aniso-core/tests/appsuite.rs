use aniso_core::appsuite::{nvs_terms, run_nvs, run_stefan, stefan_terms, PMode};
use aniso_core::psolver::{solve_param, ParamSet};
use aniso_core::Rational;

fn leave_one_out(sets: &[ParamSet]) {
    let full = sets.iter().fold(ParamSet::full(), |acc, s| acc.intersect(s));
    for skip in 0..sets.len() {
        let partial = sets.iter().enumerate().filter(|(i, _)| *i != skip).fold(ParamSet::full(), |acc, (_, s)| acc.intersect(s));
        assert_eq!(partial.intersect(&full), full, "dropping term {} shrank the intersection", skip);
    }
}

#[test]
fn dropping_a_term_never_shrinks_the_intersection() {
    for n in 2..=4 {
        let s: Vec<ParamSet> = stefan_terms(n).iter().map(|t| solve_param(&t.query).unwrap()).collect();
        leave_one_out(&s);
        let v: Vec<ParamSet> = nvs_terms(n).iter().map(|t| solve_param(&t.query).unwrap()).collect();
        leave_one_out(&v);
    }
}

#[test]
fn theorem_ranges_for_small_dimensions() {
    for n in 2..=4 {
        let half = Rational::new(n as i64 + 2, 2);
        let st = run_stefan(n, PMode::Symbolic).unwrap();
        assert_eq!(st.matches_theorem(), Some(true));
        assert!(st.intersection.as_ref().unwrap().contains(&half.recip().unwrap()) || half == Rational::new(3, 1));
        let nv = run_nvs(n, PMode::Symbolic).unwrap();
        assert_eq!(nv.matches_theorem(), Some(true));
        assert!(!nv.intersection.as_ref().unwrap().contains(&half.recip().unwrap()));
    }
}

#[test]
fn concrete_mode_agrees_with_symbolic_sets() {
    for p in [2, 3, 4, 7] {
        let rep = run_stefan(3, PMode::Concrete(Rational::integer(p))).unwrap();
        assert!(rep.terms.iter().all(|t| t.agrees), "stefan p = {}", p);
        let rep = run_nvs(3, PMode::Concrete(Rational::integer(p))).unwrap();
        assert!(rep.terms.iter().all(|t| t.agrees), "nvs p = {}", p);
    }
}
