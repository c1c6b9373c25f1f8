use qpeel_core::construct::{build_many, formula_size, size_report, ConstructionSpec};
use qpeel_core::Budget;

#[test]
fn planes_over_three_match_their_sizes() {
    let specs: Vec<_> = (1..=11).map(|j| ConstructionSpec::plane(j, 3, 6)).collect();
    let fams = build_many(&specs, &Budget::default()).unwrap();
    for (s, f) in specs.iter().zip(&fams) {
        let r = size_report(s, f).unwrap();
        assert!(r.verdict, "{r}");
        assert!(f.is_t_intersecting(1), "{s}");
    }
}

#[test]
fn planes_at_seven_over_two() {
    let specs: Vec<_> = (1..=11).map(|j| ConstructionSpec::plane(j, 2, 7)).collect();
    let fams = build_many(&specs, &Budget::default()).unwrap();
    for (s, f) in specs.iter().zip(&fams) {
        assert_eq!(formula_size(s).unwrap().value, f.len().into(), "{s}");
        assert!(f.is_t_intersecting(1), "{s}");
    }
}
