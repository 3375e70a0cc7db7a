use branchcover_core::complex::Edge;
use branchcover_core::overlap::{small_overlap_census, SizeClass};
use branchcover_core::*;

fn example() -> Presentation {
    Presentation::parse("gens: a b\nrel: a^-1 b^2 a b^-1").unwrap()
}

fn torus() -> Presentation {
    Presentation::parse("gens: a b\nrel: a b a^-1 b^-1").unwrap()
}

fn example_sigma() -> SigmaTuple {
    SigmaTuple::parse("(123);(12)", 3).unwrap()
}

fn names(c: &PolygonalComplex, ids: &[usize]) -> Vec<String> {
    ids.iter().map(|&e| c.edge_name(e).to_string()).collect()
}

#[test]
fn sym2_squared_has_three_transitive_tuples() {
    let s2 = [Permutation::identity(2), Permutation::parse("(12)", 2).unwrap()];
    let mut transitive = 0;
    for a in &s2 {
        for b in &s2 {
            transitive += SigmaTuple::new(vec![a.clone(), b.clone()]).unwrap().is_transitive() as usize;
        }
    }
    assert_eq!(transitive, 3);
}

#[test]
fn uniform_sampling_passes_chi_square() {
    // 6 cells, 5 degrees of freedom; 20.52 is the 0.999 quantile
    let mut rng = sample_stream(2024, 3, 0);
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..60_000 {
        *counts.entry(Permutation::sample_uniform(3, &mut rng).images()).or_insert(0u32) += 1;
    }
    assert_eq!(counts.len(), 6);
    let chi2: f64 = counts.values().map(|&c| (c as f64 - 10_000.0).powi(2) / 10_000.0).sum();
    assert!(chi2 < 20.52, "chi2 = {chi2}");
    // each cell within 3 binomial standard errors
    let se = (60_000.0f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
    assert!(counts.values().all(|&c| (c as f64 - 10_000.0).abs() < 3.0 * se));
}

#[test]
fn identity_cover_is_disjoint_copies() {
    let n = 4;
    let id = SigmaTuple::identity(2, n).unwrap();
    let c = build_cover(&example(), &id, false).unwrap();
    assert!(c.skeleton().edges().iter().all(|e| e.source == e.target));
    assert_eq!(c.disks().len(), n);
    assert!(c.disks().iter().all(|d| d.index == 1));
    // each copy has one vertex, two edges and one disk
    assert_eq!(c.euler_characteristic(), 0);
    assert_eq!(c.complex().component_count(), n);

    let base = base_overlaps(&example()).unwrap();
    let lifted = lifted_overlaps(&c, &base);
    assert_eq!(lifted.specs().len(), n * base.specs().len());
    for s in lifted.specs() {
        assert_eq!(s.disk, s.other);
    }

    let model = CoverModel::new(&example(), Rational::new(1, 6), CollapseRule::Worrisome, false).unwrap();
    let cls = model.classify(&c);
    assert_eq!(cls.collapse_set.len(), n);
    let census = small_overlap_census(&c, &cls);
    assert!(census.counts.iter().all(|&k| k == 0));
    // each disk wraps its copy's single vertex five times; copies are disjoint
    let geo = worrisome_geometry(c.complex(), &cls.collapse_set);
    assert!(!geo.all_embedded() && geo.pairwise_disjoint());
}

#[test]
fn degree_one_cover_is_the_base() {
    let c = build_cover(&torus(), &SigmaTuple::identity(2, 1).unwrap(), false).unwrap();
    assert_eq!(c.complex().spanning_tree().unwrap(), Vec::<usize>::new());
    let out = pi1_presentation(c.complex(), None).unwrap();
    assert_eq!(out.presentation.relators(), torus().relators());
    assert_eq!(abelian_invariants(&torus()), AbelianInvariants { free_rank: 2, torsion: vec![] });
}

#[test]
fn spanning_trees_of_the_example() {
    let c = build_cover(&example(), &example_sigma(), false).unwrap();
    let cx = c.complex();
    assert_eq!(names(cx, &cx.spanning_tree().unwrap()), ["a_1", "a_3"]);
    let user = [cx.edge_index("a_1").unwrap(), cx.edge_index("a_2").unwrap()];
    assert!(cx.check_tree(&user).is_ok());
    let cycle = [cx.edge_index("a_1").unwrap(), cx.edge_index("b_1").unwrap()];
    assert!(matches!(cx.check_tree(&cycle), Err(ComplexError::InvalidTree { .. })));
}

#[test]
fn geometry_of_the_example_cover() {
    let c = build_cover(&example(), &example_sigma(), false).unwrap();
    let cx = c.complex();
    assert_eq!(cx.boundary_vertices(1).iter().map(|v| v + 1).collect::<Vec<_>>(), [3, 2, 1, 2, 3]);
    assert!(!is_embedded(cx, 0));
    assert!(!is_embedded(cx, 1));
    let geo = worrisome_geometry(cx, &[0, 1]);
    assert_eq!(geo.intersecting[0].0, 0);
    assert_eq!(geo.intersecting[0].1, 1);
    let out = sample_outcome(&example(), &example_sigma(), Rational::new(1, 6)).unwrap();
    assert!(!out.success);
    assert!(matches!(out.collapse_failure, Some(CollapseInvalid::NotEmbedded { .. })));
}

#[test]
fn example_classification_and_thresholds() {
    let c = build_cover(&example(), &example_sigma(), false).unwrap();
    let cls = classify_disks(&c, Rational::new(1, 6), CollapseRule::Worrisome).unwrap();
    assert_eq!(cls.good, [false, false]);
    assert_eq!(cls.worrisome_count, 2);
    // one worrisome disk fixes K
    let big = (cls.constants.large_threshold(1).to_integer() + 1) as usize;
    let manual = DiskClassification::from_indices(&[35, 36, 37, big], cls.constants, CollapseRule::Worrisome);
    assert_eq!(manual.good, [false, true, true, true]);
    assert_eq!(manual.worrisome_count, 1);
    assert_eq!(manual.size, [SizeClass::Small, SizeClass::Small, SizeClass::Medium, SizeClass::Large]);
}

#[test]
fn pieces_of_a_path_without_repeats() {
    // one disk around a triangle: every directed edge used once
    let edges = vec![Edge { source: 0, target: 1 }, Edge { source: 1, target: 2 }, Edge { source: 2, target: 0 }];
    let disk = Word::from_letters(vec![Letter::pos(0), Letter::pos(1), Letter::pos(2)]);
    let c = PolygonalComplex::new(3, edges, vec!["x".into(), "y".into(), "z".into()], vec![disk]).unwrap();
    assert!(pieces_direct(&c).specs().is_empty());
    assert!(check_small_cancellation(&c, Rational::new(1, 100)).satisfies);
}

#[test]
fn any_complex_passes_at_lambda_one() {
    for text in ["gens: a b\nrel: a b a^-1 b^-1", "gens: a b\nrel: a^-1 b^2 a b^-1"] {
        let p = Presentation::parse(text).unwrap();
        let rep = check_small_cancellation(&PolygonalComplex::presentation_complex(&p), Rational::from_integer(1));
        assert!(rep.worst_ratio < Rational::from_integer(1));
        assert!(rep.satisfies);
    }
}

#[test]
fn torus_cover_default_tree_and_abelianization() {
    let c = build_cover(&torus(), &example_sigma(), false).unwrap();
    let out = tietze_simplify(&pi1_presentation(c.complex(), None).unwrap());
    assert_eq!(out.abelian_invariants(), AbelianInvariants { free_rank: 4, torsion: vec![] });
    assert_eq!(out.presentation.generator_count(), 4);
    assert_eq!(out.presentation.relators()[0].len(), 8);
}

#[test]
fn disconnected_cover_has_no_pi1() {
    let c = build_cover(&example(), &SigmaTuple::identity(2, 2).unwrap(), false).unwrap();
    assert_eq!(pi1_presentation(c.complex(), None).unwrap_err(), ComplexError::Disconnected);
}
