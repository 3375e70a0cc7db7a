use branchcover_core::overlap::{pieces_filtered, small_overlap_census};
use branchcover_core::word::{cyclic_reduce, free_reduce};
use branchcover_core::*;
use proptest::prelude::*;
use rand::Rng;

const PRESENTATIONS: &[&str] = &[
    "gens: a b\nrel: a^-1 b^2 a b^-1",
    "gens: a b\nrel: a b a^-1 b^-1",
    "gens: a b c\nrel: a b c a^-1 b^-1 c^-1",
    "gens: a b\nrel: a b a^-1 b^-1\nrel: a^2 b^3",
    "gens: a b\nrel: a b^2 a^-1 b^-3\nrel: a^3 b a b^-1",
];

fn pres(i: usize) -> Presentation {
    Presentation::parse(PRESENTATIONS[i]).unwrap()
}

fn letter() -> impl Strategy<Value = Letter> {
    (0u32..3, any::<bool>()).prop_map(|(i, inv)| Letter::new(i, inv))
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..max).prop_map(Word::from_letters)
}

fn sigma(t: usize, n: usize) -> impl Strategy<Value = SigmaTuple> {
    any::<u64>().prop_map(move |s| SigmaTuple::sample_uniform(t, n, &mut sample_stream(s, n as u64, 0)).unwrap())
}

fn cycle_type(p: &Permutation) -> Vec<usize> {
    let mut l = p.cycle_lengths();
    l.sort_unstable();
    l
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn word_map_is_path_composition(r in word(12), s in word(12), n in 1usize..9, seed in any::<u64>()) {
        let sg = SigmaTuple::sample_uniform(3, n, &mut sample_stream(seed, n as u64, 1)).unwrap();
        let joined = word_map(&r.concat(&s), &sg).unwrap();
        let composed = word_map(&r, &sg).unwrap().compose(&word_map(&s, &sg).unwrap()).unwrap();
        prop_assert_eq!(joined, composed);
        prop_assert_eq!(word_map(&free_reduce(&r), &sg).unwrap(), word_map(&r, &sg).unwrap());
    }

    #[test]
    fn conjugation_keeps_cycle_type(r in word(10), u in word(6), sg in sigma(3, 7)) {
        let conj = u.concat(&r).concat(&u.inverse());
        prop_assert_eq!(cycle_type(&word_map(&conj, &sg).unwrap()), cycle_type(&word_map(&r, &sg).unwrap()));
    }

    #[test]
    fn cycles_partition_and_recompose(sg in sigma(1, 12)) {
        let p = sg.get(0);
        let cycles = p.cycles();
        prop_assert_eq!(cycles.iter().map(Vec::len).sum::<usize>(), 12);
        prop_assert_eq!(&Permutation::from_cycles(12, &cycles).unwrap(), p);
        prop_assert_eq!(&Permutation::parse(&p.to_string(), 12).unwrap(), p);
    }

    #[test]
    fn orbits_ignore_inversion_and_order(sg in sigma(3, 9)) {
        let perms = sg.perms();
        let flipped = SigmaTuple::new(vec![perms[2].inverse(), perms[0].clone(), perms[1].inverse()]).unwrap();
        prop_assert_eq!(sg.orbits(), flipped.orbits());
    }

    #[test]
    fn cyclic_reduction_is_idempotent(r in word(16)) {
        let c = cyclic_reduce(&r);
        prop_assert!(c.is_cyclically_reduced());
        prop_assert_eq!(cyclic_reduce(&c), c);
    }
}

/// Cover invariants on 10³ random covers across the fixture presentations.
#[test]
fn cover_invariants() {
    for case in 0..1000u64 {
        let p = pres(case as usize % PRESENTATIONS.len());
        let n = 1 + (case as usize % 9);
        let sg = SigmaTuple::sample_uniform(p.generator_count(), n, &mut sample_stream(case, n as u64, 0)).unwrap();
        let c = build_cover(&p, &sg, false).unwrap();
        assert_eq!(c.duplicate_loops(), 0);
        let mut per_relator = vec![(0usize, 0usize); p.relator_count()];
        for d in c.disks() {
            per_relator[d.relator].0 += d.index;
            per_relator[d.relator].1 += 1;
            let r = &c.presentation().relators()[d.relator];
            assert_eq!(d.boundary.len(), d.index * r.len());
            let projected: Word = d
                .boundary
                .iter()
                .map(|s| Letter::new((s.index() / n) as u32, s.is_inverse()))
                .collect();
            assert_eq!(projected, r.pow(d.index));
        }
        let base_chi = 1 - p.generator_count() as i64 + p.relator_count() as i64;
        let lost: i64 = per_relator.iter().map(|&(_, c)| n as i64 - c as i64).sum();
        assert!(per_relator.iter().all(|&(s, _)| s == n));
        assert_eq!(c.euler_characteristic(), n as i64 * base_chi - lost);
        assert_eq!(c.validity().connected, c.complex().is_connected());
        assert!(c.validity().is_branched_cover);
    }
}

/// Lifted overlaps agree with pieces computed directly on the cover, and the
/// ratio identities hold exactly.
#[test]
fn lifted_overlaps_match_direct_pieces() {
    for case in 0..1000u64 {
        let p = pres(case as usize % PRESENTATIONS.len());
        let n = 1 + (case as usize % 6);
        let sg = SigmaTuple::sample_uniform(p.generator_count(), n, &mut sample_stream(case, n as u64, 9)).unwrap();
        let c = build_cover(&p, &sg, false).unwrap();
        let base = base_overlaps(c.presentation()).unwrap();
        let lifted = lifted_overlaps(&c, &base);
        assert_eq!(lifted, pieces_direct(c.complex()), "case {case}");
        assert!(lifted.global_ratio() <= base.global_ratio());
        for (d, disk) in c.disks().iter().enumerate() {
            let k = Rational::from_integer(disk.index as i128);
            assert_eq!(lifted.ratio(d), base.ratio(disk.relator) / k);
        }
        let m = c.presentation().relators().iter().map(|r| r.len()).max().unwrap();
        assert!(base.specs().iter().all(|s| s.length < m * m + m && !s.saturated));
    }
}

#[test]
fn base_tables_are_symmetric() {
    for i in 0..PRESENTATIONS.len() {
        let t = base_overlaps(&pres(i)).unwrap();
        for s in t.specs() {
            let mirror = match s.orientation {
                Orientation::Same => (s.other, s.disk, s.other_start, s.start),
                Orientation::Opposite => {
                    let l = t.boundary_lengths()[s.other];
                    let l0 = t.boundary_lengths()[s.disk];
                    (s.other, s.disk, (s.other_start + l - (s.length - 1) % l) % l, (s.start + s.length - 1) % l0)
                }
            };
            assert!(
                t.specs().iter().any(|o| (o.disk, o.other, o.start, o.other_start) == mirror
                    && o.orientation == s.orientation
                    && o.length == s.length),
                "{s:?} has no mirror"
            );
        }
    }
}

#[test]
fn small_cancellation_follows_from_overlap_ratio() {
    for i in 0..PRESENTATIONS.len() {
        let p = pres(i);
        let o = base_overlaps(&p).unwrap().global_ratio();
        for lambda in [Rational::new(1, 6), Rational::new(1, 3), Rational::new(9, 10)] {
            let rep = check_small_cancellation(&PolygonalComplex::presentation_complex(&p), lambda);
            if o < lambda {
                assert!(rep.satisfies);
            }
            assert_eq!(rep.satisfies, rep.worst_ratio < lambda);
        }
    }
}

/// Collapse invariants: χ is preserved, exactly the collapsed boundaries'
/// edges disappear, disks away from the collapse keep their piece ratios,
/// and every piece of `Y` splits into at most `census + 1` runs of `X`.
#[test]
fn collapse_invariants() {
    let lambda = Rational::new(9, 10);
    let mut valid_with_collapse = 0;
    for case in 0..1000u64 {
        let p = pres(case as usize % 2);
        let n = 20 + (case as usize % 40);
        let model = CoverModel::new(&p, lambda, CollapseRule::Worrisome, false).unwrap();
        let sg = SigmaTuple::sample_uniform(2, n, &mut sample_stream(case, n as u64, 3)).unwrap();
        let c = model.build(&sg).unwrap();
        let cls = model.classify(&c);
        let Ok(q) = collapse_worrisome(&c, &cls) else { continue };
        let x = c.complex();
        let y = &q.complex;
        assert_eq!(y.euler_characteristic(), x.euler_characteristic());
        let removed: usize = cls.collapse_set.iter().map(|&d| x.disks()[d].len()).sum();
        assert_eq!(x.edges().len() - y.edges().len(), removed);
        assert_eq!(x.vertex_count() - y.vertex_count(), removed - cls.collapse_set.len());
        if cls.collapse_set.is_empty() {
            continue;
        }
        valid_with_collapse += 1;

        let mut near = vec![false; x.vertex_count()];
        for &d in &cls.collapse_set {
            for v in x.boundary_vertices(d) {
                near[v] = true;
            }
        }
        let px = pieces_direct(x).ratios();
        let py = pieces_direct(y);
        let ry = py.ratios();
        for (yd, &xd) in q.disk_origin.iter().enumerate() {
            if x.boundary_vertices(xd).iter().all(|&v| !near[v]) {
                assert_eq!(ry[yd], px[xd], "case {case}: untouched disk {xd}");
            }
        }

        let census = small_overlap_census(&c, &cls);
        for s in py.specs().iter().filter(|s| !s.saturated) {
            let origin = &q.step_origin[s.disk];
            let lx = x.disks()[q.disk_origin[s.disk]].len();
            let ly = origin.len();
            let runs = 1 + (1..s.length)
                .filter(|&j| {
                    let a = origin[(s.start + j - 1) % ly];
                    let b = origin[(s.start + j) % ly];
                    (a + 1) % lx != b
                })
                .count();
            assert!(runs <= census.counts[q.disk_origin[s.disk]] + 1, "case {case}: {s:?}");
        }
    }
    assert!(valid_with_collapse > 50, "only {valid_with_collapse} nonvacuous cases");
}

#[test]
fn census_counts_mixed_pieces_only() {
    let p = pres(0);
    let model = CoverModel::new(&p, Rational::new(9, 10), CollapseRule::Worrisome, false).unwrap();
    let sg = SigmaTuple::parse("(123);(12)", 3).unwrap();
    let c = model.build(&sg).unwrap();
    let cls = model.classify(&c);
    let census = small_overlap_census(&c, &cls);
    let mixed = pieces_filtered(c.complex(), &|d, e| !cls.is_collapsed(d) && cls.is_collapsed(e));
    assert_eq!(census.counts.iter().sum::<usize>(), mixed.specs().len());
    let none = DiskClassification::from_indices(&[40, 50], *model.constants(), CollapseRule::Worrisome);
    assert!(none.collapse_set.is_empty());
}

#[test]
fn tietze_preserves_abelianization() {
    let mut rng = sample_stream(5, 0, 0);
    for case in 0..1000u64 {
        let p = pres(case as usize % PRESENTATIONS.len());
        let n = 1 + rng.random_range(0..6usize);
        let sg = SigmaTuple::sample_uniform(p.generator_count(), n, &mut rng).unwrap();
        let c = build_cover(&p, &sg, false).unwrap();
        if !c.complex().is_connected() {
            continue;
        }
        let raw = pi1_presentation(c.complex(), None).unwrap();
        assert_eq!(raw.presentation.generator_count(), p.generator_count() * n - (n - 1));
        assert_eq!(raw.presentation.relator_count(), c.disks().len());
        let simple = tietze_simplify(&raw);
        assert_eq!(raw.abelian_invariants(), simple.abelian_invariants(), "case {case}");
        assert_eq!(tietze_simplify(&raw), simple);
    }
}
