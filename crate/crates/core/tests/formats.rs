use divgon::bramble::Bramble;
use divgon::chipfire::{FiringScript, LevelChain};
use divgon::family;
use divgon::formats::*;
use divgon::harmonic::{EdgeImage, IndexedMorphism, Morphism, RefinementWitness};
use divgon::metric::{MetricGraph, PLFunction, Point, PointDivisor, VertexWitness};
use divgon::Divisor;
use num_bigint::BigInt;
use num_rational::BigRational as Q;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn graph_round_trip(seed in any::<u64>(), n in 1usize..=9, extra in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = family::random_connected(&mut rng, n, n - 1 + extra, false);
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn divisor_round_trip(ds in prop::collection::vec(prop::collection::vec(-1000i64..=1000, 1..8), 1..5)) {
        let ds: Vec<Divisor> = ds.into_iter().map(Divisor::new).collect();
        prop_assert_eq!(parse_divisors(&write_divisors(&ds)).unwrap(), ds.clone());
        prop_assert_eq!(parse_divisor(&write_divisor(&ds[0])).unwrap(), ds[0].clone());
    }

    #[test]
    fn script_and_chain_round_trip(x in prop::collection::vec(-50i64..=50, 1..8), sets in prop::collection::vec(prop::collection::vec(0usize..8, 1..4), 0..4)) {
        let s = FiringScript::new(x);
        prop_assert_eq!(parse_script(&write_script(&s)).unwrap(), s);
        let c = LevelChain { chain: sets };
        prop_assert_eq!(parse_chain(&write_chain(&c)).unwrap(), c);
    }

    #[test]
    fn bramble_round_trip(sets in prop::collection::vec(prop::collection::vec(0usize..10, 1..4), 1..5)) {
        let b = Bramble::new(sets);
        prop_assert_eq!(parse_bramble(&write_bramble(&b)).unwrap(), b);
    }

    #[test]
    fn metric_round_trip(seed in any::<u64>(), n in 2usize..=6, extra in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = family::random_connected(&mut rng, n, n - 1 + extra, false);
        let lengths: Vec<Q> = (0..g.edge_count()).map(|_| q(rng.gen_range(1..=40), rng.gen_range(1..=12))).collect();
        let gamma = MetricGraph::new(g.clone(), lengths.clone()).unwrap();
        prop_assert_eq!(parse_metric_graph(&write_metric_graph(&gamma)).unwrap(), gamma.clone());
        let d = PointDivisor::new(vec![
            (Point::Vertex(rng.gen_range(0..n)), rng.gen_range(-3..=3)),
            (Point::Edge { edge: 0, offset: &lengths[0] * q(1, 3) }, rng.gen_range(-3..=3)),
        ]);
        prop_assert_eq!(parse_point_divisor(&write_point_divisor(&d)).unwrap(), d.clone());
        let values: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
        let f = PLFunction::from_vertex_values(&gamma, &values).unwrap();
        prop_assert_eq!(parse_pl_function(&write_pl_function(&f)).unwrap(), f.clone());
        let w = WitnessFile { divisor: d.clone(), witnesses: vec![VertexWitness { vertex: 0, divisor: d, function: f }] };
        prop_assert_eq!(parse_witness_file(&write_witness_file(&w)).unwrap(), w);
    }

    #[test]
    fn text_parsers_never_panic(s in "\\PC{0,64}") {
        let _ = parse_graph(&s);
        let _ = parse_divisors(&s);
        let _ = parse_divisor(&s);
        let _ = parse_metric_graph(&s);
    }

    #[test]
    fn graph_like_text_never_panics(n in 0usize..6, lines in prop::collection::vec("[0-9 /+-]{0,8}", 0..6)) {
        let text = format!("{n} {}\n{}", lines.len(), lines.join("\n"));
        let _ = parse_graph(&text);
        let _ = parse_metric_graph(&text);
    }

    #[test]
    fn json_parsers_never_panic(s in "\\PC{0,64}") {
        let g = family::banana(2).unwrap();
        let h = family::path(2).unwrap();
        let _ = parse_script(&s);
        let _ = parse_chain(&s);
        let _ = parse_bramble(&s);
        let _ = parse_point_divisor(&s);
        let _ = parse_pl_function(&s);
        let _ = parse_witness_file(&s);
        let _ = parse_morphism(&g, &h, &s);
        let _ = parse_refinement(&s);
    }
}

#[test]
fn morphism_round_trip() {
    use EdgeImage::{Edge as E, Vertex as V};
    let k3 = family::complete(3).unwrap();
    let k2 = family::path(2).unwrap();
    let base = Morphism::new(k3.clone(), k2.clone(), vec![0, 0, 1], vec![V(0), E(0), E(0)]).unwrap();
    for indices in [vec![1, 1, 1], vec![1, 2, 3]] {
        let psi = IndexedMorphism { base: base.clone(), indices };
        assert_eq!(parse_morphism(&k3, &k2, &write_morphism(&psi)).unwrap(), psi);
    }
    let unit = IndexedMorphism::unit(base);
    assert!(!write_morphism(&unit).contains("indices"));
}

#[test]
fn refinement_round_trip() {
    let w = RefinementWitness { vertex_map: vec![0, 2], edge_paths: vec![vec![0, 1], vec![2, 3]] };
    assert_eq!(parse_refinement(&write_refinement(&w)).unwrap(), w);
}

#[test]
fn comments_and_blank_lines() {
    let g = parse_graph("# triangle\n3 3\n\n0 1 # first\n1 2\n2 0\n").unwrap();
    assert_eq!(g.edge_pairs(), vec![(0, 1), (1, 2), (2, 0)]);
    let gamma = parse_metric_graph("2 2\n0 1 1/2\n0 1 3\n").unwrap();
    assert_eq!(gamma.lengths(), &[q(1, 2), q(3, 1)]);
}

#[test]
fn rejects_malformed_input() {
    assert!(matches!(parse_graph("2 1\n0 0\n"), Err(FormatError::Invalid(_))));
    assert!(matches!(parse_graph("2 2\n0 1\n"), Err(FormatError::Syntax { .. })));
    assert!(matches!(parse_graph("3 1\n0 x\n"), Err(FormatError::Syntax { line: 2, .. })));
    assert!(parse_graph("").is_err());
    assert!(parse_metric_graph("2 1\n0 1 +1/2\n").is_err());
    assert!(parse_metric_graph("2 1\n0 1 1/-2\n").is_err());
    assert!(parse_metric_graph("2 1\n0 1 0\n").is_err());
    assert!(parse_metric_graph("2 1\n0 1 1/0\n").is_err());
    assert!(parse_script("{\"script\": [1, 2], \"extra\": 1}").is_err());
    assert!(parse_graph(&format!("{} 0\n", MAX_COUNT + 1)).is_err());
}
