use fastdec::decoder::{draw_trial, fast_decode, ml_brute, SimConfig};
use fastdec::exec::Execution;
use fastdec::mograph::search::{branch_and_bound, exhaustive, random_graph};
use fastdec::mograph::{conflict_graph, optimal_partition, GroupPartition};
use fastdec::stbc::{alamouti_code, silver_code, Constellation};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fast_decoder_is_ml(seed in any::<u64>(), n0 in 0.0f64..2.0, q in prop::sample::select(vec![2usize, 4])) {
        let basis = silver_code();
        let partition = optimal_partition(&conflict_graph(&basis, 1e-9)).partition.unwrap();
        let s = Constellation::pam(q).unwrap();
        let config = SimConfig::new(1, n0, seed, s.clone()).unwrap();
        let (_, h, y) = draw_trial(&basis, &config, 0).unwrap();
        let f = fast_decode(&y, &h, &basis, &partition, &s).unwrap();
        let b = ml_brute(&y, &h, &basis, &s).unwrap();
        prop_assert_eq!(&f.symbols, &b.symbols);
        prop_assert!((f.metric - b.metric).abs() <= 1e-9 * (1.0 + b.metric));
    }

    #[test]
    fn any_valid_alamouti_partition_is_ml(seed in any::<u64>(), split in 1usize..4) {
        let basis = alamouti_code();
        let groups = vec![(0..split).collect::<Vec<_>>(), (split..4).collect()];
        let partition = GroupPartition::new(groups, vec![]).unwrap();
        let s = Constellation::pam(4).unwrap();
        let config = SimConfig::new(1, 0.5, seed, s.clone()).unwrap();
        let (_, h, y) = draw_trial(&basis, &config, 0).unwrap();
        let f = fast_decode(&y, &h, &basis, &partition, &s).unwrap();
        let b = ml_brute(&y, &h, &basis, &s).unwrap();
        prop_assert_eq!(f.symbols, b.symbols);
    }

    #[test]
    fn search_matches_enumeration(seed in any::<u64>(), index in 0u64..1000) {
        let graph = random_graph(seed, index, 12);
        prop_assert_eq!(branch_and_bound(&graph, Execution::Sequential), exhaustive(&graph));
    }
}
