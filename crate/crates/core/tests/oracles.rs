mod common;

use column_ldpc::code::{expand_qc, load_alist, random_qc_base, to_alist, QcBase, QcConstruction};
use column_ldpc::decoders::{DecodeConfig, DecodeResult, Variant};
use column_ldpc::kernel::{Capacity, UpdateMode};
use column_ldpc::{decode, FixedPointFormat, ParityCheckMatrix};
use common::*;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_qc(rows: usize, cols: usize, z: usize, seed: u64) -> ParityCheckMatrix {
    let opts = QcConstruction {
        allow_four_cycles: true,
        ..QcConstruction::default()
    };
    expand_qc(&random_qc_base(rows, cols, z, seed, opts).unwrap())
}

fn traced(mut config: DecodeConfig) -> DecodeConfig {
    config.record_trace = true;
    config
}

fn compare_trace(got: &DecodeResult, want: &OracleRun) -> Result<(), TestCaseError> {
    let trace = got.trace.as_ref().unwrap();
    prop_assert_eq!(trace.len(), want.messages.len());
    for (t, &(it, c, v, r, l)) in trace.iter().zip(&want.messages) {
        prop_assert_eq!((t.iteration, t.check, t.var), (it, c, v));
        prop_assert_eq!(t.rcv, r.to_msg(), "R at {:?}", t);
        prop_assert_eq!(t.lcv, l.to_msg(), "L at {:?}", t);
    }
    prop_assert_eq!(&got.bits, &want.bits);
    prop_assert_eq!(got.iterations_used, want.iterations);
    Ok(())
}

fn fmt_strategy() -> impl Strategy<Value = FixedPointFormat> {
    (3u32..=6, prop_oneof![Just(0.5), Just(0.25), Just(1.0)])
        .prop_map(|(bits, step)| FixedPointFormat::new(bits, step).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flooding_matches_dense_oracle(
        rows in 2usize..=3, extra in 1usize..=4, z in 4usize..=8, seed in any::<u64>(),
        snr in 0.0f64..5.0, fmt in fmt_strategy(), max_iter in 1usize..=8,
    ) {
        let h = small_qc(rows, rows + extra, z, seed);
        let llrs = frame(&h, snr, &fmt, seed, 0);
        let config = traced(DecodeConfig { max_iterations: max_iter, fmt, ..DecodeConfig::default() });
        let got = decode(Variant::Flooding, &h, &llrs, &config).unwrap();
        compare_trace(&got, &oracle_flooding(&dense(&h), &llrs, &fmt, max_iter))?;
    }

    #[test]
    fn column_original_matches_dense_oracle(
        rows in 2usize..=3, extra in 1usize..=4, z in 4usize..=8, seed in any::<u64>(),
        snr in 0.0f64..5.0, fmt in fmt_strategy(), max_iter in 1usize..=8, group_pick in 0usize..3,
    ) {
        let h = small_qc(rows, rows + extra, z, seed);
        let group = [z, 1, h.n()][group_pick];
        let h = h.regroup_layers(group).unwrap();
        let layers: Vec<Vec<usize>> = (0..h.num_layers()).map(|g| h.layer(g).to_vec()).collect();
        let llrs = frame(&h, snr, &fmt, seed, 1);
        let config = traced(DecodeConfig { max_iterations: max_iter, fmt, ..DecodeConfig::default() });
        let got = decode(Variant::ColumnOriginal, &h, &llrs, &config).unwrap();
        compare_trace(&got, &oracle_column(&dense(&h), &layers, &llrs, &fmt, max_iter))?;
    }

    #[test]
    fn census_matches_replay(
        seed in any::<u64>(), snr in 1.0f64..5.0, simplified in any::<bool>(), cap in 2usize..=4,
    ) {
        let h = small_qc(3, 8, 8, seed);
        let fmt = FixedPointFormat::default();
        let llrs = frame(&h, snr, &fmt, seed, 2);
        let mode = if simplified { UpdateMode::Simplified } else { UpdateMode::ThreeMin };
        let config = DecodeConfig {
            vector_capacity: Capacity::Entries(cap),
            mode,
            record_trace: true,
            collect_census: true,
            ..DecodeConfig::default()
        };
        let got = decode(Variant::ColumnIncremental, &h, &llrs, &config).unwrap();
        let replay = census_replay(&h, &llrs, got.trace.as_ref().unwrap(), cap, simplified)
            .map_err(TestCaseError::fail)?;
        prop_assert_eq!(counts_of(&got.counters), replay);
    }

    #[test]
    fn four_cycle_detection_matches_brute_force(
        rows in 1usize..=4, cols in 1usize..=6, z in 1usize..=6,
        raw in prop::collection::vec(-1i64..6, 24),
    ) {
        let shifts: Vec<i64> = raw[..rows * cols].iter().map(|&s| if s < 0 { -1 } else { s % z as i64 }).collect();
        let base = QcBase::new(rows, cols, z, shifts).unwrap();
        let rows_dense = dense_expand(&base);
        prop_assert_eq!(base.has_four_cycle(), dense_has_four_cycle(&rows_dense));
        prop_assert_eq!(dense(&expand_qc(&base)), rows_dense);
    }

    #[test]
    fn alist_round_trip(m in 1usize..=12, n in 1usize..=20, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<u8> = (0..m * n).map(|_| u8::from(rng.random_bool(0.3))).collect();
        let h = ParityCheckMatrix::from_dense(m, n, &data).unwrap();
        let text = to_alist(&h);
        let back = load_alist(&text).unwrap();
        prop_assert_eq!(dense(&back), dense(&h));
        prop_assert_eq!(to_alist(&back), text);
    }
}

#[test]
fn syndrome_on_4_32_code_matches_dense_product() {
    let h = ParityCheckMatrix::from_spec("random-qc:4,32,128,1").unwrap();
    let rows = dense(&h);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut agree_true = 0;
    for k in 0..1000 {
        // sparse flips and codewords exercise both outcomes
        let bits: Vec<u8> = if k % 4 == 0 {
            vec![0; h.n()]
        } else {
            (0..h.n()).map(|_| u8::from(rng.random_bool(0.001))).collect()
        };
        let expect = dense_syndrome_zero(&rows, &bits);
        assert_eq!(h.syndrome_ok(&bits).unwrap(), expect);
        agree_true += usize::from(expect);
    }
    assert!(agree_true >= 250);
}

#[test]
fn expanded_codes_have_no_four_cycles() {
    for seed in 0..4 {
        let base = random_qc_base(4, 16, 32, seed, QcConstruction::default()).unwrap();
        assert!(!dense_has_four_cycle(&dense_expand(&base)));
    }
    let all_zero = QcBase::new(2, 2, 4, vec![0; 4]).unwrap();
    assert!(dense_has_four_cycle(&dense_expand(&all_zero)));
}

#[test]
fn row_single_layer_equals_flooding() {
    let h = ParityCheckMatrix::from_spec("random-qc:4,16,32,3").unwrap();
    let one = h.regroup_row_layers(h.m()).unwrap();
    assert_eq!(one.num_row_layers(), 1);
    let config = DecodeConfig::default();
    let mut decoded = 0;
    for f in 0..100 {
        let llrs = frame(&h, 2.5, &config.fmt, 17, f);
        let a = decode(Variant::RowLayered, &one, &llrs, &config).unwrap();
        let b = decode(Variant::Flooding, &h, &llrs, &config).unwrap();
        assert_eq!(a.bits, b.bits, "frame {f}");
        assert_eq!(a.iterations_used, b.iterations_used, "frame {f}");
        assert_eq!(a.converged, b.converged);
        decoded += usize::from(a.iterations_used > 1);
    }
    assert!(decoded > 10);
}

#[test]
fn row_layered_messages_follow_standard_update() {
    let h = small_qc(3, 6, 7, 5);
    let fmt = FixedPointFormat::default();
    let one = h.regroup_row_layers(h.m()).unwrap();
    for f in 0..50 {
        let llrs = frame(&h, 1.5, &fmt, 3, f);
        let config = traced(DecodeConfig {
            max_iterations: 6,
            ..DecodeConfig::default()
        });
        let got = decode(Variant::RowLayered, &one, &llrs, &config).unwrap();
        let want = oracle_flooding(&dense(&h), &llrs, &fmt, 6);
        assert_eq!(got.bits, want.bits);
        assert_eq!(got.iterations_used, want.iterations);
    }
}

#[test]
fn exact_mode_with_column_keys() {
    // Two neighbours of one check in the same layer force column keys.
    let h = small_qc(2, 4, 5, 11).regroup_layers(10).unwrap();
    assert!(!h.one_neighbor_per_layer());
    let layers: Vec<Vec<usize>> = (0..h.num_layers()).map(|g| h.layer(g).to_vec()).collect();
    let fmt = FixedPointFormat::default();
    for f in 0..200 {
        let llrs = frame(&h, 2.0, &fmt, 4, f);
        let config = traced(DecodeConfig {
            max_iterations: 8,
            ..DecodeConfig::exact()
        });
        let inc = decode(Variant::ColumnIncremental, &h, &llrs, &config).unwrap();
        let want = oracle_column(&dense(&h), &layers, &llrs, &fmt, 8);
        compare_trace(&inc, &want).unwrap();
    }
}
