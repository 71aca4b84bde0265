use proptest::prelude::*;

use tsmeasures::elastic::{dtw, dtw_band, dtw_cost_matrix, edr, twed};
use tsmeasures::harness::{
    balance_and_fold, balance_stream, run_plan, EvaluationPlan, PlanDataset,
};
use tsmeasures::lockstep::{dft, fc_distance, lp_distance, squared_euclidean};
use tsmeasures::nn::{classify_1nn, loo_error, DistanceTable};
use tsmeasures::stats::{holm_bonferroni, rank_measures, wilcoxon_signed_rank};
use tsmeasures::{build_grid, synthetic, GridOptions, Measure, RunReport, TimeSeries};

fn series(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 1..=max)
}

fn pair(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max).prop_flat_map(|n| {
        (
            prop::collection::vec(-3.0f64..3.0, n),
            prop::collection::vec(-3.0f64..3.0, n),
        )
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dtw_shrinks_as_window_grows(x in series(20), y in series(20)) {
        let mut last = f64::INFINITY;
        for w in 0..=x.len().max(y.len()) {
            let d = dtw(&x, &y, w);
            prop_assert!(d <= last, "w={} {} > {}", w, d, last);
            last = d;
        }
    }

    #[test]
    fn dtw_band_always_admits_the_diagonal_cell(m in 1usize..40, n in 1usize..40, w in 0usize..6) {
        for (i, &(lo, hi)) in dtw_band(m, n, w).iter().enumerate() {
            let r = i + 1;
            let center = ((2 * r * n + m) / (2 * m)).clamp(1, n);
            prop_assert!(lo <= center && center <= hi);
        }
    }

    #[test]
    fn dtw_symmetric_on_equal_lengths((x, y) in pair(20), w in 0usize..6) {
        prop_assert_eq!(dtw(&x, &y, w), dtw(&y, &x, w));
    }

    #[test]
    fn dtw_rolling_rows_match_full_matrix(x in series(16), y in series(16), w in 0usize..8) {
        let d = dtw_cost_matrix(&x, &y, w);
        prop_assert_eq!(d[x.len() * (y.len() + 1) + y.len()], dtw(&x, &y, w));
    }

    #[test]
    fn euclidean_is_zero_window_dtw((x, y) in pair(30)) {
        let lp = lp_distance(&x, &y, 2).unwrap();
        prop_assert!(close(lp, dtw(&x, &y, 0).sqrt(), 1e-9));
        prop_assert!(close(lp * lp, squared_euclidean(&x, &y), 1e-9));
    }

    #[test]
    fn edr_is_integer_symmetric_and_shrinks_with_epsilon(x in series(20), y in series(20)) {
        let mut last = f64::INFINITY;
        for k in 0..=25 {
            let eps = k as f64 * 0.1;
            let d = edr(&x, &y, eps);
            prop_assert_eq!(d.fract(), 0.0);
            prop_assert_eq!(d, edr(&y, &x, eps));
            prop_assert!(d <= last);
            last = d;
        }
    }

    #[test]
    fn twed_nonnegative_and_symmetric(x in series(15), y in series(15), nu in 1e-5f64..2.0, lambda in 0.0f64..2.0) {
        let d = twed(&x, &y, nu, lambda).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!(close(d, twed(&y, &x, nu, lambda).unwrap(), 1e-12));
    }

    #[test]
    fn twed_triangle(x in series(10), y in series(10), z in series(10), nu in 1e-4f64..1.0, lambda in 0.0f64..1.0) {
        let xy = twed(&x, &y, nu, lambda).unwrap();
        let yz = twed(&y, &z, nu, lambda).unwrap();
        let xz = twed(&x, &z, nu, lambda).unwrap();
        prop_assert!(xz <= xy + yz + 1e-9 * (xy + yz).max(1.0));
    }

    #[test]
    fn lockstep_symmetric_and_nonnegative((x, y) in pair(30)) {
        let d = lp_distance(&x, &y, 2).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert_eq!(d, lp_distance(&y, &x, 2).unwrap());
        if x.len() >= 4 {
            let (fx, fy) = (dft(&x), dft(&y));
            let f = fc_distance(&fx, &fy, 1).unwrap();
            prop_assert!(f >= 0.0);
            prop_assert!(close(f, fc_distance(&fy, &fx, 1).unwrap(), 1e-12));
        }
    }

    #[test]
    fn fc_grows_with_theta((x, y) in pair(40)) {
        prop_assume!(x.len() >= 4);
        let (fx, fy) = (dft(&x), dft(&y));
        let mut last = 0.0;
        for theta in 1..=fx.max_theta() {
            let d = fc_distance(&fx, &fy, theta).unwrap();
            prop_assert!(d >= last);
            last = d;
        }
    }

    #[test]
    fn znormalize_idempotent(x in prop::collection::vec(-50.0f64..50.0, 2..60)) {
        let once = TimeSeries::new(x).unwrap().znormalize();
        prop_assume!(!once.is_constant());
        let twice = once.znormalize();
        for (a, b) in once.values().iter().zip(twice.values()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn resample_keeps_endpoints_and_ramps(len in 2usize..60, target in 2usize..120, a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let ramp: Vec<f64> = (0..len).map(|i| a + b * i as f64).collect();
        let s = TimeSeries::new(ramp.clone()).unwrap();
        let there = s.resample(target).unwrap();
        let back = there.resample(len).unwrap();
        prop_assert_eq!(back.values()[0], ramp[0]);
        prop_assert_eq!(back.values()[len - 1], ramp[len - 1]);
        for (got, want) in back.values().iter().zip(&ramp) {
            prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn wilcoxon_swap_invariant(d in prop::collection::vec(-5i32..=5, 5..30)) {
        let a: Vec<f64> = d.iter().map(|&v| f64::from(v) * 0.1).collect();
        let b = vec![0.0; a.len()];
        let ab = wilcoxon_signed_rank(&a, &b).unwrap().p_value();
        let ba = wilcoxon_signed_rank(&b, &a).unwrap().p_value();
        prop_assert!((ab - ba).abs() <= 1e-12);
    }

    #[test]
    fn wilcoxon_invariant_under_sign_preserving_monotone_map(d in prop::collection::vec(-5i32..=5, 5..30)) {
        let a: Vec<f64> = d.iter().map(|&v| f64::from(v)).collect();
        let zero = vec![0.0; a.len()];
        // odd, strictly increasing: keeps signs and the order of magnitudes
        let warped: Vec<f64> = a.iter().map(|v| v.signum() * v.abs().powf(1.7) * 3.0).collect();
        let p = wilcoxon_signed_rank(&a, &zero).unwrap().p_value();
        let q = wilcoxon_signed_rank(&warped, &zero).unwrap().p_value();
        prop_assert!((p - q).abs() <= 1e-12);
    }

    #[test]
    fn holm_lowering_a_p_never_unrejects(ps in prop::collection::vec(0.0f64..0.2, 1..10), k in 0usize..10, factor in 0.0f64..1.0) {
        let k = k % ps.len();
        let before = holm_bonferroni(&ps, 0.05).unwrap();
        let mut lowered = ps.clone();
        lowered[k] *= factor;
        let after = holm_bonferroni(&lowered, 0.05).unwrap();
        for (b, a) in before.iter().zip(&after) {
            prop_assert!(!b || *a);
        }
    }

    #[test]
    fn holm_rejections_are_a_sorted_prefix(ps in prop::collection::vec(0.0f64..0.1, 1..10)) {
        let flags = holm_bonferroni(&ps, 0.05).unwrap();
        let mut order: Vec<usize> = (0..ps.len()).collect();
        order.sort_by(|&a, &b| ps[a].total_cmp(&ps[b]));
        let sorted: Vec<bool> = order.iter().map(|&i| flags[i]).collect();
        let first_keep = sorted.iter().position(|f| !f).unwrap_or(sorted.len());
        prop_assert!(sorted[first_keep..].iter().all(|f| !f));
    }

    #[test]
    fn ranks_follow_measure_permutation(errs in prop::collection::vec(prop::collection::vec(0u8..5, 4), 1..6), rot in 0usize..4) {
        let measures = [Measure::Euclidean, Measure::Dtw, Measure::Edr, Measure::Twed];
        let datasets: Vec<String> = (0..errs.len()).map(|d| format!("d{d}")).collect();
        let lookup = |d: &str, m: Measure| {
            let di: usize = d[1..].parse().unwrap();
            let mi = measures.iter().position(|&x| x == m).unwrap();
            Some(f64::from(errs[di][mi]) / 10.0)
        };
        let base = rank_measures(&datasets, &measures, lookup).unwrap();
        let mut permuted = measures;
        permuted.rotate_left(rot);
        let other = rank_measures(&datasets, &permuted, lookup).unwrap();
        for (i, m) in permuted.iter().enumerate() {
            let j = measures.iter().position(|x| x == m).unwrap();
            prop_assert_eq!(other.average[i], base.average[j]);
        }
    }

    #[test]
    fn nn_error_ignores_reference_order_with_distinct_distances(
        seed_rows in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 6), 4),
        labels in prop::collection::vec(0usize..3, 6),
        shift in 1usize..6,
    ) {
        let qlabels = vec![0usize, 1, 2, 1];
        let table = DistanceTable::from_fn(4, 6, |r, c| seed_rows[r][c] + 1e-9 * (r * 6 + c) as f64);
        let base = classify_1nn(&qlabels, &labels, &table).unwrap();
        let perm: Vec<usize> = (0..6).map(|c| (c + shift) % 6).collect();
        let permuted = DistanceTable::from_fn(4, 6, |r, c| table.get(r, perm[c]));
        let plabels: Vec<usize> = perm.iter().map(|&c| labels[c]).collect();
        prop_assert_eq!(base, classify_1nn(&qlabels, &plabels, &permuted).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn folds_cover_the_balanced_set(per_class in prop::collection::vec(3usize..12, 2..5), rep in 0usize..20, seed in any::<u64>()) {
        let mut values = Vec::new();
        let mut labels = Vec::new();
        for (c, &n) in per_class.iter().enumerate() {
            for k in 0..n {
                values.push(TimeSeries::new(vec![c as f64, k as f64, 1.0]).unwrap());
                labels.push(c);
            }
        }
        let names = (0..per_class.len()).map(|c| c.to_string()).collect();
        let ds = tsmeasures::LabeledDataset::new("p", values, labels, names).unwrap();
        let a = balance_and_fold(&ds, 3, rep, &mut balance_stream(seed, 0, rep)).unwrap();
        let smallest = *per_class.iter().min().unwrap();
        prop_assert_eq!(a.balanced_len(), smallest * per_class.len());
        let total: usize = (0..3).map(|f| a.test_indices(f).len()).sum();
        prop_assert_eq!(total, a.balanced_len());
        for f in 0..3 {
            let test = a.test_indices(f);
            prop_assert!(a.train_indices(f).iter().all(|i| !test.contains(i)));
        }
    }

    #[test]
    fn loo_masks_the_diagonal(labels in prop::collection::vec(0usize..2, 3..10)) {
        let n = labels.len();
        let with_zero = DistanceTable::from_fn(n, n, |r, c| if r == c { 0.0 } else { 1.0 + (r + c) as f64 });
        let with_big = DistanceTable::from_fn(n, n, |r, c| if r == c { 1e9 } else { 1.0 + (r + c) as f64 });
        prop_assert_eq!(loo_error(&labels, &with_zero).unwrap(), loo_error(&labels, &with_big).unwrap());
    }
}

fn small_plan(workers: usize) -> EvaluationPlan {
    let ds = synthetic::cbf_dataset("cbf", 6, 32, 3).unwrap();
    let mut plan = EvaluationPlan::new(
        vec![PlanDataset::Pooled(ds)],
        vec![
            Measure::Random,
            Measure::Euclidean,
            Measure::Dtw,
            Measure::Twed,
        ],
        9,
    );
    plan.repetitions = 3;
    plan.workers = workers;
    plan
}

#[test]
fn chosen_parameters_lie_in_the_grid() {
    let report = run_plan(&small_plan(1)).unwrap();
    for cell in &report.cells {
        let grid = build_grid(cell.measure, 32, GridOptions::default()).unwrap();
        assert!(
            grid.contains(&cell.point),
            "{} {}",
            cell.measure,
            cell.point
        );
    }
}

#[test]
fn report_json_round_trip() {
    let report = run_plan(&small_plan(1)).unwrap();
    let text = report.to_json().unwrap();
    let back = RunReport::from_json(&text).unwrap();
    assert_eq!(back.to_json().unwrap(), text);
}

#[test]
fn same_seed_same_report_for_any_worker_count() {
    let a = run_plan(&small_plan(1)).unwrap().to_json().unwrap();
    let b = run_plan(&small_plan(3)).unwrap().to_json().unwrap();
    assert_eq!(a, b);
}
