use mmdscan::detector::ThresholdRule;
use mmdscan::experiments::{
    plant_instance, run_plan, sample, DistributionSpec, ExperimentPlan, IMinRule, KernelSpec,
};
use mmdscan::{Interval, KernelKind};

fn plan(p: DistributionSpec, q: DistributionSpec) -> ExperimentPlan {
    ExperimentPlan {
        name: None,
        p,
        q,
        kernel: KernelSpec {
            kind: KernelKind::Gaussian,
            sigma: 1.0,
        },
        n_values: vec![40],
        i_min: IMinRule::Values {
            values: vec![4, 10, 20],
        },
        thresholds: vec![ThresholdRule::Fixed { t: 0.25 }],
        trials: 200,
        seed: Some(17),
        eta: 0.5,
        algorithm: mmdscan::Algorithm::Exhaustive,
        multiscale: Default::default(),
        placement: Default::default(),
        summary_mode: None,
    }
}

#[test]
fn sample_moments() {
    let check = |d: DistributionSpec, mean: f64, var: f64, tm: f64, tv: f64| {
        let xs = sample(&d, 100_000, 5).unwrap();
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0);
        assert!((m - mean).abs() < tm, "mean {m}");
        assert!((v - var).abs() < tv, "variance {v}");
    };
    check(DistributionSpec::gaussian(0.0, 0.5), 0.0, 0.5, 0.01, 0.02);
    check(DistributionSpec::symmetric_gaussian_pair(2.0, 0.5), 0.0, 4.5, 0.03, 0.1);
    check(DistributionSpec::symmetric_laplace_pair(3.0, 0.5), 0.0, 9.5, 0.03, 0.1);
}

#[test]
fn planted_block_only_changes_the_anomaly() {
    let p = DistributionSpec::gaussian(0.0, 0.5);
    let q = DistributionSpec::symmetric_gaussian_pair(2.0, 0.5);
    let anomaly = Interval::new(100, 50);
    let null = plant_instance(&p, &q, 500, None, 3).unwrap();
    let planted = plant_instance(&p, &q, 500, Some(anomaly), 3).unwrap();
    assert_eq!(null.reference(), planted.reference());
    let differing: Vec<usize> = (0..500)
        .filter(|&i| null.observed()[i] != planted.observed()[i])
        .collect();
    assert_eq!(differing, (100..150).collect::<Vec<_>>());
    assert_eq!(planted, plant_instance(&p, &q, 500, Some(anomaly), 3).unwrap());

    let all = plant_instance(&p, &q, 20, Some(Interval::new(0, 20)), 1).unwrap();
    assert!(all.observed().iter().all(|v| v.abs() > 0.0));
    assert!(plant_instance(&p, &q, 20, Some(Interval::new(15, 10)), 1).is_err());
}

#[test]
fn degenerate_plan_sits_at_one_half() {
    let p = DistributionSpec::gaussian(0.0, 0.5);
    let table = run_plan(&plan(p.clone(), p)).unwrap();
    assert_eq!(table.rows.len(), 3);
    for row in &table.rows {
        // With q = p, P(H0 | H1) = 1 - P(H1 | H0) in expectation, so P_e = 1/2.
        let (a, b) = (row.p_h0_error, 1.0 - row.p_h1_error);
        let se = ((a * (1.0 - a) + b * (1.0 - b)) / row.trials as f64).sqrt();
        assert!((row.p_e - 0.5).abs() <= 0.5 * (4.0 * se).max(0.02), "{row:?}");
    }
}

#[test]
fn tables_are_reproducible_and_thread_independent() {
    let plan = plan(
        DistributionSpec::gaussian(0.0, 0.5),
        DistributionSpec::symmetric_gaussian_pair(2.0, 0.5),
    );
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| run_plan(&plan)).unwrap();
    let b = many.install(|| run_plan(&plan)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
    for row in &a.rows {
        assert!((row.p_e - 0.5 * (row.p_h0_error + row.p_h1_error)).abs() <= 1e-12);
        assert!((0.0..=1.0).contains(&row.p_e));
    }
    let mut other = plan.clone();
    other.seed = Some(18);
    assert_ne!(run_plan(&other).unwrap().rows, a.rows);
}

#[test]
fn missing_seed_is_drawn_and_reported() {
    let mut p = plan(
        DistributionSpec::gaussian(0.0, 0.5),
        DistributionSpec::symmetric_gaussian_pair(2.0, 0.5),
    );
    p.trials = 5;
    p.seed = None;
    let table = run_plan(&p).unwrap();
    p.seed = Some(table.seed);
    assert_eq!(run_plan(&p).unwrap(), table);
}

#[test]
fn shipped_plans_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/plans");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let plan = ExperimentPlan::from_path(&path).unwrap();
            assert!(!plan.configurations().unwrap().is_empty());
            count += 1;
        }
    }
    assert_eq!(count, 6);
}
