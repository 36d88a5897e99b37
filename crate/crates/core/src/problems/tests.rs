use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::io::{format_instance, parse_instance};
use super::*;
use crate::geometry::ReferenceFunction;

fn one_by_one(family: Family) -> ProblemInstance {
    ProblemInstance::with_scalar_blocks(family, Matrix::from_rows(&[vec![1.0]]).unwrap(), vec![1.0]).unwrap()
}

/// Central difference of the plain objective, no shared code with the gradient.
fn fd_gradient(p: &ProblemInstance, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|j| {
            let mut up = x.to_vec();
            let mut down = x.to_vec();
            up[j] += h;
            down[j] -= h;
            (p.objective(&up).unwrap() - p.objective(&down).unwrap()) / (2.0 * h)
        })
        .collect()
}

fn random_positive(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|_| 10f64.powf(rng.random_range(lo.log10()..hi.log10())))
        .collect()
}

#[test]
fn objective_examples() {
    let p = one_by_one(Family::PoissonInverse);
    assert_eq!(p.objective(&[1.0]).unwrap(), 0.0);
    let v = p.objective(&[2.0]).unwrap();
    assert!((v - (1.0 - 2f64.ln())).abs() < 1e-15);
    assert!((v - 0.306852819440055).abs() < 1e-12);

    let r = one_by_one(Family::RelativeEntropyRegression);
    let v = r.objective(&[2.0]).unwrap();
    assert!((v - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
    assert!((v - 0.386294361119890).abs() < 1e-12);
}

#[test]
fn objective_matches_generic_kl() {
    let p = synth_instance(Family::PoissonInverse, 4, 3, 11).unwrap();
    let q = synth_instance(Family::RelativeEntropyRegression, 4, 3, 11).unwrap();
    let x = [0.3, 1.7, 0.9];
    let ax = p.matrix().mul_vec(&x);
    let kl = |u: &[f64], v: &[f64]| -> f64 {
        u.iter().zip(v).map(|(&a, &b)| a * (a / b).ln() - a + b).sum()
    };
    assert!((p.objective(&x).unwrap() - kl(p.b(), &ax)).abs() < 1e-12);
    assert!((q.objective(&x).unwrap() - kl(&ax, q.b())).abs() < 1e-12);
}

#[test]
fn zero_counts_and_domain_errors() {
    let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.5, 2.0]]).unwrap();
    let p = ProblemInstance::with_scalar_blocks(Family::PoissonInverse, a.clone(), vec![0.0, 1.0]).unwrap();
    // b_0 = 0 contributes <a_0, x> = 2.
    let expected = 2.0 + (1.0 * (1.0f64 / 5.0).ln() - 1.0 + 5.0);
    assert!((p.objective(&[2.0, 2.0]).unwrap() - expected).abs() < 1e-12);

    let r = ProblemInstance::with_scalar_blocks(Family::RelativeEntropyRegression, a, vec![0.0, 1.0]).unwrap();
    assert!(matches!(r.objective(&[1.0, 1.0]), Err(Error::Domain { index: 0, .. })));
    assert!(matches!(p.objective(&[-1.0, 1.0]), Err(Error::Domain { .. })));

    let q = synth_instance(Family::PoissonInverse, 2, 2, 1).unwrap();
    let cache = ResidualCache::from_values(vec![-1.0, 1.0]);
    assert!(q.objective_from_residual(&[1.0, 1.0], &cache).is_err());
}

#[test]
fn construction_rejects_invalid_data() {
    let neg = Matrix::from_rows(&[vec![1.0, -1.0]]).unwrap();
    assert!(ProblemInstance::with_scalar_blocks(Family::PoissonInverse, neg, vec![1.0]).is_err());
    let zero_col = Matrix::from_rows(&[vec![1.0, 0.0]]).unwrap();
    assert!(ProblemInstance::with_scalar_blocks(Family::RelativeEntropyRegression, zero_col, vec![1.0]).is_err());
    let zero_row = Matrix::from_rows(&[vec![1.0], vec![0.0]]).unwrap();
    assert!(ProblemInstance::with_scalar_blocks(Family::PoissonInverse, zero_row, vec![1.0, 1.0]).is_err());
    let asym = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
    assert!(ProblemInstance::with_scalar_blocks(Family::Quadratic, asym, vec![0.0, 0.0]).is_err());
    let indefinite = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    assert!(ProblemInstance::with_scalar_blocks(Family::Quadratic, indefinite, vec![0.0, 0.0]).is_err());
    let short_b = Matrix::from_rows(&[vec![1.0]]).unwrap();
    assert!(ProblemInstance::with_scalar_blocks(Family::PoissonInverse, short_b, vec![1.0, 2.0]).is_err());
}

#[test]
fn partial_gradient_examples() {
    let p = one_by_one(Family::PoissonInverse);
    let mut g = [0.0];
    p.partial_gradient(&p.residual(&[2.0]).unwrap(), 0, &mut g).unwrap();
    assert!((g[0] - 0.5).abs() < 1e-15);
    let fd = fd_gradient(&p, &[2.0], 1e-6)[0];
    assert!((fd - 0.5).abs() / 0.5 < 1e-5);

    let r = one_by_one(Family::RelativeEntropyRegression);
    r.partial_gradient(&r.residual(&[2.0]).unwrap(), 0, &mut g).unwrap();
    assert!((g[0] - 2f64.ln()).abs() < 1e-15);
    let fd = fd_gradient(&r, &[2.0], 1e-6)[0];
    assert!((fd - 2f64.ln()).abs() / 2f64.ln() < 1e-5);
}

#[test]
fn full_gradient_examples() {
    let eye = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let q = ProblemInstance::with_scalar_blocks(Family::Quadratic, eye, vec![0.0, 0.0]).unwrap();
    assert_eq!(q.full_gradient(&[1.0, 2.0]).unwrap(), vec![1.0, 2.0]);

    // Ax = b exactly: every factor 1 - b_i/<a_i,x> vanishes.
    let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.0], vec![0.5, 0.5]]).unwrap();
    let x = [0.4, 1.3];
    let b = a.mul_vec(&x);
    let p = ProblemInstance::with_scalar_blocks(Family::PoissonInverse, a, b).unwrap();
    assert!(p.full_gradient(&x).unwrap().iter().all(|g| g.abs() < 1e-14));
}

#[test]
fn gradients_match_finite_differences_at_interior_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for family in [Family::PoissonInverse, Family::RelativeEntropyRegression, Family::Quadratic] {
        let p = synth_instance(family, 6, 5, 3).unwrap();
        for _ in 0..50 {
            let x = random_positive(&mut rng, 5, 0.1, 10.0);
            let g = p.full_gradient(&x).unwrap();
            let fd = fd_gradient(&p, &x, 1e-6);
            for (a, b) in g.iter().zip(&fd) {
                let rel = (a - b).abs() / a.abs().max(1.0);
                assert!(rel < 1e-5, "{family}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn gradient_vanishes_at_interior_minimizer() {
    // Quadratic with Zero regularizer: minimizer solves Qx = b.
    let q = Matrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
    let p = ProblemInstance::with_scalar_blocks(Family::Quadratic, q, vec![1.0, 1.0]).unwrap();
    let det = 2.0 * 1.0 - 0.25;
    let x = [(1.0 * 1.0 - 0.5 * 1.0) / det, (2.0 * 1.0 - 0.5 * 1.0) / det];
    assert!(p.full_gradient(&x).unwrap().iter().all(|g| g.abs() < 1e-14));
}

#[test]
fn smoothness_constant_examples() {
    let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let p = ProblemInstance::with_scalar_blocks(Family::PoissonInverse, a, vec![1.0, 2.0, 3.0]).unwrap();
    assert_eq!(p.smoothness_constants(), vec![6.0, 6.0]);
    assert_eq!(p.reference().weights(), &[6.0, 6.0]);

    let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
    let r = ProblemInstance::with_scalar_blocks(Family::RelativeEntropyRegression, a, vec![1.0, 1.0]).unwrap();
    assert_eq!(r.smoothness_constants(), vec![4.0, 6.0]);

    let two = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
    let q = ProblemInstance::with_scalar_blocks(Family::Quadratic, two, vec![0.0, 0.0]).unwrap();
    assert_eq!(q.smoothness_constants(), vec![2.0, 2.0]);
}

#[test]
fn quadratic_block_constant_is_operator_norm() {
    let q = Matrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]]).unwrap();
    let p = ProblemInstance::new(Family::Quadratic, q, vec![0.0; 3], BlockPartition::new(vec![2, 1]).unwrap()).unwrap();
    let l = p.smoothness_constants();
    assert!((l[0] - 3.0).abs() < 1e-12);
    assert_eq!(l[1], 5.0);
}

#[test]
fn synth_is_deterministic_and_valid() {
    for family in [Family::PoissonInverse, Family::RelativeEntropyRegression, Family::Quadratic] {
        let a = synth_instance(family, 7, 4, 42).unwrap();
        let b = synth_instance(family, 7, 4, 42).unwrap();
        assert_eq!(a, b);
        let c = synth_instance(family, 7, 4, 43).unwrap();
        assert_ne!(a.b(), c.b());
        let tiny = synth_instance(family, 1, 1, 9).unwrap();
        assert_eq!(tiny.dim(), 1);
        assert!(tiny.objective(&tiny.default_start()).unwrap().is_finite());
    }
    let p = synth_instance(Family::PoissonInverse, 7, 4, 42).unwrap();
    assert_eq!((p.matrix().rows(), p.matrix().cols()), (7, 4));
    assert!(p.matrix().iter().all(|v| (0.0..1.0).contains(&v)));
    assert_eq!(p.partition().n_blocks(), 4);
    assert_eq!(p.reference().reference(0), ReferenceFunction::BurgEntropy);
    let q = synth_instance(Family::Quadratic, 7, 4, 42).unwrap();
    assert_eq!(q.matrix().rows(), 4);
    assert!(synth_instance(Family::Quadratic, 0, 4, 1).is_err());
}

#[test]
fn five_hundred_square_instance() {
    let p = synth_instance(Family::PoissonInverse, 500, 500, 1).unwrap();
    assert_eq!((p.matrix().rows(), p.dim()), (500, 500));
    let l = p.reference().weight(0);
    assert!((l - p.b().iter().sum::<f64>()).abs() < 1e-9);
}

#[test]
fn residual_cache_stays_exact() {
    let p = synth_instance(Family::PoissonInverse, 30, 20, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut x = p.default_start();
    let mut cache = p.residual(&x).unwrap();
    for _ in 0..10_000 {
        let j = rng.random_range(0..20);
        let delta = rng.random_range(-0.5..0.5) * x[j];
        x[j] += delta;
        cache.apply_block_update(&p, j, &[delta]);
    }
    let dev = cache.verify(&p, &x, 1e-9).unwrap();
    assert!(dev < 1e-9);
    let stale = ResidualCache::from_values(vec![0.0; 30]);
    assert!(matches!(stale.verify(&p, &x, 1e-9), Err(Error::StaleCache { .. })));
}

#[test]
fn block_delta_matches_objective_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for family in [Family::PoissonInverse, Family::RelativeEntropyRegression, Family::Quadratic] {
        let base = synth_instance(family, 6, 6, 4).unwrap();
        let p = ProblemInstance::new(family, base.matrix().clone(), base.b().to_vec(), BlockPartition::uniform(6, 4).unwrap())
            .unwrap();
        for _ in 0..20 {
            let x = random_positive(&mut rng, 6, 0.1, 10.0);
            let cache = p.residual(&x).unwrap();
            let block = rng.random_range(0..2);
            let range = p.partition().range(block);
            let new_block = random_positive(&mut rng, range.len(), 0.1, 10.0);
            let mut y = x.clone();
            y[range].copy_from_slice(&new_block);
            let direct = p.objective(&y).unwrap() - p.objective(&x).unwrap();
            let delta = p.block_delta(&x, &cache, block, &new_block).unwrap();
            assert!((direct - delta).abs() < 1e-10 * (1.0 + direct.abs()), "{family}: {direct} vs {delta}");
        }
    }
}

#[test]
fn descent_lemma_on_one_block_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for family in [Family::PoissonInverse, Family::RelativeEntropyRegression, Family::Quadratic] {
        let p = synth_instance(family, 8, 6, 6).unwrap();
        for _ in 0..200 {
            let x = random_positive(&mut rng, 6, 0.01, 100.0);
            let cache = p.residual(&x).unwrap();
            let j = rng.random_range(0..6);
            let y = x[j] * rng.random_range(-3.0f64..3.0).exp();
            let mut g = [0.0];
            p.partial_gradient(&cache, j, &mut g).unwrap();
            let lhs = p.block_delta(&x, &cache, j, &[y]).unwrap() - g[0] * (y - x[j]);
            let h = p.reference().reference(j);
            let rhs = p.reference().weight(j) * h.distance_scalar(y, x[j]);
            assert!(lhs <= rhs + 1e-8, "{family}: {lhs} > {rhs}");
        }
    }
}

#[test]
fn objective_nonnegative_for_kl_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for family in [Family::PoissonInverse, Family::RelativeEntropyRegression] {
        let p = synth_instance(family, 9, 5, 10).unwrap();
        for _ in 0..100 {
            let x = random_positive(&mut rng, 5, 1e-3, 1e3);
            assert!(p.objective(&x).unwrap() >= 0.0);
        }
    }
}

#[test]
fn relative_smoothness_residual_detects_tightness() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let p = synth_instance(Family::PoissonInverse, 10, 6, 2).unwrap();
    let samples: Vec<Vec<f64>> = (0..100).map(|_| random_positive(&mut rng, 6, 0.1, 10.0)).collect();
    assert!(p.relative_smoothness_residual(&samples).unwrap() <= 1e-4);

    // A coordinate dominating every row makes the constant nearly tight.
    let dominant: Vec<Vec<f64>> = (0..6)
        .map(|j| {
            let mut x = vec![1e-3; 6];
            x[j] = 10.0;
            x
        })
        .collect();
    let halved: Vec<f64> = p.reference().weights().iter().map(|l| l / 2.0).collect();
    let broken = p.with_weights(halved).unwrap();
    assert!(broken.relative_smoothness_residual(&dominant).unwrap() > 0.0);

    let q = synth_instance(Family::Quadratic, 1, 5, 2).unwrap();
    let samples: Vec<Vec<f64>> = (0..20).map(|_| random_positive(&mut rng, 5, 0.1, 10.0)).collect();
    assert!(q.relative_smoothness_residual(&samples).unwrap() <= 1e-8);

    let r = synth_instance(Family::RelativeEntropyRegression, 10, 6, 2).unwrap();
    assert!(r.relative_smoothness_residual(&dominant).unwrap() <= 1e-4);
    assert!(r.relative_smoothness_residual(&[vec![-1.0; 6]]).is_err());
}

#[test]
fn instance_text_round_trip() {
    let p = synth_instance(Family::RelativeEntropyRegression, 3, 4, 21).unwrap();
    let text = format_instance(&p);
    assert!(text.starts_with("3 4\n"));
    assert_eq!(text.lines().count(), 5);
    let back = parse_instance(&text, Family::RelativeEntropyRegression).unwrap();
    assert_eq!(back, p);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.txt");
    write_instance(&p, &path).unwrap();
    assert_eq!(read_instance(&path, Family::RelativeEntropyRegression).unwrap(), p);
}

#[test]
fn instance_parse_errors_carry_line_numbers() {
    assert!(matches!(parse_instance("", Family::PoissonInverse), Err(Error::Format { line: 1, .. })));
    let bad = "2 2\n1 1\n1 x\n1 1\n";
    assert!(matches!(parse_instance(bad, Family::PoissonInverse), Err(Error::Format { line: 3, .. })));
    let short = "2 2\n1 1\n1 1\n1\n";
    assert!(matches!(parse_instance(short, Family::PoissonInverse), Err(Error::Format { line: 4, .. })));
    assert!(matches!(
        read_instance(std::path::Path::new("/nonexistent/instance.txt"), Family::PoissonInverse),
        Err(Error::Io { .. })
    ));
}
