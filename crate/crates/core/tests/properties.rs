use levi_disc_core::discs::{check_defective_fourier, construct_disc, BoundaryFunction, DiscSettings};
use levi_disc_core::levi::{
    classify, is_levi_generating, is_levi_nondegenerate, normalize_q, ClassifySettings, LeviForm,
};
use levi_disc_core::numlin::{eig_hermitian, real_rank, CMatrix, HermitianMatrix, RealMatrix, C64};
use levi_disc_core::sample::{
    random_complex, random_complex_vector, random_form, random_hermitian, random_pseudoconvex_form, random_unitary,
    seeded,
};
use levi_disc_core::stationary::{
    assemble_pair_params, defect_test, find_nondefective, krylov_span, solve_quadratic, KrylovSpan, LiftParams,
    QuadraticPencil, SearchSettings, SolverSettings,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn first_witness(k: usize) -> Vec<f64> {
    let mut c = vec![0.0; k];
    c[0] = 1.0;
    c
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn eigendecomposition_is_unitary_and_keeps_trace(seed in any::<u64>(), m in 1usize..7) {
        let mut rng = seeded(seed);
        let a = random_hermitian(&mut rng, m);
        let d = eig_hermitian(&a).unwrap();
        let g = &d.eigenvectors.adjoint() * &d.eigenvectors;
        prop_assert!((&g - &CMatrix::identity(m)).max_abs() <= 1e-12);
        let tr: f64 = d.eigenvalues.iter().sum();
        prop_assert!((tr - a.as_matrix().trace().re).abs() <= 1e-10 * a.as_matrix().frobenius_norm().max(1.0));
        prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn real_rank_ignores_order_and_scaling(seed in any::<u64>(), count in 1usize..8, len in 1usize..7) {
        let mut rng = seeded(seed);
        let mut vectors: Vec<Vec<f64>> = (0..count).map(|_| (0..len).map(|_| rng.random::<f64>() - 0.5).collect()).collect();
        if count > 2 {
            // plant a dependency
            vectors[2] = vectors[0].iter().zip(&vectors[1]).map(|(a, b)| 2.0 * a - b).collect();
        }
        let base = real_rank(&vectors, 1e-9);
        let mut shuffled = vectors.clone();
        shuffled.shuffle(&mut rng);
        prop_assert_eq!(real_rank(&shuffled, 1e-9).rank, base.rank);
        let scaled: Vec<Vec<f64>> = vectors.iter().map(|v| {
            let s = if rng.random::<bool>() { -3.0 } else { 0.25 };
            v.iter().map(|x| x * s).collect()
        }).collect();
        prop_assert_eq!(real_rank(&scaled, 1e-9).rank, base.rank);
        if let Some(mu) = base.witness {
            let combo: Vec<f64> = (0..len).map(|i| vectors.iter().zip(&mu).map(|(v, m)| v[i] * m).sum()).collect();
            let norm = combo.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!(norm <= 10.0 * 1e-9 * base.scale);
        }
    }

    #[test]
    fn generating_and_nondegenerate_survive_recombination(seed in any::<u64>(), m in 1usize..4, k in 1usize..6) {
        let mut rng = seeded(seed);
        let l = random_form(&mut rng, m, k);
        let t = RealMatrix::from_fn(k, k, |i, j| if i == j { 2.0 } else { 0.3 * (rng.random::<f64>() - 0.5) });
        let r = l.recombine(&t);
        prop_assert_eq!(is_levi_generating(&r, 1e-9), is_levi_generating(&l, 1e-9));
        prop_assert_eq!(is_levi_nondegenerate(&r, 1e-9), is_levi_nondegenerate(&l, 1e-9));
        let u = random_unitary(&mut rng, m);
        let c = l.congruence(&u);
        prop_assert_eq!(is_levi_generating(&c, 1e-9), is_levi_generating(&l, 1e-9));
        prop_assert_eq!(is_levi_nondegenerate(&c, 1e-9), is_levi_nondegenerate(&l, 1e-9));
    }

    #[test]
    fn krylov_span_is_invariant_and_orthonormal(seed in any::<u64>(), m in 1usize..7) {
        let mut rng = seeded(seed);
        let x = CMatrix::from_fn(m, m, |_, _| random_complex(&mut rng));
        let v = random_complex_vector(&mut rng, m);
        let s = krylov_span(&x, &v, 1e-9).unwrap();
        prop_assert!(s.dim <= m);
        let g = &s.basis.adjoint() * &s.basis;
        prop_assert!((&g - &CMatrix::identity(s.dim)).max_abs() <= 1e-12);
        // X·S ⊆ S: the projection of X s_i onto S⊥ vanishes
        let proj = &s.basis * &s.basis.adjoint();
        for i in 0..s.dim {
            let xs = x.mul_vec(&s.basis.col(i));
            let back = proj.mul_vec(&xs);
            let off: f64 = xs.iter().zip(&back).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(off <= 1e-9 * x.frobenius_norm().max(1.0));
        }
        let alpha = random_complex(&mut rng);
        let scaled: Vec<C64> = v.iter().map(|z| z * alpha).collect();
        prop_assert_eq!(krylov_span(&x, &scaled, 1e-9).unwrap().dim, s.dim);
        let u = random_unitary(&mut rng, m);
        let xu = &(&u.adjoint() * &x) * &u;
        prop_assert_eq!(krylov_span(&xu, &u.adjoint().mul_vec(&v), 1e-9).unwrap().dim, s.dim);
    }

    #[test]
    fn defect_test_is_invariant(seed in any::<u64>(), m in 1usize..4, k in 1usize..8, d in 1usize..4) {
        let mut rng = seeded(seed);
        let l = random_form(&mut rng, m, k);
        let d = d.min(m);
        let u = random_unitary(&mut rng, m);
        let basis = CMatrix::from_fn(m, d, |i, j| u[(i, j)]);
        let span = KrylovSpan { basis: basis.clone(), dim: d };
        let base = defect_test(&l, &span, 1e-9);
        prop_assert_eq!(base.defective, base.rank < k);
        prop_assert_eq!(base.defective, base.witness.is_some());

        let mut mats = l.matrices().to_vec();
        mats.shuffle(&mut rng);
        let permuted = LeviForm::new(mats).unwrap();
        prop_assert_eq!(defect_test(&permuted, &span, 1e-9).rank, base.rank);

        let t = RealMatrix::from_fn(k, k, |i, j| if i == j { 1.5 } else { 0.2 * (rng.random::<f64>() - 0.5) });
        prop_assert_eq!(defect_test(&l.recombine(&t), &span, 1e-9).rank, base.rank);

        // another orthonormal basis of the same subspace
        let w = random_unitary(&mut rng, d);
        let rotated = KrylovSpan { basis: &basis * &w, dim: d };
        prop_assert_eq!(defect_test(&l, &rotated, 1e-9).rank, base.rank);

        if let Some(mu) = &base.witness {
            let a = l.combination(mu);
            for i in 0..d {
                let r: f64 = a.as_matrix().mul_vec(&basis.col(i)).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                prop_assert!(r <= 10.0 * 1e-9 * l.scale() * (k as f64).sqrt());
            }
        }
    }

    #[test]
    fn holomorphic_defect_is_rotation_invariant(seed in any::<u64>(), offset in 0.0f64..6.3) {
        let mut rng = seeded(seed);
        let coeffs: Vec<C64> = (0..6).map(|_| random_complex(&mut rng)).collect();
        let f = |z: C64| {
            let zb = z.conj();
            vec![coeffs[0] + coeffs[1] * z + coeffs[2] * z * z + coeffs[3] * zb + coeffs[4] * zb * zb * zb, coeffs[5] * z]
        };
        let a = BoundaryFunction::sample(256, 0.0, f).unwrap();
        let b = BoundaryFunction::sample(256, offset, f).unwrap();
        prop_assert!((a.holomorphic_extension_defect() - b.holomorphic_extension_defect()).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn normalization_keeps_verdicts_and_defect_tests(seed in any::<u64>(), m in 1usize..4, extra in 0usize..4) {
        let mut rng = seeded(seed);
        let k = (1 + extra).min(m * m);
        let l = random_pseudoconvex_form(&mut rng, m, k);
        let c = first_witness(k);
        let (nl, r) = normalize_q(&l, &c).unwrap();
        prop_assert!((nl.combination(&c).as_matrix() - &CMatrix::identity(m)).max_abs() <= 1e-10);
        let settings = ClassifySettings { ascent: levi_disc_core::levi::AscentSettings { iters: 200, starts: 2, ..Default::default() }, ..ClassifySettings::with_seed(seed) };
        let a = classify(&l, &settings).unwrap();
        let b = classify(&nl, &settings).unwrap();
        prop_assert_eq!(a.levi_generating, b.levi_generating);
        prop_assert_eq!(a.levi_nondegenerate, b.levi_nondegenerate);
        prop_assert!(a.strongly_pseudoconvex.is_yes() && b.strongly_pseudoconvex.is_yes());

        // the solvent transforms as X = R X̃ R⁻¹, and S(X, R ṽ) = R S(X̃, ṽ):
        // both coordinate systems give the same defectiveness verdict
        let lambda: Vec<C64> = random_complex_vector(&mut rng, k).into_iter().map(|z| z * 0.05).collect();
        let params = LiftParams::new(lambda, c.clone());
        let xt = solve_quadratic(&QuadraticPencil::from_levi(&nl, &params), &SolverSettings::default());
        let x = solve_quadratic(&QuadraticPencil::from_levi(&l, &params), &SolverSettings::default());
        if let (Ok(xt), Ok(x)) = (xt, x) {
            let vt = random_complex_vector(&mut rng, m);
            let v = r.mul_vec(&vt);
            let st = krylov_span(&xt.x, &vt, 1e-9).unwrap();
            let s = krylov_span(&x.x, &v, 1e-9).unwrap();
            prop_assert_eq!(st.dim, s.dim);
            prop_assert_eq!(defect_test(&nl, &st, 1e-9).defective, defect_test(&l, &s, 1e-9).defective);
            let rinv = levi_disc_core::numlin::inverse(&r).unwrap();
            let mapped = &(&r * &xt.x) * &rinv;
            prop_assert!((&mapped - &x.x).max_abs() <= 1e-8);
        }
    }

    #[test]
    fn solver_residual_identity(seed in any::<u64>(), m in 1usize..6) {
        let mut rng = seeded(seed);
        let k = 1 + (seed as usize % (m * m).min(6));
        let l = random_pseudoconvex_form(&mut rng, m, k);
        let c = first_witness(k);
        let (nl, _) = normalize_q(&l, &c).unwrap();
        let dir: Vec<f64> = (0..k).map(|_| rng.random::<f64>() - 0.5).collect();
        let v = random_complex_vector(&mut rng, m);
        let pair = assemble_pair_params(&nl, &dir, &v, &c, 0.5, 256, 1e-6).unwrap();
        let pencil = QuadraticPencil::from_levi(&nl, &pair.data.lift());
        let sol = solve_quadratic(&pencil, &SolverSettings::default()).unwrap();
        let scale = pencil.scale();
        prop_assert!(sol.residual <= 1e-10 * scale.max(scale * scale));
        prop_assert!(sol.spectral_radius < 1.0);
    }

    #[test]
    fn disc_truncation_is_robust(seed in any::<u64>(), m in 1usize..4) {
        let mut rng = seeded(seed);
        let k = (1 + seed as usize % 3).min(m * m);
        let l = random_pseudoconvex_form(&mut rng, m, k);
        let c = first_witness(k);
        let (nl, _) = normalize_q(&l, &c).unwrap();
        let s = find_nondefective(&nl, &SearchSettings { seed, ..SearchSettings::default() }).unwrap();
        let pair = assemble_pair_params(&nl, &s.lambda_dir, &s.v, &c, 0.5, 256, 1e-6).unwrap().data;
        let d512 = construct_disc(&nl, &pair, &DiscSettings::default()).unwrap();
        let d1024 = construct_disc(&nl, &pair, &DiscSettings { fourier_n: 1024, ..DiscSettings::default() }).unwrap();
        let slack = d512.tail_bound + 1e-12;
        prop_assert!((d512.stationarity_defect - d1024.stationarity_defect).abs() <= slack);
        let f512 = check_defective_fourier(&nl, &d512, 512, 1e-9).unwrap();
        let f1024 = check_defective_fourier(&nl, &d1024, 1024, 1e-9).unwrap();
        prop_assert_eq!(f512.defective, f1024.defective);
    }
}

#[test]
fn k_above_2m_is_defective_at_lambda_zero() {
    let mut rng = seeded(2024);
    let l = random_form(&mut rng, 3, 7);
    assert!(is_levi_generating(&l, 1e-9));
    for _ in 0..10 {
        let x = CMatrix::zeros(3, 3);
        let v = random_complex_vector(&mut rng, 3);
        let span = krylov_span(&x, &v, 1e-9).unwrap();
        assert_eq!(span.dim, 1);
        assert!(defect_test(&l, &span, 1e-9).defective);
    }
    // the constructive search gets past the obstruction with r ≥ 2
    let s = find_nondefective(&l, &SearchSettings::default()).unwrap();
    assert!(s.r >= 2 && !s.report.defective);
}

#[test]
fn unitary_congruence_keeps_hermitian_structure() {
    let mut rng = seeded(8);
    let a = random_hermitian(&mut rng, 4);
    let u = random_unitary(&mut rng, 4);
    let b = a.congruence(&u);
    let again = HermitianMatrix::new(b.as_matrix().clone(), 1e-12).unwrap();
    let ea = eig_hermitian(&a).unwrap();
    let eb = eig_hermitian(&again).unwrap();
    for (x, y) in ea.eigenvalues.iter().zip(&eb.eigenvalues) {
        assert!((x - y).abs() < 1e-12);
    }
}
