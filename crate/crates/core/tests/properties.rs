use num::complex::Complex64;
use num::rational::Ratio;
use proptest::prelude::*;

use l2hodge::cohomology::{
    compare_stalk_models, global_chi, global_h, parabolic_h1, riemann_hurwitz_check, LocalSystem,
};
use l2hodge::disk::{growth_fit, il_constant, nabla_primitive_series, solve_mode, Quadrature};
use l2hodge::error::Error;
use l2hodge::gamma::{cone, GammaModule};
use l2hodge::group::{FiniteGroup, GroupElement, CATALOG};
use l2hodge::numeric::spectral::{eig_unit_circle, nilpotent_exp, nilpotent_log};
use l2hodge::numeric::{span_rank, Exact, GaussRat, Matrix, NumConfig, RotationNumber};
use l2hodge::random::{
    random_chain_map, random_gamma_complex, random_instance, random_monodromy, random_nilpotent,
    rng, unimodular, InstanceShape, MonodromyFamily,
};
use l2hodge::selftest::obstruction_probe_form;
use l2hodge::surface::SurfaceData;
use l2hodge::weights::{
    pullback_local_type, same_flag, verify_weight_axioms, weight_filtration, LocalType,
};

fn cfg() -> NumConfig {
    NumConfig::default()
}

fn small_groups() -> Vec<FiniteGroup> {
    CATALOG
        .iter()
        .filter_map(|n| FiniteGroup::named(n).ok())
        .filter(|g| g.order() <= 12)
        .collect()
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Exact>> {
    proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        Matrix::from_fn(rows, cols, |r, c| GaussRat::from_ints(v[r * cols + c], 0))
    })
}

fn rotation() -> impl Strategy<Value = RotationNumber> {
    (1i64..=6).prop_flat_map(|d| (0..d).prop_map(move |n| RotationNumber::new(-n, d)))
}

fn local_type() -> impl Strategy<Value = LocalType> {
    proptest::collection::vec(
        (rotation(), proptest::collection::vec(1usize..=3, 1..=2)),
        1..=3,
    )
    .prop_map(LocalType::new)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn rank_is_invariant_under_unimodular_change_of_basis(m in int_matrix(4, 5), seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = unimodular::<Exact>(&mut r, 4);
        let q = unimodular::<Exact>(&mut r, 5);
        prop_assert_eq!(p.mul(&m).mul(&q).rank(0.0), m.rank(0.0));
    }

    #[test]
    fn exp_inverts_log_on_unipotents(seed in any::<u64>(), dim in 1usize..=6) {
        let (n, _) = random_nilpotent::<Exact>(&mut rng(seed), dim);
        let u = Matrix::identity(dim).add(&n);
        let log = nilpotent_log(&u, &cfg()).unwrap();
        prop_assert_eq!(nilpotent_exp(&log, &cfg()).unwrap(), u);
    }

    #[test]
    fn generalized_eigenspaces_fill_the_space(seed in any::<u64>(), dim in 1usize..=5) {
        let surface = SurfaceData::new(0, 2);
        let sys = random_monodromy::<Exact>(&mut rng(seed), &surface, dim, MonodromyFamily::Monomial, &cfg()).unwrap();
        let parts = eig_unit_circle(sys.meridian(0), &cfg()).unwrap();
        let all: Vec<Vec<GaussRat>> = parts.iter().flat_map(|p| p.basis.clone()).collect();
        prop_assert_eq!(all.len(), dim);
        prop_assert_eq!(span_rank(dim, &all, 0.0), dim);
    }

    #[test]
    fn regular_representation_is_a_homomorphism(gi in 0usize..64, a in 0usize..64, b in 0usize..64) {
        let groups = small_groups();
        let g = &groups[gi % groups.len()];
        let (a, b) = (GroupElement(a % g.order()), GroupElement(b % g.order()));
        let lhs = g.regular_rep::<Exact>(a).mul(&g.regular_rep(b));
        prop_assert_eq!(lhs, g.regular_rep(g.mul(a, b)));
    }

    #[test]
    fn cosets_partition_the_group(gi in 0usize..64, h in 0usize..64) {
        let groups = small_groups();
        let g = &groups[gi % groups.len()];
        let h = GroupElement(h % g.order());
        let ord = g.element_order(h);
        prop_assert_eq!(g.order() % ord, 0);
        let cosets = g.cosets(h);
        prop_assert_eq!(cosets.len() * ord, g.order());
        let mut seen: Vec<GroupElement> = cosets.into_iter().flatten().collect();
        seen.sort_by_key(|e| e.0);
        seen.dedup();
        prop_assert_eq!(seen.len(), g.order());
    }

    #[test]
    fn weight_filtration_is_symmetric_and_scale_invariant(seed in any::<u64>(), dim in 1usize..=7, c in 2i64..=7) {
        let (n, blocks) = random_nilpotent::<Exact>(&mut rng(seed), dim);
        let w = weight_filtration(&n, &cfg()).unwrap();
        prop_assert!(verify_weight_axioms(&n, &w, &cfg()));
        for k in 1..=dim as i64 {
            prop_assert_eq!(w.graded_dim(k), w.graded_dim(-k));
        }
        let mut got = w.blocks();
        let mut want = blocks;
        got.sort_unstable();
        want.sort_unstable();
        prop_assert_eq!(got, want);
        let wc = weight_filtration(&n.scale(&GaussRat::from_ints(c, 0)), &cfg()).unwrap();
        prop_assert!(same_flag(&w, &wc, &cfg()));
    }

    #[test]
    fn pullbacks_compose(t in local_type(), a in 1u64..=5, b in 1u64..=5) {
        prop_assert_eq!(pullback_local_type(&pullback_local_type(&t, a), b), pullback_local_type(&t, a * b));
        prop_assert_eq!(pullback_local_type(&t, a).dim, t.dim);
    }

    #[test]
    fn il_constant_scales_linearly(d in 0.1f64..10.0, i in 0.1f64..10.0, s in 0.1f64..10.0) {
        let c = il_constant(d, i).unwrap();
        let cs = il_constant(s * d, s.powi(3) * i).unwrap();
        prop_assert!((cs - s * c).abs() <= 1e-12 * cs.abs());
    }

    #[test]
    fn growth_fit_recovers_exponents(beta in -0.99f64..0.0, k in -3i32..=3, logc in -2.0f64..2.0) {
        let samples: Vec<(f64, f64)> = (0..30)
            .map(|j| {
                let r = 1e-8f64 * (1e6f64).powf(j as f64 / 29.0);
                (r, logc.exp() * r.powf(2.0 * beta) * (1.0 / r).ln().powi(k))
            })
            .collect();
        let fit = growth_fit(&samples).unwrap();
        prop_assert!((fit.two_beta - 2.0 * beta).abs() < 1e-8);
        prop_assert!((fit.k - k as f64).abs() < 1e-7);
        prop_assert!((fit.log_constant - logc).abs() < 1e-6);
    }

    #[test]
    fn obstruction_appears_exactly_for_untwisted_dtheta(d in 1i64..=4, n in 0i64..4, k in -4i64..=4, g0 in -3.0f64..3.0) {
        let beta = RotationNumber::new(-(n % d), d);
        let eta = obstruction_probe_form(beta, k, g0).unwrap();
        let raised = matches!(solve_mode(&eta, &Quadrature::new(4), 1e-9), Err(Error::Obstruction { .. }));
        prop_assert_eq!(raised, beta.is_zero() && g0.abs() > 1e-9 && k >= -1);
    }

    #[test]
    fn primitive_series_is_exact(seed in any::<u64>(), dim in 1usize..=4, len in 1usize..=8, d in 1i64..=4, n in 0i64..4) {
        let mut r = rng(seed);
        let (nil, _) = random_nilpotent::<Exact>(&mut r, dim);
        let a: Vec<GaussRat> = (0..len).map(|m| GaussRat::from_ints(m as i64 - 3, 2 - m as i64)).collect();
        let s = nabla_primitive_series(&a, RotationNumber::new(-(n % d), d), &nil, &cfg()).unwrap();
        prop_assert!(s.nilpotency <= 4);
        prop_assert!(s.check(&a, &nil, &cfg()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn h1_equals_parabolic_cohomology(seed in any::<u64>()) {
        let shape = InstanceShape { max_group_order: 1, ..InstanceShape::default() };
        let inst = random_instance::<Exact>(&mut rng(seed), &shape, &cfg()).unwrap();
        let h = global_h(&inst.system, &cfg()).unwrap();
        prop_assert_eq!(h.h1, Ratio::from_integer(parabolic_h1(&inst.system, &cfg()).unwrap() as i64));
        prop_assert_eq!(h.chi, Ratio::from_integer(global_chi(&inst.system, &cfg())));
    }

    #[test]
    fn cohomology_is_additive_over_direct_sums(seed in any::<u64>(), g in 0usize..=2, s in 0usize..=3) {
        let mut r = rng(seed);
        let surface = SurfaceData::new(g, s);
        let a = random_monodromy::<Exact>(&mut r, &surface, 2, MonodromyFamily::Borel, &cfg()).unwrap();
        let b = random_monodromy::<Exact>(&mut r, &surface, 1, MonodromyFamily::Monomial, &cfg()).unwrap();
        let sum: Vec<Matrix<Exact>> =
            a.matrices().iter().zip(b.matrices()).map(|(x, y)| Matrix::block_diag(&[x, y])).collect();
        let ab = LocalSystem::new(surface, sum, &cfg()).unwrap();
        let (ha, hb, hab) = (global_h(&a, &cfg()).unwrap(), global_h(&b, &cfg()).unwrap(), global_h(&ab, &cfg()).unwrap());
        for i in 0..3 {
            prop_assert_eq!(hab.dims()[i], ha.dims()[i] + hb.dims()[i]);
        }
    }

    #[test]
    fn riemann_hurwitz_holds_on_random_covers(seed in any::<u64>()) {
        let shape = InstanceShape { max_group_order: 12, max_rank: 3, ..InstanceShape::default() };
        let inst = random_instance::<Exact>(&mut rng(seed), &shape, &cfg()).unwrap();
        let rh = riemann_hurwitz_check(&inst.system, &inst.cover, &cfg()).unwrap();
        prop_assert_eq!(rh.lhs, rh.rhs);
    }

    #[test]
    fn stalk_models_agree_on_unipotent_monodromy(seed in any::<u64>()) {
        let shape = InstanceShape { max_group_order: 12, max_rank: 3, family: MonodromyFamily::Unipotent, ..InstanceShape::default() };
        let inst = random_instance::<Exact>(&mut rng(seed), &shape, &cfg()).unwrap();
        let cmp = compare_stalk_models(&inst.system, &inst.cover, &cfg()).unwrap();
        prop_assert!(!cmp.divergent);
        prop_assert!(cmp.extension_of_pullback.same_dims(&cmp.pullback_of_extension));
    }

    #[test]
    fn cone_euler_characteristic_is_the_difference(seed in any::<u64>(), gi in 0usize..64, len in 2usize..=4) {
        let groups = small_groups();
        let group = &groups[gi % groups.len()];
        let mut r = rng(seed);
        let c0 = random_gamma_complex::<Exact>(&mut r, group, len, &cfg());
        let (c1, f) = random_chain_map(&mut r, &c0, &cfg());
        let c = cone(&c0, &c1, &f, &cfg()).unwrap();
        prop_assert_eq!(c.euler_char(&cfg()), c1.euler_char(&cfg()) - c0.euler_char(&cfg()));
    }

    #[test]
    fn von_neumann_dimension_is_additive_and_conjugation_invariant(gi in 0usize..64, h in 0usize..64, x in 0usize..64) {
        let groups = small_groups();
        let g = &groups[gi % groups.len()];
        let h = GroupElement(h % g.order());
        let x = GroupElement(x % g.order());
        let conj = g.mul(g.mul(x, h), g.inv(x));
        let m = GammaModule::<Exact>::coset_space(g, h);
        let mc = GammaModule::<Exact>::coset_space(g, conj);
        prop_assert_eq!(m.vn_dim(&cfg()), Ratio::new(1, g.element_order(h) as i64));
        prop_assert_eq!(m.vn_dim(&cfg()), mc.vn_dim(&cfg()));
        let sum = m.direct_sum(&GammaModule::full(g, 1));
        prop_assert_eq!(sum.vn_dim(&cfg()), m.vn_dim(&cfg()) + Ratio::from_integer(1));
        prop_assert!((m.normalized_trace() - Complex64::new(1.0 / g.element_order(h) as f64, 0.0)).norm() < 1e-12);
    }
}
