use l2hodge::cohomology::*;
use l2hodge::group::{FiniteGroup, GroupElement};
use l2hodge::numeric::{GaussRat, Matrix, NumConfig, Scalar};
use l2hodge::surface::{CoveringDatum, SurfaceData};
use num::complex::Complex64;
use num::rational::Ratio;

type Q = GaussRat;

fn cfg() -> NumConfig {
    NumConfig::default()
}

fn r(n: i64) -> Ratio<i64> {
    Ratio::from_integer(n)
}

fn trivial_rank_one<S: Scalar>(surface: SurfaceData) -> LocalSystem<S> {
    let mats = vec![Matrix::identity(1); surface.num_generators()];
    LocalSystem::new(surface, mats, &cfg()).unwrap()
}

fn worked_torus<S: Scalar>() -> LocalSystem<S> {
    let a = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
    let b = Matrix::from_i64(&[&[2, 0], &[0, 1]]);
    let t = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
    LocalSystem::new(SurfaceData::new(1, 1), vec![a, b, t], &cfg()).unwrap()
}

fn signs<S: Scalar>() -> LocalSystem<S> {
    let m = |v: i64| Matrix::from_i64(&[&[v]]);
    LocalSystem::new(SurfaceData::new(0, 3), vec![m(-1), m(-1), m(1)], &cfg()).unwrap()
}

fn z2_sphere_cover() -> CoveringDatum {
    CoveringDatum::finite(
        SurfaceData::new(0, 3),
        FiniteGroup::cyclic(2),
        vec![GroupElement(1), GroupElement(1), GroupElement(0)],
    )
}

#[test]
fn stalk_dims() {
    assert_eq!(stalk_dim(&Matrix::<Q>::identity(3), &cfg()), 3);
    assert_eq!(
        stalk_dim(&Matrix::<Q>::from_i64(&[&[1, 1], &[0, 1]]), &cfg()),
        1
    );
    assert_eq!(
        stalk_dim(&Matrix::<Q>::scalar(2, Q::from_i64(-1)), &cfg()),
        0
    );
}

#[test]
fn global_h_examples() {
    for g in 0..3 {
        let h = global_h(&trivial_rank_one::<Q>(SurfaceData::new(g, 2)), &cfg()).unwrap();
        assert_eq!(h.dims(), [r(1), r(2 * g as i64), r(1)]);
        assert_eq!(h.chi, r(2 - 2 * g as i64));
    }
    let h = global_h(&worked_torus::<Q>(), &cfg()).unwrap();
    assert_eq!((h.dims(), h.chi), ([r(0), r(2), r(1)], r(-1)));
    let hf = global_h(&worked_torus::<Complex64>(), &cfg()).unwrap();
    assert_eq!(hf, h);
    let h = global_h(&signs::<Q>(), &cfg()).unwrap();
    assert_eq!((h.dims(), h.chi), ([r(0), r(0), r(0)], r(0)));
}

#[test]
fn parabolic_examples() {
    assert_eq!(
        parabolic_h1(&trivial_rank_one::<Q>(SurfaceData::new(1, 1)), &cfg()).unwrap(),
        2
    );
    assert_eq!(parabolic_h1(&worked_torus::<Q>(), &cfg()).unwrap(), 2);
    assert_eq!(
        parabolic_h1(&worked_torus::<Complex64>(), &cfg()).unwrap(),
        2
    );
    assert_eq!(parabolic_h1(&signs::<Q>(), &cfg()).unwrap(), 0);
}

#[test]
fn principal_cocycles_satisfy_constraints() {
    let sys = worked_torus::<Q>();
    let v = vec![Q::from_i64(3), Q::from_i64(-5)];
    let x = principal_cocycle(&sys, &v);
    let c = parabolic_constraints(&sys, &cfg());
    assert!(c.mul_vec(&x).iter().all(|e| *e == Q::zero()));
}

#[test]
fn induced_systems() {
    let base = SurfaceData::new(0, 3);
    let triv = induced_cover_system(&signs::<Q>(), &CoveringDatum::trivial(base.clone())).unwrap();
    assert_eq!(triv.matrices(), signs::<Q>().matrices());
    let swap = Matrix::<Q>::from_i64(&[&[0, 1], &[1, 0]]);
    let ind = induced_cover_system(&trivial_rank_one::<Q>(base), &z2_sphere_cover()).unwrap();
    assert_eq!(
        ind.matrices(),
        &[swap.clone(), swap.clone(), Matrix::identity(2)]
    );
    let ind = induced_cover_system(&signs::<Q>(), &z2_sphere_cover()).unwrap();
    assert_eq!(
        ind.matrices(),
        &[swap.neg(), swap.neg(), Matrix::identity(2)]
    );
}

#[test]
fn cover_models() {
    let base = SurfaceData::new(0, 3);
    let cmp = compare_stalk_models(
        &trivial_rank_one::<Q>(base.clone()),
        &z2_sphere_cover(),
        &cfg(),
    )
    .unwrap();
    assert_eq!(cmp.extension_of_pullback.chi, r(1));
    assert_eq!(cmp.pullback_of_extension.chi, r(1));
    assert!(!cmp.divergent);
    let cmp = compare_stalk_models(&signs::<Q>(), &z2_sphere_cover(), &cfg()).unwrap();
    assert_eq!(cmp.extension_of_pullback.chi, r(1));
    assert_eq!(cmp.pullback_of_extension.chi, r(0));
    assert!(cmp.divergent);
    let cmpf = compare_stalk_models(&signs::<Complex64>(), &z2_sphere_cover(), &cfg()).unwrap();
    assert_eq!(cmpf, cmp);
    let triv = CoveringDatum::trivial(base);
    for model in [
        StalkModel::ExtensionOfPullback,
        StalkModel::PullbackOfExtension,
    ] {
        let h = l2_cohomology_finite(&signs::<Q>(), &triv, model, &cfg()).unwrap();
        assert!(h.same_dims(&global_h(&signs::<Q>(), &cfg()).unwrap()));
    }
}

#[test]
fn riemann_hurwitz_examples() {
    let rh = riemann_hurwitz_check(
        &trivial_rank_one::<Q>(SurfaceData::new(0, 3)),
        &z2_sphere_cover(),
        &cfg(),
    )
    .unwrap();
    assert_eq!((rh.lhs, rh.rhs, rh.equal), (r(-1), r(-1), true));
    let rh = riemann_hurwitz_check(&signs::<Q>(), &z2_sphere_cover(), &cfg()).unwrap();
    assert!(rh.equal);
}

#[test]
fn character_family_examples() {
    let torus = SurfaceData::new(1, 0);
    let cover = CoveringDatum::abelian(torus.clone(), 1, vec![vec![1], vec![0]]);
    let fam =
        character_family(&trivial_rank_one::<Q>(torus.clone()), &cover, 8, 7, &cfg()).unwrap();
    assert_eq!(fam.generic, [0, 0, 0]);
    assert_eq!(fam.trivial_character.dims, [1, 2, 1]);
    assert_eq!(fam.jumps.len(), 1);
    // generically twisted rank one, float mode
    let phase = Complex64::from_polar(
        1.0,
        2.0 * std::f64::consts::PI * 0.1234567 * std::f64::consts::SQRT_2,
    );
    let sys = LocalSystem::new(
        torus.clone(),
        vec![Matrix::scalar(1, phase), Matrix::identity(1)],
        &cfg(),
    )
    .unwrap();
    let fam = character_family(&sys, &cover, 16, 3, &cfg()).unwrap();
    assert_eq!(fam.generic, [0, 0, 0]);
    assert!(fam.jumps.is_empty());
    // rank-zero group
    let cover0 = CoveringDatum::abelian(torus.clone(), 0, vec![vec![], vec![]]);
    let fam = character_family(&trivial_rank_one::<Q>(torus), &cover0, 4, 1, &cfg()).unwrap();
    assert_eq!(fam.generic, [1, 2, 1]);
}

#[test]
fn skyscrapers() {
    let rep = |dims: Vec<usize>| skyscraper_summand(&SkyscraperDatum { dims, tags: vec![] }).dims();
    assert_eq!(rep(vec![]), [r(0), r(0), r(0)]);
    assert_eq!(rep(vec![3]), [r(3), r(0), r(0)]);
    assert_eq!(rep(vec![1, 2]), [r(3), r(0), r(0)]);
}
