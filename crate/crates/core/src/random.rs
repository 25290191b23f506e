//! Seeded random instances: local systems with covers, nilpotents, and equivariant complexes.
//!
//! Monodromy matrices have small Gaussian-integer entries and are conjugated by a common
//! unimodular matrix, so exact arithmetic stays cheap and every meridian has roots of unity
//! in `{±1, ±i}` as eigenvalues.

use num::rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cohomology::LocalSystem;
use crate::error::Result;
use crate::gamma::{group_ring_map, GammaComplex, GammaModule};
use crate::group::{FiniteGroup, GroupElement, CATALOG};
use crate::numeric::{Matrix, NumConfig, Scalar};
use crate::surface::{CoveringDatum, SurfaceData};

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonodromyFamily {
    /// Upper triangular generators; meridians `D U` with `D` diagonal in `{±1, ±i}`.
    Borel,
    /// Signed/phased permutation matrices: everything has finite order.
    Monomial,
    /// As `Borel`, but every meridian is unipotent.
    Unipotent,
}

#[derive(Debug, Clone, Copy)]
pub struct InstanceShape {
    pub max_genus: usize,
    pub max_punctures: usize,
    pub max_rank: usize,
    pub max_group_order: usize,
    pub family: MonodromyFamily,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape {
            max_genus: 2,
            max_punctures: 4,
            max_rank: 4,
            max_group_order: 24,
            family: MonodromyFamily::Borel,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance<S> {
    pub system: LocalSystem<S>,
    pub cover: CoveringDatum,
}

fn small_int(rng: &mut Rng8, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

fn unit_phase<S: Scalar>(rng: &mut Rng8) -> S {
    match rng.gen_range(0..4) {
        0 => S::one(),
        1 => -S::one(),
        2 => S::imag_unit(),
        _ => -S::imag_unit(),
    }
}

fn nonzero_diag<S: Scalar>(rng: &mut Rng8) -> S {
    match rng.gen_range(0..6) {
        0 => S::from_i64(2),
        1 => S::from_i64(-2),
        2 => S::from_ratio(Ratio::new(1, 2)),
        _ => unit_phase(rng),
    }
}

fn upper_unitriangular<S: Scalar>(rng: &mut Rng8, n: usize, bound: i64) -> Matrix<S> {
    Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => S::one(),
        std::cmp::Ordering::Less => S::from_i64(small_int(rng, bound)),
        std::cmp::Ordering::Greater => S::zero(),
    })
}

fn upper_triangular<S: Scalar>(rng: &mut Rng8, n: usize) -> Matrix<S> {
    let d: Vec<S> = (0..n).map(|_| nonzero_diag(rng)).collect();
    Matrix::diagonal(&d).mul(&upper_unitriangular(rng, n, 2))
}

fn monomial<S: Scalar>(rng: &mut Rng8, n: usize) -> Matrix<S> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = Matrix::zeros(n, n);
    for (c, &r) in perm.iter().enumerate() {
        m[(r, c)] = unit_phase(rng);
    }
    m
}

/// Product of elementary integer matrices: determinant 1, integer inverse.
pub fn unimodular<S: Scalar>(rng: &mut Rng8, n: usize) -> Matrix<S> {
    let lower = upper_unitriangular::<S>(rng, n, 1).transpose();
    lower.mul(&upper_unitriangular(rng, n, 1))
}

/// Monodromy matrices satisfying the surface relation; the last meridian (or `B_g` when `s = 0`) is solved for.
pub fn random_monodromy<S: Scalar>(
    rng: &mut Rng8,
    surface: &SurfaceData,
    n: usize,
    family: MonodromyFamily,
    cfg: &NumConfig,
) -> Result<LocalSystem<S>> {
    let g = surface.genus;
    let s = surface.num_punctures();
    let gen_matrix = |rng: &mut Rng8| -> Matrix<S> {
        match family {
            MonodromyFamily::Monomial => monomial(rng, n),
            _ => upper_triangular(rng, n),
        }
    };
    let mut mats: Vec<Matrix<S>> = Vec::with_capacity(2 * g + s);
    for _ in 0..g {
        let a = gen_matrix(rng);
        let b = if s == 0 {
            // commuting pair so the commutator vanishes
            a.pow(rng.gen_range(0..3))
        } else {
            gen_matrix(rng)
        };
        mats.push(a);
        mats.push(b);
    }
    let tol = cfg.tolerance;
    let mut acc = Matrix::identity(n);
    for i in 0..g {
        let (a, b) = (&mats[2 * i], &mats[2 * i + 1]);
        let comm = a.mul(b).mul(&a.inverse(tol)?).mul(&b.inverse(tol)?);
        acc = acc.mul(&comm);
    }
    for _ in 0..s.saturating_sub(1) {
        let t = match family {
            MonodromyFamily::Monomial => monomial(rng, n),
            MonodromyFamily::Borel => {
                let d: Vec<S> = (0..n).map(|_| unit_phase(rng)).collect();
                Matrix::diagonal(&d).mul(&upper_unitriangular(rng, n, 2))
            }
            MonodromyFamily::Unipotent => upper_unitriangular(rng, n, 2),
        };
        acc = acc.mul(&t);
        mats.push(t);
    }
    if s >= 1 {
        mats.push(acc.inverse(tol)?);
    }
    let p = unimodular::<S>(rng, n);
    let pinv = p.inverse(tol)?;
    let conj: Vec<Matrix<S>> = mats.iter().map(|m| p.mul(m).mul(&pinv)).collect();
    LocalSystem::new(surface.clone(), conj, cfg)
}

/// Random images generating `group` with the relation holding; `None` if none found.
pub fn random_images(
    rng: &mut Rng8,
    surface: &SurfaceData,
    group: &FiniteGroup,
) -> Option<Vec<GroupElement>> {
    let ngen = surface.num_generators();
    let s = surface.num_punctures();
    let order = group.order();
    if order == 1 {
        return Some(vec![group.identity(); ngen]);
    }
    if ngen == 0 || (s == 0 && !group.is_abelian()) {
        return None;
    }
    for _ in 0..400 {
        let mut images: Vec<GroupElement> = (0..ngen)
            .map(|_| GroupElement(rng.gen_range(0..order)))
            .collect();
        if s >= 1 {
            let mut acc = group.identity();
            for i in 0..surface.genus {
                acc = group.mul(acc, group.commutator(images[2 * i], images[2 * i + 1]));
            }
            for p in 0..s - 1 {
                acc = group.mul(acc, images[surface.meridian_index(p)]);
            }
            images[ngen - 1] = group.inv(acc);
        }
        if group.is_generating(&images) {
            return Some(images);
        }
    }
    None
}

/// A random covering of `surface` by a catalog group of order at most `max_order` (trivial as fallback).
pub fn random_cover(rng: &mut Rng8, surface: &SurfaceData, max_order: usize) -> CoveringDatum {
    let names: Vec<&str> = CATALOG
        .iter()
        .copied()
        .filter(|name| {
            FiniteGroup::named(name)
                .map(|g| g.order() <= max_order)
                .unwrap_or(false)
        })
        .collect();
    for _ in 0..8 {
        let name = names.choose(rng).copied().unwrap_or("trivial");
        let group = FiniteGroup::named(name).expect("catalog group");
        if let Some(images) = random_images(rng, surface, &group) {
            return CoveringDatum::finite(surface.clone(), group, images);
        }
    }
    CoveringDatum::trivial(surface.clone())
}

pub fn random_instance<S: Scalar>(
    rng: &mut Rng8,
    shape: &InstanceShape,
    cfg: &NumConfig,
) -> Result<Instance<S>> {
    let genus = rng.gen_range(0..=shape.max_genus);
    let punctures = rng.gen_range(0..=shape.max_punctures);
    let surface = SurfaceData::new(genus, punctures);
    let n = rng.gen_range(1..=shape.max_rank);
    let system = random_monodromy(rng, &surface, n, shape.family, cfg)?;
    let cover = if shape.max_group_order <= 1 {
        CoveringDatum::trivial(surface)
    } else {
        random_cover(rng, &surface, shape.max_group_order)
    };
    Ok(Instance { system, cover })
}

/// Random nilpotent of dimension `n`: a random Jordan type conjugated by a unimodular matrix.
pub fn random_nilpotent<S: Scalar>(rng: &mut Rng8, n: usize) -> (Matrix<S>, Vec<usize>) {
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let b = rng.gen_range(1..=left);
        blocks.push(b);
        left -= b;
    }
    let mut j = Matrix::<S>::zeros(n, n);
    let mut off = 0;
    for &b in &blocks {
        for i in 0..b.saturating_sub(1) {
            j[(off + i, off + i + 1)] = S::one();
        }
        off += b;
    }
    let p = unimodular::<S>(rng, n);
    let pinv = p.inverse(0.0).expect("unimodular");
    blocks.sort_unstable_by(|a, b| b.cmp(a));
    (p.mul(&j).mul(&pinv), blocks)
}

fn random_group_ring_element<S: Scalar>(rng: &mut Rng8, order: usize, density: f64) -> Vec<S> {
    (0..order)
        .map(|_| {
            if rng.gen_bool(density) {
                S::from_i64(small_int(rng, 2))
            } else {
                S::zero()
            }
        })
        .collect()
}

fn random_group_ring_matrix<S: Scalar>(
    rng: &mut Rng8,
    group: &FiniteGroup,
    rows: usize,
    cols: usize,
) -> Matrix<S> {
    if rows == 0 || cols == 0 {
        // an empty grid does not remember its width
        return Matrix::zeros(rows * group.order(), cols * group.order());
    }
    let entries: Vec<Vec<Vec<S>>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| random_group_ring_element(rng, group.order(), 0.4))
                .collect()
        })
        .collect();
    group_ring_map(group, &entries)
}

/// Equivariant automorphism `I + strictly lower group-ring block matrix`.
fn random_equivariant_unit<S: Scalar>(
    rng: &mut Rng8,
    group: &FiniteGroup,
    m: usize,
) -> (Matrix<S>, Matrix<S>) {
    let n = group.order();
    let mut entries: Vec<Vec<Vec<S>>> = vec![vec![vec![S::zero(); n]; m]; m];
    for (r, row) in entries.iter_mut().enumerate() {
        for (c, elt) in row.iter_mut().enumerate() {
            if c < r {
                *elt = random_group_ring_element(rng, n, 0.3);
            } else if c == r {
                elt[group.identity().0] = S::one();
            }
        }
    }
    let u = group_ring_map(group, &entries);
    let uinv = u.inverse(0.0).expect("unitriangular");
    (u, uinv)
}

/// Random complex of free modules over degrees `0..len`: `C^i = Z ⊕ B ⊕ Y` with `d(z, b, y) = (0, M y, 0)`,
/// conjugated degreewise by equivariant automorphisms.
pub fn random_gamma_complex<S: Scalar>(
    rng: &mut Rng8,
    group: &FiniteGroup,
    len: usize,
    cfg: &NumConfig,
) -> GammaComplex<S> {
    let n = group.order();
    // (z, b, y) multiplicities per degree; b_0 = 0 and y_{len-1} = 0
    let mut parts: Vec<[usize; 3]> = (0..len)
        .map(|_| {
            [
                rng.gen_range(0..=1),
                rng.gen_range(0..=1),
                rng.gen_range(0..=1),
            ]
        })
        .collect();
    parts[0][1] = 0;
    parts[len - 1][2] = 0;
    let total = |p: &[usize; 3]| p.iter().sum::<usize>();
    let units: Vec<(Matrix<S>, Matrix<S>)> = parts
        .iter()
        .map(|p| random_equivariant_unit(rng, group, total(p)))
        .collect();
    let mut diffs = Vec::new();
    for i in 0..len - 1 {
        let (src, dst) = (parts[i], parts[i + 1]);
        let m = random_group_ring_matrix::<S>(rng, group, dst[1], src[2]);
        let mut d = Matrix::<S>::zeros(total(&dst) * n, total(&src) * n);
        let (row0, col0) = (dst[0] * n, (src[0] + src[1]) * n);
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                d[(row0 + r, col0 + c)] = m[(r, c)].clone();
            }
        }
        diffs.push(units[i + 1].0.mul(&d).mul(&units[i].1));
    }
    let modules = parts
        .iter()
        .map(|p| GammaModule::full(group, total(p)))
        .collect();
    GammaComplex::new(group, 0, modules, diffs, cfg).expect("random complex satisfies d^2 = 0")
}

/// Random equivariant maps `h_i: C^i -> D^{i-1}`.
pub fn random_homotopy<S: Scalar>(
    rng: &mut Rng8,
    c: &GammaComplex<S>,
    d: &GammaComplex<S>,
) -> Vec<Option<Matrix<S>>> {
    (0..c.len())
        .map(|i| {
            if i == 0 {
                return None;
            }
            let (src, dst) = (c.modules[i].multiplicity, d.modules[i - 1].multiplicity);
            Some(random_group_ring_matrix(rng, &c.group, dst, src))
        })
        .collect()
}

/// A chain map `C0 -> C0 ⊕ D` of the form `lambda * inclusion + dh + hd`, returned with its target.
pub fn random_chain_map<S: Scalar>(
    rng: &mut Rng8,
    c0: &GammaComplex<S>,
    cfg: &NumConfig,
) -> (GammaComplex<S>, Vec<Matrix<S>>) {
    let group = &c0.group;
    let n = group.order();
    let extra = random_gamma_complex::<S>(rng, group, c0.len(), cfg);
    let modules: Vec<GammaModule<S>> = c0
        .modules
        .iter()
        .zip(&extra.modules)
        .map(|(a, b)| a.direct_sum(b))
        .collect();
    let diffs: Vec<Matrix<S>> = c0
        .differentials
        .iter()
        .zip(&extra.differentials)
        .map(|(a, b)| Matrix::block_diag(&[a, b]))
        .collect();
    let c1 =
        GammaComplex::new(group, c0.start, modules, diffs, cfg).expect("direct sum of complexes");
    let lambda = S::from_i64(rng.gen_range(0..=2));
    let h = random_homotopy(rng, c0, &c1);
    let f = (0..c0.len())
        .map(|i| {
            let (rows, cols) = (
                c1.modules[i].multiplicity * n,
                c0.modules[i].multiplicity * n,
            );
            let mut fi = Matrix::<S>::zeros(rows, cols);
            for k in 0..cols {
                fi[(k, k)] = lambda.clone();
            }
            if let (Some(hi), Some(d1)) = (
                &h[i],
                i.checked_sub(1).and_then(|j| c1.differentials.get(j)),
            ) {
                fi = fi.add(&d1.mul(hi));
            }
            if let (Some(Some(hn)), Some(d0)) = (h.get(i + 1), c0.differentials.get(i)) {
                fi = fi.add(&hn.mul(d0));
            }
            fi
        })
        .collect();
    (c1, f)
}
