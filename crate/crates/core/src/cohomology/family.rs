//! Twisted cohomology over the character torus of `Z^d`: a sampled model of dimension over the group von Neumann algebra.

use num::rational::{BigRational, Ratio};
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::global::global_h;
use super::LocalSystem;
use crate::error::{Error, Result};
use crate::numeric::{NumConfig, Scalar};
use crate::surface::{CoverGroup, CoveringDatum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterSample {
    /// Character values `z_j` on the basis of `Z^d`.
    pub coords: Vec<String>,
    pub dims: [usize; 3],
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub d: usize,
    pub samples: usize,
    pub seed: u64,
    /// Coordinatewise minimum over the random samples.
    pub generic: [usize; 3],
    pub trivial_character: CharacterSample,
    /// Sampled characters (the trivial one included) whose dims exceed `generic` somewhere.
    pub jumps: Vec<CharacterSample>,
    pub von_neumann: [usize; 3],
}

/// A random unit-modulus scalar: a rational point on the circle in exact mode, `e^{2 pi i theta}` in float mode.
fn random_unit<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    if S::is_exact() {
        // ((1 - t^2) + 2 t i) / (1 + t^2)
        let t = BigRational::new(
            BigInt::from(rng.gen_range(-97i64..=97)),
            BigInt::from(rng.gen_range(1i64..=53)),
        );
        let one = BigRational::from_integer(1.into());
        let two = BigRational::from_integer(2.into());
        let den = &one + &t * &t;
        S::from_big(&((&one - &t * &t) / &den), &(&two * &t / &den))
    } else {
        let theta: f64 = rng.gen();
        S::from_c64(num::complex::Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * theta,
        ))
        .unwrap()
    }
}

fn character_value<S: Scalar>(z: &[S], v: &[i64]) -> S {
    let mut acc = S::one();
    for (zj, &e) in z.iter().zip(v) {
        let base = if e >= 0 {
            zj.clone()
        } else {
            S::one() / zj.clone()
        };
        for _ in 0..e.unsigned_abs() {
            acc = acc * base.clone();
        }
    }
    acc
}

fn evaluate<S: Scalar>(
    sys: &LocalSystem<S>,
    images: &[Vec<i64>],
    z: &[S],
    cfg: &NumConfig,
) -> Result<[usize; 3]> {
    let factors: Vec<S> = images.iter().map(|v| character_value(z, v)).collect();
    let h = global_h(&sys.twisted(&factors), cfg)?;
    let to_usize = |q: Ratio<i64>| q.to_integer() as usize;
    Ok([to_usize(h.h0), to_usize(h.h1), to_usize(h.h2)])
}

pub fn character_family<S: Scalar>(
    sys: &LocalSystem<S>,
    cover: &CoveringDatum,
    samples: usize,
    seed: u64,
    cfg: &NumConfig,
) -> Result<FamilyReport> {
    let CoverGroup::Abelian { rank, images } = &cover.group else {
        return Err(Error::Unsupported(
            "character families need an abelian cover Z^d".into(),
        ));
    };
    cover.validate()?;
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "character family needs at least one sample".into(),
        ));
    }
    let d = rank.d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let render = |z: &[S]| z.iter().map(Scalar::render).collect::<Vec<_>>();
    let ones = vec![S::one(); d];
    let trivial_character = CharacterSample {
        coords: render(&ones),
        dims: evaluate(sys, images, &ones, cfg)?,
        trivial: true,
    };
    let mut evaluated = Vec::with_capacity(samples);
    for _ in 0..samples {
        let z: Vec<S> = (0..d).map(|_| random_unit(&mut rng)).collect();
        evaluated.push(CharacterSample {
            coords: render(&z),
            dims: evaluate(sys, images, &z, cfg)?,
            trivial: false,
        });
    }
    let mut generic = [usize::MAX; 3];
    for s in &evaluated {
        for k in 0..3 {
            generic[k] = generic[k].min(s.dims[k]);
        }
    }
    let exceeds = |s: &CharacterSample| (0..3).any(|k| s.dims[k] > generic[k]);
    let mut jumps: Vec<CharacterSample> = Vec::new();
    if exceeds(&trivial_character) {
        jumps.push(trivial_character.clone());
    }
    jumps.extend(evaluated.iter().filter(|s| exceeds(s)).cloned());
    Ok(FamilyReport {
        d,
        samples,
        seed,
        generic,
        trivial_character,
        jumps,
        von_neumann: generic,
    })
}
