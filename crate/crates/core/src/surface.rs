//! Punctured surfaces, their standard presentation, and branched covers defined by finite quotients.
//!
//! Generators are ordered `a1, b1, ..., ag, bg, c1, ..., cs` with the single relation
//! `[a1,b1]...[ag,bg] c1...cs = 1`, where `[a,b] = a b a^-1 b^-1` and `cp` is the meridian of puncture `p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianRank, FiniteGroup, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceData {
    pub genus: usize,
    pub punctures: Vec<String>,
}

/// A letter of the relation word: generator index and whether it appears inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl SurfaceData {
    pub fn new(genus: usize, punctures: usize) -> Self {
        SurfaceData {
            genus,
            punctures: (1..=punctures).map(|p| format!("p{p}")).collect(),
        }
    }

    pub fn num_punctures(&self) -> usize {
        self.punctures.len()
    }

    pub fn num_generators(&self) -> usize {
        2 * self.genus + self.punctures.len()
    }

    /// `chi(M) = 2 - 2g - s`
    pub fn euler_char_open(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures.len() as i64
    }

    /// `chi(X) = 2 - 2g`
    pub fn euler_char_closed(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    /// Index of the meridian `c_p` among the generators.
    pub fn meridian_index(&self, p: usize) -> usize {
        2 * self.genus + p
    }

    pub fn generator_name(&self, idx: usize) -> String {
        if idx < 2 * self.genus {
            format!(
                "{}{}",
                if idx.is_multiple_of(2) { 'a' } else { 'b' },
                idx / 2 + 1
            )
        } else {
            format!("c{}", idx - 2 * self.genus + 1)
        }
    }

    pub fn relation_word(&self) -> Vec<Letter> {
        let mut word = Vec::with_capacity(4 * self.genus + self.punctures.len());
        for i in 0..self.genus {
            let (a, b) = (2 * i, 2 * i + 1);
            for (generator, inverse) in [(a, false), (b, false), (a, true), (b, true)] {
                word.push(Letter { generator, inverse });
            }
        }
        for p in 0..self.punctures.len() {
            word.push(Letter {
                generator: self.meridian_index(p),
                inverse: false,
            });
        }
        word
    }

    /// Generator reported when the relation fails: the last one in the word, whose value the others determine.
    pub fn relation_anchor(&self) -> String {
        match self.num_generators() {
            0 => "(none)".into(),
            n => self.generator_name(n - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverGroup {
    Finite {
        group: FiniteGroup,
        images: Vec<GroupElement>,
    },
    Abelian {
        rank: AbelianRank,
        images: Vec<Vec<i64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringDatum {
    pub base: SurfaceData,
    pub group: CoverGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverInvariants {
    /// Order of the stabilizer `n_p = ord(phi(c_p))` per puncture.
    pub branching: Vec<usize>,
    /// `s~ = sum |G| / n_p`; absent for infinite groups.
    pub punctures_upstairs: Option<usize>,
    pub euler_char_closed: Option<i64>,
    pub genus: Option<usize>,
}

impl CoveringDatum {
    pub fn finite(base: SurfaceData, group: FiniteGroup, images: Vec<GroupElement>) -> Self {
        CoveringDatum {
            base,
            group: CoverGroup::Finite { group, images },
        }
    }

    pub fn abelian(base: SurfaceData, d: usize, images: Vec<Vec<i64>>) -> Self {
        CoveringDatum {
            base,
            group: CoverGroup::Abelian {
                rank: AbelianRank { d },
                images,
            },
        }
    }

    pub fn trivial(base: SurfaceData) -> Self {
        let n = base.num_generators();
        let g = FiniteGroup::trivial();
        let id = g.identity();
        Self::finite(base, g, vec![id; n])
    }

    pub fn finite_group(&self) -> Option<(&FiniteGroup, &[GroupElement])> {
        match &self.group {
            CoverGroup::Finite { group, images } => Some((group, images)),
            CoverGroup::Abelian { .. } => None,
        }
    }

    pub fn group_order(&self) -> Option<usize> {
        self.finite_group().map(|(g, _)| g.order())
    }

    /// Checks relation, generation and integrality, returning the branched-cover numerology.
    pub fn validate(&self) -> Result<CoverInvariants> {
        let base = &self.base;
        let ngen = base.num_generators();
        match &self.group {
            CoverGroup::Finite { group, images } => {
                if images.len() != ngen {
                    return Err(Error::Input(format!(
                        "cover needs {ngen} images, got {}",
                        images.len()
                    )));
                }
                if let Some(bad) = images.iter().position(|&g| !group.contains(g)) {
                    return Err(Error::Input(format!(
                        "image of {} is not an element of the group",
                        base.generator_name(bad)
                    )));
                }
                let mut acc = group.identity();
                for letter in base.relation_word() {
                    let g = images[letter.generator];
                    acc = group.mul(acc, if letter.inverse { group.inv(g) } else { g });
                }
                if acc != group.identity() {
                    return Err(Error::RelationViolated(base.relation_anchor()));
                }
                if !group.is_generating(images) {
                    return Err(Error::NonGenerating);
                }
                let order = group.order();
                let branching: Vec<usize> = (0..base.num_punctures())
                    .map(|p| group.element_order(images[base.meridian_index(p)]))
                    .collect();
                let upstairs: usize = branching.iter().map(|&n| order / n).sum();
                let chi = order as i64 * base.euler_char_open() + upstairs as i64;
                if chi % 2 != 0 || chi > 2 {
                    return Err(Error::NonIntegralGenus(chi));
                }
                Ok(CoverInvariants {
                    branching,
                    punctures_upstairs: Some(upstairs),
                    euler_char_closed: Some(chi),
                    genus: Some((1 - chi / 2) as usize),
                })
            }
            CoverGroup::Abelian { rank, images } => {
                if images.len() != ngen {
                    return Err(Error::Input(format!(
                        "cover needs {ngen} images, got {}",
                        images.len()
                    )));
                }
                if let Some(bad) = images.iter().position(|v| v.len() != rank.d) {
                    return Err(Error::Input(format!(
                        "image of {} must have {} coordinates",
                        base.generator_name(bad),
                        rank.d
                    )));
                }
                for p in 0..base.num_punctures() {
                    if images[base.meridian_index(p)].iter().any(|&x| x != 0) {
                        return Err(Error::Unsupported(format!(
                            "meridian c{} must map to 0 in a torsion-free group",
                            p + 1
                        )));
                    }
                }
                if !generates_lattice(rank.d, images) {
                    return Err(Error::NonGenerating);
                }
                Ok(CoverInvariants {
                    branching: vec![1; base.num_punctures()],
                    punctures_upstairs: None,
                    euler_char_closed: None,
                    genus: None,
                })
            }
        }
    }
}

/// True iff the integer vectors span `Z^d` (row reduction over the integers).
pub fn generates_lattice(d: usize, vectors: &[Vec<i64>]) -> bool {
    let mut rows: Vec<Vec<i64>> = vectors
        .iter()
        .filter(|v| v.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    for col in 0..d {
        // Euclid on column `col` among rows at index >= col
        loop {
            let live: Vec<usize> = (col..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if live.len() <= 1 {
                break;
            }
            let pivot = *live.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
            for &r in &live {
                if r != pivot {
                    let q = rows[r][col] / rows[pivot][col];
                    let p = rows[pivot].clone();
                    for (x, y) in rows[r].iter_mut().zip(&p) {
                        *x -= q * y;
                    }
                }
            }
        }
        let Some(r) = (col..rows.len()).find(|&r| rows[r][col] != 0) else {
            return false;
        };
        if rows[r][col].abs() != 1 {
            return false;
        }
        rows.swap(col, r);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_double_cover() {
        let z2 = FiniteGroup::cyclic(2);
        let c = CoveringDatum::finite(
            SurfaceData::new(0, 3),
            z2,
            vec![GroupElement(1), GroupElement(1), GroupElement(0)],
        );
        let inv = c.validate().unwrap();
        assert_eq!(inv.branching, vec![2, 2, 1]);
        assert_eq!(inv.punctures_upstairs, Some(4));
        assert_eq!(inv.euler_char_closed, Some(2));
        assert_eq!(inv.genus, Some(0));
    }

    #[test]
    fn trivial_cover_keeps_chi() {
        let base = SurfaceData::new(2, 3);
        let inv = CoveringDatum::trivial(base.clone()).validate().unwrap();
        assert_eq!(inv.branching, vec![1, 1, 1]);
        assert_eq!(inv.euler_char_closed, Some(base.euler_char_closed()));
    }

    #[test]
    fn torus_over_integers() {
        let c = CoveringDatum::abelian(SurfaceData::new(1, 0), 1, vec![vec![1], vec![0]]);
        let inv = c.validate().unwrap();
        assert!(inv.branching.is_empty());
        assert_eq!(inv.genus, None);
        let bad = CoveringDatum::abelian(SurfaceData::new(1, 0), 1, vec![vec![2], vec![0]]);
        assert!(matches!(bad.validate(), Err(Error::NonGenerating)));
    }

    #[test]
    fn relation_and_generation_errors() {
        let z2 = FiniteGroup::cyclic(2);
        let c = CoveringDatum::finite(
            SurfaceData::new(0, 2),
            z2.clone(),
            vec![GroupElement(1), GroupElement(0)],
        );
        match c.validate() {
            Err(Error::RelationViolated(g)) => assert_eq!(g, "c2"),
            other => panic!("{other:?}"),
        }
        let c = CoveringDatum::finite(
            SurfaceData::new(0, 2),
            z2,
            vec![GroupElement(0), GroupElement(0)],
        );
        assert!(matches!(c.validate(), Err(Error::NonGenerating)));
    }

    #[test]
    fn relation_word_layout() {
        let s = SurfaceData::new(1, 2);
        let names: Vec<_> = s
            .relation_word()
            .iter()
            .map(|l| (s.generator_name(l.generator), l.inverse))
            .collect();
        assert_eq!(names[2], ("a1".to_string(), true));
        assert_eq!(names[5], ("c2".to_string(), false));
    }
}
