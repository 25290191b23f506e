//! Finite groups by multiplication table, plus a catalog of small groups built from permutations.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Matrix, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

/// Group used for abelian families: `Z^d`, handled by characters rather than tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianRank {
    pub d: usize,
}

impl FiniteGroup {
    /// Validates a row-major Cayley table (`table[a][b] = a*b`, 0-based).
    pub fn from_cayley(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::BadGroup("empty table".into()));
        }
        let is_perm = |line: &mut dyn Iterator<Item = usize>| {
            let mut seen = vec![false; n];
            for x in line {
                if x >= n || seen[x] {
                    return false;
                }
                seen[x] = true;
            }
            true
        };
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadGroup(format!(
                    "row {r} has length {}, expected {n}",
                    row.len()
                )));
            }
            if !is_perm(&mut row.iter().copied()) {
                return Err(Error::BadGroup(format!("row {r} is not a permutation")));
            }
        }
        for c in 0..n {
            if !is_perm(&mut (0..n).map(|r| table[r][c])) {
                return Err(Error::BadGroup(format!("column {c} is not a permutation")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::BadGroup("no identity element".into()))?;
        let assoc = |a: usize, b: usize, c: usize| table[table[a][b]][c] == table[a][table[b][c]];
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(Error::BadGroup(format!(
                                "not associative on ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..20_000 {
                let (a, b, c) = (
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                );
                if !assoc(a, b, c) {
                    return Err(Error::BadGroup(format!(
                        "not associative on ({a}, {b}, {c})"
                    )));
                }
            }
        }
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == identity).unwrap())
            .collect();
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
        })
    }

    /// Closure of permutation generators in one-line notation; `(p*q)(x) = p(q(x))`.
    pub fn from_perms(gens: &[Vec<usize>]) -> Result<Self> {
        let degree = gens.first().map_or(1, Vec::len);
        for g in gens {
            let set: BTreeSet<_> = g.iter().copied().collect();
            if g.len() != degree || set.len() != degree || set.iter().any(|&x| x >= degree) {
                return Err(Error::BadGroup(format!(
                    "`{g:?}` is not a permutation of 0..{degree}"
                )));
            }
        }
        let compose =
            |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&x| p[x]).collect() };
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let next = compose(g, &elements[i]);
                if !index.contains_key(&next) {
                    if elements.len() >= 5040 {
                        return Err(Error::BadGroup("permutation group too large".into()));
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let table = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        Self::from_cayley(table)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::from_cayley(table).expect("cyclic table is a group")
    }

    /// Small groups by name: `trivial`, `Z<n>`, `V4`, `S3`, `S4`, `A4`, `D<n>` (order `2n`).
    pub fn named(name: &str) -> Result<Self> {
        let cycle = |n: usize| -> Vec<usize> { (0..n).map(|i| (i + 1) % n).collect() };
        let swap = |n: usize, a: usize, b: usize| -> Vec<usize> {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(a, b);
            p
        };
        match name {
            "trivial" | "1" => return Ok(Self::trivial()),
            "V4" => return Self::from_perms(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
            "S3" => return Self::from_perms(&[swap(3, 0, 1), cycle(3)]),
            "S4" => return Self::from_perms(&[swap(4, 0, 1), cycle(4)]),
            "A4" => return Self::from_perms(&[vec![1, 2, 0, 3], vec![0, 2, 3, 1]]),
            _ => {}
        }
        let parse_n = |rest: &str| rest.parse::<usize>().ok().filter(|&n| n >= 1);
        if let Some(n) = name.strip_prefix('Z').and_then(parse_n) {
            return Ok(Self::cyclic(n));
        }
        if let Some(n) = name.strip_prefix('D').and_then(parse_n) {
            if n >= 3 {
                let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
                return Self::from_perms(&[cycle(n), reflection]);
            }
        }
        Err(Error::BadGroup(format!("unknown group name `{name}`")))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(self.identity)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order()).map(GroupElement)
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        g.0 < self.order()
    }

    pub fn mul(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement(self.table[a.0][b.0])
    }

    pub fn inv(&self, a: GroupElement) -> GroupElement {
        GroupElement(self.inverses[a.0])
    }

    pub fn pow(&self, a: GroupElement, k: usize) -> GroupElement {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    /// `a b a^-1 b^-1`
    pub fn commutator(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        let ab = self.mul(a, b);
        self.mul(self.mul(ab, self.inv(a)), self.inv(b))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn element_order(&self, g: GroupElement) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Cyclic subgroup generated by `h`, in power order.
    pub fn cyclic_subgroup(&self, h: GroupElement) -> Vec<GroupElement> {
        (0..self.element_order(h)).map(|k| self.pow(h, k)).collect()
    }

    /// Left cosets `gH` of `H = <h>`, each sorted, listed by smallest element.
    pub fn cosets(&self, h: GroupElement) -> Vec<Vec<GroupElement>> {
        let sub = self.cyclic_subgroup(h);
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in self.elements() {
            if seen[g.0] {
                continue;
            }
            let mut coset: Vec<_> = sub.iter().map(|&s| self.mul(g, s)).collect();
            coset.sort();
            for c in &coset {
                seen[c.0] = true;
            }
            out.push(coset);
        }
        out
    }

    /// Permutation matrix of left translation: `L_g e_h = e_{gh}`.
    pub fn regular_rep<S: Scalar>(&self, g: GroupElement) -> Matrix<S> {
        let n = self.order();
        let mut m = Matrix::zeros(n, n);
        for h in 0..n {
            m[(self.table[g.0][h], h)] = S::one();
        }
        m
    }

    /// Permutation matrix of right translation by `g^-1`, `R_g e_h = e_{h g^-1}`; commutes with every `L`.
    pub fn right_regular_rep<S: Scalar>(&self, g: GroupElement) -> Matrix<S> {
        let n = self.order();
        let gi = self.inverses[g.0];
        let mut m = Matrix::zeros(n, n);
        for h in 0..n {
            m[(self.table[h][gi], h)] = S::one();
        }
        m
    }

    pub fn is_generating(&self, elements: &[GroupElement]) -> bool {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for g in elements {
                let y = self.table[x][g.0];
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.order()
    }
}

/// Names accepted by [`FiniteGroup::named`] that the random instance generators draw from.
pub const CATALOG: &[&str] = &[
    "trivial", "Z2", "Z3", "Z4", "Z6", "V4", "S3", "D4", "A4", "D6", "Z12", "S4",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::GaussRat;

    fn s3() -> FiniteGroup {
        FiniteGroup::named("S3").unwrap()
    }

    fn find(g: &FiniteGroup, order: usize) -> GroupElement {
        g.elements().find(|&x| g.element_order(x) == order).unwrap()
    }

    #[test]
    fn catalog_orders() {
        let expected = [1, 2, 3, 4, 6, 4, 6, 8, 12, 12, 12, 24];
        for (name, &n) in CATALOG.iter().zip(&expected) {
            assert_eq!(FiniteGroup::named(name).unwrap().order(), n, "{name}");
        }
        assert!(!FiniteGroup::named("S3").unwrap().is_abelian());
        assert!(FiniteGroup::named("V4").unwrap().is_abelian());
        assert!(FiniteGroup::named("Q8").is_err());
    }

    #[test]
    fn element_orders() {
        let g = s3();
        assert_eq!(g.element_order(g.identity()), 1);
        assert_eq!(g.elements().filter(|&x| g.element_order(x) == 2).count(), 3);
        assert_eq!(g.elements().filter(|&x| g.element_order(x) == 3).count(), 2);
    }

    #[test]
    fn coset_counts() {
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.cosets(GroupElement(2)).len(), 2);
        assert_eq!(z4.cosets(z4.identity()).len(), 4);
        let g = s3();
        assert_eq!(g.cosets(find(&g, 2)).len(), 3);
    }

    #[test]
    fn regular_rep_examples() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(
            z2.regular_rep::<GaussRat>(GroupElement(1)),
            Matrix::from_i64(&[&[0, 1], &[1, 0]])
        );
        assert!(z2.regular_rep::<GaussRat>(z2.identity()).is_identity(0.0));
        let g = s3();
        for x in g.elements() {
            let tr = g.regular_rep::<GaussRat>(x).trace();
            let want = if x == g.identity() { 6 } else { 0 };
            assert_eq!(tr, GaussRat::from_i64(want));
        }
    }

    #[test]
    fn generation() {
        let g = s3();
        assert!(g.is_generating(&[find(&g, 2), find(&g, 3)]));
        assert!(!FiniteGroup::cyclic(4).is_generating(&[GroupElement(2)]));
        assert!(g.is_generating(&g.elements().collect::<Vec<_>>()));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_cayley(vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_cayley(vec![vec![0, 1], vec![1]]).is_err());
        // Latin square without associativity
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_cayley(t).is_err());
    }
}
