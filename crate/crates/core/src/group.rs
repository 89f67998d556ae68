//! Permutation groups and abstract group tables at desk scale.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::arith::factorize;
use crate::error::AlgebraError;
use crate::perm::Perm;

/// Largest group order accepted by [`GroupTable::is_dedekind`].
pub const DEDEKIND_BOUND: usize = 512;

/// A finite permutation group given by its full element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    /// Sorted lexicographically by image array.
    elements: Vec<Perm>,
    generators: Vec<Perm>,
}

impl PermGroup {
    /// Closure of `generators` under composition, by breadth-first search.
    pub fn generate(generators: Vec<Perm>, degree: usize) -> Result<Self, AlgebraError> {
        for (index, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(AlgebraError::DegreeMismatch { index, expected: degree, found: g.degree() });
            }
        }
        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort();
        Ok(PermGroup { degree, elements, generators })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Orbit of `x` under the group, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut stack = vec![x];
        seen[x] = true;
        while let Some(y) = stack.pop() {
            for g in &self.generators {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
        (0..self.degree).filter(|&i| seen[i]).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    pub fn is_regular(&self) -> bool {
        self.is_transitive() && self.order() == self.degree
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// Abstract multiplication table, element `i` being `self.elements()[i]`.
    pub fn table(&self) -> GroupTable {
        let index: HashMap<&Perm, usize> =
            self.elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = self.order();
        let mut mul = Vec::with_capacity(n * n);
        for a in &self.elements {
            for b in &self.elements {
                mul.push(index[&a.compose(b)]);
            }
        }
        let identity = index[&Perm::identity(self.degree)];
        GroupTable { n, mul, identity }
    }

    pub fn is_zgroup(&self) -> bool {
        self.table().is_zgroup()
    }
}

/// An abstract finite group on `{0..n-1}` as a Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<usize>,
    identity: usize,
}

impl GroupTable {
    /// Checks closure, associativity, identity and inverses.
    pub fn new(n: usize, mul: Vec<usize>) -> Result<Self, AlgebraError> {
        if mul.len() != n * n || mul.iter().any(|&x| x >= n) {
            return Err(AlgebraError::InvalidTable("table is not n×n over {0..n-1}".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e * n + x] == x && mul[x * n + e] == x))
            .ok_or_else(|| AlgebraError::InvalidTable("no identity".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| mul[a * n + b] == identity) {
                return Err(AlgebraError::InvalidTable(format!("{a} has no inverse")));
            }
            for b in 0..n {
                let ab = mul[a * n + b];
                for c in 0..n {
                    if mul[ab * n + c] != mul[a * n + mul[b * n + c]] {
                        return Err(AlgebraError::InvalidTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(GroupTable { n, mul, identity })
    }

    /// Callers guarantee the group axioms.
    pub(crate) fn from_trusted(n: usize, mul: Vec<usize>, identity: usize) -> Self {
        GroupTable { n, mul, identity }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.n).find(|&b| self.mul(a, b) == self.identity).expect("group element without inverse")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Cyclic subgroup generated by `a`, as a membership mask.
    fn cyclic_subgroup(&self, a: usize) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        let mut x = self.identity;
        loop {
            mask[x] = true;
            x = self.mul(x, a);
            if x == self.identity {
                return mask;
            }
        }
    }

    /// Subgroup generated by `gens`, as a membership mask.
    pub fn subgroup_mask(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        mask[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    stack.push(y);
                }
            }
        }
        mask
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Every Sylow subgroup is cyclic: for each prime power `p^e` exactly
    /// dividing the order, some element has order `p^e`.
    pub fn is_zgroup(&self) -> bool {
        let orders: HashSet<usize> = (0..self.n).map(|a| self.element_order(a)).collect();
        factorize(self.n as u64)
            .into_iter()
            .all(|(p, e)| orders.contains(&(p.pow(e) as usize)))
    }

    /// Every subgroup is normal; checked on cyclic subgroups.
    pub fn is_dedekind(&self) -> Result<bool, AlgebraError> {
        if self.n > DEDEKIND_BOUND {
            return Err(AlgebraError::TooLarge { order: self.n, bound: DEDEKIND_BOUND });
        }
        let inverses: Vec<usize> = (0..self.n).map(|a| self.inverse(a)).collect();
        for g in 0..self.n {
            let sub = self.cyclic_subgroup(g);
            for h in 0..self.n {
                if !sub[self.mul(self.mul(h, g), inverses[h])] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// A small generating set chosen greedily, largest element orders first.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (0..self.n).collect();
        let orders: Vec<usize> = (0..self.n).map(|a| self.element_order(a)).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(orders[a]), a));
        let mut gens = Vec::new();
        let mut mask = self.subgroup_mask(&gens);
        for a in by_order {
            if !mask[a] {
                gens.push(a);
                mask = self.subgroup_mask(&gens);
            }
        }
        gens
    }

    /// An isomorphism `self → other` as an image array, if one exists.
    pub fn find_isomorphism(&self, other: &GroupTable) -> Option<Vec<usize>> {
        if self.n != other.n {
            return None;
        }
        let src_orders: Vec<usize> = (0..self.n).map(|a| self.element_order(a)).collect();
        let dst_orders: Vec<usize> = (0..other.n).map(|a| other.element_order(a)).collect();
        {
            let mut a = src_orders.clone();
            let mut b = dst_orders.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return None;
            }
        }
        let gens = self.generating_set();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| (0..other.n).filter(|&h| dst_orders[h] == src_orders[g]).collect())
            .collect();
        let mut choice = vec![0usize; gens.len()];
        self.search_generator_images(other, &gens, &candidates, &mut choice, 0)
    }

    fn search_generator_images(
        &self,
        other: &GroupTable,
        gens: &[usize],
        candidates: &[Vec<usize>],
        choice: &mut Vec<usize>,
        depth: usize,
    ) -> Option<Vec<usize>> {
        if depth == gens.len() {
            let images: Vec<usize> = choice.clone();
            return self.extend_homomorphism(other, gens, &images);
        }
        for &c in &candidates[depth] {
            choice[depth] = c;
            if let Some(phi) = self.search_generator_images(other, gens, candidates, choice, depth + 1) {
                return Some(phi);
            }
        }
        None
    }

    /// Extends `gens[i] ↦ images[i]` along right multiplication; `None` if
    /// the assignment is inconsistent or not bijective.
    fn extend_homomorphism(&self, other: &GroupTable, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        const UNSET: usize = usize::MAX;
        let mut phi = vec![UNSET; self.n];
        let mut used = vec![false; other.n];
        phi[self.identity] = other.identity;
        used[other.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &h) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let target = other.mul(phi[x], h);
                if phi[y] == UNSET {
                    if used[target] {
                        return None;
                    }
                    phi[y] = target;
                    used[target] = true;
                    queue.push_back(y);
                } else if phi[y] != target {
                    return None;
                }
            }
        }
        phi.iter().all(|&v| v != UNSET).then_some(phi)
    }
}

/// Closure of `generators` as a permutation group of the given degree.
pub fn generate_group(generators: Vec<Perm>, degree: usize) -> Result<PermGroup, AlgebraError> {
    PermGroup::generate(generators, degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> PermGroup {
        let a = Perm::from_images(vec![1, 2, 0]).unwrap();
        let b = Perm::from_images(vec![1, 0, 2]).unwrap();
        PermGroup::generate(vec![a, b], 3).unwrap()
    }

    /// Quaternion group Q8 as the regular representation of ±1, ±i, ±j, ±k.
    pub(crate) fn quaternion_table() -> GroupTable {
        // encode (sign, unit) with unit in {1,i,j,k} -> index sign*4 + unit
        let unit_mul = |a: usize, b: usize| -> (usize, usize) {
            // returns (sign flip, unit)
            match (a, b) {
                (0, x) | (x, 0) => (0, x),
                (x, y) if x == y => (1, 0),
                (1, 2) => (0, 3),
                (2, 3) => (0, 1),
                (3, 1) => (0, 2),
                (2, 1) => (1, 3),
                (3, 2) => (1, 1),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        let mut mul = vec![0; 64];
        for a in 0..8 {
            for b in 0..8 {
                let (s, u) = unit_mul(a % 4, b % 4);
                let sign = (a / 4 + b / 4 + s) % 2;
                mul[a * 8 + b] = sign * 4 + u;
            }
        }
        GroupTable::new(8, mul).unwrap()
    }

    fn cyclic_table(n: usize) -> GroupTable {
        GroupTable::new(n, (0..n * n).map(|i| (i / n + i % n) % n).collect()).unwrap()
    }

    #[test]
    fn trivial_and_cyclic_groups() {
        let g = PermGroup::generate(vec![Perm::identity(3)], 3).unwrap();
        assert_eq!(g.order(), 1);
        assert!(!g.is_transitive());
        let c3 = PermGroup::generate(vec![Perm::from_images(vec![1, 2, 0]).unwrap()], 3).unwrap();
        assert_eq!(c3.order(), 3);
        assert!(c3.is_regular());
        let c5 = PermGroup::generate(vec![Perm::cyclic_shift(5, 1)], 5).unwrap();
        assert!(c5.is_transitive());
        let c9 = PermGroup::generate(vec![Perm::cyclic_shift(9, 1)], 9).unwrap();
        assert!(c9.is_regular());
    }

    #[test]
    fn symmetric_group_is_not_regular() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert!(g.is_transitive());
        assert!(!g.is_regular());
        assert!(!g.table().is_dedekind().unwrap());
        assert!(!g.is_abelian());
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let err = PermGroup::generate(vec![Perm::identity(3), Perm::identity(2)], 3).unwrap_err();
        assert_eq!(err, AlgebraError::DegreeMismatch { index: 1, expected: 3, found: 2 });
    }

    #[test]
    fn elements_sorted_and_generators_kept() {
        let g = s3();
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
        assert!(g.generators().iter().all(|p| g.contains(p)));
        assert_eq!(g.elements()[0], Perm::identity(3));
    }

    #[test]
    fn zgroup_predicate() {
        assert!(cyclic_table(45).is_zgroup());
        // Z/3 × Z/3
        let mul = (0..81)
            .map(|i| {
                let (a, b) = (i / 9, i % 9);
                ((a / 3 + b / 3) % 3) * 3 + (a % 3 + b % 3) % 3
            })
            .collect();
        let e9 = GroupTable::new(9, mul).unwrap();
        assert!(!e9.is_zgroup());
        assert!(e9.is_dedekind().unwrap());
        let q8 = quaternion_table();
        assert!(!q8.is_zgroup());
        assert!(q8.is_dedekind().unwrap());
        assert!(!q8.is_abelian());
    }

    #[test]
    fn dedekind_bound() {
        assert!(matches!(cyclic_table(513).is_dedekind(), Err(AlgebraError::TooLarge { .. })));
    }

    #[test]
    fn isomorphism_search() {
        let c6 = cyclic_table(6);
        let perm_c6 = PermGroup::generate(vec![Perm::cyclic_shift(6, 1)], 6).unwrap().table();
        let phi = c6.find_isomorphism(&perm_c6).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(phi[c6.mul(a, b)], perm_c6.mul(phi[a], phi[b]));
            }
        }
        assert!(c6.find_isomorphism(&s3().table()).is_none());
        assert!(quaternion_table().find_isomorphism(&cyclic_table(8)).is_none());
    }
}
