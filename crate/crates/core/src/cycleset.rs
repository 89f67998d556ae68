//! Finite non-degenerate cycle sets, their solutions, retraction towers and
//! an isomorphism search.

use std::collections::HashMap;

use crate::brace::LeftBrace;
use crate::error::CycleSetError;
use crate::group::PermGroup;
use crate::perm::Perm;

/// Largest size accepted by [`CycleSet::find_isomorphism`].
pub const ISO_SEARCH_BOUND: usize = 128;

/// A cycle set on `{0..n-1}`; `sigma[x](y) = x·y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleSet {
    n: usize,
    sigma: Vec<Perm>,
    sigma_inv: Vec<Perm>,
}

/// An involutive non-degenerate solution `r(x,y) = (λ_x(y), ρ_y(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    n: usize,
    lambda: Vec<Perm>,
    rho: Vec<Perm>,
}

impl CycleSet {
    /// Checks bijective rows, the cycle-set law and non-degeneracy, in
    /// that order.
    pub fn validate(table: &[Vec<usize>]) -> Result<Self, CycleSetError> {
        let n = table.len();
        let mut sigma = Vec::with_capacity(n);
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(CycleSetError::Shape(format!("row {x} has length {}", row.len())));
            }
            if row.iter().any(|&y| y >= n) {
                return Err(CycleSetError::Shape(format!("row {x} has an entry >= {n}")));
            }
            sigma.push(Perm::from_images(row.clone()).map_err(|_| CycleSetError::RowNotBijective(x))?);
        }
        let cs = CycleSet::from_sigmas(sigma);
        if let Some((x, y, z)) = cs.law_violation() {
            return Err(CycleSetError::LawViolation { x, y, z });
        }
        if !cs.squaring_is_bijective() {
            return Err(CycleSetError::SquaringNotBijective);
        }
        Ok(cs)
    }

    pub(crate) fn from_sigmas(sigma: Vec<Perm>) -> Self {
        let sigma_inv = sigma.iter().map(Perm::inverse).collect();
        CycleSet { n: sigma.len(), sigma, sigma_inv }
    }

    /// First `(x,y,z)` in index order with `(x·y)·(x·z) != (y·x)·(y·z)`.
    pub fn law_violation(&self) -> Option<(usize, usize, usize)> {
        for x in 0..self.n {
            for y in 0..self.n {
                let xy = self.op(x, y);
                let yx = self.op(y, x);
                for z in 0..self.n {
                    if self.op(xy, self.op(x, z)) != self.op(yx, self.op(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn squaring_is_bijective(&self) -> bool {
        let mut seen = vec![false; self.n];
        for x in 0..self.n {
            seen[self.op(x, x)] = true;
        }
        seen.iter().all(|&s| s)
    }

    /// `x·y = y`.
    pub fn projection(n: usize) -> Self {
        CycleSet::from_sigmas(vec![Perm::identity(n); n])
    }

    /// `x·y = y + 1 mod n`.
    pub fn shift(n: usize) -> Self {
        CycleSet::from_sigmas(vec![Perm::cyclic_shift(n, 1); n])
    }

    /// `a·b = λ_a⁻¹(b)`.
    pub fn from_brace_decomposable(brace: &LeftBrace) -> Self {
        CycleSet::from_sigmas(brace.lambdas().iter().map(Perm::inverse).collect())
    }

    /// `a•b = (λ_a(g))⁻ ∘ b`, with `g` in a transitive cycle base.
    pub fn from_brace_uniconnected(brace: &LeftBrace, g: usize) -> Result<Self, CycleSetError> {
        if !brace.in_transitive_cycle_base(g) {
            return Err(CycleSetError::NotInTransitiveCycleBase(g));
        }
        Ok(Self::uniconnected_unchecked(brace, g))
    }

    /// Same as [`Self::from_brace_uniconnected`] when `g` is already
    /// known to lie in a transitive cycle base.
    pub(crate) fn uniconnected_unchecked(brace: &LeftBrace, g: usize) -> Self {
        let n = brace.order();
        let sigma = (0..n)
            .map(|a| {
                let h = brace.inv(brace.lambda(a).apply(g));
                Perm::from_images_unchecked((0..n).map(|b| brace.mul(h, b)).collect())
            })
            .collect();
        CycleSet::from_sigmas(sigma)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.sigma[x].apply(y)
    }

    pub fn sigma(&self, x: usize) -> &Perm {
        &self.sigma[x]
    }

    pub fn sigma_inv(&self, x: usize) -> &Perm {
        &self.sigma_inv[x]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.sigma.iter().map(|p| p.images().to_vec()).collect()
    }

    /// Group generated by the distinct `σ_x`.
    pub fn permutation_group(&self) -> PermGroup {
        let mut gens = self.sigma.clone();
        gens.sort();
        gens.dedup();
        PermGroup::generate(gens, self.n).expect("σ-maps share the degree")
    }

    pub fn is_indecomposable(&self) -> bool {
        self.permutation_group().is_transitive()
    }

    pub fn is_uniconnected(&self) -> bool {
        self.permutation_group().is_regular()
    }

    /// `Ret(X)` together with the class index of every element. Classes of
    /// `σ_x = σ_y` are numbered by their least member.
    pub fn retraction_with_classes(&self) -> (CycleSet, Vec<usize>) {
        let mut class_of = vec![0; self.n];
        let mut reps: Vec<usize> = Vec::new();
        let mut index: HashMap<&Perm, usize> = HashMap::new();
        for (x, sigma) in self.sigma.iter().enumerate() {
            let next = reps.len();
            let c = *index.entry(sigma).or_insert(next);
            if c == next {
                reps.push(x);
            }
            class_of[x] = c;
        }
        let sigma = reps
            .iter()
            .map(|&x| Perm::from_images_unchecked(reps.iter().map(|&y| class_of[self.op(x, y)]).collect()))
            .collect();
        (CycleSet::from_sigmas(sigma), class_of)
    }

    pub fn retraction(&self) -> CycleSet {
        self.retraction_with_classes().0
    }

    /// Stage partitions of the retraction tower: entry `k` maps every
    /// element of `X` to its class in `Ret^k(X)`. Stops at a singleton or
    /// when the tower stabilizes.
    pub fn retraction_tower(&self) -> RetractionTower {
        let mut stages = vec![(0..self.n).collect::<Vec<_>>()];
        let mut current = self.clone();
        let mut reached_singleton = self.n <= 1;
        // the tower strictly shrinks until it stops, so n steps suffice
        for _ in 0..self.n {
            if current.n <= 1 {
                reached_singleton = true;
                break;
            }
            let (next, classes) = current.retraction_with_classes();
            if next.n == current.n {
                break;
            }
            let last = stages.last().expect("tower has a first stage");
            stages.push(last.iter().map(|&c| classes[c]).collect());
            current = next;
            if current.n == 1 {
                reached_singleton = true;
                break;
            }
        }
        RetractionTower { stages, reached_singleton }
    }

    /// Multipermutation level, or `None` for a non-multipermutation set.
    pub fn mpl(&self) -> Option<usize> {
        self.retraction_tower().mpl()
    }

    /// The cycle set transported along `phi`: `φ(x)·φ(y) = φ(x·y)`.
    pub fn relabel(&self, phi: &Perm) -> CycleSet {
        let inv = phi.inverse();
        let sigma = (0..self.n)
            .map(|u| {
                let x = inv.apply(u);
                Perm::from_images_unchecked((0..self.n).map(|v| phi.apply(self.op(x, inv.apply(v)))).collect())
            })
            .collect();
        CycleSet::from_sigmas(sigma)
    }

    /// Checks `φ(x·y) = φ(x)·φ(y)` for all pairs.
    pub fn is_isomorphism_to(&self, other: &CycleSet, phi: &Perm) -> bool {
        self.n == other.n
            && phi.degree() == self.n
            && (0..self.n)
                .all(|x| (0..self.n).all(|y| phi.apply(self.op(x, y)) == other.op(phi.apply(x), phi.apply(y))))
    }

    /// Per-element invariant preserved by isomorphisms.
    fn fingerprints(&self) -> Vec<u64> {
        use std::hash::{Hash, Hasher};
        let mut multiplicity: HashMap<&Perm, usize> = HashMap::new();
        for p in &self.sigma {
            *multiplicity.entry(p).or_default() += 1;
        }
        (0..self.n)
            .map(|x| {
                let mut h = std::collections::hash_map::DefaultHasher::new();
                self.sigma[x].cycle_type().hash(&mut h);
                multiplicity[&self.sigma[x]].hash(&mut h);
                let mut len = 1;
                let mut y = self.op(x, x);
                while y != x && len <= self.n {
                    y = self.op(y, y);
                    len += 1;
                }
                len.hash(&mut h);
                h.finish()
            })
            .collect()
    }

    /// An isomorphism `self → other` if one exists. The search anchors
    /// unmapped points on targets with equal fingerprints and propagates
    /// every forced image through `·` and the inverse rows.
    pub fn find_isomorphism(&self, other: &CycleSet) -> Result<Option<Perm>, CycleSetError> {
        let size = self.n.max(other.n);
        if size > ISO_SEARCH_BOUND {
            return Err(CycleSetError::TooLarge { size, bound: ISO_SEARCH_BOUND });
        }
        if self.n != other.n {
            return Ok(None);
        }
        let fp_src = self.fingerprints();
        let fp_dst = other.fingerprints();
        let mut a = fp_src.clone();
        let mut b = fp_dst.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Ok(None);
        }
        let mut search = IsoSearch {
            src: self,
            dst: other,
            fp_src: &fp_src,
            fp_dst: &fp_dst,
            phi: vec![UNSET; self.n],
            used: vec![false; self.n],
            trail: Vec::new(),
        };
        if search.run() {
            let phi = Perm::from_images_unchecked(search.phi);
            debug_assert!(self.is_isomorphism_to(other, &phi));
            Ok(Some(phi))
        } else {
            Ok(None)
        }
    }

    pub fn are_isomorphic(&self, other: &CycleSet) -> Result<bool, CycleSetError> {
        Ok(self.find_isomorphism(other)?.is_some())
    }

    /// `r(x,y) = (σ_x⁻¹(y), σ_x⁻¹(y)·x)`.
    pub fn to_solution(&self) -> Solution {
        let lambda = self.sigma_inv.clone();
        let rho = (0..self.n)
            .map(|y| Perm::from_images_unchecked((0..self.n).map(|x| self.op(lambda[x].apply(y), x)).collect()))
            .collect();
        Solution { n: self.n, lambda, rho }
    }

    /// Inverse of [`Self::to_solution`]: `σ_x = λ_x⁻¹`.
    pub fn from_solution(solution: &Solution) -> Self {
        CycleSet::from_sigmas(solution.lambda.iter().map(Perm::inverse).collect())
    }
}

const UNSET: usize = usize::MAX;

struct IsoSearch<'a> {
    src: &'a CycleSet,
    dst: &'a CycleSet,
    fp_src: &'a [u64],
    fp_dst: &'a [u64],
    phi: Vec<usize>,
    used: Vec<bool>,
    trail: Vec<usize>,
}

impl IsoSearch<'_> {
    fn run(&mut self) -> bool {
        let Some(x) = self.phi.iter().position(|&v| v == UNSET) else {
            return true;
        };
        for u in 0..self.dst.n {
            if self.used[u] || self.fp_src[x] != self.fp_dst[u] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(x, u) && self.run() {
                return true;
            }
            self.undo(mark);
        }
        false
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("trail above mark");
            self.used[self.phi[x]] = false;
            self.phi[x] = UNSET;
        }
    }

    /// Assigns `x ↦ u` and everything it forces; false on contradiction.
    fn assign(&mut self, x: usize, u: usize) -> bool {
        let mut pending = vec![(x, u)];
        while let Some((x, u)) = pending.pop() {
            match self.phi[x] {
                v if v == u => continue,
                UNSET => {}
                _ => return false,
            }
            if self.used[u] || self.fp_src[x] != self.fp_dst[u] {
                return false;
            }
            self.phi[x] = u;
            self.used[u] = true;
            self.trail.push(x);
            let (src, dst) = (self.src, self.dst);
            for i in 0..self.trail.len() {
                let a = self.trail[i];
                let v = self.phi[a];
                pending.push((src.op(x, a), dst.op(u, v)));
                pending.push((src.op(a, x), dst.op(v, u)));
                pending.push((src.sigma_inv(x).apply(a), dst.sigma_inv(u).apply(v)));
                pending.push((src.sigma_inv(a).apply(x), dst.sigma_inv(v).apply(u)));
            }
        }
        true
    }
}

/// Stage partitions of a retraction tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionTower {
    /// `stages[k][x]` is the class of `x` in `Ret^k(X)`.
    pub stages: Vec<Vec<usize>>,
    pub reached_singleton: bool,
}

impl RetractionTower {
    pub fn mpl(&self) -> Option<usize> {
        self.reached_singleton.then(|| self.stages.len() - 1)
    }

    /// Sizes `|Ret^k(X)|` for every stage.
    pub fn sizes(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.iter().max().map_or(0, |m| m + 1)).collect()
    }

    /// Each stage as a canonical labeling: every element is labeled by the
    /// least element of its class.
    pub fn canonical_partitions(&self) -> Vec<Vec<usize>> {
        self.stages.iter().map(|s| canonical_labels(s)).collect()
    }
}

/// Relabels a class assignment so each element maps to the least member of
/// its class.
pub fn canonical_labels(classes: &[usize]) -> Vec<usize> {
    let mut least: HashMap<usize, usize> = HashMap::new();
    for (x, &c) in classes.iter().enumerate() {
        least.entry(c).or_insert(x);
    }
    classes.iter().map(|c| least[c]).collect()
}

/// `H = {h | λ_h(g) = g}`, the stabilizer of `g` under the λ-action.
pub fn stabilizer_h(brace: &LeftBrace, g: usize) -> Result<Vec<usize>, CycleSetError> {
    if !brace.in_transitive_cycle_base(g) {
        return Err(CycleSetError::NotInTransitiveCycleBase(g));
    }
    Ok((0..brace.order()).filter(|&h| brace.lambda(h).apply(g) == g).collect())
}

impl Solution {
    /// Checks bijectivity, `r² = id` and the braid relation.
    pub fn new(lambda: Vec<Vec<usize>>, rho: Vec<Vec<usize>>) -> Result<Self, CycleSetError> {
        let n = lambda.len();
        if rho.len() != n || lambda.iter().chain(&rho).any(|r| r.len() != n) {
            return Err(CycleSetError::Shape("λ and ρ tables must both be n×n".into()));
        }
        let to_perms = |rows: Vec<Vec<usize>>, name: &str| -> Result<Vec<Perm>, CycleSetError> {
            rows.into_iter()
                .enumerate()
                .map(|(i, r)| Perm::from_images(r).map_err(|_| CycleSetError::Degenerate(format!("{name}_{i}"))))
                .collect()
        };
        let s = Solution { n, lambda: to_perms(lambda, "λ")?, rho: to_perms(rho, "ρ")? };
        s.check()?;
        Ok(s)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn r(&self, x: usize, y: usize) -> (usize, usize) {
        (self.lambda[x].apply(y), self.rho[y].apply(x))
    }

    pub fn lambda_rows(&self) -> Vec<Vec<usize>> {
        self.lambda.iter().map(|p| p.images().to_vec()).collect()
    }

    pub fn rho_rows(&self) -> Vec<Vec<usize>> {
        self.rho.iter().map(|p| p.images().to_vec()).collect()
    }

    /// Involutivity and the braid relation on all pairs and triples.
    pub fn check(&self) -> Result<(), CycleSetError> {
        for x in 0..self.n {
            for y in 0..self.n {
                let (a, b) = self.r(x, y);
                if self.r(a, b) != (x, y) {
                    return Err(CycleSetError::NotInvolutive { x, y });
                }
            }
        }
        let r12 = |(x, y, z): (usize, usize, usize)| {
            let (a, b) = self.r(x, y);
            (a, b, z)
        };
        let r23 = |(x, y, z): (usize, usize, usize)| {
            let (b, c) = self.r(y, z);
            (x, b, c)
        };
        for x in 0..self.n {
            for y in 0..self.n {
                for z in 0..self.n {
                    let t = (x, y, z);
                    if r12(r23(r12(t))) != r23(r12(r23(t))) {
                        return Err(CycleSetError::BraidViolation { x, y, z });
                    }
                }
            }
        }
        Ok(())
    }
}
