//! Finite left braces given by addition and multiplication tables.
//!
//! Elements are the indices `0..n`, and index `0` is the identity of both
//! the additive and the multiplicative group. `λ_a(b) = -a + a∘b` is cached
//! for every `a` when the brace is built.

use std::collections::VecDeque;

use crate::arith::is_prime;
use crate::error::BraceError;
use crate::group::GroupTable;
use crate::perm::Perm;

/// Largest order for which brute-force automorphism and isomorphism
/// searches are attempted.
pub const BRUTE_FORCE_BOUND: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftBrace {
    n: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    inv: Vec<usize>,
    lambda: Vec<Perm>,
}

/// An ideal, stored as a sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    elements: Vec<usize>,
}

impl Ideal {
    /// Checks that `elements` is a normal subgroup of `(A,∘)` closed under
    /// every `λ_a`.
    pub fn new(brace: &LeftBrace, mut elements: Vec<usize>) -> Result<Self, BraceError> {
        elements.sort_unstable();
        elements.dedup();
        let n = brace.order();
        if elements.iter().any(|&x| x >= n) {
            return Err(BraceError::NotAnIdeal("element out of range".into()));
        }
        let mut mask = vec![false; n];
        for &x in &elements {
            mask[x] = true;
        }
        if !mask[0] {
            return Err(BraceError::NotAnIdeal("does not contain 0".into()));
        }
        for &x in &elements {
            for &y in &elements {
                if !mask[brace.mul(x, y)] {
                    return Err(BraceError::NotAnIdeal(format!("{x}∘{y} not in the subset")));
                }
            }
        }
        for a in 0..n {
            let a_inv = brace.inv(a);
            for &x in &elements {
                if !mask[brace.mul(brace.mul(a, x), a_inv)] {
                    return Err(BraceError::NotAnIdeal(format!("not normal: conjugate of {x} by {a}")));
                }
                if !mask[brace.lambda(a).apply(x)] {
                    return Err(BraceError::NotAnIdeal(format!("λ_{a}({x}) not in the subset")));
                }
            }
        }
        Ok(Ideal { elements })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

fn rows_to_flat(rows: &[Vec<usize>], n: usize, name: &str) -> Result<Vec<usize>, BraceError> {
    if rows.len() != n {
        return Err(BraceError::Shape(format!("{name} has {} rows, expected {n}", rows.len())));
    }
    let mut flat = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(BraceError::Shape(format!("{name} row {i} has length {}", row.len())));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= n) {
            return Err(BraceError::Shape(format!("{name} row {i} contains {x} >= {n}")));
        }
        flat.extend_from_slice(row);
    }
    Ok(flat)
}

impl LeftBrace {
    /// Validates both tables and the brace law, reporting the first
    /// violated condition with a witness.
    pub fn validate(add: &[Vec<usize>], mul: &[Vec<usize>]) -> Result<Self, BraceError> {
        let n = add.len();
        if n == 0 {
            return Err(BraceError::Shape("empty tables".into()));
        }
        let add = rows_to_flat(add, n, "addition")?;
        let mul = rows_to_flat(mul, n, "multiplication")?;
        check_abelian_group(n, &add)?;
        check_unital_rows(n, &mul)?;
        let brace = LeftBrace::from_flat_trusted(n, add, mul);
        // the brace law is read before the remaining group axioms of ∘
        for a in 0..n {
            let minus_a = brace.neg(a);
            for b in 0..n {
                let ab = brace.mul(a, b);
                for c in 0..n {
                    let lhs = brace.mul(a, brace.add(b, c));
                    let rhs = brace.add(brace.add(ab, minus_a), brace.mul(a, c));
                    if lhs != rhs {
                        return Err(BraceError::BraceLawViolation { a, b, c });
                    }
                }
            }
        }
        check_columns(n, &brace.mul)?;
        for a in 0..n {
            for b in 0..n {
                let ab = brace.mul(a, b);
                for c in 0..n {
                    if brace.mul(ab, c) != brace.mul(a, brace.mul(b, c)) {
                        return Err(BraceError::NotGroup(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(brace)
    }

    /// Builds a brace from operation closures and validates it.
    pub fn from_operations(
        n: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, BraceError> {
        let add_rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| add(a, b)).collect()).collect();
        let mul_rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        LeftBrace::validate(&add_rows, &mul_rows)
    }

    /// Tables the caller already knows to form a left brace.
    pub(crate) fn from_flat_trusted(n: usize, add: Vec<usize>, mul: Vec<usize>) -> Self {
        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b;
                }
                if mul[a * n + b] == 0 {
                    inv[a] = b;
                }
            }
        }
        let lambda = (0..n)
            .map(|a| Perm::from_images_unchecked((0..n).map(|b| add[neg[a] * n + mul[a * n + b]]).collect()))
            .collect();
        LeftBrace { n, add, mul, neg, inv, lambda }
    }

    /// `a∘b = a+b` on `Z/n`.
    pub fn trivial(n: usize) -> Self {
        assert!(n >= 1, "trivial brace needs n >= 1");
        let add: Vec<usize> = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        LeftBrace::from_flat_trusted(n, add.clone(), add)
    }

    /// `B(p,k,t)`: `Z/p^k` with `a∘b = a + b + ab·p^t`.
    pub fn bpkt(p: u64, k: u32, t: u32) -> Result<Self, BraceError> {
        if p == 2 || !is_prime(p) {
            return Err(BraceError::InvalidParameters(format!("{p} is not an odd prime")));
        }
        if k == 0 || t == 0 || t > k {
            return Err(BraceError::InvalidParameters(format!("need 1 <= t <= k, got k = {k}, t = {t}")));
        }
        let n = p.pow(k);
        let pt = p.pow(t) % n;
        let size = n as usize;
        let mut add = Vec::with_capacity(size * size);
        let mut mul = Vec::with_capacity(size * size);
        for a in 0..n {
            for b in 0..n {
                add.push(((a + b) % n) as usize);
                mul.push(((a + b + (a * b % n) * pt) % n) as usize);
            }
        }
        Ok(LeftBrace::from_flat_trusted(size, add, mul))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    /// Inverse in `(A,∘)`.
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn lambda(&self, a: usize) -> &Perm {
        &self.lambda[a]
    }

    pub fn lambdas(&self) -> &[Perm] {
        &self.lambda
    }

    pub fn add_rows(&self) -> Vec<Vec<usize>> {
        self.add.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn mul_rows(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    /// The multiplicative group as an abstract table.
    pub fn mul_group(&self) -> GroupTable {
        GroupTable::from_trusted(self.n, self.mul.clone(), 0)
    }

    pub fn additive_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// `k·a` in `(A,+)`.
    pub fn scale(&self, k: usize, a: usize) -> usize {
        (0..k).fold(0, |acc, _| self.add(acc, a))
    }

    pub fn is_additively_cyclic(&self) -> bool {
        (0..self.n).any(|a| self.additive_order(a) == self.n)
    }

    pub fn is_trivial(&self) -> bool {
        self.add == self.mul
    }

    /// Additive subgroup generated by `gens`, as a membership mask.
    pub fn additive_span(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        mask[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.add(x, g);
                if !mask[y] {
                    mask[y] = true;
                    stack.push(y);
                }
            }
        }
        mask
    }

    /// `{a | λ_a = id}`.
    pub fn socle(&self) -> Ideal {
        let elements = (0..self.n).filter(|&a| self.lambda[a].is_identity()).collect();
        Ideal { elements }
    }

    /// `A/I` on coset representatives; the representative of a coset is
    /// its least element and the quotient relabels representatives in
    /// increasing order.
    pub fn quotient(&self, ideal: &Ideal) -> Result<LeftBrace, BraceError> {
        let checked = Ideal::new(self, ideal.elements.clone())?;
        Ok(self.quotient_with_projection(&checked).0)
    }

    /// Quotient together with the projection `A → A/I` as an index map.
    pub fn quotient_with_projection(&self, ideal: &Ideal) -> (LeftBrace, Vec<usize>) {
        let n = self.n;
        const UNSET: usize = usize::MAX;
        let mut proj = vec![UNSET; n];
        let mut m = 0;
        for a in 0..n {
            if proj[a] == UNSET {
                for &i in &ideal.elements {
                    proj[self.add(a, i)] = m;
                }
                m += 1;
            }
        }
        let mut reps = vec![UNSET; m];
        for a in (0..n).rev() {
            reps[proj[a]] = a;
        }
        let mut add = Vec::with_capacity(m * m);
        let mut mul = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                add.push(proj[self.add(a, b)]);
                mul.push(proj[self.mul(a, b)]);
            }
        }
        (LeftBrace::from_flat_trusted(m, add, mul), proj)
    }

    /// Componentwise product, `(x, y)` encoded as `x·|other| + y`.
    pub fn direct_product(&self, other: &LeftBrace) -> LeftBrace {
        let alpha = vec![Perm::identity(self.n); other.n];
        self.semidirect_unchecked(other, &alpha)
    }

    /// `A1 ⋊ A2` with `(a1,a2)∘(b1,b2) = (a1∘α(a2)(b1), a2∘b2)`, where `α`
    /// maps each element of `other` to a brace automorphism of `self`.
    pub fn semidirect_product(&self, other: &LeftBrace, alpha: &[Perm]) -> Result<LeftBrace, BraceError> {
        if alpha.len() != other.n {
            return Err(BraceError::InvalidAction(format!(
                "{} images given for a brace of order {}",
                alpha.len(),
                other.n
            )));
        }
        for (a, p) in alpha.iter().enumerate() {
            if p.degree() != self.n || !self.is_automorphism(p) {
                return Err(BraceError::InvalidAction(format!("image of {a} is not a brace automorphism")));
            }
        }
        for a in 0..other.n {
            for b in 0..other.n {
                if alpha[other.mul(a, b)] != alpha[a].compose(&alpha[b]) {
                    return Err(BraceError::InvalidAction(format!(
                        "not a homomorphism: α({a}∘{b}) != α({a})α({b})"
                    )));
                }
            }
        }
        Ok(self.semidirect_unchecked(other, alpha))
    }

    pub(crate) fn semidirect_unchecked(&self, other: &LeftBrace, alpha: &[Perm]) -> LeftBrace {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            let (a1, a2) = (x / n2, x % n2);
            for y in 0..n {
                let (b1, b2) = (y / n2, y % n2);
                add.push(self.add(a1, b1) * n2 + other.add(a2, b2));
                mul.push(self.mul(a1, alpha[a2].apply(b1)) * n2 + other.mul(a2, b2));
            }
        }
        LeftBrace::from_flat_trusted(n, add, mul)
    }

    /// Preserves both operations (bijectivity is the caller's concern).
    pub fn is_automorphism(&self, p: &Perm) -> bool {
        p.apply(0) == 0
            && (0..self.n).all(|a| {
                (0..self.n).all(|b| {
                    p.apply(self.add(a, b)) == self.add(p.apply(a), p.apply(b))
                        && p.apply(self.mul(a, b)) == self.mul(p.apply(a), p.apply(b))
                })
            })
    }

    /// Every brace automorphism, sorted by image array.
    pub fn automorphisms(&self) -> Result<Vec<Perm>, BraceError> {
        if self.n > BRUTE_FORCE_BOUND {
            return Err(BraceError::TooLarge { order: self.n, bound: BRUTE_FORCE_BOUND });
        }
        let mut found = Vec::new();
        additive_maps(self, self, &mut |phi| {
            if preserves_mul(self, self, phi) {
                found.push(Perm::from_images_unchecked(phi.to_vec()));
            }
            false
        });
        found.sort();
        Ok(found)
    }

    /// A brace isomorphism `self → other`, searched over images of an
    /// additive generating set.
    pub fn find_isomorphism(&self, other: &LeftBrace) -> Result<Option<Perm>, BraceError> {
        let bound = self.n.max(other.n);
        if bound > BRUTE_FORCE_BOUND {
            return Err(BraceError::TooLarge { order: bound, bound: BRUTE_FORCE_BOUND });
        }
        if self.n != other.n || self.socle().len() != other.socle().len() {
            return Ok(None);
        }
        let mut result = None;
        additive_maps(self, other, &mut |phi| {
            if preserves_mul(self, other, phi) {
                result = Some(Perm::from_images_unchecked(phi.to_vec()));
                true
            } else {
                false
            }
        });
        Ok(result)
    }

    /// Orbits of the λ-action, each sorted, ordered by least element.
    pub fn lambda_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut orbits = Vec::new();
        for x in 0..self.n {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.lambda.iter().map(|l| l.apply(x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// λ-orbits that additively generate the brace.
    pub fn transitive_cycle_bases(&self) -> Vec<Vec<usize>> {
        self.lambda_orbits()
            .into_iter()
            .filter(|orbit| self.additive_span(orbit).iter().all(|&b| b))
            .collect()
    }

    pub fn in_transitive_cycle_base(&self, g: usize) -> bool {
        g < self.n && self.transitive_cycle_bases().iter().any(|o| o.contains(&g))
    }

    /// Orders of `A, A/Soc(A), …` down to order 1, or `None` if some stage
    /// of order > 1 has trivial socle.
    pub fn socle_tower(&self) -> Option<Vec<usize>> {
        let mut sizes = vec![self.n];
        let mut current = self.clone();
        while current.n > 1 {
            let soc = current.socle();
            if soc.len() == 1 {
                return None;
            }
            current = current.quotient_with_projection(&soc).0;
            sizes.push(current.n);
        }
        Some(sizes)
    }

    /// Length of the socle-quotient tower.
    pub fn mpl(&self) -> Option<usize> {
        self.socle_tower().map(|t| t.len() - 1)
    }
}

fn check_abelian_group(n: usize, add: &[usize]) -> Result<(), BraceError> {
    let at = |a: usize, b: usize| add[a * n + b];
    for x in 0..n {
        if at(0, x) != x || at(x, 0) != x {
            return Err(BraceError::NotAbelianGroup(format!("0 is not the identity (fails at {x})")));
        }
    }
    for a in 0..n {
        if !(0..n).any(|b| at(a, b) == 0) {
            return Err(BraceError::NotAbelianGroup(format!("{a} has no inverse")));
        }
        for b in 0..a {
            if at(a, b) != at(b, a) {
                return Err(BraceError::NotAbelianGroup(format!("{a}+{b} != {b}+{a}")));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = at(a, b);
            for c in 0..n {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(BraceError::NotAbelianGroup(format!("not associative at ({a}, {b}, {c})")));
                }
            }
        }
    }
    Ok(())
}

fn check_unital_rows(n: usize, mul: &[usize]) -> Result<(), BraceError> {
    for x in 0..n {
        if mul[x] != x || mul[x * n] != x {
            return Err(BraceError::NotGroup(format!("0 is not the identity (fails at {x})")));
        }
    }
    for a in 0..n {
        let mut row = vec![false; n];
        for b in 0..n {
            row[mul[a * n + b]] = true;
        }
        if row.contains(&false) {
            return Err(BraceError::NotGroup(format!("left multiplication by {a} is not bijective")));
        }
    }
    Ok(())
}

fn check_columns(n: usize, mul: &[usize]) -> Result<(), BraceError> {
    for a in 0..n {
        let mut col = vec![false; n];
        for b in 0..n {
            col[mul[b * n + a]] = true;
        }
        if col.contains(&false) {
            return Err(BraceError::NotGroup(format!("right multiplication by {a} is not bijective")));
        }
    }
    Ok(())
}

fn preserves_mul(src: &LeftBrace, dst: &LeftBrace, phi: &[usize]) -> bool {
    (0..src.n).all(|a| (0..src.n).all(|b| phi[src.mul(a, b)] == dst.mul(phi[a], phi[b])))
}

/// Additive generating set chosen greedily by decreasing additive order.
fn additive_generators(brace: &LeftBrace) -> Vec<usize> {
    let mut elems: Vec<usize> = (0..brace.n).collect();
    elems.sort_by_key(|&a| (std::cmp::Reverse(brace.additive_order(a)), a));
    let mut gens = Vec::new();
    let mut span = brace.additive_span(&gens);
    for a in elems {
        if !span[a] {
            gens.push(a);
            span = brace.additive_span(&gens);
        }
    }
    gens
}

/// Calls `visit` on every additive isomorphism `src → dst`; stops early
/// when `visit` returns true.
fn additive_maps(src: &LeftBrace, dst: &LeftBrace, visit: &mut dyn FnMut(&[usize]) -> bool) {
    if src.n != dst.n {
        return;
    }
    let gens = additive_generators(src);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let ord = src.additive_order(g);
            (0..dst.n).filter(|&h| dst.additive_order(h) == ord).collect()
        })
        .collect();
    let mut choice = vec![0; gens.len()];
    fn rec(
        src: &LeftBrace,
        dst: &LeftBrace,
        gens: &[usize],
        candidates: &[Vec<usize>],
        choice: &mut Vec<usize>,
        depth: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == gens.len() {
            return match extend_additive(src, dst, gens, choice) {
                Some(phi) => visit(&phi),
                None => false,
            };
        }
        for &c in &candidates[depth] {
            choice[depth] = c;
            if rec(src, dst, gens, candidates, choice, depth + 1, visit) {
                return true;
            }
        }
        false
    }
    rec(src, dst, &gens, &candidates, &mut choice, 0, visit);
}

fn extend_additive(src: &LeftBrace, dst: &LeftBrace, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let mut phi = vec![UNSET; src.n];
    let mut used = vec![false; dst.n];
    phi[0] = 0;
    used[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (&g, &h) in gens.iter().zip(images) {
            let y = src.add(x, g);
            let target = dst.add(phi[x], h);
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
    Some(phi)
}
