//! Cyclic left braces of odd order with Z-group multiplicative group, in
//! structured form `Ā × B̄` where
//!
//! * `Ā = A_1 × … × A_v` is a direct product of braces `B(q,γ,t)`,
//! * `B̄ = (B_{m+1} × … × B_r) ⋊_α (B_1 × … × B_m)` has trivial acted
//!   factors `Z/p^β` and acting factors `B(p,k,t)`.
//!
//! An element of the built brace is stored in mixed radix over the
//! components `(a_1, …, a_v, b_{m+1}, …, b_r, c_1, …, c_m)`, first
//! component most significant.

use serde::{Deserialize, Serialize};

use crate::arith::{crt, factorize, gcd, is_prime, log_exact, mult_order, pow_mod, units};
use crate::brace::LeftBrace;
use crate::error::{AlgebraError, SpecError};
use crate::group::GroupTable;
use crate::perm::Perm;

/// `B(p,k,t)`; trivial iff `t == k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraceFactorSpec {
    pub p: u64,
    pub k: u32,
    pub t: u32,
}

impl BraceFactorSpec {
    pub fn new(p: u64, k: u32, t: u32) -> Self {
        BraceFactorSpec { p, k, t }
    }

    pub fn trivial(p: u64, k: u32) -> Self {
        BraceFactorSpec { p, k, t: k }
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn is_trivial(&self) -> bool {
        self.t == self.k
    }

    pub fn brace(&self) -> Result<LeftBrace, SpecError> {
        Ok(LeftBrace::bpkt(self.p, self.k, self.t)?)
    }
}

/// A trivial acted factor `Z/p^β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActedFactor {
    pub p: u64,
    pub beta: u32,
}

impl ActedFactor {
    pub fn order(&self) -> u64 {
        self.p.pow(self.beta)
    }
}

/// The image of the multiplicative generator of acting factor `i`, as a
/// unit `u` modulo the order of acted factor `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionEntry {
    pub i: usize,
    pub j: usize,
    pub u: u64,
}

/// Structured description of a cyclic brace `Ā × B̄`. Missing action
/// entries stand for `u = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZGroupBraceSpec {
    #[serde(default)]
    pub abar: Vec<BraceFactorSpec>,
    #[serde(default)]
    pub acting: Vec<BraceFactorSpec>,
    #[serde(default)]
    pub acted: Vec<ActedFactor>,
    #[serde(default)]
    pub action: Vec<ActionEntry>,
}

/// Socle exponents: `|Soc(A_i)| = q_i^{d_i}`, `|Soc(B_i)| = p_i^{f_i}`,
/// `|Soc(B_i) ∩ Ker α| = p_i^{f'_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredSocleData {
    pub d: Vec<u32>,
    pub f: Vec<u32>,
    pub fprime: Vec<u32>,
}

/// `(m₁, n₁, r₁, t)`: the Z-group `Z/m₁ ⋊_{r₁} Z/n₁` together with the
/// per-prime brace parameters folded into `t = ∏ p^{t_p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantQuadruple {
    pub m1: u64,
    pub n1: u64,
    pub r1: u64,
    pub t: u64,
}

/// Which part of `Ā × B̄` a mixed-radix component belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Abar,
    Acted,
    Acting,
}

/// One coordinate of the mixed-radix encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    /// Position inside its own list (`abar`, `acted` or `acting`).
    pub index: usize,
    pub p: u64,
    pub exponent: u32,
}

impl Component {
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.exponent)
    }
}

/// Components of an element: `a` (abar), `b` (acted), `c` (acting).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementComponents {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

/// Least element of `B` generating `(B,∘)`; element 1 for `B(p,k,t)`.
pub fn multiplicative_generator(brace: &LeftBrace) -> Option<usize> {
    let g = brace.mul_group();
    let n = brace.order();
    if n == 1 {
        return Some(0);
    }
    std::iter::once(1)
        .chain(0..n)
        .find(|&x| x < n && g.element_order(x) == n)
}

/// `log[x] = e` with `x = γ^{∘e}` for the multiplicative generator `γ`.
fn discrete_logs(brace: &LeftBrace) -> Vec<u64> {
    let gamma = multiplicative_generator(brace).expect("factor braces have cyclic (B,∘)");
    let mut log = vec![0; brace.order()];
    let mut x = 0;
    for e in 0..brace.order() as u64 {
        log[x] = e;
        x = brace.mul(x, gamma);
    }
    log
}

impl ZGroupBraceSpec {
    pub fn order(&self) -> u64 {
        self.abar.iter().map(BraceFactorSpec::order).product::<u64>()
            * self.acted.iter().map(ActedFactor::order).product::<u64>()
            * self.acting.iter().map(BraceFactorSpec::order).product::<u64>()
    }

    /// `u_{i,j}`, defaulting to 1.
    pub fn unit(&self, i: usize, j: usize) -> u64 {
        let modulus = self.acted[j].order();
        self.action
            .iter()
            .find(|e| e.i == i && e.j == j)
            .map_or(1 % modulus.max(2), |e| e.u % modulus)
    }

    /// Sorted action entries with `u = 1` dropped.
    pub fn normalized(&self) -> ZGroupBraceSpec {
        let mut out = self.clone();
        out.action.retain(|e| e.u % self.acted.get(e.j).map_or(u64::MAX, ActedFactor::order) != 1);
        out.action.sort();
        out
    }

    fn primes(&self) -> Vec<u64> {
        self.abar
            .iter()
            .map(|f| f.p)
            .chain(self.acted.iter().map(|f| f.p))
            .chain(self.acting.iter().map(|f| f.p))
            .collect()
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        let primes = self.primes();
        if primes.contains(&2) {
            return Err(SpecError::EvenOrder(self.order()));
        }
        for &p in &primes {
            if !is_prime(p) {
                return Err(SpecError::Invalid(format!("{p} is not prime")));
            }
        }
        let mut sorted = primes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() {
            return Err(SpecError::Invalid("primes must be pairwise distinct".into()));
        }
        for (name, list) in [("abar", &self.abar), ("acting", &self.acting)] {
            for f in list.iter() {
                if f.k == 0 || f.t == 0 || f.t > f.k {
                    return Err(SpecError::Invalid(format!("{name} factor {f:?} needs 1 <= t <= k")));
                }
            }
            if list.windows(2).any(|w| w[0].p >= w[1].p) {
                return Err(SpecError::Invalid(format!("{name} factors must have increasing primes")));
            }
        }
        if self.acted.iter().any(|f| f.beta == 0) {
            return Err(SpecError::Invalid("acted factors need beta >= 1".into()));
        }
        if self.acted.windows(2).any(|w| w[0].p >= w[1].p) {
            return Err(SpecError::Invalid("acted factors must have increasing primes".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for e in &self.action {
            if e.i >= self.acting.len() || e.j >= self.acted.len() {
                return Err(SpecError::Invalid(format!("action entry ({}, {}) out of range", e.i, e.j)));
            }
            if !seen.insert((e.i, e.j)) {
                return Err(SpecError::Invalid(format!("duplicate action entry ({}, {})", e.i, e.j)));
            }
            let modulus = self.acted[e.j].order();
            if e.u >= modulus || gcd(e.u, modulus) != 1 {
                return Err(SpecError::Invalid(format!("u = {} is not a unit modulo {modulus}", e.u)));
            }
            let acting_order = self.acting[e.i].order();
            if pow_mod(e.u, acting_order, modulus) != 1 {
                return Err(SpecError::Invalid(format!(
                    "u = {} has order not dividing {acting_order} modulo {modulus}; α is not a homomorphism",
                    e.u
                )));
            }
        }
        for i in 0..self.acting.len() {
            if (0..self.acted.len()).all(|j| self.unit(i, j) == 1) {
                return Err(SpecError::Invalid(format!("acting factor {i} acts trivially")));
            }
        }
        for j in 0..self.acted.len() {
            if (0..self.acting.len()).all(|i| self.unit(i, j) == 1) {
                return Err(SpecError::Invalid(format!("acted factor {j} is not acted on")));
            }
        }
        Ok(())
    }

    /// Mixed-radix layout of the built brace.
    pub fn components(&self) -> Vec<Component> {
        let mut out = Vec::new();
        for (index, f) in self.abar.iter().enumerate() {
            out.push(Component { kind: ComponentKind::Abar, index, p: f.p, exponent: f.k });
        }
        for (index, f) in self.acted.iter().enumerate() {
            out.push(Component { kind: ComponentKind::Acted, index, p: f.p, exponent: f.beta });
        }
        for (index, f) in self.acting.iter().enumerate() {
            out.push(Component { kind: ComponentKind::Acting, index, p: f.p, exponent: f.k });
        }
        out
    }

    pub fn decompose_element(&self, g: usize) -> ElementComponents {
        let comps = self.components();
        let mut digits = vec![0u64; comps.len()];
        let mut x = g as u64;
        for (slot, c) in digits.iter_mut().zip(&comps).rev() {
            *slot = x % c.modulus();
            x /= c.modulus();
        }
        let (v, s) = (self.abar.len(), self.acted.len());
        ElementComponents { a: digits[..v].to_vec(), b: digits[v..v + s].to_vec(), c: digits[v + s..].to_vec() }
    }

    pub fn compose_element(&self, parts: &ElementComponents) -> usize {
        let digits = parts.a.iter().chain(&parts.b).chain(&parts.c);
        let mut x = 0u64;
        for (d, c) in digits.zip(self.components()) {
            x = x * c.modulus() + d % c.modulus();
        }
        x as usize
    }

    /// The brace `Ā × B̄` as tables.
    pub fn build(&self) -> Result<LeftBrace, SpecError> {
        self.validate()?;
        let abar = self
            .abar
            .iter()
            .try_fold(LeftBrace::trivial(1), |acc, f| Ok::<_, SpecError>(acc.direct_product(&f.brace()?)))?;
        let acted = self
            .acted
            .iter()
            .fold(LeftBrace::trivial(1), |acc, f| acc.direct_product(&LeftBrace::trivial(f.order() as usize)));
        let acting_braces: Vec<LeftBrace> = self.acting.iter().map(BraceFactorSpec::brace).collect::<Result<_, _>>()?;
        let logs: Vec<Vec<u64>> = acting_braces.iter().map(discrete_logs).collect();
        let acting = acting_braces.iter().fold(LeftBrace::trivial(1), |acc, b| acc.direct_product(b));

        let acted_moduli: Vec<u64> = self.acted.iter().map(ActedFactor::order).collect();
        let acting_moduli: Vec<u64> = self.acting.iter().map(BraceFactorSpec::order).collect();
        let alpha: Vec<Perm> = (0..acting.order())
            .map(|c| {
                let cs = mixed_radix_digits(c as u64, &acting_moduli);
                let multipliers: Vec<u64> = (0..self.acted.len())
                    .map(|j| {
                        (0..self.acting.len()).fold(1 % acted_moduli[j], |acc, i| {
                            acc * pow_mod(self.unit(i, j), logs[i][cs[i] as usize], acted_moduli[j]) % acted_moduli[j]
                        })
                    })
                    .collect();
                let images = (0..acted.order())
                    .map(|b| {
                        let bs = mixed_radix_digits(b as u64, &acted_moduli);
                        let scaled: Vec<u64> =
                            bs.iter().zip(&multipliers).zip(&acted_moduli).map(|((x, w), m)| x * w % m).collect();
                        mixed_radix_value(&scaled, &acted_moduli) as usize
                    })
                    .collect();
                Perm::from_images_unchecked(images)
            })
            .collect();
        let bbar = acted.semidirect_product(&acting, &alpha)?;
        Ok(abar.direct_product(&bbar))
    }

    /// Socle exponents read off the factor tables and the kernel of `α`.
    pub fn structured_socle(&self) -> Result<StructuredSocleData, SpecError> {
        self.validate()?;
        let exponent = |size: usize, p: u64| log_exact(size as u64, p).expect("socle of a p-brace is a p-group");
        let d = self
            .abar
            .iter()
            .map(|f| Ok(exponent(f.brace()?.socle().len(), f.p)))
            .collect::<Result<Vec<_>, SpecError>>()?;
        let mut f = Vec::new();
        let mut fprime = Vec::new();
        for (i, fs) in self.acting.iter().enumerate() {
            let b = fs.brace()?;
            let soc = b.socle();
            let logs = discrete_logs(&b);
            f.push(exponent(soc.len(), fs.p));
            let in_kernel = |x: usize| {
                (0..self.acted.len()).all(|j| pow_mod(self.unit(i, j), logs[x], self.acted[j].order()) == 1)
            };
            let kernel_part = soc.elements().iter().filter(|&&x| in_kernel(x)).count();
            fprime.push(exponent(kernel_part, fs.p));
        }
        Ok(StructuredSocleData { d, f, fprime })
    }

    /// Order of `Soc(Ā) × B_{m+1} × … × B_r × I_1 × … × I_m`.
    pub fn structured_socle_order(&self) -> Result<u64, SpecError> {
        let s = self.structured_socle()?;
        let a: u64 = self.abar.iter().zip(&s.d).map(|(f, &d)| f.p.pow(d)).product();
        let b: u64 = self.acted.iter().map(ActedFactor::order).product();
        let c: u64 = self.acting.iter().zip(&s.fprime).map(|(f, &e)| f.p.pow(e)).product();
        Ok(a * b * c)
    }

    /// `max{⌈(γ_j−d_j)/d_j⌉, ⌈(β_i−f'_i)/f_i⌉} + 1`, and 0 for the
    /// one-element brace.
    pub fn mpl_formula(&self) -> Result<usize, SpecError> {
        let s = self.structured_socle()?;
        if self.order() == 1 {
            return Ok(0);
        }
        let abar_terms = self.abar.iter().zip(&s.d).map(|(f, &d)| (f.k - d).div_ceil(d));
        let acting_terms =
            self.acting.iter().zip(s.f.iter().zip(&s.fprime)).map(|(b, (&f, &fp))| (b.k - fp).div_ceil(f));
        Ok(abar_terms.chain(acting_terms).max().unwrap_or(0) as usize + 1)
    }

    /// Action of the canonical generator of the cyclic complement on
    /// `Z/m₁`, as one unit modulo `m₁` (CRT over the acted factors).
    fn combined_unit(&self) -> u64 {
        let residues: Vec<(u64, u64)> = (0..self.acted.len())
            .map(|j| {
                let m = self.acted[j].order();
                ((0..self.acting.len()).fold(1, |acc, i| acc * self.unit(i, j) % m), m)
            })
            .collect();
        crt(&residues).0
    }

    pub fn invariant_quadruple(&self) -> Result<InvariantQuadruple, SpecError> {
        self.validate()?;
        let m1: u64 = self.acted.iter().map(ActedFactor::order).product();
        let n1: u64 = self.abar.iter().chain(&self.acting).map(BraceFactorSpec::order).product();
        let r1 = canonical_r(self.combined_unit(), m1);
        let t: u64 = self.abar.iter().chain(&self.acting).map(|f| f.p.pow(f.t)).product::<u64>()
            * self.acted.iter().map(ActedFactor::order).product::<u64>();
        Ok(InvariantQuadruple { m1, n1, r1, t })
    }

    /// Brace automorphisms of the built brace from their closed form:
    /// componentwise multiplication by `1+s` with `s ∈ Soc(A_j)` on `Ā`,
    /// by any unit on the acted factors and by `1+s` with `s ∈ I_j` on the
    /// acting factors. Sorted by image array.
    pub fn structured_automorphisms(&self) -> Result<Vec<Perm>, SpecError> {
        self.validate()?;
        let mut choices: Vec<Vec<u64>> = Vec::new();
        for f in &self.abar {
            let soc = f.brace()?.socle();
            choices.push(unit_shifts(soc.elements(), f.order()));
        }
        for f in &self.acted {
            choices.push(units(f.order()));
        }
        for (i, f) in self.acting.iter().enumerate() {
            let b = f.brace()?;
            let logs = discrete_logs(&b);
            let kernel_socle: Vec<usize> = b
                .socle()
                .elements()
                .iter()
                .copied()
                .filter(|&x| (0..self.acted.len()).all(|j| pow_mod(self.unit(i, j), logs[x], self.acted[j].order()) == 1))
                .collect();
            choices.push(unit_shifts(&kernel_socle, f.order()));
        }
        let moduli: Vec<u64> = self.components().iter().map(Component::modulus).collect();
        let n = self.order();
        let mut out = Vec::new();
        let mut pick = vec![0usize; choices.len()];
        loop {
            let mult: Vec<u64> = pick.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
            let images = (0..n)
                .map(|x| {
                    let ds = mixed_radix_digits(x, &moduli);
                    let scaled: Vec<u64> = ds.iter().zip(&mult).zip(&moduli).map(|((d, u), m)| d * u % m).collect();
                    mixed_radix_value(&scaled, &moduli) as usize
                })
                .collect();
            out.push(Perm::from_images_unchecked(images));
            // odometer over the per-component choices
            let mut pos = pick.len();
            loop {
                if pos == 0 {
                    out.sort();
                    return Ok(out);
                }
                pos -= 1;
                pick[pos] += 1;
                if pick[pos] < choices[pos].len() {
                    break;
                }
                pick[pos] = 0;
            }
        }
    }

    /// Whether the built braces of `self` and `other` are isomorphic,
    /// decided on the parameters: the factor lists must agree and every
    /// acting factor may only rescale its units `u_{i,j} ↦ u_{i,j}^e`,
    /// with `γ ↦ γ^{∘e}` an automorphism of that factor.
    pub fn is_isomorphic_to(&self, other: &ZGroupBraceSpec) -> Result<bool, SpecError> {
        self.validate()?;
        other.validate()?;
        if self.abar != other.abar || self.acting != other.acting || self.acted != other.acted {
            return Ok(false);
        }
        for (i, f) in self.acting.iter().enumerate() {
            let b = f.brace()?;
            let logs = discrete_logs(&b);
            let exponents: Vec<u64> =
                unit_shifts(b.socle().elements(), f.order()).into_iter().map(|w| logs[w as usize]).collect();
            let matches = exponents.iter().any(|&e| {
                (0..self.acted.len()).all(|j| {
                    pow_mod(self.unit(i, j), e, self.acted[j].order()) == other.unit(i, j)
                })
            });
            if !matches {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Units of `Z/modulus` of the form `1 + s`, `s` in `shifts`, increasing.
fn unit_shifts(shifts: &[usize], modulus: u64) -> Vec<u64> {
    let mut out: Vec<u64> =
        shifts.iter().map(|&s| (1 + s as u64) % modulus).filter(|&u| gcd(u, modulus) == 1).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn mixed_radix_digits(mut x: u64, moduli: &[u64]) -> Vec<u64> {
    let mut digits = vec![0; moduli.len()];
    for (d, &m) in digits.iter_mut().zip(moduli).rev() {
        *d = x % m;
        x /= m;
    }
    digits
}

fn mixed_radix_value(digits: &[u64], moduli: &[u64]) -> u64 {
    digits.iter().zip(moduli).fold(0, |acc, (&d, &m)| acc * m + d)
}

/// Least generator of the cyclic subgroup `⟨r⟩` of `(Z/m)^×`; 0 when
/// `m == 1`.
pub fn canonical_r(r: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let ord = mult_order(r % m, m);
    (1..=ord).filter(|&w| gcd(w, ord) == 1).map(|w| pow_mod(r, w, m)).min().expect("w = 1 qualifies")
}

/// Whether `(m₁, n₁, r₁)` describes a Z-group.
pub fn is_valid_triple(m1: u64, n1: u64, r1: u64) -> bool {
    if m1 == 0 || n1 == 0 {
        return false;
    }
    if m1 == 1 {
        return r1 == 0;
    }
    r1 < m1 && gcd(((r1 + m1 - 1) % m1) * n1 % m1, m1) == 1 && pow_mod(r1, n1, m1) == 1
}

/// `Z/m₁ ⋊ Z/n₁` with `(a,b)(c,d) = (a + r₁^b·c, b + d)`; element `(a,b)`
/// is index `a·n₁ + b`.
pub fn zgroup_from_triple(m1: u64, n1: u64, r1: u64) -> Result<GroupTable, AlgebraError> {
    if !is_valid_triple(m1, n1, r1) {
        return Err(AlgebraError::InvalidTriple(format!(
            "(m1, n1, r1) = ({m1}, {n1}, {r1}) needs r1 < m1, gcd((r1-1)n1, m1) = 1 and r1^n1 ≡ 1 mod m1"
        )));
    }
    let n = (m1 * n1) as usize;
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n as u64 {
        let (a, b) = (x / n1, x % n1);
        for y in 0..n as u64 {
            let (c, d) = (y / n1, y % n1);
            let first = (a + pow_mod(r1, b, m1) * c) % m1;
            mul.push((first * n1 + (b + d) % n1) as usize);
        }
    }
    Ok(GroupTable::from_trusted(n, mul, 0))
}

/// Canonical triples `(m₁, n₁, r₁)` with `m₁·n₁ = n`, one per isomorphism
/// class of Z-groups of order `n`, sorted.
pub fn zgroup_triples(n: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for m1 in (1..=n).filter(|m| n.is_multiple_of(*m)) {
        let n1 = n / m1;
        if gcd(m1, n1) != 1 {
            continue;
        }
        if m1 == 1 {
            out.push((1, n1, 0));
            continue;
        }
        let mut rs: Vec<u64> = units(m1)
            .into_iter()
            .filter(|&r| is_valid_triple(m1, n1, r))
            .map(|r| canonical_r(r, m1))
            .collect();
        rs.sort_unstable();
        rs.dedup();
        out.extend(rs.into_iter().map(|r| (m1, n1, r)));
    }
    out.sort_unstable();
    out
}

/// Structured form of a cyclic brace of odd order with Z-group `(A,∘)`.
pub fn decompose_brace(brace: &LeftBrace) -> Result<ZGroupBraceSpec, SpecError> {
    decompose_brace_with_witness(brace).map(|(spec, _)| spec)
}

/// Like [`decompose_brace`], also returning a brace isomorphism from the
/// built brace of that spec onto `brace`.
pub fn decompose_brace_with_witness(brace: &LeftBrace) -> Result<(ZGroupBraceSpec, Perm), SpecError> {
    let n = brace.order();
    if n.is_multiple_of(2) {
        return Err(SpecError::EvenOrder(n as u64));
    }
    let generator = (0..n)
        .find(|&x| brace.additive_order(x) == n)
        .ok_or_else(|| SpecError::NotDecomposable("additive group is not cyclic".into()))?;
    if !brace.mul_group().is_zgroup() {
        return Err(SpecError::NotDecomposable("multiplicative group is not a Z-group".into()));
    }

    struct Sylow {
        p: u64,
        e: u32,
        t: u32,
        /// `coords[j]` is the element `j·ψ(1)` of `A` (the image of `j` under
        /// the brace isomorphism `B(p,e,t) → A_p`), or `j·e_p` when `A_p` is
        /// trivial.
        coords: Vec<usize>,
        /// index in `coords` of each element of `A_p`
        index: std::collections::HashMap<usize, usize>,
    }

    let mut sylows: Vec<Sylow> = Vec::new();
    for (p, e) in factorize(n as u64) {
        let size = p.pow(e) as usize;
        let base = brace.scale(n / size, generator);
        let along: Vec<usize> = (0..size).map(|j| brace.scale(j, base)).collect();
        let position: std::collections::HashMap<usize, usize> = along.iter().enumerate().map(|(j, &x)| (x, j)).collect();
        let mut mul = Vec::with_capacity(size * size);
        for &x in &along {
            for &y in &along {
                mul.push(position[&brace.mul(x, y)]);
            }
        }
        let add: Vec<usize> = (0..size * size).map(|i| (i / size + i % size) % size).collect();
        let sub = LeftBrace::from_flat_trusted(size, add, mul);
        let t = log_exact(sub.socle().len() as u64, p)
            .ok_or_else(|| SpecError::NotDecomposable(format!("socle of the Sylow {p}-subgroup is not a {p}-group")))?;
        if t == 0 {
            return Err(SpecError::NotDecomposable(format!("Sylow {p}-subbrace has trivial socle")));
        }
        let model = LeftBrace::bpkt(p, e, t)?;
        // the isomorphism B(p,e,t) → sub is j ↦ w·j for some unit w
        let w = units(size as u64)
            .into_iter()
            .map(|w| w as usize)
            .find(|&w| (0..size).all(|a| (0..size).all(|b| w * model.mul(a, b) % size == sub.mul(w * a % size, w * b % size))))
            .ok_or_else(|| SpecError::NotDecomposable(format!("Sylow {p}-subbrace is not of the form B({p},{e},t)")))?;
        let coords: Vec<usize> = (0..size).map(|j| along[w * j % size]).collect();
        let index = coords.iter().enumerate().map(|(j, &x)| (x, j)).collect();
        sylows.push(Sylow { p, e, t, coords, index });
    }

    // cross actions λ_{ψ_p(1)} on A_q, as units of Z/q^e
    let k = sylows.len();
    let mut cross = vec![vec![1u64; k]; k];
    for (pi, sp) in sylows.iter().enumerate() {
        let gamma = sp.coords[1 % sp.coords.len()];
        for (qi, sq) in sylows.iter().enumerate() {
            if pi == qi {
                continue;
            }
            let unit_elem = sq.coords[1 % sq.coords.len()];
            let image = brace.lambda(gamma).apply(unit_elem);
            let u = *sq
                .index
                .get(&image)
                .ok_or_else(|| SpecError::NotDecomposable("λ does not preserve a Sylow subgroup".into()))?;
            cross[pi][qi] = u as u64;
        }
    }
    let is_acting = |i: usize| (0..k).any(|j| cross[i][j] != 1 % sylows[j].coords.len().max(2) as u64);
    let is_acted = |j: usize| (0..k).any(|i| cross[i][j] != 1 % sylows[j].coords.len().max(2) as u64);

    let mut spec = ZGroupBraceSpec::default();
    let mut acting_ids = Vec::new();
    let mut acted_ids = Vec::new();
    let mut abar_ids = Vec::new();
    for (i, s) in sylows.iter().enumerate() {
        match (is_acting(i), is_acted(i)) {
            (true, true) => {
                return Err(SpecError::NotDecomposable(format!("prime {} both acts and is acted on", s.p)));
            }
            (true, false) => {
                spec.acting.push(BraceFactorSpec::new(s.p, s.e, s.t));
                acting_ids.push(i);
            }
            (false, true) => {
                if s.t != s.e {
                    return Err(SpecError::NotDecomposable(format!("acted Sylow {}-subbrace is not trivial", s.p)));
                }
                spec.acted.push(ActedFactor { p: s.p, beta: s.e });
                acted_ids.push(i);
            }
            (false, false) => {
                spec.abar.push(BraceFactorSpec::new(s.p, s.e, s.t));
                abar_ids.push(i);
            }
        }
    }
    for (i, &pi) in acting_ids.iter().enumerate() {
        for (j, &qj) in acted_ids.iter().enumerate() {
            if cross[pi][qj] != 1 {
                spec.action.push(ActionEntry { i, j, u: cross[pi][qj] });
            }
        }
    }
    spec.validate()?;

    // Φ(a, b, c) = Σ coords of every component
    let order: Vec<usize> = abar_ids.iter().chain(&acted_ids).chain(&acting_ids).copied().collect();
    let moduli: Vec<u64> = order.iter().map(|&i| sylows[i].coords.len() as u64).collect();
    let images: Vec<usize> = (0..n as u64)
        .map(|x| {
            mixed_radix_digits(x, &moduli)
                .iter()
                .zip(&order)
                .fold(0, |acc, (&d, &i)| brace.add(acc, sylows[i].coords[d as usize]))
        })
        .collect();
    let phi = Perm::from_images(images)
        .map_err(|_| SpecError::NotDecomposable("component map is not a bijection".into()))?;
    let built = spec.build()?;
    let preserves = (0..n).all(|x| {
        (0..n).all(|y| {
            phi.apply(built.add(x, y)) == brace.add(phi.apply(x), phi.apply(y))
                && phi.apply(built.mul(x, y)) == brace.mul(phi.apply(x), phi.apply(y))
        })
    });
    if !preserves {
        return Err(SpecError::NotDecomposable("structured form is not isomorphic to the input".into()));
    }
    Ok((spec, phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order21() -> ZGroupBraceSpec {
        ZGroupBraceSpec {
            acting: vec![BraceFactorSpec::new(3, 1, 1)],
            acted: vec![ActedFactor { p: 7, beta: 1 }],
            action: vec![ActionEntry { i: 0, j: 0, u: 2 }],
            ..Default::default()
        }
    }

    fn order63() -> ZGroupBraceSpec {
        ZGroupBraceSpec {
            acting: vec![BraceFactorSpec::new(3, 2, 1)],
            acted: vec![ActedFactor { p: 7, beta: 1 }],
            action: vec![ActionEntry { i: 0, j: 0, u: 2 }],
            ..Default::default()
        }
    }

    fn abar_only(factors: &[(u64, u32, u32)]) -> ZGroupBraceSpec {
        ZGroupBraceSpec {
            abar: factors.iter().map(|&(p, k, t)| BraceFactorSpec::new(p, k, t)).collect(),
            ..Default::default()
        }
    }

    #[test]
    fn triples_and_groups() {
        let c5 = zgroup_from_triple(1, 5, 0).unwrap();
        assert!(c5.find_isomorphism(&LeftBrace::trivial(5).mul_group()).is_some());
        let g2 = zgroup_from_triple(7, 3, 2).unwrap();
        let g4 = zgroup_from_triple(7, 3, 4).unwrap();
        assert!(g2.is_zgroup() && !g2.is_abelian());
        assert!(g2.find_isomorphism(&g4).is_some());
        assert!(zgroup_from_triple(7, 3, 3).is_err());
        assert!(zgroup_from_triple(7, 3, 1).is_err());
        assert_eq!(zgroup_triples(21), vec![(1, 21, 0), (7, 3, 2)]);
        assert_eq!(zgroup_triples(33), vec![(1, 33, 0)]);
        assert_eq!(zgroup_triples(63), vec![(1, 63, 0), (7, 9, 2)]);
        assert_eq!(canonical_r(4, 7), 2);
    }

    #[test]
    fn build_examples() {
        let direct = abar_only(&[(3, 2, 1), (5, 1, 1)]).build().unwrap();
        assert_eq!(direct, LeftBrace::bpkt(3, 2, 1).unwrap().direct_product(&LeftBrace::trivial(5)));
        let b21 = order21().build().unwrap();
        assert_eq!(b21.order(), 21);
        assert!(LeftBrace::validate(&b21.add_rows(), &b21.mul_rows()).is_ok());
        assert!(b21.is_additively_cyclic());
        let g = b21.mul_group();
        assert!(g.is_zgroup() && !g.is_abelian());
        let b63 = order63().build().unwrap();
        assert!(LeftBrace::validate(&b63.add_rows(), &b63.mul_rows()).is_ok());
        assert!(b63.is_additively_cyclic() && b63.mul_group().is_zgroup());
        assert!(b63.mul_group().find_isomorphism(&zgroup_from_triple(7, 9, 2).unwrap()).is_some());
    }

    #[test]
    fn spec_validation() {
        let mut s = order21();
        s.action[0].u = 3; // order 6, not dividing 3
        assert!(s.validate().is_err());
        let mut s = order21();
        s.action.clear();
        assert!(s.validate().is_err());
        let s = abar_only(&[(3, 1, 1), (3, 1, 1)]);
        assert!(s.validate().is_err());
        assert!(matches!(abar_only(&[(2, 1, 1)]).validate(), Err(SpecError::EvenOrder(2))));
        assert!(abar_only(&[(5, 1, 1), (3, 1, 1)]).validate().is_err());
        assert!(abar_only(&[(3, 2, 3)]).validate().is_err());
        assert!(ZGroupBraceSpec::default().validate().is_ok());
        assert_eq!(ZGroupBraceSpec::default().build().unwrap().order(), 1);
    }

    #[test]
    fn element_components_round_trip() {
        let spec = ZGroupBraceSpec { abar: vec![BraceFactorSpec::new(5, 1, 1)], ..order21() };
        for g in 0..spec.order() as usize {
            assert_eq!(spec.compose_element(&spec.decompose_element(g)), g);
        }
        let parts = spec.decompose_element(7 * 3 + 3 + 2);
        assert_eq!(parts, ElementComponents { a: vec![1], b: vec![1], c: vec![2] });
    }

    #[test]
    fn socle_data() {
        let s = order21().structured_socle().unwrap();
        assert_eq!((s.f.clone(), s.fprime.clone()), (vec![1], vec![0]));
        assert_eq!(order21().structured_socle_order().unwrap(), 7);
        assert_eq!(order21().build().unwrap().socle().len(), 7);
        assert_eq!(abar_only(&[(3, 2, 1)]).structured_socle().unwrap().d, vec![1]);
        let all_trivial = abar_only(&[(3, 1, 1), (5, 2, 2)]);
        assert_eq!(all_trivial.structured_socle_order().unwrap(), 75);
        assert_eq!(all_trivial.build().unwrap().socle().len(), 75);
        let s63 = order63().structured_socle().unwrap();
        assert_eq!((s63.f, s63.fprime), (vec![1], vec![1]));
    }

    #[test]
    fn level_formula() {
        assert_eq!(order21().mpl_formula().unwrap(), 2);
        assert_eq!(order63().mpl_formula().unwrap(), 2);
        assert_eq!(abar_only(&[(3, 3, 1)]).mpl_formula().unwrap(), 3);
        assert_eq!(abar_only(&[(5, 3, 2)]).mpl_formula().unwrap(), 2);
        assert_eq!(abar_only(&[(3, 1, 1), (5, 1, 1)]).mpl_formula().unwrap(), 1);
        assert_eq!(ZGroupBraceSpec::default().mpl_formula().unwrap(), 0);
    }

    #[test]
    fn quadruples() {
        let q = |s: ZGroupBraceSpec| {
            let x = s.invariant_quadruple().unwrap();
            (x.m1, x.n1, x.r1, x.t)
        };
        assert_eq!(q(abar_only(&[(3, 2, 2)])), (1, 9, 0, 9));
        assert_eq!(q(abar_only(&[(3, 2, 1)])), (1, 9, 0, 3));
        assert_eq!(q(order21()), (7, 3, 2, 21));
        let mut other = order21();
        other.action[0].u = 4;
        assert_eq!(q(other), (7, 3, 2, 21));
    }

    #[test]
    fn structured_automorphisms_match_brute_force() {
        for spec in [order21(), abar_only(&[(3, 2, 1)]), abar_only(&[(3, 2, 1), (5, 1, 1)]), order63()] {
            let closed = spec.structured_automorphisms().unwrap();
            let brute = spec.build().unwrap().automorphisms().unwrap();
            assert_eq!(closed, brute, "{spec:?}");
        }
    }

    #[test]
    fn decomposition() {
        let t15 = decompose_brace(&LeftBrace::trivial(15)).unwrap();
        assert_eq!(t15, abar_only(&[(3, 1, 1), (5, 1, 1)]));
        let built = order21().build().unwrap();
        let (spec, phi) = decompose_brace_with_witness(&built).unwrap();
        assert_eq!(spec.acting, order21().acting);
        assert_eq!(spec.acted, order21().acted);
        let rebuilt = spec.build().unwrap();
        assert!(built.find_isomorphism(&rebuilt).unwrap().is_some());
        for x in 0..21 {
            for y in 0..21 {
                assert_eq!(phi.apply(rebuilt.mul(x, y)), built.mul(phi.apply(x), phi.apply(y)));
            }
        }
        let p45 = LeftBrace::bpkt(3, 2, 1).unwrap().direct_product(&LeftBrace::trivial(5));
        assert_eq!(decompose_brace(&p45).unwrap(), abar_only(&[(3, 2, 1), (5, 1, 1)]));
        assert!(decompose_brace(&LeftBrace::trivial(4)).is_err());
        let klein3 = LeftBrace::trivial(3).direct_product(&LeftBrace::trivial(3));
        assert!(decompose_brace(&klein3).is_err());
    }
}
