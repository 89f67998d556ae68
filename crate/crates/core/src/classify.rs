//! Isomorphism classes of uniconnected cycle sets of odd order whose
//! permutation group is a Z-group.
//!
//! Every such cycle set is `A_g` for a cyclic brace `A = Ā × B̄` and an
//! additive generator `g`. Two generators give isomorphic cycle sets iff
//! their `Ā` components agree modulo `q_j^{min{γ_j−d_j, d_j}}` and their
//! acting components agree modulo `p_j^{min{β_j−f'_j, f_j}}`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, gcd, is_square_free, pow_mod, units};
use crate::brace::{LeftBrace, BRUTE_FORCE_BOUND};
use crate::cycleset::CycleSet;
use crate::error::ClassifyError;
use crate::io::CycleSetJson;
use crate::zgroup::{
    zgroup_triples, ActedFactor, ActionEntry, BraceFactorSpec, ElementComponents, InvariantQuadruple,
    ZGroupBraceSpec,
};

/// One brace up to isomorphism with one cycle set per isomorphism class.
#[derive(Clone, Debug)]
pub struct ClassifiedFamily {
    pub spec: ZGroupBraceSpec,
    /// `(g, A_g)` with `g` the canonical base point of its class.
    pub representatives: Vec<(usize, CycleSet)>,
    pub count: usize,
    pub mpl: usize,
    pub quadruple: InvariantQuadruple,
}

/// Residue moduli `(q_j^{z₁}, p_j^{z₂})` used to compare base points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassModuli {
    pub abar: Vec<u64>,
    pub acting: Vec<u64>,
}

pub fn class_moduli(spec: &ZGroupBraceSpec) -> Result<ClassModuli, ClassifyError> {
    let s = spec.structured_socle()?;
    let abar = spec.abar.iter().zip(&s.d).map(|(f, &d)| f.p.pow((f.k - d).min(d))).collect();
    let acting = spec
        .acting
        .iter()
        .zip(s.f.iter().zip(&s.fprime))
        .map(|(f, (&fs, &fp))| f.p.pow((f.k - fp).min(fs)))
        .collect();
    Ok(ClassModuli { abar, acting })
}

/// The additive generators of `A`, checked to lie in a transitive cycle
/// base.
pub fn base_points(brace: &LeftBrace) -> Result<Vec<usize>, ClassifyError> {
    if !brace.is_additively_cyclic() {
        return Err(ClassifyError::NotCyclic);
    }
    let n = brace.order();
    let points: Vec<usize> = (0..n).filter(|&x| brace.additive_order(x) == n).collect();
    if let Some(&bad) = points.iter().find(|&&g| !brace.in_transitive_cycle_base(g)) {
        return Err(ClassifyError::NotABasePoint(bad));
    }
    Ok(points)
}

fn residues(parts: &ElementComponents, moduli: &ClassModuli) -> Vec<u64> {
    parts
        .a
        .iter()
        .zip(&moduli.abar)
        .chain(parts.c.iter().zip(&moduli.acting))
        .map(|(x, m)| x % m)
        .collect()
}

fn is_base_point(spec: &ZGroupBraceSpec, g: usize) -> bool {
    let parts = spec.decompose_element(g);
    let digits = parts.a.iter().chain(&parts.b).chain(&parts.c);
    (g as u64) < spec.order() && digits.zip(spec.components()).all(|(&d, c)| gcd(d, c.p) == 1)
}

/// Whether `A_g ≅ A_{g'}` according to the residue criterion.
pub fn iso_by_theorem(spec: &ZGroupBraceSpec, g: usize, h: usize) -> Result<bool, ClassifyError> {
    let moduli = class_moduli(spec)?;
    for x in [g, h] {
        if !is_base_point(spec, x) {
            return Err(ClassifyError::NotABasePoint(x));
        }
    }
    Ok(residues(&spec.decompose_element(g), &moduli) == residues(&spec.decompose_element(h), &moduli))
}

/// `∏ k_i · ∏ l_j`.
pub fn count_classes(spec: &ZGroupBraceSpec) -> Result<usize, ClassifyError> {
    let moduli = class_moduli(spec)?;
    let primes = spec.abar.iter().chain(&spec.acting).map(|f| f.p);
    Ok(moduli
        .abar
        .iter()
        .chain(&moduli.acting)
        .zip(primes)
        .map(|(&m, p)| if m == 1 { 1 } else { (m / p * (p - 1)) as usize })
        .product())
}

/// Least residue tuple of each class, in lexicographic order.
fn residue_tuples(moduli: &ClassModuli) -> Vec<Vec<u64>> {
    let per_slot: Vec<Vec<u64>> = moduli
        .abar
        .iter()
        .chain(&moduli.acting)
        .map(|&m| if m == 1 { vec![1] } else { units(m) })
        .collect();
    let mut out = vec![Vec::new()];
    for slot in &per_slot {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                slot.iter().map(move |&r| {
                    let mut v = prefix.clone();
                    v.push(r);
                    v
                })
            })
            .collect();
    }
    out
}

/// Canonical base point of every class, ordered by residue tuple.
pub fn canonical_base_points(spec: &ZGroupBraceSpec) -> Result<Vec<usize>, ClassifyError> {
    let moduli = class_moduli(spec)?;
    let v = spec.abar.len();
    Ok(residue_tuples(&moduli)
        .into_iter()
        .map(|tuple| {
            let parts = ElementComponents {
                a: tuple[..v].to_vec(),
                b: vec![1; spec.acted.len()],
                c: tuple[v..].to_vec(),
            };
            spec.compose_element(&parts)
        })
        .collect())
}

pub fn enumerate_representatives(spec: &ZGroupBraceSpec) -> Result<ClassifiedFamily, ClassifyError> {
    let brace = spec.build()?;
    classify_built(spec, &brace)
}

fn classify_built(spec: &ZGroupBraceSpec, brace: &LeftBrace) -> Result<ClassifiedFamily, ClassifyError> {
    let points = base_points(brace)?;
    let representatives = canonical_base_points(spec)?
        .into_iter()
        .map(|g| {
            debug_assert!(points.binary_search(&g).is_ok());
            Ok((g, CycleSet::from_brace_uniconnected(brace, g)?))
        })
        .collect::<Result<Vec<_>, ClassifyError>>()?;
    Ok(ClassifiedFamily {
        spec: spec.normalized(),
        count: representatives.len(),
        representatives,
        mpl: spec.mpl_formula()?,
        quadruple: spec.invariant_quadruple()?,
    })
}

fn role_assignments(k: usize) -> Vec<Vec<u8>> {
    (0..3usize.pow(k as u32))
        .map(|mut code| {
            (0..k)
                .map(|_| {
                    let r = (code % 3) as u8;
                    code /= 3;
                    r
                })
                .collect()
        })
        .collect()
}

/// Every valid spec of order `n`, sorted, with duplicates of the same
/// parameters removed but isomorphic braces still repeated.
pub fn all_specs(n: u64) -> Result<Vec<ZGroupBraceSpec>, ClassifyError> {
    if n.is_multiple_of(2) {
        return Err(ClassifyError::EvenOrder(n));
    }
    let primes = factorize(n);
    let mut out = Vec::new();
    for roles in role_assignments(primes.len()) {
        // 0 = abar, 1 = acting, 2 = acted
        let pick = |r: u8| primes.iter().zip(&roles).filter(move |(_, &x)| x == r).map(|(&pe, _)| pe);
        let abar: Vec<(u64, u32)> = pick(0).collect();
        let acting: Vec<(u64, u32)> = pick(1).collect();
        let acted: Vec<ActedFactor> = pick(2).map(|(p, beta)| ActedFactor { p, beta }).collect();
        if acting.is_empty() != acted.is_empty() {
            continue;
        }
        let unit_choices: Vec<(usize, usize, Vec<u64>)> = (0..acting.len())
            .flat_map(|i| (0..acted.len()).map(move |j| (i, j)))
            .map(|(i, j)| {
                let (p, k) = acting[i];
                let m = acted[j].order();
                (i, j, units(m).into_iter().filter(|&u| pow_mod(u, p.pow(k), m) == 1).collect())
            })
            .collect();
        let t_choices = |factors: &[(u64, u32)]| -> Vec<Vec<BraceFactorSpec>> {
            factors.iter().fold(vec![Vec::new()], |acc, &(p, k)| {
                acc.into_iter()
                    .flat_map(|prefix| {
                        (1..=k).map(move |t| {
                            let mut v = prefix.clone();
                            v.push(BraceFactorSpec::new(p, k, t));
                            v
                        })
                    })
                    .collect()
            })
        };
        let actions: Vec<Vec<ActionEntry>> = unit_choices.iter().fold(vec![Vec::new()], |acc, (i, j, us)| {
            acc.into_iter()
                .flat_map(|prefix| {
                    us.iter().map(move |&u| {
                        let mut v = prefix.clone();
                        if u != 1 {
                            v.push(ActionEntry { i: *i, j: *j, u });
                        }
                        v
                    })
                })
                .collect()
        });
        for abar_fs in t_choices(&abar) {
            for acting_fs in t_choices(&acting) {
                for action in &actions {
                    let spec = ZGroupBraceSpec {
                        abar: abar_fs.clone(),
                        acting: acting_fs.clone(),
                        acted: acted.clone(),
                        action: action.clone(),
                    };
                    if spec.validate().is_ok() {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Families of all uniconnected cycle sets of order `n` with Z-group
/// permutation group, one per brace isomorphism class, sorted by
/// quadruple.
pub fn enumerate_order(n: u64) -> Result<Vec<ClassifiedFamily>, ClassifyError> {
    if n.is_multiple_of(2) {
        return Err(ClassifyError::EvenOrder(n));
    }
    let specs = all_specs(n)?;
    let built: Vec<(ZGroupBraceSpec, LeftBrace, InvariantQuadruple)> = specs
        .into_par_iter()
        .map(|s| {
            let b = s.build()?;
            let q = s.invariant_quadruple()?;
            Ok((s, b, q))
        })
        .collect::<Result<_, ClassifyError>>()?;

    // isomorphism invariants of the brace: (m1, n1, t, |Soc|)
    let mut buckets: BTreeMap<(u64, u64, u64, usize), Vec<usize>> = BTreeMap::new();
    for (idx, (_, b, q)) in built.iter().enumerate() {
        buckets.entry((q.m1, q.n1, q.t, b.socle().len())).or_default().push(idx);
    }
    let keep: Vec<usize> = buckets
        .into_par_iter()
        .map(|(_, members)| {
            let mut reps: Vec<usize> = Vec::new();
            for &idx in &members {
                let dup = reps.iter().try_fold(false, |found, &r| {
                    if found {
                        return Ok(true);
                    }
                    same_brace(&built[r], &built[idx])
                })?;
                if !dup {
                    reps.push(idx);
                }
            }
            Ok(reps)
        })
        .collect::<Result<Vec<Vec<usize>>, ClassifyError>>()?
        .into_iter()
        .flatten()
        .collect();

    let triples = zgroup_triples(n);
    let mut families: Vec<ClassifiedFamily> = keep
        .into_par_iter()
        .map(|idx| {
            let (spec, brace, q) = &built[idx];
            debug_assert!(triples.contains(&(q.m1, q.n1, q.r1)));
            classify_built(spec, brace)
        })
        .collect::<Result<_, ClassifyError>>()?;
    families.sort_by(|a, b| (a.quadruple, &a.spec).cmp(&(b.quadruple, &b.spec)));
    Ok(families)
}

/// Brace isomorphism by search at desk scale, from the parameters beyond it.
fn same_brace(
    a: &(ZGroupBraceSpec, LeftBrace, InvariantQuadruple),
    b: &(ZGroupBraceSpec, LeftBrace, InvariantQuadruple),
) -> Result<bool, ClassifyError> {
    if a.1.order() <= BRUTE_FORCE_BOUND {
        Ok(a.1.find_isomorphism(&b.1).map_err(crate::error::SpecError::from)?.is_some())
    } else {
        Ok(a.0.is_isomorphic_to(&b.0)?)
    }
}

/// [`enumerate_order`] for odd square-free `n`.
pub fn squarefree_enumerate(n: u64) -> Result<Vec<ClassifiedFamily>, ClassifyError> {
    if n.is_multiple_of(2) {
        return Err(ClassifyError::EvenOrder(n));
    }
    if !is_square_free(n) {
        return Err(ClassifyError::NotSquareFree(n));
    }
    enumerate_order(n)
}

/// One CSV row per isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub order: u64,
    pub m1: u64,
    pub n1: u64,
    pub r1: u64,
    pub t: u64,
    pub class_index: usize,
    pub g: usize,
    pub mpl: usize,
    pub perm_group_abelian: bool,
}

pub fn class_rows(families: &[ClassifiedFamily]) -> Vec<ClassRow> {
    families
        .iter()
        .flat_map(|f| {
            f.representatives.iter().enumerate().map(move |(class_index, (g, x))| ClassRow {
                order: x.size() as u64,
                m1: f.quadruple.m1,
                n1: f.quadruple.n1,
                r1: f.quadruple.r1,
                t: f.quadruple.t,
                class_index,
                g: *g,
                mpl: f.mpl,
                perm_group_abelian: x.permutation_group().is_abelian(),
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "order,m1,n1,r1,t,class_index,g,mpl,perm_group_abelian";

pub fn to_csv(families: &[ClassifiedFamily]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let rows = class_rows(families);
    if rows.is_empty() {
        writer.write_record(CSV_HEADER.split(',')).expect("writing to memory");
    }
    for r in rows {
        writer.serialize(r).expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("csv output is ASCII")
}

#[derive(Serialize)]
struct RepresentativeJson {
    g: usize,
    cycle_set: CycleSetJson,
}

#[derive(Serialize)]
struct FamilyJson<'a> {
    spec: &'a ZGroupBraceSpec,
    representatives: Vec<RepresentativeJson>,
    count: usize,
    mpl: usize,
    quadruple: InvariantQuadruple,
}

impl Serialize for ClassifiedFamily {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FamilyJson {
            spec: &self.spec,
            representatives: self
                .representatives
                .iter()
                .map(|(g, x)| RepresentativeJson { g: *g, cycle_set: CycleSetJson::from(x) })
                .collect(),
            count: self.count,
            mpl: self.mpl,
            quadruple: self.quadruple,
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abar(p: u64, k: u32, t: u32) -> ZGroupBraceSpec {
        ZGroupBraceSpec { abar: vec![BraceFactorSpec::new(p, k, t)], ..Default::default() }
    }

    fn order21() -> ZGroupBraceSpec {
        ZGroupBraceSpec {
            acting: vec![BraceFactorSpec::new(3, 1, 1)],
            acted: vec![ActedFactor { p: 7, beta: 1 }],
            action: vec![ActionEntry { i: 0, j: 0, u: 2 }],
            ..Default::default()
        }
    }

    #[test]
    fn base_point_examples() {
        assert_eq!(base_points(&LeftBrace::trivial(9)).unwrap(), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(base_points(&LeftBrace::bpkt(3, 2, 1).unwrap()).unwrap(), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(base_points(&order21().build().unwrap()).unwrap().len(), 12);
        let klein = LeftBrace::trivial(3).direct_product(&LeftBrace::trivial(3));
        assert_eq!(base_points(&klein), Err(ClassifyError::NotCyclic));
    }

    #[test]
    fn theorem_examples() {
        let s = abar(3, 2, 1);
        assert!(iso_by_theorem(&s, 1, 1).unwrap());
        assert!(iso_by_theorem(&s, 1, 4).unwrap());
        assert!(!iso_by_theorem(&s, 1, 2).unwrap());
        assert!(iso_by_theorem(&s, 1, 3).is_err());
        let s = order21();
        let c1 = s.compose_element(&ElementComponents { a: vec![], b: vec![1], c: vec![1] });
        let c2 = s.compose_element(&ElementComponents { a: vec![], b: vec![1], c: vec![2] });
        assert!(!iso_by_theorem(&s, c1, c2).unwrap());
    }

    #[test]
    fn counts() {
        assert_eq!(count_classes(&abar(3, 2, 2)).unwrap(), 1);
        assert_eq!(count_classes(&abar(3, 2, 1)).unwrap(), 2);
        assert_eq!(count_classes(&order21()).unwrap(), 2);
        assert_eq!(count_classes(&abar(3, 4, 2)).unwrap(), 6);
    }

    #[test]
    fn representatives() {
        let f = enumerate_representatives(&abar(5, 1, 1)).unwrap();
        assert_eq!(f.count, 1);
        assert!(f.representatives[0].1.are_isomorphic(&CycleSet::shift(5)).unwrap());
        let f = enumerate_representatives(&abar(3, 2, 1)).unwrap();
        assert_eq!(f.representatives.iter().map(|r| r.0).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(f.mpl, 2);
        for (_, x) in &f.representatives {
            assert_eq!(x.mpl(), Some(2));
        }
    }

    #[test]
    fn small_orders() {
        let counts = |n| enumerate_order(n).unwrap().iter().map(|f| f.count).collect::<Vec<_>>();
        assert_eq!(counts(9), vec![2, 1]);
        assert_eq!(counts(15), vec![1]);
        assert_eq!(counts(21), vec![1, 2]);
        let one = enumerate_order(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!((one[0].count, one[0].mpl, one[0].representatives[0].1.mpl()), (1, 0, Some(0)));
        assert_eq!(enumerate_order(22).unwrap_err(), ClassifyError::EvenOrder(22));
        assert_eq!(squarefree_enumerate(45).unwrap_err(), ClassifyError::NotSquareFree(45));
        assert_eq!(squarefree_enumerate(33).unwrap().len(), 1);
    }

    #[test]
    fn csv_rows() {
        let csv = to_csv(&squarefree_enumerate(21).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        let mpls: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(7).unwrap()).collect();
        assert_eq!(mpls, vec!["1", "2", "2"]);
    }
}
