//! Brute-force engines used to check the closed formulas: exhaustive
//! cycle-set enumeration on at most four points, isomorphism partitions by
//! search, and a per-spec cross-validation report.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{base_points, count_classes, iso_by_theorem};
use crate::cycleset::CycleSet;
use crate::error::{ClassifyError, CycleSetError};
use crate::perm::Perm;
use crate::zgroup::ZGroupBraceSpec;

/// Largest size for [`enumerate_all_cycle_sets`].
pub const CENSUS_BOUND: usize = 4;

/// Largest built brace for the isomorphism stage of [`cross_validate`].
pub const CROSS_VALIDATE_BOUND: u64 = 63;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub total_cycle_sets: usize,
    pub iso_classes: usize,
    pub indecomposable_classes: usize,
    pub uniconnected_classes: usize,
    pub multipermutation_classes: usize,
}

fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    permutations(&mut current, 0, &mut out);
    out.sort();
    out
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
    if k == v.len() {
        out.push(Perm::from_images_unchecked(v.clone()));
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Checks `(x·y)·(x·z) = (y·x)·(y·z)` for every triple whose rows are all
/// assigned.
fn consistent(rows: &[Option<Perm>], n: usize) -> bool {
    let op = |x: usize, y: usize| rows[x].as_ref().map(|p| p.apply(y));
    for x in 0..n {
        for y in 0..n {
            let (Some(xy), Some(yx)) = (op(x, y), op(y, x)) else { continue };
            if rows[xy].is_none() || rows[yx].is_none() {
                continue;
            }
            for z in 0..n {
                let lhs = op(xy, op(x, z).unwrap()).unwrap();
                let rhs = op(yx, op(y, z).unwrap()).unwrap();
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Every non-degenerate cycle set on `{0..n−1}`, sorted by table. With a
/// seed, rows are filled in a shuffled order and candidates tried in a
/// shuffled order; the output does not depend on it.
pub fn enumerate_all_cycle_sets(n: usize, seed: Option<u64>) -> Result<Vec<CycleSet>, CycleSetError> {
    if n > CENSUS_BOUND {
        return Err(CycleSetError::TooLarge { size: n, bound: CENSUS_BOUND });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut candidates = all_perms(n);
    let mut row_order: Vec<usize> = (0..n).collect();
    if let Some(s) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        candidates.shuffle(&mut rng);
        row_order.shuffle(&mut rng);
    }
    let first = row_order[0];
    let mut found: Vec<CycleSet> = candidates
        .par_iter()
        .flat_map_iter(|p| {
            let mut rows: Vec<Option<Perm>> = vec![None; n];
            rows[first] = Some(p.clone());
            let mut out = Vec::new();
            if consistent(&rows, n) {
                search(&mut rows, &row_order, 1, &candidates, &mut out);
            }
            out
        })
        .collect();
    found.sort_by_key(CycleSet::table);
    Ok(found)
}

fn search(rows: &mut Vec<Option<Perm>>, order: &[usize], depth: usize, cands: &[Perm], out: &mut Vec<CycleSet>) {
    let n = rows.len();
    if depth == n {
        let x = CycleSet::from_sigmas(rows.iter().map(|r| r.clone().unwrap()).collect());
        if x.law_violation().is_none() && x.squaring_is_bijective() {
            out.push(x);
        }
        return;
    }
    let slot = order[depth];
    for p in cands {
        rows[slot] = Some(p.clone());
        if consistent(rows, n) {
            search(rows, order, depth + 1, cands, out);
        }
    }
    rows[slot] = None;
}

/// Classes of `sets` under isomorphism, as sorted index lists ordered by
/// least member.
pub fn iso_partition(sets: &[CycleSet]) -> Result<Vec<Vec<usize>>, CycleSetError> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, x) in sets.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            if sets[class[0]].are_isomorphic(x)? {
                class.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    Ok(classes)
}

pub fn census(n: usize, seed: Option<u64>) -> Result<CensusReport, CycleSetError> {
    let all = enumerate_all_cycle_sets(n, seed)?;
    let classes = iso_partition(&all)?;
    let reps: Vec<&CycleSet> = classes.iter().map(|c| &all[c[0]]).collect();
    Ok(CensusReport {
        n,
        total_cycle_sets: all.len(),
        iso_classes: classes.len(),
        indecomposable_classes: reps.iter().filter(|x| x.is_indecomposable()).count(),
        uniconnected_classes: reps.iter().filter(|x| x.is_uniconnected()).count(),
        multipermutation_classes: reps.iter().filter(|x| x.mpl().is_some()).count(),
    })
}

/// Outcome of checking the closed formulas on one spec against search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossValidationReport {
    pub order: u64,
    pub theorem_partition_matches_bruteforce: bool,
    pub count_matches: bool,
    pub mpl_matches: bool,
    pub retraction_towers_coincide: bool,
    /// One line per failed check.
    pub witnesses: Vec<String>,
}

impl CrossValidationReport {
    pub fn all_pass(&self) -> bool {
        self.theorem_partition_matches_bruteforce
            && self.count_matches
            && self.mpl_matches
            && self.retraction_towers_coincide
    }
}

fn partition_by<F>(points: &[usize], mut same: F) -> Result<Vec<Vec<usize>>, ClassifyError>
where
    F: FnMut(usize, usize) -> Result<bool, ClassifyError>,
{
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &g in points {
        let mut placed = false;
        for class in classes.iter_mut() {
            if same(class[0], g)? {
                class.push(g);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![g]);
        }
    }
    Ok(classes)
}

/// Partition of the base points of the built brace by the residue
/// criterion.
pub fn theorem_partition(spec: &ZGroupBraceSpec) -> Result<Vec<Vec<usize>>, ClassifyError> {
    let brace = spec.build()?;
    partition_by(&base_points(&brace)?, |g, h| iso_by_theorem(spec, g, h))
}

/// Partition of the base points by isomorphism of the cycle sets `A_g`.
pub fn bruteforce_partition(spec: &ZGroupBraceSpec) -> Result<Vec<Vec<usize>>, ClassifyError> {
    let brace = spec.build()?;
    let points = base_points(&brace)?;
    let sets: Vec<CycleSet> = points
        .par_iter()
        .map(|&g| CycleSet::from_brace_uniconnected(&brace, g))
        .collect::<Result<_, _>>()?;
    let index = |g: usize| points.binary_search(&g).expect("base point");
    partition_by(&points, |g, h| Ok(sets[index(g)].are_isomorphic(&sets[index(h)])?))
}

/// Checks every closed formula on `spec`; the isomorphism stage is skipped
/// (reported as matching) above [`CROSS_VALIDATE_BOUND`].
pub fn cross_validate(spec: &ZGroupBraceSpec) -> Result<CrossValidationReport, ClassifyError> {
    let brace = spec.build()?;
    let order = spec.order();
    let points = base_points(&brace)?;
    let mut witnesses = Vec::new();

    let theorem = theorem_partition(spec)?;
    let (partition_ok, brute_classes) = if order <= CROSS_VALIDATE_BOUND {
        let brute = bruteforce_partition(spec)?;
        if brute != theorem {
            witnesses.push(format!("partition: theorem {theorem:?} vs search {brute:?}"));
        }
        (brute == theorem, brute.len())
    } else {
        (true, theorem.len())
    };

    let count = count_classes(spec)?;
    let count_ok = count == theorem.len() && count == brute_classes;
    if !count_ok {
        witnesses.push(format!(
            "count: formula {count}, theorem classes {}, search classes {brute_classes}",
            theorem.len()
        ));
    }

    let formula = spec.mpl_formula()?;
    let decomposable = CycleSet::from_brace_decomposable(&brace);
    let decomposable_tower = decomposable.retraction_tower();
    let mut mpl_ok = brace.mpl() == Some(formula) && decomposable_tower.mpl() == Some(formula);
    if !mpl_ok {
        witnesses.push(format!(
            "mpl: formula {formula}, brace {:?}, decomposable {:?}",
            brace.mpl(),
            decomposable_tower.mpl()
        ));
    }
    let mut towers_ok = true;
    let expected = decomposable_tower.canonical_partitions();
    for &g in &points {
        let tower = CycleSet::from_brace_uniconnected(&brace, g)?.retraction_tower();
        if tower.mpl() != Some(formula) {
            mpl_ok = false;
            witnesses.push(format!("mpl: base point {g} gives {:?}, formula {formula}", tower.mpl()));
        }
        if tower.canonical_partitions() != expected {
            towers_ok = false;
            witnesses.push(format!("towers differ at base point {g}"));
        }
    }
    Ok(CrossValidationReport {
        order,
        theorem_partition_matches_bruteforce: partition_ok,
        count_matches: count_ok,
        mpl_matches: mpl_ok,
        retraction_towers_coincide: towers_ok,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zgroup::{ActedFactor, ActionEntry, BraceFactorSpec};

    #[test]
    fn tiny_census() {
        assert_eq!(enumerate_all_cycle_sets(1, None).unwrap().len(), 1);
        let two = enumerate_all_cycle_sets(2, None).unwrap();
        assert_eq!(two, vec![CycleSet::projection(2), CycleSet::shift(2)]);
        let r3 = census(3, None).unwrap();
        assert_eq!((r3.iso_classes, r3.indecomposable_classes, r3.uniconnected_classes), (5, 1, 1));
        assert!(enumerate_all_cycle_sets(5, None).is_err());
    }

    #[test]
    fn seeded_search_gives_the_same_list() {
        assert_eq!(enumerate_all_cycle_sets(3, None).unwrap(), enumerate_all_cycle_sets(3, Some(7)).unwrap());
    }

    #[test]
    fn partitions() {
        let x = CycleSet::shift(3);
        let phi = Perm::from_images(vec![2, 0, 1]).unwrap();
        assert_eq!(iso_partition(std::slice::from_ref(&x)).unwrap(), vec![vec![0]]);
        assert_eq!(iso_partition(&[x.clone(), x.relabel(&phi)]).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn cross_validation_examples() {
        let specs = [
            ZGroupBraceSpec { abar: vec![BraceFactorSpec::new(5, 1, 1)], ..Default::default() },
            ZGroupBraceSpec { abar: vec![BraceFactorSpec::new(3, 2, 1)], ..Default::default() },
            ZGroupBraceSpec {
                acting: vec![BraceFactorSpec::new(3, 1, 1)],
                acted: vec![ActedFactor { p: 7, beta: 1 }],
                action: vec![ActionEntry { i: 0, j: 0, u: 2 }],
                ..Default::default()
            },
        ];
        for s in specs {
            let r = cross_validate(&s).unwrap();
            assert!(r.all_pass(), "{r:?}");
        }
    }
}
