//! The `G`-stratification of `V` and the semismallness test for resolution
//! fiber data.
//!
//! Strata are the fixed spaces `V_H` of subgroups `H ⊆ G`. Since
//! `V_H = ⋂_{h∈H} V_h`, the family is the closure of the element fixed spaces
//! under intersection, which avoids enumerating subgroups. Each distinct
//! subspace is listed once, with the order of its full pointwise stabilizer.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::CyclotomicNumber;
use crate::group::FiniteMatrixGroup;
use crate::linalg::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("no fiber dimension given for stratum {0}")]
    MissingFiberData(usize),
    #[error("fiber data names stratum {0}, which does not exist")]
    UnknownStratum(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub subspace: Subspace,
    pub codim: usize,
    pub pointwise_stabilizer_order: usize,
    /// Strata immediately below this one under inclusion.
    pub covers: Vec<usize>,
    /// Index into [`StratificationLattice::orbits`].
    pub orbit: usize,
}

#[derive(Clone, Debug)]
pub struct StratificationLattice {
    ambient_dim: usize,
    strata: Vec<Stratum>,
    orbits: Vec<Vec<usize>>,
}

/// One `G`-orbit of strata, i.e. one stratum of `V/G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub codim: usize,
    pub stabilizer_order: usize,
    pub orbit_size: usize,
}

impl StratificationLattice {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.strata.iter().position(|t| &t.subspace == s)
    }

    pub fn orbit_summaries(&self) -> Vec<OrbitSummary> {
        self.orbits
            .iter()
            .map(|orbit| {
                let rep = &self.strata[orbit[0]];
                OrbitSummary {
                    codim: rep.codim,
                    stabilizer_order: rep.pointwise_stabilizer_order,
                    orbit_size: orbit.len(),
                }
            })
            .collect()
    }
}

/// A subspace together with the row-reduced equations cutting it out.
struct Cut {
    space: Subspace,
    equations: Subspace,
}

impl Cut {
    fn new(space: Subspace) -> Self {
        let equations = space.annihilator();
        Cut { space, equations }
    }

    /// Whether `other` lies inside `self`.
    fn holds_on(&self, other: &Subspace) -> bool {
        other.basis().iter().all(|v| {
            self.equations.basis().iter().all(|e| {
                e.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(CyclotomicNumber::zero(v[0].conductor()), |acc, (a, b)| {
                        &acc + &(a * b)
                    })
                    .is_zero()
            })
        })
    }

    fn meet(&self, other: &Cut) -> Cut {
        let rows: Vec<Vec<CyclotomicNumber>> = self
            .equations
            .basis()
            .iter()
            .chain(other.equations.basis())
            .cloned()
            .collect();
        let (dim, m) = (self.space.ambient_dim(), self.space.conductor());
        let equations = Subspace::span(dim, m, rows).expect("same ambient space");
        let space = if equations.dim() == 0 {
            Subspace::full(dim, m)
        } else {
            equations.basis_matrix().kernel()
        };
        Cut { space, equations }
    }
}

pub fn build_lattice(g: &FiniteMatrixGroup) -> StratificationLattice {
    // Distinct element fixed spaces, with how many elements fix each.
    let mut multiplicity: BTreeMap<Subspace, usize> = BTreeMap::new();
    for e in g.elements() {
        *multiplicity.entry(e.fixed_space()).or_insert(0) += 1;
    }
    let base: Vec<(Cut, usize)> = multiplicity
        .into_iter()
        .map(|(s, k)| (Cut::new(s), k))
        .collect();

    // Every intersection of element fixed spaces arises by intersecting
    // with one element fixed space at a time.
    let mut family: BTreeMap<Subspace, Cut> = BTreeMap::new();
    let mut frontier: Vec<Subspace> = Vec::new();
    for (cut, _) in &base {
        family.insert(cut.space.clone(), Cut::new(cut.space.clone()));
        frontier.push(cut.space.clone());
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for (b, _) in &base {
                if b.holds_on(a) {
                    continue;
                }
                let meet = family[a].meet(b);
                if !family.contains_key(&meet.space) {
                    next.push(meet.space.clone());
                    family.insert(meet.space.clone(), meet);
                }
            }
        }
        frontier = next;
    }

    let mut cuts: Vec<Cut> = family.into_values().collect();
    cuts.sort_by(|a, b| {
        a.space
            .codim()
            .cmp(&b.space.codim())
            .then_with(|| a.space.cmp(&b.space))
    });
    let position: HashMap<Subspace, usize> = cuts
        .iter()
        .enumerate()
        .map(|(i, c)| (c.space.clone(), i))
        .collect();

    let n = cuts.len();
    // contained[i][j]: stratum j is a proper subspace of stratum i.
    let contained: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    cuts[j].space.dim() < cuts[i].space.dim() && cuts[i].holds_on(&cuts[j].space)
                })
                .collect()
        })
        .collect();

    let mut strata: Vec<Stratum> = cuts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let stabilizer = base
                .iter()
                .filter(|(f, _)| f.holds_on(&c.space))
                .map(|(_, k)| k)
                .sum();
            let covers = (0..n)
                .filter(|&j| contained[i][j] && !(0..n).any(|k| contained[i][k] && contained[k][j]))
                .collect();
            Stratum {
                subspace: c.space.clone(),
                codim: c.space.codim(),
                pointwise_stabilizer_order: stabilizer,
                covers,
                orbit: usize::MAX,
            }
        })
        .collect();

    let mut orbits = Vec::new();
    for start in 0..n {
        if strata[start].orbit != usize::MAX {
            continue;
        }
        let id = orbits.len();
        strata[start].orbit = id;
        let mut orbit = vec![start];
        let mut pos = 0;
        while pos < orbit.len() {
            let s = strata[orbit[pos]].subspace.clone();
            pos += 1;
            for gen in g.generators() {
                let j = position[&s.image_under(gen)];
                if strata[j].orbit == usize::MAX {
                    strata[j].orbit = id;
                    orbit.push(j);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }

    StratificationLattice {
        ambient_dim: g.dimension(),
        strata,
        orbits,
    }
}

/// `dim π⁻¹(x)` for points `x` in the open part of each stratum.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionFiberData {
    pub fibers: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemismallRow {
    pub stratum: usize,
    pub codim: usize,
    pub fiber_dim: usize,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemismallReport {
    pub rows: Vec<SemismallRow>,
    pub passes: bool,
}

/// Checks `dim π⁻¹(x) ≤ codim / 2` stratum by stratum.
pub fn semismall_check(
    lattice: &StratificationLattice,
    fibers: &ResolutionFiberData,
) -> Result<SemismallReport, StrataError> {
    if let Some(&extra) = fibers.fibers.keys().find(|&&k| k >= lattice.len()) {
        return Err(StrataError::UnknownStratum(extra));
    }
    let rows = lattice
        .strata()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let fiber_dim = *fibers
                .fibers
                .get(&i)
                .ok_or(StrataError::MissingFiberData(i))?;
            Ok(SemismallRow {
                stratum: i,
                codim: s.codim,
                fiber_dim,
                passes: 2 * fiber_dim <= s.codim,
            })
        })
        .collect::<Result<Vec<_>, StrataError>>()?;
    let passes = rows.iter().all(|r| r.passes);
    Ok(SemismallReport { rows, passes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_MAX_ORDER;
    use crate::linalg::{standard_symplectic_form, ExactMatrix};

    fn group(dim: usize, gens: Vec<ExactMatrix>) -> FiniteMatrixGroup {
        FiniteMatrixGroup::closure(
            dim,
            1,
            standard_symplectic_form(dim, 1).unwrap(),
            gens,
            DEFAULT_MAX_ORDER,
        )
        .unwrap()
    }

    fn swap_c4() -> FiniteMatrixGroup {
        group(
            4,
            vec![ExactMatrix::from_integers(
                4,
                4,
                1,
                &[0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0],
            )],
        )
    }

    #[test]
    fn lattice_examples() {
        let trivial = build_lattice(&group(4, vec![]));
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial.strata()[0].codim, 0);

        let swap = build_lattice(&swap_c4());
        let codims: Vec<usize> = swap.strata().iter().map(|s| s.codim).collect();
        assert_eq!(codims, vec![0, 2]);
        assert_eq!(swap.strata()[0].pointwise_stabilizer_order, 1);
        assert_eq!(swap.strata()[1].pointwise_stabilizer_order, 2);
        assert_eq!(swap.strata()[0].covers, vec![1]);

        let neg = build_lattice(&group(4, vec![ExactMatrix::identity(4, 1).neg()]));
        let codims: Vec<usize> = neg.strata().iter().map(|s| s.codim).collect();
        assert_eq!(codims, vec![0, 4]);
    }

    #[test]
    fn semismall_examples() {
        let lattice = build_lattice(&swap_c4());
        let data = |a, b| ResolutionFiberData {
            fibers: BTreeMap::from([(0, a), (1, b)]),
        };
        let ok = semismall_check(&lattice, &data(0, 1)).unwrap();
        assert!(ok.passes);
        let bad = semismall_check(&lattice, &data(0, 2)).unwrap();
        assert!(!bad.passes);
        assert!(bad.rows[0].passes && !bad.rows[1].passes);
        let missing = ResolutionFiberData {
            fibers: BTreeMap::from([(0, 0)]),
        };
        assert_eq!(
            semismall_check(&lattice, &missing),
            Err(StrataError::MissingFiberData(1))
        );
        let extra = ResolutionFiberData {
            fibers: BTreeMap::from([(0, 0), (1, 1), (7, 0)]),
        };
        assert_eq!(
            semismall_check(&lattice, &extra),
            Err(StrataError::UnknownStratum(7))
        );
    }
}
