//! Builders for standard families of finite symplectic groups.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::CyclotomicNumber;
use crate::group::{FiniteMatrixGroup, GroupError, DEFAULT_MAX_ORDER};
use crate::io::{FormSpec, GroupSpec};
use crate::linalg::{ExactMatrix, LinalgError};
use crate::reflection::{double_matrix, VerdictKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn out_of_range(msg: impl Into<String>) -> CatalogError {
    CatalogError::ParameterOutOfRange(msg.into())
}

fn int(n: i64, m: u32) -> CyclotomicNumber {
    CyclotomicNumber::from_integer(n, m)
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Matrix of the coordinate permutation `e_j ↦ e_{perm[j]}`.
fn permutation_matrix(perm: &[usize], conductor: u32) -> ExactMatrix {
    let n = perm.len();
    ExactMatrix::from_fn(n, n, conductor, |i, j| {
        int((perm[j] == i) as i64, conductor)
    })
}

/// `S_n` permuting `n` copies of `C²`, generated by adjacent block swaps.
pub fn symmetric_on_c2n(n: usize) -> Result<GroupSpec, CatalogError> {
    if !(2..=5).contains(&n) {
        return Err(out_of_range(format!(
            "symmetric group needs 2 <= n <= 5, got {n}"
        )));
    }
    let generators = (0..n - 1)
        .map(|b| {
            let mut perm: Vec<usize> = (0..2 * n).collect();
            perm.swap(2 * b, 2 * b + 2);
            perm.swap(2 * b + 1, 2 * b + 3);
            permutation_matrix(&perm, 1)
        })
        .collect();
    Ok(GroupSpec {
        name: format!("symmetric-{n}"),
        dimension: 2 * n,
        conductor: 1,
        form: Some(FormSpec::Standard),
        generators,
    })
}

pub fn build_symmetric_on_c2n(n: usize) -> Result<FiniteMatrixGroup, CatalogError> {
    Ok(symmetric_on_c2n(n)?.close(DEFAULT_MAX_ORDER)?)
}

/// `S_n` permuting coordinates of `C^n`, with no form.
pub fn permutation_action(n: usize) -> Result<GroupSpec, CatalogError> {
    if !(1..=6).contains(&n) {
        return Err(out_of_range(format!(
            "permutation action needs 1 <= n <= 6, got {n}"
        )));
    }
    let generators = (0..n.saturating_sub(1))
        .map(|i| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, i + 1);
            permutation_matrix(&perm, 1)
        })
        .collect();
    Ok(GroupSpec {
        name: format!("permutation-{n}"),
        dimension: n,
        conductor: 1,
        form: None,
        generators,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootSystem {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl RootSystem {
    pub fn rank(self) -> usize {
        match self {
            RootSystem::A(n)
            | RootSystem::B(n)
            | RootSystem::C(n)
            | RootSystem::D(n)
            | RootSystem::E(n) => n,
            RootSystem::F4 => 4,
            RootSystem::G2 => 2,
        }
    }

    fn validate(self) -> Result<(), CatalogError> {
        let ok = match self {
            RootSystem::A(n) => n >= 1,
            RootSystem::B(n) | RootSystem::C(n) => n >= 2,
            RootSystem::D(n) => n >= 4,
            RootSystem::E(n) => (6..=8).contains(&n),
            RootSystem::F4 | RootSystem::G2 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(out_of_range(format!("no root system of type {self}")))
        }
    }

    /// Order of the Weyl group.
    pub fn weyl_order(self) -> usize {
        match self {
            RootSystem::A(n) => factorial(n + 1),
            RootSystem::B(n) | RootSystem::C(n) => (1 << n) * factorial(n),
            RootSystem::D(n) => (1 << (n - 1)) * factorial(n),
            RootSystem::E(6) => 51_840,
            RootSystem::E(7) => 2_903_040,
            RootSystem::E(8) => 696_729_600,
            RootSystem::E(_) => unreachable!("validated"),
            RootSystem::F4 => 1152,
            RootSystem::G2 => 12,
        }
    }

    /// Cartan matrix `a_ij = ⟨α_i^∨, α_j⟩` in Bourbaki numbering.
    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self {
            RootSystem::A(_) | RootSystem::B(_) | RootSystem::C(_) => {
                for i in 0..n - 1 {
                    link(i, i + 1);
                }
            }
            RootSystem::D(_) => {
                for i in 0..n - 2 {
                    link(i, i + 1);
                }
                link(n - 3, n - 1);
            }
            RootSystem::E(_) => {
                // 1-3-4-5-..., with 2 attached to 4
                link(0, 2);
                link(1, 3);
                for i in 2..n - 1 {
                    link(i, i + 1);
                }
            }
            RootSystem::F4 => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            RootSystem::G2 => link(0, 1),
        }
        match self {
            RootSystem::B(_) => a[n - 1][n - 2] = -2,
            RootSystem::C(_) => a[n - 2][n - 1] = -2,
            RootSystem::F4 => a[2][1] = -2,
            RootSystem::G2 => a[1][0] = -3,
            _ => {}
        }
        a
    }

    /// Simple reflections `s_i(α_j) = α_j − a_ij α_i` in the simple-root basis.
    pub fn simple_reflections(self) -> Vec<ExactMatrix> {
        let a = self.cartan_matrix();
        let n = self.rank();
        (0..n)
            .map(|i| {
                ExactMatrix::from_fn(n, n, 1, |r, c| {
                    let delta = (r == c) as i64;
                    int(if r == i { delta - a[i][c] } else { delta }, 1)
                })
            })
            .collect()
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSystem::A(n) => write!(f, "A{n}"),
            RootSystem::B(n) => write!(f, "B{n}"),
            RootSystem::C(n) => write!(f, "C{n}"),
            RootSystem::D(n) => write!(f, "D{n}"),
            RootSystem::E(n) => write!(f, "E{n}"),
            RootSystem::F4 => write!(f, "F4"),
            RootSystem::G2 => write!(f, "G2"),
        }
    }
}

impl FromStr for RootSystem {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || out_of_range(format!("unrecognized root system {s:?}"));
        let (kind, rank) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let rank: usize = rank.parse().map_err(|_| bad())?;
        let system = match kind.to_ascii_uppercase().as_str() {
            "A" => RootSystem::A(rank),
            "B" => RootSystem::B(rank),
            "C" => RootSystem::C(rank),
            "D" => RootSystem::D(rank),
            "E" => RootSystem::E(rank),
            "F" if rank == 4 => RootSystem::F4,
            "G" if rank == 2 => RootSystem::G2,
            _ => return Err(bad()),
        };
        system.validate()?;
        Ok(system)
    }
}

/// The Weyl group acting on `h ⊕ h*`.
pub fn weyl_doubled(system: RootSystem) -> Result<GroupSpec, CatalogError> {
    system.validate()?;
    let generators = system
        .simple_reflections()
        .iter()
        .map(double_matrix)
        .collect::<Result<Vec<_>, LinalgError>>()
        .map_err(GroupError::from)?;
    Ok(GroupSpec {
        name: format!("weyl-{system}"),
        dimension: 2 * system.rank(),
        conductor: 1,
        form: Some(FormSpec::Standard),
        generators,
    })
}

pub fn build_weyl_doubled(
    system: RootSystem,
    max_order: usize,
) -> Result<FiniteMatrixGroup, CatalogError> {
    let spec = weyl_doubled(system)?;
    if system.weyl_order() > max_order {
        return Err(GroupError::OrderBoundExceeded { bound: max_order }.into());
    }
    Ok(spec.close(max_order)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sl2Kind {
    Cyclic(usize),
    BinaryDihedral(usize),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl Sl2Kind {
    pub fn order(self) -> usize {
        match self {
            Sl2Kind::Cyclic(k) => k,
            Sl2Kind::BinaryDihedral(k) => 4 * k,
            Sl2Kind::BinaryTetrahedral => 24,
            Sl2Kind::BinaryOctahedral => 48,
            Sl2Kind::BinaryIcosahedral => 120,
        }
    }

    fn name(self) -> String {
        match self {
            Sl2Kind::Cyclic(k) => format!("sl2-cyclic-{k}"),
            Sl2Kind::BinaryDihedral(k) => format!("sl2-dihedral-{k}"),
            Sl2Kind::BinaryTetrahedral => "sl2-tetrahedral".into(),
            Sl2Kind::BinaryOctahedral => "sl2-octahedral".into(),
            Sl2Kind::BinaryIcosahedral => "sl2-icosahedral".into(),
        }
    }
}

/// Unit quaternion `a + bi + cj + dk` as the matrix
/// `[[a + b·ι, c + d·ι], [−c + d·ι, a − b·ι]]` with `ι = ζ_4`.
pub fn quaternion_matrix(q: [&CyclotomicNumber; 4]) -> ExactMatrix {
    let m = q[0].conductor();
    let iota = CyclotomicNumber::zeta(4)
        .promote(m)
        .expect("conductor divisible by 4");
    let [a, b, c, d] = q;
    let bi = b * &iota;
    let di = d * &iota;
    ExactMatrix::from_fn(2, 2, m, |r, col| match (r, col) {
        (0, 0) => a + &bi,
        (0, 1) => c + &di,
        (1, 0) => &(-c) + &di,
        _ => a - &bi,
    })
}

/// Finite subgroups of `SL(2)` with exact generators.
pub fn sl2_subgroup(kind: Sl2Kind) -> Result<GroupSpec, CatalogError> {
    let (conductor, generators) = match kind {
        Sl2Kind::Cyclic(k) => {
            if !(1..=60).contains(&k) {
                return Err(out_of_range(format!(
                    "cyclic order must be in 1..=60, got {k}"
                )));
            }
            let m = k as u32;
            let z = CyclotomicNumber::zeta(m);
            let g = ExactMatrix::diagonal(&[z.clone(), CyclotomicNumber::zeta_pow(m, -1)]);
            (m, vec![g])
        }
        Sl2Kind::BinaryDihedral(k) => {
            if !(2..=30).contains(&k) {
                return Err(out_of_range(format!(
                    "binary dihedral parameter must be in 2..=30, got {k}"
                )));
            }
            let m = 2 * k as u32;
            let a = ExactMatrix::diagonal(&[
                CyclotomicNumber::zeta(m),
                CyclotomicNumber::zeta_pow(m, -1),
            ]);
            let b = ExactMatrix::from_integers(2, 2, m, &[0, -1, 1, 0]);
            (m, vec![a, b])
        }
        Sl2Kind::BinaryTetrahedral => {
            let m = 4;
            let (zero, one, half) = (int(0, m), int(1, m), CyclotomicNumber::from_ratio(1, 2, m));
            let i = quaternion_matrix([&zero, &one, &zero, &zero]);
            let s = quaternion_matrix([&half, &half, &half, &half]);
            (m, vec![i, s])
        }
        Sl2Kind::BinaryOctahedral => {
            let m = 8;
            let half = CyclotomicNumber::from_ratio(1, 2, m);
            // 1/√2 = (ζ_8 + ζ_8⁻¹)/2
            let root2 = &CyclotomicNumber::zeta(m) + &CyclotomicNumber::zeta_pow(m, -1);
            let inv_root2 = &root2 * &half;
            let zero = int(0, m);
            let s = quaternion_matrix([&half, &half, &half, &half]);
            let r = quaternion_matrix([&inv_root2, &inv_root2, &zero, &zero]);
            (m, vec![s, r])
        }
        Sl2Kind::BinaryIcosahedral => {
            let m = 20;
            let half = CyclotomicNumber::from_ratio(1, 2, m);
            // √5 = 1 + 2(ζ_5 + ζ_5⁴), ζ_5 = ζ_20⁴
            let root5 = &int(1, m)
                + &(&int(2, m)
                    * &(&CyclotomicNumber::zeta_pow(m, 4) + &CyclotomicNumber::zeta_pow(m, 16)));
            let phi = &(&int(1, m) + &root5) * &half;
            let phi_inv = &phi - &int(1, m);
            let zero = int(0, m);
            let s = quaternion_matrix([&half, &half, &half, &half]);
            // ½(φ + φ⁻¹ i + j)
            let t = quaternion_matrix([&(&phi * &half), &(&phi_inv * &half), &half, &zero]);
            (m, vec![s, t])
        }
    };
    Ok(GroupSpec {
        name: kind.name(),
        dimension: 2,
        conductor,
        form: Some(FormSpec::Standard),
        generators,
    })
}

pub fn build_sl2_subgroup(kind: Sl2Kind) -> Result<FiniteMatrixGroup, CatalogError> {
    Ok(sl2_subgroup(kind)?.close(DEFAULT_MAX_ORDER)?)
}

/// `G(m, p, n)` acting on `C^n` by monomial matrices, with no form.
pub fn imprimitive(m: usize, p: usize, n: usize) -> Result<GroupSpec, CatalogError> {
    if m == 0 || p == 0 || n == 0 || !m.is_multiple_of(p) {
        return Err(out_of_range(format!(
            "G(m, p, n) needs positive parameters with p | m, got ({m}, {p}, {n})"
        )));
    }
    if m > 60 || n > 6 {
        return Err(out_of_range(format!(
            "G({m}, {p}, {n}) is beyond the supported range"
        )));
    }
    let c = m as u32;
    let mut generators = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        generators.push(permutation_matrix(&perm, c));
    }
    if n >= 2 && m > 1 {
        let z = CyclotomicNumber::zeta(c);
        let zi = CyclotomicNumber::zeta_pow(c, -1);
        generators.push(ExactMatrix::from_fn(n, n, c, |r, col| match (r, col) {
            (0, 1) => zi.clone(),
            (1, 0) => z.clone(),
            _ if r == col && r >= 2 => int(1, c),
            _ => int(0, c),
        }));
    }
    if p < m {
        let t = CyclotomicNumber::zeta_pow(c, p as i64);
        generators.push(ExactMatrix::from_fn(n, n, c, |r, col| match (r, col) {
            (0, 0) => t.clone(),
            _ => int((r == col) as i64, c),
        }));
    }
    Ok(GroupSpec {
        name: format!("imprimitive-{m}-{p}-{n}"),
        dimension: n,
        conductor: c,
        form: None,
        generators,
    })
}

pub fn imprimitive_order(m: usize, p: usize, n: usize) -> usize {
    m.pow(n as u32) * factorial(n) / p
}

/// Doubles the generators of a form-free spec onto `W ⊕ W*`.
pub fn double_spec(spec: &GroupSpec) -> Result<GroupSpec, GroupError> {
    let generators = spec
        .generators
        .iter()
        .enumerate()
        .map(|(index, g)| {
            double_matrix(g).map_err(|e| match e {
                LinalgError::SingularMatrix => GroupError::SingularGenerator { index },
                other => other.into(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupSpec {
        name: format!("{}-doubled", spec.name),
        dimension: 2 * spec.dimension,
        conductor: spec.conductor,
        form: Some(FormSpec::Standard),
        generators,
    })
}

pub fn imprimitive_doubled(m: usize, p: usize, n: usize) -> Result<GroupSpec, CatalogError> {
    let mut doubled = double_spec(&imprimitive(m, p, n)?)?;
    doubled.name = format!("imprimitive-{m}-{p}-{n}");
    Ok(doubled)
}

pub fn build_imprimitive_doubled(
    m: usize,
    p: usize,
    n: usize,
    max_order: usize,
) -> Result<FiniteMatrixGroup, CatalogError> {
    let spec = imprimitive_doubled(m, p, n)?;
    if imprimitive_order(m, p, n) > max_order {
        return Err(GroupError::OrderBoundExceeded { bound: max_order }.into());
    }
    Ok(spec.close(max_order)?)
}

/// `⟨−I⟩` on `C^dim`.
pub fn negation(dim: usize) -> Result<GroupSpec, CatalogError> {
    if dim < 4 || !dim.is_multiple_of(2) {
        return Err(out_of_range(format!(
            "negation needs an even dimension >= 4, got {dim}"
        )));
    }
    Ok(GroupSpec {
        name: format!("negation-{dim}"),
        dimension: dim,
        conductor: 1,
        form: Some(FormSpec::Standard),
        generators: vec![ExactMatrix::identity(dim, 1).neg()],
    })
}

pub fn build_negation(dim: usize) -> Result<FiniteMatrixGroup, CatalogError> {
    Ok(negation(dim)?.close(DEFAULT_MAX_ORDER)?)
}

/// Product group acting on `V₁ ⊕ V₂`, each factor acting on its own summand.
/// Both specs must carry the standard form.
pub fn direct_sum(a: &GroupSpec, b: &GroupSpec) -> Result<GroupSpec, CatalogError> {
    if a.form != Some(FormSpec::Standard) || b.form != Some(FormSpec::Standard) {
        return Err(out_of_range(
            "direct sums need both summands in standard form",
        ));
    }
    let m = num_integer::lcm(a.conductor, b.conductor);
    let promote = |g: &ExactMatrix| g.promote(m).map_err(GroupError::from);
    let id_a = ExactMatrix::identity(a.dimension, m);
    let id_b = ExactMatrix::identity(b.dimension, m);
    let mut generators = Vec::new();
    for g in &a.generators {
        generators.push(promote(g)?.direct_sum(&id_b).map_err(GroupError::from)?);
    }
    for g in &b.generators {
        generators.push(id_a.direct_sum(&promote(g)?).map_err(GroupError::from)?);
    }
    Ok(GroupSpec {
        name: format!("{}+{}", a.name, b.name),
        dimension: a.dimension + b.dimension,
        conductor: m,
        form: Some(FormSpec::Standard),
        generators,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub expected_order: usize,
    pub expected_verdict: VerdictKind,
}

/// The listed fixtures. `spec_by_name` also accepts other parameter values.
pub fn entries() -> Vec<CatalogEntry> {
    use VerdictKind::*;
    let mut out = Vec::new();
    let mut push = |name: String, order: usize, verdict: VerdictKind| {
        out.push(CatalogEntry {
            name,
            expected_order: order,
            expected_verdict: verdict,
        })
    };
    for n in 2..=5 {
        push(
            format!("symmetric-{n}"),
            factorial(n),
            NecessaryConditionHolds,
        );
    }
    for s in [
        "A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2", "F4", "E6", "E7", "E8",
    ] {
        let system: RootSystem = s.parse().expect("valid");
        push(
            format!("weyl-{s}"),
            system.weyl_order(),
            NecessaryConditionHolds,
        );
    }
    for kind in [
        Sl2Kind::Cyclic(2),
        Sl2Kind::Cyclic(5),
        Sl2Kind::BinaryDihedral(2),
        Sl2Kind::BinaryDihedral(3),
        Sl2Kind::BinaryTetrahedral,
        Sl2Kind::BinaryOctahedral,
        Sl2Kind::BinaryIcosahedral,
    ] {
        push(kind.name(), kind.order(), NecessaryConditionHolds);
    }
    for (m, p, n) in [
        (1, 1, 3),
        (2, 1, 2),
        (2, 2, 2),
        (3, 1, 2),
        (3, 3, 2),
        (4, 2, 2),
        (4, 4, 3),
    ] {
        push(
            format!("imprimitive-{m}-{p}-{n}"),
            imprimitive_order(m, p, n),
            NecessaryConditionHolds,
        );
    }
    for dim in [4, 6, 8] {
        push(format!("negation-{dim}"), 2, NoSymplecticResolution);
    }
    out
}

fn parse_params(rest: &str, name: &str) -> Result<Vec<usize>, CatalogError> {
    rest.split('-')
        .map(|p| {
            p.parse()
                .map_err(|_| CatalogError::UnknownEntry(name.into()))
        })
        .collect()
}

/// Resolves names such as `symmetric-3`, `weyl-G2`, `sl2-dihedral-4`,
/// `sl2-icosahedral`, `imprimitive-4-2-3`, `negation-6`.
pub fn spec_by_name(name: &str) -> Result<GroupSpec, CatalogError> {
    let unknown = || CatalogError::UnknownEntry(name.into());
    let one = |rest: &str| -> Result<usize, CatalogError> {
        match parse_params(rest, name)?.as_slice() {
            [n] => Ok(*n),
            _ => Err(unknown()),
        }
    };
    if let Some(rest) = name.strip_prefix("symmetric-") {
        symmetric_on_c2n(one(rest)?)
    } else if let Some(rest) = name.strip_prefix("permutation-") {
        permutation_action(one(rest)?)
    } else if let Some(rest) = name.strip_prefix("weyl-") {
        weyl_doubled(rest.parse()?)
    } else if let Some(rest) = name.strip_prefix("sl2-cyclic-") {
        sl2_subgroup(Sl2Kind::Cyclic(one(rest)?))
    } else if let Some(rest) = name.strip_prefix("sl2-dihedral-") {
        sl2_subgroup(Sl2Kind::BinaryDihedral(one(rest)?))
    } else if name == "sl2-tetrahedral" {
        sl2_subgroup(Sl2Kind::BinaryTetrahedral)
    } else if name == "sl2-octahedral" {
        sl2_subgroup(Sl2Kind::BinaryOctahedral)
    } else if name == "sl2-icosahedral" {
        sl2_subgroup(Sl2Kind::BinaryIcosahedral)
    } else if let Some(rest) = name.strip_prefix("imprimitive-") {
        match parse_params(rest, name)?.as_slice() {
            [m, p, n] => imprimitive_doubled(*m, *p, *n),
            _ => Err(unknown()),
        }
    } else if let Some(rest) = name.strip_prefix("negation-") {
        negation(one(rest)?)
    } else {
        Err(unknown())
    }
}
