//! Enumeration of finite matrix groups and subgroup queries.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::linalg::{check_form, is_symplectic, ExactMatrix, LinalgError};

/// Enumeration stops with an error once a group grows past this many elements.
pub const DEFAULT_MAX_ORDER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {index} does not preserve the symplectic form")]
    NotSymplectic { index: usize },
    #[error("generator {index} is singular")]
    SingularGenerator { index: usize },
    #[error("generator {index}: {reason}")]
    BadGenerator { index: usize, reason: String },
    #[error("group order exceeds the bound {bound}")]
    OrderBoundExceeded { bound: usize },
    #[error("matrix is not an element of the group")]
    NotAMember,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A finite group of invertible matrices, fully enumerated.
///
/// Elements are sorted canonically with the identity at index 0, so the
/// enumeration depends only on the group and not on the generating set.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    dimension: usize,
    conductor: u32,
    form: Option<ExactMatrix>,
    generators: Vec<ExactMatrix>,
    elements: Vec<ExactMatrix>,
    element_index: HashMap<ExactMatrix, usize>,
}

impl FiniteMatrixGroup {
    /// Enumerates the group generated by `generators`, all of which must
    /// preserve `omega`.
    pub fn closure(
        dimension: usize,
        conductor: u32,
        omega: ExactMatrix,
        generators: Vec<ExactMatrix>,
        max_order: usize,
    ) -> Result<Self, GroupError> {
        check_form(&omega)?;
        if omega.rows() != dimension || omega.conductor() != conductor {
            return Err(LinalgError::BadForm(format!(
                "form is {}x{} over Q(z{}), expected dimension {dimension} over Q(z{conductor})",
                omega.rows(),
                omega.cols(),
                omega.conductor()
            ))
            .into());
        }
        validate_generators(dimension, conductor, &generators)?;
        for (index, g) in generators.iter().enumerate() {
            if !is_symplectic(g, &omega)? {
                return Err(GroupError::NotSymplectic { index });
            }
        }
        let elements = enumerate(dimension, conductor, &generators, max_order)?;
        Ok(Self::from_parts(
            dimension,
            conductor,
            Some(omega),
            generators,
            elements,
        ))
    }

    /// Enumerates a linear group with no invariant form attached.
    pub fn closure_linear(
        dimension: usize,
        conductor: u32,
        generators: Vec<ExactMatrix>,
        max_order: usize,
    ) -> Result<Self, GroupError> {
        validate_generators(dimension, conductor, &generators)?;
        let elements = enumerate(dimension, conductor, &generators, max_order)?;
        Ok(Self::from_parts(
            dimension, conductor, None, generators, elements,
        ))
    }

    pub(crate) fn from_parts(
        dimension: usize,
        conductor: u32,
        form: Option<ExactMatrix>,
        generators: Vec<ExactMatrix>,
        mut elements: Vec<ExactMatrix>,
    ) -> Self {
        sort_canonically(&mut elements);
        let element_index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        FiniteMatrixGroup {
            dimension,
            conductor,
            form,
            generators,
            elements,
            element_index,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// The invariant symplectic form, if the group was built with one.
    pub fn form(&self) -> Option<&ExactMatrix> {
        self.form.as_ref()
    }

    pub fn generators(&self) -> &[ExactMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[ExactMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ExactMatrix {
        &self.elements[i]
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &ExactMatrix) -> Option<usize> {
        self.element_index.get(g).copied()
    }

    /// Index of `elements[i] · elements[j]`.
    pub fn product_index(&self, i: usize, j: usize) -> usize {
        let p = self.elements[i]
            .matmul(&self.elements[j])
            .expect("group elements share a shape");
        self.element_index[&p]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        let inv = self.elements[i]
            .inverse()
            .expect("group elements are invertible");
        self.element_index[&inv]
    }

    /// Least `k ≥ 1` with `g^k = I`.
    pub fn element_order(&self, g: &ExactMatrix) -> Result<usize, GroupError> {
        let i = self.index_of(g).ok_or(GroupError::NotAMember)?;
        Ok(self.order_of(i))
    }

    pub fn order_of(&self, i: usize) -> usize {
        let g = &self.elements[i];
        let mut power = g.clone();
        let mut k = 1;
        while !power.is_identity() {
            power = power.matmul(g).expect("square");
            k += 1;
        }
        k
    }

    /// Smallest subgroup containing the elements at `seeds`.
    pub fn generated_subgroup(&self, seeds: &[usize]) -> SubgroupHandle<'_> {
        let mut members = vec![false; self.order()];
        members[0] = true;
        let mut queue = vec![0usize];
        // Seeds already inside the current subgroup add nothing, so only the
        // others become generators.
        let mut gens: Vec<usize> = Vec::new();
        for &s in seeds {
            if members[s] {
                continue;
            }
            gens.push(s);
            let mut pos = 0;
            while pos < queue.len() {
                let x = queue[pos];
                pos += 1;
                for &t in &gens {
                    let y = self.product_index(x, t);
                    if !members[y] {
                        members[y] = true;
                        queue.push(y);
                    }
                }
            }
        }
        SubgroupHandle {
            parent: self,
            order: queue.len(),
            members,
        }
    }

    pub fn whole(&self) -> SubgroupHandle<'_> {
        SubgroupHandle {
            parent: self,
            members: vec![true; self.order()],
            order: self.order(),
        }
    }

    /// Whether `g H g⁻¹ = H` for every generator `g`.
    pub fn is_normal(&self, h: &SubgroupHandle<'_>) -> bool {
        assert!(std::ptr::eq(h.parent, self), "subgroup of another group");
        self.generators.iter().all(|g| {
            let g_inv = g.inverse().expect("generators are invertible");
            h.member_indices().all(|x| {
                let c = g
                    .matmul(&self.elements[x])
                    .and_then(|gx| gx.matmul(&g_inv))
                    .expect("square");
                h.contains(self.element_index[&c])
            })
        })
    }

    /// Conjugacy classes as sorted index lists, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let conjugators: Vec<(ExactMatrix, ExactMatrix)> = self
            .generators
            .iter()
            .map(|g| (g.clone(), g.inverse().expect("generators are invertible")))
            .collect();
        let mut assigned = vec![false; self.order()];
        let mut classes = Vec::new();
        for start in 0..self.order() {
            if assigned[start] {
                continue;
            }
            assigned[start] = true;
            let mut class = vec![start];
            let mut pos = 0;
            while pos < class.len() {
                let x = &self.elements[class[pos]];
                pos += 1;
                for (g, g_inv) in &conjugators {
                    let c = g.matmul(x).and_then(|gx| gx.matmul(g_inv)).expect("square");
                    let ci = self.element_index[&c];
                    if !assigned[ci] {
                        assigned[ci] = true;
                        class.push(ci);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }
}

/// A subgroup recorded as membership flags over the parent's enumeration.
#[derive(Clone, Debug)]
pub struct SubgroupHandle<'g> {
    parent: &'g FiniteMatrixGroup,
    members: Vec<bool>,
    order: usize,
}

impl<'g> SubgroupHandle<'g> {
    pub fn parent(&self) -> &'g FiniteMatrixGroup {
        self.parent
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `[G : H]`.
    pub fn index(&self) -> usize {
        self.parent.order() / self.order
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn member_flags(&self) -> &[bool] {
        &self.members
    }

    pub fn member_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn is_whole(&self) -> bool {
        self.order == self.parent.order()
    }
}

fn validate_generators(
    dimension: usize,
    conductor: u32,
    generators: &[ExactMatrix],
) -> Result<(), GroupError> {
    for (index, g) in generators.iter().enumerate() {
        if g.rows() != dimension || g.cols() != dimension {
            return Err(GroupError::BadGenerator {
                index,
                reason: format!(
                    "expected {dimension}x{dimension}, got {}x{}",
                    g.rows(),
                    g.cols()
                ),
            });
        }
        if g.conductor() != conductor {
            return Err(GroupError::BadGenerator {
                index,
                reason: format!(
                    "entries over Q(z{}), expected Q(z{conductor})",
                    g.conductor()
                ),
            });
        }
        if g.rank() != dimension {
            return Err(GroupError::SingularGenerator { index });
        }
    }
    Ok(())
}

/// Dimino's algorithm: adjoin one generator at a time, adding whole right
/// cosets of the previous subgroup.
fn enumerate(
    dimension: usize,
    conductor: u32,
    generators: &[ExactMatrix],
    max_order: usize,
) -> Result<Vec<ExactMatrix>, GroupError> {
    let identity = ExactMatrix::identity(dimension, conductor);
    let mut elements = vec![identity.clone()];
    let mut seen: HashSet<ExactMatrix> = HashSet::from([identity]);
    let mut adjoined: Vec<&ExactMatrix> = Vec::new();

    let too_big = |n: usize| {
        if n > max_order {
            Err(GroupError::OrderBoundExceeded { bound: max_order })
        } else {
            Ok(())
        }
    };

    for g in generators {
        adjoined.push(g);
        if seen.contains(g) {
            continue;
        }
        let previous = elements.clone();
        let add_coset = |rep: &ExactMatrix,
                         elements: &mut Vec<ExactMatrix>,
                         seen: &mut HashSet<ExactMatrix>|
         -> Result<(), GroupError> {
            for h in &previous {
                let x = h.matmul(rep)?;
                seen.insert(x.clone());
                elements.push(x);
            }
            too_big(elements.len())
        };
        add_coset(g, &mut elements, &mut seen)?;
        let mut reps = vec![g.clone()];
        let mut pos = 0;
        while pos < reps.len() {
            let r = reps[pos].clone();
            pos += 1;
            for s in &adjoined {
                let x = r.matmul(s)?;
                if !seen.contains(&x) {
                    add_coset(&x, &mut elements, &mut seen)?;
                    reps.push(x);
                }
            }
        }
    }
    Ok(elements)
}

fn sort_canonically(elements: &mut [ExactMatrix]) {
    elements.sort_unstable_by(|a, b| b.is_identity().cmp(&a.is_identity()).then_with(|| a.cmp(b)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CyclotomicNumber;
    use crate::linalg::standard_symplectic_form;

    fn perm_matrix(perm: &[usize]) -> ExactMatrix {
        let n = perm.len();
        ExactMatrix::from_fn(n, n, 1, |i, j| {
            CyclotomicNumber::from_integer((perm[j] == i) as i64, 1)
        })
    }

    fn s3() -> FiniteMatrixGroup {
        FiniteMatrixGroup::closure_linear(
            3,
            1,
            vec![perm_matrix(&[1, 0, 2]), perm_matrix(&[0, 2, 1])],
            DEFAULT_MAX_ORDER,
        )
        .unwrap()
    }

    fn swap_c4() -> FiniteMatrixGroup {
        let g =
            ExactMatrix::from_integers(4, 4, 1, &[0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0]);
        FiniteMatrixGroup::closure(4, 1, standard_symplectic_form(4, 1).unwrap(), vec![g], 100)
            .unwrap()
    }

    #[test]
    fn closure_examples() {
        let omega = standard_symplectic_form(2, 1).unwrap();
        let trivial =
            FiniteMatrixGroup::closure(2, 1, omega, vec![ExactMatrix::identity(2, 1)], 10).unwrap();
        assert_eq!(trivial.order(), 1);
        assert_eq!(swap_c4().order(), 2);
        assert_eq!(s3().order(), 6);
        assert!(swap_c4().element(0).is_identity());
    }

    #[test]
    fn closure_errors() {
        let omega = standard_symplectic_form(2, 1).unwrap();
        let scale = ExactMatrix::from_integers(2, 2, 1, &[2, 0, 0, 2]);
        assert_eq!(
            FiniteMatrixGroup::closure(2, 1, omega.clone(), vec![scale], 10).unwrap_err(),
            GroupError::NotSymplectic { index: 0 }
        );
        let shear = ExactMatrix::from_integers(2, 2, 1, &[1, 1, 0, 1]);
        assert_eq!(
            FiniteMatrixGroup::closure(2, 1, omega, vec![shear], 50).unwrap_err(),
            GroupError::OrderBoundExceeded { bound: 50 }
        );
        let singular = ExactMatrix::from_integers(2, 2, 1, &[1, 0, 0, 0]);
        assert_eq!(
            FiniteMatrixGroup::closure_linear(2, 1, vec![singular], 10).unwrap_err(),
            GroupError::SingularGenerator { index: 0 }
        );
    }

    #[test]
    fn element_orders() {
        let omega = standard_symplectic_form(2, 3).unwrap();
        let w = CyclotomicNumber::zeta(3);
        let g = ExactMatrix::diagonal(&[w.clone(), &w * &w]);
        let group = FiniteMatrixGroup::closure(2, 3, omega, vec![g.clone()], 10).unwrap();
        assert_eq!(group.element_order(&g).unwrap(), 3);
        assert_eq!(
            group.element_order(&ExactMatrix::identity(2, 3)).unwrap(),
            1
        );
        assert_eq!(
            group.element_order(&ExactMatrix::identity(2, 3).neg()),
            Err(GroupError::NotAMember)
        );
        let neg = swap_c4();
        assert_eq!(neg.order_of(1), 2);
    }

    #[test]
    fn generated_subgroups() {
        let g = s3();
        assert_eq!(g.generated_subgroup(&[]).order(), 1);
        let all: Vec<usize> = (0..g.order()).collect();
        assert!(g.generated_subgroup(&all).is_whole());
        let transpositions: Vec<usize> = (0..g.order()).filter(|&i| g.order_of(i) == 2).collect();
        assert_eq!(transpositions.len(), 3);
        let sub = g.generated_subgroup(&transpositions[..2]);
        assert_eq!(sub.order(), 6);
        let one = g.generated_subgroup(&transpositions[..1]);
        assert_eq!(one.order(), 2);
        assert!(!g.is_normal(&one));
        assert!(g.is_normal(&g.generated_subgroup(&[])));
        assert!(g.is_normal(&g.whole()));
        let three_cycles: Vec<usize> = (0..g.order()).filter(|&i| g.order_of(i) == 3).collect();
        assert!(g.is_normal(&g.generated_subgroup(&three_cycles)));
    }

    #[test]
    fn conjugacy_class_sizes() {
        let mut sizes: Vec<usize> = s3().conjugacy_classes().iter().map(Vec::len).collect();
        assert_eq!(s3().conjugacy_classes()[0], vec![0]);
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(swap_c4().conjugacy_classes().len(), 2);
    }

    #[test]
    fn closure_is_idempotent_and_generator_order_free() {
        let g = s3();
        let again =
            FiniteMatrixGroup::closure_linear(3, 1, g.elements().to_vec(), DEFAULT_MAX_ORDER)
                .unwrap();
        assert_eq!(again.elements(), g.elements());
        let reversed = FiniteMatrixGroup::closure_linear(
            3,
            1,
            vec![perm_matrix(&[0, 2, 1]), perm_matrix(&[1, 0, 2])],
            DEFAULT_MAX_ORDER,
        )
        .unwrap();
        assert_eq!(reversed.elements(), g.elements());
        for i in 0..g.order() {
            assert_eq!(g.order() % g.order_of(i), 0);
            assert_eq!(g.product_index(i, g.inverse_index(i)), 0);
        }
    }
}
