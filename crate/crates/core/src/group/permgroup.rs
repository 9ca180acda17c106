use indexmap::IndexSet;

use super::perm::{Permutation, Point};
use crate::error::{Error, Result};

/// Default limit on the number of elements [`enumerate_group`] will produce.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// A finite permutation group held as the full list of its elements.
///
/// Elements are stored in breadth-first discovery order starting from the
/// identity, so enumeration is deterministic for a given generator list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: IndexSet<Permutation>,
}

/// Closes `generators` under composition.
pub fn enumerate_group(generators: &[Permutation], cap: usize) -> Result<PermGroup> {
    let degree = generators
        .first()
        .map(Permutation::degree)
        .ok_or_else(|| Error::InvalidArgument("at least one generator is required".into()))?;
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
    }
    let mut elements = IndexSet::new();
    elements.insert(Permutation::identity(degree));
    let mut next = 0;
    while next < elements.len() {
        let current = elements[next].clone();
        for g in generators {
            let product = current.then(g);
            if !elements.contains(&product) {
                if elements.len() == cap {
                    return Err(Error::CapExceeded { cap });
                }
                elements.insert(product);
            }
        }
        next += 1;
    }
    Ok(PermGroup {
        degree,
        generators: generators.to_vec(),
        elements,
    })
}

impl PermGroup {
    pub fn trivial(degree: usize) -> PermGroup {
        enumerate_group(&[Permutation::identity(degree)], 1).expect("trivial group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &Permutation> {
        self.elements.iter()
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    /// True when every element of `self` is an element of `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|g| other.contains(g))
    }

    /// True when `h^-1 g h` lies in `self` for every generator `g` of `self`
    /// and every generator `h` of `other`.
    pub fn is_normalized_by(&self, other: &PermGroup) -> bool {
        other.generators.iter().all(|h| {
            self.generators
                .iter()
                .all(|g| self.contains(&g.conjugate_by(h)))
        })
    }

    /// Same element set, regardless of generators or enumeration order.
    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// Orbits on points, each sorted, listed by smallest member.
    pub fn orbits_on_points(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.degree];
        let mut orbits = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start as Point];
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                for g in &self.generators {
                    let y = g.apply(x);
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits_on_points().len() == 1
    }

    /// Number of elements fixing `block` set-wise.
    pub fn setwise_stabilizer_order(&self, block: &[Point]) -> usize {
        let mut member = vec![false; self.degree];
        for &p in block {
            member[p as usize] = true;
        }
        self.elements
            .iter()
            .filter(|g| block.iter().all(|&p| member[g.apply(p) as usize]))
            .count()
    }

    /// Whether `partition` is preserved by the group.
    ///
    /// Only generators are checked: if each generator maps classes to classes,
    /// so does every product of generators.
    pub fn partition_is_invariant(&self, partition: &[Vec<Point>]) -> Result<bool> {
        let class_of = class_index(self.degree, partition)?;
        for g in &self.generators {
            for class in partition {
                let target = class_of[g.apply(class[0]) as usize];
                if partition[target].len() != class.len() {
                    return Ok(false);
                }
                if class.iter().any(|&p| class_of[g.apply(p) as usize] != target) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Maps each point to its class, checking that `partition` is a set partition
/// of `{0, .., degree-1}` into non-empty classes.
pub fn class_index(degree: usize, partition: &[Vec<Point>]) -> Result<Vec<usize>> {
    let mut class_of = vec![usize::MAX; degree];
    for (i, class) in partition.iter().enumerate() {
        if class.is_empty() {
            return Err(Error::MalformedPartition(format!("class {i} is empty")));
        }
        for &p in class {
            let slot = class_of
                .get_mut(p as usize)
                .ok_or_else(|| Error::MalformedPartition(format!("point {} out of range", p as usize + 1)))?;
            if *slot != usize::MAX {
                return Err(Error::MalformedPartition(format!(
                    "point {} in two classes",
                    p as usize + 1
                )));
            }
            *slot = i;
        }
    }
    if let Some(p) = class_of.iter().position(|&c| c == usize::MAX) {
        return Err(Error::MalformedPartition(format!("point {} not covered", p + 1)));
    }
    Ok(class_of)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Permutation {
        Permutation::from_fn(n, |x| (x + 1) % n).unwrap()
    }

    #[test]
    fn cyclic_group_of_order_five() {
        let g = enumerate_group(&[cycle(5)], DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(g.order(), 5);
        assert!(g.is_transitive());
        assert_eq!(g.element(0), &Permutation::identity(5));
    }

    #[test]
    fn symmetric_group_closure() {
        let s = enumerate_group(
            &[
                Permutation::parse_cycles(4, "(1,2)").unwrap(),
                Permutation::parse_cycles(4, "(1,2,3,4)").unwrap(),
            ],
            DEFAULT_ENUMERATION_CAP,
        )
        .unwrap();
        assert_eq!(s.order(), 24);
        for a in s.elements() {
            assert!(s.contains(&a.inverse()));
            for b in s.elements().take(5) {
                assert!(s.contains(&a.then(b)));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_group(&[cycle(7)], 6).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 6 }));
        assert!(enumerate_group(&[cycle(7)], 7).is_ok());
    }

    #[test]
    fn trivial_group_orbits() {
        let g = PermGroup::trivial(3);
        assert_eq!(g.orbits_on_points(), vec![vec![0], vec![1], vec![2]]);
        assert!(!g.is_transitive());
    }

    #[test]
    fn stabilizer_of_full_set_is_whole_group() {
        let g = enumerate_group(&[cycle(6)], DEFAULT_ENUMERATION_CAP).unwrap();
        let all: Vec<Point> = (0..6).collect();
        assert_eq!(g.setwise_stabilizer_order(&all), 6);
        assert_eq!(g.setwise_stabilizer_order(&[0, 2, 4]), 3);
        assert_eq!(g.setwise_stabilizer_order(&[0, 3]), 2);
        assert_eq!(g.setwise_stabilizer_order(&[0, 1]), 1);
    }

    #[test]
    fn partition_invariance() {
        let g = enumerate_group(&[cycle(6)], DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(g.partition_is_invariant(&[vec![0, 2, 4], vec![1, 3, 5]]).unwrap());
        assert!(g.partition_is_invariant(&[vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap());
        assert!(!g.partition_is_invariant(&[vec![0, 1, 2], vec![3, 4, 5]]).unwrap());
        assert!(!g.partition_is_invariant(&[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap());
        assert!(!g.partition_is_invariant(&[vec![0, 1, 3], vec![2, 4, 5]]).unwrap());
    }

    #[test]
    fn malformed_partitions_are_errors() {
        let g = PermGroup::trivial(4);
        assert!(g.partition_is_invariant(&[vec![0, 1], vec![1, 2, 3]]).is_err());
        assert!(g.partition_is_invariant(&[vec![0, 1], vec![2]]).is_err());
        assert!(g.partition_is_invariant(&[vec![0, 1, 2, 3], vec![]]).is_err());
    }
}
