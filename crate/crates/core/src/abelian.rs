//! Finite abelian groups, subgroups, and monomorphisms.
//!
//! Groups are products of cyclic groups `Z/n_1 x … x Z/n_k`, elements are
//! coordinate vectors, and subgroups are closed element sets.  Everything
//! is enumerated eagerly; orders stay far below [`MAX_EAGER_ORDER`] in all
//! constructions this crate performs, and the bound is enforced so an
//! accidental blow-up fails loudly instead of hanging.

use std::collections::BTreeSet;

/// Refuse to enumerate groups larger than this.
pub const MAX_EAGER_ORDER: u64 = 1 << 16;

/// Element of a product of cyclic groups, one coordinate per factor.
pub type Element = Vec<u64>;

/// A finite abelian group `Z/n_1 x … x Z/n_k`, given by its factor orders.
/// Factors of order 1 are allowed (they contribute a frozen coordinate);
/// `orders` empty is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    pub orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Self {
        assert!(orders.iter().all(|&n| n >= 1), "cyclic factor orders must be positive");
        FiniteAbelianGroup { orders }
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: Vec::new() }
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn is_valid_element(&self, e: &Element) -> bool {
        e.len() == self.orders.len() && e.iter().zip(&self.orders).all(|(&x, &n)| x < n)
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        debug_assert!(self.is_valid_element(a) && self.is_valid_element(b));
        a.iter().zip(b).zip(&self.orders).map(|((&x, &y), &n)| (x + y) % n).collect()
    }

    pub fn neg(&self, a: &Element) -> Element {
        debug_assert!(self.is_valid_element(a));
        a.iter().zip(&self.orders).map(|(&x, &n)| (n - x) % n).collect()
    }

    /// All elements, in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<Element> {
        let order = self.order();
        assert!(
            order <= MAX_EAGER_ORDER,
            "group order {} exceeds the eager enumeration bound {}",
            order,
            MAX_EAGER_ORDER
        );
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            // Odometer increment.
            let mut i = self.orders.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// The standard generators (one per factor of order > 1).
    pub fn generators(&self) -> Vec<Element> {
        let mut gens = Vec::new();
        for (i, &n) in self.orders.iter().enumerate() {
            if n > 1 {
                let mut e = self.zero();
                e[i] = 1;
                gens.push(e);
            }
        }
        gens
    }
}

/// A subgroup of an ambient [`FiniteAbelianGroup`], stored as its full
/// element set (sorted, hence canonical).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub ambient: FiniteAbelianGroup,
    pub elements: BTreeSet<Element>,
}

impl Subgroup {
    /// Closure of a generating set.
    pub fn generated(ambient: &FiniteAbelianGroup, gens: &[Element]) -> Self {
        for g in gens {
            assert!(ambient.is_valid_element(g), "generator outside the ambient group");
        }
        let mut elements: BTreeSet<Element> = BTreeSet::new();
        elements.insert(ambient.zero());
        let mut frontier: Vec<Element> = vec![ambient.zero()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = ambient.add(&x, g);
                if elements.insert(y.clone()) {
                    assert!(
                        elements.len() as u64 <= MAX_EAGER_ORDER,
                        "subgroup closure exceeds the eager enumeration bound"
                    );
                    frontier.push(y);
                }
            }
        }
        Subgroup { ambient: ambient.clone(), elements }
    }

    pub fn full(ambient: &FiniteAbelianGroup) -> Self {
        Subgroup {
            ambient: ambient.clone(),
            elements: ambient.elements().into_iter().collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.contains(e)
    }

    /// Index `[ambient : self]`.  By Lagrange this is exact.
    pub fn index(&self) -> u64 {
        let amb = self.ambient.order();
        debug_assert_eq!(amb % self.order(), 0);
        amb / self.order()
    }
}

/// The product set `A + B = {a + b}` of two subgroups of the same ambient
/// group.  For subgroups this is again a subgroup.
pub fn product_set(a: &Subgroup, b: &Subgroup) -> Subgroup {
    assert_eq!(a.ambient, b.ambient, "product of subgroups of different groups");
    let mut elements = BTreeSet::new();
    for x in &a.elements {
        for y in &b.elements {
            elements.insert(a.ambient.add(x, y));
        }
    }
    Subgroup { ambient: a.ambient.clone(), elements }
}

/// Intersection of two subgroups of the same ambient group.
pub fn intersect(a: &Subgroup, b: &Subgroup) -> Subgroup {
    assert_eq!(a.ambient, b.ambient, "intersection of subgroups of different groups");
    Subgroup {
        ambient: a.ambient.clone(),
        elements: a.elements.intersection(&b.elements).cloned().collect(),
    }
}

/// An injective homomorphism between finite abelian groups, stored by the
/// images of the standard generators of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomorphism {
    pub source: FiniteAbelianGroup,
    pub target: FiniteAbelianGroup,
    /// `images[i]` is the image of the i-th coordinate generator of the
    /// source (including order-1 factors, whose image must be zero).
    pub images: Vec<Element>,
}

impl Monomorphism {
    /// Build and check: well-defined (order of each generator's image
    /// divides the generator's order) and injective (image size equals
    /// source order).
    pub fn new(
        source: FiniteAbelianGroup,
        target: FiniteAbelianGroup,
        images: Vec<Element>,
    ) -> Result<Self, String> {
        if images.len() != source.orders.len() {
            return Err(format!(
                "monomorphism needs {} generator images, got {}",
                source.orders.len(),
                images.len()
            ));
        }
        for (i, img) in images.iter().enumerate() {
            if !target.is_valid_element(img) {
                return Err(format!("generator image {} is not an element of the target", i));
            }
            // Well-defined: n_i * images[i] = 0 in the target.
            let n = source.orders[i];
            for (&x, &m) in img.iter().zip(&target.orders) {
                if (x as u128 * n as u128) % m as u128 != 0 {
                    return Err(format!(
                        "image of generator {} has order not dividing {}",
                        i, n
                    ));
                }
            }
        }
        let m = Monomorphism { source, target, images };
        let image_order = m.image().order();
        if image_order != m.source.order() {
            return Err(format!(
                "not injective: source order {} but image order {}",
                m.source.order(),
                image_order
            ));
        }
        Ok(m)
    }

    pub fn apply(&self, e: &Element) -> Element {
        debug_assert!(self.source.is_valid_element(e));
        let mut out = self.target.zero();
        for (i, &c) in e.iter().enumerate() {
            for (j, &m) in self.target.orders.iter().enumerate() {
                out[j] = (out[j] + (c as u128 * self.images[i][j] as u128 % m as u128) as u64) % m;
            }
        }
        out
    }

    /// The image subgroup.
    pub fn image(&self) -> Subgroup {
        Subgroup::generated(&self.target, &self.images)
    }

    /// Index of the image in the target.
    pub fn index(&self) -> u64 {
        self.image().index()
    }

    /// Composition `other ∘ self` (first `self`, then `other`).
    pub fn then(&self, other: &Monomorphism) -> Result<Monomorphism, String> {
        if self.target != other.source {
            return Err("composition mismatch: target of first is not source of second".into());
        }
        let images = self.images.iter().map(|img| other.apply(img)).collect();
        Monomorphism::new(self.source.clone(), other.target.clone(), images)
    }

    /// Identity monomorphism.
    pub fn identity(g: &FiniteAbelianGroup) -> Monomorphism {
        let images = (0..g.orders.len())
            .map(|i| {
                let mut e = g.zero();
                if g.orders[i] > 1 {
                    e[i] = 1;
                }
                e
            })
            .collect();
        Monomorphism { source: g.clone(), target: g.clone(), images }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_elements() {
        let g = FiniteAbelianGroup::new(vec![2, 3]);
        assert_eq!(g.order(), 6);
        let els = g.elements();
        assert_eq!(els.len(), 6);
        assert_eq!(els[0], vec![0, 0]);
        assert_eq!(els[5], vec![1, 2]);

        let t = FiniteAbelianGroup::trivial();
        assert_eq!(t.order(), 1);
        assert_eq!(t.elements(), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn subgroup_closure_and_index() {
        let g = FiniteAbelianGroup::new(vec![4, 4]);
        let h = Subgroup::generated(&g, &[vec![2, 0], vec![0, 2]]);
        assert_eq!(h.order(), 4);
        assert_eq!(h.index(), 4);
        assert!(h.contains(&vec![2, 2]));
        assert!(!h.contains(&vec![1, 0]));
    }

    #[test]
    fn product_and_intersection_orders_multiply() {
        // |A + B| * |A ∩ B| = |A| * |B| for subgroups of an abelian group.
        let g = FiniteAbelianGroup::new(vec![6, 6]);
        let a = Subgroup::generated(&g, &[vec![2, 0], vec![0, 3]]);
        let b = Subgroup::generated(&g, &[vec![3, 0], vec![0, 2]]);
        let s = product_set(&a, &b);
        let i = intersect(&a, &b);
        assert_eq!(s.order() * i.order(), a.order() * b.order());
        // A + B here is all of (2Z/6 + 3Z/6) x (3Z/6 + 2Z/6) = Z/6 x Z/6.
        assert_eq!(s.order(), 36);
        assert_eq!(i.order(), a.order() * b.order() / 36);
    }

    #[test]
    fn monomorphism_checks_injectivity() {
        let c2 = FiniteAbelianGroup::new(vec![2]);
        let c4 = FiniteAbelianGroup::new(vec![4]);
        // x -> 2x embeds Z/2 into Z/4.
        let m = Monomorphism::new(c2.clone(), c4.clone(), vec![vec![2]]).unwrap();
        assert_eq!(m.index(), 2);
        assert_eq!(m.apply(&vec![1]), vec![2]);
        // x -> 0 is not injective.
        assert!(Monomorphism::new(c2.clone(), c4.clone(), vec![vec![0]]).is_err());
        // x -> 1 is not well-defined (1 has order 4 in Z/4).
        assert!(Monomorphism::new(c2, c4, vec![vec![1]]).is_err());
    }

    #[test]
    fn monomorphism_composition() {
        let c2 = FiniteAbelianGroup::new(vec![2]);
        let c4 = FiniteAbelianGroup::new(vec![4]);
        let c8 = FiniteAbelianGroup::new(vec![8]);
        let f = Monomorphism::new(c2.clone(), c4.clone(), vec![vec![2]]).unwrap();
        let g = Monomorphism::new(c4, c8, vec![vec![2]]).unwrap();
        let h = f.then(&g).unwrap();
        assert_eq!(h.apply(&vec![1]), vec![4]);
        assert_eq!(h.index(), 4);
    }

    #[test]
    fn trivial_source_monomorphism() {
        let t = FiniteAbelianGroup::trivial();
        let c4 = FiniteAbelianGroup::new(vec![4]);
        let m = Monomorphism::new(t, c4, vec![]).unwrap();
        assert_eq!(m.apply(&vec![]), vec![0]);
        assert_eq!(m.index(), 4);
    }
}
