//! Hierarchical tuples and the colexicographic coordinate maps between shapes.
//!
//! A [`Tuple`] is either a single leaf or a non-empty list of tuples. The
//! integer instance [`IntTuple`] is used for shapes and coordinates; the same
//! container carries strides, slice coordinates and tilers elsewhere.

use crate::error::{Error, Result};

/// A hierarchical tuple: a leaf, or a non-empty ordered list of tuples.
///
/// `List` is public for pattern matching; construct lists through
/// [`Tuple::list`] to get the non-empty check.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tuple<T> {
    Leaf(T),
    List(Vec<Tuple<T>>),
}

/// Integer tuples: shapes, coordinates and integer strides.
pub type IntTuple = Tuple<i64>;

impl<T> From<T> for Tuple<T> {
    fn from(v: T) -> Self {
        Tuple::Leaf(v)
    }
}

impl<T> Tuple<T> {
    /// Build a list, rejecting the empty one.
    pub fn list(children: Vec<Tuple<T>>) -> Result<Self> {
        if children.is_empty() {
            return Err(Error::EmptyTuple);
        }
        Ok(Tuple::List(children))
    }

    /// Build a list, collapsing a single child into itself.
    pub fn list_or_single(mut children: Vec<Tuple<T>>) -> Result<Self> {
        match children.len() {
            0 => Err(Error::EmptyTuple),
            1 => Ok(children.pop().unwrap()),
            _ => Ok(Tuple::List(children)),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tuple::Leaf(_))
    }

    pub fn as_leaf(&self) -> Option<&T> {
        match self {
            Tuple::Leaf(v) => Some(v),
            Tuple::List(_) => None,
        }
    }

    /// Top-level children; a leaf is its own single child.
    pub fn modes(&self) -> Vec<&Tuple<T>> {
        match self {
            Tuple::Leaf(_) => vec![self],
            Tuple::List(v) => v.iter().collect(),
        }
    }

    /// Leaf → 1; list → number of children.
    pub fn rank(&self) -> usize {
        match self {
            Tuple::Leaf(_) => 1,
            Tuple::List(v) => v.len(),
        }
    }

    /// Leaf → 0; list → 1 + deepest child.
    pub fn depth(&self) -> usize {
        match self {
            Tuple::Leaf(_) => 0,
            Tuple::List(v) => 1 + v.iter().map(Tuple::depth).max().unwrap_or(0),
        }
    }

    /// Child `i`. A leaf only has child 0 (itself).
    pub fn get(&self, i: usize) -> Result<&Tuple<T>> {
        match self {
            Tuple::Leaf(_) if i == 0 => Ok(self),
            Tuple::Leaf(_) => Err(Error::Index(format!("mode {i} of a leaf"))),
            Tuple::List(v) => v
                .get(i)
                .ok_or_else(|| Error::Index(format!("mode {i} of a rank-{} tuple", v.len()))),
        }
    }

    /// Follow a path of child indices.
    pub fn at_path(&self, path: &[usize]) -> Result<&Tuple<T>> {
        path.iter().try_fold(self, |t, &i| t.get(i))
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&T> {
        let mut out = Vec::new();
        self.visit(&mut |v| out.push(v));
        out
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a T)) {
        match self {
            Tuple::Leaf(v) => f(v),
            Tuple::List(c) => c.iter().for_each(|x| x.visit(f)),
        }
    }

    pub fn map<U>(&self, f: &mut impl FnMut(&T) -> U) -> Tuple<U> {
        match self {
            Tuple::Leaf(v) => Tuple::Leaf(f(v)),
            Tuple::List(c) => Tuple::List(c.iter().map(|x| x.map(f)).collect()),
        }
    }

    pub fn try_map<U>(&self, f: &mut impl FnMut(&T) -> Result<U>) -> Result<Tuple<U>> {
        Ok(match self {
            Tuple::Leaf(v) => Tuple::Leaf(f(v)?),
            Tuple::List(c) => Tuple::List(c.iter().map(|x| x.try_map(f)).collect::<Result<_>>()?),
        })
    }

    /// Same profile: both leaves, or equal rank with congruent children.
    pub fn congruent<U>(&self, other: &Tuple<U>) -> bool {
        match (self, other) {
            (Tuple::Leaf(_), Tuple::Leaf(_)) => true,
            (Tuple::List(a), Tuple::List(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.congruent(y))
            }
            _ => false,
        }
    }

    /// `self` coarsens the profile of `other`.
    pub fn weakly_congruent<U>(&self, other: &Tuple<U>) -> bool {
        match (self, other) {
            (Tuple::Leaf(_), _) => true,
            (Tuple::List(a), Tuple::List(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.weakly_congruent(y))
            }
            _ => false,
        }
    }
}

impl<T: Clone> Tuple<T> {
    /// Leaves, cloned, in left-to-right order.
    pub fn flatten(&self) -> Vec<T> {
        self.leaves().into_iter().cloned().collect()
    }

    /// Rebuild a tuple with this profile from a flat leaf sequence.
    pub fn unflatten<U: Clone>(&self, leaves: &[U]) -> Result<Tuple<U>> {
        let mut it = leaves.iter();
        let t = self.map(&mut |_| it.next().cloned());
        if it.next().is_some() {
            return Err(Error::Structure("too many leaves for profile".into()));
        }
        t.try_map(&mut |o| o.clone().ok_or_else(|| Error::Structure("too few leaves for profile".into())))
    }
}

impl IntTuple {
    /// Product of all leaves.
    pub fn size(&self) -> i64 {
        self.try_size().expect("shape size overflows i64")
    }

    pub fn try_size(&self) -> Result<i64> {
        self.leaves()
            .into_iter()
            .try_fold(1i64, |acc, &v| acc.checked_mul(v).ok_or(Error::Overflow("size")))
    }

    /// Checks that every leaf is a positive extent.
    pub fn check_shape(&self) -> Result<()> {
        match self.leaves().into_iter().find(|&&v| v < 1) {
            Some(v) => Err(Error::Structure(format!("shape extent {v} is not positive"))),
            None => {
                self.try_size()?;
                Ok(())
            }
        }
    }

    /// Sizes of the top-level modes.
    pub fn mode_sizes(&self) -> Vec<i64> {
        self.modes().into_iter().map(IntTuple::size).collect()
    }

    /// `self` coarsens `s` while preserving sizes.
    pub fn compatible(&self, s: &IntTuple) -> bool {
        match (self, s) {
            (Tuple::Leaf(p), _) => *p == s.size(),
            (Tuple::List(a), Tuple::List(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.compatible(y))
            }
            _ => false,
        }
    }

    /// `self` is congruent to `s` and leaf-wise inside it.
    pub fn is_natural_coord_of(&self, s: &IntTuple) -> bool {
        self.congruent(s)
            && self.leaves().iter().zip(s.leaves()).all(|(&&c, &e)| (0..e).contains(&c))
    }
}

/// Colexicographic order: the rightmost mode is most significant, recursively.
pub fn colex_less(a: &IntTuple, b: &IntTuple) -> Result<bool> {
    match (a, b) {
        (Tuple::Leaf(x), Tuple::Leaf(y)) => Ok(x < y),
        (Tuple::List(x), Tuple::List(y)) if x.len() == y.len() => {
            for (p, q) in x.iter().zip(y).rev() {
                if p != q {
                    return colex_less(p, q);
                }
            }
            Ok(false)
        }
        _ => Err(Error::Structure(format!("cannot order {a} against {b}"))),
    }
}

/// Natural coordinate of `s` at colex position `i`.
///
/// Positions past `size(s)` are absorbed by the last mode at every level,
/// so the result is out of bounds there rather than wrapping.
pub fn idx2crd(i: i64, s: &IntTuple) -> IntTuple {
    match s {
        Tuple::Leaf(_) => Tuple::Leaf(i),
        Tuple::List(modes) => {
            let mut rest = i;
            let last = modes.len() - 1;
            let out = modes
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    if k == last {
                        idx2crd(rest, m)
                    } else {
                        let n = m.size();
                        let c = idx2crd(rest.rem_euclid(n), m);
                        rest = rest.div_euclid(n);
                        c
                    }
                })
                .collect();
            Tuple::List(out)
        }
    }
}

/// Colex position of coordinate `c` in shape `s`; `c` may be any coarsening of `s`.
pub fn crd2idx(c: &IntTuple, s: &IntTuple) -> Result<i64> {
    match (c, s) {
        (Tuple::Leaf(i), _) => Ok(*i),
        (Tuple::List(cs), Tuple::List(ss)) if cs.len() == ss.len() => {
            let mut idx = 0i64;
            let mut scale = 1i64;
            for (ci, si) in cs.iter().zip(ss) {
                let part = crd2idx(ci, si)?;
                idx = part
                    .checked_mul(scale)
                    .and_then(|p| p.checked_add(idx))
                    .ok_or(Error::Overflow("crd2idx"))?;
                scale = scale.checked_mul(si.size()).ok_or(Error::Overflow("crd2idx"))?;
            }
            Ok(idx)
        }
        _ => Err(Error::Structure(format!("coordinate {c} does not fit shape {s}"))),
    }
}

/// Re-express coordinate `c` of shape `from` as the coordinate of `to` at the same position.
pub fn coordinate_map(c: &IntTuple, from: &IntTuple, to: &IntTuple) -> Result<IntTuple> {
    if !(from.compatible(to) || to.compatible(from)) {
        return Err(Error::Structure(format!("shapes {from} and {to} are not compatible")));
    }
    Ok(idx2crd(crd2idx(c, from)?, to))
}

/// `[1, s0, s0*s1, ...]`, one entry per input extent.
pub fn exclusive_prefix_product(s: &[i64]) -> Vec<i64> {
    let mut acc = 1i64;
    s.iter()
        .map(|&e| {
            let cur = acc;
            acc = acc.saturating_mul(e);
            cur
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> IntTuple {
        s.parse().unwrap()
    }

    #[test]
    fn rank_and_depth() {
        assert_eq!(t("31").rank(), 1);
        assert_eq!(t("(16,32)").rank(), 2);
        assert_eq!(t("((4,6),(3,(2,2),8))").rank(), 2);
        assert_eq!(t("31").depth(), 0);
        assert_eq!(t("(2,(4,1),-1)").depth(), 2);
        assert_eq!(t("(3,-8,7)").depth(), 1);
    }

    #[test]
    fn sizes() {
        assert_eq!(t("4").size(), 4);
        assert_eq!(t("((2,3),2)").size(), 12);
        assert_eq!(t("(2,(3,5))").size(), 30);
        assert!(t("(2,0)").check_shape().is_err());
    }

    #[test]
    fn empty_list_rejected() {
        assert_eq!(IntTuple::list(vec![]), Err(Error::EmptyTuple));
        assert!("()".parse::<IntTuple>().is_err());
    }

    #[test]
    fn congruence_relations() {
        assert!(t("(4,8)").congruent(&t("(5,7)")));
        assert!(!t("(4,8)").congruent(&t("(4,(2,4))")));
        assert!(t("3").congruent(&t("3")));
        assert!(t("30").weakly_congruent(&t("(2,15)")));
        assert!(!t("(1,2)").weakly_congruent(&t("(1,2,3)")));
        assert!(!t("((1,1),1)").weakly_congruent(&t("5")));
    }

    #[test]
    fn compatibility() {
        assert!(t("30").compatible(&t("(6,5)")));
        assert!(!t("(2,(3,5))").compatible(&t("((3,2),5)")));
        let s = t("((2,3),(4,1))");
        assert!(s.compatible(&s));
    }

    #[test]
    fn colex_order() {
        assert!(colex_less(&t("(1,0)"), &t("(0,1)")).unwrap());
        assert!(!colex_less(&t("(0,0)"), &t("(0,0)")).unwrap());
        assert!(colex_less(&t("((1,2),0)"), &t("((0,0),1)")).unwrap());
        assert!(colex_less(&t("(1,0)"), &t("1")).is_err());
    }

    #[test]
    fn coordinate_bijections() {
        assert_eq!(idx2crd(7, &t("((2,3),2)")), t("((1,0),1)"));
        assert_eq!(idx2crd(0, &t("((2,3),(4,5))")), t("((0,0),(0,0))"));
        assert_eq!(idx2crd(4, &t("(2,3)")), t("(0,2)"));
        assert_eq!(crd2idx(&t("((1,2),1)"), &t("((2,3),2)")).unwrap(), 11);
        assert_eq!(crd2idx(&t("(0,(0,0))"), &t("(3,(2,2))")).unwrap(), 0);
        assert_eq!(crd2idx(&t("(3,1)"), &t("(6,2)")).unwrap(), 9);
    }

    #[test]
    fn overflow_goes_to_last_mode() {
        assert_eq!(idx2crd(7, &t("(2,3)")), t("(1,3)"));
        assert_eq!(idx2crd(13, &t("(2,(2,2))")), t("(1,(0,3))"));
    }

    #[test]
    fn coordinate_maps() {
        assert_eq!(coordinate_map(&t("7"), &t("12"), &t("((2,3),2)")).unwrap(), t("((1,0),1)"));
        let s = t("((2,3),2)");
        assert_eq!(coordinate_map(&t("((1,1),0)"), &s, &s).unwrap(), t("((1,1),0)"));
        assert_eq!(coordinate_map(&t("((0,2),1)"), &s, &t("(6,2)")).unwrap(), t("(4,1)"));
        assert!(coordinate_map(&t("(0,0)"), &t("(2,3)"), &t("(3,2)")).is_err());
    }

    #[test]
    fn prefix_products() {
        assert_eq!(exclusive_prefix_product(&[4, 6, 8, 10]), vec![1, 4, 24, 192]);
        assert_eq!(exclusive_prefix_product(&[7]), vec![1]);
        assert_eq!(exclusive_prefix_product(&[2, 3, 2]), vec![1, 2, 6]);
    }

    #[test]
    fn unflatten_roundtrip() {
        let s = t("((2,3),(4,(5,6)))");
        assert_eq!(s.unflatten(&s.flatten()).unwrap(), s);
        assert!(s.unflatten(&[1, 2]).is_err());
    }

    pub(crate) fn shape_strategy() -> impl Strategy<Value = IntTuple> {
        let leaf = (1i64..6).prop_map(Tuple::Leaf);
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop::collection::vec(inner, 1..4).prop_map(Tuple::List)
        })
    }

    proptest! {
        #[test]
        fn idx_crd_roundtrip(s in shape_strategy()) {
            for i in 0..s.size() {
                let c = idx2crd(i, &s);
                prop_assert!(c.is_natural_coord_of(&s));
                prop_assert_eq!(crd2idx(&c, &s).unwrap(), i);
            }
        }

        #[test]
        fn enumeration_is_colex_increasing(s in shape_strategy()) {
            for i in 1..s.size() {
                prop_assert!(colex_less(&idx2crd(i - 1, &s), &idx2crd(i, &s)).unwrap());
            }
        }

        #[test]
        fn compatibility_is_a_partial_order(a in shape_strategy(), b in shape_strategy(), c in shape_strategy()) {
            prop_assert!(a.compatible(&a));
            if a.compatible(&b) {
                prop_assert_eq!(a.size(), b.size());
                if b.compatible(&a) {
                    prop_assert_eq!(&a, &b);
                }
                if b.compatible(&c) {
                    prop_assert!(a.compatible(&c));
                }
            }
            // coarsenings of a are always compatible with it
            let coarse = match &a {
                Tuple::Leaf(_) => a.clone(),
                Tuple::List(m) => Tuple::List(m.iter().map(|x| Tuple::Leaf(x.size())).collect()),
            };
            prop_assert!(coarse.compatible(&a));
            prop_assert!(Tuple::Leaf(a.size()).compatible(&coarse));
        }

        #[test]
        fn mutual_weak_congruence_is_congruence(a in shape_strategy(), b in shape_strategy()) {
            if a.weakly_congruent(&b) && b.weakly_congruent(&a) {
                prop_assert!(a.congruent(&b));
            }
        }
    }
}
