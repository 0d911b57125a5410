//! Layouts: a shape paired with a congruent stride.

use std::fmt;

use crate::error::{Error, Result};
use crate::inttuple::{exclusive_prefix_product, idx2crd, IntTuple, Tuple};
use crate::stride::{inner_product, stride_kind, Kind, Stride, StrideElem, ZERO};

/// A function from the coordinates of `shape` into a stride semimodule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layout {
    shape: IntTuple,
    stride: Stride,
}

/// One flattened mode: extent and stride.
pub type Mode = (i64, StrideElem);

impl Layout {
    /// Validates congruence, positive extents and a single stride kind.
    pub fn new(shape: IntTuple, stride: Stride) -> Result<Layout> {
        if !shape.congruent(&stride) {
            return Err(Error::Structure(format!("shape {shape} and stride {stride} are not congruent")));
        }
        if has_empty_list(&shape) {
            return Err(Error::EmptyTuple);
        }
        shape.check_shape()?;
        stride_kind(&stride)?;
        Ok(Layout { shape, stride })
    }

    /// `n:d`.
    pub fn leaf(n: i64, d: impl Into<StrideElem>) -> Result<Layout> {
        Layout::new(Tuple::Leaf(n), Tuple::Leaf(d.into()))
    }

    /// Build a layout from flat modes: none → `1:0`, one → a leaf, else a flat list.
    pub fn from_modes(modes: Vec<Mode>) -> Layout {
        match modes.len() {
            0 => Layout { shape: Tuple::Leaf(1), stride: Tuple::Leaf(ZERO) },
            1 => {
                let (s, d) = modes.into_iter().next().unwrap();
                Layout { shape: Tuple::Leaf(s), stride: Tuple::Leaf(d) }
            }
            _ => {
                let (s, d): (Vec<_>, Vec<_>) = modes.into_iter().map(|(s, d)| (Tuple::Leaf(s), Tuple::Leaf(d))).unzip();
                Layout { shape: Tuple::List(s), stride: Tuple::List(d) }
            }
        }
    }

    /// Concatenate layouts into a rank-`parts.len()` layout.
    pub fn concat(parts: &[Layout]) -> Result<Layout> {
        if parts.is_empty() {
            return Err(Error::EmptyTuple);
        }
        Layout::new(
            Tuple::List(parts.iter().map(|p| p.shape.clone()).collect()),
            Tuple::List(parts.iter().map(|p| p.stride.clone()).collect()),
        )
    }

    /// Compact colex layout with `L(i) = i`.
    pub fn identity(shape: &IntTuple) -> Result<Layout> {
        let flat = shape.flatten();
        let strides: Vec<StrideElem> = exclusive_prefix_product(&flat).into_iter().map(StrideElem::Int).collect();
        Layout::new(shape.clone(), shape.unflatten(&strides)?)
    }

    /// Layout with `L(c) = c`: each top-level mode maps to its own basis axis.
    pub fn coordinate_identity(shape: &IntTuple) -> Result<Layout> {
        let modes = shape.modes();
        let strides = modes
            .iter()
            .enumerate()
            .map(|(axis, m)| {
                let flat = m.flatten();
                let pre: Vec<StrideElem> = exclusive_prefix_product(&flat)
                    .into_iter()
                    .map(|p| StrideElem::scaled_basis(p, axis))
                    .collect();
                m.unflatten(&pre)
            })
            .collect::<Result<Vec<_>>>()?;
        let stride = if shape.is_leaf() { strides.into_iter().next().unwrap() } else { Tuple::List(strides) };
        Layout::new(shape.clone(), stride)
    }

    pub fn shape(&self) -> &IntTuple {
        &self.shape
    }

    pub fn stride(&self) -> &Stride {
        &self.stride
    }

    pub fn size(&self) -> i64 {
        self.shape.size()
    }

    pub fn rank(&self) -> usize {
        self.shape.rank()
    }

    pub fn depth(&self) -> usize {
        self.shape.depth()
    }

    /// Stride kind, `None` when every stride is zero.
    pub fn kind(&self) -> Option<Kind> {
        stride_kind(&self.stride).expect("validated at construction")
    }

    /// Top-level mode `i`.
    pub fn mode(&self, i: usize) -> Result<Layout> {
        self.sublayout(&[i])
    }

    pub fn modes(&self) -> Vec<Layout> {
        (0..self.rank()).map(|i| self.mode(i).unwrap()).collect()
    }

    /// Sublayout at an index path into the shape tree.
    pub fn sublayout(&self, path: &[usize]) -> Result<Layout> {
        Ok(Layout { shape: self.shape.at_path(path)?.clone(), stride: self.stride.at_path(path)?.clone() })
    }

    /// Leaf modes in colex order.
    pub fn flat_modes(&self) -> Vec<Mode> {
        self.shape.flatten().into_iter().zip(self.stride.flatten()).collect()
    }

    /// Depth ≤ 1 with the same leaves.
    pub fn flatten(&self) -> Layout {
        match self.shape {
            Tuple::Leaf(_) => self.clone(),
            _ => {
                let (s, d): (Vec<_>, Vec<_>) =
                    self.flat_modes().into_iter().map(|(s, d)| (Tuple::Leaf(s), Tuple::Leaf(d))).unzip();
                Layout { shape: Tuple::List(s), stride: Tuple::List(d) }
            }
        }
    }

    /// Evaluate at a coordinate that coarsens the shape (an integer is a colex index).
    pub fn eval(&self, c: &IntTuple) -> Result<StrideElem> {
        eval_at(&self.shape, &self.stride, c)
    }

    pub fn eval_index(&self, i: i64) -> Result<StrideElem> {
        inner_product(&idx2crd(i, &self.shape), &self.stride)
    }

    /// Evaluate an integer layout at a colex index.
    pub fn eval_int(&self, i: i64) -> Result<i64> {
        let v = self.eval_index(i)?;
        v.as_int().ok_or_else(|| Error::Kind(format!("{self} does not have integer strides")))
    }

    /// One plus the largest offset; integer strides only.
    pub fn cosize(&self) -> Result<i64> {
        let mut hi = 0i64;
        for (s, d) in self.flat_modes() {
            let d = d
                .as_int()
                .ok_or_else(|| Error::Unsupported(format!("cosize of {self} with non-integer strides")))?;
            let step = (s - 1).checked_mul(d.max(0)).ok_or(Error::Overflow("cosize"))?;
            hi = hi.checked_add(step).ok_or(Error::Overflow("cosize"))?;
        }
        Ok(hi + 1)
    }

    /// Per-axis cosizes of a coordinate layout.
    pub fn coord_cosize(&self) -> Result<Vec<i64>> {
        let mut hi: Vec<i64> = Vec::new();
        for (s, d) in self.flat_modes() {
            let v = d
                .as_coord()
                .ok_or_else(|| Error::Unsupported(format!("coordinate cosize of {self}")))?;
            if hi.len() < v.len() {
                hi.resize(v.len(), 0);
            }
            for (h, &x) in hi.iter_mut().zip(v) {
                *h += (s - 1) * x.max(0);
            }
        }
        Ok(hi.into_iter().map(|h| h + 1).collect())
    }

    /// Largest basis axis used plus one (0 for non-coordinate layouts).
    pub fn coord_axes(&self) -> usize {
        self.stride.leaves().iter().filter_map(|d| d.as_coord()).map(<[i64]>::len).max().unwrap_or(0)
    }

    /// Minimal-rank flat layout with the same integral-coordinate function.
    pub fn coalesce(&self) -> Layout {
        Layout::from_modes(coalesce_modes(&self.flat_modes(), false))
    }

    /// Coalesce each mode picked out by `profile`; leaves of the profile coalesce whole subtrees.
    pub fn coalesce_by_mode<T>(&self, profile: &Tuple<T>) -> Result<Layout> {
        match profile {
            Tuple::Leaf(_) => Ok(self.coalesce()),
            Tuple::List(p) => {
                if self.shape.is_leaf() || p.len() != self.rank() {
                    return Err(Error::Structure(format!(
                        "profile of rank {} does not match {self}",
                        p.len()
                    )));
                }
                let parts = p
                    .iter()
                    .enumerate()
                    .map(|(i, q)| self.mode(i)?.coalesce_by_mode(q))
                    .collect::<Result<Vec<_>>>()?;
                Layout::concat(&parts)
            }
        }
    }

    /// Every stride is a non-negative integer (or zero).
    pub(crate) fn check_non_negative(&self) -> Result<()> {
        for d in self.stride.leaves() {
            let neg = match d {
                StrideElem::Int(v) => *v < 0,
                StrideElem::Coord(v) => v.iter().any(|&x| x < 0),
                StrideElem::Xor(_) => false,
            };
            if neg {
                return Err(Error::Unsupported(format!("negative stride {d} in {self}")));
            }
        }
        Ok(())
    }
}

fn has_empty_list(t: &IntTuple) -> bool {
    match t {
        Tuple::Leaf(_) => false,
        Tuple::List(c) => c.is_empty() || c.iter().any(has_empty_list),
    }
}

fn eval_at(shape: &IntTuple, stride: &Stride, c: &IntTuple) -> Result<StrideElem> {
    match (c, shape) {
        (Tuple::Leaf(i), _) => inner_product(&idx2crd(*i, shape), stride),
        (Tuple::List(cs), Tuple::List(ss)) if cs.len() == ss.len() => {
            let ds = match stride {
                Tuple::List(ds) => ds,
                Tuple::Leaf(_) => unreachable!("congruent"),
            };
            cs.iter()
                .zip(ss)
                .zip(ds)
                .try_fold(ZERO, |acc, ((ci, si), di)| acc.add(&eval_at(si, di, ci)?))
        }
        _ => Err(Error::Structure(format!("coordinate {c} is not admissible for shape {shape}"))),
    }
}

/// `d1 == s0·d0` in the stride semimodule, i.e. mode 1 continues mode 0.
fn continues(s0: i64, d0: &StrideElem, d1: &StrideElem) -> bool {
    if matches!(d0, StrideElem::Xor(_)) && (s0 as u64).count_ones() != 1 {
        return false;
    }
    d0.scale(s0).map(|x| &x == d1).unwrap_or(false)
}

/// Merge adjacent continuing modes and drop unit modes.
///
/// With `keep_last`, a trailing unit mode is retained: it carries the stride
/// the layout extends with past its size.
pub(crate) fn coalesce_modes(modes: &[Mode], keep_last: bool) -> Vec<Mode> {
    let mut out: Vec<Mode> = Vec::new();
    let n = modes.len();
    for (i, (s, d)) in modes.iter().enumerate() {
        let keep = keep_last && i + 1 == n;
        if *s == 1 && !keep {
            continue;
        }
        match out.last_mut() {
            Some((s0, d0)) if continues(*s0, d0, d) => *s0 *= s,
            _ => out.push((*s, if *s == 1 && !keep { ZERO } else { d.clone() })),
        }
    }
    out
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.shape, self.stride)
    }
}

/// A hierarchical tuple of layouts steering by-mode operations.
///
/// An integer leaf `n` stands for the layout `n:1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiler(pub Tuple<Layout>);

impl Tiler {
    pub fn rank(&self) -> usize {
        self.0.rank()
    }
}

impl From<Layout> for Tiler {
    fn from(l: Layout) -> Self {
        Tiler(Tuple::Leaf(l))
    }
}

impl From<Vec<Layout>> for Tiler {
    fn from(v: Vec<Layout>) -> Self {
        Tiler(Tuple::List(v.into_iter().map(Tuple::Leaf).collect()))
    }
}

impl fmt::Display for Tiler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Tuple<Layout>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Tuple::Leaf(l) => write!(f, "{l}"),
                Tuple::List(c) => {
                    f.write_str("[")?;
                    for (i, x) in c.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        go(x, f)?;
                    }
                    f.write_str("]")
                }
            }
        }
        go(&self.0, f)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l(s: &str) -> Layout {
        s.parse().unwrap()
    }

    #[test]
    fn construction() {
        assert!("(4,8):(1,4)".parse::<Layout>().is_ok());
        assert!("(4,8):(e0,e1)".parse::<Layout>().is_ok());
        assert!(matches!("(4,8):(1,(4,4))".parse::<Layout>(), Err(Error::Structure(_))));
        assert!(matches!("(4,8):(1,e0)".parse::<Layout>(), Err(Error::Kind(_))));
        assert!("(4,0):(1,4)".parse::<Layout>().is_err());
    }

    #[test]
    fn evaluation() {
        let a = l("((2,2),(4,2)):((1,8),(2,16))");
        assert_eq!(a.eval_int(22).unwrap(), 26);
        assert_eq!(a.eval(&"((0,1),(1,1))".parse().unwrap()).unwrap(), StrideElem::Int(26));
        assert_eq!(a.eval(&"(2,5)".parse().unwrap()).unwrap(), StrideElem::Int(26));
        assert_eq!(a.eval_int(0).unwrap(), 0);
        assert_eq!(l("(4,8):(8,1)").eval(&"(1,2)".parse().unwrap()).unwrap(), StrideElem::Int(10));
        assert!(a.eval(&"(1,2,3)".parse().unwrap()).is_err());
    }

    #[test]
    fn concatenation() {
        let c = Layout::concat(&[l("4:1"), l("8:4")]).unwrap();
        assert_eq!(c, l("(4,8):(1,4)"));
        assert!(Layout::concat(&[l("2:1"), l("(8,1):(6,2)")]).is_ok());
        assert!(matches!(Layout::concat(&[l("4:2"), l("3:e0")]), Err(Error::Kind(_))));
    }

    #[test]
    fn sublayouts() {
        assert_eq!(l("(4,(3,2)):(2,(8,1))").mode(1).unwrap(), l("(3,2):(8,1)"));
        assert_eq!(l("(4,8):(1,4)").mode(0).unwrap(), l("4:1"));
        assert_eq!(l("((2,2),(4,2)):((1,8),(2,16))").sublayout(&[1, 0]).unwrap(), l("4:2"));
        assert!(l("(4,8):(1,4)").mode(2).is_err());
    }

    #[test]
    fn flattening() {
        assert_eq!(l("(4,(3,2)):(2,(8,1))").flatten(), l("(4,3,2):(2,8,1)"));
        assert_eq!(l("8:1").flatten(), l("8:1"));
        assert_eq!(l("((2,2),(4,2)):((1,8),(2,16))").flatten(), l("(2,2,4,2):(1,8,2,16)"));
    }

    #[test]
    fn coalescing() {
        assert_eq!(l("(2,(1,6)):(1,(6,2))").coalesce(), l("12:1"));
        assert_eq!(l("((4,3),5):((15,1),3)").coalesce(), l("(4,15):(15,1)"));
        assert_eq!(l("1:7").coalesce(), l("1:0"));
        assert_eq!(l("(1,1):(3,9)").coalesce(), l("1:0"));
        assert_eq!(l("(2,2):(f1,f2)").coalesce(), l("4:f1"));
        assert_eq!(l("(3,2):(f1,f3)").coalesce(), l("(3,2):(f1,f3)"));
        assert_eq!(l("(4,8):(e0,4e0)").coalesce(), l("32:e0"));
    }

    #[test]
    fn coalescing_by_mode() {
        let p: IntTuple = "(1,1)".parse().unwrap();
        assert_eq!(l("(2,(1,6)):(1,(6,2))").coalesce_by_mode(&p).unwrap(), l("(2,6):(1,2)"));
        assert_eq!(l("(4,(3,5)):(15,(1,3))").coalesce_by_mode(&p).unwrap(), l("(4,15):(15,1)"));
        assert_eq!(l("((4,3),5):((15,1),3)").coalesce_by_mode(&p).unwrap(), l("((4,3),5):((15,1),3)"));
        assert!(l("(4,8):(1,4)").coalesce_by_mode(&"(1,1,1)".parse::<IntTuple>().unwrap()).is_err());
    }

    #[test]
    fn identities() {
        assert_eq!(Layout::identity(&"(4,6)".parse().unwrap()).unwrap(), l("(4,6):(1,4)"));
        assert_eq!(Layout::identity(&"24".parse().unwrap()).unwrap(), l("24:1"));
        assert_eq!(Layout::identity(&"(3,(4,2))".parse().unwrap()).unwrap(), l("(3,(4,2)):(1,(3,12))"));
        assert_eq!(Layout::coordinate_identity(&"(4,8)".parse().unwrap()).unwrap(), l("(4,8):(e0,e1)"));
        assert_eq!(Layout::coordinate_identity(&"7".parse().unwrap()).unwrap(), l("7:e0"));
        assert_eq!(
            Layout::coordinate_identity(&"(4,(3,2))".parse().unwrap()).unwrap(),
            l("(4,(3,2)):(e0,(e1,3e1))")
        );
    }

    #[test]
    fn cosizes() {
        assert_eq!(l("(4,8):(1,4)").cosize().unwrap(), 32);
        assert_eq!(l("1:0").cosize().unwrap(), 1);
        assert_eq!(l("(4,8):(20,2)").cosize().unwrap(), 75);
        assert_eq!(l("(4,(4,2)):(e1,(e0,6e1))").coord_cosize().unwrap(), vec![4, 10]);
        assert!(l("4:f1").cosize().is_err());
    }

    #[test]
    fn tiler_text() {
        let t: Tiler = "[4:1,8:2]".parse().unwrap();
        assert_eq!(t.rank(), 2);
        assert_eq!(Tiler::from(vec![l("4:1"), l("8:2")]), t);
    }

    pub(crate) fn layout_strategy() -> impl Strategy<Value = Layout> {
        crate::inttuple::tests::shape_strategy().prop_flat_map(|s| {
            let n = s.flatten().len();
            (Just(s), prop::collection::vec(0i64..13, n)).prop_map(|(s, d)| {
                let d: Vec<StrideElem> = d.into_iter().map(StrideElem::Int).collect();
                let stride = s.unflatten(&d).unwrap();
                Layout::new(s, stride).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn coalesce_preserves_function(a in layout_strategy()) {
            let c = a.coalesce();
            prop_assert!(c.depth() <= 1);
            prop_assert_eq!(c.size(), a.size());
            for i in 0..a.size() {
                prop_assert_eq!(c.eval_index(i).unwrap(), a.eval_index(i).unwrap());
            }
        }

        #[test]
        fn flatten_preserves_function(a in layout_strategy()) {
            let f = a.flatten();
            for i in 0..a.size() {
                prop_assert_eq!(f.eval_index(i).unwrap(), a.eval_index(i).unwrap());
            }
        }

        #[test]
        fn integral_and_natural_agree(a in layout_strategy()) {
            for i in 0..a.size() {
                let c = idx2crd(i, a.shape());
                prop_assert_eq!(a.eval(&c).unwrap(), a.eval(&Tuple::Leaf(i)).unwrap());
            }
        }

        #[test]
        fn concat_then_select(a in layout_strategy(), b in layout_strategy()) {
            let c = Layout::concat(&[a.clone(), b.clone()]).unwrap();
            prop_assert_eq!(c.mode(0).unwrap(), a);
            prop_assert_eq!(c.mode(1).unwrap(), b);
        }

        #[test]
        fn identities_are_identities(s in crate::inttuple::tests::shape_strategy()) {
            let id = Layout::identity(&s).unwrap();
            let cid = Layout::coordinate_identity(&s).unwrap();
            for i in 0..s.size() {
                prop_assert_eq!(id.eval_int(i).unwrap(), i);
                let c = idx2crd(i, &s);
                let expect: Vec<i64> = match &c {
                    Tuple::Leaf(v) => vec![*v],
                    Tuple::List(m) => m.iter().zip(s.modes()).map(|(ci, si)| crate::inttuple::crd2idx(ci, si).unwrap()).collect(),
                };
                prop_assert_eq!(cid.eval(&c).unwrap(), StrideElem::coord(expect));
            }
        }
    }
}
