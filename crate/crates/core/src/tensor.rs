//! Tensors: an accessor composed with a layout.

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Mul};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::inttuple::{IntTuple, Tuple};
use crate::layout::Layout;
use crate::stride::{Stride, StrideElem, ZERO};

/// Something that can be offset by a stride element and dereferenced.
pub trait Accessor: Clone {
    type Value;

    fn offset(&self, d: &StrideElem) -> Result<Self>;
    fn deref(&self) -> Result<Self::Value>;
}

/// An accessor that can also be written through.
pub trait Store: Accessor {
    fn store(&self, v: Self::Value) -> Result<()>;
}

/// Dereferences to its own (integer) position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountingAccessor {
    pub base: i64,
}

impl CountingAccessor {
    pub fn new(base: i64) -> Self {
        CountingAccessor { base }
    }
}

impl Accessor for CountingAccessor {
    type Value = i64;

    fn offset(&self, d: &StrideElem) -> Result<Self> {
        let v = d.as_int().ok_or_else(|| Error::Kind(format!("counting accessor offset by {d}")))?;
        Ok(CountingAccessor { base: self.base + v })
    }

    fn deref(&self) -> Result<i64> {
        Ok(self.base)
    }
}

impl fmt::Display for CountingAccessor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.base)
    }
}

/// Dereferences to its own coordinate position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordAccessor {
    pub base: StrideElem,
}

impl CoordAccessor {
    pub fn new(base: Vec<i64>) -> Self {
        CoordAccessor { base: StrideElem::coord(base) }
    }
}

impl Accessor for CoordAccessor {
    type Value = StrideElem;

    fn offset(&self, d: &StrideElem) -> Result<Self> {
        Ok(CoordAccessor { base: self.base.add(d)? })
    }

    fn deref(&self) -> Result<StrideElem> {
        Ok(self.base.clone())
    }
}

/// A bounds-checked window into a shared buffer.
#[derive(Debug)]
pub struct BufferAccessor<V> {
    storage: Rc<RefCell<Vec<V>>>,
    origin: i64,
}

impl<V> Clone for BufferAccessor<V> {
    fn clone(&self) -> Self {
        BufferAccessor { storage: Rc::clone(&self.storage), origin: self.origin }
    }
}

impl<V> BufferAccessor<V> {
    pub fn new(data: Vec<V>) -> Self {
        BufferAccessor { storage: Rc::new(RefCell::new(data)), origin: 0 }
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn storage(&self) -> Rc<RefCell<Vec<V>>> {
        Rc::clone(&self.storage)
    }

    fn index(&self) -> Result<usize> {
        let len = self.storage.borrow().len();
        if self.origin < 0 || self.origin as usize >= len {
            return Err(Error::OutOfBounds { index: self.origin, len });
        }
        Ok(self.origin as usize)
    }
}

impl<V: Clone> BufferAccessor<V> {
    /// A copy of the whole underlying buffer.
    pub fn snapshot(&self) -> Vec<V> {
        self.storage.borrow().clone()
    }
}

impl<V: Clone> Accessor for BufferAccessor<V> {
    type Value = V;

    fn offset(&self, d: &StrideElem) -> Result<Self> {
        let v = d.as_int().ok_or_else(|| Error::Kind(format!("buffer offset by {d}")))?;
        Ok(BufferAccessor { storage: Rc::clone(&self.storage), origin: self.origin + v })
    }

    fn deref(&self) -> Result<V> {
        let i = self.index()?;
        Ok(self.storage.borrow()[i].clone())
    }
}

impl<V: Clone> Store for BufferAccessor<V> {
    fn store(&self, v: V) -> Result<()> {
        let i = self.index()?;
        self.storage.borrow_mut()[i] = v;
        Ok(())
    }
}

/// One slot of a slicing coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Fixed(i64),
    Free,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Fixed(i) => write!(f, "{i}"),
            Slot::Free => f.write_str("_"),
        }
    }
}

/// A coordinate with `_` placeholders for the modes to keep.
pub type SliceCoord = Tuple<Slot>;

/// `T(c) = deref(offset(accessor, layout(c)))`.
#[derive(Debug, Clone)]
pub struct Tensor<A> {
    accessor: A,
    layout: Layout,
}

impl<A: Accessor> Tensor<A> {
    pub fn new(accessor: A, layout: Layout) -> Self {
        Tensor { accessor, layout }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn accessor(&self) -> &A {
        &self.accessor
    }

    pub fn size(&self) -> i64 {
        self.layout.size()
    }

    /// Value at a coordinate (any coarsening of the shape, including an integral index).
    pub fn eval(&self, c: &IntTuple) -> Result<A::Value> {
        self.at(c)?.deref()
    }

    pub fn eval_index(&self, i: i64) -> Result<A::Value> {
        self.eval(&Tuple::Leaf(i))
    }

    fn at(&self, c: &IntTuple) -> Result<A> {
        self.accessor.offset(&self.layout.eval(c)?)
    }

    /// Partial evaluation: fixed slots advance the accessor, free slots remain as modes.
    pub fn slice(&self, sc: &SliceCoord) -> Result<Tensor<A>> {
        let (off, kept) = slice_rec(sc, self.layout.shape(), self.layout.stride())?;
        let layout = match kept {
            None => Layout::from_modes(vec![]),
            Some((s, d)) => Layout::new(s, d)?,
        };
        Ok(Tensor { accessor: self.accessor.offset(&off)?, layout })
    }
}

impl<A: Store> Tensor<A> {
    pub fn store(&self, c: &IntTuple, v: A::Value) -> Result<()> {
        self.at(c)?.store(v)
    }

    pub fn store_index(&self, i: i64, v: A::Value) -> Result<()> {
        self.store(&Tuple::Leaf(i), v)
    }
}

impl<A: Accessor + fmt::Display> fmt::Display for Tensor<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∘{}", self.accessor, self.layout)
    }
}

type Kept = Option<(IntTuple, Stride)>;

fn slice_rec(sc: &SliceCoord, shape: &IntTuple, stride: &Stride) -> Result<(StrideElem, Kept)> {
    match (sc, shape, stride) {
        (Tuple::Leaf(Slot::Free), _, _) => Ok((ZERO, Some((shape.clone(), stride.clone())))),
        (Tuple::Leaf(Slot::Fixed(i)), _, _) => {
            let n = shape.size();
            if !(0..n).contains(i) {
                return Err(Error::Index(format!("slice index {i} outside mode of size {n}")));
            }
            let sub = Layout::new(shape.clone(), stride.clone())?;
            Ok((sub.eval_index(*i)?, None))
        }
        (Tuple::List(cs), Tuple::List(ss), Tuple::List(ds)) if cs.len() == ss.len() => {
            let mut off = ZERO;
            let mut kept_s = Vec::new();
            let mut kept_d = Vec::new();
            for ((c, s), d) in cs.iter().zip(ss).zip(ds) {
                let (o, k) = slice_rec(c, s, d)?;
                off = off.add(&o)?;
                if let Some((s, d)) = k {
                    kept_s.push(s);
                    kept_d.push(d);
                }
            }
            let kept = match kept_s.len() {
                0 => None,
                1 => Some((kept_s.pop().unwrap(), kept_d.pop().unwrap())),
                _ => Some((Tuple::List(kept_s), Tuple::List(kept_d))),
            };
            Ok((off, kept))
        }
        _ => Err(Error::Structure(format!("slice {sc} is not weakly congruent to shape {shape}"))),
    }
}

/// `dst(i) = src(i)` for every integral index `i`.
pub fn copy<S, D>(src: &Tensor<S>, dst: &Tensor<D>) -> Result<()>
where
    S: Accessor,
    D: Store<Value = S::Value>,
{
    if src.size() != dst.size() {
        return Err(Error::Contract(format!("copy between sizes {} and {}", src.size(), dst.size())));
    }
    for i in 0..src.size() {
        dst.store_index(i, src.eval_index(i)?)?;
    }
    Ok(())
}

fn mode_size(t: &Layout, i: usize) -> Result<i64> {
    if t.shape().is_leaf() || t.rank() != 2 {
        return Err(Error::Contract(format!("{t} is not a rank-2 layout")));
    }
    Ok(t.mode(i)?.size())
}

/// `C(m,n) += A(m,k) · B(n,k)` over 1-D coordinates per mode.
pub fn gemm<V, A, B, C>(a: &Tensor<A>, b: &Tensor<B>, c: &Tensor<C>) -> Result<()>
where
    V: Clone + Add<Output = V> + Mul<Output = V>,
    A: Accessor<Value = V>,
    B: Accessor<Value = V>,
    C: Store<Value = V>,
{
    let (m, k) = (mode_size(&a.layout, 0)?, mode_size(&a.layout, 1)?);
    let (n, kb) = (mode_size(&b.layout, 0)?, mode_size(&b.layout, 1)?);
    let (mc, nc) = (mode_size(&c.layout, 0)?, mode_size(&c.layout, 1)?);
    if m != mc || n != nc || k != kb {
        return Err(Error::Contract(format!(
            "gemm extents A {m}x{k}, B {n}x{kb}, C {mc}x{nc} do not agree"
        )));
    }
    let at = |x: i64, y: i64| Tuple::List(vec![Tuple::Leaf(x), Tuple::Leaf(y)]);
    for mi in 0..m {
        for ni in 0..n {
            for ki in 0..k {
                let acc = c.eval(&at(mi, ni))?;
                let v = acc + a.eval(&at(mi, ki))? * b.eval(&at(ni, ki))?;
                c.store(&at(mi, ni), v)?;
            }
        }
    }
    Ok(())
}
