//! Stride elements: integers, scaled coordinate-basis vectors, and XOR masks.
//!
//! Each kind is an integer-semimodule: it has an associative addition with a
//! zero, and scaling by a non-negative integer. The zero of every kind is
//! represented by `Int(0)`, so a zero stride never causes a kind clash.

use std::fmt;

use crate::error::{Error, Result};
use crate::inttuple::{IntTuple, Tuple};

/// Semimodule kinds a stride may belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Int,
    Coord,
    Xor,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Int => "integer",
            Kind::Coord => "coordinate",
            Kind::Xor => "xor",
        })
    }
}

/// One element of a stride semimodule.
///
/// Values are kept normalized: `Coord` has no trailing zero components and is
/// never all-zero, `Xor` is never zero. Use the constructors to get that.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrideElem {
    Int(i64),
    /// Sum of scaled basis vectors: component `i` is the scale of `e_i`.
    Coord(Vec<i64>),
    /// Element of F2[x] with XOR addition; `f<mask>` in text.
    Xor(u64),
}

pub type Stride = Tuple<StrideElem>;

pub const ZERO: StrideElem = StrideElem::Int(0);

impl From<i64> for StrideElem {
    fn from(v: i64) -> Self {
        StrideElem::Int(v)
    }
}

impl StrideElem {
    /// `scale * e_axis`.
    pub fn scaled_basis(scale: i64, axis: usize) -> StrideElem {
        let mut v = vec![0; axis + 1];
        v[axis] = scale;
        StrideElem::coord(v)
    }

    pub fn basis(axis: usize) -> StrideElem {
        StrideElem::scaled_basis(1, axis)
    }

    /// Normalizing constructor for coordinate elements.
    pub fn coord(mut v: Vec<i64>) -> StrideElem {
        while v.last() == Some(&0) {
            v.pop();
        }
        if v.is_empty() {
            ZERO
        } else {
            StrideElem::Coord(v)
        }
    }

    /// Normalizing constructor for XOR elements.
    pub fn xor(mask: u64) -> StrideElem {
        if mask == 0 {
            ZERO
        } else {
            StrideElem::Xor(mask)
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == ZERO
    }

    /// `None` for zero, which belongs to every kind.
    pub fn kind(&self) -> Option<Kind> {
        match self {
            StrideElem::Int(0) => None,
            StrideElem::Int(_) => Some(Kind::Int),
            StrideElem::Coord(_) => Some(Kind::Coord),
            StrideElem::Xor(_) => Some(Kind::Xor),
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            StrideElem::Int(v) => Some(*v),
            _ => None,
        }
    }

    /// Coordinate components (zero gives the empty vector).
    pub fn as_coord(&self) -> Option<&[i64]> {
        match self {
            StrideElem::Int(0) => Some(&[]),
            StrideElem::Coord(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_xor(&self) -> Option<u64> {
        match self {
            StrideElem::Int(0) => Some(0),
            StrideElem::Xor(m) => Some(*m),
            _ => None,
        }
    }

    /// For a single scaled basis element `a*e_i`, returns `(a, i)`.
    pub fn as_scaled_basis(&self) -> Option<(i64, usize)> {
        let v = self.as_coord()?;
        let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
        match nz[..] {
            [i] => Some((v[i], i)),
            _ => None,
        }
    }

    /// Semimodule addition.
    pub fn add(&self, other: &StrideElem) -> Result<StrideElem> {
        use StrideElem::*;
        Ok(match (self, other) {
            (a, b) if b.is_zero() => a.clone(),
            (a, b) if a.is_zero() => b.clone(),
            (Int(a), Int(b)) => Int(a.checked_add(*b).ok_or(Error::Overflow("stride addition"))?),
            (Coord(a), Coord(b)) => {
                let n = a.len().max(b.len());
                let mut v = vec![0i64; n];
                for (i, x) in v.iter_mut().enumerate() {
                    let p = a.get(i).copied().unwrap_or(0);
                    let q = b.get(i).copied().unwrap_or(0);
                    *x = p.checked_add(q).ok_or(Error::Overflow("stride addition"))?;
                }
                StrideElem::coord(v)
            }
            (Xor(a), Xor(b)) => StrideElem::xor(a ^ b),
            (a, b) => {
                return Err(Error::Kind(format!("cannot add {a} and {b}")));
            }
        })
    }

    /// The `k`-fold sum `k·self`. XOR elements scale by carry-less product.
    pub fn scale(&self, k: i64) -> Result<StrideElem> {
        use StrideElem::*;
        Ok(match self {
            Int(d) => Int(d.checked_mul(k).ok_or(Error::Overflow("stride scaling"))?),
            Coord(v) => StrideElem::coord(
                v.iter()
                    .map(|x| x.checked_mul(k).ok_or(Error::Overflow("stride scaling")))
                    .collect::<Result<_>>()?,
            ),
            Xor(m) => {
                let k = u64::try_from(k)
                    .map_err(|_| Error::Unsupported(format!("negative multiple {k} of {self}")))?;
                StrideElem::xor(clmul(k, *m).ok_or(Error::Overflow("stride scaling"))?)
            }
        })
    }

    /// Stride of the composite mode that visits every `k`-th step of `self`.
    ///
    /// For XOR strides this is only a stride when `k` is a power of two.
    pub fn compose_scale(&self, k: i64) -> Result<StrideElem> {
        if k < 1 {
            return Err(Error::Contract(format!("composition step {k} must be positive")));
        }
        if matches!(self, StrideElem::Xor(_)) && (k as u64).count_ones() != 1 {
            return Err(Error::Unsupported(format!(
                "xor stride {self} cannot be stepped by {k}, which is not a power of two"
            )));
        }
        self.scale(k)
    }
}

/// Carry-less (polynomial over F2) product; `None` on overflow.
pub fn clmul(a: u64, b: u64) -> Option<u64> {
    let mut acc: u128 = 0;
    for bit in 0..64 {
        if (a >> bit) & 1 == 1 {
            acc ^= (b as u128) << bit;
        }
    }
    u64::try_from(acc).ok()
}

/// Sum of `c_i · d_i` over congruent coordinate and stride.
pub fn inner_product(c: &IntTuple, d: &Stride) -> Result<StrideElem> {
    match (c, d) {
        (Tuple::Leaf(k), Tuple::Leaf(s)) => s.scale(*k),
        (Tuple::List(cs), Tuple::List(ds)) if cs.len() == ds.len() => {
            cs.iter().zip(ds).try_fold(ZERO, |acc, (ci, di)| acc.add(&inner_product(ci, di)?))
        }
        _ => Err(Error::Structure(format!("coordinate {c} does not match stride {d}"))),
    }
}

/// The common kind of all leaves; `None` if every stride is zero.
pub fn stride_kind(d: &Stride) -> Result<Option<Kind>> {
    let mut kind = None;
    for e in d.leaves() {
        match (kind, e.kind()) {
            (_, None) => {}
            (None, k) => kind = k,
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Kind(format!("{a} and {b} strides mixed in {d}")));
            }
            _ => {}
        }
    }
    Ok(kind)
}

impl fmt::Display for StrideElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrideElem::Int(v) => write!(f, "{v}"),
            StrideElem::Xor(m) => write!(f, "f{m}"),
            StrideElem::Coord(v) => {
                let mut first = true;
                for (i, &a) in v.iter().enumerate().filter(|(_, a)| **a != 0) {
                    if !first {
                        f.write_str("+")?;
                    }
                    first = false;
                    if a == 1 {
                        write!(f, "e{i}")?;
                    } else {
                        write!(f, "{a}*e{i}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use StrideElem::*;

    fn e(s: i64, a: usize) -> StrideElem {
        StrideElem::scaled_basis(s, a)
    }

    #[test]
    fn addition() {
        assert_eq!(Int(3).add(&Int(4)).unwrap(), Int(7));
        assert_eq!(Xor(1).add(&Xor(5)).unwrap(), Xor(4));
        assert_eq!(e(2, 1).add(&e(3, 1)).unwrap(), e(5, 1));
        assert_eq!(Xor(5).add(&Xor(5)).unwrap(), ZERO);
        assert_eq!(e(2, 0).add(&e(7, 1)).unwrap(), Coord(vec![2, 7]));
        assert!(Int(2).add(&e(1, 0)).is_err());
        assert!(Xor(2).add(&Int(1)).is_err());
    }

    #[test]
    fn scaling() {
        for m in [Int(9), e(3, 2), Xor(6)] {
            assert_eq!(m.scale(1).unwrap(), m);
            assert_eq!(m.scale(0).unwrap(), ZERO);
        }
        assert_eq!(Int(8).scale(2).unwrap(), Int(16));
        // carry-less: 3·f5 = (x+1)(x^2+1) = x^3+x^2+x+1
        assert_eq!(Xor(5).scale(3).unwrap(), Xor(15));
        assert_eq!(Xor(5).scale(2).unwrap(), Xor(10));
    }

    #[test]
    fn compose_scaling() {
        assert_eq!(Int(3).compose_scale(4).unwrap(), Int(12));
        assert_eq!(e(1, 1).compose_scale(6).unwrap(), e(6, 1));
        assert_eq!(Xor(9).compose_scale(2).unwrap(), Xor(18));
        assert!(matches!(Xor(5).compose_scale(3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn inner_products() {
        let c: IntTuple = "((0,1),(1,1))".parse().unwrap();
        let d: Stride = "((1,8),(2,16))".parse().unwrap();
        assert_eq!(inner_product(&c, &d).unwrap(), Int(26));
        let z: IntTuple = "((0,0),(0,0))".parse().unwrap();
        assert_eq!(inner_product(&z, &d).unwrap(), ZERO);
        let c: IntTuple = "(1,(2,1))".parse().unwrap();
        let d: Stride = "(e1,(e0,6e1))".parse().unwrap();
        assert_eq!(inner_product(&c, &d).unwrap(), Coord(vec![2, 7]));
    }

    #[test]
    fn kinds() {
        let d: Stride = "(0,(e1,3e0))".parse().unwrap();
        assert_eq!(stride_kind(&d).unwrap(), Some(Kind::Coord));
        let d: Stride = "(f1,2)".parse().unwrap();
        assert!(stride_kind(&d).is_err());
        let d: Stride = "(0,0)".parse().unwrap();
        assert_eq!(stride_kind(&d).unwrap(), None);
    }

    #[test]
    fn display() {
        assert_eq!(e(1, 1).to_string(), "e1");
        assert_eq!(e(6, 1).to_string(), "6*e1");
        assert_eq!(Coord(vec![2, 7]).to_string(), "2*e0+7*e1");
        assert_eq!(Xor(16).to_string(), "f16");
        assert_eq!(ZERO.to_string(), "0");
    }

    #[test]
    fn small_range_laws_exhaustive() {
        for a in 0..16u64 {
            for b in 0..16u64 {
                for c in 0..16u64 {
                    let (a, b, c) = (StrideElem::xor(a), StrideElem::xor(b), StrideElem::xor(c));
                    let l = a.add(&b).unwrap().add(&c).unwrap();
                    let r = a.add(&b.add(&c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
                for k in 0..8i64 {
                    for j in 0..8i64 {
                        let m = StrideElem::xor(a);
                        let lhs = m.scale(j).unwrap().scale(k).unwrap();
                        let rhs = m.scale(clmul(k as u64, j as u64).unwrap() as i64).unwrap();
                        assert_eq!(lhs, rhs);
                        let m = Int(a as i64 - 8);
                        assert_eq!(m.scale(j).unwrap().scale(k).unwrap(), m.scale(j * k).unwrap());
                    }
                }
            }
        }
    }

    fn elem(kind: u8) -> BoxedStrategy<StrideElem> {
        match kind {
            0 => (-50i64..50).prop_map(Int).boxed(),
            1 => prop::collection::vec(-9i64..9, 0..4).prop_map(StrideElem::coord).boxed(),
            _ => (0u64..256).prop_map(StrideElem::xor).boxed(),
        }
    }

    proptest! {
        #[test]
        fn semimodule_laws((a, b, c) in (0u8..3).prop_flat_map(|k| (elem(k), elem(k), elem(k)))) {
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(a.add(&ZERO).unwrap(), a.clone());
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            for k in 0..5i64 {
                // distributivity over addition
                prop_assert_eq!(a.add(&b).unwrap().scale(k).unwrap(),
                                a.scale(k).unwrap().add(&b.scale(k).unwrap()).unwrap());
            }
        }

        #[test]
        fn inner_product_is_linear(c1 in prop::collection::vec(0i64..5, 3),
                                   c2 in prop::collection::vec(0i64..5, 3),
                                   d in prop::collection::vec(0i64..40, 3),
                                   kind in 0u8..3) {
            let mk = |v: &Vec<i64>| IntTuple::List(v.iter().map(|&x| Tuple::Leaf(x)).collect());
            let stride = Stride::List(d.iter().enumerate().map(|(i, &x)| Tuple::Leaf(match kind {
                0 => Int(x),
                1 => e(x, i % 2),
                _ => StrideElem::xor(x as u64),
            })).collect());
            let sum: Vec<i64> = c1.iter().zip(&c2).map(|(a, b)| a + b).collect();
            let lhs = inner_product(&mk(&sum), &stride).unwrap();
            let rhs = inner_product(&mk(&c1), &stride).unwrap().add(&inner_product(&mk(&c2), &stride).unwrap()).unwrap();
            if kind == 2 {
                // F2-linear only when the summed coordinates share no bits
                let disjoint = c1.iter().zip(&c2).all(|(a, b)| a & b == 0);
                if disjoint { prop_assert_eq!(lhs, rhs); }
            } else {
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
