//! Analyses built on the algebra: vector widths, offset location, linear
//! forms and the completeness construction.

use std::fmt;

use crate::algebra::{compose, left_inverse, right_inverse};
use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::stride::{clmul, Kind, StrideElem};

fn require_int(l: &Layout) -> Result<()> {
    match l.kind() {
        None | Some(Kind::Int) => Ok(()),
        Some(k) => Err(Error::Kind(format!("{l} has {k} strides; integer strides required"))),
    }
}

/// Largest `K` such that the first `K` offsets of `A‡` and `B‡` agree.
///
/// Falls back to 1 (scalar access) when the composition is not admissible.
pub fn max_common_vector(a: &Layout, b: &Layout) -> Result<i64> {
    require_int(a)?;
    require_int(b)?;
    if a.size() != b.size() {
        return Err(Error::Contract(format!("sizes of {a} and {b} differ")));
    }
    let inv = right_inverse(a)?;
    let Ok(r) = compose(b, &inv) else { return Ok(1) };
    let modes = r.coalesce().flat_modes();
    match modes.first() {
        Some((s, StrideElem::Int(1))) => Ok(*s),
        _ => Ok(1),
    }
}

/// `A‡` restricted to its first `K` offsets: the coordinates of the common vector.
pub fn common_sublayout(a: &Layout, b: &Layout) -> Result<Layout> {
    let k = max_common_vector(a, b)?;
    compose(&right_inverse(a)?, &Layout::leaf(k, 1)?)
}

/// `A† ∘ T`, after checking every offset of `T` is produced by `A`.
///
/// The result maps coordinates of `T` to integral coordinates of `A`.
pub fn locate_offsets(a: &Layout, t: &Layout) -> Result<Layout> {
    require_int(a)?;
    require_int(t)?;
    let inv = left_inverse(a)?;
    for i in 0..t.size() {
        let want = t.eval_int(i)?;
        let j = if want < 0 { -1 } else { inv.eval_int(want)? };
        if !(0..a.size()).contains(&j) || a.eval_int(j)? != want {
            return Err(Error::Admissibility { index: i, offset: want });
        }
    }
    compose(&inv, t)
}

/// The matrix of a flat layout: `L(c) = D·c` over the codomain's arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearForm {
    /// One row; column `j` is the stride of flat mode `j`.
    Int(Vec<i64>),
    /// One row per codomain axis.
    Coord(Vec<Vec<i64>>),
    /// Bit columns over F2; each mode of extent `2^k` contributes `k` columns.
    F2 { cols: Vec<u64>, bits_per_mode: Vec<u32> },
}

/// The linear form of `l` over its flattened modes.
pub fn linear_form(l: &Layout) -> Result<LinearForm> {
    let modes = l.flat_modes();
    match l.kind() {
        None | Some(Kind::Int) => Ok(LinearForm::Int(modes.iter().map(|(_, d)| d.as_int().unwrap()).collect())),
        Some(Kind::Coord) => {
            let axes = l.coord_axes();
            let rows = (0..axes)
                .map(|a| modes.iter().map(|(_, d)| d.as_coord().unwrap().get(a).copied().unwrap_or(0)).collect())
                .collect();
            Ok(LinearForm::Coord(rows))
        }
        Some(Kind::Xor) => {
            let mut cols = Vec::new();
            let mut bits_per_mode = Vec::new();
            for (s, d) in &modes {
                let u = *s as u64;
                if !u.is_power_of_two() {
                    return Err(Error::Unsupported(format!("xor mode {s}:{d} must have a power-of-two extent")));
                }
                let k = u.trailing_zeros();
                for t in 0..k {
                    cols.push(clmul(1 << t, d.as_xor().unwrap()).ok_or(Error::Overflow("linear form"))?);
                }
                bits_per_mode.push(k);
            }
            Ok(LinearForm::F2 { cols, bits_per_mode })
        }
    }
}

impl LinearForm {
    /// Number of columns.
    pub fn cols(&self) -> usize {
        match self {
            LinearForm::Int(r) => r.len(),
            LinearForm::Coord(rows) => rows.first().map_or(0, Vec::len),
            LinearForm::F2 { cols, .. } => cols.len(),
        }
    }

    /// Rows as integer vectors (bits for the F2 form, least significant first).
    pub fn rows(&self) -> Vec<Vec<i64>> {
        match self {
            LinearForm::Int(r) => vec![r.clone()],
            LinearForm::Coord(rows) => rows.clone(),
            LinearForm::F2 { cols, .. } => {
                let n = cols.iter().map(|c| 64 - c.leading_zeros()).max().unwrap_or(0);
                (0..n).map(|b| cols.iter().map(|c| ((c >> b) & 1) as i64).collect()).collect()
            }
        }
    }

    /// `D·c` for a flat natural coordinate `c` (one entry per flat mode).
    pub fn apply(&self, c: &[i64]) -> StrideElem {
        match self {
            LinearForm::Int(r) => StrideElem::Int(r.iter().zip(c).map(|(d, x)| d * x).sum()),
            LinearForm::Coord(rows) => {
                StrideElem::coord(rows.iter().map(|r| r.iter().zip(c).map(|(d, x)| d * x).sum()).collect())
            }
            LinearForm::F2 { cols, bits_per_mode } => {
                let mut acc = 0u64;
                let mut j = 0;
                for (&k, &x) in bits_per_mode.iter().zip(c) {
                    for t in 0..k {
                        if (x >> t) & 1 == 1 {
                            acc ^= cols[j + t as usize];
                        }
                    }
                    j += k as usize;
                }
                StrideElem::xor(acc)
            }
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &Vec<i64>| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
        match self {
            LinearForm::Int(r) => f.write_str(&row(r)),
            _ => {
                let rows: Vec<String> = self.rows().iter().map(row).collect();
                write!(f, "[{}]", rows.join(","))
            }
        }
    }
}

/// A chain of layouts whose composition reproduces an arbitrary table `f` on
/// `[0, N)` with `f(0) = 0`.
///
/// The first layout is a lookup `(2,…,2):(f(1),…,f(N-1))`; the remaining ones
/// (applied right to left) send `i` to `2^(i-1)`.
pub fn function_to_chain(f: &[i64]) -> Result<Vec<Layout>> {
    match f.first() {
        None => return Err(Error::Contract("empty function table".into())),
        Some(&v) if v != 0 => return Err(Error::Contract(format!("f(0) = {v}, must be 0"))),
        _ => {}
    }
    let n = f.len() as i64;
    if n > 64 {
        return Err(Error::Overflow("function tables are limited to 64 entries"));
    }
    if n == 1 {
        return Ok(vec![Layout::from_modes(vec![])]);
    }
    let lookup = Layout::from_modes(f[1..].iter().map(|&v| (2, StrideElem::Int(v))).collect());
    let mut chain = vec![lookup];
    for k in 3..n {
        chain.push(Layout::from_modes(vec![(k, StrideElem::Int(1)), (1, StrideElem::Int(2 * (k - 1)))]));
    }
    Ok(chain)
}

/// Evaluate a chain right to left, using the extended domain of each layout.
pub fn chain_eval(chain: &[Layout], i: i64) -> Result<i64> {
    chain.iter().rev().try_fold(i, |x, l| l.eval_int(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l(s: &str) -> Layout {
        s.parse().unwrap()
    }

    #[test]
    fn vector_widths() {
        assert_eq!(max_common_vector(&l("(4,4):(1,4)"), &l("((2,2),4):((1,8),2)")).unwrap(), 2);
        let (a, b) = (l("((2,2),(2,2)):((8,2),(4,1))"), l("((2,2),(2,2)):((4,2),(8,1))"));
        assert_eq!(max_common_vector(&a, &b).unwrap(), 4);
        assert_eq!(max_common_vector(&a, &a).unwrap(), 16);
        assert_eq!(max_common_vector(&l("(4,4):(4,1)"), &l("(4,4):(1,4)")).unwrap(), 1);
        assert!(matches!(max_common_vector(&a, &l("8:1")), Err(Error::Contract(_))));
    }

    #[test]
    fn common_sublayouts() {
        let (a, b) = (l("((2,2),(2,2)):((8,2),(4,1))"), l("((2,2),(2,2)):((4,2),(8,1))"));
        let c = common_sublayout(&a, &b).unwrap();
        let mut coords: Vec<i64> = (0..c.size()).map(|i| c.eval_int(i).unwrap()).collect();
        coords.sort();
        assert_eq!(coords, vec![0, 2, 8, 10]);
        assert_eq!(common_sublayout(&l("(4,4):(1,4)"), &l("((2,2),4):((1,8),2)")).unwrap(), l("2:1"));
        assert_eq!(common_sublayout(&l("(4,8):(1,4)"), &l("(4,8):(1,4)")).unwrap(), l("32:1"));
    }

    #[test]
    fn offset_location() {
        let a = l("(128,512):(16384,1)");
        let r = locate_offsets(&a, &l("(1,128):(1,16384)")).unwrap();
        assert_eq!(r, l("(1,128):(0,1)"));
        assert_eq!(locate_offsets(&l("(4,8):(1,4)"), &l("5:7")).unwrap(), l("5:7"));
        assert_eq!(
            locate_offsets(&l("(4,8):(1,4)"), &l("5:8")).unwrap_err(),
            Error::Admissibility { index: 4, offset: 32 }
        );
        assert_eq!(
            locate_offsets(&l("(4,8):(1,5)"), &l("8:1")).unwrap_err(),
            Error::Admissibility { index: 4, offset: 4 }
        );
    }

    #[test]
    fn linear_forms() {
        assert_eq!(linear_form(&l("((2,2),(4,2)):((1,8),(2,16))")).unwrap().to_string(), "[1 8 2 16]");
        assert_eq!(linear_form(&l("(4,(4,2)):(e1,(e0,6e1))")).unwrap().to_string(), "[[0 1 0],[1 0 6]]");
        let f = linear_form(&l("(4,4):(f1,f5)")).unwrap();
        assert_eq!(f.to_string(), "[[1 0 1 0],[0 1 0 1],[0 0 1 0],[0 0 0 1]]");
        assert!(matches!(linear_form(&l("(3,4):(f1,f5)")), Err(Error::Unsupported(_))));
    }

    #[test]
    fn chains() {
        for f in [vec![0, 1, 2, 3], vec![0, 7, 3, 5], vec![0, -4], vec![0]] {
            let c = function_to_chain(&f).unwrap();
            for (i, &v) in f.iter().enumerate() {
                assert_eq!(chain_eval(&c, i as i64).unwrap(), v);
            }
        }
        assert_eq!(function_to_chain(&[0, 9]).unwrap().len(), 1);
        assert!(matches!(function_to_chain(&[1, 2]), Err(Error::Contract(_))));
        assert_eq!(chain_eval(&[], 5).unwrap(), 5);
        assert_eq!(chain_eval(&[l("(4,8):(8,1)")], 5).unwrap(), 9);
    }

    fn flat_coord(l: &Layout, i: i64) -> Vec<i64> {
        crate::inttuple::idx2crd(i, l.shape()).flatten()
    }

    proptest! {
        #[test]
        fn chains_reproduce_tables(f in prop::collection::vec(-1000i64..1000, 1..=64)) {
            let mut f = f;
            f[0] = 0;
            let c = function_to_chain(&f).unwrap();
            for (i, &v) in f.iter().enumerate() {
                prop_assert_eq!(chain_eval(&c, i as i64).unwrap(), v);
            }
        }

        #[test]
        fn linear_form_reproduces_layout(a in crate::layout::tests::layout_strategy()) {
            let f = linear_form(&a).unwrap();
            for i in 0..a.size() {
                prop_assert_eq!(f.apply(&flat_coord(&a, i)), a.eval_index(i).unwrap());
            }
        }

        #[test]
        fn common_vector_is_common(a in crate::layout::tests::layout_strategy(), seed in any::<u64>()) {
            let mut img: Vec<i64> = (0..a.size()).map(|i| a.eval_int(i).unwrap()).collect();
            img.sort();
            img.dedup();
            prop_assume!(img.len() as i64 == a.size());
            // B: the same shape with its strides shuffled
            let mut d = a.stride().flatten();
            let n = d.len();
            for i in (1..n).rev() {
                d.swap(i, (seed as usize >> (i % 32)) % (i + 1));
            }
            let b = Layout::new(a.shape().clone(), a.shape().unflatten(&d).unwrap()).unwrap();
            let mut img_b: Vec<i64> = (0..b.size()).map(|i| b.eval_int(i).unwrap()).collect();
            img_b.sort();
            prop_assume!(img_b == img);
            let k = max_common_vector(&a, &b).unwrap();
            let k2 = max_common_vector(&b, &a).unwrap();
            prop_assert_eq!(k, k2);
            let (ra, rb) = (right_inverse(&a).unwrap(), right_inverse(&b).unwrap());
            prop_assert!(k == 1 || k <= ra.size());
            for i in 0..k.min(ra.size()) {
                prop_assert_eq!(ra.eval_int(i).unwrap(), rb.eval_int(i).unwrap());
            }
        }
    }
}
