//! Brute-force reference semantics.
//!
//! Everything here works on explicit function tables. Layout evaluation is
//! re-implemented from scratch (flat colex digits, last mode absorbing
//! overflow) and nothing from [`crate::algebra`] is used, so the checks are
//! an independent second opinion on the operators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::inttuple::Tuple;
use crate::layout::Layout;
use crate::stride::StrideElem;

/// Default largest domain [`tabulate`] will materialize.
pub const DEFAULT_BOUND: i64 = 65536;

/// `values[i] = L(i)` for every integral coordinate `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub values: Vec<StrideElem>,
}

impl FunctionTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The values as integers, if they all are.
    pub fn ints(&self) -> Option<Vec<i64>> {
        self.values.iter().map(int_of).collect()
    }
}

fn int_of(v: &StrideElem) -> Option<i64> {
    match v {
        StrideElem::Int(x) => Some(*x),
        StrideElem::Coord(c) if c.is_empty() => Some(0),
        StrideElem::Xor(0) => Some(0),
        _ => None,
    }
}

/// An offset used as an index; xor offsets are plain bit patterns.
fn index_of(v: &StrideElem) -> Option<i64> {
    match v {
        StrideElem::Xor(x) => i64::try_from(*x).ok(),
        _ => int_of(v),
    }
}

fn carryless(a: u64, b: u64) -> u64 {
    (0..64).filter(|t| (a >> t) & 1 == 1).fold(0, |acc, t| acc ^ (b << t))
}

/// `c·d`.
fn times(c: i64, d: &StrideElem) -> StrideElem {
    match d {
        StrideElem::Int(x) => StrideElem::Int(c * x),
        StrideElem::Coord(v) => StrideElem::coord(v.iter().map(|x| c * x).collect()),
        StrideElem::Xor(m) => StrideElem::xor(carryless(c as u64, *m)),
    }
}

/// `a + b`; zero of any kind is the identity.
fn plus(a: &StrideElem, b: &StrideElem) -> StrideElem {
    match (a, b) {
        (StrideElem::Int(0), x) | (x, StrideElem::Int(0)) => x.clone(),
        (StrideElem::Int(x), StrideElem::Int(y)) => StrideElem::Int(x + y),
        (StrideElem::Xor(x), StrideElem::Xor(y)) => StrideElem::xor(x ^ y),
        (StrideElem::Coord(x), StrideElem::Coord(y)) => {
            let n = x.len().max(y.len());
            let at = |v: &Vec<i64>, i: usize| v.get(i).copied().unwrap_or(0);
            StrideElem::coord((0..n).map(|i| at(x, i) + at(y, i)).collect())
        }
        _ => panic!("mixed stride kinds {a} and {b}"),
    }
}

/// `L(i)` on the extended domain: flat colex digits, the last absorbing overflow.
pub fn eval(l: &Layout, i: i64) -> StrideElem {
    let shape = l.shape().flatten();
    let stride = l.stride().flatten();
    let n = shape.len();
    let mut rest = i;
    let mut acc = StrideElem::Int(0);
    for (k, (s, d)) in shape.iter().zip(&stride).enumerate() {
        let c = if k + 1 == n { rest } else { rest.rem_euclid(*s) };
        rest = if k + 1 == n { 0 } else { rest.div_euclid(*s) };
        acc = plus(&acc, &times(c, d));
    }
    acc
}

/// `L` at one integral coordinate per top-level mode.
pub fn eval_modes(l: &Layout, c: &[i64]) -> StrideElem {
    match l.shape() {
        Tuple::Leaf(_) => {
            assert_eq!(c.len(), 1, "one coordinate for a rank-1 layout");
            eval(l, c[0])
        }
        Tuple::List(m) => {
            assert_eq!(c.len(), m.len(), "one coordinate per mode");
            c.iter()
                .enumerate()
                .fold(StrideElem::Int(0), |acc, (i, &x)| plus(&acc, &eval(&l.mode(i).unwrap(), x)))
        }
    }
}

pub fn tabulate(l: &Layout) -> Result<FunctionTable> {
    tabulate_bounded(l, DEFAULT_BOUND)
}

pub fn tabulate_bounded(l: &Layout, bound: i64) -> Result<FunctionTable> {
    let size = l.shape().try_size()?;
    if size > bound {
        return Err(Error::TooLarge { size, bound });
    }
    Ok(FunctionTable { values: (0..size).map(|i| eval(l, i)).collect() })
}

fn ints(l: &Layout) -> Vec<i64> {
    (0..l.size()).map(|i| int_of(&eval(l, i)).expect("integer-valued layout")).collect()
}

/// Does `L` take distinct values on its domain?
pub fn is_injective_layout(l: &Layout) -> bool {
    is_injective(&(0..l.size()).map(|i| eval(l, i)).collect::<Vec<_>>())
}

fn is_injective<T: Ord + Clone>(v: &[T]) -> bool {
    let mut s = v.to_vec();
    s.sort();
    s.windows(2).all(|w| w[0] != w[1])
}

/// `A ∘ B` pointwise, evaluating `A` on its extended domain past its table.
pub fn oracle_compose(a: &FunctionTable, b: &FunctionTable, a_layout: &Layout) -> FunctionTable {
    let values = b
        .values
        .iter()
        .map(|v| match v {
            StrideElem::Coord(c) => eval_modes_padded(a_layout, c),
            _ => {
                let x = int_of(v).expect("integer-valued right operand");
                match usize::try_from(x).ok().and_then(|x| a.values.get(x)) {
                    Some(y) => y.clone(),
                    None => eval(a_layout, x),
                }
            }
        })
        .collect();
    FunctionTable { values }
}

/// `A` at a coordinate vector, missing axes being zero.
fn eval_modes_padded(a: &Layout, c: &[i64]) -> StrideElem {
    let r = if a.shape().is_leaf() { 1 } else { a.rank() };
    assert!(c.len() <= r, "coordinate {c:?} has more axes than {a}");
    let mut v = c.to_vec();
    v.resize(r, 0);
    eval_modes(a, &v)
}

/// Is `C` a complement of `L` with respect to `m`?
///
/// `C` must be strictly increasing on its domain, its extended image (past
/// zero) must miss `image(L)` up to `4m`, and `(L, C)` must reach `m`.
pub fn complement_check(l: &Layout, c: &Layout, m: i64) -> bool {
    let (li, ci) = (ints(l), ints(c));
    if ci.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    let mut image = li.clone();
    image.sort();
    let extensible = c.stride().flatten().last().is_some_and(|d| !d.is_zero());
    let bound = 4 * m.max(1);
    let mut j = 1i64;
    loop {
        if j >= c.size() && !extensible {
            break;
        }
        let v = int_of(&eval(c, j)).unwrap();
        if v > bound || j > bound + c.size() {
            break;
        }
        if image.binary_search(&v).is_ok() {
            return false;
        }
        j += 1;
    }
    let reach = extensible && int_of(&eval(c, c.size())).unwrap() >= m;
    reach || l.size() * c.size() >= m
}

/// Integer layout on the same domain as `l` keeping only axis `axis`.
fn project(l: &Layout, axis: usize) -> Layout {
    let d = l.stride().map(&mut |d| StrideElem::Int(d.as_coord().and_then(|v| v.get(axis).copied()).unwrap_or(0)));
    Layout::new(l.shape().clone(), d).unwrap()
}

/// Per-axis complement check for coordinate layouts: `c` has one mode per axis.
pub fn coord_complement_check(l: &Layout, c: &Layout, m: &[i64]) -> bool {
    let axes = m.len();
    if axes == 0 {
        return false;
    }
    let parts: Vec<Layout> = match c.shape() {
        Tuple::List(ms) if ms.len() == axes => c.modes(),
        _ if axes == 1 => vec![c.clone()],
        _ => return false,
    };
    parts.iter().enumerate().all(|(a, ca)| complement_check(&project(l, a), &project(ca, a), m[a]))
}

/// The value `R` should reproduce at index `k` for a coordinate-codomain `L`.
fn axis_target(r: &Layout, axes: usize, k: i64) -> StrideElem {
    if axes <= 1 {
        return StrideElem::coord(vec![k]);
    }
    let mut v = Vec::with_capacity(axes);
    let mut rest = k;
    for a in 0..axes {
        let n = r.mode(a).unwrap().size();
        if a + 1 == axes {
            v.push(rest);
        } else {
            v.push(rest % n);
            rest /= n;
        }
    }
    StrideElem::coord(v)
}

/// `R` is a right inverse of `L`: `L(R(k)) = k` with `R(k)` inside `L`'s domain.
///
/// When `L` is injective with integer strides, `R` must also be maximal:
/// `|R|` itself is not an offset of `L`.
pub fn right_inverse_check(l: &Layout, r: &Layout) -> bool {
    let axes = l.coord_axes();
    let coord = l.stride().leaves().iter().any(|d| matches!(d, StrideElem::Coord(_)));
    let mut seen = Vec::new();
    for k in 0..r.size() {
        let Some(j) = index_of(&eval(r, k)) else { return false };
        if !(0..l.size()).contains(&j) {
            return false;
        }
        let got = eval(l, j);
        let ok = if coord {
            got == axis_target(r, axes, k)
        } else {
            match got {
                StrideElem::Xor(x) => x == k as u64,
                ref v => int_of(v) == Some(k),
            }
        };
        if !ok {
            return false;
        }
        seen.push(j);
    }
    if !is_injective(&seen) {
        return false;
    }
    if l.stride().leaves().iter().all(|d| matches!(d, StrideElem::Int(_))) {
        let li = ints(l);
        if is_injective(&li) && li.contains(&r.size()) {
            return false;
        }
    }
    true
}

/// `R` evaluated at the offset `v` produced by `L`.
fn eval_at_offset(r: &Layout, v: &StrideElem) -> Option<i64> {
    let out = match v {
        StrideElem::Coord(c) => {
            let axes = if r.shape().is_leaf() { 1 } else { r.rank() };
            if c.len() > axes {
                return None;
            }
            if axes == 1 && r.rank() > 1 {
                eval(r, c.first().copied().unwrap_or(0))
            } else {
                eval_modes_padded(r, c)
            }
        }
        StrideElem::Xor(x) => eval(r, *x as i64),
        StrideElem::Int(x) => eval(r, *x),
    };
    index_of(&out)
}

/// `R` is a left inverse of `L`: `R(L(k)) = k` when `L` is injective, and
/// `L∘R∘L = L` otherwise.
pub fn left_inverse_check(l: &Layout, r: &Layout) -> bool {
    let table: Vec<StrideElem> = (0..l.size()).map(|k| eval(l, k)).collect();
    let injective = is_injective(&table);
    for (k, v) in table.iter().enumerate() {
        if let Some(x) = index_of(v) {
            if x >= r.size() && r.size() > 1 {
                return false;
            }
        }
        let Some(j) = eval_at_offset(r, v) else { return false };
        if injective {
            if j != k as i64 {
                return false;
            }
        } else if eval(l, j) != *v {
            return false;
        }
    }
    true
}

/// `R = A ⊘ B`: mode 0 of `R` is `A∘B` and `R` permutes the offsets of `A`.
pub fn divide_check(a: &Layout, b: &Layout, r: &Layout) -> bool {
    if r.shape().is_leaf() || r.rank() != 2 {
        return false;
    }
    let ta = FunctionTable { values: (0..a.size()).map(|i| eval(a, i)).collect() };
    let tb = FunctionTable { values: (0..b.size()).map(|i| eval(b, i)).collect() };
    let expect = oracle_compose(&ta, &tb, a);
    let r0 = r.mode(0).unwrap();
    if r0.size() != b.size() || (0..r0.size()).any(|i| eval(&r0, i) != expect.values[i as usize]) {
        return false;
    }
    let mut x: Vec<StrideElem> = (0..r.size()).map(|i| eval(r, i)).collect();
    let mut y = ta.values;
    x.sort();
    y.sort();
    x == y
}

/// `R = A ⊗ B`: mode 0 is `A`, mode 1 places copies of `A` at offsets that are
/// an order-preserving, well-defined image of `B`'s offsets and avoid `image(A)`.
pub fn product_check(a: &Layout, b: &Layout, r: &Layout) -> bool {
    if r.shape().is_leaf() || r.rank() != 2 {
        return false;
    }
    let (r0, r1) = (r.mode(0).unwrap(), r.mode(1).unwrap());
    if r0.size() != a.size() || r1.size() != b.size() {
        return false;
    }
    let ai = ints(a);
    if (0..a.size()).any(|i| int_of(&eval(&r0, i)) != Some(ai[i as usize])) {
        return false;
    }
    let mut pairs = Vec::new();
    for j in 0..b.size() {
        let base = int_of(&eval_modes(r, &[0, j])).unwrap();
        for i in 0..a.size() {
            if int_of(&eval_modes(r, &[i, j])) != Some(ai[i as usize] + base) {
                return false;
            }
        }
        if base != 0 && ai.contains(&base) {
            return false;
        }
        pairs.push((int_of(&eval(b, j)).unwrap(), base));
    }
    pairs.sort();
    pairs.dedup();
    pairs.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1)
}

/// `C` is a coalesced form of `L`: same function, depth ≤ 1, no unit modes
/// and no adjacent pair that could merge.
pub fn coalesce_check(l: &Layout, c: &Layout) -> bool {
    if c.size() != l.size() || (0..l.size()).any(|i| eval(l, i) != eval(c, i)) {
        return false;
    }
    let modes: Vec<(i64, StrideElem)> = c.shape().flatten().into_iter().zip(c.stride().flatten()).collect();
    if c.shape().depth() > 1 {
        return false;
    }
    if modes.len() > 1 && modes.iter().any(|m| m.0 == 1) {
        return false;
    }
    modes.windows(2).all(|w| {
        let (s0, d0) = &w[0];
        let xor_blocked = matches!(d0, StrideElem::Xor(_)) && !(*s0 as u64).is_power_of_two();
        xor_blocked || times(*s0, d0) != w[1].1
    })
}

/// Is the pointwise composition `A(B(c))` a layout with `B`'s hierarchy?
///
/// It must be additive across the leaves of `B`, and on each leaf it must be a
/// flat layout over some ordered factorization of the leaf's extent.
pub fn compose_representable(a: &Layout, b: &Layout) -> bool {
    let leaves = b.shape().flatten();
    let tb: Vec<StrideElem> = (0..b.size()).map(|i| eval(b, i)).collect();
    let apply = |v: &StrideElem| match v {
        StrideElem::Coord(c) => {
            let r = if a.shape().is_leaf() { 1 } else { a.rank() };
            (c.len() <= r).then(|| eval_modes_padded(a, c))
        }
        StrideElem::Xor(_) => None,
        _ => Some(eval(a, int_of(v).unwrap())),
    };
    let Some(r): Option<Vec<StrideElem>> = tb.iter().map(apply).collect() else { return false };
    let mut pre = vec![1i64];
    for s in &leaves {
        pre.push(pre.last().unwrap() * s);
    }
    // additivity across leaves
    for (i, v) in r.iter().enumerate() {
        let mut acc = StrideElem::Int(0);
        let mut rest = i as i64;
        for (j, s) in leaves.iter().enumerate() {
            let c = rest % s;
            rest /= s;
            acc = plus(&acc, &r[(c * pre[j]) as usize]);
        }
        if acc != *v {
            return false;
        }
    }
    leaves.iter().enumerate().all(|(j, &s)| {
        let g: Vec<StrideElem> = (0..s).map(|x| r[(x * pre[j]) as usize].clone()).collect();
        flat_representable(&g)
    })
}

/// Does `g(x) = Σ digit_k(x)·d_k` for some factorization of `g.len()`?
fn flat_representable(g: &[StrideElem]) -> bool {
    let n = g.len();
    if n <= 1 {
        return true;
    }
    (2..=n).filter(|f| n % f == 0).any(|f| {
        let d = &g[1];
        (0..f).all(|x| g[x] == times(x as i64, d))
            && (0..n / f).all(|y| (0..f).all(|x| g[x + f * y] == plus(&g[x], &g[f * y])))
            && flat_representable(&(0..n / f).map(|y| g[f * y].clone()).collect::<Vec<_>>())
    })
}

// ---------------------------------------------------------------------------
// random generators

/// Random hierarchy over the given leaves (depth ≤ 3).
pub fn random_nesting<T: Clone, R: Rng>(rng: &mut R, leaves: &[T], depth: usize) -> Tuple<T> {
    if leaves.len() == 1 && (depth == 0 || rng.gen_bool(0.7)) {
        return Tuple::Leaf(leaves[0].clone());
    }
    if depth == 0 {
        return Tuple::List(leaves.iter().cloned().map(Tuple::Leaf).collect());
    }
    let mut cuts: Vec<usize> = (1..leaves.len()).filter(|_| rng.gen_bool(0.5)).collect();
    cuts.insert(0, 0);
    cuts.push(leaves.len());
    Tuple::List(cuts.windows(2).map(|w| random_nesting(rng, &leaves[w[0]..w[1]], depth - 1)).collect())
}

fn layout_from<R: Rng>(rng: &mut R, modes: &[(i64, i64)]) -> Layout {
    let t = random_nesting(rng, modes, 2);
    let shape = t.map(&mut |m| m.0);
    let stride = t.map(&mut |m| StrideElem::Int(m.1));
    Layout::new(shape, stride).unwrap()
}

/// Random flat extents in `1..=6` with product at most `max_size`.
pub fn random_extents<R: Rng>(rng: &mut R, max_size: i64) -> Vec<i64> {
    let n = rng.gen_range(1..=5);
    let mut out = Vec::new();
    let mut size = 1;
    for _ in 0..n {
        let s = rng.gen_range(1..=6);
        if size * s > max_size {
            break;
        }
        size *= s;
        out.push(s);
    }
    if out.is_empty() {
        out.push(1);
    }
    out
}

/// Leaves in `1..=6`, depth ≤ 3, strides in `0..=12`.
pub fn random_layout<R: Rng>(rng: &mut R, max_size: i64) -> Layout {
    let modes: Vec<(i64, i64)> =
        random_extents(rng, max_size).into_iter().map(|s| (s, rng.gen_range(0..=12))).collect();
    layout_from(rng, &modes)
}

/// Injective layout whose sorted modes leave (possibly uneven) gaps.
pub fn random_complementable<R: Rng>(rng: &mut R, max_size: i64) -> Layout {
    let ext = random_extents(rng, max_size);
    let mut modes = Vec::with_capacity(ext.len());
    let mut d = rng.gen_range(1..=3);
    for &s in &ext {
        modes.push((s, d));
        let gap = *[1, 1, 1, 2, 3].choose(rng).unwrap();
        let skew = if rng.gen_bool(0.2) { rng.gen_range(0..=2) } else { 0 };
        d = s * d * gap + skew;
    }
    modes.shuffle(rng);
    layout_from(rng, &modes)
}

/// A bijection onto `[0, size)`: compact strides in a random order.
pub fn random_permutation_layout<R: Rng>(rng: &mut R, max_size: i64) -> Layout {
    let ext = random_extents(rng, max_size);
    let mut modes = Vec::with_capacity(ext.len());
    let mut d = 1;
    for &s in &ext {
        modes.push((s, d));
        d *= s;
    }
    modes.shuffle(rng);
    layout_from(rng, &modes)
}

fn prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    out
}

/// A right operand built from runs of prime factors of `a`'s extents, so its
/// strides and extents line up with `a`'s modes. Sometimes ends in a broadcast.
pub fn random_factor_operand<R: Rng>(rng: &mut R, a: &Layout) -> Layout {
    factor_runs(rng, a, true)
}

/// Like [`random_factor_operand`] but always injective, as a divide tiler.
pub fn random_tile_operand<R: Rng>(rng: &mut R, a: &Layout) -> Layout {
    factor_runs(rng, a, false)
}

fn factor_runs<R: Rng>(rng: &mut R, a: &Layout, broadcast: bool) -> Layout {
    let factors: Vec<i64> = a.shape().flatten().into_iter().flat_map(prime_factors).collect();
    if factors.is_empty() {
        return layout_from(rng, &[(1, 0)]);
    }
    let mut runs = Vec::new();
    let mut pos = 1i64;
    let mut i = 0;
    while i < factors.len() {
        let len = rng.gen_range(1..=(factors.len() - i).min(3));
        let ext: i64 = factors[i..i + len].iter().product();
        if rng.gen_bool(0.75) {
            runs.push((ext, pos));
        }
        pos *= ext;
        i += len;
    }
    if runs.is_empty() {
        runs.push((factors[0], 1));
    }
    if broadcast && rng.gen_bool(0.1) {
        runs.push((rng.gen_range(2..=3), 0));
    }
    runs.shuffle(rng);
    layout_from(rng, &runs)
}
