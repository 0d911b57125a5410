//! The layout operator algebra.
//!
//! All operators are pure functions of their inputs. Integer and coordinate
//! strides are supported throughout; XOR strides are supported by coalesce,
//! composition (when every step is a power of two) and the two inverses.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::inttuple::{exclusive_prefix_product, Tuple};
use crate::layout::{coalesce_modes, Layout, Mode, Tiler};
use crate::stride::{clmul, Kind, StrideElem, ZERO};

// ---------------------------------------------------------------------------
// composition

/// How a single right-hand mode landed on the modes of the left operand.
struct Piece {
    modes: Vec<Mode>,
    /// `(mode of A, largest digit written, digit step)` per touched mode.
    digits: Vec<(usize, i64, i64)>,
}

/// `A ∘ B`: for every coordinate `c` of `B`, `R(c) = A(B(c))`.
///
/// The result keeps the hierarchy of `B`; each leaf of `B` may expand into a
/// tuple of modes.
pub fn compose(a: &Layout, b: &Layout) -> Result<Layout> {
    a.check_non_negative()?;
    b.check_non_negative()?;
    match b.kind() {
        Some(Kind::Xor) => Err(Error::Kind(format!("right operand {b} has xor strides"))),
        Some(Kind::Coord) => compose_coord(a, b),
        _ => {
            let leaves: Vec<(i64, i64)> =
                b.flat_modes().into_iter().map(|(s, d)| (s, d.as_int().unwrap())).collect();
            let pieces = compose_leaves(a, &leaves)?;
            assemble(b, pieces)
        }
    }
}

/// Coordinate-stride right operand: a leaf `s:k·e_i` selects from mode `i` of `A`.
fn compose_coord(a: &Layout, b: &Layout) -> Result<Layout> {
    let flat = b.flat_modes();
    let mut slots: Vec<Option<Piece>> = (0..flat.len()).map(|_| None).collect();
    let mut by_axis: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (j, (s, d)) in flat.iter().enumerate() {
        if d.is_zero() || *s == 1 {
            let modes = if *s == 1 { vec![] } else { vec![(*s, ZERO)] };
            slots[j] = Some(Piece { modes, digits: vec![] });
            continue;
        }
        let (_, axis) = d
            .as_scaled_basis()
            .ok_or_else(|| Error::Kind(format!("stride {d} is not a single scaled basis element")))?;
        if axis >= a.rank() {
            return Err(Error::Kind(format!("stride {d} addresses a mode that {a} does not have")));
        }
        by_axis.entry(axis).or_default().push(j);
    }
    for (axis, js) in by_axis {
        let sub = a.mode(axis)?;
        let leaves: Vec<(i64, i64)> =
            js.iter().map(|&j| (flat[j].0, flat[j].1.as_scaled_basis().unwrap().0)).collect();
        let pieces = compose_leaves(&sub, &leaves).map_err(|e| e.in_mode(axis))?;
        for (j, p) in js.into_iter().zip(pieces) {
            slots[j] = Some(p);
        }
    }
    assemble(b, slots.into_iter().map(Option::unwrap).collect())
}

/// Replace every leaf of `b` by the modes it composed to.
fn assemble(b: &Layout, pieces: Vec<Piece>) -> Result<Layout> {
    let parts: Vec<Layout> = pieces
        .into_iter()
        .map(|p| Layout::from_modes(p.modes.into_iter().filter(|(s, _)| *s != 1).collect()))
        .collect();
    let mut it = parts.into_iter();
    let tree = b.shape().map(&mut |_| it.next().unwrap());
    let shape = tree.map(&mut |l| l.shape().clone());
    let stride = tree.map(&mut |l| l.stride().clone());
    Layout::new(flatten_nested(shape), flatten_nested(stride))
}

/// `Tuple<Tuple<T>>` → `Tuple<T>` by splicing inner tuples in place of leaves.
fn flatten_nested<T>(t: Tuple<Tuple<T>>) -> Tuple<T> {
    match t {
        Tuple::Leaf(inner) => inner,
        Tuple::List(c) => Tuple::List(c.into_iter().map(flatten_nested).collect()),
    }
}

/// Compose `a` with each `s:d` leaf, then check the leaves add without carries.
fn compose_leaves(a: &Layout, leaves: &[(i64, i64)]) -> Result<Vec<Piece>> {
    let am = coalesce_modes(&a.flat_modes(), true);
    let pieces = leaves
        .iter()
        .map(|&(s, d)| compose_base(&am, s, d))
        .collect::<Result<Vec<_>>>()?;
    check_distributive(&am, &pieces, a)?;
    Ok(pieces)
}

/// Base case: a flat (coalesced) `A` composed with a single mode `s:d`.
fn compose_base(am: &[Mode], s: i64, d: i64) -> Result<Piece> {
    if s == 1 {
        return Ok(Piece { modes: vec![], digits: vec![] });
    }
    if d == 0 {
        return Ok(Piece { modes: vec![(s, ZERO)], digits: vec![] });
    }
    let shapes: Vec<i64> = am.iter().map(|m| m.0).collect();
    let pre = exclusive_prefix_product(&shapes);
    let reach = (s - 1).checked_mul(d).ok_or(Error::Overflow("composition"))?;
    // modes past the reach of s:d are never touched; the last kept one is extended
    let last = (0..am.len()).rev().find(|&r| r == 0 || pre[r] <= reach).unwrap();
    let mut modes = Vec::new();
    let mut digits = Vec::new();
    for r in 0..=last {
        let p = pre[r];
        if d % p != 0 && p % d != 0 {
            return Err(Error::StrideIndivisible(format!(
                "stride {d} and prefix product {p} of mode {r} do not divide one another"
            )));
        }
        let step = (d + p - 1) / p;
        let rho = (p + d - 1) / d;
        if s % rho != 0 {
            return Err(Error::ShapeIndivisible(format!(
                "shape {s} is not a multiple of {rho} (prefix product {p} of mode {r} over stride {d})"
            )));
        }
        let ext = if r < last { (am[r].0 + step - 1) / step } else { s / rho };
        modes.push((ext, am[r].1.compose_scale(step)?));
        digits.push((r, (ext - 1) * step, step));
    }
    Ok(Piece { modes, digits })
}

/// The leaves of `B` may be composed one by one only if the colex digits they
/// write into each bounded mode of `A` never carry (nor, for xor strides, overlap).
fn check_distributive(am: &[Mode], pieces: &[Piece], a: &Layout) -> Result<()> {
    let xor = a.kind() == Some(Kind::Xor);
    let n = am.len();
    for (m, mode) in am.iter().enumerate() {
        let bounded = m + 1 < n;
        if !bounded && !xor {
            continue;
        }
        let mut contrib: Vec<(i64, i64)> = pieces
            .iter()
            .flat_map(|p| p.digits.iter())
            .filter(|(r, hi, _)| *r == m && *hi > 0)
            .map(|&(_, hi, step)| (step, hi))
            .collect();
        let total: i64 = contrib.iter().map(|c| c.1).sum();
        if bounded && total >= mode.0 {
            return Err(Error::NonDistributive(format!(
                "modes of the right operand overflow mode {m} (extent {}) of {a}",
                mode.0
            )));
        }
        if xor {
            contrib.sort();
            let mut below = 0i64;
            for (step, hi) in contrib {
                if below >= step {
                    return Err(Error::NonDistributive(format!(
                        "modes of the right operand overlap in the bits of mode {m} of {a}"
                    )));
                }
                below += hi;
            }
        }
    }
    Ok(())
}

/// By-mode composition: tile `i` composes with mode `i`; further modes are kept.
pub fn compose_by_mode(a: &Layout, t: &Tiler) -> Result<Layout> {
    compose_tiler(a, &t.0)
}

fn compose_tiler(a: &Layout, t: &Tuple<Layout>) -> Result<Layout> {
    match t {
        Tuple::Leaf(b) => compose(a, b),
        Tuple::List(ts) => {
            if ts.len() > a.rank() || a.shape().is_leaf() && ts.len() > 1 {
                return Err(Error::Structure(format!("tiler of rank {} exceeds {a}", ts.len())));
            }
            if a.shape().is_leaf() {
                return compose_tiler(a, &ts[0]);
            }
            let parts = a
                .modes()
                .into_iter()
                .enumerate()
                .map(|(i, m)| match ts.get(i) {
                    Some(ti) => compose_tiler(&m, ti).map_err(|e| e.in_mode(i)),
                    None => Ok(m),
                })
                .collect::<Result<Vec<_>>>()?;
            Layout::concat(&parts)
        }
    }
}

// ---------------------------------------------------------------------------
// complement

/// How interior gaps between sorted modes are sized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GapRule {
    /// `⌊d_i / (s_{i-1}·d_{i-1})⌋`; codomain values in the remainder are skipped.
    #[default]
    Floor,
    /// Gaps must divide exactly, otherwise the layout is not complementable.
    Exact,
}

/// The complement with respect to `cosize(l)` (per axis for coordinate layouts).
pub fn complement(l: &Layout) -> Result<Layout> {
    complement_with(l, None, GapRule::Floor)
}

/// The complement with respect to an integer target `m`.
pub fn complement_to(l: &Layout, m: i64) -> Result<Layout> {
    complement_with(l, Some(&Tuple::Leaf(m)), GapRule::Floor)
}

/// General complement. For coordinate layouts, `target` lists one bound per
/// axis and each axis is complemented on its own into one top-level mode.
pub fn complement_with(l: &Layout, target: Option<&Tuple<i64>>, rule: GapRule) -> Result<Layout> {
    l.check_non_negative()?;
    match l.kind() {
        Some(Kind::Xor) => Err(Error::Unsupported(format!("complement of xor layout {l}"))),
        Some(Kind::Coord) => {
            let axes = l.coord_axes();
            let bounds = match target {
                None => l.coord_cosize()?,
                Some(t) if t.rank() == axes || t.is_leaf() && axes == 1 => t.flatten(),
                Some(t) => {
                    return Err(Error::Structure(format!("target {t} needs one bound per axis of {l}")))
                }
            };
            let mut parts = Vec::with_capacity(axes);
            for (axis, &bound) in bounds.iter().enumerate() {
                let modes = axis_modes(l, axis)?;
                let c = complement_modes(&modes, bound, rule)?;
                let scaled: Vec<Mode> =
                    c.into_iter().map(|(s, d)| (s, StrideElem::scaled_basis(d, axis))).collect();
                parts.push(Layout::from_modes(scaled));
            }
            if parts.len() == 1 {
                Ok(parts.pop().unwrap())
            } else {
                Layout::concat(&parts)
            }
        }
        _ => {
            let m = match target {
                None => l.cosize()?,
                Some(Tuple::Leaf(m)) => *m,
                Some(t) => return Err(Error::Structure(format!("integer layout {l} takes a single target, got {t}"))),
            };
            let modes: Vec<(i64, i64)> = l.flat_modes().into_iter().map(|(s, d)| (s, d.as_int().unwrap())).collect();
            let c = complement_modes(&modes, m, rule)?;
            Ok(Layout::from_modes(c.into_iter().map(|(s, d)| (s, StrideElem::Int(d))).collect()))
        }
    }
}

/// `(extent, scale)` of the modes whose stride is a multiple of `e_axis`.
fn axis_modes(l: &Layout, axis: usize) -> Result<Vec<(i64, i64)>> {
    let mut out = Vec::new();
    for (s, d) in l.flat_modes() {
        if d.is_zero() {
            continue;
        }
        let (k, i) = d
            .as_scaled_basis()
            .ok_or_else(|| Error::Unsupported(format!("stride {d} spans several axes")))?;
        if i == axis {
            out.push((s, k));
        }
    }
    Ok(out)
}

fn complement_modes(modes: &[(i64, i64)], m: i64, rule: GapRule) -> Result<Vec<(i64, i64)>> {
    if m < 1 {
        return Err(Error::Contract(format!("complement target {m} must be positive")));
    }
    let mut live: Vec<(i64, i64)> = modes.iter().copied().filter(|&(s, d)| s > 1 && d != 0).collect();
    live.sort_by_key(|&(s, d)| (d, s));
    if live.windows(2).any(|w| w[0].1 == w[1].1) {
        return Err(Error::NotComplementable("two modes share a stride".into()));
    }
    let mut out = Vec::new();
    let mut p = 1i64;
    for (s, d) in live {
        if rule == GapRule::Exact && d % p != 0 {
            return Err(Error::NotComplementable(format!("stride {d} is not a multiple of {p}")));
        }
        let gap = d / p;
        if gap < 1 {
            return Err(Error::NotComplementable(format!("stride {d} falls inside the span {p} of smaller modes")));
        }
        if gap > 1 {
            out.push((gap, p));
        }
        p = s.checked_mul(d).ok_or(Error::Overflow("complement"))?;
    }
    out.push(((m + p - 1) / p, p));
    Ok(out)
}

// ---------------------------------------------------------------------------
// inverses

/// Coalesced nonzero modes with their colex position strides, sorted by stride.
fn sorted_positions(l: &Layout) -> Vec<(i64, i64, i64)> {
    let c = l.coalesce();
    let modes = c.flat_modes();
    let pos = exclusive_prefix_product(&modes.iter().map(|m| m.0).collect::<Vec<_>>());
    let mut v: Vec<(i64, i64, i64)> = modes
        .iter()
        .zip(pos)
        .filter(|((_, d), _)| !d.is_zero())
        .map(|((s, d), p)| (*s, d.as_int().unwrap(), p))
        .collect();
    v.sort_by_key(|&(s, d, _)| (d, s));
    v
}

/// Per-axis view of a coordinate layout, as an integer layout on the same domain.
fn axis_projection(l: &Layout, axis: usize) -> Result<Layout> {
    let stride = l.stride().try_map(&mut |d| {
        if d.is_zero() {
            return Ok(ZERO);
        }
        let (k, i) = d
            .as_scaled_basis()
            .ok_or_else(|| Error::Unsupported(format!("stride {d} spans several axes")))?;
        Ok(StrideElem::Int(if i == axis { k } else { 0 }))
    })?;
    Layout::new(l.shape().clone(), stride)
}

fn per_axis(l: &Layout, f: fn(&Layout) -> Result<Layout>) -> Result<Layout> {
    let parts = (0..l.coord_axes())
        .map(|a| f(&axis_projection(l, a)?))
        .collect::<Result<Vec<_>>>()?;
    if parts.len() == 1 {
        Ok(parts.into_iter().next().unwrap())
    } else {
        Layout::concat(&parts)
    }
}

/// The largest `R` with `L(R(k)) = k` for every `k < size(R)`.
///
/// For coordinate layouts the result has one top-level mode per codomain axis.
pub fn right_inverse(l: &Layout) -> Result<Layout> {
    l.check_non_negative()?;
    match l.kind() {
        Some(Kind::Coord) => per_axis(l, right_inverse_int),
        Some(Kind::Xor) => xor_inverse(l, false),
        _ => right_inverse_int(l),
    }
}

fn right_inverse_int(l: &Layout) -> Result<Layout> {
    let mut out = Vec::new();
    let mut next = 1i64;
    for (s, d, p) in sorted_positions(l) {
        if d != next {
            break;
        }
        out.push((s, StrideElem::Int(p)));
        next = s * d;
    }
    Ok(Layout::from_modes(out).coalesce())
}

/// A layout `R` with `R(L(k)) = k` for every `k < size(L)`, defined on all of
/// `[0, cosize(L))`. Offsets outside the image of `L` map arbitrarily.
pub fn left_inverse(l: &Layout) -> Result<Layout> {
    l.check_non_negative()?;
    match l.kind() {
        Some(Kind::Coord) => per_axis(l, left_inverse_int),
        Some(Kind::Xor) => xor_inverse(l, true),
        _ => left_inverse_int(l),
    }
}

fn left_inverse_int(l: &Layout) -> Result<Layout> {
    match nested_left_inverse(l) {
        Err(Error::NotLeftInvertible(why)) => radix_left_inverse(l).ok_or(Error::NotLeftInvertible(why)),
        r => r,
    }
}

/// Work allowed to [`radix_search`], in visited offset/target pairs.
const RADIX_BUDGET: i64 = 1 << 18;

/// Fallback for strides that do not nest: search mixed radices of the offset
/// so that `R(v) = Σ digit_t(v)·r_t` hits the first index producing each `v`.
fn radix_left_inverse(l: &Layout) -> Option<Layout> {
    let size = l.size();
    if size > 1 << 14 {
        return None;
    }
    let mut first = BTreeMap::new();
    for k in 0..size {
        first.entry(l.eval_int(k).ok()?).or_insert(k);
    }
    let pairs: Vec<(i64, i64)> = first.into_iter().collect();
    let modes = radix_search(&pairs, &mut RADIX_BUDGET.clone(), &mut HashSet::new())?;
    let modes: Vec<Mode> = modes.into_iter().map(|(n, r)| (n, StrideElem::Int(r))).collect();
    Some(Layout::from_modes(modes).coalesce())
}

fn radix_search(
    pairs: &[(i64, i64)],
    budget: &mut i64,
    failed: &mut HashSet<Vec<(i64, i64)>>,
) -> Option<Vec<(i64, i64)>> {
    *budget -= pairs.len() as i64;
    if *budget < 0 || failed.contains(pairs) {
        return None;
    }
    let maxv = pairs.iter().map(|p| p.0).max().unwrap_or(0);
    // a single mode covering everything that is left
    let r = pairs.iter().find(|p| p.0 > 0).map_or(Some(0), |&(v, t)| (t % v == 0).then_some(t / v));
    if let Some(r) = r.filter(|&r| r >= 0 && pairs.iter().all(|&(v, t)| t == r * v)) {
        return Some(vec![(maxv + 1, r)]);
    }
    for n in 2..=maxv {
        // the low digit's stride, pinned by any low offset or by two offsets sharing a high digit
        let mut r0 = pairs.iter().find(|p| p.0 < n && p.0 > 0).map(|&(v, t)| (t, v));
        if r0.is_none() {
            let mut seen = BTreeMap::new();
            for &(v, t) in pairs {
                if let Some(&(a, u)) = seen.get(&(v / n)) {
                    if a != v % n {
                        r0 = Some((t - u, v % n - a));
                        break;
                    }
                }
                seen.insert(v / n, (v % n, t));
            }
        }
        // an unpinned stride can be anything keeping every remainder non-negative
        let candidates = match r0 {
            None => 0..=pairs.iter().filter(|p| p.0 % n > 0).map(|&(v, t)| t / (v % n)).min().unwrap_or(0),
            Some((dt, da)) if dt % da == 0 && dt / da >= 0 => dt / da..=dt / da,
            _ => continue,
        };
        'stride: for r0 in candidates {
            let mut next = BTreeMap::new();
            for &(v, t) in pairs {
                let rest = t - r0 * (v % n);
                if rest < 0 || (v < n && rest != 0) || *next.entry(v / n).or_insert(rest) != rest {
                    continue 'stride;
                }
            }
            let next: Vec<(i64, i64)> = next.into_iter().collect();
            if let Some(mut tail) = radix_search(&next, budget, failed) {
                tail.insert(0, (n, r0));
                return Some(tail);
            }
            if *budget < 0 {
                return None;
            }
        }
    }
    failed.insert(pairs.to_vec());
    None
}

fn nested_left_inverse(l: &Layout) -> Result<Layout> {
    let modes = sorted_positions(l);
    if modes.windows(2).any(|w| w[0].1 == w[1].1) {
        return Err(Error::NotLeftInvertible(format!("two modes of {l} share a stride")));
    }
    let mut out = Vec::new();
    if let Some(&(_, d0, _)) = modes.first() {
        if d0 > 1 {
            out.push((d0, ZERO));
        }
    }
    for (i, &(s, d, p)) in modes.iter().enumerate() {
        let ext = match modes.get(i + 1) {
            None => s,
            Some(&(_, dn, _)) => {
                if dn % d != 0 || dn < s * d {
                    return Err(Error::NotLeftInvertible(format!(
                        "stride {dn} does not continue mode {s}:{d} of {l}"
                    )));
                }
                dn / d
            }
        };
        out.push((ext, StrideElem::Int(p)));
    }
    Ok(Layout::from_modes(out).coalesce())
}

/// Bit columns of an xor layout: the image of each domain bit.
fn xor_columns(l: &Layout) -> Result<Vec<u64>> {
    let modes = l.flatten().flat_modes();
    let n = modes.len();
    let mut cols = Vec::new();
    for (i, (s, d)) in modes.iter().enumerate() {
        let m = d.as_xor().unwrap();
        let pow2 = (*s as u64).is_power_of_two();
        if i + 1 < n && !pow2 {
            return Err(Error::Unsupported(format!("xor mode {s}:{d} must have a power-of-two extent")));
        }
        let bits = 64 - ((*s as u64) - 1).leading_zeros();
        for t in 0..bits {
            cols.push(clmul(1 << t, m).ok_or(Error::Overflow("xor inverse"))?);
        }
    }
    Ok(cols)
}

/// Solve `Σ x_j·cols[j] = y` over F2; returns the domain bits `x`.
fn f2_solve(cols: &[u64], y: u64) -> Option<u64> {
    // basis of (pivot-reduced column, combination of original columns)
    let mut basis: Vec<(u64, u64)> = Vec::new();
    for (j, &c) in cols.iter().enumerate() {
        let (mut v, mut comb) = (c, 1u64 << j);
        for &(b, bc) in &basis {
            if v ^ b < v {
                v ^= b;
                comb ^= bc;
            }
        }
        if v != 0 {
            basis.push((v, comb));
            basis.sort_by(|a, b| b.0.cmp(&a.0));
        }
    }
    let (mut v, mut comb) = (y, 0u64);
    for &(b, bc) in &basis {
        if v ^ b < v {
            v ^= b;
            comb ^= bc;
        }
    }
    (v == 0).then_some(comb)
}

/// For injective `cols`, images `pre[t]` of the output bits with
/// `Σ_t bit_t(cols[j])·pre[t] = e_j`: pick independent output rows and invert
/// that square block; every other output bit maps to zero.
fn f2_left_inverse(cols: &[u64], bits: usize) -> Vec<u64> {
    let n = cols.len();
    let row = |t: usize| (0..n).filter(|&j| (cols[j] >> t) & 1 == 1).fold(0u64, |r, j| r | 1 << j);
    // Gauss-Jordan on rows, tracking which output bits each reduced row combines
    let mut reduced: Vec<(u64, u64)> = Vec::new();
    let mut pivots = Vec::new();
    for t in 0..bits {
        let (mut r, mut comb) = (row(t), 1u64 << t);
        for &(b, bc) in &reduced {
            if r & (b & b.wrapping_neg()) != 0 {
                r ^= b;
                comb ^= bc;
            }
        }
        if r != 0 {
            let low = r & r.wrapping_neg();
            for e in reduced.iter_mut() {
                if e.0 & low != 0 {
                    e.0 ^= r;
                    e.1 ^= comb;
                }
            }
            reduced.push((r, comb));
            pivots.push(t);
        }
    }
    // after full reduction each row is a unit domain vector e_j, built from output rows `comb`
    let mut pre = vec![0u64; bits];
    for &(r, comb) in &reduced {
        if r.count_ones() != 1 {
            continue;
        }
        for t in 0..bits {
            if (comb >> t) & 1 == 1 {
                pre[t] ^= r;
            }
        }
    }
    pre
}

fn f2_rank(cols: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &c in cols {
        let v = basis.iter().fold(c, |v, &b| v.min(v ^ b));
        if v != 0 {
            basis.push(v);
            basis.sort_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Evaluate the F2-linear map given by bit columns.
fn f2_apply(cols: &[u64], x: u64) -> u64 {
    cols.iter().enumerate().filter(|(j, _)| (x >> j) & 1 == 1).fold(0, |acc, (_, &c)| acc ^ c)
}

/// Xor-stride inverses, built bit by bit and truncated to a valid size.
fn xor_inverse(l: &Layout, left: bool) -> Result<Layout> {
    let cols = xor_columns(l)?;
    let size = l.size();
    let image_bits = cols.iter().map(|c| 64 - c.leading_zeros()).max().unwrap_or(0) as usize;
    if left && f2_rank(&cols) < cols.len() {
        return Err(Error::NotLeftInvertible(format!("{l} is not injective")));
    }
    // preimage of each output bit; a left inverse reads only pivot bits
    let mut pre = Vec::new();
    if left {
        pre = f2_left_inverse(&cols, image_bits);
    } else {
        for t in 0..image_bits {
            match f2_solve(&cols, 1 << t) {
                Some(x) => pre.push(x),
                None => break,
            }
        }
    }
    let full = 1i64 << pre.len();
    let n = if left {
        let cosize = (0..size).map(|k| f2_apply(&cols, k as u64)).max().unwrap_or(0) as i64 + 1;
        if (0..size).any(|k| f2_apply(&pre, f2_apply(&cols, k as u64)) != k as u64) {
            return Err(Error::NotLeftInvertible(format!("{l} is not injective on its domain")));
        }
        cosize
    } else {
        (0..full).find(|&k| f2_apply(&pre, k as u64) >= size as u64).unwrap_or(full)
    };
    // merge bit modes into runs whose masks double, then cut the domain to n
    let mut runs: Vec<(i64, u64)> = Vec::new();
    for &p in &pre {
        match runs.last_mut() {
            Some((ext, m)) if clmul(*ext as u64, *m) == Some(p) => *ext *= 2,
            _ => runs.push((2, p)),
        }
    }
    let mut modes = Vec::new();
    let mut covered = 1i64;
    for (ext, m) in runs {
        if covered >= n {
            break;
        }
        let want = if left { (n + covered - 1) / covered } else { n / covered };
        let take = want.min(ext);
        modes.push((take, StrideElem::xor(m)));
        covered *= take;
        if take < ext {
            break;
        }
    }
    Ok(Layout::from_modes(modes).coalesce())
}

// ---------------------------------------------------------------------------
// divide and product

/// `A ⊘ B = A ∘ (B, B*)`, with the complement taken against `size(A)`.
pub fn logical_divide(a: &Layout, b: &Layout) -> Result<Layout> {
    logical_divide_with(a, b, GapRule::Floor)
}

pub fn logical_divide_with(a: &Layout, b: &Layout, rule: GapRule) -> Result<Layout> {
    let rest = complement_with(b, Some(&Tuple::Leaf(a.size())), rule)?.coalesce();
    compose(a, &Layout::concat(&[b.clone(), rest])?)
}

/// By-mode divide with tiles gathered in mode 0 and the rests in mode 1.
pub fn zipped_divide(a: &Layout, t: &Tiler) -> Result<Layout> {
    zipped_divide_with(a, t, GapRule::Floor)
}

pub fn zipped_divide_with(a: &Layout, t: &Tiler, rule: GapRule) -> Result<Layout> {
    match &t.0 {
        Tuple::Leaf(b) => logical_divide_with(a, b, rule),
        Tuple::List(ts) => {
            if ts.len() > a.rank() || a.shape().is_leaf() && ts.len() > 1 {
                return Err(Error::Structure(format!("tiler {t} exceeds the rank of {a}")));
            }
            let modes = if a.shape().is_leaf() { vec![a.clone()] } else { a.modes() };
            let mut tiles = Vec::new();
            let mut rests = Vec::new();
            for (i, m) in modes.into_iter().enumerate() {
                match ts.get(i) {
                    Some(ti) => {
                        let d = zipped_divide_with(&m, &Tiler(ti.clone()), rule).map_err(|e| e.in_mode(i))?;
                        tiles.push(d.mode(0)?);
                        rests.push(d.mode(1)?);
                    }
                    None => rests.push(m),
                }
            }
            Layout::concat(&[Layout::concat(&tiles)?, Layout::concat(&rests)?])
        }
    }
}

/// `A ⊗ B = (A, A* ∘ B)`, with the complement taken against `size(A)·cosize(B)`.
pub fn logical_product(a: &Layout, b: &Layout) -> Result<Layout> {
    logical_product_with(a, b, GapRule::Floor)
}

pub fn logical_product_with(a: &Layout, b: &Layout, rule: GapRule) -> Result<Layout> {
    let m = a.size().checked_mul(b.cosize()?).ok_or(Error::Overflow("product"))?;
    let rest = complement_with(a, Some(&Tuple::Leaf(m)), rule)?;
    Layout::concat(&[a.clone(), compose(&rest, b)?])
}

/// Logical product with modes zipped as `(A_i, (A*∘B)_i)`.
pub fn blocked_product(a: &Layout, b: &Layout) -> Result<Layout> {
    zip_product(a, b, false)
}

/// Logical product with modes zipped as `((A*∘B)_i, A_i)`.
pub fn raked_product(a: &Layout, b: &Layout) -> Result<Layout> {
    zip_product(a, b, true)
}

fn zip_product(a: &Layout, b: &Layout, reverse: bool) -> Result<Layout> {
    if a.rank() != b.rank() || a.shape().is_leaf() != b.shape().is_leaf() {
        return Err(Error::Structure(format!("{a} and {b} differ in rank")));
    }
    let p = logical_product(a, b)?;
    let grid = p.mode(1)?;
    if a.shape().is_leaf() {
        return if reverse { Layout::concat(&[grid, a.clone()]) } else { Ok(p) };
    }
    let parts = (0..a.rank())
        .map(|i| {
            let (x, y) = (a.mode(i)?, grid.mode(i)?);
            Layout::concat(&if reverse { [y, x] } else { [x, y] })
        })
        .collect::<Result<Vec<_>>>()?;
    Layout::concat(&parts)
}
