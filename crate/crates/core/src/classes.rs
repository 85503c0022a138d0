//! Isomorphism, isotopism and main class counts.
//!
//! Burnside's lemma averages fixed-point counts over a group. Fixed-point
//! counts only depend on conjugacy data, so the sums run over cycle
//! structures with one representative paratopism each. Classes without a
//! bound on the shape are found constructively instead.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::canon::{canonical_form, ColoredGraph};
use crate::dist::{BigCount, WeightDistribution};
use crate::error::{Error, Result};
use crate::oracle::count_fixed_by;
use crate::paratopism::{Isotopism, Paratopism};
use crate::perm::{factorial, CycleStructure, Permutation};
use crate::plr::{Entry, Plr, Shape};
use crate::sade;

/// Which coordinate permutation a fixed-point count is taken for.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DeltaKey {
    /// `((a, b, c), Id)` with the three cycle structures.
    Identity(CycleStructure, CycleStructure, CycleStructure),
    /// `((Id, b, c), (1 2))`; needs `r = s`.
    Swap(CycleStructure, CycleStructure),
    /// `((Id, Id, c), (1 2 3))`; needs `r = s = n`.
    ThreeCycle(CycleStructure),
}

impl DeltaKey {
    /// The representative paratopism for this key on `shape`.
    pub fn representative(&self, shape: Shape) -> Result<Paratopism> {
        let [r, s, n] = shape.dims();
        let check = |z: &CycleStructure, t: usize| {
            if z.degree() == t {
                Ok(z.representative())
            } else {
                Err(Error::ShapeMismatch(format!("cycle structure {z} does not act on {t} points")))
            }
        };
        let p = match self {
            DeltaKey::Identity(a, b, c) => {
                Paratopism::isotopism(Isotopism::new(check(a, r)?, check(b, s)?, check(c, n)?))
            }
            DeltaKey::Swap(b, c) => {
                if r != s {
                    return Err(Error::ShapeMismatch(format!("swapping rows and columns needs r = s, got {shape}")));
                }
                let theta = Isotopism::new(Permutation::identity(r), check(b, s)?, check(c, n)?);
                Paratopism::new(theta, Permutation::from_images(vec![1, 0, 2])?)?
            }
            DeltaKey::ThreeCycle(c) => {
                if r != s || s != n {
                    return Err(Error::ShapeMismatch(format!("a 3-cycle of roles needs r = s = n, got {shape}")));
                }
                let theta = Isotopism::new(Permutation::identity(r), Permutation::identity(s), check(c, n)?);
                Paratopism::new(theta, Permutation::from_images(vec![1, 2, 0])?)?
            }
        };
        Ok(p)
    }
}

/// Whether some entry can lie in a row cycle of length `i`, a column cycle
/// of length `j` and a symbol cycle of length `k` of an autotopism.
fn lengths_compatible(i: usize, j: usize, k: usize) -> bool {
    let ij = i.lcm(&j);
    let all = ij.lcm(&k);
    ij == all && i.lcm(&k) == all && j.lcm(&k) == all
}

/// Whether an isotopism with these cycle structures can fix a non-empty rectangle.
pub fn admits_nonempty(a: &CycleStructure, b: &CycleStructure, c: &CycleStructure) -> bool {
    a.lengths().any(|i| b.lengths().any(|j| c.lengths().any(|k| lengths_compatible(i, j, k))))
}

fn only_empty(shape: Shape) -> WeightDistribution {
    let mut d = WeightDistribution::zeros(shape);
    d.add_at(0, &BigCount::from(1u32));
    d
}

/// Weight distribution of the rectangles fixed by the representative of `key`.
pub fn delta(key: &DeltaKey, shape: Shape) -> Result<WeightDistribution> {
    let p = key.representative(shape)?;
    if let DeltaKey::Identity(a, b, c) = key {
        if !admits_nonempty(a, b, c) {
            return Ok(only_empty(shape));
        }
    }
    fixed_by(&p, shape)
}

/// `count_fixed_by`, except that the identity, which fixes everything, is
/// counted by Sade when the shape allows it.
fn fixed_by(p: &Paratopism, shape: Shape) -> Result<WeightDistribution> {
    if *p == Paratopism::identity(shape) && sade::check_shape(sade::orient_shape(shape)).is_ok() {
        return sade::sade_count(shape);
    }
    count_fixed_by(p, shape)
}

fn scaled(d: &WeightDistribution, k: &BigUint) -> Vec<BigUint> {
    d.counts().iter().map(|c| c * k).collect()
}

fn accumulate(acc: &mut [BigUint], add: &[BigUint]) {
    for (a, b) in acc.iter_mut().zip(add) {
        *a += b;
    }
}

fn divide(shape: Shape, acc: Vec<BigUint>, group: &BigUint) -> WeightDistribution {
    let counts = acc
        .into_iter()
        .map(|c| {
            let (q, rem) = c.div_rem(group);
            assert!(rem.is_zero(), "Burnside sum is not divisible by the group order");
            q
        })
        .collect();
    WeightDistribution::from_counts(shape, counts).expect("lengths match")
}

/// `sum over isotopisms of Fix`, grouped by the cycle structures of the components.
fn isotopism_fixed_sum(shape: Shape) -> Result<Vec<BigUint>> {
    let [r, s, n] = shape.dims();
    let mut acc = vec![BigUint::zero(); shape.cells() + 1];
    for a in CycleStructure::all(r) {
        for b in CycleStructure::all(s) {
            for c in CycleStructure::all(n) {
                let weight =
                    a.permutations_with_structure() * b.permutations_with_structure() * c.permutations_with_structure();
                let d = delta(&DeltaKey::Identity(a.clone(), b.clone(), c.clone()), shape)?;
                accumulate(&mut acc, &scaled(&d, &weight));
            }
        }
    }
    Ok(acc)
}

/// Number of isotopism classes of each weight.
pub fn isot_count(shape: Shape) -> Result<WeightDistribution> {
    let [r, s, n] = shape.dims();
    let acc = isotopism_fixed_sum(shape)?;
    Ok(divide(shape, acc, &(factorial(r) * factorial(s) * factorial(n))))
}

/// Number of isomorphism classes of partial Latin squares of order `n`,
/// under `alpha -> (alpha, alpha, alpha)`.
pub fn isom_count(n: usize) -> Result<WeightDistribution> {
    let shape = Shape::new(n, n, n)?;
    let mut acc = vec![BigUint::zero(); shape.cells() + 1];
    for z in CycleStructure::all(n) {
        let rep = z.representative();
        let p = Paratopism::isotopism(Isotopism::new(rep.clone(), rep.clone(), rep));
        let d = if admits_nonempty(&z, &z, &z) { fixed_by(&p, shape)? } else { only_empty(shape) };
        accumulate(&mut acc, &scaled(&d, &z.permutations_with_structure()));
    }
    Ok(divide(shape, acc, &factorial(n)))
}

/// The shape rearranged so that equal dimensions come first; main class
/// counts do not change under rearrangement.
pub fn main_class_shape(shape: Shape) -> Shape {
    let mut d = shape.dims();
    d.sort_unstable();
    if d[1] == d[2] && d[0] != d[1] {
        d = [d[1], d[2], d[0]];
    }
    Shape::from_dims(d).expect("positive dims")
}

/// Number of main classes of each weight.
pub fn mc_count(shape: Shape) -> Result<WeightDistribution> {
    let work = main_class_shape(shape);
    let [r, s, n] = work.dims();
    let mut acc = isotopism_fixed_sum(work)?;
    let mut group = factorial(r) * factorial(s) * factorial(n);
    if r == s {
        // Elements with a transposition of two equal roles: three of them
        // when all roles are equal, each conjugate to a (1 2) form.
        let transpositions = if s == n { 3u32 } else { 1 };
        for b in CycleStructure::all(s) {
            for c in CycleStructure::all(n) {
                let weight =
                    factorial(r) * b.permutations_with_structure() * c.permutations_with_structure() * transpositions;
                let d = delta(&DeltaKey::Swap(b.clone(), c.clone()), work)?;
                accumulate(&mut acc, &scaled(&d, &weight));
            }
        }
        if s == n {
            for c in CycleStructure::all(n) {
                let weight = factorial(r) * factorial(s) * c.permutations_with_structure() * 2u32;
                let d = delta(&DeltaKey::ThreeCycle(c.clone()), work)?;
                accumulate(&mut acc, &scaled(&d, &weight));
            }
            group *= 6u32;
        } else {
            group *= 2u32;
        }
    }
    let out = divide(work, acc, &group);
    out.with_shape(shape)
}

/// Burnside over every isotopism, without grouping by conjugacy.
pub fn isot_count_full_group(shape: Shape) -> Result<WeightDistribution> {
    let [r, s, n] = shape.dims();
    let mut acc = vec![BigUint::zero(); shape.cells() + 1];
    for t in Isotopism::all(shape) {
        let d = count_fixed_by(&Paratopism::isotopism(t), shape)?;
        accumulate(&mut acc, d.counts());
    }
    Ok(divide(shape, acc, &(factorial(r) * factorial(s) * factorial(n))))
}

/// Burnside over every paratopism of `shape`.
pub fn mc_count_full_group(shape: Shape) -> Result<WeightDistribution> {
    let all = Paratopism::all(shape);
    let mut acc = vec![BigUint::zero(); shape.cells() + 1];
    for p in &all {
        accumulate(&mut acc, count_fixed_by(p, shape)?.counts());
    }
    Ok(divide(shape, acc, &BigUint::from(all.len())))
}

/// Kind of equivalence for [`unbounded_class_counts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Isotopism,
    Main,
}

/// Largest weight accepted by [`unbounded_class_counts`].
pub const MAX_UNBOUNDED_WEIGHT: usize = 15;

/// Colored incidence graph whose isomorphism classes are the classes of
/// entry sets: a vertex per row, column, symbol and entry, each entry
/// joined to its row, column and symbol. For main classes the three roles
/// share a color and one extra vertex per role, joined to every vertex of
/// that role, keeps the roles apart.
pub fn incidence_graph(entries: &[Entry], kind: ClassKind) -> Result<ColoredGraph> {
    let dims = [0usize, 1, 2].map(|k| entries.iter().map(|e| e.coords()[k] + 1).max().unwrap_or(0));
    let offsets = [0, dims[0], dims[0] + dims[1]];
    let lines = dims.iter().sum::<usize>();
    let extra = if kind == ClassKind::Main { 3 } else { 0 };
    let mut colors = Vec::with_capacity(lines + entries.len() + extra);
    for (k, &d) in dims.iter().enumerate() {
        let c = if kind == ClassKind::Main { 0 } else { k as u32 };
        colors.extend(core::iter::repeat_n(c, d));
    }
    colors.extend(core::iter::repeat_n(3u32, entries.len()));
    colors.extend(core::iter::repeat_n(4u32, extra));
    let mut g = ColoredGraph::new(colors)?;
    for (x, e) in entries.iter().enumerate() {
        for (k, &c) in e.coords().iter().enumerate() {
            g.add_edge(lines + x, offsets[k] + c)?;
        }
    }
    if kind == ClassKind::Main {
        for k in 0..3 {
            for v in 0..dims[k] {
                g.add_edge(lines + entries.len() + k, offsets[k] + v)?;
            }
        }
    }
    Ok(g)
}

/// Every single-entry extension of `entries`, using existing or new rows,
/// columns and symbols.
fn extensions(entries: &[Entry]) -> Vec<Vec<Entry>> {
    let dims = [0usize, 1, 2].map(|k| entries.iter().map(|e| e.coords()[k] + 1).max().unwrap_or(0));
    let mut out = Vec::new();
    for i in 0..=dims[0] {
        for j in 0..=dims[1] {
            if entries.iter().any(|e| e.row == i && e.col == j) {
                continue;
            }
            for k in 0..=dims[2] {
                if entries.iter().any(|e| e.symbol == k && (e.row == i || e.col == j)) {
                    continue;
                }
                let mut next = entries.to_vec();
                next.push(Entry::new(i, j, k));
                out.push(next);
            }
        }
    }
    out
}

/// Representatives of the classes of each weight `0..=max_m` among
/// rectangles with at least `m` rows, columns and symbols.
pub fn unbounded_class_representatives(max_m: usize, kind: ClassKind) -> Result<Vec<Vec<Vec<Entry>>>> {
    if max_m > MAX_UNBOUNDED_WEIGHT {
        return Err(Error::SizeLimit(format!("constructive enumeration is limited to weight {MAX_UNBOUNDED_WEIGHT}")));
    }
    let mut levels: Vec<Vec<Vec<Entry>>> = vec![vec![Vec::new()]];
    for _ in 1..=max_m {
        let mut seen: BTreeMap<Vec<u8>, Vec<Entry>> = BTreeMap::new();
        for rep in levels.last().expect("level 0 exists") {
            for next in extensions(rep) {
                let code = canonical_form(&incidence_graph(&next, kind)?).code;
                seen.entry(code).or_insert(next);
            }
        }
        levels.push(seen.into_values().collect());
    }
    Ok(levels)
}

/// Number of classes of each weight `0..=max_m` when the shape does not
/// constrain the rectangle.
pub fn unbounded_class_counts(max_m: usize, kind: ClassKind) -> Result<Vec<BigCount>> {
    Ok(unbounded_class_representatives(max_m, kind)?.iter().map(|l| BigCount::from(l.len())).collect())
}

/// Embeds an entry list in the rectangle of the given shape.
pub fn entries_to_plr(entries: &[Entry], shape: Shape) -> Result<Plr> {
    Plr::from_entries(shape, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{all_plrs, class_sizes, count_all};
    use crate::paratopism::apply_paratopism;
    use alloc::collections::BTreeSet;

    fn sh(r: usize, s: usize, n: usize) -> Shape {
        Shape::new(r, s, n).unwrap()
    }

    fn cs(pairs: &[(usize, usize)]) -> CycleStructure {
        CycleStructure::from_pairs(pairs).unwrap()
    }

    fn u(v: &[u32]) -> Vec<BigUint> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn delta_examples() {
        for t in 1..=3 {
            let id = CycleStructure::identity(t);
            let d = delta(&DeltaKey::Identity(id.clone(), id.clone(), id), sh(t, t, t)).unwrap();
            assert_eq!(d, count_all(sh(t, t, t)));
        }
        let key = DeltaKey::Identity(cs(&[(2, 1)]), cs(&[(1, 2)]), cs(&[(1, 2)]));
        assert_eq!(delta(&key, sh(2, 2, 2)).unwrap().counts(), &u(&[1, 0, 0, 0, 0])[..]);
        let shape = sh(2, 2, 2);
        let swap = DeltaKey::Swap(cs(&[(1, 2)]), cs(&[(1, 2)]));
        let p = swap.representative(shape).unwrap();
        let mut brute = vec![0u32; 5];
        for l in all_plrs(shape) {
            if apply_paratopism(&p, &l).unwrap() == l {
                brute[l.weight()] += 1;
            }
        }
        assert_eq!(delta(&swap, shape).unwrap().counts(), &u(&brute)[..]);
        assert!(DeltaKey::Swap(cs(&[(1, 2)]), cs(&[(1, 3)])).representative(sh(2, 3, 3)).is_err());
    }

    #[test]
    fn pruning_never_hides_fixed_rectangles() {
        let shape = sh(3, 3, 3);
        for a in CycleStructure::all(3) {
            for b in CycleStructure::all(3) {
                for c in CycleStructure::all(3) {
                    if !admits_nonempty(&a, &b, &c) {
                        let p = DeltaKey::Identity(a.clone(), b.clone(), c.clone()).representative(shape).unwrap();
                        assert_eq!(count_fixed_by(&p, shape).unwrap(), only_empty(shape));
                    }
                }
            }
        }
    }

    #[test]
    fn golden_small_counts() {
        assert_eq!(isot_count(sh(2, 2, 2)).unwrap().counts(), &u(&[1, 1, 4, 1, 1])[..]);
        assert_eq!(mc_count(sh(2, 2, 2)).unwrap().counts(), &u(&[1, 1, 2, 1, 1])[..]);
        assert_eq!(isot_count(sh(1, 1, 1)).unwrap().counts(), &u(&[1, 1])[..]);
        assert_eq!(isot_count(sh(3, 3, 3)).unwrap().total(), 81u32.into());
        assert_eq!(mc_count(sh(3, 3, 3)).unwrap().total(), 39u32.into());
        assert_eq!(isom_count(1).unwrap().counts(), &u(&[1, 1])[..]);
        assert_eq!(isom_count(2).unwrap().total(), 20u32.into());
        let i3 = isom_count(3).unwrap();
        assert_eq!((i3.get(3), i3.total()), (221u32.into(), 2029u32.into()));
    }

    #[test]
    fn conjugacy_reduction_matches_full_group() {
        for shape in [sh(1, 2, 3), sh(2, 2, 3), sh(2, 3, 3), sh(3, 3, 3), sh(3, 2, 2)] {
            assert_eq!(isot_count(shape).unwrap(), isot_count_full_group(shape).unwrap(), "{shape}");
        }
        for shape in [sh(2, 2, 2), sh(2, 2, 3), sh(3, 2, 2), sh(2, 3, 3), sh(3, 3, 3), sh(1, 1, 1)] {
            assert_eq!(mc_count(shape).unwrap(), mc_count_full_group(shape).unwrap(), "{shape}");
        }
    }

    fn orbits_by_weight(shape: Shape, group: &[Paratopism]) -> Vec<u32> {
        let mut seen = BTreeSet::new();
        let mut out = vec![0u32; shape.cells() + 1];
        for l in all_plrs(shape) {
            if seen.contains(&l) {
                continue;
            }
            out[l.weight()] += 1;
            for p in group {
                seen.insert(apply_paratopism(p, &l).unwrap());
            }
        }
        out
    }

    #[test]
    fn isomorphism_counts_match_orbits() {
        for n in 1..=3 {
            let shape = sh(n, n, n);
            let group: Vec<Paratopism> =
                Permutation::all(n).map(|a| Paratopism::isotopism(Isotopism::new(a.clone(), a.clone(), a))).collect();
            assert_eq!(isom_count(n).unwrap().counts(), &u(&orbits_by_weight(shape, &group))[..]);
        }
    }

    #[test]
    fn main_classes_of_rearranged_shapes_agree() {
        for d in [[2, 2, 3], [2, 3, 2], [3, 2, 2], [1, 2, 2], [2, 1, 2]] {
            let shape = Shape::from_dims(d).unwrap();
            let group = Paratopism::all(shape);
            assert_eq!(mc_count(shape).unwrap().counts(), &u(&orbits_by_weight(shape, &group))[..], "{shape}");
        }
    }

    #[test]
    fn class_counts_are_ordered() {
        for shape in [sh(2, 2, 2), sh(2, 3, 3), sh(3, 3, 3), sh(2, 2, 4)] {
            let raw = count_all(shape);
            let isot = isot_count(shape).unwrap();
            let mc = mc_count(shape).unwrap();
            for m in 0..=shape.cells() {
                assert!(mc.get(m) <= isot.get(m) && isot.get(m) <= raw.get(m));
            }
        }
    }

    #[test]
    fn unbounded_small_counts() {
        let isot = unbounded_class_counts(5, ClassKind::Isotopism).unwrap();
        assert_eq!(isot, u(&[1, 1, 4, 11, 52, 221]));
        let main = unbounded_class_counts(5, ClassKind::Main).unwrap();
        assert_eq!(main, u(&[1, 1, 2, 5, 18, 59]));
    }

    #[test]
    fn unbounded_counts_stabilize_to_bounded_ones() {
        let isot = unbounded_class_counts(3, ClassKind::Isotopism).unwrap();
        let main = unbounded_class_counts(3, ClassKind::Main).unwrap();
        for m in 1..=3 {
            assert_eq!(isot[m], isot_count(sh(m, m, m)).unwrap().get(m));
            assert_eq!(main[m], mc_count(sh(m, m, m)).unwrap().get(m));
        }
    }

    #[test]
    fn orbit_sizes_of_representatives_add_up() {
        let reps = unbounded_class_representatives(3, ClassKind::Isotopism).unwrap();
        for (m, classes) in reps.iter().enumerate().skip(1) {
            let shape = sh(m, m, m);
            let total: BigUint =
                classes.iter().map(|e| class_sizes(&entries_to_plr(e, shape).unwrap()).unwrap().isotopism_class).sum();
            assert_eq!(total, count_all(shape).get(m));
        }
    }
}
