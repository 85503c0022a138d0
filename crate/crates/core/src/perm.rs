//! Permutations and cycle structures.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A bijection on `0..t`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(t: usize) -> Self {
        Permutation { images: (0..t).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let t = images.len();
        let mut seen = alloc::vec![false; t];
        for &x in &images {
            if x >= t || seen[x] {
                return Err(Error::Invalid(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `0..t` from 0-based cycles.
    pub fn from_cycles(t: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..t).collect();
        let mut seen = alloc::vec![false; t];
        for cyc in cycles {
            for (k, &x) in cyc.iter().enumerate() {
                if x >= t || seen[x] {
                    return Err(Error::Invalid(format!("bad cycle {cyc:?}")));
                }
                seen[x] = true;
                images[x] = cyc[(k + 1) % cyc.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// The permutation `x -> other(self(x))`.
    pub fn then(&self, other: &Permutation) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    /// Cycles in order of their smallest point, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let t = self.degree();
        let mut seen = alloc::vec![false; t];
        let mut out = Vec::new();
        for start in 0..t {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_structure(&self) -> CycleStructure {
        let mut mult = BTreeMap::new();
        for c in self.cycles() {
            *mult.entry(c.len()).or_insert(0) += 1;
        }
        CycleStructure { mult }
    }

    /// Every permutation of `0..t` in lexicographic order.
    pub fn all(t: usize) -> AllPermutations {
        AllPermutations { next: Some((0..t).collect()) }
    }
}

/// Convenience wrapper for [`Permutation::cycle_structure`].
pub fn cycle_structure(p: &Permutation) -> CycleStructure {
    p.cycle_structure()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        if next_lex(&mut nxt) {
            self.next = Some(nxt);
        }
        Some(Permutation { images: cur })
    }
}

fn next_lex(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Multiset of cycle lengths: `length -> multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleStructure {
    mult: BTreeMap<usize, usize>,
}

impl CycleStructure {
    pub fn new(mult: BTreeMap<usize, usize>) -> Result<Self> {
        if mult.keys().any(|&len| len == 0) {
            return Err(Error::Invalid("cycle lengths must be positive".into()));
        }
        Ok(CycleStructure { mult: mult.into_iter().filter(|&(_, d)| d > 0).collect() })
    }

    /// Builds a structure from `(length, multiplicity)` pairs.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let mut mult = BTreeMap::new();
        for &(len, d) in pairs {
            *mult.entry(len).or_insert(0) += d;
        }
        CycleStructure::new(mult)
    }

    /// The structure `1^t` of the identity.
    pub fn identity(t: usize) -> Self {
        let mut mult = BTreeMap::new();
        if t > 0 {
            mult.insert(1, t);
        }
        CycleStructure { mult }
    }

    pub fn degree(&self) -> usize {
        self.mult.iter().map(|(l, d)| l * d).sum()
    }

    pub fn multiplicities(&self) -> &BTreeMap<usize, usize> {
        &self.mult
    }

    /// Distinct cycle lengths present.
    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.mult.keys().copied()
    }

    /// `t! / prod (d_i! i^d_i)`, the size of the conjugacy class.
    pub fn permutations_with_structure(&self) -> BigUint {
        factorial(self.degree()) / self.centralizer_order()
    }

    /// `prod (d_i! i^d_i)`, the order of the centralizer of any member.
    pub fn centralizer_order(&self) -> BigUint {
        let mut c = BigUint::one();
        for (&len, &d) in &self.mult {
            c *= factorial(d) * BigUint::from(len).pow(d as u32);
        }
        c
    }

    /// Cycles laid out in decreasing length over consecutive points.
    pub fn representative(&self) -> Permutation {
        let t = self.degree();
        let mut images: Vec<usize> = (0..t).collect();
        let mut start = 0;
        for (&len, &d) in self.mult.iter().rev() {
            for _ in 0..d {
                for k in 0..len {
                    images[start + k] = start + (k + 1) % len;
                }
                start += len;
            }
        }
        Permutation { images }
    }

    /// All cycle structures of degree `t` (the integer partitions of `t`).
    pub fn all(t: usize) -> Vec<CycleStructure> {
        let mut out = Vec::new();
        let mut parts = Vec::new();
        partitions(t, t, &mut parts, &mut out);
        out
    }
}

fn partitions(rem: usize, max: usize, parts: &mut Vec<usize>, out: &mut Vec<CycleStructure>) {
    if rem == 0 {
        let mut mult = BTreeMap::new();
        for &p in parts.iter() {
            *mult.entry(p).or_insert(0) += 1;
        }
        out.push(CycleStructure { mult });
        return;
    }
    for p in (1..=max.min(rem)).rev() {
        parts.push(p);
        partitions(rem - p, p, parts, out);
        parts.pop();
    }
}

/// Formats as `3^1 2^2 1^1`, longest cycles first.
impl fmt::Display for CycleStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (len, d)) in self.mult.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{len}^{d}")?;
        }
        Ok(())
    }
}

pub fn factorial(t: usize) -> BigUint {
    (1..=t as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Free function form of [`CycleStructure::permutations_with_structure`].
pub fn permutations_with_structure(z: &CycleStructure) -> BigUint {
    z.permutations_with_structure()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn cycle_structure_examples() {
        assert_eq!(Permutation::identity(4).cycle_structure().to_string(), "1^4");
        let p = Permutation::from_cycles(9, &[&[0, 1], &[2, 3, 4], &[6, 7]]).unwrap();
        assert_eq!(p.cycle_structure().to_string(), "3^1 2^2 1^2");
        let q = Permutation::from_cycles(8, &[&[0, 1], &[2, 3, 4], &[5, 6]]).unwrap();
        assert_eq!(q.cycle_structure().to_string(), "3^1 2^2 1^1");
        let c3 = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert_eq!(c3.cycle_structure().to_string(), "3^1");
    }

    #[test]
    fn class_sizes_small() {
        assert_eq!(CycleStructure::identity(5).permutations_with_structure(), 1u32.into());
        let tr = CycleStructure::from_pairs(&[(2, 1), (1, 1)]).unwrap();
        assert_eq!(tr.permutations_with_structure(), 3u32.into());
        let c3 = CycleStructure::from_pairs(&[(3, 1)]).unwrap();
        assert_eq!(c3.permutations_with_structure(), 2u32.into());
    }

    #[test]
    fn class_sizes_match_enumeration() {
        for t in 0..=6 {
            let mut counts: BTreeMap<CycleStructure, u64> = BTreeMap::new();
            for p in Permutation::all(t) {
                *counts.entry(p.cycle_structure()).or_insert(0) += 1;
            }
            let all = CycleStructure::all(t);
            assert_eq!(all.len(), counts.len());
            for z in all {
                assert_eq!(z.permutations_with_structure(), counts[&z].into());
            }
        }
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for t in 0..=9 {
            let total: BigUint = CycleStructure::all(t).iter().map(|z| z.permutations_with_structure()).sum();
            assert_eq!(total, factorial(t));
        }
    }

    #[test]
    fn representative_has_requested_structure() {
        for t in 1..=7 {
            for z in CycleStructure::all(t) {
                assert_eq!(z.representative().cycle_structure(), z);
            }
        }
        let z = CycleStructure::from_pairs(&[(2, 1), (1, 2)]).unwrap();
        assert_eq!(z.representative().images(), &[1, 0, 2, 3]);
    }

    #[test]
    fn composition_and_inverse() {
        let a = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let b = Permutation::from_images(vec![0, 2, 1]).unwrap();
        let ab = a.then(&b);
        for x in 0..3 {
            assert_eq!(ab.apply(x), b.apply(a.apply(x)));
        }
        assert!(a.then(&a.inverse()).is_identity());
        assert_eq!(Permutation::all(4).count(), 24);
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }
}
