//! Isotopisms, paratopisms and their action on partial Latin rectangles.
//!
//! A paratopism `(theta, pi)` sends the entry `(p0, p1, p2)` to
//! `(theta_0(p_pi(0)), theta_1(p_pi(1)), theta_2(p_pi(2)))`: the coordinates
//! are first rearranged by `pi`, then each is permuted by its component of
//! `theta`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::plr::{Entry, Plr, Shape};

/// A triple `(alpha, beta, gamma)` permuting rows, columns and symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Isotopism {
    pub alpha: Permutation,
    pub beta: Permutation,
    pub gamma: Permutation,
}

impl Isotopism {
    pub fn new(alpha: Permutation, beta: Permutation, gamma: Permutation) -> Self {
        Isotopism { alpha, beta, gamma }
    }

    pub fn identity(shape: Shape) -> Self {
        Isotopism::new(
            Permutation::identity(shape.r()),
            Permutation::identity(shape.s()),
            Permutation::identity(shape.n()),
        )
    }

    pub fn component(&self, k: usize) -> &Permutation {
        match k {
            0 => &self.alpha,
            1 => &self.beta,
            _ => &self.gamma,
        }
    }

    pub fn fits(&self, shape: Shape) -> bool {
        self.alpha.degree() == shape.r() && self.beta.degree() == shape.s() && self.gamma.degree() == shape.n()
    }

    /// Every isotopism of `shape`, in lexicographic order of components.
    pub fn all(shape: Shape) -> Vec<Isotopism> {
        let mut out = Vec::new();
        for a in Permutation::all(shape.r()) {
            for b in Permutation::all(shape.s()) {
                for c in Permutation::all(shape.n()) {
                    out.push(Isotopism::new(a.clone(), b.clone(), c));
                }
            }
        }
        out
    }
}

/// An isotopism combined with a permutation of the three coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Paratopism {
    pub theta: Isotopism,
    pub pi: Permutation,
}

impl Paratopism {
    pub fn new(theta: Isotopism, pi: Permutation) -> Result<Self> {
        if pi.degree() != 3 {
            return Err(Error::Invalid(format!("pi must act on 3 points, got {}", pi.degree())));
        }
        Ok(Paratopism { theta, pi })
    }

    pub fn identity(shape: Shape) -> Self {
        Paratopism { theta: Isotopism::identity(shape), pi: Permutation::identity(3) }
    }

    pub fn isotopism(theta: Isotopism) -> Self {
        Paratopism { theta, pi: Permutation::identity(3) }
    }

    /// Checks component degrees and that `pi` stabilizes `(r, s, n)`.
    pub fn check(&self, shape: Shape) -> Result<()> {
        if !self.theta.fits(shape) {
            return Err(Error::ShapeMismatch(format!(
                "isotopism degrees ({},{},{}) do not match {shape}",
                self.theta.alpha.degree(),
                self.theta.beta.degree(),
                self.theta.gamma.degree()
            )));
        }
        if !stabilizes(&self.pi, shape) {
            return Err(Error::ShapeMismatch(format!("coordinate permutation {} does not stabilize {shape}", self.pi)));
        }
        Ok(())
    }

    /// Image of one entry's coordinates.
    pub fn map_coords(&self, p: [usize; 3]) -> [usize; 3] {
        let mut q = [0; 3];
        for (k, slot) in q.iter_mut().enumerate() {
            *slot = self.theta.component(k).apply(p[self.pi.apply(k)]);
        }
        q
    }

    pub fn map_entry(&self, e: Entry) -> Entry {
        Entry::from_coords(self.map_coords(e.coords()))
    }

    /// The paratopism acting as `self` followed by `next`.
    pub fn then(&self, next: &Paratopism) -> Paratopism {
        let pi = Permutation::from_images((0..3).map(|k| self.pi.apply(next.pi.apply(k))).collect())
            .expect("composition of permutations");
        let comp = |k: usize| self.theta.component(next.pi.apply(k)).then(next.theta.component(k));
        Paratopism { theta: Isotopism::new(comp(0), comp(1), comp(2)), pi }
    }

    pub fn inverse(&self) -> Paratopism {
        let pinv = self.pi.inverse();
        let comp = |k: usize| self.theta.component(pinv.apply(k)).inverse();
        Paratopism { theta: Isotopism::new(comp(0), comp(1), comp(2)), pi: pinv }
    }

    /// Every paratopism of `shape`: all isotopisms times every stabilizing `pi`.
    pub fn all(shape: Shape) -> Vec<Paratopism> {
        let pis = stabilizing_permutations(shape);
        let mut out = Vec::new();
        for theta in Isotopism::all(shape) {
            for pi in &pis {
                out.push(Paratopism { theta: theta.clone(), pi: pi.clone() });
            }
        }
        out
    }
}

pub fn stabilizes(pi: &Permutation, shape: Shape) -> bool {
    let d = shape.dims();
    pi.degree() == 3 && (0..3).all(|k| d[pi.apply(k)] == d[k])
}

/// Coordinate permutations fixing the ordered triple `(r, s, n)`.
pub fn stabilizing_permutations(shape: Shape) -> Vec<Permutation> {
    Permutation::all(3).filter(|p| stabilizes(p, shape)).collect()
}

/// Applies `p` to `l`, returning `l^(theta, pi)`.
pub fn apply_paratopism(p: &Paratopism, l: &Plr) -> Result<Plr> {
    let shape = l.shape();
    p.check(shape)?;
    let entries: Vec<Entry> = l.entries().into_iter().map(|e| p.map_entry(e)).collect();
    Plr::from_entries(shape, &entries)
}

/// Rearranges coordinates by `pi` without requiring `pi` to stabilize the
/// shape; the result has shape `(d_pi(0), d_pi(1), d_pi(2))`.
pub fn parastrophe(l: &Plr, pi: &Permutation) -> Result<Plr> {
    if pi.degree() != 3 {
        return Err(Error::Invalid("pi must act on 3 points".into()));
    }
    let d = l.shape().dims();
    let shape = Shape::new(d[pi.apply(0)], d[pi.apply(1)], d[pi.apply(2)])?;
    let entries: Vec<Entry> = l
        .entries()
        .into_iter()
        .map(|e| {
            let c = e.coords();
            Entry::new(c[pi.apply(0)], c[pi.apply(1)], c[pi.apply(2)])
        })
        .collect();
    Plr::from_entries(shape, &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::all_plrs;
    use alloc::string::ToString;
    use alloc::vec;

    fn sh(r: usize, s: usize, n: usize) -> Shape {
        Shape::new(r, s, n).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let shape = sh(2, 3, 3);
        let id = Paratopism::identity(shape);
        for l in all_plrs(shape) {
            assert_eq!(apply_paratopism(&id, &l).unwrap(), l);
        }
    }

    #[test]
    fn worked_examples() {
        let shape = sh(2, 2, 2);
        let swap = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let l = Plr::parse(shape, "1 ./. 2").unwrap();
        let p = Paratopism::new(Isotopism::identity(shape), swap).unwrap();
        assert_eq!(apply_paratopism(&p, &l).unwrap(), l);

        let a = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        let theta = Isotopism::new(a, Permutation::identity(2), Permutation::identity(2));
        let l = Plr::parse(shape, "1 ./. .").unwrap();
        let out = apply_paratopism(&Paratopism::isotopism(theta), &l).unwrap();
        assert_eq!(out.entries(), vec![Entry::new(1, 0, 0)]);
    }

    #[test]
    fn rejects_non_stabilizing_pi() {
        let shape = sh(2, 3, 3);
        let swap01 = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let swap12 = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        assert!(Paratopism::new(Isotopism::identity(shape), swap01).unwrap().check(shape).is_err());
        assert!(Paratopism::new(Isotopism::identity(shape), swap12).unwrap().check(shape).is_ok());
        assert_eq!(stabilizing_permutations(sh(3, 3, 3)).len(), 6);
        assert_eq!(stabilizing_permutations(sh(1, 2, 3)).len(), 1);
    }

    #[test]
    fn action_composes() {
        for shape in [sh(2, 2, 2), sh(2, 2, 3), sh(1, 2, 2)] {
            let all = Paratopism::all(shape);
            let plrs = all_plrs(shape);
            for (i, p) in all.iter().enumerate().step_by(3) {
                for q in all.iter().skip(i % 5).step_by(7) {
                    let pq = p.then(q);
                    for l in plrs.iter().step_by(5) {
                        let two = apply_paratopism(q, &apply_paratopism(p, l).unwrap()).unwrap();
                        assert_eq!(apply_paratopism(&pq, l).unwrap(), two);
                    }
                }
                let back = p.then(&p.inverse());
                for l in plrs.iter().step_by(3) {
                    assert_eq!(&apply_paratopism(&back, l).unwrap(), l);
                }
            }
        }
    }

    #[test]
    fn action_composes_on_3x3x3() {
        let shape = sh(3, 3, 3);
        let all = Paratopism::all(shape);
        let l = Plr::parse(shape, "1 2 ./. 3 1/2 . .").unwrap();
        for p in all.iter().step_by(11) {
            for q in all.iter().step_by(13) {
                let two = apply_paratopism(q, &apply_paratopism(p, &l).unwrap()).unwrap();
                assert_eq!(apply_paratopism(&p.then(q), &l).unwrap(), two);
            }
        }
    }

    #[test]
    fn weight_is_preserved() {
        let shape = sh(3, 3, 3);
        let all = Paratopism::all(shape);
        for l in all_plrs(sh(3, 3, 3)).iter().step_by(97) {
            for p in all.iter().step_by(37) {
                assert_eq!(apply_paratopism(p, l).unwrap().weight(), l.weight());
            }
        }
    }

    #[test]
    fn parastrophe_transposes() {
        let l = Plr::parse(sh(2, 3, 3), "1 2 3/2 3 .").unwrap();
        let t = parastrophe(&l, &Permutation::from_cycles(3, &[&[0, 1]]).unwrap()).unwrap();
        assert_eq!(t.shape(), sh(3, 2, 3));
        assert_eq!(t.to_string(), "1 2/2 3/3 .");
    }
}
