//! Exact polynomials: univariate in `n` and trivariate in `(r, s, n)`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Polynomial in one variable `n`; `coeffs[k]` multiplies `n^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        UniPoly::from_coeffs(vec![c.into()])
    }

    /// The variable itself.
    pub fn x() -> Self {
        UniPoly::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x (x-1) ... (x-k+1)`.
    pub fn falling_factorial(k: usize) -> Self {
        let mut p = UniPoly::constant(1);
        for j in 0..k {
            p = &p * &UniPoly::from_i64(&[-(j as i64), 1]);
        }
        p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(UniPoly::constant(1), |acc, _| &acc * self)
    }

    /// Exact division of every coefficient by `d`; `None` if any is inexact.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(UniPoly::from_coeffs(out))
    }

    /// Reinterprets this polynomial as a trivariate one in the variable `var`
    /// (0 = r, 1 = s, 2 = n).
    pub fn in_variable(&self, var: usize) -> TriPoly {
        let mut t = TriPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let mut e = [0u32; 3];
            e[var] = k as u32;
            t.add_term(e, c.clone());
        }
        t
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(o.coeffs.len());
        let z = BigInt::zero();
        UniPoly::from_coeffs(
            (0..len).map(|k| self.coeffs.get(k).unwrap_or(&z) + o.coeffs.get(k).unwrap_or(&z)).collect(),
        )
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        self + &(-o)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

/// Highest power first, e.g. `n^3 - 3n^2 + 2n`.
impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_signed(f, c, first, k == 0)?;
            first = false;
            match k {
                0 => {}
                1 => f.write_str("n")?,
                _ => write!(f, "n^{k}")?,
            }
        }
        Ok(())
    }
}

/// Writes the sign and magnitude of a coefficient, omitting a unit magnitude
/// unless `constant` is set.
fn write_signed(f: &mut impl Write, c: &BigInt, first: bool, constant: bool) -> fmt::Result {
    let neg = c.is_negative();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    let mag = c.abs();
    if constant || !mag.is_one() {
        write!(f, "{mag}")?;
    }
    Ok(())
}

/// Exponent triple `(a, b, c)` of the monomial `r^a s^b n^c`.
pub type Exponents = [u32; 3];

/// Polynomial in `(r, s, n)` stored fully expanded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TriPoly {
    terms: BTreeMap<Exponents, BigInt>,
}

impl TriPoly {
    pub fn zero() -> Self {
        TriPoly::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        TriPoly::monomial([0, 0, 0], c)
    }

    pub fn monomial(e: Exponents, c: impl Into<BigInt>) -> Self {
        let mut t = TriPoly::zero();
        t.add_term(e, c.into());
        t
    }

    /// `r^k s^k n^k`.
    pub fn rsn_pow(k: u32) -> Self {
        TriPoly::monomial([k, k, k], 1)
    }

    /// Sum of the distinct monomials whose exponents are a rearrangement of
    /// `e`: the bar notation `abc` with an overline.
    pub fn bar(e: Exponents) -> Self {
        let mut t = TriPoly::zero();
        for p in permutations3(e) {
            t.terms.insert(p, BigInt::one());
        }
        t
    }

    pub fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, e: Exponents) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut t = TriPoly::zero();
        for (e, c) in &self.terms {
            t.add_term(*e, c * k);
        }
        t
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(TriPoly::constant(1), |acc, _| &acc * self)
    }

    pub fn eval(&self, r: &BigInt, s: &BigInt, n: &BigInt) -> BigInt {
        let mut total = BigInt::zero();
        for (e, c) in &self.terms {
            total += c * r.pow(e[0]) * s.pow(e[1]) * n.pow(e[2]);
        }
        total
    }

    pub fn eval_i64(&self, r: i64, s: i64, n: i64) -> BigInt {
        self.eval(&BigInt::from(r), &BigInt::from(s), &BigInt::from(n))
    }

    /// Renames variables: variable `k` becomes variable `perm[k]`.
    pub fn permute_vars(&self, perm: [usize; 3]) -> Self {
        let mut t = TriPoly::zero();
        for (e, c) in &self.terms {
            let mut f = [0; 3];
            for k in 0..3 {
                f[perm[k]] = e[k];
            }
            t.add_term(f, c.clone());
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| permutations3(*e).iter().all(|p| self.terms.get(p) == Some(c)))
    }

    /// True when every monomial contains each of `r`, `s` and `n`.
    pub fn divisible_by_rsn(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 1))
    }

    /// Keeps only the monomials of total degree at least `d`.
    pub fn degree_at_least(&self, d: u32) -> Self {
        TriPoly {
            terms: self.terms.iter().filter(|(e, _)| e[0] + e[1] + e[2] >= d).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Exact division of every coefficient by `d`; `None` if any is inexact.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut out = TriPoly::zero();
        for (e, c) in &self.terms {
            let (q, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            out.add_term(*e, q);
        }
        Some(out)
    }

    /// Coefficients of a symmetric polynomial keyed by the non-increasing
    /// exponent multiset; `None` if the polynomial is not symmetric.
    pub fn bar_coefficients(&self) -> Option<BTreeMap<Exponents, BigInt>> {
        if !self.is_symmetric() {
            return None;
        }
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut k = *e;
            k.sort_unstable_by(|a, b| b.cmp(a));
            out.insert(k, c.clone());
        }
        Some(out)
    }

    /// Bar notation grouped by powers of `rsn`, e.g. `(rsn)^2 + (rsn)(2 - 100̄)`.
    /// Falls back to the expanded form for non-symmetric polynomials.
    pub fn to_bar_string(&self) -> String {
        let Some(bars) = self.bar_coefficients() else {
            return self.to_expanded_string();
        };
        if bars.is_empty() {
            return "0".into();
        }
        let mut groups: BTreeMap<u32, Vec<(Exponents, BigInt)>> = BTreeMap::new();
        for (e, c) in bars {
            let k = e[2];
            groups.entry(k).or_default().push(([e[0] - k, e[1] - k, 0], c));
        }
        let mut out = String::new();
        for (gi, (k, mut items)) in groups.into_iter().rev().enumerate() {
            items.sort_by_key(|a| a.0);
            let render = |buf: &mut String, first: bool| {
                for (j, (e, c)) in items.iter().enumerate() {
                    let constant = *e == [0, 0, 0];
                    write_signed(buf, c, first && j == 0, constant).unwrap();
                    if !constant {
                        if !c.abs().is_one() {
                            buf.push('·');
                        }
                        let _ = write!(buf, "{}{}{}\u{0305}", e[0], e[1], e[2]);
                    }
                }
            };
            if k == 0 {
                render(&mut out, gi == 0);
                continue;
            }
            let factor = if k == 1 { "rsn".into() } else { alloc::format!("(rsn)^{k}") };
            let unit = items.len() == 1 && items[0].0 == [0, 0, 0] && items[0].1.abs().is_one();
            let neg = unit && items[0].1.is_negative();
            match (gi == 0, neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            if unit {
                out.push_str(&factor);
            } else {
                let mut inner = String::new();
                render(&mut inner, true);
                let wrapped = if k == 1 { "(rsn)".into() } else { factor };
                let _ = write!(out, "{wrapped}({inner})");
            }
        }
        out
    }

    /// Expanded monomial form, highest total degree first.
    pub fn to_expanded_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then(b.cmp(a))
        });
        let mut out = String::new();
        for (i, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let constant = *e == [0, 0, 0];
            write_signed(&mut out, c, i == 0, constant).unwrap();
            let mut parts = Vec::new();
            for (var, &x) in ["r", "s", "n"].iter().zip(e.iter()) {
                match x {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(alloc::format!("{var}^{x}")),
                }
            }
            if !constant && !c.abs().is_one() {
                out.push(' ');
            }
            out.push_str(&parts.join(" "));
        }
        out
    }
}

fn permutations3(e: Exponents) -> Vec<Exponents> {
    let mut out: Vec<Exponents> = [
        [e[0], e[1], e[2]],
        [e[0], e[2], e[1]],
        [e[1], e[0], e[2]],
        [e[1], e[2], e[0]],
        [e[2], e[0], e[1]],
        [e[2], e[1], e[0]],
    ]
    .to_vec();
    out.sort_unstable();
    out.dedup();
    out
}

impl Add for &TriPoly {
    type Output = TriPoly;
    fn add(self, o: &TriPoly) -> TriPoly {
        let mut t = self.clone();
        for (e, c) in &o.terms {
            t.add_term(*e, c.clone());
        }
        t
    }
}

impl Sub for &TriPoly {
    type Output = TriPoly;
    fn sub(self, o: &TriPoly) -> TriPoly {
        let mut t = self.clone();
        for (e, c) in &o.terms {
            t.add_term(*e, -c);
        }
        t
    }
}

impl Neg for &TriPoly {
    type Output = TriPoly;
    fn neg(self) -> TriPoly {
        TriPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &TriPoly {
    type Output = TriPoly;
    fn mul(self, o: &TriPoly) -> TriPoly {
        let mut t = TriPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                t.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], x * y);
            }
        }
        t
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bar_string())
    }
}
