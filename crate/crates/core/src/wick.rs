//! Graded symmetric algebra, contraction operators and Wick's theorem.
//!
//! An expression is a finite linear combination of monomials in generators of
//! even or odd degree. Monomials are kept in canonical form (generators sorted
//! by id) and every transposition of two odd generators on the way there flips
//! the sign, so a repeated odd generator kills its term.
//!
//! Gaussian expectations are `(e^{d_P} f)(0)` with the second-order operator
//! `d_P = 1/2 sum_{ab} P^{ab} d_b d_a` (`d_a` applied first), normalised so
//! that the two-point function of any pair of generators is `P^{ab}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalars usable as coefficients: `f64` and `BigRational` both qualify.
pub trait Coeff: Clone + fmt::Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive {}

impl<T> Coeff for T where T: Clone + fmt::Debug + PartialEq + Num + Neg<Output = T> + FromPrimitive {}

fn from_usize<C: Coeff>(n: usize) -> C {
    C::from_usize(n).expect("small integers are representable")
}

/// A generator of the algebra; odd degree means anticommuting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub id: u32,
    pub degree: i32,
}

impl Generator {
    pub fn new(id: u32, degree: i32) -> Self {
        Self { id, degree }
    }

    pub fn even(id: u32) -> Self {
        Self::new(id, 0)
    }

    pub fn odd(id: u32) -> Self {
        Self::new(id, 1)
    }

    /// `omega_i` in the pair `(omega*_i, omega_i)` of fermionic generators; id `2i + 1`.
    pub fn omega(i: u32) -> Self {
        Self::odd(2 * i + 1)
    }

    /// `omega*_i`; id `2i`.
    pub fn omega_star(i: u32) -> Self {
        Self::odd(2 * i)
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_odd() {
            write!(f, "xi{}", self.id)
        } else {
            write!(f, "x{}", self.id)
        }
    }
}

/// Sorts a word into canonical order.
///
/// Returns `None` when an odd generator repeats, otherwise the sorted word
/// and whether the Koszul sign is negative.
pub fn canonicalize(word: &[Generator]) -> Option<(Vec<Generator>, bool)> {
    let mut w = word.to_vec();
    let mut negative = false;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            if w[j - 1].is_odd() && w[j].is_odd() {
                negative = !negative;
            }
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1] && p[0].is_odd()) {
        return None;
    }
    Some((w, negative))
}

fn odd_count(word: &[Generator]) -> usize {
    word.iter().filter(|g| g.is_odd()).count()
}

/// An element of the graded symmetric algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedExpr<C = f64> {
    terms: BTreeMap<Vec<Generator>, C>,
}

impl<C: Coeff> Default for GradedExpr<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> GradedExpr<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(&[], c)
    }

    pub fn generator(g: Generator) -> Self {
        Self::monomial(&[g], C::one())
    }

    /// `c * w[0] w[1] ...`, brought to canonical order.
    pub fn monomial(word: &[Generator], c: C) -> Self {
        let mut e = Self::zero();
        e.insert(word, c);
        e
    }

    fn insert(&mut self, word: &[Generator], c: C) {
        if c.is_zero() {
            return;
        }
        let Some((key, negative)) = canonicalize(word) else {
            return;
        };
        let c = if negative { -c } else { c };
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Generator], &C)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[Generator]) -> C {
        match canonicalize(word) {
            Some((key, negative)) => {
                let c = self.terms.get(&key).cloned().unwrap_or_else(C::zero);
                if negative {
                    -c
                } else {
                    c
                }
            }
            None => C::zero(),
        }
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(C::zero)
    }

    /// Largest number of generators in any term.
    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(odd)` if every term has the same parity.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|k| odd_count(k) % 2 == 1);
        let first = it.next().unwrap_or(false);
        it.all(|p| p == first).then_some(first)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.insert(k, v.clone() * c.clone());
        }
        out
    }

    /// Keeps only terms with exactly `len` generators.
    pub fn component(&self, len: usize) -> Self {
        Self {
            terms: self.terms.iter().filter(|(k, _)| k.len() == len).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::constant(C::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl<C: Coeff> Add for &GradedExpr<C> {
    type Output = GradedExpr<C>;
    fn add(self, rhs: Self) -> GradedExpr<C> {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.insert(k, v.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &GradedExpr<C> {
    type Output = GradedExpr<C>;
    fn sub(self, rhs: Self) -> GradedExpr<C> {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.insert(k, -v.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &GradedExpr<C> {
    type Output = GradedExpr<C>;
    fn neg(self) -> GradedExpr<C> {
        self.scale(&-C::one())
    }
}

impl<C: Coeff> Mul for &GradedExpr<C> {
    type Output = GradedExpr<C>;
    fn mul(self, rhs: Self) -> GradedExpr<C> {
        let mut out = GradedExpr::zero();
        let mut word = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                word.clear();
                word.extend_from_slice(a);
                word.extend_from_slice(b);
                out.insert(&word, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for GradedExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{v}")?;
            for g in k {
                write!(f, "*{g}")?;
            }
        }
        Ok(())
    }
}

/// Directional derivative `d_v`, a derivation of degree `|v|`:
/// `d_v(v_1 ... v_n) = sum_k (-1)^{|v|(|v_1| + ... + |v_{k-1}|)} <v, v_k> v_1 ... ^v_k ... v_n`.
pub fn contract_vector<C: Coeff>(e: &GradedExpr<C>, v: Generator) -> GradedExpr<C> {
    let mut out = GradedExpr::zero();
    let mut rest = Vec::new();
    for (word, c) in &e.terms {
        let mut odd_before = 0usize;
        for (k, g) in word.iter().enumerate() {
            if *g == v {
                rest.clear();
                rest.extend_from_slice(&word[..k]);
                rest.extend_from_slice(&word[k + 1..]);
                let negative = v.is_odd() && odd_before % 2 == 1;
                out.insert(&rest, if negative { -c.clone() } else { c.clone() });
            }
            if g.is_odd() {
                odd_before += 1;
            }
        }
    }
    out
}

/// A pairing `P^{ab}` between generators.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingKernel<C = f64> {
    entries: BTreeMap<(Generator, Generator), C>,
}

impl<C: Coeff> Default for PairingKernel<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Coeff> PairingKernel<C> {
    pub fn new() -> Self {
        Self { entries: BTreeMap::new() }
    }

    /// Sets `P^{ab} = value` and `P^{ba} = (-1)^{|a||b|} value`.
    pub fn set(&mut self, a: Generator, b: Generator, value: C) -> Result<()> {
        if a.is_odd() != b.is_odd() && !value.is_zero() {
            return Err(Error::InvalidInput(format!("cannot pair {a} with {b}: parities differ")));
        }
        if a == b && a.is_odd() && !value.is_zero() {
            return Err(Error::InvalidInput(format!("odd generator {a} cannot pair with itself")));
        }
        let swapped = if a.is_odd() && b.is_odd() { -value.clone() } else { value.clone() };
        self.entries.insert((a, b), value);
        self.entries.insert((b, a), swapped);
        Ok(())
    }

    /// Sets one entry without symmetrizing.
    pub fn set_raw(&mut self, a: Generator, b: Generator, value: C) {
        self.entries.insert((a, b), value);
    }

    pub fn get(&self, a: Generator, b: Generator) -> C {
        self.entries.get(&(a, b)).cloned().unwrap_or_else(C::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Generator, Generator, &C)> {
        self.entries.iter().map(|((a, b), v)| (*a, *b, v))
    }

    /// Symmetric bosonic pairing `P^{gens[i] gens[j]} = m[i][j]`.
    pub fn bosonic(gens: &[Generator], m: &[Vec<C>]) -> Result<Self> {
        if m.len() != gens.len() || m.iter().any(|r| r.len() != gens.len()) {
            return Err(Error::InvalidInput("pairing matrix shape does not match generators".into()));
        }
        let mut p = Self::new();
        for (i, a) in gens.iter().enumerate() {
            if a.is_odd() {
                return Err(Error::InvalidInput(format!("{a} is not even")));
            }
            for (j, b) in gens.iter().enumerate().skip(i) {
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidInput("bosonic pairing must be symmetric".into()));
                }
                p.set(*a, *b, m[i][j].clone())?;
            }
        }
        Ok(p)
    }

    /// Fermionic pairing with `<omega_i omega*_j> = B_ij`, hence `<omega*_j omega_i> = -B_ij`.
    pub fn fermionic(b: &[Vec<C>]) -> Result<Self> {
        let mut p = Self::new();
        for (i, row) in b.iter().enumerate() {
            if row.len() != b.len() {
                return Err(Error::InvalidInput("fermionic pairing must be square".into()));
            }
            for (j, v) in row.iter().enumerate() {
                p.set(Generator::omega(i as u32), Generator::omega_star(j as u32), v.clone())?;
            }
        }
        Ok(p)
    }

    /// Union of two pairings on disjoint generator sets.
    pub fn block(&self, other: &Self) -> Self {
        let mut p = self.clone();
        p.entries.extend(other.entries.iter().map(|(k, v)| (*k, v.clone())));
        p
    }

    /// Applies `d_P = 1/2 sum_{ab} P^{ab} d_b d_a` once.
    pub fn contract(&self, e: &GradedExpr<C>) -> GradedExpr<C> {
        let half = C::one() / from_usize(2);
        let mut out = GradedExpr::zero();
        for ((a, b), p) in &self.entries {
            if p.is_zero() {
                continue;
            }
            let inner = contract_vector(&contract_vector(e, *a), *b);
            out = &out + &inner.scale(&(half.clone() * p.clone()));
        }
        out
    }
}

/// `(e^{d_P} f)(0)`.
pub fn wick_expectation<C: Coeff>(f: &GradedExpr<C>, p: &PairingKernel<C>) -> C {
    let mut total = f.constant_term();
    let mut cur = f.clone();
    let mut k = 1;
    while cur.max_length() >= 2 {
        // constants drop out after d_P, so strip them to keep the loop finite
        cur = p.contract(&cur).scale(&(C::one() / from_usize(k)));
        total = total + cur.constant_term();
        cur = &cur - &GradedExpr::constant(cur.constant_term());
        k += 1;
    }
    total
}

/// All perfect matchings of `0..n` as sorted pair lists; empty for odd `n`.
///
/// There are `(n-1)!!` of them for even `n`.
pub fn perfect_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(rest: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = rest[0];
        for k in 1..rest.len() {
            let mut next: Vec<usize> = rest[1..].to_vec();
            let partner = next.remove(k - 1);
            acc.push((first, partner));
            rec(&next, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if n % 2 == 0 {
        let idx: Vec<usize> = (0..n).collect();
        rec(&idx, &mut Vec::new(), &mut out);
    }
    out
}

/// The same expectation for a single word, summed explicitly over perfect
/// matchings with the Koszul sign of bringing each pair together.
pub fn wick_by_matchings<C: Coeff>(word: &[Generator], p: &PairingKernel<C>) -> C {
    let mut total = C::zero();
    for m in perfect_matchings(word.len()) {
        let order: Vec<Generator> = m.iter().flat_map(|&(i, j)| [word[i], word[j]]).collect();
        // sign of the permutation word -> order restricted to odd generators
        let positions: Vec<usize> = m.iter().flat_map(|&(i, j)| [i, j]).collect();
        let mut inversions = 0usize;
        for x in 0..positions.len() {
            for y in x + 1..positions.len() {
                if positions[x] > positions[y] && word[positions[x]].is_odd() && word[positions[y]].is_odd() {
                    inversions += 1;
                }
            }
        }
        let mut term = C::one();
        for pair in order.chunks(2) {
            term = term * p.get(pair[0], pair[1]);
        }
        total = if inversions % 2 == 1 { total - term } else { total + term };
    }
    total
}

/// Berezin integral: apply `d_{order[0]}`, then `d_{order[1]}`, ... and take the constant.
pub fn berezin_integral<C: Coeff>(f: &GradedExpr<C>, order: &[Generator]) -> C {
    let mut cur = f.clone();
    for g in order {
        cur = contract_vector(&cur, *g);
    }
    cur.constant_term()
}

fn top_exponential<C: Coeff>(s: &GradedExpr<C>, m: usize) -> GradedExpr<C> {
    let mut fact = C::one();
    for k in 2..=m {
        fact = fact * from_usize(k);
    }
    s.pow(m).scale(&(C::one() / fact))
}

/// `int d omega e^{-omega* B omega} = det B`, computed in the Grassmann algebra.
///
/// The measure is normalised by `int omega_1 omega*_1 ... omega_m omega*_m = 1`.
pub fn berezin_gaussian<C: Coeff>(b: &[Vec<C>]) -> Result<C> {
    let m = b.len();
    if b.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    if m == 0 {
        return Ok(C::one());
    }
    let mut s = GradedExpr::zero();
    for (i, row) in b.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let word = [Generator::omega_star(i as u32), Generator::omega(j as u32)];
            s = &s + &GradedExpr::monomial(&word, -v.clone());
        }
    }
    let order: Vec<Generator> = (0..m as u32).flat_map(|i| [Generator::omega(i), Generator::omega_star(i)]).collect();
    Ok(berezin_integral(&top_exponential(&s, m), &order))
}

/// `int d xi e^{-(xi, A xi)/2} = Pf(A)` with `d_{xi_2m}` applied first, so that
/// `Pf([[0, a], [-a, 0]]) = a`. Cross-checked against `det A` before returning.
pub fn pfaffian_gaussian(a: &[Vec<f64>]) -> Result<f64> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    if n % 2 == 1 {
        return Err(Error::InvalidInput(format!("Pfaffian needs even dimension, got {n}")));
    }
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for i in 0..n {
        for j in 0..n {
            if (a[i][j] + a[j][i]).abs() > 1e-12 * scale {
                return Err(Error::InvalidInput("matrix is not skew-symmetric".into()));
            }
        }
    }
    if n == 0 {
        return Ok(1.0);
    }
    let xi = |i: usize| Generator::odd(i as u32 + 1);
    let mut s = GradedExpr::zero();
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            s = &s + &GradedExpr::monomial(&[xi(i), xi(j)], -0.5 * v);
        }
    }
    let order: Vec<Generator> = (0..n).rev().map(xi).collect();
    let pf = berezin_integral(&top_exponential(&s, n / 2), &order);
    let det = DMatrix::from_fn(n, n, |i, j| a[i][j]).determinant();
    if (pf * pf - det).abs() > 1e-10 * det.abs().max(1.0) {
        return Err(Error::Consistency(format!("Pf^2 = {} but det = {det}", pf * pf)));
    }
    Ok(pf)
}
