//! Variable contexts, joint-entropy coordinates and affine entropy expressions.
//!
//! Coordinate `i` of an entropic vector is the joint entropy of the variables
//! whose positions are the set bits of `i` (bit `k` is the `k`-th random
//! variable of the context). The empty set has entropy zero and carries no
//! coordinate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{to_f64, Q};

/// Largest number of random variables addressable by a `u32` bitmask.
pub const MAX_RVS: usize = 24;

/// Ordered random-variable and real-variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct VarContext {
    rvs: Vec<String>,
    reals: Vec<String>,
}

impl VarContext {
    pub fn new<S: AsRef<str>, T: AsRef<str>>(rvs: &[S], reals: &[T]) -> Result<Self> {
        let rvs: Vec<String> = rvs.iter().map(|s| s.as_ref().to_string()).collect();
        let reals: Vec<String> = reals.iter().map(|s| s.as_ref().to_string()).collect();
        if rvs.len() > MAX_RVS {
            return Err(Error::Malformed(format!(
                "at most {MAX_RVS} random variables"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for name in rvs.iter().chain(reals.iter()) {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        Ok(VarContext { rvs, reals })
    }

    /// Context with only random variables.
    pub fn rvs<S: AsRef<str>>(rvs: &[S]) -> Result<Self> {
        Self::new::<S, &str>(rvs, &[])
    }

    /// Context `X1..Xn` used when names do not matter.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        VarContext {
            rvs: names,
            reals: vec![],
        }
    }

    pub fn n(&self) -> usize {
        self.rvs.len()
    }

    pub fn rv_names(&self) -> &[String] {
        &self.rvs
    }

    pub fn real_names(&self) -> &[String] {
        &self.reals
    }

    pub fn full_mask(&self) -> u32 {
        full_mask(self.n())
    }

    pub fn rv_index(&self, name: &str) -> Option<usize> {
        self.rvs.iter().position(|v| v == name)
    }

    pub fn has_real(&self, name: &str) -> bool {
        self.reals.iter().any(|r| r == name)
    }

    pub fn mask_of<S: AsRef<str>>(&self, names: &[S]) -> Result<u32> {
        let mut m = 0u32;
        for name in names {
            let i = self
                .rv_index(name.as_ref())
                .ok_or_else(|| Error::UnknownVariable(name.as_ref().to_string()))?;
            m |= 1 << i;
        }
        Ok(m)
    }

    pub fn names_of(&self, mask: u32) -> Vec<&str> {
        (0..self.n())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.rvs[i].as_str())
            .collect()
    }

    /// A new context with `extra` random variables appended, plus the
    /// embedding of this context's coordinates into it.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Result<(VarContext, Embedding)> {
        let mut rvs = self.rvs.clone();
        rvs.extend(extra.iter().map(|s| s.as_ref().to_string()));
        let wider = VarContext::new(&rvs, &self.reals)?;
        let emb = Embedding::between(self, &wider)?;
        Ok((wider, emb))
    }

    pub fn with_reals<S: AsRef<str>>(&self, reals: &[S]) -> Result<VarContext> {
        let reals: Vec<String> = reals.iter().map(|s| s.as_ref().to_string()).collect();
        VarContext::new(&self.rvs, &reals)
    }

    pub fn check_mask(&self, bits: u32) -> Result<()> {
        if bits & !self.full_mask() != 0 {
            return Err(Error::InvalidIndex {
                bits: bits as u64,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// `H(X_S | X_T)`; an empty `S` gives the zero expression.
    pub fn entropy(&self, subset: u32, given: u32) -> Result<EntropyExpr> {
        self.check_mask(subset)?;
        self.check_mask(given)?;
        Ok(EntropyExpr::cond_entropy(subset, given))
    }

    /// `I(X_A; X_B | X_C)`.
    pub fn mutual_info(&self, a: u32, b: u32, given: u32) -> Result<EntropyExpr> {
        self.check_mask(a)?;
        self.check_mask(b)?;
        self.check_mask(given)?;
        Ok(EntropyExpr::mutual_info(a, b, given))
    }

    /// Name-based `H(names | given)`.
    pub fn h<S: AsRef<str>>(&self, names: &[S], given: &[S]) -> Result<EntropyExpr> {
        Ok(EntropyExpr::cond_entropy(
            self.mask_of(names)?,
            self.mask_of(given)?,
        ))
    }

    /// Name-based `I(a; b | given)`.
    pub fn i<S: AsRef<str>>(&self, a: &[S], b: &[S], given: &[S]) -> Result<EntropyExpr> {
        Ok(EntropyExpr::mutual_info(
            self.mask_of(a)?,
            self.mask_of(b)?,
            self.mask_of(given)?,
        ))
    }

    /// Check that every coefficient of `e` is addressable in this context.
    pub fn check_expr(&self, e: &EntropyExpr) -> Result<()> {
        for &m in e.h.keys() {
            self.check_mask(m)?;
        }
        for r in e.reals.keys() {
            if !self.has_real(r) {
                return Err(Error::UnknownVariable(r.clone()));
            }
        }
        Ok(())
    }

    /// Render an expression with this context's names.
    pub fn show(&self, e: &EntropyExpr) -> String {
        let mut parts: Vec<(Q, String)> = Vec::new();
        for (m, c) in &e.h {
            parts.push((c.clone(), format!("H({})", self.names_of(*m).join(","))));
        }
        for (r, c) in &e.reals {
            parts.push((c.clone(), r.clone()));
        }
        let mut out = String::new();
        for (i, (c, atom)) in parts.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}"));
                out.push(' ');
            }
            out.push_str(atom);
        }
        if !e.constant.is_zero() || parts.is_empty() {
            if parts.is_empty() {
                out.push_str(&format!("{}", e.constant));
            } else {
                let neg = e.constant.is_negative();
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&format!("{}", e.constant.abs()));
            }
        }
        out
    }
}

pub fn full_mask(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        (u32::MAX) >> (32 - n)
    }
}

/// A nonempty subset of `[n]` encoded as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex(u32);

impl SubsetIndex {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        if bits == 0 || bits & !full_mask(n) != 0 {
            return Err(Error::InvalidIndex {
                bits: bits as u64,
                n,
            });
        }
        Ok(SubsetIndex(bits))
    }

    pub fn from_members(members: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &m in members {
            if m >= n {
                return Err(Error::InvalidIndex {
                    bits: 1u64 << m.min(63),
                    n,
                });
            }
            bits |= 1 << m;
        }
        Self::new(bits, n)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn members(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).collect()
    }
}

/// Affine functional `sum_S c_S H(X_S) + sum_r c_r r + c_0`.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of functionals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EntropyExpr {
    h: BTreeMap<u32, Q>,
    reals: BTreeMap<String, Q>,
    constant: Q,
}

impl EntropyExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant_term(c: Q) -> Self {
        EntropyExpr {
            constant: c,
            ..Self::default()
        }
    }

    /// `H(X_S)`; the empty set contributes nothing.
    pub fn h(mask: u32) -> Self {
        let mut e = Self::zero();
        e.add_h(mask, Q::one());
        e
    }

    pub fn real(name: &str) -> Self {
        let mut e = Self::zero();
        e.add_real(name, Q::one());
        e
    }

    pub fn cond_entropy(s: u32, t: u32) -> Self {
        let mut e = Self::zero();
        e.add_h(s | t, Q::one());
        e.add_h(t, -Q::one());
        e
    }

    pub fn mutual_info(a: u32, b: u32, c: u32) -> Self {
        let mut e = Self::zero();
        e.add_h(a | c, Q::one());
        e.add_h(b | c, Q::one());
        e.add_h(a | b | c, -Q::one());
        e.add_h(c, -Q::one());
        e
    }

    pub fn add_h(&mut self, mask: u32, c: Q) {
        if mask == 0 || c.is_zero() {
            return;
        }
        let slot = self.h.entry(mask).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.h.remove(&mask);
        }
    }

    pub fn add_real(&mut self, name: &str, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.reals.entry(name.to_string()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.reals.remove(name);
        }
    }

    pub fn add_constant(&mut self, c: Q) {
        self.constant += c;
    }

    pub fn h_coeffs(&self) -> &BTreeMap<u32, Q> {
        &self.h
    }

    pub fn real_coeffs(&self) -> &BTreeMap<String, Q> {
        &self.reals
    }

    pub fn constant(&self) -> &Q {
        &self.constant
    }

    pub fn h_coeff(&self, mask: u32) -> Q {
        self.h.get(&mask).cloned().unwrap_or_else(Q::zero)
    }

    pub fn real_coeff(&self, name: &str) -> Q {
        self.reals.get(name).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_empty() && self.reals.is_empty() && self.constant.is_zero()
    }

    /// No real-variable part and no constant.
    pub fn is_pure_entropy(&self) -> bool {
        self.reals.is_empty() && self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.h.is_empty() && self.reals.is_empty()
    }

    /// Union of all masks carrying a coefficient.
    pub fn support_mask(&self) -> u32 {
        self.h.keys().fold(0, |a, m| a | m)
    }

    pub fn support_len(&self) -> usize {
        self.h.len() + self.reals.len()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        EntropyExpr {
            h: self.h.iter().map(|(m, v)| (*m, v * c)).collect(),
            reals: self.reals.iter().map(|(r, v)| (r.clone(), v * c)).collect(),
            constant: &self.constant * c,
        }
    }

    /// Apply a mask substitution to every entropy coordinate, summing
    /// coefficients that land on the same image.
    pub fn map_masks(&self, mut f: impl FnMut(u32) -> u32) -> Self {
        let mut out = EntropyExpr {
            h: BTreeMap::new(),
            reals: self.reals.clone(),
            constant: self.constant.clone(),
        };
        for (m, c) in &self.h {
            out.add_h(f(*m), c.clone());
        }
        out
    }

    /// Rename real variables.
    pub fn map_reals(&self, mut f: impl FnMut(&str) -> String) -> Self {
        let mut out = EntropyExpr {
            h: self.h.clone(),
            reals: BTreeMap::new(),
            constant: self.constant.clone(),
        };
        for (r, c) in &self.reals {
            out.add_real(&f(r), c.clone());
        }
        out
    }

    /// Drop the real-variable and constant parts.
    pub fn entropy_part(&self) -> Self {
        EntropyExpr {
            h: self.h.clone(),
            reals: BTreeMap::new(),
            constant: Q::zero(),
        }
    }

    pub fn without_real(&self, name: &str) -> Self {
        let mut e = self.clone();
        e.reals.remove(name);
        e
    }

    /// Exact evaluation at an entropic vector and real assignment.
    pub fn evaluate(&self, h: &EntropicVector, reals: &HashMap<String, f64>) -> Result<f64> {
        let mut acc = to_f64(&self.constant);
        for (m, c) in &self.h {
            let v = h.values.get(*m as usize).ok_or(Error::InvalidIndex {
                bits: *m as u64,
                n: h.n,
            })?;
            acc += to_f64(c) * v;
        }
        for (r, c) in &self.reals {
            let v = reals.get(r).ok_or_else(|| Error::MissingReal(r.clone()))?;
            acc += to_f64(c) * v;
        }
        Ok(acc)
    }

    /// Evaluate with the constant scaled by `t` (homogeneous coordinates).
    pub fn evaluate_homogeneous(&self, h: &[f64], reals: &HashMap<String, f64>, t: f64) -> f64 {
        let mut acc = to_f64(&self.constant) * t;
        for (m, c) in &self.h {
            acc += to_f64(c) * h.get(*m as usize).copied().unwrap_or(0.0);
        }
        for (r, c) in &self.reals {
            acc += to_f64(c) * reals.get(r).copied().unwrap_or(0.0);
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> Q {
        crate::rational::abs_max(
            self.h
                .values()
                .chain(self.reals.values())
                .chain(std::iter::once(&self.constant)),
        )
    }
}

impl Add<&EntropyExpr> for &EntropyExpr {
    type Output = EntropyExpr;
    fn add(self, rhs: &EntropyExpr) -> EntropyExpr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for EntropyExpr {
    type Output = EntropyExpr;
    fn add(mut self, rhs: EntropyExpr) -> EntropyExpr {
        self += &rhs;
        self
    }
}

impl AddAssign<&EntropyExpr> for EntropyExpr {
    fn add_assign(&mut self, rhs: &EntropyExpr) {
        for (m, c) in &rhs.h {
            self.add_h(*m, c.clone());
        }
        for (r, c) in &rhs.reals {
            self.add_real(r, c.clone());
        }
        self.constant += &rhs.constant;
    }
}

impl Sub<&EntropyExpr> for &EntropyExpr {
    type Output = EntropyExpr;
    fn sub(self, rhs: &EntropyExpr) -> EntropyExpr {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

impl Sub for EntropyExpr {
    type Output = EntropyExpr;
    fn sub(self, rhs: EntropyExpr) -> EntropyExpr {
        &self - &rhs
    }
}

impl Neg for &EntropyExpr {
    type Output = EntropyExpr;
    fn neg(self) -> EntropyExpr {
        self.scale(&-Q::one())
    }
}

impl Neg for EntropyExpr {
    type Output = EntropyExpr;
    fn neg(self) -> EntropyExpr {
        -&self
    }
}

impl Mul<&Q> for &EntropyExpr {
    type Output = EntropyExpr;
    fn mul(self, rhs: &Q) -> EntropyExpr {
        self.scale(rhs)
    }
}

impl fmt::Display for EntropyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 32 - self.support_mask().leading_zeros() as usize;
        f.write_str(&VarContext::numbered("X", n).show(self))
    }
}

/// Joint entropies of `n` random variables, dense over all `2^n` subsets
/// (index 0 is the empty set and always zero).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropicVector {
    pub n: usize,
    pub values: Vec<f64>,
}

impl EntropicVector {
    pub fn zeros(n: usize) -> Self {
        EntropicVector {
            n,
            values: vec![0.0; 1 << n],
        }
    }

    pub fn get(&self, mask: u32) -> f64 {
        self.values[mask as usize]
    }

    pub fn full(&self) -> f64 {
        self.values[full_mask(self.n) as usize]
    }
}

/// A finite joint distribution stored as a list of outcomes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pmf {
    pub n: usize,
    pub outcomes: Vec<(Vec<u32>, f64)>,
}

impl Pmf {
    /// Dense table in row-major order over the given alphabet sizes.
    pub fn from_table(shape: &[usize], probs: &[f64]) -> Result<Self> {
        let total: usize = shape.iter().product();
        if total != probs.len() {
            return Err(Error::MalformedPmf(format!(
                "expected {total} entries, got {}",
                probs.len()
            )));
        }
        let mut outcomes = Vec::with_capacity(total);
        for (idx, &p) in probs.iter().enumerate() {
            let mut rem = idx;
            let mut sym = vec![0u32; shape.len()];
            for k in (0..shape.len()).rev() {
                sym[k] = (rem % shape[k]) as u32;
                rem /= shape[k];
            }
            outcomes.push((sym, p));
        }
        Ok(Pmf {
            n: shape.len(),
            outcomes,
        })
    }

    /// Image of the distribution under `f`, which produces the values of
    /// the new `m` variables from an outcome.
    pub fn map(&self, m: usize, mut f: impl FnMut(&[u32]) -> Vec<u32>) -> Pmf {
        let mut acc: HashMap<Vec<u32>, f64> = HashMap::new();
        for (o, p) in &self.outcomes {
            let v = f(o);
            debug_assert_eq!(v.len(), m);
            *acc.entry(v).or_insert(0.0) += p;
        }
        let mut outcomes: Vec<_> = acc.into_iter().collect();
        outcomes.sort_by(|a, b| a.0.cmp(&b.0));
        Pmf { n: m, outcomes }
    }
}

/// All `2^n - 1` joint entropies (in bits) of a finite joint distribution.
pub fn entropic_vector_of_pmf(pmf: &Pmf) -> Result<EntropicVector> {
    let mut total = 0.0;
    for (o, p) in &pmf.outcomes {
        if !(p.is_finite() && *p >= 0.0) {
            return Err(Error::MalformedPmf(format!(
                "negative or non-finite mass {p}"
            )));
        }
        if o.len() != pmf.n {
            return Err(Error::MalformedPmf("outcome arity mismatch".into()));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(total));
    }
    let n = pmf.n;
    let mut out = EntropicVector::zeros(n);
    let mut marg: HashMap<Vec<u32>, f64> = HashMap::new();
    for mask in 1..(1u32 << n) {
        marg.clear();
        for (o, p) in &pmf.outcomes {
            if *p == 0.0 {
                continue;
            }
            let key: Vec<u32> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| o[i])
                .collect();
            *marg.entry(key).or_insert(0.0) += p;
        }
        let h: f64 = marg
            .values()
            .filter(|p| **p > 0.0)
            .map(|p| -p * p.log2())
            .sum();
        out.values[mask as usize] = h.max(0.0);
    }
    Ok(out)
}

/// Coordinate map from a context into a wider context that contains every
/// one of its random variables (matched by name).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    positions: Vec<usize>,
}

impl Embedding {
    pub fn between(from: &VarContext, to: &VarContext) -> Result<Self> {
        let positions = from
            .rv_names()
            .iter()
            .map(|n| {
                to.rv_index(n)
                    .ok_or_else(|| Error::UnknownVariable(n.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Embedding { positions })
    }

    pub fn from_positions(positions: Vec<usize>) -> Self {
        Embedding { positions }
    }

    pub fn map_mask(&self, mask: u32) -> u32 {
        self.positions
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(0, |a, (_, p)| a | 1 << p)
    }

    pub fn apply(&self, e: &EntropyExpr) -> EntropyExpr {
        e.map_masks(|m| self.map_mask(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn entropy_term_examples() {
        let ctx = VarContext::numbered("X", 2);
        let e = ctx.entropy(0b01, 0).unwrap();
        assert_eq!(e.h_coeffs().len(), 1);
        assert_eq!(e.h_coeff(0b01), q(1));
        let e = ctx.entropy(0b01, 0b10).unwrap();
        assert_eq!(e.h_coeff(0b11), q(1));
        assert_eq!(e.h_coeff(0b10), q(-1));
        assert_eq!(e.h_coeffs().len(), 2);
        assert!(ctx.entropy(0, 0b10).unwrap().is_zero());
        assert!(matches!(
            ctx.entropy(0b100, 0),
            Err(Error::InvalidIndex { .. })
        ));
    }

    #[test]
    fn mutual_info_examples() {
        let ctx = VarContext::numbered("X", 3);
        let e = ctx.mutual_info(0b001, 0b010, 0).unwrap();
        assert_eq!(e.h_coeff(0b001), q(1));
        assert_eq!(e.h_coeff(0b010), q(1));
        assert_eq!(e.h_coeff(0b011), q(-1));
        assert_eq!(e.h_coeffs().len(), 3);
        let e = ctx.mutual_info(0b001, 0b010, 0b100).unwrap();
        assert_eq!(e.h_coeff(0b101), q(1));
        assert_eq!(e.h_coeff(0b110), q(1));
        assert_eq!(e.h_coeff(0b111), q(-1));
        assert_eq!(e.h_coeff(0b100), q(-1));
        assert_eq!(ctx.mutual_info(1, 1, 0).unwrap(), EntropyExpr::h(1));
        assert!(ctx.mutual_info(1, 0b1000, 0).is_err());
    }

    #[test]
    fn pmf_examples() {
        let bit = Pmf::from_table(&[2], &[0.5, 0.5]).unwrap();
        assert!((entropic_vector_of_pmf(&bit).unwrap().get(1) - 1.0).abs() < 1e-12);
        let indep = Pmf::from_table(&[2, 2], &[0.25; 4]).unwrap();
        let h = entropic_vector_of_pmf(&indep).unwrap();
        assert_eq!((h.get(1), h.get(2), h.get(3)), (1.0, 1.0, 2.0));
        let copy = Pmf::from_table(&[2, 2], &[0.5, 0.0, 0.0, 0.5]).unwrap();
        let h = entropic_vector_of_pmf(&copy).unwrap();
        assert_eq!((h.get(1), h.get(2), h.get(3)), (1.0, 1.0, 1.0));
        assert!(matches!(
            entropic_vector_of_pmf(&Pmf::from_table(&[2], &[0.5, 0.6]).unwrap()),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn evaluate_examples() {
        let indep = Pmf::from_table(&[2, 2], &[0.25; 4]).unwrap();
        let h = entropic_vector_of_pmf(&indep).unwrap();
        let none = HashMap::new();
        assert_eq!(EntropyExpr::zero().evaluate(&h, &none).unwrap(), 0.0);
        assert_eq!(EntropyExpr::h(1).evaluate(&h, &none).unwrap(), 1.0);
        assert!(
            EntropyExpr::mutual_info(1, 2, 0)
                .evaluate(&h, &none)
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!(matches!(
            EntropyExpr::real("R").evaluate(&h, &none),
            Err(Error::MissingReal(_))
        ));
    }

    #[test]
    fn chain_rule_at_coefficient_level() {
        for s in 1u32..8 {
            for t in 0u32..8 {
                let lhs = &EntropyExpr::cond_entropy(s, t) + &EntropyExpr::h(t);
                assert_eq!(lhs, EntropyExpr::h(s | t));
            }
        }
    }

    #[test]
    fn show_uses_names() {
        let ctx = VarContext::new(&["X", "Y"], &["R"]).unwrap();
        let mut e = ctx.i(&["X"], &["Y"], &[]).unwrap();
        e.add_real("R", q(-2));
        assert_eq!(ctx.show(&e), "H(X) + H(Y) - H(X,Y) - 2 R");
    }

    #[test]
    fn embedding_by_name() {
        let small = VarContext::rvs(&["Y"]).unwrap();
        let big = VarContext::rvs(&["X", "Y"]).unwrap();
        let emb = Embedding::between(&small, &big).unwrap();
        assert_eq!(emb.apply(&EntropyExpr::h(1)), EntropyExpr::h(0b10));
    }
}
