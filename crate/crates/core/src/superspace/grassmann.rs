use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{KvnError, Result};

/// Element of the exterior algebra over `generator_count` ordered odd
/// generators. Monomials are bitmasks; bit `i` is generator `i`, and a
/// monomial is understood with its generators sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannElement {
    gens: usize,
    terms: BTreeMap<u64, Complex64>,
}

/// Sign of `m_a * m_b` after sorting to canonical order, or 0 if they share
/// a generator.
pub fn monomial_sign(a: u64, b: u64) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl GrassmannElement {
    pub fn zero(gens: usize) -> Self {
        assert!(gens <= 64, "at most 64 generators are supported");
        GrassmannElement { gens, terms: BTreeMap::new() }
    }

    pub fn scalar(gens: usize, z: impl Into<Complex64>) -> Self {
        let mut e = GrassmannElement::zero(gens);
        e.add_term(0, z.into());
        e
    }

    pub fn one(gens: usize) -> Self {
        GrassmannElement::scalar(gens, 1.0)
    }

    pub fn generator(gens: usize, index: usize) -> Result<Self> {
        if index >= gens {
            return Err(KvnError::InvalidParameter(format!(
                "generator {index} out of range for {gens} generators"
            )));
        }
        let mut e = GrassmannElement::zero(gens);
        e.add_term(1u64 << index, Complex64::new(1.0, 0.0));
        Ok(e)
    }

    /// Monomial with the listed generators multiplied left to right.
    pub fn monomial(gens: usize, indices: &[usize], coeff: impl Into<Complex64>) -> Result<Self> {
        let mut e = GrassmannElement::scalar(gens, coeff);
        for &i in indices {
            e = e.gmul(&GrassmannElement::generator(gens, i)?)?;
        }
        Ok(e)
    }

    pub fn generator_count(&self) -> usize {
        self.gens
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coefficient(&self, mask: u64) -> Complex64 {
        self.terms.get(&mask).copied().unwrap_or_default()
    }

    pub fn body(&self) -> Complex64 {
        self.coefficient(0)
    }

    pub fn add_term(&mut self, mask: u64, c: Complex64) {
        assert!(self.gens == 64 || mask >> self.gens == 0, "monomial outside generator range");
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let slot = self.terms.entry(mask).or_default();
        *slot += c;
        if *slot == Complex64::new(0.0, 0.0) {
            self.terms.remove(&mask);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 1)
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        let mut out = GrassmannElement::zero(self.gens);
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.gens != o.gens {
            return Err(KvnError::GeneratorMismatch(self.gens, o.gens));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, *c);
        }
        Ok(out)
    }

    /// Graded product.
    pub fn gmul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = GrassmannElement::zero(self.gens);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let s = monomial_sign(*ma, *mb);
                if s != 0 {
                    out.add_term(ma | mb, ca * cb * s as f64);
                }
            }
        }
        Ok(out)
    }

    /// Keep only monomials for which `keep` holds.
    pub fn filter(&self, keep: impl Fn(u64) -> bool) -> Self {
        let mut out = GrassmannElement::zero(self.gens);
        for (m, c) in &self.terms {
            if keep(*m) {
                out.add_term(*m, *c);
            }
        }
        out
    }

    /// Left derivative with respect to generator `g`.
    pub fn left_derivative(&self, g: usize) -> Self {
        let bit = 1u64 << g;
        let mut out = GrassmannElement::zero(self.gens);
        for (m, c) in &self.terms {
            if m & bit != 0 {
                let below = (m & (bit - 1)).count_ones();
                let s = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
                out.add_term(m & !bit, c * s);
            }
        }
        out
    }

    /// Right derivative with respect to generator `g`.
    pub fn right_derivative(&self, g: usize) -> Self {
        let bit = 1u64 << g;
        let mut out = GrassmannElement::zero(self.gens);
        for (m, c) in &self.terms {
            if m & bit != 0 {
                let above = (m >> (g + 1)).count_ones();
                let s = if above.is_multiple_of(2) { 1.0 } else { -1.0 };
                out.add_term(m & !bit, c * s);
            }
        }
        out
    }

    /// Largest coefficient modulus of `self - o`.
    pub fn distance(&self, o: &Self) -> f64 {
        (self - o).max_abs()
    }
}

impl Add for &GrassmannElement {
    type Output = GrassmannElement;
    fn add(self, o: &GrassmannElement) -> GrassmannElement {
        self.try_add(o).expect("generator count mismatch")
    }
}

impl Sub for &GrassmannElement {
    type Output = GrassmannElement;
    fn sub(self, o: &GrassmannElement) -> GrassmannElement {
        self.try_add(&o.scale(-1.0)).expect("generator count mismatch")
    }
}

impl Mul for &GrassmannElement {
    type Output = GrassmannElement;
    fn mul(self, o: &GrassmannElement) -> GrassmannElement {
        self.gmul(o).expect("generator count mismatch")
    }
}

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;
    fn neg(self) -> GrassmannElement {
        self.scale(-1.0)
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for g in 0..self.gens {
                if m >> g & 1 == 1 {
                    write!(f, "·g{g}")?;
                }
            }
        }
        Ok(())
    }
}
