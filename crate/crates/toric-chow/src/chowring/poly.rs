//! Multivariate integer polynomials over a fixed generator list, stored
//! fully expanded with a deterministic term order (lexicographic on
//! exponent vectors, descending).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigInt,
    pub exps: Vec<u32>,
}

/// Canonical polynomial: terms sorted, like terms merged, no zero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: Vec<Term>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: vec![Term { coeff: c, exps: vec![0; nvars] }] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Poly { terms: vec![Term { coeff: BigInt::from(1), exps }] }
    }

    /// Linear form sum_i coeffs[i] * x_i.
    pub fn linear(coeffs: &[BigInt]) -> Self {
        let n = coeffs.len();
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0; n];
                exps[i] = 1;
                terms.push(Term { coeff: c.clone(), exps });
            }
        }
        let mut p = Poly { terms };
        p.normalize();
        p
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut p = Poly { terms };
        p.normalize();
        p
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nvars(&self) -> Option<usize> {
        self.terms.first().map(|t| t.exps.len())
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| b.exps.cmp(&a.exps));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.exps == t.exps => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        self.terms = merged;
    }

    /// Flip the sign so the leading coefficient is positive. Relations are
    /// stored this way so golden output is stable.
    pub fn sign_normalized(mut self) -> Self {
        if let Some(t) = self.terms.first() {
            if t.coeff.is_negative() {
                for t in &mut self.terms {
                    t.coeff = -t.coeff.clone();
                }
            }
        }
        self
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Poly::from_terms(terms)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|t| Term { coeff: -t.coeff.clone(), exps: t.exps.clone() }).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|t| Term { coeff: &t.coeff * c, exps: t.exps.clone() }).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                terms.push(Term { coeff: &a.coeff * &b.coeff, exps });
            }
        }
        Poly::from_terms(terms)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let n = self.nvars().unwrap_or(0);
        let mut acc = Poly::constant(n, BigInt::from(1));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute generator i by `images[i]`, all over the new variable
    /// set. Every image must share the same variable count.
    pub fn substitute(&self, images: &[Poly], new_nvars: usize) -> Poly {
        let mut acc = Poly::zero();
        for t in &self.terms {
            let mut m = Poly::constant(new_nvars, t.coeff.clone());
            for (i, &e) in t.exps.iter().enumerate() {
                if e > 0 {
                    m = m.mul(&images[i].pow(e));
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    /// Reinterpret over a larger generator list: old variable `i` becomes
    /// new variable `map[i]`.
    pub fn embed(&self, map: &[usize], new_nvars: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut exps = vec![0u32; new_nvars];
                for (i, &e) in t.exps.iter().enumerate() {
                    exps[map[i]] += e;
                }
                Term { coeff: t.coeff.clone(), exps }
            })
            .collect();
        Poly::from_terms(terms)
    }

    /// Degree of every term with respect to the generator degrees; errors
    /// when the polynomial is not homogeneous. The zero polynomial has no
    /// degree.
    pub fn homogeneous_degree(&self, degrees: &[BigRational]) -> Result<Option<BigRational>> {
        let mut deg: Option<BigRational> = None;
        for t in &self.terms {
            let d: BigRational = t
                .exps
                .iter()
                .enumerate()
                .map(|(i, &e)| &degrees[i] * BigRational::from(BigInt::from(e)))
                .sum();
            match &deg {
                None => deg = Some(d),
                Some(existing) if *existing != d => {
                    return Err(Error::Invalid(format!(
                        "polynomial is not homogeneous: found degrees {} and {}",
                        existing, d
                    )));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Render with generator names, e.g. `2*x1*x2 - 3*x2^2`.
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in t.exps.iter().enumerate() {
                if e == 1 {
                    factors.push(names[i].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", names[i], e));
                }
            }
            let coeff = t.coeff.abs();
            let body = if factors.is_empty() {
                coeff.to_string()
            } else if coeff == BigInt::from(1) {
                factors.join("*")
            } else {
                format!("{}*{}", coeff, factors.join("*"))
            };
            if k == 0 {
                if t.coeff.is_negative() {
                    out.push('-');
                }
            } else if t.coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_canonical_form() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.scale(&2.into()).sub(&y.scale(&3.into()));
        let q = x.scale(&2.into()).mul(&y.scale(&2.into()));
        assert_eq!(q.terms().len(), 1);
        assert_eq!(q.terms()[0].coeff, BigInt::from(4));
        let s = p.add(&p.neg());
        assert!(s.is_zero());
        let names = vec!["x1".to_string(), "x2".to_string()];
        assert_eq!(p.display(&names), "2*x1 - 3*x2");
    }

    #[test]
    fn homogeneity() {
        let one = BigRational::from(BigInt::from(1));
        let p = Poly::var(2, 0).mul(&Poly::var(2, 1)).add(&Poly::var(2, 0));
        assert!(p.homogeneous_degree(&[one.clone(), one.clone()]).is_err());
        let q = Poly::var(2, 0).sub(&Poly::var(2, 1));
        assert_eq!(q.homogeneous_degree(&[one.clone(), one]).unwrap().unwrap(), BigRational::from(BigInt::from(1)));
    }
}
