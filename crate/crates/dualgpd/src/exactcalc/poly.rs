use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{check_dim, scalar, ExactError, Rat};

/// Sparse polynomial over the rationals, keyed by exponent vector.
/// Zero coefficients are never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range for {nvars}");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rat::one());
        p
    }

    /// Linear form `sum c_i x_i + c0`.
    pub fn affine(coeffs: &[Rat], c0: Rat) -> Self {
        let n = coeffs.len();
        let mut p = Poly::constant(n, c0);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of `x_i` in the linear part.
    pub fn linear_coeff(&self, i: usize) -> Rat {
        let mut e = vec![0; self.nvars];
        e[i] = 1;
        self.terms.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn diff(&self, var: usize) -> Result<Self, ExactError> {
        if var >= self.nvars {
            return Err(ExactError::IndexOutOfRange { index: var, len: self.nvars });
        }
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c * Rat::from_integer(e[var].into()));
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat, ExactError> {
        check_dim(self.nvars, x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .filter(|(k, _)| **k > 0)
                    .fold(c.clone(), |acc, (k, xi)| acc * num_traits::pow(xi.clone(), *k as usize))
            })
            .sum())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::constant(self.nvars, Rat::one()), |acc, _| &acc * self)
    }

    /// Substitutes `subs[i]` for variable `i`; all substitutes share one variable count.
    pub fn compose(&self, subs: &[Poly]) -> Result<Self, ExactError> {
        check_dim(self.nvars, subs.len())?;
        let m = subs.first().map(Poly::nvars).unwrap_or(0);
        if let Some(bad) = subs.iter().find(|s| s.nvars != m) {
            return Err(ExactError::DimensionMismatch { expected: m, got: bad.nvars });
        }
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &subs[i].pow(k);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Re-embeds into a larger variable set, variable `i` becoming `offset + i`.
    pub fn shift(&self, nvars: usize, offset: usize) -> Self {
        assert!(offset + self.nvars <= nvars);
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = vec![0; nvars];
            e2[offset..offset + self.nvars].copy_from_slice(e);
            (e2, c.clone())
        });
        Poly::from_terms(nvars, terms)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", scalar::to_string(c))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcalc::{int, rat};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn power_rule() {
        let p = &(&x(2, 0) * &x(2, 0)) * &x(2, 1);
        let d = p.diff(0).unwrap();
        let expected = (&x(2, 0) * &x(2, 1)).scale(&int(2));
        assert_eq!(d, expected);
    }

    #[test]
    fn constant_and_linear_derivatives() {
        assert!(Poly::constant(2, int(5)).diff(1).unwrap().is_zero());
        let p = &x(2, 0).scale(&int(3)) + &x(2, 1);
        assert_eq!(p.diff(0).unwrap(), Poly::constant(2, int(3)));
        assert!(matches!(p.diff(2), Err(ExactError::IndexOutOfRange { .. })));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &x(1, 0) - &x(1, 0);
        assert!(p.is_zero());
        assert_eq!(p.terms().count(), 0);
    }

    #[test]
    fn evaluation_and_composition() {
        let p = &(&x(2, 0) * &x(2, 1)) + &Poly::constant(2, rat(1, 2));
        assert_eq!(p.eval(&[int(3), rat(1, 3)]).unwrap(), rat(3, 2));
        let sub = [&x(1, 0) + &Poly::constant(1, int(1)), x(1, 0).scale(&int(2))];
        let q = p.compose(&sub).unwrap();
        assert_eq!(q.eval(&[int(2)]).unwrap(), p.eval(&[int(3), int(4)]).unwrap());
    }
}
