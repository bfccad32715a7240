use rug::Complex;

use super::{abs_mp, from_rational, ComplexMP};
use crate::exact::RatPoly;

/// Polynomial with multiprecision complex coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    pub coeffs: Vec<ComplexMP>,
    pub prec: u32,
}

impl CPoly {
    pub fn new(prec: u32, mut coeffs: Vec<ComplexMP>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CPoly { coeffs, prec }
    }

    pub fn from_rat(prec: u32, p: &RatPoly) -> Self {
        CPoly::new(prec, p.coeffs().iter().map(|c| from_rational(prec, c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: &ComplexMP) -> ComplexMP {
        let mut acc = Complex::new(self.prec);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    /// `(p(z), p'(z))` by a single Horner pass.
    pub fn eval_with_derivative(&self, z: &ComplexMP) -> (ComplexMP, ComplexMP) {
        let mut p = Complex::new(self.prec);
        let mut dp = Complex::new(self.prec);
        for c in self.coeffs.iter().rev() {
            dp *= z;
            dp += &p;
            p *= z;
            p += c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> CPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Complex::with_val(self.prec, c * i as u32))
            .collect();
        CPoly::new(self.prec, coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> CPoly {
        let mut coeffs = vec![Complex::new(self.prec)];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(Complex::with_val(self.prec, c / (i as u32 + 1)));
        }
        CPoly::new(self.prec, coeffs)
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return CPoly::new(self.prec, vec![]);
        }
        let mut out = vec![Complex::new(self.prec); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Complex::with_val(self.prec, a * b);
            }
        }
        CPoly::new(self.prec, out)
    }

    /// `∏ (z - r)` over the given roots.
    pub fn from_roots(prec: u32, roots: &[ComplexMP]) -> CPoly {
        let mut p = CPoly::new(prec, vec![Complex::with_val(prec, 1)]);
        for r in roots {
            p = p.mul(&CPoly::new(
                prec,
                vec![Complex::with_val(prec, -r), Complex::with_val(prec, 1)],
            ));
        }
        p
    }

    pub fn scale(&self, c: &ComplexMP) -> CPoly {
        CPoly::new(
            self.prec,
            self.coeffs.iter().map(|a| Complex::with_val(self.prec, a * c)).collect(),
        )
    }

    /// `p - c`
    pub fn shift(&self, c: &ComplexMP) -> CPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(Complex::new(self.prec));
        }
        coeffs[0] -= c;
        CPoly::new(self.prec, coeffs)
    }

    /// Max-coefficient norm as `f64`.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| abs_mp(c).to_f64())
            .fold(0.0, f64::max)
    }

    pub fn set_prec(&self, prec: u32) -> CPoly {
        CPoly {
            coeffs: self.coeffs.iter().map(|c| Complex::with_val(prec, c)).collect(),
            prec,
        }
    }

    /// `self ∘ q` for an exact inner polynomial, by Horner.
    pub fn compose_rat(&self, q: &RatPoly) -> CPoly {
        let inner = CPoly::from_rat(self.prec, q);
        let mut acc = CPoly::new(self.prec, vec![]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner);
            if acc.coeffs.is_empty() {
                acc = CPoly::new(self.prec, vec![c.clone()]);
            } else {
                acc.coeffs[0] += c;
            }
        }
        acc
    }
}
