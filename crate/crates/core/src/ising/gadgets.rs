//! Penalty gadgets: small diagonal Hamiltonians whose zero-energy states are
//! exactly the assignments satisfying a two-input logical relation.
//!
//! In `σ^z` form (with `p = 1 - 2s`):
//!
//! ```text
//! OR (a, b -> o):  ¼(3 − p_a − p_b + 2p_o + p_a p_b − 2p_a p_o − 2p_b p_o)
//! AND(a, b -> o):  ¼(4 + p_a + p_b − 2p_o + 2p_a p_b − 3p_a p_o − 3p_b p_o)
//! LEQ(a <= b):     ¼(1 − p_a + p_b − p_a p_b)
//! ```

use crate::error::{Error, Result};
use crate::scalar::{spin, Scalar};
use crate::IsingModel;

/// Linear, quadratic and constant contributions of one gadget.
#[derive(Clone, Debug, PartialEq)]
pub struct GadgetTerms<T> {
    pub linear: Vec<(usize, T)>,
    pub quadratic: Vec<((usize, usize), T)>,
    pub constant: T,
}

impl<T: Scalar> GadgetTerms<T> {
    fn quarter(constant: i64, linear: &[(usize, i64)], quadratic: &[((usize, usize), i64)]) -> Self {
        Self {
            linear: linear.iter().map(|&(s, c)| (s, T::ratio(c, 4))).collect(),
            quadratic: quadratic.iter().map(|&(p, c)| (p, T::ratio(c, 4))).collect(),
            constant: T::ratio(constant, 4),
        }
    }

    /// Energy with spin values looked up through `bit`.
    pub fn energy(&self, bit: impl Fn(usize) -> bool) -> T {
        let mut e = self.constant.clone();
        for (s, c) in &self.linear {
            e = e + c.clone() * spin::<T>(bit(*s));
        }
        for ((a, b), c) in &self.quadratic {
            e = e + c.clone() * spin::<T>(bit(*a)) * spin::<T>(bit(*b));
        }
        e
    }

    /// Spins touched by this gadget, in declaration order.
    pub fn spins(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.linear.iter().map(|(s, _)| *s).collect();
        for ((a, b), _) in &self.quadratic {
            out.extend([*a, *b]);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Same terms multiplied by `factor`.
    pub fn scaled(mut self, factor: &T) -> Self {
        for (_, c) in &mut self.linear {
            *c = c.clone() * factor.clone();
        }
        for (_, c) in &mut self.quadratic {
            *c = c.clone() * factor.clone();
        }
        self.constant = self.constant * factor.clone();
        self
    }

    pub fn add_to(&self, model: &mut IsingModel<T>) -> Result<()> {
        for (s, c) in &self.linear {
            model.add_field(*s, c.clone())?;
        }
        for ((a, b), c) in &self.quadratic {
            model.add_coupling(*a, *b, c.clone())?;
        }
        model.add_offset(self.constant.clone());
        Ok(())
    }
}

fn distinct(spins: &[usize]) -> Result<()> {
    for (n, a) in spins.iter().enumerate() {
        if spins[n + 1..].contains(a) {
            return Err(Error::invalid(format!("gadget spins must be distinct, got {spins:?}")));
        }
    }
    Ok(())
}

/// Zero energy iff `a ∨ b = out`.
pub fn gadget_or<T: Scalar>(a: usize, b: usize, out: usize) -> Result<GadgetTerms<T>> {
    distinct(&[a, b, out])?;
    Ok(GadgetTerms::quarter(
        3,
        &[(a, -1), (b, -1), (out, 2)],
        &[((a, b), 1), ((a, out), -2), ((b, out), -2)],
    ))
}

/// Zero energy iff `a ∧ b = out`.
pub fn gadget_and<T: Scalar>(a: usize, b: usize, out: usize) -> Result<GadgetTerms<T>> {
    distinct(&[a, b, out])?;
    Ok(GadgetTerms::quarter(
        4,
        &[(a, 1), (b, 1), (out, -2)],
        &[((a, b), 2), ((a, out), -3), ((b, out), -3)],
    ))
}

/// Energy 1 on `(a, b) = (1, 0)`, zero otherwise.
pub fn gadget_leq<T: Scalar>(a: usize, b: usize) -> Result<GadgetTerms<T>> {
    distinct(&[a, b])?;
    Ok(GadgetTerms::quarter(1, &[(a, -1), (b, 1)], &[((a, b), -1)]))
}

/// `|1⟩⟨1|` on one spin: `½(1 − p)`.
pub fn projector_one<T: Scalar>(s: usize) -> GadgetTerms<T> {
    GadgetTerms {
        linear: vec![(s, T::ratio(-1, 2))],
        quadratic: Vec::new(),
        constant: T::ratio(1, 2),
    }
}

/// `|0⟩⟨0|` on one spin: `½(1 + p)`.
pub fn projector_zero<T: Scalar>(s: usize) -> GadgetTerms<T> {
    GadgetTerms {
        linear: vec![(s, T::ratio(1, 2))],
        quadratic: Vec::new(),
        constant: T::ratio(1, 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn eval(g: &GadgetTerms<Rational>, bits: &[bool]) -> Rational {
        g.energy(|s| bits[s])
    }

    #[test]
    fn or_examples() {
        let g = gadget_or::<Rational>(0, 1, 2).unwrap();
        assert_eq!(eval(&g, &[false, false, false]), q(0));
        assert_eq!(eval(&g, &[true, true, true]), q(0));
        assert_eq!(eval(&g, &[false, false, true]), q(1));
    }

    #[test]
    fn and_examples() {
        let g = gadget_and::<Rational>(0, 1, 2).unwrap();
        assert_eq!(eval(&g, &[false, false, false]), q(0));
        assert_eq!(eval(&g, &[true, true, true]), q(0));
        assert_eq!(eval(&g, &[true, true, false]), q(2));
    }

    #[test]
    fn leq_examples() {
        let g = gadget_leq::<Rational>(0, 1).unwrap();
        assert_eq!(eval(&g, &[true, false]), q(1));
        assert_eq!(eval(&g, &[false, false]), q(0));
        assert_eq!(eval(&g, &[true, true]), q(0));
        assert_eq!(eval(&g, &[false, true]), q(0));
    }

    #[test]
    fn projectors() {
        let one = projector_one::<Rational>(0);
        let zero = projector_zero::<Rational>(0);
        assert_eq!(eval(&one, &[true]), q(1));
        assert_eq!(eval(&one, &[false]), q(0));
        assert_eq!(eval(&zero, &[false]), q(1));
        assert_eq!(eval(&zero, &[true]), q(0));
    }

    #[test]
    fn repeated_spins_rejected() {
        assert!(gadget_or::<Rational>(0, 0, 1).is_err());
        assert!(gadget_and::<Rational>(0, 1, 1).is_err());
        assert!(gadget_leq::<Rational>(2, 2).is_err());
    }

    #[test]
    fn float_gadgets_agree() {
        let exact = gadget_and::<Rational>(0, 1, 2).unwrap();
        let float = gadget_and::<f64>(0, 1, 2).unwrap();
        for state in 0..8u32 {
            let bit = |s: usize| state >> s & 1 == 1;
            let e: f64 = float.energy(bit);
            let q = exact.energy(bit);
            assert_eq!(e, *q.numer() as f64 / *q.denom() as f64);
        }
    }
}
