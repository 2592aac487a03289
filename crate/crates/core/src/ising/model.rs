use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{spin, Scalar};
use crate::Rational;

/// Diagonal Ising Hamiltonian `E(s) = h·p + Σ_{i<j} J_ij p_i p_j + offset`
/// with `p = 1 - 2s`.
///
/// Bit `true` is the spin value 1 (`σ^z = -1`). The offset carries the
/// identity terms of the penalty gadgets so that operator energies are
/// reproduced exactly. Zero couplings are never stored, which keeps the
/// interaction graph honest.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingModel<T = Rational> {
    h: Vec<T>,
    couplings: BTreeMap<(usize, usize), T>,
    offset: T,
}

impl<T: Scalar> IsingModel<T> {
    pub fn new(num_spins: usize) -> Self {
        Self {
            h: vec![T::zero(); num_spins],
            couplings: BTreeMap::new(),
            offset: T::zero(),
        }
    }

    pub fn from_parts(h: Vec<T>, couplings: impl IntoIterator<Item = (usize, usize, T)>, offset: T) -> Result<Self> {
        let mut model = Self {
            h,
            couplings: BTreeMap::new(),
            offset,
        };
        for (i, j, value) in couplings {
            model.add_coupling(i, j, value)?;
        }
        Ok(model)
    }

    pub fn num_spins(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[T] {
        &self.h
    }

    pub fn offset(&self) -> &T {
        &self.offset
    }

    /// `J_ij` (zero when absent), either index order.
    pub fn coupling(&self, i: usize, j: usize) -> T {
        let key = if i < j { (i, j) } else { (j, i) };
        self.couplings.get(&key).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero couplings as `(i, j, J_ij)` with `i < j`, ascending.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.couplings.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn num_couplings(&self) -> usize {
        self.couplings.len()
    }

    pub fn add_field(&mut self, i: usize, value: T) -> Result<()> {
        let m = self.num_spins();
        let slot = self
            .h
            .get_mut(i)
            .ok_or_else(|| Error::invalid(format!("spin {i} outside 0..{m}")))?;
        *slot = slot.clone() + value;
        Ok(())
    }

    pub fn add_coupling(&mut self, i: usize, j: usize, value: T) -> Result<()> {
        if i == j {
            return Err(Error::invalid(format!("diagonal coupling on spin {i}")));
        }
        let m = self.num_spins();
        if i >= m || j >= m {
            return Err(Error::invalid(format!("coupling ({i}, {j}) outside 0..{m}")));
        }
        let key = if i < j { (i, j) } else { (j, i) };
        let total = self.couplings.remove(&key).unwrap_or_else(T::zero) + value;
        if !total.is_zero() {
            self.couplings.insert(key, total);
        }
        Ok(())
    }

    pub fn add_offset(&mut self, value: T) {
        self.offset = self.offset.clone() + value;
    }

    /// Exact operator energy of an assignment.
    pub fn energy(&self, bits: &[bool]) -> Result<T> {
        if bits.len() != self.num_spins() {
            return Err(Error::invalid(format!(
                "assignment has {} bits, model has {} spins",
                bits.len(),
                self.num_spins()
            )));
        }
        let mut e = self.offset.clone();
        for (hi, &b) in self.h.iter().zip(bits) {
            e = e + hi.clone() * spin::<T>(b);
        }
        for (&(i, j), jij) in &self.couplings {
            if bits[i] == bits[j] {
                e = e + jij.clone();
            } else {
                e = e - jij.clone();
            }
        }
        Ok(e)
    }

    /// Energy of the computational basis state whose bit `i` is spin `i`.
    pub fn energy_of_state(&self, state: u64) -> T {
        let bit = |i: usize| state >> i & 1 == 1;
        let mut e = self.offset.clone();
        for (i, hi) in self.h.iter().enumerate() {
            e = e + hi.clone() * spin::<T>(bit(i));
        }
        for (&(i, j), jij) in &self.couplings {
            if bit(i) == bit(j) {
                e = e + jij.clone();
            } else {
                e = e - jij.clone();
            }
        }
        e
    }

    /// Neighbor lists `(j, J_ij)` for every spin.
    pub fn adjacency(&self) -> Vec<Vec<(usize, T)>> {
        let mut adj = vec![Vec::new(); self.num_spins()];
        for (&(i, j), v) in &self.couplings {
            adj[i].push((j, v.clone()));
            adj[j].push((i, v.clone()));
        }
        adj
    }

    /// Applies `f` to every coefficient.
    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> IsingModel<U> {
        IsingModel {
            h: self.h.iter().map(&mut f).collect(),
            couplings: self
                .couplings
                .iter()
                .map(|(&k, v)| (k, f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            offset: f(&self.offset),
        }
    }

    /// Lossy conversion to another scalar through `f64`.
    pub fn cast<U: Scalar>(&self) -> IsingModel<U> {
        self.map(|v| U::from_f64(v.to_f64_lossy()).expect("coefficient representable"))
    }

    pub fn scaled(&self, factor: &T) -> Self {
        self.map(|v| v.clone() * factor.clone())
    }
}

fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.25"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let num: i64 = n.trim().parse().map_err(|_| bad())?;
        let den: i64 = d.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    match text.split_once('.') {
        None => text.parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
        Some((int, frac)) => {
            if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int: i64 = match int.trim_start_matches(['-', '+']) {
                "" => 0,
                digits => digits.parse().map_err(|_| bad())?,
            };
            let den = 10i64.pow(frac.len() as u32);
            let frac: i64 = frac.parse().map_err(|_| bad())?;
            let magnitude = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
            Ok(Rational::new(if negative { -magnitude } else { magnitude }, den))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct IsingFile {
    #[serde(rename = "M")]
    num_spins: usize,
    h: Vec<String>,
    #[serde(rename = "J")]
    couplings: Vec<(usize, usize, String)>,
    offset: String,
}

impl IsingModel<Rational> {
    /// Ising JSON with 0-based spin indices and `"p/q"` coefficients.
    pub fn to_json(&self) -> String {
        let file = IsingFile {
            num_spins: self.num_spins(),
            h: self.h.iter().map(format_rational).collect(),
            couplings: self.couplings().map(|(i, j, v)| (i, j, format_rational(v))).collect(),
            offset: format_rational(&self.offset),
        };
        serde_json::to_string(&file).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: IsingFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.h.len() != file.num_spins {
            return Err(Error::Parse(format!(
                "M = {} but h has {} entries",
                file.num_spins,
                file.h.len()
            )));
        }
        let h = file.h.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        let couplings = file
            .couplings
            .iter()
            .map(|(i, j, s)| Ok((*i, *j, parse_rational(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(h, couplings, parse_rational(&file.offset)?).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_forms() {
        assert_eq!(parse_rational("1/4").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::new(-3, 2));
        assert_eq!(parse_rational("3").unwrap(), Rational::from(3));
        for bad in ["", "1/0", "a", "1.", "0.2x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn empty_model_is_offset_only() {
        let mut model = IsingModel::<Rational>::new(0);
        model.add_offset(q(3, 2));
        assert_eq!(model.energy(&[]).unwrap(), q(3, 2));
    }

    #[test]
    fn energy_checks_length() {
        let model = IsingModel::<Rational>::new(2);
        assert!(matches!(model.energy(&[true]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn couplings_reject_diagonal_and_drop_zeros() {
        let mut model = IsingModel::<Rational>::new(3);
        assert!(model.add_coupling(1, 1, q(1, 1)).is_err());
        assert!(model.add_coupling(0, 3, q(1, 1)).is_err());
        model.add_coupling(2, 0, q(1, 4)).unwrap();
        assert_eq!(model.coupling(0, 2), q(1, 4));
        model.add_coupling(0, 2, q(-1, 4)).unwrap();
        assert_eq!(model.num_couplings(), 0);
    }

    #[test]
    fn single_spin_and_ferromagnet() {
        let single = IsingModel::from_parts(vec![q(1, 1)], [], q(0, 1)).unwrap();
        assert_eq!(single.energy(&[true]).unwrap(), q(-1, 1));
        assert_eq!(single.energy(&[false]).unwrap(), q(1, 1));

        let ferro = IsingModel::from_parts(vec![q(0, 1); 2], [(0, 1, q(-1, 1))], q(0, 1)).unwrap();
        assert_eq!(ferro.energy(&[true, true]).unwrap(), q(-1, 1));
        assert_eq!(ferro.energy(&[true, false]).unwrap(), q(1, 1));
    }

    #[test]
    fn json_round_trip() {
        let model = IsingModel::from_parts(vec![q(7, 8), q(-3, 4)], [(0, 1, q(-1, 4))], q(5, 2)).unwrap();
        let text = model.to_json();
        assert_eq!(text, r#"{"M":2,"h":["7/8","-3/4"],"J":[[0,1,"-1/4"]],"offset":"5/2"}"#);
        assert_eq!(IsingModel::from_json(&text).unwrap(), model);
        assert!(IsingModel::from_json(r#"{"M":1,"h":["x"],"J":[],"offset":"0/1"}"#).is_err());
        assert!(IsingModel::from_json(r#"{"M":2,"h":["1/1"],"J":[],"offset":"0/1"}"#).is_err());
    }

    fn arb_model() -> impl Strategy<Value = (IsingModel<Rational>, Vec<bool>)> {
        (1usize..7).prop_flat_map(|m| {
            let coeff = (-16i64..16).prop_map(|n| Rational::new(n, 8));
            (
                prop::collection::vec(coeff.clone(), m),
                prop::collection::vec((0..m, 0..m, coeff.clone()), 0..10),
                coeff,
                prop::collection::vec(any::<bool>(), m),
            )
                .prop_map(|(h, js, offset, bits)| {
                    let js = js.into_iter().filter(|(i, j, _)| i != j);
                    (IsingModel::from_parts(h, js, offset).unwrap(), bits)
                })
        })
    }

    proptest! {
        #[test]
        fn scaling_scales_every_energy((model, bits) in arb_model(), num in 1i64..20, den in 1i64..20) {
            let lambda = Rational::new(num, den);
            let scaled = model.scaled(&lambda);
            prop_assert_eq!(scaled.energy(&bits).unwrap(), model.energy(&bits).unwrap() * lambda);
        }

        #[test]
        fn state_index_matches_bit_slice((model, bits) in arb_model()) {
            let state = bits.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | (b as u64) << i);
            prop_assert_eq!(model.energy_of_state(state), model.energy(&bits).unwrap());
        }
    }
}
