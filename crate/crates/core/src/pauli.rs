//! Pauli strings and weighted sums of them.
//!
//! Qubit 0 is the leftmost tensor factor, so it is the most significant bit
//! of a computational-basis index.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64, I, ONE, ZERO};
use crate::state::QuantumState;

/// Largest register that `to_dense` will materialize.
pub const DENSE_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Single-qubit product `self * other` as a phase and a letter.
    pub fn mul(self, other: Pauli) -> (C64, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (ONE, p),
            (X, X) | (Y, Y) | (Z, Z) => (ONE, I),
            (X, Y) => (I_UNIT, Z),
            (Y, X) => (-I_UNIT, Z),
            (Y, Z) => (I_UNIT, X),
            (Z, Y) => (-I_UNIT, X),
            (Z, X) => (I_UNIT, Y),
            (X, Z) => (-I_UNIT, Y),
        }
    }
}

const I_UNIT: C64 = I;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString { letters }
    }

    pub fn identity(n: usize) -> Self {
        PauliString { letters: vec![Pauli::I; n] }
    }

    /// A string that is the identity except at the listed qubits.
    pub fn with_ops(n: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut letters = vec![Pauli::I; n];
        for &(q, p) in ops {
            if q >= n {
                return Err(Error::QubitIndex { index: q, n });
            }
            letters[q] = p;
        }
        Ok(PauliString { letters })
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn y_count(&self) -> usize {
        self.letters.iter().filter(|&&p| p == Pauli::Y).count()
    }

    /// Product of two strings on the same register.
    pub fn mul(&self, other: &PauliString) -> (C64, PauliString) {
        let mut phase = ONE;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (ph, p) = a.mul(b);
                phase *= ph;
                p
            })
            .collect();
        (phase, PauliString { letters })
    }

    pub(crate) fn masks(&self) -> BitAction {
        let n = self.letters.len();
        let mut flip = 0usize;
        let mut sign = 0usize;
        for (q, &p) in self.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    sign |= bit;
                }
                Pauli::Z => sign |= bit,
            }
        }
        let phase = match self.y_count() % 4 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
        BitAction { flip, sign, phase }
    }

    /// Acts on a state vector: returns `P |psi>`.
    pub fn apply(&self, psi: &CVector) -> CVector {
        let act = self.masks();
        let mut out = CVector::zeros(psi.len());
        for (b, &amp) in psi.iter().enumerate() {
            out[b ^ act.flip] = act.coefficient(b) * amp;
        }
        out
    }
}

/// How a Pauli string moves a basis state: `P|b> = coefficient(b) |b ^ flip>`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct BitAction {
    pub flip: usize,
    pub sign: usize,
    pub phase: C64,
}

impl BitAction {
    #[inline]
    pub fn coefficient(&self, b: usize) -> C64 {
        if (b & self.sign).count_ones() % 2 == 1 {
            -self.phase
        } else {
            self.phase
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| {
                Pauli::from_char(c).ok_or_else(|| Error::Invalid(format!("bad Pauli letter {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Invalid("empty Pauli string".into()));
        }
        Ok(PauliString { letters })
    }
}

/// A Hermitian operator `sum_k a_k P_k` with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliString, f64>,
}

impl PauliSum {
    pub fn new(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * p`, merging with an existing identical string.
    pub fn add_term(&mut self, p: PauliString, coeff: f64) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::Dimension { expected: self.n, got: p.num_qubits() });
        }
        if !coeff.is_finite() {
            return Err(Error::Invalid(format!("non-finite coefficient {coeff}")));
        }
        *self.terms.entry(p).or_insert(0.0) += coeff;
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, f64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn coefficient(&self, p: &PauliString) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    /// Drops terms whose magnitude is at most `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.abs() > tol);
    }

    pub fn scaled(&self, s: f64) -> PauliSum {
        PauliSum { n: self.n, terms: self.terms.iter().map(|(p, &c)| (p.clone(), c * s)).collect() }
    }

    pub fn plus(&self, other: &PauliSum) -> Result<PauliSum> {
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.add_term(p.clone(), c)?;
        }
        Ok(out)
    }

    /// Sum of absolute coefficients, an upper bound on the spectral norm.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// True when every string is made of I and Z only.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|p| p.letters().iter().all(|&l| l == Pauli::I || l == Pauli::Z))
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        self.to_dense_capped(DENSE_CAP)
    }

    pub fn to_dense_capped(&self, cap: usize) -> Result<CMatrix> {
        if self.n > cap {
            return Err(Error::SizeCap { what: "dense operator", n: self.n, cap });
        }
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for (p, c) in self.terms() {
            let act = p.masks();
            for b in 0..dim {
                m[(b ^ act.flip, b)] += act.coefficient(b) * c;
            }
        }
        Ok(m)
    }

    /// `H |psi>` without forming the matrix.
    pub fn apply(&self, psi: &CVector) -> Result<CVector> {
        let dim = 1usize << self.n;
        if psi.len() != dim {
            return Err(Error::Dimension { expected: dim, got: psi.len() });
        }
        let mut out = CVector::zeros(dim);
        for (p, c) in self.terms() {
            let act = p.masks();
            for (b, &amp) in psi.iter().enumerate() {
                out[b ^ act.flip] += act.coefficient(b) * amp * c;
            }
        }
        Ok(out)
    }

    /// `<psi|H|psi>` for a (not necessarily normalized) vector.
    pub fn expectation_vector(&self, psi: &CVector) -> Result<f64> {
        let dim = 1usize << self.n;
        if psi.len() != dim {
            return Err(Error::Dimension { expected: dim, got: psi.len() });
        }
        let mut total = 0.0;
        for (p, c) in self.terms() {
            let act = p.masks();
            let mut acc = ZERO;
            for (b, &amp) in psi.iter().enumerate() {
                acc += psi[b ^ act.flip].conj() * act.coefficient(b) * amp;
            }
            total += c * acc.re;
        }
        Ok(total)
    }

    /// `tr(rho H)`.
    pub fn expectation(&self, state: &QuantumState) -> Result<f64> {
        match state {
            QuantumState::Pure(psi) => self.expectation_vector(psi),
            QuantumState::Mixed(rho) => {
                let dim = 1usize << self.n;
                if rho.nrows() != dim {
                    return Err(Error::Dimension { expected: dim, got: rho.nrows() });
                }
                let mut total = 0.0;
                for (p, c) in self.terms() {
                    let act = p.masks();
                    let mut acc = ZERO;
                    for b in 0..dim {
                        acc += act.coefficient(b) * rho[(b, b ^ act.flip)];
                    }
                    total += c * acc.re;
                }
                Ok(total)
            }
        }
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, c) in self.terms() {
            writeln!(f, "{c} {p}")?;
        }
        Ok(())
    }
}

/// A sum of Pauli strings with complex coefficients.
///
/// Fermionic ladder operators map to these; only Hermitian combinations
/// convert back to a [`PauliSum`].
#[derive(Clone, Debug, PartialEq)]
pub struct QubitOperator {
    n: usize,
    terms: BTreeMap<PauliString, C64>,
}

impl QubitOperator {
    pub fn zero(n: usize) -> Self {
        QubitOperator { n, terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        let mut op = Self::zero(n);
        op.add_term(PauliString::identity(n), c);
        op
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, p: PauliString, c: C64) {
        debug_assert_eq!(p.num_qubits(), self.n);
        *self.terms.entry(p).or_insert(ZERO) += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, C64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn coefficient(&self, p: &PauliString) -> C64 {
        self.terms.get(p).copied().unwrap_or(ZERO)
    }

    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.norm() > tol);
    }

    pub fn scale(&mut self, s: C64) {
        for c in self.terms.values_mut() {
            *c *= s;
        }
    }

    pub fn add(&mut self, other: &QubitOperator) {
        for (p, c) in other.terms() {
            self.add_term(p.clone(), c);
        }
    }

    pub fn mul(&self, other: &QubitOperator) -> QubitOperator {
        let mut out = QubitOperator::zero(self.n);
        for (pa, ca) in self.terms() {
            for (pb, cb) in other.terms() {
                let (ph, p) = pa.mul(pb);
                out.add_term(p, ca * cb * ph);
            }
        }
        out
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        if self.n > DENSE_CAP {
            return Err(Error::SizeCap { what: "dense operator", n: self.n, cap: DENSE_CAP });
        }
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for (p, c) in self.terms() {
            let act = p.masks();
            for b in 0..dim {
                m[(b ^ act.flip, b)] += act.coefficient(b) * c;
            }
        }
        Ok(m)
    }

    /// Real-coefficient form, failing if any imaginary part exceeds `tol`.
    pub fn to_hermitian(&self, tol: f64) -> Result<PauliSum> {
        let worst = self.terms.values().fold(0.0f64, |a, c| a.max(c.im.abs()));
        if worst > tol {
            return Err(Error::NotHermitian(worst));
        }
        let mut out = PauliSum::new(self.n);
        for (p, c) in self.terms() {
            if c.re != 0.0 {
                out.add_term(p.clone(), c.re)?;
            }
        }
        out.prune(tol);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(p: Pauli) -> CMatrix {
        let (a, b, c, d) = match p {
            Pauli::I => (ONE, ZERO, ZERO, ONE),
            Pauli::X => (ZERO, ONE, ONE, ZERO),
            Pauli::Y => (ZERO, -I, I, ZERO),
            Pauli::Z => (ONE, ZERO, ZERO, -ONE),
        };
        CMatrix::from_row_slice(2, 2, &[a, b, c, d])
    }

    fn kron_oracle(s: &PauliString) -> CMatrix {
        s.letters().iter().fold(CMatrix::from_element(1, 1, ONE), |acc, &p| acc.kronecker(&single(p)))
    }

    #[test]
    fn dense_matches_kronecker_products() {
        for text in ["XYZ", "IYI", "ZZI", "YXIZ", "IIII"] {
            let p: PauliString = text.parse().unwrap();
            let mut h = PauliSum::new(p.num_qubits());
            h.add_term(p.clone(), 0.7).unwrap();
            let d = h.to_dense().unwrap();
            assert!((d - kron_oracle(&p).scale(0.7)).norm() < 1e-14, "{text}");
        }
    }

    #[test]
    fn zz_matrix_is_diagonal_with_expected_signs() {
        let mut h = PauliSum::new(2);
        h.add_term("ZZ".parse().unwrap(), 1.0).unwrap();
        let d = h.to_dense().unwrap();
        let diag: Vec<f64> = (0..4).map(|i| d[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn products_follow_pauli_algebra() {
        let x: PauliString = "X".parse().unwrap();
        let y: PauliString = "Y".parse().unwrap();
        let (ph, p) = x.mul(&y);
        assert_eq!(p.to_string(), "Z");
        assert_eq!(ph, I);
        let a: PauliString = "XZY".parse().unwrap();
        let b: PauliString = "YZX".parse().unwrap();
        let (ph, p) = a.mul(&b);
        let lhs = kron_oracle(&a) * kron_oracle(&b);
        assert!((lhs - kron_oracle(&p) * ph).norm() < 1e-14);
    }

    #[test]
    fn out_of_range_index_rejected() {
        assert!(PauliString::with_ops(2, &[(2, Pauli::X)]).is_err());
        let mut h = PauliSum::new(2);
        assert!(h.add_term("XYZ".parse().unwrap(), 1.0).is_err());
    }

    #[test]
    fn expectation_of_mixed_matches_dense_trace() {
        let mut h = PauliSum::new(2);
        h.add_term("XY".parse().unwrap(), 0.3).unwrap();
        h.add_term("ZI".parse().unwrap(), -1.1).unwrap();
        h.add_term("YY".parse().unwrap(), 0.5).unwrap();
        let rho = CMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                C64::new(0.25, 0.0)
            } else if i < j {
                C64::new(0.02 * (i + j) as f64, 0.03)
            } else {
                C64::new(0.02 * (i + j) as f64, -0.03)
            }
        });
        let dense = h.to_dense().unwrap();
        let oracle = crate::linalg::trace(&(&rho * dense)).re;
        let got = h.expectation(&QuantumState::Mixed(rho)).unwrap();
        assert!((got - oracle).abs() < 1e-13);
    }
}
