use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped on simplification.
pub const PRUNE_TOLERANCE: f64 = 1e-12;
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// A tensor product of single-qubit Paulis in symplectic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        PauliString { n, x: 0, z: 0 }
    }

    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        PauliString {
            n,
            x: x & mask,
            z: z & mask,
        }
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut s = PauliString::identity(letters.len());
        for (q, &p) in letters.iter().enumerate() {
            s.set(q, p);
        }
        s
    }

    /// Sparse constructor: `[(qubit, letter)]` on `n` qubits.
    pub fn from_sparse(n: usize, ops: &[(usize, Pauli)]) -> Self {
        let mut s = PauliString::identity(n);
        for &(q, p) in ops {
            s.set(q, p);
        }
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range");
        let (x, z) = p.bits();
        self.x = (self.x & !(1 << q)) | ((x as u64) << q);
        self.z = (self.z & !(1 << q)) | ((z as u64) << q);
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n).map(|q| self.get(q)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Product `self · other` as (i^k phase exponent, string).
    pub fn multiply(&self, other: &PauliString) -> (u8, PauliString) {
        debug_assert_eq!(self.n, other.n);
        // Phase bookkeeping per qubit, following the symplectic g-function.
        let mut k: i32 = 0;
        let mut active = self.support() & other.support();
        while active != 0 {
            let q = active.trailing_zeros();
            active &= active - 1;
            let (x1, z1) = ((self.x >> q & 1) as i32, (self.z >> q & 1) as i32);
            let (x2, z2) = ((other.x >> q & 1) as i32, (other.z >> q & 1) as i32);
            k += match (x1, z1) {
                (1, 1) => z2 - x2,
                (1, 0) => z2 * (2 * x2 - 1),
                (0, 1) => x2 * (1 - 2 * z2),
                _ => 0,
            };
        }
        (
            k.rem_euclid(4) as u8,
            PauliString {
                n: self.n,
                x: self.x ^ other.x,
                z: self.z ^ other.z,
            },
        )
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Removes the given qubits and packs the survivors in order.
    pub fn remove_qubits(&self, removed: &[usize]) -> PauliString {
        let mut out = PauliString::identity(self.n - removed.len());
        let mut j = 0;
        for q in 0..self.n {
            if removed.contains(&q) {
                continue;
            }
            out.set(j, self.get(q));
            j += 1;
        }
        out
    }
}

fn letter_rank(p: Pauli) -> u8 {
    match p {
        Pauli::I => 0,
        Pauli::X => 1,
        Pauli::Y => 2,
        Pauli::Z => 3,
    }
}

impl Ord for PauliString {
    /// Lexicographic over letters, qubit 0 first, with I < X < Y < Z.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for q in 0..self.n {
                let o = letter_rank(self.get(q)).cmp(&letter_rank(other.get(q)));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, p) in self.letters().iter().enumerate() {
            if q > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub coeff: Complex64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coeff: impl Into<Complex64>, string: PauliString) -> Self {
        PauliTerm {
            coeff: coeff.into(),
            string,
        }
    }
}

fn i_power(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Single-term product with its accumulated phase.
pub fn pauli_product(a: &PauliTerm, b: &PauliTerm) -> Result<PauliTerm> {
    if a.string.n_qubits() != b.string.n_qubits() {
        return Err(Error::QubitMismatch(a.string.n_qubits(), b.string.n_qubits()));
    }
    let (k, s) = a.string.multiply(&b.string);
    Ok(PauliTerm::new(a.coeff * b.coeff * i_power(k), s))
}

/// Weighted sum of Pauli strings in canonical form: sorted, merged, pruned.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: Vec::new() }
    }

    pub fn identity(n: usize, coeff: f64) -> Self {
        PauliSum::from_terms(n, vec![PauliTerm::new(coeff, PauliString::identity(n))])
            .expect("identity has matching width")
    }

    /// Canonicalizes arbitrary terms on `n` qubits.
    pub fn from_terms(n: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.string.n_qubits() != n) {
            return Err(Error::QubitMismatch(n, t.string.n_qubits()));
        }
        Ok(sum_simplify(&PauliSum { n, terms }))
    }

    pub fn single(coeff: impl Into<Complex64>, string: PauliString) -> Self {
        let n = string.n_qubits();
        sum_simplify(&PauliSum {
            n,
            terms: vec![PauliTerm::new(coeff, string)],
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &PauliString) -> Complex64 {
        self.terms
            .binary_search_by(|t| t.string.cmp(s))
            .map(|i| self.terms[i].coeff)
            .unwrap_or_default()
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> PauliSum {
        let c = c.into();
        sum_simplify(&PauliSum {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm::new(t.coeff * c, t.string))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n != other.n {
            return Err(Error::QubitMismatch(self.n, other.n));
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(sum_simplify(&PauliSum { n: self.n, terms }))
    }

    pub fn try_mul(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n != other.n {
            return Err(Error::QubitMismatch(self.n, other.n));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(pauli_product(a, b)?);
            }
        }
        Ok(sum_simplify(&PauliSum { n: self.n, terms }))
    }

    /// True when every coefficient is real within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coeff.im.abs() <= tol)
    }

    /// Checks that the sum is a real-coefficient observable.
    pub fn require_observable(&self) -> Result<()> {
        match self.terms.iter().find(|t| t.coeff.im.abs() > PRUNE_TOLERANCE) {
            Some(t) => Err(Error::NotObservable(t.string.to_string())),
            None => Ok(()),
        }
    }

    /// Σ_P |h_P|.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    /// Largest coefficient-wise difference against another sum.
    pub fn max_difference(&self, other: &PauliSum) -> f64 {
        match self.try_add(&other.scale(-1.0)) {
            Ok(d) => d.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        }
    }

    /// Plain-text form, one `coeff letters` line per term (real part only
    /// when the imaginary part vanishes).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            if t.coeff.im.abs() <= PRUNE_TOLERANCE {
                out.push_str(&format!("{:.12e} {}\n", t.coeff.re, t.string));
            } else {
                out.push_str(&format!("({:.12e},{:.12e}) {}\n", t.coeff.re, t.coeff.im, t.string));
            }
        }
        out
    }

    /// Parses the output of [`PauliSum::to_text`].
    pub fn from_text(text: &str) -> Result<PauliSum> {
        let mut terms = Vec::new();
        let mut n = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let c = parts.next().unwrap_or_default();
            let parse_err = |m: String| Error::Parse { line: i + 1, message: m };
            let coeff = if let Some(inner) = c.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                let (re, im) = inner
                    .split_once(',')
                    .ok_or_else(|| parse_err(format!("bad complex `{c}`")))?;
                Complex64::new(
                    re.parse().map_err(|_| parse_err(format!("bad number `{re}`")))?,
                    im.parse().map_err(|_| parse_err(format!("bad number `{im}`")))?,
                )
            } else {
                let c = c.replace('\u{2212}', "-");
                Complex64::new(c.parse().map_err(|_| parse_err(format!("bad number `{c}`")))?, 0.0)
            };
            let letters = parts
                .map(|p| {
                    let mut chars = p.chars();
                    match (chars.next().and_then(Pauli::from_symbol), chars.next()) {
                        (Some(l), None) => Ok(l),
                        _ => Err(parse_err(format!("bad letter `{p}`"))),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            match n {
                None => n = Some(letters.len()),
                Some(m) if m != letters.len() => return Err(Error::QubitMismatch(m, letters.len())),
                _ => {}
            }
            terms.push(PauliTerm::new(coeff, PauliString::from_letters(&letters)));
        }
        PauliSum::from_terms(n.unwrap_or(0), terms)
    }
}

/// Merges duplicate strings, prunes |c| < 10⁻¹², sorts lexicographically.
pub fn sum_simplify(s: &PauliSum) -> PauliSum {
    let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
    for t in &s.terms {
        *acc.entry(t.string).or_default() += t.coeff;
    }
    let terms = acc
        .into_iter()
        .filter(|(_, c)| c.norm() >= PRUNE_TOLERANCE)
        .map(|(string, coeff)| PauliTerm { coeff, string })
        .collect();
    PauliSum { n: s.n, terms }
}

impl Add for &PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: &PauliSum) -> PauliSum {
        self.try_add(rhs).expect("qubit counts must match")
    }
}

impl Sub for &PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: &PauliSum) -> PauliSum {
        self.try_add(&rhs.scale(-1.0)).expect("qubit counts must match")
    }
}

impl Mul for &PauliSum {
    type Output = PauliSum;
    fn mul(self, rhs: &PauliSum) -> PauliSum {
        self.try_mul(rhs).expect("qubit counts must match")
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(p: Pauli) -> PauliTerm {
        PauliTerm::new(1.0, PauliString::from_letters(&[p]))
    }

    #[test]
    fn x_times_y_is_i_z() {
        let r = pauli_product(&single(Pauli::X), &single(Pauli::Y)).unwrap();
        assert_eq!(r.string.get(0), Pauli::Z);
        assert_eq!(r.coeff, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn letters_are_involutions() {
        for p in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
            let r = pauli_product(&single(p), &single(p)).unwrap();
            assert!(r.string.is_identity());
            assert_eq!(r.coeff, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn mismatched_widths_fail() {
        let a = PauliTerm::new(1.0, PauliString::identity(2));
        let b = PauliTerm::new(1.0, PauliString::identity(3));
        assert!(matches!(pauli_product(&a, &b), Err(Error::QubitMismatch(2, 3))));
    }

    #[test]
    fn simplify_merges_and_prunes() {
        let zi = PauliString::from_letters(&[Pauli::Z, Pauli::I]);
        let xx = PauliString::from_letters(&[Pauli::X, Pauli::X]);
        let s = PauliSum::from_terms(
            2,
            vec![
                PauliTerm::new(0.5, xx),
                PauliTerm::new(0.25, zi),
                PauliTerm::new(0.25, zi),
                PauliTerm::new(1e-13, PauliString::identity(2)),
            ],
        )
        .unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.terms()[0].string, xx);
        assert_eq!(s.coefficient(&zi), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn text_round_trip() {
        let s = PauliSum::from_text("-0.5 Z I Z Z\n0.25 X X I I\n").unwrap();
        assert_eq!(s.n_qubits(), 4);
        assert_eq!(PauliSum::from_text(&s.to_text()).unwrap(), s);
        let unicode = PauliSum::from_text("\u{2212}0.5 Z I Z Z").unwrap();
        assert_eq!(unicode.terms()[0].coeff.re, -0.5);
    }
}
