//! Partial transposes over qubit subsets and negativity-based measures.
//!
//! Negativity here is `max(0, -λ_min)` of the partial transpose, so a
//! positive value witnesses entanglement across the cut and zero means no
//! entanglement is detected there. Values below [`ZERO_THRESHOLD`] are
//! reported as exactly zero.

use std::fmt;
use std::str::FromStr;

use crate::clusterstate::DensityMatrix;
use crate::error::{Error, Result};
use crate::qmatrix::ComplexMatrix;

/// Negativities below this are treated as zero.
pub const ZERO_THRESHOLD: f64 = 1e-9;

/// Nonempty set of 1-indexed qubits, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitSubset {
    indices: Vec<usize>,
}

impl QubitSubset {
    pub fn new(indices: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let subset = Self::unchecked(indices)?;
        subset.check_range(n)?;
        Ok(subset)
    }

    /// Validates nonemptiness and distinctness only.
    fn unchecked(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        if indices.is_empty() {
            return Err(Error::InvalidMeasure("empty qubit subset".into()));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMeasure(format!("repeated qubit in {indices:?}")));
        }
        if indices[0] == 0 {
            return Err(Error::IndexOutOfRange { index: 0, n: 0 });
        }
        Ok(Self { indices })
    }

    pub fn single(q: usize, n: usize) -> Result<Self> {
        Self::new([q], n)
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.indices.last() {
            Some(&index) if index > n => Err(Error::IndexOutOfRange { index, n }),
            _ => Ok(()),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Basis-index bits of the subset for an `n`-qubit register.
    pub fn bitmask(&self, n: usize) -> usize {
        self.indices.iter().fold(0, |m, &q| m | 1 << (n - q))
    }

    /// `None` when the subset is the whole register.
    pub fn complement(&self, n: usize) -> Option<Self> {
        let rest: Vec<usize> = (1..=n).filter(|q| !self.indices.contains(q)).collect();
        (!rest.is_empty()).then_some(Self { indices: rest })
    }

    /// The subset under `q -> perm[q - 1]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut indices: Vec<usize> = self.indices.iter().map(|&q| perm[q - 1]).collect();
        indices.sort_unstable();
        Self { indices }
    }

    /// Representative of `{self, complement}`: the smaller side, or for an
    /// even split, the side containing qubit 1.
    pub fn cut_representative(&self, n: usize) -> Self {
        match self.complement(n) {
            Some(c) if c.len() < self.len() || (c.len() == self.len() && c.indices[0] == 1) => c,
            _ => self.clone(),
        }
    }
}

/// Partial transpose of a raw `2^n` matrix over `subset`: the entry
/// at `(r, c)` moves to the pair with the subset bits of `r` and `c`
/// exchanged.
pub fn partial_transpose_matrix(m: &ComplexMatrix, n: usize, subset: &QubitSubset) -> Result<ComplexMatrix> {
    if m.dim() != 1 << n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: m.dim(),
        });
    }
    subset.check_range(n)?;
    let mask = subset.bitmask(n);
    let dim = m.dim();
    let mut out = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let swapped = (r ^ c) & mask;
            out[(r ^ swapped, c ^ swapped)] = m[(r, c)];
        }
    }
    Ok(out)
}

pub fn partial_transpose(rho: &DensityMatrix, subset: &QubitSubset) -> Result<ComplexMatrix> {
    partial_transpose_matrix(rho.matrix(), rho.n(), subset)
}

/// Nonnegative negativity value; exactly zero below [`ZERO_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct NegativityValue(f64);

impl NegativityValue {
    pub const ZERO: Self = Self(0.0);

    /// Maps a smallest eigenvalue onto `max(0, -λ_min)` with the zero floor.
    pub fn from_min_eigenvalue(lambda_min: f64) -> Self {
        let v = -lambda_min;
        if v < ZERO_THRESHOLD {
            Self::ZERO
        } else {
            Self(v)
        }
    }

    fn from_raw(v: f64) -> Self {
        if v < ZERO_THRESHOLD {
            Self::ZERO
        } else {
            Self(v)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }
}

pub fn negativity(rho: &DensityMatrix, subset: &QubitSubset) -> Result<NegativityValue> {
    let pt = partial_transpose(rho, subset)?;
    Ok(NegativityValue::from_min_eigenvalue(pt.min_hermitian_eigenvalue()?))
}

/// `(N1 N2 N3)^(1/3)` for a three-qubit state.
pub fn tri_negativity(rho: &DensityMatrix) -> Result<NegativityValue> {
    if rho.n() != 3 {
        return Err(Error::WrongQubitCount {
            expected: 3,
            found: rho.n(),
        });
    }
    let mut product = 1.0;
    for q in 1..=3 {
        let nq = negativity(rho, &QubitSubset::single(q, 3)?)?;
        if nq.is_zero() {
            return Ok(NegativityValue::ZERO);
        }
        product *= nq.value();
    }
    Ok(NegativityValue::from_raw(product.cbrt()))
}

/// A named entanglement measure: `N1`, `N34`, ... for the negativity of the
/// partial transpose over the listed qubits, or `N3part` for the
/// tri-partite negativity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Cut(QubitSubset),
    TriPartite,
}

impl Measure {
    pub fn cut(indices: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        Ok(Self::Cut(QubitSubset::new(indices, n)?))
    }

    pub fn check(&self, n: usize) -> Result<()> {
        match self {
            Self::Cut(s) => s.check_range(n),
            Self::TriPartite if n == 3 => Ok(()),
            Self::TriPartite => Err(Error::WrongQubitCount {
                expected: 3,
                found: n,
            }),
        }
    }

    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<NegativityValue> {
        match self {
            Self::Cut(s) => negativity(rho, s),
            Self::TriPartite => tri_negativity(rho),
        }
    }

    /// Number of transposed qubits; `None` for the tri-partite measure.
    pub fn cut_size(&self) -> Option<usize> {
        match self {
            Self::Cut(s) => Some(s.len()),
            Self::TriPartite => None,
        }
    }

    /// `N1 ... Nn`.
    pub fn single_qubit(n: usize) -> Vec<Self> {
        (1..=n).map(|q| Self::Cut(QubitSubset { indices: vec![q] })).collect()
    }

    /// All `N_ij` with `i < j`, lexicographic.
    pub fn pairs(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                out.push(Self::Cut(QubitSubset { indices: vec![i, j] }));
            }
        }
        out
    }

    /// Every cut with at most `n/2` transposed qubits, labels kept literal
    /// (both `N12` and `N34` for four qubits), plus `N3part` for three.
    pub fn report_set(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for size in 1..=n / 2 {
            out.extend(subsets_of_size(n, size).into_iter().map(Self::Cut));
        }
        if n == 3 {
            out.push(Self::TriPartite);
        }
        out
    }

    /// One cut per `{S, complement(S)}` pair, using
    /// [`QubitSubset::cut_representative`].
    pub fn inequivalent_cuts(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for size in 1..=n / 2 {
            for s in subsets_of_size(n, size) {
                if s.cut_representative(n) == s {
                    out.push(Self::Cut(s));
                }
            }
        }
        out
    }
}

fn subsets_of_size(n: usize, size: usize) -> Vec<QubitSubset> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<QubitSubset>) {
        if cur.len() == size {
            out.push(QubitSubset { indices: cur.clone() });
            return;
        }
        for q in start..=n {
            cur.push(q);
            rec(q + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, size, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cut(s) => {
                f.write_str("N")?;
                for q in s.indices() {
                    write!(f, "{q}")?;
                }
                Ok(())
            }
            Self::TriPartite => f.write_str("N3part"),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    /// Accepts `N<digits>` with strictly ascending single-digit qubit
    /// indices, or `N3part`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidMeasure(s.to_string());
        if s == "N3part" {
            return Ok(Self::TriPartite);
        }
        let digits = s.strip_prefix('N').ok_or_else(bad)?;
        if digits.is_empty() {
            return Err(bad());
        }
        let indices = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).filter(|&d| d > 0))
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(bad)?;
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad());
        }
        Ok(Self::Cut(QubitSubset::unchecked(indices)?))
    }
}
