//! Graph (cluster) states, Hadamard representations, and density matrices.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmatrix::{ComplexMatrix, HERMITIAN_TOL};

pub const MAX_CLUSTER_QUBITS: usize = 6;
pub const MIN_CLUSTER_QUBITS: usize = 2;

const NORM_TOL: f64 = 1e-9;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Qubit count plus the CZ edges of the graph. Edges are stored as
/// `(i, j)` with `1 <= i < j <= n`, sorted and deduplicated on input.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClusterSpec {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl ClusterSpec {
    /// Edges may be given in either orientation. Self loops, out-of-range
    /// endpoints and repeated edges are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if !(MIN_CLUSTER_QUBITS..=MAX_CLUSTER_QUBITS).contains(&n) {
            return Err(Error::InvalidSpec(format!(
                "qubit count {n} outside {MIN_CLUSTER_QUBITS}..={MAX_CLUSTER_QUBITS}"
            )));
        }
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            let (i, j) = if a <= b { (a, b) } else { (b, a) };
            if i == j {
                return Err(Error::InvalidSpec(format!("self loop on qubit {i}")));
            }
            if i == 0 || j > n {
                return Err(Error::InvalidSpec(format!(
                    "edge ({a}, {b}) has an endpoint outside 1..={n}"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidSpec(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(Self {
            n,
            edges: seen.into_iter().collect(),
        })
    }

    /// `(1,2), (2,3), ..., (n-1,n)`.
    pub fn linear_chain(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i, i + 1)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_linear_chain(&self) -> bool {
        self.edges.len() + 1 == self.n && self.edges.iter().all(|&(i, j)| j == i + 1)
    }
}

/// Set of qubits that receive a Hadamard. The empty mask is the basic
/// representation. Ordering is lexicographic on the ascending index list,
/// so `{} < {1} < {1,2} < {1,3} < {2}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepresentationMask {
    qubits: Vec<usize>,
}

impl RepresentationMask {
    pub fn basic() -> Self {
        Self::default()
    }

    /// Indices must be positive and distinct; they are checked against a
    /// qubit count only when the mask is applied.
    pub fn new(qubits: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for q in qubits {
            if q == 0 {
                return Err(Error::IndexOutOfRange { index: 0, n: 0 });
            }
            if !set.insert(q) {
                return Err(Error::InvalidSpec(format!("qubit {q} repeated in mask")));
            }
        }
        Ok(Self {
            qubits: set.into_iter().collect(),
        })
    }

    /// Every subset of `1..=n`, in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut masks: Vec<Self> = (0u32..(1 << n))
            .map(|bits| Self {
                qubits: (1..=n).filter(|&q| bits & (1 << (q - 1)) != 0).collect(),
            })
            .collect();
        masks.sort();
        masks
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn is_basic(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.qubits.binary_search(&q).is_ok()
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.qubits.iter().find(|&&q| q > n) {
            Some(&index) => Err(Error::IndexOutOfRange { index, n }),
            None => Ok(()),
        }
    }

    /// The mask seen through a relabeling `q -> perm[q - 1]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut qubits: Vec<usize> = self.qubits.iter().map(|&q| perm[q - 1]).collect();
        qubits.sort_unstable();
        Self { qubits }
    }

    /// `none` for the basic representation, otherwise e.g. `1,3`.
    pub fn to_arg(&self) -> String {
        if self.qubits.is_empty() {
            "none".to_string()
        } else {
            self.qubits
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl fmt::Display for RepresentationMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.qubits.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", inner.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: amplitudes.len(),
            });
        }
        let state = Self { n, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Computational basis state `|b⟩` for a basis index `b`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amplitudes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|` within `tol` of one.
    pub fn equals_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.n == other.n && (self.inner(other).norm() - 1.0).abs() <= tol
    }
}

/// `|+⟩^⊗n` followed by a CZ on every edge. Basis state `b` picks up a sign
/// `(-1)^k` with `k` the number of edges whose endpoints are both one.
pub fn build_cluster(spec: &ClusterSpec) -> StateVector {
    let n = spec.n();
    let dim = 1usize << n;
    let amp = (dim as f64).sqrt().recip();
    let amplitudes = (0..dim)
        .map(|b| {
            let flips = spec
                .edges()
                .iter()
                .filter(|&&(i, j)| bit(b, n, i) && bit(b, n, j))
                .count();
            Complex64::new(if flips % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect();
    StateVector { n, amplitudes }
}

/// Whether qubit `q` (1-indexed, qubit 1 most significant) is set in `b`.
#[inline]
pub(crate) fn bit(b: usize, n: usize, q: usize) -> bool {
    (b >> (n - q)) & 1 == 1
}

/// Applies `H` to every qubit in `mask` and identity elsewhere.
pub fn apply_hadamards(state: &StateVector, mask: &RepresentationMask) -> Result<StateVector> {
    let n = state.n;
    mask.check_range(n)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = state.amplitudes.clone();
    for &q in mask.qubits() {
        let stride = 1usize << (n - q);
        for b in 0..amps.len() {
            if b & stride == 0 {
                let (x, y) = (amps[b], amps[b | stride]);
                amps[b] = (x + y) * h;
                amps[b | stride] = (x - y) * h;
            }
        }
    }
    Ok(StateVector { n, amplitudes: amps })
}

/// Hermitian, unit-trace, positive-semidefinite matrix on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Checks all three invariants, including positivity by eigensolve.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::from_matrix_unchecked_psd(matrix)?;
        let min = rho.matrix.min_hermitian_eigenvalue()?;
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(rho)
    }

    /// Checks dimension, Hermiticity and trace but not positivity. Used on
    /// the output of channels that preserve positivity analytically.
    pub(crate) fn from_matrix_unchecked_psd(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.dim();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not one")));
        }
        Ok(Self {
            n: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn density_from_state(state: &StateVector) -> Result<DensityMatrix> {
    let norm = state.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let matrix = ComplexMatrix::outer(state.amplitudes(), state.amplitudes())?;
    Ok(DensityMatrix { n: state.n, matrix })
}

/// The representation state `H_mask |C(spec)⟩` as a density matrix.
pub fn representation_density(spec: &ClusterSpec, mask: &RepresentationMask) -> Result<DensityMatrix> {
    density_from_state(&apply_hadamards(&build_cluster(spec), mask)?)
}
