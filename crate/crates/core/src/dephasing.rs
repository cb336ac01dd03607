//! Equal-strength single-qubit dephasing on every qubit.
//!
//! Each qubit sees the Kraus pair `K1 = diag(1, sqrt(1-p))`,
//! `K2 = diag(0, sqrt(p))`. The n-qubit channel uses all `2^n` tensor
//! products of these. Because both operators are diagonal, the channel
//! multiplies `rho[i][j]` by `(1-p)^(h/2)` where `h` is the Hamming
//! distance between the labels `i` and `j`; [`apply_dephasing_fast`] uses
//! that closed form and [`apply_dephasing_kraus`] the explicit sum.

use crate::clusterstate::DensityMatrix;
use crate::error::{Error, Result};
use crate::qmatrix::ComplexMatrix;

pub const MAX_CHANNEL_QUBITS: usize = 6;

/// Dephasing strength `p` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DephasingStrength(f64);

impl DephasingStrength {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(Error::OutOfRange(p))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Per-qubit coherence factor `sqrt(1 - p)`.
    pub fn coherence(self) -> f64 {
        (1.0 - self.0).sqrt()
    }
}

impl TryFrom<f64> for DephasingStrength {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::InvalidState("empty Kraus set".into()));
        };
        let dim = first.dim();
        if let Some(bad) = operators.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    /// `max |(Σ K†K - I)[i][j]|`.
    pub fn completeness_error(&self) -> f64 {
        let dim = self.dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for k in &self.operators {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(dim))
    }

    /// `Σ K ρ K†` on a raw matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let mut out = ComplexMatrix::zeros(rho.dim());
        for k in &self.operators {
            out = &out + &rho.conjugate_by(k)?;
        }
        Ok(out)
    }
}

pub fn kraus_pair(p: DephasingStrength) -> KrausSet {
    let k1 = ComplexMatrix::from_diag(&[1.0, p.coherence()]);
    let k2 = ComplexMatrix::from_diag(&[0.0, p.value().sqrt()]);
    KrausSet {
        operators: vec![k1, k2],
    }
}

/// All `2^n` products `K_{i1} ⊗ ... ⊗ K_{in}`. Operator `l` (0-based) takes
/// `K2` on qubit `q` when bit `n - q` of `l` is set, so qubit 1 is the
/// outermost factor and the most significant bit of `l`.
pub fn product_kraus(n: usize, p: DephasingStrength) -> Result<KrausSet> {
    if !(1..=MAX_CHANNEL_QUBITS).contains(&n) {
        return Err(Error::UnsupportedQubitCount(n));
    }
    let pair = kraus_pair(p);
    let operators = (0usize..1 << n)
        .map(|l| {
            (1..=n).fold(ComplexMatrix::identity(1), |acc, q| {
                let pick = (l >> (n - q)) & 1;
                acc.tensor(&pair.operators[pick])
            })
        })
        .collect();
    Ok(KrausSet { operators })
}

/// Reference channel: the explicit `2^n`-term Kraus sum.
pub fn apply_dephasing_kraus(rho: &DensityMatrix, p: DephasingStrength) -> Result<DensityMatrix> {
    let kraus = product_kraus(rho.n(), p)?;
    DensityMatrix::from_matrix_unchecked_psd(kraus.apply(rho.matrix())?)
}

/// Closed form of the same channel: `rho[i][j] * (1-p)^(popcount(i^j)/2)`.
pub fn apply_dephasing_fast(rho: &DensityMatrix, p: DephasingStrength) -> Result<DensityMatrix> {
    let n = rho.n();
    if !(1..=MAX_CHANNEL_QUBITS).contains(&n) {
        return Err(Error::UnsupportedQubitCount(n));
    }
    let factors = coherence_factors(n, p);
    let dim = rho.dim();
    let src = rho.matrix().as_slice();
    let mut data = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let h = (i ^ j).count_ones() as usize;
            data.push(src[i * dim + j] * factors[h]);
        }
    }
    DensityMatrix::from_matrix_unchecked_psd(ComplexMatrix::from_flat(dim, data)?)
}

/// `factors[h] = sqrt(1-p)^h` for `h = 0..=n`, by repeated multiplication.
fn coherence_factors(n: usize, p: DephasingStrength) -> Vec<f64> {
    let c = p.coherence();
    let mut factors = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    for _ in 0..=n {
        factors.push(acc);
        acc *= c;
    }
    factors
}

/// `p = 1 - exp(-kappa * tau)`.
pub fn p_from_time(kappa: f64, tau: f64) -> Result<DephasingStrength> {
    for x in [kappa, tau] {
        if !(x >= 0.0) {
            return Err(Error::NegativeArgument(x));
        }
    }
    let p = -(-kappa * tau).exp_m1();
    DephasingStrength::new(p.clamp(0.0, 1.0))
}
