#![allow(dead_code)]

use cluster_dephasing::{ComplexMatrix, DensityMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_ish(rng: &mut impl Rng) -> f64 {
    // Sum of uniforms; the shape does not matter, only full support.
    (0..4).map(|_| rng.gen_range(-1.0..1.0)).sum::<f64>() * 0.5
}

/// Hermitian matrix with entries in [-1, 1].
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// `G G† / tr(G G†)` for a random complex `G`: full-rank mixed state.
pub fn random_density(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    let dim = 1 << n;
    let data: Vec<Complex64> = (0..dim * dim)
        .map(|_| Complex64::new(gaussian_ish(rng), gaussian_ish(rng)))
        .collect();
    let g = ComplexMatrix::from_flat(dim, data).unwrap();
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    let rho = gg.scale(Complex64::new(1.0 / tr, 0.0)).hermitian_part();
    DensityMatrix::new(rho).unwrap()
}

/// Tensor product of independent random single-qubit mixed states.
pub fn random_product_density(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    let m = (0..n).fold(ComplexMatrix::identity(1), |acc, _| {
        acc.tensor(random_density(1, rng).matrix())
    });
    DensityMatrix::new(m.hermitian_part()).unwrap()
}

/// Random single-qubit unitary `e^{ia} [[e^{ib} cos d, e^{ic} sin d], [-e^{-ic} sin d, e^{-ib} cos d]]`.
pub fn random_unitary_1q(rng: &mut impl Rng) -> ComplexMatrix {
    let a: f64 = rng.gen_range(0.0..6.3);
    let b: f64 = rng.gen_range(0.0..6.3);
    let c: f64 = rng.gen_range(0.0..6.3);
    let d: f64 = rng.gen_range(0.0..1.6);
    let e = |t: f64| Complex64::from_polar(1.0, t);
    ComplexMatrix::from_rows(&[
        vec![e(a + b) * d.cos(), e(a + c) * d.sin()],
        vec![-e(a - c) * d.sin(), e(a - b) * d.cos()],
    ])
    .unwrap()
}

/// Spectrum by nalgebra's Hermitian eigensolver, ascending.
pub fn oracle_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let dim = m.dim();
    let na = DMatrix::from_fn(dim, dim, |i, j| m[(i, j)]);
    let mut ev: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> Complex64 {
    let n = m.dim();
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(r);
            for (x, &v) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * v;
            }
        }
    }
    det
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
