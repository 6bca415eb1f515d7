//! Dense row-major `f64` tensors and the raw kernels the tape dispatches to.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::AutodiffError;

/// Handle onto a node of a specific tape. Tape ids are globally unique, so a
/// stale handle can never silently index into the wrong tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct NodeRef {
    pub tape: u64,
    pub index: usize,
}

/// A shape-tagged real-valued array, optionally tied to a gradient tape.
///
/// Tensors own their storage; cloning copies it. The `requires_grad` flag
/// marks leaves that should accumulate gradients once watched by a tape.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    values: Vec<f64>,
    requires_grad: bool,
    pub(crate) node: Option<NodeRef>,
}

impl Tensor {
    /// Build a tensor from a shape and a flat row-major buffer.
    pub fn from_vec(shape: Vec<usize>, values: Vec<f64>) -> Result<Self, AutodiffError> {
        let expected: usize = shape.iter().product();
        if expected != values.len() {
            return Err(AutodiffError::SizeMismatch { expected, got: values.len() });
        }
        Ok(Tensor { shape, values, requires_grad: false, node: None })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        Tensor { shape, values: vec![0.0; n], requires_grad: false, node: None }
    }

    pub fn scalar(x: f64) -> Self {
        Tensor { shape: vec![], values: vec![x], requires_grad: false, node: None }
    }

    pub fn matrix(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, AutodiffError> {
        Self::from_vec(vec![rows, cols], values)
    }

    /// A 1-row matrix, the shape every pooled vector takes.
    pub fn row(values: Vec<f64>) -> Self {
        let n = values.len();
        Tensor { shape: vec![1, n], values, requires_grad: false, node: None }
    }

    /// Seeded Gaussian init with the given standard deviation.
    pub fn randn<R: Rng>(shape: Vec<usize>, std: f64, rng: &mut R) -> Self {
        let normal = Normal::new(0.0, std).expect("std must be finite and positive");
        let n: usize = shape.iter().product();
        let values = (0..n).map(|_| normal.sample(rng)).collect();
        Tensor { shape, values, requires_grad: false, node: None }
    }

    pub(crate) fn with_node(
        shape: Vec<usize>,
        values: Vec<f64>,
        requires_grad: bool,
        node: Option<NodeRef>,
    ) -> Self {
        Tensor { shape, values, requires_grad, node }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn numel(&self) -> usize {
        self.values.len()
    }

    pub fn requires_grad(&self) -> bool {
        self.requires_grad
    }

    /// Mark this tensor as a gradient leaf. Takes effect once the tensor is
    /// watched on a tape.
    pub fn requiring_grad(mut self) -> Self {
        self.requires_grad = true;
        self
    }

    /// Rows of a 2-d tensor; scalar and 1-d tensors report one row.
    pub fn rows(&self) -> usize {
        if self.shape.len() == 2 {
            self.shape[0]
        } else {
            1
        }
    }

    pub fn cols(&self) -> usize {
        match self.shape.len() {
            2 => self.shape[1],
            1 => self.shape[0],
            _ => self.values.len(),
        }
    }

    pub fn is_matrix(&self) -> bool {
        self.shape.len() == 2
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols() + col]
    }

    pub fn row_slice(&self, row: usize) -> &[f64] {
        let c = self.cols();
        &self.values[row * c..(row + 1) * c]
    }

    /// Frobenius norm of the value buffer.
    pub fn frob_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Bitwise equality of shape and values (distinguishes -0.0 from 0.0).
    pub fn bits_eq(&self, other: &Tensor) -> bool {
        self.shape == other.shape
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }

    /// Strip any tape association, keeping the values.
    pub fn detached(&self) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            values: self.values.clone(),
            requires_grad: false,
            node: None,
        }
    }

    pub(crate) fn values_mut(&mut self) -> &mut Vec<f64> {
        &mut self.values
    }
}

/// Cosine similarity of two equal-length vectors; 0.0 when either is a zero
/// vector. Clamped to [-1, 1] so downstream range invariants hold exactly.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

// ── Raw kernels ──────────────────────────────────────────────────────
//
// Shared by the tape's forward and backward passes so both paths see the
// exact same floating-point operation order.

/// c = a(m×n) · b(n×p)
pub(crate) fn matmul(a: &[f64], m: usize, n: usize, b: &[f64], p: usize) -> Vec<f64> {
    let mut c = vec![0.0; m * p];
    for i in 0..m {
        let crow = &mut c[i * p..(i + 1) * p];
        for k in 0..n {
            let aik = a[i * n + k];
            let brow = &b[k * p..(k + 1) * p];
            for (cj, bj) in crow.iter_mut().zip(brow) {
                *cj += aik * bj;
            }
        }
    }
    c
}

/// c = a(m×r) · b(k×r)^T -> m×k
pub(crate) fn matmul_nt(a: &[f64], m: usize, r: usize, b: &[f64], k: usize) -> Vec<f64> {
    let mut c = vec![0.0; m * k];
    for i in 0..m {
        let arow = &a[i * r..(i + 1) * r];
        for j in 0..k {
            let brow = &b[j * r..(j + 1) * r];
            let mut acc = 0.0;
            for (x, y) in arow.iter().zip(brow) {
                acc += x * y;
            }
            c[i * k + j] = acc;
        }
    }
    c
}

/// c = a(m×n)^T · b(m×p) -> n×p
pub(crate) fn matmul_tn(a: &[f64], m: usize, n: usize, b: &[f64], p: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * p];
    for t in 0..m {
        let brow = &b[t * p..(t + 1) * p];
        for i in 0..n {
            let ati = a[t * n + i];
            if ati == 0.0 {
                continue;
            }
            let crow = &mut c[i * p..(i + 1) * p];
            for (cj, bj) in crow.iter_mut().zip(brow) {
                *cj += ati * bj;
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn from_vec_checks_size() {
        let err = Tensor::from_vec(vec![2, 3], vec![1.0; 5]).unwrap_err();
        assert_eq!(err, AutodiffError::SizeMismatch { expected: 6, got: 5 });
    }

    #[test]
    fn scalar_has_one_element() {
        let s = Tensor::scalar(3.5);
        assert_eq!(s.numel(), 1);
        assert!(s.shape().is_empty());
    }

    #[test]
    fn randn_is_seeded() {
        let a = Tensor::randn(vec![4, 4], 0.02, &mut stream(1, "t"));
        let b = Tensor::randn(vec![4, 4], 0.02, &mut stream(1, "t"));
        assert!(a.bits_eq(&b));
    }

    #[test]
    fn cosine_bounds_and_self() {
        let v = vec![0.3, -1.2, 2.0];
        assert!((cosine(&v, &v) - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&v, &[0.0, 0.0, 0.0]), 0.0);
        let w = vec![-0.3, 1.2, -2.0];
        assert!((cosine(&v, &w) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernels_agree_on_transposed_layouts() {
        let mut rng = stream(3, "kernels");
        let a = Tensor::randn(vec![3, 4], 1.0, &mut rng);
        let b = Tensor::randn(vec![4, 5], 1.0, &mut rng);
        let c = matmul(a.values(), 3, 4, b.values(), 5);

        // a · b == a · (b^T)^T via matmul_nt on the transposed buffer.
        let mut bt = vec![0.0; 20];
        for i in 0..4 {
            for j in 0..5 {
                bt[j * 4 + i] = b.values()[i * 5 + j];
            }
        }
        let c2 = matmul_nt(a.values(), 3, 4, &bt, 5);
        for (x, y) in c.iter().zip(&c2) {
            assert!((x - y).abs() < 1e-12);
        }

        // (a^T)^T · b via matmul_tn on the transposed buffer.
        let mut at = vec![0.0; 12];
        for i in 0..3 {
            for j in 0..4 {
                at[j * 3 + i] = a.values()[i * 4 + j];
            }
        }
        let c3 = matmul_tn(&at, 4, 3, b.values(), 5);
        for (x, y) in c.iter().zip(&c3) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
