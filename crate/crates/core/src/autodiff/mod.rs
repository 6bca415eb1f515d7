//! Reverse-mode automatic differentiation over dense `f64` tensors.
//!
//! The tape is define-by-run: a fresh [`Tape`] is built for every forward
//! pass, operations record themselves only when an input requires gradient,
//! and [`Tape::backward`] replays the recording in reverse. Replaying the
//! same tape twice yields bitwise-identical gradients.
//!
//! A [`Tape`] must never be shared across threads; tensors without a tape
//! handle are plain immutable values and can be shared freely.

pub mod gradcheck;
pub mod tape;
pub mod tensor;

pub use gradcheck::finite_diff_grad;
pub use tape::{Gradients, Tape};
pub use tensor::Tensor;

use std::fmt;

/// Errors raised by tensor construction and tape operations.
#[derive(Debug, Clone, PartialEq)]
pub enum AutodiffError {
    /// Binary op on incompatible shapes; names the op and both shapes.
    ShapeMismatch {
        op: &'static str,
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },
    /// Value buffer length does not match the product of the shape.
    SizeMismatch { expected: usize, got: usize },
    /// An op received a tensor of the wrong arity or an empty axis.
    BadOperand { op: &'static str, shape: Vec<usize>, expected: &'static str },
    /// `backward` was called on a non-scalar tensor.
    NonScalarLoss { shape: Vec<usize> },
    /// The loss does not belong to this tape (or was never recorded).
    LossNotOnTape,
    /// A gradient-requiring tensor was used on a tape that did not create it.
    ForeignNode { op: &'static str },
    /// A classification label was outside `0..num_classes`.
    InvalidLabel { index: usize, label: usize, num_classes: usize },
    /// Number of labels disagrees with the number of logit rows.
    LabelCount { rows: usize, labels: usize },
    /// Non-positive step size passed to the finite-difference oracle.
    InvalidStep { h: f64 },
    /// Embedding lookup index past the end of the table.
    IndexOutOfRange { index: usize, len: usize },
}

impl fmt::Display for AutodiffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ShapeMismatch { op, lhs, rhs } => {
                write!(f, "{op}: shape mismatch {lhs:?} vs {rhs:?}")
            }
            Self::SizeMismatch { expected, got } => {
                write!(f, "value buffer has {got} elements, shape requires {expected}")
            }
            Self::BadOperand { op, shape, expected } => {
                write!(f, "{op}: operand shape {shape:?}, expected {expected}")
            }
            Self::NonScalarLoss { shape } => {
                write!(f, "backward requires a scalar loss, got shape {shape:?}")
            }
            Self::LossNotOnTape => write!(f, "loss was not recorded on this tape"),
            Self::ForeignNode { op } => {
                write!(f, "{op}: gradient-requiring tensor belongs to a different tape")
            }
            Self::InvalidLabel { index, label, num_classes } => {
                write!(f, "label {label} at position {index} outside 0..{num_classes}")
            }
            Self::LabelCount { rows, labels } => {
                write!(f, "{labels} labels for {rows} logit rows")
            }
            Self::InvalidStep { h } => write!(f, "finite-difference step must be > 0, got {h}"),
            Self::IndexOutOfRange { index, len } => {
                write!(f, "lookup index {index} out of range for table of {len} rows")
            }
        }
    }
}

impl std::error::Error for AutodiffError {}
