use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::{invert_at, ComplexMatrix};
use super::model::{StabilityCheck, TransferMatrixModel};
use crate::error::{Error, Result};

/// Anything that can be evaluated on the imaginary axis.
pub trait FrequencyResponse: Send + Sync {
    fn dim(&self) -> usize;

    /// Value at `s = jω`, `ω ≥ 0`.
    fn response(&self, omega: f64) -> Result<ComplexMatrix>;

    /// Stable-proper membership; unknown by default.
    fn stability(&self) -> StabilityCheck {
        StabilityCheck::indeterminate("stability of this response is not known")
    }
}

impl FrequencyResponse for TransferMatrixModel {
    fn dim(&self) -> usize {
        TransferMatrixModel::dim(self)
    }
    fn response(&self, omega: f64) -> Result<ComplexMatrix> {
        self.evaluate(omega)
    }
    fn stability(&self) -> StabilityCheck {
        self.is_rh_infinity()
    }
}

impl<T: FrequencyResponse + ?Sized> FrequencyResponse for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn response(&self, omega: f64) -> Result<ComplexMatrix> {
        (**self).response(omega)
    }
    fn stability(&self) -> StabilityCheck {
        (**self).stability()
    }
}

impl<T: FrequencyResponse + ?Sized> FrequencyResponse for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn response(&self, omega: f64) -> Result<ComplexMatrix> {
        (**self).response(omega)
    }
    fn stability(&self) -> StabilityCheck {
        (**self).stability()
    }
}

impl<T: FrequencyResponse + ?Sized> FrequencyResponse for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn response(&self, omega: f64) -> Result<ComplexMatrix> {
        (**self).response(omega)
    }
    fn stability(&self) -> StabilityCheck {
        (**self).stability()
    }
}

/// Frequency-independent (possibly complex) matrix.
#[derive(Clone, Debug)]
pub struct Constant(pub ComplexMatrix);

impl FrequencyResponse for Constant {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn response(&self, _omega: f64) -> Result<ComplexMatrix> {
        Ok(self.0.clone())
    }
    fn stability(&self) -> StabilityCheck {
        StabilityCheck::member("constant gain")
    }
}

/// Pointwise inverse, e.g. an impedance built from an admittance.
#[derive(Clone, Debug)]
pub struct Inverted<M>(pub M);

impl<M: FrequencyResponse> FrequencyResponse for Inverted<M> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn response(&self, omega: f64) -> Result<ComplexMatrix> {
        invert_at(&self.0.response(omega)?).map_err(|e| e.at_omega(omega))
    }
    fn stability(&self) -> StabilityCheck {
        StabilityCheck::indeterminate("stability of an inverted response is not checked")
    }
}

/// Pointwise negation.
#[derive(Clone, Debug)]
pub struct Negated<M>(pub M);

impl<M: FrequencyResponse> FrequencyResponse for Negated<M> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn response(&self, omega: f64) -> Result<ComplexMatrix> {
        Ok(-&self.0.response(omega)?)
    }
    fn stability(&self) -> StabilityCheck {
        self.0.stability()
    }
}

/// Block-diagonal stack of square responses, in the given order.
pub struct BlockDiagonal {
    blocks: Vec<Box<dyn FrequencyResponse>>,
}

impl BlockDiagonal {
    pub fn new(blocks: Vec<Box<dyn FrequencyResponse>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Dimension("block-diagonal stack needs at least one block".into()));
        }
        Ok(Self { blocks })
    }
}

impl FrequencyResponse for BlockDiagonal {
    fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }
    fn response(&self, omega: f64) -> Result<ComplexMatrix> {
        let n = self.dim();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        let mut k = 0;
        for b in &self.blocks {
            let v = b.response(omega)?;
            let d = v.dim();
            m.view_mut((k, k), (d, d)).copy_from(v.inner());
            k += d;
        }
        ComplexMatrix::new(m)
    }
    fn stability(&self) -> StabilityCheck {
        StabilityCheck::combine(self.blocks.iter().map(|b| b.stability()))
    }
}
