//! Quaternionic and complex Gaussian RBF kernel spaces.
//!
//! The numerical core is generic over the scalar type [`Real`] (`f32` or
//! `f64`); the aliases at the bottom of this file fix the scalar for common use.

pub mod bases;
pub mod error;
pub mod gram;
pub mod hypercomplex;
pub mod kernels;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod spaces;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use hypercomplex::{
    apply_intrinsic, slice_decompose, star_exp, ImaginaryUnit, Quaternion, Sign, SliceDecomposition, SlicePoint,
};
pub use gram::{build_gram, psd_check, quat_matrix_to_complex, GramMatrix, KernelId, PointSet, PsdReport};
pub use kernels::{KernelParams, Normalization};
pub use quadrature::{gauss_hermite, integrate_rd, integrate_slice, QuadratureRule};
pub use scalar::Real;
pub use series::{CPowerSeries, MultiIndex, QPowerSeries};
pub use spaces::{MultiFunction, MultiSpace, SliceFunction, SliceSpace};
pub use transforms::{L2Function, L2FunctionD, RbfSbTransform, RbfSbTransformD, SbTransform};
pub use verify::{run_all, CheckReport, VerifyConfig};

pub type Quaternion64 = Quaternion<f64>;
pub type Quaternion32 = Quaternion<f32>;
pub type ImaginaryUnit64 = ImaginaryUnit<f64>;
pub type QPowerSeries64 = QPowerSeries<f64>;
pub type QPowerSeries32 = QPowerSeries<f32>;
pub type CPowerSeries64 = CPowerSeries<f64>;
pub type QuadratureRule64 = QuadratureRule<f64>;
pub type QuadratureRule32 = QuadratureRule<f32>;
pub type CPowerSeries32 = CPowerSeries<f32>;
pub type KernelParams64 = KernelParams<f64>;
pub type SliceSpace64 = SliceSpace<f64>;
pub type SliceSpace32 = SliceSpace<f32>;
pub type SliceFunction64 = SliceFunction<f64>;
pub type MultiSpace64 = MultiSpace<f64>;
pub type MultiFunction64 = MultiFunction<f64>;
pub type L2Function64 = L2Function<f64>;
pub type SbTransform64 = SbTransform<f64>;
pub type RbfSbTransform64 = RbfSbTransform<f64>;
pub type RbfSbTransformD64 = RbfSbTransformD<f64>;
pub type GramMatrix64 = GramMatrix<f64>;
pub type PointSet64 = PointSet<f64>;
