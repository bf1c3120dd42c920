use num_traits::{Float, FromPrimitive, NumCast};

/// Floating-point scalar for the complex-valued translate averages.
pub trait Scalar:
    Float + FromPrimitive + NumCast + Send + Sync + std::fmt::Debug + 'static
{
    /// Absolute slack allowed when comparing computed values against bounds.
    fn tolerance() -> Self;
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-4
    }
}
