//! Attractors, instars and parameter loci of the iterated function systems
//! `{−1 + λz, λz, 1 + λz}` (ternary) and `{−1 + λz, 1 + λz}` (binary), with
//! inequality certificates for boundary points of the connectivity locus.
//!
//! A parameter `λ` lies in the connectivity locus `M` when some power series
//! with coefficients in `{−1, 0, 1}` and constant term 1 vanishes at `λ`, and
//! in `M0` when such a series exists with coefficients in `{−1, 1}`.

pub mod certificate;
pub mod error;
pub mod ifs;
pub mod landmarks;
pub mod numerics;
pub mod paramspace;
pub mod series;

pub use error::{Error, Result};
pub use numerics::Complex;
pub use paramspace::ParamSet;
pub use series::{Coefficient, RationalTypeSeries};

/// Serializes a complex number as `{"re": …, "im": …}`.
pub mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Repr { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let r = Repr::deserialize(d)?;
        Ok(Complex64::new(r.re, r.im))
    }
}
