//! JSON encoding. Matrices are `{"re": [[..]], "im": [[..]]}` with rows in
//! the factor-major basis order; complex scalars are `{"re": .., "im": ..}`.
//! [`to_canonical_json`] fixes the float format to 17 significant digits so
//! that parsing and re-serializing is bit-exact.

use std::io;

use num_complex::Complex64;
use serde::de::{self, DeserializeOwned, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::matrix::ComplexMatrix;

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = MatrixRepr {
            re: self.rows().map(|r| r.iter().map(|z| z.re).collect()).collect(),
            im: self.rows().map(|r| r.iter().map(|z| z.im).collect()).collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        let n = repr.re.len();
        if repr.im.len() != n {
            return Err(de::Error::custom(format!(
                "re has {n} rows but im has {}",
                repr.im.len()
            )));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, (re, im)) in repr.re.iter().zip(&repr.im).enumerate() {
            if re.len() != n || im.len() != n {
                return Err(de::Error::custom(format!("row {i} is not of length {n}")));
            }
            data.extend(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)));
        }
        ComplexMatrix::from_vec(n, data).map_err(de::Error::custom)
    }
}

/// `#[serde(with = ...)]` adapter writing a complex scalar as `{"re", "im"}`.
pub mod complex_scalar {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, serializer: S) -> Result<S::Ok, S::Error> {
        Repr { re: z.re, im: z.im }.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Complex64, D::Error> {
        let r = Repr::deserialize(deserializer)?;
        Ok(Complex64::new(r.re, r.im))
    }
}

/// Compact JSON with every float written as `d.dddddddddddddddde±x`.
struct CanonicalFormatter;

impl serde_json::ser::Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> serde_json::Result<T> {
    serde_json::from_str(text)
}
