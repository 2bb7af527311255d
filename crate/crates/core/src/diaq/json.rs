//! JSON form `{"n": N, "diags": {"<d>": [[re, im], ...]}}`.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Diagonal, DiaqMatrix};
use crate::scalar::Scalar;

#[derive(Serialize, Deserialize)]
struct Repr {
    n: usize,
    diags: BTreeMap<String, Vec<[f64; 2]>>,
}

impl<T: Scalar> Serialize for DiaqMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
        let diags = self
            .diags
            .values()
            .map(|d| {
                let values = d.values().map(|v| [f(v.re), f(v.im)]).collect();
                (d.index().to_string(), values)
            })
            .collect();
        Repr { n: self.n, diags }.serialize(serializer)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for DiaqMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = Repr::deserialize(deserializer)?;
        let mut m = DiaqMatrix::zeros(repr.n);
        for (key, values) in repr.diags {
            let d: isize = key
                .parse()
                .map_err(|_| D::Error::custom(format!("bad diagonal index `{key}`")))?;
            let values: Vec<Complex<T>> = values
                .iter()
                .map(|[re, im]| Complex::new(T::from_f64_lossy(*re), T::from_f64_lossy(*im)))
                .collect();
            let diag = Diagonal::from_values(d, repr.n, &values).map_err(D::Error::custom)?;
            m.insert(diag).map_err(D::Error::custom)?;
        }
        Ok(m)
    }
}
