//! JSON shapes shared by the library and the command line front end.

use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};

pub fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

pub fn ser_opt_complex<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    match z {
        Some(z) => ser_complex(z, s),
        None => s.serialize_none(),
    }
}

pub fn complex_json(z: Complex64) -> serde_json::Value {
    serde_json::json!({ "re": z.re, "im": z.im })
}
