//! JSON realization schema shared with the CLI.
//!
//! Input objects carry either the packed form `{"L": [[...]], "p": n}` or
//! the blocks `{"A": ..., "B": ..., "C": ..., "D": ...}`. Matrix entries
//! are `[re, im]` pairs; bare numbers are accepted as reals. Output floats
//! are printed with 17 significant digits so every value round-trips and
//! repeated runs are byte-identical.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::realization::{Realization, SystemMatrix};

fn entry_from_value(v: &Value) -> Result<Complex64> {
    match v {
        Value::Number(x) => x
            .as_f64()
            .map(|re| Complex64::new(re, 0.0))
            .ok_or_else(|| Error::Parse("number out of range".into())),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Parse("entry real part".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Parse("entry imaginary part".into()))?;
            Ok(Complex64::new(re, im))
        }
        _ => Err(Error::Parse(
            "matrix entry must be a number or an [re, im] pair".into(),
        )),
    }
}

pub fn matrix_from_value(v: &Value) -> Result<ComplexMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    let mut parsed: Vec<Vec<Complex64>> = Vec::with_capacity(rows.len());
    for row in rows {
        let cols = row
            .as_array()
            .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
        parsed.push(
            cols.iter()
                .map(entry_from_value)
                .collect::<Result<Vec<_>>>()?,
        );
    }
    ComplexMatrix::from_rows(&parsed)
}

pub fn matrix_to_value(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| {
                            let z = m[(i, j)];
                            json!([z.re, z.im])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Parse a realization from its JSON object form.
pub fn system_matrix_from_json(text: &str) -> Result<SystemMatrix> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    system_matrix_from_value(&v)
}

pub fn system_matrix_from_value(v: &Value) -> Result<SystemMatrix> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("top level must be a JSON object".into()))?;
    if let Some(l) = obj.get("L") {
        let p = obj
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("packed form needs an integer \"p\"".into()))?;
        return SystemMatrix::new(matrix_from_value(l)?, p as usize);
    }
    let get = |key: &str| -> Result<ComplexMatrix> {
        obj.get(key)
            .ok_or_else(|| Error::Parse(format!("missing field \"{key}\"")))
            .and_then(matrix_from_value)
    };
    let re = Realization::new(get("A")?, get("B")?, get("C")?, get("D")?)?;
    Ok(re.assemble())
}

pub fn system_matrix_to_value(sm: &SystemMatrix) -> Value {
    let mut obj = Map::new();
    obj.insert("L".into(), matrix_to_value(sm.matrix()));
    obj.insert("p".into(), Value::Number(sm.outputs().into()));
    Value::Object(obj)
}

struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        // 17 significant digits always round-trip an IEEE double.
        write!(writer, "{:.16e}", value)
    }
}

/// Serialize with sorted object keys and fixed-width floats; the output is
/// byte-identical across runs and platforms.
pub fn to_canonical_json(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
    serde::Serialize::serialize(v, &mut ser).expect("serializing JSON value");
    String::from_utf8(out).expect("JSON is UTF-8")
}
