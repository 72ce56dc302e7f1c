//! JSON/byte encodings shared by reports: complex numbers as `[re, im]`
//! pairs, spectral reports with fixed field names, and SHA-256 digests of
//! canonical little-endian float64 serializations for large arrays.

use gablab_core::mat::CMat;
use gablab_core::rdual::{BasisLabel, OrthonormalBasis, RDualWitness};
use gablab_core::spectral::SpectralReport;
use gablab_core::{Complex64, Ratio};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// `[re, im]`.
pub fn complex_to_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn vector_to_json(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|&z| complex_to_json(z)).collect())
}

/// Rows of `[re, im]` pairs.
pub fn matrix_to_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| vector_to_json(m.row(r)))
            .collect(),
    )
}

/// Exact rational as `[numerator, denominator]`.
pub fn ratio_to_json(r: Ratio<u64>) -> Value {
    json!([*r.numer(), *r.denom()])
}

/// Fixed wire format for spectral summaries.
pub fn spectral_report_to_json(r: &SpectralReport) -> Value {
    json!({
        "eigenvalues": r.eigenvalues,
        "rank": r.rank,
        "A": r.lower,
        "B": r.upper,
        "isFrame": r.is_frame,
        "isRieszSequence": r.is_riesz_sequence,
        "isTight": r.is_tight,
        "tolerance": r.tolerance,
    })
}

/// SHA-256 (hex) of the floats serialized as consecutive little-endian
/// 8-byte words, in iteration order.
pub fn hash_f64_le<I: IntoIterator<Item = f64>>(values: I) -> String {
    let mut hasher = Sha256::new();
    for x in values {
        hasher.update(x.to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

fn complex_floats(v: &[Complex64]) -> impl Iterator<Item = f64> + '_ {
    v.iter().flat_map(|z| [z.re, z.im])
}

/// Digest of a complex vector: entries interleaved `re, im`.
pub fn vector_hash(v: &[Complex64]) -> String {
    hash_f64_le(complex_floats(v))
}

/// Digest of a vector family: vectors concatenated in order.
pub fn vectors_hash(vs: &[Vec<Complex64>]) -> String {
    hash_f64_le(vs.iter().flat_map(|v| complex_floats(v)))
}

/// Digest of a matrix: row-major, entries interleaved `re, im`.
pub fn matrix_hash(m: &CMat) -> String {
    hash_f64_le((0..m.rows()).flat_map(|r| complex_floats(m.row(r))))
}

fn label_to_json(label: &BasisLabel) -> Value {
    match label {
        BasisLabel::Pair(x, xi) => json!(["pair", x.residues(), xi.residues()]),
        BasisLabel::Index(k) => json!(["index", k]),
    }
}

fn basis_to_json(basis: &OrthonormalBasis, hashes_only: bool) -> Value {
    let labels: Vec<Value> = basis.labels().iter().map(label_to_json).collect();
    if hashes_only {
        json!({ "labels": labels, "vectorsHash": vectors_hash(basis.vectors()) })
    } else {
        json!({
            "labels": labels,
            "vectors": basis.vectors().iter().map(|v| vector_to_json(v)).collect::<Vec<_>>(),
        })
    }
}

/// Serializes a finite R-dual witness. With `hashes_only` the basis vectors,
/// w-sequence and unitary matrix are replaced by SHA-256 digests of their
/// canonical little-endian float64 serializations.
pub fn witness_to_json(w: &RDualWitness, hashes_only: bool) -> Value {
    let mut out = json!({
        "hashesOnly": hashes_only,
        "eBasis": basis_to_json(&w.e_basis, hashes_only),
        "hBasis": basis_to_json(&w.h_basis, hashes_only),
        "unitaryDefect": w.unitary_defect,
        "wGramDefect": w.w_gram_defect,
        "maxResidual": w.max_residual,
    });
    let obj = out.as_object_mut().expect("witness JSON is an object");
    if hashes_only {
        obj.insert("wSequenceHash".to_string(), json!(vectors_hash(&w.w_sequence)));
        obj.insert("unitaryHash".to_string(), json!(matrix_hash(&w.unitary)));
    } else {
        obj.insert(
            "wSequence".to_string(),
            Value::Array(w.w_sequence.iter().map(|v| vector_to_json(v)).collect()),
        );
        obj.insert("unitary".to_string(), matrix_to_json(&w.unitary));
    }
    out
}
