//! Self-contained certificates and their verifier.
//!
//! A certificate names its kind, carries a kind-specific JSON payload, the
//! SHA-256 digest of the inputs it was computed from, and a digest sealing
//! all three. Verification recomputes both digests and then re-checks the
//! mathematical content against the inputs, never trusting the payload.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::baker_pixley::{bp_interpolate, BPResult};
use crate::error::{Error, Result};
use crate::field::Matrix;
use crate::finite::{graph, Operation, PreservationWitness, Relation};
use crate::io;
use crate::limits::Limits;
use crate::perms::{AltCoverWitness, SymbolicCover};
use crate::ultralocal::DaggerCertificate;
use crate::simple_module::{combine, full_matrix_span, Recovery};
use crate::structure::{decompose_product, product_operation, star_operation, Decomposition, ProductUniverse};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    Dagger,
    BpTree,
    ProductDecomp,
    AltCover,
    ModuleRecovery,
    PreservationWitness,
}

impl CertKind {
    /// The inputs `verify` expects, in order.
    pub fn expected_inputs(self) -> &'static [&'static str] {
        match self {
            CertKind::Dagger => &["target operation", "fragment"],
            CertKind::BpTree => &["bp instance"],
            CertKind::ProductDecomp | CertKind::PreservationWitness => &["operation"],
            CertKind::AltCover => &[],
            CertKind::ModuleRecovery => &["module instance"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub kind: CertKind,
    pub payload: Value,
    pub inputs_digest: String,
    pub certificate_digest: String,
}

fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

/// Digest of the inputs' canonical compact serializations, in order.
pub fn inputs_digest(inputs: &[Value]) -> String {
    let texts: Vec<String> = inputs.iter().map(Value::to_string).collect();
    let parts: Vec<&[u8]> = texts.iter().map(|s| s.as_bytes()).collect();
    sha256_hex(&parts)
}

fn seal(kind: CertKind, payload: &Value, inputs_digest: &str) -> String {
    let kind = serde_json::to_string(&kind).expect("kind serializes");
    sha256_hex(&[kind.as_bytes(), payload.to_string().as_bytes(), inputs_digest.as_bytes()])
}

impl Certificate {
    pub fn new(kind: CertKind, payload: Value, inputs: &[Value]) -> Self {
        let inputs_digest = inputs_digest(inputs);
        let certificate_digest = seal(kind, &payload, &inputs_digest);
        Certificate { kind, payload, inputs_digest, certificate_digest }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("certificate serializes")
    }

    /// Compact, key-sorted JSON.
    pub fn to_json_string(&self) -> String {
        self.to_value().to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("certificate: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub valid: bool,
    pub reason: Option<String>,
}

impl VerifyReport {
    fn ok() -> Self {
        VerifyReport { valid: true, reason: None }
    }

    fn fail(reason: impl Into<String>) -> Self {
        VerifyReport { valid: false, reason: Some(reason.into()) }
    }

    pub fn to_json(&self) -> Value {
        match &self.reason {
            Some(r) => json!({ "valid": self.valid, "reason": r }),
            None => json!({ "valid": self.valid }),
        }
    }
}

/// Checks both digests, then the payload against the inputs. Malformed
/// payloads are reported as invalid, not as errors; only caps propagate.
pub fn verify(cert: &Certificate, inputs: &[Value], limits: &Limits) -> Result<VerifyReport> {
    let expected = cert.kind.expected_inputs();
    if inputs.len() != expected.len() {
        return Ok(VerifyReport::fail(format!(
            "expected {} inputs ({}), got {}",
            expected.len(),
            expected.join(", "),
            inputs.len()
        )));
    }
    if inputs_digest(inputs) != cert.inputs_digest {
        return Ok(VerifyReport::fail("inputs digest mismatch"));
    }
    if seal(cert.kind, &cert.payload, &cert.inputs_digest) != cert.certificate_digest {
        return Ok(VerifyReport::fail("certificate digest mismatch"));
    }
    match check_payload(cert.kind, &cert.payload, inputs, limits) {
        Ok(()) => Ok(VerifyReport::ok()),
        Err(e) if e.is_cap() => Err(e),
        Err(e) => Ok(VerifyReport::fail(e.to_string())),
    }
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn check_payload(kind: CertKind, p: &Value, inputs: &[Value], limits: &Limits) -> Result<()> {
    match kind {
        CertKind::Dagger => {
            let f = io::operation_from(&inputs[0], "target", None, None)?;
            let frag = io::fragment_from(&inputs[1], "fragment", limits)?;
            let cert = io::dagger_from(p, "payload", &f)?;
            cert.verify(&f, &frag).map_err(reject)
        }
        CertKind::BpTree => {
            let inst = io::bp_instance_from(&inputs[0], "instance")?;
            let r = bp_interpolate(&inst, limits)?;
            if r.table != inst.f {
                return Err(reject("interpolant differs from the target"));
            }
            if io::get(p, "table", "payload")? != &io::table_to(&r.table) {
                return Err(reject("table differs from the recomputed interpolant"));
            }
            if io::get(p, "tree", "payload")? != &r.tree.to_json() {
                return Err(reject("tree differs from the recomputed construction"));
            }
            Ok(())
        }
        CertKind::ProductDecomp => {
            let left = io::as_usize(io::get(p, "left_size", "payload")?, "payload.left_size")?;
            let right = io::as_usize(io::get(p, "right_size", "payload")?, "payload.right_size")?;
            let pu = ProductUniverse::new(&crate::Universe::new(left)?, &crate::Universe::new(right)?)?;
            let f = io::operation_from(&inputs[0], "operation", Some(pu.paired()), None)?;
            match io::get(p, "product", "payload")?.as_bool() {
                Some(true) => {
                    let g = io::operation_from(io::get(p, "left", "payload")?, "payload.left", Some(pu.left()), Some(f.arity()))?;
                    let h = io::operation_from(io::get(p, "right", "payload")?, "payload.right", Some(pu.right()), Some(f.arity()))?;
                    if product_operation(&pu, &g, &h)? != f {
                        return Err(reject("factors do not recompose to the operation"));
                    }
                    Ok(())
                }
                Some(false) => {
                    if let Decomposition::Product { .. } = decompose_product(&pu, &f)? {
                        return Err(reject("the operation does decompose"));
                    }
                    match p.get("witness") {
                        None | Some(Value::Null) => Ok(()),
                        Some(w) => {
                            let w = io::witness_from(w, "payload.witness")?;
                            if w.is_valid_for(&f, &graph(&star_operation(&pu))?) {
                                Ok(())
                            } else {
                                Err(reject("witness does not violate the graph of *"))
                            }
                        }
                    }
                }
                None => Err(reject("payload.product: expected a boolean")),
            }
        }
        CertKind::AltCover => {
            let num = |k: &str| -> Result<u64> {
                io::get(p, k, "payload")?
                    .as_u64()
                    .ok_or_else(|| reject(format!("payload.{k}: expected a natural number")))
            };
            let blocks = io::as_array(io::get(p, "blocks", "payload")?, "payload.blocks")?
                .iter()
                .enumerate()
                .map(|(i, b)| io::point_set_from(b, &format!("payload.blocks[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let mut interpolants = std::collections::BTreeMap::new();
            for (key, v) in io::as_object(io::get(p, "interpolants", "payload")?, "payload.interpolants")? {
                let family = io::family_from_key(key, "payload.interpolants")?;
                interpolants.insert(family, io::permutation_from(v, &format!("payload.interpolants.{key}"))?);
            }
            let w = AltCoverWitness {
                k: num("k")? as usize,
                a: num("a")?,
                b: num("b")?,
                cover: SymbolicCover { window: num("window")?, blocks },
                interpolants,
            };
            w.verify().map_err(reject)
        }
        CertKind::ModuleRecovery => {
            let inst = io::module_instance_from(&inputs[0], "instance")?;
            let fl = &inst.field;
            let mat = |k: &str| io::matrix_from(io::get(p, k, "payload")?, &format!("payload.{k}"), fl);
            let (t, u, result) = (mat("t")?, mat("u")?, mat("result")?);
            let s = io::as_array(io::get(p, "s", "payload")?, "payload.s")?
                .iter()
                .enumerate()
                .map(|(i, m)| io::matrix_from(m, &format!("payload.s[{i}]"), fl))
                .collect::<Result<Vec<_>>>()?;
            let n = inst.dim;
            let shapes_ok = [&t, &u, &result].iter().all(|m| m.rows() == n && m.cols() == n)
                && s.len() == inst.interpolants.len()
                && s.iter().all(|m| m.rows() == n && m.cols() == n);
            if !shapes_ok {
                return Err(reject("matrix shapes do not match the instance"));
            }
            let r0 = &inst.interpolants[0];
            let shifted: Vec<Matrix> = inst.interpolants.iter().map(|r| r.sub(fl, r0)).collect();
            let rebuilt = combine(fl, n, &vec![1; s.len()], &s.iter().zip(&shifted).map(|(a, b)| a.mul(fl, b)).collect::<Vec<_>>());
            if rebuilt != t {
                return Err(reject("t is not the sum of s_i (r_i - r_0)"));
            }
            if u.mul(fl, &t).add(fl, r0) != inst.f || result != inst.f {
                return Err(reject("u t + r_0 differs from f"));
            }
            Ok(())
        }
        CertKind::PreservationWitness => {
            let f = io::operation_from(&inputs[0], "operation", None, None)?;
            let rel = io::relation_from(io::get(p, "relation", "payload")?, "payload.relation", Some(f.universe()))?;
            let w = io::witness_from(p, "payload")?;
            if w.is_valid_for(&f, &rel) {
                Ok(())
            } else {
                Err(reject("witness does not show a preservation failure"))
            }
        }
    }
}

/// Convenience for callers holding typed values.
pub fn operation_input(op: &Operation) -> Value {
    io::operation_to(op)
}

pub fn dagger(cert: &DaggerCertificate, target: &Value, fragment: &Value) -> Certificate {
    Certificate::new(CertKind::Dagger, io::dagger_to(cert), &[target.clone(), fragment.clone()])
}

pub fn bp_tree(result: &BPResult, instance: &Value) -> Certificate {
    Certificate::new(CertKind::BpTree, result.to_json(), std::slice::from_ref(instance))
}

pub fn product_decomp(pu: &ProductUniverse, d: &Decomposition, op: &Value) -> Certificate {
    let mut payload = json!({ "left_size": pu.left().size(), "right_size": pu.right().size() });
    match d {
        Decomposition::Product { left, right } => {
            payload["product"] = json!(true);
            payload["left"] = io::table_to(left);
            payload["right"] = io::table_to(right);
        }
        Decomposition::NotProduct { witness } => {
            payload["product"] = json!(false);
            payload["witness"] = witness.as_ref().map_or(Value::Null, io::witness_to);
        }
    }
    Certificate::new(CertKind::ProductDecomp, payload, std::slice::from_ref(op))
}

pub fn alt_cover(w: &AltCoverWitness) -> Certificate {
    let interpolants: serde_json::Map<String, Value> = w
        .interpolants
        .iter()
        .map(|(k, p)| (io::family_key(k), io::permutation_to(p)))
        .collect();
    let payload = json!({
        "k": w.k, "a": w.a, "b": w.b, "window": w.cover.window,
        "blocks": w.cover.blocks, "interpolants": interpolants,
    });
    Certificate::new(CertKind::AltCover, payload, &[])
}

pub fn module_recovery(rec: &Recovery, instance: &Value) -> Certificate {
    let payload = json!({
        "s": rec.t.s.iter().map(io::matrix_to).collect::<Vec<_>>(),
        "t": io::matrix_to(&rec.t.t),
        "u": io::matrix_to(&combine(&rec.enlarged.field, rec.enlarged.dim, &rec.coefficients, &full_matrix_span(rec.enlarged.dim))),
        "result": io::matrix_to(&rec.result),
    });
    Certificate::new(CertKind::ModuleRecovery, payload, std::slice::from_ref(instance))
}

pub fn preservation(w: &PreservationWitness, rel: &Relation, op: &Value) -> Certificate {
    let mut payload = io::witness_to(w);
    payload["relation"] = json!({ "arity": rel.arity(), "tuples": rel.tuple_set() });
    Certificate::new(CertKind::PreservationWitness, payload, std::slice::from_ref(op))
}
