//! JSON encodings of the workbench's objects.
//!
//! Readers report the offending field as a path such as `fragment.members.2[3]`.
//! Writers produce `serde_json::Value`s whose object keys are sorted, so
//! serializing them is deterministic.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexSet;
use serde_json::{json, Map, Value};

use crate::baker_pixley::BPInstance;
use crate::clone::CloneFragment;
use crate::error::{Error, Result};
use crate::field::{FElem, FiniteField, Matrix, Subspace};
use crate::finite::{Elem, Operation, PreservationWitness, Relation, Universe};
use crate::limits::Limits;
use crate::perms::{FinSuppPermutation, Point, WindowMap};
use crate::simple_module::SubspaceCoverInstance;
use crate::ultralocal::{Cover, DaggerCertificate};

fn bad(path: &str, what: impl std::fmt::Display) -> Error {
    Error::Input(format!("{path}: {what}"))
}

/// Parses JSON text; syntax errors carry line and column.
pub fn parse_json(text: &str, source: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("{source}: {e}")))
}

pub fn get<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(path, format!("missing field `{key}`")))
}

pub fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| bad(path, "expected a non-negative integer"))
}

pub fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

pub fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(path, "expected an object"))
}

pub fn usize_list(v: &Value, path: &str) -> Result<Vec<usize>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_usize(x, &format!("{path}[{i}]")))
        .collect()
}

/// A universe: a size, or `{size, labels?}`.
pub fn universe_from(v: &Value, path: &str) -> Result<Universe> {
    if v.is_u64() {
        return Universe::new(as_usize(v, path)?);
    }
    let size = as_usize(get(v, "size", path)?, &format!("{path}.size"))?;
    match v.get("labels") {
        None | Some(Value::Null) => Universe::new(size),
        Some(l) => {
            let labels: Vec<String> = as_array(l, &format!("{path}.labels"))?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad(&format!("{path}.labels"), "expected strings")))
                .collect::<Result<_>>()?;
            if labels.len() != size {
                return Err(bad(path, "label count differs from size"));
            }
            Universe::with_labels(labels)
        }
    }
}

pub fn universe_to(u: &Universe) -> Value {
    match u.labels() {
        Some(l) => json!({ "size": u.size(), "labels": l }),
        None => json!({ "size": u.size() }),
    }
}

fn infer_size(len: usize, arity: usize, path: &str) -> Result<usize> {
    (1..=256usize)
        .find(|m| m.checked_pow(arity as u32) == Some(len))
        .ok_or_else(|| bad(path, format!("a table of length {len} fits no universe at arity {arity}")))
}

fn table_from(v: &Value, path: &str) -> Result<Vec<usize>> {
    usize_list(v, path)
}

/// An operation: `{universe?, arity, table}`, or a bare table when the
/// arity is known from context. Without a universe the size is inferred
/// from the table length.
pub fn operation_from(v: &Value, path: &str, universe: Option<&Universe>, arity: Option<usize>) -> Result<Operation> {
    let (table, arity, own_universe) = if v.is_array() {
        let arity = arity.ok_or_else(|| bad(path, "a bare table needs a known arity"))?;
        (table_from(v, path)?, arity, None)
    } else {
        let arity = as_usize(get(v, "arity", path)?, &format!("{path}.arity"))?;
        let table = table_from(get(v, "table", path)?, &format!("{path}.table"))?;
        let u = v.get("universe").map(|u| universe_from(u, &format!("{path}.universe"))).transpose()?;
        (table, arity, u)
    };
    let u = match (own_universe, universe) {
        (Some(a), Some(b)) if a.size() != b.size() => {
            return Err(bad(path, "operation universe differs from the enclosing one"))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b.clone(),
        (None, None) => Universe::new(infer_size(table.len(), arity, path)?)?,
    };
    Operation::from_values(&u, arity, &table).map_err(|e| bad(path, e))
}

pub fn operation_to(op: &Operation) -> Value {
    json!({ "universe": universe_to(op.universe()), "arity": op.arity(), "table": op.table() })
}

pub fn table_to(op: &Operation) -> Value {
    json!(op.table())
}

/// A fragment: `{universe, arity_bound, generators?}` is generated;
/// `{universe, arity_bound, members: {"1": [tables], ..}}` is taken as given.
pub fn fragment_from(v: &Value, path: &str, limits: &Limits) -> Result<CloneFragment> {
    let u = universe_from(get(v, "universe", path)?, &format!("{path}.universe"))?;
    let k = as_usize(get(v, "arity_bound", path)?, &format!("{path}.arity_bound"))?;
    if let Some(m) = v.get("members") {
        let mpath = format!("{path}.members");
        let mut members = BTreeMap::new();
        for (key, list) in as_object(m, &mpath)? {
            let arity: usize = key.parse().map_err(|_| bad(&mpath, format!("bad arity key `{key}`")))?;
            if arity == 0 || arity > k {
                return Err(bad(&mpath, format!("arity {arity} outside 1..={k}")));
            }
            let mut set = IndexSet::new();
            for (i, t) in as_array(list, &format!("{mpath}.{key}"))?.iter().enumerate() {
                set.insert(operation_from(t, &format!("{mpath}.{key}[{i}]"), Some(&u), Some(arity))?);
            }
            members.insert(arity, set);
        }
        return CloneFragment::from_members(&u, k, members);
    }
    let gens = match v.get("generators") {
        None | Some(Value::Null) => Vec::new(),
        Some(g) => as_array(g, &format!("{path}.generators"))?
            .iter()
            .enumerate()
            .map(|(i, x)| operation_from(x, &format!("{path}.generators[{i}]"), Some(&u), None))
            .collect::<Result<_>>()?,
    };
    CloneFragment::generate(&u, &gens, k, limits)
}

pub fn fragment_to(frag: &CloneFragment) -> Value {
    let members: Map<String, Value> = (1..=frag.arity_bound())
        .map(|j| (j.to_string(), Value::Array(frag.members(j).iter().map(table_to).collect())))
        .collect();
    json!({
        "universe": universe_to(frag.universe()),
        "arity_bound": frag.arity_bound(),
        "members": members,
    })
}

/// `{universe?, arity, tuples}`.
pub fn relation_from(v: &Value, path: &str, universe: Option<&Universe>) -> Result<Relation> {
    let arity = as_usize(get(v, "arity", path)?, &format!("{path}.arity"))?;
    let u = match (v.get("universe"), universe) {
        (Some(u), _) => universe_from(u, &format!("{path}.universe"))?,
        (None, Some(u)) => u.clone(),
        (None, None) => return Err(bad(path, "relation needs a universe")),
    };
    let tuples: Vec<Vec<Elem>> = as_array(get(v, "tuples", path)?, &format!("{path}.tuples"))?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = format!("{path}.tuples[{i}]");
            usize_list(t, &p)?
                .into_iter()
                .map(|x| u.check(x).map_err(|e| bad(&p, e)))
                .collect()
        })
        .collect::<Result<_>>()?;
    Relation::new(&u, arity, tuples).map_err(|e| bad(path, e))
}

pub fn relation_to(r: &Relation) -> Value {
    json!({ "universe": universe_to(r.universe()), "arity": r.arity(), "tuples": r.tuple_set() })
}

pub fn witness_to(w: &PreservationWitness) -> Value {
    json!({ "columns": w.columns, "image": w.image })
}

pub fn witness_from(v: &Value, path: &str) -> Result<PreservationWitness> {
    let columns = as_array(get(v, "columns", path)?, &format!("{path}.columns"))?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            usize_list(c, &format!("{path}.columns[{i}]"))
                .map(|c| c.into_iter().map(|x| x.min(255) as Elem).collect())
        })
        .collect::<Result<_>>()?;
    let image = usize_list(get(v, "image", path)?, &format!("{path}.image"))?
        .into_iter()
        .map(|x| x.min(255) as Elem)
        .collect();
    Ok(PreservationWitness { columns, image })
}

pub fn cover_from(v: &Value, path: &str, universe: &Universe, arity: usize) -> Result<Cover> {
    let blocks = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, b)| usize_list(b, &format!("{path}[{i}]")))
        .collect::<Result<_>>()?;
    Cover::new(universe, arity, blocks).map_err(|e| bad(path, e))
}

pub fn cover_to(c: &Cover) -> Value {
    json!((0..c.len()).map(|i| c.block_points(i)).collect::<Vec<_>>())
}

/// Block families are keyed as comma-separated indices, e.g. `"0,2"`.
pub fn family_key(family: &[usize]) -> String {
    family.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn family_from_key(key: &str, path: &str) -> Result<Vec<usize>> {
    key.split(',')
        .map(|s| s.parse::<usize>().map_err(|_| bad(path, format!("bad block family `{key}`"))))
        .collect()
}

pub fn dagger_to(cert: &DaggerCertificate) -> Value {
    let interpolants: Map<String, Value> = cert
        .interpolants
        .iter()
        .map(|(k, t)| (family_key(k), table_to(t)))
        .collect();
    json!({ "lambda": cert.lambda, "cover": cover_to(&cert.cover), "interpolants": interpolants })
}

pub fn dagger_from(v: &Value, path: &str, f: &Operation) -> Result<DaggerCertificate> {
    let lambda = as_usize(get(v, "lambda", path)?, &format!("{path}.lambda"))?;
    let cover = cover_from(get(v, "cover", path)?, &format!("{path}.cover"), f.universe(), f.arity())?;
    let ipath = format!("{path}.interpolants");
    let mut interpolants = BTreeMap::new();
    for (key, t) in as_object(get(v, "interpolants", path)?, &ipath)? {
        let family = family_from_key(key, &ipath)?;
        interpolants.insert(
            family,
            operation_from(t, &format!("{ipath}.{key}"), Some(f.universe()), Some(f.arity()))?,
        );
    }
    Ok(DaggerCertificate { cover, lambda, interpolants })
}

/// `{universe?, f, h, cover, base_interpolants: {"0,1": table}}`.
pub fn bp_instance_from(v: &Value, path: &str) -> Result<BPInstance> {
    let u = v.get("universe").map(|u| universe_from(u, &format!("{path}.universe"))).transpose()?;
    let f = operation_from(get(v, "f", path)?, &format!("{path}.f"), u.as_ref(), None)?;
    let h = operation_from(get(v, "h", path)?, &format!("{path}.h"), Some(f.universe()), None)?;
    let cover = cover_from(get(v, "cover", path)?, &format!("{path}.cover"), f.universe(), f.arity())?;
    let bpath = format!("{path}.base_interpolants");
    let mut base = BTreeMap::new();
    for (key, t) in as_object(get(v, "base_interpolants", path)?, &bpath)? {
        base.insert(
            family_from_key(key, &bpath)?,
            operation_from(t, &format!("{bpath}.{key}"), Some(f.universe()), Some(f.arity()))?,
        );
    }
    Ok(BPInstance { f, h, cover, base_interpolants: base })
}

pub fn bp_instance_to(inst: &BPInstance) -> Value {
    let base: Map<String, Value> = inst
        .base_interpolants
        .iter()
        .map(|(k, t)| (family_key(k), table_to(t)))
        .collect();
    json!({
        "universe": universe_to(inst.f.universe()),
        "f": operation_to(&inst.f),
        "h": operation_to(&inst.h),
        "cover": cover_to(&inst.cover),
        "base_interpolants": base,
    })
}

/// `{moved: {"0": 1, "1": 0}}`.
pub fn permutation_from(v: &Value, path: &str) -> Result<FinSuppPermutation> {
    let mpath = format!("{path}.moved");
    let mut moved = BTreeMap::new();
    for (k, y) in as_object(get(v, "moved", path)?, &mpath)? {
        let x: Point = k.parse().map_err(|_| bad(&mpath, format!("bad point `{k}`")))?;
        let y = y.as_u64().ok_or_else(|| bad(&format!("{mpath}.{k}"), "expected a natural number"))?;
        moved.insert(x, y);
    }
    FinSuppPermutation::new(moved).map_err(|e| bad(path, e))
}

pub fn permutation_to(p: &FinSuppPermutation) -> Value {
    let moved: Map<String, Value> = p.moved().iter().map(|(x, y)| (x.to_string(), json!(y))).collect();
    json!({ "moved": moved })
}

/// `{values: [...]}` on the window `[0, len)`, or a permutation with an
/// explicit `window`.
pub fn window_map_from(v: &Value, path: &str) -> Result<WindowMap> {
    if let Some(vals) = v.get("values") {
        let values = as_array(vals, &format!("{path}.values"))?
            .iter()
            .enumerate()
            .map(|(i, x)| x.as_u64().ok_or_else(|| bad(&format!("{path}.values[{i}]"), "expected a natural number")))
            .collect::<Result<_>>()?;
        return Ok(WindowMap::new(values));
    }
    let window = get(v, "window", path)?
        .as_u64()
        .ok_or_else(|| bad(&format!("{path}.window"), "expected a natural number"))?;
    let p = permutation_from(v, path)?;
    if p.moved().keys().any(|&x| x >= window) {
        return Err(bad(path, "permutation moves points outside the window"));
    }
    Ok(WindowMap::from_permutation(&p, window))
}

pub fn point_set_from(v: &Value, path: &str) -> Result<BTreeSet<Point>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| x.as_u64().ok_or_else(|| bad(&format!("{path}[{i}]"), "expected a natural number")))
        .collect()
}

pub fn field_from(v: &Value, path: &str) -> Result<FiniteField> {
    match v {
        Value::String(s) => FiniteField::parse(s),
        _ => FiniteField::new(as_usize(v, path)?),
    }
}

pub fn matrix_from(v: &Value, path: &str, field: &FiniteField) -> Result<Matrix> {
    let rows: Vec<Vec<usize>> = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| usize_list(r, &format!("{path}[{i}]")))
        .collect::<Result<_>>()?;
    Matrix::from_rows(field, &rows).map_err(|e| bad(path, e))
}

pub fn matrix_to(m: &Matrix) -> Value {
    json!(m.row_vecs())
}

pub fn vectors_to(vs: &[Vec<FElem>]) -> Value {
    json!(vs)
}

/// `{q, f, interpolants: [matrix], blocks: [[vector]]}`; matrices are
/// row-major and act on column vectors.
pub fn module_instance_from(v: &Value, path: &str) -> Result<SubspaceCoverInstance> {
    let field = field_from(get(v, "q", path)?, &format!("{path}.q"))?;
    let f = matrix_from(get(v, "f", path)?, &format!("{path}.f"), &field)?;
    let interpolants = as_array(get(v, "interpolants", path)?, &format!("{path}.interpolants"))?
        .iter()
        .enumerate()
        .map(|(i, m)| matrix_from(m, &format!("{path}.interpolants[{i}]"), &field))
        .collect::<Result<Vec<_>>>()?;
    let blocks = as_array(get(v, "blocks", path)?, &format!("{path}.blocks"))?
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let p = format!("{path}.blocks[{i}]");
            let vectors: Vec<Vec<FElem>> = as_array(b, &p)?
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    let vp = format!("{p}[{j}]");
                    usize_list(x, &vp)?
                        .into_iter()
                        .map(|c| field.check(c).map_err(|e| bad(&vp, e)))
                        .collect()
                })
                .collect::<Result<_>>()?;
            Subspace::span(&field, f.rows(), &vectors).map_err(|e| bad(&p, e))
        })
        .collect::<Result<Vec<_>>>()?;
    SubspaceCoverInstance::new(field, f, interpolants, blocks).map_err(|e| bad(path, e))
}

pub fn module_instance_to(inst: &SubspaceCoverInstance) -> Value {
    json!({
        "q": inst.field.order(),
        "f": matrix_to(&inst.f),
        "interpolants": inst.interpolants.iter().map(matrix_to).collect::<Vec<_>>(),
        "blocks": inst.blocks.iter().map(|b| vectors_to(b.basis())).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::named::*;

    #[test]
    fn operation_roundtrip_and_inference() {
        let op = majority(&Universe::new(3).unwrap());
        assert_eq!(operation_from(&operation_to(&op), "op", None, None).unwrap(), op);
        let bare = json!({ "arity": 2, "table": [0, 0, 0, 1] });
        assert_eq!(operation_from(&bare, "op", None, None).unwrap(), and());
        let err = operation_from(&json!({ "arity": 2, "table": [0, 0, 1] }), "op", None, None).unwrap_err();
        assert!(err.to_string().contains("op"));
    }

    #[test]
    fn fragment_roundtrip() {
        let lim = Limits::default();
        let doc = json!({ "universe": 2, "arity_bound": 2, "generators": [{ "arity": 3, "table": majority(&Universe::new(2).unwrap()).table() }] });
        let frag = fragment_from(&doc, "fragment", &lim).unwrap();
        let back = fragment_from(&fragment_to(&frag), "fragment", &lim).unwrap();
        assert!(back.same_members(&frag));
        let bad = json!({ "universe": 2, "arity_bound": 2, "members": { "3": [] } });
        assert!(fragment_from(&bad, "fragment", &lim).is_err());
    }

    #[test]
    fn permutation_roundtrip() {
        let p = FinSuppPermutation::cycle(&[3, 1, 4]).unwrap();
        assert_eq!(permutation_from(&permutation_to(&p), "p").unwrap(), p);
        assert!(permutation_from(&json!({ "moved": { "0": 1 } }), "p").is_err());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_json("{\n \"a\": [1,\n}", "in.json").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }
}
