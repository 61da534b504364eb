//! The `clonelab` command line.
//!
//! Every command prints one JSON document on stdout. Exit codes: 0 when a
//! verdict was computed (negative verdicts included), 1 for malformed input,
//! 2 when a resource cap was hit.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::baker_pixley::{bp_interpolate, classical_bp_membership, nu_ultraclosure_check};
use crate::certificate::{self, Certificate};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::finite::{rho3, Elem, Universe};
use crate::interpolation::{is_lambda_interpolable, local_closure_fragment, Interpolation, Kappa};
use crate::io;
use crate::limits::Limits;
use crate::perms::{alt_b_locally_closed_check, alt_cover_witness, alt_not_locally_interpolable};
use crate::simple_module::{full_matrix_span, random_instance, recover};
use crate::structure::{
    decompose_product, goldstern_shelah_violation, is_essentially_unary, module_violation, AbelianGroup,
    Decomposition, ProductUniverse,
};
use crate::ultralocal::{search_dagger, ultra_closure_fragment, SearchOutcome, Strategy};

pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Debug, Parser)]
#[command(name = "clonelab", version, about = "Clones, interpolation and ultralocal closure on finite universes")]
pub struct Cli {
    /// Print the JSON schemas of all input formats and exit.
    #[arg(long)]
    pub schema: bool,
    /// Cap on members per arity.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a clone fragment from generators.
    Gen {
        /// JSON array of operations, or `{universe, generators}`.
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        arity_bound: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership of an operation in a fragment.
    Member {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        fragment: PathBuf,
    },
    /// λ-interpolation of a target by a fragment.
    Interp {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        fragment: PathBuf,
        #[arg(long)]
        lambda: usize,
    },
    /// Local closure of a fragment.
    Local {
        #[arg(long)]
        fragment: PathBuf,
        #[arg(long)]
        kappa: Kappa,
        #[arg(long)]
        arity_bound: Option<usize>,
    },
    /// Cover certificates for a target, or the ultralocal closure of a
    /// fragment when no target is given.
    Ultra(UltraArgs),
    /// Near-unanimity interpolation over a cover, or the closure check of a
    /// fragment with a near-unanimity member.
    Bp(BpArgs),
    /// Structural detectors.
    Detect {
        #[command(subcommand)]
        which: Detect,
    },
    /// Finite-support permutations.
    Perm {
        #[command(subcommand)]
        which: Perm,
    },
    /// Linear-map recovery over finite fields.
    Module {
        #[command(subcommand)]
        which: ModuleCmd,
    },
    /// Re-check a certificate against its inputs.
    Verify {
        certificate: PathBuf,
        #[arg(long, num_args = 0..)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct UltraArgs {
    #[arg(long)]
    target: Option<PathBuf>,
    #[arg(long)]
    fragment: PathBuf,
    #[arg(long, required_unless_present = "kappa")]
    lambda: Option<usize>,
    /// With no target: the closure index.
    #[arg(long)]
    kappa: Option<Kappa>,
    #[arg(long)]
    arity_bound: Option<usize>,
    /// singletons, equalizer-atoms, exhaustive, or exhaustive:N.
    #[arg(long, default_value = "exhaustive")]
    strategy: Strategy,
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BpArgs {
    #[arg(long, conflicts_with = "fragment")]
    instance: Option<PathBuf>,
    #[arg(long)]
    fragment: Option<PathBuf>,
    /// With --fragment: also compare against invariant relations for this
    /// target.
    #[arg(long, requires = "fragment")]
    classical: Option<PathBuf>,
    #[arg(long, default_value = "equalizer-atoms")]
    strategy: Strategy,
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Detect {
    EssUnary {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    Product {
        #[arg(long)]
        op: PathBuf,
        /// Factor sizes, e.g. `2x3`.
        #[arg(long)]
        factors: String,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    Module {
        #[arg(long)]
        op: PathBuf,
        /// `{add, neg, zero}`; defaults to the cyclic group.
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    Gs {
        #[arg(long)]
        op: PathBuf,
        /// The element `a` of the principal ideal; all elements if absent.
        #[arg(long)]
        ideal: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Perm {
    Parity {
        #[arg(long)]
        perm: PathBuf,
    },
    Alt {
        #[arg(long)]
        perm: PathBuf,
        #[arg(long, default_value_t = 1)]
        lambda: usize,
        #[arg(long, default_value_t = 8)]
        window: u64,
    },
    CoverWitness {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        a: u64,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long)]
        window: u64,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    AltbCheck {
        /// Comma-separated points of B.
        #[arg(long, value_delimiter = ',')]
        b: Vec<u64>,
        /// `{values}` or `{moved, window}`.
        #[arg(long)]
        map: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModuleCmd {
    Recover {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Write a random valid instance.
    Sample {
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut limits = Limits::default();
    if let Some(c) = cli.cap {
        limits.members = c;
    }
    let result = if cli.schema {
        Ok(schemas())
    } else {
        match cli.command {
            Some(cmd) => execute(cmd, &limits),
            None => Err(Error::Input("no command given; try --help".into())),
        }
    };
    match result {
        Ok(v) => Outcome {
            code: 0,
            stdout: format!("{}\n", serde_json::to_string_pretty(&v).expect("json")),
            stderr: String::new(),
        },
        Err(e) => {
            let code = if e.is_cap() { 2 } else { 1 };
            let kind = if e.is_cap() { "cap" } else { "input" };
            Outcome {
                code,
                stdout: format!("{}\n", json!({ "error": e.to_string(), "kind": kind })),
                stderr: format!("clonelab: {e}\n"),
            }
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    io::parse_json(&text, &path.display().to_string())
}

/// Writes via a temporary file and a rename, so readers never see a
/// partial file.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp~");
    std::fs::write(&tmp, text)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn emit_cert(out: &mut Value, cert: Certificate, path: Option<&PathBuf>) -> Result<()> {
    if let Some(p) = path {
        write_atomic(p, &cert.to_json_string())?;
    }
    out["certificate"] = cert.to_value();
    Ok(())
}

fn name(path: &Path) -> String {
    path.display().to_string()
}

fn execute(cmd: Command, limits: &Limits) -> Result<Value> {
    match cmd {
        Command::Gen { generators, arity_bound, out } => {
            let v = read_json(&generators)?;
            let doc = match &v {
                Value::Array(ops) => {
                    let first = ops
                        .first()
                        .ok_or_else(|| Error::Input("an empty generator list needs `{universe, generators}`".into()))?;
                    let u = io::operation_from(first, "generators[0]", None, None)?.universe().clone();
                    json!({ "universe": io::universe_to(&u), "arity_bound": arity_bound, "generators": v })
                }
                Value::Object(o) => {
                    let mut o = o.clone();
                    o.insert("arity_bound".into(), json!(arity_bound));
                    o.remove("members");
                    Value::Object(o)
                }
                _ => return Err(Error::Input(format!("{}: expected an array or an object", name(&generators)))),
            };
            let frag = io::fragment_from(&doc, &name(&generators), limits)?;
            let counts: Map<String, Value> = (1..=arity_bound)
                .map(|j| (j.to_string(), json!(frag.members(j).len())))
                .collect();
            let fj = io::fragment_to(&frag);
            let mut result = json!({ "arity_bound": arity_bound, "counts": counts });
            match out {
                Some(p) => {
                    write_atomic(&p, &format!("{fj}\n"))?;
                    result["out"] = json!(name(&p));
                }
                None => result["fragment"] = fj,
            }
            Ok(result)
        }
        Command::Member { op, fragment } => {
            let frag = io::fragment_from(&read_json(&fragment)?, &name(&fragment), limits)?;
            let f = io::operation_from(&read_json(&op)?, &name(&op), Some(frag.universe()), None)?;
            Ok(json!({ "member": frag.contains(&f)? }))
        }
        Command::Interp { target, fragment, lambda } => {
            let frag = io::fragment_from(&read_json(&fragment)?, &name(&fragment), limits)?;
            let f = io::operation_from(&read_json(&target)?, &name(&target), Some(frag.universe()), None)?;
            Ok(match is_lambda_interpolable(&f, &frag, lambda)? {
                Interpolation::Interpolable => json!({ "result": true }),
                Interpolation::Fails { witness } => {
                    let tuples: Vec<Vec<Elem>> = witness.iter().map(|&p| f.universe().tuple_at(f.arity(), p)).collect();
                    json!({ "result": false, "witness": { "S": tuples } })
                }
            })
        }
        Command::Local { fragment, kappa, arity_bound } => {
            let frag = io::fragment_from(&read_json(&fragment)?, &name(&fragment), limits)?;
            let k = arity_bound.unwrap_or(frag.arity_bound());
            let closed = local_closure_fragment(&frag, kappa, k, limits)?;
            Ok(json!({ "kappa": kappa.to_string(), "fragment": io::fragment_to(&closed), "equals_input": closed.same_members(&frag) }))
        }
        Command::Ultra(a) => ultra(a, limits),
        Command::Bp(a) => bp(a, limits),
        Command::Detect { which } => detect(which),
        Command::Perm { which } => perm(which),
        Command::Module { which } => module(which, limits),
        Command::Verify { certificate: path, inputs } => {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Input(format!("{}: {e}", name(&path))))?;
            let cert = match Certificate::parse(&text) {
                Ok(c) => c,
                Err(e) => return Ok(json!({ "valid": false, "reason": e.to_string() })),
            };
            let values = inputs.iter().map(|p| read_json(p)).collect::<Result<Vec<_>>>()?;
            Ok(certificate::verify(&cert, &values, limits)?.to_json())
        }
    }
}

fn ultra(a: UltraArgs, limits: &Limits) -> Result<Value> {
    let fv = read_json(&a.fragment)?;
    let frag = io::fragment_from(&fv, &name(&a.fragment), limits)?;
    let Some(target) = a.target else {
        let kappa = a.kappa.ok_or_else(|| Error::Input("closure mode needs --kappa".into()))?;
        let k = a.arity_bound.unwrap_or(frag.arity_bound());
        let closed = ultra_closure_fragment(&frag, kappa, k, a.strategy, limits)?;
        return Ok(json!({ "kappa": kappa.to_string(), "fragment": io::fragment_to(&closed), "equals_input": closed.same_members(&frag) }));
    };
    let lambda = a.lambda.ok_or_else(|| Error::Input("--lambda is required with --target".into()))?;
    let tv = read_json(&target)?;
    let f = io::operation_from(&tv, &name(&target), Some(frag.universe()), None)?;
    match search_dagger(&f, &frag, lambda, a.strategy, limits)? {
        SearchOutcome::Found(cert) => {
            let mut out = json!({ "found": true, "cover": io::cover_to(&cert.cover), "interpolants": io::dagger_to(&cert)["interpolants"] });
            emit_cert(&mut out, certificate::dagger(&cert, &tv, &fv), a.cert.as_ref())?;
            Ok(out)
        }
        SearchOutcome::NotFound { disproof } => Ok(json!({ "found": false, "disproof": disproof })),
    }
}

fn bp(a: BpArgs, limits: &Limits) -> Result<Value> {
    if let Some(path) = a.instance {
        let iv = read_json(&path)?;
        let inst = io::bp_instance_from(&iv, &name(&path))?;
        let r = bp_interpolate(&inst, limits)?;
        let mut out = r.to_json();
        out["equals_f"] = json!(r.table == inst.f);
        emit_cert(&mut out, certificate::bp_tree(&r, &iv), a.cert.as_ref())?;
        return Ok(out);
    }
    let path = a.fragment.ok_or_else(|| Error::Input("bp needs --instance or --fragment".into()))?;
    let frag = io::fragment_from(&read_json(&path)?, &name(&path), limits)?;
    let report = nu_ultraclosure_check(&frag, a.strategy, limits)?;
    let ledger: Vec<Value> = report
        .ledger
        .iter()
        .map(|e| json!({ "arity": e.op.arity(), "table": e.op.table(), "in_fragment": e.in_fragment, "reconstructed": e.reconstructed }))
        .collect();
    let mut out = json!({ "nu": io::operation_to(&report.h), "closed": report.closed, "ledger": ledger });
    if let Some(t) = a.classical {
        let f = io::operation_from(&read_json(&t)?, &name(&t), Some(frag.universe()), None)?;
        let m = classical_bp_membership(&f, &frag, report.h.arity(), limits)?;
        out["classical"] = json!({ "preserves_small_invariants": m.preserves_small_invariants, "member": m.member });
    }
    Ok(out)
}

fn parse_factors(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::Input(format!("--factors: expected AxB, got `{s}`")))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Input(format!("--factors: bad size `{t}`")));
    Ok((p(a)?, p(b)?))
}

fn detect(which: Detect) -> Result<Value> {
    match which {
        Detect::EssUnary { op, cert } => {
            let ov = read_json(&op)?;
            let f = io::operation_from(&ov, &name(&op), None, None)?;
            let verdict = is_essentially_unary(&f);
            let mut out = json!({ "essentially_unary": verdict, "essential_coordinates": f.essential_coordinates() });
            let rel = rho3(f.universe());
            if let Some(w) = crate::finite::preserves(&f, &rel)? {
                emit_cert(&mut out, certificate::preservation(&w, &rel, &ov), cert.as_ref())?;
            }
            Ok(out)
        }
        Detect::Product { op, factors, cert } => {
            let (l, r) = parse_factors(&factors)?;
            let pu = ProductUniverse::new(&Universe::new(l)?, &Universe::new(r)?)?;
            let ov = read_json(&op)?;
            let f = io::operation_from(&ov, &name(&op), Some(pu.paired()), None)?;
            let d = decompose_product(&pu, &f)?;
            let mut out = match &d {
                Decomposition::Product { left, right } => {
                    json!({ "product": true, "left": io::table_to(left), "right": io::table_to(right) })
                }
                Decomposition::NotProduct { witness } => json!({
                    "product": false,
                    "witness": witness.as_ref().map_or(Value::Null, io::witness_to),
                }),
            };
            emit_cert(&mut out, certificate::product_decomp(&pu, &d, &ov), cert.as_ref())?;
            Ok(out)
        }
        Detect::Module { op, group, cert } => {
            let ov = read_json(&op)?;
            let f = io::operation_from(&ov, &name(&op), None, None)?;
            let g = match group {
                None => AbelianGroup::cyclic(f.universe()),
                Some(p) => {
                    let gv = read_json(&p)?;
                    let n = name(&p);
                    let add = io::operation_from(io::get(&gv, "add", &n)?, &format!("{n}.add"), Some(f.universe()), Some(2))?;
                    let neg = io::operation_from(io::get(&gv, "neg", &n)?, &format!("{n}.neg"), Some(f.universe()), Some(1))?;
                    let zero = f.universe().check(io::as_usize(io::get(&gv, "zero", &n)?, &format!("{n}.zero"))?)?;
                    AbelianGroup::new(add, neg, zero)?
                }
            };
            let violation = module_violation(&f, &g)?;
            let mut out = json!({ "compatible": violation.is_none() });
            if let Some(w) = violation {
                let rel = crate::finite::graph(g.add())?;
                emit_cert(&mut out, certificate::preservation(&w, &rel, &ov), cert.as_ref())?;
            }
            Ok(out)
        }
        Detect::Gs { op, ideal } => {
            let f = io::operation_from(&read_json(&op)?, &name(&op), None, None)?;
            let elements: Vec<Elem> = match ideal {
                Some(a) => vec![f.universe().check(a)?],
                None => f.universe().elements().collect(),
            };
            let mut per = Vec::new();
            for a in elements {
                let v = goldstern_shelah_violation(&f, a)?;
                per.push(match v {
                    None => json!({ "a": a, "member": true }),
                    Some(v) => json!({ "a": a, "member": false, "witness": { "S": v.set, "args": v.args } }),
                });
            }
            let all = per.iter().all(|x| x["member"] == json!(true));
            Ok(json!({ "member": all, "ideals": per }))
        }
    }
}

fn perm(which: Perm) -> Result<Value> {
    match which {
        Perm::Parity { perm } => {
            let p = io::permutation_from(&read_json(&perm)?, &name(&perm))?;
            Ok(json!({ "parity": p.parity().to_string(), "cycles": p.cycles() }))
        }
        Perm::Alt { perm, lambda, window } => {
            let p = io::permutation_from(&read_json(&perm)?, &name(&perm))?;
            let r = alt_not_locally_interpolable(&p, lambda, window)?;
            Ok(json!({
                "in_alt": r.in_alt,
                "interpolable_on_window": r.interpolable_on_window,
                "lambda": lambda,
                "window": window,
                "sets_checked": r.sets_checked,
            }))
        }
        Perm::CoverWitness { k, a, b, window, cert } => {
            let w = alt_cover_witness(k, a, b, window)?;
            let c = certificate::alt_cover(&w);
            let mut out = json!({ "verified": w.verify().is_ok(), "payload": c.payload.clone() });
            emit_cert(&mut out, c, cert.as_ref())?;
            Ok(out)
        }
        Perm::AltbCheck { b, map } => {
            let f = io::window_map_from(&read_json(&map)?, &name(&map))?;
            let set: BTreeSet<u64> = b.into_iter().collect();
            let r = alt_b_locally_closed_check(&set, &f)?;
            Ok(json!({
                "accepted": r.accepted,
                "interpolant": r.interpolant.as_ref().map(io::permutation_to),
                "rejected_at": r.rejected_at,
            }))
        }
    }
}

fn module(which: ModuleCmd, limits: &Limits) -> Result<Value> {
    match which {
        ModuleCmd::Recover { instance, cert } => {
            let iv = read_json(&instance)?;
            let inst = io::module_instance_from(&iv, &name(&instance))?;
            let rec = recover(&inst, &full_matrix_span(inst.dim), limits)?;
            let mut out = json!({
                "equals_f": rec.result == inst.f,
                "result": io::matrix_to(&rec.result),
                "t": io::matrix_to(&rec.t.t),
                "u": io::matrix_to(&rec.u),
                "r0": io::matrix_to(&rec.r0),
                "kernel_blocks": rec.enlarged.blocks.iter().map(|b| io::vectors_to(b.basis())).collect::<Vec<_>>(),
                "intersection_codim": rec.intersection_codim,
            });
            emit_cert(&mut out, certificate::module_recovery(&rec, &iv), cert.as_ref())?;
            Ok(out)
        }
        ModuleCmd::Sample { q, dim, seed, out } => {
            let field = FiniteField::new(q)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&field, dim, &mut rng)?;
            let v = io::module_instance_to(&inst);
            match out {
                Some(p) => {
                    write_atomic(&p, &format!("{v}\n"))?;
                    Ok(json!({ "out": name(&p), "seed": seed }))
                }
                None => Ok(json!({ "instance": v, "seed": seed })),
            }
        }
    }
}

/// JSON schemas of the input formats.
pub fn schemas() -> Value {
    let nat = json!({ "type": "integer", "minimum": 0 });
    let universe = json!({
        "oneOf": [nat, { "type": "object", "required": ["size"], "properties": {
            "size": nat, "labels": { "type": "array", "items": { "type": "string" } } } }]
    });
    let table = json!({ "type": "array", "items": nat });
    let operation = json!({
        "type": "object", "required": ["arity", "table"],
        "properties": { "universe": universe, "arity": nat, "table": table },
        "description": "table lists values in lexicographic order of arguments, last argument fastest",
    });
    let tuple = json!({ "type": "array", "items": nat });
    json!({
        "universe": universe,
        "operation": operation,
        "relation": { "type": "object", "required": ["arity", "tuples"], "properties": {
            "universe": universe, "arity": nat, "tuples": { "type": "array", "items": tuple } } },
        "fragment": { "type": "object", "required": ["universe", "arity_bound"], "properties": {
            "universe": universe, "arity_bound": nat,
            "generators": { "type": "array", "items": operation },
            "members": { "type": "object", "additionalProperties": { "type": "array", "items": table },
                "description": "keys are arities; given members are taken as the fragment" } } },
        "generators": { "oneOf": [{ "type": "array", "items": operation },
            { "type": "object", "required": ["universe", "generators"] }] },
        "cover": { "type": "array", "items": { "type": "array", "items": nat },
            "description": "blocks of point indices of A^n" },
        "bp_instance": { "type": "object", "required": ["f", "h", "cover", "base_interpolants"], "properties": {
            "universe": universe, "f": operation, "h": operation,
            "cover": { "$ref": "#/cover" },
            "base_interpolants": { "type": "object", "additionalProperties": table,
                "description": "keys are comma-separated block indices" } } },
        "permutation": { "type": "object", "required": ["moved"], "properties": {
            "moved": { "type": "object", "additionalProperties": nat } } },
        "window_map": { "oneOf": [
            { "type": "object", "required": ["values"], "properties": { "values": tuple } },
            { "type": "object", "required": ["moved", "window"] }] },
        "group": { "type": "object", "required": ["add", "neg", "zero"], "properties": {
            "add": table, "neg": table, "zero": nat } },
        "module_instance": { "type": "object", "required": ["q", "f", "interpolants", "blocks"], "properties": {
            "q": nat,
            "f": { "type": "array", "items": tuple, "description": "row-major; acts on column vectors" },
            "interpolants": { "type": "array", "items": { "type": "array", "items": tuple } },
            "blocks": { "type": "array", "items": { "type": "array", "items": tuple },
                "description": "each block is spanned by the listed vectors" } } },
        "certificate": { "type": "object", "additionalProperties": false,
            "required": ["kind", "payload", "inputs_digest", "certificate_digest"], "properties": {
            "kind": { "enum": ["dagger", "bp_tree", "product_decomp", "alt_cover", "module_recovery", "preservation_witness"] },
            "payload": { "type": "object" },
            "inputs_digest": { "type": "string" },
            "certificate_digest": { "type": "string" } } },
    })
}
