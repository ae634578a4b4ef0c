//! JSON problem files.
//!
//! A file describes a field, optionally a network with kernels, and
//! optionally a transfer matrix given directly. Field elements are written
//! as coefficient arrays (lowest degree first), as a packed integer index,
//! or as the name of an entry in `symbols`; polynomials are arrays of
//! elements, lowest degree first.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::feasibility::Demands;
use crate::galois::{Field, FieldElement, FieldSpec, Poly, PolyMatrix};
use crate::netmodel::{
    random_leks, EdgeKey, EdgeSpec, KernelPos, KernelSet, LekAssignment, LekMode, NetworkSpec, SinkSpec, SourceSpec,
    TransferResult,
};

/// One schema violation, located by a JSON path such as `edges[2].delay`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaIssue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{} schema violation(s):\n{}", .0.len(), .0.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n"))]
    Schema(Vec<SchemaIssue>),
}

/// Everything a problem file can carry.
#[derive(Debug, Clone)]
pub struct Problem {
    pub field: Field,
    pub network: Option<NetworkSpec>,
    pub leks: Option<LekAssignment>,
    /// Given directly, for codes whose topology is unknown.
    pub transfer: Option<TransferResult>,
    /// Per sink; from the network's sinks or the transfer section.
    pub demands: Demands,
    pub n: Option<usize>,
    pub alpha: Option<FieldElement>,
    pub symbols: BTreeMap<String, FieldElement>,
}

pub fn parse_problem(text: &str) -> Result<Problem, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut w = Walker::default();
    let problem = w.problem(&value);
    match problem {
        Some(p) if w.issues.is_empty() => Ok(p),
        _ => Err(InputError::Schema(w.issues)),
    }
}

#[derive(Default)]
struct Walker {
    issues: Vec<SchemaIssue>,
}

fn at(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn idx(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

impl Walker {
    fn issue(&mut self, path: &str, message: impl Into<String>) {
        self.issues.push(SchemaIssue {
            path: if path.is_empty() { "$".into() } else { path.into() },
            message: message.into(),
        });
    }

    fn object<'a>(&mut self, v: &'a Value, path: &str, allowed: &[&str]) -> Option<&'a Map<String, Value>> {
        match v.as_object() {
            Some(m) => {
                for k in m.keys() {
                    if !allowed.contains(&k.as_str()) {
                        self.issue(&at(path, k), "unknown key");
                    }
                }
                Some(m)
            }
            None => {
                self.issue(path, "expected an object");
                None
            }
        }
    }

    fn required<'a>(&mut self, m: &'a Map<String, Value>, key: &str, path: &str) -> Option<&'a Value> {
        let v = m.get(key);
        if v.is_none() {
            self.issue(&at(path, key), "missing");
        }
        v
    }

    fn array<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a Vec<Value>> {
        let a = v.as_array();
        if a.is_none() {
            self.issue(path, "expected an array");
        }
        a
    }

    fn uint(&mut self, v: &Value, path: &str) -> Option<u64> {
        let u = v.as_u64();
        if u.is_none() {
            self.issue(path, "expected a non-negative integer");
        }
        u
    }

    fn small(&mut self, v: &Value, path: &str) -> Option<usize> {
        self.uint(v, path).and_then(|u| match usize::try_from(u) {
            Ok(s) if u <= u32::MAX as u64 => Some(s),
            _ => {
                self.issue(path, "integer too large");
                None
            }
        })
    }

    fn int(&mut self, v: &Value, path: &str) -> Option<i64> {
        let i = v.as_i64();
        if i.is_none() {
            self.issue(path, "expected an integer");
        }
        i
    }

    fn string(&mut self, v: &Value, path: &str) -> Option<String> {
        let s = v.as_str().map(str::to_string);
        if s.is_none() {
            self.issue(path, "expected a string");
        }
        s
    }

    fn opt_small(&mut self, m: &Map<String, Value>, key: &str, path: &str, default: usize) -> Option<usize> {
        match m.get(key) {
            Some(v) => self.small(v, &at(path, key)),
            None => Some(default),
        }
    }

    fn field(&mut self, v: &Value, path: &str) -> Option<Field> {
        let m = self.object(v, path, &["p", "m", "modulus"])?;
        let p = self.required(m, "p", path).and_then(|v| self.uint(v, &at(path, "p")));
        let deg = match m.get("m") {
            Some(v) => self.small(v, &at(path, "m")),
            None => Some(1),
        };
        let modulus = match m.get("modulus") {
            None => Some(None),
            Some(v) => {
                let path = at(path, "modulus");
                self.array(v, &path).and_then(|a| {
                    let c: Vec<Option<u64>> = a
                        .iter()
                        .enumerate()
                        .map(|(i, x)| self.uint(x, &idx(&path, i)))
                        .collect();
                    c.into_iter().collect::<Option<Vec<u64>>>().map(Some)
                })
            }
        };
        let (p, deg, modulus) = (p?, deg?, modulus?);
        match Field::new(p, deg as u32, modulus.as_deref()) {
            Ok(f) => Some(f),
            Err(e) => {
                self.issue(path, e.to_string());
                None
            }
        }
    }

    fn element(
        &mut self,
        v: &Value,
        path: &str,
        field: &Field,
        symbols: &BTreeMap<String, FieldElement>,
    ) -> Option<FieldElement> {
        match v {
            Value::Number(_) => {
                let i = self.uint(v, path)?;
                let e = field.from_index(i);
                if e.is_none() {
                    self.issue(path, format!("element index {i} outside GF({})", field.order()));
                }
                e
            }
            Value::Array(a) => {
                let c: Vec<Option<u64>> = a.iter().enumerate().map(|(i, x)| self.uint(x, &idx(path, i))).collect();
                let c: Option<Vec<u64>> = c.into_iter().collect();
                match field.from_coeffs(&c?) {
                    Ok(e) => Some(e),
                    Err(e) => {
                        self.issue(path, e.to_string());
                        None
                    }
                }
            }
            Value::String(s) => {
                let e = symbols.get(s).copied();
                if e.is_none() {
                    self.issue(path, format!("unknown symbol {s:?}"));
                }
                e
            }
            _ => {
                self.issue(path, "expected a field element (array, integer or symbol)");
                None
            }
        }
    }

    fn poly(&mut self, v: &Value, path: &str, field: &Field, symbols: &BTreeMap<String, FieldElement>) -> Option<Poly> {
        let a = self.array(v, path)?;
        let c: Vec<Option<FieldElement>> = a
            .iter()
            .enumerate()
            .map(|(i, x)| self.element(x, &idx(path, i), field, symbols))
            .collect();
        c.into_iter().collect::<Option<Vec<_>>>().map(Poly::from_coeffs)
    }

    fn demands(&mut self, v: &Value, path: &str) -> Option<Vec<[usize; 2]>> {
        let a = self.array(v, path)?;
        let mut out = Some(Vec::new());
        for (i, d) in a.iter().enumerate() {
            let p = idx(path, i);
            let pair = self.array(d, &p).and_then(|d| {
                if d.len() != 2 {
                    self.issue(&p, "expected [source, process]");
                    return None;
                }
                let s = self.small(&d[0], &idx(&p, 0));
                let l = self.small(&d[1], &idx(&p, 1));
                Some([s?, l?])
            });
            match (pair, out.as_mut()) {
                (Some(x), Some(o)) => o.push(x),
                _ => out = None,
            }
        }
        out
    }

    fn edge_key(&mut self, v: &Value, path: &str) -> Option<EdgeKey> {
        let m = self.object(v, path, &["tail", "head", "index"])?;
        let tail = self
            .required(m, "tail", path)
            .and_then(|v| self.string(v, &at(path, "tail")));
        let head = self
            .required(m, "head", path)
            .and_then(|v| self.string(v, &at(path, "head")));
        let index = self.opt_small(m, "index", path, 0);
        Some(EdgeKey::new(tail?, head?, index? as u32))
    }

    fn network(&mut self, m: &Map<String, Value>) -> Option<NetworkSpec> {
        let nodes = self.required(m, "nodes", "").and_then(|v| {
            let a = self.array(v, "nodes")?;
            a.iter()
                .enumerate()
                .map(|(i, x)| self.string(x, &idx("nodes", i)))
                .collect::<Vec<_>>()
                .into_iter()
                .collect::<Option<Vec<_>>>()
        });
        let edges = self.required(m, "edges", "").and_then(|v| {
            let a = self.array(v, "edges")?;
            let parsed: Vec<Option<EdgeSpec>> = a
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let p = idx("edges", i);
                    let o = self.object(e, &p, &["tail", "head", "index", "delay"])?;
                    let tail = self
                        .required(o, "tail", &p)
                        .and_then(|v| self.string(v, &at(&p, "tail")));
                    let head = self
                        .required(o, "head", &p)
                        .and_then(|v| self.string(v, &at(&p, "head")));
                    let index = self.opt_small(o, "index", &p, 0);
                    let delay = self.opt_small(o, "delay", &p, 1);
                    Some(EdgeSpec::new(&tail?, &head?, index? as u32, delay? as u32))
                })
                .collect();
            parsed.into_iter().collect::<Option<Vec<_>>>()
        });
        let sources = self.required(m, "sources", "").and_then(|v| {
            let a = self.array(v, "sources")?;
            let parsed: Vec<Option<SourceSpec>> = a
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let p = idx("sources", i);
                    let o = self.object(s, &p, &["node", "processes"])?;
                    let node = self
                        .required(o, "node", &p)
                        .and_then(|v| self.string(v, &at(&p, "node")));
                    let processes = self.opt_small(o, "processes", &p, 1);
                    Some(SourceSpec {
                        node: node?,
                        processes: processes?,
                    })
                })
                .collect();
            parsed.into_iter().collect::<Option<Vec<_>>>()
        });
        let sinks = self.required(m, "sinks", "").and_then(|v| {
            let a = self.array(v, "sinks")?;
            let parsed: Vec<Option<SinkSpec>> = a
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let p = idx("sinks", i);
                    let o = self.object(s, &p, &["node", "outputs", "demands"])?;
                    let node = self
                        .required(o, "node", &p)
                        .and_then(|v| self.string(v, &at(&p, "node")));
                    let outputs = self.opt_small(o, "outputs", &p, 1);
                    let demands = match o.get("demands") {
                        Some(d) => self.demands(d, &at(&p, "demands")),
                        None => Some(vec![]),
                    };
                    Some(SinkSpec {
                        node: node?,
                        outputs: outputs?,
                        demands: demands?,
                    })
                })
                .collect();
            parsed.into_iter().collect::<Option<Vec<_>>>()
        });
        Some(NetworkSpec {
            nodes: nodes?,
            edges: edges?,
            sources: sources?,
            sinks: sinks?,
        })
    }

    fn kernel_set(
        &mut self,
        v: &Value,
        path: &str,
        net: &NetworkSpec,
        field: &Field,
        symbols: &BTreeMap<String, FieldElement>,
    ) -> Option<KernelSet> {
        let m = self.object(v, path, &["default", "alpha", "beta", "eps"])?;
        let mut ok = true;
        let mut k = KernelSet::default();
        if let Some(d) = m.get("default") {
            match self.element(d, &at(path, "default"), field, symbols) {
                Some(d) if !d.is_zero() => {
                    for pos in crate::netmodel::admissible_positions(net) {
                        k.set(pos, d);
                    }
                }
                Some(_) => {}
                None => ok = false,
            }
        }
        let mut entries =
            |w: &mut Walker,
             key: &str,
             fields: &[&str],
             f: &mut dyn FnMut(&mut Walker, &Map<String, Value>, &str) -> Option<KernelPos>| {
                let Some(list) = m.get(key) else { return true };
                let lp = at(path, key);
                let Some(a) = w.array(list, &lp) else { return false };
                let mut good = true;
                for (i, e) in a.iter().enumerate() {
                    let p = idx(&lp, i);
                    let Some(o) = w.object(e, &p, fields) else {
                        good = false;
                        continue;
                    };
                    let pos = f(w, o, &p);
                    let val = w
                        .required(o, "value", &p)
                        .and_then(|v| w.element(v, &at(&p, "value"), field, symbols));
                    match (pos, val) {
                        (Some(pos), Some(val)) => k.set(pos, val),
                        _ => good = false,
                    }
                }
                good
            };
        ok &= entries(
            self,
            "alpha",
            &["source", "process", "edge", "value"],
            &mut |w, o, p| {
                let s = w.required(o, "source", p).and_then(|v| w.small(v, &at(p, "source")));
                let l = match o.get("process") {
                    Some(v) => w.small(v, &at(p, "process")),
                    None => Some(0),
                };
                let e = w.required(o, "edge", p).and_then(|v| w.edge_key(v, &at(p, "edge")));
                Some(KernelPos::Alpha((s?, l?, e?)))
            },
        );
        ok &= entries(self, "beta", &["from", "to", "value"], &mut |w, o, p| {
            let a = w.required(o, "from", p).and_then(|v| w.edge_key(v, &at(p, "from")));
            let b = w.required(o, "to", p).and_then(|v| w.edge_key(v, &at(p, "to")));
            Some(KernelPos::Beta((a?, b?)))
        });
        ok &= entries(self, "eps", &["edge", "sink", "output", "value"], &mut |w, o, p| {
            let e = w.required(o, "edge", p).and_then(|v| w.edge_key(v, &at(p, "edge")));
            let j = w.required(o, "sink", p).and_then(|v| w.small(v, &at(p, "sink")));
            let out = match o.get("output") {
                Some(v) => w.small(v, &at(p, "output")),
                None => Some(0),
            };
            Some(KernelPos::Eps((e?, j?, out?)))
        });
        for pos in k.misplaced(net) {
            self.issue(
                path,
                format!("kernel at a position the topology does not allow: {pos:?}"),
            );
            ok = false;
        }
        ok.then_some(k)
    }

    fn leks(
        &mut self,
        v: &Value,
        net: &NetworkSpec,
        field: &Field,
        symbols: &BTreeMap<String, FieldElement>,
    ) -> Option<LekAssignment> {
        if let Some(s) = v.as_str() {
            if s == "ones" {
                return Some(LekAssignment::Invariant(KernelSet::all_ones(net)));
            }
            if let Some(seed) = s.strip_prefix("random:") {
                return match seed.parse::<u64>() {
                    Ok(seed) => Some(random_leks(net, field, seed, LekMode::Invariant)),
                    Err(_) => {
                        self.issue("leks", "expected \"random:<u64 seed>\"");
                        None
                    }
                };
            }
            self.issue("leks", "expected \"ones\", \"random:<seed>\" or an object");
            return None;
        }
        let m = v.as_object();
        if m.is_some_and(|m| m.contains_key("sets")) {
            let m = self.object(v, "leks", &["start", "sets"])?;
            let start = match m.get("start") {
                Some(s) => self.int(s, "leks.start"),
                None => Some(0),
            };
            let a = self.array(&m["sets"], "leks.sets")?;
            let sets: Vec<Option<KernelSet>> = a
                .iter()
                .enumerate()
                .map(|(i, s)| self.kernel_set(s, &idx("leks.sets", i), net, field, symbols))
                .collect();
            let sets = sets.into_iter().collect::<Option<Vec<_>>>()?;
            if sets.is_empty() {
                self.issue("leks.sets", "schedule is empty");
                return None;
            }
            return Some(LekAssignment::TimeIndexed { start: start?, sets });
        }
        self.kernel_set(v, "leks", net, field, symbols)
            .map(LekAssignment::Invariant)
    }

    fn transfer(
        &mut self,
        v: &Value,
        field: &Field,
        symbols: &BTreeMap<String, FieldElement>,
    ) -> Option<(TransferResult, Demands)> {
        let path = "transfer";
        let m = self.object(v, path, &["sources", "sinks", "d_prime_min", "d_prime_max"])?;
        let mu_sizes = self.required(m, "sources", path).and_then(|v| {
            let a = self.array(v, "transfer.sources")?;
            a.iter()
                .enumerate()
                .map(|(i, x)| self.small(x, &idx("transfer.sources", i)))
                .collect::<Vec<_>>()
                .into_iter()
                .collect::<Option<Vec<_>>>()
        });
        let mu: Option<usize> = mu_sizes.as_ref().map(|s| s.iter().sum());
        let sinks = self.required(m, "sinks", path).and_then(|v| {
            let a = self.array(v, "transfer.sinks")?;
            let parsed: Vec<Option<(Vec<Vec<Poly>>, Vec<[usize; 2]>)>> = a
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let p = idx("transfer.sinks", j);
                    let o = self.object(s, &p, &["rows", "demands"])?;
                    let demands = match o.get("demands") {
                        Some(d) => self.demands(d, &at(&p, "demands")),
                        None => Some(vec![]),
                    };
                    let rp = at(&p, "rows");
                    let rows = self.required(o, "rows", &p).and_then(|r| {
                        let r = self.array(r, &rp)?;
                        let rows: Vec<Option<Vec<Poly>>> = r
                            .iter()
                            .enumerate()
                            .map(|(ri, row)| {
                                let rpath = idx(&rp, ri);
                                let cells = self.array(row, &rpath)?;
                                if mu.is_some_and(|mu| cells.len() != mu) {
                                    self.issue(&rpath, format!("expected {} entries", mu.unwrap_or(0)));
                                    return None;
                                }
                                cells
                                    .iter()
                                    .enumerate()
                                    .map(|(ci, c)| self.poly(c, &idx(&rpath, ci), field, symbols))
                                    .collect::<Vec<_>>()
                                    .into_iter()
                                    .collect::<Option<Vec<_>>>()
                            })
                            .collect();
                        rows.into_iter().collect::<Option<Vec<_>>>()
                    });
                    Some((rows?, demands?))
                })
                .collect();
            parsed.into_iter().collect::<Option<Vec<_>>>()
        });
        let lo = m.get("d_prime_min").map(|v| self.small(v, "transfer.d_prime_min"));
        let hi = m.get("d_prime_max").map(|v| self.small(v, "transfer.d_prime_max"));
        let (mu_sizes, sinks) = (mu_sizes?, sinks?);
        let mu = mu_sizes.iter().sum();
        let nu_sizes: Vec<usize> = sinks.iter().map(|(r, _)| r.len()).collect();
        let all_rows: Vec<&Vec<Poly>> = sinks.iter().flat_map(|(r, _)| r).collect();
        let raw = PolyMatrix::from_fn(field, all_rows.len(), mu, |r, c| all_rows[r][c].clone());
        let demands: Demands = sinks.into_iter().map(|(_, d)| d).collect();
        let result = match (lo, hi) {
            (None, None) => TransferResult::from_raw(raw, mu_sizes, nu_sizes),
            (Some(lo), Some(hi)) => TransferResult::with_delays(raw, lo?, hi?, mu_sizes, nu_sizes),
            _ => {
                self.issue(path, "give both d_prime_min and d_prime_max or neither");
                return None;
            }
        };
        match result {
            Ok(t) => Some((t, demands)),
            Err(e) => {
                self.issue(path, e.to_string());
                None
            }
        }
    }

    fn problem(&mut self, v: &Value) -> Option<Problem> {
        let m = self.object(
            v,
            "",
            &[
                "field", "nodes", "edges", "sources", "sinks", "symbols", "leks", "n", "alpha", "transfer", "name",
                "comment",
            ],
        )?;
        let field = self.required(m, "field", "").and_then(|f| self.field(f, "field"));
        let has_net = ["nodes", "edges", "sources", "sinks"]
            .iter()
            .any(|k| m.contains_key(*k));
        let network = if has_net || !m.contains_key("transfer") {
            self.network(m)
        } else {
            None
        };
        let n = m.get("n").map(|v| self.small(v, "n"));
        let field = field?;
        let mut symbols = BTreeMap::new();
        if let Some(s) = m.get("symbols") {
            match s.as_object() {
                Some(o) => {
                    for (name, val) in o {
                        if let Some(e) = self.element(val, &at("symbols", name), &field, &BTreeMap::new()) {
                            symbols.insert(name.clone(), e);
                        }
                    }
                }
                None => self.issue("symbols", "expected an object"),
            }
        }
        let alpha = m.get("alpha").and_then(|a| self.element(a, "alpha", &field, &symbols));
        let leks = match (m.get("leks"), &network) {
            (Some(l), Some(net)) => self.leks(l, net, &field, &symbols),
            (Some(_), None) => {
                self.issue("leks", "kernels need a network");
                None
            }
            (None, _) => None,
        };
        let transfer = m.get("transfer").and_then(|t| self.transfer(t, &field, &symbols));
        let demands = match (&transfer, &network) {
            (Some((_, d)), _) => d.clone(),
            (None, Some(net)) => crate::feasibility::demands_of(net),
            (None, None) => vec![],
        };
        Some(Problem {
            field,
            network,
            leks,
            transfer: transfer.map(|(t, _)| t),
            demands,
            n: n.flatten(),
            alpha,
            symbols,
        })
    }
}

/// Coefficient array of an element, lowest degree first.
pub fn element_json(field: &Field, e: FieldElement) -> Value {
    json!(field.coeffs(e))
}

pub fn poly_json(field: &Field, p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(|&c| element_json(field, c)).collect())
}

pub fn field_json(spec: &FieldSpec) -> Value {
    json!({"p": spec.p, "m": spec.m, "modulus": spec.modulus})
}

fn edge_json(e: &EdgeKey) -> Value {
    json!({"tail": e.tail, "head": e.head, "index": e.index})
}

fn kernel_set_json(field: &Field, k: &KernelSet) -> Value {
    let alpha: Vec<Value> = k
        .alpha
        .iter()
        .map(
            |((s, l, e), &v)| json!({"source": s, "process": l, "edge": edge_json(e), "value": element_json(field, v)}),
        )
        .collect();
    let beta: Vec<Value> = k
        .beta
        .iter()
        .map(|((a, b), &v)| json!({"from": edge_json(a), "to": edge_json(b), "value": element_json(field, v)}))
        .collect();
    let eps: Vec<Value> = k
        .eps
        .iter()
        .map(|((e, j, o), &v)| json!({"edge": edge_json(e), "sink": j, "output": o, "value": element_json(field, v)}))
        .collect();
    json!({"alpha": alpha, "beta": beta, "eps": eps})
}

pub fn leks_json(field: &Field, leks: &LekAssignment) -> Value {
    match leks {
        LekAssignment::Invariant(k) => kernel_set_json(field, k),
        LekAssignment::TimeIndexed { start, sets } => json!({
            "start": start,
            "sets": sets.iter().map(|k| kernel_set_json(field, k)).collect::<Vec<_>>(),
        }),
    }
}

/// A problem file for a network with explicit kernels.
pub fn network_json(field: &Field, net: &NetworkSpec, leks: Option<&LekAssignment>) -> Value {
    let mut v = json!({
        "field": field_json(field.spec()),
        "nodes": net.nodes,
        "edges": net.edges,
        "sources": net.sources,
        "sinks": net.sinks,
    });
    if let Some(l) = leks {
        v["leks"] = leks_json(field, l);
    }
    v
}

pub fn poly_matrix_json(m: &PolyMatrix) -> Value {
    let f = m.field();
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| poly_json(f, m.get(r, c))).collect()))
            .collect(),
    )
}
