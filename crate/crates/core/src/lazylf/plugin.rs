//! Lattices supplied by an external oracle speaking JSON lines.
//!
//! Each request is one line `{"op": .., "args": [..]}` with `op` one of
//! `upper_covers`, `lower_covers`, `meet`, `join`, `leq`; each response is one
//! line `{"result": ..}` (or `{"error": ".."}`). `upper_covers` may answer
//! `null` for an element with infinitely many upper covers. Elements are
//! arbitrary JSON values compared only for equality (after canonical
//! re-serialization). A static table of `{"op", "args", "result"}` lines can
//! stand in for a live process.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fs::File;
use std::hash::{Hash, Hasher};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::Mutex;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};

use super::LocallyFiniteLattice;

/// An element known only through its JSON encoding.
#[derive(Clone, Debug)]
pub struct OpaqueElem {
    value: Value,
    canonical: String,
}

impl OpaqueElem {
    pub fn new(value: Value) -> Self {
        let canonical = value.to_string();
        OpaqueElem { value, canonical }
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }
}

impl PartialEq for OpaqueElem {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for OpaqueElem {}

impl Hash for OpaqueElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical.hash(state)
    }
}

impl PartialOrd for OpaqueElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpaqueElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical.cmp(&other.canonical)
    }
}

impl Serialize for OpaqueElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.value.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OpaqueElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(OpaqueElem::new(Value::deserialize(d)?))
    }
}

struct Process {
    child: Child,
    stdin: BufWriter<ChildStdin>,
    stdout: BufReader<ChildStdout>,
}

enum Transport {
    Process(Box<Process>),
    Table(HashMap<String, Value>),
}

/// A locally-finite lattice answered by a plugin. Oracles are assumed pure,
/// so every answer is cached. Protocol failures panic with the offending
/// request, since the oracle trait has no error channel.
pub struct PluginLattice {
    name: String,
    transport: Mutex<Transport>,
    cache: Mutex<HashMap<String, Value>>,
}

fn request_key(op: &str, args: &[&OpaqueElem]) -> String {
    json!({"op": op, "args": args}).to_string()
}

impl PluginLattice {
    /// Spawns `program` with `args` and talks to it over its stdio.
    pub fn spawn(program: &str, args: &[String]) -> Result<Self> {
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Plugin(format!("cannot start `{program}`: {e}")))?;
        let stdin = BufWriter::new(child.stdin.take().expect("piped stdin"));
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(PluginLattice {
            name: format!("plugin:{program}"),
            transport: Mutex::new(Transport::Process(Box::new(Process { child, stdin, stdout }))),
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Reads a static oracle table from JSON lines.
    pub fn from_table_reader(name: &str, reader: impl BufRead) -> Result<Self> {
        let mut table = HashMap::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let v: Value = serde_json::from_str(&line)
                .map_err(|e| Error::Plugin(format!("table line {}: {e}", lineno + 1)))?;
            let op = v["op"]
                .as_str()
                .ok_or_else(|| Error::Plugin(format!("table line {}: missing op", lineno + 1)))?;
            let args: Vec<OpaqueElem> = serde_json::from_value(v["args"].clone())
                .map_err(|e| Error::Plugin(format!("table line {}: {e}", lineno + 1)))?;
            let refs: Vec<&OpaqueElem> = args.iter().collect();
            table.insert(request_key(op, &refs), v["result"].clone());
        }
        Ok(PluginLattice {
            name: format!("table:{name}"),
            transport: Mutex::new(Transport::Table(table)),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn from_table(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::Plugin(format!("{}: {e}", path.display())))?;
        Self::from_table_reader(&path.display().to_string(), BufReader::new(f))
    }

    /// A path ending in `.jsonl` or `.json` is read as a table; anything
    /// else is started as a program.
    pub fn open(path: &str) -> Result<Self> {
        if path.ends_with(".jsonl") || path.ends_with(".json") {
            Self::from_table(Path::new(path))
        } else {
            let mut parts = path.split_whitespace();
            let program = parts.next().ok_or_else(|| Error::Plugin("empty plugin command".into()))?;
            let args: Vec<String> = parts.map(str::to_string).collect();
            Self::spawn(program, &args)
        }
    }

    fn call(&self, op: &str, args: &[&OpaqueElem]) -> Value {
        let key = request_key(op, args);
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return v.clone();
        }
        let result = {
            let mut transport = self.transport.lock().expect("transport lock");
            match &mut *transport {
                Transport::Table(t) => {
                    let swapped = (args.len() == 2 && (op == "meet" || op == "join"))
                        .then(|| request_key(op, &[args[1], args[0]]));
                    t.get(&key)
                        .or_else(|| swapped.and_then(|k| t.get(&k)))
                        .cloned()
                        .unwrap_or_else(|| panic!("{}: no table entry for {key}", self.name))
                }
                Transport::Process(p) => {
                    writeln!(p.stdin, "{key}").and_then(|_| p.stdin.flush()).unwrap_or_else(|e| {
                        panic!("{}: write failed: {e}", self.name)
                    });
                    let mut line = String::new();
                    let n = p
                        .stdout
                        .read_line(&mut line)
                        .unwrap_or_else(|e| panic!("{}: read failed: {e}", self.name));
                    if n == 0 {
                        panic!("{}: plugin closed its output on {key}", self.name);
                    }
                    let v: Value = serde_json::from_str(&line)
                        .unwrap_or_else(|e| panic!("{}: bad response to {key}: {e}", self.name));
                    if let Some(err) = v.get("error") {
                        panic!("{}: plugin error on {key}: {err}", self.name);
                    }
                    v.get("result")
                        .cloned()
                        .unwrap_or_else(|| panic!("{}: response to {key} has no result", self.name))
                }
            }
        };
        self.cache.lock().expect("cache lock").insert(key, result.clone());
        result
    }

    fn elems(&self, op: &str, v: Value) -> Vec<OpaqueElem> {
        let mut out: Vec<OpaqueElem> =
            serde_json::from_value(v).unwrap_or_else(|e| panic!("{}: {op} must return a list: {e}", self.name));
        out.sort();
        out
    }
}

impl Drop for PluginLattice {
    fn drop(&mut self) {
        if let Ok(t) = self.transport.get_mut() {
            if let Transport::Process(p) = t {
                let _ = p.child.kill();
                let _ = p.child.wait();
            }
        }
    }
}

impl LocallyFiniteLattice for PluginLattice {
    type Elem = OpaqueElem;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn leq(&self, x: &OpaqueElem, y: &OpaqueElem) -> bool {
        self.call("leq", &[x, y])
            .as_bool()
            .unwrap_or_else(|| panic!("{}: leq must return a boolean", self.name))
    }

    fn meet(&self, x: &OpaqueElem, y: &OpaqueElem) -> OpaqueElem {
        OpaqueElem::new(self.call("meet", &[x, y]))
    }

    fn join(&self, x: &OpaqueElem, y: &OpaqueElem) -> OpaqueElem {
        OpaqueElem::new(self.call("join", &[x, y]))
    }

    fn upper_covers(&self, x: &OpaqueElem) -> Option<Vec<OpaqueElem>> {
        match self.call("upper_covers", &[x]) {
            Value::Null => None,
            v => Some(self.elems("upper_covers", v)),
        }
    }

    fn lower_covers(&self, x: &OpaqueElem) -> Vec<OpaqueElem> {
        let v = self.call("lower_covers", &[x]);
        self.elems("lower_covers", v)
    }
}

#[derive(Deserialize)]
struct Request {
    op: String,
    args: Vec<Value>,
}

fn answer<L: LocallyFiniteLattice + ?Sized>(l: &L, req: &Request) -> Result<Value> {
    let arg = |i: usize| -> Result<L::Elem> {
        let v = req
            .args
            .get(i)
            .ok_or_else(|| Error::Plugin(format!("{} needs argument {i}", req.op)))?;
        let e: L::Elem = serde_json::from_value(v.clone())?;
        l.validate(&e)?;
        Ok(e)
    };
    Ok(match req.op.as_str() {
        "leq" => json!(l.leq(&arg(0)?, &arg(1)?)),
        "meet" => serde_json::to_value(l.meet(&arg(0)?, &arg(1)?))?,
        "join" => serde_json::to_value(l.join(&arg(0)?, &arg(1)?))?,
        "upper_covers" => serde_json::to_value(l.upper_covers(&arg(0)?))?,
        "lower_covers" => serde_json::to_value(l.lower_covers(&arg(0)?))?,
        other => return Err(Error::Plugin(format!("unknown op `{other}`"))),
    })
}

/// Answers protocol requests for `l` until the input ends. Malformed
/// requests get an `{"error": ..}` line and the loop continues.
pub fn serve_plugin<L: LocallyFiniteLattice + ?Sized>(l: &L, input: impl BufRead, mut output: impl Write) -> Result<()> {
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let response = match serde_json::from_str::<Request>(&line)
            .map_err(Error::from)
            .and_then(|req| answer(l, &req))
        {
            Ok(v) => json!({ "result": v }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        writeln!(output, "{response}")?;
        output.flush()?;
    }
    Ok(())
}

/// Writes a static oracle table for `elems`: the covers of each element,
/// and meet, join, leq for each ordered pair drawn from `elems` together
/// with those covers, so windows inside `elems` can be rebuilt from it.
pub fn write_oracle_table<L: LocallyFiniteLattice + ?Sized>(
    l: &L,
    elems: &[L::Elem],
    mut output: impl Write,
) -> Result<()> {
    let mut extended: std::collections::BTreeSet<L::Elem> = elems.iter().cloned().collect();
    for x in elems {
        let ups = l.upper_covers(x);
        let downs = l.lower_covers(x);
        writeln!(output, "{}", json!({"op": "upper_covers", "args": [x], "result": ups}))?;
        writeln!(output, "{}", json!({"op": "lower_covers", "args": [x], "result": downs}))?;
        extended.extend(ups.unwrap_or_default());
        extended.extend(downs);
    }
    for x in &extended {
        for y in &extended {
            writeln!(output, "{}", json!({"op": "leq", "args": [x, y], "result": l.leq(x, y)}))?;
            writeln!(output, "{}", json!({"op": "meet", "args": [x, y], "result": l.meet(x, y)}))?;
            writeln!(output, "{}", json!({"op": "join", "args": [x, y], "result": l.join(x, y)}))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazylf::{interval, ZGrid, DEFAULT_WINDOW_LIMIT};

    #[test]
    fn serve_answers_requests() {
        let input = b"{\"op\":\"meet\",\"args\":[[2,-1],[0,3]]}\n{\"op\":\"upper_covers\",\"args\":[[0,0]]}\n{\"op\":\"bogus\",\"args\":[]}\n";
        let mut out = Vec::new();
        serve_plugin(&ZGrid::new(2), &input[..], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], r#"{"result":[0,-1]}"#);
        assert_eq!(lines[1], r#"{"result":[[0,1],[1,0]]}"#);
        assert!(lines[2].contains("error"));
    }

    #[test]
    fn table_round_trip() {
        let z = ZGrid::new(2);
        let w = interval(&z, &vec![0, 0], &vec![2, 2], DEFAULT_WINDOW_LIMIT).unwrap();
        let mut buf = Vec::new();
        write_oracle_table(&z, w.elements(), &mut buf).unwrap();
        let plugin = PluginLattice::from_table_reader("grid", &buf[..]).unwrap();
        let a = OpaqueElem::new(json!([0, 0]));
        let b = OpaqueElem::new(json!([2, 2]));
        let pw = interval(&plugin, &a, &b, DEFAULT_WINDOW_LIMIT).unwrap();
        assert_eq!(pw.len(), 9);
        assert!(pw.lattice().is_distributive());
        assert_eq!(
            plugin.meet(&OpaqueElem::new(json!([2, 0])), &OpaqueElem::new(json!([0, 2]))),
            a
        );
    }
}
