//! Random CSP instances and the Model RB / Model RD generators.
//!
//! An instance has `n` variables over the domain `{0, .., d-1}` with
//! `d = round(n^alpha)`, and `m = round(r * n * ln n)` constraints of arity
//! `k`. Each constraint stores its scope (ascending variable indices) plus an
//! explicit set of compatible tuple codes. RB draws exactly
//! `q = round((1-p) * d^k)` compatible codes per constraint without
//! replacement; RD marks each of the `d^k` codes compatible independently
//! with probability `1-p`.
//!
//! Generation is deterministic: every constraint draws its scope and relation
//! from substreams derived from `(seed, constraint index)`, so the result is
//! a pure function of the parameters and is the same under any evaluation
//! order.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream, tag};

/// Largest tuple space `d^k` for which relations are materialized.
///
/// Relations are bit-sets over `d^k` codes; past this point a single
/// constraint would outgrow the desk-scale memory budget this crate targets.
pub const MAX_TUPLE_CODES: u64 = 1 << 22;

/// Which random model draws the relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    /// Exactly `q = round((1-p) d^k)` compatible tuples per constraint.
    #[serde(rename = "RB")]
    Rb,
    /// Each tuple compatible independently with probability `1-p`.
    #[serde(rename = "RD")]
    Rd,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Rb => write!(f, "RB"),
            Model::Rd => write!(f, "RD"),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rb" => Ok(Model::Rb),
            "rd" => Ok(Model::Rd),
            other => Err(Error::invalid(format!("unknown model `{other}` (expected rb or rd)"))),
        }
    }
}

/// Control parameters of the generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    /// Variable count.
    pub n: usize,
    /// Constraint arity, at least 2.
    pub k: usize,
    /// Domain exponent: `d = round(n^alpha)`.
    pub alpha: f64,
    /// Tightness, the expected fraction of incompatible tuples, in (0, 1).
    pub p: f64,
    /// Density: `m = round(r * n * ln n)`.
    pub r: f64,
    pub model: Model,
    pub seed: u64,
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < self.k {
            return Err(Error::invalid(format!("n = {} must be at least k = {}", self.n, self.k)));
        }
        if self.k < 2 {
            return Err(Error::invalid(format!("k = {} must be at least 2", self.k)));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::invalid(format!("alpha = {} must be positive", self.alpha)));
        }
        if !self.p.is_finite() || self.p <= 0.0 || self.p >= 1.0 {
            return Err(Error::invalid(format!("p = {} must lie in (0, 1)", self.p)));
        }
        if !self.r.is_finite() || self.r <= 0.0 {
            return Err(Error::invalid(format!("r = {} must be positive", self.r)));
        }
        Ok(())
    }

    /// Domain size `d = round(n^alpha)`, clamped to at least 2.
    pub fn domain_size(&self) -> usize {
        let d = (self.n as f64).powf(self.alpha).round();
        (d as usize).max(2)
    }

    /// Constraint count `m = round(r * n * ln n)`, clamped to at least 1.
    pub fn constraint_count(&self) -> usize {
        let m = (self.r * self.n as f64 * (self.n as f64).ln()).round();
        (m as usize).max(1)
    }

    /// Tuple space size `d^k`, rejected when it outgrows the code width or
    /// the desk-scale relation budget.
    pub fn tuple_space(&self) -> Result<u64> {
        let d = self.domain_size() as u64;
        let space = d
            .checked_pow(self.k as u32)
            .ok_or_else(|| Error::invalid(format!("d^k overflows a 64-bit tuple code (d = {d}, k = {})", self.k)))?;
        if space > MAX_TUPLE_CODES {
            return Err(Error::invalid(format!(
                "tuple space d^k = {space} exceeds the relation budget of {MAX_TUPLE_CODES} codes"
            )));
        }
        Ok(space)
    }

    /// RB compatible-tuple count `q = round((1-p) d^k)`, clamped into
    /// `[1, d^k - 1]` so relations are never trivially empty or full.
    pub fn compatible_count(&self) -> Result<u64> {
        let space = self.tuple_space()?;
        let q = ((1.0 - self.p) * space as f64).round() as u64;
        Ok(q.clamp(1, space - 1))
    }
}

/// A set of tuple codes, stored as a bit-set over `[0, d^k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSet {
    blocks: Vec<u64>,
    space: u64,
    len: usize,
}

impl CodeSet {
    pub fn new(space: u64) -> Self {
        let words = (space as usize).div_ceil(64);
        CodeSet { blocks: vec![0; words], space, len: 0 }
    }

    /// Size of the code space this set ranges over (`d^k`).
    pub fn space(&self) -> u64 {
        self.space
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, code: u64) -> bool {
        debug_assert!(code < self.space);
        self.blocks[(code / 64) as usize] >> (code % 64) & 1 == 1
    }

    /// Insert a code; returns false if it was already present.
    pub fn insert(&mut self, code: u64) -> bool {
        assert!(code < self.space, "code {code} out of range {}", self.space);
        let word = &mut self.blocks[(code / 64) as usize];
        let bit = 1u64 << (code % 64);
        if *word & bit != 0 {
            return false;
        }
        *word |= bit;
        self.len += 1;
        true
    }

    /// Codes in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.blocks.iter().enumerate().flat_map(move |(w, &word)| {
            (0..64).filter_map(move |b| {
                let code = (w as u64) * 64 + b;
                (word >> b & 1 == 1 && code < self.space).then_some(code)
            })
        })
    }
}

/// One k-ary constraint: an ascending scope plus its compatible codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Strictly increasing variable indices.
    pub scope: Vec<usize>,
    /// Compatible tuple codes over the scope, base `d`, first scope variable
    /// most significant.
    pub relation: CodeSet,
}

/// A generated (or parsed) CSP instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub params: GenParams,
    /// Domain size, derived from the parameters at generation time.
    pub d: usize,
    /// Multiset of constraints; duplicate scopes stay distinct.
    pub constraints: Vec<Constraint>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn k(&self) -> usize {
        self.params.k
    }
}

/// A (possibly partial) assignment of values to variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<usize>>,
}

impl Assignment {
    pub fn new(n: usize) -> Self {
        Assignment { values: vec![None; n] }
    }

    /// Total assignment from a value-per-variable vector.
    pub fn from_values(values: Vec<usize>) -> Self {
        Assignment { values: values.into_iter().map(Some).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, var: usize) -> Option<usize> {
        self.values.get(var).copied().flatten()
    }

    pub fn set(&mut self, var: usize, value: usize) {
        self.values[var] = Some(value);
    }

    pub fn unset(&mut self, var: usize) {
        self.values[var] = None;
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn assigned_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    /// `(variable, value)` pairs of the assigned variables, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.values.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v)))
    }
}

/// Positional code of a scope-ordered value tuple: `sum v_i * d^(k-1-i)`.
pub fn encode_tuple(scope_values: &[usize], d: usize) -> Result<u64> {
    let mut code = 0u64;
    for &v in scope_values {
        if v >= d {
            return Err(Error::invalid(format!("value {v} outside domain of size {d}")));
        }
        code = code * d as u64 + v as u64;
    }
    Ok(code)
}

/// Inverse of [`encode_tuple`] for a fixed arity.
pub fn decode_tuple(code: u64, d: usize, k: usize) -> Vec<usize> {
    let mut values = vec![0; k];
    let mut rest = code;
    for slot in values.iter_mut().rev() {
        *slot = (rest % d as u64) as usize;
        rest /= d as u64;
    }
    values
}

/// Whether `a` (which must cover the whole scope) satisfies the constraint.
pub fn is_compatible(c: &Constraint, a: &Assignment, d: usize) -> Result<bool> {
    let mut code = 0u64;
    for &var in &c.scope {
        let v = a
            .get(var)
            .ok_or_else(|| Error::invalid(format!("assignment does not cover scope variable {var}")))?;
        if v >= d {
            return Err(Error::invalid(format!("value {v} outside domain of size {d}")));
        }
        code = code * d as u64 + v as u64;
    }
    Ok(c.relation.contains(code))
}

/// Whether the total assignment `a` satisfies every constraint.
pub fn check_solution(inst: &Instance, a: &Assignment) -> Result<bool> {
    if a.len() != inst.n() || !a.is_total() {
        return Err(Error::invalid("check_solution requires a total assignment".to_string()));
    }
    for c in &inst.constraints {
        if !is_compatible(c, a, inst.d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Draw `k` distinct variables out of `n` uniformly (Floyd's algorithm) and
/// return them ascending.
pub(crate) fn draw_scope(n: usize, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut scope: Vec<usize> = Vec::with_capacity(k);
    for j in (n - k)..n {
        let t = rng.gen_range(0..=j);
        if scope.contains(&t) {
            scope.push(j);
        } else {
            scope.push(t);
        }
    }
    scope.sort_unstable();
    scope
}

fn draw_relation(params: &GenParams, space: u64, rng: &mut impl Rng) -> Result<CodeSet> {
    let mut relation = CodeSet::new(space);
    match params.model {
        Model::Rb => {
            // Floyd's algorithm again, over tuple codes.
            let q = params.compatible_count()?;
            for j in (space - q)..space {
                let t = rng.gen_range(0..=j);
                if relation.contains(t) {
                    relation.insert(j);
                } else {
                    relation.insert(t);
                }
            }
        }
        Model::Rd => {
            let keep = 1.0 - params.p;
            for code in 0..space {
                if rng.gen_bool(keep) {
                    relation.insert(code);
                }
            }
        }
    }
    Ok(relation)
}

/// Generate one constraint of an instance in isolation.
///
/// Used by [`generate`]; exposed within the crate so the order-independence
/// of the substream derivation stays testable.
pub(crate) fn generate_constraint(params: &GenParams, space: u64, index: usize) -> Result<Constraint> {
    let mut scope_rng = stream(derive_seed(params.seed, &[tag::SCOPE, index as u64]));
    let scope = draw_scope(params.n, params.k, &mut scope_rng);
    let mut rel_rng = stream(derive_seed(params.seed, &[tag::RELATION, index as u64]));
    let relation = draw_relation(params, space, &mut rel_rng)?;
    Ok(Constraint { scope, relation })
}

/// Generate a Model RB or RD instance. Pure function of the parameters.
pub fn generate(params: &GenParams) -> Result<Instance> {
    params.validate()?;
    let space = params.tuple_space()?;
    let m = params.constraint_count();
    let constraints = (0..m)
        .map(|i| generate_constraint(params, space, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Instance { params: *params, d: params.domain_size(), constraints })
}

// ---------------------------------------------------------------------------
// Text format: `rbcsp v1`
// ---------------------------------------------------------------------------

impl Instance {
    /// Serialize to the versioned text format.
    ///
    /// Line 1: `rbcsp v1`. Line 2: `n k d m model alpha p r seed`. Then one
    /// line per constraint: the ascending scope, a `|` separator, and the
    /// compatible codes in ascending order.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        out.push_str("rbcsp v1\n");
        out.push_str(&format!(
            "{} {} {} {} {} {} {} {} {}\n",
            p.n,
            p.k,
            self.d,
            self.constraints.len(),
            p.model,
            p.alpha,
            p.p,
            p.r,
            p.seed
        ));
        for c in &self.constraints {
            for (i, v) in c.scope.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(&v.to_string());
            }
            out.push_str(" |");
            for code in c.relation.iter() {
                out.push(' ');
                out.push_str(&code.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Instance> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("empty instance file".to_string()))?;
        if header.trim() != "rbcsp v1" {
            return Err(Error::parse(format!("unsupported header `{header}` (expected `rbcsp v1`)")));
        }
        let meta = lines.next().ok_or_else(|| Error::parse("missing parameter line".to_string()))?;
        let fields: Vec<&str> = meta.split_whitespace().collect();
        if fields.len() != 9 {
            return Err(Error::parse(format!("parameter line has {} fields, expected 9", fields.len())));
        }
        fn num<T: FromStr>(s: &str, what: &str) -> Result<T> {
            s.parse().map_err(|_| Error::parse(format!("bad {what}: `{s}`")))
        }
        let n: usize = num(fields[0], "n")?;
        let k: usize = num(fields[1], "k")?;
        let d: usize = num(fields[2], "d")?;
        let m: usize = num(fields[3], "m")?;
        let model: Model = fields[4].parse()?;
        let params = GenParams {
            n,
            k,
            alpha: num(fields[5], "alpha")?,
            p: num(fields[6], "p")?,
            r: num(fields[7], "r")?,
            model,
            seed: num(fields[8], "seed")?,
        };
        let space = (d as u64)
            .checked_pow(k as u32)
            .filter(|&s| s <= MAX_TUPLE_CODES)
            .ok_or_else(|| Error::parse(format!("tuple space d^k too large (d = {d}, k = {k})")))?;
        let mut constraints = Vec::with_capacity(m);
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (scope_part, codes_part) = line
                .split_once('|')
                .ok_or_else(|| Error::parse(format!("constraint line {} lacks `|`", lineno + 3)))?;
            let scope: Vec<usize> = scope_part
                .split_whitespace()
                .map(|s| num(s, "scope index"))
                .collect::<Result<_>>()?;
            if scope.len() != k {
                return Err(Error::parse(format!("constraint line {} has arity {}, expected {k}", lineno + 3, scope.len())));
            }
            if !scope.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::parse(format!("constraint line {} scope not strictly increasing", lineno + 3)));
            }
            if scope.iter().any(|&v| v >= n) {
                return Err(Error::parse(format!("constraint line {} scope variable out of range", lineno + 3)));
            }
            let mut relation = CodeSet::new(space);
            for s in codes_part.split_whitespace() {
                let code: u64 = num(s, "tuple code")?;
                if code >= space {
                    return Err(Error::parse(format!("constraint line {} code {code} outside d^k = {space}", lineno + 3)));
                }
                relation.insert(code);
            }
            constraints.push(Constraint { scope, relation });
        }
        if constraints.len() != m {
            return Err(Error::parse(format!("expected {m} constraints, found {}", constraints.len())));
        }
        Ok(Instance { params, d, constraints })
    }
}
