//! Ramsey numbers and the constants built from them, with provenance.
//!
//! Values grow fast: `α_{n,h}` nests Ramsey bounds, so its digit count
//! multiplies at every level. Integers are kept exactly up to
//! [`EXACT_BITS_CAP`] bits; beyond that a value is carried as an upper bound
//! on its base-2 logarithm.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::iso::isomorphic;

pub const EXACT_BITS_CAP: u64 = 1 << 16;

/// Environment variable naming a JSON file that replaces the built-in
/// Ramsey table.
pub const TABLE_ENV: &str = "COVERLAB_TABLE_PATH";

/// Largest order the exhaustive Ramsey search is run for.
pub const SEARCH_ORDER_LIMIT: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoundStatus {
    /// Proven here: trivial identity or exhaustive search.
    Exact,
    /// Taken from the table of published exact values.
    TableExact,
    /// Only an upper bound is known.
    UpperBoundOnly,
}

impl BoundStatus {
    pub fn weakest(self, other: BoundStatus) -> BoundStatus {
        self.max(other)
    }

    pub fn is_exact(self) -> bool {
        self != BoundStatus::UpperBoundOnly
    }
}

/// A non-negative integer, or an upper bound on its base-2 logarithm once
/// it is too large to store.
#[derive(Clone, Debug, PartialEq)]
pub enum Magnitude {
    Int(BigUint),
    Log2(f64),
}

fn big_log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap().log2()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().unwrap().log2() + shift as f64
    }
}

impl Magnitude {
    pub fn from_u64(v: u64) -> Self {
        Magnitude::Int(BigUint::from(v))
    }

    fn normalize(self) -> Self {
        match self {
            Magnitude::Int(x) if x.bits() > EXACT_BITS_CAP => Magnitude::Log2(big_log2(&x)),
            m => m,
        }
    }

    pub fn as_int(&self) -> Option<&BigUint> {
        match self {
            Magnitude::Int(x) => Some(x),
            Magnitude::Log2(_) => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.as_int().and_then(|x| x.to_u64())
    }

    pub fn to_usize(&self) -> Option<usize> {
        self.as_int().and_then(|x| x.to_usize())
    }

    pub fn log2(&self) -> f64 {
        match self {
            Magnitude::Int(x) if x.is_zero() => f64::NEG_INFINITY,
            Magnitude::Int(x) => big_log2(x),
            Magnitude::Log2(l) => *l,
        }
    }

    pub fn add(&self, other: &Magnitude) -> Magnitude {
        match (self, other) {
            (Magnitude::Int(a), Magnitude::Int(b)) => Magnitude::Int(a + b).normalize(),
            _ => {
                let (a, b) = (self.log2(), other.log2());
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                Magnitude::Log2(hi + (1.0 + (lo - hi).exp2()).log2())
            }
        }
    }

    pub fn add_u64(&self, v: u64) -> Magnitude {
        self.add(&Magnitude::from_u64(v))
    }

    pub fn mul(&self, other: &Magnitude) -> Magnitude {
        match (self, other) {
            (Magnitude::Int(a), Magnitude::Int(b)) => Magnitude::Int(a * b).normalize(),
            _ if self.is_zero() || other.is_zero() => Magnitude::from_u64(0),
            _ => Magnitude::Log2(self.log2() + other.log2()),
        }
    }

    pub fn mul_u64(&self, v: u64) -> Magnitude {
        self.mul(&Magnitude::from_u64(v))
    }

    /// `self - 1`, saturating at zero; a logarithmic bound is kept as is.
    pub fn sub_one(&self) -> Magnitude {
        match self {
            Magnitude::Int(a) if a.is_zero() => Magnitude::Int(BigUint::zero()),
            Magnitude::Int(a) => Magnitude::Int(a - 1u32),
            m => m.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Magnitude {
        match self {
            Magnitude::Int(a) if (a.bits() as u128) * (e as u128) <= EXACT_BITS_CAP as u128 => {
                Magnitude::Int(a.pow(e))
            }
            m if m.is_zero() => Magnitude::from_u64(if e == 0 { 1 } else { 0 }),
            m => Magnitude::Log2(m.log2() * e as f64),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Magnitude::Int(a) if a.is_zero())
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Int(x) => write!(f, "{x}"),
            Magnitude::Log2(l) if l.is_finite() => write!(f, "<= 2^{l:.3}"),
            Magnitude::Log2(_) => write!(f, "beyond floating-point range"),
        }
    }
}

impl Serialize for Magnitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        match self {
            Magnitude::Int(x) => {
                m.serialize_entry("exact_digits", &x.to_string())?;
                m.serialize_entry("log2", &self.log2())?;
            }
            Magnitude::Log2(l) => {
                m.serialize_entry("exact_digits", &Option::<String>::None)?;
                m.serialize_entry("log2", &if l.is_finite() { Some(*l) } else { None })?;
            }
        }
        m.end()
    }
}

/// A Ramsey number or derived constant with its exactness status.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: Magnitude,
    pub status: BoundStatus,
    /// How the value was obtained, e.g. "trivial", "search", "table",
    /// "binomial" or "derived".
    pub provenance: String,
}

impl BoundValue {
    fn new(value: Magnitude, status: BoundStatus, provenance: impl Into<String>) -> Self {
        BoundValue {
            value,
            status,
            provenance: provenance.into(),
        }
    }

    fn derived(value: Magnitude, status: BoundStatus) -> Self {
        Self::new(value, status, "derived")
    }

    pub fn exact_u64(v: u64) -> Self {
        Self::new(Magnitude::from_u64(v), BoundStatus::Exact, "trivial")
    }

    /// The value as a machine integer when it is stored exactly and fits.
    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    /// True when the value is a proven or published exact number.
    pub fn is_computable(&self) -> bool {
        self.status.is_exact() && self.value.as_int().is_some()
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:?}, {})", self.value, self.status, self.provenance)
    }
}

/// Published exact Ramsey numbers `R(s, t)` with `s <= t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamseyTable {
    entries: BTreeMap<(usize, usize), u64>,
}

#[derive(Deserialize)]
struct TableEntry {
    s: usize,
    t: usize,
    value: u64,
}

impl Default for RamseyTable {
    fn default() -> Self {
        let entries = [
            ((3, 3), 6),
            ((3, 4), 9),
            ((3, 5), 14),
            ((3, 6), 18),
            ((3, 7), 23),
            ((3, 8), 28),
            ((3, 9), 36),
            ((4, 4), 18),
            ((4, 5), 25),
        ]
        .into_iter()
        .collect();
        RamseyTable { entries }
    }
}

impl RamseyTable {
    /// Parses `[{"s": 3, "t": 3, "value": 6}, ...]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<TableEntry> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("ramsey table: {e}")))?;
        let mut entries = BTreeMap::new();
        for e in raw {
            if e.s == 0 || e.t == 0 {
                return Err(Error::Parse(
                    "ramsey table: parameters must be positive".into(),
                ));
            }
            entries.insert((e.s.min(e.t), e.s.max(e.t)), e.value);
        }
        Ok(RamseyTable { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The table named by [`TABLE_ENV`], or the built-in one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(TABLE_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn get(&self, s: usize, t: usize) -> Option<u64> {
        self.entries.get(&(s.min(t), s.max(t))).copied()
    }
}

fn global_table() -> &'static RamseyTable {
    static TABLE: OnceLock<RamseyTable> = OnceLock::new();
    TABLE.get_or_init(|| RamseyTable::from_env().unwrap_or_default())
}

/// Result of the exhaustive search for `R(s, t)`.
#[derive(Clone, Debug, Serialize)]
pub struct RamseySearch {
    pub s: usize,
    pub t: usize,
    pub value: usize,
    /// A graph of order `value - 1` with no `K_s` and no independent `t`-set.
    pub witness: Graph,
    /// Number of such graphs up to isomorphism at each order `1, 2, ...`.
    pub counts: Vec<usize>,
}

fn has_clique(adj: &[u32], cand: u32, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if (cand.count_ones() as usize) < k {
        return false;
    }
    let mut c = cand;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        if has_clique(adj, c & adj[v], k - 1) {
            return true;
        }
    }
    false
}

fn extend(g: &Graph, s: usize, t: usize) -> Vec<Graph> {
    let k = g.order();
    let full: u32 = (1u32 << k) - 1;
    let adj: Vec<u32> = (0..k)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, w| m | 1 << w))
        .collect();
    let nadj: Vec<u32> = (0..k).map(|v| full & !adj[v] & !(1 << v)).collect();
    let mut out = Vec::new();
    for nb in 0..=full {
        // The new vertex closes a K_s inside its neighbourhood or an
        // independent t-set inside its non-neighbourhood.
        if has_clique(&adj, nb, s - 1) || has_clique(&nadj, full & !nb, t - 1) {
            continue;
        }
        let mut edges = g.edges();
        edges.extend((0..k).filter(|v| nb >> v & 1 == 1).map(|v| (v, k)));
        out.push(Graph::from_edges(k + 1, &edges).unwrap());
    }
    out
}

/// Exhaustive search for `R(s, t)` by vertex extension with isomorph
/// rejection at every order. Gives up (returns `None`) past `max_order`.
pub fn ramsey_search(s: usize, t: usize, max_order: usize) -> Option<RamseySearch> {
    assert!(s >= 1 && t >= 1);
    assert!(max_order < 32);
    if s == 1 || t == 1 {
        return Some(RamseySearch {
            s,
            t,
            value: 1,
            witness: Graph::empty(0).unwrap(),
            counts: vec![],
        });
    }
    let mut level = vec![Graph::empty(1).unwrap()];
    let mut counts = vec![1];
    for order in 2..=max_order {
        let children: Vec<Vec<Graph>> = level.par_iter().map(|g| extend(g, s, t)).collect();
        let mut buckets: HashMap<Vec<usize>, Vec<Graph>> = HashMap::new();
        let mut next = Vec::new();
        for c in children.into_iter().flatten() {
            let bucket = buckets.entry(c.degree_sequence()).or_default();
            if !bucket.iter().any(|b| isomorphic(b, &c)) {
                bucket.push(c.clone());
                next.push(c);
            }
        }
        if next.is_empty() {
            let witness = level.swap_remove(0);
            return Some(RamseySearch {
                s,
                t,
                value: order,
                witness,
                counts,
            });
        }
        counts.push(next.len());
        level = next;
    }
    None
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Whether `R(s, t)` is decided by [`ramsey_search`] here.
pub fn search_eligible(s: usize, t: usize) -> bool {
    s >= 3
        && t >= 3
        && binomial((s + t - 2) as u64, (s - 1) as u64)
            <= BigUint::from(SEARCH_ORDER_LIMIT as u64 + 1)
}

type SearchCache = Mutex<HashMap<(usize, usize), Option<usize>>>;

fn cached_search(s: usize, t: usize) -> Option<usize> {
    static CACHE: OnceLock<SearchCache> = OnceLock::new();
    let key = (s.min(t), s.max(t));
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return *v;
    }
    let v = ramsey_search(key.0, key.1, SEARCH_ORDER_LIMIT + 1).map(|r| r.value);
    cache.lock().unwrap().insert(key, v);
    v
}

/// `R(s, t)` using the process-wide table.
pub fn ramsey(s: usize, t: usize) -> BoundValue {
    ramsey_with(global_table(), s, t)
}

pub fn ramsey_with(table: &RamseyTable, s: usize, t: usize) -> BoundValue {
    assert!(s >= 1 && t >= 1, "Ramsey parameters must be positive");
    let (s, t) = (s.min(t), s.max(t));
    if s == 1 {
        return BoundValue::new(Magnitude::from_u64(1), BoundStatus::Exact, "trivial");
    }
    if s == 2 {
        return BoundValue::new(Magnitude::from_u64(t as u64), BoundStatus::Exact, "trivial");
    }
    if search_eligible(s, t) {
        if let Some(v) = cached_search(s, t) {
            return BoundValue::new(Magnitude::from_u64(v as u64), BoundStatus::Exact, "search");
        }
    }
    if let Some(v) = table.get(s, t) {
        return BoundValue::new(Magnitude::from_u64(v), BoundStatus::TableExact, "table");
    }
    BoundValue::new(
        Magnitude::Int(binomial((s + t - 2) as u64, (s - 1) as u64)).normalize(),
        BoundStatus::UpperBoundOnly,
        "binomial",
    )
}

/// `R(s, t)` where `t` may be huge.
fn ramsey_big(table: &RamseyTable, s: usize, t: &Magnitude) -> BoundValue {
    if let Some(t) = t.to_usize().filter(|&t| t < 1 << 20) {
        return ramsey_with(table, s, t);
    }
    if s <= 2 {
        let v = if s == 1 {
            Magnitude::from_u64(1)
        } else {
            t.clone()
        };
        return BoundValue::new(v, BoundStatus::Exact, "trivial");
    }
    // C(t+s-2, s-1) <= (t+s-2)^(s-1) / (s-1)!
    let k = (s - 1) as u64;
    let value = match t {
        Magnitude::Int(x) => Magnitude::Int(big_binomial(&(x + (s as u64 - 2)), k)).normalize(),
        Magnitude::Log2(l) => {
            let fact: f64 = (1..=k).map(|i| (i as f64).log2()).sum();
            Magnitude::Log2(k as f64 * (l + 1.0) - fact)
        }
    };
    BoundValue::new(value, BoundStatus::UpperBoundOnly, "binomial")
}

fn big_binomial(n: &BigUint, k: u64) -> BigUint {
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `α_{n,h}`: `α_{n,1} = 1`, `α_{n,h} = R(n, (n-1) α_{n,h-1} + 1) - 1`.
pub fn alpha_value(n: usize, h: usize) -> BoundValue {
    alpha_sequence(global_table(), n, h).pop().unwrap()
}

/// `α_{n,1}, .., α_{n,h}`.
pub fn alpha_sequence(table: &RamseyTable, n: usize, h: usize) -> Vec<BoundValue> {
    assert!(n >= 1 && h >= 1);
    let mut out = vec![BoundValue::exact_u64(1)];
    for _ in 2..=h {
        let prev = out.last().unwrap();
        let arg = prev.value.mul_u64(n as u64 - 1).add_u64(1);
        let r = ramsey_big(table, n, &arg);
        out.push(BoundValue::derived(
            r.value.sub_one(),
            prev.status.weakest(r.status),
        ));
    }
    out
}

/// `ν = R(n-1, n) - 1`.
pub fn nu_value(n: usize) -> BoundValue {
    assert!(n >= 2);
    let r = ramsey(n - 1, n);
    BoundValue::derived(r.value.sub_one(), r.status)
}

/// `ξ_{n,i} = ((R(n-1,n) - 1)^i - 1) / (R(n-1,n) - 2)`.
pub fn xi_value(n: usize, i: usize) -> BoundValue {
    assert!(n >= 3 && i >= 1);
    let nu = nu_value(n);
    let value = match &nu.value {
        Magnitude::Int(v) => {
            let num = Magnitude::Int(v.clone()).pow(i as u32);
            match num {
                Magnitude::Int(p) => Magnitude::Int((p - 1u32) / (v - 1u32)),
                // Σ ν^(p-1) <= i ν^(i-1)
                Magnitude::Log2(_) => {
                    Magnitude::Log2((i as f64).log2() + (i as f64 - 1.0) * nu.value.log2())
                }
            }
        }
        Magnitude::Log2(l) => Magnitude::Log2((i as f64).log2() + (i as f64 - 1.0) * l),
    };
    BoundValue::derived(value, nu.status)
}

/// The summation form `Σ_{1<=p<=i} ν^(p-1)` of `ξ_{n,i}`.
pub fn xi_by_sum(n: usize, i: usize) -> BoundValue {
    let nu = nu_value(n);
    let mut total = Magnitude::from_u64(0);
    for p in 1..=i {
        total = total.add(&nu.value.pow(p as u32 - 1));
    }
    BoundValue::derived(total, nu.status)
}

/// `R(n,n) Σ_{2<=h<=l} α_{n,h} + 1`, the dominating-set bound for connected
/// `{K*_n, S*_n}`-free graphs of diameter at most `l`.
pub fn domination_bound(n: usize, l: usize) -> BoundValue {
    let table = global_table();
    let r = ramsey(n, n);
    let mut status = r.status;
    let mut sum = Magnitude::from_u64(0);
    if l >= 2 {
        for a in alpha_sequence(table, n, l).into_iter().skip(1) {
            status = status.weakest(a.status);
            sum = sum.add(&a.value);
        }
    }
    BoundValue::derived(r.value.mul(&sum).add_u64(1), status)
}

/// `c_1(n, l0) = (R(n,n) Σ α + 1) c_χ(n)`, affine in the unknown `c_χ`.
pub fn c1(n: usize, l0: usize) -> AffineBound {
    let d = domination_bound(n, l0);
    AffineBound {
        constant: Magnitude::from_u64(0),
        chi_coefficient: d.value,
        status: d.status,
    }
}

/// `c_2(n, l0) = (R(n,n) Σ α + 1) ξ_{n,n-2}`.
pub fn c2(n: usize, l0: usize) -> BoundValue {
    let d = domination_bound(n, l0);
    let xi = xi_value(n, n - 2);
    BoundValue::derived(d.value.mul(&xi.value), d.status.weakest(xi.status))
}

/// `constant + chi_coefficient · c_χ(n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineBound {
    pub constant: Magnitude,
    pub chi_coefficient: Magnitude,
    /// Status of the Ramsey-derived parts.
    pub status: BoundStatus,
}

impl AffineBound {
    /// Evaluates with a given `c_χ(n)`; without one only an unknown-status
    /// symbolic bound exists, reported as `None`.
    pub fn evaluate(&self, c_chi: Option<u64>) -> Option<BoundValue> {
        let c = c_chi?;
        let v = self.constant.add(&self.chi_coefficient.mul_u64(c));
        Some(BoundValue::new(
            v,
            self.status,
            "derived with supplied c_chi",
        ))
    }

    /// Status of the bound as a number: without `c_χ` it is only symbolic.
    pub fn effective_status(&self, c_chi: Option<u64>) -> BoundStatus {
        if c_chi.is_some() {
            self.status
        } else {
            BoundStatus::UpperBoundOnly
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverConstants {
    pub n: usize,
    pub nu: BoundValue,
    pub xi: BoundValue,
    /// `c_1(n, n²-1)` and `c_1(n, n²+2n-1)`.
    pub c1_short: AffineBound,
    pub c1_long: AffineBound,
    pub c2_short: BoundValue,
    pub c2_long: BoundValue,
    /// `(n-1)²ν + (n-1)²ν c_1(n, n²-1) + c_1(n, n²+2n-1)`.
    pub c_inspc: AffineBound,
    pub c_inspc_status: BoundStatus,
    pub c_inspc_value: Option<BoundValue>,
    pub symbolic_in_c_chi: bool,
    /// `(n-1)² + (n-1)²ν c_2(n, n²-1) + c_2(n, n²+2n-1)`.
    pub c_inspp: BoundValue,
    pub c_chi: Option<u64>,
}

/// The constants of the SP-cover and SP-partition bounds at `n >= 4`.
pub fn cover_constants(n: usize, c_chi: Option<u64>) -> Result<CoverConstants> {
    if n < 4 {
        return Err(Error::BadParameter(format!(
            "constants need n >= 4, got {n}"
        )));
    }
    let nu = nu_value(n);
    let xi = xi_value(n, n - 2);
    let short = n * n - 1;
    let long = n * n + 2 * n - 1;
    let c1_short = c1(n, short);
    let c1_long = c1(n, long);
    let c2_short = c2(n, short);
    let c2_long = c2(n, long);
    let sq = ((n - 1) * (n - 1)) as u64;
    let sq_nu = nu.value.mul_u64(sq);
    let c_inspc = AffineBound {
        constant: sq_nu.clone(),
        chi_coefficient: sq_nu
            .mul(&c1_short.chi_coefficient)
            .add(&c1_long.chi_coefficient),
        status: nu.status.weakest(c1_short.status).weakest(c1_long.status),
    };
    let c_inspp = BoundValue::derived(
        Magnitude::from_u64(sq)
            .add(&sq_nu.mul(&c2_short.value))
            .add(&c2_long.value),
        nu.status.weakest(c2_short.status).weakest(c2_long.status),
    );
    Ok(CoverConstants {
        n,
        c_inspc_status: c_inspc.effective_status(c_chi),
        c_inspc_value: c_inspc.evaluate(c_chi),
        symbolic_in_c_chi: c_chi.is_none(),
        nu,
        xi,
        c1_short,
        c1_long,
        c2_short,
        c2_long,
        c_inspc,
        c_inspp,
        c_chi,
    })
}
