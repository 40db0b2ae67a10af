//! Single-set k-orthogonal-vectors instances and their brute-force oracle.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::rng;

pub const MAX_DIM: usize = 64;

/// A set of `ñ` binary vectors of dimension `d`, packed one per word.
/// Bit `x` of a word is coordinate `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OvInstance {
    dim: usize,
    vectors: Vec<u64>,
}

/// Indices of `k` vectors (repeats allowed) whose coordinate-wise product
/// vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvWitness(pub Vec<usize>);

impl OvWitness {
    pub fn is_valid(&self, inst: &OvInstance) -> bool {
        !self.0.is_empty()
            && self.0.iter().all(|&i| i < inst.len())
            && self
                .0
                .iter()
                .fold(inst.full_mask(), |acc, &i| acc & inst.vectors[i])
                == 0
    }
}

impl OvInstance {
    pub fn new(dim: usize, vectors: Vec<u64>) -> Result<OvInstance> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::param(format!(
                "dimension must be in 1..={MAX_DIM}, got {dim}"
            )));
        }
        if vectors.is_empty() {
            return Err(Error::param("instance needs at least one vector"));
        }
        let inst = OvInstance { dim, vectors };
        if let Some(v) = inst.vectors.iter().find(|&&v| v & !inst.full_mask() != 0) {
            return Err(Error::param(format!(
                "vector {v:#b} has bits beyond dimension {dim}"
            )));
        }
        Ok(inst)
    }

    /// Builds an instance from rows like `"1101"` (character `x` is coordinate `x`).
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<OvInstance> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let vectors = rows
            .iter()
            .enumerate()
            .map(|(i, r)| parse_row(r.as_ref(), dim, i + 2))
            .collect::<Result<Vec<_>>>()?;
        OvInstance::new(dim, vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[u64] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> u64 {
        self.vectors[i]
    }

    pub fn bit(&self, i: usize, x: usize) -> bool {
        self.vectors[i] >> x & 1 == 1
    }

    pub fn set_bit(&mut self, i: usize, x: usize, value: bool) {
        if value {
            self.vectors[i] |= 1 << x;
        } else {
            self.vectors[i] &= !(1 << x);
        }
    }

    pub fn full_mask(&self) -> u64 {
        if self.dim == 64 {
            u64::MAX
        } else {
            (1u64 << self.dim) - 1
        }
    }

    pub fn row_string(&self, i: usize) -> String {
        (0..self.dim)
            .map(|x| if self.bit(i, x) { '1' } else { '0' })
            .collect()
    }

    pub fn parse(text: &str) -> Result<OvInstance> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let nums: Option<Vec<usize>> = parts.iter().map(|p| p.parse().ok()).collect();
        let (count, dim) = match nums.as_deref() {
            Some(&[c, d]) => (c, d),
            _ => return Err(Error::parse(hline, "header must be `<count> <dim>`")),
        };
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::parse(
                hline,
                format!("dimension must be in 1..={MAX_DIM}"),
            ));
        }
        let mut vectors = Vec::with_capacity(count);
        for (lineno, l) in lines.by_ref().take(count) {
            vectors.push(parse_row(l, dim, lineno)?);
        }
        if vectors.len() != count {
            return Err(Error::parse(
                hline,
                format!("header declares {count} vectors, found {}", vectors.len()),
            ));
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(Error::parse(lineno, "trailing content after last vector"));
        }
        OvInstance::new(dim, vectors)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<OvInstance> {
        OvInstance::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.len(), self.dim);
        for i in 0..self.len() {
            let _ = writeln!(s, "{}", self.row_string(i));
        }
        s
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn parse_row(row: &str, dim: usize, line: usize) -> Result<u64> {
    if row.len() != dim {
        return Err(Error::parse(
            line,
            format!("expected {dim} characters, got {}", row.len()),
        ));
    }
    let mut v = 0u64;
    for (x, c) in row.chars().enumerate() {
        match c {
            '0' => {}
            '1' => v |= 1 << x,
            _ => return Err(Error::parse(line, format!("invalid character `{c}`"))),
        }
    }
    Ok(v)
}

/// Searches all `k`-tuples (with repetition) for an orthogonal one and
/// returns the lexicographically smallest.
pub fn brute_force(inst: &OvInstance, k: usize) -> Result<Option<OvWitness>> {
    if k < 2 {
        return Err(Error::param(format!("k must be at least 2, got {k}")));
    }
    let mut tuple = Vec::with_capacity(k);
    let found = search(inst, k, 0, inst.full_mask(), &mut tuple);
    Ok(found.then_some(OvWitness(tuple)))
}

// Orthogonality ignores order, so nondecreasing tuples suffice; the first
// one found in lexicographic order is also the smallest unordered tuple.
fn search(inst: &OvInstance, k: usize, start: usize, acc: u64, tuple: &mut Vec<usize>) -> bool {
    if acc == 0 && !tuple.is_empty() {
        let last = *tuple.last().unwrap();
        tuple.resize(k, last);
        return true;
    }
    if tuple.len() == k {
        return false;
    }
    for i in start..inst.len() {
        tuple.push(i);
        if search(inst, k, i, acc & inst.vectors[i], tuple) {
            return true;
        }
        tuple.pop();
    }
    false
}

pub fn gen_random(n_vec: usize, dim: usize, p_one: f64, seed: u64) -> Result<OvInstance> {
    if !(0.0..=1.0).contains(&p_one) {
        return Err(Error::param(format!(
            "p_one must be in [0, 1], got {p_one}"
        )));
    }
    let mut r = rng(seed);
    let vectors = (0..n_vec)
        .map(|_| (0..dim).fold(0u64, |v, x| if r.gen_bool(p_one) { v | 1 << x } else { v }))
        .collect();
    OvInstance::new(dim, vectors)
}

/// Clears bits in `min(k, n)` distinct vectors until they are orthogonal;
/// padding with repeats then gives an orthogonal `k`-tuple.
pub fn plant(inst: &OvInstance, k: usize, seed: u64) -> Result<OvInstance> {
    if k < 2 {
        return Err(Error::param(format!("k must be at least 2, got {k}")));
    }
    if inst.vectors.contains(&0) {
        return Ok(inst.clone());
    }
    if inst.is_empty() {
        return Err(Error::param("cannot plant into an empty instance"));
    }
    let mut r = rng(seed);
    let count = k.min(inst.len());
    let chosen = sample(&mut r, inst.len(), count).into_vec();
    let mut out = inst.clone();
    for x in 0..inst.dim {
        if chosen.iter().all(|&i| out.bit(i, x)) {
            let victim = chosen[r.gen_range(0..count)];
            out.set_bit(victim, x, false);
        }
    }
    Ok(out)
}

/// Appends the all-ones vector unless already present.
pub fn add_all_ones(inst: &OvInstance) -> OvInstance {
    let mut out = inst.clone();
    let ones = inst.full_mask();
    if !out.vectors.contains(&ones) {
        out.vectors.push(ones);
    }
    out
}
