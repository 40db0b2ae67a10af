//! Orthogonal-vectors to diameter reductions.
//!
//! The directed gadget for `k >= 3` has diameter at most `k` when the
//! instance has no orthogonal `k`-tuple and at least `2k - 1` otherwise; the
//! undirected one separates diameter 3 from diameter 5 for `k = 3`.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ov::{add_all_ones, OvInstance};

/// Default cap on vertices plus edges of a constructed gadget.
pub const DEFAULT_SIZE_BUDGET: u64 = 2_000_000;

const ABSENT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    /// Layer `L_i` of the directed gadget.
    L(usize),
    /// Vector pairs of the undirected gadget.
    S,
    /// Vector/coordinate-pair triples of the undirected gadget.
    X,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Layer::L(i) => write!(f, "L{i}"),
            Layer::S => f.write_str("S"),
            Layer::X => f.write_str("X"),
        }
    }
}

/// The OV objects a gadget vertex stands for: a tuple of vector indices and
/// a (possibly empty) tuple of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexLabel {
    pub vectors: Vec<usize>,
    pub coords: Vec<usize>,
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "a={}", join(&self.vectors))?;
        if !self.coords.is_empty() {
            write!(f, ";x={}", join(&self.coords))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub layer_of: Vec<Layer>,
    pub label_of: Vec<VertexLabel>,
    /// Tuple size for the directed gadget, `None` for the undirected one.
    pub k: Option<usize>,
    /// The instance the labels refer to (after any preprocessing).
    pub instance: OvInstance,
}

impl GadgetGraph {
    pub fn layer_size(&self, layer: Layer) -> usize {
        self.layer_of.iter().filter(|&&l| l == layer).count()
    }

    /// Sidecar lines `<vertex-id> <layer> <semantic-tuple>`.
    pub fn mapping_text(&self) -> String {
        let mut s = String::new();
        for (v, (layer, label)) in self.layer_of.iter().zip(&self.label_of).enumerate() {
            let _ = writeln!(s, "{v} {layer} {label}");
        }
        s
    }

    pub fn write_mapping(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.mapping_text())?;
        Ok(())
    }
}

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

fn over_budget(estimated: Option<u64>, budget: u64) -> Result<()> {
    match estimated {
        Some(e) if e <= budget => Ok(()),
        Some(e) => Err(Error::SizeBudget {
            estimated: e,
            budget,
        }),
        None => Err(Error::SizeBudget {
            estimated: u64::MAX,
            budget,
        }),
    }
}

/// Digits of `code` in base `base`, most significant first.
fn digits(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    out
}

/// `a[x_1] = ... = a[x_{k-i}] = 1` (coordinates 0-based in `xs`).
pub fn has_first_layer_property(inst: &OvInstance, a: usize, xs: &[usize], i: usize) -> bool {
    let k = xs.len() + 1;
    xs[..k - i].iter().all(|&x| inst.bit(a, x))
}

/// `a[x_{k+1-i}] = ... = a[x_{k-1}] = 1` (coordinates 0-based in `xs`).
pub fn has_last_layer_property(inst: &OvInstance, a: usize, xs: &[usize], i: usize) -> bool {
    let k = xs.len() + 1;
    xs[k - i..].iter().all(|&x| inst.bit(a, x))
}

fn in_first_layer(inst: &OvInstance, av: &[usize], xs: &[usize]) -> bool {
    av.iter()
        .enumerate()
        .all(|(p, &a)| has_first_layer_property(inst, a, xs, p + 1))
}

fn in_last_layer(inst: &OvInstance, av: &[usize], xs: &[usize]) -> bool {
    av.iter()
        .enumerate()
        .all(|(p, &a)| has_last_layer_property(inst, a, xs, p + 3))
}

pub fn build_directed_gadget(inst: &OvInstance, k: usize) -> Result<GadgetGraph> {
    build_directed_gadget_within(inst, k, DEFAULT_SIZE_BUDGET)
}

/// Directed gadget on layers `L_0..L_{k-1}`; refuses before allocating when
/// vertices plus edges could exceed `budget`.
pub fn build_directed_gadget_within(
    inst: &OvInstance,
    k: usize,
    budget: u64,
) -> Result<GadgetGraph> {
    if k < 3 {
        return Err(Error::param(format!(
            "directed gadget needs k >= 3, got {k}"
        )));
    }
    let n = inst.len();
    let d = inst.dim();
    let t = k - 2;
    let l0_size = checked_pow(n as u64, k - 1);
    let tuples = checked_pow(n as u64, t);
    let index_tuples = checked_pow(d as u64, k - 1);
    let layer_cap = tuples.zip(index_tuples).and_then(|(a, b)| a.checked_mul(b));
    let vertex_bound = l0_size
        .zip(layer_cap)
        .and_then(|(l0, c)| c.checked_mul(k as u64 - 1)?.checked_add(l0));
    over_budget(vertex_bound, budget)?;
    let (l0_size, tuples, index_tuples) = (
        l0_size.unwrap() as usize,
        tuples.unwrap() as usize,
        index_tuples.unwrap() as usize,
    );

    let tuple_digits: Vec<Vec<usize>> = (0..tuples).map(|c| digits(c, n, t)).collect();
    let index_digits: Vec<Vec<usize>> = (0..index_tuples).map(|c| digits(c, d, k - 1)).collect();

    // members[i][ā] = index-tuple codes of layer i vertices with vector-tuple ā
    let mut members: Vec<Vec<Vec<usize>>> = vec![Vec::new(); k];
    for (i, layer) in members.iter_mut().enumerate().skip(1) {
        *layer = tuple_digits
            .iter()
            .map(|av| {
                (0..index_tuples)
                    .filter(|&xc| {
                        let xs = &index_digits[xc];
                        (i != 1 || in_first_layer(inst, av, xs))
                            && (i != k - 1 || in_last_layer(inst, av, xs))
                    })
                    .collect()
            })
            .collect();
    }
    let count = |i: usize, a: usize| members[i][a].len() as u64;
    let mut estimate = l0_size as u64;
    for a in 0..tuples {
        let row: u64 = (1..k).map(|i| count(i, a)).sum();
        estimate += row;
        // vector-changing families, then the two index-changing ones
        estimate += row * n as u64;
        estimate += row * count(1, a) + count(k - 1, a) * row;
    }
    over_budget(Some(estimate), budget)?;

    let mut layer_of = Vec::new();
    let mut label_of = Vec::new();
    for code in 0..l0_size {
        layer_of.push(Layer::L(0));
        label_of.push(VertexLabel {
            vectors: digits(code, n, k - 1),
            coords: Vec::new(),
        });
    }
    let mut ids = vec![Vec::new(); k];
    for i in 1..k {
        ids[i] = vec![ABSENT; tuples * index_tuples];
        for a in 0..tuples {
            for &xc in &members[i][a] {
                ids[i][a * index_tuples + xc] = layer_of.len() as u32;
                layer_of.push(Layer::L(i));
                label_of.push(VertexLabel {
                    vectors: tuple_digits[a].clone(),
                    coords: index_digits[xc].clone(),
                });
            }
        }
    }
    let id = |i: usize, a: usize, xc: usize| ids[i][a * index_tuples + xc] as usize;

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let place = |p: usize| n.pow((t - 1 - p) as u32);
    for a in 0..tuples {
        let av = &tuple_digits[a];
        for &xc in &members[1][a] {
            let x1 = index_digits[xc][0];
            for last in (0..n).filter(|&b| inst.bit(b, x1)) {
                edges.push((a * n + last, id(1, a, xc)));
            }
        }
        for &xc in &members[k - 1][a] {
            let xlast = index_digits[xc][k - 2];
            for first in (0..n).filter(|&b| inst.bit(b, xlast)) {
                edges.push((id(k - 1, a, xc), first * tuples + a));
            }
        }
        for i in 1..=k - 2 {
            // layer i -> i+1 may change the vector at tuple position k-1-i
            let p = k - 2 - i;
            for &xc in &members[i][a] {
                let from = id(i, a, xc);
                for b in 0..n {
                    let bc = a - av[p] * place(p) + b * place(p);
                    let to = ids[i + 1][bc * index_tuples + xc];
                    if to != ABSENT {
                        edges.push((from, to as usize));
                    }
                }
            }
        }
        for i in 1..k {
            for &xc in &members[i][a] {
                let from = id(i, a, xc);
                for &yc in &members[1][a] {
                    let to = id(1, a, yc);
                    if from != to {
                        edges.push((from, to));
                    }
                }
            }
        }
        // i = 1 here repeats the previous family at i = k-1
        for &xc in &members[k - 1][a] {
            let from = id(k - 1, a, xc);
            for (i, layer) in members.iter().enumerate().take(k).skip(2) {
                for &yc in &layer[a] {
                    let to = id(i, a, yc);
                    if from != to {
                        edges.push((from, to));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::unweighted(true, layer_of.len(), edges)?;
    Ok(GadgetGraph {
        graph,
        layer_of,
        label_of,
        k: Some(k),
        instance: inst.clone(),
    })
}

pub fn build_undirected_gadget(inst: &OvInstance) -> Result<GadgetGraph> {
    build_undirected_gadget_within(inst, DEFAULT_SIZE_BUDGET)
}

/// Undirected gadget on `S = A^2` and `X = {(a, i, j) : a[i] = a[j] = 1}`,
/// built over the instance with the all-ones vector appended.
pub fn build_undirected_gadget_within(inst: &OvInstance, budget: u64) -> Result<GadgetGraph> {
    let inst = add_all_ones(inst);
    let n = inst.len();
    let d = inst.dim();
    let coord_pairs = (d * d) as u64;
    let nn = (n * n) as u64;
    let estimate = nn.checked_mul(coord_pairs).and_then(|sx| {
        let xs = n as u64 * coord_pairs;
        let same_coords = coord_pairs.checked_mul(nn)? / 2;
        let same_vector = (n as u64).checked_mul(coord_pairs.checked_mul(coord_pairs)?)? / 2;
        sx.checked_add(xs)?
            .checked_add(nn)?
            .checked_add(same_coords)?
            .checked_add(same_vector)
    });
    over_budget(estimate, budget)?;

    let mut layer_of = Vec::new();
    let mut label_of = Vec::new();
    for a in 0..n {
        for b in 0..n {
            layer_of.push(Layer::S);
            label_of.push(VertexLabel {
                vectors: vec![a, b],
                coords: Vec::new(),
            });
        }
    }
    let mut x_id = vec![ABSENT; n * d * d];
    for a in 0..n {
        for i in 0..d {
            for j in 0..d {
                if inst.bit(a, i) && inst.bit(a, j) {
                    x_id[(a * d + i) * d + j] = layer_of.len() as u32;
                    layer_of.push(Layer::X);
                    label_of.push(VertexLabel {
                        vectors: vec![a],
                        coords: vec![i, j],
                    });
                }
            }
        }
    }
    let xv = |a: usize, i: usize, j: usize| x_id[(a * d + i) * d + j];

    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let s = a * n + b;
            for i in 0..d {
                for j in 0..d {
                    let x = xv(a, i, j);
                    if x != ABSENT && (inst.bit(b, i) || inst.bit(b, j)) {
                        edges.push((s, x as usize));
                    }
                }
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            let col: Vec<usize> = (0..n)
                .map(|a| xv(a, i, j))
                .filter(|&x| x != ABSENT)
                .map(|x| x as usize)
                .collect();
            for (p, &u) in col.iter().enumerate() {
                for &v in &col[p + 1..] {
                    edges.push((u, v));
                }
            }
        }
    }
    for a in 0..n {
        let row: Vec<usize> = x_id[a * d * d..(a + 1) * d * d]
            .iter()
            .filter(|&&x| x != ABSENT)
            .map(|&x| x as usize)
            .collect();
        for (p, &u) in row.iter().enumerate() {
            for &v in &row[p + 1..] {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::unweighted(false, layer_of.len(), edges)?;
    Ok(GadgetGraph {
        graph,
        layer_of,
        label_of,
        k: None,
        instance: inst,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactViolation {
    /// An edge `L_i -> L_j` with `j > i + 1`.
    SkippingEdge { edge: usize, from: usize, to: usize },
    /// An edge `L_i -> L_j` with `i >= j` where neither `i = k-1` nor `j = 1`.
    BackwardEdge { edge: usize, from: usize, to: usize },
    /// An `L_1` vertex whose vectors lack the required coordinates.
    FirstLayerProperty { vertex: usize },
    /// An `L_{k-1}` vertex whose vectors lack the required coordinates.
    LastLayerProperty { vertex: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactReport {
    pub violations: Vec<FactViolation>,
}

impl FactReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the layered edge structure and the `L_1` / `L_{k-1}` membership
/// conditions of a directed gadget.
pub fn check_layer_edge_facts(gg: &GadgetGraph) -> Result<FactReport> {
    let k = match gg.k {
        Some(k) if gg.graph.is_directed() => k,
        _ => return Err(Error::param("layer facts apply to directed gadgets only")),
    };
    let level = |v: usize| match gg.layer_of.get(v) {
        Some(Layer::L(i)) => Ok(*i),
        _ => Err(Error::param(format!("vertex {v} has no directed layer"))),
    };
    let mut report = FactReport::default();
    for (e, edge) in gg.graph.edges().iter().enumerate() {
        let (i, j) = (level(edge.u)?, level(edge.v)?);
        if j > i + 1 {
            report.violations.push(FactViolation::SkippingEdge {
                edge: e,
                from: i,
                to: j,
            });
        } else if i >= j && i != k - 1 && j != 1 {
            report.violations.push(FactViolation::BackwardEdge {
                edge: e,
                from: i,
                to: j,
            });
        }
    }
    for v in 0..gg.layer_of.len() {
        let label = &gg.label_of[v];
        let i = level(v)?;
        if i == 1 && !in_first_layer(&gg.instance, &label.vectors, &label.coords) {
            report
                .violations
                .push(FactViolation::FirstLayerProperty { vertex: v });
        }
        if i == k - 1 && !in_last_layer(&gg.instance, &label.vectors, &label.coords) {
            report
                .violations
                .push(FactViolation::LastLayerProperty { vertex: v });
        }
    }
    Ok(report)
}
