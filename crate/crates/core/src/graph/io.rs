use std::fmt::Write as _;
use std::path::Path;

use super::{Edge, Graph};
use crate::error::{Error, Result};

const MAX_DECIMALS: u32 = 9;

/// A weight token split into integer digits and fractional digits.
struct RawWeight {
    whole: u64,
    frac: u64,
    places: u32,
}

fn parse_weight(tok: &str, line: usize) -> Result<RawWeight> {
    let bad = || Error::parse(line, format!("invalid weight `{tok}`"));
    let (whole_s, frac_s) = match tok.split_once('.') {
        Some((a, b)) => (a, b),
        None => (tok, ""),
    };
    if whole_s.is_empty() && frac_s.is_empty() {
        return Err(bad());
    }
    if !whole_s.bytes().all(|b| b.is_ascii_digit()) || !frac_s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let frac_s = frac_s.trim_end_matches('0');
    if frac_s.len() as u32 > MAX_DECIMALS {
        return Err(Error::parse(
            line,
            format!("weight `{tok}` has more than {MAX_DECIMALS} decimal places"),
        ));
    }
    let whole = if whole_s.is_empty() {
        0
    } else {
        whole_s.parse().map_err(|_| bad())?
    };
    let frac = if frac_s.is_empty() {
        0
    } else {
        frac_s.parse().map_err(|_| bad())?
    };
    Ok(RawWeight {
        whole,
        frac,
        places: frac_s.len() as u32,
    })
}

impl Graph {
    /// Parses the edge-list text format:
    /// `directed|undirected <n> <m>` followed by `m` lines `<u> <v> <w>`.
    ///
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::parse(
                hline,
                "header must be `directed|undirected <n> <m>`",
            ));
        }
        let directed = match parts[0] {
            "directed" => true,
            "undirected" => false,
            other => return Err(Error::parse(hline, format!("unknown graph kind `{other}`"))),
        };
        let n: usize = parts[1]
            .parse()
            .map_err(|_| Error::parse(hline, format!("invalid vertex count `{}`", parts[1])))?;
        let m: usize = parts[2]
            .parse()
            .map_err(|_| Error::parse(hline, format!("invalid edge count `{}`", parts[2])))?;

        let mut raw = Vec::with_capacity(m);
        for (lineno, l) in lines.by_ref().take(m) {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(Error::parse(lineno, "edge line must be `<u> <v> <w>`"));
            }
            let u: usize = toks[0]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid vertex `{}`", toks[0])))?;
            let v: usize = toks[1]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("invalid vertex `{}`", toks[1])))?;
            for x in [u, v] {
                if x >= n {
                    return Err(Error::parse(
                        lineno,
                        format!("vertex {x} out of range [0, {n})"),
                    ));
                }
            }
            let w = parse_weight(toks[2], lineno)?;
            if w.whole == 0 && w.frac == 0 {
                return Err(Error::parse(lineno, "edge weight must be positive"));
            }
            raw.push((u, v, w));
        }
        if raw.len() != m {
            return Err(Error::parse(
                hline,
                format!("header declares {m} edges, found {}", raw.len()),
            ));
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(Error::parse(lineno, "trailing content after last edge"));
        }

        let places = raw.iter().map(|(_, _, w)| w.places).max().unwrap_or(0);
        let scale = 10u64.pow(places);
        let mut edges = Vec::with_capacity(m);
        for (u, v, w) in raw {
            let ticks = w
                .whole
                .checked_mul(scale)
                .and_then(|t| t.checked_add(w.frac * 10u64.pow(places - w.places)))
                .ok_or_else(|| Error::parse(hline, "edge weight too large"))?;
            edges.push(Edge { u, v, w: ticks });
        }
        Graph::from_parts(directed, n, edges, 1.0 / scale as f64, Some(places))
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Graph> {
        Graph::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let kind = if self.directed {
            "directed"
        } else {
            "undirected"
        };
        let _ = writeln!(s, "{kind} {} {}", self.n, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, self.format_ticks(e.w));
        }
        s
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}
