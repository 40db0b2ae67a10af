//! Parameter sweeps. Trials run in parallel with seed `seed + trial`; rows
//! are sorted before writing so output does not depend on scheduling.

use anyhow::{bail, Result};
use rayon::prelude::*;

use diamgap::certificates::{generate_ub_certificate, verify_ub, CertParams, GenMode};
use diamgap::graph::{exact_diameter, random_connected};
use diamgap::ov::{brute_force, gen_random, plant};
use diamgap::reductions::build_directed_gadget_within;

use crate::{hopset_builder, CertModeArg, HopsetSourceChoice};

pub struct GapSweep {
    pub ks: Vec<usize>,
    pub ns: Vec<usize>,
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub p_one: f64,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GapRow {
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub planted: bool,
    pub ov_solution: bool,
    /// `None` when some pair is unreachable.
    pub diameter: Option<u64>,
    pub gap_ok: bool,
}

impl GapRow {
    pub const HEADER: &'static str = "k,n,d,seed,planted,ov_solution,diameter,gap_ok";

    pub fn to_csv(&self) -> String {
        let diameter = self
            .diameter
            .map_or_else(|| "unreachable".to_string(), |d| d.to_string());
        format!(
            "{},{},{},{},{},{},{},{}",
            self.k,
            self.n,
            self.d,
            self.seed,
            self.planted,
            self.ov_solution,
            diameter,
            self.gap_ok
        )
    }
}

impl GapSweep {
    pub fn run(&self) -> Result<Vec<GapRow>> {
        if self.ns.is_empty() {
            bail!("--n needs at least one value");
        }
        if let Some(&k) = self.ks.iter().find(|&&k| k < 3) {
            bail!("the directed gadget needs k >= 3, got {k}");
        }
        let jobs: Vec<(usize, usize, u64)> = self
            .ks
            .iter()
            .flat_map(|&k| {
                self.ns
                    .iter()
                    .flat_map(move |&n| (0..self.trials).map(move |t| (k, n, t)))
            })
            .collect();
        let mut rows = jobs
            .into_par_iter()
            .map(|(k, n, trial)| self.trial(k, n, trial))
            .collect::<Result<Vec<_>>>()?;
        rows.sort();
        Ok(rows)
    }

    fn trial(&self, k: usize, n: usize, trial: u64) -> Result<GapRow> {
        let seed = self.seed.wrapping_add(trial);
        let planted = trial.is_multiple_of(2);
        let mut inst = gen_random(n, self.dim, self.p_one, seed)?;
        if planted {
            inst = plant(&inst, k, seed)?;
        }
        let ov_solution = brute_force(&inst, k)?.is_some();
        let gg = build_directed_gadget_within(&inst, k, self.budget)?;
        let diameter = exact_diameter(&gg.graph).ticks();
        let k64 = k as u64;
        let gap_ok = match (ov_solution, diameter) {
            (true, None) => true,
            (true, Some(d)) => d >= 2 * k64 - 1,
            (false, Some(d)) => d <= k64,
            (false, None) => false,
        };
        Ok(GapRow {
            k,
            n,
            d: self.dim,
            seed,
            planted,
            ov_solution,
            diameter,
            gap_ok,
        })
    }
}

pub struct CertSweep {
    pub ks: Vec<usize>,
    pub ns: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub epsilon: f64,
    pub density: usize,
    pub max_weight: u64,
    pub directed: bool,
    pub mode: CertModeArg,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct CertRow {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub diameter: f64,
    pub variant: &'static str,
    pub accepted: bool,
}

impl CertRow {
    pub const HEADER: &'static str = "k,n,m,seed,diameter,variant,accepted";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.k, self.n, self.m, self.seed, self.diameter, self.variant, self.accepted
        )
    }
}

impl CertSweep {
    pub fn run(&self) -> Result<Vec<CertRow>> {
        if self.ks.is_empty() || self.ns.is_empty() {
            bail!("--k and --n need at least one value each");
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 2) {
            bail!("graphs need at least 2 vertices, got {n}");
        }
        let jobs: Vec<(usize, usize, u64)> = self
            .ks
            .iter()
            .flat_map(|&k| {
                self.ns
                    .iter()
                    .flat_map(move |&n| (0..self.trials).map(move |t| (k, n, t)))
            })
            .collect();
        let mut rows = jobs
            .into_par_iter()
            .map(|(k, n, trial)| self.trial(k, n, trial))
            .collect::<Result<Vec<_>>>()?;
        rows.sort_by_key(|r| (r.k, r.n, r.seed));
        Ok(rows)
    }

    fn trial(&self, k: usize, n: usize, trial: u64) -> Result<CertRow> {
        let seed = self.seed.wrapping_add(trial);
        let g = random_connected(self.directed, n, self.density * n, self.max_weight, seed)?;
        let diameter = g
            .distance_units(exact_diameter(&g))
            .expect("backbone keeps the graph connected");
        let params = CertParams::new(k, diameter, self.epsilon)?;
        let generated = match self.mode {
            CertModeArg::Unweighted => {
                generate_ub_certificate(&g, &params, GenMode::Unweighted, seed)
            }
            CertModeArg::Hopset => {
                let source = if self.directed {
                    HopsetSourceChoice::Exhaustive
                } else {
                    HopsetSourceChoice::Sampled
                };
                let builder = hopset_builder(&g, source, 0.5, self.epsilon, self.budget)?;
                generate_ub_certificate(&g, &params, GenMode::Hopset(&*builder), seed)
            }
        };
        let (variant, accepted) = match generated {
            Ok(cert) => (
                cert.variant_name(),
                verify_ub(&g, &cert, &params).is_accept(),
            ),
            Err(diamgap::Error::GenerationFailure(_)) => ("none", false),
            Err(e) => return Err(e.into()),
        };
        Ok(CertRow {
            k,
            n,
            m: g.edge_count(),
            seed,
            diameter,
            variant,
            accepted,
        })
    }
}
