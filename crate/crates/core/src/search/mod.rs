//! Branch-and-prune search: DMBC, DMBC+, UCA5, UCA6 and UCA6+.

mod dimstop;
mod engine;
mod waitlist;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::contract::ContractorConfig;
use crate::interval::IntervalBox;
use crate::model::{ConstraintSet, Ncsp};

pub use dimstop::{dim_stop_solver, uniform_cuts, DimStopOutput};
pub use waitlist::{Order, WaitList};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Dmbc,
    DmbcPlus,
    Uca5,
    Uca6,
    Uca6Plus,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Algorithm::Dmbc, Algorithm::DmbcPlus, Algorithm::Uca5, Algorithm::Uca6, Algorithm::Uca6Plus];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dmbc => "dmbc",
            Algorithm::DmbcPlus => "dmbc_plus",
            Algorithm::Uca5 => "uca5",
            Algorithm::Uca6 => "uca6",
            Algorithm::Uca6Plus => "uca6_plus",
        }
    }

    pub fn is_uca(self) -> bool {
        matches!(self, Algorithm::Uca5 | Algorithm::Uca6 | Algorithm::Uca6Plus)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.to_ascii_lowercase().chars().filter(|c| !matches!(c, '_' | '-')).collect();
        Ok(match key.as_str() {
            "dmbc" => Algorithm::Dmbc,
            "dmbcplus" | "dmbc+" => Algorithm::DmbcPlus,
            "uca5" => Algorithm::Uca5,
            "uca6" => Algorithm::Uca6,
            "uca6plus" | "uca6+" => Algorithm::Uca6Plus,
            _ => return Err(format!("unknown algorithm '{s}'")),
        })
    }
}

/// How UCA algorithms split a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitPolicy {
    /// Always bisect.
    Ds,
    /// Box splitting around the pivot's complementary box, bisecting when
    /// that fails.
    BsDs,
}

impl FromStr for SplitPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ds" => Ok(SplitPolicy::Ds),
            "bs-ds" | "bsds" | "bs+ds" => Ok(SplitPolicy::BsDs),
            _ => Err(format!("unknown split policy '{s}'")),
        }
    }
}

/// Which running constraints get a fresh complementary box at each UCA6+
/// split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CbPolicy {
    All,
    FirstK(usize),
}

impl FromStr for CbPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.to_ascii_lowercase();
        if s == "all" {
            return Ok(CbPolicy::All);
        }
        let k = s.strip_prefix("first-").or_else(|| s.strip_prefix("first")).unwrap_or(&s);
        k.parse().map(CbPolicy::FirstK).map_err(|_| format!("unknown cb policy '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    pub eps: Vec<f64>,
    pub split: SplitPolicy,
    /// Pass complementary boxes from parent to children (UCA6, UCA6+).
    pub memo: bool,
    pub frag_ratio: f64,
    pub d_stop: usize,
    pub order: Order,
    pub cb_policy: CbPolicy,
    pub contractor: ContractorConfig,
}

impl SolveOptions {
    /// Options with the usual defaults for `algorithm`.
    pub fn new(algorithm: Algorithm, eps: Vec<f64>) -> SolveOptions {
        let split = if algorithm.is_uca() { SplitPolicy::BsDs } else { SplitPolicy::Ds };
        SolveOptions {
            algorithm,
            eps,
            split,
            memo: algorithm == Algorithm::Uca6,
            frag_ratio: 0.25,
            d_stop: 1,
            order: Order::Dfs,
            cb_policy: CbPolicy::All,
            contractor: ContractorConfig::default(),
        }
    }

    /// Same tolerance in every one of `dim` dimensions.
    pub fn uniform(algorithm: Algorithm, dim: usize, eps: f64) -> SolveOptions {
        SolveOptions::new(algorithm, vec![eps; dim])
    }

    pub fn validate(&self, dim: usize) -> Result<(), SolveError> {
        if self.eps.len() != dim {
            return Err(SolveError::InvalidOptions(format!("eps has {} components, problem has {dim} variables", self.eps.len())));
        }
        if let Some(e) = self.eps.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(SolveError::InvalidOptions(format!("eps must be positive and finite, got {e}")));
        }
        if !(self.frag_ratio > 0.0 && self.frag_ratio < 1.0) {
            return Err(SolveError::InvalidOptions(format!("fragmentation ratio must lie in (0, 1), got {}", self.frag_ratio)));
        }
        if self.d_stop == 0 {
            return Err(SolveError::InvalidOptions("d_stop must be at least 1".into()));
        }
        if self.cb_policy == CbPolicy::FirstK(0) {
            return Err(SolveError::InvalidOptions("first-k policy needs k >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("invalid options: {0}")]
    InvalidOptions(String),
}

/// A boundary box with the constraints still running in it.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryBox {
    pub bx: IntervalBox,
    pub running: ConstraintSet,
    /// Number of uniform cells merged along each dimension; all ones unless
    /// the box was compacted from a cell subdivision.
    pub cells: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub wall_time_s: f64,
    pub inner_boxes: usize,
    pub boundary_boxes: usize,
    pub dr_calls: u64,
    pub cb_calls: u64,
    pub ds_splits: u64,
    pub bs_splits: u64,
    pub nodes: u64,
    pub peak_waitlist: usize,
    pub inner_volume: f64,
    pub boundary_volume: f64,
    pub outer_volume: f64,
    /// Inner over outer volume; absent when the outer volume is zero.
    pub ratio: Option<f64>,
}

impl SolveStats {
    pub fn set_volumes(&mut self, inner: &[IntervalBox], boundary: &[BoundaryBox]) {
        self.inner_boxes = inner.len();
        self.boundary_boxes = boundary.len();
        self.inner_volume = inner.iter().map(IntervalBox::volume).sum();
        self.boundary_volume = boundary.iter().map(|b| b.bx.volume()).sum();
        self.outer_volume = self.inner_volume + self.boundary_volume;
        self.ratio = (self.outer_volume > 0.0).then(|| self.inner_volume / self.outer_volume);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PavingResult {
    pub problem: String,
    pub var_names: Vec<String>,
    pub eps: Vec<f64>,
    pub algorithm: Algorithm,
    pub inner: Vec<IntervalBox>,
    pub boundary: Vec<BoundaryBox>,
    pub stats: SolveStats,
}

impl PavingResult {
    pub fn total_boxes(&self) -> usize {
        self.inner.len() + self.boundary.len()
    }

    /// Post-conditions every run must meet: boxes lie in the domain and no
    /// boundary box could still be split under its running constraints.
    pub fn contract_violations(&self, ncsp: &Ncsp) -> Vec<String> {
        let dom = ncsp.domain();
        let mut out = Vec::new();
        for (k, b) in self.inner.iter().enumerate() {
            if b.is_empty() || !b.subset_of(&dom) {
                out.push(format!("inner box {k} is empty or outside the domain"));
            }
        }
        for (k, b) in self.boundary.iter().enumerate() {
            if b.bx.is_empty() || !b.bx.subset_of(&dom) {
                out.push(format!("boundary box {k} is empty or outside the domain"));
            }
            if let Some(i) = precision_violation(ncsp, b, &self.eps) {
                out.push(format!("boundary box {k} still has active variable {}", ncsp.vars()[i].name));
            }
        }
        out
    }
}

/// First variable of `b` that is active with respect to its running
/// constraints, measured per merged cell.
pub fn precision_violation(ncsp: &Ncsp, b: &BoundaryBox, eps: &[f64]) -> Option<usize> {
    let mut occurs = vec![false; b.bx.dim()];
    for id in b.running.iter() {
        for &v in ncsp.constraint(id).vars() {
            occurs[v] = true;
        }
    }
    (0..b.bx.dim()).find(|&i| {
        let x = b.bx[i];
        let n = b.cells.get(i).copied().unwrap_or(1).max(1);
        occurs[i] && !x.is_canonical() && x.width() > eps[i] * f64::from(n) * (1.0 + 4.0 * f64::EPSILON)
    })
}

/// Solves `ncsp`, returning inner and boundary boxes.
pub fn solve(ncsp: &Ncsp, opts: &SolveOptions) -> Result<PavingResult, SolveError> {
    opts.validate(ncsp.dim())?;
    Ok(engine::Engine::new(ncsp, opts).run())
}
