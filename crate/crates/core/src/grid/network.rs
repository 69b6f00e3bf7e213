//! Bus networks with 2×2 dq blocks and their reduction to boundary buses.
//!
//! Network documents (JSON), bus indices 0-based:
//! ```json
//! {
//!   "label": "feeder",
//!   "n_bus": 3,
//!   "omega0": 314.159,
//!   "branches": [
//!     {"from": 0, "to": 1, "r": 0.01, "l": 0.05},
//!     {"from": 1, "to": 2, "y": [1.0, -3.0]},
//!     {"from": 0, "to": 2, "model": "line.json"}
//!   ],
//!   "shunts": [{"bus": 1, "block": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}],
//!   "boundary": [0, 2]
//! }
//! ```
//! An element is one of `r`/`l` (series RL, optional per-element `omega0`),
//! `y` (scalar admittance `[re, im]` applied to both axes), `block` (constant
//! 2×2 admittance as `[re, im]` pairs) or `model` (path to a model file,
//! relative to the network document).

use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

use super::blocks::RlGridParams;
use crate::error::{Error, Result};
use crate::lti::{invert_at, load_model, ComplexMatrix, FrequencyResponse, StabilityCheck, MAX_CONDITION};

/// Admittance of a branch or shunt.
#[derive(Clone)]
pub enum Element {
    Rl(RlGridParams),
    /// `y·I₂`.
    Scalar(Complex64),
    Block(ComplexMatrix),
    Model(Arc<dyn FrequencyResponse>),
}

impl std::fmt::Debug for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Rl(p) => f.debug_tuple("Rl").field(p).finish(),
            Self::Scalar(y) => f.debug_tuple("Scalar").field(y).finish(),
            Self::Block(b) => f.debug_tuple("Block").field(b).finish(),
            Self::Model(m) => write!(f, "Model(dim {})", m.dim()),
        }
    }
}

impl Element {
    pub fn admittance(&self, omega: f64) -> Result<ComplexMatrix> {
        match self {
            Self::Rl(p) => invert_at(&p.impedance_at(Complex64::new(0.0, omega))).map_err(|e| e.at_omega(omega)),
            Self::Scalar(y) => Ok(ComplexMatrix::scalar(2, *y)),
            Self::Block(b) => Ok(b.clone()),
            Self::Model(m) => m.response(omega),
        }
    }

    fn check(&self) -> Result<()> {
        let dim = match self {
            Self::Block(b) => b.dim(),
            Self::Model(m) => m.dim(),
            _ => 2,
        };
        if dim != 2 {
            return Err(Error::Dimension(format!("network elements must be 2x2, got {dim}x{dim}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub from: usize,
    pub to: usize,
    pub element: Element,
}

#[derive(Clone, Debug)]
pub struct Shunt {
    pub bus: usize,
    pub element: Element,
}

/// A connected network with designated boundary (converter) buses.
#[derive(Clone, Debug)]
pub struct NetworkCase {
    pub label: String,
    n_bus: usize,
    branches: Vec<Branch>,
    shunts: Vec<Shunt>,
    boundary: Vec<usize>,
}

impl NetworkCase {
    pub fn new(n_bus: usize, branches: Vec<Branch>, shunts: Vec<Shunt>, boundary: Vec<usize>) -> Result<Self> {
        if n_bus == 0 {
            return Err(Error::InvalidInput("network has no buses".into()));
        }
        for (k, b) in branches.iter().enumerate() {
            if b.from >= n_bus || b.to >= n_bus {
                return Err(Error::InvalidInput(format!("branch {k} references a bus outside 0..{n_bus}")));
            }
            if b.from == b.to {
                return Err(Error::InvalidInput(format!("branch {k} connects bus {} to itself", b.from)));
            }
            b.element.check()?;
        }
        for (k, s) in shunts.iter().enumerate() {
            if s.bus >= n_bus {
                return Err(Error::InvalidInput(format!("shunt {k} references a bus outside 0..{n_bus}")));
            }
            s.element.check()?;
        }
        let case = Self {
            label: String::new(),
            n_bus,
            branches,
            shunts,
            boundary: Vec::new(),
        };
        case.check_connected()?;
        case.with_boundary(boundary)
    }

    /// Replaces the boundary list.
    pub fn with_boundary(mut self, boundary: Vec<usize>) -> Result<Self> {
        if boundary.is_empty() {
            return Err(Error::InvalidInput("boundary bus list is empty".into()));
        }
        let mut seen = vec![false; self.n_bus];
        for &b in &boundary {
            if b >= self.n_bus {
                return Err(Error::InvalidInput(format!("boundary bus {b} is outside 0..{}", self.n_bus)));
            }
            if std::mem::replace(&mut seen[b], true) {
                return Err(Error::InvalidInput(format!("boundary bus {b} is listed twice")));
            }
        }
        self.boundary = boundary;
        Ok(self)
    }

    pub fn n_bus(&self) -> usize {
        self.n_bus
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    fn check_connected(&self) -> Result<()> {
        let mut parent: Vec<usize> = (0..self.n_bus).collect();
        fn root(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for b in &self.branches {
            let (x, y) = (root(&mut parent, b.from), root(&mut parent, b.to));
            parent[x] = y;
        }
        let r0 = root(&mut parent, 0);
        if let Some(island) = (0..self.n_bus).find(|&i| root(&mut parent, i) != r0) {
            return Err(Error::InvalidInput(format!("network is not connected (bus {island} is isolated)")));
        }
        Ok(())
    }

    /// Full bus admittance matrix (2n×2n) at `jω`.
    pub fn bus_admittance(&self, omega: f64) -> Result<DMatrix<Complex64>> {
        let mut y = DMatrix::<Complex64>::zeros(2 * self.n_bus, 2 * self.n_bus);
        let mut add = |i: usize, j: usize, blk: &DMatrix<Complex64>, sign: f64| {
            let mut v = y.view_mut((2 * i, 2 * j), (2, 2));
            v += blk * Complex64::new(sign, 0.0);
        };
        for b in &self.branches {
            let blk = b.element.admittance(omega)?.into_inner();
            add(b.from, b.from, &blk, 1.0);
            add(b.to, b.to, &blk, 1.0);
            add(b.from, b.to, &blk, -1.0);
            add(b.to, b.from, &blk, -1.0);
        }
        for s in &self.shunts {
            let blk = s.element.admittance(omega)?.into_inner();
            add(s.bus, s.bus, &blk, 1.0);
        }
        Ok(y)
    }

    fn interior(&self) -> Vec<usize> {
        (0..self.n_bus).filter(|b| !self.boundary.contains(b)).collect()
    }

    /// Boundary admittance after eliminating interior buses: `Y_bb − Y_bi·Y_ii⁻¹·Y_ib`.
    pub fn reduced_admittance(&self, omega: f64) -> Result<ComplexMatrix> {
        let y = self.bus_admittance(omega)?;
        let idx = |buses: &[usize]| -> Vec<usize> { buses.iter().flat_map(|&b| [2 * b, 2 * b + 1]).collect() };
        let (bi, ii) = (idx(&self.boundary), idx(&self.interior()));
        let sub = |r: &[usize], c: &[usize]| DMatrix::from_fn(r.len(), c.len(), |i, j| y[(r[i], c[j])]);
        let ybb = sub(&bi, &bi);
        if ii.is_empty() {
            return ComplexMatrix::new(ybb);
        }
        let yii = sub(&ii, &ii);
        let sv = yii.clone().singular_values();
        let (smax, smin) = (sv.max(), sv.min());
        if smin == 0.0 || smax / smin > MAX_CONDITION {
            return Err(Error::SingularNetwork {
                omega,
                reason: format!("interior admittance block has condition number {:e}", smax / smin),
            });
        }
        let x = yii.lu().solve(&sub(&ii, &bi)).ok_or_else(|| Error::SingularNetwork {
            omega,
            reason: "interior admittance block is singular".into(),
        })?;
        ComplexMatrix::new(ybb - sub(&bi, &ii) * x)
    }
}

/// Impedance seen from the boundary buses, `(Y_bb − Y_bi·Y_ii⁻¹·Y_ib)⁻¹`.
pub fn kron_reduce(case: &NetworkCase, omega: f64) -> Result<ComplexMatrix> {
    invert_at(&case.reduced_admittance(omega)?).map_err(|e| match e {
        Error::NearSingular { cond, .. } => Error::SingularNetwork {
            omega,
            reason: format!("reduced admittance has condition number {cond:e}"),
        },
        other => other,
    })
}

/// The reduced boundary admittance as a frequency response.
#[derive(Clone, Debug)]
pub struct ReducedGrid(pub NetworkCase);

impl FrequencyResponse for ReducedGrid {
    fn dim(&self) -> usize {
        2 * self.0.boundary.len()
    }
    fn response(&self, omega: f64) -> Result<ComplexMatrix> {
        self.0.reduced_admittance(omega)
    }
    fn stability(&self) -> StabilityCheck {
        StabilityCheck::indeterminate("stability of a reduced network admittance is not checked")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    #[serde(default)]
    label: Option<String>,
    n_bus: usize,
    #[serde(default)]
    omega0: Option<f64>,
    #[serde(default)]
    branches: Vec<BranchDoc>,
    #[serde(default)]
    shunts: Vec<ShuntDoc>,
    boundary: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    #[serde(default)]
    r: Option<f64>,
    #[serde(default)]
    l: Option<f64>,
    #[serde(default)]
    omega0: Option<f64>,
    #[serde(default)]
    y: Option<[f64; 2]>,
    #[serde(default)]
    block: Option<[[[f64; 2]; 2]; 2]>,
    #[serde(default)]
    model: Option<String>,
}

#[derive(Deserialize)]
struct BranchDoc {
    from: usize,
    to: usize,
    #[serde(flatten)]
    element: ElementDoc,
}

#[derive(Deserialize)]
struct ShuntDoc {
    bus: usize,
    #[serde(flatten)]
    element: ElementDoc,
}

impl ElementDoc {
    fn build(&self, default_omega0: Option<f64>, dir: &Path, what: &str) -> Result<Element> {
        let kinds = [
            self.r.is_some() || self.l.is_some(),
            self.y.is_some(),
            self.block.is_some(),
            self.model.is_some(),
        ];
        if kinds.iter().filter(|&&k| k).count() != 1 {
            return Err(Error::InvalidInput(format!(
                "{what}: specify exactly one of r/l, y, block or model"
            )));
        }
        if self.r.is_some() || self.l.is_some() {
            let omega0 = self.omega0.or(default_omega0).ok_or_else(|| {
                Error::InvalidInput(format!("{what}: RL element needs omega0 (per element or network-wide)"))
            })?;
            let params = RlGridParams::new(self.r.unwrap_or(0.0), self.l.unwrap_or(0.0), omega0)
                .map_err(|e| Error::InvalidInput(format!("{what}: {e}")))?;
            return Ok(Element::Rl(params));
        }
        if let Some([re, im]) = self.y {
            return Ok(Element::Scalar(Complex64::new(re, im)));
        }
        if let Some(b) = self.block {
            let m = ComplexMatrix::from_rows(&[
                &[Complex64::new(b[0][0][0], b[0][0][1]), Complex64::new(b[0][1][0], b[0][1][1])],
                &[Complex64::new(b[1][0][0], b[1][0][1]), Complex64::new(b[1][1][0], b[1][1][1])],
            ]);
            return Ok(Element::Block(m));
        }
        let rel = self.model.as_deref().unwrap_or_default();
        let (model, _) = load_model(&dir.join(rel))?;
        Ok(Element::Model(Arc::new(model)))
    }
}

/// Loads a network document; model references resolve relative to its directory.
pub fn load_network(path: &Path) -> Result<NetworkCase> {
    let text = std::fs::read_to_string(path)?;
    let origin = path.display().to_string();
    let doc: NetworkDoc = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: origin.clone(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let wrap = |e: Error| Error::Parse {
        path: origin.clone(),
        line: 0,
        message: e.to_string(),
    };
    let branches = doc
        .branches
        .iter()
        .enumerate()
        .map(|(k, b)| {
            Ok(Branch {
                from: b.from,
                to: b.to,
                element: b.element.build(doc.omega0, dir, &format!("branches[{k}]"))?,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map_err(wrap)?;
    let shunts = doc
        .shunts
        .iter()
        .enumerate()
        .map(|(k, s)| {
            Ok(Shunt {
                bus: s.bus,
                element: s.element.build(doc.omega0, dir, &format!("shunts[{k}]"))?,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map_err(wrap)?;
    let mut case = NetworkCase::new(doc.n_bus, branches, shunts, doc.boundary).map_err(wrap)?;
    case.label = doc.label.unwrap_or_else(|| origin.clone());
    Ok(case)
}
