//! Finite-difference discretization of `LU = U'''' + (AU')' + BU`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::BeamCoefficients;

use super::band::BandMatrix;

/// Condition imposed at one end of the beam, in canonical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndCondition {
    /// `U = 0`, `U'' = 0`.
    Hinged,
    /// `U = 0`, `U' = 0`.
    Clamped,
    /// `U'' = 0`, `U''' + AU' = 0`.
    Free,
    /// `U' = 0`, `U''' + AU' = 0`.
    Sliding,
}

impl EndCondition {
    pub const ALL: [EndCondition; 4] = [
        EndCondition::Hinged,
        EndCondition::Clamped,
        EndCondition::Free,
        EndCondition::Sliding,
    ];

    /// Whether the end displacement is an unknown of the discrete problem.
    fn end_is_free(self) -> bool {
        matches!(self, EndCondition::Free | EndCondition::Sliding)
    }
}

impl fmt::Display for EndCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndCondition::Hinged => "hinged",
            EndCondition::Clamped => "clamped",
            EndCondition::Free => "free",
            EndCondition::Sliding => "sliding",
        })
    }
}

impl FromStr for EndCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hinged" => Ok(EndCondition::Hinged),
            "clamped" => Ok(EndCondition::Clamped),
            "free" => Ok(EndCondition::Free),
            "sliding" => Ok(EndCondition::Sliding),
            other => Err(Error::InvalidSpec(format!(
                "unknown end condition `{other}` (expected hinged, clamped, free or sliding)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub left: EndCondition,
    pub right: EndCondition,
}

impl BoundaryCondition {
    pub fn both(end: EndCondition) -> Self {
        BoundaryCondition {
            left: end,
            right: end,
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.left == self.right {
            write!(f, "{}", self.left)
        } else {
            write!(f, "{}-{}", self.left, self.right)
        }
    }
}

/// Accepts `hinged` (both ends) or `hinged-clamped` (left-right).
impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('-') {
            Some((l, r)) => Ok(BoundaryCondition {
                left: l.parse()?,
                right: r.parse()?,
            }),
            None => Ok(BoundaryCondition::both(s.parse()?)),
        }
    }
}

/// Uniform grid `zⱼ = lo + jh`, `j = 0..=n+1`, `h = (hi − lo)/(n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

pub const MIN_GRID: usize = 32;

impl Grid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Grid> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidSpec(format!("invalid interval [{lo}, {hi}]")));
        }
        if n < MIN_GRID {
            return Err(Error::InvalidSpec(format!("grid size {n} below {MIN_GRID}")));
        }
        Ok(Grid { lo, hi, n })
    }

    /// `[0, length]`.
    pub fn on_length(length: f64, n: usize) -> Result<Grid> {
        Grid::new(0.0, length, n)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n + 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j == self.n + 1 {
            self.hi
        } else {
            self.lo + j as f64 * self.step()
        }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn refined(&self) -> Grid {
        Grid {
            n: 2 * self.n,
            ..*self
        }
    }
}

/// The discrete operator together with the grid nodes its unknowns sit on.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub matrix: BandMatrix,
    pub nodes: Vec<f64>,
}

type Combo = Vec<(usize, f64)>;

struct Layout {
    n: usize,
    first: usize,
    last: usize,
    left: EndCondition,
    right: EndCondition,
    a_left: f64,
    a_right: f64,
    h2: f64,
}

impl Layout {
    fn unknown(&self, j: usize) -> Option<usize> {
        (self.first..=self.last).contains(&j).then(|| j - self.first)
    }

    fn real(&self, j: usize) -> Combo {
        self.unknown(j).map(|c| vec![(c, 1.0)]).unwrap_or_default()
    }

    /// Node `j ∈ [−2, n+3]` as a combination of unknowns.
    fn node(&self, j: isize) -> Combo {
        let last = self.n as isize + 1;
        if (0..=last).contains(&j) {
            return self.real(j as usize);
        }
        // mirror the right end onto the left-end formulas
        let (end, a, k, origin, dir) = if j < 0 {
            (self.left, self.a_left, -j, 0, 1)
        } else {
            (self.right, self.a_right, j - last, last, -1)
        };
        let local = |t: isize| self.node(origin + dir * t);
        let mut out = Combo::new();
        let mut push = |c: Combo, w: f64| out.extend(c.into_iter().map(|(i, v)| (i, v * w)));
        match (k, end) {
            (1, EndCondition::Hinged) => push(local(1), -1.0),
            (1, EndCondition::Clamped | EndCondition::Sliding) => push(local(1), 1.0),
            (1, EndCondition::Free) => {
                push(local(0), 2.0);
                push(local(1), -1.0);
            }
            (2, _) => {
                // shear condition U''' + AU' = 0 with central differences
                push(local(2), 1.0);
                push(local(1), -2.0 + a * self.h2);
                push(local(-1), 2.0 - a * self.h2);
            }
            _ => unreachable!("ghost node {j} outside the stencil"),
        }
        out
    }
}

/// Assembles the banded finite-difference matrix of `L` on `grid`.
pub fn assemble(coeffs: &BeamCoefficients, bc: BoundaryCondition, grid: &Grid) -> Result<Discretization> {
    let n = grid.n;
    let h = grid.step();
    let mut a = vec![0.0; n + 2];
    let mut a1 = vec![0.0; n + 2];
    let mut b = vec![0.0; n + 2];
    for j in 0..n + 2 {
        let z = grid.node(j);
        let singular = |what: String| Error::Singular { at: z, what };
        let aj = coeffs
            .a
            .jet(z, 1)
            .map_err(|e| singular(format!("coefficient A: {e}")))?;
        let bj = coeffs
            .b
            .value(z)
            .map_err(|e| singular(format!("coefficient B: {e}")))?;
        if !(aj.is_finite() && bj.is_finite()) {
            return Err(singular("coefficient pole on the grid".into()));
        }
        a[j] = aj.d(0);
        a1[j] = aj.d(1);
        b[j] = bj;
    }

    let layout = Layout {
        n,
        first: if bc.left.end_is_free() { 0 } else { 1 },
        last: if bc.right.end_is_free() { n + 1 } else { n },
        left: bc.left,
        right: bc.right,
        a_left: a[0],
        a_right: a[n + 1],
        h2: h * h,
    };
    let size = layout.last - layout.first + 1;
    let mut matrix = BandMatrix::zeros(size, 2, 2);
    let (h4, h2) = (h.powi(4), h * h);
    for j in layout.first..=layout.last {
        let row = j - layout.first;
        let stencil = [
            (-2, 1.0 / h4),
            (-1, -4.0 / h4 + a[j] / h2 - a1[j] / (2.0 * h)),
            (0, 6.0 / h4 - 2.0 * a[j] / h2 + b[j]),
            (1, -4.0 / h4 + a[j] / h2 + a1[j] / (2.0 * h)),
            (2, 1.0 / h4),
        ];
        for (offset, w) in stencil {
            for (col, v) in layout.node(j as isize + offset) {
                matrix.add(row, col, w * v);
            }
        }
    }
    let nodes = (layout.first..=layout.last).map(|j| grid.node(j)).collect();
    Ok(Discretization { matrix, nodes })
}
