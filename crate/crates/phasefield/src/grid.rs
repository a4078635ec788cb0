//! Grid geometry, scalar fields with ghost cells, boundary conditions, and
//! initial-condition seeding.
//!
//! Fields are cell-centered: interior cell (i, j), with i in 1..=nx and
//! j in 1..=ny, sits at ((i - 1/2)·dx, (j - 1/2)·dy). A one-cell ghost layer
//! surrounds the interior so every stencil uses the same centered formula at
//! every interior cell.

use crate::error::{Error, Result};

/// Uniform rectangular grid geometry. `ny == 1` denotes a 1D grid; its `dy`
/// is normalized to 1.0 so cell "areas" reduce to lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
}

impl GridSpec {
    /// Validates and builds a grid. Stencils need two interior neighbors per
    /// active dimension, so `nx >= 3` and `ny` is either 1 (1D) or `>= 3`.
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64) -> Result<Self> {
        if nx < 3 {
            return Err(Error::Grid(format!("nx must be >= 3, got {nx}")));
        }
        if ny != 1 && ny < 3 {
            return Err(Error::Grid(format!("ny must be 1 (1D) or >= 3, got {ny}")));
        }
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::Grid(format!("dx must be positive and finite, got {dx}")));
        }
        if ny != 1 && (!(dy > 0.0) || !dy.is_finite()) {
            return Err(Error::Grid(format!("dy must be positive and finite, got {dy}")));
        }
        let dy = if ny == 1 { 1.0 } else { dy };
        Ok(GridSpec { nx, ny, dx, dy })
    }

    /// 1D grid of `nx` cells with spacing `dx`.
    pub fn new_1d(nx: usize, dx: f64) -> Result<Self> {
        Self::new(nx, 1, dx, 1.0)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn is_1d(&self) -> bool {
        self.ny == 1
    }

    /// Number of active dimensions (1 or 2).
    pub fn active_dims(&self) -> usize {
        if self.is_1d() {
            1
        } else {
            2
        }
    }

    /// x-coordinate of the cell center for interior index i in 1..=nx.
    /// Ghost indices (0 and nx+1) extrapolate the same formula.
    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - 0.5) * self.dx
    }

    /// y-coordinate of the cell center for interior index j in 1..=ny.
    pub fn y(&self, j: usize) -> f64 {
        (j as f64 - 0.5) * self.dy
    }

    /// Domain extent in x.
    pub fn lx(&self) -> f64 {
        self.nx as f64 * self.dx
    }

    /// Domain extent in y (1.0 · ny for 1D grids).
    pub fn ly(&self) -> f64 {
        self.ny as f64 * self.dy
    }

    /// Cell measure dx·dy (reduces to dx on 1D grids).
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }
}

/// Boundary treatment applied to the ghost layer.
///
/// - `ZeroFluxNeumann`: ghost mirrors the adjacent interior value.
/// - `Periodic`: ghost copies the opposite-edge interior value.
/// - `Dirichlet(g)`: ghost = 2·g − interior, so the face-centered average
///   equals `g` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    ZeroFluxNeumann,
    Periodic,
    Dirichlet(f64),
}

/// One scalar unknown sampled on a grid, stored as an
/// (nx+2) × (ny+2) array including the ghost layer.
///
/// Storage is row-major with x fastest: index (i, j) maps to
/// `j·(nx+2) + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    spec: GridSpec,
    values: Vec<f64>,
}

impl Field {
    /// Uniform field: every interior and ghost value equals `fill`.
    pub fn new(spec: GridSpec, fill: f64) -> Self {
        let n = (spec.nx + 2) * (spec.ny + 2);
        Field {
            spec,
            values: vec![fill; n],
        }
    }

    /// Field sampled from a function of the cell-center coordinates.
    /// Ghost cells are filled by extrapolating the same formula, which is
    /// convenient for seeding with analytic profiles; callers that need a
    /// specific boundary treatment should follow with [`Field::apply_boundary`].
    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut field = Field::new(spec, 0.0);
        for j in 0..spec.ny + 2 {
            for i in 0..spec.nx + 2 {
                let v = f(spec.x(i), spec.y(j));
                field.values[j * (spec.nx + 2) + i] = v;
            }
        }
        field
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    #[inline(always)]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.spec.nx + 2) + i
    }

    /// Value at (i, j); interior indices run 1..=nx, 1..=ny, ghosts are 0 and
    /// nx+1 / ny+1.
    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.idx(i, j)]
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.values[k] = v;
    }

    /// Read-only access to the raw storage (ghosts included).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fills the ghost layer according to `bc`. Corners are filled by
    /// composing the x pass with the y pass, which is what the cross-derivative
    /// stencil needs. Interior values are untouched; the operation is
    /// idempotent.
    pub fn apply_boundary(&mut self, bc: BoundaryCondition) {
        let nx = self.spec.nx;
        let ny = self.spec.ny;
        // x direction: left/right ghost columns for interior rows.
        for j in 1..=ny {
            let (left, right) = match bc {
                BoundaryCondition::ZeroFluxNeumann => (self.get(1, j), self.get(nx, j)),
                BoundaryCondition::Periodic => (self.get(nx, j), self.get(1, j)),
                BoundaryCondition::Dirichlet(g) => {
                    (2.0 * g - self.get(1, j), 2.0 * g - self.get(nx, j))
                }
            };
            self.set(0, j, left);
            self.set(nx + 1, j, right);
        }
        // y direction: bottom/top ghost rows for every column, including the
        // ghost columns just written (corner ghosts).
        for i in 0..=nx + 1 {
            let (bottom, top) = match bc {
                BoundaryCondition::ZeroFluxNeumann => (self.get(i, 1), self.get(i, ny)),
                BoundaryCondition::Periodic => (self.get(i, ny), self.get(i, 1)),
                BoundaryCondition::Dirichlet(g) => {
                    (2.0 * g - self.get(i, 1), 2.0 * g - self.get(i, ny))
                }
            };
            self.set(i, 0, bottom);
            self.set(i, ny + 1, top);
        }
    }

    /// Maximum |value| over interior cells.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 1..=self.spec.ny {
            for i in 1..=self.spec.nx {
                m = m.max(self.get(i, j).abs());
            }
        }
        m
    }

    /// True when every interior value is finite.
    pub fn all_finite(&self) -> bool {
        for j in 1..=self.spec.ny {
            for i in 1..=self.spec.nx {
                if !self.get(i, j).is_finite() {
                    return false;
                }
            }
        }
        true
    }

    /// Sum of f(value) over interior cells, left-to-right, bottom-to-top.
    /// The fixed order keeps reductions deterministic.
    pub fn interior_sum(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for j in 1..=self.spec.ny {
            for i in 1..=self.spec.nx {
                acc += f(self.get(i, j));
            }
        }
        acc
    }
}

/// Fills `field` with a circular inclusion: `inside` within `radius` of
/// (cx, cy), `outside` beyond it, blended by a tanh ramp of width
/// `smooth_width` (sharp threshold when `smooth_width` is 0). All cells,
/// ghosts included, are assigned; apply a boundary condition before stepping.
pub fn seed_disk(
    field: &mut Field,
    cx: f64,
    cy: f64,
    radius: f64,
    inside: f64,
    outside: f64,
    smooth_width: f64,
) -> Result<()> {
    if !(radius > 0.0) {
        return Err(Error::Usage(format!("seed_disk: radius must be > 0, got {radius}")));
    }
    if !(smooth_width >= 0.0) {
        return Err(Error::Usage(format!(
            "seed_disk: smooth_width must be >= 0, got {smooth_width}"
        )));
    }
    let spec = field.spec();
    for j in 0..spec.ny() + 2 {
        for i in 0..spec.nx() + 2 {
            let ox = spec.x(i) - cx;
            let oy = if spec.is_1d() { 0.0 } else { spec.y(j) - cy };
            let r = (ox * ox + oy * oy).sqrt();
            let v = if smooth_width == 0.0 {
                if r <= radius {
                    inside
                } else {
                    outside
                }
            } else {
                inside + (outside - inside) * 0.5 * (1.0 + ((r - radius) / smooth_width).tanh())
            };
            field.set(i, j, v);
        }
    }
    Ok(())
}

/// Fills `field` with a planar front in x: `left` for x << x0, `right` for
/// x >> x0, tanh ramp `midpoint + (right-left)/2 · tanh((x-x0)/width)`
/// (sharp step when `width` is 0). y is ignored, so this works on 1D and 2D
/// grids alike.
pub fn seed_front_1d(field: &mut Field, x0: f64, left: f64, right: f64, width: f64) -> Result<()> {
    if !(width >= 0.0) {
        return Err(Error::Usage(format!(
            "seed_front_1d: width must be >= 0, got {width}"
        )));
    }
    let spec = field.spec();
    let mid = 0.5 * (left + right);
    let half = 0.5 * (right - left);
    for j in 0..spec.ny() + 2 {
        for i in 0..spec.nx() + 2 {
            let x = spec.x(i);
            let v = if width == 0.0 {
                if x < x0 {
                    left
                } else {
                    right
                }
            } else {
                mid + half * ((x - x0) / width).tanh()
            };
            field.set(i, j, v);
        }
    }
    Ok(())
}
