//! Staggered uniform grid on (0, 1) and the discrete operators on it.
//!
//! Heights live at the `n` cell centers `x_{i+1/2}`, velocities and fluxes at
//! the `n + 1` nodes `x_i`. The center-to-node gradient sets boundary nodes to
//! zero (mirror ghost cells), and the node-to-center divergence telescopes, so
//! `sum(div F) dx = F[n] - F[0]` and any node field vanishing at the ends
//! conserves mass exactly. The pair is summation-by-parts:
//! `<div F, f>_c + <F, grad f>_n = 0` whenever `F[0] = F[n] = 0`.

use crate::error::{Error, Result};

/// Smallest admissible number of cells.
pub const MIN_CELLS: usize = 8;

/// Uniform grid with `n` cells of width `1/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    dx: f64,
}

impl Grid {
    /// Builds a grid, requiring `n >= 8` and `dx * n == 1` in floating point.
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_CELLS {
            return Err(Error::InvalidParameter {
                name: "grid_n",
                reason: format!("need at least {MIN_CELLS} cells, got {n}"),
            });
        }
        let grid = Grid::raw(n);
        if grid.dx * n as f64 != 1.0 {
            return Err(Error::InvalidParameter {
                name: "grid_n",
                reason: format!("1/{n} times {n} is not exactly 1 in double precision"),
            });
        }
        Ok(grid)
    }

    /// Unvalidated constructor used for tiny stencil checks.
    pub(crate) fn raw(n: usize) -> Self {
        Grid { n, dx: 1.0 / n as f64 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.center(i)).collect()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.node(i)).collect()
    }

    pub fn len(&self, location: Location) -> usize {
        match location {
            Location::Centers => self.n,
            Location::Nodes => self.n + 1,
        }
    }
}

/// Where the values of a [`Field`] are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Centers,
    Nodes,
}

/// Values on a grid, tagged with their location. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    values: Vec<f64>,
    location: Location,
    grid: Grid,
}

impl Field {
    pub fn new(grid: Grid, location: Location, values: Vec<f64>) -> Result<Self> {
        let expected = grid.len(location);
        if values.len() != expected {
            return Err(Error::usage(format!(
                "{location:?} field on {} cells needs {expected} values, got {}",
                grid.n(),
                values.len()
            )));
        }
        Ok(Field { values, location, grid })
    }

    pub fn from_fn(grid: Grid, location: Location, f: impl Fn(f64) -> f64) -> Self {
        let values = match location {
            Location::Centers => (0..grid.n()).map(|i| f(grid.center(i))).collect(),
            Location::Nodes => (0..=grid.n()).map(|i| f(grid.node(i))).collect(),
        };
        Field { values, location, grid }
    }

    pub fn constant(grid: Grid, location: Location, c: f64) -> Self {
        Field::from_fn(grid, location, |_| c)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn location(&self) -> Location {
        self.location
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Discrete inner product: midpoint weights on centers, trapezoid on nodes.
    pub fn dot(&self, other: &Field) -> Result<f64> {
        expect_same(self, other)?;
        Ok(match self.location {
            Location::Centers => dot_centers(&self.values, &other.values, self.grid.dx),
            Location::Nodes => dot_nodes(&self.values, &other.values, self.grid.dx),
        })
    }

    fn expect(&self, location: Location, op: &str) -> Result<()> {
        if self.location == location {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "{op} expects a {location:?} field, got {:?}",
                self.location
            )))
        }
    }
}

fn expect_same(a: &Field, b: &Field) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::usage("fields live on different grids"));
    }
    if a.location != b.location {
        return Err(Error::usage("fields live at different locations"));
    }
    Ok(())
}

/// Height at centers and velocity at nodes at time `t`.
///
/// Invariants: `min h > 0`, all values finite, `u[0] = u[n] = 0` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub(crate) h: Field,
    pub(crate) u: Field,
    pub(crate) t: f64,
}

impl State {
    pub fn new(h: Field, u: Field, t: f64) -> Result<Self> {
        h.expect(Location::Centers, "state height")?;
        u.expect(Location::Nodes, "state velocity")?;
        if h.grid != u.grid {
            return Err(Error::usage("height and velocity on different grids"));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::usage(format!("time must be finite and >= 0, got {t}")));
        }
        if let Some((i, &v)) = h.values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Positivity {
                t,
                x: h.grid.center(i),
                min_h: v,
                floor: 0.0,
            });
        }
        if u.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::usage("velocity contains non-finite values"));
        }
        let n = u.grid.n();
        if u.values[0] != 0.0 || u.values[n] != 0.0 {
            return Err(Error::usage("velocity must vanish at the boundary nodes"));
        }
        Ok(State { h, u, t })
    }

    /// Constant height `h_c` at rest.
    pub fn constant(grid: Grid, h_c: f64) -> Result<Self> {
        State::new(
            Field::constant(grid, Location::Centers, h_c),
            Field::constant(grid, Location::Nodes, 0.0),
            0.0,
        )
    }

    /// Assembles a state from raw slices (internal, invariants unchecked).
    pub(crate) fn from_parts(grid: Grid, h: Vec<f64>, u: Vec<f64>, t: f64) -> Self {
        debug_assert_eq!(h.len(), grid.n());
        debug_assert_eq!(u.len(), grid.n() + 1);
        State {
            h: Field {
                values: h,
                location: Location::Centers,
                grid,
            },
            u: Field {
                values: u,
                location: Location::Nodes,
                grid,
            },
            t,
        }
    }

    pub fn h(&self) -> &Field {
        &self.h
    }

    pub fn u(&self) -> &Field {
        &self.u
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> Grid {
        self.h.grid
    }

    /// `sum h dx`.
    pub fn mass(&self) -> f64 {
        self.h.values.iter().sum::<f64>() * self.grid().dx()
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }
}

// ---------------------------------------------------------------------------
// Field-level operators

/// Center-to-node gradient; boundary nodes are zero (`dh/dx = 0`).
pub fn grad_center_to_node(f: &Field) -> Result<Field> {
    f.expect(Location::Centers, "grad_center_to_node")?;
    Ok(node_field(f.grid, grad_c2n(&f.values, f.grid.dx)))
}

/// Node-to-center divergence `(F[i+1] - F[i]) / dx`.
pub fn div_node_to_center(f: &Field) -> Result<Field> {
    f.expect(Location::Nodes, "div_node_to_center")?;
    Ok(center_field(f.grid, div_n2c(&f.values, f.grid.dx)))
}

/// Three-point Laplacian with mirror ghost cells.
pub fn laplacian_neumann(f: &Field) -> Result<Field> {
    f.expect(Location::Centers, "laplacian_neumann")?;
    Ok(center_field(f.grid, laplacian(&f.values, f.grid.dx)))
}

/// Arithmetic mean to interior nodes; boundary nodes copy the adjacent center.
pub fn interp_center_to_node(f: &Field) -> Result<Field> {
    f.expect(Location::Centers, "interp_center_to_node")?;
    Ok(node_field(f.grid, interp_c2n(&f.values)))
}

/// Third or fifth derivative of a center field, returned on nodes.
///
/// Built as `grad(lap(f))` and `grad(lap(lap(f)))`; both vanish at the
/// boundary nodes, realizing `d3h = d5h = 0` there.
pub fn high_derivative(f: &Field, order: u32) -> Result<Field> {
    f.expect(Location::Centers, "high_derivative")?;
    let dx = f.grid.dx;
    let values = match order {
        3 => grad_c2n(&laplacian(&f.values, dx), dx),
        5 => grad_c2n(&laplacian(&laplacian(&f.values, dx), dx), dx),
        other => {
            return Err(Error::usage(format!(
                "high_derivative supports orders 3 and 5, got {other}"
            )))
        }
    };
    Ok(node_field(f.grid, values))
}

fn node_field(grid: Grid, values: Vec<f64>) -> Field {
    Field {
        values,
        location: Location::Nodes,
        grid,
    }
}

fn center_field(grid: Grid, values: Vec<f64>) -> Field {
    Field {
        values,
        location: Location::Centers,
        grid,
    }
}

// ---------------------------------------------------------------------------
// Slice kernels shared by the steppers and diagnostics.

pub(crate) fn grad_c2n(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n + 1];
    for j in 1..n {
        out[j] = (f[j] - f[j - 1]) / dx;
    }
    out
}

pub(crate) fn div_n2c(f: &[f64], dx: f64) -> Vec<f64> {
    f.windows(2).map(|w| (w[1] - w[0]) / dx).collect()
}

pub(crate) fn laplacian(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    let dx2 = dx * dx;
    (0..n)
        .map(|i| {
            let left = if i == 0 { f[0] } else { f[i - 1] };
            let right = if i + 1 == n { f[n - 1] } else { f[i + 1] };
            ((right - f[i]) - (f[i] - left)) / dx2
        })
        .collect()
}

pub(crate) fn interp_c2n(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n + 1];
    out[0] = f[0];
    out[n] = f[n - 1];
    for j in 1..n {
        out[j] = 0.5 * (f[j - 1] + f[j]);
    }
    out
}

pub(crate) fn dot_centers(a: &[f64], b: &[f64], dx: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * dx
}

pub(crate) fn dot_nodes(a: &[f64], b: &[f64], dx: f64) -> f64 {
    let n = a.len() - 1;
    let interior: f64 = (1..n).map(|j| a[j] * b[j]).sum();
    (interior + 0.5 * (a[0] * b[0] + a[n] * b[n])) * dx
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn centers(n: usize, f: impl Fn(f64) -> f64) -> Field {
        Field::from_fn(Grid::new(n).unwrap(), Location::Centers, f)
    }

    fn nodes(n: usize, f: impl Fn(f64) -> f64) -> Field {
        Field::from_fn(Grid::new(n).unwrap(), Location::Nodes, f)
    }

    fn max_err(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    /// Observed orders from max errors on n, 2n, 4n, ...
    fn orders(errs: &[f64]) -> Vec<f64> {
        errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
    }

    #[test]
    fn grid_invariants() {
        let g = Grid::new(128).unwrap();
        assert_eq!(g.dx() * 128.0, 1.0);
        assert_eq!(g.centers().len(), 128);
        assert_eq!(g.nodes().len(), 129);
        assert!(Grid::new(4).is_err());
        assert!(Grid::new(49).is_err());
    }

    #[test]
    fn field_length_must_match_location() {
        let g = Grid::new(8).unwrap();
        assert!(Field::new(g, Location::Centers, vec![0.0; 9]).is_err());
        assert!(Field::new(g, Location::Nodes, vec![0.0; 9]).is_ok());
    }

    #[test]
    fn tiny_gradient_stencil() {
        let g = Grid::raw(2);
        let f = Field::new(g, Location::Centers, vec![0.0, 1.0]).unwrap();
        let d = grad_center_to_node(&f).unwrap();
        assert_eq!(d.values(), &[0.0, 2.0, 0.0]);
    }

    #[test]
    fn location_mismatch_is_usage_error() {
        let f = nodes(8, |x| x);
        assert!(matches!(grad_center_to_node(&f), Err(Error::Usage(_))));
        assert!(matches!(laplacian_neumann(&f), Err(Error::Usage(_))));
        assert!(matches!(interp_center_to_node(&f), Err(Error::Usage(_))));
        assert!(matches!(high_derivative(&f, 3), Err(Error::Usage(_))));
        let c = centers(8, |x| x);
        assert!(matches!(div_node_to_center(&c), Err(Error::Usage(_))));
        assert!(matches!(high_derivative(&c, 4), Err(Error::Usage(_))));
    }

    #[test]
    fn constants_are_annihilated() {
        let c = centers(16, |_| 2.5);
        assert!(grad_center_to_node(&c).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(laplacian_neumann(&c).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(high_derivative(&c, 3).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(high_derivative(&c, 5).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(interp_center_to_node(&c).unwrap().values().iter().all(|&v| v == 2.5));
        let k = nodes(16, |_| -1.0);
        assert!(div_node_to_center(&k).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gradient_converges_at_second_order() {
        let errs: Vec<f64> = [32, 64, 128, 256]
            .iter()
            .map(|&n| {
                let d = grad_center_to_node(&centers(n, |x| (PI * x).cos())).unwrap();
                let exact: Vec<f64> = Grid::new(n)
                    .unwrap()
                    .nodes()
                    .iter()
                    .map(|x| -PI * (PI * x).sin())
                    .collect();
                max_err(d.values(), &exact)
            })
            .collect();
        for p in orders(&errs) {
            assert!(p >= 1.9, "{errs:?}");
        }
    }

    #[test]
    fn divergence_converges_at_second_order() {
        let errs: Vec<f64> = [32, 64, 128, 256]
            .iter()
            .map(|&n| {
                let d = div_node_to_center(&nodes(n, |x| (PI * x).sin())).unwrap();
                let exact: Vec<f64> = Grid::new(n)
                    .unwrap()
                    .centers()
                    .iter()
                    .map(|x| PI * (PI * x).cos())
                    .collect();
                max_err(d.values(), &exact)
            })
            .collect();
        for p in orders(&errs) {
            assert!(p >= 1.9, "{errs:?}");
        }
    }

    #[test]
    fn laplacian_converges_at_second_order() {
        let errs: Vec<f64> = [32, 64, 128, 256]
            .iter()
            .map(|&n| {
                let d = laplacian_neumann(&centers(n, |x| (PI * x).cos())).unwrap();
                let exact: Vec<f64> = Grid::new(n)
                    .unwrap()
                    .centers()
                    .iter()
                    .map(|x| -PI * PI * (PI * x).cos())
                    .collect();
                max_err(d.values(), &exact)
            })
            .collect();
        for p in orders(&errs) {
            assert!(p >= 1.9, "{errs:?}");
        }
    }

    #[test]
    fn third_derivative_converges() {
        let errs: Vec<f64> = [32, 64, 128, 256]
            .iter()
            .map(|&n| {
                let d = high_derivative(&centers(n, |x| (PI * x).cos()), 3).unwrap();
                assert_eq!(d.values()[0], 0.0);
                assert_eq!(d.values()[n], 0.0);
                let exact: Vec<f64> = Grid::new(n)
                    .unwrap()
                    .nodes()
                    .iter()
                    .map(|x| PI.powi(3) * (PI * x).sin())
                    .collect();
                max_err(d.values(), &exact)
            })
            .collect();
        for p in orders(&errs) {
            assert!(p >= 0.9, "{errs:?}");
        }
    }

    #[test]
    fn fifth_derivative_vanishes_at_ends() {
        let d = high_derivative(&centers(32, |x| (3.0 * x).sin() + x * x), 5).unwrap();
        assert_eq!(d.values()[0], 0.0);
        assert_eq!(d.values()[32], 0.0);
    }

    #[test]
    fn interpolation_is_exact_for_linear_data_and_convex() {
        let f = centers(16, |x| 3.0 * x + 1.0);
        let g = interp_center_to_node(&f).unwrap();
        for j in 1..16 {
            let x = Grid::new(16).unwrap().node(j);
            assert!((g.values()[j] - (3.0 * x + 1.0)).abs() < 1e-14);
        }
        assert_eq!(g.values()[0], f.values()[0]);
        assert_eq!(g.values()[16], f.values()[15]);
    }

    #[test]
    fn mirror_symmetry_of_operators() {
        // f even about x = 1/2: gradient odd, laplacian even.
        let n = 64;
        let f = centers(n, |x| (2.0 * PI * x).cos() + (x - 0.5).powi(4));
        let g = grad_center_to_node(&f).unwrap();
        let l = laplacian_neumann(&f).unwrap();
        for j in 0..=n {
            assert!((g.values()[j] + g.values()[n - j]).abs() < 1e-10);
        }
        for i in 0..n {
            assert!((l.values()[i] - l.values()[n - 1 - i]).abs() < 1e-8);
        }
    }

    proptest! {
        #[test]
        fn summation_by_parts(c in prop::collection::vec(-1.0f64..1.0, 32), fl in prop::collection::vec(-1.0f64..1.0, 31)) {
            let g = Grid::new(32).unwrap();
            let f = Field::new(g, Location::Centers, c).unwrap();
            let mut fv = vec![0.0];
            fv.extend(fl);
            fv.push(0.0);
            let big_f = Field::new(g, Location::Nodes, fv).unwrap();
            let lhs = div_node_to_center(&big_f).unwrap().dot(&f).unwrap()
                + big_f.dot(&grad_center_to_node(&f).unwrap()).unwrap();
            prop_assert!(lhs.abs() < 1e-13);
        }

        #[test]
        fn telescoping_mass(fl in prop::collection::vec(-10.0f64..10.0, 63)) {
            let g = Grid::new(64).unwrap();
            let mut fv = vec![0.0];
            fv.extend(fl);
            fv.push(0.0);
            let d = div_node_to_center(&Field::new(g, Location::Nodes, fv).unwrap()).unwrap();
            let total: f64 = d.values().iter().sum::<f64>() * g.dx();
            prop_assert!(total.abs() < 1e-11);
        }

        #[test]
        fn laplacian_is_self_adjoint(a in prop::collection::vec(-1.0f64..1.0, 16), b in prop::collection::vec(-1.0f64..1.0, 16)) {
            let g = Grid::new(16).unwrap();
            let fa = Field::new(g, Location::Centers, a).unwrap();
            let fb = Field::new(g, Location::Centers, b).unwrap();
            let l = laplacian_neumann(&fa).unwrap().dot(&fb).unwrap();
            let r = fa.dot(&laplacian_neumann(&fb).unwrap()).unwrap();
            prop_assert!((l - r).abs() < 1e-12 * (1.0 + l.abs()));
        }

        #[test]
        fn interpolation_preserves_positivity(a in prop::collection::vec(0.01f64..5.0, 16)) {
            let g = Grid::new(16).unwrap();
            let f = Field::new(g, Location::Centers, a).unwrap();
            prop_assert!(interp_center_to_node(&f).unwrap().min() >= f.min());
        }
    }
}
