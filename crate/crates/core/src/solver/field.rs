use num_complex::Complex64;

use super::problem::{DuhamelForm, Tolerances};

/// Which terms produced a field and under which settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// Producer tag, e.g. `kernel` or `crank_nicolson`.
    pub method: String,
    pub homogeneous: bool,
    pub duhamel: bool,
    pub duhamel_form: DuhamelForm,
    pub tolerances: Tolerances,
}

/// `u(t_i, x_j)` on a rectangular grid, stored t-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub provenance: Provenance,
}

impl SolutionField {
    pub fn new(t_grid: Vec<f64>, x_grid: Vec<f64>, values: Vec<Complex64>, provenance: Provenance) -> Self {
        assert_eq!(values.len(), t_grid.len() * x_grid.len(), "field shape mismatch");
        SolutionField {
            t_grid,
            x_grid,
            values,
            provenance,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.x_grid.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let n = self.x_grid.len();
        &self.values[i * n..(i + 1) * n]
    }

    /// `(t, x, u)` in t-major order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, Complex64)> + '_ {
        self.t_grid.iter().enumerate().flat_map(move |(i, &t)| {
            self.x_grid
                .iter()
                .enumerate()
                .map(move |(j, &x)| (t, x, self.get(i, j)))
        })
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}
