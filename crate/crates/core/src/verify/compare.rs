use crate::error::{Error, Result};
use crate::solver::SolutionField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldDifference {
    pub sup_norm: f64,
    /// Root mean square of `|a - b|` over the grid points.
    pub l2_norm: f64,
}

pub fn compare_fields(a: &SolutionField, b: &SolutionField) -> Result<FieldDifference> {
    if a.t_grid != b.t_grid || a.x_grid != b.x_grid {
        return Err(Error::GridMismatch(format!(
            "{}x{} vs {}x{} or differing coordinates",
            a.t_grid.len(),
            a.x_grid.len(),
            b.t_grid.len(),
            b.x_grid.len()
        )));
    }
    let (sup, sum_sq) = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(u, v)| (u - v).norm())
        .fold((0.0f64, 0.0), |(s, q), d| (s.max(d), q + d * d));
    let n = a.values.len().max(1) as f64;
    Ok(FieldDifference {
        sup_norm: sup,
        l2_norm: (sum_sq / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{DuhamelForm, Provenance, Tolerances};
    use num_complex::Complex64;

    fn field(ts: Vec<f64>, xs: Vec<f64>, v: f64) -> SolutionField {
        let n = ts.len() * xs.len();
        SolutionField::new(
            ts,
            xs,
            vec![Complex64::new(v, 0.0); n],
            Provenance {
                method: "test".into(),
                homogeneous: true,
                duhamel: false,
                duhamel_form: DuhamelForm::Corrected,
                tolerances: Tolerances::default(),
            },
        )
    }

    #[test]
    fn identical_and_shifted() {
        let a = field(vec![0.1, 0.2], vec![0.0, 1.0, 2.0], 1.0);
        let d = compare_fields(&a, &a).unwrap();
        assert_eq!((d.sup_norm, d.l2_norm), (0.0, 0.0));
        let b = field(vec![0.1, 0.2], vec![0.0, 1.0, 2.0], 1.25);
        let d = compare_fields(&a, &b).unwrap();
        assert_eq!(d.sup_norm, 0.25);
        assert_eq!(d.l2_norm, 0.25);
    }

    #[test]
    fn mismatch() {
        let a = field(vec![0.1, 0.2], vec![0.0, 1.0], 1.0);
        let b = field(vec![0.1, 0.3], vec![0.0, 1.0], 1.0);
        assert!(matches!(compare_fields(&a, &b), Err(Error::GridMismatch(_))));
    }
}
