use num_complex::Complex64;

use super::fft::is_power_of_two;
use crate::error::{Error, Result};

/// Complex samples on a uniform 1-D grid `x_j = origin + j·spacing`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    values: Vec<Complex64>,
    spacing: f64,
    origin: f64,
}

impl ComplexGrid {
    pub fn new(values: Vec<Complex64>, spacing: f64, origin: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 points, got {}",
                values.len()
            )));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidInput(format!("grid spacing must be > 0, got {spacing}")));
        }
        Ok(Self {
            values,
            spacing,
            origin,
        })
    }

    /// Same as [`ComplexGrid::new`] but also requires a power-of-two length.
    pub fn for_fft(values: Vec<Complex64>, spacing: f64, origin: f64) -> Result<Self> {
        if !is_power_of_two(values.len()) {
            return Err(Error::BadLength(values.len()));
        }
        Self::new(values, spacing, origin)
    }

    /// A grid of `n` points centred on zero, sampled from `f`.
    pub fn centered<F: Fn(f64) -> Complex64>(n: usize, spacing: f64, f: F) -> Result<Self> {
        let origin = -(n as f64 / 2.0) * spacing;
        let values = (0..n).map(|j| f(origin + j as f64 * spacing)).collect();
        Self::new(values, spacing, origin)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.spacing
    }

    pub fn coordinates(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|j| self.coordinate(j))
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            values,
            spacing: self.spacing,
            origin: self.origin,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_shape() {
        let one = vec![Complex64::new(0.0, 0.0)];
        assert!(ComplexGrid::new(one, 1.0, 0.0).is_err());
        let two = vec![Complex64::new(0.0, 0.0); 2];
        assert!(ComplexGrid::new(two.clone(), 0.0, 0.0).is_err());
        assert!(ComplexGrid::new(two, 1.0, 0.0).is_ok());
        let three = vec![Complex64::new(0.0, 0.0); 3];
        assert_eq!(ComplexGrid::for_fft(three, 1.0, 0.0), Err(Error::BadLength(3)));
    }

    #[test]
    fn centered_coordinates() {
        let g = ComplexGrid::centered(4, 0.5, |x| Complex64::new(x, 0.0)).unwrap();
        let xs: Vec<f64> = g.coordinates().collect();
        assert_eq!(xs, vec![-1.0, -0.5, 0.0, 0.5]);
        assert_eq!(g.values()[2], Complex64::new(0.0, 0.0));
    }
}
