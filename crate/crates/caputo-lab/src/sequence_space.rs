//! Finite truncations of the sequence spaces c₀ and ℓ².
//!
//! The standard unit vectors are the Schauder basis; the coordinate
//! functionals are the coordinates themselves, which already have operator
//! norm 1 in both flavors. Indices are 1-based to match the usual basis
//! numbering v_1, v_2, …

use crate::{Error, Result};
use serde::Serialize;

/// Which norm the truncated space carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormFlavor {
    /// sup |x_n| — the c₀ model.
    Sup,
    /// Root sum of squares — the ℓ² (Hilbert) model.
    Euclidean,
}

impl std::str::FromStr for NormFlavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sup" => Ok(NormFlavor::Sup),
            "euclid" => Ok(NormFlavor::Euclidean),
            other => Err(format!("unknown norm flavor {other:?} (expected sup|euclid)")),
        }
    }
}

/// A vector in the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct SeqVec {
    coords: Vec<f64>,
    flavor: NormFlavor,
}

impl SeqVec {
    pub fn new(coords: Vec<f64>, flavor: NormFlavor) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyPath);
        }
        if let Some(j) = coords.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample(j));
        }
        Ok(Self { coords, flavor })
    }

    pub fn zeros(dim: usize, flavor: NormFlavor) -> Self {
        Self {
            coords: vec![0.0; dim.max(1)],
            flavor,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn flavor(&self) -> NormFlavor {
        self.flavor
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    /// The coordinate functional v_n*(x), 1-indexed.
    pub fn coordinate(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.dim() {
            return Err(Error::IndexOutOfRange {
                index: n,
                dim: self.dim(),
            });
        }
        Ok(self.coords[n - 1])
    }

    pub fn norm(&self) -> f64 {
        match self.flavor {
            NormFlavor::Sup => self.coords.iter().fold(0.0, |m, v| m.max(v.abs())),
            NormFlavor::Euclidean => self.coords.iter().map(|v| v * v).sum::<f64>().sqrt(),
        }
    }

    pub fn scale(&self, a: f64) -> SeqVec {
        SeqVec {
            coords: self.coords.iter().map(|v| a * v).collect(),
            flavor: self.flavor,
        }
    }

    pub fn add(&self, other: &SeqVec) -> Result<SeqVec> {
        axpy(1.0, self, other)
    }

    pub fn sub(&self, other: &SeqVec) -> Result<SeqVec> {
        axpy(-1.0, other, self)
    }
}

/// a·x + y, coordinatewise.
pub fn axpy(a: f64, x: &SeqVec, y: &SeqVec) -> Result<SeqVec> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    if x.flavor != y.flavor {
        return Err(Error::FlavorMismatch);
    }
    Ok(SeqVec {
        coords: x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(xi, yi)| a * xi + yi)
            .collect(),
        flavor: x.flavor,
    })
}

/// The standard Schauder basis of the truncation.
#[derive(Debug, Clone, Copy)]
pub struct Basis {
    dim: usize,
    flavor: NormFlavor,
}

impl Basis {
    pub fn new(dim: usize, flavor: NormFlavor) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch(dim, 1));
        }
        Ok(Self { dim, flavor })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flavor(&self) -> NormFlavor {
        self.flavor
    }

    /// The n-th standard unit vector, 1-indexed. Norm 1 under both flavors.
    pub fn basis_vector(&self, n: usize) -> Result<SeqVec> {
        if n == 0 || n > self.dim {
            return Err(Error::IndexOutOfRange {
                index: n,
                dim: self.dim,
            });
        }
        let mut coords = vec![0.0; self.dim];
        coords[n - 1] = 1.0;
        Ok(SeqVec {
            coords,
            flavor: self.flavor,
        })
    }

    pub fn zero(&self) -> SeqVec {
        SeqVec::zeros(self.dim, self.flavor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_vectors_are_unit() {
        for flavor in [NormFlavor::Sup, NormFlavor::Euclidean] {
            let b = Basis::new(4, flavor).unwrap();
            let v2 = b.basis_vector(2).unwrap();
            assert_eq!(v2.coords(), &[0.0, 1.0, 0.0, 0.0]);
            assert_eq!(v2.norm(), 1.0);
            assert!(b.basis_vector(0).is_err());
            assert!(b.basis_vector(5).is_err());
        }
    }

    #[test]
    fn biorthogonality() {
        let b = Basis::new(5, NormFlavor::Euclidean).unwrap();
        for n in 1..=5 {
            let vn = b.basis_vector(n).unwrap();
            for m in 1..=5 {
                let delta = if n == m { 1.0 } else { 0.0 };
                assert_eq!(vn.coordinate(m).unwrap(), delta);
            }
        }
    }

    #[test]
    fn coordinate_extraction_and_reconstruction() {
        let x = SeqVec::new(vec![3.0, -1.0, 2.0], NormFlavor::Sup).unwrap();
        assert_eq!(x.coordinate(3).unwrap(), 2.0);
        let b = Basis::new(3, NormFlavor::Sup).unwrap();
        let mut rebuilt = b.zero();
        for n in 1..=3 {
            rebuilt = axpy(
                x.coordinate(n).unwrap(),
                &b.basis_vector(n).unwrap(),
                &rebuilt,
            )
            .unwrap();
        }
        assert_eq!(rebuilt, x);
    }

    #[test]
    fn norms_known_values() {
        let x = SeqVec::new(vec![1.0, -2.0, 0.0], NormFlavor::Sup).unwrap();
        assert_eq!(x.norm(), 2.0);
        let y = SeqVec::new(vec![3.0, 4.0], NormFlavor::Euclidean).unwrap();
        assert_eq!(y.norm(), 5.0);
    }

    #[test]
    fn basis_gap_norms() {
        // ‖v_n − v_{n+1}‖: √2 Euclidean, 1 sup
        let be = Basis::new(6, NormFlavor::Euclidean).unwrap();
        let d = be
            .basis_vector(3)
            .unwrap()
            .sub(&be.basis_vector(4).unwrap())
            .unwrap();
        assert!((d.norm() - 2.0f64.sqrt()).abs() < 1e-15);
        let bs = Basis::new(6, NormFlavor::Sup).unwrap();
        let d = bs
            .basis_vector(3)
            .unwrap()
            .sub(&bs.basis_vector(4).unwrap())
            .unwrap();
        assert_eq!(d.norm(), 1.0);
    }

    #[test]
    fn axpy_basics() {
        let f = NormFlavor::Euclidean;
        let x = SeqVec::new(vec![1.0, 0.0], f).unwrap();
        let y = SeqVec::new(vec![0.0, 1.0], f).unwrap();
        assert_eq!(axpy(0.0, &x, &y).unwrap(), y);
        assert_eq!(axpy(1.0, &x, &SeqVec::zeros(2, f)).unwrap(), x);
        assert_eq!(
            axpy(2.0, &x, &y).unwrap().coords(),
            &[2.0, 1.0]
        );
        let z = SeqVec::new(vec![1.0, 2.0, 3.0], f).unwrap();
        assert!(axpy(1.0, &x, &z).is_err());
        let w = SeqVec::new(vec![1.0, 2.0], NormFlavor::Sup).unwrap();
        assert!(axpy(1.0, &x, &w).is_err());
    }

    #[test]
    fn coordinate_bounded_by_norm() {
        // |v_n*(x)| ≤ ‖x‖ under both flavors; deterministic sweep
        for flavor in [NormFlavor::Sup, NormFlavor::Euclidean] {
            for seed in 0..200u64 {
                let coords: Vec<f64> = (0..6)
                    .map(|i| ((seed * 37 + i * 101) % 401) as f64 / 40.0 - 5.0)
                    .collect();
                let x = SeqVec::new(coords, flavor).unwrap();
                for n in 1..=6 {
                    assert!(x.coordinate(n).unwrap().abs() <= x.norm() + 1e-15);
                }
            }
        }
    }
}
