//! Unit hypercubes under the max-metric and their per-epoch uniform grids.
//!
//! Cells are indexed row-major with axis 0 as the most significant digit.
//! A coordinate equal to 1.0 belongs to the last cell along its axis.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of slots in epoch `i`, `2^i`.
pub fn epoch_length(i: u32) -> Result<u64> {
    1u64.checked_shl(i).ok_or(Error::EpochOverflow(i))
}

/// Epoch containing slot `t >= 1`: the `i` with `2^i <= t < 2^(i+1)`.
pub fn epoch_of_slot(t: u64) -> u32 {
    assert!(t >= 1, "slots are numbered from 1");
    63 - t.leading_zeros()
}

/// Cluster radius targeted in epoch `i`: `(2^i)^(-alpha)`.
pub fn nominal_radius<T: Scalar>(i: u32, alpha: T) -> T {
    (-(T::from_count(u64::from(i)) * alpha)).exp2()
}

/// Max-metric distance.
pub fn dist_max<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}

/// A point of a unit hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<T>(Vec<T>);

impl<T: Scalar> Point<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        for (axis, &v) in coords.iter().enumerate() {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::OutOfUnitCube {
                    axis,
                    value: v.as_f64(),
                });
            }
        }
        if coords.is_empty() {
            return Err(Error::Config("points need at least one coordinate".into()));
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dist(&self, other: &Self) -> T {
        dist_max(&self.0, &other.0)
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

/// Uniform grid over `[0, 1]^dimension`.
///
/// `nominal_radius` is the radius the grid was built for; the realized cell
/// radius (half the side) never exceeds it.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<T> {
    dimension: usize,
    cells_per_axis: usize,
    cluster_count: usize,
    nominal_radius: T,
}

impl<T: Scalar> Partition<T> {
    /// Coarsest grid whose cells have radius at most `target_radius`.
    pub fn build(dimension: usize, target_radius: T) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        if !(target_radius.is_finite() && target_radius > T::zero()) {
            return Err(Error::Config(format!(
                "target radius must be positive and finite, got {target_radius}"
            )));
        }
        let cells_per_axis = cells_for_radius(target_radius.as_f64());
        let cluster_count = cells_per_axis
            .checked_pow(u32::try_from(dimension).unwrap_or(u32::MAX))
            .ok_or_else(|| {
                Error::Config(format!(
                    "{cells_per_axis}^{dimension} cells overflow the index range"
                ))
            })?;
        Ok(Self {
            dimension,
            cells_per_axis,
            cluster_count,
            nominal_radius: target_radius,
        })
    }

    /// Grid for epoch `i` with radius `(2^i)^(-alpha)`.
    pub fn for_epoch(dimension: usize, i: u32, alpha: T) -> Result<Self> {
        Self::build(dimension, nominal_radius(i, alpha))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    pub fn nominal_radius(&self) -> T {
        self.nominal_radius
    }

    pub fn cell_side(&self) -> T {
        T::one() / T::from_count(self.cells_per_axis as u64)
    }

    /// Half the max-metric diameter of a cell.
    pub fn actual_radius(&self) -> T {
        self.cell_side() / T::lit(2.0)
    }

    /// Index of the cell containing `p`.
    pub fn locate(&self, p: &Point<T>) -> Result<usize> {
        self.check_dim(p.dim())?;
        Ok(self.locate_coords(p.coords()))
    }

    pub(crate) fn locate_coords(&self, coords: &[T]) -> usize {
        let n = self.cells_per_axis;
        let scale = T::from_count(n as u64);
        coords.iter().fold(0usize, |acc, &v| {
            let cell = (v * scale).floor().to_usize().unwrap_or(0).min(n - 1);
            acc * n + cell
        })
    }

    /// Per-axis cell coordinates of cluster `index`, axis 0 first.
    pub fn axis_cells(&self, index: usize) -> Result<Vec<usize>> {
        self.check_index(index)?;
        let n = self.cells_per_axis;
        let mut cells = vec![0; self.dimension];
        let mut rest = index;
        for slot in cells.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        Ok(cells)
    }

    /// Closed per-axis bounds `[lo, hi]` of cluster `index`.
    pub fn cell_bounds(&self, index: usize) -> Result<Vec<(T, T)>> {
        let side = self.cell_side();
        Ok(self
            .axis_cells(index)?
            .into_iter()
            .map(|c| {
                let lo = T::from_count(c as u64) * side;
                let hi = if c + 1 == self.cells_per_axis {
                    T::one()
                } else {
                    T::from_count(c as u64 + 1) * side
                };
                (lo, hi)
            })
            .collect())
    }

    pub fn cluster_center(&self, index: usize) -> Result<Point<T>> {
        let half = T::lit(0.5);
        let coords = self
            .cell_bounds(index)?
            .into_iter()
            .map(|(lo, hi)| (lo + hi) * half)
            .collect();
        Point::new(coords)
    }

    /// Whether `p` lies in the closed cell `index`.
    pub fn contains(&self, index: usize, p: &Point<T>) -> Result<bool> {
        self.check_dim(p.dim())?;
        Ok(self
            .cell_bounds(index)?
            .iter()
            .zip(p.coords())
            .all(|(&(lo, hi), &v)| v >= lo && v <= hi))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got,
            });
        }
        Ok(())
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.cluster_count {
            return Err(Error::ClusterOutOfRange {
                index,
                count: self.cluster_count,
            });
        }
        Ok(())
    }
}

// max(1, ceil(1 / (2r))), snapping to the nearest integer when the ratio is
// within rounding noise of it (radii like 64^(-1/6) are not exact in binary).
fn cells_for_radius(r: f64) -> usize {
    let ratio = 1.0 / (2.0 * r);
    let nearest = ratio.round();
    let cells = if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    if cells < 1.0 {
        1
    } else {
        cells as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point<f64> {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn epoch_lengths() {
        assert_eq!(epoch_length(0).unwrap(), 1);
        assert_eq!(epoch_length(5).unwrap(), 32);
        assert_eq!(epoch_length(10).unwrap(), 1024);
        assert_eq!(epoch_length(63).unwrap(), 1 << 63);
        assert_eq!(epoch_length(64), Err(Error::EpochOverflow(64)));
    }

    #[test]
    fn slot_to_epoch() {
        assert_eq!(epoch_of_slot(1), 0);
        assert_eq!(epoch_of_slot(2), 1);
        assert_eq!(epoch_of_slot(3), 1);
        assert_eq!(epoch_of_slot(4), 2);
        assert_eq!(epoch_of_slot(1023), 9);
        assert_eq!(epoch_of_slot(1024), 10);
    }

    #[test]
    fn radii() {
        let a: f64 = 1.0 / 6.0;
        assert_eq!(nominal_radius(0, a), 1.0);
        assert!((nominal_radius(6, a) - 0.5).abs() < 1e-15);
        assert!((nominal_radius(12, a) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn build_examples() {
        let p = Partition::build(2, 0.25).unwrap();
        assert_eq!((p.cells_per_axis(), p.cluster_count()), (2, 4));
        let p = Partition::build(2, 1.0).unwrap();
        assert_eq!((p.cells_per_axis(), p.cluster_count()), (1, 1));
        let p = Partition::build(1, 0.1).unwrap();
        assert_eq!((p.cells_per_axis(), p.cluster_count()), (5, 5));
        // 0.5 < r < 1 still yields a single cell
        assert_eq!(Partition::build(3, 0.7).unwrap().cluster_count(), 1);
        assert_eq!(p.nominal_radius(), 0.1);
    }

    #[test]
    fn epoch_partitions_snap_exact_ratios() {
        let a: f64 = 1.0 / 6.0;
        assert_eq!(Partition::for_epoch(2, 6, a).unwrap().cells_per_axis(), 1);
        assert_eq!(Partition::for_epoch(2, 12, a).unwrap().cells_per_axis(), 2);
        assert_eq!(Partition::for_epoch(2, 0, a).unwrap().cluster_count(), 1);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(Partition::<f64>::build(0, 0.5).is_err());
        assert!(Partition::build(1, 0.0).is_err());
        assert!(Partition::build(1, f64::NAN).is_err());
        assert!(Partition::build(64, 0.01).is_err());
    }

    #[test]
    fn locate_examples() {
        let p2 = Partition::build(2, 0.25).unwrap();
        assert_eq!(p2.locate(&pt(&[0.49, 0.51])).unwrap(), 1);
        assert_eq!(p2.locate(&pt(&[0.51, 0.49])).unwrap(), 2);
        assert_eq!(p2.locate(&pt(&[0.0, 0.0])).unwrap(), 0);
        assert_eq!(p2.locate(&pt(&[1.0, 1.0])).unwrap(), 3);
        let p1 = Partition::build(1, 0.1).unwrap();
        assert_eq!(p1.locate(&pt(&[1.0])).unwrap(), 4);
        assert!(matches!(
            p1.locate(&pt(&[0.1, 0.2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn centers() {
        let p2 = Partition::build(2, 0.25).unwrap();
        assert_eq!(p2.cluster_center(0).unwrap().coords(), &[0.25, 0.25]);
        assert_eq!(p2.cluster_center(3).unwrap().coords(), &[0.75, 0.75]);
        assert_eq!(p2.cluster_center(1).unwrap().coords(), &[0.25, 0.75]);
        let p1 = Partition::build(1, 1.0).unwrap();
        assert_eq!(p1.cluster_center(0).unwrap().coords(), &[0.5]);
        assert!(matches!(
            p2.cluster_center(4),
            Err(Error::ClusterOutOfRange { index: 4, count: 4 })
        ));
    }

    #[test]
    fn point_validation() {
        assert!(Point::new(vec![0.0, 1.0]).is_ok());
        assert!(Point::new(vec![1.0 + 1e-12]).is_err());
        assert!(Point::new(vec![-0.0_f64, f64::NAN]).is_err());
        assert!(Point::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let p = Partition::<f32>::build(2, 0.25).unwrap();
        let x = Point::new(vec![0.49f32, 0.51]).unwrap();
        assert_eq!(p.locate(&x).unwrap(), 1);
        assert_eq!(p.cluster_center(3).unwrap().coords(), &[0.75f32, 0.75]);
    }
}
