//! Uniform rectangular grids (1D/2D/3D) and second-order finite-difference
//! stencils applied componentwise to scalar, complex and quaternion fields.
//!
//! Interior stencils are central; the boundary layers use one-sided
//! second-order formulas so every operator keeps order 2 everywhere.
//! Residual norms nonetheless exclude a one-cell margin (see
//! [`Field::linf_interior`]) so that convergence measurements see only the
//! central-stencil error.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::Error;
use crate::quaternion::Quaternion;
use crate::real::Real;
use crate::Result;

/// Minimum points per axis: central stencils plus a nonempty interior.
pub const MIN_POINTS_PER_AXIS: usize = 5;

/// Uniform rectangular grid with up to three axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<S> {
    origin: [S; 3],
    spacing: [S; 3],
    dims: Vec<usize>,
}

impl<S: Real> Grid<S> {
    /// `dims.len()` axes (1 to 3), all with at least
    /// [`MIN_POINTS_PER_AXIS`] points and strictly positive spacing.
    pub fn new(origin: &[S], spacing: &[S], dims: &[usize]) -> Result<Self> {
        let rank = dims.len();
        if rank == 0 || rank > 3 || origin.len() != rank || spacing.len() != rank {
            return Err(Error::BadRank { got: rank });
        }
        for (axis, (&n, &h)) in dims.iter().zip(spacing).enumerate() {
            if n < MIN_POINTS_PER_AXIS {
                return Err(Error::GridTooSmall {
                    axis,
                    min: MIN_POINTS_PER_AXIS,
                    got: n,
                });
            }
            if !(h > S::zero()) {
                return Err(Error::BadSpacing { axis });
            }
        }
        let mut o = [S::zero(); 3];
        let mut s = [S::one(); 3];
        o[..rank].copy_from_slice(origin);
        s[..rank].copy_from_slice(spacing);
        Ok(Grid {
            origin: o,
            spacing: s,
            dims: dims.to_vec(),
        })
    }

    /// 1D grid over `[start, start + extent]` with `n` points.
    pub fn line(start: S, extent: S, n: usize) -> Result<Self> {
        if n < MIN_POINTS_PER_AXIS {
            return Err(Error::GridTooSmall {
                axis: 0,
                min: MIN_POINTS_PER_AXIS,
                got: n,
            });
        }
        let h = extent / S::from_usize(n - 1).unwrap();
        Grid::new(&[start], &[h], &[n])
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn spacing(&self, axis: usize) -> S {
        self.spacing[axis]
    }

    pub fn origin(&self) -> [S; 3] {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Product of the spacings over the active axes.
    pub fn cell_volume(&self) -> S {
        (0..self.rank()).fold(S::one(), |acc, a| acc * self.spacing[a])
    }

    /// Decompose a linear index (axis 0 fastest).
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let mut m = [0usize; 3];
        let mut rest = idx;
        for a in 0..self.rank() {
            m[a] = rest % self.dims[a];
            rest /= self.dims[a];
        }
        m
    }

    pub fn linear_index(&self, m: [usize; 3]) -> usize {
        let mut idx = 0;
        for a in (0..self.rank()).rev() {
            idx = idx * self.dims[a] + m[a];
        }
        idx
    }

    /// Coordinates of a grid point; inactive axes report 0.
    pub fn point(&self, idx: usize) -> [S; 3] {
        let m = self.multi_index(idx);
        let mut p = [S::zero(); 3];
        for a in 0..self.rank() {
            p[a] = self.origin[a] + self.spacing[a] * S::from_usize(m[a]).unwrap();
        }
        p
    }

    /// True when the point is at least one cell away from every face.
    pub fn is_interior(&self, idx: usize) -> bool {
        self.is_interior_within(idx, 1)
    }

    /// True when the point is at least `margin` cells away from every face.
    /// Composed stencils (a derivative of a derivative) need `margin = 2`
    /// to stay clear of the one-sided boundary formulas.
    pub fn is_interior_within(&self, idx: usize, margin: usize) -> bool {
        let m = self.multi_index(idx);
        (0..self.rank()).all(|a| m[a] >= margin && m[a] + margin < self.dims[a])
    }

    /// Same extent, spacing halved: n → 2n − 1 points per axis.
    pub fn refined(&self) -> Self {
        let rank = self.rank();
        let dims: Vec<usize> = self.dims.iter().map(|&n| 2 * n - 1).collect();
        let spacing: Vec<S> = (0..rank).map(|a| self.spacing[a] * S::of(0.5)).collect();
        Grid::new(&self.origin[..rank], &spacing, &dims).expect("refinement preserves validity")
    }
}

/// Value types a [`Field`] can hold: a real-linear space with a norm.
pub trait FieldValue<S>: Copy + Send + Sync {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, s: S) -> Self;
    fn magnitude(self) -> S;
}

impl<S: Real> FieldValue<S> for S {
    fn zero() -> Self {
        S::zero()
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: S) -> Self {
        self * s
    }
    fn magnitude(self) -> S {
        self.abs()
    }
}

impl<S: Real> FieldValue<S> for Complex<S> {
    fn zero() -> Self {
        Complex::new(S::zero(), S::zero())
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: S) -> Self {
        self * s
    }
    fn magnitude(self) -> S {
        self.norm()
    }
}

impl<S: Real> FieldValue<S> for Quaternion<S> {
    fn zero() -> Self {
        Quaternion::zero()
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: S) -> Self {
        Quaternion::scale(self, s)
    }
    fn magnitude(self) -> S {
        self.norm()
    }
}

impl<S: Real> FieldValue<S> for [S; 3] {
    fn zero() -> Self {
        [S::zero(); 3]
    }
    fn add(self, o: Self) -> Self {
        [self[0] + o[0], self[1] + o[1], self[2] + o[2]]
    }
    fn sub(self, o: Self) -> Self {
        [self[0] - o[0], self[1] - o[1], self[2] - o[2]]
    }
    fn scale(self, s: S) -> Self {
        [self[0] * s, self[1] * s, self[2] * s]
    }
    fn magnitude(self) -> S {
        (self[0] * self[0] + self[1] * self[1] + self[2] * self[2]).sqrt()
    }
}

/// Values sampled on a [`Grid`], immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<S, T> {
    grid: Grid<S>,
    values: Vec<T>,
}

/// Quaternion-valued field (wave functions).
pub type QField<S> = Field<S, Quaternion<S>>;
/// Complex-valued field (the underlying CQM solutions).
pub type ComplexField<S> = Field<S, Complex<S>>;
/// Real scalar field (densities, polar angles, residuals).
pub type ScalarField<S> = Field<S, S>;
/// Real 3-vector field (currents); inactive axes carry zeros.
pub type VectorField<S> = Field<S, [S; 3]>;

impl<S: Real, T: FieldValue<S>> Field<S, T> {
    pub fn from_values(grid: Grid<S>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Field { grid, values })
    }

    /// Sample a function of position in parallel over grid points.
    pub fn sample(grid: &Grid<S>, f: impl Fn([S; 3]) -> T + Sync) -> Self {
        let values: Vec<T> = (0..grid.len())
            .into_par_iter()
            .map(|i| f(grid.point(i)))
            .collect();
        Field {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid<S> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn map<U: FieldValue<S>>(&self, f: impl Fn(T) -> U + Sync) -> Field<S, U> {
        let values: Vec<U> = self.values.par_iter().map(|&v| f(v)).collect();
        Field {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn zip<U: FieldValue<S>, V: FieldValue<S>>(
        &self,
        other: &Field<S, U>,
        f: impl Fn(T, U) -> V + Sync,
    ) -> Result<Field<S, V>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values: Vec<V> = self
            .values
            .par_iter()
            .zip(other.values.par_iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Field {
            grid: self.grid.clone(),
            values,
        })
    }

    /// Max of `magnitude` over all points.
    pub fn linf(&self) -> S {
        self.values
            .iter()
            .fold(S::zero(), |m, v| m.max(v.magnitude()))
    }

    /// Max of `magnitude` over interior points (one-cell margin dropped).
    pub fn linf_interior(&self) -> S {
        self.linf_within(1)
    }

    /// Max of `magnitude` at least `margin` cells from every face.
    pub fn linf_within(&self, margin: usize) -> S {
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| self.grid.is_interior_within(*i, margin))
            .fold(S::zero(), |m, (_, v)| m.max(v.magnitude()))
    }

    /// Root-mean-square of `magnitude` over interior points.
    pub fn l2_interior(&self) -> S {
        self.l2_within(1)
    }

    /// Root-mean-square of `magnitude` at least `margin` cells from every
    /// face.
    pub fn l2_within(&self, margin: usize) -> S {
        let mut sum = S::zero();
        let mut count = 0usize;
        for (i, v) in self.values.iter().enumerate() {
            if self.grid.is_interior_within(i, margin) {
                let m = v.magnitude();
                sum += m * m;
                count += 1;
            }
        }
        if count == 0 {
            S::zero()
        } else {
            (sum / S::from_usize(count).unwrap()).sqrt()
        }
    }

    /// Second-order first derivative along one axis: central in the
    /// interior, one-sided (3-point) on the two boundary layers.
    pub fn derivative(&self, axis: usize) -> Self {
        let grid = &self.grid;
        let n = grid.dims()[axis];
        let inv_2h = (S::of(2.0) * grid.spacing(axis)).recip();
        let stride = self.axis_stride(axis);
        let values: Vec<T> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let pos = grid.multi_index(idx)[axis];
                if pos >= 1 && pos + 2 <= n {
                    self.values[idx + stride]
                        .sub(self.values[idx - stride])
                        .scale(inv_2h)
                } else if pos == 0 {
                    // (−3f₀ + 4f₁ − f₂) / 2h
                    self.values[idx + stride]
                        .scale(S::of(4.0))
                        .sub(self.values[idx].scale(S::of(3.0)))
                        .sub(self.values[idx + 2 * stride])
                        .scale(inv_2h)
                } else {
                    self.values[idx]
                        .scale(S::of(3.0))
                        .sub(self.values[idx - stride].scale(S::of(4.0)))
                        .add(self.values[idx - 2 * stride])
                        .scale(inv_2h)
                }
            })
            .collect();
        Field {
            grid: grid.clone(),
            values,
        }
    }

    /// Second-order second derivative along one axis.
    pub fn second_derivative(&self, axis: usize) -> Self {
        let grid = &self.grid;
        let n = grid.dims()[axis];
        let h = grid.spacing(axis);
        let inv_h2 = (h * h).recip();
        let stride = self.axis_stride(axis);
        let values: Vec<T> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let pos = grid.multi_index(idx)[axis];
                if pos >= 1 && pos + 2 <= n {
                    self.values[idx + stride]
                        .add(self.values[idx - stride])
                        .sub(self.values[idx].scale(S::of(2.0)))
                        .scale(inv_h2)
                } else if pos == 0 {
                    // (2f₀ − 5f₁ + 4f₂ − f₃) / h²
                    self.values[idx]
                        .scale(S::of(2.0))
                        .sub(self.values[idx + stride].scale(S::of(5.0)))
                        .add(self.values[idx + 2 * stride].scale(S::of(4.0)))
                        .sub(self.values[idx + 3 * stride])
                        .scale(inv_h2)
                } else {
                    self.values[idx]
                        .scale(S::of(2.0))
                        .sub(self.values[idx - stride].scale(S::of(5.0)))
                        .add(self.values[idx - 2 * stride].scale(S::of(4.0)))
                        .sub(self.values[idx - 3 * stride])
                        .scale(inv_h2)
                }
            })
            .collect();
        Field {
            grid: grid.clone(),
            values,
        }
    }

    fn axis_stride(&self, axis: usize) -> usize {
        let mut stride = 1;
        for a in 0..axis {
            stride *= self.grid.dims()[a];
        }
        stride
    }
}

/// Gradient as one field per active axis.
pub fn gradient_fd<S: Real, T: FieldValue<S>>(f: &Field<S, T>) -> Vec<Field<S, T>> {
    (0..f.grid().rank()).map(|a| f.derivative(a)).collect()
}

/// Componentwise Laplacian, 3-point stencil per axis.
pub fn laplacian_fd<S: Real, T: FieldValue<S>>(f: &Field<S, T>) -> Field<S, T> {
    let mut acc = f.second_derivative(0);
    for axis in 1..f.grid().rank() {
        let d = f.second_derivative(axis);
        acc = acc.zip(&d, |a, b| a.add(b)).expect("same grid");
    }
    acc
}

/// Divergence of a vector field over the active axes.
pub fn divergence_fd<S: Real>(f: &Field<S, [S; 3]>) -> ScalarField<S> {
    let rank = f.grid().rank();
    let mut acc: Option<ScalarField<S>> = None;
    for axis in 0..rank {
        let comp = f.map(|v| v[axis]);
        let d = comp.derivative(axis);
        acc = Some(match acc {
            None => d,
            Some(a) => a.zip(&d, |x, y| x + y).expect("same grid"),
        });
    }
    acc.expect("rank >= 1")
}

/// Second-order time derivative of a sampled series with uniform step `dt`.
pub fn time_derivative_fd<S: Real, T: FieldValue<S>>(samples: &[T], dt: S) -> Result<Vec<T>> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            min: 3,
            got: samples.len(),
        });
    }
    if !(dt > S::zero()) {
        return Err(Error::BadSpacing { axis: 0 });
    }
    let n = samples.len();
    let inv_2dt = (S::of(2.0) * dt).recip();
    let mut out = Vec::with_capacity(n);
    out.push(
        samples[1]
            .scale(S::of(4.0))
            .sub(samples[0].scale(S::of(3.0)))
            .sub(samples[2])
            .scale(inv_2dt),
    );
    for t in 1..n - 1 {
        out.push(samples[t + 1].sub(samples[t - 1]).scale(inv_2dt));
    }
    out.push(
        samples[n - 1]
            .scale(S::of(3.0))
            .sub(samples[n - 2].scale(S::of(4.0)))
            .add(samples[n - 3])
            .scale(inv_2dt),
    );
    Ok(out)
}
