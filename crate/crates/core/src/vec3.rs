//! Small helpers for real 3-vectors stored as `[S; 3]`.

use crate::real::Real;

pub fn dot<S: Real>(a: [S; 3], b: [S; 3]) -> S {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm_sqr<S: Real>(a: [S; 3]) -> S {
    dot(a, a)
}

pub fn norm<S: Real>(a: [S; 3]) -> S {
    norm_sqr(a).sqrt()
}

pub fn scale<S: Real>(a: [S; 3], s: S) -> [S; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add<S: Real>(a: [S; 3], b: [S; 3]) -> [S; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub<S: Real>(a: [S; 3], b: [S; 3]) -> [S; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn zero<S: Real>() -> [S; 3] {
    [S::zero(); 3]
}
