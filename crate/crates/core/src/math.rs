//! Float helpers that `core` does not provide without `std`.

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// Relative closeness with an absolute floor of one.
#[inline]
pub(crate) fn close(a: f64, b: f64, rel: f64) -> bool {
    abs(a - b) <= rel * (1.0 + abs(a).max(abs(b)))
}
