//! Unit conversions. Internally ħ = 1, energies are angular frequencies in
//! rad/s and times are in seconds.

use std::f64::consts::PI;

/// 2π·f GHz expressed in rad/s.
pub fn ghz(f: f64) -> f64 {
    2.0 * PI * f * 1e9
}

/// Angular frequency in rad/s to ordinary frequency in GHz.
pub fn to_ghz(omega: f64) -> f64 {
    omega / (2.0 * PI * 1e9)
}

/// 2π·f MHz in rad/s.
pub fn mhz(f: f64) -> f64 {
    2.0 * PI * f * 1e6
}

/// Nanoseconds to seconds.
pub fn ns(t: f64) -> f64 {
    t * 1e-9
}

/// Seconds to nanoseconds.
pub fn to_ns(t: f64) -> f64 {
    t * 1e9
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        assert!((to_ghz(ghz(4.18)) - 4.18).abs() < 1e-12);
        assert!((to_ns(ns(52.0)) - 52.0).abs() < 1e-12);
        assert!((ghz(0.001) - mhz(1.0)).abs() < 1e-6);
    }
}
