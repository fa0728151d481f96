//! Midpoint-rule hemisphere integration on a regular altitude/azimuth lattice.

use helios_core::Vec3;

/// CIE overcast luminance relative to the zenith, `(1 + 2 sin(alt)) / 3`.
pub fn overcast_relative(dir: Vec3) -> f64 {
    (1.0 + 2.0 * dir.z) / 3.0
}

/// `∫ L(ω) · max(0, ω·normal) · w(ω) dω` over the upper hemisphere with
/// `n_alt × n_az` cells, evaluating `L` and the weight `w` at cell centres.
pub fn hemisphere_integral(
    n_alt: usize,
    n_az: usize,
    normal: Vec3,
    luminance: impl Fn(Vec3) -> f64,
    weight: impl Fn(Vec3) -> f64,
) -> f64 {
    let d_alt = std::f64::consts::FRAC_PI_2 / n_alt as f64;
    let d_az = std::f64::consts::TAU / n_az as f64;
    let mut total = 0.0;
    for i in 0..n_alt {
        let alt = (i as f64 + 0.5) * d_alt;
        let (lo, hi) = (i as f64 * d_alt, (i as f64 + 1.0) * d_alt);
        let omega = d_az * (hi.sin() - lo.sin());
        for j in 0..n_az {
            let az = (j as f64 + 0.5) * d_az;
            let dir = Vec3::new(alt.cos() * az.sin(), alt.cos() * az.cos(), alt.sin());
            let cosine = dir.dot(normal);
            if cosine <= 0.0 {
                continue;
            }
            total += luminance(dir) * cosine * omega * weight(dir);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converges_to_closed_form() {
        let e = hemisphere_integral(400, 400, Vec3::unit_z(), overcast_relative, |_| 1.0);
        assert!((e - 7.0 * std::f64::consts::PI / 9.0).abs() < 1e-4);
    }
}
