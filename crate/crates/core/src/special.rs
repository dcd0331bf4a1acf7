//! Spherical Bessel functions j_ℓ, y_ℓ and their Riccati forms.
//!
//! j_ℓ uses the power series for small arguments, upward recurrence when
//! ℓ < z, and Miller's downward recurrence otherwise. y_ℓ is always
//! computed upward, which is its stable direction.

/// Spherical Bessel function of the first kind.
pub fn sph_j(ell: usize, z: f64) -> f64 {
    if z == 0.0 {
        return if ell == 0 { 1.0 } else { 0.0 };
    }
    if z < 1.0 {
        return series_j(ell, z);
    }
    let j0 = z.sin() / z;
    if ell == 0 {
        return j0;
    }
    let j1 = z.sin() / (z * z) - z.cos() / z;
    if (ell as f64) < z {
        let (mut a, mut b) = (j0, j1);
        for n in 1..ell {
            let c = (2 * n + 1) as f64 / z * b - a;
            a = b;
            b = c;
        }
        return b;
    }
    miller_j(ell, z, j0, j1)
}

fn series_j(ell: usize, z: f64) -> f64 {
    // z^ℓ / (2ℓ+1)!!
    let mut lead = 1.0;
    for k in 1..=ell {
        lead *= z / (2 * k + 1) as f64;
    }
    let x = -0.5 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= x / (k as f64 * (2 * ell + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn miller_j(ell: usize, z: f64, j0: f64, j1: f64) -> f64 {
    let start = ell + z.ceil() as usize + 40;
    let (mut above, mut cur) = (0.0_f64, 1e-30_f64);
    let mut at_ell = 0.0;
    let mut at0 = 0.0;
    let mut at1 = 0.0;
    for n in (1..=start).rev() {
        let below = (2 * n + 1) as f64 / z * cur - above;
        above = cur;
        cur = below;
        // `cur` now holds the unnormalized value at index n - 1.
        if n - 1 == ell {
            at_ell = cur;
        }
        if n - 1 == 1 {
            at1 = cur;
        }
        if n - 1 == 0 {
            at0 = cur;
        }
        if cur.abs() > 1e200 {
            cur *= 1e-200;
            above *= 1e-200;
            at_ell *= 1e-200;
            at1 *= 1e-200;
        }
    }
    if j0.abs() >= j1.abs() {
        at_ell * j0 / at0
    } else {
        at_ell * j1 / at1
    }
}

/// Spherical Bessel function of the second kind.
pub fn sph_y(ell: usize, z: f64) -> f64 {
    let y0 = -z.cos() / z;
    if ell == 0 {
        return y0;
    }
    let y1 = -z.cos() / (z * z) - z.sin() / z;
    let (mut a, mut b) = (y0, y1);
    for n in 1..ell {
        let c = (2 * n + 1) as f64 / z * b - a;
        a = b;
        b = c;
    }
    b
}

/// Riccati-Bessel Ŝ_ℓ(z) = z j_ℓ(z) (regular at the origin).
pub fn riccati_s(ell: usize, z: f64) -> f64 {
    z * sph_j(ell, z)
}

/// Riccati-Bessel Ĉ_ℓ(z) = -z y_ℓ(z) (equals cos z for ℓ = 0).
pub fn riccati_c(ell: usize, z: f64) -> f64 {
    -z * sph_y(ell, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an independent double-precision implementation.
    const TABLE: &[(usize, f64, f64, f64)] = &[
        (0, 1e-3, 0.9999998333333416, -999.9995000000416),
        (0, 0.5, 0.958851077208406, -1.7551651237807455),
        (0, 3.0, 0.0470400026866224, 0.3299974988668151),
        (0, 1000.0, 0.0008268795405320025, -0.0005623790762907029),
        (1, 1e-3, 0.0003333333000000017, -1000000.499999875),
        (1, 12.0, -0.07404736404715515, 0.038854312897727276),
        (2, 0.5, 0.016371106607993423, -25.059922824838637),
        (2, 3.0, 0.29863749707573356, -0.26703833526449916),
        (2, 100.0, 0.004803441652487954, 0.008772511458592903),
        (5, 1e-3, 9.620009250009209e-20, -9.45000052500002e+20),
        (5, 0.5, 2.97746687545745e-06, -61327.56316698064),
        (5, 3.0, 0.016397480955999116, -2.2470233284653895),
        (5, 12.0, -0.06744479596026837, -0.056928647611978224),
        (5, 1000.0, -0.0005499171811997862, -0.0008352281689073279),
        (8, 1e-3, 2.901963609909948e-32, -2.0270250675675012e+33),
        (8, 0.5, 1.1261439602121288e-10, -1046527178.0488364),
        (8, 3.0, 0.00014983375626892922, -140.06010937928784),
        (8, 12.0, 0.054136377188791704, 0.08216203195239896),
        (8, 100.0, -0.0017024509771905124, -0.009872363502226466),
        (8, 1000.0, 0.000846600399009209, -0.0005322628732943451),
    ];

    #[test]
    fn matches_reference_table() {
        for &(l, z, j, y) in TABLE {
            let (gj, gy) = (sph_j(l, z), sph_y(l, z));
            assert!((gj - j).abs() <= 1e-12 * j.abs().max(1e-300), "j_{l}({z}) = {gj} vs {j}");
            assert!((gy - y).abs() <= 1e-12 * y.abs(), "y_{l}({z}) = {gy} vs {y}");
        }
    }

    #[test]
    fn wronskian_identity() {
        // j_ℓ y_{ℓ-1} - j_{ℓ-1} y_ℓ = 1/z²
        for l in 1..=8 {
            for z in [0.3, 1.7, 6.0, 25.0, 400.0] {
                let w = sph_j(l, z) * sph_y(l - 1, z) - sph_j(l - 1, z) * sph_y(l, z);
                assert!((w * z * z - 1.0).abs() < 1e-10, "l={l} z={z}: {w}");
            }
        }
    }

    #[test]
    fn riccati_s_wave() {
        for z in [0.1, 1.0, 4.0] {
            assert!((riccati_s(0, z) - z.sin()).abs() < 1e-15);
            assert!((riccati_c(0, z) - z.cos()).abs() < 1e-15);
        }
    }
}
