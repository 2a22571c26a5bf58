//! Special functions backing the closed-form impulse responses: the
//! normalized sinc and Bessel J of orders 1/2, 1 and 3/2.
//!
//! `sinc` follows the *normalized* convention `sinc(x) = sin(pi x)/(pi x)`,
//! `sinc(0) = 1`. The unnormalized convention would silently rescale every
//! hyperbox impulse response by pi, so this choice is load-bearing.

use crate::error::{Error, Result};

use std::f64::consts::PI;

/// Normalized sinc, `sin(pi x) / (pi x)` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    let y = PI * x;
    if y.abs() < 1e-4 {
        // cancellation-free near zero
        let y2 = y * y;
        1.0 - y2 / 6.0 + y2 * y2 / 120.0
    } else {
        y.sin() / y
    }
}

/// `J_{1/2}(x) = sqrt(2/(pi x)) sin(x)`, continued to 0 at the origin.
pub fn bessel_j_half(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    // sqrt(2x/pi) * (sin x / x) avoids the 0/0 at small x
    (2.0 * x / PI).sqrt() * (x.sin() / x)
}

/// `J_{3/2}(x) = sqrt(2/(pi x)) (sin(x)/x - cos(x))`.
///
/// Below x = 0.25 the parenthesis loses digits to cancellation, so its
/// Taylor series is used instead.
pub fn bessel_j_three_halves(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    let g = if x < 0.25 {
        let x2 = x * x;
        x2 / 3.0 - x2 * x2 / 30.0 + x2 * x2 * x2 / 840.0 - x2 * x2 * x2 * x2 / 45360.0
    } else {
        x.sin() / x - x.cos()
    };
    (2.0 / (PI * x)).sqrt() * g
}

/// Bessel function of the first kind, order one.
///
/// Rational approximation below 5, asymptotic trigonometric form beyond,
/// with the standard Cephes coefficient tables. Peak absolute error is
/// below 3e-16 on [0, 500].
pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x <= 5.0 {
        let z = x * x;
        let w = eval_polynomial(z, &RP) / eval_polynomial_1(z, &RQ);
        return w * x * (z - Z1) * (z - Z2);
    }
    let w = 5.0 / x;
    let z = w * w;
    let p = eval_polynomial(z, &PP) / eval_polynomial(z, &PQ);
    let q = eval_polynomial(z, &QP) / eval_polynomial_1(z, &QQ);
    let xn = x - 0.75 * PI;
    (p * xn.cos() - w * q * xn.sin()) * SQRT_FRAC_2_PI / x.sqrt()
}

/// `J_nu(x)` for the supported half-integer and integer orders.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Range(format!("bessel_j argument must be >= 0, got {x}")));
    }
    if nu == 0.5 {
        Ok(bessel_j_half(x))
    } else if nu == 1.0 {
        Ok(bessel_j1(x))
    } else if nu == 1.5 {
        Ok(bessel_j_three_halves(x))
    } else {
        Err(Error::UnsupportedOrder(nu))
    }
}

/// Volume of the d-ball of radius `r`, d in {1, 2, 3}.
pub(crate) fn ball_volume(r: f64, dim: usize) -> f64 {
    match dim {
        1 => 2.0 * r,
        2 => PI * r * r,
        3 => 4.0 / 3.0 * PI * r * r * r,
        _ => unreachable!("dimension restricted to 1..=3 at construction"),
    }
}

/// Closed-form ball impulse response `(r/|u|)^{d/2} J_{d/2}(2 pi r |u|)`,
/// evaluated as its analytic limit (the ball volume) near the origin.
pub(crate) fn ball_impulse(r: f64, dist: f64, dim: usize) -> f64 {
    if dist < 1e-10 {
        return ball_volume(r, dim);
    }
    let x = 2.0 * PI * r * dist;
    let ratio = r / dist;
    match dim {
        1 => ratio.sqrt() * bessel_j_half(x),
        2 => ratio * bessel_j1(x),
        3 => ratio.powf(1.5) * bessel_j_three_halves(x),
        _ => unreachable!("dimension restricted to 1..=3 at construction"),
    }
}

/// First positive zero of J1, to full double precision.
pub const J1_FIRST_ZERO: f64 = 3.831_705_970_207_512_3;

const SQRT_FRAC_2_PI: f64 = 0.797_884_560_802_865_4;

const Z1: f64 = 1.468_197_064_212_389_3e1;
const Z2: f64 = 4.921_845_632_169_46e1;

static RP: [f64; 4] = [
    -8.999712257055594e8,
    4.5222829799819403e11,
    -7.274942452218183e13,
    3.682957328638529e15,
];

static RQ: [f64; 8] = [
    6.208364781180543e2,
    2.5698725675774884e5,
    8.351467914319493e7,
    2.215115954797925e10,
    4.749141220799914e12,
    7.843696078762359e14,
    8.952223361846274e16,
    5.322786203326801e18,
];

static PP: [f64; 7] = [
    7.621256162081731e-4,
    7.313970569409176e-2,
    1.1271960812968493,
    5.112079511468076,
    8.424045901417724,
    5.214515986823615,
    1.0,
];

static PQ: [f64; 7] = [
    5.713231280725487e-4,
    6.884559087544954e-2,
    1.105142326340617,
    5.073863861286015,
    8.399855543276042,
    5.209828486823619,
    1.0,
];

static QP: [f64; 8] = [
    5.108625947501766e-2,
    4.982138729512334,
    7.582382841325453e1,
    3.667796093601508e2,
    7.108563049989261e2,
    5.974896124006136e2,
    2.1168875710057213e2,
    2.5207020585802372e1,
];

static QQ: [f64; 7] = [
    7.423732770356752e1,
    1.0564488603826283e3,
    4.986410583376536e3,
    9.562318924047562e3,
    7.997041604473507e3,
    2.8261927851763908e3,
    3.360936078106983e2,
];

fn eval_polynomial(x: f64, coefficients: &[f64]) -> f64 {
    coefficients.iter().fold(0.0, |acc, &c| acc * x + c)
}

fn eval_polynomial_1(x: f64, coefficients: &[f64]) -> f64 {
    coefficients.iter().fold(1.0, |acc, &c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sinc_at_zero_is_one() {
        assert_eq!(sinc(0.0), 1.0);
        assert_abs_diff_eq!(sinc(0.5), (PI / 2.0).sin() / (PI / 2.0), epsilon = 1e-15);
        assert_abs_diff_eq!(sinc(1.0), 0.0, epsilon = 1e-15);
        // series / direct crossover continuity
        assert_abs_diff_eq!(sinc(1e-4 / PI), sinc(1.0000001e-4 / PI), epsilon = 1e-12);
    }

    #[test]
    fn j_half_matches_trig_form() {
        assert_eq!(bessel_j_half(0.0), 0.0);
        // sin(pi) = 0
        assert_abs_diff_eq!(bessel_j_half(PI), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            bessel_j_half(2.0),
            (2.0 / (PI * 2.0)).sqrt() * 2.0_f64.sin(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn j1_basics() {
        assert_eq!(bessel_j1(0.0), 0.0);
        // mpmath reference values
        assert_abs_diff_eq!(bessel_j1(1.0), 0.44005058574493355, epsilon = 1e-14);
        assert_abs_diff_eq!(bessel_j1(2.1752), 0.5593771605955342, epsilon = 1e-13);
        assert_abs_diff_eq!(bessel_j1(10.0), 0.04347274616886144, epsilon = 1e-14);
        assert_abs_diff_eq!(bessel_j1(100.0), -0.07714535201411215, epsilon = 1e-13);
        assert!(bessel_j1(J1_FIRST_ZERO).abs() < 1e-14);
        // spec'd truncation of the zero still lands within 1e-7
        assert!(bessel_j1(3.831706).abs() < 1e-7);
    }

    #[test]
    fn j_three_halves_series_continuity() {
        // crossover between the Taylor series and the trig form
        let a = bessel_j_three_halves(0.2499999);
        let b = bessel_j_three_halves(0.2500001);
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        // mpmath reference
        assert_abs_diff_eq!(bessel_j_three_halves(2.0), 0.4912937786871623, epsilon = 1e-13);
    }

    #[test]
    fn bessel_j_rejects_unsupported_orders() {
        assert!(matches!(bessel_j(2.0, 1.0), Err(Error::UnsupportedOrder(_))));
        assert!(matches!(bessel_j(0.25, 1.0), Err(Error::UnsupportedOrder(_))));
        assert!(bessel_j(1.0, -1.0).is_err());
        assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn ball_impulse_limit_is_volume() {
        for (dim, r) in [(1, 0.7), (2, 1.3), (3, 0.9)] {
            assert_abs_diff_eq!(ball_impulse(r, 0.0, dim), ball_volume(r, dim), epsilon = 1e-15);
            // just above the guard threshold the expression stays continuous
            let near = ball_impulse(r, 2e-10, dim);
            assert_abs_diff_eq!(near, ball_volume(r, dim), epsilon = 1e-8);
        }
    }
}
