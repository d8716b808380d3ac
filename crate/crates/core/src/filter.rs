//! Floating-point filters for exact sign tests.
//!
//! Each predicate is first evaluated in `f64` together with a rigorous error
//! bound; only when the bound does not separate the value from zero is the
//! exact rational computation run.

use crate::arrangement::Balance;
use crate::config::ColoredPointConfig;
use crate::geom::{OrientedHyperplane, Point};
use crate::rat::{self, Rat};

/// `<v, p> - c` evaluated in `f64` with an error bound.
#[derive(Debug, Clone, Copy)]
pub struct Approx {
    pub value: f64,
    pub err: f64,
}

impl Approx {
    /// Sign when the error bound certifies it.
    pub fn sign(&self) -> Option<i8> {
        if !self.value.is_finite() || !self.err.is_finite() {
            return None;
        }
        if self.value > self.err {
            Some(1)
        } else if self.value < -self.err {
            Some(-1)
        } else {
            None
        }
    }
}

/// Hyperplane with rounded coefficients alongside the exact one.
#[derive(Debug, Clone)]
pub struct FastPlane {
    pub exact: OrientedHyperplane,
    v: Vec<f64>,
    c: f64,
}

impl FastPlane {
    pub fn new(exact: OrientedHyperplane) -> Self {
        let v = exact.normal.iter().map(rat::to_f64).collect();
        let c = rat::to_f64(&exact.offset);
        FastPlane { exact, v, c }
    }

    pub fn approx(&self, p: &[f64]) -> Approx {
        let mut value = -self.c;
        let mut mag = self.c.abs();
        for (a, b) in self.v.iter().zip(p) {
            let t = a * b;
            value += t;
            mag += t.abs();
        }
        // Inputs are correctly rounded; products and the running sum add one
        // rounding each. The factor covers all of them with a 2x margin.
        let err = (self.v.len() as f64 + 8.0) * f64::EPSILON * mag + f64::MIN_POSITIVE;
        Approx { value, err }
    }

    /// Exact sign of `<v, p> - c`, using `pf` (rounded `p`) as a filter.
    pub fn side(&self, p: &Point, pf: &[f64]) -> i8 {
        self.approx(pf).sign().unwrap_or_else(|| rat::sign(&self.exact.value(p)))
    }
}

pub fn approx_point(p: &[Rat]) -> Vec<f64> {
    p.iter().map(rat::to_f64).collect()
}

/// Rounded copy of every point, indexed like the configuration.
pub fn approx_points(config: &ColoredPointConfig) -> Vec<Vec<Vec<f64>>> {
    config.colors.iter().map(|c| c.iter().map(|p| approx_point(p)).collect()).collect()
}

/// Bisection test equal to the exact one, with filtered side evaluations.
pub fn is_bisecting_fast(planes: &[FastPlane], config: &ColoredPointConfig, approx: &[Vec<Vec<f64>>]) -> bool {
    config.colors.iter().zip(approx).all(|(class, fclass)| {
        let mut bal = Balance { a: 0, b: 0, boundary: 0 };
        for (p, pf) in class.iter().zip(fclass) {
            let mut odd = false;
            let mut on = false;
            for h in planes {
                match h.side(p, pf) {
                    0 => {
                        on = true;
                        break;
                    }
                    1 => odd = !odd,
                    _ => {}
                }
            }
            if on {
                bal.boundary += 1;
            } else if odd {
                bal.b += 1;
            } else {
                bal.a += 1;
            }
        }
        bal.is_bisected()
    })
}

/// Enclosure of the root `v0 / (v0 - v1)` of a linear function whose endpoint
/// values have certified opposite signs.
pub fn root_interval(v0: Approx, v1: Approx) -> (f64, f64) {
    let (a, ea) = (v0.value.abs(), v0.err);
    let (b, eb) = (v1.value.abs(), v1.err);
    let lo = (a - ea) / ((a - ea) + (b + eb));
    let hi = (a + ea) / ((a + ea) + (b - eb));
    let slack = 8.0 * f64::EPSILON;
    (lo * (1.0 - slack) - f64::MIN_POSITIVE, hi * (1.0 + slack) + f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn filtered_side_matches_exact(
            v in proptest::collection::vec(-1_000_000i64..1_000_000, 3),
            c in -1_000_000i64..1_000_000,
            p in proptest::collection::vec(-1_000_000i64..1_000_000, 3),
            den in 1i64..1_000_000,
        ) {
            let h = OrientedHyperplane::new(v.iter().map(|&x| frac(x, den)).collect(), int(c));
            let pt: Point = p.iter().map(|&x| frac(x, 7)).collect();
            let fast = FastPlane::new(h.clone());
            prop_assert_eq!(fast.side(&pt, &approx_point(&pt)), rat::sign(&h.value(&pt)));
        }

        #[test]
        fn root_interval_encloses_exact_root(a in 1i64..1_000_000_000, b in 1i64..1_000_000_000, den in 1i64..1000) {
            let v0 = frac(a, den);
            let v1 = frac(-b, den);
            let approx = |x: &Rat| Approx { value: rat::to_f64(x), err: 4.0 * f64::EPSILON * rat::to_f64(x).abs() };
            let (lo, hi) = root_interval(approx(&v0), approx(&v1));
            let t = rat::to_f64(&(&v0 / (&v0 - &v1)));
            prop_assert!(lo <= t && t <= hi);
        }
    }

    #[test]
    fn exact_fallback_on_boundary() {
        let h = FastPlane::new(OrientedHyperplane::new(vec![frac(1, 3), int(1)], frac(1, 3)));
        let p = vec![int(1), int(0)];
        assert_eq!(h.side(&p, &approx_point(&p)), 0);
    }
}
