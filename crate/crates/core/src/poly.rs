//! Univariate rational polynomials with Sturm-sequence root isolation.

use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Root {
    Exact(Rat),
    /// Open interval holding exactly one root.
    Isolated(Rat, Rat),
}

impl Root {
    pub fn lower(&self) -> &Rat {
        match self {
            Root::Exact(r) => r,
            Root::Isolated(a, _) => a,
        }
    }

    pub fn upper(&self) -> &Rat {
        match self {
            Root::Exact(r) => r,
            Root::Isolated(_, b) => b,
        }
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer((i as i64).into()))
                .collect(),
        )
    }

    /// Lagrange interpolation through `(xs[i], ys[i])` with distinct nodes.
    pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> Self {
        let n = xs.len();
        let mut acc = vec![Rat::zero(); n];
        for i in 0..n {
            let mut basis = vec![Rat::one()];
            let mut denom = Rat::one();
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut next = vec![Rat::zero(); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b;
                    next[k] -= b * &xs[j];
                }
                basis = next;
                denom *= &xs[i] - &xs[j];
            }
            let scale = &ys[i] / denom;
            for (k, b) in basis.iter().enumerate() {
                acc[k] += b * &scale;
            }
        }
        Poly::new(acc)
    }

    fn rem(&self, other: &Poly) -> Poly {
        let mut r = self.coeffs.clone();
        let dq = other.coeffs.len() - 1;
        let lead = other.coeffs.last().expect("nonzero divisor");
        while r.len() > dq && !r.is_empty() {
            let shift = r.len() - 1 - dq;
            let f = r.last().unwrap() / lead;
            for (i, c) in other.coeffs.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// `p, p', -rem(p, p'), ...` down to a constant.
    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(Poly::new(r.coeffs.into_iter().map(|c| -c).collect()));
        }
        seq
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(seq: &[Poly], a: &Rat, b: &Rat) -> usize {
        sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
    }

    /// Isolates every distinct root in the open interval `(lo, hi)`. Linear
    /// factors are solved exactly; other roots are returned as isolating intervals
    /// no wider than `width`, with exact hits reported as such.
    pub fn roots_in(&self, lo: &Rat, hi: &Rat, width: &Rat) -> Vec<Root> {
        match self.degree() {
            None | Some(0) => return Vec::new(),
            Some(1) => {
                let r = -&self.coeffs[0] / &self.coeffs[1];
                return if &r > lo && &r < hi { vec![Root::Exact(r)] } else { Vec::new() };
            }
            _ => {}
        }
        let seq = self.sturm_sequence();
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone())];
        while let Some((a, b)) = stack.pop() {
            // Roots in (a, b): count on (a, b] minus a root at b itself.
            let mut n = Poly::count_roots(&seq, &a, &b);
            if self.eval(&b).is_zero() {
                n -= 1;
            }
            if n == 0 {
                continue;
            }
            let mid = (&a + &b) / Rat::from_integer(2.into());
            if n == 1 && &b - &a <= *width {
                out.push(Root::Isolated(a, b));
                continue;
            }
            if self.eval(&mid).is_zero() {
                out.push(Root::Exact(mid.clone()));
            }
            stack.push((mid.clone(), b));
            stack.push((a, mid));
        }
        out.sort_by(|x, y| x.lower().cmp(y.lower()));
        out
    }
}

fn sign_changes(seq: &[Poly], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn linear_root_is_exact() {
        let roots = p(&[-1, 3]).roots_in(&int(0), &int(1), &frac(1, 1 << 20));
        assert_eq!(roots, vec![Root::Exact(frac(1, 3))]);
        assert!(p(&[-5, 3]).roots_in(&int(0), &int(1), &frac(1, 8)).is_empty());
        assert!(p(&[0, 1]).roots_in(&int(0), &int(1), &frac(1, 8)).is_empty());
    }

    #[test]
    fn sturm_counts_and_isolates() {
        // (x - 1/4)(x - 1/2)(x - 3/4) scaled by 64.
        let q = p(&[-6, 44, -96, 64]);
        let seq = q.sturm_sequence();
        assert_eq!(Poly::count_roots(&seq, &int(0), &int(1)), 3);
        let roots = q.roots_in(&int(0), &int(1), &frac(1, 1 << 10));
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[1], Root::Exact(frac(1, 2)));
        for (r, want) in roots.iter().zip([frac(1, 4), frac(1, 2), frac(3, 4)]) {
            assert!(r.lower() <= &want && &want <= r.upper());
        }
        // x^2 - 2 has one root in (0, 2), irrational.
        let roots = p(&[-2, 0, 1]).roots_in(&int(0), &int(2), &frac(1, 1 << 20));
        assert_eq!(roots.len(), 1);
        let Root::Isolated(a, b) = &roots[0] else { panic!("expected an interval") };
        assert!(a * a < int(2) && b * b > int(2));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let q = p(&[2, -1, 0, 5]);
        let xs: Vec<Rat> = (0..4).map(int).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| q.eval(x)).collect();
        assert_eq!(Poly::interpolate(&xs, &ys), q);
    }
}
