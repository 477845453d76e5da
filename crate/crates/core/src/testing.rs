//! Random smooth test functions and states for property checks.

use rand::Rng;

use crate::expr::Expr;

/// Sum of `terms` random monomials of total degree ≤ `degree` in `nvars`
/// variables with coefficients in [−1, 1].
pub fn random_polynomial<R: Rng>(rng: &mut R, nvars: usize, degree: u32, terms: usize) -> Expr {
    let mut out = Expr::constant(rng.random_range(-1.0..1.0));
    for _ in 0..terms {
        let mut m = Expr::constant(rng.random_range(-1.0..1.0));
        let mut left = rng.random_range(1..=degree.max(1));
        while left > 0 {
            let v = rng.random_range(0..nvars);
            m = m * Expr::var(v);
            left -= 1;
        }
        out = out + m;
    }
    out
}

/// Random polynomial times a Gaussian envelope, smooth and decaying.
pub fn random_gaussian_packet<R: Rng>(rng: &mut R, nvars: usize, degree: u32, terms: usize) -> Expr {
    let p = random_polynomial(rng, nvars, degree, terms);
    let r2 = Expr::sum((0..nvars).map(|i| (Expr::var(i) - rng.random_range(-0.3..0.3)).sq() * rng.random_range(0.2..0.6)));
    p * (-r2).exp()
}

pub fn random_point<R: Rng>(rng: &mut R, ranges: &[(f64, f64)]) -> Vec<f64> {
    ranges.iter().map(|&(a, b)| rng.random_range(a..b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn polynomial_degree_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random_polynomial(&mut rng, 2, 3, 5);
        // fourth derivatives vanish
        for a in 0..2 {
            for b in 0..2 {
                let d = p.diff(a).diff(b).diff(a).diff(b);
                assert_eq!(d.eval(&[0.3, -0.8]), 0.0);
            }
        }
        assert!(p.arity() <= 2);
    }
}
