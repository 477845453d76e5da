use kvn_core::expr::{parse, Expr};
use kvn_core::state::{generator_count, THETA, THETABAR};
use kvn_core::superspace::{berezin, lift, omega_matrix, Superfield};
use kvn_core::testing::random_polynomial;
use kvn_core::{ExtendedState, GrassmannElement};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const G: usize = 6;

fn gen(i: usize) -> GrassmannElement {
    GrassmannElement::generator(G, i).unwrap()
}

fn one() -> GrassmannElement {
    GrassmannElement::one(G)
}

/// Product of two generator words: concatenate, then bubble-sort counting
/// transpositions. Returns None when a generator repeats.
fn word_product(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut w: Vec<usize> = a.iter().chain(b).copied().collect();
    let mut sign = 1.0;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] == w[j + 1] {
                return None;
            }
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, sign))
}

fn mask_to_word(m: u64) -> Vec<usize> {
    (0..64).filter(|i| m & (1 << i) != 0).collect()
}

fn naive_mul(a: &GrassmannElement, b: &GrassmannElement) -> GrassmannElement {
    let mut out = GrassmannElement::zero(a.generator_count());
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if let Some((w, s)) = word_product(&mask_to_word(ma), &mask_to_word(mb)) {
                let m = w.iter().fold(0u64, |acc, i| acc | (1 << i));
                out.add_term(m, ca * cb * s);
            }
        }
    }
    out
}

/// λ_a ω^{ab} ∂_b H + i c̄_a ω^{ad} ∂_d∂_b H c^b with ω written out by hand.
fn cal_oracle(h: &Expr, s: &ExtendedState) -> GrassmannElement {
    let n = s.n;
    let g = s.generator_count();
    let w = |a: usize, b: usize| -> f64 {
        if a < n && b == a + n {
            1.0
        } else if a >= n && b + n == a {
            -1.0
        } else {
            0.0
        }
    };
    let mut out = GrassmannElement::zero(g);
    for a in 0..2 * n {
        for b in 0..2 * n {
            if w(a, b) == 0.0 {
                continue;
            }
            let db = h.diff(b);
            out = &out + &GrassmannElement::scalar(g, s.lam[a] * w(a, b) * db.eval(&s.phi));
            for c in 0..2 * n {
                let hess = db.diff(c).eval(&s.phi);
                out = &out + &(&s.cbar[a] * &s.c[c]).scale(Complex64::new(0.0, w(a, b) * hess));
            }
        }
    }
    out
}

fn random_element(rng: &mut ChaCha8Rng, odd_only: bool) -> GrassmannElement {
    let mut e = GrassmannElement::zero(G);
    for _ in 0..6 {
        let mut mask = rng.random_range(0u64..(1 << G));
        if odd_only && mask.count_ones() % 2 == 0 {
            mask ^= 1 << rng.random_range(0..G);
        }
        e.add_term(mask, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    }
    e
}

#[test]
fn theta_products() {
    let (t, tb) = (gen(THETA), gen(THETABAR));
    let ttb = GrassmannElement::monomial(G, &[THETA, THETABAR], 1.0).unwrap();
    assert_eq!(t.gmul(&tb).unwrap(), ttb);
    assert_eq!(tb.gmul(&t).unwrap(), -&ttb);
    assert!(t.gmul(&t).unwrap().is_zero());
}

#[test]
fn product_of_two_shifts() {
    // (1 + θc)(1 + θ̄d) with c, d the generators 2 and 3
    let (t, tb, c, d) = (gen(0), gen(1), gen(2), gen(3));
    let a = &one() + &(&t * &c);
    let b = &one() + &(&tb * &d);
    let prod = a.gmul(&b).unwrap();
    assert_eq!(prod, naive_mul(&a, &b));
    assert_eq!(prod.body(), Complex64::new(1.0, 0.0));
    assert_eq!(prod.coefficient(0b0101), Complex64::new(1.0, 0.0));
    assert_eq!(prod.coefficient(0b1010), Complex64::new(1.0, 0.0));
    // θ c θ̄ d = −θ θ̄ c d
    assert_eq!(prod.coefficient(0b1111), Complex64::new(-1.0, 0.0));
}

#[test]
fn multiplication_matches_word_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let a = random_element(&mut rng, false);
        let b = random_element(&mut rng, false);
        assert!(a.gmul(&b).unwrap().distance(&naive_mul(&a, &b)) < 1e-14);
    }
}

#[test]
fn berezin_examples() {
    let k = 2.5;
    let (t, tb) = (gen(THETA), gen(THETABAR));
    let e = (&tb * &t).scale(Complex64::new(0.0, k));
    assert_eq!(berezin(&e), GrassmannElement::scalar(G, -k));
    assert!(berezin(&(&t * &gen(2))).is_zero());
}

#[test]
fn berezin_of_free_hamiltonian() {
    let m = 1.7;
    let h = parse(&format!("p^2/(2*{m})"), &["q", "p"]).unwrap();
    let (q, p, lq, lp) = (0.4, -1.3, 0.8, 2.1);
    let s = ExtendedState::bosonic(vec![q, p], vec![lq, lp]).unwrap();
    let l = lift(&h, &s);
    let b = berezin(&l.expansion);
    assert!((b.body().re - lq * p / m).abs() < 1e-14);
    assert!(b.body().im.abs() < 1e-14);
    assert!((l.cal_o.body().re - lq * p / m).abs() < 1e-14);
}

#[test]
fn lift_of_position() {
    let q = parse("q", &["q", "p"]).unwrap();
    let s = ExtendedState::bosonic(vec![0.2, 0.9], vec![1.1, -0.6]).unwrap();
    let l = lift(&q, &s);
    assert_eq!(l.value, 0.2);
    // ω^{pq} = −1 picks −λ_p
    assert!((l.cal_o.body().re - 0.6).abs() < 1e-15);
}

#[test]
fn lift_of_oscillator() {
    let (m, w) = (1.3, 0.7);
    let h = parse(&format!("p^2/(2*{m}) + {m}*{w}^2*q^2/2"), &["q", "p"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let v: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
        let s = ExtendedState::bosonic(v[..2].to_vec(), v[2..].to_vec()).unwrap();
        let expect = v[2] * v[1] / m - m * w * w * v[3] * v[0];
        assert!((lift(&h, &s).cal_o.body().re - expect).abs() < 1e-12);
    }
}

#[test]
fn lift_of_landau_momentum() {
    let (e, b, c) = (1.2, 0.8, 2.0);
    let k = e * b / c;
    let vars = ["x", "y", "z", "px", "py", "pz"];
    let o = parse(&format!("py - {k}*x"), &vars).unwrap();
    let phi = vec![0.3, -0.4, 1.0, 0.5, 0.7, -0.2];
    let lam = vec![0.9, -1.1, 0.4, 1.3, 0.2, 0.6];
    let s = ExtendedState::bosonic(phi.clone(), lam.clone()).unwrap();
    let l = lift(&o, &s);
    assert!((l.value - (phi[4] - k * phi[0])).abs() < 1e-15);
    // λ_y → λ_y + (eB/c) λ_{p_x}
    assert!((l.cal_o.body().re - (lam[1] + k * lam[3])).abs() < 1e-14);
    assert!(l.n_o.is_zero() && l.nbar_o.is_zero());
}

#[test]
fn random_polynomial_lift_matches_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 1..=2 {
        for _ in 0..20 {
            let h = random_polynomial(&mut rng, 2 * n, 4, 6);
            let phi: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-1.5..1.5)).collect();
            let lam: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-1.5..1.5)).collect();
            let cm: Vec<Vec<f64>> = (0..2 * n).map(|_| (0..2 * n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let cbm: Vec<Vec<f64>> = (0..2 * n).map(|_| (0..2 * n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let s = ExtendedState::with_ghost_matrices(phi, lam, &cm, &cbm).unwrap();
            let direct = cal_oracle(&h, &s);
            let lifted = lift(&h, &s).cal_o;
            let scale = direct.max_abs().max(1.0);
            assert!(lifted.distance(&direct) / scale < 1e-10, "n = {n}: {}", lifted.distance(&direct));
        }
    }
}

#[test]
fn zero_fibres_give_bare_value() {
    let h = parse("q^3 - 2*q*p + p^4", &["q", "p"]).unwrap();
    let s = ExtendedState::bosonic(vec![0.7, -0.3], vec![0.0, 0.0]).unwrap();
    let l = lift(&h, &s);
    assert!((l.value - h.eval(&[0.7, -0.3])).abs() < 1e-15);
    assert!(l.n_o.is_zero() && l.nbar_o.is_zero() && l.cal_o.is_zero());
}

#[test]
fn superfield_round_trip() {
    let s = ExtendedState::with_unit_ghosts(vec![0.1, 0.2, 0.3, 0.4], vec![-1.0, 2.0, 0.5, 0.25]).unwrap();
    let sf = Superfield::from_state(&s);
    assert_eq!(sf.generator_count(), generator_count(2));
    for a in 0..4 {
        let parts = Superfield::extract(&sf.component(a));
        assert_eq!(parts.body.body().re, s.phi[a]);
        assert_eq!(parts.theta, s.c[a]);
        assert_eq!(parts.thetabar, sf.thetabar_coeff[a]);
        assert_eq!(parts.thetabar_theta, sf.top_coeff[a]);
    }
}

#[test]
fn symplectic_matrix_is_standard() {
    let w = omega_matrix(2);
    let expect = [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ];
    for a in 0..4 {
        assert_eq!(w[a], expect[a]);
    }
}

#[test]
fn out_of_range_generator_is_an_error() {
    assert!(GrassmannElement::generator(G, G).is_err());
    let e = gen(5);
    assert_eq!(e.coefficient(1 << 6), Complex64::new(0.0, 0.0));
    assert!(e.terms().all(|(m, _)| m < (1 << G)));
}

proptest! {
    #[test]
    fn odd_elements_anticommute(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&mut rng, true);
        let b = random_element(&mut rng, true);
        let ab = a.gmul(&b).unwrap();
        let ba = b.gmul(&a).unwrap();
        prop_assert!((&ab + &ba).max_abs() < 1e-14);
        prop_assert!(a.gmul(&a).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&mut rng, false);
        let b = random_element(&mut rng, false);
        let c = random_element(&mut rng, false);
        let left = a.gmul(&b).unwrap().gmul(&c).unwrap();
        let right = a.gmul(&b.gmul(&c).unwrap()).unwrap();
        prop_assert!(left.distance(&right) < 1e-12);
    }

    #[test]
    fn generators_square_to_zero(i in 0usize..G, j in 0usize..G) {
        let (a, b) = (gen(i), gen(j));
        prop_assert_eq!(a.gmul(&b).unwrap(), -&b.gmul(&a).unwrap());
        prop_assert!(a.gmul(&a).unwrap().is_zero());
    }
}
