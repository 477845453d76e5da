use super::{pow_real, Expr, Node};

/// Value and partial derivatives up to third order at a point.
///
/// `hess` and `third` are stored flat, row-major. Entries above the
/// requested order are left empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet3 {
    pub value: f64,
    pub grad: Vec<f64>,
    pub hess: Vec<f64>,
    pub third: Vec<f64>,
    dim: usize,
    order: u8,
}

impl Jet3 {
    pub fn constant(dim: usize, order: u8, v: f64) -> Self {
        Jet3 {
            value: v,
            grad: if order >= 1 { vec![0.0; dim] } else { Vec::new() },
            hess: if order >= 2 { vec![0.0; dim * dim] } else { Vec::new() },
            third: if order >= 3 { vec![0.0; dim * dim * dim] } else { Vec::new() },
            dim,
            order,
        }
    }

    pub fn variable(dim: usize, order: u8, i: usize, v: f64) -> Self {
        let mut j = Jet3::constant(dim, order, v);
        if order >= 1 {
            j.grad[i] = 1.0;
        }
        j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn hess_at(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.dim + j]
    }

    pub fn third_at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.third[(i * self.dim + j) * self.dim + k]
    }

    fn zip(&self, o: &Jet3, f: impl Fn(f64, f64) -> f64) -> Jet3 {
        Jet3 {
            value: f(self.value, o.value),
            grad: self.grad.iter().zip(&o.grad).map(|(a, b)| f(*a, *b)).collect(),
            hess: self.hess.iter().zip(&o.hess).map(|(a, b)| f(*a, *b)).collect(),
            third: self.third.iter().zip(&o.third).map(|(a, b)| f(*a, *b)).collect(),
            dim: self.dim,
            order: self.order,
        }
    }

    pub fn add(&self, o: &Jet3) -> Jet3 {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Jet3) -> Jet3 {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Jet3 {
        self.zip(self, |a, _| a * s)
    }

    pub fn mul(&self, o: &Jet3) -> Jet3 {
        let d = self.dim;
        let (a, b) = (self.value, o.value);
        let mut r = Jet3::constant(d, self.order, a * b);
        if self.order >= 1 {
            for i in 0..d {
                r.grad[i] = a * o.grad[i] + b * self.grad[i];
            }
        }
        if self.order >= 2 {
            for i in 0..d {
                for j in 0..d {
                    r.hess[i * d + j] = a * o.hess[i * d + j]
                        + b * self.hess[i * d + j]
                        + self.grad[i] * o.grad[j]
                        + self.grad[j] * o.grad[i];
                }
            }
        }
        if self.order >= 3 {
            let (ga, gb, ha, hb) = (&self.grad, &o.grad, &self.hess, &o.hess);
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let idx = (i * d + j) * d + k;
                        r.third[idx] = a * o.third[idx]
                            + b * self.third[idx]
                            + ga[i] * hb[j * d + k]
                            + ga[j] * hb[i * d + k]
                            + ga[k] * hb[i * d + j]
                            + gb[i] * ha[j * d + k]
                            + gb[j] * ha[i * d + k]
                            + gb[k] * ha[i * d + j];
                    }
                }
            }
        }
        r
    }

    /// Compose with a scalar function given its derivatives f0..f3 at the value.
    pub fn chain(&self, f: [f64; 4]) -> Jet3 {
        let d = self.dim;
        let mut r = Jet3::constant(d, self.order, f[0]);
        let g = &self.grad;
        if self.order >= 1 {
            for i in 0..d {
                r.grad[i] = f[1] * g[i];
            }
        }
        if self.order >= 2 {
            for i in 0..d {
                for j in 0..d {
                    r.hess[i * d + j] = f[1] * self.hess[i * d + j] + f[2] * g[i] * g[j];
                }
            }
        }
        if self.order >= 3 {
            let h = &self.hess;
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let idx = (i * d + j) * d + k;
                        r.third[idx] = f[1] * self.third[idx]
                            + f[2] * (g[i] * h[j * d + k] + g[j] * h[i * d + k] + g[k] * h[i * d + j])
                            + f[3] * g[i] * g[j] * g[k];
                    }
                }
            }
        }
        r
    }
}

pub(super) fn eval_jet(e: &Expr, x: &[f64], order: u8) -> Jet3 {
    let d = x.len();
    match e.node() {
        Node::Const(c) => Jet3::constant(d, order, *c),
        Node::Var(i) => Jet3::variable(d, order, *i, x[*i]),
        Node::Add(a, b) => eval_jet(a, x, order).add(&eval_jet(b, x, order)),
        Node::Sub(a, b) => eval_jet(a, x, order).sub(&eval_jet(b, x, order)),
        Node::Mul(a, b) => {
            if let Some(c) = a.as_const() {
                return eval_jet(b, x, order).scale(c);
            }
            if let Some(c) = b.as_const() {
                return eval_jet(a, x, order).scale(c);
            }
            eval_jet(a, x, order).mul(&eval_jet(b, x, order))
        }
        Node::Div(a, b) => {
            let jb = eval_jet(b, x, order);
            let v = jb.value;
            let recip = jb.chain([1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v)]);
            match a.as_const() {
                Some(c) => recip.scale(c),
                None => eval_jet(a, x, order).mul(&recip),
            }
        }
        Node::Neg(a) => eval_jet(a, x, order).scale(-1.0),
        Node::Pow(a, p) => {
            let ja = eval_jet(a, x, order);
            let u = ja.value;
            let p = *p;
            let f = [
                pow_real(u, p),
                p * pow_real(u, p - 1.0),
                p * (p - 1.0) * pow_real(u, p - 2.0),
                p * (p - 1.0) * (p - 2.0) * pow_real(u, p - 3.0),
            ];
            ja.chain(f)
        }
        Node::Sin(a) => {
            let ja = eval_jet(a, x, order);
            let (s, c) = ja.value.sin_cos();
            ja.chain([s, c, -s, -c])
        }
        Node::Cos(a) => {
            let ja = eval_jet(a, x, order);
            let (s, c) = ja.value.sin_cos();
            ja.chain([c, -s, -c, s])
        }
        Node::Exp(a) => {
            let ja = eval_jet(a, x, order);
            let v = ja.value.exp();
            ja.chain([v, v, v, v])
        }
        Node::Sqrt(a) => {
            let ja = eval_jet(a, x, order);
            let s = ja.value.sqrt();
            let u = ja.value;
            ja.chain([s, 0.5 / s, -0.25 / (s * u), 0.375 / (s * u * u)])
        }
    }
}
