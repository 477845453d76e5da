use super::{pow_real, Expr, Node};

#[derive(Clone, Copy, Debug)]
enum Op {
    Const(f64),
    Var(usize),
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow(f64),
    Sin,
    Cos,
    Exp,
    Sqrt,
}

/// Postfix form of an expression for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct Compiled {
    ops: Vec<Op>,
    depth: usize,
}

impl Compiled {
    pub fn new(e: &Expr) -> Self {
        let mut ops = Vec::new();
        emit(e, &mut ops);
        let mut depth = 0usize;
        let mut max = 0usize;
        for op in &ops {
            match op {
                Op::Const(_) | Op::Var(_) => depth += 1,
                Op::Add | Op::Sub | Op::Mul | Op::Div => depth -= 1,
                _ => {}
            }
            max = max.max(depth);
        }
        Compiled { ops, depth: max }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut stack = Vec::with_capacity(self.depth);
        self.eval_with(x, &mut stack)
    }

    pub fn eval_with(&self, x: &[f64], stack: &mut Vec<f64>) -> f64 {
        stack.clear();
        for op in &self.ops {
            match *op {
                Op::Const(c) => stack.push(c),
                Op::Var(i) => stack.push(x[i]),
                Op::Add | Op::Sub | Op::Mul | Op::Div => {
                    let b = stack.pop().unwrap();
                    let a = stack.last_mut().unwrap();
                    match *op {
                        Op::Add => *a += b,
                        Op::Sub => *a -= b,
                        Op::Mul => *a *= b,
                        _ => *a /= b,
                    }
                }
                _ => {
                    let a = stack.last_mut().unwrap();
                    *a = match *op {
                        Op::Neg => -*a,
                        Op::Pow(p) => pow_real(*a, p),
                        Op::Sin => a.sin(),
                        Op::Cos => a.cos(),
                        Op::Exp => a.exp(),
                        _ => a.sqrt(),
                    };
                }
            }
        }
        stack[0]
    }
}

fn emit(e: &Expr, ops: &mut Vec<Op>) {
    match e.node() {
        Node::Const(c) => ops.push(Op::Const(*c)),
        Node::Var(i) => ops.push(Op::Var(*i)),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
            emit(a, ops);
            emit(b, ops);
            ops.push(match e.node() {
                Node::Add(..) => Op::Add,
                Node::Sub(..) => Op::Sub,
                Node::Mul(..) => Op::Mul,
                _ => Op::Div,
            });
        }
        Node::Neg(a) => {
            emit(a, ops);
            ops.push(Op::Neg)
        }
        Node::Pow(a, p) => {
            emit(a, ops);
            ops.push(Op::Pow(*p))
        }
        Node::Sin(a) => {
            emit(a, ops);
            ops.push(Op::Sin)
        }
        Node::Cos(a) => {
            emit(a, ops);
            ops.push(Op::Cos)
        }
        Node::Exp(a) => {
            emit(a, ops);
            ops.push(Op::Exp)
        }
        Node::Sqrt(a) => {
            emit(a, ops);
            ops.push(Op::Sqrt)
        }
    }
}
