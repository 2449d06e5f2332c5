//! Expression trees for smooth maps.
//!
//! A map body is a closed expression over a fixed set of infinitely
//! differentiable primitives. Keeping maps as data (rather than opaque
//! closures) is what lets the tangent lift return a map that can itself
//! be evaluated and differentiated again.

use crate::error::{Error, Result};
use crate::vecspace::{Matrix, Vector};

use super::SmoothMap;

/// Body of a smooth map. Output dimensions are derived from the input
/// dimension via [`Expr::out_dim`] and fixed at `SmoothMap` construction.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Constant vector, ignores the input.
    Const(Vector),
    /// Coordinate selection: output `k` is input coordinate `indices[k]`.
    Proj(Vec<usize>),
    /// Matrix applied to a subexpression.
    Linear(Matrix, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    /// Scalar constant times a subexpression.
    Scale(f64, Box<Expr>),
    /// Pointwise product; if one side is scalar it broadcasts.
    Mul(Box<Expr>, Box<Expr>),
    /// Concatenation of the outputs.
    Pair(Vec<Expr>),
    /// `Compose(outer, inner)` evaluates `outer` on `inner`'s output.
    Compose(Box<Expr>, Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    /// Componentwise reciprocal; singular where a component vanishes.
    Recip(Box<Expr>),
    /// Euclidean norm of the subexpression, scalar output.
    Norm(Box<Expr>),
    /// Componentwise integer power (negative exponents allowed away
    /// from zero).
    Pow(Box<Expr>, i32),
    /// Tangent lift of a whole map: `(u, e) -> (f(u), Df(u)·e)`.
    Lift(Box<SmoothMap>),
}

impl Expr {
    /// Output dimension for a given input dimension, validating every
    /// node along the way.
    pub fn out_dim(&self, in_dim: usize) -> Result<usize> {
        match self {
            Expr::Const(v) => Ok(v.dim()),
            Expr::Proj(indices) => {
                if indices.is_empty() {
                    return Err(Error::contract("projection needs at least one index"));
                }
                if let Some(&bad) = indices.iter().find(|&&i| i >= in_dim) {
                    return Err(Error::contract(format!(
                        "coordinate x{bad} out of range for input dimension {in_dim}"
                    )));
                }
                Ok(indices.len())
            }
            Expr::Linear(m, c) => {
                let cd = c.out_dim(in_dim)?;
                if m.cols() != cd {
                    return Err(Error::contract(format!(
                        "matrix with {} columns applied to dimension {cd}",
                        m.cols()
                    )));
                }
                Ok(m.rows())
            }
            Expr::Add(a, b) => {
                let da = a.out_dim(in_dim)?;
                let db = b.out_dim(in_dim)?;
                if da != db {
                    return Err(Error::contract(format!(
                        "addition of dimensions {da} and {db}"
                    )));
                }
                Ok(da)
            }
            Expr::Scale(_, c) => c.out_dim(in_dim),
            Expr::Mul(a, b) => {
                let da = a.out_dim(in_dim)?;
                let db = b.out_dim(in_dim)?;
                if da == db {
                    Ok(da)
                } else if da == 1 {
                    Ok(db)
                } else if db == 1 {
                    Ok(da)
                } else {
                    Err(Error::contract(format!(
                        "product of incompatible dimensions {da} and {db}"
                    )))
                }
            }
            Expr::Pair(parts) => {
                if parts.is_empty() {
                    return Err(Error::contract("pairing needs at least one component"));
                }
                let mut total = 0;
                for p in parts {
                    total += p.out_dim(in_dim)?;
                }
                Ok(total)
            }
            Expr::Compose(outer, inner) => outer.out_dim(inner.out_dim(in_dim)?),
            Expr::Sin(c) | Expr::Cos(c) | Expr::Exp(c) | Expr::Recip(c) => c.out_dim(in_dim),
            Expr::Norm(c) => {
                c.out_dim(in_dim)?;
                Ok(1)
            }
            Expr::Pow(c, _) => c.out_dim(in_dim),
            Expr::Lift(m) => {
                if in_dim != 2 * m.domain_dim() {
                    return Err(Error::contract(format!(
                        "tangent lift of a map on dimension {} expects input dimension {}",
                        m.domain_dim(),
                        2 * m.domain_dim()
                    )));
                }
                Ok(2 * m.codomain_dim())
            }
        }
    }

    // Builder helpers. These consume their arguments, which keeps
    // call sites for assembled fields readable.

    pub fn constant(v: Vector) -> Expr {
        Expr::Const(v)
    }

    pub fn scalar(c: f64) -> Expr {
        Expr::Const(Vector::from(vec![c]))
    }

    pub fn coord(i: usize) -> Expr {
        Expr::Proj(vec![i])
    }

    /// Coordinates `start .. start + len`.
    pub fn window(start: usize, len: usize) -> Expr {
        Expr::Proj((start..start + len).collect())
    }

    pub fn linear(m: Matrix, inner: Expr) -> Expr {
        Expr::Linear(m, Box::new(inner))
    }

    pub fn add(self, other: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(other))
    }

    pub fn sub(self, other: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(Expr::Scale(-1.0, Box::new(other))))
    }

    pub fn scale(self, c: f64) -> Expr {
        Expr::Scale(c, Box::new(self))
    }

    pub fn neg(self) -> Expr {
        self.scale(-1.0)
    }

    pub fn mul(self, other: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(other))
    }

    pub fn pair(parts: Vec<Expr>) -> Expr {
        Expr::Pair(parts)
    }

    pub fn then(self, outer: Expr) -> Expr {
        Expr::Compose(Box::new(outer), Box::new(self))
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn recip(self) -> Expr {
        Expr::Recip(Box::new(self))
    }

    pub fn norm(self) -> Expr {
        Expr::Norm(Box::new(self))
    }

    pub fn pow(self, k: i32) -> Expr {
        Expr::Pow(Box::new(self), k)
    }
}

/// One open-region constraint: `expr(x) > min`, with `expr` scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct GuardClause {
    pub expr: Expr,
    pub min: f64,
}

/// Conjunction of open constraints carving the domain out of R^n.
/// An empty guard admits everything.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Guard {
    pub clauses: Vec<GuardClause>,
}

impl Guard {
    pub fn none() -> Guard {
        Guard::default()
    }

    /// `‖(x_i)_{i in indices}‖ > threshold`.
    pub fn norm_above(indices: Vec<usize>, threshold: f64) -> Guard {
        Guard {
            clauses: vec![GuardClause {
                expr: Expr::Proj(indices).norm(),
                min: threshold,
            }],
        }
    }

    /// `|x_i| > threshold` for every listed coordinate.
    pub fn abs_above(indices: &[usize], threshold: f64) -> Guard {
        Guard {
            clauses: indices
                .iter()
                .map(|&i| GuardClause {
                    expr: Expr::coord(i).norm(),
                    min: threshold,
                })
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn and(mut self, other: Guard) -> Guard {
        self.clauses.extend(other.clauses);
        self
    }

    /// Precompose every clause with `inner`, yielding the preimage guard.
    pub fn pulled_back(&self, inner: &Expr) -> Guard {
        Guard {
            clauses: self
                .clauses
                .iter()
                .map(|c| GuardClause {
                    expr: Expr::Compose(Box::new(c.expr.clone()), Box::new(inner.clone())),
                    min: c.min,
                })
                .collect(),
        }
    }

    pub(crate) fn validate(&self, in_dim: usize) -> Result<()> {
        for clause in &self.clauses {
            let d = clause.expr.out_dim(in_dim)?;
            if d != 1 {
                return Err(Error::contract(format!(
                    "guard clause must be scalar, got dimension {d}"
                )));
            }
        }
        Ok(())
    }

    /// Check all clauses at `x`; a non-finite clause value counts as a
    /// violation.
    pub fn check(&self, x: &[f64]) -> Result<()> {
        for clause in &self.clauses {
            let v = super::jet::eval0(&clause.expr, x)?;
            let val = v[0];
            if !(val > clause.min) {
                return Err(Error::domain(format!(
                    "guard violated: clause value {val} not above {} at {x:?}",
                    clause.min
                )));
            }
        }
        Ok(())
    }
}
