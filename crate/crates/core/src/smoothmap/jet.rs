//! Forward propagation of truncated jets through expression trees.
//!
//! Three passes over the same tree:
//!  * `eval0` — plain values,
//!  * `eval1` — value plus one directional derivative (dual numbers),
//!  * `eval2` — value, two directional derivatives, and the mixed
//!    second-order channel.
//!
//! The `eval2` cross channel is seeded: propagating from the expansion
//! `x(s, t) = u + s·a + t·b + s·t·c` yields exactly
//! `d12 = D²f(u)·(a, b) + Df(u)·c`, which is the fiber formula of the
//! second tangent map. There is no symbolic rewriting anywhere; the
//! arithmetic below is the differentiation engine.

use crate::error::{Error, Result};

use super::expr::Expr;

/// First-order jet: value and one directional derivative.
#[derive(Debug, Clone)]
pub(crate) struct Jet1 {
    pub v: Vec<f64>,
    pub d: Vec<f64>,
}

/// Second-order jet with a seeded cross term.
#[derive(Debug, Clone)]
pub(crate) struct Jet2 {
    pub v: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub d12: Vec<f64>,
}

pub(crate) fn eval0(expr: &Expr, x: &[f64]) -> Result<Vec<f64>> {
    Ok(match expr {
        Expr::Const(c) => c.coords().to_vec(),
        Expr::Proj(idx) => idx.iter().map(|&i| x[i]).collect(),
        Expr::Linear(m, inner) => {
            let v = eval0(inner, x)?;
            mat_apply(m, &v)
        }
        Expr::Add(a, b) => zip_add(&eval0(a, x)?, &eval0(b, x)?),
        Expr::Scale(c, inner) => eval0(inner, x)?.iter().map(|v| c * v).collect(),
        Expr::Mul(a, b) => {
            let (va, vb) = (eval0(a, x)?, eval0(b, x)?);
            broadcast2(&va, &vb, |a, b| a * b)
        }
        Expr::Pair(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.extend(eval0(p, x)?);
            }
            out
        }
        Expr::Compose(outer, inner) => {
            let mid = eval0(inner, x)?;
            eval0(outer, &mid)?
        }
        Expr::Sin(inner) => eval0(inner, x)?.iter().map(|v| v.sin()).collect(),
        Expr::Cos(inner) => eval0(inner, x)?.iter().map(|v| v.cos()).collect(),
        Expr::Exp(inner) => eval0(inner, x)?.iter().map(|v| v.exp()).collect(),
        Expr::Recip(inner) => eval0(inner, x)?.iter().map(|v| 1.0 / v).collect(),
        Expr::Norm(inner) => {
            let v = eval0(inner, x)?;
            vec![v.iter().map(|a| a * a).sum::<f64>().sqrt()]
        }
        Expr::Pow(inner, k) => eval0(inner, x)?.iter().map(|v| v.powi(*k)).collect(),
        Expr::Lift(map) => {
            let n = map.domain_dim();
            let (u, e) = x.split_at(n);
            map.guard().check(u)?;
            let jet = eval1(map.body(), u, e)?;
            let mut out = jet.v;
            out.extend(jet.d);
            out
        }
    })
}

pub(crate) fn eval1(expr: &Expr, x: &[f64], dx: &[f64]) -> Result<Jet1> {
    Ok(match expr {
        Expr::Const(c) => Jet1 {
            v: c.coords().to_vec(),
            d: vec![0.0; c.dim()],
        },
        Expr::Proj(idx) => Jet1 {
            v: idx.iter().map(|&i| x[i]).collect(),
            d: idx.iter().map(|&i| dx[i]).collect(),
        },
        Expr::Linear(m, inner) => {
            let j = eval1(inner, x, dx)?;
            Jet1 {
                v: mat_apply(m, &j.v),
                d: mat_apply(m, &j.d),
            }
        }
        Expr::Add(a, b) => {
            let (ja, jb) = (eval1(a, x, dx)?, eval1(b, x, dx)?);
            Jet1 {
                v: zip_add(&ja.v, &jb.v),
                d: zip_add(&ja.d, &jb.d),
            }
        }
        Expr::Scale(c, inner) => {
            let j = eval1(inner, x, dx)?;
            Jet1 {
                v: j.v.iter().map(|v| c * v).collect(),
                d: j.d.iter().map(|v| c * v).collect(),
            }
        }
        Expr::Mul(a, b) => {
            let (ja, jb) = (eval1(a, x, dx)?, eval1(b, x, dx)?);
            Jet1 {
                v: broadcast2(&ja.v, &jb.v, |a, b| a * b),
                d: broadcast4(&ja.v, &ja.d, &jb.v, &jb.d, |a, da, b, db| a * db + da * b),
            }
        }
        Expr::Pair(parts) => {
            let mut v = Vec::new();
            let mut d = Vec::new();
            for p in parts {
                let j = eval1(p, x, dx)?;
                v.extend(j.v);
                d.extend(j.d);
            }
            Jet1 { v, d }
        }
        Expr::Compose(outer, inner) => {
            let j = eval1(inner, x, dx)?;
            eval1(outer, &j.v, &j.d)?
        }
        Expr::Sin(inner) => {
            let j = eval1(inner, x, dx)?;
            Jet1 {
                v: j.v.iter().map(|v| v.sin()).collect(),
                d: j.v.iter().zip(&j.d).map(|(v, d)| v.cos() * d).collect(),
            }
        }
        Expr::Cos(inner) => {
            let j = eval1(inner, x, dx)?;
            Jet1 {
                v: j.v.iter().map(|v| v.cos()).collect(),
                d: j.v.iter().zip(&j.d).map(|(v, d)| -v.sin() * d).collect(),
            }
        }
        Expr::Exp(inner) => {
            let j = eval1(inner, x, dx)?;
            let val: Vec<f64> = j.v.iter().map(|v| v.exp()).collect();
            Jet1 {
                d: val.iter().zip(&j.d).map(|(e, d)| e * d).collect(),
                v: val,
            }
        }
        Expr::Recip(inner) => {
            let j = eval1(inner, x, dx)?;
            let val: Vec<f64> = j.v.iter().map(|v| 1.0 / v).collect();
            Jet1 {
                d: val
                    .iter()
                    .zip(&j.d)
                    .map(|(r, d)| -r * r * d)
                    .collect(),
                v: val,
            }
        }
        Expr::Norm(inner) => {
            let j = eval1(inner, x, dx)?;
            let n = j.v.iter().map(|a| a * a).sum::<f64>().sqrt();
            let xd: f64 = j.v.iter().zip(&j.d).map(|(a, b)| a * b).sum();
            Jet1 {
                v: vec![n],
                d: vec![xd / n],
            }
        }
        Expr::Pow(inner, k) => {
            let j = eval1(inner, x, dx)?;
            let k = *k;
            Jet1 {
                v: j.v.iter().map(|v| v.powi(k)).collect(),
                d: j.v
                    .iter()
                    .zip(&j.d)
                    .map(|(v, d)| {
                        if k == 0 {
                            0.0
                        } else {
                            f64::from(k) * v.powi(k - 1) * d
                        }
                    })
                    .collect(),
            }
        }
        Expr::Lift(map) => {
            let n = map.domain_dim();
            let (u, e) = x.split_at(n);
            let (du, de) = dx.split_at(n);
            map.guard().check(u)?;
            // Differentiating (u, e) -> (f(u), Df(u)·e) along (du, de)
            // needs the mixed channel D²f(u)·(e, du) + Df(u)·de, which is
            // one seeded second-order pass over f.
            let j2 = eval2(map.body(), u, e, du, de)?;
            let mut v = j2.v;
            v.extend(j2.d1);
            let mut d = j2.d2;
            d.extend(j2.d12);
            Jet1 { v, d }
        }
    })
}

pub(crate) fn eval2(expr: &Expr, x: &[f64], a: &[f64], b: &[f64], c: &[f64]) -> Result<Jet2> {
    Ok(match expr {
        Expr::Const(cst) => {
            let z = vec![0.0; cst.dim()];
            Jet2 {
                v: cst.coords().to_vec(),
                d1: z.clone(),
                d2: z.clone(),
                d12: z,
            }
        }
        Expr::Proj(idx) => Jet2 {
            v: idx.iter().map(|&i| x[i]).collect(),
            d1: idx.iter().map(|&i| a[i]).collect(),
            d2: idx.iter().map(|&i| b[i]).collect(),
            d12: idx.iter().map(|&i| c[i]).collect(),
        },
        Expr::Linear(m, inner) => {
            let j = eval2(inner, x, a, b, c)?;
            Jet2 {
                v: mat_apply(m, &j.v),
                d1: mat_apply(m, &j.d1),
                d2: mat_apply(m, &j.d2),
                d12: mat_apply(m, &j.d12),
            }
        }
        Expr::Add(p, q) => {
            let (jp, jq) = (eval2(p, x, a, b, c)?, eval2(q, x, a, b, c)?);
            Jet2 {
                v: zip_add(&jp.v, &jq.v),
                d1: zip_add(&jp.d1, &jq.d1),
                d2: zip_add(&jp.d2, &jq.d2),
                d12: zip_add(&jp.d12, &jq.d12),
            }
        }
        Expr::Scale(s, inner) => {
            let j = eval2(inner, x, a, b, c)?;
            let sc = |v: &[f64]| v.iter().map(|t| s * t).collect::<Vec<_>>();
            Jet2 {
                v: sc(&j.v),
                d1: sc(&j.d1),
                d2: sc(&j.d2),
                d12: sc(&j.d12),
            }
        }
        Expr::Mul(p, q) => {
            let (jp, jq) = (eval2(p, x, a, b, c)?, eval2(q, x, a, b, c)?);
            let get = |v: &[f64], i: usize| if v.len() == 1 { v[0] } else { v[i] };
            let n = jp.v.len().max(jq.v.len());
            let mut out = Jet2 {
                v: vec![0.0; n],
                d1: vec![0.0; n],
                d2: vec![0.0; n],
                d12: vec![0.0; n],
            };
            for i in 0..n {
                let (pv, p1, p2, p12) = (
                    get(&jp.v, i),
                    get(&jp.d1, i),
                    get(&jp.d2, i),
                    get(&jp.d12, i),
                );
                let (qv, q1, q2, q12) = (
                    get(&jq.v, i),
                    get(&jq.d1, i),
                    get(&jq.d2, i),
                    get(&jq.d12, i),
                );
                out.v[i] = pv * qv;
                out.d1[i] = pv * q1 + p1 * qv;
                out.d2[i] = pv * q2 + p2 * qv;
                out.d12[i] = pv * q12 + p1 * q2 + p2 * q1 + p12 * qv;
            }
            out
        }
        Expr::Pair(parts) => {
            let mut out = Jet2 {
                v: Vec::new(),
                d1: Vec::new(),
                d2: Vec::new(),
                d12: Vec::new(),
            };
            for p in parts {
                let j = eval2(p, x, a, b, c)?;
                out.v.extend(j.v);
                out.d1.extend(j.d1);
                out.d2.extend(j.d2);
                out.d12.extend(j.d12);
            }
            out
        }
        Expr::Compose(outer, inner) => {
            let j = eval2(inner, x, a, b, c)?;
            eval2(outer, &j.v, &j.d1, &j.d2, &j.d12)?
        }
        Expr::Sin(inner) => {
            let j = eval2(inner, x, a, b, c)?;
            let mut out = j.clone();
            for i in 0..j.v.len() {
                let (s, co) = j.v[i].sin_cos();
                out.v[i] = s;
                out.d1[i] = co * j.d1[i];
                out.d2[i] = co * j.d2[i];
                out.d12[i] = co * j.d12[i] - s * j.d1[i] * j.d2[i];
            }
            out
        }
        Expr::Cos(inner) => {
            let j = eval2(inner, x, a, b, c)?;
            let mut out = j.clone();
            for i in 0..j.v.len() {
                let (s, co) = j.v[i].sin_cos();
                out.v[i] = co;
                out.d1[i] = -s * j.d1[i];
                out.d2[i] = -s * j.d2[i];
                out.d12[i] = -s * j.d12[i] - co * j.d1[i] * j.d2[i];
            }
            out
        }
        Expr::Exp(inner) => {
            let j = eval2(inner, x, a, b, c)?;
            let mut out = j.clone();
            for i in 0..j.v.len() {
                let e = j.v[i].exp();
                out.v[i] = e;
                out.d1[i] = e * j.d1[i];
                out.d2[i] = e * j.d2[i];
                out.d12[i] = e * (j.d12[i] + j.d1[i] * j.d2[i]);
            }
            out
        }
        Expr::Recip(inner) => {
            let j = eval2(inner, x, a, b, c)?;
            let mut out = j.clone();
            for i in 0..j.v.len() {
                let r = 1.0 / j.v[i];
                out.v[i] = r;
                out.d1[i] = -r * r * j.d1[i];
                out.d2[i] = -r * r * j.d2[i];
                out.d12[i] = -r * r * j.d12[i] + 2.0 * r * r * r * j.d1[i] * j.d2[i];
            }
            out
        }
        Expr::Norm(inner) => {
            let j = eval2(inner, x, a, b, c)?;
            let n = j.v.iter().map(|t| t * t).sum::<f64>().sqrt();
            let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(s, t)| s * t).sum::<f64>();
            let x1 = dot(&j.v, &j.d1);
            let x2 = dot(&j.v, &j.d2);
            let cross = dot(&j.d1, &j.d2) + dot(&j.v, &j.d12);
            Jet2 {
                v: vec![n],
                d1: vec![x1 / n],
                d2: vec![x2 / n],
                d12: vec![cross / n - x1 * x2 / (n * n * n)],
            }
        }
        Expr::Pow(inner, k) => {
            let j = eval2(inner, x, a, b, c)?;
            let k = *k;
            let mut out = j.clone();
            for i in 0..j.v.len() {
                let v = j.v[i];
                out.v[i] = v.powi(k);
                if k == 0 {
                    out.d1[i] = 0.0;
                    out.d2[i] = 0.0;
                    out.d12[i] = 0.0;
                } else {
                    let kf = f64::from(k);
                    let p1 = v.powi(k - 1);
                    out.d1[i] = kf * p1 * j.d1[i];
                    out.d2[i] = kf * p1 * j.d2[i];
                    let curvature = if k == 1 {
                        0.0
                    } else {
                        kf * f64::from(k - 1) * v.powi(k - 2) * j.d1[i] * j.d2[i]
                    };
                    out.d12[i] = kf * p1 * j.d12[i] + curvature;
                }
            }
            out
        }
        Expr::Lift(_) => {
            // Would need third-order jets of the lifted map; the library
            // caps differentiation order at two.
            return Err(Error::domain(
                "second differential of a tangent-lifted map is not supported \
                 (differentiation order above 2)",
            ));
        }
    })
}

fn mat_apply(m: &crate::vecspace::Matrix, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.rows()];
    for i in 0..m.rows() {
        let mut s = 0.0;
        for j in 0..m.cols() {
            s += m.get(i, j) * v[j];
        }
        out[i] = s;
    }
    out
}

fn zip_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Pointwise combine with scalar broadcast on either side.
fn broadcast2(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    if a.len() == b.len() {
        a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect()
    } else if a.len() == 1 {
        b.iter().map(|y| f(a[0], *y)).collect()
    } else {
        a.iter().map(|x| f(*x, b[0])).collect()
    }
}

fn broadcast4(
    av: &[f64],
    ad: &[f64],
    bv: &[f64],
    bd: &[f64],
    f: impl Fn(f64, f64, f64, f64) -> f64,
) -> Vec<f64> {
    let n = av.len().max(bv.len());
    let get = |v: &[f64], i: usize| if v.len() == 1 { v[0] } else { v[i] };
    (0..n)
        .map(|i| f(get(av, i), get(ad, i), get(bv, i), get(bd, i)))
        .collect()
}
