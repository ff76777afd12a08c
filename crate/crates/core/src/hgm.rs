//! Hypergeometric data, their invariants, Schwarz/Yang parameter maps and
//! the table of the five arithmetic triangle groups.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::charsum::HpNormalization;
use crate::error::{Error, Result};
use crate::field::{MultChar, PrimeField};

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn frac(x: Q) -> Q {
    x - x.floor()
}

pub fn fmt_q(x: Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => s.parse::<i64>().map(Q::from).map_err(|_| bad()),
    }
}

pub fn parse_q_list(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(parse_q).collect()
}

/// A hypergeometric datum {α; β} with b₁ = 1. Entry order matters for the
/// character sum (column pairing); the invariants below are order-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HGDatum {
    alpha: Vec<Q>,
    beta: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalExponents {
    pub at_zero: Vec<Q>,
    pub at_one: Vec<Q>,
    pub at_infinity: Vec<Q>,
    pub gamma: Q,
}

impl HGDatum {
    pub fn new(alpha: Vec<Q>, beta: Vec<Q>) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(Error::InvalidDatum("need n >= 2".into()));
        }
        if alpha.len() != beta.len() {
            return Err(Error::InvalidDatum("alpha and beta differ in length".into()));
        }
        if beta[0] != Q::one() {
            return Err(Error::InvalidDatum("b_1 must be 1".into()));
        }
        Ok(HGDatum { alpha, beta })
    }

    pub fn parse(alpha: &str, beta: &str) -> Result<Self> {
        Self::new(parse_q_list(alpha)?, parse_q_list(beta)?)
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Q] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Q] {
        &self.beta
    }

    /// Least common denominator of α ∪ β.
    pub fn level(&self) -> u64 {
        self.alpha.iter().chain(&self.beta).fold(1i64, |m, x| m.lcm(x.denom())) as u64
    }

    /// α mod ℤ and β mod ℤ are each stable under x ↦ rx for r ∈ (ℤ/M)^×.
    pub fn is_defined_over_q(&self) -> bool {
        let m = self.level() as i64;
        let stable = |v: &[Q]| {
            let mut base: Vec<Q> = v.iter().map(|&x| frac(x)).collect();
            base.sort();
            (1..m).filter(|r| r.gcd(&m) == 1).all(|r| {
                let mut w: Vec<Q> = base.iter().map(|&x| frac(x * r)).collect();
                w.sort();
                w == base
            })
        };
        stable(&self.alpha) && stable(&self.beta)
    }

    /// Stricter reading: the multiset of column pairs (a_i, b_i) mod ℤ is stable.
    pub fn columns_invariant(&self) -> bool {
        let m = self.level() as i64;
        let mut base: Vec<(Q, Q)> = self
            .alpha
            .iter()
            .zip(&self.beta)
            .map(|(&a, &b)| (frac(a), frac(b)))
            .collect();
        base.sort();
        (1..m).filter(|r| r.gcd(&m) == 1).all(|r| {
            let mut w: Vec<(Q, Q)> = base.iter().map(|&(a, b)| (frac(a * r), frac(b * r))).collect();
            w.sort();
            w == base
        })
    }

    /// a_i − b_j ∉ ℤ for all i, j.
    pub fn is_primitive(&self) -> bool {
        self.alpha
            .iter()
            .all(|a| self.beta.iter().all(|b| !(*a - *b).is_integer()))
    }

    pub fn gamma(&self) -> Q {
        let sb: Q = self.beta.iter().sum();
        let sa: Q = self.alpha.iter().sum();
        -Q::one() + sb - sa
    }

    pub fn local_exponents(&self) -> LocalExponents {
        let n = self.n() as i64;
        let mut at_one: Vec<Q> = (0..n - 1).map(Q::from).collect();
        at_one.push(self.gamma());
        LocalExponents {
            at_zero: self.beta.iter().map(|b| Q::one() - b).collect(),
            at_one,
            at_infinity: self.alpha.clone(),
            gamma: self.gamma(),
        }
    }

    /// (ι(a_i)), (ι(b_i)) over 𝔽_p; needs p ≡ 1 mod M.
    pub fn characters(&self, ctx: &PrimeField) -> Result<(Vec<MultChar>, Vec<MultChar>)> {
        let m = self.level();
        if !ctx.order().is_multiple_of(m) {
            return Err(Error::Congruence { p: ctx.p(), modulus: m });
        }
        let a = self
            .alpha
            .iter()
            .map(|&x| ctx.power_residue_char(x))
            .collect::<Result<_>>()?;
        let b = self
            .beta
            .iter()
            .map(|&x| ctx.power_residue_char(x))
            .collect::<Result<_>>()?;
        Ok((a, b))
    }
}

impl fmt::Display for HGDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[Q]| v.iter().map(|&x| fmt_q(x)).collect::<Vec<_>>().join(",");
        write!(f, "{{{};{}}}", j(&self.alpha), j(&self.beta))
    }
}

/// Angle fractions (|1−c|, |c−a−b|, |a−b|) of the Schwarz triangle of ₂F₁(a,b;c).
pub fn schwarz_angles(a: Q, b: Q, c: Q) -> (Q, Q, Q) {
    ((Q::one() - c).abs(), (c - a - b).abs(), (a - b).abs())
}

/// A triangle vertex: an elliptic point of finite order or a cusp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Order(u32),
    Cusp,
}

impl Vertex {
    /// 1/e with 1/∞ = 0.
    pub fn recip(self) -> Q {
        match self {
            Vertex::Order(e) => Q::new(1, e as i64),
            Vertex::Cusp => Q::zero(),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Order(e) => write!(f, "{e}"),
            Vertex::Cusp => write!(f, "oo"),
        }
    }
}

impl FromStr for Vertex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "oo" | "∞" | "inf" => Ok(Vertex::Cusp),
            t => match t.parse::<u32>() {
                Ok(e) if e >= 2 => Ok(Vertex::Order(e)),
                _ => Err(Error::InvalidParameter(format!("bad vertex order {s:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YangParameters {
    pub abc: (Q, Q, Q),
    pub tilde: (Q, Q, Q),
}

/// Parameters of the two ₂F₁ attached to a triangle with vertex orders
/// (e₀, e₁, e_∞) over λ = 0, 1, ∞.
pub fn yang_parameters(e0: Vertex, e1: Vertex, einf: Vertex) -> YangParameters {
    let (r0, r1, ri) = (e0.recip(), e1.recip(), einf.recip());
    let h = Q::new(1, 2);
    let one = Q::one();
    YangParameters {
        abc: (h * (one - r1 - r0 - ri), h * (one - r1 - r0 + ri), one - r0),
        tilde: (h * (one - r1 + r0 - ri), h * (one - r1 + r0 + ri), one + r0),
    }
}

/// A point of ℙ¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LambdaPoint {
    Finite(i64),
    Infinity,
}

impl fmt::Display for LambdaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaPoint::Finite(x) => write!(f, "{x}"),
            LambdaPoint::Infinity => write!(f, "oo"),
        }
    }
}

/// Which branch of the local-trace formula a row uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ARule {
    /// a = φ(1 − 1/λ)·H_p(HD, 1/λ)
    Cuspidal,
    /// a = φ(−3(1 + 3/λ))·p·H_p(HD, −3/λ)
    Elliptic246,
}

/// Argument, quadratic-character factor and extra power of p for one λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalArgument {
    pub t: u64,
    pub phi: i8,
    pub p_power: u32,
}

impl ARule {
    /// None when λ = 0 or the quadratic factor vanishes (a special point).
    pub fn local(self, ctx: &PrimeField, lambda: u64) -> Option<LocalArgument> {
        let inv = ctx.inv(lambda)?;
        let (t, phi_arg, p_power) = match self {
            ARule::Cuspidal => (inv, ctx.sub(1, inv), 0),
            ARule::Elliptic246 => {
                let m3 = ctx.reduce(-3);
                (ctx.mul(m3, inv), ctx.mul(m3, ctx.add(1, ctx.mul(3, inv))), 1)
            }
        };
        let phi = ctx.legendre(phi_arg as i64);
        (phi != 0).then_some(LocalArgument { t, phi, p_power })
    }
}

/// A special point of a row: its λ-value and the vertex sitting over it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecialPoint {
    pub lambda: LambdaPoint,
    pub vertex: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleGroupRow {
    pub signature: [Vertex; 3],
    /// λ-values at the three vertices, in signature order.
    pub lambda_special: [LambdaPoint; 3],
    pub datum: HGDatum,
    pub a_rule: ARule,
    pub normalization: HpNormalization,
}

impl TriangleGroupRow {
    pub fn name(&self) -> String {
        let s: Vec<String> = self.signature.iter().map(|v| v.to_string()).collect();
        format!("({})", s.join(","))
    }

    pub fn level(&self) -> u64 {
        self.datum.level()
    }

    pub fn special_points(&self) -> Vec<SpecialPoint> {
        self.signature
            .iter()
            .zip(&self.lambda_special)
            .map(|(&vertex, &lambda)| SpecialPoint { lambda, vertex })
            .collect()
    }

    pub fn cusps(&self) -> Vec<LambdaPoint> {
        self.special_points()
            .into_iter()
            .filter(|s| s.vertex == Vertex::Cusp)
            .map(|s| s.lambda)
            .collect()
    }

    /// Finite special λ reduced mod p.
    pub fn finite_specials(&self, ctx: &PrimeField) -> Vec<u64> {
        self.lambda_special
            .iter()
            .filter_map(|l| match l {
                LambdaPoint::Finite(x) => Some(ctx.reduce(*x)),
                LambdaPoint::Infinity => None,
            })
            .collect()
    }

    pub fn is_special(&self, ctx: &PrimeField, lambda: u64) -> bool {
        self.finite_specials(ctx).contains(&(lambda % ctx.p()))
    }

    /// λ ∈ 𝔽_p that are not special, ascending.
    pub fn generic_lambdas(&self, ctx: &PrimeField) -> Vec<u64> {
        let sp = self.finite_specials(ctx);
        ctx.elements().filter(|x| !sp.contains(x)).collect()
    }

    /// Look a row up by signature, e.g. "2,4,6" or "2,3,oo".
    pub fn by_signature(sig: &str) -> Result<TriangleGroupRow> {
        let parts: Vec<Vertex> = sig
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(str::parse)
            .collect::<Result<_>>()?;
        triangle_table()
            .into_iter()
            .find(|r| r.signature.as_slice() == parts.as_slice())
            .ok_or_else(|| Error::InvalidParameter(format!("no table row with signature {sig:?}")))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let qs = |v: &[Q]| v.iter().map(|&x| fmt_q(x)).collect::<Vec<_>>();
        serde_json::json!({
            "signature": self.signature.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "lambda_special": self.lambda_special.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "alpha": qs(self.datum.alpha()),
            "beta": qs(self.datum.beta()),
            "level": self.level(),
            "a_rule": self.a_rule,
            "normalization": self.normalization,
        })
    }
}

/// The five rows (2,∞,∞), (2,3,∞), (2,4,∞), (2,6,∞), (2,4,6).
pub fn triangle_table() -> Vec<TriangleGroupRow> {
    use LambdaPoint::{Finite, Infinity};
    use Vertex::{Cusp, Order};
    let half = q(1, 2);
    let one = Q::one();
    let cusp_norm = HpNormalization { sign: 1, weight: 0 };
    let row = |signature, lambda_special, alpha: Vec<Q>, beta: Vec<Q>, a_rule, normalization| TriangleGroupRow {
        signature,
        lambda_special,
        datum: HGDatum::new(alpha, beta).expect("table data"),
        a_rule,
        normalization,
    };
    vec![
        row(
            [Order(2), Cusp, Cusp],
            [Finite(1), Finite(0), Infinity],
            vec![half, half, half],
            vec![one; 3],
            ARule::Cuspidal,
            cusp_norm,
        ),
        row(
            [Order(2), Order(3), Cusp],
            [Finite(1), Infinity, Finite(0)],
            vec![half, q(1, 6), q(5, 6)],
            vec![one; 3],
            ARule::Cuspidal,
            cusp_norm,
        ),
        row(
            [Order(2), Order(4), Cusp],
            [Finite(1), Infinity, Finite(0)],
            vec![half, q(1, 4), q(3, 4)],
            vec![one; 3],
            ARule::Cuspidal,
            cusp_norm,
        ),
        row(
            [Order(2), Order(6), Cusp],
            [Finite(1), Infinity, Finite(0)],
            vec![half, q(1, 3), q(2, 3)],
            vec![one; 3],
            ARule::Cuspidal,
            cusp_norm,
        ),
        row(
            [Order(2), Order(4), Order(6)],
            [Finite(-3), Infinity, Finite(0)],
            vec![half, q(1, 4), q(3, 4)],
            vec![one, q(5, 6), q(7, 6)],
            ARule::Elliptic246,
            HpNormalization { sign: 1, weight: 1 },
        ),
    ]
}
