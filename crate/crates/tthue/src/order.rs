//! Exact arithmetic in the cubic order `Z[λ0]`.
//!
//! Elements are integer coordinate triples over the power basis
//! `(1, λ0, λ0^2)`, reduced by `λ0^3 = 1 + (n+2)λ0 + (n-1)λ0^2`. The Galois
//! action is cyclic, `σ: λ0 -> λ1 -> λ2 -> λ0`, realized by substituting the
//! exact coordinates `λ1 = λ0^2 - n λ0 - 2`. Norms, traces, and inverses all
//! come from the regular representation, so every result here is exact; the
//! only interval-valued operation is embedding an element at a root enclosure.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::enclosure::RealEnclosure;
use crate::{Error, Result};

/// An element `c0 + c1 λ0 + c2 λ0^2` of `Z[λ0]` for a fixed `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderElement {
    n: i64,
    c: [BigInt; 3],
}

impl OrderElement {
    pub fn new(n: i64, c: [BigInt; 3]) -> Self {
        OrderElement { n, c }
    }

    /// Convenience constructor from machine-integer coordinates.
    pub fn from_coords(n: i64, c0: i64, c1: i64, c2: i64) -> Self {
        OrderElement::new(n, [BigInt::from(c0), BigInt::from(c1), BigInt::from(c2)])
    }

    pub fn zero(n: i64) -> Self {
        OrderElement::from_coords(n, 0, 0, 0)
    }

    pub fn one(n: i64) -> Self {
        OrderElement::from_coords(n, 1, 0, 0)
    }

    pub fn from_int(n: i64, v: &BigInt) -> Self {
        OrderElement::new(n, [v.clone(), BigInt::zero(), BigInt::zero()])
    }

    /// The generator `λ0`.
    pub fn lambda0(n: i64) -> Self {
        OrderElement::from_coords(n, 0, 1, 0)
    }

    /// The conjugate `λ1 = λ0^2 - n λ0 - 2`, exactly.
    pub fn lambda1(n: i64) -> Self {
        OrderElement::from_coords(n, -2, -n, 1)
    }

    /// The conjugate `λ2 = -1 - λ0 - λ1 + (n - 1) + ... `, with exact
    /// coordinates `(n+1, n-1, -1)` from the trace relation.
    pub fn lambda2(n: i64) -> Self {
        OrderElement::from_coords(n, n + 1, n - 1, -1)
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(BigInt::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1].is_zero() && self.c[2].is_zero()
    }

    fn same_n(&self, other: &OrderElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::MismatchedN(self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &OrderElement) -> Result<OrderElement> {
        self.same_n(other)?;
        Ok(OrderElement::new(self.n, [
            &self.c[0] + &other.c[0],
            &self.c[1] + &other.c[1],
            &self.c[2] + &other.c[2],
        ]))
    }

    pub fn sub(&self, other: &OrderElement) -> Result<OrderElement> {
        self.same_n(other)?;
        Ok(OrderElement::new(self.n, [
            &self.c[0] - &other.c[0],
            &self.c[1] - &other.c[1],
            &self.c[2] - &other.c[2],
        ]))
    }

    pub fn neg(&self) -> OrderElement {
        OrderElement::new(self.n, [-&self.c[0], -&self.c[1], -&self.c[2]])
    }

    pub fn scalar_mul(&self, k: &BigInt) -> OrderElement {
        OrderElement::new(self.n, [&self.c[0] * k, &self.c[1] * k, &self.c[2] * k])
    }

    /// Exact product, reducing `λ0^3` and `λ0^4` by the minimal polynomial.
    pub fn mul(&self, other: &OrderElement) -> Result<OrderElement> {
        self.same_n(other)?;
        let n = BigInt::from(self.n);
        let a = &self.c;
        let b = &other.c;
        let d0 = &a[0] * &b[0];
        let d1 = &a[0] * &b[1] + &a[1] * &b[0];
        let d2 = &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0];
        let d3 = &a[1] * &b[2] + &a[2] * &b[1];
        let d4 = &a[2] * &b[2];
        // λ^3 = 1 + (n+2)λ + (n-1)λ^2
        // λ^4 = (n-1) + (n^2+n-1)λ + (n^2-n+3)λ^2
        let n1: BigInt = &n - 1;
        let n2: BigInt = &n + 2;
        let nn: BigInt = &n * &n;
        let l4_0 = n1.clone();
        let l4_1: BigInt = &nn + &n - 1;
        let l4_2: BigInt = &nn - &n + 3;
        Ok(OrderElement::new(self.n, [
            &d0 + &d3 + &d4 * &l4_0,
            &d1 + &d3 * &n2 + &d4 * &l4_1,
            &d2 + &d3 * &n1 + &d4 * &l4_2,
        ]))
    }

    /// `self * λ0`, cheaply.
    pub fn mul_lambda0(&self) -> OrderElement {
        let n1 = BigInt::from(self.n - 1);
        let n2 = BigInt::from(self.n + 2);
        OrderElement::new(self.n, [
            self.c[2].clone(),
            &self.c[0] + &self.c[2] * &n2,
            &self.c[1] + &self.c[2] * &n1,
        ])
    }

    /// The cyclic Galois conjugate: substitutes `λ1` for `λ0`. Applying it
    /// three times is the identity.
    pub fn conjugate(&self) -> OrderElement {
        let l1 = Self::lambda1(self.n);
        // λ1^2 has exact coordinates (3-n, -n^2+n-1, n-1).
        let nn = BigInt::from(self.n) * BigInt::from(self.n);
        let l1sq = OrderElement::new(self.n, [
            BigInt::from(3 - self.n),
            -&nn + self.n - 1,
            BigInt::from(self.n - 1),
        ]);
        let mut out = OrderElement::from_int(self.n, &self.c[0]);
        out = out
            .add(&l1.scalar_mul(&self.c[1]))
            .and_then(|v| v.add(&l1sq.scalar_mul(&self.c[2])))
            .expect("same n by construction");
        out
    }

    /// `σ^k(self)` for any integer `k` (mod 3).
    pub fn conjugate_times(&self, k: i64) -> OrderElement {
        let mut out = self.clone();
        for _ in 0..k.rem_euclid(3) {
            out = out.conjugate();
        }
        out
    }

    /// Matrix of multiplication by `self` in the basis `(1, λ0, λ0^2)`,
    /// columns indexed by basis vector.
    pub fn regular_matrix(&self) -> [[BigInt; 3]; 3] {
        let col0 = self.clone();
        let col1 = col0.mul_lambda0();
        let col2 = col1.mul_lambda0();
        let mut m = [
            [BigInt::zero(), BigInt::zero(), BigInt::zero()],
            [BigInt::zero(), BigInt::zero(), BigInt::zero()],
            [BigInt::zero(), BigInt::zero(), BigInt::zero()],
        ];
        for (j, col) in [col0, col1, col2].into_iter().enumerate() {
            for i in 0..3 {
                m[i][j] = col.c[i].clone();
            }
        }
        m
    }

    /// Field norm: determinant of the regular representation.
    pub fn norm(&self) -> BigInt {
        let m = self.regular_matrix();
        det3(&m)
    }

    /// Field trace.
    pub fn trace(&self) -> BigInt {
        let m = self.regular_matrix();
        &m[0][0] + &m[1][1] + &m[2][2]
    }

    /// Monic characteristic polynomial of the regular representation.
    pub fn char_poly(&self) -> CharPoly {
        let m = self.regular_matrix();
        let trace = &m[0][0] + &m[1][1] + &m[2][2];
        let s2 = (&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0])
            + (&m[0][0] * &m[2][2] - &m[0][2] * &m[2][0])
            + (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]);
        let det = det3(&m);
        CharPoly { a2: -trace, a1: s2, a0: -det }
    }

    /// Exact inverse of a unit via its characteristic polynomial:
    /// `u (u^2 - tr u + s2) = norm`, so for norm ±1 the inverse is
    /// `norm * (u^2 - tr u + s2)`. Errors with [`Error::NotAUnit`] otherwise.
    pub fn invert_unit(&self) -> Result<OrderElement> {
        let cp = self.char_poly();
        let norm = cp.norm();
        if !norm.clone().abs().is_one() {
            return Err(Error::NotAUnit(norm));
        }
        let sq = self.mul(self)?;
        let lin = self.scalar_mul(&cp.trace());
        let adj = sq.sub(&lin)?.add(&OrderElement::from_int(self.n, &cp.second_symmetric()))?;
        Ok(adj.scalar_mul(&norm))
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow(&self, k: i64) -> Result<OrderElement> {
        let base = if k < 0 { self.invert_unit()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = OrderElement::one(self.n);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Real embedding at a root enclosure: `c0 + c1 r + c2 r^2`, exact
    /// interval arithmetic over the input enclosure.
    pub fn embed(&self, root: &RealEnclosure) -> RealEnclosure {
        let r2 = root.mul(root);
        RealEnclosure::from_bigint(&self.c[0])
            .add(&root.mul_bigint(&self.c[1]))
            .add(&r2.mul_bigint(&self.c[2]))
    }
}

fn det3(m: &[[BigInt; 3]; 3]) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

impl fmt::Debug for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}·λ0 + {}·λ0² | n={})",
            self.c[0], self.c[1], self.c[2], self.n
        )
    }
}

/// Monic cubic `X^3 + a2 X^2 + a1 X + a0` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    pub a2: BigInt,
    pub a1: BigInt,
    pub a0: BigInt,
}

impl CharPoly {
    pub fn trace(&self) -> BigInt {
        -&self.a2
    }

    pub fn second_symmetric(&self) -> BigInt {
        self.a1.clone()
    }

    pub fn norm(&self) -> BigInt {
        -&self.a0
    }

    /// Evaluates the polynomial at an order element (for annihilation checks).
    pub fn eval_element(&self, u: &OrderElement) -> Result<OrderElement> {
        let n = u.n();
        let mut acc = OrderElement::one(n);
        // Horner: ((u + a2) u + a1) u + a0.
        acc = acc.mul(u)?.add(&OrderElement::from_int(n, &self.a2))?;
        acc = acc.mul(u)?.add(&OrderElement::from_int(n, &self.a1))?;
        acc = acc.mul(u)?.add(&OrderElement::from_int(n, &self.a0))?;
        Ok(acc)
    }
}

/// A signed word `sign * λ0^a * λ2^b` over the fundamental pair `(λ0, λ2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitWord {
    /// `+1` or `-1`.
    pub sign: i8,
    pub a: i64,
    pub b: i64,
}

impl UnitWord {
    pub fn new(sign: i8, a: i64, b: i64) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParameter(format!("unit word sign {sign}, need ±1")));
        }
        Ok(UnitWord { sign, a, b })
    }

    /// Expands the word to the exact order element `sign λ0^a λ2^b`.
    pub fn expand(&self, n: i64) -> Result<OrderElement> {
        let l0 = OrderElement::lambda0(n).pow(self.a)?;
        let l2 = OrderElement::lambda2(n).pow(self.b)?;
        let u = l0.mul(&l2)?;
        Ok(if self.sign < 0 { u.neg() } else { u })
    }
}

impl fmt::Display for UnitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{s}λ0^{}·λ2^{}", self.a, self.b)
    }
}

/// The Siegel combination `β_j(α_k - α_l) + β_l(α_j - α_k) + β_k(α_l - α_j)`,
/// exactly. For conjugate families `(α_i)`, `(β_i)` and any permutation
/// `(j, k, l)` of `(0, 1, 2)` the result is the zero element.
pub fn siegel_residual(
    alphas: &[OrderElement; 3],
    betas: &[OrderElement; 3],
    j: usize,
    k: usize,
    l: usize,
) -> Result<OrderElement> {
    let mut seen = [false; 3];
    for &i in &[j, k, l] {
        if i > 2 || seen[i] {
            return Err(Error::InvalidParameter(format!(
                "(j, k, l) = ({j}, {k}, {l}) is not a permutation of (0, 1, 2)"
            )));
        }
        seen[i] = true;
    }
    let t1 = betas[j].mul(&alphas[k].sub(&alphas[l])?)?;
    let t2 = betas[l].mul(&alphas[j].sub(&alphas[k])?)?;
    let t3 = betas[k].mul(&alphas[l].sub(&alphas[j])?)?;
    t1.add(&t2)?.add(&t3)
}
