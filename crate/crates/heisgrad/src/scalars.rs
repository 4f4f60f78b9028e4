//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! Elements are stored in the power basis 1, ζ, …, ζ^{φ(N)-1} with rational
//! coefficients, reduced modulo the cyclotomic polynomial Φ_N.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot embed Q(zeta_{from}) into Q(zeta_{to}): {from} does not divide {to}")]
    NotASubfield { from: u64, to: u64 },
    #[error("sqrt({l}) needs conductor divisible by {need}, have {have}")]
    ConductorTooSmall { l: u64, need: u64, have: u64 },
    #[error("zeta({m}) is not in Q(zeta_{n})")]
    RootNotInField { m: u64, n: u64 },
    #[error("conductor {0} is out of range")]
    BadConductor(u64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a.max(b);
    }
    a / a.gcd(&b) * b
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Integer polynomial helpers (coefficients low degree first).
fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of integer polynomials by a monic divisor.
fn poly_div_monic_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        q[i - dd] = c.clone();
        for (j, d) in den.iter().enumerate() {
            rem[i - dd + j] -= &c * d;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// Φ_n as integer coefficients, via x^n - 1 = ∏_{d|n} Φ_d.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    let mut den = vec![BigInt::one()];
    for d in divisors(n) {
        if d < n {
            den = poly_mul_int(&den, &cyclotomic_poly(d));
        }
    }
    poly_div_monic_int(&num, &den)
}

struct CtxInner {
    n: u64,
    deg: usize,
    phi: Vec<BigRational>,
    /// x^{deg+i} mod Φ_N for i in 0..deg-1.
    high: Vec<Vec<BigRational>>,
    units: OnceLock<Vec<(Cyclo, u64)>>,
}

/// Handle to the field Q(ζ_N). Cheap to clone.
#[derive(Clone)]
pub struct CycloCtx(Arc<CtxInner>);

impl fmt::Debug for CycloCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.0.n)
    }
}

impl PartialEq for CycloCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.n == other.0.n
    }
}
impl Eq for CycloCtx {}

fn reduce_with(phi_high: &[Vec<BigRational>], phi: &[BigRational], deg: usize, mut v: Vec<BigRational>) -> Vec<BigRational> {
    if v.len() <= deg {
        v.resize(deg, BigRational::zero());
        return v;
    }
    // long division for anything beyond the precomputed range
    while v.len() > 2 * deg - 1 {
        let c = v.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let base = v.len() - deg;
        for (j, p) in phi.iter().take(deg).enumerate() {
            if !p.is_zero() {
                v[base + j] -= &c * p;
            }
        }
    }
    let extra: Vec<BigRational> = v.split_off(deg);
    for (i, c) in extra.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, h) in phi_high[i].iter().enumerate() {
            if !h.is_zero() {
                v[j] += &c * h;
            }
        }
    }
    v
}

impl CycloCtx {
    pub fn new(n: u64) -> Result<Self, ScalarError> {
        if n == 0 || n > 4096 {
            return Err(ScalarError::BadConductor(n));
        }
        let phi_int = cyclotomic_poly(n);
        let deg = phi_int.len() - 1;
        let phi: Vec<BigRational> = phi_int.into_iter().map(BigRational::from_integer).collect();
        // x^deg = -sum_{j<deg} phi_j x^j; build successive powers.
        let mut high: Vec<Vec<BigRational>> = Vec::with_capacity(deg.saturating_sub(1));
        let mut cur: Vec<BigRational> = (0..deg).map(|j| -phi[j].clone()).collect();
        for _ in 0..deg.saturating_sub(1) {
            high.push(cur.clone());
            // multiply by x
            let top = cur[deg - 1].clone();
            let mut next = vec![BigRational::zero(); deg];
            for j in (1..deg).rev() {
                next[j] = cur[j - 1].clone();
            }
            if !top.is_zero() {
                for j in 0..deg {
                    next[j] -= &top * &phi[j];
                }
            }
            cur = next;
        }
        if deg == 1 {
            high.clear();
        }
        Ok(CycloCtx(Arc::new(CtxInner { n, deg, phi, high, units: OnceLock::new() })))
    }

    pub fn conductor(&self) -> u64 {
        self.0.n
    }

    pub fn degree(&self) -> usize {
        self.0.deg
    }

    /// Φ_N coefficients, low degree first.
    pub fn phi(&self) -> Vec<BigInt> {
        self.0.phi.iter().map(|c| c.to_integer()).collect()
    }

    fn reduce(&self, v: Vec<BigRational>) -> Vec<BigRational> {
        reduce_with(&self.0.high, &self.0.phi, self.0.deg, v)
    }

    pub fn from_coeffs(&self, coeffs: Vec<BigRational>) -> Cyclo {
        Cyclo { ctx: self.clone(), c: self.reduce(coeffs) }
    }

    pub fn zero(&self) -> Cyclo {
        Cyclo { ctx: self.clone(), c: vec![BigRational::zero(); self.0.deg] }
    }

    pub fn one(&self) -> Cyclo {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> Cyclo {
        self.from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn from_frac(&self, p: i64, q: i64) -> Cyclo {
        self.from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(&self, r: BigRational) -> Cyclo {
        let mut z = self.zero();
        z.c[0] = r;
        z
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_pow(&self, k: i64) -> Cyclo {
        let n = self.0.n as i64;
        let e = k.rem_euclid(n) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        self.from_coeffs(v)
    }

    pub fn zeta(&self) -> Cyclo {
        self.zeta_pow(1)
    }

    /// ζ_m^k, defined when m | N.
    pub fn root_of_unity(&self, m: u64, k: i64) -> Result<Cyclo, ScalarError> {
        if m == 0 || !self.0.n.is_multiple_of(m) {
            return Err(ScalarError::RootNotInField { m, n: self.0.n });
        }
        Ok(self.zeta_pow(k * (self.0.n / m) as i64))
    }

    /// The imaginary unit ζ_4 (requires 4 | N).
    pub fn i(&self) -> Result<Cyclo, ScalarError> {
        self.root_of_unity(4, 1)
    }

    /// A fixed square root of the integer l.
    ///
    /// Needs 4·f | N where f is the squarefree part of l (so 4l | N always suffices).
    pub fn sqrt_int(&self, l: u64) -> Result<Cyclo, ScalarError> {
        if l == 0 {
            return Ok(self.zero());
        }
        let (s, f) = square_split(l);
        let mut out = self.from_int(s as i64);
        if f == 1 {
            return Ok(out);
        }
        let need = 4 * f;
        if !self.0.n.is_multiple_of(need) {
            return Err(ScalarError::ConductorTooSmall { l, need, have: self.0.n });
        }
        for p in prime_factors(f) {
            let r = if p == 2 {
                let z8 = self.root_of_unity(8, 1)?;
                let z8i = self.root_of_unity(8, -1)?;
                z8.add(&z8i)
            } else {
                let mut g = self.zero();
                for k in 0..p {
                    g = g.add(&self.root_of_unity(p, ((k * k) % p) as i64)?);
                }
                if p % 4 == 1 {
                    g
                } else {
                    // g = i·sqrt(p)
                    g.mul(&self.i()?.neg())
                }
            };
            out = out.mul(&r);
        }
        Ok(out)
    }

    /// All roots of unity in the field with their orders, in a fixed order.
    pub fn roots_of_unity(&self) -> &[(Cyclo, u64)] {
        self.0.units.get_or_init(|| {
            let n = self.0.n;
            // μ(Q(ζ_N)) = μ_{lcm(2,N)}
            let m = lcm_u64(2, n);
            let ctx = self.clone();
            let mut out = Vec::with_capacity(m as usize);
            for k in 0..m {
                let val = if m == n {
                    ctx.zeta_pow(k as i64)
                } else {
                    // N odd: ζ_{2N}^k = (-1)^k ζ_N^{k(N+1)/2}
                    let base = ctx.zeta_pow((k * (n + 1) / 2) as i64);
                    if k % 2 == 1 {
                        base.neg()
                    } else {
                        base
                    }
                };
                out.push((val, m / gcd_u64(m, k)));
            }
            out
        })
    }

    /// ζ_M^k where M = lcm(2, N) generates the roots of unity.
    pub fn unit_root(&self, k: i64) -> Cyclo {
        let r = self.roots_of_unity();
        let m = r.len() as i64;
        r[k.rem_euclid(m) as usize].0.clone()
    }

    /// Order of the full group of roots of unity of the field.
    pub fn unit_order(&self) -> u64 {
        lcm_u64(2, self.0.n)
    }

    pub fn parse(&self, s: &str) -> Result<Cyclo, ScalarError> {
        let e = ScalarExpr::parse(s)?;
        e.eval(self)
    }
}

fn square_split(l: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut f = 1u64;
    let mut x = l;
    let mut p = 2u64;
    while p * p <= x {
        let mut e = 0;
        while x.is_multiple_of(p) {
            x /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= p;
        }
        p += 1;
    }
    f *= x;
    (s, f)
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Element of Q(ζ_N).
#[derive(Clone)]
pub struct Cyclo {
    ctx: CycloCtx,
    c: Vec<BigRational>,
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other);
        self.c == other.c
    }
}
impl Eq for Cyclo {}

impl Hash for Cyclo {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state)
    }
}

impl PartialOrd for Cyclo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but deterministic total order (lexicographic on coefficients).
impl Ord for Cyclo {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.cmp(&other.c)
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Cyclo {
    fn same_field(&self, other: &Cyclo) {
        assert_eq!(
            self.ctx.0.n, other.ctx.0.n,
            "mixing elements of Q(zeta_{}) and Q(zeta_{})",
            self.ctx.0.n, other.ctx.0.n
        );
    }

    pub fn ctx(&self) -> &CycloCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        self.same_field(o);
        Cyclo { ctx: self.ctx.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Cyclo) -> Cyclo {
        self.same_field(o);
        Cyclo { ctx: self.ctx.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo { ctx: self.ctx.clone(), c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> Cyclo {
        Cyclo { ctx: self.ctx.clone(), c: self.c.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        self.same_field(o);
        if self.is_rational() {
            return o.scale(&self.c[0]);
        }
        if o.is_rational() {
            return self.scale(&o.c[0]);
        }
        let d = self.c.len();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Cyclo { ctx: self.ctx.clone(), c: self.ctx.reduce(prod) }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Cyclo, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(self.ctx.from_rational(self.c[0].recip()));
        }
        // invariant: s * a ≡ r (mod Φ)
        let mut r0 = trim(self.ctx.0.phi.clone());
        let mut r1 = trim(self.c.clone());
        let mut s0: Vec<BigRational> = vec![BigRational::zero()];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !(r1.len() == 1 && !r1[0].is_zero()) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            if r1.len() == 1 && r1[0].is_zero() {
                unreachable!("Φ_N is irreducible, gcd must be constant");
            }
        }
        let c = r1[0].recip();
        let v: Vec<BigRational> = s1.into_iter().map(|x| x * &c).collect();
        Ok(self.ctx.from_coeffs(v))
    }

    pub fn div(&self, o: &Cyclo) -> Result<Cyclo, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Cyclo, ScalarError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.ctx.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Image under the inclusion Q(ζ_N) ⊂ Q(ζ_M), ζ_N ↦ ζ_M^{M/N}.
    pub fn embed(&self, target: &CycloCtx) -> Result<Cyclo, ScalarError> {
        let n = self.ctx.0.n;
        let m = target.0.n;
        if !m.is_multiple_of(n) {
            return Err(ScalarError::NotASubfield { from: n, to: m });
        }
        let step = (m / n) as usize;
        let mut v = vec![BigRational::zero(); (self.c.len() - 1) * step + 1];
        for (i, a) in self.c.iter().enumerate() {
            v[i * step] = a.clone();
        }
        Ok(target.from_coeffs(v))
    }

    /// Order of self as a root of unity, or None when it is not one.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        self.ctx.roots_of_unity().iter().find(|(r, _)| r == self).map(|(_, o)| *o)
    }

    /// Exponent k with self = ζ_M^k, M = lcm(2, N), if self is a root of unity.
    pub fn unit_log(&self) -> Option<u64> {
        self.ctx.roots_of_unity().iter().position(|(r, _)| r == self).map(|k| k as u64)
    }

    /// Some square root inside the field, if one exists of the form q·ζ^k or q·ζ^k·√m.
    pub fn sqrt_try(&self) -> Option<Cyclo> {
        self.nth_root_try(2)
    }

    /// Some d-th root inside the field, found among elements q·ω·s with ω a root of unity,
    /// q rational and s a product of quadratic surds available in the field.
    pub fn nth_root_try(&self, d: u64) -> Option<Cyclo> {
        if d == 1 {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let ctx = self.ctx.clone();
        let units = ctx.roots_of_unity().to_vec();
        // pure root of unity times a rational
        for (w, _) in units.iter() {
            let q = match self.div(w).ok()?.to_rational() {
                Some(q) => q,
                None => continue,
            };
            // need q = ± t^d up to another unit; try t^d = q and t^d = -q
            for sign in [1i64, -1] {
                let qs = &q * BigRational::from_integer(BigInt::from(sign));
                if let Some(t) = rational_nth_root(&qs, d) {
                    // self = w·sign·t^d; need ω with ω^d = sign·w
                    let target = if sign == 1 { w.clone() } else { w.neg() };
                    for (om, _) in units.iter() {
                        if om.pow(d as i64).ok()? == target {
                            return Some(om.scale(&t));
                        }
                    }
                }
            }
        }
        if d == 2 {
            // q·ω·√m with squarefree m | available
            let n = ctx.conductor();
            for m in 2..=n {
                if square_split(m).1 != m {
                    continue;
                }
                let s = match ctx.sqrt_int(m) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                // self / m should be q·ω with a square root; candidate root = s·root(self/m)... use
                // (s·t)^2 = m·t^2 = self  =>  t^2 = self/m
                let rest = self.scale(&BigRational::new(BigInt::one(), BigInt::from(m)));
                if let Some(t) = rest.nth_root_try_units(2) {
                    return Some(t.mul(&s));
                }
            }
        }
        None
    }

    fn nth_root_try_units(&self, d: u64) -> Option<Cyclo> {
        let units = self.ctx.roots_of_unity().to_vec();
        for (w, _) in units.iter() {
            let q = match self.div(w).ok()?.to_rational() {
                Some(q) => q,
                None => continue,
            };
            if let Some(t) = rational_nth_root(&q, d) {
                for (om, _) in units.iter() {
                    if om.pow(d as i64).ok()? == *w {
                        return Some(om.scale(&t));
                    }
                }
            }
        }
        None
    }
}

fn rational_nth_root(q: &BigRational, d: u64) -> Option<BigRational> {
    if q.is_negative() {
        if d.is_multiple_of(2) {
            return None;
        }
        return rational_nth_root(&-q, d).map(|x| -x);
    }
    let n = int_nth_root(q.numer(), d)?;
    let m = int_nth_root(q.denom(), d)?;
    Some(BigRational::new(n, m))
}

fn int_nth_root(x: &BigInt, d: u64) -> Option<BigInt> {
    let r = x.nth_root(d as u32);
    if num_traits::pow(r.clone(), d as usize) == *x {
        Some(r)
    } else {
        None
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().map(|x| x.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![BigRational::zero()], trim(r));
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = &r[i] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i - db + j] -= &c * y;
        }
        q[i - db] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

impl fmt::Display for Cyclo {
    /// Canonical text: sum of `c*zeta(M)^k` terms with ζ_N^k written in lowest terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.ctx.0.n;
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", fmt_rat(&mag))?;
                continue;
            }
            let g = gcd_u64(n, k as u64);
            let (m, e) = (n / g, k as u64 / g);
            let root = if e == 1 { format!("zeta({m})") } else { format!("zeta({m})^{e}") };
            if mag.is_one() {
                write!(f, "{root}")?;
            } else {
                write!(f, "{}*{root}", fmt_rat(&mag))?;
            }
        }
        Ok(())
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parsed scalar expression, independent of the field.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarExpr {
    Rat(BigRational),
    Zeta(u64),
    I,
    Sqrt(u64),
    Neg(Box<ScalarExpr>),
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Sub(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Div(Box<ScalarExpr>, Box<ScalarExpr>),
    Pow(Box<ScalarExpr>, i64),
}

impl ScalarExpr {
    /// Grammar: sums and products of rationals `p/q`, `zeta(N)`, `i`, `sqrt(l)`,
    /// parenthesised groups and integer powers `^k`.
    pub fn parse(s: &str) -> Result<ScalarExpr, ScalarError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Smallest conductor whose field contains the value.
    pub fn required_conductor(&self) -> u64 {
        use ScalarExpr::*;
        match self {
            Rat(_) => 1,
            Zeta(m) => *m,
            I => 4,
            Sqrt(l) => {
                let f = square_split(*l).1;
                if f == 1 {
                    1
                } else {
                    4 * f
                }
            }
            Neg(a) | Pow(a, _) => a.required_conductor(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => lcm_u64(a.required_conductor(), b.required_conductor()),
        }
    }

    pub fn eval(&self, ctx: &CycloCtx) -> Result<Cyclo, ScalarError> {
        use ScalarExpr::*;
        Ok(match self {
            Rat(r) => ctx.from_rational(r.clone()),
            Zeta(m) => ctx.root_of_unity(*m, 1)?,
            I => ctx.i()?,
            Sqrt(l) => ctx.sqrt_int(*l)?,
            Neg(a) => a.eval(ctx)?.neg(),
            Add(a, b) => a.eval(ctx)?.add(&b.eval(ctx)?),
            Sub(a, b) => a.eval(ctx)?.sub(&b.eval(ctx)?),
            Mul(a, b) => a.eval(ctx)?.mul(&b.eval(ctx)?),
            Div(a, b) => a.eval(ctx)?.div(&b.eval(ctx)?)?,
            Pow(a, k) => a.eval(ctx)?.pow(*k)?,
        })
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse { pos: self.pos, msg: msg.to_string() }
    }
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }
    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, c: u8) -> Result<(), ScalarError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }
    fn int(&mut self) -> Result<BigInt, ScalarError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }
    fn small(&mut self) -> Result<u64, ScalarError> {
        let v = self.int()?;
        v.to_u64().filter(|&x| x > 0 && x <= 4096).ok_or_else(|| self.err("integer out of range"))
    }
    fn expr(&mut self) -> Result<ScalarExpr, ScalarError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = ScalarExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = ScalarExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }
    fn term(&mut self) -> Result<ScalarExpr, ScalarError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = ScalarExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = ScalarExpr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }
    fn factor(&mut self) -> Result<ScalarExpr, ScalarError> {
        if self.eat(b'-') {
            return Ok(ScalarExpr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let k = self.int()?.to_i64().ok_or_else(|| self.err("exponent out of range"))?;
            return Ok(ScalarExpr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }
    fn word(&mut self, w: &str) -> bool {
        self.ws();
        let b = w.as_bytes();
        if self.s[self.pos..].starts_with(b) {
            let after = self.s.get(self.pos + b.len()).copied();
            if after.map(|c| c.is_ascii_alphanumeric()).unwrap_or(false) {
                return false;
            }
            self.pos += b.len();
            true
        } else {
            false
        }
    }
    fn atom(&mut self) -> Result<ScalarExpr, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                Ok(ScalarExpr::Rat(BigRational::from_integer(n)))
            }
            _ => {
                if self.word("zeta") {
                    self.expect(b'(')?;
                    let m = self.small()?;
                    self.expect(b')')?;
                    Ok(ScalarExpr::Zeta(m))
                } else if self.word("sqrt") {
                    self.expect(b'(')?;
                    let m = self.small()?;
                    self.expect(b')')?;
                    Ok(ScalarExpr::Sqrt(m))
                } else if self.word("i") {
                    Ok(ScalarExpr::I)
                } else {
                    Err(self.err("expected a number, zeta(N), sqrt(l), i or '('"))
                }
            }
        }
    }
}
