//! Exact fixed-precision arithmetic over Qp and its unramified quadratic
//! extension.
//!
//! A nonzero [`Padic`] is `p^v * u` where the unit `u` is known modulo
//! `p^prec`; the value is therefore determined modulo `p^(v+prec)` and we
//! call `v + prec` its absolute precision. Precision bookkeeping is
//! explicit: arithmetic carries the minimum compatible precision and
//! cancellation shrinks it, never silently. A zero value records only the
//! absolute precision to which it is indistinguishable from 0.
//!
//! The digit-string serialization used in JSON output is
//! `"p^v*u+O(p^N)"` for nonzero values (`N` the absolute precision) and
//! `"O(p^N)"` for zeros, e.g. `53^2*47+O(53^12)`.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Absolute precision cap assigned to exact-integer zeros.
pub const ZERO_CAP: i64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Padic {
    p: u64,
    /// Valuation for nonzero values; for zero, the absolute precision cap
    /// (the value is O(p^v)).
    v: i64,
    /// Unit part in (0, p^prec), coprime to p; zero iff the value is zero.
    unit: BigUint,
    /// Significant base-p digits carried by `unit`.
    prec: u32,
}

fn pow_p(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

fn val_of(p: u64, n: &BigUint) -> u32 {
    assert!(!n.is_zero());
    let pb = BigUint::from(p);
    let mut v = 0u32;
    let mut cur = n.clone();
    loop {
        let (q, r) = cur.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

impl Padic {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Zero known to be O(p^cap).
    pub fn zero(p: u64, cap: i64) -> Self {
        Padic { p, v: cap, unit: BigUint::zero(), prec: 0 }
    }

    /// Valuation; `None` for a value indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.v)
        }
    }

    /// Lower bound for the valuation (the valuation itself, or the zero cap).
    pub fn val_lower_bound(&self) -> i64 {
        self.v
    }

    /// Absolute precision: the value is known modulo p^(this).
    pub fn abs_prec(&self) -> i64 {
        if self.is_zero() {
            self.v
        } else {
            self.v + self.prec as i64
        }
    }

    pub fn rel_prec(&self) -> u32 {
        self.prec
    }

    pub fn unit_part(&self) -> &BigUint {
        &self.unit
    }

    /// Embed an exact integer with `rel` significant digits.
    pub fn from_int(p: u64, n: &BigInt, rel: u32) -> Self {
        if n.is_zero() {
            return Padic::zero(p, ZERO_CAP);
        }
        let mag = n.magnitude().clone();
        let v = val_of(p, &mag) as i64;
        let m = pow_p(p, rel);
        let mut u = (mag / pow_p(p, v as u32)) % &m;
        if n.is_negative() && !u.is_zero() {
            u = &m - u;
        }
        Padic { p, v, unit: u, prec: rel }
    }

    pub fn from_i64(p: u64, n: i64, rel: u32) -> Self {
        Padic::from_int(p, &BigInt::from(n), rel)
    }

    /// Embed an exact rational (denominator may be divisible by p).
    pub fn from_rational(p: u64, q: &BigRational, rel: u32) -> Self {
        if q.is_zero() {
            return Padic::zero(p, ZERO_CAP);
        }
        let num = Padic::from_int(p, q.numer(), rel + 2);
        let den = Padic::from_int(p, q.denom(), rel + 2);
        let mut r = num.div(&den).expect("exact rational division");
        r.prec = r.prec.min(rel);
        r.reduce();
        r
    }

    /// Value known modulo p^abs (absolute semantics).
    pub fn from_int_abs(p: u64, n: &BigInt, abs: i64) -> Self {
        if n.is_zero() {
            return Padic::zero(p, abs);
        }
        let mag = n.magnitude().clone();
        let v = val_of(p, &mag) as i64;
        if v >= abs {
            return Padic::zero(p, abs);
        }
        let rel = (abs - v) as u32;
        let m = pow_p(p, rel);
        let mut u = (mag / pow_p(p, v as u32)) % &m;
        if n.is_negative() {
            u = &m - u;
        }
        Padic { p, v, unit: u, prec: rel }
    }

    fn reduce(&mut self) {
        if self.prec == 0 && !self.unit.is_zero() {
            // Inconsistent; treat as zero at this valuation.
            self.unit = BigUint::zero();
        }
        if !self.unit.is_zero() {
            let m = pow_p(self.p, self.prec);
            self.unit %= &m;
            if self.unit.is_zero() {
                // Lost everything: O(p^(v+prec)).
                self.v += self.prec as i64;
                self.prec = 0;
            }
        }
    }

    /// Truncate to absolute precision `abs` (no-op if already coarser).
    pub fn truncate_abs(&self, abs: i64) -> Self {
        if self.is_zero() {
            return Padic::zero(self.p, self.v.min(abs));
        }
        if self.v >= abs {
            return Padic::zero(self.p, abs);
        }
        let rel = ((abs - self.v) as u32).min(self.prec);
        let mut r = self.clone();
        r.prec = rel;
        r.reduce();
        r
    }

    /// The integer p^v * u mod p^k, requiring v >= 0 and k <= abs_prec.
    pub fn to_int_mod(&self, k: u32) -> Result<BigUint> {
        if self.is_zero() {
            if self.v < k as i64 {
                return Err(Error::Precision(format!(
                    "zero known only to O(p^{}) requested mod p^{}",
                    self.v, k
                )));
            }
            return Ok(BigUint::zero());
        }
        if self.v < 0 {
            return Err(Error::Precision(format!(
                "value with valuation {} is not p-integral",
                self.v
            )));
        }
        if self.abs_prec() < k as i64 {
            return Err(Error::Precision(format!(
                "value known mod p^{} requested mod p^{}",
                self.abs_prec(),
                k
            )));
        }
        let m = pow_p(self.p, k);
        Ok(pow_p(self.p, self.v as u32) * &self.unit % m)
    }

    pub fn add(&self, other: &Padic) -> Padic {
        assert_eq!(self.p, other.p, "mixed primes");
        let p = self.p;
        let abs = self.abs_prec().min(other.abs_prec());
        if self.is_zero() && other.is_zero() {
            return Padic::zero(p, abs);
        }
        if self.is_zero() {
            return other.truncate_abs(abs);
        }
        if other.is_zero() {
            return self.truncate_abs(abs);
        }
        let v0 = self.v.min(other.v);
        if abs <= v0 {
            return Padic::zero(p, abs);
        }
        let k = (abs - v0) as u32;
        let m = pow_p(p, k);
        let a = pow_p(p, (self.v - v0) as u32) * &self.unit % &m;
        let b = pow_p(p, (other.v - v0) as u32) * &other.unit % &m;
        let s = (a + b) % &m;
        if s.is_zero() {
            return Padic::zero(p, abs);
        }
        let dv = val_of(p, &s);
        let v = v0 + dv as i64;
        let rel = (abs - v) as u32;
        let u = (s / pow_p(p, dv)) % pow_p(p, rel);
        Padic { p, v, unit: u, prec: rel }
    }

    pub fn neg(&self) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow_p(self.p, self.prec);
        Padic { p: self.p, v: self.v, unit: &m - &self.unit, prec: self.prec }
    }

    pub fn sub(&self, other: &Padic) -> Padic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Padic) -> Padic {
        assert_eq!(self.p, other.p, "mixed primes");
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            // O(p^za) * (p^vb u) = O(p^(za+vb)); O * O adds the caps.
            let cap = (self.v + other.v).min(ZERO_CAP);
            return Padic::zero(p, cap);
        }
        let rel = self.prec.min(other.prec);
        let m = pow_p(p, rel);
        let u = &self.unit * &other.unit % m;
        Padic { p, v: self.v + other.v, unit: u, prec: rel }
    }

    pub fn inv(&self) -> Result<Padic> {
        if self.is_zero() {
            return Err(Error::Precision(format!(
                "inversion of a value indistinguishable from 0 (O(p^{}))",
                self.v
            )));
        }
        let m = pow_p(self.p, self.prec);
        let u = mod_inverse(&self.unit, &m).ok_or_else(|| {
            Error::Internal("unit part not invertible".into())
        })?;
        Ok(Padic { p: self.p, v: -self.v, unit: u, prec: self.prec })
    }

    pub fn div(&self, other: &Padic) -> Result<Padic> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow_i(&self, e: i64) -> Result<Padic> {
        if e == 0 {
            // x^0 = 1 exactly (0^0 = 1 by the binomial convention).
            return Ok(Padic::from_i64(self.p, 1, 256));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Multiply by an exact power of p (exact shift, no precision change in
    /// relative terms).
    pub fn shift(&self, k: i64) -> Padic {
        let mut r = self.clone();
        r.v += k;
        r
    }

    /// True if `self` and `other` agree modulo p^k.
    pub fn eq_mod(&self, other: &Padic, k: i64) -> bool {
        let d = self.sub(other);
        d.is_zero() && d.v >= k
    }

    /// Square root by Hensel lifting, odd p only. Requires even valuation
    /// and a unit part that is a square mod p. The returned root's unit is
    /// the smaller of the two residues mod p.
    pub fn sqrt(&self) -> Result<Padic> {
        let p = self.p;
        if p == 2 {
            return Err(Error::Domain("sqrt restricted to odd p".into()));
        }
        if self.is_zero() {
            return Ok(Padic::zero(p, self.v.div_euclid(2)));
        }
        if self.v % 2 != 0 {
            return Err(Error::Domain(format!(
                "no square root: odd valuation {}",
                self.v
            )));
        }
        let prec = self.prec;
        let u0 = (&self.unit % BigUint::from(p)).to_u64().unwrap();
        let r0 = sqrt_mod_p(u0, p).ok_or_else(|| {
            Error::Domain(format!("no square root: {} is a non-residue mod {}", u0, p))
        })?;
        // Newton lifting x <- (x + u/x)/2 doubles digits each round.
        let mut x = BigUint::from(r0.min(p - r0));
        let mut digits = 1u32;
        while digits < prec {
            digits = (digits * 2).min(prec);
            let m = pow_p(p, digits);
            let xi = mod_inverse(&(&x % &m), &m).expect("unit invertible");
            let two_inv = mod_inverse(&BigUint::from(2u32), &m).unwrap();
            x = (&x + (&self.unit % &m) * xi % &m) % &m * two_inv % &m;
        }
        // Normalize branch: unit residue mod p is the smaller root.
        let rp = (&x % BigUint::from(p)).to_u64().unwrap();
        if rp > p - rp {
            x = pow_p(p, prec) - x;
        }
        let r = Padic { p, v: self.v / 2, unit: x, prec };
        debug_assert!(r.mul(&r).eq_mod(self, self.abs_prec()));
        Ok(r)
    }

    /// True if the value is a square in Qp (odd p).
    pub fn is_square(&self) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::Domain("square test restricted to odd p".into()));
        }
        if self.is_zero() {
            return Err(Error::Precision("square test on a precision zero".into()));
        }
        if self.v % 2 != 0 {
            return Ok(false);
        }
        let u0 = (&self.unit % BigUint::from(self.p)).to_u64().unwrap();
        Ok(legendre(u0, self.p) == 1)
    }

    /// Digit-string form: `p^v*u+O(p^N)` / `O(p^N)`.
    pub fn digit_string(&self) -> String {
        if self.is_zero() {
            format!("O({}^{})", self.p, self.v)
        } else {
            format!("{}^{}*{}+O({}^{})", self.p, self.v, self.unit, self.p, self.abs_prec())
        }
    }

    /// Inverse of [`Padic::digit_string`].
    pub fn parse_digit_string(s: &str) -> Result<Padic> {
        let bad = || Error::Fixture(format!("malformed p-adic digit string: {s}"));
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("O(") {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            let (p, n) = inner.split_once('^').ok_or_else(bad)?;
            return Ok(Padic::zero(
                p.parse().map_err(|_| bad())?,
                n.parse().map_err(|_| bad())?,
            ));
        }
        let (head, tail) = s.split_once("+O(").ok_or_else(bad)?;
        let tail = tail.strip_suffix(')').ok_or_else(bad)?;
        let (ps, ns) = tail.split_once('^').ok_or_else(bad)?;
        let p: u64 = ps.parse().map_err(|_| bad())?;
        let abs: i64 = ns.parse().map_err(|_| bad())?;
        let (pv, us) = head.split_once('*').ok_or_else(bad)?;
        let (ps2, vs) = pv.split_once('^').ok_or_else(bad)?;
        if ps2.parse::<u64>().map_err(|_| bad())? != p {
            return Err(bad());
        }
        let v: i64 = vs.parse().map_err(|_| bad())?;
        let unit: BigUint = us.parse().map_err(|_| bad())?;
        if abs <= v {
            return Err(bad());
        }
        let mut r = Padic { p, v, unit, prec: (abs - v) as u32 };
        r.reduce();
        if r.is_zero() {
            return Err(bad());
        }
        if r.unit.gcd(&BigUint::from(p)) != BigUint::one() {
            return Err(bad());
        }
        Ok(r)
    }

    /// Rational reconstruction: a/b with a = b*x mod p^N, |a|,|b| bounded by
    /// p^((N-guard)/2), b coprime to p. `None` when no such pair exists.
    pub fn rational_reconstruct(&self, guard: u32) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.v < 0 {
            let shifted = self.shift(-self.v);
            let r = shifted.rational_reconstruct(guard)?;
            let scale = BigRational::from_integer(BigInt::from(self.p).pow((-self.v) as u32));
            return Some(r / scale);
        }
        let n = self.abs_prec();
        if n <= guard as i64 {
            return None;
        }
        let modulus = BigInt::from(pow_p(self.p, n as u32));
        let x = BigInt::from(pow_p(self.p, self.v as u32) * &self.unit);
        let bound: BigInt = BigInt::from(self.p).pow(((n - guard as i64) / 2) as u32);

        // Extended Euclid on (modulus, x); rows satisfy r = s*m + t*x.
        let (mut r0, mut t0) = (modulus.clone(), BigInt::zero());
        let (mut r1, mut t1) = (x.clone(), BigInt::one());
        while r1.abs() > bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            let t2 = &t0 - &q * &t1;
            r0 = r1;
            t0 = t1;
            r1 = r2;
            t1 = t2;
        }
        let (a, b) = (r1, t1);
        if b.is_zero() || b.abs() > bound {
            return None;
        }
        if a.gcd(&b) != BigInt::one() {
            return None;
        }
        if b.gcd(&BigInt::from(self.p)) != BigInt::one() {
            return None;
        }
        // Verify a = b*x mod p^N.
        let diff = (&a - &b * &x).mod_floor(&modulus);
        if !diff.is_zero() {
            return None;
        }
        let (a, b) = if b.is_negative() { (-a, -b) } else { (a, b) };
        Some(BigRational::new(a, b))
    }
}

impl std::fmt::Display for Padic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.digit_string())
    }
}

pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(&m).to_biguint().unwrap())
}

/// Legendre symbol (a/p) for odd prime p, a not divisible by p.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let r = BigUint::from(a).modpow(&BigUint::from((p - 1) / 2), &BigUint::from(p));
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Tonelli-Shanks square root mod an odd prime.
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let pb = BigUint::from(p);
    let ab = BigUint::from(a);
    if p % 4 == 3 {
        let r = ab.modpow(&BigUint::from((p + 1) / 4), &pb);
        return r.to_u64();
    }
    // Tonelli-Shanks.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = BigUint::from(z).modpow(&BigUint::from(q), &pb);
    let mut t = ab.modpow(&BigUint::from(q), &pb);
    let mut r = ab.modpow(&BigUint::from((q + 1) / 2), &pb);
    while !t.is_one() {
        let mut i = 0u32;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = &tt * &tt % &pb;
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = c.modpow(&BigUint::from(1u64 << (m - i - 1)), &pb);
        m = i;
        c = &b * &b % &pb;
        t = t * &c % &pb;
        r = r * b % &pb;
    }
    r.to_u64()
}

/// 2-adic square root of a unit congruent to 1 mod 8, to `prec` digits.
/// Branch convention: the root congruent to 1 mod 4. Internal helper for
/// generating splitting data at p = 2; the public sqrt stays odd-only.
pub(crate) fn sqrt_2adic_unit(a: &BigUint, prec: u32) -> Option<BigUint> {
    let eight = BigUint::from(8u32);
    if (a % &eight) != BigUint::one() {
        return None;
    }
    // Digit-by-digit lift: if x^2 = a mod 2^k (k >= 3), then x or
    // x + 2^(k-1) is a root mod 2^(k+1).
    let mut x = BigUint::one();
    for k in 3..=prec.max(3) {
        let m_next = BigUint::from(2u32).pow(k + 1);
        let cand = &x * &x % &m_next;
        if cand != a % &m_next {
            x += BigUint::from(2u32).pow(k - 1);
        }
    }
    let m = BigUint::from(2u32).pow(prec);
    let mut x = x % &m;
    // Branch: root = 1 mod 4.
    if (&x % BigUint::from(4u32)) != BigUint::one() {
        x = &m - &x;
    }
    debug_assert_eq!(&x * &x % &m, a % &m);
    Some(x)
}

// ---------------------------------------------------------------------------
// Unramified quadratic extension
// ---------------------------------------------------------------------------

/// Fixed generator data for the unramified quadratic extension K of Qp:
/// omega^2 = t*omega + n with 1, omega an O_K-basis whose residues span
/// F_{p^2} over F_p. For odd p: omega = sqrt(s) with s the least
/// quadratic non-residue (t = 0, n = s); for p = 2: omega^2 + omega + 1 = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadParams {
    pub p: u64,
    pub t: i64,
    pub n: i64,
}

impl QuadParams {
    pub fn for_prime(p: u64) -> Self {
        if p == 2 {
            return QuadParams { p, t: -1, n: -1 };
        }
        let mut s = 2u64;
        while legendre(s, p) != -1 {
            s += 1;
        }
        QuadParams { p, t: 0, n: s as i64 }
    }
}

/// Element a + b*omega of the unramified quadratic extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicQuad {
    pub params: QuadParams,
    pub a: Padic,
    pub b: Padic,
}

impl PadicQuad {
    pub fn new(params: QuadParams, a: Padic, b: Padic) -> Self {
        assert_eq!(params.p, a.p());
        assert_eq!(params.p, b.p());
        PadicQuad { params, a, b }
    }

    pub fn from_qp(params: QuadParams, a: Padic) -> Self {
        let z = Padic::zero(params.p, a.abs_prec());
        PadicQuad::new(params, a, z)
    }

    pub fn omega(params: QuadParams, rel: u32) -> Self {
        PadicQuad::new(
            params,
            Padic::zero(params.p, rel as i64),
            Padic::from_i64(params.p, 1, rel),
        )
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Valuation lower bound: for K unramified, v(a + b*omega) =
    /// min(v(a), v(b)).
    pub fn val_lower_bound(&self) -> i64 {
        self.a.val_lower_bound().min(self.b.val_lower_bound())
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else if self.a.is_zero() {
            self.b.valuation()
        } else if self.b.is_zero() {
            self.a.valuation()
        } else {
            Some(self.a.valuation().unwrap().min(self.b.valuation().unwrap()))
        }
    }

    /// Lies in Qp at working precision: omega-coordinate indistinguishable
    /// from zero.
    pub fn is_in_qp(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(&self, o: &PadicQuad) -> PadicQuad {
        PadicQuad::new(self.params, self.a.add(&o.a), self.b.add(&o.b))
    }

    pub fn sub(&self, o: &PadicQuad) -> PadicQuad {
        PadicQuad::new(self.params, self.a.sub(&o.a), self.b.sub(&o.b))
    }

    pub fn neg(&self) -> PadicQuad {
        PadicQuad::new(self.params, self.a.neg(), self.b.neg())
    }

    pub fn mul(&self, o: &PadicQuad) -> PadicQuad {
        // (a + b w)(c + d w) = ac + bd*n + (ad + bc + bd*t) w
        let p = self.p();
        let prec_hint = 8;
        let tq = Padic::from_i64(p, self.params.t, 64.max(prec_hint));
        let nq = Padic::from_i64(p, self.params.n, 64.max(prec_hint));
        let ac = self.a.mul(&o.a);
        let bd = self.b.mul(&o.b);
        let ad = self.a.mul(&o.b);
        let bc = self.b.mul(&o.a);
        let re = ac.add(&bd.mul(&nq));
        let im = ad.add(&bc).add(&bd.mul(&tq));
        PadicQuad::new(self.params, re, im)
    }

    pub fn mul_scalar(&self, s: &Padic) -> PadicQuad {
        PadicQuad::new(self.params, self.a.mul(s), self.b.mul(s))
    }

    pub fn conj(&self) -> PadicQuad {
        // conj(a + b w) = (a + t b) - b w
        let t = Padic::from_i64(self.p(), self.params.t, self.b.rel_prec().max(1));
        PadicQuad::new(self.params, self.a.add(&self.b.mul(&t)), self.b.neg())
    }

    /// Norm to Qp: a^2 + t ab - n b^2.
    pub fn norm(&self) -> Padic {
        let t = Padic::from_i64(self.p(), self.params.t, self.a.rel_prec().max(self.b.rel_prec()).max(1));
        let n = Padic::from_i64(self.p(), self.params.n, self.a.rel_prec().max(self.b.rel_prec()).max(1));
        self.a
            .mul(&self.a)
            .add(&t.mul(&self.a).mul(&self.b))
            .sub(&n.mul(&self.b).mul(&self.b))
    }

    /// Trace to Qp: 2a + t b.
    pub fn trace(&self) -> Padic {
        let t = Padic::from_i64(self.p(), self.params.t, self.b.rel_prec().max(1));
        self.a.add(&self.a).add(&t.mul(&self.b))
    }

    pub fn inv(&self) -> Result<PadicQuad> {
        let n = self.norm();
        let c = self.conj();
        let ni = n.inv()?;
        Ok(c.mul_scalar(&ni))
    }

    pub fn div(&self, o: &PadicQuad) -> Result<PadicQuad> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow_u(&self, e: u64) -> PadicQuad {
        let mut acc = PadicQuad::from_qp(
            self.params,
            Padic::from_i64(self.p(), 1, self.a.rel_prec().max(self.b.rel_prec()).max(1)),
        );
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eq_mod(&self, o: &PadicQuad, k: i64) -> bool {
        self.a.eq_mod(&o.a, k) && self.b.eq_mod(&o.b, k)
    }

    pub fn digit_string(&self) -> String {
        format!("({})+({})*w", self.a.digit_string(), self.b.digit_string())
    }
}

// ---------------------------------------------------------------------------
// 2x2 matrices over Qp
// ---------------------------------------------------------------------------

/// 2x2 matrix with Padic entries, row major: [a b; c d].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Padic,
    pub b: Padic,
    pub c: Padic,
    pub d: Padic,
}

impl Mat2 {
    pub fn new(a: Padic, b: Padic, c: Padic, d: Padic) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(p: u64, rel: u32) -> Self {
        let one = Padic::from_i64(p, 1, rel);
        let z = Padic::zero(p, rel as i64);
        Mat2::new(one.clone(), z.clone(), z, one)
    }

    pub fn from_ints(p: u64, m: &[[BigInt; 2]; 2], rel: u32) -> Self {
        Mat2::new(
            Padic::from_int(p, &m[0][0], rel),
            Padic::from_int(p, &m[0][1], rel),
            Padic::from_int(p, &m[1][0], rel),
            Padic::from_int(p, &m[1][1], rel),
        )
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        )
    }

    pub fn scale(&self, s: &Padic) -> Mat2 {
        Mat2::new(self.a.mul(s), self.b.mul(s), self.c.mul(s), self.d.mul(s))
    }

    pub fn det(&self) -> Padic {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d.clone(), self.b.neg(), self.c.neg(), self.a.clone())
    }

    pub fn inv(&self) -> Result<Mat2> {
        let di = self.det().inv()?;
        Ok(self.adjugate().scale(&di))
    }

    pub fn entries(&self) -> [&Padic; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Minimum valuation over the entries; error if dominated by precision
    /// caps (i.e. some zero entry's cap is below every known valuation).
    pub fn min_valuation(&self) -> Result<i64> {
        let mut best: Option<i64> = None;
        for e in self.entries() {
            if let Some(v) = e.valuation() {
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
        }
        let best = best.ok_or_else(|| {
            Error::Precision("matrix indistinguishable from zero".into())
        })?;
        for e in self.entries() {
            if e.is_zero() && e.val_lower_bound() < best {
                return Err(Error::Precision(
                    "entry precision cap below the matrix minimum valuation".into(),
                ));
            }
        }
        Ok(best)
    }

    /// Moebius action on a point of the quadratic extension:
    /// z -> (a z + b)/(c z + d).
    pub fn moebius(&self, z: &PadicQuad) -> Result<PadicQuad> {
        let pa = PadicQuad::from_qp(z.params, self.a.clone());
        let pb = PadicQuad::from_qp(z.params, self.b.clone());
        let pc = PadicQuad::from_qp(z.params, self.c.clone());
        let pd = PadicQuad::from_qp(z.params, self.d.clone());
        let num = pa.mul(z).add(&pb);
        let den = pc.mul(z).add(&pd);
        num.div(&den)
    }
}
