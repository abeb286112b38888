//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! A [`CycloNumber`] stores its conductor `N` together with rational
//! coordinates in the power basis `1, ζ_N, …, ζ_N^{φ(N)-1}` modulo the
//! `N`-th cyclotomic polynomial. Every value is kept at the smallest
//! conductor that contains it, so structural equality is field equality.
//!
//! Binary operations lift both operands to the lcm of their conductors and
//! then shrink the result again.
//!
//! ```
//! use hopfforge::cyclo::CycloNumber;
//!
//! let i = CycloNumber::root_of_unity(4, 1);
//! assert_eq!(&i * &i, CycloNumber::from_integer(-1));
//! assert_eq!((&i * &i).conductor(), 1);
//! ```

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact element of `Q(ζ_N)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "RawCyclo", try_from = "RawCyclo")]
pub struct CycloNumber {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct RawCyclo {
    conductor: u32,
    coeffs: Vec<String>,
}

impl From<CycloNumber> for RawCyclo {
    fn from(value: CycloNumber) -> Self {
        RawCyclo {
            conductor: value.conductor,
            coeffs: value.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl TryFrom<RawCyclo> for CycloNumber {
    type Error = Error;

    fn try_from(raw: RawCyclo) -> Result<Self> {
        if raw.conductor == 0 {
            return Err(Error::Parse("cyclotomic conductor must be positive".into()));
        }
        let degree = field(raw.conductor).degree;
        if raw.coeffs.len() != degree {
            return Err(Error::Parse(format!(
                "conductor {} needs {} coefficients, found {}",
                raw.conductor,
                degree,
                raw.coeffs.len()
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycloNumber::from_reduced(raw.conductor, coeffs))
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(Error::Parse(format!("`{s}` is not a decimal-free rational")));
    }
    let r = BigRational::from_str(s.trim())
        .map_err(|_| Error::Parse(format!("`{s}` is not a rational number")))?;
    Ok(r)
}

struct Field {
    degree: usize,
    /// Φ_N, lowest coefficient first, monic.
    poly: Vec<BigInt>,
    units: Vec<u32>,
}

struct Subfield {
    /// Images of ζ_M^j, j < φ(M), in the power basis of Q(ζ_L); one column per j.
    embed: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
    /// Inverse of the square submatrix of `embed` on the pivot rows.
    inverse: Vec<Vec<BigRational>>,
}

type Cache<K, V> = OnceLock<RwLock<HashMap<K, Arc<V>>>>;

static FIELDS: Cache<u32, Field> = OnceLock::new();
static SUBFIELDS: Cache<(u32, u32), Subfield> = OnceLock::new();

fn cached<K, V>(cache: &'static Cache<K, V>, key: K, make: impl FnOnce() -> V) -> Arc<V>
where
    K: std::hash::Hash + Eq + Copy,
{
    let lock = cache.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = lock.read().expect("cache poisoned").get(&key) {
        return Arc::clone(v);
    }
    let value = Arc::new(make());
    lock.write()
        .expect("cache poisoned")
        .entry(key)
        .or_insert(value)
        .clone()
}

fn field(n: u32) -> Arc<Field> {
    cached(&FIELDS, n, || {
        let poly = cyclotomic_polynomial(n);
        let units = (1..=n).filter(|t| t.gcd(&n) == 1).map(|t| t % n).collect();
        Field {
            degree: poly.len() - 1,
            poly,
            units,
        }
    })
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    // x^n - 1
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = exact_divide(&poly, &field(d).poly);
        }
    }
    poly
}

fn exact_divide(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn reduce_mod(n: u32, mut full: Vec<BigRational>) -> Vec<BigRational> {
    let f = field(n);
    let deg = f.degree;
    if full.len() < deg {
        full.resize(deg, BigRational::zero());
        return full;
    }
    for k in (deg..full.len()).rev() {
        if full[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut full[k]);
        for (j, pj) in f.poly[..deg].iter().enumerate() {
            if !pj.is_zero() {
                full[k - deg + j] -= &c * BigRational::from_integer(pj.clone());
            }
        }
    }
    full.truncate(deg);
    full
}

fn prime_factors(mut n: u32) -> Vec<u32> {
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

fn subfield(l: u32, m: u32) -> Arc<Subfield> {
    cached(&SUBFIELDS, (l, m), || {
        let dl = field(l).degree;
        let dm = field(m).degree;
        let step = (l / m) as usize;
        let embed: Vec<Vec<BigRational>> = (0..dm)
            .map(|j| {
                let mut full = vec![BigRational::zero(); l as usize];
                full[(step * j) % l as usize] = BigRational::one();
                reduce_mod(l, full)
            })
            .collect();
        // Pick dm independent rows of the dl x dm matrix.
        let mut pivots = Vec::with_capacity(dm);
        let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
        for r in 0..dl {
            let mut row: Vec<BigRational> = (0..dm).map(|j| embed[j][r].clone()).collect();
            for (pc, b) in &basis {
                if !row[*pc].is_zero() {
                    let f = row[*pc].clone();
                    for (x, y) in row.iter_mut().zip(b) {
                        *x -= &f * y;
                    }
                }
            }
            if let Some(pc) = row.iter().position(|x| !x.is_zero()) {
                let inv = row[pc].recip();
                for x in row.iter_mut() {
                    *x *= &inv;
                }
                basis.push((pc, row));
                pivots.push(r);
                if pivots.len() == dm {
                    break;
                }
            }
        }
        let square: Vec<Vec<BigRational>> = pivots
            .iter()
            .map(|&r| (0..dm).map(|j| embed[j][r].clone()).collect())
            .collect();
        let inverse = invert_rational(square).expect("embedding has full column rank");
        Subfield {
            embed,
            pivots,
            inverse,
        }
    })
}

fn invert_rational(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let f = a[col][col].recip();
        for j in 0..n {
            a[col][j] *= &f;
            inv[col][j] *= &f;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Coordinates of `x ∈ Q(ζ_l)` in `Q(ζ_m)` if it lies there.
fn restrict(l: u32, m: u32, x: &[BigRational]) -> Option<Vec<BigRational>> {
    let sub = subfield(l, m);
    let y: Vec<BigRational> = sub
        .inverse
        .iter()
        .map(|row| {
            row.iter()
                .zip(&sub.pivots)
                .fold(BigRational::zero(), |acc, (a, &p)| acc + a * &x[p])
        })
        .collect();
    for (r, xr) in x.iter().enumerate() {
        let v = sub
            .embed
            .iter()
            .zip(&y)
            .fold(BigRational::zero(), |acc, (col, yj)| acc + &col[r] * yj);
        if &v != xr {
            return None;
        }
    }
    Some(y)
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl CycloNumber {
    fn from_reduced(conductor: u32, coeffs: Vec<BigRational>) -> Self {
        let mut n = conductor;
        let mut c = coeffs;
        if n > 1 && c[1..].iter().all(Zero::is_zero) {
            return CycloNumber {
                conductor: 1,
                coeffs: vec![c.swap_remove(0)],
            };
        }
        'outer: while n > 1 {
            for p in prime_factors(n) {
                let m = n / p;
                if let Some(y) = restrict(n, m, &c) {
                    n = m;
                    c = y;
                    continue 'outer;
                }
            }
            break;
        }
        CycloNumber {
            conductor: n,
            coeffs: c,
        }
    }

    fn from_full(conductor: u32, full: Vec<BigRational>) -> Self {
        Self::from_reduced(conductor, reduce_mod(conductor, full))
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        CycloNumber {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    /// `num/den` as an element of `Q`.
    pub fn from_fraction(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_rational(BigRational::new(num.into(), den.into())))
    }

    /// `ζ_n^k` in canonical form.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "root of unity of order 0");
        let k = k.rem_euclid(n as i64) as usize;
        let mut full = vec![BigRational::zero(); n as usize];
        full[k] = BigRational::one();
        Self::from_full(n, full)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coordinates at the current conductor.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    fn lift(&self, l: u32) -> Vec<BigRational> {
        if self.conductor == l {
            return self.coeffs.clone();
        }
        let step = (l / self.conductor) as usize;
        let mut full = vec![BigRational::zero(); l as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                full[i * step] = c.clone();
            }
        }
        reduce_mod(l, full)
    }

    fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        CycloNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        if other.is_rational() {
            let mut out = self.clone();
            if sign {
                out.coeffs[0] += &other.coeffs[0];
            } else {
                out.coeffs[0] -= &other.coeffs[0];
            }
            return out;
        }
        if self.is_rational() && sign {
            return other.combine(self, true);
        }
        let l = lcm(self.conductor, other.conductor);
        let mut a = self.lift(l);
        let b = other.lift(l);
        for (x, y) in a.iter_mut().zip(b) {
            if sign {
                *x += y;
            } else {
                *x -= y;
            }
        }
        Self::from_reduced(l, a)
    }

    fn raw_mul(l: u32, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut full = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    full[i + j] += x * y;
                }
            }
        }
        reduce_mod(l, full)
    }

    fn product(&self, other: &Self) -> Self {
        if other.is_rational() {
            return self.scale(&other.coeffs[0]);
        }
        if self.is_rational() {
            return other.scale(&self.coeffs[0]);
        }
        let l = lcm(self.conductor, other.conductor);
        let full = Self::raw_mul(l, &self.lift(l), &other.lift(l));
        Self::from_reduced(l, full)
    }

    /// Applies the Galois automorphism `ζ ↦ ζ^t`; `t` must be coprime to the conductor.
    pub fn galois(&self, t: i64) -> Self {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let t = t.rem_euclid(n as i64) as usize;
        assert_eq!(t.gcd(&(n as usize)), 1, "galois exponent not a unit");
        let mut full = vec![BigRational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(i * t) % n as usize] = c.clone();
        }
        // The image of a canonical value has the same conductor.
        let coeffs = reduce_mod(n, full);
        CycloNumber {
            conductor: n,
            coeffs,
        }
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        let n = self.conductor;
        let f = field(n);
        let mut prod: Vec<BigRational> = {
            let mut one = vec![BigRational::zero(); f.degree];
            one[0] = BigRational::one();
            one
        };
        for &t in &f.units {
            if t != 1 {
                let g = self.galois(t as i64);
                prod = Self::raw_mul(n, &prod, &g.coeffs);
            }
        }
        let norm = Self::raw_mul(n, &prod, &self.coeffs);
        debug_assert!(norm[1..].iter().all(Zero::is_zero));
        let scale = norm[0].recip();
        let coeffs = prod.into_iter().map(|c| c * &scale).collect();
        Ok(Self::from_reduced(n, coeffs))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Returns `k` with `self == ζ_n^k`, if any.
    pub fn root_exponent(&self, n: u32) -> Option<u32> {
        (0..n).find(|&k| Self::root_of_unity(n, k as i64) == *self)
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conductor == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sep = if first {
                if c.is_negative() {
                    "-"
                } else {
                    ""
                }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            first = false;
            let a = c.abs();
            let z = match i {
                0 => String::new(),
                1 => format!("z{}", self.conductor),
                _ => format!("z{}^{}", self.conductor, i),
            };
            match (i, a.is_one()) {
                (0, _) => write!(f, "{sep}{a}")?,
                (_, true) => write!(f, "{sep}{z}")?,
                (_, false) => write!(f, "{sep}{a}*{z}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for CycloNumber {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for CycloNumber {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&CycloNumber> for &CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: &CycloNumber) -> CycloNumber {
                let f: fn(&CycloNumber, &CycloNumber) -> CycloNumber = $body;
                f(self, rhs)
            }
        }
        impl $trait<CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $method(self, rhs: &CycloNumber) -> CycloNumber {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.combine(b, true));
binop!(Sub, sub, |a, b| a.combine(b, false));
binop!(Mul, mul, |a, b| a.product(b));

impl AddAssign<&CycloNumber> for CycloNumber {
    fn add_assign(&mut self, rhs: &CycloNumber) {
        *self = self.combine(rhs, true);
    }
}

impl SubAssign<&CycloNumber> for CycloNumber {
    fn sub_assign(&mut self, rhs: &CycloNumber) {
        *self = self.combine(rhs, false);
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl std::iter::Sum for CycloNumber {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for CycloNumber {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polynomials_match_known_values() {
        let to_i64 = |p: Vec<BigInt>| -> Vec<i64> {
            p.into_iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(to_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn small_roots_of_unity() {
        assert_eq!(CycloNumber::root_of_unity(2, 1), CycloNumber::from_integer(-1));
        assert_eq!(CycloNumber::root_of_unity(1, 0), CycloNumber::one());
        let i = CycloNumber::root_of_unity(4, 1);
        assert_eq!(&i * &i, CycloNumber::from_integer(-1));
        assert_eq!(i.conductor(), 4);
    }

    #[test]
    fn conjugation_and_inverse_pairs() {
        for n in [3u32, 4, 5, 8, 12] {
            for k in 0..n as i64 {
                let z = CycloNumber::root_of_unity(n, k);
                assert_eq!(z.conj(), CycloNumber::root_of_unity(n, n as i64 - k));
            }
        }
        let a = CycloNumber::root_of_unity(4, 1);
        let b = CycloNumber::root_of_unity(4, 3);
        assert_eq!(&a * &b, CycloNumber::one());
    }

    #[test]
    fn sum_of_cube_roots_vanishes() {
        // Oracle: 1 + x + x^2 is exactly Φ_3, so it reduces to 0 mod Φ_3.
        let phi3 = cyclotomic_polynomial(3);
        let direct = reduce_mod(3, phi3.iter().map(|c| BigRational::from_integer(c.clone())).collect());
        assert!(direct.iter().all(Zero::is_zero));
        let s = CycloNumber::one() + CycloNumber::root_of_unity(3, 1) + CycloNumber::root_of_unity(3, 2);
        assert!(s.is_zero());
    }

    #[test]
    fn conductor_shrinks_to_minimum() {
        // ζ_6 = -ζ_3^2 lives in Q(ζ_3).
        let z6 = CycloNumber::root_of_unity(6, 1);
        assert_eq!(z6.conductor(), 3);
        assert_eq!(z6, -CycloNumber::root_of_unity(3, 2));
        // ζ_8^2 = i.
        assert_eq!(CycloNumber::root_of_unity(8, 2), CycloNumber::root_of_unity(4, 1));
        // sqrt(2) = ζ_8 + ζ_8^7 stays at conductor 8.
        let s2 = CycloNumber::root_of_unity(8, 1) + CycloNumber::root_of_unity(8, 7);
        assert_eq!(s2.conductor(), 8);
        assert_eq!(&s2 * &s2, CycloNumber::from_integer(2));
        // i + (-i) drops to Q.
        let i = CycloNumber::root_of_unity(4, 1);
        assert_eq!((&i - &i).conductor(), 1);
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(CycloNumber::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn roots_have_exact_order() {
        for n in 1..=64u32 {
            for k in 0..n as i64 {
                let z = CycloNumber::root_of_unity(n, k);
                let expected = n / (k as u32).gcd(&n);
                let mut acc = z.clone();
                let mut order = 1;
                while !acc.is_one() {
                    acc = &acc * &z;
                    order += 1;
                    assert!(order <= n, "ζ_{n}^{k} has no order dividing {n}");
                }
                assert_eq!(order, expected, "ζ_{n}^{k}");
            }
        }
    }

    #[test]
    fn serde_round_trip_is_exact() {
        let x = CycloNumber::from_fraction(-3, 4).unwrap() + CycloNumber::root_of_unity(12, 5);
        let s = serde_json::to_string(&x).unwrap();
        let y: CycloNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(s, serde_json::to_string(&y).unwrap());
        let half: CycloNumber = serde_json::from_str(r#"{"conductor":1,"coeffs":["1/2"]}"#).unwrap();
        assert_eq!(half, CycloNumber::from_fraction(1, 2).unwrap());
        assert!(serde_json::from_str::<CycloNumber>(r#"{"conductor":4,"coeffs":["1"]}"#).is_err());
        assert!(serde_json::from_str::<CycloNumber>(r#"{"conductor":1,"coeffs":["0.5"]}"#).is_err());
    }

    fn arb_cyclo() -> impl Strategy<Value = CycloNumber> {
        let conductors = prop::sample::select(vec![1u32, 3, 4, 5, 8, 12]);
        (conductors, prop::collection::vec((-6i64..=6, 1i64..=4), 12)).prop_map(|(n, cs)| {
            let mut acc = CycloNumber::zero();
            for (k, (p, q)) in cs.into_iter().enumerate().take(n as usize) {
                let c = CycloNumber::from_fraction(p, q).unwrap();
                acc += &(c * CycloNumber::root_of_unity(n, k as i64));
            }
            acc
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn subtraction_is_canonical(a in arb_cyclo()) {
            let z = &a - &a;
            prop_assert_eq!(z.conductor(), 1);
            prop_assert!(z.coeffs().iter().all(Zero::is_zero));
        }

        #[test]
        fn conjugation_is_a_field_automorphism(a in arb_cyclo(), b in arb_cyclo()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!(a.conj().conj(), a);
        }
    }
}
