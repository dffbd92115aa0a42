//! Univariate rational polynomials and real-root isolation by Sturm sequences.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use super::rat::{format_rat, rat, sign, Rat};
use crate::error::{Error, Result};

/// Polynomial with rational coefficients, lowest degree first. Trailing zero
/// coefficients are always stripped, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rat(c),
                1 => format!("{}*t", format_rat(c)),
                _ => format!("{}*t^{i}", format_rat(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `a + b t`.
    pub fn linear(a: Rat, b: Rat) -> Self {
        Self::new(vec![a, b])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }

    pub fn sign_at(&self, t: &Rat) -> i8 {
        sign(&self.eval(t))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rat::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rat::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic version (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same real roots, all simple.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }
}

/// The Sturm chain `p, p', -rem(p, p'), ...` of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<QPoly>,
}

impl SturmSequence {
    pub fn new(p: &QPoly) -> Self {
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r.scale(&-Rat::one()));
            }
        }
        Self { chain }
    }

    /// Sign changes in the chain evaluated at `t`, zeros skipped.
    pub fn variations(&self, t: &Rat) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(t);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Rat, hi: &Rat) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Number of distinct real roots of `p` in `(lo, hi)`, by Sturm's theorem.
/// Endpoints must not be roots.
pub fn sturm_count(p: &QPoly, lo: &Rat, hi: &Rat) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(SturmSequence::new(&p.square_free()).count(lo, hi))
}

/// An open rational interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat(2)
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// Isolates the real roots of `p` in the open interval `(lo, hi)`.
///
/// Each returned interval contains exactly one root, its endpoints are not
/// roots, and the intervals are disjoint and sorted.
pub fn sturm_isolate(p: &QPoly, lo: &Rat, hi: &Rat) -> Result<Vec<Interval>> {
    Ok(isolate_roots(p, lo, hi)?.into_iter().map(|r| r.interval()).collect())
}

/// Like [`sturm_isolate`], but returns refinable [`RealRoot`]s.
pub fn isolate_roots(p: &QPoly, lo: &Rat, hi: &Rat) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(Error::InvalidInput("empty isolation interval".into()));
    }
    if p.sign_at(lo) == 0 || p.sign_at(hi) == 0 {
        return Err(Error::InvalidInput("root at an isolation endpoint".into()));
    }
    let q = p.square_free();
    let seq = SturmSequence::new(&q);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), seq.count(lo, hi))];
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push(RealRoot::isolated(q.clone(), a, b)),
            _ => {
                let m = split_point(&q, &a, &b);
                let left = seq.count(&a, &m);
                stack.push((m.clone(), b, n - left));
                stack.push((a, m, left));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// A point strictly inside `(a, b)` that is not a root of `q`.
fn split_point(q: &QPoly, a: &Rat, b: &Rat) -> Rat {
    let w = b - a;
    let mid = (a + b) / rat(2);
    if q.sign_at(&mid) != 0 {
        return mid;
    }
    let mut k = 3i64;
    loop {
        let cand = a + &w / rat(k);
        if q.sign_at(&cand) != 0 {
            return cand;
        }
        k += 1;
    }
}

/// A real root of a square-free polynomial, held by an isolating open interval
/// and, once a rational probe hits it, exactly.
#[derive(Debug, Clone)]
pub struct RealRoot {
    poly: QPoly,
    lo: Rat,
    hi: Rat,
    exact: Option<Rat>,
}

impl RealRoot {
    fn isolated(poly: QPoly, lo: Rat, hi: Rat) -> Self {
        let mut r = Self {
            poly,
            lo,
            hi,
            exact: None,
        };
        if r.poly.degree() == Some(1) {
            let c = r.poly.coeffs();
            r.pin(-&c[0] / &c[1]);
        }
        r
    }

    fn pin(&mut self, x: Rat) {
        let r = (&x - &self.lo).min(&self.hi - &x) / rat(2);
        self.lo = &x - &r;
        self.hi = &x + &r;
        self.exact = Some(x);
    }

    /// The square-free polynomial this is a root of.
    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn exact(&self) -> Option<&Rat> {
        self.exact.as_ref()
    }

    /// The current isolating interval; its endpoints are never roots of `poly`.
    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        }
    }

    /// Halves the isolating interval.
    pub fn bisect(&mut self) {
        let m = (&self.lo + &self.hi) / rat(2);
        if let Some(x) = &self.exact {
            let r = (&self.hi - x) / rat(2);
            self.lo = x - &r;
            self.hi = x + &r;
            return;
        }
        let sm = self.poly.sign_at(&m);
        if sm == 0 {
            self.pin(m);
        } else if sm == self.poly.sign_at(&self.lo) {
            self.lo = m;
        } else {
            self.hi = m;
        }
    }

    /// Bisects until the interval is narrower than `width`.
    pub fn refine_to(&mut self, width: &Rat) {
        while &(&self.hi - &self.lo) >= width {
            self.bisect();
        }
    }

    /// Whether `r` vanishes at this root.
    pub fn is_root_of(&self, r: &QPoly) -> bool {
        if r.is_zero() {
            return true;
        }
        if let Some(x) = &self.exact {
            return r.sign_at(x) == 0;
        }
        // The gcd divides the square-free `poly`, so its roots are simple and the
        // only candidate in (lo, hi) is this root.
        let g = self.poly.gcd(r);
        g.degree().unwrap_or(0) > 0 && g.sign_at(&self.lo) != g.sign_at(&self.hi)
    }

    /// Sign of `r` at this root, refining the interval as needed.
    pub fn sign_of(&mut self, r: &QPoly) -> i8 {
        if self.is_root_of(r) {
            return 0;
        }
        let seq = SturmSequence::new(&r.square_free());
        loop {
            if let Some(x) = &self.exact {
                return r.sign_at(x);
            }
            let sl = r.sign_at(&self.lo);
            if sl != 0 && sl == r.sign_at(&self.hi) && seq.count(&self.lo, &self.hi) == 0 {
                return sl;
            }
            self.bisect();
        }
    }

    /// Orders two roots; `Equal` only when they coincide exactly.
    pub fn compare(&mut self, other: &mut RealRoot) -> Ordering {
        let g = self.poly.gcd(&other.poly);
        loop {
            if let (Some(x), Some(y)) = (&self.exact, &other.exact) {
                return x.cmp(y);
            }
            let (a, b) = (self.interval(), other.interval());
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            // A root of the common factor inside the overlap is a root of both
            // polys in both isolating intervals, hence both roots.
            if g.degree().unwrap_or(0) > 0 {
                let lo = (&a.lo).max(&b.lo);
                let hi = (&a.hi).min(&b.hi);
                if SturmSequence::new(&g).count(lo, hi) > 0 {
                    return Ordering::Equal;
                }
            }
            if a.width() >= b.width() {
                self.bisect();
            } else {
                other.bisect();
            }
        }
    }

    /// A rational strictly between this root and a strictly larger `other`.
    pub fn separator(&mut self, other: &mut RealRoot) -> Rat {
        loop {
            let (a, b) = (self.interval(), other.interval());
            if a.hi <= b.lo {
                return (&a.hi + &b.lo) / rat(2);
            }
            if a.width() >= b.width() {
                self.bisect();
            } else {
                other.bisect();
            }
        }
    }
}
