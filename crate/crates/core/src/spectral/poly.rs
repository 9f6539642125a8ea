use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, coefficients from the constant term up, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<BigInt>);

/// The dyadic rational `num / 2^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub num: BigInt,
    pub exp: u32,
}

impl Dyadic {
    pub fn int(n: i64) -> Dyadic {
        Dyadic { num: BigInt::from(n), exp: 0 }
    }

    fn scaled(&self, exp: u32) -> BigInt {
        debug_assert!(exp >= self.exp);
        &self.num << (exp - self.exp)
    }

    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        let e = a.exp.max(b.exp);
        Dyadic { num: a.scaled(e) + b.scaled(e), exp: e + 1 }.reduced()
    }

    fn reduced(mut self) -> Dyadic {
        while self.exp > 0 && self.num.is_even() {
            self.num >>= 1;
            self.exp -= 1;
        }
        self
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.num.bits();
        if bits > 1000 {
            // keep the top bits only
            let shift = bits - 60;
            let n: BigInt = &self.num >> shift;
            return n.to_string().parse::<f64>().unwrap() * 2f64.powi(shift as i32 - self.exp as i32);
        }
        self.num.to_string().parse::<f64>().unwrap() / 2f64.powi(self.exp as i32)
    }

    /// `b - a` as an f64 upper bound.
    pub fn width(a: &Dyadic, b: &Dyadic) -> f64 {
        let e = a.exp.max(b.exp);
        let d = b.scaled(e) - a.scaled(e);
        Dyadic { num: d, exp: e }.to_f64()
    }

    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        let e = self.exp.max(other.exp);
        self.scaled(e).cmp(&other.scaled(e))
    }

    /// Decimal expansion truncated toward negative infinity to `digits` fraction digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let ten = BigInt::from(10);
        let scale = num_traits::pow(ten, digits);
        let scaled = (&self.num * &scale).div_floor(&(BigInt::one() << self.exp));
        let (q, r) = scaled.div_mod_floor(&scale);
        format!("{}.{:0>width$}", q, r.to_string(), width = digits)
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial has degree 0 here.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    /// `det(xI − M)` by Faddeev–LeVerrier in exact integer arithmetic.
    pub fn charpoly(m: &[Vec<u64>]) -> IntPoly {
        let n = m.len();
        let a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        let mut mk: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = vec![vec![BigInt::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut s = BigInt::zero();
                    for l in 0..n {
                        if !a[i][l].is_zero() && !mk[l][j].is_zero() {
                            s += &a[i][l] * &mk[l][j];
                        }
                    }
                    next[i][j] = s;
                }
                next[i][i] += &c[n - k + 1];
            }
            mk = next;
            // c_{n-k} = -tr(A M_k) / k
            let mut tr = BigInt::zero();
            for i in 0..n {
                for l in 0..n {
                    if !a[i][l].is_zero() && !mk[l][i].is_zero() {
                        tr += &a[i][l] * &mk[l][i];
                    }
                }
            }
            c[n - k] = -(tr / BigInt::from(k));
        }
        IntPoly::new(c)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly::new(self.0.iter().map(|c| c / &g).collect())
    }

    /// `lc(b)^(deg a − deg b + 1) · a mod b`.
    fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
        let mut r = a.0.clone();
        let db = b.degree();
        let lb = b.leading();
        let mut steps = (a.degree() + 1).saturating_sub(db);
        while !r.is_empty() && r.len() > db {
            steps -= 1;
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.0.iter().enumerate() {
                r[dr - db + i] -= &lr * bc;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        // A step can drop several degrees; make up the missing factors of lc(b).
        for _ in 0..steps {
            for c in r.iter_mut() {
                *c *= &lb;
            }
        }
        IntPoly::new(r)
    }

    pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
        let (mut x, mut y) = (a.primitive(), b.primitive());
        if x.degree() < y.degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let r = IntPoly::pseudo_rem(&x, &y).primitive();
            x = y;
            y = r;
        }
        x.primitive()
    }

    /// Exact quotient over the integers, if `d` divides `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        let mut r = self.0.clone();
        let dd = d.degree();
        let ld = d.leading();
        if r.len() < d.0.len() {
            return if r.is_empty() { Some(IntPoly::new(vec![])) } else { None };
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let (qk, rem) = r[k + dd].div_rem(&ld);
            if !rem.is_zero() {
                return None;
            }
            for (i, dc) in d.0.iter().enumerate() {
                r[k + i] -= &qk * dc;
            }
            q[k] = qk;
        }
        r.iter().all(|c| c.is_zero()).then(|| IntPoly::new(q))
    }

    pub fn squarefree(&self) -> IntPoly {
        let g = IntPoly::gcd(self, &self.derivative());
        if g.degree() == 0 {
            return self.primitive();
        }
        self.div_exact(&g).expect("gcd divides").primitive()
    }

    /// Sign of the value at a dyadic point.
    pub fn sign_at(&self, x: &Dyadic) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let n = self.degree();
        let mut acc = self.0[n].clone();
        for i in (0..n).rev() {
            acc = acc * &x.num + (&self.0[i] << (x.exp as usize * (n - i)));
        }
        acc.sign_cmp()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_string().parse::<f64>().unwrap())
    }

    /// Sturm chain of a squarefree polynomial.
    pub fn sturm_chain(&self) -> Vec<IntPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.degree() == 0 {
                break;
            }
            let mut r = IntPoly::pseudo_rem(a, b);
            if r.is_zero() {
                break;
            }
            // Keep the sign of the true remainder, then negate.
            let lb = b.leading();
            let power = a.degree() - b.degree() + 1;
            let flip = lb.is_negative() && power % 2 == 1;
            let c = r.content();
            r = IntPoly::new(r.0.iter().map(|x| x / &c).collect());
            if !flip {
                r = IntPoly::new(r.0.iter().map(|x| -x).collect());
            }
            chain.push(r);
        }
        chain
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.to_string().parse::<f64>().unwrap()).collect()
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_negative() {
            Ordering::Less
        } else if self.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    }
}

/// Sign variations of a Sturm chain at `x`, zeros skipped.
pub fn variations(chain: &[IntPoly], x: &Dyadic) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for p in chain {
        let s = p.sign_at(x);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(chain: &[IntPoly], a: &Dyadic, b: &Dyadic) -> usize {
    variations(chain, a).saturating_sub(variations(chain, b))
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.0.len()).rev() {
            let c = &self.0[i];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !mag.is_one() || i == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_example_matrix() {
        let m = vec![vec![0, 0, 0, 1], vec![1, 0, 0, 2], vec![0, 1, 0, 2], vec![0, 0, 1, 2]];
        assert_eq!(IntPoly::charpoly(&m), IntPoly::from_i64(&[-1, -2, -2, -2, 1]));
        assert_eq!(IntPoly::charpoly(&m).to_string(), "x^4 - 2x^3 - 2x^2 - 2x - 1");
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = IntPoly::from_i64(&[2, -3, 0, 1]);
        assert_eq!(p.squarefree(), IntPoly::from_i64(&[-2, 1, 1]));
        let q = IntPoly::from_i64(&[-1, 1]);
        assert_eq!(IntPoly::gcd(&p, &q), q);
        assert_eq!(p.div_exact(&q).unwrap(), IntPoly::from_i64(&[-2, 1, 1]));
        assert!(p.div_exact(&IntPoly::from_i64(&[3, 1])).is_none());
    }

    #[test]
    fn sturm_counts_roots() {
        // (x-1)(x-2)(x+3)
        let p = IntPoly::from_i64(&[6, -7, 0, 1]);
        let chain = p.sturm_chain();
        assert_eq!(count_roots(&chain, &Dyadic::int(-10), &Dyadic::int(10)), 3);
        assert_eq!(count_roots(&chain, &Dyadic::int(0), &Dyadic::int(10)), 2);
        assert_eq!(count_roots(&chain, &Dyadic::int(1), &Dyadic::int(2)), 1);
        assert_eq!(count_roots(&chain, &Dyadic::int(-3), &Dyadic::int(0)), 0);
    }

    #[test]
    fn dyadic_decimal() {
        let d = Dyadic { num: BigInt::from(5), exp: 2 };
        assert_eq!(d.to_decimal(3), "1.250");
    }

    #[test]
    fn sturm_count_with_negative_leading_terms() {
        // (x^4 - 1)(x^2 - 4)
        let p = IntPoly::from_i64(&[4, 0, -1, 0, -4, 0, 1]);
        let chain = p.squarefree().sturm_chain();
        assert_eq!(count_roots(&chain, &Dyadic::int(-10), &Dyadic::int(10)), 4);
        assert_eq!(count_roots(&chain, &Dyadic::int(0), &Dyadic::int(3)), 2);
    }
}
