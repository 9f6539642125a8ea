use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

use super::poly::{count_roots, Dyadic, IntPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("matrix is empty")]
    Empty,
}

/// Bisection target: 2^-42 < 1e-12.
const WIDTH_EXP: u32 = 42;

/// An exact handle on the Perron–Frobenius eigenvalue: the largest real root of
/// `poly`, isolated in the half-open interval `(lo, hi]`.
#[derive(Debug, Clone)]
pub struct PfValue {
    poly: IntPoly,
    chain: Vec<IntPoly>,
    lo: Dyadic,
    hi: Dyadic,
    charpoly: IntPoly,
}

pub fn is_irreducible(m: &[Vec<u64>]) -> bool {
    let n = m.len();
    if n == 0 {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let w = if forward { m[j][i] } else { m[i][j] };
                if w > 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Irreducible and the gcd of cycle lengths is 1.
pub fn is_aperiodic(m: &[Vec<u64>]) -> bool {
    if !is_irreducible(m) {
        return false;
    }
    // BFS levels from 0; the period is gcd over edges i→j of level(i)+1−level(j).
    let n = m.len();
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if m[j][i] > 0 && level[j] == usize::MAX {
                level[j] = level[i] + 1;
                queue.push_back(j);
            }
        }
    }
    let mut g = 0usize;
    for i in 0..n {
        for j in 0..n {
            if m[j][i] > 0 {
                let d = (level[i] + 1).abs_diff(level[j]);
                g = num_integer::gcd(g, d);
            }
        }
    }
    g == 1
}

pub fn row_sums(m: &[Vec<u64>]) -> Vec<u64> {
    m.iter().map(|r| r.iter().sum()).collect()
}

impl PfValue {
    pub fn of_matrix(m: &[Vec<u64>]) -> Result<PfValue, SpectralError> {
        if m.is_empty() {
            return Err(SpectralError::Empty);
        }
        if !is_irreducible(m) {
            return Err(SpectralError::NotIrreducible);
        }
        let sums = row_sums(m);
        let lo = *sums.iter().min().unwrap() as i64;
        let hi = *sums.iter().max().unwrap() as i64;
        let charpoly = IntPoly::charpoly(m);
        // Rational roots of a monic integer polynomial are integers, so
        // half-integer endpoints are never roots.
        let half = |n: i64| Dyadic { num: BigInt::from(2 * n + 1), exp: 1 };
        Ok(PfValue::isolate(charpoly, half(lo - 1), half(hi)))
    }

    /// Largest real root of `p` given that it lies in `(lo, hi)` and no root exceeds `hi`.
    /// Neither endpoint may be a root.
    pub fn largest_root(charpoly: IntPoly, lo: i64, hi: i64) -> PfValue {
        PfValue::isolate(charpoly, Dyadic::int(lo), Dyadic::int(hi))
    }

    fn isolate(charpoly: IntPoly, lo: Dyadic, hi: Dyadic) -> PfValue {
        let poly = charpoly.squarefree();
        let chain = poly.sturm_chain();
        let mut v = PfValue { poly, chain, lo, hi, charpoly };
        assert!(count_roots(&v.chain, &v.lo, &v.hi) >= 1, "no root of {} in the row-sum bracket", v.charpoly);
        while count_roots(&v.chain, &v.lo, &v.hi) > 1 {
            v.bisect();
        }
        v.refine_to(WIDTH_EXP);
        v
    }

    fn bisect(&mut self) {
        let mid = Dyadic::midpoint(&self.lo, &self.hi);
        if count_roots(&self.chain, &mid, &self.hi) >= 1 {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    fn width_below(&self, exp: u32) -> bool {
        let e = self.lo.exp.max(self.hi.exp).max(exp);
        let lo = &self.lo.num << (e - self.lo.exp);
        let hi = &self.hi.num << (e - self.hi.exp);
        (hi - lo) <= (BigInt::one() << (e - exp))
    }

    fn refine_to(&mut self, exp: u32) {
        while !self.width_below(exp) {
            self.bisect();
        }
    }

    /// Squarefree polynomial of which λ is the largest real root.
    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn charpoly(&self) -> &IntPoly {
        &self.charpoly
    }

    pub fn interval(&self) -> (&Dyadic, &Dyadic) {
        (&self.lo, &self.hi)
    }

    pub fn value(&self) -> f64 {
        Dyadic::midpoint(&self.lo, &self.hi).to_f64()
    }

    /// λ = 1 exactly.
    pub fn is_one(&self) -> bool {
        self.cmp_exact(&PfValue::one()) == Ordering::Equal
    }

    pub fn one() -> PfValue {
        PfValue::largest_root(IntPoly::from_i64(&[-1, 1]), 0, 2)
    }

    /// Exact comparison of two algebraic numbers given by isolating data.
    pub fn cmp_exact(&self, other: &PfValue) -> Ordering {
        let mut a = self.clone();
        let mut b = other.clone();
        let g = IntPoly::gcd(&a.poly, &b.poly);
        let may_be_equal = g.degree() > 0;
        let g_chain = if may_be_equal { g.sturm_chain() } else { Vec::new() };
        loop {
            // a ≤ a.hi ≤ b.lo < b
            if a.hi.cmp_value(&b.lo) != Ordering::Greater {
                return Ordering::Less;
            }
            if b.hi.cmp_value(&a.lo) != Ordering::Greater {
                return Ordering::Greater;
            }
            if may_be_equal {
                let lo = if a.lo.cmp_value(&b.lo) == Ordering::Greater { a.lo.clone() } else { b.lo.clone() };
                let hi = if a.hi.cmp_value(&b.hi) == Ordering::Less { a.hi.clone() } else { b.hi.clone() };
                if lo.cmp_value(&hi) == Ordering::Less && count_roots(&g_chain, &lo, &hi) >= 1 {
                    return Ordering::Equal;
                }
            }
            a.bisect();
            b.bisect();
        }
    }

    /// Decimal string with `digits` significant digits (truncated).
    pub fn to_decimal(&self, digits: usize) -> String {
        let mut v = self.clone();
        let int_digits = (v.value().abs().max(1.0).log10().floor() as usize) + 1;
        let frac = digits.saturating_sub(int_digits);
        let bits = ((frac as f64 + 3.0) * std::f64::consts::LOG2_10).ceil() as u32;
        v.refine_to(bits);
        // If the interval straddles a digit boundary, report the upper end.
        v.hi.to_decimal(frac)
    }

    /// The minimal polynomial of λ over the rationals (primitive, positive leading
    /// coefficient), found by grouping numeric roots of the squarefree polynomial
    /// into candidate factors and verifying each candidate by exact division.
    pub fn minimal_polynomial(&self) -> IntPoly {
        minimal_factor(&self.poly, self.value())
    }
}

impl PartialEq for PfValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl fmt::Display for PfValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

/// All complex roots by the Aberth–Ehrlich iteration.
pub fn complex_roots(p: &IntPoly) -> Vec<Complex64> {
    let c = p.to_f64_coeffs();
    let n = p.degree();
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    let eval = |x: Complex64| {
        let mut v = Complex64::zero();
        let mut d = Complex64::zero();
        for k in (0..=n).rev() {
            d = d * x + v;
            v = v * x + monic[k];
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::one() / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::one() - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn product_poly(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::one()];
    for r in roots {
        let mut next = vec![Complex64::zero(); c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i + 1] += x;
            next[i] -= x * r;
        }
        c = next;
    }
    c
}

/// Smallest factor of the squarefree `p` (up to a size-cap on the search) having
/// the real root near `lambda`.
pub fn minimal_factor(p: &IntPoly, lambda: f64) -> IntPoly {
    let p = p.primitive();
    let n = p.degree();
    if n <= 1 {
        return p;
    }
    let roots = complex_roots(&p);
    let li = (0..n).min_by(|&a, &b| {
        (roots[a] - lambda).norm().partial_cmp(&(roots[b] - lambda).norm()).unwrap()
    });
    let Some(li) = li else { return p };
    let others: Vec<usize> = (0..n).filter(|&i| i != li).collect();
    let lc = p.leading().to_string().parse::<f64>().unwrap_or(1.0);
    let mut budget = 200_000usize;
    for size in 0..others.len() {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            budget = budget.saturating_sub(1);
            if budget == 0 {
                return p;
            }
            let mut sel = vec![roots[li]];
            sel.extend(combo.iter().map(|&k| roots[others[k]]));
            let prod = product_poly(&sel);
            // Leading coefficient of a true factor divides lc; try scaling by its divisors lazily.
            for scale in scales(lc) {
                let coeffs: Option<Vec<BigInt>> = prod
                    .iter()
                    .map(|c| {
                        let x = c.re * scale;
                        let r = x.round();
                        ((x - r).abs() < 1e-6 * (1.0 + x.abs()) && c.im.abs() * scale < 1e-6 * (1.0 + x.abs()))
                            .then(|| BigInt::from(r as i64))
                    })
                    .collect();
                if let Some(coeffs) = coeffs {
                    let cand = IntPoly::new(coeffs);
                    if p.div_exact(&cand).is_some() {
                        return cand.primitive();
                    }
                }
            }
            if !next_combo(&mut combo, others.len()) {
                break;
            }
        }
    }
    p
}

fn scales(lc: f64) -> Vec<f64> {
    let l = lc.abs().round() as u64;
    (1..=l.max(1)).filter(|d| l == 0 || l.is_multiple_of(*d)).map(|d| d as f64).collect()
}

fn next_combo(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Right Perron eigenvector by power iteration on `M + I`, normalized to sum 1.
pub fn pf_eigenvector(m: &[Vec<u64>]) -> Vec<f64> {
    let n = m.len();
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..10_000 {
        let mut w: Vec<f64> = (0..n).map(|i| v[i] + (0..n).map(|j| m[i][j] as f64 * v[j]).sum::<f64>()).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let diff = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = w;
        if diff < 1e-15 {
            break;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> Vec<Vec<u64>> {
        vec![vec![0, 0, 0, 1], vec![1, 0, 0, 2], vec![0, 1, 0, 2], vec![0, 0, 1, 2]]
    }

    #[test]
    fn example_eigenvalue() {
        let v = PfValue::of_matrix(&ex1()).unwrap();
        assert!((v.value() - 2.948).abs() < 1e-3);
        assert_eq!(v.minimal_polynomial(), IntPoly::from_i64(&[-1, -2, -2, -2, 1]));
    }

    #[test]
    fn permutation_has_eigenvalue_one() {
        let m = vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
        let v = PfValue::of_matrix(&m).unwrap();
        assert!(v.is_one());
        assert_eq!(v.minimal_polynomial(), IntPoly::from_i64(&[-1, 1]));
        assert!(!is_aperiodic(&m));
    }

    #[test]
    fn reducible_matrix_is_rejected() {
        let m = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(PfValue::of_matrix(&m).unwrap_err(), SpectralError::NotIrreducible);
    }

    #[test]
    fn exact_comparisons() {
        let a = PfValue::of_matrix(&[vec![1, 1], vec![1, 0]]).unwrap(); // golden ratio
        let b = PfValue::of_matrix(&[vec![0, 1, 1], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let c = PfValue::of_matrix(&[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(a.cmp_exact(&c), Ordering::Equal);
        assert_eq!(a.cmp_exact(&b), (a.value().partial_cmp(&b.value())).unwrap());
        let two = PfValue::of_matrix(&[vec![2]]).unwrap();
        assert_eq!(two.to_decimal(5), "2.0000");
        assert_eq!(a.cmp_exact(&two), Ordering::Less);
    }

    #[test]
    fn minimal_polynomial_splits_products() {
        // block diagonal: golden ratio block and a 2-cycle; charpoly (x^2-x-1)(x^2-1)
        let m = vec![vec![1, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]];
        let v = PfValue::largest_root(IntPoly::charpoly(&m), -1, 3);
        assert_eq!(v.minimal_polynomial(), IntPoly::from_i64(&[-1, -1, 1]));
    }

    #[test]
    fn singular_matrix_with_root_at_bracket_end() {
        // row sums 2, 1, 2; charpoly x(x^2-x-1) vanishes at min row sum - 1
        let m = vec![vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 0]];
        let v = PfValue::of_matrix(&m).unwrap();
        assert_eq!(v.minimal_polynomial(), IntPoly::from_i64(&[-1, -1, 1]));
    }
}
