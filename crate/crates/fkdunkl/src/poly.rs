//! Exact multivariate polynomials and rational scalars over ℚ.
//!
//! [`MPoly`] is a sparse multivariate polynomial with `BigRational`
//! coefficients in deg-lex order (total degree first, then lexicographic
//! with x₀ > x₁ > …). It supports the exact operations the algebra engine
//! needs: ring arithmetic, signed variable permutation (reflection twists),
//! exact evaluation, and decisive exact division by a linear form (division
//! by a single divisor has a unique remainder, so a zero remainder is a
//! divisibility certificate and a nonzero one a disproof).
//!
//! [`RatFun`] is an exact rational scalar whose denominator is kept as a
//! multiset of normalized irreducible linear forms. Cancellation divides the
//! numerator by denominator factors while possible; since nonconstant linear
//! forms are irreducible, the result is a canonical coprime
//! numerator/denominator pair with a positively normalized denominator.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational scalar type.
pub type Q = BigRational;

/// Convenience constructor n/d.
pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for integers.
pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Monomial: exponent vector with deg-lex ordering (x₀ > x₁ > …).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mono(pub Box<[u16]>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(alloc::vec![0u16; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = alloc::vec![0u16; nvars];
        e[i] = 1;
        Mono(e.into_boxed_slice())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect::<Vec<_>>()
                .into_boxed_slice(),
        )
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {
                // Lexicographic with earlier variables more significant:
                // a monomial with a higher exponent on an earlier variable
                // is larger.
                for (a, b) in self.0.iter().zip(other.0.iter()) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            ord => ord,
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over ℚ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Mono, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = MPoly::zero(nvars);
        p.insert(Mono::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = MPoly::zero(nvars);
        p.insert(Mono::var(nvars, i), Q::one());
        p
    }

    /// Linear form Σ cᵢ xᵢ + c₀.
    pub fn linear(nvars: usize, coeffs: &[Q], constant: Q) -> Self {
        assert_eq!(coeffs.len(), nvars);
        let mut p = MPoly::zero(nvars);
        for (i, c) in coeffs.iter().enumerate() {
            p.insert(Mono::var(nvars, i), c.clone());
        }
        p.insert(Mono::one(nvars), constant);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        assert_eq!(m.0.len(), self.nvars);
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Leading (monomial, coefficient) in deg-lex order.
    pub fn leading(&self) -> Option<(&Mono, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut out = MPoly::zero(self.nvars);
        for (m, k) in &self.terms {
            out.terms.insert(m.clone(), k * c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut out = MPoly::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Signed variable substitution xᵢ ↦ sign·x_{target}: `images[i] =
    /// (target, sign)`. Covers reflection twists for type A (permutations)
    /// and B (signed permutations).
    pub fn subst_signed_perm(&self, images: &[(usize, i8)]) -> MPoly {
        assert_eq!(images.len(), self.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = alloc::vec![0u16; self.nvars];
            let mut sign = 1i8;
            for (i, &exp) in m.0.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let (t, s) = images[i];
                e[t] += exp;
                if s < 0 && exp % 2 == 1 {
                    sign = -sign;
                }
            }
            let coeff = if sign < 0 { -c.clone() } else { c.clone() };
            out.insert(Mono(e.into_boxed_slice()), coeff);
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval_q(&self, x: &[Q]) -> Q {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &x[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Numeric evaluation at a complex point.
    pub fn eval_c(&self, x: &[Complex64]) -> Complex64 {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Complex64::zero();
        for (m, c) in &self.terms {
            let mut t = Complex64::new(q_to_f64(c), 0.0);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= x[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact division by a (nonconstant) linear form Σ cᵢxᵢ + c₀.
    /// Returns the quotient iff the division is exact. Single-divisor
    /// multivariate division is decisive: `None` proves non-divisibility.
    pub fn div_exact_linear(&self, coeffs: &[Q], constant: &Q) -> Option<MPoly> {
        assert_eq!(coeffs.len(), self.nvars);
        let p = coeffs.iter().position(|c| !c.is_zero())?;
        let cp = coeffs[p].clone();
        let mut r = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((lm, lc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.0[p] == 0 {
                return None;
            }
            let mut e = lm.0.to_vec();
            e[p] -= 1;
            let qm = Mono(e.into_boxed_slice());
            let qc = lc / &cp;
            // r -= qc·x^qm · ℓ
            for (i, ci) in coeffs.iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                let mut me = qm.0.to_vec();
                me[i] += 1;
                r.insert(Mono(me.into_boxed_slice()), -(&qc * ci));
            }
            if !constant.is_zero() {
                r.insert(qm.clone(), -(&qc * constant));
            }
            quot.insert(qm, qc);
        }
        Some(quot)
    }

    /// Render for diagnostics, variables named by `names`.
    pub fn render(&self, names: &[&str]) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                s.push_str(" + ");
            }
            let _ = write!(s, "({c})");
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let _ = write!(s, "*{}^{}", names.get(i).unwrap_or(&"?"), e);
                }
            }
        }
        s
    }
}

/// Rational → f64 (used only for numeric cross-checks, never for verdicts
/// on exact backends).
pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Extremely large numerator/denominator: fall back to a quotient of
        // leading approximations.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Elementary symmetric polynomial e_k of the listed variables.
pub fn elementary_symmetric(nvars: usize, vars: &[usize], k: usize) -> MPoly {
    if k > vars.len() {
        return MPoly::zero(nvars);
    }
    // Dynamic programming over the variable list: e_k(S ∪ {v}) =
    // e_k(S) + x_v e_{k−1}(S).
    let mut e: Vec<MPoly> = (0..=k)
        .map(|j| {
            if j == 0 {
                MPoly::one(nvars)
            } else {
                MPoly::zero(nvars)
            }
        })
        .collect();
    for &v in vars {
        let xv = MPoly::var(nvars, v);
        for j in (1..=k).rev() {
            e[j] = e[j].add(&e[j - 1].mul(&xv));
        }
    }
    e.pop().unwrap()
}

/// A normalized irreducible linear form: integer coefficients and constant
/// with content 1 and positive leading (first nonzero) coefficient.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct LinForm {
    pub coeffs: Box<[i64]>,
    pub constant: i64,
}

impl LinForm {
    /// Normalize an integer linear form; returns the normalized form and the
    /// rational multiplier μ such that input = μ · normalized.
    pub fn normalize(coeffs: &[i64], constant: i64) -> (LinForm, Q) {
        assert!(
            coeffs.iter().any(|&c| c != 0),
            "linear form must be nonconstant"
        );
        let mut g: i64 = 0;
        for &c in coeffs.iter().chain(core::iter::once(&constant)) {
            g = gcd_i64(g, c);
        }
        let g = g.max(1);
        let lead = *coeffs.iter().find(|&&c| c != 0).unwrap();
        let s = if lead < 0 { -1 } else { 1 };
        let div = g * s;
        let lf = LinForm {
            coeffs: coeffs.iter().map(|&c| c / div).collect(),
            constant: constant / div,
        };
        (lf, qi(div))
    }

    pub fn to_poly(&self, nvars: usize) -> MPoly {
        assert_eq!(self.coeffs.len(), nvars);
        MPoly::linear(
            nvars,
            &self.coeffs.iter().map(|&c| qi(c)).collect::<Vec<_>>(),
            qi(self.constant),
        )
    }

    pub fn coeffs_q(&self) -> Vec<Q> {
        self.coeffs.iter().map(|&c| qi(c)).collect()
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact rational scalar: numerator polynomial over a denominator kept as a
/// multiset of normalized irreducible linear forms. After [`RatFun::cancel`]
/// the pair is canonical and coprime.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFun {
    pub num: MPoly,
    /// factor → multiplicity; empty map means denominator 1.
    pub den: BTreeMap<LinForm, u32>,
}

impl RatFun {
    pub fn from_poly(p: MPoly) -> Self {
        RatFun {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        RatFun::from_poly(MPoly::constant(nvars, c))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// num / (single linear form): builds the quotient and cancels.
    pub fn over_linear(num: MPoly, coeffs: &[i64], constant: i64) -> Self {
        let (lf, mu) = LinForm::normalize(coeffs, constant);
        let mut den = BTreeMap::new();
        den.insert(lf, 1);
        let mut r = RatFun {
            num: num.scale(&mu.recip()),
            den,
        };
        r.cancel();
        r
    }

    /// Remove denominator factors that divide the numerator.
    pub fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let factors: Vec<LinForm> = self.den.keys().cloned().collect();
        for f in factors {
            let coeffs = f.coeffs_q();
            let c0 = qi(f.constant);
            while *self.den.get(&f).unwrap_or(&0) > 0 {
                match self.num.div_exact_linear(&coeffs, &c0) {
                    Some(quo) => {
                        self.num = quo;
                        let m = self.den.get_mut(&f).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            self.den.remove(&f);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    fn den_poly(&self, nvars: usize) -> MPoly {
        let mut d = MPoly::one(nvars);
        for (f, &m) in &self.den {
            let fp = f.to_poly(nvars);
            for _ in 0..m {
                d = d.mul(&fp);
            }
        }
        d
    }

    /// The denominator as a polynomial (normalized, positive leading
    /// coefficient by construction).
    pub fn den_as_poly(&self) -> MPoly {
        self.den_poly(self.nvars())
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> RatFun {
        if c.is_zero() {
            return RatFun::from_poly(MPoly::zero(self.nvars()));
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            *den.entry(f.clone()).or_insert(0) += m;
        }
        let mut r = RatFun {
            num: self.num.mul(&other.num),
            den,
        };
        r.cancel();
        r
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        let nvars = self.nvars();
        assert_eq!(nvars, other.nvars());
        // Common denominator: per-factor maximum multiplicity.
        let mut den: BTreeMap<LinForm, u32> = self.den.clone();
        for (f, &m) in &other.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let scale_to = |part: &RatFun| -> MPoly {
            let mut n = part.num.clone();
            for (f, &m) in &den {
                let have = *part.den.get(f).unwrap_or(&0);
                let fp = f.to_poly(nvars);
                for _ in have..m {
                    n = n.mul(&fp);
                }
            }
            n
        };
        let mut r = RatFun {
            num: scale_to(self).add(&scale_to(other)),
            den,
        };
        r.cancel();
        r
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    /// Twist by a signed variable permutation: both numerator and the
    /// denominator factors are substituted (factors renormalized).
    pub fn subst_signed_perm(&self, images: &[(usize, i8)]) -> RatFun {
        let nvars = self.nvars();
        let mut num = self.num.subst_signed_perm(images);
        let mut den = BTreeMap::new();
        for (f, &m) in &self.den {
            let mut c = alloc::vec![0i64; nvars];
            for (i, &ci) in f.coeffs.iter().enumerate() {
                let (t, s) = images[i];
                c[t] += ci * s as i64;
            }
            let (nf, mu) = LinForm::normalize(&c, f.constant);
            // f ↦ μ·nf, so 1/f^m contributes μ^{−m} to the numerator scale.
            let mut muinv = Q::one();
            for _ in 0..m {
                muinv /= &mu;
            }
            num = num.scale(&muinv);
            *den.entry(nf).or_insert(0) += m;
        }
        let mut r = RatFun { num, den };
        r.cancel();
        r
    }

    /// Exact evaluation; `None` when the denominator vanishes at the point.
    pub fn eval_q(&self, x: &[Q]) -> Option<Q> {
        let d = self.den_poly(self.nvars()).eval_q(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_q(x) / d)
    }

    /// Numeric evaluation.
    pub fn eval_c(&self, x: &[Complex64]) -> Complex64 {
        self.num.eval_c(x) / self.den_poly(self.nvars()).eval_c(x)
    }
}

/// Draw a rational point with pairwise-distinct coordinates (and distinct
/// from a given extra list of linear-form zero loci), for exact sampling.
pub fn distinct_rational_point(
    rng: &mut crate::rng::Rng,
    nvars: usize,
    avoid: &[LinForm],
) -> Vec<Q> {
    'outer: loop {
        let pt: Vec<Q> = (0..nvars)
            .map(|_| {
                let (n, d) = rng.small_rational();
                q(n, d)
            })
            .collect();
        for i in 0..nvars {
            for j in (i + 1)..nvars {
                if pt[i] == pt[j] {
                    continue 'outer;
                }
            }
        }
        for f in avoid {
            let v = f.to_poly(nvars).eval_q(&pt);
            if v.is_zero() {
                continue 'outer;
            }
        }
        return pt;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn vars3() -> (MPoly, MPoly, MPoly) {
        (MPoly::var(3, 0), MPoly::var(3, 1), MPoly::var(3, 2))
    }

    #[test]
    fn ring_axioms_spot_check() {
        let (x, y, z) = vars3();
        let p = x.add(&y.scale(&qi(2))).mul(&z.sub(&x));
        let q_ = z.sub(&x).mul(&x.add(&y.scale(&qi(2))));
        assert_eq!(p, q_, "commutativity");
        let lhs = x.add(&y).pow(2);
        let rhs = x.pow(2).add(&x.mul(&y).scale(&qi(2))).add(&y.pow(2));
        assert_eq!(lhs, rhs, "binomial");
    }

    #[test]
    fn deglex_order() {
        // x² > xy > y² > x > y > 1 with x = x₀, y = x₁.
        let m = |a: u16, b: u16| Mono(alloc::vec![a, b].into_boxed_slice());
        assert!(m(2, 0) > m(1, 1));
        assert!(m(1, 1) > m(0, 2));
        assert!(m(0, 2) > m(1, 0));
        assert!(m(1, 0) > m(0, 1));
        assert!(m(0, 1) > m(0, 0));
    }

    #[test]
    fn division_is_decisive() {
        let (x, y, _) = vars3();
        // (x−y)·(x+2y) / (x−y) = x+2y
        let f = x.sub(&y).mul(&x.add(&y.scale(&qi(2))));
        let quo = f
            .div_exact_linear(&[qi(1), qi(-1), qi(0)], &Q::zero())
            .expect("divisible");
        assert_eq!(quo, x.add(&y.scale(&qi(2))));
        // x² + y is not divisible by x − y
        let g = x.pow(2).add(&y);
        assert!(g.div_exact_linear(&[qi(1), qi(-1), qi(0)], &Q::zero()).is_none());
        // Division with constant term: (x+1)(y−2)/(x+1)
        let h = x.add(&MPoly::one(3)).mul(&y.sub(&MPoly::constant(3, qi(2))));
        let quo2 = h
            .div_exact_linear(&[qi(1), qi(0), qi(0)], &Q::one())
            .expect("divisible");
        assert_eq!(quo2, y.sub(&MPoly::constant(3, qi(2))));
    }

    #[test]
    fn signed_perm_subst() {
        let (x, y, z) = vars3();
        // swap x,y with a sign flip on z: p(x,y,z) = x²y − z³
        let p = x.pow(2).mul(&y).sub(&z.pow(3));
        let images = [(1usize, 1i8), (0, 1), (2, -1)];
        let twisted = p.subst_signed_perm(&images);
        // ↦ y²x + z³
        let expect = y.pow(2).mul(&x).add(&z.pow(3));
        assert_eq!(twisted, expect);
        // Involution back.
        assert_eq!(twisted.subst_signed_perm(&images), p);
    }

    #[test]
    fn eval_matches_structure() {
        let (x, y, z) = vars3();
        let p = x.mul(&y).sub(&z.pow(2)).add(&MPoly::constant(3, q(1, 2)));
        let pt = [q(1, 3), q(-2, 1), q(3, 4)];
        let v = p.eval_q(&pt);
        // (1/3)(−2) − 9/16 + 1/2 = −2/3 − 9/16 + 1/2 = (−32 − 27 + 24)/48
        assert_eq!(v, q(-35, 48));
    }

    #[test]
    fn elementary_symmetric_expansion() {
        let e2 = elementary_symmetric(3, &[0, 1, 2], 2);
        let (x, y, z) = vars3();
        let expect = x.mul(&y).add(&y.mul(&z)).add(&x.mul(&z));
        assert_eq!(e2, expect);
        assert_eq!(elementary_symmetric(3, &[0, 1, 2], 0), MPoly::one(3));
        assert!(elementary_symmetric(3, &[0, 1], 3).is_zero());
    }

    #[test]
    fn ratfun_cancellation_and_canonicality() {
        let (x, y, _) = vars3();
        // (x² − y²)/(x − y) cancels to x + y.
        let r = RatFun::over_linear(x.pow(2).sub(&y.pow(2)), &[1, -1, 0], 0);
        assert!(r.den.is_empty());
        assert_eq!(r.num, x.add(&y));
        // 1/(x−y) + 1/(y−x) = 0, despite differently-signed inputs.
        let a = RatFun::over_linear(MPoly::one(3), &[1, -1, 0], 0);
        let b = RatFun::over_linear(MPoly::one(3), &[-1, 1, 0], 0);
        let s = a.add(&b);
        assert!(s.is_zero(), "got {:?}", s);
        // Denominator normalization: 1/(2y−2x) = (−1/2)/(x−y).
        let c = RatFun::over_linear(MPoly::one(3), &[-2, 2, 0], 0);
        assert_eq!(c.den.len(), 1);
        let f = c.den.keys().next().unwrap();
        assert_eq!(&*f.coeffs, &[1i64, -1, 0][..]);
        assert_eq!(c.num, MPoly::constant(3, q(-1, 2)));
    }

    #[test]
    fn ratfun_arithmetic_matches_eval() {
        let mut rng = Rng::new(77);
        let (x, y, z) = vars3();
        let a = RatFun::over_linear(x.mul(&y).add(&z), &[1, -1, 0], 0);
        let b = RatFun::over_linear(y.pow(2).sub(&x), &[0, 1, -1], 0);
        let sum = a.add(&b);
        let prod = a.mul(&b);
        for _ in 0..6 {
            let pt = distinct_rational_point(&mut rng, 3, &[]);
            let (av, bv) = (a.eval_q(&pt), b.eval_q(&pt));
            if let (Some(av), Some(bv)) = (av, bv) {
                assert_eq!(sum.eval_q(&pt).unwrap(), &av + &bv);
                assert_eq!(prod.eval_q(&pt).unwrap(), &av * &bv);
            }
        }
    }

    #[test]
    fn ratfun_twist() {
        let (x, y, _) = vars3();
        // r = (x+y)/(x−y); swapping x,y gives (x+y)/(y−x) = −r.
        let r = RatFun::over_linear(x.add(&y), &[1, -1, 0], 0);
        let sw = r.subst_signed_perm(&[(1, 1), (0, 1), (2, 1)]);
        assert_eq!(sw, r.neg());
    }

    #[test]
    fn distinct_point_avoids_loci() {
        let mut rng = Rng::new(3);
        let (lf, _) = LinForm::normalize(&[1, 1, 0], 0);
        for _ in 0..5 {
            let pt = distinct_rational_point(&mut rng, 3, core::slice::from_ref(&lf));
            assert_ne!(pt[0], pt[1]);
            assert!(!(&pt[0] + &pt[1]).is_zero());
        }
    }
}
