//! Complex special functions and coefficient families.
//!
//! Conventions (fixed throughout the crate):
//!
//! * First Jacobi theta function with **unit period lattice** ℤ + τℤ:
//!   ϑ₁(z|τ) = 2 Σ_{n≥0} (−1)ⁿ q^{(n+1/2)²} sin((2n+1)πz), q = e^{iπτ}.
//!   It is odd, 1-periodic up to sign (ϑ₁(z+1) = −ϑ₁(z)) and satisfies
//!   ϑ₁(z+τ) = −e^{−iπτ−2πiz} ϑ₁(z).
//! * Weierstrass function on the same lattice:
//!   ℘(z) = (ϑ₁′(z)² − ϑ₁″(z)ϑ₁(z))/ϑ₁(z)² + ϑ₁‴(0)/(3ϑ₁′(0)).
//!   The additive constant's sign is pinned by the differential equation
//!   (℘′)² = 4℘³ − g₂℘ − g₃ (checked in tests against Eisenstein series).
//! * Theta quotient σ_λ(z) = ϑ₁(z−λ)ϑ₁′(0)/(ϑ₁(z)ϑ₁(−λ)); it satisfies
//!   σ_λ(z)σ_λ(−z) = ℘(λ) − ℘(z) and σ_{−λ}(−z) = −σ_λ(z).
//! * Jacobi sn(u, k) with **modulus** k (not the parameter m = k²),
//!   computed by the descending Landen transformation.
//!
//! The ψ families are the squares of divided-difference coefficients:
//! with φ(z) = a/z and the operator coefficient g below, a generator
//! `[ij]` squares to ψ_ij(x_i − x_j) − a²/(x_i − x_j)², where
//!
//! * elliptic:      ψ(z) = A/z² − K(℘(bz) − ℘(λ_ij)),   g(z) = σ_{λ_ij}(bz);
//! * trigonometric: ψ(z) = A/z² − K(1/sin²(bz) − 1/sin²(bλ_ij)),
//!   g(z) = sin(b(z−λ_ij))/(sin(bz) sin(bλ_ij));
//! * rational:      ψ(z) = (A−K)/z² + K/λ_ij²,          g(z) = 1/z − 1/λ_ij.
//!
//! In every family k² g(z) g(−z) = ψ(z) − A/z² (for the elliptic case via
//! σ_λ(z)σ_λ(−z) = ℘(λ) − ℘(z), for the trigonometric case via
//! sin(A−B)sin(A+B) = sin²A − sin²B), which is exactly what makes the
//! divided-difference operators square to ψ·id.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Zero;
#[allow(unused_imports)]
use num_traits::Float;


/// Shorthand for the complex double type used everywhere.
pub type C64 = Complex64;

/// π as f64.
pub const PI: f64 = core::f64::consts::PI;

/// i·π·τ must have Im τ at or above this bound for theta sums to be accepted.
pub const MIN_IM_TAU: f64 = 0.5;

/// Default number of theta terms (n ranges over 0..N in the sine form).
pub const DEFAULT_THETA_TERMS: usize = 30;

/// Error type for scalar evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarError {
    /// Im τ below [`MIN_IM_TAU`].
    BadTau(f64),
    /// Evaluation hit or came too close to a pole/zero locus.
    NearPole(String),
    /// Parameter out of the supported domain.
    BadParam(String),
}

impl core::fmt::Display for ScalarError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ScalarError::BadTau(t) => write!(f, "Im tau = {t} below minimum {MIN_IM_TAU}"),
            ScalarError::NearPole(s) => write!(f, "near pole: {s}"),
            ScalarError::BadParam(s) => write!(f, "bad parameter: {s}"),
        }
    }
}

fn check_tau(tau: C64) -> Result<(), ScalarError> {
    if tau.im >= MIN_IM_TAU {
        Ok(())
    } else {
        Err(ScalarError::BadTau(tau.im))
    }
}

/// ϑ₁ and its first `max_d ≤ 3` z-derivatives at `z`, lattice ℤ+τℤ,
/// summed with `terms` terms. Returns `[ϑ₁, ϑ₁′, …]` of length `max_d+1`.
pub fn theta1_derivs(z: C64, tau: C64, max_d: usize, terms: usize) -> Result<Vec<C64>, ScalarError> {
    check_tau(tau)?;
    assert!(max_d <= 3, "theta derivatives implemented up to order 3");
    let iptau = C64::new(0.0, PI) * tau;
    let mut out = alloc::vec![C64::zero(); max_d + 1];
    for n in 0..terms {
        let nh = n as f64 + 0.5;
        // (−1)^n q^{(n+1/2)^2} with q = e^{iπτ}
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let amp = (iptau * (nh * nh)).exp() * 2.0 * sign;
        let m = (2 * n + 1) as f64 * PI;
        let mz = z * m;
        let (s, c) = (mz.sin(), mz.cos());
        // d^d/dz^d sin(mz) cycles sin → m cos → −m² sin → −m³ cos.
        let cycle = [s, c, -s, -c];
        let mut mp = 1.0;
        for (d, slot) in out.iter_mut().enumerate() {
            *slot += amp * cycle[d % 4] * mp;
            mp *= m;
        }
    }
    Ok(out)
}

/// ϑ₁(z|τ).
pub fn theta1(z: C64, tau: C64, terms: usize) -> Result<C64, ScalarError> {
    Ok(theta1_derivs(z, tau, 0, terms)?[0])
}

/// Weierstrass ℘(z|τ) on ℤ+τℤ via the theta quotient.
pub fn weierstrass_p(z: C64, tau: C64, terms: usize) -> Result<C64, ScalarError> {
    let d = theta1_derivs(z, tau, 2, terms)?;
    let d0 = theta1_derivs(C64::zero(), tau, 3, terms)?;
    let t = d[0];
    if t.norm() < 1e-12 {
        return Err(ScalarError::NearPole(alloc::format!(
            "theta1 vanishes at z = {z}"
        )));
    }
    Ok((d[1] * d[1] - d[2] * t) / (t * t) + d0[3] / (d0[1] * 3.0))
}

/// ℘′(z|τ): closed form from theta derivatives up to order 3,
/// ℘′ = (3ϑ′ϑ″ϑ − ϑ‴ϑ² − 2ϑ′³)/ϑ³.
pub fn weierstrass_p_prime(z: C64, tau: C64, terms: usize) -> Result<C64, ScalarError> {
    let d = theta1_derivs(z, tau, 3, terms)?;
    let t = d[0];
    if t.norm() < 1e-12 {
        return Err(ScalarError::NearPole(alloc::format!(
            "theta1 vanishes at z = {z}"
        )));
    }
    Ok((d[1] * d[2] * t * 3.0 - d[3] * t * t - d[1] * d[1] * d[1] * 2.0) / (t * t * t))
}

/// Eisenstein invariants (g₂, g₃) of ℤ+τℤ from the normalized series
/// E₄ = 1 + 240 Σ σ₃(n) q̄ⁿ, E₆ = 1 − 504 Σ σ₅(n) q̄ⁿ with q̄ = e^{2πiτ},
/// g₂ = (2π)⁴ E₄ / 12, g₃ = (2π)⁶ E₆ / 216.
pub fn eisenstein_g2_g3(tau: C64, terms: usize) -> Result<(C64, C64), ScalarError> {
    check_tau(tau)?;
    let qbar = (C64::new(0.0, 2.0 * PI) * tau).exp();
    let (mut e4, mut e6) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
    let mut qn = C64::new(1.0, 0.0);
    for n in 1..=terms as u64 {
        qn *= qbar;
        let (mut s3, mut s5) = (0.0f64, 0.0f64);
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                let e = n / d;
                s3 += (d as f64).powi(3);
                s5 += (d as f64).powi(5);
                if e != d {
                    s3 += (e as f64).powi(3);
                    s5 += (e as f64).powi(5);
                }
            }
            d += 1;
        }
        e4 += qn * (240.0 * s3);
        e6 -= qn * (504.0 * s5);
    }
    let two_pi = 2.0 * PI;
    let g2 = e4 * two_pi.powi(4) / 12.0;
    let g3 = e6 * two_pi.powi(6) / 216.0;
    Ok((g2, g3))
}

/// Theta quotient σ_λ(z) = ϑ₁(z−λ)ϑ₁′(0) / (ϑ₁(z)ϑ₁(−λ)).
pub fn sigma_quotient(lambda: C64, z: C64, tau: C64, terms: usize) -> Result<C64, ScalarError> {
    let num = theta1(z - lambda, tau, terms)?;
    let dz = theta1(z, tau, terms)?;
    let dl = theta1(-lambda, tau, terms)?;
    let d0 = theta1_derivs(C64::zero(), tau, 1, terms)?[1];
    if dz.norm() < 1e-12 || dl.norm() < 1e-12 {
        return Err(ScalarError::NearPole(alloc::format!(
            "sigma quotient denominator vanishes at z = {z}, lambda = {lambda}"
        )));
    }
    Ok(num * d0 / (dz * dl))
}

/// Jacobi sn(u, k) with modulus k, via the descending Landen transformation:
/// k₁ = (1 − k′)/(1 + k′) with k′ = √(1 − k²); sn(u, k) =
/// (1 + k₁) s / (1 + k₁ s²) with s = sn(u/(1+k₁), k₁); base case sn = sin.
pub fn jacobi_sn(u: C64, k: C64) -> Result<C64, ScalarError> {
    const EPS: f64 = 1e-12;
    const MAX_DEPTH: usize = 48;
    let mut ks: Vec<C64> = Vec::new();
    let mut kc = k;
    let mut depth = 0;
    while kc.norm() > EPS {
        if depth >= MAX_DEPTH {
            return Err(ScalarError::BadParam(alloc::format!(
                "Landen transformation did not converge for modulus {k}"
            )));
        }
        // Avoid the k = 1 branch point: |1 − k²| must not vanish.
        let kp2 = C64::new(1.0, 0.0) - kc * kc;
        if kp2.norm() < 1e-14 {
            return Err(ScalarError::BadParam(alloc::format!(
                "modulus {k} too close to 1 (degenerate lattice)"
            )));
        }
        let kp = kp2.sqrt();
        let k1 = (C64::new(1.0, 0.0) - kp) / (C64::new(1.0, 0.0) + kp);
        ks.push(k1);
        kc = k1;
        depth += 1;
    }
    // Argument after all Landen steps.
    let mut v = u;
    for k1 in &ks {
        v /= C64::new(1.0, 0.0) + k1;
    }
    let mut s = v.sin();
    for k1 in ks.iter().rev() {
        s = (C64::new(1.0, 0.0) + k1) * s / (C64::new(1.0, 0.0) + k1 * s * s);
    }
    Ok(s)
}

/// Which coefficient family drives a ψ / divided-difference evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// ℘/σ family on ℤ+τℤ.
    Elliptic,
    /// 1/sin² family.
    Trigonometric,
    /// 1/z² family.
    Rational,
}

/// Parameters of a ψ family for the algebra on n strands.
#[derive(Clone, Debug)]
pub struct FamilyParams {
    pub kind: FamilyKind,
    /// Numerator of the φ part: φ(z) = a/z. ψ contains A = a².
    pub a: C64,
    /// Global multiplier K of the ℘/sin/rational part; the operator carries k
    /// with k² = K.
    pub k_coupling: C64,
    /// Scale parameter b (elliptic/trig argument scaling).
    pub b: C64,
    /// Modular parameter (elliptic only; ignored otherwise).
    pub tau: C64,
    /// Spectral values λ_i, one per strand; λ_ij = λ_i − λ_j.
    pub lambda: Vec<C64>,
    /// Exponential tilt values α_i, one per strand (0 disables tilting).
    pub alpha: Vec<C64>,
    /// Theta truncation.
    pub theta_terms: usize,
}

impl FamilyParams {
    /// A generic well-separated parameter set for n strands, seeded
    /// deterministically. λ's are spread to keep λ_ij away from lattice
    /// points; tilts are small and nonzero.
    pub fn generic(kind: FamilyKind, n: usize, seed: u64) -> FamilyParams {
        let mut rng = crate::rng::Rng::new(seed ^ 0xF00D);
        let lambda: Vec<C64> = (0..n)
            .map(|i| {
                C64::new(
                    0.13 + 0.11 * i as f64 + 0.02 * rng.next_f64(),
                    0.05 + 0.03 * i as f64 + 0.01 * rng.next_f64(),
                )
            })
            .collect();
        let alpha: Vec<C64> = (0..n)
            .map(|_| C64::new(0.1 * rng.next_f64(), 0.1 * rng.next_f64()))
            .collect();
        FamilyParams {
            kind,
            a: C64::new(0.35, 0.1),
            k_coupling: C64::new(0.8, -0.05),
            b: C64::new(1.0, 0.0),
            tau: C64::new(0.21, 1.1),
            lambda,
            alpha,
            theta_terms: DEFAULT_THETA_TERMS,
        }
    }

    /// λ_i − λ_j.
    pub fn lambda_ij(&self, i: usize, j: usize) -> C64 {
        self.lambda[i] - self.lambda[j]
    }

    /// ψ_ij(z): the square of the ⟨ij⟩ generator as a function of
    /// z = x_i − x_j.
    pub fn psi(&self, i: usize, j: usize, z: C64) -> Result<C64, ScalarError> {
        let lam = self.lambda_ij(i, j);
        let aa = self.a * self.a;
        match self.kind {
            FamilyKind::Elliptic => {
                let pz = weierstrass_p(self.b * z, self.tau, self.theta_terms)?;
                let pl = weierstrass_p(lam, self.tau, self.theta_terms)?;
                Ok(aa / (z * z) - self.k_coupling * (pz - pl))
            }
            FamilyKind::Trigonometric => {
                let sz = (self.b * z).sin();
                let sl = (self.b * lam).sin();
                if sz.norm() < 1e-12 || sl.norm() < 1e-12 {
                    return Err(ScalarError::NearPole(String::from("sin vanishes in psi")));
                }
                Ok(aa / (z * z) - self.k_coupling * (1.0 / (sz * sz) - 1.0 / (sl * sl)))
            }
            FamilyKind::Rational => {
                Ok((aa - self.k_coupling) / (z * z) + self.k_coupling / (lam * lam))
            }
        }
    }

    /// The reflection-term coefficient g_ij(z) of the divided-difference
    /// operator: D_ij = a/z + k g_ij(z) e^{…} s_ij where k² = K.
    pub fn g_coeff(&self, i: usize, j: usize, z: C64) -> Result<C64, ScalarError> {
        let lam = self.lambda_ij(i, j);
        match self.kind {
            FamilyKind::Elliptic => {
                sigma_quotient(lam, self.b * z, self.tau, self.theta_terms)
            }
            FamilyKind::Trigonometric => {
                let sz = (self.b * z).sin();
                let sl = (self.b * lam).sin();
                if sz.norm() < 1e-12 || sl.norm() < 1e-12 {
                    return Err(ScalarError::NearPole(String::from(
                        "sin vanishes in g coefficient",
                    )));
                }
                Ok((self.b * (z - lam)).sin() / (sz * sl))
            }
            FamilyKind::Rational => Ok(1.0 / z - 1.0 / lam),
        }
    }

    /// ψ_ij minus the φ² correction: the square of the normalized generator
    /// [ij] = ⟨ij⟩ − a/x_ij, i.e. ψ_ij(z) − a²/z². For the elliptic family
    /// with K = b = 1 this is ℘(λ_ij) − ℘(z).
    pub fn bracket_square(&self, i: usize, j: usize, z: C64) -> Result<C64, ScalarError> {
        let aa = self.a * self.a;
        Ok(self.psi(i, j, z)? - aa / (z * z))
    }

    /// Distance from a point x (vector of strand coordinates) to the nearest
    /// singular locus of the family: collisions x_i = x_j, plus lattice /
    /// period poles of the transcendental factors.
    pub fn pole_distance(&self, x: &[C64]) -> f64 {
        let n = x.len();
        let mut d = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let z = x[i] - x[j];
                d = d.min(z.norm());
                match self.kind {
                    FamilyKind::Elliptic => {
                        // Nearest lattice point of bz in ℤ+τℤ.
                        d = d.min(lattice_distance(self.b * z, self.tau));
                    }
                    FamilyKind::Trigonometric => {
                        // Zeros of sin(bz) at bz ∈ πℤ.
                        let w = self.b * z / PI;
                        d = d.min((w - C64::new(w.re.round(), 0.0)).norm());
                    }
                    FamilyKind::Rational => {}
                }
            }
        }
        d
    }
}

/// Distance from z to the nearest point of ℤ + τℤ (approximate: searches the
/// four lattice points around the fractional coordinates).
pub fn lattice_distance(z: C64, tau: C64) -> f64 {
    // Solve z = u + v τ over ℝ²: v = Im z / Im τ, u = Re z − v Re τ.
    let v = z.im / tau.im;
    let u = z.re - v * tau.re;
    let mut best = f64::INFINITY;
    for du in [u.floor(), u.ceil()] {
        for dv in [v.floor(), v.ceil()] {
            let p = C64::new(du, 0.0) + tau * dv;
            best = best.min((z - p).norm());
        }
    }
    best
}

/// Multiparameter degeneration data: central parameters p_ij = κ/Λ_ij²,
/// reached from the rational family by K = κδ², λ_ij = δΛ_ij, δ → 0.
#[derive(Clone, Debug)]
pub struct MultiparamData {
    pub kappa: C64,
    /// Capital Λ_i values (per strand); Λ_ij = Λ_i − Λ_j.
    pub capital_lambda: Vec<C64>,
}

impl MultiparamData {
    /// p_ij = κ / Λ_ij².
    pub fn p(&self, i: usize, j: usize) -> C64 {
        let l = self.capital_lambda[i] - self.capital_lambda[j];
        self.kappa / (l * l)
    }

    /// The rational-family parameters at finite δ that degenerate to this
    /// multiparameter set as δ → 0 (with a = 0 so brackets need no
    /// normalization).
    pub fn at_delta(&self, n: usize, delta: f64) -> FamilyParams {
        assert_eq!(n, self.capital_lambda.len());
        FamilyParams {
            kind: FamilyKind::Rational,
            a: C64::zero(),
            k_coupling: self.kappa * delta * delta,
            b: C64::new(1.0, 0.0),
            tau: C64::new(0.0, 1.0),
            lambda: self.capital_lambda.iter().map(|l| l * delta).collect(),
            alpha: alloc::vec![C64::zero(); n],
            theta_terms: DEFAULT_THETA_TERMS,
        }
    }

    /// Elliptic-family parameters at finite δ degenerating to the same
    /// multiparameter set: K = κδ², λ_i = δΛ_i, b = 1. Then the bracket
    /// square K(℘(λ_ij) − ℘(x_ij)) = κ/Λ_ij² + O(δ²) uniformly on compact
    /// sets away from poles; finite-δ agreement at rate δ² is what the
    /// degeneration check measures.
    pub fn at_delta_elliptic(&self, n: usize, delta: f64, tau: C64) -> FamilyParams {
        assert_eq!(n, self.capital_lambda.len());
        FamilyParams {
            kind: FamilyKind::Elliptic,
            a: C64::zero(),
            k_coupling: self.kappa * delta * delta,
            b: C64::new(1.0, 0.0),
            tau,
            lambda: self.capital_lambda.iter().map(|l| l * delta).collect(),
            alpha: alloc::vec![C64::zero(); n],
            theta_terms: DEFAULT_THETA_TERMS,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{close, Rng};

    const TOL: f64 = 1e-9;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    // Reference values computed independently with mpmath at 18+ digits
    // (jtheta/ellipfun with the argument/modulus conversions for the unit
    // lattice convention used here).
    #[test]
    fn theta1_reference_values() {
        let tau = c(0.0, 0.8);
        let z1 = c(0.31, 0.17);
        let d = theta1_derivs(z1, tau, 2, DEFAULT_THETA_TERMS).unwrap();
        assert!(close(d[0], c(1.00740376094488452, 0.352013047928233155), 1e-14));
        assert!(close(d[1], c(2.32557123113465567, -1.51773599633777222), 1e-14));
        assert!(close(d[2], c(-9.63073344736926039, -4.75890047105068847), 1e-14));
        let d0 = theta1_derivs(C64::zero(), tau, 3, DEFAULT_THETA_TERMS).unwrap();
        assert!(close(d0[1], c(3.28602754177400099, 0.0), 1e-14));
        assert!(close(d0[3], c(-27.2232048984643469, 0.0), 1e-13));

        let tau2 = c(0.3, 1.5);
        let t2 = theta1(z1, tau2, DEFAULT_THETA_TERMS).unwrap();
        assert!(close(t2, c(0.522187963400610338, 0.324557430995386043), 1e-14));
    }

    #[test]
    fn theta1_is_odd_and_quasi_periodic() {
        let tau = c(0.13, 0.9);
        let mut rng = Rng::new(11);
        for _ in 0..20 {
            let z = rng.complex_in((-1.0, 1.0), (-0.6, 0.6));
            let t = theta1(z, tau, DEFAULT_THETA_TERMS).unwrap();
            let tm = theta1(-z, tau, DEFAULT_THETA_TERMS).unwrap();
            assert!(close(tm, -t, TOL), "oddness failed at z = {z}");
            let tp1 = theta1(z + 1.0, tau, DEFAULT_THETA_TERMS).unwrap();
            assert!(close(tp1, -t, TOL), "z+1 sign flip failed at z = {z}");
            let tpt = theta1(z + tau, tau, DEFAULT_THETA_TERMS).unwrap();
            let phase = -((-C64::new(0.0, PI) * (tau + z * 2.0)).exp());
            assert!(close(tpt, phase * t, TOL), "z+tau quasi-periodicity failed");
        }
    }

    #[test]
    fn theta_truncation_is_stable() {
        // Doubling the term count changes nothing at double precision.
        let tau = c(0.0, MIN_IM_TAU);
        let mut rng = Rng::new(5);
        for _ in 0..10 {
            let z = rng.complex_in((-1.0, 1.0), (-1.0, 1.0));
            let a = theta1_derivs(z, tau, 3, DEFAULT_THETA_TERMS).unwrap();
            let b = theta1_derivs(z, tau, 3, 2 * DEFAULT_THETA_TERMS).unwrap();
            for (x, y) in a.iter().zip(b.iter()) {
                assert!(close(*x, *y, 1e-12));
            }
        }
    }

    #[test]
    fn theta_rejects_small_im_tau() {
        assert!(matches!(
            theta1(c(0.3, 0.0), c(0.0, 0.3), DEFAULT_THETA_TERMS),
            Err(ScalarError::BadTau(_))
        ));
    }

    #[test]
    fn weierstrass_reference_values() {
        let z1 = c(0.31, 0.17);
        let p1 = weierstrass_p(z1, c(0.0, 0.8), DEFAULT_THETA_TERMS).unwrap();
        assert!(close(p1, c(5.50156307461386283, -5.31502715040602395), 1e-13));
        let p2 = weierstrass_p(z1, c(0.3, 1.5), DEFAULT_THETA_TERMS).unwrap();
        assert!(close(p2, c(4.62999023855075502, -5.91009359898187817), 1e-13));
    }

    #[test]
    fn weierstrass_satisfies_differential_equation() {
        // (℘′)² = 4℘³ − g₂℘ − g₃ with independently computed Eisenstein
        // invariants; this pins the sign of the additive constant.
        let tau = c(0.21, 1.1);
        let (g2, g3) = eisenstein_g2_g3(tau, 60).unwrap();
        let mut rng = Rng::new(3);
        for _ in 0..8 {
            let z = rng.complex_in((0.1, 0.9), (0.05, 0.5));
            let p = weierstrass_p(z, tau, DEFAULT_THETA_TERMS).unwrap();
            let pp = weierstrass_p_prime(z, tau, DEFAULT_THETA_TERMS).unwrap();
            let lhs = pp * pp;
            let rhs = p * p * p * 4.0 - g2 * p - g3;
            assert!(
                close(lhs, rhs, 1e-10),
                "DE residual {} at z = {z}",
                (lhs - rhs).norm()
            );
        }
    }

    #[test]
    fn weierstrass_even_and_doubly_periodic() {
        let tau = c(0.1, 1.2);
        let mut rng = Rng::new(9);
        for _ in 0..20 {
            let z = rng.complex_in((0.1, 0.8), (0.05, 0.6));
            let p = weierstrass_p(z, tau, DEFAULT_THETA_TERMS).unwrap();
            let pm = weierstrass_p(-z, tau, DEFAULT_THETA_TERMS).unwrap();
            let p1 = weierstrass_p(z + 1.0, tau, DEFAULT_THETA_TERMS).unwrap();
            let pt = weierstrass_p(z + tau, tau, DEFAULT_THETA_TERMS).unwrap();
            assert!(close(pm, p, TOL));
            assert!(close(p1, p, TOL));
            assert!(close(pt, p, TOL));
        }
    }

    #[test]
    fn weierstrass_double_pole_at_origin() {
        // ℘(z) − 1/z² → 0 as z → 0 (quadratically: ratio 1/4 when z halves).
        let tau = c(0.0, 0.8);
        let z = c(0.01, 0.004);
        let e1 = weierstrass_p(z, tau, DEFAULT_THETA_TERMS).unwrap() - 1.0 / (z * z);
        let e2 = weierstrass_p(z / 2.0, tau, DEFAULT_THETA_TERMS).unwrap() - 1.0 / (z * z / 4.0);
        assert!(e1.norm() < 1e-2);
        assert!((e2.norm() / e1.norm() - 0.25).abs() < 0.05);
    }

    #[test]
    fn sigma_reference_value_and_identities() {
        let tau = c(0.0, 0.8);
        let lam = c(0.37, 0.21);
        let z = c(0.52, -0.18);
        let s = sigma_quotient(lam, z, tau, DEFAULT_THETA_TERMS).unwrap();
        assert!(close(s, c(-0.627536682361707699, 3.36662678354944234), 1e-13));

        // σ_λ(z) σ_λ(−z) = ℘(λ) − ℘(z)
        let sm = sigma_quotient(lam, -z, tau, DEFAULT_THETA_TERMS).unwrap();
        let pl = weierstrass_p(lam, tau, DEFAULT_THETA_TERMS).unwrap();
        let pz = weierstrass_p(z, tau, DEFAULT_THETA_TERMS).unwrap();
        assert!(close(s * sm, pl - pz, TOL));

        // antisymmetry coherence: σ_{−λ}(−z) = −σ_λ(z)
        let sneg = sigma_quotient(-lam, -z, tau, DEFAULT_THETA_TERMS).unwrap();
        assert!(close(sneg, -s, TOL));

        // quasi-periodicity: σ_λ(z+1) = σ_λ(z), σ_λ(z+τ) = e^{2πiλ} σ_λ(z)
        let s1 = sigma_quotient(lam, z + 1.0, tau, DEFAULT_THETA_TERMS).unwrap();
        assert!(close(s1, s, TOL));
        let st = sigma_quotient(lam, z + tau, tau, DEFAULT_THETA_TERMS).unwrap();
        let ph = (C64::new(0.0, 2.0 * PI) * lam).exp();
        assert!(close(st, ph * s, TOL));
    }

    #[test]
    fn sn_reference_values() {
        let s1 = jacobi_sn(c(0.62, 0.0), c(0.55, 0.0)).unwrap();
        assert!(close(s1, c(0.571981696503022201, 0.0), 1e-14));
        let s2 = jacobi_sn(c(0.3, 0.4), c(0.7, 0.0)).unwrap();
        assert!(close(s2, c(0.328739213347866425, 0.386948431056411489), 1e-14));
        let s3 = jacobi_sn(c(-1.1, 0.25), c(0.2, 0.1)).unwrap();
        assert!(close(s3, c(-0.915786099577633529, 0.118198340869445554), 1e-13));
    }

    #[test]
    fn sn_degenerations() {
        let mut rng = Rng::new(21);
        for _ in 0..20 {
            let u = rng.complex_in((-1.2, 1.2), (-0.5, 0.5));
            // k = 0: sn = sin
            let s0 = jacobi_sn(u, C64::zero()).unwrap();
            assert!(close(s0, u.sin(), TOL));
            // k close to 1: sn ≈ tanh (k = 1 exactly is the degenerate
            // lattice, rejected; approach it instead).
            let s1 = jacobi_sn(u, c(0.9999999, 0.0)).unwrap();
            assert!(close(s1, u.tanh(), 1e-5));
        }
        // oddness
        let u = c(0.35, 0.2);
        let k = c(0.3, 0.05);
        let a = jacobi_sn(u, k).unwrap();
        let b = jacobi_sn(-u, k).unwrap();
        assert!(close(b, -a, TOL));
    }

    #[test]
    fn psi_families_match_bracket_square_closed_forms() {
        // Elliptic with K = b = 1: [ij]² must equal ℘(λ_ij) − ℘(x_ij).
        let mut fp = FamilyParams::generic(FamilyKind::Elliptic, 3, 2);
        fp.k_coupling = c(1.0, 0.0);
        fp.b = c(1.0, 0.0);
        let z = c(0.41, 0.12);
        let bs = fp.bracket_square(0, 1, z).unwrap();
        let pl = weierstrass_p(fp.lambda_ij(0, 1), fp.tau, fp.theta_terms).unwrap();
        let pz = weierstrass_p(z, fp.tau, fp.theta_terms).unwrap();
        assert!(close(bs, pl - pz, TOL));
    }

    #[test]
    fn trig_is_elliptic_limit() {
        // τ → i∞ of the elliptic family reproduces the trigonometric family
        // under b_t = πb, K_t = π²K (spectral parameters already matched by
        // sharing λ's at b = 1 elliptic scale... verified with λ mapped
        // through the same πb rescaling of arguments).
        let tau = c(0.0, 20.0);
        let lam = c(0.23, 0.11);
        let z = c(0.37, -0.09);
        let k_coupling = c(0.8, -0.05);
        // elliptic ψ ingredient at b = 1
        let pe = weierstrass_p(z, tau, DEFAULT_THETA_TERMS).unwrap()
            - weierstrass_p(lam, tau, DEFAULT_THETA_TERMS).unwrap();
        let ell = k_coupling * pe;
        // trig ingredient at b_t = π, K_t = π²K
        let bt = c(PI, 0.0);
        let sz = (bt * z).sin();
        let sl = (bt * lam).sin();
        let trig = k_coupling * PI * PI * (1.0 / (sz * sz) - 1.0 / (sl * sl));
        assert!(
            close(ell, trig, 1e-9),
            "residual {}",
            (ell - trig).norm()
        );
    }

    #[test]
    fn rational_is_trig_limit() {
        // b → 0 of the trigonometric family after K ↦ K b² reproduces the
        // rational family.
        let lam = c(0.23, 0.11);
        let z = c(0.37, -0.09);
        let kc = c(0.8, -0.05);
        let b = 1e-4;
        let sz = (z * b).sin();
        let sl = (lam * b).sin();
        // trigonometric ψ-part with K ↦ K b²: K b² (1/sin²(bz) − 1/sin²(bλ))
        let trig = kc * b * b * (1.0 / (sz * sz) - 1.0 / (sl * sl));
        let rat = kc * (1.0 / (z * z) - 1.0 / (lam * lam));
        assert!(close(trig, rat, 1e-7), "residual {}", (trig - rat).norm());
    }

    #[test]
    fn multiparam_is_rational_limit() {
        // Bracket squares of the δ-family converge to p_ij = κ/Λ_ij².
        let mp = MultiparamData {
            kappa: c(0.7, 0.2),
            capital_lambda: alloc::vec![c(0.9, 0.1), c(-0.4, 0.3), c(0.2, -0.5)],
        };
        let fp = mp.at_delta(3, 1e-5);
        let z = c(0.31, 0.14);
        let bs = fp.bracket_square(0, 1, z).unwrap();
        assert!(close(bs, mp.p(0, 1), 1e-8));
    }

    #[test]
    fn pole_distance_flags_collisions() {
        let fp = FamilyParams::generic(FamilyKind::Rational, 2, 1);
        let d = fp.pole_distance(&[c(0.5, 0.5), c(0.5, 0.500001)]);
        assert!(d < 1e-5);
        let far = fp.pole_distance(&[c(0.5, 0.5), c(-0.5, -0.5)]);
        assert!(far > 0.5);
    }
}
