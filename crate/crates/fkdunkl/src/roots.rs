//! Finite crystallographic root systems used by the operator and Nichols
//! modules: A_{n−1} (in its n-coordinate ambient realization), B₂, and G₂.
//!
//! Roots are integer vectors in the ambient space. Positive roots are stored
//! in a fixed order; reflections act exactly on root indices (with signs)
//! and on ambient points. For types A and B₂ every reflection is a signed
//! coordinate permutation, which the exact polynomial backend uses; G₂
//! reflections are general rational matrices used numerically.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Which root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    /// A_{n−1} realized on n coordinates: roots ε_i − ε_j.
    A(usize),
    /// B₂ on 2 coordinates: ±ε₁±ε₂ (long), ±ε_i (short).
    B2,
    /// G₂ on 3 coordinates (sum-zero realization with integer entries).
    G2,
}

/// A root system with a fixed list of positive roots.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub kind: RootKind,
    /// Ambient dimension.
    pub dim: usize,
    /// Positive roots as integer ambient vectors.
    pub positive: Vec<Vec<i64>>,
    /// Human-readable labels parallel to `positive`.
    pub labels: Vec<String>,
}

impl RootSystem {
    /// A_{n−1}: positive roots ε_i − ε_j for 0 ≤ i < j < n, ordered
    /// lexicographically by (i, j).
    pub fn a_type(n: usize) -> Self {
        let mut positive = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let mut v = alloc::vec![0i64; n];
                v[i] = 1;
                v[j] = -1;
                positive.push(v);
                labels.push(alloc::format!("e{}-e{}", i + 1, j + 1));
            }
        }
        RootSystem {
            kind: RootKind::A(n),
            dim: n,
            positive,
            labels,
        }
    }

    /// B₂ with the order [ε₁−ε₂, ε₁+ε₂, ε₁, ε₂] (two long roots first).
    pub fn b2() -> Self {
        RootSystem {
            kind: RootKind::B2,
            dim: 2,
            positive: alloc::vec![
                alloc::vec![1, -1],
                alloc::vec![1, 1],
                alloc::vec![1, 0],
                alloc::vec![0, 1],
            ],
            labels: alloc::vec![
                String::from("e1-e2"),
                String::from("e1+e2"),
                String::from("e1"),
                String::from("e2"),
            ],
        }
    }

    /// G₂ in a 3-coordinate realization: simple roots α₁ = (−2,1,1) (long)
    /// and α₂ = (1,−1,0) (short). Positive roots ordered as
    /// [α₁, α₁+α₂, 2α₁+3α₂, α₁+2α₂, α₁+3α₂, α₂], the chain order used by
    /// the quadratic-relation check.
    pub fn g2() -> Self {
        let a1 = [-2i64, 1, 1];
        let a2 = [1i64, -1, 0];
        let comb = |c1: i64, c2: i64| -> Vec<i64> {
            (0..3).map(|t| c1 * a1[t] + c2 * a2[t]).collect()
        };
        RootSystem {
            kind: RootKind::G2,
            dim: 3,
            positive: alloc::vec![
                comb(1, 0),
                comb(1, 1),
                comb(2, 3),
                comb(1, 2),
                comb(1, 3),
                comb(0, 1),
            ],
            labels: alloc::vec![
                String::from("a1"),
                String::from("a1+a2"),
                String::from("2a1+3a2"),
                String::from("a1+2a2"),
                String::from("a1+3a2"),
                String::from("a2"),
            ],
        }
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// Euclidean inner product of integer vectors.
    pub fn inner(u: &[i64], v: &[i64]) -> i64 {
        u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
    }

    /// |α|².
    pub fn norm2(&self, idx: usize) -> i64 {
        Self::inner(&self.positive[idx], &self.positive[idx])
    }

    /// Cartan pairing ⟨β, α∨⟩ = 2(β,α)/(α,α); integral for crystallographic
    /// systems.
    pub fn cartan(&self, beta: &[i64], alpha: &[i64]) -> i64 {
        let num = 2 * Self::inner(beta, alpha);
        let den = Self::inner(alpha, alpha);
        debug_assert_eq!(num % den, 0, "non-integral Cartan pairing");
        num / den
    }

    /// s_α(β) for positive roots α, β (by index): returns (sign, index) with
    /// the image written as sign·(positive root).
    pub fn reflect_root(&self, alpha_idx: usize, beta_idx: usize) -> (i8, usize) {
        let alpha = &self.positive[alpha_idx];
        let beta = &self.positive[beta_idx];
        let c = self.cartan(beta, alpha);
        let img: Vec<i64> = beta
            .iter()
            .zip(alpha.iter())
            .map(|(b, a)| b - c * a)
            .collect();
        for (k, r) in self.positive.iter().enumerate() {
            if *r == img {
                return (1, k);
            }
            if r.iter().zip(img.iter()).all(|(a, b)| *a == -b) {
                return (-1, k);
            }
        }
        panic!("reflection image is not a root");
    }

    /// s_α acting on an ambient complex point: x ↦ x − (2(α,x)/(α,α))·α.
    pub fn reflect_point(&self, alpha_idx: usize, x: &[Complex64]) -> Vec<Complex64> {
        let alpha = &self.positive[alpha_idx];
        let n2 = self.norm2(alpha_idx) as f64;
        let ax: Complex64 = alpha
            .iter()
            .zip(x.iter())
            .map(|(a, xi)| xi * (*a as f64))
            .sum();
        let f = ax * (2.0 / n2);
        x.iter()
            .zip(alpha.iter())
            .map(|(xi, a)| xi - f * (*a as f64))
            .collect()
    }

    /// (α, x) for a complex point x.
    pub fn pairing_point(&self, alpha_idx: usize, x: &[Complex64]) -> Complex64 {
        self.positive[alpha_idx]
            .iter()
            .zip(x.iter())
            .map(|(a, xi)| xi * (*a as f64))
            .sum()
    }

    /// The reflection as a signed coordinate permutation, when it is one
    /// (all type A and B₂ reflections; G₂ returns `None`). Entry k of the
    /// result is (target, sign): s_α sends coordinate k to sign·coordinate
    /// target — suitable for exact polynomial substitution.
    pub fn reflection_signed_perm(&self, alpha_idx: usize) -> Option<Vec<(usize, i8)>> {
        let alpha = &self.positive[alpha_idx];
        // Compute the matrix column images on basis vectors and check each
        // is ±a coordinate vector.
        let n2 = RootSystem::inner(alpha, alpha);
        let mut images = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            // s(e_k) = e_k − (2 α_k / |α|²) α — integral only in signed-perm
            // cases; verify entries.
            let mut img = alloc::vec![0i64; self.dim];
            img[k] = 1;
            let factor_num = 2 * alpha[k];
            for t in 0..self.dim {
                let delta = factor_num * alpha[t];
                if delta % n2 != 0 {
                    return None;
                }
                img[t] -= delta / n2;
            }
            let nz: Vec<usize> = (0..self.dim).filter(|&t| img[t] != 0).collect();
            if nz.len() != 1 || img[nz[0]].abs() != 1 {
                return None;
            }
            images.push((nz[0], img[nz[0]] as i8));
        }
        Some(images)
    }

    /// Coweight values λ(α∨) for a covector λ given by its values on the
    /// coordinate functionals: α∨ = 2α/(α,α), so λ(α∨) = 2·Σ λ_t α_t/(α,α).
    pub fn coroot_value(&self, alpha_idx: usize, lam: &[Complex64]) -> Complex64 {
        let alpha = &self.positive[alpha_idx];
        let n2 = self.norm2(alpha_idx) as f64;
        let v: Complex64 = alpha
            .iter()
            .zip(lam.iter())
            .map(|(a, l)| l * (*a as f64))
            .sum();
        v * (2.0 / n2)
    }

    /// Orbit label of a positive root under the Weyl group: roots of equal
    /// length are in the same orbit for the irreducible systems here.
    /// Returns 0 for the longest length present, 1 for the next.
    pub fn orbit(&self, idx: usize) -> usize {
        let max = (0..self.num_positive())
            .map(|k| self.norm2(k))
            .max()
            .unwrap();
        if self.norm2(idx) == max {
            0
        } else {
            1
        }
    }
}
