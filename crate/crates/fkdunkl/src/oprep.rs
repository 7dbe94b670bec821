//! Operator representations over a Weyl group: divided differences, the
//! rational-exponential Dunkl family on an arbitrary root system, the three
//! strand families (elliptic / trigonometric / rational), and the B₂
//! elliptic-sn family.
//!
//! Operators are finite sums Σ_w c_w(x)·w with function coefficients, keyed
//! by the group element so that composition merges parallel terms. Identities
//! between operators are verified functionally: both sides are applied to a
//! seeded bank of test functions at random points kept away from every pole
//! locus, and the residual is normalized by the magnitude of the terms that
//! were combined.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::poly::{qi, MPoly, Q};
use crate::rng::{derive_seed, Rng, SamplePlan};
use crate::roots::{RootKind, RootSystem};
use crate::scalars::{jacobi_sn, FamilyKind, FamilyParams};

/// Coefficient function of one group-algebra term.
pub type CF = Rc<dyn Fn(&[C64]) -> C64>;

/// Canonical label of a Weyl-group element: entry β ↦ (sign, index) records
/// w(β) = sign·positive[index] for each positive root β. The group acts
/// faithfully on the roots, so the label determines the element.
pub type WKey = Vec<(i8, usize)>;

fn identity_key(rs: &RootSystem) -> WKey {
    (0..rs.num_positive()).map(|k| (1i8, k)).collect()
}

fn reflection_key(rs: &RootSystem, alpha_idx: usize) -> WKey {
    (0..rs.num_positive())
        .map(|b| rs.reflect_root(alpha_idx, b))
        .collect()
}

/// Label of w₁w₂ from the labels of the factors: (w₁w₂)(β) = w₁(w₂(β)).
fn compose_keys(k1: &WKey, k2: &WKey) -> WKey {
    k2.iter()
        .map(|&(s2, i2)| {
            let (s1, i1) = k1[i2];
            (s1 * s2, i1)
        })
        .collect()
}

/// Apply w⁻¹ to a point, where w = s_{r₁}⋯s_{r_m} is recorded as the word
/// [r₁, …, r_m]: w⁻¹ = s_{r_m}⋯s_{r₁}, whose rightmost factor s_{r₁} acts
/// first, so the reflections are applied in word order.
fn apply_inv_word(rs: &RootSystem, word: &[usize], x: &[C64]) -> Vec<C64> {
    let mut p = x.to_vec();
    for &r in word {
        p = rs.reflect_point(r, &p);
    }
    p
}

#[derive(Clone)]
struct OpTerm {
    coeff: CF,
    /// Reflection word for the group element; any word with the same label
    /// induces the same point map, so the first representative is kept.
    word: Vec<usize>,
}

/// A finite sum Σ_w c_w(x)·w acting on functions by
/// (c·w f)(x) = c(x)·f(w⁻¹x).
#[derive(Clone)]
pub struct Op {
    rs: Rc<RootSystem>,
    terms: BTreeMap<WKey, OpTerm>,
}

impl Op {
    pub fn zero(rs: Rc<RootSystem>) -> Op {
        Op {
            rs,
            terms: BTreeMap::new(),
        }
    }

    /// Single term c(x)·s_{r₁}⋯s_{r_m}.
    pub fn term(rs: Rc<RootSystem>, coeff: CF, word: Vec<usize>) -> Op {
        let mut key = identity_key(&rs);
        for &r in &word {
            key = compose_keys(&key, &reflection_key(&rs, r));
        }
        let mut terms = BTreeMap::new();
        terms.insert(key, OpTerm { coeff, word });
        Op { rs, terms }
    }

    pub fn identity(rs: Rc<RootSystem>) -> Op {
        Self::scalar_const(rs, C64::new(1.0, 0.0))
    }

    /// Multiplication by a function.
    pub fn scalar_fn(rs: Rc<RootSystem>, f: CF) -> Op {
        Self::term(rs, f, Vec::new())
    }

    pub fn scalar_const(rs: Rc<RootSystem>, c: C64) -> Op {
        Self::term(rs, Rc::new(move |_: &[C64]| c), Vec::new())
    }

    /// The reflection s_α as an operator.
    pub fn reflection(rs: Rc<RootSystem>, alpha_idx: usize) -> Op {
        Self::term(
            rs,
            Rc::new(|_: &[C64]| C64::new(1.0, 0.0)),
            vec![alpha_idx],
        )
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    fn insert_term(&mut self, key: WKey, term: OpTerm) {
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, term);
            }
            Some(old) => {
                let c1 = old.coeff.clone();
                let c2 = term.coeff.clone();
                let sum: CF = Rc::new(move |x: &[C64]| c1(x) + c2(x));
                self.terms.insert(
                    key,
                    OpTerm {
                        coeff: sum,
                        word: old.word,
                    },
                );
            }
        }
    }

    pub fn add(&self, other: &Op) -> Op {
        let mut out = self.clone();
        for (k, t) in &other.terms {
            out.insert_term(k.clone(), t.clone());
        }
        out
    }

    pub fn scale(&self, c: C64) -> Op {
        if c == C64::new(0.0, 0.0) {
            return Op::zero(self.rs.clone());
        }
        let mut out = Op::zero(self.rs.clone());
        for (k, t) in &self.terms {
            let c0 = t.coeff.clone();
            out.terms.insert(
                k.clone(),
                OpTerm {
                    coeff: Rc::new(move |x: &[C64]| c0(x) * c),
                    word: t.word.clone(),
                },
            );
        }
        out
    }

    pub fn sub(&self, other: &Op) -> Op {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Operator product. For single terms,
    /// (c₁·w₁)(c₂·w₂) = (c₁ · (c₂∘w₁⁻¹)) · (w₁w₂):
    /// the right coefficient is evaluated at w₁⁻¹x.
    pub fn compose(&self, other: &Op) -> Op {
        let mut out = Op::zero(self.rs.clone());
        for (k1, t1) in &self.terms {
            for (k2, t2) in &other.terms {
                let key = compose_keys(k1, k2);
                let mut word = t1.word.clone();
                word.extend_from_slice(&t2.word);
                let c1 = t1.coeff.clone();
                let c2 = t2.coeff.clone();
                let w1 = t1.word.clone();
                let rs = self.rs.clone();
                let coeff: CF = Rc::new(move |x: &[C64]| {
                    let y = apply_inv_word(&rs, &w1, x);
                    c1(x) * c2(&y)
                });
                out.insert_term(key, OpTerm { coeff, word });
            }
        }
        out
    }

    /// Apply to a function at a point: Σ_w c_w(x)·f(w⁻¹x).
    pub fn apply(&self, f: &dyn Fn(&[C64]) -> C64, x: &[C64]) -> C64 {
        self.apply_scaled(f, x).0
    }

    /// Apply and also report max(1, largest term magnitude), the natural
    /// scale against which a cancellation should be judged.
    pub fn apply_scaled(&self, f: &dyn Fn(&[C64]) -> C64, x: &[C64]) -> (C64, f64) {
        let mut acc = C64::new(0.0, 0.0);
        let mut scale = 1.0f64;
        for t in self.terms.values() {
            let y = apply_inv_word(&self.rs, &t.word, x);
            let v = (t.coeff)(x) * f(&y);
            scale = scale.max(v.norm());
            acc += v;
        }
        (acc, scale)
    }

    /// Residual of "this operator is zero" on one function at one point.
    pub fn zero_residual(&self, f: &dyn Fn(&[C64]) -> C64, x: &[C64]) -> f64 {
        let (v, scale) = self.apply_scaled(f, x);
        v.norm() / scale
    }
}

// ---------------------------------------------------------------------------
// Test function bank
// ---------------------------------------------------------------------------

type PolyData = Vec<(C64, Vec<u32>)>;

fn random_poly_data(rng: &mut Rng, dim: usize, max_deg: u32, monos: usize) -> PolyData {
    let mut out = Vec::with_capacity(monos);
    for _ in 0..monos {
        let c = rng.complex_in((-1.0, 1.0), (-1.0, 1.0));
        let mut exps = vec![0u32; dim];
        let mut budget = max_deg;
        for e in exps.iter_mut() {
            let d = rng.below(u64::from(budget) + 1) as u32;
            *e = d;
            budget -= d;
        }
        out.push((c, exps));
    }
    out
}

fn eval_poly_data(p: &PolyData, x: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (c, exps) in p {
        let mut m = *c;
        for (e, xi) in exps.iter().zip(x.iter()) {
            for _ in 0..*e {
                m *= xi;
            }
        }
        acc += m;
    }
    acc
}

/// A seeded bank of entire test functions: exponentials e^{μ·ξ}, random
/// polynomials of total degree ≤ 4, and polynomial·exponential products.
/// The same (dim, seed) always reproduces the same bank.
pub struct TestFunctionBank {
    pub dim: usize,
    pub seed: u64,
    pub funcs: Vec<(String, CF)>,
}

impl TestFunctionBank {
    pub fn new(dim: usize, seed: u64) -> TestFunctionBank {
        let mut rng = Rng::new(seed ^ 0xBA2C_F00D);
        let mut funcs: Vec<(String, CF)> = Vec::new();
        for t in 0..3 {
            let mu: Vec<C64> = (0..dim)
                .map(|_| rng.complex_in((-0.9, 0.9), (-0.5, 0.5)))
                .collect();
            funcs.push((
                format!("exp{t}"),
                Rc::new(move |x: &[C64]| {
                    let s: C64 = mu.iter().zip(x.iter()).map(|(m, xi)| m * xi).sum();
                    s.exp()
                }),
            ));
        }
        for t in 0..3 {
            let data = random_poly_data(&mut rng, dim, 4, 5);
            funcs.push((
                format!("poly{t}"),
                Rc::new(move |x: &[C64]| eval_poly_data(&data, x)),
            ));
        }
        for t in 0..2 {
            let mu: Vec<C64> = (0..dim)
                .map(|_| rng.complex_in((-0.7, 0.7), (-0.4, 0.4)))
                .collect();
            let data = random_poly_data(&mut rng, dim, 3, 4);
            funcs.push((
                format!("polyexp{t}"),
                Rc::new(move |x: &[C64]| {
                    let s: C64 = mu.iter().zip(x.iter()).map(|(m, xi)| m * xi).sum();
                    eval_poly_data(&data, x) * s.exp()
                }),
            ));
        }
        TestFunctionBank { dim, seed, funcs }
    }

    pub fn len(&self) -> usize {
        self.funcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funcs.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Operator families
// ---------------------------------------------------------------------------

/// Parameters of the B₂ elliptic-sn family. The long-root coefficient is
/// amp_long/sn(scale·z, k) with the given modulus k; the short-root
/// coefficient is amp_short/sn(ε·scale·z, k̃) with the complementary data
/// k̃ = (1−k)/(1+k) and ε = −i(1+k). The reflection coefficient of each root
/// is ±e^{λ(α∨)z} times its plain coefficient.
#[derive(Clone)]
pub struct B2SnParams {
    pub amp_long: C64,
    pub amp_short: C64,
    pub scale: C64,
    pub modulus: C64,
    /// Covector (ambient coordinate values) for the exponential factors;
    /// all-zero disables them.
    pub lambda: Vec<C64>,
    /// Sign of the reflection coefficient.
    pub g_plus: bool,
    /// Diagnostic control: exchange which root length carries which modulus.
    /// The exchanged assignment does not satisfy the exchange identities and
    /// is kept only for negative-control tests.
    pub swap_orbits: bool,
}

impl B2SnParams {
    pub fn generic(seed: u64) -> B2SnParams {
        let mut rng = Rng::new(seed ^ 0x5A5A);
        B2SnParams {
            amp_long: rng.complex_in((0.4, 1.0), (-0.2, 0.2)),
            amp_short: rng.complex_in((0.4, 1.0), (-0.2, 0.2)),
            scale: C64::new(0.9, 0.0),
            modulus: C64::new(0.31, 0.04),
            lambda: vec![
                rng.complex_in((-0.3, 0.3), (-0.2, 0.2)),
                rng.complex_in((-0.3, 0.3), (-0.2, 0.2)),
            ],
            g_plus: true,
            swap_orbits: false,
        }
    }

    /// Complementary modulus k̃ = (1−k)/(1+k).
    pub fn modulus_tilde(&self) -> C64 {
        (C64::new(1.0, 0.0) - self.modulus) / (C64::new(1.0, 0.0) + self.modulus)
    }

    /// Argument multiplier ε = −i(1+k) of the complementary-modulus slot.
    pub fn eps(&self) -> C64 {
        C64::new(0.0, -1.0) * (C64::new(1.0, 0.0) + self.modulus)
    }

    /// (amplitude, argument multiplier, modulus) for a root of the given
    /// orbit (0 = long, 1 = short) under the current assignment.
    fn slot(&self, orbit: usize) -> (C64, C64, C64) {
        let slot_main = (self.amp_long, self.scale, self.modulus);
        let slot_comp = (self.amp_short, self.eps() * self.scale, self.modulus_tilde());
        let long_gets_main = !self.swap_orbits;
        if (orbit == 0) == long_gets_main {
            slot_main
        } else {
            slot_comp
        }
    }

    /// Plain coefficient f_α(z) for a root of the given orbit.
    pub fn f_of(&self, orbit: usize, z: C64) -> C64 {
        let (amp, mul, k) = self.slot(orbit);
        match jacobi_sn(mul * z, k) {
            Ok(s) => amp / s,
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    }
}

/// The supported operator families. Each produces one operator per positive
/// root of its root system via [`make_family`].
#[derive(Clone)]
pub enum OperatorFamily {
    /// ∂_α = (1 − s_α)/(α,ξ).
    DividedDifference,
    /// D_α = k_α(1 ∓ e^{λ(α∨)(α,ξ)}s_α)/(α,ξ), with k_α constant on each
    /// length orbit and λ a covector. `plus` selects the +s_α sign.
    BfvRationalExp {
        k_long: C64,
        k_short: C64,
        lambda: Vec<C64>,
        plus: bool,
    },
    /// Strand family D_ij = a/x_ij + k·g_ij(x_ij)e^{(α_i−α_j)x_ij}s_ij on
    /// type A, with elliptic coefficients from the parameters.
    CmElliptic(FamilyParams),
    /// Same operator shape with trigonometric coefficients.
    CmTrig(FamilyParams),
    /// Same operator shape with rational coefficients.
    CmRational(FamilyParams),
    /// The B₂ elliptic-sn family.
    B2Sn(B2SnParams),
}

impl OperatorFamily {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorFamily::DividedDifference => "divided_difference",
            OperatorFamily::BfvRationalExp { .. } => "bfv_rational_exp",
            OperatorFamily::CmElliptic(_) => "cm_elliptic",
            OperatorFamily::CmTrig(_) => "cm_trig",
            OperatorFamily::CmRational(_) => "cm_rational",
            OperatorFamily::B2Sn(_) => "b2_sn",
        }
    }

    fn strand_params(&self) -> Option<&FamilyParams> {
        match self {
            OperatorFamily::CmElliptic(p)
            | OperatorFamily::CmTrig(p)
            | OperatorFamily::CmRational(p) => Some(p),
            _ => None,
        }
    }
}

/// Strand pair (i, j) of an A-type positive root ε_i − ε_j.
fn strand_pair(rs: &RootSystem, idx: usize) -> (usize, usize) {
    let v = &rs.positive[idx];
    let i = (0..rs.dim).find(|&t| v[t] == 1).expect("A-type root");
    let j = (0..rs.dim).find(|&t| v[t] == -1).expect("A-type root");
    (i, j)
}

/// Build the family's operator for each positive root, in root order.
pub fn make_family(rs: Rc<RootSystem>, fam: &OperatorFamily) -> Result<Vec<Op>, String> {
    match fam {
        OperatorFamily::DividedDifference => {
            let mut ops = Vec::new();
            for a in 0..rs.num_positive() {
                let rs1 = rs.clone();
                let c_id: CF = Rc::new(move |x: &[C64]| {
                    C64::new(1.0, 0.0) / rs1.pairing_point(a, x)
                });
                let rs2 = rs.clone();
                let c_s: CF = Rc::new(move |x: &[C64]| {
                    -C64::new(1.0, 0.0) / rs2.pairing_point(a, x)
                });
                ops.push(
                    Op::term(rs.clone(), c_id, Vec::new())
                        .add(&Op::term(rs.clone(), c_s, vec![a])),
                );
            }
            Ok(ops)
        }
        OperatorFamily::BfvRationalExp {
            k_long,
            k_short,
            lambda,
            plus,
        } => {
            if lambda.len() != rs.dim {
                return Err(format!(
                    "covector has {} entries, ambient dimension is {}",
                    lambda.len(),
                    rs.dim
                ));
            }
            let mut ops = Vec::new();
            for a in 0..rs.num_positive() {
                let k = if rs.orbit(a) == 0 { *k_long } else { *k_short };
                let lam_a = rs.coroot_value(a, lambda);
                let sign = if *plus {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(-1.0, 0.0)
                };
                let rs1 = rs.clone();
                let c_id: CF = Rc::new(move |x: &[C64]| k / rs1.pairing_point(a, x));
                let rs2 = rs.clone();
                let c_s: CF = Rc::new(move |x: &[C64]| {
                    let z = rs2.pairing_point(a, x);
                    sign * k * (lam_a * z).exp() / z
                });
                ops.push(
                    Op::term(rs.clone(), c_id, Vec::new())
                        .add(&Op::term(rs.clone(), c_s, vec![a])),
                );
            }
            Ok(ops)
        }
        OperatorFamily::CmElliptic(_) | OperatorFamily::CmTrig(_) | OperatorFamily::CmRational(_) => {
            let params = fam.strand_params().expect("strand family");
            let n = match rs.kind {
                RootKind::A(n) => n,
                _ => return Err("strand families require a type-A root system".to_string()),
            };
            if params.lambda.len() != n || params.alpha.len() != n {
                return Err(format!(
                    "family parameters carry {} strands, root system has {}",
                    params.lambda.len(),
                    n
                ));
            }
            let expected = match (fam, params.kind) {
                (OperatorFamily::CmElliptic(_), FamilyKind::Elliptic)
                | (OperatorFamily::CmTrig(_), FamilyKind::Trigonometric)
                | (OperatorFamily::CmRational(_), FamilyKind::Rational) => true,
                _ => false,
            };
            if !expected {
                return Err("family tag does not match the parameter kind".to_string());
            }
            let params = Rc::new(params.clone());
            let mut ops = Vec::new();
            for idx in 0..rs.num_positive() {
                let (i, j) = strand_pair(&rs, idx);
                let a_const = params.a;
                let c_id: CF = Rc::new(move |x: &[C64]| a_const / (x[i] - x[j]));
                let p2 = params.clone();
                let c_s: CF = Rc::new(move |x: &[C64]| {
                    let z = x[i] - x[j];
                    let k = p2.k_coupling.sqrt();
                    let tilt = ((p2.alpha[i] - p2.alpha[j]) * z).exp();
                    match p2.g_coeff(i, j, z) {
                        Ok(g) => k * g * tilt,
                        Err(_) => C64::new(f64::NAN, f64::NAN),
                    }
                });
                ops.push(
                    Op::term(rs.clone(), c_id, Vec::new())
                        .add(&Op::term(rs.clone(), c_s, vec![idx])),
                );
            }
            Ok(ops)
        }
        OperatorFamily::B2Sn(p) => {
            if rs.kind != RootKind::B2 {
                return Err("the elliptic-sn family requires the B₂ root system".to_string());
            }
            if p.lambda.len() != 2 {
                return Err("B₂ covector needs 2 entries".to_string());
            }
            let p = Rc::new(p.clone());
            let mut ops = Vec::new();
            for a in 0..rs.num_positive() {
                let orbit = rs.orbit(a);
                let lam_a = rs.coroot_value(a, &p.lambda);
                let sign = if p.g_plus {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(-1.0, 0.0)
                };
                let rs1 = rs.clone();
                let p1 = p.clone();
                let c_id: CF = Rc::new(move |x: &[C64]| {
                    p1.f_of(orbit, rs1.pairing_point(a, x))
                });
                let rs2 = rs.clone();
                let p2 = p.clone();
                let c_s: CF = Rc::new(move |x: &[C64]| {
                    let z = rs2.pairing_point(a, x);
                    sign * (lam_a * z).exp() * p2.f_of(orbit, z)
                });
                ops.push(
                    Op::term(rs.clone(), c_id, Vec::new())
                        .add(&Op::term(rs.clone(), c_s, vec![a])),
                );
            }
            Ok(ops)
        }
    }
}

/// Distance from a point to the nearest pole of the family's coefficients.
/// Reflection hyperplanes and the transcendental pole loci are stable under
/// the Weyl group, so one margin check at x also protects every reflected
/// evaluation point arising in compositions.
pub fn family_pole_distance(rs: &RootSystem, fam: &OperatorFamily, x: &[C64]) -> f64 {
    let mut d = f64::INFINITY;
    for a in 0..rs.num_positive() {
        d = d.min(rs.pairing_point(a, x).norm());
    }
    match fam {
        OperatorFamily::DividedDifference | OperatorFamily::BfvRationalExp { .. } => d,
        OperatorFamily::B2Sn(p) => {
            for a in 0..rs.num_positive() {
                let z = rs.pairing_point(a, x);
                let (_, mul, k) = p.slot(rs.orbit(a));
                match jacobi_sn(mul * z, k) {
                    Ok(s) => d = d.min(s.norm()),
                    Err(_) => d = 0.0,
                }
            }
            d
        }
        _ => {
            let params = fam.strand_params().expect("strand family");
            d.min(params.pole_distance(x))
        }
    }
}

/// Draw sample points for a family with the plan's margin/retry policy.
pub fn family_points(
    rs: &RootSystem,
    fam: &OperatorFamily,
    plan: &SamplePlan,
) -> Result<Vec<Vec<C64>>, String> {
    plan.draw_points(rs.dim, |x| family_pole_distance(rs, fam, x))
}

// ---------------------------------------------------------------------------
// Identity verification
// ---------------------------------------------------------------------------

/// Verdict record for one verified identity or negative control.
#[derive(Clone, Debug, serde::Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub family: String,
    pub seed: u64,
    pub num_points: usize,
    pub num_functions: usize,
    pub max_residual: f64,
    pub tol: f64,
    /// For an identity: residual ≤ tol. For a negative control: residual
    /// exceeded the rejection bar (the control was correctly rejected).
    pub pass: bool,
    pub negative_control: bool,
}

/// Residual of "op = 0" over a whole bank and point set.
pub fn max_zero_residual(op: &Op, bank: &TestFunctionBank, points: &[Vec<C64>]) -> f64 {
    let mut worst = 0.0f64;
    for (_, f) in &bank.funcs {
        for x in points {
            worst = worst.max(op.zero_residual(f.as_ref(), x));
        }
    }
    worst
}

/// Verify that `op` (an already-assembled difference of two sides) vanishes
/// on the bank at the given points.
pub fn verify_operator_identity(
    name: &str,
    family: &str,
    op: &Op,
    bank: &TestFunctionBank,
    points: &[Vec<C64>],
    tol: f64,
    seed: u64,
) -> IdentityReport {
    let worst = max_zero_residual(op, bank, points);
    IdentityReport {
        name: name.to_string(),
        family: family.to_string(),
        seed,
        num_points: points.len(),
        num_functions: bank.len(),
        max_residual: worst,
        tol,
        pass: worst <= tol,
        negative_control: false,
    }
}

/// Record a negative control: `op` must NOT vanish — its residual has to
/// clear `bar` (typically 10³·tol) for the control to pass.
pub fn verify_negative_control(
    name: &str,
    family: &str,
    op: &Op,
    bank: &TestFunctionBank,
    points: &[Vec<C64>],
    bar: f64,
    seed: u64,
) -> IdentityReport {
    let worst = max_zero_residual(op, bank, points);
    IdentityReport {
        name: name.to_string(),
        family: family.to_string(),
        seed,
        num_points: points.len(),
        num_functions: bank.len(),
        max_residual: worst,
        tol: bar,
        pass: worst > bar,
        negative_control: true,
    }
}

/// Normalized bracket operator [i j] for any i ≠ j from the per-root
/// operators of a strand family: for i < j this is D_ij − a/x_ij (the
/// reflection term alone); for i > j it is −[j i].
pub fn bracket_op(
    rs: &Rc<RootSystem>,
    fam: &OperatorFamily,
    i: usize,
    j: usize,
) -> Result<Op, String> {
    if i == j {
        return Err("bracket needs distinct strands".to_string());
    }
    let (lo, hi, sign) = if i < j {
        (i, j, C64::new(1.0, 0.0))
    } else {
        (j, i, C64::new(-1.0, 0.0))
    };
    let params = fam
        .strand_params()
        .ok_or_else(|| "bracket operators come from strand families".to_string())?;
    let idx = (0..rs.num_positive())
        .find(|&t| strand_pair(rs, t) == (lo, hi))
        .ok_or_else(|| "no such root".to_string())?;
    let params = Rc::new(params.clone());
    let c_s: CF = Rc::new(move |x: &[C64]| {
        let z = x[lo] - x[hi];
        let k = params.k_coupling.sqrt();
        let tilt = ((params.alpha[lo] - params.alpha[hi]) * z).exp();
        match params.g_coeff(lo, hi, z) {
            Ok(g) => k * g * tilt,
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    });
    Ok(Op::term(rs.clone(), c_s, vec![idx]).scale(sign))
}

/// Build Σ c·[i₁j₁][i₂j₂]⋯ from bracket words over a strand family.
pub fn bracket_word_op(
    rs: &Rc<RootSystem>,
    fam: &OperatorFamily,
    terms: &[(C64, &[(usize, usize)])],
) -> Result<Op, String> {
    let mut acc = Op::zero(rs.clone());
    for (c, word) in terms {
        let mut prod = Op::identity(rs.clone());
        for &(i, j) in word.iter() {
            prod = prod.compose(&bracket_op(rs, fam, i, j)?);
        }
        acc = acc.add(&prod.scale(*c));
    }
    Ok(acc)
}

/// Truncated Dunkl operator ∇_i = Σ_{j≠i} D_ij, with D_ij = −D_ji for j < i.
pub fn truncated_dunkl(
    rs: &Rc<RootSystem>,
    ops: &[Op],
    i: usize,
) -> Result<Op, String> {
    let n = match rs.kind {
        RootKind::A(n) => n,
        _ => return Err("truncated Dunkl operators are defined on type A".to_string()),
    };
    if i >= n {
        return Err("strand index out of range".to_string());
    }
    let mut acc = Op::zero(rs.clone());
    for j in 0..n {
        if j == i {
            continue;
        }
        let (lo, hi, sign) = if i < j {
            (i, j, C64::new(1.0, 0.0))
        } else {
            (j, i, C64::new(-1.0, 0.0))
        };
        let idx = (0..rs.num_positive())
            .find(|&t| strand_pair(rs, t) == (lo, hi))
            .expect("pair root exists");
        acc = acc.add(&ops[idx].scale(sign));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Exact divided differences on polynomials
// ---------------------------------------------------------------------------

/// Exact ∂_α p = (p − s_α p)/(α,ξ) on integer/rational polynomials. The
/// numerator is always divisible: it is antisymmetric under s_α. Requires a
/// root whose reflection is a signed coordinate permutation (all of type A
/// and B₂).
pub fn divided_difference_poly(rs: &RootSystem, alpha_idx: usize, p: &MPoly) -> MPoly {
    let perm = rs
        .reflection_signed_perm(alpha_idx)
        .expect("reflection acts by signed coordinate permutation");
    let num = p.sub(&p.subst_signed_perm(&perm));
    let coeffs: Vec<Q> = rs.positive[alpha_idx].iter().map(|&c| qi(c)).collect();
    num.div_exact_linear(&coeffs, &qi(0))
        .expect("anti-invariant numerator is divisible by the root form")
}

/// Apply a word of divided differences: indices in operator order, so the
/// rightmost acts first.
pub fn dd_word_poly(rs: &RootSystem, word: &[usize], p: &MPoly) -> MPoly {
    let mut out = p.clone();
    for &a in word.iter().rev() {
        out = divided_difference_poly(rs, a, &out);
    }
    out
}

/// The defining relation set of the B₂ bracket algebra, as signed words in
/// the four positive-root generators (order: ε₁−ε₂, ε₁+ε₂, ε₁, ε₂). Shared
/// with the braided-symmetrizer kernel checks.
pub fn b2_bracket_relations() -> Vec<(String, Vec<(i64, Vec<usize>)>)> {
    let mut rels: Vec<(String, Vec<(i64, Vec<usize>)>)> = Vec::new();
    for g in 0..4usize {
        rels.push((format!("square{g}"), vec![(1, vec![g, g])]));
    }
    rels.push((
        "commute-long".to_string(),
        vec![(1, vec![0, 1]), (-1, vec![1, 0])],
    ));
    rels.push((
        "commute-short".to_string(),
        vec![(1, vec![2, 3]), (-1, vec![3, 2])],
    ));
    rels.push((
        "mixed-a".to_string(),
        vec![(1, vec![0, 2]), (-1, vec![3, 0]), (1, vec![2, 1]), (1, vec![1, 3])],
    ));
    rels.push((
        "mixed-b".to_string(),
        vec![(1, vec![2, 0]), (-1, vec![0, 3]), (1, vec![1, 2]), (1, vec![3, 1])],
    ));
    rels.push((
        "quartic-sum".to_string(),
        vec![
            (1, vec![0, 2, 1, 2]),
            (1, vec![1, 2, 0, 2]),
            (1, vec![2, 0, 2, 1]),
            (1, vec![2, 1, 2, 0]),
        ],
    ));
    rels.push((
        "quartic-commute".to_string(),
        vec![(1, vec![2, 0, 2, 0]), (-1, vec![0, 2, 0, 2])],
    ));
    rels
}

/// Check every B₂ bracket relation exactly for the divided-difference
/// representation on all monomials of total degree ≤ max_deg.
pub fn b2_dd_relations_exact(max_deg: u32) -> Result<(), String> {
    let rs = RootSystem::b2();
    let rels = b2_bracket_relations();
    for da in 0..=max_deg {
        for db in 0..=(max_deg - da) {
            let mut mono = MPoly::one(2);
            for _ in 0..da {
                mono = mono.mul(&MPoly::var(2, 0));
            }
            for _ in 0..db {
                mono = mono.mul(&MPoly::var(2, 1));
            }
            for (name, rel) in &rels {
                let mut acc = MPoly::zero(2);
                for (c, word) in rel {
                    acc = acc.add(&dd_word_poly(&rs, word, &mono).scale(&qi(*c)));
                }
                if !acc.is_zero() {
                    return Err(format!(
                        "relation {name} fails on x^{da} y^{db}: remainder {}",
                        acc.render(&["x", "y"])
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Build one relation as an operator from a family's per-root operators.
pub fn relation_op(rs: &Rc<RootSystem>, ops: &[Op], rel: &[(i64, Vec<usize>)]) -> Op {
    let mut acc = Op::zero(rs.clone());
    for (c, word) in rel {
        let mut prod = Op::identity(rs.clone());
        for &g in word {
            prod = prod.compose(&ops[g]);
        }
        acc = acc.add(&prod.scale(C64::new(*c as f64, 0.0)));
    }
    acc
}

// ---------------------------------------------------------------------------
// Conjugation to plain divided differences
// ---------------------------------------------------------------------------

/// Positive roots that are not sums of two positive roots.
pub fn simple_root_indices(rs: &RootSystem) -> Vec<usize> {
    (0..rs.num_positive())
        .filter(|&b| {
            !(0..rs.num_positive()).any(|g| {
                (0..rs.num_positive()).any(|d| {
                    g != b
                        && d != b
                        && (0..rs.dim)
                            .all(|t| rs.positive[g][t] + rs.positive[d][t] == rs.positive[b][t])
                })
            })
        })
        .collect()
}

/// Fundamental dominant weights paired with the simple roots:
/// (π_i, α_j∨) = δ_ij. Returned as (simple root index, ambient vector).
pub fn fundamental_weights(rs: &RootSystem) -> Option<Vec<(usize, Vec<f64>)>> {
    let simples = simple_root_indices(rs);
    match rs.kind {
        RootKind::A(_) => Some(
            simples
                .iter()
                .map(|&s| {
                    let v = &rs.positive[s];
                    let i = (0..rs.dim).find(|&t| v[t] == 1).expect("simple root");
                    let mut w = vec![0.0f64; rs.dim];
                    for t in w.iter_mut().take(i + 1) {
                        *t = 1.0;
                    }
                    (s, w)
                })
                .collect(),
        ),
        RootKind::B2 => Some(
            simples
                .iter()
                .map(|&s| {
                    let w = if rs.positive[s] == vec![1i64, -1] {
                        vec![1.0, 0.0]
                    } else {
                        vec![0.5, 0.5]
                    };
                    (s, w)
                })
                .collect(),
        ),
        RootKind::G2 => None,
    }
}

/// Check D_α = k_α·e ∘ ∂_α ∘ e⁻¹ over every positive root, where for the
/// −s_α sign e = exp(Σ_i λ(α_i∨)·π_i(ξ)) over the simple roots, and for the
/// +s_α sign e additionally carries the factor Π_{β>0}(β,ξ).
pub fn conjugation_check(
    rs: Rc<RootSystem>,
    k_long: C64,
    k_short: C64,
    lambda: &[C64],
    plus: bool,
    seed: u64,
    tol: f64,
) -> Result<IdentityReport, String> {
    let fam = OperatorFamily::BfvRationalExp {
        k_long,
        k_short,
        lambda: lambda.to_vec(),
        plus,
    };
    let ops = make_family(rs.clone(), &fam)?;
    let weights = fundamental_weights(&rs)
        .ok_or_else(|| "no fundamental-weight data for this root system".to_string())?;
    let lam_values: Vec<(Vec<f64>, C64)> = weights
        .iter()
        .map(|(s, w)| (w.clone(), rs.coroot_value(*s, lambda)))
        .collect();
    let rs_e = rs.clone();
    let with_product = plus;
    let gauge = move |x: &[C64]| -> C64 {
        let mut expo = C64::new(0.0, 0.0);
        for (w, l) in &lam_values {
            let pi: C64 = w
                .iter()
                .zip(x.iter())
                .map(|(c, xi)| xi * *c)
                .sum();
            expo += *l * pi;
        }
        let mut val = expo.exp();
        if with_product {
            for b in 0..rs_e.num_positive() {
                val *= rs_e.pairing_point(b, x);
            }
        }
        val
    };
    let gauge = Rc::new(gauge);

    let plan = SamplePlan::new(derive_seed(seed, "conjugation"));
    let points = family_points(&rs, &fam, &plan)?;
    let bank = TestFunctionBank::new(rs.dim, derive_seed(seed, "conjugation-bank"));

    let mut worst = 0.0f64;
    for (a, op) in ops.iter().enumerate() {
        let k = if rs.orbit(a) == 0 { k_long } else { k_short };
        for (_, f) in &bank.funcs {
            let g = gauge.clone();
            let fc = f.clone();
            let h = move |y: &[C64]| fc(y) / g(y);
            for x in &points {
                let lhs = op.apply(f.as_ref(), x);
                let sx = rs.reflect_point(a, x);
                let z = rs.pairing_point(a, x);
                let rhs = k * gauge(x) * (h(x) - h(&sx)) / z;
                worst = worst.max(crate::rng::residual(lhs, rhs));
            }
        }
    }
    Ok(IdentityReport {
        name: if plus {
            "conjugation-plus".to_string()
        } else {
            "conjugation-minus".to_string()
        },
        family: "bfv_rational_exp".to_string(),
        seed,
        num_points: points.len(),
        num_functions: bank.len(),
        max_residual: worst,
        tol,
        pass: worst <= tol,
        negative_control: false,
    })
}

// ---------------------------------------------------------------------------
// G₂ six-term relation
// ---------------------------------------------------------------------------

/// λ values per positive root induced by a covector: λ_γ = λ(γ∨). These
/// automatically satisfy the linear constraints the six-term relation needs.
pub fn g2_coroot_lambdas(rs: &RootSystem, ell: &[C64]) -> Vec<C64> {
    (0..rs.num_positive())
        .map(|a| rs.coroot_value(a, ell))
        .collect()
}

fn g2_ops(
    rs: &Rc<RootSystem>,
    k_long: C64,
    k_short: C64,
    lam_per_root: &[C64],
) -> Vec<Op> {
    let mut ops = Vec::new();
    for a in 0..rs.num_positive() {
        let k = if rs.orbit(a) == 0 { k_long } else { k_short };
        let lam = lam_per_root[a];
        let rs1 = rs.clone();
        let c_id: CF = Rc::new(move |x: &[C64]| k / rs1.pairing_point(a, x));
        let rs2 = rs.clone();
        let c_s: CF = Rc::new(move |x: &[C64]| {
            let z = rs2.pairing_point(a, x);
            -k * (lam * z).exp() / z
        });
        ops.push(
            Op::term(rs.clone(), c_id, Vec::new()).add(&Op::term(rs.clone(), c_s, vec![a])),
        );
    }
    ops
}

/// The G₂ chain relation: with positive roots ordered along the chain
/// γ₀,…,γ₅ (alternating long/short), Σ_{t=0..4} D_{γ_t}D_{γ_{t+1}} equals
/// D_{γ₅}D_{γ₀}. Holds when every λ_γ comes from one covector via γ∨; a
/// per-root override lets the caller violate the constraints on purpose.
pub fn g2_constraint_check(
    k_long: C64,
    k_short: C64,
    lam_per_root: &[C64],
    seed: u64,
    tol: f64,
    name: &str,
    expect_pass: bool,
) -> Result<IdentityReport, String> {
    let rs = Rc::new(RootSystem::g2());
    if lam_per_root.len() != rs.num_positive() {
        return Err("need one λ per positive root".to_string());
    }
    let ops = g2_ops(&rs, k_long, k_short, lam_per_root);
    let mut rel = Op::zero(rs.clone());
    for t in 0..5 {
        rel = rel.add(&ops[t].compose(&ops[t + 1]));
    }
    rel = rel.sub(&ops[5].compose(&ops[0]));

    let fam = OperatorFamily::BfvRationalExp {
        k_long,
        k_short,
        lambda: vec![C64::new(0.0, 0.0); rs.dim],
        plus: false,
    };
    let plan = SamplePlan::new(derive_seed(seed, "g2"));
    let points = family_points(&rs, &fam, &plan)?;
    let bank = TestFunctionBank::new(rs.dim, derive_seed(seed, "g2-bank"));
    Ok(if expect_pass {
        verify_operator_identity(name, "bfv_rational_exp", &rel, &bank, &points, tol, seed)
    } else {
        verify_negative_control(
            name,
            "bfv_rational_exp",
            &rel,
            &bank,
            &points,
            1e3 * tol,
            seed,
        )
    })
}

// ---------------------------------------------------------------------------
// Functional-equation suite
// ---------------------------------------------------------------------------

fn combine(terms: &[C64]) -> (C64, f64) {
    let mut acc = C64::new(0.0, 0.0);
    let mut scale = 1.0f64;
    for t in terms {
        acc += t;
        scale = scale.max(t.norm());
    }
    (acc, scale)
}

/// Scalar parameters of the three-strand equations. The λ's satisfy
/// λ₁₂+λ₂₃+λ₃₁ = 0 unless deliberately perturbed.
#[derive(Clone, Copy)]
struct ThreeStrand {
    k: C64,
    lam12: C64,
    lam23: C64,
    lam31: C64,
}

/// Scalar parameters of the two-strand (B₂) equations: amplitudes k (long)
/// and k′ (short), exponents λ₁₂ and λ₁̄₂ for the two long roots; the short
/// exponents are λ₁ = λ₁₂+λ₁̄₂ and λ₂ = −λ₁₂+λ₁̄₂.
#[derive(Clone, Copy)]
struct TwoStrand {
    k: C64,
    kp: C64,
    lam12: C64,
    lam1b2: C64,
}

impl TwoStrand {
    fn lam1(&self) -> C64 {
        self.lam12 + self.lam1b2
    }
    fn lam2(&self) -> C64 {
        -self.lam12 + self.lam1b2
    }
}

struct EqEval {
    name: &'static str,
    dim: usize,
    /// residual terms at a point, normal and perturbed variant
    terms: Rc<dyn Fn(&[C64], bool) -> Vec<C64>>,
}

fn suite_equations(seed: u64) -> Vec<EqEval> {
    let mut rng = Rng::new(seed ^ 0xEC5);
    let k = rng.complex_in((0.5, 1.2), (-0.3, 0.3));
    let kp = rng.complex_in((0.5, 1.2), (-0.3, 0.3));
    let lam12 = rng.complex_in((-0.6, 0.6), (-0.3, 0.3));
    let lam23 = rng.complex_in((-0.6, 0.6), (-0.3, 0.3));
    let three = ThreeStrand {
        k,
        lam12,
        lam23,
        lam31: -(lam12 + lam23),
    };
    let two = TwoStrand {
        k,
        kp,
        lam12,
        lam1b2: lam23,
    };
    let bump = C64::new(0.1, 0.0);
    let amp = C64::new(1.1, 0.0);

    let mut eqs: Vec<EqEval> = Vec::new();

    // (1) f₁₂(x−y)f₂₃(y−z) + f₂₃(y−z)f₃₁(z−x) + f₃₁(z−x)f₁₂(x−y) = 0
    // with f = k/z; the control scales the third function's amplitude.
    let t3 = three;
    eqs.push(EqEval {
        name: "eq1-cycle-f",
        dim: 3,
        terms: Rc::new(move |p: &[C64], perturbed: bool| {
            let (x, y, z) = (p[0], p[1], p[2]);
            let (u, v, w) = (x - y, y - z, z - x);
            let k3 = if perturbed { t3.k * amp } else { t3.k };
            vec![t3.k * t3.k / (u * v), t3.k * k3 / (v * w), k3 * t3.k / (w * u)]
        }),
    });

    // (2) g₁₂(x−y)g₂₃(x−z) + g₂₃(y−z)g₃₁(y−x) + g₃₁(z−x)g₁₂(z−y) = 0
    // with g_ij(z) = k e^{λ_ij z}/z; the control bumps λ₃₁.
    eqs.push(EqEval {
        name: "eq2-cycle-g",
        dim: 3,
        terms: Rc::new(move |p: &[C64], perturbed: bool| {
            let (x, y, z) = (p[0], p[1], p[2]);
            let lam31 = if perturbed { t3.lam31 + bump } else { t3.lam31 };
            let g = |lam: C64, zz: C64| t3.k * (lam * zz).exp() / zz;
            vec![
                g(t3.lam12, x - y) * g(t3.lam23, x - z),
                g(t3.lam23, y - z) * g(lam31, y - x),
                g(lam31, z - x) * g(t3.lam12, z - y),
            ]
        }),
    });

    // (3) f₁₂(x−y)f₁(x) − f₂(y)f₁₂(x−y) + f₁̄₂(x+y)f₂(y) + f₁(x)f₁̄₂(x+y) = 0
    // with f₁₂ = f₁̄₂ = k/z and f₁ = f₂ = k′/z; the control scales f₁̄₂.
    let t2 = two;
    eqs.push(EqEval {
        name: "eq3-mixed-f",
        dim: 2,
        terms: Rc::new(move |p: &[C64], perturbed: bool| {
            let (x, y) = (p[0], p[1]);
            let klong = if perturbed { t2.k * amp } else { t2.k };
            vec![
                t2.k / (x - y) * (t2.kp / x),
                -(t2.kp / y) * (t2.k / (x - y)),
                klong / (x + y) * (t2.kp / y),
                (t2.kp / x) * (klong / (x + y)),
            ]
        }),
    });

    // (4) g₁₂(x−y)g₁(y) − g₂(y)g₁₂(x+y) + g₁̄₂(x+y)g₂(−x) + g₁(x)g₁̄₂(−x+y) = 0;
    // the control bumps λ₁ off λ₁₂+λ₁̄₂.
    eqs.push(EqEval {
        name: "eq4-mixed-g",
        dim: 2,
        terms: Rc::new(move |p: &[C64], perturbed: bool| {
            let (x, y) = (p[0], p[1]);
            let lam1 = if perturbed { t2.lam1() + bump } else { t2.lam1() };
            let glong = |lam: C64, zz: C64| t2.k * (lam * zz).exp() / zz;
            let gshort = |lam: C64, zz: C64| t2.kp * (lam * zz).exp() / zz;
            vec![
                glong(t2.lam12, x - y) * gshort(lam1, y),
                -gshort(t2.lam2(), y) * glong(t2.lam12, x + y),
                glong(t2.lam1b2, x + y) * gshort(t2.lam2(), -x),
                gshort(lam1, x) * glong(t2.lam1b2, y - x),
            ]
        }),
    });

    // (5) (1/(x−y)+1/(x+y))f₁(x) + (−1/(x−y)+1/(x+y))f₂(y) = 0 with
    // f₁ = f₂ = k′/z; the control scales f₂.
    eqs.push(EqEval {
        name: "eq5-short-f",
        dim: 2,
        terms: Rc::new(move |p: &[C64], perturbed: bool| {
            let (x, y) = (p[0], p[1]);
            let f2 = if perturbed { t2.kp * amp } else { t2.kp };
            vec![
                (C64::new(1.0, 0.0) / (x - y) + C64::new(1.0, 0.0) / (x + y)) * (t2.kp / x),
                (-C64::new(1.0, 0.0) / (x - y) + C64::new(1.0, 0.0) / (x + y)) * (f2 / y),
            ]
        }),
    });

    // (6) e^{λ₁₂(x−y)}/(x−y)·g₁(y) − e^{λ₁₂(x+y)}/(x+y)·g₂(y)
    //     + e^{λ₁̄₂(x+y)}/(x+y)·g₂(−x) + e^{λ₁̄₂(−x+y)}/(−x+y)·g₁(x) = 0;
    // the control scales g₂.
    eqs.push(EqEval {
        name: "eq6-short-g",
        dim: 2,
        terms: Rc::new(move |p: &[C64], perturbed: bool| {
            let (x, y) = (p[0], p[1]);
            let c2 = if perturbed { t2.kp * amp } else { t2.kp };
            let g1 = |zz: C64| t2.kp * (t2.lam1() * zz).exp() / zz;
            let g2 = |zz: C64| c2 * (t2.lam2() * zz).exp() / zz;
            vec![
                (t2.lam12 * (x - y)).exp() / (x - y) * g1(y),
                -(t2.lam12 * (x + y)).exp() / (x + y) * g2(y),
                (t2.lam1b2 * (x + y)).exp() / (x + y) * g2(-x),
                (t2.lam1b2 * (y - x)).exp() / (y - x) * g1(x),
            ]
        }),
    });

    // (7) (x+y)e^{λ₁₂(x−y)}φ₁(y)/y − (x−y)e^{λ₁₂(x+y)}φ₂(y)/y
    //     − (x−y)e^{λ₁̄₂(x+y)}φ₂(−x)/x − (x+y)e^{λ₁̄₂(−x+y)}φ₁(x)/x = 0
    // with φᵢ(z) = e^{λᵢ z}; the control bumps φ₂'s exponent.
    eqs.push(EqEval {
        name: "eq7-exp-factors",
        dim: 2,
        terms: Rc::new(move |p: &[C64], perturbed: bool| {
            let (x, y) = (p[0], p[1]);
            let l2 = if perturbed { t2.lam2() + bump } else { t2.lam2() };
            let phi1 = |zz: C64| (t2.lam1() * zz).exp();
            let phi2 = |zz: C64| (l2 * zz).exp();
            vec![
                (x + y) * (t2.lam12 * (x - y)).exp() * phi1(y) / y,
                -(x - y) * (t2.lam12 * (x + y)).exp() * phi2(y) / y,
                -(x - y) * (t2.lam1b2 * (x + y)).exp() * phi2(-x) / x,
                -(x + y) * (t2.lam1b2 * (y - x)).exp() * phi1(x) / x,
            ]
        }),
    });

    // The mixed exchange identity with the B₂ elliptic-sn coefficients:
    // f_long(x−y)(f_short(x) − f_short(y)) + f_long(x+y)(f_short(y) + f_short(x)).
    // The control uses the orbit-exchanged modulus assignment.
    let snp = B2SnParams::generic(seed);
    eqs.push(EqEval {
        name: "eq3-b2-sn",
        dim: 2,
        terms: Rc::new(move |p: &[C64], perturbed: bool| {
            let (x, y) = (p[0], p[1]);
            let mut params = snp.clone();
            params.swap_orbits = perturbed;
            let fl = |zz: C64| params.f_of(0, zz);
            let fs = |zz: C64| params.f_of(1, zz);
            vec![
                fl(x - y) * fs(x),
                -fs(y) * fl(x - y),
                fl(x + y) * fs(y),
                fs(x) * fl(x + y),
            ]
        }),
    });

    eqs
}

/// Pole distance for the functional-equation samples: all linear forms that
/// appear as denominators, and the sn zero loci for the sn-coefficient
/// equation.
fn funceq_pole_distance(p: &[C64], snp: &B2SnParams) -> f64 {
    let (x, y) = (p[0], p[1]);
    let mut d = f64::INFINITY;
    for v in [x, y, x - y, x + y] {
        d = d.min(v.norm());
    }
    if p.len() > 2 {
        let z = p[2];
        for v in [z, y - z, z - x] {
            d = d.min(v.norm());
        }
    }
    for orbit in 0..2 {
        for zz in [x - y, x + y, x, y] {
            let val = snp.f_of(orbit, zz);
            if !val.is_finite() {
                return 0.0;
            }
            // f = amp/sn: a zero of sn is a pole of f; keep |sn| off zero by
            // keeping |f| bounded.
            d = d.min(1.0 / val.norm().max(1e-12));
        }
    }
    d
}

/// Evaluate the whole functional-equation suite: each equation at seeded
/// points (pass expected), plus a structurally perturbed variant of each
/// (rejection expected, residual above 10³·tol).
pub fn functional_equation_suite(seed: u64, tol: f64) -> Result<Vec<IdentityReport>, String> {
    let eqs = suite_equations(seed);
    let snp = B2SnParams::generic(seed);
    let plan = SamplePlan::new(derive_seed(seed, "funceq"));
    let points = plan.draw_points(3, |p| funceq_pole_distance(p, &snp))?;
    let mut out = Vec::new();
    for eq in &eqs {
        let mut worst_ok = 0.0f64;
        let mut worst_bad = 0.0f64;
        for p in &points {
            let q = &p[..eq.dim.max(2)];
            let (v, s) = combine(&(eq.terms)(q, false));
            worst_ok = worst_ok.max(v.norm() / s);
            let (vb, sb) = combine(&(eq.terms)(q, true));
            worst_bad = worst_bad.max(vb.norm() / sb);
        }
        out.push(IdentityReport {
            name: eq.name.to_string(),
            family: "functional-equation".to_string(),
            seed,
            num_points: points.len(),
            num_functions: 0,
            max_residual: worst_ok,
            tol,
            pass: worst_ok <= tol,
            negative_control: false,
        });
        out.push(IdentityReport {
            name: format!("{}-control", eq.name),
            family: "functional-equation".to_string(),
            seed,
            num_points: points.len(),
            num_functions: 0,
            max_residual: worst_bad,
            tol: 1e3 * tol,
            pass: worst_bad > 1e3 * tol,
            negative_control: true,
        });
    }
    Ok(out)
}

/// Full operator-representation suite: square identities for every family,
/// bracket relations for the B₂ families, conjugation identities, the G₂
/// chain identity under the coroot constraint, truncated Dunkl operator
/// commutativity, and a perturbed negative control for each class.
pub fn operator_suite(seed: u64, tol: f64) -> Result<Vec<IdentityReport>, String> {
    operator_suite_with_tau(seed, tol, None)
}

/// [`operator_suite`] with an overridden modular parameter for the elliptic
/// strand family (`Im τ > 0` required; other families ignore it).
pub fn operator_suite_with_tau(
    seed: u64,
    tol: f64,
    tau: Option<C64>,
) -> Result<Vec<IdentityReport>, String> {
    if let Some(t) = tau {
        if t.im <= 0.0 {
            return Err(format!("tau must have positive imaginary part, got {t}"));
        }
    }
    let mut out = Vec::new();

    // Strand families on A₃ (four strands): D_α² acts as ψ(x_i − x_j)·id.
    let strand: [(FamilyKind, &str, fn(FamilyParams) -> OperatorFamily); 3] = [
        (FamilyKind::Elliptic, "cm-elliptic", OperatorFamily::CmElliptic),
        (
            FamilyKind::Trigonometric,
            "cm-trig",
            OperatorFamily::CmTrig,
        ),
        (FamilyKind::Rational, "cm-rational", OperatorFamily::CmRational),
    ];
    for (kind, label, mk) in strand {
        let n = 4usize;
        let mut params = FamilyParams::generic(kind, n, derive_seed(seed, label));
        if let Some(t) = tau {
            params.tau = t;
        }
        let fam = mk(params.clone());
        let rs = Rc::new(RootSystem::a_type(n));
        let ops = make_family(rs.clone(), &fam)?;
        let plan = SamplePlan::new(derive_seed(seed, "square-points"));
        let points = family_points(&rs, &fam, &plan)?;
        let bank = TestFunctionBank::new(n, derive_seed(seed, "square-bank"));
        let mut worst = 0.0f64;
        for idx in 0..rs.num_positive() {
            let (i, j) = strand_pair(&rs, idx);
            let sq = ops[idx].compose(&ops[idx]);
            let p2 = params.clone();
            let mult: CF = Rc::new(move |x: &[C64]| {
                p2.psi(i, j, x[i] - x[j])
                    .expect("sample points stay away from the coefficient poles")
            });
            let diff = sq.sub(&Op::scalar_fn(rs.clone(), mult));
            worst = worst.max(max_zero_residual(&diff, &bank, &points));
        }
        out.push(IdentityReport {
            name: "square-is-psi-multiplication".to_string(),
            family: label.to_string(),
            seed,
            num_points: points.len(),
            num_functions: bank.len(),
            max_residual: worst,
            tol,
            pass: worst <= tol,
            negative_control: false,
        });

        // Control: mis-scaling ψ must be rejected loudly.
        if matches!(kind, FamilyKind::Elliptic) {
            let idx = 0usize;
            let (i, j) = strand_pair(&rs, idx);
            let sq = ops[idx].compose(&ops[idx]);
            let p2 = params.clone();
            let mult: CF = Rc::new(move |x: &[C64]| {
                p2.psi(i, j, x[i] - x[j])
                    .expect("sample points stay away from the coefficient poles")
                    * C64::new(1.01, 0.0)
            });
            let diff = sq.sub(&Op::scalar_fn(rs.clone(), mult));
            out.push(verify_negative_control(
                "square-with-mis-scaled-psi",
                label,
                &diff,
                &bank,
                &points,
                1e3 * tol,
                seed,
            ));
        }
    }

    // Exponential-rational family: D_α² = 0 on A₂ and B₂, both signs.
    for (rs, rs_label) in [
        (Rc::new(RootSystem::a_type(3)), "a2"),
        (Rc::new(RootSystem::b2()), "b2"),
    ] {
        let lambda: Vec<C64> = (0..rs.dim)
            .map(|t| C64::new(0.23 + 0.11 * t as f64, -0.08 + 0.05 * t as f64))
            .collect();
        for plus in [false, true] {
            let fam = OperatorFamily::BfvRationalExp {
                k_long: C64::new(0.9, 0.2),
                k_short: C64::new(0.6, -0.3),
                lambda: lambda.clone(),
                plus,
            };
            let ops = make_family(rs.clone(), &fam)?;
            let plan = SamplePlan::new(derive_seed(seed, "bfv-points"));
            let points = family_points(&rs, &fam, &plan)?;
            let bank = TestFunctionBank::new(rs.dim, derive_seed(seed, "bfv-bank"));
            let mut worst = 0.0f64;
            for op in &ops {
                let sq = op.compose(op);
                worst = worst.max(max_zero_residual(&sq, &bank, &points));
            }
            let sign = if plus { "plus" } else { "minus" };
            out.push(IdentityReport {
                name: format!("square-zero-{rs_label}-{sign}"),
                family: "bfv-rational-exp".to_string(),
                seed,
                num_points: points.len(),
                num_functions: bank.len(),
                max_residual: worst,
                tol,
                pass: worst <= tol,
                negative_control: false,
            });
        }
    }

    // Plain divided differences square to zero.
    {
        let rs = Rc::new(RootSystem::a_type(4));
        let fam = OperatorFamily::DividedDifference;
        let ops = make_family(rs.clone(), &fam)?;
        let plan = SamplePlan::new(derive_seed(seed, "dd-points"));
        let points = family_points(&rs, &fam, &plan)?;
        let bank = TestFunctionBank::new(4, derive_seed(seed, "dd-bank"));
        let mut worst = 0.0f64;
        for op in &ops {
            worst = worst.max(max_zero_residual(&op.compose(op), &bank, &points));
        }
        out.push(IdentityReport {
            name: "square-zero".to_string(),
            family: "divided-difference".to_string(),
            seed,
            num_points: points.len(),
            num_functions: bank.len(),
            max_residual: worst,
            tol,
            pass: worst <= tol,
            negative_control: false,
        });
    }

    // B₂ elliptic-sn family: all bracket relations, plus the orbit-swapped
    // control on a mixed relation.
    {
        let rs = Rc::new(RootSystem::b2());
        for g_plus in [true, false] {
            let mut params = B2SnParams::generic(derive_seed(seed, "sn"));
            params.g_plus = g_plus;
            let fam = OperatorFamily::B2Sn(params);
            let ops = make_family(rs.clone(), &fam)?;
            let plan = SamplePlan::new(derive_seed(seed, "sn-points"));
            let points = family_points(&rs, &fam, &plan)?;
            let bank = TestFunctionBank::new(2, derive_seed(seed, "sn-bank"));
            let sign = if g_plus { "plus" } else { "minus" };
            for (name, rel) in b2_bracket_relations() {
                let op = relation_op(&rs, &ops, &rel);
                out.push(verify_operator_identity(
                    &format!("b2-sn-{sign}-{name}"),
                    "b2-sn",
                    &op,
                    &bank,
                    &points,
                    tol,
                    seed,
                ));
            }
        }
        let mut params = B2SnParams::generic(derive_seed(seed, "sn"));
        params.swap_orbits = true;
        let fam = OperatorFamily::B2Sn(params);
        let ops = make_family(rs.clone(), &fam)?;
        let plan = SamplePlan::new(derive_seed(seed, "sn-ctl-points"));
        let points = family_points(&rs, &fam, &plan)?;
        let bank = TestFunctionBank::new(2, derive_seed(seed, "sn-ctl-bank"));
        let mixed = b2_bracket_relations()
            .into_iter()
            .find(|(n, _)| n == "mixed-a")
            .map(|(_, r)| r)
            .expect("mixed relation present");
        let op = relation_op(&rs, &ops, &mixed);
        out.push(verify_negative_control(
            "b2-sn-orbit-swapped-mixed",
            "b2-sn",
            &op,
            &bank,
            &points,
            1e-3,
            seed,
        ));
    }

    // Conjugation identities on A₂ and B₂, both operator signs.
    {
        let lam2 = [
            C64::new(0.31, 0.07),
            C64::new(-0.12, 0.18),
            C64::new(0.05, -0.21),
        ];
        for plus in [false, true] {
            out.push(conjugation_check(
                Rc::new(RootSystem::a_type(3)),
                C64::new(0.9, 0.15),
                C64::new(0.9, 0.15),
                &lam2,
                plus,
                derive_seed(seed, "conj-a2"),
                tol,
            )?);
        }
        let lamb = [C64::new(0.27, -0.11), C64::new(0.14, 0.09)];
        for plus in [false, true] {
            out.push(conjugation_check(
                Rc::new(RootSystem::b2()),
                C64::new(0.7, 0.1),
                C64::new(1.1, -0.2),
                &lamb,
                plus,
                derive_seed(seed, "conj-b2"),
                tol,
            )?);
        }
    }

    // G₂ chain identity: holds under the coroot constraint (and for λ = 0),
    // fails when the constraint is violated.
    {
        let rs = RootSystem::g2();
        let ell = [
            C64::new(0.21, 0.05),
            C64::new(-0.17, 0.12),
            C64::new(0.08, -0.09),
        ];
        let lams = g2_coroot_lambdas(&rs, &ell);
        out.push(g2_constraint_check(
            C64::new(0.8, 0.12),
            C64::new(1.1, -0.07),
            &lams,
            derive_seed(seed, "g2"),
            tol,
            "g2-chain-constrained",
            true,
        )?);
        out.push(g2_constraint_check(
            C64::new(0.8, 0.12),
            C64::new(1.1, -0.07),
            &alloc::vec![C64::new(0.0, 0.0); 6],
            derive_seed(seed, "g2-zero"),
            tol,
            "g2-chain-zero-lambda",
            true,
        )?);
        let mut bad = lams;
        bad[1] += C64::new(0.1, 0.0);
        out.push(g2_constraint_check(
            C64::new(0.8, 0.12),
            C64::new(1.1, -0.07),
            &bad,
            derive_seed(seed, "g2-bad"),
            tol,
            "g2-chain-violated",
            false,
        )?);
    }

    // Truncated Dunkl operators: Σ_i ∇_i = 0 and pairwise commutativity.
    {
        let n = 4usize;
        let mut params =
            FamilyParams::generic(FamilyKind::Elliptic, n, derive_seed(seed, "nabla"));
        if let Some(t) = tau {
            params.tau = t;
        }
        let fam = OperatorFamily::CmElliptic(params);
        let rs = Rc::new(RootSystem::a_type(n));
        let ops = make_family(rs.clone(), &fam)?;
        let nablas: Vec<Op> = (0..n)
            .map(|i| truncated_dunkl(&rs, &ops, i))
            .collect::<Result<_, _>>()?;
        let plan = SamplePlan::new(derive_seed(seed, "nabla-points"));
        let points = family_points(&rs, &fam, &plan)?;
        let bank = TestFunctionBank::new(n, derive_seed(seed, "nabla-bank"));
        let mut total = Op::zero(rs.clone());
        for nb in &nablas {
            total = total.add(nb);
        }
        out.push(verify_operator_identity(
            "truncated-dunkl-sum-zero",
            "cm-elliptic",
            &total,
            &bank,
            &points,
            tol,
            seed,
        ));
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let comm = nablas[i]
                    .compose(&nablas[j])
                    .sub(&nablas[j].compose(&nablas[i]));
                worst = worst.max(max_zero_residual(&comm, &bank, &points));
            }
        }
        out.push(IdentityReport {
            name: "truncated-dunkl-commutators".to_string(),
            family: "cm-elliptic".to_string(),
            seed,
            num_points: points.len(),
            num_functions: bank.len(),
            max_residual: worst,
            tol,
            pass: worst <= tol,
            negative_control: false,
        });
    }

    Ok(out)
}
