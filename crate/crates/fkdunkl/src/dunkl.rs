//! Dunkl elements and the deformed elementary symmetric polynomials, with
//! machine verification of the pairwise-commutativity, cyclic-sum,
//! ℘-weighted cyclic, and Pieri-type expansion identities of the deformed
//! Fomin–Kirillov algebra, together with their equivariant (ψ = 0) and
//! multiparameter degenerations.
//!
//! Verification strategy per identity, strongest first:
//!
//! 1. exact backends — the multiparameter algebra over ℚ and the
//!    equivariant x-polynomial algebra — using greedy head reduction with an
//!    exact span fallback ([`membership_exact`]);
//! 2. the numeric elliptic/trigonometric/rational backends at several
//!    pole-safe sample points ([`membership_numeric`]);
//! 3. the operator representation `[ij] ↦ reflection term of D_ij`: every
//!    ideal member maps to the zero operator, so functional residuals on a
//!    bank of test functions give an oracle that is independent of the
//!    reduction machinery.
//!
//! Exact membership checks on targets supported on a strict subset of the
//! strands are run in the relabeled subalgebra on those strands only
//! (membership there implies membership in the larger algebra, since the
//! defining relations embed); this keeps the span fallback small.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::freealg::{
    bracket, membership_exact, membership_numeric, numeric_residual, reduce, AlgebraCtx,
    CoeffOps, Elem, Gen, Membership, MultiparamAlgebra, NumericAlgebra, Word, XPolyAlgebra,
};
use crate::oprep::{
    bracket_op, family_points, max_zero_residual, Op, OperatorFamily, TestFunctionBank,
};
use crate::poly::{elementary_symmetric, MPoly, Q};
use crate::rng::{derive_seed, SamplePlan};
use crate::roots::RootSystem;
use crate::scalars::{weierstrass_p, FamilyKind, FamilyParams, MultiparamData};

type C64 = Complex64;

/// Default membership tolerance of the numeric suites.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default cap on ideal columns for the span fallbacks.
pub const DEFAULT_MAX_COLUMNS: usize = 120_000;

// ---------------------------------------------------------------------------
// Element builders
// ---------------------------------------------------------------------------

/// Dunkl element θ_i = Σ_{j≠i} [ij] (0-based strand index, [ji] = −[ij]):
/// n−1 length-one words with unit coefficients.
pub fn theta<B: AlgebraCtx>(ctx: &B, i: usize) -> Elem<B::C> {
    let n = ctx.nstrands();
    let mut acc = Elem::zero();
    for j in 0..n {
        if j != i {
            acc = acc.add(ctx, &Elem::bracket(ctx, i, j));
        }
    }
    acc
}

/// Equivariant Dunkl element θ′_i = x_i + θ_i in the ψ = 0 backend.
pub fn theta_prime(ctx: &XPolyAlgebra, i: usize) -> Elem<MPoly> {
    let mut e = theta(ctx, i);
    e.insert(ctx, Word::one(), MPoly::var(ctx.n, i));
    e
}

/// ±[i₁j₁][i₂j₂]⋯ as a one-word element, normalizing each factor with
/// [ij] = −[ji].
fn word_elem<B: AlgebraCtx>(ctx: &B, pairs: &[(usize, usize)]) -> Elem<B::C> {
    let mut sign = 1i64;
    let mut w = Vec::with_capacity(pairs.len());
    for &(i, j) in pairs {
        let (s, g) = bracket(i, j);
        sign *= s;
        w.push(g);
    }
    let c = if sign < 0 {
        ctx.neg(&ctx.one())
    } else {
        ctx.one()
    };
    let mut e = Elem::zero();
    e.insert(ctx, Word(w), c);
    e
}

/// The k-pivot cyclic sum Σ_a [i_a i_{a+1}][i_a i_{a+2}]⋯[i_a i_{a−1}]
/// (indices cyclic): each summand fixes a pivot i_a and pairs it with the
/// other k−1 indices in cyclic order starting just past the pivot. For
/// k = 3 this is the three-term defining relation; its vanishing for all
/// k ≥ 3 is the first cyclic word identity.
pub fn q_k_sum<B: AlgebraCtx>(ctx: &B, idx: &[usize]) -> Elem<B::C> {
    let k = idx.len();
    assert!(k >= 3, "the cyclic sum needs at least three indices");
    let mut acc = Elem::zero();
    for a in 0..k {
        let pairs: Vec<(usize, usize)> =
            (1..k).map(|off| (idx[a], idx[(a + off) % k])).collect();
        acc = acc.add(ctx, &word_elem(ctx, &pairs));
    }
    acc
}

/// Both sides of the ℘-weighted cyclic identity on the pivot chain `idx`
/// with apex strand `m`: the left side is the sign-corrected sum
/// (−1)^{k+1} Σ_a [i_a m][i_{a+1} m]⋯[i_{a−1} m][i_a m) of (k+1)-letter
/// words (the pivot letter repeated at both ends), the right side weights
/// the k-pivot cyclic summands with the central value ρ(i_a) attached to
/// the pair (i_a, m). The identity asserts lhs = rhs modulo the ideal.
pub fn p_k_sides<B, F>(ctx: &B, idx: &[usize], m: usize, rho: &F) -> (Elem<B::C>, Elem<B::C>)
where
    B: AlgebraCtx,
    F: Fn(usize) -> B::C,
{
    let k = idx.len();
    assert!(k >= 2, "the weighted cyclic sum needs at least two pivots");
    let mut lhs = Elem::zero();
    for a in 0..k {
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(k + 1);
        for t in 0..k {
            pairs.push((idx[(a + t) % k], m));
        }
        pairs.push((idx[a], m));
        lhs = lhs.add(ctx, &word_elem(ctx, &pairs));
    }
    if k % 2 == 0 {
        lhs = lhs.neg(ctx);
    }
    let mut rhs = Elem::zero();
    for a in 0..k {
        let pairs: Vec<(usize, usize)> =
            (1..k).map(|off| (idx[a], idx[(a + off) % k])).collect();
        rhs = rhs.add(ctx, &word_elem(ctx, &pairs).scale(ctx, &rho(idx[a])));
    }
    (lhs, rhs)
}

/// The unweighted degenerate cyclic sum Σ_a [i_a m]⋯[i_{a−1} m][i_a m]
/// (no sign, no weights), which vanishes in the ψ = 0 algebra for every
/// k ≥ 1 because the squares [im]² vanish there.
pub fn degenerate_cyclic_sum<B: AlgebraCtx>(ctx: &B, idx: &[usize], m: usize) -> Elem<B::C> {
    let k = idx.len();
    assert!(k >= 1);
    let mut acc = Elem::zero();
    for a in 0..k {
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(k + 1);
        for t in 0..k {
            pairs.push((idx[(a + t) % k], m));
        }
        pairs.push((idx[a], m));
        acc = acc.add(ctx, &word_elem(ctx, &pairs));
    }
    acc
}

// ---------------------------------------------------------------------------
// φ and the deformed elementary symmetric polynomials
// ---------------------------------------------------------------------------

/// Which difference feeds ℘ inside the pair coefficient φ: position
/// differences x_a − x_b, or spectral differences λ_a − λ_b. One convention
/// is active per verification run and recorded in the report.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum PhiConvention {
    XDifferences,
    LambdaDifferences,
}

impl PhiConvention {
    pub fn label(self) -> &'static str {
        match self {
            PhiConvention::XDifferences => "x",
            PhiConvention::LambdaDifferences => "lambda",
        }
    }
}

/// All perfect matchings of `set`, each matching a list of pairs (a, b) with
/// a < b, enumerated by always pairing the smallest remaining element.
pub fn pair_matchings(set: &[usize]) -> Vec<Vec<(usize, usize)>> {
    assert!(set.len() % 2 == 0, "a perfect matching needs an even set");
    if set.is_empty() {
        return vec![Vec::new()];
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let a = sorted[0];
    let mut out = Vec::new();
    for t in 1..sorted.len() {
        let b = sorted[t];
        let rest: Vec<usize> = sorted
            .iter()
            .enumerate()
            .filter(|&(u, _)| u != 0 && u != t)
            .map(|(_, &v)| v)
            .collect();
        for mut m in pair_matchings(&rest) {
            let mut full = vec![(a, b)];
            full.append(&mut m);
            out.push(full);
        }
    }
    out
}

/// φ over an even-size index set: the sum over perfect matchings of the
/// product of `pair(a, b)` over matched pairs (a < b). The empty set gives 1.
pub fn phi_of<B, F>(ctx: &B, set: &[usize], pair: &F) -> B::C
where
    B: CoeffOps,
    F: Fn(usize, usize) -> B::C,
{
    let mut acc = ctx.zero();
    for m in pair_matchings(set) {
        let mut prod = ctx.one();
        for (a, b) in m {
            prod = ctx.mul(&prod, &pair(a, b));
        }
        acc = ctx.add(&acc, &prod);
    }
    acc
}

fn ek_go<B, F>(
    ctx: &B,
    set: &[usize],
    k: usize,
    gens: &BTreeMap<usize, Elem<B::C>>,
    pair: &F,
    pick: &dyn Fn(&[usize]) -> usize,
    memo: &mut BTreeMap<(Vec<usize>, usize), Elem<B::C>>,
) -> Elem<B::C>
where
    B: AlgebraCtx,
    F: Fn(usize, usize) -> B::C,
{
    if k == 0 {
        return Elem::one(ctx);
    }
    if set.is_empty() || k > set.len() {
        return Elem::zero();
    }
    let key = (set.to_vec(), k);
    if let Some(e) = memo.get(&key) {
        return e.clone();
    }
    let pos = pick(set);
    let j = set[pos];
    let mut rest = set.to_vec();
    rest.remove(pos);
    let mut acc = ek_go(ctx, &rest, k, gens, pair, pick, memo);
    let em1 = ek_go(ctx, &rest, k - 1, gens, pair, pick, memo);
    acc = acc.add(ctx, &em1.mul(ctx, &gens[&j]));
    if k >= 2 {
        for (t, &i) in rest.iter().enumerate() {
            let mut sub = rest.clone();
            sub.remove(t);
            let em2 = ek_go(ctx, &sub, k - 2, gens, pair, pick, memo);
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            acc = acc.add(ctx, &em2.scale(ctx, &pair(lo, hi)));
        }
    }
    memo.insert(key, acc.clone());
    acc
}

/// Deformed elementary symmetric polynomial E_k over the sorted index set
/// `iset`, by the recursion
/// E_k(I∪{j}) = E_k(I) + E_{k−1}(I)·X_j + Σ_{i∈I} c_{ij}·E_{k−2}(I∖{i}),
/// with E₀ = 1, E_k(∅) = 0 for k > 0 (hence E with a negative index never
/// arises), `gens[i]` substituted for X_i and `pair` supplying the central
/// coefficients c_{ij}. The last (largest) element plays the role of j at
/// every step; see [`ek_with_pick`] for the well-definedness check.
pub fn ek_deformed<B, F>(
    ctx: &B,
    iset: &[usize],
    k: usize,
    gens: &BTreeMap<usize, Elem<B::C>>,
    pair: &F,
) -> Elem<B::C>
where
    B: AlgebraCtx,
    F: Fn(usize, usize) -> B::C,
{
    ek_with_pick(ctx, iset, k, gens, pair, &|set: &[usize]| set.len() - 1)
}

/// Same recursion as [`ek_deformed`], but at each node the element at
/// position `pick(current set)` is treated as the last-inserted one. The
/// value modulo the ideal is independent of that choice because the Dunkl
/// elements commute there; certifying the independence on sample picks is
/// the recursion's well-definedness property test.
pub fn ek_with_pick<B, F>(
    ctx: &B,
    iset: &[usize],
    k: usize,
    gens: &BTreeMap<usize, Elem<B::C>>,
    pair: &F,
    pick: &dyn Fn(&[usize]) -> usize,
) -> Elem<B::C>
where
    B: AlgebraCtx,
    F: Fn(usize, usize) -> B::C,
{
    let mut sorted = iset.to_vec();
    sorted.sort_unstable();
    let mut memo = BTreeMap::new();
    ek_go(ctx, &sorted, k, gens, pair, pick, &mut memo)
}

/// Ordinary elementary symmetric polynomial e_k of the listed elements,
/// products taken in list order.
pub fn ek_ordinary<B: AlgebraCtx>(ctx: &B, elems: &[Elem<B::C>], k: usize) -> Elem<B::C> {
    let mut table: Vec<Elem<B::C>> = Vec::with_capacity(k + 1);
    table.push(Elem::one(ctx));
    for _ in 0..k {
        table.push(Elem::zero());
    }
    for x in elems {
        for m in (1..=k).rev() {
            let t = table[m - 1].mul(ctx, x);
            table[m] = table[m].add(ctx, &t);
        }
    }
    table.swap_remove(k)
}

// ---------------------------------------------------------------------------
// Pieri right-hand sides
// ---------------------------------------------------------------------------

/// All ordered m-tuples of distinct entries of `avail`.
fn ordered_tuples(avail: &[usize], m: usize) -> Vec<Vec<usize>> {
    fn rec(
        avail: &[usize],
        m: usize,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for t in 0..avail.len() {
            if !used[t] {
                used[t] = true;
                cur.push(avail[t]);
                rec(avail, m, cur, used, out);
                cur.pop();
                used[t] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; avail.len()];
    rec(avail, m, &mut Vec::new(), &mut used, &mut out);
    out
}

/// All weakly increasing m-tuples over the sorted slice `avail`.
fn weakly_increasing(avail: &[usize], m: usize) -> Vec<Vec<usize>> {
    fn rec(avail: &[usize], m: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for t in from..avail.len() {
            cur.push(avail[t]);
            rec(avail, m, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(avail, m, 0, &mut Vec::new(), &mut out);
    out
}

/// All size-m subsets of the sorted slice, in lexicographic order.
fn subsets_of_size(set: &[usize], m: usize) -> Vec<Vec<usize>> {
    fn rec(set: &[usize], m: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for t in from..set.len() {
            cur.push(set[t]);
            rec(set, m, t + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(set, m, 0, &mut Vec::new(), &mut out);
    out
}

/// One bracket-word stratum of a Pieri right-hand side: the sum of all
/// words [a₁b₁]⋯[a_m b_m] with (a₁,…,a_m) an ordered tuple of distinct
/// entries of `avail_a` and b₁ ≤ ⋯ ≤ b_m drawn from `avail_b`.
fn star_stratum<B: AlgebraCtx>(
    ctx: &B,
    avail_a: &[usize],
    avail_b: &[usize],
    m: usize,
) -> Elem<B::C> {
    let mut acc = Elem::zero();
    for aseq in ordered_tuples(avail_a, m) {
        for bseq in weakly_increasing(avail_b, m) {
            let pairs: Vec<(usize, usize)> = aseq
                .iter()
                .zip(bseq.iter())
                .map(|(&a, &b)| (a, b))
                .collect();
            acc = acc.add(ctx, &word_elem(ctx, &pairs));
        }
    }
    acc
}

/// Right-hand side of the Pieri expansion of E_k(θ_i | i ∈ I): over strata
/// l = 0..⌊k/2⌋ and pair sets I₀ ⊆ I with |I₀| = 2l, the φ(I₀)-weighted sum
/// of (k−2l)-letter words whose a's are ordered distinct entries of I∖I₀
/// and whose b's lie outside I, weakly increasing. φ(I₀) commutes with
/// those words (it only involves strands in I₀), so the left placement of
/// the coefficient is canonical.
pub fn pieri_rhs<B, F>(ctx: &B, iset: &[usize], k: usize, phi_pair: &F) -> Elem<B::C>
where
    B: AlgebraCtx,
    F: Fn(usize, usize) -> B::C,
{
    let n = ctx.nstrands();
    let outside: Vec<usize> = (0..n).filter(|t| !iset.contains(t)).collect();
    let mut acc = Elem::zero();
    for l in 0..=(k / 2) {
        for i0 in subsets_of_size(iset, 2 * l) {
            let phi = phi_of(ctx, &i0, phi_pair);
            if ctx.is_zero(&phi) {
                continue;
            }
            let avail_a: Vec<usize> = iset.iter().copied().filter(|t| !i0.contains(t)).collect();
            let stratum = star_stratum(ctx, &avail_a, &outside, k - 2 * l);
            acc = acc.add(ctx, &stratum.scale(ctx, &phi));
        }
    }
    acc
}

/// Right-hand side of the multiparameter Pieri formula: the single stratum
/// of k-letter words with all a's ordered distinct entries of I and b's
/// outside I, weakly increasing (the central parameters enter only through
/// the E_k recursion on the left-hand side).
pub fn multiparam_rhs<B: AlgebraCtx>(ctx: &B, iset: &[usize], k: usize) -> Elem<B::C> {
    let n = ctx.nstrands();
    let outside: Vec<usize> = (0..n).filter(|t| !iset.contains(t)).collect();
    star_stratum(ctx, iset, &outside, k)
}

/// Right-hand side of the equivariant Pieri formula: strata over I₀ ⊆ I of
/// every size m ≤ k weighted by the monomial Π_{i∈I₀} x_i, with
/// (k−m)-letter words shaped as in the other Pieri sums.
pub fn equivariant_rhs(ctx: &XPolyAlgebra, iset: &[usize], k: usize) -> Elem<MPoly> {
    let n = ctx.n;
    let outside: Vec<usize> = (0..n).filter(|t| !iset.contains(t)).collect();
    let mut acc = Elem::zero();
    for m in 0..=k {
        for i0 in subsets_of_size(iset, m) {
            let mut mono = MPoly::one(n);
            for &i in &i0 {
                mono = mono.mul(&MPoly::var(n, i));
            }
            let avail_a: Vec<usize> = iset.iter().copied().filter(|t| !i0.contains(t)).collect();
            let stratum = star_stratum(ctx, &avail_a, &outside, k - m);
            acc = acc.add(ctx, &stratum.scale(ctx, &mono));
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Numeric pair coefficients
// ---------------------------------------------------------------------------

/// K·℘(λ_i − λ_j): the central pair coefficient of the elliptic E_k
/// recursion, the weight of the ℘-weighted cyclic identity, and the
/// λ-difference φ convention. Generic spectral values stay off the lattice,
/// so evaluation failure is a programming error.
pub fn elliptic_pair_lambda(fam: &FamilyParams, i: usize, j: usize) -> C64 {
    fam.k_coupling
        * weierstrass_p(fam.lambda_ij(i, j), fam.tau, fam.theta_terms)
            .expect("spectral differences stay off the period lattice")
}

/// K·℘(b·(x_i − x_j)) at the given point: the x-difference φ pair factor.
/// Sample points are drawn off the singular loci, so evaluation failure is a
/// programming error.
pub fn elliptic_pair_x(fam: &FamilyParams, point: &[C64], i: usize, j: usize) -> C64 {
    fam.k_coupling
        * weierstrass_p(fam.b * (point[i] - point[j]), fam.tau, fam.theta_terms)
            .expect("sample points stay off the singular loci")
}

// ---------------------------------------------------------------------------
// Verdict records and membership helpers
// ---------------------------------------------------------------------------

/// One verified instance (or negative control) of an abstract-algebra
/// identity. Strand labels in `identity` are 1-based to match the rendered
/// bracket notation.
#[derive(Clone, Debug, serde::Serialize)]
pub struct AlgCheck {
    pub identity: String,
    /// "exact-multiparam", "exact-xpoly", "numeric-<family>",
    /// "operator-<family>", or "group-algebra".
    pub backend: String,
    pub n: usize,
    pub seed: u64,
    /// φ convention in force, when the identity involves φ.
    pub convention: Option<&'static str>,
    /// Membership / vanishing verdict of the target.
    pub member: bool,
    pub certified_by_reduction: bool,
    /// Max residual over sample points (numeric and operator backends).
    pub residual: Option<f64>,
    pub tol: Option<f64>,
    pub method: String,
    /// True when the row is a deliberately broken variant that must fail.
    pub negative_control: bool,
    /// Row verdict: identities pass when member, controls when rejected.
    pub pass: bool,
}

fn check_row(
    identity: String,
    backend: String,
    n: usize,
    seed: u64,
    convention: Option<&'static str>,
    member: bool,
    certified: bool,
    residual: Option<f64>,
    tol: Option<f64>,
    method: String,
    negative_control: bool,
) -> AlgCheck {
    AlgCheck {
        identity,
        backend,
        n,
        seed,
        convention,
        member,
        certified_by_reduction: certified,
        residual,
        tol,
        method,
        negative_control,
        pass: if negative_control { !member } else { member },
    }
}

/// Strand indices that actually occur in the element's words.
fn involved_strands<C: Clone + PartialEq>(e: &Elem<C>) -> Vec<usize> {
    let mut seen = vec![false; 256];
    for w in e.terms.keys() {
        for g in &w.0 {
            seen[g.i as usize] = true;
            seen[g.j as usize] = true;
        }
    }
    (0..256).filter(|&t| seen[t]).collect()
}

/// Exact membership for a multiparameter target, relabeled onto its involved
/// strands when they form a strict subset (sound: the defining relations of
/// the subalgebra embed into those of the full algebra).
pub fn membership_exact_restricted(
    ctx: &MultiparamAlgebra,
    target: &Elem<Q>,
    degree_bound: usize,
    max_columns: usize,
) -> Membership {
    let involved = involved_strands(target);
    if involved.len() >= ctx.n || involved.len() < 2 {
        return membership_exact(ctx, target, degree_bound, max_columns);
    }
    let relabel: BTreeMap<usize, usize> = involved
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let mut p = BTreeMap::new();
    for a in 0..involved.len() {
        for b in (a + 1)..involved.len() {
            p.insert(
                (a as u8, b as u8),
                ctx.p_of(involved[a] as u8, involved[b] as u8),
            );
        }
    }
    let small = MultiparamAlgebra::new(involved.len(), p);
    let mut t = Elem::zero();
    for (w, c) in &target.terms {
        let gens: Vec<Gen> = w
            .0
            .iter()
            .map(|g| Gen {
                i: relabel[&(g.i as usize)] as u8,
                j: relabel[&(g.j as usize)] as u8,
            })
            .collect();
        t.insert(&small, Word(gens), c.clone());
    }
    membership_exact(&small, &t, degree_bound, max_columns)
}

// ---------------------------------------------------------------------------
// Strand relabeling
//
// The defining relations are equivariant under relabeling the strands (with
// the pair parameters carried along), so any bijection of strand labels is
// an isomorphism onto the relabeled-parameter algebra and ideal membership
// may be decided after transport. This matters in practice: the greedy
// rewriting system is orientation-sensitive, and words that share their
// smallest strand as a first index are irreducible, while the same
// configuration with the shared strand on top reduces. The equivariance
// itself is certified by a test that reduces every relabeled defining
// relation to zero in the relabeled algebra.
// ---------------------------------------------------------------------------

/// Order-preserving relabeling sending strand `m` to the top strand n−1.
fn sigma_to_top(n: usize, m: usize) -> Vec<usize> {
    let mut sigma = vec![0usize; n];
    let mut next = 0usize;
    for (i, s) in sigma.iter_mut().enumerate() {
        if i == m {
            *s = n - 1;
        } else {
            *s = next;
            next += 1;
        }
    }
    sigma
}

/// Relabel a word's strands, renormalizing each letter with [ij] = −[ji].
fn relabel_word(w: &Word, sigma: &[usize]) -> (i64, Word) {
    let mut sign = 1i64;
    let mut gens = Vec::with_capacity(w.0.len());
    for g in &w.0 {
        let (s, ng) = bracket(sigma[g.i as usize], sigma[g.j as usize]);
        sign *= s;
        gens.push(ng);
    }
    (sign, Word(gens))
}

/// The multiparameter algebra with relabeled pair parameters
/// p′_{σ(i)σ(j)} = p_{ij}.
fn relabel_multiparam(ctx: &MultiparamAlgebra, sigma: &[usize]) -> MultiparamAlgebra {
    let mut p = BTreeMap::new();
    for i in 0..ctx.n {
        for j in (i + 1)..ctx.n {
            let v = ctx.p_of(i as u8, j as u8);
            if !v.is_zero() {
                let (a, b) = if sigma[i] < sigma[j] {
                    (sigma[i] as u8, sigma[j] as u8)
                } else {
                    (sigma[j] as u8, sigma[i] as u8)
                };
                p.insert((a, b), v);
            }
        }
    }
    MultiparamAlgebra::new(ctx.n, p)
}

fn relabel_elem_q(ctx_to: &MultiparamAlgebra, e: &Elem<Q>, sigma: &[usize]) -> Elem<Q> {
    let mut out = Elem::zero();
    for (w, c) in &e.terms {
        let (s, nw) = relabel_word(w, sigma);
        let c2 = if s < 0 { -c.clone() } else { c.clone() };
        out.insert(ctx_to, nw, c2);
    }
    out
}

fn relabel_elem_xpoly(ctx: &XPolyAlgebra, e: &Elem<MPoly>, sigma: &[usize]) -> Elem<MPoly> {
    let images: Vec<(usize, i8)> = sigma.iter().map(|&t| (t, 1i8)).collect();
    let mut out = Elem::zero();
    for (w, c) in &e.terms {
        let (s, nw) = relabel_word(w, sigma);
        let mut c2 = c.subst_signed_perm(&images);
        if s < 0 {
            c2 = c2.neg();
        }
        out.insert(ctx, nw, c2);
    }
    out
}

/// The coefficient family with strands relabeled: spectral values and any
/// per-strand shifts move with their strand.
fn relabel_family(fam: &FamilyParams, sigma: &[usize]) -> FamilyParams {
    let mut f = fam.clone();
    for i in 0..fam.lambda.len() {
        f.lambda[sigma[i]] = fam.lambda[i];
    }
    if fam.alpha.len() == fam.lambda.len() {
        for i in 0..fam.alpha.len() {
            f.alpha[sigma[i]] = fam.alpha[i];
        }
    }
    f
}

fn permute_coords(pt: &[C64], sigma: &[usize]) -> Vec<C64> {
    let mut out = vec![C64::zero(); pt.len()];
    for (i, &v) in pt.iter().enumerate() {
        out[sigma[i]] = v;
    }
    out
}

fn exact_check(
    ctx: &MultiparamAlgebra,
    identity: String,
    seed: u64,
    convention: Option<&'static str>,
    target: &Elem<Q>,
    degree_bound: usize,
    negative_control: bool,
) -> AlgCheck {
    let m = membership_exact_restricted(ctx, target, degree_bound, DEFAULT_MAX_COLUMNS);
    check_row(
        identity,
        "exact-multiparam".to_string(),
        ctx.n,
        seed,
        convention,
        m.member,
        m.certified_by_reduction,
        m.residual,
        None,
        m.method.to_string(),
        negative_control,
    )
}

fn family_backend_name(kind: FamilyKind) -> &'static str {
    match kind {
        FamilyKind::Elliptic => "numeric-elliptic",
        FamilyKind::Trigonometric => "numeric-trigonometric",
        FamilyKind::Rational => "numeric-rational",
    }
}

/// Run a numeric membership at every sample point and aggregate: member iff
/// every point certifies, residual = worst point.
fn numeric_check(
    fam: &FamilyParams,
    points: &[Vec<C64>],
    identity: String,
    seed: u64,
    convention: Option<&'static str>,
    build: &dyn Fn(&NumericAlgebra) -> Elem<C64>,
    degree_bound: usize,
    tol: f64,
    negative_control: bool,
) -> AlgCheck {
    let mut member_all = true;
    let mut certified_all = true;
    let mut worst = 0.0f64;
    let mut method = String::from("reduction");
    for pt in points {
        let ctx = NumericAlgebra::new(fam, pt.clone());
        let target = build(&ctx);
        let m = membership_numeric(&ctx, &target, degree_bound, tol, DEFAULT_MAX_COLUMNS);
        member_all &= m.member;
        certified_all &= m.certified_by_reduction;
        if let Some(r) = m.residual {
            if r > worst {
                worst = r;
                method = m.method.to_string();
            }
        }
    }
    check_row(
        identity,
        family_backend_name(fam.kind).to_string(),
        fam.lambda.len(),
        seed,
        convention,
        member_all,
        certified_all,
        Some(worst),
        Some(tol),
        method,
        negative_control,
    )
}

// ---------------------------------------------------------------------------
// Operator-representation oracle
// ---------------------------------------------------------------------------

/// Image of the Dunkl element θ_i under [ij] ↦ reflection term of D_ij.
pub fn theta_bracket_op(
    rs: &Rc<RootSystem>,
    fam: &OperatorFamily,
    i: usize,
) -> Result<Op, String> {
    let n = rs.dim;
    let mut acc = Op::zero(rs.clone());
    for j in 0..n {
        if j != i {
            acc = acc.add(&bracket_op(rs, fam, i, j)?);
        }
    }
    Ok(acc)
}

/// Residual of the operator image of [θ_i, θ_j] on a seeded function bank —
/// an oracle for pairwise commutativity that bypasses reduction entirely.
pub fn commutator_operator_residual(
    n: usize,
    i: usize,
    j: usize,
    kind: FamilyKind,
    seed: u64,
) -> Result<f64, String> {
    let params = FamilyParams::generic(kind, n, derive_seed(seed, "op-family"));
    let opfam = match kind {
        FamilyKind::Elliptic => OperatorFamily::CmElliptic(params),
        FamilyKind::Trigonometric => OperatorFamily::CmTrig(params),
        FamilyKind::Rational => OperatorFamily::CmRational(params),
    };
    let rs = Rc::new(RootSystem::a_type(n));
    let ti = theta_bracket_op(&rs, &opfam, i)?;
    let tj = theta_bracket_op(&rs, &opfam, j)?;
    let comm = ti.compose(&tj).sub(&tj.compose(&ti));
    let plan = SamplePlan::new(derive_seed(seed, "op-points"));
    let points = family_points(&rs, &opfam, &plan)?;
    let bank = TestFunctionBank::new(n, derive_seed(seed, "op-bank"));
    Ok(max_zero_residual(&comm, &bank, &points))
}

fn ek_op_go(
    rs: &Rc<RootSystem>,
    set: &[usize],
    k: usize,
    gens: &BTreeMap<usize, Op>,
    pair: &dyn Fn(usize, usize) -> C64,
    memo: &mut BTreeMap<(Vec<usize>, usize), Op>,
) -> Op {
    if k == 0 {
        return Op::identity(rs.clone());
    }
    if set.is_empty() || k > set.len() {
        return Op::zero(rs.clone());
    }
    let key = (set.to_vec(), k);
    if let Some(o) = memo.get(&key) {
        return o.clone();
    }
    let j = *set.last().expect("nonempty");
    let rest = &set[..set.len() - 1];
    let mut acc = ek_op_go(rs, rest, k, gens, pair, memo);
    let em1 = ek_op_go(rs, rest, k - 1, gens, pair, memo);
    acc = acc.add(&em1.compose(&gens[&j]));
    if k >= 2 {
        for (t, &i) in rest.iter().enumerate() {
            let mut sub = rest.to_vec();
            sub.remove(t);
            let em2 = ek_op_go(rs, &sub, k - 2, gens, pair, memo);
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            acc = acc.add(&em2.scale(pair(lo, hi)));
        }
    }
    memo.insert(key, acc.clone());
    acc
}

/// Operator-oracle residuals for the Pieri identity E_k(θ_i | i∈I) = RHS in
/// the elliptic representation, under both φ conventions: returns
/// (x-difference residual, λ-difference residual). Ideal members act as the
/// zero operator, so the residual adjudicates the convention independently
/// of any reduction machinery.
pub fn pieri_operator_residuals(
    n: usize,
    iset: &[usize],
    k: usize,
    seed: u64,
) -> Result<(f64, f64), String> {
    let params = FamilyParams::generic(FamilyKind::Elliptic, n, derive_seed(seed, "op-family"));
    let opfam = OperatorFamily::CmElliptic(params.clone());
    let rs = Rc::new(RootSystem::a_type(n));
    let mut gens = BTreeMap::new();
    for &i in iset {
        gens.insert(i, theta_bracket_op(&rs, &opfam, i)?);
    }
    let pair = |i: usize, j: usize| elliptic_pair_lambda(&params, i, j);
    let mut sorted = iset.to_vec();
    sorted.sort_unstable();
    let mut memo = BTreeMap::new();
    let ek = ek_op_go(&rs, &sorted, k, &gens, &pair, &mut memo);

    let outside: Vec<usize> = (0..n).filter(|t| !sorted.contains(t)).collect();
    let mut residuals = [0.0f64; 2];
    let plan = SamplePlan::new(derive_seed(seed, "op-points"));
    let points = family_points(&rs, &opfam, &plan)?;
    let bank = TestFunctionBank::new(n, derive_seed(seed, "op-bank"));
    for (slot, conv) in [PhiConvention::XDifferences, PhiConvention::LambdaDifferences]
        .into_iter()
        .enumerate()
    {
        let mut rhs = Op::zero(rs.clone());
        for l in 0..=(k / 2) {
            for i0 in subsets_of_size(&sorted, 2 * l) {
                // φ(I₀) as an operator: constant for λ-differences, a
                // multiplication operator for x-differences.
                let phi_op = match conv {
                    PhiConvention::LambdaDifferences => {
                        let mut val = C64::zero();
                        for m in pair_matchings(&i0) {
                            let mut prod = C64::new(1.0, 0.0);
                            for (a, b) in m {
                                prod *= elliptic_pair_lambda(&params, a, b);
                            }
                            val += prod;
                        }
                        Op::scalar_const(rs.clone(), val)
                    }
                    PhiConvention::XDifferences => {
                        let matchings = pair_matchings(&i0);
                        let p = params.clone();
                        Op::scalar_fn(
                            rs.clone(),
                            Rc::new(move |x: &[C64]| {
                                let mut val = C64::zero();
                                for m in &matchings {
                                    let mut prod = C64::new(1.0, 0.0);
                                    for &(a, b) in m {
                                        prod *= p.k_coupling
                                            * match weierstrass_p(
                                                p.b * (x[a] - x[b]),
                                                p.tau,
                                                p.theta_terms,
                                            ) {
                                                Ok(v) => v,
                                                Err(_) => C64::new(f64::NAN, f64::NAN),
                                            };
                                    }
                                    val += prod;
                                }
                                val
                            }),
                        )
                    }
                };
                let avail_a: Vec<usize> =
                    sorted.iter().copied().filter(|t| !i0.contains(t)).collect();
                let m = k - 2 * l;
                for aseq in ordered_tuples(&avail_a, m) {
                    for bseq in weakly_increasing(&outside, m) {
                        let mut w = phi_op.clone();
                        for (&a, &b) in aseq.iter().zip(bseq.iter()) {
                            w = w.compose(&bracket_op(&rs, &opfam, a, b)?);
                        }
                        rhs = rhs.add(&w);
                    }
                }
            }
        }
        residuals[slot] = max_zero_residual(&ek.sub(&rhs), &bank, &points);
    }
    Ok((residuals[0], residuals[1]))
}

// ---------------------------------------------------------------------------
// Single-identity verifiers
// ---------------------------------------------------------------------------

/// Exact commutativity check [θ_i, θ_j] ∈ ideal in the multiparameter
/// algebra.
pub fn commutator_check_exact(ctx: &MultiparamAlgebra, i: usize, j: usize, seed: u64) -> AlgCheck {
    let ti = theta(ctx, i);
    let tj = theta(ctx, j);
    let target = ti.mul(ctx, &tj).sub(ctx, &tj.mul(ctx, &ti));
    exact_check(
        ctx,
        format!("[theta_{}, theta_{}] in ideal", i + 1, j + 1),
        seed,
        None,
        &target,
        3,
        false,
    )
}

/// Numeric commutativity check at the scan's sample points.
pub fn commutator_check_numeric(
    fam: &FamilyParams,
    points: &[Vec<C64>],
    i: usize,
    j: usize,
    seed: u64,
    tol: f64,
) -> AlgCheck {
    numeric_check(
        fam,
        points,
        format!("[theta_{}, theta_{}] in ideal", i + 1, j + 1),
        seed,
        None,
        &|ctx| {
            let ti = theta(ctx, i);
            let tj = theta(ctx, j);
            ti.mul(ctx, &tj).sub(ctx, &tj.mul(ctx, &ti))
        },
        3,
        tol,
        false,
    )
}

/// Exact cyclic-sum identity (k pivots) in the multiparameter algebra.
pub fn q_k_identity(ctx: &MultiparamAlgebra, idx: &[usize], seed: u64) -> AlgCheck {
    let target = q_k_sum(ctx, idx);
    let labels: Vec<String> = idx.iter().map(|t| (t + 1).to_string()).collect();
    exact_check(
        ctx,
        format!("cyclic sum k={} pivots ({})", idx.len(), labels.join(",")),
        seed,
        None,
        &target,
        idx.len(),
        false,
    )
}

/// Exact ℘-weighted cyclic identity with ρ(i) = p_{i m}: direct reduction
/// first, then reduction after relabeling the apex to the top strand (the
/// rewriting system is much stronger on shared-second-index words), then a
/// restricted exact span.
pub fn p_k_identity(ctx: &MultiparamAlgebra, idx: &[usize], m: usize, seed: u64) -> AlgCheck {
    let rho = |i: usize| ctx.p_of(i as u8, m as u8);
    let (lhs, rhs) = p_k_sides(ctx, idx, m, &rho);
    let target = lhs.sub(ctx, &rhs);
    let labels: Vec<String> = idx.iter().map(|t| (t + 1).to_string()).collect();
    let identity = format!(
        "weighted cyclic k={} pivots ({}) apex {}",
        idx.len(),
        labels.join(","),
        m + 1
    );
    let red = reduce(ctx, &target);
    if red.is_zero() {
        return check_row(
            identity,
            "exact-multiparam".to_string(),
            ctx.n,
            seed,
            None,
            true,
            true,
            None,
            None,
            "reduction".to_string(),
            false,
        );
    }
    let sigma = sigma_to_top(ctx.n, m);
    let ctx2 = relabel_multiparam(ctx, &sigma);
    let red2 = reduce(&ctx2, &relabel_elem_q(&ctx2, &target, &sigma));
    if red2.is_zero() {
        return check_row(
            identity,
            "exact-multiparam".to_string(),
            ctx.n,
            seed,
            None,
            true,
            true,
            None,
            None,
            "reduction (apex relabeled to top)".to_string(),
            false,
        );
    }
    exact_check(ctx, identity, seed, None, &target, idx.len() + 1, false)
}

/// Numeric ℘-weighted cyclic identity with ρ(i) = K·℘(λ_{i m}): reduction
/// per point, with an apex-to-top relabeled retry before the least-squares
/// fallback.
pub fn p_k_identity_numeric(
    fam: &FamilyParams,
    points: &[Vec<C64>],
    idx: &[usize],
    m: usize,
    seed: u64,
    tol: f64,
) -> AlgCheck {
    let n = fam.lambda.len();
    let labels: Vec<String> = idx.iter().map(|t| (t + 1).to_string()).collect();
    let identity = format!(
        "weighted cyclic k={} pivots ({}) apex {}",
        idx.len(),
        labels.join(","),
        m + 1
    );
    let sigma = sigma_to_top(n, m);
    let fam2 = relabel_family(fam, &sigma);
    let idx2: Vec<usize> = idx.iter().map(|&i| sigma[i]).collect();
    let mut member_all = true;
    let mut certified_all = true;
    let mut worst = 0.0f64;
    let mut method = String::from("reduction");
    for pt in points {
        let build = |ctx: &NumericAlgebra| {
            let rho = |i: usize| elliptic_pair_lambda(fam, i, m);
            let (lhs, rhs) = p_k_sides(ctx, idx, m, &rho);
            lhs.sub(ctx, &rhs)
        };
        let ctx = NumericAlgebra::new(fam, pt.clone());
        let target = build(&ctx);
        let scale = {
            let mut s = 0.0f64;
            for c in target.terms.values() {
                s = s.max(c.norm());
            }
            s
        };
        let red = reduce(&ctx, &target);
        let res = numeric_residual(&red, scale);
        if res <= tol {
            worst = worst.max(res);
            continue;
        }
        // Transport along the apex-to-top relabeling and reduce there.
        let pt2 = permute_coords(pt, &sigma);
        let ctx2 = NumericAlgebra::new(&fam2, pt2);
        let target2 = {
            let rho2 = |i2: usize| elliptic_pair_lambda(&fam2, i2, n - 1);
            let (lhs2, rhs2) = p_k_sides(&ctx2, &idx2, n - 1, &rho2);
            lhs2.sub(&ctx2, &rhs2)
        };
        let red2 = reduce(&ctx2, &target2);
        let res2 = numeric_residual(&red2, scale);
        if res2 <= tol {
            worst = worst.max(res2);
            method = "reduction (apex relabeled to top)".to_string();
            continue;
        }
        let mm = membership_numeric(&ctx, &target, idx.len() + 1, tol, DEFAULT_MAX_COLUMNS);
        member_all &= mm.member;
        certified_all = false;
        if let Some(r) = mm.residual {
            if r > worst {
                worst = r;
                method = mm.method.to_string();
            }
        }
    }
    check_row(
        identity,
        family_backend_name(fam.kind).to_string(),
        n,
        seed,
        None,
        member_all,
        certified_all,
        Some(worst),
        Some(tol),
        method,
        false,
    )
}

/// Numeric Pieri verification of one instance (n, k, I) under a φ
/// convention, at the given points.
pub fn verify_pieri(
    fam: &FamilyParams,
    points: &[Vec<C64>],
    iset: &[usize],
    k: usize,
    conv: PhiConvention,
    seed: u64,
    tol: f64,
) -> AlgCheck {
    let labels: Vec<String> = iset.iter().map(|t| (t + 1).to_string()).collect();
    let iset_c = iset.to_vec();
    numeric_check(
        fam,
        points,
        format!("E_{}(theta | I={{{}}}) = Pieri RHS", k, labels.join(",")),
        seed,
        Some(conv.label()),
        &|ctx| {
            let mut gens = BTreeMap::new();
            for &i in &iset_c {
                gens.insert(i, theta(ctx, i));
            }
            let pair = |i: usize, j: usize| elliptic_pair_lambda(fam, i, j);
            let lhs = ek_deformed(ctx, &iset_c, k, &gens, &pair);
            let phi_pair = |a: usize, b: usize| match conv {
                PhiConvention::XDifferences => elliptic_pair_x(fam, &ctx.point, a, b),
                PhiConvention::LambdaDifferences => elliptic_pair_lambda(fam, a, b),
            };
            let rhs = pieri_rhs(ctx, &iset_c, k, &phi_pair);
            lhs.sub(ctx, &rhs)
        },
        k + 1,
        tol,
        false,
    )
}

/// Full-set corollary: E_k(θ₁,…,θ_n) reduces to the scalar Σ_{|I₀|=k} φ(I₀)
/// for even k and to 0 for odd k.
pub fn corollary_check(
    fam: &FamilyParams,
    points: &[Vec<C64>],
    n: usize,
    k: usize,
    conv: PhiConvention,
    seed: u64,
    tol: f64,
) -> AlgCheck {
    let full: Vec<usize> = (0..n).collect();
    let parity = if k % 2 == 0 { "even" } else { "odd" };
    let full_c = full.clone();
    numeric_check(
        fam,
        points,
        format!("full-set E_{} ({} k) collapses to scalar phi sum", k, parity),
        seed,
        Some(conv.label()),
        &|ctx| {
            let mut gens = BTreeMap::new();
            for &i in &full_c {
                gens.insert(i, theta(ctx, i));
            }
            let pair = |i: usize, j: usize| elliptic_pair_lambda(fam, i, j);
            let mut target = ek_deformed(ctx, &full_c, k, &gens, &pair);
            if k % 2 == 0 {
                let phi_pair = |a: usize, b: usize| match conv {
                    PhiConvention::XDifferences => elliptic_pair_x(fam, &ctx.point, a, b),
                    PhiConvention::LambdaDifferences => elliptic_pair_lambda(fam, a, b),
                };
                let mut scalar = C64::zero();
                for i0 in subsets_of_size(&full_c, k) {
                    scalar += phi_of(ctx, &i0, &phi_pair);
                }
                let one = Elem::one(ctx);
                target = target.sub(ctx, &one.scale(ctx, &scalar));
            }
            target
        },
        k + 1,
        tol,
        false,
    )
}

/// Finish an equivariant membership certificate left open by greedy
/// reduction. First walk the strand-relabeling orbit greedily (relabeling
/// is an automorphism of the ψ = 0 presentation, so an image reducing to
/// zero certifies membership; an image reducing to fewer terms is kept and
/// the walk repeats). If a remainder with constant coefficients survives,
/// lift it to the zero-parameter multiparameter algebra — same relations —
/// and run the exact span fallback there. Remainders with genuinely
/// polynomial coefficients that the orbit walk cannot clear are reported as
/// uncertified.
fn xpoly_membership(n: usize, red: &Elem<MPoly>) -> (bool, bool, String) {
    if red.is_zero() {
        return (true, true, "reduction".to_string());
    }
    let ctx = XPolyAlgebra { n };
    let mut cur = red.clone();
    let mut walked = false;
    loop {
        let mut best: Option<Elem<MPoly>> = None;
        for m in 0..n {
            let sigma = sigma_to_top(n, m);
            let img = relabel_elem_xpoly(&ctx, &cur, &sigma);
            let r = reduce(&ctx, &img);
            if r.is_zero() {
                return (
                    true,
                    true,
                    "reduction over a strand-relabeling orbit".to_string(),
                );
            }
            if r.num_terms() < cur.num_terms()
                && best.as_ref().map_or(true, |b| r.num_terms() < b.num_terms())
            {
                best = Some(r);
            }
        }
        match best {
            Some(b) => {
                cur = b;
                walked = true;
            }
            None => break,
        }
    }
    let orbit_note = if walked { " after an orbit walk" } else { "" };
    let ctx0 = MultiparamAlgebra::new(n, BTreeMap::new());
    let zeros = vec![Q::zero(); n];
    let mut lifted: Elem<Q> = Elem::zero();
    let mut maxlen = 1usize;
    for (w, c) in &cur.terms {
        if c.total_degree() > 0 {
            return (
                false,
                false,
                format!(
                    "reduction left {} terms with polynomial coefficients{}",
                    cur.num_terms(),
                    orbit_note
                ),
            );
        }
        maxlen = maxlen.max(w.0.len());
        lifted.insert(&ctx0, w.clone(), c.eval_q(&zeros));
    }
    let m = membership_exact_restricted(&ctx0, &lifted, maxlen + 1, DEFAULT_MAX_COLUMNS);
    (
        m.member,
        false,
        format!("reduction{} + {}", orbit_note, m.method),
    )
}

/// Exact equivariant Pieri verification of e_k(θ′_i | i ∈ I) against its
/// stratified right-hand side in the ψ = 0 algebra.
pub fn equivariant_pieri(n: usize, iset: &[usize], k: usize) -> AlgCheck {
    let ctx = XPolyAlgebra { n };
    let mut sorted = iset.to_vec();
    sorted.sort_unstable();
    let elems: Vec<Elem<MPoly>> = sorted.iter().map(|&i| theta_prime(&ctx, i)).collect();
    let lhs = ek_ordinary(&ctx, &elems, k);
    let rhs = equivariant_rhs(&ctx, &sorted, k);
    let red = reduce(&ctx, &lhs.sub(&ctx, &rhs));
    let (member, certified, method) = xpoly_membership(n, &red);
    let labels: Vec<String> = sorted.iter().map(|t| (t + 1).to_string()).collect();
    check_row(
        format!(
            "equivariant e_{}(theta' | I={{{}}}) = stratified RHS",
            k,
            labels.join(",")
        ),
        "exact-xpoly".to_string(),
        n,
        0,
        None,
        member,
        certified,
        None,
        None,
        method,
        false,
    )
}

/// Exact full-set equivariant identity e_k(θ′₁,…,θ′_n) = e_k(x₁,…,x_n).
pub fn equivariant_full_set(n: usize, k: usize) -> AlgCheck {
    let ctx = XPolyAlgebra { n };
    let elems: Vec<Elem<MPoly>> = (0..n).map(|i| theta_prime(&ctx, i)).collect();
    let lhs = ek_ordinary(&ctx, &elems, k);
    let vars: Vec<usize> = (0..n).collect();
    let ek_x = elementary_symmetric(n, &vars, k);
    let mut rhs = Elem::zero();
    rhs.insert(&ctx, Word::one(), ek_x);
    let red = reduce(&ctx, &lhs.sub(&ctx, &rhs));
    let (member, certified, method) = xpoly_membership(n, &red);
    check_row(
        format!("full-set e_{}(theta') = e_{}(x)", k, k),
        "exact-xpoly".to_string(),
        n,
        0,
        None,
        member,
        certified,
        None,
        None,
        method,
        false,
    )
}

/// Exact multiparameter Pieri verification of E_k(θ; p) against the single
/// (*)-stratum right-hand side.
pub fn multiparam_pieri(ctx: &MultiparamAlgebra, iset: &[usize], k: usize, seed: u64) -> AlgCheck {
    let mut sorted = iset.to_vec();
    sorted.sort_unstable();
    let mut gens = BTreeMap::new();
    for &i in &sorted {
        gens.insert(i, theta(ctx, i));
    }
    let pair = |i: usize, j: usize| ctx.p_of(i as u8, j as u8);
    let lhs = ek_deformed(ctx, &sorted, k, &gens, &pair);
    let rhs = multiparam_rhs(ctx, &sorted, k);
    let target = lhs.sub(ctx, &rhs);
    let labels: Vec<String> = sorted.iter().map(|t| (t + 1).to_string()).collect();
    exact_check(
        ctx,
        format!(
            "multiparam E_{}(theta; p | I={{{}}}) = star RHS",
            k,
            labels.join(",")
        ),
        seed,
        None,
        &target,
        k + 1,
        false,
    )
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// Pairwise commutativity across backends for one strand count: numeric for
/// all three coefficient families, exact multiparameter, the operator
/// oracle, and a negative control per backend class.
pub fn commutativity_suite(n: usize, seed: u64, tol: f64) -> Result<Vec<AlgCheck>, String> {
    let mut out = Vec::new();
    for kind in [
        FamilyKind::Elliptic,
        FamilyKind::Trigonometric,
        FamilyKind::Rational,
    ] {
        let fam = FamilyParams::generic(kind, n, derive_seed(seed, "family"));
        let plan = SamplePlan::new(derive_seed(seed, "points"));
        let points = plan.draw_points(n, |p| fam.pole_distance(p))?;
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(commutator_check_numeric(&fam, &points, i, j, seed, tol));
            }
        }
        // Operator oracle on a representative pair (cost grows with n).
        let r = commutator_operator_residual(n, 0, 1, kind, seed)?;
        out.push(check_row(
            "[theta_1, theta_2] operator image vanishes".to_string(),
            format!("operator-{}", family_backend_name(kind).trim_start_matches("numeric-")),
            n,
            seed,
            None,
            r <= tol,
            false,
            Some(r),
            Some(tol),
            "operator residual".to_string(),
            false,
        ));
    }
    let ctxm = MultiparamAlgebra::generic(n, derive_seed(seed, "multiparam"));
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(commutator_check_exact(&ctxm, i, j, seed));
        }
    }
    // Negative controls: a commutator plus a stray bracket is not a member.
    let broken = |ctx: &NumericAlgebra| {
        let ti = theta(ctx, 0);
        let tj = theta(ctx, 1);
        let mut t = ti.mul(ctx, &tj).sub(ctx, &tj.mul(ctx, &ti));
        t = t.add(
            ctx,
            &Elem::bracket(ctx, 0, 1).scale(ctx, &C64::new(0.1, 0.0)),
        );
        t
    };
    let fam = FamilyParams::generic(FamilyKind::Elliptic, n, derive_seed(seed, "family"));
    let plan = SamplePlan::new(derive_seed(seed, "points"));
    let points = plan.draw_points(n, |p| fam.pole_distance(p))?;
    out.push({
        let mut row = numeric_check(
            &fam,
            &points,
            "[theta_1, theta_2] + 0.1[12] rejected".to_string(),
            seed,
            None,
            &broken,
            3,
            tol,
            true,
        );
        row.pass = !row.member;
        row
    });
    {
        let ti = theta(&ctxm, 0);
        let tj = theta(&ctxm, 1);
        let mut t = ti.mul(&ctxm, &tj).sub(&ctxm, &tj.mul(&ctxm, &ti));
        t = t.add(&ctxm, &Elem::bracket(&ctxm, 0, 1).scale(&ctxm, &crate::poly::q(1, 10)));
        out.push(exact_check(
            &ctxm,
            "[theta_1, theta_2] + (1/10)[12] rejected".to_string(),
            seed,
            None,
            &t,
            3,
            true,
        ));
    }
    Ok(out)
}

/// Cyclic-sum identities for pivot counts 3..=min(5, n) over all increasing
/// index tuples, exact and numeric, plus a dropped-summand control.
pub fn cyclic_suite(n: usize, seed: u64, tol: f64) -> Result<Vec<AlgCheck>, String> {
    let mut out = Vec::new();
    let ctxm = MultiparamAlgebra::generic(n, derive_seed(seed, "multiparam"));
    let fam = FamilyParams::generic(FamilyKind::Elliptic, n, derive_seed(seed, "family"));
    let plan = SamplePlan::new(derive_seed(seed, "points"));
    let points = plan.draw_points(n, |p| fam.pole_distance(p))?;
    let all: Vec<usize> = (0..n).collect();
    for k in 3..=n.min(5) {
        for idx in subsets_of_size(&all, k) {
            out.push(q_k_identity(&ctxm, &idx, seed));
            let labels: Vec<String> = idx.iter().map(|t| (t + 1).to_string()).collect();
            let idx_c = idx.clone();
            out.push(numeric_check(
                &fam,
                &points,
                format!("cyclic sum k={} pivots ({})", k, labels.join(",")),
                seed,
                None,
                &|ctx| q_k_sum(ctx, &idx_c),
                k,
                tol,
                false,
            ));
        }
    }
    // Control: dropping the last pivot summand must break the identity.
    if n >= 4 {
        let idx: Vec<usize> = (0..4).collect();
        let mut target: Elem<Q> = Elem::zero();
        for a in 0..3 {
            let pairs: Vec<(usize, usize)> =
                (1..4).map(|off| (idx[a], idx[(a + off) % 4])).collect();
            target = target.add(&ctxm, &word_elem(&ctxm, &pairs));
        }
        out.push(exact_check(
            &ctxm,
            "cyclic sum k=4 with a dropped summand rejected".to_string(),
            seed,
            None,
            &target,
            4,
            true,
        ));
    }
    Ok(out)
}

/// ℘-weighted cyclic identities for 2..=min(4, n−1) pivots over all
/// increasing pivot tuples and apexes, exact and numeric, plus the written
/// four-pivot reference expansion (term-by-term) and controls.
pub fn weighted_suite(n: usize, seed: u64, tol: f64) -> Result<Vec<AlgCheck>, String> {
    let mut out = Vec::new();
    let ctxm = MultiparamAlgebra::generic(n, derive_seed(seed, "multiparam"));
    let fam = FamilyParams::generic(FamilyKind::Elliptic, n, derive_seed(seed, "family"));
    let plan = SamplePlan::new(derive_seed(seed, "points"));
    let points = plan.draw_points(n, |p| fam.pole_distance(p))?;
    let all: Vec<usize> = (0..n).collect();
    for k in 2..=(n - 1).min(4) {
        for idx in subsets_of_size(&all, k) {
            for &m in all.iter().filter(|t| !idx.contains(t)) {
                out.push(p_k_identity(&ctxm, &idx, m, seed));
                out.push(p_k_identity_numeric(&fam, &points, &idx, m, seed, tol));
            }
        }
    }
    if n >= 5 {
        out.extend(four_pivot_reference_checks(&ctxm, &fam, &points, seed, tol));
    }
    // Control: perturbing one weight must break the identity (exact).
    {
        let idx = [0usize, 1];
        let m = 2usize;
        let rho = |i: usize| {
            let base = ctxm.p_of(i as u8, m as u8);
            if i == 0 {
                base + crate::poly::q(1, 10)
            } else {
                base
            }
        };
        let (lhs, rhs) = p_k_sides(&ctxm, &idx, m, &rho);
        let target = lhs.sub(&ctxm, &rhs);
        out.push(exact_check(
            &ctxm,
            "weighted cyclic k=2 with perturbed weight rejected".to_string(),
            seed,
            None,
            &target,
            4,
            true,
        ));
    }
    Ok(out)
}

/// The fully written-out four-pivot weighted cyclic instance on strands
/// 1..4 with apex 5, transcribed term-by-term as reference data: the left
/// side is the sum of the four five-letter words starting at each pivot,
/// the right side carries coefficient −ρ(i_a) on the three-letter pivot
/// products. Checks that the general builders reproduce both sides exactly
/// after left-normalization (exact rationals; numerically to round-off),
/// then certifies the identity itself.
fn four_pivot_reference_checks(
    ctxm: &MultiparamAlgebra,
    fam: &FamilyParams,
    points: &[Vec<C64>],
    seed: u64,
    tol: f64,
) -> Vec<AlgCheck> {
    let mut out = Vec::new();
    let idx = [0usize, 1, 2, 3];
    let m = 4usize;
    // Reference words, 0-based transcription of the written instance.
    let lhs_words: [Vec<(usize, usize)>; 4] = [
        vec![(0, 4), (1, 4), (2, 4), (3, 4), (0, 4)],
        vec![(1, 4), (2, 4), (3, 4), (0, 4), (1, 4)],
        vec![(2, 4), (3, 4), (0, 4), (1, 4), (2, 4)],
        vec![(3, 4), (0, 4), (1, 4), (2, 4), (3, 4)],
    ];
    let rhs_words: [Vec<(usize, usize)>; 4] = [
        vec![(0, 1), (0, 2), (0, 3)],
        vec![(1, 2), (1, 3), (1, 0)],
        vec![(2, 3), (2, 0), (2, 1)],
        vec![(3, 0), (3, 1), (3, 2)],
    ];

    // Exact comparison in the multiparameter algebra (ρ(i) = p_{i m}).
    {
        let rho = |i: usize| ctxm.p_of(i as u8, m as u8);
        let (lhs, rhs) = p_k_sides(ctxm, &idx, m, &rho);
        let mut ref_lhs: Elem<Q> = Elem::zero();
        for w in &lhs_words {
            ref_lhs = ref_lhs.add(ctxm, &word_elem(ctxm, w));
        }
        // Builder's left side carries the sign (−1)^{k+1} = −1 for k = 4.
        let match_lhs = lhs == ref_lhs.neg(ctxm);
        let mut ref_rhs: Elem<Q> = Elem::zero();
        for (a, w) in rhs_words.iter().enumerate() {
            let c = -rho(idx[a]);
            ref_rhs = ref_rhs.add(ctxm, &word_elem(ctxm, w).scale(ctxm, &c));
        }
        // Reference asserts (unsigned lhs) = ref_rhs, i.e. builder rhs =
        // −ref_rhs.
        let match_rhs = rhs == ref_rhs.neg(ctxm);
        out.push(check_row(
            "four-pivot reference expansion matches builders term-by-term".to_string(),
            "exact-multiparam".to_string(),
            ctxm.n,
            seed,
            None,
            match_lhs && match_rhs,
            match_lhs && match_rhs,
            None,
            None,
            "raw term comparison".to_string(),
            false,
        ));
        let target = lhs.sub(ctxm, &rhs);
        out.push(exact_check(
            ctxm,
            "four-pivot weighted cyclic identity".to_string(),
            seed,
            None,
            &target,
            6,
            false,
        ));
    }
    // Numeric comparison with ρ(i) = K·℘(λ_{i m}).
    {
        let ctx = NumericAlgebra::new(fam, points[0].clone());
        let rho = |i: usize| elliptic_pair_lambda(fam, i, m);
        let (lhs, rhs) = p_k_sides(&ctx, &idx, m, &rho);
        let mut ref_both: Elem<C64> = Elem::zero();
        for w in &lhs_words {
            ref_both = ref_both.add(&ctx, &word_elem(&ctx, w));
        }
        let lhs_diff = lhs.sub(&ctx, &ref_both.neg(&ctx));
        let mut ref_rhs: Elem<C64> = Elem::zero();
        for (a, w) in rhs_words.iter().enumerate() {
            let c = -rho(idx[a]);
            ref_rhs = ref_rhs.add(&ctx, &word_elem(&ctx, w).scale(&ctx, &c));
        }
        let rhs_diff = rhs.sub(&ctx, &ref_rhs.neg(&ctx));
        let r = numeric_residual(&lhs_diff, 1.0).max(numeric_residual(&rhs_diff, 1.0));
        out.push(check_row(
            "four-pivot reference expansion matches builders term-by-term".to_string(),
            "numeric-elliptic".to_string(),
            fam.lambda.len(),
            seed,
            None,
            r <= 1e-12,
            false,
            Some(r),
            Some(1e-12),
            "raw term comparison".to_string(),
            false,
        ));
        out.push(p_k_identity_numeric(fam, points, &idx, m, seed, tol));
    }
    out
}

/// Adjudicate the φ convention, then verify the Pieri expansion over every
/// instance n ≤ n_max, k ≤ k_max, I ⊆ {1..n} with |I| ≥ k, the full-set
/// corollary, the worked three-index example with both printed coefficient
/// readings, the convention-difference rejections, the operator oracle, and
/// a perturbed-φ control. Returns the winning convention label with the
/// rows.
pub fn pieri_suite(
    n_max: usize,
    k_max: usize,
    seed: u64,
    tol: f64,
) -> Result<(&'static str, Vec<AlgCheck>), String> {
    pieri_suite_with(n_max, k_max, seed, tol, None)
}

/// [`pieri_suite`] with the φ convention forced instead of adjudicated; the
/// adjudication rows are still run, judged relative to the forced winner.
pub fn pieri_suite_with(
    n_max: usize,
    k_max: usize,
    seed: u64,
    tol: f64,
    forced: Option<PhiConvention>,
) -> Result<(&'static str, Vec<AlgCheck>), String> {
    let mut out = Vec::new();

    // Adjudication on small instances: the winner must certify and its
    // rival must fail on the same data. The rival's row is kept as a
    // negative control — its rejection is the adjudicated expectation.
    let mut x_ok = true;
    let mut lambda_ok = true;
    let mut adjudication_rows = Vec::new();
    {
        let n = 3;
        let fam = FamilyParams::generic(FamilyKind::Elliptic, n, derive_seed(seed, "family"));
        let plan = SamplePlan::new(derive_seed(seed, "points"));
        let points = plan.draw_points(n, |p| fam.pole_distance(p))?;
        for conv in [PhiConvention::XDifferences, PhiConvention::LambdaDifferences] {
            let row = verify_pieri(&fam, &points, &[0, 1], 2, conv, seed, tol);
            match conv {
                PhiConvention::XDifferences => x_ok &= row.member,
                PhiConvention::LambdaDifferences => lambda_ok &= row.member,
            }
            adjudication_rows.push(row);
        }
    }
    let winner = match forced {
        Some(c) => c,
        None => match (x_ok, lambda_ok) {
            (true, false) => PhiConvention::XDifferences,
            (false, true) => PhiConvention::LambdaDifferences,
            // Ambiguous or double failure: fall back to x-differences and
            // let the per-instance rows report honestly.
            _ => PhiConvention::XDifferences,
        },
    };
    for mut row in adjudication_rows {
        if row.convention != Some(winner.label()) {
            // The rival convention's rejection is the adjudicated outcome.
            row.identity = format!("{} [rival convention]", row.identity);
            row.negative_control = true;
            row.pass = !row.member;
        }
        out.push(row);
    }
    out.push(check_row(
        format!(
            "phi convention adjudication: x {} / lambda {}",
            if x_ok { "certifies" } else { "fails" },
            if lambda_ok { "certifies" } else { "fails" }
        ),
        "numeric-elliptic".to_string(),
        3,
        seed,
        Some(winner.label()),
        x_ok ^ lambda_ok,
        false,
        None,
        Some(tol),
        "adjudication".to_string(),
        false,
    ));

    for n in 2..=n_max {
        let fam = FamilyParams::generic(FamilyKind::Elliptic, n, derive_seed(seed, "family"));
        let plan = SamplePlan::new(derive_seed(seed, "points"));
        let points = plan.draw_points(n, |p| fam.pole_distance(p))?;
        let all: Vec<usize> = (0..n).collect();
        for k in 1..=k_max.min(n) {
            for size in k..=n {
                for iset in subsets_of_size(&all, size) {
                    out.push(verify_pieri(&fam, &points, &iset, k, winner, seed, tol));
                }
            }
            // Reject the difference of the two conventions once per (n, k)
            // whenever φ actually contributes; with no strands outside I
            // every φ stratum vanishes and the difference is genuinely zero.
            if k >= 2 && n > k {
                let iset: Vec<usize> = (0..k).collect();
                let iset_c = iset.clone();
                let labels: Vec<String> = iset.iter().map(|t| (t + 1).to_string()).collect();
                out.push(numeric_check(
                    &fam,
                    &points,
                    format!(
                        "phi convention difference on I={{{}}}, k={} rejected",
                        labels.join(","),
                        k
                    ),
                    seed,
                    Some(winner.label()),
                    &|ctx| {
                        let px = |a: usize, b: usize| elliptic_pair_x(&fam, &ctx.point, a, b);
                        let pl = |a: usize, b: usize| elliptic_pair_lambda(&fam, a, b);
                        pieri_rhs(ctx, &iset_c, k, &px).sub(ctx, &pieri_rhs(ctx, &iset_c, k, &pl))
                    },
                    k + 1,
                    tol,
                    true,
                ));
            }
            // Full-set corollary rows.
            if k <= n {
                out.push(corollary_check(&fam, &points, n, k, winner, seed, tol));
            }
        }
    }

    // Operator oracle instances: residuals under both conventions.
    for (n, iset, k) in [(4usize, vec![0usize, 1], 2usize), (5, vec![0, 1, 2], 3)] {
        let (rx, rl) = pieri_operator_residuals(n, &iset, k, seed)?;
        let labels: Vec<String> = iset.iter().map(|t| (t + 1).to_string()).collect();
        let (win_res, lose_res) = match winner {
            PhiConvention::XDifferences => (rx, rl),
            PhiConvention::LambdaDifferences => (rl, rx),
        };
        out.push(check_row(
            format!(
                "operator Pieri E_{} I={{{}}}: winner residual {:.3e}, rival {:.3e}",
                k,
                labels.join(","),
                win_res,
                lose_res
            ),
            "operator-elliptic".to_string(),
            n,
            seed,
            Some(winner.label()),
            win_res <= tol && lose_res > 1e3 * tol,
            false,
            Some(win_res),
            Some(tol),
            "operator residual".to_string(),
            false,
        ));
    }

    // Worked three-index example rows (needs five strands).
    if n_max >= 5 {
        out.extend(worked_e3_checks(seed, tol)?);
    }

    // Negative control: scaling φ by 1.1 must break the expansion.
    {
        let n = 4;
        let fam = FamilyParams::generic(FamilyKind::Elliptic, n, derive_seed(seed, "family"));
        let plan = SamplePlan::new(derive_seed(seed, "points"));
        let points = plan.draw_points(n, |p| fam.pole_distance(p))?;
        out.push(numeric_check(
            &fam,
            &points,
            "Pieri with phi scaled by 1.1 rejected".to_string(),
            seed,
            Some(winner.label()),
            &|ctx| {
                let iset = [0usize, 1];
                let mut gens = BTreeMap::new();
                for &i in &iset {
                    gens.insert(i, theta(ctx, i));
                }
                let pair = |i: usize, j: usize| elliptic_pair_lambda(&fam, i, j);
                let lhs = ek_deformed(ctx, &iset, 2, &gens, &pair);
                let phi_pair = |a: usize, b: usize| {
                    let v = match winner {
                        PhiConvention::XDifferences => elliptic_pair_x(&fam, &ctx.point, a, b),
                        PhiConvention::LambdaDifferences => elliptic_pair_lambda(&fam, a, b),
                    };
                    v * C64::new(1.1, 0.0)
                };
                let rhs = pieri_rhs(ctx, &iset, 2, &phi_pair);
                lhs.sub(ctx, &rhs)
            },
            3,
            tol,
            true,
        ));
    }

    Ok((winner.label(), out))
}

/// The worked three-index expansion on five strands: E₃(θ | I = {1,2,3})
/// equals the (*)-stratum plus single-bracket terms whose coefficients are
/// written as the full ψ values; the general expansion produces K·℘ of the
/// position differences there instead. Both readings are checked: one
/// structural row (the general builder reproduces the written shape
/// term-by-term under a shared coefficient map) and one membership row per
/// coefficient reading.
fn worked_e3_checks(seed: u64, tol: f64) -> Result<Vec<AlgCheck>, String> {
    let n = 5usize;
    let iset = [0usize, 1, 2];
    let k = 3usize;
    let fam = FamilyParams::generic(FamilyKind::Elliptic, n, derive_seed(seed, "family"));
    let plan = SamplePlan::new(derive_seed(seed, "points"));
    let points = plan.draw_points(n, |p| fam.pole_distance(p))?;
    let mut out = Vec::new();

    // Structural row: the stratified builder agrees term-by-term with the
    // written shape when both use the same pair-coefficient map.
    {
        let ctx = NumericAlgebra::new(&fam, points[0].clone());
        let phi_pair = |a: usize, b: usize| elliptic_pair_x(&fam, &ctx.point, a, b);
        let built = pieri_rhs(&ctx, &iset, k, &phi_pair);
        let mut reference: Elem<C64> = Elem::zero();
        // All orderings of {1,2,3} against weakly increasing b's in {4,5}.
        for aseq in ordered_tuples(&iset, 3) {
            for bseq in weakly_increasing(&[3, 4], 3) {
                let pairs: Vec<(usize, usize)> = aseq
                    .iter()
                    .zip(bseq.iter())
                    .map(|(&a, &b)| (a, b))
                    .collect();
                reference = reference.add(&ctx, &word_elem(&ctx, &pairs));
            }
        }
        // Coefficiented single brackets: pair {i,j} ⊂ I against the third
        // index a, bracketed with each outside strand.
        for (i, j, a) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
            let c = phi_pair(i, j);
            let mut single = word_elem(&ctx, &[(a, 3)]).add(&ctx, &word_elem(&ctx, &[(a, 4)]));
            single = single.scale(&ctx, &c);
            reference = reference.add(&ctx, &single);
        }
        let r = numeric_residual(&built.sub(&ctx, &reference), 1.0);
        out.push(check_row(
            "worked E_3 expansion matches stratified builder term-by-term".to_string(),
            "numeric-elliptic".to_string(),
            n,
            seed,
            Some("x"),
            r <= 1e-12,
            false,
            Some(r),
            Some(1e-12),
            "raw term comparison".to_string(),
            false,
        ));
    }

    // Membership under the ℘-of-position reading of the coefficients.
    out.push({
        let mut row = verify_pieri(
            &fam,
            &points,
            &iset,
            k,
            PhiConvention::XDifferences,
            seed,
            tol,
        );
        row.identity = "worked E_3 with K-weierstrass coefficients".to_string();
        row
    });

    // Membership under the literal ψ coefficients (includes the A/x² part):
    // rejected under adjudication, so the row is a negative control.
    {
        let iset_c = iset.to_vec();
        out.push(numeric_check(
            &fam,
            &points,
            "worked E_3 with full psi coefficients [rival reading]".to_string(),
            seed,
            Some("psi"),
            &|ctx| {
                let mut gens = BTreeMap::new();
                for &i in &iset_c {
                    gens.insert(i, theta(ctx, i));
                }
                let pair = |i: usize, j: usize| elliptic_pair_lambda(&fam, i, j);
                let lhs = ek_deformed(ctx, &iset_c, k, &gens, &pair);
                let phi_pair = |a: usize, b: usize| {
                    fam.psi(a, b, ctx.point[a] - ctx.point[b])
                        .expect("sample points stay off the singular loci")
                };
                let rhs = pieri_rhs(ctx, &iset_c, k, &phi_pair);
                lhs.sub(ctx, &rhs)
            },
            k + 1,
            tol,
            true,
        ));
    }
    Ok(out)
}

/// Equivariant Pieri suite: all instances n ≤ n_max, k ≤ k_max, |I| ≥ k,
/// the full-set identities for every k ≤ n, and a dropped-stratum control.
pub fn equivariant_suite(n_max: usize, k_max: usize) -> Vec<AlgCheck> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        let all: Vec<usize> = (0..n).collect();
        for k in 1..=k_max.min(n) {
            for size in k..=n {
                for iset in subsets_of_size(&all, size) {
                    out.push(equivariant_pieri(n, &iset, k));
                }
            }
        }
        for k in 1..=n {
            out.push(equivariant_full_set(n, k));
        }
    }
    // Control: dropping the monomial strata breaks the expansion.
    {
        let n = 3;
        let ctx = XPolyAlgebra { n };
        let iset = [0usize, 1];
        let elems: Vec<Elem<MPoly>> = iset.iter().map(|&i| theta_prime(&ctx, i)).collect();
        let lhs = ek_ordinary(&ctx, &elems, 2);
        let rhs = star_stratum(&ctx, &iset, &[2], 2);
        let red = reduce(&ctx, &lhs.sub(&ctx, &rhs));
        let (member, certified, method) = xpoly_membership(n, &red);
        out.push(check_row(
            "equivariant RHS without monomial strata rejected".to_string(),
            "exact-xpoly".to_string(),
            n,
            0,
            None,
            member,
            certified,
            None,
            None,
            method,
            true,
        ));
    }
    out
}

/// Multiparameter Pieri suite with generic rational parameters: all
/// instances n ≤ n_max, k ≤ k_max, |I| ≥ k, a κ/Λ² instance cross-checked
/// by the symmetric-group-algebra oracle, the p = 0 specialization, and a
/// perturbed-coefficient control.
pub fn multiparam_suite(n_max: usize, k_max: usize, seed: u64) -> Vec<AlgCheck> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        let ctxm = MultiparamAlgebra::generic(n, derive_seed(seed, "multiparam"));
        let all: Vec<usize> = (0..n).collect();
        for k in 1..=k_max.min(n) {
            for size in k..=n {
                for iset in subsets_of_size(&all, size) {
                    out.push(multiparam_pieri(&ctxm, &iset, k, seed));
                }
            }
        }
    }
    // κ/Λ² parameters admit the group-algebra representation
    // [ij] ↦ −(μ/Λ_ij)s_ij; the image of any certified target must vanish.
    {
        let n = 4;
        let mu = crate::poly::q(3, 7);
        let lam: Vec<Q> = [(1i64, 1i64), (9, 4), (7, 2), (11, 3)]
            .iter()
            .map(|&(a, b)| crate::poly::q(a, b))
            .collect();
        let kappa = &mu * &mu;
        let ctxk = MultiparamAlgebra::from_kappa_lambda(&kappa, &lam);
        let iset = [0usize, 1];
        let mut gens = BTreeMap::new();
        for &i in &iset {
            gens.insert(i, theta(&ctxk, i));
        }
        let pair = |i: usize, j: usize| ctxk.p_of(i as u8, j as u8);
        let lhs = ek_deformed(&ctxk, &iset, 2, &gens, &pair);
        let rhs = multiparam_rhs(&ctxk, &iset, 2);
        let target = lhs.sub(&ctxk, &rhs);
        let image = crate::freealg::group_algebra_image(&target, &mu, &lam);
        out.push(check_row(
            "group-algebra image of the multiparam Pieri target vanishes".to_string(),
            "group-algebra".to_string(),
            n,
            seed,
            None,
            image.is_empty(),
            image.is_empty(),
            None,
            None,
            "symmetric-group representation".to_string(),
            false,
        ));
    }
    // p = 0 specialization: the same expansion holds with zero parameters.
    {
        let n = 4;
        let ctx0 = MultiparamAlgebra::new(n, BTreeMap::new());
        out.push({
            let mut row = multiparam_pieri(&ctx0, &[0, 1], 2, seed);
            row.identity = "multiparam Pieri at p = 0".to_string();
            row
        });
    }
    // Control: perturbing one recursion coefficient must break it.
    {
        let n = 4;
        let ctxm = MultiparamAlgebra::generic(n, derive_seed(seed, "multiparam"));
        let iset = [0usize, 1];
        let mut gens = BTreeMap::new();
        for &i in &iset {
            gens.insert(i, theta(&ctxm, i));
        }
        let pair = |i: usize, j: usize| {
            let base = ctxm.p_of(i as u8, j as u8);
            if (i, j) == (0, 1) {
                base + crate::poly::q(1, 10)
            } else {
                base
            }
        };
        let lhs = ek_deformed(&ctxm, &iset, 2, &gens, &pair);
        let rhs = multiparam_rhs(&ctxm, &iset, 2);
        let target = lhs.sub(&ctxm, &rhs);
        out.push(exact_check(
            &ctxm,
            "multiparam Pieri with perturbed coefficient rejected".to_string(),
            seed,
            None,
            &target,
            3,
            true,
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Degeneration bridge
// ---------------------------------------------------------------------------

/// Detailed record of one elliptic → multiparameter degeneration check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DegenerationReport {
    pub n: usize,
    pub k: usize,
    pub iset: Vec<usize>,
    pub delta: f64,
    /// Worst relative error of K·℘(λ_ij(δ)) against the central parameter
    /// p_ij = κ/Λ_ij², at δ and δ/2, and after Richardson extrapolation.
    pub p_rel_err_delta: f64,
    pub p_rel_err_half: f64,
    pub p_rel_err_richardson: f64,
    /// Numeric membership residual of the multiparameter Pieri shape inside
    /// the finite-δ elliptic algebra, at δ and δ/2 (expected to shrink like
    /// δ² as the φ strata vanish).
    pub pieri_residual_delta: f64,
    pub pieri_residual_half: f64,
    /// Exact multiparameter verdict at the limit parameters.
    pub exact_member: bool,
    pub tol: f64,
    pub pass: bool,
}

/// Verify that the elliptic family specialized by K = κδ², λ_i = δΛ_i
/// degenerates onto the multiparameter algebra: the recursion coefficients
/// converge to p_ij = κ/Λ_ij² (Richardson-checked at δ/2), the
/// multiparameter Pieri shape nearly-annihilates the finite-δ elliptic E_k
/// with a residual that shrinks like δ², and the exact backend certifies
/// the limit identity.
pub fn degeneration_check(
    n: usize,
    iset: &[usize],
    k: usize,
    delta: f64,
    seed: u64,
    tol: f64,
) -> Result<DegenerationReport, String> {
    // Rational limit data shared by both sides.
    let kappa_q = crate::poly::q(2, 3);
    let lam_q: Vec<Q> = (0..n)
        .map(|i| crate::poly::q(2 * i as i64 + 1, i as i64 + 2))
        .collect();
    let ctxm = MultiparamAlgebra::from_kappa_lambda(&kappa_q, &lam_q);
    let exact = multiparam_pieri(&ctxm, iset, k, seed);

    let qf = crate::poly::q_to_f64;
    let md = MultiparamData {
        kappa: C64::new(qf(&kappa_q), 0.0),
        capital_lambda: lam_q.iter().map(|l| C64::new(qf(l), 0.0)).collect(),
    };
    let tau = C64::new(0.31, 1.27);

    // Recursion-coefficient convergence with Richardson extrapolation: the
    // finite-δ error is O(δ⁴), so the δ/2 value improves 16-fold and the
    // extrapolant (16·v(δ/2) − v(δ))/15 lands at the noise floor.
    let fam_d = md.at_delta_elliptic(n, delta, tau);
    let fam_h = md.at_delta_elliptic(n, delta / 2.0, tau);
    let mut e_d = 0.0f64;
    let mut e_h = 0.0f64;
    let mut e_r = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let p = md.p(i, j);
            let vd = elliptic_pair_lambda(&fam_d, i, j);
            let vh = elliptic_pair_lambda(&fam_h, i, j);
            let rich = (vh * 16.0 - vd) / 15.0;
            e_d = e_d.max(((vd - p) / p).norm());
            e_h = e_h.max(((vh - p) / p).norm());
            e_r = e_r.max(((rich - p) / p).norm());
        }
    }

    // Pieri-shape residual inside the finite-δ elliptic algebra.
    let residual_at = |fam: &FamilyParams| -> Result<f64, String> {
        let plan = SamplePlan::new(derive_seed(seed, "degeneration"));
        let points = plan.draw_points(n, |p| fam.pole_distance(p))?;
        let mut worst = 0.0f64;
        for pt in &points {
            let ctx = NumericAlgebra::new(fam, pt.clone());
            let mut gens = BTreeMap::new();
            for &i in iset {
                gens.insert(i, theta(&ctx, i));
            }
            let pair = |i: usize, j: usize| elliptic_pair_lambda(fam, i, j);
            let lhs = ek_deformed(&ctx, iset, k, &gens, &pair);
            let rhs = multiparam_rhs(&ctx, iset, k);
            let m = membership_numeric(&ctx, &lhs.sub(&ctx, &rhs), k + 1, 1e-14, 50_000);
            worst = worst.max(m.residual.unwrap_or(f64::INFINITY));
        }
        Ok(worst)
    };
    let r_d = residual_at(&fam_d)?;
    let r_h = residual_at(&fam_h)?;

    let noise = 1e-9;
    let p_ok = e_d <= tol && (e_h <= e_d * 1.1 + noise) && e_r <= e_h.max(noise);
    let pieri_ok = r_d <= tol && (r_h <= r_d * 0.6 || r_h <= noise);
    Ok(DegenerationReport {
        n,
        k,
        iset: iset.iter().map(|t| t + 1).collect(),
        delta,
        p_rel_err_delta: e_d,
        p_rel_err_half: e_h,
        p_rel_err_richardson: e_r,
        pieri_residual_delta: r_d,
        pieri_residual_half: r_h,
        exact_member: exact.member,
        tol,
        pass: p_ok && pieri_ok && exact.member,
    })
}

/// Degenerate-cyclic suite in the ψ = 0 specialization (all parameters
/// zero): the unweighted cyclic sums vanish for every pivot count ≥ 1, and
/// a sign-flipped control is rejected.
pub fn degenerate_cyclic_suite(n: usize, seed: u64) -> Vec<AlgCheck> {
    let ctx0 = MultiparamAlgebra::new(n, BTreeMap::new());
    let mut out = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    for k in 1..=(n - 1).min(4) {
        let idx: Vec<usize> = (0..k).collect();
        let m = k;
        let target = degenerate_cyclic_sum(&ctx0, &idx, m);
        let labels: Vec<String> = idx.iter().map(|t| (t + 1).to_string()).collect();
        out.push(exact_check(
            &ctx0,
            format!(
                "degenerate cyclic sum k={} pivots ({}) apex {}",
                k,
                labels.join(","),
                m + 1
            ),
            seed,
            None,
            &target,
            k + 2,
            false,
        ));
    }
    let _ = all;
    // Control: flipping one summand's sign must break the vanishing.
    if n >= 3 {
        let idx = [0usize, 1];
        let m = 2usize;
        let w0 = word_elem(&ctx0, &[(0, 2), (1, 2), (0, 2)]);
        let w1 = word_elem(&ctx0, &[(1, 2), (0, 2), (1, 2)]);
        let target = w0.sub(&ctx0, &w1);
        let _ = (idx, m);
        out.push(exact_check(
            &ctx0,
            "degenerate cyclic sum with flipped sign rejected".to_string(),
            seed,
            None,
            &target,
            4,
            true,
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qi};

    const TOL: f64 = 1e-8;

    fn elliptic_points(fam: &FamilyParams, seed: u64) -> Vec<Vec<C64>> {
        let plan = SamplePlan::new(seed);
        plan.draw_points(fam.lambda.len(), |p| fam.pole_distance(p))
            .unwrap()
    }

    #[test]
    fn theta_shape_and_antisymmetry() {
        let ctx = MultiparamAlgebra::generic(3, 5);
        let t0 = theta(&ctx, 0);
        assert_eq!(t0.num_terms(), 2);
        for (w, c) in &t0.terms {
            assert_eq!(w.0.len(), 1);
            assert_eq!(*c, qi(1));
        }
        // Two strands: theta_2 = −[12].
        let ctx2 = MultiparamAlgebra::generic(2, 5);
        let t1 = theta(&ctx2, 1);
        let (w, c) = t1.terms.iter().next().unwrap();
        assert_eq!(w.0[0], Gen { i: 0, j: 1 });
        assert_eq!(*c, qi(-1));
        // Σ_i theta_i telescopes to zero before any reduction.
        let mut sum: Elem<Q> = Elem::zero();
        for i in 0..3 {
            sum = sum.add(&ctx, &theta(&ctx, i));
        }
        assert!(sum.is_zero());
    }

    #[test]
    fn matchings_and_phi_agree_with_closed_forms() {
        assert_eq!(pair_matchings(&[]).len(), 1);
        assert_eq!(pair_matchings(&[2, 7]), vec![vec![(2, 7)]]);
        let m4 = pair_matchings(&[0, 1, 2, 3]);
        assert_eq!(
            m4,
            vec![
                vec![(0, 1), (2, 3)],
                vec![(0, 2), (1, 3)],
                vec![(0, 3), (1, 2)]
            ]
        );
        assert_eq!(pair_matchings(&[0, 1, 2, 3, 4, 5]).len(), 15);
        // φ against the explicit three-matching sum with an injective pair
        // map into distinct rationals.
        let ctx = MultiparamAlgebra::generic(6, 1);
        let pair = |a: usize, b: usize| q((a as i64 + 2) * 10 + b as i64, 7);
        let lhs = phi_of(&ctx, &[0, 1, 2, 3], &pair);
        let rhs = &(&pair(0, 1) * &pair(2, 3))
            + &(&(&pair(0, 2) * &pair(1, 3)) + &(&pair(0, 3) * &pair(1, 2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ek_reproduces_the_written_three_index_value() {
        // E₃({a,b,c}) = X_a X_b X_c + c_{bc} X_a + c_{ac} X_b + c_{ab} X_c,
        // with the generator product in increasing index order.
        let ctx = MultiparamAlgebra::generic(8, 3);
        let iset = [0usize, 1, 2];
        let mut gens: BTreeMap<usize, Elem<Q>> = BTreeMap::new();
        // Marker generators on disjoint strand pairs keep the raw words
        // distinguishable.
        gens.insert(0, Elem::bracket(&ctx, 0, 5));
        gens.insert(1, Elem::bracket(&ctx, 1, 6));
        gens.insert(2, Elem::bracket(&ctx, 2, 7));
        let pair = |i: usize, j: usize| q((10 + i as i64) * 10 + j as i64, 3);
        let e3 = ek_deformed(&ctx, &iset, 3, &gens, &pair);
        let mut expected = gens[&0]
            .mul(&ctx, &gens[&1])
            .mul(&ctx, &gens[&2]);
        expected = expected.add(&ctx, &gens[&0].scale(&ctx, &pair(1, 2)));
        expected = expected.add(&ctx, &gens[&1].scale(&ctx, &pair(0, 2)));
        expected = expected.add(&ctx, &gens[&2].scale(&ctx, &pair(0, 1)));
        assert_eq!(e3, expected);
        // E₂({i,j}) = X_i X_j + c_ij, E₁ = ΣX, E₀ = 1, E_{k>|I|} = 0.
        let e2 = ek_deformed(&ctx, &[0, 1], 2, &gens, &pair);
        let mut exp2 = gens[&0].mul(&ctx, &gens[&1]);
        exp2 = exp2.add(&ctx, &Elem::one(&ctx).scale(&ctx, &pair(0, 1)));
        assert_eq!(e2, exp2);
        assert_eq!(
            ek_deformed(&ctx, &[0, 1], 1, &gens, &pair),
            gens[&0].add(&ctx, &gens[&1])
        );
        assert_eq!(ek_deformed(&ctx, &[0, 1], 0, &gens, &pair), Elem::one(&ctx));
        assert!(ek_deformed(&ctx, &[0, 1], 3, &gens, &pair).is_zero());
    }

    #[test]
    fn ek_insertion_order_changes_lie_in_the_ideal() {
        let ctx = MultiparamAlgebra::generic(4, 11);
        let iset: Vec<usize> = (0..4).collect();
        let mut gens = BTreeMap::new();
        for &i in &iset {
            gens.insert(i, theta(&ctx, i));
        }
        let pair = |i: usize, j: usize| ctx.p_of(i as u8, j as u8);
        for k in [2usize, 3] {
            let last = ek_deformed(&ctx, &iset, k, &gens, &pair);
            let first = ek_with_pick(&ctx, &iset, k, &gens, &pair, &|_| 0);
            let mid = ek_with_pick(&ctx, &iset, k, &gens, &pair, &|s: &[usize]| s.len() / 2);
            for other in [&first, &mid] {
                let diff = last.sub(&ctx, other);
                let m = membership_exact_restricted(&ctx, &diff, k + 1, DEFAULT_MAX_COLUMNS);
                assert!(m.member, "insertion order changed E_{} mod ideal", k);
            }
        }
    }

    #[test]
    fn dunkl_elements_commute_exactly_and_numerically() {
        let ctxm = MultiparamAlgebra::generic(4, 7);
        for i in 0..4 {
            for j in (i + 1)..4 {
                let row = commutator_check_exact(&ctxm, i, j, 7);
                assert!(row.pass, "exact commutator failed: {}", row.identity);
            }
        }
        let fam = FamilyParams::generic(FamilyKind::Elliptic, 3, 7);
        let points = elliptic_points(&fam, 7);
        let row = commutator_check_numeric(&fam, &points, 0, 2, 7, TOL);
        assert!(row.pass, "numeric commutator residual {:?}", row.residual);
    }

    #[test]
    fn commutator_negative_controls_are_rejected() {
        let suite = commutativity_suite(3, 7, TOL).unwrap();
        for row in &suite {
            assert!(
                row.pass,
                "commutativity row failed: {} [{}] residual {:?}",
                row.identity, row.backend, row.residual
            );
        }
        assert!(suite.iter().any(|r| r.negative_control));
    }

    #[test]
    fn cyclic_sums_vanish_for_three_to_five_pivots() {
        let ctxm = MultiparamAlgebra::generic(5, 9);
        // Three pivots: literally the three-term relation; reduction alone
        // certifies.
        let row = q_k_identity(&ctxm, &[0, 1, 2], 9);
        assert!(row.pass && row.certified_by_reduction, "{:?}", row);
        for idx in [vec![0usize, 1, 2, 3], vec![0, 1, 2, 3, 4], vec![1, 2, 4]] {
            let row = q_k_identity(&ctxm, &idx, 9);
            assert!(row.pass, "cyclic sum failed: {}", row.identity);
        }
        let fam = FamilyParams::generic(FamilyKind::Elliptic, 4, 9);
        let points = elliptic_points(&fam, 9);
        let idx = vec![0usize, 1, 2, 3];
        let row = numeric_check(
            &fam,
            &points,
            "cyclic sum k=4".to_string(),
            9,
            None,
            &|ctx| q_k_sum(ctx, &idx),
            4,
            TOL,
            false,
        );
        assert!(row.pass, "numeric cyclic sum residual {:?}", row.residual);
    }

    #[test]
    fn weighted_cyclic_identities_hold_and_controls_fail() {
        let ctxm = MultiparamAlgebra::generic(4, 13);
        for (idx, m) in [(vec![0usize, 1], 2usize), (vec![0, 1, 2], 3), (vec![1, 3], 0)] {
            let row = p_k_identity(&ctxm, &idx, m, 13);
            assert!(row.pass, "weighted cyclic failed: {}", row.identity);
        }
        // Equal weights collapse the right side; the left side is then an
        // ideal member on its own.
        {
            let mut p = BTreeMap::new();
            for i in 0..4u8 {
                for j in (i + 1)..4 {
                    p.insert((i, j), q(5, 9));
                }
            }
            let ctx_eq = MultiparamAlgebra::new(4, p);
            let rho = |i: usize| ctx_eq.p_of(i as u8, 2);
            let (lhs, rhs) = p_k_sides(&ctx_eq, &[0, 1], 2, &rho);
            assert!(rhs.is_zero());
            let m = membership_exact_restricted(&ctx_eq, &lhs, 4, DEFAULT_MAX_COLUMNS);
            assert!(m.member);
        }
        let fam = FamilyParams::generic(FamilyKind::Elliptic, 4, 13);
        let points = elliptic_points(&fam, 13);
        let row = p_k_identity_numeric(&fam, &points, &[0, 1, 2], 3, 13, TOL);
        assert!(row.pass, "numeric weighted cyclic residual {:?}", row.residual);
        // Perturbed weight must fail.
        let rho_bad = |i: usize| {
            let base = ctxm.p_of(i as u8, 2);
            if i == 0 {
                base + q(1, 10)
            } else {
                base
            }
        };
        let (lhs, rhs) = p_k_sides(&ctxm, &[0, 1], 2, &rho_bad);
        let m = membership_exact_restricted(
            &ctxm,
            &lhs.sub(&ctxm, &rhs),
            4,
            DEFAULT_MAX_COLUMNS,
        );
        assert!(!m.member, "perturbed weighted cyclic must be rejected");
    }

    #[test]
    fn four_pivot_reference_expansion_matches() {
        let ctxm = MultiparamAlgebra::generic(5, 17);
        let fam = FamilyParams::generic(FamilyKind::Elliptic, 5, 17);
        let points = elliptic_points(&fam, 17);
        let rows = four_pivot_reference_checks(&ctxm, &fam, &points, 17, TOL);
        for row in &rows {
            assert!(
                row.pass,
                "four-pivot reference row failed: {} [{}] residual {:?} method {}",
                row.identity, row.backend, row.residual, row.method
            );
        }
    }

    #[test]
    fn pieri_certifies_under_position_differences_only() {
        let fam = FamilyParams::generic(FamilyKind::Elliptic, 3, 21);
        let points = elliptic_points(&fam, 21);
        let good = verify_pieri(
            &fam,
            &points,
            &[0, 1],
            2,
            PhiConvention::XDifferences,
            21,
            TOL,
        );
        assert!(good.pass, "x-difference Pieri residual {:?}", good.residual);
        let bad = verify_pieri(
            &fam,
            &points,
            &[0, 1],
            2,
            PhiConvention::LambdaDifferences,
            21,
            TOL,
        );
        assert!(!bad.member, "lambda-difference Pieri must fail");
    }

    #[test]
    fn pieri_operator_oracle_agrees() {
        let (rx, rl) = pieri_operator_residuals(4, &[0, 1], 2, 23).unwrap();
        assert!(rx <= 1e-8, "operator residual under x-differences: {rx:.3e}");
        assert!(rl > 1e-4, "operator residual under lambda-differences: {rl:.3e}");
    }

    #[test]
    fn full_set_corollary_holds() {
        let n = 3;
        let fam = FamilyParams::generic(FamilyKind::Elliptic, n, 25);
        let points = elliptic_points(&fam, 25);
        for k in 1..=3 {
            let row = corollary_check(&fam, &points, n, k, PhiConvention::XDifferences, 25, TOL);
            assert!(
                row.pass,
                "full-set corollary failed for k={}: residual {:?}",
                k, row.residual
            );
        }
        // Two strands, k = 1: the sum of the Dunkl elements is zero before
        // reduction.
        let ctx2 = MultiparamAlgebra::generic(2, 25);
        let sum = theta(&ctx2, 0).add(&ctx2, &theta(&ctx2, 1));
        assert!(sum.is_zero());
    }

    #[test]
    fn worked_e3_adjudicates_coefficient_reading() {
        let rows = worked_e3_checks(27, TOL).unwrap();
        // Structural row and the K·℘ membership row must pass.
        assert!(rows[0].pass, "structural row: {:?}", rows[0].residual);
        assert!(
            rows[1].pass,
            "K-weierstrass coefficient row: {:?}",
            rows[1].residual
        );
        // The literal-ψ reading disagrees with the expansion whenever
        // A = a² ≠ 0; the row is a negative control and passes by failing.
        assert!(rows[2].negative_control);
        assert!(
            !rows[2].member,
            "full-psi coefficients unexpectedly certified: {:?}",
            rows[2].residual
        );
        assert!(rows[2].pass, "psi control row should pass by rejection");
    }

    /// Every defining relation of each exact backend, built unreduced with
    /// the generic parameters, is checked in every strand relabeling used by
    /// the verification code (plus extra scrambles): its image must reduce
    /// to zero in the relabeled algebra. Since the relations generate the
    /// ideal and relabeling is multiplicative, this certifies that ideal
    /// membership transports along relabelings.
    #[test]
    fn relabeling_transports_the_defining_relations() {
        fn defining_relations<B: AlgebraCtx>(ctx: &B) -> Vec<Elem<B::C>> {
            let n = ctx.nstrands();
            let mut rels = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let b = Elem::bracket(ctx, i, j);
                    let sq = b.mul(ctx, &b);
                    let c = ctx.bracket_square(i as u8, j as u8, &[]);
                    rels.push(sq.sub(ctx, &Elem::one(ctx).scale(ctx, &c)));
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in i..n {
                        for l in (k + 1)..n {
                            if (k, l) > (i, j)
                                && i != k
                                && i != l
                                && j != k
                                && j != l
                            {
                                let a = Elem::bracket(ctx, i, j);
                                let b = Elem::bracket(ctx, k, l);
                                rels.push(a.mul(ctx, &b).sub(ctx, &b.mul(ctx, &a)));
                            }
                        }
                    }
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        let ij = Elem::bracket(ctx, i, j);
                        let jk = Elem::bracket(ctx, j, k);
                        let ki = Elem::bracket(ctx, k, i);
                        let r1 = ij
                            .mul(ctx, &jk)
                            .add(ctx, &jk.mul(ctx, &ki))
                            .add(ctx, &ki.mul(ctx, &ij));
                        let r2 = jk
                            .mul(ctx, &ij)
                            .add(ctx, &ki.mul(ctx, &jk))
                            .add(ctx, &ij.mul(ctx, &ki));
                        rels.push(r1);
                        rels.push(r2);
                    }
                }
            }
            rels
        }

        let n = 5usize;
        let mut sigmas: Vec<Vec<usize>> = (0..n).map(|m| sigma_to_top(n, m)).collect();
        sigmas.push(vec![1, 0, 2, 3, 4]);
        sigmas.push(vec![2, 0, 4, 1, 3]);

        let ctx = MultiparamAlgebra::generic(n, 41);
        for sigma in &sigmas {
            let ctx2 = relabel_multiparam(&ctx, sigma);
            for rel in defining_relations(&ctx) {
                let img = relabel_elem_q(&ctx2, &rel, sigma);
                assert!(
                    reduce(&ctx2, &img).is_zero(),
                    "multiparam relation does not transport under {:?}",
                    sigma
                );
            }
        }

        let ctx = XPolyAlgebra { n };
        for sigma in &sigmas {
            for rel in defining_relations(&ctx) {
                let img = relabel_elem_xpoly(&ctx, &rel, sigma);
                assert!(
                    reduce(&ctx, &img).is_zero(),
                    "x-polynomial relation does not transport under {:?}",
                    sigma
                );
            }
            // The coefficient twist must commute with relabeling: check
            // multiplicativity on twist-heavy equivariant elements.
            let a = theta_prime(&ctx, 0);
            let b = theta_prime(&ctx, 2);
            let lhs = relabel_elem_xpoly(&ctx, &a.mul(&ctx, &b), sigma);
            let rhs = relabel_elem_xpoly(&ctx, &a, sigma)
                .mul(&ctx, &relabel_elem_xpoly(&ctx, &b, sigma));
            assert!(
                lhs.sub(&ctx, &rhs).is_zero(),
                "relabeling is not multiplicative under {:?}",
                sigma
            );
        }
    }

    #[test]
    fn equivariant_pieri_reduces_to_zero() {
        for (n, iset, k) in [
            (3usize, vec![0usize, 1], 2usize),
            (3, vec![0, 1, 2], 2),
            (4, vec![0, 1, 2], 3),
        ] {
            let row = equivariant_pieri(n, &iset, k);
            assert!(row.pass, "equivariant Pieri failed: {}", row.identity);
        }
        for n in 2..=4 {
            for k in 1..=n {
                let row = equivariant_full_set(n, k);
                assert!(row.pass, "full-set equivariant failed: {}", row.identity);
            }
        }
        // Dropped strata are rejected.
        let suite_control = equivariant_suite(3, 2);
        let control = suite_control
            .iter()
            .find(|r| r.negative_control)
            .expect("control row present");
        assert!(control.pass, "equivariant control must be rejected");
    }

    #[test]
    fn multiparam_pieri_certifies_and_oracle_agrees() {
        let ctxm = MultiparamAlgebra::generic(4, 29);
        for (iset, k) in [
            (vec![0usize, 1], 2usize),
            (vec![0, 1, 2], 2),
            (vec![0, 1, 2, 3], 3),
        ] {
            let row = multiparam_pieri(&ctxm, &iset, k, 29);
            assert!(row.pass, "multiparam Pieri failed: {}", row.identity);
        }
        let rows = multiparam_suite(4, 2, 29);
        for row in &rows {
            assert!(
                row.pass,
                "multiparam suite row failed: {} ({})",
                row.identity, row.method
            );
        }
    }

    #[test]
    fn degeneration_bridge_converges() {
        let rep = degeneration_check(3, &[0, 1], 2, 1e-3, 31, 1e-4).unwrap();
        assert!(
            rep.pass,
            "degeneration check failed: p errors {:.3e}/{:.3e}/{:.3e}, residuals {:.3e}/{:.3e}, exact {}",
            rep.p_rel_err_delta,
            rep.p_rel_err_half,
            rep.p_rel_err_richardson,
            rep.pieri_residual_delta,
            rep.pieri_residual_half,
            rep.exact_member
        );
    }

    #[test]
    fn degenerate_cyclic_sums_vanish() {
        let rows = degenerate_cyclic_suite(5, 33);
        for row in &rows {
            assert!(
                row.pass,
                "degenerate cyclic row failed: {} ({})",
                row.identity, row.method
            );
        }
    }
}
