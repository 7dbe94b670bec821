//! The free algebra on bracket generators `[ij]` over twisted scalar
//! coefficients, the defining relations of the deformed Fomin–Kirillov
//! algebra, and a degree-bounded ideal-membership engine.
//!
//! Generators are normalized with i < j; `[ji]` is represented as −`[ij]`.
//! The defining relations (in normalized form) are:
//!
//! * `[ij]² = ψ̂_ij` (a central-scalar value depending on the backend:
//!   a function of x_i − x_j, a constant p_ij, or 0);
//! * `[ij][kl] = [kl][ij]` for disjoint {i,j} ∩ {k,l} = ∅;
//! * `[ij][jk] − [jk][ik] − [ik][ij] = 0` and
//!   `[jk][ij] − [ik][jk] − [ij][ik] = 0` for i < j < k (the two normalized
//!   images of the cyclic three-term relation);
//! * `[ij]·f = (s_ij f)·[ij]` for coefficient functions f (the twist).
//!
//! Membership of an element in the two-sided ideal generated by the
//! relations is decided in two stages. A greedy head-reduction pass rewrites
//! the largest reducible word (length-then-lex order) using the rules
//!
//! * `[ij][ij] → ψ̂_ij` (evaluated through the prefix twist),
//! * unsorted disjoint adjacent pair → sorted,
//! * `[jk][ik] → [ij][jk] − [ik][ij]`,
//! * `[jk][ij] → [ik][jk] + [ij][ik]`,
//! * `[ik][ij][ik] → −[ij][ik][ij] + (ψ̂_ij^{s_jk} − ψ̂_ik)·[jk]`,
//!
//! each strictly decreasing in the word order, so the pass terminates; a
//! zero result is an exact membership certificate. The cubic rule is the
//! resolution of the critical pair `[jk][ij][ij]`: reducing the square first
//! gives `ψ̂_ij^{s_jk}·[jk]`, reducing the head first gives
//! `ψ̂_ik·[jk] + [ij][ik][ij] + [ik][ij][ik]`, so their difference lies in
//! the ideal. With it, the 3-strand normal-form count is 1+3+4+3+1 = 12,
//! the dimension of the 3-strand algebra. A nonzero remainder is
//! then tested against a degree-bounded basis of ideal elements u·r·v —
//! exactly over ℚ (Gaussian elimination) for exact backends, by complex
//! least squares for numeric backends.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use num_complex::Complex64;
use num_traits::Zero;
#[allow(unused_imports)]
use num_traits::Float;


use crate::poly::{MPoly, Q};
use crate::scalars::FamilyParams;

type C64 = Complex64;

/// Normalized generator [ij] with i < j.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Gen {
    pub i: u8,
    pub j: u8,
}

/// Build a possibly-unnormalized bracket: returns (sign, normalized gen).
pub fn bracket(i: usize, j: usize) -> (i64, Gen) {
    assert_ne!(i, j, "bracket indices must differ");
    if i < j {
        (
            1,
            Gen {
                i: i as u8,
                j: j as u8,
            },
        )
    } else {
        (
            -1,
            Gen {
                i: j as u8,
                j: i as u8,
            },
        )
    }
}

impl Gen {
    pub fn disjoint(&self, o: &Gen) -> bool {
        self.i != o.i && self.i != o.j && self.j != o.i && self.j != o.j
    }
}

/// A word in the generators, ordered by length first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Word(pub Vec<Gen>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.0.len().cmp(&other.0.len()) {
            Ordering::Equal => self.0.cmp(&other.0),
            ord => ord,
        }
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn single(g: Gen) -> Self {
        Word(alloc::vec![g])
    }

    pub fn render(&self) -> String {
        use core::fmt::Write;
        if self.0.is_empty() {
            return String::from("1");
        }
        let mut s = String::new();
        for g in &self.0 {
            let _ = write!(s, "[{}{}]", g.i + 1, g.j + 1);
        }
        s
    }
}

/// Apply the transpositions of `word` to a complex point, left to right.
/// This is the evaluation-side form of the coefficient twist.
pub fn permute_point(pt: &[C64], word: &[Gen]) -> Vec<C64> {
    let mut p = pt.to_vec();
    for g in word {
        p.swap(g.i as usize, g.j as usize);
    }
    p
}

/// Apply the twist of `word` to an exact polynomial coefficient: substitution
/// by each transposition in reverse order (contravariant to [`permute_point`]).
pub fn cross_poly(f: &MPoly, word: &[Gen]) -> MPoly {
    let mut out = f.clone();
    for g in word.iter().rev() {
        let mut images: Vec<(usize, i8)> = (0..out.nvars).map(|t| (t, 1)).collect();
        images.swap(g.i as usize, g.j as usize);
        out = out.subst_signed_perm(&images);
    }
    out
}

/// Scalar-coefficient operations for a backend, including the twist that
/// moves a coefficient leftward through a word.
pub trait CoeffOps {
    type C: Clone + PartialEq;
    fn zero(&self) -> Self::C;
    fn one(&self) -> Self::C;
    fn is_zero(&self, c: &Self::C) -> bool;
    fn add(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn neg(&self, a: &Self::C) -> Self::C;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    /// Move coefficient `c` from the right of `word` to its left.
    fn cross(&self, c: &Self::C, word: &[Gen]) -> Self::C;
}

/// A backend that also knows the defining relations' scalar values.
pub trait AlgebraCtx: CoeffOps {
    fn nstrands(&self) -> usize;
    /// The value of `[ij]²` in context: the scalar it reduces to when the
    /// square appears after the prefix word (whose twist is applied).
    fn bracket_square(&self, i: u8, j: u8, prefix: &[Gen]) -> Self::C;
}

/// An element Σ c_w · w of the free algebra over the backend's scalars.
#[derive(Clone, PartialEq, Debug)]
pub struct Elem<C> {
    pub terms: BTreeMap<Word, C>,
}

impl<C: Clone + PartialEq> Default for Elem<C> {
    fn default() -> Self {
        Elem {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Clone + PartialEq> Elem<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn insert<B: CoeffOps<C = C>>(&mut self, ctx: &B, w: Word, c: C) {
        if ctx.is_zero(&c) {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = ctx.add(o.get(), &c);
                if ctx.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn one<B: CoeffOps<C = C>>(ctx: &B) -> Self {
        let mut e = Self::zero();
        e.insert(ctx, Word::one(), ctx.one());
        e
    }

    /// The element sign·[gen] for a possibly unnormalized index pair.
    pub fn bracket<B: CoeffOps<C = C>>(ctx: &B, i: usize, j: usize) -> Self {
        let (s, g) = bracket(i, j);
        let mut e = Self::zero();
        let c = if s < 0 {
            ctx.neg(&ctx.one())
        } else {
            ctx.one()
        };
        e.insert(ctx, Word::single(g), c);
        e
    }

    pub fn add<B: CoeffOps<C = C>>(&self, ctx: &B, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.insert(ctx, w.clone(), c.clone());
        }
        out
    }

    pub fn neg<B: CoeffOps<C = C>>(&self, ctx: &B) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.terms.insert(w.clone(), ctx.neg(c));
        }
        out
    }

    pub fn sub<B: CoeffOps<C = C>>(&self, ctx: &B, o: &Self) -> Self {
        self.add(ctx, &o.neg(ctx))
    }

    /// Left scalar multiple c·self (no crossing: the scalar stays leftmost).
    pub fn scale<B: CoeffOps<C = C>>(&self, ctx: &B, c: &C) -> Self {
        let mut out = Self::zero();
        for (w, k) in &self.terms {
            out.insert(ctx, w.clone(), ctx.mul(c, k));
        }
        out
    }

    /// Product in the twisted algebra: coefficients of the right factor are
    /// crossed through the left factor's words.
    pub fn mul<B: CoeffOps<C = C>>(&self, ctx: &B, o: &Self) -> Self {
        let mut out = Self::zero();
        for (u, c) in &self.terms {
            for (v, d) in &o.terms {
                let mut w = u.0.clone();
                w.extend_from_slice(&v.0);
                let crossed = ctx.cross(d, &u.0);
                out.insert(ctx, Word(w), ctx.mul(c, &crossed));
            }
        }
        out
    }

    pub fn render_with<F: Fn(&C) -> String>(&self, f: F) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (idx, (w, c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                s.push_str(" + ");
            }
            let _ = write!(s, "({})·{}", f(c), w.render());
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

/// Numeric backend: coefficients are complex numbers obtained by evaluating
/// everything at a fixed point; `[ij]²` values are evaluated at the
/// prefix-permuted point.
///
/// The twist on plain numbers is the identity, so elements built through
/// this backend must only multiply factors whose right-hand coefficients are
/// position independent (constants); every construction in this crate
/// satisfies that, with function-valued coefficients entering only as
/// leftmost scalars or through `bracket_square`.
pub struct NumericAlgebra<'a> {
    pub fam: &'a FamilyParams,
    pub point: Vec<C64>,
}

impl<'a> NumericAlgebra<'a> {
    pub fn new(fam: &'a FamilyParams, point: Vec<C64>) -> Self {
        assert_eq!(fam.lambda.len(), point.len());
        NumericAlgebra { fam, point }
    }
}

impl<'a> CoeffOps for NumericAlgebra<'a> {
    type C = C64;
    fn zero(&self) -> C64 {
        C64::zero()
    }
    fn one(&self) -> C64 {
        C64::new(1.0, 0.0)
    }
    fn is_zero(&self, c: &C64) -> bool {
        c.norm() == 0.0
    }
    fn add(&self, a: &C64, b: &C64) -> C64 {
        a + b
    }
    fn neg(&self, a: &C64) -> C64 {
        -a
    }
    fn mul(&self, a: &C64, b: &C64) -> C64 {
        a * b
    }
    fn cross(&self, c: &C64, _word: &[Gen]) -> C64 {
        *c
    }
}

impl<'a> AlgebraCtx for NumericAlgebra<'a> {
    fn nstrands(&self) -> usize {
        self.point.len()
    }
    fn bracket_square(&self, i: u8, j: u8, prefix: &[Gen]) -> C64 {
        let p = permute_point(&self.point, prefix);
        let z = p[i as usize] - p[j as usize];
        // Backend invariant: sampling keeps points off the singular loci, so
        // an evaluation error here is a programming error, not a data error.
        self.fam
            .bracket_square(i as usize, j as usize, z)
            .expect("pole-safe sample point")
    }
}

/// Exact multiparameter backend: `[ij]² = p_ij`, central rational constants.
pub struct MultiparamAlgebra {
    pub n: usize,
    /// p_{ij} for i < j (symmetric).
    pub p: BTreeMap<(u8, u8), Q>,
}

impl MultiparamAlgebra {
    pub fn new(n: usize, p: BTreeMap<(u8, u8), Q>) -> Self {
        MultiparamAlgebra { n, p }
    }

    /// Generic random parameters from small rationals.
    pub fn generic(n: usize, seed: u64) -> Self {
        let mut rng = crate::rng::Rng::new(seed);
        let mut p = BTreeMap::new();
        for i in 0..n as u8 {
            for j in (i + 1)..n as u8 {
                let (a, b) = rng.small_rational();
                // Keep magnitudes modest: reduce mod small range.
                let a = (a % 97).max(-96);
                let b = (b % 13).abs().max(1);
                let v = crate::poly::q(if a == 0 { 1 } else { a }, b);
                p.insert((i, j), v);
            }
        }
        MultiparamAlgebra { n, p }
    }

    /// Parameters of the κ/Λ² form realized by the degeneration.
    pub fn from_kappa_lambda(kappa: &Q, lam: &[Q]) -> Self {
        let n = lam.len();
        let mut p = BTreeMap::new();
        for i in 0..n as u8 {
            for j in (i + 1)..n as u8 {
                let d = &lam[i as usize] - &lam[j as usize];
                p.insert((i, j), kappa / (&d * &d));
            }
        }
        MultiparamAlgebra { n, p }
    }

    pub fn p_of(&self, i: u8, j: u8) -> Q {
        let key = if i < j { (i, j) } else { (j, i) };
        // Absent entries are zero: an empty map is the ψ = 0 algebra.
        self.p.get(&key).cloned().unwrap_or_else(Q::zero)
    }
}

impl CoeffOps for MultiparamAlgebra {
    type C = Q;
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::from_integer(1.into())
    }
    fn is_zero(&self, c: &Q) -> bool {
        c.is_zero()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn neg(&self, a: &Q) -> Q {
        -a
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn cross(&self, c: &Q, _word: &[Gen]) -> Q {
        c.clone()
    }
}

impl AlgebraCtx for MultiparamAlgebra {
    fn nstrands(&self) -> usize {
        self.n
    }
    fn bracket_square(&self, i: u8, j: u8, _prefix: &[Gen]) -> Q {
        self.p_of(i, j)
    }
}

/// Exact equivariant backend: coefficients are polynomials in x₁…x_n over ℚ,
/// the twist permutes variables, and `[ij]² = 0`.
pub struct XPolyAlgebra {
    pub n: usize,
}

impl CoeffOps for XPolyAlgebra {
    type C = MPoly;
    fn zero(&self) -> MPoly {
        MPoly::zero(self.n)
    }
    fn one(&self) -> MPoly {
        MPoly::one(self.n)
    }
    fn is_zero(&self, c: &MPoly) -> bool {
        c.is_zero()
    }
    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.add(b)
    }
    fn neg(&self, a: &MPoly) -> MPoly {
        a.neg()
    }
    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.mul(b)
    }
    fn cross(&self, c: &MPoly, word: &[Gen]) -> MPoly {
        cross_poly(c, word)
    }
}

impl AlgebraCtx for XPolyAlgebra {
    fn nstrands(&self) -> usize {
        self.n
    }
    fn bracket_square(&self, _i: u8, _j: u8, _prefix: &[Gen]) -> MPoly {
        MPoly::zero(self.n)
    }
}

// ---------------------------------------------------------------------------
// Reduction
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
enum Redex {
    Square,
    Swap,
    /// [jk][ik] → [ij][jk] − [ik][ij]
    HeadSharedRight,
    /// [jk][ij] → [ik][jk] + [ij][ik]
    HeadChained,
    /// [ik][ij][ik] → −[ij][ik][ij] + (ψ̂_ij^{s_jk} − ψ̂_ik)·[jk]
    CubicBab,
}

fn redex_at(w: &[Gen], t: usize) -> Option<Redex> {
    let g1 = w[t];
    let g2 = w[t + 1];
    if g1 == g2 {
        return Some(Redex::Square);
    }
    if g1.disjoint(&g2) {
        if g2 < g1 {
            return Some(Redex::Swap);
        }
        return None;
    }
    if g1.j == g2.j && g2.i < g1.i {
        return Some(Redex::HeadSharedRight);
    }
    if g1.i == g2.j {
        return Some(Redex::HeadChained);
    }
    // Cubic pattern [ik][ij][ik] (same first index, repeat of the larger).
    if t + 2 < w.len() && g1.i == g2.i && g2.j < g1.j && w[t + 2] == g1 {
        return Some(Redex::CubicBab);
    }
    None
}

/// Fully head-reduce an element. Terminates because every rewrite replaces a
/// word by strictly smaller words (length-then-lex), and rewrites are sound
/// modulo the defining relations.
pub fn reduce<B: AlgebraCtx>(ctx: &B, elem: &Elem<B::C>) -> Elem<B::C> {
    let mut work = elem.clone();
    loop {
        // Pick the largest word containing a redex.
        let mut found: Option<(Word, usize, Redex)> = None;
        for (w, _) in work.terms.iter().rev() {
            let mut hit = None;
            for t in 0..w.0.len().saturating_sub(1) {
                if let Some(r) = redex_at(&w.0, t) {
                    hit = Some((t, r));
                    break;
                }
            }
            if let Some((t, r)) = hit {
                found = Some((w.clone(), t, r));
                break;
            }
        }
        let Some((w, t, r)) = found else {
            return work;
        };
        let c = work.terms.remove(&w).expect("term present");
        let span = match r {
            Redex::CubicBab => 3,
            _ => 2,
        };
        let prefix = &w.0[..t];
        let suffix = &w.0[t + span..];
        let g1 = w.0[t];
        let g2 = w.0[t + 1];
        let mut emit = |mid: &[Gen], coeff: B::C| {
            let mut nw = Vec::with_capacity(w.0.len());
            nw.extend_from_slice(prefix);
            nw.extend_from_slice(mid);
            nw.extend_from_slice(suffix);
            work.insert(ctx, Word(nw), coeff);
        };
        match r {
            Redex::Square => {
                let val = ctx.bracket_square(g1.i, g1.j, prefix);
                let coeff = ctx.mul(&c, &val);
                emit(&[], coeff);
            }
            Redex::Swap => {
                emit(&[g2, g1], c);
            }
            Redex::HeadSharedRight => {
                // g1 = [jk], g2 = [ik] with i<j<k.
                let (i, j, k) = (g2.i, g1.i, g1.j);
                let a = Gen { i, j };
                let b = Gen { i, j: k };
                let cc = Gen { i: j, j: k };
                emit(&[a, cc], c.clone());
                emit(&[b, a], ctx.neg(&c));
            }
            Redex::HeadChained => {
                // g1 = [jk], g2 = [ij] with i<j<k.
                let (i, j, k) = (g2.i, g2.j, g1.j);
                let a = Gen { i, j };
                let b = Gen { i, j: k };
                let cc = Gen { i: j, j: k };
                emit(&[b, cc], c.clone());
                emit(&[a, b], c);
            }
            Redex::CubicBab => {
                // g1 = [ik], g2 = [ij] with i<j<k.
                let (i, j, k) = (g2.i, g2.j, g1.j);
                let a = Gen { i, j };
                let b = Gen { i, j: k };
                let cc = Gen { i: j, j: k };
                emit(&[a, b, a], ctx.neg(&c));
                // ψ̂_ij evaluated through prefix·s_jk, minus ψ̂_ik through
                // the prefix alone.
                let mut pref_c: Vec<Gen> = prefix.to_vec();
                pref_c.push(cc);
                let v1 = ctx.bracket_square(i, j, &pref_c);
                let v2 = ctx.bracket_square(i, k, prefix);
                let coeff = ctx.mul(&c, &ctx.add(&v1, &ctx.neg(&v2)));
                emit(&[cc], coeff);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Ideal elements and membership
// ---------------------------------------------------------------------------

/// The defining relation elements for n strands, as (description, element)
/// pairs built in a given backend. These are exactly the elements whose
/// two-sided span (with word cofactors) is the defining ideal in each degree.
pub fn relation_elements<B: AlgebraCtx>(ctx: &B) -> Vec<(String, Elem<B::C>)> {
    let n = ctx.nstrands() as u8;
    let mut out = Vec::new();
    // Squares [ij]² − ψ̂_ij: represented with the empty-prefix value; the
    // membership basis re-evaluates per prefix below (see `ideal_columns`).
    for i in 0..n {
        for j in (i + 1)..n {
            let g = Gen { i, j };
            let mut e = Elem::zero();
            e.insert(ctx, Word(alloc::vec![g, g]), ctx.one());
            e.insert(ctx, Word::one(), ctx.neg(&ctx.bracket_square(i, j, &[])));
            out.push((alloc::format!("square[{}{}]", i + 1, j + 1), e));
        }
    }
    // Disjoint commutators.
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                for l in (k + 1)..n {
                    let g1 = Gen { i, j };
                    let g2 = Gen { i: k, j: l };
                    if g1 < g2 && g1.disjoint(&g2) {
                        let mut e = Elem::zero();
                        e.insert(ctx, Word(alloc::vec![g1, g2]), ctx.one());
                        e.insert(ctx, Word(alloc::vec![g2, g1]), ctx.neg(&ctx.one()));
                        out.push((
                            alloc::format!(
                                "commute[{}{}][{}{}]",
                                i + 1,
                                j + 1,
                                k + 1,
                                l + 1
                            ),
                            e,
                        ));
                    }
                }
            }
        }
    }
    // Three-term relations, both normalized images, for each i<j<k.
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let a = Gen { i, j };
                let b = Gen { i, j: k };
                let cc = Gen { i: j, j: k };
                let mut r1 = Elem::zero();
                r1.insert(ctx, Word(alloc::vec![a, cc]), ctx.one());
                r1.insert(ctx, Word(alloc::vec![cc, b]), ctx.neg(&ctx.one()));
                r1.insert(ctx, Word(alloc::vec![b, a]), ctx.neg(&ctx.one()));
                out.push((alloc::format!("cyclic1[{}{}{}]", i + 1, j + 1, k + 1), r1));
                let mut r2 = Elem::zero();
                r2.insert(ctx, Word(alloc::vec![cc, a]), ctx.one());
                r2.insert(ctx, Word(alloc::vec![b, cc]), ctx.neg(&ctx.one()));
                r2.insert(ctx, Word(alloc::vec![a, b]), ctx.neg(&ctx.one()));
                out.push((alloc::format!("cyclic2[{}{}{}]", i + 1, j + 1, k + 1), r2));
                // Derived cubic consequence (critical pair of [jk][ij][ij]).
                let mut r3 = Elem::zero();
                r3.insert(ctx, Word(alloc::vec![b, a, b]), ctx.one());
                r3.insert(ctx, Word(alloc::vec![a, b, a]), ctx.one());
                let v1 = ctx.bracket_square(i, j, &[cc]);
                let v2 = ctx.bracket_square(i, k, &[]);
                r3.insert(
                    ctx,
                    Word(alloc::vec![cc]),
                    ctx.neg(&ctx.add(&v1, &ctx.neg(&v2))),
                );
                out.push((alloc::format!("cubic[{}{}{}]", i + 1, j + 1, k + 1), r3));
            }
        }
    }
    out
}

fn all_gens(n: usize) -> Vec<Gen> {
    let mut gens = Vec::new();
    for i in 0..n as u8 {
        for j in (i + 1)..n as u8 {
            gens.push(Gen { i, j });
        }
    }
    gens
}

fn words_up_to(gens: &[Gen], max_len: usize) -> Vec<Vec<Gen>> {
    let mut out = alloc::vec![Vec::new()];
    let mut layer: Vec<Vec<Gen>> = alloc::vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in gens {
                let mut nw = w.clone();
                nw.push(*g);
                next.push(nw);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Degree-bounded spanning set of the defining ideal: u·r·v over relations r
/// and cofactor words u, v with |u| + deg(r) + |v| ≤ degree_bound. Numeric
/// square relations get their scalar re-evaluated through the prefix u.
pub fn ideal_columns<B: AlgebraCtx>(
    ctx: &B,
    degree_bound: usize,
    max_columns: usize,
) -> Option<Vec<Elem<B::C>>> {
    let n = ctx.nstrands() as u8;
    let gens = all_gens(ctx.nstrands());
    let mut cols: Vec<Elem<B::C>> = Vec::new();

    // Three kinds of relation "templates" applied under cofactors: for the
    // square relation the scalar must be evaluated through the prefix, so
    // build u·r·v directly rather than multiplying fixed elements.
    let rel_len = 2usize;
    if degree_bound < rel_len {
        return Some(cols);
    }
    let cof = degree_bound - rel_len;
    let us = words_up_to(&gens, cof);
    for u in &us {
        let rem = cof - u.len();
        let vs = words_up_to(&gens, rem);
        for v in &vs {
            // squares
            for i in 0..n {
                for j in (i + 1)..n {
                    let g = Gen { i, j };
                    let mut e = Elem::zero();
                    let mut w = u.clone();
                    w.push(g);
                    w.push(g);
                    w.extend_from_slice(v);
                    e.insert(ctx, Word(w), ctx.one());
                    let mut w0 = u.clone();
                    w0.extend_from_slice(v);
                    let val = ctx.bracket_square(i, j, u);
                    e.insert(ctx, Word(w0), ctx.neg(&val));
                    cols.push(e);
                    if cols.len() > max_columns {
                        return None;
                    }
                }
            }
            // commutators and three-term relations have constant
            // coefficients: build r then sandwich as words directly.
            let push_const_rel = |words: &[(&[Gen], i64)], cols: &mut Vec<Elem<B::C>>| {
                let mut e = Elem::zero();
                for (mid, s) in words {
                    let mut w = u.clone();
                    w.extend_from_slice(mid);
                    w.extend_from_slice(v);
                    let c = if *s < 0 {
                        ctx.neg(&ctx.one())
                    } else {
                        ctx.one()
                    };
                    e.insert(ctx, Word(w), c);
                }
                cols.push(e);
            };
            for first in 0..gens.len() {
                for second in 0..gens.len() {
                    let g1 = gens[first];
                    let g2 = gens[second];
                    if g1 < g2 && g1.disjoint(&g2) {
                        push_const_rel(
                            &[(&[g1, g2], 1), (&[g2, g1], -1)],
                            &mut cols,
                        );
                        if cols.len() > max_columns {
                            return None;
                        }
                    }
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        let a = Gen { i, j };
                        let b = Gen { i, j: k };
                        let cc = Gen { i: j, j: k };
                        push_const_rel(
                            &[(&[a, cc], 1), (&[cc, b], -1), (&[b, a], -1)],
                            &mut cols,
                        );
                        push_const_rel(
                            &[(&[cc, a], 1), (&[b, cc], -1), (&[a, b], -1)],
                            &mut cols,
                        );
                        if cols.len() > max_columns {
                            return None;
                        }
                    }
                }
            }
        }
    }
    Some(cols)
}

/// Outcome of a membership check.
#[derive(Clone, Debug)]
pub struct Membership {
    /// True when reduction alone certified the zero (exact certificate).
    pub certified_by_reduction: bool,
    /// True when the element is judged a member.
    pub member: bool,
    /// Residual for numeric verdicts (None for exact).
    pub residual: Option<f64>,
    /// Terms remaining after reduction.
    pub remainder_terms: usize,
    /// "reduction", "reduction+span", "reduction+lstsq", or
    /// "reduction-only (basis too large)".
    pub method: &'static str,
}

/// Numeric residual of an element: ℓ₂ norm of coefficients over
/// max(1, scale).
pub fn numeric_residual(e: &Elem<C64>, scale: f64) -> f64 {
    let s: f64 = e.terms.values().map(|c| c.norm_sqr()).sum();
    s.sqrt() / scale.max(1.0)
}

fn numeric_scale(e: &Elem<C64>) -> f64 {
    e.terms
        .values()
        .map(|c| c.norm())
        .fold(0.0f64, |a, b| a.max(b))
}

/// Reduce every raw ideal column to normal form and keep the nonzero ones.
/// Reduction is sound, so each survivor is still an ideal element; these
/// "defect" columns span exactly what greedy reduction cannot see, and they
/// are sparse because most columns cancel to zero on their own.
fn defect_columns<B: AlgebraCtx>(
    ctx: &B,
    degree_bound: usize,
    max_columns: usize,
) -> Option<Vec<Elem<B::C>>> {
    let cols = ideal_columns(ctx, degree_bound, max_columns)?;
    let mut out = Vec::new();
    for c in cols {
        let r = reduce(ctx, &c);
        if !r.is_zero() {
            out.push(r);
        }
    }
    Some(out)
}

/// Decide membership of `target` in the defining ideal, numerically at the
/// backend's point. `tol` is the pass tolerance; the least-squares fallback
/// over defect columns runs when reduction leaves a remainder above it.
pub fn membership_numeric(
    ctx: &NumericAlgebra<'_>,
    target: &Elem<C64>,
    degree_bound: usize,
    tol: f64,
    max_columns: usize,
) -> Membership {
    let scale = numeric_scale(target);
    let red = reduce(ctx, target);
    let res0 = numeric_residual(&red, scale);
    if res0 <= tol {
        return Membership {
            certified_by_reduction: red.is_zero(),
            member: true,
            residual: Some(res0),
            remainder_terms: red.num_terms(),
            method: "reduction",
        };
    }
    let Some(cols) = defect_columns(ctx, degree_bound, max_columns) else {
        return Membership {
            certified_by_reduction: false,
            member: false,
            residual: Some(res0),
            remainder_terms: red.num_terms(),
            method: "reduction-only (basis too large)",
        };
    };
    if cols.is_empty() {
        // No defects at this bound: the remainder is not spanned.
        return Membership {
            certified_by_reduction: false,
            member: false,
            residual: Some(res0),
            remainder_terms: red.num_terms(),
            method: "reduction+lstsq",
        };
    }
    // Union of words as coordinates.
    let mut words: alloc::collections::BTreeSet<Word> = red.terms.keys().cloned().collect();
    for c in &cols {
        words.extend(c.terms.keys().cloned());
    }
    let words: Vec<Word> = words.into_iter().collect();
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let vecs: Vec<Vec<C64>> = cols
        .iter()
        .map(|c| {
            let mut v = alloc::vec![C64::zero(); words.len()];
            for (w, coeff) in &c.terms {
                v[index[w]] = *coeff;
            }
            v
        })
        .collect();
    let mut t = alloc::vec![C64::zero(); words.len()];
    for (w, coeff) in &red.terms {
        t[index[w]] = *coeff;
    }
    let (_, resid) = crate::linalg::lstsq_residual(&vecs, &t);
    let res = resid / scale.max(1.0);
    Membership {
        certified_by_reduction: false,
        member: res <= tol,
        residual: Some(res),
        remainder_terms: red.num_terms(),
        method: "reduction+lstsq",
    }
}

/// Decide membership exactly for a rational-coefficient backend. Reduction
/// zero is a full certificate. Otherwise the remainder is tested against the
/// reduced defect columns by exact elimination: a solution is a decisive
/// membership certificate (defect columns are ideal elements); failure means
/// the element is not certified at this degree bound.
pub fn membership_exact<B>(
    ctx: &B,
    target: &Elem<Q>,
    degree_bound: usize,
    max_columns: usize,
) -> Membership
where
    B: AlgebraCtx<C = Q>,
{
    let red = reduce(ctx, target);
    if red.is_zero() {
        return Membership {
            certified_by_reduction: true,
            member: true,
            residual: None,
            remainder_terms: 0,
            method: "reduction",
        };
    }
    let Some(cols) = defect_columns(ctx, degree_bound, max_columns) else {
        return Membership {
            certified_by_reduction: false,
            member: false,
            residual: None,
            remainder_terms: red.num_terms(),
            method: "reduction-only (basis too large)",
        };
    };
    let mut words: alloc::collections::BTreeSet<Word> = red.terms.keys().cloned().collect();
    for c in &cols {
        words.extend(c.terms.keys().cloned());
    }
    let words: Vec<Word> = words.into_iter().collect();
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let vecs: Vec<Vec<Q>> = cols
        .iter()
        .map(|c| {
            let mut v = alloc::vec![Q::zero(); words.len()];
            for (w, coeff) in &c.terms {
                v[index[w]] = coeff.clone();
            }
            v
        })
        .collect();
    let mut t = alloc::vec![Q::zero(); words.len()];
    for (w, coeff) in &red.terms {
        t[index[w]] = coeff.clone();
    }
    let member = crate::linalg::q_in_span(&vecs, &t).is_some();
    Membership {
        certified_by_reduction: false,
        member,
        residual: None,
        remainder_terms: red.num_terms(),
        method: "reduction+span",
    }
}

// ---------------------------------------------------------------------------
// Group-algebra cross oracle (multiparameter κ/Λ² subfamily)
// ---------------------------------------------------------------------------

/// Image of a multiparameter element under the symmetric-group-algebra
/// representation `[ij] ↦ −(μ/Λ_ij)·s_ij` (valid when p_ij = μ²/Λ_ij²),
/// as a map permutation → coefficient. A zero image is a necessary
/// condition for ideal membership, giving an independent oracle.
pub fn group_algebra_image(
    elem: &Elem<Q>,
    mu: &Q,
    lam: &[Q],
) -> BTreeMap<Vec<u8>, Q> {
    let n = lam.len();
    let mut out: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
    for (w, c) in &elem.terms {
        // Image of the word: product over generators of −(μ/Λ_ij) s_ij.
        let mut coeff = c.clone();
        let mut perm: Vec<u8> = (0..n as u8).collect();
        for g in &w.0 {
            let d = &lam[g.i as usize] - &lam[g.j as usize];
            coeff = -coeff * mu / d;
            // Right-multiply the permutation by s_ij: π ↦ π ∘ s_ij.
            perm.swap(g.i as usize, g.j as usize);
        }
        let e = out.entry(perm).or_insert_with(Q::zero);
        *e += coeff;
        if e.is_zero() {
            let key: Vec<u8> = {
                let mut p: Vec<u8> = (0..n as u8).collect();
                for g in &w.0 {
                    p.swap(g.i as usize, g.j as usize);
                }
                p
            };
            out.remove(&key);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qi};
    use crate::rng::Rng;
    use crate::scalars::{FamilyKind, FamilyParams};

    fn num_ctx(fam: &FamilyParams, seed: u64) -> NumericAlgebra<'_> {
        let plan = crate::rng::SamplePlan::new(seed);
        let pts = plan
            .draw_points(fam.lambda.len(), |p| fam.pole_distance(p))
            .unwrap();
        NumericAlgebra::new(fam, pts[0].clone())
    }

    #[test]
    fn bracket_normalization() {
        let ctx = MultiparamAlgebra::generic(3, 1);
        let e = Elem::bracket(&ctx, 2, 0);
        let (w, c) = e.terms.iter().next().unwrap();
        assert_eq!(w.0[0], Gen { i: 0, j: 2 });
        assert_eq!(*c, qi(-1));
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let g = |i, j| Gen { i, j };
        let w1 = Word(alloc::vec![g(0, 1)]);
        let w2 = Word(alloc::vec![g(0, 1), g(0, 1)]);
        let w3 = Word(alloc::vec![g(0, 2), g(0, 1)]);
        assert!(w1 < w2);
        assert!(w2 < w3);
    }

    #[test]
    fn crossing_contravariance() {
        // x₁ crossed left through [12][23] must become x₂ (1-indexed):
        // in 0-indexed terms, x₀ through [01][12] → x₁.
        let f = MPoly::var(3, 0);
        let word = [Gen { i: 0, j: 1 }, Gen { i: 1, j: 2 }];
        let crossed = cross_poly(&f, &word);
        assert_eq!(crossed, MPoly::var(3, 1));
        // Consistency with point permutation at random points.
        let mut rng = Rng::new(8);
        for _ in 0..10 {
            let pt: Vec<C64> = (0..3).map(|_| rng.complex_in((-1.0, 1.0), (-1.0, 1.0))).collect();
            let lhs = crossed.eval_c(&pt);
            let rhs = f.eval_c(&permute_point(&pt, &word));
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn mul_crosses_coefficients() {
        // ([01]·1)·(x₀·1) = (x₁)·[01] in the equivariant backend.
        let ctx = XPolyAlgebra { n: 2 };
        let b = Elem::bracket(&ctx, 0, 1);
        let mut xc = Elem::zero();
        xc.insert(&ctx, Word::one(), MPoly::var(2, 0));
        let prod = b.mul(&ctx, &xc);
        let (w, c) = prod.terms.iter().next().unwrap();
        assert_eq!(w.0.len(), 1);
        assert_eq!(*c, MPoly::var(2, 1));
    }

    #[test]
    fn defining_relations_reduce_to_zero_exact() {
        let ctx = MultiparamAlgebra::generic(4, 5);
        for (name, r) in relation_elements(&ctx) {
            let red = reduce(&ctx, &r);
            assert!(red.is_zero(), "{name} did not reduce to zero: {red:?}");
        }
        let ctx2 = XPolyAlgebra { n: 4 };
        for (name, r) in relation_elements(&ctx2) {
            let red = reduce(&ctx2, &r);
            assert!(red.is_zero(), "{name} did not reduce to zero");
        }
    }

    #[test]
    fn defining_relations_reduce_to_zero_numeric() {
        for kind in [FamilyKind::Rational, FamilyKind::Trigonometric, FamilyKind::Elliptic] {
            let fam = FamilyParams::generic(kind, 4, 9);
            let ctx = num_ctx(&fam, 33);
            for (name, r) in relation_elements(&ctx) {
                let red = reduce(&ctx, &r);
                let res = numeric_residual(&red, numeric_scale(&r));
                assert!(res < 1e-10, "{name} ({kind:?}): residual {res}");
            }
        }
    }

    #[test]
    fn random_ideal_elements_are_certified() {
        // Build random Σ c·u·r·v and certify membership exactly. Greedy
        // reduction alone is not confluent for four strands, so the span
        // fallback over defect columns must close the gap.
        let ctx = MultiparamAlgebra::generic(4, 7);
        let rels = relation_elements(&ctx);
        let gens = all_gens(4);
        let mut rng = Rng::new(1234);
        let mut used_fallback = false;
        for trial in 0..12 {
            let mut acc: Elem<Q> = Elem::zero();
            let mut deg = 0usize;
            for _ in 0..3 {
                let r = &rels[rng.below(rels.len() as u64) as usize].1;
                let rdeg = r.terms.keys().map(|w| w.0.len()).max().unwrap();
                let lu = rng.below(2) as usize;
                let lv = rng.below(2) as usize;
                deg = deg.max(lu + rdeg + lv);
                let mut u = Elem::one(&ctx);
                for _ in 0..lu {
                    let g = gens[rng.below(gens.len() as u64) as usize];
                    let mut e = Elem::zero();
                    e.insert(&ctx, Word::single(g), ctx.one());
                    u = u.mul(&ctx, &e);
                }
                let mut v = Elem::one(&ctx);
                for _ in 0..lv {
                    let g = gens[rng.below(gens.len() as u64) as usize];
                    let mut e = Elem::zero();
                    e.insert(&ctx, Word::single(g), ctx.one());
                    v = v.mul(&ctx, &e);
                }
                let (a, b) = rng.small_rational();
                let coef = q(a.clamp(-20, 20).max(1), b.clamp(1, 9));
                acc = acc.add(&ctx, &u.mul(&ctx, r).mul(&ctx, &v).scale(&ctx, &coef));
            }
            let m = membership_exact(&ctx, &acc, deg, 200_000);
            assert!(m.member, "trial {trial}: ideal element not certified ({m:?})");
            used_fallback |= !m.certified_by_reduction;
        }
        // The sampled trials must include at least one genuine fallback case,
        // otherwise this test is not exercising the span path.
        assert!(used_fallback, "no trial exercised the span fallback");
    }

    #[test]
    fn random_ideal_elements_certified_numeric() {
        // Numeric ideal elements must be assembled with prefix-aware square
        // scalars (a bare left-multiplication in this backend would not
        // twist the function value); `ideal_columns` builds them correctly.
        let fam = FamilyParams::generic(FamilyKind::Elliptic, 4, 11);
        let ctx = num_ctx(&fam, 55);
        let cols = ideal_columns(&ctx, 4, 200_000).unwrap();
        let mut rng = Rng::new(99);
        for _ in 0..6 {
            let mut acc: Elem<C64> = Elem::zero();
            for _ in 0..3 {
                let c = &cols[rng.below(cols.len() as u64) as usize];
                let coef = rng.complex_in((-2.0, 2.0), (-2.0, 2.0));
                acc = acc.add(&ctx, &c.scale(&ctx, &coef));
            }
            if acc.is_zero() {
                continue;
            }
            let m = membership_numeric(&ctx, &acc, 4, 1e-8, 200_000);
            assert!(m.member, "numeric ideal element rejected: {m:?}");
        }
    }

    #[test]
    fn non_member_is_rejected() {
        let ctx = MultiparamAlgebra::generic(3, 13);
        // A bare generator is not in the ideal (degree-1, ideal starts at
        // degree 2 with scalar drops to degree 0; a single [12] cannot be
        // reached).
        let e = Elem::bracket(&ctx, 0, 1);
        let m = membership_exact(&ctx, &e, 3, 50_000);
        assert!(!m.member);
        assert!(!m.certified_by_reduction);
        // Numeric variant.
        let fam = FamilyParams::generic(FamilyKind::Rational, 3, 17);
        let nctx = num_ctx(&fam, 77);
        let en = Elem::bracket(&nctx, 0, 1);
        let mn = membership_numeric(&nctx, &en, 3, 1e-9, 50_000);
        assert!(!mn.member);
        assert!(mn.residual.unwrap() > 1e-6 * 1e3);
    }

    #[test]
    fn membership_span_fallback_detects_shuffled_member() {
        // A genuine ideal element passes, and the same element perturbed by
        // a non-member word is decisively rejected by the exact span check.
        let ctx = MultiparamAlgebra::generic(3, 23);
        let gens = all_gens(3);
        let rels = relation_elements(&ctx);
        let r = &rels[0].1; // square relation
        let mut left = Elem::zero();
        left.insert(&ctx, Word::single(gens[1]), ctx.one());
        let member = left.mul(&ctx, r);
        let m = membership_exact(&ctx, &member, 3, 50_000);
        assert!(m.member);
        // Perturb by a non-member word.
        let spoiled = member.add(&ctx, &Elem::bracket(&ctx, 0, 2));
        let m2 = membership_exact(&ctx, &spoiled, 3, 50_000);
        assert!(!m2.member);
    }

    #[test]
    fn group_algebra_oracle_constraints() {
        // p_ij = μ²/Λ_ij²: squares and cyclic relations map to zero.
        let mu = q(3, 2);
        let lam = alloc::vec![qi(1), q(-1, 2), qi(3), q(5, 3)];
        let ctx = MultiparamAlgebra::from_kappa_lambda(&(&mu * &mu), &lam);
        for (name, r) in relation_elements(&ctx) {
            let img = group_algebra_image(&r, &mu, &lam);
            assert!(img.is_empty(), "{name} image nonzero: {img:?}");
        }
        // And a random ideal combination maps to zero.
        let gens = all_gens(4);
        let rels = relation_elements(&ctx);
        let mut rng = Rng::new(3);
        let mut acc: Elem<Q> = Elem::zero();
        for _ in 0..4 {
            let r = &rels[rng.below(rels.len() as u64) as usize].1;
            let g = gens[rng.below(gens.len() as u64) as usize];
            let mut left = Elem::zero();
            left.insert(&ctx, Word::single(g), ctx.one());
            acc = acc.add(&ctx, &left.mul(&ctx, r));
        }
        assert!(group_algebra_image(&acc, &mu, &lam).is_empty());
        // Negative: a bare generator does not map to zero.
        let e = Elem::bracket(&ctx, 0, 1);
        assert!(!group_algebra_image(&e, &mu, &lam).is_empty());
    }

    #[test]
    fn reduction_is_idempotent() {
        let ctx = MultiparamAlgebra::generic(4, 31);
        let gens = all_gens(4);
        let mut rng = Rng::new(8);
        for _ in 0..10 {
            let mut e: Elem<Q> = Elem::zero();
            for _ in 0..4 {
                let len = 1 + rng.below(3) as usize;
                let w: Vec<Gen> = (0..len)
                    .map(|_| gens[rng.below(gens.len() as u64) as usize])
                    .collect();
                let (a, b) = rng.small_rational();
                e.insert(&ctx, Word(w), q(a.clamp(-9, 9).max(1), b.clamp(1, 5)));
            }
            let r1 = reduce(&ctx, &e);
            let r2 = reduce(&ctx, &r1);
            assert_eq!(r1, r2);
        }
    }
}
