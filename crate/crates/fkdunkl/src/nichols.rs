//! Braided vector spaces on positive roots, the braided symmetrizer of the
//! associated Nichols algebra, certified ranks of its graded components,
//! and kernel membership of relation families.
//!
//! The braided vector space V has basis {v_β : β positive root} with
//! braiding Ψ(v_α ⊗ v_β) = v_{s_α(β)} ⊗ v_α, where a negative image is
//! normalized by v_{−γ} = −v_γ. The braided symmetrizer in degree d is
//! Sym_d = Σ_{w ∈ S_d} Ψ_w, with Ψ_w the positive braid lift of w along any
//! reduced word (well defined because the Ψ_i satisfy the braid relations,
//! which is itself property-tested here). The rank of Sym_d equals the
//! dimension of the degree-d component of the Nichols algebra.
//!
//! Ranks are certified exactly by a squeeze: the rank of Sym_d modulo a
//! prime is a lower bound for the rational rank, while kernel vectors
//! verified exactly in integer arithmetic give an upper bound; when
//! rank_p + dim_p(kernel span) equals dim V^⊗d, the rational rank is pinned
//! to rank_p with no probabilistic gap.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::roots::RootSystem;

/// Sparse tensor in V^{⊗d}: word of positive-root indices → integer
/// coefficient.
pub type Tensor = BTreeMap<Vec<u8>, i64>;

/// Modulus for the rank lower bound (prime; entries stay below 2⁶⁴ in
/// products since p² < 2⁴⁰).
pub const RANK_PRIME: u64 = 1_000_003;

/// Build a tensor from (word, coefficient) pairs.
pub fn tensor(parts: &[(&[u8], i64)]) -> Tensor {
    let mut t = Tensor::new();
    for (w, c) in parts {
        if *c != 0 {
            let e = t.entry(w.to_vec()).or_insert(0);
            *e += c;
            if *e == 0 {
                t.remove(&w.to_vec());
            }
        }
    }
    t
}

/// The braiding operator Ψ_k acting on tensor factors k, k+1 (0-based) of a
/// basis word: monomial, returning the signed image word.
pub fn psi_word(rs: &RootSystem, w: &[u8], k: usize) -> (i64, Vec<u8>) {
    let (sign, img) = rs.reflect_root(w[k] as usize, w[k + 1] as usize);
    let mut out = w.to_vec();
    out[k] = img as u8;
    out[k + 1] = w[k];
    (sign as i64, out)
}

/// Apply Ψ_k to a sparse tensor.
pub fn psi(rs: &RootSystem, t: &Tensor, k: usize) -> Tensor {
    let mut out = Tensor::new();
    for (w, c) in t {
        let (s, img) = psi_word(rs, w, k);
        let e = out.entry(img.clone()).or_insert(0);
        *e += s * c;
        if *e == 0 {
            out.remove(&img);
        }
    }
    out
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    fn rec(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(cur, k + 1, out);
            cur.swap(k, i);
        }
    }
    rec(&mut cur, 0, &mut out);
    out
}

/// A reduced word for the permutation (as adjacent transposition indices),
/// obtained by bubble-sorting the one-line notation; its length is the
/// inversion number.
pub fn reduced_word(perm: &[usize]) -> Vec<usize> {
    let mut p = perm.to_vec();
    let mut word = Vec::new();
    loop {
        let mut done = true;
        for i in 0..p.len().saturating_sub(1) {
            if p[i] > p[i + 1] {
                p.swap(i, i + 1);
                word.push(i);
                done = false;
            }
        }
        if done {
            break;
        }
    }
    word
}

/// Image of a single basis word under the positive braid lift of `perm`:
/// the composition Ψ_{i₁}∘…∘Ψ_{i_l} over the reduced word, applied
/// rightmost first. Monomial: returns a signed word.
fn lift_image(rs: &RootSystem, word: &[u8], rword: &[usize]) -> (i64, Vec<u8>) {
    let mut sign = 1i64;
    let mut w = word.to_vec();
    for &k in rword.iter().rev() {
        let (s, img) = psi_word(rs, &w, k);
        sign *= s;
        w = img;
    }
    (sign, w)
}

/// The full symmetrizer image of one basis word, as a sparse integer vector.
pub fn sym_image(rs: &RootSystem, word: &[u8], rwords: &[Vec<usize>]) -> Tensor {
    let mut out = Tensor::new();
    for rw in rwords {
        let (s, img) = lift_image(rs, word, rw);
        let e = out.entry(img.clone()).or_insert(0);
        *e += s;
        if *e == 0 {
            out.remove(&img);
        }
    }
    out
}

/// Reduced words for every element of S_d.
pub fn all_reduced_words(d: usize) -> Vec<Vec<usize>> {
    permutations(d).iter().map(|p| reduced_word(p)).collect()
}

/// Apply Sym_d to a sparse tensor exactly.
pub fn sym_apply(rs: &RootSystem, t: &Tensor, d: usize) -> Tensor {
    let rwords = all_reduced_words(d);
    let mut out = Tensor::new();
    for (w, c) in t {
        assert_eq!(w.len(), d, "tensor degree mismatch");
        for (img, s) in sym_image(rs, w, &rwords) {
            let e = out.entry(img.clone()).or_insert(0);
            *e += s * c;
            if *e == 0 {
                out.remove(&img);
            }
        }
    }
    out
}

fn encode(word: &[u8], r: usize) -> usize {
    let mut idx = 0usize;
    for &g in word {
        idx = idx * r + g as usize;
    }
    idx
}

fn decode(mut idx: usize, r: usize, d: usize) -> Vec<u8> {
    let mut w = alloc::vec![0u8; d];
    for t in (0..d).rev() {
        w[t] = (idx % r) as u8;
        idx /= r;
    }
    w
}

fn to_mod_p(c: i64, p: u64) -> u64 {
    let m = c.rem_euclid(p as i64);
    m as u64
}

/// Sparse row-echelon rank over GF(p). Vectors are sparse maps
/// index → value; each incoming vector is reduced against stored pivots.
pub struct EchelonModP {
    p: u64,
    /// pivot index → normalized row (leading value 1).
    rows: BTreeMap<usize, BTreeMap<usize, u64>>,
}

impl EchelonModP {
    pub fn new(p: u64) -> Self {
        EchelonModP {
            p,
            rows: BTreeMap::new(),
        }
    }

    fn inv_mod(&self, a: u64) -> u64 {
        // Fermat: p prime.
        let mut base = a % self.p;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    /// Insert a vector; returns true when it added a new pivot (was
    /// independent of the rows so far).
    pub fn insert(&mut self, mut v: BTreeMap<usize, u64>) -> bool {
        loop {
            v.retain(|_, val| *val % self.p != 0);
            let Some((&lead, &val)) = v.iter().next() else {
                return false;
            };
            match self.rows.get(&lead) {
                None => {
                    let inv = self.inv_mod(val);
                    let norm: BTreeMap<usize, u64> =
                        v.iter().map(|(i, x)| (*i, *x * inv % self.p)).collect();
                    self.rows.insert(lead, norm);
                    return true;
                }
                Some(row) => {
                    let factor = val % self.p;
                    for (i, x) in row {
                        let e = v.entry(*i).or_insert(0);
                        *e = (*e + self.p - factor * x % self.p) % self.p;
                    }
                    v.retain(|_, val| *val != 0);
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Certified rank of Sym_d for the root system, using the squeeze between
/// the mod-p rank and exactly verified kernel vectors. `kernel_gens` must be
/// tensors of degree d; each is checked to vanish under Sym_d exactly, and
/// the certificate succeeds when rank_p + dim_p span(kernel) = r^d.
pub fn sym_rank_certified(
    rs: &RootSystem,
    d: usize,
    kernel_gens: &[Tensor],
) -> Result<usize, String> {
    let r = rs.positive.len();
    if d == 0 {
        return Ok(1);
    }
    let n = r.pow(d as u32);
    let rwords = all_reduced_words(d);
    let p = RANK_PRIME;

    // Lower bound: rank of Sym_d mod p.
    let mut ech = EchelonModP::new(p);
    for idx in 0..n {
        let w = decode(idx, r, d);
        let img = sym_image(rs, &w, &rwords);
        let v: BTreeMap<usize, u64> = img
            .iter()
            .map(|(iw, c)| (encode(iw, r), to_mod_p(*c, p)))
            .filter(|(_, c)| *c != 0)
            .collect();
        ech.insert(v);
    }
    let rank_low = ech.rank();

    // Upper bound: exactly verified kernel vectors.
    let mut kech = EchelonModP::new(p);
    for (gi, g) in kernel_gens.iter().enumerate() {
        let img = sym_apply(rs, g, d);
        if !img.is_empty() {
            return Err(alloc::format!(
                "kernel generator {gi} does not vanish under Sym_{d} (residual {} terms)",
                img.len()
            ));
        }
        let v: BTreeMap<usize, u64> = g
            .iter()
            .map(|(iw, c)| (encode(iw, r), to_mod_p(*c, p)))
            .filter(|(_, c)| *c != 0)
            .collect();
        kech.insert(v);
    }
    let ker_low = kech.rank();

    if rank_low + ker_low == n {
        Ok(rank_low)
    } else {
        Err(alloc::format!(
            "rank not certified in degree {d}: lower bound {rank_low}, \
             kernel span {ker_low}, dimension {n} (gap {})",
            n - rank_low - ker_low
        ))
    }
}

/// Pad degree-g kernel generators to degree d by all basis words on both
/// sides: v ∈ ker(id ⊗ Sym_g ⊗ id) ⊆ ker Sym_d by the factorization of the
/// braided symmetrizer through minimal coset representatives (and every
/// padded vector is in any case re-verified exactly inside
/// [`sym_rank_certified`]).
pub fn pad_kernel(rs: &RootSystem, gens: &[Tensor], gen_degree: usize, d: usize) -> Vec<Tensor> {
    let r = rs.positive.len();
    let mut out = Vec::new();
    if gen_degree > d {
        return out;
    }
    let free = d - gen_degree;
    for left in 0..=free {
        let right = free - left;
        let nl = r.pow(left as u32);
        let nr = r.pow(right as u32);
        for li in 0..nl {
            let lw = decode(li, r, left);
            for ri in 0..nr {
                let rw = decode(ri, r, right);
                for g in gens {
                    let mut t = Tensor::new();
                    for (w, c) in g {
                        let mut nw = lw.clone();
                        nw.extend_from_slice(w);
                        nw.extend_from_slice(&rw);
                        t.insert(nw, *c);
                    }
                    out.push(t);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Relation families
// ---------------------------------------------------------------------------

/// The eight quadratic kernel elements for the B₂ braided vector space, in
/// the positive-root order [ε₁−ε₂, ε₁+ε₂, ε₁, ε₂] (indices 0..3):
/// squares, the two disjoint-pair commutators, and the two mixed four-term
/// relations.
pub fn b2_quadratic_relations() -> Vec<(String, Tensor)> {
    let mut out = Vec::new();
    for g in 0u8..4 {
        out.push((
            alloc::format!("square(root {})", g),
            tensor(&[(&[g, g], 1)]),
        ));
    }
    out.push((
        String::from("commute(long pair)"),
        tensor(&[(&[0, 1], 1), (&[1, 0], -1)]),
    ));
    out.push((
        String::from("commute(short pair)"),
        tensor(&[(&[2, 3], 1), (&[3, 2], -1)]),
    ));
    out.push((
        String::from("mixed four-term A"),
        tensor(&[(&[0, 2], 1), (&[3, 0], -1), (&[2, 1], 1), (&[1, 3], 1)]),
    ));
    out.push((
        String::from("mixed four-term B"),
        tensor(&[(&[2, 0], 1), (&[0, 3], -1), (&[1, 2], 1), (&[3, 1], 1)]),
    ));
    out
}

/// The two quartic kernel elements for B₂ (degree 4).
pub fn b2_quartic_relations() -> Vec<(String, Tensor)> {
    alloc::vec![
        (
            String::from("quartic symmetric sum"),
            tensor(&[
                (&[0, 2, 1, 2], 1),
                (&[1, 2, 0, 2], 1),
                (&[2, 0, 2, 1], 1),
                (&[2, 1, 2, 0], 1),
            ]),
        ),
        (
            String::from("quartic alternating pair"),
            tensor(&[(&[2, 0, 2, 0], 1), (&[0, 2, 0, 2], -1)]),
        ),
    ]
}

/// The five quadratic kernel elements for the A₂ braided vector space
/// (positive roots ε₁−ε₂, ε₁−ε₃, ε₂−ε₃ as indices 0..2): squares and the
/// two cyclic three-term sums.
pub fn a2_quadratic_relations() -> Vec<(String, Tensor)> {
    let mut out = Vec::new();
    for g in 0u8..3 {
        out.push((
            alloc::format!("square(root {})", g),
            tensor(&[(&[g, g], 1)]),
        ));
    }
    // The two three-term relations in the signed-root normalization
    // (matching the normalized bracket relations of the free algebra):
    // [12][23] − [23][13] − [13][12] and [23][12] − [13][23] − [12][13].
    out.push((
        String::from("three-term A"),
        tensor(&[(&[0, 2], 1), (&[2, 1], -1), (&[1, 0], -1)]),
    ));
    out.push((
        String::from("three-term B"),
        tensor(&[(&[2, 0], 1), (&[1, 2], -1), (&[0, 1], -1)]),
    ));
    out
}

/// Closed-form Hilbert series coefficients for supported types, up to and
/// including `max_degree`.
pub fn hilbert_series(kind: crate::roots::RootKind, max_degree: usize) -> Option<Vec<u64>> {
    use crate::roots::RootKind;
    fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = alloc::vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }
    let series = match kind {
        RootKind::B2 => {
            // (1+t)⁴ (1+t²)²
            let mut s = alloc::vec![1u64];
            for _ in 0..4 {
                s = poly_mul(&s, &[1, 1]);
            }
            for _ in 0..2 {
                s = poly_mul(&s, &[1, 0, 1]);
            }
            s
        }
        RootKind::A(3) => {
            // (1+t)² (1+t+t²)
            let mut s = alloc::vec![1u64];
            for _ in 0..2 {
                s = poly_mul(&s, &[1, 1]);
            }
            s = poly_mul(&s, &[1, 1, 1]);
            s
        }
        _ => return None,
    };
    let mut out = alloc::vec![0u64; max_degree + 1];
    for (i, c) in series.iter().enumerate() {
        if i <= max_degree {
            out[i] = *c;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{RootKind, RootSystem};

    #[test]
    fn braid_relation_holds() {
        // Ψ₁Ψ₂Ψ₁ = Ψ₂Ψ₁Ψ₂ on every basis word of V^{⊗3}, for B₂, A₃ and G₂.
        for rs in [RootSystem::b2(), RootSystem::a_type(4), RootSystem::g2()] {
            let r = rs.positive.len();
            for idx in 0..r.pow(3) {
                let w = decode(idx, r, 3);
                let t = tensor(&[(&w[..], 1)]);
                let lhs = psi(&rs, &psi(&rs, &psi(&rs, &t, 0), 1), 0);
                let rhs = psi(&rs, &psi(&rs, &psi(&rs, &t, 1), 0), 1);
                assert_eq!(lhs, rhs, "braid relation fails at word {w:?}");
            }
        }
    }

    #[test]
    fn reduced_words_have_inversion_length() {
        for p in permutations(4) {
            let inv = (0..4)
                .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            assert_eq!(reduced_word(&p).len(), inv);
        }
    }

    #[test]
    fn symmetrizer_matches_coset_recursion() {
        // Sym_d = (id + Σ_{k=1}^{d-1} Ψ_{d-1}⋯Ψ_k)(Sym_{d-1} ⊗ id), checked
        // on every basis word for B₂ at d = 2, 3, 4.
        let rs = RootSystem::b2();
        let r = rs.positive.len();
        for d in 2..=4usize {
            let rwords = all_reduced_words(d);
            for idx in 0..r.pow(d as u32) {
                let w = decode(idx, r, d);
                let direct = sym_apply(&rs, &tensor(&[(&w[..], 1)]), d);
                // Recursive: Sym_{d-1} on the first d-1 factors...
                let prefix: Vec<u8> = w[..d - 1].to_vec();
                let sub = sym_apply(&rs, &tensor(&[(&prefix[..], 1)]), d - 1);
                let mut extended = Tensor::new();
                for (sw, c) in &sub {
                    let mut nw = sw.clone();
                    nw.push(w[d - 1]);
                    extended.insert(nw, *c);
                }
                // ...then id + Σ_k Ψ_{d-1}⋯Ψ_k (descending products).
                let mut acc = extended.clone();
                for k in (0..d - 1).rev() {
                    // product Ψ_{d-2}…Ψ_k applied to extended (0-based ops).
                    let mut t = extended.clone();
                    for op in (k..d - 1).rev() {
                        t = psi(&rs, &t, op);
                    }
                    for (tw, c) in t {
                        let e = acc.entry(tw.clone()).or_insert(0);
                        *e += c;
                        if *e == 0 {
                            acc.remove(&tw);
                        }
                    }
                }
                assert_eq!(direct, acc, "coset recursion fails d={d} word {w:?}");
                let _ = &rwords;
            }
        }
    }

    #[test]
    fn b2_quadratic_families_in_kernel() {
        let rs = RootSystem::b2();
        for (name, t) in b2_quadratic_relations() {
            let img = sym_apply(&rs, &t, 2);
            assert!(img.is_empty(), "{name} not in ker Sym_2: {img:?}");
        }
    }

    #[test]
    fn b2_quartic_families_in_kernel() {
        let rs = RootSystem::b2();
        for (name, t) in b2_quartic_relations() {
            let img = sym_apply(&rs, &t, 4);
            assert!(img.is_empty(), "{name} not in ker Sym_4: {img:?}");
        }
    }

    #[test]
    fn a2_families_in_kernel() {
        let rs = RootSystem::a_type(3);
        for (name, t) in a2_quadratic_relations() {
            let img = sym_apply(&rs, &t, 2);
            assert!(img.is_empty(), "{name} not in ker Sym_2: {img:?}");
        }
    }

    #[test]
    fn negative_control_not_in_kernel() {
        // A bare basis word is not in the kernel in degree 2.
        let rs = RootSystem::b2();
        let img = sym_apply(&rs, &tensor(&[(&[0, 2], 1)]), 2);
        assert!(!img.is_empty());
        // A perturbed relation leaves the kernel.
        let spoiled = tensor(&[(&[0, 1], 1), (&[1, 0], 1)]);
        let img2 = sym_apply(&rs, &spoiled, 2);
        assert!(!img2.is_empty());
    }

    #[test]
    fn b2_ranks_certified() {
        let rs = RootSystem::b2();
        let quad: Vec<Tensor> = b2_quadratic_relations().into_iter().map(|x| x.1).collect();
        let quart: Vec<Tensor> = b2_quartic_relations().into_iter().map(|x| x.1).collect();
        let expect = [1usize, 4, 8, 12, 14, 12];
        for d in 0..=5usize {
            let mut gens = pad_kernel(&rs, &quad, 2, d);
            gens.extend(pad_kernel(&rs, &quart, 4, d));
            let rank = sym_rank_certified(&rs, d, &gens).unwrap();
            assert_eq!(rank, expect[d], "degree {d}");
        }
    }

    #[test]
    fn a2_ranks_certified() {
        let rs = RootSystem::a_type(3);
        let quad: Vec<Tensor> = a2_quadratic_relations().into_iter().map(|x| x.1).collect();
        let expect = [1usize, 3, 4, 3, 1];
        let mut total = 0usize;
        for d in 0..=4usize {
            let gens = pad_kernel(&rs, &quad, 2, d);
            let rank = sym_rank_certified(&rs, d, &gens).unwrap();
            assert_eq!(rank, expect[d], "degree {d}");
            total += rank;
        }
        assert_eq!(total, 12);
        // Degree 5 and above vanish.
        let gens5 = pad_kernel(&rs, &quad, 2, 5);
        assert_eq!(sym_rank_certified(&rs, 5, &gens5).unwrap(), 0);
    }

    #[test]
    fn small_rank_cross_checked_with_bareiss() {
        // A₂ in degree 2: 9×9 integer symmetrizer matrix, exact fraction-free
        // rank must agree with the certified mod-p squeeze.
        use num_bigint::BigInt;
        let rs = RootSystem::a_type(3);
        let r = rs.positive.len();
        let rwords = all_reduced_words(2);
        let n = r * r;
        let mut mat = alloc::vec![alloc::vec![BigInt::from(0); n]; n];
        for col in 0..n {
            let w = decode(col, r, 2);
            for (img, c) in sym_image(&rs, &w, &rwords) {
                mat[encode(&img, r)][col] = BigInt::from(c);
            }
        }
        assert_eq!(crate::linalg::bareiss_rank(mat), 4);
    }

    #[test]
    fn hilbert_closed_forms() {
        assert_eq!(
            hilbert_series(RootKind::B2, 5).unwrap(),
            alloc::vec![1, 4, 8, 12, 14, 12]
        );
        assert_eq!(
            hilbert_series(RootKind::B2, 9).unwrap(),
            alloc::vec![1, 4, 8, 12, 14, 12, 8, 4, 1, 0]
        );
        assert_eq!(
            hilbert_series(RootKind::A(3), 4).unwrap(),
            alloc::vec![1, 3, 4, 3, 1]
        );
        assert!(hilbert_series(RootKind::G2, 3).is_none());
    }
}
