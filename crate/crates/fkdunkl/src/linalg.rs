//! Linear algebra kernels: complex least squares (Householder QR), exact
//! rational span membership (Gaussian elimination over ℚ), fraction-free
//! integer rank (Bareiss), and graph components for block decompositions.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
#[allow(unused_imports)]
use num_traits::Float;


type C64 = Complex64;
type Q = BigRational;

/// Least squares min ‖A·x − b‖₂ for a dense column-major complex matrix.
/// `cols` are the columns of A (all of length m). Returns the coefficient
/// vector and the residual norm. Columns may be rank deficient; tiny pivots
/// are treated as zero and their coefficients set to 0.
pub fn lstsq_residual(cols: &[Vec<C64>], b: &[C64]) -> (Vec<C64>, f64) {
    let k = cols.len();
    let m = b.len();
    if k == 0 {
        return (Vec::new(), b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    // Working copies.
    let mut a: Vec<Vec<C64>> = cols.to_vec();
    let mut rhs = b.to_vec();
    let mut vs: Vec<(usize, Vec<C64>)> = Vec::new(); // (start row, reflector)
    let steps = k.min(m);
    for j in 0..steps {
        // Build Householder reflector for column j, rows j..m.
        let x: Vec<C64> = a[j][j..].to_vec();
        let nx = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nx < 1e-300 {
            vs.push((j, Vec::new()));
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let sigma = phase * nx;
        let mut v = x;
        v[0] += sigma;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 < 1e-300 {
            vs.push((j, Vec::new()));
            continue;
        }
        // Apply H = I − 2 v vᴴ / (vᴴ v) to columns j.. and to rhs.
        let apply = |col: &mut [C64], v: &[C64], vnorm2: f64, j: usize| {
            let dot: C64 = v
                .iter()
                .zip(col[j..].iter())
                .map(|(vi, ci)| vi.conj() * ci)
                .sum();
            let f = dot * (2.0 / vnorm2);
            for (vi, ci) in v.iter().zip(col[j..].iter_mut()) {
                *ci -= vi * f;
            }
        };
        for col in a.iter_mut().skip(j) {
            apply(col, &v, vnorm2, j);
        }
        apply(&mut rhs, &v, vnorm2, j);
        vs.push((j, v));
    }
    // Back substitution on the triangular top-k block.
    let mut x = alloc::vec![C64::zero(); k];
    for j in (0..steps).rev() {
        let mut s = rhs[j];
        for l in (j + 1)..k {
            s -= a[l][j] * x[l];
        }
        let d = a[j][j];
        x[j] = if d.norm() > 1e-10 { s / d } else { C64::zero() };
    }
    // Residual: ‖A x − b‖ against the ORIGINAL data (robust also in the
    // rank-deficient case).
    let mut res2 = 0.0f64;
    for row in 0..m {
        let mut s = C64::zero();
        for (l, col) in cols.iter().enumerate() {
            s += col[row] * x[l];
        }
        res2 += (s - b[row]).norm_sqr();
    }
    (x, res2.sqrt())
}

/// Exact: is `target` in the ℚ-span of `cols`? Returns combination
/// coefficients if so, `None` if not. Decisive either way.
pub fn q_in_span(cols: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let k = cols.len();
    let m = target.len();
    // Augmented matrix rows: [col entries…, target entry].
    let mut rows: Vec<Vec<Q>> = (0..m)
        .map(|r| {
            let mut row: Vec<Q> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let ncols = k + 1;
    let mut pivot_of_col: Vec<Option<usize>> = alloc::vec![None; ncols];
    let mut rank_row = 0usize;
    for c in 0..ncols {
        // Find pivot.
        let mut piv = None;
        for r in rank_row..m {
            if !rows[r][c].is_zero() {
                piv = Some(r);
                break;
            }
        }
        let Some(pr) = piv else { continue };
        rows.swap(rank_row, pr);
        let inv = rows[rank_row][c].clone().recip();
        for cc in c..ncols {
            let v = &rows[rank_row][cc] * &inv;
            rows[rank_row][cc] = v;
        }
        for r in 0..m {
            if r != rank_row && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for cc in c..ncols {
                    let v = &rows[r][cc] - &(&rows[rank_row][cc] * &f);
                    rows[r][cc] = v;
                }
            }
        }
        pivot_of_col[c] = Some(rank_row);
        rank_row += 1;
        if rank_row == m {
            break;
        }
    }
    // Pivot in the target column ⟹ not in span.
    if pivot_of_col[k].is_some() {
        return None;
    }
    let mut coeffs = alloc::vec![Q::zero(); k];
    for (c, p) in pivot_of_col.iter().take(k).enumerate() {
        if let Some(r) = p {
            coeffs[c] = rows[*r][k].clone();
        }
    }
    Some(coeffs)
}

/// Exact rank of an integer matrix by fraction-free Bareiss elimination
/// with full pivoting.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::from(1);
    let mut rank = 0usize;
    let mut r = 0usize;
    let mut used_cols = alloc::vec![false; cols];
    while r < rows {
        // Find any nonzero pivot in rows ≥ r, unused columns.
        let mut found = None;
        'search: for rr in r..rows {
            for (cc, used) in used_cols.iter().enumerate() {
                if !used && !m[rr][cc].is_zero() {
                    found = Some((rr, cc));
                    break 'search;
                }
            }
        }
        let Some((pr, pc)) = found else { break };
        m.swap(r, pr);
        used_cols[pc] = true;
        let piv = m[r][pc].clone();
        for rr in (r + 1)..rows {
            for cc in 0..cols {
                if cc == pc {
                    continue;
                }
                let num = &piv * &m[rr][cc] - &m[rr][pc] * &m[r][cc];
                debug_assert!((&num % &prev).is_zero());
                m[rr][cc] = num / &prev;
            }
            m[rr][pc] = BigInt::zero();
        }
        prev = piv;
        rank += 1;
        r += 1;
    }
    rank
}

/// Connected components of an undirected graph on `n` vertices given by an
/// edge iterator. Returns the vertex sets, each sorted.
pub fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut groups: alloc::collections::BTreeMap<usize, Vec<usize>> =
        alloc::collections::BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}
