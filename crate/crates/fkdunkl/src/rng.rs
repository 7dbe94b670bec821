//! Deterministic pseudo-random number generation.
//!
//! Reports must be byte-identical across runs and platforms for a fixed seed,
//! so the generators are fixed algorithms with published reference vectors
//! rather than a third-party crate whose defaults may drift:
//!
//! * `splitmix64` — used to derive per-job seeds from the global seed and to
//!   seed the main generator's state.
//! * `xoshiro256**` — the stream generator behind all sampling.
//!
//! Per-job seed derivation (documented contract): the job label is hashed by
//! folding its UTF-8 bytes into a splitmix64 state initialized with the
//! global seed (one `next` call per byte, XORing the byte into the state
//! first), then one further `next` yields the job seed.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

/// One step of the splitmix64 generator; updates the state and returns the
/// next output word.
#[inline]
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a per-job seed from the global seed and a stable job label.
pub fn derive_seed(global_seed: u64, label: &str) -> u64 {
    let mut st = global_seed;
    for &b in label.as_bytes() {
        st ^= b as u64;
        let _ = splitmix64(&mut st);
    }
    splitmix64(&mut st)
}

/// xoshiro256** generator (Blackman–Vigna), seeded via splitmix64.
#[derive(Clone, Debug)]
pub struct Rng {
    s: [u64; 4],
}

impl Rng {
    /// Seed the four state words by four successive splitmix64 outputs.
    pub fn new(seed: u64) -> Self {
        let mut st = seed;
        let s = [
            splitmix64(&mut st),
            splitmix64(&mut st),
            splitmix64(&mut st),
            splitmix64(&mut st),
        ];
        Rng { s }
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in [0, 1): 53 mantissa bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: u64) -> u64 {
        // Multiply-shift rejection-free mapping is fine here: statistical
        // quality far exceeds what sampling test points requires, and it is
        // branch-free hence trivially reproducible.
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Complex number with independent uniform real/imaginary parts.
    pub fn complex_in(&mut self, re: (f64, f64), im: (f64, f64)) -> Complex64 {
        let r = self.uniform(re.0, re.1);
        let i = self.uniform(im.0, im.1);
        Complex64::new(r, i)
    }

    /// Nonzero small rational value p/q with |p| ≤ 2^16, 1 ≤ q ≤ 2^8, as a
    /// pair (numerator, denominator). Used for exact evaluation points.
    pub fn small_rational(&mut self) -> (i64, i64) {
        let p = (self.below(1 << 17) as i64) - (1 << 16);
        let p = if p == 0 { 1 } else { p };
        let q = (self.below(1 << 8) as i64) + 1;
        (p, q)
    }
}

/// Sampling configuration shared by all numeric identity checks.
#[derive(Clone, Debug)]
pub struct SamplePlan {
    /// Seed for this job's generator.
    pub seed: u64,
    /// Number of random evaluation points per identity.
    pub num_points: usize,
    /// Real-part range of the sample box.
    pub re_range: (f64, f64),
    /// Imaginary-part range of the sample box.
    pub im_range: (f64, f64),
    /// Minimum allowed distance to any declared pole locus.
    pub pole_margin: f64,
    /// Maximum number of re-draws per point before giving up.
    pub max_retries: usize,
}

impl SamplePlan {
    /// Default plan: 5 points in the unit box with margin 1e-2 and 5 retries.
    pub fn new(seed: u64) -> Self {
        SamplePlan {
            seed,
            num_points: 5,
            re_range: (-1.0, 1.0),
            im_range: (-1.0, 1.0),
            pole_margin: 1e-2,
            max_retries: 5,
        }
    }

    /// Draw `dim`-dimensional complex points, re-drawing any point whose
    /// pole distance (as reported by `pole_dist`) is below the margin.
    /// Returns `Err` with a description if retries are exhausted.
    pub fn draw_points<F>(&self, dim: usize, mut pole_dist: F) -> Result<Vec<Vec<Complex64>>, String>
    where
        F: FnMut(&[Complex64]) -> f64,
    {
        let mut rng = Rng::new(self.seed);
        let mut pts = Vec::with_capacity(self.num_points);
        for pt_idx in 0..self.num_points {
            let mut ok = None;
            for _ in 0..=self.max_retries {
                let cand: Vec<Complex64> = (0..dim)
                    .map(|_| self.complex_sample(&mut rng))
                    .collect();
                if pole_dist(&cand) >= self.pole_margin {
                    ok = Some(cand);
                    break;
                }
            }
            match ok {
                Some(p) => pts.push(p),
                None => {
                    return Err(alloc::format!(
                        "sample point {pt_idx}: pole margin {} not met after {} retries",
                        self.pole_margin,
                        self.max_retries + 1
                    ))
                }
            }
        }
        Ok(pts)
    }

    fn complex_sample(&self, rng: &mut Rng) -> Complex64 {
        rng.complex_in(self.re_range, self.im_range)
    }
}

/// Relative-or-absolute closeness test used by every numeric verdict:
/// absolute when |reference| ≤ 1, relative otherwise.
pub fn close(value: Complex64, reference: Complex64, tol: f64) -> bool {
    let scale = reference.norm();
    let err = (value - reference).norm();
    if scale > 1.0 {
        err / scale <= tol
    } else {
        err <= tol
    }
}

/// Residual magnitude normalized the same way as [`close`]: |v−r| divided by
/// max(1, |r|).
pub fn residual(value: Complex64, reference: Complex64) -> f64 {
    let scale = reference.norm().max(1.0);
    (value - reference).norm() / scale
}
