//! Integer helpers: exact square roots and the sum-of-two-squares function.

/// `⌊√n⌋`, exact for every `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// `⌊a·√t⌋` for real `a > 0` and `t ≥ 0`, corrected so that the result `m`
/// satisfies `m ≤ a√t < m + 1` in the sense of `m² ≤ a²t`.
pub fn floor_scaled_sqrt(a: f64, t: f64) -> u64 {
    if t <= 0.0 {
        return 0;
    }
    let target = a * a * t;
    let mut m = (a * t.sqrt()).floor().max(0.0) as u64;
    while m > 0 && (m as f64) * (m as f64) > target {
        m -= 1;
    }
    while ((m + 1) as f64) * ((m + 1) as f64) <= target {
        m += 1;
    }
    m
}

/// Number of `(a, b) ∈ Z²` with `a² + b² = n`.
///
/// Uses `r2(n) = 4 Π_{p ≡ 1 (4)} (e_p + 1)` when every prime `≡ 3 (4)`
/// divides `n` to an even power, and 0 otherwise.
pub fn r2(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let mut m = n;
    while m.is_multiple_of(2) {
        m /= 2;
    }
    let mut product = 1;
    let mut p = 3;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            if p % 4 == 3 {
                if e % 2 == 1 {
                    return 0;
                }
            } else {
                product *= e + 1;
            }
        }
        p += 2;
    }
    if m > 1 {
        if m % 4 == 3 {
            return 0;
        }
        product *= 2;
    }
    4 * product
}

/// Direct enumeration of lattice points on the circle of radius `√n`.
pub fn r2_brute(n: u64) -> u64 {
    let r = isqrt(n) as i64;
    let mut count = 0;
    for a in -r..=r {
        let rest = n - (a * a) as u64;
        let b = isqrt(rest);
        if b * b == rest {
            count += if b == 0 { 1 } else { 2 };
        }
    }
    count
}

/// `r2(0..=n)` tabulated by walking the lattice points of the disk of radius `√n`.
#[derive(Debug, Clone)]
pub struct R2Sieve {
    table: Vec<u32>,
}

impl R2Sieve {
    pub fn new(n: u64) -> Self {
        let mut table = vec![0u32; n as usize + 1];
        let r = isqrt(n);
        for a in 0..=r {
            let a2 = a * a;
            let bmax = isqrt(n - a2);
            for b in 0..=bmax {
                let signs = match (a == 0, b == 0) {
                    (true, true) => 1,
                    (true, false) | (false, true) => 2,
                    (false, false) => 4,
                };
                table[(a2 + b * b) as usize] += signs;
            }
        }
        Self { table }
    }

    pub fn limit(&self) -> u64 {
        self.table.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> u64 {
        u64::from(self.table[n as usize])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.table
    }
}

/// `#{(a, b) ≠ (0, 0) : a² + b² ≤ x} = Σ_{1 ≤ n ≤ x} r2(n)`.
pub fn lattice_points_in_disk(x: u64) -> u64 {
    let r = isqrt(x);
    let mut total = 0;
    for a in 0..=r {
        let column = 2 * isqrt(x - a * a) + 1;
        total += if a == 0 { column } else { 2 * column };
    }
    total - 1
}
