#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use evoctrl::theory::{lo_improve_prob, onemax_drift};

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Exact counts `[f][ℓ]` over every flip mask of an `n`-bit string with `f`
/// leading ones followed by zeros: total OneMax gain, number of LeadingOnes
/// improvements, and number of masks. Bit `j` of a mask is position `j`.
pub struct Enumeration {
    pub n: usize,
    pub om_gain: Vec<Vec<u64>>,
    pub lo_improved: Vec<Vec<u64>>,
    pub masks: Vec<u64>,
}

pub fn enumerate_flips(n: usize) -> Enumeration {
    assert!(n <= 24);
    let mut om_gain = vec![vec![0u64; n + 1]; n];
    let mut lo_improved = vec![vec![0u64; n + 1]; n];
    let mut masks = vec![0u64; n + 1];
    let full = (1u64 << n) - 1;
    for mask in 1..=full {
        let ell = mask.count_ones() as usize;
        masks[ell] += 1;
        for f in 0..n {
            let x = (1u64 << f) - 1;
            let y = x ^ mask;
            let gain = y.count_ones() as i64 - f as i64;
            if gain > 0 {
                om_gain[f][ell] += gain as u64;
            }
            // OneMax optimum is all ones; LeadingOnes counts from bit 0
            if ((y | !full).trailing_ones() as usize).min(n) > f {
                lo_improved[f][ell] += 1;
            }
        }
    }
    Enumeration {
        n,
        om_gain,
        lo_improved,
        masks,
    }
}

/// Worst relative error of the library against full enumeration for one `n`.
pub fn enumeration_error(n: usize) -> (f64, String) {
    let e = enumerate_flips(n);
    let mut worst = (0.0, String::new());
    for f in 0..n {
        for ell in 1..=n {
            let total = e.masks[ell] as f64;
            let want_d = e.om_gain[f][ell] as f64 / total;
            let want_p = e.lo_improved[f][ell] as f64 / total;
            let got_d = onemax_drift(n, f, ell).unwrap();
            let got_p = lo_improve_prob(n, f, ell).unwrap();
            for (what, err) in [
                ("drift", rel_err(got_d, want_d)),
                ("prob", rel_err(got_p, want_p)),
            ] {
                if err > worst.0 {
                    worst = (err, format!("{what} n={n} f={f} ell={ell}"));
                }
            }
        }
    }
    worst
}

/// Counts flip sets position by position instead of by formula. Positions
/// are processed one at a time; each is either flipped or kept.
///
/// Returns `(om_gain[ℓ], lo_improved[ℓ], total[ℓ])` for fitness `f`.
pub fn count_by_positions(n: usize, f: usize) -> (Vec<u128>, Vec<u128>, Vec<u128>) {
    // OneMax: dp[ℓ][gain + n] = number of partial flip sets
    let width = 2 * n + 1;
    let mut dp = vec![vec![0u128; width]; n + 1];
    dp[0][n] = 1;
    for pos in 0..n {
        let delta: isize = if pos < f { -1 } else { 1 };
        for ell in (0..pos + 1).rev() {
            for g in 0..width {
                let c = dp[ell][g];
                if c != 0 {
                    let ng = (g as isize + delta) as usize;
                    dp[ell + 1][ng] += c;
                }
            }
        }
    }
    let mut gain = vec![0u128; n + 1];
    let mut total = vec![0u128; n + 1];
    for ell in 0..=n {
        for g in 0..width {
            total[ell] += dp[ell][g];
            if g > n {
                gain[ell] += dp[ell][g] * (g - n) as u128;
            }
        }
    }

    // LeadingOnes: state = flips so far, and whether the flip set is still
    // consistent with an improvement
    let mut ok = vec![0u128; n + 1];
    ok[0] = 1;
    for pos in 0..n {
        for ell in (0..pos + 1).rev() {
            let c = ok[ell];
            ok[ell] = 0;
            let (keep, flip) = if pos < f {
                (true, false)
            } else if pos == f {
                (false, true)
            } else {
                (true, true)
            };
            if keep {
                ok[ell] += c;
            }
            if flip {
                ok[ell + 1] += c;
            }
        }
    }
    (gain, ok, total)
}

/// Worst relative error against position-wise counting, all `f`, `ℓ`.
pub fn counting_error(n: usize) -> (f64, String) {
    let mut worst = (0.0, String::new());
    for f in 0..n {
        let (gain, improved, total) = count_by_positions(n, f);
        for ell in 1..=n {
            let want_d = gain[ell] as f64 / total[ell] as f64;
            let want_p = improved[ell] as f64 / total[ell] as f64;
            let got_d = onemax_drift(n, f, ell).unwrap();
            let got_p = lo_improve_prob(n, f, ell).unwrap();
            for (what, err) in [
                ("drift", rel_err(got_d, want_d)),
                ("prob", rel_err(got_p, want_p)),
            ] {
                if err > worst.0 {
                    worst = (err, format!("{what} n={n} f={f} ell={ell}"));
                }
            }
        }
    }
    worst
}

/// Pascal's triangle in exact integers, rows `0..=n`.
pub struct Pascal(Vec<Vec<BigUint>>);

impl Pascal {
    pub fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u8)]];
        for m in 1..=n {
            let prev = &rows[m - 1];
            let mut row = Vec::with_capacity(m + 1);
            row.push(BigUint::from(1u8));
            for k in 1..m {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigUint::from(1u8));
            rows.push(row);
        }
        Pascal(rows)
    }

    /// `C(m, k)`, zero outside the triangle.
    pub fn get(&self, m: usize, k: usize) -> BigUint {
        if k > m {
            BigUint::zero()
        } else {
            self.0[m][k].clone()
        }
    }

    pub fn at(&self, m: usize, k: usize) -> &BigUint {
        &self.0[m][k]
    }
}

/// Smallest `ℓ` maximizing `C(n-f-1, ℓ-1) / C(n, ℓ)`, compared exactly by
/// cross-multiplication.
pub fn lo_argmax_exact(pascal: &Pascal, n: usize, f: usize) -> usize {
    let mut best = 1;
    for ell in 2..=n - f {
        // P(ℓ) > P(best)  ⇔  C(m, ℓ-1)·C(n, best) > C(m, best-1)·C(n, ℓ)
        let m = n - f - 1;
        let lhs = pascal.at(m, ell - 1) * pascal.at(n, best);
        let rhs = pascal.at(m, best - 1) * pascal.at(n, ell);
        if lhs > rhs {
            best = ell;
        }
    }
    best
}

/// `C(n, ℓ)·drift(n, f, ℓ)` as an exact integer.
pub fn om_scaled_drift(pascal: &Pascal, n: usize, f: usize, ell: usize) -> BigUint {
    let w = n - f;
    let mut s = BigUint::zero();
    for i in ell.div_ceil(2)..=ell.min(w) {
        if ell - i > f || 2 * i == ell {
            continue;
        }
        s += pascal.at(w, i) * pascal.at(f, ell - i) * BigUint::from(2 * i - ell);
    }
    s
}

/// True when no `ℓ ≥ 2` has strictly larger drift than `ℓ = 1`.
pub fn om_one_is_argmax(pascal: &Pascal, n: usize, f: usize) -> Result<(), usize> {
    // drift(1) = (n - f)/n; drift(ℓ) = S/C(n, ℓ)
    let w = BigUint::from(n - f);
    let nn = BigUint::from(n);
    for ell in 2..=n.min(2 * (n - f)) {
        let s = om_scaled_drift(pascal, n, f, ell);
        if &s * &nn > &w * pascal.at(n, ell) {
            return Err(ell);
        }
    }
    Ok(())
}

pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}
