//! Classical direct constructions, used where the recursive scheme has no
//! applicable rule and as an independent check on it.

/// Bose construction for n = 6t + 3 on Z_(2t+1) x Z_3.
pub fn bose(n: usize) -> Vec<[usize; 3]> {
    assert!(n % 6 == 3, "Bose construction needs n = 6t + 3");
    let t = n / 6;
    let v = 2 * t + 1;
    let label = |x: usize, i: usize| (i % 3) * v + x + 1;
    // idempotent commutative quasigroup: halving mod v
    let op = |x: usize, y: usize| (x + y) * (t + 1) % v;
    let mut out = Vec::with_capacity(n * (n - 1) / 6);
    for x in 0..v {
        out.push([label(x, 0), label(x, 1), label(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..v {
            for y in x + 1..v {
                out.push([label(x, i), label(y, i), label(op(x, y), i + 1)]);
            }
        }
    }
    out
}

/// Skolem construction for n = 6t + 1 on {inf} u Z_(2t) x Z_3.
pub fn skolem(n: usize) -> Vec<[usize; 3]> {
    assert!(n % 6 == 1 && n > 1, "Skolem construction needs n = 6t + 1, t >= 1");
    let t = n / 6;
    let v = 2 * t;
    let inf = n;
    let label = |x: usize, i: usize| (i % 3) * v + x + 1;
    // half-idempotent commutative quasigroup of order 2t
    let op = |x: usize, y: usize| {
        let s = (x + y) % v;
        if s % 2 == 0 {
            s / 2
        } else {
            s / 2 + t
        }
    };
    let mut out = Vec::with_capacity(n * (n - 1) / 6);
    for x in 0..t {
        out.push([label(x, 0), label(x, 1), label(x, 2)]);
    }
    for x in 0..t {
        for i in 0..3 {
            out.push([inf, label(x + t, i), label(x, i + 1)]);
        }
    }
    for i in 0..3 {
        for x in 0..v {
            for y in x + 1..v {
                out.push([label(x, i), label(y, i), label(op(x, y), i + 1)]);
            }
        }
    }
    out
}
