//! Oracles shared by the integration tests. None of them go through the
//! cylinder coordinates or the generator formulas of the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use h2tiles_core::origami::CanonicalForm;
use h2tiles_core::Origami;

/// Every permutation of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i as u32);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Canonical forms of all H(2) origamis with `n` squares, found by trying
/// every pair of permutations.
pub fn brute_force_h2(n: usize) -> BTreeSet<CanonicalForm> {
    let perms = permutations(n);
    let mut out = BTreeSet::new();
    for r in &perms {
        for u in &perms {
            let o = Origami::new(r.clone(), u.clone()).unwrap();
            if o.validate_stratum() {
                out.insert(o.canonical_form());
            }
        }
    }
    out
}

fn inverse(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

/// Image of `o` under the integer matrix `m = [[a, b], [c, d]]` with
/// positive determinant, built by walking straight segments on `o`.
///
/// Coordinates are scaled by `2 det` so that every point involved is
/// integral. A square of the image is a point of `o` whose image is a
/// square center; its right (up) neighbour is reached by walking the
/// preimage of `(1, 0)` (`(0, 1)`).
pub fn transform(o: &Origami, m: [[i64; 2]; 2]) -> Origami {
    let [[a, b], [c, d]] = m;
    let det = a * d - b * c;
    assert!(det > 0);
    let scale = 2 * det;
    let right = o.right().to_vec();
    let up = o.up().to_vec();
    let right_inv = inverse(&right);
    let up_inv = inverse(&up);

    // image points p (scaled) with m p in (scale/2, scale/2) + scale Z^2
    let mut squares: Vec<(usize, i64, i64)> = Vec::new();
    for s in 0..o.n() {
        for x in 0..scale {
            for y in 0..scale {
                let (ix, iy) = (a * x + b * y, c * x + d * y);
                if (ix - det).rem_euclid(scale) == 0 && (iy - det).rem_euclid(scale) == 0 {
                    squares.push((s, x, y));
                }
            }
        }
    }
    assert_eq!(squares.len() as i64, o.n() as i64 * det);

    // scale * m^{-1} e_i = 2 adj(m) e_i
    let step_right = (2 * d, -2 * c);
    let step_up = (-2 * b, 2 * a);

    let walk = |start: (usize, i64, i64), v: (i64, i64)| -> (usize, i64, i64) {
        let (mut s, x0, y0) = start;
        let mut events: Vec<(i64, i64, bool, i64)> = Vec::new(); // (num, den, is_vertical, direction)
        let (x1, y1) = (x0 + v.0, y0 + v.1);
        // lines crossed going from `from` to `to`, with half-open squares
        let lines = |from: i64, to: i64| -> Vec<i64> {
            let mut ks = Vec::new();
            if to > from {
                let mut k = from.div_euclid(scale) * scale + scale;
                while k <= to {
                    ks.push(k);
                    k += scale;
                }
            } else if to < from {
                let mut k = from.div_euclid(scale) * scale;
                while k > to {
                    ks.push(k);
                    k -= scale;
                }
            }
            ks
        };
        for k in lines(x0, x1) {
            events.push(((k - x0).abs(), v.0.abs(), true, v.0.signum()));
        }
        for k in lines(y0, y1) {
            events.push(((k - y0).abs(), v.1.abs(), false, v.1.signum()));
        }
        events.sort_by(|p, q| (p.0 as i128 * q.1 as i128).cmp(&(q.0 as i128 * p.1 as i128)));
        for w in events.windows(2) {
            assert_ne!(w[0].0 as i128 * w[1].1 as i128, w[1].0 as i128 * w[0].1 as i128, "walk hit a corner");
        }
        for (_, _, vertical, dir) in events {
            s = match (vertical, dir > 0) {
                (true, true) => right[s] as usize,
                (true, false) => right_inv[s] as usize,
                (false, true) => up[s] as usize,
                (false, false) => up_inv[s] as usize,
            };
        }
        (s, x1.rem_euclid(scale), y1.rem_euclid(scale))
    };

    let index = |p: (usize, i64, i64)| squares.iter().position(|q| *q == p).expect("walk ends on a square");
    let mut new_right = Vec::with_capacity(squares.len());
    let mut new_up = Vec::with_capacity(squares.len());
    for &sq in &squares {
        new_right.push(index(walk(sq, step_right)) as u32);
        new_up.push(index(walk(sq, step_up)) as u32);
    }
    Origami::new(new_right, new_up).unwrap()
}
