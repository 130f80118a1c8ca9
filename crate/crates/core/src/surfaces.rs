//! Cylinder coordinates of square-tiled surfaces in H(2).
//!
//! A one-cylinder surface has bottom saddle connections of lengths
//! `l = [l1, l2, l3]` in that order, the same connections on top in reverse
//! order shifted by the twist `t`, and height `h`. A two-cylinder surface
//! has a short cylinder 1 (width `u[0]`, height `h[0]`) glued on top of a
//! long cylinder 2 (width `u[1]`, height `h[1]`), with twists `t`.

use alloc::vec::Vec;

use num_integer::Integer;
use thiserror::Error;

use crate::origami::{Origami, OrigamiError, SurfaceType, WeierstrassReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("H(2) surfaces need at least 3 squares, got {0}")]
    TooSmall(u64),
    #[error("type is only defined for odd area, got {0}")]
    EvenArea(u64),
    #[error("coordinates are not canonical: {0}")]
    NotCanonical(&'static str),
    #[error("inflate needs a primitive surface")]
    NotPrimitive,
    #[error("lattice parameters must satisfy a, h >= 1 and 0 <= t < a")]
    BadLattice,
    #[error("invariant violation: {0}")]
    Invariant(#[from] OrigamiError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OneCylSurface {
    pub l: [u64; 3],
    pub h: u64,
    pub t: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoCylSurface {
    pub h: [u64; 2],
    pub u: [u64; 2],
    pub t: [u64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Surface {
    OneCyl(OneCylSurface),
    TwoCyl(TwoCylSurface),
}

impl OneCylSurface {
    /// Validates canonical coordinates.
    pub fn new(l: [u64; 3], h: u64, t: u64) -> Result<Self, SurfaceError> {
        if l.contains(&0) || h == 0 {
            return Err(SurfaceError::NotCanonical("lengths and height must be positive"));
        }
        let s = OneCylSurface { l, h, t };
        if t >= s.width() {
            return Err(SurfaceError::NotCanonical("twist must be below the width"));
        }
        if s.canonical() != s {
            return Err(SurfaceError::NotCanonical("not the least cyclic rotation"));
        }
        Ok(s)
    }

    /// Canonical representative of arbitrary positive coordinates; `t` is
    /// taken modulo the width.
    pub fn canonicalize(l: [u64; 3], h: u64, t: i128) -> Self {
        assert!(!l.contains(&0) && h > 0, "lengths and height must be positive");
        let w = (l[0] + l[1] + l[2]) as i128;
        OneCylSurface {
            l,
            h,
            t: t.rem_euclid(w) as u64,
        }
        .canonical()
    }

    fn canonical(self) -> Self {
        let w = self.width();
        if self.l[0] == self.l[1] && self.l[1] == self.l[2] {
            return OneCylSurface {
                t: self.t % (w / 3),
                ..self
            };
        }
        let mut best = self;
        let mut cur = self;
        for _ in 0..2 {
            // rotating (l1, l2, l3) to (l2, l3, l1) shifts the twist by -2 l1
            let [a, b, c] = cur.l;
            let t = (cur.t as i128 - 2 * a as i128).rem_euclid(w as i128) as u64;
            cur = OneCylSurface { l: [b, c, a], h: cur.h, t };
            if (cur.l, cur.t) < (best.l, best.t) {
                best = cur;
            }
        }
        best
    }

    pub fn width(&self) -> u64 {
        self.l.iter().sum()
    }

    pub fn area(&self) -> u64 {
        self.width() * self.h
    }
}

impl TwoCylSurface {
    pub fn new(h: [u64; 2], u: [u64; 2], t: [u64; 2]) -> Result<Self, SurfaceError> {
        if h.contains(&0) || u.contains(&0) {
            return Err(SurfaceError::NotCanonical("heights and widths must be positive"));
        }
        if u[0] >= u[1] {
            return Err(SurfaceError::NotCanonical("widths must satisfy u1 < u2"));
        }
        if t[0] >= u[0] || t[1] >= u[1] {
            return Err(SurfaceError::NotCanonical("twists must be below the widths"));
        }
        Ok(TwoCylSurface { h, u, t })
    }

    pub fn area(&self) -> u64 {
        self.h[0] * self.u[0] + self.h[1] * self.u[1]
    }
}

impl Surface {
    pub fn area(&self) -> u64 {
        match self {
            Surface::OneCyl(s) => s.area(),
            Surface::TwoCyl(s) => s.area(),
        }
    }

    pub fn cylinders(&self) -> usize {
        match self {
            Surface::OneCyl(_) => 1,
            Surface::TwoCyl(_) => 2,
        }
    }
}

/// Hermite normal form `(a, t, h)` of a finite-index sublattice of Z², with
/// basis `(a, 0)` and `(t, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeHNF {
    pub a: u64,
    pub t: u64,
    pub h: u64,
}

impl LatticeHNF {
    pub const UNIT: LatticeHNF = LatticeHNF { a: 1, t: 0, h: 1 };

    pub fn new(a: u64, t: u64, h: u64) -> Result<Self, SurfaceError> {
        if a == 0 || h == 0 || t >= a {
            return Err(SurfaceError::BadLattice);
        }
        Ok(LatticeHNF { a, t, h })
    }

    pub fn index(&self) -> u64 {
        self.a * self.h
    }

    /// All sublattices of index `d`, `sigma_1(d)` of them.
    pub fn all_of_index(d: u64) -> Vec<LatticeHNF> {
        let mut out = Vec::new();
        for a in crate::arith::divisors(d) {
            for t in 0..a {
                out.push(LatticeHNF { a, t, h: d / a });
            }
        }
        out
    }
}

/// HNF of the lattice generated by `vectors`; `None` if they do not span a
/// finite-index sublattice.
pub fn hnf_from_generators(vectors: &[(i64, i64)]) -> Option<LatticeHNF> {
    let mut a: i64 = 0;
    let mut pivot: Option<(i64, i64)> = None;
    for &v in vectors {
        let mut v = v;
        if v.1 != 0 {
            match pivot {
                None => {
                    pivot = Some(v);
                    continue;
                }
                Some(mut p) => {
                    while v.1 != 0 {
                        let q = p.1 / v.1;
                        p = (p.0 - q * v.0, p.1 - q * v.1);
                        core::mem::swap(&mut p, &mut v);
                    }
                    pivot = Some(p);
                }
            }
        }
        a = a.gcd(&v.0);
    }
    let (mut x, mut h) = pivot?;
    if a == 0 {
        return None;
    }
    if h < 0 {
        x = -x;
        h = -h;
    }
    Some(LatticeHNF {
        a: a as u64,
        t: x.rem_euclid(a) as u64,
        h: h as u64,
    })
}

/// Closed forms for the number of one- and two-cylinder surfaces.
pub fn closed_counts(n: u64) -> Result<(u64, u64), SurfaceError> {
    if n < 3 {
        return Err(SurfaceError::TooSmall(n));
    }
    let mut one = 0;
    for w in crate::arith::divisors(n) {
        // compositions of w into three parts, each weighted by w
        if w >= 3 {
            one += (w - 1) * (w - 2) / 2 * w;
        }
    }
    let mut two = 0;
    for h1 in 1..n {
        for u1 in 1..=(n - 1) / h1 {
            let rest = n - h1 * u1;
            for h2 in crate::arith::divisors(rest) {
                let u2 = rest / h2;
                if u1 < u2 {
                    two += u1 * u2;
                }
            }
        }
    }
    Ok((one / 3, two))
}

/// Every H(2) surface with `n` squares in canonical coordinates, sorted.
pub fn enumerate_all(n: u64) -> Result<Vec<Surface>, SurfaceError> {
    if n < 3 {
        return Err(SurfaceError::TooSmall(n));
    }
    let mut out = Vec::new();
    for w in crate::arith::divisors(n) {
        let h = n / w;
        for l1 in 1..w {
            for l2 in 1..w - l1 {
                let l3 = w - l1 - l2;
                let l = [l1, l2, l3];
                let rotations = [[l2, l3, l1], [l3, l1, l2]];
                if rotations.iter().any(|r| *r < l) {
                    continue;
                }
                let twists = if l1 == l2 && l2 == l3 { w / 3 } else { w };
                for t in 0..twists {
                    out.push(Surface::OneCyl(OneCylSurface { l, h, t }));
                }
            }
        }
    }
    for h1 in 1..n {
        for u1 in 1..=(n - 1) / h1 {
            let rest = n - h1 * u1;
            for h2 in crate::arith::divisors(rest) {
                let u2 = rest / h2;
                if u1 >= u2 {
                    continue;
                }
                for t1 in 0..u1 {
                    for t2 in 0..u2 {
                        out.push(Surface::TwoCyl(TwoCylSurface {
                            h: [h1, h2],
                            u: [u1, u2],
                            t: [t1, t2],
                        }));
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Lays the cylinders out as squares.
///
/// One cylinder: square `r * w + x` is row `r`, column `x`. Two cylinders:
/// cylinder 2 occupies `0 .. h2 u2` by rows, cylinder 1 follows.
pub fn to_origami(s: &Surface) -> Origami {
    match s {
        Surface::OneCyl(c) => one_cyl_origami(c),
        Surface::TwoCyl(c) => two_cyl_origami(c),
    }
}

fn one_cyl_origami(c: &OneCylSurface) -> Origami {
    let w = c.width();
    let n = (w * c.h) as usize;
    let [l1, l2, l3] = c.l;
    let id = |r: u64, x: u64| (r * w + x) as u32;
    let mut right = Vec::with_capacity(n);
    let mut up = Vec::with_capacity(n);
    for r in 0..c.h {
        for x in 0..w {
            right.push(id(r, (x + 1) % w));
            if r + 1 < c.h {
                up.push(id(r + 1, x));
            } else {
                // on top the connections read 3, 2, 1 starting at t
                let y = (x + w - c.t % w) % w;
                let bottom = if y < l3 {
                    l1 + l2 + y
                } else if y < l3 + l2 {
                    l1 + (y - l3)
                } else {
                    y - l3 - l2
                };
                up.push(id(0, bottom));
            }
        }
    }
    Origami::from_parts_unchecked(right, up)
}

fn two_cyl_origami(c: &TwoCylSurface) -> Origami {
    let [h1, h2] = c.h;
    let [u1, u2] = c.u;
    let [t1, t2] = c.t;
    let base1 = h2 * u2;
    let id2 = |r: u64, x: u64| (r * u2 + x) as u32;
    let id1 = |r: u64, x: u64| (base1 + r * u1 + x) as u32;
    let n = (h1 * u1 + h2 * u2) as usize;
    let mut right = alloc::vec![0u32; n];
    let mut up = alloc::vec![0u32; n];
    for r in 0..h2 {
        for x in 0..u2 {
            let s = id2(r, x) as usize;
            right[s] = id2(r, (x + 1) % u2);
            up[s] = if r + 1 < h2 {
                id2(r + 1, x)
            } else if x < u1 {
                id1(0, x)
            } else {
                id2(0, (t2 + x) % u2)
            };
        }
    }
    for r in 0..h1 {
        for x in 0..u1 {
            let s = id1(r, x) as usize;
            right[s] = id1(r, (x + 1) % u1);
            up[s] = if r + 1 < h1 {
                id1(r + 1, x)
            } else {
                id2(0, (t2 + (x + t1) % u1) % u2)
            };
        }
    }
    Origami::from_parts_unchecked(right, up)
}

pub fn period_lattice(s: &Surface) -> LatticeHNF {
    to_origami(s)
        .period_lattice()
        .expect("surface origamis are connected")
}

pub fn is_primitive(s: &Surface) -> bool {
    period_lattice(s) == LatticeHNF::UNIT
}

pub fn is_height_primitive(s: &Surface) -> bool {
    period_lattice(s).h == 1
}

/// Image of `s` under `(a t; 0 h)`.
pub fn inflate(s: &Surface, lam: LatticeHNF) -> Result<Surface, SurfaceError> {
    LatticeHNF::new(lam.a, lam.t, lam.h)?;
    if !is_primitive(s) {
        return Err(SurfaceError::NotPrimitive);
    }
    Ok(apply_upper(s, lam))
}

fn apply_upper(s: &Surface, lam: LatticeHNF) -> Surface {
    let (a, b) = (lam.a as i128, lam.t as i128);
    match s {
        Surface::OneCyl(c) => {
            let l = c.l.map(|x| x * lam.a);
            OneCylSurface::canonicalize(l, c.h * lam.h, a * c.t as i128 + b * c.h as i128)
        }
        .into(),
        Surface::TwoCyl(c) => {
            let u = c.u.map(|x| x * lam.a);
            let mut t = [0u64; 2];
            for i in 0..2 {
                let v = a * c.t[i] as i128 - b * c.h[i] as i128;
                t[i] = v.rem_euclid(u[i] as i128) as u64;
            }
            Surface::TwoCyl(TwoCylSurface {
                h: c.h.map(|x| x * lam.h),
                u,
                t,
            })
        }
    }
}

impl From<OneCylSurface> for Surface {
    fn from(s: OneCylSurface) -> Self {
        Surface::OneCyl(s)
    }
}

impl From<TwoCylSurface> for Surface {
    fn from(s: TwoCylSurface) -> Self {
        Surface::TwoCyl(s)
    }
}

/// `(s', Λ)` with `s'` primitive, `Λ` the period lattice of `s`, and
/// `inflate(s', Λ) = s`.
pub fn reduce_primitive(s: &Surface) -> (Surface, LatticeHNF) {
    let lam = period_lattice(s);
    let (a, b, d) = (lam.a, lam.t as i128, lam.h);
    let reduced = match s {
        Surface::OneCyl(c) => {
            let l = c.l.map(|x| {
                assert_eq!(x % a, 0, "horizontal connections lie in the lattice");
                x / a
            });
            assert_eq!(c.h % d, 0, "heights are multiples of h");
            let h = c.h / d;
            let num = c.t as i128 - b * h as i128;
            assert_eq!(num.rem_euclid(a as i128), 0, "twist is compatible with the lattice");
            Surface::OneCyl(OneCylSurface::canonicalize(l, h, num / a as i128))
        }
        Surface::TwoCyl(c) => {
            let u = c.u.map(|x| {
                assert_eq!(x % a, 0, "widths lie in the lattice");
                x / a
            });
            let h = c.h.map(|x| {
                assert_eq!(x % d, 0, "heights are multiples of h");
                x / d
            });
            let mut t = [0u64; 2];
            for i in 0..2 {
                let num = c.t[i] as i128 + b * h[i] as i128;
                assert_eq!(num.rem_euclid(a as i128), 0, "twist is compatible with the lattice");
                t[i] = (num / a as i128).rem_euclid(u[i] as i128) as u64;
            }
            Surface::TwoCyl(TwoCylSurface { h, u, t })
        }
    };
    (reduced, lam)
}

pub fn weierstrass(s: &Surface) -> Result<WeierstrassReport, SurfaceError> {
    Ok(to_origami(s).involution_fixed_points()?)
}

pub fn classify_type(s: &Surface) -> Result<SurfaceType, SurfaceError> {
    let n = s.area();
    if n % 2 == 0 {
        return Err(SurfaceError::EvenArea(n));
    }
    let report = weierstrass(s)?;
    SurfaceType::from_integer_count(report.integer_count()).ok_or(SurfaceError::Invariant(
        OrigamiError::Involution(report.integer_count()),
    ))
}
