//! Origamis as pairs of permutations `(right, up)` on the squares `0..n`.
//!
//! Permutations are stored as image arrays and composed right to left:
//! `(p ∘ q)[x] = p[q[x]]`.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::surfaces::{self, hnf_from_generators, LatticeHNF};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrigamiError {
    #[error("an origami needs at least one square")]
    Empty,
    #[error("right has {right} entries but up has {up}")]
    LengthMismatch { right: usize, up: usize },
    #[error("`{0}` is not a permutation of 0..n")]
    NotPermutation(&'static str),
    #[error("the origami is not a connected surface in H(2)")]
    NotInStratum,
    #[error("found {0} candidate involutions with six fixed points, expected exactly one")]
    Involution(usize),
    #[error("n = {0} is not an odd integer >= 3")]
    BadOrbitSize(u64),
    #[error("orbit search left the primitive set at a state with canonical form {0:?}")]
    LeftPrimitiveSet(CanonicalForm),
    #[error("an orbit mixes type A and type B members")]
    MixedOrbitType,
    #[error("state cap {cap} exceeded after visiting {visited} states")]
    StateCap {
        visited: usize,
        cap: usize,
        partial: Box<OrbitReport>,
    },
    #[error("malformed canonical encoding")]
    BadEncoding,
}

/// Generators of the SL(2,Z) action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// Horizontal shear `(1 1; 0 1)`.
    T,
    TInv,
    /// Vertical shear `(1 0; 1 1)`.
    TPrime,
    TPrimeInv,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::T,
        Generator::TInv,
        Generator::TPrime,
        Generator::TPrimeInv,
    ];

    /// The matrix acting on the plane, as `[[a, b], [c, d]]`.
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Generator::T => [[1, 1], [0, 1]],
            Generator::TInv => [[1, -1], [0, 1]],
            Generator::TPrime => [[1, 0], [1, 1]],
            Generator::TPrimeInv => [[1, 0], [-1, 1]],
        }
    }
}

/// Which pair of shears drives the orbit search. `Transposed` swaps the
/// roles of the horizontal and vertical shears; the partition is the same.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeneratorConvention {
    #[default]
    Standard,
    Transposed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SurfaceType {
    A,
    B,
}

impl SurfaceType {
    /// Type from the number of integer Weierstrass points.
    pub fn from_integer_count(count: usize) -> Option<Self> {
        match count {
            1 => Some(SurfaceType::A),
            3 => Some(SurfaceType::B),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SurfaceType::A => "A",
            SurfaceType::B => "B",
        }
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Origami {
    right: Vec<u32>,
    up: Vec<u32>,
}

fn check_perm(p: &[u32], name: &'static str) -> Result<(), OrigamiError> {
    let mut seen = vec![false; p.len()];
    for &x in p {
        let x = x as usize;
        if x >= p.len() || seen[x] {
            return Err(OrigamiError::NotPermutation(name));
        }
        seen[x] = true;
    }
    Ok(())
}

fn inverse(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

fn compose(p: &[u32], q: &[u32]) -> Vec<u32> {
    q.iter().map(|&x| p[x as usize]).collect()
}

impl Origami {
    /// Checks that both arrays are permutations of the same `0..n`.
    /// Connectedness is not required here; see [`Origami::is_transitive`].
    pub fn new(right: Vec<u32>, up: Vec<u32>) -> Result<Self, OrigamiError> {
        if right.len() != up.len() {
            return Err(OrigamiError::LengthMismatch {
                right: right.len(),
                up: up.len(),
            });
        }
        if right.is_empty() {
            return Err(OrigamiError::Empty);
        }
        check_perm(&right, "right")?;
        check_perm(&up, "up")?;
        Ok(Origami { right, up })
    }

    pub(crate) fn from_parts_unchecked(right: Vec<u32>, up: Vec<u32>) -> Self {
        debug_assert!(Origami::new(right.clone(), up.clone()).is_ok());
        Origami { right, up }
    }

    pub fn n(&self) -> usize {
        self.right.len()
    }

    pub fn right(&self) -> &[u32] {
        &self.right
    }

    pub fn up(&self) -> &[u32] {
        &self.up
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.n();
        let r_inv = inverse(&self.right);
        let u_inv = inverse(&self.up);
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(s) = stack.pop() {
            for p in [&self.right, &self.up, &r_inv, &u_inv] {
                let t = p[s] as usize;
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    stack.push(t);
                }
            }
        }
        count == n
    }

    /// `right ∘ up ∘ right⁻¹ ∘ up⁻¹`.
    pub fn commutator(&self) -> Vec<u32> {
        let r_inv = inverse(&self.right);
        let u_inv = inverse(&self.up);
        compose(&self.right, &compose(&self.up, &compose(&r_inv, &u_inv)))
    }

    /// Connected, and the commutator is one 3-cycle plus fixed points.
    pub fn validate_stratum(&self) -> bool {
        if !self.is_transitive() {
            return false;
        }
        let c = self.commutator();
        let mut seen = vec![false; c.len()];
        let mut three_cycles = 0;
        for start in 0..c.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = c[x] as usize;
                len += 1;
            }
            match len {
                1 => {}
                3 => three_cycles += 1,
                _ => return false,
            }
        }
        three_cycles == 1
    }

    pub fn act_generator(&self, g: Generator) -> Origami {
        let (right, up) = match g {
            Generator::T => (self.right.clone(), compose(&self.up, &inverse(&self.right))),
            Generator::TInv => (self.right.clone(), compose(&self.up, &self.right)),
            Generator::TPrime => (compose(&self.right, &inverse(&self.up)), self.up.clone()),
            Generator::TPrimeInv => (compose(&self.right, &self.up), self.up.clone()),
        };
        Origami { right, up }
    }

    /// Renames square `s` to `perm[s]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Origami, OrigamiError> {
        if perm.len() != self.n() {
            return Err(OrigamiError::LengthMismatch {
                right: self.n(),
                up: perm.len(),
            });
        }
        check_perm(perm, "relabeling")?;
        let n = self.n();
        let mut right = vec![0; n];
        let mut up = vec![0; n];
        for s in 0..n {
            right[perm[s] as usize] = perm[self.right[s] as usize];
            up[perm[s] as usize] = perm[self.up[s] as usize];
        }
        Ok(Origami { right, up })
    }

    /// BFS relabeling from `start` along (right, up), as `[n, right.., up..]`.
    /// `None` when `start` does not reach every square.
    fn bfs_code(&self, start: usize, order: &mut [u32], label: &mut [u32]) -> Option<Vec<u32>> {
        let n = self.n();
        const UNSEEN: u32 = u32::MAX;
        label.iter_mut().for_each(|l| *l = UNSEEN);
        label[start] = 0;
        order[0] = start as u32;
        let mut head = 0;
        let mut tail = 1;
        while head < tail {
            let s = order[head] as usize;
            head += 1;
            for p in [&self.right, &self.up] {
                let t = p[s] as usize;
                if label[t] == UNSEEN {
                    label[t] = tail as u32;
                    order[tail] = t as u32;
                    tail += 1;
                }
            }
        }
        if tail != n {
            return None;
        }
        let mut code = Vec::with_capacity(2 * n + 1);
        code.push(n as u32);
        code.extend(order.iter().map(|&s| label[self.right[s as usize] as usize]));
        code.extend(order.iter().map(|&s| label[self.up[s as usize] as usize]));
        Some(code)
    }

    /// Least BFS encoding over all start squares.
    ///
    /// Panics if the origami is not transitive.
    pub fn canonical_form(&self) -> CanonicalForm {
        let n = self.n();
        let mut order = vec![0u32; n];
        let mut label = vec![0u32; n];
        let mut best: Option<Vec<u32>> = None;
        for start in 0..n {
            let code = self
                .bfs_code(start, &mut order, &mut label)
                .expect("canonical_form needs a transitive origami");
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        let mut bytes = Vec::with_capacity(4 * (2 * n + 1));
        for w in best.expect("n >= 1") {
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        CanonicalForm(bytes)
    }

    /// The same origami relabeled so its encoding is the canonical one.
    pub fn canonicalize(&self) -> Origami {
        self.canonical_form()
            .to_origami()
            .expect("canonical encodings decode")
    }

    /// Position of each square in the plane after developing along a BFS
    /// tree from square 0. Squares out of reach of 0 stay at `None`.
    pub fn developed_positions(&self) -> Vec<Option<(i64, i64)>> {
        let n = self.n();
        let r_inv = inverse(&self.right);
        let u_inv = inverse(&self.up);
        let mut pos = vec![None; n];
        pos[0] = Some((0, 0));
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let (x, y) = pos[s].expect("queued squares are placed");
            let steps = [
                (self.right[s], (1, 0)),
                (self.up[s], (0, 1)),
                (r_inv[s], (-1, 0)),
                (u_inv[s], (0, -1)),
            ];
            for (t, (dx, dy)) in steps {
                let t = t as usize;
                if pos[t].is_none() {
                    pos[t] = Some((x + dx, y + dy));
                    queue.push_back(t);
                }
            }
        }
        pos
    }

    /// Lattice generated by the periods of closed paths, in HNF.
    /// `None` when the origami is not transitive.
    pub fn period_lattice(&self) -> Option<LatticeHNF> {
        let pos = self.developed_positions();
        let mut defects = Vec::new();
        for s in 0..self.n() {
            let (x, y) = pos[s]?;
            let (rx, ry) = pos[self.right[s] as usize]?;
            let (ux, uy) = pos[self.up[s] as usize]?;
            defects.push((x + 1 - rx, y - ry));
            defects.push((x - ux, y + 1 - uy));
        }
        hnf_from_generators(&defects)
    }

    pub fn is_primitive(&self) -> bool {
        self.period_lattice() == Some(LatticeHNF::UNIT)
    }

    /// Propagates `φ(0) = seed` through `φ∘right = right⁻¹∘φ` and
    /// `φ∘up = up⁻¹∘φ`; `None` on contradiction.
    fn propagate(&self, seed: u32, r_inv: &[u32], u_inv: &[u32]) -> Option<Vec<u32>> {
        let n = self.n();
        const UNSET: u32 = u32::MAX;
        let mut phi = vec![UNSET; n];
        phi[0] = seed;
        let mut stack = vec![0usize];
        while let Some(s) = stack.pop() {
            let f = phi[s] as usize;
            let rules = [
                (self.right[s], r_inv[f]),
                (self.up[s], u_inv[f]),
                (r_inv[s], self.right[f]),
                (u_inv[s], self.up[f]),
            ];
            for (t, image) in rules {
                let t = t as usize;
                if phi[t] == UNSET {
                    phi[t] = image;
                    stack.push(t);
                } else if phi[t] != image {
                    return None;
                }
            }
        }
        if phi.contains(&UNSET) {
            return None;
        }
        check_perm(&phi, "phi").ok()?;
        Some(phi)
    }

    /// Fixed points of the hyperelliptic involution induced by `-Id`.
    pub fn involution_fixed_points(&self) -> Result<WeierstrassReport, OrigamiError> {
        if !self.validate_stratum() {
            return Err(OrigamiError::NotInStratum);
        }
        let n = self.n();
        let r_inv = inverse(&self.right);
        let u_inv = inverse(&self.up);
        let pos = self.developed_positions();

        // Vertex classes of bottom-left corners.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for x in 0..n {
            let a = self.up[self.right[x] as usize] as usize;
            let b = self.right[self.up[x] as usize] as usize;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let class: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();

        let mut reports = Vec::new();
        for seed in 0..n as u32 {
            let Some(phi) = self.propagate(seed, &r_inv, &u_inv) else {
                continue;
            };
            if (0..n).any(|s| phi[phi[s] as usize] as usize != s) {
                continue;
            }
            let mut points = Vec::new();
            let at = |s: usize, dx: i64, dy: i64| {
                let (x, y) = pos[s].expect("transitive");
                (2 * x + dx, 2 * y + dy)
            };
            for s in 0..n {
                let f = phi[s] as usize;
                if f == s {
                    points.push(WeierstrassPoint::new(PointKind::Center, s, at(s, 1, 1)));
                }
                if f == self.right[s] as usize {
                    points.push(WeierstrassPoint::new(PointKind::VerticalEdge, s, at(s, 2, 1)));
                }
                if f == self.up[s] as usize {
                    points.push(WeierstrassPoint::new(PointKind::HorizontalEdge, s, at(s, 1, 2)));
                }
            }
            let mut vertex_classes = BTreeSet::new();
            for s in 0..n {
                if class[s] == s {
                    let f = phi[s] as usize;
                    let image = self.up[self.right[f] as usize] as usize;
                    if class[image] == s {
                        vertex_classes.insert(s);
                    }
                }
            }
            for s in vertex_classes {
                points.push(WeierstrassPoint::new(PointKind::Vertex, s, at(s, 0, 0)));
            }
            if points.len() == 6 {
                reports.push(WeierstrassReport::new(phi, points));
            }
        }
        if reports.len() != 1 {
            return Err(OrigamiError::Involution(reports.len()));
        }
        Ok(reports.pop().expect("one report"))
    }

    pub fn surface_type(&self) -> Result<Option<SurfaceType>, OrigamiError> {
        let report = self.involution_fixed_points()?;
        Ok(SurfaceType::from_integer_count(report.integer_count()))
    }
}

/// Relabeling-invariant byte encoding: big-endian `u32` words
/// `[n, right.., up..]` of the least BFS relabeling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        CanonicalForm(bytes)
    }

    pub fn to_origami(&self) -> Result<Origami, OrigamiError> {
        if self.0.len() % 4 != 0 {
            return Err(OrigamiError::BadEncoding);
        }
        let words: Vec<u32> = self
            .0
            .chunks_exact(4)
            .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        let n = *words.first().ok_or(OrigamiError::BadEncoding)? as usize;
        if words.len() != 2 * n + 1 {
            return Err(OrigamiError::BadEncoding);
        }
        Origami::new(words[1..=n].to_vec(), words[n + 1..].to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointKind {
    Center,
    VerticalEdge,
    HorizontalEdge,
    Vertex,
}

impl PointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PointKind::Center => "center",
            PointKind::VerticalEdge => "vertical_edge",
            PointKind::HorizontalEdge => "horizontal_edge",
            PointKind::Vertex => "vertex",
        }
    }
}

/// One Weierstrass point. `doubled` is twice its position in the
/// development from square 0, so integer points have even coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeierstrassPoint {
    pub kind: PointKind,
    pub square: u32,
    pub doubled: (i64, i64),
    pub integer: bool,
}

impl WeierstrassPoint {
    fn new(kind: PointKind, square: usize, doubled: (i64, i64)) -> Self {
        WeierstrassPoint {
            kind,
            square: square as u32,
            doubled,
            integer: kind == PointKind::Vertex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassReport {
    involution: Vec<u32>,
    points: Vec<WeierstrassPoint>,
}

impl WeierstrassReport {
    fn new(involution: Vec<u32>, mut points: Vec<WeierstrassPoint>) -> Self {
        points.sort();
        WeierstrassReport { involution, points }
    }

    /// The involution as a permutation of squares.
    pub fn involution(&self) -> &[u32] {
        &self.involution
    }

    pub fn points(&self) -> &[WeierstrassPoint] {
        &self.points
    }

    pub fn integer_count(&self) -> usize {
        self.points.iter().filter(|p| p.integer).count()
    }

    pub fn count_of(&self, kind: PointKind) -> usize {
        self.points.iter().filter(|p| p.kind == kind).count()
    }
}

/// All primitive H(2) origamis with `n` squares, one per isomorphism
/// class, each in canonical labeling and sorted by canonical form.
pub fn primitive_origamis(n: u64) -> Vec<Origami> {
    primitive_map(n).into_values().collect()
}

fn primitive_map(n: u64) -> BTreeMap<CanonicalForm, Origami> {
    let Ok(all) = surfaces::enumerate_all(n) else {
        return BTreeMap::new();
    };
    all.iter()
        .filter(|s| surfaces::is_primitive(s))
        .map(|s| {
            let cf = surfaces::to_origami(s).canonical_form();
            let o = cf.to_origami().expect("canonical encodings decode");
            (cf, o)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Member with the least canonical form, in canonical labeling.
    pub representative: Origami,
    pub size: usize,
    pub surface_type: SurfaceType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub n: u64,
    /// Sorted by decreasing size, then representative.
    pub orbits: Vec<Orbit>,
}

impl OrbitReport {
    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.size).collect()
    }

    pub fn total(&self) -> usize {
        self.orbits.iter().map(|o| o.size).sum()
    }
}

pub const DEFAULT_MAX_STATES: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitOptions {
    pub max_states: usize,
    pub convention: GeneratorConvention,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            max_states: DEFAULT_MAX_STATES,
            convention: GeneratorConvention::Standard,
        }
    }
}

pub fn orbit_decomposition(n: u64) -> Result<OrbitReport, OrigamiError> {
    orbit_decomposition_with(n, OrbitOptions::default())
}

/// Partitions the primitive `n`-square origamis into SL(2,Z) orbits by BFS
/// over canonical forms.
pub fn orbit_decomposition_with(n: u64, options: OrbitOptions) -> Result<OrbitReport, OrigamiError> {
    if n < 3 || n % 2 == 0 {
        return Err(OrigamiError::BadOrbitSize(n));
    }
    let generators: [Generator; 4] = match options.convention {
        GeneratorConvention::Standard => Generator::ALL,
        GeneratorConvention::Transposed => [
            Generator::TPrime,
            Generator::TPrimeInv,
            Generator::T,
            Generator::TInv,
        ],
    };
    let primitive = primitive_map(n);
    let mut visited: BTreeSet<CanonicalForm> = BTreeSet::new();
    let mut orbits = Vec::new();

    let finish = |mut orbits: Vec<Orbit>| {
        orbits.sort_by(|a: &Orbit, b: &Orbit| {
            b.size
                .cmp(&a.size)
                .then_with(|| a.representative.canonical_form().cmp(&b.representative.canonical_form()))
        });
        OrbitReport { n, orbits }
    };

    for (seed_cf, seed) in &primitive {
        if visited.contains(seed_cf) {
            continue;
        }
        visited.insert(seed_cf.clone());
        let mut members = vec![seed_cf.clone()];
        let mut queue = VecDeque::from([seed.clone()]);
        let mut surface_type = None;
        while let Some(o) = queue.pop_front() {
            let ty = o
                .surface_type()?
                .ok_or(OrigamiError::NotInStratum)?;
            match surface_type {
                None => surface_type = Some(ty),
                Some(t) if t != ty => return Err(OrigamiError::MixedOrbitType),
                _ => {}
            }
            for g in generators {
                let image = o.act_generator(g);
                let cf = image.canonical_form();
                if visited.contains(&cf) {
                    continue;
                }
                if !primitive.contains_key(&cf) {
                    return Err(OrigamiError::LeftPrimitiveSet(cf));
                }
                if visited.len() >= options.max_states {
                    let visited_count = visited.len();
                    let mut partial = orbits.clone();
                    let representative = members
                        .iter()
                        .min()
                        .expect("non-empty")
                        .to_origami()
                        .expect("canonical encodings decode");
                    partial.push(Orbit {
                        representative,
                        size: members.len(),
                        surface_type: surface_type.expect("set above"),
                    });
                    return Err(OrigamiError::StateCap {
                        visited: visited_count,
                        cap: options.max_states,
                        partial: Box::new(finish(partial)),
                    });
                }
                visited.insert(cf.clone());
                members.push(cf);
                queue.push_back(image);
            }
        }
        let representative = members
            .iter()
            .min()
            .expect("non-empty")
            .to_origami()
            .expect("canonical encodings decode");
        orbits.push(Orbit {
            representative,
            size: members.len(),
            surface_type: surface_type.expect("orbit has a member"),
        });
    }
    Ok(finish(orbits))
}
