//! Arithmetic in `G = Z_p^2 x Z_q`.
//!
//! Elements are addressed by the fixed index `(u1 * p + u2) * q + v`. Every
//! bit vector, file and report in the crate uses that order. Characters are
//! not a separate type: the element `(a, b)` names the character
//! `(u, v) -> e(<u, a> / p) * e(v * b / q)`, and [`GroupSpec::char_exponents`]
//! returns the pair of exponents of that value.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported group order. Subsets are stored as fixed-width bit vectors.
pub const MAX_ORDER: usize = 256;
const WORDS: usize = MAX_ORDER / 64;

pub(crate) fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// The pair of distinct primes defining `Z_p^2 x Z_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct GroupSpec {
    p: u32,
    q: u32,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    p: u64,
    q: u64,
}

impl TryFrom<RawSpec> for GroupSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        GroupSpec::new(raw.p, raw.q)
    }
}

impl From<GroupSpec> for RawSpec {
    fn from(spec: GroupSpec) -> Self {
        RawSpec {
            p: spec.p as u64,
            q: spec.q as u64,
        }
    }
}

impl GroupSpec {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        for x in [p, q] {
            if !is_prime(x) {
                return Err(Error::NotPrime(x));
            }
        }
        if p == q {
            return Err(Error::EqualPrimes(p));
        }
        let n = p
            .checked_mul(p)
            .and_then(|pp| pp.checked_mul(q))
            .unwrap_or(u64::MAX);
        if n > MAX_ORDER as u64 {
            return Err(Error::GroupTooLarge {
                order: n,
                max: MAX_ORDER,
            });
        }
        Ok(GroupSpec {
            p: p as u32,
            q: q as u32,
            n: n as u32,
        })
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p as usize
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q as usize
    }

    /// `|G| = p^2 q`.
    #[inline]
    pub fn order(&self) -> usize {
        self.n as usize
    }

    pub fn contains(&self, e: Element) -> bool {
        e.u1 < self.p && e.u2 < self.p && e.v < self.q
    }

    #[inline]
    pub fn index(&self, e: Element) -> usize {
        debug_assert!(self.contains(e));
        ((e.u1 * self.p + e.u2) * self.q + e.v) as usize
    }

    #[inline]
    pub fn element(&self, index: usize) -> Element {
        debug_assert!(index < self.order());
        let index = index as u32;
        let v = index % self.q;
        let u = index / self.q;
        Element {
            u1: u / self.p,
            u2: u % self.p,
            v,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn add(&self, g: Element, h: Element) -> Element {
        Element {
            u1: (g.u1 + h.u1) % self.p,
            u2: (g.u2 + h.u2) % self.p,
            v: (g.v + h.v) % self.q,
        }
    }

    pub fn neg(&self, g: Element) -> Element {
        Element {
            u1: (self.p - g.u1) % self.p,
            u2: (self.p - g.u2) % self.p,
            v: (self.q - g.v) % self.q,
        }
    }

    pub fn sub(&self, g: Element, h: Element) -> Element {
        self.add(g, self.neg(h))
    }

    /// `k * g`.
    pub fn scale(&self, k: u32, g: Element) -> Element {
        let kp = k % self.p;
        let kq = k % self.q;
        Element {
            u1: kp * g.u1 % self.p,
            u2: kp * g.u2 % self.p,
            v: kq * g.v % self.q,
        }
    }

    /// Element order, one of `1, p, q, pq`.
    pub fn order_of(&self, g: Element) -> usize {
        match (g.u1 != 0 || g.u2 != 0, g.v != 0) {
            (false, false) => 1,
            (true, false) => self.p(),
            (false, true) => self.q(),
            (true, true) => self.p() * self.q(),
        }
    }

    /// `<u, a>` over `Z_p`.
    pub fn inner_p(&self, u: [u32; 2], a: [u32; 2]) -> u32 {
        (u[0] * a[0] + u[1] * a[1]) % self.p
    }

    /// Exponents `(j, k)` such that `chi(g) = zeta_p^j * zeta_q^k`.
    pub fn char_exponents(&self, chi: Element, g: Element) -> (u32, u32) {
        (self.inner_p(g.u(), chi.u()), g.v * chi.v % self.q)
    }

    /// `|GL(2, p)| * (q - 1) * |G|`.
    pub fn affine_group_size(&self) -> u64 {
        let p = self.p as u64;
        let q = self.q as u64;
        (p * p - 1) * (p * p - p) * (q - 1) * self.n as u64
    }

    /// All invertible 2x2 matrices over `Z_p`, lexicographic in their entries.
    pub fn gl2(&self) -> Vec<[[u32; 2]; 2]> {
        let p = self.p;
        let mut out = Vec::new();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d + p * p - b * c) % p != 0 {
                            out.push([[a, b], [c, d]]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Every affine map `x -> (A u, r v) + t`, provided the group of them is
    /// no larger than `cap`.
    pub fn enumerate_affine_maps(&self, cap: u64) -> Result<impl Iterator<Item = AffineMap> + '_> {
        let size = self.affine_group_size();
        if size > cap {
            return Err(Error::SymmetryGroupTooLarge { size, cap });
        }
        let mats = self.gl2();
        Ok(mats.into_iter().flat_map(move |matrix| {
            (1..self.q).flat_map(move |unit| {
                self.elements().map(move |shift| AffineMap {
                    matrix,
                    unit,
                    shift,
                })
            })
        }))
    }

    pub fn apply_map_element(&self, m: &AffineMap, g: Element) -> Element {
        let [[a, b], [c, d]] = m.matrix;
        Element {
            u1: (a * g.u1 + b * g.u2 + m.shift.u1) % self.p,
            u2: (c * g.u1 + d * g.u2 + m.shift.u2) % self.p,
            v: (m.unit * g.v + m.shift.v) % self.q,
        }
    }

    pub fn apply_map(&self, m: &AffineMap, s: &SubsetMask) -> SubsetMask {
        SubsetMask::from_indices(
            self.order(),
            s.iter()
                .map(|i| self.index(self.apply_map_element(m, self.element(i)))),
        )
    }

    /// The multiples of `g`.
    pub fn cyclic_subgroup(&self, g: Element) -> SubsetMask {
        let mut out = SubsetMask::empty(self.order());
        let mut x = Element::ZERO;
        loop {
            out.insert(self.index(x));
            x = self.add(x, g);
            if x == Element::ZERO {
                return out;
            }
        }
    }

    /// The subgroup generated by `gens`.
    pub fn span(&self, gens: &[Element]) -> SubsetMask {
        let mut out = SubsetMask::singleton(self.order(), 0);
        for &g in gens {
            let cyc = self.cyclic_subgroup(g);
            let mut next = SubsetMask::empty(self.order());
            for x in out.iter() {
                for y in cyc.iter() {
                    next.insert(self.index(self.add(self.element(x), self.element(y))));
                }
            }
            out = next;
        }
        out
    }

    /// `Z_p^2` embedded as `u -> (u, 0)`.
    pub fn p_plane(&self) -> SubsetMask {
        self.span(&[Element::new(1, 0, 0), Element::new(0, 1, 0)])
    }

    /// `Z_q` embedded as `v -> (0, v)`.
    pub fn q_line(&self) -> SubsetMask {
        self.cyclic_subgroup(Element::new(0, 0, 1))
    }

    pub fn is_subgroup(&self, s: &SubsetMask) -> bool {
        if !s.contains(0) {
            return false;
        }
        s.iter().all(|i| {
            let x = self.element(i);
            s.iter()
                .all(|j| s.contains(self.index(self.add(x, self.element(j)))))
        })
    }

    /// All subgroups of `G`, each once. There are `2 (p + 3)` of them.
    pub fn subgroups(&self) -> Vec<SubsetMask> {
        let mut p_parts: Vec<Vec<Element>> = vec![vec![]];
        for c in 0..self.p {
            p_parts.push(vec![Element::new(1, c, 0)]);
        }
        p_parts.push(vec![Element::new(0, 1, 0)]);
        p_parts.push(vec![Element::new(1, 0, 0), Element::new(0, 1, 0)]);
        let q_parts: [Vec<Element>; 2] = [vec![], vec![Element::new(0, 0, 1)]];
        let mut out = Vec::new();
        for pp in &p_parts {
            for qp in &q_parts {
                let gens: Vec<Element> = pp.iter().chain(qp.iter()).copied().collect();
                out.push(self.span(&gens));
            }
        }
        out
    }

    /// Characters trivial on every element of `s`.
    pub fn annihilator(&self, s: &SubsetMask) -> SubsetMask {
        SubsetMask::from_indices(
            self.order(),
            self.elements()
                .filter(|&chi| {
                    s.iter()
                        .all(|g| self.char_exponents(chi, self.element(g)) == (0, 0))
                })
                .map(|chi| self.index(chi)),
        )
    }

    pub fn translate(&self, s: &SubsetMask, g: Element) -> SubsetMask {
        SubsetMask::from_indices(
            self.order(),
            s.iter().map(|i| self.index(self.add(self.element(i), g))),
        )
    }

    /// `counts[d] = #{(s, s') : s - s' = d}`.
    pub fn difference_multiset(&self, s: &SubsetMask) -> Multiset {
        let mut m = Multiset::zero(self.order());
        for i in s.iter() {
            for j in s.iter() {
                m.add(self.index(self.sub(self.element(i), self.element(j))), 1);
            }
        }
        m
    }

    /// `S - S` as a set.
    pub fn difference_set(&self, s: &SubsetMask) -> SubsetMask {
        self.difference_multiset(s).support()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}^2 x Z_{} (order {})", self.p, self.q, self.n)
    }
}

/// A point `((u1, u2), v)` of `G`; also a character index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element {
    pub u1: u32,
    pub u2: u32,
    pub v: u32,
}

impl Element {
    pub const ZERO: Element = Element { u1: 0, u2: 0, v: 0 };

    pub const fn new(u1: u32, u2: u32, v: u32) -> Self {
        Element { u1, u2, v }
    }

    /// The `Z_p^2` component.
    pub fn u(&self) -> [u32; 2] {
        [self.u1, self.u2]
    }

    pub fn is_zero(&self) -> bool {
        *self == Element::ZERO
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({},{}),{})", self.u1, self.u2, self.v)
    }
}

/// `x -> (A u, r v) + t` with `A` in `GL(2, p)` and `r` a unit mod `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub matrix: [[u32; 2]; 2],
    pub unit: u32,
    pub shift: Element,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        matrix: [[1, 0], [0, 1]],
        unit: 1,
        shift: Element::ZERO,
    };
}

/// A subset of `G` as a fixed-width bit vector.
///
/// The total order sorts sets by their membership strings read from index 0,
/// with membership before non-membership. For sets of equal size this is the
/// lexicographic order on sorted index lists, and the least element of any
/// translation orbit of a nonempty set contains 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    words: [u64; WORDS],
    n: u16,
    card: u16,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_ORDER);
        SubsetMask {
            words: [0; WORDS],
            n: n as u16,
            card: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for w in 0..WORDS {
            let lo = w * 64;
            if n > lo {
                let bits = (n - lo).min(64);
                s.words[w] = if bits == 64 { !0 } else { (1u64 << bits) - 1 };
            }
        }
        s.card = n as u16;
        s
    }

    pub fn singleton(n: usize, i: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(i);
        s
    }

    /// Low `n` bits of `bits` as a subset; requires `n <= 64`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(n <= 64);
        let mut s = Self::empty(n);
        s.words[0] = if n == 64 {
            bits
        } else {
            bits & ((1u64 << n) - 1)
        };
        s.card = s.words[0].count_ones() as u16;
        s
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Size of the ambient group.
    #[inline]
    pub fn universe(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.card as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.n as usize && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Returns whether `i` was newly inserted.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.n as usize, "index {i} out of range");
        let bit = 1u64 << (i % 64);
        let w = &mut self.words[i / 64];
        if *w & bit == 0 {
            *w |= bit;
            self.card += 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn remove(&mut self, i: usize) -> bool {
        if !self.contains(i) {
            return false;
        }
        self.words[i / 64] &= !(1u64 << (i % 64));
        self.card -= 1;
        true
    }

    pub fn iter(&self) -> Indices<'_> {
        Indices {
            words: &self.words,
            word: 0,
            cur: self.words[0],
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Least index not in the set.
    pub fn first_absent(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            let free = !word;
            if free != 0 {
                let i = w * 64 + free.trailing_zeros() as usize;
                return (i < self.n as usize).then_some(i);
            }
        }
        None
    }

    fn from_words(n: u16, words: [u64; WORDS]) -> Self {
        let card = words.iter().map(|w| w.count_ones()).sum::<u32>() as u16;
        SubsetMask { words, n, card }
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut words = [0; WORDS];
        for (w, out) in words.iter_mut().enumerate() {
            *out = f(self.words[w], other.words[w]);
        }
        Self::from_words(self.n, words)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        Self::full(self.n as usize).difference(self)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    /// Number of members with index strictly above `i`.
    pub fn count_above(&self, i: usize) -> usize {
        let w = i / 64;
        let b = i % 64;
        let head = if b == 63 {
            0
        } else {
            (self.words[w] >> (b + 1)).count_ones()
        };
        let tail: u32 = self.words[w + 1..].iter().map(|x| x.count_ones()).sum();
        (head + tail) as usize
    }

    /// Members with index strictly above `i`.
    pub fn above(&self, i: usize) -> Self {
        let mut words = self.words;
        let w = i / 64;
        for x in &mut words[..w] {
            *x = 0;
        }
        let b = i % 64;
        words[w] &= if b == 63 { 0 } else { !0u64 << (b + 1) };
        Self::from_words(self.n, words)
    }

    pub fn to_multiset(&self) -> Multiset {
        let mut m = Multiset::zero(self.universe());
        for i in self.iter() {
            m.add(i, 1);
        }
        m
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        for w in 0..WORDS {
            let x = self.words[w] ^ other.words[w];
            if x != 0 {
                let bit = x & x.wrapping_neg();
                return if self.words[w] & bit != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.n.cmp(&other.n)
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Indices<'a> {
    words: &'a [u64; WORDS],
    word: usize,
    cur: u64,
}

impl Iterator for Indices<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.word * 64 + t);
            }
            self.word += 1;
            if self.word >= WORDS {
                return None;
            }
            self.cur = self.words[self.word];
        }
    }
}

/// Nonnegative multiplicities over `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multiset {
    counts: Vec<u64>,
    total: u64,
}

impl Multiset {
    pub fn zero(n: usize) -> Self {
        Multiset {
            counts: vec![0; n],
            total: 0,
        }
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        let total = counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .expect("multiset total overflow");
        Multiset { counts, total }
    }

    /// Adds `k` copies of element `i`.
    pub fn add(&mut self, i: usize, k: u64) {
        self.counts[i] = self.counts[i]
            .checked_add(k)
            .expect("multiset count overflow");
        self.total = self.total.checked_add(k).expect("multiset total overflow");
    }

    #[inline]
    pub fn count(&self, i: usize) -> u64 {
        self.counts[i]
    }

    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn universe(&self) -> usize {
        self.counts.len()
    }

    pub fn support(&self) -> SubsetMask {
        SubsetMask::from_indices(
            self.counts.len(),
            self.counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, _)| i),
        )
    }

    /// Nonzero entries as `(index, count)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i, c))
    }

    pub fn is_constant(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }

    pub fn merge(&mut self, other: &Multiset) {
        for (i, c) in other.entries() {
            self.add(i, c);
        }
    }
}

/// Index-level tables for the hot paths of the searches.
#[derive(Debug, Clone)]
pub struct Group {
    spec: GroupSpec,
    add: Vec<u16>,
    neg: Vec<u16>,
    /// `j * q + k` for the character pairing.
    pairing: Vec<u16>,
}

impl Group {
    pub fn new(spec: GroupSpec) -> Self {
        let n = spec.order();
        let mut add = vec![0u16; n * n];
        let mut pairing = vec![0u16; n * n];
        for i in 0..n {
            let x = spec.element(i);
            for j in 0..n {
                let y = spec.element(j);
                add[i * n + j] = spec.index(spec.add(x, y)) as u16;
                let (a, b) = spec.char_exponents(x, y);
                pairing[i * n + j] = (a as usize * spec.q() + b as usize) as u16;
            }
        }
        let neg = (0..n)
            .map(|i| spec.index(spec.neg(spec.element(i))) as u16)
            .collect();
        Group {
            spec,
            add,
            neg,
            pairing,
        }
    }

    pub fn from_primes(p: u64, q: u64) -> Result<Self> {
        GroupSpec::new(p, q).map(Self::new)
    }

    #[inline]
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.spec.order()
    }

    #[inline]
    pub fn add_idx(&self, i: usize, j: usize) -> usize {
        self.add[i * self.order() + j] as usize
    }

    #[inline]
    pub fn neg_idx(&self, i: usize) -> usize {
        self.neg[i] as usize
    }

    #[inline]
    pub fn sub_idx(&self, i: usize, j: usize) -> usize {
        self.add_idx(i, self.neg_idx(j))
    }

    /// Flattened exponent `j * q + k` of `chi(g)`.
    #[inline]
    pub fn pairing_idx(&self, chi: usize, g: usize) -> usize {
        self.pairing[chi * self.order() + g] as usize
    }

    pub fn translate(&self, s: &SubsetMask, g: usize) -> SubsetMask {
        let mut out = SubsetMask::empty(self.order());
        for i in s.iter() {
            out.insert(self.add_idx(i, g));
        }
        out
    }

    pub fn difference_set(&self, s: &SubsetMask) -> SubsetMask {
        let mut out = SubsetMask::empty(self.order());
        for i in s.iter() {
            for j in s.iter() {
                out.insert(self.sub_idx(i, j));
            }
        }
        out
    }
}

impl std::ops::Deref for Group {
    type Target = GroupSpec;

    fn deref(&self) -> &GroupSpec {
        &self.spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, q: u64) -> GroupSpec {
        GroupSpec::new(p, q).unwrap()
    }

    #[test]
    fn make_group_examples() {
        assert_eq!(g(2, 3).order(), 12);
        assert_eq!(g(3, 2).order(), 18);
        assert_eq!(GroupSpec::new(4, 3), Err(Error::NotPrime(4)));
        assert_eq!(GroupSpec::new(3, 1), Err(Error::NotPrime(1)));
        assert_eq!(GroupSpec::new(5, 5), Err(Error::EqualPrimes(5)));
        assert!(matches!(
            GroupSpec::new(11, 3),
            Err(Error::GroupTooLarge { order: 363, .. })
        ));
    }

    #[test]
    fn add_and_neg() {
        let s = g(3, 2);
        assert_eq!(
            s.add(Element::new(1, 2, 1), Element::new(2, 2, 1)),
            Element::new(0, 1, 0)
        );
        assert_eq!(s.neg(Element::ZERO), Element::ZERO);
        assert_eq!(s.neg(Element::new(1, 0, 1)), Element::new(2, 0, 1));
        for x in s.elements() {
            assert_eq!(s.add(s.neg(x), x), Element::ZERO);
        }
    }

    #[test]
    fn index_round_trip() {
        for (p, q) in [(2, 3), (3, 2), (5, 2), (2, 7)] {
            let s = g(p, q);
            for i in 0..s.order() {
                assert_eq!(s.index(s.element(i)), i);
            }
        }
        let s = g(3, 2);
        assert_eq!(s.index(Element::new(1, 2, 1)), (3 + 2) * 2 + 1);
    }

    #[test]
    fn element_orders() {
        let s = g(3, 2);
        assert_eq!(s.order_of(Element::ZERO), 1);
        assert_eq!(s.order_of(Element::new(1, 0, 0)), 3);
        assert_eq!(s.order_of(Element::new(1, 2, 1)), 6);
        assert_eq!(s.order_of(Element::new(0, 0, 1)), 2);
        for x in s.elements() {
            let k = s.order_of(x);
            let mut y = Element::ZERO;
            for step in 1..=k {
                y = s.add(y, x);
                assert_eq!(y == Element::ZERO, step == k);
            }
        }
    }

    #[test]
    fn order_classes_partition() {
        for (p, q) in [(2usize, 3usize), (3, 2), (5, 3)] {
            let s = g(p as u64, q as u64);
            let mut sizes = std::collections::BTreeMap::new();
            for x in s.elements() {
                *sizes.entry(s.order_of(x)).or_insert(0usize) += 1;
            }
            assert_eq!(sizes[&1], 1);
            assert_eq!(sizes[&p], p * p - 1);
            assert_eq!(sizes[&q], q - 1);
            assert_eq!(sizes[&(p * q)], (p * p - 1) * (q - 1));
        }
    }

    #[test]
    fn inner_product() {
        let s = g(5, 2);
        assert_eq!(s.inner_p([1, 2], [3, 1]), 0);
        assert_eq!(s.inner_p([0, 0], [4, 4]), 0);
        assert_eq!(s.inner_p([1, 1], [1, 1]), 2);
    }

    #[test]
    fn character_exponents() {
        let s = g(3, 2);
        assert_eq!(
            s.char_exponents(Element::new(1, 0, 1), Element::new(1, 2, 1)),
            (1, 1)
        );
        for x in s.elements() {
            assert_eq!(s.char_exponents(Element::ZERO, x), (0, 0));
        }
        assert_eq!(
            s.char_exponents(Element::new(1, 1, 0), Element::new(2, 1, 1)),
            (0, 0)
        );
        for x in s.elements() {
            for y in s.elements() {
                assert_eq!(s.char_exponents(x, y), s.char_exponents(y, x));
            }
        }
    }

    #[test]
    fn subgroups_generated() {
        let s = g(2, 3);
        assert_eq!(s.cyclic_subgroup(Element::ZERO).to_vec(), vec![0]);
        let c = s.cyclic_subgroup(Element::new(1, 0, 1));
        assert_eq!(c.len(), 6);
        assert!(s.is_subgroup(&c));
        let plane = s.span(&[Element::new(1, 0, 0), Element::new(0, 1, 0)]);
        assert_eq!(plane.len(), 4);
        assert!(plane.iter().all(|i| s.element(i).v == 0));
        assert_eq!(s.q_line().len(), 3);
    }

    #[test]
    fn subgroup_list() {
        for (p, q) in [(2, 3), (3, 2), (5, 2)] {
            let s = g(p, q);
            let subs = s.subgroups();
            assert_eq!(subs.len(), 2 * (p as usize + 3));
            let distinct: std::collections::HashSet<_> = subs.iter().collect();
            assert_eq!(distinct.len(), subs.len());
            for h in &subs {
                assert!(s.is_subgroup(h));
            }
            // brute force: every set generated by two elements appears
            for x in s.elements() {
                for y in s.elements() {
                    assert!(subs.contains(&s.span(&[x, y])));
                }
            }
        }
    }

    #[test]
    fn difference_multisets() {
        let s = g(2, 3);
        let d = s.difference_multiset(&SubsetMask::singleton(12, 0));
        assert_eq!(d.entries().collect::<Vec<_>>(), vec![(0, 1)]);
        let x = s.index(Element::new(1, 0, 0));
        let d = s.difference_multiset(&SubsetMask::from_indices(12, [0, x]));
        assert_eq!(d.entries().collect::<Vec<_>>(), vec![(0, 2), (x, 2)]);
        let d = s.difference_multiset(&SubsetMask::full(12));
        assert!(d.counts().iter().all(|&c| c == 12));
        assert_eq!(d.total(), 144);
    }

    #[test]
    fn gl2_sizes() {
        // independent count: a pair of rows is invertible iff the second row
        // avoids the span of a nonzero first row
        for p in [2u64, 3, 5, 7] {
            let s = g(p, if p == 2 { 3 } else { 2 });
            let mut count = 0;
            for r1 in 1..p * p {
                let (a, b) = (r1 / p, r1 % p);
                let line: std::collections::HashSet<_> =
                    (0..p).map(|k| (k * a % p, k * b % p)).collect();
                count += (0..p * p)
                    .filter(|r2| !line.contains(&(r2 / p, r2 % p)))
                    .count();
            }
            assert_eq!(s.gl2().len(), count);
        }
        assert_eq!(g(2, 3).gl2().len(), 6);
        assert_eq!(g(3, 2).gl2().len(), 48);
    }

    #[test]
    fn affine_enumeration() {
        let s = g(2, 3);
        assert_eq!(s.enumerate_affine_maps(u64::MAX).unwrap().count(), 144);
        let s = g(3, 2);
        assert_eq!(s.enumerate_affine_maps(u64::MAX).unwrap().count(), 864);
        assert!(matches!(
            s.enumerate_affine_maps(100),
            Err(Error::SymmetryGroupTooLarge {
                size: 864,
                cap: 100
            })
        ));
        let set = SubsetMask::from_indices(18, [0, 3, 7, 11]);
        assert_eq!(s.apply_map(&AffineMap::IDENTITY, &set), set);
    }

    #[test]
    fn affine_maps_commute_with_differences() {
        let s = g(3, 2);
        let set = SubsetMask::from_indices(18, [0, 4, 9, 13]);
        for m in s.enumerate_affine_maps(u64::MAX).unwrap() {
            let img = s.apply_map(&m, &set);
            assert_eq!(img.len(), set.len());
            if m.shift.is_zero() {
                assert_eq!(
                    s.apply_map(&m, &s.difference_set(&set)),
                    s.difference_set(&img)
                );
            }
        }
    }

    #[test]
    fn mask_ops() {
        let a = SubsetMask::from_indices(200, [0, 5, 64, 130, 199]);
        assert_eq!(a.len(), 5);
        assert_eq!(a.to_vec(), vec![0, 5, 64, 130, 199]);
        assert_eq!(a.above(5).to_vec(), vec![64, 130, 199]);
        assert_eq!(a.count_above(63), 3);
        assert_eq!(a.count_above(199), 0);
        assert_eq!(a.complement().len(), 195);
        assert_eq!(a.first_absent(), Some(1));
        assert_eq!(SubsetMask::full(200).first_absent(), None);
        let b = SubsetMask::from_indices(200, [5, 6]);
        assert_eq!(a.intersection(&b).to_vec(), vec![5]);
        assert_eq!(a.union(&b).len(), 6);
        assert!(!a.is_disjoint(&b));
        assert!(SubsetMask::singleton(200, 5).is_subset(&a));
    }

    #[test]
    fn mask_order_prefers_early_members() {
        let n = 12;
        let a = SubsetMask::from_indices(n, [0, 7]);
        let b = SubsetMask::from_indices(n, [1, 2]);
        let c = SubsetMask::from_indices(n, [0, 3]);
        assert!(a < b);
        assert!(c < a);
    }

    #[test]
    fn tables_agree_with_spec() {
        let grp = Group::from_primes(3, 2).unwrap();
        for i in 0..18 {
            for j in 0..18 {
                let (x, y) = (grp.element(i), grp.element(j));
                assert_eq!(grp.element(grp.add_idx(i, j)), grp.add(x, y));
                assert_eq!(grp.element(grp.sub_idx(i, j)), grp.sub(x, y));
                let (a, b) = grp.char_exponents(x, y);
                assert_eq!(grp.pairing_idx(i, j), a as usize * 2 + b as usize);
            }
        }
    }
}
