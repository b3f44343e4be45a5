//! Split metacyclic groups `L(n, m; r) = <a, b | a^n = b^m = 1, b a b^-1 = a^r>`.
//!
//! Elements are kept in the normal form `a^x b^y` with `0 <= x < n`,
//! `0 <= y < m`, so equality is coordinate equality.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modular::{add_mod, gcd, geom_sum_mod, mul_mod, pow_mod, reduce, sub_mod};

/// Groups up to this order get element-indexed tables.
pub const MAX_TABLE_ORDER: u64 = 1 << 24;
const RPOW_TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid descriptor D({a},{b},{c}): {violated} violated")]
    InvalidDelta { a: u32, b: u32, c: u32, violated: String },
    #[error("element {0} is not in normal form for {1}")]
    ForeignElement(Element, String),
    #[error("group {0} has odd order factor; index-2 subgroups need n and m even")]
    OddOrder(String),
    #[error("subgroup <a^2, ab> has no presentation here")]
    UnsupportedSubgroup,
    #[error("subgroup {0} is not normal")]
    NotNormal(String),
    #[error("group of order {order} exceeds the limit {limit}")]
    TooLarge { order: u64, limit: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// `a^x b^y` in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u64; 2]", into = "[u64; 2]")]
pub struct Element {
    pub x: u64,
    pub y: u64,
}

impl Element {
    pub const fn new(x: u64, y: u64) -> Self {
        Element { x, y }
    }
}

impl From<[u64; 2]> for Element {
    fn from(v: [u64; 2]) -> Self {
        Element { x: v[0], y: v[1] }
    }
}

impl From<Element> for [u64; 2] {
    fn from(e: Element) -> Self {
        [e.x, e.y]
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a^{} b^{}", self.x, self.y)
    }
}

/// The parameters `(n, m, r)` together with a cached table of `r^y mod n`.
#[derive(Clone)]
pub struct Group {
    n: u64,
    m: u64,
    r: u64,
    rpow: Vec<u64>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        (self.n, self.m, self.r) == (other.n, other.m, other.r)
    }
}

impl Eq for Group {}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{},{})", self.n, self.m, self.r)
    }
}

impl Group {
    pub fn new(n: u64, m: u64, r: u64) -> Result<Group, GroupError> {
        if n == 0 || m == 0 {
            return Err(GroupError::InvalidParameters(format!("n={n}, m={m} must be positive")));
        }
        if n.checked_mul(m).is_none() || n > 1 << 62 || m > 1 << 62 {
            return Err(GroupError::InvalidParameters("order overflows".into()));
        }
        let r = r % n;
        if pow_mod(r, m, n) != 1 % n {
            return Err(GroupError::InvalidParameters(format!("r^m = {r}^{m} is not 1 mod {n}")));
        }
        let rpow = if m <= RPOW_TABLE_LIMIT {
            let mut v = Vec::with_capacity(m as usize);
            let mut p = 1 % n;
            for _ in 0..m {
                v.push(p);
                p = mul_mod(p, r, n);
            }
            v
        } else {
            Vec::new()
        };
        Ok(Group { n, m, r, rpow })
    }

    /// `Z_n` as `L(n, 1; 1)`.
    pub fn cyclic(n: u64) -> Result<Group, GroupError> {
        Group::new(n, 1, 1)
    }

    /// `Z_n x Z_m` as `L(n, m; 1)`.
    pub fn abelian(n: u64, m: u64) -> Result<Group, GroupError> {
        Group::new(n, m, 1)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn order(&self) -> u64 {
        self.n * self.m
    }

    pub fn is_abelian(&self) -> bool {
        self.r == 1 % self.n
    }

    /// `r^y mod n`; `y` is reduced mod `m`.
    #[inline]
    pub fn r_pow(&self, y: u64) -> u64 {
        let y = y % self.m;
        if self.rpow.is_empty() {
            pow_mod(self.r, y, self.n)
        } else {
            self.rpow[y as usize]
        }
    }

    /// `r^(-y) mod n`.
    #[inline]
    pub fn r_pow_neg(&self, y: u64) -> u64 {
        self.r_pow((self.m - y % self.m) % self.m)
    }

    pub fn identity(&self) -> Element {
        Element::new(0, 0)
    }

    pub fn alpha(&self) -> Element {
        Element::new(1 % self.n, 0)
    }

    pub fn beta(&self) -> Element {
        Element::new(0, 1 % self.m)
    }

    /// Normal form of `a^x b^y` for arbitrary integers.
    pub fn elem(&self, x: i128, y: i128) -> Element {
        Element::new(reduce(x, self.n), reduce(y, self.m))
    }

    pub fn contains(&self, g: Element) -> bool {
        g.x < self.n && g.y < self.m
    }

    fn check(&self, g: Element) -> Result<(), GroupError> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(GroupError::ForeignElement(g, self.to_string()))
        }
    }

    #[inline]
    pub fn index(&self, g: Element) -> usize {
        (g.x + self.n * g.y) as usize
    }

    #[inline]
    pub fn element_at(&self, idx: usize) -> Element {
        let idx = idx as u64;
        Element::new(idx % self.n, idx / self.n)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    /// `(a^x1 b^y1)(a^x2 b^y2) = a^(x1 + x2 r^y1) b^(y1 + y2)`.
    #[inline]
    pub fn mul(&self, g: Element, h: Element) -> Element {
        let x = add_mod(g.x, mul_mod(h.x, self.r_pow(g.y), self.n), self.n);
        Element::new(x, add_mod(g.y, h.y, self.m))
    }

    pub fn checked_mul(&self, g: Element, h: Element) -> Result<Element, GroupError> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    /// Closed form `(a^x b^y)^-1 = a^(-x r^-y) b^-y`.
    #[inline]
    pub fn inv(&self, g: Element) -> Element {
        let x = sub_mod(0, mul_mod(g.x, self.r_pow_neg(g.y), self.n), self.n);
        Element::new(x, sub_mod(0, g.y, self.m))
    }

    /// `(a^x b^y)^u = a^(x [u]_{r^y}) b^(yu)`; negative `u` goes through the inverse.
    pub fn pow(&self, g: Element, u: i64) -> Element {
        if u < 0 {
            return self.pow_nonneg(self.inv(g), u.unsigned_abs());
        }
        self.pow_nonneg(g, u as u64)
    }

    pub fn pow_nonneg(&self, g: Element, u: u64) -> Element {
        let s = self.r_pow(g.y);
        let x = mul_mod(g.x, geom_sum_mod(s, u, self.n), self.n);
        Element::new(x, mul_mod(g.y, u % self.m, self.m))
    }

    /// `[g, h] = g h g^-1 h^-1 = a^(x1(1 - r^y2) - x2(1 - r^y1))`.
    pub fn commutator(&self, g: Element, h: Element) -> Element {
        let t1 = mul_mod(g.x, sub_mod(1, self.r_pow(h.y), self.n), self.n);
        let t2 = mul_mod(h.x, sub_mod(1, self.r_pow(g.y), self.n), self.n);
        Element::new(sub_mod(t1, t2, self.n), 0)
    }

    /// `g h g^-1`.
    pub fn conj(&self, g: Element, h: Element) -> Element {
        self.mul(self.mul(g, h), self.inv(g))
    }

    /// Least `u >= 1` with `g^u = 1`.
    pub fn element_order(&self, g: Element) -> u64 {
        // the order of b^y is m / gcd(y, m); after that power we sit in <a>
        let k = self.m / gcd(g.y, self.m);
        let h = self.pow_nonneg(g, k);
        debug_assert_eq!(h.y, 0);
        k * (self.n / gcd(h.x, self.n))
    }

    /// Subgroup generated by `gens`, as a membership table (needs a small group).
    pub fn closure(&self, gens: &[Element]) -> Vec<bool> {
        let order = self.order() as usize;
        let mut member = vec![false; order];
        let mut queue = VecDeque::new();
        member[self.index(self.identity())] = true;
        queue.push_back(self.identity());
        while let Some(g) = queue.pop_front() {
            for &s in gens {
                let h = self.mul(g, s);
                let i = self.index(h);
                if !member[i] {
                    member[i] = true;
                    queue.push_back(h);
                }
            }
        }
        member
    }

    pub fn generates(&self, gens: &[Element]) -> bool {
        if self.is_two_group() {
            // Burnside basis theorem: G / <a^2, b^2> is (Z_2)^k here
            let mut span = [false; 4];
            span[0] = true;
            for g in gens {
                let v = ((g.x % 2) | ((g.y % 2) << 1)) as usize;
                for w in 0..4 {
                    if span[w] {
                        span[w ^ v] = true;
                    }
                }
            }
            let need = usize::from(self.n > 1) + 2 * usize::from(self.m > 1);
            return (0..4).filter(|&w| w & !need == 0).all(|w| span[w]);
        }
        self.closure(gens).iter().all(|&b| b)
    }

    /// Both `n` and `m` are powers of two.
    pub fn is_two_group(&self) -> bool {
        self.n.is_power_of_two() && self.m.is_power_of_two()
    }

    /// Whether `a_img`, `b_img` (in `self`) satisfy the defining relations of `source`.
    pub fn relations_hold(&self, source: &Group, a_img: Element, b_img: Element) -> bool {
        let id = self.identity();
        self.pow_nonneg(a_img, source.n) == id
            && self.pow_nonneg(b_img, source.m) == id
            && self.conj(b_img, a_img) == self.pow_nonneg(a_img, source.r)
    }

    /// `a^x b^y -> a_img^x b_img^y`, the homomorphism from `source` with
    /// these generator images (no relation check).
    pub fn hom_apply(&self, a_img: Element, b_img: Element, g: Element) -> Element {
        self.mul(self.pow_nonneg(a_img, g.x), self.pow_nonneg(b_img, g.y))
    }

    /// The three subgroups of index 2: `<a^2, b>`, `<a, b^2>`, `<a^2, ab>`.
    pub fn index2_subgroups(&self) -> Result<[Subgroup; 3], GroupError> {
        if self.n % 2 != 0 || self.m % 2 != 0 {
            return Err(GroupError::OddOrder(self.to_string()));
        }
        let half = self.order() / 2;
        let mk = |kind: Index2Kind, gens: Vec<Element>| Subgroup {
            generators: gens,
            order: half,
            index: 2,
            membership: Membership::Kernel(kind),
        };
        let a = self.alpha();
        let b = self.beta();
        let a2 = self.mul(a, a);
        Ok([
            mk(Index2Kind::AlphaSqBeta, vec![a2, b]),
            mk(Index2Kind::AlphaBetaSq, vec![a, self.mul(b, b)]),
            mk(Index2Kind::AlphaSqAlphaBeta, vec![a2, self.mul(a, b)]),
        ])
    }

    /// Standalone presentation of `<a^2, b>` or `<a, b^2>`.
    pub fn plus_presentation(&self, kind: Index2Kind) -> Result<PlusPresentation, GroupError> {
        if self.n % 2 != 0 || self.m % 2 != 0 {
            return Err(GroupError::OddOrder(self.to_string()));
        }
        let sub = match kind {
            Index2Kind::AlphaSqBeta => Group::new(self.n / 2, self.m, self.r % (self.n / 2))?,
            Index2Kind::AlphaBetaSq => Group::new(self.n, self.m / 2, mul_mod(self.r, self.r, self.n))?,
            Index2Kind::AlphaSqAlphaBeta => return Err(GroupError::UnsupportedSubgroup),
        };
        Ok(PlusPresentation { parent: self.clone(), sub, kind })
    }

    /// Quotient by `Xi = <a^p, b^q>`.
    pub fn quotient(&self, spec: QuotientSpec) -> Result<Quotient, GroupError> {
        let p = gcd(spec.alpha_power % self.n, self.n);
        let q = gcd(spec.beta_power.unwrap_or(0) % self.m, self.m);
        // <a^p> is always b-stable; a b^q a^-1 = a^(1 - r^q) b^q needs r^q == 1 mod p
        if pow_mod(self.r, q, p) != 1 % p {
            return Err(GroupError::NotNormal(spec.to_string()));
        }
        let target = Group::new(p, q, self.r % p)?;
        Ok(Quotient { source: self.clone(), target, spec: QuotientSpec { alpha_power: p, beta_power: Some(q) } })
    }

    /// Left-regular permutation image of every element.
    pub fn perm_representation(&self) -> Result<Vec<Perm>, GroupError> {
        const LIMIT: u64 = 1 << 16;
        if self.order() > LIMIT {
            return Err(GroupError::TooLarge { order: self.order(), limit: LIMIT });
        }
        Ok(self
            .elements()
            .map(|g| Perm(self.elements().map(|h| self.index(self.mul(g, h)) as u32).collect()))
            .collect())
    }

    pub fn parse_element(&self, s: &str) -> Result<Element, GroupError> {
        let (x, y) = parse_word(s)?;
        Ok(self.elem(x, y))
    }
}

/// Parses `a^x b^y`-style words (`a`, `b^-1`, `1`, `e`, `a^3*b`).
fn parse_word(s: &str) -> Result<(i128, i128), GroupError> {
    let s = s.trim();
    if s.is_empty() || s == "1" || s == "e" {
        return Ok((0, 0));
    }
    let mut x: Option<i128> = None;
    let mut y: Option<i128> = None;
    for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        let (sym, exp) = match tok.split_once('^') {
            Some((sym, e)) => {
                let e = e.trim().parse::<i128>().map_err(|_| GroupError::Parse(format!("bad exponent in {tok:?}")))?;
                (sym.trim(), e)
            }
            None => (tok, 1),
        };
        match sym {
            "a" if x.is_none() && y.is_none() => x = Some(exp),
            "b" if y.is_none() => y = Some(exp),
            _ => return Err(GroupError::Parse(format!("expected a^x b^y, got {s:?}"))),
        }
    }
    Ok((x.unwrap_or(0), y.unwrap_or(0)))
}

/// The family `D(a,b,c) = L(2^a, 2^b; 1 + 2^c)` with
/// `max{2, a-b} <= c <= a-3` and `b != c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Delta {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl Delta {
    pub fn new(a: u32, b: u32, c: u32) -> Result<Delta, GroupError> {
        let bad = |violated: String| Err(GroupError::InvalidDelta { a, b, c, violated });
        if a > 40 || b > 40 {
            return bad("a, b <= 40".into());
        }
        let lower = 2i64.max(a as i64 - b as i64);
        if (c as i64) < lower {
            return bad(format!("max{{2,a-b}}={lower} <= c"));
        }
        if c as i64 > a as i64 - 3 {
            return bad("c <= a-3".into());
        }
        if b == c {
            return bad("b≠c".into());
        }
        Ok(Delta { a, b, c })
    }

    /// No range checks; exploration only.
    pub fn unchecked(a: u32, b: u32, c: u32) -> Delta {
        Delta { a, b, c }
    }

    pub fn group(&self) -> Group {
        Group::new(1 << self.a, 1 << self.b, 1 + (1u64 << self.c)).expect("D(a,b,c) parameters are consistent")
    }

    pub fn r(&self) -> u64 {
        1 + (1u64 << self.c)
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({},{},{})", self.a, self.b, self.c)
    }
}

/// A group as named on the command line or in JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDescriptor {
    Metacyclic(Group),
    Delta(Delta),
}

impl GroupDescriptor {
    pub fn group(&self) -> Group {
        match self {
            GroupDescriptor::Metacyclic(g) => g.clone(),
            GroupDescriptor::Delta(d) => d.group(),
        }
    }

    pub fn delta(&self) -> Option<Delta> {
        match self {
            GroupDescriptor::Delta(d) => Some(*d),
            GroupDescriptor::Metacyclic(_) => None,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Metacyclic(g) => write!(f, "{g}"),
            GroupDescriptor::Delta(d) => write!(f, "{d}"),
        }
    }
}

fn parse_args<const K: usize>(s: &str) -> Result<[u64; K], GroupError> {
    let inner = s
        .strip_suffix(')')
        .and_then(|t| t.split_once('(').map(|(_, rest)| rest))
        .ok_or_else(|| GroupError::Parse(format!("expected NAME(...), got {s:?}")))?;
    let parts: Vec<u64> = inner
        .split([',', ';'])
        .map(|p| p.trim().parse::<u64>().map_err(|_| GroupError::Parse(format!("bad integer {p:?}"))))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| GroupError::Parse(format!("expected {K} parameters in {s:?}")))
}

impl FromStr for GroupDescriptor {
    type Err = GroupError;

    /// `L(n,m,r)`, `D(a,b,c)`, `Zn`, `Zn x Zm`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with('L') {
            let [n, m, r] = parse_args::<3>(s)?;
            return Ok(GroupDescriptor::Metacyclic(Group::new(n, m, r)?));
        }
        if s.starts_with('D') {
            let [a, b, c] = parse_args::<3>(s)?;
            let to32 = |v: u64| u32::try_from(v).map_err(|_| GroupError::Parse(format!("{v} too large")));
            return Ok(GroupDescriptor::Delta(Delta::new(to32(a)?, to32(b)?, to32(c)?)?));
        }
        if s.starts_with('Z') {
            let factors: Vec<u64> = s
                .split(['x', 'X', '×'])
                .map(|f| {
                    f.trim()
                        .strip_prefix('Z')
                        .and_then(|d| d.trim().trim_start_matches('_').parse::<u64>().ok())
                        .ok_or_else(|| GroupError::Parse(format!("bad cyclic factor {f:?}")))
                })
                .collect::<Result<_, _>>()?;
            return match factors.as_slice() {
                [n] => Ok(GroupDescriptor::Metacyclic(Group::cyclic(*n)?)),
                [n, m] => Ok(GroupDescriptor::Metacyclic(Group::abelian(*n, *m)?)),
                _ => Err(GroupError::Parse(format!("at most two cyclic factors: {s:?}"))),
            };
        }
        Err(GroupError::Parse(format!("unknown group syntax {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Index2Kind {
    /// `<a^2, b>`, kernel of `(x, y) -> x mod 2`.
    AlphaSqBeta,
    /// `<a, b^2>`, kernel of `(x, y) -> y mod 2`.
    AlphaBetaSq,
    /// `<a^2, ab>`, kernel of `(x, y) -> x + y mod 2`.
    AlphaSqAlphaBeta,
}

impl Index2Kind {
    #[inline]
    pub fn contains(self, g: Element) -> bool {
        match self {
            Index2Kind::AlphaSqBeta => g.x % 2 == 0,
            Index2Kind::AlphaBetaSq => g.y % 2 == 0,
            Index2Kind::AlphaSqAlphaBeta => (g.x + g.y) % 2 == 0,
        }
    }
}

#[derive(Debug, Clone)]
enum Membership {
    Kernel(Index2Kind),
    Table(Vec<bool>),
}

/// A subgroup given by generators and a membership predicate.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub generators: Vec<Element>,
    pub order: u64,
    pub index: u64,
    membership: Membership,
}

impl Subgroup {
    /// Explicit subgroup from a membership table over the parent's element indices.
    pub fn from_table(parent: &Group, generators: Vec<Element>, table: Vec<bool>) -> Subgroup {
        let order = table.iter().filter(|&&b| b).count() as u64;
        Subgroup { generators, order, index: parent.order() / order.max(1), membership: Membership::Table(table) }
    }

    pub fn contains(&self, parent: &Group, g: Element) -> bool {
        match &self.membership {
            Membership::Kernel(k) => k.contains(g),
            Membership::Table(t) => t[parent.index(g)],
        }
    }

    pub fn kind(&self) -> Option<Index2Kind> {
        match self.membership {
            Membership::Kernel(k) => Some(k),
            Membership::Table(_) => None,
        }
    }
}

/// An index-2 subgroup as a metacyclic group in its own right.
#[derive(Debug, Clone)]
pub struct PlusPresentation {
    pub parent: Group,
    pub sub: Group,
    pub kind: Index2Kind,
}

impl PlusPresentation {
    /// Subgroup coordinates to parent coordinates.
    pub fn include(&self, g: Element) -> Element {
        match self.kind {
            Index2Kind::AlphaSqBeta => Element::new(2 * g.x, g.y),
            Index2Kind::AlphaBetaSq => Element::new(g.x, 2 * g.y),
            Index2Kind::AlphaSqAlphaBeta => unreachable!("no presentation for <a^2, ab>"),
        }
    }

    /// Parent coordinates to subgroup coordinates, when `g` lies in the subgroup.
    pub fn retract(&self, g: Element) -> Option<Element> {
        if !self.kind.contains(g) {
            return None;
        }
        Some(match self.kind {
            Index2Kind::AlphaSqBeta => Element::new(g.x / 2, g.y),
            Index2Kind::AlphaBetaSq => Element::new(g.x, g.y / 2),
            Index2Kind::AlphaSqAlphaBeta => unreachable!("no presentation for <a^2, ab>"),
        })
    }
}

/// `Xi = <a^alpha_power, b^beta_power>`; `None` means `b^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSpec {
    pub alpha_power: u64,
    pub beta_power: Option<u64>,
}

impl QuotientSpec {
    pub fn alpha(p: u64) -> Self {
        QuotientSpec { alpha_power: p, beta_power: None }
    }
}

impl fmt::Display for QuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.beta_power {
            Some(q) => write!(f, "<a^{}, b^{}>", self.alpha_power, q),
            None => write!(f, "<a^{}>", self.alpha_power),
        }
    }
}

impl FromStr for QuotientSpec {
    type Err = GroupError;

    /// `a^16`, `a^16,b^4`, `<a^16, b^4>`, `b^2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('<').trim_end_matches('>');
        let mut spec = QuotientSpec { alpha_power: 0, beta_power: None };
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (x, y) = parse_word(part)?;
            match (x, y) {
                (x, 0) if x >= 0 => spec.alpha_power = x as u64,
                (0, y) if y >= 0 => spec.beta_power = Some(y as u64),
                _ => return Err(GroupError::Parse(format!("expected a^k or b^j, got {part:?}"))),
            }
        }
        Ok(spec)
    }
}

/// `G / Xi` with its projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub source: Group,
    pub target: Group,
    pub spec: QuotientSpec,
}

impl Quotient {
    pub fn project(&self, g: Element) -> Element {
        Element::new(g.x % self.target.n(), g.y % self.target.m())
    }

    /// Whether `g` lies in the kernel `Xi`.
    pub fn in_kernel(&self, g: Element) -> bool {
        self.project(g) == self.target.identity()
    }

    pub fn kernel_elements(&self) -> impl Iterator<Item = Element> + '_ {
        let p = self.target.n();
        let q = self.target.m();
        let n = self.source.n();
        let m = self.source.m();
        (0..m / q).flat_map(move |j| (0..n / p).map(move |i| Element::new(i * p, j * q)))
    }
}

/// A permutation of `0..len` as an image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(len: usize) -> Perm {
        Perm((0..len as u32).collect())
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut acc = 1u64;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            acc = acc / gcd(acc, len) * len;
        }
        acc
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &i in &self.0 {
            let i = i as usize;
            if i >= seen.len() || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }
}
