//! Cayley maps `CM(G, Omega, rho)`, skew-morphisms and the checks built on them.
//!
//! `Omega = (w_1, ..., w_d)` is stored 0-based: position `p` holds `w_{p+1}`,
//! and `rho` shifts positions by one. A dart `(v, p)` is the arc `v -> v w_{p+1}`.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metacyclic::{Element, Group, GroupDescriptor, GroupError, Quotient, QuotientSpec};
use crate::modular::gcd;

const NONE: u32 = u32::MAX;
/// Largest skew-morphism order for which power tables are built.
pub const MAX_SKEW_ORDER: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("generating set is empty")]
    Empty,
    #[error("identity lies in the generating set")]
    IdentityInOmega,
    #[error("generator {0} is repeated")]
    Duplicate(Element),
    #[error("generator {0} is not in the group")]
    Foreign(Element),
    #[error("generating set is not closed under inverses: missing inverse of {0}")]
    NotInverseClosed(Element),
    #[error("generating set does not generate the group")]
    NotGenerating,
    #[error("group {0} is too large for element tables")]
    TooLarge(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The first pair `(eta, mu)` where the skew identity fails.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("skew identity fails at eta = {eta}, mu = {mu}: {reason}")]
pub struct SkewFailure {
    pub eta: Element,
    pub mu: Element,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyMap {
    descriptor: GroupDescriptor,
    group: Group,
    omega: Vec<Element>,
    pos: Vec<u32>,
    iota: Vec<u32>,
}

impl CayleyMap {
    pub fn new(descriptor: GroupDescriptor, omega: Vec<Element>) -> Result<CayleyMap, MapError> {
        let group = descriptor.group();
        if group.order() > crate::metacyclic::MAX_TABLE_ORDER {
            return Err(MapError::TooLarge(group.to_string()));
        }
        if omega.is_empty() {
            return Err(MapError::Empty);
        }
        let mut pos = vec![NONE; group.order() as usize];
        for (p, &w) in omega.iter().enumerate() {
            if !group.contains(w) {
                return Err(MapError::Foreign(w));
            }
            if w == group.identity() {
                return Err(MapError::IdentityInOmega);
            }
            let i = group.index(w);
            if pos[i] != NONE {
                return Err(MapError::Duplicate(w));
            }
            pos[i] = p as u32;
        }
        let mut iota = Vec::with_capacity(omega.len());
        for &w in &omega {
            match pos[group.index(group.inv(w))] {
                NONE => return Err(MapError::NotInverseClosed(w)),
                q => iota.push(q),
            }
        }
        if !group.generates(&omega) {
            return Err(MapError::NotGenerating);
        }
        Ok(CayleyMap { descriptor, group, omega, pos, iota })
    }

    pub fn from_group(group: &Group, omega: Vec<Element>) -> Result<CayleyMap, MapError> {
        CayleyMap::new(GroupDescriptor::Metacyclic(group.clone()), omega)
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn omega(&self) -> &[Element] {
        &self.omega
    }

    pub fn valency(&self) -> usize {
        self.omega.len()
    }

    /// `w_i` for any integer `i`, read cyclically (`w_0 = w_d`).
    pub fn omega_at(&self, i: i64) -> Element {
        let d = self.omega.len() as i64;
        self.omega[(i - 1).rem_euclid(d) as usize]
    }

    /// 0-based position of `g` in `Omega`.
    pub fn position(&self, g: Element) -> Option<usize> {
        match self.pos[self.group.index(g)] {
            NONE => None,
            p => Some(p as usize),
        }
    }

    /// `iota(i)` with `w_iota(i) = w_i^-1`, 1-based in `1..=d`.
    pub fn iota(&self, i: i64) -> usize {
        let d = self.omega.len() as i64;
        self.iota[(i - 1).rem_euclid(d) as usize] as usize + 1
    }

    /// Same generators, re-indexed so the new `w_i` is the old `w_{i+s}`.
    pub fn shifted(&self, s: i64) -> CayleyMap {
        let omega = (1..=self.valency() as i64).map(|i| self.omega_at(i + s)).collect();
        CayleyMap::new(self.descriptor.clone(), omega).expect("shift keeps the map valid")
    }

    pub(crate) fn rotate_index(&self, p: usize, k: usize) -> usize {
        (p + k) % self.omega.len()
    }
}

/// A bijection `phi` of the group with its power function `pi`, both as
/// tables over element indices. `pi` takes values in `1..=ord(phi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewMorphism {
    pub phi: Vec<u32>,
    pub pi: Vec<u32>,
}

impl SkewMorphism {
    pub fn apply(&self, group: &Group, g: Element) -> Element {
        group.element_at(self.phi[group.index(g)] as usize)
    }

    pub fn pi_of(&self, group: &Group, g: Element) -> u32 {
        self.pi[group.index(g)]
    }

    pub fn order(&self) -> u64 {
        perm_order(&self.phi)
    }
}

fn perm_order(p: &[u32]) -> u64 {
    let mut seen = vec![false; p.len()];
    let mut acc = 1u64;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0u64;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        acc = acc / gcd(acc, len) * len;
        if acc > MAX_SKEW_ORDER {
            return acc;
        }
    }
    acc
}

fn is_bijection(p: &[u32]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| {
        let i = i as usize;
        i < seen.len() && !std::mem::replace(&mut seen[i], true)
    })
}

/// `phi^k` for `k = 0..ord`.
struct Powers {
    tables: Vec<Vec<u32>>,
}

impl Powers {
    fn new(phi: &[u32], ord: u64) -> Powers {
        let mut tables = Vec::with_capacity(ord as usize);
        tables.push((0..phi.len() as u32).collect::<Vec<_>>());
        for k in 1..ord as usize {
            let prev: &Vec<u32> = &tables[k - 1];
            tables.push(prev.iter().map(|&i| phi[i as usize]).collect());
        }
        Powers { tables }
    }

    #[inline]
    fn get(&self, k: u64, i: usize) -> usize {
        self.tables[(k % self.tables.len() as u64) as usize][i] as usize
    }
}

fn skew_failure(group: &Group, eta: usize, mu: usize, reason: impl Into<String>) -> SkewFailure {
    SkewFailure { eta: group.element_at(eta), mu: group.element_at(mu), reason: reason.into() }
}

fn check_permutation(group: &Group, phi: &[u32]) -> Result<u64, SkewFailure> {
    let id = group.index(group.identity());
    if phi.len() != group.order() as usize || !is_bijection(phi) {
        return Err(skew_failure(group, id, id, "phi is not a bijection of the group"));
    }
    if phi[id] as usize != id {
        return Err(skew_failure(group, id, id, "phi does not fix the identity"));
    }
    let ord = perm_order(phi);
    if ord > MAX_SKEW_ORDER {
        return Err(skew_failure(group, id, id, format!("phi has order {ord} > {MAX_SKEW_ORDER}")));
    }
    Ok(ord)
}

/// Derives `pi` for `phi` and verifies `phi(eta mu) = phi(eta) phi^pi(eta)(mu)`
/// on every pair.
pub fn check_skew(group: &Group, phi: &[u32]) -> Result<SkewMorphism, SkewFailure> {
    let ord = check_permutation(group, phi)?;
    let pw = Powers::new(phi, ord);
    let n = group.order() as usize;
    let anchors: Vec<usize> = [group.alpha(), group.beta()].iter().map(|&e| group.index(e)).collect();
    let pi: Result<Vec<u32>, SkewFailure> = (0..n)
        .into_par_iter()
        .map(|eta| {
            let ge = group.element_at(eta);
            let fe_inv = group.inv(group.element_at(phi[eta] as usize));
            let target = |mu: usize| -> usize {
                let prod = group.index(group.mul(ge, group.element_at(mu)));
                group.index(group.mul(fe_inv, group.element_at(phi[prod] as usize)))
            };
            let anchor_targets: Vec<(usize, usize)> = anchors.iter().map(|&a| (a, target(a))).collect();
            let mut first_bad = None;
            for k in 1..=ord {
                if anchor_targets.iter().any(|&(a, t)| pw.get(k, a) != t) {
                    continue;
                }
                match (0..n).find(|&mu| pw.get(k, mu) != target(mu)) {
                    None => return Ok(k as u32),
                    Some(mu) => {
                        first_bad.get_or_insert(mu);
                    }
                }
            }
            let mu = first_bad.unwrap_or(anchors[0]);
            Err(skew_failure(group, eta, mu, "no power k satisfies the identity for all mu"))
        })
        .collect();
    Ok(SkewMorphism { phi: phi.to_vec(), pi: pi? })
}

/// Verifies a given `(phi, pi)` on every pair.
pub fn verify_with_pi(group: &Group, skew: &SkewMorphism) -> Result<(), SkewFailure> {
    let ord = check_permutation(group, &skew.phi)?;
    if skew.pi.len() != skew.phi.len() {
        let id = group.index(group.identity());
        return Err(skew_failure(group, id, id, "pi table has the wrong length"));
    }
    let pw = Powers::new(&skew.phi, ord);
    let n = group.order() as usize;
    let phi = &skew.phi;
    let bad = (0..n).into_par_iter().find_map_first(|eta| {
        let ge = group.element_at(eta);
        let fe = group.element_at(phi[eta] as usize);
        let k = skew.pi[eta] as u64;
        (0..n)
            .find(|&mu| {
                let lhs = phi[group.index(group.mul(ge, group.element_at(mu)))] as usize;
                let rhs = group.index(group.mul(fe, group.element_at(pw.get(k, mu))));
                lhs != rhs
            })
            .map(|mu| (eta, mu))
    });
    match bad {
        None => Ok(()),
        Some((eta, mu)) => Err(skew_failure(group, eta, mu, format!("pi(eta) = {}", skew.pi[eta]))),
    }
}

/// Arc propagation: the only candidate automorphism fixing vertex 1 and
/// rotating its darts by one is `(v, p) -> (phi(v), p + delta(v))` with
/// `phi(v w_p) = phi(v) w_{p + delta(v)}` and
/// `delta(v w_p) = iota(p + delta(v)) - iota(p)`. Returns the skew-morphism
/// when the propagation closes up consistently.
pub fn is_regular(map: &CayleyMap) -> Option<SkewMorphism> {
    let prop = regular_by_propagation(map)?;
    let skew = check_skew(map.group(), &prop.phi).ok()?;
    (skew.pi == prop.pi).then_some(skew)
}

/// The propagated `phi` with `pi = delta`, without the separate pairwise
/// skew check. Consistency of the propagation already proves regularity.
pub fn regular_by_propagation(map: &CayleyMap) -> Option<SkewMorphism> {
    let (phi, pi) = propagate(map)?;
    Some(SkewMorphism { phi, pi })
}

fn propagate(map: &CayleyMap) -> Option<(Vec<u32>, Vec<u32>)> {
    let g = map.group();
    let d = map.valency();
    let n = g.order() as usize;
    let mut phi = vec![NONE; n];
    let mut delta = vec![0u32; n];
    let id = g.index(g.identity());
    phi[id] = id as u32;
    delta[id] = 1 % d as u32;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(v) = queue.pop_front() {
        let vi = g.index(v);
        let fv = g.element_at(phi[vi] as usize);
        let dv = delta[vi] as usize;
        for p in 0..d {
            let w = g.index(g.mul(v, map.omega[p]));
            let q = map.rotate_index(p, dv);
            let img = g.index(g.mul(fv, map.omega[q])) as u32;
            let dl = ((map.iota[q] as usize + d - map.iota[p] as usize) % d) as u32;
            if phi[w] == NONE {
                phi[w] = img;
                delta[w] = dl;
                queue.push_back(g.element_at(w));
            } else if phi[w] != img || delta[w] != dl {
                return None;
            }
        }
    }
    if !is_bijection(&phi) {
        return None;
    }
    let delta = delta.into_iter().map(|x| if x == 0 { d as u32 } else { x }).collect();
    Some((phi, delta))
}

/// Orientation-preserving automorphisms of the map, counted as dart
/// permutations commuting with rotation and reversal.
pub fn map_automorphism_count(map: &CayleyMap) -> usize {
    let g = map.group();
    let d = map.valency();
    let darts = g.order() as usize * d;
    let rot = |x: usize| (x / d) * d + (x % d + 1) % d;
    let rev = |x: usize| {
        let (v, p) = (x / d, x % d);
        let w = g.index(g.mul(g.element_at(v), map.omega[p]));
        w * d + map.iota[p] as usize
    };
    let rot_t: Vec<usize> = (0..darts).map(rot).collect();
    let rev_t: Vec<usize> = (0..darts).map(rev).collect();
    (0..darts)
        .into_par_iter()
        .filter(|&image| {
            let mut psi = vec![usize::MAX; darts];
            let mut hit = vec![false; darts];
            psi[0] = image;
            hit[image] = true;
            let mut stack = vec![0usize];
            while let Some(x) = stack.pop() {
                for (src, dst) in [(rot_t[x], rot_t[psi[x]]), (rev_t[x], rev_t[psi[x]])] {
                    if psi[src] == usize::MAX {
                        if hit[dst] {
                            return false;
                        }
                        psi[src] = dst;
                        hit[dst] = true;
                        stack.push(src);
                    } else if psi[src] != dst {
                        return false;
                    }
                }
            }
            psi.iter().all(|&y| y != usize::MAX)
        })
        .count()
}

/// Regularity by counting all map automorphisms (the oracle tier).
pub fn is_regular_exhaustive(map: &CayleyMap) -> bool {
    map_automorphism_count(map) == map.group().order() as usize * map.valency()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapType {
    I,
    II,
}

impl fmt::Display for MapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapType::I => write!(f, "I"),
            MapType::II => write!(f, "II"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceData {
    /// Least positive residue mod `d`.
    pub t: u64,
    /// `iota(d)`, in `1..=d`.
    pub ell: u64,
    /// `iota(i)` for `i = 1..=d`.
    pub iota: Vec<u64>,
    pub kind: MapType,
    pub d: u64,
}

impl BalanceData {
    /// `(t - 1, d)` with `(0, d) = d`.
    pub fn gcd_t_minus_1(&self) -> u64 {
        gcd((self.t + self.d - 1) % self.d, self.d)
    }

    pub fn is_normalized(&self) -> bool {
        let g = self.gcd_t_minus_1();
        match self.kind {
            MapType::I => g % 2 == 0 && self.ell == g / 2,
            MapType::II => self.ell == g,
        }
    }
}

/// `t` with `rho(w^-1) = (rho^t(w))^-1`, i.e. `iota(i + t) = iota(i) + 1`.
/// Such a `t` is unique mod `d` when it exists, since `iota` is injective.
pub fn balance_data(map: &CayleyMap) -> Option<BalanceData> {
    let d = map.valency() as u64;
    let iota: Vec<u64> = (1..=d as i64).map(|i| map.iota(i) as u64).collect();
    let at = |i: u64| iota[((i + d - 1) % d) as usize];
    let t = (1..=d).find(|&t| (t * t) % d == 1 % d && (1..=d).all(|i| at(i + t) % d == (at(i) + 1) % d))?;
    let ell = at(d);
    let g = gcd((t + d - 1) % d, d);
    let kind = if ell % g != 0 { MapType::I } else { MapType::II };
    Some(BalanceData { t, ell, iota, kind, d })
}

/// Re-indexes `Omega` cyclically so that `ell = (t-1, d)/2` (type I) or
/// `ell = (t-1, d)` (type II). Shifting by `s` turns `ell` into `ell + (t-1)s`.
pub fn normalize_indexing(map: &CayleyMap, bal: &BalanceData) -> Result<(CayleyMap, BalanceData), String> {
    let d = bal.d;
    let g = bal.gcd_t_minus_1();
    let target = match bal.kind {
        MapType::I if g % 2 == 0 => g / 2,
        MapType::I => return Err(format!("type I with odd (t-1, d) = {g}")),
        MapType::II => g,
    };
    for s in 0..d {
        let ell = (bal.ell + (bal.t + d - 1) % d * s) % d;
        let ell = if ell == 0 { d } else { ell };
        if ell == target {
            let shifted = map.shifted(s as i64);
            let nb = balance_data(&shifted).ok_or("balance lost under shift")?;
            debug_assert_eq!(nb.ell, target);
            return Ok((shifted, nb));
        }
    }
    Err(format!("no cyclic shift reaches ell = {target}"))
}

/// A group isomorphism `sigma` with `sigma(Omega1) = Omega2` and
/// `sigma rho1 = rho2 sigma`, stored as the image of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapIsomorphism {
    pub shift: usize,
    pub images: Vec<Element>,
}

/// Any such `sigma` sends `w_1` to some `w_{1+j}` and is then forced on the
/// whole Cayley graph, so trying every `j` is a complete search.
pub fn are_isomorphic(m1: &CayleyMap, m2: &CayleyMap) -> Result<Option<MapIsomorphism>, String> {
    let (g1, g2) = (m1.group(), m2.group());
    if g1.order() != g2.order() {
        return Err(format!("group orders differ: {} vs {}", g1.order(), g2.order()));
    }
    let d = m1.valency();
    if d != m2.valency() {
        return Ok(None);
    }
    match (balance_data(m1), balance_data(m2)) {
        (Some(b1), Some(b2)) if b1.kind != b2.kind => return Ok(None),
        _ => {}
    }
    Ok((0..d).find_map(|j| extend_isomorphism(m1, m2, j).map(|images| MapIsomorphism { shift: j, images })))
}

fn extend_isomorphism(m1: &CayleyMap, m2: &CayleyMap, shift: usize) -> Option<Vec<Element>> {
    let (g1, g2) = (m1.group(), m2.group());
    let d = m1.valency();
    let n = g1.order() as usize;
    let mut img = vec![NONE; n];
    let mut hit = vec![false; n];
    img[g1.index(g1.identity())] = g2.index(g2.identity()) as u32;
    hit[g2.index(g2.identity())] = true;
    let mut queue = VecDeque::from([g1.identity()]);
    while let Some(v) = queue.pop_front() {
        let sv = g2.element_at(img[g1.index(v)] as usize);
        for p in 0..d {
            let w = g1.index(g1.mul(v, m1.omega[p]));
            let target = g2.index(g2.mul(sv, m2.omega[(p + shift) % d]));
            if img[w] == NONE {
                if hit[target] {
                    return None;
                }
                img[w] = target as u32;
                hit[target] = true;
                queue.push_back(g1.element_at(w));
            } else if img[w] as usize != target {
                return None;
            }
        }
    }
    Some(img.into_iter().map(|i| g2.element_at(i as usize)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("Xi is not contained in ker pi: pi({0}) != 1")]
    NotInKernel(Element),
    #[error("Xi is not phi-invariant: phi({0}) leaves Xi")]
    NotInvariant(Element),
    #[error("induced phi is not well defined on the coset of {0}")]
    IllDefined(Element),
    #[error("projected generating set is degenerate: {0}")]
    Degenerate(String),
    #[error("induced map is not skew: {0}")]
    NotSkew(SkewFailure),
}

/// The induced map on `G / Xi` with its skew-morphism.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    pub quotient: Quotient,
    pub map: CayleyMap,
    pub skew: SkewMorphism,
}

pub fn quotient_map(map: &CayleyMap, skew: &SkewMorphism, spec: QuotientSpec) -> Result<QuotientMap, QuotientError> {
    let g = map.group();
    let quotient = g.quotient(spec)?;
    for xi in quotient.kernel_elements() {
        if skew.pi_of(g, xi) != 1 && xi != g.identity() {
            return Err(QuotientError::NotInKernel(xi));
        }
        if !quotient.in_kernel(skew.apply(g, xi)) {
            return Err(QuotientError::NotInvariant(xi));
        }
    }
    let q = &quotient.target;
    let nq = q.order() as usize;
    let mut phibar = vec![NONE; nq];
    for e in g.elements() {
        let i = q.index(quotient.project(e));
        let img = q.index(quotient.project(skew.apply(g, e))) as u32;
        if phibar[i] == NONE {
            phibar[i] = img;
        } else if phibar[i] != img {
            return Err(QuotientError::IllDefined(e));
        }
    }
    let proj: Vec<Element> = map.omega().iter().map(|&w| quotient.project(w)).collect();
    let d = proj.len();
    let dbar = (1..=d).find(|&p| d % p == 0 && (0..d).all(|i| proj[i] == proj[(i + p) % d])).unwrap_or(d);
    let omega: Vec<Element> = proj[..dbar].to_vec();
    let qmap = CayleyMap::from_group(q, omega).map_err(|e| QuotientError::Degenerate(e.to_string()))?;
    let qskew = check_skew(q, &phibar).map_err(QuotientError::NotSkew)?;
    Ok(QuotientMap { quotient, map: qmap, skew: qskew })
}

/// `eta_j = w_j w_{j-1}^-1` together with the `D+`-coordinates used by the
/// classification: `eta_j = a^(2u_j) b^(v_j)` and `w_i w_d^-1 = a^(2f_i) b^(g_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorOrbit {
    pub eta: Vec<Element>,
    pub plus: Option<PlusSequences>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlusSequences {
    pub u: Vec<u64>,
    pub v: Vec<u64>,
    /// `f_i = u_i + r^(v_i) f_(i-1)` mod `n/2`.
    pub f: Vec<u64>,
    /// `g_i = v_i + ... + v_1` mod `m`.
    pub g: Vec<u64>,
}

/// Builds the `eta` sequence and checks `w_i w_d^-1 = eta_i...eta_1`,
/// `w_d^-2 = eta_ell...eta_1` and `phi(eta_j) = eta_(j+1)`.
pub fn generator_orbit(map: &CayleyMap, bal: &BalanceData, skew: &SkewMorphism) -> Result<GeneratorOrbit, String> {
    let g = map.group();
    let d = map.valency() as i64;
    let eta: Vec<Element> = (1..=d).map(|j| g.mul(map.omega_at(j), g.inv(map.omega_at(j - 1)))).collect();
    let wd_inv = g.inv(map.omega_at(d));
    let mut prod = g.identity();
    let mut partial = Vec::with_capacity(d as usize);
    for j in 0..d as usize {
        prod = g.mul(eta[j], prod);
        partial.push(prod);
        if prod != g.mul(map.omega_at(j as i64 + 1), wd_inv) {
            return Err(format!("w_i w_d^-1 != eta_i...eta_1 at i = {}", j + 1));
        }
    }
    if partial[bal.ell as usize - 1] != g.mul(wd_inv, wd_inv) {
        return Err(format!("w_d^-2 != eta_ell...eta_1 with ell = {}", bal.ell));
    }
    for j in 0..d as usize {
        if skew.apply(g, eta[j]) != eta[(j + 1) % d as usize] {
            return Err(format!("phi(eta_{}) != eta_{}", j + 1, (j + 1) % d as usize + 1));
        }
    }
    let plus = if g.n() % 2 == 0 && eta.iter().all(|e| e.x % 2 == 0) {
        let half = g.n() / 2;
        let u: Vec<u64> = eta.iter().map(|e| e.x / 2).collect();
        let v: Vec<u64> = eta.iter().map(|e| e.y).collect();
        let mut f = Vec::with_capacity(u.len());
        let mut gs = Vec::with_capacity(u.len());
        let (mut fp, mut gp) = (0u64, 0u64);
        for j in 0..u.len() {
            fp = (u[j] + crate::modular::mul_mod(g.r_pow(v[j]) % half, fp, half)) % half;
            gp = (gp + v[j]) % g.m();
            f.push(fp);
            gs.push(gp);
            if Element::new(2 * fp, gp) != partial[j] {
                return Err(format!("f/g recursion disagrees with eta product at i = {}", j + 1));
            }
        }
        Some(PlusSequences { u, v, f, g: gs })
    } else {
        None
    };
    Ok(GeneratorOrbit { eta, plus })
}

/// The three checkable conclusions for a map on a rank-2 abelian 2-group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianRbcmProfile {
    pub theta1: Element,
    pub theta2: Element,
    pub k: u32,
    pub k_prime: u32,
    pub valency: u64,
    pub t: u64,
    pub kind: MapType,
    pub order_theta1_minus_theta2: u64,
    pub psi_plus_squared_is_identity: bool,
}

fn rank_two_group(g: &Group, members: &[bool]) -> bool {
    let inv_count = g.elements().filter(|&e| members[g.index(e)] && g.mul(e, e) == g.identity()).count();
    inv_count == 4
}

/// Checks `G+ = <theta1> x <theta1 + theta2>` with `|theta1| = 2^k' >= 2^k = |theta1 + theta2|`,
/// `|theta1 - theta2| = 2^max(k'-1, k)`, type I, `d = 2^(k+1) | t + 1` and `(psi+)^2 = id`.
pub fn abelian_profile_check(map: &CayleyMap, skew: &SkewMorphism) -> Result<AbelianRbcmProfile, String> {
    let g = map.group();
    if !g.is_abelian() || !g.is_two_group() {
        return Err(format!("{g} is not an abelian 2-group"));
    }
    let members: Vec<bool> = skew.pi.iter().map(|&p| p == 1).collect();
    let all: Vec<bool> = vec![true; g.order() as usize];
    if !rank_two_group(g, &all) || !rank_two_group(g, &members) {
        return Err("rk(G) = rk(G+) = 2 fails".into());
    }
    let bal = balance_data(map).ok_or("quotient map is not t-balanced")?;
    let mu = |j: i64| map.omega_at(j);
    let theta1 = g.mul(mu(1), g.inv(mu(0)));
    let theta2 = g.mul(mu(2), g.inv(mu(1)));
    let log2 = |e: Element| g.element_order(e).trailing_zeros();
    let k_prime = log2(theta1);
    let sum = g.mul(theta1, theta2);
    let k = log2(sum);
    if k_prime < k {
        return Err(format!("k' = {k_prime} < k = {k}"));
    }
    let plus_order = members.iter().filter(|&&b| b).count() as u64;
    let span = g.closure(&[theta1, sum]);
    let inside = span.iter().zip(&members).all(|(&s, &m)| !s || m);
    let span_order = span.iter().filter(|&&b| b).count() as u64;
    if !inside || span_order != plus_order || plus_order != 1u64 << (k + k_prime) {
        return Err(format!("G+ is not <theta1> x <theta1 theta2> of order 2^(k+k') = 2^{}", k + k_prime));
    }
    let diff_order = g.element_order(g.mul(theta1, g.inv(theta2)));
    if diff_order != 1u64 << (k_prime.saturating_sub(1)).max(k) {
        return Err(format!("|theta1 - theta2| = {diff_order}, expected 2^max(k'-1, k)"));
    }
    if bal.kind != MapType::I {
        return Err("quotient map is not of type I".into());
    }
    let d = map.valency() as u64;
    if d != 1u64 << (k + 1) || (bal.t + 1) % d != 0 {
        return Err(format!("valency {d} is not 2^(k+1) = {} dividing t+1 = {}", 1u64 << (k + 1), bal.t + 1));
    }
    let psi_sq = g
        .elements()
        .filter(|&e| members[g.index(e)])
        .all(|e| skew.apply(g, skew.apply(g, e)) == e);
    if !psi_sq {
        return Err("(psi+)^2 != id".into());
    }
    Ok(AbelianRbcmProfile {
        theta1,
        theta2,
        k,
        k_prime,
        valency: d,
        t: bal.t,
        kind: bal.kind,
        order_theta1_minus_theta2: diff_order,
        psi_plus_squared_is_identity: psi_sq,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Genus {
    pub vertices: u64,
    pub edges: u64,
    pub faces: u64,
    pub genus: u64,
}

/// Faces are traced by "rotation successor of the reversed dart":
/// `(v, p) -> (v w_p, iota(p) + 1)`. The mirror convention `iota(p) - 1` is
/// also traced and must give the same face count.
pub fn genus(map: &CayleyMap) -> Genus {
    let faces = count_faces(map, 1);
    let mirror = count_faces(map, map.valency() - 1);
    assert_eq!(faces, mirror, "face count depends on orientation convention");
    let v = map.group().order();
    let e = v * map.valency() as u64 / 2;
    let chi = v as i64 - e as i64 + faces as i64;
    assert!(chi <= 2 && (2 - chi) % 2 == 0, "Euler characteristic {chi} is not 2 - 2g");
    Genus { vertices: v, edges: e, faces, genus: ((2 - chi) / 2) as u64 }
}

fn count_faces(map: &CayleyMap, step: usize) -> u64 {
    let g = map.group();
    let d = map.valency();
    let darts = g.order() as usize * d;
    let mut seen = vec![false; darts];
    let mut faces = 0;
    for start in 0..darts {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            let (v, p) = (x / d, x % d);
            let w = g.index(g.mul(g.element_at(v), map.omega[p]));
            x = w * d + (map.iota[p] as usize + step) % d;
        }
    }
    faces
}

/// Structural consequences of the skew identity for a t-balanced regular map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerFunctionReport {
    pub pi_on_omega_is_t: bool,
    pub pi_values_in_1_t: bool,
    pub kernel_index_two: bool,
    pub kernel_is_even_words: bool,
    pub phi_preserves_kernel: bool,
    pub phi_on_kernel_is_automorphism: bool,
}

impl PowerFunctionReport {
    pub fn all(&self) -> bool {
        self.pi_on_omega_is_t
            && self.pi_values_in_1_t
            && self.kernel_index_two
            && self.kernel_is_even_words
            && self.phi_preserves_kernel
            && self.phi_on_kernel_is_automorphism
    }
}

/// For `t > 1`: `pi(w) = t` on `Omega`, `pi` takes values in `{1, t}`,
/// `ker pi` is the index-2 subgroup of even-length words, and `phi` restricts
/// to an automorphism of it. For `t = 1`: `pi = 1` and `phi` is an automorphism.
pub fn power_function_checks(map: &CayleyMap, skew: &SkewMorphism, bal: &BalanceData) -> PowerFunctionReport {
    let g = map.group();
    let n = g.order() as usize;
    let t = bal.t as u32;
    let kernel: Vec<bool> = skew.pi.iter().map(|&p| p == 1).collect();
    let kernel_size = kernel.iter().filter(|&&b| b).count();
    let hom_on_kernel = (0..n).into_par_iter().filter(|&x| kernel[x]).all(|x| {
        let ex = g.element_at(x);
        let fx = skew.apply(g, ex);
        (0..n).filter(|&y| kernel[y]).all(|y| {
            let ey = g.element_at(y);
            skew.apply(g, g.mul(ex, ey)) == g.mul(fx, skew.apply(g, ey))
        })
    });
    let preserves = (0..n).filter(|&x| kernel[x]).all(|x| kernel[skew.phi[x] as usize]);
    if t == 1 {
        return PowerFunctionReport {
            pi_on_omega_is_t: map.omega().iter().all(|&w| skew.pi_of(g, w) == 1),
            pi_values_in_1_t: kernel_size == n,
            kernel_index_two: true,
            kernel_is_even_words: true,
            phi_preserves_kernel: preserves,
            phi_on_kernel_is_automorphism: hom_on_kernel,
        };
    }
    let even = even_words(map);
    PowerFunctionReport {
        pi_on_omega_is_t: map.omega().iter().all(|&w| skew.pi_of(g, w) == t),
        pi_values_in_1_t: skew.pi.iter().all(|&p| p == 1 || p == t),
        kernel_index_two: 2 * kernel_size == n,
        kernel_is_even_words: even == kernel,
        phi_preserves_kernel: preserves,
        phi_on_kernel_is_automorphism: hom_on_kernel,
    }
}

/// Elements that are products of an even number of generators.
fn even_words(map: &CayleyMap) -> Vec<bool> {
    let g = map.group();
    let n = g.order() as usize;
    let mut seen = vec![[false; 2]; n];
    let id = g.index(g.identity());
    seen[id][0] = true;
    let mut queue = VecDeque::from([(g.identity(), 0usize)]);
    while let Some((v, par)) = queue.pop_front() {
        for &w in map.omega() {
            let u = g.mul(v, w);
            let ui = g.index(u);
            if !seen[ui][1 - par] {
                seen[ui][1 - par] = true;
                queue.push_back((u, 1 - par));
            }
        }
    }
    seen.iter().map(|s| s[0]).collect()
}

/// On-disk form of a map: group descriptor, `Omega` as coordinate pairs and an
/// optional skew-morphism given by its images on `Omega` plus the full `pi`
/// table in element-index order (`x + n y`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub group: String,
    pub omega: Vec<Element>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skew: Option<SkewJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkewJson {
    pub generator_images: Vec<Element>,
    pub pi: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("bad group descriptor: {0}")]
    Group(#[from] GroupError),
    #[error("bad generating set: {0}")]
    Map(#[from] MapError),
    #[error("skew table: {0}")]
    Shape(String),
    #[error(transparent)]
    Skew(#[from] SkewFailure),
}

impl MapJson {
    pub fn from_map(map: &CayleyMap, skew: Option<&SkewMorphism>) -> MapJson {
        let g = map.group();
        MapJson {
            group: map.descriptor().to_string(),
            omega: map.omega().to_vec(),
            skew: skew.map(|s| SkewJson {
                generator_images: map.omega().iter().map(|&w| s.apply(g, w)).collect(),
                pi: s.pi.clone(),
            }),
        }
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn parse(text: &str) -> Result<MapJson, JsonError> {
        serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
    }

    /// Builds the map and, if present, rebuilds `phi` from the generator images
    /// and `pi`, then checks the skew identity on every pair.
    pub fn load(&self) -> Result<(CayleyMap, Option<SkewMorphism>), JsonError> {
        let descriptor: GroupDescriptor = self.group.parse()?;
        let map = CayleyMap::new(descriptor, self.omega.clone())?;
        let skew = match &self.skew {
            None => None,
            Some(s) => {
                let skew = rebuild_skew(&map, s)?;
                verify_with_pi(map.group(), &skew)?;
                Some(skew)
            }
        };
        Ok((map, skew))
    }
}

/// `phi(v w) = phi(v) phi^pi(v)(w)` along the Cayley graph from the identity.
/// Any clash is reported as the pair `(v, w)` where it shows up.
fn rebuild_skew(map: &CayleyMap, s: &SkewJson) -> Result<SkewMorphism, JsonError> {
    let g = map.group();
    let n = g.order() as usize;
    let d = map.valency();
    if s.generator_images.len() != d {
        return Err(JsonError::Shape(format!("{} generator images for valency {d}", s.generator_images.len())));
    }
    if s.pi.len() != n {
        return Err(JsonError::Shape(format!("pi table has {} entries for a group of order {n}", s.pi.len())));
    }
    // phi restricted to Omega, as a map on positions.
    let mut on_omega = Vec::with_capacity(d);
    for &img in &s.generator_images {
        match map.position(img) {
            Some(p) => on_omega.push(p),
            None => return Err(JsonError::Shape(format!("image {img} lies outside Omega"))),
        }
    }
    let mut phi = vec![NONE; n];
    let id = g.index(g.identity());
    phi[id] = id as u32;
    let mut queue = VecDeque::from([id]);
    while let Some(v) = queue.pop_front() {
        let gv = g.element_at(v);
        let fv = g.element_at(phi[v] as usize);
        let k = s.pi[v] as usize;
        for p in 0..d {
            let mut q = p;
            for _ in 0..k {
                q = on_omega[q];
            }
            let target = g.index(g.mul(fv, map.omega[q]));
            let next = g.index(g.mul(gv, map.omega[p]));
            if phi[next] == NONE {
                phi[next] = target as u32;
                queue.push_back(next);
            } else if phi[next] as usize != target {
                return Err(skew_failure(g, v, g.index(map.omega[p]), "generator images and pi disagree").into());
            }
        }
    }
    Ok(SkewMorphism { phi, pi: s.pi.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmap(n: u64, gens: &[u64]) -> CayleyMap {
        let g = Group::cyclic(n).unwrap();
        CayleyMap::from_group(&g, gens.iter().map(|&x| Element::new(x, 0)).collect()).unwrap()
    }

    fn doubling_z5() -> Vec<u32> {
        (0..5).map(|x| (2 * x % 5) as u32).collect()
    }

    #[test]
    fn map_validation() {
        let g = Group::cyclic(5).unwrap();
        let e = |x| Element::new(x, 0);
        assert_eq!(CayleyMap::from_group(&g, vec![e(0), e(1)]), Err(MapError::IdentityInOmega));
        assert_eq!(CayleyMap::from_group(&g, vec![e(1)]), Err(MapError::NotInverseClosed(e(1))));
        let g6 = Group::cyclic(6).unwrap();
        assert_eq!(CayleyMap::from_group(&g6, vec![e(2), e(4)]), Err(MapError::NotGenerating));
    }

    #[test]
    fn check_skew_examples() {
        let m = zmap(5, &[1, 2, 4, 3]);
        let id: Vec<u32> = (0..5).collect();
        let s = check_skew(m.group(), &id).unwrap();
        assert!(s.pi.iter().all(|&p| p == 1));
        let s = check_skew(m.group(), &doubling_z5()).unwrap();
        assert!(s.pi.iter().all(|&p| p == 1));
        let bad: Vec<u32> = vec![0, 2, 1, 3, 4];
        assert!(check_skew(m.group(), &bad).is_err());
    }

    #[test]
    fn regularity_examples() {
        let s = is_regular(&zmap(3, &[1, 2])).unwrap();
        assert_eq!(s.phi, vec![0, 2, 1]);
        let s = is_regular(&zmap(5, &[1, 2, 4, 3])).unwrap();
        assert_eq!(s.phi, doubling_z5());
        assert!(is_regular(&zmap(5, &[1, 2, 3, 4])).is_none());
        assert!(is_regular_exhaustive(&zmap(5, &[1, 2, 4, 3])));
        assert!(!is_regular_exhaustive(&zmap(5, &[1, 2, 3, 4])));
    }

    #[test]
    fn balance_examples() {
        let b = balance_data(&zmap(5, &[1, 2, 4, 3])).unwrap();
        assert_eq!((b.t, b.ell, b.kind), (1, 2, MapType::I));
        assert!(b.is_normalized());
        let b = balance_data(&zmap(4, &[1, 3])).unwrap();
        assert_eq!(b.t, 1);
        // Z_4 with an involution in Omega
        let b = balance_data(&zmap(4, &[1, 2, 3])).unwrap();
        assert_eq!(b.kind, MapType::II);
    }

    #[test]
    fn normalization_examples() {
        let m = zmap(5, &[1, 2, 4, 3]);
        let b = balance_data(&m).unwrap();
        let (m2, b2) = normalize_indexing(&m, &b).unwrap();
        assert_eq!(m2, m);
        assert_eq!(b2, b);
        let shifted = m.shifted(1);
        let bs = balance_data(&shifted).unwrap();
        let (m3, b3) = normalize_indexing(&shifted, &bs).unwrap();
        assert!(b3.is_normalized());
        assert!(are_isomorphic(&m3, &m).unwrap().is_some());
    }

    #[test]
    fn isomorphism_examples() {
        let m = zmap(5, &[1, 2, 4, 3]);
        let iso = are_isomorphic(&m, &m).unwrap().unwrap();
        assert_eq!(iso.shift, 0);
        let iso = are_isomorphic(&m, &m.shifted(1)).unwrap().unwrap();
        assert_eq!(iso.images[1], m.shifted(1).omega_at(1 + iso.shift as i64));
        assert!(are_isomorphic(&m, &zmap(5, &[1, 4, 2, 3])).unwrap().is_none());
        assert!(are_isomorphic(&m, &zmap(3, &[1, 2])).is_err());
    }

    #[test]
    fn genus_examples() {
        let g = genus(&zmap(3, &[1, 2]));
        assert_eq!((g.vertices, g.edges, g.faces, g.genus), (3, 3, 2, 0));
        let g = genus(&zmap(4, &[1, 3]));
        assert_eq!((g.vertices, g.edges, g.faces, g.genus), (4, 4, 2, 0));
        let g = genus(&zmap(5, &[1, 2, 4, 3]));
        assert_eq!((g.vertices, g.edges, g.faces, g.genus), (5, 10, 5, 1));
    }

    #[test]
    fn orbit_of_valency_two() {
        let m = zmap(4, &[1, 3]);
        let s = is_regular(&m).unwrap();
        let b = balance_data(&m).unwrap();
        let o = generator_orbit(&m, &b, &s).unwrap();
        assert_eq!(o.eta, vec![Element::new(2, 0), Element::new(2, 0)]);
    }
}
