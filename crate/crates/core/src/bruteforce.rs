//! Exhaustive searches used as oracles for the structured machinery.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automorphism;
use crate::cayley::{self, balance_data, BalanceData, CayleyMap, SkewMorphism};
use crate::metacyclic::{Delta, Element, Group, GroupDescriptor, GroupError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_order: u64,
    pub max_candidates: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_order: 64, max_candidates: 1 << 32, time_limit: None }
    }
}

impl SearchBudget {
    pub fn check_order(&self, g: &Group) -> Result<(), BruteError> {
        if g.order() > self.max_order {
            return Err(BruteError::OrderTooLarge { order: g.order(), max: self.max_order });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error)]
pub enum BruteError {
    #[error("group order {order} exceeds the budget {max}")]
    OrderTooLarge { order: u64, max: u64 },
    #[error("search budget exceeded ({reason}); {} maps found before stopping", partial.len())]
    BudgetExceeded { reason: String, partial: Vec<FoundMap> },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Shared stop condition for parallel workers.
struct Meter {
    start: Instant,
    budget: SearchBudget,
    count: AtomicU64,
    stopped: AtomicBool,
}

impl Meter {
    fn new(budget: SearchBudget) -> Meter {
        Meter { start: Instant::now(), budget, count: AtomicU64::new(0), stopped: AtomicBool::new(false) }
    }

    /// Records `k` candidates; false once the budget is gone.
    fn tick(&self, k: u64) -> bool {
        if self.stopped.load(Ordering::Relaxed) {
            return false;
        }
        let c = self.count.fetch_add(k, Ordering::Relaxed) + k;
        let over_time = self.budget.time_limit.is_some_and(|t| self.start.elapsed() > t);
        if c > self.budget.max_candidates || over_time {
            self.stopped.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn exhausted(&self) -> Option<String> {
        if !self.stopped.load(Ordering::Relaxed) {
            return None;
        }
        Some(match self.budget.time_limit {
            Some(t) if self.start.elapsed() > t => format!("time limit {}s", t.as_secs()),
            _ => format!("candidate limit {}", self.budget.max_candidates),
        })
    }
}

/// All `(image of a, image of b)` defining automorphisms, sorted.
pub fn enumerate_automorphisms(g: &Group) -> Result<Vec<(Element, Element)>, BruteError> {
    const LIMIT: u64 = 1 << 12;
    if g.order() > LIMIT {
        return Err(BruteError::OrderTooLarge { order: g.order(), max: LIMIT });
    }
    let elems: Vec<Element> = g.elements().collect();
    let a_ord = g.n();
    let mut out: Vec<(Element, Element)> = elems
        .par_iter()
        .filter(|&&ai| g.element_order(ai) == a_ord)
        .flat_map_iter(|&ai| {
            elems
                .iter()
                .filter(move |&&bi| g.relations_hold(g, ai, bi) && g.closure(&[ai, bi]).iter().all(|&x| x))
                .map(move |&bi| (ai, bi))
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Each automorphism as an image table over element indices.
pub fn automorphism_tables(g: &Group) -> Result<Vec<Vec<u32>>, BruteError> {
    Ok(enumerate_automorphisms(g)?
        .into_iter()
        .map(|(ai, bi)| g.elements().map(|e| g.index(g.hom_apply(ai, bi, e)) as u32).collect())
        .collect())
}

/// A verified regular t-balanced map.
#[derive(Debug, Clone)]
pub struct FoundMap {
    pub map: CayleyMap,
    pub skew: SkewMorphism,
    pub balance: BalanceData,
}

/// Lexicographically least coordinate list of `Omega` over all automorphic
/// images and cyclic shifts.
pub fn canonical_form(map: &CayleyMap, auts: &[Vec<u32>]) -> Vec<Element> {
    let g = map.group();
    let d = map.valency();
    let mut best: Option<Vec<Element>> = None;
    for sigma in auts {
        let img: Vec<Element> = map.omega().iter().map(|&w| g.element_at(sigma[g.index(w)] as usize)).collect();
        for j in 0..d {
            let cand: Vec<Element> = (0..d).map(|i| img[(i + j) % d]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("identity automorphism is always present")
}

/// Re-verifies a map from the definitions only.
fn verify_found(map: CayleyMap) -> Option<FoundMap> {
    let skew = cayley::is_regular(&map)?;
    let balance = balance_data(&map)?;
    Some(FoundMap { map, skew, balance })
}

/// Dedupes raw `Omega` sequences by canonical form and re-verifies the
/// canonical representatives.
fn finish(g: &Group, raw: Vec<Vec<Element>>, auts: &[Vec<u32>]) -> Vec<FoundMap> {
    let mut seen = HashSet::new();
    let mut classes: BTreeMap<Vec<Element>, ()> = BTreeMap::new();
    for omega in raw {
        let d = omega.len();
        let start = (0..d).min_by_key(|&i| omega[i]).unwrap_or(0);
        let rot: Vec<Element> = (0..d).map(|i| omega[(i + start) % d]).collect();
        if !seen.insert(rot.clone()) {
            continue;
        }
        let map = CayleyMap::from_group(g, rot).expect("searched maps are valid");
        classes.insert(canonical_form(&map, auts), ());
    }
    classes
        .into_keys()
        .filter_map(|omega| verify_found(CayleyMap::from_group(g, omega).expect("canonical form is a valid map")))
        .collect()
}

/// Nontrivial homomorphisms to `Z_2`, as `(x, y) -> e1 x + e2 y mod 2`.
fn index2_characters(g: &Group) -> Vec<(u64, u64)> {
    [(1, 0), (0, 1), (1, 1)]
        .into_iter()
        .filter(|&(e1, e2)| {
            (g.n() * e1) % 2 == 0 && (g.m() * e2) % 2 == 0 && (e1 * g.r()) % 2 == e1 % 2
        })
        .collect()
}

/// A generating pair of the subgroup given by `member`.
fn generating_pair(g: &Group, member: &[bool]) -> (Element, Element) {
    let elems: Vec<Element> = g.elements().filter(|&e| member[g.index(e)]).collect();
    let size = elems.len();
    for &h1 in &elems {
        for &h2 in &elems {
            if g.closure(&[h1, h2]).iter().filter(|&&b| b).count() == size {
                return (h1, h2);
            }
        }
    }
    unreachable!("subgroups of metacyclic groups are 2-generated")
}

/// Automorphisms of a subgroup, found by trying every image of a generating
/// pair and propagating over the Cayley graph of the subgroup.
fn subgroup_automorphisms(g: &Group, member: &[bool]) -> Vec<Vec<u32>> {
    let (h1, h2) = generating_pair(g, member);
    let elems: Vec<Element> = g.elements().filter(|&e| member[g.index(e)]).collect();
    let n = g.order() as usize;
    let extend = |i1: Element, i2: Element| -> Option<Vec<u32>> {
        let mut img = vec![u32::MAX; n];
        let mut hit = vec![false; n];
        let id = g.index(g.identity());
        img[id] = id as u32;
        hit[id] = true;
        let mut stack = vec![g.identity()];
        while let Some(v) = stack.pop() {
            let fv = g.element_at(img[g.index(v)] as usize);
            for (s, t) in [(h1, i1), (h2, i2)] {
                let w = g.index(g.mul(v, s));
                let target = g.index(g.mul(fv, t));
                if img[w] == u32::MAX {
                    if hit[target] {
                        return None;
                    }
                    img[w] = target as u32;
                    hit[target] = true;
                    stack.push(g.element_at(w));
                } else if img[w] as usize != target {
                    return None;
                }
            }
        }
        Some(img)
    };
    elems
        .par_iter()
        .flat_map_iter(|&i1| elems.iter().filter_map(move |&i2| extend(i1, i2)))
        .collect()
}

/// All regular t-balanced Cayley maps on `g`, one per isomorphism class,
/// sorted by canonical form.
///
/// For `t > 1` the search runs over index-2 subgroups `H = ker pi`,
/// automorphisms `phi+` of `H` and `w_d, w_1` outside `H`, with
/// `phi(h w_d) = phi+(h) w_1`. The `t = 1` arm runs over automorphisms and
/// their inverse-closed generating orbits.
pub fn enumerate_rbcm(g: &Group, budget: SearchBudget) -> Result<Vec<FoundMap>, BruteError> {
    budget.check_order(g)?;
    let meter = Meter::new(budget);
    let auts = automorphism_tables(g)?;
    let n = g.order() as usize;
    let mut raw: Vec<Vec<Element>> = Vec::new();

    for &(e1, e2) in &index2_characters(g) {
        let member: Vec<bool> = g.elements().map(|e| (e1 * e.x + e2 * e.y) % 2 == 0).collect();
        let outside: Vec<Element> = g.elements().filter(|e| !member[g.index(*e)]).collect();
        let plus_auts = subgroup_automorphisms(g, &member);
        let found: Vec<Vec<Element>> = plus_auts
            .par_iter()
            .flat_map_iter(|pp| {
                let mut local = Vec::new();
                if !meter.tick((outside.len() * outside.len()) as u64) {
                    return local;
                }
                for &wd in &outside {
                    let wd_inv = g.inv(wd);
                    for &w1 in &outside {
                        if let Some(omega) = coset_orbit(g, pp, wd, wd_inv, w1, n) {
                            local.push(omega);
                        }
                    }
                }
                local
            })
            .collect();
        raw.extend(found);
    }

    for sigma in &auts {
        if !meter.tick(1) {
            break;
        }
        let mut seen = vec![false; n];
        for start in g.elements().filter(|&e| e != g.identity()) {
            if seen[g.index(start)] {
                continue;
            }
            let mut orbit = vec![start];
            seen[g.index(start)] = true;
            let mut cur = g.element_at(sigma[g.index(start)] as usize);
            while cur != start {
                seen[g.index(cur)] = true;
                orbit.push(cur);
                cur = g.element_at(sigma[g.index(cur)] as usize);
            }
            if orbit.iter().all(|&w| orbit.contains(&g.inv(w))) && g.generates(&orbit) {
                raw.push(orbit);
            }
        }
    }

    let maps = finish(g, raw, &auts);
    match meter.exhausted() {
        Some(reason) => Err(BruteError::BudgetExceeded { reason, partial: maps }),
        None => Ok(maps),
    }
}

/// The `phi`-orbit of `w_d` when it is a valid regular t-balanced map.
fn coset_orbit(g: &Group, pp: &[u32], wd: Element, wd_inv: Element, w1: Element, n: usize) -> Option<Vec<Element>> {
    let phi = |e: Element| -> Element {
        let i = g.index(e);
        if pp[i] != u32::MAX {
            g.element_at(pp[i] as usize)
        } else {
            let h = g.mul(e, wd_inv);
            g.mul(g.element_at(pp[g.index(h)] as usize), w1)
        }
    };
    let mut omega = vec![w1];
    let mut cur = w1;
    while cur != wd {
        cur = phi(cur);
        omega.push(cur);
        if omega.len() > n {
            return None;
        }
    }
    if !omega.iter().all(|&w| omega.contains(&g.inv(w))) || !g.generates(&omega) {
        return None;
    }
    let map = CayleyMap::from_group(g, omega.clone()).ok()?;
    let skew = cayley::regular_by_propagation(&map)?;
    balance_data(&map)?;
    (0..n).all(|i| skew.phi[i] == g.index(phi(g.element_at(i))) as u32).then_some(omega)
}

/// The naive oracle: every inverse-closed generating set and every cyclic
/// order of it satisfying the balance identity, with regularity decided by
/// counting map automorphisms.
///
/// The balance identity `iota(p + t) = iota(p) + 1` forces `t` to be a unit
/// and `iota(p) = c + s p` with `s = t^-1`, so orders are built by choosing
/// `(s, c)` and placing each generator together with its inverse. Partial
/// orders are pruned when the dart permutation forced by `(1, w_1) -> (1, w_2)`
/// already conflicts on the known darts.
pub fn enumerate_rbcm_naive(g: &Group, budget: SearchBudget) -> Result<Vec<FoundMap>, BruteError> {
    const LIMIT: u64 = 32;
    if g.order() > LIMIT.min(budget.max_order) {
        return Err(BruteError::OrderTooLarge { order: g.order(), max: LIMIT.min(budget.max_order) });
    }
    let meter = Meter::new(budget);
    let auts = automorphism_tables(g)?;
    let mut classes: Vec<Vec<Element>> = Vec::new();
    for e in g.elements().filter(|&e| e != g.identity()) {
        let inv = g.inv(e);
        if e <= inv {
            classes.push(if e == inv { vec![e] } else { vec![e, inv] });
        }
    }
    let k = classes.len();
    let subsets: Vec<Vec<Element>> = (1u64..1 << k)
        .map(|mask| {
            let mut s: Vec<Element> =
                (0..k).filter(|i| mask >> i & 1 == 1).flat_map(|i| classes[i].iter().copied()).collect();
            s.sort();
            s
        })
        .filter(|s| g.generates(s))
        .filter(|s| {
            // one generating set per automorphism orbit
            auts.iter().all(|sigma| {
                let mut img: Vec<Element> = s.iter().map(|&e| g.element_at(sigma[g.index(e)] as usize)).collect();
                img.sort();
                img >= *s
            })
        })
        .collect();
    let jobs: Vec<(usize, Vec<usize>)> = subsets
        .iter()
        .enumerate()
        .flat_map(|(i, s)| affine_involutions(s.len()).into_iter().map(move |io| (i, io)))
        .collect();
    let raw: Vec<Vec<Element>> = jobs
        .par_iter()
        .flat_map_iter(|(i, iota)| {
            let s = &subsets[*i];
            let mut out = Vec::new();
            let mut slots = vec![None; s.len()];
            let dist = word_lengths(g, s);
            if place(g, s, iota, &mut slots, 0, s[0]) {
                naive_dfs(g, s, iota, &dist, &mut slots, &meter, &mut out);
            }
            out
        })
        .collect();
    let maps = finish(g, raw, &auts);
    match meter.exhausted() {
        Some(reason) => Err(BruteError::BudgetExceeded { reason, partial: maps }),
        None => Ok(maps),
    }
}

/// All involutions `p -> c + s p` of `Z_d` with `s` a unit.
fn affine_involutions(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for s in 1..=d {
        if crate::modular::gcd(s as u64, d as u64) != 1 {
            continue;
        }
        for c in 0..d {
            let iota: Vec<usize> = (0..d).map(|p| (c + s * p) % d).collect();
            if (0..d).all(|p| iota[iota[p]] == p) {
                out.push(iota);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Puts `e` at `p` and `e^-1` at `iota(p)`, if that is consistent.
fn place(g: &Group, s: &[Element], iota: &[usize], slots: &mut [Option<Element>], p: usize, e: Element) -> bool {
    let inv = g.inv(e);
    let q = iota[p];
    if (q == p) != (inv == e) || slots[p].is_some() || slots[q].is_some() {
        return false;
    }
    if slots.contains(&Some(e)) || slots.contains(&Some(inv)) || !s.contains(&inv) {
        return false;
    }
    slots[p] = Some(e);
    slots[q] = Some(inv);
    true
}

fn naive_dfs(
    g: &Group,
    s: &[Element],
    iota: &[usize],
    dist: &[u32],
    slots: &mut Vec<Option<Element>>,
    meter: &Meter,
    out: &mut Vec<Vec<Element>>,
) {
    if !meter.tick(1) || !partial_rotation_consistent(g, slots, iota, dist) {
        return;
    }
    let Some(p) = slots.iter().position(|x| x.is_none()) else {
        let order: Vec<Element> = slots.iter().map(|x| x.expect("all slots filled")).collect();
        let map = CayleyMap::from_group(g, order.clone()).expect("valid by construction");
        if cayley::is_regular_exhaustive(&map) && balance_data(&map).is_some() {
            out.push(order);
        }
        return;
    };
    let q = iota[p];
    for &e in s.iter().skip(1) {
        if place(g, s, iota, slots, p, e) {
            naive_dfs(g, s, iota, dist, slots, meter, out);
            slots[p] = None;
            slots[q] = None;
        }
    }
}

/// Darts are `(v, p)`; rotation `R(v, p) = (v, p+1)` is always known, the
/// reversal `L(v, p) = (v w_p, iota(p))` once `w_p` is placed. Forces
/// `psi(1, 0) = (1, 1)` through both and looks for a clash. Since `psi` fixes
/// vertex 1 it must also preserve the graph distance from 1.
fn partial_rotation_consistent(g: &Group, slots: &[Option<Element>], iota: &[usize], dist: &[u32]) -> bool {
    let d = slots.len();
    let n = g.order() as usize;
    let rev = |x: usize| -> Option<usize> {
        let (v, p) = (x / d, x % d);
        let w = slots[p]?;
        Some(g.index(g.mul(g.element_at(v), w)) * d + iota[p])
    };
    let rot = |x: usize| (x / d) * d + (x % d + 1) % d;
    let darts = n * d;
    let mut psi = vec![usize::MAX; darts];
    let mut hit = vec![false; darts];
    let id = g.index(g.identity()) * d;
    psi[id] = id + 1 % d;
    hit[id + 1 % d] = true;
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        let y = psi[x];
        let mut pairs = [(rot(x), rot(y)), (usize::MAX, usize::MAX)];
        if let (Some(a), Some(b)) = (rev(x), rev(y)) {
            pairs[1] = (a, b);
        }
        for (src, dst) in pairs {
            if src == usize::MAX {
                continue;
            }
            if psi[src] == usize::MAX {
                if hit[dst] || dist[src / d] != dist[dst / d] {
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
    true
}

/// Distance from the identity in the Cayley graph of `s`.
fn word_lengths(g: &Group, s: &[Element]) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.order() as usize];
    dist[g.index(g.identity())] = 0;
    let mut queue = std::collections::VecDeque::from([g.identity()]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[g.index(v)];
        for &w in s {
            let u = g.index(g.mul(v, w));
            if dist[u] == u32::MAX {
                dist[u] = dv + 1;
                queue.push_back(g.element_at(u));
            }
        }
    }
    dist
}

/// Outcome of the search restricted to the branch the classification proves
/// necessary.
#[derive(Debug, Clone)]
pub struct GuidedResult {
    pub maps: Vec<FoundMap>,
    pub exhaustive: bool,
    pub candidates: u64,
    pub stop_reason: Option<String>,
}

/// Why a guided candidate `(phi+, eta_1, w_d)` was rejected early.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pruned {
    EvenY1,
    SeedInPlus,
    OrbitDoesNotClose,
    NoInverseOfSeed,
    Inverse2,
}

/// The guided search's pruning predicates, exposed so verified maps can be
/// replayed through them. `phi_plus` is given on `D+ = L(2^(a-1), 2^b; r)`.
pub fn guided_prune(delta: &Delta, phi_plus: &automorphism::AutParams, eta1: Element, wd: Element) -> Result<Vec<Element>, Pruned> {
    let g = delta.group();
    let gp = automorphism::plus_group(delta);
    if phi_plus.y1 % 2 == 0 {
        return Err(Pruned::EvenY1);
    }
    if wd.x % 2 == 0 {
        return Err(Pruned::SeedInPlus);
    }
    let lift = |e: Element| Element::new(2 * e.x, e.y);
    let drop = |e: Element| Element::new(e.x / 2, e.y);
    let wd_inv = g.inv(wd);
    let target = g.mul(wd_inv, wd_inv);
    // w_j = eta_j ... eta_1 w_d with eta_(j+1) = phi+(eta_j)
    let mut eta = eta1;
    let mut prod = eta1;
    let mut omega = Vec::new();
    let mut ell = None;
    let limit = g.order() as usize;
    loop {
        omega.push(g.mul(prod, wd));
        if prod == target && ell.is_none() {
            ell = Some(omega.len());
        }
        if prod == g.identity() {
            break;
        }
        if omega.len() > limit {
            return Err(Pruned::OrbitDoesNotClose);
        }
        eta = lift(automorphism::apply(&gp, phi_plus, drop(eta)));
        prod = g.mul(eta, prod);
    }
    if ell.is_none() {
        return Err(Pruned::NoInverseOfSeed);
    }
    // g_i is the b-exponent of w_i w_d^-1; for w_(iota(i)) = w_i^-1 it must
    // satisfy g_(iota(i)) + g_i + 2 y_d == 0 (mod 2^b)
    let mb = g.m();
    for &w in &omega {
        let winv = g.inv(w);
        if !omega.contains(&winv) {
            return Err(Pruned::Inverse2);
        }
        let gi = g.mul(w, wd_inv).y;
        let gj = g.mul(winv, wd_inv).y;
        if (gi + gj + 2 * wd.y) % mb != 0 {
            return Err(Pruned::Inverse2);
        }
    }
    Ok(omega)
}

/// Search over `phi+` in `Aut(D+)` with odd `y1`, `eta_1` in `D+` and `w_d`
/// outside `D+`, with `w_d` taken up to automorphisms of `D` fixing `D+`.
/// With `exhaustive = false` only `w_d = a^u b` with `0 < u < 2^(a-c)` are tried.
pub fn guided_search_delta(delta: &Delta, budget: SearchBudget, exhaustive: bool) -> Result<GuidedResult, BruteError> {
    let g = delta.group();
    let gp = automorphism::plus_group(delta);
    let meter = Meter::new(budget);
    let plus_auts: Vec<automorphism::AutParams> = automorphism::enumerate_params(&gp)
        .map_err(|e| GroupError::Parse(e.to_string()))?
        .into_iter()
        .filter(|p| p.y1 % 2 == 1)
        .collect();
    let seeds: Vec<Element> = if exhaustive {
        seed_representatives(delta)
    } else {
        (1..1u64 << (delta.a - delta.c)).filter(|u| u % 2 == 1).map(|u| Element::new(u, 1)).collect()
    };
    let etas: Vec<Element> = gp.elements().map(|e| Element::new(2 * e.x, e.y)).collect();
    let work: Vec<(usize, usize)> =
        (0..plus_auts.len()).flat_map(|i| (0..seeds.len()).map(move |j| (i, j))).collect();
    let raw: Vec<Vec<Element>> = work
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let mut local = Vec::new();
            if !meter.tick(etas.len() as u64) {
                return local;
            }
            for &eta1 in &etas {
                if let Ok(omega) = guided_prune(delta, &plus_auts[i], eta1, seeds[j]) {
                    if g.generates(&omega) {
                        local.push(omega);
                    }
                }
            }
            local
        })
        .collect();
    let mut seen = HashSet::new();
    let mut maps = Vec::new();
    for omega in raw {
        let d = omega.len();
        let start = (0..d).min_by_key(|&i| omega[i]).unwrap_or(0);
        let rot: Vec<Element> = (0..d).map(|i| omega[(i + start) % d]).collect();
        if !seen.insert(rot.clone()) {
            continue;
        }
        let Ok(map) = CayleyMap::new(GroupDescriptor::Delta(*delta), rot) else { continue };
        if let Some(skew) = cayley::regular_by_propagation(&map) {
            if let Some(balance) = balance_data(&map) {
                maps.push(FoundMap { map, skew, balance });
            }
        }
    }
    maps.sort_by(|a, b| a.map.omega().cmp(b.map.omega()));
    let stop_reason = meter.exhausted();
    Ok(GuidedResult {
        maps,
        exhaustive: stop_reason.is_none(),
        candidates: meter.count.load(Ordering::Relaxed),
        stop_reason,
    })
}

/// One element of each orbit of the odd coset under automorphisms of `D`
/// that preserve `D+`.
fn seed_representatives(delta: &Delta) -> Vec<Element> {
    let g = delta.group();
    let auts: Vec<automorphism::AutParams> = automorphism::enumerate_params(&g)
        .unwrap_or_default()
        .into_iter()
        .filter(|p| p.alpha_image().x % 2 == 1 && p.beta_image().x % 2 == 0)
        .collect();
    let mut seen = vec![false; g.order() as usize];
    let mut reps = Vec::new();
    for e in g.elements().filter(|e| e.x % 2 == 1) {
        if seen[g.index(e)] {
            continue;
        }
        reps.push(e);
        for p in &auts {
            seen[g.index(automorphism::apply(&g, p, e))] = true;
        }
    }
    reps
}

/// Same isomorphism classes on both sides, matched by direct search.
pub fn same_classes(a: &[FoundMap], b: &[FoundMap]) -> bool {
    let iso = |x: &FoundMap, y: &FoundMap| matches!(cayley::are_isomorphic(&x.map, &y.map), Ok(Some(_)));
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| iso(x, y))) && b.iter().all(|y| a.iter().any(|x| iso(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphism_counts() {
        let z8 = Group::cyclic(8).unwrap();
        assert_eq!(enumerate_automorphisms(&z8).unwrap().len(), 4);
        let g = Group::new(16, 4, 5).unwrap();
        let n = automorphism::enumerate_params(&g).unwrap().len();
        assert_eq!(enumerate_automorphisms(&g).unwrap().len(), n);
    }

    #[test]
    fn z4_has_the_balanced_square() {
        let g = Group::cyclic(4).unwrap();
        let maps = enumerate_rbcm(&g, SearchBudget::default()).unwrap();
        assert!(maps.iter().any(|m| m.map.omega() == [Element::new(1, 0), Element::new(3, 0)]));
    }

    #[test]
    fn budget_is_enforced() {
        let g = Group::cyclic(128).unwrap();
        assert!(matches!(enumerate_rbcm(&g, SearchBudget::default()), Err(BruteError::OrderTooLarge { .. })));
        let tiny = SearchBudget { max_candidates: 3, ..SearchBudget::default() };
        let g = Group::new(8, 2, 3).unwrap();
        assert!(matches!(enumerate_rbcm(&g, tiny), Err(BruteError::BudgetExceeded { .. })));
    }
}
