//! Classification of regular t-balanced Cayley maps on `D(a,b,c)`.
//!
//! Every map is, up to isomorphism, determined by `z = -1 + 2^(c-2) + 2^(c-1) z1`
//! with `0 <= z1 < 2^(a-c-1)`: `phi+ = sigma(z,0;1,w)` on `D+ = <a^2, b>`,
//! `w_d = a^u~ b` and `eta_1 = a^(2 u1) b^(v1)`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automorphism::{self, normal_form, plus_group, AutParams, Conjugation};
use crate::cayley::{
    self, abelian_profile_check, balance_data, generator_orbit, genus, power_function_checks, AbelianRbcmProfile, BalanceData,
    CayleyMap, Genus, MapType, SkewMorphism,
};
use crate::metacyclic::{Delta, Element, Group, GroupDescriptor, GroupError, QuotientSpec};
use crate::modular::{geom_sum_mod, mul_mod, pow_mod, reduce};
use crate::two_adic::{deg2, inv_mod2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Descriptor(#[from] GroupError),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("verification failed [{tag}]: {detail}")]
    Verification { tag: &'static str, detail: String },
}

fn fail(tag: &'static str, detail: impl Into<String>) -> ClassifyError {
    ClassifyError::Verification { tag, detail: detail.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyLevel {
    /// Regularity by arc propagation, balance and orbit conditions.
    Fast,
    /// Additionally the skew identity on all pairs, the structure of `ker pi`,
    /// pairwise non-isomorphism and the abelian quotient profile.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryReport {
    pub delta: Delta,
    /// `c > b`; otherwise no map exists.
    pub exists: bool,
    pub reason: String,
    /// Lower bound on `deg2(t+1)`.
    pub min_deg_t_plus_1: u32,
    pub expected_count: u64,
}

pub fn check_necessary(a: u32, b: u32, c: u32) -> Result<NecessaryReport, ClassifyError> {
    let delta = Delta::new(a, b, c)?;
    let exists = c > b;
    let (reason, expected_count) = if exists {
        (
            format!("type I with D+ = <a^2, b>; deg2(t+1) >= {}", (b + 1).max(a - c + 2)),
            1u64 << (a - c - 1),
        )
    } else {
        (format!("no RBCM_t exists: c > b required, got c = {c} <= b = {b}"), 0)
    };
    Ok(NecessaryReport { delta, exists, reason, min_deg_t_plus_1: (b + 1).max(a - c + 2), expected_count })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSolution {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub z1: u64,
    pub z: u64,
    pub w: u64,
    pub u_tilde: u64,
    pub u1: u64,
    pub v1: u64,
    pub s: u64,
    pub ell_prime: u64,
    pub t_prime: u64,
    pub t: u64,
    pub d: u64,
    pub ell: u64,
}

/// Which of the four congruences hold for a solution's residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub y_congruence: bool,
    pub x_congruence: bool,
    pub s_congruence: bool,
    pub t_valuation: bool,
    pub t_lower_bound: bool,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.y_congruence && self.x_congruence && self.s_congruence && self.t_valuation && self.t_lower_bound
    }
}

/// Moduli and derived quantities shared by the formulas.
struct Ctx {
    a: u32,
    b: u32,
    c: u32,
    na: u64,
    mb: u64,
    r: u64,
}

impl Ctx {
    fn new(d: &Delta) -> Ctx {
        let na = 1u64 << (d.a - 1);
        Ctx { a: d.a, b: d.b, c: d.c, na, mb: 1u64 << d.b, r: d.r() % na }
    }

    fn md(&self, v: i128) -> u64 {
        reduce(v, self.na)
    }

    fn mbr(&self, v: i128) -> u64 {
        reduce(v, self.mb)
    }

    fn z(&self, z1: u64) -> u64 {
        self.md(-1 + (1i128 << (self.c - 2)) + (1i128 << (self.c - 1)) * z1 as i128)
    }

    fn w(&self) -> u64 {
        self.mbr(1 - (1i128 << (self.c - 2)))
    }

    /// `s = z [z]_r`.
    fn s(&self, z: u64) -> u64 {
        mul_mod(z, geom_sum_mod(self.r, z, self.na), self.na)
    }

    /// `u' = u_2 + r^(u1+v1) u1` with `u_2 = z [u1]_r`.
    fn u_prime(&self, z: u64, u1: u64, v1: u64) -> u64 {
        let u2 = mul_mod(z, geom_sum_mod(self.r, u1, self.na), self.na);
        (u2 + mul_mod(pow_mod(self.r, u1 + v1, self.na), u1, self.na)) % self.na
    }

    /// `v' = u1 + (w+1) v1` mod `2^b`.
    fn v_prime(&self, w: u64, u1: u64, v1: u64) -> u64 {
        (u1 + mul_mod((w + 1) % self.mb, v1, self.mb)) % self.mb
    }

    /// `(z^2 - 1) / 2^(c-1)` as an exact integer.
    fn q(&self, z: u64) -> Result<i128, ClassifyError> {
        let z2m1 = z as i128 * z as i128 - 1;
        if !deg2(z2m1).at_least(self.c as i64 - 1) {
            return Err(ClassifyError::Inconsistent(format!("deg2(z^2-1) < c-1 for z = {z}")));
        }
        Ok(z2m1 >> (self.c - 1))
    }

    fn conditions(&self, z: u64, w: u64, ut: u64, u1: u64, v1: u64, ell: u64, t: u64) -> ConditionReport {
        let lp = ((ell - 1) / 2) as i128;
        let up = self.u_prime(z, u1, v1) as i128;
        let vp = self.v_prime(w, u1, v1) as i128;
        let s = self.s(z) as i128;
        let zp1 = z as i128 + 1;
        let half_c = 1i128 << (self.c - 1);
        let c1 = self.mbr(lp * vp + v1 as i128 + 2) == 0;
        let zp1sq = self.md(zp1 * zp1) as i128;
        let c2 = self.md(
            u1 as i128 + lp * up - self.md(lp * (lp - 1)) as i128 * zp1sq
                + self.md(1 + half_c * (v1 as i128 - 1)) as i128 * ut as i128,
        ) == 0;
        let c3 = self.md(self.md((s - 1) * (up + 1)) as i128 - self.md(half_c * vp) as i128) == 0;
        let t1 = deg2(t as i128 + 1);
        ConditionReport {
            y_congruence: c1,
            x_congruence: c2,
            s_congruence: c3,
            t_valuation: t1.at_least(self.a as i64 - self.c as i64 + 2),
            t_lower_bound: t1.at_least(self.b as i64 + 1),
        }
    }

    /// `(u~, u1, v1)` for a given odd `ell`.
    fn residues(&self, z: u64, w: u64, ell: u64) -> Result<(u64, u64, u64), ClassifyError> {
        if ell % 2 == 0 {
            return Err(ClassifyError::Inconsistent(format!("ell = {ell} is even")));
        }
        let lp = ((ell - 1) / 2) as i128;
        let q = self.q(z)?;
        let mac = 1u64 << (self.a - self.c);
        let ut = reduce(ell as i128 * (2 - q) - 4, mac);
        if ut == 0 {
            return Err(ClassifyError::Inconsistent("u~ = 0 has no representative in (0, 2^(a-c))".into()));
        }
        let divisor = self.mbr(1 + lp * (w as i128 + 1));
        let dinv = inv_mod2(divisor as i64, self.b)
            .map_err(|_| ClassifyError::Inconsistent(format!("1 + l'(w+1) = {divisor} is even")))?
            .value();
        let v1_of = |u1: u64| mul_mod(self.mbr(-(2 + lp * u1 as i128)), dinv, self.mb);
        let half_c = 1i128 << (self.c - 1);
        let zp1 = z as i128 + 1;
        let mut u1 = reduce(ell as i128 * q - lp * ((1i128 << (self.c - 2)) + 4), mac);
        // The coupling through u' and v1 carries a factor 2^(c-2), so this
        // settles within a few rounds.
        for _ in 0..(self.a + self.b + 4) {
            let v1 = v1_of(u1);
            let up = self.u_prime(z, u1, v1) as i128;
            let next = self.md(
                -lp * up + self.md(lp * (lp - 1) * zp1 * zp1) as i128
                    - self.md(1 + half_c * (v1 as i128 - 1)) as i128 * ut as i128,
            );
            if next == u1 {
                return Ok((ut, u1, v1));
            }
            u1 = next;
        }
        Err(ClassifyError::Inconsistent("u1 iteration did not settle".into()))
    }
}

/// Least `t > 1` with `deg2(t+1) >= max{b+1, a-c+2}`.
fn seed_t(d: &Delta) -> u64 {
    (1u64 << (d.b + 1).max(d.a - d.c + 2)) - 1
}

/// The solution for one `z1`, with `(t, d, ell)` settled by rebuilding the
/// map until the values read back from it stop changing. `z1` may exceed the
/// canonical range; such solutions duplicate a canonical class.
pub fn solution_for(delta: &Delta, z1: u64) -> Result<(ClassificationSolution, Construction), ClassifyError> {
    let cx = Ctx::new(delta);
    let z = cx.z(z1);
    let w = cx.w();
    let (mut t, mut ell) = (seed_t(delta), 1u64);
    for _ in 0..4 {
        let (ut, u1, v1) = cx.residues(z, w, ell)?;
        let built = construct(delta, z, w, ut, u1, v1)?;
        let bal = balance_data(&built.map).ok_or_else(|| fail("balance", "constructed map is not t-balanced"))?;
        if bal.t == t && bal.ell == ell {
            let sol = ClassificationSolution {
                a: delta.a,
                b: delta.b,
                c: delta.c,
                z1,
                z,
                w,
                u_tilde: ut,
                u1,
                v1,
                s: cx.s(z),
                ell_prime: (ell - 1) / 2,
                t_prime: (t + 1) / 2,
                t,
                d: bal.d,
                ell,
            };
            let rep = cx.conditions(z, w, ut, u1, v1, ell, t);
            if !rep.all() {
                return Err(ClassifyError::Inconsistent(format!("conditions fail after substitution: {rep:?}")));
            }
            return Ok((sol, built));
        }
        t = bal.t;
        ell = bal.ell;
    }
    Err(ClassifyError::Inconsistent("(t, d, ell) did not stabilize".into()))
}

/// All `2^(a-c-1)` solutions in increasing `z1`, or none when `c < b`.
pub fn solve(a: u32, b: u32, c: u32) -> Result<Vec<ClassificationSolution>, ClassifyError> {
    let rep = check_necessary(a, b, c)?;
    if !rep.exists {
        return Ok(Vec::new());
    }
    (0..rep.expected_count)
        .into_par_iter()
        .map(|z1| solution_for(&rep.delta, z1).map(|(s, _)| s))
        .collect()
}

/// The residues alone, without building the map: `(u~, u1, v1)` for `ell = 1`.
pub fn solve_residues(a: u32, b: u32, c: u32) -> Result<Vec<(u64, u64, u64, u64, ConditionReport)>, ClassifyError> {
    let rep = check_necessary(a, b, c)?;
    if !rep.exists {
        return Ok(Vec::new());
    }
    let cx = Ctx::new(&rep.delta);
    let t = seed_t(&rep.delta);
    (0..rep.expected_count)
        .map(|z1| {
            let z = cx.z(z1);
            let w = cx.w();
            let (ut, u1, v1) = cx.residues(z, w, 1)?;
            Ok((z, ut, u1, v1, cx.conditions(z, w, ut, u1, v1, 1, t)))
        })
        .collect()
}

/// `phi` on `D` and the map generated by the orbit of `w_d`.
#[derive(Debug, Clone)]
pub struct Construction {
    pub map: CayleyMap,
    pub phi: Vec<u32>,
}

/// `phi = phi+` on `D+`, and `phi(e w_d) = phi+(e) w_1` on the other coset.
fn construct(delta: &Delta, z: u64, w: u64, ut: u64, u1: u64, v1: u64) -> Result<Construction, ClassifyError> {
    let g = delta.group();
    let gp = plus_group(delta);
    let plus = normal_form(z, w);
    let phi_plus = |e: Element| -> Element {
        let img = automorphism::apply(&gp, &plus, Element::new(e.x / 2, e.y));
        Element::new(2 * img.x, img.y)
    };
    let wd = Element::new(ut, 1);
    let eta1 = Element::new(2 * u1 % g.n(), v1);
    let w1 = g.mul(eta1, wd);
    let wd_inv = g.inv(wd);
    let phi: Vec<u32> = g
        .elements()
        .map(|e| {
            let img = if e.x % 2 == 0 { phi_plus(e) } else { g.mul(phi_plus(g.mul(e, wd_inv)), w1) };
            g.index(img) as u32
        })
        .collect();
    let mut omega = Vec::new();
    let mut cur = wd;
    loop {
        cur = g.element_at(phi[g.index(cur)] as usize);
        omega.push(cur);
        if cur == wd {
            break;
        }
        if omega.len() > g.order() as usize {
            return Err(fail("orbit", "phi-orbit of w_d does not close"));
        }
    }
    let map = CayleyMap::new(GroupDescriptor::Delta(*delta), omega).map_err(|e| fail("omega", e.to_string()))?;
    Ok(Construction { map, phi })
}

#[derive(Debug, Clone)]
pub struct RealizedRbcm {
    pub solution: ClassificationSolution,
    pub map: CayleyMap,
    pub skew: SkewMorphism,
    pub balance: BalanceData,
    pub genus: Genus,
    pub level: VerifyLevel,
}

/// Builds the map for `sol` and verifies it.
pub fn realize(sol: &ClassificationSolution, level: VerifyLevel) -> Result<RealizedRbcm, ClassifyError> {
    let delta = Delta::new(sol.a, sol.b, sol.c)?;
    let cx = Ctx::new(&delta);
    let built = construct(&delta, sol.z, sol.w, sol.u_tilde, sol.u1, sol.v1)?;
    let map = built.map;
    let g = map.group().clone();
    if map.omega_at(0) != Element::new(sol.u_tilde, 1) {
        return Err(fail("omega_d", "w_d != a^u~ b"));
    }
    let skew = cayley::regular_by_propagation(&map).ok_or_else(|| fail("regular", "arc propagation is inconsistent"))?;
    if skew.phi != built.phi {
        return Err(fail("regular", "propagated phi differs from the constructed phi"));
    }
    let bal = balance_data(&map).ok_or_else(|| fail("balance", "no t satisfies the balance identity"))?;
    if (bal.t, bal.ell, bal.d) != (sol.t, sol.ell, sol.d) {
        return Err(fail("balance", format!("read (t, ell, d) = ({}, {}, {})", bal.t, bal.ell, bal.d)));
    }
    if bal.kind != MapType::I || !bal.is_normalized() || bal.ell % 2 == 0 {
        return Err(fail("normalization", format!("type {} with ell = {}", bal.kind, bal.ell)));
    }
    let rep = cx.conditions(sol.z, sol.w, sol.u_tilde, sol.u1, sol.v1, sol.ell, sol.t);
    if !rep.all() {
        return Err(fail("condition", format!("{rep:?}")));
    }
    // phi+ in D+ coordinates
    if skew.apply(&g, Element::new(2, 0)) != Element::new(2 * sol.z % g.n(), 1)
        || skew.apply(&g, Element::new(0, 1)) != Element::new(0, sol.w)
    {
        return Err(fail("normal-form", "phi+ != sigma(z,0;1,w)"));
    }
    inverse_conditions(&cx, &map, &bal, &skew, sol)?;
    if level == VerifyLevel::Full {
        let checked = cayley::check_skew(&g, &skew.phi).map_err(|e| fail("skew", e.to_string()))?;
        if checked.pi != skew.pi {
            return Err(fail("skew", "derived pi differs from the propagated one"));
        }
        let p = power_function_checks(&map, &skew, &bal);
        if !p.all() {
            return Err(fail("power-function", format!("{p:?}")));
        }
        let plus_kernel = g.elements().all(|e| (skew.pi_of(&g, e) == 1) == (e.x % 2 == 0));
        if !plus_kernel {
            return Err(fail("kernel", "ker pi != <a^2, b>"));
        }
    }
    let genus = genus(&map);
    Ok(RealizedRbcm { solution: sol.clone(), map, skew, balance: bal, genus, level })
}

/// `g_(ell+ti) + g_i + 2 == 0 (mod 2^b)` and
/// `f_(ell+ti) + r^-(g_i+1) f_i + (r^g_(ell+ti) + r^-1) u~ / 2 == 0 (mod 2^(a-1))`.
fn inverse_conditions(
    cx: &Ctx,
    map: &CayleyMap,
    bal: &BalanceData,
    skew: &SkewMorphism,
    sol: &ClassificationSolution,
) -> Result<(), ClassifyError> {
    let orbit = generator_orbit(map, bal, skew).map_err(|e| fail("orbit", e))?;
    let plus = orbit.plus.ok_or_else(|| fail("orbit", "eta_j outside D+"))?;
    let d = bal.d;
    let n = 1u64 << cx.a;
    let r_full = 1 + (1u64 << cx.c);
    let r_inv = inv_mod2(r_full as i64, cx.a).expect("r is odd").value();
    let at = |v: &Vec<u64>, i: u64| v[((i + d - 1) % d) as usize];
    for i in 1..=d {
        let j = (sol.ell + sol.t * i) % d;
        let (gi, gj) = (at(&plus.g, i), at(&plus.g, j));
        if (gj + gi + 2) % cx.mb != 0 {
            return Err(fail("inverse-y", format!("i = {i}")));
        }
        let ri = pow_mod(r_inv, gi + 1, n) % cx.na;
        let half = (pow_mod(r_full, gj, n) + r_inv) % n / 2;
        let lhs = (at(&plus.f, j) + mul_mod(ri, at(&plus.f, i), cx.na) + mul_mod(half, sol.u_tilde, cx.na)) % cx.na;
        if lhs != 0 {
            return Err(fail("inverse-x", format!("i = {i}")));
        }
    }
    Ok(())
}

/// Non-isomorphism of one pair, by both routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub i: usize,
    pub j: usize,
    /// `z_j` is not reachable from `z_i` by conjugating with lifts to `Aut(D)`.
    pub calculus_distinct: bool,
    /// No map isomorphism exists.
    pub search_distinct: bool,
}

/// The `z'` reachable from `z` by conjugating `sigma(z,0;1,w)` with every
/// automorphism of `D+` that lifts to `D` and keeps the normal form.
pub fn conjugation_orbit(delta: &Delta, z: u64, w: u64) -> Result<BTreeSet<u64>, ClassifyError> {
    let gp = plus_group(delta);
    let taus = automorphism::enumerate_params(&gp).map_err(|e| ClassifyError::Inconsistent(e.to_string()))?;
    let reach: Result<Vec<Option<u64>>, ClassifyError> = taus
        .par_iter()
        .filter(|tau| automorphism::lifts_to_whole(delta, tau))
        .map(|tau| match automorphism::conjugate_normal_form(delta, tau, z, w) {
            Ok(Conjugation::NormalForm { z: zn, w: wn }) if wn == w => Ok(Some(zn)),
            Ok(_) => Ok(None),
            Err(e) => Err(ClassifyError::Inconsistent(e.to_string())),
        })
        .collect();
    Ok(reach?.into_iter().flatten().collect())
}

/// Proves pairwise non-isomorphism two ways and requires them to agree.
pub fn distinct(realized: &[RealizedRbcm]) -> Result<Vec<PairCertificate>, ClassifyError> {
    let Some(first) = realized.first() else { return Ok(Vec::new()) };
    let delta = Delta::new(first.solution.a, first.solution.b, first.solution.c)?;
    let top = 1u64 << (delta.a - 2);
    let orbits: Result<Vec<BTreeSet<u64>>, ClassifyError> =
        realized.iter().map(|r| conjugation_orbit(&delta, r.solution.z, r.solution.w)).collect();
    let orbits = orbits?;
    for (r, orb) in realized.iter().zip(&orbits) {
        if let Some(bad) = orb.iter().find(|&&zn| zn % top != r.solution.z % top) {
            return Err(ClassifyError::Inconsistent(format!(
                "conjugation moved z = {} to {bad}, not a multiple of 2^(a-2) away",
                r.solution.z
            )));
        }
    }
    let pairs: Vec<(usize, usize)> =
        (0..realized.len()).flat_map(|i| (i + 1..realized.len()).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let calculus_distinct = !orbits[i].contains(&realized[j].solution.z);
            let search_distinct = cayley::are_isomorphic(&realized[i].map, &realized[j].map)
                .map_err(ClassifyError::Inconsistent)?
                .is_none();
            if calculus_distinct != search_distinct {
                return Err(ClassifyError::Inconsistent(format!(
                    "pair ({i}, {j}): calculus says distinct = {calculus_distinct}, search says {search_distinct}"
                )));
            }
            Ok(PairCertificate { i, j, calculus_distinct, search_distinct })
        })
        .collect()
}

/// The profile of the quotient by `<a^(2^c)>`, a map on `Z_(2^c) x Z_(2^b)`.
pub fn quotient_cross_check(realized: &RealizedRbcm) -> Result<AbelianRbcmProfile, ClassifyError> {
    let c = realized.solution.c;
    let qm = cayley::quotient_map(&realized.map, &realized.skew, QuotientSpec::alpha(1u64 << c))
        .map_err(|e| fail("quotient", e.to_string()))?;
    let profile = abelian_profile_check(&qm.map, &qm.skew).map_err(|e| fail("profile", e))?;
    if (profile.t + 1) % profile.valency != 0 {
        return Err(fail("profile", "valency does not divide t+1"));
    }
    Ok(profile)
}

/// One row of the classification output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub z1: u64,
    pub z: u64,
    pub w: u64,
    pub u_tilde: u64,
    pub u1: u64,
    pub v1: u64,
    pub t: u64,
    pub d: u64,
    pub ell: u64,
    pub verified: bool,
    pub genus: Option<u64>,
}

impl SolutionRecord {
    pub fn new(s: &ClassificationSolution, verified: bool, genus: Option<u64>) -> Self {
        SolutionRecord {
            a: s.a,
            b: s.b,
            c: s.c,
            z1: s.z1,
            z: s.z,
            w: s.w,
            u_tilde: s.u_tilde,
            u1: s.u1,
            v1: s.v1,
            t: s.t,
            d: s.d,
            ell: s.ell,
            verified,
            genus,
        }
    }
}

/// Everything `classify` reports for one `(a, b, c)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub necessary: NecessaryReport,
    pub solutions: Vec<SolutionRecord>,
    pub pairwise_distinct: Option<bool>,
    pub quotient_profiles: Option<bool>,
    pub failures: Vec<String>,
}

impl ClassificationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
            && self.solutions.iter().all(|s| s.verified)
            && self.pairwise_distinct != Some(false)
            && self.quotient_profiles != Some(false)
            && self.solutions.len() as u64 == self.necessary.expected_count
    }
}

/// Solves, realizes and (at `Full`) cross-checks every class.
pub fn classify(a: u32, b: u32, c: u32, level: VerifyLevel) -> Result<(ClassificationReport, Vec<RealizedRbcm>), ClassifyError> {
    let necessary = check_necessary(a, b, c)?;
    let sols = solve(a, b, c)?;
    let outcomes: Vec<Result<RealizedRbcm, ClassifyError>> = sols.par_iter().map(|s| realize(s, level)).collect();
    let mut failures = Vec::new();
    let mut realized = Vec::new();
    let mut solutions = Vec::new();
    for (s, o) in sols.iter().zip(outcomes) {
        match o {
            Ok(r) => {
                solutions.push(SolutionRecord::new(s, true, Some(r.genus.genus)));
                realized.push(r);
            }
            Err(e) => {
                failures.push(format!("z1 = {}: {e}", s.z1));
                solutions.push(SolutionRecord::new(s, false, None));
            }
        }
    }
    let (mut pairwise_distinct, mut quotient_profiles) = (None, None);
    if level == VerifyLevel::Full && failures.is_empty() {
        match distinct(&realized) {
            Ok(certs) => pairwise_distinct = Some(certs.iter().all(|c| c.search_distinct && c.calculus_distinct)),
            Err(e) => {
                pairwise_distinct = Some(false);
                failures.push(e.to_string());
            }
        }
        let profiles: Vec<Result<AbelianRbcmProfile, ClassifyError>> =
            realized.par_iter().map(quotient_cross_check).collect();
        quotient_profiles = Some(profiles.iter().all(|p| p.is_ok()));
        failures.extend(profiles.into_iter().filter_map(|p| p.err().map(|e| e.to_string())));
    }
    Ok((ClassificationReport { necessary, solutions, pairwise_distinct, quotient_profiles, failures }, realized))
}

/// `D` as a generic group, for callers that only have parameters.
pub fn delta_group(a: u32, b: u32, c: u32) -> Result<Group, ClassifyError> {
    Ok(Delta::new(a, b, c)?.group())
}

/// `tau+ = sigma(1, 0; 2^(a-2), 1)` in `D+` coordinates, which conjugates
/// `sigma(z,0;1,w)` to `sigma(z + 2^(a-2),0;1,w)`.
pub fn shift_conjugator(delta: &Delta) -> AutParams {
    AutParams::new(1, 0, 1u64 << (delta.a - 2), 1)
}
