//! Automorphisms `sigma(x1,y1;x2,y2)` of `L(2^a, 2^b; r)` with `deg2(r-1) >= 2`:
//! `a -> a^x1 b^y1`, `b -> a^x2 b^y2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metacyclic::{Delta, Element, Group, Index2Kind};
use crate::modular::{geom_sum_mod, mul_mod, pow_mod, reduce};
use crate::two_adic::{deg2, inv_mod2, solve_linear, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("{0} is not a 2-group with deg2(r-1) >= 2")]
    UnsupportedGroup(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("automorphism does not preserve <a^2, b>: p2 = {p2} is odd, but 2p' = p2 (mod 2^a) forces 2 | p2")]
    NotPlusInvariant { p2: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// `(a~, b~, c~)` with `n = 2^a~`, `m = 2^b~`, `c~ = deg2(r - 1)` (capped at `a~`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl Shape {
    pub fn of(g: &Group) -> Result<Shape, AutError> {
        // m = 1 leaves y2 without an odd representative, so the parity test on
        // x1*y2 - x2*y1 rejects everything.
        if !g.is_two_group() || g.m() < 2 {
            return Err(AutError::UnsupportedGroup(g.to_string()));
        }
        let a = g.n().trailing_zeros();
        let b = g.m().trailing_zeros();
        let c = match deg2(g.r() as i128 - 1) {
            Valuation::Infinity => a,
            Valuation::Finite(k) => k.min(a),
        };
        if c < 2 && c < a {
            return Err(AutError::UnsupportedGroup(g.to_string()));
        }
        Ok(Shape { a, b, c })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AutParams {
    pub x1: u64,
    pub y1: u64,
    pub x2: u64,
    pub y2: u64,
}

impl AutParams {
    pub const IDENTITY: AutParams = AutParams { x1: 1, y1: 0, x2: 0, y2: 1 };

    pub fn new(x1: u64, y1: u64, x2: u64, y2: u64) -> Self {
        AutParams { x1, y1, x2, y2 }
    }

    /// Reduce `x`-parameters mod `n` and `y`-parameters mod `m`.
    pub fn normalized(self, g: &Group) -> Self {
        AutParams { x1: self.x1 % g.n(), y1: self.y1 % g.m(), x2: self.x2 % g.n(), y2: self.y2 % g.m() }
    }

    pub fn from_images(a_img: Element, b_img: Element) -> Self {
        AutParams { x1: a_img.x, y1: a_img.y, x2: b_img.x, y2: b_img.y }
    }

    pub fn alpha_image(&self) -> Element {
        Element::new(self.x1, self.y1)
    }

    pub fn beta_image(&self) -> Element {
        Element::new(self.x2, self.y2)
    }

    pub fn is_identity(&self, g: &Group) -> bool {
        self.normalized(g) == AutParams::IDENTITY.normalized(g)
    }
}

impl fmt::Display for AutParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma({},{};{},{})", self.x1, self.y1, self.x2, self.y2)
    }
}

impl FromStr for AutParams {
    type Err = AutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AutError::Parse(format!("expected sigma(x1,y1;x2,y2), got {s:?}"));
        let inner = s.trim().strip_prefix("sigma(").and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let (left, right) = inner.split_once(';').ok_or_else(bad)?;
        let pair = |t: &str| -> Result<(u64, u64), AutError> {
            let (p, q) = t.split_once(',').ok_or_else(bad)?;
            Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
        };
        let (x1, y1) = pair(left)?;
        let (x2, y2) = pair(right)?;
        Ok(AutParams { x1, y1, x2, y2 })
    }
}

/// Constraints of the parametrization that a tuple violates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The congruence class `y2` must lie in, as `(residue, modulus exponent)`.
fn y2_class(sh: Shape, y1: u64) -> (u64, u32) {
    let e = sh.a - sh.c;
    let special = match deg2(y1 as i128) {
        Valuation::Finite(k) => sh.b == e && e == k + sh.c,
        Valuation::Infinity => false,
    };
    if special && e >= 1 {
        ((1 + (1u64 << (e - 1))) % (1u64 << e), e)
    } else {
        (1 % (1u64 << e), e)
    }
}

pub fn validate(g: &Group, p: &AutParams) -> Result<ValidationReport, AutError> {
    let sh = Shape::of(g)?;
    let p = p.normalized(g);
    let mut violations = Vec::new();
    let det = p.x1 as i128 * p.y2 as i128 - p.x2 as i128 * p.y1 as i128;
    if det.rem_euclid(2) == 0 {
        violations.push("2 ∤ x1*y2 - x2*y1".to_string());
    }
    if !deg2(p.y1 as i128).at_least(sh.b as i64 - sh.c as i64) {
        violations.push(format!("deg2(y1) >= {}", sh.b as i64 - sh.c as i64));
    }
    if !deg2(p.x2 as i128).at_least(sh.a as i64 - sh.b as i64) {
        violations.push(format!("deg2(x2) >= {}", sh.a as i64 - sh.b as i64));
    }
    let (res, e) = y2_class(sh, p.y1);
    if p.y2 % (1u64 << e) != res {
        violations.push(format!("y2 ≡ {res} (mod 2^{e})"));
    }
    Ok(ValidationReport { violations })
}

pub fn is_valid(g: &Group, p: &AutParams) -> bool {
    validate(g, p).map(|r| r.is_valid()).unwrap_or(false)
}

/// `a^u b^v -> a^(x1 [u]_{r^y1} + r^(y1 u) x2 [v]_{r^y2}) b^(y1 u + y2 v)`.
pub fn apply(g: &Group, p: &AutParams, e: Element) -> Element {
    let n = g.n();
    let m = g.m();
    let (u, v) = (e.x, e.y);
    let t1 = mul_mod(p.x1 % n, geom_sum_mod(g.r_pow(p.y1), u, n), n);
    let ry1u = g.r_pow(mul_mod(p.y1 % m, u % m, m));
    let t2 = mul_mod(mul_mod(ry1u, p.x2 % n, n), geom_sum_mod(g.r_pow(p.y2), v, n), n);
    let x = (t1 + t2) % n;
    let y = (mul_mod(p.y1 % m, u % m, m) + mul_mod(p.y2 % m, v % m, m)) % m;
    Element::new(x, y)
}

/// `outer ∘ inner`: `h_j = x1'[x_j]_{r^y1'} + r^(y1' x_j) x2' [y_j]_{r^y2'}`.
pub fn compose(g: &Group, outer: &AutParams, inner: &AutParams) -> AutParams {
    let a_img = apply(g, outer, inner.alpha_image().normalize_in(g));
    let b_img = apply(g, outer, inner.beta_image().normalize_in(g));
    AutParams::from_images(a_img, b_img)
}

/// The reduced composition formulas, valid when `c~ >= b~`:
/// `h1 = x1'(x1 + r' y1' x1(x1-1)) + x2' y1`, `h2 = x1' x2 + x2' y2` (mod `2^a~`),
/// with `r' = (r-1)/2`.
pub fn simplified_compose_c_ge_b(g: &Group, outer: &AutParams, inner: &AutParams) -> Result<AutParams, AutError> {
    let sh = Shape::of(g)?;
    if sh.c < sh.b {
        return Err(AutError::Precondition(format!("c~ = {} < b~ = {}", sh.c, sh.b)));
    }
    let n = g.n() as i128;
    let m = g.m() as i128;
    let o = outer.normalized(g);
    let i = inner.normalized(g);
    let r_half = (g.r() as i128 - 1) / 2;
    let (x1o, y1o, x2o, y2o) = (o.x1 as i128, o.y1 as i128, o.x2 as i128, o.y2 as i128);
    let (x1, y1, x2, y2) = (i.x1 as i128, i.y1 as i128, i.x2 as i128, i.y2 as i128);
    let quad = (r_half * y1o % n) * (x1 * (x1 - 1) % n) % n;
    let h1 = x1o * ((x1 + quad) % n) % n + x2o * y1 % n;
    let h2 = x1o * x2 % n + x2o * y2 % n;
    Ok(AutParams {
        x1: reduce(h1, n as u64),
        y1: reduce(y1o * x1 + y2o * y1, m as u64),
        x2: reduce(h2, n as u64),
        y2: reduce(y1o * x2 + y2o * y2, m as u64),
    })
}

/// Order of `p` in `Aut(G)`, by repeated composition; `None` past `limit`.
pub fn order(g: &Group, p: &AutParams, limit: u64) -> Option<u64> {
    let p = p.normalized(g);
    let mut acc = p;
    for k in 1..=limit {
        if acc.is_identity(g) {
            return Some(k);
        }
        acc = compose(g, &p, &acc);
    }
    None
}

/// `sigma^-1`: `sigma^(ord-1)` by repeated squaring, or a preimage search when
/// the order is not found quickly.
pub fn inverse(g: &Group, p: &AutParams) -> AutParams {
    let p = p.normalized(g);
    if let Some(k) = order(g, &p, 4096) {
        return power(g, &p, k - 1);
    }
    let pre = |target: Element| g.elements().find(|&e| apply(g, &p, e) == target).expect("automorphism is onto");
    AutParams::from_images(pre(g.alpha()), pre(g.beta()))
}

pub fn power(g: &Group, p: &AutParams, mut k: u64) -> AutParams {
    let mut acc = AutParams::IDENTITY.normalized(g);
    let mut base = p.normalized(g);
    while k > 0 {
        if k & 1 == 1 {
            acc = compose(g, &base, &acc);
        }
        base = compose(g, &base, &base);
        k >>= 1;
    }
    acc
}

/// All tuples satisfying the constraints, in lexicographic `(x1, y1, x2, y2)` order.
pub fn enumerate_params(g: &Group) -> Result<Vec<AutParams>, AutError> {
    let sh = Shape::of(g)?;
    let n = g.n();
    let m = g.m();
    let y1_step = 1u64 << (sh.b as i64 - sh.c as i64).clamp(0, sh.b as i64);
    let x2_step = 1u64 << (sh.a as i64 - sh.b as i64).clamp(0, sh.a as i64);
    let mut out = Vec::new();
    for x1 in 0..n {
        for y1 in (0..m).step_by(y1_step as usize) {
            let (res, e) = y2_class(sh, y1);
            let y2_step = 1u64 << e.min(sh.b);
            for x2 in (0..n).step_by(x2_step as usize) {
                for y2 in (res % m..m).step_by(y2_step as usize) {
                    let p = AutParams { x1, y1, x2, y2 };
                    let det = x1 as i128 * y2 as i128 - x2 as i128 * y1 as i128;
                    if det.rem_euclid(2) == 1 {
                        debug_assert!(is_valid(g, &p));
                        out.push(p);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// An automorphism of `D+ = <a^2, b>` in its own `L(2^(a-1), 2^b; r)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlusRestriction {
    pub params: AutParams,
}

/// `tau+ = sigma(p1(1+r^q1)/2, 2q1; p2/2, q2)` for `tau = sigma(p1,q1;p2,q2)` on `D`.
pub fn restrict_to_plus(delta: &Delta, tau: &AutParams) -> Result<PlusRestriction, AutError> {
    let g = delta.group();
    let t = tau.normalized(&g);
    if t.x2 % 2 != 0 {
        return Err(AutError::NotPlusInvariant { p2: t.x2 });
    }
    let n = g.n();
    let half = n / 2;
    let doubled = mul_mod(t.x1, (1 + g.r_pow(t.y1)) % n, n);
    debug_assert_eq!(doubled % 2, 0);
    let params = AutParams {
        x1: (doubled / 2) % half,
        y1: (2 * t.y1) % g.m(),
        x2: (t.x2 / 2) % half,
        y2: t.y2,
    };
    Ok(PlusRestriction { params })
}

/// Whether some automorphism of `D` restricts to `plus`.
///
/// For `c > b` this is `2 | y1` and `deg2(y2 - 1) >= a - c`. For `c < b` the
/// constraints on `D` itself add `deg2(y1/2) >= b - c` and may shift the
/// class of `y2`.
pub fn lifts_to_whole(delta: &Delta, plus: &AutParams) -> bool {
    let m = 1u64 << delta.b;
    let y1 = plus.y1 % m;
    let y2 = plus.y2 % m;
    if y1 % 2 != 0 {
        return false;
    }
    let shape = Shape { a: delta.a, b: delta.b, c: delta.c };
    if !deg2((y1 / 2) as i128).at_least(delta.b as i64 - delta.c as i64) {
        return false;
    }
    let (res, e) = y2_class(shape, y1 / 2);
    y2 % (1u64 << e) == res
}

/// An explicit lift of `plus` to `D`, by trying the few candidates the
/// restriction formula leaves open.
pub fn lift(delta: &Delta, plus: &AutParams) -> Option<AutParams> {
    let g = delta.group();
    let n = g.n();
    let m = g.m();
    let half = n / 2;
    if plus.y1 % 2 != 0 {
        return None;
    }
    let q2 = plus.y2 % m;
    let p2 = (2 * plus.x2) % n;
    for q1 in [(plus.y1 % m) / 2, ((plus.y1 % m) / 2 + m / 2) % m] {
        let k = (1 + g.r_pow(q1)) % n / 2;
        let Ok(kinv) = inv_mod2(k as i64, delta.a - 1) else { continue };
        let base = mul_mod(plus.x1 % half, kinv.value(), half);
        for p1 in [base, base + half] {
            let tau = AutParams { x1: p1, y1: q1, x2: p2, y2: q2 };
            if !is_valid(&g, &tau) {
                continue;
            }
            if let Ok(r) = restrict_to_plus(delta, &tau) {
                if r.params == plus.normalized(&plus_group(delta)) {
                    return Some(tau);
                }
            }
        }
    }
    None
}

/// `D+ = <a^2, b>` as `L(2^(a-1), 2^b; r)`.
pub fn plus_group(delta: &Delta) -> Group {
    delta.group().plus_presentation(Index2Kind::AlphaSqBeta).expect("D has even n and m").sub
}

/// `sigma(z,0;1,w)` in the reading used for `phi+`: `A -> A^z b`, `b -> b^w`
/// where `A = a^2`.
pub fn normal_form(z: u64, w: u64) -> AutParams {
    AutParams { x1: z, y1: 1, x2: 0, y2: w }
}

/// Which of the four conjugation congruences hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationChecks {
    pub conj1: bool,
    pub conj2: bool,
    pub conj3: bool,
    pub conj4: bool,
}

impl ConjugationChecks {
    pub fn all(&self) -> bool {
        self.conj1 && self.conj2 && self.conj3 && self.conj4
    }

    pub fn failed(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        for (ok, tag) in [(self.conj1, "conj-1"), (self.conj2, "conj-2"), (self.conj3, "conj-3"), (self.conj4, "conj-4")] {
            if !ok {
                v.push(tag);
            }
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conjugation {
    /// `tau+ sigma(z,0;1,w) tau+^-1 = sigma(z',0;1,w')`.
    NormalForm { z: u64, w: u64 },
    /// No `(z', w')` satisfies all four congruences.
    Incompatible(ConjugationChecks),
}

/// Solves the conjugation congruences for `tau+ = (p1, q1; p2, q2)` in `D+`
/// coordinates (`p1 = x1`, `q1 = y1`, `p2 = x2`, `q2 = y2`):
///
/// ```text
/// p1 [z]_{r^q1} + p2 = z' [p1]_r   (mod 2^(a-1))
/// p2 w              = z' p2        (mod 2^(a-1))
/// q1 z + q2         = p1 + w' q1   (mod 2^b)
/// q2 w              = p2 + w' q2   (mod 2^b)
/// ```
pub fn conjugate_normal_form(delta: &Delta, tau_plus: &AutParams, z: u64, w: u64) -> Result<Conjugation, AutError> {
    if !lifts_to_whole(delta, tau_plus) {
        return Err(AutError::Precondition(format!("{tau_plus} does not come from Aut+(D)")));
    }
    if z % 4 != 3 {
        return Err(AutError::Precondition(format!("z = {z} is not -1 mod 4")));
    }
    let gp = plus_group(delta);
    if !is_valid(&gp, tau_plus) {
        return Err(AutError::Precondition(format!("{tau_plus} is not an automorphism of D+")));
    }
    let ea = delta.a - 1;
    let na = 1u64 << ea;
    let mb = 1u64 << delta.b;
    let r = delta.r() % na;
    let t = tau_plus.normalized(&gp);
    let (p1, q1, p2, q2) = (t.x1, t.y1, t.x2, t.y2);
    let (z, w) = (z % na, w % mb);

    let lhs1 = (mul_mod(p1, geom_sum_mod(pow_mod(r, q1, na), z, na), na) + p2) % na;
    let coeff1 = geom_sum_mod(r, p1, na);
    // q2 is odd, so w' is forced by conj-4
    let q2_inv = inv_mod2(q2 as i64, delta.b).map_err(|e| AutError::Precondition(e.to_string()))?.value();
    let w_new = mul_mod(reduce(q2 as i128 * w as i128 - p2 as i128, mb), q2_inv, mb);

    let check = |zn: u64| ConjugationChecks {
        conj1: mul_mod(zn, coeff1, na) == lhs1,
        conj2: mul_mod(p2, w, na) == mul_mod(zn, p2, na),
        conj3: (mul_mod(q1, z, mb) + q2) % mb == (p1 + mul_mod(w_new, q1, mb)) % mb,
        conj4: mul_mod(q2, w, mb) == (p2 + mul_mod(w_new, q2, mb)) % mb,
    };
    let candidates = solve_linear(coeff1 as i64, lhs1 as i64, ea);
    let mut first_fail = None;
    for zn in candidates.iter().map(|c| c.value()) {
        let c = check(zn);
        if c.all() {
            return Ok(Conjugation::NormalForm { z: zn, w: w_new });
        }
        first_fail.get_or_insert(c);
    }
    Ok(Conjugation::Incompatible(first_fail.unwrap_or(ConjugationChecks {
        conj1: false,
        conj2: check(0).conj2,
        conj3: check(0).conj3,
        conj4: true,
    })))
}

trait NormalizeIn {
    fn normalize_in(self, g: &Group) -> Element;
}

impl NormalizeIn for Element {
    fn normalize_in(self, g: &Group) -> Element {
        Element::new(self.x % g.n(), self.y % g.m())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l1645() -> Group {
        Group::new(16, 4, 5).unwrap()
    }

    #[test]
    fn validate_examples() {
        let g = l1645();
        assert!(validate(&g, &AutParams::IDENTITY).unwrap().is_valid());
        assert!(is_valid(&g, &AutParams::new(1, 1, 4, 3)));
        let bad = validate(&g, &AutParams::new(2, 0, 0, 1)).unwrap();
        assert!(bad.violations.iter().any(|v| v.contains("x1*y2")));
        assert!(Shape::of(&Group::new(8, 2, 3).unwrap()).is_err());
    }

    #[test]
    fn apply_examples() {
        let g = l1645();
        let s = AutParams::new(1, 1, 4, 3);
        assert_eq!(apply(&g, &s, g.alpha()), Element::new(1, 1));
        assert_eq!(apply(&g, &s, g.beta()), Element::new(4, 3));
        for e in g.elements() {
            assert_eq!(apply(&g, &AutParams::IDENTITY, e), e);
        }
        let ab = g.mul(g.alpha(), g.beta());
        assert_eq!(apply(&g, &s, ab), g.mul(apply(&g, &s, g.alpha()), apply(&g, &s, g.beta())));
    }

    #[test]
    fn compose_examples() {
        let g = l1645();
        let s = AutParams::new(1, 1, 4, 3);
        assert_eq!(compose(&g, &AutParams::IDENTITY, &s), s);
        let inv = inverse(&g, &s);
        assert!(compose(&g, &s, &inv).is_identity(&g));
        assert!(compose(&g, &inv, &s).is_identity(&g));
        let ss = compose(&g, &s, &s);
        for e in g.elements() {
            assert_eq!(apply(&g, &ss, e), apply(&g, &s, apply(&g, &s, e)));
        }
    }

    #[test]
    fn simplified_compose_guard() {
        assert!(simplified_compose_c_ge_b(&Group::new(16, 8, 5).unwrap(), &AutParams::IDENTITY, &AutParams::IDENTITY).is_err());
        let g = Group::new(64, 8, 17).unwrap();
        let s = AutParams::new(3, 1, 8, 1);
        assert_eq!(simplified_compose_c_ge_b(&g, &AutParams::IDENTITY, &s).unwrap(), s);
    }

    #[test]
    fn restriction_examples() {
        let d = Delta::new(7, 3, 4).unwrap();
        let id = restrict_to_plus(&d, &AutParams::IDENTITY).unwrap();
        assert_eq!(id.params, AutParams::IDENTITY);
        let t = restrict_to_plus(&d, &AutParams::new(1, 0, 2, 1)).unwrap();
        assert_eq!(t.params, AutParams::new(1, 0, 1, 1));
        assert!(matches!(
            restrict_to_plus(&d, &AutParams::new(1, 0, 1, 1)),
            Err(AutError::NotPlusInvariant { p2: 1 })
        ));
    }

    #[test]
    fn lift_examples() {
        let d = Delta::new(7, 3, 4).unwrap();
        assert!(lifts_to_whole(&d, &AutParams::IDENTITY));
        assert!(!lifts_to_whole(&d, &normal_form(3, 5)));
        let plus = AutParams::new(1, 2, 0, 1);
        assert!(lifts_to_whole(&d, &plus));
        let tau = lift(&d, &plus).unwrap();
        assert_eq!(restrict_to_plus(&d, &tau).unwrap().params, plus);
    }

    #[test]
    fn conjugation_examples() {
        let d = Delta::new(7, 3, 4).unwrap();
        let (z, w) = (3, 5);
        assert_eq!(
            conjugate_normal_form(&d, &AutParams::IDENTITY, z, w).unwrap(),
            Conjugation::NormalForm { z, w }
        );
        let shift = AutParams::new(1, 0, 32, 1);
        assert_eq!(
            conjugate_normal_form(&d, &shift, z, w).unwrap(),
            Conjugation::NormalForm { z: 35, w }
        );
        assert!(conjugate_normal_form(&d, &AutParams::IDENTITY, 5, w).is_err());
    }

    #[test]
    fn textual_form() {
        let p: AutParams = "sigma(1,1;4,3)".parse().unwrap();
        assert_eq!(p, AutParams::new(1, 1, 4, 3));
        assert_eq!(p.to_string(), "sigma(1,1;4,3)");
        assert!("sigma(1,1,4,3)".parse::<AutParams>().is_err());
    }
}
