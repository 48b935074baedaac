//! Dual Steenrod algebra presentations and the cobar complex.
//!
//! The classical dual Steenrod algebra A_* = F2[zeta_1, zeta_2, ...] maps to
//! the genuine equivariant dual Steenrod algebra and on to its quotient
//! Lambda^m = HF2_star[tau_i]/(tau_i^2 = tau_{i+1} a_sigma). This module
//! implements the quotient's normal form, the right unit, the inductive
//! reduction of zeta_i^{2^j} along that composite, the coproducts, the cobar
//! coboundary with the Sq^0 operation, and a brute-force Ext computation in
//! bounded bidegree windows.

use crate::algebra::{GenName, Monomial, Poly};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum SteenrodError {
    #[error("unsupported element for eta_R: {0}")]
    UnsupportedElement(String),
    #[error("truncation order {0} too small to determine the leading term (need >= {1})")]
    TruncationTooSmall(i64, i64),
    #[error("bidegree (s,t) = ({0},{1}) exceeds the configured bounds ({2},{3})")]
    BoundExceeded(i64, i64, i64, i64),
    #[error("leading term mismatch: computed {0}, expected {1}")]
    LeadingTerm(String, String),
}

// ---------------------------------------------------------------------------
// Lambda^m: normal form, right unit, and the zeta reduction
// ---------------------------------------------------------------------------

/// Rewrite tau_i^2 -> tau_{i+1} a_sigma exhaustively; the result has all tau
/// exponents 0 or 1. Confluent: each application preserves the monomial.
pub fn lambda_reduce_monomial(m: &Monomial) -> Monomial {
    let mut out = Monomial::one();
    let mut extra_a = 0i64;
    for (g, e) in m.exponents() {
        match g {
            GenName::Tau(i) => {
                // tau_i^(2^k) = tau_{i+k} a^(2^k - 1); apply bit by bit
                let mut idx = i as i64;
                let mut e = e;
                debug_assert!(e >= 0);
                while e > 0 {
                    if e & 1 == 1 {
                        out.mul_gen_inplace(GenName::Tau(idx as u8), 1);
                    }
                    // pair up: tau_idx^2 -> tau_{idx+1} a
                    extra_a += e / 2;
                    e /= 2;
                    idx += 1;
                }
            }
            _ => out.mul_gen_inplace(g, e),
        }
    }
    out.mul_gen_inplace(GenName::ASigma, extra_a);
    out
}

/// Normal form of a polynomial in Lambda^m, optionally truncating terms of
/// a_sigma-order above `trunc`.
pub fn lambda_reduce(p: &Poly, trunc: Option<i64>) -> Poly {
    let mut out = Poly::zero();
    for t in p.terms() {
        let m = lambda_reduce_monomial(t);
        if let Some(bound) = trunc {
            if m.exponent(GenName::ASigma) > bound {
                continue;
            }
        }
        out.toggle(m);
    }
    out
}

/// eta_R(u_sigma) = u_sigma + tau_0 a_sigma in Lambda^m.
pub fn eta_r_u_sigma() -> Poly {
    let mut p = Poly::gen(GenName::USigma);
    p.toggle(Monomial::from_pairs(&[(GenName::Tau(0), 1), (GenName::ASigma, 1)]));
    p
}

/// The right unit on the supported elements a_sigma and u_sigma^k, expanded
/// and reduced in Lambda^m, truncated at a_sigma-order `trunc`.
pub fn eta_r(x: &Monomial, trunc: i64) -> Result<Poly, SteenrodError> {
    if *x == Monomial::gen(GenName::ASigma) {
        return Ok(Poly::gen(GenName::ASigma));
    }
    let k = x.exponent(GenName::USigma);
    if k >= 1 && *x == Monomial::gen_pow(GenName::USigma, k) {
        let mut acc = Poly::one();
        let base = eta_r_u_sigma();
        // square-and-multiply along the bits of k
        let mut sq = base;
        let mut rem = k;
        while rem > 0 {
            if rem & 1 == 1 {
                acc = lambda_reduce(&acc.mul(&sq), Some(trunc));
            }
            sq = lambda_reduce(&sq.square(), Some(trunc));
            rem >>= 1;
        }
        return Ok(acc);
    }
    Err(SteenrodError::UnsupportedElement(x.to_string()))
}

/// Image of zeta_i under A_* -> Lambda^m, computed by the inductive
/// rewriting: zeta_1 = tau_0 and zeta_i a_sigma = zeta_{i-1}^2 eta_R(u_sigma)
/// modulo (xi_1, xi_2, ...). Exact, no truncation.
fn zeta_image(i: u8) -> Poly {
    assert!(i >= 1);
    let eta_u = eta_r_u_sigma();
    let mut z = Poly::gen(GenName::Tau(0));
    for _ in 2..=i {
        let num = lambda_reduce(&z.square().mul(&eta_u), None);
        z = divide_by_a_sigma(&num);
    }
    z
}

fn divide_by_a_sigma(p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for t in p.terms() {
        let e = t.exponent(GenName::ASigma);
        assert!(e >= 1, "term {} not divisible by a_sigma", t);
        let mut m = t.clone();
        m.mul_gen_inplace(GenName::ASigma, -1);
        out.toggle(m);
    }
    out
}

/// The image of zeta_i^{2^j} under A_* -> Lambda^m, truncated at
/// a_sigma-order `trunc`. The leading (lowest a_sigma-order) term is checked
/// against tau_{i+j-1} u_sigma^{2^{i+j-1} - 2^j} a_sigma^{2^j - 1}.
pub fn reduce_zeta(i: u8, j: u8, trunc: i64) -> Result<Poly, SteenrodError> {
    assert!(i >= 1);
    let needed = 1i64 << j;
    if trunc < needed {
        return Err(SteenrodError::TruncationTooSmall(trunc, needed));
    }
    let mut z = zeta_image(i);
    for _ in 0..j {
        z = lambda_reduce(&z.square(), None);
    }
    let expected = reduce_zeta_leading_term(i, j);
    let lead = z
        .terms()
        .min_by_key(|t| t.exponent(GenName::ASigma))
        .cloned()
        .ok_or_else(|| SteenrodError::LeadingTerm("0".into(), expected.to_string()))?;
    if lead != expected {
        return Err(SteenrodError::LeadingTerm(lead.to_string(), expected.to_string()));
    }
    Ok(lambda_reduce(&z, Some(trunc)))
}

/// The closed form tau_{i+j-1} u^{2^{i+j-1}-2^j} a^{2^j-1}, for checking.
pub fn reduce_zeta_leading_term(i: u8, j: u8) -> Monomial {
    let n = (i + j - 1) as u32;
    Monomial::from_pairs(&[
        (GenName::Tau((i + j - 1) as u8), 1),
        (GenName::USigma, (1i64 << n) - (1i64 << j)),
        (GenName::ASigma, (1i64 << j) - 1),
    ])
}

// ---------------------------------------------------------------------------
// The genuine presentation A^m: tau_i^2 = tau_{i+1} a + xi_{i+1} eta_R(u)
// ---------------------------------------------------------------------------

/// One rewriting pass for the A^m relation on the lowest tau square present;
/// returns None when the monomial is already tau-reduced.
fn am_step(m: &Monomial) -> Option<Poly> {
    let (i, e) = m.exponents().find_map(|(g, e)| match g {
        GenName::Tau(i) if e >= 2 => Some((i, e)),
        _ => None,
    })?;
    let mut rest = m.clone();
    rest.mul_gen_inplace(GenName::Tau(i), -2);
    let _ = e;
    // tau_i^2 = tau_{i+1} a_sigma + xi_{i+1} (u_sigma + tau_0 a_sigma)
    let mut p = Poly::from_monomial(rest.mul(&Monomial::from_pairs(&[
        (GenName::Tau(i + 1), 1),
        (GenName::ASigma, 1),
    ])));
    p.toggle(rest.mul(&Monomial::from_pairs(&[
        (GenName::Xi(i + 1), 1),
        (GenName::USigma, 1),
    ])));
    p.toggle(rest.mul(&Monomial::from_pairs(&[
        (GenName::Xi(i + 1), 1),
        (GenName::Tau(0), 1),
        (GenName::ASigma, 1),
    ])));
    Some(p)
}

/// Normal form in A^m: all tau exponents 0/1 after exhaustive application of
/// tau_i^2 -> tau_{i+1} a_sigma + xi_{i+1} eta_R(u_sigma), truncated at
/// a_sigma-order `trunc`. The total tau-exponent strictly drops in every
/// generated term, so the rewriting terminates.
pub fn am_reduce(p: &Poly, trunc: i64, lowest_first: bool) -> Poly {
    let mut pending: Vec<Monomial> = p.terms().cloned().collect();
    if !lowest_first {
        pending.reverse();
    }
    let mut out = Poly::zero();
    while let Some(m) = pending.pop() {
        if m.exponent(GenName::ASigma) > trunc {
            continue;
        }
        match am_step(&m) {
            None => out.toggle(m),
            Some(q) => pending.extend(q.terms().cloned()),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Coproducts and the cobar complex over A_*
// ---------------------------------------------------------------------------

/// An element of a two-fold tensor product, as an F2 set of monomial pairs.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Tensor2 {
    terms: BTreeSet<(Monomial, Monomial)>,
}

impl Tensor2 {
    pub fn zero() -> Self {
        Tensor2::default()
    }

    pub fn unit() -> Self {
        Tensor2::of(Monomial::one(), Monomial::one())
    }

    pub fn of(a: Monomial, b: Monomial) -> Self {
        let mut t = Tensor2::default();
        t.toggle(a, b);
        t
    }

    pub fn toggle(&mut self, a: Monomial, b: Monomial) {
        let pair = (a, b);
        if !self.terms.remove(&pair) {
            self.terms.insert(pair);
        }
    }

    pub fn add_assign(&mut self, other: &Tensor2) {
        for (a, b) in &other.terms {
            self.toggle(a.clone(), b.clone());
        }
    }

    pub fn mul(&self, other: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (a1, b1) in &self.terms {
            for (a2, b2) in &other.terms {
                out.toggle(a1.mul(a2), b1.mul(b2));
            }
        }
        out
    }

    pub fn frobenius(&self, pow: i64) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (a, b) in &self.terms {
            out.toggle(a.pow(pow), b.pow(pow));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = &(Monomial, Monomial)> {
        self.terms.iter()
    }
}

/// Coproduct of a single generator of A_*, A^m, or Lambda^m.
pub fn coproduct(g: GenName) -> Result<Tensor2, SteenrodError> {
    let mut out = Tensor2::zero();
    match g {
        GenName::Zeta(i) => {
            // psi(zeta_i) = sum_{0 <= j <= i} zeta_{i-j}^{2^j} (x) zeta_j
            for j in 0..=i {
                out.toggle(zeta_pow(i - j, 1 << j), zeta_pow(j, 1));
            }
        }
        GenName::Xi(i) => {
            for j in 0..=i {
                out.toggle(xi_pow(i - j, 1 << j), xi_pow(j, 1));
            }
        }
        GenName::Tau(i) => {
            // psi(tau_i) = tau_i (x) 1 + sum_{0 <= j <= i} xi_{i-j}^{2^j} (x) tau_j
            out.toggle(Monomial::gen(GenName::Tau(i)), Monomial::one());
            for j in 0..=i {
                out.toggle(xi_pow(i - j, 1 << j), Monomial::gen(GenName::Tau(j)));
            }
        }
        _ => return Err(SteenrodError::UnsupportedElement(g.to_string())),
    }
    Ok(out)
}

fn zeta_pow(i: u8, e: i64) -> Monomial {
    if i == 0 {
        Monomial::one()
    } else {
        Monomial::gen_pow(GenName::Zeta(i), e)
    }
}

fn xi_pow(i: u8, e: i64) -> Monomial {
    if i == 0 {
        Monomial::one()
    } else {
        Monomial::gen_pow(GenName::Xi(i), e)
    }
}

/// Internal degree in A_*: deg zeta_i = 2^i - 1.
pub fn zeta_degree(m: &Monomial) -> i64 {
    m.exponents()
        .map(|(g, e)| match g {
            GenName::Zeta(i) => ((1i64 << i) - 1) * e,
            _ => panic!("not an A_* monomial: {}", m),
        })
        .sum()
}

/// Modified May filtration: |zeta_i^{2^j}| = 2^j - 1, summed over the binary
/// expansion of each exponent.
pub fn modified_filtration(m: &Monomial) -> i64 {
    m.exponents()
        .map(|(g, e)| match g {
            GenName::Zeta(_) => {
                let mut f = 0i64;
                let mut e = e;
                let mut j = 0u32;
                while e > 0 {
                    if e & 1 == 1 {
                        f += (1i64 << j) - 1;
                    }
                    e >>= 1;
                    j += 1;
                }
                f
            }
            _ => panic!("not an A_* monomial: {}", m),
        })
        .sum()
}

/// A basis word of the (reduced) cobar complex: a list of positive-degree
/// monomial factors. General elements are F2 sets of words.
pub type CobarWord = Vec<Monomial>;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CobarElt {
    words: BTreeSet<CobarWord>,
}

impl CobarElt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn of(w: CobarWord) -> Self {
        let mut e = Self::default();
        e.toggle(w);
        e
    }

    pub fn toggle(&mut self, w: CobarWord) {
        if !self.words.remove(&w) {
            self.words.insert(w);
        }
    }

    pub fn add_assign(&mut self, other: &CobarElt) {
        for w in &other.words {
            self.toggle(w.clone());
        }
    }

    pub fn words(&self) -> impl Iterator<Item = &CobarWord> {
        self.words.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

pub fn word_degree(w: &[Monomial]) -> i64 {
    w.iter().map(zeta_degree).sum()
}

pub fn word_filtration(w: &[Monomial]) -> i64 {
    w.iter().map(modified_filtration).sum()
}

pub fn word_to_string(w: &[Monomial]) -> String {
    if w.is_empty() {
        return "[]".into();
    }
    let parts: Vec<String> = w.iter().map(|m| m.to_string()).collect();
    format!("[{}]", parts.join("|"))
}

/// Memoized multiplicative coproducts of A_* monomials.
#[derive(Default)]
pub struct CoproductCache {
    cache: HashMap<Monomial, Tensor2>,
}

impl CoproductCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Full coproduct of a monomial of A_*.
    pub fn psi(&mut self, m: &Monomial) -> Tensor2 {
        if m.is_one() {
            return Tensor2::unit();
        }
        if let Some(t) = self.cache.get(m) {
            return t.clone();
        }
        // split off one generator power: psi(g^e * rest) = psi(g)^e psi(rest)
        let (g, e) = m.exponents().next().unwrap();
        let mut rest = m.clone();
        rest.mul_gen_inplace(g, -e);
        let base = coproduct(g).expect("A_* generator");
        // psi(g^e) via Frobenius on the binary expansion
        let mut acc = Tensor2::unit();
        let mut bit = 0u32;
        let mut rem = e;
        while rem > 0 {
            if rem & 1 == 1 {
                acc = acc.mul(&base.frobenius(1 << bit));
            }
            rem >>= 1;
            bit += 1;
        }
        let out = acc.mul(&self.psi(&rest));
        self.cache.insert(m.clone(), out.clone());
        out
    }

    /// Reduced coproduct: psi(m) - m (x) 1 - 1 (x) m.
    pub fn psi_reduced(&mut self, m: &Monomial) -> Tensor2 {
        let mut t = self.psi(m);
        t.toggle(m.clone(), Monomial::one());
        t.toggle(Monomial::one(), m.clone());
        t
    }
}

/// The cobar coboundary (characteristic 2, no signs): insert the reduced
/// coproduct into every factor slot.
pub fn cobar_d(w: &[Monomial], cache: &mut CoproductCache) -> CobarElt {
    let mut out = CobarElt::zero();
    for (i, factor) in w.iter().enumerate() {
        let psibar = cache.psi_reduced(factor);
        for (a, b) in psibar.terms() {
            debug_assert!(!a.is_one() && !b.is_one());
            let mut word = Vec::with_capacity(w.len() + 1);
            word.extend_from_slice(&w[..i]);
            word.push(a.clone());
            word.push(b.clone());
            word.extend_from_slice(&w[i + 1..]);
            out.toggle(word);
        }
    }
    out
}

pub fn cobar_d_elt(e: &CobarElt, cache: &mut CoproductCache) -> CobarElt {
    let mut out = CobarElt::zero();
    for w in e.words() {
        out.add_assign(&cobar_d(w, cache));
    }
    out
}

/// Sq^0 on the cobar complex: square every tensor factor.
pub fn sq0(w: &[Monomial]) -> CobarWord {
    w.iter().map(|m| m.pow(2)).collect()
}

pub fn sq0_elt(e: &CobarElt) -> CobarElt {
    let mut out = CobarElt::zero();
    for w in e.words() {
        out.toggle(sq0(w));
    }
    out
}

// ---------------------------------------------------------------------------
// Basis enumeration and brute-force Ext
// ---------------------------------------------------------------------------

/// Monomial basis of A_* in internal degree d (zeta_i of degree 2^i - 1).
pub fn zeta_monomials(d: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut max_i = 1u8;
    while (1i64 << (max_i + 1)) - 1 <= d {
        max_i += 1;
    }
    fn rec(d: i64, i: u8, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if d == 0 {
            out.push(cur.clone());
            return;
        }
        if i == 0 {
            return;
        }
        let gd = (1i64 << i) - 1;
        let max_e = d / gd;
        for e in (0..=max_e).rev() {
            if e > 0 {
                cur.mul_gen_inplace(GenName::Zeta(i), e);
            }
            rec(d - e * gd, i - 1, cur, out);
            if e > 0 {
                cur.mul_gen_inplace(GenName::Zeta(i), -e);
            }
        }
    }
    let mut cur = Monomial::one();
    rec(d, max_i, &mut cur, &mut out);
    out.sort();
    out
}

/// All cobar basis words of homological degree s and internal degree t,
/// sorted by (modified filtration, word order) for near-triangular
/// elimination.
pub fn cobar_basis(s: i64, t: i64) -> Vec<CobarWord> {
    let mut out: Vec<CobarWord> = Vec::new();
    if s == 0 {
        if t == 0 {
            out.push(vec![]);
        }
        return out;
    }
    fn rec(s: i64, t: i64, cur: &mut CobarWord, out: &mut Vec<CobarWord>) {
        if s == 1 {
            for m in zeta_monomials(t) {
                cur.push(m);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        // each factor has degree >= 1; leave at least s-1 for the rest
        for d in 1..=(t - (s - 1)) {
            for m in zeta_monomials(d) {
                cur.push(m);
                rec(s - 1, t - d, cur, out);
                cur.pop();
            }
        }
    }
    if t >= s {
        let mut cur = Vec::new();
        rec(s, t, &mut cur, &mut out);
    }
    out.sort_by_key(|w| (word_filtration(w), w.clone()));
    out
}

pub const EXT_MAX_S: i64 = 5;
pub const EXT_MAX_T: i64 = 32;

/// Result of the brute-force Ext computation at one bidegree.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    pub s: i64,
    pub t: i64,
    pub dim: usize,
    /// Chosen representative cocycles, one per basis class; deterministic.
    pub representatives: Vec<CobarElt>,
}

/// dim Ext_{A_*}^{s,t}(F2, F2) with representative cocycles, by cobar
/// cohomology: rank computations over F2 on the coboundary matrices.
pub fn ext_bruteforce(s: i64, t: i64) -> Result<ExtGroup, SteenrodError> {
    ext_bruteforce_bounded(s, t, EXT_MAX_S, EXT_MAX_T)
}

pub fn ext_bruteforce_bounded(
    s: i64,
    t: i64,
    max_s: i64,
    max_t: i64,
) -> Result<ExtGroup, SteenrodError> {
    if s < 0 || s > max_s || t < 0 || t > max_t {
        return Err(SteenrodError::BoundExceeded(s, t, max_s, max_t));
    }
    let mut cache = CoproductCache::new();
    let basis_s = cobar_basis(s, t);
    let basis_up = cobar_basis(s + 1, t);
    let up_index: BTreeMap<&CobarWord, u32> = basis_up
        .iter()
        .enumerate()
        .map(|(i, w)| (w, i as u32))
        .collect();

    // columns of d^s in sparse form
    let col =
        |w: &CobarWord, cache: &mut CoproductCache, index: &BTreeMap<&CobarWord, u32>| -> Vec<u32> {
            let img = cobar_d(w, cache);
            let mut v: Vec<u32> = img
                .words()
                .map(|u| *index.get(u).expect("cobar image within basis"))
                .collect();
            v.sort_unstable();
            v
        };

    // kernel of d^s with kernel-vector tracking
    let n = basis_s.len();
    let mut pivots: BTreeMap<u32, (Vec<u32>, Vec<u32>)> = BTreeMap::new(); // lead -> (img, combo)
    let mut kernel: Vec<Vec<u32>> = Vec::new(); // combos of source indices
    for (ci, w) in basis_s.iter().enumerate() {
        let mut img = col(w, &mut cache, &up_index);
        let mut combo = vec![ci as u32];
        loop {
            let Some(&lead) = img.first() else {
                kernel.push(combo);
                break;
            };
            match pivots.get(&lead) {
                Some((pimg, pcombo)) => {
                    img = crate::gf2::xor_sorted(&img, pimg);
                    combo = crate::gf2::xor_sorted(&combo, pcombo);
                }
                None => {
                    pivots.insert(lead, (img, combo));
                    break;
                }
            }
        }
    }
    drop(pivots);

    // boundaries: image of d^{s-1}
    let mut bpivots: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    if s >= 1 {
        let basis_down = cobar_basis(s - 1, t);
        let s_index: BTreeMap<&CobarWord, u32> = basis_s
            .iter()
            .enumerate()
            .map(|(i, w)| (w, i as u32))
            .collect();
        for w in &basis_down {
            let mut img = col(w, &mut cache, &s_index);
            loop {
                let Some(&lead) = img.first() else { break };
                match bpivots.get(&lead) {
                    Some(p) => img = crate::gf2::xor_sorted(&img, p),
                    None => {
                        bpivots.insert(lead, img);
                        break;
                    }
                }
            }
        }
    }

    // representatives: kernel vectors independent modulo boundaries
    let mut reps: Vec<CobarElt> = Vec::new();
    let mut quotient: BTreeMap<u32, Vec<u32>> = bpivots;
    for combo in kernel {
        let mut v = combo.clone();
        loop {
            let Some(&lead) = v.first() else { break };
            match quotient.get(&lead) {
                Some(p) => v = crate::gf2::xor_sorted(&v, p),
                None => {
                    quotient.insert(lead, v.clone());
                    let mut rep = CobarElt::zero();
                    for &i in &v {
                        rep.toggle(basis_s[i as usize].clone());
                    }
                    reps.push(rep);
                    break;
                }
            }
        }
    }
    let _ = n;
    Ok(ExtGroup {
        s,
        t,
        dim: reps.len(),
        representatives: reps,
    })
}

/// Search for a cocycle x = lead + (words of strictly higher modified
/// filtration) with d(x) = 0. Returns the tail on success.
pub fn cocycle_with_lead(lead: &CobarWord) -> Option<CobarElt> {
    let s = lead.len() as i64;
    let t = word_degree(lead);
    let flt = word_filtration(lead);
    let mut cache = CoproductCache::new();
    let basis_s = cobar_basis(s, t);
    let basis_up = cobar_basis(s + 1, t);
    let up_index: BTreeMap<&CobarWord, u32> = basis_up
        .iter()
        .enumerate()
        .map(|(i, w)| (w, i as u32))
        .collect();
    let rhs0 = cobar_d(lead, &mut cache);
    let mut rhs: Vec<u32> = rhs0.words().map(|u| up_index[u]).collect();
    rhs.sort_unstable();
    if rhs.is_empty() {
        return Some(CobarElt::zero());
    }
    // eliminate over the columns of strictly higher filtration
    let mut pivots: BTreeMap<u32, (Vec<u32>, Vec<usize>)> = BTreeMap::new();
    for (ci, w) in basis_s.iter().enumerate() {
        if word_filtration(w) <= flt {
            continue;
        }
        let img0 = cobar_d(w, &mut cache);
        let mut img: Vec<u32> = img0.words().map(|u| up_index[u]).collect();
        img.sort_unstable();
        let mut combo = vec![ci];
        loop {
            let Some(&lead_idx) = img.first() else { break };
            match pivots.get(&lead_idx) {
                Some((pimg, pcombo)) => {
                    img = crate::gf2::xor_sorted(&img, pimg);
                    let mut c = pcombo.clone();
                    symm_diff(&mut c, &combo);
                    combo = c;
                }
                None => {
                    pivots.insert(lead_idx, (img, combo));
                    break;
                }
            }
        }
    }
    // back-substitute the right-hand side
    let mut solution: Vec<usize> = Vec::new();
    loop {
        let Some(&lead_idx) = rhs.first() else { break };
        let (pimg, pcombo) = pivots.get(&lead_idx)?;
        rhs = crate::gf2::xor_sorted(&rhs, pimg);
        symm_diff(&mut solution, pcombo);
    }
    let mut tail = CobarElt::zero();
    for &i in &solution {
        tail.toggle(basis_s[i].clone());
    }
    // the cocycle is lead + tail; verify
    let mut x = CobarElt::of(lead.clone());
    x.add_assign(&tail);
    debug_assert!(cobar_d_elt(&x, &mut cache).is_zero());
    Some(tail)
}

fn symm_diff(a: &mut Vec<usize>, b: &[usize]) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    *a = out;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn tau(i: u8) -> Monomial {
        Monomial::gen(GenName::Tau(i))
    }

    #[test]
    fn lambda_normal_form() {
        // tau_0^2 -> tau_1 a
        let m = Monomial::gen_pow(GenName::Tau(0), 2);
        let r = lambda_reduce_monomial(&m);
        assert_eq!(
            r,
            Monomial::from_pairs(&[(GenName::Tau(1), 1), (GenName::ASigma, 1)])
        );
        // tau_0^4 -> tau_2 a^3
        let m = Monomial::gen_pow(GenName::Tau(0), 4);
        assert_eq!(
            lambda_reduce_monomial(&m),
            Monomial::from_pairs(&[(GenName::Tau(2), 1), (GenName::ASigma, 3)])
        );
        // tau_0^3 = tau_0 tau_1 a
        let m = Monomial::gen_pow(GenName::Tau(0), 3);
        assert_eq!(
            lambda_reduce_monomial(&m),
            Monomial::from_pairs(&[(GenName::Tau(0), 1), (GenName::Tau(1), 1), (GenName::ASigma, 1)])
        );
    }

    #[test]
    fn eta_r_examples() {
        // eta_R(u) = u + tau_0 a
        let p = eta_r(&Monomial::gen(GenName::USigma), 16).unwrap();
        assert_eq!(p, eta_r_u_sigma());
        // eta_R(a) = a
        let p = eta_r(&Monomial::gen(GenName::ASigma), 16).unwrap();
        assert_eq!(p, Poly::gen(GenName::ASigma));
        // eta_R(u^4) = u^4 + tau_2 a^7
        let p = eta_r(&Monomial::gen_pow(GenName::USigma, 4), 16).unwrap();
        let mut expect = Poly::from_monomial(Monomial::gen_pow(GenName::USigma, 4));
        expect.toggle(Monomial::from_pairs(&[(GenName::Tau(2), 1), (GenName::ASigma, 7)]));
        assert_eq!(p, expect);
        // unsupported input
        assert!(eta_r(&tau(0), 16).is_err());
    }

    #[test]
    fn eta_r_is_multiplicative() {
        for (a, b) in [(1i64, 1i64), (2, 3), (4, 3), (5, 2)] {
            let lhs = eta_r(&Monomial::gen_pow(GenName::USigma, a + b), 64).unwrap();
            let x = eta_r(&Monomial::gen_pow(GenName::USigma, a), 64).unwrap();
            let y = eta_r(&Monomial::gen_pow(GenName::USigma, b), 64).unwrap();
            let rhs = lambda_reduce(&x.mul(&y), Some(64));
            assert_eq!(lhs, rhs, "u^{} * u^{}", a, b);
        }
    }

    #[test]
    fn reduce_zeta_small_cases() {
        // zeta_1 -> tau_0
        let p = reduce_zeta(1, 0, 4).unwrap();
        assert_eq!(p, Poly::gen(GenName::Tau(0)));
        // zeta_2 -> tau_1 u + tau_0 tau_1 a
        let p = reduce_zeta(2, 0, 8).unwrap();
        let mut expect = Poly::from_monomial(Monomial::from_pairs(&[
            (GenName::Tau(1), 1),
            (GenName::USigma, 1),
        ]));
        expect.toggle(Monomial::from_pairs(&[
            (GenName::Tau(0), 1),
            (GenName::Tau(1), 1),
            (GenName::ASigma, 1),
        ]));
        assert_eq!(p, expect);
        // zeta_1^2 -> leading term tau_1 a
        let p = reduce_zeta(1, 1, 8).unwrap();
        let lead = p
            .terms()
            .min_by_key(|t| t.exponent(GenName::ASigma))
            .unwrap();
        assert_eq!(
            *lead,
            Monomial::from_pairs(&[(GenName::Tau(1), 1), (GenName::ASigma, 1)])
        );
    }

    #[test]
    fn reduce_zeta_leading_terms_through_six() {
        for i in 1..=6u8 {
            for j in 0..=(6 - i) {
                let trunc = (1i64 << j) + 4;
                // reduce_zeta validates its own leading term internally
                let p = reduce_zeta(i, j, trunc).unwrap();
                assert!(!p.is_zero());
            }
        }
    }

    #[test]
    fn reduce_zeta_truncation_guard() {
        assert!(matches!(
            reduce_zeta(2, 2, 3),
            Err(SteenrodError::TruncationTooSmall(3, 4))
        ));
    }

    #[test]
    fn reduce_zeta_degree_check() {
        // every term of the image has integer RO-degree (2^i - 1) 2^j
        let table = crate::models::lambda_table(8);
        for i in 1..=4u8 {
            for j in 0..=2u8 {
                let p = reduce_zeta(i, j, (1 << j) + 4).unwrap();
                let d = table.poly_degree(&p).unwrap().unwrap();
                assert_eq!(d.q, 0, "zeta_{}^{}", i, 1 << j);
                assert_eq!(d.p, ((1i64 << i) - 1) * (1i64 << j));
            }
        }
    }

    #[test]
    fn am_relation_consistency() {
        // reduce tau_i^4 with different strategies; both must agree
        for i in 0..=2u8 {
            let m = Poly::from_monomial(Monomial::gen_pow(GenName::Tau(i), 4));
            let a = am_reduce(&m, 16, true);
            let b = am_reduce(&m, 16, false);
            assert_eq!(a, b, "tau_{}^4", i);
            // and squaring the reduction of tau_i^2 agrees with reducing tau_i^4
            let sq = am_reduce(&Poly::from_monomial(Monomial::gen_pow(GenName::Tau(i), 2)), 16, true);
            let sq2 = am_reduce(&sq.square(), 16, true);
            assert_eq!(a, sq2, "tau_{}^2 squared", i);
        }
    }

    #[test]
    fn coproduct_examples() {
        // psi(xi_2) = xi_2 (x) 1 + xi_1^2 (x) xi_1 + 1 (x) xi_2
        let t = coproduct(GenName::Xi(2)).unwrap();
        let mut expect = Tensor2::zero();
        expect.toggle(Monomial::gen(GenName::Xi(2)), Monomial::one());
        expect.toggle(Monomial::gen_pow(GenName::Xi(1), 2), Monomial::gen(GenName::Xi(1)));
        expect.toggle(Monomial::one(), Monomial::gen(GenName::Xi(2)));
        assert_eq!(t, expect);
        // tau_0 is primitive
        let t = coproduct(GenName::Tau(0)).unwrap();
        let mut expect = Tensor2::zero();
        expect.toggle(tau(0), Monomial::one());
        expect.toggle(Monomial::one(), tau(0));
        assert_eq!(t, expect);
        // zeta_1 is primitive
        let t = coproduct(GenName::Zeta(1)).unwrap();
        let mut expect = Tensor2::zero();
        expect.toggle(Monomial::gen(GenName::Zeta(1)), Monomial::one());
        expect.toggle(Monomial::one(), Monomial::gen(GenName::Zeta(1)));
        assert_eq!(t, expect);
    }

    #[test]
    fn cobar_d_examples() {
        let mut cache = CoproductCache::new();
        // d[zeta_1] = 0
        let d = cobar_d(&[Monomial::gen(GenName::Zeta(1))], &mut cache);
        assert!(d.is_zero());
        // d[zeta_2] = [zeta_1^2 | zeta_1]
        let d = cobar_d(&[Monomial::gen(GenName::Zeta(2))], &mut cache);
        let expect = CobarElt::of(vec![
            Monomial::gen_pow(GenName::Zeta(1), 2),
            Monomial::gen(GenName::Zeta(1)),
        ]);
        assert_eq!(d, expect);
    }

    fn random_word(rng: &mut StdRng, max_t: i64) -> CobarWord {
        let s = rng.gen_range(1..=4);
        let mut w = Vec::new();
        for _ in 0..s {
            let d = rng.gen_range(1..=max_t.max(1));
            let ms = zeta_monomials(d);
            if ms.is_empty() {
                continue;
            }
            w.push(ms[rng.gen_range(0..ms.len())].clone());
        }
        if w.is_empty() {
            w.push(Monomial::gen(GenName::Zeta(1)));
        }
        w
    }

    #[test]
    fn d_squared_zero_random() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let mut cache = CoproductCache::new();
        for _ in 0..200 {
            let w = random_word(&mut rng, 6);
            let dd = cobar_d_elt(&cobar_d(&w, &mut cache), &mut cache);
            assert!(dd.is_zero(), "d^2 != 0 on {}", word_to_string(&w));
        }
    }

    #[test]
    fn sq0_commutes_with_d_random() {
        let mut rng = StdRng::seed_from_u64(0xcafe);
        let mut cache = CoproductCache::new();
        for _ in 0..200 {
            let w = random_word(&mut rng, 5);
            let lhs = sq0_elt(&cobar_d(&w, &mut cache));
            let rhs = cobar_d(&sq0(&w), &mut cache);
            assert_eq!(lhs, rhs, "on {}", word_to_string(&w));
        }
    }

    #[test]
    fn sq0_word_examples() {
        let z2sq = Monomial::gen_pow(GenName::Zeta(2), 2);
        let w: CobarWord = vec![z2sq.clone(), z2sq.clone(), z2sq.clone(), z2sq];
        let s = sq0(&w);
        assert!(s.iter().all(|m| *m == Monomial::gen_pow(GenName::Zeta(2), 4)));
        assert_eq!(
            sq0(&[Monomial::gen(GenName::Zeta(1))]),
            vec![Monomial::gen_pow(GenName::Zeta(1), 2)]
        );
    }

    #[test]
    fn ext_one_line() {
        // dim Ext^{1,t} = 1 exactly for t a power of 2
        for t in 1..=20 {
            let g = ext_bruteforce(1, t).unwrap();
            let expect = (t as u64).is_power_of_two() as usize;
            assert_eq!(g.dim, expect, "Ext^(1,{})", t);
        }
    }

    #[test]
    fn ext_h3_representative() {
        let g = ext_bruteforce(1, 8).unwrap();
        assert_eq!(g.dim, 1);
        // the unique class is h_3 = [zeta_1^8]
        let rep = &g.representatives[0];
        assert!(rep
            .words()
            .any(|w| w == &vec![Monomial::gen_pow(GenName::Zeta(1), 8)]));
    }

    #[test]
    fn ext_bounds() {
        assert!(ext_bruteforce(6, 10).is_err());
        assert!(ext_bruteforce(2, 40).is_err());
    }

    #[test]
    fn filtration_values() {
        // zeta_2^2 is h_{2,1}, filtration 1
        assert_eq!(modified_filtration(&Monomial::gen_pow(GenName::Zeta(2), 2)), 1);
        // zeta_1^7 = h_{1,0} h_{1,1} h_{1,2}: 0 + 1 + 3
        assert_eq!(modified_filtration(&Monomial::gen_pow(GenName::Zeta(1), 7)), 4);
        let w = vec![
            Monomial::gen_pow(GenName::Zeta(2), 2),
            Monomial::gen_pow(GenName::Zeta(2), 2),
        ];
        assert_eq!(word_filtration(&w), 2);
        assert_eq!(word_degree(&w), 12);
    }
}
