//! Multigraded monomial and polynomial arithmetic over F2.
//!
//! Degrees live in RO(C2) = Z{1, sigma}, stored as integer pairs. Generators
//! are drawn from a fixed symbol set (a_sigma, u_sigma, u_{2sigma}, vbar_i,
//! w_i, tau_i, xi_i, zeta_i, h_{i,j}); each model declares the subset it uses
//! together with degrees and filtrations. Polynomials are F2 sums of
//! monomials, kept homogeneous by construction. Differentials are declared on
//! 2-power blocks of single generators and extended to monomials by the
//! characteristic-2 Leibniz rule.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A virtual C2-representation degree p + q*sigma.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
pub struct ROC2Degree {
    pub p: i64,
    pub q: i64,
}

impl ROC2Degree {
    pub const ZERO: ROC2Degree = ROC2Degree { p: 0, q: 0 };

    pub fn new(p: i64, q: i64) -> Self {
        ROC2Degree { p, q }
    }

    /// Underlying (nonequivariant) dimension p + q.
    pub fn dimension(self) -> i64 {
        self.p + self.q
    }

    /// Dimension of the fixed-point sphere, i.e. the trivial part.
    pub fn fixed_dimension(self) -> i64 {
        self.p
    }

    pub fn is_integer_graded(self) -> bool {
        self.q == 0
    }

    pub fn scaled(self, n: i64) -> Self {
        ROC2Degree {
            p: self.p * n,
            q: self.q * n,
        }
    }
}

impl std::ops::Add for ROC2Degree {
    type Output = ROC2Degree;
    fn add(self, rhs: Self) -> Self {
        ROC2Degree {
            p: self.p + rhs.p,
            q: self.q + rhs.q,
        }
    }
}

impl std::ops::Sub for ROC2Degree {
    type Output = ROC2Degree;
    fn sub(self, rhs: Self) -> Self {
        ROC2Degree {
            p: self.p - rhs.p,
            q: self.q - rhs.q,
        }
    }
}

/// The regular representation rho_2 = 1 + sigma.
pub const RHO: ROC2Degree = ROC2Degree { p: 1, q: 1 };
/// The sign representation sigma.
pub const SIGMA: ROC2Degree = ROC2Degree { p: 0, q: 1 };

pub fn deg_add(d1: ROC2Degree, d2: ROC2Degree) -> ROC2Degree {
    d1 + d2
}

/// Generator symbols. The derived `Ord` is the canonical generator order
/// (alphabetical by rendered family name, then indices), which in turn fixes
/// the monomial order used everywhere for deterministic output.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
pub enum GenName {
    /// a_sigma, the Euler class of sigma.
    ASigma,
    /// h_{i,j}, the class of zeta_i^{2^j} on the May E_1-page.
    H(u8, u8),
    /// tau_i in the quotient dual Steenrod algebras.
    Tau(u8),
    /// u_{2sigma}, the integral orientation class.
    U2Sigma,
    /// u_sigma, the mod-2 orientation class.
    USigma,
    /// vbar_i; vbar_0 is the associated-graded tower class of 2.
    VBar(u8),
    /// w_i = [tau_i] on the equivariant May E_1-page.
    W(u8),
    /// xi_i in the equivariant dual Steenrod algebras.
    Xi(u8),
    /// zeta_i in the classical dual Steenrod algebra (and its images).
    Zeta(u8),
}

impl fmt::Display for GenName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenName::ASigma => write!(f, "as"),
            GenName::H(i, j) => {
                if *i < 10 && *j < 10 {
                    write!(f, "h{}{}", i, j)
                } else {
                    write!(f, "h{},{}", i, j)
                }
            }
            GenName::Tau(i) => write!(f, "t{}", i),
            GenName::U2Sigma => write!(f, "u2s"),
            GenName::USigma => write!(f, "us"),
            GenName::VBar(i) => write!(f, "v{}", i),
            GenName::W(i) => write!(f, "w{}", i),
            GenName::Xi(i) => write!(f, "x{}", i),
            GenName::Zeta(i) => write!(f, "z{}", i),
        }
    }
}

/// A monomial: a sparse exponent vector. Coefficients live on the polynomial
/// level (F2) or in `ZPoly` for the integral reporting mode.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Default)]
pub struct Monomial {
    exps: BTreeMap<GenName, i64>,
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn gen(g: GenName) -> Self {
        Monomial::gen_pow(g, 1)
    }

    pub fn gen_pow(g: GenName, e: i64) -> Self {
        let mut m = Monomial::default();
        if e != 0 {
            m.exps.insert(g, e);
        }
        m
    }

    pub fn from_pairs(pairs: &[(GenName, i64)]) -> Self {
        let mut m = Monomial::default();
        for &(g, e) in pairs {
            m.mul_gen_inplace(g, e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, g: GenName) -> i64 {
        self.exps.get(&g).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (GenName, i64)> + '_ {
        self.exps.iter().map(|(&g, &e)| (g, e))
    }

    pub fn total_exponent(&self) -> i64 {
        self.exps.values().sum()
    }

    pub fn mul_gen_inplace(&mut self, g: GenName, e: i64) {
        let cur = self.exponent(g) + e;
        if cur == 0 {
            self.exps.remove(&g);
        } else {
            self.exps.insert(g, cur);
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.clone();
        for (g, e) in other.exponents() {
            m.mul_gen_inplace(g, e);
        }
        m
    }

    /// Divide by `other`; exponents may go negative, validity against the
    /// generator table (invertibility) is the caller's concern.
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut m = self.clone();
        for (g, e) in other.exponents() {
            m.mul_gen_inplace(g, -e);
        }
        m
    }

    pub fn pow(&self, n: i64) -> Monomial {
        let mut m = Monomial::default();
        for (g, e) in self.exponents() {
            m.mul_gen_inplace(g, e * n);
        }
        m
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (g, e) in self.exponents() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", g)?;
            } else {
                write!(f, "{}^{}", g, e)?;
            }
        }
        Ok(())
    }
}

/// An F2 polynomial: a set of monomials (symmetric difference as addition).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Poly {
    terms: std::collections::BTreeSet<Monomial>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut p = Poly::default();
        p.terms.insert(m);
        p
    }

    pub fn from_monomials(ms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Poly::default();
        for m in ms {
            p.toggle(m);
        }
        p
    }

    pub fn gen(g: GenName) -> Self {
        Poly::from_monomial(Monomial::gen(g))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Add a monomial mod 2.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for m in other.terms() {
            out.toggle(m.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for m in other.terms() {
            self.toggle(m.clone());
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly::from_monomials(self.terms().map(|t| t.mul(m)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for a in self.terms() {
            for b in other.terms() {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn square(&self) -> Poly {
        // char 2: cross terms cancel
        Poly::from_monomials(self.terms().map(|t| t.pow(2)))
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Option<Monomial>) -> Poly {
        let mut out = Poly::zero();
        for t in self.terms() {
            if let Some(m) = f(t) {
                out.toggle(m);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", t)?;
        }
        Ok(())
    }
}

/// A term with integer coefficient, for the Z-mode slice E_2 report.
/// The relation 2*a_sigma = 0 is enforced on construction: any monomial
/// carrying a positive a_sigma power has its coefficient reduced mod 2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZPoly {
    terms: BTreeMap<Monomial, i64>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn term(coeff: i64, m: Monomial) -> Self {
        let mut p = ZPoly::zero();
        p.add_term(coeff, m);
        p
    }

    fn normalize(coeff: i64, m: &Monomial) -> i64 {
        if m.exponent(GenName::ASigma) > 0 {
            coeff.rem_euclid(2)
        } else {
            coeff
        }
    }

    pub fn add_term(&mut self, coeff: i64, m: Monomial) {
        let c = Self::normalize(self.terms.get(&m).copied().unwrap_or(0) + coeff, &m);
        if c == 0 {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
    }

    pub fn mul_term(&self, coeff: i64, m: &Monomial) -> ZPoly {
        let mut out = ZPoly::zero();
        for (t, &c) in &self.terms {
            out.add_term(c * coeff, t.mul(m));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Declaration of a generator: homotopy degree plus the bookkeeping weights a
/// model needs. `filt` is the chart filtration in the model's own convention
/// (a_sigma-count for slice-type models, May filtration for May-type models,
/// both of which assign a_sigma weight 1), `adams` is the cobar/Adams weight,
/// and `weight` counts tower-family generators for cross-model comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: GenName,
    pub degree: ROC2Degree,
    pub adams_filtration: u32,
    pub may_filtration: u32,
    pub weight: u32,
    pub invertible: bool,
}

#[derive(Clone, Debug, Default)]
pub struct GeneratorTable {
    decls: BTreeMap<GenName, GeneratorDecl>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("negative exponent on non-invertible generator {0}")]
    NegativeExponent(String),
    #[error("inhomogeneous polynomial: {0} vs {1:?}")]
    Inhomogeneous(String, ROC2Degree),
    #[error("differential rule degree check failed: {0}")]
    RuleDegree(String),
}

impl GeneratorTable {
    pub fn insert(&mut self, d: GeneratorDecl) {
        self.decls.insert(d.name, d);
    }

    pub fn get(&self, g: GenName) -> Option<&GeneratorDecl> {
        self.decls.get(&g)
    }

    pub fn contains(&self, g: GenName) -> bool {
        self.decls.contains_key(&g)
    }

    pub fn decls(&self) -> impl Iterator<Item = &GeneratorDecl> {
        self.decls.values()
    }

    pub fn check_monomial(&self, m: &Monomial) -> Result<(), AlgebraError> {
        for (g, e) in m.exponents() {
            let decl = self
                .get(g)
                .ok_or_else(|| AlgebraError::UnknownGenerator(g.to_string()))?;
            if e < 0 && !decl.invertible {
                return Err(AlgebraError::NegativeExponent(g.to_string()));
            }
        }
        Ok(())
    }

    pub fn degree(&self, m: &Monomial) -> Result<ROC2Degree, AlgebraError> {
        let mut d = ROC2Degree::ZERO;
        for (g, e) in m.exponents() {
            let decl = self
                .get(g)
                .ok_or_else(|| AlgebraError::UnknownGenerator(g.to_string()))?;
            d = d + decl.degree.scaled(e);
        }
        Ok(d)
    }

    fn weighted_sum(&self, m: &Monomial, f: impl Fn(&GeneratorDecl) -> u32) -> Result<i64, AlgebraError> {
        let mut s = 0i64;
        for (g, e) in m.exponents() {
            let decl = self
                .get(g)
                .ok_or_else(|| AlgebraError::UnknownGenerator(g.to_string()))?;
            s += f(decl) as i64 * e;
        }
        Ok(s)
    }

    pub fn adams_filtration(&self, m: &Monomial) -> Result<i64, AlgebraError> {
        self.weighted_sum(m, |d| d.adams_filtration)
    }

    pub fn may_filtration(&self, m: &Monomial) -> Result<i64, AlgebraError> {
        self.weighted_sum(m, |d| d.may_filtration)
    }

    pub fn weight(&self, m: &Monomial) -> Result<i64, AlgebraError> {
        self.weighted_sum(m, |d| d.weight)
    }

    /// Degree of a homogeneous polynomial; errors if terms disagree.
    pub fn poly_degree(&self, p: &Poly) -> Result<Option<ROC2Degree>, AlgebraError> {
        let mut deg = None;
        for t in p.terms() {
            let d = self.degree(t)?;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                Some(d0) => return Err(AlgebraError::Inhomogeneous(t.to_string(), d0)),
            }
        }
        Ok(deg)
    }
}

/// Grading conventions for chart positions and differential shifts.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Convention {
    /// Adams convention: d_r: E^{s,t} -> E^{s+r, t+r-1}. Chart (stem, s) with
    /// s the a_sigma-derived filtration.
    Slice,
    /// May convention: d_r: (s, t, m) -> (s+1, t, m+r).
    May,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Position {
    Slice { stem: i64, filtration: i64 },
    May { s: i64, t: i64, m: i64 },
}

/// Chart coordinate of a monomial over a declared generator table.
pub fn monomial_position(
    m: &Monomial,
    table: &GeneratorTable,
    convention: Convention,
) -> Result<Position, AlgebraError> {
    let deg = table.degree(m)?;
    match convention {
        Convention::Slice => Ok(Position::Slice {
            stem: deg.dimension(),
            filtration: table.adams_filtration(m)?,
        }),
        Convention::May => {
            let s = table.adams_filtration(m)?;
            Ok(Position::May {
                s,
                t: deg.dimension() + s,
                m: table.may_filtration(m)?,
            })
        }
    }
}

/// A differential rule d_page(gen^block) = target, with block a power of 2.
/// The Leibniz extension fires the rule on a factor gen^e exactly when the
/// 2-adic valuation of |e| matches the block.
#[derive(Clone, Debug)]
pub struct DifferentialRule {
    pub page: i64,
    pub gen: GenName,
    pub block: i64,
    pub target: Poly,
}

impl DifferentialRule {
    pub fn source_monomial(&self) -> Monomial {
        Monomial::gen_pow(self.gen, self.block)
    }

    /// Check the convention's degree and filtration shift.
    pub fn degree_check(
        &self,
        table: &GeneratorTable,
        convention: Convention,
    ) -> Result<(), AlgebraError> {
        let src = self.source_monomial();
        let src_deg = table.degree(&src)?;
        let tgt_deg = table
            .poly_degree(&self.target)?
            .ok_or_else(|| AlgebraError::RuleDegree(format!("zero target for {}", src)))?;
        if tgt_deg.dimension() != src_deg.dimension() - 1 {
            return Err(AlgebraError::RuleDegree(format!(
                "stem shift of d_{}({}) is {} - {}",
                self.page,
                src,
                tgt_deg.dimension(),
                src_deg.dimension()
            )));
        }
        let (src_f, tgt_f, src_s, tgt_s) = match convention {
            Convention::Slice => (
                table.adams_filtration(&src)?,
                table.adams_filtration(self.target.terms().next().unwrap())?,
                0,
                0,
            ),
            Convention::May => (
                table.may_filtration(&src)?,
                table.may_filtration(self.target.terms().next().unwrap())?,
                table.adams_filtration(&src)?,
                table.adams_filtration(self.target.terms().next().unwrap())?,
            ),
        };
        if tgt_f != src_f + self.page {
            return Err(AlgebraError::RuleDegree(format!(
                "filtration shift of d_{}({}) is {}",
                self.page,
                src,
                tgt_f - src_f
            )));
        }
        if convention == Convention::May && tgt_s != src_s + 1 {
            return Err(AlgebraError::RuleDegree(format!(
                "Adams shift of d_{}({}) is {}",
                self.page,
                src,
                tgt_s - src_s
            )));
        }
        // all terms homogeneous in every filtration
        for t in self.target.terms() {
            if table.may_filtration(t)? != table.may_filtration(self.target.terms().next().unwrap())?
                || table.adams_filtration(t)?
                    != table.adams_filtration(self.target.terms().next().unwrap())?
            {
                return Err(AlgebraError::RuleDegree(format!(
                    "mixed filtration target for d_{}({})",
                    self.page, src
                )));
            }
        }
        Ok(())
    }
}

/// Rules indexed by generator; at most one rule per (generator, block).
#[derive(Clone, Debug, Default)]
pub struct RuleSet {
    by_gen: BTreeMap<GenName, Vec<DifferentialRule>>,
}

impl RuleSet {
    pub fn push(&mut self, rule: DifferentialRule) {
        let v = self.by_gen.entry(rule.gen).or_default();
        assert!(
            v.iter().all(|r| r.block != rule.block),
            "duplicate rule block for {}",
            rule.gen
        );
        v.push(rule);
        v.sort_by_key(|r| r.block);
    }

    pub fn rules(&self) -> impl Iterator<Item = &DifferentialRule> {
        self.by_gen.values().flatten()
    }

    pub fn for_gen(&self, g: GenName) -> &[DifferentialRule] {
        self.by_gen.get(&g).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn pages(&self) -> Vec<i64> {
        let mut pages: Vec<i64> = self.rules().map(|r| r.page).collect();
        pages.sort_unstable();
        pages.dedup();
        pages
    }

    pub fn max_page(&self) -> i64 {
        self.rules().map(|r| r.page).max().unwrap_or(0)
    }
}

/// d_r(m) by the characteristic-2 Leibniz rule. A factor g^e contributes
/// through the rule on block 2^j at page r exactly when v_2(|e|) = j; even
/// powers of a page-r source therefore contribute nothing at page r.
pub fn leibniz_extend(rules: &RuleSet, m: &Monomial, r: i64) -> Poly {
    let mut out = Poly::zero();
    for (g, e) in m.exponents() {
        debug_assert!(e != 0);
        for rule in rules.for_gen(g) {
            if rule.page != r {
                continue;
            }
            if e.unsigned_abs().trailing_zeros() as i64 != rule.block.trailing_zeros() as i64 {
                continue;
            }
            // rest = m / g^block, then multiply by the target
            let mut rest = m.clone();
            rest.mul_gen_inplace(g, -rule.block);
            out.add_assign(&rule.target.mul_monomial(&rest));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use GenName::*;

    fn slice_table() -> GeneratorTable {
        crate::models::slice_bpr_table(4)
    }

    #[test]
    fn deg_add_examples() {
        assert_eq!(
            deg_add(ROC2Degree::new(1, 1), ROC2Degree::new(0, -1)),
            ROC2Degree::new(1, 0)
        );
        assert_eq!(
            deg_add(ROC2Degree::new(0, 0), ROC2Degree::new(3, 3)),
            ROC2Degree::new(3, 3)
        );
        assert_eq!(
            deg_add(ROC2Degree::new(2, -2), ROC2Degree::new(-2, 2)),
            ROC2Degree::new(0, 0)
        );
    }

    #[test]
    fn dimension_and_fixed() {
        let d = ROC2Degree::new(3, -1);
        assert_eq!(d.dimension(), 2);
        assert_eq!(d.fixed_dimension(), 3);
        assert!(!d.is_integer_graded());
        assert!(ROC2Degree::new(5, 0).is_integer_graded());
    }

    #[test]
    fn monomial_order_is_deterministic() {
        // lexicographic on (generator name, index), then exponent
        let a = Monomial::gen(ASigma);
        let v1 = Monomial::gen(VBar(1));
        assert!(a < v1);
        let v1a = v1.mul(&a);
        assert!(a < v1a);
        assert_eq!(format!("{}", v1a), "as v1");
    }

    #[test]
    fn monomial_display() {
        let m = Monomial::from_pairs(&[(VBar(2), 4), (U2Sigma, 4), (ASigma, 4)]);
        assert_eq!(m.to_string(), "as^4 u2s^4 v2^4");
        assert_eq!(Monomial::one().to_string(), "1");
    }

    #[test]
    fn poly_char2() {
        let p = Poly::gen(ASigma).add(&Poly::gen(ASigma));
        assert!(p.is_zero());
        let q = Poly::gen(ASigma).add(&Poly::gen(USigma));
        assert_eq!(q.square(), {
            let mut s = Poly::zero();
            s.toggle(Monomial::gen_pow(ASigma, 2));
            s.toggle(Monomial::gen_pow(USigma, 2));
            s
        });
    }

    #[test]
    fn monomial_positions_from_degree_table() {
        let table = slice_table();
        // vbar_2^4 u_{2sigma}^4 a_sigma^4 sits in stem 20, filtration 4
        let m = Monomial::from_pairs(&[(VBar(2), 4), (U2Sigma, 4), (ASigma, 4)]);
        assert_eq!(
            monomial_position(&m, &table, Convention::Slice).unwrap(),
            Position::Slice {
                stem: 20,
                filtration: 4
            }
        );
        // vbar_1 a_sigma at (1,1)
        let m = Monomial::from_pairs(&[(VBar(1), 1), (ASigma, 1)]);
        assert_eq!(
            monomial_position(&m, &table, Convention::Slice).unwrap(),
            Position::Slice {
                stem: 1,
                filtration: 1
            }
        );
    }

    #[test]
    fn may_positions() {
        let table = crate::models::modified_may_table(32);
        let m = Monomial::gen_pow(H(2, 1), 4);
        assert_eq!(
            monomial_position(&m, &table, Convention::May).unwrap(),
            Position::May { s: 4, t: 24, m: 4 }
        );
        let m = Monomial::gen_pow(H(2, 1), 2);
        assert_eq!(
            monomial_position(&m, &table, Convention::May).unwrap(),
            Position::May { s: 2, t: 12, m: 2 }
        );
    }

    #[test]
    fn unknown_generator_errors() {
        let table = slice_table();
        let m = Monomial::gen(Zeta(1));
        assert!(matches!(
            table.degree(&m),
            Err(AlgebraError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn leibniz_char2_and_blocks() {
        let model = crate::models::slice_bpr(40);
        let rules = &model.rules;
        // d_3(u_{2sigma}^2) = 0, the square cancels
        let u2 = Monomial::gen_pow(U2Sigma, 2);
        assert!(leibniz_extend(rules, &u2, 3).is_zero());
        // d_7(u_{2sigma}^2 vbar_1) = vbar_1 vbar_2 a_sigma^7
        let m = Monomial::from_pairs(&[(U2Sigma, 2), (VBar(1), 1)]);
        let d7 = leibniz_extend(rules, &m, 7);
        let expect = Poly::from_monomial(Monomial::from_pairs(&[
            (VBar(1), 1),
            (VBar(2), 1),
            (ASigma, 7),
        ]));
        assert_eq!(d7, expect);
        // d_3(u_{2sigma}^3) fires on the odd block
        let m = Monomial::gen_pow(U2Sigma, 3);
        let d3 = leibniz_extend(rules, &m, 3);
        let expect = Poly::from_monomial(Monomial::from_pairs(&[
            (U2Sigma, 2),
            (VBar(1), 1),
            (ASigma, 3),
        ]));
        assert_eq!(d3, expect);
    }

    #[test]
    fn leibniz_h21_fourth_power_vanishes_through_page7() {
        let model = crate::models::modified_may_sphere(32, 8);
        let m = Monomial::gen_pow(H(2, 1), 4);
        for r in [1, 3, 5, 7] {
            assert!(leibniz_extend(&model.rules, &m, r).is_zero(), "d_{}", r);
        }
    }

    #[test]
    fn zpoly_torsion() {
        // 2 * (a_sigma-divisible monomial) = 0
        let m = Monomial::from_pairs(&[(ASigma, 1), (U2Sigma, 1)]);
        let p = ZPoly::term(2, m.clone());
        assert!(p.is_zero());
        let p = ZPoly::term(3, m);
        let (_, c) = p.terms().next().unwrap();
        assert_eq!(c, 1);
        // a_sigma-free monomials keep integer coefficients
        let p = ZPoly::term(6, Monomial::gen(U2Sigma));
        let (_, c) = p.terms().next().unwrap();
        assert_eq!(c, 6);
        // multiplying into a_sigma reduces mod 2
        let p = ZPoly::term(2, Monomial::gen(U2Sigma)).mul_term(1, &Monomial::gen(ASigma));
        assert!(p.is_zero());
    }
}
