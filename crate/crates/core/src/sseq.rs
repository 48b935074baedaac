//! Generic multipage spectral sequence engine over F2.
//!
//! Pages are stored per bidegree as a pair of row spaces (cycles-so-far,
//! boundaries-so-far) in the fixed E_1 monomial basis; the page is their
//! quotient with coset representatives led by the smallest monomial. Both
//! grading conventions in use reduce to the same shift on the engine's keys:
//! d_r moves (stem, filtration, weight) to (stem - 1, filtration + r,
//! weight + 1), where filtration is the a_sigma-count for slice-type models
//! and the May filtration for May-type models, and weight counts the tower
//! family (vbar / w / h generators).

use crate::algebra::{leibniz_extend, Monomial, Poly};
use crate::gf2::{self, BitVec, RowSpace};
use crate::models::ModelSpec;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, serde::Serialize)]
pub struct Key {
    pub x: i64,
    pub y: i64,
    pub w: i64,
}

impl Key {
    pub fn shifted(self, r: i64) -> Key {
        Key {
            x: self.x - 1,
            y: self.y + r,
            w: self.w + 1,
        }
    }
}

/// Window bounds, in engine coordinates. `exact_t` restricts to a single
/// internal degree t = stem + weight (May-type models only), which is a
/// closed slab since May differentials preserve t.
#[derive(Clone, Copy, Debug)]
pub struct Range {
    pub min_stem: i64,
    pub max_stem: i64,
    pub max_filt: i64,
    pub max_weight: i64,
    pub exact_t: Option<i64>,
}

impl Range {
    pub fn stems(max_stem: i64, max_filt: i64) -> Range {
        Range {
            min_stem: 0,
            max_stem,
            max_filt,
            max_weight: max_stem + max_filt + 2,
            exact_t: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.min_stem > self.max_stem || self.max_filt < 0 || self.max_weight < 0
    }

    pub fn contains(&self, k: Key) -> bool {
        k.x >= self.min_stem
            && k.x <= self.max_stem
            && k.y >= 0
            && k.y <= self.max_filt
            && k.w >= 0
            && k.w <= self.max_weight
            && self.exact_t.map_or(true, |t| k.x + k.w == t)
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("empty range")]
    EmptyRange,
    #[error("d^2 != 0 at page {0}: {1}")]
    DSquared(i64, String),
    #[error("class {0} is not on the E_2-page")]
    ClassNotOnE2(String),
    #[error("differential image leaves the enumerated basis: {0}")]
    BasisHole(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum FateStatus {
    SurvivesInRange,
    SupportsDr,
    KilledByDr,
    RangeLimited,
}

/// The fate of a single class across the run pages.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FateRecord {
    pub class: String,
    pub status: FateStatus,
    pub page: Option<i64>,
    pub partner: Option<String>,
}

#[derive(Clone, Debug)]
enum Death {
    Supports { page: i64, target: Poly },
    KilledBy { page: i64, partner: Monomial },
}

impl Death {
    fn page(&self) -> i64 {
        match self {
            Death::Supports { page, .. } | Death::KilledBy { page, .. } => *page,
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Arrow {
    pub page: i64,
    pub source: Monomial,
    pub targets: Vec<Monomial>,
}

struct Spot {
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    cycles: RowSpace,
    boundaries: RowSpace,
}

impl Spot {
    fn new(basis: Vec<Monomial>) -> Spot {
        let n = basis.len();
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Spot {
            basis,
            index,
            cycles: RowSpace::full(n),
            boundaries: RowSpace::new(n),
        }
    }

    fn dim(&self) -> usize {
        self.cycles.rank() - self.boundaries.rank()
    }

    fn poly_of(&self, v: &BitVec) -> Poly {
        Poly::from_monomials(gf2::support(v).into_iter().map(|i| self.basis[i].clone()))
    }

    fn vector_of(&self, p: &Poly) -> Result<BitVec, EngineError> {
        let mut v = gf2::zero_vec(self.basis.len());
        for m in p.terms() {
            let i = self
                .index
                .get(m)
                .ok_or_else(|| EngineError::BasisHole(m.to_string()))?;
            gf2::flip_bit(&mut v, *i);
        }
        Ok(v)
    }

    /// E_r basis: coset representatives of cycles modulo boundaries, keyed by
    /// the lead (smallest) monomial.
    fn reps(&self) -> Vec<(usize, BitVec)> {
        self.cycles.quotient_reps(&self.boundaries)
    }
}

/// A running spectral sequence: the current page together with the history of
/// arrows and class fates accumulated so far.
pub struct PageStack {
    pub model: ModelSpec,
    pub range: Range,
    spots: BTreeMap<Key, Spot>,
    /// The upcoming differential index: turn_page runs d_{page}.
    pub page: i64,
    deaths: BTreeMap<Monomial, Death>,
    pub arrows: BTreeMap<i64, Vec<Arrow>>,
    range_flagged: BTreeSet<Monomial>,
    /// dims of E_r per key, recorded at the start of each page turn.
    pub dim_history: BTreeMap<i64, BTreeMap<Key, usize>>,
    /// rank of d_r out of each key.
    pub rank_history: BTreeMap<i64, BTreeMap<Key, usize>>,
}

/// Monomial basis of E_1 within range, bucketed by bidegree.
pub fn build_e_page(model: &ModelSpec, range: Range) -> Result<PageStack, EngineError> {
    if range.is_empty() {
        return Err(EngineError::EmptyRange);
    }
    let mut spots: BTreeMap<Key, Vec<Monomial>> = BTreeMap::new();
    for m in model.enumerate_basis(&range) {
        let key = model.key_of(&m);
        debug_assert!(range.contains(key));
        spots.entry(key).or_default().push(m);
    }
    let spots = spots
        .into_iter()
        .map(|(k, mut basis)| {
            basis.sort();
            (k, Spot::new(basis))
        })
        .collect();
    Ok(PageStack {
        model: model.clone(),
        range,
        spots,
        page: 1,
        deaths: BTreeMap::new(),
        arrows: BTreeMap::new(),
        range_flagged: BTreeSet::new(),
        dim_history: BTreeMap::new(),
        rank_history: BTreeMap::new(),
    })
}

impl PageStack {
    pub fn keys(&self) -> impl Iterator<Item = Key> + '_ {
        self.spots.keys().copied()
    }

    pub fn dim_at(&self, key: Key) -> usize {
        self.spots.get(&key).map_or(0, |s| s.dim())
    }

    pub fn basis_at(&self, key: Key) -> &[Monomial] {
        self.spots.get(&key).map_or(&[], |s| s.basis.as_slice())
    }

    /// Current-page coset representatives at a key, as polynomials keyed by
    /// their lead monomial.
    pub fn reps_at(&self, key: Key) -> Vec<(Monomial, Poly)> {
        let Some(spot) = self.spots.get(&key) else {
            return vec![];
        };
        spot.reps()
            .into_iter()
            .map(|(p, v)| (spot.basis[p].clone(), spot.poly_of(&v)))
            .collect()
    }

    /// Run the differential d_{self.page} and advance to the next page.
    pub fn turn_page(&mut self) -> Result<(), EngineError> {
        let r = self.page;
        self.record_dims(r);
        let has_rules = self.model.rules.rules().any(|rule| rule.page == r);
        if !has_rules {
            self.page += 1;
            return Ok(());
        }

        // Phase 1: evaluate d_r on every representative, from the old state.
        struct SpotImages {
            source: Key,
            target: Key,
            rows: Vec<(usize, BitVec, Poly)>, // (rep pivot, rep vector, raw image)
        }
        let mut work: Vec<SpotImages> = Vec::new();
        for (&key, spot) in &self.spots {
            let target = key.shifted(r);
            let mut rows = Vec::new();
            let mut any = false;
            for (p, v) in spot.reps() {
                let poly = spot.poly_of(&v);
                let mut img = Poly::zero();
                for m in poly.terms() {
                    img.add_assign(&self.model.reduce_poly(&leibniz_extend(
                        &self.model.rules,
                        m,
                        r,
                    )));
                }
                any |= !img.is_zero();
                rows.push((p, v, img));
            }
            if !any {
                continue;
            }
            if !self.spots.contains_key(&target) {
                if self.range.contains(target) {
                    // a populated in-range key must exist if any monomial maps there
                    return Err(EngineError::BasisHole(format!(
                        "missing spot {:?} hit from {:?}",
                        target, key
                    )));
                }
                // differential leaves the window: flag the affected classes
                for (p, _, img) in &rows {
                    if !img.is_zero() {
                        self.range_flagged.insert(spot.basis[*p].clone());
                    }
                }
                continue;
            }
            work.push(SpotImages {
                source: key,
                target,
                rows,
            });
        }

        // Phase 2: per source spot, kernel with combination tracking, then
        // update boundaries at the target and cycles at the source.
        //
        // Representatives are processed in descending lead order, so when a
        // combination of sources lies in the kernel the surviving coset keeps
        // the smallest lead and the dying classes are the larger ones.
        let mut ranks: BTreeMap<Key, usize> = BTreeMap::new();
        for w in work {
            let src_basis: Vec<Monomial> = self.spots[&w.source].basis.clone();
            let images: Vec<(usize, BitVec, BitVec, Poly)> = {
                let tgt = &self.spots[&w.target];
                let mut rows = Vec::new();
                for (p, v, img) in w.rows.into_iter().rev() {
                    let vec = tgt.vector_of(&img)?;
                    // the image must be a cycle-so-far at the target
                    if !tgt.cycles.contains(&vec) {
                        return Err(EngineError::DSquared(
                            r,
                            format!("image {} of {} is not a cycle", img, src_basis[p]),
                        ));
                    }
                    let reduced = tgt.boundaries.reduce(vec);
                    rows.push((p, v, reduced, img));
                }
                rows
            };

            let mut pivots: Vec<(usize, BitVec, BitVec)> = Vec::new(); // (img lead, img, combo)
            let mut kernel: Vec<BitVec> = Vec::new();
            let mut kills: Vec<(BitVec, Monomial)> = Vec::new(); // (img, killer lead)
            let mut supports: Vec<(usize, Poly)> = Vec::new();
            for (p, v, mut img, raw) in images {
                let mut combo = v.clone();
                loop {
                    match gf2::leading_bit(&img) {
                        None => {
                            kernel.push(combo);
                            break;
                        }
                        Some(lead) => {
                            if let Some((_, pimg, pcombo)) =
                                pivots.iter().find(|(l, _, _)| *l == lead)
                            {
                                let (pi, pc) = (pimg.clone(), pcombo.clone());
                                gf2::xor_into(&mut img, &pi);
                                gf2::xor_into(&mut combo, &pc);
                            } else {
                                pivots.push((lead, img.clone(), combo.clone()));
                                kills.push((img.clone(), src_basis[p].clone()));
                                supports.push((p, raw));
                                break;
                            }
                        }
                    }
                }
            }
            ranks.insert(w.source, pivots.len());

            // record arrows and source deaths
            for (p, raw) in &supports {
                let source_mono = src_basis[*p].clone();
                self.deaths.insert(
                    source_mono.clone(),
                    Death::Supports {
                        page: r,
                        target: raw.clone(),
                    },
                );
                self.arrows.entry(r).or_default().push(Arrow {
                    page: r,
                    source: source_mono,
                    targets: raw.terms().cloned().collect(),
                });
            }

            // apply: new boundaries at the target, with kill attribution
            {
                let tgt = self.spots.get_mut(&w.target).unwrap();
                for (img, killer) in kills {
                    if let Some(pivot) = tgt.boundaries.insert(img) {
                        let victim = tgt.basis[pivot].clone();
                        self.deaths.insert(
                            victim,
                            Death::KilledBy {
                                page: r,
                                partner: killer,
                            },
                        );
                    }
                }
            }

            // apply: new cycles at the source
            {
                let src = self.spots.get_mut(&w.source).unwrap();
                let mut z = src.boundaries.clone();
                for k in kernel {
                    z.insert(k);
                }
                // boundaries stay cycles; kernel combos are the new cycles
                src.cycles = z;
            }
        }
        // numeric d^2 = 0: boundaries stay inside cycles everywhere
        for (key, spot) in &self.spots {
            for (_, row) in spot.boundaries.rows() {
                if !spot.cycles.contains(row) {
                    return Err(EngineError::DSquared(
                        r,
                        format!("boundary escapes cycles at {:?}", key),
                    ));
                }
            }
        }
        self.rank_history.insert(r, ranks);
        self.page += 1;
        Ok(())
    }

    fn record_dims(&mut self, r: i64) {
        let dims = self
            .spots
            .iter()
            .map(|(&k, s)| (k, s.dim()))
            .filter(|&(_, d)| d > 0)
            .collect();
        self.dim_history.insert(r, dims);
    }

    /// Run pages through d_{max_page} inclusive.
    pub fn run_to(&mut self, max_page: i64) -> Result<(), EngineError> {
        while self.page <= max_page {
            self.turn_page()?;
        }
        self.record_dims(self.page);
        Ok(())
    }

    /// Verify the rank-nullity bookkeeping of the last recorded pages:
    /// dim E_r(A) = dim E_{r+1}(A) + rank(d_r at A) + rank(d_r into A).
    pub fn check_rank_bookkeeping(&self) -> bool {
        for (&r, ranks) in &self.rank_history {
            let Some(before) = self.dim_history.get(&r) else {
                continue;
            };
            let Some(after) = self.dim_history.get(&(r + 1)) else {
                continue;
            };
            for (&key, _) in &self.spots {
                let d_before = before.get(&key).copied().unwrap_or(0);
                let d_after = after.get(&key).copied().unwrap_or(0);
                let out = ranks.get(&key).copied().unwrap_or(0);
                let incoming: usize = self
                    .spots
                    .keys()
                    .filter(|&&src| src.shifted(r) == key)
                    .map(|src| ranks.get(src).copied().unwrap_or(0))
                    .sum();
                if d_before != d_after + out + incoming {
                    return false;
                }
            }
        }
        true
    }

    /// Fate of a class across the pages run so far. The class must be a
    /// basis monomial (every basis monomial is its own class lead on E_2).
    pub fn fate(&self, class: &Monomial) -> Result<FateRecord, EngineError> {
        let key = self.model.key_of(class);
        let spot = self
            .spots
            .get(&key)
            .ok_or_else(|| EngineError::ClassNotOnE2(class.to_string()))?;
        if !spot.index.contains_key(class) {
            return Err(EngineError::ClassNotOnE2(class.to_string()));
        }
        // a class killed at page 1 (May d_1) never reaches E_2
        if let Some(d) = self.deaths.get(class) {
            if d.page() <= 1 {
                return Err(EngineError::ClassNotOnE2(class.to_string()));
            }
        }
        let id = class.to_string();
        if let Some(death) = self.deaths.get(class) {
            return Ok(match death {
                Death::Supports { page, target } => FateRecord {
                    class: id,
                    status: FateStatus::SupportsDr,
                    page: Some(*page),
                    partner: target.terms().next().map(|m| m.to_string()),
                },
                Death::KilledBy { page, partner } => FateRecord {
                    class: id,
                    status: FateStatus::KilledByDr,
                    page: Some(*page),
                    partner: Some(partner.to_string()),
                },
            });
        }
        if self.range_flagged.contains(class) || self.is_range_limited(class, key) {
            return Ok(FateRecord {
                class: id,
                status: FateStatus::RangeLimited,
                page: None,
                partner: None,
            });
        }
        Ok(FateRecord {
            class: id,
            status: FateStatus::SurvivesInRange,
            page: None,
            partner: None,
        })
    }

    /// A surviving class is only certified within range: potential killers
    /// live at (x+1, y-r, w-1) for each rule page r; if such a spot falls
    /// outside the window the survival is range-limited.
    fn is_range_limited(&self, _class: &Monomial, key: Key) -> bool {
        for r in self.model.rules.pages() {
            if r > key.y {
                continue;
            }
            let killer_key = Key {
                x: key.x + 1,
                y: key.y - r,
                w: key.w - 1,
            };
            if killer_key.w < 0 {
                continue;
            }
            if !self.range.contains(killer_key) {
                return true;
            }
        }
        false
    }

    pub fn page_arrows(&self, r: i64) -> &[Arrow] {
        self.arrows.get(&r).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Classes alive on the current page, with their lead monomials.
    pub fn surviving_leads(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for spot in self.spots.values() {
            for (p, _) in spot.reps() {
                out.push(spot.basis[p].clone());
            }
        }
        out.sort();
        out
    }
}

// ---------------------------------------------------------------------------
// Tridegree enumeration (modified May)
// ---------------------------------------------------------------------------

/// All degree-s monomials in the h_{i,j} with internal degree t and modified
/// May filtration m: sum (2^{i_k}-1) 2^{j_k} = t and sum (2^{j_k}-1) = m.
/// Factors are chosen with (i,j) in a fixed descending order, so each
/// multiset appears once.
pub fn enumerate_tridegree(s: i64, t: i64, m: i64) -> Vec<Monomial> {
    let mut gens: Vec<(u8, u8, i64, i64)> = Vec::new(); // (i, j, t, m)
    if t >= 0 {
        let mut j = 0u8;
        while (1i64 << j) <= t {
            let mut i = 1u8;
            while ((1i64 << i) - 1) * (1i64 << j) <= t {
                gens.push((i, j, ((1i64 << i) - 1) << j, (1i64 << j) - 1));
                i += 1;
            }
            j += 1;
        }
    }
    let mut out = Vec::new();
    fn rec(
        gens: &[(u8, u8, i64, i64)],
        pos: usize,
        s: i64,
        t: i64,
        m: i64,
        cur: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) {
        if s == 0 {
            if t == 0 && m == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if pos >= gens.len() || t < s {
            return;
        }
        let (i, j, gt, gm) = gens[pos];
        let max_e = (t / gt).min(s).min(if gm > 0 { m / gm } else { s });
        for e in (0..=max_e).rev() {
            if e > 0 {
                cur.mul_gen_inplace(crate::algebra::GenName::H(i, j), e);
            }
            rec(gens, pos + 1, s - e, t - e * gt, m - e * gm, cur, out);
            if e > 0 {
                cur.mul_gen_inplace(crate::algebra::GenName::H(i, j), -e);
            }
        }
    }
    let mut cur = Monomial::one();
    rec(&gens, 0, s, t, m, &mut cur, &mut out);
    out.sort();
    out
}

/// Independent brute force over an explicit (i, j) rectangle, for checking
/// `enumerate_tridegree` against larger bounds.
pub fn enumerate_tridegree_naive(s: i64, t: i64, m: i64, max_i: u8, max_j: u8) -> Vec<Monomial> {
    let mut singles: Vec<(u8, u8)> = Vec::new();
    for i in 1..=max_i {
        for j in 0..=max_j {
            singles.push((i, j));
        }
    }
    // multisets of size s over singles, in nondecreasing index order
    let mut out = Vec::new();
    fn rec(
        singles: &[(u8, u8)],
        from: usize,
        s: i64,
        cur: &mut Vec<(u8, u8)>,
        out: &mut Vec<Vec<(u8, u8)>>,
    ) {
        if s == 0 {
            out.push(cur.clone());
            return;
        }
        for idx in from..singles.len() {
            cur.push(singles[idx]);
            rec(singles, idx, s - 1, cur, out);
            cur.pop();
        }
    }
    let mut tuples = Vec::new();
    if s >= 0 {
        rec(&singles, 0, s, &mut Vec::new(), &mut tuples);
    }
    for tuple in tuples {
        let wt: i64 = tuple.iter().map(|&(i, j)| ((1i64 << i) - 1) << j).sum();
        let wm: i64 = tuple.iter().map(|&(_, j)| (1i64 << j) - 1).sum();
        if wt == t && wm == m {
            let mut mono = Monomial::one();
            for &(i, j) in &tuple {
                mono.mul_gen_inplace(crate::algebra::GenName::H(i, j), 1);
            }
            out.push(mono);
        }
    }
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Target exclusion (the case-analysis automation)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Exclusion {
    /// The candidate supports a nonzero earlier differential.
    SupportsEarlier { page: i64, target: String },
    /// The candidate is the target of an earlier differential.
    KilledEarlier { page: i64, partner: String },
    Unresolved,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CandidateReport {
    pub monomial: String,
    pub exclusion: Exclusion,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ExclusionReport {
    pub source: String,
    pub page: i64,
    pub tridegree: (i64, i64, i64),
    pub candidates: Vec<CandidateReport>,
    /// dim of E_page at the target tridegree after the earlier pages ran.
    pub e_page_dim: usize,
    /// true exactly when no candidate is unresolved.
    pub forced_zero: bool,
}

/// Enumerate the candidate targets of d_page(source) at tridegree
/// (s+1, t, m+page) in a May-type model and classify each by its fate on the
/// pages before `page`. Exclusion consults pages < page only.
pub fn rule_out_targets(
    model: &ModelSpec,
    source: &Monomial,
    page: i64,
) -> Result<ExclusionReport, EngineError> {
    let key = model.key_of(source);
    let t = key.x + key.w;
    let s = key.w;
    let m = key.y;
    let range = Range {
        min_stem: 0,
        max_stem: t,
        max_filt: t,
        max_weight: s + 2,
        exact_t: Some(t),
    };
    let mut stack = build_e_page(model, range)?;
    stack.run_to(page - 1)?;
    let target_key = key.shifted(page);
    let candidates: Vec<Monomial> = stack.basis_at(target_key).to_vec();
    let mut reports = Vec::new();
    let mut forced = true;
    for c in &candidates {
        let fate = stack.fate(c)?;
        let exclusion = match fate.status {
            FateStatus::SupportsDr => Exclusion::SupportsEarlier {
                page: fate.page.unwrap(),
                target: fate.partner.unwrap_or_default(),
            },
            FateStatus::KilledByDr => Exclusion::KilledEarlier {
                page: fate.page.unwrap(),
                partner: fate.partner.unwrap_or_default(),
            },
            _ => {
                forced = false;
                Exclusion::Unresolved
            }
        };
        reports.push(CandidateReport {
            monomial: c.to_string(),
            exclusion,
        });
    }
    Ok(ExclusionReport {
        source: source.to_string(),
        page,
        tridegree: (s + 1, t, m + page),
        candidates: reports,
        e_page_dim: stack.dim_at(target_key),
        forced_zero: forced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GenName::*;
    use crate::models;

    #[test]
    fn empty_range_errors() {
        let model = models::slice_bpr(10);
        let range = Range {
            min_stem: 5,
            max_stem: 1,
            max_filt: 5,
            max_weight: 5,
            exact_t: None,
        };
        assert!(matches!(
            build_e_page(&model, range),
            Err(EngineError::EmptyRange)
        ));
    }

    #[test]
    fn slice_e2_contains_v1_asigma() {
        let model = models::slice_bpr(3);
        let stack = build_e_page(&model, Range::stems(3, 5)).unwrap();
        let m = Monomial::from_pairs(&[(VBar(1), 1), (ASigma, 1)]);
        let key = model.key_of(&m);
        assert_eq!((key.x, key.y), (1, 1));
        assert!(stack.basis_at(key).contains(&m));
    }

    #[test]
    fn modified_may_basis_at_1_2() {
        let model = models::modified_may_sphere(8, 4);
        let stack = build_e_page(
            &model,
            Range {
                min_stem: 0,
                max_stem: 8,
                max_filt: 8,
                max_weight: 4,
                exact_t: Some(2),
            },
        )
        .unwrap();
        // (s, t) = (1, 2): only h_{1,1}
        let key = Key { x: 1, y: 1, w: 1 };
        assert_eq!(stack.basis_at(key), &[Monomial::gen(H(1, 1))]);
    }

    #[test]
    fn slice_page3_kills_u2s_tower() {
        let model = models::slice_bpr(8);
        let mut stack = build_e_page(&model, Range::stems(8, 10)).unwrap();
        stack.run_to(3).unwrap();
        // u_{2sigma} supports d_3 onto vbar_1 a^3
        let u = Monomial::gen(U2Sigma);
        let f = stack.fate(&u).unwrap();
        assert_eq!(f.status, FateStatus::SupportsDr);
        assert_eq!(f.page, Some(3));
        assert_eq!(f.partner.as_deref(), Some("as^3 v1"));
        // and vbar_1 a^3 is killed with partner u_{2sigma}
        let v = Monomial::from_pairs(&[(VBar(1), 1), (ASigma, 3)]);
        let f = stack.fate(&v).unwrap();
        assert_eq!(f.status, FateStatus::KilledByDr);
        assert_eq!(f.partner.as_deref(), Some("u2s"));
        // vbar_1 a survives
        let m = Monomial::from_pairs(&[(VBar(1), 1), (ASigma, 1)]);
        let f = stack.fate(&m).unwrap();
        assert_eq!(f.status, FateStatus::SurvivesInRange);
        assert!(stack.check_rank_bookkeeping());
    }

    #[test]
    fn zero_differential_page_is_identity() {
        let model = models::slice_bpr(6);
        let mut stack = build_e_page(&model, Range::stems(6, 8)).unwrap();
        let dims_before: Vec<usize> = stack.keys().map(|k| stack.dim_at(k)).collect();
        // page 2 has no rules
        stack.turn_page().unwrap(); // d_1
        stack.turn_page().unwrap(); // d_2
        let dims_after: Vec<usize> = stack.keys().map(|k| stack.dim_at(k)).collect();
        assert_eq!(dims_before, dims_after);
    }

    #[test]
    fn modified_may_h21_squared_dies_at_7() {
        let model = models::modified_may_sphere(12, 6);
        let mut stack = build_e_page(
            &model,
            Range {
                min_stem: 0,
                max_stem: 12,
                max_filt: 12,
                max_weight: 6,
                exact_t: Some(12),
            },
        )
        .unwrap();
        stack.run_to(7).unwrap();
        let h21sq = Monomial::gen_pow(H(2, 1), 2);
        let f = stack.fate(&h21sq).unwrap();
        assert_eq!(f.status, FateStatus::SupportsDr);
        assert_eq!(f.page, Some(7));
        // target h12^3 + h11^2 h13
        let arrows = stack.page_arrows(7);
        let a = arrows
            .iter()
            .find(|a| a.source == h21sq)
            .expect("h21^2 arrow");
        assert_eq!(a.targets.len(), 2);
    }

    #[test]
    fn modified_may_h21_supports_d3() {
        let model = models::modified_may_sphere(8, 4);
        let mut stack = build_e_page(
            &model,
            Range {
                min_stem: 0,
                max_stem: 8,
                max_filt: 8,
                max_weight: 4,
                exact_t: Some(6),
            },
        )
        .unwrap();
        stack.run_to(3).unwrap();
        let h21 = Monomial::gen(H(2, 1));
        let f = stack.fate(&h21).unwrap();
        assert_eq!(f.status, FateStatus::SupportsDr);
        assert_eq!(f.page, Some(3));
        assert_eq!(f.partner.as_deref(), Some("h11 h12"));
    }

    #[test]
    fn enumerate_tridegree_examples() {
        // (3, 12, 7): only h10 h20 h13
        let ms = enumerate_tridegree(3, 12, 7);
        assert_eq!(
            ms,
            vec![Monomial::from_pairs(&[(H(1, 0), 1), (H(2, 0), 1), (H(1, 3), 1)])]
        );
        // (5, 24, 19): the Case 4 list
        let ms = enumerate_tridegree(5, 24, 19);
        let expect: Vec<Monomial> = vec![
            Monomial::from_pairs(&[(H(1, 0), 2), (H(1, 1), 1), (H(1, 2), 1), (H(1, 4), 1)]),
            Monomial::from_pairs(&[(H(1, 1), 4), (H(1, 4), 1)]),
            Monomial::from_pairs(&[(H(1, 1), 2), (H(1, 2), 1), (H(1, 3), 2)]),
            Monomial::from_pairs(&[(H(1, 2), 4), (H(1, 3), 1)]),
        ]
        .into_iter()
        .collect();
        let mut expect = expect;
        expect.sort();
        assert_eq!(ms, expect);
        // (0, 0, 0): the empty monomial
        assert_eq!(enumerate_tridegree(0, 0, 0), vec![Monomial::one()]);
    }

    #[test]
    fn enumerate_matches_naive() {
        for s in 0..=5 {
            for t in 0..=40 {
                for m in 0..=(t.max(1)) {
                    let a = enumerate_tridegree(s, t, m);
                    let b = enumerate_tridegree_naive(s, t, m, 8, 7);
                    assert_eq!(a, b, "at ({},{},{})", s, t, m);
                }
            }
        }
    }

    #[test]
    fn rule_out_h21_fourth_r9() {
        let model = models::modified_may_sphere(24, 8);
        let h21_4 = Monomial::gen_pow(H(2, 1), 4);
        let rep = rule_out_targets(&model, &h21_4, 9).unwrap();
        assert_eq!(rep.tridegree, (5, 24, 13));
        assert_eq!(rep.candidates.len(), 1);
        assert_eq!(rep.candidates[0].monomial, "h10 h12^2 h13 h30");
        assert!(matches!(
            rep.candidates[0].exclusion,
            Exclusion::SupportsEarlier { page: 1, .. }
        ));
        assert!(rep.forced_zero);
    }
}
