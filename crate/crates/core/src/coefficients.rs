//! RO(C2)-graded coefficient rings of the equivariant Eilenberg-Mac Lane
//! spectra HF2 and HZ.
//!
//! Closed-form lookups cover the regions the source theorems describe
//! explicitly; an independent oracle computes any bidegree as the (co)homology
//! of the explicit equivariant cellular chain complex of S^{q*sigma}, with
//! integer Smith normal form for torsion. The two are cross-checked in tests.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CoeffRing {
    Z,
    F2,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GroupKind {
    Zero,
    Z,
    Z2,
    F2Vector,
}

/// An abelian group in a single bidegree together with labeled generators.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GroupDesc {
    pub kind: GroupKind,
    pub basis: Vec<String>,
}

impl GroupDesc {
    pub fn zero() -> Self {
        GroupDesc {
            kind: GroupKind::Zero,
            basis: vec![],
        }
    }

    pub fn z(label: String) -> Self {
        GroupDesc {
            kind: GroupKind::Z,
            basis: vec![label],
        }
    }

    pub fn z2(label: String) -> Self {
        GroupDesc {
            kind: GroupKind::Z2,
            basis: vec![label],
        }
    }

    pub fn f2(labels: Vec<String>) -> Self {
        if labels.is_empty() {
            GroupDesc::zero()
        } else {
            GroupDesc {
                kind: GroupKind::F2Vector,
                basis: labels,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kind == GroupKind::Zero
    }

    /// (free rank, torsion orders) for comparison against the oracle.
    pub fn shape(&self) -> (usize, Vec<u64>) {
        match self.kind {
            GroupKind::Zero => (0, vec![]),
            GroupKind::Z => (1, vec![]),
            GroupKind::Z2 => (0, vec![2]),
            GroupKind::F2Vector => (0, vec![2; self.basis.len()]),
        }
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("|q| = {0} exceeds the configured bound {1}")]
    BoundExceeded(i64, i64),
}

/// Coefficient group of the genuine HF2 in degree p + q*sigma, closed form.
///
/// Positive cone: F2{u_sigma^a a_sigma^b} for a = p >= 0, b = -q-p >= 0.
/// Negative cone: F2{theta/(u_sigma^i a_sigma^j)} for i = -2-p >= 0,
/// j = p+q >= 0. Zero elsewhere (in particular the whole p = -1 column).
pub fn hf2_coefficient(p: i64, q: i64) -> GroupDesc {
    if p >= 0 && p + q <= 0 {
        GroupDesc::f2(vec![us_as_label(p, -q - p)])
    } else if p <= -2 && p + q >= 0 {
        GroupDesc::f2(vec![theta_us_label(-2 - p, p + q)])
    } else {
        GroupDesc::zero()
    }
}

/// Coefficient group of HZ in degree p + q*sigma.
///
/// The cone p >= 0 is the polynomial ring Z[u_{2sigma}, a_sigma]/(2 a_sigma):
/// Z on a_sigma-free monomials, Z/2 otherwise. The cone p < 0 is delegated to
/// the Bredon oracle, with the named classes alpha/u_{2sigma}^k and the
/// theta-divisible family attached as labels.
pub fn hz_coefficient(p: i64, q: i64) -> GroupDesc {
    if p >= 0 {
        // u_{2sigma}^c a_sigma^b with 2c = p, b = -q - p
        if p % 2 != 0 {
            return GroupDesc::zero();
        }
        let c = p / 2;
        let b = -q - p;
        if b < 0 {
            return GroupDesc::zero();
        }
        let label = u2s_as_label(c, b);
        if b == 0 {
            GroupDesc::z(label)
        } else {
            GroupDesc::z2(label)
        }
    } else {
        let g = bredon_oracle(p, q, CoeffRing::Z, DEFAULT_Q_BOUND)
            .expect("negative-cone lookup within oracle bound");
        match g.kind {
            GroupKind::Zero => GroupDesc::zero(),
            kind => {
                let label = hz_negative_label(p, q)
                    .unwrap_or_else(|| format!("c({},{})", p, q));
                GroupDesc {
                    kind,
                    basis: vec![label],
                }
            }
        }
    }
}

fn us_as_label(a: i64, b: i64) -> String {
    monomial_label(&[("us", a), ("as", b)])
}

fn u2s_as_label(c: i64, b: i64) -> String {
    monomial_label(&[("u2s", c), ("as", b)])
}

fn monomial_label(factors: &[(&str, i64)]) -> String {
    let parts: Vec<String> = factors
        .iter()
        .filter(|&&(_, e)| e != 0)
        .map(|&(n, e)| if e == 1 { n.to_string() } else { format!("{}^{}", n, e) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

fn theta_us_label(i: i64, j: i64) -> String {
    if i == 0 && j == 0 {
        "th".to_string()
    } else {
        format!("th/({})", monomial_label(&[("us", i), ("as", j)]))
    }
}

/// Paper name for a nonzero HZ negative-cone spot, when there is one:
/// alpha/u_{2sigma}^k at (-2-2k, 2+2k), theta/(u_{2sigma}^i a_sigma^j) at
/// (-3-2i, 3+2i+j).
fn hz_negative_label(p: i64, q: i64) -> Option<String> {
    if p <= -2 && p % 2 == 0 && q == -p {
        let k = (-p - 2) / 2;
        Some(if k == 0 {
            "al".to_string()
        } else {
            format!("al/u2s^{}", k)
        })
    } else if p <= -3 && p % 2 != 0 && p + q >= 0 {
        let i = (-p - 3) / 2;
        let j = p + q;
        Some(if i == 0 && j == 0 {
            "th".to_string()
        } else {
            format!("th/({})", monomial_label(&[("u2s", i), ("as", j)]))
        })
    } else {
        None
    }
}

pub const DEFAULT_Q_BOUND: i64 = 64;

/// One cell orbit of an equivariant CW complex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CellOrbit {
    /// A single cell fixed by the involution.
    Fixed,
    /// A pair of cells swapped by the involution.
    Free,
}

/// The reduced equivariant cellular chain complex of S^{n*sigma}, n >= 0:
/// one fixed 0-cell over the basepoint and one free orbit in each dimension
/// 1..=n. Boundary maps are stored as integer matrices over the full cell
/// basis (both members of each free orbit), with the involution acting by
/// swapping orbit members.
pub struct EquivariantCellComplex {
    pub n: usize,
    /// orbits[k] describes dimension k.
    pub orbits: Vec<CellOrbit>,
}

impl EquivariantCellComplex {
    pub fn sphere(n: usize) -> Self {
        let mut orbits = vec![CellOrbit::Fixed];
        orbits.extend(std::iter::repeat(CellOrbit::Free).take(n));
        EquivariantCellComplex { n, orbits }
    }

    fn cells_in_dim(&self, k: usize) -> usize {
        match self.orbits.get(k) {
            Some(CellOrbit::Fixed) => 1,
            Some(CellOrbit::Free) => 2,
            None => 0,
        }
    }

    /// Integer boundary matrix from dimension k to k-1 over the full cell
    /// basis; rows index target cells, columns index source cells.
    pub fn boundary(&self, k: usize) -> Vec<Vec<i64>> {
        if k == 0 || k > self.n {
            return vec![];
        }
        if k == 1 {
            // both 1-cells run from the basepoint to the surviving fixed cell
            return vec![vec![1, 1]];
        }
        // d(e_k) = e_{k-1} - (-1)^k g e_{k-1}, and g-equivariantly for g e_k
        let s = if k % 2 == 0 { 1 } else { -1 };
        vec![vec![1, -s], vec![-s, 1]]
    }

    /// The involution on cells in dimension k, as a permutation.
    fn swap(&self, k: usize) -> Vec<usize> {
        match self.orbits.get(k) {
            Some(CellOrbit::Fixed) => vec![0],
            Some(CellOrbit::Free) => vec![1, 0],
            None => vec![],
        }
    }

    /// Check the d*d = 0 invariant over the full basis.
    pub fn verify(&self) -> bool {
        for k in 2..=self.n {
            let d1 = self.boundary(k);
            let d2 = self.boundary(k - 1);
            let prod = mat_mul(&d2, &d1);
            if prod.iter().flatten().any(|&x| x != 0) {
                return false;
            }
            // equivariance: swap . d = d . swap
            let sk = self.swap(k);
            let sk1 = self.swap(k - 1);
            for (j, &sj) in sk.iter().enumerate() {
                for (i, &si) in sk1.iter().enumerate() {
                    if d1[i][j] != d1[si][sj] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The invariant subcomplex: one basis vector per orbit (the fixed cell,
    /// or the orbit sum e + g e). Used for the homology side. Entry k-1 is
    /// the boundary C_k -> C_{k-1}.
    pub fn invariant_complex(&self) -> Vec<Vec<Vec<i64>>> {
        (1..=self.n).map(|k| self.induced(k)).collect()
    }

    /// The equivariant-Hom complex into the trivial module: one functional
    /// per orbit taking value 1 on every cell of the orbit. Used for the
    /// cohomology side. Entry [k-1] is the codifferential C^{k-1} -> C^k.
    pub fn hom_complex(&self) -> Vec<Vec<Vec<i64>>> {
        (1..=self.n)
            .map(|k| {
                // (delta phi)(e_k) = phi(d e_k): evaluate at an orbit rep.
                let d = self.boundary(k);
                let src_orbits = orbit_reps(self.cells_in_dim(k - 1), self.orbits[k - 1]);
                let tgt_reps = orbit_reps(self.cells_in_dim(k), self.orbits[k]);
                let mut out = vec![vec![0i64; src_orbits.len()]; tgt_reps.len()];
                for (col, cells) in src_orbits.iter().enumerate() {
                    for (row, rep) in tgt_reps.iter().enumerate() {
                        // phi_col(d e_rep) = sum over cells of the orbit of
                        // the coefficient of that cell in d e_rep
                        let rep_cell = rep[0];
                        out[row][col] = cells.iter().map(|&c| d[c][rep_cell]).sum();
                    }
                }
                out
            })
            .collect()
    }

    fn induced(&self, k: usize) -> Vec<Vec<i64>> {
        let d = self.boundary(k);
        let src = orbit_reps(self.cells_in_dim(k), self.orbits[k]);
        let tgt = orbit_reps(self.cells_in_dim(k - 1), self.orbits[k - 1]);
        // image of the orbit-sum basis vector, read off at the target orbit
        // representative (the image is invariant, and the orbit sum has
        // coefficient 1 on each member)
        let mut out = vec![vec![0i64; src.len()]; tgt.len()];
        for (col, cells) in src.iter().enumerate() {
            // boundary of the orbit sum
            let mut img = vec![0i64; d.len()];
            for &c in cells {
                for (r, row) in img.iter_mut().enumerate() {
                    *row += d[r][c];
                }
            }
            for (row, reps) in tgt.iter().enumerate() {
                out[row][col] = img[reps[0]];
            }
        }
        out
    }
}

fn orbit_reps(ncells: usize, orbit: CellOrbit) -> Vec<Vec<usize>> {
    match (ncells, orbit) {
        (0, _) => vec![],
        (1, CellOrbit::Fixed) => vec![vec![0]],
        (2, CellOrbit::Free) => vec![vec![0, 1]],
        _ => unreachable!(),
    }
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; cols]; rows];
    for i in 0..rows {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

/// Diagonal of the Smith normal form (nonnegative, divisibility chain).
pub fn smith_normal_form(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut top = 0usize;
    let mut left = 0usize;
    while top < rows && left < cols {
        // find a nonzero pivot of minimal absolute value
        let mut pivot: Option<(usize, usize)> = None;
        for i in top..rows {
            for j in left..cols {
                if m[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(left, pj);
        }
        // clear row and column by division steps
        let mut again = true;
        while again {
            again = false;
            for i in (top + 1)..rows {
                if m[i][left] != 0 {
                    let f = m[i][left] / m[top][left];
                    for j in left..cols {
                        m[i][j] -= f * m[top][j];
                    }
                    if m[i][left] != 0 {
                        // remainder smaller than pivot; swap up and retry
                        m.swap(top, i);
                        again = true;
                    }
                }
            }
            for j in (left + 1)..cols {
                if m[top][j] != 0 {
                    let f = m[top][j] / m[top][left];
                    for row in m.iter_mut().take(rows).skip(top) {
                        row[j] -= f * row[left];
                    }
                    if m[top][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(left, j);
                        }
                        again = true;
                    }
                }
            }
        }
        // divisibility fix: pivot must divide the remaining block
        let p = m[top][left].abs();
        let mut fixed = true;
        'outer: for i in (top + 1)..rows {
            for j in (left + 1)..cols {
                if m[i][j] % p != 0 {
                    // add offending row to pivot row and restart this pivot
                    for col in left..cols {
                        m[top][col] += m[i][col];
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        diag.push(p);
        top += 1;
        left += 1;
    }
    diag
}

fn f2_rank(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut mat: Vec<Vec<u8>> = m
        .iter()
        .map(|r| r.iter().map(|&x| (x.rem_euclid(2)) as u8).collect())
        .collect();
    let mut rank = 0;
    for j in 0..cols {
        if let Some(i) = (rank..rows).find(|&i| mat[i][j] == 1) {
            mat.swap(rank, i);
            for i2 in 0..rows {
                if i2 != rank && mat[i2][j] == 1 {
                    for j2 in 0..cols {
                        mat[i2][j2] ^= mat[rank][j2];
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Homology of ker(outgoing)/im(incoming) at a spot of dimension `dim`:
/// free rank = dim - rank(incoming) - rank(outgoing), torsion = nontrivial
/// invariant factors of the incoming map. Valid for chain and cochain
/// complexes of finitely generated free abelian groups alike.
fn homology_at(
    dim: usize,
    incoming: Option<&Vec<Vec<i64>>>,
    outgoing: Option<&Vec<Vec<i64>>>,
    coeff: CoeffRing,
) -> (usize, Vec<u64>) {
    match coeff {
        CoeffRing::F2 => {
            let rin = incoming.map_or(0, |m| f2_rank(m));
            let rout = outgoing.map_or(0, |m| f2_rank(m));
            (dim - rin - rout, vec![])
        }
        CoeffRing::Z => {
            let snf_in = incoming.map_or(vec![], |m| smith_normal_form(m.clone()));
            let rout = outgoing.map_or(0, |m| smith_normal_form(m.clone()).len());
            let free = dim - snf_in.len() - rout;
            let torsion = snf_in
                .iter()
                .filter(|&&d| d > 1)
                .map(|&d| d as u64)
                .collect();
            (free, torsion)
        }
    }
}

/// pi_{p + q sigma} of the Eilenberg-Mac Lane spectrum on the constant Mackey
/// functor Z or F2, computed from the cellular complex of S^{|q| sigma}:
/// the invariant subcomplex for q <= 0 (homology of S^{-q sigma}) and the
/// equivariant-Hom complex for q > 0 (cohomology of S^{q sigma}).
pub fn bredon_oracle(p: i64, q: i64, coeff: CoeffRing, bound: i64) -> Result<GroupDesc, CoeffError> {
    if q.abs() > bound {
        return Err(CoeffError::BoundExceeded(q.abs(), bound));
    }
    let n = q.unsigned_abs() as usize;
    let cx = EquivariantCellComplex::sphere(n);
    debug_assert!(cx.verify());
    let (degree, incoming, outgoing) = if q <= 0 {
        // homology H_p(S^{n sigma}); maps[j] = boundary C_{j+1} -> C_j
        let maps = cx.invariant_complex();
        let k = p;
        if k < 0 || k as usize > n {
            return Ok(GroupDesc::zero());
        }
        let k = k as usize;
        let incoming = if k < n { Some(maps[k].clone()) } else { None };
        let outgoing = if k >= 1 { Some(maps[k - 1].clone()) } else { None };
        (k, incoming, outgoing)
    } else {
        // cohomology H^{-p}(S^{n sigma}); maps[j] = codifferential C^j -> C^{j+1}
        let maps = cx.hom_complex();
        let k = -p;
        if k < 0 || k as usize > n {
            return Ok(GroupDesc::zero());
        }
        let k = k as usize;
        let incoming = if k >= 1 { Some(maps[k - 1].clone()) } else { None };
        let outgoing = if k < n { Some(maps[k].clone()) } else { None };
        (k, incoming, outgoing)
    };
    let _ = degree;
    let label = format!("c({},{})", p, q);
    let (free, torsion) = homology_at(1, incoming.as_ref(), outgoing.as_ref(), coeff);
    Ok(match (coeff, free, torsion.as_slice()) {
        (CoeffRing::F2, d, _) => GroupDesc::f2(vec![label; d]),
        (_, 0, []) => GroupDesc::zero(),
        (_, 1, []) => GroupDesc::z(label),
        (_, 0, [2]) => GroupDesc::z2(label),
        _ => panic!(
            "unexpected group shape at ({},{}): free {} torsion {:?}",
            p, q, free, torsion
        ),
    })
}

/// An element theta/(u_sigma^i a_sigma^j) of the HF2 negative cone.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NegConeElt {
    pub i: i64,
    pub j: i64,
}

/// a_sigma * theta/(u^i a^j) = theta/(u^i a^{j-1}) for j >= 1, else 0.
pub fn a_sigma_action(x: NegConeElt) -> Option<NegConeElt> {
    if x.j >= 1 {
        Some(NegConeElt { i: x.i, j: x.j - 1 })
    } else {
        None
    }
}

/// u_sigma * theta/(u^i a^j) = theta/(u^{i-1} a^j) for i >= 1, else 0.
pub fn u_sigma_action(x: NegConeElt) -> Option<NegConeElt> {
    if x.i >= 1 {
        Some(NegConeElt { i: x.i - 1, j: x.j })
    } else {
        None
    }
}

/// The product of any two negative-cone elements vanishes.
pub fn neg_cone_product(_x: NegConeElt, _y: NegConeElt) -> Option<NegConeElt> {
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_small() {
        let m = vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ];
        assert_eq!(smith_normal_form(m), vec![1, 3, 21]);
        assert_eq!(smith_normal_form(vec![vec![2]]), vec![2]);
        assert_eq!(smith_normal_form(vec![vec![0]]), Vec::<i64>::new());
    }

    #[test]
    fn complexes_verify() {
        for n in 0..=8 {
            assert!(EquivariantCellComplex::sphere(n).verify());
        }
    }

    #[test]
    fn hf2_examples() {
        assert_eq!(hf2_coefficient(0, 0), GroupDesc::f2(vec!["1".into()]));
        assert_eq!(hf2_coefficient(-2, 2), GroupDesc::f2(vec!["th".into()]));
        assert_eq!(
            hf2_coefficient(2, -3),
            GroupDesc::f2(vec!["us^2 as".into()])
        );
        assert!(hf2_coefficient(-1, 5).is_zero());
        assert!(hf2_coefficient(1, 0).is_zero());
    }

    #[test]
    fn hz_examples() {
        assert_eq!(hz_coefficient(0, 0).kind, GroupKind::Z);
        let g = hz_coefficient(0, -3);
        assert_eq!(g.kind, GroupKind::Z2);
        assert_eq!(g.basis, vec!["as^3".to_string()]);
        // alpha spot, group value from the oracle
        let g = hz_coefficient(-2, 2);
        assert_eq!(g.kind, GroupKind::Z);
        assert_eq!(g.basis, vec!["al".to_string()]);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            bredon_oracle(2, -2, CoeffRing::Z, 32).unwrap().kind,
            GroupKind::Z
        );
        assert_eq!(
            bredon_oracle(0, -1, CoeffRing::Z, 32).unwrap().kind,
            GroupKind::Z2
        );
        // the theta spot of HZ
        assert_eq!(
            bredon_oracle(-3, 3, CoeffRing::Z, 32).unwrap().kind,
            GroupKind::Z2
        );
        assert!(bredon_oracle(0, 100, CoeffRing::Z, 32).is_err());
    }

    #[test]
    fn closed_forms_agree_with_oracle() {
        for p in -6..=6 {
            for q in -6..=6 {
                let f2 = hf2_coefficient(p, q).shape();
                let f2_oracle = bredon_oracle(p, q, CoeffRing::F2, 32).unwrap().shape();
                assert_eq!(f2, f2_oracle, "HF2 at ({},{})", p, q);
                let z = hz_coefficient(p, q).shape();
                let z_oracle = bredon_oracle(p, q, CoeffRing::Z, 32).unwrap().shape();
                assert_eq!(z, z_oracle, "HZ at ({},{})", p, q);
            }
        }
    }

    #[test]
    fn hz_positive_cone_shape() {
        for p in 0..=6 {
            for q in -8..=0 {
                let g = hz_coefficient(p, q);
                let is_z = g.kind == GroupKind::Z;
                let expect_z = p % 2 == 0 && q == -p;
                assert_eq!(is_z, expect_z, "({},{})", p, q);
            }
        }
    }

    #[test]
    fn negative_cone_multiplication() {
        let th = NegConeElt { i: 0, j: 0 };
        assert_eq!(a_sigma_action(th), None);
        let x = NegConeElt { i: 1, j: 2 };
        assert_eq!(a_sigma_action(x), Some(NegConeElt { i: 1, j: 1 }));
        assert_eq!(u_sigma_action(x), Some(NegConeElt { i: 0, j: 2 }));
        assert_eq!(neg_cone_product(th, x), None);
    }
}
