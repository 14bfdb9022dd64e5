//! Exact character sums over multisets.
//!
//! A character value `chi(g)` is `zeta_p^j * zeta_q^k`, so a sum over a
//! multiset is recorded exactly by the `p x q` table of how often each
//! exponent pair occurs. Because `zeta_p^j * zeta_q^k` runs over the `pq`-th
//! roots of unity bijectively, an integer table sums to zero iff it has the
//! form `c[j][k] = y[j] + x[k]`: full rows are `Z_q`-cosets, full columns are
//! `Z_p`-cosets, and together they span the relation lattice of rank
//! `p + q - 1`.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{is_prime, Element, Group, GroupSpec, Multiset, SubsetMask};

/// Multiplicities of the roots `zeta_p^j * zeta_q^k`, row `j`, column `k`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct CoefficientMatrix {
    rows: usize,
    cols: usize,
    c: Vec<i64>,
}

impl CoefficientMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CoefficientMatrix {
            rows,
            cols,
            c: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from rows; every row must have the same nonzero length.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if r == 0 || k == 0 {
            return Err(Error::BadMatrix {
                rows: r,
                cols: k,
                reason: "empty matrix",
            });
        }
        if rows.iter().any(|row| row.len() != k) {
            return Err(Error::BadMatrix {
                rows: r,
                cols: k,
                reason: "ragged rows",
            });
        }
        Ok(CoefficientMatrix {
            rows: r,
            cols: k,
            c: rows.into_iter().flatten().collect(),
        })
    }

    /// Like [`from_rows`](Self::from_rows), additionally requiring distinct
    /// prime dimensions so the table describes a sum of `pq`-th roots.
    pub fn from_rows_checked(rows: Vec<Vec<i64>>) -> Result<Self> {
        let m = Self::from_rows(rows)?;
        if !is_prime(m.rows as u64) || !is_prime(m.cols as u64) || m.rows == m.cols {
            return Err(Error::BadMatrix {
                rows: m.rows,
                cols: m.cols,
                reason: "dimensions must be distinct primes",
            });
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> i64 {
        self.c[j * self.cols + k]
    }

    pub fn set(&mut self, j: usize, k: usize, value: i64) {
        self.c[j * self.cols + k] = value;
    }

    fn bump(&mut self, j: usize, k: usize, by: u64) {
        let cell = &mut self.c[j * self.cols + k];
        *cell = i64::try_from(by)
            .ok()
            .and_then(|by| cell.checked_add(by))
            .expect("coefficient overflow");
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.c.chunks(self.cols).map(<[i64]>::to_vec).collect()
    }

    pub fn total(&self) -> i64 {
        self.c
            .iter()
            .try_fold(0i64, |a, &x| a.checked_add(x))
            .expect("coefficient overflow")
    }

    pub fn is_nonnegative(&self) -> bool {
        self.c.iter().all(|&x| x >= 0)
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.c.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<i64> {
        (0..self.cols)
            .map(|k| (0..self.rows).map(|j| self.get(j, k)).sum())
            .collect()
    }

    /// First entry violating `c[j][k] - c[j][0] - c[0][k] + c[0][0] = 0`.
    pub fn first_defect(&self) -> Option<(usize, usize, i64)> {
        let c00 = self.get(0, 0);
        for j in 1..self.rows {
            let cj0 = self.get(j, 0);
            for k in 1..self.cols {
                let d = self
                    .get(j, k)
                    .checked_sub(cj0)
                    .and_then(|x| x.checked_sub(self.get(0, k)))
                    .and_then(|x| x.checked_add(c00))
                    .expect("coefficient overflow");
                if d != 0 {
                    return Some((j, k, d));
                }
            }
        }
        None
    }

    /// Whether `sum c[j][k] zeta_p^j zeta_q^k = 0`, read as a sum of
    /// `pq`-th roots of unity.
    pub fn vanishes(&self) -> bool {
        self.first_defect().is_none()
    }

    /// Swaps columns so column `k * b` of the result is column `k` of `self`.
    pub fn relabel_columns(&self, b: usize) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for j in 0..self.rows {
            for k in 0..self.cols {
                out.set(j, k * b % self.cols, self.get(j, k));
            }
        }
        out
    }
}

impl TryFrom<Vec<Vec<i64>>> for CoefficientMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<CoefficientMatrix> for Vec<Vec<i64>> {
    fn from(m: CoefficientMatrix) -> Self {
        m.to_rows()
    }
}

impl fmt::Debug for CoefficientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.c.chunks(self.cols)).finish()
    }
}

impl fmt::Display for CoefficientMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.c.chunks(self.cols) {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A vanishing table written as `Z_p`-cosets (`x`, one per column) plus
/// `Z_q`-cosets (`y`, one per row).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDecomposition {
    pub x: Vec<u64>,
    pub y: Vec<u64>,
}

impl CosetDecomposition {
    pub fn reconstruct(&self) -> CoefficientMatrix {
        let mut m = CoefficientMatrix::zeros(self.y.len(), self.x.len());
        for (j, &yj) in self.y.iter().enumerate() {
            for (k, &xk) in self.x.iter().enumerate() {
                m.set(j, k, (yj + xk) as i64);
            }
        }
        m
    }

    /// Number of `Z_p`-cosets, each of size `p`.
    pub fn p_cosets(&self) -> u64 {
        self.x.iter().sum()
    }

    /// Number of `Z_q`-cosets, each of size `q`.
    pub fn q_cosets(&self) -> u64 {
        self.y.iter().sum()
    }
}

/// The exponent table of `chi(M)`.
pub fn char_coeff_matrix(spec: &GroupSpec, chi: Element, m: &Multiset) -> CoefficientMatrix {
    let mut out = CoefficientMatrix::zeros(spec.p(), spec.q());
    for (i, count) in m.entries() {
        let (j, k) = spec.char_exponents(chi, spec.element(i));
        out.bump(j as usize, k as usize, count);
    }
    out
}

/// Vanishing test for a table produced by a character of the given order.
pub fn vanishes_for_order(c: &CoefficientMatrix, order: usize) -> bool {
    let (p, q) = (c.rows(), c.cols());
    if order == 1 {
        c.total() == 0
    } else if order == p {
        c.row_sums().windows(2).all(|w| w[0] == w[1])
    } else if order == q {
        c.col_sums().windows(2).all(|w| w[0] == w[1])
    } else {
        debug_assert_eq!(order, p * q);
        c.vanishes()
    }
}

/// Whether `chi(M) = 0`, decided exactly.
pub fn vanishes(spec: &GroupSpec, chi: Element, m: &Multiset) -> bool {
    vanishes_for_order(&char_coeff_matrix(spec, chi, m), spec.order_of(chi))
}

/// Whether each class `{<u, a> = k}` carries exactly `|M| / p` of the mass.
pub fn equidistributed(spec: &GroupSpec, m: &Multiset, a: [u32; 2]) -> bool {
    debug_assert!(a != [0, 0]);
    let p = spec.p() as u64;
    if m.total() % p != 0 {
        return false;
    }
    let mut classes = vec![0u64; spec.p()];
    for (i, count) in m.entries() {
        classes[spec.inner_p(spec.element(i).u(), a) as usize] += count;
    }
    classes.iter().all(|&c| c == m.total() / p)
}

/// Pushes `M` onto the `Z_pq` grid: row `<x, a>`, column the `q`-coordinate.
///
/// Rows are fibred by the inner product with `a` rather than by multiples of
/// `a`, so isotropic directions are handled like any other. Column `v` of the
/// result is column `v * b` of `char_coeff_matrix((a, b), M)`.
pub fn project(spec: &GroupSpec, m: &Multiset, a: [u32; 2], b: u32) -> Result<CoefficientMatrix> {
    if a == [0, 0] || b % spec.q() as u32 == 0 {
        return Err(Error::ZeroDirection {
            a1: a[0],
            a2: a[1],
            b,
        });
    }
    let mut out = CoefficientMatrix::zeros(spec.p(), spec.q());
    for (i, count) in m.entries() {
        let g = spec.element(i);
        out.bump(spec.inner_p(g.u(), a) as usize, g.v as usize, count);
    }
    Ok(out)
}

/// Splits a nonnegative vanishing table into cosets, choosing `min y = 0`.
pub fn lam_leung(c: &CoefficientMatrix) -> Result<CosetDecomposition> {
    if let Some((row, col, defect)) = c.first_defect() {
        return Err(Error::NotVanishing { row, col, defect });
    }
    if !c.is_nonnegative() {
        return Err(Error::BadMatrix {
            rows: c.rows(),
            cols: c.cols(),
            reason: "entries must be nonnegative",
        });
    }
    // c[j][k] = (c[j][0] - m) + c[jmin][k] where m = c[jmin][0] is the column-0 minimum
    let jmin = (0..c.rows())
        .min_by_key(|&j| c.get(j, 0))
        .expect("nonempty matrix");
    let floor = c.get(jmin, 0);
    let y: Vec<u64> = (0..c.rows())
        .map(|j| (c.get(j, 0) - floor) as u64)
        .collect();
    let x: Vec<u64> = (0..c.cols()).map(|k| c.get(jmin, k) as u64).collect();
    let out = CosetDecomposition { x, y };
    assert_eq!(&out.reconstruct(), c, "coset decomposition failed");
    Ok(out)
}

/// Nonzero characters whose sum over `S` vanishes.
pub fn zero_set(group: &Group, s: &SubsetMask) -> SubsetMask {
    let (p, q, n) = (group.p(), group.q(), group.order());
    let mut out = SubsetMask::empty(n);
    let mut buf = vec![0i32; p * q];
    for chi in 1..n {
        buf.iter_mut().for_each(|x| *x = 0);
        for g in s.iter() {
            buf[group.pairing_idx(chi, g)] += 1;
        }
        let e = group.element(chi);
        let hit = match (e.u1 != 0 || e.u2 != 0, e.v != 0) {
            // only column 0 is populated
            (true, false) => (1..p).all(|j| buf[j * q] == buf[0]),
            // only row 0 is populated
            (false, true) => (1..q).all(|k| buf[k] == buf[0]),
            _ => (1..p).all(|j| (1..q).all(|k| buf[j * q + k] - buf[j * q] - buf[k] + buf[0] == 0)),
        };
        if hit {
            out.insert(chi);
        }
    }
    out
}

/// `|chi(M)|` in double precision. Test oracle only.
pub fn numeric_char_sum(spec: &GroupSpec, chi: Element, m: &Multiset) -> f64 {
    let (p, q) = (spec.p() as f64, spec.q() as f64);
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for (i, count) in m.entries() {
        let (j, k) = spec.char_exponents(chi, spec.element(i));
        let theta = TAU * (j as f64 / p + k as f64 / q);
        re += count as f64 * theta.cos();
        im += count as f64 * theta.sin();
    }
    re.hypot(im)
}
