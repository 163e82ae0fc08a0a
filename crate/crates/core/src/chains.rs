//! Free resolutions of `ℤ` over `ℤ[G]` and the complexes derived from them.
//!
//! Modules are left modules and chains are row vectors: the boundary
//! `d_n : C_n → C_{n−1}` is stored as a `rank C_n × rank C_{n−1}` matrix `D`
//! with `d(x) = x·D`, so `d_{n−1}∘d_n = 0` reads `D_n·D_{n−1} = 0`.
//!
//! Abelian groups use the tensor product of the periodic resolutions of their
//! cyclic factors (a `ℤ` factor contributes `ℤG ← ℤG` with boundary `1 − t`).
//! Basis elements are indexed by multidegrees `(p₁, …, p_r)`, ordered
//! lexicographically descending, and the boundary is
//! `Σ_k (−1)^{p_{k+1}+…+p_r} d_k` where `d_k` acts on the `k`-th slot.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groupring::{RingElement, RingError, RingMatrix};
use crate::groups::{Factor, GroupHom, GroupSpec};
use crate::homology::{HomologyError, IntegerComplex};
use crate::matrix::{ColumnEchelon, IntMatrix};
use crate::serial::TokenMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("resolution needs top degree at least {0}")]
    TopTooSmall(usize),
    #[error("d_{} ∘ d_{0} is not zero", .0 - 1)]
    NotAComplex(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

pub type Multidegree = Vec<u32>;

#[derive(Debug, Clone)]
pub struct Resolution {
    group: Arc<GroupSpec>,
    ranks: Vec<usize>,
    /// `boundaries[n]` is `D_n`; `boundaries[0]` is the empty `c₀ × 0` map.
    boundaries: Vec<RingMatrix>,
    labels: Vec<Vec<Multidegree>>,
}

/// All multidegrees of total degree `n` for the given factors, in basis order.
pub fn multidegrees(factors: &[Factor], n: u32) -> Vec<Multidegree> {
    fn rec(factors: &[Factor], n: u32, prefix: &mut Vec<u32>, out: &mut Vec<Multidegree>) {
        match factors.split_first() {
            None => {
                if n == 0 {
                    out.push(prefix.clone());
                }
            }
            Some((f, rest)) => {
                let cap = match f {
                    Factor::Infinite => n.min(1),
                    Factor::Cyclic(_) => n,
                };
                for p in (0..=cap).rev() {
                    prefix.push(p);
                    rec(rest, n - p, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(factors, n, &mut Vec::new(), &mut out);
    out
}

impl Resolution {
    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks[n]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn boundary(&self, n: usize) -> &RingMatrix {
        &self.boundaries[n]
    }

    pub fn labels(&self, n: usize) -> &[Multidegree] {
        &self.labels[n]
    }

    pub fn index_of(&self, n: usize, label: &[u32]) -> Option<usize> {
        self.labels[n].iter().position(|l| l == label)
    }

    /// `d_{n−1}∘d_n = 0` for every `n`.
    pub fn check_complex(&self) -> Result<(), ChainError> {
        for n in 2..=self.top() {
            if !self.boundaries[n].checked_mul(&self.boundaries[n - 1])?.is_zero() {
                return Err(ChainError::NotAComplex(n));
            }
        }
        Ok(())
    }

    /// Exactness over `ℤ` in degrees `1..top`, tested by rank counts on the
    /// regular representation (finite groups only; cost grows with `|G|`).
    pub fn check_exact(&self) -> Result<bool, ChainError> {
        let mut ranks = Vec::new();
        for n in 1..=self.top() {
            let a = regular_matrix(&self.boundaries[n])?;
            ranks.push(ColumnEchelon::of_matrix(&a, false).rank());
        }
        let order = self.group.order().unwrap() as usize;
        // ε: C₀ → ℤ has rank 1
        let mut prev_rank = 1;
        for n in 0..self.top() {
            let kernel_dim = self.ranks[n] * order - prev_rank;
            if ranks[n] != kernel_dim {
                return Ok(false);
            }
            prev_rank = ranks[n];
        }
        Ok(true)
    }

    pub fn dump(&self) -> ResolutionDump {
        ResolutionDump {
            group: self.group.to_string(),
            ranks: self.ranks.clone(),
            boundaries: (1..=self.top())
                .map(|n| {
                    let d = &self.boundaries[n];
                    let mut entries = Vec::new();
                    for i in 0..d.rows() {
                        for j in 0..d.cols() {
                            if !d.get(i, j).is_zero() {
                                entries.push(DumpEntry {
                                    row: i,
                                    col: j,
                                    terms: d.get(i, j).to_token_map(),
                                });
                            }
                        }
                    }
                    DumpBoundary { degree: n, entries }
                })
                .collect(),
        }
    }
}

/// JSON debug dump of a resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionDump {
    pub group: String,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<DumpBoundary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpBoundary {
    pub degree: usize,
    pub entries: Vec<DumpEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpEntry {
    pub row: usize,
    pub col: usize,
    pub terms: TokenMap,
}

/// Integer matrix of a module map `ℤG^a → ℤG^b`, `x ↦ x·D`, on the ℤ-basis
/// `{h·eᵢ}` ordered by generator then group element, in column convention.
pub fn regular_matrix(d: &RingMatrix) -> Result<IntMatrix, ChainError> {
    let group = d.group();
    let elems = group
        .elements()
        .map_err(|e| ChainError::Unsupported(e.to_string()))?;
    let index: HashMap<_, _> = elems.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    let n = elems.len();
    let mut m = IntMatrix::zeros(d.cols() * n, d.rows() * n);
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            for (s, c) in d.get(i, j).terms() {
                for (hi, h) in elems.iter().enumerate() {
                    let row = j * n + index[&group.mul(h, s)];
                    let col = i * n + hi;
                    let v = m.get(row, col) + c;
                    m.set(row, col, v);
                }
            }
        }
    }
    Ok(m)
}

fn factor_generator(group: &Arc<GroupSpec>, k: usize) -> RingElement {
    RingElement::group_element(group, group.generators()[k].clone())
}

/// The boundary element of factor `k` leaving degree `p`.
fn factor_boundary(group: &Arc<GroupSpec>, k: usize, p: u32) -> RingElement {
    let g = factor_generator(group, k);
    let one = RingElement::one(group);
    match group.factors()[k] {
        Factor::Infinite => &one - &g,
        Factor::Cyclic(n) => {
            if p % 2 == 1 {
                &one - &g
            } else {
                RingElement::geometric_sum(group, &group.generators()[k], n)
            }
        }
    }
}

pub fn standard_resolution(g: &GroupSpec, top: usize) -> Result<Resolution, ChainError> {
    if top < 2 {
        return Err(ChainError::TopTooSmall(2));
    }
    let group = Arc::new(g.clone());
    let res = match g {
        GroupSpec::Abelian(factors) => abelian_resolution(&group, factors, top),
        GroupSpec::Quaternion { n } => quaternion_resolution(&group, *n, top),
    };
    res.check_complex()?;
    Ok(res)
}

fn abelian_resolution(group: &Arc<GroupSpec>, factors: &[Factor], top: usize) -> Resolution {
    let labels: Vec<Vec<Multidegree>> = (0..=top).map(|n| multidegrees(factors, n as u32)).collect();
    let ranks: Vec<usize> = labels.iter().map(Vec::len).collect();
    let deltas: Vec<Vec<RingElement>> = (0..factors.len())
        .map(|k| (0..=top as u32).map(|p| factor_boundary(group, k, p)).collect())
        .collect();
    let mut boundaries = vec![RingMatrix::zeros(group, ranks[0], 0)];
    for n in 1..=top {
        let target: HashMap<&Multidegree, usize> =
            labels[n - 1].iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut d = RingMatrix::zeros(group, ranks[n], ranks[n - 1]);
        for (row, label) in labels[n].iter().enumerate() {
            for k in 0..factors.len() {
                let p = label[k];
                if p == 0 {
                    continue;
                }
                let later: u32 = label[k + 1..].iter().sum();
                let mut t = label.clone();
                t[k] -= 1;
                let col = target[&t];
                let delta = &deltas[k][p as usize];
                let entry = if later % 2 == 0 { delta.clone() } else { -delta };
                let cur = d.get(row, col).clone();
                d.set(row, col, &cur + &entry);
            }
        }
        boundaries.push(d);
    }
    Resolution {
        group: group.clone(),
        ranks,
        boundaries,
        labels,
    }
}

fn quaternion_resolution(group: &Arc<GroupSpec>, n: u64, top: usize) -> Resolution {
    let el = |i: i64, j: u8| RingElement::group_element(group, group.quaternion_element(i, j));
    let one = RingElement::one(group);
    let x = el(1, 0);
    let y = el(0, 1);
    let xy = el(1, 1);
    let d1 = RingMatrix::from_rows(group, vec![vec![&x - &one], vec![&y - &one]]);
    let sum_x = RingElement::geometric_sum(group, &group.quaternion_element(1, 0), 2 * n);
    let d2 = RingMatrix::from_rows(
        group,
        vec![
            vec![sum_x, &(-&y) - &one],
            vec![&xy + &one, &x - &one],
        ],
    );
    let d3 = RingMatrix::from_rows(group, vec![vec![&x - &one, &one - &xy]]);
    let d4 = RingMatrix::from_rows(group, vec![vec![RingElement::norm(group).expect("finite")]]);
    let period = [d4, d1, d2, d3];
    let rank_of = |k: usize| match k {
        0 => 1,
        _ => [1, 2, 2, 1][k % 4],
    };
    let ranks: Vec<usize> = (0..=top).map(rank_of).collect();
    let mut boundaries = vec![RingMatrix::zeros(group, 1, 0)];
    for k in 1..=top {
        boundaries.push(period[k % 4].clone());
    }
    let labels = ranks
        .iter()
        .enumerate()
        .map(|(k, &r)| vec![vec![k as u32]; r])
        .collect();
    Resolution {
        group: group.clone(),
        ranks,
        boundaries,
        labels,
    }
}

/// `ℤ/m ⊗_{ℤG} C` (or `ℤ ⊗` when `modulus = 0`) as an integer complex in
/// column convention.
pub fn apply_coefficients(r: &Resolution, modulus: u64) -> IntegerComplex {
    let boundaries = (1..=r.top())
        .map(|n| r.boundary(n).augment(modulus).transpose())
        .collect();
    IntegerComplex::new(modulus, r.ranks.clone(), boundaries)
        .expect("augmentation preserves d∘d = 0")
}

/// Presentation of `coker d²` on `C₂`'s dual: relations are the rows of the
/// involuted transpose of `D₂`, one generator per basis element of `C₂`.
pub fn dualize_degree2(r: &Resolution) -> (RingMatrix, usize) {
    (r.boundary(2).dagger(), r.rank(2))
}

/// Scalar by which the chain map induced by a coordinatewise quotient acts
/// on the basis element with multidegree `label`. A cyclic factor reduced
/// from order `N` to `N'` contributes `(N/N')^{⌊p/2⌋}`; a `ℤ` factor mapped
/// onto anything contributes 1 (it only has degrees 0 and 1).
pub fn quotient_chain_scalar(source: &[Factor], target: &[Factor], label: &[u32]) -> BigInt {
    let mut s = BigInt::one();
    for ((f, t), &p) in source.iter().zip(target).zip(label) {
        if let (Factor::Cyclic(n), Factor::Cyclic(m)) = (f, t) {
            s *= BigInt::from(n / m).pow(p / 2);
        }
    }
    s
}

/// Matrix (column convention) of the chain map `ℤ⊗C_n(G) → ℤ⊗C_n(G')`
/// induced by a coordinatewise quotient `φ` that keeps every factor, with
/// entries reduced mod `modulus` when nonzero.
pub fn quotient_chain_map(
    src: &Resolution,
    tgt: &Resolution,
    phi: &GroupHom,
    n: usize,
    modulus: u64,
) -> Result<IntMatrix, ChainError> {
    let sf = phi.source.factors();
    let tf = phi.target.factors();
    if !phi.source.is_abelian() || sf.len() != tf.len() || **src.group() != phi.source || **tgt.group() != phi.target {
        return Err(ChainError::Unsupported(
            "chain maps are implemented for coordinatewise quotients".into(),
        ));
    }
    let mut m = IntMatrix::zeros(tgt.rank(n), src.rank(n));
    for (j, label) in src.labels(n).iter().enumerate() {
        let i = tgt
            .index_of(n, label)
            .ok_or_else(|| ChainError::Unsupported(format!("no target cell for {label:?}")))?;
        let mut s = quotient_chain_scalar(sf, tf, label);
        if modulus > 0 {
            s %= BigInt::from(modulus);
        }
        if !s.is_zero() {
            m.set(i, j, s);
        }
    }
    Ok(m)
}
