//! Integral group rings with the involution `g ↦ g⁻¹`, and dense matrices
//! over them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::groups::{GroupElement, GroupError, GroupHom, GroupSpec};
use crate::matrix::IntMatrix;
use crate::serial::{Coeff, TokenMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring elements live over different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("matrix shapes {0}x{1} and {2}x{3} are incompatible")]
    Shape(usize, usize, usize, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Element of `Z[G]`, stored canonically (no zero coefficients).
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    group: Arc<GroupSpec>,
    terms: BTreeMap<GroupElement, BigInt>,
}

fn same_group(a: &Arc<GroupSpec>, b: &Arc<GroupSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl RingElement {
    pub fn zero(group: &Arc<GroupSpec>) -> Self {
        RingElement {
            group: group.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(group: &Arc<GroupSpec>) -> Self {
        Self::monomial(group, group.identity(), BigInt::one())
    }

    pub fn from_int(group: &Arc<GroupSpec>, c: impl Into<BigInt>) -> Self {
        Self::monomial(group, group.identity(), c.into())
    }

    pub fn monomial(group: &Arc<GroupSpec>, g: GroupElement, c: BigInt) -> Self {
        let mut r = Self::zero(group);
        r.add_term(g, c);
        r
    }

    pub fn group_element(group: &Arc<GroupSpec>, g: GroupElement) -> Self {
        Self::monomial(group, g, BigInt::one())
    }

    pub fn from_terms<I>(group: &Arc<GroupSpec>, terms: I) -> Self
    where
        I: IntoIterator<Item = (GroupElement, BigInt)>,
    {
        let mut r = Self::zero(group);
        for (g, c) in terms {
            r.add_term(g, c);
        }
        r
    }

    /// Sum of all elements of a finite group.
    pub fn norm(group: &Arc<GroupSpec>) -> Result<Self, GroupError> {
        Ok(Self::from_terms(
            group,
            group.elements()?.into_iter().map(|g| (g, BigInt::one())),
        ))
    }

    /// `1 + g + ... + g^{k-1}`.
    pub fn geometric_sum(group: &Arc<GroupSpec>, g: &GroupElement, k: u64) -> Self {
        let mut r = Self::zero(group);
        let mut p = group.identity();
        for _ in 0..k {
            r.add_term(p.clone(), BigInt::one());
            p = group.mul(&p, g);
        }
        r
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn add_term(&mut self, g: GroupElement, c: BigInt) {
        if c.is_zero() {
            return;
        }
        debug_assert!(self.group.contains(&g), "{g:?} not in {}", self.group);
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &GroupElement) -> BigInt {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &BigInt)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let mut out = Self::zero(&self.group);
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_term(self.group.mul(g, h), a * b);
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    fn check(&self, other: &Self) -> Result<(), RingError> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(RingError::GroupMismatch(
                self.group.to_string(),
                other.group.to_string(),
            ))
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.group);
        }
        RingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect(),
        }
    }

    /// Left multiplication by a group element.
    pub fn left_translate(&self, g: &GroupElement) -> Self {
        Self::from_terms(
            &self.group,
            self.terms.iter().map(|(h, c)| (self.group.mul(g, h), c.clone())),
        )
    }

    pub fn involute(&self) -> Self {
        Self::from_terms(
            &self.group,
            self.terms.iter().map(|(g, c)| (self.group.inv(g), c.clone())),
        )
    }

    /// Sum of coefficients, reduced into `[0, modulus)` when `modulus > 0`.
    pub fn augment(&self, modulus: u64) -> BigInt {
        let s: BigInt = self.terms.values().sum();
        if modulus == 0 {
            s
        } else {
            s.mod_floor(&BigInt::from(modulus))
        }
    }

    pub fn pushforward(&self, phi: &GroupHom) -> Self {
        let target = Arc::new(phi.target.clone());
        Self::from_terms(
            &target,
            self.terms.iter().map(|(g, c)| (phi.apply(g), c.clone())),
        )
    }

    /// Same element viewed over an equal group handle (used after
    /// pushforward to share one `Arc`).
    pub fn rehome(mut self, group: &Arc<GroupSpec>) -> Self {
        debug_assert!(same_group(&self.group, group));
        self.group = group.clone();
        self
    }

    /// Token map used in JSON: element token -> coefficient.
    pub fn to_token_map(&self) -> TokenMap {
        self.terms
            .iter()
            .map(|(g, c)| (self.group.element_token(g), Coeff(c.clone())))
            .collect()
    }

    pub fn from_token_map(group: &Arc<GroupSpec>, map: &TokenMap) -> Result<Self, RingError> {
        let mut r = Self::zero(group);
        for (tok, c) in map {
            r.add_term(group.parse_element(tok)?, c.0.clone());
        }
        Ok(r)
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (g, c)) in self.terms.iter().enumerate() {
            let tok = self.group.element_token(g);
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (tok.as_str(), mag.is_one()) {
                ("1", _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "{tok}")?,
                _ => write!(f, "{mag}*{tok}")?,
            }
        }
        Ok(())
    }
}

macro_rules! ring_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl std::ops::$trait<&RingElement> for &RingElement {
            type Output = RingElement;
            /// Panics if the operands live over different groups.
            fn $method(self, rhs: &RingElement) -> RingElement {
                let f: fn(&RingElement, &RingElement) -> Result<RingElement, RingError> = $body;
                f(self, rhs).expect("ring operation on mismatched groups")
            }
        }
    };
}

ring_binop!(Add, add, |a, b| a.checked_add(b));
ring_binop!(Sub, sub, |a, b| a.checked_add(&-b));
ring_binop!(Mul, mul, |a, b| a.checked_mul(b));

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect(),
        }
    }
}

/// Dense matrix over `Z[G]`.
#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    group: Arc<GroupSpec>,
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RingMatrix {}x{} over {}", self.rows, self.cols, self.group)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RingMatrix {
    pub fn zeros(group: &Arc<GroupSpec>, rows: usize, cols: usize) -> Self {
        RingMatrix {
            group: group.clone(),
            rows,
            cols,
            entries: vec![RingElement::zero(group); rows * cols],
        }
    }

    pub fn identity(group: &Arc<GroupSpec>, n: usize) -> Self {
        let mut m = Self::zeros(group, n, n);
        for i in 0..n {
            m.set(i, i, RingElement::one(group));
        }
        m
    }

    pub fn from_rows(group: &Arc<GroupSpec>, rows: Vec<Vec<RingElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(group, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, e) in row.into_iter().enumerate() {
                m.set(i, j, e.rehome(group));
            }
        }
        m
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: RingElement) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut RingElement {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[RingElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        if self.cols != other.rows {
            return Err(RingError::Shape(self.rows, self.cols, other.rows, other.cols));
        }
        if !same_group(&self.group, &other.group) {
            return Err(RingError::GroupMismatch(
                self.group.to_string(),
                other.group.to_string(),
            ));
        }
        let mut out = Self::zeros(&self.group, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = out.entry_mut(i, j);
                    for (g, x) in &a.terms {
                        for (h, y) in &b.terms {
                            slot.add_term(self.group.mul(g, h), x * y);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&RingElement, &RingElement) -> RingElement) -> Result<Self, RingError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(RingError::Shape(self.rows, self.cols, other.rows, other.cols));
        }
        if !same_group(&self.group, &other.group) {
            return Err(RingError::GroupMismatch(
                self.group.to_string(),
                other.group.to_string(),
            ));
        }
        Ok(RingMatrix {
            group: self.group.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }

    pub fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> Self {
        RingMatrix {
            group: self.group.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.group, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Involuted transpose `M†`.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(&self.group, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).involute());
            }
        }
        out
    }

    pub fn pushforward(&self, phi: &GroupHom) -> Self {
        let target = Arc::new(phi.target.clone());
        RingMatrix {
            group: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|e| e.pushforward(phi).rehome(&target))
                .collect(),
        }
    }

    /// Entrywise augmentation (mod `modulus` when nonzero), same shape.
    pub fn augment(&self, modulus: u64) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).augment(modulus));
            }
        }
        m
    }

    /// Row vector times matrix, `x·M`.
    pub fn left_apply(&self, x: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(x.len(), self.rows);
        let row = RingMatrix::from_rows(&self.group, vec![x.to_vec()]);
        row.checked_mul(self).expect("shape checked").entries
    }

    pub fn to_token_rows(&self) -> Vec<Vec<TokenMap>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(RingElement::to_token_map).collect())
            .collect()
    }

    pub fn from_token_rows(
        group: &Arc<GroupSpec>,
        rows: &[Vec<TokenMap>],
    ) -> Result<Self, RingError> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|m| RingElement::from_token_map(group, m))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let c = parsed.first().map_or(0, Vec::len);
        if parsed.iter().any(|r| r.len() != c) {
            return Err(RingError::Shape(parsed.len(), c, parsed.len(), 0));
        }
        Ok(Self::from_rows(group, parsed))
    }
}
