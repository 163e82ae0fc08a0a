//! Supported groups: finitely generated abelian groups (at most one `Z`
//! factor) and generalised quaternion groups `Q_{8n}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cannot parse group `{text}`: {reason}")]
    Syntax { text: String, reason: String },
    #[error("at most one infinite cyclic factor is supported")]
    MultipleInfinite,
    #[error("quaternion order {0} is not 8 times a power of two")]
    BadQuaternion(u64),
    #[error("a quaternion group cannot be combined with other factors")]
    QuaternionProduct,
    #[error("factor {index}: order {new} does not divide {old}")]
    Divisibility { index: usize, new: String, old: String },
    #[error("expected {expected} factor orders, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("group {0} is infinite")]
    Infinite(String),
    #[error("homomorphism images do not satisfy the relation {0}")]
    RelationViolated(String),
    #[error("element `{token}` is not valid in {group}")]
    BadElement { token: String, group: String },
}

/// One cyclic factor of an abelian group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    Infinite,
    Cyclic(u64),
}

impl Factor {
    pub fn order(self) -> Option<u64> {
        match self {
            Factor::Infinite => None,
            Factor::Cyclic(n) => Some(n),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Infinite => write!(f, "Z"),
            Factor::Cyclic(n) => write!(f, "Z/{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSpec {
    /// Product of cyclic factors in the order written. The empty product is
    /// the trivial group.
    Abelian(Vec<Factor>),
    /// `Q_{8n}` with presentation `<x, y | x^{2n} = y^2, xyx = y>`.
    Quaternion { n: u64 },
}

/// Normal forms. Abelian elements are residue tuples; quaternion elements
/// are `x^i y^j` with `0 <= i < 4n`, `j ∈ {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupElement {
    Abelian(Vec<i64>),
    Quaternion { i: u64, j: u8 },
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(text: &str) -> Result<Self, GroupError> {
        parse_group_spec(text)
    }
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec, GroupError> {
    let syntax = |reason: &str| GroupError::Syntax {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(syntax("empty input"));
    }
    if trimmed == "1" {
        return Ok(GroupSpec::Abelian(Vec::new()));
    }
    let mut factors = Vec::new();
    let mut quaternion = None;
    let parts: Vec<&str> = trimmed.split('x').map(str::trim).collect();
    for part in &parts {
        if part.is_empty() {
            return Err(syntax("missing factor around `x`"));
        }
        if *part == "Z" {
            factors.push(Factor::Infinite);
        } else if let Some(rest) = part.strip_prefix("Z/") {
            let n: u64 = rest
                .parse()
                .map_err(|_| syntax(&format!("bad cyclic order `{rest}`")))?;
            if n < 2 {
                return Err(syntax("cyclic orders must be at least 2"));
            }
            factors.push(Factor::Cyclic(n));
        } else if let Some(rest) = part.strip_prefix('Q') {
            let k: u64 = rest
                .parse()
                .map_err(|_| syntax(&format!("bad quaternion order `{rest}`")))?;
            if k < 8 || k % 8 != 0 || !(k / 8).is_power_of_two() {
                return Err(GroupError::BadQuaternion(k));
            }
            quaternion = Some(k / 8);
        } else {
            return Err(syntax(&format!("unknown factor `{part}`")));
        }
    }
    if let Some(n) = quaternion {
        if parts.len() > 1 {
            return Err(GroupError::QuaternionProduct);
        }
        return Ok(GroupSpec::Quaternion { n });
    }
    if factors.iter().filter(|f| **f == Factor::Infinite).count() > 1 {
        return Err(GroupError::MultipleInfinite);
    }
    Ok(GroupSpec::Abelian(factors))
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Quaternion { n } => write!(f, "Q{}", 8 * n),
            GroupSpec::Abelian(fs) if fs.is_empty() => write!(f, "1"),
            GroupSpec::Abelian(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

fn two_part(n: u64) -> u64 {
    1 << n.trailing_zeros()
}

impl GroupSpec {
    pub fn factors(&self) -> &[Factor] {
        match self {
            GroupSpec::Abelian(fs) => fs,
            GroupSpec::Quaternion { .. } => &[],
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, GroupSpec::Abelian(_))
    }

    pub fn infinite_factor(&self) -> Option<usize> {
        self.factors().iter().position(|f| *f == Factor::Infinite)
    }

    pub fn is_finite(&self) -> bool {
        self.infinite_factor().is_none()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupSpec::Quaternion { n } => Some(8 * n),
            GroupSpec::Abelian(fs) => fs.iter().map(|f| f.order()).product(),
        }
    }

    /// Order of the torsion part (the product of the finite factors).
    pub fn finite_part_order(&self) -> u64 {
        match self {
            GroupSpec::Quaternion { n } => 8 * n,
            GroupSpec::Abelian(fs) => fs.iter().filter_map(|f| f.order()).product(),
        }
    }

    pub fn is_two_group(&self) -> bool {
        self.finite_part_order().is_power_of_two()
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::Abelian(fs) => GroupElement::Abelian(vec![0; fs.len()]),
            GroupSpec::Quaternion { .. } => GroupElement::Quaternion { i: 0, j: 0 },
        }
    }

    /// Standard generators: one per abelian factor, or `x, y`.
    pub fn generators(&self) -> Vec<GroupElement> {
        match self {
            GroupSpec::Abelian(fs) => (0..fs.len())
                .map(|k| {
                    let mut v = vec![0; fs.len()];
                    v[k] = 1;
                    GroupElement::Abelian(v)
                })
                .collect(),
            GroupSpec::Quaternion { .. } => vec![
                GroupElement::Quaternion { i: 1, j: 0 },
                GroupElement::Quaternion { i: 0, j: 1 },
            ],
        }
    }

    /// Generator names used in element tokens.
    pub fn generator_names(&self) -> Vec<String> {
        match self {
            GroupSpec::Quaternion { .. } => vec!["x".into(), "y".into()],
            GroupSpec::Abelian(fs) if fs.len() == 1 => match fs[0] {
                Factor::Infinite => vec!["t".into()],
                Factor::Cyclic(_) => vec!["T".into()],
            },
            GroupSpec::Abelian(fs) => (0..fs.len())
                .map(|k| ((b'a' + k as u8) as char).to_string())
                .collect(),
        }
    }

    pub fn abelian_element(&self, residues: &[i64]) -> GroupElement {
        let fs = self.factors();
        assert_eq!(fs.len(), residues.len(), "residue count mismatch");
        GroupElement::Abelian(
            fs.iter()
                .zip(residues)
                .map(|(f, &r)| match f {
                    Factor::Infinite => r,
                    Factor::Cyclic(n) => r.rem_euclid(*n as i64),
                })
                .collect(),
        )
    }

    pub fn quaternion_element(&self, i: i64, j: u8) -> GroupElement {
        let GroupSpec::Quaternion { n } = self else {
            panic!("quaternion_element on an abelian group");
        };
        let m = 4 * *n as i64;
        let mut i = i;
        let mut j = j % 4;
        if j >= 2 {
            // y^2 = x^{2n}
            i += 2 * *n as i64;
            j -= 2;
        }
        GroupElement::Quaternion {
            i: i.rem_euclid(m) as u64,
            j,
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupSpec::Abelian(fs), GroupElement::Abelian(r)) => {
                fs.len() == r.len()
                    && fs.iter().zip(r).all(|(f, &x)| match f {
                        Factor::Infinite => true,
                        Factor::Cyclic(n) => x >= 0 && (x as u64) < *n,
                    })
            }
            (GroupSpec::Quaternion { n }, GroupElement::Quaternion { i, j }) => {
                *i < 4 * n && *j < 2
            }
            _ => false,
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (GroupSpec::Abelian(fs), GroupElement::Abelian(x), GroupElement::Abelian(y)) => {
                GroupElement::Abelian(
                    fs.iter()
                        .zip(x.iter().zip(y))
                        .map(|(f, (&p, &q))| match f {
                            Factor::Infinite => p + q,
                            Factor::Cyclic(n) => (p + q) % *n as i64,
                        })
                        .collect(),
                )
            }
            (
                GroupSpec::Quaternion { n },
                GroupElement::Quaternion { i: a, j: b },
                GroupElement::Quaternion { i: c, j: d },
            ) => {
                // (x^a y^b)(x^c y^d) = x^{a ± c} y^{b+d}
                let m = 4 * n;
                let mut i = if *b == 0 { a + c } else { a + m - c };
                let mut j = b + d;
                if j == 2 {
                    i += 2 * n;
                    j = 0;
                }
                GroupElement::Quaternion { i: i % m, j }
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (GroupSpec::Abelian(fs), GroupElement::Abelian(x)) => GroupElement::Abelian(
                fs.iter()
                    .zip(x)
                    .map(|(f, &p)| match f {
                        Factor::Infinite => -p,
                        Factor::Cyclic(n) => (*n as i64 - p) % *n as i64,
                    })
                    .collect(),
            ),
            (GroupSpec::Quaternion { n }, GroupElement::Quaternion { i, j }) => {
                let m = 4 * n;
                if *j == 0 {
                    GroupElement::Quaternion { i: (m - i) % m, j: 0 }
                } else {
                    // (x^i y)^{-1} = x^{i+2n} y
                    GroupElement::Quaternion { i: (i + 2 * n) % m, j: 1 }
                }
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn pow(&self, a: &GroupElement, e: i64) -> GroupElement {
        let base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut e = e.unsigned_abs();
        if let Some(order) = self.order() {
            e %= order;
        }
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            e >>= 1;
        }
        acc
    }

    /// All elements in sorted normal-form order. Errors for infinite groups.
    pub fn elements(&self) -> Result<Vec<GroupElement>, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::Infinite(self.to_string()));
        }
        Ok(self.elements_in_window(0))
    }

    /// Elements whose infinite coordinate (if any) lies in `[-window, window]`,
    /// in sorted order.
    pub fn elements_in_window(&self, window: i64) -> Vec<GroupElement> {
        match self {
            GroupSpec::Quaternion { n } => {
                let mut out = Vec::with_capacity(8 * *n as usize);
                for i in 0..4 * n {
                    for j in 0..2 {
                        out.push(GroupElement::Quaternion { i, j });
                    }
                }
                out
            }
            GroupSpec::Abelian(fs) => {
                let ranges: Vec<(i64, i64)> = fs
                    .iter()
                    .map(|f| match f {
                        Factor::Infinite => (-window, window),
                        Factor::Cyclic(n) => (0, *n as i64 - 1),
                    })
                    .collect();
                let mut out = Vec::new();
                let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
                loop {
                    out.push(GroupElement::Abelian(cur.clone()));
                    let mut k = fs.len();
                    loop {
                        if k == 0 {
                            return out;
                        }
                        k -= 1;
                        if cur[k] < ranges[k].1 {
                            cur[k] += 1;
                            break;
                        }
                        cur[k] = ranges[k].0;
                    }
                }
            }
        }
    }

    /// Textual token of an element, e.g. `1`, `a^3*b`, `x^2*y`, `t^-1`.
    pub fn element_token(&self, g: &GroupElement) -> String {
        let names = self.generator_names();
        let exps: Vec<i64> = match g {
            GroupElement::Abelian(r) => r.clone(),
            GroupElement::Quaternion { i, j } => vec![*i as i64, *j as i64],
        };
        let parts: Vec<String> = names
            .iter()
            .zip(&exps)
            .filter(|(_, &e)| e != 0)
            .map(|(name, &e)| {
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Inverse of [`GroupSpec::element_token`]; accepts generator powers
    /// separated by `*` or whitespace, in any order, with signed exponents.
    pub fn parse_element(&self, token: &str) -> Result<GroupElement, GroupError> {
        let bad = || GroupError::BadElement {
            token: token.to_string(),
            group: self.to_string(),
        };
        let names = self.generator_names();
        let gens = self.generators();
        let mut acc = self.identity();
        for piece in token
            .split(|c: char| c == '*' || c.is_whitespace())
            .filter(|s| !s.is_empty())
        {
            if piece == "1" {
                continue;
            }
            let (name, exp) = match piece.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| bad())?),
                None => (piece, 1),
            };
            let k = names.iter().position(|n| n == name).ok_or_else(bad)?;
            acc = self.mul(&acc, &self.pow(&gens[k], exp));
        }
        Ok(acc)
    }

    /// Replace every finite factor by its 2-primary part, dropping factors
    /// that become trivial. Quaternion groups are already 2-groups.
    pub fn strip_odd_part(&self) -> GroupSpec {
        match self {
            GroupSpec::Quaternion { .. } => self.clone(),
            GroupSpec::Abelian(fs) => GroupSpec::Abelian(
                fs.iter()
                    .filter_map(|f| match f {
                        Factor::Infinite => Some(Factor::Infinite),
                        Factor::Cyclic(n) => {
                            let p = two_part(*n);
                            (p > 1).then_some(Factor::Cyclic(p))
                        }
                    })
                    .collect(),
            ),
        }
    }
}

/// A homomorphism given by the images of the source generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: GroupSpec,
    pub target: GroupSpec,
    pub images: Vec<GroupElement>,
}

impl GroupHom {
    pub fn new(
        source: GroupSpec,
        target: GroupSpec,
        images: Vec<GroupElement>,
    ) -> Result<Self, GroupError> {
        let gens = source.generators();
        if images.len() != gens.len() {
            return Err(GroupError::Arity {
                expected: gens.len(),
                got: images.len(),
            });
        }
        for img in &images {
            if !target.contains(img) {
                return Err(GroupError::BadElement {
                    token: format!("{img:?}"),
                    group: target.to_string(),
                });
            }
        }
        let id = target.identity();
        match &source {
            GroupSpec::Abelian(fs) => {
                for (k, f) in fs.iter().enumerate() {
                    if let Factor::Cyclic(n) = f {
                        if target.pow(&images[k], *n as i64) != id {
                            return Err(GroupError::RelationViolated(format!("g{k}^{n}")));
                        }
                    }
                    for l in 0..k {
                        let ab = target.mul(&images[k], &images[l]);
                        let ba = target.mul(&images[l], &images[k]);
                        if ab != ba {
                            return Err(GroupError::RelationViolated(format!("[g{l}, g{k}]")));
                        }
                    }
                }
            }
            GroupSpec::Quaternion { n } => {
                let (x, y) = (&images[0], &images[1]);
                if target.pow(x, 2 * *n as i64) != target.pow(y, 2) {
                    return Err(GroupError::RelationViolated("x^{2n} y^-2".into()));
                }
                if target.mul(&target.mul(x, y), x) != *y {
                    return Err(GroupError::RelationViolated("x y x y^-1".into()));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(g: &GroupSpec) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            images: g.generators(),
        }
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        let t = &self.target;
        match g {
            GroupElement::Abelian(r) => r
                .iter()
                .zip(&self.images)
                .fold(t.identity(), |acc, (&e, img)| t.mul(&acc, &t.pow(img, e))),
            GroupElement::Quaternion { i, j } => t.mul(
                &t.pow(&self.images[0], *i as i64),
                &t.pow(&self.images[1], *j as i64),
            ),
        }
    }

    pub fn compose(&self, then: &GroupHom) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: then.target.clone(),
            images: self.images.iter().map(|g| then.apply(g)).collect(),
        }
    }
}

/// Coordinatewise reduction of an abelian group. A new order of 1 drops the
/// factor from the target; `Factor::Infinite` keeps a `Z` factor as is.
pub fn quotient_surjection(g: &GroupSpec, new_orders: &[Factor]) -> Result<GroupHom, GroupError> {
    let GroupSpec::Abelian(fs) = g else {
        return Err(GroupError::Syntax {
            text: g.to_string(),
            reason: "quotient surjections are defined for abelian groups".into(),
        });
    };
    if fs.len() != new_orders.len() {
        return Err(GroupError::Arity {
            expected: fs.len(),
            got: new_orders.len(),
        });
    }
    let mut kept = Vec::new();
    for (index, (old, new)) in fs.iter().zip(new_orders).enumerate() {
        let ok = match (old, new) {
            (Factor::Infinite, _) => true,
            (Factor::Cyclic(_), Factor::Infinite) => false,
            (Factor::Cyclic(n), Factor::Cyclic(m)) => *m >= 1 && n % m == 0,
        };
        if !ok {
            return Err(GroupError::Divisibility {
                index,
                new: new.to_string(),
                old: old.to_string(),
            });
        }
        if *new != Factor::Cyclic(1) {
            kept.push((index, *new));
        }
    }
    let target = GroupSpec::Abelian(kept.iter().map(|(_, f)| *f).collect());
    let images = (0..fs.len())
        .map(|k| {
            let mut r = vec![0; kept.len()];
            if let Some(pos) = kept.iter().position(|(i, _)| *i == k) {
                r[pos] = 1;
            }
            target.abelian_element(&r)
        })
        .collect();
    GroupHom::new(g.clone(), target, images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn parses_supported_grammar() {
        assert_eq!(
            g("Z/8 x Z/2"),
            GroupSpec::Abelian(vec![Factor::Cyclic(8), Factor::Cyclic(2)])
        );
        assert_eq!(
            g("Z x Z/2"),
            GroupSpec::Abelian(vec![Factor::Infinite, Factor::Cyclic(2)])
        );
        assert_eq!(g("Q8"), GroupSpec::Quaternion { n: 1 });
        assert_eq!(g("Q32"), GroupSpec::Quaternion { n: 4 });
        assert_eq!(g("Z/4xZ/2"), g("Z/4 x Z/2"));
        assert_eq!(g("1"), GroupSpec::Abelian(vec![]));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_group_spec("Z x Z"), Err(GroupError::MultipleInfinite));
        assert_eq!(parse_group_spec("Q24"), Err(GroupError::BadQuaternion(24)));
        assert_eq!(parse_group_spec("Q8 x Z/2"), Err(GroupError::QuaternionProduct));
        assert!(parse_group_spec("Z/1").is_err());
        assert!(parse_group_spec("Z/ x Z").is_err());
        assert!(parse_group_spec("").is_err());
        assert!(parse_group_spec("Z/4 x").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["Z/8 x Z/2", "Z x Z/2", "Q16", "1", "Z/2 x Z/2 x Z/4"] {
            assert_eq!(g(s).to_string(), s);
        }
    }

    #[test]
    fn quaternion_rewriting_rules() {
        let q = g("Q16");
        let x = q.quaternion_element(1, 0);
        let y = q.quaternion_element(0, 1);
        // y x = x^{-1} y
        assert_eq!(q.mul(&y, &x), q.mul(&q.inv(&x), &y));
        // y^2 = x^{2n}
        assert_eq!(q.mul(&y, &y), q.pow(&x, 4));
        assert_eq!(q.pow(&y, 4), q.identity());
        assert_eq!(q.elements().unwrap().len(), 16);
    }

    #[test]
    fn y_times_x_in_q8() {
        let q = g("Q8");
        let yx = q.mul(&q.parse_element("y").unwrap(), &q.parse_element("x").unwrap());
        assert_eq!(q.element_token(&yx), "x^3*y");
    }

    #[test]
    fn strip_odd_examples() {
        assert_eq!(g("Z/12 x Z/3").strip_odd_part(), g("Z/4"));
        assert_eq!(g("Z x Z/6").strip_odd_part(), g("Z x Z/2"));
        assert_eq!(g("Z/8 x Z/2").strip_odd_part(), g("Z/8 x Z/2"));
        assert_eq!(g("Z/3").strip_odd_part(), g("1"));
    }

    #[test]
    fn quotient_examples() {
        let p = quotient_surjection(&g("Z/8 x Z/2"), &[Factor::Cyclic(4), Factor::Cyclic(2)]).unwrap();
        assert_eq!(p.target, g("Z/4 x Z/2"));
        let a5 = g("Z/8 x Z/2").abelian_element(&[5, 1]);
        assert_eq!(p.apply(&a5), GroupElement::Abelian(vec![1, 1]));

        let p = quotient_surjection(&g("Z x Z/2"), &[Factor::Cyclic(4), Factor::Cyclic(2)]).unwrap();
        assert_eq!(p.apply(&GroupElement::Abelian(vec![-1, 0])), GroupElement::Abelian(vec![3, 0]));

        let id = quotient_surjection(&g("Z/2"), &[Factor::Cyclic(2)]).unwrap();
        assert_eq!(id, GroupHom::identity(&g("Z/2")));

        assert!(quotient_surjection(&g("Z/8"), &[Factor::Cyclic(3)]).is_err());
        assert!(quotient_surjection(&g("Z/8"), &[Factor::Infinite]).is_err());
    }

    #[test]
    fn hom_checks_relations() {
        let z4 = g("Z/4");
        let z2 = g("Z/2");
        // generator of Z/2 cannot go to an element of order 4
        assert!(GroupHom::new(z2.clone(), z4.clone(), vec![z4.abelian_element(&[1])]).is_err());
        assert!(GroupHom::new(z2, z4.clone(), vec![z4.abelian_element(&[2])]).is_ok());
        // Q8 -> Z/2 x Z/2 abelianization
        let v = g("Z/2 x Z/2");
        let ab = GroupHom::new(
            g("Q8"),
            v.clone(),
            vec![v.abelian_element(&[1, 0]), v.abelian_element(&[0, 1])],
        );
        assert!(ab.is_ok());
    }

    #[test]
    fn tokens_round_trip() {
        for s in ["Z/4 x Z x Z/2", "Q16", "Z/8"] {
            let grp = g(s);
            for e in grp.elements_in_window(2) {
                let tok = grp.element_token(&e);
                assert_eq!(grp.parse_element(&tok).unwrap(), e, "{tok}");
            }
        }
    }
}
