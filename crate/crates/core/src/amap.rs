//! The map `A` from `H₃(G;ℤ/2)` to hermitian forms modulo even forms, and
//! the exactness check `H₅(G;ℤ) → H₃(G;ℤ/2) → Tate` at the middle term.
//!
//! For a mod-2 cycle `c ∈ C₃` with 0/1 integral lift, `w = c·D₃` lies in
//! `ℤ[G]^{rank C₂}` and `A(c)` is the rank-one form `w†w` on the cokernel of
//! the dual of `D₂` (generators: basis of `C₂`, relations: rows of `D₂†`).

use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::{dualize_degree2, quotient_chain_map, standard_resolution, ChainError, Resolution};
use crate::forms::{
    infinite_quotient_factors, is_weakly_even, EvennessSolver, FPModule, FormError,
    FormMatrix, OddCertificate, SearchOptions, TateVerdict,
};
use crate::groupring::{RingElement, RingMatrix};
use crate::groups::{quotient_surjection, GroupError, GroupHom, GroupSpec};
use crate::matrix::F2Matrix;
use crate::serial::TokenMap;
use crate::steenrod::{check_mod2_trivial, d2_differential, Monomial, SteenrodError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmapError {
    #[error("unsupported group {0}")]
    Unsupported(String),
    #[error("chain is not a mod-2 cycle in degree 3")]
    NotALift,
    #[error("H3(G;Z/2) has dimension {0}; enumeration is limited to 12")]
    TooLarge(usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Steenrod(#[from] SteenrodError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl AmapError {
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            AmapError::Internal(_) | AmapError::Form(FormError::Internal(_))
        )
    }

    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            AmapError::Unsupported(_) | AmapError::Steenrod(SteenrodError::Unsupported(_))
        )
    }
}

/// Provenance of an ingredient in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tag {
    MachineChecked,
    CitedFact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ingredient {
    pub fact: String,
    pub tag: Tag,
}

impl Ingredient {
    pub fn checked(fact: impl Into<String>) -> Self {
        Ingredient { fact: fact.into(), tag: Tag::MachineChecked }
    }

    pub fn cited(fact: impl Into<String>) -> Self {
        Ingredient { fact: fact.into(), tag: Tag::CitedFact }
    }
}

/// Resolution, module and prepared solver for one group.
#[derive(Debug, Clone)]
pub struct AmapContext {
    group: Arc<GroupSpec>,
    resolution: Resolution,
    module: Arc<FPModule>,
    solver: EvennessSolver,
}

impl AmapContext {
    pub fn new(g: &GroupSpec, window: i64) -> Result<Self, AmapError> {
        let resolution = standard_resolution(g, 4)?;
        check_mod2_trivial(&resolution)?;
        let (relations, n) = dualize_degree2(&resolution);
        let module = Arc::new(FPModule::new(n, relations)?);
        let solver = EvennessSolver::new(module.clone(), window);
        Ok(AmapContext {
            group: resolution.group().clone(),
            resolution,
            module,
            solver,
        })
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    pub fn module(&self) -> &Arc<FPModule> {
        &self.module
    }

    /// Dimension of `H₃(G;ℤ/2)`, which is the rank of `C₃` here.
    pub fn h3_dim(&self) -> usize {
        self.resolution.rank(3)
    }

    /// `w = c·D₃` for an integral chain `c`.
    pub fn boundary_image(&self, lift: &[BigInt]) -> Result<Vec<RingElement>, AmapError> {
        if lift.len() != self.h3_dim() {
            return Err(AmapError::NotALift);
        }
        let d3 = self.resolution.boundary(3);
        let aug = d3.augment(2);
        for j in 0..aug.cols() {
            let s: BigInt = lift.iter().enumerate().map(|(i, c)| c * aug.get(i, j)).sum();
            if s.bit(0) {
                return Err(AmapError::NotALift);
            }
        }
        let x: Vec<RingElement> = lift.iter().map(|c| RingElement::from_int(&self.group, c.clone())).collect();
        Ok(d3.left_apply(&x))
    }

    /// The form `A(c) = w†w`.
    pub fn a_of_lift(&self, lift: &[BigInt]) -> Result<FormMatrix, AmapError> {
        let w = self.boundary_image(lift)?;
        let f = FormMatrix::new(self.module.clone(), rank_one(&self.group, &w))?;
        if !f.is_well_defined() {
            return Err(AmapError::Internal("A(c) is not well defined on the cokernel".into()));
        }
        Ok(f)
    }

    pub fn a_of_class(&self, coords: &[bool]) -> Result<FormMatrix, AmapError> {
        self.a_of_lift(&lift_of(coords))
    }

    /// Evenness within the prepared window (exact for finite groups).
    fn windowed(&self, f: &FormMatrix) -> Result<Result<RingMatrix, OddCertificate>, AmapError> {
        if self.solver.covers(&f.entries) {
            Ok(self.solver.solve(&f.entries)?)
        } else {
            let bigger = EvennessSolver::new(self.module.clone(), support_of(f));
            Ok(bigger.solve(&f.entries)?)
        }
    }
}

fn support_of(f: &FormMatrix) -> i64 {
    let idx = f.entries.group().infinite_factor();
    let mut r = 0;
    for i in 0..f.entries.rows() {
        for j in 0..f.entries.cols() {
            for (h, _) in f.entries.get(i, j).terms() {
                if let (Some(k), crate::groups::GroupElement::Abelian(v)) = (idx, h) {
                    r = r.max(v[k].abs());
                }
            }
        }
    }
    r
}

/// Matrix with entries `involute(w_i)·w_j`.
pub fn rank_one(g: &Arc<GroupSpec>, w: &[RingElement]) -> RingMatrix {
    let mut l = RingMatrix::zeros(g, w.len(), w.len());
    for (i, wi) in w.iter().enumerate() {
        let bar = wi.involute();
        for (j, wj) in w.iter().enumerate() {
            l.set(i, j, &bar * wj);
        }
    }
    l
}

pub fn lift_of(coords: &[bool]) -> Vec<BigInt> {
    coords.iter().map(|&b| BigInt::from(b as u8)).collect()
}

/// Contexts for the quotients `ℤ → ℤ/2^m`, `m = 1..=max_exp`.
#[derive(Debug, Clone)]
pub struct QuotientLadder {
    rungs: Vec<(u32, GroupHom, AmapContext, F2Matrix)>,
}

impl QuotientLadder {
    pub fn new(source: &AmapContext, max_exp: u32) -> Result<Self, AmapError> {
        let g = source.group();
        let mut rungs = Vec::new();
        if g.infinite_factor().is_none() {
            return Ok(QuotientLadder { rungs });
        }
        for m in 1..=max_exp {
            let phi = quotient_surjection(g, &infinite_quotient_factors(g, m))?;
            let ctx = AmapContext::new(&phi.target, 0)?;
            let map = quotient_chain_map(source.resolution(), ctx.resolution(), &phi, 3, 2)?.to_f2();
            rungs.push((m, phi, ctx, map));
        }
        Ok(QuotientLadder { rungs })
    }

    /// First quotient in which the pushed-forward class has odd `A`.
    pub fn certify(&self, coords: &[bool]) -> Result<Option<OddCertificate>, AmapError> {
        for (m, phi, ctx, map) in &self.rungs {
            let image = map.mul_vec(coords);
            if image.iter().all(|b| !b) {
                continue;
            }
            let f = ctx.a_of_class(&image)?;
            if let Err(inner) = ctx.windowed(&f)? {
                return Ok(Some(OddCertificate::QuotientOdd {
                    target: phi.target.to_string(),
                    exponent: *m,
                    inner: Box::new(inner),
                }));
            }
        }
        Ok(None)
    }
}

/// Odd certificate for `A(x)` from the finite quotients of a group with a
/// `ℤ` factor, or `None` if every quotient up to `max_exp` is even.
pub fn certify_odd_via_quotients(
    g: &GroupSpec,
    coords: &[bool],
    max_exp: u32,
) -> Result<Option<OddCertificate>, AmapError> {
    if g.infinite_factor().is_none() {
        return Err(AmapError::Unsupported(format!("{g} has no Z factor to reduce")));
    }
    let ctx = AmapContext::new(g, 0)?;
    QuotientLadder::new(&ctx, max_exp)?.certify(coords)
}

/// Verdict for `A` of one class.
pub fn class_verdict(
    ctx: &AmapContext,
    ladder: &QuotientLadder,
    coords: &[bool],
    opts: &SearchOptions,
) -> Result<TateVerdict, AmapError> {
    let f = ctx.a_of_class(coords)?;
    match ctx.windowed(&f)? {
        Ok(witness) => Ok(TateVerdict::Even { witness }),
        Err(certificate) if ctx.group().is_finite() => Ok(TateVerdict::Odd { certificate }),
        Err(_) => match ladder.certify(coords)? {
            Some(certificate) => Ok(TateVerdict::Odd { certificate }),
            None => Ok(TateVerdict::Undecided {
                window: opts.max_support,
                max_exponent: opts.quotient_exponent_for(ctx.group()),
            }),
        },
    }
}

/// Class number `k` as a bit vector (bit `i` of `k` is coordinate `i`).
pub fn class_coords(k: usize, dim: usize) -> Vec<bool> {
    (0..dim).map(|i| k >> i & 1 == 1).collect()
}

/// Verdicts for every nonzero class of `H₃(G;ℤ/2)`, in class-number order.
pub fn kernel_of_a(ctx: &AmapContext, opts: &SearchOptions) -> Result<Vec<(Vec<bool>, TateVerdict)>, AmapError> {
    let dim = ctx.h3_dim();
    if dim > 12 {
        return Err(AmapError::TooLarge(dim));
    }
    let max_exp = opts.quotient_exponent_for(ctx.group());
    let ladder = QuotientLadder::new(ctx, max_exp)?;
    (1usize..1 << dim)
        .into_par_iter()
        .map(|k| {
            let coords = class_coords(k, dim);
            let v = class_verdict(ctx, &ladder, &coords, opts)?;
            Ok((coords, v))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Holds {
    Yes,
    No,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    /// `Q` with `Q + Q† = A(x)`, rows of element-token maps.
    Witness { rows: Vec<Vec<TokenMap>> },
    Certificate { kind: String, detail: String },
    SearchBound { window: i64, max_exponent: u32 },
}

impl Evidence {
    pub fn of(v: &TateVerdict) -> Self {
        match v {
            TateVerdict::Even { witness } => Evidence::Witness { rows: witness.to_token_rows() },
            TateVerdict::Odd { certificate } => Evidence::Certificate {
                kind: certificate.kind().to_string(),
                detail: certificate.describe(),
            },
            TateVerdict::Undecided { window, max_exponent } => Evidence::SearchBound {
                window: *window,
                max_exponent: *max_exponent,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub coords: Vec<u8>,
    pub label: String,
    pub verdict: String,
    pub witness_or_certificate: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondaryReport {
    pub group: String,
    pub reduced_group: String,
    pub h3_dim: usize,
    /// Names of the `H₃(G;ℤ/2)` basis classes.
    pub basis: Vec<String>,
    pub image_basis: Vec<Vec<u8>>,
    pub kernel_basis: Vec<Vec<u8>>,
    pub classes: Vec<ClassReport>,
    pub condition_holds: Holds,
    pub ingredients: Vec<Ingredient>,
}

impl SecondaryReport {
    pub fn class(&self, label: &str) -> Option<&ClassReport> {
        self.classes.iter().find(|c| c.label == label)
    }
}

fn bits(v: &[bool]) -> Vec<u8> {
    v.iter().map(|&b| b as u8).collect()
}

/// Names of the degree-`d` chain basis: dual monomials for abelian groups,
/// `e0, e1, …` otherwise.
pub fn basis_names(r: &Resolution, d: usize) -> Vec<String> {
    let g = r.group();
    match &**g {
        GroupSpec::Abelian(fs) => r
            .labels(d)
            .iter()
            .map(|l| Monomial { degrees: l.clone() }.render(fs))
            .collect(),
        GroupSpec::Quaternion { .. } => (0..r.rank(d)).map(|i| format!("e{i}")).collect(),
    }
}

pub fn class_label(names: &[String], coords: &[bool]) -> String {
    let parts: Vec<&str> = names
        .iter()
        .zip(coords)
        .filter(|(_, &b)| b)
        .map(|(n, _)| n.as_str())
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// The class called `γ` in the two- and three-factor abelian examples:
/// dual to `α₁β₂` (multidegree (1, 2)) or to `α₁α₂α₃` (multidegree (1,1,1)).
pub fn gamma_class(r: &Resolution) -> Option<Vec<bool>> {
    let label: Vec<u32> = match r.group().factors().len() {
        2 => vec![1, 2],
        3 => vec![1, 1, 1],
        _ => return None,
    };
    let idx = r.index_of(3, &label)?;
    Some((0..r.rank(3)).map(|i| i == idx).collect())
}

/// Image of `d²₅,₀ = Sq₂∘red₂` in `H₃(G;ℤ/2)` as a list of spanning
/// vectors, with its provenance.
pub fn d2_image(g: &GroupSpec) -> Result<(Vec<Vec<bool>>, Ingredient), AmapError> {
    match g {
        GroupSpec::Quaternion { .. } => Ok((
            Vec::new(),
            Ingredient::cited("d2 from H5(G;Z) to H3(G;Z/2) is zero for generalized quaternion groups"),
        )),
        GroupSpec::Abelian(_) => {
            let d = d2_differential(g, 5)?;
            Ok((
                d.image(),
                Ingredient::checked("image of Sq2 o red2 on H5(G;Z), from the Cartan formula and integral homology"),
            ))
        }
    }
}

fn f2_span(vectors: &[Vec<bool>], dim: usize) -> Vec<Vec<bool>> {
    F2Matrix::from_cols(dim, vectors).column_space()
}

fn in_span(vectors: &[Vec<bool>], dim: usize, x: &[bool]) -> bool {
    F2Matrix::from_cols(dim, vectors).in_column_space(x)
}

/// Full exactness check on `H₃(G;ℤ/2)` after removing odd-order factors.
pub fn check_condition(g: &GroupSpec, opts: &SearchOptions) -> Result<SecondaryReport, AmapError> {
    let reduced = g.strip_odd_part();
    let is_two_group_like = match &reduced {
        GroupSpec::Abelian(fs) => fs.iter().all(|f| f.order().map_or(true, u64::is_power_of_two)),
        GroupSpec::Quaternion { .. } => true,
    };
    if !is_two_group_like {
        return Err(AmapError::Unsupported(g.to_string()));
    }
    let ctx = AmapContext::new(&reduced, opts.max_support)?;
    let dim = ctx.h3_dim();
    let names = basis_names(ctx.resolution(), 3);
    let (image, image_fact) = d2_image(&reduced)?;
    let image_basis = f2_span(&image, dim);
    let verdicts = kernel_of_a(&ctx, opts)?;

    let mut ingredients = vec![image_fact];
    ingredients.push(Ingredient::checked(
        "H3(G;Z/2) equals the degree-3 chains: all mod-2 differentials vanish",
    ));
    ingredients.push(Ingredient::checked("A(x) = w*w with w = c.d3, verified well defined on coker d2*"));
    if reduced.is_finite() {
        ingredients.push(Ingredient::checked("evenness decided exactly by the integer system Q + Q* = L, Q R* = 0"));
    } else {
        ingredients.push(Ingredient::checked(format!(
            "evenness: witness search with Z-support in [-{}, {}], oddness via quotients Z -> Z/2^m, m <= {}",
            opts.max_support,
            opts.max_support,
            opts.quotient_exponent_for(&reduced)
        )));
    }
    // stated for every group so reports on G and its 2-primary part agree
    ingredients.push(Ingredient::cited(
        "odd-order factors are removed first: the condition holds for G if it holds for its 2-primary part",
    ));

    let undecided = verdicts.iter().any(|(_, v)| matches!(v, TateVerdict::Undecided { .. }));
    let even: Vec<Vec<bool>> = verdicts
        .iter()
        .filter(|(_, v)| v.is_even())
        .map(|(c, _)| c.clone())
        .collect();
    let kernel_basis = f2_span(&even, dim);
    let condition_holds = if undecided {
        Holds::Undecided
    } else {
        // A is additive, so the even classes plus 0 must form a subspace
        let expected = (1usize << kernel_basis.len()) - 1;
        if even.len() != expected || !even.iter().all(|x| in_span(&kernel_basis, dim, x)) {
            return Err(AmapError::Internal(
                "the classes with even A(x) are not closed under addition".into(),
            ));
        }
        if !image_basis.iter().all(|x| in_span(&kernel_basis, dim, x)) {
            return Err(AmapError::Internal("A does not vanish on the image of d2".into()));
        }
        if image_basis.len() == kernel_basis.len() {
            Holds::Yes
        } else {
            Holds::No
        }
    };

    let classes = verdicts
        .iter()
        .map(|(c, v)| ClassReport {
            coords: bits(c),
            label: class_label(&names, c),
            verdict: v.label().to_string(),
            witness_or_certificate: Evidence::of(v),
        })
        .collect();
    Ok(SecondaryReport {
        group: g.to_string(),
        reduced_group: reduced.to_string(),
        h3_dim: dim,
        basis: names,
        image_basis: image_basis.iter().map(|v| bits(v)).collect(),
        kernel_basis: kernel_basis.iter().map(|v| bits(v)).collect(),
        classes,
        condition_holds,
        ingredients,
    })
}

/// `w` and `A` of each basis class of `H₃(G;ℤ/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmapEntry {
    pub label: String,
    pub boundary_image: Vec<TokenMap>,
    pub form: Vec<Vec<TokenMap>>,
    pub weakly_even: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmapReport {
    pub group: String,
    pub reduced_group: String,
    pub relations: Vec<Vec<TokenMap>>,
    pub classes: Vec<AmapEntry>,
}

pub fn amap_report(g: &GroupSpec) -> Result<AmapReport, AmapError> {
    let reduced = g.strip_odd_part();
    let ctx = AmapContext::new(&reduced, 0)?;
    let names = basis_names(ctx.resolution(), 3);
    let dim = ctx.h3_dim();
    let mut classes = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let coords: Vec<bool> = (0..dim).map(|k| k == i).collect();
        let w = ctx.boundary_image(&lift_of(&coords))?;
        let f = ctx.a_of_class(&coords)?;
        classes.push(AmapEntry {
            label: name.clone(),
            boundary_image: w.iter().map(RingElement::to_token_map).collect(),
            form: f.entries.to_token_rows(),
            weakly_even: is_weakly_even(&w),
        });
    }
    Ok(AmapReport {
        group: g.to_string(),
        reduced_group: reduced.to_string(),
        relations: ctx.module().relations.to_token_rows(),
        classes,
    })
}
