//! The low-degree corner of the spin bordism spectral sequence, and the
//! combined report over all engines.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amap::{check_condition, AmapError, Evidence, Ingredient, SecondaryReport, Tag};
use crate::chains::{apply_coefficients, quotient_chain_map, standard_resolution, ChainError};
use crate::forms::{decide_even, FormError, FormFile, SearchOptions};
use crate::gamma::{verify_tertiary, GammaError, TertiaryReport};
use crate::groups::{quotient_surjection, Factor, GroupError, GroupSpec};
use crate::homology::{homology_at, AbelianGroup, HomologyError, HomologyResult};
use crate::matrix::F2Matrix;
use crate::serial::Coeff;
use crate::steenrod::{cohomology_basis, d2_differential, render_class, sq2_dual, SteenrodError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Steenrod(#[from] SteenrodError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Amap(#[from] AmapError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// `H_n(G; ℤ/m)` (`m = 0` for integral coefficients).
pub fn homology_of(g: &GroupSpec, modulus: u64, degree: usize) -> Result<HomologyResult, ReportError> {
    let r = standard_resolution(g, (degree + 1).max(2))?;
    Ok(homology_at(&apply_coefficients(&r, modulus), degree)?)
}

/// Spin bordism coefficients in degrees 0..=4, as moduli (0 = `ℤ`, 1 = 0).
pub const SPIN_COEFFICIENTS: [u64; 5] = [0, 2, 2, 1, 0];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Entry {
    pub p: usize,
    pub q: usize,
    pub group: AbelianGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PieceStatus {
    /// The piece is determined.
    Exact,
    /// Later differentials out of the piece are not computed.
    UpperBound,
    /// Determined using a cited fact.
    Cited,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPiece {
    pub position: String,
    pub group: Option<AbelianGroup>,
    pub status: PieceStatus,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialSummary {
    pub name: String,
    pub rank: Option<usize>,
    pub tag: Tag,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AhssReport {
    pub group: String,
    pub reduced_group: String,
    pub e2: Vec<E2Entry>,
    pub differentials: Vec<DifferentialSummary>,
    /// `E∞` pieces `E(4,0)`, `E(3,1)`, `E(2,2)` of the reduced group.
    pub pieces: Vec<GradedPiece>,
    pub notes: Vec<Ingredient>,
}

impl AhssReport {
    pub fn piece(&self, position: &str) -> Option<&GradedPiece> {
        self.pieces.iter().find(|p| p.position == position)
    }
}

/// Dimension of `V / span(vectors)` inside `F₂^dim`.
fn quotient_dim(dim: usize, vectors: &[Vec<bool>]) -> usize {
    dim - F2Matrix::from_cols(dim, vectors).rank()
}

/// Whether the map `p` induces an injection `F₂^n / im → F₂^m / im'`.
fn injective_on_quotient(p: &F2Matrix, im: &[Vec<bool>], im_target: &[Vec<bool>]) -> bool {
    let n = p.cols();
    let m = p.rows();
    // pairs (v, u) with p·v = im'·u
    let mut cols: Vec<Vec<bool>> = (0..n).map(|j| p.col(j)).collect();
    cols.extend(im_target.iter().cloned());
    let k = F2Matrix::from_cols(m, &cols).kernel();
    let im_mat = F2Matrix::from_cols(n, im);
    k.iter().all(|x| im_mat.in_column_space(&x[..n]))
}

/// Try to show `d³ : ker d²₅,₀ → E(2,2)` vanishes by reducing one factor of
/// order at least 4 by 2: if the reduction kills `ker d²₅,₀` in `H₅(−;ℤ)`
/// and is injective on `E(2,2)`, naturality forces `d³ = 0`.
fn quotient_argument(g: &GroupSpec) -> Result<Option<String>, ReportError> {
    let d5 = d2_differential(g, 5)?;
    let kernel = d5.kernel();
    let fs = g.factors().to_vec();
    for (k, f) in fs.iter().enumerate() {
        let Factor::Cyclic(n) = *f else { continue };
        if n < 4 {
            continue;
        }
        let mut target = fs.clone();
        target[k] = Factor::Cyclic(n / 2);
        let phi = quotient_surjection(g, &target)?;
        let src = standard_resolution(g, 6)?;
        let tgt = standard_resolution(&phi.target, 6)?;
        // p⁎ on H₅(−;ℤ)
        let h_src = &d5.source;
        let h_tgt = homology_at(&apply_coefficients(&tgt, 0), 5)?;
        let chain5 = quotient_chain_map(&src, &tgt, &phi, 5, 0)?;
        let kills = kernel.generators().iter().all(|coords| {
            let mut chain = vec![BigInt::zero(); h_src.chain_rank()];
            for (c, lift) in coords.iter().zip(&h_src.basis_lifts) {
                for (x, y) in chain.iter_mut().zip(lift) {
                    *x += c * y;
                }
            }
            let image = chain5.mul_vec(&chain);
            h_tgt
                .express(&image)
                .map(|c| h_tgt.is_zero_class(&c))
                .unwrap_or(false)
        });
        if !kills {
            continue;
        }
        // p⁎ on E(2,2) = H₂(−;ℤ/2) / im Sq₂
        let p2 = quotient_chain_map(&src, &tgt, &phi, 2, 2)?.to_f2();
        let im_src = sq2_dual(g, 2)?.column_space();
        let im_tgt = sq2_dual(&phi.target, 2)?.column_space();
        if injective_on_quotient(&p2, &im_src, &im_tgt) {
            return Ok(Some(phi.target.to_string()));
        }
    }
    Ok(None)
}

pub fn ahss_report(g: &GroupSpec) -> Result<AhssReport, ReportError> {
    let reduced = g.strip_odd_part();
    let mut e2 = Vec::new();
    let r = standard_resolution(g, 6)?;
    for (q, &m) in SPIN_COEFFICIENTS.iter().enumerate() {
        let complex = (m != 1).then(|| apply_coefficients(&r, m));
        for p in 0..=5 {
            let group = match &complex {
                Some(c) => homology_at(c, p)?.group(),
                None => AbelianGroup::trivial(),
            };
            e2.push(E2Entry { p, q, group });
        }
    }
    let mut notes = Vec::new();
    if g != &reduced {
        notes.push(Ingredient::checked(format!(
            "differentials and graded pieces are computed for the 2-primary part {reduced}"
        )));
    }
    if reduced.factors().is_empty() && reduced.is_abelian() {
        notes.push(Ingredient::cited(
            "the spin bordism group in degree 4 is 16Z, detected by the signature divided by 16",
        ));
    }
    let mut differentials = Vec::new();
    let mut pieces = Vec::new();
    match &reduced {
        GroupSpec::Quaternion { .. } => {
            let h3 = homology_of(&reduced, 2, 3)?.group();
            let h4 = homology_of(&reduced, 0, 4)?.group();
            differentials.push(DifferentialSummary {
                name: "d2(5,0)".into(),
                rank: Some(0),
                tag: Tag::CitedFact,
                note: "zero for generalized quaternion groups".into(),
            });
            pieces.push(if h4.is_trivial() {
                GradedPiece {
                    position: "E(4,0)".into(),
                    group: Some(h4),
                    status: PieceStatus::Exact,
                    note: "H4(G;Z) vanishes".into(),
                }
            } else {
                GradedPiece {
                    position: "E(4,0)".into(),
                    group: None,
                    status: PieceStatus::Unknown,
                    note: "d2(4,0) is not computed for quaternion groups".into(),
                }
            });
            pieces.push(GradedPiece {
                position: "E(3,1)".into(),
                group: Some(h3),
                status: PieceStatus::Cited,
                note: "H3(G;Z/2) modulo the image of d2(5,0) = 0".into(),
            });
            pieces.push(GradedPiece {
                position: "E(2,2)".into(),
                group: Some(AbelianGroup::trivial()),
                status: PieceStatus::Cited,
                note: "d3(5,0) onto E(2,2) is an isomorphism for generalized quaternion groups".into(),
            });
        }
        GroupSpec::Abelian(_) => {
            let d5 = d2_differential(&reduced, 5)?;
            let d4 = d2_differential(&reduced, 4)?;
            let sq = sq2_dual(&reduced, 2)?;
            differentials.push(DifferentialSummary {
                name: "d2(5,0) = Sq2 o red2".into(),
                rank: Some(d5.matrix.rank()),
                tag: Tag::MachineChecked,
                note: format!("kernel {}", d5.kernel().iso_type()),
            });
            differentials.push(DifferentialSummary {
                name: "d2(4,0) = Sq2 o red2".into(),
                rank: Some(d4.matrix.rank()),
                tag: Tag::MachineChecked,
                note: format!("kernel {}", d4.kernel().iso_type()),
            });
            differentials.push(DifferentialSummary {
                name: "d2(4,1) = Sq2".into(),
                rank: Some(sq.rank()),
                tag: Tag::MachineChecked,
                note: String::new(),
            });
            let k4 = d4.kernel().iso_type();
            pieces.push(GradedPiece {
                position: "E(4,0)".into(),
                status: if k4.is_trivial() { PieceStatus::Exact } else { PieceStatus::UpperBound },
                group: Some(k4),
                note: "kernel of d2(4,0); d3(4,0) is not computed".into(),
            });
            let e31 = quotient_dim(d5.matrix.rows(), &d5.image());
            pieces.push(GradedPiece {
                position: "E(3,1)".into(),
                group: Some(AbelianGroup::elementary(e31)),
                status: PieceStatus::Exact,
                note: "H3(G;Z/2) modulo the image of d2(5,0); d2(3,1) vanishes".into(),
            });
            let e22 = quotient_dim(sq.rows(), &sq.column_space());
            let kernel5 = d5.kernel().iso_type();
            let (status, note) = if e22 == 0 {
                (PieceStatus::Exact, "H2(G;Z/2) modulo the image of d2(4,1)".to_string())
            } else if kernel5.is_trivial() {
                (PieceStatus::Exact, "d2(5,0) is injective, so d3(5,0) vanishes".to_string())
            } else if let Some(target) = quotient_argument(&reduced)? {
                (
                    PieceStatus::Exact,
                    format!("d3(5,0) vanishes: the reduction to {target} kills ker d2(5,0) and is injective on E(2,2)"),
                )
            } else {
                (PieceStatus::Unknown, "d3(5,0) is not determined".to_string())
            };
            pieces.push(GradedPiece {
                position: "E(2,2)".into(),
                group: (status != PieceStatus::Unknown).then(|| AbelianGroup::elementary(e22)),
                status,
                note,
            });
            if reduced == "Z x Z/2".parse::<GroupSpec>().expect("valid group") {
                notes.push(Ingredient::cited(
                    "the reduced degree-4 spin bordism group is Z/8, so both extensions are nontrivial",
                ));
            }
        }
    }
    Ok(AhssReport {
        group: g.to_string(),
        reduced_group: reduced.to_string(),
        e2,
        differentials,
        pieces,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub group: String,
    pub coefficients: String,
    pub degree: usize,
    pub result: AbelianGroup,
    /// Cycle representative of each summand on the chain basis.
    pub generators: Vec<Vec<Coeff>>,
}

/// Coefficient names: `Z`, `Z2` or `Z<m>`.
pub fn parse_coefficients(text: &str) -> Option<u64> {
    match text {
        "Z" => Some(0),
        _ => text.strip_prefix('Z').and_then(|m| m.parse::<u64>().ok()).filter(|&m| m >= 2),
    }
}

pub fn coefficient_name(modulus: u64) -> String {
    if modulus == 0 {
        "Z".into()
    } else {
        format!("Z/{modulus}")
    }
}

pub fn homology_report(g: &GroupSpec, modulus: u64, degree: usize) -> Result<HomologyReport, ReportError> {
    let h = homology_of(g, modulus, degree)?;
    Ok(HomologyReport {
        group: g.to_string(),
        coefficients: coefficient_name(modulus),
        degree,
        result: h.group(),
        generators: h
            .basis_lifts
            .iter()
            .map(|v| v.iter().cloned().map(Coeff).collect())
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct D2Report {
    pub group: String,
    pub reduced_group: String,
    pub degree: usize,
    pub source: AbelianGroup,
    /// Names of the mod-2 basis of the target `H_{p−2}(G;ℤ/2)`.
    pub target_basis: Vec<String>,
    /// Rows: target basis; columns: summands of the source.
    pub matrix: Vec<Vec<u8>>,
    pub image: Vec<String>,
    pub kernel: AbelianGroup,
    pub tag: Tag,
}

pub fn d2_report(g: &GroupSpec, degree: usize) -> Result<D2Report, ReportError> {
    let reduced = g.strip_odd_part();
    if let GroupSpec::Quaternion { .. } = reduced {
        if degree != 5 {
            return Err(SteenrodError::Unsupported(format!("{reduced} in degree {degree}")).into());
        }
        let h = homology_of(&reduced, 0, 5)?;
        let target = homology_of(&reduced, 2, 3)?;
        return Ok(D2Report {
            group: g.to_string(),
            reduced_group: reduced.to_string(),
            degree,
            source: h.group(),
            target_basis: (0..target.num_summands()).map(|i| format!("e{i}")).collect(),
            matrix: vec![vec![0; h.num_summands()]; target.num_summands()],
            image: Vec::new(),
            kernel: h.group(),
            tag: Tag::CitedFact,
        });
    }
    let d = d2_differential(&reduced, degree)?;
    let target_degree = degree as u32 - 2;
    let names: Vec<String> = cohomology_basis(&reduced, target_degree)?
        .iter()
        .map(|m| m.render(reduced.factors()))
        .collect();
    Ok(D2Report {
        group: g.to_string(),
        reduced_group: reduced.to_string(),
        degree,
        source: d.source.group(),
        target_basis: names,
        matrix: d.matrix.to_rows(),
        image: d.image().iter().map(|v| render_class(&reduced, target_degree, v)).collect(),
        kernel: d.kernel().iso_type(),
        tag: Tag::MachineChecked,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvennessReport {
    pub group: String,
    pub verdict: String,
    pub witness_or_certificate: Evidence,
}

pub fn evenness_report(g: &GroupSpec, file: &FormFile, opts: &SearchOptions) -> Result<EvennessReport, ReportError> {
    let form = file.load(g)?;
    let v = decide_even(&form, opts)?;
    Ok(EvennessReport {
        group: g.to_string(),
        verdict: v.label().to_string(),
        witness_or_certificate: Evidence::of(&v),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRow {
    pub degree: usize,
    pub integral: AbelianGroup,
    pub mod2: AbelianGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullReport {
    pub group: String,
    pub homology: Vec<HomologyRow>,
    pub condition: SecondaryReport,
    pub tertiary: TertiaryReport,
    pub ahss: AhssReport,
}

pub fn full_report(g: &GroupSpec, opts: &SearchOptions) -> Result<FullReport, ReportError> {
    let r = standard_resolution(g, 6)?;
    let cz = apply_coefficients(&r, 0);
    let c2 = apply_coefficients(&r, 2);
    let homology = (0..=5)
        .map(|n| {
            Ok(HomologyRow {
                degree: n,
                integral: homology_at(&cz, n)?.group(),
                mod2: homology_at(&c2, n)?.group(),
            })
        })
        .collect::<Result<Vec<_>, HomologyError>>()?;
    Ok(FullReport {
        group: g.to_string(),
        homology,
        condition: check_condition(g, opts)?,
        tertiary: verify_tertiary(g)?,
        ahss: ahss_report(g)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn pieces(s: &str) -> Vec<(Option<String>, PieceStatus)> {
        ahss_report(&g(s))
            .unwrap()
            .pieces
            .iter()
            .map(|p| (p.group.as_ref().map(|a| a.to_string()), p.status))
            .collect()
    }

    #[test]
    fn z_times_z2_pieces() {
        let p = pieces("Z x Z/2");
        let groups: Vec<_> = p.iter().map(|x| x.0.clone().unwrap()).collect();
        assert_eq!(groups, vec!["Z/2", "Z/2", "Z/2"]);
        assert_eq!(p[1].1, PieceStatus::Exact);
        assert_eq!(p[2].1, PieceStatus::Exact);
    }

    #[test]
    fn quaternion_pieces() {
        let r = ahss_report(&g("Q8")).unwrap();
        let e22 = r.piece("E(2,2)").unwrap();
        assert!(e22.group.as_ref().unwrap().is_trivial());
        assert_eq!(e22.status, PieceStatus::Cited);
    }

    #[test]
    fn trivial_group() {
        let r = ahss_report(&g("1")).unwrap();
        assert!(r.notes.iter().any(|n| n.fact.contains("16Z")));
        let e = r.e2.iter().find(|e| e.p == 0 && e.q == 4).unwrap();
        assert_eq!(e.group.to_string(), "Z");
        assert!(r.e2.iter().filter(|e| e.p > 0).all(|e| e.group.is_trivial()));
    }

    #[test]
    fn z8_times_z2_uses_quotient() {
        let r = ahss_report(&g("Z/8 x Z/2")).unwrap();
        let e22 = r.piece("E(2,2)").unwrap();
        assert_eq!(e22.status, PieceStatus::Exact);
        assert!(e22.note.contains("Z/4 x Z/2"), "{}", e22.note);
    }

    #[test]
    fn q3_row_vanishes() {
        let r = ahss_report(&g("Z/4 x Z/2")).unwrap();
        assert!(r.e2.iter().filter(|e| e.q == 3).all(|e| e.group.is_trivial()));
    }

    #[test]
    fn quotient_injectivity_helper() {
        // projection F2^2 -> F2^1 onto the first coordinate, image spans e2
        let p = F2Matrix::from_rows(&[vec![1, 0]]);
        assert!(injective_on_quotient(&p, &[vec![false, true]], &[]));
        assert!(!injective_on_quotient(&p, &[], &[]));
    }
}
