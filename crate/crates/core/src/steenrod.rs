//! Mod-2 cohomology of products of cyclic groups, `Sq²` by the Cartan
//! formula, and the `d²` differentials `Sq₂∘red₂` of the spin bordism
//! spectral sequence.
//!
//! A cohomology monomial is recorded by its per-factor degrees. For a factor
//! of order 2 degree `p` is `αᵖ`; for order divisible by 4 it is `α^ε β^m`
//! with `p = ε + 2m`; a `ℤ` factor only has degrees 0 and 1. The monomial of
//! multidegree `P` is dual to the chain-basis element labelled `P`, which is
//! what lets the transpose of `Sq²` act on mod-2 chains.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::{apply_coefficients, multidegrees, standard_resolution, ChainError, Resolution};
use crate::groups::{Factor, GroupSpec};
use crate::homology::{homology_at, HomologyError, HomologyResult, Subgroup};
use crate::matrix::F2Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SteenrodError {
    #[error("unsupported group {0}: mod-2 cohomology is modelled for abelian 2-groups times at most one Z")]
    Unsupported(String),
    #[error("d2 is only available from degree 4 or 5, not {0}")]
    Degree(usize),
    #[error("mod-2 differentials of {0} do not vanish; strip odd factors first")]
    NonzeroMod2(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub degrees: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.degrees.iter().sum()
    }

    /// Readable name, e.g. `α1β2²` for multidegree (1, 4) over ℤ/2 × ℤ/4.
    pub fn render(&self, factors: &[Factor]) -> String {
        let mut out = String::new();
        for (k, (&p, f)) in self.degrees.iter().zip(factors).enumerate() {
            if p == 0 {
                continue;
            }
            let i = k + 1;
            let power = |e: u32| if e == 1 { String::new() } else { format!("^{e}") };
            match f {
                Factor::Cyclic(2) | Factor::Infinite => out.push_str(&format!("α{i}{}", power(p))),
                Factor::Cyclic(_) => {
                    if p % 2 == 1 {
                        out.push_str(&format!("α{i}"));
                    }
                    if p >= 2 {
                        out.push_str(&format!("β{i}{}", power(p / 2)));
                    }
                }
            }
        }
        if out.is_empty() {
            "1".into()
        } else {
            out
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.degrees)
    }
}

fn check_supported(g: &GroupSpec) -> Result<&[Factor], SteenrodError> {
    match g {
        GroupSpec::Abelian(fs) if fs.iter().all(|f| match f {
            Factor::Infinite => true,
            Factor::Cyclic(n) => n.is_power_of_two(),
        }) =>
        {
            Ok(fs)
        }
        _ => Err(SteenrodError::Unsupported(g.to_string())),
    }
}

pub fn cohomology_basis(g: &GroupSpec, d: u32) -> Result<Vec<Monomial>, SteenrodError> {
    let fs = check_supported(g)?;
    Ok(multidegrees(fs, d)
        .into_iter()
        .map(|degrees| Monomial { degrees })
        .collect())
}

fn binom_odd(n: u32, k: u32) -> bool {
    // Lucas: C(n, k) is odd iff k's bits are a subset of n's
    k <= n && (n & k) == k
}

/// Coefficient of `Sq^i` on one factor's degree-`p` class (the target is the
/// degree-`p+i` class).
fn factor_sq(f: Factor, p: u32, i: u32) -> bool {
    match f {
        _ if i == 0 => true,
        Factor::Infinite => false,
        Factor::Cyclic(2) => binom_odd(p, i),
        Factor::Cyclic(_) => i % 2 == 0 && binom_odd(p / 2, i / 2),
    }
}

/// `Sq^total` of a monomial as a sum of monomials (Cartan formula).
pub fn sq(factors: &[Factor], m: &Monomial, total: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    let r = factors.len();
    let mut split = vec![0u32; r];
    fn rec(
        k: usize,
        left: u32,
        factors: &[Factor],
        m: &Monomial,
        split: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if k == factors.len() {
            if left != 0 {
                return;
            }
            let nonzero = (0..factors.len()).all(|j| factor_sq(factors[j], m.degrees[j], split[j]));
            if !nonzero {
                return;
            }
            let target = Monomial {
                degrees: m.degrees.iter().zip(split.iter()).map(|(p, i)| p + i).collect(),
            };
            if let Some(pos) = out.iter().position(|x| *x == target) {
                out.remove(pos);
            } else {
                out.push(target);
            }
            return;
        }
        for i in 0..=left {
            split[k] = i;
            rec(k + 1, left - i, factors, m, split, out);
        }
        split[k] = 0;
    }
    rec(0, total, factors, m, &mut split, &mut out);
    out
}

/// Matrix of `Sq² : H^d → H^{d+2}` in monomial bases (rows index the target).
pub fn sq2_matrix(g: &GroupSpec, d: u32) -> Result<F2Matrix, SteenrodError> {
    let fs = check_supported(g)?;
    let src = cohomology_basis(g, d)?;
    let tgt = cohomology_basis(g, d + 2)?;
    let mut m = F2Matrix::zeros(tgt.len(), src.len());
    for (j, mono) in src.iter().enumerate() {
        for image in sq(fs, mono, 2) {
            let i = tgt.iter().position(|t| *t == image).expect("image has the right degree");
            m.flip(i, j);
        }
    }
    Ok(m)
}

/// Dual operation `Sq₂ : H_{d+2}(−;ℤ/2) → H_d(−;ℤ/2)` on chain bases.
pub fn sq2_dual(g: &GroupSpec, d: u32) -> Result<F2Matrix, SteenrodError> {
    Ok(sq2_matrix(g, d)?.transpose())
}

/// Mod-2 homology of a supported group is its chain basis: all mod-2
/// differentials vanish. Checked, not assumed.
pub fn check_mod2_trivial(r: &Resolution) -> Result<(), SteenrodError> {
    let c = apply_coefficients(r, 2);
    for n in 1..=c.top() {
        if !c.boundary(n).is_zero_mod(2) {
            return Err(SteenrodError::NonzeroMod2(r.group().to_string()));
        }
    }
    Ok(())
}

/// `d²_{p,0} = Sq₂∘red₂ : H_p(G;ℤ) → H_{p−2}(G;ℤ/2)`.
#[derive(Debug, Clone)]
pub struct D2Map {
    pub degree: usize,
    /// Integral homology of the source, whose summands index the columns.
    pub source: HomologyResult,
    /// `red₂` into the mod-2 chain basis of degree `p`.
    pub reduction: F2Matrix,
    /// Rows: mod-2 chain basis in degree `p − 2`.
    pub matrix: F2Matrix,
}

impl D2Map {
    /// Basis of the image as mod-2 vectors in degree `p − 2`.
    pub fn image(&self) -> Vec<Vec<bool>> {
        self.matrix.column_space()
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::kernel_of_f2_map(self.source.orders(), &self.matrix)
    }
}

/// Reduction mod 2 from integral homology to the mod-2 chain basis; valid
/// because the mod-2 differentials vanish.
pub fn reduction_to_chain_basis(h: &HomologyResult) -> F2Matrix {
    let n = h.chain_rank();
    let mut m = F2Matrix::zeros(n, h.num_summands());
    for (j, lift) in h.basis_lifts.iter().enumerate() {
        for (i, x) in lift.iter().enumerate() {
            if x.bit(0) {
                m.set(i, j, true);
            }
        }
    }
    m
}

pub fn d2_differential(g: &GroupSpec, p: usize) -> Result<D2Map, SteenrodError> {
    if p != 4 && p != 5 {
        return Err(SteenrodError::Degree(p));
    }
    check_supported(g)?;
    let r = standard_resolution(g, p + 1)?;
    check_mod2_trivial(&r)?;
    let hz = homology_at(&apply_coefficients(&r, 0), p)?;
    let reduction = reduction_to_chain_basis(&hz);
    let matrix = sq2_dual(g, p as u32 - 2)?.mul(&reduction);
    Ok(D2Map {
        degree: p,
        source: hz,
        reduction,
        matrix,
    })
}

/// Express a mod-2 vector on the chain basis as a list of monomial names.
pub fn render_class(g: &GroupSpec, degree: u32, v: &[bool]) -> String {
    let fs = g.factors();
    let basis = multidegrees(fs, degree);
    let terms: Vec<String> = basis
        .iter()
        .zip(v)
        .filter(|(_, &b)| b)
        .map(|(d, _)| Monomial { degrees: d.clone() }.render(fs))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Integer vector helper used by callers building classes from monomials.
pub fn indicator(len: usize, idx: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); len];
    v[idx] = BigInt::from(1);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn mono(d: &[u32]) -> Monomial {
        Monomial { degrees: d.to_vec() }
    }

    #[test]
    fn basis_examples() {
        let b = cohomology_basis(&g("Z/2 x Z/2"), 3).unwrap();
        assert_eq!(b.len(), 4);
        let b = cohomology_basis(&g("Z x Z/4"), 3).unwrap();
        let names: Vec<String> = b.iter().map(|m| m.render(g("Z x Z/4").factors())).collect();
        assert_eq!(names, vec!["α1β2", "α2β2"]);
        assert_eq!(cohomology_basis(&g("Z/8"), 0).unwrap(), vec![mono(&[0])]);
        assert!(cohomology_basis(&g("Q8"), 1).is_err());
        assert!(cohomology_basis(&g("Z/6"), 1).is_err());
    }

    #[test]
    fn generator_rules() {
        let two = [Factor::Cyclic(2)];
        let four = [Factor::Cyclic(4)];
        // Sq¹α = α² at order 2, 0 at order 4; Sq²β = β²
        assert_eq!(sq(&two, &mono(&[1]), 1), vec![mono(&[2])]);
        assert!(sq(&four, &mono(&[1]), 1).is_empty());
        assert_eq!(sq(&four, &mono(&[2]), 2), vec![mono(&[4])]);
        assert!(sq(&four, &mono(&[2]), 1).is_empty());
        // Sq²(α^i) = α^{i+2} iff i ≡ 2, 3 mod 4
        for i in 0..12 {
            let hit = !sq(&two, &mono(&[i]), 2).is_empty();
            assert_eq!(hit, i % 4 == 2 || i % 4 == 3, "i = {i}");
        }
        // Sq² of a degree-one class vanishes
        assert!(sq(&[Factor::Infinite], &mono(&[1]), 2).is_empty());
    }

    #[test]
    fn three_factor_sq2() {
        let fs = [Factor::Cyclic(2); 3];
        let mut got = sq(&fs, &mono(&[1, 1, 1]), 2);
        got.sort_by(|a, b| b.degrees.cmp(&a.degrees));
        assert_eq!(got, vec![mono(&[2, 2, 1]), mono(&[2, 1, 2]), mono(&[1, 2, 2])]);
        let fs = [Factor::Cyclic(2), Factor::Cyclic(2), Factor::Cyclic(4)];
        assert_eq!(sq(&fs, &mono(&[1, 1, 1]), 2), vec![mono(&[2, 2, 1])]);
    }

    #[test]
    fn cyclic_d2_is_surjective() {
        for s in ["Z/2", "Z/4", "Z/8"] {
            let d = d2_differential(&g(s), 5).unwrap();
            assert_eq!(d.matrix.rank(), 1, "{s}");
        }
    }

    #[test]
    fn sq2_is_linear_and_cartan_consistent() {
        // Cartan: Sq²(xy) = Sq²x·y + Sq¹x·Sq¹y + x·Sq²y for monomials x, y
        let fs = [Factor::Cyclic(2), Factor::Cyclic(4), Factor::Infinite];
        let mul = |a: &Monomial, b: &Monomial| Monomial {
            degrees: a.degrees.iter().zip(&b.degrees).map(|(x, y)| x + y).collect(),
        };
        let valid = |m: &Monomial| m.degrees[2] <= 1;
        let prod = |xs: &[Monomial], ys: &[Monomial]| {
            let mut out: Vec<Monomial> = Vec::new();
            for x in xs {
                for y in ys {
                    // products must respect the ring relations
                    let z = mul(x, y);
                    let zero = !valid(&z) || (x.degrees[1] % 2 == 1 && y.degrees[1] % 2 == 1);
                    if zero {
                        continue;
                    }
                    if let Some(p) = out.iter().position(|w| *w == z) {
                        out.remove(p);
                    } else {
                        out.push(z);
                    }
                }
            }
            out
        };
        let all: Vec<Monomial> = (0..4).flat_map(|d| multidegrees(&fs, d)).map(|d| Monomial { degrees: d }).collect();
        for x in &all {
            for y in &all {
                let xy = mul(x, y);
                if !valid(&xy) || (x.degrees[1] % 2 == 1 && y.degrees[1] % 2 == 1) {
                    continue;
                }
                let mut lhs = sq(&fs, &xy, 2);
                let mut rhs: Vec<Monomial> = Vec::new();
                for (i, j) in [(2, 0), (1, 1), (0, 2)] {
                    for m in prod(&sq(&fs, x, i), &sq(&fs, y, j)) {
                        if let Some(p) = rhs.iter().position(|w| *w == m) {
                            rhs.remove(p);
                        } else {
                            rhs.push(m);
                        }
                    }
                }
                lhs.sort_by(|a, b| a.degrees.cmp(&b.degrees));
                rhs.sort_by(|a, b| a.degrees.cmp(&b.degrees));
                assert_eq!(lhs, rhs, "x = {x}, y = {y}");
            }
        }
    }

    fn chain(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn z_times_z2() {
        let grp = g("Z x Z/2");
        // Sq²: H³ → H⁵ is the identity, H² → H⁴ kills the mixed class
        assert_eq!(sq2_matrix(&grp, 3).unwrap(), F2Matrix::identity(2));
        assert_eq!(sq2_matrix(&grp, 2).unwrap().to_rows(), vec![vec![0, 0], vec![0, 1]]);
        let d5 = d2_differential(&grp, 5).unwrap();
        assert_eq!(d5.source.group().to_string(), "Z/2");
        assert_eq!(render_class(&grp, 3, &d5.image()[0]), "α2^3");
        assert_eq!(d5.kernel().iso_type().to_string(), "0");
        let d4 = d2_differential(&grp, 4).unwrap();
        assert_eq!(d4.source.group().to_string(), "Z/2");
        assert!(d4.matrix.is_zero());
    }

    #[test]
    fn z8_times_z2_kernel() {
        let grp = g("Z/8 x Z/2");
        let d5 = d2_differential(&grp, 5).unwrap();
        assert_eq!(d5.source.group().to_string(), "(Z/2)^3 + Z/8");
        let k = d5.kernel();
        assert_eq!(k.iso_type().to_string(), "Z/2 + Z/4");
        let h = &d5.source;
        let gens = vec![
            h.express(&chain(&[2, 0, 0, 0, 0, 0])).unwrap(),
            h.express(&chain(&[0, 0, 0, 1, 4, 0])).unwrap(),
        ];
        assert!(k.same_as(&Subgroup::new(h.orders(), gens)));
    }

    #[test]
    fn odd_factors_rejected() {
        assert!(matches!(d2_differential(&g("Z/3"), 5), Err(SteenrodError::Unsupported(_))));
        assert!(matches!(d2_differential(&g("Z/2"), 3), Err(SteenrodError::Degree(3))));
    }
}
