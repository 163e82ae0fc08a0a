//! Homology of integer chain complexes with explicit cycle representatives.

pub mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{kernel, span_basis, ColumnEchelon, F2Matrix, IntMatrix};

pub use snf::{invariant_factors, smith_normal_form, SnfResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("degree {degree} needs boundaries up to {needed}, complex stops at {top}")]
    DegreeOutOfRange { degree: usize, needed: usize, top: usize },
    #[error("boundary {0} has the wrong shape")]
    Shape(usize),
    #[error("boundaries {0} and {} do not compose to zero", .0 + 1)]
    NotAComplex(usize),
    #[error("vector is not a cycle in degree {0}")]
    NotACycle(usize),
    #[error("homology results come from different degrees or complexes")]
    Incompatible,
}

/// Chain complex of free abelian groups. `boundary(n)` is the matrix of
/// `∂_n : C_n → C_{n−1}` acting on column vectors; coefficients are read
/// modulo `modulus` when it is nonzero.
#[derive(Debug, Clone)]
pub struct IntegerComplex {
    modulus: u64,
    ranks: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl IntegerComplex {
    /// `boundaries[k]` is `∂_{k+1}`.
    pub fn new(modulus: u64, ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, HomologyError> {
        if boundaries.len() + 1 != ranks.len() {
            return Err(HomologyError::Shape(boundaries.len()));
        }
        for (k, b) in boundaries.iter().enumerate() {
            if b.rows() != ranks[k] || b.cols() != ranks[k + 1] {
                return Err(HomologyError::Shape(k + 1));
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].mul(&boundaries[k]).is_zero_mod(modulus) {
                return Err(HomologyError::NotAComplex(k));
            }
        }
        let mut all = vec![IntMatrix::zeros(0, ranks[0])];
        all.extend(boundaries);
        Ok(IntegerComplex {
            modulus,
            ranks,
            boundaries: all,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
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

    /// `∂_n`; `∂_0` is the empty map to zero.
    pub fn boundary(&self, n: usize) -> &IntMatrix {
        &self.boundaries[n]
    }
}

/// Finitely generated abelian group `ℤ^free ⊕ ⊕ ℤ/tᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: vec![],
        }
    }

    pub fn elementary(dim: usize) -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: vec![2; dim],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Cardinality, `None` if infinite.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn from_orders(orders: &[BigInt]) -> Self {
        let mut g = AbelianGroup::trivial();
        for o in orders {
            if o.is_zero() {
                g.free_rank += 1;
            } else if !o.is_one() {
                g.torsion.push(o.to_u64().expect("torsion order fits in u64"));
            }
        }
        g.torsion.sort_unstable();
        g
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|&&x| x == t).count();
            parts.push(if run == 1 {
                format!("Z/{t}")
            } else {
                format!("(Z/{t})^{run}")
            });
            i += run;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology in one degree: the decomposition, a cycle representative per
/// summand (torsion summands first, in divisibility order, then free ones),
/// and the data needed to express arbitrary cycles in that basis.
#[derive(Debug, Clone)]
pub struct HomologyResult {
    pub degree: usize,
    pub modulus: u64,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub basis_lifts: Vec<Vec<BigInt>>,
    outgoing: IntMatrix,
    cycles: ColumnEchelon,
    u: IntMatrix,
    kept: Vec<usize>,
}

impl HomologyResult {
    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::from_orders(&self.orders())
    }

    /// Order of each summand, `0` for free summands.
    pub fn orders(&self) -> Vec<BigInt> {
        let mut o = self.torsion.clone();
        o.extend(std::iter::repeat(BigInt::zero()).take(self.free_rank));
        o
    }

    pub fn num_summands(&self) -> usize {
        self.basis_lifts.len()
    }

    pub fn chain_rank(&self) -> usize {
        self.outgoing.cols()
    }

    pub fn is_cycle(&self, x: &[BigInt]) -> bool {
        x.len() == self.chain_rank()
            && vec_zero_mod(&self.outgoing.mul_vec(x), self.modulus)
    }

    /// Coordinates of the class of the cycle `x`, reduced modulo the torsion
    /// orders.
    pub fn express(&self, x: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        if !self.is_cycle(x) {
            return Err(HomologyError::NotACycle(self.degree));
        }
        let y = self
            .cycles
            .solve(x)
            .map_err(|_| HomologyError::NotACycle(self.degree))?;
        let coords = self.u.mul_vec(&y);
        Ok(self
            .kept
            .iter()
            .zip(self.orders())
            .map(|(&t, o)| {
                if o.is_zero() {
                    coords[t].clone()
                } else {
                    coords[t].mod_floor(&o)
                }
            })
            .collect())
    }

    /// Whether the coordinate vector denotes the zero class.
    pub fn is_zero_class(&self, coords: &[BigInt]) -> bool {
        coords
            .iter()
            .zip(self.orders())
            .all(|(c, o)| if o.is_zero() { c.is_zero() } else { c.is_multiple_of(&o) })
    }
}

fn vec_zero_mod(v: &[BigInt], m: u64) -> bool {
    if m == 0 {
        v.iter().all(Zero::is_zero)
    } else {
        let m = BigInt::from(m);
        v.iter().all(|x| x.is_multiple_of(&m))
    }
}

fn unit(n: usize, i: usize, scale: &BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = scale.clone();
    v
}

pub fn homology_at(c: &IntegerComplex, n: usize) -> Result<HomologyResult, HomologyError> {
    if n + 1 > c.top() {
        return Err(HomologyError::DegreeOutOfRange {
            degree: n,
            needed: n + 1,
            top: c.top(),
        });
    }
    let m = c.modulus();
    let mbig = BigInt::from(m);
    let dim = c.rank(n);
    let out = c.boundary(n);
    let inc = c.boundary(n + 1);

    // Cycle lattice and generators of the boundary lattice inside it.
    let trivial_mod = m > 0 && out.is_zero_mod(m) && inc.is_zero_mod(m);
    let (zb, gens): (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) = if trivial_mod {
        // Both differentials vanish mod m: keep the chain basis verbatim.
        let id = (0..dim).map(|i| unit(dim, i, &BigInt::one())).collect();
        let g = (0..dim).map(|i| unit(dim, i, &mbig)).collect();
        (id, g)
    } else {
        let zb = if m == 0 {
            kernel(out)
        } else {
            let stacked = out.hstack(&IntMatrix::identity(out.rows()).scale(&mbig));
            let proj = kernel(&stacked)
                .into_iter()
                .map(|v| v[..dim].to_vec())
                .collect();
            span_basis(dim, proj)
        };
        let mut g = inc.columns();
        if m > 0 {
            g.extend((0..dim).map(|i| unit(dim, i, &mbig)));
        }
        (zb, g)
    };
    let z = zb.len();
    let cycles = ColumnEchelon::from_columns(dim, zb.clone(), true);
    let mut y = IntMatrix::zeros(z, gens.len());
    for (j, g) in gens.iter().enumerate() {
        let coords = cycles
            .solve(g)
            .expect("boundaries lie in the cycle lattice");
        for (i, x) in coords.into_iter().enumerate() {
            y.set(i, j, x);
        }
    }
    let s = smith_normal_form(&y);
    let mut kept = Vec::new();
    let mut torsion = Vec::new();
    let mut free_rank = 0;
    for t in 0..z {
        let d = s.diag.get(t).cloned().unwrap_or_default();
        if d.is_one() {
            continue;
        }
        if d.is_zero() {
            free_rank += 1;
        } else {
            torsion.push(d);
        }
        kept.push(t);
    }
    let zmat = IntMatrix::from_cols(dim, &zb);
    let lifts_all = zmat.mul(&s.u_inv);
    let basis_lifts = kept.iter().map(|&t| lifts_all.col(t)).collect();
    Ok(HomologyResult {
        degree: n,
        modulus: m,
        free_rank,
        torsion,
        basis_lifts,
        outgoing: out.clone(),
        cycles,
        u: s.u,
        kept,
    })
}

/// Matrix of reduction mod 2 from `hz` (integral) to `hz2` (mod-2
/// coefficients, same complex and degree): column `j` holds the mod-2
/// coordinates of the reduction of the `j`-th integral basis class.
pub fn reduction_map(hz: &HomologyResult, hz2: &HomologyResult) -> Result<F2Matrix, HomologyError> {
    if hz.degree != hz2.degree || hz.modulus != 0 || hz2.modulus != 2 || hz.chain_rank() != hz2.chain_rank() {
        return Err(HomologyError::Incompatible);
    }
    let mut m = F2Matrix::zeros(hz2.num_summands(), hz.num_summands());
    for (j, lift) in hz.basis_lifts.iter().enumerate() {
        let coords = hz2.express(lift)?;
        for (i, c) in coords.iter().enumerate() {
            m.set(i, j, c.is_odd());
        }
    }
    Ok(m)
}

/// Subgroup of a homology group `⊕ ℤ/oᵢ`, given by generators in summand
/// coordinates.
#[derive(Debug, Clone)]
pub struct Subgroup {
    orders: Vec<BigInt>,
    gens: Vec<Vec<BigInt>>,
}

impl Subgroup {
    pub fn new(orders: Vec<BigInt>, gens: Vec<Vec<BigInt>>) -> Self {
        Subgroup { orders, gens }
    }

    /// Kernel of the homomorphism to `F₂^k` given by `f` (columns indexed by
    /// summands). Requires `f` to be well defined on the group.
    pub fn kernel_of_f2_map(orders: Vec<BigInt>, f: &F2Matrix) -> Self {
        let n = orders.len();
        let mut gens: Vec<Vec<BigInt>> = f
            .kernel()
            .into_iter()
            .map(|v| v.into_iter().map(|b| BigInt::from(b as u8)).collect())
            .collect();
        gens.extend((0..n).map(|i| unit(n, i, &BigInt::from(2))));
        Subgroup { orders, gens }
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.gens
    }

    fn relations(&self) -> Vec<Vec<BigInt>> {
        let n = self.orders.len();
        (0..n)
            .filter(|&i| !self.orders[i].is_zero())
            .map(|i| unit(n, i, &self.orders[i]))
            .collect()
    }

    fn lattice(&self) -> Vec<Vec<BigInt>> {
        let mut all = self.gens.clone();
        all.extend(self.relations());
        all
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        crate::matrix::lattice_contains(self.orders.len(), &self.lattice(), x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    /// Isomorphism type of the subgroup.
    pub fn iso_type(&self) -> AbelianGroup {
        let n = self.orders.len();
        let basis = span_basis(n, self.lattice());
        let ech = ColumnEchelon::from_columns(n, basis.clone(), true);
        let rels = self.relations();
        let mut y = IntMatrix::zeros(basis.len(), rels.len());
        for (j, r) in rels.iter().enumerate() {
            let c = ech.solve(r).expect("relations lie in the subgroup lattice");
            for (i, x) in c.into_iter().enumerate() {
                y.set(i, j, x);
            }
        }
        let diag = invariant_factors(&y);
        let orders: Vec<BigInt> = (0..basis.len())
            .map(|t| diag.get(t).cloned().unwrap_or_default())
            .collect();
        AbelianGroup::from_orders(&orders)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_complex(n: i64, top: usize, modulus: u64) -> IntegerComplex {
        // ℤ ←0− ℤ ←n− ℤ ←0− ℤ ...
        let ranks = vec![1; top + 1];
        let b = (1..=top)
            .map(|k| IntMatrix::from_i64_rows(&[vec![if k % 2 == 0 { n } else { 0 }]]))
            .collect();
        IntegerComplex::new(modulus, ranks, b).unwrap()
    }

    #[test]
    fn cyclic_group_homology() {
        let c = cyclic_complex(4, 6, 0);
        assert_eq!(homology_at(&c, 0).unwrap().group().to_string(), "Z");
        for k in [1, 3, 5] {
            assert_eq!(homology_at(&c, k).unwrap().group().to_string(), "Z/4");
        }
        for k in [2, 4] {
            assert!(homology_at(&c, k).unwrap().group().is_trivial());
        }
        let c2 = cyclic_complex(4, 6, 2);
        for k in 0..6 {
            let h = homology_at(&c2, k).unwrap();
            assert_eq!(h.group(), AbelianGroup::elementary(1));
            assert_eq!(h.basis_lifts, vec![vec![BigInt::one()]]);
        }
        assert!(homology_at(&c, 6).is_err());
    }

    #[test]
    fn mod_m_coefficients() {
        let c = cyclic_complex(4, 4, 6);
        // H_1(Z/4; Z/6) = Z/2, H_2 = Z/2
        assert_eq!(homology_at(&c, 1).unwrap().group().to_string(), "Z/2");
        assert_eq!(homology_at(&c, 2).unwrap().group().to_string(), "Z/2");
        assert_eq!(homology_at(&c, 0).unwrap().group().to_string(), "Z/6");
    }

    #[test]
    fn express_and_reduce() {
        let c = cyclic_complex(4, 4, 0);
        let c2 = cyclic_complex(4, 4, 2);
        let h = homology_at(&c, 1).unwrap();
        let h2 = homology_at(&c2, 1).unwrap();
        let coords = h.express(&[BigInt::from(5)]).unwrap();
        assert!(h.is_zero_class(&[BigInt::from(4)]));
        assert_eq!(coords.len(), 1);
        let r = reduction_map(&h, &h2).unwrap();
        assert_eq!(r, F2Matrix::from_rows(&[vec![1]]));
    }

    #[test]
    fn subgroup_types() {
        let orders = vec![BigInt::from(8), BigInt::from(2)];
        let f = F2Matrix::from_rows(&[vec![1, 0]]);
        let k = Subgroup::kernel_of_f2_map(orders.clone(), &f);
        assert_eq!(k.iso_type().to_string(), "Z/2 + Z/4");
        let expect = Subgroup::new(
            orders,
            vec![
                vec![BigInt::from(2), BigInt::zero()],
                vec![BigInt::zero(), BigInt::one()],
            ],
        );
        assert!(k.same_as(&expect));
    }

    #[test]
    fn display_groups() {
        let g = AbelianGroup {
            free_rank: 1,
            torsion: vec![2, 2, 8],
        };
        assert_eq!(g.to_string(), "Z + (Z/2)^2 + Z/8");
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
    }
}
