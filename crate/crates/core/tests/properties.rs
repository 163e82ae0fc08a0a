//! Invariant-based property suites. No hand-computed values appear here.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use obstruction_core::amap::{lift_of, AmapContext};
use obstruction_core::chains::standard_resolution;
use obstruction_core::forms::{decide_even, FormMatrix, SearchOptions, TateVerdict};
use obstruction_core::gamma::{gamma_action, gamma_rank, gamma_v, symmetric_tensor_image};
use obstruction_core::groupring::{RingElement, RingMatrix};
use obstruction_core::groups::{GroupElement, GroupSpec};
use obstruction_core::homology::snf::{invariant_factors, smith_normal_form};
use obstruction_core::matrix::IntMatrix;
use proptest::prelude::*;

fn g(s: &str) -> Arc<GroupSpec> {
    Arc::new(s.parse().unwrap())
}

// ---------- Smith normal form against determinantal divisors ----------

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Invariant factors from gcds of k×k minors: `s_k = d_k / d_{k-1}`.
fn determinantal_factors(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.rows().min(m.cols());
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=n {
        let mut d = BigInt::zero();
        for rows in subsets(m.rows(), k) {
            for cols in subsets(m.cols(), k) {
                let sub: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| i64::try_from(m.get(i, j)).unwrap()).collect())
                    .collect();
                d = d.gcd(&IntMatrix::from_i64_rows(&sub).determinant());
            }
        }
        if d.is_zero() {
            out.resize(n, BigInt::zero());
            return out;
        }
        out.push(&d / &prev);
        prev = d;
    }
    out
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_matches_determinantal_divisors(rows in small_matrix()) {
        let m = IntMatrix::from_i64_rows(&rows);
        let snf = smith_normal_form(&m);
        let diag: Vec<BigInt> = snf.diag.iter().map(|x| x.abs()).collect();
        prop_assert_eq!(&diag, &determinantal_factors(&m));
        prop_assert_eq!(&diag, &invariant_factors(&m).iter().map(|x| x.abs()).collect::<Vec<_>>());
        // the transforms really diagonalize: U·M·V = D
        let d = snf.u.mul(&m).mul(&snf.v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j { snf.diag[i].clone() } else { BigInt::zero() };
                prop_assert_eq!(d.get(i, j), &expect);
            }
        }
        prop_assert!(snf.u.mul(&snf.u_inv) == IntMatrix::identity(m.rows()));
    }
}

// ---------- group ring ----------

const RING_GROUPS: [&str; 5] = ["Z/4 x Z/2", "Q8", "Z/3", "Z x Z/2", "Q16"];

fn pool(grp: &GroupSpec) -> Vec<GroupElement> {
    grp.elements().unwrap_or_else(|_| grp.elements_in_window(2))
}

fn ring_element(grp: &Arc<GroupSpec>, coeffs: &[i64]) -> RingElement {
    let elems = pool(grp);
    RingElement::from_terms(grp, elems.into_iter().zip(coeffs.iter().map(|&c| BigInt::from(c))))
}

fn ring_inputs() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    let c = || prop::collection::vec(-3i64..=3, 40);
    (0..RING_GROUPS.len(), c(), c(), c())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn involution_is_an_anti_automorphism((k, a, b, c) in ring_inputs()) {
        let grp = g(RING_GROUPS[k]);
        let (x, y, z) = (ring_element(&grp, &a), ring_element(&grp, &b), ring_element(&grp, &c));
        let xy = x.checked_mul(&y).unwrap();
        prop_assert_eq!(xy.involute(), y.involute().checked_mul(&x.involute()).unwrap());
        prop_assert_eq!(x.involute().involute(), x.clone());
        prop_assert_eq!(x.checked_add(&y).unwrap().involute(), x.involute().checked_add(&y.involute()).unwrap());
        // associativity and distributivity
        prop_assert_eq!(xy.checked_mul(&z).unwrap(), x.checked_mul(&y.checked_mul(&z).unwrap()).unwrap());
        prop_assert_eq!(
            x.checked_mul(&y.checked_add(&z).unwrap()).unwrap(),
            xy.checked_add(&x.checked_mul(&z).unwrap()).unwrap()
        );
        // augmentation is a ring map fixed by the involution
        prop_assert_eq!(xy.augment(0), x.augment(0) * y.augment(0));
        prop_assert_eq!(x.involute().augment(0), x.augment(0));
    }

    #[test]
    fn group_axioms((k, a, b, c) in ring_inputs()) {
        let grp = g(RING_GROUPS[k]);
        let elems = pool(&grp);
        let pick = |v: &[i64]| elems[v[0].unsigned_abs() as usize * 7 % elems.len()].clone();
        let (x, y, z) = (pick(&a), pick(&b), pick(&c));
        let e = grp.identity();
        prop_assert_eq!(grp.mul(&grp.mul(&x, &y), &z), grp.mul(&x, &grp.mul(&y, &z)));
        prop_assert_eq!(grp.mul(&x, &e), x.clone());
        prop_assert_eq!(grp.mul(&e, &x), x.clone());
        prop_assert_eq!(grp.mul(&x, &grp.inv(&x)), e.clone());
        prop_assert_eq!(grp.inv(&grp.mul(&x, &y)), grp.mul(&grp.inv(&y), &grp.inv(&x)));
        prop_assert!(grp.contains(&grp.mul(&x, &y)));
        prop_assert_eq!(grp.parse_element(&grp.element_token(&x)).unwrap(), x);
    }
}

// ---------- resolutions ----------

fn abelian_spec() -> impl Strategy<Value = String> {
    let factor = prop_oneof![Just("Z/2"), Just("Z/3"), Just("Z/4"), Just("Z/8")];
    (prop::collection::vec(factor, 1..=3), any::<bool>()).prop_map(|(fs, infinite)| {
        let mut parts: Vec<&str> = fs;
        if infinite {
            parts.insert(0, "Z");
        }
        parts.join(" x ")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn resolutions_are_complexes(spec in abelian_spec()) {
        let grp: GroupSpec = spec.parse().unwrap();
        let r = standard_resolution(&grp, 5).unwrap();
        prop_assert!(r.check_complex().is_ok(), "{}", spec);
    }
}

#[test]
fn named_resolutions_are_complexes() {
    for s in ["1", "Z", "Z/2", "Q8", "Q16", "Q32", "Z/3 x Z/4", "Z x Z/4"] {
        let r = standard_resolution(&s.parse().unwrap(), 5).unwrap();
        r.check_complex().unwrap_or_else(|e| panic!("{s}: {e}"));
    }
}

// ---------- the map A ----------

fn random_lift(dim: usize, bits: u64, spread: &[i64]) -> Vec<BigInt> {
    (0..dim).map(|i| BigInt::from((bits >> i & 1) as i64 + 2 * spread[i % spread.len()])).collect()
}

fn is_even(f: &FormMatrix) -> bool {
    match decide_even(f, &SearchOptions::default()).unwrap() {
        TateVerdict::Even { witness } => {
            obstruction_core::forms::verify_witness(&f.module, &f.entries, &witness).unwrap();
            true
        }
        _ => false,
    }
}

const A_GROUPS: [&str; 4] = ["Z/4", "Z/2 x Z/2", "Z/4 x Z/2", "Q8"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn a_is_additive_in_tate(k in 0..A_GROUPS.len(), s in any::<u64>(), t in any::<u64>(), spread in prop::collection::vec(-2i64..=2, 4)) {
        let ctx = AmapContext::new(&A_GROUPS[k].parse().unwrap(), 0).unwrap();
        let n = ctx.h3_dim();
        let c1 = random_lift(n, s, &spread);
        let c2 = random_lift(n, t, &spread[1..]);
        let sum: Vec<BigInt> = c1.iter().zip(&c2).map(|(a, b)| a + b).collect();
        let (a1, a2, a12) = (ctx.a_of_lift(&c1).unwrap(), ctx.a_of_lift(&c2).unwrap(), ctx.a_of_lift(&sum).unwrap());
        // exact identity A(c+c') - A(c) - A(c') = w†w' + w'†w
        let (w1, w2) = (ctx.boundary_image(&c1).unwrap(), ctx.boundary_image(&c2).unwrap());
        let grp = ctx.group().clone();
        let col = |w: &[RingElement]| RingMatrix::from_rows(&grp, vec![w.to_vec()]);
        let cross = col(&w1).dagger().checked_mul(&col(&w2)).unwrap();
        let cross = cross.checked_add(&cross.dagger()).unwrap();
        let diff = a12.checked_sub(&a1).unwrap().checked_sub(&a2).unwrap();
        prop_assert_eq!(&diff.entries, &cross);
        prop_assert!(is_even(&diff));
    }

    #[test]
    fn a_is_independent_of_the_lift(k in 0..A_GROUPS.len(), s in any::<u64>(), spread in prop::collection::vec(-2i64..=2, 4), y in prop::collection::vec(-1i64..=1, 16)) {
        let grp: GroupSpec = A_GROUPS[k].parse().unwrap();
        let ctx = AmapContext::new(&grp, 0).unwrap();
        let n = ctx.h3_dim();
        let base: Vec<bool> = (0..n).map(|i| s >> i & 1 == 1).collect();
        let a0 = ctx.a_of_lift(&lift_of(&base)).unwrap();
        // lift perturbed by even integers
        let even = random_lift(n, s, &spread);
        prop_assert!(is_even(&ctx.a_of_lift(&even).unwrap().checked_sub(&a0).unwrap()));
        // lift perturbed by a mod-2 boundary from degree 4
        let d4 = ctx.resolution().boundary(4).augment(0);
        let mut moved: Vec<BigInt> = lift_of(&base);
        for (i, coeff) in y.iter().enumerate().take(d4.rows()) {
            for j in 0..n {
                moved[j] += coeff * d4.get(i, j);
            }
        }
        prop_assert!(is_even(&ctx.a_of_lift(&moved).unwrap().checked_sub(&a0).unwrap()));
    }
}

// ---------- evenness ----------

fn sym_form(grp: &Arc<GroupSpec>, seeds: &[i64]) -> RingMatrix {
    let n = 2;
    let elems = pool(grp);
    let mut q = RingMatrix::zeros(grp, n, n);
    for i in 0..n {
        for j in 0..n {
            let k = (i * n + j) * 3;
            let e = RingElement::from_terms(
                grp,
                (0..3).map(|t| (elems[(seeds[k + t].unsigned_abs() as usize) % elems.len()].clone(), BigInt::from(seeds[k + t]))),
            );
            q.set(i, j, e);
        }
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Adding an even form `S + S†` never changes the verdict, and `S + S†`
    /// alone is even with a witness that verifies.
    #[test]
    fn tate_class_is_invariant(k in 0..3usize, l in prop::collection::vec(-3i64..=3, 12), s in prop::collection::vec(-3i64..=3, 12)) {
        let grp = g(["Z/4", "Q8", "Z/2 x Z/2"][k]);
        let module = Arc::new(obstruction_core::forms::FPModule::new(2, RingMatrix::zeros(&grp, 0, 2)).unwrap());
        let q = sym_form(&grp, &l);
        let herm = q.checked_add(&q.dagger()).unwrap();
        // an arbitrary hermitian form: off-diagonal from q, diagonal of q + q† plus a self-adjoint unit
        let mut lam = herm.clone();
        let unit = RingElement::from_int(&grp, l[0].rem_euclid(2));
        lam.set(0, 0, lam.get(0, 0).checked_add(&unit).unwrap());
        let lam = FormMatrix::new(module.clone(), lam).unwrap();
        let sv = sym_form(&grp, &s);
        let shifted = FormMatrix::new(module.clone(), lam.entries.checked_add(&sv.checked_add(&sv.dagger()).unwrap()).unwrap()).unwrap();
        let opts = SearchOptions::default();
        let (v1, v2) = (decide_even(&lam, &opts).unwrap(), decide_even(&shifted, &opts).unwrap());
        prop_assert_eq!(v1.label(), v2.label());
        prop_assert_eq!(v1.is_even(), l[0].rem_euclid(2) == 0);
        prop_assert!(is_even(&FormMatrix::new(module, herm).unwrap()));
    }
}

#[test]
fn pushforward_of_an_even_form_is_even() {
    use obstruction_core::groups::{quotient_surjection, Factor};
    let src: GroupSpec = "Z/8 x Z/4".parse().unwrap();
    let ctx = AmapContext::new(&src, 0).unwrap();
    let phi = quotient_surjection(&src, &[Factor::Cyclic(4), Factor::Cyclic(2)]).unwrap();
    let opts = SearchOptions::default();
    for bits in 1u64..(1 << ctx.h3_dim()) {
        let coords: Vec<bool> = (0..ctx.h3_dim()).map(|i| bits >> i & 1 == 1).collect();
        let f = ctx.a_of_class(&coords).unwrap();
        if let TateVerdict::Even { witness } = decide_even(&f, &opts).unwrap() {
            let pushed = f.pushforward(&phi);
            let q = witness.pushforward(&phi);
            obstruction_core::forms::verify_witness(&pushed.module, &pushed.entries, &q).unwrap();
            assert!(decide_even(&pushed, &opts).unwrap().is_even());
        }
    }
}

// ---------- Γ ----------

fn lattice_vec(r: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, r)
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_quadratic_map(r in 1usize..=5, seed in prop::collection::vec(-6i64..=6, 5), rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 5)) {
        let x = big(&seed[..r]);
        let neg: Vec<BigInt> = x.iter().map(|a| -a).collect();
        prop_assert_eq!(gamma_v(&neg), gamma_v(&x));
        prop_assert_eq!(gamma_rank(r), r * (r + 1) / 2);

        // v(x) maps to x ⊗ x among symmetric tensors
        let t = symmetric_tensor_image(r);
        let image = t.mul_vec(&gamma_v(&x));
        for i in 0..r {
            for j in 0..r {
                prop_assert_eq!(&image[i * r + j], &(&x[i] * &x[j]));
            }
        }
        let rank = invariant_factors(&t).iter().filter(|d| !d.is_zero()).count();
        prop_assert_eq!(rank, gamma_rank(r));

        // naturality: Γ(ρ) v(x) = v(ρ x)
        let rho = IntMatrix::from_i64_rows(&rows[..r].iter().map(|row| row[..r].to_vec()).collect::<Vec<_>>());
        prop_assert_eq!(gamma_action(&rho).mul_vec(&gamma_v(&x)), gamma_v(&rho.mul_vec(&x)));
    }

    #[test]
    fn gamma_is_functorial(r in 1usize..=4, a in prop::collection::vec(-3i64..=3, 16), b in prop::collection::vec(-3i64..=3, 16)) {
        let m = |v: &[i64]| IntMatrix::from_i64_rows(&(0..r).map(|i| v[i * r..(i + 1) * r].to_vec()).collect::<Vec<_>>());
        let (p, q) = (m(&a), m(&b));
        prop_assert_eq!(gamma_action(&p.mul(&q)), gamma_action(&p).mul(&gamma_action(&q)));
        prop_assert_eq!(gamma_action(&IntMatrix::identity(r)), IntMatrix::identity(gamma_rank(r)));
        let _ = lattice_vec(r);
    }
}

// ---------- serialization ----------

#[test]
fn reports_round_trip_through_json() {
    use obstruction_core::amap::{amap_report, check_condition};
    use obstruction_core::gamma::verify_tertiary;
    use obstruction_core::report::{ahss_report, full_report};
    let opts = SearchOptions::default();
    for s in ["Z/2", "Z/4 x Z/2", "Q8", "Z x Z/2"] {
        let grp: GroupSpec = s.parse().unwrap();
        let r = check_condition(&grp, &opts).unwrap();
        assert_eq!(serde_json::from_str::<obstruction_core::amap::SecondaryReport>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
        let r = ahss_report(&grp).unwrap();
        assert_eq!(serde_json::from_str::<obstruction_core::report::AhssReport>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
        let r = verify_tertiary(&grp).unwrap();
        assert_eq!(serde_json::from_str::<obstruction_core::gamma::TertiaryReport>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
        let r = amap_report(&grp).unwrap();
        assert_eq!(serde_json::from_str::<obstruction_core::amap::AmapReport>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
        let r = full_report(&grp, &opts).unwrap();
        let again = full_report(&grp, &opts).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
        assert_eq!(serde_json::from_str::<obstruction_core::report::FullReport>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
    }
}
