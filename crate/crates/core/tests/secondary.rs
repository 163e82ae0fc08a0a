use obstruction_core::amap::{check_condition, gamma_class, AmapContext, Evidence, Holds, SecondaryReport};
use obstruction_core::forms::SearchOptions;
use obstruction_core::groups::GroupSpec;

fn g(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

fn report(s: &str) -> SecondaryReport {
    check_condition(&g(s), &SearchOptions::default()).unwrap()
}

fn gamma_label(s: &str) -> String {
    let grp = g(s);
    let ctx = AmapContext::new(&grp, 0).unwrap();
    let gamma = gamma_class(ctx.resolution()).unwrap();
    let names = obstruction_core::amap::basis_names(ctx.resolution(), 3);
    obstruction_core::amap::class_label(&names, &gamma)
}

fn gamma_in_image(r: &SecondaryReport, label: &str) -> bool {
    let idx = r.basis.iter().position(|n| n == label).unwrap();
    let mut target = vec![0u8; r.h3_dim];
    target[idx] = 1;
    // image_basis is in echelon form over F2; test membership by brute force
    let k = r.image_basis.len();
    (0..1usize << k).any(|mask| {
        let mut v = vec![0u8; r.h3_dim];
        for (b, vec) in r.image_basis.iter().enumerate() {
            if mask >> b & 1 == 1 {
                for (x, y) in v.iter_mut().zip(vec) {
                    *x ^= y;
                }
            }
        }
        v == target
    })
}

#[test]
fn two_factor_groups_follow_exponent_rule() {
    for k1 in 1..=3u32 {
        for k2 in 1..=3u32 {
            let s = format!("Z/{} x Z/{}", 1 << k1, 1 << k2);
            let r = report(&s);
            let label = gamma_label(&s);
            let c = r.class(&label).unwrap();
            assert_eq!(c.verdict == "even", k1 <= k2, "{s}: {}", c.verdict);
            assert_eq!(c.verdict == "odd", k1 > k2, "{s}");
            assert_eq!(gamma_in_image(&r, &label), k1 <= k2, "{s}");
            assert_eq!(r.condition_holds, Holds::Yes, "{s}");
        }
    }
}

#[test]
fn quaternion_groups() {
    for s in ["Q8", "Q16"] {
        let r = report(s);
        assert_eq!(r.h3_dim, 1);
        assert_eq!(r.classes[0].verdict, "odd");
        assert!(r.kernel_basis.is_empty());
        assert_eq!(r.condition_holds, Holds::Yes);
    }
}

#[test]
fn three_factor_groups() {
    let r = report("Z/2 x Z/2 x Z/2");
    let label = gamma_label("Z/2 x Z/2 x Z/2");
    assert_eq!(r.class(&label).unwrap().verdict, "even");
    assert!(gamma_in_image(&r, &label));
    assert_eq!(r.condition_holds, Holds::Yes);

    let r = report("Z/2 x Z/2 x Z/4");
    let label = gamma_label("Z/2 x Z/2 x Z/4");
    assert_eq!(r.class(&label).unwrap().verdict, "odd");
    assert!(!gamma_in_image(&r, &label));
    assert_eq!(r.condition_holds, Holds::Yes);
}

#[test]
fn groups_with_an_infinite_factor() {
    for (s, m) in [("Z x Z/2", 2), ("Z x Z/4", 3)] {
        let r = report(s);
        let label = gamma_label(s);
        let c = r.class(&label).unwrap();
        assert_eq!(c.verdict, "odd", "{s}");
        let Evidence::Certificate { kind, detail } = &c.witness_or_certificate else { panic!() };
        assert_eq!(kind, "quotient-odd");
        assert!(detail.contains(&format!("Z -> Z/2^{m}")), "{detail}");
        assert!(!gamma_in_image(&r, &label));
        // the class from the finite factor alone is even
        let other = r.basis.iter().find(|n| **n != label).unwrap();
        assert_eq!(r.class(other).unwrap().verdict, "even");
        assert_eq!(r.condition_holds, Holds::Yes, "{s}");
    }
}
