use logres_engine::{parse, q, Ideal, Membership, Module, Monomial, Poly, Vector};
use proptest::prelude::*;

const N: usize = 3;

fn poly_strategy(max_terms: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec(((-3i64..=3), prop::collection::vec(0..=max_deg, N)), 0..=max_terms).prop_map(
        move |terms| {
            let mut p = Poly::zero(N);
            for (c, e) in terms {
                if c != 0 && e.iter().sum::<u32>() <= max_deg {
                    p = &p + &Poly::term(q(c, 1), Monomial(e));
                }
            }
            p
        },
    )
}

fn gens_strategy() -> impl Strategy<Value = Vec<Poly>> {
    prop::collection::vec(poly_strategy(3, 3), 2..=3)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in poly_strategy(4, 3), b in poly_strategy(4, 3), c in poly_strategy(4, 3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz(a in poly_strategy(4, 3), b in poly_strategy(4, 3), i in 0..N) {
        let lhs = (&a * &b).derivative(i);
        let rhs = &(&a.derivative(i) * &b) + &(&a * &b.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_parse_round_trip(a in poly_strategy(5, 4)) {
        let vars = ["x", "y", "z"];
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        prop_assert_eq!(parse(&a.fmt_with(&names), &vars).unwrap(), a);
    }

    #[test]
    fn bases_are_standard(gens in gens_strategy(), local in any::<bool>()) {
        let i = Ideal::new(N, gens, local);
        prop_assume!(!i.is_zero());
        prop_assert!(i.std_basis().is_standard_basis());
        for g in i.gens() {
            prop_assert!(i.contains(g));
        }
    }

    #[test]
    fn module_bases_are_standard(
        comps in prop::collection::vec(prop::collection::vec(poly_strategy(2, 2), 2), 2..=3),
        local in any::<bool>(),
    ) {
        let gens: Vec<Vector> = comps.into_iter().map(Vector::new).collect();
        let m = Module::new(2, N, gens.clone(), local);
        prop_assert!(m.std_basis().is_standard_basis());
        for g in &gens {
            prop_assert!(m.contains(g));
        }
    }

    #[test]
    fn certificates_remultiply(gens in gens_strategy(), mult in prop::collection::vec(poly_strategy(2, 2), 3), local in any::<bool>()) {
        let i = Ideal::new(N, gens, local);
        prop_assume!(!i.is_zero());
        let mut f = Poly::zero(N);
        for (m, g) in mult.iter().zip(i.gens()) {
            f = &f + &(m * g);
        }
        match i.membership(&f) {
            Membership::Member { unit, coeffs } => {
                prop_assert!(unit.is_unit_local());
                let mut rhs = Poly::zero(N);
                for (c, g) in coeffs.iter().zip(i.gens()) {
                    rhs = &rhs + &(c * g);
                }
                prop_assert_eq!(&unit * &f, rhs);
            }
            Membership::NotMember { remainder } => prop_assert!(false, "combination rejected, remainder {}", remainder),
        }
    }

    #[test]
    fn membership_independent_of_generators(gens in gens_strategy(), f in poly_strategy(3, 3)) {
        let i = Ideal::local(N, gens.clone());
        prop_assume!(!i.is_zero());
        let mut redundant = gens.clone();
        redundant.push(&gens[0] * &gens[1]);
        redundant.push(&gens[0] + &gens[1]);
        let j = Ideal::local(N, redundant);
        prop_assert_eq!(i.contains(&f), j.contains(&f));
    }

    #[test]
    fn local_membership_matches_mora(gens in gens_strategy(), f in poly_strategy(3, 3), u in poly_strategy(2, 2)) {
        let i = Ideal::local(N, gens.clone());
        prop_assume!(!i.is_zero());
        // Multiplying by a unit at the origin must not change local membership.
        let unit = &Poly::one(N) + &(&u * &Poly::var(N, 0));
        let fresh = Ideal::local(N, gens.clone());
        let mora = i.normal_form(&f).is_zero();
        prop_assert_eq!(fresh.contains(&f), mora);
        let member = &gens[0] * &unit;
        prop_assert!(Ideal::local(N, gens.clone()).contains(&member));
        prop_assert!(Ideal::local(N, gens.iter().map(|g| g * &unit).collect()).contains(&gens[0]));
    }

    #[test]
    fn syzygies_annihilate(row in gens_strategy(), local in any::<bool>()) {
        let m = Module::new(1, N, row.iter().cloned().map(Vector::from_poly).collect(), local);
        let syz = m.syzygies();
        for s in syz.gens() {
            prop_assert!(s.dot(&row).is_zero());
        }
        // Koszul relations are always syzygies.
        if row.len() >= 2 {
            let mut k = vec![Poly::zero(N); row.len()];
            k[0] = row[1].clone();
            k[1] = -&row[0];
            prop_assert!(syz.contains(&Vector::new(k)));
        }
    }

    #[test]
    fn quotient_spot_check(gens in gens_strategy(), f in poly_strategy(2, 2)) {
        let i = Ideal::local(N, gens);
        prop_assume!(!i.is_zero() && !f.is_zero());
        let quot = i.quotient_poly(&f);
        for g in quot.gens() {
            prop_assert!(i.contains(&(g * &f)));
        }
        prop_assert!(quot.contains_ideal(&i));
    }
}

/// Syzygies of `(y, x, xy)` against a brute-force linear-algebra oracle: every
/// relation with coefficients of degree <= 2 lies in the computed module.
#[test]
fn node_syzygies_complete_up_to_degree_two() {
    let vars = ["x", "y"];
    let p = |s: &str| parse(s, &vars).unwrap();
    let row = [p("y"), p("x"), p("x*y")];
    let syz = Module::local(1, 2, row.iter().cloned().map(Vector::from_poly).collect()).syzygies();
    let monos: Vec<Monomial> =
        (0..=2u32).flat_map(|d| (0..=d).map(move |a| Monomial(vec![a, d - a]))).collect();
    let unknowns: Vec<(usize, Monomial)> = (0..3).flat_map(|c| monos.iter().map(move |m| (c, m.clone()))).collect();
    // Columns: images of each unknown basis vector; solve the kernel exactly.
    let images: Vec<Poly> = unknowns.iter().map(|(c, m)| row[*c].mul_term(&q(1, 1), m)).collect();
    let mut targets: Vec<Monomial> = images.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone()).collect::<Vec<_>>()).collect();
    targets.sort();
    targets.dedup();
    let mut mat: Vec<Vec<logres_engine::Q>> =
        targets.iter().map(|t| images.iter().map(|p| p.coeff(t)).collect()).collect();
    let kernel = kernel_basis(&mut mat, unknowns.len());
    assert!(!kernel.is_empty());
    for v in kernel {
        let mut comps = vec![Poly::zero(2); 3];
        for (coef, (c, m)) in v.iter().zip(&unknowns) {
            comps[*c] = &comps[*c] + &Poly::term(coef.clone(), m.clone());
        }
        let rel = Vector::new(comps);
        assert!(rel.dot(&row).is_zero());
        assert!(syz.contains(&rel));
    }
}

fn kernel_basis(mat: &mut [Vec<logres_engine::Q>], ncols: usize) -> Vec<Vec<logres_engine::Q>> {
    use num_traits::{One, Zero};
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..mat.len()).find(|&i| !mat[i][c].is_zero()) else { continue };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for x in mat[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..mat.len() {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for k in 0..ncols {
                    let d = &f * &mat[r][k];
                    mat[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![logres_engine::Q::zero(); ncols];
            v[f] = logres_engine::Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -mat[row][f].clone();
            }
            v
        })
        .collect()
}
