use gkm_core::cohomology::{icanonical_basis_h, local_index_h};
use gkm_core::equivariant::{check_gkm, expand_in_basis, EquivClass};
use gkm_core::fixtures;
use gkm_core::gkm::GkmGraph;
use gkm_core::kirwan::{kirwan_restrict, kirwan_restrict_from_source, reduced_fixed_data};
use gkm_core::ktheory::{icanonical_basis_k, local_index_k};
use gkm_core::symcore::{LaurentPoly, PolyH, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn graphs() -> Vec<GkmGraph> {
    vec![fixtures::cp1(), fixtures::cp2(), fixtures::cpn(3), fixtures::hirzebruch(), fixtures::square()]
}

fn laurent(rank: usize, terms: &[(Vec<i64>, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(rank, terms.iter().map(|(e, c)| (Weight::from_i64s(&e[..rank]), BigInt::from(*c))))
}

fn polyh(rank: usize, terms: &[(Vec<u32>, i64)]) -> PolyH {
    PolyH::from_terms(
        rank,
        terms.iter().map(|(d, c)| (d[..rank].to_vec(), BigRational::from_integer(BigInt::from(*c)))),
    )
}

fn k_terms() -> impl Strategy<Value = Vec<(Vec<i64>, i64)>> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, 3), -3i64..=3), 0..4)
}

fn h_terms() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 3), -3i64..=3), 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn k_combinations_expand_back(which in 0usize..5, coeffs in prop::collection::vec(k_terms(), 8)) {
        let g = &graphs()[which];
        let basis = icanonical_basis_k(g).unwrap();
        let f: Vec<LaurentPoly> = (0..g.len()).map(|p| laurent(g.rank(), &coeffs[p])).collect();
        let mut c = EquivClass::zero(g);
        for (b, fp) in basis.iter().zip(&f) {
            c = c.add(&b.scale(fp));
        }
        prop_assert!(check_gkm(g, &c).is_ok());
        prop_assert_eq!(expand_in_basis(g, &basis, &c).unwrap(), f);
    }

    #[test]
    fn k_local_index_is_additive(which in 0usize..5, ints in prop::collection::vec(-4i64..=4, 8)) {
        let g = &graphs()[which];
        let basis = icanonical_basis_k(g).unwrap();
        let mut c = EquivClass::zero(g);
        for (p, b) in basis.iter().enumerate() {
            c = c.add(&b.scale(&LaurentPoly::constant(BigInt::from(ints[p]), g.rank())));
        }
        for q in 0..g.len() {
            let expected = (0..g.len()).fold(LaurentPoly::zero(g.rank()), |acc, p| {
                acc.add(&local_index_k(g, &basis[p], q).unwrap().scale(&BigInt::from(ints[p])))
            });
            prop_assert_eq!(local_index_k(g, &c, q).unwrap(), expected);
        }
    }

    // Ind_q is not R(T)-linear, but it returns f on a class whose value at q is f·e⁻(q)
    // and ignores R(T)-multiples of classes vanishing at q.
    #[test]
    fn k_local_index_reads_off_leading_coefficients(
        which in 0usize..5,
        coeffs in prop::collection::vec(k_terms(), 8),
        noise in k_terms(),
    ) {
        let g = &graphs()[which];
        let basis = icanonical_basis_k(g).unwrap();
        for q in 0..g.len() {
            let mut c = EquivClass::zero(g);
            for p in q..g.len() {
                c = c.add(&basis[p].scale(&laurent(g.rank(), &coeffs[p])));
            }
            let f = laurent(g.rank(), &coeffs[q]);
            prop_assert_eq!(local_index_k(g, &c, q).unwrap(), f.clone());
            if q + 1 < g.len() {
                let shifted = c.add(&basis[q + 1].scale(&laurent(g.rank(), &noise)));
                prop_assert_eq!(local_index_k(g, &shifted, q).unwrap(), f);
            }
        }
    }

    #[test]
    fn h_local_index_reads_off_leading_coefficients(which in 0usize..5, coeffs in prop::collection::vec(h_terms(), 8)) {
        let g = &graphs()[which];
        let basis = icanonical_basis_h(g).unwrap();
        let f: Vec<PolyH> = (0..g.len()).map(|p| polyh(g.rank(), &coeffs[p])).collect();
        let mut c = EquivClass::zero(g);
        for (b, fp) in basis.iter().zip(&f) {
            c = c.add(&b.scale(fp));
        }
        prop_assert_eq!(expand_in_basis(g, &basis, &c).unwrap(), f.clone());
        for q in 0..g.len() {
            let tail = (q..g.len()).fold(EquivClass::zero(g), |acc, p| acc.add(&basis[p].scale(&f[p])));
            prop_assert_eq!(local_index_h(g, &tail, q).unwrap(), f[q].clone());
        }
    }

    #[test]
    fn kirwan_map_is_a_ring_homomorphism(
        which in 0usize..3,
        a in prop::collection::vec(h_terms(), 4),
        b in prop::collection::vec(h_terms(), 4),
    ) {
        let (g, pi) = [
            (fixtures::cp2(), vec![0i64, 1]),
            (fixtures::square(), vec![1, 1]),
            (fixtures::cpn(3), vec![0, 0, 1]),
        ][which].clone();
        let pi: Vec<BigInt> = pi.into_iter().map(BigInt::from).collect();
        let setup = reduced_fixed_data(&g, &pi).unwrap();
        let basis = icanonical_basis_h(&g).unwrap();
        let combine = |f: &[Vec<(Vec<u32>, i64)>]| {
            basis.iter().zip(f).fold(EquivClass::zero(&g), |acc, (t, fp)| acc.add(&t.scale(&polyh(g.rank(), fp))))
        };
        let (x, y) = (combine(&a), combine(&b));
        let xy = x.mul(&y);
        for pt in &setup.reduced {
            let kx = kirwan_restrict(&g, &setup, &x, pt).unwrap();
            let ky = kirwan_restrict(&g, &setup, &y, pt).unwrap();
            prop_assert_eq!(kirwan_restrict(&g, &setup, &xy, pt).unwrap(), kx.mul(&ky));
            prop_assert_eq!(kirwan_restrict_from_source(&g, &setup, &x, pt).unwrap(), kx);
        }
    }
}
