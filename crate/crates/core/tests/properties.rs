mod common;

use common::*;
use osbc::arrangement::{BiArrangement, LinearForm};
use osbc::bicomplex::OSBicomplex;
use osbc::blowup::{abstractify, resolve, TieBreak};
use osbc::exactness::check_exactness;
use osbc::os_algebra::{nbc_sets, OSAlgebra};
use osbc::Color;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn member(seed: u64) -> BiArrangement {
    random_biarrangement(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dual_is_an_involution(seed in any::<u64>()) {
        let b = member(seed);
        let dd = b.dual().dual();
        prop_assert_eq!(dd.irreducible_colors(), b.irreducible_colors());
        prop_assert_eq!(dd.forms(), b.forms());
    }

    #[test]
    fn all_lambda_is_the_os_algebra(seed in any::<u64>()) {
        let b = member(seed);
        let forms: Vec<LinearForm> =
            b.forms().iter().map(|f| LinearForm::new(f.coeffs.clone(), f.label.clone(), Color::Lambda)).collect();
        let c = BiArrangement::constant(b.ambient_dim(), forms, Color::Lambda).unwrap();
        let bc = OSBicomplex::build(&c).unwrap();
        let alg = OSAlgebra::build(c.poset()).unwrap();
        for s in 0..c.poset().len() {
            let codim = c.poset().stratum(s).codim;
            let mut want = vec![0; codim + 1];
            want[codim] = alg.dim(s);
            prop_assert_eq!(bc.dims(s), want.as_slice());
        }
    }

    #[test]
    fn nbc_count_is_order_independent(seed in any::<u64>(), shift in 0usize..6) {
        let b = member(seed);
        let k = b.forms().len();
        let id: Vec<usize> = (0..k).collect();
        let rot: Vec<usize> = (0..k).map(|i| (i + shift) % k).collect();
        let a = nbc_sets(b.poset(), &id).unwrap();
        let r = nbc_sets(b.poset(), &rot).unwrap();
        prop_assert_eq!(a.len(), r.len());
        prop_assert_eq!(a.len(), nbc_oracle(b.forms(), &rot).len());
    }

    #[test]
    fn identities_survive_duality_and_resolution(seed in any::<u64>()) {
        let b = member(seed);
        let bc = OSBicomplex::build(&b).unwrap();
        prop_assert!(bc.verify_identities().is_ok());
        prop_assert!(bc.dual().verify_identities().is_ok());
        let abs = abstractify(&b, &bc);
        let exact = check_exactness(&bc).exact();
        let res = resolve(&abs, TieBreak::First).unwrap();
        prop_assert_eq!(res.steps.len(), b.higher_irreducibles().len());
        for step in &res.steps {
            prop_assert!(step.result.bicomplex.verify_identities().is_ok());
            if exact {
                prop_assert!(check_exactness(&step.result.bicomplex).exact());
            }
        }
    }

    #[test]
    fn exactness_verdict_is_dual_invariant(seed in any::<u64>()) {
        let b = member(seed);
        let e = check_exactness(&OSBicomplex::build(&b).unwrap()).exact();
        let f = check_exactness(&OSBicomplex::build(&b.dual()).unwrap()).exact();
        prop_assert_eq!(e, f);
    }
}
