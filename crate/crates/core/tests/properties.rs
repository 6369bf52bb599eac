mod common;

use common::*;
use cr_algebraicity::io::parse::parse_input;
use cr_algebraicity::segre::variety::in_segre;
use cr_algebraicity::tangent::tangent_operators;
use cr_algebraicity::GaussianRational as GR;
use proptest::prelude::*;

fn gr() -> impl Strategy<Value = GR> {
    (-30i64..30, 1i64..12, -30i64..30, 1i64..12).prop_map(|(a, b, c, d)| GR::from_parts(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn printed_problem_reparses(seed in any::<u64>(), order in 4u32..40, p in proptest::collection::vec(gr(), 1..4)) {
        let mut r = rng(seed);
        let (n, d) = random_dims(&mut r);
        let m = random_system(&mut r, n, d, false);
        let mut basepoint = p;
        basepoint.resize(n, GR::from_int(0));
        let rho: Vec<String> = m.rho().iter().map(|x| format!("rho{} = {};", 0, x)).collect();
        let mut text = format!("n = {n};\n");
        for (j, line) in rho.iter().enumerate() {
            text.push_str(&line.replacen("rho0", &format!("rho{}", j + 1), 1));
            text.push('\n');
        }
        text.push_str(&format!("order = {order};\nF1 = z1/(1 - z2);\n"));
        let pf = parse_input(&text).unwrap();
        let again = parse_input(&pf.to_string()).unwrap();
        prop_assert_eq!(&pf, &again);
        prop_assert_eq!(pf.rho, m.rho().to_vec());
    }

    #[test]
    fn segre_symmetry(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (n, d) = random_dims(&mut r);
        let m = random_system(&mut r, n, d, false);
        let (w, z) = (point(&mut r, n), point(&mut r, n));
        prop_assert_eq!(in_segre(&m, &w, &z), in_segre(&m, &z, &w));
        prop_assert!(in_segre(&m, &vec![GR::from_int(0); n], &vec![GR::from_int(0); n]));
    }

    #[test]
    fn tangency_on_random_systems(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (n, d) = random_dims(&mut r);
        let m = random_system(&mut r, n, d, false);
        for op in tangent_operators(&m).unwrap() {
            for rho in m.rho() {
                prop_assert!(op.apply(rho, false).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn number_text_round_trip(x in gr()) {
        let s = x.to_string();
        prop_assert_eq!(s.parse::<GR>().unwrap(), x);
    }
}
