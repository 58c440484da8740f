//! Every example under `examples/` runs to completion.

mod generate_families {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/generate_families.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod link_structure {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/link_structure.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod small_eliminants {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/small_eliminants.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod solver_zero_set {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/solver_zero_set.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod newton_identities {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/newton_identities.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod power_sum_limits {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/power_sum_limits.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod jet_arithmetic {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/jet_arithmetic.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod saddle_limits {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/saddle_limits.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod identity_check {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/identity_check.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod double_cycle_probe {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/double_cycle_probe.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}

mod reports {
    #![allow(dead_code)]
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/reports.rs"));

    #[test]
    fn runs() {
        run_example().unwrap();
    }
}
