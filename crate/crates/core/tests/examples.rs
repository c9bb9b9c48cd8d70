//! Every runnable example must complete without error.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(gauges);
example!(models_metrics);
example!(geodesics);
example!(levi_ma);
example!(tube_identities);
example!(maximality);
example!(schwarz);
example!(cli_fixtures);
