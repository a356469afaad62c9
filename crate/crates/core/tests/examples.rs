//! Runs every example in `examples/` as a test.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main().unwrap();
            }
        }
    };
}

example!(grow);
example!(lift);
example!(expansion);
example!(mixing);
example!(future_cuts);
example!(tightness);
example!(self_healing);
example!(cost_bench);
