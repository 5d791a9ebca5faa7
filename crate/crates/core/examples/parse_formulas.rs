//! Parses formulas, prints them back and shows their free variables.
//!
//! `cargo run --example parse_formulas -- 'forall x in a . x = b'`

use sheaf_forcing::formula::{axiom_schedule, parse};

fn main() {
    let inputs: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if inputs.is_empty() {
        axiom_schedule().into_iter().map(|a| a.formula.to_string()).collect()
    } else {
        inputs
    };
    for text in inputs {
        match parse(&text) {
            Ok(phi) => {
                let back = parse(&phi.to_string()).expect("printed formulas parse");
                assert_eq!(back, phi);
                println!("{phi}\n    free {:?}, bounded only: {}", phi.free_vars(), !phi.has_unbounded_quantifier());
            }
            Err(e) => println!("{text}\n    {e}"),
        }
    }
}
