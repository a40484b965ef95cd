//! The configuration-length gadget: catching forged machine computations by
//! measuring configuration lengths with a counter.
//!
//! ```bash
//! cargo run --example length_gadget
//! ```

use counterlab::protocols::{demo_dtm, LengthGadget, ParityChoice};

fn main() {
    let dtm = demo_dtm();
    let gadget = LengthGadget::new(&dtm);
    let input = "010";

    let configs = dtm.run_configs(input, 100).unwrap();
    println!("honest computation on {input:?}:");
    for c in &configs {
        println!("  {c}  (length {})", c.chars().count());
    }
    let honest = configs.join("$$");
    let (a, b) = gadget.check_both(input.len(), &honest).unwrap();
    println!("honest stream flagged: odd-even {a}, even-odd {b}");

    // forge one configuration a cell longer
    let mut forged = configs.clone();
    forged[2].insert(0, '_');
    let stream = forged.join("$$");
    let (a, b) = gadget.check_both(input.len(), &stream).unwrap();
    println!("\nlie at configuration 3 (one cell longer):");
    println!("flagged: odd-even {a}, even-odd {b}");

    // a prover that stops sending separators
    let stream = format!("{}$${}", configs[0], "1".repeat(30));
    let flagged = gadget
        .flags_stream(ParityChoice::OddEven, input.len(), &stream)
        .unwrap();
    println!("\nseparator withheld after the first configuration: flagged {flagged}");
}
