//! Coskeletal degree of the closed nerve of the associative operad.
//!
//! `cargo run --release -p dendro-core --example ass_degree -- 9`
//! Bounds above 9 take minutes.

use std::sync::Arc;
use std::time::Instant;

use dendro::closed_ops::{closed_nerve_ass, coskeletal_degree_search};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bound: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let start = Instant::now();
    let nerve = Arc::new(closed_nerve_ass(bound));
    println!("element counts: {:?}", nerve.sets());
    let degree = coskeletal_degree_search(&nerve, bound)?;
    match degree {
        Some(m) => println!("coskeletal degree {m} on trees of size <= {bound} ({:.1?})", start.elapsed()),
        None => println!("not coskeletal below {bound} ({:.1?})", start.elapsed()),
    }
    Ok(())
}
