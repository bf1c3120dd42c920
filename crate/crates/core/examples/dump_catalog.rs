//! Regenerates `data/catalog.json` from the programmatic catalog definition.
//!
//! cargo run -p engelhaar --example dump_catalog > crates/core/data/catalog.json

fn main() {
    let doc = engelhaar::catalog::bundled_document();
    print!("{}", engelhaar::catalog::to_json(&doc));
}
