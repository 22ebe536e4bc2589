//! SKT and balanced metric search over the built-in catalog.

use nilherm::search;
use nilherm::{catalog, SearchOptions};

fn main() {
    let opts = SearchOptions::default();
    for e in catalog::builtin() {
        let both = search::find_both(&e.algebra, &opts);
        println!("{}", e.name);
        for (label, r) in [("skt", &both.skt), ("balanced", &both.balanced)] {
            print!("  {label}: {:?}", r.status);
            if let Some(c) = &r.certificate {
                print!(" ({:?}) {}", c.kind, c.statement);
            }
            if let Some(w) = &r.witness {
                print!(" witness {}", serde_json::to_string(w).unwrap());
            }
            println!();
        }
    }
}
