//! Regenerate testdata/*.json from the q-expansion generators.
//!
//! cargo run -p hgtrace-core --example gen_fixtures [-- <dir>]

use std::path::PathBuf;

use hgtrace::modform::{oracle_fixture, FIXTURE_PRIME_BOUND};

fn main() -> hgtrace::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../testdata"));
    std::fs::create_dir_all(&dir)?;
    for label in ["6.8.a.a", "24.5.h.b"] {
        let fx = oracle_fixture(label, FIXTURE_PRIME_BOUND)?;
        let path = dir.join(format!("{label}.json"));
        std::fs::write(&path, fx.to_json())?;
        println!("wrote {} ({} primes)", path.display(), fx.ap.len());
    }
    Ok(())
}
