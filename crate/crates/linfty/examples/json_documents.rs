//! The on-disk JSON format: building a document from a Lie algebra table,
//! canonical serialization (byte-identical round trips), and loading one of
//! the bundled fixtures into a homotopy structure.

use linfty::doc::AlgebraDocument;
use linfty::scalar;

fn main() -> linfty::Result<()> {
    // [x, y] = y, written out as a document (generator parities, then
    // structure constants by generator index)
    let doc = AlgebraDocument::from_lie(&[("x", 0), ("y", 0)], &[(0, 1, 1, scalar::int(1))]);
    let text = doc.serialize();
    println!("{text}");

    // serialization is canonical: parse + serialize is the identity on bytes
    let reparsed = AlgebraDocument::parse(text.as_bytes())?;
    assert_eq!(reparsed.serialize(), text);
    println!("round trip is byte-identical");

    // a bundled fixture, loaded and turned into a weight-6 structure
    let bytes = std::fs::read(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/heisenberg.json"
    ))
    .expect("fixture present in the crate");
    let fixture = AlgebraDocument::parse(&bytes)?;
    let s = fixture.linfty(6)?;
    println!("heisenberg structure: m = {}", s.m.display());
    println!("structure equation holds: {}", s.check_mc()?);
    Ok(())
}
