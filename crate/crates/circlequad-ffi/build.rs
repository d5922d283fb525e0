//! Regenerates `include/circlequad.h` from the `extern "C"` surface on every
//! build, so the committed header can never drift from the crate.

use std::env;
use std::path::PathBuf;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("set by cargo"));
    let header = crate_dir.join("include").join("circlequad.h");
    cbindgen::generate(&crate_dir)
        .expect("cbindgen: C header generation failed")
        .write_to_file(header);
}
