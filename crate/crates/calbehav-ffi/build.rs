use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").expect("set by cargo"));
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let header = crate_dir.join("include").join("calbehav.h");
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            // write_to_file leaves the mtime alone when nothing changed.
            bindings.write_to_file(&header);
        }
        Err(err) => {
            // A stale header beats a broken build while editing lib.rs.
            if header.is_file() {
                println!("cargo:warning=cbindgen failed, keeping existing header: {err}");
            } else {
                panic!("cbindgen failed and no header exists: {err}");
            }
        }
    }
}
