fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    let out = format!("{crate_dir}/include/plasmo.h");
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_language(cbindgen::Language::C)
        .with_cpp_compat(true)
        .with_include_guard("PLASMO_H")
        .generate()
        .expect("unable to generate C bindings")
        .write_to_file(out);
    println!("cargo:rerun-if-changed=src/lib.rs");
}
