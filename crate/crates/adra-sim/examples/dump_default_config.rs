//! Prints the built-in default configuration as TOML, ready to edit and
//! pass back through `--config`.

fn main() {
    let config = adra_sim::config::SimConfig::default();
    print!("{}", config.to_toml_string().expect("the defaults serialize"));
}
