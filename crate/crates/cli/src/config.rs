use std::fmt::Display;

/// The settings of one run, written as `key=value` comment lines at the top
/// of every output file.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    entries: Vec<(String, String)>,
}

impl RunConfig {
    pub fn new(subcommand: &str) -> Self {
        let mut c = RunConfig::default();
        c.set("tool", format!("boolcv {}", env!("CARGO_PKG_VERSION")));
        c.set("subcommand", subcommand);
        c
    }

    pub fn set(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn comments(&self) -> Vec<String> {
        self.entries.iter().map(|(k, v)| format!("{k}={v}")).collect()
    }
}

pub fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
