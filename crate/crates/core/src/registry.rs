//! Name-keyed registries of interchangeable strategies.
//!
//! Each strategy family (budget allocation, quantile estimation) is a trait;
//! implementations are registered under a stable name and looked up at
//! runtime from configuration or the command line.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Anything that can be registered needs a stable lookup name.
pub trait Named {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str {
        ""
    }
}

pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    default: &'static str,
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str, default: &'static str) -> Self {
        Registry {
            kind,
            default,
            entries: BTreeMap::new(),
        }
    }

    /// Registers `strategy`; a later registration under the same name wins.
    pub fn register(&mut self, strategy: Box<T>) -> &mut Self {
        self.entries.insert(strategy.name(), strategy);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn default_strategy(&self) -> &T {
        self.get(self.default)
            .expect("registry default must be registered")
    }

    pub fn default_name(&self) -> &'static str {
        self.default
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.values().map(|b| b.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }

    struct Hello;
    impl Named for Hello {
        fn name(&self) -> &'static str {
            "hello"
        }
    }
    impl Greeter for Hello {
        fn greet(&self) -> String {
            "hello".into()
        }
    }

    #[test]
    fn lookup_and_unknown_name() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter", "hello");
        reg.register(Box::new(Hello));
        assert_eq!(reg.get("hello").unwrap().greet(), "hello");
        assert_eq!(reg.default_strategy().name(), "hello");
        let err = reg.get("bye").err().unwrap();
        assert!(err.to_string().contains("available: hello"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }
}
