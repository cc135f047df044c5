//! Named solution schemes behind a common trait.

use crate::baselines::{circular_baseline, circular_init, static_uav_baseline};
use crate::error::{Error, Result};
use crate::optimizer::{bcd_solve, BcdConfig, SolveReport};
use crate::scenario::Scenario;

pub trait Scheme: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, s: &Scenario, cfg: &BcdConfig) -> Result<SolveReport>;
}

/// Alternating optimization started from the circular initialization.
pub struct Proposed;

impl Scheme for Proposed {
    fn name(&self) -> &'static str {
        "proposed"
    }

    fn description(&self) -> &'static str {
        "joint scheduling and trajectory optimization"
    }

    fn run(&self, s: &Scenario, cfg: &BcdConfig) -> Result<SolveReport> {
        let (_, init) = circular_init(s)?;
        bcd_solve(s, &init, cfg)
    }
}

pub struct Circular;

impl Scheme for Circular {
    fn name(&self) -> &'static str {
        "circular"
    }

    fn description(&self) -> &'static str {
        "fixed circular trajectory, optimized schedule"
    }

    fn run(&self, s: &Scenario, cfg: &BcdConfig) -> Result<SolveReport> {
        circular_baseline(s, cfg)
    }
}

pub struct Static;

impl Scheme for Static {
    fn name(&self) -> &'static str {
        "static"
    }

    fn description(&self) -> &'static str {
        "UAV hovering above the user centroid"
    }

    fn run(&self, s: &Scenario, cfg: &BcdConfig) -> Result<SolveReport> {
        static_uav_baseline(s, cfg)
    }
}

pub struct SchemeRegistry {
    schemes: Vec<Box<dyn Scheme>>,
}

impl Default for SchemeRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Proposed)).expect("fresh registry");
        r.register(Box::new(Circular)).expect("fresh registry");
        r.register(Box::new(Static)).expect("fresh registry");
        r
    }
}

impl SchemeRegistry {
    pub fn empty() -> Self {
        Self { schemes: Vec::new() }
    }

    /// Adds a scheme; names must be unique.
    pub fn register(&mut self, scheme: Box<dyn Scheme>) -> Result<()> {
        if self.schemes.iter().any(|s| s.name() == scheme.name()) {
            return Err(Error::InvalidConfig(format!("scheme `{}` registered twice", scheme.name())));
        }
        self.schemes.push(scheme);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&dyn Scheme> {
        self.schemes
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownScheme(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.schemes.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Scheme> {
        self.schemes.iter().map(|s| s.as_ref())
    }
}
