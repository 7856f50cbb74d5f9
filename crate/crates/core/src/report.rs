use serde::Serialize;

/// Witnesses kept per property; further failures are only counted.
pub const MAX_WITNESSES: usize = 10;

/// Outcome of checking one property over a batch of instances.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub instances: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn new(property: impl Into<String>) -> Self {
        PropertyReport {
            property: property.into(),
            ..Default::default()
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(witness());
            }
        }
    }

    /// Records a fallible check; an error counts as a failure.
    pub fn record_result<T>(&mut self, r: crate::Result<T>, ok: impl FnOnce(&T) -> bool, witness: impl FnOnce() -> String) {
        match r {
            Ok(v) => {
                let good = ok(&v);
                self.record(good, witness)
            }
            Err(e) => self.record(false, || format!("{}: {e}", witness())),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn absorb(&mut self, other: PropertyReport) {
        debug_assert_eq!(self.property, other.property);
        self.instances += other.instances;
        self.failed += other.failed;
        let room = MAX_WITNESSES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }
}

/// Ordered collection of per-property reports, merged by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ReportSet(pub Vec<PropertyReport>);

impl ReportSet {
    pub fn get_mut(&mut self, property: &str) -> &mut PropertyReport {
        let i = match self.0.iter().position(|r| r.property == property) {
            Some(i) => i,
            None => {
                self.0.push(PropertyReport::new(property));
                self.0.len() - 1
            }
        };
        &mut self.0[i]
    }

    pub fn get(&self, property: &str) -> Option<&PropertyReport> {
        self.0.iter().find(|r| r.property == property)
    }

    pub fn merge(&mut self, other: ReportSet) {
        for r in other.0 {
            let name = r.property.clone();
            self.get_mut(&name).absorb(r);
        }
    }

    pub fn failed(&self) -> usize {
        self.0.iter().map(|r| r.failed).sum()
    }

    pub fn instances(&self) -> usize {
        self.0.iter().map(|r| r.instances).sum()
    }

    /// First witness of the first failing property, prefixed by its name.
    pub fn first_failure(&self) -> Option<String> {
        self.0
            .iter()
            .find(|r| !r.passed())
            .map(|r| format!("{}: {}", r.property, r.failures.first().map(String::as_str).unwrap_or("")))
    }
}
