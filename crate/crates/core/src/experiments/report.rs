use serde::Serialize;

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A value stated in the reference literature for this construction.
    Reference,
    /// Follows immediately from the definitions.
    Identity,
    /// Computed by an independent route (closed form, brute force, control run).
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|computed − expected| ≤ tol`
    Equal,
    /// `computed ≤ expected + tol`
    AtMost,
    /// `computed ≥ expected − tol`
    AtLeast,
    /// `computed > expected + tol`
    Exceeds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, computed: f64, relation: Relation, expected: f64, tolerance: f64, provenance: Provenance) -> Self {
        let pass = match relation {
            Relation::Equal => (computed - expected).abs() <= tolerance,
            Relation::AtMost => computed <= expected + tolerance,
            Relation::AtLeast => computed >= expected - tolerance,
            Relation::Exceeds => computed > expected + tolerance,
        };
        Self {
            name: name.to_string(),
            computed,
            expected,
            relation,
            tolerance,
            provenance,
            pass,
        }
    }

    pub fn equal(name: &str, computed: f64, expected: f64, tolerance: f64, provenance: Provenance) -> Self {
        Self::new(name, computed, Relation::Equal, expected, tolerance, provenance)
    }

    /// A boolean condition recorded as `1 = 1`.
    pub fn holds(name: &str, ok: bool, provenance: Provenance) -> Self {
        Self::new(name, f64::from(u8::from(ok)), Relation::Equal, 1.0, 0.0, provenance)
    }
}

/// Outcome of one experiment run.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub space: String,
    pub inputs: serde_json::Value,
    pub checks: Vec<Check>,
    /// Computed quantities that are reported but not asserted.
    pub quantities: serde_json::Map<String, serde_json::Value>,
    pub runtime_ms: f64,
}

impl ExperimentReport {
    pub(crate) fn new(name: &str, space: &crate::Space, inputs: serde_json::Value) -> Self {
        Self {
            name: name.to_string(),
            space: space.to_string(),
            inputs,
            checks: Vec::new(),
            quantities: serde_json::Map::new(),
            runtime_ms: 0.0,
        }
    }

    pub(crate) fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub(crate) fn record(&mut self, key: &str, value: impl Serialize) {
        self.quantities
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// The report without its runtime, for reproducibility comparisons.
    pub fn fingerprint(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).unwrap_or_default();
        if let Some(obj) = v.as_object_mut() {
            obj.remove("runtime_ms");
        }
        v
    }

    /// Plain-text table, one line per check.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{} on {} [{}] ({:.1} ms)\n",
            self.name,
            self.space,
            if self.passed() { "PASS" } else { "FAIL" },
            self.runtime_ms
        );
        for c in &self.checks {
            let rel = match c.relation {
                Relation::Equal => "=",
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
                Relation::Exceeds => ">",
            };
            out.push_str(&format!(
                "  {:4} {:<44} {:>+.12e} {} {:>+.12e} (tol {:.0e}, {:?})\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.computed,
                rel,
                c.expected,
                c.tolerance,
                c.provenance
            ));
        }
        out
    }
}
