//! Case configuration: a line-oriented `key = value` format plus the nine
//! built-in benchmark scenarios.

use crate::error::Error;
use crate::model::{check_hypotheses, GrowthLaw, ModelParams, SolubilizationLaw, TargetBox};

/// One fully specified scenario: kinetics, solubilization slope, total mass
/// and target thresholds, with optional numeric overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub name: String,
    pub mu_bar: f64,
    pub ks: f64,
    /// Absent selects the Monod law.
    pub ki: Option<f64>,
    pub a: f64,
    pub m: f64,
    pub s1_bar: f64,
    pub s2_bar: f64,
    /// Override for the oracle grid resolution.
    pub grid_n: Option<usize>,
    /// Override for the integrator relative tolerance.
    pub ode_rel_tol: Option<f64>,
}

impl CaseConfig {
    /// Parse the `key = value` line format. `#` starts a comment; unknown
    /// keys are rejected.
    pub fn parse(text: &str) -> Result<CaseConfig, Error> {
        let mut name = None;
        let mut fields: Vec<(String, f64)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if key == "name" {
                name = Some(value.to_string());
                continue;
            }
            let num: f64 = value.parse().map_err(|_| {
                Error::Config(format!("line {}: non-numeric value `{value}` for `{key}`", lineno + 1))
            })?;
            fields.push((key.to_string(), num));
        }

        let mut cfg = CaseConfig {
            name: name.ok_or_else(|| Error::Config("missing `name`".into()))?,
            mu_bar: f64::NAN,
            ks: f64::NAN,
            ki: None,
            a: f64::NAN,
            m: f64::NAN,
            s1_bar: f64::NAN,
            s2_bar: f64::NAN,
            grid_n: None,
            ode_rel_tol: None,
        };
        for (key, v) in fields {
            match key.as_str() {
                "mu_bar" => cfg.mu_bar = v,
                "Ks" => cfg.ks = v,
                "Ki" => cfg.ki = Some(v),
                "a" => cfg.a = v,
                "M" => cfg.m = v,
                "S1_bar" => cfg.s1_bar = v,
                "S2_bar" => cfg.s2_bar = v,
                "grid.n" => {
                    if v < 8.0 || v.fract() != 0.0 {
                        return Err(Error::Config(format!("grid.n must be an integer >= 8, got {v}")));
                    }
                    cfg.grid_n = Some(v as usize);
                }
                "ode.rel_tol" => {
                    if !(v > 0.0) {
                        return Err(Error::Config(format!("ode.rel_tol must be positive, got {v}")));
                    }
                    cfg.ode_rel_tol = Some(v);
                }
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }
        for (label, v) in [
            ("mu_bar", cfg.mu_bar),
            ("Ks", cfg.ks),
            ("a", cfg.a),
            ("M", cfg.m),
            ("S1_bar", cfg.s1_bar),
            ("S2_bar", cfg.s2_bar),
        ] {
            if v.is_nan() {
                return Err(Error::Config(format!("missing `{label}`")));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Error> {
        if !(self.m > 0.0) {
            return Err(Error::Config(format!("M must be positive, got {}", self.m)));
        }
        if !(self.s1_bar > 0.0 && self.s2_bar > 0.0 && self.s1_bar + self.s2_bar < self.m) {
            return Err(Error::Config(format!(
                "target thresholds ({}, {}) must be positive with sum below M = {}",
                self.s1_bar, self.s2_bar, self.m
            )));
        }
        let (params, _) = self.to_model_unchecked();
        check_hypotheses(&params).into_result()?;
        Ok(())
    }

    fn to_model_unchecked(&self) -> (ModelParams, TargetBox) {
        let growth = match self.ki {
            Some(ki) => GrowthLaw::Haldane { mu_bar: self.mu_bar, ks: self.ks, ki },
            None => GrowthLaw::Monod { mu_bar: self.mu_bar, ks: self.ks },
        };
        (
            ModelParams {
                growth,
                solub: SolubilizationLaw { slope: self.a },
                total_mass: self.m,
            },
            TargetBox { s1_bar: self.s1_bar, s2_bar: self.s2_bar },
        )
    }

    /// Validated model and target for this case.
    pub fn to_model(&self) -> Result<(ModelParams, TargetBox), Error> {
        self.validate()?;
        Ok(self.to_model_unchecked())
    }

    /// Emit the config in the same line format `parse` accepts.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name = {}\n", self.name));
        out.push_str(&format!("mu_bar = {}\n", self.mu_bar));
        out.push_str(&format!("Ks = {}\n", self.ks));
        if let Some(ki) = self.ki {
            out.push_str(&format!("Ki = {ki}\n"));
        }
        out.push_str(&format!("a = {}\n", self.a));
        out.push_str(&format!("M = {}\n", self.m));
        out.push_str(&format!("S1_bar = {}\n", self.s1_bar));
        out.push_str(&format!("S2_bar = {}\n", self.s2_bar));
        if let Some(n) = self.grid_n {
            out.push_str(&format!("grid.n = {n}\n"));
        }
        if let Some(rt) = self.ode_rel_tol {
            out.push_str(&format!("ode.rel_tol = {rt}\n"));
        }
        out
    }
}

/// Names of the nine embedded benchmark cases, in canonical order.
pub const BUILTIN_NAMES: [&str; 9] = [
    "case_I", "case_IIa", "case_IIb", "case_IIc", "case_IIIa", "case_IIIb", "case_IIIc",
    "case_IVa", "case_IVb",
];

/// The embedded benchmark scenarios. The duplicated label in the source
/// material is disambiguated by row order into `case_IVa` / `case_IVb`.
pub fn builtin_case(name: &str) -> Option<CaseConfig> {
    let mk = |name: &str, mu_bar, ks, ki, a, m, s1_bar, s2_bar| CaseConfig {
        name: name.to_string(),
        mu_bar,
        ks,
        ki: Some(ki),
        a,
        m,
        s1_bar,
        s2_bar,
        grid_n: None,
        ode_rel_tol: None,
    };
    match name {
        "case_I" => Some(mk("case_I", 1.0, 2.0, 0.23, 0.1, 1.3, 0.15, 0.05)),
        "case_IIa" => Some(mk("case_IIa", 1.0, 5.0, 0.23, 0.03, 1.3, 0.29, 0.05)),
        "case_IIb" => Some(mk("case_IIb", 1.0, 3.5, 0.23, 0.04, 1.3, 0.14, 0.02)),
        "case_IIc" => Some(mk("case_IIc", 1.0, 3.5, 0.23, 0.015, 1.3, 0.14, 0.02)),
        "case_IIIa" => Some(mk("case_IIIa", 30.0, 4.0, 0.7, 5.0, 2.4, 0.2, 0.02)),
        "case_IIIb" => Some(mk("case_IIIb", 30.0, 4.0, 0.7, 5.0, 2.4, 0.09, 0.02)),
        "case_IIIc" => Some(mk("case_IIIc", 30.0, 4.0, 0.7, 5.0, 2.4, 0.05, 0.02)),
        "case_IVa" => Some(mk("case_IVa", 1.0, 2.0, 0.23, 0.1, 1.3, 0.15, 0.8)),
        "case_IVb" => Some(mk("case_IVb", 1.0, 2.0, 0.23, 1.0, 1.3, 0.15, 0.8)),
        _ => None,
    }
}

/// All nine built-in cases.
pub fn builtin_cases() -> Vec<CaseConfig> {
    BUILTIN_NAMES.iter().map(|n| builtin_case(n).unwrap()).collect()
}
