use std::fmt;
use std::io::Write;

use serde::Serialize;

use super::{algebraic_costs, combinatorial_costs, AttackCost, RsdInstance};
use crate::analysis::{count_equiv_classes, log2, phi_x_n_minus_1};
use crate::pkc::SchemeParams;
use crate::semilinear::secret_phi_count;
use crate::{Error, Result};

/// Public-key size in bytes, `n²·log2(q)/8` rounded up.
pub fn keysize(params: SchemeParams) -> usize {
    params.public_key_bytes()
}

/// One RSD instance the ciphertext reduces to, with all its attack rows.
#[derive(Clone, Debug, Serialize)]
pub struct Conversion {
    pub label: &'static str,
    pub instance: RsdInstance,
    pub attacks: Vec<AttackCost>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuralCount {
    pub name: &'static str,
    pub log2: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttackReport {
    pub params: String,
    pub target: Option<u32>,
    pub conversions: Vec<Conversion>,
    /// Minimum over applicable attack rows of every conversion.
    pub minimum: f64,
    pub structural: Vec<StructuralCount>,
    pub warnings: Vec<String>,
}

/// Evaluates both RSD conversions `(q,n,n,k,t)` and `(q,m,n,2k-n,t)` and the
/// key-space counts `N(g)`, `N(m)`, `N(φ)`, `N(x)`.
pub fn scheme_security(params: SchemeParams) -> AttackReport {
    let (q, m, n, k, t) = (params.q(), params.m(), params.n(), params.k(), params.t());
    let q_log = params.q_log();
    let instances = [
        ("over F_{q^n}", RsdInstance { q, m: n, n, k, t }),
        ("over F_{q^m}", RsdInstance { q, m, n, k: 2 * k - n, t }),
    ];
    let conversions: Vec<Conversion> = instances
        .into_iter()
        .map(|(label, inst)| {
            let attacks = combinatorial_costs(&inst).into_iter().chain(algebraic_costs(&inst)).collect();
            Conversion { label, instance: inst, attacks }
        })
        .collect();
    let minimum = conversions
        .iter()
        .flat_map(|c| c.attacks.iter().filter_map(|a| a.log2_cost))
        .fold(f64::INFINITY, f64::min);

    let structural = vec![
        StructuralCount { name: "N(g)", log2: log2(&phi_x_n_minus_1(q_log, n)) },
        StructuralCount { name: "N(m)", log2: log2(&count_equiv_classes(q_log, m)) },
        StructuralCount { name: "N(phi)", log2: log2(&secret_phi_count(q_log, m)) },
        StructuralCount { name: "N(x)", log2: ((k - m) * m * q_log as usize) as f64 },
    ];

    let mut warnings = Vec::new();
    if let Some(level) = params.security_level() {
        if minimum < level as f64 {
            warnings.push(format!("minimum attack cost {minimum:.2} is below the {level}-bit target"));
        }
        for s in &structural {
            if s.log2 < level as f64 {
                warnings.push(format!("{} = 2^{:.2} is below the {level}-bit target", s.name, s.log2));
            }
        }
    }
    AttackReport { params: params.to_string(), target: params.security_level(), conversions, minimum, structural, warnings }
}

fn cost_str(c: Option<f64>) -> String {
    c.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2}"))
}

impl AttackReport {
    /// `conversion,instance,family,attack,condition,log2_cost`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["conversion", "instance", "family", "attack", "condition", "log2_cost"]).map_err(err)?;
        for c in &self.conversions {
            for a in &c.attacks {
                let family = serde_json::to_value(a.family).expect("plain enum");
                w.write_record([
                    c.label,
                    &c.instance.to_string(),
                    family.as_str().unwrap_or_default(),
                    a.attack,
                    &a.condition,
                    &cost_str(a.log2_cost),
                ])
                .map_err(err)?;
            }
        }
        for s in &self.structural {
            w.write_record(["structural", "", "count", s.name, "none", &format!("{:.2}", s.log2)]).map_err(err)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))
    }

    /// One JSON object per attack row; inapplicable rows carry `"log2_cost": "n/a"`.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Format(e.to_string());
        for c in &self.conversions {
            for a in &c.attacks {
                let cost = a.log2_cost.map_or(serde_json::json!("n/a"), |v| serde_json::json!(v));
                let line = serde_json::json!({
                    "params": self.params,
                    "conversion": c.label,
                    "instance": c.instance,
                    "attack": a.attack,
                    "family": a.family,
                    "condition": a.condition,
                    "log2_cost": cost,
                });
                writeln!(out, "{line}").map_err(io)?;
            }
        }
        for s in &self.structural {
            let line = serde_json::json!({ "params": self.params, "count": s.name, "log2": s.log2 });
            writeln!(out, "{line}").map_err(io)?;
        }
        Ok(())
    }
}

impl fmt::Display for AttackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "parameters {}", self.params)?;
        for c in &self.conversions {
            writeln!(f, "RSD {} {}", c.label, c.instance)?;
            for a in &c.attacks {
                let family = match a.family {
                    super::Family::Combinatorial => "comb",
                    super::Family::Algebraic => "alg",
                };
                writeln!(f, "  {family:<5} {:<26} {:>10}  {}", a.attack, cost_str(a.log2_cost), a.condition)?;
            }
        }
        writeln!(f, "minimum attack cost: {:.2}", self.minimum)?;
        if let Some(t) = self.target {
            writeln!(f, "target: {t}")?;
        }
        writeln!(f, "key-space counts (log2):")?;
        for s in &self.structural {
            writeln!(f, "  {:<7} {:>10.2}", s.name, s.log2)?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(r: &AttackReport, name: &str) -> f64 {
        r.structural.iter().find(|s| s.name == name).unwrap().log2
    }

    #[test]
    fn key_space_counts() {
        let expect = [(63.0, 2048.0, 128.0, 576.0), (79.0, 3200.0, 160.0, 960.0), (91.0, 4232.0, 184.0, 1104.0)];
        for (p, (g, mm, phi, x)) in SchemeParams::NAMED.into_iter().zip(expect) {
            let r = scheme_security(p);
            assert_eq!(count(&r, "N(g)").round(), g);
            assert!((count(&r, "N(m)") - mm).abs() <= 1.0);
            assert!((count(&r, "N(phi)") - phi).abs() <= 1.0);
            assert_eq!(count(&r, "N(x)"), x);
            assert!(r.warnings.iter().any(|w| w.starts_with("N(g)")));
        }
    }

    #[test]
    fn conversions() {
        let r = scheme_security(SchemeParams::P128);
        let inst: Vec<_> = r.conversions.iter().map(|c| c.instance.to_string()).collect();
        assert_eq!(inst, vec!["(2,64,64,50,7)", "(2,32,64,36,7)"]);
        let min = r.conversions.iter().flat_map(|c| c.attacks.iter().filter_map(|a| a.log2_cost)).fold(f64::MAX, f64::min);
        assert_eq!(r.minimum, min);
        assert_eq!(keysize(SchemeParams::P256), 1058);
    }

    #[test]
    fn outputs() {
        let r = scheme_security(SchemeParams::P128);
        let text = r.to_string();
        assert!(text.contains("n/a"));
        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert_eq!(csv.lines().count(), 1 + 2 * 9 + 4);
        let mut json = Vec::new();
        r.write_json_lines(&mut json).unwrap();
        for line in String::from_utf8(json).unwrap().lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("params").is_some());
        }
    }
}
