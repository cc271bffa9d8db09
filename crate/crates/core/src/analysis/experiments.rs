use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use super::{
    count_equiv_classes, exhaustive_equiv_classes, frobenius_intersection, frobenius_profile, log2, mvec_equivalent,
    plaintext_system_nullity,
};
use crate::gf::{Field, FqnElem};
use crate::rankmat::{circulant_inverse, vec_mul_circulant};
use crate::gabidulin::{sample_normal_element, GabidulinCode};
use crate::pkc::{keygen, sample_mvec, SchemeParams};
use crate::semilinear::{automorphism_count, fully_linear_count, FqmOverFq, SemilinearMap};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Distinguisher,
    Census,
    Nullity,
    EquivClass,
}

impl Experiment {
    pub const ALL: [Experiment; 4] = [Self::Distinguisher, Self::Census, Self::Nullity, Self::EquivClass];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Distinguisher => "distinguisher",
            Self::Census => "census",
            Self::Nullity => "nullity",
            Self::EquivClass => "equivclass",
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Params(format!("unknown experiment {s:?}")))
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub experiment: String,
    pub params: String,
    pub trial: usize,
    pub observed: String,
    pub predicted: String,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentReport {
    pub records: Vec<Record>,
    /// Summary lines printed after the records.
    pub summary: Vec<String>,
}

impl ExperimentReport {
    fn push(&mut self, experiment: &str, params: SchemeParams, trial: usize, observed: impl ToString, predicted: impl ToString) {
        self.records.push(Record {
            experiment: experiment.to_string(),
            params: params.to_string(),
            trial,
            observed: observed.to_string(),
            predicted: predicted.to_string(),
        });
    }

    /// Records whose observed value differs from the prediction.
    pub fn mismatches(&self) -> usize {
        self.records.iter().filter(|r| r.observed != r.predicted).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{} {} trial {}: observed {} predicted {}", r.experiment, r.params, r.trial, r.observed, r.predicted)?;
        }
        for s in &self.summary {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Runs `trials` repetitions (ignored for the exhaustive experiments).
pub fn run_experiment<R: Rng + ?Sized>(exp: Experiment, params: SchemeParams, trials: usize, rng: &mut R) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::default();
    let tower = params.tower();
    let (n, k, m) = (params.n(), params.k(), params.m());
    match exp {
        Experiment::Distinguisher => {
            let mut hits = 0;
            for trial in 0..trials {
                let g = sample_normal_element(&tower, rng);
                let code = GabidulinCode::new(&tower, g, k)?;
                let gab = frobenius_intersection(tower.top(), code.generator(), 1);
                rep.push("gabidulin-cap", params, trial, gab, k - 1);

                let (pk, _) = keygen(params, rng)?;
                let gen = pk.generator();
                let sum = frobenius_profile(tower.top(), &gen, 1)[1];
                let cap = frobenius_intersection(tower.top(), &gen, 1);
                rep.push("public-sum", params, trial, sum, n);
                rep.push("public-cap", params, trial, cap, 2 * k - n);
                hits += usize::from(sum == n && cap == 2 * k - n);
            }
            rep.summary.push(format!("public code matches generic dimensions: {hits} / {trials}"));
        }
        Experiment::Census => {
            let q = params.q() as u128;
            let total = automorphism_count(params.q_log(), m);
            if total > num_bigint::BigUint::from(1u32 << 20) {
                return Err(Error::Params(format!("census over F_{{q^{m}}} needs {total} maps")));
            }
            let maps = SemilinearMap::enumerate(FqmOverFq(tower));
            let linear = maps.iter().filter(|p| p.is_fully_linear()).count();
            rep.push("census-total", params, 0, maps.len(), total);
            rep.push("census-linear", params, 0, linear, fully_linear_count(params.q_log(), m));
            rep.summary.push(format!("fully linear: {linear} / {}", maps.len()));
            rep.summary.push(format!("expected m(q^m-1) = {}", m as u128 * (q.pow(m as u32) - 1)));
        }
        Experiment::Nullity => {
            for trial in 0..trials {
                let (pk, _) = keygen(params, rng)?;
                let nul = plaintext_system_nullity(&pk);
                rep.push("nullity", params, trial, nul, k - m);
            }
            rep.summary.push(format!(
                "nullity k-m = {}, log2 solutions = {}",
                k - m,
                (k - m) * m * params.q_log() as usize
            ));
        }
        Experiment::EquivClass => {
            let predicted = count_equiv_classes(params.q_log(), m);
            if tower.top_bits() * n <= 20 {
                let (reps, all) = exhaustive_equiv_classes(&tower);
                rep.push("equivclass", params, 0, reps.len(), &predicted);
                rep.summary.push(format!("{} admissible vectors in {} classes", all.len(), reps.len()));
            } else {
                // too large to enumerate: check that orbits under F_{q^m} circulants stay in one class
                let top = tower.top();
                for trial in 0..trials {
                    let a = sample_mvec(&tower, rng);
                    let b = loop {
                        let s: Vec<FqnElem> = (0..n).map(|_| FqnElem::from(tower.mid().random(rng))).collect();
                        if circulant_inverse(top, &s).is_some() {
                            break vec_mul_circulant(top, &a, &s);
                        }
                    };
                    let c = sample_mvec(&tower, rng);
                    let same = mvec_equivalent(&tower, &a, &b)?;
                    let other = mvec_equivalent(&tower, &a, &c)?;
                    rep.push("equivclass-orbit", params, trial, same, true);
                    rep.push("equivclass-random", params, trial, other, false);
                }
            }
            rep.summary.push(format!("log2 N(m) = {:.2}", log2(&predicted)));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn census_report() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let p: SchemeParams = "toy:2,3,4".parse().unwrap();
        let rep = run_experiment(Experiment::Census, p, 1, &mut rng).unwrap();
        assert!(rep.to_string().contains("fully linear: 21 / 168"));
        assert_eq!(rep.mismatches(), 0);
        assert!(run_experiment(Experiment::Census, SchemeParams::P128, 1, &mut rng).is_err());
    }

    #[test]
    fn equivalence_report_by_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let p: SchemeParams = "toy:2,3,4".parse().unwrap();
        let rep = run_experiment(Experiment::EquivClass, p, 10, &mut rng).unwrap();
        assert_eq!(rep.records.len(), 20);
        assert!(rep.records.iter().filter(|r| r.experiment == "equivclass-orbit").all(|r| r.observed == "true"));
    }

    #[test]
    fn partition_agrees_with_predicate() {
        let tower = crate::gf::TowerField::new(1, 2).unwrap();
        let (reps, all) = exhaustive_equiv_classes(&tower);
        assert_eq!(reps.len(), 315);
        for (v, c) in all.iter().step_by(7) {
            assert!(mvec_equivalent(&tower, &reps[*c], v).unwrap());
        }
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                assert!(!mvec_equivalent(&tower, &reps[i], &reps[j]).unwrap());
            }
        }
    }

    #[test]
    fn distinguisher_and_nullity_reports() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let p: SchemeParams = "toy:2,4,6".parse().unwrap();
        let rep = run_experiment(Experiment::Distinguisher, p, 5, &mut rng).unwrap();
        assert_eq!(rep.records.len(), 15);
        assert!(rep.records.iter().filter(|r| r.experiment == "gabidulin-cap").all(|r| r.observed == r.predicted));
        let rep = run_experiment(Experiment::Nullity, p, 5, &mut rng).unwrap();
        assert_eq!(rep.mismatches(), 0);
        let mut csv = Vec::new();
        rep.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("experiment,params,trial,observed,predicted\n"));
        assert_eq!(text.lines().count(), 6);
        assert!("bogus".parse::<Experiment>().is_err());
    }
}
