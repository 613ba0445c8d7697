//! Conversion of core results into the report JSON schema (version 1).

use heisencore::cocycle::{CocycleHit, EntropyEstimate, LinearDecomposition, Orientation};
use heisencore::coeff::rational_to_f64;
use heisencore::decide::{Evidence, NeumannSeed, Status, Verdict};
use heisencore::localize::{LocalizationCertificate, LocalizationVerdict, PerThetaMethod};
use heisencore::witness::UnitPoint;

use crate::json::Json;

pub const SCHEMA_VERSION: i64 = 1;

pub fn report_header(command: &str) -> Json {
    let mut j = Json::object();
    j.push("schema", Json::Int(SCHEMA_VERSION));
    j.push("command", Json::Str(command.to_string()));
    j
}

pub fn unit_point_json(p: &UnitPoint) -> Json {
    let mut j = Json::object();
    match p {
        UnitPoint::RootOfUnity { num, den } => {
            j.push("root_of_unity", Json::Str(format!("{}/{}", num, den)));
        }
        UnitPoint::Angle(t) => {
            j.push("turns", Json::Float(*t));
        }
    }
    j
}

pub fn status_str(s: &Status) -> &'static str {
    match s {
        Status::Expansive => "expansive",
        Status::Nonexpansive => "nonexpansive",
        Status::Inconclusive => "inconclusive",
        Status::Contradiction => "internal-error-contradiction",
    }
}

pub fn evidence_json(e: &Evidence) -> Json {
    let mut j = Json::object();
    match e {
        Evidence::Lopsided { at, margin } => {
            j.push("kind", Json::Str("lopsided".into()));
            j.push("at", Json::Str(at.to_string()));
            j.push("margin", Json::bigint(margin));
        }
        Evidence::NeumannResidual {
            seed,
            residual,
            certifies,
        } => {
            j.push("kind", Json::Str("neumann-residual".into()));
            j.push(
                "seed",
                Json::Str(
                    match seed {
                        NeumannSeed::Scalar => "scalar",
                        NeumannSeed::Central => "central",
                    }
                    .into(),
                ),
            );
            j.push("residual", Json::rational(residual));
            j.push("residual_float", Json::Float(rational_to_f64(residual)));
            j.push("certifies", Json::Bool(*certifies));
        }
        Evidence::Localization { verdict, grid } => {
            j.push("kind", Json::Str("localization".into()));
            j.push("verdict", Json::Str(localization_verdict_str(verdict)));
            j.push("theta_grid", Json::UInt(*grid as u64));
        }
        Evidence::Character(w) => {
            j.push("kind", Json::Str("character".into()));
            j.push("p", Json::Int(1));
            j.push("zeta1", unit_point_json(&w.zeta1));
            j.push("zeta2", unit_point_json(&w.zeta2));
            j.push("residual", Json::Float(w.residual));
            j.push("exact", Json::Bool(w.exact));
        }
        Evidence::Representation(w) => {
            j.push("kind", Json::Str("representation".into()));
            j.push("p", Json::UInt(w.p as u64));
            j.push("theta", unit_point_json(&w.theta));
            j.push("zeta1", unit_point_json(&w.zeta1));
            j.push("zeta2", unit_point_json(&w.zeta2));
            j.push("residual", Json::Float(w.det_residual));
            j.push("commutation_defect", Json::Float(w.commutation_defect));
        }
        Evidence::CocycleHit { hit, confirmed } => {
            j.push("kind", Json::Str("cocycle-orbit-zero".into()));
            j = cocycle_hit_fields(j, hit);
            j.push("confirmed", Json::Bool(*confirmed));
        }
        Evidence::CocycleCrossing {
            theta_lo,
            theta_hi,
            advisory,
        } => {
            j.push("kind", Json::Str("mahler-difference-crossing".into()));
            j.push("theta_lo_turns", Json::Float(*theta_lo));
            j.push("theta_hi_turns", Json::Float(*theta_hi));
            j.push("advisory", Json::Bool(*advisory));
        }
        Evidence::CocycleNotLinear => {
            j.push("kind", Json::Str("cocycle-not-linear".into()));
        }
    }
    j
}

fn cocycle_hit_fields(mut j: Json, hit: &CocycleHit) -> Json {
    j.push("p", Json::UInt(hit.p as u64));
    j.push(
        "theta",
        Json::Str(format!("{}/{}", hit.theta_num, hit.p)),
    );
    j.push("xi", unit_point_json(&hit.xi));
    j.push("residual", Json::Float(hit.residual));
    j.push("exact", Json::Bool(hit.exact));
    j
}

pub fn localization_verdict_str(v: &LocalizationVerdict) -> String {
    match v {
        LocalizationVerdict::InvertibleEverywhere => "invertible-everywhere".into(),
        LocalizationVerdict::NoninvertibleAtOne(z) => format!(
            "noninvertible-at-theta=1 (character zero at e(2pi*i*{}/{}), e(2pi*i*{}/{}))",
            z.j1, z.order, z.j2, z.order
        ),
        LocalizationVerdict::Inconclusive => "inconclusive".into(),
    }
}

pub fn localization_certificate_json(cert: &LocalizationCertificate) -> Json {
    let mut j = Json::object();
    j.push("theta_grid", Json::UInt(cert.grid_size as u64));
    j.push("step", Json::Float(cert.step));
    j.push("lipschitz", Json::Float(cert.lipschitz));
    j.push(
        "verdict",
        Json::Str(localization_verdict_str(&cert.verdict)),
    );
    let mut entries = Vec::with_capacity(cert.per_theta.len());
    for pt in &cert.per_theta {
        let mut e = Json::object();
        e.push(
            "theta",
            Json::Str(format!("{}/{}", pt.index, cert.grid_size)),
        );
        match &pt.method {
            PerThetaMethod::DominantMargin { margin } => {
                e.push("method", Json::Str("dominant-margin".into()));
                e.push("margin_or_bound", Json::Float(*margin));
            }
            PerThetaMethod::NeumannSplit { split, bound } => {
                e.push("method", Json::Str(format!("neumann-split [{}]", split)));
                e.push("margin_or_bound", Json::Float(*bound));
            }
            PerThetaMethod::Uncovered { margin, best_bound } => {
                e.push("method", Json::Str("uncovered".into()));
                e.push("margin_or_bound", Json::Float(*margin));
                if let Some(b) = best_bound {
                    e.push("best_split_bound", Json::Float(*b));
                }
            }
        }
        entries.push(e);
    }
    j.push("per_theta", Json::Array(entries));
    j
}

pub fn verdict_json(input: &str, canonical: &str, verdict: &Verdict) -> Json {
    let mut j = report_header("expansive");
    j.push("input", Json::Str(input.to_string()));
    j.push("canonical", Json::Str(canonical.to_string()));
    j.push("status", Json::Str(status_str(&verdict.status).into()));
    j.push(
        "evidence",
        Json::Array(verdict.evidence.iter().map(evidence_json).collect()),
    );
    j
}

pub fn decomposition_json(d: &LinearDecomposition) -> Json {
    let mut j = Json::object();
    j.push(
        "orientation",
        Json::Str(
            match d.orientation {
                Orientation::YLinear => "y-linear",
                Orientation::XLinear => "x-linear (swapped)",
            }
            .into(),
        ),
    );
    j.push("unit_shift", Json::Int(d.unit_shift));
    j.push(
        "varieties_empty",
        Json::Bool(d.varieties_empty()),
    );
    j
}

pub fn entropy_json(input: &str, d: &LinearDecomposition, e: &EntropyEstimate) -> Json {
    let mut j = report_header("entropy");
    j.push("input", Json::Str(input.to_string()));
    j.push("decomposition", decomposition_json(d));
    j.push("value", Json::Float(e.value));
    j.push("cross_check", Json::Float(e.cross_check));
    j.push("routes_agree_within", Json::Float((e.value - e.cross_check).abs()));
    j.push("quadrature_error", Json::Float(e.quadrature_error));
    j.push("nodes", Json::UInt(e.nodes as u64));
    j
}
