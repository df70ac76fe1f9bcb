//! The built-in scenario catalog and its suite map. Ids are stable and the
//! listing is deterministic; every verification suite is reachable from at
//! least one scenario.

use crate::checks;
use crate::instances;
use crate::report::CheckOutcome;
use gaugecode::group::FiniteGroup;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    /// Claim families the scenario exercises.
    pub suites: &'static [&'static str],
}

/// Stable catalog listing.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            id: "z2-line",
            description: "Z2 on the two-vertex line: gauging isometry, duality, image, dressing",
            suites: &["gauging-core"],
        },
        CatalogEntry {
            id: "s3-line",
            description: "S3 on the two-vertex line with the standard representation",
            suites: &["gauging-core"],
        },
        CatalogEntry {
            id: "d4-star3",
            description: "D4 star with three boundary legs",
            suites: &["gauging-core"],
        },
        CatalogEntry {
            id: "z2-triangle-pendant",
            description: "Z2 triangle with a pendant boundary vertex",
            suites: &["gauging-core", "wilson"],
        },
        CatalogEntry {
            id: "s3-triangle-pendant",
            description: "S3 triangle with a pendant boundary vertex",
            suites: &["gauging-core", "wilson"],
        },
        CatalogEntry {
            id: "gauging-catalog",
            description: "the full (group, graph) catalog: isometry, image, dressing, dualities",
            suites: &["gauging-core-catalog", "gauging-image", "dressing", "dualities"],
        },
        CatalogEntry {
            id: "wilson-catalog",
            description: "loop/line commuting family and flux sectors across instances",
            suites: &["wilson-catalog"],
        },
        CatalogEntry {
            id: "qec-five-qubit",
            description: "erasure correctability and operator lifts on the five-qubit code",
            suites: &["qec"],
        },
        CatalogEntry {
            id: "happy-l0",
            description: "single-tile HaPPY code (dense and symplectic)",
            suites: &["holographic", "pipeline", "entropy"],
        },
        CatalogEntry {
            id: "happy-l2",
            description: "HaPPY code at cutoff 2 (symplectic)",
            suites: &["holographic"],
        },
        CatalogEntry {
            id: "gauged-lote-z2-l0",
            description: "gauged LOTE code on the single tile",
            suites: &["holographic", "domain-walls"],
        },
        CatalogEntry {
            id: "gauged-lote-z2-l1",
            description: "gauged LOTE code at cutoff 1 (symplectic)",
            suites: &["holographic", "pipeline"],
        },
        CatalogEntry {
            id: "entropy-c4",
            description: "Z2 perimeter-law entropy on the four-cycle",
            suites: &["entropy"],
        },
        CatalogEntry {
            id: "u1-truncation",
            description: "truncated U(1) covariant isometries on charge-configured lines",
            suites: &["u1"],
        },
        CatalogEntry {
            id: "domain-walls",
            description: "wall-removal search on gauged LOTE vs HaPPY",
            suites: &["domain-walls"],
        },
        CatalogEntry {
            id: "backend-consistency",
            description: "dense and symplectic backends agree on small instances",
            suites: &["backend"],
        },
    ]
}

/// Runs every check belonging to a suite name, in catalog order.
pub fn run_suite(suite: &str) -> Option<Vec<CheckOutcome>> {
    let out = match suite {
        "gauging-core-catalog" => vec![checks::check_gauging_isometry()],
        "gauging-image" => checks::check_flux_free_image(),
        "dressing" => vec![checks::check_dressing_undressing()],
        "dualities" => vec![checks::check_dualities()],
        "wilson-catalog" => vec![checks::check_wilson_algebra()],
        "qec" => vec![checks::check_qec_lemmas()],
        "holographic" => vec![checks::check_holographic_structure()],
        "pipeline" => vec![checks::check_pipeline()],
        "entropy" => vec![checks::check_entropy()],
        "u1" => vec![checks::check_u1_truncation()],
        "domain-walls" => vec![checks::check_domain_walls()],
        "backend" => vec![checks::check_backend_consistency()],
        _ => return None,
    };
    Some(out)
}

/// Runs a builtin per-instance scenario (gauging-core on one instance) or a
/// named aggregate scenario.
pub fn run_scenario(id: &str, suites: &[String]) -> Option<Vec<CheckOutcome>> {
    // Aggregate scenarios map directly to suites.
    let entry = catalog().into_iter().find(|e| e.id == id)?;
    let chosen: Vec<String> = if suites.is_empty() {
        entry.suites.iter().map(|s| s.to_string()).collect()
    } else {
        suites.to_vec()
    };
    let mut out = Vec::new();
    for suite in &chosen {
        if suite == "gauging-core" {
            let inst = builtin_instance(id)?;
            out.extend(checks::gauging_core_on(&inst));
            continue;
        }
        if suite == "wilson" {
            let inst = builtin_instance(id)?;
            out.extend(checks::wilson_on(&inst));
            continue;
        }
        match run_suite(suite) {
            Some(mut cs) => out.append(&mut cs),
            None => return None,
        }
    }
    Some(out)
}

fn builtin_instance(id: &str) -> Option<instances::GaugeInstance> {
    let inst = match id {
        "z2-line" => instances::line2(FiniteGroup::parse("Z2").ok()?).ok()?,
        "s3-line" => instances::line2(FiniteGroup::parse("S3").ok()?).ok()?,
        "d4-star3" => instances::star3(FiniteGroup::parse("D4").ok()?, false).ok()?,
        "z2-triangle-pendant" => {
            instances::triangle_pendant(FiniteGroup::parse("Z2").ok()?, false).ok()?
        }
        "s3-triangle-pendant" => {
            instances::triangle_pendant(FiniteGroup::parse("S3").ok()?, false).ok()?
        }
        _ => return None,
    };
    Some(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_deterministic_and_covers_suites() {
        let a = catalog();
        let b = catalog();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.id, y.id);
        }
        // Required ids.
        for id in ["happy-l0", "gauged-lote-z2-l1", "u1-truncation", "entropy-c4"] {
            assert!(a.iter().any(|e| e.id == id), "{id}");
        }
        // Every suite id named in the catalog resolves to checks.
        for e in &a {
            for s in e.suites {
                if *s == "gauging-core" || *s == "wilson" {
                    assert!(builtin_instance(e.id).is_some(), "{}", e.id);
                } else {
                    assert!(run_suite(s).is_some(), "suite {s}");
                }
            }
        }
    }
}
