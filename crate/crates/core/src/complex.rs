//! Combinatorial blueprint of the space obtained by gluing tori onto a rose
//! of circles, one torus per level, with its metric preconditions.
//!
//! Circle lengths are the integer weights of the weight system, standing in
//! for the `Z^n` lengths that a metric space cannot carry.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::Ball;
use crate::tower::{TowerError, TowerPresentation};
use crate::validate::conjugates_onto;
use crate::weights::{weighted_length, WeightSystem, WeightsError};
use crate::words::{Flag, Group, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("WeightMismatch at level {level}, circle {circle}: alpha weighs {alpha}, beta weighs {beta}")]
    WeightMismatch { level: usize, circle: usize, alpha: u64, beta: u64 },
    #[error("UnknownFormat: `{0}` (expected json or dot)")]
    UnknownFormat(String),
    #[error("BlueprintParseError: {0}")]
    Parse(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Weights(#[from] WeightsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Circle {
    pub id: String,
    pub length: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusGluing {
    pub level: usize,
    pub stable: String,
    pub circles: Vec<Circle>,
    pub alpha: Vec<Vec<String>>,
    pub beta: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceBlueprint {
    pub rose: Vec<Circle>,
    pub gluings: Vec<TorusGluing>,
}

impl SpaceBlueprint {
    fn circle_length(&self, name: &str) -> Option<u64> {
        self.rose.iter().find(|c| c.id == name).map(|c| c.length)
    }

    /// Weight of an attaching path: the sum of the rose circles it runs
    /// through.
    pub fn path_weight(&self, path: &[String]) -> Option<u64> {
        path.iter().map(|e| self.circle_length(e.strip_suffix("^-1").unwrap_or(e))).sum()
    }
}

fn path(tower: &TowerPresentation, w: &[Letter]) -> Vec<String> {
    w.iter().map(|&l| tower.format_letter(l)).collect()
}

pub fn build_blueprint(tower: &TowerPresentation, ws: &WeightSystem) -> Result<SpaceBlueprint, ComplexError> {
    let group = Group::new(tower)?;
    let weights = ws.as_vec();
    let rose = tower.generators.iter().zip(&weights).map(|(g, &w)| Circle { id: g.name.clone(), length: w }).collect();
    let mut gluings = Vec::new();
    for (i, level) in tower.levels.iter().enumerate() {
        let lv = i + 1;
        let mut circles = Vec::new();
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        for (j, pair) in level.assoc.iter().enumerate() {
            let (a, b) = (&pair.gen_word.0, &pair.image_word.0);
            let (wa, wb) = (ws.word_weight(a), ws.word_weight(b));
            if wa != wb {
                return Err(ComplexError::WeightMismatch { level: lv, circle: j + 1, alpha: wa, beta: wb });
            }
            let length = weighted_length(a, ws, &group, wa)?;
            circles.push(Circle { id: format!("T{lv}.c{}", j + 1), length });
            alpha.push(path(tower, a));
            beta.push(path(tower, b));
        }
        gluings.push(TorusGluing { level: lv, stable: tower.name(level.stable).to_string(), circles, alpha, beta });
    }
    Ok(SpaceBlueprint { rose, gluings })
}

/// Generators and relators read off the blueprint, one relator
/// `s^-1 alpha_j s beta_j^-1` per circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

fn invert_edge(e: &str) -> String {
    match e.strip_suffix("^-1") {
        Some(base) => base.to_string(),
        None => format!("{e}^-1"),
    }
}

pub fn fundamental_group(b: &SpaceBlueprint) -> Presentation {
    let mut relators = Vec::new();
    for g in &b.gluings {
        for (a, be) in g.alpha.iter().zip(&g.beta) {
            let mut r = vec![format!("{}^-1", g.stable)];
            r.extend(a.iter().cloned());
            r.push(g.stable.clone());
            r.extend(be.iter().rev().map(|e| invert_edge(e)));
            relators.push(r.join(" "));
        }
    }
    Presentation { generators: b.rose.iter().map(|c| c.id.clone()).collect(), relators }
}

/// The presentation of a tower in the same normalization.
pub fn tower_presentation(tower: &TowerPresentation) -> Presentation {
    Presentation {
        generators: tower.generators.iter().map(|g| g.name.clone()).collect(),
        relators: tower.relators().iter().map(|r| tower.format_word(r)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitStatus {
    /// Centralizer extension: both ends attach along the same torus.
    Skipped,
    VerifiedWithinRadius,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircleCheck {
    pub level: usize,
    pub circle: usize,
    pub length: u64,
    pub alpha_weight: Option<u64>,
    pub beta_weight: Option<u64>,
    pub length_match: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitCheck {
    pub level: usize,
    pub status: OrbitStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingReport {
    pub radius: u64,
    pub circles: Vec<CircleCheck>,
    pub orbits: Vec<OrbitCheck>,
}

impl GluingReport {
    pub fn passed(&self) -> bool {
        self.circles.iter().all(|c| c.length_match) && self.orbits.iter().all(|o| o.status != OrbitStatus::Violated)
    }

    pub fn first_length_failure(&self) -> Option<&CircleCheck> {
        self.circles.iter().find(|c| !c.length_match)
    }
}

pub fn verify_gluing(b: &SpaceBlueprint, tower: &TowerPresentation, radius: u64) -> Result<GluingReport, ComplexError> {
    let group = Group::new(tower)?;
    let mut circles = Vec::new();
    let mut orbits = Vec::new();
    for g in &b.gluings {
        for (j, c) in g.circles.iter().enumerate() {
            let (aw, bw) = (b.path_weight(&g.alpha[j]), b.path_weight(&g.beta[j]));
            circles.push(CircleCheck {
                level: g.level,
                circle: j + 1,
                length: c.length,
                alpha_weight: aw,
                beta_weight: bw,
                length_match: aw == Some(c.length) && bw == Some(c.length),
            });
        }
        let level = &tower.levels[g.level - 1];
        if level.is_centralizer_extension {
            orbits.push(OrbitCheck { level: g.level, status: OrbitStatus::Skipped, conjugator: None });
            continue;
        }
        let data = group.level(g.level);
        let (a, bf): (&Flag, &Flag) = (&data.domain, &data.image);
        let prefix = tower.level_prefix(g.level - 1)?;
        let prefix_group = Group::new(&prefix)?;
        let weights: Vec<u64> = prefix.generators.iter().map(|gen| b.circle_length(&gen.name).unwrap_or(1)).collect();
        let ball = Ball::build(&prefix_group, &weights, radius);
        let found = ball.elements.iter().find(|x| conjugates_onto(&group, x, a, bf));
        orbits.push(match found {
            Some(x) => OrbitCheck {
                level: g.level,
                status: OrbitStatus::Violated,
                conjugator: Some(tower.format_letters(x)),
            },
            None => OrbitCheck { level: g.level, status: OrbitStatus::VerifiedWithinRadius, conjugator: None },
        });
    }
    Ok(GluingReport { radius, circles, orbits })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn emit(b: &SpaceBlueprint, format: &str) -> Result<String, ComplexError> {
    match format {
        "json" => Ok(serde_json::to_string_pretty(b).expect("blueprint serializes") + "\n"),
        "dot" => {
            let mut out = String::from("digraph blueprint {\n");
            let rose: Vec<String> = b.rose.iter().map(|c| format!("{}({})", c.id, c.length)).collect();
            out.push_str(&format!("  \"rose\" [shape=circle, label=\"rose: {}\"];\n", dot_escape(&rose.join(" "))));
            for g in &b.gluings {
                let node = format!("T{}", g.level);
                let cs: Vec<String> = g.circles.iter().map(|c| format!("{}({})", c.id, c.length)).collect();
                out.push_str(&format!(
                    "  \"{node}\" [shape=box, label=\"{node}: stable {} | {}\"];\n",
                    dot_escape(&g.stable),
                    dot_escape(&cs.join(" "))
                ));
                for (j, c) in g.circles.iter().enumerate() {
                    for (side, p) in [("alpha", &g.alpha[j]), ("beta", &g.beta[j])] {
                        out.push_str(&format!(
                            "  \"{node}\" -> \"rose\" [label=\"{side} {}: {}\"];\n",
                            dot_escape(&c.id),
                            dot_escape(&p.join(" "))
                        ));
                    }
                }
            }
            out.push_str("}\n");
            Ok(out)
        }
        other => Err(ComplexError::UnknownFormat(other.to_string())),
    }
}

pub fn parse_blueprint(text: &str) -> Result<SpaceBlueprint, ComplexError> {
    serde_json::from_str(text).map_err(|e| ComplexError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::weights::{build_constraints, solve_weights};

    fn blueprint(t: &TowerPresentation) -> SpaceBlueprint {
        let ws = solve_weights(&build_constraints(t)).unwrap();
        build_blueprint(t, &ws).unwrap()
    }

    #[test]
    fn rose_and_gluings() {
        let b = blueprint(&fixtures::f2());
        assert_eq!(b.rose.len(), 2);
        assert!(b.gluings.is_empty());

        let b = blueprint(&fixtures::t1());
        assert_eq!(b.rose.len(), 3);
        assert_eq!(b.gluings.len(), 1);
        assert_eq!(b.gluings[0].circles, vec![Circle { id: "T1.c1".into(), length: 2 }]);
        assert_eq!(b.gluings[0].alpha, vec![vec!["x".to_string(), "y".to_string()]]);
        assert_eq!(b.gluings[0].alpha, b.gluings[0].beta);

        let b = blueprint(&fixtures::t2());
        let g = &b.gluings[0];
        assert_eq!(g.circles[0].length, 3);
        assert_eq!(g.alpha[0].join(" "), "x x y");
        assert_eq!(g.beta[0].join(" "), "x y y");
        assert_eq!(b.path_weight(&g.alpha[0]), Some(3));
        assert_eq!(b.path_weight(&g.beta[0]), Some(3));
    }

    #[test]
    fn mismatched_weights_are_rejected() {
        let t = fixtures::t2_broken();
        let err = build_blueprint(&t, &WeightSystem::unit(&t)).unwrap_err();
        assert!(matches!(err, ComplexError::WeightMismatch { level: 1, circle: 1, alpha: 3, beta: 2 }));
    }

    #[test]
    fn presentations_match() {
        assert!(fundamental_group(&blueprint(&fixtures::f2())).relators.is_empty());
        let t1 = fixtures::t1();
        assert_eq!(fundamental_group(&blueprint(&t1)).relators, vec!["t^-1 x y t y^-1 x^-1".to_string()]);
        for (_, t) in fixtures::valid() {
            assert_eq!(fundamental_group(&blueprint(&t)), tower_presentation(&t));
        }
        assert_eq!(fundamental_group(&blueprint(&fixtures::t3())).relators.len(), 3);
    }

    #[test]
    fn gluing_checks() {
        let t1 = fixtures::t1();
        let r = verify_gluing(&blueprint(&t1), &t1, 4).unwrap();
        assert!(r.passed());
        assert_eq!(r.orbits[0].status, OrbitStatus::Skipped);

        let t2 = fixtures::t2();
        let mut b = blueprint(&t2);
        let r = verify_gluing(&b, &t2, 4).unwrap();
        assert!(r.passed());
        assert_eq!(r.orbits[0].status, OrbitStatus::VerifiedWithinRadius);

        b.gluings[0].beta[0] = vec!["x".into(), "y".into()];
        let r = verify_gluing(&b, &t2, 4).unwrap();
        let bad = r.first_length_failure().unwrap();
        assert_eq!((bad.level, bad.circle, bad.beta_weight), (1, 1, Some(2)));
    }

    #[test]
    fn emitters() {
        let b = blueprint(&fixtures::f2());
        let json = emit(&b, "json").unwrap();
        assert!(json.contains("\"gluings\": []"));
        let b = blueprint(&fixtures::t1());
        let dot = emit(&b, "dot").unwrap();
        assert_eq!(dot.matches("[shape=circle").count(), 1);
        assert_eq!(dot.matches("[shape=box").count(), 1);
        assert_eq!(dot.matches(" -> ").count(), 2);
        assert!(matches!(emit(&b, "svg"), Err(ComplexError::UnknownFormat(_))));
        for (_, t) in fixtures::valid() {
            let once = emit(&blueprint(&t), "json").unwrap();
            let twice = emit(&parse_blueprint(&once).unwrap(), "json").unwrap();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn prefixes_give_prefix_blueprints() {
        let t3 = fixtures::t3();
        let full = blueprint(&t3);
        let ws = solve_weights(&build_constraints(&t3)).unwrap();
        for i in 0..=t3.levels.len() {
            let p = t3.level_prefix(i).unwrap();
            let sub = WeightSystem { weights: ws.weights.iter().take(p.generator_count()).map(|(k, v)| (k.clone(), *v)).collect() };
            let b = build_blueprint(&p, &sub).unwrap();
            assert_eq!(b.rose[..], full.rose[..b.rose.len()]);
            assert_eq!(b.gluings[..], full.gluings[..i]);
        }
    }
}
