//! Towers of HNN-extensions over a free base: data model and JSON format.
//!
//! Generators are indexed tower-wide: base letters first, then one stable
//! letter per level in level order.  Levels are numbered from 1.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexvec::LexVec;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("SchemaError at {location}: {message}")]
    SchemaError { location: String, message: String },
    #[error("DuplicateGenerator: {0}")]
    DuplicateGenerator(String),
    #[error("UnknownGenerator: `{name}` at {location}")]
    UnknownGenerator { name: String, location: String },
    #[error("UnavailableGenerator: `{name}` used at level {level} before it is introduced")]
    UnavailableGenerator { name: String, level: usize },
    #[error("AssocShapeViolation at level {level}, pair {pair}: {message}")]
    AssocShapeViolation { level: usize, pair: usize, message: String },
    #[error("LengthMismatch at level {level}, pair {pair}: {gen} vs {image}")]
    LengthMismatch { level: usize, pair: usize, gen: LexVec, image: LexVec },
    #[error("HeightOrderViolation at level {level}, pair {pair}")]
    HeightOrderViolation { level: usize, pair: usize },
    #[error("StableHeightViolation at level {level}")]
    StableHeightViolation { level: usize },
    #[error("NonAdditiveGenerator at level {level}, pair {pair}: length {length} vs letter sum {letter_sum}")]
    NonAdditiveGenerator { level: usize, pair: usize, length: LexVec, letter_sum: LexVec },
    #[error("ConjugacyViolation at level {level}, condition ({condition}): {message}")]
    ConjugacyViolation { level: usize, condition: u8, message: String },
    #[error("IndexOutOfRange: {index} (tower has {levels} levels)")]
    IndexOutOfRange { index: usize, levels: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Base,
    Stable(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorId {
    pub name: String,
    pub kind: GeneratorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocPair {
    pub gen_word: Word,
    pub image_word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    /// Generator index of the stable letter.
    pub stable: usize,
    pub assoc: Vec<AssocPair>,
    pub is_centralizer_extension: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerPresentation {
    pub rank_n: usize,
    pub generators: Vec<GeneratorId>,
    pub base_count: usize,
    pub levels: Vec<Level>,
    /// Length of each generator, by generator index.
    pub lengths: Vec<LexVec>,
    /// Whether lengths came from the file (and are emitted on serialization).
    pub explicit_lengths: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTower {
    rank_n: usize,
    base_generators: Vec<String>,
    levels: Vec<RawLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lengths: Option<IndexMap<String, Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLevel {
    stable: String,
    assoc: Vec<RawAssoc>,
    is_centralizer_extension: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAssoc {
    gen_word: String,
    image_word: String,
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> TowerError {
    TowerError::SchemaError { location: location.into(), message: message.into() }
}

impl TowerPresentation {
    pub fn parse(bytes: &[u8]) -> Result<Self, TowerError> {
        let raw: RawTower = serde_json::from_slice(bytes).map_err(|e| {
            schema(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        Self::from_raw(raw)
    }

    pub fn parse_str(text: &str) -> Result<Self, TowerError> {
        Self::parse(text.as_bytes())
    }

    fn from_raw(raw: RawTower) -> Result<Self, TowerError> {
        if raw.rank_n == 0 {
            return Err(schema("rank_n", "rank must be positive"));
        }
        let mut generators: Vec<GeneratorId> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut push = |name: &str, kind, location: &str| -> Result<(), TowerError> {
            if name.is_empty() || name.contains(char::is_whitespace) || name.contains('^') {
                return Err(schema(location, format!("invalid generator name `{name}`")));
            }
            if !seen.insert(name.to_string()) {
                return Err(TowerError::DuplicateGenerator(name.to_string()));
            }
            generators.push(GeneratorId { name: name.to_string(), kind });
            Ok(())
        };
        for (i, name) in raw.base_generators.iter().enumerate() {
            push(name, GeneratorKind::Base, &format!("base_generators[{i}]"))?;
        }
        let base_count = raw.base_generators.len();
        for (i, level) in raw.levels.iter().enumerate() {
            push(&level.stable, GeneratorKind::Stable(i + 1), &format!("levels[{i}].stable"))?;
        }

        let mut tower = TowerPresentation {
            rank_n: raw.rank_n,
            generators,
            base_count,
            levels: Vec::new(),
            lengths: Vec::new(),
            explicit_lengths: raw.lengths.is_some(),
        };
        for (i, rl) in raw.levels.iter().enumerate() {
            let level_no = i + 1;
            if rl.assoc.is_empty() {
                return Err(schema(format!("levels[{i}].assoc"), "assoc list is empty"));
            }
            let mut assoc = Vec::new();
            for (k, pair) in rl.assoc.iter().enumerate() {
                let loc = format!("levels[{i}].assoc[{k}]");
                let gen_word = tower.parse_level_word(&pair.gen_word, level_no, &format!("{loc}.gen_word"))?;
                let image_word =
                    tower.parse_level_word(&pair.image_word, level_no, &format!("{loc}.image_word"))?;
                if gen_word.is_empty() || image_word.is_empty() {
                    return Err(schema(loc, "assoc words must be nonempty"));
                }
                if rl.is_centralizer_extension && gen_word != image_word {
                    return Err(schema(loc, "centralizer extension requires gen_word == image_word"));
                }
                assoc.push(AssocPair { gen_word, image_word });
            }
            tower.levels.push(Level {
                stable: base_count + i,
                assoc,
                is_centralizer_extension: rl.is_centralizer_extension,
            });
        }

        tower.lengths = match &raw.lengths {
            Some(map) => tower.explicit_length_table(map)?,
            None => tower.default_lengths(),
        };
        for (g, len) in tower.lengths.iter().enumerate() {
            let name = &tower.generators[g].name;
            if !len.is_positive() {
                return Err(schema(format!("lengths.{name}"), "generator lengths must be positive"));
            }
            if g < base_count && len.height() != 1 {
                return Err(schema(format!("lengths.{name}"), "base generators must have height 1"));
            }
        }
        Ok(tower)
    }

    fn explicit_length_table(&self, map: &IndexMap<String, Vec<i64>>) -> Result<Vec<LexVec>, TowerError> {
        for name in map.keys() {
            if self.generator_index(name).is_none() {
                return Err(TowerError::UnknownGenerator { name: name.clone(), location: "lengths".into() });
            }
        }
        self.generators
            .iter()
            .map(|g| {
                let coords = map
                    .get(&g.name)
                    .ok_or_else(|| schema(format!("lengths.{}", g.name), "missing length"))?;
                if coords.len() != self.rank_n {
                    return Err(schema(
                        format!("lengths.{}", g.name),
                        format!("expected {} coordinates, found {}", self.rank_n, coords.len()),
                    ));
                }
                Ok(LexVec::from_coords(coords))
            })
            .collect()
    }

    /// Base letters get `e_1`; a stable letter gets the unit vector one
    /// above the highest height among the letters of its assoc words.
    fn default_lengths(&self) -> Vec<LexVec> {
        let n = self.rank_n;
        let mut heights = vec![1usize; self.generators.len()];
        for level in &self.levels {
            let top = level
                .assoc
                .iter()
                .flat_map(|p| p.gen_word.0.iter().chain(p.image_word.0.iter()))
                .map(|l| heights[l.gen()])
                .max()
                .unwrap_or(1);
            heights[level.stable] = (top + 1).min(n);
        }
        heights.iter().map(|&h| LexVec::unit(n, h)).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn base_generators(&self) -> &[GeneratorId] {
        &self.generators[..self.base_count]
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.generators[gen].name
    }

    /// Level that introduces a generator (0 for base letters).
    pub fn generator_level(&self, gen: usize) -> usize {
        match self.generators[gen].kind {
            GeneratorKind::Base => 0,
            GeneratorKind::Stable(i) => i,
        }
    }

    pub fn length_of(&self, gen: usize) -> &LexVec {
        &self.lengths[gen]
    }

    /// Parse a word in the text syntax (`t^-1 x t`).
    pub fn parse_word(&self, text: &str) -> Result<Word, TowerError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (name, inverse) = match token.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (token, false),
            };
            let gen = self.generator_index(name).ok_or_else(|| TowerError::UnknownGenerator {
                name: name.to_string(),
                location: format!("word `{text}`"),
            })?;
            letters.push(Letter::new(gen, inverse));
        }
        Ok(Word(letters))
    }

    fn parse_level_word(&self, text: &str, level: usize, location: &str) -> Result<Word, TowerError> {
        let w = self.parse_word(text).map_err(|e| match e {
            TowerError::UnknownGenerator { name, .. } => {
                TowerError::UnknownGenerator { name, location: location.to_string() }
            }
            other => other,
        })?;
        for l in &w.0 {
            if self.generator_level(l.gen()) >= level {
                return Err(TowerError::UnavailableGenerator { name: self.name(l.gen()).to_string(), level });
            }
        }
        Ok(w)
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.format_letters(&w.0)
    }

    pub fn format_letters(&self, letters: &[Letter]) -> String {
        letters.iter().map(|l| self.format_letter(*l)).collect::<Vec<_>>().join(" ")
    }

    pub fn format_letter(&self, l: Letter) -> String {
        if l.is_inverse() {
            format!("{}^-1", self.name(l.gen()))
        } else {
            self.name(l.gen()).to_string()
        }
    }

    /// The tower of `G_{i+1}`: the base plus the first `i` levels.
    pub fn level_prefix(&self, i: usize) -> Result<TowerPresentation, TowerError> {
        if i > self.levels.len() {
            return Err(TowerError::IndexOutOfRange { index: i, levels: self.levels.len() });
        }
        let keep = self.base_count + i;
        Ok(TowerPresentation {
            rank_n: self.rank_n,
            generators: self.generators[..keep].to_vec(),
            base_count: self.base_count,
            levels: self.levels[..i].to_vec(),
            lengths: self.lengths[..keep].to_vec(),
            explicit_lengths: self.explicit_lengths,
        })
    }

    /// Defining relators `s^-1 c s φ(c)^-1`, one per assoc pair.
    pub fn relators(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for level in &self.levels {
            let s = Letter::new(level.stable, false);
            for pair in &level.assoc {
                let mut r = vec![s.inverse()];
                r.extend_from_slice(&pair.gen_word.0);
                r.push(s);
                r.extend(pair.image_word.inverse().0);
                out.push(Word(r));
            }
        }
        out
    }

    /// Generators whose length has a nonzero top coordinate.
    pub fn y_plus(&self) -> Vec<usize> {
        (0..self.generators.len()).filter(|&g| self.lengths[g].get(self.rank_n) != 0).collect()
    }

    fn to_raw(&self) -> RawTower {
        RawTower {
            rank_n: self.rank_n,
            base_generators: self.base_generators().iter().map(|g| g.name.clone()).collect(),
            levels: self
                .levels
                .iter()
                .map(|l| RawLevel {
                    stable: self.name(l.stable).to_string(),
                    assoc: l
                        .assoc
                        .iter()
                        .map(|p| RawAssoc {
                            gen_word: self.format_word(&p.gen_word),
                            image_word: self.format_word(&p.image_word),
                        })
                        .collect(),
                    is_centralizer_extension: l.is_centralizer_extension,
                })
                .collect(),
            lengths: self.explicit_lengths.then(|| {
                self.generators
                    .iter()
                    .zip(&self.lengths)
                    .map(|(g, l)| (g.name.clone(), l.coords().to_vec()))
                    .collect()
            }),
        }
    }

    /// Canonical JSON: two-space indentation and a trailing newline.
    pub fn serialize(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_raw()).expect("tower serializes");
        s.push('\n');
        s
    }
}
