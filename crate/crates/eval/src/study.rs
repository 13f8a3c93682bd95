//! Study dataset: measured distances, participant responses and the
//! algorithm classification rows they are compared against.
//!
//! A dataset is assembled from a fixture directory holding one distance
//! matrix (`kitchen_distances.json`), one responses file per situation
//! (`responses_sN.json`) and transcribed classification rows
//! (`algo_rows_sN.json`) for situations whose distances were never
//! measured. Situations whose target and references all appear in the
//! matrix get their rows computed instead, so the same code path serves
//! measured and transcribed rooms.

use std::path::Path;

use indexmap::IndexMap;
use semloc_core::{class_from_code, DistanceSemantics, ObjectId, ProximityClass};
use semloc_spd::{classify_proximity, ProximityThresholds};
use serde::Deserialize;

use crate::error::EvalError;

pub const PARTICIPANTS: usize = 10;

/// A participant's answer about one reference: a proximity class, or
/// `None` when they declined to relate the target to that reference.
pub type Response = Option<ProximityClass>;

/// One classification row: class-or-none per reference, in declaration
/// order.
pub type AlgoRow = IndexMap<ObjectId, Response>;

#[derive(Debug, Clone)]
pub struct Situation {
    pub id: u8,
    pub room: String,
    pub target: ObjectId,
    pub references: Vec<ObjectId>,
    /// Ten responses per reference, reconstructed from the marginals.
    pub responses: IndexMap<ObjectId, Vec<Response>>,
    edge_row: Option<AlgoRow>,
    inter_row: Option<AlgoRow>,
    /// Reference the algorithm selects under the nearest-only rule.
    pub nearest: ObjectId,
}

impl Situation {
    pub fn algo_row(&self, semantics: DistanceSemantics) -> Result<&AlgoRow, EvalError> {
        let row = match semantics {
            DistanceSemantics::EdgeToEdge => self.edge_row.as_ref(),
            DistanceSemantics::InterCentre => self.inter_row.as_ref(),
        };
        row.ok_or(EvalError::MissingSemantics {
            situation: self.id,
            semantics: match semantics {
                DistanceSemantics::EdgeToEdge => "edge-to-edge",
                DistanceSemantics::InterCentre => "inter-centre",
            },
        })
    }

    pub fn response_count(&self) -> usize {
        self.responses.values().map(Vec::len).sum()
    }
}

/// The measured distance matrix with per-object bounding radii, as loaded
/// from `kitchen_distances.json`.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    pub room: String,
    pub objects: Vec<ObjectId>,
    radii_m: IndexMap<ObjectId, f64>,
    edge_m: Vec<Vec<Option<f64>>>,
}

impl DistanceTable {
    pub fn contains(&self, id: &ObjectId) -> bool {
        self.objects.contains(id)
    }

    fn index_of(&self, id: &ObjectId) -> Option<usize> {
        self.objects.iter().position(|o| o == id)
    }

    /// Edge-to-edge distance in metres.
    pub fn edge_m(&self, a: &ObjectId, b: &ObjectId) -> Result<f64, EvalError> {
        let missing = || EvalError::MissingDistance {
            a: a.clone(),
            b: b.clone(),
        };
        let i = self.index_of(a).ok_or_else(missing)?;
        let j = self.index_of(b).ok_or_else(missing)?;
        self.edge_m[i][j].ok_or_else(missing)
    }

    /// Centre-to-centre distance: edge distance plus both bounding radii.
    pub fn inter_m(&self, a: &ObjectId, b: &ObjectId) -> Result<f64, EvalError> {
        let edge = self.edge_m(a, b)?;
        let ra = *self
            .radii_m
            .get(a)
            .ok_or_else(|| EvalError::MissingRadius(a.clone()))?;
        let rb = *self
            .radii_m
            .get(b)
            .ok_or_else(|| EvalError::MissingRadius(b.clone()))?;
        Ok(edge + ra + rb)
    }

    pub fn distance_m(
        &self,
        a: &ObjectId,
        b: &ObjectId,
        semantics: DistanceSemantics,
    ) -> Result<f64, EvalError> {
        match semantics {
            DistanceSemantics::EdgeToEdge => self.edge_m(a, b),
            DistanceSemantics::InterCentre => self.inter_m(a, b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StudyDataset {
    pub distances: DistanceTable,
    pub situations: Vec<Situation>,
}

#[derive(Deserialize)]
struct DistancesFile {
    room: String,
    unit: String,
    #[allow(dead_code)]
    semantics: DistanceSemantics,
    objects: Vec<ObjectId>,
    radii_cm: IndexMap<ObjectId, f64>,
    distances_cm: Vec<Vec<Option<f64>>>,
}

#[derive(Deserialize)]
struct PctCell {
    #[serde(rename = "VC")]
    vc: u32,
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "V")]
    v: u32,
    #[serde(rename = "NR")]
    nr: u32,
}

#[derive(Deserialize)]
struct ResponsesFile {
    situation: u8,
    room: String,
    target: ObjectId,
    references: Vec<ObjectId>,
    participants: usize,
    responses_pct: IndexMap<ObjectId, PctCell>,
}

#[derive(Deserialize)]
struct AlgoRowsFile {
    situation: u8,
    target: ObjectId,
    references: Vec<ObjectId>,
    edge_to_edge: IndexMap<ObjectId, Option<String>>,
    inter_centre: IndexMap<ObjectId, Option<String>>,
    nearest: ObjectId,
}

/// First id where a transcribed reference list departs from the responses
/// file, so a row file pasted for the wrong situation fails loudly.
fn first_reference_mismatch(found: &[ObjectId], expected: &[ObjectId]) -> Option<ObjectId> {
    if found.len() != expected.len() {
        return found
            .get(expected.len())
            .or_else(|| expected.get(found.len()))
            .cloned();
    }
    found
        .iter()
        .zip(expected)
        .find(|(a, b)| a != b)
        .map(|(a, _)| a.clone())
}

fn parse_distances(file: DistancesFile) -> Result<DistanceTable, EvalError> {
    if file.unit != "cm" {
        return Err(EvalError::BadUnit(file.unit));
    }
    let n = file.objects.len();
    if file.distances_cm.len() != n || file.distances_cm.iter().any(|row| row.len() != n) {
        return Err(EvalError::MatrixShape {
            rows: file.distances_cm.len(),
            objects: n,
        });
    }
    for i in 0..n {
        if file.distances_cm[i][i].is_some() {
            return Err(EvalError::NonEmptyDiagonal(file.objects[i].clone()));
        }
        for j in (i + 1)..n {
            if file.distances_cm[i][j] != file.distances_cm[j][i] {
                return Err(EvalError::AsymmetricMatrix {
                    a: file.objects[i].clone(),
                    b: file.objects[j].clone(),
                });
            }
            if file.distances_cm[i][j].is_none() {
                return Err(EvalError::MissingDistance {
                    a: file.objects[i].clone(),
                    b: file.objects[j].clone(),
                });
            }
        }
    }
    let radii_m = file
        .objects
        .iter()
        .map(|id| {
            file.radii_cm
                .get(id)
                .map(|cm| (id.clone(), cm / 100.0))
                .ok_or_else(|| EvalError::MissingRadius(id.clone()))
        })
        .collect::<Result<IndexMap<_, _>, _>>()?;
    let edge_m = file
        .distances_cm
        .iter()
        .map(|row| row.iter().map(|cell| cell.map(|cm| cm / 100.0)).collect())
        .collect();
    Ok(DistanceTable {
        room: file.room,
        objects: file.objects,
        radii_m,
        edge_m,
    })
}

/// Expands one percentage cell into per-participant responses. The first
/// `vc/10` participants answer very close, the next `n/10` near, and so
/// on; metrics depend only on the counts, never on this ordering.
fn expand_cell(
    situation: u8,
    reference: &ObjectId,
    cell: &PctCell,
) -> Result<Vec<Response>, EvalError> {
    let classes = [
        (cell.vc, Some(ProximityClass::VeryClose)),
        (cell.n, Some(ProximityClass::Near)),
        (cell.v, Some(ProximityClass::InVicinity)),
        (cell.nr, None),
    ];
    let total: u32 = classes.iter().map(|(pct, _)| pct).sum();
    if total != 100 {
        return Err(EvalError::BadDistribution {
            situation,
            reference: reference.clone(),
            total,
        });
    }
    let mut out = Vec::with_capacity(PARTICIPANTS);
    for (pct, class) in classes {
        if pct % 10 != 0 {
            return Err(EvalError::BadPercentage {
                situation,
                reference: reference.clone(),
                pct,
            });
        }
        out.extend(std::iter::repeat_n(class, (pct / 10) as usize));
    }
    Ok(out)
}

fn parse_code_row(
    situation: u8,
    references: &[ObjectId],
    raw: &IndexMap<ObjectId, Option<String>>,
) -> Result<AlgoRow, EvalError> {
    let mut row = AlgoRow::new();
    for id in references {
        let cell = raw.get(id).ok_or_else(|| EvalError::ReferenceMismatch {
            situation,
            id: id.clone(),
        })?;
        let class = match cell {
            None => None,
            Some(code) => class_from_code(code).map_err(|_| EvalError::BadClassCode {
                situation,
                code: code.clone(),
            })?,
        };
        row.insert(id.clone(), class);
    }
    for id in raw.keys() {
        if !references.contains(id) {
            return Err(EvalError::ReferenceMismatch {
                situation,
                id: id.clone(),
            });
        }
    }
    Ok(row)
}

/// Computes a classification row from the distance table.
pub fn computed_row(
    table: &DistanceTable,
    target: &ObjectId,
    references: &[ObjectId],
    semantics: DistanceSemantics,
    thresholds: &ProximityThresholds,
) -> Result<AlgoRow, EvalError> {
    let mut row = AlgoRow::new();
    for id in references {
        let d = table.distance_m(target, id, semantics)?;
        row.insert(id.clone(), classify_proximity(d, thresholds)?);
    }
    Ok(row)
}

fn nearest_reference(
    table: &DistanceTable,
    target: &ObjectId,
    references: &[ObjectId],
) -> Result<ObjectId, EvalError> {
    // Radii shift every candidate equally enough not to matter here: the
    // nearest edge distance is also the nearest centre distance for any
    // plausible radii, so the edge matrix decides.
    references
        .iter()
        .map(|id| table.edge_m(target, id).map(|d| (d, id)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .min_by(|(da, _), (db, _)| da.total_cmp(db))
        .map(|(_, id)| id.clone())
        .ok_or(EvalError::EmptyScope)
}

/// Loads a bare distance-matrix file (the `kitchen_distances.json`
/// format) without the rest of a study directory.
pub fn load_distances(path: impl AsRef<Path>) -> Result<DistanceTable, EvalError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| EvalError::from(e).in_file(path))?;
    let file: DistancesFile =
        serde_json::from_str(&text).map_err(|e| EvalError::from(e).in_file(path))?;
    parse_distances(file)
}

impl StudyDataset {
    /// Loads a fixture directory laid out like `fixtures/study/`.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self, EvalError> {
        Self::load_dir_with(dir, &ProximityThresholds::default())
    }

    pub fn load_dir_with(
        dir: impl AsRef<Path>,
        thresholds: &ProximityThresholds,
    ) -> Result<Self, EvalError> {
        let dir = dir.as_ref();
        let read = |name: &str| -> Result<String, EvalError> {
            std::fs::read_to_string(dir.join(name))
                .map_err(|e| EvalError::from(e).in_file(dir.join(name)))
        };

        let distances: DistancesFile = serde_json::from_str(&read("kitchen_distances.json")?)
            .map_err(|e| EvalError::from(e).in_file(dir.join("kitchen_distances.json")))?;
        let table = parse_distances(distances)?;

        let mut situations = Vec::new();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if !(name.starts_with("responses_s") && name.ends_with(".json")) {
                continue;
            }
            let text =
                std::fs::read_to_string(&path).map_err(|e| EvalError::from(e).in_file(&path))?;
            let file: ResponsesFile =
                serde_json::from_str(&text).map_err(|e| EvalError::from(e).in_file(&path))?;
            situations.push(Self::build_situation(dir, &table, file, thresholds)?);
        }
        situations.sort_by_key(|s| s.id);
        for pair in situations.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(EvalError::DuplicateSituation(pair[0].id));
            }
        }
        Ok(Self {
            distances: table,
            situations,
        })
    }

    fn build_situation(
        dir: &Path,
        table: &DistanceTable,
        file: ResponsesFile,
        thresholds: &ProximityThresholds,
    ) -> Result<Situation, EvalError> {
        if file.participants != PARTICIPANTS {
            return Err(EvalError::BadParticipantCount {
                situation: file.situation,
                participants: file.participants,
            });
        }
        let mut responses = IndexMap::new();
        for id in &file.references {
            let cell = file
                .responses_pct
                .get(id)
                .ok_or_else(|| EvalError::ReferenceMismatch {
                    situation: file.situation,
                    id: id.clone(),
                })?;
            responses.insert(id.clone(), expand_cell(file.situation, id, cell)?);
        }
        for id in file.responses_pct.keys() {
            if !file.references.contains(id) {
                return Err(EvalError::ReferenceMismatch {
                    situation: file.situation,
                    id: id.clone(),
                });
            }
        }

        let measured =
            table.contains(&file.target) && file.references.iter().all(|id| table.contains(id));
        let (edge_row, inter_row, nearest) = if measured {
            (
                Some(computed_row(
                    table,
                    &file.target,
                    &file.references,
                    DistanceSemantics::EdgeToEdge,
                    thresholds,
                )?),
                Some(computed_row(
                    table,
                    &file.target,
                    &file.references,
                    DistanceSemantics::InterCentre,
                    thresholds,
                )?),
                nearest_reference(table, &file.target, &file.references)?,
            )
        } else {
            let name = format!("algo_rows_s{}.json", file.situation);
            let path = dir.join(&name);
            let text =
                std::fs::read_to_string(&path).map_err(|e| EvalError::from(e).in_file(&path))?;
            let rows: AlgoRowsFile =
                serde_json::from_str(&text).map_err(|e| EvalError::from(e).in_file(&path))?;
            if rows.situation != file.situation {
                return Err(EvalError::SituationMismatch {
                    expected: file.situation,
                    found: rows.situation,
                });
            }
            if rows.target != file.target {
                return Err(EvalError::ReferenceMismatch {
                    situation: file.situation,
                    id: rows.target.clone(),
                });
            }
            if let Some(id) = first_reference_mismatch(&rows.references, &file.references) {
                return Err(EvalError::ReferenceMismatch {
                    situation: file.situation,
                    id,
                });
            }
            if !file.references.contains(&rows.nearest) {
                return Err(EvalError::ReferenceMismatch {
                    situation: file.situation,
                    id: rows.nearest.clone(),
                });
            }
            (
                Some(parse_code_row(
                    file.situation,
                    &file.references,
                    &rows.edge_to_edge,
                )?),
                Some(parse_code_row(
                    file.situation,
                    &file.references,
                    &rows.inter_centre,
                )?),
                rows.nearest,
            )
        };

        Ok(Situation {
            id: file.situation,
            room: file.room,
            target: file.target,
            references: file.references,
            responses,
            edge_row,
            inter_row,
            nearest,
        })
    }

    pub fn situation(&self, id: u8) -> Option<&Situation> {
        self.situations.iter().find(|s| s.id == id)
    }

    pub fn response_count(&self) -> usize {
        self.situations.iter().map(Situation::response_count).sum()
    }
}
