//! JSON page schema: a diff-friendly, deterministic serialization of one
//! page of a spectral sequence with class fates. Ids are the canonical
//! monomial strings.

use crate::algebra::{monomial_position, Position};
use crate::sseq::{FateStatus, PageStack};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassDto {
    pub id: String,
    pub stem: i64,
    pub filtration: i64,
    pub monomial: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DifferentialDto {
    pub page: i64,
    pub source_id: String,
    pub target_ids: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FateDto {
    pub id: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub page: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PageDto {
    pub model: String,
    pub parameters: String,
    pub page: i64,
    pub range: RangeDto,
    pub classes: Vec<ClassDto>,
    pub differentials: Vec<DifferentialDto>,
    pub fates: Vec<FateDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RangeDto {
    pub min_stem: i64,
    pub max_stem: i64,
    pub max_filtration: i64,
    pub max_weight: i64,
}

fn status_str(s: FateStatus) -> &'static str {
    match s {
        FateStatus::SurvivesInRange => "survives-to-Einf-in-range",
        FateStatus::SupportsDr => "supports-dr",
        FateStatus::KilledByDr => "killed-by-dr",
        FateStatus::RangeLimited => "range-limited",
    }
}

/// Snapshot the current page of a stack. Classes are the page's coset
/// representative leads; differentials are the arrows of the page that was
/// just about to run (`page`); fates cover the listed classes.
pub fn page_dto(stack: &PageStack, page: i64) -> PageDto {
    let model = &stack.model;
    let mut classes = Vec::new();
    let mut fates = Vec::new();
    for key in stack.keys().collect::<Vec<_>>() {
        for (lead, _) in stack.reps_at(key) {
            let pos = monomial_position(&lead, &model.table, model.convention)
                .expect("basis monomial");
            let (stem, filt) = match pos {
                Position::Slice { stem, filtration } => (stem, filtration),
                Position::May { s, t, m } => {
                    let _ = s;
                    (t - key.w, m)
                }
            };
            let id = lead.to_string();
            classes.push(ClassDto {
                id: id.clone(),
                stem,
                filtration: filt,
                monomial: id.clone(),
            });
            if let Ok(f) = stack.fate(&lead) {
                fates.push(FateDto {
                    id,
                    status: status_str(f.status).to_string(),
                    page: f.page,
                    partner: f.partner,
                });
            }
        }
    }
    classes.sort_by(|a, b| (a.stem, a.filtration, &a.id).cmp(&(b.stem, b.filtration, &b.id)));
    fates.sort_by(|a, b| a.id.cmp(&b.id));
    let differentials = stack
        .page_arrows(page)
        .iter()
        .map(|a| DifferentialDto {
            page: a.page,
            source_id: a.source.to_string(),
            target_ids: a.targets.iter().map(|t| t.to_string()).collect(),
        })
        .collect();
    PageDto {
        model: model.name.to_string(),
        parameters: String::new(),
        page,
        range: RangeDto {
            min_stem: stack.range.min_stem,
            max_stem: stack.range.max_stem,
            max_filtration: stack.range.max_filt,
            max_weight: stack.range.max_weight,
        },
        classes,
        differentials,
        fates,
    }
}

pub fn to_json_string(dto: &PageDto) -> String {
    serde_json::to_string_pretty(dto).expect("serializable")
}

pub fn from_json_str(s: &str) -> Result<PageDto, serde_json::Error> {
    serde_json::from_str(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::sseq::{build_e_page, Range};

    #[test]
    fn round_trip_identity() {
        let model = models::slice_bpr(8);
        let mut stack = build_e_page(&model, Range::stems(8, 8)).unwrap();
        stack.run_to(3).unwrap();
        let dto = page_dto(&stack, 3);
        let s = to_json_string(&dto);
        let back = from_json_str(&s).unwrap();
        assert_eq!(dto, back);
        assert_eq!(s, to_json_string(&back));
    }

    #[test]
    fn determinism_across_runs() {
        let make = || {
            let model = models::slice_bpr(10);
            let mut stack = build_e_page(&model, Range::stems(10, 10)).unwrap();
            stack.run_to(7).unwrap();
            to_json_string(&page_dto(&stack, 7))
        };
        assert_eq!(make(), make());
    }
}
