//! Qualitative proximity classes and semantic position descriptions.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::object::ObjectId;

/// Qualitative distance class. Variants are declared from closest to
/// farthest, so the derived order ranks `VeryClose < Near < InVicinity`
/// ("smaller" means "closer"). Distances beyond the vicinity bound map to
/// no class at all (`None`), conventionally written `NR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProximityClass {
    VeryClose,
    Near,
    InVicinity,
}

impl ProximityClass {
    /// Short code used in study tables: VC, N or V.
    pub fn code(self) -> &'static str {
        match self {
            ProximityClass::VeryClose => "VC",
            ProximityClass::Near => "N",
            ProximityClass::InVicinity => "V",
        }
    }

    /// Code for an optional class; `None` renders as `NR` (no relation).
    pub fn code_of(class: Option<ProximityClass>) -> &'static str {
        class.map_or("NR", ProximityClass::code)
    }

    /// Closeness rank with `None` ranked strictly farthest.
    pub fn rank_of(class: Option<ProximityClass>) -> u8 {
        match class {
            Some(ProximityClass::VeryClose) => 0,
            Some(ProximityClass::Near) => 1,
            Some(ProximityClass::InVicinity) => 2,
            None => 3,
        }
    }
}

/// Parses a table code (`VC`, `N`, `V`, `NR`) into an optional class.
pub fn class_from_code(code: &str) -> Result<Option<ProximityClass>, CoreError> {
    match code {
        "VC" => Ok(Some(ProximityClass::VeryClose)),
        "N" => Ok(Some(ProximityClass::Near)),
        "V" => Ok(Some(ProximityClass::InVicinity)),
        "NR" => Ok(None),
        other => Err(CoreError::UnknownCode(other.to_owned())),
    }
}

/// What a fragment asserts about its subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FragmentKind {
    Room,
    Proximity,
    Alignment,
}

/// One qualitative statement about a subject's position.
///
/// `references` holds the room id for room fragments, the reference object
/// for proximity fragments and the two endpoints for alignment fragments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpdFragment {
    pub kind: FragmentKind,
    pub subject: ObjectId,
    pub references: Vec<ObjectId>,
    /// Proximity fragments carry their class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<ProximityClass>,
    /// Distance behind a proximity fragment; orders fragments in an SPD.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_m: Option<f64>,
    pub text: String,
}

impl SpdFragment {
    pub fn room(subject: ObjectId, room: ObjectId, text: String) -> Result<Self, CoreError> {
        Self::build(FragmentKind::Room, subject, vec![room], None, None, text)
    }

    pub fn proximity(
        subject: ObjectId,
        reference: ObjectId,
        class: ProximityClass,
        distance_m: f64,
        text: String,
    ) -> Result<Self, CoreError> {
        Self::build(
            FragmentKind::Proximity,
            subject,
            vec![reference],
            Some(class),
            Some(distance_m),
            text,
        )
    }

    pub fn alignment(
        subject: ObjectId,
        ref_a: ObjectId,
        ref_b: ObjectId,
        text: String,
    ) -> Result<Self, CoreError> {
        Self::build(
            FragmentKind::Alignment,
            subject,
            vec![ref_a, ref_b],
            None,
            None,
            text,
        )
    }

    fn build(
        kind: FragmentKind,
        subject: ObjectId,
        references: Vec<ObjectId>,
        detail: Option<ProximityClass>,
        distance_m: Option<f64>,
        text: String,
    ) -> Result<Self, CoreError> {
        let fragment = Self {
            kind,
            subject,
            references,
            detail,
            distance_m,
            text,
        };
        fragment.validate()?;
        Ok(fragment)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.text.is_empty() {
            return Err(CoreError::EmptyFragmentText);
        }
        let expected = match self.kind {
            FragmentKind::Room | FragmentKind::Proximity => 1,
            FragmentKind::Alignment => 2,
        };
        if self.references.len() != expected {
            return Err(CoreError::ReferenceCount {
                kind: self.kind,
                expected,
                got: self.references.len(),
            });
        }
        Ok(())
    }
}

/// A full semantic position description for one subject.
///
/// `rendered` is always the fragment texts joined with `", "`, in the order
/// the fragments are stored; an SPD with no fragments renders as the empty
/// string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spd {
    pub subject: ObjectId,
    pub fragments: Vec<SpdFragment>,
    pub rendered: String,
}

impl Spd {
    pub fn empty(subject: ObjectId) -> Self {
        Self {
            subject,
            fragments: Vec::new(),
            rendered: String::new(),
        }
    }

    /// Builds an SPD from fragments, keeping their order.
    pub fn from_fragments(
        subject: ObjectId,
        fragments: Vec<SpdFragment>,
    ) -> Result<Self, CoreError> {
        for fragment in &fragments {
            fragment.validate()?;
            if fragment.subject != subject {
                return Err(CoreError::MixedSubjects(subject, fragment.subject.clone()));
            }
        }
        let rendered = fragments
            .iter()
            .map(|f| f.text.as_str())
            .collect::<Vec<_>>()
            .join(", ");
        Ok(Self {
            subject,
            fragments,
            rendered,
        })
    }
}
