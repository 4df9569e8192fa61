//! JSON document form of a [`PLSystem`]: every rational is a `"p/q"` string.

use serde::{Deserialize, Serialize};

use super::{Extension, PLSystem, RisingBlock, SystemError, SystemParts};
use crate::rational::{serde_frac, serde_frac_matrix, serde_frac_vec, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ExtensionDocument {
    Finite,
    Dilation {
        #[serde(with = "serde_frac")]
        factor: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub n: usize,
    #[serde(with = "serde_frac_vec")]
    pub division_points: Vec<Rational>,
    #[serde(with = "serde_frac_matrix")]
    pub anchors: Vec<Vec<Rational>>,
    pub blocks: Vec<[usize; 2]>,
    pub extension: ExtensionDocument,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub period_marks: Vec<usize>,
}

impl From<PLSystem> for SystemDocument {
    fn from(sys: PLSystem) -> Self {
        let parts = sys.into_parts();
        SystemDocument {
            n: parts.n,
            division_points: parts.division_points,
            anchors: parts.anchors,
            blocks: parts.blocks.iter().map(|b| [b.lo(), b.hi()]).collect(),
            extension: match parts.extension {
                Extension::Finite => ExtensionDocument::Finite,
                Extension::Dilation { factor } => ExtensionDocument::Dilation { factor },
            },
            period_marks: parts.period_marks,
        }
    }
}

impl TryFrom<SystemDocument> for PLSystem {
    type Error = SystemError;

    fn try_from(doc: SystemDocument) -> Result<Self, Self::Error> {
        let blocks = doc
            .blocks
            .iter()
            .map(|[lo, hi]| RisingBlock::new(*lo, *hi, doc.n))
            .collect::<Result<Vec<_>, _>>()?;
        PLSystem::from_parts(SystemParts {
            n: doc.n,
            division_points: doc.division_points,
            anchors: doc.anchors,
            blocks,
            extension: match doc.extension {
                ExtensionDocument::Finite => Extension::Finite,
                ExtensionDocument::Dilation { factor } => Extension::Dilation { factor },
            },
            period_marks: doc.period_marks,
        })
    }
}
