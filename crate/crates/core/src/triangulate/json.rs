//! Triangulation files: versioned JSON with a bit-exact round trip.

use serde::{Deserialize, Serialize};

use super::{IdealTriangulation, TriError};

pub const SCHEMA: &str = "loomweaver-tri/1";

#[derive(Serialize, Deserialize)]
struct FileTriangulation {
    schema: String,
    #[serde(flatten)]
    tri: IdealTriangulation,
}

/// Serialises with the schema tag.  Output is deterministic: identical
/// triangulations yield byte-identical text.
pub fn write_json(tri: &IdealTriangulation) -> String {
    let file = FileTriangulation {
        schema: SCHEMA.to_string(),
        tri: tri.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("triangulation serialises");
    s.push('\n');
    s
}

pub fn read_json(text: &str) -> Result<IdealTriangulation, TriError> {
    let file: FileTriangulation = serde_json::from_str(text)?;
    if file.schema != SCHEMA {
        return Err(TriError::BadSchema(file.schema));
    }
    let tri = file.tri;
    for (i, t) in tri.tets.iter().enumerate() {
        for g in t.gluings.iter().flatten() {
            if g.other >= tri.tets.len() {
                return Err(TriError::Malformed(format!(
                    "tet {i} glued to missing tet {}",
                    g.other
                )));
            }
            let mut sorted = g.perm;
            sorted.sort_unstable();
            if sorted != [0, 1, 2, 3] {
                return Err(TriError::Malformed(format!(
                    "tet {i} has a non-bijective gluing permutation"
                )));
            }
        }
    }
    Ok(tri)
}
