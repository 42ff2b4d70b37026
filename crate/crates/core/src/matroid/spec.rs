use serde::{Deserialize, Serialize};

/// JSON description of a matroid instance.
///
/// The `family` tag selects the variant; each variant carries `n` either
/// explicitly (uniform) or implicitly (the number of edges, columns, ...).
/// Field names are part of the file format:
///
/// ```json
/// {"family": "uniform", "n": 4, "k": 2}
/// {"family": "partition", "block_sizes": [2, 3], "caps": [1, 2]}
/// {"family": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]}
/// {"family": "laminar", "n": 4, "sets": [[0, 1], [0, 1, 2, 3]], "caps": [1, 2]}
/// {"family": "transversal", "right": 2, "adjacency": [[0], [0, 1], [1]]}
/// {"family": "binary_linear", "rows": 2, "columns": ["10", "01", "11"]}
/// ```
///
/// Partition elements are assigned to blocks consecutively. A binary
/// column is a string of `0`/`1` characters, one per row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatroidSpec {
    Uniform {
        n: usize,
        k: usize,
    },
    Partition {
        block_sizes: Vec<usize>,
        caps: Vec<usize>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
    Laminar {
        n: usize,
        sets: Vec<Vec<usize>>,
        caps: Vec<usize>,
    },
    Transversal {
        right: usize,
        adjacency: Vec<Vec<usize>>,
    },
    BinaryLinear {
        rows: usize,
        columns: Vec<String>,
    },
}

impl MatroidSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            MatroidSpec::Uniform { .. } => "uniform",
            MatroidSpec::Partition { .. } => "partition",
            MatroidSpec::Graphic { .. } => "graphic",
            MatroidSpec::Laminar { .. } => "laminar",
            MatroidSpec::Transversal { .. } => "transversal",
            MatroidSpec::BinaryLinear { .. } => "binary_linear",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::MatroidInstance;

    #[test]
    fn every_family_round_trips() {
        let docs = [
            r#"{"family":"uniform","n":4,"k":2}"#,
            r#"{"family":"partition","block_sizes":[2,3],"caps":[1,2]}"#,
            r#"{"family":"graphic","vertices":3,"edges":[[0,1],[1,2],[0,2]]}"#,
            r#"{"family":"laminar","n":4,"sets":[[0,1],[0,1,2,3]],"caps":[1,2]}"#,
            r#"{"family":"transversal","right":2,"adjacency":[[0],[0,1],[1]]}"#,
            r#"{"family":"binary_linear","rows":2,"columns":["10","01","11"]}"#,
        ];
        for doc in docs {
            let spec: MatroidSpec = serde_json::from_str(doc).unwrap();
            assert_eq!(serde_json::to_string(&spec).unwrap(), doc);
            let m = MatroidInstance::new(spec).unwrap();
            assert!(m.n() > 0);
        }
    }

    #[test]
    fn unknown_fields_and_families_are_rejected() {
        assert!(serde_json::from_str::<MatroidSpec>(r#"{"family":"uniform","n":4,"k":2,"x":1}"#).is_err());
        assert!(serde_json::from_str::<MatroidSpec>(r#"{"family":"gammoid","n":4}"#).is_err());
    }
}
