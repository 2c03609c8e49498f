//! Built-in example inputs, addressable by name from files and the command line.
//!
//! | name | contents |
//! |------|----------|
//! | `paper-4-2` | parity-check matrix of a ternary `[4,2]` code |
//! | `paper-cover-16` | a degree-4 cover of its Tanner graph with a nontrivial pseudocodeword |
//! | `paper-f` | the pseudocodeword matrix of that cover |
//! | `paper-hs` | the `{0,1}` row `(1,0,1,1)` |
//! | `paper-fhat` | the column-swapped matrix lifted against `paper-hs` |

use crate::field::FieldMatrix;
use crate::io;
use crate::tanner::{CoverLabeling, PseudoMatrix};

pub const NAMES: [&str; 5] = ["paper-4-2", "paper-cover-16", "paper-f", "paper-hs", "paper-fhat"];

/// Raw JSON of a built-in fixture.
pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "paper-4-2" => include_str!("../fixtures/paper-4-2.json"),
        "paper-cover-16" => include_str!("../fixtures/paper-cover-16.json"),
        "paper-f" => include_str!("../fixtures/paper-f.json"),
        "paper-hs" => include_str!("../fixtures/paper-hs.json"),
        "paper-fhat" => include_str!("../fixtures/paper-fhat.json"),
        _ => return None,
    })
}

/// `[[1,2,2,1],[2,0,1,2]]` over F3.
pub fn paper_4_2() -> FieldMatrix {
    io::parse_matrix(source("paper-4-2").unwrap()).expect("fixture parses")
}

/// The degree-4 cover labeled by `p = (1 1 2 2 | 1 1 2 2 | 0 0 1 1 | 0 0 1 1)`.
pub fn paper_cover_16() -> CoverLabeling {
    io::parse_cover(source("paper-cover-16").unwrap()).expect("fixture parses")
}

/// `[[2,2,2,2],[2,2,0,0]]`.
pub fn paper_f() -> PseudoMatrix {
    let z = io::parse_pseudomatrix(source("paper-f").unwrap()).expect("fixture parses");
    PseudoMatrix::from_rational(paper_4_2().field(), &z).expect("integral")
}

/// `(1, 0, 1, 1)` over F3.
pub fn paper_hs() -> FieldMatrix {
    io::parse_matrix(source("paper-hs").unwrap()).expect("fixture parses")
}

/// `[[2,2,2,0],[2,2,0,2]]`.
pub fn paper_fhat() -> PseudoMatrix {
    let z = io::parse_pseudomatrix(source("paper-fhat").unwrap()).expect("fixture parses");
    PseudoMatrix::from_rational(paper_hs().field(), &z).expect("integral")
}

/// A codeword of [`paper_4_2`].
pub fn paper_codeword() -> Vec<u8> {
    vec![1, 0, 2, 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tanner::{pseudocodeword_matrix, verify_pseudocodeword};

    #[test]
    fn all_fixtures_load() {
        assert!(NAMES.iter().all(|n| source(n).is_some()));
        assert!(source("nope").is_none());
        assert_eq!(paper_4_2().to_rows(), vec![vec![1, 2, 2, 1], vec![2, 0, 1, 2]]);
        assert_eq!(paper_hs().to_rows(), vec![vec![1, 0, 1, 1]]);
        assert_eq!(paper_fhat().to_rows(), vec![vec![2, 2, 2, 0], vec![2, 2, 0, 2]]);
        let cover = paper_cover_16();
        assert_eq!(cover.cover().degree(), 4);
        assert!(verify_pseudocodeword(&cover));
        assert_eq!(pseudocodeword_matrix(&cover), paper_f());
    }
}
