//! The rank-2 module over the Laurent ring of `x_1..x_k` on which a
//! generalized Heisenberg group acts, the HNN-tower presentation data of the
//! split extension, and exact checks of the relations, annihilators and the
//! Fitting property.

mod fitting;
mod laurent;
mod module;
mod presentation;
mod relations;

use thiserror::Error;

pub use fitting::{fitting_certificate, resultants_with_cyclotomic, FittingCertificate};
pub use laurent::Laurent;
pub use module::{
    build_module, central_matrix, parse_group_word, GroupWord, HeisenbergModule, Letter, ModuleElem,
};
pub use presentation::{
    check_relators_in_model, presentation_of_gk, tower_stage, FinitePresentation, Relator, Word,
};
pub use relations::{
    monomials, test_elements, verify_annihilators, verify_group_relations, AnnihilatorCertificate,
    FamilyCheck, RelationCertificate, DEFAULT_DEGREE,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed word syllable `{0}`")]
    BadWord(String),
    #[error("{0} is not in the image of {1}")]
    NotInImage(String, String),
    #[error("relation `{family}` fails on {element}: {lhs} != {rhs}")]
    RelationFails {
        family: String,
        element: String,
        lhs: String,
        rhs: String,
    },
    #[error("{0} = {1}, expected 0")]
    NonzeroResidue(String, String),
    #[error("relator `{0}` does not evaluate to the identity")]
    RelatorFails(String),
}
