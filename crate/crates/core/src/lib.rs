//! Attainable sets of surface representatives of second homology classes
//! of combinatorial generalized 2-complexes.
//!
//! Pipeline: parse a complex ([`encoding`]), check a class in `H_2`
//! ([`homology`]), bound the total covering degree with a weight function
//! ([`weights`]), enumerate cellwise coverings without folds
//! ([`covers`]), and saturate the resulting points ([`attainable`]).

pub mod attainable;
pub mod complex;
pub mod covers;
pub mod encoding;
pub mod homology;
pub mod instances;
pub mod intmat;
pub mod pipeline;
pub mod render;
pub mod weights;
