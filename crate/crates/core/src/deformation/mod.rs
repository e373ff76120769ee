//! Formal deformations over truncated polynomial rings, their first-order
//! classes, the associated four-term bimodule sequences and order-by-order extension.

mod classes;
mod extend;
mod ring;
mod sequences;
mod star;

pub use classes::{
    a_tensor_tstar, deform_class, equivalence_witness, first_order_from_cocycle, EquivalenceWitness, Ext2Context,
    ExtClass2,
};
pub use extend::{degreewise_residuals, extend_order, extend_to, failure_term, OrderExtension};
pub use ring::BaseRing;
pub use sequences::{
    compare_with_conormal, cq_sequence, sequence_ia, ConormalReport, CqSequence, FourTermSequence, SequenceComparison,
    SequenceReport, SPOTS,
};
pub use star::{deformation_preset, StarDeformation, DEFORMATION_PRESETS};
