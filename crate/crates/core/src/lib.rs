//! p-Schauder frames on finite-dimensional ℓ^p spaces, the functional
//! uncertainty inequality relating the supports of two frame expansions,
//! and a small search toolkit for its equality cases.
//!
//! * [`numerics`]: dense complex linear algebra and ℓ^p norms.
//! * [`frames`]: validated frame constructions.
//! * [`document`]: the frame document and report record formats.
//! * [`uncertainty`]: sparsity, coherence, the inequality and its proof trace.
//! * [`search`]: comb, exhaustive, random and annealing searches.
//! * [`cli`]: the `schauder` command line.

pub mod cli;
pub mod document;
pub mod frames;
pub mod numerics;
pub mod search;
pub mod uncertainty;
