//! An RO(C2)-graded spectral sequence engine over F2.
//!
//! The crate computes with the C2-equivariant dual Steenrod algebras and the
//! spectral sequences attached to Real bordism: the slice and homotopy fixed
//! point spectral sequences of BP_R and of the Real Johnson-Wilson theories,
//! the equivariant May spectral sequences, and the modified May spectral
//! sequence of the sphere, together with the map between them. On top of the
//! engine sit machine-checked detection certificates for the Hopf elements,
//! the Kervaire classes, and the kappabar family.
//!
//! Modules:
//! - [`algebra`]: RO(C2) degrees, monomials, F2 polynomials, Leibniz rules.
//! - [`coefficients`]: coefficient rings of HF2 and HZ with a Bredon oracle.
//! - [`steenrod`]: dual Steenrod algebra presentations, cobar complex, Ext.
//! - [`sseq`]: the page engine, tridegree enumeration, target exclusion.
//! - [`models`]: the concrete spectral sequence models and comparisons.
//! - [`detect`]: detection reports and permanent-cycle certificates.
//! - [`chart`], [`json`]: SVG/TikZ charts and the JSON page schema.

pub mod algebra;
pub mod chart;
pub mod coefficients;
pub mod detect;
pub mod gf2;
pub mod json;
pub mod models;
pub mod sseq;
pub mod steenrod;

pub use algebra::{Convention, GenName, Monomial, Poly, ROC2Degree};
pub use models::{ModelName, ModelSpec};
pub use sseq::{build_e_page, PageStack, Range};
