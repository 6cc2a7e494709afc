//! The extensional tensor construction over finite semirings.
//!
//! Factors are explicit finite semimodules `V_α ⊆ K^{n_α}`. A tensor is a
//! complete representation: a subset of `V = ∏ V_α` containing `0_V`,
//! closed under scalar transfer between slots, under fiber sups, and
//! downward within fibers. The τ-hull is the least such set containing a
//! given one.
//!
//! Scalar transfer is applied literally, with `k` ranging over all of `K`
//! including 0. Every tensor over two or more nontrivial factors therefore
//! contains every point with a zero component, and `0_V`'s hull is that
//! set rather than `{0_V}`.

pub mod bridge;
pub mod module;
pub mod polymap;
pub mod rewrite;
pub mod space;
pub mod tb;

pub use bridge::{cross_isomorphism_report, from_tensor_kernel, to_tensor_kernel};
pub use module::{FinSemimodule, Tuple};
pub use polymap::{cube_dims, PolyMapTable};
pub use rewrite::{reachability_classes, tau_classes, RewriteStep};
pub use space::{ExtTensor, PointSet, ProductPoint, Rule, TensorSpace};
pub use tb::TensorModule;
