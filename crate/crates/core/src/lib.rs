//! Arthur parameters of `Sp(2n)` and split `SO(2n+1)`: the orders `≥_O`,
//! `≥_A`, `≥_D`, `≥_C`, rank triangles, extended multi-segments and the
//! L-data reductions used to decide whether a representation is of Arthur type.

pub mod geometry;
pub mod halfint;
pub mod ldata;
pub mod multisegments;
pub mod operators;
pub mod orders;
pub mod params;

pub use geometry::{closure_compare, RankTriangle};
pub use halfint::HalfInt;
pub use operators::{OpKind, OperatorDescriptor};
pub use orders::{compare, OrderKind, OrderResult, Partition};
pub use params::{ArthurParam, ArthurSummand, GroupSpec, LParam, LSummand, Rho, SelfDualType};
pub use ldata::{LanglandsData, Segment};
pub use multisegments::{Ems, ExtSegment};
