//! Exact computation with finitely additive measures on the real line and
//! the cycles they form under transition kernels.

pub mod chain_file;
pub mod cli;
pub mod cycles;
pub mod kernel;
pub mod linalg;
pub mod measure;
pub mod piecewise;
pub mod poly;
pub mod rational;
pub mod set_expr;
pub mod state_cycles;

pub use cycles::{Cycle, CycleError, CycleKind};
pub use kernel::{FiniteChain, Kernel, KernelError};
pub use measure::{Generator, GeneratorKind, Measure, MeasureError};
pub use rational::Rational;
pub use set_expr::{Bound, SetExpr, Span};
