//! Exact enumeration of combinatorial objects from recursive counting equations.
//!
//! A problem is described once by implementing [`model::Problem`]: canonical state keys,
//! the terms each state expands into, and a hierarchy function that decreases along every
//! edge. Two engines evaluate the same definition:
//!
//! * [`dp`] memoizes state values depth-first, optionally storing only a fraction of them;
//! * [`tm`] sweeps the hierarchy level by level, keeping only the live frontier.
//!
//! Values live in any [`value::ValueRing`]: checked 64-bit integers, big integers,
//! residues for Chinese-remainder reconstruction, truncated power series in one or two
//! variables, or moment vectors. [`problems`] contains bracket strings, directed animals
//! and a product-term toy; [`polycube`] counts fixed polycubes lattice by lattice with
//! frontier trimming, reflection and grouped parallel evaluation.
//!
//! ```
//! use latenum::dp::{dp_evaluate, CacheConfig};
//! use latenum::model::Problem;
//! use latenum::problems::Brackets;
//! use latenum::tm::tm_evaluate;
//! use latenum::value::CheckedI64;
//!
//! let p = Brackets::new(10);
//! let dp = dp_evaluate(&p, &p.root(), &CheckedI64, &CacheConfig::full()).unwrap();
//! let tm = tm_evaluate(&p, &p.root(), &CheckedI64).unwrap();
//! assert_eq!(dp.value, 16796);
//! assert_eq!(tm.value, 16796);
//! ```

pub mod cli;
pub mod dp;
pub mod error;
pub mod model;
pub mod polycube;
pub mod problems;
pub mod tm;
pub mod value;
