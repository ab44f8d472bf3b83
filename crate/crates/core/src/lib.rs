//! Factor of i.i.d. processes on the `d`-regular tree: exact and sampled
//! joint laws at two vertices, their information quantities, and the decay
//! bounds they are checked against.
//!
//! ```
//! use fiid::processes::{exact_joint, BlockFactorRule};
//!
//! let rule = BlockFactorRule::majority(1).unwrap();
//! let m = exact_joint(&rule, 3, 2, 1 << 14).unwrap();
//! assert!(m.all_pass());
//! ```

pub mod bounds;
pub mod error;
pub mod information;
pub mod processes;
pub mod rng;
pub mod tree;
pub mod words;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/tree.md")]
    mod tree {}
    #[doc = include_str!("../../../book/src/information.md")]
    mod information {}
    #[doc = include_str!("../../../book/src/processes.md")]
    mod processes {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
