//! Basic LOTOS with finite-sort value offers: parsing, an operational
//! semantics compiling specifications into labelled transition systems,
//! property checking, component contracts and architecture configurations.
//!
//! | module | contents |
//! |--------|----------|
//! | [`syntax`] | `.lot`, `.asc` and `.adl` parsers, validation, printing |
//! | [`semantics`] | compiled terms, successor computation, LTS generation |
//! | [`verify`] | deadlock, reachability, safety monitors, bisimulation, `.aut` |
//! | [`contracts`] | fact bases, structural queries, interface checks, `check_asc` |
//! | [`adl`] | configurations, constraint checking, flattening |

pub mod adl;
pub mod contracts;
pub mod semantics;
pub mod syntax;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/specifications.md")]
    mod specifications {}
    #[doc = include_str!("../../../book/src/semantics.md")]
    mod semantics {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/contracts.md")]
    mod contracts {}
    #[doc = include_str!("../../../book/src/architecture.md")]
    mod architecture {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
