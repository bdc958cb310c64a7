//! Exact combinatorics of finite multiclass hypothesis classes: shattering
//! dimensions, Sauer-type bounds and their polynomial certificates,
//! one-inclusion graphs with optimal list orientations, and list learners
//! built on them.

pub mod bounds;
pub mod class;
pub mod dims;
pub mod error;
pub mod oig;
pub mod polycert;
pub mod listlearn;
mod lines;

pub use class::{
    all_nonempty_classes, parse_class, parse_class_auto, random_class, ClassFormat, CoordinateSet,
    HypothesisClass, Label, Pattern, DEFAULT_ENUMERATION_CAP,
};
pub use error::{Error, Result};
