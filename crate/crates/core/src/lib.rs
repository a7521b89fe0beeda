//! Exact group-ring arithmetic over catalog groups, formal inverses of
//! harmonic-model elements, and numerical checks of Bernoulli factor maps.

pub mod error;
pub mod factor;
pub mod fit;
pub mod group;
pub mod inverse;
pub mod measure;
pub mod oracle;
pub mod reduction;
pub mod ring;
pub mod suite;
pub mod walk;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec, OrderedGroup};
pub use ring::{QElement, RingElement, ZElement};
