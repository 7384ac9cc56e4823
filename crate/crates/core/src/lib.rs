//! Invariable generation of finite groups: the Chebotarev invariant,
//! invariable-generation probabilities, first cohomology over prime fields,
//! lifting criteria for `V^u ⋊ H`, and crown-based powers.

pub mod bitset;
pub mod chebotarev;
pub mod crowns;
pub mod error;
pub mod genlift;
pub mod group;
pub mod harness;
pub mod invariable;
pub mod modlin;
pub mod perm;

pub use error::{Error, Result};
pub use group::{load_group, Caps, ConjClass, Group, GroupDescriptor, SubgroupRecord};
pub use perm::Permutation;
