//! Weber-Penn parameter vocabulary, species profiles, validation, and
//! randomized dictionary generation.

pub mod random;
pub mod registry;
pub mod species;
pub mod validate;
pub mod value;

pub use random::{randomize, RandomizeError};
pub use registry::{
    decode_enum, encode_enum, Arity, EnumCodeError, MagnitudeGroup, ParamKind, ParamRegistry,
    ParamSpec, LEVEL_COUNT, PARAM_COUNT,
};
pub use species::{
    builtin_profile, builtin_profiles, texture_for, Characteristic, Species, SpeciesProfile,
    TextureSet,
};
pub use validate::{validate, Rule, Violation};
pub use value::{ParamValue, ParamsIoError, TreeParams};
