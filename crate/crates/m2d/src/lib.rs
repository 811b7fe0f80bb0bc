//! File formats, shipped data and the command line for `m2d-core`.

pub mod cli;
pub mod config;
pub mod report;
pub mod resources;
pub mod story;
pub mod trace;

pub use config::{load_params, ConfigError, LoadedConfig};
pub use report::{RunReport, SpeakerCounts};
pub use resources::{load_default_resources, load_resources};
pub use story::{parse_story, serialize_story, ParseError, ParseMode};
