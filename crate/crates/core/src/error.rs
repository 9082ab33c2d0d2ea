use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument fell outside the domain of a function.
    #[error("{what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// A population field violates its allowed range.
    #[error("invalid `{field}`: {constraint}, got {value}")]
    InvalidSpec {
        field: &'static str,
        constraint: &'static str,
        value: f64,
    },

    /// Rounding left a group, or a class inside a group, with no members.
    #[error("degenerate population: {0}")]
    DegenerateSpec(String),

    /// Training labels contain a single class, so the likelihood has no maximizer.
    #[error("degenerate training data: {0}")]
    DegenerateData(String),

    /// A group's scores contain a single class, so its ROC curve is undefined.
    #[error("degenerate group: {0}")]
    DegenerateGroup(String),

    /// Too many consecutive degenerate splits for one replication.
    #[error(
        "config `{config_id}`: replication {replication_index} needed more than {limit} resamples"
    )]
    PathologicalConfig {
        config_id: String,
        replication_index: u64,
        limit: u32,
    },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}
