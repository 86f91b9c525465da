use std::path::PathBuf;

/// Errors produced by every stage of the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid depth value {0}")]
    InvalidDepth(f64),
    #[error("pixel ({u}, {v}) outside {width}x{height} image")]
    OutOfBounds {
        u: f64,
        v: f64,
        width: usize,
        height: usize,
    },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("object {} has no valid pixels", .0.as_deref().unwrap_or("<anonymous>"))]
    EmptyObject(Option<String>),
    #[error("object {} lies behind the camera", .0.as_deref().unwrap_or("<anonymous>"))]
    BehindCamera(Option<String>),
    #[error("masks of objects {0} and {1} overlap")]
    MaskOverlap(String, String),
    #[error("no manipulation requests given")]
    NoRequests,
    #[error("rotation is not orthonormal with unit determinant: {0}")]
    InvalidRotation(String),
    #[error("invalid intrinsics: {0}")]
    InvalidIntrinsics(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("ground-truth box has zero area")]
    DegenerateBox,
    #[error("evaluation region is empty")]
    EmptyRegion,
    #[error("scene diagonal {0} is not positive")]
    DegenerateScene(f64),
    #[error("empty sample")]
    EmptySample,
    #[error("clip has {0} frames, at least 2 required")]
    InsufficientFrames(usize),
    #[error("format error: {0}")]
    Format(String),
    #[error("line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable name of the variant, used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDepth(_) => "invalid_depth",
            Error::OutOfBounds { .. } => "out_of_bounds",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::EmptyObject(_) => "empty_object",
            Error::BehindCamera(_) => "behind_camera",
            Error::MaskOverlap(..) => "mask_overlap",
            Error::NoRequests => "no_requests",
            Error::InvalidRotation(_) => "invalid_rotation",
            Error::InvalidIntrinsics(_) => "invalid_intrinsics",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::DegenerateBox => "degenerate_box",
            Error::EmptyRegion => "empty_region",
            Error::DegenerateScene(_) => "degenerate_scene",
            Error::EmptySample => "empty_sample",
            Error::InsufficientFrames(_) => "insufficient_frames",
            Error::Format(_) => "format",
            Error::Manifest { .. } => "manifest",
            Error::Io { .. } => "io",
        }
    }

    /// Attaches an object identifier to object-level errors that lack one.
    pub fn with_object(self, id: &str) -> Self {
        match self {
            Error::EmptyObject(None) => Error::EmptyObject(Some(id.to_string())),
            Error::BehindCamera(None) => Error::BehindCamera(Some(id.to_string())),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
