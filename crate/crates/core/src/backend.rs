//! The interface every illuminance backend implements.

use thiserror::Error;

use crate::grid::Sensor;
use crate::jobs::CancelToken;
use crate::num::Real;
use crate::scene::Scene;
use crate::sky::{SkyError, SkyModel};

#[derive(Debug, Error)]
pub enum BackendError {
    #[error(transparent)]
    Sky(#[from] SkyError),
    #[error("cancelled")]
    Cancelled,
    #[error("{backend}: {source}")]
    Failed {
        backend: String,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
}

pub trait Backend<T: Real>: Send + Sync {
    /// Short tag recorded on results, e.g. `"oracle"`.
    fn name(&self) -> &str;

    /// Stable description of every parameter that changes results. Used as a
    /// cache key for reference runs.
    fn fingerprint(&self) -> String;

    /// Illuminance in lux at each sensor, in sensor order.
    fn illuminance(
        &self,
        scene: &Scene<T>,
        sensors: &[Sensor<T>],
        sky: &SkyModel<T>,
        cancel: &CancelToken,
    ) -> Result<Vec<T>, BackendError>;
}
