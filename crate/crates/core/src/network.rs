use crate::channel::{FadingModel, PathLoss};
use crate::error::{Error, Result};
use crate::geometry::{ClusterModel, Point};

/// Transmitter process, channel, and the link under study. The receiver
/// sits at `(R, 0)` and its own transmitter at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    pub cluster: ClusterModel,
    pub pathloss: PathLoss,
    pub fading: FadingModel,
    pub threshold: f64,
    pub link_distance: f64,
    pub noise: f64,
}

impl NetworkConfig {
    pub fn new(
        cluster: ClusterModel,
        pathloss: PathLoss,
        fading: FadingModel,
        threshold: f64,
        link_distance: f64,
    ) -> Self {
        Self {
            cluster,
            pathloss,
            fading,
            threshold,
            link_distance,
            noise: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.cluster.validate()?;
        self.pathloss.validate()?;
        self.fading.validate()?;
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(Error::invalid(
                "threshold",
                "SIR threshold must be positive",
            ));
        }
        if !(self.link_distance >= 0.0 && self.link_distance.is_finite()) {
            return Err(Error::invalid(
                "link_distance",
                "link distance must be non-negative",
            ));
        }
        if self.link_distance == 0.0 && self.pathloss.is_singular() {
            return Err(Error::SingularAtOrigin);
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::invalid("noise", "noise power must be non-negative"));
        }
        Ok(())
    }

    pub fn receiver(&self) -> Point {
        Point::new(self.link_distance, 0.0)
    }

    /// Path loss of the desired link.
    pub fn link_gain(&self) -> f64 {
        self.pathloss.radial(self.link_distance)
    }

    pub fn with_cluster(mut self, cluster: ClusterModel) -> Self {
        self.cluster = cluster;
        self
    }

    pub fn with_threshold(mut self, t: f64) -> Self {
        self.threshold = t;
        self
    }

    pub fn with_link_distance(mut self, r: f64) -> Self {
        self.link_distance = r;
        self
    }

    pub fn with_noise(mut self, w: f64) -> Self {
        self.noise = w;
        self
    }

    pub fn with_fading(mut self, fading: FadingModel) -> Self {
        self.fading = fading;
        self
    }

    pub fn with_pathloss(mut self, pathloss: PathLoss) -> Self {
        self.pathloss = pathloss;
        self
    }

    /// Same geometry with parent intensity and mean cluster size replaced.
    pub fn with_intensities(mut self, parent_intensity: f64, mean_cluster_size: f64) -> Self {
        self.cluster.parent_intensity = parent_intensity;
        self.cluster.mean_cluster_size = mean_cluster_size;
        self
    }
}
