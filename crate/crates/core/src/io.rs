//! JSON files for tracks and homotopies.
//!
//! Numbers are written in shortest round-trip form, so loading a saved
//! file gives back the identical value.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ran::{hausdorff_unchecked, Configuration};
use crate::space::{Space, SpacePoint};
use crate::tracks::{check_continuity, Homotopy, Track, TrackKind, ENDPOINT_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackFile {
    pub space: Space,
    pub cap: usize,
    pub kind: TrackKind,
    pub times: Vec<f64>,
    pub configs: Vec<Vec<SpacePoint>>,
}

fn configuration(space: &Space, pts: &[SpacePoint], cap: usize) -> Result<Configuration> {
    let c = Configuration::new(space, pts.to_vec(), pts.len().max(1))?;
    c.with_cap(cap.max(pts.len()))
}

impl TrackFile {
    pub fn from_track(track: &Track) -> TrackFile {
        TrackFile {
            space: track.space().clone(),
            cap: track.cap(),
            kind: track.kind(),
            times: track.times().to_vec(),
            configs: track.configs().iter().map(|c| c.points().to_vec()).collect(),
        }
    }

    pub fn to_track(&self) -> Result<Track> {
        let configs = self
            .configs
            .iter()
            .map(|pts| configuration(&self.space, pts, self.cap))
            .collect::<Result<Vec<_>>>()?;
        Track::new(self.space.clone(), self.times.clone(), configs, self.kind, self.cap)
    }
}

/// Certificate stored with a homotopy; every field except `bound` is
/// recomputed from the cells by [`certify`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoredCertificate {
    pub bound: f64,
    pub max_cardinality: usize,
    pub max_adjacent_gap: f64,
    pub implied_lipschitz: f64,
    /// Largest distance between the two ends of a row.
    pub endpoint_drift: f64,
    /// Largest distance of a first- or last-column cell from the first cell.
    pub basepoint_drift: f64,
    /// Largest distance of a last-row cell from the first cell of that row.
    pub final_spread: f64,
    /// Cap respected, continuity within `bound`, every row a loop and the
    /// last row constant.
    pub pass: bool,
}

/// Recompute the certificate of `h` against a continuity `bound`.
pub fn certify(h: &Homotopy, bound: f64) -> StoredCertificate {
    let hc = h.certificate();
    let continuity = check_continuity(h, bound);
    let last = h.cells().last().unwrap();
    let final_spread = last
        .iter()
        .map(|c| hausdorff_unchecked(h.space(), c.points(), last[0].points()))
        .fold(0.0, f64::max);
    let pass = hc.max_cardinality <= h.cap()
        && continuity.pass
        && hc.endpoint_drift <= ENDPOINT_TOL
        && final_spread <= ENDPOINT_TOL;
    StoredCertificate {
        bound,
        max_cardinality: hc.max_cardinality,
        max_adjacent_gap: hc.max_adjacent_gap,
        implied_lipschitz: hc.implied_lipschitz,
        endpoint_drift: hc.endpoint_drift,
        basepoint_drift: hc.basepoint_drift,
        final_spread,
        pass,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopyFile {
    pub space: Space,
    pub cap: usize,
    pub s_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub cells: Vec<Vec<Vec<SpacePoint>>>,
    pub certificate: StoredCertificate,
}

impl HomotopyFile {
    pub fn from_homotopy(h: &Homotopy, bound: f64) -> HomotopyFile {
        HomotopyFile {
            space: h.space().clone(),
            cap: h.cap(),
            s_grid: h.s_grid().to_vec(),
            t_grid: h.t_grid().to_vec(),
            cells: h
                .cells()
                .iter()
                .map(|row| row.iter().map(|c| c.points().to_vec()).collect())
                .collect(),
            certificate: certify(h, bound),
        }
    }

    pub fn to_homotopy(&self) -> Result<Homotopy> {
        let cells = self
            .cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|pts| configuration(&self.space, pts, self.cap))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Homotopy::new(
            self.space.clone(),
            self.s_grid.clone(),
            self.t_grid.clone(),
            cells,
            self.cap,
        )
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub fn track_from_json(text: &str) -> Result<Track> {
    parse::<TrackFile>(text)?.to_track()
}

pub fn track_to_json(track: &Track) -> String {
    let mut s = serde_json::to_string_pretty(&TrackFile::from_track(track)).expect("serializable");
    s.push('\n');
    s
}

pub fn homotopy_file_from_json(text: &str) -> Result<HomotopyFile> {
    parse(text)
}

pub fn homotopy_to_json(h: &Homotopy, bound: f64) -> String {
    let mut s = serde_json::to_string(&HomotopyFile::from_homotopy(h, bound)).expect("serializable");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))
}

pub fn load_track(path: &Path) -> Result<Track> {
    track_from_json(&read(path)?)
}

pub fn load_homotopy_file(path: &Path) -> Result<HomotopyFile> {
    homotopy_file_from_json(&read(path)?)
}
