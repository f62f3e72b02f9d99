//! Light-segment slicing: when a demand cannot be placed whole, split
//! its bandwidth into 2, 4, ... equal parts (doubling up to the budget)
//! and place each part independently. A request either gets all parts
//! of some level or blocks; partial placements are rolled back.

use serde::{Deserialize, Serialize};

use crate::net::Topology;
use crate::routing::Path;
use crate::spectrum::{
    select_modulation, slots_needed, FitPolicy, GridError, LightpathId, Modulation, ReachTable,
    SlotRange, SpectrumGrid,
};
use crate::traffic::Request;
use crate::xt::{range_xt_ok, CoreLayout, CrosstalkParams};

/// One placed part of a request.
#[derive(Debug, Clone, PartialEq)]
pub struct LightSegment {
    pub parent_request: u64,
    pub seg_index: u32,
    pub path: Path,
    pub core: usize,
    pub range: SlotRange,
    pub modulation: Modulation,
    pub bandwidth_gbps: f64,
}

impl LightSegment {
    pub fn lightpath_id(&self) -> LightpathId {
        LightpathId {
            request: self.parent_request,
            segment: self.seg_index,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceConfig {
    /// Largest number of parts a request may be split into.
    pub max_segments: usize,
    /// Gate every placement on the crosstalk threshold.
    pub xt_check: bool,
}

impl Default for SliceConfig {
    fn default() -> Self {
        SliceConfig {
            max_segments: 1,
            xt_check: false,
        }
    }
}

/// Why a request was denied. `NoRoute` covers both an empty candidate
/// list and candidates beyond every modulation's reach; `XtThreshold`
/// means spectrum existed but crosstalk admission rejected it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockReason {
    NoRoute,
    NoSpectrum,
    XtThreshold,
}

/// Everything the placement pipeline needs besides the grid itself.
pub struct ProvisionParams<'a> {
    pub topology: &'a Topology,
    pub reach_table: &'a ReachTable,
    pub slot_width_ghz: f64,
    pub guard_slots: usize,
    pub policy: FitPolicy,
    /// Core scan order (index or prioritized), precomputed by the caller.
    pub core_order: &'a [usize],
    pub slice: SliceConfig,
    pub xt_params: &'a CrosstalkParams,
    pub layout: &'a CoreLayout,
}

struct PartFailure {
    xt_rejected: bool,
    any_modulation: bool,
}

/// Place a request over the ordered candidate paths, slicing if needed.
///
/// Levels s = 1, 2, 4, ... (powers of two up to `max_segments`) are
/// tried in order; the request succeeds at the smallest level where all
/// s parts place. Each part independently picks the first candidate
/// path, core, and slot range that fits (and passes the crosstalk check
/// when enabled). On failure the level's partial placements are rolled
/// back, so a blocked request never changes the grid.
pub fn provision_with_slicing(
    request: &Request,
    candidates: &[Path],
    grid: &mut SpectrumGrid,
    params: &ProvisionParams,
) -> Result<Vec<LightSegment>, BlockReason> {
    debug_assert!(params.slice.max_segments >= 1);
    if candidates.is_empty() {
        return Err(BlockReason::NoRoute);
    }
    let mut level = 1;
    let failure = loop {
        match try_level(request, candidates, grid, params, level) {
            Ok(segments) => return Ok(segments),
            Err(failure) => {
                if level * 2 > params.slice.max_segments {
                    break failure;
                }
                level *= 2;
            }
        }
    };
    // classify from the most-sliced attempt: crosstalk rejection wins,
    // then reach infeasibility, then plain lack of spectrum
    Err(if failure.xt_rejected {
        BlockReason::XtThreshold
    } else if !failure.any_modulation {
        BlockReason::NoRoute
    } else {
        BlockReason::NoSpectrum
    })
}

fn try_level(
    request: &Request,
    candidates: &[Path],
    grid: &mut SpectrumGrid,
    params: &ProvisionParams,
    level: usize,
) -> Result<Vec<LightSegment>, PartFailure> {
    let part_bw = request.bandwidth_gbps / level as f64;
    let mut placed: Vec<LightSegment> = Vec::with_capacity(level);
    for seg_index in 0..level {
        // the final part absorbs any division remainder so the parts
        // always sum exactly to the request bandwidth
        let bw = if seg_index + 1 == level {
            request.bandwidth_gbps - part_bw * (level as f64 - 1.0)
        } else {
            part_bw
        };
        match place_part(request.id, seg_index as u32, bw, candidates, grid, params) {
            Ok(seg) => placed.push(seg),
            Err(failure) => {
                rollback(grid, &placed).expect("rolling back freshly placed segments");
                return Err(failure);
            }
        }
    }
    Ok(placed)
}

fn place_part(
    request_id: u64,
    seg_index: u32,
    bandwidth_gbps: f64,
    candidates: &[Path],
    grid: &mut SpectrumGrid,
    params: &ProvisionParams,
) -> Result<LightSegment, PartFailure> {
    let mut any_modulation = false;
    let mut xt_rejected = false;
    for path in candidates {
        let Some(modulation) = select_modulation(path.length_km, params.reach_table) else {
            continue;
        };
        any_modulation = true;
        let n_slots = slots_needed(
            bandwidth_gbps,
            modulation.bits_per_symbol,
            params.slot_width_ghz,
            params.guard_slots,
        );
        let fit = if params.slice.xt_check {
            let view: &SpectrumGrid = grid;
            let found = view.find_fit_admitted(
                &path.links,
                params.core_order,
                n_slots,
                params.policy,
                |core, range| {
                    range_xt_ok(
                        view,
                        params.topology,
                        params.xt_params,
                        params.layout,
                        &path.links,
                        core,
                        range,
                    )
                },
            );
            if found.is_none()
                && view
                    .find_fit(&path.links, params.core_order, n_slots, params.policy)
                    .is_some()
            {
                xt_rejected = true;
            }
            found
        } else {
            grid.find_fit(&path.links, params.core_order, n_slots, params.policy)
        };
        if let Some((core, range)) = fit {
            let id = LightpathId {
                request: request_id,
                segment: seg_index,
            };
            grid.allocate(id, &path.links, core, range)
                .expect("find_fit returned an occupied range");
            return Ok(LightSegment {
                parent_request: request_id,
                seg_index,
                path: path.clone(),
                core,
                range,
                modulation: modulation.clone(),
                bandwidth_gbps,
            });
        }
    }
    Err(PartFailure {
        xt_rejected,
        any_modulation,
    })
}

/// Release every segment in `segments`; the grid returns exactly to its
/// pre-placement state.
pub fn rollback(grid: &mut SpectrumGrid, segments: &[LightSegment]) -> Result<(), GridError> {
    for seg in segments {
        grid.release(seg.lightpath_id())?;
    }
    Ok(())
}
