//! Domain types shared by every other module: roads, model parameters,
//! candidate plans, and cost breakdowns.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Traffic-flow band of a road, 0 (clear) to 4 (serious congestion).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CongestionLevel(u8);

impl CongestionLevel {
    pub fn new(level: u8) -> Result<Self> {
        if level <= 4 {
            Ok(CongestionLevel(level))
        } else {
            Err(Error::InvalidInput(format!("congestion level {level} outside 0..=4")))
        }
    }

    pub fn as_u8(self) -> u8 {
        self.0
    }
}

/// Classify a daily flow into its congestion band.
///
/// Bands are 30-100, 100-200, 200-300, 300-400, 400-520 vehicles/day;
/// a boundary value resolves to the lower band. Flows outside [30, 520]
/// are clamped (callers may surface a warning); negative flow is an error.
pub fn classify_congestion(daily_flow: f64) -> Result<CongestionLevel> {
    if daily_flow < 0.0 || daily_flow.is_nan() {
        return Err(Error::InvalidInput(format!("negative daily flow {daily_flow}")));
    }
    let f = daily_flow.clamp(30.0, 520.0);
    let level = if f <= 100.0 {
        0
    } else if f <= 200.0 {
        1
    } else if f <= 300.0 {
        2
    } else if f <= 400.0 {
        3
    } else {
        4
    };
    Ok(CongestionLevel(level))
}

/// True when `daily_flow` lies outside the classified range [30, 520].
pub fn flow_out_of_band(daily_flow: f64) -> bool {
    !(30.0..=520.0).contains(&daily_flow)
}

/// One road segment of the planning area. Roads double as candidate
/// station sites (site j is road j's midpoint).
#[derive(Clone, Debug, PartialEq)]
pub struct Road {
    /// 1-based id as it appears in roads.csv.
    pub id: usize,
    /// Daily EV flow on the road (NUM_i), vehicles/day.
    pub daily_flow: f64,
    pub congestion_level: CongestionLevel,
    pub length_km: f64,
    /// Midpoint coordinates in km.
    pub midpoint: (f64, f64),
    /// 1-based ids of roads sharing an endpoint.
    pub neighbors: Vec<usize>,
}

/// The road graph. Index `i` holds the road with id `i + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RoadNetwork {
    roads: Vec<Road>,
}

impl RoadNetwork {
    /// Build a network, checking id contiguity and per-road invariants.
    /// Returns the network plus non-fatal warnings (band-inconsistent
    /// congestion levels, out-of-band flows).
    pub fn new(mut roads: Vec<Road>) -> Result<(Self, Vec<String>)> {
        if roads.is_empty() {
            return Err(Error::Validation("empty road network".into()));
        }
        roads.sort_by_key(|r| r.id);
        let mut warnings = Vec::new();
        for (i, road) in roads.iter().enumerate() {
            if road.id != i + 1 {
                return Err(Error::Validation(format!(
                    "road ids must be contiguous 1..D; found {} at position {}",
                    road.id,
                    i + 1
                )));
            }
            if road.daily_flow <= 0.0 {
                return Err(Error::Validation(format!(
                    "road {}: daily_flow must be > 0 (got {})",
                    road.id, road.daily_flow
                )));
            }
            if road.length_km <= 0.0 {
                return Err(Error::Validation(format!(
                    "road {}: length_km must be > 0 (got {})",
                    road.id, road.length_km
                )));
            }
            if flow_out_of_band(road.daily_flow) {
                warnings.push(format!(
                    "road {}: daily_flow {} outside classified range [30, 520]; clamped for banding",
                    road.id, road.daily_flow
                ));
            }
            let expected = classify_congestion(road.daily_flow)?;
            if expected != road.congestion_level {
                warnings.push(format!(
                    "road {}: congestion_level {} inconsistent with daily_flow {} (band says {})",
                    road.id,
                    road.congestion_level.as_u8(),
                    road.daily_flow,
                    expected.as_u8()
                ));
            }
        }
        let n = roads.len();
        for road in &roads {
            for &nb in &road.neighbors {
                if nb == 0 || nb > n {
                    return Err(Error::Validation(format!(
                        "road {}: neighbor id {} out of range 1..{}",
                        road.id, nb, n
                    )));
                }
            }
        }
        Ok((RoadNetwork { roads }, warnings))
    }

    pub fn len(&self) -> usize {
        self.roads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roads.is_empty()
    }

    pub fn roads(&self) -> &[Road] {
        &self.roads
    }

    /// Road by 0-based index.
    pub fn road(&self, idx: usize) -> &Road {
        &self.roads[idx]
    }

    pub fn total_flow(&self) -> f64 {
        self.roads.iter().map(|r| r.daily_flow).sum()
    }
}

/// Every economic and technical constant of the cost model. Field names
/// match the params.json keys one-to-one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Road count of the planning area.
    #[serde(rename = "D")]
    pub d: usize,
    /// Operating days per year.
    #[serde(rename = "T_year")]
    pub t_year: f64,
    /// Fraction of EVs charging each day.
    pub alpha: f64,
    /// Mean battery capacity, kWh.
    pub cap_kwh: f64,
    /// Target state of charge after a session.
    pub soc_ref: f64,
    /// State of charge at session start.
    pub soc_0: f64,
    /// Sell price, yuan/kWh.
    pub c_s: f64,
    /// Purchase price, yuan/kWh.
    pub c_p: f64,
    /// Discount rate.
    pub r: f64,
    /// Station operating life, years.
    #[serde(rename = "T_life_years")]
    pub t_life_years: f64,
    /// Fast pile unit price, yuan.
    pub c_fast: f64,
    /// Slow pile unit price, yuan.
    pub c_slow: f64,
    /// O&M cost as a fraction of initial investment per year.
    pub mu: f64,
    /// Value of travel time, yuan/h.
    pub k_time: f64,
    /// Free-flow speed, km/h.
    pub v0_kmh: f64,
    /// Consumption, kWh/km.
    pub g_kwh_per_km: f64,
    /// Daily pile running hours.
    pub t_d_hours: f64,
    /// Fast pile rated power, kW.
    pub p_fast_kw: f64,
    /// Slow pile rated power, kW.
    pub p_slow_kw: f64,
    /// Simultaneous-charging rate.
    pub beta: f64,
    /// Peak-to-average charging power multiple.
    pub eta: f64,
    pub n_fast_min: u32,
    pub n_fast_max: u32,
    pub n_slow_min: u32,
    pub n_slow_max: u32,
    /// Served-vehicle bounds per station, charging vehicles/day.
    pub b_min: f64,
    pub b_max: f64,
    /// Grid connection cap over all stations, kW.
    pub p_max_kw: f64,
    /// Effective service radius, km (uniform over stations).
    pub r_service_km: f64,
    /// Per-site construction cost, yuan (uniform over sites).
    pub c_site_yuan: f64,
    /// Hourly arrival weights; nonnegative, summing to 1.
    pub arrival_profile: [f64; 24],
}

impl ModelParams {
    /// Energy drawn per charging session, kWh: cap·(SOC_ref − SOC_0).
    pub fn session_kwh(&self) -> f64 {
        self.cap_kwh * (self.soc_ref - self.soc_0)
    }
}

/// One reported invariant violation of [`ModelParams`].
#[derive(Clone, Debug, PartialEq)]
pub struct ParamViolation {
    pub field: &'static str,
    pub constraint: String,
}

impl std::fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.constraint)
    }
}

/// Report-style validation: empty iff every invariant holds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<ParamViolation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every ModelParams invariant; never fails, reports instead.
pub fn validate_params(p: &ModelParams) -> ValidationReport {
    let mut v = Vec::new();
    let mut fail = |field: &'static str, constraint: String| {
        v.push(ParamViolation { field, constraint });
    };
    if !(p.soc_0 > 0.0) {
        fail("soc_0", format!("soc_0 > 0 (got {})", p.soc_0));
    }
    if !(p.soc_0 < p.soc_ref) {
        fail("soc_0", format!("soc_0 < soc_ref (got {} vs {})", p.soc_0, p.soc_ref));
    }
    if !(p.soc_ref <= 1.0) {
        fail("soc_ref", format!("soc_ref ≤ 1 (got {})", p.soc_ref));
    }
    if !(p.soc_0 >= 0.2) {
        fail("soc_0", format!("soc_0 ≥ 0.2 (got {})", p.soc_0));
    }
    if !(p.soc_ref <= 0.9) {
        fail("soc_ref", format!("soc_ref ≤ 0.9 (got {})", p.soc_ref));
    }
    if !(p.c_s > p.c_p) {
        fail("c_s", format!("c_s > c_p (got {} vs {})", p.c_s, p.c_p));
    }
    if !(p.c_p > 0.0) {
        fail("c_p", format!("c_p > 0 (got {})", p.c_p));
    }
    if !(p.alpha > 0.0 && p.alpha <= 1.0) {
        fail("alpha", format!("0 < alpha ≤ 1 (got {})", p.alpha));
    }
    for (field, value) in [
        ("D", p.d as f64),
        ("T_year", p.t_year),
        ("cap_kwh", p.cap_kwh),
        ("r", p.r),
        ("T_life_years", p.t_life_years),
        ("c_fast", p.c_fast),
        ("c_slow", p.c_slow),
        ("k_time", p.k_time),
        ("v0_kmh", p.v0_kmh),
        ("g_kwh_per_km", p.g_kwh_per_km),
        ("t_d_hours", p.t_d_hours),
        ("p_fast_kw", p.p_fast_kw),
        ("p_slow_kw", p.p_slow_kw),
        ("beta", p.beta),
        ("eta", p.eta),
        ("p_max_kw", p.p_max_kw),
        ("r_service_km", p.r_service_km),
        ("c_site_yuan", p.c_site_yuan),
    ] {
        if !(value > 0.0) {
            fail(field, format!("must be > 0 (got {value})"));
        }
    }
    if !(p.mu >= 0.0) {
        fail("mu", format!("mu ≥ 0 (got {})", p.mu));
    }
    if p.n_fast_min > p.n_fast_max {
        fail("n_fast_min", format!("n_fast_min ≤ n_fast_max (got {} > {})", p.n_fast_min, p.n_fast_max));
    }
    if p.n_slow_min > p.n_slow_max {
        fail("n_slow_min", format!("n_slow_min ≤ n_slow_max (got {} > {})", p.n_slow_min, p.n_slow_max));
    }
    if !(p.b_min <= p.b_max) {
        fail("b_min", format!("b_min ≤ b_max (got {} > {})", p.b_min, p.b_max));
    }
    let profile_sum: f64 = p.arrival_profile.iter().sum();
    if p.arrival_profile.iter().any(|&w| w < 0.0) {
        fail("arrival_profile", "weights must be nonnegative".into());
    }
    if (profile_sum - 1.0).abs() > 1e-9 {
        fail("arrival_profile", format!("weights must sum to 1 (got {profile_sum})"));
    }
    ValidationReport { violations: v }
}

/// A candidate siting/sizing plan: per-road open flag plus fast and slow
/// pile counts. `rank`, `crowding`, `objectives` are solver annotations.
#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    pub open: Vec<bool>,
    pub nf: Vec<u32>,
    pub ns: Vec<u32>,
    pub rank: Option<usize>,
    pub crowding: Option<f64>,
    pub objectives: Option<(f64, f64)>,
}

impl Plan {
    pub fn new(open: Vec<bool>, nf: Vec<u32>, ns: Vec<u32>) -> Self {
        debug_assert_eq!(open.len(), nf.len());
        debug_assert_eq!(open.len(), ns.len());
        Plan { open, nf, ns, rank: None, crowding: None, objectives: None }
    }

    /// Number of open stations, N = Σ y_i.
    pub fn station_count(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }

    /// 0-based indices of open stations, ascending.
    pub fn open_indices(&self) -> Vec<usize> {
        (0..self.open.len()).filter(|&i| self.open[i]).collect()
    }

    /// Check the structural plan invariants against pile bounds.
    pub fn check_invariants(&self, nf_bounds: (u32, u32), ns_bounds: (u32, u32)) -> bool {
        self.open.iter().enumerate().all(|(i, &o)| {
            if o {
                (nf_bounds.0..=nf_bounds.1).contains(&self.nf[i])
                    && (ns_bounds.0..=ns_bounds.1).contains(&self.ns[i])
            } else {
                self.nf[i] == 0 && self.ns[i] == 0
            }
        })
    }
}

/// Full cost decomposition of a plan, yuan (per year where annual).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CostBreakdown {
    /// Annual operating income I.
    pub income: f64,
    /// Annualized operator cost C1.
    pub annual_cost: f64,
    /// Total pile purchase cost, yuan (not annualized).
    pub pile_cost_total: f64,
    /// Annual O&M cost over all stations.
    pub om_cost_total: f64,
    /// Annual travel-time cost C_time1.
    pub travel_time_cost: f64,
    /// Annual queue-time cost C_time2.
    pub queue_time_cost: f64,
    /// Annual en-route energy cost C_loss.
    pub energy_cost: f64,
    /// Operator objective: C1 − I (minimized).
    pub f1: f64,
    /// User objective: C_time1 + C_time2 + C_loss (minimized).
    pub f2: f64,
}
