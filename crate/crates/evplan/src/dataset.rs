//! Bundled planning-area dataset: 234 road flows with a declared synthetic
//! grid geometry (13 × 18 road midpoints over a 10 km × 10 km area, each
//! road 0.85 km, 4-neighbor adjacency). The geometry is NOT the original
//! city map, which is unpublished; only the per-road flows are real.

use crate::model::{classify_congestion, ModelParams, Road, RoadNetwork};

pub const GRID_ROWS: usize = 13;
pub const GRID_COLS: usize = 18;
pub const ROAD_LENGTH_KM: f64 = 0.85;
pub const AREA_KM: f64 = 10.0;

/// Daily EV flow per road, vehicles/day, indexed by road id − 1.
pub const DAILY_FLOWS: [f64; 234] = [
    127.0, 236.0, 197.0, 193.0, 121.0, 271.0, 150.0, 35.0, 118.0, 115.0, 118.0, 158.0, 94.0,
    102.0, 159.0, 134.0, 174.0, 309.0, 236.0, 72.0, 169.0, 225.0, 243.0, 300.0, 169.0, 334.0,
    327.0, 258.0, 143.0, 256.0, 202.0, 138.0, 206.0, 209.0, 161.0, 365.0, 215.0, 181.0, 224.0,
    267.0, 355.0, 162.0, 345.0, 112.0, 135.0, 84.0, 109.0, 77.0, 82.0, 445.0, 140.0, 108.0, 88.0,
    231.0, 264.0, 222.0, 255.0, 118.0, 234.0, 371.0, 398.0, 253.0, 225.0, 191.0, 169.0, 253.0,
    159.0, 295.0, 255.0, 130.0, 222.0, 53.0, 122.0, 227.0, 258.0, 124.0, 128.0, 133.0, 94.0,
    240.0, 184.0, 75.0, 253.0, 155.0, 187.0, 208.0, 367.0, 398.0, 118.0, 178.0, 165.0, 118.0,
    144.0, 181.0, 161.0, 320.0, 197.0, 127.0, 250.0, 240.0, 306.0, 275.0, 470.0, 174.0, 231.0,
    490.0, 351.0, 352.0, 365.0, 234.0, 162.0, 82.0, 346.0, 445.0, 317.0, 380.0, 218.0, 339.0,
    515.0, 312.0, 216.0, 218.0, 172.0, 290.0, 215.0, 80.0, 225.0, 44.0, 125.0, 181.0, 124.0,
    197.0, 300.0, 270.0, 221.0, 267.0, 152.0, 208.0, 267.0, 283.0, 318.0, 233.0, 59.0, 53.0,
    303.0, 56.0, 112.0, 53.0, 60.0, 163.0, 141.0, 206.0, 186.0, 267.0, 467.0, 174.0, 91.0, 110.0,
    133.0, 214.0, 121.0, 487.0, 156.0, 171.0, 293.0, 118.0, 72.0, 141.0, 118.0, 165.0, 134.0,
    190.0, 112.0, 191.0, 59.0, 227.0, 109.0, 237.0, 102.0, 242.0, 112.0, 165.0, 225.0, 202.0,
    96.0, 152.0, 106.0, 159.0, 82.0, 277.0, 180.0, 121.0, 53.0, 480.0, 437.0, 239.0, 112.0,
    109.0, 331.0, 389.0, 184.0, 306.0, 275.0, 147.0, 277.0, 230.0, 286.0, 302.0, 237.0, 433.0,
    442.0, 370.0, 274.0, 296.0, 292.0, 118.0, 32.0, 180.0, 147.0, 171.0, 246.0, 206.0, 325.0,
    91.0, 144.0, 224.0, 249.0, 239.0, 184.0, 272.0, 183.0, 121.0, 96.0, 53.0,
];

/// Default model parameters: the published economic/technical constants
/// plus calibrated defaults for the values the source never pins
/// (β, η, service radius, per-site cost, grid cap, served-vehicle bounds,
/// uniform arrival profile).
pub fn default_params() -> ModelParams {
    ModelParams {
        d: 234,
        t_year: 365.0,
        alpha: 0.08,
        cap_kwh: 80.0,
        soc_ref: 0.9,
        soc_0: 0.3,
        c_s: 1.0,
        c_p: 0.8,
        r: 0.03,
        t_life_years: 5.0,
        c_fast: 25_000.0,
        c_slow: 10_000.0,
        mu: 0.2,
        k_time: 17.0,
        v0_kmh: 40.0,
        g_kwh_per_km: 0.3,
        t_d_hours: 16.0,
        p_fast_kw: 80.0,
        p_slow_kw: 40.0,
        beta: 0.1,
        eta: 1.5,
        n_fast_min: 10,
        n_fast_max: 35,
        n_slow_min: 10,
        n_slow_max: 35,
        b_min: 50.0,
        b_max: 1200.0,
        p_max_kw: 100_000.0,
        r_service_km: 2.0,
        c_site_yuan: 680_000.0,
        arrival_profile: [1.0 / 24.0; 24],
    }
}

/// The bundled 234-road network on the synthetic grid. Road `id` sits at
/// grid cell (row, col) = ((id−1) / 18, (id−1) % 18), row-major.
pub fn bundled_network() -> RoadNetwork {
    let dx = AREA_KM / GRID_COLS as f64;
    let dy = AREA_KM / GRID_ROWS as f64;
    let roads: Vec<Road> = (0..GRID_ROWS * GRID_COLS)
        .map(|idx| {
            let row = idx / GRID_COLS;
            let col = idx % GRID_COLS;
            let mut neighbors = Vec::new();
            if row > 0 {
                neighbors.push(idx - GRID_COLS + 1);
            }
            if col > 0 {
                neighbors.push(idx);
            }
            if col + 1 < GRID_COLS {
                neighbors.push(idx + 2);
            }
            if row + 1 < GRID_ROWS {
                neighbors.push(idx + GRID_COLS + 1);
            }
            let flow = DAILY_FLOWS[idx];
            Road {
                id: idx + 1,
                daily_flow: flow,
                congestion_level: classify_congestion(flow).expect("table flows are nonnegative"),
                length_km: ROAD_LENGTH_KM,
                midpoint: ((col as f64 + 0.5) * dx, (row as f64 + 0.5) * dy),
                neighbors,
            }
        })
        .collect();
    let (network, warnings) = RoadNetwork::new(roads).expect("bundled dataset is well-formed");
    debug_assert!(warnings.is_empty(), "bundled dataset warnings: {warnings:?}");
    network
}
