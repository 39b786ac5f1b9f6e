//! Road geometry: congestion multipliers, all-pairs travel distances over
//! the road graph, and nearest-station demand assignment.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::{CongestionLevel, ModelParams, Plan, RoadNetwork};

/// Per-band driving speeds, km/h (clear road first).
pub const BAND_SPEEDS_KMH: [f64; 5] = [40.0, 28.0, 25.0, 22.0, 20.0];

/// Road time-consuming index λ: congested travel time as a multiple of
/// free-flow travel time. λ = 40 / speed(level).
pub fn lambda_index(level: CongestionLevel) -> f64 {
    BAND_SPEEDS_KMH[0] / BAND_SPEEDS_KMH[level.as_u8() as usize]
}

/// Actual driving speed on a road: v = v0 / λ.
pub fn travel_speed(level: CongestionLevel, v0_kmh: f64) -> f64 {
    v0_kmh / lambda_index(level)
}

/// All-pairs shortest travel distances between road midpoints, km.
/// Edge weight between adjacent roads i, j is (length_i + length_j) / 2.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
    has_unreachable: bool,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Distance from road i's midpoint to candidate site j (0-based).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// True when the road graph is disconnected (some pairs are +∞).
    pub fn has_unreachable(&self) -> bool {
        self.has_unreachable
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from every road over the adjacency graph.
pub fn build_distance_matrix(network: &RoadNetwork) -> Result<DistanceMatrix> {
    let n = network.len();
    if n == 0 {
        return Err(Error::Validation("cannot build distances for an empty network".into()));
    }
    let adj: Vec<Vec<(usize, f64)>> = network
        .roads()
        .iter()
        .map(|road| {
            road.neighbors
                .iter()
                .filter(|&&nb| nb != road.id)
                .map(|&nb| {
                    let other = network.road(nb - 1);
                    (nb - 1, (road.length_km + other.length_km) / 2.0)
                })
                .collect()
        })
        .collect();

    let mut d = vec![f64::INFINITY; n * n];
    for src in 0..n {
        let row = &mut d[src * n..(src + 1) * n];
        row[src] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapEntry { dist: 0.0, node: src });
        while let Some(HeapEntry { dist, node }) = heap.pop() {
            if dist > row[node] {
                continue;
            }
            for &(next, w) in &adj[node] {
                let cand = dist + w;
                if cand < row[next] {
                    row[next] = cand;
                    heap.push(HeapEntry { dist: cand, node: next });
                }
            }
        }
    }
    let has_unreachable = d.iter().any(|v| v.is_infinite());
    Ok(DistanceMatrix { n, d, has_unreachable })
}

/// Demand routed to open stations: each road's daily charging demand
/// α·NUM_i goes entirely to its nearest open station; roads farther than
/// the service radius from every open station are flagged uncovered.
#[derive(Clone, Debug)]
pub struct Assignment {
    /// Open station road-indices, ascending (0-based).
    pub stations: Vec<usize>,
    /// For each road: position into `stations` of its assigned station.
    /// `None` only when the road is unreachable from every station.
    pub station_of_road: Vec<Option<usize>>,
    /// Charging vehicles/day routed from road i to its station (α·NUM_i).
    pub num_to_station: Vec<f64>,
    /// Charging vehicles/day served per station: δ_j = Σ_i num_ij.
    pub delta: Vec<f64>,
    /// Per (station, hour) arrivals: D_tj = δ_j · arrival_profile[t].
    pub hourly_arrivals: Vec<[f64; 24]>,
    /// Roads (0-based) whose nearest open station exceeds the service radius.
    pub uncovered: Vec<usize>,
}

impl Assignment {
    /// Total demand flagged uncovered, charging vehicles/day.
    pub fn uncovered_demand(&self, network: &RoadNetwork, params: &ModelParams) -> f64 {
        self.uncovered.iter().map(|&i| params.alpha * network.road(i).daily_flow).sum()
    }
}

/// Assign every road's charging demand to its nearest open station
/// (ties broken toward the lower station index).
pub fn assign_demand(
    plan: &Plan,
    dm: &DistanceMatrix,
    network: &RoadNetwork,
    params: &ModelParams,
) -> Result<Assignment> {
    let stations = plan.open_indices();
    if stations.is_empty() {
        return Err(Error::InvalidInput("assign_demand requires at least one open station".into()));
    }
    let n = network.len();
    let mut station_of_road = vec![None; n];
    let mut num_to_station = vec![0.0; n];
    let mut delta = vec![0.0; stations.len()];
    let mut uncovered = Vec::new();
    for i in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for (pos, &j) in stations.iter().enumerate() {
            let d = dm.get(i, j);
            match best {
                Some((_, bd)) if d >= bd => {}
                _ => best = Some((pos, d)),
            }
        }
        let (pos, d) = best.unwrap();
        if d.is_infinite() {
            uncovered.push(i);
            continue;
        }
        let demand = params.alpha * network.road(i).daily_flow;
        if d > params.r_service_km {
            uncovered.push(i);
        } else {
            station_of_road[i] = Some(pos);
            num_to_station[i] = demand;
            delta[pos] += demand;
        }
    }
    let hourly_arrivals = delta
        .iter()
        .map(|&dj| {
            let mut row = [0.0; 24];
            for (t, w) in params.arrival_profile.iter().enumerate() {
                row[t] = dj * w;
            }
            row
        })
        .collect();
    Ok(Assignment { stations, station_of_road, num_to_station, delta, hourly_arrivals, uncovered })
}
