//! Both objectives of the planning model: operator profit (income minus
//! annualized construction, pile, and O&M cost) and user additional cost
//! (congestion-aware travel time, in-station queueing, en-route energy).

use crate::error::{Error, Result};
use crate::model::{CostBreakdown, ModelParams, Plan, RoadNetwork};
use crate::traffic::{assign_demand, lambda_index, Assignment, DistanceMatrix};

/// Whether travel time uses per-road congestion multipliers or the
/// free-flow speed everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrafficMode {
    CongestionAware,
    FreeFlow,
}

/// Annualization factor r(1+r)^T / ((1+r)^T − 1).
pub fn capital_recovery_factor(r: f64, t_years: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::InvalidInput(format!("discount rate must be > 0 (got {r})")));
    }
    if t_years < 1.0 {
        return Err(Error::InvalidInput(format!("life must be ≥ 1 year (got {t_years})")));
    }
    let growth = (1.0 + r).powf(t_years);
    Ok(r * growth / (growth - 1.0))
}

/// Rated station capacity S_j = P_fast·nf + P_slow·ns, kW.
pub fn station_capacity(nf: u32, ns: u32, params: &ModelParams) -> f64 {
    f64::from(nf) * params.p_fast_kw + f64::from(ns) * params.p_slow_kw
}

/// Annual operating income I. Plan-independent: every road's charging
/// demand is sold at margin c_s − c_p (coverage shortfalls are feasibility
/// violations, not revenue modifiers).
pub fn operator_income(network: &RoadNetwork, params: &ModelParams) -> f64 {
    params.t_year
        * params.alpha
        * network.total_flow()
        * params.session_kwh()
        * (params.c_s - params.c_p)
}

/// Total pile purchase cost Σ_j (C_fast·nf_j + C_slow·ns_j), yuan.
pub fn pile_purchase_cost(plan: &Plan, params: &ModelParams) -> f64 {
    plan.open_indices()
        .iter()
        .map(|&j| f64::from(plan.nf[j]) * params.c_fast + f64::from(plan.ns[j]) * params.c_slow)
        .sum()
}

/// Annualized operator cost C1 = Σ_j [CRF·(C_j + C_cp,j) + μ·(C_j + C_cp,j)].
/// O&M is a fraction of the whole initial investment, site plus piles.
pub fn annualized_operator_cost(plan: &Plan, params: &ModelParams) -> Result<f64> {
    let crf = capital_recovery_factor(params.r, params.t_life_years)?;
    let mut total = 0.0;
    for j in plan.open_indices() {
        let pile = f64::from(plan.nf[j]) * params.c_fast + f64::from(plan.ns[j]) * params.c_slow;
        let investment = params.c_site_yuan + pile;
        total += (crf + params.mu) * investment;
    }
    Ok(total)
}

/// Annual O&M cost μ·Σ_j (C_j + C_cp,j).
pub fn om_cost(plan: &Plan, params: &ModelParams) -> f64 {
    params.mu * (params.c_site_yuan * plan.station_count() as f64 + pile_purchase_cost(plan, params))
}

/// Annual travel-time cost C_time1 = T_year·k·Σ λ_i·α·NUM_i·d_ij / v0
/// over assigned (road, station) pairs; λ comes from the origin road.
pub fn travel_time_cost(
    assignment: &Assignment,
    dm: &DistanceMatrix,
    network: &RoadNetwork,
    params: &ModelParams,
    mode: TrafficMode,
) -> f64 {
    let mut inner = 0.0;
    for (i, assigned) in assignment.station_of_road.iter().enumerate() {
        let Some(pos) = assigned else { continue };
        let j = assignment.stations[*pos];
        let lambda = match mode {
            TrafficMode::CongestionAware => lambda_index(network.road(i).congestion_level),
            TrafficMode::FreeFlow => 1.0,
        };
        inner += lambda * assignment.num_to_station[i] * dm.get(i, j);
    }
    params.t_year * params.k_time * inner / params.v0_kmh
}

/// Mean queue wait and utilization per hour slot for one station.
#[derive(Clone, Debug)]
pub struct QueueEstimate {
    /// Mean wait ΔT_tj per hour, h.
    pub wait_hours: [f64; 24],
    /// Offered load fraction ρ per hour.
    pub utilization: [f64; 24],
}

/// Erlang-C mean queue wait W_q for an M/M/c queue, hours.
/// Computed via the Erlang-B recurrence for numerical stability.
pub fn erlang_c_wait(servers: u32, arrivals_per_h: f64, service_rate_per_h: f64) -> f64 {
    if arrivals_per_h <= 0.0 {
        return 0.0;
    }
    let c = f64::from(servers);
    let a = arrivals_per_h / service_rate_per_h;
    let rho = a / c;
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    let mut b = 1.0;
    for k in 1..=servers {
        b = a * b / (f64::from(k) + a * b);
    }
    let p_wait = b / (1.0 - rho * (1.0 - b));
    p_wait / (c * service_rate_per_h - arrivals_per_h)
}

/// Per-hour stationary M/M/c estimate for one station. Piles are pooled
/// at the station's mean power; service rate per pile is mean power over
/// session energy. Waits are capped at the daily running hours; an hour
/// at utilization ≥ 0.999 takes the cap outright (saturation rule).
pub fn queue_wait(
    nf: u32,
    ns: u32,
    hourly_arrivals: &[f64; 24],
    params: &ModelParams,
) -> Result<QueueEstimate> {
    let servers = nf + ns;
    if servers == 0 {
        return Err(Error::InvalidInput("queue_wait requires at least one pile".into()));
    }
    let capacity = station_capacity(nf, ns, params);
    let mean_power = capacity / f64::from(servers);
    let service_rate = mean_power / params.session_kwh();
    let mut wait_hours = [0.0; 24];
    let mut utilization = [0.0; 24];
    for t in 0..24 {
        let lambda = hourly_arrivals[t];
        if lambda <= 0.0 {
            continue;
        }
        let rho = lambda / (f64::from(servers) * service_rate);
        utilization[t] = rho;
        wait_hours[t] = if rho >= 0.999 {
            params.t_d_hours
        } else {
            erlang_c_wait(servers, lambda, service_rate).min(params.t_d_hours)
        };
    }
    Ok(QueueEstimate { wait_hours, utilization })
}

/// Annual queue-time cost C_time2 = T_year·k·Σ_j Σ_t D_tj·ΔT_tj.
pub fn queue_time_cost(plan: &Plan, assignment: &Assignment, params: &ModelParams) -> Result<f64> {
    let mut inner = 0.0;
    for (pos, &j) in assignment.stations.iter().enumerate() {
        let est = queue_wait(plan.nf[j], plan.ns[j], &assignment.hourly_arrivals[pos], params)?;
        for t in 0..24 {
            inner += assignment.hourly_arrivals[pos][t] * est.wait_hours[t];
        }
    }
    Ok(params.t_year * params.k_time * inner)
}

/// Annual en-route energy cost C_loss = T_year·c_s·g·Σ α·NUM_i·d_ij.
/// Distance-based only; congestion does not enter.
pub fn energy_loss_cost(
    assignment: &Assignment,
    dm: &DistanceMatrix,
    params: &ModelParams,
) -> f64 {
    let mut inner = 0.0;
    for (i, assigned) in assignment.station_of_road.iter().enumerate() {
        let Some(pos) = assigned else { continue };
        let j = assignment.stations[*pos];
        inner += assignment.num_to_station[i] * dm.get(i, j);
    }
    params.t_year * params.c_s * params.g_kwh_per_km * inner
}

/// Evaluate both objectives for a plan. Pure: identical inputs give
/// identical breakdowns regardless of evaluation order.
pub fn evaluate(
    plan: &Plan,
    network: &RoadNetwork,
    dm: &DistanceMatrix,
    params: &ModelParams,
    mode: TrafficMode,
) -> Result<CostBreakdown> {
    let assignment = assign_demand(plan, dm, network, params)?;
    evaluate_with_assignment(plan, &assignment, network, dm, params, mode)
}

/// Same as [`evaluate`] when the assignment is already available.
pub fn evaluate_with_assignment(
    plan: &Plan,
    assignment: &Assignment,
    network: &RoadNetwork,
    dm: &DistanceMatrix,
    params: &ModelParams,
    mode: TrafficMode,
) -> Result<CostBreakdown> {
    let income = operator_income(network, params);
    let pile_cost_total = pile_purchase_cost(plan, params);
    let annual_cost = annualized_operator_cost(plan, params)?;
    let om_cost_total = om_cost(plan, params);
    let travel = travel_time_cost(assignment, dm, network, params, mode);
    let queue = queue_time_cost(plan, assignment, params)?;
    let energy = energy_loss_cost(assignment, dm, params);
    Ok(CostBreakdown {
        income,
        annual_cost,
        pile_cost_total,
        om_cost_total,
        travel_time_cost: travel,
        queue_time_cost: queue,
        energy_cost: energy,
        f1: annual_cost - income,
        f2: travel + queue + energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset;
    use crate::model::{classify_congestion, CongestionLevel, Road};
    use crate::traffic::build_distance_matrix;

    fn params() -> ModelParams {
        dataset::default_params()
    }

    #[test]
    fn crf_reference_values() {
        assert!((capital_recovery_factor(0.03, 5.0).unwrap() - 0.2183546).abs() < 1e-6);
        // zero-interest limit tends to 1/T
        assert!((capital_recovery_factor(1e-9, 5.0).unwrap() - 0.2).abs() < 1e-6);
        assert!((capital_recovery_factor(0.03, 1.0).unwrap() - 1.03).abs() < 1e-12);
        assert!(capital_recovery_factor(0.0, 5.0).is_err());
        assert!(capital_recovery_factor(-0.1, 5.0).is_err());
    }

    #[test]
    fn station_capacity_reproduces_plan_tables() {
        let p = params();
        assert_eq!(station_capacity(13, 21, &p), 1880.0);
        assert_eq!(station_capacity(22, 10, &p), 2160.0);
        assert_eq!(station_capacity(0, 0, &p), 0.0);
    }

    fn one_road_net(flow: f64, level: u8) -> RoadNetwork {
        let road = Road {
            id: 1,
            daily_flow: flow,
            congestion_level: CongestionLevel::new(level).unwrap(),
            length_km: 1.0,
            midpoint: (0.0, 0.0),
            neighbors: vec![],
        };
        RoadNetwork::new(vec![road]).unwrap().0
    }

    #[test]
    fn income_hand_arithmetic() {
        let p = params();
        let net = one_road_net(100.0, 1);
        // 365 · 0.08 · 100 · 80 · 0.6 · 0.2
        assert!((operator_income(&net, &p) - 28_032.0).abs() < 1e-9);
        let mut p0 = p.clone();
        p0.alpha = 1e-300; // α → 0 limit
        assert!(operator_income(&net, &p0) < 1e-290);
        // additivity over roads
        let roads: Vec<Road> = (1..=2)
            .map(|id| Road {
                id,
                daily_flow: 100.0,
                congestion_level: classify_congestion(100.0).unwrap(),
                length_km: 1.0,
                midpoint: (id as f64, 0.0),
                neighbors: vec![],
            })
            .collect();
        let net2 = RoadNetwork::new(roads).unwrap().0;
        assert!((operator_income(&net2, &p) - 56_064.0).abs() < 1e-9);
    }

    #[test]
    fn pile_cost_hand_arithmetic() {
        let p = params();
        let plan = Plan::new(vec![true], vec![13], vec![21]);
        assert_eq!(pile_purchase_cost(&plan, &p), 535_000.0);
        let empty = Plan::new(vec![false], vec![0], vec![0]);
        assert_eq!(pile_purchase_cost(&empty, &p), 0.0);
        let two = Plan::new(vec![true, true], vec![13, 13], vec![21, 21]);
        assert_eq!(pile_purchase_cost(&two, &p), 1_070_000.0);
    }

    #[test]
    fn annualized_cost_composes_crf_and_om() {
        let p = params();
        let plan = Plan::new(vec![true], vec![13], vec![21]);
        let c1 = annualized_operator_cost(&plan, &p).unwrap();
        assert!((c1 - 508_301.0).abs() < 1.0, "got {c1}");
        // doubling stations doubles C1
        let two = Plan::new(vec![true, true], vec![13, 13], vec![21, 21]);
        let c2 = annualized_operator_cost(&two, &p).unwrap();
        assert!((c2 - 2.0 * c1).abs() < 1e-6);
    }

    /// Two-road chain: demand road 1 (station at road 2), distance 2 km.
    fn two_road_fixture(level: u8) -> (RoadNetwork, DistanceMatrix, Plan) {
        let roads = vec![
            Road {
                id: 1,
                daily_flow: 100.0,
                congestion_level: CongestionLevel::new(level).unwrap(),
                length_km: 2.0,
                midpoint: (0.0, 0.0),
                neighbors: vec![2],
            },
            Road {
                id: 2,
                daily_flow: 1e-9,
                congestion_level: CongestionLevel::new(0).unwrap(),
                length_km: 2.0,
                midpoint: (2.0, 0.0),
                neighbors: vec![1],
            },
        ];
        let net = RoadNetwork::new(roads).unwrap().0;
        let dm = build_distance_matrix(&net).unwrap();
        let plan = Plan::new(vec![false, true], vec![0, 13], vec![0, 21]);
        (net, dm, plan)
    }

    #[test]
    fn travel_cost_hand_arithmetic() {
        let p = params();
        let (net, dm, plan) = two_road_fixture(4);
        let a = assign_demand(&plan, &dm, &net, &p).unwrap();
        let cost = travel_time_cost(&a, &dm, &net, &p, TrafficMode::CongestionAware);
        // 365 · 17 · (2.0 · 0.08·100 · 2 / 40), road 2's own demand is negligible
        assert!((cost - 4_964.0).abs() < 1e-3, "got {cost}");
        // free-flow mode halves the λ=2 road's cost
        let free = travel_time_cost(&a, &dm, &net, &p, TrafficMode::FreeFlow);
        assert!((free - 2_482.0).abs() < 1e-3, "got {free}");
        // λ=1 everywhere: congestion-aware equals free-flow exactly
        let (net0, dm0, plan0) = two_road_fixture(0);
        let a0 = assign_demand(&plan0, &dm0, &net0, &p).unwrap();
        let aware = travel_time_cost(&a0, &dm0, &net0, &p, TrafficMode::CongestionAware);
        let free0 = travel_time_cost(&a0, &dm0, &net0, &p, TrafficMode::FreeFlow);
        assert_eq!(aware, free0);
    }

    #[test]
    fn lambda_factored_form_equals_per_road_speed_form() {
        // Σ λ·w·d / v0 must equal Σ w·d / (v0/λ) to near machine precision.
        let p = params();
        let net = dataset::bundled_network();
        let dm = build_distance_matrix(&net).unwrap();
        let mut open = vec![false; net.len()];
        for idx in [19, 58, 90, 130, 170, 214] {
            open[idx] = true;
        }
        let nf: Vec<u32> = open.iter().map(|&o| if o { 12 } else { 0 }).collect();
        let ns = nf.clone();
        let plan = Plan::new(open, nf, ns);
        let mut p_wide = p.clone();
        p_wide.r_service_km = 1e9;
        let a = assign_demand(&plan, &dm, &net, &p_wide).unwrap();
        let factored = travel_time_cost(&a, &dm, &net, &p_wide, TrafficMode::CongestionAware);
        let mut per_speed = 0.0;
        for (i, assigned) in a.station_of_road.iter().enumerate() {
            let Some(pos) = assigned else { continue };
            let j = a.stations[*pos];
            let v_i = p_wide.v0_kmh / lambda_index(net.road(i).congestion_level);
            per_speed += a.num_to_station[i] * dm.get(i, j) / v_i;
        }
        per_speed *= p_wide.t_year * p_wide.k_time;
        assert!(((factored - per_speed) / per_speed).abs() < 1e-9);
    }

    #[test]
    fn erlang_c_closed_form_example() {
        // c=2, λ=1.5/h, μ=1/h: W_q = (9/14) / 0.5 = 9/7
        let w = erlang_c_wait(2, 1.5, 1.0);
        assert!((w - 9.0 / 7.0).abs() < 1e-12, "got {w}");
        assert_eq!(erlang_c_wait(2, 0.0, 1.0), 0.0);
        assert!(erlang_c_wait(2, 2.5, 1.0).is_infinite());
    }

    #[test]
    fn queue_wait_saturation_and_zero_rules() {
        let p = params();
        // ρ ≥ 0.999 takes the cap: 1 fast pile serves 80/48 = 5/3 per hour
        let mut arrivals = [0.0; 24];
        arrivals[0] = 2.0; // ρ = 1.2
        let est = queue_wait(1, 0, &arrivals, &p).unwrap();
        assert_eq!(est.wait_hours[0], p.t_d_hours);
        assert_eq!(est.wait_hours[1], 0.0);
        assert!(queue_wait(0, 0, &arrivals, &p).is_err());
    }

    #[test]
    fn queue_wait_monotone_in_piles() {
        let p = params();
        let arrivals = [3.0; 24];
        let mut prev = f64::INFINITY;
        for piles in [2u32, 3, 5, 8, 13] {
            let est = queue_wait(piles, piles, &arrivals, &p).unwrap();
            assert!(est.wait_hours[0] <= prev + 1e-12);
            prev = est.wait_hours[0];
        }
    }

    #[test]
    fn queue_cost_hand_arithmetic() {
        // Station with 1 fast + 1 slow pile on 100 kWh · 0.6 ΔSOC sessions:
        // mean power 60 kW, μ_s = 1/h, c = 2. δ = 36/day uniform → λ = 1.5/h,
        // W_q = 9/7 h. Cost = 365·17·24·1.5·9/7.
        let mut p = params();
        p.cap_kwh = 100.0;
        let road = Road {
            id: 1,
            daily_flow: 36.0 / p.alpha,
            congestion_level: CongestionLevel::new(0).unwrap(),
            length_km: 1.0,
            midpoint: (0.0, 0.0),
            neighbors: vec![],
        };
        let net = RoadNetwork::new(vec![road]).unwrap().0;
        let dm = build_distance_matrix(&net).unwrap();
        let plan = Plan::new(vec![true], vec![1], vec![1]);
        let a = assign_demand(&plan, &dm, &net, &p).unwrap();
        let cost = queue_time_cost(&plan, &a, &p).unwrap();
        let expected = 365.0 * 17.0 * 24.0 * 1.5 * (9.0 / 7.0);
        assert!(((cost - expected) / expected).abs() < 1e-12, "got {cost} want {expected}");
        // doubling k doubles the cost
        let mut p2 = p.clone();
        p2.k_time *= 2.0;
        let cost2 = queue_time_cost(&plan, &a, &p2).unwrap();
        assert!(((cost2 - 2.0 * cost) / cost).abs() < 1e-12);
    }

    #[test]
    fn energy_cost_hand_arithmetic() {
        let p = params();
        let (net, dm, plan) = two_road_fixture(4);
        let a = assign_demand(&plan, &dm, &net, &p).unwrap();
        let cost = energy_loss_cost(&a, &dm, &p);
        // 365 · 1 · 0.3 · (0.08·100 · 2)
        assert!((cost - 1_752.0).abs() < 1e-3, "got {cost}");
        let mut p0 = p.clone();
        p0.g_kwh_per_km = 0.0;
        assert_eq!(energy_loss_cost(&a, &dm, &p0), 0.0);
        // independent of congestion level
        let (net0, dm0, plan0) = two_road_fixture(0);
        let a0 = assign_demand(&plan0, &dm0, &net0, &p).unwrap();
        assert!((energy_loss_cost(&a0, &dm0, &p) - cost).abs() < 1e-9);
    }

    #[test]
    fn evaluate_single_road_toy() {
        let p = params();
        let net = one_road_net(100.0, 4);
        let dm = build_distance_matrix(&net).unwrap();
        let plan = Plan::new(vec![true], vec![13], vec![21]);
        let b = evaluate(&plan, &net, &dm, &p, TrafficMode::CongestionAware).unwrap();
        assert!((b.f1 - 480_269.0).abs() < 1.0, "got {}", b.f1);
        assert_eq!(b.travel_time_cost, 0.0);
        assert_eq!(b.energy_cost, 0.0);
        assert!(b.queue_time_cost >= 0.0);
        assert_eq!(b.f2, b.queue_time_cost);
        // decomposition is exact
        assert_eq!(b.f1, b.annual_cost - b.income);
        assert_eq!(b.f2, b.travel_time_cost + b.queue_time_cost + b.energy_cost);
    }
}
