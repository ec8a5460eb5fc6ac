//! Solve the periodic steady state of a square-wave drive and compare its
//! average currents with the infinitesimal-period prediction.

use ottokit::dynamics::{average_power, gap_work_per_period, limit_cycle, Protocol};
use ottokit::optimize::{ideal_average_currents, ideal_mode_power, optimal_time_split};
use ottokit::thermo::{BathPair, OperatingMode, RateModel};

fn main() -> ottokit::Result<()> {
    let baths = BathPair::from_parts(
        1.0,
        RateModel::Constant { k: 1.0 },
        2.0,
        RateModel::Constant { k: 4.0 },
    )?;
    let (eps_h, eps_c) = (2.0, 1.5);
    let theta = optimal_time_split(baths.hot.rate(eps_h)?, baths.cold.rate(eps_c)?)?;
    println!("square-wave cycle at gaps ({eps_h}, {eps_c}), hot-stroke fraction {theta:.4}");
    println!();
    println!("{:>10} {:>12} {:>14} {:>14} {:>14}", "period", "contraction", "J_hot", "J_cold", "P_engine");
    for exp in [-3, -2, -1, 0] {
        let dt = 10f64.powi(exp);
        let protocol = Protocol::square_wave(eps_h, eps_c, theta * dt, (1.0 - theta) * dt)?;
        let cycle = limit_cycle(&protocol, &baths)?;
        println!(
            "{:>10.0e} {:>12.6} {:>14.6e} {:>14.6e} {:>14.6e}",
            dt,
            cycle.contraction,
            cycle.avg_j_hot,
            cycle.avg_j_cold,
            average_power(&cycle, OperatingMode::Engine),
        );
    }
    let (jh, jc) = ideal_average_currents(eps_h, eps_c, &baths)?;
    println!("{:>10} {:>12} {:>14.6e} {:>14.6e} {:>14.6e}", "dt -> 0", "1.000000", jh, jc,
        ideal_mode_power(OperatingMode::Engine, eps_h, eps_c, &baths)?);
    println!();

    // Energy balance on one closed orbit: gap work equals the net heat.
    let dt = 0.1;
    let protocol = Protocol::square_wave(eps_h, eps_c, theta * dt, (1.0 - theta) * dt)?;
    let cycle = limit_cycle(&protocol, &baths)?;
    let work = gap_work_per_period(&cycle, &baths)?;
    let heat = (cycle.avg_j_hot + cycle.avg_j_cold) * dt;
    println!("closed-orbit energy balance at dt = {dt}:");
    println!("  work done on the system  {work:>14.6e}");
    println!("  net heat absorbed        {heat:>14.6e}");
    println!("  residual                 {:>14.6e}", work + heat);
    Ok(())
}
