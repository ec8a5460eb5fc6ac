//! Cost of finite-speed gap switches: linear ramps of duration tau replace
//! the instantaneous quenches and the power deficit grows linearly in tau.

use ottokit::finite_time::quench_power;
use ottokit::optimize::max_power;
use ottokit::thermo::{BathPair, ConstraintBox, OperatingMode, RateModel};

fn main() -> ottokit::Result<()> {
    let baths = BathPair::from_parts(
        1.0,
        RateModel::FermiPower { k: 1.0, n: 0 },
        2.0,
        RateModel::FermiPower { k: 1.0, n: 0 },
    )?;
    let gap_box = ConstraintBox::new(1e-3, 30.0)?;
    let opt = max_power(OperatingMode::Engine, &baths, &gap_box)?;
    let (eps_h, eps_c) = (opt.eps_h.unwrap(), opt.eps_c.unwrap());
    println!(
        "engine optimum at gaps ({:.4}, {:.4}), fast-cycle power {:.6e}",
        eps_h, eps_c, opt.max_power
    );

    let dt = 4e-3;
    println!("contact time dt = {dt}, ramp duration tau per switch");
    println!();
    println!(
        "{:>10} {:>14} {:>14} {:>12}",
        "tau/dt", "power", "deficit", "deficit/(tau/dt)"
    );
    let mut lnx = Vec::new();
    let mut lny = Vec::new();
    for i in 0..8 {
        let f = 0.01 * 10f64.powf(i as f64 / 7.0);
        let report = quench_power(
            eps_h,
            eps_c,
            dt / 2.0,
            dt / 2.0,
            f * dt,
            &baths,
            OperatingMode::Engine,
        )?;
        println!(
            "{:>10.4} {:>14.8e} {:>14.6e} {:>12.4}",
            f,
            report.power,
            report.deficit,
            report.deficit / f
        );
        lnx.push(f.ln());
        lny.push(report.deficit.ln());
    }
    let n = lnx.len() as f64;
    let xm = lnx.iter().sum::<f64>() / n;
    let ym = lny.iter().sum::<f64>() / n;
    let slope = lnx
        .iter()
        .zip(&lny)
        .map(|(x, y)| (x - xm) * (y - ym))
        .sum::<f64>()
        / lnx.iter().map(|x| (x - xm) * (x - xm)).sum::<f64>();
    println!();
    println!("log-log slope {slope:.3}: the leading correction is first order");
    println!("in the switching time, so fast ramps cost almost nothing.");
    Ok(())
}
