//! Maximize the fast-cycle power of each operating mode over a gap box and
//! report the optima with their efficiencies.

use ottokit::analysis::carnot_bounds;
use ottokit::optimize::max_power;
use ottokit::thermo::{BathPair, ConstraintBox, OperatingMode, RateModel};

fn main() -> ottokit::Result<()> {
    // Narrow energy filters: transport confined to windows around the two
    // peak gaps turns the engine optimum into a sharp interior basin.
    let filter = |eps_bar: f64| RateModel::Lorentzian {
        gamma: 1.0,
        sigma: 0.15,
        eps_bar,
    };
    let baths = BathPair::from_parts(1.0, filter(2.0), 2.0, filter(1.0))?;
    let gap_box = ConstraintBox::new(0.5, 3.5)?;
    println!("energy-filter baths, peaks at (2, 1), inverse temperatures (1, 2)");
    println!();
    println!(
        "{:>14} {:>12} {:>10} {:>10} {:>8}",
        "mode", "max power", "eps_h*", "eps_c*", "split"
    );
    for mode in [
        OperatingMode::Engine,
        OperatingMode::Refrigerator,
        OperatingMode::Accelerator,
        OperatingMode::Heater,
    ] {
        let opt = max_power(mode, &baths, &gap_box)?;
        match (opt.eps_h, opt.eps_c, opt.time_split) {
            (Some(eh), Some(ec), Some(split)) => println!(
                "{:>14} {:>12.6e} {:>10.4} {:>10.4} {:>8.4}",
                format!("{mode:?}"),
                opt.max_power,
                eh,
                ec,
                split
            ),
            _ => println!("{:>14} {:>12}", format!("{mode:?}"), "infeasible"),
        }
    }
    println!();

    let engine = max_power(OperatingMode::Engine, &baths, &gap_box)?;
    let (eh, ec) = (engine.eps_h.unwrap(), engine.eps_c.unwrap());
    let bounds = carnot_bounds(1.0, 2.0)?;
    println!("engine efficiency at maximum power: {:.4}", 1.0 - ec / eh);
    println!("  half Carnot      {:.4}", bounds.eta_carnot / 2.0);
    println!("  square-root      {:.4}", bounds.eta_ca);
    println!("  strong coupling  {:.4}", bounds.eta_ss);
    println!("  Carnot           {:.4}", bounds.eta_carnot);
    println!();
    println!("narrow filters push the engine beyond every finite-power bound;");
    println!("only the Carnot ceiling itself survives.");
    Ok(())
}
