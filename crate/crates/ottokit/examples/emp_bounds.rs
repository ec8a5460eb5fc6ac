//! Efficiency at maximum power across the temperature range for the four
//! power-law rate families, against the classic bounds.

use ottokit::analysis::{carnot_bounds, emp};
use ottokit::thermo::{BathPair, ConstraintBox, RateModel};

fn main() -> ottokit::Result<()> {
    let models: [(&str, RateModel); 4] = [
        ("fermi_0", RateModel::FermiPower { k: 1.0, n: 0 }),
        ("fermi_1", RateModel::FermiPower { k: 1.0, n: 1 }),
        (
            "bose_0",
            RateModel::BosePower {
                k: 1.0,
                n: 0,
                eps_floor: 1e-9,
            },
        ),
        (
            "bose_1",
            RateModel::BosePower {
                k: 1.0,
                n: 1,
                eps_floor: 1e-9,
            },
        ),
    ];
    let gap_box = ConstraintBox::new(1e-3, 60.0)?;
    println!("efficiency at maximum power over Carnot efficiency");
    println!();
    print!("{:>7}", "eta_c");
    for (name, _) in &models {
        print!(" {name:>9}");
    }
    println!(" {:>9} {:>9} {:>9}", "half", "sqrt", "strong");
    for &eta_c in &[0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let beta_c = 1.0 / (1.0 - eta_c);
        print!("{eta_c:>7.2}");
        for (_, model) in &models {
            let baths = BathPair::from_parts(1.0, model.clone(), beta_c, model.clone())?;
            let report = emp(&baths, &gap_box)?;
            print!(" {:>9.4}", report.eta / eta_c);
        }
        let bounds = carnot_bounds(1.0, beta_c)?;
        println!(
            " {:>9.4} {:>9.4} {:>9.4}",
            0.5,
            bounds.eta_ca / eta_c,
            bounds.eta_ss / eta_c
        );
    }
    println!();
    println!("every family starts at half Carnot and stays below the strong-");
    println!("coupling bound eta_c / (2 - eta_c); the constant and sublinear");
    println!("families overtake the square-root bound at large differences.");
    Ok(())
}
