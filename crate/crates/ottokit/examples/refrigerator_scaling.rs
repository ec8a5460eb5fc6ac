//! Deep-cooling asymptotics: the maximum cooling power follows a power law
//! in the cold temperature with a universal dimensionless prefactor.

use ottokit::analysis::refrigerator_power_law;
use ottokit::optimize::max_power;
use ottokit::thermo::{BathPair, ConstraintBox, OperatingMode, RateModel};

fn main() -> ottokit::Result<()> {
    let model = RateModel::FermiPower { k: 1.0, n: 1 };
    let law = refrigerator_power_law(&model, 1.0, 1.0)?;
    println!(
        "linear-response cold bath: P_max = {:.6} k_C T_C^{}, cold gap at {:.4} T_C",
        law.c_n, law.exponent, law.x_c
    );
    println!();

    // Direct optimization converges onto the law as the cold bath deepens;
    // the box cap on the hot gap costs a factor (1 + sqrt(G_C/G_H))^-2,
    // so it must grow generously with beta_c.
    println!(
        "{:>8} {:>14} {:>14} {:>10}",
        "beta_c", "P_max", "P * beta_c^2", "law ratio"
    );
    for &beta_c in &[5.0, 10.0, 20.0, 40.0, 80.0] {
        let baths = BathPair::from_parts(1.0, model.clone(), beta_c, model.clone())?;
        let gap_box = ConstraintBox::new(1e-6, 200.0 * beta_c)?;
        let opt = max_power(OperatingMode::Refrigerator, &baths, &gap_box)?;
        let scaled = opt.max_power * beta_c * beta_c;
        println!(
            "{:>8.0} {:>14.6e} {:>14.6} {:>10.4}",
            beta_c,
            opt.max_power,
            scaled,
            scaled / law.c_n
        );
    }
    println!();

    // Above linear order the hot stroke saturates, so the prefactor cannot
    // see the coupling-amplitude ratio.
    println!("prefactor against the hot/cold amplitude ratio:");
    println!("{:>10} {:>12} {:>12}", "ratio", "fermi_1", "fermi_0");
    for &r in &[0.1, 1.0, 10.0] {
        let linear = refrigerator_power_law(&RateModel::FermiPower { k: 1.0, n: 1 }, 1.0, r)?;
        let constant = refrigerator_power_law(&RateModel::FermiPower { k: 1.0, n: 0 }, 1.0, r)?;
        println!("{:>10.1} {:>12.8} {:>12.8}", r, linear.c_n, constant.c_n);
    }
    println!();
    println!("only the constant-rate family keeps an amplitude-ratio memory:");
    println!("its hot stroke never outruns the cold one.");
    Ok(())
}
